#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cyclecert/io.hpp"
#include "cyclecert/probe.hpp"

using namespace cyclecert;

namespace {

constexpr int kCertified = 0;
constexpr int kNotCertified = 1;
constexpr int kInputError = 2;
constexpr int kProbeFailure = 3;

struct Loaded {
  io::SystemFile file;
  io::Params params;
  SystemSpec system;
};

Loaded load(const std::string& path, const std::vector<std::string>& sets) {
  io::SystemFile f = io::load_system_file(path);
  io::Params overrides;
  for (const auto& s : sets) {
    auto [k, v] = io::parse_assignment(s);
    overrides[k] = v;
  }
  io::Params params = io::resolve_params(f, overrides);
  SystemSpec sys = io::build_system(f, params);
  return {std::move(f), std::move(params), std::move(sys)};
}

std::string interval_text(const RatInterval& iv) {
  std::ostringstream os;
  os << std::setprecision(10);
  if (iv.exact()) {
    os << iv.lo.get_d();
  } else {
    os << "(" << iv.lo.get_d() << ", " << iv.hi.get_d() << "]";
  }
  return os.str();
}

void print_report(std::ostream& os, const std::string& name, const Certificate& c) {
  os << "system: " << name << "\n";
  os << "p(s) = " << to_string(c.p, 's') << "\n";
  if (c.pair) {
    os << "pair: k = " << to_string(c.pair->k()) << ", w(r) = " << to_string(c.pair->w(), 'r') << "\n";
    os << "p_{k,w}(r) = " << to_string(c.defect, 'r') << "\n";
    if (!c.phi.is_zero()) os << "Phi(r) = " << to_string(c.phi, 'r') << "\n";
    os << "m+ = " << c.m_plus << "\n";
  }
  for (const auto& n : c.notes) os << "note: " << n << "\n";
  if (!c.rings.empty()) {
    os << "rings (boundaries are radii r with w(r) = 0):\n";
    os << "  " << std::left << std::setw(4) << "#" << std::setw(30) << "inner" << std::setw(30) << "outer"
       << std::setw(6) << "w" << std::setw(36) << "cycles" << std::setw(10) << "stability"
       << "critical points\n";
    for (std::size_t i = 0; i < c.rings.size(); ++i) {
      const auto& r = c.rings[i];
      os << "  " << std::left << std::setw(4) << i << std::setw(30)
         << (r.simply_connected ? std::string("0 (disc)") : interval_text(r.inner)) << std::setw(30)
         << (r.outer ? interval_text(*r.outer) : std::string("inf")) << std::setw(6) << (r.w_sign < 0 ? "-" : "+")
         << std::setw(36) << to_string(r.cycle_prediction) << std::setw(10) << to_string(r.stability_if_exists)
         << to_string(r.contains_critical_points) << "\n";
    }
  }
  if (c.verdict.certified) {
    os << "verdict: at most " << *c.upper_bound << " limit cycle" << (*c.upper_bound == 1 ? "" : "s")
       << ", all hyperbolic";
    if (c.lower_bound) os << "; at least " << *c.lower_bound << " (C = " << *c.C << ")";
    os << "\n";
  } else {
    os << "verdict: not certified (" << c.verdict.stage << ")\n";
  }
}

std::vector<Point2> critical_point_list(const SystemSpec& sys, std::vector<std::string>& notes) {
  try {
    std::vector<Point2> out;
    for (const auto& cp : probe::critical_points(sys, std::numeric_limits<double>::infinity())) {
      out.push_back({cp.x, cp.y});
    }
    return out;
  } catch (const probe::DegenerateResultant& e) {
    notes.emplace_back(std::string("lower bound unavailable: ") + e.what());
    return {};
  }
}

int jobs_from(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("CYCLECERT_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads; results land in index order.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, int jobs, Fn fn) {
  std::vector<T> out(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) out[i] = fn(i);
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

struct CertifyArgs {
  std::string file;
  std::optional<std::string> k;
  std::optional<std::string> w;
  std::string json_out;
  bool quiet = false;
  std::vector<std::string> sets;
};

int cmd_certify(const CertifyArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  Loaded in = load(a.file, a.sets);
  std::optional<DulacPair> pair = io::build_pair(in.file, in.params);
  if (a.w && !a.k) throw io::InputError("--w needs --k");
  if (a.k) {
    const Rat k = io::eval_expr(*a.k, in.params);
    if (a.w) {
      std::vector<std::string> coeffs;
      std::stringstream ss(*a.w);
      for (std::string part; std::getline(ss, part, ',');) coeffs.push_back(part);
      pair = DulacPair(k, io::build_univariate(coeffs, in.params));
    } else {
      pair = DulacPair(k, derivative_weight(radial_average(to_polar(in.system))));
    }
  }
  Certificate cert = certify(in.system, pair);
  if (cert.verdict.certified) lower_bound(cert, critical_point_list(in.system, cert.notes));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!a.quiet) print_report(std::cout, in.file.name, cert);
  if (!a.json_out.empty()) {
    const io::Json doc = io::certificate_json(cert, {in.file.name, seconds});
    if (a.json_out == "-") {
      std::cout << doc.dump(2) << "\n";
    } else {
      std::ofstream out(a.json_out);
      if (!out) throw io::InputError("cannot write " + a.json_out);
      out << doc.dump(2) << "\n";
    }
  }
  if (!cert.verdict.certified) {
    std::cerr << "not certified: " << cert.verdict.reason << "\n";
    return kNotCertified;
  }
  return kCertified;
}

struct ProbeArgs {
  std::string file;
  double r_max = 0.0;
  double tol = 1e-10;
  std::string csv_dir;
  std::vector<std::string> sets;
};

int cmd_probe(const ProbeArgs& a) {
  Loaded in = load(a.file, a.sets);
  if (!(a.tol > 0.0)) throw io::InputError("--tol must be positive");
  probe::FindOptions opt;
  opt.r_max = a.r_max;
  opt.tol = a.tol;
  std::vector<probe::CriticalPoint> crit;
  try {
    crit = probe::critical_points(in.system, std::numeric_limits<double>::infinity());
  } catch (const probe::DegenerateResultant& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  }
  probe::CycleSearch search;
  try {
    opt.section_angle = probe::choose_section_angle(crit);
    search = probe::find_cycles(in.system, opt);
  } catch (const probe::ProbeError& e) {
    std::cerr << "probe failed: " << e.what() << "\n";
    return kProbeFailure;
  }

  std::cout << "system: " << in.file.name << "\n";
  std::cout << std::setprecision(10);
  std::cout << "critical points: " << crit.size() << "\n";
  for (const auto& c : crit) {
    std::cout << "  (" << c.x << ", " << c.y << ")  residual " << c.residual << "  " << probe::to_string(c.status)
              << "\n";
  }
  std::cout << "section angle: " << search.section_angle << ", r_max: " << search.r_max << "\n";
  std::cout << "cycles: " << search.cycles.size() << "\n";
  for (const auto& c : search.cycles) {
    std::cout << "  radius " << std::fixed << std::setprecision(6) << c.section_radius << std::defaultfloat
              << std::setprecision(6) << "  " << to_string(c.stability) << "  return_derivative "
              << c.return_derivative << "  divergence_integral " << c.divergence_integral << "  period "
              << c.period_estimate << "  r in [" << c.min_radius << ", " << c.max_radius << "]\n";
  }
  std::size_t failed = 0;
  for (const auto& s : search.samples) failed += s.ok ? 0 : 1;
  if (failed) std::cout << "forward samples without return: " << failed << " of " << search.samples.size() << "\n";

  if (!a.csv_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(a.csv_dir);
    {
      std::ofstream out(fs::path(a.csv_dir) / "displacement.csv");
      probe::write_displacement_csv(out, search);
    }
    {
      std::ofstream out(fs::path(a.csv_dir) / "findings.csv");
      probe::write_findings_csv(out, search);
    }
    for (std::size_t i = 0; i < search.cycles.size(); ++i) {
      const auto& c = search.cycles[i];
      const Point2 start{c.section_radius * std::cos(search.section_angle),
                         c.section_radius * std::sin(search.section_angle)};
      try {
        const auto traj = probe::integrate(in.system, start, c.period_estimate, a.tol, 1e6, c.stability == Stability::unstable);
        std::ofstream out(fs::path(a.csv_dir) / ("trajectory_" + std::to_string(i) + ".csv"));
        probe::write_trajectory_csv(out, traj);
      } catch (const probe::ProbeError& e) {
        std::cerr << "trajectory " << i << ": " << e.what() << "\n";
      }
    }
  }
  return 0;
}

struct SweepArgs {
  std::string file;
  std::string param;
  std::string grid;
  std::string eps_grid;
  int jobs = 0;
  std::vector<std::string> sets;
};

int cmd_sweep(const SweepArgs& a) {
  const io::SystemFile f = io::load_system_file(a.file);
  io::Params fixed;
  for (const auto& s : a.sets) {
    auto [k, v] = io::parse_assignment(s);
    fixed[k] = v;
  }
  const int jobs = jobs_from(a.jobs);

  if (!a.eps_grid.empty()) {
    if (!a.param.empty() || !a.grid.empty()) throw io::InputError("--eps-grid excludes --param/--grid");
    if (!f.rotational || !f.perturbation) throw io::InputError("--eps-grid needs a rotational part and a perturbation");
    const auto grid = io::parse_grid(a.eps_grid);
    const io::Params params = io::resolve_params(f, fixed);
    const auto [Pt, Qt] = io::perturbation_of(f, params);
    const MarginResult m = certification_margin(io::build_univariate(f.rotational->u, params),
                                                io::build_univariate(f.rotational->v, params), Pt, Qt, grid);
    std::cout << "k = " << (m.k ? to_string(*m.k) : std::string("none")) << "\n";
    std::cout << std::left << std::setw(16) << "eps" << std::setw(12) << "certified" << std::setw(8) << "bound"
              << "reason\n";
    for (const auto& r : m.rows) {
      std::cout << std::left << std::setw(16) << to_string(r.eps) << std::setw(12) << (r.certified ? "yes" : "no")
                << std::setw(8) << (r.upper_bound ? std::to_string(*r.upper_bound) : "-") << r.reason << "\n";
    }
    std::cout << "margin: " << (m.largest_certified ? to_string(*m.largest_certified) : std::string("none"))
              << (m.prefix ? " (certified set is a prefix of the grid)" : " (certified set is NOT a prefix)") << "\n";
    return 0;
  }

  if (a.param.empty() || a.grid.empty()) throw io::InputError("sweep needs --param and --grid, or --eps-grid");
  if (!f.has_param(a.param)) throw io::InputError("unknown parameter '" + a.param + "'");
  const auto grid = io::parse_grid(a.grid);
  struct Row {
    bool certified = false;
    std::optional<int> bound;
    std::string k;
    std::string stage;
    std::string error;
  };
  const auto rows = parallel_map<Row>(grid.size(), jobs, [&](std::size_t i) {
    Row row;
    try {
      io::Params over = fixed;
      over[a.param] = grid[i];
      const io::Params params = io::resolve_params(f, over);
      const Certificate c = certify(io::build_system(f, params), io::build_pair(f, params));
      row.certified = c.verdict.certified;
      row.bound = c.upper_bound;
      row.k = c.pair ? to_string(c.pair->k()) : "-";
      row.stage = c.verdict.certified ? "" : c.verdict.stage;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    return row;
  });
  std::cout << std::left << std::setw(16) << a.param << std::setw(12) << "certified" << std::setw(8) << "bound"
            << std::setw(8) << "k"
            << "stage\n";
  std::size_t n_ok = 0;
  std::optional<Rat> lo, hi;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& r = rows[i];
    std::cout << std::left << std::setw(16) << to_string(grid[i]) << std::setw(12) << (r.certified ? "yes" : "no")
              << std::setw(8) << (r.bound ? std::to_string(*r.bound) : "-") << std::setw(8) << r.k
              << (r.error.empty() ? r.stage : "error: " + r.error) << "\n";
    if (r.certified) {
      ++n_ok;
      if (!lo) lo = grid[i];
      hi = grid[i];
    }
  }
  std::cout << "certified " << n_ok << " of " << grid.size();
  if (lo) std::cout << ", " << a.param << " in [" << to_string(*lo) << ", " << to_string(*hi) << "]";
  std::cout << "\n";
  return 0;
}

int cmd_verify(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::InputError("cannot open " + path);
  io::Json doc;
  try {
    doc = io::Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw io::InputError(path + ": " + e.what());
  }
  const io::VerifyReport rep = io::verify_certificate(doc);
  for (const auto& f : rep.failures) std::cerr << "mismatch: " << f << "\n";
  std::cout << "claimed: " << (rep.claimed ? "certified" : "not certified")
            << ", recomputed: " << (rep.verified ? "certified" : "not certified") << "\n";
  return rep.agrees() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limit-cycle upper bounds for planar polynomial systems via Dulac functions"};
  app.set_version_flag("--version", std::string(CYCLECERT_VERSION));
  app.require_subcommand(1);

  CertifyArgs ca;
  auto* certify_cmd = app.add_subcommand("certify", "certify an upper bound on the number of limit cycles");
  certify_cmd->add_option("file", ca.file, "system file (JSON)")->required();
  certify_cmd->add_option("--k", ca.k, "exponent k of the Dulac pair");
  certify_cmd->add_option("--w", ca.w, "comma-separated coefficients of w(r), ascending powers");
  certify_cmd->add_option("--json", ca.json_out, "write the certificate document (\"-\" for stdout)");
  certify_cmd->add_flag("--quiet", ca.quiet, "suppress the report");
  certify_cmd->add_option("--set", ca.sets, "override a parameter, name=value");

  ProbeArgs pa;
  auto* probe_cmd = app.add_subcommand("probe", "numerically locate limit cycles and critical points");
  probe_cmd->add_option("file", pa.file, "system file (JSON)")->required();
  probe_cmd->add_option("--rmax", pa.r_max, "outer radius of the search (default from the radial average)");
  probe_cmd->add_option("--tol", pa.tol, "integration tolerance");
  probe_cmd->add_option("--csv", pa.csv_dir, "directory for CSV output");
  probe_cmd->add_option("--set", pa.sets, "override a parameter, name=value");

  SweepArgs sa;
  auto* sweep_cmd = app.add_subcommand("sweep", "certify over a parameter grid");
  sweep_cmd->add_option("file", sa.file, "system file with params")->required();
  sweep_cmd->add_option("--param", sa.param, "parameter to vary");
  sweep_cmd->add_option("--grid", sa.grid, "values: v1,v2,... or lo:hi:n");
  sweep_cmd->add_option("--eps-grid", sa.eps_grid, "perturbation sizes for the margin search");
  sweep_cmd->add_option("--jobs", sa.jobs, "worker threads (default: CYCLECERT_JOBS or hardware)");
  sweep_cmd->add_option("--set", sa.sets, "fix another parameter, name=value");

  std::string verify_path;
  auto* verify_cmd = app.add_subcommand("verify", "re-check a certificate document");
  verify_cmd->add_option("certificate", verify_path, "certificate JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    if (*certify_cmd) return cmd_certify(ca);
    if (*probe_cmd) return cmd_probe(pa);
    if (*sweep_cmd) return cmd_sweep(sa);
    if (*verify_cmd) return cmd_verify(verify_path);
  } catch (const io::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const OriginNotSingular& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kProbeFailure;
  }
  return 0;
}
