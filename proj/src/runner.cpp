#include "gradsys/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "gradsys/bilaplacian.hpp"
#include "gradsys/errors.hpp"
#include "gradsys/thresholds.hpp"

namespace gradsys {

namespace {

const std::vector<std::string> kMainKeys = {
    "kind", "dim", "n", "p", "q", "m", "sigma", "N", "lambda", "alpha", "f", "g", "c_tilde", "calibrate", "tol",
    "max_iter", "out_dir", "seed", "probes", "poisson_tol", "family", "eps", "gamma", "k_min", "k_max"};
const std::vector<std::string> kSweepKeys = {"mode", "lambda", "alpha", "lambda_lo", "lambda_hi", "rel_width",
                                             "max_steps"};

std::ostream& log_stream(const RunOptions& o) { return o.log ? *o.log : std::cerr; }

template <typename T>
std::string fmt(T v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void check_sections(const Config& c) {
  for (const auto& s : c.sections()) {
    if (s != "" && s != "sweep") throw ConfigError(c.origin() + ": unknown section [" + s + "]");
  }
  c.require_known("", kMainKeys);
  c.require_known("sweep", kSweepKeys);
}

struct Setup {
  GridSpec grid;
  ProblemData data;
  ThresholdConstants thresholds;
  std::optional<Calibration> calibration;
  std::filesystem::path out_dir;
};

std::filesystem::path output_dir(const Config& c, const RunOptions& o) {
  std::filesystem::path dir = o.out_dir ? *o.out_dir : c.get_string("", "out_dir", "out");
  std::filesystem::create_directories(dir);
  return dir;
}

Exponents read_exponents(const Config& c, int dim) {
  Exponents e;
  e.p = c.get_double("", "p", 2.0);
  e.q = c.get_double("", "q", 2.0);
  e.m = c.get_double("", "m", 2.0);
  e.sigma = c.get_double("", "sigma", 2.0);
  e.n_dim = c.get_double("", "N", dim);
  return e;
}

Setup make_setup(const Config& c, const RunOptions& o) {
  Setup s;
  s.grid = build_grid(c.get_int("", "dim", 2), c.get_int("", "n", 65));
  ProblemData& d = s.data;
  d.f = sample(s.grid, c.get_string("", "f", "one"));
  d.g = sample(s.grid, c.get_string("", "g", "one"));
  d.lambda = c.get_double("", "lambda", 0.0);
  d.alpha = c.get_double("", "alpha", 0.0);
  d.exponents = read_exponents(c, s.grid.dim());
  choose_r(d.exponents);
  d.options.tol = c.get_double("", "tol", d.options.tol);
  d.options.max_iter = c.get_int("", "max_iter", d.options.max_iter);
  d.options.poisson_tol = c.get_double("", "poisson_tol", d.options.poisson_tol);
  d.validate();

  const bool calibrate = c.get_bool("", "calibrate", false);
  if (calibrate && c.has("", "c_tilde")) {
    throw ConfigError(c.origin() + ": c_tilde and calibrate = true exclude each other");
  }
  double c_tilde = c.get_double("", "c_tilde", 1.0);
  if (calibrate) {
    CalibrationOptions co;
    co.seed = static_cast<std::uint64_t>(c.get_int("", "seed", 1));
    co.probes = c.get_int("", "probes", co.probes);
    s.calibration = calibrate_c_tilde(d, co);
    c_tilde = s.calibration->c_tilde;
    if (o.verbose) {
      log_stream(o) << "calibrated C~ = " << fmt(c_tilde) << " in " << s.calibration->rounds << " rounds\n";
    }
  }
  s.thresholds = thresholds_from(d.exponents.pq(), c_tilde);
  s.out_dir = output_dir(c, o);
  return s;
}

using Summary = std::vector<std::pair<std::string, std::string>>;

void write_summary(const std::filesystem::path& path, const Summary& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "key,value\n";
  for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
}

void write_trace(const std::filesystem::path& path, const IterationReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_trace_csv(out, report);
}

void add_threshold_summary(Summary& s, const Setup& setup) {
  const ThresholdConstants& t = setup.thresholds;
  s.emplace_back("c_tilde", fmt(t.c_tilde));
  if (setup.calibration) s.emplace_back("calibration_rounds", std::to_string(setup.calibration->rounds));
  s.emplace_back("ell", fmt(t.ell));
  s.emplace_back("lambda_star", fmt(t.lambda_star));
  s.emplace_back("s_zero", fmt(t.s_zero));
  s.emplace_back("e_radius", fmt(t.e_radius()));
  const PiMembership pi = pi_membership(setup.data, t);
  s.emplace_back("pi_data_term", fmt(pi.data_term));
  s.emplace_back("pi_bound", fmt(pi.bound));
  s.emplace_back("pi_member", pi.member ? "true" : "false");
  s.emplace_back("pi_data_term_unpowered", fmt(pi.data_term_unpowered));
  s.emplace_back("pi_member_unpowered", pi.member_unpowered ? "true" : "false");
}

void add_report_summary(Summary& s, const IterationReport& r) {
  s.emplace_back("verdict", to_string(r.verdict));
  s.emplace_back("iterations", std::to_string(r.trace.size()));
  s.emplace_back("r", fmt(r.r));
  s.emplace_back("in_E_all_iterations", r.in_E_all_iterations ? "true" : "false");
  s.emplace_back("nonfinite", r.nonfinite ? "true" : "false");
  s.emplace_back("residual_certified", r.residual_certified ? "true" : "false");
  if (!r.trace.empty()) {
    s.emplace_back("final_grad_v_r", fmt(r.trace.back().grad_v_r));
    s.emplace_back("final_res1", fmt(r.trace.back().res1));
    s.emplace_back("final_res2", fmt(r.trace.back().res2));
  }
}

void report_verdict(const RunOptions& o, const IterationReport& r) {
  if (!o.verbose) return;
  log_stream(o) << "verdict " << to_string(r.verdict) << " after " << r.trace.size() << " iterations\n";
}

int run_fixed_point(const Config& c, const RunOptions& o) {
  const Setup s = make_setup(c, o);
  const FixedPointResult result = iterate_to_fixed_point(s.data, s.thresholds);
  write_trace(s.out_dir / "trace.csv", result.report);
  Summary summary;
  add_report_summary(summary, result.report);
  add_threshold_summary(summary, s);
  write_summary(s.out_dir / "summary.csv", summary);
  report_verdict(o, result.report);
  return result.report.verdict == Verdict::Diverged ? kExitDiverged : kExitOk;
}

int run_bilaplacian(const Config& c, const RunOptions& o) {
  const GridSpec grid = build_grid(c.get_int("", "dim", 2), c.get_int("", "n", 65));
  const ScalarField f = sample(grid, c.get_string("", "f", "one"));
  const double lambda = c.get_double("", "lambda", 0.0);
  const double p = c.get_double("", "p", 2.0);
  BilaplacianOptions bo;
  bo.m = c.get_double("", "m", bo.m);
  bo.n_dim = c.get_int("", "N", grid.dim());
  bo.max_iter = c.get_int("", "max_iter", bo.max_iter);
  bo.poisson_tol = c.get_double("", "poisson_tol", bo.poisson_tol);
  const ThresholdConstants t = thresholds_from(p, c.get_double("", "c_tilde", 1.0));
  const BiharmonicResult result = solve_bilaplacian(f, lambda, p, t, c.get_double("", "tol", 1e-8), bo);
  const auto dir = output_dir(c, o);
  write_trace(dir / "trace.csv", result.report);
  Summary summary;
  add_report_summary(summary, result.report);
  summary.emplace_back("m0", fmt(result.sigma0.m0));
  summary.emplace_back("sigma0", fmt(result.sigma0.sigma0));
  summary.emplace_back("sigma0_adjusted", result.sigma0.adjusted ? "true" : "false");
  if (result.report.verdict == Verdict::Converged) {
    summary.emplace_back("cross_residual_l1", fmt(cross_validate(result, f, lambda, p)));
  }
  write_summary(dir / "summary.csv", summary);
  report_verdict(o, result.report);
  return result.report.verdict == Verdict::Diverged ? kExitDiverged : kExitOk;
}

std::vector<ThresholdRow> threshold_rows(const ScalarField& f, const ScalarField& g, const CandidateFamily& family,
                                         double p, double q, bool with_capacity) {
  std::vector<ThresholdRow> rows;
  auto append = [&](const ThresholdBound& b) { rows.insert(rows.end(), b.rows.begin(), b.rows.end()); };
  const bool g_live = integrate(g) > 0.0, f_live = integrate(f) > 0.0;
  if (p > 1.0 && q > 1.0) {
    if (g_live) append(alpha_star_upper(g, family, p, q));
    if (f_live) append(lambda_star_upper(f, family, p, q));
  }
  if (p > 1.0 && q == 1.0) {
    if (g_live) append(q1_threshold_upper(g, family, p, ThresholdKind::Alpha));
    if (f_live) append(q1_threshold_upper(f, family, p, ThresholdKind::Lambda));
  }
  if (with_capacity && p > 1.0 && f_live) append(lambda_capacity_upper(f, family, p));
  return rows;
}

CandidateFamily family_from_config(const Config& c, const GridSpec& grid) {
  const auto ids = c.get_strings("", "family");
  return ids.empty() ? default_family(grid) : family_from_descriptors(grid, ids);
}

int run_thresholds(const Config& c, const RunOptions& o) {
  const GridSpec grid = build_grid(c.get_int("", "dim", 2), c.get_int("", "n", 65));
  const ScalarField f = sample(grid, c.get_string("", "f", "one"));
  const ScalarField g = sample(grid, c.get_string("", "g", "one"));
  const double p = c.get_double("", "p", 2.0), q = c.get_double("", "q", 2.0);
  const auto rows = threshold_rows(f, g, family_from_config(c, grid), p, q, true);
  const auto dir = output_dir(c, o);
  std::ofstream out(dir / "thresholds.csv");
  write_threshold_csv(out, rows);
  if (o.verbose) log_stream(o) << rows.size() << " functional evaluations written\n";
  return kExitOk;
}

int run_witness(const Config& c, const RunOptions& o) {
  WitnessParams wp;
  wp.n_dim = c.get_int("", "N", wp.n_dim);
  wp.p = c.get_double("", "p", wp.p);
  wp.eps = c.get_double("", "eps", wp.eps);
  wp.gamma = c.get_double("", "gamma", wp.gamma);
  const int k_min = c.get_int("", "k_min", 3), k_max = c.get_int("", "k_max", 10);
  if (!(k_min >= 1 && k_max >= k_min)) throw ConfigError(c.origin() + ": need 1 <= k_min <= k_max");
  std::vector<double> cutoffs;
  for (int k = k_min; k <= k_max; ++k) cutoffs.push_back(std::ldexp(1.0, -k));
  const Witness w = build_witness(wp);
  const WitnessStudy study = witness_divergence_study(wp, cutoffs);
  const auto dir = output_dir(c, o);
  std::ofstream out(dir / "witness.csv");
  out << "cutoff,numerator,denominator,ratio\n";
  for (std::size_t k = 0; k < cutoffs.size(); ++k) {
    out << fmt(study.cutoffs[k]) << ',' << fmt(study.numerators[k]) << ',' << fmt(study.denominators[k]) << ','
        << fmt(study.ratios[k]) << '\n';
  }
  write_summary(dir / "summary.csv", {{"theta", fmt(w.theta)},
                                      {"f_exponent", fmt(w.f_exponent)},
                                      {"m_max", fmt(w.m_max)},
                                      {"junction_jump", fmt(w.phi.max_junction_jump())}});
  return kExitOk;
}

struct PointResult {
  double lambda = 0.0;
  double alpha = 0.0;
  Verdict verdict = Verdict::MaxIterReached;
  std::size_t iterations = 0;
  long double final_grad_v_r = 0;
  PiMembership pi;
  std::string error;
};

PointResult run_point(const Setup& s, double lambda, double alpha) {
  PointResult out;
  out.lambda = lambda;
  out.alpha = alpha;
  ProblemData d = s.data;
  d.lambda = lambda;
  d.alpha = alpha;
  const FixedPointResult r = iterate_to_fixed_point(d, s.thresholds);
  out.verdict = r.report.verdict;
  out.iterations = r.report.trace.size();
  if (!r.report.trace.empty()) out.final_grad_v_r = r.report.trace.back().grad_v_r;
  out.pi = pi_membership(d, s.thresholds);
  return out;
}

void write_bounds(const Setup& s, const std::filesystem::path& path) {
  const auto family = default_family(s.grid);
  const auto rows = threshold_rows(s.data.f, s.data.g, family, s.data.exponents.p, s.data.exponents.q, false);
  std::ofstream out(path);
  write_threshold_csv(out, rows);
}

int sweep_grid(const Config& c, const RunOptions& o, const Setup& s) {
  auto lambdas = c.get_doubles("sweep", "lambda");
  auto alphas = c.get_doubles("sweep", "alpha");
  if (!c.has("sweep", "lambda")) lambdas = {s.data.lambda};
  if (!c.has("sweep", "alpha")) alphas = {s.data.alpha};
  const std::size_t count = lambdas.size() * alphas.size();
  if (count == 0) throw ConfigError(c.origin() + ": sweep grid is empty");
  std::vector<PointResult> points(count);

#pragma omp parallel for schedule(dynamic)
  for (long long k = 0; k < static_cast<long long>(count); ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const double lambda = lambdas[idx / alphas.size()], alpha = alphas[idx % alphas.size()];
    try {
      points[idx] = run_point(s, lambda, alpha);
    } catch (const std::exception& e) {
      points[idx].lambda = lambda;
      points[idx].alpha = alpha;
      points[idx].error = e.what();
    }
  }

  for (const auto& p : points) {
    if (!p.error.empty()) throw std::runtime_error("sweep point lambda = " + fmt(p.lambda) + ": " + p.error);
  }
  std::ofstream out(s.out_dir / "sweep.csv");
  out << "index,lambda,alpha,verdict,iterations,final_grad_v_r,pi_data_term,pi_bound,pi_member\n";
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& p = points[k];
    out << k << ',' << fmt(p.lambda) << ',' << fmt(p.alpha) << ',' << to_string(p.verdict) << ',' << p.iterations
        << ',' << fmt(p.final_grad_v_r) << ',' << fmt(p.pi.data_term) << ',' << fmt(p.pi.bound) << ','
        << (p.pi.member ? "true" : "false") << '\n';
  }
  write_bounds(s, s.out_dir / "bounds.csv");
  if (o.verbose) log_stream(o) << count << " sweep points written\n";
  return kExitOk;
}

int sweep_bisect(const Config& c, const RunOptions& o, const Setup& s) {
  double lo = c.get_double("sweep", "lambda_lo", 0.0);
  double hi = c.get_double("sweep", "lambda_hi", 0.0);
  const double width = c.get_double("sweep", "rel_width", 1e-2);
  const int max_steps = c.get_int("sweep", "max_steps", 200);
  if (!(lo > 0.0 && hi > lo)) throw ConfigError(c.origin() + ": bisection needs 0 < lambda_lo < lambda_hi");
  if (!(width > 0.0)) throw ConfigError(c.origin() + ": rel_width must be positive");
  const double alpha = s.data.alpha;
  auto diverges = [&](double lambda) { return run_point(s, lambda, alpha).verdict == Verdict::Diverged; };
  if (diverges(lo)) throw ConfigError(c.origin() + ": lambda_lo already diverges");
  if (!diverges(hi)) throw ConfigError(c.origin() + ": lambda_hi does not diverge");

  std::ofstream out(s.out_dir / "bisection.csv");
  out << "step,lambda_lo,lambda_hi,lambda_mid,diverged\n";
  int step = 0;
  while (hi - lo > width * lo && step < max_steps) {
    const double mid = std::sqrt(lo * hi);
    const bool d = diverges(mid);
    out << step << ',' << fmt(lo) << ',' << fmt(hi) << ',' << fmt(mid) << ',' << (d ? "true" : "false") << '\n';
    (d ? hi : lo) = mid;
    ++step;
    if (o.verbose) log_stream(o) << "bracket [" << fmt(lo) << ", " << fmt(hi) << "]\n";
  }
  const ThresholdConstants& t = s.thresholds;
  const double p = s.data.exponents.p;
  const double g_term = std::pow(alpha, p) * std::pow(lp_norm(s.data.g, s.data.exponents.sigma), p);
  const double pi_lambda = (t.lambda_star / t.c_tilde - g_term) / lp_norm(s.data.f, s.data.exponents.m);
  write_summary(s.out_dir / "summary.csv", {{"lambda_lo", fmt(lo)},
                                            {"lambda_hi", fmt(hi)},
                                            {"lambda_hat", fmt(std::sqrt(lo * hi))},
                                            {"steps", std::to_string(step)},
                                            {"pi_lambda_boundary", fmt(pi_lambda)},
                                            {"c_tilde", fmt(t.c_tilde)}});
  write_bounds(s, s.out_dir / "bounds.csv");
  return kExitOk;
}

}  // namespace

void write_trace_csv(std::ostream& os, const IterationReport& report) {
  os << "iter,grad_v_r,grad_u_p,rel_change_w11,res1,res2,in_E\n";
  for (const auto& r : report.trace) {
    os << r.iter << ',' << fmt(r.grad_v_r) << ',' << fmt(r.grad_u_p) << ',' << fmt(r.rel_change_w11) << ','
       << fmt(r.res1) << ',' << fmt(r.res2) << ',' << (r.in_e ? 1 : 0) << '\n';
  }
}

int run_experiment(const Config& config, const RunOptions& options) {
  check_sections(config);
  const auto kind = config.raw("", "kind");
  if (!kind) throw ConfigError(config.origin() + ": missing key 'kind'");
  if (*kind == "fixed_point") return run_fixed_point(config, options);
  if (*kind == "bilaplacian") return run_bilaplacian(config, options);
  if (*kind == "thresholds") return run_thresholds(config, options);
  if (*kind == "witness") return run_witness(config, options);
  throw ConfigError(config.origin() + ": unknown experiment kind '" + *kind + "'");
}

int run_sweep(const Config& config, const RunOptions& options) {
  check_sections(config);
  const std::string kind = config.get_string("", "kind", "fixed_point");
  if (kind != "fixed_point") throw ConfigError(config.origin() + ": sweeps support kind = fixed_point only");
  if (!config.has("sweep", "mode") && !config.has("sweep", "lambda") && !config.has("sweep", "alpha")) {
    throw ConfigError(config.origin() + ": sweep needs a [sweep] section with lambda/alpha lists or mode = bisect");
  }
  const Setup s = make_setup(config, options);
  const std::string mode = config.get_string("sweep", "mode", "grid");
  if (mode == "grid") return sweep_grid(config, options, s);
  if (mode == "bisect") return sweep_bisect(config, options, s);
  throw ConfigError(config.origin() + ": unknown sweep mode '" + mode + "'");
}

int run_command(const std::string& command, const std::string& config_path, const RunOptions& options) {
  std::ostream& log = log_stream(options);
  try {
    const Config config = Config::load(config_path);
    if (command == "run") return run_experiment(config, options);
    if (command == "sweep") return run_sweep(config, options);
    log << "error: unknown command '" << command << "'\n";
  } catch (const AdmissibilityError& e) {
    log << "error: inadmissible exponents: " << e.what() << '\n';
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace gradsys
