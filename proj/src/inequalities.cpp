#include "sqg/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sqg/errors.hpp"
#include "sqg/fft.hpp"
#include "sqg/kernels.hpp"
#include "sqg/littlewood_paley.hpp"
#include "sqg/random_fields.hpp"
#include "sqg/spectral_ops.hpp"

namespace sqg {

namespace {

constexpr double kRoundingSlack = 1e-12;
constexpr double kHypothesisTol = 1e-12;

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return base * 1000003ULL + a * 1009ULL + b;
}

SpectralField without_mean(SpectralField F) {
  F.coeffs()[0] = Complex{};
  return F;
}

double norm_h(const SpectralField& F, double s) { return sobolev_norm(without_mean(F), s); }

// L^p average on the 2n grid, where band-limited products and maxima are resolved.
double padded_lp(const SpectralField& F, double p) {
  const int n = F.grid().n();
  const int m = fft::padded_size(n);
  RealBuffer samples(static_cast<std::size_t>(m) * m);
  fft::synthesize_padded(F.coeffs(), n, m, samples);
  if (std::isinf(p)) return kernels::omp::max_abs(samples);
  return std::pow(kernels::omp::sum_abs_pow(samples, p) / static_cast<double>(samples.size()),
                  1.0 / p);
}

// 0.5 * log sum_j w_j |c_j|^2 exp(-2 t kappa_j^gamma), without underflow.
double log_decayed_norm(const SpectralField& F, double gamma, double t) {
  const auto tables = SpectralTables::get(F.grid().n());
  const auto c = F.coeffs();
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  terms.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double a = std::norm(c[i]);
    if (a == 0.0 || tables->nyquist[i]) continue;
    const double rate = tables->wavevector[i] == 0.0 ? 0.0 : std::pow(tables->wavevector[i], gamma);
    const double e = std::log(tables->multiplicity[i] * a) - 2.0 * t * rate;
    terms.push_back(e);
    peak = std::max(peak, e);
  }
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (double e : terms) acc += std::exp(e - peak);
  return 0.5 * (peak + std::log(acc));
}

double nodes_per_decade(std::span<const double> t) {
  if (t.size() < 2) return 0.0;
  return static_cast<double>(t.size() - 1) / std::log10(t.back() / t.front());
}

// Trapezoid in log t of f(t) * t.
double log_trapezoid(std::span<const double> t, std::span<const double> f) {
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    acc += 0.5 * (f[i] * t[i] + f[i - 1] * t[i - 1]) * std::log(t[i] / t[i - 1]);
  }
  return acc;
}

void check_product_hypotheses(ProductEstimate kind, const ProductParams& q) {
  auto fail = [&](const std::string& what) {
    throw InvalidArgument(std::string(to_string(kind)) + " estimate requires " + what +
                          " (s = " + std::to_string(q.s) + ", t = " + std::to_string(q.t) + ")");
  };
  switch (kind) {
    case ProductEstimate::paraproduct:
      if (!(q.s < 1.0)) fail("s < 1");
      break;
    case ProductEstimate::remainder:
      if (!(q.s + q.t > 0.0)) fail("s + t > 0");
      break;
    case ProductEstimate::product:
      if (!(q.s < 1.0 && q.t < 1.0)) fail("s, t < 1");
      if (!(q.s + q.t > 0.0)) fail("s + t > 0");
      break;
    case ProductEstimate::leibniz: {
      if (!(q.s >= 0.0)) fail("s >= 0");
      for (double e : {q.p, q.p1, q.p2, q.p3, q.p4}) {
        if (!(e > 1.0 && std::isfinite(e))) fail("every exponent in (1, inf)");
      }
      if (std::abs(1.0 / q.p - 1.0 / q.p1 - 1.0 / q.p2) > kHypothesisTol ||
          std::abs(1.0 / q.p - 1.0 / q.p3 - 1.0 / q.p4) > kHypothesisTol) {
        fail("1/p = 1/p1 + 1/p2 = 1/p3 + 1/p4");
      }
      break;
    }
  }
}

std::map<std::string, double> product_param_map(ProductEstimate kind, const ProductParams& q) {
  std::map<std::string, double> out{{"s", q.s}, {"t", q.t}};
  if (kind == ProductEstimate::leibniz) {
    out.erase("t");
    out.insert({{"p", q.p}, {"p1", q.p1}, {"p2", q.p2}, {"p3", q.p3}, {"p4", q.p4}});
  }
  return out;
}

InequalityTrial product_trial(const SpectralField& f, const SpectralField& g,
                              const SpectralField& lhs_field, ProductEstimate kind,
                              const ProductParams& q) {
  InequalityTrial trial;
  trial.id = to_string(kind);
  trial.params = product_param_map(kind, q);
  if (kind == ProductEstimate::leibniz) {
    trial.lhs = square_function_norm(without_mean(lhs_field), q.s, q.p);
    trial.rhs = square_function_norm(f, q.s, q.p1) * padded_lp(g, q.p2) +
                padded_lp(f, q.p3) * square_function_norm(g, q.s, q.p4);
  } else {
    trial.lhs = norm_h(lhs_field, q.s + q.t - 1.0);
    trial.rhs = norm_h(f, q.s) * norm_h(g, q.t);
  }
  if (!(trial.rhs > 0.0)) throw InvalidArgument(trial.id + ": right-hand side vanishes");
  trial.ratio = trial.lhs / trial.rhs;
  trial.holds = std::isfinite(trial.ratio);
  return trial;
}

void check_commutator_hypotheses(const CommutatorParams& c) {
  const std::string where = "commutator (m = " + std::to_string(c.m) + ", s = " +
                            std::to_string(c.s) + ", t = " + std::to_string(c.t) + ")";
  if (!(c.s < 2.0 && c.t < 1.0 && c.m + c.s + c.t > 0.0)) {
    throw InvalidArgument(where + " requires s < 2, t < 1, m + s + t > 0");
  }
  if (!c.localized && !(c.m >= 0.0 && c.s >= 1.0)) {
    throw InvalidArgument(where + " requires m >= 0 and s >= 1 without localization");
  }
}

}  // namespace

std::optional<InequalityTrial> verify_semigroup_block(const SpectralField& v, int j, double gamma,
                                                      std::span<const double> t_list) {
  if (!(gamma > 0.0 && gamma <= 2.0)) throw InvalidArgument("semigroup block: gamma in (0, 2]");
  if (!BandRange::for_grid(v.grid()).contains(j)) {
    throw InvalidArgument("semigroup block: band " + std::to_string(j) + " is not active");
  }
  for (double t : t_list) {
    if (!(t >= 0.0)) throw InvalidArgument("semigroup block: t must be >= 0");
  }
  const SpectralField block = lp_project(v, j, Projection::delta);
  if (block.max_abs() == 0.0) return std::nullopt;

  const double lambda = std::pow(2.0, -gamma - 1.0);
  const double lambda_prime = std::pow(2.0, gamma - 1.0);
  const double scale = std::pow(2.0, gamma * j + 1.0);
  const double log_base = log_decayed_norm(block, gamma, 0.0);

  InequalityTrial trial;
  trial.id = "semigroup_block";
  trial.params = {{"gamma", gamma}, {"j", j}};
  trial.lhs = std::exp(log_base);
  trial.rhs = trial.lhs;
  double worst = 0.0;
  double lambda_emp = std::numeric_limits<double>::infinity();
  double lambda_prime_emp = 0.0;
  for (double t : t_list) {
    const double log_mid = log_decayed_norm(block, gamma, t);
    const double log_lower = -scale * lambda_prime * t + log_base;
    const double log_upper = -scale * lambda * t + log_base;
    const double excess = std::max(log_lower - log_mid, log_mid - log_upper);
    worst = std::max(worst, std::exp(excess));
    trial.profile.push_back(log_mid - log_base);
    if (t > 0.0) {
      const double rate = -(log_mid - log_base) / (scale * t);
      lambda_emp = std::min(lambda_emp, rate);
      lambda_prime_emp = std::max(lambda_prime_emp, rate);
    }
  }
  trial.ratio = worst;
  trial.holds = worst <= 1.0 + kRoundingSlack;
  trial.extras = {{"lambda", lambda}, {"lambda_prime", lambda_prime}};
  if (std::isfinite(lambda_emp)) {
    trial.extras["lambda_empirical"] = lambda_emp;
    trial.extras["lambda_prime_empirical"] = lambda_prime_emp;
  }
  return trial;
}

InequalityTrial verify_linear_smoothing(const SpectralField& v, double gamma, double s,
                                        std::span<const double> t_grid) {
  if (t_grid.empty()) throw InvalidArgument("linear smoothing: empty t grid");
  if (!(s >= 0.0)) throw InvalidArgument("linear smoothing: s must be >= 0");
  if (!(gamma > 0.0 && gamma <= 2.0)) throw InvalidArgument("linear smoothing: gamma in (0, 2]");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw InvalidArgument("linear smoothing: t grid must be positive and increasing");
    }
  }
  require_zero_mean(v, "linear smoothing");
  const double base = sobolev_norm(v, 0.0);
  if (!(base > 0.0)) throw InvalidArgument("linear smoothing: v vanishes");

  const SpectralField lifted = apply_fractional_power(v, s);
  InequalityTrial trial;
  trial.id = "linear_smoothing";
  trial.params = {{"gamma", gamma}, {"s", s}};
  trial.rhs = base;
  std::vector<double> unweighted;
  for (double t : t_grid) {
    const double norm = std::exp(log_decayed_norm(lifted, gamma, t)) / base;
    unweighted.push_back(norm);
    trial.profile.push_back(std::pow(t, s / gamma) * norm);
  }
  trial.ratio = *std::max_element(trial.profile.begin(), trial.profile.end());
  trial.lhs = trial.ratio * base;
  trial.holds = std::isfinite(trial.ratio);

  if (s > 0.0 && s <= gamma / 2.0) {
    if (nodes_per_decade(t_grid) < 64.0) {
      throw InvalidArgument("linear smoothing: time norm needs >= 64 nodes per decade");
    }
    const double q = gamma / s;
    std::vector<double> powered(unweighted.size());
    for (std::size_t i = 0; i < unweighted.size(); ++i) powered[i] = std::pow(unweighted[i], q);
    trial.extras["time_norm"] = std::pow(log_trapezoid(t_grid, powered), 1.0 / q);
  }
  if (s > 0.0) {
    const auto& w = trial.profile;
    const bool trend = w.size() >= 3 && w[0] < w[1] && w[1] < w[2];
    trial.extras["trend"] = trend ? 1.0 : 0.0;
    trial.holds = trial.holds && trend;
  }
  return trial;
}

const char* to_string(ProductEstimate kind) {
  switch (kind) {
    case ProductEstimate::paraproduct:
      return "paraproduct";
    case ProductEstimate::remainder:
      return "remainder";
    case ProductEstimate::product:
      return "product";
    case ProductEstimate::leibniz:
      return "leibniz";
  }
  return "unknown";
}

InequalityTrial verify_product_estimates(const SpectralField& f, const SpectralField& g,
                                         ProductEstimate kind, const ProductParams& params) {
  check_product_hypotheses(kind, params);
  require_same_grid(f.grid(), g.grid(), "product estimate");
  require_zero_mean(f, "product estimate");
  require_zero_mean(g, "product estimate");
  switch (kind) {
    case ProductEstimate::paraproduct:
      return product_trial(f, g, bony_paraproducts(f, g).paraproduct_fg, kind, params);
    case ProductEstimate::remainder:
      return product_trial(f, g, bony_paraproducts(f, g).remainder, kind, params);
    case ProductEstimate::product:
    case ProductEstimate::leibniz:
      return product_trial(f, g, dealiased_product(f, g), kind, params);
  }
  throw InvalidArgument("unknown product estimate");
}

std::vector<InequalityTrial> verify_commutator_estimates(const SpectralField& f,
                                                         const SpectralField& g,
                                                         std::span<const CommutatorParams> params) {
  require_same_grid(f.grid(), g.grid(), "commutator estimate");
  for (const auto& c : params) check_commutator_hypotheses(c);

  const TorusGrid grid = f.grid();
  const int n = grid.n();
  const int m = fft::padded_size(n);
  const std::size_t size = static_cast<std::size_t>(m) * m;
  const BandRange range = BandRange::for_grid(grid);
  const SpectralField fg = dealiased_product(f, g);

  RealBuffer f_x(size), band_x(size), prod(size);
  fft::synthesize_padded(f.coeffs(), n, m, f_x);

  // Commutator fields per band, unlocalized and localized.
  std::vector<SpectralField> plain, local;
  for (int j = range.j_min; j <= range.j_max; ++j) {
    const SpectralField band_g = lp_project(g, j, Projection::delta);
    fft::synthesize_padded(band_g.coeffs(), n, m, band_x);
    kernels::omp::product(f_x, band_x, prod);
    ComplexBuffer coeffs(grid.spectral_size());
    fft::analyze_truncated(prod, m, n, coeffs);
    SpectralField c = SpectralField(grid, std::move(coeffs)) - lp_project(fg, j, Projection::delta);
    local.push_back(lp_project(c, j, Projection::tilde));
    plain.push_back(without_mean(std::move(c)));
  }

  std::vector<InequalityTrial> out;
  for (const auto& c : params) {
    const double denom = norm_h(f, c.m + c.s) * norm_h(g, c.t) + norm_h(f, c.s) * norm_h(g, c.m + c.t);
    if (!(denom > 0.0)) throw InvalidArgument("commutator estimate: f or g vanishes");
    InequalityTrial trial;
    trial.id = c.localized ? "commutator_localized" : "commutator";
    trial.params = {{"m", c.m}, {"s", c.s}, {"t", c.t}};
    trial.rhs = denom;
    double sum_sq = 0.0;
    for (int j = range.j_min; j <= range.j_max; ++j) {
      const auto& field = c.localized ? local[j - range.j_min] : plain[j - range.j_min];
      const double a = std::pow(2.0, (c.s + c.t - 1.0) * j) * sobolev_norm(field, c.m) / denom;
      trial.profile.push_back(a);
      sum_sq += a * a;
    }
    trial.ratio = std::sqrt(sum_sq);
    trial.lhs = trial.ratio * denom;
    trial.holds = std::isfinite(trial.ratio);
    out.push_back(std::move(trial));
  }
  return out;
}

InequalityTrial verify_commutator_estimate(const SpectralField& f, const SpectralField& g,
                                           const CommutatorParams& params) {
  return verify_commutator_estimates(f, g, std::span(&params, 1)).front();
}

InequalityTrial verify_bernstein_field(const SpectralField& v, BernsteinForm form, double p,
                                       double q, double s) {
  if (!(p >= 1.0 && q >= p)) throw InvalidArgument("bernstein: requires 1 <= p <= q");
  const BandRange range = BandRange::for_grid(v.grid());
  InequalityTrial trial;
  trial.id = form == BernsteinForm::derivative ? "bernstein_derivative" : "bernstein_embedding";
  trial.params = {{"p", p}, {"q", q}, {"s", s}};
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int j = range.j_min; j <= range.j_max; ++j) {
    const SpectralField block = lp_project(v, j, Projection::delta);
    if (block.max_abs() == 0.0) {
      trial.profile.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double base = padded_lp(block, p);
    double ratio = 0.0;
    if (form == BernsteinForm::derivative) {
      ratio = padded_lp(apply_fractional_power(block, s), p) / (std::pow(2.0, j * s) * base);
    } else {
      const double gain = std::isinf(q) ? 2.0 / p : 2.0 / p - 2.0 / q;
      ratio = (p == q ? base : padded_lp(block, q)) / (std::pow(2.0, gain * j) * base);
    }
    trial.profile.push_back(ratio);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  if (hi == 0.0) throw InvalidArgument("bernstein: every band of v vanishes");
  trial.ratio = hi;
  trial.extras = {{"min", lo}, {"spread", hi / lo}};
  trial.holds = std::isfinite(hi) && lo > 0.0;
  if (form == BernsteinForm::derivative) {
    trial.holds = trial.holds && hi / lo <= std::pow(2.0, 2.0 * std::abs(s)) * (1.0 + kRoundingSlack);
  }
  return trial;
}

double refinement_growth(std::span<const double> values) {
  double growth = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    growth = std::max(growth, (values[i] - values[i - 1]) / values[i - 1]);
  }
  return growth;
}

namespace {

void finish_report(ConstantReport& r) {
  r.growth = refinement_growth(r.max_ratio);
  bool finite = true;
  for (double x : r.max_ratio) finite = finite && std::isfinite(x);
  r.verdict = finite && r.violations == 0 && r.growth < r.threshold;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  const int count = static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade)) + 1;
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i) {
    t[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  }
  return t;
}

}  // namespace

ConstantReport verify_bernstein(std::span<const int> grid_sizes, std::size_t ensemble,
                                std::uint64_t seed, BernsteinForm form, double p, double q,
                                double s, double threshold) {
  ConstantReport r;
  r.id = form == BernsteinForm::derivative ? "bernstein_derivative" : "bernstein_embedding";
  r.params = {{"p", p}, {"q", q}, {"s", s}};
  r.ensemble_size = ensemble;
  r.threshold = threshold;
  double lo = std::numeric_limits<double>::infinity();
  double spread = 0.0;
  for (int n : grid_sizes) {
    const TorusGrid grid(n);
    double worst = 0.0;
    for (std::size_t i = 0; i < ensemble; ++i) {
      const SpectralField v = random_field(grid, derive_seed(seed, 11, i), 1.0);
      const InequalityTrial trial = verify_bernstein_field(v, form, p, q, s);
      worst = std::max(worst, trial.ratio);
      lo = std::min(lo, trial.extras.at("min"));
      spread = std::max(spread, trial.extras.at("spread"));
      if (!trial.holds) ++r.violations;
    }
    r.grid_sizes.push_back(n);
    r.max_ratio.push_back(worst);
  }
  r.extras = {{"min_ratio", lo}, {"max_spread", spread}};
  if (form == BernsteinForm::derivative) r.extras["spread_bound"] = std::pow(2.0, 2.0 * std::abs(s));
  finish_report(r);
  return r;
}

std::vector<CommutatorParams> commutator_tuples(std::uint64_t seed, std::size_t extra) {
  // gamma = 1: (m, s, t) = (0, 2 - gamma, 1 - 3 gamma / 4) and
  // (beta0 - gamma / 2, 2 - 2 gamma / 3, 1 - 2 gamma / 3) with beta0 = 1.
  std::vector<CommutatorParams> out{{0.0, 1.0, 0.25, true}, {0.5, 4.0 / 3.0, 1.0 / 3.0, true}};
  for (std::size_t i = 0; i < extra; ++i) {
    const std::uint64_t h = derive_seed(seed, 17, i);
    CommutatorParams c;
    c.m = std::round(1e3 * mode_uniform(h, 0, 0, 0)) / 1e3;
    c.s = std::round(1e3 * (1.0 + 0.9 * mode_uniform(h, 0, 0, 1))) / 1e3;
    c.t = std::round(1e3 * (-0.5 + 1.4 * mode_uniform(h, 0, 0, 2))) / 1e3;
    c.localized = true;
    out.push_back(c);
  }
  return out;
}

std::vector<ConstantReport> run_inequality_suite(const InequalitySuiteConfig& config) {
  if (config.ensemble == 0) throw InvalidArgument("inequality suite: ensemble must be positive");
  if (config.grid_sizes.empty() || config.commutator_grid_sizes.empty()) {
    throw InvalidArgument("inequality suite: grid size lists must be nonempty");
  }
  std::vector<ConstantReport> reports;
  const std::uint64_t seed = config.seed;

  // Semigroup sandwich on every active band.
  const std::vector<double> t_list{0.01, 0.1, 1.0};
  for (double gamma : {0.6, 1.0, 1.5}) {
    ConstantReport r;
    r.id = "semigroup_block";
    r.params = {{"gamma", gamma}};
    r.ensemble_size = config.ensemble;
    r.threshold = config.threshold;
    double lam = std::numeric_limits<double>::infinity();
    double lam_prime = 0.0;
    std::size_t trials = 0;
    for (int n : config.grid_sizes) {
      const TorusGrid grid(n);
      const BandRange range = BandRange::for_grid(grid);
      double worst = 0.0;
      for (std::size_t i = 0; i < config.ensemble; ++i) {
        const SpectralField v = random_field(grid, derive_seed(seed, 1, i), 0.0);
        for (int j = range.j_min; j <= range.j_max; ++j) {
          const auto trial = verify_semigroup_block(v, j, gamma, t_list);
          if (!trial) continue;
          ++trials;
          worst = std::max(worst, trial->ratio);
          if (!trial->holds) ++r.violations;
          if (trial->extras.count("lambda_empirical")) {
            lam = std::min(lam, trial->extras.at("lambda_empirical"));
            lam_prime = std::max(lam_prime, trial->extras.at("lambda_prime_empirical"));
          }
        }
      }
      r.grid_sizes.push_back(n);
      r.max_ratio.push_back(worst);
    }
    r.extras = {{"lambda", std::pow(2.0, -gamma - 1.0)},
                {"lambda_prime", std::pow(2.0, gamma - 1.0)},
                {"lambda_empirical", lam},
                {"lambda_prime_empirical", lam_prime},
                {"trials", static_cast<double>(trials)}};
    // The sandwich is an exact bound: judged by violations alone.
    r.growth = refinement_growth(r.max_ratio);
    r.verdict = r.violations == 0;
    reports.push_back(std::move(r));
  }

  // Linear smoothing.
  const std::vector<double> t_grid = log_grid(1e-4, 1.0, 64);
  for (double s : {0.25, 0.5}) {
    const double gamma = 1.0;
    ConstantReport r;
    r.id = "linear_smoothing";
    r.params = {{"gamma", gamma}, {"s", s}};
    r.ensemble_size = config.ensemble;
    r.threshold = config.threshold;
    double time_norm = 0.0;
    for (int n : config.grid_sizes) {
      const TorusGrid grid(n);
      double worst = 0.0;
      for (std::size_t i = 0; i < config.ensemble; ++i) {
        const SpectralField v = random_field(grid, derive_seed(seed, 2, i), 0.0);
        const InequalityTrial trial = verify_linear_smoothing(v, gamma, s, t_grid);
        worst = std::max(worst, trial.ratio);
        if (!trial.holds) ++r.violations;
        if (trial.extras.count("time_norm")) {
          time_norm = std::max(time_norm, trial.extras.at("time_norm"));
        }
      }
      r.grid_sizes.push_back(n);
      r.max_ratio.push_back(worst);
    }
    r.extras = {{"max_time_norm", time_norm}};
    finish_report(r);
    reports.push_back(std::move(r));
  }

  // Product estimates from one Bony decomposition per pair.
  {
    const ProductParams hs{0.9, 0.5};
    ProductParams leib;
    leib.s = 0.5;
    const ProductEstimate kinds[] = {ProductEstimate::paraproduct, ProductEstimate::remainder,
                                     ProductEstimate::product, ProductEstimate::leibniz};
    std::vector<ConstantReport> prod(4);
    for (int k = 0; k < 4; ++k) {
      prod[k].id = to_string(kinds[k]);
      prod[k].params = product_param_map(kinds[k], kinds[k] == ProductEstimate::leibniz ? leib : hs);
      prod[k].ensemble_size = config.ensemble;
      prod[k].threshold = config.threshold;
      check_product_hypotheses(kinds[k], kinds[k] == ProductEstimate::leibniz ? leib : hs);
    }
    for (int n : config.grid_sizes) {
      const TorusGrid grid(n);
      double worst[4] = {0, 0, 0, 0};
      for (std::size_t i = 0; i < config.ensemble; ++i) {
        const SpectralField f = random_field(grid, derive_seed(seed, 3, 2 * i), 3.0);
        const SpectralField g = random_field(grid, derive_seed(seed, 3, 2 * i + 1), 3.0);
        const BonyDecomposition bony = bony_paraproducts(f, g);
        const SpectralField fg = dealiased_product(f, g);
        const SpectralField* lhs[] = {&bony.paraproduct_fg, &bony.remainder, &fg, &fg};
        for (int k = 0; k < 4; ++k) {
          const auto trial = product_trial(f, g, *lhs[k], kinds[k],
                                           kinds[k] == ProductEstimate::leibniz ? leib : hs);
          worst[k] = std::max(worst[k], trial.ratio);
          if (!trial.holds) ++prod[k].violations;
        }
      }
      for (int k = 0; k < 4; ++k) {
        prod[k].grid_sizes.push_back(n);
        prod[k].max_ratio.push_back(worst[k]);
      }
    }
    for (auto& r : prod) {
      finish_report(r);
      reports.push_back(std::move(r));
    }
  }

  // Commutator aggregates.
  {
    const auto tuples = commutator_tuples(seed, config.extra_commutator_tuples);
    std::vector<ConstantReport> comm(tuples.size());
    for (std::size_t k = 0; k < tuples.size(); ++k) {
      comm[k].id = "commutator_localized";
      comm[k].params = {{"m", tuples[k].m}, {"s", tuples[k].s}, {"t", tuples[k].t}};
      comm[k].ensemble_size = config.ensemble;
      comm[k].threshold = config.threshold;
      comm[k].extras = {{"alpha", config.commutator_alpha}};
    }
    for (int n : config.commutator_grid_sizes) {
      const TorusGrid grid(n);
      std::vector<double> worst(tuples.size(), 0.0);
      for (std::size_t i = 0; i < config.ensemble; ++i) {
        const SpectralField f = random_field(grid, derive_seed(seed, 4, 2 * i), config.commutator_alpha);
        const SpectralField g =
            random_field(grid, derive_seed(seed, 4, 2 * i + 1), config.commutator_alpha);
        const auto trials = verify_commutator_estimates(f, g, tuples);
        for (std::size_t k = 0; k < trials.size(); ++k) {
          worst[k] = std::max(worst[k], trials[k].ratio);
          if (!trials[k].holds) ++comm[k].violations;
        }
      }
      for (std::size_t k = 0; k < tuples.size(); ++k) {
        comm[k].grid_sizes.push_back(n);
        comm[k].max_ratio.push_back(worst[k]);
      }
    }
    for (auto& r : comm) {
      finish_report(r);
      reports.push_back(std::move(r));
    }
  }

  // Bernstein.
  reports.push_back(verify_bernstein(config.grid_sizes, config.ensemble, seed,
                                     BernsteinForm::derivative, 2.0, 2.0, 1.0, config.threshold));
  reports.push_back(verify_bernstein(config.grid_sizes, config.ensemble, seed,
                                     BernsteinForm::derivative, kInfinity, kInfinity, 1.0,
                                     config.threshold));
  reports.push_back(verify_bernstein(config.grid_sizes, config.ensemble, seed,
                                     BernsteinForm::embedding, 2.0, kInfinity, 0.0,
                                     config.threshold));
  return reports;
}

}  // namespace sqg
