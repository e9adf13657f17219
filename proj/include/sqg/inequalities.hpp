#pragma once

// Randomized measurement of the constants in the Littlewood-Paley, semigroup,
// product and commutator inequalities used by the regularity theory.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqg/fields.hpp"

namespace sqg {

struct InequalityTrial {
  std::string id;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  ///< lhs / rhs, or the inequality-specific normalized excess
  bool holds = true;
  std::map<std::string, double> extras;
  std::vector<double> profile;  ///< per-band or per-time values, when meaningful
};

struct ConstantReport {
  std::string id;
  std::map<std::string, double> params;
  std::size_t ensemble_size = 0;
  std::vector<int> grid_sizes;
  std::vector<double> max_ratio;  ///< ensemble max per grid size
  /// Largest relative increase of max_ratio between consecutive grids.
  double growth = 0.0;
  double threshold = 0.1;
  std::size_t violations = 0;  ///< trials with holds == false
  bool verdict = false;
  std::map<std::string, double> extras;
};

/// Semigroup sandwich on one band, with lambda = 2^{-gamma-1}, lambda' = 2^{gamma-1}:
///   e^{-2^{gamma j+1} lambda' t}|D v| <= |G(t) D v| <= e^{-2^{gamma j+1} lambda t}|D v|
/// in L^2, D = Delta_j. Returns nullopt when Delta_j v vanishes.
/// ratio = max over t of max(lower/middle, middle/upper); the sandwich holds iff ratio <= 1
/// up to a relative rounding slack of 1e-12.
std::optional<InequalityTrial> verify_semigroup_block(const SpectralField& v, int j, double gamma,
                                                      std::span<const double> t_list);

/// t^{s/gamma} |G(t) v|_{H^s} / |v|_{L^2} on t_grid (increasing).
/// ratio = sup over t_grid. For 0 < s <= gamma/2 extras["time_norm"] holds the
/// L^{gamma/s}_t norm of |G(t) v|_{H^s} / |v|_{L^2} by log-uniform trapezoid
/// quadrature, and extras["trend"] is 1 when the three smallest-t values decrease
/// toward t -> 0 (s > 0 only). profile holds the weighted values per t.
InequalityTrial verify_linear_smoothing(const SpectralField& v, double gamma, double s,
                                        std::span<const double> t_grid);

enum class ProductEstimate {
  paraproduct,  ///< |T_f g|_{H^{s+t-1}} <= C |f|_{H^s} |g|_{H^t}, s < 1
  remainder,    ///< |R(f,g)|_{H^{s+t-1}} <= C |f|_{H^s} |g|_{H^t}, s + t > 0
  product,      ///< |fg|_{H^{s+t-1}} <= C |f|_{H^s} |g|_{H^t}, s, t < 1, s + t > 0
  leibniz,      ///< fractional Leibniz rule with square-function W^{s,p} norms
};

const char* to_string(ProductEstimate kind);

struct ProductParams {
  double s = 0.0;
  double t = 0.0;
  // Leibniz only: 1/p = 1/p1 + 1/p2 = 1/p3 + 1/p4, all in (1, inf).
  double p = 2.0;
  double p1 = 4.0;
  double p2 = 4.0;
  double p3 = 4.0;
  double p4 = 4.0;
};

/// Throws InvalidArgument when the parameters violate the estimate's hypotheses.
InequalityTrial verify_product_estimates(const SpectralField& f, const SpectralField& g,
                                         ProductEstimate kind, const ProductParams& params);

struct CommutatorParams {
  double m = 0.0;
  double s = 1.0;
  double t = 0.0;
  /// Localized form (post-projection by the neighbouring bands); allows the
  /// relaxed hypothesis set s < 2, t < 1, m + s + t > 0.
  bool localized = true;
};

/// a_j = 2^{(s+t-1)j} |P_j [f, Delta_j] g|_{H^m} / (|f|_{H^{m+s}}|g|_{H^t} + |f|_{H^s}|g|_{H^{m+t}})
/// over the active bands. profile = a_j, ratio = l2 norm of the profile.
InequalityTrial verify_commutator_estimate(const SpectralField& f, const SpectralField& g,
                                           const CommutatorParams& params);

/// Same as verify_commutator_estimate for several parameter sets sharing one
/// (f, g) pair; the commutator fields are computed once.
std::vector<InequalityTrial> verify_commutator_estimates(const SpectralField& f,
                                                         const SpectralField& g,
                                                         std::span<const CommutatorParams> params);

enum class BernsteinForm {
  derivative,  ///< |Lambda^s D v|_p / (2^{js} |D v|_p), bounded above and below
  embedding,   ///< |D v|_q / (2^{(2/p-2/q)j} |D v|_p), bounded above
};

/// Per-band Bernstein ratios of one field. Bands where Delta_j v vanishes are skipped.
/// profile holds the ratio per active band (NaN when skipped); ratio = max,
/// extras["min"] = min, extras["spread"] = max / min.
InequalityTrial verify_bernstein_field(const SpectralField& v, BernsteinForm form, double p,
                                       double q, double s);

/// Bernstein ratios over a random ensemble on each grid size; verdict by the
/// refinement rule. For the derivative form the spread must also stay below 2^{2|s|}.
ConstantReport verify_bernstein(std::span<const int> grid_sizes, std::size_t ensemble,
                                std::uint64_t seed, BernsteinForm form, double p, double q,
                                double s, double threshold = 0.1);

/// Largest relative increase between consecutive entries; 0 for fewer than two.
double refinement_growth(std::span<const double> values);

struct InequalitySuiteConfig {
  std::uint64_t seed = 1;
  std::size_t ensemble = 50;
  std::vector<int> grid_sizes{64, 128};
  std::vector<int> commutator_grid_sizes{64, 128, 256};
  double threshold = 0.1;
  /// Spectral slope of the random pairs used for the commutator ensemble.
  double commutator_alpha = 5.0;
  std::size_t extra_commutator_tuples = 4;
};

/// Runs every inequality over its ensemble. Deterministic for fixed config.
std::vector<ConstantReport> run_inequality_suite(const InequalitySuiteConfig& config);

/// The commutator parameter sets of the suite: the two estimates used in the
/// critical-case energy argument at gamma = 1, then `extra` random admissible sets.
std::vector<CommutatorParams> commutator_tuples(std::uint64_t seed, std::size_t extra);

}  // namespace sqg
