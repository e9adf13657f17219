#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "sqg/errors.hpp"
#include "sqg/inequalities.hpp"
#include "sqg/littlewood_paley.hpp"
#include "sqg/spectral_ops.hpp"
#include "test_support.hpp"

namespace sqg {
namespace {

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  const int count = static_cast<int>(std::ceil(per_decade * std::log10(hi / lo)));
  std::vector<double> t;
  for (int i = 0; i <= count; ++i) t.push_back(lo * std::pow(hi / lo, double(i) / count));
  return t;
}

TEST(SemigroupBlock, SandwichHoldsOnEveryBand) {
  const double t_list[] = {0.01, 0.1, 1.0};
  for (double gamma : {0.6, 1.0, 1.5}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const SpectralField v = test::random_spectral(64, seed, 0.0);
      const BandRange bands = BandRange::for_grid(v.grid());
      for (int j = bands.j_min; j <= bands.j_max; ++j) {
        const auto trial = verify_semigroup_block(v, j, gamma, t_list);
        if (!trial) continue;
        ASSERT_TRUE(trial->holds) << "gamma=" << gamma << " j=" << j << " ratio=" << trial->ratio;
        ASSERT_LE(trial->ratio, 1.0 + 1e-12);
        ASSERT_DOUBLE_EQ(trial->extras.at("lambda"), std::pow(2.0, -gamma - 1.0));
        ASSERT_DOUBLE_EQ(trial->extras.at("lambda_prime"), std::pow(2.0, gamma - 1.0));
      }
    }
  }
}

TEST(SemigroupBlock, EmptyBandAndBadArguments) {
  const SpectralField v = test::sine_mode(64, 1, 0);  // bands 2 and 3 only
  const double t_list[] = {0.1};
  EXPECT_FALSE(verify_semigroup_block(v, 6, 1.0, t_list).has_value());
  EXPECT_THROW(verify_semigroup_block(v, 3, 0.0, t_list), InvalidArgument);
  const double negative[] = {-0.1};
  EXPECT_THROW(verify_semigroup_block(v, 3, 1.0, negative), InvalidArgument);
}

TEST(LinearSmoothing, WeightedNormVanishesAsTimeShrinks) {
  const auto t_grid = log_grid(1e-4, 1.0, 64);
  for (double s : {0.25, 0.5}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const SpectralField v = test::random_spectral(64, seed, 0.0);
      const InequalityTrial trial = verify_linear_smoothing(v, 1.0, s, t_grid);
      ASSERT_EQ(trial.profile.size(), t_grid.size());
      EXPECT_LT(trial.profile[0], trial.profile[1]);
      EXPECT_LT(trial.profile[1], trial.profile[2]);
      EXPECT_EQ(trial.extras.at("trend"), 1.0);
      EXPECT_TRUE(trial.holds);
      EXPECT_GT(trial.extras.at("time_norm"), 0.0);
      EXPECT_TRUE(std::isfinite(trial.ratio));
    }
  }
}

TEST(LinearSmoothing, TimeNormNeedsDenseQuadrature) {
  const SpectralField v = test::random_spectral(32, 1, 0.0);
  EXPECT_THROW(verify_linear_smoothing(v, 1.0, 0.25, log_grid(1e-3, 1.0, 16)), InvalidArgument);
  EXPECT_NO_THROW(verify_linear_smoothing(v, 1.0, 0.75, log_grid(1e-3, 1.0, 16)));
}

TEST(Products, HypothesesAreHardErrors) {
  const SpectralField f = test::random_spectral(32, 1, 3.0);
  const SpectralField g = test::random_spectral(32, 2, 3.0);
  EXPECT_THROW(verify_product_estimates(f, g, ProductEstimate::paraproduct, {1.0, 0.5}), InvalidArgument);
  EXPECT_THROW(verify_product_estimates(f, g, ProductEstimate::remainder, {-0.5, 0.5}), InvalidArgument);
  EXPECT_THROW(verify_product_estimates(f, g, ProductEstimate::product, {0.5, 1.0}), InvalidArgument);
  ProductParams bad_leibniz{0.5, 0.0, 2.0, 4.0, 4.0, 3.0, 4.0};
  EXPECT_THROW(verify_product_estimates(f, g, ProductEstimate::leibniz, bad_leibniz), InvalidArgument);
  ProductParams ok_leibniz{0.5, 0.0, 2.0, 3.0, 6.0, 4.0, 4.0};
  EXPECT_NO_THROW(verify_product_estimates(f, g, ProductEstimate::leibniz, ok_leibniz));
}

TEST(Products, RatiosFiniteAndNonnegative) {
  const SpectralField f = test::random_spectral(64, 3, 3.0);
  const SpectralField g = test::random_spectral(64, 4, 3.0);
  for (ProductEstimate kind : {ProductEstimate::paraproduct, ProductEstimate::remainder, ProductEstimate::product}) {
    const InequalityTrial t = verify_product_estimates(f, g, kind, {0.9, 0.5});
    EXPECT_TRUE(t.holds);
    EXPECT_GE(t.ratio, 0.0);
    EXPECT_TRUE(std::isfinite(t.ratio));
  }
}

TEST(Commutator, HypothesesAreHardErrors) {
  const SpectralField f = test::random_spectral(32, 1, 5.0);
  const SpectralField g = test::random_spectral(32, 2, 5.0);
  EXPECT_THROW(verify_commutator_estimate(f, g, {0.0, 2.0, 0.0, true}), InvalidArgument);
  EXPECT_THROW(verify_commutator_estimate(f, g, {0.0, 1.0, 1.0, true}), InvalidArgument);
  EXPECT_THROW(verify_commutator_estimate(f, g, {-2.0, 1.0, 0.5, true}), InvalidArgument);
  EXPECT_THROW(verify_commutator_estimate(f, g, {0.0, 0.5, 0.5, false}), InvalidArgument);
  EXPECT_NO_THROW(verify_commutator_estimate(f, g, {0.0, 1.0, 0.25, false}));
}

TEST(Commutator, ProfileIsScaleInvariant) {
  const SpectralField f = test::random_spectral(64, 5, 5.0);
  const SpectralField g = test::random_spectral(64, 6, 5.0);
  for (const CommutatorParams& p : commutator_tuples(1, 4)) {
    const InequalityTrial a = verify_commutator_estimate(f, g, p);
    for (double c : {3.0, 1e-3, -7.5}) {
      const InequalityTrial b = verify_commutator_estimate(f * c, g * c, p);
      ASSERT_EQ(a.profile.size(), b.profile.size());
      for (std::size_t j = 0; j < a.profile.size(); ++j) {
        ASSERT_NEAR(a.profile[j], b.profile[j], 1e-13 * a.ratio) << j;
      }
      ASSERT_NEAR(a.ratio, b.ratio, 1e-13 * a.ratio);
    }
  }
}

TEST(Commutator, BatchedMatchesSingle) {
  const SpectralField f = test::random_spectral(32, 7, 5.0);
  const SpectralField g = test::random_spectral(32, 8, 5.0);
  const auto tuples = commutator_tuples(3, 3);
  const auto batched = verify_commutator_estimates(f, g, tuples);
  ASSERT_EQ(batched.size(), tuples.size());
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const InequalityTrial single = verify_commutator_estimate(f, g, tuples[i]);
    EXPECT_NEAR(batched[i].ratio, single.ratio, 1e-14 * single.ratio);
  }
}

TEST(Commutator, TuplesAreDeterministicAndAdmissible) {
  const auto a = commutator_tuples(9, 6);
  const auto b = commutator_tuples(9, 6);
  ASSERT_EQ(a.size(), 8u);
  EXPECT_EQ(a[0].m, 0.0);
  EXPECT_EQ(a[0].s, 1.0);
  EXPECT_EQ(a[0].t, 0.25);
  EXPECT_DOUBLE_EQ(a[1].s, 4.0 / 3.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].m, b[i].m);
    EXPECT_EQ(a[i].t, b[i].t);
    EXPECT_LT(a[i].s, 2.0);
    EXPECT_LT(a[i].t, 1.0);
    EXPECT_GT(a[i].m + a[i].s + a[i].t, 0.0);
  }
}

TEST(Bernstein, DerivativeRatioBandIndependent) {
  const SpectralField v = test::random_spectral(128, 2, 1.0);
  for (double p : {2.0, kInfinity}) {
    const InequalityTrial t = verify_bernstein_field(v, BernsteinForm::derivative, p, p, 1.0);
    EXPECT_GT(t.extras.at("min"), 0.0);
    EXPECT_LE(t.extras.at("spread"), 4.0);
    EXPECT_TRUE(t.holds);
  }
}

TEST(Bernstein, EmbeddingBounded) {
  const SpectralField v = test::random_spectral(128, 3, 1.0);
  const InequalityTrial t = verify_bernstein_field(v, BernsteinForm::embedding, 2.0, kInfinity, 0.0);
  EXPECT_TRUE(std::isfinite(t.ratio));
  EXPECT_GT(t.ratio, 0.0);
  EXPECT_THROW(verify_bernstein_field(v, BernsteinForm::embedding, kInfinity, 2.0, 0.0), InvalidArgument);
}

TEST(Refinement, GrowthIsTheLargestRelativeIncrease) {
  EXPECT_EQ(refinement_growth(std::vector<double>{}), 0.0);
  EXPECT_EQ(refinement_growth(std::vector<double>{3.0}), 0.0);
  EXPECT_NEAR(refinement_growth(std::vector<double>{1.0, 1.05, 1.02}), 0.05, 1e-15);
  EXPECT_NEAR(refinement_growth(std::vector<double>{1.0, 0.9, 1.08}), 0.2, 1e-15);
  EXPECT_EQ(refinement_growth(std::vector<double>{2.0, 1.0}), 0.0);
}

TEST(Suite, SmallConfigurationPassesAndIsDeterministic) {
  InequalitySuiteConfig config;
  config.ensemble = 3;
  config.grid_sizes = {32, 64};
  config.commutator_grid_sizes = {32, 64};
  config.extra_commutator_tuples = 1;
  const auto a = run_inequality_suite(config);
  const auto b = run_inequality_suite(config);
  ASSERT_EQ(a.size(), b.size());
  std::set<std::string> ids;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ids.insert(a[i].id);
    EXPECT_EQ(a[i].max_ratio, b[i].max_ratio) << a[i].id;
    EXPECT_TRUE(a[i].verdict) << a[i].id;
    EXPECT_EQ(a[i].violations, 0u) << a[i].id;
  }
  for (const char* id : {"semigroup_block", "linear_smoothing", "paraproduct", "remainder", "product",
                         "leibniz", "commutator_localized", "bernstein_derivative", "bernstein_embedding"}) {
    EXPECT_TRUE(ids.count(id)) << id;
  }
  config.ensemble = 0;
  EXPECT_THROW(run_inequality_suite(config), InvalidArgument);
}

}  // namespace
}  // namespace sqg
