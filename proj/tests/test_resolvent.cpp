#include <cmath>

#include <gtest/gtest.h>

#include "catalog_fixtures.hpp"
#include "hadamard/hadamard.hpp"

using namespace hadamard;

namespace {

template <class Fn>
void expect_code(Errc code, Fn&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Resolvent, ZeroIsIdentityAndConfigIsValidated) {
  auto e = make_euclidean(2);
  const MonotoneField f = quadratic_field(e, e->make_point({1, 1}));
  const Point x = e->make_point({3, -2});
  EXPECT_EQ(resolvent(f, 0.0, x), x);
  expect_code(Errc::domain_error, [&] { resolvent(f, -1.0, x); });
  expect_code(Errc::domain_error, [&] { resolvent(f, std::nan(""), x); });
  expect_code(Errc::domain_error, [&] { resolvent(f, ResolventConfig{1.0, 0.0, 10}, x); });
  expect_code(Errc::domain_error, [&] { resolvent(f, ResolventConfig{1.0, 1e-10, 0}, x); });
  expect_code(Errc::space_mismatch, [&] { resolvent(f, 1.0, make_euclidean(2)->make_point({0, 0})); });
}

TEST(Resolvent, QuadraticOnTheLine) {
  auto e = make_euclidean(1);
  const MonotoneField f = quadratic_field(e, e->make_point({0}));
  EXPECT_NEAR(resolvent(f, 1.0, e->make_point({1}))[0], 0.5, 1e-15);
  EXPECT_NEAR(resolvent(f, 3.0, e->make_point({8}))[0], 2.0, 1e-15);
}

TEST(ResolventIdentity, HoldsOnTheCatalog) {
  for (const auto& sc : fixtures::all_cases()) {
    for (const auto& nf : sc.fields) {
      Rng rng(11);
      double worst = 0.0;
      for (int i = 0; i < 60; ++i) {
        const Point x = sc.space->sample(rng);
        const double lambda = rng.log_uniform(1e-2, 1e2);
        const double mu = lambda * rng.uniform(0.01, 1.0);
        worst = std::max(worst, resolvent_identity_residual(nf.field, lambda, mu, x));
      }
      EXPECT_LE(worst, 1e-8) << sc.label << " " << nf.label;
    }
  }
}

TEST(ResolventIdentity, ParameterOrder) {
  auto e = make_euclidean(1);
  const MonotoneField f = quadratic_field(e, e->make_point({0}));
  expect_code(Errc::domain_error, [&] { resolvent_identity_residual(f, 1.0, 2.0, e->make_point({1})); });
  expect_code(Errc::domain_error, [&] { resolvent_identity_residual(f, 1.0, 0.0, e->make_point({1})); });
  EXPECT_NEAR(resolvent_identity_residual(f, 1.0, 1.0, e->make_point({1})), 0.0, 1e-15);
}

TEST(FirmNonexpansiveness, QuadraticProfile) {
  auto e = make_euclidean(1);
  const MonotoneField f = quadratic_field(e, e->make_point({0}));
  // J_1 halves distances to 0, so phi(t) = 1 - t/2.
  const auto prof = firm_nonexpansiveness_profile(f, 1.0, e->make_point({0}), e->make_point({1}));
  ASSERT_EQ(prof.size(), 11u);
  for (const auto& s : prof) EXPECT_NEAR(s.phi, 1.0 - 0.5 * s.t, 1e-15);
  EXPECT_NEAR(profile_max_increase(prof), -0.05, 1e-15);
}

TEST(FirmNonexpansiveness, GridValidation) {
  auto e = make_euclidean(1);
  const MonotoneField f = quadratic_field(e, e->make_point({0}));
  const Point x = e->make_point({0}), y = e->make_point({1});
  expect_code(Errc::domain_error, [&] { firm_nonexpansiveness_profile(f, 1.0, x, y, {0.0, 0.5}); });
  expect_code(Errc::domain_error, [&] { firm_nonexpansiveness_profile(f, 1.0, x, y, {0.0, 0.6, 0.5, 1.0}); });
  expect_code(Errc::domain_error, [&] { firm_nonexpansiveness_profile(f, 1.0, x, y, {0.0}); });
}

TEST(FirmNonexpansiveness, CatalogProfilesAndInequality) {
  for (const auto& sc : fixtures::all_cases()) {
    for (const auto& nf : sc.fields) {
      Rng rng(12);
      for (int i = 0; i < 25; ++i) {
        const Point x = sc.space->sample(rng), y = sc.space->sample(rng);
        const double lambda = rng.log_uniform(1e-2, 1e2);
        const auto prof = firm_nonexpansiveness_profile(nf.field, lambda, x, y);
        EXPECT_LE(profile_max_increase(prof), 1e-9) << sc.label << " " << nf.label;
        EXPECT_GE(firm_inequality_residual(nf.field, lambda, x, y), -1e-8) << sc.label << " " << nf.label;
      }
    }
  }
}

TEST(Yosida, Examples) {
  auto e = make_euclidean(1);
  const MonotoneField f = quadratic_field(e, e->make_point({0}));
  const YosidaVec y = yosida(f, 1.0, e->make_point({2}));
  EXPECT_NEAR(y.norm_value, 1.0, 1e-15);
  EXPECT_NEAR(y.vec.norm(), 1.0, 1e-15);
  // Points away from the minimizer: -gamma_{x, Jx} points away from 0.
  EXPECT_GT(y.vec.witness()[0], 2.0);
  EXPECT_TRUE(yosida(f, 1.0, e->make_point({0})).vec.is_zero());
  expect_code(Errc::domain_error, [&] { yosida(f, 0.0, e->make_point({1})); });

  auto t = make_tree(tripod_tree());
  const MonotoneField ft = quadratic_field(t, t->vertex("c"));
  for (double lambda : {0.5, 1.0, 4.0}) {
    EXPECT_NEAR(yosida(ft, lambda, t->on_edge("c", "l0", 0.7)).norm_value, 0.7 / (1.0 + lambda), 1e-14);
  }
}

TEST(Yosida, BoundedByMinimalNorm) {
  for (const auto& sc : fixtures::all_cases()) {
    for (const auto& nf : sc.fields) {
      if (!nf.closed_min_norm) continue;
      Rng rng(13);
      for (int i = 0; i < 20; ++i) {
        const Point x = sc.space->sample(rng);
        const double bound = field_min_norm(nf.field, x);
        double prev = 0.0;
        for (double lambda = 1e3; lambda >= 1e-3 * 0.999; lambda /= 10.0) {
          const double n = yosida(nf.field, lambda, x).norm_value;
          EXPECT_LE(n, bound + 1e-9) << sc.label << " " << nf.label;
          // lambda -> ||A_lambda x|| is nonincreasing.
          EXPECT_GE(n, prev - 1e-9) << sc.label << " " << nf.label;
          prev = n;
        }
      }
    }
  }
}

TEST(NegativeGeodesic, ResidualIsNonnegative) {
  auto e = make_euclidean(3);
  auto h = make_hyperbolic(2);
  Rng rng(14);
  for (int i = 0; i < 300; ++i) {
    const Point p = e->sample(rng), x = e->sample(rng), q = e->sample(rng);
    EXPECT_NEAR(negative_geodesic_residual(e, p, x, q), 0.0, 1e-9);
    const Point hp = h->sample(rng), hx = h->sample(rng), hq = h->sample(rng);
    EXPECT_GE(negative_geodesic_residual(h, hp, hx, hq), -1e-9);
  }
  auto t = make_tree(tripod_tree());
  // At c the reverse of the l0 leg is the l1 leg; both make angle pi with the l2 leg.
  const double r = negative_geodesic_residual(t, t->vertex("c"), t->vertex("l0"), t->vertex("l2"));
  EXPECT_NEAR(r, 2.0, 1e-15);
}

TEST(Limits, QuadraticPlusIndicatorInThePlane) {
  auto e = make_euclidean(2);
  const Point a = e->make_point({2, 1});
  const MonotoneField f = quadratic_plus_indicator_field(e, a, Ball{e->make_point({0, 0}), 1.0});
  const Point x = e->make_point({-1.5, 0.5});
  const auto zero = resolvent_limit_zero(f, x, {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7});
  ASSERT_TRUE(zero.reference);
  EXPECT_LT(e->dist(*zero.reference, project_convex(*e, Ball{e->make_point({0, 0}), 1.0}, x)), 1e-15);
  EXPECT_LE(zero.rows.back().dist_to_limit, 1e-5);
  for (std::size_t i = 1; i < zero.rows.size(); ++i) {
    EXPECT_LE(zero.rows[i].dist_to_limit, zero.rows[i - 1].dist_to_limit + 1e-12);
  }
  EXPECT_TRUE(std::isnan(zero.rows.front().increment));

  const auto inf = resolvent_limit_infinity(f, x, {1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7}, true);
  ASSERT_TRUE(inf.reference);
  const double n = std::hypot(2.0, 1.0);
  EXPECT_NEAR((*inf.reference)[0], 2.0 / n, 1e-15);
  EXPECT_NEAR((*inf.reference)[1], 1.0 / n, 1e-15);
  EXPECT_LE(inf.rows.back().dist_to_limit, 1e-5);
  for (std::size_t i = 1; i < inf.rows.size(); ++i) {
    EXPECT_LE(inf.rows[i].dist_to_limit, inf.rows[i - 1].dist_to_limit + 1e-12);
  }
}

TEST(Limits, SchedulesAndMissingWitnesses) {
  auto e = make_euclidean(1);
  MonotoneField f = quadratic_field(e, e->make_point({0}));
  const Point x = e->make_point({1});
  expect_code(Errc::schedule_error, [&] { resolvent_limit_zero(f, x, {}); });
  expect_code(Errc::schedule_error, [&] { resolvent_limit_zero(f, x, {1e-1, 1e-1}); });
  expect_code(Errc::schedule_error, [&] { resolvent_limit_zero(f, x, {1e-2, 1e-1}); });
  expect_code(Errc::schedule_error, [&] { resolvent_limit_infinity(f, x, {10.0, 1.0}); });
  expect_code(Errc::schedule_error, [&] { resolvent_limit_infinity(f, x, {-1.0, 1.0}); });
  f.zero_set.reset();
  f.domain.reset();
  expect_code(Errc::no_zero_set, [&] { resolvent_limit_infinity(f, x, {1.0, 10.0}, true); });
  const auto rep = resolvent_limit_infinity(f, x, {1.0, 10.0, 100.0});
  EXPECT_FALSE(rep.reference);
  EXPECT_TRUE(std::isnan(rep.rows[1].dist_to_limit));
  EXPECT_NEAR(rep.rows[1].increment, 0.5 - 1.0 / 11.0, 1e-15);
  EXPECT_FALSE(resolvent_limit_zero(f, x, {1.0, 0.1}).reference);
}

TEST(Limits, ComplementaryFieldsReachFixedPoints) {
  for (const auto& sc : fixtures::all_cases()) {
    for (const auto& nf : sc.fields) {
      if (nf.label.rfind("complementary", 0) != 0) continue;
      Rng rng(15);
      const Point x = sc.space->sample(rng);
      const auto rep = resolvent_limit_infinity(nf.field, x, {1e2, 1e4, 1e6, 1e8}, true);
      EXPECT_LE(rep.rows.back().dist_to_limit, 1e-5) << sc.label << " " << nf.label;
    }
  }
}

TEST(Continuity, ScanStaysUnderBound) {
  for (const auto& sc : fixtures::all_cases()) {
    for (const auto& nf : sc.fields) {
      Rng rng(16);
      const Point x = sc.space->sample(rng);
      for (const auto& row : resolvent_continuity_scan(nf.field, x, 0.0, 5.0, 50)) {
        EXPECT_LE(row.lhs, row.rhs + 1e-9) << sc.label << " " << nf.label << " mu=" << row.mu;
      }
    }
  }
  auto e = make_euclidean(1);
  const MonotoneField f = quadratic_field(e, e->make_point({0}));
  expect_code(Errc::domain_error, [&] { resolvent_continuity_scan(f, e->make_point({1}), 2.0, 1.0, 5); });
  expect_code(Errc::domain_error, [&] { resolvent_continuity_scan(f, e->make_point({1}), 0.0, 1.0, 0); });
}
