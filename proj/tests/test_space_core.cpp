#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hadamard/hadamard.hpp"
#include "oracles.hpp"

using namespace hadamard;

namespace {

std::shared_ptr<const TreeSpace> root_ab() {
  return make_tree(TreeSpec{{"root", "a", "b"}, {{"root", "a", 1.0}, {"root", "b", 2.0}}});
}

template <class Fn>
void expect_code(Errc code, Fn&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

std::vector<SpaceHandle> all_spaces() {
  return {make_euclidean(3), make_hyperbolic(2), make_tree(random_tree(20, 11)),
          make_product(make_euclidean(1), make_tree(tripod_tree()))};
}

}  // namespace

TEST(Distance, EuclideanPythagoras) {
  auto e = make_euclidean(2);
  EXPECT_DOUBLE_EQ(distance(*e, e->make_point({0, 0}), e->make_point({3, 4})), 5.0);
}

TEST(Distance, SelfIsZeroEverywhere) {
  Rng rng(3);
  for (const auto& s : all_spaces()) {
    const Point p = s->sample(rng);
    EXPECT_EQ(distance(*s, p, p), 0.0) << s->describe();
  }
}

TEST(Distance, TreePathSum) {
  auto t = root_ab();
  EXPECT_DOUBLE_EQ(distance(*t, t->vertex("a"), t->vertex("b")), 3.0);
  const double ref = oracle::tree_distance(t->spec(), {"root", "a", 1.0}, {"root", "b", 2.0});
  EXPECT_DOUBLE_EQ(ref, 3.0);
}

TEST(Distance, MismatchedSpaces) {
  auto e1 = make_euclidean(2), e2 = make_euclidean(2);
  expect_code(Errc::space_mismatch, [&] { distance(*e1, e1->make_point({0, 0}), e2->make_point({1, 1})); });
}

TEST(GeodesicPoint, Midpoint) {
  auto e = make_euclidean(2);
  const Point m = geodesic_point(*e, e->make_point({0, 0}), e->make_point({2, 0}), 0.5);
  EXPECT_EQ(m, e->make_point({1, 0}));
}

TEST(GeodesicPoint, EndpointsAndDomain) {
  auto h = make_hyperbolic(2);
  Rng rng(5);
  const Point p = h->sample(rng), q = h->sample(rng);
  EXPECT_EQ(geodesic_point(*h, p, q, 0.0), p);
  EXPECT_EQ(geodesic_point(*h, p, q, 1.0), q);
  expect_code(Errc::domain_error, [&] { geodesic_point(*h, p, q, 1.5); });
  expect_code(Errc::domain_error, [&] { geodesic_point(*h, p, q, -0.1); });
}

TEST(GeodesicPoint, TreeWalkHitsRoot) {
  auto t = root_ab();
  const Point r = geodesic_point(*t, t->vertex("a"), t->vertex("b"), 1.0 / 3.0);
  EXPECT_LT(t->dist(r, t->vertex("root")), 1e-15);
  EXPECT_EQ(t->format(r), "v:root");
}

TEST(GeodesicPoint, ConstantSpeed) {
  Rng rng(8);
  for (const auto& s : all_spaces()) {
    for (int i = 0; i < 300; ++i) {
      const GeodesicSegment g(s, s->sample(rng), s->sample(rng));
      const double a = rng.uniform(), b = rng.uniform();
      EXPECT_NEAR(s->dist(g.eval(a), g.eval(b)), g.length() * std::abs(a - b), 1e-10) << s->describe();
    }
  }
}

TEST(ExtendGeodesic, EuclideanReflection) {
  auto e = make_euclidean(2);
  const Point y = extend_geodesic(*e, e->make_point({0, 0}), e->make_point({1, 0}), -1.0);
  EXPECT_EQ(y, e->make_point({-1, 0}));
}

TEST(ExtendGeodesic, HyperbolicDoubling) {
  auto h = make_hyperbolic(2);
  const Point p = h->origin();
  // Spatial coordinate sinh(1) puts x at distance exactly 1 from the origin.
  const Point x = h->lift({std::sinh(1.0), 0.0});
  ASSERT_NEAR(h->dist(p, x), 1.0, 1e-14);
  const Point y = extend_geodesic(*h, p, x, 2.0);
  EXPECT_NEAR(h->dist(p, y), 2.0, 1e-12);
  EXPECT_NEAR(h->dist(x, y), 1.0, 1e-12);
  EXPECT_TRUE(h->valid_coords(y.coords()));
  EXPECT_NEAR(oracle::hyperbolic_distance({y.coords().begin(), y.coords().end()}, {p.coords().begin(), p.coords().end()}),
              2.0, 1e-10);
}

TEST(ExtendGeodesic, NegativeWitnessMidpoint) {
  Rng rng(13);
  for (const auto& s : {SpaceHandle(make_euclidean(3)), SpaceHandle(make_hyperbolic(3))}) {
    for (int i = 0; i < 200; ++i) {
      const Point p = s->sample(rng), x = s->sample(rng);
      const Point y = extend_geodesic(*s, p, x, -1.0);
      EXPECT_LT(s->dist(geodesic_point(*s, x, y, 0.5), p), 1e-10) << s->describe();
    }
  }
}

TEST(ExtendGeodesic, TreeLeafHasNoExtension) {
  auto t = make_tree(tripod_tree());
  const Point p = t->on_edge("c", "l0", 0.4);
  expect_code(Errc::no_extension, [&] { extend_geodesic(*t, p, t->vertex("l0"), 2.0); });
  // Toward the branch vertex the geodesic continues into the lowest-index other leg.
  const Point y = extend_geodesic(*t, p, t->vertex("c"), 1.5);
  EXPECT_LT(t->dist(y, t->on_edge("c", "l1", 0.2)), 1e-12);
}

TEST(ExtendGeodesic, ZeroGeodesicRejected) {
  auto e = make_euclidean(1);
  const Point p = e->make_point({1});
  expect_code(Errc::domain_error, [&] { extend_geodesic(*e, p, p, 2.0); });
}

TEST(ComparisonAngle, RightAngleAndConventions) {
  auto e = make_euclidean(2);
  const Point o = e->make_point({0, 0}), x = e->make_point({1, 0}), y = e->make_point({0, 1});
  EXPECT_DOUBLE_EQ(comparison_angle(*e, o, x, y).radians, std::numbers::pi / 2);
  EXPECT_EQ(comparison_angle(*e, o, o, o).radians, 0.0);
  EXPECT_EQ(comparison_angle(*e, o, o, y).radians, std::numbers::pi / 2);
  EXPECT_EQ(comparison_angle(*e, o, y, o).radians, std::numbers::pi / 2);
  EXPECT_EQ(comparison_angle(*e, o, x, y).method, AngleMethod::exact_closed_form);
}

TEST(AlexandrovAngle, ExactCases) {
  auto e = make_euclidean(2);
  const Point o = e->make_point({0, 0}), x = e->make_point({1, 0}), y = e->make_point({0, 1});
  const AngleResult r = alexandrov_angle(*e, o, x, y);
  EXPECT_DOUBLE_EQ(r.radians, std::numbers::pi / 2);
  EXPECT_EQ(r.estimated_error, 0.0);
  EXPECT_EQ(alexandrov_angle(*e, o, x, x).radians, 0.0);
  expect_code(Errc::zero_direction, [&] { alexandrov_angle(*e, o, o, y); });
}

TEST(AlexandrovAngle, TreeBranchIsStraight) {
  auto t = make_tree(tripod_tree());
  const Point c = t->vertex("c");
  EXPECT_DOUBLE_EQ(alexandrov_angle(*t, c, t->on_edge("c", "l0", 0.3), t->on_edge("c", "l2", 0.6)).radians,
                   std::numbers::pi);
  EXPECT_EQ(alexandrov_angle(*t, c, t->on_edge("c", "l1", 0.3), t->vertex("l1")).radians, 0.0);
}

TEST(AlexandrovAngle, NumericFallbackAgreesWithHyperbolicClosedForm) {
  auto h = make_hyperbolic(2);
  Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    const Point p = h->sample(rng), x = h->sample(rng), y = h->sample(rng);
    const AngleResult num = numeric_alexandrov_angle(*h, p, x, y);
    EXPECT_EQ(num.method, AngleMethod::comparison_limit_extrapolated);
    EXPECT_NEAR(num.radians, *h->exact_angle(p, x, y), 1e-6);
  }
}

TEST(AlexandrovAngle, NoLargerThanComparison) {
  Rng rng(22);
  for (const auto& s : all_spaces()) {
    for (int i = 0; i < 500; ++i) {
      const Point p = s->sample(rng), x = s->sample(rng), y = s->sample(rng);
      EXPECT_LE(alexandrov_angle(*s, p, x, y).radians, comparison_angle(*s, p, x, y).radians + 1e-9) << s->describe();
    }
  }
}

TEST(TangentDistance, Examples) {
  auto e = make_euclidean(2);
  const Point o = e->make_point({0, 0});
  const auto u = TangentVec::make(e, o, 3.0, e->make_point({1, 0}));
  const auto v = TangentVec::make(e, o, 1.0, e->make_point({2, 0}));
  EXPECT_DOUBLE_EQ(tangent_distance(u, v), 2.0);
  EXPECT_DOUBLE_EQ(tangent_distance(u, TangentVec::zero_at(e, o)), 3.0);
  const auto a = TangentVec::make(e, o, 1.0, e->make_point({1, 0}));
  const auto b = TangentVec::make(e, o, 1.0, e->make_point({0, 5}));
  EXPECT_NEAR(tangent_distance(a, b), std::sqrt(2.0), 1e-15);
}

TEST(TangentDistance, BaseMismatch) {
  auto e = make_euclidean(2);
  const auto u = TangentVec::zero_at(e, e->make_point({0, 0}));
  const auto v = TangentVec::zero_at(e, e->make_point({1, 0}));
  expect_code(Errc::base_mismatch, [&] { tangent_distance(u, v); });
  expect_code(Errc::base_mismatch, [&] { tangent_inner(u, v); });
}

TEST(TangentVec, ZeroFlagAndEquivalence) {
  auto e = make_euclidean(2);
  const Point o = e->make_point({0, 0});
  EXPECT_TRUE(TangentVec::make(e, o, 0.0, e->make_point({1, 0})).is_zero());
  EXPECT_TRUE(TangentVec::make(e, o, 2.0, o).is_zero());
  EXPECT_EQ(TangentVec::make(e, o, 2.0, o).norm(), 0.0);
  // Same direction via different witnesses.
  EXPECT_TRUE(equivalent(TangentVec::make(e, o, 2.0, e->make_point({1, 1})),
                         TangentVec::make(e, o, 2.0, e->make_point({3, 3}))));
  EXPECT_FALSE(equivalent(TangentVec::make(e, o, 2.0, e->make_point({1, 1})),
                          TangentVec::make(e, o, 2.0, e->make_point({1, -1}))));
}

TEST(TangentInner, Examples) {
  auto e = make_euclidean(2);
  const Point o = e->make_point({0, 0});
  const auto u = TangentVec::make(e, o, 2.0, e->make_point({1, 0}));
  EXPECT_DOUBLE_EQ(tangent_inner(u, u), 4.0);
  EXPECT_EQ(tangent_inner(u, TangentVec::zero_at(e, o)), 0.0);
  const auto v = TangentVec::make(e, o, 3.0, e->make_point({std::cos(std::numbers::pi / 3), std::sin(std::numbers::pi / 3)}));
  EXPECT_NEAR(tangent_inner(u, v), 3.0, 1e-14);
}

TEST(TangentCone, MetricAndInnerProductProperties) {
  Rng rng(31);
  for (const auto& s : all_spaces()) {
    for (int i = 0; i < 400; ++i) {
      const Point p = s->sample(rng);
      auto vec = [&](bool zero) {
        return zero ? TangentVec::zero_at(s, p) : TangentVec::make(s, p, rng.uniform(0.0, 2.0), s->sample(rng));
      };
      // Exercise both-nonzero, one-zero and middle-zero triangles.
      const int mode = i % 3;
      const TangentVec u = vec(false), w = vec(mode == 2), v = vec(mode == 1);
      const double duv = tangent_distance(u, v), duw = tangent_distance(u, w), dwv = tangent_distance(w, v);
      EXPECT_GE(duv - std::abs(u.norm() - v.norm()), -1e-9);
      EXPECT_LE(duv, u.norm() + v.norm() + 1e-9);
      EXPECT_LE(duv, duw + dwv + 1e-9) << s->describe();
      const double g = tangent_inner(u, v);
      EXPECT_NEAR(tangent_inner(u, u), u.norm() * u.norm(), 1e-12);
      EXPECT_NEAR(g, tangent_inner(v, u), 1e-12);
      EXPECT_LE(std::abs(g), u.norm() * v.norm() + 1e-10);
      const double t = rng.uniform(0.0, 3.0);
      EXPECT_NEAR(tangent_inner(u.scaled(t), v), t * g, 1e-10);
      // g_p as polarization of d_p.
      EXPECT_NEAR(g, 0.5 * (u.norm() * u.norm() + v.norm() * v.norm() - duv * duv), 1e-9);
    }
  }
}

TEST(QuasiInner, Examples) {
  auto e = make_euclidean(2);
  const Point o = e->make_point({0, 0}), x = e->make_point({1, 0}), y = e->make_point({0, 1});
  EXPECT_NEAR(quasi_inner(*e, o, x, y), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(quasi_inner(*e, o, e->make_point({3, 4}), e->make_point({3, 4})), 25.0);
  auto t = root_ab();
  EXPECT_DOUBLE_EQ(quasi_inner(*t, t->vertex("root"), t->vertex("a"), t->vertex("b")), -2.0);
}

TEST(QuasiInner, TangentProductDominates) {
  Rng rng(41);
  for (const auto& s : all_spaces()) {
    for (int i = 0; i < 1000; ++i) {
      const Point p = s->sample(rng), x = s->sample(rng), y = s->sample(rng);
      const double a = rng.uniform(0.0, 2.0), b = rng.uniform(0.0, 2.0);
      const auto u = TangentVec::make(s, p, a * s->dist(p, x), x);
      const auto v = TangentVec::make(s, p, b * s->dist(p, y), y);
      EXPECT_GE(tangent_inner(u, v) - quasi_inner(*s, p, x, y, a, b), -1e-9) << s->describe();
    }
  }
}

TEST(CnResidual, Examples) {
  Rng rng(51);
  auto e = make_euclidean(4);
  for (int i = 0; i < 100; ++i) {
    const GeodesicSegment g(e, e->sample(rng), e->sample(rng));
    EXPECT_NEAR(cn_residual(g, e->sample(rng), rng.uniform()), 0.0, 1e-12);
  }
  auto h = make_hyperbolic(2);
  const GeodesicSegment g(h, h->sample(rng), h->sample(rng));
  EXPECT_NEAR(cn_residual(g, h->sample(rng), 0.0), 0.0, 1e-12);
  auto t = make_tree(tripod_tree());
  const GeodesicSegment across(t, t->vertex("l0"), t->vertex("l1"));
  // 0.5*4 + 0.5*4 - 0.25*4 - 1 = 2 for v = l2.
  EXPECT_NEAR(cn_residual(across, t->vertex("l2"), 0.5), 2.0, 1e-12);
}

TEST(CnResidual, RejectsForeignSegment) {
  auto a = make_euclidean(1), b = make_euclidean(1);
  const GeodesicSegment g(a, a->make_point({0}), a->make_point({1}));
  expect_code(Errc::space_mismatch, [&] { cn_residual(*b, g, b->make_point({0}), 0.5); });
}

TEST(QuadResidual, Examples) {
  auto e = make_euclidean(2);
  const Point p = e->make_point({0.3, 0.1}), q = e->make_point({-1, 2});
  EXPECT_EQ(quad_residual(*e, p, p, q, q), 0.0);
  const Point a = e->make_point({0, 0}), b = e->make_point({1, 0}), c = e->make_point({1, 1}), d = e->make_point({0, 1});
  // Corners in cyclic order: 2 + 2 + 2 - 1 - 1.
  EXPECT_NEAR(quad_residual(*e, a, b, c, d), 4.0, 1e-14);
  EXPECT_NEAR(quad_residual(*e, a, d, b, c), 0.0, 1e-14);
  auto h = make_hyperbolic(2);
  Rng rng(61);
  EXPECT_GE(quad_residual(*h, h->sample(rng), h->sample(rng), h->sample(rng), h->sample(rng)), -1e-9);
}
