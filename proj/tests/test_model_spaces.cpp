#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "hadamard/hadamard.hpp"
#include "oracles.hpp"

using namespace hadamard;

namespace {

template <class Fn>
std::string expect_code(Errc code, Fn&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
    return e.what();
  }
  return {};
}

oracle::EdgePoint edge_point(const TreeSpace& t, const Point& p) {
  const auto pos = t.decode(p);
  const auto& e = t.edge(pos.edge);
  return {t.vertex_name(e.u), t.vertex_name(e.v), pos.offset};
}

std::vector<double> coords(const Point& p) { return {p.coords().begin(), p.coords().end()}; }

// rho^2(x, y) >= rho^2(x, Px) + rho^2(Px, y) for y in C: the obtuse-angle
// characterization of projections in CAT(0).
void check_projection(const Space& s, const ConvexSet& set, const std::vector<Point>& members, Rng& rng,
                      int trials = 200) {
  for (int i = 0; i < trials; ++i) {
    const Point x = s.sample(rng), x2 = s.sample(rng);
    const Point px = project_convex(s, set, x), px2 = project_convex(s, set, x2);
    EXPECT_TRUE(contains(s, set, px, 1e-9)) << set.kind_name();
    EXPECT_LE(s.dist(px, px2), s.dist(x, x2) + 1e-9) << set.kind_name();
    EXPECT_LE(s.dist(px, project_convex(s, set, px)), 1e-9);
    for (const Point& y : members) {
      const double lhs = s.dist(x, y) * s.dist(x, y);
      const double rhs = s.dist(x, px) * s.dist(x, px) + s.dist(px, y) * s.dist(px, y);
      EXPECT_GE(lhs - rhs, -1e-7 * (1.0 + lhs)) << s.describe() << " " << set.kind_name();
    }
  }
}

}  // namespace

TEST(TreeSpec, RejectsMalformedTrees) {
  expect_code(Errc::invalid_spec, [] { TreeSpace({{"a", "b", "c"}, {{"a", "b", 1.0}}}); });
  expect_code(Errc::invalid_spec,
              [] { TreeSpace({{"a", "b", "c"}, {{"a", "b", 1.0}, {"b", "c", 1.0}, {"c", "a", 1.0}}}); });
  expect_code(Errc::invalid_spec, [] { TreeSpace({{"a", "b", "c", "d"}, {{"a", "b", 1.0}, {"a", "b", 1.0}, {"c", "d", 1.0}}}); });
  expect_code(Errc::invalid_spec, [] { TreeSpace({{"a", "b"}, {{"a", "b", 0.0}}}); });
  expect_code(Errc::invalid_spec, [] { TreeSpace({{"a", "b"}, {{"a", "b", -1.0}}}); });
  expect_code(Errc::invalid_spec, [] { TreeSpace({{"a", "b"}, {{"a", "a", 1.0}}}); });
  expect_code(Errc::invalid_spec, [] { TreeSpace({{"a", "a"}, {{"a", "a", 1.0}}}); });
  expect_code(Errc::invalid_spec, [] { TreeSpace({{"a", "b:c"}, {{"a", "b:c", 1.0}}}); });
  expect_code(Errc::invalid_spec, [] { TreeSpace({{"a", "b"}, {{"a", "z", 1.0}}}); });
}

TEST(TreeSpec, TextFormatReportsLines) {
  const std::string good = "# tripod\nvertex c\nvertex x\nvertex y\nedge c x 1\nedge c y 2.5  # long\n";
  const TreeSpec spec = parse_tree_text(good, "t.tree");
  EXPECT_EQ(spec.vertices.size(), 3u);
  EXPECT_DOUBLE_EQ(spec.edges[1].length, 2.5);
  EXPECT_EQ(parse_tree_text(format_tree_text(spec)).edges.size(), 2u);

  auto msg = expect_code(Errc::invalid_spec, [] { parse_tree_text("vertex a\nvertex b\nedge a b -1\n", "t.tree"); });
  EXPECT_NE(msg.find("t.tree:3"), std::string::npos) << msg;
  msg = expect_code(Errc::invalid_spec, [] { parse_tree_text("vertex a\nvertex a\n", "t.tree"); });
  EXPECT_NE(msg.find("t.tree:2"), std::string::npos) << msg;
  msg = expect_code(Errc::invalid_spec, [] { parse_tree_text("vertex a\nedge a q 1\n", "t.tree"); });
  EXPECT_NE(msg.find("t.tree:2"), std::string::npos) << msg;
  msg = expect_code(Errc::invalid_spec, [] { parse_tree_text("vertex a\nvertex b\nknot a b\n", "t.tree"); });
  EXPECT_NE(msg.find("t.tree:3"), std::string::npos) << msg;
  expect_code(Errc::invalid_spec, [] { parse_tree_text("vertex a\nvertex b\nvertex c\nedge a b 1\n"); });
  expect_code(Errc::config_error, [] { load_tree_file("/nonexistent/x.tree"); });
}

TEST(TreeSpace, DistanceMatchesDijkstra) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto t = make_tree(random_tree(25, seed));
    Rng rng(100 + seed);
    for (int i = 0; i < 400; ++i) {
      const Point p = t->sample(rng), q = t->sample(rng);
      EXPECT_NEAR(t->dist(p, q), oracle::tree_distance(t->spec(), edge_point(*t, p), edge_point(*t, q)), 1e-10);
    }
  }
}

TEST(TreeSpace, VerticesAreCanonical) {
  auto t = make_tree(tripod_tree());
  EXPECT_EQ(t->on_edge("c", "l2", 0.0), t->vertex("c"));
  EXPECT_EQ(t->on_edge("l2", "c", 1.0), t->vertex("c"));
  EXPECT_EQ(t->on_edge("c", "l2", 1.0), t->vertex("l2"));
  EXPECT_EQ(t->on_edge("c", "l1", 0.25), t->on_edge("l1", "c", 0.75));
  expect_code(Errc::domain_error, [&] { t->on_edge("c", "l1", 1.5); });
  expect_code(Errc::invalid_spec, [&] { t->on_edge("l0", "l1", 0.5); });
}

TEST(TreeSpace, FormatParseRoundTrip) {
  auto t = make_tree(random_tree(12, 4));
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    const Point p = t->sample(rng);
    EXPECT_LT(t->dist(t->parse(t->format(p)), p), 1e-15) << t->format(p);
  }
  EXPECT_EQ(t->format(t->vertex("v3")), "v:v3");
  expect_code(Errc::config_error, [&] { t->parse("q:v3"); });
}

TEST(TreeSpace, ExtensionRoom) {
  auto t = make_tree(star_tree({1.0, 2.0, 3.0}));
  const Point p = t->on_edge("c", "l2", 1.0);
  // Continuing past c follows the lowest-index onward edge (to l0).
  EXPECT_DOUBLE_EQ(t->extension_room(t->vertex("c"), p), 1.0);
  EXPECT_DOUBLE_EQ(t->extension_room(p, t->vertex("c")), 2.0);
  EXPECT_EQ(t->extension_room(t->vertex("l2"), p), 0.0);
}

TEST(TreeSpace, SubtreeProjection) {
  auto t = make_tree(tripod_tree());
  const ConvexSet leg = Subtree{{"c", "l0"}};
  const Point x = t->on_edge("c", "l1", 0.7);
  EXPECT_EQ(project_convex(*t, leg, x), t->vertex("c"));
  const Point inside = t->on_edge("c", "l0", 0.3);
  EXPECT_EQ(project_convex(*t, leg, inside), inside);
  const ConvexSet point_set = Subtree{{"l2"}};
  EXPECT_EQ(project_convex(*t, point_set, x), t->vertex("l2"));
  expect_code(Errc::invalid_spec, [&] { project_convex(*t, Subtree{{"l0", "l1"}}, x); });
  expect_code(Errc::invalid_spec, [&] { project_convex(*t, Subtree{{}}, x); });
  expect_code(Errc::unsupported_set, [&] { project_convex(*t, HalfSpace{{1.0}, 0.0}, x); });
}

TEST(TreeSpace, ProjectionProperties) {
  auto t = make_tree(random_tree(20, 31));
  Rng rng(32);
  const ConvexSet sub = Subtree{{"v0", "v1", "v2"}};
  // Subtree {v0, v1, v2} is connected only if the generator attached v1 and v2
  // to earlier members; v1 always hangs off v0, v2 off v0 or v1.
  std::vector<Point> sub_members;
  for (int i = 0; i < 12; ++i) sub_members.push_back(project_convex(*t, sub, t->sample(rng)));
  check_projection(*t, sub, sub_members, rng);

  const Ball ball{t->sample(rng), 2.5};
  std::vector<Point> ball_members;
  for (int i = 0; i < 12; ++i) ball_members.push_back(project_convex(*t, ball, t->sample(rng)));
  check_projection(*t, ball, ball_members, rng);

  const Segment seg{t->sample(rng), t->sample(rng)};
  const GeodesicSegment g(t, seg.p, seg.q);
  std::vector<Point> seg_members;
  for (int i = 0; i <= 10; ++i) seg_members.push_back(g.eval(i / 10.0));
  check_projection(*t, seg, seg_members, rng);
}

TEST(Hyperbolic, DistanceMatchesHyperboloidFormula) {
  auto h = make_hyperbolic(3);
  Rng rng(41);
  for (int i = 0; i < 500; ++i) {
    const Point p = h->sample(rng), q = h->sample(rng);
    EXPECT_NEAR(h->dist(p, q), oracle::hyperbolic_distance(coords(p), coords(q)), 1e-9);
  }
  // Close points: the chord form keeps relative accuracy where acosh cannot.
  const Point a = h->lift({0.3, 0.2, 0.1});
  const Point b = geodesic_point(*h, a, h->lift({0.3 + 1e-3, 0.2, 0.1}), 1e-6);
  EXPECT_GT(h->dist(a, b), 0.0);
  EXPECT_NEAR(h->dist(a, b) / h->dist(a, h->lift({0.3 + 1e-3, 0.2, 0.1})), 1e-6, 1e-12);
}

TEST(Hyperbolic, PointsStayOnHyperboloid) {
  auto h = make_hyperbolic(2);
  Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    const Point p = h->sample(rng), q = h->sample(rng);
    const Point y = geodesic_point(*h, p, q, rng.uniform());
    EXPECT_NEAR(h->minkowski(y.coords(), y.coords()), -1.0, 1e-9);
    EXPECT_TRUE(h->valid_coords(y.coords()));
  }
  EXPECT_FALSE(h->valid_coords(std::vector<double>{0.0, 0.0, -1.0}));
  EXPECT_FALSE(h->valid_coords(std::vector<double>{0.5, 0.0, 1.0}));
}

TEST(Hyperbolic, SegmentProjectionMatchesScan) {
  auto h = make_hyperbolic(2);
  Rng rng(43);
  for (int i = 0; i < 50; ++i) {
    const Segment seg{h->sample(rng), h->sample(rng)};
    const Point x = h->sample(rng);
    const double t_ref = oracle::argmin_scan(
        [&](double t) { return h->dist(x, h->geodesic(seg.p, seg.q, t)); }, 0.0, 1.0);
    const Point ref = h->geodesic(seg.p, seg.q, t_ref);
    EXPECT_NEAR(h->dist(x, project_convex(*h, seg, x)), h->dist(x, ref), 1e-9);
    EXPECT_LT(h->dist(project_convex(*h, seg, x), ref), 1e-4);
  }
  expect_code(Errc::unsupported_set, [&] { project_convex(*h, HalfSpace{{1.0, 0.0}, 0.0}, h->origin()); });
  expect_code(Errc::unsupported_set, [&] { project_convex(*h, Subtree{{"a"}}, h->origin()); });
}

TEST(Hyperbolic, ProjectionProperties) {
  auto h = make_hyperbolic(2);
  Rng rng(44);
  const Ball ball{h->sample(rng), 0.8};
  std::vector<Point> members;
  for (int i = 0; i < 12; ++i) members.push_back(project_convex(*h, ball, h->sample(rng)));
  check_projection(*h, ball, members, rng);
}

TEST(Euclidean, Projections) {
  auto e = make_euclidean(2);
  const HalfSpace hs{{1.0, 1.0}, 1.0};
  EXPECT_EQ(project_convex(*e, hs, e->make_point({0, 0})), e->make_point({0, 0}));
  const Point p = project_convex(*e, hs, e->make_point({2, 2}));
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_NEAR(p[1], 0.5, 1e-15);
  EXPECT_LT(e->dist(project_convex(*e, Ball{e->make_point({0, 0}), 1.0}, e->make_point({3, 4})), e->make_point({0.6, 0.8})),
            1e-15);
  expect_code(Errc::invalid_spec, [&] { project_convex(*e, HalfSpace{{0.0, 0.0}, 1.0}, p); });
  expect_code(Errc::invalid_spec, [&] { project_convex(*e, HalfSpace{{1.0}, 1.0}, p); });
  Rng rng(45);
  std::vector<Point> members;
  for (int i = 0; i < 12; ++i) members.push_back(project_convex(*e, hs, e->sample(rng)));
  check_projection(*e, hs, members, rng);
}

TEST(Euclidean, InvalidCoordinates) {
  auto e = make_euclidean(2);
  expect_code(Errc::domain_error, [&] { e->make_point({1.0}); });
  expect_code(Errc::domain_error, [&] { e->make_point({1.0, std::nan("")}); });
}

TEST(Product, DistanceAndParts) {
  auto tri = make_tree(tripod_tree());
  auto e = make_euclidean(1);
  auto prod = make_product(e, tri);
  const Point a = prod->make_point(e->make_point({0}), tri->vertex("l0"));
  const Point b = prod->make_point(e->make_point({3}), tri->vertex("l1"));
  EXPECT_DOUBLE_EQ(prod->dist(a, b), std::hypot(3.0, 2.0));
  EXPECT_EQ(prod->left(a), e->make_point({0}));
  EXPECT_EQ(prod->right(b), tri->vertex("l1"));
  const Point m = geodesic_point(*prod, a, b, 0.5);
  EXPECT_EQ(prod->left(m), e->make_point({1.5}));
  EXPECT_EQ(prod->right(m), tri->vertex("c"));
  EXPECT_EQ(prod->chart(), nullptr);
  EXPECT_NE(make_product(e, make_hyperbolic(2))->chart(), nullptr);
  EXPECT_EQ(prod->format(a), "(0)|(v:l0)");
  EXPECT_EQ(prod->parse("(0)|(v:l0)"), a);
  EXPECT_EQ(prod->parse("3 | v:l1"), b);
  expect_code(Errc::config_error, [&] { prod->parse("0, v:l0"); });
  expect_code(Errc::space_mismatch, [&] { prod->make_point(tri->vertex("c"), tri->vertex("c")); });
}

TEST(Product, ExtensionStopsAtTheTightestFactor) {
  auto tri = make_tree(tripod_tree());
  auto e = make_euclidean(1);
  auto prod = make_product(e, tri);
  const Point p = prod->make_point(e->make_point({0}), tri->on_edge("c", "l0", 0.5));
  const Point x = prod->make_point(e->make_point({1}), tri->vertex("c"));
  // The tree factor can continue one more unit past c, i.e. s up to 3.
  EXPECT_NEAR(prod->extension_room(x, p), 2.0 * prod->dist(p, x), 1e-12);
  const Point y = extend_geodesic(*prod, p, x, 3.0);
  EXPECT_EQ(prod->left(y), e->make_point({3}));
  EXPECT_EQ(prod->right(y), tri->vertex("l1"));
  expect_code(Errc::no_extension, [&] { extend_geodesic(*prod, p, x, 3.5); });
  // A fixed factor never limits the extension.
  const Point z = prod->make_point(e->make_point({5}), tri->on_edge("c", "l0", 0.5));
  EXPECT_EQ(prod->left(extend_geodesic(*prod, p, z, 4.0)), e->make_point({20}));
}

TEST(Product, ProjectionProperties) {
  auto tri = make_tree(tripod_tree());
  auto e = make_euclidean(1);
  auto prod = make_product(e, tri);
  Rng rng(46);
  const ConvexSet box = ConvexSet::product(Ball{e->make_point({0}), 0.5}, Subtree{{"c", "l2"}});
  std::vector<Point> members;
  for (int i = 0; i < 12; ++i) members.push_back(project_convex(*prod, box, prod->sample(rng)));
  check_projection(*prod, box, members, rng);
  EXPECT_EQ(prod->right(project_convex(*prod, box, prod->make_point(e->make_point({2}), tri->vertex("l0")))),
            tri->vertex("c"));

  const Segment seg{prod->sample(rng), prod->sample(rng)};
  const GeodesicSegment g(prod, seg.p, seg.q);
  std::vector<Point> seg_members;
  for (int i = 0; i <= 10; ++i) seg_members.push_back(g.eval(i / 10.0));
  check_projection(*prod, seg, seg_members, rng, 60);
}

TEST(ModelSpaces, FactoryAndDowncast) {
  SpaceParams params;
  params.dim = 2;
  const SpaceHandle h = make_space(SpaceKind::hyperbolic, params);
  EXPECT_EQ(h->describe(), "H^2");
  EXPECT_NE(space_as<HyperbolicSpace>(*h), nullptr);
  EXPECT_EQ(space_as<TreeSpace>(*h), nullptr);
  params.tree = tripod_tree();
  EXPECT_EQ(make_space(SpaceKind::tree, params)->kind(), SpaceKind::tree);
  params.first = h;
  params.second = make_euclidean(1);
  EXPECT_EQ(make_space(SpaceKind::product, params)->coord_count(), 4u);
}
