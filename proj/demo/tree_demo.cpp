// Proximal flow toward the branch vertex of a tripod, printed as a table.
#include <cstdio>

#include "hadamard/hadamard.hpp"

int main() {
  using namespace hadamard;
  auto tree = make_tree(tripod_tree());
  const Point a = tree->vertex("c");
  const Point x = tree->on_edge("c", "l0", 0.9);
  const MonotoneField field = quadratic_field(tree, a);

  std::printf("%6s %8s %22s %14s\n", "t", "k", "S(t)x", "dist to a");
  for (double t : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const FlowResult r = semigroup(field, x, t, 1e-2);
    std::printf("%6.2f %8zu %22s %14.6e\n", t, r.k_used, tree->format(r.point).c_str(), tree->dist(r.point, a));
  }

  // The negative geodesic from the branch vertex continues into the next leg.
  const Point y = extend_geodesic(*tree, a, x, -0.5);
  std::printf("extension of [c, x] beyond c: %s\n", tree->format(y).c_str());
  try {
    extend_geodesic(*tree, a, tree->vertex("l1"), 2.0);
  } catch (const Error& e) {
    std::printf("past the leaf l1: %s\n", std::string(to_string(e.code())).c_str());
  }
}
