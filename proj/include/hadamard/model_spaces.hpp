#pragma once

#include <memory>
#include <optional>

#include "hadamard/geometry.hpp"
#include "hadamard/spaces/euclidean.hpp"
#include "hadamard/spaces/hyperbolic.hpp"
#include "hadamard/spaces/product.hpp"
#include "hadamard/spaces/tree.hpp"
#include "hadamard/spaces/tree_io.hpp"

namespace hadamard {

struct SpaceParams {
  std::size_t dim = 0;       // euclidean, hyperbolic
  TreeSpec tree;             // tree
  SpaceHandle first;         // product
  SpaceHandle second;        // product
};

inline SpaceHandle make_space(SpaceKind kind, const SpaceParams& params) {
  switch (kind) {
    case SpaceKind::euclidean: return std::make_shared<const EuclideanSpace>(params.dim);
    case SpaceKind::hyperbolic: return std::make_shared<const HyperbolicSpace>(params.dim);
    case SpaceKind::tree: return std::make_shared<const TreeSpace>(params.tree);
    case SpaceKind::product: return std::make_shared<const ProductSpace>(params.first, params.second);
  }
  raise(Errc::invalid_spec, "unknown space kind");
}

inline std::shared_ptr<const EuclideanSpace> make_euclidean(std::size_t dim) {
  return std::make_shared<const EuclideanSpace>(dim);
}

inline std::shared_ptr<const HyperbolicSpace> make_hyperbolic(std::size_t dim) {
  return std::make_shared<const HyperbolicSpace>(dim);
}

inline std::shared_ptr<const TreeSpace> make_tree(TreeSpec spec) {
  return std::make_shared<const TreeSpace>(std::move(spec));
}

inline std::shared_ptr<const ProductSpace> make_product(SpaceHandle a, SpaceHandle b) {
  return std::make_shared<const ProductSpace>(std::move(a), std::move(b));
}

/// Metric projection P_C x.
inline Point project_convex(const Space& space, const ConvexSet& set, const Point& x) {
  require_member(space, x);
  return space.project(set, x);
}

inline bool contains(const Space& space, const ConvexSet& set, const Point& x, double tol = 1e-12) {
  return distance(space, x, project_convex(space, set, x)) <= tol;
}

/// Downcasts for callers that need space-specific constructors.
template <class S>
const S* space_as(const Space& space) {
  return dynamic_cast<const S*>(&space);
}

}  // namespace hadamard
