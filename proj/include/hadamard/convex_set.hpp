#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hadamard/point.hpp"

namespace hadamard {

class ConvexSet;

/// Closed geodesic ball. Available in every model space.
struct Ball {
  Point center;
  double radius = 0.0;
};

/// {x : <normal, x> <= offset}. Euclidean spaces only.
struct HalfSpace {
  std::vector<double> normal;
  double offset = 0.0;
};

/// Subtree induced by a connected set of tree vertices (ids as in the TreeSpec).
struct Subtree {
  std::vector<std::string> vertices;
};

/// Geodesic segment [p, q].
struct Segment {
  Point p;
  Point q;
};

/// Cartesian product of a set in each factor of a product space.
struct ProductSet {
  std::shared_ptr<const ConvexSet> first;
  std::shared_ptr<const ConvexSet> second;
};

/// A nonempty closed convex subset of some model space. The set does not know
/// its space; projection and membership dispatch through `Space::project`.
class ConvexSet {
 public:
  using Variant = std::variant<Ball, HalfSpace, Subtree, Segment, ProductSet>;

  ConvexSet(Ball b) : kind_(std::move(b)) {}            // NOLINT(google-explicit-constructor)
  ConvexSet(HalfSpace h) : kind_(std::move(h)) {}       // NOLINT(google-explicit-constructor)
  ConvexSet(Subtree s) : kind_(std::move(s)) {}         // NOLINT(google-explicit-constructor)
  ConvexSet(Segment s) : kind_(std::move(s)) {}         // NOLINT(google-explicit-constructor)
  ConvexSet(ProductSet p) : kind_(std::move(p)) {}      // NOLINT(google-explicit-constructor)

  static ConvexSet product(ConvexSet first, ConvexSet second) {
    return ProductSet{std::make_shared<const ConvexSet>(std::move(first)),
                      std::make_shared<const ConvexSet>(std::move(second))};
  }

  const Variant& kind() const noexcept { return kind_; }

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&kind_);
  }

  std::string kind_name() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Ball>) return "ball";
          else if constexpr (std::is_same_v<K, HalfSpace>) return "halfspace";
          else if constexpr (std::is_same_v<K, Subtree>) return "subtree";
          else if constexpr (std::is_same_v<K, Segment>) return "segment";
          else return "product";
        },
        kind_);
  }

 private:
  Variant kind_;
};

}  // namespace hadamard
