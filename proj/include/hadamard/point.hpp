#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace hadamard {

using SpaceId = std::uint64_t;

/// An element of a concrete model space. The coordinate layout is owned by the
/// space that issued the point: ambient vector for Euclidean, hyperboloid
/// coordinates (time last) for hyperbolic, (edge index, offset) for trees and
/// the concatenation of factor coordinates for products.
class Point {
 public:
  Point() = default;
  Point(SpaceId space, std::vector<double> coords) : space_(space), coords_(std::move(coords)) {}
  Point(SpaceId space, std::initializer_list<double> coords) : space_(space), coords_(coords) {}

  SpaceId space_id() const noexcept { return space_; }
  std::span<const double> coords() const noexcept { return coords_; }
  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  SpaceId space_ = 0;
  std::vector<double> coords_;
};

}  // namespace hadamard
