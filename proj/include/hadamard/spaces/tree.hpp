#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "hadamard/space.hpp"
#include "hadamard/spaces/coords_text.hpp"

namespace hadamard {

struct TreeEdgeSpec {
  std::string u;
  std::string v;
  double length = 0.0;
};

/// Vertex ids and weighted edges; must describe a connected acyclic graph
/// with strictly positive edge lengths.
struct TreeSpec {
  std::vector<std::string> vertices;
  std::vector<TreeEdgeSpec> edges;
};

/// Star with one center "c" and leaves "l0", "l1", ... at the given lengths.
inline TreeSpec star_tree(const std::vector<double>& legs) {
  TreeSpec spec;
  spec.vertices.push_back("c");
  for (std::size_t i = 0; i < legs.size(); ++i) {
    spec.vertices.push_back("l" + std::to_string(i));
    spec.edges.push_back({"c", "l" + std::to_string(i), legs[i]});
  }
  return spec;
}

inline TreeSpec tripod_tree(double leg = 1.0) { return star_tree({leg, leg, leg}); }

/// Random recursive tree: vertex i attaches to a uniformly chosen earlier
/// vertex, with edge lengths uniform in [min_len, max_len].
inline TreeSpec random_tree(std::size_t vertex_count, std::uint64_t seed, double min_len = 0.5,
                            double max_len = 2.0) {
  TreeSpec spec;
  Rng rng(seed);
  for (std::size_t i = 0; i < vertex_count; ++i) {
    spec.vertices.push_back("v" + std::to_string(i));
    if (i > 0) {
      const std::size_t parent = rng.below(i);
      spec.edges.push_back({"v" + std::to_string(parent), "v" + std::to_string(i), rng.uniform(min_len, max_len)});
    }
  }
  return spec;
}

/// Metric tree. Points are (edge index, offset from the edge's first
/// endpoint). A vertex is canonically stored on its lowest-indexed incident
/// edge so that coordinate equality is point equality.
class TreeSpace final : public Space {
 public:
  struct Edge {
    std::size_t u;
    std::size_t v;
    double length;
  };

  /// Position of a point on the tree.
  struct Pos {
    std::size_t edge;
    double offset;
  };

  /// A direction leaving a point: along `edge`, increasing offset if sign > 0.
  struct Heading {
    std::size_t edge;
    int sign;
    friend bool operator==(const Heading&, const Heading&) = default;
  };

  explicit TreeSpace(TreeSpec spec) : spec_(std::move(spec)) {
    build();
  }

  const TreeSpec& spec() const noexcept { return spec_; }
  std::size_t vertex_count() const noexcept { return names_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }
  const std::string& vertex_name(std::size_t i) const { return names_.at(i); }
  std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }
  double vertex_distance(std::size_t a, std::size_t b) const { return vdist_[a * names_.size() + b]; }

  std::size_t vertex_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) raise(Errc::invalid_spec, "unknown tree vertex '" + name + "'");
    return it->second;
  }

  Point vertex(const std::string& name) const { return vertex_point(vertex_index(name)); }

  Point vertex_point(std::size_t v) const {
    const std::size_t e = canonical_edge_[v];
    return Point(id(), {static_cast<double>(e), edges_[e].u == v ? 0.0 : edges_[e].length});
  }

  /// Point on the edge {u, v} at distance `from_u` from u.
  Point on_edge(const std::string& u, const std::string& v, double from_u) const {
    const std::size_t a = vertex_index(u), b = vertex_index(v);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const Edge& ed = edges_[e];
      if (ed.u == a && ed.v == b) return at(e, from_u);
      if (ed.u == b && ed.v == a) return at(e, ed.length - from_u);
    }
    raise(Errc::invalid_spec, "no edge between '" + u + "' and '" + v + "'");
  }

  /// Point on edge e at offset `offset` measured from its first endpoint.
  Point at(std::size_t e, double offset) const {
    if (e >= edges_.size()) raise(Errc::domain_error, "edge index out of range");
    if (!(offset >= 0.0 && offset <= edges_[e].length)) raise(Errc::domain_error, "offset outside edge");
    return encode({e, offset});
  }

  Pos decode(const Point& p) const {
    return {static_cast<std::size_t>(p[0]), p[1]};
  }

  /// Vertex index if the point sits on a vertex.
  std::optional<std::size_t> vertex_of(const Pos& pos) const {
    const Edge& e = edges_[pos.edge];
    if (pos.offset == 0.0) return e.u;
    if (pos.offset == e.length) return e.v;
    return std::nullopt;
  }

  SpaceKind kind() const noexcept override { return SpaceKind::tree; }

  std::string describe() const override {
    return "tree(" + std::to_string(names_.size()) + " vertices)";
  }

  std::size_t coord_count() const noexcept override { return 2; }

  bool valid_coords(std::span<const double> c) const override {
    if (c.size() != 2 || !std::isfinite(c[0]) || !std::isfinite(c[1])) return false;
    if (c[0] < 0 || c[0] != std::floor(c[0]) || c[0] >= static_cast<double>(edges_.size())) return false;
    const auto e = static_cast<std::size_t>(c[0]);
    if (!(c[1] >= 0.0 && c[1] <= edges_[e].length)) return false;
    // Vertices must be in canonical position.
    const Pos pos{e, c[1]};
    if (auto v = vertex_of(pos)) return canonical_edge_[*v] == e;
    return true;
  }

  double dist(const Point& p, const Point& q) const override {
    const Pos a = decode(p), b = decode(q);
    if (a.edge == b.edge) return std::abs(a.offset - b.offset);
    return route(a, b).total;
  }

  Point geodesic(const Point& p, const Point& q, double t) const override {
    const Pos a = decode(p), b = decode(q);
    if (a.edge == b.edge) return encode({a.edge, a.offset + t * (b.offset - a.offset)});
    const Route r = route(a, b);
    return walk_route(a, b, r, t * r.total);
  }

  Point extend(const Point& p, const Point& q, double s) const override {
    const double d = dist(p, q);
    const bool forward = s > 1.0;
    const Point& from = forward ? q : p;
    const auto h = forward ? continuation(q, p) : continuation(p, q);
    if (!h) raise(Errc::no_extension, "geodesic ends at a leaf");
    auto res = ray(decode(from), *h, forward ? (s - 1.0) * d : -s * d);
    if (!res.point) raise(Errc::no_extension, "geodesic reaches a leaf before parameter s");
    return *res.point;
  }

  double extension_room(const Point& p, const Point& q) const override {
    if (dist(p, q) == 0.0) return 0.0;
    const auto h = continuation(p, q);
    if (!h) return 0.0;
    auto res = ray(decode(p), *h, std::numeric_limits<double>::infinity());
    return res.travelled;
  }

  std::optional<double> exact_angle(const Point& p, const Point& x, const Point& y) const override {
    return heading(p, x) == heading(p, y) ? 0.0 : std::acos(-1.0);
  }

  Point sample(Rng& rng) const override {
    double r = rng.uniform(0.0, total_length_);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (r <= edges_[e].length || e + 1 == edges_.size()) {
        return encode({e, std::clamp(r, 0.0, edges_[e].length)});
      }
      r -= edges_[e].length;
    }
    return encode({0, 0.0});
  }

  Point project(const ConvexSet& set, const Point& x) const override {
    if (const auto* b = set.as<Ball>()) return project_ball(*b, x);
    if (const auto* s = set.as<Subtree>()) return project_subtree(*s, x);
    if (const auto* s = set.as<Segment>()) {
      // The gate onto [p, q] sits at the Gromov product (x|q)_p from p.
      const double len = dist(s->p, s->q);
      if (len == 0.0) return s->p;
      const double arc = std::clamp(0.5 * (dist(s->p, x) + len - dist(s->q, x)), 0.0, len);
      if (arc == 0.0) return s->p;
      if (arc == len) return s->q;
      return geodesic(s->p, s->q, arc / len);
    }
    unsupported_set(*this, set);
  }

  /// Offsets [lo, hi] on edge e that belong to the set (empty optional if none).
  /// Used by the edge-wise prox solver; supports balls and subtrees.
  std::optional<std::pair<double, double>> edge_interval(const ConvexSet& set, std::size_t e) const {
    const Edge& ed = edges_[e];
    if (const auto* s = set.as<Subtree>()) {
      const auto members = subtree_members(*s);
      const bool in_u = members[ed.u], in_v = members[ed.v];
      if (in_u && in_v) return std::pair{0.0, ed.length};
      if (in_u) return std::pair{0.0, 0.0};
      if (in_v) return std::pair{ed.length, ed.length};
      return std::nullopt;
    }
    if (const auto* b = set.as<Ball>()) {
      const Pos c = decode(b->center);
      if (c.edge == e) {
        const double lo = std::max(0.0, c.offset - b->radius), hi = std::min(ed.length, c.offset + b->radius);
        return std::pair{lo, hi};
      }
      const double du = dist(b->center, vertex_point(ed.u));
      const double dv = dist(b->center, vertex_point(ed.v));
      if (du <= dv) {
        if (du > b->radius) return std::nullopt;
        return std::pair{0.0, std::min(ed.length, b->radius - du)};
      }
      if (dv > b->radius) return std::nullopt;
      return std::pair{std::max(0.0, ed.length - (b->radius - dv)), ed.length};
    }
    unsupported_set(*this, set);
  }

  std::string format(const Point& p) const override {
    const Pos pos = decode(p);
    if (auto v = vertex_of(pos)) return "v:" + names_[*v];
    const Edge& e = edges_[pos.edge];
    return "e:" + names_[e.u] + "," + names_[e.v] + ":" + detail::format_double(pos.offset);
  }

  /// "v:<id>" or "e:<u>,<v>:<offset from u>".
  Point parse(std::string_view text) const override {
    text = detail::trim(text);
    if (text.starts_with("v:")) return vertex(std::string(text.substr(2)));
    if (text.starts_with("e:")) {
      text.remove_prefix(2);
      const auto colon = text.rfind(':');
      const auto comma = text.find(',');
      if (colon == std::string_view::npos || comma == std::string_view::npos || comma > colon) {
        raise(Errc::config_error, "tree point must look like e:u,v:offset");
      }
      return on_edge(std::string(text.substr(0, comma)), std::string(text.substr(comma + 1, colon - comma - 1)),
                     detail::parse_double(text.substr(colon + 1)));
    }
    raise(Errc::config_error, "tree point must start with 'v:' or 'e:'");
  }

  /// Initial direction of the geodesic from p toward q (q != p).
  Heading heading(const Point& p, const Point& q) const {
    const Pos a = decode(p), b = decode(q);
    if (auto v = vertex_of(a)) return heading_from_vertex(*v, b);
    if (a.edge == b.edge) return {a.edge, b.offset > a.offset ? 1 : -1};
    const Route r = route(a, b);
    return {a.edge, r.exit == edges_[a.edge].v ? 1 : -1};
  }

 private:
  struct Route {
    std::size_t exit;   // endpoint of the first edge the route leaves through
    std::size_t entry;  // endpoint of the last edge the route enters through
    double total;
  };

  struct RayResult {
    std::optional<Point> point;
    double travelled = 0.0;
  };

  void build() {
    if (spec_.vertices.size() < 2) raise(Errc::invalid_spec, "a tree needs at least two vertices");
    for (std::size_t i = 0; i < spec_.vertices.size(); ++i) {
      const std::string& name = spec_.vertices[i];
      if (name.empty() || name.find_first_of(",:| \t") != std::string::npos) {
        raise(Errc::invalid_spec, "invalid vertex id '" + name + "'");
      }
      if (!index_.emplace(name, i).second) raise(Errc::invalid_spec, "duplicate vertex '" + name + "'");
      names_.push_back(name);
    }
    const std::size_t n = names_.size();
    if (spec_.edges.size() != n - 1) {
      raise(Errc::invalid_spec, "a tree on " + std::to_string(n) + " vertices needs exactly " +
                                    std::to_string(n - 1) + " edges (cyclic or disconnected graph)");
    }
    adjacency_.assign(n, {});
    for (const auto& es : spec_.edges) {
      const std::size_t u = vertex_index(es.u), v = vertex_index(es.v);
      if (u == v) raise(Errc::invalid_spec, "self-loop at '" + es.u + "'");
      if (!(es.length > 0.0) || !std::isfinite(es.length)) {
        raise(Errc::invalid_spec, "edge " + es.u + "-" + es.v + " must have positive finite length");
      }
      const std::size_t idx = edges_.size();
      edges_.push_back({u, v, es.length});
      adjacency_[u].push_back({v, idx});
      adjacency_[v].push_back({u, idx});
      total_length_ += es.length;
    }
    for (auto& adj : adjacency_) {
      std::sort(adj.begin(), adj.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    }
    vdist_.assign(n * n, std::numeric_limits<double>::infinity());
    next_edge_.assign(n * n, kNone);
    // BFS from every vertex; records distance and the first edge toward the source.
    for (std::size_t src = 0; src < n; ++src) {
      vdist_[src * n + src] = 0.0;
      std::deque<std::size_t> queue{src};
      std::vector<bool> seen(n, false);
      seen[src] = true;
      while (!queue.empty()) {
        const std::size_t cur = queue.front();
        queue.pop_front();
        for (const auto& [nb, e] : adjacency_[cur]) {
          if (seen[nb]) continue;
          seen[nb] = true;
          vdist_[src * n + nb] = vdist_[src * n + cur] + edges_[e].length;
          next_edge_[nb * n + src] = e;  // from nb, step along e toward src
          queue.push_back(nb);
        }
      }
      for (std::size_t v = 0; v < n; ++v) {
        if (!seen[v]) raise(Errc::invalid_spec, "tree is disconnected (cyclic edge set)");
      }
    }
    canonical_edge_.resize(n);
    for (std::size_t v = 0; v < n; ++v) canonical_edge_[v] = adjacency_[v].front().second;
  }

  Point encode(Pos pos) const {
    const Edge& e = edges_[pos.edge];
    const double snap = 1e-14 * std::max(1.0, e.length);
    if (pos.offset <= snap) return vertex_point(e.u);
    if (pos.offset >= e.length - snap) return vertex_point(e.v);
    return Point(id(), {static_cast<double>(pos.edge), pos.offset});
  }

  double to_endpoint(const Pos& a, std::size_t vtx) const {
    const Edge& e = edges_[a.edge];
    return vtx == e.u ? a.offset : e.length - a.offset;
  }

  Route route(const Pos& a, const Pos& b) const {
    const Edge& ea = edges_[a.edge];
    const Edge& eb = edges_[b.edge];
    Route best{ea.u, eb.u, std::numeric_limits<double>::infinity()};
    for (std::size_t x : {ea.u, ea.v}) {
      for (std::size_t y : {eb.u, eb.v}) {
        const double d = to_endpoint(a, x) + vertex_distance(x, y) + to_endpoint(b, y);
        if (d < best.total) best = {x, y, d};
      }
    }
    return best;
  }

  Point walk_route(const Pos& a, const Pos& b, const Route& r, double arc) const {
    const double first = to_endpoint(a, r.exit);
    if (arc <= first) {
      const Edge& e = edges_[a.edge];
      return encode({a.edge, r.exit == e.u ? a.offset - arc : a.offset + arc});
    }
    double remaining = arc - first;
    std::size_t cur = r.exit;
    const std::size_t n = names_.size();
    while (cur != r.entry) {
      const std::size_t e = next_edge_[cur * n + r.entry];
      const Edge& ed = edges_[e];
      if (remaining <= ed.length) return encode({e, cur == ed.u ? remaining : ed.length - remaining});
      remaining -= ed.length;
      cur = ed.u == cur ? ed.v : ed.u;
    }
    const Edge& eb = edges_[b.edge];
    const double last = to_endpoint(b, r.entry);
    remaining = std::min(remaining, last);
    return encode({b.edge, r.entry == eb.u ? remaining : eb.length - remaining});
  }

  Heading heading_from_vertex(std::size_t v, const Pos& target) const {
    const Edge& et = edges_[target.edge];
    std::size_t e;
    if (et.u == v || et.v == v) {
      e = target.edge;
    } else {
      const Route r = route(decode(vertex_point(v)), target);
      const std::size_t n = names_.size();
      e = next_edge_[v * n + r.entry];
    }
    return {e, edges_[e].u == v ? 1 : -1};
  }

  /// Direction at p pointing away from q: the deterministic continuation of
  /// the geodesic from q through p.
  std::optional<Heading> continuation(const Point& p, const Point& q) const {
    const Pos a = decode(p);
    const Heading back = heading(p, q);
    if (!vertex_of(a)) return Heading{back.edge, -back.sign};
    const std::size_t v = *vertex_of(a);
    for (const auto& [nb, e] : adjacency_[v]) {
      if (e != back.edge) return Heading{e, edges_[e].u == v ? 1 : -1};
    }
    return std::nullopt;  // p is a leaf
  }

  /// Walks `length` from `start` leaving along `h`, taking the lowest-indexed
  /// onward edge at every vertex. Stops early at a leaf.
  RayResult ray(Pos start, Heading h, double length) const {
    if (auto v = vertex_of(start)) {
      // Leaving a vertex along an edge that does not touch it is impossible;
      // re-anchor on the heading's edge.
      start = {h.edge, edges_[h.edge].u == *v ? 0.0 : edges_[h.edge].length};
    }
    double travelled = 0.0;
    double remaining = length;
    std::size_t e = h.edge;
    double offset = start.offset;
    int sign = h.sign;
    while (true) {
      const Edge& ed = edges_[e];
      const double room = sign > 0 ? ed.length - offset : offset;
      if (remaining <= room) {
        return {encode({e, offset + sign * remaining}), travelled + remaining};
      }
      remaining -= room;
      travelled += room;
      const std::size_t vtx = sign > 0 ? ed.v : ed.u;
      std::optional<std::size_t> onward;
      for (const auto& [nb, ne] : adjacency_[vtx]) {
        if (ne != e) {
          onward = ne;
          break;
        }
      }
      if (!onward) return {std::nullopt, travelled};
      e = *onward;
      sign = edges_[e].u == vtx ? 1 : -1;
      offset = sign > 0 ? 0.0 : edges_[e].length;
    }
  }

  std::vector<bool> subtree_members(const Subtree& s) const {
    std::vector<bool> members(names_.size(), false);
    if (s.vertices.empty()) raise(Errc::invalid_spec, "subtree needs at least one vertex");
    for (const auto& name : s.vertices) members[vertex_index(name)] = true;
    // Connectedness of the induced subgraph.
    std::vector<bool> seen(names_.size(), false);
    std::deque<std::size_t> queue{vertex_index(s.vertices.front())};
    seen[queue.front()] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      for (const auto& [nb, e] : adjacency_[cur]) {
        if (members[nb] && !seen[nb]) {
          seen[nb] = true;
          ++reached;
          queue.push_back(nb);
        }
      }
    }
    const auto count = static_cast<std::size_t>(std::count(members.begin(), members.end(), true));
    if (reached != count) raise(Errc::invalid_spec, "subtree vertices do not induce a connected subgraph");
    return members;
  }

  Point project_subtree(const Subtree& s, const Point& x) const {
    const auto members = subtree_members(s);
    const Pos pos = decode(x);
    if (auto v = vertex_of(pos); v && members[*v]) return x;
    const Edge& e = edges_[pos.edge];
    if (members[e.u] && members[e.v]) return x;
    // Outside the subtree the nearest point is a gate vertex.
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < members.size(); ++v) {
      if (!members[v]) continue;
      const double d = dist(x, vertex_point(v));
      if (d < best_d) {
        best_d = d;
        best = v;
      }
    }
    return vertex_point(best);
  }

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  TreeSpec spec_;
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency_;
  std::vector<double> vdist_;
  std::vector<std::size_t> next_edge_;
  std::vector<std::size_t> canonical_edge_;
  double total_length_ = 0.0;
};

}  // namespace hadamard
