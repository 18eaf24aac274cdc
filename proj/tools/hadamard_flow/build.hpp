#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "hadamard/hadamard.hpp"

namespace flow {

inline const std::set<std::string>& space_keys() {
  static const std::set<std::string> k{"kind", "dim", "tree_file", "tree_builtin", "left", "right"};
  return k;
}

inline const std::set<std::string>& field_keys() {
  static const std::set<std::string> k{"name",       "a",          "map",      "c",       "theta",
                                       "set",        "set_center", "set_radius", "set_normal", "set_offset",
                                       "set_vertices", "set_p",    "set_q",    "*set",    "*set_center",
                                       "*set_radius", "*set_normal", "*set_offset", "*set_vertices", "*set_p",
                                       "*set_q"};
  return k;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(hadamard::detail::trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Builtin trees: "tripod", "star:<len>,<len>,...", "random:<vertices>[:<seed>]".
inline hadamard::TreeSpec builtin_tree(const std::string& name) {
  const auto parts = split(name, ':');
  if (parts[0] == "tripod" && parts.size() == 1) return hadamard::tripod_tree();
  if (parts[0] == "star" && parts.size() == 2) return hadamard::star_tree(hadamard::detail::parse_double_list(parts[1]));
  if (parts[0] == "random" && (parts.size() == 2 || parts.size() == 3)) {
    const auto n = static_cast<std::size_t>(hadamard::detail::parse_double(parts[1]));
    const auto seed = parts.size() == 3 ? static_cast<std::uint64_t>(hadamard::detail::parse_double(parts[2])) : 1;
    return hadamard::random_tree(n, seed);
  }
  raise(Errc::config_error, "unknown builtin tree '" + name + "'");
}

inline std::string resolve_path(const Config& cfg, const std::string& path) {
  if (!path.empty() && path.front() == '/') return path;
  return cfg.base_dir() + "/" + path;
}

/// Factor descriptors for products: "euclidean:<n>", "hyperbolic:<n>",
/// "tree:<builtin>" or "tree-file:<path>".
inline hadamard::SpaceHandle space_from_descriptor(const Config& cfg, const std::string& desc) {
  const auto colon = desc.find(':');
  if (colon == std::string::npos) raise(Errc::config_error, "space descriptor '" + desc + "' needs kind:params");
  const std::string kind = desc.substr(0, colon), rest = desc.substr(colon + 1);
  if (kind == "euclidean") return hadamard::make_euclidean(static_cast<std::size_t>(hadamard::detail::parse_double(rest)));
  if (kind == "hyperbolic") return hadamard::make_hyperbolic(static_cast<std::size_t>(hadamard::detail::parse_double(rest)));
  if (kind == "tree") return hadamard::make_tree(builtin_tree(rest));
  if (kind == "tree-file") return hadamard::make_tree(hadamard::load_tree_file(resolve_path(cfg, rest)));
  raise(Errc::config_error, "unknown space kind '" + kind + "'");
}

inline hadamard::SpaceHandle build_space(const Config& cfg) {
  cfg.allow_keys("space", space_keys());
  const std::string kind = cfg.require("space", "kind");
  if (kind == "euclidean" || kind == "hyperbolic") {
    const auto dim = cfg.integer("space", "dim");
    if (dim == 0) cfg.fail(cfg.line_of("space", "dim"), "dimension must be at least 1");
    if (kind == "euclidean") return hadamard::make_euclidean(dim);
    return hadamard::make_hyperbolic(dim);
  }
  if (kind == "tree") {
    const bool file = cfg.has("space", "tree_file"), builtin = cfg.has("space", "tree_builtin");
    if (file == builtin) raise(Errc::config_error, cfg.origin() + ": tree needs exactly one of tree_file, tree_builtin");
    if (file) return hadamard::make_tree(hadamard::load_tree_file(resolve_path(cfg, cfg.require("space", "tree_file"))));
    return hadamard::make_tree(builtin_tree(cfg.require("space", "tree_builtin")));
  }
  if (kind == "product") {
    return hadamard::make_product(space_from_descriptor(cfg, cfg.require("space", "left")),
                                  space_from_descriptor(cfg, cfg.require("space", "right")));
  }
  cfg.fail(cfg.line_of("space", "kind"), "unknown space kind '" + kind + "'");
}

inline hadamard::Point parse_point(const Config& cfg, const hadamard::Space& space, const std::string& section,
                                   const std::string& key) {
  const std::string text = cfg.require(section, key);
  try {
    return space.parse(text);
  } catch (const hadamard::Error& e) {
    cfg.fail(cfg.line_of(section, key), "[" + section + "] " + key + ": " + e.what());
  }
}

inline hadamard::ConvexSet build_set(const Config& cfg, const hadamard::Space& space, const std::string& prefix = "") {
  const std::string kind = cfg.require("field", prefix + "set");
  auto key = [&](const char* k) { return prefix + k; };
  if (kind == "ball") {
    return hadamard::Ball{parse_point(cfg, space, "field", key("set_center")), cfg.number("field", key("set_radius"))};
  }
  if (kind == "halfspace") {
    return hadamard::HalfSpace{cfg.numbers("field", key("set_normal")), cfg.number("field", key("set_offset"))};
  }
  if (kind == "subtree") return hadamard::Subtree{split(cfg.require("field", key("set_vertices")), ',')};
  if (kind == "segment") {
    return hadamard::Segment{parse_point(cfg, space, "field", key("set_p")), parse_point(cfg, space, "field", key("set_q"))};
  }
  if (kind == "product") {
    const auto* prod = hadamard::space_as<hadamard::ProductSpace>(space);
    if (!prod || !prefix.empty()) raise(Errc::config_error, "product sets need a (non-nested) product space");
    return hadamard::ConvexSet::product(build_set(cfg, prod->first(), "left."), build_set(cfg, prod->second(), "right."));
  }
  cfg.fail(cfg.line_of("field", prefix + "set"), "unknown set kind '" + kind + "'");
}

inline hadamard::MonotoneField build_field(const Config& cfg, const hadamard::SpaceHandle& space) {
  cfg.allow_keys("field", field_keys());
  const std::string name = cfg.require("field", "name");
  if (name == "quadratic") return hadamard::quadratic_field(space, parse_point(cfg, *space, "field", "a"));
  if (name == "indicator") return hadamard::indicator_field(space, build_set(cfg, *space));
  if (name == "quadratic_plus_indicator") {
    return hadamard::quadratic_plus_indicator_field(space, parse_point(cfg, *space, "field", "a"), build_set(cfg, *space));
  }
  if (name == "complementary") {
    const std::string map = cfg.require("field", "map");
    if (map == "identity") return hadamard::complementary_field(hadamard::identity_map(space));
    if (map == "constant") return hadamard::complementary_field(hadamard::constant_map(space, parse_point(cfg, *space, "field", "c")));
    if (map == "reflection") return hadamard::complementary_field(hadamard::reflection_map(space));
    if (map == "rotation") return hadamard::complementary_field(hadamard::rotation_map(space, cfg.number("field", "theta")));
    if (map == "projection") return hadamard::complementary_field(hadamard::projection_map(space, build_set(cfg, *space)));
    cfg.fail(cfg.line_of("field", "map"), "unknown map '" + map + "'");
  }
  cfg.fail(cfg.line_of("field", "name"), "unknown field '" + name + "'");
}

}  // namespace flow
