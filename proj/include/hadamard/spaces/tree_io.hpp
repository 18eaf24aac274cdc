#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "hadamard/spaces/tree.hpp"

namespace hadamard {

// Tree file format, one record per line:
//   vertex <id>
//   edge <u> <v> <length>
// Blank lines and text after '#' are ignored. Vertices must be declared
// before edges that use them.
inline TreeSpec parse_tree_text(std::string_view text, const std::string& origin = "<tree>") {
  TreeSpec spec;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> declared;
  auto fail = [&](const std::string& what) -> void {
    raise(Errc::invalid_spec, origin + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string keyword;
    if (!(fields >> keyword)) continue;
    if (keyword == "vertex") {
      std::string id, extra;
      if (!(fields >> id) || (fields >> extra)) fail("expected 'vertex <id>'");
      if (!declared.insert(id).second) fail("duplicate vertex '" + id + "'");
      spec.vertices.push_back(id);
    } else if (keyword == "edge") {
      std::string u, v, len, extra;
      if (!(fields >> u >> v >> len) || (fields >> extra)) fail("expected 'edge <u> <v> <length>'");
      if (!declared.count(u)) fail("edge uses undeclared vertex '" + u + "'");
      if (!declared.count(v)) fail("edge uses undeclared vertex '" + v + "'");
      double length = 0.0;
      try {
        length = detail::parse_double(len);
      } catch (const Error&) {
        fail("bad edge length '" + len + "'");
      }
      if (!(length > 0.0) || !std::isfinite(length)) fail("edge length must be positive and finite");
      spec.edges.push_back({u, v, length});
    } else {
      fail("unknown record '" + keyword + "'");
    }
  }
  // Structural checks (edge count, connectivity) happen in TreeSpace.
  try {
    TreeSpace check(spec);
  } catch (const Error& e) {
    raise(Errc::invalid_spec, origin + ": " + e.what());
  }
  return spec;
}

inline TreeSpec load_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::config_error, "cannot open tree file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_tree_text(buf.str(), path);
}

inline std::string format_tree_text(const TreeSpec& spec) {
  std::string out;
  for (const auto& v : spec.vertices) out += "vertex " + v + "\n";
  for (const auto& e : spec.edges) out += "edge " + e.u + " " + e.v + " " + detail::format_double(e.length) + "\n";
  return out;
}

}  // namespace hadamard
