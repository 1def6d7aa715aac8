#pragma once

#include <charconv>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dmg/families.hpp"
#include "dmg/graph.hpp"
#include <json.hpp>

namespace dmg {

enum class ParseErrc { MalformedHeader, WrongEdgeCount, NotAnInteger, BadEdge };

inline const char* to_string(ParseErrc e) {
  switch (e) {
    case ParseErrc::MalformedHeader: return "malformed header";
    case ParseErrc::WrongEdgeCount: return "wrong edge count";
    case ParseErrc::NotAnInteger: return "token not an integer";
    case ParseErrc::BadEdge: return "bad edge";
  }
  return "parse error";
}

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrc code, std::size_t line, const std::string& detail)
      : std::runtime_error("line " + std::to_string(line) + ": " + to_string(code) +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code),
        line_(line) {}
  ParseErrc code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ParseErrc code_;
  std::size_t line_;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::size_t parse_count(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ParseError(ParseErrc::NotAnInteger, line, "'" + std::string(tok) + "'");
  return v;
}

}  // namespace detail

// Format: "n m" on the first line, then m lines "u v" with 0-based ids.
inline Graph parse_edge_list(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (lines.empty()) throw ParseError(ParseErrc::MalformedHeader, 1, "empty input");
  const auto header = detail::split_ws(lines[0]);
  if (header.size() != 2) throw ParseError(ParseErrc::MalformedHeader, 1, "expected \"n m\"");
  const auto n = detail::parse_count(header[0], 1);
  const auto m = detail::parse_count(header[1], 1);

  std::vector<Edge> edges;
  std::size_t li = 1;
  for (; li < lines.size() && edges.size() < m; ++li) {
    const auto toks = detail::split_ws(lines[li]);
    if (toks.empty()) continue;
    if (toks.size() != 2) throw ParseError(ParseErrc::BadEdge, li + 1, "expected \"u v\"");
    const auto a = detail::parse_count(toks[0], li + 1);
    const auto b = detail::parse_count(toks[1], li + 1);
    if (a >= n || b >= n) throw ParseError(ParseErrc::BadEdge, li + 1, "vertex out of range");
    edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
  }
  if (edges.size() < m) {
    throw ParseError(ParseErrc::WrongEdgeCount, li + 1,
                     "expected " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
  }
  for (; li < lines.size(); ++li) {
    if (!detail::split_ws(lines[li]).empty()) {
      throw ParseError(ParseErrc::WrongEdgeCount, li + 1, "more than " + std::to_string(m) + " edges");
    }
  }
  try {
    return Graph::build(n, edges);
  } catch (const GraphError& e) {
    throw ParseError(ParseErrc::BadEdge, 0, e.what());
  }
}

inline std::string serialize_edge_list(const Graph& g) {
  std::string out = std::to_string(g.vertex_count()) + " " + std::to_string(g.edge_count()) + "\n";
  for (const auto& [a, b] : g.edges()) out += std::to_string(a) + " " + std::to_string(b) + "\n";
  return out;
}

// Optional per-vertex decoration for DOT output.
struct DotOverlay {
  Vertex cop = kNoVertex;
  std::vector<Vertex> robbers;
  VertexSet damaged;
};

inline std::string export_dot(const Graph& g, const std::optional<DotOverlay>& overlay = std::nullopt) {
  std::ostringstream os;
  os << "graph G {\n";
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    os << "  " << v;
    if (overlay) {
      std::vector<std::string> attrs;
      if (overlay->damaged.contains(v)) attrs.emplace_back("style=filled, fillcolor=gray");
      if (overlay->cop == v) attrs.emplace_back("color=blue, penwidth=3");
      std::size_t here = 0;
      for (Vertex r : overlay->robbers) here += r == v ? 1 : 0;
      if (here > 0) attrs.emplace_back("xlabel=\"R" + std::to_string(here) + "\", fontcolor=red");
      if (!attrs.empty()) {
        os << " [";
        for (std::size_t i = 0; i < attrs.size(); ++i) os << (i ? ", " : "") << attrs[i];
        os << "]";
      }
    }
    os << ";\n";
  }
  for (const auto& [a, b] : g.edges()) os << "  " << a << " -- " << b << ";\n";
  os << "}\n";
  return os.str();
}

inline nlohmann::ordered_json landmarks_to_json(const Landmarks& lm) {
  nlohmann::ordered_json j;
  j["family"] = std::string(family_name(lm.spec.family));
  j["param"] = lm.spec.param;
  j["v1"] = lm.v1;
  j["v2"] = lm.v2;
  j["w"] = lm.w;
  j["u"] = lm.u;
  j["paths"] = lm.paths;
  return j;
}

inline Landmarks landmarks_from_json(const nlohmann::json& j) {
  Landmarks lm;
  const auto fam = parse_family(j.at("family").get<std::string>());
  if (!fam) throw GraphError(GraphErrc::InvalidFamily, "unknown family in landmarks");
  lm.spec = {*fam, j.at("param").get<std::size_t>()};
  lm.v1 = j.at("v1").get<Vertex>();
  lm.v2 = j.at("v2").get<Vertex>();
  lm.w = j.at("w").get<std::vector<Vertex>>();
  lm.u = j.at("u").get<std::vector<Vertex>>();
  lm.paths = j.at("paths").get<std::vector<std::vector<Vertex>>>();
  return lm;
}

}  // namespace dmg
