#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dmg/graph.hpp"

namespace dmg {

enum class Family { Star, Path, Cycle, Complete, GPrime, G };

struct FamilySpec {
  Family family = Family::Path;
  std::size_t param = 1;
};

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::Star: return "star";
    case Family::Path: return "path";
    case Family::Cycle: return "cycle";
    case Family::Complete: return "complete";
    case Family::GPrime: return "gprime";
    case Family::G: return "g";
  }
  return "?";
}

inline std::optional<Family> parse_family(std::string_view s) {
  for (Family f : {Family::Star, Family::Path, Family::Cycle, Family::Complete, Family::GPrime, Family::G})
    if (family_name(f) == s) return f;
  return std::nullopt;
}

// Named vertices of the two-hub constructions. Paths are indexed from 0; path i
// runs v1, w[i], ..., u[i], v2 and has 6 internal vertices.
struct Landmarks {
  FamilySpec spec;
  Vertex v1 = kNoVertex;
  Vertex v2 = kNoVertex;
  std::vector<Vertex> w;
  std::vector<Vertex> u;
  std::vector<std::vector<Vertex>> paths;  // full hub-to-hub vertex sequence, length 8

  std::size_t path_count() const noexcept { return paths.size(); }

  // Index of the path whose interior contains v, if any.
  std::optional<std::size_t> path_of(Vertex v) const {
    for (std::size_t i = 0; i < paths.size(); ++i)
      for (std::size_t k = 1; k + 1 < paths[i].size(); ++k)
        if (paths[i][k] == v) return i;
    return std::nullopt;
  }

  // True when paths i and j form a great cycle in this family.
  bool great_pair(std::size_t i, std::size_t j) const {
    if (i == j) return false;
    if (spec.family == Family::G) return i / 2 != j / 2;
    return true;
  }
};

struct LandmarkedGraph {
  Graph graph;
  std::optional<Landmarks> landmarks;
};

inline constexpr std::size_t kPathInterior = 6;  // each hub-to-hub path has length 7

inline void validate(const FamilySpec& spec) {
  const auto p = spec.param;
  auto fail = [&](const std::string& why) {
    throw GraphError(GraphErrc::InvalidFamily, std::string(family_name(spec.family)) + "(" + std::to_string(p) +
                                                   "): " + why);
  };
  switch (spec.family) {
    case Family::Star:
      if (p < 1) fail("t must be at least 1");
      break;
    case Family::Path:
    case Family::Complete:
      if (p < 1) fail("n must be at least 1");
      break;
    case Family::Cycle:
      if (p < 3) fail("n must be at least 3");
      break;
    case Family::GPrime:
      if (p < 2) fail("l must be at least 2");
      break;
    case Family::G:
      if (p < 2) fail("l must be at least 2");
      if (p % 2 != 0) fail("l must be even");
      break;
  }
}

inline LandmarkedGraph generate(const FamilySpec& spec) {
  validate(spec);
  const auto p = spec.param;
  std::vector<Edge> edges;
  switch (spec.family) {
    case Family::Star:
      for (Vertex i = 1; i <= p; ++i) edges.emplace_back(0, i);
      return {Graph::build(p + 1, edges), std::nullopt};
    case Family::Path:
      for (Vertex i = 0; i + 1 < p; ++i) edges.emplace_back(i, i + 1);
      return {Graph::build(p, edges), std::nullopt};
    case Family::Cycle:
      for (Vertex i = 0; i < p; ++i) edges.emplace_back(std::min<Vertex>(i, (i + 1) % p), std::max<Vertex>(i, (i + 1) % p));
      return {Graph::build(p, edges), std::nullopt};
    case Family::Complete:
      for (Vertex i = 0; i < p; ++i)
        for (Vertex j = i + 1; j < p; ++j) edges.emplace_back(i, j);
      return {Graph::build(p, edges), std::nullopt};
    case Family::GPrime:
    case Family::G: break;
  }

  Landmarks lm;
  lm.spec = spec;
  lm.v1 = 0;
  lm.v2 = 1;
  const std::size_t n = 2 + kPathInterior * p;
  for (std::size_t i = 0; i < p; ++i) {
    const auto first = static_cast<Vertex>(2 + kPathInterior * i);
    std::vector<Vertex> path{lm.v1};
    for (Vertex k = 0; k < kPathInterior; ++k) path.push_back(first + k);
    path.push_back(lm.v2);
    for (std::size_t k = 0; k + 1 < path.size(); ++k) edges.emplace_back(path[k], path[k + 1]);
    lm.w.push_back(path[1]);
    lm.u.push_back(path[kPathInterior]);
    lm.paths.push_back(std::move(path));
  }
  if (spec.family == Family::G) {
    for (std::size_t i = 0; i + 1 < p; i += 2) {
      edges.emplace_back(lm.w[i], lm.w[i + 1]);
      edges.emplace_back(lm.u[i], lm.u[i + 1]);
    }
  }
  for (auto& e : edges)
    if (e.first > e.second) std::swap(e.first, e.second);
  return {Graph::build(n, edges), std::move(lm)};
}

struct GreatCycle {
  std::pair<std::size_t, std::size_t> path_indices;
  std::vector<Vertex> vertices;  // v1, P_i interior, v2, P_j interior reversed

  std::size_t index_of(Vertex v) const {
    for (std::size_t k = 0; k < vertices.size(); ++k)
      if (vertices[k] == v) return k;
    return kUnreachable;
  }
  bool contains(Vertex v) const { return index_of(v) != kUnreachable; }
  Vertex at(std::ptrdiff_t k) const {
    const auto len = static_cast<std::ptrdiff_t>(vertices.size());
    return vertices[static_cast<std::size_t>(((k % len) + len) % len)];
  }
};

inline GreatCycle make_great_cycle(const Landmarks& lm, std::size_t i, std::size_t j) {
  GreatCycle c;
  c.path_indices = {i, j};
  const auto& pi = lm.paths.at(i);
  const auto& pj = lm.paths.at(j);
  c.vertices.assign(pi.begin(), pi.end() - 1);  // v1 .. u_i
  c.vertices.insert(c.vertices.end(), pj.rbegin(), pj.rend() - 1);  // v2 .. w_j
  return c;
}

// Great cycles in ascending (i, j) order.
inline std::vector<GreatCycle> great_cycles(const LandmarkedGraph& lg) {
  if (!lg.landmarks) throw GraphError(GraphErrc::MissingLandmarks, "great_cycles needs a gprime or g instance");
  const auto& lm = *lg.landmarks;
  std::vector<GreatCycle> out;
  for (std::size_t i = 0; i < lm.path_count(); ++i)
    for (std::size_t j = i + 1; j < lm.path_count(); ++j)
      if (lm.great_pair(i, j)) out.push_back(make_great_cycle(lm, i, j));
  return out;
}

}  // namespace dmg
