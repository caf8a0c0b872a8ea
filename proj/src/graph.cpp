#include "racg/graph.hpp"

#include <algorithm>
#include <sstream>

namespace racg {

namespace {

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c == '#' || c == ',' || std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

DefiningGraph::DefiningGraph(std::vector<std::string> generators,
                             const std::vector<std::pair<std::string, std::string>>& edges,
                             FamilyTag family)
    : names_(std::move(generators)), family_(family) {
  if (names_.size() > kMaxGenerators)
    throw invalid_parameter("too many generators (max 255)");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!valid_name(names_[i]))
      throw invalid_parameter("invalid generator name: '" + names_[i] + "'");
    if (!index_.emplace(names_[i], static_cast<Gen>(i)).second)
      throw invalid_parameter("duplicate generator name: " + names_[i]);
  }
  stride_ = (names_.size() + 63) / 64;
  if (stride_ == 0) stride_ = 1;
  mask_.assign(names_.size() * stride_, 0);
  for (const auto& [u, v] : edges) {
    Gen a = id(u), b = id(v);
    if (a == b) throw invalid_parameter("self-loop on generator " + u);
    if (!commutes(a, b)) ++edge_count_;
    mask_[a * stride_ + (b >> 6)] |= std::uint64_t{1} << (b & 63);
    mask_[b * stride_ + (a >> 6)] |= std::uint64_t{1} << (a & 63);
  }
  triangle_free_ = is_triangle_free();
}

Gen DefiningGraph::id(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end())
    throw lookup_error("unknown generator: '" + std::string(name) + "'");
  return it->second;
}

std::optional<Gen> DefiningGraph::try_id(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Gen> DefiningGraph::link(Gen s) const {
  if (s >= size()) throw lookup_error("generator id out of range");
  std::vector<Gen> out;
  for (std::size_t t = 0; t < size(); ++t)
    if (commutes(s, static_cast<Gen>(t))) out.push_back(static_cast<Gen>(t));
  return out;
}

bool DefiningGraph::is_triangle_free() const {
  // A triangle is an edge {s,t} plus a common neighbor: nonzero mask overlap.
  for (std::size_t s = 0; s < size(); ++s)
    for (std::size_t t = s + 1; t < size(); ++t) {
      if (!commutes(static_cast<Gen>(s), static_cast<Gen>(t))) continue;
      const std::uint64_t* rs = mask_row(static_cast<Gen>(s));
      const std::uint64_t* rt = mask_row(static_cast<Gen>(t));
      for (std::size_t w = 0; w < stride_; ++w)
        if (rs[w] & rt[w]) return false;
    }
  return true;
}

std::vector<std::pair<Gen, Gen>> DefiningGraph::edges() const {
  std::vector<std::pair<Gen, Gen>> out;
  for (std::size_t s = 0; s < size(); ++s)
    for (std::size_t t = s + 1; t < size(); ++t)
      if (commutes(static_cast<Gen>(s), static_cast<Gen>(t)))
        out.emplace_back(static_cast<Gen>(s), static_cast<Gen>(t));
  return out;  // already sorted by (min, max)
}

DefiningGraph build_gamma(int m) {
  if (m < 1) throw invalid_parameter("gamma family needs m >= 1");
  if (2 * (std::size_t)m + 2 > kMaxGenerators)
    throw invalid_parameter("gamma family too large for generator id space");
  std::vector<std::string> gens;
  gens.reserve(2 * m + 2);
  // Interleaved a_i, b_i so ShortLex precedence is a_0 < b_0 < a_1 < b_1 < ...
  for (int i = 0; i <= m; ++i) {
    gens.push_back("a_" + std::to_string(i));
    gens.push_back("b_" + std::to_string(i));
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (int i = 1; i <= m; ++i) {
    edges.emplace_back("a_" + std::to_string(i), "a_0");
    edges.emplace_back("a_" + std::to_string(i), "b_0");
  }
  edges.emplace_back("b_1", "a_0");
  edges.emplace_back("b_1", "b_0");
  for (int j = 2; j <= m; ++j) {
    edges.emplace_back("b_" + std::to_string(j), "a_" + std::to_string(j - 1));
    edges.emplace_back("b_" + std::to_string(j), "b_" + std::to_string(j - 1));
  }
  DefiningGraph g(std::move(gens), edges, FamilyTag{FamilyKind::GammaM, m});
  if (!g.triangle_free_flag())
    throw invalid_parameter("gamma family construction produced a triangle");
  return g;
}

DefiningGraph build_omega(int m) {
  if (m < 2) throw invalid_parameter("omega family needs m >= 2");
  std::vector<std::string> gens;
  std::vector<std::pair<std::string, std::string>> edges;
  for (int i = 2; i <= m; ++i) {
    DefiningGraph gi = build_gamma(i);
    const std::string prefix = "G" + std::to_string(i) + ".";
    for (const auto& n : gi.generators()) gens.push_back(prefix + n);
    for (const auto& [u, v] : gi.edges())
      edges.emplace_back(prefix + gi.name(u), prefix + gi.name(v));
  }
  if (gens.size() > kMaxGenerators)
    throw invalid_parameter("omega family too large for generator id space");
  return DefiningGraph(std::move(gens), edges, FamilyTag{FamilyKind::OmegaM, m});
}

DefiningGraph parse_graph(std::string_view text) {
  std::vector<std::string> gens;
  std::vector<std::pair<std::string, std::string>> edges;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank
    if (!header_seen) {
      std::string ver;
      if (tok != "racg-graph" || !(ls >> ver) || ver != "v1")
        throw parse_error("expected header 'racg-graph v1'", line_no);
      header_seen = true;
      continue;
    }
    if (tok == "gen") {
      std::string name, extra;
      if (!(ls >> name) || (ls >> extra))
        throw parse_error("expected 'gen <name>'", line_no);
      if (!valid_name(name)) throw parse_error("invalid generator name", line_no);
      if (std::find(gens.begin(), gens.end(), name) != gens.end())
        throw parse_error("duplicate generator: " + name, line_no);
      gens.push_back(name);
    } else if (tok == "edge") {
      std::string u, v, extra;
      if (!(ls >> u >> v) || (ls >> extra))
        throw parse_error("expected 'edge <name> <name>'", line_no);
      if (std::find(gens.begin(), gens.end(), u) == gens.end())
        throw parse_error("edge endpoint not declared: " + u, line_no);
      if (std::find(gens.begin(), gens.end(), v) == gens.end())
        throw parse_error("edge endpoint not declared: " + v, line_no);
      if (u == v) throw parse_error("self-loop on " + u, line_no);
      edges.emplace_back(u, v);
    } else {
      throw parse_error("unknown directive '" + tok + "'", line_no);
    }
  }
  if (!header_seen) throw parse_error("missing header 'racg-graph v1'", line_no);
  return DefiningGraph(std::move(gens), edges);
}

std::string serialize_graph(const DefiningGraph& g) {
  std::ostringstream out;
  out << "racg-graph v1\n";
  for (const auto& n : g.generators()) out << "gen " << n << "\n";
  for (const auto& [u, v] : g.edges())
    out << "edge " << g.name(u) << " " << g.name(v) << "\n";
  return out.str();
}

std::string graph_to_dot(const DefiningGraph& g) {
  std::ostringstream out;
  out << "graph defining_graph {\n  node [shape=circle];\n";
  for (const auto& n : g.generators()) out << "  \"" << n << "\";\n";
  for (const auto& [u, v] : g.edges())
    out << "  \"" << g.name(u) << "\" -- \"" << g.name(v) << "\";\n";
  out << "}\n";
  return out.str();
}

}  // namespace racg
