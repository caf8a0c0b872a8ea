#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "racg/base.hpp"

namespace racg {

enum class FamilyKind { GammaM, OmegaM, Custom };

struct FamilyTag {
  FamilyKind kind = FamilyKind::Custom;
  int m = 0;  // meaningful for GammaM (m >= 1) and OmegaM (m >= 2)
};

// Defining graph of a right-angled Coxeter group: one involutive generator
// per vertex, two generators commute exactly when joined by an edge.
// Generator order is fixed at construction and defines ShortLex precedence.
// Immutable after construction; safe for shared concurrent reads.
class DefiningGraph {
 public:
  DefiningGraph(std::vector<std::string> generators,
                const std::vector<std::pair<std::string, std::string>>& edges,
                FamilyTag family = {});

  std::size_t size() const { return names_.size(); }
  const std::string& name(Gen g) const { return names_.at(g); }
  const std::vector<std::string>& generators() const { return names_; }

  Gen id(std::string_view name) const;  // throws lookup_error
  std::optional<Gen> try_id(std::string_view name) const;

  bool commutes(Gen s, Gen t) const {
    return (mask_[s * stride_ + (t >> 6)] >> (t & 63)) & 1u;
  }
  bool commutes(std::string_view s, std::string_view t) const {
    return commutes(id(s), id(t));
  }

  std::vector<Gen> link(Gen s) const;
  std::vector<Gen> link(std::string_view s) const { return link(id(s)); }

  bool is_triangle_free() const;  // exhaustive scan over edges
  bool triangle_free_flag() const { return triangle_free_; }

  // Edges as (min id, max id) pairs sorted by (min, max).
  std::vector<std::pair<Gen, Gen>> edges() const;
  std::size_t edge_count() const { return edge_count_; }

  FamilyTag family() const { return family_; }

  // Commutation row of s as a bit mask over generator ids.
  const std::uint64_t* mask_row(Gen s) const { return mask_.data() + s * stride_; }
  std::size_t mask_stride() const { return stride_; }

  bool same_presentation(const DefiningGraph& other) const {
    return names_ == other.names_ && mask_ == other.mask_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Gen> index_;
  std::vector<std::uint64_t> mask_;  // size() rows of stride_ words
  std::size_t stride_ = 1;
  std::size_t edge_count_ = 0;
  bool triangle_free_ = false;
  FamilyTag family_;
};

// The graph family gamma:m on vertices {a_0..a_m, b_0..b_m}: every a_i
// (i >= 1) joins a_0 and b_0, b_1 joins a_0 and b_0, and b_j (j >= 2)
// joins a_{j-1} and b_{j-1}. 2m+2 vertices, 4m edges, triangle-free.
DefiningGraph build_gamma(int m);

// omega:m is the disjoint union of gamma:2 .. gamma:m with generators
// renamed G{i}.{name}. No edges between components.
DefiningGraph build_omega(int m);

// Text format, UTF-8:
//   racg-graph v1
//   gen <name>        (file order = ShortLex order)
//   edge <name> <name>
// '#' starts a comment. Names may not contain whitespace, ',' or '#'.
DefiningGraph parse_graph(std::string_view text);
std::string serialize_graph(const DefiningGraph& g);

// DOT rendering of the defining graph itself.
std::string graph_to_dot(const DefiningGraph& g);

}  // namespace racg
