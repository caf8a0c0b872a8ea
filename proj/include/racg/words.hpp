#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "racg/graph.hpp"

namespace racg {

// A word over the generators of a fixed defining graph. Not reduced.
using Word = std::vector<Gen>;

Word parse_word(const DefiningGraph& g, std::string_view text);
std::string format_word(const DefiningGraph& g, std::span<const Gen> w);

// Canonical representative of a group element: the ShortLex-least geodesic
// word in its commutation class. Equality of NormalForms over the same
// graph is equality in the group.
class NormalForm {
 public:
  NormalForm() = default;
  explicit NormalForm(const DefiningGraph& g) : graph_(&g) {}

  const DefiningGraph& graph() const { return *graph_; }
  const std::vector<Gen>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }

  bool operator==(const NormalForm& o) const {
    return letters_ == o.letters_ && compatible(o);
  }
  bool operator!=(const NormalForm& o) const { return !(*this == o); }
  // ShortLex order among forms over one graph.
  bool operator<(const NormalForm& o) const {
    if (letters_.size() != o.letters_.size())
      return letters_.size() < o.letters_.size();
    return letters_ < o.letters_;
  }

  std::string str() const { return format_word(*graph_, letters_); }

  std::size_t hash() const;

 private:
  bool compatible(const NormalForm& o) const {
    return graph_ == o.graph_ || (graph_ && o.graph_ && graph_->same_presentation(*o.graph_));
  }

  friend NormalForm reduce(const DefiningGraph&, std::span<const Gen>);
  friend NormalForm multiply(const NormalForm&, const NormalForm&);
  friend NormalForm multiply(const NormalForm&, Gen);
  friend NormalForm inverse(const NormalForm&);

  const DefiningGraph* graph_ = nullptr;
  std::vector<Gen> letters_;
};

struct NormalFormHash {
  std::size_t operator()(const NormalForm& x) const { return x.hash(); }
};

// Geodesic representative of w: repeated cancellation of letter pairs that
// meet through pairwise-commuting blocks. In-place; returns the survivors.
void geodesic_reduce(const DefiningGraph& g, std::vector<Gen>& w);

// Rewrites a geodesic word into the lexicographically least word of its
// commutation class (repeatedly emit the least letter whose remaining
// predecessors all commute with it).
void lex_least_linearization(const DefiningGraph& g, std::vector<Gen>& w);

NormalForm reduce(const DefiningGraph& g, std::span<const Gen> w);
NormalForm identity(const DefiningGraph& g);

bool is_geodesic_word(const DefiningGraph& g, std::span<const Gen> w);

NormalForm multiply(const NormalForm& x, const NormalForm& y);
NormalForm multiply(const NormalForm& x, Gen s);
NormalForm inverse(const NormalForm& x);
std::size_t distance(const NormalForm& x, const NormalForm& y);

// A wall (hyperplane) named by the reflection it induces: the normal form
// of base * s * base^-1 together with the edge label s.
struct WallId {
  NormalForm reflection;
  Gen type = 0;

  bool operator==(const WallId& o) const { return reflection == o.reflection; }
  bool operator!=(const WallId& o) const { return !(*this == o); }
};

struct WallIdHash {
  std::size_t operator()(const WallId& w) const { return w.reflection.hash(); }
};

WallId wall_of_edge(const NormalForm& base, Gen s);

// Walls crossed by the edge path that starts at `start` and reads `w`.
// When start = identity: all walls distinct  <=>  w is geodesic.
std::vector<WallId> crossing_walls(const DefiningGraph& g,
                                   const NormalForm& start,
                                   std::span<const Gen> w);

// Word-equality oracle by breadth-first closure under elementary moves:
// delete an adjacent equal pair, insert an adjacent equal pair (while the
// word stays within max(|u|,|v|)+2 letters), swap an adjacent commuting
// pair. Independent of reduce(); used to cross-check it.
enum class OracleVerdict { Equal, Distinct, Inconclusive };

struct OracleStats {
  std::size_t visited = 0;
  bool parity_shortcut = false;
};

OracleVerdict oracle_equal(const DefiningGraph& g, std::span<const Gen> u,
                           std::span<const Gen> v, std::size_t budget,
                           OracleStats* stats = nullptr);

}  // namespace racg
