#include "racg/words.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

namespace racg {

Word parse_word(const DefiningGraph& g, std::string_view text) {
  Word w;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "e" && !g.try_id("e")) continue;  // identity marker
    w.push_back(g.id(tok));
  }
  return w;
}

std::string format_word(const DefiningGraph& g, std::span<const Gen> w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += g.name(w[i]);
  }
  return out;
}

void geodesic_reduce(const DefiningGraph& g, std::vector<Gen>& w) {
  std::size_t n = 0;  // survivors live in w[0..n)
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Gen s = w[k];
    if (s >= g.size()) throw lookup_error("letter id out of range");
    bool cancelled = false;
    for (std::size_t i = n; i-- > 0;) {
      const Gen x = w[i];
      if (x == s) {
        // Remove w[i]; shift the commuting tail left.
        for (std::size_t j = i + 1; j < n; ++j) w[j - 1] = w[j];
        --n;
        cancelled = true;
        break;
      }
      if (!g.commutes(x, s)) break;
    }
    if (!cancelled) w[n++] = s;
  }
  w.resize(n);
}

void lex_least_linearization(const DefiningGraph& g, std::vector<Gen>& w) {
  const std::size_t n = w.size();
  if (n < 2) return;
  const std::size_t stride = g.mask_stride();
  std::vector<Gen> out;
  out.reserve(n);
  std::vector<std::uint8_t> alive(n, 1);
  std::uint64_t blocked_small;
  std::vector<std::uint64_t> blocked_big(stride);
  for (std::size_t k = 0; k < n; ++k) {
    // A letter is emittable when every alive letter before it commutes with
    // it; take the least such (equal letters conflict, so it is unique).
    std::size_t best = n;
    Gen best_gen = 255;
    if (stride == 1) {
      blocked_small = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (!alive[j]) continue;
        const Gen x = w[j];
        if (!((blocked_small >> x) & 1u) && x < best_gen) {
          best_gen = x;
          best = j;
          if (best_gen == 0) break;
        }
        blocked_small |= ~g.mask_row(x)[0];
      }
    } else {
      std::fill(blocked_big.begin(), blocked_big.end(), 0);
      for (std::size_t j = 0; j < n; ++j) {
        if (!alive[j]) continue;
        const Gen x = w[j];
        if (!((blocked_big[x >> 6] >> (x & 63)) & 1u) && x < best_gen) {
          best_gen = x;
          best = j;
          if (best_gen == 0) break;
        }
        const std::uint64_t* row = g.mask_row(x);
        for (std::size_t t = 0; t < stride; ++t) blocked_big[t] |= ~row[t];
      }
    }
    out.push_back(best_gen);
    alive[best] = 0;
  }
  w = std::move(out);
}

NormalForm reduce(const DefiningGraph& g, std::span<const Gen> w) {
  NormalForm nf(g);
  nf.letters_.assign(w.begin(), w.end());
  geodesic_reduce(g, nf.letters_);
  lex_least_linearization(g, nf.letters_);
  return nf;
}

NormalForm identity(const DefiningGraph& g) { return NormalForm(g); }

bool is_geodesic_word(const DefiningGraph& g, std::span<const Gen> w) {
  std::vector<Gen> copy(w.begin(), w.end());
  geodesic_reduce(g, copy);
  return copy.size() == w.size();
}

std::size_t NormalForm::hash() const {
  // FNV-1a over the letter bytes.
  std::uint64_t h = 1469598103934665603ull;
  for (Gen x : letters_) {
    h ^= x;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

namespace {

void require_same_graph(const NormalForm& x, const NormalForm& y) {
  if (&x.graph() == &y.graph()) return;
  if (!x.graph().same_presentation(y.graph()))
    throw graph_mismatch("operands belong to different defining graphs");
}

}  // namespace

NormalForm multiply(const NormalForm& x, const NormalForm& y) {
  require_same_graph(x, y);
  const DefiningGraph& g = x.graph();
  NormalForm nf(g);
  nf.letters_ = x.letters();
  nf.letters_.insert(nf.letters_.end(), y.letters().begin(), y.letters().end());
  geodesic_reduce(g, nf.letters_);
  lex_least_linearization(g, nf.letters_);
  return nf;
}

NormalForm multiply(const NormalForm& x, Gen s) {
  const DefiningGraph& g = x.graph();
  if (s >= g.size()) throw lookup_error("letter id out of range");
  NormalForm nf(g);
  nf.letters_ = x.letters();
  nf.letters_.push_back(s);
  geodesic_reduce(g, nf.letters_);
  lex_least_linearization(g, nf.letters_);
  return nf;
}

NormalForm inverse(const NormalForm& x) {
  // Generators are involutions: the reverse word represents x^-1.
  std::vector<Gen> rev(x.letters().rbegin(), x.letters().rend());
  return reduce(x.graph(), rev);
}

std::size_t distance(const NormalForm& x, const NormalForm& y) {
  require_same_graph(x, y);
  std::vector<Gen> w(x.letters().rbegin(), x.letters().rend());
  w.insert(w.end(), y.letters().begin(), y.letters().end());
  geodesic_reduce(x.graph(), w);
  return w.size();
}

WallId wall_of_edge(const NormalForm& base, Gen s) {
  const DefiningGraph& g = base.graph();
  if (s >= g.size()) throw lookup_error("letter id out of range");
  std::vector<Gen> w(base.letters());
  w.push_back(s);
  w.insert(w.end(), base.letters().rbegin(), base.letters().rend());
  return WallId{reduce(g, w), s};
}

std::vector<WallId> crossing_walls(const DefiningGraph& g, const NormalForm& start,
                                   std::span<const Gen> w) {
  std::vector<WallId> walls;
  walls.reserve(w.size());
  NormalForm cur = start;
  for (Gen s : w) {
    walls.push_back(wall_of_edge(cur, s));
    cur = multiply(cur, s);
  }
  return walls;
}

namespace {

// Generator-count parity vector; invariant under all three oracle moves.
std::vector<std::uint8_t> parity_vector(const DefiningGraph& g, std::span<const Gen> w) {
  std::vector<std::uint8_t> par(g.size(), 0);
  for (Gen x : w) par[x] ^= 1;
  return par;
}

}  // namespace

OracleVerdict oracle_equal(const DefiningGraph& g, std::span<const Gen> u,
                           std::span<const Gen> v, std::size_t budget,
                           OracleStats* stats) {
  for (Gen x : u)
    if (x >= g.size()) throw lookup_error("letter id out of range");
  for (Gen x : v)
    if (x >= g.size()) throw lookup_error("letter id out of range");
  if (parity_vector(g, u) != parity_vector(g, v)) {
    // No move changes any generator's count parity, so v is unreachable.
    if (stats) stats->parity_shortcut = true;
    return OracleVerdict::Distinct;
  }
  const std::size_t cap = std::max(u.size(), v.size()) + 2;
  const std::string target(v.begin(), v.end());
  std::string start(u.begin(), u.end());
  if (start == target) return OracleVerdict::Equal;

  std::unordered_set<std::string> seen{start};
  std::deque<std::string> queue{start};
  auto visit = [&](std::string&& next) {
    if (seen.insert(next).second) queue.push_back(std::move(next));
  };
  while (!queue.empty()) {
    if (seen.size() > budget) {
      if (stats) stats->visited = seen.size();
      return OracleVerdict::Inconclusive;
    }
    std::string w = std::move(queue.front());
    queue.pop_front();
    const std::size_t n = w.size();
    // delete adjacent equal pair
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (w[i] != w[i + 1]) continue;
      std::string next = w.substr(0, i) + w.substr(i + 2);
      if (next == target) {
        if (stats) stats->visited = seen.size();
        return OracleVerdict::Equal;
      }
      visit(std::move(next));
    }
    // swap adjacent commuting pair
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!g.commutes(static_cast<Gen>(w[i]), static_cast<Gen>(w[i + 1]))) continue;
      std::string next = w;
      std::swap(next[i], next[i + 1]);
      if (next == target) {
        if (stats) stats->visited = seen.size();
        return OracleVerdict::Equal;
      }
      visit(std::move(next));
    }
    // insert adjacent equal pair, within the length cap
    if (n + 2 <= cap) {
      for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t s = 0; s < g.size(); ++s) {
          std::string next = w.substr(0, i);
          next += static_cast<char>(s);
          next += static_cast<char>(s);
          next += w.substr(i);
          if (next == target) {
            if (stats) stats->visited = seen.size();
            return OracleVerdict::Equal;
          }
          visit(std::move(next));
        }
      }
    }
  }
  if (stats) stats->visited = seen.size();
  return OracleVerdict::Distinct;  // closure fully enumerated
}

}  // namespace racg
