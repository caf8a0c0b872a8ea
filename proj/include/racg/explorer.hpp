#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "racg/geodesic.hpp"
#include "racg/words.hpp"

namespace racg {

// Budgets for one avoidant search. cap_radius bounds the distance from the
// ball center that the search may roam; cap_nodes bounds stored states.
struct SearchCaps {
  int cap_radius = 0;
  std::uint64_t cap_nodes = 50'000'000;
  int stabilization_delta = 2;

  static SearchCaps defaults_for_radius(int r) {
    SearchCaps c;
    c.cap_radius = std::max(4 * r, 2);
    return c;
  }
};

enum class SearchStatus { Found, NotFoundWithinBudget, Infinite };

std::string to_string(SearchStatus s);

// Outcome of one capped search. Found lengths are exact minima over paths
// inside the capped region, hence upper bounds on the uncapped infimum.
// Infinite is reported only when the whole complement component of the
// start was exhausted without ever touching the cap_radius boundary.
struct AvoidantResult {
  SearchStatus status = SearchStatus::NotFoundWithinBudget;
  std::int64_t length = -1;   // valid iff status == Found
  std::uint64_t nodes_explored = 0;
  SearchCaps caps_used;
};

// One measured divergence value at radius r, plus everything needed to
// reproduce it. stabilized means the value did not change when the search
// was re-run with cap_radius + stabilization_delta.
struct DivergenceSample {
  int r = 0;
  SearchStatus status = SearchStatus::NotFoundWithinBudget;
  std::int64_t value = -1;
  SearchCaps caps;
  std::uint64_t nodes_explored = 0;
  bool stabilized = false;
  std::optional<int> min_t;  // set by lower_divergence

  std::string graph_label;
  std::string geodesic_label;
  std::optional<int> m;
  std::optional<RationalExponent> t;
};

// One step in every generator; |result| = |S|.
std::vector<NormalForm> neighbors(const NormalForm& x);

// Exact closed ball {y : d(center, y) <= R}, elements with distances in
// (distance, ShortLex) order. Throws capacity_error past cap_nodes.
struct BallMap {
  std::vector<std::pair<NormalForm, int>> items;
  int radius = 0;

  std::vector<std::size_t> sphere_sizes() const;  // indexed by distance
};

BallMap ball(const DefiningGraph& g, const NormalForm& center, int R,
             std::uint64_t cap_nodes = 50'000'000);

// Length of a shortest path from p to q whose vertices all keep distance
// >= r from x0 (open-ball avoidance) and <= caps.cap_radius from x0.
AvoidantResult avoidant_path(const DefiningGraph& g, const NormalForm& x0,
                             int r, const NormalForm& p, const NormalForm& q,
                             const SearchCaps& caps);

// As avoidant_path, additionally reconstructing one optimal path.
AvoidantResult avoidant_path_traced(const DefiningGraph& g, const NormalForm& x0,
                                    int r, const NormalForm& p, const NormalForm& q,
                                    const SearchCaps& caps,
                                    std::vector<NormalForm>& path_out);

// Divergence of two rays with a common basepoint: avoidant distance between
// alpha(r) and beta(r) around the basepoint, with a stabilization re-run.
DivergenceSample div_pair(const GeodesicSpec& alpha, const GeodesicSpec& beta,
                          int r, const SearchCaps& caps);

// Divergence of a bi-infinite path: avoidant distance between vertex(-r)
// and vertex(r) around vertex(0).
DivergenceSample div_geodesic(const GeodesicSpec& gamma, int r, const SearchCaps& caps);

// Avoidant distance between vertex(t-r) and vertex(t+r) around vertex(t).
AvoidantResult rho(const GeodesicSpec& gamma, int r, std::int64_t t_center,
                   const SearchCaps& caps);

// Minimum of rho over t_center in [window_lo, window_hi]; records the
// minimizing t_center (smallest on ties).
DivergenceSample lower_divergence(const GeodesicSpec& gamma, int r,
                                  std::int64_t window_lo, std::int64_t window_hi,
                                  const SearchCaps& caps);

// sup of complement-of-ball distances over sphere pairs at radius r.
// Pairs that the caps censor are counted, not folded into the supremum.
struct GerstenReport {
  DivergenceSample sample;
  std::size_t sphere_size = 0;
  std::size_t pairs_found = 0;
  std::size_t pairs_infinite = 0;   // certified unreachable in the complement
  std::size_t pairs_censored = 0;   // undecided under the caps
};

GerstenReport gersten_divergence(const DefiningGraph& g, int r, const SearchCaps& caps);

// DOT rendering of a ball, optionally overlaying one avoidant path.
std::string ball_to_dot(const DefiningGraph& g, const BallMap& ball,
                        const std::vector<NormalForm>* highlight_path = nullptr);

}  // namespace racg
