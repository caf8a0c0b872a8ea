#include "racg/explorer.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace racg {

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::NotFoundWithinBudget: return "budget";
    case SearchStatus::Infinite: return "infinite";
  }
  return "?";
}

std::vector<NormalForm> neighbors(const NormalForm& x) {
  const DefiningGraph& g = x.graph();
  std::vector<NormalForm> out;
  out.reserve(g.size());
  for (std::size_t s = 0; s < g.size(); ++s)
    out.push_back(multiply(x, static_cast<Gen>(s)));
  return out;
}

BallMap ball(const DefiningGraph& g, const NormalForm& center, int R,
             std::uint64_t cap_nodes) {
  if (R < 0) throw invalid_parameter("ball radius must be >= 0");
  BallMap out;
  out.radius = R;
  std::unordered_map<NormalForm, int, NormalFormHash> dist;
  std::deque<NormalForm> frontier;
  dist.emplace(center, 0);
  frontier.push_back(center);
  while (!frontier.empty()) {
    NormalForm cur = std::move(frontier.front());
    frontier.pop_front();
    const int d = dist.at(cur);
    if (d == R) continue;
    for (std::size_t s = 0; s < g.size(); ++s) {
      NormalForm next = multiply(cur, static_cast<Gen>(s));
      if (dist.count(next)) continue;
      if (dist.size() >= cap_nodes)
        throw capacity_error("ball enumeration exceeded cap_nodes");
      dist.emplace(next, d + 1);
      frontier.push_back(next);
    }
  }
  out.items.assign(dist.begin(), dist.end());
  std::sort(out.items.begin(), out.items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  return out;
}

std::vector<std::size_t> BallMap::sphere_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(radius) + 1, 0);
  for (const auto& [nf, d] : items) ++sizes[static_cast<std::size_t>(d)];
  return sizes;
}

namespace {

constexpr int kMaxEngineRadius = 250;

// Avoidant shortest-path engine. Works in coordinates translated so the
// ball center is the identity: the distance from the center is then just
// the normal-form length. Single-target searches run A* with the exact
// unobstructed word distance to the target as heuristic (consistent, so
// settled lengths are exact); multi-target searches run plain BFS.
class AvoidantEngine {
 public:
  AvoidantEngine(const DefiningGraph& g, int r, int cap_radius,
                 std::uint64_t cap_nodes, bool trace)
      : g_(g), stride_(g.mask_stride()), r_(r), cap_radius_(cap_radius),
        cap_nodes_(cap_nodes), trace_(trace) {
    table_.assign(kInitialSlots, 0);
    slot_mask_ = kInitialSlots - 1;
  }

  struct Outcome {
    // one entry per target: settled distance, or -1
    std::vector<std::int64_t> dist;
    bool truncated = false;   // some neighbor was pruned at cap_radius
    bool budget_hit = false;  // state storage reached cap_nodes
    std::uint64_t nodes = 0;
    std::vector<std::vector<Gen>> path;  // filled in traced single-target runs
  };

  // `source` and `targets` are canonical letter words in translated
  // coordinates; all must satisfy r <= |w| <= cap_radius (checked by the
  // caller). Single-target mode stops at the target; multi-target stops
  // when every target has settled.
  Outcome run(const std::vector<Gen>& source,
              const std::vector<std::vector<Gen>>& targets, bool use_heuristic) {
    Outcome out;
    out.dist.assign(targets.size(), -1);

    std::unordered_map<std::string, std::size_t> target_index;
    for (std::size_t i = 0; i < targets.size(); ++i)
      target_index.emplace(std::string(targets[i].begin(), targets[i].end()), i);
    std::size_t remaining = target_index.size();

    const std::vector<Gen>& hq = targets.empty() ? source : targets[0];

    // Seed.
    {
      std::uint16_t h0 = 0;
      if (use_heuristic) {
        std::vector<Gen> w(source.rbegin(), source.rend());
        w.insert(w.end(), hq.begin(), hq.end());
        geodesic_reduce(g_, w);
        h0 = static_cast<std::uint16_t>(w.size());
        seed_w_ = std::move(w);
      }
      const std::size_t idx = insert_state(source.data(), source.size(),
                                           seed_w_.data(), seed_w_.size(), 0);
      push_bucket(recs_[idx].g + h0, static_cast<std::uint32_t>(idx));
    }

    std::vector<Gen> ybuf(static_cast<std::size_t>(cap_radius_) + 2);
    std::vector<Gen> wbuf(2 * static_cast<std::size_t>(cap_radius_) + 4);
    std::vector<Gen> canon_scratch;

    for (std::size_t f = 0; f < buckets_.size(); ++f) {
      // push_bucket may grow buckets_, so index it afresh on every access
      for (std::size_t head = 0; head < buckets_[f].size(); ++head) {
        const std::uint32_t idx = buckets_[f][head];
        Rec& rec = recs_[idx];
        if (rec.settled) continue;
        if (static_cast<std::size_t>(rec.g) + rec.w_len != f) continue;  // stale
        rec.settled = 1;

        if (use_heuristic) {
          if (rec.w_len == 0) {  // reached the target
            out.dist[0] = rec.g;
            if (trace_) out.path = trace_path(idx);
            out.nodes = recs_.size();
            return out;
          }
        } else if (remaining > 0) {
          auto it = target_index.find(
              std::string(word_at(rec.y_off), word_at(rec.y_off) + rec.y_len));
          if (it != target_index.end()) {
            if (out.dist[it->second] < 0) {
              out.dist[it->second] = rec.g;
              if (--remaining == 0) {
                out.nodes = recs_.size();
                return out;
              }
            }
          }
        }

        // Expand in generator order.
        const int ylen = rec.y_len;
        const int wlen = rec.w_len;
        const std::uint32_t yoff = rec.y_off, woff = rec.w_off;
        const std::uint32_t gcur = rec.g;
        for (std::size_t s = 0; s < g_.size(); ++s) {
          std::memcpy(ybuf.data(), word_at(yoff), static_cast<std::size_t>(ylen));
          int nylen = push_right(ybuf.data(), ylen, static_cast<Gen>(s));
          if (nylen < r_) continue;  // open-ball interior is forbidden
          if (nylen > cap_radius_) {
            out.truncated = true;
            continue;
          }
          canonicalize(ybuf.data(), nylen, canon_scratch);
          const std::uint64_t h = hash_bytes(ybuf.data(), nylen);
          std::size_t slot = find_slot(ybuf.data(), nylen, h);
          if (table_[slot] != 0) {
            Rec& other = recs_[table_[slot] - 1];
            if (!other.settled && gcur + 1 < other.g) {
              other.g = gcur + 1;
              if (trace_) parent_[table_[slot] - 1] = idx;
              push_bucket(other.g + other.w_len, table_[slot] - 1);
            }
            continue;
          }
          if (recs_.size() >= cap_nodes_ ||
              yarena_.size() > UINT32_MAX - 1024 || warena_.size() > UINT32_MAX - 1024) {
            out.budget_hit = true;
            out.nodes = recs_.size();
            return out;
          }
          int nwlen = 0;
          if (use_heuristic) {
            std::memcpy(wbuf.data(), warena_.data() + woff,
                        static_cast<std::size_t>(wlen));
            nwlen = push_left(wbuf.data(), wlen, static_cast<Gen>(s));
          }
          const std::size_t nidx =
              insert_state_at(slot, ybuf.data(), nylen, wbuf.data(), nwlen, gcur + 1, h);
          if (trace_) parent_[nidx] = idx;
          push_bucket(gcur + 1 + nwlen, static_cast<std::uint32_t>(nidx));
        }
      }
      buckets_[f].clear();
      buckets_[f].shrink_to_fit();
    }
    out.nodes = recs_.size();
    return out;  // frontier exhausted
  }

 private:
  struct Rec {
    std::uint32_t y_off = 0;
    std::uint32_t w_off = 0;
    std::uint32_t g = 0;
    std::uint16_t w_len = 0;
    std::uint8_t y_len = 0;
    std::uint8_t settled = 0;
  };

  static constexpr std::size_t kInitialSlots = 1 << 12;

  const Gen* word_at(std::uint32_t off) const { return yarena_.data() + off; }

  static std::uint64_t hash_bytes(const Gen* p, int len) {
    std::uint64_t h = 1469598103934665603ull;
    for (int i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
    h ^= static_cast<std::uint64_t>(len);
    h *= 1099511628211ull;
    return h;
  }

  // Multiply the geodesic word in buf by s on the right. Returns the new
  // length; buf needs one spare slot.
  int push_right(Gen* buf, int len, Gen s) const {
    for (int i = len - 1; i >= 0; --i) {
      const Gen x = buf[i];
      if (x == s) {
        std::memmove(buf + i, buf + i + 1, static_cast<std::size_t>(len - i - 1));
        return len - 1;
      }
      if (!g_.commutes(x, s)) break;
    }
    buf[len] = s;
    return len + 1;
  }

  // Multiply by s on the left.
  int push_left(Gen* buf, int len, Gen s) const {
    for (int i = 0; i < len; ++i) {
      const Gen x = buf[i];
      if (x == s) {
        std::memmove(buf + i, buf + i + 1, static_cast<std::size_t>(len - i - 1));
        return len - 1;
      }
      if (!g_.commutes(x, s)) break;
    }
    std::memmove(buf + 1, buf, static_cast<std::size_t>(len));
    buf[0] = s;
    return len + 1;
  }

  void canonicalize(Gen* buf, int len, std::vector<Gen>& scratch) const {
    if (len < 2) return;
    scratch.assign(buf, buf + len);
    lex_least_linearization(g_, scratch);
    std::memcpy(buf, scratch.data(), static_cast<std::size_t>(len));
  }

  std::size_t find_slot(const Gen* word, int len, std::uint64_t h) const {
    std::size_t slot = h & slot_mask_;
    while (table_[slot] != 0) {
      const Rec& rec = recs_[table_[slot] - 1];
      if (rec.y_len == len &&
          std::memcmp(yarena_.data() + rec.y_off, word,
                      static_cast<std::size_t>(len)) == 0)
        return slot;
      slot = (slot + 1) & slot_mask_;
    }
    return slot;
  }

  std::size_t insert_state(const Gen* y, std::size_t ylen, const Gen* w,
                           std::size_t wlen, std::uint32_t g) {
    const std::uint64_t h = hash_bytes(y, static_cast<int>(ylen));
    return insert_state_at(find_slot(y, static_cast<int>(ylen), h), y,
                           static_cast<int>(ylen), w, static_cast<int>(wlen), g, h);
  }

  std::size_t insert_state_at(std::size_t slot, const Gen* y, int ylen,
                              const Gen* w, int wlen, std::uint32_t g,
                              std::uint64_t h) {
    Rec rec;
    rec.y_off = static_cast<std::uint32_t>(yarena_.size());
    rec.y_len = static_cast<std::uint8_t>(ylen);
    yarena_.insert(yarena_.end(), y, y + ylen);
    rec.w_off = static_cast<std::uint32_t>(warena_.size());
    rec.w_len = static_cast<std::uint16_t>(wlen);
    if (wlen > 0) warena_.insert(warena_.end(), w, w + wlen);
    rec.g = g;
    recs_.push_back(rec);
    hashes_.push_back(h);
    if (trace_) parent_.push_back(UINT32_MAX);
    table_[slot] = static_cast<std::uint32_t>(recs_.size());
    if (recs_.size() * 10 > (slot_mask_ + 1) * 7) grow_table();
    return recs_.size() - 1;
  }

  void grow_table() {
    const std::size_t new_slots = (slot_mask_ + 1) * 2;
    table_.assign(new_slots, 0);
    slot_mask_ = new_slots - 1;
    for (std::size_t i = 0; i < recs_.size(); ++i) {
      std::size_t slot = hashes_[i] & slot_mask_;
      while (table_[slot] != 0) slot = (slot + 1) & slot_mask_;
      table_[slot] = static_cast<std::uint32_t>(i + 1);
    }
  }

  void push_bucket(std::size_t f, std::uint32_t idx) {
    if (f >= buckets_.size()) buckets_.resize(f + 1);
    buckets_[f].push_back(idx);
  }

  std::vector<std::vector<Gen>> trace_path(std::uint32_t idx) const {
    std::vector<std::vector<Gen>> path;
    for (std::uint32_t cur = idx; cur != UINT32_MAX; cur = parent_[cur]) {
      const Rec& rec = recs_[cur];
      path.emplace_back(yarena_.begin() + rec.y_off,
                        yarena_.begin() + rec.y_off + rec.y_len);
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  const DefiningGraph& g_;
  std::size_t stride_;
  int r_, cap_radius_;
  std::uint64_t cap_nodes_;
  bool trace_;

  std::vector<Gen> yarena_, warena_;
  std::vector<Rec> recs_;
  std::vector<std::uint64_t> hashes_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> table_;
  std::size_t slot_mask_ = 0;
  std::vector<std::vector<std::uint32_t>> buckets_;
  std::vector<Gen> seed_w_;
};

struct TranslatedQuery {
  std::vector<Gen> p, q;
  NormalForm x0;  // original center, for un-translating traced paths
};

TranslatedQuery translate_query(const DefiningGraph& g, const NormalForm& x0,
                                int r, const NormalForm& p, const NormalForm& q,
                                const SearchCaps& caps) {
  if (r < 0) throw invalid_query("radius must be >= 0");
  if (caps.cap_radius < r)
    throw invalid_query("cap_radius smaller than the forbidden radius");
  if (caps.cap_radius > kMaxEngineRadius)
    throw invalid_query("cap_radius exceeds engine limit of 250");
  if (caps.cap_nodes == 0) throw invalid_query("cap_nodes must be >= 1");
  const NormalForm xinv = inverse(x0);
  NormalForm pp = multiply(xinv, p);
  NormalForm qq = multiply(xinv, q);
  if (static_cast<int>(pp.length()) < r || static_cast<int>(qq.length()) < r)
    throw invalid_query("endpoint lies inside the open ball about the center");
  if (static_cast<int>(pp.length()) > caps.cap_radius ||
      static_cast<int>(qq.length()) > caps.cap_radius)
    throw invalid_query("endpoint lies outside the cap_radius region");
  return TranslatedQuery{pp.letters(), qq.letters(), x0};
}

SearchCaps normalize_caps(const SearchCaps& user, int r) {
  SearchCaps caps = user;
  if (caps.cap_radius == 0) caps.cap_radius = SearchCaps::defaults_for_radius(r).cap_radius;
  return caps;
}

AvoidantResult run_avoidant(const DefiningGraph& g, const NormalForm& x0, int r,
                            const NormalForm& p, const NormalForm& q,
                            const SearchCaps& user_caps,
                            std::vector<NormalForm>* path_out) {
  const SearchCaps caps = normalize_caps(user_caps, r);
  TranslatedQuery tq = translate_query(g, x0, r, p, q, caps);
  AvoidantResult res;
  res.caps_used = caps;
  if (tq.p == tq.q) {
    res.status = SearchStatus::Found;
    res.length = 0;
    res.nodes_explored = 0;
    if (path_out) *path_out = {p};
    return res;
  }
  AvoidantEngine engine(g, r, caps.cap_radius, caps.cap_nodes, path_out != nullptr);
  AvoidantEngine::Outcome out = engine.run(tq.p, {tq.q}, /*use_heuristic=*/true);
  res.nodes_explored = out.nodes;
  if (out.dist[0] >= 0) {
    res.status = SearchStatus::Found;
    res.length = out.dist[0];
    if (path_out) {
      path_out->clear();
      for (const auto& word : out.path)
        path_out->push_back(multiply(x0, reduce(g, word)));
    }
  } else if (out.budget_hit || out.truncated) {
    res.status = SearchStatus::NotFoundWithinBudget;
  } else {
    // The whole complement component of p fits strictly inside the cap:
    // unreachability holds in the full complex, not just the capped region.
    res.status = SearchStatus::Infinite;
  }
  return res;
}

}  // namespace

AvoidantResult avoidant_path(const DefiningGraph& g, const NormalForm& x0, int r,
                             const NormalForm& p, const NormalForm& q,
                             const SearchCaps& caps) {
  return run_avoidant(g, x0, r, p, q, caps, nullptr);
}

AvoidantResult avoidant_path_traced(const DefiningGraph& g, const NormalForm& x0,
                                    int r, const NormalForm& p, const NormalForm& q,
                                    const SearchCaps& caps,
                                    std::vector<NormalForm>& path_out) {
  return run_avoidant(g, x0, r, p, q, caps, &path_out);
}

namespace {

SearchCaps caps_for(const SearchCaps& user, int r) {
  SearchCaps caps = user;
  if (caps.cap_radius == 0) caps.cap_radius = SearchCaps::defaults_for_radius(r).cap_radius;
  if (caps.cap_radius < 2 * r)
    throw invalid_query("cap_radius must be at least 2r");
  return caps;
}

DivergenceSample package(const GeodesicSpec& spec, int r, const AvoidantResult& base,
                         const AvoidantResult& stab) {
  DivergenceSample s;
  s.r = r;
  s.status = base.status;
  s.value = base.length;
  s.caps = base.caps_used;
  s.nodes_explored = base.nodes_explored;
  s.stabilized = base.status == stab.status &&
                 (base.status != SearchStatus::Found || base.length == stab.length);
  s.geodesic_label = spec.label();
  s.m = spec.family_m();
  s.t = spec.exponent();
  return s;
}

void certify_radius(const NormalForm& x0, const NormalForm& v, int r, const char* which) {
  if (static_cast<int>(distance(x0, v)) != r)
    throw invalid_parameter(std::string("spec violates unit speed: ") + which +
                            " is not at distance r from the basepoint");
}

}  // namespace

DivergenceSample div_pair(const GeodesicSpec& alpha, const GeodesicSpec& beta,
                          int r, const SearchCaps& user_caps) {
  if (r < 0) throw invalid_query("radius must be >= 0");
  const DefiningGraph& g = alpha.graph();
  const NormalForm x0 = alpha.basepoint();
  if (!(x0 == beta.basepoint()))
    throw invalid_query("rays do not share a basepoint");
  const SearchCaps caps = caps_for(user_caps, r);
  const NormalForm p = alpha.vertex(r), q = beta.vertex(r);
  certify_radius(x0, p, r, "alpha(r)");
  certify_radius(x0, q, r, "beta(r)");
  AvoidantResult base = avoidant_path(g, x0, r, p, q, caps);
  SearchCaps wider = caps;
  wider.cap_radius += caps.stabilization_delta;
  AvoidantResult stab = avoidant_path(g, x0, r, p, q, wider);
  DivergenceSample s = package(alpha, r, base, stab);
  s.geodesic_label = "pair(" + alpha.label() + ";" + beta.label() + ")";
  return s;
}

DivergenceSample div_geodesic(const GeodesicSpec& gamma, int r,
                              const SearchCaps& user_caps) {
  if (r < 0) throw invalid_query("radius must be >= 0");
  if (gamma.is_ray())
    throw invalid_query("div_geodesic needs a bi-infinite path; use div_pair for rays");
  const DefiningGraph& g = gamma.graph();
  const SearchCaps caps = caps_for(user_caps, r);
  const NormalForm x0 = gamma.vertex(0);
  const NormalForm p = gamma.vertex(-r), q = gamma.vertex(r);
  certify_radius(x0, p, r, "gamma(-r)");
  certify_radius(x0, q, r, "gamma(r)");
  if (static_cast<int>(distance(p, q)) != 2 * r)
    throw invalid_parameter("spec violates unit speed: gamma[-r,r] is not geodesic");
  AvoidantResult base = avoidant_path(g, x0, r, p, q, caps);
  SearchCaps wider = caps;
  wider.cap_radius += caps.stabilization_delta;
  AvoidantResult stab = avoidant_path(g, x0, r, p, q, wider);
  return package(gamma, r, base, stab);
}

AvoidantResult rho(const GeodesicSpec& gamma, int r, std::int64_t t_center,
                   const SearchCaps& user_caps) {
  if (r < 0) throw invalid_query("radius must be >= 0");
  if (gamma.is_ray())
    throw invalid_query("rho needs a bi-infinite path");
  const DefiningGraph& g = gamma.graph();
  const SearchCaps caps = caps_for(user_caps, r);
  const NormalForm x0 = gamma.vertex(t_center);
  const NormalForm p = gamma.vertex(t_center - r), q = gamma.vertex(t_center + r);
  certify_radius(x0, p, r, "gamma(t-r)");
  certify_radius(x0, q, r, "gamma(t+r)");
  if (static_cast<int>(distance(p, q)) != 2 * r)
    throw invalid_parameter("spec violates unit speed: gamma[t-r,t+r] is not geodesic");
  return avoidant_path(g, x0, r, p, q, caps);
}

DivergenceSample lower_divergence(const GeodesicSpec& gamma, int r,
                                  std::int64_t window_lo, std::int64_t window_hi,
                                  const SearchCaps& user_caps) {
  if (window_lo > window_hi) throw invalid_query("empty lower-divergence window");
  const SearchCaps caps = caps_for(user_caps, r);
  SearchCaps wider = caps;
  wider.cap_radius += caps.stabilization_delta;

  auto sweep = [&](const SearchCaps& c, std::optional<int>& min_t,
                   std::uint64_t& nodes, bool& any_budget) -> std::optional<std::int64_t> {
    std::optional<std::int64_t> best;
    for (std::int64_t t = window_lo; t <= window_hi; ++t) {
      AvoidantResult res = rho(gamma, r, t, c);
      nodes += res.nodes_explored;
      if (res.status == SearchStatus::Found) {
        if (!best || res.length < *best) {
          best = res.length;
          min_t = static_cast<int>(t);
        }
      } else if (res.status == SearchStatus::NotFoundWithinBudget) {
        any_budget = true;
      }
    }
    return best;
  };

  std::optional<int> min_t_base, min_t_stab;
  std::uint64_t nodes_base = 0, nodes_stab = 0;
  bool budget_base = false, budget_stab = false;
  std::optional<std::int64_t> base = sweep(caps, min_t_base, nodes_base, budget_base);
  std::optional<std::int64_t> stab = sweep(wider, min_t_stab, nodes_stab, budget_stab);

  DivergenceSample s;
  s.r = r;
  s.caps = caps;
  s.nodes_explored = nodes_base;
  s.geodesic_label = "ldiv(" + gamma.label() + ")";
  s.m = gamma.family_m();
  s.t = gamma.exponent();
  if (base) {
    s.status = SearchStatus::Found;
    s.value = *base;
    s.min_t = min_t_base;
    s.stabilized = stab && *stab == *base;
  } else {
    s.status = budget_base ? SearchStatus::NotFoundWithinBudget : SearchStatus::Infinite;
    s.stabilized = !stab && (budget_base == budget_stab);
  }
  return s;
}

GerstenReport gersten_divergence(const DefiningGraph& g, int r,
                                 const SearchCaps& user_caps) {
  if (r < 0) throw invalid_query("radius must be >= 0");
  const SearchCaps caps = caps_for(user_caps, r);
  if (caps.cap_radius > kMaxEngineRadius)
    throw invalid_query("cap_radius exceeds engine limit of 250");

  GerstenReport report;
  const NormalForm e = identity(g);
  BallMap b = ball(g, e, r, caps.cap_nodes);  // throws capacity_error if too big

  std::vector<std::vector<Gen>> sphere;
  for (const auto& [nf, d] : b.items)
    if (d == r) sphere.push_back(nf.letters());
  report.sphere_size = sphere.size();

  DivergenceSample& s = report.sample;
  s.r = r;
  s.caps = caps;
  s.graph_label = "";
  s.geodesic_label = "gersten";

  auto run_all = [&](int cap_radius, std::size_t& found, std::size_t& infinite,
                     std::size_t& censored, std::uint64_t& nodes)
      -> std::optional<std::int64_t> {
    std::optional<std::int64_t> best;
    if (!sphere.empty()) best = 0;  // self-pairs contribute 0 to the supremum
    for (std::size_t i = 0; i < sphere.size(); ++i) {
      std::vector<std::vector<Gen>> targets(sphere.begin() + i + 1, sphere.end());
      if (targets.empty()) continue;
      AvoidantEngine engine(g, r, cap_radius, caps.cap_nodes, false);
      AvoidantEngine::Outcome out = engine.run(sphere[i], targets, false);
      nodes += out.nodes;
      for (std::int64_t d : out.dist) {
        if (d >= 0) {
          ++found;
          if (!best || d > *best) best = d;
        } else if (out.budget_hit || out.truncated) {
          ++censored;
        } else {
          ++infinite;
        }
      }
    }
    return best;
  };

  std::uint64_t nodes = 0;
  std::optional<std::int64_t> base =
      run_all(caps.cap_radius, report.pairs_found, report.pairs_infinite,
              report.pairs_censored, nodes);
  s.nodes_explored = nodes;

  std::size_t f2 = 0, i2 = 0, c2 = 0;
  std::uint64_t n2 = 0;
  std::optional<std::int64_t> stab =
      run_all(caps.cap_radius + caps.stabilization_delta, f2, i2, c2, n2);

  if (base) {
    s.status = SearchStatus::Found;
    s.value = *base;
    s.stabilized = stab && *stab == *base && f2 == report.pairs_found;
  } else {
    // empty sphere: only possible in a finite group once r exceeds the diameter
    s.status = SearchStatus::Infinite;
    s.stabilized = true;
  }
  return report;
}

std::string ball_to_dot(const DefiningGraph& g, const BallMap& b,
                        const std::vector<NormalForm>* highlight_path) {
  std::unordered_map<NormalForm, std::size_t, NormalFormHash> index;
  for (std::size_t i = 0; i < b.items.size(); ++i) index.emplace(b.items[i].first, i);

  auto node_name = [&](const NormalForm& nf) {
    return nf.is_identity() ? std::string("e") : nf.str();
  };
  std::unordered_map<std::string, bool> on_path_edge;
  std::unordered_map<std::string, bool> on_path_node;
  if (highlight_path) {
    for (std::size_t i = 0; i < highlight_path->size(); ++i) {
      on_path_node[node_name((*highlight_path)[i])] = true;
      if (i + 1 < highlight_path->size()) {
        std::string a = node_name((*highlight_path)[i]);
        std::string bn = node_name((*highlight_path)[i + 1]);
        if (bn < a) std::swap(a, bn);
        on_path_edge[a + "|" + bn] = true;
      }
    }
  }

  std::ostringstream out;
  out << "graph ball {\n  node [shape=box,fontsize=9];\n";
  for (const auto& [nf, d] : b.items) {
    out << "  \"" << node_name(nf) << "\" [label=\"" << node_name(nf) << "\\nd=" << d
        << "\"";
    if (on_path_node.count(node_name(nf))) out << ",color=red,penwidth=2";
    out << "];\n";
  }
  if (highlight_path) {
    for (const auto& nf : *highlight_path) {
      if (index.count(nf)) continue;
      out << "  \"" << node_name(nf) << "\" [color=red,penwidth=2];\n";
    }
  }
  for (const auto& [nf, d] : b.items) {
    for (std::size_t s = 0; s < g.size(); ++s) {
      NormalForm next = multiply(nf, static_cast<Gen>(s));
      auto it = index.find(next);
      if (it == index.end()) continue;
      if (!(nf < next)) continue;  // one line per undirected edge
      std::string a = node_name(nf), bn = node_name(next);
      std::string key = a < bn ? a + "|" + bn : bn + "|" + a;
      out << "  \"" << a << "\" -- \"" << bn << "\" [label=\"" << g.name(static_cast<Gen>(s))
          << "\"";
      if (on_path_edge.count(key)) out << ",color=red,penwidth=2";
      out << "];\n";
    }
  }
  if (highlight_path && highlight_path->size() > 1) {
    for (std::size_t i = 0; i + 1 < highlight_path->size(); ++i) {
      const NormalForm& a = (*highlight_path)[i];
      const NormalForm& bn = (*highlight_path)[i + 1];
      if (index.count(a) && index.count(bn)) continue;  // drawn above
      out << "  \"" << node_name(a) << "\" -- \"" << node_name(bn)
          << "\" [color=red,penwidth=2];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace racg
