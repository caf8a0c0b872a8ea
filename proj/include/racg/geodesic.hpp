#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "racg/words.hpp"

namespace racg {

// Exponent t = p/q > 1 in lowest terms. Kept rational so that floor powers
// are computed exactly in integers; floating point misrounds near exact
// powers and would make runs irreproducible.
struct RationalExponent {
  std::uint64_t p = 2;
  std::uint64_t q = 1;

  double value() const { return double(p) / double(q); }
  std::string str() const { return std::to_string(p) + "/" + std::to_string(q); }

  bool operator==(const RationalExponent& o) const { return p == o.p && q == o.q; }
};

// Parses "p/q" or a bare integer "p". Requires p > q >= 1 after reduction.
RationalExponent parse_exponent(std::string_view text);

// floor(i^(t-1)) = floor((i^(p-q))^(1/q)), exactly.
std::uint64_t floor_power(std::uint64_t i, RationalExponent t);

// f_t(n) = sum_{i=1..n} floor(i^(t-1)).
std::uint64_t floor_power_sum(std::uint64_t n, RationalExponent t);

// The i-th block word (a_m b_m)(a_m b_2)^floor(i^(t-1)) over gamma:m.
// Requires m >= 3 so that b_2 and b_m are distinct generators.
Word block_word(const DefiningGraph& g, int m, std::uint64_t i, RationalExponent t);

enum class GeodesicKind { Periodic, Gamma, SupportRay };

// A parametrized path with vertex(0) at its basepoint and unit-speed
// integer parameters. Periodic and Gamma kinds are bi-infinite; support
// rays are one-sided (n >= 0).
class GeodesicSpec {
 public:
  // Bi-infinite periodic path: positive side cycles `u`, negative side
  // cycles the reversed word.
  static GeodesicSpec periodic(const DefiningGraph& g, Word u);

  // The bi-infinite path through the identity whose positive side reads the
  // block words w_1 w_2 w_3 ... and whose negative side alternates b_2, a_m.
  static GeodesicSpec gamma(const DefiningGraph& g, int m, RationalExponent t);

  // Ray from `base` alternating the two least non-commuting generators in
  // link(type); such a ray runs along the support of the wall of that type.
  static GeodesicSpec support_ray(const DefiningGraph& g, Gen type, NormalForm base);
  static GeodesicSpec support_ray(const DefiningGraph& g, Gen type);

  GeodesicKind kind() const { return kind_; }
  const DefiningGraph& graph() const { return *graph_; }
  bool is_ray() const { return kind_ == GeodesicKind::SupportRay; }

  // Group element at parameter n. Rays reject n < 0.
  NormalForm vertex(std::int64_t n) const;

  // Letter sequence from parameter 0 towards positive (or negative) n.
  Word letters_forward(std::size_t n) const;
  Word letters_backward(std::size_t n) const;  // labels of the negative side

  NormalForm basepoint() const;

  std::string label() const;  // stable human-readable id used in CSV rows
  std::optional<int> family_m() const { return m_; }
  std::optional<RationalExponent> exponent() const { return t_; }

 private:
  GeodesicSpec(const DefiningGraph& g, GeodesicKind k) : graph_(&g), kind_(k) {}

  const DefiningGraph* graph_;
  GeodesicKind kind_;
  Word period_;                  // Periodic
  std::optional<int> m_;         // Gamma
  std::optional<RationalExponent> t_;
  Gen gen_am_ = 0, gen_bm_ = 0, gen_b2_ = 0;  // Gamma
  Gen ray_u_ = 0, ray_v_ = 0;    // SupportRay alternation
  Gen ray_type_ = 0;
  NormalForm base_;              // SupportRay basepoint
};

}  // namespace racg
