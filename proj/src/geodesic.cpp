#include "racg/geodesic.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace racg {

RationalExponent parse_exponent(std::string_view text) {
  std::string s(text);
  std::uint64_t p = 0, q = 1;
  std::size_t slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      p = std::stoull(s);
    } else {
      p = std::stoull(s.substr(0, slash));
      q = std::stoull(s.substr(slash + 1));
    }
  } catch (const std::exception&) {
    throw invalid_parameter("cannot parse exponent '" + s + "' (want p/q)");
  }
  if (q == 0) throw invalid_parameter("exponent denominator is zero");
  const std::uint64_t d = std::gcd(p, q);
  p /= d;
  q /= d;
  if (p <= q) throw invalid_parameter("exponent t must be > 1");
  return RationalExponent{p, q};
}

std::uint64_t floor_power(std::uint64_t i, RationalExponent t) {
  if (i == 0) throw invalid_parameter("floor_power needs i >= 1");
  if (t.p <= t.q || t.q == 0) throw invalid_parameter("exponent t must be > 1");
  const unsigned long e = static_cast<unsigned long>(t.p - t.q);
  mpz_class base;
  mpz_import(base.get_mpz_t(), 1, 1, sizeof(i), 0, 0, &i);
  mpz_class powed;
  mpz_pow_ui(powed.get_mpz_t(), base.get_mpz_t(), e);
  mpz_class root;
  if (t.q == 1) {
    root = powed;
  } else {
    mpz_root(root.get_mpz_t(), powed.get_mpz_t(), static_cast<unsigned long>(t.q));
  }
  if (!root.fits_ulong_p())
    throw invalid_parameter("floor_power result exceeds 64 bits");
  return static_cast<std::uint64_t>(root.get_ui());
}

std::uint64_t floor_power_sum(std::uint64_t n, RationalExponent t) {
  if (n == 0) throw invalid_parameter("floor_power_sum needs n >= 1");
  std::uint64_t acc = 0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    const std::uint64_t term = floor_power(i, t);
    if (acc > UINT64_MAX - term) throw invalid_parameter("floor_power_sum overflow");
    acc += term;
  }
  return acc;
}

Word block_word(const DefiningGraph& g, int m, std::uint64_t i, RationalExponent t) {
  if (m < 3) throw invalid_parameter("block words need m >= 3 (b_2 and b_m distinct)");
  const Gen am = g.id("a_" + std::to_string(m));
  const Gen bm = g.id("b_" + std::to_string(m));
  const Gen b2 = g.id("b_2");
  const std::uint64_t reps = floor_power(i, t);
  Word w;
  w.reserve(2 * reps + 2);
  w.push_back(am);
  w.push_back(bm);
  for (std::uint64_t k = 0; k < reps; ++k) {
    w.push_back(am);
    w.push_back(b2);
  }
  return w;
}

GeodesicSpec GeodesicSpec::periodic(const DefiningGraph& g, Word u) {
  if (u.empty()) throw invalid_parameter("periodic geodesic needs a nonempty word");
  for (Gen x : u)
    if (x >= g.size()) throw lookup_error("letter id out of range");
  GeodesicSpec spec(g, GeodesicKind::Periodic);
  spec.period_ = std::move(u);
  // Early sanity: the segment from -2|u| to 2|u| (the period read four
  // times) must be geodesic; divergence queries re-certify the exact
  // segments they use.
  Word probe;
  for (int rep = 0; rep < 4; ++rep)
    probe.insert(probe.end(), spec.period_.begin(), spec.period_.end());
  if (!is_geodesic_word(g, probe))
    throw invalid_parameter("word does not define a periodic geodesic: " +
                            format_word(g, spec.period_));
  return spec;
}

GeodesicSpec GeodesicSpec::gamma(const DefiningGraph& g, int m, RationalExponent t) {
  if (m < 3) throw invalid_parameter("gamma geodesics need m >= 3");
  if (t.p <= t.q) throw invalid_parameter("exponent t must be > 1");
  GeodesicSpec spec(g, GeodesicKind::Gamma);
  spec.m_ = m;
  spec.t_ = t;
  spec.gen_am_ = g.id("a_" + std::to_string(m));
  spec.gen_bm_ = g.id("b_" + std::to_string(m));
  spec.gen_b2_ = g.id("b_2");
  return spec;
}

GeodesicSpec GeodesicSpec::support_ray(const DefiningGraph& g, Gen type, NormalForm base) {
  if (type >= g.size()) throw lookup_error("generator id out of range");
  const std::vector<Gen> lk = g.link(type);
  // Least non-commuting pair in the link; the alternating ray runs along
  // the support of the wall with this type.
  for (std::size_t a = 0; a < lk.size(); ++a)
    for (std::size_t b = a + 1; b < lk.size(); ++b) {
      if (g.commutes(lk[a], lk[b])) continue;
      GeodesicSpec spec(g, GeodesicKind::SupportRay);
      spec.ray_type_ = type;
      spec.ray_u_ = lk[a];
      spec.ray_v_ = lk[b];
      spec.base_ = std::move(base);
      return spec;
    }
  throw invalid_parameter("no non-commuting pair in link(" + g.name(type) +
                          "): support ray undefined");
}

GeodesicSpec GeodesicSpec::support_ray(const DefiningGraph& g, Gen type) {
  return support_ray(g, type, identity(g));
}

Word GeodesicSpec::letters_forward(std::size_t n) const {
  Word out;
  out.reserve(n);
  switch (kind_) {
    case GeodesicKind::Periodic:
      while (out.size() < n)
        out.push_back(period_[out.size() % period_.size()]);
      break;
    case GeodesicKind::Gamma:
      for (std::uint64_t i = 1; out.size() < n; ++i) {
        const std::uint64_t reps = floor_power(i, *t_);
        out.push_back(gen_am_);
        out.push_back(gen_bm_);
        for (std::uint64_t k = 0; k < reps && out.size() < n; ++k) {
          out.push_back(gen_am_);
          out.push_back(gen_b2_);
        }
      }
      break;
    case GeodesicKind::SupportRay:
      while (out.size() < n)
        out.push_back(out.size() % 2 == 0 ? ray_u_ : ray_v_);
      break;
  }
  out.resize(n);
  return out;
}

Word GeodesicSpec::letters_backward(std::size_t n) const {
  Word out;
  out.reserve(n);
  switch (kind_) {
    case GeodesicKind::Periodic:
      while (out.size() < n)
        out.push_back(period_[period_.size() - 1 - (out.size() % period_.size())]);
      break;
    case GeodesicKind::Gamma:
      while (out.size() < n)
        out.push_back(out.size() % 2 == 0 ? gen_b2_ : gen_am_);
      break;
    case GeodesicKind::SupportRay:
      throw invalid_query("support rays are one-sided: no negative parameters");
  }
  return out;
}

NormalForm GeodesicSpec::vertex(std::int64_t n) const {
  if (kind_ == GeodesicKind::SupportRay) {
    if (n < 0) throw invalid_query("support rays are one-sided: no negative parameters");
    Word w(base_.letters());
    const Word tail = letters_forward(static_cast<std::size_t>(n));
    w.insert(w.end(), tail.begin(), tail.end());
    return reduce(*graph_, w);
  }
  if (n >= 0) return reduce(*graph_, letters_forward(static_cast<std::size_t>(n)));
  return reduce(*graph_, letters_backward(static_cast<std::size_t>(-n)));
}

NormalForm GeodesicSpec::basepoint() const {
  if (kind_ == GeodesicKind::SupportRay) return base_;
  return identity(*graph_);
}

std::string GeodesicSpec::label() const {
  std::ostringstream out;
  switch (kind_) {
    case GeodesicKind::Periodic:
      out << "periodic(" << format_word(*graph_, period_) << ")";
      break;
    case GeodesicKind::Gamma:
      out << "gamma(m=" << *m_ << ";t=" << t_->str() << ")";
      break;
    case GeodesicKind::SupportRay:
      out << "support(" << graph_->name(ray_type_);
      if (!base_.is_identity()) out << ";base=" << base_.str();
      out << ")";
      break;
  }
  return out.str();
}

}  // namespace racg
