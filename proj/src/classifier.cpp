#include "amalgam/classifier.hpp"

#include <array>
#include <cctype>
#include <limits>
#include <string>

namespace amalgam {

namespace {

const Rational kHalf(1, 2);

Rational branch_linear(const Rational& up, const Rational& uq, int n) {
  return Rational(n) * (Rational(1) - up - uq);
}

Rational branch_half(const Rational& uq, int n) { return Rational(n) * (kHalf - uq); }

void check_dimension(int n) {
  if (n < 1) throw DomainError("dimension n must be a positive integer");
}

void require_finite_p(const ReciprocalExponent& p, const char* what) {
  if (p.is_infinite()) {
    throw DomainError(std::string(what) + " is only defined for 0 < p < inf");
  }
}

void require_endpoint(const ReciprocalExponent& p) {
  if (!(p.is_infinite() || p.reciprocal() == 1)) {
    throw DomainError("endpoint statement needs p = 1 or p = inf; use the h_p procedure for 1 < p < inf");
  }
}

// Forward direction: holds iff s >= critical (s > critical when strict).
EmbeddingVerdict forward(const Rational& critical, bool strict, const Rational& s) {
  EmbeddingVerdict v;
  v.critical_s = critical;
  v.strict_required = strict;
  v.holds = strict ? (s > critical) : (s >= critical);
  return v;
}

// Reverse direction: holds iff s <= critical (s < critical when strict).
EmbeddingVerdict reverse(const Rational& critical, bool strict, const Rational& s) {
  EmbeddingVerdict v;
  v.critical_s = critical;
  v.strict_required = strict;
  v.holds = strict ? (s < critical) : (s <= critical);
  return v;
}

std::string lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

ReciprocalExponent ReciprocalExponent::from_p(const Rational& p) {
  if (p <= 0) throw std::invalid_argument("exponent p must be positive, got " + amalgam::to_string(p));
  return ReciprocalExponent(Rational(1) / p);
}

ReciprocalExponent ReciprocalExponent::from_reciprocal(const Rational& u) {
  if (u < 0) throw std::invalid_argument("reciprocal exponent must be >= 0, got " + amalgam::to_string(u));
  return ReciprocalExponent(u);
}

ReciprocalExponent ReciprocalExponent::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  const auto l = lower(text);
  if (l == "inf" || l == "infinity" || l == "+inf") return infinity();
  return from_p(parse_rational(text));
}

Rational ReciprocalExponent::p() const {
  if (is_infinite()) throw std::logic_error("p = inf has no finite rational value");
  return Rational(1) / u_;
}

double ReciprocalExponent::p_value() const {
  if (is_infinite()) return std::numeric_limits<double>::infinity();
  return to_double(Rational(1) / u_);
}

std::string ReciprocalExponent::to_string() const {
  if (is_infinite()) return "inf";
  return amalgam::to_string(p());
}

std::string_view to_string(SpaceFamily family) {
  switch (family) {
    case SpaceFamily::WienerAmalgam: return "W";
    case SpaceFamily::Modulation: return "M";
    case SpaceFamily::Besov: return "B";
    case SpaceFamily::TriebelLizorkin: return "F";
    case SpaceFamily::LocalHardy: return "hp";
    case SpaceFamily::Lebesgue: return "L";
    case SpaceFamily::SeqUniform: return "seq0";
    case SpaceFamily::SeqDyadic: return "seq1";
  }
  return "?";
}

SpaceFamily parse_space_family(std::string_view text) {
  const auto t = lower(text);
  if (t == "w" || t == "wiener") return SpaceFamily::WienerAmalgam;
  if (t == "m" || t == "modulation") return SpaceFamily::Modulation;
  if (t == "b" || t == "besov") return SpaceFamily::Besov;
  if (t == "f" || t == "triebel") return SpaceFamily::TriebelLizorkin;
  if (t == "hp" || t == "h") return SpaceFamily::LocalHardy;
  if (t == "l" || t == "lebesgue") return SpaceFamily::Lebesgue;
  if (t == "seq0" || t == "uniform") return SpaceFamily::SeqUniform;
  if (t == "seq1" || t == "dyadic") return SpaceFamily::SeqDyadic;
  throw std::invalid_argument("unknown space family '" + std::string(text) + "'");
}

SpaceSpec SpaceSpec::make(SpaceFamily family, ReciprocalExponent p, ReciprocalExponent q,
                          SmoothnessIndex s, int n) {
  check_dimension(n);
  if ((family == SpaceFamily::TriebelLizorkin || family == SpaceFamily::LocalHardy) &&
      p.is_infinite()) {
    throw DomainError(std::string(to_string(family)) + " requires p < inf");
  }
  SpaceSpec spec;
  spec.family = family;
  spec.p = p;
  spec.q = q;
  spec.s = s;
  spec.n = n;
  return spec;
}

std::string_view to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::A1: return "A1";
    case RegionLabel::A2: return "A2";
    case RegionLabel::A3: return "A3";
    case RegionLabel::B1: return "B1";
    case RegionLabel::B2: return "B2";
    case RegionLabel::B3: return "B3";
    case RegionLabel::BoundaryOfSeveral: return "BoundaryOfSeveral";
  }
  return "?";
}

SmoothnessIndex alpha(const ReciprocalExponent& p, const ReciprocalExponent& q, int n) {
  check_dimension(n);
  const auto& up = p.reciprocal();
  const auto& uq = q.reciprocal();
  return max(Rational(0), max(branch_linear(up, uq, n), branch_half(uq, n)));
}

SmoothnessIndex beta(const ReciprocalExponent& p, const ReciprocalExponent& q, int n) {
  check_dimension(n);
  const auto& up = p.reciprocal();
  const auto& uq = q.reciprocal();
  return min(Rational(0), min(branch_linear(up, uq, n), branch_half(uq, n)));
}

bool in_closed_region(RegionLabel region, const ReciprocalExponent& p,
                      const ReciprocalExponent& q) {
  const auto& up = p.reciprocal();
  const auto& uq = q.reciprocal();
  const Rational one(1);
  switch (region) {
    case RegionLabel::A1: return uq >= max(one - up, kHalf);
    case RegionLabel::A2: return up <= min(one - uq, kHalf);
    case RegionLabel::A3: return uq <= kHalf && kHalf <= up;
    case RegionLabel::B1: return uq <= min(one - up, kHalf);
    case RegionLabel::B2: return up >= max(one - uq, kHalf);
    case RegionLabel::B3: return up <= kHalf && kHalf <= uq;
    case RegionLabel::BoundaryOfSeveral: return false;
  }
  return false;
}

namespace {

RegionLabel cascade(const std::array<RegionLabel, 3>& order, const ReciprocalExponent& p,
                    const ReciprocalExponent& q) {
  int hits = 0;
  RegionLabel first = RegionLabel::BoundaryOfSeveral;
  for (auto r : order) {
    if (in_closed_region(r, p, q)) {
      if (hits == 0) first = r;
      ++hits;
    }
  }
  // The three closed regions cover the quadrant, so hits >= 1 always.
  if (hits == 3) return RegionLabel::BoundaryOfSeveral;
  return first;
}

}  // namespace

RegionLabel alpha_region(const ReciprocalExponent& p, const ReciprocalExponent& q) {
  return cascade({RegionLabel::A1, RegionLabel::A2, RegionLabel::A3}, p, q);
}

RegionLabel beta_region(const ReciprocalExponent& p, const ReciprocalExponent& q) {
  return cascade({RegionLabel::B1, RegionLabel::B2, RegionLabel::B3}, p, q);
}

SmoothnessIndex region_branch(RegionLabel region, const ReciprocalExponent& p,
                              const ReciprocalExponent& q, int n) {
  check_dimension(n);
  switch (region) {
    case RegionLabel::A1:
    case RegionLabel::B1:
    case RegionLabel::BoundaryOfSeveral:
      return Rational(0);
    case RegionLabel::A2:
    case RegionLabel::B2:
      return branch_linear(p.reciprocal(), q.reciprocal(), n);
    case RegionLabel::A3:
    case RegionLabel::B3:
      return branch_half(q.reciprocal(), n);
  }
  return Rational(0);
}

EmbeddingVerdict decide_W_subset_B(const ReciprocalExponent& p, const ReciprocalExponent& q,
                                   const SmoothnessIndex& s, int n) {
  return forward(alpha(p, q, n), p.reciprocal() < q.reciprocal(), s);
}

EmbeddingVerdict decide_B_subset_W(const ReciprocalExponent& p, const ReciprocalExponent& q,
                                   const SmoothnessIndex& s, int n) {
  return reverse(beta(p, q, n), p.reciprocal() > q.reciprocal(), s);
}

EmbeddingVerdict decide_W_subset_hp(const ReciprocalExponent& p, const ReciprocalExponent& q,
                                    const SmoothnessIndex& s, int n) {
  require_finite_p(p, "h_p");
  const bool strict = q.reciprocal() < min(p.reciprocal(), kHalf);
  return forward(alpha(p, q, n), strict, s);
}

EmbeddingVerdict decide_hp_subset_W(const ReciprocalExponent& p, const ReciprocalExponent& q,
                                    const SmoothnessIndex& s, int n) {
  require_finite_p(p, "h_p");
  const bool strict = q.reciprocal() > max(p.reciprocal(), kHalf);
  return reverse(beta(p, q, n), strict, s);
}

EmbeddingVerdict decide_W_subset_Lebesgue_endpoint(const ReciprocalExponent& p,
                                                   const ReciprocalExponent& q,
                                                   const SmoothnessIndex& s, int n) {
  require_endpoint(p);
  const bool strict = p.is_infinite() ? q.reciprocal() < 1 : q.reciprocal() < kHalf;
  return forward(alpha(p, q, n), strict, s);
}

EmbeddingVerdict decide_Lebesgue_subset_W_endpoint(const ReciprocalExponent& p,
                                                   const ReciprocalExponent& q,
                                                   const SmoothnessIndex& s, int n) {
  require_endpoint(p);
  const bool strict = p.is_infinite() ? q.reciprocal() > kHalf : !q.is_infinite();
  return reverse(beta(p, q, n), strict, s);
}

EmbeddingVerdict decide_W_subset_Lebesgue(const ReciprocalExponent& p, const ReciprocalExponent& q,
                                          const SmoothnessIndex& s, int n) {
  if (p.reciprocal() > 1) throw DomainError("Lebesgue target needs p >= 1");
  if (p.is_infinite() || p.reciprocal() == 1) {
    return decide_W_subset_Lebesgue_endpoint(p, q, s, n);
  }
  return decide_W_subset_hp(p, q, s, n);
}

EmbeddingVerdict decide_Lebesgue_subset_W(const ReciprocalExponent& p, const ReciprocalExponent& q,
                                          const SmoothnessIndex& s, int n) {
  if (p.reciprocal() > 1) throw DomainError("Lebesgue source needs p >= 1");
  if (p.is_infinite() || p.reciprocal() == 1) {
    return decide_Lebesgue_subset_W_endpoint(p, q, s, n);
  }
  return decide_hp_subset_W(p, q, s, n);
}

EmbeddingVerdict decide_fourier_series(const ReciprocalExponent& p, const ReciprocalExponent& q,
                                       const SmoothnessIndex& s, int n,
                                       InequalityDirection direction) {
  if (p.reciprocal() > 1 || q.reciprocal() > 1) {
    throw DomainError("Fourier-series inequality needs 1 <= p, q <= inf");
  }
  const auto& up = p.reciprocal();
  const auto& uq = q.reciprocal();
  if (direction == InequalityDirection::FunctionBelowCoefficients) {
    const bool strict = p.is_infinite() ? uq < 1 : uq < min(up, kHalf);
    return forward(alpha(p, q, n), strict, s);
  }
  const bool strict = up == 1 ? !q.is_infinite() : uq > max(up, kHalf);
  return reverse(beta(p, q, n), strict, s);
}

bool decide_W_subset_W(const ReciprocalExponent& p1, const ReciprocalExponent& q1,
                       const SmoothnessIndex& s1, const ReciprocalExponent& p2,
                       const ReciprocalExponent& q2, const SmoothnessIndex& s2, int n) {
  check_dimension(n);
  if (p2.reciprocal() > p1.reciprocal()) return false;
  return decide_seq_uniform(q1, s1, q2, s2, n);
}

bool decide_seq_uniform(const ReciprocalExponent& q1, const SmoothnessIndex& s1,
                        const ReciprocalExponent& q2, const SmoothnessIndex& s2, int n) {
  check_dimension(n);
  const Rational dn(n);
  const bool first = s2 <= s1 && q2.reciprocal() + s2 / dn < q1.reciprocal() + s1 / dn;
  const bool second = s2 == s1 && q2 == q1;
  return first || second;
}

bool decide_seq_dyadic(const ReciprocalExponent& q1, const SmoothnessIndex& s1,
                       const ReciprocalExponent& q2, const SmoothnessIndex& s2) {
  return s2 < s1 || (s2 == s1 && q2.reciprocal() <= q1.reciprocal());
}

namespace {

EmbeddingVerdict boolean_verdict(bool holds) {
  EmbeddingVerdict v;
  v.holds = holds;
  return v;
}

void require_same_pq(const SpaceSpec& a, const SpaceSpec& b) {
  if (!(a.p == b.p && a.q == b.q)) {
    throw DomainError("this pair requires matching p and q on both sides");
  }
}

void require_same_p(const SpaceSpec& a, const SpaceSpec& b) {
  if (!(a.p == b.p)) throw DomainError("this pair requires matching p on both sides");
}

void require_zero_s(const SpaceSpec& spec) {
  if (spec.s != 0) throw DomainError(std::string(to_string(spec.family)) + " side must have s = 0");
}

}  // namespace

EmbeddingVerdict decide(const SpaceSpec& source, const SpaceSpec& target) {
  using F = SpaceFamily;
  if (source.n != target.n) throw DomainError("dimension mismatch between source and target");
  const int n = source.n;
  const auto sf = source.family;
  const auto tf = target.family;
  if (sf == F::WienerAmalgam && tf == F::Besov) {
    require_same_pq(source, target);
    require_zero_s(target);
    return decide_W_subset_B(source.p, source.q, source.s, n);
  }
  if (sf == F::Besov && tf == F::WienerAmalgam) {
    require_same_pq(source, target);
    require_zero_s(source);
    return decide_B_subset_W(target.p, target.q, target.s, n);
  }
  if (sf == F::WienerAmalgam && tf == F::LocalHardy) {
    require_same_p(source, target);
    return decide_W_subset_hp(source.p, source.q, source.s, n);
  }
  if (sf == F::LocalHardy && tf == F::WienerAmalgam) {
    require_same_p(source, target);
    return decide_hp_subset_W(target.p, target.q, target.s, n);
  }
  if (sf == F::WienerAmalgam && tf == F::Lebesgue) {
    require_same_p(source, target);
    return decide_W_subset_Lebesgue(source.p, source.q, source.s, n);
  }
  if (sf == F::Lebesgue && tf == F::WienerAmalgam) {
    require_same_p(source, target);
    return decide_Lebesgue_subset_W(target.p, target.q, target.s, n);
  }
  if (sf == F::WienerAmalgam && tf == F::WienerAmalgam) {
    return boolean_verdict(
        decide_W_subset_W(source.p, source.q, source.s, target.p, target.q, target.s, n));
  }
  if (sf == F::SeqUniform && tf == F::SeqUniform) {
    return boolean_verdict(decide_seq_uniform(source.q, source.s, target.q, target.s, n));
  }
  if (sf == F::SeqDyadic && tf == F::SeqDyadic) {
    return boolean_verdict(decide_seq_dyadic(source.q, source.s, target.q, target.s));
  }
  throw DomainError("no decision procedure for " + std::string(to_string(sf)) + " -> " +
                    std::string(to_string(tf)));
}

}  // namespace amalgam
