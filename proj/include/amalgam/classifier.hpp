#pragma once

// Exact decision procedures for the sharp embeddings between Wiener amalgam
// spaces W^s_{p,q} and Besov, local Hardy and Lebesgue spaces.
//
// Exponents are carried as reciprocals u = 1/p so that p = inf is the value
// u = 0 and every threshold comparison is exact. No floating point is used in
// this module.

#include "amalgam/rational.hpp"

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace amalgam {

/// Raised when a decision procedure is asked about exponents outside the
/// range the decision covers (e.g. h_p with p = inf).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Lebesgue-type exponent p in (0, inf], stored as u = 1/p.
class ReciprocalExponent {
 public:
  ReciprocalExponent() = default;

  static ReciprocalExponent from_p(const Rational& p);
  static ReciprocalExponent from_reciprocal(const Rational& u);
  static ReciprocalExponent infinity() { return ReciprocalExponent(Rational(0)); }
  /// Accepts "inf"/"infinity" or an exact rational p such as "4" or "1/2".
  static ReciprocalExponent parse(std::string_view text);

  const Rational& reciprocal() const { return u_; }
  bool is_infinite() const { return u_ == 0; }
  /// Throws std::logic_error when p = inf.
  Rational p() const;

  double reciprocal_value() const { return to_double(u_); }
  /// +inf for p = inf.
  double p_value() const;

  /// "inf" or the rational p.
  std::string to_string() const;

  friend bool operator==(const ReciprocalExponent&, const ReciprocalExponent&) = default;
  friend std::strong_ordering operator<=>(const ReciprocalExponent& a,
                                          const ReciprocalExponent& b) {
    if (a.u_ < b.u_) return std::strong_ordering::less;
    if (b.u_ < a.u_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  explicit ReciprocalExponent(Rational u) : u_(u) {}
  Rational u_{0};
};

using SmoothnessIndex = Rational;

enum class SpaceFamily {
  WienerAmalgam,
  Modulation,
  Besov,
  TriebelLizorkin,
  LocalHardy,
  Lebesgue,
  SeqUniform,
  SeqDyadic,
};

std::string_view to_string(SpaceFamily family);
SpaceFamily parse_space_family(std::string_view text);

/// Tagged descriptor of a function or sequence space.
struct SpaceSpec {
  SpaceFamily family = SpaceFamily::Lebesgue;
  ReciprocalExponent p;
  ReciprocalExponent q;
  SmoothnessIndex s{0};
  int n = 1;

  /// Validates the family-specific restrictions (TriebelLizorkin and
  /// LocalHardy need p < inf; n >= 1).
  static SpaceSpec make(SpaceFamily family, ReciprocalExponent p, ReciprocalExponent q,
                        SmoothnessIndex s, int n = 1);
};

enum class RegionLabel { A1, A2, A3, B1, B2, B3, BoundaryOfSeveral };

std::string_view to_string(RegionLabel label);

struct EmbeddingVerdict {
  bool holds = false;
  SmoothnessIndex critical_s{0};
  bool strict_required = false;

  friend bool operator==(const EmbeddingVerdict&, const EmbeddingVerdict&) = default;
};

/// alpha(p,q) = 0 v n(1-1/p-1/q) v n(1/2-1/q).
SmoothnessIndex alpha(const ReciprocalExponent& p, const ReciprocalExponent& q, int n);
/// beta(p,q) = 0 ^ n(1-1/p-1/q) ^ n(1/2-1/q).
SmoothnessIndex beta(const ReciprocalExponent& p, const ReciprocalExponent& q, int n);

/// Region of the (1/p,1/q) plane whose branch realizes alpha.
///
/// The closed regions A1, A2, A3 overlap on their common boundary lines. A
/// point on a line shared by two regions is labelled by the first region in
/// the order A1, A2, A3 (the order of the piecewise definition); the single
/// point (1/2, 1/2) where all three meet is BoundaryOfSeveral.
RegionLabel alpha_region(const ReciprocalExponent& p, const ReciprocalExponent& q);
/// Same convention for the beta regions B1, B2, B3.
RegionLabel beta_region(const ReciprocalExponent& p, const ReciprocalExponent& q);

/// Membership of (1/p,1/q) in one closed region (A1..B3). Returns false for
/// BoundaryOfSeveral.
bool in_closed_region(RegionLabel region, const ReciprocalExponent& p,
                      const ReciprocalExponent& q);

/// The affine branch attached to a region label: 0, n(1-1/p-1/q) or
/// n(1/2-1/q). BoundaryOfSeveral evaluates to 0 (all branches agree there).
SmoothnessIndex region_branch(RegionLabel region, const ReciprocalExponent& p,
                              const ReciprocalExponent& q, int n);

/// W^s_{p,q} in B_{p,q}.
EmbeddingVerdict decide_W_subset_B(const ReciprocalExponent& p, const ReciprocalExponent& q,
                                   const SmoothnessIndex& s, int n);
/// B_{p,q} in W^s_{p,q}.
EmbeddingVerdict decide_B_subset_W(const ReciprocalExponent& p, const ReciprocalExponent& q,
                                   const SmoothnessIndex& s, int n);
/// W^s_{p,q} in h_p, 0 < p < inf. Throws DomainError for p = inf.
EmbeddingVerdict decide_W_subset_hp(const ReciprocalExponent& p, const ReciprocalExponent& q,
                                    const SmoothnessIndex& s, int n);
/// h_p in W^s_{p,q}, 0 < p < inf. Throws DomainError for p = inf.
EmbeddingVerdict decide_hp_subset_W(const ReciprocalExponent& p, const ReciprocalExponent& q,
                                    const SmoothnessIndex& s, int n);
/// W^s_{p,q} in L_p for p in {1, inf}. Throws DomainError otherwise.
EmbeddingVerdict decide_W_subset_Lebesgue_endpoint(const ReciprocalExponent& p,
                                                   const ReciprocalExponent& q,
                                                   const SmoothnessIndex& s, int n);
/// L_p in W^s_{p,q} for p in {1, inf}. Throws DomainError otherwise.
EmbeddingVerdict decide_Lebesgue_subset_W_endpoint(const ReciprocalExponent& p,
                                                   const ReciprocalExponent& q,
                                                   const SmoothnessIndex& s, int n);

/// W^s_{p,q} in L_p for any 1 <= p <= inf: the endpoints use the L_1/L_inf
/// statements, the interior goes through h_p ~ L_p.
EmbeddingVerdict decide_W_subset_Lebesgue(const ReciprocalExponent& p, const ReciprocalExponent& q,
                                          const SmoothnessIndex& s, int n);
EmbeddingVerdict decide_Lebesgue_subset_W(const ReciprocalExponent& p, const ReciprocalExponent& q,
                                          const SmoothnessIndex& s, int n);

/// Direction of a two-sided inequality between a function and its
/// coefficient / Fourier data.
enum class InequalityDirection {
  FunctionBelowCoefficients,  ///< ||sum a_k e_k||_{L_p} <~ ||a||_{l_q^s}
  CoefficientsBelowFunction,  ///< ||a||_{l_q^s} <~ ||sum a_k e_k||_{L_p}
};

/// Fourier-series inequality on the torus (and, with identical thresholds,
/// the weighted Hausdorff-Young inequality for compactly supported f),
/// 1 <= p, q <= inf. Throws DomainError outside that range.
EmbeddingVerdict decide_fourier_series(const ReciprocalExponent& p, const ReciprocalExponent& q,
                                       const SmoothnessIndex& s, int n,
                                       InequalityDirection direction);

/// W^{s1}_{p1,q1} in W^{s2}_{p2,q2}.
bool decide_W_subset_W(const ReciprocalExponent& p1, const ReciprocalExponent& q1,
                       const SmoothnessIndex& s1, const ReciprocalExponent& p2,
                       const ReciprocalExponent& q2, const SmoothnessIndex& s2, int n);

/// l^{s1,0}_{q1}(Z^n) in l^{s2,0}_{q2}(Z^n), weights <k>^s.
bool decide_seq_uniform(const ReciprocalExponent& q1, const SmoothnessIndex& s1,
                        const ReciprocalExponent& q2, const SmoothnessIndex& s2, int n);

/// l^{s1,1}_{q1}(N) in l^{s2,1}_{q2}(N), weights 2^{js}.
bool decide_seq_dyadic(const ReciprocalExponent& q1, const SmoothnessIndex& s1,
                       const ReciprocalExponent& q2, const SmoothnessIndex& s2);

/// Routes a (source, target) pair to the matching decision procedure.
/// Supported pairs: W->B, B->W, W->h, h->W, W->L, L->W (target/source B has
/// s = 0 and the same p, q as W), W->W, SeqUniform->SeqUniform,
/// SeqDyadic->SeqDyadic. Throws DomainError for anything else.
EmbeddingVerdict decide(const SpaceSpec& source, const SpaceSpec& target);

}  // namespace amalgam
