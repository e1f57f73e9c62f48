#pragma once

// Quadrature evaluators for the (quasi-)norms: weighted Lebesgue, Wiener
// amalgam and modulation mixed norms of the STFT, Besov, Triebel-Lizorkin,
// local Hardy, periodic L_p of trigonometric polynomials, weighted sequence
// norms, and the localized Wiener / Triebel-Lizorkin norms.
//
// Exponents p = inf become maxima over samples. Exponents below 1 use the
// same formulas.

#include "amalgam/classifier.hpp"
#include "amalgam/grid.hpp"

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace amalgam {

/// (c * sum m_i^p)^{1/p}, or max m_i for p = inf. m_i >= 0.
double lp_sum(std::span<const double> magnitudes, const ReciprocalExponent& p, double cell = 1.0);

/// <x> = (1 + |x|^2)^{1/2}.
double japanese_bracket(const std::array<double, 2>& x, int n);

enum class MixedOrder {
  FreqInnerTimeOuter,  ///< Wiener amalgam
  TimeInnerFreqOuter,  ///< modulation
};

struct MixedNormSpec {
  ReciprocalExponent inner_exponent;
  ReciprocalExponent outer_exponent;
  double weight_s = 0.0;
  MixedOrder order = MixedOrder::FreqInnerTimeOuter;
  /// The frequency weight is <frequency_scale * (xi + frequency_offset)>^s.
  /// Defaults give <xi>^s; the dilation and modulation identities used by
  /// the witness evaluators change them.
  double frequency_scale = 1.0;
  std::array<double, 2> frequency_offset{0.0, 0.0};

  /// W^s_{p,q}: L_q^s in frequency, then L_p in time.
  static MixedNormSpec wiener(const ReciprocalExponent& p, const ReciprocalExponent& q, double s);
  /// M^s_{p,q}: L_p in time, then L_q^s in frequency.
  static MixedNormSpec modulation(const ReciprocalExponent& p, const ReciprocalExponent& q, double s);
};

/// Reduces the inner axis then the outer one with Riemann cells a^n, b^n.
/// Rows are reduced in fixed blocks and combined pairwise, so the value does
/// not depend on the number of threads.
double mixed_norm(const TfMatrix& V, const MixedNormSpec& spec);

/// STFT settings for wiener_norm / modulation_norm.
struct StftOptions {
  Window window{};
  /// Samples between window centers; 0 picks a power of two close to
  /// window.width / 8.
  int time_step = 0;
  bool periodic = true;

  TfLattice lattice_for(const GridSpec& spec) const;
};

TfMatrix default_stft(const GridFunction& f, const StftOptions& options = {});

double wiener_norm(const GridFunction& f, const ReciprocalExponent& p, const ReciprocalExponent& q,
                   double s, const StftOptions& options = {});
/// ||D_lambda f||_{W^s_{p,q}} for D_lambda f(x) = lambda^n f(lambda x), without
/// resolving D_lambda f: the identity V_phi(D_lambda f)(x, xi) =
/// V_{phi(./lambda)} f(lambda x, xi/lambda) gives
/// lambda^{n(1/q-1/p)} times the W norm of f with window phi(./lambda) and
/// weight <lambda eta>^s. f must be well inside its grid; rows use a
/// full-grid lattice with stride lambda * window.width / 8.
double wiener_norm_dilated(const GridFunction& f, double lambda, const ReciprocalExponent& p,
                           const ReciprocalExponent& q, double s, const Window& window);

double modulation_norm(const GridFunction& f, const ReciprocalExponent& p,
                       const ReciprocalExponent& q, double s, const StftOptions& options = {});

/// (sum |f(x)|^p <x>^{ps} dx^n)^{1/p}; for p = inf the maximum of |f(x)|<x>^s.
/// A frequency-domain f is treated as a function of xi with cell dxi^n.
double lebesgue_norm(const GridFunction& f, const ReciprocalExponent& p, double s = 0.0);

struct NormDiagnostics {
  /// Fraction of the L_2 mass above shell jmax - 1, |xi| >= (3/2) 2^{jmax-1},
  /// where only the top shell is nonzero. warning: at least 1e-3.
  double high_shell_mass = 0.0;
  bool warning = false;
};

double besov_norm(const GridFunction& f, const FilterBank& bank, const ReciprocalExponent& p,
                  const ReciprocalExponent& q, double s, NormDiagnostics* diag = nullptr);
/// Throws DomainError for p = inf.
double triebel_norm(const GridFunction& f, const FilterBank& bank, const ReciprocalExponent& p,
                    const ReciprocalExponent& q, double s, NormDiagnostics* diag = nullptr);

/// Number of dyadic scales t = 2^-m, m = 0..m_max, in the h_p maximal function.
inline constexpr int kHardyScales = 10;

/// ||sup_m |psi_{2^-m} * f| ||_{L_p} with psi(x) = exp(-pi |x|^2). Throws
/// DomainError for p = inf.
double local_hardy_norm(const GridFunction& f, const ReciprocalExponent& p);
/// |psi_t * f| at a single scale t (used for the domination check).
GridFunction hardy_mollify(const GridFunction& f, double t);

enum class SeqKind { Uniform, Dyadic };

struct SeqEntry {
  std::array<long, 2> index{0, 0};
  Complex value{0.0, 0.0};
};

/// Finitely supported sequence on Z^n (Uniform, weight <k>^s) or on N
/// (Dyadic, weight 2^{js}, index[0] = j).
struct WeightedSeq {
  SeqKind kind = SeqKind::Uniform;
  int n = 1;
  std::vector<SeqEntry> entries;

  std::size_t size() const { return entries.size(); }
};

double seq_weight(const WeightedSeq& a, const SeqEntry& e, double s);
double seq_norm(const WeightedSeq& a, const ReciprocalExponent& q, double s);

/// log of the weighted l_q norm of a sequence given by log|a_k| (entries equal
/// to -inf are zeros). Works far beyond the double range of the norm itself.
double seq_norm_log(SeqKind kind, int n, std::span<const std::array<long, 2>> indices,
                    std::span<const double> log_abs, const ReciprocalExponent& q, double s);

/// ||sum a_k e^{2 pi i k.x}||_{L_p(T^n)} on a periodic grid with at least
/// 8 max|k| (and 64) points per axis.
double fourier_series_norm(const WeightedSeq& a, const ReciprocalExponent& p);

/// Shared evaluation settings for localized_norm.
struct NormContext {
  StftOptions stft{};
  const FilterBank* bank = nullptr;
};

/// (sum_k ||psi_k f||_inner^p)^{1/p}. inner.family must be WienerAmalgam or
/// TriebelLizorkin (the latter needs context.bank). Pieces where psi_k f has
/// no mass above 1e-28 of ||f||_2^2 are skipped.
double localized_norm(const GridFunction& f, const std::vector<PartitionPiece>& partition,
                      const SpaceSpec& inner, const ReciprocalExponent& p_outer,
                      const NormContext& context);

/// Direct norm of f in the given space (W, M, B, F, hp, L) using context.
double space_norm(const GridFunction& f, const SpaceSpec& space, const NormContext& context);

}  // namespace amalgam
