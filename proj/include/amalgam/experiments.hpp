#pragma once

// Probe harness: scaling-law fits, embedding probes along witness schedules,
// brute-force sequence-space oracle, Khinchin Monte Carlo, exponent atlas,
// localization and Fourier-series checks.

#include "amalgam/classifier.hpp"
#include "amalgam/grid.hpp"
#include "amalgam/norms.hpp"
#include "amalgam/witnesses.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace amalgam {

enum class ProbeVerdict { ConsistentWithEmbedding, DivergenceDetected, Inconclusive };
std::string_view to_string(ProbeVerdict v);

struct ProbePoint {
  double parameter = 0.0;
  double source_norm = 0.0;
  double target_norm = 0.0;
  double ratio = 0.0;
};

/// Least squares of y = log2(value) against x = log2(parameter) (log_x) or
/// x = parameter. residual is the RMS misfit in log2 units; relative_residual
/// divides it by |y_last - y_first| (0 for an exact constant, infinite for
/// a flat but noisy series).
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  double relative_residual = 0.0;
};
SlopeFit fit_slope(const std::vector<double>& parameters, const std::vector<double>& values, bool log_x);

struct ExperimentReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<ProbePoint> points;
  SlopeFit fit;
  std::optional<double> expected_slope;
  ProbeVerdict verdict = ProbeVerdict::Inconclusive;
  std::optional<EmbeddingVerdict> classifier;
  bool disagreement = false;
  std::vector<std::pair<std::string, double>> diagnostics;
  std::vector<std::string> notes;
  std::uint64_t seed = 0;
  /// Wall time; kept out of the serialized report so reruns compare equal.
  double runtime_seconds = 0.0;

  double growth() const;
  std::optional<double> diagnostic(const std::string& key) const;
};

/// DivergenceDetected iff last/first ratio >= 2, slope > 0,
/// relative_residual < 0.2 (log-log fit of the ratios) and, with 4 or more
/// points, the fit over the second half of the schedule keeps at least half
/// the overall slope (saturating ratios are Inconclusive). ConsistentWithEmbedding
/// iff max/first ratio < 2 and slope <= 0.1. Inconclusive otherwise.
ProbeVerdict probe_verdict(const std::vector<ProbePoint>& points, SlopeFit* fit_out = nullptr);

// ---------------------------------------------------------------- sequences

/// Parametrized sequence family realized at any truncation.
/// Dyadic: a_j = 2^{-j sigma} (j+1)^{-theta}; Uniform: a_k = <k>^{-sigma}
/// log(e + |k|)^{-theta}. end_spike replaces the family by delta at the last
/// index of the truncation (largest j, or largest k on the first axis).
/// perturb_seed != 0 multiplies each entry by 2^u, u uniform in [-1, 1],
/// a fixed function of (seed, index).
struct SeqFamily {
  SeqKind kind = SeqKind::Dyadic;
  int n = 1;
  Rational sigma{0};
  Rational theta{0};
  bool end_spike = false;
  std::uint64_t perturb_seed = 0;

  WeightedSeq realize(std::size_t size) const;
  /// Indices and log|a_k| (no underflow for long truncations).
  void realize_log(std::size_t size, std::vector<std::array<long, 2>>& indices,
                   std::vector<double>& log_abs) const;
  std::string describe() const;
};

struct OracleResult {
  bool holds_estimate = true;
  SeqFamily witness;
  WeightedSeq witness_sequence;  ///< witness at the largest truncation
  std::vector<std::size_t> truncations;
  std::vector<double> ratios;    ///< target/source norm of the witness per truncation
  double growth = 1.0;           ///< ratios.back() / ratios.front()
  std::size_t candidates = 0;
};

/// Growth factor a witness must reach between the first and last truncation
/// (its ratios must also be non-decreasing) to count as divergence.
inline constexpr double kOracleGrowth = 1.4;

/// Searches power/log families at the critical exponents, moving spikes and
/// seeded perturbations for growth of ||a||_{l_{q2}^{s2}} / ||a||_{l_{q1}^{s1}}
/// over truncations 2^4 .. budget (budget >= 64, powers of two).
OracleResult seq_embedding_oracle(const ReciprocalExponent& q1, const Rational& s1,
                                  const ReciprocalExponent& q2, const Rational& s2, SeqKind kind,
                                  int n = 1, std::size_t budget = 4096, std::uint64_t seed = 1);

// ---------------------------------------------------------------- families

enum class FamilyKind { HEps, HJ, FN, GN, Constant };
std::string_view to_string(FamilyKind kind);
FamilyKind parse_family_kind(const std::string& text);

/// Norms of F_N (separated limit N -> inf, computed per shell through the
/// dilation identity) and of G_N (per lattice point through the modulation
/// identity). Supported spaces: W, B, F, L.
class SeparatedFamilyEvaluator {
 public:
  explicit SeparatedFamilyEvaluator(Window window);

  double fn_norm(const WeightedSeq& a, const SpaceSpec& space);
  double gn_norm(const WeightedSeq& b, const SpaceSpec& space);

  /// ||h_j||_{W^s_{p,q}} with the evaluator's window.
  double shell_wiener(int j, const ReciprocalExponent& p, const ReciprocalExponent& q, double s);
  /// ||M_k g||_{W^s_{p,q}}.
  double lattice_wiener(const std::array<long, 2>& k, const ReciprocalExponent& p,
                        const ReciprocalExponent& q, double s);

  const DyadicProfile& profile() const { return profile_; }
  const LatticeProfile& lattice() const { return lattice_; }
  const Window& window() const { return window_; }

 private:
  Window window_;
  DyadicProfile profile_;
  LatticeProfile lattice_;
  std::optional<TfMatrix> lattice_stft_;
  std::map<std::string, double> cache_;
};

struct ProbeConfig {
  SpaceSpec source;
  SpaceSpec target;
  FamilyKind family = FamilyKind::FN;
  std::vector<double> schedule;
  Window window{WindowKind::GaussianUnit, 8.0};
  GridSpec grid = GridSpec::make(1, 4096, 32768);
  std::uint64_t seed = 1;
  /// FN / GN coefficients; sourced from seq_embedding_oracle when absent.
  std::optional<SeqFamily> sequence;
  /// Separations used for the direct finite-N check of FN families.
  double separation = 64.0;
  bool convergence_check = true;
};

/// Default grid and window for a family: h_eps on L = 4096, M = 32768 with
/// the unit Gaussian; h_j on L = 32, M = 32768 with the unit CompactBump;
/// FN/GN evaluated on their own profile grids with a width-8 Gaussian.
ProbeConfig default_probe_config(FamilyKind family);

/// Sequence spaces that the FN (or GN) coefficients must embed into for the
/// function spaces to embed: returns (q, s) for a function space.
std::pair<ReciprocalExponent, Rational> fn_sequence_space(const SpaceSpec& space);
std::pair<ReciprocalExponent, Rational> gn_sequence_space(const SpaceSpec& space);

ExperimentReport embedding_probe(const ProbeConfig& config);

/// Norm of h_eps / h_j / constant along a schedule with the expected slope
/// attached. h_eps fits log-log against eps, h_j fits log2 against j.
ExperimentReport scaling_probe(FamilyKind family, const std::vector<double>& schedule,
                               const SpaceSpec& norm, const Window& window, const GridSpec& grid);

// ---------------------------------------------------------------- Khinchin

struct KhinchinResult {
  double empirical_mean = 0.0;
  double reference = 0.0;
  double ratio = 0.0;
  double standard_error = 0.0;
};

/// Monte Carlo estimate of E ||G^omega||_{L_p}^p over `trials` sign vectors
/// (trial t uses SignVector{derive_seed(seed, t)}), against
/// ||a||_{l_2}^p ||g||_{L_p}^p.
KhinchinResult khinchin_mc(const WeightedSeq& a, const ReciprocalExponent& p, std::size_t trials,
                           std::uint64_t seed, const LatticeProfile& g);

/// Default lattice profile grid: L = 512, M = 16384 (dx = 1/32).
LatticeProfile default_lattice_profile(int n = 1);

// ---------------------------------------------------------------- atlas

enum class AtlasMode { AtCritical, Below, Above };

struct AtlasRow {
  Rational u_p{0};
  Rational u_q{0};
  RegionLabel alpha_label = RegionLabel::A1;
  RegionLabel beta_label = RegionLabel::B1;
  bool defined = true;
  Rational critical_s{0};
  Rational s{0};
  bool holds = false;
  bool strict_required = false;
  std::string note;
};

/// One row per (1/p, 1/q) node. pair is "W:B", "B:W", "W:hp", "hp:W", "W:L"
/// or "L:W"; s is the critical value, or critical -/+ delta.
std::vector<AtlasRow> region_atlas(const std::string& pair, AtlasMode mode, const Rational& delta,
                                   const std::vector<Rational>& u_p_nodes,
                                   const std::vector<Rational>& u_q_nodes, int n = 1);

// ---------------------------------------------------------------- localization

struct LocalizationReport {
  std::vector<double> localized;
  std::vector<double> direct;
  std::vector<double> ratios;
  double max_over_min = 1.0;
  bool within_bound = true;  ///< max_over_min <= 4
};

LocalizationReport localization_check(const std::vector<GridFunction>& family,
                                      const std::vector<PartitionPiece>& partition,
                                      const SpaceSpec& space, const NormContext& context);

/// 20 functions on spec: Gaussians of several widths and centers, modulated
/// Gaussians, low profiles and sums of two of them. Needs L >= 64.
std::vector<GridFunction> standard_localization_family(const GridSpec& spec);

// ---------------------------------------------------------------- Fourier series

/// Ratio ||sum a_k e_k||_{L_p(T^n)} / ||a||_{l_q^s} (FunctionBelowCoefficients)
/// or its inverse, over truncations N = 16, 32, ..., budget for flat
/// (Dirichlet), power, random and spike sequences. points hold the family with
/// the largest growth; diagnostics record every family's growth and maximum.
ExperimentReport fourier_series_sharpness(const ReciprocalExponent& p, const ReciprocalExponent& q,
                                          const Rational& s, InequalityDirection direction,
                                          std::size_t budget = 256, int n = 1);

}  // namespace amalgam
