#pragma once

// Extremal families: low-frequency bumps h_eps, dyadic shells h_j and their
// separated sums F_N, lattice sums G_N over Gamma_j, random-sign sums
// G^omega, h_p-atoms and truncated sequences.
//
// Every witness realized on a grid must keep 0.999999 of its L_2 mass inside
// [-L/4, L/4]^n; generators throw std::domain_error otherwise.

#include "amalgam/classifier.hpp"
#include "amalgam/grid.hpp"
#include "amalgam/norms.hpp"
#include "amalgam/rational.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace amalgam {

/// Radial transform of the dyadic profile: 1 on [7/8, 8/7], 0 outside
/// (3/4, 4/3), smooth_step transitions.
double dyadic_profile_hat(double r);
/// Radial transform of the low-frequency profile: 1 on |xi| <= 1/2, 0 for
/// |xi| >= 1.
double low_profile_hat(double r);
/// Transform of the lattice profile: exp(1 - 1/(1 - (|xi|/r_g)^2)) inside
/// B(0, r_g).
double lattice_profile_hat(double r);
inline constexpr double kLatticeRadius = 1.0 / 16.0;

/// h with real transform dyadic_profile_hat(|xi|), sampled from the
/// transform (the grid copy is the periodization of h; grids too small for h
/// itself are fine as long as the generated h_j pass the hygiene check).
struct DyadicProfile {
  GridSpec spec;
  GridFunction h;
};
DyadicProfile make_dyadic_profile(const GridSpec& spec);

/// Low profile sampled from low_profile_hat; hygiene enforced.
GridFunction make_low_profile(const GridSpec& spec);

/// h_eps with transform hhat(xi/eps): dilate(profile_low, eps).
GridFunction make_h_eps(const GridFunction& profile_low, double eps);

/// h_j with transform hhat(xi/2^j), sampled from the analytic transform so
/// Delta_j h_j = h_j holds to rounding. Throws std::invalid_argument when
/// 2^j * 4/3 reaches the band edge, std::domain_error on hygiene failure.
GridFunction make_h_j(const DyadicProfile& profile, int j);

/// F_N = sum_j a_j T_{N j e_0} h_j, shifted as a whole so the translates are
/// centered on the grid (all norms used are translation invariant).
GridFunction make_F_N(const WeightedSeq& a, double N, const DyadicProfile& profile);

/// g with transform lattice_profile_hat; hygiene enforced.
struct LatticeProfile {
  GridSpec spec;
  GridFunction g;
};
LatticeProfile make_lattice_profile(const GridSpec& spec);

/// Gamma_j: integer k whose transform support B(k, r_g) lies strictly inside
/// the region where psi_j = 1. Exact rational arithmetic on |k|^2.
std::vector<std::array<long, 2>> gamma_set(int j, int n);

struct LatticeSum {
  GridFunction f;
  std::vector<std::size_t> gamma_sizes;  ///< |Gamma_j| for j = 0..max index of b
};

/// G_N = sum_j b_j sum_{k in Gamma_j} T_{N k} M_k g. The bank only fixes the
/// band the shells must fit in.
LatticeSum make_G_N(const WeightedSeq& b, double N, const LatticeProfile& g, const FilterBank& bank);

std::uint64_t splitmix64(std::uint64_t x);
/// Independent stream seed for (seed, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Random signs omega_k, a pure function of (seed, k).
struct SignVector {
  std::uint64_t seed = 0;
  int operator()(const std::array<long, 2>& k) const;
};

/// G^omega = sum_k omega_k a_k M_k g, evaluated pointwise as g(x) P(x) with
/// the trigonometric polynomial P(x) = sum omega_k a_k e^{2 pi i k.x}.
GridFunction make_khinchin(const WeightedSeq& a, const SignVector& omega, const LatticeProfile& g);

enum class AtomKind { Small, Big };

struct Atom {
  GridFunction values;
  std::array<double, 2> cube_center{0.0, 0.0};
  double cube_side = 1.0;
  AtomKind kind = AtomKind::Small;
  ReciprocalExponent p;
};

/// Number of vanishing moments required: floor(n (1/p - 1)) (negative means none).
long atom_moment_order(const ReciprocalExponent& p, int n);

/// Smooth pseudo-random profile on the cube centered at `center`, made
/// orthogonal to the monomials of degree <= atom_moment_order (Small only)
/// and scaled so max |a| = |Q|^{-1/p}. Throws std::invalid_argument on a
/// size/kind mismatch or when the cube holds too few samples for the moment
/// system, std::domain_error on hygiene failure.
Atom make_atom(AtomKind kind, const ReciprocalExponent& p, double cube_side, std::uint64_t seed,
               const GridSpec& spec, std::array<double, 2> center = {0.0, 0.0});

/// int x^gamma a(x) dx by the grid sum (gamma[1] ignored in 1-D).
double atom_moment(const Atom& atom, const std::array<int, 2>& gamma);

enum class SeqShape { Spike, Flat, Power, Random };

struct SeqGenerator {
  SeqShape shape = SeqShape::Flat;
  Rational theta{0};        ///< Power exponent
  std::uint64_t seed = 0;   ///< Random
};

/// Uniform: indices k from -floor((size-1)/2) on each axis (size^n entries);
/// Dyadic: j = 0..size-1. Spike is delta_0, Flat all ones, Power
/// <k>^-theta or 2^{-j theta}, Random magnitudes uniform in (0, 1].
WeightedSeq make_truncated_seq(const SeqGenerator& gen, std::size_t size, SeqKind kind, int n = 1);

std::string to_string(const SeqGenerator& gen);
/// "spike", "flat", "power:1/2" (rational theta), "random:7".
SeqGenerator parse_seq_generator(const std::string& text);

}  // namespace amalgam
