#pragma once

// Uniform grids on [-L/2, L/2)^n (n = 1 or 2) and the transforms built on
// them: continuous-convention Fourier transform, short-time Fourier transform
// on a time-frequency lattice, the Littlewood-Paley filter bank, the smooth
// uniform partition of unity and dyadic/general dilation.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace amalgam {

using Complex = std::complex<double>;

/// Grid on [-L/2, L/2)^n with M samples per axis.
/// x_i = -L/2 + i dx, xi_l = (l - M/2) dxi, dx = L/M, dxi = 1/L.
struct GridSpec {
  int n = 1;
  double extent = 64.0;
  int samples = 1 << 14;

  /// Throws std::invalid_argument unless n in {1,2}, L > 0, M a power of two >= 4.
  static GridSpec make(int n, double extent, int samples);

  double dx() const { return extent / samples; }
  double dxi() const { return 1.0 / extent; }
  std::size_t total() const;
  double x(long i) const { return -extent / 2 + static_cast<double>(i) * dx(); }
  double xi(long l) const { return static_cast<double>(l - samples / 2) * dxi(); }
  /// Riemann weight of one sample: dx^n (space) or dxi^n (frequency).
  double cell_space() const;
  double cell_frequency() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

enum class Domain { Space, Frequency };

/// Samples of a function (Domain::Space) or of its Fourier transform
/// (Domain::Frequency). 2-D storage is row-major, first axis slowest.
struct GridFunction {
  GridSpec spec;
  Domain domain = Domain::Space;
  std::vector<Complex> values;

  using Sampler = std::function<Complex(const std::array<double, 2>&)>;

  static GridFunction zeros(const GridSpec& spec, Domain domain = Domain::Space);
  /// f(x) at the grid points. In 1-D the second coordinate is 0.
  static GridFunction sample_space(const GridSpec& spec, const Sampler& f);
  /// fhat(xi) at the frequency grid points.
  static GridFunction sample_frequency(const GridSpec& spec, const Sampler& fhat);

  /// Coordinates of flat index idx (space or frequency depending on domain).
  std::array<double, 2> coordinates(std::size_t idx) const;

  /// Throws std::domain_error when a sample is NaN or infinite.
  void check_finite() const;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator*=(Complex c);
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator*(Complex c, GridFunction f);

/// Samples of the transform with kernel exp(-2 pi i x.xi): DFT scaled by dx^n,
/// frequencies ordered on [-M dxi/2, M dxi/2).
GridFunction fourier(const GridFunction& f);
GridFunction inverse_fourier(const GridFunction& fhat);
/// Returns f in space domain whichever domain it is stored in.
GridFunction to_space(const GridFunction& f);
GridFunction to_frequency(const GridFunction& f);

/// T_{x0} f = f(. - x0) by a frequency-side phase (exact for band-limited f
/// that vanish near the domain boundary).
GridFunction translate(const GridFunction& f, const std::array<double, 2>& x0);
/// Circular shift by whole samples; exact.
GridFunction shift_samples(const GridFunction& f, const std::array<long, 2>& shift);
/// M_{xi0} f = exp(2 pi i x.xi0) f.
GridFunction modulate(const GridFunction& f, const std::array<double, 2>& xi0);

/// Fraction of the L_2 mass carried by samples inside [-L/4, L/4]^n.
double central_mass_fraction(const GridFunction& f);
/// Throws std::domain_error when central_mass_fraction(f) < 0.999999.
void require_domain_hygiene(const GridFunction& f, const char* what);

/// exp(-1/t) glue: 0 for t <= 0, 1 for t >= 1, smooth and monotone between,
/// with smooth_step(t) + smooth_step(1 - t) = 1.
double smooth_step(double t);
/// 1 for r <= inner, 0 for r >= outer, smooth_step in between.
double plateau(double r, double inner, double outer);

enum class WindowKind { GaussianUnit, CompactBump };

/// Window phi. GaussianUnit: exp(-pi (x/T)^2), cut at |x| = 4T.
/// CompactBump: exp(1 - 1/(1 - (x/T)^2)) on |x| < T. 2-D windows are tensor
/// products.
struct Window {
  WindowKind kind = WindowKind::GaussianUnit;
  double width = 1.0;

  double operator()(double x) const;
  double half_support() const;
  /// ||phi||_{L_2(R^n)}, closed form for the Gaussian, quadrature otherwise.
  double l2_norm(int n) const;
};

const char* to_string(WindowKind kind);
WindowKind parse_window_kind(const char* text);

/// Time-frequency sampling lattice. Window centers sit on grid samples
/// time_origin + m*time_step (m < time_count, per axis); each center uses a
/// segment of `segment` samples, giving frequency stride 1/(segment*dx) and
/// `segment` frequencies per axis covering the full band of the grid.
/// periodic: the grid is treated as a torus; otherwise samples outside the
/// grid are zero and centers may lie outside it.
/// full_grid: every row multiplies the whole grid by the shifted window and
/// transforms it (segment = M, any window width, no periodicity). Suited to
/// windows much wider than the function's support.
struct TfLattice {
  long time_step = 1;
  long time_origin = 0;
  int time_count = 1;
  int segment = 1;
  bool periodic = true;
  bool full_grid = false;

  /// Periodic lattice over the whole grid with the smallest power-of-two
  /// segment that holds the window.
  static TfLattice covering(const GridSpec& spec, const Window& window, int time_step);
  /// Non-periodic lattice whose centers extend past both grid edges far
  /// enough that every window touching the grid is included.
  static TfLattice zero_extended(const GridSpec& spec, const Window& window, int time_step);
  /// full_grid lattice with centers m * time_step samples from the grid
  /// center, for every m whose window reaches the grid.
  static TfLattice full_rows(const GridSpec& spec, const Window& window, long time_step);

  double time_stride(const GridSpec& spec) const { return static_cast<double>(time_step) * spec.dx(); }
  double freq_stride(const GridSpec& spec) const { return 1.0 / (segment * spec.dx()); }
  /// Throws std::invalid_argument when strides do not divide the grid or the
  /// window does not fit in a segment.
  void validate(const GridSpec& spec, const Window& window) const;
};

/// Sampled V_phi f. Rows are time points (flattened over axes), columns are
/// frequencies (flattened, each axis ordered from -segment/2).
struct TfMatrix {
  GridSpec grid;
  TfLattice lattice;
  Window window;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Complex> values;

  Complex& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  const Complex& at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  /// Lattice center of row r.
  std::array<double, 2> time_point(std::size_t r) const;
  /// Frequency of column c.
  std::array<double, 2> frequency(std::size_t c) const;
  /// Riemann cell sizes a^n and b^n.
  double time_cell() const;
  double freq_cell() const;
};

/// V_phi f(x_m, xi_l) = dx^n sum_i f(x_i) conj(phi(x_i - x_m)) exp(-2 pi i x_i.xi_l).
/// Rows are evaluated in parallel.
TfMatrix stft(const GridFunction& f, const Window& window, const TfLattice& lattice);

/// Littlewood-Paley filters psi_0 .. psi_jmax sampled on the frequency grid.
struct FilterBank {
  GridSpec spec;
  int jmax = 1;
  std::vector<std::vector<double>> filters;
};

/// phi(xi): 1 on |xi| <= 4/3, 0 on |xi| >= 3/2.
double lp_bump(double r);
/// psi_j(xi) as a function of |xi|.
double lp_filter(int j, double r);

/// Throws std::invalid_argument unless 2^jmax * 3/2 < M dxi / 2.
FilterBank build_filter_bank(const GridSpec& spec, int jmax);

/// Delta_j f.
GridFunction lp_project(const GridFunction& f, const FilterBank& bank, int j);

/// One member psi_k = psi(. - k) of the smooth uniform partition.
struct PartitionPiece {
  std::array<int, 2> k{0, 0};
  GridFunction psi;
};

/// psi(x) = prod_i plateau(|x_i|, 1/4, 3/4); the integer translates already
/// sum to exactly 1. Returns every k whose support meets the grid.
std::vector<PartitionPiece> uniform_partition(const GridSpec& spec);
double partition_bump(double x);

/// lambda^n f(lambda x), i.e. the transform becomes fhat(xi/lambda).
/// Powers of two are exact resamplings; other lambda interpolate the
/// 4x oversampled transform with cubic convolution. Throws
/// std::invalid_argument when more than 1e-6 of the L_2 mass would leave the
/// grid (space side for lambda < 1, frequency band for lambda > 1).
GridFunction dilate(const GridFunction& f, double lambda);

}  // namespace amalgam
