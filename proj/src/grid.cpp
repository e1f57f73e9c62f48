#include "amalgam/grid.hpp"

#include "amalgam/summation.hpp"
#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>
#include <string>

namespace amalgam {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

std::vector<int> shape_of(const GridSpec& spec) {
  return std::vector<int>(static_cast<std::size_t>(spec.n), spec.samples);
}

double sign_of_parity(long k) { return (k & 1) ? -1.0 : 1.0; }

// (-1)^{i} per axis, summed over axes, for the flat index idx.
double checkerboard(const GridSpec& spec, std::size_t idx) {
  if (spec.n == 1) return sign_of_parity(static_cast<long>(idx));
  const long M = spec.samples;
  return sign_of_parity(static_cast<long>(idx) / M + static_cast<long>(idx) % M);
}

}  // namespace

GridSpec GridSpec::make(int n, double extent, int samples) {
  if (n != 1 && n != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  if (!(extent > 0) || !std::isfinite(extent)) throw std::invalid_argument("grid extent must be positive");
  if (samples < 4 || !is_power_of_two(samples)) {
    throw std::invalid_argument("samples per axis must be a power of two >= 4");
  }
  GridSpec s;
  s.n = n;
  s.extent = extent;
  s.samples = samples;
  return s;
}

std::size_t GridSpec::total() const {
  std::size_t t = 1;
  for (int a = 0; a < n; ++a) t *= static_cast<std::size_t>(samples);
  return t;
}

double GridSpec::cell_space() const { return std::pow(dx(), n); }
double GridSpec::cell_frequency() const { return std::pow(dxi(), n); }

GridFunction GridFunction::zeros(const GridSpec& spec, Domain domain) {
  GridFunction f;
  f.spec = spec;
  f.domain = domain;
  f.values.assign(spec.total(), Complex(0.0, 0.0));
  return f;
}

std::array<double, 2> GridFunction::coordinates(std::size_t idx) const {
  const long M = spec.samples;
  auto coord = [&](long i) { return domain == Domain::Space ? spec.x(i) : spec.xi(i); };
  if (spec.n == 1) return {coord(static_cast<long>(idx)), 0.0};
  return {coord(static_cast<long>(idx) / M), coord(static_cast<long>(idx) % M)};
}

GridFunction GridFunction::sample_space(const GridSpec& spec, const Sampler& f) {
  auto g = zeros(spec, Domain::Space);
  for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = f(g.coordinates(i));
  return g;
}

GridFunction GridFunction::sample_frequency(const GridSpec& spec, const Sampler& fhat) {
  auto g = zeros(spec, Domain::Frequency);
  for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = fhat(g.coordinates(i));
  return g;
}

void GridFunction::check_finite() const {
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::domain_error("grid function has non-finite samples");
    }
  }
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  if (!(spec == other.spec) || domain != other.domain) {
    throw std::invalid_argument("adding grid functions on different grids or domains");
  }
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += other.values[i];
  return *this;
}

GridFunction& GridFunction::operator*=(Complex c) {
  for (auto& v : values) v *= c;
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator*(Complex c, GridFunction f) { return f *= c; }

GridFunction fourier(const GridFunction& f) {
  if (f.domain != Domain::Space) throw std::invalid_argument("fourier expects a space-domain function");
  const auto& spec = f.spec;
  auto out = f;
  out.domain = Domain::Frequency;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= checkerboard(spec, i);
  detail::fft_inplace(out.values.data(), shape_of(spec), detail::FftDirection::Forward);
  // (-1)^{l - M/2} per axis; M/2 shifts the parity by M/2 per axis.
  const double offset = sign_of_parity(static_cast<long>(spec.n) * (spec.samples / 2));
  const double scale = spec.cell_space() * offset;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= scale * checkerboard(spec, i);
  return out;
}

GridFunction inverse_fourier(const GridFunction& fhat) {
  if (fhat.domain != Domain::Frequency) {
    throw std::invalid_argument("inverse_fourier expects a frequency-domain function");
  }
  const auto& spec = fhat.spec;
  auto out = fhat;
  out.domain = Domain::Space;
  const double offset = sign_of_parity(static_cast<long>(spec.n) * (spec.samples / 2));
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= offset * checkerboard(spec, i);
  detail::fft_inplace(out.values.data(), shape_of(spec), detail::FftDirection::Backward);
  const double scale = spec.cell_frequency();
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= scale * checkerboard(spec, i);
  return out;
}

GridFunction to_space(const GridFunction& f) {
  return f.domain == Domain::Space ? f : inverse_fourier(f);
}

GridFunction to_frequency(const GridFunction& f) {
  return f.domain == Domain::Frequency ? f : fourier(f);
}

GridFunction translate(const GridFunction& f, const std::array<double, 2>& x0) {
  auto fh = to_frequency(f);
  for (std::size_t i = 0; i < fh.values.size(); ++i) {
    const auto xi = fh.coordinates(i);
    const double phase = -2 * kPi * (x0[0] * xi[0] + (f.spec.n == 2 ? x0[1] * xi[1] : 0.0));
    fh.values[i] *= std::polar(1.0, phase);
  }
  return f.domain == Domain::Space ? inverse_fourier(fh) : fh;
}

GridFunction shift_samples(const GridFunction& f, const std::array<long, 2>& shift) {
  auto out = GridFunction::zeros(f.spec, f.domain);
  const long M = f.spec.samples;
  auto wrap = [M](long i) { return ((i % M) + M) % M; };
  if (f.spec.n == 1) {
    for (long i = 0; i < M; ++i) out.values[static_cast<std::size_t>(wrap(i + shift[0]))] = f.values[static_cast<std::size_t>(i)];
    return out;
  }
  for (long i = 0; i < M; ++i) {
    for (long k = 0; k < M; ++k) {
      out.values[static_cast<std::size_t>(wrap(i + shift[0]) * M + wrap(k + shift[1]))] =
          f.values[static_cast<std::size_t>(i * M + k)];
    }
  }
  return out;
}

GridFunction modulate(const GridFunction& f, const std::array<double, 2>& xi0) {
  auto g = to_space(f);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const auto x = g.coordinates(i);
    const double phase = 2 * kPi * (x[0] * xi0[0] + (f.spec.n == 2 ? x[1] * xi0[1] : 0.0));
    g.values[i] *= std::polar(1.0, phase);
  }
  return f.domain == Domain::Space ? g : fourier(g);
}

double central_mass_fraction(const GridFunction& f) {
  const auto g = to_space(f);
  const double quarter = g.spec.extent / 4;
  std::vector<double> inside(g.values.size(), 0.0);
  std::vector<double> all(g.values.size(), 0.0);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const auto x = g.coordinates(i);
    const double m = std::norm(g.values[i]);
    all[i] = m;
    const bool in = std::abs(x[0]) <= quarter && (g.spec.n == 1 || std::abs(x[1]) <= quarter);
    if (in) inside[i] = m;
  }
  const double total = pairwise_sum(all);
  if (total == 0.0) return 1.0;
  return pairwise_sum(inside) / total;
}

void require_domain_hygiene(const GridFunction& f, const char* what) {
  const double frac = central_mass_fraction(f);
  if (frac < 0.999999) {
    throw std::domain_error(std::string(what) + ": only " + std::to_string(frac) +
                            " of the L_2 mass lies in the central half of the grid");
  }
}

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double plateau(double r, double inner, double outer) {
  return smooth_step((outer - r) / (outer - inner));
}

double Window::operator()(double x) const {
  const double u = x / width;
  switch (kind) {
    case WindowKind::GaussianUnit:
      if (std::abs(u) >= 4.0) return 0.0;
      return std::exp(-kPi * u * u);
    case WindowKind::CompactBump:
      if (std::abs(u) >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - u * u));
  }
  return 0.0;
}

double Window::half_support() const {
  return kind == WindowKind::GaussianUnit ? 4.0 * width : width;
}

double Window::l2_norm(int n) const {
  double one_axis = 0.0;
  if (kind == WindowKind::GaussianUnit) {
    one_axis = std::sqrt(width / std::sqrt(2.0));
  } else {
    // Simpson on [-T, T]; the integrand is flat at both ends.
    const int steps = 20000;
    const double h = 2.0 * width / steps;
    std::vector<double> terms(steps + 1);
    for (int i = 0; i <= steps; ++i) {
      const double v = (*this)(-width + i * h);
      const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      terms[static_cast<std::size_t>(i)] = w * v * v;
    }
    one_axis = std::sqrt(pairwise_sum(terms) * h / 3.0);
  }
  return std::pow(one_axis, n);
}

const char* to_string(WindowKind kind) {
  return kind == WindowKind::GaussianUnit ? "gaussian" : "bump";
}

WindowKind parse_window_kind(const char* text) {
  const std::string t(text);
  if (t == "gaussian" || t == "GaussianUnit") return WindowKind::GaussianUnit;
  if (t == "bump" || t == "CompactBump") return WindowKind::CompactBump;
  throw std::invalid_argument("unknown window '" + t + "'");
}

namespace {

int segment_for(const GridSpec& spec, const Window& window) {
  int s = 2;
  while (s * spec.dx() / 2 < window.half_support()) s *= 2;
  return s;
}

}  // namespace

TfLattice TfLattice::covering(const GridSpec& spec, const Window& window, int time_step) {
  TfLattice lat;
  lat.time_step = time_step;
  lat.time_origin = 0;
  lat.time_count = time_step > 0 ? spec.samples / time_step : 0;
  lat.segment = segment_for(spec, window);
  lat.periodic = true;
  lat.validate(spec, window);
  return lat;
}

TfLattice TfLattice::zero_extended(const GridSpec& spec, const Window& window, int time_step) {
  if (time_step <= 0) throw std::invalid_argument("time step must be positive");
  TfLattice lat;
  lat.time_step = time_step;
  const long reach = static_cast<long>(std::ceil(window.half_support() / spec.dx()));
  const long extra = reach / time_step + 1;
  lat.time_origin = -extra * time_step;
  lat.time_count = static_cast<int>(spec.samples / time_step + 2 * extra);
  lat.segment = segment_for(spec, window);
  lat.periodic = false;
  lat.validate(spec, window);
  return lat;
}

TfLattice TfLattice::full_rows(const GridSpec& spec, const Window& window, long time_step) {
  if (time_step <= 0) throw std::invalid_argument("time step must be positive");
  const double a = static_cast<double>(time_step) * spec.dx();
  const long K = static_cast<long>(std::ceil((window.half_support() + spec.extent / 2) / a));
  TfLattice lat;
  lat.time_step = time_step;
  lat.time_origin = spec.samples / 2 - K * time_step;
  lat.time_count = static_cast<int>(2 * K + 1);
  lat.segment = spec.samples;
  lat.periodic = false;
  lat.full_grid = true;
  lat.validate(spec, window);
  return lat;
}

void TfLattice::validate(const GridSpec& spec, const Window& window) const {
  if (time_step <= 0 || time_count <= 0) throw std::invalid_argument("empty time lattice");
  if (full_grid) {
    if (segment != spec.samples || periodic) {
      throw std::invalid_argument("full-grid lattice needs segment = M and no periodicity");
    }
    return;
  }
  if (!is_power_of_two(segment) || segment < 2) {
    throw std::invalid_argument("segment length must be a power of two");
  }
  if (spec.samples % time_step != 0) {
    throw std::invalid_argument("time stride does not divide the grid");
  }
  if (periodic && segment > spec.samples) {
    throw std::invalid_argument("segment longer than the periodic grid");
  }
  if (window.half_support() > segment * spec.dx() / 2 * (1 + 1e-12)) {
    throw std::invalid_argument("window does not fit inside one segment");
  }
}

std::array<double, 2> TfMatrix::time_point(std::size_t r) const {
  const long T = lattice.time_count;
  auto c = [&](long m) { return grid.x(lattice.time_origin + m * lattice.time_step); };
  if (grid.n == 1) return {c(static_cast<long>(r)), 0.0};
  return {c(static_cast<long>(r) / T), c(static_cast<long>(r) % T)};
}

std::array<double, 2> TfMatrix::frequency(std::size_t col) const {
  const long S = lattice.segment;
  const double b = lattice.freq_stride(grid);
  auto f = [&](long l) { return static_cast<double>(l - S / 2) * b; };
  if (grid.n == 1) return {f(static_cast<long>(col)), 0.0};
  return {f(static_cast<long>(col) / S), f(static_cast<long>(col) % S)};
}

double TfMatrix::time_cell() const { return std::pow(lattice.time_stride(grid), grid.n); }
double TfMatrix::freq_cell() const { return std::pow(lattice.freq_stride(grid), grid.n); }

TfMatrix stft(const GridFunction& f_in, const Window& window, const TfLattice& lattice) {
  const auto f = to_space(f_in);
  const auto& spec = f.spec;
  lattice.validate(spec, window);
  const long M = spec.samples;
  const long S = lattice.segment;
  const int n = spec.n;
  const double dx = spec.dx();
  const double b = lattice.freq_stride(spec);

  TfMatrix V;
  V.grid = spec;
  V.lattice = lattice;
  V.window = window;
  V.rows = n == 1 ? static_cast<std::size_t>(lattice.time_count)
                  : static_cast<std::size_t>(lattice.time_count) * lattice.time_count;
  V.cols = n == 1 ? static_cast<std::size_t>(S) : static_cast<std::size_t>(S * S);
  V.values.assign(V.rows * V.cols, Complex(0.0, 0.0));

  // Window samples with the checkerboard folded in.
  std::vector<double> w(lattice.full_grid ? 0 : static_cast<std::size_t>(S));
  for (long k = 0; k < static_cast<long>(w.size()); ++k) {
    w[static_cast<std::size_t>(k)] = window(static_cast<double>(k - S / 2) * dx) * sign_of_parity(k);
  }
  // exp(-2 pi i x_start xi_l) per axis depends on the start only through
  // x_start; precompute nothing and evaluate per row (rows are few).
  auto source = [&](long idx, bool& ok) -> long {
    if (lattice.periodic) {
      ok = true;
      return ((idx % M) + M) % M;
    }
    ok = idx >= 0 && idx < M;
    return idx;
  };
  const std::vector<int> shape(static_cast<std::size_t>(n), static_cast<int>(S));
  const double scale = std::pow(dx, n);

  parallel_for(V.rows, [&](std::size_t r) {
    Complex* out = V.values.data() + r * V.cols;
    std::array<long, 2> start{0, 0};
    if (n == 1) {
      start[0] = lattice.time_origin + static_cast<long>(r) * lattice.time_step - S / 2;
    } else {
      const long T = lattice.time_count;
      start[0] = lattice.time_origin + (static_cast<long>(r) / T) * lattice.time_step - S / 2;
      start[1] = lattice.time_origin + (static_cast<long>(r) % T) * lattice.time_step - S / 2;
    }
    if (lattice.full_grid) {
      // Whole grid times the window centered at the lattice point.
      const auto u = V.time_point(r);
      std::vector<double> w0(static_cast<std::size_t>(M)), w1;
      for (long k = 0; k < M; ++k) {
        w0[static_cast<std::size_t>(k)] = window(spec.x(k) - u[0]) * sign_of_parity(k);
      }
      if (n == 2) {
        w1.resize(static_cast<std::size_t>(M));
        for (long k = 0; k < M; ++k) {
          w1[static_cast<std::size_t>(k)] = window(spec.x(k) - u[1]) * sign_of_parity(k);
        }
      }
      start = {0, 0};
      if (n == 1) {
        for (long k = 0; k < M; ++k) out[k] = f.values[static_cast<std::size_t>(k)] * w0[static_cast<std::size_t>(k)];
      } else {
        for (long k1 = 0; k1 < M; ++k1) {
          for (long k2 = 0; k2 < M; ++k2) {
            out[k1 * M + k2] = f.values[static_cast<std::size_t>(k1 * M + k2)] *
                               (w0[static_cast<std::size_t>(k1)] * w1[static_cast<std::size_t>(k2)]);
          }
        }
      }
    } else if (n == 1) {
      for (long k = 0; k < S; ++k) {
        bool ok = false;
        const long i = source(start[0] + k, ok);
        out[k] = ok ? f.values[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(k)] : Complex(0.0);
      }
    } else {
      for (long k1 = 0; k1 < S; ++k1) {
        bool ok1 = false;
        const long i1 = source(start[0] + k1, ok1);
        for (long k2 = 0; k2 < S; ++k2) {
          bool ok2 = false;
          const long i2 = source(start[1] + k2, ok2);
          out[k1 * S + k2] = (ok1 && ok2)
                                 ? f.values[static_cast<std::size_t>(i1 * M + i2)] *
                                       (w[static_cast<std::size_t>(k1)] * w[static_cast<std::size_t>(k2)])
                                 : Complex(0.0);
        }
      }
    }
    detail::fft_inplace(out, shape, detail::FftDirection::Forward);
    const double xs0 = spec.x(start[0]);
    const double xs1 = spec.x(start[1]);
    for (std::size_t c = 0; c < V.cols; ++c) {
      double phase = 0.0;
      if (n == 1) {
        phase = -2 * kPi * xs0 * (static_cast<double>(static_cast<long>(c) - S / 2) * b);
      } else {
        const long l1 = static_cast<long>(c) / S;
        const long l2 = static_cast<long>(c) % S;
        phase = -2 * kPi * (xs0 * static_cast<double>(l1 - S / 2) * b +
                            xs1 * static_cast<double>(l2 - S / 2) * b);
      }
      out[c] *= scale * std::polar(1.0, phase);
    }
  });
  return V;
}

double lp_bump(double r) { return plateau(std::abs(r), 4.0 / 3.0, 1.5); }

double lp_filter(int j, double r) {
  if (j < 0) throw std::invalid_argument("filter index must be >= 0");
  if (j == 0) return lp_bump(r);
  return lp_bump(std::ldexp(r, -j)) - lp_bump(std::ldexp(r, -(j - 1)));
}

FilterBank build_filter_bank(const GridSpec& spec, int jmax) {
  if (jmax < 1) throw std::invalid_argument("jmax must be >= 1");
  const double nyquist = spec.samples * spec.dxi() / 2;
  if (!(std::ldexp(1.5, jmax) < nyquist)) {
    throw std::invalid_argument("top Littlewood-Paley shell 2^jmax*3/2 exceeds the grid band " +
                                std::to_string(nyquist));
  }
  FilterBank bank;
  bank.spec = spec;
  bank.jmax = jmax;
  bank.filters.assign(static_cast<std::size_t>(jmax) + 1, std::vector<double>(spec.total()));
  const auto probe = GridFunction::zeros(spec, Domain::Frequency);
  for (std::size_t i = 0; i < spec.total(); ++i) {
    const auto xi = probe.coordinates(i);
    const double r = spec.n == 1 ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]);
    for (int j = 0; j <= jmax; ++j) bank.filters[static_cast<std::size_t>(j)][i] = lp_filter(j, r);
  }
  return bank;
}

GridFunction lp_project(const GridFunction& f, const FilterBank& bank, int j) {
  if (j < 0 || j > bank.jmax) throw std::invalid_argument("Littlewood-Paley index out of range");
  if (!(f.spec == bank.spec)) throw std::invalid_argument("filter bank built for a different grid");
  auto fh = to_frequency(f);
  const auto& psi = bank.filters[static_cast<std::size_t>(j)];
  for (std::size_t i = 0; i < fh.values.size(); ++i) fh.values[i] *= psi[i];
  return f.domain == Domain::Space ? inverse_fourier(fh) : fh;
}

double partition_bump(double x) { return plateau(std::abs(x), 0.25, 0.75); }

std::vector<PartitionPiece> uniform_partition(const GridSpec& spec) {
  std::vector<PartitionPiece> pieces;
  const int lo = static_cast<int>(std::floor(-spec.extent / 2 - 0.75));
  const int hi = static_cast<int>(std::ceil(spec.extent / 2 + 0.75));
  auto make_piece = [&](int k1, int k2) {
    PartitionPiece p;
    p.k = {k1, k2};
    p.psi = GridFunction::sample_space(spec, [&](const std::array<double, 2>& x) {
      double v = partition_bump(x[0] - k1);
      if (spec.n == 2) v *= partition_bump(x[1] - k2);
      return Complex(v, 0.0);
    });
    bool any = false;
    for (const auto& v : p.psi.values) any = any || v != Complex(0.0);
    if (any) pieces.push_back(std::move(p));
  };
  for (int k1 = lo; k1 <= hi; ++k1) {
    if (spec.n == 1) {
      make_piece(k1, 0);
    } else {
      for (int k2 = lo; k2 <= hi; ++k2) make_piece(k1, k2);
    }
  }
  return pieces;
}

namespace {

// Mass fraction of v outside the centered box of half-width `half` (in
// coordinates of the given domain).
double mass_outside(const GridFunction& g, double half) {
  std::vector<double> out(g.values.size(), 0.0);
  std::vector<double> all(g.values.size(), 0.0);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const auto c = g.coordinates(i);
    const double m = std::norm(g.values[i]);
    all[i] = m;
    const bool in = std::abs(c[0]) < half && (g.spec.n == 1 || std::abs(c[1]) < half);
    if (!in) out[i] = m;
  }
  const double total = pairwise_sum(all);
  return total == 0.0 ? 0.0 : pairwise_sum(out) / total;
}

// Index in the source grid of the point lambda * (point of index i), for
// lambda = 2^k with k > 0 on an axis where coordinates are (i - M/2) h.
long dyadic_source_index(long i, long factor, long M) { return factor * i - (factor - 1) * (M / 2); }

GridFunction dyadic_resample(const GridFunction& g, long factor, double scale) {
  const long M = g.spec.samples;
  auto out = GridFunction::zeros(g.spec, g.domain);
  auto src = [&](long i) { return dyadic_source_index(i, factor, M); };
  if (g.spec.n == 1) {
    for (long i = 0; i < M; ++i) {
      const long s = src(i);
      if (s >= 0 && s < M) out.values[static_cast<std::size_t>(i)] = scale * g.values[static_cast<std::size_t>(s)];
    }
    return out;
  }
  for (long i = 0; i < M; ++i) {
    const long s1 = src(i);
    if (s1 < 0 || s1 >= M) continue;
    for (long k = 0; k < M; ++k) {
      const long s2 = src(k);
      if (s2 < 0 || s2 >= M) continue;
      out.values[static_cast<std::size_t>(i * M + k)] = scale * g.values[static_cast<std::size_t>(s1 * M + s2)];
    }
  }
  return out;
}

// Keys cubic convolution kernel (a = -1/2).
double cubic_kernel(double t) {
  t = std::abs(t);
  if (t < 1) return (1.5 * t - 2.5) * t * t + 1;
  if (t < 2) return ((-0.5 * t + 2.5) * t - 4) * t + 2;
  return 0.0;
}

}  // namespace

GridFunction dilate(const GridFunction& f_in, double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw std::invalid_argument("dilation factor must be positive");
  const auto& spec = f_in.spec;
  const int n = spec.n;
  if (lambda == 1.0) return f_in;
  const auto f = to_space(f_in);
  const auto fh = fourier(f);

  // Resolvability: lambda < 1 spreads f by 1/lambda in space, lambda > 1
  // spreads fhat by lambda in frequency.
  if (lambda < 1) {
    if (mass_outside(f, spec.extent / 2 * lambda) > 1e-6) {
      throw std::invalid_argument("dilation by " + std::to_string(lambda) + " pushes mass off the grid");
    }
  } else {
    const double band = spec.samples * spec.dxi() / 2;
    if (mass_outside(fh, band / lambda) > 1e-6) {
      throw std::invalid_argument("dilation by " + std::to_string(lambda) + " aliases past the grid band");
    }
  }

  int k = 0;
  const double m = std::frexp(lambda, &k);
  if (m == 0.5) {
    const int e = k - 1;  // lambda = 2^e
    if (e > 0) {
      const long factor = 1L << e;
      auto out = dyadic_resample(f, factor, std::pow(lambda, n));
      return f_in.domain == Domain::Space ? out : fourier(out);
    }
    const long factor = 1L << (-e);
    auto out = dyadic_resample(fh, factor, 1.0);
    return f_in.domain == Domain::Frequency ? out : inverse_fourier(out);
  }

  // General lambda: transform of the 4x zero-padded function (exact samples
  // of fhat at spacing dxi/4), then cubic convolution at xi/lambda.
  constexpr int over = 4;
  const auto big = GridSpec::make(n, spec.extent * over, spec.samples * over);
  auto padded = GridFunction::zeros(big, Domain::Space);
  const long M = spec.samples;
  const long MB = big.samples;
  const long off = (MB - M) / 2;
  if (n == 1) {
    for (long i = 0; i < M; ++i) padded.values[static_cast<std::size_t>(i + off)] = f.values[static_cast<std::size_t>(i)];
  } else {
    for (long i = 0; i < M; ++i) {
      for (long j = 0; j < M; ++j) {
        padded.values[static_cast<std::size_t>((i + off) * MB + j + off)] = f.values[static_cast<std::size_t>(i * M + j)];
      }
    }
  }
  const auto ph = fourier(padded);
  const double h = big.dxi();
  auto fine = [&](long a, long c) -> Complex {
    if (a < 0 || a >= MB || c < 0 || c >= MB) return Complex(0.0);
    return ph.values[static_cast<std::size_t>(n == 1 ? a : a * MB + c)];
  };
  auto interp = [&](double x0, double x1) -> Complex {
    const double u0 = x0 / h + static_cast<double>(MB / 2);
    const long b0 = static_cast<long>(std::floor(u0));
    Complex acc(0.0);
    if (n == 1) {
      for (long a = b0 - 1; a <= b0 + 2; ++a) acc += cubic_kernel(u0 - static_cast<double>(a)) * fine(a, 0);
      return acc;
    }
    const double u1 = x1 / h + static_cast<double>(MB / 2);
    const long b1 = static_cast<long>(std::floor(u1));
    for (long a = b0 - 1; a <= b0 + 2; ++a) {
      const double ka = cubic_kernel(u0 - static_cast<double>(a));
      if (ka == 0.0) continue;
      for (long c = b1 - 1; c <= b1 + 2; ++c) acc += ka * cubic_kernel(u1 - static_cast<double>(c)) * fine(a, c);
    }
    return acc;
  };
  auto out = GridFunction::zeros(spec, Domain::Frequency);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const auto xi = out.coordinates(i);
    out.values[i] = interp(xi[0] / lambda, xi[1] / lambda);
  }
  return f_in.domain == Domain::Frequency ? out : inverse_fourier(out);
}

}  // namespace amalgam
