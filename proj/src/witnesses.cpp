#include "amalgam/witnesses.hpp"

#include "amalgam/rational.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

namespace amalgam {

namespace {

constexpr double kPi = std::numbers::pi;

double radius(const std::array<double, 2>& xi, int n) {
  return n == 1 ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]);
}

// Largest |xi| per axis that the grid represents without wrap-around.
double band_edge(const GridSpec& spec) { return spec.samples * spec.dxi() / 2; }

double bump_profile(double u) {
  const double a = std::abs(u);
  if (a >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - a * a));
}

}  // namespace

double dyadic_profile_hat(double r) {
  r = std::abs(r);
  if (r <= 7.0 / 8.0) return smooth_step((r - 0.75) / (7.0 / 8.0 - 0.75));
  return smooth_step((4.0 / 3.0 - r) / (4.0 / 3.0 - 8.0 / 7.0));
}

double low_profile_hat(double r) { return plateau(std::abs(r), 0.5, 1.0); }

double lattice_profile_hat(double r) { return bump_profile(r / kLatticeRadius); }

DyadicProfile make_dyadic_profile(const GridSpec& spec) {
  if (band_edge(spec) <= 4.0 / 3.0) throw std::invalid_argument("grid band too small for the dyadic profile");
  const int n = spec.n;
  auto hat = GridFunction::sample_frequency(
      spec, [n](const std::array<double, 2>& xi) { return Complex(dyadic_profile_hat(radius(xi, n))); });
  return {spec, inverse_fourier(hat)};
}

GridFunction make_low_profile(const GridSpec& spec) {
  if (band_edge(spec) <= 1.0) throw std::invalid_argument("grid band too small for the low profile");
  const int n = spec.n;
  auto hat = GridFunction::sample_frequency(
      spec, [n](const std::array<double, 2>& xi) { return Complex(low_profile_hat(radius(xi, n))); });
  auto h = inverse_fourier(hat);
  require_domain_hygiene(h, "low profile");
  return h;
}

GridFunction make_h_eps(const GridFunction& profile_low, double eps) {
  auto h = eps == 1.0 ? to_space(profile_low) : dilate(profile_low, eps);
  require_domain_hygiene(h, "h_eps");
  return h;
}

GridFunction make_h_j(const DyadicProfile& profile, int j) {
  if (j < 0) throw std::invalid_argument("h_j needs j >= 0");
  const double lambda = std::ldexp(1.0, j);
  if (lambda * 4.0 / 3.0 >= band_edge(profile.spec)) {
    throw std::invalid_argument("h_j aliases: shell 2^j * 4/3 reaches the band edge");
  }
  const int n = profile.spec.n;
  auto hat = GridFunction::sample_frequency(profile.spec, [n, lambda](const std::array<double, 2>& xi) {
    return Complex(dyadic_profile_hat(radius(xi, n) / lambda));
  });
  auto h = inverse_fourier(hat);
  require_domain_hygiene(h, "h_j");
  return h;
}

GridFunction make_F_N(const WeightedSeq& a, double N, const DyadicProfile& profile) {
  if (a.kind != SeqKind::Dyadic) throw std::invalid_argument("F_N needs a dyadic sequence");
  if (!(N > 0.0)) throw std::invalid_argument("separation N must be positive");
  const auto& spec = profile.spec;
  long jlo = 0, jhi = -1;
  for (const auto& e : a.entries) {
    if (e.value == Complex(0.0)) continue;
    if (e.index[0] < 0) throw std::invalid_argument("dyadic index must be >= 0");
    if (std::ldexp(1.0, static_cast<int>(e.index[0])) * 4.0 / 3.0 >= band_edge(spec)) {
      throw std::invalid_argument("F_N shell beyond the grid band");
    }
    if (jhi < jlo) jlo = jhi = e.index[0];
    jlo = std::min(jlo, e.index[0]);
    jhi = std::max(jhi, e.index[0]);
  }
  if (jhi < jlo) return GridFunction::zeros(spec);
  const double shift = N * static_cast<double>(jlo + jhi) / 2;
  if (N * static_cast<double>(jhi - jlo) / 2 > spec.extent / 4) {
    throw std::domain_error("F_N translates do not fit in [-L/4, L/4]");
  }
  const int n = spec.n;
  auto hat = GridFunction::sample_frequency(spec, [&](const std::array<double, 2>& xi) {
    const double r = radius(xi, n);
    Complex sum(0.0);
    for (const auto& e : a.entries) {
      if (e.value == Complex(0.0)) continue;
      const double amp = dyadic_profile_hat(r / std::ldexp(1.0, static_cast<int>(e.index[0])));
      if (amp == 0.0) continue;
      const double x0 = N * static_cast<double>(e.index[0]) - shift;
      sum += e.value * amp * std::polar(1.0, -2 * kPi * x0 * xi[0]);
    }
    return sum;
  });
  auto f = inverse_fourier(hat);
  require_domain_hygiene(f, "F_N");
  return f;
}

LatticeProfile make_lattice_profile(const GridSpec& spec) {
  if (band_edge(spec) <= kLatticeRadius) throw std::invalid_argument("grid band too small");
  const int n = spec.n;
  auto hat = GridFunction::sample_frequency(
      spec, [n](const std::array<double, 2>& xi) { return Complex(lattice_profile_hat(radius(xi, n))); });
  LatticeProfile g{spec, inverse_fourier(hat)};
  require_domain_hygiene(g.g, "lattice profile");
  return g;
}

std::vector<std::array<long, 2>> gamma_set(int j, int n) {
  if (j < 0 || j > 40) throw std::invalid_argument("shell index out of range");
  if (n != 1 && n != 2) throw std::invalid_argument("n must be 1 or 2");
  const Rational r(1, 16);
  const Rational pow2(1LL << j);
  const Rational upper = Rational(4, 3) * pow2 - r;
  const Rational upper_sq = upper * upper;
  Rational lower_sq(-1);
  if (j >= 1) {
    const Rational lower = Rational(3, 4) * pow2 + r;
    lower_sq = lower * lower;
  }
  const long kmax = static_cast<long>(std::ceil(to_double(upper)));
  std::vector<std::array<long, 2>> out;
  for (long k0 = -kmax; k0 <= kmax; ++k0) {
    const long lo1 = n == 2 ? -kmax : 0;
    const long hi1 = n == 2 ? kmax : 0;
    for (long k1 = lo1; k1 <= hi1; ++k1) {
      const Rational norm_sq(k0 * k0 + k1 * k1);
      if (norm_sq < upper_sq && norm_sq > lower_sq) out.push_back({k0, k1});
    }
  }
  return out;
}

LatticeSum make_G_N(const WeightedSeq& b, double N, const LatticeProfile& g, const FilterBank& bank) {
  if (b.kind != SeqKind::Dyadic) throw std::invalid_argument("G_N needs a dyadic sequence");
  if (!(bank.spec == g.spec)) throw std::invalid_argument("filter bank and profile grids differ");
  const auto& spec = g.spec;
  const int n = spec.n;
  LatticeSum out;
  std::map<std::array<long, 2>, Complex> coeff;
  long jtop = -1;
  for (const auto& e : b.entries) jtop = std::max(jtop, e.index[0]);
  out.gamma_sizes.assign(static_cast<std::size_t>(jtop + 1), 0);
  for (const auto& e : b.entries) {
    const long j = e.index[0];
    if (j < 0) throw std::invalid_argument("dyadic index must be >= 0");
    const auto gamma = gamma_set(static_cast<int>(j), n);
    out.gamma_sizes[static_cast<std::size_t>(j)] = gamma.size();
    if (e.value == Complex(0.0)) continue;
    if (j > bank.jmax) throw std::invalid_argument("G_N shell beyond the filter bank");
    for (const auto& k : gamma) {
      const double reach = std::max(std::abs(k[0]), std::abs(k[1])) + kLatticeRadius;
      if (reach >= band_edge(spec)) throw std::invalid_argument("G_N frequency beyond the grid band");
      if (N * std::max(std::abs(k[0]), std::abs(k[1])) > spec.extent / 4) {
        throw std::domain_error("G_N translates do not fit in [-L/4, L/4]");
      }
      coeff[k] += e.value;
    }
  }
  auto hat = GridFunction::sample_frequency(spec, [&](const std::array<double, 2>& xi) {
    const std::array<long, 2> k{std::lround(xi[0]), n == 2 ? std::lround(xi[1]) : 0L};
    const auto it = coeff.find(k);
    if (it == coeff.end()) return Complex(0.0);
    const std::array<double, 2> d{xi[0] - static_cast<double>(k[0]), xi[1] - static_cast<double>(k[1])};
    const double amp = lattice_profile_hat(radius(d, n));
    if (amp == 0.0) return Complex(0.0);
    const double phase = -2 * kPi * N * (static_cast<double>(k[0]) * xi[0] + static_cast<double>(k[1]) * xi[1]);
    return it->second * amp * std::polar(1.0, phase);
  });
  out.f = inverse_fourier(hat);
  require_domain_hygiene(out.f, "G_N");
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

int SignVector::operator()(const std::array<long, 2>& k) const {
  const auto h = derive_seed(derive_seed(seed, static_cast<std::uint64_t>(k[0])), static_cast<std::uint64_t>(k[1]));
  return (h >> 63) ? 1 : -1;
}

GridFunction make_khinchin(const WeightedSeq& a, const SignVector& omega, const LatticeProfile& g) {
  if (a.kind != SeqKind::Uniform) throw std::invalid_argument("Khinchin sums need a uniform sequence");
  const auto& spec = g.spec;
  for (const auto& e : a.entries) {
    const double reach = std::max(std::abs(e.index[0]), std::abs(e.index[1])) + kLatticeRadius;
    if (reach >= band_edge(spec)) throw std::invalid_argument("Khinchin index beyond the grid band");
  }
  auto out = to_space(g.g);
  std::vector<Complex> c(a.size());
  for (std::size_t t = 0; t < a.size(); ++t) c[t] = static_cast<double>(omega(a.entries[t].index)) * a.entries[t].value;
  for (std::size_t idx = 0; idx < out.values.size(); ++idx) {
    const auto x = out.coordinates(idx);
    Complex P(0.0);
    for (std::size_t t = 0; t < a.size(); ++t) {
      const auto& k = a.entries[t].index;
      P += c[t] * std::polar(1.0, 2 * kPi * (static_cast<double>(k[0]) * x[0] + static_cast<double>(k[1]) * x[1]));
    }
    out.values[idx] *= P;
  }
  return out;
}

long atom_moment_order(const ReciprocalExponent& p, int n) {
  const Rational v = Rational(n) * (p.reciprocal() - Rational(1));
  long long q = v.numerator() / v.denominator();
  if (v.numerator() < 0 && v.numerator() % v.denominator() != 0) --q;
  return static_cast<long>(q);
}

Atom make_atom(AtomKind kind, const ReciprocalExponent& p, double cube_side, std::uint64_t seed,
               const GridSpec& spec, std::array<double, 2> center) {
  const int n = spec.n;
  if (!(cube_side > 0.0)) throw std::invalid_argument("cube side must be positive");
  const double volume = std::pow(cube_side, n);
  if (kind == AtomKind::Small && !(volume < 1.0)) throw std::invalid_argument("small atom needs |Q| < 1");
  if (kind == AtomKind::Big && !(volume >= 1.0)) throw std::invalid_argument("big atom needs |Q| >= 1");
  for (int i = 0; i < n; ++i) {
    if (std::abs(center[i]) + cube_side / 2 > spec.extent / 4) {
      throw std::domain_error("atom cube does not fit in [-L/4, L/4]");
    }
  }
  const long order = kind == AtomKind::Small ? atom_moment_order(p, n) : -1;
  const long per_axis = static_cast<long>(std::floor(cube_side / spec.dx()));
  if (per_axis < 4 * (std::max(order, 0L) + 2)) {
    throw std::invalid_argument("cube holds too few samples for the atom");
  }

  // Random trigonometric profile times a bump on the cube, in cube
  // coordinates u in (-1, 1)^n.
  std::mt19937_64 rng(derive_seed(seed, 0xA7));
  std::normal_distribution<double> coef(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  struct Term { int m0, m1; double c, theta; };
  std::vector<Term> terms;
  const int mmax = n == 1 ? 3 : 2;
  for (int m0 = 0; m0 <= mmax; ++m0) {
    for (int m1 = 0; m1 <= (n == 2 ? mmax : 0); ++m1) {
      const double c = coef(rng);
      terms.push_back({m0, m1, c, angle(rng)});
    }
  }
  auto f = GridFunction::zeros(spec);
  std::vector<std::size_t> support;
  std::vector<std::array<double, 2>> us;
  std::vector<double> bumps;
  for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
    const auto x = f.coordinates(idx);
    std::array<double, 2> u{2 * (x[0] - center[0]) / cube_side, n == 2 ? 2 * (x[1] - center[1]) / cube_side : 0.0};
    double b = bump_profile(u[0]);
    if (n == 2) b *= bump_profile(u[1]);
    if (b == 0.0) continue;
    double r = 0.0;
    for (const auto& t : terms) r += t.c * std::cos(kPi * (t.m0 * u[0] + t.m1 * u[1]) + t.theta);
    f.values[idx] = b * r;
    support.push_back(idx);
    us.push_back(u);
    bumps.push_back(b);
  }

  if (order >= 0) {
    std::vector<std::array<int, 2>> monomials;
    for (int d = 0; d <= order; ++d) {
      for (int g0 = d; g0 >= 0; --g0) {
        const int g1 = d - g0;
        if (n == 1 && g1 != 0) continue;
        monomials.push_back({g0, g1});
      }
    }
    const auto K = static_cast<Eigen::Index>(monomials.size());
    auto mono = [&](std::size_t t, const std::array<int, 2>& g) {
      return std::pow(us[t][0], g[0]) * (n == 2 ? std::pow(us[t][1], g[1]) : 1.0);
    };
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(K, K);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(K);
    for (std::size_t t = 0; t < support.size(); ++t) {
      Eigen::VectorXd m(K);
      for (Eigen::Index i = 0; i < K; ++i) m(i) = mono(t, monomials[static_cast<std::size_t>(i)]);
      G.noalias() += bumps[t] * m * m.transpose();
      rhs += f.values[support[t]].real() * m;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(G);
    if (qr.rank() < K) throw std::invalid_argument("degenerate moment system for the atom cube");
    const Eigen::VectorXd c = qr.solve(rhs);
    for (std::size_t t = 0; t < support.size(); ++t) {
      double corr = 0.0;
      for (Eigen::Index i = 0; i < K; ++i) corr += c(i) * mono(t, monomials[static_cast<std::size_t>(i)]);
      f.values[support[t]] -= bumps[t] * corr;
    }
  }

  double top = 0.0;
  for (const auto& v : f.values) top = std::max(top, std::abs(v));
  if (top == 0.0) throw std::invalid_argument("atom profile vanished");
  const double target = std::pow(volume, -p.reciprocal_value());
  f *= Complex(target / top);
  require_domain_hygiene(f, "atom");
  return Atom{std::move(f), center, cube_side, kind, p};
}

double atom_moment(const Atom& atom, const std::array<int, 2>& gamma) {
  const auto& f = atom.values;
  std::vector<double> terms(f.values.size());
  for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
    const auto x = f.coordinates(idx);
    double m = std::pow(x[0], gamma[0]);
    if (f.spec.n == 2) m *= std::pow(x[1], gamma[1]);
    terms[idx] = m * f.values[idx].real();
  }
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum * f.spec.cell_space();
}

WeightedSeq make_truncated_seq(const SeqGenerator& gen, std::size_t size, SeqKind kind, int n) {
  if (n != 1 && n != 2) throw std::invalid_argument("n must be 1 or 2");
  WeightedSeq a;
  a.kind = kind;
  a.n = kind == SeqKind::Dyadic ? 1 : n;
  std::mt19937_64 rng(derive_seed(gen.seed, 0x5E9));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto value = [&](const std::array<long, 2>& k) -> double {
    switch (gen.shape) {
      case SeqShape::Spike:
        return (k[0] == 0 && k[1] == 0) ? 1.0 : 0.0;
      case SeqShape::Flat:
        return 1.0;
      case SeqShape::Power:
        if (kind == SeqKind::Dyadic) return std::exp2(-static_cast<double>(k[0]) * to_double(gen.theta));
        return std::pow(japanese_bracket({static_cast<double>(k[0]), static_cast<double>(k[1])}, a.n),
                        -to_double(gen.theta));
      case SeqShape::Random:
        return 1.0 - unit(rng);
    }
    return 0.0;
  };
  const long N = static_cast<long>(size);
  if (kind == SeqKind::Dyadic) {
    for (long j = 0; j < N; ++j) a.entries.push_back({{j, 0}, Complex(value({j, 0}))});
    return a;
  }
  const long lo = -((N - 1) / 2);
  for (long k0 = lo; k0 < lo + N; ++k0) {
    if (a.n == 1) {
      a.entries.push_back({{k0, 0}, Complex(value({k0, 0}))});
      continue;
    }
    for (long k1 = lo; k1 < lo + N; ++k1) a.entries.push_back({{k0, k1}, Complex(value({k0, k1}))});
  }
  return a;
}

std::string to_string(const SeqGenerator& gen) {
  switch (gen.shape) {
    case SeqShape::Spike: return "spike";
    case SeqShape::Flat: return "flat";
    case SeqShape::Power: return "power:" + to_string(gen.theta);
    case SeqShape::Random: return "random:" + std::to_string(gen.seed);
  }
  return "?";
}

SeqGenerator parse_seq_generator(const std::string& text) {
  SeqGenerator g;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "spike") {
    g.shape = SeqShape::Spike;
  } else if (head == "flat") {
    g.shape = SeqShape::Flat;
  } else if (head == "power") {
    g.shape = SeqShape::Power;
    if (arg.empty()) throw std::invalid_argument("power needs an exponent, e.g. power:1/2");
    g.theta = parse_rational(arg);
  } else if (head == "random") {
    g.shape = SeqShape::Random;
    g.seed = arg.empty() ? 0 : std::stoull(arg);
  } else {
    throw std::invalid_argument("unknown sequence generator '" + text + "'");
  }
  return g;
}

}  // namespace amalgam
