#include "amalgam/norms.hpp"

#include "amalgam/summation.hpp"
#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace amalgam {

namespace {

constexpr double kPi = std::numbers::pi;

double max_of(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

}  // namespace

double lp_sum(std::span<const double> magnitudes, const ReciprocalExponent& p, double cell) {
  const double top = max_of(magnitudes);
  if (p.is_infinite() || top == 0.0) return top;
  const double pe = p.p_value();
  std::vector<double> terms(magnitudes.size());
  for (std::size_t i = 0; i < magnitudes.size(); ++i) terms[i] = std::pow(magnitudes[i] / top, pe);
  return top * std::pow(cell * pairwise_sum(terms), 1.0 / pe);
}

double japanese_bracket(const std::array<double, 2>& x, int n) {
  const double r2 = x[0] * x[0] + (n == 2 ? x[1] * x[1] : 0.0);
  return std::sqrt(1.0 + r2);
}

MixedNormSpec MixedNormSpec::wiener(const ReciprocalExponent& p, const ReciprocalExponent& q, double s) {
  MixedNormSpec m;
  m.inner_exponent = q;
  m.outer_exponent = p;
  m.weight_s = s;
  m.order = MixedOrder::FreqInnerTimeOuter;
  return m;
}

MixedNormSpec MixedNormSpec::modulation(const ReciprocalExponent& p, const ReciprocalExponent& q,
                                        double s) {
  MixedNormSpec m;
  m.inner_exponent = p;
  m.outer_exponent = q;
  m.weight_s = s;
  m.order = MixedOrder::TimeInnerFreqOuter;
  return m;
}

double mixed_norm(const TfMatrix& V, const MixedNormSpec& spec) {
  const int n = V.grid.n;
  std::vector<double> weight(V.cols, 1.0);
  if (spec.weight_s != 0.0) {
    for (std::size_t c = 0; c < V.cols; ++c) {
      auto xi = V.frequency(c);
      xi[0] = (xi[0] + spec.frequency_offset[0]) * spec.frequency_scale;
      xi[1] = (xi[1] + spec.frequency_offset[1]) * spec.frequency_scale;
      weight[c] = std::pow(japanese_bracket(xi, n), spec.weight_s);
    }
  }
  const double a = V.time_cell();
  const double b = V.freq_cell();
  if (spec.order == MixedOrder::FreqInnerTimeOuter) {
    std::vector<double> row_values(V.rows);
    parallel_for(V.rows, [&](std::size_t r) {
      std::vector<double> m(V.cols);
      for (std::size_t c = 0; c < V.cols; ++c) m[c] = std::abs(V.at(r, c)) * weight[c];
      row_values[r] = lp_sum(m, spec.inner_exponent, b);
    });
    return lp_sum(row_values, spec.outer_exponent, a);
  }
  std::vector<double> col_values(V.cols);
  parallel_for(V.cols, [&](std::size_t c) {
    std::vector<double> m(V.rows);
    for (std::size_t r = 0; r < V.rows; ++r) m[r] = std::abs(V.at(r, c));
    col_values[c] = lp_sum(m, spec.inner_exponent, a) * weight[c];
  });
  return lp_sum(col_values, spec.outer_exponent, b);
}

TfLattice StftOptions::lattice_for(const GridSpec& spec) const {
  int step = time_step;
  if (step <= 0) {
    const double target = window.width / 8 / spec.dx();
    step = 1;
    while (step * 2 <= target && step * 2 <= spec.samples) step *= 2;
  }
  return periodic ? TfLattice::covering(spec, window, step) : TfLattice::zero_extended(spec, window, step);
}

TfMatrix default_stft(const GridFunction& f, const StftOptions& options) {
  return stft(f, options.window, options.lattice_for(f.spec));
}

double wiener_norm(const GridFunction& f, const ReciprocalExponent& p, const ReciprocalExponent& q,
                   double s, const StftOptions& options) {
  return mixed_norm(default_stft(f, options), MixedNormSpec::wiener(p, q, s));
}

double wiener_norm_dilated(const GridFunction& f, double lambda, const ReciprocalExponent& p,
                           const ReciprocalExponent& q, double s, const Window& window) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilation factor must be positive");
  const auto g = to_space(f);
  const Window wide{window.kind, window.width * lambda};
  const long step = std::max(1L, std::lround(wide.width / 8 / g.spec.dx()));
  const auto V = stft(g, wide, TfLattice::full_rows(g.spec, wide, step));
  auto spec = MixedNormSpec::wiener(p, q, s);
  spec.frequency_scale = lambda;
  const double power = g.spec.n * (q.reciprocal_value() - p.reciprocal_value());
  return std::pow(lambda, power) * mixed_norm(V, spec);
}

double modulation_norm(const GridFunction& f, const ReciprocalExponent& p,
                       const ReciprocalExponent& q, double s, const StftOptions& options) {
  return mixed_norm(default_stft(f, options), MixedNormSpec::modulation(p, q, s));
}

double lebesgue_norm(const GridFunction& f, const ReciprocalExponent& p, double s) {
  std::vector<double> m(f.values.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = std::abs(f.values[i]);
    if (s != 0.0) m[i] *= std::pow(japanese_bracket(f.coordinates(i), f.spec.n), s);
  }
  const double cell = f.domain == Domain::Space ? f.spec.cell_space() : f.spec.cell_frequency();
  return lp_sum(m, p, cell);
}

namespace {

double high_shell_fraction(const GridFunction& fh, int jmax) {
  // upper edge of shell jmax - 1; beyond it only the top shell is nonzero
  const double cutoff = std::ldexp(1.5, jmax - 1);
  std::vector<double> hi(fh.values.size(), 0.0);
  std::vector<double> all(fh.values.size(), 0.0);
  for (std::size_t i = 0; i < fh.values.size(); ++i) {
    const auto xi = fh.coordinates(i);
    const double r = fh.spec.n == 1 ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]);
    all[i] = std::norm(fh.values[i]);
    if (r >= cutoff) hi[i] = all[i];
  }
  const double total = pairwise_sum(all);
  return total == 0.0 ? 0.0 : pairwise_sum(hi) / total;
}

std::vector<GridFunction> blocks(const GridFunction& f, const FilterBank& bank,
                                 NormDiagnostics* diag) {
  const auto fh = to_frequency(f);
  if (diag) {
    diag->high_shell_mass = high_shell_fraction(fh, bank.jmax);
    diag->warning = diag->high_shell_mass >= 1e-3;
  }
  std::vector<GridFunction> out(static_cast<std::size_t>(bank.jmax) + 1);
  parallel_for(out.size(), [&](std::size_t j) { out[j] = lp_project(fh, bank, static_cast<int>(j)); });
  for (auto& b : out) b = inverse_fourier(b);
  return out;
}

}  // namespace

double besov_norm(const GridFunction& f, const FilterBank& bank, const ReciprocalExponent& p,
                  const ReciprocalExponent& q, double s, NormDiagnostics* diag) {
  const auto parts = blocks(f, bank, diag);
  std::vector<double> terms(parts.size());
  for (std::size_t j = 0; j < parts.size(); ++j) {
    terms[j] = std::exp2(static_cast<double>(j) * s) * lebesgue_norm(parts[j], p);
  }
  return lp_sum(terms, q);
}

double triebel_norm(const GridFunction& f, const FilterBank& bank, const ReciprocalExponent& p,
                    const ReciprocalExponent& q, double s, NormDiagnostics* diag) {
  if (p.is_infinite()) throw DomainError("Triebel-Lizorkin norm needs p < inf");
  const auto parts = blocks(f, bank, diag);
  std::vector<double> pointwise(f.spec.total());
  parallel_for(pointwise.size(), [&](std::size_t i) {
    std::vector<double> m(parts.size());
    for (std::size_t j = 0; j < parts.size(); ++j) {
      m[j] = std::exp2(static_cast<double>(j) * s) * std::abs(parts[j].values[i]);
    }
    pointwise[i] = lp_sum(m, q);
  });
  return lp_sum(pointwise, p, f.spec.cell_space());
}

GridFunction hardy_mollify(const GridFunction& f, double t) {
  auto fh = to_frequency(f);
  for (std::size_t i = 0; i < fh.values.size(); ++i) {
    const auto xi = fh.coordinates(i);
    const double r2 = xi[0] * xi[0] + (f.spec.n == 2 ? xi[1] * xi[1] : 0.0);
    fh.values[i] *= std::exp(-kPi * t * t * r2);
  }
  return inverse_fourier(fh);
}

double local_hardy_norm(const GridFunction& f, const ReciprocalExponent& p) {
  if (p.is_infinite()) throw DomainError("local Hardy norm needs p < inf");
  std::vector<GridFunction> scales(kHardyScales + 1);
  parallel_for(scales.size(), [&](std::size_t m) {
    scales[m] = hardy_mollify(f, std::ldexp(1.0, -static_cast<int>(m)));
  });
  std::vector<double> sup(f.spec.total(), 0.0);
  for (const auto& g : scales) {
    for (std::size_t i = 0; i < sup.size(); ++i) sup[i] = std::max(sup[i], std::abs(g.values[i]));
  }
  return lp_sum(sup, p, f.spec.cell_space());
}

double seq_weight(const WeightedSeq& a, const SeqEntry& e, double s) {
  if (s == 0.0) return 1.0;
  if (a.kind == SeqKind::Dyadic) return std::exp2(static_cast<double>(e.index[0]) * s);
  const std::array<double, 2> k{static_cast<double>(e.index[0]), static_cast<double>(e.index[1])};
  return std::pow(japanese_bracket(k, a.n), s);
}

double seq_norm(const WeightedSeq& a, const ReciprocalExponent& q, double s) {
  std::vector<double> m(a.entries.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::abs(a.entries[i].value) * seq_weight(a, a.entries[i], s);
  return lp_sum(m, q);
}

double seq_norm_log(SeqKind kind, int n, std::span<const std::array<long, 2>> indices,
                    std::span<const double> log_abs, const ReciprocalExponent& q, double s) {
  if (indices.size() != log_abs.size()) throw std::invalid_argument("index/value length mismatch");
  std::vector<double> lw(log_abs.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lw.size(); ++i) {
    double w = 0.0;
    if (kind == SeqKind::Dyadic) {
      w = static_cast<double>(indices[i][0]) * s * std::numbers::ln2;
    } else {
      const std::array<double, 2> k{static_cast<double>(indices[i][0]), static_cast<double>(indices[i][1])};
      w = s * std::log(japanese_bracket(k, n));
    }
    lw[i] = log_abs[i] + w;
    top = std::max(top, lw[i]);
  }
  if (q.is_infinite() || !std::isfinite(top)) return top;
  const double qe = q.p_value();
  std::vector<double> terms(lw.size());
  for (std::size_t i = 0; i < lw.size(); ++i) terms[i] = std::exp(qe * (lw[i] - top));
  return top + std::log(pairwise_sum(terms)) / qe;
}

double fourier_series_norm(const WeightedSeq& a, const ReciprocalExponent& p) {
  if (a.kind != SeqKind::Uniform) throw std::invalid_argument("Fourier series needs a Z^n-indexed sequence");
  const int n = a.n;
  if (n != 1 && n != 2) throw std::invalid_argument("Fourier series supported for n = 1, 2");
  long kmax = 0;
  for (const auto& e : a.entries) {
    kmax = std::max({kmax, std::abs(e.index[0]), n == 2 ? std::abs(e.index[1]) : 0L});
  }
  long P = 64;
  while (P < 8 * (kmax + 1)) P *= 2;
  const std::size_t total = n == 1 ? static_cast<std::size_t>(P) : static_cast<std::size_t>(P * P);
  std::vector<Complex> F(total, Complex(0.0));
  auto wrap = [P](long k) { return ((k % P) + P) % P; };
  for (const auto& e : a.entries) {
    const std::size_t idx = n == 1 ? static_cast<std::size_t>(wrap(e.index[0]))
                                   : static_cast<std::size_t>(wrap(e.index[0]) * P + wrap(e.index[1]));
    F[idx] += e.value;
  }
  detail::fft_inplace(F.data(), std::vector<int>(static_cast<std::size_t>(n), static_cast<int>(P)),
                      detail::FftDirection::Backward);
  std::vector<double> m(total);
  for (std::size_t i = 0; i < total; ++i) m[i] = std::abs(F[i]);
  return lp_sum(m, p, 1.0 / static_cast<double>(total));
}

double space_norm(const GridFunction& f, const SpaceSpec& space, const NormContext& context) {
  const double s = to_double(space.s);
  auto need_bank = [&]() -> const FilterBank& {
    if (!context.bank) throw std::invalid_argument("this norm needs a filter bank");
    return *context.bank;
  };
  switch (space.family) {
    case SpaceFamily::WienerAmalgam: return wiener_norm(f, space.p, space.q, s, context.stft);
    case SpaceFamily::Modulation: return modulation_norm(f, space.p, space.q, s, context.stft);
    case SpaceFamily::Besov: return besov_norm(f, need_bank(), space.p, space.q, s);
    case SpaceFamily::TriebelLizorkin: return triebel_norm(f, need_bank(), space.p, space.q, s);
    case SpaceFamily::LocalHardy: return local_hardy_norm(f, space.p);
    case SpaceFamily::Lebesgue: return lebesgue_norm(to_space(f), space.p, s);
    case SpaceFamily::SeqUniform:
    case SpaceFamily::SeqDyadic:
      break;
  }
  throw std::invalid_argument("sequence spaces have no function norm");
}

double localized_norm(const GridFunction& f_in, const std::vector<PartitionPiece>& partition,
                      const SpaceSpec& inner, const ReciprocalExponent& p_outer,
                      const NormContext& context) {
  if (inner.family != SpaceFamily::WienerAmalgam && inner.family != SpaceFamily::TriebelLizorkin) {
    throw std::invalid_argument("localized norm supports W and F inner spaces");
  }
  const auto f = to_space(f_in);
  std::vector<double> mass(f.values.size());
  for (std::size_t i = 0; i < mass.size(); ++i) mass[i] = std::norm(f.values[i]);
  const double total = pairwise_sum(mass);
  std::vector<double> pieces;
  for (const auto& piece : partition) {
    auto g = f;
    for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] *= piece.psi.values[i];
    for (std::size_t i = 0; i < mass.size(); ++i) mass[i] = std::norm(g.values[i]);
    if (pairwise_sum(mass) <= 1e-28 * total) continue;
    pieces.push_back(space_norm(g, inner, context));
  }
  return lp_sum(pieces, p_outer);
}

}  // namespace amalgam
