#include <doctest.h>

#include "amalgam/experiments.hpp"
#include "support.hpp"

#include <cmath>

using namespace amalgam;
using namespace amalgam::test;

namespace {

std::vector<ProbePoint> ratio_points(const std::vector<double>& ratios) {
  std::vector<ProbePoint> pts;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    pts.push_back({std::ldexp(1.0, static_cast<int>(i)), 1.0, ratios[i], ratios[i]});
  }
  return pts;
}

SpaceSpec space(SpaceFamily f, const char* p, const char* q, Rational s = Rational(0)) {
  return SpaceSpec::make(f, P(p), P(q), s);
}

}  // namespace

TEST_CASE("slope fits") {
  const std::vector<double> x{1, 2, 4, 8, 16};
  std::vector<double> y;
  for (double v : x) y.push_back(5 * std::pow(v, 1.5));
  const auto f = fit_slope(x, y, true);
  CHECK(f.slope == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log2(5.0)).epsilon(1e-12));
  CHECK(f.residual < 1e-12);
  CHECK(f.relative_residual < 1e-12);

  const std::vector<double> j{2, 3, 4, 5};
  const auto g = fit_slope(j, {4, 8, 16, 32}, false);
  CHECK(g.slope == doctest::Approx(1.0));

  const auto flat = fit_slope(x, {3, 3, 3, 3, 3}, true);
  CHECK(flat.slope == doctest::Approx(0.0));
  CHECK(flat.relative_residual == 0.0);
  CHECK(std::isinf(fit_slope(x, {3, 4, 3, 4, 3}, true).relative_residual));
}

TEST_CASE("probe verdict rule") {
  CHECK(probe_verdict(ratio_points({1, 2, 4, 8})) == ProbeVerdict::DivergenceDetected);
  CHECK(probe_verdict(ratio_points({1, 1, 1.01, 0.99})) == ProbeVerdict::ConsistentWithEmbedding);
  CHECK(probe_verdict(ratio_points({1, 0.5, 0.25, 0.125})) == ProbeVerdict::ConsistentWithEmbedding);
  // growth below 2x but rising: neither
  CHECK(probe_verdict(ratio_points({1, 1.3, 1.6, 1.9})) == ProbeVerdict::Inconclusive);
  // large growth with a ragged fit
  CHECK(probe_verdict(ratio_points({1, 40, 1, 3})) == ProbeVerdict::Inconclusive);
  // partial sums of a convergent series: early growth, flat tail
  std::vector<double> partial;
  double acc = 0.0;
  for (int n = 0; n < 6; ++n) {
    for (int j = n == 0 ? 0 : (1 << (n - 1)); j < (1 << n); ++j) acc += std::pow(2.0, -j / 4.0);
    partial.push_back(acc);
  }
  CHECK(partial.back() / partial.front() > 2.0);
  CHECK(probe_verdict(ratio_points(partial)) == ProbeVerdict::Inconclusive);
  SlopeFit fit;
  probe_verdict(ratio_points({1, 2, 4, 8}), &fit);
  CHECK(fit.slope == doctest::Approx(1.0));
}

TEST_CASE("sequence oracle examples") {
  const auto u = seq_embedding_oracle(P("2"), Rational(1), P("4"), Rational(0), SeqKind::Uniform);
  CHECK(u.holds_estimate);
  CHECK(decide_seq_uniform(P("2"), Rational(1), P("4"), Rational(0), 1));

  const auto d = seq_embedding_oracle(P("4"), Rational(0), P("2"), Rational(0), SeqKind::Dyadic);
  CHECK_FALSE(d.holds_estimate);
  CHECK_FALSE(decide_seq_dyadic(P("4"), Rational(0), P("2"), Rational(0)));
  CHECK(d.growth >= kOracleGrowth);
  for (std::size_t i = 1; i < d.ratios.size(); ++i) CHECK(d.ratios[i] >= d.ratios[i - 1] * (1 - 1e-9));
  CHECK(d.witness_sequence.size() == d.truncations.back());

  const auto id = seq_embedding_oracle(P("3"), Rational(1, 2), P("3"), Rational(1, 2), SeqKind::Dyadic);
  CHECK(id.holds_estimate);
  for (double r : id.ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sequence families") {
  SeqFamily f;
  f.kind = SeqKind::Dyadic;
  f.sigma = Rational(1, 2);
  const auto a = f.realize(4);
  REQUIRE(a.size() == 4);
  CHECK(a.entries[2].value.real() == doctest::Approx(0.5));

  f.end_spike = true;
  const auto s = f.realize(8);
  CHECK(seq_norm(s, P("1"), 0.0) == doctest::Approx(1.0));
  CHECK(std::abs(s.entries.back().value) == doctest::Approx(1.0));

  SeqFamily g;
  g.kind = SeqKind::Uniform;
  g.perturb_seed = 5;
  const auto p1 = g.realize(16), p2 = g.realize(16);
  for (std::size_t i = 0; i < p1.size(); ++i) {
    CHECK(p1.entries[i].value == p2.entries[i].value);
    CHECK(std::abs(p1.entries[i].value) >= 0.5 - 1e-12);
    CHECK(std::abs(p1.entries[i].value) <= 2.0 + 1e-12);
  }
  CHECK_FALSE(g.describe().empty());
}

TEST_CASE("scaling probes") {
  const auto c = scaling_probe(FamilyKind::Constant, {1, 2, 4, 8}, space(SpaceFamily::Lebesgue, "2", "2"), Window{},
                               GridSpec::make(1, 32, 1024));
  CHECK(std::abs(c.fit.slope) < 1e-6);

  const auto cfg = default_probe_config(FamilyKind::HEps);
  const auto h = scaling_probe(FamilyKind::HEps, cfg.schedule, space(SpaceFamily::Lebesgue, "2", "2"), cfg.window,
                               cfg.grid);
  REQUIRE(h.expected_slope.has_value());
  CHECK(*h.expected_slope == doctest::Approx(0.5));
  CHECK(std::abs(h.fit.slope - 0.5) < 0.1);
  CHECK(h.verdict == ProbeVerdict::ConsistentWithEmbedding);
  CHECK(h.points.size() == cfg.schedule.size());

  const auto jc = default_probe_config(FamilyKind::HJ);
  const auto j = scaling_probe(FamilyKind::HJ, jc.schedule, space(SpaceFamily::WienerAmalgam, "2", "2"), jc.window,
                               jc.grid);
  CHECK(std::abs(j.fit.slope - 0.5) < 0.1);
}

TEST_CASE("embedding probe: Wiener into Besov on the diagonal stays bounded") {
  auto cfg = default_probe_config(FamilyKind::FN);
  cfg.source = space(SpaceFamily::WienerAmalgam, "2", "2");
  cfg.target = space(SpaceFamily::Besov, "2", "2");
  SeqFamily flat;
  flat.kind = SeqKind::Dyadic;
  cfg.sequence = flat;
  cfg.convergence_check = false;
  const auto r = embedding_probe(cfg);
  CHECK(r.verdict == ProbeVerdict::ConsistentWithEmbedding);
  REQUIRE(r.classifier.has_value());
  CHECK(r.classifier->holds);
  CHECK_FALSE(r.disagreement);
  CHECK(r.points.size() >= 4);
}

TEST_CASE("embedding probe: L2 into W^0_{2,2} has a constant ratio") {
  auto cfg = default_probe_config(FamilyKind::HEps);
  cfg.source = space(SpaceFamily::Lebesgue, "2", "2");
  cfg.target = space(SpaceFamily::WienerAmalgam, "2", "2");
  const auto r = embedding_probe(cfg);
  std::vector<double> ratios;
  for (const auto& p : r.points) ratios.push_back(p.ratio);
  CHECK(spread(ratios) < 1.02);
  CHECK(r.verdict == ProbeVerdict::ConsistentWithEmbedding);
}

TEST_CASE("Khinchin Monte Carlo") {
  const auto g = default_lattice_profile();
  const auto flat16 = make_truncated_seq(parse_seq_generator("flat"), 16, SeqKind::Uniform);
  const auto spike = make_truncated_seq(parse_seq_generator("spike"), 16, SeqKind::Uniform);
  const auto two = khinchin_mc(flat16, P("2"), 1000, 7, g);
  CHECK(std::abs(two.ratio - 1) < 1e-6);

  const auto a = khinchin_mc(flat16, P("1"), 10000, 42, g);
  const auto b = khinchin_mc(spike, P("1"), 10000, 42, g);
  CHECK(std::abs(a.ratio / b.ratio - 1) < 0.15);
  CHECK(a.standard_error > 0.0);
  CHECK(b.standard_error == doctest::Approx(0.0).epsilon(1e-12));

  // homogeneity at p = 4
  const auto flat8 = make_truncated_seq(parse_seq_generator("flat"), 8, SeqKind::Uniform);
  auto scaled = flat8;
  for (auto& e : scaled.entries) e.value *= 3.0;
  const auto r1 = khinchin_mc(flat8, P("4"), 2000, 3, g);
  const auto r3 = khinchin_mc(scaled, P("4"), 2000, 3, g);
  CHECK(std::abs(r3.ratio / r1.ratio - 1) < 0.1);

  // same seed, same answer
  CHECK(khinchin_mc(flat8, P("4"), 2000, 3, g).empirical_mean == r1.empirical_mean);
  CHECK_THROWS(khinchin_mc(flat8, P("4"), 10, 3, g));
}

TEST_CASE("exponent atlas") {
  std::vector<Rational> nodes;
  for (int i = 0; i <= 8; ++i) nodes.emplace_back(i, 4);
  const auto rows = region_atlas("W:B", AtlasMode::AtCritical, Rational(1, 10), nodes, nodes);
  CHECK(rows.size() == 81);
  bool found = false;
  for (const auto& r : rows) {
    if (r.u_p == Rational(1, 2) && r.u_q == Rational(1, 2)) {
      found = true;
      CHECK(r.holds);
      CHECK(r.critical_s == Rational(0));
      const auto v = decide_W_subset_B(P("2"), P("2"), Rational(0), 1);
      CHECK(v.holds == r.holds);
      CHECK(v.strict_required == r.strict_required);
    }
  }
  CHECK(found);

  const std::vector<Rational> origin{Rational(0)};
  const auto below = region_atlas("W:B", AtlasMode::Below, Rational(1, 10), origin, origin);
  REQUIRE(below.size() == 1);
  CHECK(below[0].critical_s == Rational(1));
  CHECK(below[0].s == Rational(9, 10));
  CHECK_FALSE(below[0].holds);
  const auto above = region_atlas("W:B", AtlasMode::Above, Rational(1, 10), origin, origin);
  CHECK(above[0].holds);

  // h_p is undefined at p = inf and the row says so
  const auto hp = region_atlas("W:hp", AtlasMode::AtCritical, Rational(1, 10), origin, nodes);
  for (const auto& r : hp) {
    CHECK_FALSE(r.defined);
    CHECK_FALSE(r.note.empty());
  }
}

TEST_CASE("localization checks") {
  const auto spec = GridSpec::make(1, 64, 2048);
  const auto parts = uniform_partition(spec);
  NormContext ctx;
  const auto w = space(SpaceFamily::WienerAmalgam, "2", "2");

  const auto single = localization_check({gaussian(spec)}, parts, w, ctx);
  REQUIRE(single.ratios.size() == 1);
  CHECK(single.ratios[0] > 0.0);
  CHECK(single.max_over_min == 1.0);

  const auto f = gaussian(spec, 0.3, 1.5);
  std::vector<GridFunction> copies;
  for (long k = 0; k < 4; ++k) copies.push_back(shift_samples(f, {32 * k, 0}));
  const auto tr = localization_check(copies, parts, w, ctx);
  CHECK(tr.max_over_min < 1.01);
  CHECK(tr.within_bound);

  CHECK(standard_localization_family(spec).size() == 20);
}

TEST_CASE("Fourier-series sharpness") {
  using D = InequalityDirection;
  for (auto dir : {D::FunctionBelowCoefficients, D::CoefficientsBelowFunction}) {
    const auto r = fourier_series_sharpness(P("2"), P("2"), Rational(0), dir, 128);
    for (const auto& [key, value] : r.diagnostics) {
      if (key.rfind("max_ratio_", 0) == 0) CHECK(std::abs(value - 1) < 1e-10);
    }
    for (const auto& p : r.points) CHECK(std::abs(p.ratio - 1) < 1e-10);
  }
  const auto sup = fourier_series_sharpness(P("inf"), P("1"), Rational(0), D::FunctionBelowCoefficients, 128);
  for (const auto& p : sup.points) CHECK(p.ratio <= 1 + 1e-10);
  for (const auto& [key, value] : sup.diagnostics) {
    if (key.rfind("max_ratio_", 0) == 0) CHECK(value <= 1 + 1e-10);
  }

  const auto edge = fourier_series_sharpness(P("1"), P("2"), Rational(0), D::FunctionBelowCoefficients, 256);
  REQUIRE(edge.classifier.has_value());
  CHECK(edge.classifier->holds);
  CHECK(edge.verdict == ProbeVerdict::ConsistentWithEmbedding);
}
