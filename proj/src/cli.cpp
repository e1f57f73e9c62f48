#include "amalgam/cli.hpp"

#include "amalgam/experiments.hpp"
#include "amalgam/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace amalgam {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::vector<double> parse_schedule(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(to_double(parse_rational(item)));
  }
  return out;
}

// Runs a CLI11 app on args (CLI11 wants them reversed). Returns an exit code
// when parsing ended the command (help or error).
std::optional<int> parse_app(CLI::App& app, const std::vector<std::string>& args, std::ostream& out,
                             std::ostream& err) {
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return std::nullopt;
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {  // includes DomainError
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

std::vector<std::pair<std::string, std::string>> canonical_config(const CLI::App& app) {
  std::vector<std::pair<std::string, std::string>> cfg;
  std::stringstream ss(app.config_to_str(true, false));
  std::string line;
  while (std::getline(ss, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos || line.empty() || line[0] == '#' || line[0] == '[') continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(' ');
      const auto b = s.find_last_not_of(' ');
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    auto val = trim(line.substr(eq + 1));
    if (val.size() >= 2 && (val.front() == '"' || val.front() == '\'') && val.back() == val.front()) {
      val = val.substr(1, val.size() - 2);
    }
    cfg.emplace_back(trim(line.substr(0, eq)), val);
  }
  return cfg;
}

// ---------------------------------------------------------------- shared options

struct GridOptions {
  int dim = 1;
  std::string extent = "64";
  int samples = 4096;

  void add(CLI::App& app) {
    app.add_option("--dim", dim, "dimension n (1 or 2)")->capture_default_str();
    app.add_option("--L", extent, "grid extent")->capture_default_str();
    app.add_option("--M", samples, "samples per axis (power of two)")->capture_default_str();
  }
  GridSpec spec() const { return GridSpec::make(dim, to_double(parse_rational(extent)), samples); }
  std::string describe() const {
    return "n=" + std::to_string(dim) + ",L=" + extent + ",M=" + std::to_string(samples);
  }
};

struct GenOptions {
  std::string gen;
  std::string input;
  int j = 3;
  std::string eps = "1/4";
  std::string width = "1";
  std::string atom_kind = "small";
  std::string atom_p = "1";
  std::string side = "1/2";
  std::string seq = "flat";
  std::size_t size = 4;
  std::string separation = "16";
  std::uint64_t seed = 1;

  void add(CLI::App& app) {
    auto* g = app.add_option("--gen", gen,
                             "generator: gaussian, zero, low, heps, hj, lattice, atom, fn, gn, khinchin");
    auto* in = app.add_option("--input", input, "grid-function file (binary or text)");
    g->excludes(in);
    app.add_option("--j", j, "shell index for hj")->capture_default_str();
    app.add_option("--eps", eps, "scale for heps")->capture_default_str();
    app.add_option("--width", width, "gaussian width")->capture_default_str();
    app.add_option("--atom-kind", atom_kind, "small or big")->capture_default_str();
    app.add_option("--atom-p", atom_p, "atom exponent p")->capture_default_str();
    app.add_option("--side", side, "atom cube side")->capture_default_str();
    app.add_option("--seq", seq, "coefficients: spike, flat, power:<theta>, random:<seed>")->capture_default_str();
    app.add_option("--size", size, "number of coefficients")->capture_default_str();
    app.add_option("--N", separation, "separation for fn / gn")->capture_default_str();
    app.add_option("--seed", seed, "seed")->capture_default_str();
  }

  GridFunction make(const GridSpec& spec) const {
    if (!input.empty()) return load_any_grid_function(input);
    if (gen.empty()) throw std::invalid_argument("one of --gen or --input is required");
    if (gen == "zero") return GridFunction::zeros(spec);
    if (gen == "gaussian") {
      const double w = to_double(parse_rational(width));
      return GridFunction::sample_space(spec, [&](const std::array<double, 2>& x) {
        return Complex(std::exp(-std::numbers::pi * (x[0] * x[0] + x[1] * x[1]) / (w * w)));
      });
    }
    if (gen == "low") return make_low_profile(spec);
    if (gen == "heps") return make_h_eps(make_low_profile(spec), to_double(parse_rational(eps)));
    if (gen == "hj") return make_h_j(make_dyadic_profile(spec), j);
    if (gen == "lattice") return make_lattice_profile(spec).g;
    if (gen == "atom") {
      const auto kind = atom_kind == "big" ? AtomKind::Big : atom_kind == "small" ? AtomKind::Small
                                                                                  : throw std::invalid_argument("atom kind must be small or big");
      return make_atom(kind, ReciprocalExponent::parse(atom_p), to_double(parse_rational(side)), seed, spec).values;
    }
    const auto coeff_gen = parse_seq_generator(seq);
    const double N = to_double(parse_rational(separation));
    if (gen == "fn") {
      return make_F_N(make_truncated_seq(coeff_gen, size, SeqKind::Dyadic), N, make_dyadic_profile(spec));
    }
    if (gen == "gn") {
      const auto b = make_truncated_seq(coeff_gen, size, SeqKind::Dyadic);
      const auto bank = build_filter_bank(spec, static_cast<int>(size) + 1);
      return make_G_N(b, N, make_lattice_profile(spec), bank).f;
    }
    if (gen == "khinchin") {
      const auto a = make_truncated_seq(coeff_gen, size, SeqKind::Uniform, spec.n);
      return make_khinchin(a, SignVector{seed}, make_lattice_profile(spec));
    }
    throw std::invalid_argument("unknown generator '" + gen + "'");
  }
};

struct SpaceOptions {
  std::string space = "W";
  std::string p = "2";
  std::string q = "2";
  std::string s = "0";

  void add(CLI::App& app, bool with_space) {
    if (with_space) app.add_option("--space", space, "W, M, B, F, hp or L")->capture_default_str();
    app.add_option("--p", p, "exponent p (rational or inf)")->capture_default_str();
    app.add_option("--q", q, "exponent q (rational or inf)")->capture_default_str();
    app.add_option("--s", s, "smoothness s (rational)")->capture_default_str();
  }
};

int max_level(const GridSpec& spec) {
  const double edge = spec.samples * spec.dxi() / 2;
  int j = 1;
  while (std::ldexp(1.5, j + 1) < edge) ++j;
  return j;
}

Window make_window(const std::string& kind, const std::string& width) {
  return Window{parse_window_kind(kind.c_str()), to_double(parse_rational(width))};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace

// ---------------------------------------------------------------- classify

int cmd_classify(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Decide an embedding exactly", "classify");
  std::string pair;
  std::string p = "2", q = "2", s = "0";
  std::string p1, q1, s1 = "0", p2, q2, s2 = "0";
  std::string direction = "1";
  int n = 1;
  app.add_option("--pair", pair, "W:B, B:W, W:hp, hp:W, W:L, L:W, W:W, seq0:seq0, seq1:seq1, fourier")->required();
  app.add_option("--p", p, "p");
  app.add_option("--q", q, "q");
  app.add_option("--s", s, "smoothness on the W side");
  app.add_option("--p1", p1, "source p (W:W)");
  app.add_option("--q1", q1, "source q");
  app.add_option("--s1", s1, "source s");
  app.add_option("--p2", p2, "target p (W:W)");
  app.add_option("--q2", q2, "target q");
  app.add_option("--s2", s2, "target s");
  app.add_option("--direction", direction, "fourier: 1 (function <= coefficients) or 2");
  app.add_option("--n", n, "dimension");
  app.set_config("--config");
  if (auto code = parse_app(app, args, out, err)) return *code;
  return guarded(err, [&] {
    const auto colon = pair.find(':');
    if (pair == "fourier") {
      const auto dir = direction == "1"   ? InequalityDirection::FunctionBelowCoefficients
                       : direction == "2" ? InequalityDirection::CoefficientsBelowFunction
                                          : throw std::invalid_argument("direction must be 1 or 2");
      const auto v = decide_fourier_series(ReciprocalExponent::parse(p), ReciprocalExponent::parse(q),
                                           parse_rational(s), n, dir);
      out << "holds=" << bool_text(v.holds) << " critical=" << to_string(v.critical_s)
          << " strict=" << bool_text(v.strict_required) << "\n";
      return kExitOk;
    }
    if (colon == std::string::npos) throw std::invalid_argument("--pair must look like W:B");
    const auto sf = parse_space_family(pair.substr(0, colon));
    const auto tf = parse_space_family(pair.substr(colon + 1));
    const bool seq = sf == SpaceFamily::SeqUniform || sf == SpaceFamily::SeqDyadic;
    if (seq || (sf == SpaceFamily::WienerAmalgam && tf == SpaceFamily::WienerAmalgam)) {
      if (q1.empty() || q2.empty()) throw std::invalid_argument("--q1 and --q2 are required for this pair");
      const auto P1 = seq ? ReciprocalExponent::from_p(Rational(1)) : ReciprocalExponent::parse(p1.empty() ? p : p1);
      const auto P2 = seq ? ReciprocalExponent::from_p(Rational(1)) : ReciprocalExponent::parse(p2.empty() ? p : p2);
      const auto src = SpaceSpec::make(sf, P1, ReciprocalExponent::parse(q1), parse_rational(s1), n);
      const auto tgt = SpaceSpec::make(tf, P2, ReciprocalExponent::parse(q2), parse_rational(s2), n);
      out << "holds=" << bool_text(decide(src, tgt).holds) << "\n";
      return kExitOk;
    }
    const auto P = ReciprocalExponent::parse(p);
    const auto Q = ReciprocalExponent::parse(q);
    const auto S = parse_rational(s);
    auto side = [&](SpaceFamily fam) {
      return SpaceSpec::make(fam, P, Q, fam == SpaceFamily::WienerAmalgam ? S : Rational(0), n);
    };
    const auto v = decide(side(sf), side(tf));
    out << "holds=" << bool_text(v.holds) << " critical=" << to_string(v.critical_s)
        << " strict=" << bool_text(v.strict_required) << "\n";
    return kExitOk;
  });
}

// ---------------------------------------------------------------- norm

int cmd_norm(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Evaluate a function-space norm", "norm");
  SpaceOptions sp;
  GridOptions grid;
  GenOptions gen;
  std::string window = "gaussian", window_width = "1";
  int jmax = 0;
  sp.add(app, true);
  grid.add(app);
  gen.add(app);
  app.add_option("--window", window, "gaussian or bump")->capture_default_str();
  app.add_option("--window-width", window_width, "window width T")->capture_default_str();
  app.add_option("--jmax", jmax, "top Littlewood-Paley shell (0 = largest the grid allows)");
  app.set_config("--config");
  if (auto code = parse_app(app, args, out, err)) return *code;
  return guarded(err, [&] {
    const auto space = SpaceSpec::make(parse_space_family(sp.space), ReciprocalExponent::parse(sp.p),
                                       ReciprocalExponent::parse(sp.q), parse_rational(sp.s), grid.dim);
    const auto f = gen.make(grid.spec());
    if (f.spec.n != space.n) throw std::invalid_argument("function dimension differs from --dim");
    NormContext ctx;
    ctx.stft.window = make_window(window, window_width);
    std::optional<FilterBank> bank;
    const bool needs_bank = space.family == SpaceFamily::Besov || space.family == SpaceFamily::TriebelLizorkin;
    double value = 0.0;
    NormDiagnostics diag;
    if (needs_bank) {
      bank = build_filter_bank(f.spec, jmax > 0 ? jmax : max_level(f.spec));
      const double s = to_double(space.s);
      value = space.family == SpaceFamily::Besov ? besov_norm(f, *bank, space.p, space.q, s, &diag)
                                                 : triebel_norm(f, *bank, space.p, space.q, s, &diag);
    } else {
      value = space_norm(f, space, ctx);
    }
    out << "value=" << num(value) << "\n";
    out << "space=" << to_string(space.family) << " p=" << space.p.to_string() << " q=" << space.q.to_string()
        << " s=" << to_string(space.s) << " n=" << space.n << "\n";
    out << "grid=n=" << f.spec.n << ",L=" << num(f.spec.extent) << ",M=" << f.spec.samples << "\n";
    if (needs_bank) {
      out << "jmax=" << bank->jmax << " high_shell_mass=" << num(diag.high_shell_mass)
          << " warning=" << bool_text(diag.warning) << "\n";
    }
    return kExitOk;
  });
}

// ---------------------------------------------------------------- probe

int cmd_probe(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Run a numerical experiment", "probe");
  std::string experiment;
  SpaceOptions sp;
  std::string pair = "W:B";
  std::string family = "fn";
  std::string schedule;
  std::string window, window_width;
  std::uint64_t seed = 1;
  std::size_t trials = 10000;
  std::string seq = "flat";
  std::size_t size = 16;
  std::string direction = "1";
  std::size_t budget = 256;
  std::string out_dir = ".";
  std::string name;
  app.add_option("--experiment", experiment,
                 "embedding, h-eps-scaling, h-j-scaling, khinchin, fourier-series")->required();
  sp.add(app, true);
  app.add_option("--pair", pair, "embedding: source:target")->capture_default_str();
  app.add_option("--family", family, "embedding: fn, gn, h-eps, h-j, constant")->capture_default_str();
  app.add_option("--schedule", schedule, "comma-separated schedule (rationals)");
  app.add_option("--window", window, "gaussian or bump (default per family)");
  app.add_option("--window-width", window_width, "window width");
  app.add_option("--seed", seed, "seed")->capture_default_str();
  app.add_option("--trials", trials, "khinchin: Monte Carlo trials")->capture_default_str();
  app.add_option("--seq", seq, "khinchin: coefficients")->capture_default_str();
  app.add_option("--size", size, "khinchin: number of coefficients")->capture_default_str();
  app.add_option("--direction", direction, "fourier-series: 1 or 2")->capture_default_str();
  app.add_option("--budget", budget, "fourier-series: largest truncation")->capture_default_str();
  app.add_option("--out-dir", out_dir, "output directory")->capture_default_str();
  app.add_option("--name", name, "output file stem (default: experiment name)");
  app.set_config("--config");
  if (auto code = parse_app(app, args, out, err)) return *code;
  return guarded(err, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto P = ReciprocalExponent::parse(sp.p);
    const auto Q = ReciprocalExponent::parse(sp.q);
    const auto S = parse_rational(sp.s);
    ExperimentReport rep;
    std::string grid_text;
    auto apply_window = [&](Window w) {
      if (!window.empty()) w.kind = parse_window_kind(window.c_str());
      if (!window_width.empty()) w.width = to_double(parse_rational(window_width));
      return w;
    };
    if (experiment == "embedding") {
      auto cfg = default_probe_config(parse_family_kind(family));
      const auto colon = pair.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("--pair must look like W:B");
      const auto sf = parse_space_family(pair.substr(0, colon));
      const auto tf = parse_space_family(pair.substr(colon + 1));
      auto side = [&](SpaceFamily fam) {
        return SpaceSpec::make(fam, P, Q, fam == SpaceFamily::WienerAmalgam ? S : Rational(0), 1);
      };
      cfg.source = side(sf);
      cfg.target = side(tf);
      cfg.seed = seed;
      cfg.window = apply_window(cfg.window);
      if (!schedule.empty()) cfg.schedule = parse_schedule(schedule);
      rep = embedding_probe(cfg);
      grid_text = "n=1,L=" + num(cfg.grid.extent) + ",M=" + std::to_string(cfg.grid.samples);
    } else if (experiment == "h-eps-scaling" || experiment == "h-j-scaling") {
      const auto fam = experiment == "h-eps-scaling" ? FamilyKind::HEps : FamilyKind::HJ;
      auto cfg = default_probe_config(fam);
      if (!schedule.empty()) cfg.schedule = parse_schedule(schedule);
      const auto norm = SpaceSpec::make(parse_space_family(sp.space), P, Q, S, 1);
      rep = scaling_probe(fam, cfg.schedule, norm, apply_window(cfg.window), cfg.grid);
      rep.seed = seed;
      grid_text = "n=1,L=" + num(cfg.grid.extent) + ",M=" + std::to_string(cfg.grid.samples);
    } else if (experiment == "khinchin") {
      const auto lattice = default_lattice_profile(1);
      const auto a = make_truncated_seq(parse_seq_generator(seq), size, SeqKind::Uniform, 1);
      rep.experiment = "khinchin";
      rep.seed = seed;
      rep.config = {{"p", P.to_string()}, {"seq", seq}, {"size", std::to_string(size)},
                    {"trials", std::to_string(trials)}, {"seed", std::to_string(seed)}};
      // Nested prefixes of the trial streams: trials/8, /4, /2, all (those
      // with at least 1000 trials).
      for (std::size_t div : {8u, 4u, 2u, 1u}) {
        const std::size_t t = trials / div;
        if (t < 1000 && div != 1) continue;
        const auto r = khinchin_mc(a, P, t, seed, lattice);
        rep.points.push_back({static_cast<double>(t), r.reference, r.empirical_mean, r.ratio});
        if (div == 1) {
          rep.diagnostics = {{"ratio", r.ratio}, {"standard_error", r.standard_error / r.reference}};
        }
      }
      if (rep.points.size() >= 2) rep.verdict = probe_verdict(rep.points, &rep.fit);
      rep.notes.push_back("source_norm = reference, target_norm = empirical mean");
      grid_text = "n=1,L=512,M=16384";
    } else if (experiment == "fourier-series") {
      const auto dir = direction == "1"   ? InequalityDirection::FunctionBelowCoefficients
                       : direction == "2" ? InequalityDirection::CoefficientsBelowFunction
                                          : throw std::invalid_argument("direction must be 1 or 2");
      rep = fourier_series_sharpness(P, Q, S, dir, budget, 1);
      rep.seed = seed;
      grid_text = "torus";
    } else {
      throw std::invalid_argument("unknown experiment '" + experiment + "'");
    }

    const std::string stem = name.empty() ? experiment : name;
    std::filesystem::create_directories(out_dir);
    const auto base = (std::filesystem::path(out_dir) / stem).string();
    const std::string csv_path = base + ".csv";
    const std::string jsonl_path = base + ".jsonl";
    const std::string manifest_path = manifest_path_for(csv_path);
    {
      std::ostringstream csv;
      write_report_csv(csv, rep);
      write_text_file(csv_path, csv.str());
      std::ostringstream jl;
      write_report_jsonl(jl, rep, manifest_path);
      write_text_file(jsonl_path, jl.str());
    }
    RunManifest m;
    m.command_line.push_back("probe");
    m.command_line.insert(m.command_line.end(), args.begin(), args.end());
    m.config = canonical_config(app);
    m.config_hash = config_hash(m.config);
    m.seed = seed;
    m.grid = grid_text;
    m.timestamp = utc_timestamp();
    m.outputs = {csv_path, jsonl_path};
    m.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    save_manifest(manifest_path, m);

    out << "experiment=" << rep.experiment << " verdict=" << to_string(rep.verdict) << " slope=" << num(rep.fit.slope)
        << " growth=" << num(rep.growth()) << "\n";
    if (rep.expected_slope) out << "expected_slope=" << num(*rep.expected_slope) << "\n";
    if (rep.classifier) {
      out << "classifier: holds=" << bool_text(rep.classifier->holds) << " critical="
          << to_string(rep.classifier->critical_s) << " strict=" << bool_text(rep.classifier->strict_required)
          << (rep.disagreement ? " DISAGREES" : "") << "\n";
    }
    for (const auto& [k, v] : rep.diagnostics) out << k << "=" << num(v) << "\n";
    out << "csv=" << csv_path << "\njsonl=" << jsonl_path << "\nmanifest=" << manifest_path << "\n";
    return kExitOk;
  });
}

// ---------------------------------------------------------------- atlas

int cmd_atlas(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Tabulate embedding verdicts over the (1/p, 1/q) plane", "atlas");
  std::string pair = "W:B";
  std::string mode = "critical";
  std::string delta = "1/10";
  std::string max_u = "2";
  std::string step = "1/4";
  int n = 1;
  std::string output;
  app.add_option("--pair", pair, "W:B, B:W, W:hp, hp:W, W:L, L:W")->capture_default_str();
  app.add_option("--mode", mode, "critical, below or above")->capture_default_str();
  app.add_option("--delta", delta, "offset from the critical s")->capture_default_str();
  app.add_option("--max", max_u, "largest 1/p and 1/q node")->capture_default_str();
  app.add_option("--step", step, "node spacing")->capture_default_str();
  app.add_option("--n", n, "dimension")->capture_default_str();
  app.add_option("--out", output, "CSV path (default: stdout)");
  app.set_config("--config");
  if (auto code = parse_app(app, args, out, err)) return *code;
  return guarded(err, [&] {
    const auto m = mode == "critical" ? AtlasMode::AtCritical
                   : mode == "below"  ? AtlasMode::Below
                   : mode == "above"  ? AtlasMode::Above
                                      : throw std::invalid_argument("mode must be critical, below or above");
    const auto hi = parse_rational(max_u);
    const auto st = parse_rational(step);
    if (!(Rational(0) < st)) throw std::invalid_argument("--step must be positive");
    std::vector<Rational> nodes;
    for (Rational u(0); !(hi < u); u = u + st) nodes.push_back(u);
    const auto rows = region_atlas(pair, m, parse_rational(delta), nodes, nodes, n);
    if (output.empty()) {
      write_atlas_csv(out, rows);
    } else {
      std::ostringstream csv;
      write_atlas_csv(csv, rows);
      write_text_file(output, csv.str());
      RunManifest man;
      man.command_line.push_back("atlas");
      man.command_line.insert(man.command_line.end(), args.begin(), args.end());
      man.config = canonical_config(app);
      man.config_hash = config_hash(man.config);
      man.grid = "nodes=" + std::to_string(nodes.size()) + "x" + std::to_string(nodes.size());
      man.timestamp = utc_timestamp();
      man.outputs = {output};
      save_manifest(manifest_path_for(output), man);
      out << "rows=" << rows.size() << "\ncsv=" << output << "\nmanifest=" << manifest_path_for(output) << "\n";
    }
    return kExitOk;
  });
}

// ---------------------------------------------------------------- export

int cmd_export(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Write a generated function to a grid-function file", "export");
  GridOptions grid;
  GenOptions gen;
  std::string output;
  std::string format = "binary";
  grid.add(app);
  gen.add(app);
  app.add_option("--out", output, "output path")->required();
  app.add_option("--format", format, "binary, binary64 or text")->capture_default_str();
  app.set_config("--config");
  if (auto code = parse_app(app, args, out, err)) return *code;
  return guarded(err, [&] {
    if (gen.gen.empty()) throw std::invalid_argument("--gen is required");
    const auto f = gen.make(grid.spec());
    if (format == "text") {
      std::ostringstream os;
      write_grid_function_text(os, f);
      write_text_file(output, os.str());
    } else if (format == "binary" || format == "binary64") {
      save_grid_function(output, f,
                         format == "binary" ? SamplePrecision::Complex128 : SamplePrecision::Complex64);
    } else {
      throw std::invalid_argument("unknown format '" + format + "'");
    }
    RunManifest m;
    m.command_line.push_back("export");
    m.command_line.insert(m.command_line.end(), args.begin(), args.end());
    m.config = canonical_config(app);
    m.config_hash = config_hash(m.config);
    m.seed = gen.seed;
    m.grid = grid.describe();
    m.timestamp = utc_timestamp();
    m.outputs = {output};
    save_manifest(manifest_path_for(output), m);
    out << "wrote=" << output << "\nmanifest=" << manifest_path_for(output) << "\n";
    return kExitOk;
  });
}

// ---------------------------------------------------------------- rerun

int cmd_rerun(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Replay a manifest", "rerun");
  std::string path;
  app.add_option("--manifest", path, "manifest file")->required();
  if (auto code = parse_app(app, args, out, err)) return *code;
  return guarded(err, [&] {
    const auto m = load_manifest(path);
    if (m.command_line.empty() || m.command_line.front() == "rerun") {
      throw IoError("manifest holds no replayable command");
    }
    return run_cli(m.command_line, out, err);
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  static const char* usage =
      "usage: amalgam <classify|norm|probe|atlas|export|rerun> [options]\n"
      "       amalgam <command> --help\n";
  if (args.empty()) {
    err << usage;
    return kExitUsage;
  }
  const std::string cmd = args.front();
  const std::vector<std::string> rest(args.begin() + 1, args.end());
  if (cmd == "classify") return cmd_classify(rest, out, err);
  if (cmd == "norm") return cmd_norm(rest, out, err);
  if (cmd == "probe") return cmd_probe(rest, out, err);
  if (cmd == "atlas") return cmd_atlas(rest, out, err);
  if (cmd == "export") return cmd_export(rest, out, err);
  if (cmd == "rerun") return cmd_rerun(rest, out, err);
  if (cmd == "--help" || cmd == "-h" || cmd == "help") {
    out << usage;
    return kExitOk;
  }
  if (cmd == "--version") {
    out << "amalgam " << kLibraryVersion << "\n";
    return kExitOk;
  }
  err << "unknown command '" << cmd << "'\n" << usage;
  return kExitUsage;
}

}  // namespace amalgam
