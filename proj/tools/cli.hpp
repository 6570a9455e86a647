#pragma once

// Command-line front end: SNR sweeps for the multipath and interference
// scenarios, and the figure/table presets. Writes CSV.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lorasim/lorasim.hpp"

namespace lorasim::cli {

enum class Mode { Theory, Sim, Both };

struct SweepSpec {
  std::string scenario;  // mpc | interference
  Mode mode = Mode::Theory;
  int sf = 7;
  Detector detector = Detector::NonCoherent;
  std::string taps;
  std::string channel_file;
  std::optional<double> rho;
  int tau = 0;
  double sir_db = 3.0;
  std::string phi = "0";
  std::string snr;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  int gh_points = 15;
  std::string out;
};

/// Invalid user input; maps to exit code 2.
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Output failure; maps to exit code 3.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kCsvHeader = "snr_db,ser,source,sf,detector,params,errors,trials,ci95";

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::string num(double v) { return fmt("%.6g", v); }

struct CsvRow {
  double snr_db;
  double ser;
  std::string source;
  int sf;
  Detector detector;
  std::string params;
  std::optional<SerPoint> sim;
};

inline std::string to_csv(const CsvRow& r) {
  std::string s = fmt("%.4f", r.snr_db) + ',' + fmt("%.10e", r.ser) + ',' + r.source + ',' + std::to_string(r.sf) +
                  ',' + to_string(r.detector) + ',' + r.params + ',';
  if (r.sim) {
    s += std::to_string(r.sim->errors) + ',' + std::to_string(r.sim->trials) + ',' + fmt("%.4e", r.sim->ci95);
  } else {
    s += ",,";
  }
  return s;
}

/// Sink for one or more CSV tables: stdout when no path is given.
class Output {
 public:
  explicit Output(std::ostream& console) : console_(console) {}

  void write_file(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
      console_ << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    f.flush();
    if (!f) throw IoError("write to '" + path + "' failed");
  }

 private:
  std::ostream& console_;
};

inline Detector parse_detector(const std::string& s) {
  if (s == "noncoherent" || s == "nc") return Detector::NonCoherent;
  if (s == "coherent" || s == "c") return Detector::Coherent;
  throw SpecError("unknown detector '" + s + "' (noncoherent|coherent)");
}

inline Mode parse_mode(const std::string& s) {
  if (s == "theory") return Mode::Theory;
  if (s == "sim") return Mode::Sim;
  if (s == "both") return Mode::Both;
  throw SpecError("unknown mode '" + s + "' (theory|sim|both)");
}

inline bool wants_theory(Mode m) { return m != Mode::Sim; }
inline bool wants_sim(Mode m) { return m != Mode::Theory; }

inline double resolve_phi(const std::string& text, int tau, const LoRaParams& p) {
  if (text == "min" || text == "max") {
    if (tau == 0) throw SpecError("--phi min|max needs tau > 0");
    const auto [lo, hi] = phi_extremes(tau, p);
    return text == "min" ? lo : hi;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw SpecError("bad --phi '" + text + "' (radians, min or max)");
  return v;
}

// Evaluates one theory curve and optionally its simulation on a grid.
template <class TheoryFn, class SimFn>
std::vector<CsvRow> run_curve(const std::vector<double>& grid, Mode mode, int sf, Detector det,
                              const std::string& params, TheoryFn&& theory, SimFn&& sim) {
  std::vector<CsvRow> rows;
  if (wants_theory(mode)) {
    const auto values = parallel_map<double>(grid.size(), [&](std::size_t i) { return theory(grid[i]); });
    for (std::size_t i = 0; i < grid.size(); ++i) rows.push_back({grid[i], values[i], "theory", sf, det, params, {}});
  }
  if (wants_sim(mode)) {
    for (const SerPoint& pt : sim(grid)) rows.push_back({pt.snr_db, pt.ser, "sim", sf, det, params, pt});
  }
  return rows;
}

inline std::string render(const std::vector<CsvRow>& rows) {
  std::string s = std::string(kCsvHeader) + '\n';
  for (const auto& r : rows) s += to_csv(r) + '\n';
  return s;
}

inline std::string taps_token(const MultipathChannel& ch) {
  std::string s = "taps=";
  for (std::size_t i = 0; i < ch.size(); ++i) {
    const Tap& t = ch.taps()[i];
    if (i) s += ';';
    s += std::to_string(t.delay) + ':' + num(t.gain.real());
    if (t.gain.imag() != 0.0) s += ':' + num(t.gain.imag());
  }
  return s;
}

inline SimConfig sim_config(const SweepSpec& s) {
  SimConfig c;
  c.trials = s.trials;
  c.seed = s.seed;
  c.detector = s.detector;
  return c;
}

inline std::vector<double> snr_grid(const std::string& text, const std::string& fallback) {
  try {
    return parse_snr_range(text.empty() ? fallback : text).points();
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
}

inline std::string run_mpc(const SweepSpec& s) {
  const LoRaParams p(s.sf);
  const int given = !s.taps.empty() + !s.channel_file.empty() + s.rho.has_value();
  if (given > 1) throw SpecError("give at most one of --taps, --channel-file, --rho");
  std::optional<MultipathChannel> ch;
  std::string params;
  try {
    if (!s.taps.empty()) {
      ch = parse_taps(s.taps, p);
    } else if (!s.channel_file.empty()) {
      ch = read_channel_file(s.channel_file, p);
    } else if (s.rho) {
      ch = exp_decay_channel(*s.rho, p);
    } else {
      ch = MultipathChannel::one_path(p);
    }
  } catch (const std::ios_base::failure& e) {
    throw IoError(e.what());
  } catch (const std::exception& e) {
    throw SpecError(e.what());
  }
  params = s.rho ? "rho=" + num(*s.rho) : taps_token(*ch);
  const auto grid = snr_grid(s.snr, "-20:0:1");
  const GaussHermiteRule rule = gauss_hermite(s.gh_points);
  const auto rows = run_curve(
      grid, s.mode, s.sf, s.detector, params,
      [&](double snr) { return ser_mpc(*ch, snr_db_to_sigma2(snr), p, rule, s.detector); },
      [&](const std::vector<double>& g) { return simulate_mpc(*ch, g, sim_config(s), p); });
  return render(rows);
}

inline std::string interference_params(const InterfererConfig& c, double sir_db) {
  return "tau=" + std::to_string(c.tau) + ";sir_db=" + num(sir_db) + ";phi=" + num(c.phi);
}

inline std::string run_interference(const SweepSpec& s) {
  const LoRaParams p(s.sf);
  if (s.detector != Detector::NonCoherent && wants_theory(s.mode)) {
    throw SpecError("interference theory is available for the non-coherent detector only");
  }
  if (s.tau < 0 || static_cast<std::size_t>(s.tau) >= p.m()) throw SpecError("--tau must be in [0, M)");
  const InterfererConfig cfg = InterfererConfig::from_sir_db(s.tau, s.sir_db, resolve_phi(s.phi, s.tau, p));
  const auto grid = snr_grid(s.snr, "-15:0:1");
  const GaussHermiteRule rule = gauss_hermite(s.gh_points);
  const auto rows = run_curve(
      grid, s.mode, s.sf, s.detector, interference_params(cfg, s.sir_db),
      [&](double snr) { return ser_interference(cfg, snr_db_to_sigma2(snr), p, rule); },
      [&](const std::vector<double>& g) { return simulate_interference(cfg, g, sim_config(s), p); });
  return render(rows);
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

struct PresetOptions {
  std::optional<int> sf;
  std::string snr;
  std::optional<double> sir_db;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  int gh_points = 15;
  std::string mode = "both";
  std::string out;  // directory; empty = everything on stdout
};

// Collects named curves; written as one file each into `dir`, or as one
// table on stdout.
class CurveSet {
 public:
  void add(std::string name, std::vector<CsvRow> rows) { curves_.emplace_back(std::move(name), std::move(rows)); }

  void write(Output& out, const std::string& dir, const std::string& header = kCsvHeader,
             const std::function<std::string(const CsvRow&)>& line = to_csv) const {
    if (dir.empty() || dir == "-") {
      std::string s = header + '\n';
      for (const auto& [name, rows] : curves_) {
        for (const auto& r : rows) s += line(r) + '\n';
      }
      out.write_file("", s);
      return;
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
    for (const auto& [name, rows] : curves_) {
      std::string s = header + '\n';
      for (const auto& r : rows) s += line(r) + '\n';
      out.write_file((std::filesystem::path(dir) / (name + ".csv")).string(), s);
    }
  }

 private:
  std::vector<std::pair<std::string, std::vector<CsvRow>>> curves_;
};

inline std::string alpha_name(double a) { return fmt("%.1f", a); }

inline void preset_fig6(const PresetOptions& o, Output& out) {
  const int sf = o.sf.value_or(7);
  const LoRaParams p(sf);
  const auto grid = snr_grid(o.snr, "-15:5:1");
  const Mode mode = parse_mode(o.mode);
  const GaussHermiteRule rule = gauss_hermite(o.gh_points);
  CurveSet set;
  for (Detector det : {Detector::NonCoherent, Detector::Coherent}) {
    for (int k1 : {1, 10}) {
      for (double a1 : {0.7, 0.9}) {
        const auto ch = MultipathChannel::two_path(a1, k1, p);
        SimConfig sc{o.trials, o.seed, det};
        set.add("fig6_sf" + std::to_string(sf) + "_" + to_string(det) + "_k" + std::to_string(k1) + "_a" +
                    alpha_name(a1),
                run_curve(
                    grid, mode, sf, det, taps_token(ch),
                    [&](double snr) { return ser_mpc(ch, snr_db_to_sigma2(snr), p, rule, det); },
                    [&](const std::vector<double>& g) { return simulate_mpc(ch, g, sc, p); }));
      }
    }
  }
  set.write(out, o.out);
}

inline void preset_fig7(const PresetOptions& o, Output& out) {
  const int sf = o.sf.value_or(7);
  const LoRaParams p(sf);
  const auto grid = snr_grid(o.snr, "-15:10:0.5");
  const GaussHermiteRule rule = gauss_hermite(o.gh_points);
  CurveSet set;
  for (int k1 : {1, 3, 5, 7, 9, 11}) {
    for (double a1 : {0.0, 0.2, 0.4, 0.6, 0.8, 0.9}) {
      const auto ch = MultipathChannel::two_path(a1, k1, p);
      set.add("fig7_sf" + std::to_string(sf) + "_k" + std::to_string(k1) + "_a" + alpha_name(a1),
              run_curve(
                  grid, Mode::Theory, sf, Detector::NonCoherent, taps_token(ch),
                  [&](double snr) { return ser_mpc_noncoherent(ch, snr_db_to_sigma2(snr), p, rule); },
                  [](const std::vector<double>&) { return std::vector<SerPoint>{}; }));
    }
  }
  set.write(out, o.out);
}

inline void preset_fig8(const PresetOptions& o, Output& out) {
  std::vector<int> sfs{7, 8, 9, 10};
  if (o.sf) sfs = {*o.sf};
  const auto grid = snr_grid(o.snr, "-25:10:0.5");
  const GaussHermiteRule rule = gauss_hermite(o.gh_points);
  CurveSet set;
  for (int sf : sfs) {
    const LoRaParams p(sf);
    for (double a1 : {0.0, 0.4, 0.8}) {
      const auto ch = MultipathChannel::two_path(a1, 1, p);
      set.add("fig8_sf" + std::to_string(sf) + "_a" + alpha_name(a1),
              run_curve(
                  grid, Mode::Theory, sf, Detector::NonCoherent, taps_token(ch),
                  [&](double snr) { return ser_mpc_noncoherent(ch, snr_db_to_sigma2(snr), p, rule); },
                  [](const std::vector<double>&) { return std::vector<SerPoint>{}; }));
    }
  }
  set.write(out, o.out);
}

inline void preset_fig9(const PresetOptions& o, Output& out) {
  std::vector<int> sfs{7, 10};
  if (o.sf) sfs = {*o.sf};
  const auto grid = snr_grid(o.snr, "-25:15:0.5");
  const GaussHermiteRule rule = gauss_hermite(o.gh_points);
  CurveSet set;
  for (int sf : sfs) {
    const LoRaParams p(sf);
    for (double rho : {0.7, 0.8}) {
      const auto c1 = MultipathChannel::two_path(rho, 1, p);
      const auto c2 = exp_decay_channel(rho, p);
      const auto none = [](const std::vector<double>&) { return std::vector<SerPoint>{}; };
      set.add("fig9_sf" + std::to_string(sf) + "_rho" + alpha_name(rho) + "_c1",
              run_curve(
                  grid, Mode::Theory, sf, Detector::NonCoherent, "c1;" + taps_token(c1),
                  [&](double snr) { return ser_mpc_noncoherent(c1, snr_db_to_sigma2(snr), p, rule); }, none));
      set.add("fig9_sf" + std::to_string(sf) + "_rho" + alpha_name(rho) + "_c2",
              run_curve(
                  grid, Mode::Theory, sf, Detector::NonCoherent, "c2;rho=" + num(rho),
                  [&](double snr) { return ser_mpc_noncoherent(c2, snr_db_to_sigma2(snr), p, rule); }, none));
    }
  }
  set.write(out, o.out);
}

/// SNR at which the interference-vs-tau figure is drawn: the one-path SER
/// anchors quoted with it put SF8 at -9 dB, SF10 at -14.5 dB, SF12 at -20 dB.
inline double fig10_default_snr(int sf) { return -9.0 - 2.75 * (sf - 8); }

inline void preset_fig10(const PresetOptions& o, Output& out) {
  const int sf = o.sf.value_or(8);
  const LoRaParams p(sf);
  const double sir = o.sir_db.value_or(3.0);
  std::vector<double> snrs{fig10_default_snr(sf)};
  if (!o.snr.empty()) snrs = snr_grid(o.snr, "");
  const Mode mode = parse_mode(o.mode);
  const GaussHermiteRule rule = gauss_hermite(o.gh_points);
  const int step = sf >= 6 ? 1 << (sf - 5) : 2;
  CurveSet set;
  for (const char* which : {"min", "max"}) {
    std::vector<CsvRow> theory_rows, sim_rows;
    for (int tau = step; tau < static_cast<int>(p.m()); tau += step) {
      const InterfererConfig cfg = InterfererConfig::from_sir_db(tau, sir, resolve_phi(which, tau, p));
      const std::string params = interference_params(cfg, sir) + ";phi_kind=" + which;
      SimConfig sc{o.trials, o.seed, Detector::NonCoherent};
      for (const CsvRow& r : run_curve(
               snrs, mode, sf, Detector::NonCoherent, params,
               [&](double snr) { return ser_interference_reduced(cfg, snr_db_to_sigma2(snr), p, rule); },
               [&](const std::vector<double>& g) { return simulate_interference(cfg, g, sc, p); })) {
        (r.source == "theory" ? theory_rows : sim_rows).push_back(r);
      }
    }
    const std::string base = "fig10_sf" + std::to_string(sf) + "_phi" + which;
    if (!theory_rows.empty()) set.add(base + "_theory", std::move(theory_rows));
    if (!sim_rows.empty()) set.add(base + "_sim", std::move(sim_rows));
  }
  set.write(out, o.out);
}

inline void preset_fig11(const PresetOptions& o, Output& out) {
  std::vector<int> sfs{7, 8, 9};
  if (o.sf) sfs = {*o.sf};
  const double sir = o.sir_db.value_or(6.0);
  const Mode mode = parse_mode(o.mode);
  const GaussHermiteRule rule = gauss_hermite(o.gh_points);
  CurveSet set;
  for (int sf : sfs) {
    const LoRaParams p(sf);
    const auto grid = snr_grid(o.snr, "-20:0:1");
    for (int tau : {1, static_cast<int>(p.m() / 2) - 1}) {
      const InterfererConfig cfg = InterfererConfig::from_sir_db(tau, sir, 0.0);
      SimConfig sc{o.trials, o.seed, Detector::NonCoherent};
      set.add("fig11_sf" + std::to_string(sf) + "_tau" + std::to_string(tau),
              run_curve(
                  grid, mode, sf, Detector::NonCoherent, interference_params(cfg, sir),
                  [&](double snr) { return ser_interference(cfg, snr_db_to_sigma2(snr), p, rule); },
                  [&](const std::vector<double>& g) { return simulate_interference(cfg, g, sc, p); }));
    }
  }
  // BER is reported as SER / 2, an approximation
  set.write(out, o.out, std::string(kCsvHeader) + ",ber_approx",
            [](const CsvRow& r) { return to_csv(r) + ',' + fmt("%.10e", r.ser / 2.0); });
}

struct Table1Row {
  int sf;
  double alpha_from;
  double alpha_to;
  double snr_from;
  double snr_to;
};

inline constexpr double kTable1Ser = 1e-8;

/// SNR (dB) of the two-path k1 = 1 non-coherent curve at SER = 1e-8.
inline double table1_snr(double alpha1, const LoRaParams& p, const GaussHermiteRule& rule) {
  const auto ch = MultipathChannel::two_path(alpha1, 1, p);
  const auto s = snr_at_ser([&](double snr) { return ser_mpc_noncoherent(ch, snr_db_to_sigma2(snr), p, rule); },
                            kTable1Ser, -60.0, 40.0, 0.1);
  if (!s) throw std::runtime_error("SER threshold not bracketed");
  return *s;
}

inline std::vector<Table1Row> table1(int sf, const GaussHermiteRule& rule) {
  const LoRaParams p(sf);
  const std::vector<double> alphas{0.0, 0.4, 0.5, 0.6, 0.7, 0.8};
  const auto snrs = parallel_map<double>(alphas.size(), [&](std::size_t i) { return table1_snr(alphas[i], p, rule); });
  std::vector<Table1Row> rows;
  for (std::size_t i = 1; i < alphas.size(); ++i) rows.push_back({sf, alphas[i - 1], alphas[i], snrs[i - 1], snrs[i]});
  rows.push_back({sf, alphas.front(), alphas.back(), snrs.front(), snrs.back()});
  return rows;
}

inline void preset_table1(const PresetOptions& o, Output& out) {
  std::vector<int> sfs{7, 8, 9, 10, 11, 12};
  if (o.sf) sfs = {*o.sf};
  const GaussHermiteRule rule = gauss_hermite(o.gh_points);
  std::string s = "sf,loss,alpha1_from,alpha1_to,snr_from_db,snr_to_db,delta_db\n";
  for (int sf : sfs) {
    const auto rows = table1(sf, rule);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      const std::string label = i + 1 == rows.size() ? "total" : "delta" + std::to_string(i + 1);
      s += std::to_string(sf) + ',' + label + ',' + alpha_name(r.alpha_from) + ',' + alpha_name(r.alpha_to) + ',' +
           fmt("%.3f", r.snr_from) + ',' + fmt("%.3f", r.snr_to) + ',' + fmt("%.2f", r.snr_to - r.snr_from) + '\n';
    }
  }
  out.write_file(o.out, s);
}

inline void run_preset(const std::string& name, const PresetOptions& o, Output& out) {
  static const std::map<std::string, void (*)(const PresetOptions&, Output&)> table{
      {"fig6", preset_fig6},   {"fig7", preset_fig7},   {"fig8", preset_fig8},    {"fig9", preset_fig9},
      {"fig10", preset_fig10}, {"fig11", preset_fig11}, {"table1", preset_table1},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw SpecError("unknown preset '" + name + "'");
  it->second(o, out);
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"LoRa symbol error rate under multipath and same-SF interference"};
  app.require_subcommand(1);

  SweepSpec spec;
  std::string mode_text = "theory";
  std::string detector_text = "noncoherent";
  PresetOptions preset;
  std::string preset_name;
  int preset_sf = 0;
  double preset_sir = 0.0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--sf", spec.sf, "Spreading factor (7-12)")->capture_default_str();
    sub->add_option("--snr", spec.snr, "SNR grid in dB as start:stop:step");
    sub->add_option("--trials", spec.trials, "Monte Carlo trials per SNR point")->capture_default_str();
    sub->add_option("--seed", spec.seed, "Monte Carlo seed")->capture_default_str();
    sub->add_option("--detector", detector_text, "noncoherent or coherent")->capture_default_str();
    sub->add_option("--gh-points", spec.gh_points, "Gauss-Hermite points per axis")->capture_default_str();
    sub->add_option("--out", spec.out, "Output CSV file (default stdout)");
    sub->add_option("mode", mode_text, "theory, sim or both")->capture_default_str();
  };

  CLI::App* mpc = app.add_subcommand("mpc", "SER over a multipath channel");
  add_common(mpc);
  mpc->add_option("--taps", spec.taps, "Taps as delay:re[:im],...  e.g. 0:1,1:0.7");
  mpc->add_option("--channel-file", spec.channel_file, "Channel file, one 'delay re im' per line");
  mpc->add_option("--rho", spec.rho, "Exponential-decay channel parameter");

  CLI::App* interf = app.add_subcommand("interference", "SER with one same-SF interferer");
  add_common(interf);
  interf->add_option("--tau", spec.tau, "Interferer delay in samples")->capture_default_str();
  interf->add_option("--sir-db,--sir", spec.sir_db, "Signal-to-interference ratio in dB")->capture_default_str();
  interf->add_option("--phi", spec.phi, "Interferer phase in radians, or min / max")->capture_default_str();

  CLI::App* pre = app.add_subcommand("preset", "Reproduce a figure or table grid");
  pre->add_option("name", preset_name, "fig6 fig7 fig8 fig9 fig10 fig11 table1")->required();
  pre->add_option("--sf", preset_sf, "Restrict to one spreading factor");
  pre->add_option("--snr", preset.snr, "Override the SNR grid");
  pre->add_option("--sir-db,--sir", preset_sir, "Override the SIR (fig10, fig11)");
  pre->add_option("--trials", preset.trials, "Monte Carlo trials per point")->capture_default_str();
  pre->add_option("--seed", preset.seed, "Monte Carlo seed")->capture_default_str();
  pre->add_option("--gh-points", preset.gh_points, "Gauss-Hermite points per axis")->capture_default_str();
  pre->add_option("--mode", preset.mode, "theory, sim or both (presets with simulation)")->capture_default_str();
  pre->add_option("--out", preset.out, "Output directory, one CSV per curve (default stdout)");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  Output sink(out);
  try {
    if (pre->parsed()) {
      if (pre->count("--sf")) preset.sf = preset_sf;
      if (pre->count("--sir-db")) preset.sir_db = preset_sir;
      if (preset.gh_points < 1 || preset.gh_points > 64) throw SpecError("--gh-points must be in [1, 64]");
      if (preset.trials < 1) throw SpecError("--trials must be >= 1");
      run_preset(preset_name, preset, sink);
      return 0;
    }
    spec.mode = parse_mode(mode_text);
    spec.detector = parse_detector(detector_text);
    if (spec.gh_points < 1 || spec.gh_points > 64) throw SpecError("--gh-points must be in [1, 64]");
    if (spec.trials < 1) throw SpecError("--trials must be >= 1");
    spec.scenario = mpc->parsed() ? "mpc" : "interference";
    const std::string csv = mpc->parsed() ? run_mpc(spec) : run_interference(spec);
    sink.write_file(spec.out, csv);
    return 0;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace lorasim::cli
