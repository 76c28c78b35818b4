// cqw: command-line front end. Talks to the library through the C API only.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqw/cqw.h"

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ComputeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(cqw_status s) {
  if (s != CQW_OK) throw ComputeError(cqw_last_error());
}

double angle(const std::string& text, const char* flag) {
  double v = 0.0;
  if (cqw_parse_angle(text.c_str(), &v) != CQW_OK)
    throw UsageError(std::string(flag) + ": " + cqw_last_error());
  return v;
}

std::vector<double> angles(const std::vector<std::string>& texts, const char* flag) {
  std::vector<double> out;
  for (const auto& t : texts) out.push_back(angle(t, flag));
  return out;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Flags shared by every subcommand.
struct Common {
  std::uint64_t seed = cqw_reproduce_options_default().seed;
  std::string out;
  std::string format = "csv";
  int threads = 0;

  void add(CLI::App* sub) {
    sub->add_option("--seed", seed, "Master seed for noise realizations");
    sub->add_option("--out", out, "Output directory (default: $CQW_OUT_DIR or .)");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  }

  cqw_format fmt() const { return format == "json" ? CQW_FORMAT_JSON : CQW_FORMAT_CSV; }
  const char* ext() const { return format == "json" ? ".json" : ".csv"; }

  fs::path dir() const {
    if (!out.empty()) return out;
    if (const char* env = std::getenv("CQW_OUT_DIR"); env && *env) return env;
    return ".";
  }

  std::string path(const std::string& stem) const { return (dir() / (stem + ext())).string(); }
};

// Coin selection: a preset, explicit angles, or gamma plus half-sum.
struct CoinFlags {
  std::string preset;
  std::string gamma, theta, phi, half_sum;

  void add(CLI::App* sub, const char* default_preset) {
    preset = default_preset;
    sub->add_option("--coin", preset, "Coin preset")->check(CLI::IsMember({"hadamard", "symmetric"}));
    sub->add_option("--gamma", gamma, "Coin angle gamma (e.g. pi/4)");
    sub->add_option("--theta", theta, "Coin phase theta");
    sub->add_option("--phi", phi, "Coin phase phi");
    sub->add_option("--half-sum", half_sum, "Sets theta = phi = value");
  }

  cqw_coin resolve() const {
    cqw_coin c{};
    if (cqw_coin_preset(preset.c_str(), &c) != CQW_OK) throw UsageError(cqw_last_error());
    if (!gamma.empty()) c.gamma = angle(gamma, "--gamma");
    if (!half_sum.empty()) {
      if (!theta.empty() || !phi.empty())
        throw UsageError("--half-sum cannot be combined with --theta/--phi");
      c.theta = c.phi = angle(half_sum, "--half-sum");
    }
    if (!theta.empty()) c.theta = angle(theta, "--theta");
    if (!phi.empty()) c.phi = angle(phi, "--phi");
    if (cqw_coin_check(&c) != CQW_OK) throw UsageError(cqw_last_error());
    return c;
  }
};

std::pair<int, int> parse_window(const std::string& text) {
  if (text.empty()) return {0, 0};
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    size_t a = 0, b = 0;
    const int lo = std::stoi(text.substr(0, colon), &a);
    const int hi = std::stoi(text.substr(colon + 1), &b);
    if (a != colon || b != text.size() - colon - 1 || lo < 0 || hi <= lo)
      throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("--fit expects LO:HI with 0 <= LO < HI, got '" + text + "'");
  }
}

struct Step {
  cqw_step* p = nullptr;
  ~Step() { cqw_step_destroy(p); }
};
struct Spectrum {
  cqw_spectrum* p = nullptr;
  ~Spectrum() { cqw_spectrum_destroy(p); }
};
struct Trace {
  cqw_trace* p = nullptr;
  ~Trace() { cqw_trace_destroy(p); }
};
struct Circuit {
  cqw_circuit* p = nullptr;
  ~Circuit() { cqw_circuit_destroy(p); }
};

void make_step(Step& s, int sites, const cqw_coin& coin, double noise, std::uint64_t seed,
               std::uint64_t realization) {
  if (noise > 0.0)
    check(cqw_step_create_noisy(sites, &coin, noise, seed, realization, &s.p));
  else
    check(cqw_step_create(sites, &coin, &s.p));
}

template <class Fn>
std::string read_string(Fn&& fn) {
  size_t needed = 0;
  check(fn(nullptr, 0, &needed));
  std::string s(needed, '\0');
  check(fn(s.data(), s.size(), &needed));
  s.resize(needed - 1);
  return s;
}

void write_file(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  f << content;
  if (!f) throw ComputeError("cannot write " + p.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coined quantum walks on cyclic graphs with static phase noise"};
  app.set_config("--config", "", "Key = value file mirroring the flags");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cqw_version()));

  // spectrum
  Common spec_c;
  CoinFlags spec_coin;
  int spec_sites = 0;
  std::string spec_noise = "0";
  std::uint64_t spec_real = 0;
  bool spec_numerical = false;
  auto* spec = app.add_subcommand("spectrum", "Eigenvalues and eigenstate PRs of the step operator");
  spec_c.add(spec);
  spec_coin.add(spec, "hadamard");
  spec->add_option("--sites", spec_sites, "Number of sites N")->required()->check(CLI::Range(3, 4096));
  spec->add_option("--noise", spec_noise, "Static noise level phi_s (implies --numerical)");
  spec->add_option("--realization", spec_real, "Noise realization index");
  spec->add_flag("--numerical", spec_numerical, "Dense eigendecomposition instead of the closed form");

  // walk
  Common walk_c;
  CoinFlags walk_coin;
  int walk_sites = 0, walk_steps = 0, walk_every = 1, walk_s0 = -1;
  std::string walk_noise = "0", walk_fit;
  std::uint64_t walk_real = 0;
  bool walk_literal = false, walk_loglog = false, walk_dists = false;
  auto* walk = app.add_subcommand("walk", "Evolve a localized walker and fit the MSD power law");
  walk_c.add(walk);
  walk_coin.add(walk, "hadamard");
  walk->add_option("--sites", walk_sites, "Number of sites N")->required()->check(CLI::Range(3, 1 << 20));
  walk->add_option("--steps", walk_steps, "Number of steps")->required()->check(CLI::PositiveNumber);
  walk->add_option("--record-every", walk_every, "Record cadence")->check(CLI::PositiveNumber);
  walk->add_option("--initial-site", walk_s0, "Initial site, 0-based (default N/2)");
  walk->add_option("--noise", walk_noise, "Static noise level phi_s");
  walk->add_option("--realization", walk_real, "Noise realization index");
  walk->add_option("--fit", walk_fit, "Fit window LO:HI (default 1:N/2)");
  walk->add_flag("--literal-msd", walk_literal, "Squared displacement of the mean position");
  walk->add_flag("--loglog", walk_loglog, "Fit by log-log least squares");
  walk->add_flag("--distributions", walk_dists, "Also write P(s, m) for every record");

  // sweep-beta
  Common sb_c;
  std::string sb_coin = "hadamard", sb_fit;
  int sb_sites = 128, sb_real = 50;
  bool sb_loglog = false;
  std::vector<std::string> sb_levels{"0", "pi/10", "pi/6", "pi/4", "pi/3", "5pi/12",
                                     "pi/2", "2pi/3", "3pi/4", "5pi/6", "pi"};
  auto* sb = app.add_subcommand("sweep-beta", "Spreading exponent ensembles across noise levels");
  sb_c.add(sb);
  sb->add_option("--coin", sb_coin, "Coin preset")->check(CLI::IsMember({"hadamard", "symmetric"}));
  sb->add_option("--sites", sb_sites, "Number of sites N")->check(CLI::Range(3, 1 << 20));
  sb->add_option("--levels", sb_levels, "Noise levels")->delimiter(',');
  sb->add_option("--realizations", sb_real, "Realizations per level")->check(CLI::PositiveNumber);
  sb->add_option("--fit", sb_fit, "Fit window LO:HI (default 1:N/2)");
  sb->add_flag("--loglog", sb_loglog, "Fit by log-log least squares");

  // sweep-saturation
  Common ss_c;
  std::string ss_coin = "hadamard", ss_parity;
  std::vector<int> ss_sizes;
  std::vector<std::string> ss_levels{"pi/3", "pi/2", "2pi/3", "pi"};
  int ss_real = 10;
  cqw_saturation_options ss_opt = cqw_saturation_options_default();
  auto* ss = app.add_subcommand("sweep-saturation", "CV convergence and saturation levels");
  ss_c.add(ss);
  ss->add_option("--coin", ss_coin, "Coin preset")->check(CLI::IsMember({"hadamard", "symmetric"}));
  auto* ss_sizes_opt = ss->add_option("--sizes", ss_sizes, "Graph sizes")->delimiter(',')->check(CLI::Range(3, 1 << 20));
  ss->add_option("--preset", ss_parity, "Size preset for the coin: odd or even")
      ->check(CLI::IsMember({"odd", "even"}))->excludes(ss_sizes_opt);
  ss->add_option("--levels", ss_levels, "Noise levels")->delimiter(',');
  ss->add_option("--realizations", ss_real, "Realizations per point")->check(CLI::PositiveNumber);
  ss->add_option("--steps", ss_opt.steps, "Steps per run")->check(CLI::PositiveNumber);
  ss->add_option("--record-every", ss_opt.record_every, "Record cadence")->check(CLI::PositiveNumber);
  ss->add_option("--horizon", ss_opt.horizon, "CV search horizon in steps")->check(CLI::PositiveNumber);
  ss->add_option("--threshold", ss_opt.threshold, "CV threshold")->check(CLI::PositiveNumber);

  // pr-map
  Common pm_c;
  int pm_sites = 32, pm_res = 64, pm_walker = 0;
  std::string pm_slice = "a";
  auto* pm = app.add_subcommand("pr-map", "Mean eigenstate PR over a coin-parameter grid");
  pm_c.add(pm);
  pm->add_option("--sites", pm_sites, "Number of sites N")->check(CLI::Range(3, 256));
  pm->add_option("--resolution", pm_res, "Grid points per axis")->check(CLI::Range(2, 1024));
  pm->add_option("--slice", pm_slice, "a: gamma vs theta=phi; d: theta vs phi at gamma=pi/4")
      ->check(CLI::IsMember({"a", "d"}));
  pm->add_option("--walker-steps", pm_walker, "Also store the walker PR after this many steps")
      ->check(CLI::NonNegativeNumber);

  // converge
  Common cv_c;
  CoinFlags cv_coin;
  int cv_sites = 128, cv_steps = 50000, cv_every = 10, cv_horizon = 5000;
  double cv_threshold = 0.01;
  std::string cv_noise = "pi", cv_policy = "first";
  std::uint64_t cv_real = 0;
  auto* cv = app.add_subcommand("converge", "Long run with CV convergence analysis");
  cv_c.add(cv);
  cv_coin.add(cv, "hadamard");
  cv->add_option("--sites", cv_sites, "Number of sites N")->check(CLI::Range(3, 1 << 20));
  cv->add_option("--steps", cv_steps, "Number of steps")->check(CLI::PositiveNumber);
  cv->add_option("--record-every", cv_every, "Record cadence")->check(CLI::PositiveNumber);
  cv->add_option("--horizon", cv_horizon, "CV search horizon in steps")->check(CLI::PositiveNumber);
  cv->add_option("--threshold", cv_threshold, "CV threshold")->check(CLI::PositiveNumber);
  cv->add_option("--noise", cv_noise, "Static noise level phi_s");
  cv->add_option("--realization", cv_real, "Noise realization index");
  cv->add_option("--policy", cv_policy, "Saturation window")->check(CLI::IsMember({"first", "min-cv"}));

  // circuit
  Common ci_c;
  CoinFlags ci_coin;
  int ci_qubits = 0, ci_steps = 1, ci_power = 1;
  std::string ci_kind = "walk", ci_noise = "0";
  std::uint64_t ci_real = 0;
  bool ci_verify = false, ci_adjoint = false, ci_print = false;
  auto* ci = app.add_subcommand("circuit", "Compile walk circuits to quantum assembly");
  ci_c.add(ci);
  ci_coin.add(ci, "hadamard");
  ci->add_option("--qubits", ci_qubits, "Position qubits n (N = 2^n)")->required()->check(CLI::Range(1, 10));
  ci->add_option("--kind", ci_kind, "Circuit to build")
      ->check(CLI::IsMember({"walk", "step", "coin", "qft", "iqft", "clock"}));
  ci->add_option("--steps", ci_steps, "Walk steps")->check(CLI::PositiveNumber);
  ci->add_option("--power", ci_power, "Clock power")->check(CLI::PositiveNumber);
  ci->add_flag("--adjoint", ci_adjoint, "Adjoint clock");
  ci->add_option("--noise", ci_noise, "Static noise level phi_s for walk circuits");
  ci->add_option("--realization", ci_real, "Noise realization index");
  ci->add_flag("--verify", ci_verify, "Compare with the dense operator");
  ci->add_flag("--print", ci_print, "Also print the assembly text");

  // reproduce
  Common rp_c;
  std::string rp_figure;
  cqw_reproduce_options rp_opt = cqw_reproduce_options_default();
  auto* rp = app.add_subcommand("reproduce", "Write the data behind one of the reference figures (1..10)");
  rp_c.add(rp);
  rp->add_option("--figure", rp_figure, "Figure id 1..10 or 'all'")->required();
  rp->add_option("--realizations", rp_opt.realizations, "Noise realizations (figure 6)")->check(CLI::PositiveNumber);
  rp->add_option("--resolution", rp_opt.pr_map_resolution, "PR map grid (figure 3)")->check(CLI::Range(2, 1024));
  rp->add_option("--long-steps", rp_opt.long_steps, "Long-run steps (figures 7, 10)")->check(CLI::PositiveNumber);
  rp->add_option("--report-steps", rp_opt.report_steps, "Steps kept in long-run output")->check(CLI::PositiveNumber);
  rp->add_option("--saturation-realizations", rp_opt.saturation_realizations,
                 "Realizations per point (figures 8, 9)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*spec) {
      const cqw_coin coin = spec_coin.resolve();
      const double noise = angle(spec_noise, "--noise");
      Spectrum s;
      if (noise > 0.0 || spec_numerical) {
        Step st;
        make_step(st, spec_sites, coin, noise, spec_c.seed, spec_real);
        check(cqw_spectrum_numerical(st.p, &s.p));
      } else {
        check(cqw_spectrum_analytic(spec_sites, &coin, &s.p));
      }
      const std::string path = spec_c.path("spectrum");
      check(cqw_spectrum_write(s.p, path.c_str(), spec_c.fmt()));
      cqw_spectrum_info info{};
      check(cqw_spectrum_get_info(s.p, &info));
      std::cout << "N=" << info.n_sites << " eigenvalues=" << cqw_spectrum_size(s.p)
                << " gap=" << fmt(info.gap) << " degenerate=" << (info.degenerate ? "yes" : "no")
                << " mean PR=" << fmt(info.mean_pr) << " -> " << path << "\n";
    } else if (*walk) {
      const cqw_coin coin = walk_coin.resolve();
      const double noise = angle(walk_noise, "--noise");
      const auto window = parse_window(walk_fit);
      if (walk_s0 >= walk_sites) throw UsageError("--initial-site must be below --sites");
      Step st;
      make_step(st, walk_sites, coin, noise, walk_c.seed, walk_real);
      cqw_evolve_options eo = cqw_evolve_options_default();
      eo.initial_site = walk_s0;
      eo.record_every = walk_every;
      eo.keep_distributions = walk_dists ? 1 : 0;
      eo.literal_msd = walk_literal ? 1 : 0;
      Trace t;
      check(cqw_evolve(st.p, walk_steps, &eo, &t.p));
      const std::string path = walk_c.path("trace");
      check(cqw_trace_write(t.p, path.c_str(), walk_c.fmt()));
      if (walk_dists) {
        const std::string dpath = (walk_c.dir() / "distributions.csv").string();
        check(cqw_trace_write_distributions(t.p, dpath.c_str()));
      }
      std::vector<double> final_dist(static_cast<size_t>(walk_sites));
      check(cqw_trace_final_distribution(t.p, final_dist.data(), final_dist.size()));
      double sum2 = 0.0;
      for (double p : final_dist) sum2 += p * p;
      std::ostringstream line;
      cqw_fit fit{};
      if (cqw_trace_fit(t.p, window.first, window.second, walk_loglog ? 1 : 0, &fit) == CQW_OK) {
        const std::string fpath = (walk_c.dir() / "fit.json").string();
        check(cqw_fit_write(&fit, fpath.c_str()));
        line << "beta=" << fmt(fit.beta) << " alpha=" << fmt(fit.alpha) << " ("
             << cqw_classify_spread(fit.beta) << ", window " << fit.m_lo << ":" << fit.m_hi << ") ";
      } else {
        line << "fit skipped (" << cqw_last_error() << ") ";
      }
      line << "final PR=" << fmt(1.0 / sum2) << " -> " << path;
      std::cout << line.str() << "\n";
    } else if (*sb) {
      const auto levels = angles(sb_levels, "--levels");
      const auto window = parse_window(sb_fit);
      std::vector<cqw_beta_level> out(levels.size());
      double crossover = 0.0;
      const std::string dir = sb_c.dir().string();
      check(cqw_sweep_beta(sb_sites, sb_coin.c_str(), levels.data(), levels.size(), sb_real,
                           sb_c.seed, window.first, window.second, sb_loglog ? 1 : 0, sb_c.threads,
                           dir.c_str(), sb_c.fmt(), out.data(), &crossover));
      std::cout << "median beta:";
      for (const auto& l : out) std::cout << " " << fmt(l.phi_max) << "->" << fmt(l.median_beta);
      std::cout << "; crossover phi=" << fmt(crossover) << "\n";
    } else if (*ss) {
      const auto levels = angles(ss_levels, "--levels");
      std::vector<int> sizes = ss_sizes;
      if (sizes.empty()) {
        const bool even = ss_parity == "even";
        if (even) for (int n = 20; n <= 50; n += 2) sizes.push_back(n);
        else for (int n = ss_coin == "symmetric" ? 3 : 13; n <= 49; n += 2) sizes.push_back(n);
      }
      cqw_saturation_summary sum{};
      const std::string path = ss_c.path("saturation");
      check(cqw_sweep_saturation(sizes.data(), sizes.size(), ss_coin.c_str(), levels.data(),
                                 levels.size(), ss_real, ss_c.seed, &ss_opt, ss_c.threads,
                                 path.c_str(), ss_c.fmt(), &sum));
      std::cout << "converged " << sum.converged << "/" << sum.runs << " runs; median saturation="
                << fmt(sum.median_saturation) << " median min CV=" << fmt(sum.median_min_cv)
                << " -> " << path << "\n";
    } else if (*pm) {
      const std::string path = pm_c.path("pr_map_" + pm_slice);
      check(cqw_pr_map(pm_sites, pm_res, pm_slice == "a" ? 0 : 1, pm_walker, pm_c.threads,
                       path.c_str(), pm_c.fmt()));
      std::cout << "mean PR map N=" << pm_sites << " " << pm_res << "x" << pm_res << " -> " << path << "\n";
    } else if (*cv) {
      const cqw_coin coin = cv_coin.resolve();
      const double noise = angle(cv_noise, "--noise");
      if (cv_horizon > cv_steps) throw UsageError("--horizon exceeds --steps");
      Step st;
      make_step(st, cv_sites, coin, noise, cv_c.seed, cv_real);
      cqw_evolve_options eo = cqw_evolve_options_default();
      eo.record_every = cv_every;
      Trace t;
      check(cqw_evolve(st.p, cv_steps, &eo, &t.p));
      const int policy = cv_policy == "min-cv" ? 1 : 0;
      cqw_convergence rep{};
      check(cqw_trace_converge(t.p, cv_threshold, cv_horizon, policy, &rep));
      const std::string path = cv_c.path("msd");
      check(cqw_trace_write(t.p, path.c_str(), cv_c.fmt()));
      const std::string jpath = (cv_c.dir() / "convergence.json").string();
      check(cqw_trace_write_convergence(t.p, cv_threshold, cv_horizon, policy, jpath.c_str()));
      std::cout << (rep.converged ? "converged at step " + std::to_string(rep.convergence_step)
                                  : std::string("not converged"))
                << "; saturation=" << fmt(rep.saturation_level) << " min CV=" << fmt(rep.min_cv)
                << " (window " << rep.window << ") -> " << path << "\n";
    } else if (*ci) {
      const cqw_coin coin = ci_coin.resolve();
      const double noise = angle(ci_noise, "--noise");
      Circuit c;
      if (ci_kind == "walk")
        check(cqw_circuit_walk(ci_qubits, &coin, ci_steps, noise > 0.0, noise, ci_c.seed, ci_real, &c.p));
      else if (ci_kind == "step")
        check(cqw_circuit_step(ci_qubits, &coin, &c.p));
      else if (ci_kind == "coin")
        check(cqw_circuit_coin(&coin, &c.p));
      else if (ci_kind == "qft" || ci_kind == "iqft")
        check(cqw_circuit_qft(ci_qubits, ci_kind == "iqft", &c.p));
      else
        check(cqw_circuit_clock(ci_qubits, ci_power, ci_adjoint, &c.p));
      const std::string qasm = read_string(
          [&](char* b, size_t cap, size_t* n) { return cqw_circuit_qasm(c.p, b, cap, n); });
      const std::string counts = read_string(
          [&](char* b, size_t cap, size_t* n) { return cqw_circuit_counts_json(c.p, b, cap, n); });
      const fs::path qpath = ci_c.dir() / "circuit.qasm";
      write_file(qpath, qasm);
      const auto cj = nlohmann::ordered_json::parse(counts);
      if (ci_c.format == "json") {
        write_file(ci_c.dir() / "gate_counts.json", counts);
      } else {
        std::ostringstream csv;
        csv << "gate,count\n";
        for (const auto& [k, v] : cj.items()) csv << k << ',' << v.get<int>() << '\n';
        write_file(ci_c.dir() / "gate_counts.csv", csv.str());
      }
      if (ci_print) std::cout << qasm;
      std::cout << "qubits=" << cqw_circuit_qubits(c.p) << " gates=" << cj["total"].get<int>()
                << " two-qubit=" << cj["two_qubit"].get<int>() << " depth=" << cj["depth"].get<int>();
      if (ci_verify) {
        double dev = 0.0;
        int eq = 0;
        check(cqw_circuit_verify(c.p, &dev, &eq));
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3e", dev);
        std::cout << " max deviation=" << buf << (eq ? " (equivalent)" : " (NOT equivalent)");
      }
      std::cout << " -> " << qpath.string() << "\n";
    } else if (*rp) {
      std::vector<int> figures;
      if (rp_figure == "all") {
        for (int f = 1; f <= 10; ++f) figures.push_back(f);
      } else {
        try {
          size_t used = 0;
          const int f = std::stoi(rp_figure, &used);
          if (used != rp_figure.size() || f < 1 || f > 10) throw std::invalid_argument(rp_figure);
          figures.push_back(f);
        } catch (const std::logic_error&) {
          throw UsageError("--figure must be 1..10 or 'all', got '" + rp_figure + "'");
        }
      }
      rp_opt.seed = rp_c.seed;
      rp_opt.threads = rp_c.threads;
      for (int f : figures) {
        const fs::path dir = figures.size() > 1 ? rp_c.dir() / ("fig" + std::to_string(f)) : rp_c.dir();
        const std::string d = dir.string();
        const std::string summary = read_string([&](char* b, size_t cap, size_t* n) {
          return cqw_reproduce(f, d.c_str(), &rp_opt, b, cap, n);
        });
        std::cout << "figure " << f << ": " << summary << " -> " << d << "\n";
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ComputeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
