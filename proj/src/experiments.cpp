#include "cqw/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cqw/error.hpp"
#include "cqw/io.hpp"
#include "cqw/parallel.hpp"

namespace cqw {

namespace {

using json = nlohmann::ordered_json;

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i)
    v[static_cast<size_t>(i)] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  return v;
}

// Noise grid for the beta / PR / saturation sweeps.
std::vector<double> default_noise_levels() {
  return {0.0,        kPi / 10, kPi / 6,        kPi / 4,    kPi / 3,  5 * kPi / 12,
          kPi / 2,    2 * kPi / 3, 3 * kPi / 4, 5 * kPi / 6, kPi};
}

std::string phi_label(double phi) {
  struct Named {
    double value;
    const char* label;
  };
  static const Named kNames[] = {{0.0, "0"},           {kPi / 10, "pi_10"}, {kPi / 6, "pi_6"},
                                 {kPi / 4, "pi_4"},    {kPi / 3, "pi_3"},   {5 * kPi / 12, "5pi_12"},
                                 {kPi / 2, "pi_2"},    {2 * kPi / 3, "2pi_3"},
                                 {3 * kPi / 4, "3pi_4"}, {5 * kPi / 6, "5pi_6"}, {kPi, "pi"}};
  for (const auto& n : kNames)
    if (std::abs(n.value - phi) < 1e-12) return n.label;
  return format_double(phi);
}

std::string distribution_csv(const SiteDistribution& d) {
  std::ostringstream os;
  os << "site,probability\n";
  for (int s = 0; s < d.n_sites(); ++s) os << s + 1 << ',' << format_double(d[s]) << '\n';
  return os.str();
}

json coin_json(const NamedCoin& c) {
  return json{{"name", c.name},
              {"gamma", c.params.gamma()},
              {"theta", c.params.theta()},
              {"phi", c.params.phi()}};
}

WalkState start_state(int n) { return localized_state(n, default_initial_site(n)); }

}  // namespace

NamedCoin named_coin(std::string_view preset) {
  return {std::string(preset), coin_preset(preset)};
}

PrMap coin_pr_map(int n_sites, int resolution, PrMapSlice slice, int walker_steps, int threads) {
  check_sites(n_sites);
  require(n_sites <= 256, ErrorCode::kOutOfRange, "PR maps are limited to N <= 256");
  require(resolution >= 2, ErrorCode::kInvalidArgument, "PR map resolution must be >= 2");
  require(walker_steps >= 0, ErrorCode::kInvalidArgument, "walker steps must be >= 0");
  PrMap map;
  map.slice = slice;
  map.n_sites = n_sites;
  map.resolution = resolution;
  map.walker_steps = walker_steps;
  if (slice == PrMapSlice::kGammaVsEqualPhases) {
    map.x_axis = linspace(0.0, kPi / 2, resolution);
    map.y_axis = linspace(0.0, kTwoPi, resolution);
  } else {
    map.x_axis = linspace(0.0, kTwoPi, resolution);
    map.y_axis = linspace(0.0, kTwoPi, resolution);
  }
  const auto cells = static_cast<size_t>(resolution) * static_cast<size_t>(resolution);
  map.mean_pr.assign(cells, 0.0);
  if (walker_steps > 0) map.walker_pr.assign(cells, 0.0);
  const WalkState start = start_state(n_sites);
  parallel_for(cells, threads, [&](size_t i) {
    const double x = map.x_axis[i % static_cast<size_t>(resolution)];
    const double y = map.y_axis[i / static_cast<size_t>(resolution)];
    const CoinParams coin = slice == PrMapSlice::kGammaVsEqualPhases ? CoinParams(x, y, y)
                                                                     : CoinParams(kPi / 4, x, y);
    const StepOperator step(n_sites, coin);
    map.mean_pr[i] = mean_pr(numerical_spectrum(step));
    if (walker_steps > 0) map.walker_pr[i] = walker_pr(step, start, walker_steps);
  });
  return map;
}

std::optional<double> detect_crossover(const std::vector<double>& levels,
                                       const std::vector<double>& medians) {
  require(levels.size() == medians.size(), ErrorCode::kDimensionMismatch,
          "levels and medians differ in length");
  for (size_t i = 0; i + 1 < levels.size(); ++i) {
    if (medians[i] >= 1.0 && medians[i + 1] < 1.0) {
      const double t = (medians[i] - 1.0) / (medians[i] - medians[i + 1]);
      return levels[i] + t * (levels[i + 1] - levels[i]);
    }
  }
  return std::nullopt;
}

BetaSweep noise_beta_sweep(int n_sites, const NamedCoin& coin, const std::vector<double>& levels,
                           int n_realizations, std::uint64_t seed,
                           std::optional<std::pair<int, int>> window, FitMethod method,
                           int threads) {
  check_sites(n_sites);
  require(!levels.empty(), ErrorCode::kInvalidArgument, "no noise levels given");
  require(n_realizations >= 1, ErrorCode::kInvalidArgument, "need at least one realization");
  const auto [lo, hi] = window.value_or(default_fit_window(n_sites));
  require(lo >= 0 && hi > lo, ErrorCode::kInvalidArgument, "bad fit window");

  BetaSweep sweep;
  sweep.n_sites = n_sites;
  sweep.coin = coin.name;
  sweep.m_lo = lo;
  sweep.m_hi = hi;
  sweep.method = method;
  const StepOperator clean(n_sites, coin.params);
  const WalkState start = start_state(n_sites);
  const int s0 = default_initial_site(n_sites);
  std::vector<double> medians;
  for (double phi : levels) {
    BetaLevel level;
    level.phi_max = phi;
    const auto r_count = static_cast<size_t>(n_realizations);
    level.fits.resize(r_count);
    std::vector<std::string> errors(r_count);
    std::vector<std::vector<double>> msd(r_count);
    std::vector<int> steps;
    parallel_for(r_count, threads, [&](size_t r) {
      const NoiseProfile noise = sample_noise(n_sites, phi, seed, r);
      const DynamicsTrace trace = evolve(start, build_noisy_step(clean, noise), hi, s0);
      msd[r] = trace.msd;
      try {
        level.fits[r] = fit_power_law(trace, lo, hi, method);
      } catch (const Error& e) {
        errors[r] = e.what();
      }
    });
    for (int m = 0; m <= hi; ++m) steps.push_back(m);
    std::vector<double> mean_msd(steps.size(), 0.0);
    for (size_t r = 0; r < r_count; ++r) {
      if (level.fits[r]) level.betas.push_back(level.fits[r]->beta);
      else level.failures.push_back("realization " + std::to_string(r) + ": " + errors[r]);
      for (size_t i = 0; i < steps.size(); ++i) mean_msd[i] += msd[r][i] / n_realizations;
    }
    if (!level.betas.empty()) {
      level.beta_stats = box_stats(level.betas);
      medians.push_back(level.beta_stats.median);
    } else {
      medians.push_back(std::nan(""));
    }
    try {
      level.ensemble_mean_fit = fit_power_law(steps, mean_msd, lo, hi, method);
    } catch (const Error&) {
    }
    sweep.levels.push_back(std::move(level));
  }
  sweep.crossover = detect_crossover(levels, medians);
  return sweep;
}

std::vector<SaturationRow> saturation_sweep(const std::vector<int>& sizes, const NamedCoin& coin,
                                            const std::vector<double>& levels, int n_realizations,
                                            std::uint64_t seed, const SaturationOptions& opts,
                                            int threads) {
  require(n_realizations >= 1, ErrorCode::kInvalidArgument, "need at least one realization");
  require(opts.horizon <= opts.steps, ErrorCode::kInvalidArgument,
          "CV horizon exceeds the number of steps");
  for (int n : sizes) check_sites(n);
  struct Job {
    int n;
    double phi;
    int r;
  };
  std::vector<Job> jobs;
  for (int n : sizes)
    for (double phi : levels)
      for (int r = 0; r < n_realizations; ++r) jobs.push_back({n, phi, r});
  std::vector<SaturationRow> rows(jobs.size());
  parallel_for(jobs.size(), threads, [&](size_t i) {
    const Job& job = jobs[i];
    const NoiseProfile noise = sample_noise(job.n, job.phi, seed, static_cast<std::uint64_t>(job.r));
    const StepOperator step(job.n, coin.params, noise.phases);
    EvolveOptions eo;
    eo.record_every = opts.record_every;
    const DynamicsTrace trace =
        evolve(start_state(job.n), step, opts.steps, default_initial_site(job.n), eo);
    const ConvergenceReport rep = cv_convergence(trace, opts.threshold, opts.horizon);
    SaturationRow& row = rows[i];
    row.coin = coin.name;
    row.n_sites = job.n;
    row.phi_max = job.phi;
    row.realization = job.r;
    row.converged = rep.converged;
    row.saturation_level = rep.saturation_level;
    row.convergence_step = rep.convergence_step;
    row.min_cv = rep.min_cv;
    row.min_cv_window_mean = rep.min_cv_window_mean;
  });
  return rows;
}

std::vector<int> saturation_sizes(std::string_view coin, bool even) {
  std::vector<int> out;
  if (even) {
    for (int n = 20; n <= 50; n += 2) out.push_back(n);
  } else {
    const int first = coin == "symmetric" ? 3 : 13;
    for (int n = first; n <= 49; n += 2) out.push_back(n);
  }
  return out;
}

std::string pr_map_to_csv(const PrMap& map) {
  std::ostringstream os;
  const bool a = map.slice == PrMapSlice::kGammaVsEqualPhases;
  os << (a ? "gamma,theta_phi" : "theta,phi") << ",mean_pr";
  if (!map.walker_pr.empty()) os << ",walker_pr";
  os << '\n';
  const auto res = static_cast<size_t>(map.resolution);
  for (size_t iy = 0; iy < res; ++iy) {
    for (size_t ix = 0; ix < res; ++ix) {
      const size_t i = iy * res + ix;
      os << format_double(map.x_axis[ix]) << ',' << format_double(map.y_axis[iy]) << ','
         << format_double(map.mean_pr[i]);
      if (!map.walker_pr.empty()) os << ',' << format_double(map.walker_pr[i]);
      os << '\n';
    }
  }
  return os.str();
}

std::string beta_sweep_to_csv(const BetaSweep& sweep) {
  std::ostringstream os;
  os << "phi_max,realization,alpha,beta,residual,regime\n";
  for (const auto& level : sweep.levels) {
    for (size_t r = 0; r < level.fits.size(); ++r) {
      os << format_double(level.phi_max) << ',' << r << ',';
      if (const auto& f = level.fits[r]) {
        os << format_double(f->alpha) << ',' << format_double(f->beta) << ','
           << format_double(f->residual) << ',' << classify_spread(f->beta) << '\n';
      } else {
        os << ",,,failed\n";
      }
    }
  }
  return os.str();
}

std::string beta_summary_to_csv(const BetaSweep& sweep) {
  std::ostringstream os;
  os << "phi_max,n,failures,min,q1,median,q3,max,ensemble_alpha,ensemble_beta\n";
  for (const auto& l : sweep.levels) {
    os << format_double(l.phi_max) << ',' << l.betas.size() << ',' << l.failures.size();
    if (!l.betas.empty()) {
      const auto& s = l.beta_stats;
      os << ',' << format_double(s.min) << ',' << format_double(s.q1) << ','
         << format_double(s.median) << ',' << format_double(s.q3) << ',' << format_double(s.max);
    } else {
      os << ",,,,,";
    }
    if (l.ensemble_mean_fit)
      os << ',' << format_double(l.ensemble_mean_fit->alpha) << ','
         << format_double(l.ensemble_mean_fit->beta);
    else
      os << ",,";
    os << '\n';
  }
  return os.str();
}

std::string pr_ensemble_to_csv(const std::vector<PrEnsemble>& ensembles) {
  std::ostringstream os;
  os << "phi_max,realization,mean_pr\n";
  for (const auto& e : ensembles)
    for (size_t r = 0; r < e.mean_pr.size(); ++r)
      os << format_double(e.phi_max) << ',' << r << ',' << format_double(e.mean_pr[r]) << '\n';
  return os.str();
}

std::string pr_ensemble_summary_to_csv(const std::vector<PrEnsemble>& ensembles) {
  std::ostringstream os;
  os << "phi_max,layer,min,q1,median,q3,max\n";
  auto row = [&](double phi, const char* layer, const BoxStats& s) {
    os << format_double(phi) << ',' << layer << ',' << format_double(s.min) << ','
       << format_double(s.q1) << ',' << format_double(s.median) << ',' << format_double(s.q3)
       << ',' << format_double(s.max) << '\n';
  };
  for (const auto& e : ensembles) {
    row(e.phi_max, "realization_mean", e.stats);
    row(e.phi_max, "pooled_eigenstates", e.pooled_stats);
  }
  return os.str();
}

std::string saturation_to_csv(const std::vector<SaturationRow>& rows) {
  std::ostringstream os;
  os << "coin,n_sites,phi_max,realization,converged,saturation_level,convergence_step,min_cv,"
        "min_cv_window_mean\n";
  for (const auto& r : rows) {
    os << r.coin << ',' << r.n_sites << ',' << format_double(r.phi_max) << ',' << r.realization
       << ',' << (r.converged ? 1 : 0) << ','
       << (r.saturation_level ? format_double(*r.saturation_level) : "") << ','
       << (r.convergence_step ? std::to_string(*r.convergence_step) : "") << ','
       << format_double(r.min_cv) << ',' << format_double(r.min_cv_window_mean) << '\n';
  }
  return os.str();
}

std::string pr_map_to_json(const PrMap& map) {
  json j;
  j["slice"] = map.slice == PrMapSlice::kGammaVsEqualPhases ? "gamma_vs_equal_phases"
                                                            : "phases_at_quarter_pi";
  j["n_sites"] = map.n_sites;
  j["resolution"] = map.resolution;
  j["walker_steps"] = map.walker_steps;
  j["x_axis"] = map.x_axis;
  j["y_axis"] = map.y_axis;
  j["mean_pr"] = map.mean_pr;
  if (!map.walker_pr.empty()) j["walker_pr"] = map.walker_pr;
  return j.dump(2) + "\n";
}

std::string beta_sweep_to_json(const BetaSweep& sweep) {
  json j;
  j["n_sites"] = sweep.n_sites;
  j["coin"] = sweep.coin;
  j["window"] = {sweep.m_lo, sweep.m_hi};
  j["method"] = sweep.method == FitMethod::kNonlinear ? "nonlinear" : "loglog";
  j["crossover"] = sweep.crossover ? json(*sweep.crossover) : json(nullptr);
  json levels = json::array();
  for (const auto& l : sweep.levels) {
    json e;
    e["phi_max"] = l.phi_max;
    json fits = json::array();
    for (const auto& f : l.fits)
      fits.push_back(f ? json{{"alpha", f->alpha}, {"beta", f->beta}, {"residual", f->residual}}
                       : json(nullptr));
    e["fits"] = fits;
    e["failures"] = l.failures;
    if (!l.betas.empty()) {
      const auto& s = l.beta_stats;
      e["beta_stats"] = {{"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"q3", s.q3}, {"max", s.max}};
    }
    if (l.ensemble_mean_fit)
      e["ensemble_mean_fit"] = {{"alpha", l.ensemble_mean_fit->alpha},
                                {"beta", l.ensemble_mean_fit->beta}};
    levels.push_back(e);
  }
  j["levels"] = levels;
  return j.dump(2) + "\n";
}

std::string saturation_to_json(const std::vector<SaturationRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"coin", r.coin},
                   {"n_sites", r.n_sites},
                   {"phi_max", r.phi_max},
                   {"realization", r.realization},
                   {"converged", r.converged},
                   {"saturation_level", r.saturation_level ? json(*r.saturation_level) : json(nullptr)},
                   {"convergence_step", r.convergence_step ? json(*r.convergence_step) : json(nullptr)},
                   {"min_cv", r.min_cv},
                   {"min_cv_window_mean", r.min_cv_window_mean}});
  }
  return out.dump(2) + "\n";
}

namespace {

void trace_figure(int fig, const NamedCoin& coin, const ReproduceOptions& o, ArtifactLog& log,
                  json& config, std::ostringstream& summary) {
  const int n = 128;
  const int steps = n;
  const auto window = default_fit_window(n);
  const StepOperator clean(n, coin.params);
  config["coin"] = coin_json(coin);
  config["n_sites"] = n;
  config["steps"] = steps;
  config["fit_window"] = {window.first, window.second};
  config["noise_realization"] = 0;
  const std::string prefix = "fig" + std::to_string(fig) + "_";
  for (double phi : {0.0, kPi / 10, kPi / 3, kPi}) {
    const NoiseProfile noise = sample_noise(n, phi, o.seed, 0);
    EvolveOptions eo;
    eo.keep_distributions = true;
    const DynamicsTrace trace =
        evolve(start_state(n), build_noisy_step(clean, noise), steps, default_initial_site(n), eo);
    const FitResult fit = fit_power_law(trace, window.first, window.second);
    const std::string label = phi_label(phi);
    log.write(prefix + "phi" + label + "_trace.csv", trace_to_csv(trace));
    log.write(prefix + "phi" + label + "_distribution.csv", distributions_to_csv(trace));
    log.write(prefix + "phi" + label + "_fit.json", fit_to_json(fit));
    summary << "phi=" << label << " alpha=" << format_double(fit.alpha)
            << " beta=" << format_double(fit.beta) << "; ";
  }
}

void long_run_figure(int fig, const NamedCoin& coin, const ReproduceOptions& o, ArtifactLog& log,
                     json& config, std::ostringstream& summary) {
  const int n = 128;
  config["coin"] = coin_json(coin);
  config["n_sites"] = n;
  config["steps"] = o.long_steps;
  config["record_every"] = 10;
  config["report_steps"] = o.report_steps;
  config["cv_threshold"] = 0.01;
  config["cv_horizon"] = o.report_steps;
  config["noise_realization"] = 0;
  const StepOperator clean(n, coin.params);
  const std::string prefix = "fig" + std::to_string(fig) + "_";
  for (double phi : {0.0, kPi / 10, kPi / 3, kPi}) {
    const NoiseProfile noise = sample_noise(n, phi, o.seed, 0);
    EvolveOptions eo;
    eo.record_every = 10;
    DynamicsTrace trace =
        evolve(start_state(n), build_noisy_step(clean, noise), o.long_steps, default_initial_site(n), eo);
    const ConvergenceReport rep = cv_convergence(trace, 0.01, std::min(o.report_steps, o.long_steps));
    size_t keep = 0;
    while (keep < trace.steps.size() && trace.steps[keep] <= o.report_steps) ++keep;
    trace.steps.resize(keep);
    trace.mean_positions.resize(keep);
    trace.msd.resize(keep);
    const std::string label = phi_label(phi);
    log.write(prefix + "phi" + label + "_msd.csv", trace_to_csv(trace));
    log.write(prefix + "phi" + label + "_cv.json", convergence_to_json(rep, true));
    summary << "phi=" << label << " min_cv=" << format_double(rep.min_cv)
            << (rep.converged ? " converged" : " not converged") << "; ";
  }
}

}  // namespace

ReproduceResult reproduce_figure(int figure, const ReproduceOptions& o) {
  require(figure >= 1 && figure <= 10, ErrorCode::kInvalidArgument,
          "unknown figure id " + std::to_string(figure) + " (expected 1..10)");
  require(o.realizations >= 1 && o.saturation_realizations >= 1, ErrorCode::kInvalidArgument,
          "need at least one realization");
  ArtifactLog log(o.out_dir);
  json config;
  std::ostringstream summary;
  const std::string prefix = "fig" + std::to_string(figure) + "_";

  switch (figure) {
    case 1: {
      const int n = 128;
      config["n_sites"] = n;
      const std::pair<const char*, CoinParams> coins[] = {
          {"a", CoinParams(0.0, 0.0, 0.0)},
          {"b", CoinParams(kPi / 4, 0.0, 0.0)},
          {"c", CoinParams(kPi / 4, kPi / 4, kPi / 4)}};
      for (const auto& [panel, coin] : coins) {
        const SpectralReport rep = analytic_spectrum(n, coin);
        log.write(prefix + panel + ".csv", spectrum_to_csv(rep));
        config["coins"][panel] = {coin.gamma(), coin.theta(), coin.phi()};
        summary << panel << ": gap=" << format_double(rep.gap) << "; ";
      }
      break;
    }
    case 2: {
      const int n = 128;
      const CoinParams degenerate = coin_from_half_sum(kPi / 4, 64 * kPi / n);
      const CoinParams flat = coin_from_half_sum(kPi / 4, 5 * kPi / 14);
      config["n_sites"] = n;
      config["degenerate_coin"] = {degenerate.gamma(), degenerate.theta(), degenerate.phi()};
      config["nondegenerate_coin"] = {flat.gamma(), flat.theta(), flat.phi()};
      const auto pairs = degenerate_pair_states(n, degenerate);
      require(!pairs.empty(), ErrorCode::kNumerical, "expected a degenerate spectrum");
      const SiteDistribution d1 = site_distribution(n, pairs.front().amplitudes);
      const SiteDistribution d2 = site_distribution(n, bloch_eigenstate(n, flat, 0, 0));
      log.write(prefix + "degenerate.csv", distribution_csv(d1));
      log.write(prefix + "nondegenerate.csv", distribution_csv(d2));
      summary << "degenerate max P=" << format_double(*std::max_element(d1.probabilities.begin(), d1.probabilities.end()))
              << " (2/N=" << format_double(2.0 / n) << "); ";
      break;
    }
    case 3: {
      const int n = 32;
      const int steps = 1000;
      config["n_sites"] = n;
      config["walker_steps"] = steps;
      config["resolution"] = o.pr_map_resolution;
      config["initial_site"] = default_initial_site(n) + 1;
      const PrMap a = coin_pr_map(n, o.pr_map_resolution, PrMapSlice::kGammaVsEqualPhases, steps, o.threads);
      const PrMap d = coin_pr_map(n, o.pr_map_resolution, PrMapSlice::kPhasesAtQuarterPi, steps, o.threads);
      log.write(prefix + "map_a.csv", pr_map_to_csv(a));
      log.write(prefix + "map_d.csv", pr_map_to_csv(d));
      const std::pair<const char*, CoinParams> coins[] = {
          {"b", CoinParams(kPi / 4, 5 * kPi / 32, 5 * kPi / 32)},
          {"c", CoinParams(kPi / 4, 5.5 * kPi / 32, 5.5 * kPi / 32)},
          {"e", CoinParams(kPi / 4, 13 * kPi / 32, 17 * kPi / 32)},
          {"f", CoinParams(kPi / 4, 12 * kPi / 32, 17 * kPi / 32)}};
      for (const auto& [panel, coin] : coins) {
        const StepOperator step(n, coin);
        EvolveOptions eo;
        eo.record_every = steps;
        const DynamicsTrace t = evolve(start_state(n), step, steps, default_initial_site(n), eo);
        const SiteDistribution dist = site_distribution(n, t.final_amplitudes);
        log.write(prefix + "distribution_" + panel + ".csv", distribution_csv(dist));
        config["coins"][panel] = {coin.gamma(), coin.theta(), coin.phi()};
        summary << panel << ": walker PR=" << format_double(participation_ratio(dist)) << "; ";
      }
      break;
    }
    case 4:
      trace_figure(4, named_coin("hadamard"), o, log, config, summary);
      break;
    case 5:
      trace_figure(5, named_coin("symmetric"), o, log, config, summary);
      break;
    case 6: {
      const int n = 128;
      const auto levels = default_noise_levels();
      config["n_sites"] = n;
      config["noise_levels"] = levels;
      config["realizations"] = o.realizations;
      config["fit_window"] = {1, n / 2};
      for (const char* name : {"hadamard", "symmetric"}) {
        const NamedCoin coin = named_coin(name);
        std::vector<PrEnsemble> prs;
        for (double phi : levels)
          prs.push_back(noisy_pr_ensemble(n, coin.params, phi, o.realizations, o.seed, o.threads));
        const BetaSweep sweep =
            noise_beta_sweep(n, coin, levels, o.realizations, o.seed, std::nullopt,
                             FitMethod::kNonlinear, o.threads);
        const std::string p = prefix + name + "_";
        log.write(p + "pr.csv", pr_ensemble_to_csv(prs));
        log.write(p + "pr_summary.csv", pr_ensemble_summary_to_csv(prs));
        log.write(p + "beta.csv", beta_sweep_to_csv(sweep));
        log.write(p + "beta_summary.csv", beta_summary_to_csv(sweep));
        summary << name << " crossover="
                << (sweep.crossover ? format_double(*sweep.crossover) : std::string("none")) << "; ";
      }
      break;
    }
    case 7:
      long_run_figure(7, named_coin("hadamard"), o, log, config, summary);
      break;
    case 10:
      long_run_figure(10, named_coin("symmetric"), o, log, config, summary);
      break;
    case 8: {
      std::vector<int> sizes;
      for (int n = 3; n <= 50; ++n) sizes.push_back(n);
      SaturationOptions so;
      config["sizes"] = sizes;
      config["noise_level"] = kPi;
      config["realizations"] = o.saturation_realizations;
      config["steps"] = so.steps;
      config["record_every"] = so.record_every;
      config["cv_threshold"] = so.threshold;
      for (const char* name : {"hadamard", "symmetric"}) {
        const auto rows = saturation_sweep(sizes, named_coin(name), {kPi},
                                           o.saturation_realizations, o.seed, so, o.threads);
        log.write(prefix + name + "_min_cv.csv", saturation_to_csv(rows));
        const auto converged = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.converged; });
        summary << name << ": " << converged << "/" << rows.size() << " runs converged; ";
      }
      break;
    }
    case 9: {
      const auto levels = default_noise_levels();
      SaturationOptions so;
      config["noise_levels"] = levels;
      config["realizations"] = o.saturation_realizations;
      config["steps"] = so.steps;
      config["record_every"] = so.record_every;
      config["cv_threshold"] = so.threshold;
      const std::pair<const char*, bool> panels[] = {
          {"hadamard", false}, {"hadamard", true}, {"symmetric", false}, {"symmetric", true}};
      for (const auto& [name, even] : panels) {
        const auto sizes = saturation_sizes(name, even);
        const auto rows = saturation_sweep(sizes, named_coin(name), levels,
                                           o.saturation_realizations, o.seed, so, o.threads);
        const std::string series = std::string(name) + (even ? "_even" : "_odd");
        config["sizes"][series] = sizes;
        log.write(prefix + series + ".csv", saturation_to_csv(rows));
        const auto converged = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.converged; });
        summary << series << ": " << converged << "/" << rows.size() << " converged; ";
      }
      break;
    }
    default:
      break;
  }

  json manifest;
  manifest["figure"] = figure;
  manifest["seed"] = o.seed;
  manifest["config"] = config;
  json files = json::array();
  for (const auto& [name, hash] : log.files()) files.push_back({{"name", name}, {"sha256", hash}});
  manifest["files"] = files;
  write_text_file(o.out_dir / "manifest.json", manifest.dump(2) + "\n");

  ReproduceResult res;
  res.figure = figure;
  for (const auto& f : log.files()) res.files.push_back(f.first);
  res.files.push_back("manifest.json");
  res.summary = summary.str();
  if (!res.summary.empty() && res.summary.back() == ' ') res.summary.resize(res.summary.size() - 2);
  return res;
}

}  // namespace cqw
