#include "cqw/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>
#include <unsupported/Eigen/NonLinearOptimization>

#include "cqw/error.hpp"
#include "cqw/io.hpp"

namespace cqw {

namespace {

double msd_for(MsdMode mode, const SiteDistribution& dist, int s0, double x0) {
  return mode == MsdMode::kPerSite ? msd_at(dist, s0) : msd_literal(dist, x0);
}

// Residuals alpha m^beta - y in the parameters (log alpha, beta).
struct PowerLawResiduals {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const std::vector<double>& m;
  const std::vector<double>& y;

  int inputs() const { return 2; }
  int values() const { return static_cast<int>(m.size()); }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    for (size_t i = 0; i < m.size(); ++i)
      f[static_cast<Eigen::Index>(i)] = std::exp(x[0] + x[1] * std::log(m[i])) - y[i];
    return 0;
  }

  int df(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const {
    for (size_t i = 0; i < m.size(); ++i) {
      const double lm = std::log(m[i]);
      const double v = std::exp(x[0] + x[1] * lm);
      jac(static_cast<Eigen::Index>(i), 0) = v;
      jac(static_cast<Eigen::Index>(i), 1) = v * lm;
    }
    return 0;
  }
};

std::pair<double, double> loglog_ols(const std::vector<double>& m, const std::vector<double>& y) {
  const double n = static_cast<double>(m.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < m.size(); ++i) {
    const double lx = std::log(m[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  return {intercept, slope};
}

}  // namespace

double msd_at(const SiteDistribution& dist, double s0) {
  double total = 0.0;
  for (int s = 0; s < dist.n_sites(); ++s) {
    const double d = cyclic_distance(dist.n_sites(), s, s0);
    total += d * d * dist[s];
  }
  return total;
}

double msd_literal(const SiteDistribution& dist, double x0) {
  const double d = cyclic_distance(dist.n_sites(), mean_position(dist), x0);
  return d * d;
}

DynamicsTrace evolve(const WalkState& initial, const StepOperator& step, int n_steps,
                     int initial_site, const EvolveOptions& options) {
  require(initial.n_sites() == step.n_sites(), ErrorCode::kDimensionMismatch,
          "state and step operator sizes differ");
  require(n_steps >= 1, ErrorCode::kInvalidArgument, "need at least one step");
  require(options.record_every >= 1, ErrorCode::kInvalidArgument, "record_every must be >= 1");
  require(initial_site >= 0 && initial_site < step.n_sites(), ErrorCode::kOutOfRange,
          "initial site outside the cycle");

  const int n = step.n_sites();
  DynamicsTrace trace;
  trace.n_sites = n;
  trace.initial_site = initial_site;
  const auto records = static_cast<size_t>(n_steps / options.record_every + 1);
  trace.steps.reserve(records);
  trace.mean_positions.reserve(records);
  trace.msd.reserve(records);
  trace.norms.reserve(records);

  ComplexVector a = initial.amplitudes();
  ComplexVector b(a.size());
  const double x0 = mean_position(site_distribution(n, a));
  auto record = [&](int m) {
    SiteDistribution dist = site_distribution(n, a);
    trace.steps.push_back(m);
    trace.mean_positions.push_back(mean_position(dist));
    trace.msd.push_back(msd_for(options.msd_mode, dist, initial_site, x0));
    trace.norms.push_back(std::accumulate(dist.probabilities.begin(), dist.probabilities.end(), 0.0));
    if (options.keep_distributions) trace.distributions.push_back(std::move(dist));
  };
  record(0);
  for (int m = 1; m <= n_steps; ++m) {
    step.apply(a, b);
    a.swap(b);
    if (m % options.record_every == 0) record(m);
  }
  trace.final_amplitudes = std::move(a);
  return trace;
}

std::pair<int, int> default_fit_window(int n_sites) { return {1, n_sites / 2}; }

FitResult fit_power_law(const std::vector<int>& steps, const std::vector<double>& msd, int m_lo,
                        int m_hi, FitMethod method) {
  require(steps.size() == msd.size(), ErrorCode::kDimensionMismatch,
          "step and MSD series differ in length");
  require(m_lo <= m_hi, ErrorCode::kInvalidArgument, "empty fit window");
  std::vector<double> m, y;
  for (size_t i = 0; i < steps.size(); ++i) {
    if (steps[i] < m_lo || steps[i] > m_hi || steps[i] == 0) continue;
    require(msd[i] > 0.0, ErrorCode::kNumerical,
            "MSD is zero at step " + std::to_string(steps[i]) + " inside the fit window");
    m.push_back(steps[i]);
    y.push_back(msd[i]);
  }
  require(m.size() >= 3, ErrorCode::kInvalidArgument,
          "power-law fit needs at least 3 points in [" + std::to_string(m_lo) + ", " +
              std::to_string(m_hi) + "]");

  auto [log_alpha, beta] = loglog_ols(m, y);
  if (method == FitMethod::kNonlinear) {
    PowerLawResiduals functor{m, y};
    Eigen::VectorXd x(2);
    x << log_alpha, beta;
    Eigen::LevenbergMarquardt<PowerLawResiduals> lm(functor);
    lm.parameters.ftol = 1e-15;
    lm.parameters.xtol = 1e-15;
    lm.parameters.maxfev = 4000;
    lm.minimize(x);
    require(std::isfinite(x[0]) && std::isfinite(x[1]), ErrorCode::kNumerical,
            "power-law fit diverged");
    log_alpha = x[0];
    beta = x[1];
  }

  FitResult fit;
  fit.alpha = std::exp(log_alpha);
  fit.beta = beta;
  fit.m_lo = m_lo;
  fit.m_hi = m_hi;
  fit.points = static_cast<int>(m.size());
  fit.method = method;
  double ss = 0.0;
  for (size_t i = 0; i < m.size(); ++i) {
    const double r = std::log(y[i]) - (log_alpha + beta * std::log(m[i]));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(m.size()));
  return fit;
}

FitResult fit_power_law(const DynamicsTrace& trace, int m_lo, int m_hi, FitMethod method) {
  return fit_power_law(trace.steps, trace.msd, m_lo, m_hi, method);
}

std::string classify_spread(double beta, const SpreadTolerances& tol) {
  require(std::isfinite(beta), ErrorCode::kInvalidArgument, "spreading exponent is not finite");
  if (beta <= 0.0) return "localized/anomalous";
  if (std::abs(beta - 2.0) <= tol.ballistic) return "ballistic";
  if (std::abs(beta - 1.0) <= tol.diffusive) return "diffusive";
  if (beta > 2.0) return "ballistic";
  if (beta > 1.0) return "super-diffusive";
  return "sub-diffusive";
}

int cv_window_size(int n_sites) { return std::max(10, n_sites / 4); }

std::optional<double> corrected_cv(std::span<const double> w) {
  require(w.size() >= 2, ErrorCode::kInvalidArgument, "CV window needs at least 2 samples");
  const double n = static_cast<double>(w.size());
  const double mean = std::accumulate(w.begin(), w.end(), 0.0) / n;
  if (mean == 0.0) return std::nullopt;
  double ss = 0.0;
  for (double v : w) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return (1.0 + 1.0 / (4.0 * n)) * sd / mean;
}

ConvergenceReport cv_convergence(const DynamicsTrace& trace, double threshold, int horizon,
                                 SaturationPolicy policy) {
  require(!trace.steps.empty() && trace.steps.back() >= horizon, ErrorCode::kInvalidArgument,
          "trace does not reach the CV horizon of " + std::to_string(horizon) + " steps");
  ConvergenceReport rep;
  rep.window = cv_window_size(trace.n_sites);
  const auto n = static_cast<size_t>(rep.window);
  require(trace.msd.size() >= n, ErrorCode::kInvalidArgument,
          "trace has fewer samples than one CV window");
  rep.min_cv = std::numeric_limits<double>::infinity();
  std::optional<size_t> first, best;
  for (size_t i = 0; i + n <= trace.msd.size(); ++i) {
    const int end_step = trace.steps[i + n - 1];
    if (end_step > horizon) break;
    const auto cv = corrected_cv(std::span<const double>(trace.msd.data() + i, n));
    if (!cv) {
      ++rep.zero_mean_windows;
      continue;
    }
    rep.cv.push_back(*cv);
    rep.window_end_steps.push_back(end_step);
    if (*cv < rep.min_cv) {
      rep.min_cv = *cv;
      rep.min_cv_step = end_step;
      best = i;
    }
    if (!first && *cv <= threshold) first = i;
  }
  auto window_mean = [&](size_t i) {
    return std::accumulate(trace.msd.begin() + static_cast<std::ptrdiff_t>(i),
                           trace.msd.begin() + static_cast<std::ptrdiff_t>(i + n), 0.0) /
           static_cast<double>(n);
  };
  if (best) rep.min_cv_window_mean = window_mean(*best);
  rep.converged = first.has_value();
  if (first) {
    rep.convergence_step = trace.steps[*first + n - 1];
    const size_t chosen = policy == SaturationPolicy::kFirstConvergentWindow ? *first : *best;
    rep.saturation_level = window_mean(chosen);
  }
  return rep;
}

std::string trace_to_csv(const DynamicsTrace& trace, bool one_based_sites) {
  std::ostringstream os;
  os << "step,x_mean,msd\n";
  const double offset = one_based_sites ? 1.0 : 0.0;
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    os << trace.steps[i] << ',' << format_double(trace.mean_positions[i] + offset) << ','
       << format_double(trace.msd[i]) << '\n';
  }
  return os.str();
}

std::string trace_to_json(const DynamicsTrace& trace) {
  nlohmann::ordered_json j;
  j["n_sites"] = trace.n_sites;
  j["initial_site"] = trace.initial_site + 1;
  j["step"] = trace.steps;
  std::vector<double> x(trace.mean_positions);
  for (double& v : x) v += 1.0;
  j["x_mean"] = x;
  j["msd"] = trace.msd;
  if (!trace.distributions.empty()) {
    auto& d = j["distributions"] = nlohmann::ordered_json::array();
    for (const auto& dist : trace.distributions) d.push_back(dist.probabilities);
  }
  return j.dump(2) + "\n";
}

std::string distributions_to_csv(const DynamicsTrace& trace) {
  std::ostringstream os;
  os << "step";
  for (int s = 1; s <= trace.n_sites; ++s) os << ",p" << s;
  os << '\n';
  for (size_t i = 0; i < trace.distributions.size(); ++i) {
    os << trace.steps[i];
    for (double p : trace.distributions[i].probabilities) os << ',' << format_double(p);
    os << '\n';
  }
  return os.str();
}

std::string fit_to_json(const FitResult& fit) {
  nlohmann::ordered_json j;
  j["alpha"] = fit.alpha;
  j["beta"] = fit.beta;
  j["window"] = {fit.m_lo, fit.m_hi};
  j["points"] = fit.points;
  j["residual"] = fit.residual;
  j["method"] = fit.method == FitMethod::kNonlinear ? "nonlinear" : "loglog";
  j["regime"] = classify_spread(fit.beta);
  return j.dump(2) + "\n";
}

std::string convergence_to_json(const ConvergenceReport& r, bool include_series) {
  nlohmann::ordered_json j;
  j["window"] = r.window;
  j["min_cv"] = r.min_cv;
  j["min_cv_step"] = r.min_cv_step;
  j["converged"] = r.converged;
  j["convergence_step"] =
      r.convergence_step ? nlohmann::ordered_json(*r.convergence_step) : nlohmann::ordered_json(nullptr);
  j["saturation_level"] =
      r.saturation_level ? nlohmann::ordered_json(*r.saturation_level) : nlohmann::ordered_json(nullptr);
  j["min_cv_window_mean"] = r.min_cv_window_mean;
  j["zero_mean_windows"] = r.zero_mean_windows;
  if (include_series) {
    j["window_end_step"] = r.window_end_steps;
    j["cv"] = r.cv;
  }
  return j.dump(2) + "\n";
}

}  // namespace cqw
