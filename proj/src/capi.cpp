#include "cqw/cqw.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <optional>
#include <string>

#include "cqw/circuits.hpp"
#include "cqw/dynamics.hpp"
#include "cqw/error.hpp"
#include "cqw/experiments.hpp"
#include "cqw/graph.hpp"
#include "cqw/io.hpp"
#include "cqw/noise.hpp"
#include "cqw/spectrum.hpp"

struct cqw_step {
  cqw::StepOperator op;
};

struct cqw_spectrum {
  cqw::SpectralReport report;
};

struct cqw_trace {
  cqw::DynamicsTrace trace;
};

struct cqw_circuit {
  cqw::CircuitIR ir;
  std::optional<cqw::ComplexMatrix> reference;
};

namespace {

thread_local std::string g_last_error;

template <class Fn>
cqw_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return CQW_OK;
  } catch (const cqw::Error& e) {
    g_last_error = e.what();
    return static_cast<cqw_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CQW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CQW_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) cqw::fail(cqw::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

cqw::CoinParams to_coin(const cqw_coin* c) {
  need(c, "coin");
  return {c->gamma, c->theta, c->phi};
}

cqw::ComplexVector read_vector(const double* in, int dim) {
  cqw::ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = {in[2 * i], in[2 * i + 1]};
  return v;
}

void copy_string(const std::string& s, char* buf, size_t capacity, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (buf && capacity > s.size()) std::memcpy(buf, s.c_str(), s.size() + 1);
  else if (buf && capacity > 0) buf[0] = '\0';
}

void write_format(const char* path, const std::string& csv, const std::string& js,
                  cqw_format format) {
  need(path, "path");
  cqw::write_text_file(path, format == CQW_FORMAT_JSON ? js : csv);
}

cqw::FitMethod fit_method(int loglog) {
  return loglog ? cqw::FitMethod::kLogLog : cqw::FitMethod::kNonlinear;
}

cqw::SaturationPolicy policy(int min_cv) {
  return min_cv ? cqw::SaturationPolicy::kMinCvWindow
                : cqw::SaturationPolicy::kFirstConvergentWindow;
}

cqw_circuit* wrap(cqw::CircuitIR ir, std::optional<cqw::ComplexMatrix> ref) {
  return new cqw_circuit{std::move(ir), std::move(ref)};
}

}  // namespace

extern "C" {

const char* cqw_version(void) { return "1.0.0"; }

const char* cqw_last_error(void) { return g_last_error.c_str(); }

cqw_status cqw_parse_angle(const char* text, double* out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = cqw::parse_angle(text);
  });
}

cqw_status cqw_coin_preset(const char* name, cqw_coin* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    const auto c = cqw::coin_preset(name);
    *out = {c.gamma(), c.theta(), c.phi()};
  });
}

cqw_status cqw_coin_check(const cqw_coin* coin) {
  return guarded([&] { to_coin(coin); });
}

cqw_status cqw_step_create(int n_sites, const cqw_coin* coin, cqw_step** out) {
  return guarded([&] {
    need(out, "out");
    *out = new cqw_step{cqw::StepOperator(n_sites, to_coin(coin))};
  });
}

cqw_status cqw_step_create_noisy(int n_sites, const cqw_coin* coin, double phi_max, uint64_t seed,
                                 uint64_t realization, cqw_step** out) {
  return guarded([&] {
    need(out, "out");
    const cqw::StepOperator clean(n_sites, to_coin(coin));
    const auto noise = cqw::sample_noise(n_sites, phi_max, seed, realization);
    *out = new cqw_step{cqw::build_noisy_step(clean, noise)};
  });
}

void cqw_step_destroy(cqw_step* step) { delete step; }

int cqw_step_sites(const cqw_step* step) { return step ? step->op.n_sites() : 0; }

cqw_status cqw_step_apply(const cqw_step* step, const double* in, double* out) {
  return guarded([&] {
    need(step, "step");
    need(in, "in");
    need(out, "out");
    const int dim = step->op.dimension();
    const cqw::ComplexVector r = step->op.apply(read_vector(in, dim));
    for (int i = 0; i < dim; ++i) {
      out[2 * i] = r[i].real();
      out[2 * i + 1] = r[i].imag();
    }
  });
}

cqw_status cqw_step_dense(const cqw_step* step, double* out, size_t capacity) {
  return guarded([&] {
    need(step, "step");
    need(out, "out");
    const auto dim = static_cast<size_t>(step->op.dimension());
    cqw::require(capacity >= 2 * dim * dim, cqw::ErrorCode::kDimensionMismatch,
                 "output buffer needs " + std::to_string(2 * dim * dim) + " doubles");
    const cqw::ComplexMatrix m = step->op.dense();
    for (size_t r = 0; r < dim; ++r)
      for (size_t c = 0; c < dim; ++c) {
        const auto z = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        out[2 * (r * dim + c)] = z.real();
        out[2 * (r * dim + c) + 1] = z.imag();
      }
  });
}

cqw_status cqw_walker_pr(const cqw_step* step, int initial_site, int steps, double* out) {
  return guarded([&] {
    need(step, "step");
    need(out, "out");
    const int n = step->op.n_sites();
    const int s0 = initial_site < 0 ? cqw::default_initial_site(n) : initial_site;
    *out = cqw::walker_pr(step->op, cqw::localized_state(n, s0), steps);
  });
}

cqw_status cqw_spectrum_analytic(int n_sites, const cqw_coin* coin, cqw_spectrum** out) {
  return guarded([&] {
    need(out, "out");
    *out = new cqw_spectrum{cqw::analytic_spectrum(n_sites, to_coin(coin))};
  });
}

cqw_status cqw_spectrum_numerical(const cqw_step* step, cqw_spectrum** out) {
  return guarded([&] {
    need(step, "step");
    need(out, "out");
    *out = new cqw_spectrum{cqw::numerical_spectrum(step->op)};
  });
}

void cqw_spectrum_destroy(cqw_spectrum* spectrum) { delete spectrum; }

size_t cqw_spectrum_size(const cqw_spectrum* s) { return s ? s->report.states.size() : 0; }

cqw_status cqw_spectrum_eigenvalue(const cqw_spectrum* s, size_t i, double* re, double* im) {
  return guarded([&] {
    need(s, "spectrum");
    cqw::require(i < s->report.states.size(), cqw::ErrorCode::kOutOfRange, "eigenvalue index");
    const auto z = s->report.states[i].eigenvalue;
    if (re) *re = z.real();
    if (im) *im = z.imag();
  });
}

cqw_status cqw_spectrum_pr(const cqw_spectrum* s, size_t i, double* out) {
  return guarded([&] {
    need(s, "spectrum");
    need(out, "out");
    cqw::require(i < s->report.states.size(), cqw::ErrorCode::kOutOfRange, "eigenstate index");
    *out = s->report.states[i].participation_ratio;
  });
}

cqw_status cqw_spectrum_get_info(const cqw_spectrum* s, cqw_spectrum_info* out) {
  return guarded([&] {
    need(s, "spectrum");
    need(out, "out");
    const auto& r = s->report;
    out->n_sites = r.n_sites;
    out->gamma = r.gamma;
    out->half_sum = r.half_sum;
    out->gap = r.gap;
    out->degenerate = r.degenerate ? 1 : 0;
    out->degeneracy_m = r.degeneracy_m ? *r.degeneracy_m : -1;
    out->max_cluster = 0;
    for (int c : r.cluster_sizes) out->max_cluster = std::max(out->max_cluster, c);
    out->mean_pr = cqw::mean_pr(r);
  });
}

cqw_status cqw_spectrum_write(const cqw_spectrum* s, const char* path, cqw_format format) {
  return guarded([&] {
    need(s, "spectrum");
    write_format(path, format == CQW_FORMAT_JSON ? "" : cqw::spectrum_to_csv(s->report),
                 format == CQW_FORMAT_JSON ? cqw::spectrum_to_json(s->report) : "", format);
  });
}

cqw_evolve_options cqw_evolve_options_default(void) { return {-1, 1, 0, 0}; }

cqw_status cqw_evolve(const cqw_step* step, int n_steps, const cqw_evolve_options* options,
                      cqw_trace** out) {
  return guarded([&] {
    need(step, "step");
    need(out, "out");
    const cqw_evolve_options o = options ? *options : cqw_evolve_options_default();
    const int n = step->op.n_sites();
    const int s0 = o.initial_site < 0 ? cqw::default_initial_site(n) : o.initial_site;
    cqw::require(s0 < n, cqw::ErrorCode::kOutOfRange, "initial site outside the cycle");
    cqw::EvolveOptions eo;
    eo.record_every = o.record_every;
    eo.keep_distributions = o.keep_distributions != 0;
    eo.msd_mode = o.literal_msd ? cqw::MsdMode::kLiteral : cqw::MsdMode::kPerSite;
    *out = new cqw_trace{cqw::evolve(cqw::localized_state(n, s0), step->op, n_steps, s0, eo)};
  });
}

void cqw_trace_destroy(cqw_trace* trace) { delete trace; }

size_t cqw_trace_size(const cqw_trace* t) { return t ? t->trace.steps.size() : 0; }

cqw_status cqw_trace_record(const cqw_trace* t, size_t i, int* step, double* mean_position,
                            double* msd, double* norm) {
  return guarded([&] {
    need(t, "trace");
    cqw::require(i < t->trace.steps.size(), cqw::ErrorCode::kOutOfRange, "record index");
    if (step) *step = t->trace.steps[i];
    if (mean_position) *mean_position = t->trace.mean_positions[i];
    if (msd) *msd = t->trace.msd[i];
    if (norm) *norm = t->trace.norms[i];
  });
}

cqw_status cqw_trace_distribution(const cqw_trace* t, size_t i, double* out, size_t capacity) {
  return guarded([&] {
    need(t, "trace");
    need(out, "out");
    cqw::require(i < t->trace.distributions.size(), cqw::ErrorCode::kOutOfRange,
                 "no stored distribution at this record (keep_distributions off?)");
    const auto& p = t->trace.distributions[i].probabilities;
    cqw::require(capacity >= p.size(), cqw::ErrorCode::kDimensionMismatch, "buffer too small");
    std::copy(p.begin(), p.end(), out);
  });
}

cqw_status cqw_trace_final_distribution(const cqw_trace* t, double* out, size_t capacity) {
  return guarded([&] {
    need(t, "trace");
    need(out, "out");
    const auto d = cqw::site_distribution(t->trace.n_sites, t->trace.final_amplitudes);
    cqw::require(capacity >= d.probabilities.size(), cqw::ErrorCode::kDimensionMismatch,
                 "buffer too small");
    std::copy(d.probabilities.begin(), d.probabilities.end(), out);
  });
}

cqw_status cqw_trace_fit(const cqw_trace* t, int m_lo, int m_hi, int loglog, cqw_fit* out) {
  return guarded([&] {
    need(t, "trace");
    need(out, "out");
    auto window = cqw::default_fit_window(t->trace.n_sites);
    if (m_hi > 0) window = {m_lo, m_hi};
    const auto f = cqw::fit_power_law(t->trace, window.first, window.second, fit_method(loglog));
    *out = {f.alpha, f.beta, f.residual, f.m_lo, f.m_hi, f.points, loglog ? 1 : 0};
  });
}

cqw_status cqw_trace_converge(const cqw_trace* t, double threshold, int horizon, int min_cv_policy,
                              cqw_convergence* out) {
  return guarded([&] {
    need(t, "trace");
    need(out, "out");
    const auto r = cqw::cv_convergence(t->trace, threshold, horizon, policy(min_cv_policy));
    out->window = r.window;
    out->min_cv = r.min_cv;
    out->min_cv_step = r.min_cv_step;
    out->converged = r.converged ? 1 : 0;
    out->convergence_step = r.convergence_step.value_or(-1);
    out->saturation_level = r.saturation_level.value_or(std::numeric_limits<double>::quiet_NaN());
    out->min_cv_window_mean = r.min_cv_window_mean;
  });
}

cqw_status cqw_trace_write(const cqw_trace* t, const char* path, cqw_format format) {
  return guarded([&] {
    need(t, "trace");
    write_format(path, format == CQW_FORMAT_JSON ? "" : cqw::trace_to_csv(t->trace),
                 format == CQW_FORMAT_JSON ? cqw::trace_to_json(t->trace) : "", format);
  });
}

cqw_status cqw_trace_write_distributions(const cqw_trace* t, const char* path) {
  return guarded([&] {
    need(t, "trace");
    need(path, "path");
    cqw::require(!t->trace.distributions.empty(), cqw::ErrorCode::kInvalidArgument,
                 "trace holds no distributions");
    cqw::write_text_file(path, cqw::distributions_to_csv(t->trace));
  });
}

cqw_status cqw_fit_write(const cqw_fit* fit, const char* path) {
  return guarded([&] {
    need(fit, "fit");
    need(path, "path");
    cqw::FitResult f;
    f.alpha = fit->alpha;
    f.beta = fit->beta;
    f.residual = fit->residual;
    f.m_lo = fit->m_lo;
    f.m_hi = fit->m_hi;
    f.points = fit->points;
    f.method = fit_method(fit->loglog);
    cqw::write_text_file(path, cqw::fit_to_json(f));
  });
}

cqw_status cqw_trace_write_convergence(const cqw_trace* t, double threshold, int horizon,
                                       int min_cv_policy, const char* path) {
  return guarded([&] {
    need(t, "trace");
    need(path, "path");
    const auto r = cqw::cv_convergence(t->trace, threshold, horizon, policy(min_cv_policy));
    cqw::write_text_file(path, cqw::convergence_to_json(r, true));
  });
}

const char* cqw_classify_spread(double beta) {
  if (!std::isfinite(beta)) return nullptr;
  static const std::string kLabels[] = {"ballistic", "super-diffusive", "diffusive",
                                        "sub-diffusive", "localized/anomalous"};
  const std::string label = cqw::classify_spread(beta);
  for (const auto& l : kLabels)
    if (l == label) return l.c_str();
  return nullptr;
}

cqw_status cqw_circuit_coin(const cqw_coin* coin, cqw_circuit** out) {
  return guarded([&] {
    need(out, "out");
    const auto c = to_coin(coin);
    *out = wrap(cqw::coin_circuit(c), cqw::ComplexMatrix(cqw::build_coin(c)));
  });
}

cqw_status cqw_circuit_qft(int n, int inverse, cqw_circuit** out) {
  return guarded([&] {
    need(out, "out");
    auto ir = inverse ? cqw::inverse_qft_circuit(n) : cqw::qft_circuit(n);
    cqw::ComplexMatrix f = cqw::fourier_matrix(1 << n);
    if (inverse) f = f.adjoint().eval();
    *out = wrap(std::move(ir), std::move(f));
  });
}

cqw_status cqw_circuit_clock(int n, int power, int adjoint, cqw_circuit** out) {
  return guarded([&] {
    need(out, "out");
    auto ir = cqw::clock_circuit(n, power, adjoint != 0);
    const cqw::ComplexMatrix l = cqw::clock_matrix(1 << n);
    cqw::ComplexMatrix ref = cqw::ComplexMatrix::Identity(l.rows(), l.cols());
    for (int i = 0; i < power; ++i) ref = (ref * l).eval();
    if (adjoint) ref = ref.adjoint().eval();
    *out = wrap(std::move(ir), std::move(ref));
  });
}

cqw_status cqw_circuit_step(int n, const cqw_coin* coin, cqw_circuit** out) {
  return guarded([&] {
    need(out, "out");
    const auto c = to_coin(coin);
    *out = wrap(cqw::step_circuit(n, c), cqw::reference_step_matrix(n, c));
  });
}

cqw_status cqw_circuit_walk(int n, const cqw_coin* coin, int steps, int noisy, double phi_max,
                            uint64_t seed, uint64_t realization, cqw_circuit** out) {
  return guarded([&] {
    need(out, "out");
    const auto c = to_coin(coin);
    cqw::require(n >= 1 && n <= 10, cqw::ErrorCode::kOutOfRange, "qubit count out of range");
    std::optional<cqw::NoiseProfile> noise;
    if (noisy) noise = cqw::sample_noise(1 << n, phi_max, seed, realization);
    auto ir = cqw::walk_circuit(n, c, steps, noise);
    std::optional<cqw::ComplexMatrix> ref;
    if (n <= 7) ref = cqw::reference_walk_matrix(n, c, steps, noise);
    *out = wrap(std::move(ir), std::move(ref));
  });
}

cqw_status cqw_circuit_parse_qasm(const char* text, cqw_circuit** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = wrap(cqw::parse_qasm(text), std::nullopt);
  });
}

void cqw_circuit_destroy(cqw_circuit* circuit) { delete circuit; }

size_t cqw_circuit_gate_count(const cqw_circuit* c) { return c ? c->ir.gates.size() : 0; }

int cqw_circuit_qubits(const cqw_circuit* c) { return c ? c->ir.n_qubits() : 0; }

cqw_status cqw_circuit_qasm(const cqw_circuit* c, char* buf, size_t capacity, size_t* needed) {
  return guarded([&] {
    need(c, "circuit");
    copy_string(cqw::emit_qasm(c->ir), buf, capacity, needed);
  });
}

cqw_status cqw_circuit_counts_json(const cqw_circuit* c, char* buf, size_t capacity,
                                   size_t* needed) {
  return guarded([&] {
    need(c, "circuit");
    copy_string(cqw::gate_counts_to_json(cqw::count_gates(c->ir)), buf, capacity, needed);
  });
}

cqw_status cqw_circuit_verify(const cqw_circuit* c, double* max_deviation, int* equivalent) {
  return guarded([&] {
    need(c, "circuit");
    cqw::require(c->reference.has_value(), cqw::ErrorCode::kInvalidArgument,
                 "circuit has no dense reference to verify against");
    const auto r = cqw::equiv_up_to_global_phase(*c->reference, cqw::circuit_unitary(c->ir));
    if (max_deviation) *max_deviation = r.max_deviation;
    if (equivalent) *equivalent = r.equivalent ? 1 : 0;
  });
}

cqw_status cqw_pr_map(int n_sites, int resolution, int slice, int walker_steps, int threads,
                      const char* path, cqw_format format) {
  return guarded([&] {
    cqw::require(slice == 0 || slice == 1, cqw::ErrorCode::kInvalidArgument,
                 "slice must be 0 or 1");
    const auto map = cqw::coin_pr_map(
        n_sites, resolution,
        slice == 0 ? cqw::PrMapSlice::kGammaVsEqualPhases : cqw::PrMapSlice::kPhasesAtQuarterPi,
        walker_steps, threads);
    write_format(path, format == CQW_FORMAT_JSON ? "" : cqw::pr_map_to_csv(map),
                 format == CQW_FORMAT_JSON ? cqw::pr_map_to_json(map) : "", format);
  });
}

cqw_status cqw_sweep_beta(int n_sites, const char* coin, const double* levels, size_t n_levels,
                          int realizations, uint64_t seed, int m_lo, int m_hi, int loglog,
                          int threads, const char* dir, cqw_format format,
                          cqw_beta_level* levels_out, double* crossover) {
  return guarded([&] {
    need(coin, "coin");
    need(levels, "levels");
    need(dir, "dir");
    std::optional<std::pair<int, int>> window;
    if (m_hi > 0) window = std::make_pair(m_lo, m_hi);
    const auto sweep = cqw::noise_beta_sweep(n_sites, cqw::named_coin(coin),
                                             std::vector<double>(levels, levels + n_levels),
                                             realizations, seed, window, fit_method(loglog),
                                             threads);
    const std::filesystem::path out(dir);
    if (format == CQW_FORMAT_JSON) {
      cqw::write_text_file(out / "beta.json", cqw::beta_sweep_to_json(sweep));
    } else {
      cqw::write_text_file(out / "beta.csv", cqw::beta_sweep_to_csv(sweep));
      cqw::write_text_file(out / "beta_summary.csv", cqw::beta_summary_to_csv(sweep));
    }
    if (levels_out) {
      for (size_t i = 0; i < n_levels; ++i) {
        const auto& l = sweep.levels[i];
        levels_out[i] = {l.phi_max,
                         l.betas.empty() ? std::numeric_limits<double>::quiet_NaN()
                                         : l.beta_stats.median,
                         static_cast<int>(l.failures.size())};
      }
    }
    if (crossover)
      *crossover = sweep.crossover.value_or(std::numeric_limits<double>::quiet_NaN());
  });
}

cqw_saturation_options cqw_saturation_options_default(void) {
  const cqw::SaturationOptions o;
  return {o.steps, o.record_every, o.horizon, o.threshold};
}

cqw_status cqw_sweep_saturation(const int* sizes, size_t n_sizes, const char* coin,
                                const double* levels, size_t n_levels, int realizations,
                                uint64_t seed, const cqw_saturation_options* options, int threads,
                                const char* path, cqw_format format, cqw_saturation_summary* out) {
  return guarded([&] {
    need(sizes, "sizes");
    need(coin, "coin");
    need(levels, "levels");
    const cqw_saturation_options o = options ? *options : cqw_saturation_options_default();
    cqw::SaturationOptions so;
    so.steps = o.steps;
    so.record_every = o.record_every;
    so.horizon = o.horizon;
    so.threshold = o.threshold;
    const auto rows = cqw::saturation_sweep(std::vector<int>(sizes, sizes + n_sizes),
                                            cqw::named_coin(coin),
                                            std::vector<double>(levels, levels + n_levels),
                                            realizations, seed, so, threads);
    write_format(path, format == CQW_FORMAT_JSON ? "" : cqw::saturation_to_csv(rows),
                 format == CQW_FORMAT_JSON ? cqw::saturation_to_json(rows) : "", format);
    if (out) {
      std::vector<double> sat, cv;
      for (const auto& r : rows) {
        if (r.saturation_level) sat.push_back(*r.saturation_level);
        cv.push_back(r.min_cv);
      }
      out->runs = rows.size();
      out->converged = sat.size();
      out->median_saturation =
          sat.empty() ? std::numeric_limits<double>::quiet_NaN() : cqw::median(sat);
      out->median_min_cv = cv.empty() ? std::numeric_limits<double>::quiet_NaN() : cqw::median(cv);
    }
  });
}

cqw_reproduce_options cqw_reproduce_options_default(void) {
  const cqw::ReproduceOptions o;
  return {o.seed,     o.realizations, o.pr_map_resolution,      o.threads,
          o.long_steps, o.report_steps, o.saturation_realizations};
}

cqw_status cqw_reproduce(int figure, const char* out_dir, const cqw_reproduce_options* options,
                         char* buf, size_t capacity, size_t* needed) {
  return guarded([&] {
    need(out_dir, "out_dir");
    const cqw_reproduce_options o = options ? *options : cqw_reproduce_options_default();
    cqw::ReproduceOptions ro;
    ro.out_dir = out_dir;
    ro.seed = o.seed;
    ro.realizations = o.realizations;
    ro.pr_map_resolution = o.pr_map_resolution;
    ro.threads = o.threads;
    ro.long_steps = o.long_steps;
    ro.report_steps = o.report_steps;
    ro.saturation_realizations = o.saturation_realizations;
    const auto res = cqw::reproduce_figure(figure, ro);
    copy_string(res.summary, buf, capacity, needed);
  });
}

}  // extern "C"
