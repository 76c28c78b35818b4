#include "cqw/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "cqw/error.hpp"
#include "cqw/io.hpp"

namespace cqw {

namespace {

constexpr int kMaxDenseSites = 4096;

double wrap_phase(double x) {
  // Into (-pi, pi].
  double y = std::remainder(x, kTwoPi);
  if (y <= -kPi) y += kTwoPi;
  return y;
}

double circle_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

void fill_distribution(Eigenstate& st, int n_sites, const ComplexVector& v) {
  st.distribution = site_distribution(n_sites, v);
  st.participation_ratio = participation_ratio(st.distribution);
}

Eigen::Vector2cd block_eigenvector(const Eigen::Matrix2cd& m, Complex zeta, int branch) {
  const Eigen::Vector2cd a(m(0, 1), zeta - m(0, 0));
  const Eigen::Vector2cd b(zeta - m(1, 1), m(1, 0));
  Eigen::Vector2cd v = a.norm() >= b.norm() ? a : b;
  if (v.norm() < 1e-12) {
    // Scalar block (gamma = 0 with coinciding diagonal entries).
    v = branch == 0 ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
  }
  v.normalize();
  // Gauge: first nonzero component real and non-negative.
  const Complex ref = std::abs(v[0]) > 1e-14 ? v[0] : v[1];
  v *= std::conj(ref) / std::abs(ref);
  return v;
}

struct BlochMode {
  Complex eigenvalue;
  Eigen::Vector2cd spinor;
};

BlochMode bloch_mode(int n_sites, const CoinParams& coin, int k, int branch) {
  const double kappa = kTwoPi * k / n_sites;
  const double h = coin.half_sum();
  const double a = std::asin(std::clamp(std::cos(coin.gamma()) * std::sin(kappa + h), -1.0, 1.0));
  BlochMode mode;
  mode.eigenvalue = branch == 0 ? std::polar(1.0, -(a - h)) : -std::polar(1.0, a + h);
  Eigen::Matrix2cd block;
  block.row(0) = std::polar(1.0, -kappa) * build_coin(coin).row(0);
  block.row(1) = std::polar(1.0, kappa) * build_coin(coin).row(1);
  mode.spinor = block_eigenvector(block, mode.eigenvalue, branch);
  return mode;
}

ComplexVector bloch_amplitudes(int n_sites, int k, const Eigen::Vector2cd& spinor) {
  ComplexVector v(2 * n_sites);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_sites));
  for (int s = 0; s < n_sites; ++s) {
    const long long r = (static_cast<long long>(k) * s) % n_sites;
    const Complex w = std::polar(scale, kTwoPi * static_cast<double>(r) / n_sites);
    v[2 * s] = w * spinor[0];
    v[2 * s + 1] = w * spinor[1];
  }
  return v;
}

void set_bands(SpectralReport& r, const CoinParams& coin) {
  const double hw = kPi / 2 - coin.gamma();
  r.bands = {BandArc{coin.half_sum(), hw}, BandArc{coin.half_sum() + kPi, hw}};
  r.gap = 2.0 * coin.gamma();
}

void finish_clusters(SpectralReport& r) {
  r.cluster_sizes = cluster_phases(r.phases());
  r.degenerate = std::any_of(r.cluster_sizes.begin(), r.cluster_sizes.end(),
                             [](int c) { return c >= 2; });
  r.degeneracy_m = degeneracy_index(r.n_sites, r.half_sum);
}

}  // namespace

StepOperator::StepOperator(int n_sites, const CoinParams& coin)
    : n_sites_(n_sites), coin_(coin), coin_matrix_(build_coin(coin)) {
  check_sites(n_sites);
}

StepOperator::StepOperator(int n_sites, const CoinParams& coin, std::vector<double> site_phases)
    : StepOperator(n_sites, coin) {
  require(static_cast<int>(site_phases.size()) == n_sites, ErrorCode::kDimensionMismatch,
          "site phase vector has " + std::to_string(site_phases.size()) + " entries for " +
              std::to_string(n_sites) + " sites");
  site_phases_ = std::move(site_phases);
  site_factors_.reserve(site_phases_.size());
  for (double p : site_phases_) site_factors_.push_back(std::polar(1.0, p));
}

void StepOperator::apply(const ComplexVector& in, ComplexVector& out) const {
  require(in.size() == dimension(), ErrorCode::kDimensionMismatch,
          "state dimension does not match the step operator");
  out.resize(dimension());
  const int n = n_sites_;
  const Complex c00 = coin_matrix_(0, 0), c01 = coin_matrix_(0, 1);
  const Complex c10 = coin_matrix_(1, 0), c11 = coin_matrix_(1, 1);
  const bool phases = !site_factors_.empty();
  for (int s = 0; s < n; ++s) {
    const Complex u = in[2 * s];
    const Complex d = in[2 * s + 1];
    const int right = s + 1 == n ? 0 : s + 1;
    const int left = s == 0 ? n - 1 : s - 1;
    Complex up = c00 * u + c01 * d;
    Complex down = c10 * u + c11 * d;
    if (phases) {
      up *= site_factors_[static_cast<size_t>(right)];
      down *= site_factors_[static_cast<size_t>(left)];
    }
    out[2 * right] = up;
    out[2 * left + 1] = down;
  }
}

ComplexVector StepOperator::apply(const ComplexVector& in) const {
  ComplexVector out;
  apply(in, out);
  return out;
}

ComplexMatrix StepOperator::dense() const {
  require(n_sites_ <= kMaxDenseSites, ErrorCode::kInvalidArgument,
          "dense step operator limited to N <= 4096");
  const int n = n_sites_;
  ComplexMatrix m = ComplexMatrix::Zero(dimension(), dimension());
  for (int s = 0; s < n; ++s) {
    const int right = (s + 1) % n;
    const int left = (s + n - 1) % n;
    const Complex fr = site_factors_.empty() ? 1.0 : site_factors_[static_cast<size_t>(right)];
    const Complex fl = site_factors_.empty() ? 1.0 : site_factors_[static_cast<size_t>(left)];
    for (int c = 0; c < 2; ++c) {
      m(2 * right, 2 * s + c) = fr * coin_matrix_(0, c);
      m(2 * left + 1, 2 * s + c) = fl * coin_matrix_(1, c);
    }
  }
  return m;
}

StepOperator build_step(int n_sites, const CoinParams& coin) { return {n_sites, coin}; }

std::vector<Complex> SpectralReport::eigenvalues() const {
  std::vector<Complex> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.eigenvalue);
  return out;
}

std::vector<double> SpectralReport::phases() const {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.phase);
  return out;
}

std::vector<double> SpectralReport::participation_ratios() const {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.participation_ratio);
  return out;
}

ComplexVector bloch_eigenstate(int n_sites, const CoinParams& coin, int k, int branch,
                               Complex* eigenvalue) {
  check_sites(n_sites);
  const BlochMode mode = bloch_mode(n_sites, coin, k, branch);
  if (eigenvalue) *eigenvalue = mode.eigenvalue;
  return bloch_amplitudes(n_sites, k, mode.spinor);
}

SpectralReport analytic_spectrum(int n_sites, const CoinParams& coin) {
  check_sites(n_sites);
  SpectralReport r;
  r.n_sites = n_sites;
  r.gamma = coin.gamma();
  r.half_sum = coin.half_sum();
  r.solver = "analytic";
  set_bands(r, coin);
  r.states.reserve(static_cast<size_t>(2 * n_sites));
  for (int branch = 0; branch < 2; ++branch) {
    for (int k = 0; k < n_sites; ++k) {
      const BlochMode mode = bloch_mode(n_sites, coin, k, branch);
      Eigenstate st;
      st.eigenvalue = mode.eigenvalue;
      st.phase = std::arg(mode.eigenvalue);
      st.momentum = k;
      st.branch = branch;
      st.mixing_angle = std::atan2(std::abs(mode.spinor[1]), std::abs(mode.spinor[0]));
      st.relative_phase = std::abs(mode.spinor[1]) > 0 ? std::arg(mode.spinor[1]) : 0.0;
      fill_distribution(st, n_sites, bloch_amplitudes(n_sites, k, mode.spinor));
      r.states.push_back(std::move(st));
    }
  }
  finish_clusters(r);
  return r;
}

SpectralReport numerical_spectrum(const StepOperator& step) {
  const int n = step.n_sites();
  require(n <= kMaxDenseSites, ErrorCode::kInvalidArgument,
          "dense eigendecomposition limited to N <= 4096");
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(step.dense(), true);
  require(solver.info() == Eigen::Success, ErrorCode::kNumerical,
          "eigensolver failed for N = " + std::to_string(n));
  SpectralReport r;
  r.n_sites = n;
  r.gamma = step.coin().gamma();
  r.half_sum = step.coin().half_sum();
  r.solver = "dense";
  set_bands(r, step.coin());
  r.states.reserve(static_cast<size_t>(2 * n));
  for (int i = 0; i < 2 * n; ++i) {
    Eigenstate st;
    st.eigenvalue = solver.eigenvalues()[i];
    st.phase = std::arg(st.eigenvalue);
    ComplexVector v = solver.eigenvectors().col(i);
    const double norm = v.norm();
    require(norm > 0.0 && std::isfinite(norm), ErrorCode::kNumerical,
            "eigensolver returned a degenerate eigenvector");
    v /= norm;
    fill_distribution(st, n, v);
    r.states.push_back(std::move(st));
  }
  finish_clusters(r);
  return r;
}

std::optional<int> degeneracy_index(int n_sites, double half_sum, double tol) {
  check_sites(n_sites);
  const double m = half_sum * n_sites / kPi;
  const double rounded = std::round(m);
  if (std::abs(m - rounded) * kPi / n_sites > tol) return std::nullopt;
  long long mi = static_cast<long long>(rounded) % n_sites;
  if (mi < 0) mi += n_sites;
  return static_cast<int>(mi);
}

bool has_degenerate_pairs(int n_sites, double half_sum, double tol) {
  check_sites(n_sites);
  // Pairs need j + k = N/2 - h N / pi (mod N) with that value an integer.
  const double t = 0.5 * n_sites - half_sum * n_sites / kPi;
  return std::abs(t - std::round(t)) * kPi / n_sites <= tol;
}

std::vector<int> cluster_phases(std::vector<double> phases, double tol) {
  std::vector<int> sizes;
  if (phases.empty()) return sizes;
  for (double& p : phases) {
    p = std::fmod(p, kTwoPi);
    if (p < 0) p += kTwoPi;
  }
  std::sort(phases.begin(), phases.end());
  std::vector<int> group(phases.size(), 0);
  int g = 0;
  for (size_t i = 1; i < phases.size(); ++i) {
    if (phases[i] - phases[i - 1] > tol) ++g;
    group[i] = g;
  }
  // Merge the last group into the first across the 0 / 2pi seam.
  const bool wrap = g > 0 && (phases.front() + kTwoPi - phases.back()) <= tol;
  std::vector<int> counts(static_cast<size_t>(g + 1), 0);
  for (int gi : group) ++counts[static_cast<size_t>(gi)];
  if (wrap) {
    counts.front() += counts.back();
    counts.pop_back();
  }
  return counts;
}

bool phase_in_bands(const SpectralReport& report, double phase, double tol) {
  for (const auto& band : report.bands) {
    if (circle_distance(phase, band.center) <= band.half_width + tol) return true;
  }
  return false;
}

double participation_ratio(const SiteDistribution& dist) {
  double total = 0.0;
  double squares = 0.0;
  for (double p : dist.probabilities) {
    total += p;
    squares += p * p;
  }
  require(squares > 0.0, ErrorCode::kInvalidArgument,
          "participation ratio of an all-zero distribution");
  return total * total / squares;
}

double mean_pr(const SpectralReport& report) {
  require(!report.states.empty(), ErrorCode::kInvalidArgument, "empty spectral report");
  double sum = 0.0;
  for (const auto& s : report.states) sum += s.participation_ratio;
  return sum / static_cast<double>(report.states.size());
}

double walker_pr(const StepOperator& step, const WalkState& initial, int steps) {
  require(steps >= 0, ErrorCode::kInvalidArgument, "negative step count");
  require(initial.n_sites() == step.n_sites(), ErrorCode::kDimensionMismatch,
          "state and step operator sizes differ");
  ComplexVector a = initial.amplitudes();
  ComplexVector b(a.size());
  for (int m = 0; m < steps; ++m) {
    step.apply(a, b);
    a.swap(b);
  }
  return participation_ratio(site_distribution(step.n_sites(), a));
}

std::vector<DegeneratePairState> degenerate_pair_states(int n_sites, const CoinParams& coin) {
  check_sites(n_sites);
  std::vector<DegeneratePairState> out;
  for (int branch = 0; branch < 2; ++branch) {
    std::vector<BlochMode> modes;
    modes.reserve(static_cast<size_t>(n_sites));
    for (int k = 0; k < n_sites; ++k) modes.push_back(bloch_mode(n_sites, coin, k, branch));
    for (int k = 0; k < n_sites; ++k) {
      for (int j = k + 1; j < n_sites; ++j) {
        if (std::abs(modes[static_cast<size_t>(k)].eigenvalue -
                     modes[static_cast<size_t>(j)].eigenvalue) > kClusterTolerance)
          continue;
        const auto& mk = modes[static_cast<size_t>(k)];
        const auto& mj = modes[static_cast<size_t>(j)];
        DegeneratePairState p;
        p.k_first = k;
        p.k_second = j;
        p.branch = branch;
        p.eigenvalue = mk.eigenvalue;
        p.coin_overlap = std::abs(mk.spinor.dot(mj.spinor));
        p.amplitudes = (bloch_amplitudes(n_sites, k, mk.spinor) +
                        bloch_amplitudes(n_sites, j, mj.spinor)) /
                       std::sqrt(2.0);
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

std::string spectrum_to_csv(const SpectralReport& report) {
  std::ostringstream os;
  os << "k,re,im,omega,pr\n";
  for (size_t i = 0; i < report.states.size(); ++i) {
    const auto& s = report.states[i];
    os << i << ',' << format_double(s.eigenvalue.real()) << ','
       << format_double(s.eigenvalue.imag()) << ',' << format_double(s.phase) << ','
       << format_double(s.participation_ratio) << '\n';
  }
  return os.str();
}

std::string spectrum_to_json(const SpectralReport& report) {
  nlohmann::ordered_json j;
  j["n_sites"] = report.n_sites;
  j["gamma"] = report.gamma;
  j["half_sum"] = report.half_sum;
  j["solver"] = report.solver;
  j["gap"] = report.gap;
  j["bands"] = nlohmann::ordered_json::array();
  for (const auto& b : report.bands)
    j["bands"].push_back({{"center", b.center}, {"half_width", b.half_width}});
  j["degenerate"] = report.degenerate;
  j["degeneracy_m"] = report.degeneracy_m ? nlohmann::ordered_json(*report.degeneracy_m)
                                          : nlohmann::ordered_json(nullptr);
  j["mean_pr"] = mean_pr(report);
  auto& ev = j["eigenvalues"] = nlohmann::ordered_json::array();
  auto& om = j["omega"] = nlohmann::ordered_json::array();
  auto& pr = j["pr"] = nlohmann::ordered_json::array();
  for (const auto& s : report.states) {
    ev.push_back({s.eigenvalue.real(), s.eigenvalue.imag()});
    om.push_back(s.phase);
    pr.push_back(s.participation_ratio);
  }
  return j.dump(2) + "\n";
}

}  // namespace cqw
