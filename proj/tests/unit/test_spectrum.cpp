#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "cqw/error.hpp"
#include "cqw/graph.hpp"
#include "cqw/spectrum.hpp"

using namespace cqw;

namespace {

// Greedy nearest matching of two eigenvalue multisets.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  std::vector<bool> used(b.size(), false);
  for (const Complex& z : a) {
    double best = 1e9;
    size_t at = 0;
    for (size_t i = 0; i < b.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(z - b[i]);
      if (d < best) {
        best = d;
        at = i;
      }
    }
    used[at] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

int max_cluster(const SpectralReport& r) {
  return *std::max_element(r.cluster_sizes.begin(), r.cluster_sizes.end());
}

}  // namespace

TEST_CASE("one step by hand") {
  const StepOperator s(4, coin_preset("hadamard"));
  ComplexVector in = ComplexVector::Zero(8);
  in[0] = 1.0;
  const ComplexVector out = s.apply(in);
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 8; ++i) {
    const double expect = (i == 2 || i == 7) ? r : 0.0;
    CHECK(std::abs(out[i] - Complex(expect)) < 1e-15);
  }
}

TEST_CASE("step operator is unitary and structured apply matches dense") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (const char* name : {"hadamard", "symmetric"}) {
    const StepOperator s(128, coin_preset(name));
    const ComplexMatrix d = s.dense();
    CHECK(unitarity_error(d) < 1e-12);
    ComplexVector v(256);
    for (auto& z : v) z = {g(rng), g(rng)};
    v.normalize();
    CHECK((d * v - s.apply(v)).cwiseAbs().maxCoeff() < 1e-12);
  }
  std::vector<double> phases(16);
  for (auto& p : phases) p = g(rng);
  const StepOperator noisy(16, CoinParams(0.4, 1.0, 2.0), phases);
  ComplexVector v = ComplexVector::Random(32);
  CHECK((noisy.dense() * v - noisy.apply(v)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(unitarity_error(noisy.dense()) < 1e-12);
}

TEST_CASE("analytic and numerical spectra agree") {
  double worst = 0.0;
  for (int n : {4, 8, 16, 32}) {
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        const double gamma = kPi / 2 * i / 4;
        const double h = kPi * j / 4 + 0.1;
        const CoinParams c = coin_from_half_sum(gamma, h);
        const auto a = analytic_spectrum(n, c);
        const auto num = numerical_spectrum(StepOperator(n, c));
        worst = std::max(worst, multiset_distance(a.eigenvalues(), num.eigenvalues()));
        for (double p : num.phases()) CHECK(phase_in_bands(a, p));
        for (const auto& st : num.states) CHECK(std::abs(std::abs(st.eigenvalue) - 1.0) < 1e-10);
      }
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("spectra depend on the coin phases only through the half-sum") {
  const auto a = numerical_spectrum(StepOperator(12, CoinParams(0.5, 0.3, 1.7)));
  const auto b = analytic_spectrum(12, coin_from_half_sum(0.5, 1.0));
  CHECK(multiset_distance(a.eigenvalues(), b.eigenvalues()) < 1e-9);
}

TEST_CASE("band geometry of the three figure-1 coins") {
  const auto a = analytic_spectrum(128, CoinParams(0, 0, 0));
  CHECK(a.gap == doctest::Approx(0.0));
  const auto b = analytic_spectrum(128, CoinParams(kPi / 4, 0, 0));
  CHECK(b.gap == doctest::Approx(kPi / 2));
  CHECK(b.bands[0].half_width == doctest::Approx(kPi / 4));
  CHECK(b.bands[0].center == doctest::Approx(0.0));
  // Symmetric about the real axis.
  for (const auto& z : b.eigenvalues()) {
    double best = 1e9;
    for (const auto& w : b.eigenvalues()) best = std::min(best, std::abs(std::conj(z) - w));
    CHECK(best < 1e-12);
  }
  const auto c = analytic_spectrum(128, coin_from_half_sum(kPi / 4, kPi / 4));
  std::vector<Complex> rotated;
  for (const auto& z : b.eigenvalues()) rotated.push_back(z * std::polar(1.0, kPi / 4));
  CHECK(multiset_distance(rotated, c.eigenvalues()) < 1e-12);
  for (double p : c.phases()) CHECK(phase_in_bands(c, p));
}

TEST_CASE("degeneracy law at N = 16 for every m") {
  const int n = 16;
  for (int m = 0; m < n; ++m) {
    const double h = m * kPi / n;
    const CoinParams c = coin_from_half_sum(kPi / 4, h);
    const auto num = numerical_spectrum(StepOperator(n, c));
    CHECK(has_degenerate_pairs(n, h));
    CHECK(degeneracy_index(n, h) == m);
    CHECK(max_cluster(num) == 2);
    CHECK(num.degenerate);
  }
}

TEST_CASE("no pairing for random incommensurate half-sums") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, kPi);
  std::uniform_real_distribution<double> g(0.05, kPi / 2 - 0.05);
  int tested = 0;
  while (tested < 50) {
    const double h = u(rng);
    const double m = h * 16 / kPi;
    if (std::abs(m - std::round(m)) < 1e-3) continue;
    const CoinParams c = coin_from_half_sum(g(rng), h);
    const auto num = numerical_spectrum(StepOperator(16, c));
    CHECK_FALSE(has_degenerate_pairs(16, h));
    CHECK_FALSE(degeneracy_index(16, h).has_value());
    CHECK(max_cluster(num) == 1);
    ++tested;
  }
}

TEST_CASE("odd N pairs at half-integer m, not at integer m") {
  const int n = 15;
  for (int twice_m = 0; twice_m < 2 * n; ++twice_m) {
    const double h = 0.5 * twice_m * kPi / n;
    const auto a = analytic_spectrum(n, coin_from_half_sum(kPi / 4, h));
    const bool paired = max_cluster(a) == 2;
    CHECK(paired == (twice_m % 2 == 1));
    CHECK(has_degenerate_pairs(n, h) == paired);
  }
}

TEST_CASE("eigenstate site distributions") {
  const int n = 128;
  const CoinParams flat_coin = coin_from_half_sum(kPi / 4, 5 * kPi / 14);
  const auto a = analytic_spectrum(n, flat_coin);
  for (const auto& st : a.states)
    for (double p : st.distribution.probabilities) CHECK(std::abs(p - 1.0 / n) < 1e-9);
  CHECK(mean_pr(a) == doctest::Approx(n));

  // Degenerate pair states are eigenvectors with a sinusoidal profile
  // (1 + |<u_k|u_j>| cos(...)) / N, sampled on the sites.
  const CoinParams deg = coin_from_half_sum(kPi / 4, 64 * kPi / n);
  const auto pairs = degenerate_pair_states(n, deg);
  REQUIRE(!pairs.empty());
  const StepOperator step(n, deg);
  double best = -1.0;
  for (const auto& p : pairs) {
    CHECK((step.apply(p.amplitudes) - p.eigenvalue * p.amplitudes).norm() < 1e-9);
    const auto d = site_distribution(n, p.amplitudes);
    const double peak = *std::max_element(d.probabilities.begin(), d.probabilities.end());
    CHECK(peak <= 2.0 / n + 1e-12);
    CHECK(peak <= (1.0 + p.coin_overlap) / n + 1e-12);
    best = std::max(best, peak * n - 1.0 - p.coin_overlap);
    const double sum = std::accumulate(d.probabilities.begin(), d.probabilities.end(), 0.0);
    CHECK(sum == doctest::Approx(1.0));
  }
  CHECK(std::abs(best) < 1e-9);
}

TEST_CASE("participation ratio") {
  CHECK(participation_ratio({{0, 1, 0, 0}}) == 1.0);
  CHECK(participation_ratio({std::vector<double>(32, 1.0 / 32)}) == doctest::Approx(32));
  CHECK(participation_ratio({{0.5, 0.5, 0, 0, 0}}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(participation_ratio({{0, 0, 0}}), Error);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> p(20);
    for (double& x : p) x = u(rng);
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& x : p) x /= s;
    const double before = participation_ratio({p});
    std::shuffle(p.begin(), p.end(), rng);
    CHECK(participation_ratio({p}) == doctest::Approx(before).epsilon(1e-12));
    CHECK(before >= 1.0);
    CHECK(before <= 20.0 + 1e-12);
  }
}

TEST_CASE("mean PR exemplars: walker distribution after 1000 steps") {
  const int n = 32;
  const WalkState start = localized_state(n, default_initial_site(n));
  const CoinParams loc(kPi / 4, 5 * kPi / 32, 5 * kPi / 32);
  const CoinParams deloc(kPi / 4, 5.5 * kPi / 32, 5.5 * kPi / 32);
  CHECK(std::abs(walker_pr(StepOperator(n, loc), start, 1000) - 2.99) <= 0.02);
  CHECK(std::abs(walker_pr(StepOperator(n, deloc), start, 1000) - 11.60) <= 0.05);
  // The eigenstate average cannot drop below 2N/3 on a clean cycle.
  for (const auto& c : {loc, deloc}) CHECK(mean_pr(numerical_spectrum(StepOperator(n, c))) >= 2.0 * n / 3 - 1e-6);
}

TEST_CASE("cluster_phases handles the seam") {
  const auto sizes = cluster_phases({-kPi + 1e-12, kPi, 0.0, 1.0});
  CHECK(sizes.size() == 3);
  CHECK(*std::max_element(sizes.begin(), sizes.end()) == 2);
}

TEST_CASE("serialization") {
  const auto r = analytic_spectrum(8, coin_preset("hadamard"));
  const std::string csv = spectrum_to_csv(r);
  CHECK(csv.rfind("k,re,im,omega,pr\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
  CHECK(spectrum_to_json(r).find("\"eigenvalues\"") != std::string::npos);
}
