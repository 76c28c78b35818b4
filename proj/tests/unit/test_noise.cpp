#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqw/error.hpp"
#include "cqw/graph.hpp"
#include "cqw/noise.hpp"

using namespace cqw;

TEST_CASE("sample_noise") {
  const auto zero = sample_noise(64, 0.0, 1, 0);
  for (double p : zero.phases) CHECK(p == 0.0);

  const auto full = sample_noise(128, kPi, 7, 3);
  CHECK(full.phases.size() == 128);
  for (double p : full.phases) CHECK(std::abs(p) <= kPi);

  const auto again = sample_noise(128, kPi, 7, 3);
  CHECK(full.phases == again.phases);
  CHECK(sample_noise(128, kPi, 7, 4).phases != full.phases);
  CHECK(sample_noise(128, kPi, 8, 3).phases != full.phases);

  // One realization shares its unit draws across noise levels.
  const auto half = sample_noise(128, kPi / 2, 7, 3);
  for (size_t i = 0; i < 128; ++i) CHECK(half.phases[i] == doctest::Approx(full.phases[i] / 2));

  CHECK_THROWS_AS(sample_noise(8, -0.1, 0, 0), Error);
  CHECK_THROWS_AS(sample_noise(8, kPi + 0.1, 0, 0), Error);
}

TEST_CASE("empirical mean of the phases tends to zero") {
  double sum = 0.0;
  int count = 0;
  for (std::uint64_t r = 0; r < 400; ++r)
    for (double p : sample_noise(128, kPi, 99, r).phases) {
      sum += p;
      ++count;
    }
  // Standard error pi / sqrt(3 * 51200) ~ 0.008.
  CHECK(std::abs(sum / count) < 0.04);
}

TEST_CASE("build_noisy_step") {
  const StepOperator clean(8, coin_preset("hadamard"));
  const auto zero = build_noisy_step(clean, sample_noise(8, 0.0, 1, 0));
  CHECK((zero.dense() - clean.dense()).cwiseAbs().maxCoeff() == 0.0);

  const auto noise = sample_noise(8, kPi, 42, 0);
  const auto noisy = build_noisy_step(clean, noise);
  CHECK(unitarity_error(noisy.dense()) < 1e-12);
  ComplexMatrix d = ComplexMatrix::Zero(16, 16);
  for (int s = 0; s < 8; ++s)
    for (int c = 0; c < 2; ++c) d(2 * s + c, 2 * s + c) = std::polar(1.0, noise.phases[s]);
  CHECK((noisy.dense() - d * clean.dense()).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(build_noisy_step(clean, sample_noise(9, 0.1, 0, 0)), Error);
}

TEST_CASE("box statistics use type-7 quantiles") {
  const auto s = box_stats({5, 1, 4, 2, 3});
  CHECK(s.min == 1);
  CHECK(s.q1 == 2);
  CHECK(s.median == 3);
  CHECK(s.q3 == 4);
  CHECK(s.max == 5);
  CHECK(median({1, 2, 3, 4}) == 2.5);
  CHECK(box_stats({1, 2}).q1 == doctest::Approx(1.25));
  CHECK_THROWS_AS(box_stats({}), Error);
}

TEST_CASE("noisy PR ensembles") {
  const auto clean = noisy_pr_ensemble(32, coin_preset("hadamard"), 0.0, 5, 1, 1);
  CHECK(clean.stats.q3 - clean.stats.q1 == doctest::Approx(0.0));
  CHECK(clean.pooled_pr.size() == 5 * 64);

  const auto a = noisy_pr_ensemble(32, coin_preset("hadamard"), kPi, 6, 11, 1);
  const auto b = noisy_pr_ensemble(32, coin_preset("hadamard"), kPi, 6, 11, 3);
  CHECK(a.mean_pr == b.mean_pr);
  CHECK(a.pooled_pr == b.pooled_pr);
  CHECK(a.stats.median < clean.stats.median);
  for (double pr : a.pooled_pr) {
    CHECK(pr >= 1.0 - 1e-12);
    CHECK(pr <= 32.0 + 1e-9);
  }
}

TEST_CASE("noisy eigenvalues stay on the unit circle") {
  for (std::uint64_t r = 0; r < 5; ++r) {
    const auto step = build_noisy_step(StepOperator(24, coin_preset("symmetric")),
                                       sample_noise(24, kPi, 5, r));
    for (const auto& st : numerical_spectrum(step).states)
      CHECK(std::abs(std::abs(st.eigenvalue) - 1.0) < 1e-9);
  }
}
