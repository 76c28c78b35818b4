#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include <json.hpp>

#include "cqw/error.hpp"
#include "cqw/experiments.hpp"
#include "cqw/io.hpp"

using namespace cqw;
namespace fs = std::filesystem;

TEST_CASE("named coins") {
  CHECK(named_coin("hadamard").params == CoinParams(kPi / 4, 0, 0));
  CHECK(named_coin("symmetric").params == CoinParams(kPi / 4, kPi / 2, kPi / 2));
  CHECK_THROWS_AS(named_coin("grover"), Error);
}

TEST_CASE("PR map") {
  const PrMap a = coin_pr_map(8, 4, PrMapSlice::kGammaVsEqualPhases, 3, 2);
  CHECK(a.x_axis.size() == 4);
  CHECK(a.y_axis.size() == 4);
  CHECK(a.x_axis.back() == doctest::Approx(kPi / 2));
  CHECK(a.y_axis.back() == doctest::Approx(kTwoPi));
  REQUIRE(a.mean_pr.size() == 16);
  REQUIRE(a.walker_pr.size() == 16);
  for (double v : a.mean_pr) {
    CHECK(v >= 1.0 - 1e-9);
    CHECK(v <= 8.0 + 1e-9);
  }
  for (double v : a.walker_pr) {
    CHECK(v >= 1.0 - 1e-9);
    CHECK(v <= 8.0 + 1e-9);
  }
  // gamma = 0: the two coin components split cleanly, PR 2.
  CHECK(a.walker_pr[0] == doctest::Approx(2.0));

  const PrMap d = coin_pr_map(32, 2, PrMapSlice::kPhasesAtQuarterPi, 0, 1);
  CHECK(d.walker_pr.empty());
  CHECK(d.x_axis.front() == 0.0);

  // Same map regardless of threads.
  CHECK(coin_pr_map(8, 4, PrMapSlice::kGammaVsEqualPhases, 3, 1).walker_pr == a.walker_pr);

  CHECK_THROWS_AS(coin_pr_map(8, 1, PrMapSlice::kGammaVsEqualPhases), Error);
  CHECK_THROWS_AS(coin_pr_map(512, 2, PrMapSlice::kGammaVsEqualPhases), Error);
  CHECK(pr_map_to_csv(a).rfind("gamma,theta_phi,mean_pr,walker_pr\n", 0) == 0);
}

TEST_CASE("crossover detection") {
  CHECK(!detect_crossover({0, 1, 2}, {2, 1.5, 1.2}));
  const auto x = detect_crossover({0, 1, 2}, {2, 1.5, 0.5});
  REQUIRE(x);
  CHECK(*x == doctest::Approx(1.5));
  CHECK(*detect_crossover({0, 1}, {1.0, 0.5}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(detect_crossover({0, 1}, {1.0}), Error);
}

TEST_CASE("beta sweep is deterministic across threads") {
  const auto coin = named_coin("hadamard");
  const std::vector<double> levels{0.0, kPi / 3, kPi};
  const auto a = noise_beta_sweep(32, coin, levels, 4, 7, std::nullopt, FitMethod::kNonlinear, 1);
  const auto b = noise_beta_sweep(32, coin, levels, 4, 7, std::nullopt, FitMethod::kNonlinear, 4);
  CHECK(beta_sweep_to_csv(a) == beta_sweep_to_csv(b));
  CHECK(beta_summary_to_csv(a) == beta_summary_to_csv(b));
  CHECK(beta_sweep_to_json(a) == beta_sweep_to_json(b));
  REQUIRE(a.levels.size() == 3);
  CHECK(a.m_lo == 1);
  CHECK(a.m_hi == 16);
  // Zero noise: every realization is the same clean walk.
  CHECK(a.levels[0].betas.size() == 4);
  CHECK(a.levels[0].beta_stats.min == doctest::Approx(a.levels[0].beta_stats.max));
  CHECK(a.levels[0].beta_stats.median > 1.8);
  CHECK(a.levels[2].beta_stats.median < a.levels[0].beta_stats.median);
  CHECK(a.levels[0].ensemble_mean_fit.has_value());

  const auto other = noise_beta_sweep(32, coin, levels, 4, 8, std::nullopt, FitMethod::kNonlinear, 1);
  CHECK(beta_sweep_to_csv(other) != beta_sweep_to_csv(a));
  CHECK_THROWS_AS(noise_beta_sweep(32, coin, levels, 0, 7), Error);
}

TEST_CASE("saturation sweep") {
  const auto coin = named_coin("hadamard");
  SaturationOptions o;
  o.steps = 600;
  o.horizon = 600;
  const auto rows = saturation_sweep({8, 9}, coin, {0.0, kPi}, 2, 3, o, 2);
  CHECK(rows.size() == 8);
  for (const auto& r : rows) {
    CHECK(r.min_cv >= 0.0);
    CHECK(r.converged == r.saturation_level.has_value());
    CHECK(r.converged == r.convergence_step.has_value());
  }
  CHECK(saturation_to_csv(rows) == saturation_to_csv(saturation_sweep({8, 9}, coin, {0.0, kPi}, 2, 3, o, 1)));
}

TEST_CASE("saturation size presets") {
  const auto even = saturation_sizes("hadamard", true);
  CHECK(even.front() == 20);
  CHECK(even.back() == 50);
  CHECK(even.size() == 16);
  CHECK(saturation_sizes("hadamard", false).front() == 13);
  CHECK(saturation_sizes("symmetric", false).front() == 3);
  CHECK(saturation_sizes("symmetric", false).back() == 49);
}

TEST_CASE("reproduce writes files and a manifest") {
  const fs::path dir = fs::temp_directory_path() / "cqw_test_reproduce";
  fs::remove_all(dir);
  ReproduceOptions o;
  o.out_dir = dir;
  const auto r = reproduce_figure(2, o);
  CHECK(r.figure == 2);
  CHECK(fs::exists(dir / "fig2_degenerate.csv"));
  CHECK(fs::exists(dir / "fig2_nondegenerate.csv"));
  REQUIRE(fs::exists(dir / "manifest.json"));
  const auto manifest = nlohmann::json::parse(read_text_file(dir / "manifest.json"));
  CHECK(manifest["figure"] == 2);
  CHECK(manifest["seed"] == kDefaultSeed);
  for (const auto& f : manifest["files"])
    CHECK(f["sha256"] == sha256_hex(read_text_file(dir / f["name"].get<std::string>())));

  const std::string first = read_text_file(dir / "manifest.json");
  reproduce_figure(2, o);
  CHECK(read_text_file(dir / "manifest.json") == first);

  CHECK_THROWS_AS(reproduce_figure(11, o), Error);
  fs::remove_all(dir);
}
