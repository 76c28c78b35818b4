#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "cqw/cqw.h"

namespace fs = std::filesystem;

TEST_CASE("version and errors") {
  CHECK(std::string(cqw_version()).size() > 0);
  double a = 0;
  CHECK(cqw_parse_angle("pi/4", &a) == CQW_OK);
  CHECK(a == doctest::Approx(M_PI / 4));
  CHECK(cqw_parse_angle("nope", &a) == CQW_ERR_PARSE);
  CHECK(std::string(cqw_last_error()).find("nope") != std::string::npos);
  CHECK(cqw_parse_angle(nullptr, &a) == CQW_ERR_INVALID_ARGUMENT);

  cqw_coin c{};
  CHECK(cqw_coin_preset("hadamard", &c) == CQW_OK);
  CHECK(c.gamma == doctest::Approx(M_PI / 4));
  CHECK(cqw_coin_preset("unknown", &c) != CQW_OK);
  cqw_coin bad{2.0, 0.0, 0.0};
  CHECK(cqw_coin_check(&bad) == CQW_ERR_OUT_OF_RANGE);
}

TEST_CASE("step handles") {
  cqw_coin c{};
  cqw_coin_preset("hadamard", &c);
  cqw_step* s = nullptr;
  CHECK(cqw_step_create(2, &c, &s) != CQW_OK);
  CHECK(s == nullptr);
  REQUIRE(cqw_step_create(4, &c, &s) == CQW_OK);
  CHECK(cqw_step_sites(s) == 4);

  // |site 0, coin 0> -> H: (1/sqrt2)(|0,0> + |0,1>) -> |1,0>/sqrt2 + |3,1>/sqrt2
  std::vector<double> in(16, 0.0), out(16, 0.0);
  in[0] = 1.0;
  REQUIRE(cqw_step_apply(s, in.data(), out.data()) == CQW_OK);
  CHECK(out[2 * 2] == doctest::Approx(M_SQRT1_2));
  CHECK(out[2 * 7] == doctest::Approx(M_SQRT1_2));

  std::vector<double> dense(8 * 16);
  CHECK(cqw_step_dense(s, dense.data(), 10) == CQW_ERR_DIMENSION);
  CHECK(cqw_step_dense(s, dense.data(), dense.size()) == CQW_OK);

  double pr = 0;
  CHECK(cqw_walker_pr(s, -1, 0, &pr) == CQW_OK);
  CHECK(pr == doctest::Approx(1.0));
  cqw_step_destroy(s);
  cqw_step_destroy(nullptr);
}

TEST_CASE("walker PR exemplar through the C API") {
  cqw_coin c{M_PI / 4, 5 * M_PI / 32, 5 * M_PI / 32};
  cqw_step* s = nullptr;
  REQUIRE(cqw_step_create(32, &c, &s) == CQW_OK);
  double pr = 0;
  CHECK(cqw_walker_pr(s, 16, 1000, &pr) == CQW_OK);
  CHECK(pr == doctest::Approx(2.99).epsilon(0.01));
  cqw_step_destroy(s);
}

TEST_CASE("spectra") {
  cqw_coin c{};
  cqw_coin_preset("hadamard", &c);
  cqw_spectrum* sp = nullptr;
  REQUIRE(cqw_spectrum_analytic(16, &c, &sp) == CQW_OK);
  CHECK(cqw_spectrum_size(sp) == 32);
  double re = 0, im = 0;
  CHECK(cqw_spectrum_eigenvalue(sp, 0, &re, &im) == CQW_OK);
  CHECK(std::hypot(re, im) == doctest::Approx(1.0));
  CHECK(cqw_spectrum_eigenvalue(sp, 32, &re, &im) == CQW_ERR_OUT_OF_RANGE);
  cqw_spectrum_info info{};
  CHECK(cqw_spectrum_get_info(sp, &info) == CQW_OK);
  CHECK(info.n_sites == 16);
  CHECK(info.degenerate == 1);
  CHECK(info.degeneracy_m == 0);
  CHECK(info.mean_pr == doctest::Approx(16.0));
  cqw_spectrum_destroy(sp);

  cqw_step* s = nullptr;
  cqw_step_create_noisy(16, &c, M_PI, 1, 0, &s);
  REQUIRE(cqw_spectrum_numerical(s, &sp) == CQW_OK);
  CHECK(cqw_spectrum_get_info(sp, &info) == CQW_OK);
  CHECK(info.mean_pr < 16.0);
  cqw_spectrum_destroy(sp);
  cqw_step_destroy(s);
}

TEST_CASE("evolution, fit and convergence") {
  cqw_coin c{};
  cqw_coin_preset("hadamard", &c);
  cqw_step* s = nullptr;
  REQUIRE(cqw_step_create(128, &c, &s) == CQW_OK);
  cqw_evolve_options o = cqw_evolve_options_default();
  CHECK(o.initial_site < 0);
  CHECK(o.record_every == 1);
  cqw_trace* t = nullptr;
  REQUIRE(cqw_evolve(s, 128, &o, &t) == CQW_OK);
  CHECK(cqw_trace_size(t) == 129);
  int step = 0;
  double x = 0, msd = 0, norm = 0;
  CHECK(cqw_trace_record(t, 0, &step, &x, &msd, &norm) == CQW_OK);
  CHECK(step == 0);
  CHECK(msd == 0.0);
  CHECK(cqw_trace_record(t, 129, &step, &x, &msd, &norm) == CQW_ERR_OUT_OF_RANGE);

  cqw_fit fit{};
  REQUIRE(cqw_trace_fit(t, 1, 64, 0, &fit) == CQW_OK);
  CHECK(fit.alpha == doctest::Approx(0.297).epsilon(0.05));
  CHECK(fit.beta == doctest::Approx(1.996).epsilon(0.005));
  CHECK(std::string(cqw_classify_spread(fit.beta)) == "ballistic");
  CHECK(cqw_classify_spread(NAN) == nullptr);

  std::vector<double> dist(128);
  CHECK(cqw_trace_final_distribution(t, dist.data(), dist.size()) == CQW_OK);
  CHECK(cqw_trace_distribution(t, 0, dist.data(), dist.size()) != CQW_OK);  // not kept

  cqw_convergence cv{};
  CHECK(cqw_trace_converge(t, 0.01, 128, 0, &cv) == CQW_OK);
  CHECK(cv.window == 32);
  CHECK(cv.converged == 0);
  CHECK(cv.convergence_step == -1);
  CHECK(std::isnan(cv.saturation_level));

  const fs::path dir = fs::temp_directory_path() / "cqw_test_capi";
  fs::remove_all(dir);
  CHECK(cqw_trace_write(t, (dir / "trace.csv").c_str(), CQW_FORMAT_CSV) == CQW_OK);
  CHECK(cqw_fit_write(&fit, (dir / "fit.json").c_str()) == CQW_OK);
  CHECK(fs::exists(dir / "trace.csv"));
  fs::remove_all(dir);

  cqw_trace_destroy(t);
  cqw_step_destroy(s);
}

TEST_CASE("circuits") {
  cqw_coin c{};
  cqw_coin_preset("hadamard", &c);
  cqw_circuit* k = nullptr;
  REQUIRE(cqw_circuit_walk(3, &c, 8, 1, M_PI, 20240917, 0, &k) == CQW_OK);
  CHECK(cqw_circuit_qubits(k) == 4);
  CHECK(cqw_circuit_gate_count(k) > 0);
  double dev = 1;
  int eq = 0;
  CHECK(cqw_circuit_verify(k, &dev, &eq) == CQW_OK);
  CHECK(eq == 1);
  CHECK(dev < 1e-9);

  size_t needed = 0;
  CHECK(cqw_circuit_qasm(k, nullptr, 0, &needed) == CQW_OK);
  REQUIRE(needed > 1);
  char small[4] = "xyz";
  CHECK(cqw_circuit_qasm(k, small, sizeof(small), &needed) == CQW_OK);
  CHECK(small[0] == '\0');
  std::string text(needed, '\0');
  CHECK(cqw_circuit_qasm(k, text.data(), text.size(), &needed) == CQW_OK);
  text.resize(needed - 1);
  CHECK(text.rfind("OPENQASM 2.0;", 0) == 0);

  cqw_circuit* parsed = nullptr;
  REQUIRE(cqw_circuit_parse_qasm(text.c_str(), &parsed) == CQW_OK);
  CHECK(cqw_circuit_gate_count(parsed) == cqw_circuit_gate_count(k));
  CHECK(cqw_circuit_verify(parsed, &dev, &eq) == CQW_ERR_INVALID_ARGUMENT);
  cqw_circuit_destroy(parsed);
  CHECK(cqw_circuit_parse_qasm("OPENQASM 2.0;\nqreg q[1];\nzz q[0];\n", &parsed) == CQW_ERR_PARSE);

  for (int n = 1; n <= 5; ++n) {
    cqw_circuit* q = nullptr;
    REQUIRE(cqw_circuit_qft(n, n % 2, &q) == CQW_OK);
    CHECK(cqw_circuit_verify(q, &dev, &eq) == CQW_OK);
    CHECK(eq == 1);
    cqw_circuit_destroy(q);
    REQUIRE(cqw_circuit_clock(n, 3, 1, &q) == CQW_OK);
    CHECK(cqw_circuit_verify(q, &dev, &eq) == CQW_OK);
    CHECK(eq == 1);
    cqw_circuit_destroy(q);
  }
  CHECK(cqw_circuit_qft(11, 0, &k) == CQW_ERR_OUT_OF_RANGE);
  cqw_circuit_destroy(k);
}

TEST_CASE("reproduce through the C API") {
  const fs::path dir = fs::temp_directory_path() / "cqw_test_capi_fig";
  fs::remove_all(dir);
  cqw_reproduce_options o = cqw_reproduce_options_default();
  CHECK(o.seed == 20240917u);
  size_t needed = 0;
  CHECK(cqw_reproduce(1, dir.c_str(), &o, nullptr, 0, &needed) == CQW_OK);
  CHECK(needed > 1);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(cqw_reproduce(0, dir.c_str(), &o, nullptr, 0, &needed) == CQW_ERR_INVALID_ARGUMENT);
  fs::remove_all(dir);
}
