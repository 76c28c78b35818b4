#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cqw/circuits.hpp"
#include "cqw/error.hpp"
#include "cqw/graph.hpp"
#include "cqw/noise.hpp"

using namespace cqw;

namespace {

CoinParams random_coin(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> g(0.0, kPi / 2), t(0.0, kTwoPi);
  return CoinParams(g(rng), t(rng), t(rng));
}

bool same_up_to_phase(const ComplexMatrix& u, const ComplexMatrix& v, double tol = 1e-9) {
  return equiv_up_to_global_phase(u, v, tol).equivalent;
}

}  // namespace

TEST_CASE("coin circuit") {
  CHECK(same_up_to_phase(circuit_unitary(coin_circuit(coin_preset("hadamard"))),
                         build_coin(coin_preset("hadamard"))));
  ComplexMatrix z(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  CHECK(same_up_to_phase(circuit_unitary(coin_circuit(CoinParams(0, 0, 0))), z));

  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto p = random_coin(rng);
    const auto r = equiv_up_to_global_phase(circuit_unitary(coin_circuit(p)), build_coin(p));
    CHECK(r.equivalent);
    CHECK(r.max_deviation < 1e-12);
  }
}

TEST_CASE("qft circuit") {
  const auto one = qft_circuit(1);
  REQUIRE(one.gates.size() == 1);
  CHECK(one.gates[0].kind == GateKind::kH);

  CHECK((circuit_unitary(qft_circuit(2)) - fourier_matrix(4)).cwiseAbs().maxCoeff() < 1e-12);
  for (int n = 1; n <= 6; ++n) {
    const auto dim = 1 << n;
    CHECK((circuit_unitary(qft_circuit(n)) - fourier_matrix(dim)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((circuit_unitary(inverse_qft_circuit(n)) - fourier_matrix(dim).adjoint())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }

  const auto k = count_gates(qft_circuit(4));
  CHECK(k.h == 4);
  CHECK(k.cp == 6);
  CHECK(k.swap == 2);
  CHECK(k.total == 12);
  CHECK_THROWS_AS(qft_circuit(0), Error);
  CHECK_THROWS_AS(qft_circuit(kMaxQubits + 1), Error);
}

TEST_CASE("clock circuit") {
  const auto u = circuit_unitary(clock_circuit(2, 1, false));
  for (int s = 0; s < 4; ++s) CHECK(std::abs(u(s, s) - std::polar(1.0, -kPi * s / 2)) < 1e-14);
  CHECK((u - clock_matrix(4)).cwiseAbs().maxCoeff() < 1e-14);

  for (int n = 1; n <= 5; ++n) {
    const ComplexMatrix base = clock_matrix(1 << n);
    ComplexMatrix pw = base;
    for (int m = 1; m <= 4; ++m) {
      CHECK((circuit_unitary(clock_circuit(n, m, false)) - pw).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((circuit_unitary(clock_circuit(n, m, true)) - pw.adjoint()).cwiseAbs().maxCoeff() <
            1e-12);
      const ComplexMatrix prod =
          circuit_unitary(clock_circuit(n, m, true)) * circuit_unitary(clock_circuit(n, m, false));
      CHECK((prod - ComplexMatrix::Identity(1 << n, 1 << n)).cwiseAbs().maxCoeff() < 1e-12);
      pw = base * pw;
    }
  }
  CHECK_THROWS_AS(clock_circuit(2, 0, false), Error);
}

TEST_CASE("step circuit") {
  const auto h = coin_preset("hadamard");
  const auto s = coin_preset("symmetric");
  CHECK(same_up_to_phase(circuit_unitary(step_circuit(2, h)), reference_step_matrix(2, h)));
  CHECK(same_up_to_phase(circuit_unitary(step_circuit(3, s)), reference_step_matrix(3, s)));

  // For N >= 4 the reference agrees with the library's step operator.
  CHECK((reference_step_matrix(3, s) - StepOperator(8, s).dense()).cwiseAbs().maxCoeff() < 1e-15);

  CircuitIR twice = step_circuit(3, s);
  twice.append(step_circuit(3, s));
  CHECK(same_up_to_phase(circuit_unitary(twice), reference_walk_matrix(3, s, 2)));
}

TEST_CASE("walk circuit") {
  const auto h = coin_preset("hadamard");
  CHECK(walk_circuit(3, h, 1) == step_circuit(3, h));

  for (int n = 1; n <= 5; ++n) {
    CHECK(same_up_to_phase(circuit_unitary(walk_circuit(n, h, 8)), reference_walk_matrix(n, h, 8)));
    const auto zero = sample_noise(1 << n, 0.0, 1, 0);
    CHECK(same_up_to_phase(circuit_unitary(walk_circuit(n, h, 3, zero)),
                           reference_walk_matrix(n, h, 3)));
    const auto noise = sample_noise(1 << n, kPi, 11, static_cast<std::uint64_t>(n));
    CHECK(same_up_to_phase(circuit_unitary(walk_circuit(n, h, 8, noise)),
                           reference_walk_matrix(n, h, 8, noise)));
  }

  const auto noise = sample_noise(8, kPi / 3, 20240917, 0);
  const auto r = equiv_up_to_global_phase(circuit_unitary(walk_circuit(3, h, 8, noise)),
                                          reference_walk_matrix(3, h, 8, noise));
  CHECK(r.max_deviation < 1e-8);

  // Norm is preserved on a localized start.
  ComplexVector psi = ComplexVector::Zero(16);
  psi(2 * 4) = 1.0;
  const auto out = simulate(walk_circuit(3, h, 8, noise), psi);
  CHECK(std::abs(out.squaredNorm() - 1.0) < 1e-12);

  CHECK_THROWS_AS(walk_circuit(3, h, 0), Error);
  CHECK_THROWS_AS(walk_circuit(3, h, 2, sample_noise(4, 0.1, 1, 0)), Error);
}

TEST_CASE("equivalence up to global phase") {
  const ComplexMatrix hd = build_coin(coin_preset("hadamard"));
  CHECK(equiv_up_to_global_phase(hd, Complex(0, -1) * hd).equivalent);
  ComplexMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  CHECK_FALSE(equiv_up_to_global_phase(hd, x).equivalent);
  CHECK_THROWS_AS(equiv_up_to_global_phase(hd, ComplexMatrix::Identity(4, 4)), Error);
}

TEST_CASE("diagonal synthesis") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int n = 1; n <= 5; ++n) {
    const int dim = 1 << n;
    std::vector<double> phases(static_cast<size_t>(dim));
    for (double& p : phases) p = u(rng);
    ComplexMatrix d = ComplexMatrix::Zero(dim, dim);
    for (int s = 0; s < dim; ++s) d(s, s) = std::polar(1.0, phases[static_cast<size_t>(s)]);
    CHECK(same_up_to_phase(circuit_unitary(diagonal_circuit(n, phases, false)), d));
  }
  // Constant phases are a global phase: no gates.
  CHECK(diagonal_circuit(3, std::vector<double>(8, 0.7), false).gates.empty());
}

TEST_CASE("unitarity of built circuits") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 4; ++n) {
    CHECK(unitarity_error(circuit_unitary(qft_circuit(n))) < 1e-12);
    CHECK(unitarity_error(circuit_unitary(walk_circuit(n, random_coin(rng), 4,
                                                       sample_noise(1 << n, 1.0, 2, 0)))) < 1e-12);
  }
}

TEST_CASE("qasm emission") {
  CircuitIR c = make_circuit(1, false);
  c.gates.push_back({GateKind::kH, {0}, 0.0});
  CHECK(emit_qasm(c) == "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\nh q[0];\n");

  const std::string text = emit_qasm(clock_circuit(3, 1, true));
  CHECK(text.find("p(0.78539816339744828) q[0];") != std::string::npos);
  CHECK(text.find("p(1.5707963267948966) q[1];") != std::string::npos);
  CHECK(text.find("p(3.1415926535897931) q[2];") != std::string::npos);

  const std::string walk = emit_qasm(step_circuit(2, coin_preset("hadamard")));
  CHECK(walk.find("// cqw-layout position_qubits=2 coin=0\nqreg q[3];") != std::string::npos);
  CHECK(walk.find("-0)") == std::string::npos);
}

TEST_CASE("qasm round trip") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> nd(1, 4), steps(1, 5);
  for (int i = 0; i < 100; ++i) {
    const int n = nd(rng);
    const auto noise = sample_noise(1 << n, 1.3, 9, static_cast<std::uint64_t>(i));
    const CircuitIR c = i % 2 ? walk_circuit(n, random_coin(rng), steps(rng), noise)
                              : walk_circuit(n, random_coin(rng), steps(rng));
    const CircuitIR back = parse_qasm(emit_qasm(c));
    CHECK(back == c);
    CHECK(emit_qasm(back) == emit_qasm(c));
  }
  CHECK(parse_qasm(emit_qasm(qft_circuit(3))) == qft_circuit(3));
  CHECK(parse_qasm(emit_qasm(coin_circuit(coin_preset("symmetric")))) ==
        coin_circuit(coin_preset("symmetric")));
}

TEST_CASE("qasm parse errors") {
  CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nh q[2];\n"), Error);
  CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nfoo q[0];\n"),
                  Error);
  CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\np q[0];\n"), Error);
  CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n"
                             "// cqw-layout position_qubits=3 coin=0\nqreg q[3];\n"),
                  Error);
  try {
    parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncx q[0],q[0];\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
  }
}

TEST_CASE("gate counts") {
  const auto k = count_gates(step_circuit(2, coin_preset("hadamard")));
  // coin 3, iQFT 2H+1CP+1SWAP, block 2P+2CP, QFT 2H+1CP+1SWAP.
  CHECK(k.rz == 2);
  CHECK(k.ry == 1);
  CHECK(k.h == 4);
  CHECK(k.cp == 4);
  CHECK(k.p == 2);
  CHECK(k.swap == 2);
  CHECK(k.total == 15);
  CHECK(k.single_qubit + k.two_qubit == k.total);
  CHECK(k.depth > 0);
  CHECK(k.depth <= k.total);
  CHECK(gate_counts_to_json(k).find("\"total\": 15") != std::string::npos);
}
