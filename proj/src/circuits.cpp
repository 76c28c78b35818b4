#include "cqw/circuits.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "cqw/error.hpp"
#include "cqw/graph.hpp"
#include "cqw/io.hpp"

namespace cqw {

namespace {


void check_register(int n) {
  require(n >= 1 && n <= kMaxQubits, ErrorCode::kOutOfRange,
          "number of position qubits must be in [1, " + std::to_string(kMaxQubits) + "], got " +
              std::to_string(n));
}

bool is_two_qubit(GateKind k) {
  return k == GateKind::kCP || k == GateKind::kSwap || k == GateKind::kCX;
}

bool has_angle(GateKind k) {
  return k == GateKind::kP || k == GateKind::kCP || k == GateKind::kRY || k == GateKind::kRZ;
}

void check_gate(const Gate& g, int n_qubits) {
  const size_t arity = is_two_qubit(g.kind) ? 2 : 1;
  require(g.qubits.size() == arity, ErrorCode::kInvalidArgument,
          std::string("gate ") + std::string(gate_name(g.kind)) + " has wrong number of qubits");
  for (int q : g.qubits)
    require(q >= 0 && q < n_qubits, ErrorCode::kOutOfRange,
            "qubit index " + std::to_string(q) + " outside register of " +
                std::to_string(n_qubits));
  if (arity == 2)
    require(g.qubits[0] != g.qubits[1], ErrorCode::kInvalidArgument,
            "two-qubit gate on a single qubit");
  require(std::isfinite(g.angle), ErrorCode::kInvalidArgument, "gate angle is not finite");
}

void apply_single(const Eigen::Matrix2cd& u, int q, Complex* a, size_t dim) {
  const size_t bit = size_t{1} << q;
  for (size_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    const Complex x = a[i];
    const Complex y = a[i | bit];
    a[i] = u(0, 0) * x + u(0, 1) * y;
    a[i | bit] = u(1, 0) * x + u(1, 1) * y;
  }
}

void apply_raw(const Gate& g, Complex* a, size_t dim) {
  switch (g.kind) {
    case GateKind::kH: {
      const double r = 1.0 / std::sqrt(2.0);
      Eigen::Matrix2cd h;
      h << r, r, r, -r;
      apply_single(h, g.qubits[0], a, dim);
      break;
    }
    case GateKind::kP: {
      const size_t bit = size_t{1} << g.qubits[0];
      const Complex ph = std::polar(1.0, g.angle);
      for (size_t i = 0; i < dim; ++i)
        if (i & bit) a[i] *= ph;
      break;
    }
    case GateKind::kRY:
      apply_single(ry_matrix(g.angle), g.qubits[0], a, dim);
      break;
    case GateKind::kRZ:
      apply_single(rz_matrix(g.angle), g.qubits[0], a, dim);
      break;
    case GateKind::kCP: {
      const size_t mask = (size_t{1} << g.qubits[0]) | (size_t{1} << g.qubits[1]);
      const Complex ph = std::polar(1.0, g.angle);
      for (size_t i = 0; i < dim; ++i)
        if ((i & mask) == mask) a[i] *= ph;
      break;
    }
    case GateKind::kCX: {
      const size_t c = size_t{1} << g.qubits[0];
      const size_t t = size_t{1} << g.qubits[1];
      for (size_t i = 0; i < dim; ++i)
        if ((i & c) && !(i & t)) std::swap(a[i], a[i | t]);
      break;
    }
    case GateKind::kSwap: {
      const size_t b0 = size_t{1} << g.qubits[0];
      const size_t b1 = size_t{1} << g.qubits[1];
      for (size_t i = 0; i < dim; ++i)
        if ((i & b0) && !(i & b1)) std::swap(a[i], a[(i & ~b0) | b1]);
      break;
    }
  }
}

void append_qft(CircuitIR& c, int n, bool inverse) {
  std::vector<Gate> g;
  // Little-endian register: bit b of the basis index is position qubit b.
  for (int j = n - 1; j >= 0; --j) {
    g.push_back({GateKind::kH, {c.position_qubit(j)}, 0.0});
    for (int k = j - 1; k >= 0; --k)
      g.push_back({GateKind::kCP, {c.position_qubit(k), c.position_qubit(j)},
                   kPi / std::ldexp(1.0, j - k)});
  }
  for (int i = 0; i < n / 2; ++i)
    g.push_back({GateKind::kSwap, {c.position_qubit(i), c.position_qubit(n - 1 - i)}, 0.0});
  if (inverse) {
    std::reverse(g.begin(), g.end());
    for (Gate& x : g) x.angle = -x.angle;
  }
  for (Gate& x : g) {
    if (x.angle == 0.0) x.angle = 0.0;  // no -0 in the emitted text
    c.gates.push_back(std::move(x));
  }
}

void append_coin(CircuitIR& c, const CoinParams& p) {
  c.gates.push_back({GateKind::kRZ, {c.coin_qubit()}, p.theta() + kPi});
  c.gates.push_back({GateKind::kRY, {c.coin_qubit()}, 2.0 * p.gamma()});
  c.gates.push_back({GateKind::kRZ, {c.coin_qubit()}, p.phi()});
}

// Lambda on coin |0>, Lambda^dagger on coin |1>: unconditional Lambda, then
// coin-controlled phases with twice the opposite angle.
void append_shift_block(CircuitIR& c, int n) {
  const double dim = std::ldexp(1.0, n);
  for (int b = 0; b < n; ++b)
    c.gates.push_back({GateKind::kP, {c.position_qubit(b)}, -kTwoPi * std::ldexp(1.0, b) / dim});
  for (int b = 0; b < n; ++b)
    c.gates.push_back({GateKind::kCP, {c.coin_qubit(), c.position_qubit(b)},
                       2.0 * kTwoPi * std::ldexp(1.0, b) / dim});
}

void append_diagonal(CircuitIR& c, int n, const std::vector<double>& phases) {
  const size_t dim = size_t{1} << n;
  require(phases.size() == dim, ErrorCode::kDimensionMismatch,
          "diagonal needs " + std::to_string(dim) + " phases, got " +
              std::to_string(phases.size()));
  // Walsh coefficients of the phase function; parity set S gets angle -2 w_S.
  std::vector<double> w(phases);
  for (size_t len = 1; len < dim; len <<= 1)
    for (size_t i = 0; i < dim; i += 2 * len)
      for (size_t j = i; j < i + len; ++j) {
        const double x = w[j];
        const double y = w[j + len];
        w[j] = x + y;
        w[j + len] = x - y;
      }
  for (double& v : w) v /= static_cast<double>(dim);
  auto angle = [&](size_t set) { return -2.0 * w[set]; };
  constexpr double kSkip = 1e-14;
  for (int t = 0; t < n; ++t) {
    const size_t top = size_t{1} << t;
    bool any = false;
    for (size_t g = 0; g < top; ++g) any = any || std::abs(angle(top | g)) > kSkip;
    if (!any) continue;
    // Gray-code walk over the subsets of lower qubits; qubit t carries the
    // running parity, toggled by one CX per step.
    size_t gray = 0;
    for (size_t i = 0;; ++i) {
      const double a = angle(top | gray);
      if (std::abs(a) > kSkip) c.gates.push_back({GateKind::kP, {c.position_qubit(t)}, a});
      if (i + 1 == (size_t{1} << t)) break;
      const size_t next = (i + 1) ^ ((i + 1) >> 1);
      const int flip = std::countr_zero(next ^ gray);
      c.gates.push_back({GateKind::kCX, {c.position_qubit(flip), c.position_qubit(t)}, 0.0});
      gray = next;
    }
    if (t > 0)
      c.gates.push_back({GateKind::kCX, {c.position_qubit(t - 1), c.position_qubit(t)}, 0.0});
  }
}

}  // namespace

void CircuitIR::append(const CircuitIR& other) {
  require(other.n_position_qubits == n_position_qubits && other.has_coin == has_coin,
          ErrorCode::kDimensionMismatch, "cannot append circuits on different registers");
  gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

CircuitIR make_circuit(int n_position_qubits, bool has_coin) {
  require(n_position_qubits >= 0 && n_position_qubits <= kMaxQubits, ErrorCode::kOutOfRange,
          "register size out of range");
  require(n_position_qubits > 0 || has_coin, ErrorCode::kInvalidArgument, "empty register");
  CircuitIR c;
  c.n_position_qubits = n_position_qubits;
  c.has_coin = has_coin;
  return c;
}

Eigen::Matrix2cd rz_matrix(double t) {
  Eigen::Matrix2cd m;
  m << std::polar(1.0, -0.5 * t), 0.0, 0.0, std::polar(1.0, 0.5 * t);
  return m;
}

Eigen::Matrix2cd ry_matrix(double t) {
  Eigen::Matrix2cd m;
  m << std::cos(0.5 * t), -std::sin(0.5 * t), std::sin(0.5 * t), std::cos(0.5 * t);
  return m;
}

Eigen::Matrix2cd phase_matrix(double t) {
  Eigen::Matrix2cd m;
  m << 1.0, 0.0, 0.0, std::polar(1.0, t);
  return m;
}

void apply_gate(const Gate& gate, int n_qubits, ComplexVector& state) {
  require(state.size() == (Eigen::Index{1} << n_qubits), ErrorCode::kDimensionMismatch,
          "state size does not match the register");
  check_gate(gate, n_qubits);
  apply_raw(gate, state.data(), static_cast<size_t>(state.size()));
}

ComplexVector simulate(const CircuitIR& circuit, ComplexVector state) {
  const int nq = circuit.n_qubits();
  require(state.size() == (Eigen::Index{1} << nq), ErrorCode::kDimensionMismatch,
          "state size does not match the register");
  for (const Gate& g : circuit.gates) check_gate(g, nq);
  for (const Gate& g : circuit.gates) apply_raw(g, state.data(), static_cast<size_t>(state.size()));
  return state;
}

ComplexMatrix circuit_unitary(const CircuitIR& circuit) {
  const int nq = circuit.n_qubits();
  require(nq <= 12, ErrorCode::kOutOfRange, "register too large for a dense unitary");
  for (const Gate& g : circuit.gates) check_gate(g, nq);
  const Eigen::Index dim = Eigen::Index{1} << nq;
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col)
    for (const Gate& g : circuit.gates) apply_raw(g, u.col(col).data(), static_cast<size_t>(dim));
  return u;
}

CircuitIR coin_circuit(const CoinParams& params) {
  CircuitIR c = make_circuit(0, true);
  append_coin(c, params);
  return c;
}

CircuitIR qft_circuit(int n) {
  check_register(n);
  CircuitIR c = make_circuit(n, false);
  append_qft(c, n, false);
  return c;
}

CircuitIR inverse_qft_circuit(int n) {
  check_register(n);
  CircuitIR c = make_circuit(n, false);
  append_qft(c, n, true);
  return c;
}

CircuitIR clock_circuit(int n, int power, bool adjoint) {
  check_register(n);
  require(power >= 1, ErrorCode::kInvalidArgument, "clock power must be >= 1");
  CircuitIR c = make_circuit(n, false);
  const double sign = adjoint ? 1.0 : -1.0;
  for (int b = 0; b < n; ++b)
    c.gates.push_back({GateKind::kP, {b},
                       sign * kTwoPi * std::ldexp(1.0, b) * power / std::ldexp(1.0, n)});
  return c;
}

CircuitIR step_circuit(int n, const CoinParams& coin) { return walk_circuit(n, coin, 1); }

CircuitIR walk_circuit(int n, const CoinParams& coin, int steps,
                       const std::optional<NoiseProfile>& noise) {
  check_register(n);
  require(steps >= 1, ErrorCode::kInvalidArgument, "steps must be >= 1");
  if (noise)
    require(noise->phases.size() == (size_t{1} << n), ErrorCode::kDimensionMismatch,
            "noise profile has " + std::to_string(noise->phases.size()) + " sites, register has " +
                std::to_string(size_t{1} << n));
  CircuitIR c = make_circuit(n, true);
  if (!noise) {
    // Stay in the Fourier frame between steps; the coin commutes with it.
    append_coin(c, coin);
    append_qft(c, n, true);
    append_shift_block(c, n);
    for (int m = 1; m < steps; ++m) {
      append_coin(c, coin);
      append_shift_block(c, n);
    }
    append_qft(c, n, false);
    return c;
  }
  for (int m = 0; m < steps; ++m) {
    append_coin(c, coin);
    append_qft(c, n, true);
    append_shift_block(c, n);
    append_qft(c, n, false);
    append_diagonal(c, n, noise->phases);
  }
  return c;
}

CircuitIR diagonal_circuit(int n, const std::vector<double>& phases, bool has_coin) {
  check_register(n);
  CircuitIR c = make_circuit(n, has_coin);
  append_diagonal(c, n, phases);
  return c;
}

ComplexMatrix reference_step_matrix(int n, const CoinParams& coin,
                                    const std::vector<double>& site_phases) {
  check_register(n);
  const int sites = 1 << n;
  require(site_phases.empty() || site_phases.size() == static_cast<size_t>(sites),
          ErrorCode::kDimensionMismatch, "site phase count does not match the register");
  const CoinMatrix cm = build_coin(coin);
  ComplexMatrix u = ComplexMatrix::Zero(2 * sites, 2 * sites);
  for (int s = 0; s < sites; ++s) {
    const int up = (s + 1) % sites;
    const int down = (s + sites - 1) % sites;
    const Complex fu = site_phases.empty() ? 1.0 : std::polar(1.0, site_phases[static_cast<size_t>(up)]);
    const Complex fd = site_phases.empty() ? 1.0 : std::polar(1.0, site_phases[static_cast<size_t>(down)]);
    for (int c = 0; c < 2; ++c) {
      u(2 * up, 2 * s + c) += fu * cm(0, c);
      u(2 * down + 1, 2 * s + c) += fd * cm(1, c);
    }
  }
  return u;
}

ComplexMatrix reference_walk_matrix(int n, const CoinParams& coin, int steps,
                                    const std::optional<NoiseProfile>& noise) {
  require(steps >= 1, ErrorCode::kInvalidArgument, "steps must be >= 1");
  const ComplexMatrix s = reference_step_matrix(n, coin, noise ? noise->phases : std::vector<double>{});
  ComplexMatrix u = s;
  for (int m = 1; m < steps; ++m) u = s * u;
  return u;
}

EquivalenceResult equiv_up_to_global_phase(const ComplexMatrix& u, const ComplexMatrix& v,
                                           double tol) {
  require(u.rows() == v.rows() && u.cols() == v.cols(), ErrorCode::kDimensionMismatch,
          "matrices differ in shape");
  require(u.size() > 0, ErrorCode::kInvalidArgument, "empty matrix");
  Eigen::Index r = 0, c = 0;
  u.cwiseAbs().maxCoeff(&r, &c);
  Complex chi = 1.0;
  if (std::abs(v(r, c)) > 0.0) {
    const Complex ratio = u(r, c) / v(r, c);
    chi = ratio / std::abs(ratio);
  }
  EquivalenceResult res;
  res.max_deviation = (u - chi * v).cwiseAbs().maxCoeff();
  res.equivalent = res.max_deviation <= tol;
  return res;
}

GateCounts count_gates(const CircuitIR& circuit) {
  GateCounts k;
  std::vector<int> layer(static_cast<size_t>(circuit.n_qubits()), 0);
  for (const Gate& g : circuit.gates) {
    ++k.total;
    switch (g.kind) {
      case GateKind::kH: ++k.h; break;
      case GateKind::kP: ++k.p; break;
      case GateKind::kCP: ++k.cp; break;
      case GateKind::kRY: ++k.ry; break;
      case GateKind::kRZ: ++k.rz; break;
      case GateKind::kSwap: ++k.swap; break;
      case GateKind::kCX: ++k.cx; break;
    }
    if (is_two_qubit(g.kind)) ++k.two_qubit; else ++k.single_qubit;
    int d = 0;
    for (int q : g.qubits) d = std::max(d, layer[static_cast<size_t>(q)]);
    for (int q : g.qubits) layer[static_cast<size_t>(q)] = d + 1;
  }
  for (int d : layer) k.depth = std::max(k.depth, d);
  return k;
}

std::string gate_counts_to_json(const GateCounts& k) {
  nlohmann::ordered_json j;
  j["total"] = k.total;
  j["single_qubit"] = k.single_qubit;
  j["two_qubit"] = k.two_qubit;
  j["depth"] = k.depth;
  j["h"] = k.h;
  j["p"] = k.p;
  j["cp"] = k.cp;
  j["ry"] = k.ry;
  j["rz"] = k.rz;
  j["swap"] = k.swap;
  j["cx"] = k.cx;
  return j.dump(2) + "\n";
}

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::kH: return "h";
    case GateKind::kP: return "p";
    case GateKind::kCP: return "cp";
    case GateKind::kRY: return "ry";
    case GateKind::kRZ: return "rz";
    case GateKind::kSwap: return "swap";
    case GateKind::kCX: return "cx";
  }
  return "?";
}

std::string emit_qasm(const CircuitIR& circuit) {
  const int nq = circuit.n_qubits();
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  if (circuit.has_coin)
    os << "// cqw-layout position_qubits=" << circuit.n_position_qubits << " coin=0\n";
  os << "qreg q[" << nq << "];\n";
  char buf[64];
  for (const Gate& g : circuit.gates) {
    check_gate(g, nq);
    os << gate_name(g.kind);
    if (has_angle(g.kind)) {
      std::snprintf(buf, sizeof(buf), "%.17g", g.angle);
      os << '(' << buf << ')';
    }
    os << " q[" << g.qubits[0] << ']';
    if (g.qubits.size() > 1) os << ",q[" << g.qubits[1] << ']';
    os << ";\n";
  }
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int parse_qubit(std::string_view s, int line) {
  s = trim(s);
  const auto open = s.find('[');
  const auto close = s.find(']');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open ||
      trim(s.substr(0, open)) != "q")
    fail(ErrorCode::kParse, "line " + std::to_string(line) + ": bad qubit operand");
  const std::string idx(s.substr(open + 1, close - open - 1));
  try {
    size_t used = 0;
    const int q = std::stoi(idx, &used);
    if (used != idx.size()) throw std::invalid_argument(idx);
    return q;
  } catch (const std::logic_error&) {
    fail(ErrorCode::kParse, "line " + std::to_string(line) + ": bad qubit index");
  }
}

}  // namespace

CircuitIR parse_qasm(std::string_view text) {
  std::optional<int> layout_positions;
  std::optional<int> qreg;
  std::vector<Gate> gates;
  int line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.starts_with("//")) {
      const auto key = line.find("cqw-layout position_qubits=");
      if (key != std::string_view::npos) {
        const std::string rest(line.substr(key + 27));
        layout_positions = std::atoi(rest.c_str());
      }
      continue;
    }
    if (line.starts_with("OPENQASM") || line.starts_with("include")) continue;
    if (line.back() != ';')
      fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": missing ';'");
    line.remove_suffix(1);
    if (line.starts_with("qreg")) {
      qreg = parse_qubit(line.substr(4), line_no);
      continue;
    }
    size_t name_end = 0;
    while (name_end < line.size() && std::isalpha(static_cast<unsigned char>(line[name_end])))
      ++name_end;
    const std::string_view name = line.substr(0, name_end);
    std::optional<GateKind> kind;
    for (GateKind k : {GateKind::kH, GateKind::kP, GateKind::kCP, GateKind::kRY, GateKind::kRZ,
                       GateKind::kSwap, GateKind::kCX})
      if (gate_name(k) == name) kind = k;
    if (!kind)
      fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": unsupported gate '" +
                                  std::string(name) + "'");
    std::string_view rest = line.substr(name_end);
    Gate g{*kind, {}, 0.0};
    if (has_angle(*kind)) {
      rest = trim(rest);
      const auto close = rest.find(')');
      if (rest.empty() || rest.front() != '(' || close == std::string_view::npos)
        fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": missing angle");
      try {
        g.angle = parse_angle(trim(rest.substr(1, close - 1)));
      } catch (const Error& e) {
        fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + e.what());
      }
      rest = rest.substr(close + 1);
    }
    size_t start = 0;
    while (start <= rest.size()) {
      const size_t comma = std::min(rest.find(',', start), rest.size());
      g.qubits.push_back(parse_qubit(rest.substr(start, comma - start), line_no));
      start = comma + 1;
    }
    gates.push_back(std::move(g));
  }
  if (!qreg) fail(ErrorCode::kParse, "no qreg declaration");
  const bool coin = layout_positions.has_value();
  const int positions = coin ? *layout_positions : *qreg;
  if (coin && positions + 1 != *qreg)
    fail(ErrorCode::kParse, "layout comment disagrees with qreg size");
  CircuitIR c = make_circuit(positions, coin);
  for (const Gate& g : gates) {
    try {
      check_gate(g, c.n_qubits());
    } catch (const Error& e) {
      fail(ErrorCode::kParse, e.what());
    }
  }
  c.gates = std::move(gates);
  return c;
}

}  // namespace cqw
