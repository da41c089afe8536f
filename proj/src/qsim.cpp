#include "qnlp/qsim.hpp"

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qnlp/error.hpp"

namespace qnlp {

namespace {

using Mat2 = std::array<Complex, 4>;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Mat2 matrix_of(const Gate& g) {
  const Complex i(0.0, 1.0);
  switch (g.kind) {
    case GateKind::H:
      return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
    case GateKind::X:
    case GateKind::CNOT:
      return {0.0, 1.0, 1.0, 0.0};
    case GateKind::CZ:
      return {1.0, 0.0, 0.0, -1.0};
    case GateKind::Rx: {
      const double c = std::cos(g.theta / 2), s = std::sin(g.theta / 2);
      return {c, -i * s, -i * s, c};
    }
    case GateKind::Rz:
    case GateKind::CRz:
      return {std::exp(-i * (g.theta / 2)), 0.0, 0.0, std::exp(i * (g.theta / 2))};
    case GateKind::ControlledU:
      return g.unitary;
  }
  return {};
}

void apply_single(StateVector& s, std::size_t target, const Mat2& u, bool controlled,
                  std::size_t control) {
  const std::size_t n = s.width;
  const std::size_t tbit = std::size_t{1} << (n - 1 - target);
  const std::size_t cbit = controlled ? std::size_t{1} << (n - 1 - control) : 0;
  auto& a = s.amplitudes;
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    if (idx & tbit) continue;
    if (controlled && !(idx & cbit)) continue;
    const Complex a0 = a[idx];
    const Complex a1 = a[idx | tbit];
    a[idx] = u[0] * a0 + u[1] * a1;
    a[idx | tbit] = u[2] * a0 + u[3] * a1;
  }
}

}  // namespace

Gate Gate::h(std::size_t q) { return Gate{GateKind::H, q}; }
Gate Gate::x(std::size_t q) { return Gate{GateKind::X, q}; }
Gate Gate::cnot(std::size_t c, std::size_t t) { return Gate{GateKind::CNOT, t, c}; }
Gate Gate::cz(std::size_t c, std::size_t t) { return Gate{GateKind::CZ, t, c}; }
Gate Gate::rx(std::size_t q, double theta) { return Gate{GateKind::Rx, q, 0, theta}; }
Gate Gate::rz(std::size_t q, double theta) { return Gate{GateKind::Rz, q, 0, theta}; }
Gate Gate::crz(std::size_t c, std::size_t t, double theta) {
  return Gate{GateKind::CRz, t, c, theta};
}
Gate Gate::controlled(std::size_t c, std::size_t t, const std::array<Complex, 4>& u) {
  return Gate{GateKind::ControlledU, t, c, 0.0, u};
}

bool Gate::is_controlled() const {
  return kind == GateKind::CNOT || kind == GateKind::CZ || kind == GateKind::CRz ||
         kind == GateKind::ControlledU;
}

Gate inverse(const Gate& g) {
  Gate out = g;
  switch (g.kind) {
    case GateKind::Rx:
    case GateKind::Rz:
    case GateKind::CRz:
      out.theta = -g.theta;
      break;
    case GateKind::ControlledU:
      out.unitary = {std::conj(g.unitary[0]), std::conj(g.unitary[2]), std::conj(g.unitary[1]),
                     std::conj(g.unitary[3])};
      break;
    default:
      break;
  }
  return out;
}

std::string gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::Rx: return "Rx";
    case GateKind::Rz: return "Rz";
    case GateKind::CRz: return "CRz";
    case GateKind::ControlledU: return "CU";
  }
  return "?";
}

void Circuit::validate() const {
  if (width > kMaxWidth) {
    throw Error(ErrorCode::WidthExceeded, std::to_string(width) + " qubits exceeds the limit of " +
                                              std::to_string(kMaxWidth));
  }
  for (const auto& g : gates) {
    if (g.target >= width || (g.is_controlled() && g.control >= width)) {
      throw Error(ErrorCode::InvalidInput, gate_name(g.kind) + " acts outside the circuit");
    }
    if (g.is_controlled() && g.control == g.target) {
      throw Error(ErrorCode::InvalidInput, gate_name(g.kind) + " control equals target");
    }
  }
  std::set<std::size_t> post;
  for (const auto& [q, v] : postselections) {
    if (q >= width || (v != 0 && v != 1) || !post.insert(q).second) {
      throw Error(ErrorCode::InvalidInput, "bad postselection on qubit " + std::to_string(q));
    }
  }
  std::set<std::size_t> meas;
  for (auto q : measured) {
    if (q >= width || post.contains(q) || !meas.insert(q).second) {
      throw Error(ErrorCode::InvalidInput, "bad measured qubit " + std::to_string(q));
    }
  }
}

Circuit inverse(const Circuit& c) {
  Circuit out;
  out.width = c.width;
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) out.gates.push_back(inverse(*it));
  return out;
}

StateVector StateVector::zeros(std::size_t width) {
  if (width > kMaxWidth) throw Error(ErrorCode::WidthExceeded, "state wider than 24 qubits");
  StateVector s;
  s.width = width;
  s.amplitudes.assign(std::size_t{1} << width, Complex(0.0));
  s.amplitudes[0] = 1.0;
  return s;
}

StateVector StateVector::basis(const std::string& bits) {
  StateVector s = zeros(bits.size());
  std::size_t idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw Error(ErrorCode::InvalidInput, "bitstring must be 0/1");
    idx = (idx << 1) | static_cast<std::size_t>(c - '0');
  }
  s.amplitudes[0] = 0.0;
  s.amplitudes[idx] = 1.0;
  return s;
}

double StateVector::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes) sum += std::norm(a);
  return std::sqrt(sum);
}

Complex StateVector::amplitude(const std::string& bits) const {
  if (bits.size() != width) throw Error(ErrorCode::WidthMismatch, "bitstring width differs");
  std::size_t idx = 0;
  for (char c : bits) idx = (idx << 1) | static_cast<std::size_t>(c == '1');
  return amplitudes[idx];
}

std::string bitstring(std::size_t index, std::size_t width) {
  std::string out(width, '0');
  for (std::size_t q = 0; q < width; ++q) {
    if (index & (std::size_t{1} << (width - 1 - q))) out[q] = '1';
  }
  return out;
}

void apply(StateVector& state, const Gate& g) {
  apply_single(state, g.target, matrix_of(g), g.is_controlled(), g.control);
}

StateVector simulate(const Circuit& c, const std::string& initial) {
  c.validate();
  if (initial.size() != c.width) {
    throw Error(ErrorCode::WidthMismatch, "initial state has " + std::to_string(initial.size()) +
                                              " bits for a " + std::to_string(c.width) +
                                              "-qubit circuit");
  }
  StateVector s = StateVector::basis(initial);
  for (const auto& g : c.gates) apply(s, g);
  return s;
}

StateVector simulate(const Circuit& c) { return simulate(c, std::string(c.width, '0')); }

StateVector project(const StateVector& s,
                    const std::vector<std::pair<std::size_t, int>>& constraints) {
  const std::size_t n = s.width;
  std::size_t mask = 0;
  std::size_t want = 0;
  for (const auto& [q, v] : constraints) {
    if (q >= n) throw Error(ErrorCode::InvalidInput, "constraint outside the state");
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
    if (mask & bit) throw Error(ErrorCode::InvalidInput, "qubit constrained twice");
    mask |= bit;
    if (v) want |= bit;
  }
  std::vector<std::size_t> keep_bits;
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
    if (!(mask & bit)) keep_bits.push_back(bit);
  }
  StateVector out;
  out.width = keep_bits.size();
  out.amplitudes.assign(std::size_t{1} << out.width, Complex(0.0));
  for (std::size_t idx = 0; idx < s.amplitudes.size(); ++idx) {
    if ((idx & mask) != want) continue;
    std::size_t o = 0;
    for (auto bit : keep_bits) o = (o << 1) | static_cast<std::size_t>((idx & bit) != 0);
    out.amplitudes[o] = s.amplitudes[idx];
  }
  return out;
}

Postselected postselect(const StateVector& s,
                        const std::vector<std::pair<std::size_t, int>>& constraints) {
  Postselected r;
  r.state = project(s, constraints);
  const double nrm = r.state.norm();
  r.probability = nrm * nrm;
  if (nrm < kZeroProbabilityNorm) {
    r.zero_probability = true;
    r.probability = 0.0;
    for (auto& a : r.state.amplitudes) a = 0.0;
  } else {
    for (auto& a : r.state.amplitudes) a /= nrm;
  }
  return r;
}

Histogram sample(const StateVector& s, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw Error(ErrorCode::InvalidInput, "shots must be at least 1");
  std::vector<double> weights(s.amplitudes.size());
  for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = std::norm(s.amplitudes[i]);
  std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> counts(weights.size(), 0);
  for (std::uint64_t k = 0; k < shots; ++k) ++counts[dist(rng)];
  Histogram h;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i]) h[bitstring(i, s.width)] = counts[i];
  }
  return h;
}

std::string circuit_json(const Circuit& c) {
  nlohmann::json j;
  j["width"] = c.width;
  j["gates"] = nlohmann::json::array();
  for (const auto& g : c.gates) {
    nlohmann::json jg;
    jg["gate"] = gate_name(g.kind);
    jg["wires"] = g.is_controlled() ? nlohmann::json{g.control, g.target} : nlohmann::json{g.target};
    if (g.kind == GateKind::Rx || g.kind == GateKind::Rz || g.kind == GateKind::CRz) {
      jg["theta"] = g.theta;
    }
    if (g.kind == GateKind::ControlledU) {
      for (const auto& u : g.unitary) jg["unitary"].push_back({u.real(), u.imag()});
    }
    j["gates"].push_back(jg);
  }
  for (const auto& [q, v] : c.postselections) j["postselect"].push_back({q, v});
  j["measured"] = c.measured;
  return j.dump(2);
}

std::string histogram_csv(const Histogram& h) {
  std::ostringstream out;
  out << "bitstring,count\n";
  for (const auto& [bits, count] : h) out << bits << ',' << count << '\n';
  return out.str();
}

}  // namespace qnlp
