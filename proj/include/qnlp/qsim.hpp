#pragma once

// Dense statevector simulator. Qubit 0 is the most significant bit of an
// amplitude index, and bitstrings are written qubit 0 first.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qnlp {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxWidth = 24;

enum class GateKind { H, X, CNOT, CZ, Rx, Rz, CRz, ControlledU };

// Controlled kinds use `control`; `unitary` is row-major and only read for
// ControlledU.
struct Gate {
  GateKind kind = GateKind::H;
  std::size_t target = 0;
  std::size_t control = 0;
  double theta = 0.0;
  std::array<Complex, 4> unitary{};

  static Gate h(std::size_t q);
  static Gate x(std::size_t q);
  static Gate cnot(std::size_t control, std::size_t target);
  static Gate cz(std::size_t control, std::size_t target);
  static Gate rx(std::size_t q, double theta);
  static Gate rz(std::size_t q, double theta);
  static Gate crz(std::size_t control, std::size_t target, double theta);
  static Gate controlled(std::size_t control, std::size_t target, const std::array<Complex, 4>& u);

  bool is_controlled() const;
};

Gate inverse(const Gate& g);
std::string gate_name(GateKind kind);

struct Circuit {
  std::size_t width = 0;
  std::vector<Gate> gates;
  std::vector<std::pair<std::size_t, int>> postselections;
  std::vector<std::size_t> measured;

  // Wires in range and distinct per gate; postselected and measured disjoint.
  void validate() const;
};

// Gates reversed and inverted; postselections and measurements dropped.
Circuit inverse(const Circuit& c);

struct StateVector {
  std::size_t width = 0;
  std::vector<Complex> amplitudes;

  static StateVector basis(const std::string& bits);
  static StateVector zeros(std::size_t width);

  double norm() const;
  Complex amplitude(const std::string& bits) const;
};

std::string bitstring(std::size_t index, std::size_t width);

void apply(StateVector& state, const Gate& g);

// Throws WidthMismatch / WidthExceeded.
StateVector simulate(const Circuit& c, const std::string& initial);
StateVector simulate(const Circuit& c);

// Projects onto the constraints and drops the constrained qubits, without
// renormalizing. Remaining qubits keep their relative order.
StateVector project(const StateVector& s, const std::vector<std::pair<std::size_t, int>>& constraints);

struct Postselected {
  StateVector state;  // renormalized; all zero when zero_probability
  double probability = 0.0;
  bool zero_probability = false;
};

inline constexpr double kZeroProbabilityNorm = 1e-14;

Postselected postselect(const StateVector& s,
                        const std::vector<std::pair<std::size_t, int>>& constraints);

using Histogram = std::map<std::string, std::uint64_t>;

// Multinomial draw from |amplitude|^2 with std::mt19937_64(seed).
Histogram sample(const StateVector& s, std::uint64_t shots, std::uint64_t seed);

std::string circuit_json(const Circuit& c);
std::string histogram_csv(const Histogram& h);

}  // namespace qnlp
