#pragma once

// Dense contraction of word tensors along a reduction diagram, and the
// classical-vs-quantum storage estimate for a tensor of word spaces.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qnlp/pregroup.hpp"

namespace qnlp {

// Row-major; shape has one entry per simple type of the word.
template <class T>
struct WordTensorT {
  std::string word;
  std::vector<std::size_t> shape;
  std::vector<T> data;
};

template <class T>
struct TensorT {
  std::vector<std::size_t> shape;  // empty for a scalar
  std::vector<T> data;
};

using WordTensor = WordTensorT<double>;
using Tensor = TensorT<double>;
using ComplexWordTensor = WordTensorT<std::complex<double>>;
using ComplexTensor = TensorT<std::complex<double>>;

// Flat row vector of length dim^2 with ones at i*dim + i.
std::vector<double> cap(std::size_t dim);

enum class ContractionMode { Pairwise, Reference };

// Largest total dimension accepted by the reference mode.
inline constexpr std::size_t kReferenceDimLimit = std::size_t{1} << 10;

// Caps on every diagram link, identity on the residue. Output shape is the
// residue's dimensions. Throws DimensionMismatch when a word's tensor does not
// fit its type or when linked dimensions differ.
Tensor csc_meaning(const std::vector<WordTensor>& words, const ReductionDiagram& diagram,
                   ContractionMode mode = ContractionMode::Pairwise);
ComplexTensor csc_meaning(const std::vector<ComplexWordTensor>& words,
                          const ReductionDiagram& diagram,
                          ContractionMode mode = ContractionMode::Pairwise);

struct StorageEstimate {
  // Empty when the bit count does not fit in 64 bits.
  std::optional<std::uint64_t> classical_bits;
  double classical_bits_approx = 0.0;
  std::uint64_t qubits = 0;
  bool overflow = false;
};

// One bit per amplitude cell: bits = basis_dim^wire_count * instances,
// qubits = ceil(log2(bits)).
StorageEstimate storage_estimate(std::uint64_t basis_dim, std::uint64_t wire_count,
                                 std::uint64_t instances);

// "8e9", "3.2e10", "8" (plain integers below a million).
std::string format_bits(const StorageEstimate& estimate);

}  // namespace qnlp
