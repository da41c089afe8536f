#include "qnlp/meaning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "qnlp/error.hpp"

namespace qnlp {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

template <class T>
void check_words(const std::vector<WordTensorT<T>>& words, const ReductionDiagram& diagram) {
  if (words.size() != diagram.words.size()) {
    throw Error(ErrorCode::DimensionMismatch, "word count differs from the diagram");
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& w = words[i];
    if (w.shape.size() != diagram.words[i].type.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "tensor for '" + w.word + "' has the wrong number of indices");
    }
    if (w.data.size() != product(w.shape)) {
      throw Error(ErrorCode::DimensionMismatch, "tensor for '" + w.word + "' has wrong size");
    }
  }
  std::vector<std::size_t> dims;
  for (const auto& w : words) dims.insert(dims.end(), w.shape.begin(), w.shape.end());
  for (const auto& link : diagram.links) {
    if (dims.at(link.left) != dims.at(link.right)) {
      throw Error(ErrorCode::DimensionMismatch, "linked wires have different dimensions");
    }
  }
}

template <class T>
struct Open {
  std::vector<std::size_t> shape;
  std::vector<std::size_t> wires;  // flattened simple index per axis
  std::vector<T> data{T(1)};
};

template <class T>
void append_word(Open<T>& cur, const WordTensorT<T>& w, std::size_t first_wire) {
  std::vector<T> next(cur.data.size() * w.data.size());
  for (std::size_t i = 0; i < cur.data.size(); ++i) {
    for (std::size_t j = 0; j < w.data.size(); ++j) next[i * w.data.size() + j] = cur.data[i] * w.data[j];
  }
  cur.data = std::move(next);
  for (std::size_t k = 0; k < w.shape.size(); ++k) {
    cur.shape.push_back(w.shape[k]);
    cur.wires.push_back(first_wire + k);
  }
}

// Sums the diagonal of axes p < q and removes both.
template <class T>
void trace_axes(Open<T>& cur, std::size_t p, std::size_t q) {
  const auto& shape = cur.shape;
  const std::size_t rank = shape.size();
  std::vector<std::size_t> stride(rank, 1);
  for (std::size_t k = rank; k-- > 1;) stride[k - 1] = stride[k] * shape[k];

  std::vector<std::size_t> out_shape;
  std::vector<std::size_t> out_wires;
  for (std::size_t k = 0; k < rank; ++k) {
    if (k == p || k == q) continue;
    out_shape.push_back(shape[k]);
    out_wires.push_back(cur.wires[k]);
  }
  std::vector<T> out(product(out_shape), T(0));

  std::vector<std::size_t> idx(rank, 0);
  for (std::size_t flat = 0; flat < cur.data.size(); ++flat) {
    if (idx[p] == idx[q]) {
      std::size_t o = 0;
      for (std::size_t k = 0; k < rank; ++k) {
        if (k == p || k == q) continue;
        o = o * shape[k] + idx[k];
      }
      out[o] += cur.data[flat];
    }
    for (std::size_t k = rank; k-- > 0;) {
      if (++idx[k] < shape[k]) break;
      idx[k] = 0;
    }
  }
  cur.shape = std::move(out_shape);
  cur.wires = std::move(out_wires);
  cur.data = std::move(out);
}

template <class T>
TensorT<T> pairwise(const std::vector<WordTensorT<T>>& words, const ReductionDiagram& diagram) {
  const auto offsets = diagram.word_offsets();
  Open<T> cur;
  for (std::size_t i = 0; i < words.size(); ++i) {
    append_word(cur, words[i], offsets[i]);
    for (const auto& link : diagram.links) {
      if (link.right < offsets[i] || link.right >= offsets[i + 1]) continue;
      const auto p = std::find(cur.wires.begin(), cur.wires.end(), link.left) - cur.wires.begin();
      const auto q = std::find(cur.wires.begin(), cur.wires.end(), link.right) - cur.wires.begin();
      trace_axes(cur, static_cast<std::size_t>(p), static_cast<std::size_t>(q));
    }
  }
  return {cur.shape, cur.data};
}

template <class T>
TensorT<T> reference(const std::vector<WordTensorT<T>>& words, const ReductionDiagram& diagram) {
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

  std::vector<std::size_t> dims;
  for (const auto& w : words) dims.insert(dims.end(), w.shape.begin(), w.shape.end());
  if (product(dims) > kReferenceDimLimit) {
    throw Error(ErrorCode::InvalidInput, "reference contraction limited to total dimension 1024");
  }

  // Full tensor product as a column vector.
  Vec state = Vec::Ones(1);
  for (const auto& w : words) {
    Vec next(state.size() * static_cast<Eigen::Index>(w.data.size()));
    for (Eigen::Index i = 0; i < state.size(); ++i) {
      for (std::size_t j = 0; j < w.data.size(); ++j) {
        next(i * static_cast<Eigen::Index>(w.data.size()) + static_cast<Eigen::Index>(j)) =
            state(i) * w.data[j];
      }
    }
    state = std::move(next);
  }

  std::vector<std::size_t> wires(dims.size());
  std::iota(wires.begin(), wires.end(), 0);
  for (const auto& link : diagram.links) {
    const auto p = static_cast<std::size_t>(
        std::find(wires.begin(), wires.end(), link.left) - wires.begin());
    const auto q = static_cast<std::size_t>(
        std::find(wires.begin(), wires.end(), link.right) - wires.begin());
    if (q != p + 1) throw Error(ErrorCode::InvalidInput, "link endpoints are not adjacent");

    std::size_t left = 1;
    std::size_t right = 1;
    for (std::size_t k = 0; k < p; ++k) left *= dims[wires[k]];
    for (std::size_t k = q + 1; k < wires.size(); ++k) right *= dims[wires[k]];
    const std::size_t d = dims[wires[p]];

    // kron(I_left, cap_d, I_right)
    const auto c = cap(d);
    Mat cap_row(1, static_cast<Eigen::Index>(d * d));
    for (std::size_t k = 0; k < d * d; ++k) cap_row(0, static_cast<Eigen::Index>(k)) = T(c[k]);
    const auto L = static_cast<Eigen::Index>(left);
    const auto R = static_cast<Eigen::Index>(right);
    const auto D2 = static_cast<Eigen::Index>(d * d);
    Mat op = Mat::Zero(L * R, L * D2 * R);
    for (Eigen::Index a = 0; a < L; ++a) {
      for (Eigen::Index k = 0; k < D2; ++k) {
        for (Eigen::Index b = 0; b < R; ++b) {
          op(a * R + b, (a * D2 + k) * R + b) = cap_row(0, k);
        }
      }
    }
    state = op * state;
    wires.erase(wires.begin() + static_cast<std::ptrdiff_t>(q));
    wires.erase(wires.begin() + static_cast<std::ptrdiff_t>(p));
  }

  TensorT<T> out;
  for (auto w : wires) out.shape.push_back(dims[w]);
  out.data.assign(state.data(), state.data() + state.size());
  return out;
}

template <class T>
TensorT<T> contract(const std::vector<WordTensorT<T>>& words, const ReductionDiagram& diagram,
                    ContractionMode mode) {
  check_words(words, diagram);
  return mode == ContractionMode::Pairwise ? pairwise(words, diagram) : reference(words, diagram);
}

}  // namespace

std::vector<double> cap(std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidInput, "cap dimension must be positive");
  std::vector<double> out(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) out[i * dim + i] = 1.0;
  return out;
}

Tensor csc_meaning(const std::vector<WordTensor>& words, const ReductionDiagram& diagram,
                   ContractionMode mode) {
  return contract(words, diagram, mode);
}

ComplexTensor csc_meaning(const std::vector<ComplexWordTensor>& words,
                          const ReductionDiagram& diagram, ContractionMode mode) {
  return contract(words, diagram, mode);
}

StorageEstimate storage_estimate(std::uint64_t basis_dim, std::uint64_t wire_count,
                                 std::uint64_t instances) {
  if (basis_dim == 0 || wire_count == 0 || instances == 0) {
    throw Error(ErrorCode::InvalidInput, "storage_estimate arguments must be at least 1");
  }
  StorageEstimate est;
  const long double log2_cells = static_cast<long double>(wire_count) * std::log2l(basis_dim) +
                                 std::log2l(instances);
  est.classical_bits_approx = static_cast<double>(std::exp2l(log2_cells));

  std::uint64_t cells = instances;
  bool exact = true;
  for (std::uint64_t k = 0; k < wire_count && exact; ++k) {
    exact = !__builtin_mul_overflow(cells, basis_dim, &cells);
  }

  if (exact) {
    std::uint64_t q = 0;
    while (q < 64 && (std::uint64_t{1} << q) < cells) ++q;
    est.qubits = q;
    est.classical_bits = cells;
    est.classical_bits_approx = static_cast<double>(cells);
  } else {
    est.qubits = static_cast<std::uint64_t>(std::ceil(log2_cells - 1e-12L));
  }
  est.overflow = !est.classical_bits.has_value();
  return est;
}

std::string format_bits(const StorageEstimate& estimate) {
  if (estimate.classical_bits && *estimate.classical_bits < 1000000) {
    return std::to_string(*estimate.classical_bits);
  }
  const double v = estimate.classical_bits_approx;
  int exponent = static_cast<int>(std::floor(std::log10(v)));
  double mantissa = v / std::pow(10.0, exponent);
  if (mantissa >= 9.9999999995) {
    mantissa /= 10.0;
    ++exponent;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", mantissa);
  std::string m(buf);
  if (m.find('.') != std::string::npos) {
    m.erase(m.find_last_not_of('0') + 1);
    if (m.back() == '.') m.pop_back();
  }
  return m + "e" + std::to_string(exponent);
}

}  // namespace qnlp
