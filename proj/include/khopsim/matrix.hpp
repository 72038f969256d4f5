#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace khopsim {

/// Row-major dense matrix of doubles. Deliberately minimal: the GCN needs
/// products, transposed products and elementwise maps, nothing else.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  DenseMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) {
      throw std::invalid_argument("DenseMatrix: negative dimension");
    }
    data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
                 fill);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double at(int i, int j) const { return data_[index(i, j)]; }
  double& at(int i, int j) { return data_[index(i, j)]; }

  double* row(int i) { return data_.data() + static_cast<std::size_t>(i) * cols_; }
  const double* row(int i) const {
    return data_.data() + static_cast<std::size_t>(i) * cols_;
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(j);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

namespace detail {

inline void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace detail

/// C = A * B. Fixed i-k-j loop order; the reduction order is part of the
/// determinism contract.
inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  detail::require(a.cols() == b.rows(), "multiply: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = b.row(k);
      for (int j = 0; j < b.cols(); ++j) {
        crow[j] += aik * brow[j];
      }
    }
  }
  return c;
}

/// C = A^T * B.
inline DenseMatrix multiply_transpose_left(const DenseMatrix& a,
                                           const DenseMatrix& b) {
  detail::require(a.rows() == b.rows(),
                  "multiply_transpose_left: row counts differ");
  DenseMatrix c(a.cols(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    const double* arow = a.row(i);
    const double* brow = b.row(i);
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      double* crow = c.row(k);
      for (int j = 0; j < b.cols(); ++j) {
        crow[j] += aik * brow[j];
      }
    }
  }
  return c;
}

/// C = A * B^T.
inline DenseMatrix multiply_transpose_right(const DenseMatrix& a,
                                            const DenseMatrix& b) {
  detail::require(a.cols() == b.cols(),
                  "multiply_transpose_right: column counts differ");
  DenseMatrix c(a.rows(), b.rows());
  for (int i = 0; i < a.rows(); ++i) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (int j = 0; j < b.rows(); ++j) {
      const double* brow = b.row(j);
      double sum = 0.0;
      for (int k = 0; k < a.cols(); ++k) {
        sum += arow[k] * brow[k];
      }
      crow[j] = sum;
    }
  }
  return c;
}

inline DenseMatrix relu(const DenseMatrix& a) {
  DenseMatrix out = a;
  for (double& x : out.data()) {
    if (x < 0.0) x = 0.0;
  }
  return out;
}

}  // namespace khopsim
