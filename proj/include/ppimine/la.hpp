#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ppimine::la {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

/// Cosine of the angle between a and b; 0 when either norm is zero.
double cosine(std::span<const double> a, std::span<const double> b);

/// a * b  (checked dimensions).
Matrix matmul(const Matrix& a, const Matrix& b);

struct SvdOptions {
  double tol = 1e-13;   // relative off-diagonal threshold for convergence
  int max_sweeps = 64;  // hard stop
};

/// Thin singular value decomposition a = u * diag(sigma) * v^T with
/// r = min(rows, cols) retained columns; sigma non-increasing, >= 0.
struct Svd {
  Matrix u;                   // rows x r
  std::vector<double> sigma;  // r
  Matrix v;                   // cols x r
  int sweeps = 0;             // sweeps until convergence
};

/// One-sided Jacobi, classic cyclic pair order. Reference implementation.
Svd thin_svd_serial(const Matrix& a, const SvdOptions& opts = {});

/// One-sided Jacobi with round-robin pair rounds; rotations within a round act
/// on disjoint column pairs, so the result is independent of thread count.
Svd thin_svd_parallel(const Matrix& a, const SvdOptions& opts = {});

/// Parallel kernel when OpenMP is available, serial otherwise.
Svd thin_svd(const Matrix& a, const SvdOptions& opts = {});

/// Count of singular values above max(rows, cols) * eps * sigma_max.
std::size_t numeric_rank(const Svd& svd, std::size_t rows, std::size_t cols);

}  // namespace ppimine::la
