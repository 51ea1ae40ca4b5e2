#include "ppimine/la.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ppimine::la {

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine(std::span<const double> a, std::span<const double> b) {
  double na = norm(a);
  double nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

namespace {

// Working state for one-sided Jacobi: columns of g are rotated until mutually
// orthogonal; v accumulates the right-hand rotations.
struct JacobiWork {
  std::size_t m = 0, n = 0;
  std::vector<std::vector<double>> g;  // n columns of length m
  std::vector<std::vector<double>> v;  // n columns of length n
};

JacobiWork make_work(const Matrix& a) {
  JacobiWork w;
  w.m = a.rows();
  w.n = a.cols();
  w.g.assign(w.n, std::vector<double>(w.m));
  for (std::size_t j = 0; j < w.n; ++j)
    for (std::size_t i = 0; i < w.m; ++i) w.g[j][i] = a(i, j);
  w.v.assign(w.n, std::vector<double>(w.n, 0.0));
  for (std::size_t j = 0; j < w.n; ++j) w.v[j][j] = 1.0;
  return w;
}

// Rotate columns p and q so they become orthogonal. Returns the normalized
// off-diagonal magnitude before the rotation.
double rotate_pair(JacobiWork& w, std::size_t p, std::size_t q) {
  auto& gp = w.g[p];
  auto& gq = w.g[q];
  double alpha = dot(gp, gp);
  double beta = dot(gq, gq);
  double gamma = dot(gp, gq);
  if (alpha == 0.0 || beta == 0.0) return 0.0;
  double off = std::abs(gamma) / std::sqrt(alpha * beta);
  if (gamma == 0.0) return 0.0;
  double zeta = (beta - alpha) / (2.0 * gamma);
  double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  double c = 1.0 / std::sqrt(1.0 + t * t);
  double s = c * t;
  for (std::size_t i = 0; i < w.m; ++i) {
    double x = gp[i];
    double y = gq[i];
    gp[i] = c * x - s * y;
    gq[i] = s * x + c * y;
  }
  auto& vp = w.v[p];
  auto& vq = w.v[q];
  for (std::size_t i = 0; i < w.n; ++i) {
    double x = vp[i];
    double y = vq[i];
    vp[i] = c * x - s * y;
    vq[i] = s * x + c * y;
  }
  return off;
}

// Assemble U, sigma, V from converged columns: sort non-increasing, fix signs
// so the largest-magnitude component of each right vector is positive.
Svd finish(JacobiWork& w, int sweeps) {
  std::size_t n = w.n;
  std::vector<double> sig(n);
  for (std::size_t j = 0; j < n; ++j) sig[j] = norm(w.g[j]);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sig[a] > sig[b]; });

  Svd out;
  out.sweeps = sweeps;
  out.u = Matrix(w.m, n);
  out.v = Matrix(n, n);
  out.sigma.resize(n);
  for (std::size_t jj = 0; jj < n; ++jj) {
    std::size_t j = order[jj];
    double s = sig[j];
    out.sigma[jj] = s;
    double flip = 1.0;
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(w.v[j][i]) > std::abs(w.v[j][arg])) arg = i;
    if (w.v[j][arg] < 0.0) flip = -1.0;
    for (std::size_t i = 0; i < n; ++i) out.v(i, jj) = flip * w.v[j][i];
    if (s > 0.0) {
      for (std::size_t i = 0; i < w.m; ++i) out.u(i, jj) = flip * w.g[j][i] / s;
    }
  }
  return out;
}

Svd jacobi_serial(const Matrix& a, const SvdOptions& opts) {
  JacobiWork w = make_work(a);
  int sweeps = 0;
  for (; sweeps < opts.max_sweeps; ++sweeps) {
    double max_off = 0.0;
    for (std::size_t p = 0; p + 1 < w.n; ++p)
      for (std::size_t q = p + 1; q < w.n; ++q)
        max_off = std::max(max_off, rotate_pair(w, p, q));
    if (max_off <= opts.tol) {
      ++sweeps;
      break;
    }
  }
  return finish(w, sweeps);
}

// Block tournament: columns are grouped into a fixed, machine-independent
// number of blocks; each sweep first rotates every within-block pair, then
// plays a round-robin over block pairs. Concurrent tasks touch disjoint
// columns and each task runs its rotations in a fixed order, so the result
// does not depend on the thread count.
Svd jacobi_parallel(const Matrix& a, const SvdOptions& opts) {
  JacobiWork w = make_work(a);
  std::size_t nb = w.n >= 128 ? 16 : w.n >= 32 ? 8 : 2;

  std::vector<std::size_t> bounds(nb + 1);
  for (std::size_t b = 0; b <= nb; ++b) bounds[b] = b * w.n / nb;

  auto block_pair_of = [&](std::size_t r, std::size_t k) {
    std::size_t p, q;
    if (k == 0) {
      p = nb - 1;
      q = r % (nb - 1);
    } else {
      p = (r + k) % (nb - 1);
      q = (r + nb - 1 - k) % (nb - 1);
    }
    if (p > q) std::swap(p, q);
    return std::pair<std::size_t, std::size_t>{p, q};
  };

  int sweeps = 0;
  for (; sweeps < opts.max_sweeps; ++sweeps) {
    double max_off = 0.0;
#ifdef _OPENMP
#pragma omp parallel reduction(max : max_off)
#endif
    {
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
      for (long b = 0; b < static_cast<long>(nb); ++b) {
        for (std::size_t p = bounds[b]; p < bounds[b + 1]; ++p)
          for (std::size_t q = p + 1; q < bounds[b + 1]; ++q)
            max_off = std::max(max_off, rotate_pair(w, p, q));
      }
      for (std::size_t r = 0; r + 1 < nb; ++r) {
        // the barrier at the end of the worksharing loop separates rounds
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (long k = 0; k < static_cast<long>(nb / 2); ++k) {
          auto [ba, bb] = block_pair_of(r, static_cast<std::size_t>(k));
          for (std::size_t p = bounds[ba]; p < bounds[ba + 1]; ++p)
            for (std::size_t q = bounds[bb]; q < bounds[bb + 1]; ++q)
              max_off = std::max(max_off, rotate_pair(w, p, q));
        }
      }
    }
    if (max_off <= opts.tol) {
      ++sweeps;
      break;
    }
  }
  return finish(w, sweeps);
}

Svd svd_dispatch(const Matrix& a, const SvdOptions& opts, bool parallel) {
  if (a.rows() == 0 || a.cols() == 0) return {};
  if (a.rows() >= a.cols()) {
    return parallel ? jacobi_parallel(a, opts) : jacobi_serial(a, opts);
  }
  // Wide matrix: decompose the transpose and swap factors.
  Matrix at = a.transposed();
  Svd s = parallel ? jacobi_parallel(at, opts) : jacobi_serial(at, opts);
  Svd out;
  out.sweeps = s.sweeps;
  out.sigma = std::move(s.sigma);
  out.u = std::move(s.v);
  out.v = std::move(s.u);
  return out;
}

}  // namespace

Svd thin_svd_serial(const Matrix& a, const SvdOptions& opts) {
  return svd_dispatch(a, opts, false);
}

Svd thin_svd_parallel(const Matrix& a, const SvdOptions& opts) {
  return svd_dispatch(a, opts, true);
}

Svd thin_svd(const Matrix& a, const SvdOptions& opts) {
#ifdef _OPENMP
  return svd_dispatch(a, opts, true);
#else
  return svd_dispatch(a, opts, false);
#endif
}

std::size_t numeric_rank(const Svd& svd, std::size_t rows, std::size_t cols) {
  if (svd.sigma.empty()) return 0;
  double cutoff = static_cast<double>(std::max(rows, cols)) *
                  std::numeric_limits<double>::epsilon() * svd.sigma.front();
  std::size_t r = 0;
  while (r < svd.sigma.size() && svd.sigma[r] > cutoff) ++r;
  return r;
}

}  // namespace ppimine::la
