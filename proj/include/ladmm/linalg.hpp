// Copyright 2026 The ladmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LADMM_LINALG_HPP_
#define LADMM_LINALG_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ladmm {

/// Raised when an argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require(bool cond, const char* what) {
  if (!cond) throw InvalidArgument(what);
}

inline bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace detail

/// Dense vector of finite doubles.
///
/// Every constructor rejects NaN/Inf. Element access is unchecked and may
/// write non-finite values; the solver never does.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : data_(n, fill) {
    detail::require(std::isfinite(fill), "Vector: non-finite fill value");
  }
  explicit Vector(std::vector<double> data) : data_(std::move(data)) {
    detail::require(detail::all_finite(data_), "Vector: non-finite entry");
  }
  Vector(std::initializer_list<double> xs) : Vector(std::vector<double>(xs)) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> data_;
};

/// Row-major dense matrix of finite doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    detail::require(rows > 0 && cols > 0, "DenseMatrix: dimensions must be positive");
    detail::require(std::isfinite(fill), "DenseMatrix: non-finite fill value");
  }

  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
      : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    detail::require(rows > 0 && cols > 0, "DenseMatrix: dimensions must be positive");
    detail::require(data_.size() == rows * cols, "DenseMatrix: entry count != rows*cols");
    detail::require(detail::all_finite(data_), "DenseMatrix: non-finite entry");
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
  }

  static DenseMatrix diagonal(std::span<const double> d) {
    DenseMatrix out(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) out(i, i) = d[i];
    detail::require(detail::all_finite(d), "DenseMatrix: non-finite entry");
    return out;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> values() const noexcept { return data_; }

  /// y = M x
  Vector apply(const Vector& x) const {
    detail::require(x.size() == cols_, "DenseMatrix::apply: dimension mismatch");
    Vector y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      const double* r = data_.data() + i * cols_;
      double acc = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) acc += r[j] * x[j];
      y[i] = acc;
    }
    return y;
  }

  /// y = M^T x
  Vector apply_transpose(const Vector& x) const {
    detail::require(x.size() == rows_, "DenseMatrix::apply_transpose: dimension mismatch");
    Vector y(cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      const double* r = data_.data() + i * cols_;
      const double xi = x[i];
      if (xi == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) y[j] += r[j] * xi;
    }
    return y;
  }

  DenseMatrix transposed() const {
    DenseMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  DenseMatrix scaled(double c) const {
    DenseMatrix out = *this;
    for (auto& v : out.data_) v *= c;
    return out;
  }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  detail::require(a.cols() == b.rows(), "matrix product: inner dimension mismatch");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline bool is_zero(const DenseMatrix& m) {
  const auto v = m.values();
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

// ---------------------------------------------------------------------------
// Vector kernels

inline void check_same_size(const Vector& a, const Vector& b) {
  detail::require(a.size() == b.size(), "vector size mismatch");
}

inline double dot(const Vector& a, const Vector& b) {
  check_same_size(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double squared_norm(const Vector& a) {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return acc;
}

inline double norm(const Vector& a) { return std::sqrt(squared_norm(a)); }

inline double norm_inf(const Vector& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline double norm1(const Vector& a) {
  double acc = 0.0;
  for (double v : a) acc += std::abs(v);
  return acc;
}

/// y += alpha * x
inline void axpy(double alpha, const Vector& x, Vector& y) {
  check_same_size(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline Vector operator+(Vector a, const Vector& b) {
  axpy(1.0, b, a);
  return a;
}

inline Vector operator-(Vector a, const Vector& b) {
  axpy(-1.0, b, a);
  return a;
}

inline Vector operator*(double c, Vector a) {
  for (double& v : a) v *= c;
  return a;
}

inline double distance(const Vector& a, const Vector& b) { return norm(a - b); }

inline Vector concat(const Vector& a, const Vector& b) {
  std::vector<double> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return Vector(std::move(out));
}

// ---------------------------------------------------------------------------
// Spectral norm of the Gram operator

/// Power iteration failed to reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_estimate, double last_relative_change)
      : std::runtime_error(what),
        last_estimate_(last_estimate),
        last_relative_change_(last_relative_change) {}

  double last_estimate() const noexcept { return last_estimate_; }
  double last_relative_change() const noexcept { return last_relative_change_; }

 private:
  double last_estimate_;
  double last_relative_change_;
};

/// Largest eigenvalue of B^T B (the squared spectral norm of B).
///
/// Power iteration on v -> B^T (B v) from the normalized all-ones vector.
/// Stops when two successive Rayleigh quotients differ by at most
/// tol * estimate. If the start vector lies in the null space of B the
/// iteration restarts from the first canonical basis vector that does not.
inline double spectral_norm_gram(const DenseMatrix& b, double tol = 1e-10, int max_iter = 1000) {
  detail::require(tol > 0.0, "spectral_norm_gram: tol must be positive");
  detail::require(max_iter >= 1, "spectral_norm_gram: max_iter must be >= 1");
  if (is_zero(b)) throw InvalidArgument("spectral_norm_gram: zero operator");

  const std::size_t n = b.cols();
  Vector v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  Vector bv = b.apply(v);
  for (std::size_t j = 0; squared_norm(bv) == 0.0 && j < n; ++j) {
    v = Vector(n);
    v[j] = 1.0;
    bv = b.apply(v);
  }

  double estimate = squared_norm(bv);
  double change = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    Vector w = b.apply_transpose(bv);
    const double wn = norm(w);
    if (wn == 0.0) return estimate;
    v = (1.0 / wn) * std::move(w);
    bv = b.apply(v);
    const double next = squared_norm(bv);
    change = std::abs(next - estimate) / next;
    estimate = next;
    if (change <= tol) return estimate;
  }
  throw ConvergenceError("spectral_norm_gram: power iteration did not converge", estimate, change);
}

/// spectral_norm_gram at its default settings, except that an iteration
/// which stalls with a last relative change below 1e-6 yields its estimate
/// instead of throwing. Slowly separating top eigenvalues of large random
/// Gram matrices can need more than 1000 steps to reach 1e-10.
inline double gram_norm_estimate(const DenseMatrix& b) {
  try {
    return spectral_norm_gram(b);
  } catch (const ConvergenceError& e) {
    if (e.last_relative_change() <= 1e-6) return e.last_estimate();
    throw;
  }
}

// ---------------------------------------------------------------------------
// Seeded sampling

/// 64-bit seedable generator. Streams are reproducible for a fixed seed
/// within one build; no cross-platform bit equality is promised.
class Rng64 {
 public:
  explicit Rng64(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1) from the top 53 bits.
  double uniform_open() {
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * kScale;
  }

  /// Standard normal via the Box-Muller transform. Samples are produced in
  /// pairs; the second of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline Vector gauss_vector(Rng64& rng, std::size_t len) {
  detail::require(len >= 1, "gauss_vector: len must be >= 1");
  Vector out(len);
  for (auto& v : out) v = rng.normal();
  return out;
}

/// Bernoulli(density)-thinned standard normal vector. One uniform draw is
/// consumed per entry for the support; a normal is drawn only for kept
/// entries.
inline Vector sparse_gauss_vector(Rng64& rng, std::size_t len, double density) {
  detail::require(len >= 1, "sparse_gauss_vector: len must be >= 1");
  detail::require(density > 0.0 && density <= 1.0, "sparse_gauss_vector: density must lie in (0, 1]");
  Vector out(len);
  for (auto& v : out) {
    if (rng.uniform_open() < density) v = rng.normal();
  }
  return out;
}

inline DenseMatrix gauss_matrix(Rng64& rng, std::size_t rows, std::size_t cols) {
  std::vector<double> data(rows * cols);
  for (auto& v : data) v = rng.normal();
  return DenseMatrix(rows, cols, std::move(data));
}

}  // namespace ladmm

#endif  // LADMM_LINALG_HPP_
