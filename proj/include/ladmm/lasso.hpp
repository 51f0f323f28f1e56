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

#ifndef LADMM_LASSO_HPP_
#define LADMM_LASSO_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "ladmm/linalg.hpp"
#include "ladmm/problem.hpp"

namespace ladmm::lasso {

/// min 1/2 |x - b|^2 + iota |y|_1  subject to  x = A y,  A in R^{m x n}.
struct LassoInstance {
  DenseMatrix A;
  Vector b;
  double iota = 0.0;
  std::uint64_t seed = 0;

  std::size_t m() const noexcept { return A.rows(); }
  std::size_t n() const noexcept { return A.cols(); }

  bool operator==(const LassoInstance&) const = default;
};

/// iota = 0.1 |A^T b|_inf
inline double default_iota(const DenseMatrix& A, const Vector& b) {
  return 0.1 * norm_inf(A.apply_transpose(b));
}

/// Random instance: a planted 1/n-sparse normal x0, a standard normal A, and
/// b = A x0 + sqrt(0.001) * noise. Draw order is x0, A (row-major), noise.
inline LassoInstance generate_instance(std::size_t m, std::size_t n, std::uint64_t seed) {
  detail::require(m >= 1 && n >= 1, "generate_instance: m and n must be >= 1");
  Rng64 rng(seed);
  const Vector x0 = sparse_gauss_vector(rng, n, 1.0 / static_cast<double>(n));
  DenseMatrix A = gauss_matrix(rng, m, n);
  Vector b = A.apply(x0);
  axpy(std::sqrt(0.001), gauss_vector(rng, m), b);
  const double iota = default_iota(A, b);
  return {std::move(A), std::move(b), iota, seed};
}

/// Componentwise sign(z) max(|z| - t, 0).
inline Vector soft_threshold(const Vector& z, double t) {
  detail::require(t >= 0.0, "soft_threshold: threshold must be nonnegative");
  Vector out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double mag = std::abs(z[i]) - t;
    out[i] = mag > 0.0 ? std::copysign(mag, z[i]) : 0.0;
  }
  return out;
}

/// x = (b + lambda + beta A y) / (1 + beta)
inline Vector lasso_x_update(const LassoInstance& inst, const Vector& y, const Vector& lam,
                             double beta) {
  detail::require(beta > 0.0, "lasso_x_update: beta must be positive");
  Vector x = inst.b;
  axpy(1.0, lam, x);
  axpy(beta, inst.A.apply(y), x);
  return (1.0 / (1.0 + beta)) * std::move(x);
}

inline double lasso_objective(const LassoInstance& inst, const Vector& x, const Vector& y) {
  detail::require(x.size() == inst.m() && y.size() == inst.n(), "lasso_objective: dimension mismatch");
  return 0.5 * squared_norm(x - inst.b) + inst.iota * norm1(y);
}

/// General form: A_gen = I_m, B_gen = -A, b_gen = 0, so |B_gen^T B_gen| = |A^T A|.
inline SeparableProblem to_separable(const LassoInstance& inst) {
  auto shared = std::make_shared<const LassoInstance>(inst);
  SeparableProblem p{DenseMatrix::identity(inst.m()),
                     inst.A.scaled(-1.0),
                     Vector(inst.m()),
                     [shared](const Vector& y, const Vector& lam, double beta) {
                       return lasso_x_update(*shared, y, lam, beta);
                     },
                     [iota = inst.iota](const Vector& z, double c) {
                       return soft_threshold(z, iota / c);
                     },
                     [shared](const Vector& x) { return 0.5 * squared_norm(x - shared->b); },
                     [iota = inst.iota](const Vector& y) { return iota * norm1(y); },
                     gram_norm_estimate(inst.A)};
  return p;
}

struct KktWitnesses {
  Vector f_witness;  // grad f(x) = x - b
  Vector g_witness;  // element of iota d|y|_1 nearest to B_gen^T lambda
  double violation;  // |g_witness - B_gen^T lambda|_inf
};

/// Subgradient witnesses at w. With B_gen = -A the y-stationarity condition
/// reads 0 in iota d|y|_1 + A^T lambda, so the g-witness is the projection of
/// -A^T lambda onto iota d|y|_1: a clamp to [-iota, iota] off the support of
/// y and iota sign(y_i) on it. Entries with |y_i| <= zero_tol count as off
/// the support; relaxed iterates keep geometrically decaying residue there.
inline KktWitnesses lasso_kkt_witnesses(const LassoInstance& inst, const Iterate& w,
                                        double zero_tol = 0.0) {
  detail::require(w.x.size() == inst.m() && w.y.size() == inst.n() && w.lambda.size() == inst.m(),
                  "lasso_kkt_witnesses: dimension mismatch");
  detail::require(zero_tol >= 0.0, "lasso_kkt_witnesses: zero_tol must be nonnegative");
  const double iota = inst.iota;
  const Vector target = -1.0 * inst.A.apply_transpose(w.lambda);
  Vector g(inst.n());
  double violation = 0.0;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    g[i] = std::abs(w.y[i]) <= zero_tol ? std::clamp(target[i], -iota, iota) : std::copysign(iota, w.y[i]);
    violation = std::max(violation, std::abs(g[i] - target[i]));
  }
  return {w.x - inst.b, std::move(g), violation};
}

// ---------------------------------------------------------------------------
// ADMM-LASSO-V1 text format

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kFormatTag = "ADMM-LASSO-V1";

namespace io_detail {

inline void append_double(std::string& out, double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(len));
}

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  std::string_view line() {
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input");
    const auto end = text_.find('\n', pos_);
    const auto stop = end == std::string_view::npos ? text_.size() : end;
    std::string_view out = text_.substr(pos_, stop - pos_);
    pos_ = stop == text_.size() ? stop : stop + 1;
    ++line_no_;
    if (!out.empty() && out.back() == '\r') out.remove_suffix(1);
    return out;
  }

  int line_no() const noexcept { return line_no_; }
  bool at_end() const noexcept { return text_.find_first_not_of(" \t\r\n", pos_) == std::string_view::npos; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
};

template <typename T>
std::vector<T> parse_fields(std::string_view line, int line_no) {
  std::vector<T> out;
  const char* p = line.data();
  const char* const end = line.data() + line.size();
  while (true) {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    if (p == end) break;
    T value{};
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t'))
      throw ParseError("line " + std::to_string(line_no) + ": malformed number");
    out.push_back(value);
    p = next;
  }
  return out;
}

}  // namespace io_detail

/// Serializes with 17 significant digits; parse_instance inverts it exactly.
inline std::string format_instance(const LassoInstance& inst) {
  std::string out;
  out.reserve(inst.m() * inst.n() * 24 + 64);
  out.append(kFormatTag).push_back('\n');
  out.append(std::to_string(inst.m())).push_back(' ');
  out.append(std::to_string(inst.n())).push_back(' ');
  out.append(std::to_string(inst.seed)).push_back(' ');
  io_detail::append_double(out, inst.iota);
  out.push_back('\n');
  for (std::size_t i = 0; i < inst.m(); ++i) {
    const auto row = inst.A.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out.push_back(' ');
      io_detail::append_double(out, row[j]);
    }
    out.push_back('\n');
  }
  for (std::size_t i = 0; i < inst.m(); ++i) {
    if (i) out.push_back(' ');
    io_detail::append_double(out, inst.b[i]);
  }
  out.push_back('\n');
  return out;
}

inline LassoInstance parse_instance(std::string_view text) {
  io_detail::Tokenizer tok(text);
  if (tok.line() != kFormatTag) throw ParseError("line 1: expected " + std::string(kFormatTag));

  const std::string_view header = tok.line();
  std::vector<std::string_view> fields;
  for (std::size_t pos = 0; pos <= header.size();) {
    const auto stop = std::min(header.find(' ', pos), header.size());
    if (stop > pos) fields.push_back(header.substr(pos, stop - pos));
    pos = stop + 1;
  }
  if (fields.size() != 4) throw ParseError("line 2: expected 'm n seed iota'");
  std::vector<std::uint64_t> dims;
  for (int i = 0; i < 3; ++i) {
    const auto v = io_detail::parse_fields<std::uint64_t>(fields[i], 2);
    if (v.size() != 1) throw ParseError("line 2: malformed integer");
    dims.push_back(v[0]);
  }
  const auto iota = io_detail::parse_fields<double>(fields[3], 2);
  if (iota.size() != 1 || dims[0] == 0 || dims[1] == 0)
    throw ParseError("line 2: expected 'm n seed iota' with positive m, n");
  const std::size_t m = dims[0], n = dims[1];

  std::vector<double> a;
  a.reserve(std::min<std::size_t>(m * n, text.size()));
  for (std::size_t i = 0; i < m; ++i) {
    const std::string_view text_row = tok.line();
    const auto row = io_detail::parse_fields<double>(text_row, tok.line_no());
    if (row.size() != n)
      throw ParseError("line " + std::to_string(tok.line_no()) + ": expected " + std::to_string(n) + " values");
    a.insert(a.end(), row.begin(), row.end());
  }
  const std::string_view b_row = tok.line();
  auto b = io_detail::parse_fields<double>(b_row, tok.line_no());
  if (b.size() != m) throw ParseError("line " + std::to_string(tok.line_no()) + ": expected " + std::to_string(m) + " values for b");
  if (!tok.at_end()) throw ParseError("trailing content after b");
  try {
    return {DenseMatrix(m, n, std::move(a)), Vector(std::move(b)), iota[0], dims[2]};
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace ladmm::lasso

#endif  // LADMM_LASSO_HPP_
