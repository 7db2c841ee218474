/*
 * Copyright 2026 The lfmspec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LFM_SERIES_HPP_
#define LFM_SERIES_HPP_

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lfm/common.hpp"

namespace lfm {

using MultiIndex = std::vector<int>;

inline int total_degree(std::span<const int> alpha) {
  int k = 0;
  for (int a : alpha) k += a;
  return k;
}

/// ||z^alpha||^2 in H^2(B_N): (N-1)! alpha! / (N-1+|alpha|)!.
inline double monomial_norm_sq(std::span<const int> alpha, int n) {
  const int k = total_degree(alpha);
  if (n - 1 + k <= 20) {
    auto fact = [](int m) {
      std::uint64_t f = 1;
      for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
      return f;
    };
    std::uint64_t num = fact(n - 1);
    for (int a : alpha) num *= fact(a);
    return static_cast<double>(num) / static_cast<double>(fact(n - 1 + k));
  }
  double lg = std::lgamma(static_cast<double>(n)) - std::lgamma(static_cast<double>(n + k));
  for (int a : alpha) lg += std::lgamma(a + 1.0);
  return std::exp(lg);
}

/**
 * Multi-indices of total degree <= D in graded lexicographic order (degree
 * ascending, then the first variable descending). Indices are packed in
 * base D+1, so the code of a product is the sum of the codes.
 */
class MonomialBasis {
 public:
  MonomialBasis(int n, int degree) : n_(n), degree_(degree) {
    if (n < 1 || degree < 0) throw Error(ErrorCode::InvalidArgument, "basis needs N >= 1 and D >= 0");
    std::vector<int> alpha(n, 0);
    for (int k = 0; k <= degree; ++k) {
      offsets_.push_back(size());
      fill(alpha, 0, k);
    }
    offsets_.push_back(size());

    std::uint64_t span = 1;
    bool flat = true;
    for (int j = 0; j < n; ++j) {
      span *= static_cast<std::uint64_t>(degree + 1);
      if (span > 4'000'000) flat = false;
    }
    flat_ = flat;
    if (flat_) lookup_flat_.assign(span, -1);
    parent_.assign(size(), -1);
    parent_var_.assign(size(), -1);
    norm_sq_.resize(size());
    for (std::size_t i = 0; i < size(); ++i) {
      const auto code = codes_[i];
      if (flat_) {
        lookup_flat_[code] = static_cast<std::int64_t>(i);
      } else {
        lookup_hash_.emplace(code, static_cast<std::int64_t>(i));
      }
    }
    for (std::size_t i = 0; i < size(); ++i) {
      const auto a = exponent(i);
      norm_sq_[i] = monomial_norm_sq(a, n_);
      for (int j = 0; j < n_; ++j) {
        if (a[j] > 0) {
          parent_[i] = find(codes_[i] - place(j));
          parent_var_[i] = j;
          break;
        }
      }
    }
  }

  int dim() const { return n_; }
  int degree() const { return degree_; }
  std::size_t size() const { return degrees_.size(); }

  std::span<const int> exponent(std::size_t i) const {
    return {exponents_.data() + i * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }
  MultiIndex multi_index(std::size_t i) const {
    auto e = exponent(i);
    return {e.begin(), e.end()};
  }
  int degree_of(std::size_t i) const { return degrees_[i]; }
  std::uint64_t code_of(std::size_t i) const { return codes_[i]; }
  double norm_sq(std::size_t i) const { return norm_sq_[i]; }
  /// First index of total degree k (k may be degree() + 1 for the end).
  std::size_t degree_begin(int k) const { return offsets_[static_cast<std::size_t>(k)]; }
  /// z^alpha = z_{parent_var} * z^{parent}; -1 for the constant.
  std::int64_t parent(std::size_t i) const { return parent_[i]; }
  int parent_var(std::size_t i) const { return parent_var_[i]; }

  std::uint64_t place(int j) const {
    std::uint64_t p = 1;
    for (int t = 0; t < j; ++t) p *= static_cast<std::uint64_t>(degree_ + 1);
    return p;
  }

  std::uint64_t code(std::span<const int> alpha) const {
    std::uint64_t c = 0;
    for (int j = n_ - 1; j >= 0; --j) c = c * static_cast<std::uint64_t>(degree_ + 1) + static_cast<std::uint64_t>(alpha[j]);
    return c;
  }

  /// Index of the multi-index with the given code; -1 if absent.
  std::int64_t find(std::uint64_t code) const {
    if (flat_) return code < lookup_flat_.size() ? lookup_flat_[code] : -1;
    auto it = lookup_hash_.find(code);
    return it == lookup_hash_.end() ? -1 : it->second;
  }

  std::int64_t index_of(std::span<const int> alpha) const {
    if (static_cast<int>(alpha.size()) != n_) throw Error(ErrorCode::DimensionMismatch, "multi-index length");
    for (int a : alpha) {
      if (a < 0) throw Error(ErrorCode::InvalidArgument, "negative exponent");
    }
    if (total_degree(alpha) > degree_) return -1;
    return find(code(alpha));
  }

 private:
  void fill(std::vector<int>& alpha, int j, int remaining) {
    if (j == n_ - 1) {
      alpha[j] = remaining;
      exponents_.insert(exponents_.end(), alpha.begin(), alpha.end());
      degrees_.push_back(total_degree(alpha));
      codes_.push_back(code(alpha));
      return;
    }
    for (int a = remaining; a >= 0; --a) {
      alpha[j] = a;
      fill(alpha, j + 1, remaining - a);
    }
    alpha[j] = 0;
  }

  int n_;
  int degree_;
  bool flat_ = true;
  std::vector<int> exponents_;
  std::vector<int> degrees_;
  std::vector<std::uint64_t> codes_;
  std::vector<std::size_t> offsets_;
  std::vector<std::int64_t> lookup_flat_;
  std::unordered_map<std::uint64_t, std::int64_t> lookup_hash_;
  std::vector<std::int64_t> parent_;
  std::vector<int> parent_var_;
  std::vector<double> norm_sq_;
};

/// Shared, cached basis for (N, D).
inline std::shared_ptr<const MonomialBasis> monomial_basis(int n, int degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, degree}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(n, degree);
  return slot;
}

/// Power series in N variables truncated at total degree D.
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  TruncatedSeries(int n, int degree) : basis_(monomial_basis(n, degree)), c_(basis_->size(), cplx(0.0)) {}

  static TruncatedSeries constant(int n, int degree, cplx v) {
    TruncatedSeries s(n, degree);
    s.c_[0] = v;
    return s;
  }
  static TruncatedSeries variable(int n, int degree, int j, cplx coef = 1.0) {
    TruncatedSeries s(n, degree);
    if (degree >= 1) {
      MultiIndex e(n, 0);
      e[j] = 1;
      s.c_[s.basis_->index_of(e)] = coef;
    }
    return s;
  }
  static TruncatedSeries monomial(int n, int degree, std::span<const int> alpha, cplx coef = 1.0) {
    TruncatedSeries s(n, degree);
    const auto i = s.basis_->index_of(alpha);
    if (i >= 0) s.c_[i] = coef;
    return s;
  }
  /// c_0 + sum_j l_j z_j.
  static TruncatedSeries affine(cplx c0, const Vec& l, int degree) {
    const int n = static_cast<int>(l.size());
    TruncatedSeries s = constant(n, degree, c0);
    for (int j = 0; j < n; ++j) s += variable(n, degree, j, l(j));
    return s;
  }
  /// (1 - z_j)^s via b_{k+1} = b_k (k - s) / (k + 1).
  static TruncatedSeries one_minus_power(int n, int degree, int j, cplx s) {
    TruncatedSeries out(n, degree);
    MultiIndex e(n, 0);
    cplx b = 1.0;
    for (int k = 0; k <= degree; ++k) {
      e[j] = k;
      out.c_[out.basis_->index_of(e)] = b;
      b *= (static_cast<double>(k) - s) / static_cast<double>(k + 1);
    }
    return out;
  }

  int dim() const { return basis_->dim(); }
  int degree() const { return basis_->degree(); }
  std::size_t size() const { return c_.size(); }
  const MonomialBasis& basis() const { return *basis_; }
  const std::shared_ptr<const MonomialBasis>& basis_ptr() const { return basis_; }
  const std::vector<cplx>& coefficients() const { return c_; }
  cplx operator[](std::size_t i) const { return c_[i]; }
  cplx& operator[](std::size_t i) { return c_[i]; }

  cplx coeff(std::span<const int> alpha) const {
    const auto i = basis_->index_of(alpha);
    return i < 0 ? cplx(0.0) : c_[i];
  }
  void set(std::span<const int> alpha, cplx v) {
    const auto i = basis_->index_of(alpha);
    if (i < 0) throw Error(ErrorCode::InvalidArgument, "multi-index above the truncation degree");
    c_[i] = v;
  }
  cplx constant_term() const { return c_[0]; }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  TruncatedSeries& operator*=(cplx a) {
    for (auto& x : c_) x *= a;
    return *this;
  }
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, cplx s) { return a *= s; }
  friend TruncatedSeries operator*(cplx s, TruncatedSeries a) { return a *= s; }

  /// Product truncated at degree D; loops run over nonzero coefficients only.
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.check(b);
    TruncatedSeries out(a.dim(), a.degree());
    const auto& basis = *a.basis_;
    const int d = basis.degree();
    const auto bnz = b.nonzeros();
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      const cplx ai = a.c_[i];
      if (ai == cplx(0.0)) continue;
      const int room = d - basis.degree_of(i);
      const auto ci = basis.code_of(i);
      for (std::size_t j : bnz) {
        if (basis.degree_of(j) > room) break;
        out.c_[basis.find(ci + basis.code_of(j))] += ai * b.c_[j];
      }
    }
    return out;
  }
  TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }

  /// Indices of nonzero coefficients, ascending (hence by degree).
  std::vector<std::size_t> nonzeros() const {
    std::vector<std::size_t> nz;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] != cplx(0.0)) nz.push_back(i);
    }
    return nz;
  }

  cplx evaluate(const Vec& z) const {
    if (z.size() != dim()) throw Error(ErrorCode::DimensionMismatch, "point dimension");
    const auto& basis = *basis_;
    std::vector<cplx> mono(c_.size());
    mono[0] = 1.0;
    cplx sum = c_[0];
    for (std::size_t i = 1; i < c_.size(); ++i) {
      mono[i] = mono[static_cast<std::size_t>(basis.parent(i))] * z(basis.parent_var(i));
      sum += c_[i] * mono[i];
    }
    return sum;
  }

  /// Same coefficients at another truncation degree (dropping or zero-padding).
  TruncatedSeries truncated(int degree) const {
    TruncatedSeries out(dim(), degree);
    const auto& src = *basis_;
    const std::size_t count = std::min(src.degree_begin(std::min(degree, src.degree()) + 1), out.size());
    // grlex prefixes agree across truncation degrees
    for (std::size_t i = 0; i < count; ++i) out.c_[i] = c_[i];
    return out;
  }

  /// ||f_k||^2 for each homogeneous part, k = 0..D.
  std::vector<double> homogeneous_norms_sq() const {
    std::vector<double> out(static_cast<std::size_t>(degree()) + 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) out[basis_->degree_of(i)] += std::norm(c_[i]) * basis_->norm_sq(i);
    return out;
  }

  double h2_norm_sq() const {
    double s = 0.0;
    for (double v : homogeneous_norms_sq()) s += v;
    return s;
  }

 private:
  void check(const TruncatedSeries& o) const {
    if (o.dim() != dim() || o.degree() != degree()) {
      throw Error(ErrorCode::DimensionMismatch, "series dimension or degree differ");
    }
  }

  std::shared_ptr<const MonomialBasis> basis_;
  std::vector<cplx> c_;
};

/// 1/s through the degree recursion r_0 = 1/s_0, r_k = -(1/s_0) sum_{j>=1} s_j r_{k-j}.
inline TruncatedSeries reciprocal(const TruncatedSeries& s) {
  const cplx s0 = s.constant_term();
  if (std::abs(s0) == 0.0) throw Error(ErrorCode::ZeroConstantTerm, "reciprocal needs a nonzero constant term");
  const auto& basis = s.basis();
  const int d = basis.degree();
  TruncatedSeries r(s.dim(), d);
  r[0] = 1.0 / s0;
  std::vector<std::size_t> snz;
  for (std::size_t i : s.nonzeros()) {
    if (i != 0) snz.push_back(i);
  }
  for (int k = 1; k <= d; ++k) {
    // contributions s_beta r_gamma with |beta| + |gamma| = k, |beta| >= 1
    for (std::size_t bi : snz) {
      const int db = basis.degree_of(bi);
      if (db > k) break;
      const int dg = k - db;
      for (std::size_t gi = basis.degree_begin(dg); gi < basis.degree_begin(dg + 1); ++gi) {
        if (r[gi] == cplx(0.0)) continue;
        r[basis.find(basis.code_of(bi) + basis.code_of(gi))] -= s[bi] * r[gi];
      }
    }
    for (std::size_t i = basis.degree_begin(k); i < basis.degree_begin(k + 1); ++i) r[i] /= s0;
  }
  return r;
}

inline TruncatedSeries power(const TruncatedSeries& s, int m) {
  if (m < 0) return power(reciprocal(s), -m);
  TruncatedSeries result = TruncatedSeries::constant(s.dim(), s.degree(), 1.0);
  TruncatedSeries base = s;
  while (m > 0) {
    if (m & 1) result = result * base;
    m >>= 1;
    if (m > 0) base = base * base;
  }
  return result;
}

/// (1 + u)^s for u(0) = 0, summed as sum_k binom(s, k) u^k.
inline TruncatedSeries binomial_series(const TruncatedSeries& u, cplx s) {
  if (std::abs(u.constant_term()) != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "binomial series needs u(0) = 0");
  }
  TruncatedSeries out = TruncatedSeries::constant(u.dim(), u.degree(), 1.0);
  TruncatedSeries uk = out;
  cplx b = 1.0;
  for (int k = 1; k <= u.degree(); ++k) {
    b *= (s - static_cast<double>(k - 1)) / static_cast<double>(k);
    uk = uk * u;
    out += uk * b;
  }
  return out;
}

}  // namespace lfm

#endif  // LFM_SERIES_HPP_
