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

#ifndef LFM_ORACLE_HPP_
#define LFM_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "lfm/map.hpp"
#include "lfm/series.hpp"

namespace lfm {

/// Memoized powers phi^beta of the coordinate series of a map, truncated at degree D.
class SeriesComposer {
 public:
  SeriesComposer(const Map& map, int degree) : n_(map.dim()), degree_(degree) {
    if (map.denominator_margin() <= kDenominatorFloor) {
      throw Error(ErrorCode::DenominatorVanishes, "denominator vanishes on the closed ball");
    }
    Vec conj_c = map.C().conjugate();
    const TruncatedSeries inv_den = reciprocal(TruncatedSeries::affine(map.d(), conj_c, degree));
    for (int j = 0; j < n_; ++j) {
      const Vec row = map.A().row(j).transpose();
      coords_.push_back(TruncatedSeries::affine(map.B()(j), row, degree) * inv_den);
    }
  }

  int dim() const { return n_; }
  int degree() const { return degree_; }
  const TruncatedSeries& coordinate(int j) const { return coords_[static_cast<std::size_t>(j)]; }

  /// phi^beta = phi^{beta - e_j} phi_j, j the first nonzero position.
  const TruncatedSeries& power(const MultiIndex& beta) {
    auto it = memo_.find(beta);
    if (it != memo_.end()) return it->second;
    if (static_cast<int>(beta.size()) != n_) throw Error(ErrorCode::DimensionMismatch, "multi-index length");
    int j = 0;
    while (j < n_ && beta[j] == 0) ++j;
    TruncatedSeries value = TruncatedSeries::constant(n_, degree_, 1.0);
    if (j < n_) {
      MultiIndex prev = beta;
      --prev[j];
      value = power(prev) * coords_[static_cast<std::size_t>(j)];
    }
    return memo_.emplace(beta, std::move(value)).first->second;
  }

  /// (f o phi) truncated at degree D; f may be given to any degree.
  TruncatedSeries compose(const TruncatedSeries& f) {
    if (f.dim() != n_) throw Error(ErrorCode::DimensionMismatch, "series dimension");
    TruncatedSeries out(n_, degree_);
    const auto& basis = f.basis();
    for (std::size_t i : f.nonzeros()) {
      const auto& p = power(basis.multi_index(i));
      const cplx a = f[i];
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += a * p[k];
    }
    return out;
  }

 private:
  int n_;
  int degree_;
  std::vector<TruncatedSeries> coords_;
  std::map<MultiIndex, TruncatedSeries> memo_;
};

inline TruncatedSeries map_power_series(const Map& map, const MultiIndex& beta, int degree) {
  SeriesComposer composer(map, degree);
  return composer.power(beta);
}

// ---------------------------------------------------------------------------
// Compression

inline constexpr std::size_t kDefaultSizeCap = 5000;

/// Matrix of C_phi on polynomials of degree <= D in the orthonormal monomial
/// basis e_alpha = z^alpha / ||z^alpha||, rows and columns in basis order.
struct CompressionMatrix {
  int degree = 0;
  std::shared_ptr<const MonomialBasis> basis;
  Mat matrix;
};

inline std::size_t compression_size(int n, int degree) {
  // C(N + D, N)
  double c = 1.0;
  for (int i = 1; i <= n; ++i) c = c * (degree + i) / i;
  return static_cast<std::size_t>(std::llround(c));
}

inline CompressionMatrix build_compression(const Map& map, int degree, std::size_t size_cap = kDefaultSizeCap) {
  const std::size_t size = compression_size(map.dim(), degree);
  if (size > size_cap) {
    throw Error(ErrorCode::SizeCapExceeded,
                "compression dimension " + std::to_string(size) + " exceeds the cap " + std::to_string(size_cap));
  }
  SeriesComposer composer(map, degree);
  CompressionMatrix out;
  out.degree = degree;
  out.basis = monomial_basis(map.dim(), degree);
  const auto& basis = *out.basis;
  out.matrix = Mat::Zero(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  std::vector<double> norms(size);
  for (std::size_t i = 0; i < size; ++i) norms[i] = std::sqrt(basis.norm_sq(i));
  for (std::size_t b = 0; b < size; ++b) {
    const auto& col = composer.power(basis.multi_index(b));
    for (std::size_t a = 0; a < size; ++a) {
      out.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = col[a] * norms[a] / norms[b];
    }
  }
  return out;
}

/// Eigenvalues sorted by decreasing modulus, then by argument.
inline std::vector<cplx> sorted_eigenvalues(const Mat& m) {
  Eigen::ComplexEigenSolver<Mat> solver(m, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::EigenSolverFailure, "eigen-solver did not converge");
  std::vector<cplx> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](cplx x, cplx y) {
    if (std::abs(x) != std::abs(y)) return std::abs(x) > std::abs(y);
    return std::arg(x) < std::arg(y);
  });
  return ev;
}

inline std::vector<cplx> compression_spectrum(const Map& map, int degree, std::size_t size_cap = kDefaultSizeCap) {
  return sorted_eigenvalues(build_compression(map, degree, size_cap).matrix);
}

// ---------------------------------------------------------------------------
// Eigenfunction residuals

/**
 * ||F o phi - lambda F|| / ||F|| in the H^2 norm truncated at degree D. F may
 * be supplied to a higher degree: when phi(0) != 0 every term of F feeds the
 * low-degree coefficients of F o phi, so the comparison uses the degree <= D
 * projections of both sides.
 */
inline double eigenfunction_residual(SeriesComposer& composer, const TruncatedSeries& f, cplx lambda) {
  const int d = composer.degree();
  const TruncatedSeries low = f.truncated(d);
  const double norm = std::sqrt(low.h2_norm_sq());
  if (norm == 0.0) throw Error(ErrorCode::ZeroFunction, "F vanishes through the truncation degree");
  TruncatedSeries diff = composer.compose(f);
  diff -= low * lambda;
  return std::sqrt(diff.h2_norm_sq()) / norm;
}

inline double eigenfunction_residual(const Map& map, const TruncatedSeries& f, cplx lambda, int degree) {
  SeriesComposer composer(map, degree);
  return eigenfunction_residual(composer, f, lambda);
}

// ---------------------------------------------------------------------------
// Weighted Hardy and holomorphic Sobolev norms

/// sum_k ||f_k||^2 (k+1)^{2 nu}
inline double weighted_norm_sq(const TruncatedSeries& f, double nu) {
  const auto parts = f.homogeneous_norms_sq();
  double s = 0.0;
  for (std::size_t k = 0; k < parts.size(); ++k) s += parts[k] * std::pow(k + 1.0, 2.0 * nu);
  return s;
}

/// Gamma(c+1) k! / Gamma(c+k+2); equal to 1 at c = -1, the Hardy-space end point.
inline double sobolev_radial_factor(int k, double c) {
  if (c == -1.0) return 1.0;
  return std::exp(std::lgamma(c + 1.0) + std::lgamma(k + 1.0) - std::lgamma(c + k + 2.0));
}

inline void check_sobolev_parameters(int s, double c) {
  if (s < 0) throw Error(ErrorCode::ParameterConstraintViolated, "s must be a nonnegative integer");
  if (c < -1.0) throw Error(ErrorCode::ParameterConstraintViolated, "c must be >= -1");
}

/// ||R^s f||^2_{A^2_c} + |f(0)|^2 with R^s f = sum_{k>=1} k^s f_k.
inline double sobolev_norm_sq(const TruncatedSeries& f, int s, double c) {
  check_sobolev_parameters(s, c);
  const auto parts = f.homogeneous_norms_sq();
  double total = std::norm(f.constant_term());
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const int kk = static_cast<int>(k);
    total += std::pow(static_cast<double>(kk), 2.0 * s) * parts[k] * sobolev_radial_factor(kk, c);
  }
  return total;
}

/// c = 2s - 2 nu - 1, with the constraints s >= nu and c >= -1.
inline double sobolev_c_for(double nu, int s) {
  if (s < nu) throw Error(ErrorCode::ParameterConstraintViolated, "s must be >= nu");
  const double c = 2.0 * s - 2.0 * nu - 1.0;
  check_sobolev_parameters(s, c);
  return c;
}

struct NormEquivalence {
  double nu = 0.0;
  int s = 0;
  double c = 0.0;
  int max_degree = 0;
  std::vector<double> term_ratio;  // weighted / sobolev weight of degree k, k = 0..max_degree
  double lower = 0.0;
  double upper = 0.0;
  double asymptote = 0.0;  // limit of the degree-k ratio, 1 / Gamma(c+1)
};

/// Interval containing weighted_norm_sq / sobolev_norm_sq for every nonzero
/// polynomial of degree <= max_degree.
inline NormEquivalence norm_equivalence(double nu, int s, int max_degree) {
  NormEquivalence eq;
  eq.nu = nu;
  eq.s = s;
  eq.c = sobolev_c_for(nu, s);
  eq.max_degree = max_degree;
  eq.term_ratio.push_back(1.0);
  for (int k = 1; k <= max_degree; ++k) {
    const double w = std::pow(k + 1.0, 2.0 * nu);
    const double sob = std::pow(static_cast<double>(k), 2.0 * s) * sobolev_radial_factor(k, eq.c);
    eq.term_ratio.push_back(w / sob);
  }
  eq.lower = *std::min_element(eq.term_ratio.begin(), eq.term_ratio.end());
  eq.upper = *std::max_element(eq.term_ratio.begin(), eq.term_ratio.end());
  eq.asymptote = eq.c == -1.0 ? 1.0 : std::exp(-std::lgamma(eq.c + 1.0));
  return eq;
}

}  // namespace lfm

#endif  // LFM_ORACLE_HPP_
