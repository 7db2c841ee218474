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

#ifndef LFM_MAP_HPP_
#define LFM_MAP_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "lfm/common.hpp"

namespace lfm {

/**
 * A linear fractional map phi(z) = (A z + B) / (<z, C> + d) of C^N.
 *
 * The four blocks are stored projectively normalized: d is real and
 * non-negative and the associated (N+1)x(N+1) matrix [[A, B], [C^*, d]] has
 * unit Frobenius norm. Two maps are equal iff their stored blocks agree.
 */
class LinearFractionalMap {
 public:
  LinearFractionalMap(Mat a, Vec b, Vec c, cplx d) {
    const auto n = a.rows();
    if (n < 1 || a.cols() != n || b.size() != n || c.size() != n) {
      throw Error(ErrorCode::DimensionMismatch, "A must be NxN and B, C length N");
    }
    Mat m(n + 1, n + 1);
    m.topLeftCorner(n, n) = a;
    m.topRightCorner(n, 1) = b;
    m.bottomLeftCorner(1, n) = c.adjoint();
    m(n, n) = d;
    assign(m);
  }

  /// Builds the map represented (projectively) by an associated matrix.
  static LinearFractionalMap from_matrix(const Mat& m) {
    if (m.rows() < 2 || m.rows() != m.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "associated matrix must be square of order >= 2");
    }
    LinearFractionalMap out;
    out.assign(m);
    return out;
  }

  static LinearFractionalMap identity(int n) {
    return LinearFractionalMap(Mat::Identity(n, n), Vec::Zero(n), Vec::Zero(n), 1.0);
  }

  static LinearFractionalMap linear(const Mat& a) {
    const auto n = a.rows();
    return LinearFractionalMap(a, Vec::Zero(n), Vec::Zero(n), 1.0);
  }

  int dim() const { return static_cast<int>(a_.rows()); }
  const Mat& A() const { return a_; }
  const Vec& B() const { return b_; }
  const Vec& C() const { return c_; }
  cplx d() const { return d_; }

  /// [[A, B], [C^*, d]]
  Mat matrix() const {
    const int n = dim();
    Mat m(n + 1, n + 1);
    m.topLeftCorner(n, n) = a_;
    m.topRightCorner(n, 1) = b_;
    m.bottomLeftCorner(1, n) = c_.adjoint();
    m(n, n) = d_;
    return m;
  }

  /// Value of the denominator <z, C> + d.
  cplx denominator(const Vec& z) const { return inner(z, c_) + d_; }

  /// Minimum of |<z, C> + d| over the closed unit ball.
  double denominator_margin() const { return std::abs(d_) - c_.norm(); }

 private:
  LinearFractionalMap() = default;

  void assign(Mat m) {
    const auto n = m.rows() - 1;
    const cplx corner = m(n, n);
    if (std::abs(corner) > 0.0) {
      m *= std::conj(corner) / std::abs(corner);
      m(n, n) = std::abs(m(n, n));
    }
    const double fro = m.norm();
    if (!(fro > 0.0) || !std::isfinite(fro)) {
      throw Error(ErrorCode::InvalidArgument, "associated matrix must be finite and nonzero");
    }
    m /= fro;
    a_ = m.topLeftCorner(n, n);
    b_ = m.topRightCorner(n, 1);
    c_ = m.bottomLeftCorner(1, n).adjoint();
    d_ = m(n, n);
  }

  Mat a_;
  Vec b_;
  Vec c_;
  cplx d_{};
};

using Map = LinearFractionalMap;

inline constexpr double kDenominatorFloor = 1e-13;

/// (A z + B) / (<z, C> + d)
inline Vec evaluate(const Map& map, const Vec& z) {
  if (z.size() != map.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "point dimension differs from map dimension");
  }
  const cplx den = map.denominator(z);
  if (std::abs(den) < kDenominatorFloor) {
    throw Error(ErrorCode::DenominatorVanishes, "denominator <z,C>+d vanishes at the given point");
  }
  return (map.A() * z + map.B()) / den;
}

/// Holomorphic Jacobian by the quotient rule: A / v - u C^* / v^2.
inline Mat jacobian(const Map& map, const Vec& z) {
  if (z.size() != map.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "point dimension differs from map dimension");
  }
  const cplx v = map.denominator(z);
  if (std::abs(v) < kDenominatorFloor) {
    throw Error(ErrorCode::DenominatorVanishes, "denominator <z,C>+d vanishes at the given point");
  }
  const Vec u = map.A() * z + map.B();
  return map.A() / v - (u * map.C().adjoint()) / (v * v);
}

/// f o g, through the product of associated matrices.
inline Map compose(const Map& f, const Map& g) {
  if (f.dim() != g.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "cannot compose maps of different dimension");
  }
  return Map::from_matrix(f.matrix() * g.matrix());
}

/// g^{-1} o f o g
inline Map conjugate(const Map& f, const Map& g) {
  const Mat gm = g.matrix();
  return Map::from_matrix(gm.inverse() * f.matrix() * gm);
}

inline Map inverse(const Map& f) { return Map::from_matrix(f.matrix().inverse()); }

/// Max distance between the normalized blocks of two maps of equal dimension.
inline double map_distance(const Map& f, const Map& g) {
  if (f.dim() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "maps differ in dimension");
  return (f.matrix() - g.matrix()).cwiseAbs().maxCoeff();
}

/// Distance of m_f from the line spanned by m_g, relative to |m_f|.
inline double projective_residual(const Mat& f, const Mat& g) {
  const cplx scale = g.cwiseProduct(f.conjugate()).sum() / f.squaredNorm();
  return (g - scale * f).norm() / g.norm();
}

// ---------------------------------------------------------------------------
// Self-map validation

struct ValidationReport {
  bool ok = false;
  double max_modulus = 0.0;   // sup of |phi| over the sampled sphere
  Vec witness;                // argmax point (or a zero of the denominator)
  bool denominator_ok = false;
  double denominator_margin = 0.0;
  std::size_t samples = 0;
  double tolerance = 0.0;
};

struct ValidationOptions {
  std::size_t samples = 0;    // 0 selects the default 10^4 * max(1, N - 2)
  int refine_candidates = 12;
  int refine_iterations = 200;
  std::uint64_t seed = 0x5eed1fULL;
  double tolerance = 1e-9;
};

namespace detail {

inline double modulus_sq_at(const Map& map, const Vec& z) {
  return evaluate(map, z).squaredNorm();
}

// Projected gradient ascent of |phi|^2 on the unit sphere.
inline Vec ascend_on_sphere(const Map& map, Vec z, int iterations) {
  double f = modulus_sq_at(map, z);
  double step = 0.25;
  for (int it = 0; it < iterations && step > 1e-14; ++it) {
    const Vec w = evaluate(map, z);
    Vec g = 2.0 * jacobian(map, z).adjoint() * w;
    g -= std::real(z.dot(g)) * z;
    const double gn = g.norm();
    if (gn < 1e-15) break;
    bool improved = false;
    while (step > 1e-14) {
      Vec trial = z + (step / gn) * g;
      trial.normalize();
      const double ft = modulus_sq_at(map, trial);
      if (ft > f) {
        z = trial;
        f = ft;
        step *= 1.5;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return z;
}

}  // namespace detail

/// Checks numerically that phi maps the unit ball into itself.
inline ValidationReport validate_self_map(const Map& map, const ValidationOptions& opts = {}) {
  const int n = map.dim();
  ValidationReport report;
  report.tolerance = opts.tolerance;
  report.denominator_margin = map.denominator_margin();
  report.denominator_ok = report.denominator_margin > kDenominatorFloor;
  if (!report.denominator_ok) {
    // zero of <z, C> + d inside the closed ball
    const Vec c = map.C();
    report.witness = -map.d() * c / c.squaredNorm();
    report.max_modulus = std::numeric_limits<double>::infinity();
    return report;
  }

  const std::size_t count =
      opts.samples > 0 ? opts.samples : 10000 * static_cast<std::size_t>(std::max(1, n - 2));
  std::vector<Vec> points;
  points.reserve(count + 4 * n);
  if (n == 1) {
    for (std::size_t k = 0; k < count; ++k) {
      const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(count);
      Vec z(1);
      z(0) = std::polar(1.0, t);
      points.push_back(z);
    }
  } else {
    for (int j = 0; j < n; ++j) {
      for (cplx unit : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
        Vec z = Vec::Zero(n);
        z(j) = unit;
        points.push_back(z);
      }
    }
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss;
    for (std::size_t k = 0; k < count; ++k) {
      Vec z(n);
      for (int j = 0; j < n; ++j) z(j) = cplx(gauss(rng), gauss(rng));
      z.normalize();
      points.push_back(z);
    }
  }

  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    ranked.emplace_back(detail::modulus_sq_at(map, points[k]), k);
  }
  const auto keep = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(opts.refine_candidates));
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                    [](const auto& x, const auto& y) { return x.first > y.first; });

  double best = ranked.front().first;
  Vec witness = points[ranked.front().second];
  for (std::size_t k = 0; k < keep; ++k) {
    const Vec z = detail::ascend_on_sphere(map, points[ranked[k].second], opts.refine_iterations);
    const double f = detail::modulus_sq_at(map, z);
    if (f > best) {
      best = f;
      witness = z;
    }
  }
  // Prefer the earliest sample attaining the maximum so ties resolve deterministically.
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (detail::modulus_sq_at(map, points[k]) >= best * (1.0 - 1e-12)) {
      witness = points[k];
      break;
    }
  }
  report.samples = points.size();
  report.max_modulus = std::sqrt(best);
  report.witness = witness;
  report.ok = report.max_modulus <= 1.0 + opts.tolerance;
  return report;
}

// ---------------------------------------------------------------------------
// Automorphisms

/// True iff m^* J m = lambda J with lambda > 0, J = diag(I_N, -1).
inline bool is_automorphism(const Map& map, double tol = 1e-9) {
  const int n = map.dim();
  const Mat m = map.matrix();
  Eigen::VectorXd diag = Eigen::VectorXd::Ones(n + 1);
  diag(n) = -1.0;
  const Mat j = diag.cast<cplx>().asDiagonal();
  const Mat k = m.adjoint() * j * m;
  const double lambda = (k.diagonal().real().cwiseProduct(diag)).sum() / static_cast<double>(n + 1);
  if (!(lambda > 0.0)) return false;
  return (k - lambda * j).norm() <= tol * k.norm();
}

/// The involutive automorphism exchanging a and 0.
inline Map ball_automorphism_to_origin(const Vec& a) {
  const int n = static_cast<int>(a.size());
  const double r2 = a.squaredNorm();
  if (!(r2 < 1.0)) {
    throw Error(ErrorCode::PointNotInterior, "automorphism center must satisfy |a| < 1");
  }
  Mat proj = Mat::Zero(n, n);
  if (r2 > 0.0) proj = a * a.adjoint() / r2;
  const double s = std::sqrt(1.0 - r2);
  const Mat amat = -(proj + s * (Mat::Identity(n, n) - proj));
  return Map(amat, a, -a, 1.0);
}

/// Unitary U with U e_1 = v / |v| (a phase-corrected Householder reflection).
inline Mat unitary_with_first_column(const Vec& v) {
  const auto n = v.size();
  const double nv = v.norm();
  if (!(nv > 0.0)) return Mat::Identity(n, n);
  const cplx v0 = v(0);
  const cplx phase = std::abs(v0) > 0.0 ? v0 / std::abs(v0) : cplx(1.0, 0.0);
  const cplx beta = -phase * nv;
  Vec u = v;
  u(0) -= beta;
  Mat h = Mat::Identity(n, n);
  const double un = u.squaredNorm();
  if (un > 1e-300) h -= 2.0 * u * u.adjoint() / un;
  // h v = beta e_1, so h (phase' e_1) is v / |v| with phase' = beta / |beta|
  Mat out = h;
  out.col(0) *= beta / std::abs(beta);
  return out;
}

inline Map unitary_map(const Mat& u) { return Map::linear(u); }

// ---------------------------------------------------------------------------
// Fixed points

enum class FixedPointKind { Interior, Boundary, Exterior };

inline std::string_view to_string(FixedPointKind k) {
  switch (k) {
    case FixedPointKind::Interior: return "interior";
    case FixedPointKind::Boundary: return "boundary";
    case FixedPointKind::Exterior: return "exterior";
  }
  return "unknown";
}

struct FixedPoint {
  Vec location;
  FixedPointKind kind = FixedPointKind::Exterior;
  std::optional<double> dilation;  // <d phi_tau(tau), tau> at boundary points
  cplx eigenvalue{};               // eigenvalue of the associated matrix
};

struct FixedPointSet {
  std::vector<FixedPoint> points;
  std::vector<Vec> at_infinity;    // eigen-directions with vanishing last coordinate
  bool fixed_slice = false;        // a positive-dimensional slice through the ball is fixed
  int slice_dimension = 0;
  std::vector<std::string> warnings;

  std::vector<FixedPoint> of_kind(FixedPointKind k) const {
    std::vector<FixedPoint> out;
    for (const auto& p : points) {
      if (p.kind == k) out.push_back(p);
    }
    return out;
  }
  std::vector<FixedPoint> interior() const { return of_kind(FixedPointKind::Interior); }
  std::vector<FixedPoint> boundary() const { return of_kind(FixedPointKind::Boundary); }
};

/// Real part of <d phi_tau (tau), tau>.
inline double boundary_dilation(const Map& map, const Vec& tau) {
  return std::real(inner(jacobian(map, tau) * tau, tau));
}

struct FixedPointOptions {
  double boundary_tol = 1e-8;
  double cluster_tol = 1e-6;   // relative spacing under which eigenvalues are grouped
  double rank_tol = 1e-9;      // relative singular-value threshold for eigenspaces
  double infinity_tol = 1e-10;
};

namespace detail {

inline FixedPointKind kind_of(const Vec& z, double tol) {
  const double r = z.norm();
  if (std::abs(1.0 - r) < tol) return FixedPointKind::Boundary;
  return r < 1.0 ? FixedPointKind::Interior : FixedPointKind::Exterior;
}

// Right null space of m - lambda I (columns), by SVD with relative threshold.
inline Mat eigenspace(const Mat& m, cplx lambda, double rank_tol, bool force_one) {
  const auto n = m.rows();
  const Mat shifted = m - lambda * Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(shifted, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, m.norm());
  Eigen::Index nullity = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= rank_tol * scale) ++nullity;
  }
  if (nullity == 0 && force_one) nullity = 1;
  return svd.matrixV().rightCols(nullity);
}

}  // namespace detail

/**
 * Fixed points of phi in the projective closure via the eigenvectors of the
 * associated matrix. Eigenvalues closer than cluster_tol are grouped and their
 * common eigenspace is recovered by SVD, so Jordan blocks (parabolic maps)
 * produce a single point. A fixed eigenspace of dimension >= 2 whose affine
 * part crosses the open ball is reported as a fixed slice, represented by its
 * point closest to the origin.
 */
inline FixedPointSet fixed_points(const Map& map, const FixedPointOptions& opts = {}) {
  const int n = map.dim();
  const Mat m = map.matrix();
  Eigen::ComplexEigenSolver<Mat> solver(m, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::DegenerateEigenproblem, "eigen-solver did not converge on the associated matrix");
  }
  std::vector<cplx> eig(solver.eigenvalues().data(), solver.eigenvalues().data() + n + 1);

  // Group eigenvalues by proximity (single linkage).
  std::vector<int> group(eig.size(), -1);
  int groups = 0;
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (group[i] >= 0) continue;
    group[i] = groups;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const auto k = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < eig.size(); ++j) {
        if (group[j] >= 0) continue;
        const double scale = std::max({1.0, std::abs(eig[k]), std::abs(eig[j])});
        if (std::abs(eig[k] - eig[j]) <= opts.cluster_tol * scale) {
          group[j] = groups;
          stack.push_back(j);
        }
      }
    }
    ++groups;
  }

  struct Space {
    cplx lambda;
    Mat basis;
  };
  std::vector<Space> spaces;
  for (int g = 0; g < groups; ++g) {
    std::vector<cplx> members;
    for (std::size_t i = 0; i < eig.size(); ++i) {
      if (group[i] == g) members.push_back(eig[i]);
    }
    cplx mean = 0.0;
    for (auto v : members) mean += v;
    mean /= static_cast<double>(members.size());
    if (members.size() == 1) {
      spaces.push_back({mean, detail::eigenspace(m, mean, opts.rank_tol, true)});
      continue;
    }
    Mat basis = detail::eigenspace(m, mean, opts.rank_tol, false);
    if (basis.cols() > 0) {
      spaces.push_back({mean, basis});
    } else {
      // close but distinct eigenvalues
      for (auto v : members) spaces.push_back({v, detail::eigenspace(m, v, opts.rank_tol, true)});
    }
  }

  FixedPointSet out;
  for (const auto& sp : spaces) {
    const Mat& v = sp.basis;
    const Eigen::RowVectorXcd last = v.row(n);
    if (last.norm() <= opts.infinity_tol) {
      for (Eigen::Index c = 0; c < v.cols(); ++c) out.at_infinity.push_back(v.col(c).head(n));
      continue;
    }
    FixedPoint fp;
    fp.eigenvalue = sp.lambda;
    if (v.cols() == 1) {
      fp.location = v.col(0).head(n) / v(n, 0);
    } else {
      // Affine set {V c : last(V c) = 1}; its point of least norm and its dimension.
      const Mat top = v.topRows(n);
      const Eigen::VectorXcd c0 = last.adjoint() / last.squaredNorm();
      const Vec z0 = top * c0;
      Eigen::JacobiSVD<Mat> lsvd(last, Eigen::ComputeFullV);
      const Mat null_last = lsvd.matrixV().rightCols(v.cols() - 1);
      const Mat dirs = top * null_last;
      Eigen::JacobiSVD<Mat> dsvd(dirs, Eigen::ComputeThinU);
      const auto& ds = dsvd.singularValues();
      Eigen::Index rank = 0;
      for (Eigen::Index i = 0; i < ds.size(); ++i) {
        if (ds(i) > opts.rank_tol * std::max(1.0, dirs.norm())) ++rank;
      }
      Vec z = z0;
      if (rank > 0) {
        const Mat q = dsvd.matrixU().leftCols(rank);
        z -= q * (q.adjoint() * z0);
      }
      fp.location = z;
      if (rank > 0 && z.norm() < 1.0 - opts.boundary_tol) {
        out.fixed_slice = true;
        out.slice_dimension = std::max<int>(out.slice_dimension, static_cast<int>(rank));
      }
    }
    fp.kind = detail::kind_of(fp.location, opts.boundary_tol);
    if (fp.kind == FixedPointKind::Boundary) {
      fp.dilation = boundary_dilation(map, fp.location);
    }
    out.points.push_back(std::move(fp));
  }
  // interior first, then boundary (by dilation), then exterior
  std::stable_sort(out.points.begin(), out.points.end(), [](const FixedPoint& x, const FixedPoint& y) {
    if (x.kind != y.kind) return static_cast<int>(x.kind) < static_cast<int>(y.kind);
    if (x.dilation && y.dilation) return *x.dilation < *y.dilation;
    return false;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Denjoy-Wolff point

struct DenjoyWolffPoint {
  FixedPoint point;
  double alpha = 0.0;            // <d phi_tau(tau), tau>
  double radial_estimate = 0.0;  // (1 - |phi(r tau)|) / (1 - r), r = 1 - radial_step
  std::vector<FixedPoint> ties;  // other boundary points with dilation ~ 1
  std::vector<std::string> warnings;
};

/// Radial difference quotient (1 - |phi(r tau)|) / (1 - r).
inline double radial_dilation(const Map& map, const Vec& tau, double one_minus_r) {
  const double r = 1.0 - one_minus_r;
  const Vec w = evaluate(map, r * tau);
  const double m2 = w.squaredNorm();
  // 1 - |w| = (1 - |w|^2) / (1 + |w|), evaluated without forming |w| first
  return ((1.0 - m2) / (1.0 + std::sqrt(m2))) / one_minus_r;
}

inline DenjoyWolffPoint denjoy_wolff(const Map& map, const Tolerances& tol = default_tolerances(),
                                     const FixedPointSet* known = nullptr) {
  FixedPointSet computed;
  if (known == nullptr) {
    FixedPointOptions fo;
    fo.boundary_tol = tol.boundary;
    computed = fixed_points(map, fo);
    known = &computed;
  }
  if (!known->interior().empty()) {
    throw Error(ErrorCode::HasInteriorFixedPoint, "map has an interior fixed point; use fixed_points");
  }
  std::vector<FixedPoint> qualifying;
  for (const auto& p : known->boundary()) {
    if (p.dilation && *p.dilation <= 1.0 + tol.dilation) qualifying.push_back(p);
  }
  if (qualifying.empty()) {
    throw Error(ErrorCode::NoQualifyingBoundaryPoint, "no boundary fixed point with dilation <= 1");
  }
  DenjoyWolffPoint out;
  out.point = qualifying.front();
  out.alpha = *out.point.dilation;
  if (qualifying.size() > 1) {
    for (std::size_t k = 1; k < qualifying.size(); ++k) out.ties.push_back(qualifying[k]);
    out.warnings.push_back("several boundary fixed points have dilation <= 1 (near-parabolic degeneracy); "
                           "reporting the smallest dilation first");
  }
  constexpr double kRadialStep = 1e-6;
  out.radial_estimate = radial_dilation(map, out.point.location, kRadialStep);
  if (std::abs(out.radial_estimate - out.alpha) > tol.radial_agreement) {
    throw Error(ErrorCode::NoQualifyingBoundaryPoint,
                "angular derivative disagrees with the radial difference quotient");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Siegel half-plane

/// sigma_C(z, w) = ((1 + z) / (1 - z), w / (1 - z)) as an associated matrix.
inline Mat cayley_matrix(int n) {
  Mat s = Mat::Identity(n + 1, n + 1);
  s(0, n) = 1.0;
  s(n, 0) = -1.0;
  return s;
}

/// sigma_C^{-1}(z, w) = ((z - 1) / (z + 1), 2 w / (z + 1)).
inline Mat cayley_inverse_matrix(int n) {
  Mat s = 2.0 * Mat::Identity(n + 1, n + 1);
  s(0, 0) = 1.0;
  s(n, n) = 1.0;
  s(0, n) = -1.0;
  s(n, 0) = 1.0;
  return s;
}

inline Mat block_unitary(const Mat& u) {
  const auto n = u.rows();
  Mat out = Mat::Identity(n + 1, n + 1);
  out.topLeftCorner(n, n) = u;
  return out;
}

/**
 * psi(z, w) = (1/alpha) (z + <w, b> + c, A w + d) on the Siegel half-plane
 * H_N = {Re z > |w|^2}, with b, d in C^{N-1} and A of order N-1.
 */
struct HalfPlaneMap {
  double alpha = 1.0;
  cplx c{};
  Vec b;
  Vec d;
  Mat A;

  int dim() const { return static_cast<int>(b.size()) + 1; }

  /// Affine matrix [[1, b^*, c], [0, A, d], [0, 0, alpha]] / alpha.
  Mat matrix() const {
    const int n = dim();
    Mat m = Mat::Zero(n + 1, n + 1);
    m(0, 0) = 1.0;
    if (n > 1) {
      m.block(0, 1, 1, n - 1) = b.adjoint();
      m.block(1, 1, n - 1, n - 1) = A;
      m.block(1, n, n - 1, 1) = d;
    }
    m(0, n) = c;
    m(n, n) = alpha;
    return m / alpha;
  }

  Vec evaluate(const Vec& zw) const {
    const int n = dim();
    Vec out(n);
    const Vec w = zw.tail(n - 1);
    out(0) = (zw(0) + inner(w, b) + c) / alpha;
    if (n > 1) out.tail(n - 1) = (A * w + d) / alpha;
    return out;
  }

  /// alpha Re c - |d|^2 (non-negative for valid forms).
  double translation_margin() const { return alpha * c.real() - d.squaredNorm(); }

  double block_norm() const {
    if (A.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Mat>(A).singularValues()(0);
  }

  static HalfPlaneMap from_matrix(const Mat& raw) {
    const auto n = static_cast<int>(raw.rows()) - 1;
    const Mat m = raw / raw(n, n);
    HalfPlaneMap h;
    h.alpha = 1.0 / m(0, 0).real();
    h.c = h.alpha * m(0, n);
    if (n > 1) {
      h.b = (h.alpha * m.block(0, 1, 1, n - 1)).adjoint();
      h.A = h.alpha * m.block(1, 1, n - 1, n - 1);
      h.d = h.alpha * m.block(1, n, n - 1, 1);
    } else {
      h.b = Vec::Zero(0);
      h.d = Vec::Zero(0);
      h.A = Mat::Zero(0, 0);
    }
    return h;
  }
};

/// Cayley transform and its inverse evaluated pointwise.
inline Vec cayley(const Vec& zw) {
  Vec out = zw / (1.0 - zw(0));
  out(0) = (1.0 + zw(0)) / (1.0 - zw(0));
  return out;
}

inline Vec cayley_inverse(const Vec& zw) {
  Vec out = 2.0 * zw / (zw(0) + 1.0);
  out(0) = (zw(0) - 1.0) / (zw(0) + 1.0);
  return out;
}

struct HalfPlaneConjugation {
  HalfPlaneMap psi;
  Mat rotation;              // unitary U with U e_1 = tau
  double structure_residual = 0.0;
  /// Ball map equal to sigma_C^{-1} o h o sigma_C, rotated back by U.
  Map pull_back(const HalfPlaneMap& h) const {
    const int n = h.dim();
    const Mat uext = block_unitary(rotation);
    return Map::from_matrix(uext * cayley_inverse_matrix(n) * h.matrix() * cayley_matrix(n) * uext.adjoint());
  }
};

/// Conjugates phi by a rotation taking tau to e_1 and the Cayley transform.
inline HalfPlaneConjugation conjugate_to_halfplane(const Map& map, const Vec& tau,
                                                   const Tolerances& tol = default_tolerances()) {
  const int n = map.dim();
  if (tau.size() != n) throw Error(ErrorCode::DimensionMismatch, "tau has the wrong dimension");
  if ((evaluate(map, tau) - tau).norm() > 1e-7) {
    throw Error(ErrorCode::NotDenjoyWolff, "tau is not fixed by the map");
  }
  const double dil = boundary_dilation(map, tau);
  if (dil > 1.0 + tol.dilation) {
    throw Error(ErrorCode::NotDenjoyWolff, "dilation at tau exceeds 1");
  }
  HalfPlaneConjugation out;
  out.rotation = unitary_with_first_column(tau);
  const Mat uext = block_unitary(out.rotation);
  Mat m = cayley_matrix(n) * uext.adjoint() * map.matrix() * uext * cayley_inverse_matrix(n);
  m /= m(n, n);
  double resid = m.row(n).head(n).norm();
  if (n > 1) resid += m.block(1, 0, n - 1, 1).norm();
  out.structure_residual = resid / m.norm();
  if (out.structure_residual > 1e-7) {
    throw Error(ErrorCode::NotDenjoyWolff, "conjugate is not of half-plane affine form");
  }
  out.psi = HalfPlaneMap::from_matrix(m);
  if (out.psi.translation_margin() < -1e-8 || out.psi.block_norm() > std::sqrt(out.psi.alpha) + 1e-8) {
    throw Error(ErrorCode::NotDenjoyWolff, "half-plane form violates alpha Re c >= |d|^2 or |A| <= sqrt(alpha)");
  }
  return out;
}

}  // namespace lfm

#endif  // LFM_MAP_HPP_
