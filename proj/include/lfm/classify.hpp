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

#ifndef LFM_CLASSIFY_HPP_
#define LFM_CLASSIFY_HPP_

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lfm/map.hpp"

namespace lfm {

enum class MapKind {
  EllipticAutomorphism,
  EllipticUnitaryPart,    // p > 0
  EllipticInteriorOnly,   // p = 0, no boundary fixed point
  EllipticBoundaryFixed,  // p = 0, one boundary fixed point
  Parabolic,
  HyperbolicOneFixed,
  HyperbolicTwoFixed,
  OtherAutomorphism,      // non-elliptic automorphism
};

inline std::string_view to_string(MapKind k) {
  switch (k) {
    case MapKind::EllipticAutomorphism: return "EllipticAutomorphism";
    case MapKind::EllipticUnitaryPart: return "EllipticUnitaryPart";
    case MapKind::EllipticInteriorOnly: return "EllipticInteriorOnly";
    case MapKind::EllipticBoundaryFixed: return "EllipticBoundaryFixed";
    case MapKind::Parabolic: return "Parabolic";
    case MapKind::HyperbolicOneFixed: return "HyperbolicOneFixed";
    case MapKind::HyperbolicTwoFixed: return "HyperbolicTwoFixed";
    case MapKind::OtherAutomorphism: return "OtherAutomorphism";
  }
  return "Unknown";
}

inline bool is_elliptic(MapKind k) {
  return k == MapKind::EllipticAutomorphism || k == MapKind::EllipticUnitaryPart ||
         k == MapKind::EllipticInteriorOnly || k == MapKind::EllipticBoundaryFixed;
}

/// One conjugation applied on the way to a normal form, as an associated matrix.
struct ConjugationStep {
  std::string name;
  Mat matrix;
};

// ---------------------------------------------------------------------------
// Elliptic maps

inline std::vector<cplx> eigenvalues_of(const Mat& m) {
  if (m.size() == 0) return {};
  Eigen::ComplexEigenSolver<Mat> solver(m, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::DegenerateEigenproblem, "eigen-solver did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

inline void require_fixed(const Map& map, const Vec& z0, double tol) {
  if ((evaluate(map, z0) - z0).norm() > tol) {
    throw Error(ErrorCode::NotAFixedPoint, "z0 is not fixed by the map");
  }
}

/// Number of eigenvalues of d phi_{z0}, with algebraic multiplicity, on the unit circle.
inline int unitary_index(const Map& map, const Vec& z0, const Tolerances& tol = default_tolerances()) {
  require_fixed(map, z0, 1e-8);
  int p = 0;
  for (cplx lambda : eigenvalues_of(jacobian(map, z0))) {
    if (std::abs(std::abs(lambda) - 1.0) < tol.unimodular) ++p;
  }
  return p;
}

struct EllipticSpectralData {
  std::vector<cplx> unimodular;
  std::vector<cplx> contractive;
};

inline EllipticSpectralData elliptic_spectral_data(const Map& map, const Vec& z0,
                                                   const Tolerances& tol = default_tolerances()) {
  require_fixed(map, z0, 1e-8);
  EllipticSpectralData out;
  for (cplx lambda : eigenvalues_of(jacobian(map, z0))) {
    const double r = std::abs(lambda);
    if (std::abs(r - 1.0) < tol.unimodular) {
      out.unimodular.push_back(lambda);
    } else if (r < 1.0 - tol.gap) {
      out.contractive.push_back(lambda);
    } else {
      throw Error(ErrorCode::GapEigenvalue,
                  "eigenvalue modulus " + std::to_string(r) + " is neither unimodular nor clearly contractive");
    }
  }
  return out;
}

enum class P0Domain { Ellipsoid, HalfPlaneLike };

inline std::string_view to_string(P0Domain d) {
  return d == P0Domain::Ellipsoid ? "ellipsoid" : "half-plane-like";
}

/**
 * Normal form of an elliptic map with trivial unitary part: after moving the
 * fixed point to 0 and rotating, sigma o phi~ = A_1 sigma with
 * sigma(z) = z / (1 - delta z_1).
 */
struct EllipticP0Form {
  double delta = 0.0;
  Mat A1;
  P0Domain domain = P0Domain::Ellipsoid;
  double r = 1.0;                   // ellipsoid parameter (1 - delta^2)^{-1/2}; infinite for the half-plane
  Vec V;                            // solution of (A^* - I) V = C
  Vec interior_point;               // original fixed point z0
  std::vector<ConjugationStep> chain;
  double conjugacy_residual = 0.0;  // max |sigma(phi~(z)) - A_1 sigma(z)| over samples
};

/// phi~ in the frame where the fixed point is 0 and V is along e_1.
inline Map p0_reduced_map(const Map& map, const EllipticP0Form& form) {
  Mat t = Mat::Identity(map.dim() + 1, map.dim() + 1);
  for (const auto& step : form.chain) t = step.matrix * t;
  return Map::from_matrix(t * map.matrix() * t.inverse());
}

inline Vec p0_sigma(const Vec& z, double delta) { return z / (1.0 - delta * z(0)); }

inline EllipticP0Form elliptic_p0_normal_form(const Map& map, const Tolerances& tol = default_tolerances()) {
  const int n = map.dim();
  FixedPointOptions fo;
  fo.boundary_tol = tol.boundary;
  const auto fps = fixed_points(map, fo);
  const auto interior = fps.interior();
  if (interior.empty()) throw Error(ErrorCode::InvalidArgument, "map is not elliptic");
  const Vec z0 = interior.front().location;
  if (unitary_index(map, z0, tol) > 0) {
    throw Error(ErrorCode::UnitaryIndexNonzero, "unitary index is positive");
  }

  EllipticP0Form form;
  form.interior_point = z0;
  const Map center = ball_automorphism_to_origin(z0);
  const Mat cm = center.matrix();
  Mat m = cm * map.matrix() * cm.inverse();
  m /= m(n, n);
  const Mat a = m.topLeftCorner(n, n);
  const Vec c = m.bottomLeftCorner(1, n).adjoint();

  form.V = (a.adjoint() - Mat::Identity(n, n)).partialPivLu().solve(c);
  form.delta = form.V.norm();
  const Mat u = unitary_with_first_column(form.V);
  form.A1 = u.adjoint() * a * u;
  if (form.delta < 1.0 - tol.delta_unit) {
    form.domain = P0Domain::Ellipsoid;
    form.r = 1.0 / std::sqrt(1.0 - form.delta * form.delta);
  } else {
    form.domain = P0Domain::HalfPlaneLike;
    form.r = std::numeric_limits<double>::infinity();
  }
  form.chain.push_back({"ball_automorphism", cm});
  form.chain.push_back({"unitary", block_unitary(u.adjoint())});

  const Map reduced = p0_reduced_map(map, form);
  std::mt19937_64 rng(0xe111ULL);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 0.9);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    Vec z(n);
    for (int j = 0; j < n; ++j) z(j) = cplx(gauss(rng), gauss(rng));
    z *= unif(rng) / z.norm();
    const Vec lhs = p0_sigma(evaluate(reduced, z), form.delta);
    const Vec rhs = form.A1 * p0_sigma(z, form.delta);
    worst = std::max(worst, (lhs - rhs).norm());
  }
  form.conjugacy_residual = worst;
  return form;
}

// ---------------------------------------------------------------------------
// Hyperbolic maps

/**
 * Siegel half-plane normal form (1/alpha)(z + c, A w + d) with c real,
 * reached through a rotation, the Cayley transform, a Heisenberg
 * translation eta and an imaginary translation nu.
 */
struct HyperbolicNormalForm {
  double alpha = 1.0;
  bool one_fixed = true;
  double c = 0.0;
  Mat A;        // w-block of (1/alpha)(z + c, A w + d)
  Vec d;
  Mat A_prime;  // A / sqrt(alpha), meaningful in the two-fixed-point case
  Vec k1;
  cplx k2{};
  double imaginary_shift = 0.0;  // nu(z, w) = (z - i shift, w)
  HalfPlaneMap raw;              // half-plane conjugate before eta and nu
  std::vector<ConjugationStep> chain;

  HalfPlaneMap as_half_plane() const {
    HalfPlaneMap h;
    h.alpha = alpha;
    h.c = c;
    h.b = Vec::Zero(A.rows());
    h.d = d;
    h.A = A;
    return h;
  }

  /// T with normal form = T m_phi T^{-1}.
  Mat to_normal_coordinates() const {
    const auto n = A.rows() + 1;
    Mat t = Mat::Identity(n + 1, n + 1);
    for (const auto& step : chain) t = step.matrix * t;
    return t;
  }
};

inline Mat heisenberg_matrix(const Vec& k1, cplx k2) {
  const auto n = k1.size() + 1;
  Mat m = Mat::Identity(n + 1, n + 1);
  if (n > 1) {
    m.block(0, 1, 1, n - 1) = 2.0 * k1.adjoint();
    m.block(1, n, n - 1, 1) = k1;
  }
  m(0, n) = k2;
  return m;
}

inline Mat translation_matrix(int n, cplx shift) {
  Mat m = Mat::Identity(n + 1, n + 1);
  m(0, n) = shift;
  return m;
}

inline HyperbolicNormalForm hyperbolic_normal_form(const Map& map, const Tolerances& tol = default_tolerances(),
                                                   const FixedPointSet* known = nullptr) {
  const int n = map.dim();
  FixedPointSet computed;
  if (known == nullptr) {
    FixedPointOptions fo;
    fo.boundary_tol = tol.boundary;
    computed = fixed_points(map, fo);
    known = &computed;
  }
  if (!known->interior().empty()) throw Error(ErrorCode::NotHyperbolic, "map is elliptic");
  const auto dw = denjoy_wolff(map, tol, known);
  if (dw.alpha >= 1.0 - tol.parabolic_band) throw Error(ErrorCode::NotHyperbolic, "map is parabolic");

  const auto conj = conjugate_to_halfplane(map, dw.point.location, tol);
  HyperbolicNormalForm form;
  form.raw = conj.psi;
  form.alpha = conj.psi.alpha;
  const double alpha = form.alpha;

  form.k1 = Vec::Zero(n - 1);
  if (n > 1) {
    const Mat lhs = 2.0 * (conj.psi.A.adjoint() - Mat::Identity(n - 1, n - 1));
    form.k1 = lhs.partialPivLu().solve(conj.psi.b);
  }
  form.k2 = cplx(form.k1.squaredNorm(), 0.0);
  const Mat eta = heisenberg_matrix(form.k1, form.k2);
  Mat m1 = eta.inverse() * conj.psi.matrix() * eta;
  const HalfPlaneMap h1 = HalfPlaneMap::from_matrix(m1);
  form.imaginary_shift = h1.c.imag() / (1.0 - alpha);
  const Mat nu = translation_matrix(n, cplx(0.0, -form.imaginary_shift));
  const Mat m2 = nu.inverse() * m1 * nu;
  const HalfPlaneMap h2 = HalfPlaneMap::from_matrix(m2);

  form.c = h2.c.real();
  form.A = h2.A;
  form.d = h2.d;
  form.A_prime = n > 1 ? Mat(form.A / std::sqrt(alpha)) : Mat::Zero(0, 0);

  const Mat uext = block_unitary(conj.rotation);
  form.chain.push_back({"unitary", uext.adjoint()});
  form.chain.push_back({"cayley", cayley_matrix(n)});
  form.chain.push_back({"heisenberg_inverse", eta.inverse()});
  form.chain.push_back({"imaginary_translation_inverse", nu.inverse()});

  // c = 0 forces d = 0 through alpha c >= |d|^2.
  const double scale = std::max(1.0, std::abs(form.c));
  form.one_fixed = form.c > 1e-9 * scale;
  if (!form.one_fixed) {
    form.c = 0.0;
    form.d = Vec::Zero(n - 1);
  }
  return form;
}

// ---------------------------------------------------------------------------
// Classification

struct Classification {
  MapKind kind = MapKind::EllipticInteriorOnly;
  FixedPointSet fixed_points;
  std::optional<Vec> interior_point;
  std::optional<DenjoyWolffPoint> denjoy_wolff;
  std::vector<FixedPoint> boundary_points;
  std::optional<double> alpha;
  std::optional<int> unitary_index;
  /// Eigenvalues of d phi_{z0} (elliptic) or of the half-plane w-block A (non-elliptic).
  std::vector<cplx> eigenvalues;
  std::optional<EllipticSpectralData> elliptic_data;
  std::optional<EllipticP0Form> p0_form;
  std::optional<HyperbolicNormalForm> hyperbolic_form;
  std::vector<std::string> warnings;

  bool elliptic() const { return is_elliptic(kind); }
};

inline Classification classify(const Map& map, const Tolerances& tol = default_tolerances()) {
  Classification out;
  FixedPointOptions fo;
  fo.boundary_tol = tol.boundary;
  out.fixed_points = fixed_points(map, fo);
  out.boundary_points = out.fixed_points.boundary();
  for (const auto& w : out.fixed_points.warnings) out.warnings.push_back(w);
  const bool automorphism = is_automorphism(map, tol.automorphism);

  const auto interior = out.fixed_points.interior();
  if (!interior.empty()) {
    const Vec z0 = interior.front().location;
    out.interior_point = z0;
    out.eigenvalues = eigenvalues_of(jacobian(map, z0));
    if (automorphism) {
      out.kind = MapKind::EllipticAutomorphism;
      out.unitary_index = map.dim();
      out.elliptic_data = EllipticSpectralData{out.eigenvalues, {}};
      return out;
    }
    out.elliptic_data = elliptic_spectral_data(map, z0, tol);
    const int p = static_cast<int>(out.elliptic_data->unimodular.size());
    out.unitary_index = p;
    if (p > 0) {
      out.kind = MapKind::EllipticUnitaryPart;
      return out;
    }
    if (out.boundary_points.size() > 1) {
      throw Error(ErrorCode::MultipleBoundaryFixedPoints,
                  "elliptic map with trivial unitary part fixes more than one boundary point");
    }
    out.kind = out.boundary_points.empty() ? MapKind::EllipticInteriorOnly : MapKind::EllipticBoundaryFixed;
    out.p0_form = elliptic_p0_normal_form(map, tol);
    const bool half_plane = out.p0_form->domain == P0Domain::HalfPlaneLike;
    if (half_plane != (out.kind == MapKind::EllipticBoundaryFixed)) {
      out.warnings.push_back("delta = " + std::to_string(out.p0_form->delta) +
                             " disagrees with the boundary fixed point count");
    }
    return out;
  }

  out.denjoy_wolff = denjoy_wolff(map, tol, &out.fixed_points);
  for (const auto& w : out.denjoy_wolff->warnings) out.warnings.push_back(w);
  out.alpha = out.denjoy_wolff->alpha;
  if (automorphism) {
    out.kind = MapKind::OtherAutomorphism;
    return out;
  }
  if (*out.alpha >= 1.0 - tol.parabolic_band) {
    out.kind = MapKind::Parabolic;
    return out;
  }
  out.hyperbolic_form = hyperbolic_normal_form(map, tol, &out.fixed_points);
  out.eigenvalues = eigenvalues_of(out.hyperbolic_form->A);
  const bool two = out.boundary_points.size() >= 2;
  out.kind = two ? MapKind::HyperbolicTwoFixed : MapKind::HyperbolicOneFixed;
  if (two == out.hyperbolic_form->one_fixed) {
    out.warnings.push_back("normal-form translation c disagrees with the boundary fixed point count");
  }
  if (two) out.eigenvalues = eigenvalues_of(out.hyperbolic_form->A_prime);
  return out;
}

}  // namespace lfm

#endif  // LFM_CLASSIFY_HPP_
