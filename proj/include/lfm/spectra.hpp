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

#ifndef LFM_SPECTRA_HPP_
#define LFM_SPECTRA_HPP_

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lfm/classify.hpp"
#include "lfm/spectral_set.hpp"

namespace lfm {

inline double spectral_radius(const Classification& cls, int n) {
  if (cls.elliptic()) return 1.0;
  return std::pow(*cls.alpha, -0.5 * n);
}

/// 1 for elliptic maps, alpha^{-N/2} otherwise.
inline double spectral_radius(const Map& map, const Tolerances& tol = default_tolerances()) {
  return spectral_radius(classify(map, tol), map.dim());
}

// ---------------------------------------------------------------------------
// Roots of unity

/// Order q of lambda as a root of unity, found through the continued
/// fraction of arg(lambda) / 2 pi; empty when no p/q with q <= max_order lies
/// within tol.
inline std::optional<int> root_of_unity_order(cplx lambda, double tol, int max_order) {
  double x = std::arg(lambda) / (2.0 * kPi);
  if (x < 0.0) x += 1.0;
  long long h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  double rest = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(rest);
    const long long ai = static_cast<long long>(a);
    const long long h = ai * h_prev + h_prev2;
    const long long k = ai * k_prev + k_prev2;
    if (k > max_order) break;
    if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) <= tol) {
      return static_cast<int>(k);
    }
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const double frac = rest - a;
    if (frac < 1e-15) break;
    rest = 1.0 / frac;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Essential radius

struct EssentialRadiusOptions {
  int n_max = 20;
  std::vector<double> radii;  // empty: 1 - 10^{-k}, k = 2..8
  std::optional<Vec> tau;     // boundary fixed point to localize at
  double settle_tol = 1e-4;   // relative agreement of g_n^{1/n} between the two largest radii
};

struct EssentialRadiusEstimate {
  Vec tau;
  std::vector<double> radii;
  int n_max = 0;
  std::vector<std::vector<double>> table;  // table[i][n - 1]: sup of the ratio at radii[i]
  std::vector<double> g;                   // g_n at the radius closest to 1
  std::vector<double> root;                // g_n^{1/n}
  int settled_n = 0;  // g_n^{1/n} agrees across the two largest radii for n <= settled_n
  int window_first = 0;
  int window_last = 0;
  double limit = 0.0;                      // exp of the least-squares slope of log g_n over the window
};

namespace detail {

using lcplx = std::complex<long double>;

struct LongMap {
  int n;
  std::vector<lcplx> a, b, c;
  lcplx d;

  explicit LongMap(const Map& m) : n(m.dim()), a(n * n), b(n), c(n), d(m.d()) {
    for (int i = 0; i < n; ++i) {
      b[i] = m.B()(i);
      c[i] = m.C()(i);
      for (int j = 0; j < n; ++j) a[i * n + j] = m.A()(i, j);
    }
  }

  std::vector<lcplx> operator()(const std::vector<lcplx>& z) const {
    lcplx den = d;
    for (int j = 0; j < n; ++j) den += z[j] * std::conj(c[j]);
    std::vector<lcplx> out(n);
    for (int i = 0; i < n; ++i) {
      lcplx s = b[i];
      for (int j = 0; j < n; ++j) s += a[i * n + j] * z[j];
      out[i] = s / den;
    }
    return out;
  }
};

inline long double one_minus_norm_sq(const std::vector<lcplx>& z) {
  long double s = 0.0L;
  for (const auto& x : z) s += std::norm(x);
  return 1.0L - s;
}

inline Vec pick_boundary_fixed_point(const Map& map, const Tolerances& tol) {
  FixedPointOptions fo;
  fo.boundary_tol = tol.boundary;
  const auto fps = fixed_points(map, fo);
  if (fps.interior().empty()) {
    return denjoy_wolff(map, tol, &fps).point.location;
  }
  const auto boundary = fps.boundary();
  if (boundary.empty()) throw Error(ErrorCode::NoBoundaryFixedPoint, "map fixes no boundary point");
  return boundary.front().location;
}

}  // namespace detail

/**
 * Estimates lim_n (limsup_{|z|->1} ((1-|z|^2)/(1-|phi^n z|^2))^{N/2})^{1/n}
 * by sampling a cap of angular size sqrt(1 - r) around a boundary fixed
 * point and iterating in long double.
 */
inline EssentialRadiusEstimate essential_radius_estimate(const Map& map, const EssentialRadiusOptions& opts = {},
                                                         const Tolerances& tol = default_tolerances()) {
  const int n = map.dim();
  EssentialRadiusEstimate est;
  est.n_max = std::max(2, opts.n_max);
  est.radii = opts.radii;
  if (est.radii.empty()) {
    for (int k = 2; k <= 8; ++k) est.radii.push_back(1.0 - std::pow(10.0, -k));
  }
  std::sort(est.radii.begin(), est.radii.end());
  est.tau = opts.tau ? *opts.tau : detail::pick_boundary_fixed_point(map, tol);
  if (std::abs(est.tau.norm() - 1.0) > 1e-6) {
    throw Error(ErrorCode::InvalidArgument, "tau must lie on the unit sphere");
  }
  est.tau.normalize();

  // tangent directions: i tau and the complex-orthogonal complement
  std::vector<Vec> dirs{cplx(0, 1) * est.tau};
  if (n > 1) {
    const Mat u = unitary_with_first_column(est.tau);
    for (int j = 1; j < n; ++j) {
      dirs.push_back(u.col(j));
      dirs.push_back(cplx(0, 1) * u.col(j));
    }
  }
  const detail::LongMap f(map);
  const long double exponent = 0.5L * n;
  est.table.assign(est.radii.size(), std::vector<double>(est.n_max, 0.0));

  for (std::size_t ri = 0; ri < est.radii.size(); ++ri) {
    const long double r = est.radii[ri];
    const double h = std::sqrt(1.0 - est.radii[ri]);
    std::vector<Vec> cap{est.tau};
    for (const auto& dvec : dirs) {
      for (double t : {0.5, 1.0, 2.0}) {
        cap.push_back((est.tau + t * h * dvec).normalized());
        cap.push_back((est.tau - t * h * dvec).normalized());
      }
    }
    std::vector<long double> best(est.n_max, 0.0L);
    for (const auto& zeta : cap) {
      std::vector<detail::lcplx> z(n);
      for (int j = 0; j < n; ++j) z[j] = r * detail::lcplx(zeta(j).real(), zeta(j).imag());
      // 1 - |r zeta|^2 with zeta renormalized in long double
      long double nz = 0.0L;
      for (const auto& x : z) nz += std::norm(x);
      for (auto& x : z) x *= r / std::sqrt(nz);
      const long double base = (1.0L - r) * (1.0L + r);
      std::vector<detail::lcplx> w = z;
      for (int k = 0; k < est.n_max; ++k) {
        w = f(w);
        const long double q = detail::one_minus_norm_sq(w);
        if (q <= 0.0L) continue;
        best[k] = std::max(best[k], std::pow(base / q, exponent));
      }
    }
    for (int k = 0; k < est.n_max; ++k) est.table[ri][k] = static_cast<double>(best[k]);
  }

  est.g = est.table.back();
  for (int k = 0; k < est.n_max; ++k) {
    est.root.push_back(std::pow(est.g[k], 1.0 / (k + 1)));
  }
  // g_n is only in its asymptotic regime while (1 - r) d^n stays small, so the fit
  // uses the leading run of n whose root agrees across the two radii closest to 1.
  int settled = est.n_max;
  if (est.table.size() >= 2) {
    const auto& prev = est.table[est.table.size() - 2];
    settled = 0;
    while (settled < est.n_max) {
      const double e = 1.0 / (settled + 1);
      const double a = std::pow(est.g[settled], e), b = std::pow(prev[settled], e);
      if (!(std::abs(a - b) <= opts.settle_tol * std::abs(a))) break;
      ++settled;
    }
  }
  est.settled_n = settled;
  if (settled == 0) {
    est.window_first = std::max(1, est.n_max / 2);
    est.window_last = est.n_max;
  } else if (settled == 1) {
    est.window_first = est.window_last = 1;
    est.limit = est.g[0];
    return est;
  } else {
    est.window_first = std::max(1, settled / 2);
    est.window_last = settled;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int m = est.window_first; m <= est.window_last; ++m) {
    const double x = m;
    const double y = std::log(est.g[m - 1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  est.limit = std::exp(slope);
  return est;
}

// ---------------------------------------------------------------------------
// Spectrum

struct SpectrumOptions {
  Tolerances tol = default_tolerances();
  bool verify_radius = true;  // run the iteration estimate next to the closed-form disk radius
  int n_max = 20;
};

namespace detail {

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline std::vector<Generator> generators_for(const std::vector<cplx>& eigs, const Tolerances& tol,
                                             bool* irrational, std::vector<int>* orders) {
  std::vector<Generator> out;
  for (cplx lambda : eigs) {
    int order = 0;
    if (std::abs(std::abs(lambda) - 1.0) < tol.unimodular) {
      const auto q = root_of_unity_order(lambda, tol.rational_angle, tol.rational_max_order);
      if (!q) {
        *irrational = true;
      } else {
        order = *q;
        if (orders != nullptr) orders->push_back(order);
      }
    }
    out.push_back(make_generator(lambda, order, tol.unimodular));
  }
  return out;
}

inline std::string rotation_note(bool irrational, const Tolerances& tol) {
  std::string q = std::to_string(tol.rational_max_order);
  if (irrational) {
    return "irrational unimodular eigenvalue: no p/q with q <= " + q + " within " +
           format_double(tol.rational_angle);
  }
  return "all unimodular eigenvalues are roots of unity of order <= " + q;
}

}  // namespace detail

inline SpectralSet spectrum(const Map& map, const Classification& cls, const SpectrumOptions& opts = {}) {
  const Tolerances& tol = opts.tol;
  const int n = map.dim();
  SpectralSet set;
  set.spectral_radius = spectral_radius(cls, n);

  switch (cls.kind) {
    case MapKind::Parabolic:
      throw Error(ErrorCode::UnsupportedParabolic, "parabolic: spectrum out of scope; spectral radius = 1");
    case MapKind::OtherAutomorphism:
      throw Error(ErrorCode::UnsupportedAutomorphism,
                  "non-elliptic automorphism: spectrum out of scope; spectral radius = " +
                      detail::format_double(set.spectral_radius));

    case MapKind::EllipticAutomorphism:
    case MapKind::EllipticUnitaryPart: {
      const bool automorphism = cls.kind == MapKind::EllipticAutomorphism;
      bool irrational = false;
      std::vector<int> orders;
      auto gens = detail::generators_for(cls.eigenvalues, tol, &irrational, &orders);
      set.notes.push_back(detail::rotation_note(irrational, tol));
      if (irrational) {
        set.provenance = automorphism ? "elliptic automorphism: dense rotation group, unit circle"
                                      : "elliptic with unitary part: irrational rotation, union of circles";
        bool truncated = false;
        const auto moduli = enumerate_moduli(cls.eigenvalues, tol.unimodular, tol.tail, tol.max_family_points,
                                             &truncated);
        for (double m : moduli) set.components.push_back(Circle{m});
        if (truncated) set.notes.push_back("circle radii truncated at the point cap");
      } else {
        set.provenance = automorphism ? "elliptic automorphism: closure of eigenvalue products"
                                      : "elliptic with unitary part: rational rotations, closure of products";
        auto fam = enumerate_family(gens, true, tol.tail, tol.max_family_points);
        if (fam.truncated) set.notes.push_back("point family truncated at the point cap");
        set.components.push_back(std::move(fam));
      }
      if (!automorphism) {
        set.components.push_back(PointComponent{cplx(0.0)});
        set.closure = true;
      }
      return set;
    }

    case MapKind::EllipticInteriorOnly: {
      set.provenance = "elliptic without boundary fixed point: compact power, 0, 1 and eigenvalue products";
      bool irrational = false;
      auto gens = detail::generators_for(cls.eigenvalues, tol, &irrational, nullptr);
      set.components.push_back(PointComponent{cplx(0.0)});
      set.components.push_back(PointComponent{cplx(1.0)});
      auto fam = enumerate_family(gens, false, tol.tail, tol.max_family_points);
      if (fam.truncated) set.notes.push_back("point family truncated at the point cap");
      set.components.push_back(std::move(fam));
      set.closure = true;
      return set;
    }

    case MapKind::EllipticBoundaryFixed: {
      set.provenance = "elliptic with boundary fixed point: disk of essential radius, 1 and eigenvalue products";
      const Vec tau = cls.boundary_points.front().location;
      const double dil = boundary_dilation(map, tau);
      const double rho = std::pow(dil, -0.5 * n);
      set.essential_radius = rho;
      if (opts.verify_radius) {
        EssentialRadiusOptions eo;
        eo.n_max = opts.n_max;
        eo.tau = tau;
        const auto est = essential_radius_estimate(map, eo, tol);
        set.essential_radius_estimate = est.limit;
        set.essential_radius_disagreement = std::abs(est.limit - rho) > 0.05 * rho;
        if (set.essential_radius_disagreement) {
          set.notes.push_back("essential radius estimate " + detail::format_double(est.limit) +
                              " differs from the closed form " + detail::format_double(rho) + " by more than 5%");
        }
      }
      bool irrational = false;
      auto gens = detail::generators_for(cls.eigenvalues, tol, &irrational, nullptr);
      set.components.push_back(ClosedDisk{rho});
      set.components.push_back(PointComponent{cplx(1.0)});
      // products inside the disk are already covered
      auto fam = enumerate_family(gens, false, rho, tol.max_family_points);
      if (!fam.values.empty()) set.components.push_back(std::move(fam));
      return set;
    }

    case MapKind::HyperbolicOneFixed:
      set.provenance = "hyperbolic with one boundary fixed point: closed disk";
      set.components.push_back(ClosedDisk{set.spectral_radius});
      return set;

    case MapKind::HyperbolicTwoFixed: {
      set.provenance = "hyperbolic with two boundary fixed points: closure of a union of annuli";
      const double alpha = *cls.alpha;
      const double inner = std::pow(alpha, 0.5 * n);
      const double outer = std::pow(alpha, -0.5 * n);
      bool truncated = false;
      const auto moduli =
          enumerate_moduli(cls.eigenvalues, tol.unimodular, tol.tail / outer, tol.max_family_points, &truncated);
      for (double m : moduli) set.components.push_back(Annulus{m * inner, m * outer, true, true});
      if (truncated) set.notes.push_back("annulus family truncated at the point cap");
      set.components.push_back(PointComponent{cplx(0.0)});
      set.closure = true;
      return set;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown map kind");
}

inline SpectralSet spectrum(const Map& map, const SpectrumOptions& opts = {}) {
  return spectrum(map, classify(map, opts.tol), opts);
}

}  // namespace lfm

#endif  // LFM_SPECTRA_HPP_
