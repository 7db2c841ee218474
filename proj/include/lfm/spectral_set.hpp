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

#ifndef LFM_SPECTRAL_SET_HPP_
#define LFM_SPECTRAL_SET_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lfm/common.hpp"

namespace lfm {

/// Exponent bound for one generator of a product family.
struct Generator {
  cplx value;
  int max_exponent = -1;  // -1: unbounded (contractive); q-1 for a root of unity of order q
};

inline Generator make_generator(cplx value, int order_if_root_of_unity, double unimodular_tol) {
  Generator g{value, -1};
  if (std::abs(value) < 1e-300) {
    g.max_exponent = 1;
  } else if (std::abs(std::abs(value) - 1.0) < unimodular_tol) {
    g.max_exponent = std::max(0, order_if_root_of_unity - 1);
  }
  return g;
}

struct PointComponent {
  cplx value;
};

/// All products lambda^alpha of the generators, alpha a multi-index
/// (with |alpha| >= 1 unless include_empty).
struct PointFamily {
  std::vector<Generator> generators;
  bool include_empty = false;
  std::vector<cplx> values;  // enumerated in order of decreasing modulus
  double floor = 0.0;        // enumeration stopped below this modulus
  bool truncated = false;    // hit the point cap before reaching the floor
};

struct Circle {
  double radius;
};

struct ClosedDisk {
  double radius;
};

/// r_in < |lambda| < r_out; the openness flags record the exact set, the
/// spectrum itself is the closure.
struct Annulus {
  double r_in;
  double r_out;
  bool open_inner = true;
  bool open_outer = true;
};

using Component = std::variant<PointComponent, PointFamily, Circle, ClosedDisk, Annulus>;

struct SpectralSet {
  std::vector<Component> components;
  std::string provenance;
  double spectral_radius = 0.0;
  bool closure = false;  // the spectrum is the closure of the stored union
  std::vector<std::string> notes;
  // Disk radius of the boundary-fixed elliptic case: closed form and the
  // independent iteration estimate, reported side by side.
  std::optional<double> essential_radius;
  std::optional<double> essential_radius_estimate;
  bool essential_radius_disagreement = false;
};

namespace detail {

struct FamilyNode {
  double modulus;
  cplx value;
  std::vector<int> exponents;
  int last;  // smallest generator index allowed to grow, avoids revisiting exponent vectors
  bool operator<(const FamilyNode& other) const { return modulus < other.modulus; }
};

// Relative key (log-modulus, angle) so tiny distinct products stay distinct.
inline std::pair<std::int64_t, std::int64_t> rounded_key(cplx v) {
  const double m = std::abs(v);
  if (m == 0.0) return {std::numeric_limits<std::int64_t>::min(), 0};
  double a = std::arg(v);
  if (a < -kPi + 1e-10) a += 2.0 * kPi;
  return {std::llround(std::log(m) * 1e10), std::llround(a * 1e10)};
}

}  // namespace detail

/// Best-first enumeration: every product with modulus >= floor is produced
/// unless max_points is reached first.
inline PointFamily enumerate_family(std::vector<Generator> generators, bool include_empty, double floor,
                                    std::size_t max_points) {
  PointFamily fam;
  fam.generators = generators;
  fam.include_empty = include_empty;
  fam.floor = floor;
  const std::size_t k = generators.size();
  std::priority_queue<detail::FamilyNode> heap;
  std::map<std::pair<std::int64_t, std::int64_t>, bool> seen;
  heap.push({1.0, cplx(1.0, 0.0), std::vector<int>(k, 0), 0});
  while (!heap.empty()) {
    detail::FamilyNode node = heap.top();
    heap.pop();
    const bool empty = std::all_of(node.exponents.begin(), node.exponents.end(), [](int e) { return e == 0; });
    if (!empty || include_empty) {
      if (seen.emplace(detail::rounded_key(node.value), true).second) {
        if (fam.values.size() >= max_points) {
          fam.truncated = true;
          break;
        }
        fam.values.push_back(node.value);
      }
    }
    for (std::size_t j = static_cast<std::size_t>(node.last); j < k; ++j) {
      const auto& g = generators[j];
      if (g.max_exponent >= 0 && node.exponents[j] >= g.max_exponent) continue;
      const cplx next = node.value * g.value;
      const double m = std::abs(next);
      if (m < floor && !(m == 0.0 && floor <= 0.0)) {
        if (m == 0.0 && node.exponents[j] == 0) {
          // a zero generator contributes the single value 0 once
          if (seen.emplace(detail::rounded_key(cplx(0.0)), true).second && fam.values.size() < max_points) {
            fam.values.push_back(cplx(0.0));
          }
        }
        continue;
      }
      detail::FamilyNode child{m, next, node.exponents, static_cast<int>(j)};
      ++child.exponents[j];
      heap.push(std::move(child));
    }
  }
  return fam;
}

/// Distinct moduli |lambda^alpha| >= floor, alpha ranging over all multi-indices
/// (empty product included). Unimodular and zero generators are ignored.
inline std::vector<double> enumerate_moduli(const std::vector<cplx>& generators, double unimodular_tol,
                                            double floor, std::size_t max_points, bool* truncated = nullptr) {
  std::vector<Generator> gens;
  for (cplx g : generators) {
    const double m = std::abs(g);
    if (m < 1e-300 || std::abs(m - 1.0) < unimodular_tol) continue;
    gens.push_back({cplx(m, 0.0), -1});
  }
  const auto fam = enumerate_family(gens, true, floor, max_points);
  if (truncated != nullptr) *truncated = fam.truncated;
  std::vector<double> out;
  out.reserve(fam.values.size());
  for (cplx v : fam.values) out.push_back(v.real());
  return out;
}

namespace detail {

/// Targeted search for a product within tol of lambda, pruning below |lambda| - tol.
inline bool family_search(const std::vector<Generator>& gens, std::size_t j, cplx value, int exps_used,
                          bool include_empty, cplx lambda, double tol, std::size_t& budget) {
  if (budget == 0) return false;
  --budget;
  if (j == gens.size()) {
    return (exps_used > 0 || include_empty) && std::abs(value - lambda) <= tol;
  }
  const auto& g = gens[j];
  const double cut = std::abs(lambda) - tol;
  cplx v = value;
  for (int e = 0;; ++e) {
    if (e > 0 && std::abs(v) < cut) break;
    if (family_search(gens, j + 1, v, exps_used + e, include_empty, lambda, tol, budget)) return true;
    if (g.max_exponent >= 0 && e >= g.max_exponent) break;
    if (std::abs(g.value) >= 1.0 - 1e-15 && g.max_exponent < 0) break;
    v *= g.value;
    if (budget == 0) return false;
  }
  return false;
}

}  // namespace detail

inline bool contains(const PointFamily& fam, cplx lambda, double tol) {
  for (cplx v : fam.values) {
    if (std::abs(v - lambda) <= tol) return true;
  }
  if (std::abs(lambda) <= tol) {
    // products of a contractive generator accumulate at 0
    return std::any_of(fam.generators.begin(), fam.generators.end(),
                       [](const Generator& g) { return std::abs(g.value) < 1.0 - 1e-15; });
  }
  if (!fam.truncated && std::abs(lambda) + tol >= fam.floor) return false;
  std::size_t budget = 20'000'000;
  return detail::family_search(fam.generators, 0, cplx(1.0), 0, fam.include_empty, lambda, tol, budget);
}

inline bool contains(const Component& c, cplx lambda, double tol, bool closure) {
  const double r = std::abs(lambda);
  return std::visit(
      [&](const auto& comp) -> bool {
        using T = std::decay_t<decltype(comp)>;
        if constexpr (std::is_same_v<T, PointComponent>) {
          return std::abs(lambda - comp.value) <= tol;
        } else if constexpr (std::is_same_v<T, PointFamily>) {
          return contains(comp, lambda, tol);
        } else if constexpr (std::is_same_v<T, Circle>) {
          return std::abs(r - comp.radius) <= tol;
        } else if constexpr (std::is_same_v<T, ClosedDisk>) {
          return r <= comp.radius + tol;
        } else {
          const bool closed_in = closure || !comp.open_inner;
          const bool closed_out = closure || !comp.open_outer;
          const bool inner_ok = closed_in ? r >= comp.r_in - tol : r > comp.r_in - tol;
          const bool outer_ok = closed_out ? r <= comp.r_out + tol : r < comp.r_out + tol;
          return inner_ok && outer_ok;
        }
      },
      c);
}

/// True iff lambda is within tol of some component (modulus distance for
/// circles, disks and annuli, complex distance for points).
inline bool contains(const SpectralSet& set, cplx lambda, double tol) {
  return std::any_of(set.components.begin(), set.components.end(),
                     [&](const Component& c) { return contains(c, lambda, tol, set.closure); });
}

inline double max_modulus(const Component& c) {
  return std::visit(
      [](const auto& comp) -> double {
        using T = std::decay_t<decltype(comp)>;
        if constexpr (std::is_same_v<T, PointComponent>) {
          return std::abs(comp.value);
        } else if constexpr (std::is_same_v<T, PointFamily>) {
          double m = 0.0;
          for (cplx v : comp.values) m = std::max(m, std::abs(v));
          return m;
        } else if constexpr (std::is_same_v<T, Annulus>) {
          return comp.r_out;
        } else {
          return comp.radius;
        }
      },
      c);
}

inline double max_modulus(const SpectralSet& set) {
  double m = 0.0;
  for (const auto& c : set.components) m = std::max(m, max_modulus(c));
  return m;
}

struct CloudPoint {
  cplx value;
  std::size_t component;
};

/// Deterministic point cloud: circles get `resolution` angles, disks and
/// annuli a polar grid of resolution rings by resolution angles.
inline std::vector<CloudPoint> discretize(const SpectralSet& set, int resolution) {
  if (resolution < 1) throw Error(ErrorCode::InvalidArgument, "resolution must be >= 1");
  std::vector<CloudPoint> out;
  const auto angle = [resolution](int k) { return 2.0 * kPi * static_cast<double>(k) / resolution; };
  for (std::size_t i = 0; i < set.components.size(); ++i) {
    std::visit(
        [&](const auto& comp) {
          using T = std::decay_t<decltype(comp)>;
          if constexpr (std::is_same_v<T, PointComponent>) {
            out.push_back({comp.value, i});
          } else if constexpr (std::is_same_v<T, PointFamily>) {
            for (cplx v : comp.values) out.push_back({v, i});
          } else if constexpr (std::is_same_v<T, Circle>) {
            for (int k = 0; k < resolution; ++k) out.push_back({std::polar(comp.radius, angle(k)), i});
          } else if constexpr (std::is_same_v<T, ClosedDisk>) {
            out.push_back({cplx(0.0), i});
            for (int j = 1; j <= resolution; ++j) {
              const double r = comp.radius * j / resolution;
              for (int k = 0; k < resolution; ++k) out.push_back({std::polar(r, angle(k)), i});
            }
          } else {
            for (int j = 0; j <= resolution; ++j) {
              const double r = comp.r_in + (comp.r_out - comp.r_in) * j / resolution;
              for (int k = 0; k < resolution; ++k) out.push_back({std::polar(r, angle(k)), i});
            }
          }
        },
        set.components[i]);
  }
  return out;
}

inline std::string_view component_type(const Component& c) {
  switch (c.index()) {
    case 0: return "point";
    case 1: return "points";
    case 2: return "circle";
    case 3: return "disk";
    default: return "annulus";
  }
}

}  // namespace lfm

#endif  // LFM_SPECTRAL_SET_HPP_
