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

#ifndef LFM_IO_HPP_
#define LFM_IO_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lfm/classify.hpp"
#include "lfm/oracle.hpp"
#include "lfm/spectra.hpp"

namespace lfm::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Deterministic output

/// %.17g for every float, fixed key order, no locale dependence.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void dump_to(std::ostringstream& os, const json& j, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * level), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << json(it.key()).dump() << (indent > 0 ? ": " : ":");
        dump_to(os, it.value(), indent, level + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // arrays of scalars stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return !e.is_structured(); });
      if (flat || indent == 0) {
        os << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i > 0) os << (indent > 0 ? ", " : ",");
          dump_to(os, j[i], indent, level + 1);
        }
        os << ']';
        return;
      }
      os << '[' << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) os << ',' << nl;
        os << pad;
        dump_to(os, j[i], indent, level + 1);
      }
      os << nl << close_pad << ']';
      return;
    }
    case json::value_t::number_float:
      os << format_number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace detail

inline std::string dump(const json& j, int indent = 2) {
  std::ostringstream os;
  detail::dump_to(os, j, indent, 0);
  return os.str();
}

// ---------------------------------------------------------------------------
// Basic values

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

inline json to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline json to_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (cplx z : v) a.push_back(to_json(z));
  return a;
}

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

[[noreturn]] inline void malformed(const std::string& what) { throw Error(ErrorCode::MalformedInput, what); }

inline cplx complex_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    malformed(where + ": expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Vec vector_from(const json& j, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) malformed(where + ": expected " + std::to_string(n) + " entries");
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = complex_from(j[static_cast<std::size_t>(i)], where + "[" + std::to_string(i) + "]");
  return v;
}

// ---------------------------------------------------------------------------
// Maps

/// {"N": n, "A": [[[re, im], ...], ...], "B": [[re, im], ...], "C": [...], "d": [re, im]}
inline json to_json(const Map& map) {
  json j;
  j["N"] = map.dim();
  j["A"] = to_json(map.A());
  j["B"] = to_json(map.B());
  j["C"] = to_json(map.C());
  j["d"] = to_json(map.d());
  return j;
}

inline Map map_from_json(const json& j) {
  if (!j.is_object()) malformed("map must be a JSON object");
  for (const char* key : {"N", "A", "B", "C", "d"}) {
    if (!j.contains(key)) malformed(std::string("missing key \"") + key + "\"");
  }
  if (!j["N"].is_number_integer() || j["N"].get<int>() < 1) malformed("N must be a positive integer");
  const int n = j["N"].get<int>();
  const json& a = j["A"];
  if (!a.is_array() || static_cast<int>(a.size()) != n) malformed("A must have N rows");
  Mat am(n, n);
  for (int i = 0; i < n; ++i) {
    const Vec row = vector_from(a[static_cast<std::size_t>(i)], n, "A[" + std::to_string(i) + "]");
    am.row(i) = row.transpose();
  }
  return Map(am, vector_from(j["B"], n, "B"), vector_from(j["C"], n, "C"), complex_from(j["d"], "d"));
}

inline Map parse_map(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    malformed("invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return map_from_json(j);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Map load_map(const std::string& path) { return parse_map(read_file(path)); }

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const Tolerances& t) {
  json j;
  j["self_map"] = t.self_map;
  j["boundary"] = t.boundary;
  j["fixed_point"] = t.fixed_point;
  j["unimodular"] = t.unimodular;
  j["gap"] = t.gap;
  j["automorphism"] = t.automorphism;
  j["parabolic_band"] = t.parabolic_band;
  j["dilation"] = t.dilation;
  j["radial_agreement"] = t.radial_agreement;
  j["delta_unit"] = t.delta_unit;
  j["rational_angle"] = t.rational_angle;
  j["rational_max_order"] = t.rational_max_order;
  j["tail"] = t.tail;
  j["max_family_points"] = t.max_family_points;
  return j;
}

inline json to_json(const ValidationReport& r) {
  json j;
  j["ok"] = r.ok;
  j["max_modulus"] = r.max_modulus;
  j["witness"] = to_json(r.witness);
  j["denominator_ok"] = r.denominator_ok;
  j["denominator_margin"] = r.denominator_margin;
  j["samples"] = r.samples;
  j["tolerance"] = r.tolerance;
  return j;
}

inline json to_json(const FixedPoint& p) {
  json j;
  j["location"] = to_json(p.location);
  j["kind"] = std::string(to_string(p.kind));
  j["dilation"] = optional_number(p.dilation);
  j["eigenvalue"] = to_json(p.eigenvalue);
  return j;
}

inline json to_json(const FixedPointSet& s) {
  json j;
  json pts = json::array();
  for (const auto& p : s.points) pts.push_back(to_json(p));
  j["points"] = pts;
  json inf = json::array();
  for (const auto& v : s.at_infinity) inf.push_back(to_json(v));
  j["at_infinity"] = inf;
  j["fixed_slice"] = s.fixed_slice;
  j["slice_dimension"] = s.slice_dimension;
  return j;
}

inline json chain_to_json(const std::vector<ConjugationStep>& chain) {
  json a = json::array();
  for (const auto& step : chain) {
    json s;
    s["name"] = step.name;
    s["map"] = to_json(Map::from_matrix(step.matrix));
    a.push_back(s);
  }
  return a;
}

inline json to_json(const Classification& c) {
  json j;
  j["kind"] = std::string(to_string(c.kind));
  j["interior_point"] = c.interior_point ? to_json(*c.interior_point) : json(nullptr);
  if (c.denjoy_wolff) {
    json dw;
    dw["point"] = to_json(c.denjoy_wolff->point.location);
    dw["alpha"] = c.denjoy_wolff->alpha;
    dw["radial_estimate"] = c.denjoy_wolff->radial_estimate;
    j["denjoy_wolff"] = dw;
  } else {
    j["denjoy_wolff"] = nullptr;
  }
  json bps = json::array();
  for (const auto& p : c.boundary_points) {
    json b;
    b["point"] = to_json(p.location);
    b["dilation"] = optional_number(p.dilation);
    bps.push_back(b);
  }
  j["boundary_fixed_points"] = bps;
  j["alpha"] = optional_number(c.alpha);
  j["p"] = c.unitary_index ? json(*c.unitary_index) : json(nullptr);
  j["eigenvalues"] = to_json(c.eigenvalues);
  if (c.elliptic_data) {
    j["unimodular_eigenvalues"] = to_json(c.elliptic_data->unimodular);
    j["contractive_eigenvalues"] = to_json(c.elliptic_data->contractive);
  }
  j["fixed_points"] = to_json(c.fixed_points);
  if (c.p0_form) {
    const auto& f = *c.p0_form;
    json p0;
    p0["delta"] = f.delta;
    p0["A1"] = to_json(f.A1);
    p0["A1_norm"] = f.A1.operatorNorm();
    p0["domain"] = std::string(to_string(f.domain));
    p0["r"] = f.r;
    p0["V"] = to_json(f.V);
    p0["conjugacy_residual"] = f.conjugacy_residual;
    p0["conjugation_chain"] = chain_to_json(f.chain);
    j["elliptic_normal_form"] = p0;
  }
  if (c.hyperbolic_form) {
    const auto& f = *c.hyperbolic_form;
    json h;
    h["case"] = f.one_fixed ? "OneFixed" : "TwoFixed";
    h["alpha"] = f.alpha;
    h["c"] = f.c;
    h["A"] = to_json(f.A);
    h["d"] = to_json(f.d);
    if (!f.one_fixed) h["A_prime"] = to_json(f.A_prime);
    h["k1"] = to_json(f.k1);
    h["k2"] = to_json(f.k2);
    h["imaginary_shift"] = f.imaginary_shift;
    h["conjugation_chain"] = chain_to_json(f.chain);
    j["hyperbolic_normal_form"] = h;
  }
  j["warnings"] = c.warnings;
  return j;
}

inline json to_json(const Component& comp) {
  json j;
  j["type"] = std::string(component_type(comp));
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, PointComponent>) {
          j["value"] = to_json(c.value);
        } else if constexpr (std::is_same_v<T, PointFamily>) {
          j["values"] = to_json(c.values);
          std::vector<cplx> gens;
          for (const auto& g : c.generators) gens.push_back(g.value);
          j["generators"] = to_json(gens);
          j["include_empty_product"] = c.include_empty;
          j["floor"] = c.floor;
          j["truncated"] = c.truncated;
        } else if constexpr (std::is_same_v<T, Annulus>) {
          j["r_in"] = c.r_in;
          j["r_out"] = c.r_out;
          j["open_inner"] = c.open_inner;
          j["open_outer"] = c.open_outer;
        } else {
          j["radius"] = c.radius;
        }
      },
      comp);
  return j;
}

inline json to_json(const SpectralSet& s) {
  json j;
  json comps = json::array();
  for (const auto& c : s.components) comps.push_back(to_json(c));
  j["components"] = comps;
  j["provenance"] = s.provenance;
  j["spectral_radius"] = s.spectral_radius;
  j["closure"] = s.closure;
  if (s.essential_radius) {
    j["essential_radius"] = *s.essential_radius;
    j["essential_radius_estimate"] = optional_number(s.essential_radius_estimate);
    j["essential_radius_disagreement"] = s.essential_radius_disagreement;
  }
  j["notes"] = s.notes;
  return j;
}

inline json to_json(const EssentialRadiusEstimate& e) {
  json j;
  j["tau"] = to_json(e.tau);
  j["n_max"] = e.n_max;
  j["radii"] = e.radii;
  j["g"] = e.g;
  j["g_root"] = e.root;
  j["window"] = json::array({e.window_first, e.window_last});
  j["settled_n"] = e.settled_n;
  j["limit"] = e.limit;
  return j;
}

// ---------------------------------------------------------------------------
// CSV

/// Rows "re,im,component_index".
inline void write_cloud_csv(std::ostream& os, const std::vector<CloudPoint>& cloud) {
  os << "re,im,component_index\n";
  for (const auto& p : cloud) {
    os << format_number(p.value.real()) << ',' << format_number(p.value.imag()) << ',' << p.component << '\n';
  }
}

/// Rows "row,col,re,im" over the nonzero entries of the compression.
inline void write_matrix_csv(std::ostream& os, const Mat& m) {
  os << "row,col,re,im\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const cplx v = m(i, j);
      if (v == cplx(0.0)) continue;
      os << i << ',' << j << ',' << format_number(v.real()) << ',' << format_number(v.imag()) << '\n';
    }
  }
}

inline void write_eigenvalues_csv(std::ostream& os, const std::vector<cplx>& ev) {
  os << "index,re,im,modulus\n";
  for (std::size_t i = 0; i < ev.size(); ++i) {
    os << i << ',' << format_number(ev[i].real()) << ',' << format_number(ev[i].imag()) << ','
       << format_number(std::abs(ev[i])) << '\n';
  }
}

/// Basis ordering header for exported compression matrices.
inline json basis_header(const MonomialBasis& basis) {
  json j;
  j["N"] = basis.dim();
  j["degree"] = basis.degree();
  j["ordering"] = "graded lexicographic, first variable descending";
  j["normalization"] = "e_alpha = z^alpha / ||z^alpha||";
  json idx = json::array();
  for (std::size_t i = 0; i < basis.size(); ++i) idx.push_back(basis.multi_index(i));
  j["multi_indices"] = idx;
  return j;
}

}  // namespace lfm::io

#endif  // LFM_IO_HPP_
