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

#ifndef LFM_COMMON_HPP_
#define LFM_COMMON_HPP_

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace lfm {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode {
  DenominatorVanishes,
  DimensionMismatch,
  DegenerateEigenproblem,
  HasInteriorFixedPoint,
  NoQualifyingBoundaryPoint,
  PointNotInterior,
  NotDenjoyWolff,
  NotAFixedPoint,
  GapEigenvalue,
  UnitaryIndexNonzero,
  NotHyperbolic,
  MultipleBoundaryFixedPoints,
  UnsupportedParabolic,
  UnsupportedAutomorphism,
  NoBoundaryFixedPoint,
  ZeroConstantTerm,
  SizeCapExceeded,
  EigenSolverFailure,
  ZeroFunction,
  ParameterConstraintViolated,
  InvalidArgument,
  MalformedInput,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DenominatorVanishes: return "DenominatorVanishes";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateEigenproblem: return "DegenerateEigenproblem";
    case ErrorCode::HasInteriorFixedPoint: return "HasInteriorFixedPoint";
    case ErrorCode::NoQualifyingBoundaryPoint: return "NoQualifyingBoundaryPoint";
    case ErrorCode::PointNotInterior: return "PointNotInterior";
    case ErrorCode::NotDenjoyWolff: return "NotDenjoyWolff";
    case ErrorCode::NotAFixedPoint: return "NotAFixedPoint";
    case ErrorCode::GapEigenvalue: return "GapEigenvalue";
    case ErrorCode::UnitaryIndexNonzero: return "UnitaryIndexNonzero";
    case ErrorCode::NotHyperbolic: return "NotHyperbolic";
    case ErrorCode::MultipleBoundaryFixedPoints: return "MultipleBoundaryFixedPoints";
    case ErrorCode::UnsupportedParabolic: return "UnsupportedParabolic";
    case ErrorCode::UnsupportedAutomorphism: return "UnsupportedAutomorphism";
    case ErrorCode::NoBoundaryFixedPoint: return "NoBoundaryFixedPoint";
    case ErrorCode::ZeroConstantTerm: return "ZeroConstantTerm";
    case ErrorCode::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorCode::EigenSolverFailure: return "EigenSolverFailure";
    case ErrorCode::ZeroFunction: return "ZeroFunction";
    case ErrorCode::ParameterConstraintViolated: return "ParameterConstraintViolated";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Numerical thresholds shared across the library. Defaults are the
/// documented ones; the CLI exposes them and echoes the effective values.
struct Tolerances {
  double self_map = 1e-9;           // allowed excess of max |phi| on the sphere over 1
  double boundary = 1e-8;           // |1 - |z|| band for boundary fixed points
  double fixed_point = 1e-9;        // |phi(p) - p| for reported fixed points
  double unimodular = 1e-8;         // ||lambda| - 1| band for unitary eigenvalues
  double gap = 1e-6;                // contractive eigenvalues must satisfy |lambda| < 1 - gap
  double automorphism = 1e-9;       // relative Krein-form residual
  double parabolic_band = 1e-8;     // alpha >= 1 - band is parabolic
  double dilation = 1e-8;           // Denjoy-Wolff qualification: dilation <= 1 + dilation
  double radial_agreement = 1e-4;   // angular derivative vs radial quotient
  double delta_unit = 1e-8;         // |delta - 1| band for the half-plane-like domain
  double rational_angle = 1e-9;     // root-of-unity detection tolerance on theta / 2 pi
  int rational_max_order = 64;      // largest denominator q considered a root of unity
  double tail = 1e-12;              // point families are enumerated down to this modulus
  std::size_t max_family_points = 200000;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

/// <z, w> = sum z_i conj(w_i)
inline cplx inner(const Vec& z, const Vec& w) { return w.dot(z); }

}  // namespace lfm

#endif  // LFM_COMMON_HPP_
