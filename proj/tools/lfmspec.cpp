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

// lfmspec: classify linear fractional self-maps of the ball and report the
// spectrum of their composition operators on H^2.
//
//   lfmspec <command> MAP.json [options]
//
// Exit codes: 0 success, 2 validation failure, 3 unsupported class, 1 error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lfm/io.hpp"
#include "lfm/lfm.hpp"

namespace {

using lfm::cplx;

constexpr const char* kVersion = "0.1.0";

using lfm::io::json;

struct Options {
  std::string map_path;
  int degree = -1;
  int n_max = 20;
  double tol = 1e-9;
  int resolution = 64;
  std::string out;
  std::string format = "json";
  bool matrix = false;
  std::string header;
  int count = 10;
  std::vector<double> nus{-1.0, -0.5, 0.0};
  int samples = 20;
  std::uint64_t seed = 1;
  lfm::Tolerances tolerances;
};

enum Exit { kOk = 0, kError = 1, kInvalid = 2, kUnsupported = 3 };

int default_degree(int n, bool light) {
  static const int heavy[] = {60, 25, 12};
  static const int small[] = {30, 10, 6};
  const int i = std::min(n, 3) - 1;
  return light ? small[i] : heavy[i];
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw lfm::Error(lfm::ErrorCode::InvalidArgument, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

json base_report(const std::string& command, const lfm::Map& map, const Options& opt) {
  json r;
  r["tool"] = "lfmspec";
  r["version"] = kVersion;
  r["command"] = command;
  r["input"] = lfm::io::to_json(map);
  json tol = lfm::io::to_json(opt.tolerances);
  tol["validation"] = opt.tol;
  r["tolerances"] = tol;
  return r;
}

void emit(const json& report, const Options& opt) {
  Output out(opt.out);
  out.stream() << lfm::io::dump(report) << '\n';
}

lfm::ValidationReport run_validation(const lfm::Map& map, const Options& opt) {
  lfm::ValidationOptions vo;
  vo.tolerance = opt.tol;
  return lfm::validate_self_map(map, vo);
}

// Shared preamble: load, validate, and fill the report header.
struct Session {
  lfm::Map map;
  json report;
  lfm::ValidationReport validation;
};

Session open_session(const std::string& command, const Options& opt) {
  Session s{lfm::io::load_map(opt.map_path), {}, {}};
  s.report = base_report(command, s.map, opt);
  s.validation = run_validation(s.map, opt);
  s.report["validation"] = lfm::io::to_json(s.validation);
  return s;
}

int reject(Session& s, const Options& opt) {
  std::cerr << "lfmspec: map is not a self-map of the ball (max |phi| = "
            << lfm::io::format_number(s.validation.max_modulus) << ")\n";
  emit(s.report, opt);
  return kInvalid;
}

int cmd_validate(const Options& opt) {
  auto s = open_session("validate", opt);
  if (!s.validation.ok) return reject(s, opt);
  emit(s.report, opt);
  return kOk;
}

int cmd_classify(const Options& opt) {
  auto s = open_session("classify", opt);
  if (!s.validation.ok) return reject(s, opt);
  const auto cls = lfm::classify(s.map, opt.tolerances);
  s.report["classification"] = lfm::io::to_json(cls);
  s.report["spectral_radius"] = lfm::spectral_radius(cls, s.map.dim());
  emit(s.report, opt);
  return kOk;
}

int unsupported(Session& s, const lfm::Classification& cls, const lfm::Error& e, const Options& opt) {
  json u;
  u["kind"] = std::string(lfm::to_string(cls.kind));
  u["alpha"] = lfm::io::optional_number(cls.alpha);
  u["spectral_radius"] = lfm::spectral_radius(cls, s.map.dim());
  const std::string what = e.what();
  u["message"] = what.substr(what.find(": ") + 2);
  s.report["unsupported"] = u;
  std::cerr << "lfmspec: " << u["message"].get<std::string>() << '\n';
  emit(s.report, opt);
  return kUnsupported;
}

int cmd_spectrum(const Options& opt) {
  auto s = open_session("spectrum", opt);
  if (!s.validation.ok) return reject(s, opt);
  const auto cls = lfm::classify(s.map, opt.tolerances);
  s.report["kind"] = std::string(lfm::to_string(cls.kind));
  lfm::SpectrumOptions so;
  so.tol = opt.tolerances;
  so.n_max = opt.n_max;
  try {
    s.report["spectrum"] = lfm::io::to_json(lfm::spectrum(s.map, cls, so));
  } catch (const lfm::Error& e) {
    if (e.code() == lfm::ErrorCode::UnsupportedParabolic || e.code() == lfm::ErrorCode::UnsupportedAutomorphism) {
      return unsupported(s, cls, e, opt);
    }
    throw;
  }
  emit(s.report, opt);
  return kOk;
}

int cmd_radius(const Options& opt) {
  auto s = open_session("radius", opt);
  if (!s.validation.ok) return reject(s, opt);
  const auto cls = lfm::classify(s.map, opt.tolerances);
  s.report["kind"] = std::string(lfm::to_string(cls.kind));
  s.report["alpha"] = lfm::io::optional_number(cls.alpha);
  s.report["spectral_radius"] = lfm::spectral_radius(cls, s.map.dim());
  try {
    lfm::EssentialRadiusOptions eo;
    eo.n_max = opt.n_max;
    const auto est = lfm::essential_radius_estimate(s.map, eo, opt.tolerances);
    s.report["essential_radius_estimate"] = lfm::io::to_json(est);
    if (cls.kind == lfm::MapKind::EllipticBoundaryFixed) {
      const double dil = lfm::boundary_dilation(s.map, est.tau);
      s.report["essential_radius_closed_form"] = std::pow(dil, -0.5 * s.map.dim());
    }
  } catch (const lfm::Error& e) {
    if (e.code() != lfm::ErrorCode::NoBoundaryFixedPoint) throw;
    s.report["essential_radius_estimate"] = nullptr;
    s.report["essential_radius_note"] = "map fixes no boundary point";
  }
  emit(s.report, opt);
  return kOk;
}

int cmd_compress(const Options& opt) {
  auto s = open_session("compress", opt);
  if (!s.validation.ok) return reject(s, opt);
  const int degree = opt.degree >= 0 ? opt.degree : default_degree(s.map.dim(), false);
  const auto ev = lfm::compression_spectrum(s.map, degree);
  if (opt.format == "csv") {
    Output out(opt.out);
    lfm::io::write_eigenvalues_csv(out.stream(), ev);
    return kOk;
  }
  s.report["degree"] = degree;
  s.report["size"] = ev.size();
  s.report["eigenvalues"] = lfm::io::to_json(ev);
  emit(s.report, opt);
  return kOk;
}

// Eigenpairs of the degree-D compression, checked against the series
// composition computed at degree 2D: the in-subspace residual and the mass
// of F o phi that leaves the subspace.
int cmd_verify_eigen(const Options& opt) {
  auto s = open_session("verify-eigen", opt);
  if (!s.validation.ok) return reject(s, opt);
  const int n = s.map.dim();
  const int degree = opt.degree >= 0 ? opt.degree : default_degree(n, true);
  const auto comp = lfm::build_compression(s.map, degree);
  Eigen::ComplexEigenSolver<lfm::Mat> solver(comp.matrix, true);
  if (solver.info() != Eigen::Success) throw lfm::Error(lfm::ErrorCode::EigenSolverFailure, "no convergence");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(solver.eigenvalues().size()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(solver.eigenvalues()(a)) > std::abs(solver.eigenvalues()(b));
  });

  lfm::SeriesComposer composer(s.map, 2 * degree);
  const auto& basis = *comp.basis;
  json rows = json::array();
  std::ostringstream csv;
  csv << "lambda_re,lambda_im,residual,leakage\n";
  const std::size_t count = std::min<std::size_t>(order.size(), static_cast<std::size_t>(std::max(0, opt.count)));
  for (std::size_t r = 0; r < count; ++r) {
    const cplx lambda = solver.eigenvalues()(order[r]);
    const lfm::Vec v = solver.eigenvectors().col(order[r]);
    lfm::TruncatedSeries f(n, degree);
    for (std::size_t i = 0; i < basis.size(); ++i) f[i] = v(static_cast<Eigen::Index>(i)) / std::sqrt(basis.norm_sq(i));
    const double fnorm = std::sqrt(f.h2_norm_sq());
    const auto g = composer.compose(f);
    auto low = g.truncated(degree);
    const double total = g.h2_norm_sq();
    const double leak = std::sqrt(std::max(0.0, total - low.h2_norm_sq())) / fnorm;
    low -= f * lambda;
    const double res = std::sqrt(low.h2_norm_sq()) / fnorm;
    json row;
    row["lambda"] = lfm::io::to_json(lambda);
    row["residual"] = res;
    row["leakage"] = leak;
    rows.push_back(row);
    csv << lfm::io::format_number(lambda.real()) << ',' << lfm::io::format_number(lambda.imag()) << ','
        << lfm::io::format_number(res) << ',' << lfm::io::format_number(leak) << '\n';
  }
  if (opt.format == "csv") {
    Output out(opt.out);
    out.stream() << csv.str();
    return kOk;
  }
  s.report["degree"] = degree;
  s.report["eigenpairs"] = rows;
  emit(s.report, opt);
  return kOk;
}

lfm::TruncatedSeries random_polynomial(int n, int degree, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  lfm::TruncatedSeries f(n, degree);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = cplx(gauss(rng), gauss(rng));
  return f;
}

int cmd_norms(const Options& opt) {
  auto s = open_session("norms", opt);
  const int n = s.map.dim();
  const int degree = opt.degree >= 0 ? opt.degree : 30;
  std::mt19937_64 rng(opt.seed);
  json table = json::array();
  for (double nu : opt.nus) {
    const int sidx = static_cast<int>(std::ceil(nu)) + 1;
    const auto eq = lfm::norm_equivalence(nu, sidx, degree);
    json row;
    row["nu"] = nu;
    row["s"] = eq.s;
    row["c"] = eq.c;
    row["interval"] = json::array({eq.lower, eq.upper});
    row["interval_width"] = eq.upper - eq.lower;
    row["asymptote"] = eq.asymptote;
    json ratios = json::array();
    bool inside = true;
    for (int k = 0; k < opt.samples; ++k) {
      const auto f = random_polynomial(n, degree, rng);
      const double ratio = lfm::weighted_norm_sq(f, nu) / lfm::sobolev_norm_sq(f, eq.s, eq.c);
      inside = inside && ratio >= eq.lower * (1 - 1e-12) && ratio <= eq.upper * (1 + 1e-12);
      ratios.push_back(ratio);
    }
    row["sample_ratios"] = ratios;
    row["all_inside"] = inside;
    table.push_back(row);
  }
  s.report["degree"] = degree;
  s.report["norms"] = table;
  emit(s.report, opt);
  return kOk;
}

int cmd_export(const Options& opt) {
  auto s = open_session("export", opt);
  if (!s.validation.ok) return reject(s, opt);
  if (opt.matrix) {
    const int degree = opt.degree >= 0 ? opt.degree : default_degree(s.map.dim(), true);
    const auto comp = lfm::build_compression(s.map, degree);
    if (!opt.header.empty()) {
      Output header(opt.header);
      header.stream() << lfm::io::dump(lfm::io::basis_header(*comp.basis)) << '\n';
    }
    Output out(opt.out);
    lfm::io::write_matrix_csv(out.stream(), comp.matrix);
    return kOk;
  }
  const auto cls = lfm::classify(s.map, opt.tolerances);
  lfm::SpectrumOptions so;
  so.tol = opt.tolerances;
  so.verify_radius = false;
  lfm::SpectralSet set;
  try {
    set = lfm::spectrum(s.map, cls, so);
  } catch (const lfm::Error& e) {
    if (e.code() == lfm::ErrorCode::UnsupportedParabolic || e.code() == lfm::ErrorCode::UnsupportedAutomorphism) {
      return unsupported(s, cls, e, opt);
    }
    throw;
  }
  Output out(opt.out);
  lfm::io::write_cloud_csv(out.stream(), lfm::discretize(set, opt.resolution));
  return kOk;
}

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("map", opt.map_path, "map file (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", opt.out, "write output here instead of stdout");
  sub->add_option("--tol", opt.tol, "self-map tolerance on max |phi| over the sphere")->capture_default_str();
  sub->add_option("--tol-unimodular", opt.tolerances.unimodular, "unit-circle band for eigenvalues")
      ->capture_default_str();
  sub->add_option("--tol-gap", opt.tolerances.gap, "contractive eigenvalues need |lambda| < 1 - gap")
      ->capture_default_str();
  sub->add_option("--tol-boundary", opt.tolerances.boundary, "boundary band for fixed points")->capture_default_str();
  sub->add_option("--rational-q", opt.tolerances.rational_max_order, "largest root-of-unity order")
      ->capture_default_str();
  sub->add_option("--tail", opt.tolerances.tail, "point families are enumerated down to this modulus")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lfmspec: classify linear fractional self-maps of the unit ball and compute composition operator spectra"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options opt;

  auto* validate = app.add_subcommand("validate", "check that the map sends the ball into itself");
  auto* classify = app.add_subcommand("classify", "classify the map and build its normal form");
  auto* spectrum = app.add_subcommand("spectrum", "spectrum of the composition operator as a symbolic set");
  auto* radius = app.add_subcommand("radius", "spectral radius next to the essential radius estimate");
  auto* compress = app.add_subcommand("compress", "eigenvalues of the compression to polynomials of degree <= D");
  auto* verify = app.add_subcommand("verify-eigen", "residuals of compression eigenpairs under series composition");
  auto* norms = app.add_subcommand("norms", "weighted Hardy versus holomorphic Sobolev norm ratios");
  auto* exporter = app.add_subcommand("export", "discretized spectrum or compression matrix as CSV");

  for (auto* sub : {validate, classify, spectrum, radius, compress, verify, norms, exporter}) add_common(sub, opt);
  for (auto* sub : {spectrum, radius}) sub->add_option("--nmax", opt.n_max, "iterations for the radius estimate");
  for (auto* sub : {compress, verify, norms, exporter}) sub->add_option("--degree", opt.degree, "truncation degree D");
  for (auto* sub : {compress, verify}) {
    sub->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  }
  exporter->add_option("--resolution", opt.resolution, "grid resolution for circles, disks and annuli")
      ->check(CLI::PositiveNumber);
  exporter->add_option("--format", opt.format, "csv")->check(CLI::IsMember({"csv"}));
  exporter->add_flag("--matrix", opt.matrix, "export the compression matrix instead of the spectrum cloud");
  exporter->add_option("--header", opt.header, "with --matrix: write the basis ordering as JSON here");
  verify->add_option("--count", opt.count, "number of eigenpairs, largest modulus first");
  norms->add_option("--nu", opt.nus, "weight exponents nu");
  norms->add_option("--samples", opt.samples, "random polynomials per nu");
  norms->add_option("--seed", opt.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*validate) return cmd_validate(opt);
    if (*classify) return cmd_classify(opt);
    if (*spectrum) return cmd_spectrum(opt);
    if (*radius) return cmd_radius(opt);
    if (*compress) return cmd_compress(opt);
    if (*verify) return cmd_verify_eigen(opt);
    if (*norms) return cmd_norms(opt);
    if (*exporter) return cmd_export(opt);
  } catch (const lfm::Error& e) {
    std::cerr << "lfmspec: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "lfmspec: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
