// Copyright 2026 The lfmspec Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "test_support.hpp"

using namespace lfm;
using namespace lfm::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "failed: ";
      else detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

template <typename T>
std::vector<T> components_of(const SpectralSet& s) {
  std::vector<T> out;
  for (const auto& c : s.components) {
    if (const auto* p = std::get_if<T>(&c)) out.push_back(*p);
  }
  return out;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// C1 -------------------------------------------------------------------------

void disk_table(Outcome& out) {
  // z/(2-z): phi'(1) = 2, disk of radius 2^{-1/2} together with 1
  {
    const Map m = disk_map(1, 0, -1, 2);
    const auto cls = classify(m);
    out.require(cls.kind == MapKind::EllipticBoundaryFixed, "z/(2-z) kind");
    SpectrumOptions so;
    so.n_max = 20;
    const auto s = spectrum(m, cls, so);
    const auto disks = components_of<ClosedDisk>(s);
    out.require(disks.size() == 1 && near(disks[0].radius, std::sqrt(0.5), 1e-9), "z/(2-z) disk radius");
    out.require(contains(s, cplx(1.0), 1e-12), "z/(2-z) contains 1");
    out.require(!contains(s, cplx(0.75), 1e-6), "z/(2-z) excludes 0.75");
    const double est = *s.essential_radius_estimate;
    out.require(std::abs(est - std::sqrt(0.5)) <= 0.05 * std::sqrt(0.5), "estimator within 5%");
    out.detail << "z/(2-z): disk " << fmt(disks.empty() ? -1 : disks[0].radius) << " + {1}, estimate "
               << fmt(est) << "; ";
  }
  // (1+z)/2: phi'(1) = 1/2, disk of radius sqrt 2
  {
    const auto s = spectrum(disk_map(1, 1, 0, 2));
    const auto disks = components_of<ClosedDisk>(s);
    out.require(s.components.size() == 1 && disks.size() == 1 && near(disks[0].radius, std::sqrt(2.0), 1e-9),
                "(1+z)/2 disk radius");
    out.detail << "(1+z)/2: disk " << fmt(disks.empty() ? -1 : disks[0].radius) << "; ";
  }
  // z/(2-z) after a rotation: interior fixed point only, {0, 1} and powers of phi'(0)
  int checked = 0;
  for (double theta : {0.9, 2.0, 2 * kPi * (std::sqrt(5.0) - 2)}) {
    const cplx u = std::polar(1.0, theta);
    const Map m = compose(disk_map(1, 0, -1, 2), disk_map(u, 0, 0, 1));
    const auto cls = classify(m);
    out.require(cls.kind == MapKind::EllipticInteriorOnly, "rotated kind");
    const auto s = spectrum(m, cls);
    const cplx lambda = u / 2.0;
    out.require(contains(s, cplx(0.0), 1e-12) && contains(s, cplx(1.0), 1e-12), "rotated contains 0 and 1");
    for (int k = 1; k <= 30; ++k) out.require(contains(s, std::pow(lambda, k), 1e-12), "rotated power");
    out.require(components_of<ClosedDisk>(s).empty() && components_of<Circle>(s).empty(), "rotated is discrete");
    for (const auto& fam : components_of<PointFamily>(s)) {
      for (cplx v : fam.values) {
        const double k = std::round(std::log(std::abs(v)) / std::log(0.5));
        out.require(std::abs(v - std::pow(lambda, k)) < 1e-12 * std::max(1.0, std::abs(v)) + 1e-15,
                    "rotated family value is a power");
        ++checked;
      }
    }
  }
  out.detail << "rotated: " << checked << " family values are powers of phi'(0)";
}

// C2 -------------------------------------------------------------------------

void compression_oracle(Outcome& out) {
  const Map m = Map::linear(diag({0.5, 1.0 / 3}));
  const auto ev = compression_spectrum(m, 6);
  std::vector<cplx> products;
  for (int j = 0; j <= 6; ++j) {
    for (int k = 0; j + k <= 6; ++k) products.push_back(std::pow(2.0, -j) * std::pow(3.0, -k));
  }
  out.require(same_multiset(ev, products, 1e-8), "compression multiset");
  const auto s = spectrum(m);
  for (cplx p : products) out.require(contains(s, p, 1e-10), "product in the spectral family");
  // the family restricted to |gamma| <= 6 is exactly the products above
  std::size_t in_family = 0;
  for (const auto& fam : components_of<PointFamily>(s)) {
    for (cplx v : fam.values) {
      for (cplx p : products) {
        if (std::abs(v - p) < 1e-12 && std::abs(p - 1.0) > 1e-12) {
          ++in_family;
          break;
        }
      }
    }
  }
  out.require(in_family == products.size() - 1, "family truncation matches");
  out.detail << ev.size() << " eigenvalues matched " << products.size() << " products";
}

// C3 -------------------------------------------------------------------------

void rotation_eigenfunctions(Outcome& out) {
  const double theta = 2 * kPi * (std::sqrt(2.0) - 1);
  const Map psi = Map::linear(diag({std::polar(1.0, theta), 0.5}));
  SeriesComposer comp(psi, 20);
  double worst = 0.0;
  for (int b = 0; b <= 6; ++b) {
    for (int g = 0; b + g <= 6; ++g) {
      const auto f = TruncatedSeries::monomial(2, 20, MultiIndex{b, g});
      worst = std::max(worst, eigenfunction_residual(comp, f, std::polar(std::pow(0.5, g), b * theta)));
    }
  }
  out.require(worst < 1e-12, "monomial residual " + fmt(worst));
  const auto s = spectrum(psi);
  std::vector<double> radii;
  for (const auto& c : components_of<Circle>(s)) radii.push_back(c.radius);
  for (int g = 0; g <= 30; ++g) {
    bool found = false;
    for (double r : radii) found = found || near(r, std::pow(0.5, g), 1e-12);
    out.require(found, "circle of radius 2^-" + std::to_string(g));
  }
  double off = 0.0;
  const auto ev = compression_spectrum(psi, 12);
  for (cplx v : ev) {
    double best = 1.0;
    for (double r : radii) best = std::min(best, std::abs(std::abs(v) - r));
    off = std::max(off, best);
  }
  out.require(off < 1e-8, "compression eigenvalue off the circles by " + fmt(off));
  out.detail << "max residual " << fmt(worst) << ", " << radii.size() << " circles, " << ev.size()
             << " compression eigenvalues within " << fmt(off);
}

// C4 -------------------------------------------------------------------------

void hyperbolic_disk(Outcome& out) {
  const Map m(Mat::Identity(2, 2), vec({1, 0}), vec({0, 0}), 2.0);
  const auto cls = classify(m);
  const auto s = spectrum(m, cls);
  const double radius = spectral_radius(cls, 2);
  out.require(radius == 2.0, "spectral radius " + fmt(radius));
  SeriesComposer comp(m, 60);

  // 20 exponents with Re s > -1/2 placed so |lambda| = 2^{-Re s} is spread over (0, sqrt 2),
  // then 10 with -1 < Re s <= -1/2 (still in the Hardy space of B_2) reaching up to 2.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> im(-2.0, 2.0);
  std::vector<cplx> exps;
  for (int i = 0; i < 20; ++i) exps.emplace_back(-std::log2(std::sqrt(2.0) * (i + 0.5) / 20.0), im(rng));
  for (int i = 0; i < 10; ++i) exps.emplace_back(-0.5 - 0.49 * (i + 0.5) / 10.0, im(rng));

  double worst = 0.0, lo = 2.0, hi = 0.0;
  std::vector<double> moduli;
  for (cplx e : exps) {
    const auto f = TruncatedSeries::one_minus_power(2, 400, 0, e);
    const cplx lambda = std::pow(2.0, -e);
    worst = std::max(worst, eigenfunction_residual(comp, f, lambda));
    out.require(contains(s, lambda, 1e-12), "contains lambda");
    moduli.push_back(std::abs(lambda));
  }
  std::sort(moduli.begin(), moduli.end());
  lo = moduli.front();
  hi = moduli.back();
  double gap = lo;
  for (std::size_t i = 1; i < moduli.size(); ++i) gap = std::max(gap, moduli[i] - moduli[i - 1]);
  gap = std::max(gap, 2.0 - hi);
  out.require(worst < 1e-9, "residual " + fmt(worst));
  out.require(gap < 0.1, "|lambda| sweep leaves a gap of " + fmt(gap));

  const auto est = essential_radius_estimate(m);
  out.require(std::abs(est.limit - 2.0) <= 0.1, "estimate " + fmt(est.limit));
  out.detail << "max residual " << fmt(worst) << " over " << exps.size() << " exponents, |lambda| in [" << fmt(lo)
             << ", " << fmt(hi) << "] with largest gap " << fmt(gap) << ", radius " << radius << ", estimate "
             << fmt(est.limit);
}

// C5 -------------------------------------------------------------------------

bool annulus_family_contains(double modulus, double a_mod, double tol) {
  if (modulus <= tol) return true;
  for (int b = 0; b < 2000; ++b) {
    const double f = std::pow(a_mod, b);
    if (2.0 * f + tol < modulus) return false;
    if (modulus >= 0.5 * f - tol && modulus <= 2.0 * f + tol) return true;
  }
  return false;
}

void plant_and_recover(Outcome& out) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (cplx a : {cplx(0.8), std::polar(0.5, kPi / 3)}) {
    // (zeta, omega) -> (2 zeta, sqrt 2 a omega) on the Siegel half-plane
    const Map m = pull_back(half_plane(0.5, 0.0, Vec::Zero(1), Mat::Constant(1, 1, a * std::sqrt(0.5)), Vec::Zero(1)));
    const auto cls = classify(m);
    out.require(cls.kind == MapKind::HyperbolicTwoFixed, "kind");
    out.require(near(*cls.alpha, 0.5, 1e-9), "alpha " + fmt(*cls.alpha));
    out.require(cls.eigenvalues.size() == 1 && std::abs(cls.eigenvalues[0] - a) < 1e-9, "recovered eigenvalue");
    const auto s = spectrum(m, cls);
    out.require(s.closure && contains(s, cplx(0.0), 0.0), "closure with 0");
    const auto annuli = components_of<Annulus>(s);
    for (std::size_t b = 0; b < std::min<std::size_t>(annuli.size(), 20); ++b) {
      const double f = std::pow(std::abs(a), static_cast<double>(b));
      out.require(near(annuli[b].r_in, 0.5 * f, 1e-9 * f) && near(annuli[b].r_out, 2.0 * f, 1e-9 * f),
                  "annulus " + std::to_string(b));
    }
    int disagreements = 0;
    for (int k = 0; k < 1000; ++k) {
      const cplx probe = std::polar(3.0 * unif(rng), 2 * kPi * unif(rng));
      if (contains(s, probe, 1e-8) != annulus_family_contains(std::abs(probe), std::abs(a), 1e-8)) ++disagreements;
    }
    out.require(disagreements == 0, std::to_string(disagreements) + " probe disagreements");
    out.detail << "a=" << fmt(a.real()) << (a.imag() != 0 ? "+" + fmt(a.imag()) + "i" : "") << ": alpha err "
               << fmt(std::abs(*cls.alpha - 0.5)) << ", eigenvalue err " << fmt(std::abs(cls.eigenvalues[0] - a))
               << ", " << annuli.size() << " annuli; ";
  }
  out.detail << "1000 probes each";
}

// C6 -------------------------------------------------------------------------

void conjugation_invariance(Outcome& out) {
  Random r(6);
  const Family families[] = {Family::EllipticUnitaryPart, Family::EllipticInterior, Family::EllipticBoundary,
                             Family::HyperbolicOne, Family::HyperbolicTwo};
  SpectrumOptions so;
  so.verify_radius = false;
  int comparisons = 0;
  for (int i = 0; i < 50; ++i) {
    const Family f = families[i % 5];
    const bool needs_two = f == Family::EllipticUnitaryPart || f == Family::HyperbolicTwo;
    const int n = r.integer(needs_two ? 2 : 1, 3);
    const Map m = random_map(r, f, n);
    const auto base = classify(m);
    const auto base_set = spectrum(m, base, so);
    for (int k = 0; k < 5; ++k) {
      const Map conj = conjugate(m, r.automorphism(n, 0.7));
      const auto cls = classify(conj);
      const std::string tag = std::string(family_name(f)) + " #" + std::to_string(i);
      out.require(cls.kind == base.kind, tag + " kind");
      out.require(cls.unitary_index == base.unitary_index, tag + " p");
      if (base.alpha) out.require(cls.alpha && near(*cls.alpha, *base.alpha, 1e-8), tag + " alpha");
      out.require(mutually_contained(base_set, spectrum(conj, cls, so), 8, 1e-8), tag + " spectrum");
      ++comparisons;
    }
  }
  out.detail << comparisons << " conjugates agree in kind, alpha, p and spectrum";
}

// C7 -------------------------------------------------------------------------

void norm_equivalence_check(Outcome& out) {
  Random r(7);
  for (double nu : {-1.0, -0.5, 0.0}) {
    const int s = static_cast<int>(std::ceil(nu)) + 1;
    const auto eq = norm_equivalence(nu, s, 30);
    double lo = 1e300, hi = 0.0;
    for (int t = 0; t < 60; ++t) {
      const int n = r.integer(1, 3);
      const int d = r.integer(1, 30);
      TruncatedSeries f(n, d);
      const int terms = r.integer(1, 25);
      for (int k = 0; k < terms; ++k) f[static_cast<std::size_t>(r.integer(0, static_cast<int>(f.size()) - 1))] += r.cgauss();
      if (f.h2_norm_sq() == 0.0) continue;
      const double ratio = weighted_norm_sq(f, nu) / sobolev_norm_sq(f, s, eq.c);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    out.require(lo >= eq.lower * (1 - 1e-12) && hi <= eq.upper * (1 + 1e-12), "nu=" + fmt(nu) + " ratio outside");
    out.detail << "nu=" << fmt(nu) << " s=" << s << " c=" << fmt(eq.c) << ": interval [" << fmt(eq.lower) << ", "
               << fmt(eq.upper) << "] width " << fmt(eq.upper - eq.lower) << ", observed [" << fmt(lo) << ", "
               << fmt(hi) << "]; ";
  }
}

// C8 -------------------------------------------------------------------------

void negative_controls(Outcome& out) {
  const auto rep = validate_self_map(disk_map(2, 0, 0, 1));
  out.require(!rep.ok, "2z accepted");
  out.require(rep.witness.size() == 1 && near(std::abs(rep.witness(0)), 1.0, 1e-12) &&
                  near(std::abs(evaluate(disk_map(2, 0, 0, 1), rep.witness)(0)), 2.0, 1e-12),
              "2z witness");
  out.detail << "2z rejected, |phi(witness)| = " << fmt(rep.max_modulus) << "; ";
  for (int n : {1, 2}) {
    const Map m = pull_back(half_plane(1.0, 1.0, Vec::Zero(n - 1), Mat::Identity(n - 1, n - 1), Vec::Zero(n - 1)));
    const auto cls = classify(m);
    out.require(cls.kind == MapKind::Parabolic, "translation not parabolic");
    out.require(cls.alpha && near(*cls.alpha, 1.0, 1e-8), "alpha");
    bool refused = false;
    try {
      spectrum(m, cls);
    } catch (const Error& e) {
      refused = e.code() == ErrorCode::UnsupportedParabolic &&
                std::string(e.what()).find("spectral radius = 1") != std::string::npos;
    }
    out.require(refused, "parabolic spectrum not refused");
    out.require(near(spectral_radius(cls, n), 1.0, 1e-7), "parabolic radius");
    out.detail << "N=" << n << " translation parabolic, alpha-1 = " << fmt(*cls.alpha - 1.0) << ", refused; ";
  }
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
    double budget_s;
  };
  const Criterion criteria[] = {
      {"C1 one-variable case table", disk_table, 10.0},
      {"C2 compression spectrum of (z/2, w/3)", compression_oracle, 5.0},
      {"C3 rotation eigenfunctions and circles", rotation_eigenfunctions, 0.0},
      {"C4 hyperbolic disk via eigenfunctions", hyperbolic_disk, 0.0},
      {"C5 planted two-fixed map", plant_and_recover, 0.0},
      {"C6 conjugation invariance", conjugation_invariance, 120.0},
      {"C7 weighted and Sobolev norm equivalence", norm_equivalence_check, 0.0},
      {"C8 negative controls", negative_controls, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0) out.require(secs < c.budget_s, "took " + fmt(secs) + " s");
    std::string detail = out.detail.str();
    while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
    std::printf("%s %s (%.2f s): %s\n", out.pass ? "PASS" : "FAIL", c.name, secs, detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
