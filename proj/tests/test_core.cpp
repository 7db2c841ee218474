// Copyright 2026 The lfmspec Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "lfm/io.hpp"
#include "test_support.hpp"

using namespace lfm;
using namespace lfm::testing;
using Catch::Approx;

namespace {

// Direct transcription of (Az + B) / (<z, C> + d), entry by entry.
Vec evaluate_by_hand(const Map& m, const Vec& z) {
  const int n = m.dim();
  cplx den = m.d();
  for (int j = 0; j < n; ++j) den += z(j) * std::conj(m.C()(j));
  Vec out(n);
  for (int i = 0; i < n; ++i) {
    cplx num = m.B()(i);
    for (int j = 0; j < n; ++j) num += m.A()(i, j) * z(j);
    out(i) = num / den;
  }
  return out;
}

Mat finite_difference_jacobian(const Map& m, const Vec& z, double h) {
  const int n = m.dim();
  Mat j(n, n);
  for (int k = 0; k < n; ++k) {
    Vec e = Vec::Zero(n);
    e(k) = h;
    j.col(k) = (evaluate(m, z + e) - evaluate(m, z - e)) / (2.0 * h);
  }
  return j;
}

}  // namespace

TEST_CASE("evaluate matches the rational formula", "[core]") {
  SECTION("identity") {
    const Vec z = vec({0.3, cplx(0, 0.4)});
    CHECK((evaluate(Map::identity(2), z) - z).norm() < 1e-15);
  }
  SECTION("z/(2-z) at 1/2 is 1/3") {
    const Map m = disk_map(1, 0, -1, 2);
    CHECK(std::abs(evaluate(m, vec({0.5}))(0) - 1.0 / 3.0) < 1e-15);
  }
  SECTION("((1+z)/2, w/2) fixes (1, 0)") {
    const Map m(Mat::Identity(2, 2), vec({1, 0}), vec({0, 0}), 2.0);
    CHECK((evaluate(m, vec({1, 0})) - vec({1, 0})).norm() < 1e-15);
  }
  SECTION("random maps and points") {
    Random r(11);
    for (int t = 0; t < 50; ++t) {
      const int n = r.integer(1, 4);
      const Map m(r.cmat(n, n), r.cvec(n), 0.2 * r.cvec(n), 3.0 + r.uniform(0, 1));
      const Vec z = r.ball(n, 0.99);
      // the stored map is normalized, so compare against the formula on its own fields
      CHECK((evaluate(m, z) - evaluate_by_hand(m, z)).norm() < 1e-13);
    }
  }
  SECTION("vanishing denominator raises") {
    const Map m = disk_map(0, 1, 1, 0.5);  // 1 / (z + 1/2)
    CHECK_THROWS_AS(evaluate(m, vec({-0.5})), Error);
  }
}

TEST_CASE("normalization makes scalar multiples equal", "[core]") {
  Random r(3);
  const Mat a = r.cmat(2, 2);
  const Vec b = r.cvec(2), c = 0.1 * r.cvec(2);
  const cplx d(2.0, 1.0);
  const Map m1(a, b, c, d);
  const cplx s(-0.7, 3.1);
  const Map m2(s * a, s * b, std::conj(s) * c, s * d);
  CHECK(map_distance(m1, m2) < 1e-14);
  CHECK(m1.d().imag() == 0.0);
  CHECK(m1.d().real() >= 0.0);
  CHECK(m1.matrix().norm() == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("compose is the projective matrix product", "[core]") {
  SECTION("identity is neutral") {
    Random r(5);
    const Map g = random_map(r, Family::HyperbolicOne, 2);
    CHECK(map_distance(compose(Map::identity(2), g), g) < 1e-14);
  }
  SECTION("z/(2-z) composed with itself is z/(4-3z)") {
    const Map f = disk_map(1, 0, -1, 2);
    CHECK(map_distance(compose(f, f), disk_map(1, 0, -3, 4)) < 1e-14);
  }
  SECTION("pointwise agreement and proportional matrices") {
    Random r(17);
    for (int t = 0; t < 20; ++t) {
      const int n = r.integer(1, 3);
      const Map f = random_map(r, Family::EllipticBoundary, n);
      const Map g = random_map(r, Family::HyperbolicOne, n);
      const Map fg = compose(f, g);
      CHECK(projective_residual(fg.matrix(), f.matrix() * g.matrix()) < 1e-10);
      for (int k = 0; k < 5; ++k) {
        const Vec z = r.ball(n, 0.95);
        CHECK((evaluate(fg, z) - evaluate(f, evaluate(g, z))).norm() < 1e-12);
      }
    }
  }
  SECTION("dimension mismatch") {
    CHECK_THROWS_AS(compose(Map::identity(1), Map::identity(2)), Error);
  }
}

TEST_CASE("jacobian agrees with finite differences", "[core]") {
  SECTION("linear maps") {
    const Mat a = diag({0.5, cplx(0, 0.25)});
    CHECK((jacobian(Map::linear(a), vec({0.1, 0.2})) - a).norm() < 1e-15);
  }
  SECTION("z/(2-z) has derivative 2 at 1") {
    const Map m = disk_map(1, 0, -1, 2);
    CHECK(std::abs(jacobian(m, vec({1.0}))(0, 0) - 2.0) < 1e-14);
    CHECK(std::abs(finite_difference_jacobian(m, vec({1.0}), 1e-6)(0, 0) - 2.0) < 1e-6);
  }
  SECTION("random interior points") {
    Random r(23);
    for (int t = 0; t < 50; ++t) {
      const int n = r.integer(1, 3);
      const Map m = random_map(r, t % 2 ? Family::HyperbolicOne : Family::EllipticBoundary, n);
      const Vec z = r.ball(n, 0.9);
      const Mat diff = jacobian(m, z) - finite_difference_jacobian(m, z, 1e-6);
      CHECK(diff.cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("self-map validation", "[core]") {
  SECTION("identity") {
    const auto rep = validate_self_map(Map::identity(2));
    CHECK(rep.ok);
    CHECK(rep.max_modulus == Approx(1.0).margin(1e-12));
  }
  SECTION("z/(2-z) attains 1 at 1") {
    const auto rep = validate_self_map(disk_map(1, 0, -1, 2));
    CHECK(rep.ok);
    CHECK(rep.max_modulus == Approx(1.0).margin(1e-12));
    CHECK(std::abs(rep.witness(0) - 1.0) < 1e-6);
  }
  SECTION("2z is rejected with witness 1") {
    const auto rep = validate_self_map(disk_map(2, 0, 0, 1));
    CHECK_FALSE(rep.ok);
    CHECK(rep.max_modulus == Approx(2.0).margin(1e-12));
    CHECK(std::abs(rep.witness(0) - 1.0) < 1e-15);
  }
  SECTION("a slight excess in one direction of the ball is caught") {
    const Map m = Map::linear(diag({1.0, 1.0 + 1e-6}));
    const auto rep = validate_self_map(m);
    CHECK_FALSE(rep.ok);
    CHECK(rep.max_modulus == Approx(1.0 + 1e-6).margin(1e-10));
  }
  SECTION("hidden excess off the coordinate axes") {
    // (z + w) t with t slightly above 1/sqrt(2): the maximum sits at (1, 1)/sqrt(2)
    const double t = 1.0 / std::sqrt(2.0) + 1e-6;
    Mat a(2, 2);
    a << t, t, 0, 0;
    const auto rep = validate_self_map(Map::linear(a));
    CHECK_FALSE(rep.ok);
    CHECK(rep.max_modulus == Approx(std::sqrt(2.0) * t).margin(1e-10));
  }
  SECTION("denominator vanishing inside the closed ball") {
    const auto rep = validate_self_map(disk_map(0, 1, 1, 0.5));
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.denominator_ok);
    CHECK(std::abs(rep.witness(0) + 0.5) < 1e-14);
  }
  SECTION("constant maps inside the ball are accepted") {
    CHECK(validate_self_map(Map(Mat::Zero(2, 2), vec({0.3, 0.1}), vec({0, 0}), 1.0)).ok);
  }
}

TEST_CASE("automorphisms", "[core]") {
  CHECK(is_automorphism(Map::identity(3)));
  CHECK_FALSE(is_automorphism(disk_map(1, 0, -1, 2)));
  CHECK(is_automorphism(disk_map(1, 0.5, 0.5, 1)));
  CHECK_FALSE(is_automorphism(Map::linear(diag({1, 0.5}))));

  Random r(29);
  SECTION("ball automorphism to the origin") {
    CHECK(map_distance(ball_automorphism_to_origin(Vec::Zero(2)), Map::linear(-Mat::Identity(2, 2))) < 1e-15);
    for (int t = 0; t < 20; ++t) {
      const int n = r.integer(1, 4);
      const Vec a = r.ball(n, 0.95);
      const Map phi = ball_automorphism_to_origin(a);
      CHECK(evaluate(phi, a).norm() < 1e-12);
      CHECK((evaluate(phi, Vec::Zero(n)) - a).norm() < 1e-12);
      CHECK(is_automorphism(phi));
      CHECK(map_distance(compose(phi, phi), Map::identity(n)) < 1e-12);
      const Vec zeta = r.sphere(n);
      CHECK(evaluate(phi, zeta).norm() == Approx(1.0).margin(1e-12));
    }
    CHECK_THROWS_AS(ball_automorphism_to_origin(vec({1.0, 0.0})), Error);
  }
  SECTION("unitary with a prescribed first column") {
    for (int t = 0; t < 20; ++t) {
      const int n = r.integer(1, 4);
      const Vec v = r.cvec(n);
      const Mat u = unitary_with_first_column(v);
      CHECK((u.adjoint() * u - Mat::Identity(n, n)).norm() < 1e-13);
      CHECK((u.col(0) - v.normalized()).norm() < 1e-13);
    }
  }
}

TEST_CASE("fixed points", "[core]") {
  SECTION("identity reports a fixed slice") {
    const auto fps = fixed_points(Map::identity(2));
    CHECK(fps.fixed_slice);
    CHECK(fps.slice_dimension == 2);
  }
  SECTION("z/(2-z): 0 interior, 1 boundary with dilation 2") {
    const auto fps = fixed_points(disk_map(1, 0, -1, 2));
    REQUIRE(fps.interior().size() == 1);
    REQUIRE(fps.boundary().size() == 1);
    CHECK(std::abs(fps.interior()[0].location(0)) < 1e-14);
    CHECK(std::abs(fps.boundary()[0].location(0) - 1.0) < 1e-12);
    CHECK(*fps.boundary()[0].dilation == Approx(2.0).epsilon(1e-12));
  }
  SECTION("((1+z)/2, w/2): boundary point (1, 0) with dilation 1/2 and a point at infinity") {
    const Map m(Mat::Identity(2, 2), vec({1, 0}), vec({0, 0}), 2.0);
    const auto fps = fixed_points(m);
    REQUIRE(fps.boundary().size() == 1);
    CHECK((fps.boundary()[0].location - vec({1, 0})).norm() < 1e-12);
    CHECK(*fps.boundary()[0].dilation == Approx(0.5).epsilon(1e-12));
    CHECK(fps.interior().empty());
    CHECK_FALSE(fps.at_infinity.empty());
  }
  SECTION("every reported point is fixed") {
    Random r(31);
    for (auto f : {Family::EllipticBoundary, Family::HyperbolicOne, Family::HyperbolicTwo, Family::EllipticInterior}) {
      for (int t = 0; t < 8; ++t) {
        const int n = r.integer(2, 3);
        const Map m = random_map(r, f, n);
        for (const auto& p : fixed_points(m).points) {
          CHECK((evaluate(m, p.location) - p.location).norm() < 1e-9 * std::max(1.0, p.location.norm()));
        }
      }
    }
  }
}

TEST_CASE("Denjoy-Wolff point", "[core]") {
  SECTION("((1+z)/2, w/2)") {
    const Map m(Mat::Identity(2, 2), vec({1, 0}), vec({0, 0}), 2.0);
    const auto dw = denjoy_wolff(m);
    CHECK((dw.point.location - vec({1, 0})).norm() < 1e-12);
    CHECK(dw.alpha == Approx(0.5).epsilon(1e-12));
  }
  SECTION("(1+z)/2") {
    const auto dw = denjoy_wolff(disk_map(1, 1, 0, 2));
    CHECK(std::abs(dw.point.location(0) - 1.0) < 1e-12);
    CHECK(dw.alpha == Approx(0.5).epsilon(1e-12));
  }
  SECTION("Cayley pullback of a translation is parabolic at 1") {
    const Map m = pull_back(half_plane(1.0, 1.0, Vec(0), Mat(0, 0), Vec(0)));
    CHECK(map_distance(m, disk_map(1, 1, -1, 3)) < 1e-14);
    const auto dw = denjoy_wolff(m);
    CHECK(std::abs(dw.point.location(0) - 1.0) < 1e-6);
    CHECK(dw.alpha == Approx(1.0).margin(1e-8));
  }
  SECTION("elliptic maps raise") {
    CHECK_THROWS_AS(denjoy_wolff(disk_map(1, 0, -1, 2)), Error);
  }
  SECTION("unique qualifying boundary point, radial quotient agrees") {
    Random r(37);
    for (auto f : {Family::HyperbolicOne, Family::HyperbolicTwo}) {
      for (int t = 0; t < 10; ++t) {
        const Map m = random_map(r, f, r.integer(2, 3));
        const auto fps = fixed_points(m);
        int qualifying = 0;
        for (const auto& p : fps.boundary()) qualifying += *p.dilation <= 1.0 + 1e-8 ? 1 : 0;
        CHECK(qualifying == 1);
        const auto dw = denjoy_wolff(m);
        CHECK(std::abs(radial_dilation(m, dw.point.location, 1e-6) - dw.alpha) < 1e-4);
      }
    }
  }
}

TEST_CASE("conjugation to the Siegel half-plane", "[core]") {
  SECTION("(1+z)/2 becomes a real translation followed by dilation") {
    const Map m = disk_map(1, 1, 0, 2);
    const auto conj = conjugate_to_halfplane(m, vec({1.0}));
    CHECK(conj.psi.alpha == Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(conj.psi.c.imag()) < 1e-12);
    CHECK(conj.psi.c.real() > 0.0);
    // psi o cayley = cayley o phi at sample points
    Random r(2);
    for (int k = 0; k < 20; ++k) {
      const Vec z = r.ball(1, 0.95);
      CHECK((conj.psi.evaluate(cayley(z)) - cayley(evaluate(m, z))).norm() < 1e-10 * (1 + cayley(z).norm()));
    }
  }
  SECTION("round trip reproduces the map") {
    Random r(41);
    for (auto f : {Family::HyperbolicOne, Family::HyperbolicTwo}) {
      for (int t = 0; t < 10; ++t) {
        const int n = r.integer(2, 3);
        const Map m = random_map(r, f, n);
        const auto conj = conjugate_to_halfplane(m, denjoy_wolff(m).point.location);
        const Map back = conj.pull_back(conj.psi);
        for (int k = 0; k < 5; ++k) {
          const Vec z = r.ball(n, 0.95);
          CHECK((evaluate(back, z) - evaluate(m, z)).norm() < 1e-10);
        }
        CHECK(conj.psi.alpha * conj.psi.c.real() >= conj.psi.d.squaredNorm() - 1e-10);
        CHECK(conj.psi.block_norm() <= std::sqrt(conj.psi.alpha) + 1e-10);
      }
    }
  }
  SECTION("planted two-fixed block is recovered") {
    const Map m = pull_back(half_plane(0.5, 0.0, Vec::Zero(1), Mat::Constant(1, 1, 0.8 * std::sqrt(0.5)), Vec::Zero(1)));
    const auto conj = conjugate_to_halfplane(m, denjoy_wolff(m).point.location);
    CHECK(conj.psi.alpha == Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(conj.psi.A(0, 0) - 0.8 * std::sqrt(0.5)) < 1e-9);
  }
  SECTION("a repelling boundary point is refused") {
    CHECK_THROWS_AS(conjugate_to_halfplane(disk_map(1, 0, -1, 2), vec({1.0})), Error);
  }
}

TEST_CASE("map JSON round trip and malformed input", "[core]") {
  Random r(43);
  const Map m = random_map(r, Family::HyperbolicOne, 3);
  const std::string text = io::dump(io::to_json(m));
  const Map back = io::parse_map(text);
  CHECK(map_distance(m, back) < 1e-15);
  CHECK(io::dump(io::to_json(back)) == text);

  try {
    io::parse_map("{\"N\": 1, \"A\": [[[1, 0]]],, }");
    FAIL("parse should fail");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedInput);
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
  CHECK_THROWS_AS(io::parse_map("{\"N\": 2, \"A\": [[[1, 0]]], \"B\": [], \"C\": [], \"d\": [1, 0]}"), Error);
  CHECK(io::format_number(0.1) == "0.10000000000000001");
}
