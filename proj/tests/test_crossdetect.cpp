#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "braidtrack/crossdetect.hpp"
#include "braidtrack/poly.hpp"

using namespace braidtrack;

namespace {

const double kTwoPi = 6.283185307179586476925286766559;

// Vertices of the unit-circle triangle loop; traversal starts at the vertex
// with angle 0.2 so the first crossing is the upper one.
Complex tri(int j) { return std::polar(1.0, kTwoPi * j / 3.0 + 0.2); }

struct LoopScan {
  std::vector<Crossing> crossings;
  Fiber end;
};

LoopScan scan_loop(const BivariatePoly& f, const std::vector<Complex>& vertices,
                   const TrackOptions& topts, const CrossOptions& copts) {
  LoopScan out;
  Fiber fiber = initial_fiber(f, vertices.front(), topts);
  for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
    Segment seg{vertices[k], vertices[k + 1]};
    auto det = detect_crossings(f, seg, fiber, topts, copts);
    for (auto& c : det.crossings) {
      c.segment = static_cast<int>(k);
      out.crossings.push_back(c);
    }
    fiber = det.end;
  }
  out.end = fiber;
  return out;
}

}  // namespace

TEST_CASE("triangle loop of the cubic yields the alternating word") {
  auto f = parse_poly("z^3 - t^2");
  TrackOptions topts;
  CrossOptions copts;
  std::vector<Complex> loop = {tri(3), tri(1), tri(2), tri(3)};
  auto scan = scan_loop(f, loop, topts, copts);
  REQUIRE(scan.crossings.size() == 4);

  // indices and signs: s2 s1 s2 s1, all positive
  CHECK(scan.crossings[0].index == 2);
  CHECK(scan.crossings[1].index == 1);
  CHECK(scan.crossings[2].index == 2);
  CHECK(scan.crossings[3].index == 1);
  for (const auto& c : scan.crossings) CHECK(c.sign == 1);

  // crossing parameter values, in loop order, match the printed moduli
  double expected[] = {0.527, 0.510, 0.667, 0.755};
  for (int k = 0; k < 4; ++k)
    CHECK(std::abs(std::abs(scan.crossings[static_cast<std::size_t>(k)].t) - expected[k]) <
          5e-2);
  // first crossing is on the imaginary axis, third on the negative
  // imaginary axis, second on the negative real axis, fourth positive real
  CHECK(std::abs(scan.crossings[0].t.real()) < 1e-6);
  CHECK(scan.crossings[0].t.imag() > 0);
  CHECK(scan.crossings[1].t.real() < 0);
  CHECK(std::abs(scan.crossings[1].t.imag()) < 1e-6);
  CHECK(std::abs(scan.crossings[2].t.real()) < 1e-6);
  CHECK(scan.crossings[2].t.imag() < 0);
  CHECK(scan.crossings[3].t.real() > 0);
  CHECK(std::abs(scan.crossings[3].t.imag()) < 1e-6);

  // crossed fibers, in incoming order, to the printed 3-digit accuracy
  const std::vector<std::vector<Complex>> fibers = {
      {{-0.652, 0}, {0.326, -0.565}, {0.326, 0.565}},
      {{-0.319, -0.552}, {-0.319, 0.552}, {0.638, 0}},
      {{-0.763, 0}, {0.381, -0.661}, {0.381, 0.661}},
      {{-0.414, -0.718}, {-0.414, 0.718}, {0.829, 0}}};
  for (int k = 0; k < 4; ++k)
    for (int p = 0; p < 3; ++p)
      CHECK(std::abs(scan.crossings[static_cast<std::size_t>(k)]
                         .pre_fiber.points[static_cast<std::size_t>(p)] -
                     fibers[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)]) < 2e-3);
}

TEST_CASE("one strand never crosses") {
  auto f = parse_poly("z - t");
  TrackOptions topts;
  CrossOptions copts;
  Fiber start = initial_fiber(f, Complex(2, 0.3), topts);
  auto det = detect_crossings(f, Segment{Complex(2, 0.3), Complex(-1, -1)}, start, topts, copts);
  CHECK(det.crossings.empty());
}

TEST_CASE("reversal flips signs and order") {
  auto f = parse_poly("z^3 - t^2");
  TrackOptions topts;
  CrossOptions copts;
  Segment seg{tri(3), tri(1)};
  Fiber start = initial_fiber(f, seg.start, topts);
  auto fwd = detect_crossings(f, seg, start, topts, copts);
  REQUIRE(fwd.crossings.size() == 1);
  auto back = detect_crossings(f, seg.reversed(), fwd.end, topts, copts);
  REQUIRE(back.crossings.size() == 1);
  CHECK(back.crossings[0].index == fwd.crossings[0].index);
  CHECK(back.crossings[0].sign == -fwd.crossings[0].sign);
  CHECK(std::abs(back.crossings[0].s - (1 - fwd.crossings[0].s)) < 1e-7);
  for (int k = 0; k < start.size(); ++k)
    CHECK(std::abs(back.end.points[static_cast<std::size_t>(k)] -
                   start.points[static_cast<std::size_t>(k)]) < 1e-7);
}

TEST_CASE("classify_crossing applies the imaginary-part rule") {
  CrossOptions copts;
  Fiber fib;
  fib.points = {Complex(0.3, -0.5), Complex(0.3, 0.5), Complex(5, 0)};
  CHECK(classify_crossing(fib, 1, copts) == 1);
  Fiber swapped;
  swapped.points = {Complex(0.3, 0.5), Complex(0.3, -0.5), Complex(5, 0)};
  CHECK(classify_crossing(swapped, 1, copts) == -1);
  Fiber collide;
  collide.points = {Complex(0.3, 0.5), Complex(0.3, 0.5)};
  CHECK_THROWS(classify_crossing(collide, 1, copts));
}

TEST_CASE("check_proper counts shared real parts") {
  std::vector<Complex> pts = {Complex(1, 1), Complex(1, -1), Complex(5, 0)};
  CHECK(check_proper(pts, 1.0, 1e-7) == 2);
  std::vector<Complex> improper = {Complex(1, 1), Complex(1, 0), Complex(1, -1)};
  CHECK(check_proper(improper, 1.0, 1e-7) == 3);
  CHECK(check_proper({}, 1.0, 1e-7) == 0);
}

TEST_CASE("detected crossings satisfy the defining system") {
  auto f = parse_poly("z^3 - t^2");
  TrackOptions topts;
  CrossOptions copts;
  std::vector<Complex> loop = {tri(3), tri(1), tri(2), tri(3)};
  auto scan = scan_loop(f, loop, topts, copts);
  for (const auto& c : scan.crossings) CHECK(c.residual < 1e-6);
}

TEST_CASE("residual symmetry for real coefficients") {
  auto f = parse_poly("z^3 - t^2");
  Segment seg{Complex(1, 0), Complex(-1, 0)};
  auto res = cross_system_residual(f, seg, 0.25, 0.4, 0.3, -0.2);
  // g is f for real coefficients, so residual 2 conjugates residual 1.
  CHECK(std::abs(res[1] - std::conj(res[0])) < 1e-12);
  // Equal heights duplicate the second pair of equations.
  auto dup = cross_system_residual(f, seg, 0.25, 0.4, 0.3, 0.3);
  CHECK(dup[2] == dup[0]);
  CHECK(dup[3] == dup[1]);
}

TEST_CASE("regularize_lambda stream") {
  CrossOptions copts;
  copts.rng_seed = 7;
  CHECK(regularize_lambda(copts, 0) == Complex(1, 0));
  Complex l1 = regularize_lambda(copts, 1);
  CHECK(std::abs(std::abs(l1) - 1.0) < 1e-12);
  CHECK(regularize_lambda(copts, 1) == l1);
  CHECK(regularize_lambda(copts, 2) != l1);
  CHECK_THROWS_AS(regularize_lambda(copts, copts.lambda_retries + 1), LambdaExhaustedError);
}

TEST_CASE("collinear strands of a reducible curve are improper") {
  // (z-t)(z-2t)(z-3t): all three strands share a real part whenever t is
  // purely imaginary, for every rotation of z.
  auto f = parse_poly("(z-t)*(z-2*t)*(z-3*t)");
  TrackOptions topts;
  CrossOptions copts;
  // A segment crossing the imaginary axis away from the origin.
  Segment seg{Complex(1, 1), Complex(-1, 1)};
  Fiber start = initial_fiber(f, seg.start, topts);
  CHECK_THROWS_AS(detect_crossings(f, seg, start, topts, copts), ImproperCrossingError);
  // The same stays improper under rotation.
  Complex lam = regularize_lambda(copts, 1);
  auto fl = scale_z(f, lam);
  Fiber start2 = initial_fiber(fl, seg.start, topts);
  CHECK_THROWS_AS(detect_crossings(fl, seg, start2, topts, copts), ImproperCrossingError);
}

TEST_CASE("loop crossing parity matches the permutation parity") {
  auto f = parse_poly("z^3 - t^2*(1-t)");
  TrackOptions topts;
  CrossOptions copts;
  // Square loop around both branch points.
  std::vector<Complex> loop = {Complex(3, 0.4), Complex(0.5, 3), Complex(-2, 0.3),
                               Complex(0.4, -3), Complex(3, 0.4)};
  auto scan = scan_loop(f, loop, topts, copts);
  Fiber start = initial_fiber(f, loop.front(), topts);
  // Parity of the permutation: compose the crossings as transpositions.
  std::vector<int> perm = {0, 1, 2};
  for (const auto& c : scan.crossings) std::swap(perm[c.index - 1], perm[c.index]);
  int inversions = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (perm[i] > perm[j]) ++inversions;
  CHECK((scan.crossings.size() % 2) == (inversions % 2));
}

TEST_CASE("simultaneous distant crossings come out in ascending index order") {
  // The even quartic crosses its two outer pairs at the same parameter by
  // symmetry.
  auto f = parse_poly("z^4 - 4*z^2 + 3 + t");
  TrackOptions topts;
  CrossOptions copts;
  std::vector<Complex> loop;
  const int sides = 8;
  for (int k = 0; k <= sides; ++k)
    loop.push_back(Complex(1, 0) + std::polar(0.6, 0.35 + kTwoPi * k / sides));
  auto scan = scan_loop(f, loop, topts, copts);
  REQUIRE(scan.crossings.size() >= 2);
  bool found_pair = false;
  for (std::size_t k = 0; k + 1 < scan.crossings.size(); ++k) {
    if (std::abs(scan.crossings[k].s - scan.crossings[k + 1].s) < 1e-7 &&
        scan.crossings[k].segment == scan.crossings[k + 1].segment) {
      CHECK(scan.crossings[k].index < scan.crossings[k + 1].index);
      CHECK(std::abs(scan.crossings[k].index - scan.crossings[k + 1].index) >= 2);
      found_pair = true;
    }
  }
  CHECK(found_pair);
}
