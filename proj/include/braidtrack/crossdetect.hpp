#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "braidtrack/homotopy.hpp"

namespace braidtrack {

/// One signed strand swap. `index` is the 1-based position of the lower
/// strand of the pair in the incoming ordering; `pre_fiber` lists the fiber
/// at the event in that incoming order. x, y1, y2 are the shared real part
/// and the two imaginary parts, for the defining-system residual check.
struct Crossing {
  double s = 0;
  Complex t;
  int index = 0;
  int sign = 0;
  Fiber pre_fiber;
  int segment = -1;  // filled by the engine when loops are assembled
  double x = 0, y1 = 0, y2 = 0;
  double residual = 0;  // largest relative residual of the defining system
};

struct CrossOptions {
  double cross_tol = 1e-7;
  double refine_tol = 1e-10;
  double proper_tol = 1e-7;
  int lambda_retries = 5;
  std::uint64_t rng_seed = 0;
};

struct DetectResult {
  std::vector<Crossing> crossings;  // ordered by s
  Fiber end;                        // points in outgoing (real-part) order
  std::vector<int> order;           // order[pos] = index into start.points
};

/// Scans tracked samples of the segment for changes in the real-part order
/// of the strands, refines each event by bisection, classifies its sign and
/// validates properness and transversality. The start fiber must be sorted
/// by real part with pairwise-distinct real parts.
DetectResult detect_crossings(const BivariatePoly& f, const Segment& seg, const Fiber& start,
                              const TrackOptions& topts, const CrossOptions& copts);

/// Sign of the crossing between positions index, index+1 (1-based) of the
/// incoming-ordered fiber: +1 when the lower strand has the smaller
/// imaginary part. Throws when the strands collide.
int classify_crossing(const Fiber& fiber_at_s, int index, const CrossOptions& copts);

/// Number of points whose real part is within proper_tol of x.
int check_proper(const std::vector<Complex>& points, double x, double proper_tol);

/// Residuals of the four defining equations of the cross-locus at the given
/// (s, x, y1, y2) on the segment, using g = conj_poly(f).
std::array<Complex, 4> cross_system_residual(const BivariatePoly& f, const Segment& seg,
                                             double s, double x, double y1, double y2);

/// Unit-modulus regularization factor; attempt 0 is exactly 1, later
/// attempts draw deterministic angles from the seeded stream.
Complex regularize_lambda(const CrossOptions& copts, int attempt);

}  // namespace braidtrack
