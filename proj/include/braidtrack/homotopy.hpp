#pragma once

#include <vector>

#include "braidtrack/poly.hpp"

namespace braidtrack {

struct Segment {
  Complex start, end;

  Complex at(double s) const { return (1.0 - s) * start + s * end; }
  Segment reversed() const { return {end, start}; }
};

/// Ordered fiber of f(., t) = 0. The meaning of the order depends on the
/// caller: trackers preserve path identity, detectors keep real-part order.
struct Fiber {
  Complex t;
  std::vector<Complex> points;

  int size() const { return static_cast<int>(points.size()); }
};

struct TrackOptions {
  double step_init = 1e-2;
  double step_min = 1e-9;
  double step_max = 5e-2;
  double newton_tol = 1e-11;
  int newton_max_iter = 20;
  double min_separation = 1e-8;
};

/// One accepted predictor-corrector step. `velocity[k]` is dz_k/ds at s,
/// computed from the defining equation, so event detection can build Hermite
/// models without extra solves.
struct TrackSample {
  double s;
  Fiber fiber;
  std::vector<Complex> velocity;
};

struct TrackResult {
  std::vector<TrackSample> samples;  // monotone in s from 0 to 1 inclusive
  Fiber end;                         // points in the same index order as start
};

/// All roots of f(., t0), sorted by (re, im), pairwise separated by more
/// than min_separation. Throws when t0 sits too close to the branch locus.
Fiber initial_fiber(const BivariatePoly& f, Complex t0, const TrackOptions& opts);

/// Tracks the whole fiber along the segment. Index identity is preserved:
/// end.points[k] continues start.points[k]. RK4 prediction on
/// dz/ds = -f_t/f_z * (end-start), full Newton correction, adaptive steps.
TrackResult track_segment(const BivariatePoly& f, const Segment& seg, const Fiber& start,
                          const TrackOptions& opts);

/// Newton-refines each approximation at fixed t. Throws on derivative
/// collapse or when an entry fails to converge.
std::vector<Complex> newton_correct(const BivariatePoly& f, Complex t,
                                    const std::vector<Complex>& approx,
                                    const TrackOptions& opts);

/// Strand velocities dz/ds at the given points for the segment direction.
std::vector<Complex> fiber_velocity(const BivariatePoly& f, const Segment& seg, Complex t,
                                    const std::vector<Complex>& points);

}  // namespace braidtrack
