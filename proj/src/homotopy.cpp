#include "braidtrack/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace braidtrack {

namespace {

double min_pairwise_distance(const std::vector<Complex>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::min(best, std::abs(pts[i] - pts[j]));
  return best;
}

Complex strand_velocity(const BivariatePoly& fz, const BivariatePoly& ft, Complex z, Complex t,
                        Complex dir) {
  Complex dz = eval(fz, z, t);
  if (std::abs(dz) < 1e-14)
    throw TrackError("derivative collapse while tracking (near-critical point)");
  return -eval(ft, z, t) / dz * dir;
}

}  // namespace

std::vector<Complex> fiber_velocity(const BivariatePoly& f, const Segment& seg, Complex t,
                                    const std::vector<Complex>& points) {
  BivariatePoly fz = d_dz(f), ft = d_dt(f);
  Complex dir = seg.end - seg.start;
  std::vector<Complex> out(points.size());
  for (std::size_t k = 0; k < points.size(); ++k)
    out[k] = strand_velocity(fz, ft, points[k], t, dir);
  return out;
}

std::vector<Complex> newton_correct(const BivariatePoly& f, Complex t,
                                    const std::vector<Complex>& approx,
                                    const TrackOptions& opts) {
  BivariatePoly fz = d_dz(f);
  std::vector<Complex> out = approx;
  for (std::size_t k = 0; k < out.size(); ++k) {
    Complex z = out[k];
    bool converged = false;
    for (int iter = 0; iter < opts.newton_max_iter; ++iter) {
      Complex dv = eval(fz, z, t);
      if (std::abs(dv) < 1e-14)
        throw TrackError("newton_correct: derivative collapse near " + format_complex(z));
      Complex step = eval(f, z, t) / dv;
      z -= step;
      // Residual relative to the evaluation scale (backward error), so
      // strands of large modulus converge too; the step bound is relative to
      // |z| so that stalls on a multiple root (step ~ z/2 forever) are
      // reported instead of accepted.
      if (std::abs(eval(f, z, t)) <= opts.newton_tol * std::max(1.0, eval_scale(f, z, t)) &&
          std::abs(step) <= 1e-9 * std::abs(z) + 1e-21) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw TrackError("newton_correct: no convergence from " + format_complex(approx[k]) +
                       " at t = " + format_complex(t));
    out[k] = z;
  }
  return out;
}

Fiber initial_fiber(const BivariatePoly& f, Complex t0, const TrackOptions& opts) {
  UnivariatePoly p = restrict_t(f, t0);
  if (p.degree() != f.deg_z())
    throw TrackError("initial_fiber: z-degree drops at t0 (leading coefficient vanishes)");
  std::vector<Complex> pts = roots(p, 1e-12);
  if (p.degree() >= 1 && pts.size() != static_cast<std::size_t>(p.degree()))
    throw TrackError("initial_fiber: root count mismatch");
  double sep = min_pairwise_distance(pts);
  if (pts.size() > 1 && sep <= opts.min_separation) {
    std::ostringstream msg;
    msg << "initial_fiber: clustered roots at t0 = " << format_complex(t0)
        << " (separation " << sep << "); t0 is too near the branch locus";
    throw TrackError(msg.str());
  }
  // roots() already sorts by (re, im)
  return Fiber{t0, std::move(pts)};
}

TrackResult track_segment(const BivariatePoly& f, const Segment& seg, const Fiber& start,
                          const TrackOptions& opts) {
  if (seg.start == seg.end) throw TrackError("track_segment: degenerate segment");
  if (std::abs(start.t - seg.start) > 1e-9 * std::max(1.0, std::abs(seg.start)))
    throw TrackError("track_segment: start fiber does not sit over the segment start");

  const BivariatePoly fz = d_dz(f), ft = d_dt(f);
  const Complex dir = seg.end - seg.start;
  const std::size_t n = start.points.size();

  auto velocities = [&](const std::vector<Complex>& pts, Complex t) {
    std::vector<Complex> v(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k)
      v[k] = strand_velocity(fz, ft, pts[k], t, dir);
    return v;
  };

  TrackResult result;
  double s = 0;
  std::vector<Complex> current = start.points;
  result.samples.push_back({0.0, Fiber{seg.at(0.0), current}, velocities(current, seg.at(0.0))});

  double step = std::min(opts.step_init, opts.step_max);
  int successes = 0;

  while (s < 1.0) {
    double h = std::min(step, 1.0 - s);
    bool ok = true;
    std::vector<Complex> predicted(n);
    try {
      // Classical RK4 on each strand.
      for (std::size_t k = 0; k < n; ++k) {
        Complex z = current[k];
        Complex k1 = strand_velocity(fz, ft, z, seg.at(s), dir);
        Complex k2 = strand_velocity(fz, ft, z + 0.5 * h * k1, seg.at(s + 0.5 * h), dir);
        Complex k3 = strand_velocity(fz, ft, z + 0.5 * h * k2, seg.at(s + 0.5 * h), dir);
        Complex k4 = strand_velocity(fz, ft, z + h * k3, seg.at(s + h), dir);
        predicted[k] = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      std::vector<Complex> corrected = newton_correct(f, seg.at(s + h), predicted, opts);

      // Index continuity: every corrected point must stay closest to its own
      // prediction, and the correction must be small against the local strand
      // spacing, otherwise a strand jumped paths.
      for (std::size_t k = 0; k < n && ok; ++k) {
        double own = std::abs(corrected[k] - predicted[k]);
        double spacing = std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < n; ++l) {
          if (l == k) continue;
          spacing = std::min(spacing, std::abs(corrected[l] - corrected[k]));
          if (std::abs(corrected[l] - predicted[k]) <= own) {
            ok = false;
            break;
          }
        }
        if (n > 1 && own > 0.25 * spacing) ok = false;
      }
      if (ok && n > 1 && min_pairwise_distance(corrected) < 4 * opts.min_separation) ok = false;
      if (ok) {
        s += h;
        current = std::move(corrected);
        result.samples.push_back({s, Fiber{seg.at(s), current}, velocities(current, seg.at(s))});
        if (++successes >= 5) {
          step = std::min(step * 2, opts.step_max);
          successes = 0;
        }
        continue;
      }
    } catch (const TrackError&) {
      ok = false;
    }
    // Step rejected.
    successes = 0;
    step /= 2;
    if (step < opts.step_min) {
      std::ostringstream msg;
      msg << "track_segment: step underflow at s = " << s << " between "
          << format_complex(seg.start) << " and " << format_complex(seg.end)
          << " (segment passes too near the branch locus)";
      throw TrackError(msg.str());
    }
  }

  result.end = Fiber{seg.end, current};
  return result;
}

}  // namespace braidtrack
