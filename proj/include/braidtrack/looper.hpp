#pragma once

#include <cstdint>
#include <vector>

#include "braidtrack/branchlocus.hpp"
#include "braidtrack/homotopy.hpp"

namespace braidtrack {

/// Closed polygonal loop based at `base`, encircling `target` once and no
/// other branch point. Built as an approach polyline, a small polygon around
/// the target, and the reversed approach, so the loop word conjugates its
/// polygon core by the approach word.
struct Loop {
  Complex base;
  Complex target;
  std::vector<Complex> vertices;   // closed: first == last == base
  int approach_segments = 0;       // segments before the polygon starts
  int polygon_segments = 0;

  std::vector<Segment> segments() const;
  int segment_count() const { return static_cast<int>(vertices.size()) - 1; }
};

/// Base point to the right of all branch points, at distance > 0.5 * spread
/// from each, with a small seeded vertical offset so real-axis symmetric
/// curves do not start on a degenerate fiber.
Complex choose_base(const BranchSet& branch, std::uint64_t seed);

/// Winding number of the polygonal loop about p, by summing argument
/// increments; exact for points off the segments.
int winding_number(const Loop& loop, Complex p);

Loop keyhole_loop(const BranchSet& branch, int target_idx, Complex base, int polygon_sides,
                  double radius_factor, std::uint64_t seed, double extra_phase = 0.0);

/// JSON array of [re, im] vertices.
std::string loop_to_json(const Loop& loop);

/// Standalone SVG of the loop geometry and the branch points.
std::string loops_to_svg(const std::vector<Loop>& loops, const BranchSet& branch);

}  // namespace braidtrack
