#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "braidtrack/braid.hpp"
#include "braidtrack/branchlocus.hpp"
#include "braidtrack/crossdetect.hpp"
#include "braidtrack/looper.hpp"

namespace braidtrack {

/// Letters in crossing order, no normalization.
BraidWord word_from_crossings(int n, const std::vector<Crossing>& crossings);

struct EngineOptions {
  std::uint64_t seed = 0;
  TrackOptions track;
  CrossOptions cross;
  int polygon_sides = 4;
  double radius_factor = 0.2;
  double branch_tol = 1e-6;
  std::optional<Complex> lambda_override;
};

/// One generator: the loop, its crossings, the raw loop word, the word with
/// the basing conjugation stripped (core), and the permutation image.
struct BraidReport {
  Complex branch_point;
  Loop loop;
  std::vector<Crossing> crossings;
  BraidWord word;
  BraidWord reduced_word;
  BraidWord core;
  Permutation perm;
  double residual_max = 0;
  int loop_retries = 0;
};

struct GroupReport {
  int n = 0;
  Complex lambda{1, 0};
  int lambda_attempts = 0;
  Complex base{0, 0};
  std::uint64_t seed = 0;
  std::vector<Complex> branch_points;
  std::vector<BraidReport> generators;
  std::vector<Permutation> monodromy_perms;
  long long monodromy_order = -1;  // -1 when skipped (n too large)
  bool monodromy_transitive = false;
  int empty_loops = 0;  // loops that produced no crossings (superset points)
};

/// Generators of the braid group of the curve f(z,t) = 0: one keyhole loop
/// per branch point, crossings detected segment by segment, all loops under
/// a single regularization factor. Improper or non-transversal crossings
/// restart the whole run with the next factor.
GroupReport braid_generators(const BivariatePoly& f, const EngineOptions& opts);

/// Same output for a line arrangement, with crossings found per line pair
/// from the exact strand formulas instead of tracked samples.
GroupReport arrangement_braid_generators(const LineArrangement& arr, const EngineOptions& opts);

/// f(z, t) = F(z, u0 + t*v). Omitted u0/v are seeded draws scaled by 2.
/// Throws when the leading z-coefficient vanishes identically on the line.
BivariatePoly restrict_to_line(const MultivariatePoly& F,
                               const std::optional<std::vector<Complex>>& u0,
                               const std::optional<std::vector<Complex>>& v,
                               std::uint64_t seed);

/// Order and transitivity of the generated permutation group by closure
/// enumeration; order is -1 (skipped) when n exceeds 12.
std::pair<long long, bool> monodromy_closure(const std::vector<Permutation>& perms, int n);

std::string group_report_to_json(const GroupReport& report);
std::string group_report_to_text(const GroupReport& report);

/// Re-checks a serialized report against its input curve: defining-system
/// residuals, the sign rule, segment/t consistency and the permutation of
/// each word. Returns human-readable failure descriptions (empty = pass).
std::vector<std::string> verify_report_json(const std::string& report_json,
                                            const BivariatePoly& f);

}  // namespace braidtrack
