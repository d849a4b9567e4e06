#pragma once

#include <cstdint>
#include <vector>

#include "braidtrack/poly.hpp"

namespace braidtrack {

/// Finite superset of the branch locus, deduplicated and sorted by (re, im).
struct BranchSet {
  std::vector<Complex> points;
  double min_gap = 0;  // smallest pairwise distance; +inf for a single point

  int size() const { return static_cast<int>(points.size()); }
};

struct Line {
  Complex a, b, c;  // a*z + b*t + c = 0, with a != 0
};

struct LineArrangement {
  std::vector<Line> lines;
  int d() const { return static_cast<int>(lines.size()); }
};

/// Validates a != 0 and pairwise non-proportionality; throws on failure.
void validate_arrangement(const LineArrangement& arr);

/// D(t) = Res_z(f, df/dz), computed by sampling Sylvester determinants on a
/// circle and interpolating. Coefficients below 1e-9 of the largest modulus
/// are zeroed. Throws if the resultant is identically zero (repeated factor).
UnivariatePoly discriminant_poly(const BivariatePoly& f);

/// Deduplicated discriminant roots. Clusters that refine consistently to a
/// multiple root are replaced by the polished root, so high-multiplicity
/// branch points come out sharp.
BranchSet branch_points(const BivariatePoly& f, double tol = 1e-6);

/// Projections of the pairwise line intersections; parallel-in-chart pairs
/// are skipped (their count is reported through `skipped_parallel`).
BranchSet arrangement_branch_points(const LineArrangement& arr, double tol = 1e-6,
                                    int* skipped_parallel = nullptr);

/// Applies a seeded random invertible coordinate change to a 3 x d matrix of
/// projective line coefficients and reads each column as a*z + b*t + c in the
/// affine chart third-coordinate = 1. Redraws until every a is nonzero and no
/// two lines are proportional.
LineArrangement dehomogenize_arrangement(const std::vector<std::vector<Complex>>& matrix,
                                         std::uint64_t seed);

/// Expanded product of the arrangement's lines as a curve in z, t.
BivariatePoly arrangement_product_poly(const LineArrangement& arr);

/// Single-linkage clustering at radius tol; returns cluster centroids sorted
/// by (re, im).
std::vector<Complex> dedupe_points(std::vector<Complex> pts, double tol);

}  // namespace braidtrack
