#include "braidtrack/branchlocus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace braidtrack {

namespace {

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

/// Determinant by LU with partial pivoting; destroys the input.
Complex determinant(std::vector<std::vector<Complex>>& m) {
  const std::size_t n = m.size();
  Complex det(1, 0);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(m[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      double v = std::abs(m[r][col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0) return Complex(0, 0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    Complex inv = 1.0 / m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      Complex factor = m[r][col] * inv;
      if (factor == Complex(0, 0)) continue;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  return det;
}

Complex sylvester_det(const UnivariatePoly& p, const UnivariatePoly& q) {
  const int n = p.degree(), m = q.degree();
  const std::size_t size = static_cast<std::size_t>(n + m);
  std::vector<std::vector<Complex>> mat(size, std::vector<Complex>(size, Complex(0, 0)));
  for (int row = 0; row < m; ++row)
    for (int k = 0; k <= n; ++k)
      mat[static_cast<std::size_t>(row)][static_cast<std::size_t>(row + k)] = p.coeff(n - k);
  for (int row = 0; row < n; ++row)
    for (int k = 0; k <= m; ++k)
      mat[static_cast<std::size_t>(m + row)][static_cast<std::size_t>(row + k)] = q.coeff(m - k);
  return determinant(mat);
}

std::vector<std::vector<int>> single_linkage(const std::vector<Complex>& pts, double radius) {
  const std::size_t n = pts.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(pts[i] - pts[j]) <= radius) {
        int a = find(static_cast<int>(i)), b = find(static_cast<int>(j));
        if (a != b) parent[static_cast<std::size_t>(a)] = b;
      }
  std::vector<std::vector<int>> groups;
  std::vector<int> group_of(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    int root = find(static_cast<int>(i));
    if (group_of[static_cast<std::size_t>(root)] < 0) {
      group_of[static_cast<std::size_t>(root)] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(group_of[static_cast<std::size_t>(root)])].push_back(
        static_cast<int>(i));
  }
  return groups;
}

void sort_points(std::vector<Complex>& pts) {
  std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

/// Newton with multiplicity k, trust-bounded: steps larger than `trust` are
/// noise-dominated near a multiple root, so the iterate stays put instead of
/// wandering into another root's basin.
Complex refine_root_trust(const UnivariatePoly& p, const UnivariatePoly& dp, Complex z0, int k,
                          double trust) {
  Complex z = z0;
  for (int iter = 0; iter < 60; ++iter) {
    Complex pv = p.eval(z);
    Complex dv = dp.eval(z);
    if (dv == Complex(0, 0)) break;
    Complex step = static_cast<double>(k) * pv / dv;
    if (std::abs(step) > trust) break;
    z -= step;
    if (std::abs(z - z0) > 2 * trust) return z0;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

/// A cluster of size k around tau is consistent with a k-fold root when the
/// Taylor terms of order < k are negligible at the cluster's own scale.
/// Terms below the coefficient noise floor do not count against the merge.
bool multiplicity_consistent(const UnivariatePoly& p, Complex tau, double rho, int k) {
  auto taylor = p.taylor_at(tau);
  double coeff_scale = 0;
  for (Complex c : p.coeffs()) coeff_scale = std::max(coeff_scale, std::abs(c));
  double noise = 1e-12 * coeff_scale * std::pow(std::max(1.0, std::abs(tau)), p.degree());
  double pw = 1, biggest = 0;
  std::vector<double> mags(taylor.size());
  for (std::size_t j = 0; j < taylor.size(); ++j) {
    mags[j] = std::abs(taylor[j]) * pw;
    biggest = std::max(biggest, mags[j]);
    pw *= rho;
  }
  if (biggest <= noise) return true;
  for (int j = 0; j < k && j < static_cast<int>(mags.size()); ++j) {
    double m = mags[static_cast<std::size_t>(j)];
    if (m > noise && m > 1e-4 * biggest) return false;
  }
  return true;
}

double min_pairwise_gap(const std::vector<Complex>& pts) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      gap = std::min(gap, std::abs(pts[i] - pts[j]));
  return gap;
}

}  // namespace

std::vector<Complex> dedupe_points(std::vector<Complex> pts, double tol) {
  auto groups = single_linkage(pts, tol);
  std::vector<Complex> out;
  for (const auto& g : groups) {
    Complex sum(0, 0);
    for (int idx : g) sum += pts[static_cast<std::size_t>(idx)];
    out.push_back(sum / static_cast<double>(g.size()));
  }
  sort_points(out);
  return out;
}

UnivariatePoly discriminant_poly(const BivariatePoly& f) {
  const int n = f.deg_z();
  if (n < 2) throw Error("discriminant_poly: z-degree must be at least 2");
  const int m = f.deg_t();
  const BivariatePoly fz = d_dz(f);
  const int samples = (2 * n - 1) * m + 1;
  const double radius = 1.17;
  const UnivariatePoly lead = leading_z_coeff(f);
  double lead_scale = 0;
  for (Complex c : lead.coeffs()) lead_scale += std::abs(c);
  lead_scale *= std::pow(std::max(1.0, radius), lead.degree());

  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  const double two_pi = 6.283185307179586476925286766559;

  for (int attempt = 0; attempt < 20; ++attempt) {
    double phase = two_pi * u01(rng);
    std::vector<Complex> values(static_cast<std::size_t>(samples));
    bool degenerate = false;
    for (int k = 0; k < samples; ++k) {
      Complex tk = std::polar(radius, phase + two_pi * k / samples);
      if (std::abs(lead.eval(tk)) < 1e-8 * std::max(lead_scale, 1e-300)) {
        degenerate = true;
        break;
      }
      UnivariatePoly pz = restrict_t(f, tk);
      UnivariatePoly qz = restrict_t(fz, tk);
      if (pz.degree() != n || qz.degree() != n - 1) {
        degenerate = true;
        break;
      }
      values[static_cast<std::size_t>(k)] = sylvester_det(pz, qz);
    }
    if (degenerate) continue;

    // Inverse DFT on the sample circle recovers the coefficients.
    std::vector<Complex> coeffs(static_cast<std::size_t>(samples));
    for (int j = 0; j < samples; ++j) {
      Complex acc(0, 0);
      for (int k = 0; k < samples; ++k)
        acc += values[static_cast<std::size_t>(k)] * std::polar(1.0, -two_pi * j * k / samples);
      acc /= static_cast<double>(samples);
      acc /= std::polar(std::pow(radius, j), phase * j);
      coeffs[static_cast<std::size_t>(j)] = acc;
    }
    UnivariatePoly d(std::move(coeffs));
    d.clean(1e-9);
    if (d.is_zero())
      throw Error("discriminant is identically zero: the curve has a repeated factor");
    return d;
  }
  throw Error("discriminant_poly: could not find a nondegenerate sample circle");
}

BranchSet branch_points(const BivariatePoly& f, double tol) {
  UnivariatePoly d = discriminant_poly(f);
  BranchSet out;
  out.min_gap = std::numeric_limits<double>::infinity();
  if (d.degree() < 1) return out;

  std::vector<Complex> raw = roots(d, 1e-12);
  UnivariatePoly dp = d.derivative();

  // Multiple roots of D come back as loose clusters whose spread reflects
  // the conditioning of a multiple root, not the dedupe tolerance. Merge
  // generously and let the Taylor profile at the merged point decide whether
  // the multiplicity is real; rejected merges fall back to the members.
  double maxmod = 1.0;
  for (Complex r : raw) maxmod = std::max(maxmod, std::abs(r));
  double cluster_radius = std::max(tol, 1e-2 * maxmod);
  auto groups = single_linkage(raw, cluster_radius);

  std::vector<Complex> refined;
  for (const auto& g : groups) {
    Complex centroid(0, 0);
    for (int idx : g) centroid += raw[static_cast<std::size_t>(idx)];
    centroid /= static_cast<double>(g.size());
    int k = static_cast<int>(g.size());
    if (k == 1) {
      refined.push_back(
          refine_root_trust(d, dp, centroid, 1, 0.1 * std::max(1.0, std::abs(centroid))));
      continue;
    }
    double rho = tol;
    for (int idx : g)
      rho = std::max(rho, std::abs(raw[static_cast<std::size_t>(idx)] - centroid));
    Complex polished = refine_root_trust(d, dp, centroid, k, 4 * rho);
    if (multiplicity_consistent(d, polished, rho, k)) {
      refined.push_back(polished);
    } else {
      // Not a genuine multiple root; keep the members individually.
      for (int idx : g)
        refined.push_back(refine_root_trust(d, dp, raw[static_cast<std::size_t>(idx)], 1,
                                            std::max(tol, rho)));
    }
  }

  out.points = dedupe_points(std::move(refined), tol);
  out.min_gap = min_pairwise_gap(out.points);
  return out;
}

void validate_arrangement(const LineArrangement& arr) {
  if (arr.d() < 2) throw Error("arrangement needs at least 2 lines");
  for (const Line& l : arr.lines)
    if (std::abs(l.a) == 0) throw Error("arrangement line with a = 0 (not dominant over t)");
  for (int i = 0; i < arr.d(); ++i)
    for (int j = i + 1; j < arr.d(); ++j) {
      const Line& p = arr.lines[static_cast<std::size_t>(i)];
      const Line& q = arr.lines[static_cast<std::size_t>(j)];
      double scale = std::abs(p.a) * std::abs(q.a) + std::abs(p.b) * std::abs(q.b) +
                     std::abs(p.c) * std::abs(q.c) + 1e-300;
      double cross = std::abs(p.a * q.b - q.a * p.b) + std::abs(p.a * q.c - q.a * p.c) +
                     std::abs(p.b * q.c - q.b * p.c);
      if (cross < 1e-12 * scale)
        throw Error("arrangement lines " + std::to_string(i) + " and " + std::to_string(j) +
                    " are proportional");
    }
}

BranchSet arrangement_branch_points(const LineArrangement& arr, double tol,
                                    int* skipped_parallel) {
  validate_arrangement(arr);
  std::vector<Complex> ts;
  int skipped = 0;
  for (int i = 0; i < arr.d(); ++i)
    for (int j = i + 1; j < arr.d(); ++j) {
      const Line& p = arr.lines[static_cast<std::size_t>(i)];
      const Line& q = arr.lines[static_cast<std::size_t>(j)];
      Complex det = p.a * q.b - q.a * p.b;
      double scale = std::abs(p.a) * std::abs(q.b) + std::abs(q.a) * std::abs(p.b) + 1e-300;
      if (std::abs(det) < 1e-12 * scale) {
        ++skipped;
        continue;
      }
      ts.push_back((q.a * p.c - p.a * q.c) / det);
    }
  if (skipped_parallel) *skipped_parallel = skipped;
  BranchSet out;
  out.points = dedupe_points(std::move(ts), tol);
  out.min_gap = min_pairwise_gap(out.points);
  return out;
}

LineArrangement dehomogenize_arrangement(const std::vector<std::vector<Complex>>& matrix,
                                         std::uint64_t seed) {
  if (matrix.size() != 3) throw Error("dehomogenize_arrangement: matrix must be 3 x d");
  const std::size_t d = matrix[0].size();
  if (matrix[1].size() != d || matrix[2].size() != d)
    throw Error("dehomogenize_arrangement: ragged matrix");
  if (d < 2) throw Error("dehomogenize_arrangement: need at least 2 lines");
  for (std::size_t c = 0; c < d; ++c) {
    double norm = std::abs(matrix[0][c]) + std::abs(matrix[1][c]) + std::abs(matrix[2][c]);
    if (norm == 0) throw Error("dehomogenize_arrangement: zero column");
  }

  std::mt19937_64 rng(seed ^ 0xd1b54a32d192ed03ull);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Complex M[3][3];
    for (auto& row : M)
      for (auto& e : row) e = Complex(2 * u01(rng) - 1, 2 * u01(rng) - 1);
    Complex det = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                  M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                  M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    if (std::abs(det) < 0.05) continue;

    LineArrangement arr;
    bool ok = true;
    for (std::size_t c = 0; c < d && ok; ++c) {
      // New coefficients are M^T times the old column.
      Complex col[3] = {matrix[0][c], matrix[1][c], matrix[2][c]};
      Complex a = M[0][0] * col[0] + M[1][0] * col[1] + M[2][0] * col[2];
      Complex b = M[0][1] * col[0] + M[1][1] * col[1] + M[2][1] * col[2];
      Complex cc = M[0][2] * col[0] + M[1][2] * col[1] + M[2][2] * col[2];
      double norm = std::abs(a) + std::abs(b) + std::abs(cc);
      if (std::abs(a) < 1e-6 * norm) {
        ok = false;
        break;
      }
      arr.lines.push_back({a, b, cc});
    }
    if (!ok) continue;
    try {
      validate_arrangement(arr);
    } catch (const Error&) {
      continue;
    }
    return arr;
  }
  throw Error("dehomogenize_arrangement: no generic chart found");
}

BivariatePoly arrangement_product_poly(const LineArrangement& arr) {
  BivariatePoly prod = BivariatePoly::constant(Complex(1, 0));
  for (const Line& l : arr.lines) {
    BivariatePoly lin;
    lin.set_coeff(1, 0, l.a);
    lin.set_coeff(0, 1, l.b);
    lin.set_coeff(0, 0, l.c);
    prod = prod * lin;
  }
  return prod;
}

}  // namespace braidtrack
