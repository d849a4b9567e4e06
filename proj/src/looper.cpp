#include "braidtrack/looper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "json.hpp"

namespace braidtrack {

namespace {

const double kTwoPi = 6.283185307179586476925286766559;

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

double point_segment_distance(Complex p, Complex a, Complex b) {
  Complex ab = b - a;
  double len2 = std::norm(ab);
  if (len2 == 0) return std::abs(p - a);
  double s = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2;
  s = std::clamp(s, 0.0, 1.0);
  return std::abs(p - (a + s * ab));
}

}  // namespace

std::vector<Segment> Loop::segments() const {
  std::vector<Segment> out;
  for (std::size_t k = 0; k + 1 < vertices.size(); ++k)
    out.push_back({vertices[k], vertices[k + 1]});
  return out;
}

Complex choose_base(const BranchSet& branch, std::uint64_t seed) {
  if (branch.points.empty()) throw Error("choose_base: branch set is empty");
  double max_re = branch.points.front().real();
  for (Complex p : branch.points) max_re = std::max(max_re, p.real());
  double spread = 0;
  for (std::size_t i = 0; i < branch.points.size(); ++i)
    for (std::size_t j = i + 1; j < branch.points.size(); ++j)
      spread = std::max(spread, std::abs(branch.points[i] - branch.points[j]));
  if (spread == 0) spread = 1;
  std::mt19937_64 rng(seed ^ 0x5bf0363546069045ull);
  double r = 0.1 * u01(rng);
  double eps = 0.1 * u01(rng);
  Complex beta(max_re + (1 + r) * spread, eps * spread);
  for (Complex p : branch.points)
    if (std::abs(beta - p) <= 0.5 * spread) throw Error("choose_base: clearance failure");
  return beta;
}

int winding_number(const Loop& loop, Complex p) {
  double total = 0;
  for (std::size_t k = 0; k + 1 < loop.vertices.size(); ++k) {
    Complex a = loop.vertices[k] - p;
    Complex b = loop.vertices[k + 1] - p;
    if (point_segment_distance(p, loop.vertices[k], loop.vertices[k + 1]) < 1e-9)
      throw Error("winding_number: point too close to a loop segment");
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

Loop keyhole_loop(const BranchSet& branch, int target_idx, Complex base, int polygon_sides,
                  double radius_factor, std::uint64_t seed, double extra_phase) {
  if (polygon_sides < 3) throw Error("keyhole_loop: polygon needs at least 3 sides");
  if (radius_factor <= 0 || radius_factor >= 0.5)
    throw Error("keyhole_loop: radius_factor must be in (0, 0.5)");
  if (target_idx < 0 || target_idx >= branch.size())
    throw Error("keyhole_loop: target index out of range");
  const Complex target = branch.points[static_cast<std::size_t>(target_idx)];

  // Per-point polygon radii from nearest-neighbour distances (base distance
  // when there is a single branch point).
  auto radius_of = [&](int idx) {
    Complex p = branch.points[static_cast<std::size_t>(idx)];
    double nearest = std::abs(base - p);
    for (int j = 0; j < branch.size(); ++j)
      if (j != idx) nearest = std::min(nearest, std::abs(branch.points[static_cast<std::size_t>(j)] - p));
    return radius_factor * nearest;
  };
  const double radius = radius_of(target_idx);

  std::mt19937_64 rng(seed ^ (0x94d049bb133111ebull + 0x9e37ull * static_cast<std::uint64_t>(target_idx)));
  for (int attempt = 0; attempt < 24; ++attempt) {
    // Positive phase nudge keeps the arrival vertex off symmetry axes.
    double phase = std::arg(base - target) + 0.05 + 0.25 * u01(rng) +
                   extra_phase + 0.37 * attempt;
    std::vector<Complex> polygon(static_cast<std::size_t>(polygon_sides));
    for (int k = 0; k < polygon_sides; ++k)
      polygon[static_cast<std::size_t>(k)] =
          target + std::polar(radius, phase + kTwoPi * k / polygon_sides);

    // Route the approach from base to the polygon's first vertex, detouring
    // around any other branch point that sits too close to the path.
    std::vector<Complex> approach = {base, polygon[0]};
    bool routed = true;
    for (int pass = 0; pass < 8; ++pass) {
      bool clean = true;
      for (int j = 0; j < branch.size() && clean; ++j) {
        if (j == target_idx) continue;
        Complex obstacle = branch.points[static_cast<std::size_t>(j)];
        double clearance = std::max(radius_of(j), 0.15 * radius);
        for (std::size_t k = 0; k + 1 < approach.size(); ++k) {
          Complex a = approach[k], b = approach[k + 1];
          if (point_segment_distance(obstacle, a, b) >= clearance) continue;
          // Two offset waypoints on the far side of the obstacle.
          Complex ab = b - a;
          Complex dir = ab / std::abs(ab);
          Complex normal(-dir.imag(), dir.real());
          double side = ((obstacle - a).real() * normal.real() +
                         (obstacle - a).imag() * normal.imag());
          Complex away = (side > 0 ? -normal : normal) * (1.6 * clearance);
          Complex foot = a + dir * ((obstacle - a).real() * dir.real() +
                                    (obstacle - a).imag() * dir.imag());
          approach.insert(approach.begin() + static_cast<std::ptrdiff_t>(k) + 1,
                          {foot - dir * clearance + away, foot + dir * clearance + away});
          clean = false;
          break;
        }
      }
      if (clean) break;
      if (pass == 7) routed = false;
    }
    if (!routed) continue;

    Loop loop;
    loop.base = base;
    loop.target = target;
    loop.vertices = approach;
    for (int k = 1; k < polygon_sides; ++k)
      loop.vertices.push_back(polygon[static_cast<std::size_t>(k)]);
    loop.vertices.push_back(polygon[0]);
    for (std::size_t k = approach.size() - 1; k-- > 0;) loop.vertices.push_back(approach[k]);
    loop.approach_segments = static_cast<int>(approach.size()) - 1;
    loop.polygon_segments = polygon_sides;

    // Validate: winding one about the target, zero elsewhere, clearance kept.
    bool ok = true;
    try {
      ok = winding_number(loop, target) == 1;
      for (int j = 0; j < branch.size() && ok; ++j)
        if (j != target_idx)
          ok = winding_number(loop, branch.points[static_cast<std::size_t>(j)]) == 0;
    } catch (const Error&) {
      ok = false;
    }
    if (ok) {
      for (int j = 0; j < branch.size() && ok; ++j) {
        Complex p = branch.points[static_cast<std::size_t>(j)];
        double limit = (j == target_idx) ? 0.1 * radius : 0.1 * radius;
        for (std::size_t k = 0; k + 1 < loop.vertices.size() && ok; ++k)
          ok = point_segment_distance(p, loop.vertices[k], loop.vertices[k + 1]) > limit;
      }
    }
    if (ok) return loop;
  }

  std::ostringstream msg;
  msg << "keyhole_loop: routing failed for target " << format_complex(target) << "; base "
      << format_complex(base) << "; branch points:";
  for (Complex p : branch.points) msg << " " << format_complex(p);
  throw RoutingError(msg.str());
}

std::string loop_to_json(const Loop& loop) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (Complex v : loop.vertices) j.push_back({v.real(), v.imag()});
  return j.dump();
}

std::string loops_to_svg(const std::vector<Loop>& loops, const BranchSet& branch) {
  double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
  auto grow = [&](Complex p) {
    min_x = std::min(min_x, p.real());
    max_x = std::max(max_x, p.real());
    min_y = std::min(min_y, p.imag());
    max_y = std::max(max_y, p.imag());
  };
  for (const Loop& l : loops)
    for (Complex v : l.vertices) grow(v);
  for (Complex p : branch.points) grow(p);
  if (loops.empty() && branch.points.empty()) {
    min_x = min_y = -1;
    max_x = max_y = 1;
  }
  double pad = 0.1 * std::max(max_x - min_x, max_y - min_y) + 0.1;
  min_x -= pad;
  max_x += pad;
  min_y -= pad;
  max_y += pad;
  const double scale = 500.0 / std::max(max_x - min_x, max_y - min_y);
  auto X = [&](double x) { return (x - min_x) * scale; };
  auto Y = [&](double y) { return (max_y - y) * scale; };  // flip so +i is up
  auto f2 = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f2((max_x - min_x) * scale)
      << "\" height=\"" << f2((max_y - min_y) * scale) << "\">\n";
  for (std::size_t i = 0; i < loops.size(); ++i) {
    out << "  <polyline fill=\"none\" stroke=\"" << colors[i % 6]
        << "\" stroke-width=\"1.5\" points=\"";
    for (Complex v : loops[i].vertices) out << f2(X(v.real())) << "," << f2(Y(v.imag())) << " ";
    out << "\"/>\n";
  }
  for (Complex p : branch.points)
    out << "  <circle cx=\"" << f2(X(p.real())) << "\" cy=\"" << f2(Y(p.imag()))
        << "\" r=\"4\" fill=\"black\"/>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace braidtrack
