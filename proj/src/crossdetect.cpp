#include "braidtrack/crossdetect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace braidtrack {

namespace {

struct Event {
  double s;
  int p, q;  // path indices of the crossing pair
  std::vector<Complex> fiber;      // refined fiber at s, path-index order
  std::vector<Complex> velocity;   // dz/ds at s
};

class SegmentScanner {
 public:
  SegmentScanner(const BivariatePoly& f, const Segment& seg, const TrackOptions& topts)
      : f_(f), fz_(d_dz(f)), ft_(d_dt(f)), seg_(seg), topts_(topts),
        dir_(seg.end - seg.start) {}

  std::vector<Complex> velocities(const std::vector<Complex>& pts, double s) const {
    std::vector<Complex> v(pts.size());
    Complex t = seg_.at(s);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      Complex dz = eval(fz_, pts[k], t);
      if (std::abs(dz) < 1e-14) throw TrackError("derivative collapse during event scan");
      v[k] = -eval(ft_, pts[k], t) / dz * dir_;
    }
    return v;
  }

  /// Fiber at s_to continued from (s_from, pts) in a few predictor-corrector
  /// sub-steps.
  std::vector<Complex> continue_fiber(double s_from, std::vector<Complex> pts,
                                      double s_to) const {
    int substeps = 1 + static_cast<int>(std::abs(s_to - s_from) / topts_.step_max);
    for (int step = 0; step < substeps; ++step) {
      double a = s_from + (s_to - s_from) * step / substeps;
      double b = s_from + (s_to - s_from) * (step + 1) / substeps;
      double h = b - a;
      std::vector<Complex> pred(pts.size());
      for (std::size_t k = 0; k < pts.size(); ++k) {
        Complex z = pts[k];
        Complex k1 = one_velocity(z, a);
        Complex k2 = one_velocity(z + 0.5 * h * k1, a + 0.5 * h);
        Complex k3 = one_velocity(z + 0.5 * h * k2, a + 0.5 * h);
        Complex k4 = one_velocity(z + h * k3, b);
        pred[k] = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      pts = newton_correct(f_, seg_.at(b), pred, topts_);
    }
    return pts;
  }

 private:
  Complex one_velocity(Complex z, double s) const {
    Complex t = seg_.at(s);
    Complex dz = eval(fz_, z, t);
    if (std::abs(dz) < 1e-14) throw TrackError("derivative collapse during event scan");
    return -eval(ft_, z, t) / dz * dir_;
  }

  const BivariatePoly& f_;
  BivariatePoly fz_, ft_;
  Segment seg_;
  TrackOptions topts_;
  Complex dir_;
};

double re_diff(const std::vector<Complex>& pts, int p, int q) {
  return pts[static_cast<std::size_t>(p)].real() - pts[static_cast<std::size_t>(q)].real();
}

/// True when the cubic Hermite model of h on the interval, or plain endpoint
/// smallness against the slopes, admits a zero that endpoint signs miss.
bool pair_suspicious(double h0, double h1, double d0, double d1, double width) {
  if ((h0 < 0) != (h1 < 0)) return false;  // already a sign change
  double slope = std::max(std::abs(d0), std::abs(d1));
  if (std::min(std::abs(h0), std::abs(h1)) > 2.0 * width * slope) return false;
  // Hermite cubic H(u) on [0,1] with derivatives scaled by the width.
  double m0 = d0 * width, m1 = d1 * width;
  double prev = h0;
  for (int k = 1; k <= 8; ++k) {
    double u = k / 8.0;
    double u2 = u * u, u3 = u2 * u;
    double H = (2 * u3 - 3 * u2 + 1) * h0 + (u3 - 2 * u2 + u) * m0 +
               (-2 * u3 + 3 * u2) * h1 + (u3 - u2) * m1;
    if ((prev < 0) != (H < 0)) return true;
    prev = H;
  }
  return std::min(std::abs(h0), std::abs(h1)) < 1e-3 * width * slope + 1e-14;
}

}  // namespace

int check_proper(const std::vector<Complex>& points, double x, double proper_tol) {
  int count = 0;
  for (Complex z : points)
    if (std::abs(z.real() - x) < proper_tol) ++count;
  return count;
}

int classify_crossing(const Fiber& fiber_at_s, int index, const CrossOptions& copts) {
  if (index < 1 || index >= fiber_at_s.size())
    throw Error("classify_crossing: index out of range");
  Complex lo = fiber_at_s.points[static_cast<std::size_t>(index - 1)];
  Complex hi = fiber_at_s.points[static_cast<std::size_t>(index)];
  if (std::abs(lo.real() - hi.real()) >= copts.cross_tol)
    throw Error("classify_crossing: strands do not share a real part");
  if (std::abs(lo.imag() - hi.imag()) <= copts.proper_tol)
    throw TrackError("classify_crossing: strands collide (segment meets the branch locus)");
  return lo.imag() < hi.imag() ? 1 : -1;
}

std::array<Complex, 4> cross_system_residual(const BivariatePoly& f, const Segment& seg,
                                             double s, double x, double y1, double y2) {
  BivariatePoly g = conj_poly(f);
  Complex t = seg.at(s);
  Complex tbar = std::conj(t);
  return {eval(f, Complex(x, y1), t), eval(g, Complex(x, -y1), tbar),
          eval(f, Complex(x, y2), t), eval(g, Complex(x, -y2), tbar)};
}

Complex regularize_lambda(const CrossOptions& copts, int attempt) {
  if (attempt > copts.lambda_retries)
    throw LambdaExhaustedError("regularization attempts exhausted");
  if (attempt == 0) return Complex(1, 0);
  std::mt19937_64 rng(copts.rng_seed ^ 0xabcd1234ull);
  double theta = 0;
  for (int k = 0; k < attempt; ++k) {
    double u = static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
    theta = 0.3 + u * (6.283185307179586 - 0.6);
  }
  return std::polar(1.0, theta);
}

namespace {

DetectResult detect_once(const BivariatePoly& f, const Segment& seg, const Fiber& start,
                         const TrackOptions& topts, const CrossOptions& copts) {
  const int n = start.size();
  for (int k = 0; k + 1 < n; ++k)
    if (start.points[static_cast<std::size_t>(k)].real() >=
        start.points[static_cast<std::size_t>(k + 1)].real())
      throw TrackError("detect_crossings: start fiber is not ordered by distinct real parts");

  TrackResult track = track_segment(f, seg, start, topts);
  SegmentScanner scanner(f, seg, topts);

  std::vector<Event> events;

  // Recursively split sample intervals until each contains at most one
  // clean sign change per involved pair, then refine by bisection.
  struct Interval {
    double s0, s1;
    std::vector<Complex> f0, f1, v0, v1;
  };

  auto refine_event = [&](const Interval& iv, int p, int q) {
    double a = iv.s0, b = iv.s1;
    std::vector<Complex> fa = iv.f0;
    double ha = re_diff(fa, p, q);
    Event ev;
    ev.p = p;
    ev.q = q;
    ev.s = 0.5 * (a + b);
    ev.fiber = scanner.continue_fiber(a, fa, ev.s);
    for (int iter = 0; iter < 200; ++iter) {
      double hm = re_diff(ev.fiber, p, q);
      if (std::abs(hm) <= copts.refine_tol || (b - a) < 1e-15) break;
      if ((ha < 0) != (hm < 0)) {
        b = ev.s;
      } else {
        a = ev.s;
        fa = ev.fiber;
        ha = hm;
      }
      ev.s = 0.5 * (a + b);
      ev.fiber = scanner.continue_fiber(a, fa, ev.s);
    }
    ev.velocity = scanner.velocities(ev.fiber, ev.s);
    events.push_back(std::move(ev));
  };

  std::function<void(const Interval&, int)> process = [&](const Interval& iv, int depth) {
    std::vector<std::pair<int, int>> changed;
    bool suspicious = false;
    double width = iv.s1 - iv.s0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        double h0 = re_diff(iv.f0, p, q), h1 = re_diff(iv.f1, p, q);
        double d0 = (iv.v0[static_cast<std::size_t>(p)] - iv.v0[static_cast<std::size_t>(q)]).real();
        double d1 = (iv.v1[static_cast<std::size_t>(p)] - iv.v1[static_cast<std::size_t>(q)]).real();
        if ((h0 < 0) != (h1 < 0))
          changed.emplace_back(p, q);
        else if (depth < 24 && pair_suspicious(h0, h1, d0, d1, width))
          suspicious = true;
      }
    if (changed.empty() && !suspicious) return;
    bool splittable = depth < 40 && width > 1e-13;
    if ((changed.size() > 1 || suspicious) && splittable) {
      double m = 0.5 * (iv.s0 + iv.s1);
      std::vector<Complex> fm = scanner.continue_fiber(iv.s0, iv.f0, m);
      std::vector<Complex> vm = scanner.velocities(fm, m);
      process({iv.s0, m, iv.f0, fm, iv.v0, vm}, depth + 1);
      process({m, iv.s1, fm, iv.f1, vm, iv.v1}, depth + 1);
      return;
    }
    for (auto [p, q] : changed) refine_event(iv, p, q);
  };

  for (std::size_t i = 0; i + 1 < track.samples.size(); ++i) {
    const auto& a = track.samples[i];
    const auto& b = track.samples[i + 1];
    process({a.s, b.s, a.fiber.points, b.fiber.points, a.velocity, b.velocity}, 0);
  }

  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.s < b.s; });

  // Bookkeeping: order[pos] = path index occupying position pos.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  DetectResult result;
  std::size_t i = 0;
  while (i < events.size()) {
    // Group events that happen at indistinguishable s values.
    std::size_t j = i + 1;
    while (j < events.size() && events[j].s - events[i].s < 10 * copts.refine_tol) ++j;
    std::vector<std::size_t> group(j - i);
    std::iota(group.begin(), group.end(), i);
    auto pos_of = [&](int path) {
      for (int p = 0; p < n; ++p)
        if (order[static_cast<std::size_t>(p)] == path) return p;
      throw Error("internal: path not found in order");
    };
    // Disjoint simultaneous pairs commute and are emitted in ascending
    // position order; events sharing a strand keep their s order.
    auto share_strand = [&](std::size_t a, std::size_t b) {
      return events[a].p == events[b].p || events[a].p == events[b].q ||
             events[a].q == events[b].p || events[a].q == events[b].q;
    };
    bool disjoint = true;
    for (std::size_t a = 0; a < group.size() && disjoint; ++a)
      for (std::size_t b = a + 1; b < group.size() && disjoint; ++b)
        disjoint = !share_strand(group[a], group[b]);
    if (disjoint)
      std::sort(group.begin(), group.end(), [&](std::size_t a, std::size_t b) {
        return std::min(pos_of(events[a].p), pos_of(events[a].q)) <
               std::min(pos_of(events[b].p), pos_of(events[b].q));
      });

    for (std::size_t gi : group) {
      const Event& ev = events[gi];
      int pp = pos_of(ev.p), pq = pos_of(ev.q);
      if (std::abs(pp - pq) != 1)
        throw TrackError("detect_crossings: non-adjacent strand swap (missed event)");
      int lo = std::min(pp, pq);

      double x = 0.5 * (ev.fiber[static_cast<std::size_t>(ev.p)].real() +
                        ev.fiber[static_cast<std::size_t>(ev.q)].real());
      if (check_proper(ev.fiber, x, copts.proper_tol) >= 3) {
        std::ostringstream msg;
        msg << "improper crossed fiber at t = " << format_complex(seg.at(ev.s))
            << " (three or more strands share a real part); witness fiber:";
        for (Complex z : ev.fiber) msg << " " << format_complex(z);
        throw ImproperCrossingError(msg.str());
      }

      Fiber pre;
      pre.t = seg.at(ev.s);
      pre.points.resize(static_cast<std::size_t>(n));
      for (int p = 0; p < n; ++p)
        pre.points[static_cast<std::size_t>(p)] =
            ev.fiber[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])];

      int sign = classify_crossing(pre, lo + 1, copts);

      double slope = (ev.velocity[static_cast<std::size_t>(ev.p)] -
                      ev.velocity[static_cast<std::size_t>(ev.q)]).real();
      if (std::abs(slope) <= 1e-6)
        throw TransversalityError("crossing fails the transversality guard at t = " +
                                  format_complex(pre.t));
      if (ev.s < 1e-6 || ev.s > 1 - 1e-6)
        throw EndpointCrossingError("crossing at segment endpoint, s = " + std::to_string(ev.s));

      Crossing cr;
      cr.s = ev.s;
      cr.t = pre.t;
      cr.index = lo + 1;
      cr.sign = sign;
      cr.pre_fiber = pre;
      cr.x = x;
      cr.y1 = pre.points[static_cast<std::size_t>(lo)].imag();
      cr.y2 = pre.points[static_cast<std::size_t>(lo + 1)].imag();
      auto res = cross_system_residual(f, seg, cr.s, cr.x, cr.y1, cr.y2);
      double scale1 = eval_scale(f, Complex(cr.x, cr.y1), cr.t);
      double scale2 = eval_scale(f, Complex(cr.x, cr.y2), cr.t);
      cr.residual = std::max(std::max(std::abs(res[0]), std::abs(res[1])) / std::max(scale1, 1e-300),
                             std::max(std::abs(res[2]), std::abs(res[3])) / std::max(scale2, 1e-300));
      result.crossings.push_back(std::move(cr));

      std::swap(order[static_cast<std::size_t>(lo)], order[static_cast<std::size_t>(lo + 1)]);
    }
    i = j;
  }

  // Outgoing fiber in position order; it must be sorted by real part again.
  result.end.t = seg.end;
  result.end.points.resize(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p)
    result.end.points[static_cast<std::size_t>(p)] =
        track.end.points[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])];
  for (int p = 0; p + 1 < n; ++p)
    if (result.end.points[static_cast<std::size_t>(p)].real() >=
        result.end.points[static_cast<std::size_t>(p + 1)].real())
      throw TrackError("detect_crossings: outgoing fiber not ordered (missed event)");
  result.order = std::move(order);
  return result;
}

}  // namespace

DetectResult detect_crossings(const BivariatePoly& f, const Segment& seg, const Fiber& start,
                              const TrackOptions& topts, const CrossOptions& copts) {
  TrackOptions opts = topts;
  for (int attempt = 0;; ++attempt) {
    try {
      return detect_once(f, seg, start, opts, copts);
    } catch (const TrackError&) {
      if (attempt >= 2) throw;
      opts.step_max /= 4;
      opts.step_init = std::min(opts.step_init, opts.step_max);
    }
  }
}

}  // namespace braidtrack
