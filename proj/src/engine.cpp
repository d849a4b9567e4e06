#include "braidtrack/engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace braidtrack {

namespace {

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

void require_strictly_increasing_re(const Fiber& fiber, const char* where) {
  for (int k = 0; k + 1 < fiber.size(); ++k)
    if (fiber.points[static_cast<std::size_t>(k)].real() >=
        fiber.points[static_cast<std::size_t>(k + 1)].real())
      throw TrackError(std::string(where) + ": fiber real parts are not strictly increasing");
}

BraidWord approach_word(int n, const std::vector<Crossing>& crossings, int approach_segments) {
  std::vector<BraidLetter> ls;
  for (const Crossing& c : crossings)
    if (c.segment < approach_segments) ls.push_back({c.index, c.sign});
  return make_word(n, std::move(ls));
}

BraidWord strip_basing(const BraidWord& word, const BraidWord& g) {
  return free_reduce(concat(concat(invert(g), word), g));
}

}  // namespace

BraidWord word_from_crossings(int n, const std::vector<Crossing>& crossings) {
  std::vector<BraidLetter> ls;
  ls.reserve(crossings.size());
  for (const Crossing& c : crossings) ls.push_back({c.index, c.sign});
  return make_word(n, std::move(ls));
}

std::pair<long long, bool> monodromy_closure(const std::vector<Permutation>& perms, int n) {
  // Transitivity from the orbit partition, regardless of group size.
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  };
  for (const Permutation& p : perms)
    for (int pos = 0; pos < p.n(); ++pos) {
      int a = find(pos), b = find(p.image[static_cast<std::size_t>(pos)] - 1);
      if (a != b) parent[static_cast<std::size_t>(a)] = b;
    }
  bool transitive = true;
  for (int k = 1; k < n; ++k) transitive = transitive && find(k) == find(0);

  if (n > 12) return {-1, transitive};

  std::set<std::vector<int>> closure;
  std::vector<std::vector<int>> frontier;
  closure.insert(identity_permutation(n).image);
  frontier.push_back(identity_permutation(n).image);
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& img : frontier)
      for (const Permutation& g : perms) {
        Permutation cur{img};
        auto prod = compose(cur, g).image;
        if (closure.insert(prod).second) next.push_back(std::move(prod));
        if (closure.size() > 10000000) return {-1, transitive};
      }
    frontier = std::move(next);
  }
  return {static_cast<long long>(closure.size()), transitive};
}

// ---------------------------------------------------------------------------
// Curve engine

namespace {

struct LoopRun {
  Loop loop;
  std::vector<Crossing> crossings;
  Fiber end;
  Permutation tracked_perm;  // from path composition, crossings ignored
  int retries = 0;
};

LoopRun run_loop(const BivariatePoly& fl, const BranchSet& branch, int idx, Complex base,
                 const Fiber& base_fiber, const EngineOptions& opts) {
  const int n = base_fiber.size();
  int tighten = 0;
  Error last = Error("loop never attempted");
  for (int attempt = 0; attempt < 8; ++attempt) {
    TrackOptions topts = opts.track;
    for (int k = 0; k < tighten; ++k) {
      topts.step_max /= 5;
      topts.step_init = std::min(topts.step_init, topts.step_max);
      topts.newton_tol /= 10;
    }
    try {
      Loop loop = keyhole_loop(branch, idx, base, opts.polygon_sides, opts.radius_factor,
                               opts.seed, 0.41 * attempt);
      LoopRun run;
      run.loop = loop;
      run.retries = attempt;
      Fiber fiber = base_fiber;
      // position_map[q] = current position of the strand that started at q.
      std::vector<int> position_map(static_cast<std::size_t>(n));
      std::iota(position_map.begin(), position_map.end(), 0);
      auto segments = loop.segments();
      for (std::size_t si = 0; si < segments.size(); ++si) {
        DetectResult det = detect_crossings(fl, segments[si], fiber, topts, opts.cross);
        for (Crossing& c : det.crossings) {
          c.segment = static_cast<int>(si);
          run.crossings.push_back(std::move(c));
        }
        std::vector<int> seg_map(static_cast<std::size_t>(n));
        for (int p = 0; p < n; ++p) seg_map[static_cast<std::size_t>(det.order[static_cast<std::size_t>(p)])] = p;
        for (int q = 0; q < n; ++q)
          position_map[static_cast<std::size_t>(q)] =
              seg_map[static_cast<std::size_t>(position_map[static_cast<std::size_t>(q)])];
        fiber = det.end;
      }
      // The loop must bring the fiber back to itself.
      for (int p = 0; p < n; ++p)
        if (std::abs(fiber.points[static_cast<std::size_t>(p)] -
                     base_fiber.points[static_cast<std::size_t>(p)]) > 1e-6)
          throw TrackError("loop did not return the base fiber");
      run.end = fiber;
      run.tracked_perm.image.assign(static_cast<std::size_t>(n), 0);
      for (int q = 0; q < n; ++q)
        run.tracked_perm.image[static_cast<std::size_t>(position_map[static_cast<std::size_t>(q)])] =
            q + 1;
      return run;
    } catch (const EndpointCrossingError& e) {
      last = e;
      continue;  // nudge the polygon phase
    } catch (const RoutingError& e) {
      last = e;
      continue;
    } catch (const TrackError& e) {
      last = e;
      if (tighten >= 2) throw;
      ++tighten;
      --attempt;
    }
  }
  throw RoutingError(std::string("loop construction retries exhausted: ") + last.what());
}

GroupReport run_with_lambda(const BivariatePoly& f, Complex lambda, const BranchSet& branch,
                            const EngineOptions& opts, int attempt) {
  GroupReport report;
  report.n = f.deg_z();
  report.lambda = lambda;
  report.lambda_attempts = attempt + 1;
  report.seed = opts.seed;
  report.branch_points = branch.points;

  BivariatePoly fl = scale_z(f, lambda);
  Complex base = choose_base(branch, opts.seed);
  report.base = base;
  Fiber base_fiber = initial_fiber(fl, base, opts.track);
  require_strictly_increasing_re(base_fiber, "base fiber");

  for (int idx = 0; idx < branch.size(); ++idx) {
    LoopRun run = run_loop(fl, branch, idx, base, base_fiber, opts);
    if (run.crossings.empty()) {
      ++report.empty_loops;
      continue;
    }
    BraidReport gen;
    gen.branch_point = branch.points[static_cast<std::size_t>(idx)];
    gen.loop = run.loop;
    gen.crossings = run.crossings;
    gen.word = word_from_crossings(report.n, run.crossings);
    gen.reduced_word = free_reduce(gen.word);
    gen.core = strip_basing(gen.word, approach_word(report.n, run.crossings,
                                                    run.loop.approach_segments));
    gen.perm = permutation(gen.word);
    gen.loop_retries = run.retries;
    if (!(gen.perm == run.tracked_perm))
      throw Error("internal: crossing bookkeeping disagrees with endpoint tracking");
    for (const Crossing& c : run.crossings) {
      gen.residual_max = std::max(gen.residual_max, c.residual);
      if (c.residual > 1e-6)
        throw Error("internal: crossing fails the defining-system residual check");
    }
    report.generators.push_back(std::move(gen));
  }
  for (const BraidReport& g : report.generators) report.monodromy_perms.push_back(g.perm);
  auto [order, transitive] = monodromy_closure(report.monodromy_perms, report.n);
  report.monodromy_order = order;
  report.monodromy_transitive = transitive;
  return report;
}

GroupReport trivial_report(const BivariatePoly& f, const EngineOptions& opts) {
  GroupReport report;
  report.n = f.deg_z();
  report.seed = opts.seed;
  auto [order, transitive] = monodromy_closure({}, report.n);
  report.monodromy_order = order;
  report.monodromy_transitive = transitive;
  return report;
}

}  // namespace

GroupReport braid_generators(const BivariatePoly& f, const EngineOptions& opts) {
  if (f.deg_z() < 1) throw Error("braid_generators: curve must have positive z-degree");
  if (f.deg_z() == 1 || f.deg_t() == 0) return trivial_report(f, opts);
  BranchSet branch = branch_points(f, opts.branch_tol);
  if (branch.points.empty()) return trivial_report(f, opts);

  if (opts.lambda_override) {
    return run_with_lambda(f, *opts.lambda_override, branch, opts, 0);
  }
  std::string failures;
  for (int attempt = 0; attempt <= opts.cross.lambda_retries; ++attempt) {
    Complex lambda = regularize_lambda(opts.cross, attempt);
    try {
      return run_with_lambda(f, lambda, branch, opts, attempt);
    } catch (const ImproperCrossingError& e) {
      failures += std::string("\n  attempt ") + std::to_string(attempt) + ": " + e.what();
    } catch (const TransversalityError& e) {
      failures += std::string("\n  attempt ") + std::to_string(attempt) + ": " + e.what();
    }
  }
  throw LambdaExhaustedError(
      "regularization retries exhausted; every rotation produced an improper or "
      "non-transversal crossing. Reducible curves with collinear strands (for example "
      "products of concurrent real lines) stay improper under every rotation." +
      failures);
}

// ---------------------------------------------------------------------------
// Arrangement engine

namespace {

struct ArrEvent {
  double s;
  int li, lj;  // line indices
};

std::vector<Complex> arrangement_fiber(const LineArrangement& arr, Complex t) {
  std::vector<Complex> out(static_cast<std::size_t>(arr.d()));
  for (int k = 0; k < arr.d(); ++k) {
    const Line& l = arr.lines[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(k)] = -(l.b * t + l.c) / l.a;
  }
  return out;
}

/// Exact per-pair crossing detection on one segment. `order` maps positions
/// to line indices and is updated through the swaps.
std::vector<Crossing> arrangement_detect_segment(const LineArrangement& arr,
                                                 const BivariatePoly& product,
                                                 const Segment& seg, std::vector<int>& order,
                                                 const CrossOptions& copts) {
  const int d = arr.d();
  std::vector<Complex> z0 = arrangement_fiber(arr, seg.start);
  std::vector<Complex> z1 = arrangement_fiber(arr, seg.end);

  std::vector<ArrEvent> events;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Complex P = z0[static_cast<std::size_t>(i)] - z0[static_cast<std::size_t>(j)];
      Complex Q = (z1[static_cast<std::size_t>(i)] - z1[static_cast<std::size_t>(j)]) - P;
      double slope = Q.real();
      if (std::abs(slope) < 1e-14) {
        if (std::abs(P.real()) < copts.cross_tol)
          throw ImproperCrossingError(
              "two strands keep a shared real part along a whole segment "
              "(degenerate arrangement chart)");
        continue;
      }
      double s = -P.real() / slope;
      if (s <= 0 || s >= 1) continue;
      events.push_back({s, i, j});
    }
  std::sort(events.begin(), events.end(),
            [](const ArrEvent& a, const ArrEvent& b) { return a.s < b.s; });

  std::vector<Crossing> crossings;
  std::size_t i = 0;
  while (i < events.size()) {
    std::size_t j = i + 1;
    while (j < events.size() && events[j].s - events[i].s < 10 * copts.refine_tol) ++j;
    std::vector<std::size_t> group(j - i);
    std::iota(group.begin(), group.end(), i);
    auto pos_of = [&](int line) {
      for (int p = 0; p < d; ++p)
        if (order[static_cast<std::size_t>(p)] == line) return p;
      throw Error("internal: line not found in order");
    };
    // Only disjoint simultaneous pairs may be reordered by position.
    auto share_line = [&](std::size_t a, std::size_t b) {
      return events[a].li == events[b].li || events[a].li == events[b].lj ||
             events[a].lj == events[b].li || events[a].lj == events[b].lj;
    };
    bool disjoint = true;
    for (std::size_t a = 0; a < group.size() && disjoint; ++a)
      for (std::size_t b = a + 1; b < group.size() && disjoint; ++b)
        disjoint = !share_line(group[a], group[b]);
    if (disjoint)
      std::sort(group.begin(), group.end(), [&](std::size_t a, std::size_t b) {
        return std::min(pos_of(events[a].li), pos_of(events[a].lj)) <
               std::min(pos_of(events[b].li), pos_of(events[b].lj));
      });
    for (std::size_t gi : group) {
      const ArrEvent& ev = events[gi];
      std::vector<Complex> fiber = arrangement_fiber(arr, seg.at(ev.s));
      double x = 0.5 * (fiber[static_cast<std::size_t>(ev.li)].real() +
                        fiber[static_cast<std::size_t>(ev.lj)].real());
      if (check_proper(fiber, x, copts.proper_tol) >= 3)
        throw ImproperCrossingError(
            "three or more arrangement strands share a real part at one event "
            "(concurrent lines crossing together); no rotation can repair this");
      int pp = pos_of(ev.li), pq = pos_of(ev.lj);
      if (std::abs(pp - pq) != 1)
        throw TrackError("arrangement detection: non-adjacent swap (missed event)");
      int lo = std::min(pp, pq);
      Fiber pre;
      pre.t = seg.at(ev.s);
      pre.points.resize(static_cast<std::size_t>(d));
      for (int p = 0; p < d; ++p)
        pre.points[static_cast<std::size_t>(p)] =
            fiber[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])];
      int sign = classify_crossing(pre, lo + 1, copts);

      Crossing cr;
      cr.s = ev.s;
      cr.t = pre.t;
      cr.index = lo + 1;
      cr.sign = sign;
      cr.pre_fiber = pre;
      cr.x = x;
      cr.y1 = pre.points[static_cast<std::size_t>(lo)].imag();
      cr.y2 = pre.points[static_cast<std::size_t>(lo + 1)].imag();
      if (cr.s < 1e-6 || cr.s > 1 - 1e-6)
        throw EndpointCrossingError("arrangement crossing at segment endpoint");
      auto res = cross_system_residual(product, seg, cr.s, cr.x, cr.y1, cr.y2);
      double scale1 = eval_scale(product, Complex(cr.x, cr.y1), cr.t);
      double scale2 = eval_scale(product, Complex(cr.x, cr.y2), cr.t);
      cr.residual =
          std::max(std::max(std::abs(res[0]), std::abs(res[1])) / std::max(scale1, 1e-300),
                   std::max(std::abs(res[2]), std::abs(res[3])) / std::max(scale2, 1e-300));
      crossings.push_back(std::move(cr));
      std::swap(order[static_cast<std::size_t>(lo)], order[static_cast<std::size_t>(lo + 1)]);
    }
    i = j;
  }
  return crossings;
}

}  // namespace

GroupReport arrangement_braid_generators(const LineArrangement& arr, const EngineOptions& opts) {
  validate_arrangement(arr);
  const int d = arr.d();
  GroupReport report;
  report.n = d;
  report.seed = opts.seed;
  BranchSet branch = arrangement_branch_points(arr, opts.branch_tol);
  report.branch_points = branch.points;
  if (branch.points.empty()) {
    auto [order, transitive] = monodromy_closure({}, d);
    report.monodromy_order = order;
    report.monodromy_transitive = transitive;
    return report;
  }
  BivariatePoly product = arrangement_product_poly(arr);
  Complex base = choose_base(branch, opts.seed);
  report.base = base;

  std::vector<Complex> base_vals = arrangement_fiber(arr, base);
  std::vector<int> base_order(static_cast<std::size_t>(d));
  std::iota(base_order.begin(), base_order.end(), 0);
  std::sort(base_order.begin(), base_order.end(), [&](int a, int b) {
    Complex za = base_vals[static_cast<std::size_t>(a)], zb = base_vals[static_cast<std::size_t>(b)];
    if (za.real() != zb.real()) return za.real() < zb.real();
    return za.imag() < zb.imag();
  });
  for (int p = 0; p + 1 < d; ++p)
    if (base_vals[static_cast<std::size_t>(base_order[static_cast<std::size_t>(p)])].real() >=
        base_vals[static_cast<std::size_t>(base_order[static_cast<std::size_t>(p + 1)])].real())
      throw TrackError("arrangement base fiber has coinciding real parts");

  for (int idx = 0; idx < branch.size(); ++idx) {
    bool done = false;
    Error last = Error("unattempted");
    for (int attempt = 0; attempt < 8 && !done; ++attempt) {
      try {
        Loop loop = keyhole_loop(branch, idx, base, opts.polygon_sides, opts.radius_factor,
                                 opts.seed, 0.41 * attempt);
        std::vector<int> order = base_order;
        std::vector<Crossing> crossings;
        auto segments = loop.segments();
        for (std::size_t si = 0; si < segments.size(); ++si) {
          auto segcr = arrangement_detect_segment(arr, product, segments[si], order, opts.cross);
          for (Crossing& c : segcr) {
            c.segment = static_cast<int>(si);
            crossings.push_back(std::move(c));
          }
        }
        if (order != base_order)
          throw Error("internal: arrangement loop permuted its strands");
        if (crossings.empty()) {
          ++report.empty_loops;
          done = true;
          break;
        }
        BraidReport gen;
        gen.branch_point = branch.points[static_cast<std::size_t>(idx)];
        gen.loop = loop;
        gen.crossings = crossings;
        gen.word = word_from_crossings(d, crossings);
        gen.reduced_word = free_reduce(gen.word);
        gen.core = strip_basing(gen.word, approach_word(d, crossings, loop.approach_segments));
        gen.perm = permutation(gen.word);
        gen.loop_retries = attempt;
        if (!gen.perm.is_identity())
          throw Error("internal: arrangement word permutation is not the identity");
        for (const Crossing& c : crossings) {
          gen.residual_max = std::max(gen.residual_max, c.residual);
          if (c.residual > 1e-6)
            throw Error("internal: arrangement crossing fails the residual check");
        }
        report.generators.push_back(std::move(gen));
        done = true;
      } catch (const EndpointCrossingError& e) {
        last = e;
      } catch (const TrackError& e) {
        last = e;
      } catch (const RoutingError& e) {
        last = e;
      }
    }
    if (!done) throw RoutingError(std::string("arrangement loop retries exhausted: ") + last.what());
  }
  for (const BraidReport& g : report.generators) report.monodromy_perms.push_back(g.perm);
  auto [order, transitive] = monodromy_closure(report.monodromy_perms, d);
  report.monodromy_order = order;
  report.monodromy_transitive = transitive;
  return report;
}

// ---------------------------------------------------------------------------
// Restriction of a hypersurface to a line

BivariatePoly restrict_to_line(const MultivariatePoly& F,
                               const std::optional<std::vector<Complex>>& u0_opt,
                               const std::optional<std::vector<Complex>>& v_opt,
                               std::uint64_t seed) {
  const int m = F.num_u_vars();
  if (F.deg_z() < 1) throw Error("restrict_to_line: hypersurface needs positive z-degree");
  if (u0_opt && static_cast<int>(u0_opt->size()) != m)
    throw Error("restrict_to_line: u0 has wrong dimension");
  if (v_opt && static_cast<int>(v_opt->size()) != m)
    throw Error("restrict_to_line: direction has wrong dimension");

  std::mt19937_64 rng(seed ^ 0x8f3c9a4be17ull);
  auto draw_point = [&]() {
    std::vector<Complex> out(static_cast<std::size_t>(m));
    for (auto& c : out) {
      double r = 2.0 * std::sqrt(u01(rng));
      c = std::polar(r, 6.283185307179586 * u01(rng));
    }
    return out;
  };

  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<Complex> u0 = u0_opt ? *u0_opt : draw_point();
    std::vector<Complex> v = v_opt ? *v_opt : draw_point();
    double vnorm = 0;
    for (Complex c : v) vnorm += std::abs(c);
    if (vnorm == 0) {
      if (v_opt) throw Error("restrict_to_line: direction must be nonzero");
      continue;
    }

    std::vector<std::vector<Complex>> rows(static_cast<std::size_t>(F.deg_z()) + 1,
                                           std::vector<Complex>(1, Complex(0, 0)));
    for (const auto& [e, c] : F.terms()) {
      std::vector<Complex> tcoeffs = {c};
      for (int var = 0; var < m; ++var) {
        for (int rep = 0; rep < e[static_cast<std::size_t>(var) + 1]; ++rep) {
          // multiply by (u0_var + v_var * t)
          std::vector<Complex> next(tcoeffs.size() + 1, Complex(0, 0));
          for (std::size_t k = 0; k < tcoeffs.size(); ++k) {
            next[k] += tcoeffs[k] * u0[static_cast<std::size_t>(var)];
            next[k + 1] += tcoeffs[k] * v[static_cast<std::size_t>(var)];
          }
          tcoeffs = std::move(next);
        }
      }
      auto& row = rows[static_cast<std::size_t>(e[0])];
      if (row.size() < tcoeffs.size()) row.resize(tcoeffs.size(), Complex(0, 0));
      for (std::size_t k = 0; k < tcoeffs.size(); ++k) row[k] += tcoeffs[k];
    }

    double top = 0, scale = 0;
    for (Complex c : rows.back()) top = std::max(top, std::abs(c));
    for (const auto& r : rows)
      for (Complex c : r) scale = std::max(scale, std::abs(c));
    if (top <= 1e-12 * std::max(scale, 1e-300)) {
      if (u0_opt && v_opt)
        throw Error("restrict_to_line: leading z-coefficient vanishes on this line");
      continue;
    }
    return BivariatePoly::from_coeffs(std::move(rows));
  }
  throw Error("restrict_to_line: no generic line found");
}

// ---------------------------------------------------------------------------
// Serialization and verification

namespace {

nlohmann::ordered_json cx(Complex c) { return nlohmann::ordered_json::array({c.real(), c.imag()}); }

nlohmann::ordered_json loop_json(const Loop& loop) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (Complex v : loop.vertices) arr.push_back(cx(v));
  return arr;
}

}  // namespace

std::string group_report_to_json(const GroupReport& report) {
  nlohmann::ordered_json j;
  j["n"] = report.n;
  j["lambda"] = cx(report.lambda);
  j["seed"] = report.seed;
  j["base"] = cx(report.base);
  nlohmann::ordered_json bps = nlohmann::ordered_json::array();
  for (Complex p : report.branch_points) bps.push_back(cx(p));
  j["branch_points"] = bps;
  nlohmann::ordered_json gens = nlohmann::ordered_json::array();
  for (const BraidReport& g : report.generators) {
    nlohmann::ordered_json jg;
    jg["branch_point"] = cx(g.branch_point);
    jg["word"] = word_to_string(g.word);
    jg["reduced_word"] = word_to_string(g.reduced_word);
    jg["core"] = word_to_string(g.core);
    jg["perm"] = g.perm.image;
    nlohmann::ordered_json crossings = nlohmann::ordered_json::array();
    for (const Crossing& c : g.crossings) {
      nlohmann::ordered_json jc;
      jc["s"] = c.s;
      jc["t"] = cx(c.t);
      jc["index"] = c.index;
      jc["sign"] = c.sign;
      jc["segment"] = c.segment;
      jc["x"] = c.x;
      jc["y1"] = c.y1;
      jc["y2"] = c.y2;
      crossings.push_back(std::move(jc));
    }
    jg["crossings"] = crossings;
    jg["residual_max"] = g.residual_max;
    jg["loop"] = loop_json(g.loop);
    jg["approach_segments"] = g.loop.approach_segments;
    gens.push_back(std::move(jg));
  }
  j["generators"] = gens;
  j["monodromy"] = {{"order", report.monodromy_order},
                    {"transitive", report.monodromy_transitive}};
  j["empty_loops"] = report.empty_loops;
  return j.dump(2) + "\n";
}

std::string group_report_to_text(const GroupReport& report) {
  std::ostringstream out;
  out << "strands: " << report.n << "\n";
  out << "lambda: " << format_complex(report.lambda) << "\n";
  out << "branch points (" << report.branch_points.size() << "):";
  for (Complex p : report.branch_points) out << " " << format_complex(p);
  out << "\n";
  for (std::size_t k = 0; k < report.generators.size(); ++k) {
    const BraidReport& g = report.generators[k];
    out << "generator " << (k + 1) << " at " << format_complex(g.branch_point) << "\n";
    out << "  word: " << word_to_string(g.word) << "\n";
    out << "  core: " << word_to_string(g.core) << "\n";
    out << "  perm: [";
    for (int p = 0; p < g.perm.n(); ++p)
      out << (p ? "," : "") << g.perm.image[static_cast<std::size_t>(p)];
    out << "]\n";
    out << "  crossings: " << g.crossings.size()
        << ", max residual: " << g.residual_max << "\n";
  }
  if (report.monodromy_order >= 0)
    out << "monodromy order: " << report.monodromy_order
        << (report.monodromy_transitive ? " (transitive)" : " (not transitive)") << "\n";
  else
    out << "monodromy order: skipped (too many strands); transitive: "
        << (report.monodromy_transitive ? "yes" : "no") << "\n";
  return out.str();
}

std::vector<std::string> verify_report_json(const std::string& report_json,
                                            const BivariatePoly& f) {
  std::vector<std::string> failures;
  nlohmann::json j = nlohmann::json::parse(report_json);
  const int n = j.at("n").get<int>();
  Complex lambda(j.at("lambda").at(0).get<double>(), j.at("lambda").at(1).get<double>());
  BivariatePoly fl = scale_z(f, lambda);

  int gi = 0;
  for (const auto& jg : j.at("generators")) {
    ++gi;
    std::string tag = "generator " + std::to_string(gi);
    BraidWord word = word_from_string(n, jg.at("word").get<std::string>());
    std::vector<int> perm = jg.at("perm").get<std::vector<int>>();
    if (permutation(word).image != perm)
      failures.push_back(tag + ": permutation does not match the word");

    std::vector<Complex> vertices;
    for (const auto& v : jg.at("loop"))
      vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());

    std::size_t ci = 0;
    for (const auto& jc : jg.at("crossings")) {
      ++ci;
      std::string ctag = tag + " crossing " + std::to_string(ci);
      double s = jc.at("s").get<double>();
      int seg_idx = jc.at("segment").get<int>();
      Complex t(jc.at("t").at(0).get<double>(), jc.at("t").at(1).get<double>());
      double x = jc.at("x").get<double>(), y1 = jc.at("y1").get<double>(),
             y2 = jc.at("y2").get<double>();
      int sign = jc.at("sign").get<int>();
      if (seg_idx < 0 || seg_idx + 1 >= static_cast<int>(vertices.size())) {
        failures.push_back(ctag + ": segment index out of range");
        continue;
      }
      Segment seg{vertices[static_cast<std::size_t>(seg_idx)],
                  vertices[static_cast<std::size_t>(seg_idx) + 1]};
      if (std::abs(seg.at(s) - t) > 1e-6 * std::max(1.0, std::abs(t)))
        failures.push_back(ctag + ": t does not lie at parameter s of its segment");
      if (sign != ((y1 < y2) ? 1 : -1))
        failures.push_back(ctag + ": sign contradicts the imaginary-part rule");
      auto res = cross_system_residual(fl, seg, s, x, y1, y2);
      double scale1 = eval_scale(fl, Complex(x, y1), seg.at(s));
      double scale2 = eval_scale(fl, Complex(x, y2), seg.at(s));
      double rel =
          std::max(std::max(std::abs(res[0]), std::abs(res[1])) / std::max(scale1, 1e-300),
                   std::max(std::abs(res[2]), std::abs(res[3])) / std::max(scale2, 1e-300));
      if (rel > 1e-6)
        failures.push_back(ctag + ": defining-system residual " + std::to_string(rel));
    }
  }
  return failures;
}

}  // namespace braidtrack
