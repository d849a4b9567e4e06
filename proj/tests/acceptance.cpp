// Acceptance suite: end-to-end criteria with fixed seeds and pinned
// tolerances. Prints one PASS/FAIL line per criterion and exits with the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "braidtrack/engine.hpp"

using namespace braidtrack;

namespace {

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

struct Check {
  std::string name;
  double time_limit_s;
  std::function<void()> fn;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Error("check failed: " + what);
}

template <typename T>
void require_eq(const T& got, const T& want, const std::string& what) {
  if (!(got == want)) throw Error("check failed: " + what);
}

BraidWord word(int n, std::initializer_list<std::pair<int, int>> ls) {
  std::vector<BraidLetter> v;
  for (auto [i, s] : ls) v.push_back({i, s});
  return make_word(n, std::move(v));
}

BivariatePoly dessin_curve(int which) {
  double root21 = std::sqrt(21.0);
  double alpha = which == 1 ? (34 + 6 * root21) / 7 : (34 - 6 * root21) / 7;
  auto z = BivariatePoly::variable_z();
  auto q = z * z - BivariatePoly::constant(Complex(2, 0)) * z +
           BivariatePoly::constant(Complex(alpha, 0));
  auto g = z * z * z * q * q;
  if (which == 1)
    return -(BivariatePoly::constant(Complex(1.0 / 1000, 0)) * g) - BivariatePoly::variable_t();
  return g - BivariatePoly::constant(Complex(1.0 / 20, 0)) * BivariatePoly::variable_t();
}

BivariatePoly random_monic_curve(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int nz = 2 + static_cast<int>(u01(rng) * 3);
  int nt = 1 + static_cast<int>(u01(rng) * 3);
  std::vector<std::vector<Complex>> rows(static_cast<std::size_t>(nz) + 1,
                                         std::vector<Complex>(static_cast<std::size_t>(nt) + 1));
  for (auto& r : rows)
    for (auto& c : r) c = Complex(2 * u01(rng) - 1, 2 * u01(rng) - 1);
  for (int j = 0; j <= nt; ++j)
    rows[static_cast<std::size_t>(nz)][static_cast<std::size_t>(j)] = Complex(0, 0);
  rows[static_cast<std::size_t>(nz)][0] = Complex(1, 0);
  return BivariatePoly::from_coeffs(rows);
}

std::vector<std::vector<Complex>> fourteen_line_matrix() {
  const double r0[] = {1, 0, 1, 0, 1, 1, 2, 3, 2, 3, 1, 1, -1, 0};
  const double r1[] = {0, 1, 0, 1, 1, 2, 1, 2, 3, 1, 3, -1, 1, 0};
  const double r2[] = {0, 0, 1, 1, 2, 2, 2, 4, 4, 4, 4, 4, 4, 1};
  std::vector<std::vector<Complex>> m(3);
  for (int c = 0; c < 14; ++c) {
    m[0].emplace_back(r0[c], 0);
    m[1].emplace_back(r1[c], 0);
    m[2].emplace_back(r2[c], 0);
  }
  return m;
}

Permutation tracked_loop_permutation(const BivariatePoly& fl, const Loop& loop,
                                     const Fiber& base_fiber, const TrackOptions& topts) {
  Fiber fib = base_fiber;
  for (const Segment& seg : loop.segments()) fib = track_segment(fl, seg, fib, topts).end;
  Permutation out;
  out.image.assign(base_fiber.points.size(), 0);
  for (int k = 0; k < fib.size(); ++k) {
    int arg = -1;
    double best = 1e300;
    for (int l = 0; l < base_fiber.size(); ++l) {
      double dd = std::abs(fib.points[static_cast<std::size_t>(k)] -
                           base_fiber.points[static_cast<std::size_t>(l)]);
      if (dd < best) {
        best = dd;
        arg = l;
      }
    }
    require(best < 1e-6, "tracked loop returns to the base fiber");
    out.image[static_cast<std::size_t>(arg)] = k + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------

void criterion_1() {
  auto f = parse_poly("z^3 - t^2");
  auto bs = branch_points(f);
  require(bs.size() == 1, "one branch point");
  require(std::abs(bs.points[0]) < 1e-8, "branch point at the origin");

  // Unit triangle loop with vertices at angles 2*pi*j/3 + 0.2, traversed
  // from the vertex near angle 0.2.
  const double tp = 6.283185307179586476925286766559;
  auto tri = [&](int j) { return std::polar(1.0, tp * j / 3.0 + 0.2); };
  std::vector<Complex> loop = {tri(3), tri(1), tri(2), tri(3)};
  TrackOptions topts;
  CrossOptions copts;
  Fiber fib = initial_fiber(f, loop[0], topts);
  std::vector<Crossing> crossings;
  for (std::size_t k = 0; k + 1 < loop.size(); ++k) {
    auto det = detect_crossings(f, Segment{loop[k], loop[k + 1]}, fib, topts, copts);
    for (auto& c : det.crossings) crossings.push_back(c);
    fib = det.end;
  }
  auto w = word_from_crossings(3, crossings);
  require_eq(free_reduce(w), word(3, {{2, 1}, {1, 1}, {2, 1}, {1, 1}}),
             "loop word reduces to s2 s1 s2 s1");
  require_eq(permutation(w).image, std::vector<int>{2, 3, 1}, "permutation [2,3,1]");
  require(crossings.size() == 4, "four crossings");
  const double moduli[] = {0.527, 0.510, 0.667, 0.755};
  for (int k = 0; k < 4; ++k)
    require(std::abs(std::abs(crossings[static_cast<std::size_t>(k)].t) - moduli[k]) < 5e-2,
            "crossing modulus " + std::to_string(k + 1));

  // Full engine run reproduces the same core and permutation.
  EngineOptions opts;
  opts.seed = 1;
  auto rep = braid_generators(f, opts);
  require(rep.generators.size() == 1, "engine produces one generator");
  require_eq(rep.generators[0].core, word(3, {{2, 1}, {1, 1}, {2, 1}, {1, 1}}),
             "engine core is s2 s1 s2 s1");
  require_eq(rep.generators[0].perm.image, std::vector<int>{2, 3, 1}, "engine permutation");
}

void criterion_2() {
  EngineOptions opts;
  opts.seed = 1;
  auto rep = braid_generators(parse_poly("z^4 - 4*z^2 + 3 + t"), opts);
  require(rep.branch_points.size() == 2, "two branch points");
  require(std::abs(rep.branch_points[0] - Complex(-3, 0)) < 1e-8, "branch point -3");
  require(std::abs(rep.branch_points[1] - Complex(1, 0)) < 1e-8, "branch point 1");
  require(rep.generators.size() == 2, "two generators");
  require_eq(rep.generators[0].core, word(4, {{2, 1}}), "core at -3 is s2");
  bool o13 = rep.generators[1].core == word(4, {{1, 1}, {3, 1}});
  bool o31 = rep.generators[1].core == word(4, {{3, 1}, {1, 1}});
  require(o13 || o31, "core at 1 is {s1, s3} in either order");
  require_eq(rep.generators[0].perm.image, std::vector<int>{1, 3, 2, 4},
             "perm at -3 swaps the middle strands");
  require_eq(rep.generators[1].perm.image, std::vector<int>{2, 1, 4, 3},
             "perm at 1 is a double transposition");
}

void criterion_3() {
  EngineOptions opts;
  opts.seed = 1;
  auto rep = braid_generators(parse_poly("z^3 - t^2*(1-t)"), opts);
  require(rep.branch_points.size() == 2, "two branch points");
  require(std::abs(rep.branch_points[0]) < 1e-8, "branch point 0");
  require(std::abs(rep.branch_points[1] - Complex(1, 0)) < 1e-8, "branch point 1");
  require(rep.generators.size() == 2, "two generators");
  require(rep.generators[0].core.length() == 4, "core at 0 has 4 letters");
  require(rep.generators[1].core.length() == 2, "core at 1 has 2 letters");
  for (const auto& g : rep.generators) {
    require(!g.perm.is_identity(), "permutation is a 3-cycle (not identity)");
    require(compose(compose(g.perm, g.perm), g.perm).is_identity(),
            "permutation is a 3-cycle (order 3)");
  }
  require(rep.monodromy_order == 3, "monodromy order 3");
  require(rep.monodromy_transitive, "monodromy transitive");
  int es0 = exponent_sum(rep.generators[0].core);
  int es1 = exponent_sum(rep.generators[1].core);
  require(std::abs(es0) == 4, "exponent sum 4 at branch point 0");
  require(std::abs(es1) == 2, "exponent sum 2 at branch point 1");
  require(es0 * es1 > 0, "consistent orientation sign");
}

void criterion_4() {
  for (int which : {1, 2}) {
    auto bs = branch_points(dessin_curve(which));
    require(bs.size() == 2, "curve " + std::to_string(which) + " has two finite branch points");
  }
  EngineOptions opts;
  opts.seed = 1;
  auto rep = braid_generators(dessin_curve(2), opts);
  require(rep.branch_points.size() == 2, "second curve: two branch points");
  require(std::abs(rep.branch_points[0]) < 1e-6, "branch point 0");
  require(std::abs(rep.branch_points[1] - Complex(0.10794226159, 0)) < 1e-6,
          "branch point 0.10794226159");
  require(rep.generators.size() == 2, "two generators");

  // The 4-letter core: exponent sum of modulus 4, three mutually commuting
  // letters plus one more.
  const BraidWord& core0 = rep.generators[0].core;
  require(core0.length() == 4, "core at 0 has 4 letters");
  require(std::abs(exponent_sum(core0)) == 4, "core at 0 has |exponent sum| 4");
  int commuting = 0;
  for (int a = 0; a < 4; ++a) {
    bool all = true;
    for (int b = 0; b < 4; ++b)
      if (b != a)
        for (int c = b + 1; c < 4; ++c)
          if (c != a &&
              std::abs(core0.letters[static_cast<std::size_t>(b)].index -
                       core0.letters[static_cast<std::size_t>(c)].index) < 2)
            all = false;
    if (all) ++commuting;
  }
  require(commuting >= 1, "three mutually commuting letters plus one more");

  // The core at 0.10794...: a simultaneous commuting pattern; with common
  // basing the cancelling pair reduces away leaving the commuting letters,
  // so every surviving letter pair commutes.
  const BraidWord& core1 = rep.generators[1].core;
  require(core1.length() >= 2, "core at 0.10794 is nontrivial");
  require(std::abs(exponent_sum(core1)) == 2, "core at 0.10794 has |exponent sum| 2");
  for (std::size_t a = 0; a < core1.letters.size(); ++a)
    for (std::size_t b = a + 1; b < core1.letters.size(); ++b)
      require(std::abs(core1.letters[a].index - core1.letters[b].index) >= 2,
              "core letters at 0.10794 commute pairwise");
}

void criterion_5() {
  std::vector<std::vector<Complex>> m = {
      {Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0), Complex(1, 0)},
      {Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(-1, 0), Complex(1, 0)},
      {Complex(0, 0), Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(1, 0)}};
  auto arr = dehomogenize_arrangement(m, 3);
  EngineOptions opts;
  opts.seed = 3;
  auto rep = arrangement_braid_generators(arr, opts);
  require(rep.branch_points.size() == 8, "eight branch points");
  require(rep.generators.size() == 8, "eight generators");
  int squares = 0;
  for (const auto& g : rep.generators) {
    require(g.perm.is_identity(), "trivial monodromy");
    if (g.core.length() == 2 && g.core.letters[0] == g.core.letters[1]) ++squares;
  }
  require(squares >= 1, "at least one core is a generator squared");
}

void criterion_6() {
  auto arr = dehomogenize_arrangement(fourteen_line_matrix(), 3);
  EngineOptions opts;
  opts.seed = 3;
  auto rep = arrangement_braid_generators(arr, opts);
  require(rep.branch_points.size() == 46, "46 branch points");
  require(rep.generators.size() == 46, "46 generators");
  long total = 0;
  for (const auto& g : rep.generators) total += static_cast<long>(g.crossings.size());
  require(total >= 2000, "at least 2000 crossings in total (got " + std::to_string(total) + ")");
}

void criterion_7() {
  for (int curve = 0; curve < 50; ++curve) {
    auto f = random_monic_curve(1000 + static_cast<std::uint64_t>(curve));
    EngineOptions opts;
    opts.seed = 17 + static_cast<std::uint64_t>(curve);
    auto rep = braid_generators(f, opts);
    auto fl = scale_z(f, rep.lambda);
    Fiber base_fiber = initial_fiber(fl, rep.base, opts.track);

    std::vector<int> exponent_sums;
    for (const auto& g : rep.generators) {
      // Independent endpoint tracking of the same loop, crossings ignored.
      Permutation tracked = tracked_loop_permutation(fl, g.loop, base_fiber, opts.track);
      require_eq(permutation(g.word), tracked, "word permutation equals endpoint tracking");
      // Defining-system residual for every crossing.
      auto segs = g.loop.segments();
      for (const Crossing& c : g.crossings) {
        const Segment& seg = segs[static_cast<std::size_t>(c.segment)];
        auto res = cross_system_residual(fl, seg, c.s, c.x, c.y1, c.y2);
        double s1 = eval_scale(fl, Complex(c.x, c.y1), c.t);
        double s2 = eval_scale(fl, Complex(c.x, c.y2), c.t);
        double rel =
            std::max(std::max(std::abs(res[0]), std::abs(res[1])) / std::max(s1, 1e-300),
                     std::max(std::abs(res[2]), std::abs(res[3])) / std::max(s2, 1e-300));
        require(rel < 1e-6, "crossing residual below 1e-6");
      }
      exponent_sums.push_back(exponent_sum(g.word));
    }

    // Reversal property, checked on the first loop's segments.
    if (!rep.generators.empty()) {
      const auto& g = rep.generators.front();
      Fiber fib = base_fiber;
      for (const Segment& seg : g.loop.segments()) {
        auto fwd = detect_crossings(fl, seg, fib, opts.track, opts.cross);
        auto back = detect_crossings(fl, seg.reversed(), fwd.end, opts.track, opts.cross);
        require(fwd.crossings.size() == back.crossings.size(), "reversal preserves the count");
        std::size_t m_count = fwd.crossings.size();
        for (std::size_t k = 0; k < m_count; ++k) {
          const Crossing& a = fwd.crossings[k];
          const Crossing& b = back.crossings[m_count - 1 - k];
          require(a.index == b.index, "reversal preserves indices");
          require(a.sign == -b.sign, "reversal flips signs");
          require(std::abs(a.s - (1 - b.s)) < 1e-6, "reversal mirrors the parameter");
        }
        fib = fwd.end;
      }
    }

    // Exponent sums are invariant across regularization factors.
    for (int attempt = 1; attempt <= 2; ++attempt) {
      EngineOptions lopts = opts;
      CrossOptions c;
      c.rng_seed = opts.seed;
      lopts.lambda_override = regularize_lambda(c, attempt);
      auto rep2 = braid_generators(f, lopts);
      require(rep2.generators.size() == rep.generators.size(),
              "generator count invariant under regularization");
      std::vector<int> es2;
      for (const auto& g : rep2.generators) es2.push_back(exponent_sum(g.word));
      require_eq(es2, exponent_sums, "exponent sums invariant under regularization");
    }
  }
}

void criterion_8() {
  for (int rep_i = 0; rep_i < 10; ++rep_i) {
    std::mt19937_64 rng(4000 + static_cast<std::uint64_t>(rep_i));
    int d = 3 + (rep_i % 2);
    LineArrangement arr;
    for (int k = 0; k < d; ++k)
      arr.lines.push_back({Complex(1, 0), Complex(2 * u01(rng) - 1, 2 * u01(rng) - 1),
                           Complex(2 * u01(rng) - 1, 2 * u01(rng) - 1)});
    EngineOptions opts;
    opts.seed = 99 + static_cast<std::uint64_t>(rep_i);
    auto fast = arrangement_braid_generators(arr, opts);
    auto slow = braid_generators(arrangement_product_poly(arr), opts);
    require(fast.generators.size() == slow.generators.size(), "same generator count");
    for (std::size_t g = 0; g < fast.generators.size(); ++g) {
      require(std::abs(fast.generators[g].branch_point - slow.generators[g].branch_point) < 5e-4,
              "aligned branch points");
      require_eq(free_reduce(fast.generators[g].core), free_reduce(slow.generators[g].core),
                 "identical reduced core words");
    }
  }
}

void criterion_9() {
  std::mt19937_64 rng(777);
  auto random_word = [&](int n, int len) {
    std::vector<BraidLetter> ls;
    for (int k = 0; k < len; ++k)
      ls.push_back({1 + static_cast<int>(u01(rng) * (n - 1)), u01(rng) < 0.5 ? 1 : -1});
    return make_word(n, std::move(ls));
  };
  for (int rep = 0; rep < 1000; ++rep) {
    int n = 2 + static_cast<int>(u01(rng) * 7);
    auto w = random_word(n, static_cast<int>(u01(rng) * 30));
    auto r = free_reduce(w);
    require_eq(free_reduce(r), r, "free_reduce is idempotent");
    require(r.length() <= w.length(), "free_reduce never grows");
    require_eq(permutation(r), permutation(w), "free_reduce preserves the permutation");
    require(exponent_sum(r) == exponent_sum(w), "free_reduce preserves the exponent sum");
    auto wi = invert(w);
    require_eq(invert(wi), w, "invert is an involution");
    require(free_reduce(concat(w, wi)).letters.empty(), "w * w^-1 reduces to the identity");
  }
  // 100 random applicable relation moves preserve both invariants.
  int applied = 0;
  while (applied < 100) {
    int n = 3 + static_cast<int>(u01(rng) * 5);
    auto w = random_word(n, 10 + static_cast<int>(u01(rng) * 14));
    auto p = permutation(w);
    int es = exponent_sum(w);
    std::size_t pos = static_cast<std::size_t>(u01(rng) * w.letters.size());
    RelationKind kind = u01(rng) < 0.5 ? RelationKind::braid : RelationKind::commute;
    MoveDir dir = u01(rng) < 0.5 ? MoveDir::forward : MoveDir::backward;
    try {
      auto m = relation_move(w, pos, kind, dir);
      require_eq(permutation(m), p, "relation move preserves the permutation");
      require(exponent_sum(m) == es, "relation move preserves the exponent sum");
      ++applied;
    } catch (const Error&) {
      // no pattern at this position; draw again
    }
  }
}

}  // namespace

int main() {
  std::vector<Check> checks = {
      {"1: cubic z^3 - t^2 (branch point, word, permutation, crossing moduli)", 5.0, criterion_1},
      {"2: quartic z^4 - 4 z^2 + 3 + t (two branch points, cores, perms)", 5.0, criterion_2},
      {"3: cubic z^3 - t^2 (1 - t) (core lengths, 3-cycles, closure)", 5.0, criterion_3},
      {"4: dessin pair (branch points, core structure)", 30.0, criterion_4},
      {"5: five-line arrangement (8 trivial-monodromy generators)", 60.0, criterion_5},
      {"6: fourteen-line arrangement (46 generators, crossing count)", 900.0, criterion_6},
      {"7: oracle equivalence on 50 random curves", 600.0, criterion_7},
      {"8: arrangement fast path vs generic path", 120.0, criterion_8},
      {"9: braid algebra properties (1000 random words)", 60.0, criterion_9},
  };

  int failures = 0;
  for (const auto& check : checks) {
    auto start = std::chrono::steady_clock::now();
    std::string verdict = "PASS";
    std::string detail;
    try {
      check.fn();
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = e.what();
      ++failures;
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (verdict == "PASS" && elapsed >= check.time_limit_s) {
      verdict = "FAIL";
      detail = "runtime " + std::to_string(elapsed) + "s exceeds " +
               std::to_string(check.time_limit_s) + "s";
      ++failures;
    }
    std::printf("[%s] criterion %s (%.2fs)%s%s\n", verdict.c_str(), check.name.c_str(), elapsed,
                detail.empty() ? "" : " - ", detail.c_str());
    std::fflush(stdout);
  }
  if (failures == 0) std::printf("all %zu acceptance criteria passed\n", checks.size());
  return failures;
}
