#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "braidtrack/engine.hpp"

namespace py = pybind11;
namespace bt = braidtrack;

namespace {

bt::EngineOptions make_options(std::uint64_t seed, int polygon_sides, double radius_factor,
                               int lambda_retries, double track_tol, double cross_tol,
                               double proper_tol, std::optional<std::complex<double>> lambda) {
  bt::EngineOptions opts;
  opts.seed = seed;
  opts.polygon_sides = polygon_sides;
  opts.radius_factor = radius_factor;
  opts.cross.lambda_retries = lambda_retries;
  opts.cross.rng_seed = seed;
  opts.track.newton_tol = track_tol;
  opts.cross.cross_tol = cross_tol;
  opts.cross.proper_tol = proper_tol;
  if (lambda) opts.lambda_override = *lambda;
  return opts;
}

bt::RenderFormat render_format(const std::string& name) {
  if (name == "ascii") return bt::RenderFormat::ascii;
  if (name == "svg") return bt::RenderFormat::svg;
  if (name == "tikz") return bt::RenderFormat::tikz;
  throw bt::Error("unknown render format '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "braid group generators of plane curves and line arrangements";

  m.def(
      "braid",
      [](const std::string& curve, std::uint64_t seed, int polygon_sides, double radius_factor,
         int lambda_retries, double track_tol, double cross_tol, double proper_tol,
         std::optional<std::complex<double>> lambda) {
        auto opts = make_options(seed, polygon_sides, radius_factor, lambda_retries, track_tol,
                                 cross_tol, proper_tol, lambda);
        return bt::group_report_to_json(bt::braid_generators(bt::parse_poly(curve), opts));
      },
      py::arg("curve"), py::arg("seed") = 0, py::arg("polygon_sides") = 4,
      py::arg("radius_factor") = 0.2, py::arg("lambda_retries") = 5,
      py::arg("track_tol") = 1e-11, py::arg("cross_tol") = 1e-7, py::arg("proper_tol") = 1e-7,
      py::arg("lambda_override") = std::nullopt,
      "Braid group generators of the curve f(z,t)=0; returns the report as JSON text.");

  m.def(
      "branch_points",
      [](const std::string& curve, double tol) {
        auto f = bt::parse_poly(curve);
        std::vector<std::complex<double>> out;
        if (f.deg_z() >= 2 && f.deg_t() >= 1)
          for (auto p : bt::branch_points(f, tol).points) out.push_back(p);
        return out;
      },
      py::arg("curve"), py::arg("tol") = 1e-6,
      "Deduplicated branch points of the curve, sorted by (re, im).");

  m.def(
      "arrangement",
      [](const std::vector<std::vector<std::complex<double>>>& matrix, std::uint64_t seed,
         int polygon_sides, double radius_factor, double track_tol, double cross_tol,
         double proper_tol) {
        auto arr = bt::dehomogenize_arrangement(
            {std::vector<bt::Complex>(matrix.at(0).begin(), matrix.at(0).end()),
             std::vector<bt::Complex>(matrix.at(1).begin(), matrix.at(1).end()),
             std::vector<bt::Complex>(matrix.at(2).begin(), matrix.at(2).end())},
            seed);
        auto opts = make_options(seed, polygon_sides, radius_factor, 5, track_tol, cross_tol,
                                 proper_tol, std::nullopt);
        return bt::group_report_to_json(bt::arrangement_braid_generators(arr, opts));
      },
      py::arg("matrix"), py::arg("seed") = 0, py::arg("polygon_sides") = 4,
      py::arg("radius_factor") = 0.2, py::arg("track_tol") = 1e-11, py::arg("cross_tol") = 1e-7,
      py::arg("proper_tol") = 1e-7,
      "Braid group generators of the line arrangement given as a 3 x d coefficient matrix.");

  m.def(
      "arrangement_lines",
      [](const std::vector<std::vector<std::complex<double>>>& lines, std::uint64_t seed) {
        bt::LineArrangement arr;
        for (const auto& l : lines) arr.lines.push_back({l.at(0), l.at(1), l.at(2)});
        bt::EngineOptions opts;
        opts.seed = seed;
        opts.cross.rng_seed = seed;
        return bt::group_report_to_json(bt::arrangement_braid_generators(arr, opts));
      },
      py::arg("lines"), py::arg("seed") = 0,
      "Braid group generators from affine lines given as (a, b, c) with a z + b t + c = 0.");

  m.def(
      "render",
      [](const std::string& word, int strands, const std::string& format) {
        return bt::render(bt::word_from_string(strands, word), render_format(format));
      },
      py::arg("word"), py::arg("strands"), py::arg("format") = "ascii",
      "Draw a braid word as ascii, svg or tikz.");

  m.def(
      "free_reduce",
      [](const std::string& word, int strands) {
        return bt::word_to_string(bt::free_reduce(bt::word_from_string(strands, word)));
      },
      py::arg("word"), py::arg("strands"));

  m.def(
      "word_permutation",
      [](const std::string& word, int strands) {
        return bt::permutation(bt::word_from_string(strands, word)).image;
      },
      py::arg("word"), py::arg("strands"),
      "Permutation image of the word acting on strand positions.");

  m.def(
      "exponent_sum",
      [](const std::string& word, int strands) {
        return bt::exponent_sum(bt::word_from_string(strands, word));
      },
      py::arg("word"), py::arg("strands"));

  m.def(
      "restrict_to_line",
      [](const std::string& hypersurface, int num_u_vars,
         std::optional<std::vector<std::complex<double>>> point,
         std::optional<std::vector<std::complex<double>>> direction, std::uint64_t seed) {
        auto F = bt::parse_multivariate(hypersurface, num_u_vars);
        std::optional<std::vector<bt::Complex>> u0, v;
        if (point) u0 = std::vector<bt::Complex>(point->begin(), point->end());
        if (direction) v = std::vector<bt::Complex>(direction->begin(), direction->end());
        return bt::poly_to_json(bt::restrict_to_line(F, u0, v, seed));
      },
      py::arg("hypersurface"), py::arg("num_u_vars"), py::arg("point") = std::nullopt,
      py::arg("direction") = std::nullopt, py::arg("seed") = 0,
      "Restrict f(z, u1..um) to the line u = point + t*direction; returns the curve as JSON.");

  m.def(
      "poly_json",
      [](const std::string& curve) { return bt::poly_to_json(bt::parse_poly(curve)); },
      py::arg("curve"), "Canonical JSON form of a parsed curve.");

  m.def(
      "verify",
      [](const std::string& report_json, const std::string& curve) {
        return bt::verify_report_json(report_json, bt::parse_poly(curve));
      },
      py::arg("report_json"), py::arg("curve"),
      "Re-check a report against its curve; returns failure descriptions (empty = pass).");

  m.attr("__version__") = "0.1.0";
}
