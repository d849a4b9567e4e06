// braidtrack: braid group generators of plane curves and line arrangements
// by numerical continuation.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "braidtrack/engine.hpp"

namespace bt = braidtrack;

namespace {

struct CommonFlags {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string lambda_text;
  int polygon_sides = 4;
  double radius_factor = 0.2;
  double track_tol = 1e-11;
  double cross_tol = 1e-7;
  double proper_tol = 1e-7;
  int lambda_retries = 5;
  std::string format = "json";
  std::string out_path;
  std::string render_format;
  std::string plot_loops_path;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "random seed (fallback: BRAIDTRACK_SEED)")
      ->each([&](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--lambda", flags.lambda_text, "override the regularization factor, as re,im");
  cmd->add_option("--polygon-sides", flags.polygon_sides, "loop polygon sides")
      ->check(CLI::Range(3, 64));
  cmd->add_option("--radius-factor", flags.radius_factor, "loop polygon radius factor");
  cmd->add_option("--track-tol", flags.track_tol, "corrector tolerance");
  cmd->add_option("--cross-tol", flags.cross_tol, "crossing coincidence tolerance");
  cmd->add_option("--proper-tol", flags.proper_tol, "properness tolerance");
  cmd->add_option("--lambda-retries", flags.lambda_retries, "regularization retries");
  cmd->add_option("--format", flags.format, "output format: json or text")
      ->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--out", flags.out_path, "write the report to a file instead of stdout");
  cmd->add_option("--render", flags.render_format, "also render generator cores")
      ->check(CLI::IsMember({"ascii", "svg", "tikz"}));
  cmd->add_option("--plot-loops", flags.plot_loops_path, "write the loop geometry as SVG");
}

bt::EngineOptions engine_options(const CommonFlags& flags) {
  bt::EngineOptions opts;
  opts.seed = flags.seed;
  if (!flags.seed_set) {
    if (const char* env = std::getenv("BRAIDTRACK_SEED")) opts.seed = std::strtoull(env, nullptr, 10);
  }
  opts.polygon_sides = flags.polygon_sides;
  opts.radius_factor = flags.radius_factor;
  opts.track.newton_tol = flags.track_tol;
  opts.cross.cross_tol = flags.cross_tol;
  opts.cross.proper_tol = flags.proper_tol;
  opts.cross.lambda_retries = flags.lambda_retries;
  opts.cross.rng_seed = opts.seed;
  if (!flags.lambda_text.empty()) {
    double re = 0, im = 0;
    if (std::sscanf(flags.lambda_text.c_str(), "%lf,%lf", &re, &im) != 2)
      throw bt::Error("--lambda expects re,im");
    opts.lambda_override = bt::Complex(re, im);
  }
  return opts;
}

void emit(const std::string& text, const CommonFlags& flags) {
  if (flags.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(flags.out_path, std::ios::binary);
  if (!out) throw bt::Error("cannot open output file " + flags.out_path);
  out << text;
}

void emit_report(const bt::GroupReport& report, const CommonFlags& flags) {
  std::string text = flags.format == "json" ? bt::group_report_to_json(report)
                                            : bt::group_report_to_text(report);
  if (!flags.render_format.empty()) {
    bt::RenderFormat rf = flags.render_format == "ascii"  ? bt::RenderFormat::ascii
                          : flags.render_format == "svg" ? bt::RenderFormat::svg
                                                          : bt::RenderFormat::tikz;
    std::ostringstream extra;
    for (std::size_t k = 0; k < report.generators.size(); ++k) {
      extra << "-- core of generator " << (k + 1) << " --\n"
            << bt::render(report.generators[k].core, rf);
    }
    text += extra.str();
  }
  emit(text, flags);
  if (!flags.plot_loops_path.empty()) {
    std::vector<bt::Loop> loops;
    for (const auto& g : report.generators) loops.push_back(g.loop);
    bt::BranchSet bs;
    bs.points = report.branch_points;
    std::ofstream svg(flags.plot_loops_path, std::ios::binary);
    if (!svg) throw bt::Error("cannot open " + flags.plot_loops_path);
    svg << bt::loops_to_svg(loops, bs);
  }
}

bt::Complex json_complex(const nlohmann::json& v) {
  if (v.is_number()) return bt::Complex(v.get<double>(), 0);
  return bt::Complex(v.at(0).get<double>(), v.at(1).get<double>());
}

bt::LineArrangement load_arrangement(const std::string& path, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw bt::Error("cannot open arrangement file " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.contains("lines")) {
    bt::LineArrangement arr;
    for (const auto& l : j.at("lines"))
      arr.lines.push_back({json_complex(l.at(0)), json_complex(l.at(1)), json_complex(l.at(2))});
    bt::validate_arrangement(arr);
    return arr;
  }
  if (j.contains("matrix")) {
    std::vector<std::vector<bt::Complex>> m;
    for (const auto& row : j.at("matrix")) {
      std::vector<bt::Complex> r;
      for (const auto& v : row) r.push_back(json_complex(v));
      m.push_back(std::move(r));
    }
    return bt::dehomogenize_arrangement(m, seed);
  }
  throw bt::Error("arrangement file needs a \"lines\" or \"matrix\" field");
}

std::vector<bt::Complex> parse_point_list(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<bt::Complex> out;
  for (const auto& v : j) out.push_back(json_complex(v));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"braid group generators of plane algebraic curves and line arrangements"};
  app.require_subcommand(1);

  CommonFlags braid_flags, branch_flags, arr_flags, restrict_flags;
  std::string braid_input, branch_input, arr_input, restrict_input;
  std::string render_word, render_fmt = "ascii", render_out;
  int render_strands = 2;
  std::string verify_report, verify_input, verify_lines;
  std::string restrict_point, restrict_direction;
  int restrict_uvars = 0;
  bool restrict_run_braid = false;

  auto* cmd_braid = app.add_subcommand("braid", "braid group generators of a curve f(z,t)=0");
  cmd_braid->add_option("input", braid_input, "polynomial in z and t")->required();
  add_common(cmd_braid, braid_flags);

  auto* cmd_branch = app.add_subcommand("branch", "branch points of a curve");
  cmd_branch->add_option("input", branch_input, "polynomial in z and t")->required();
  add_common(cmd_branch, branch_flags);

  auto* cmd_arr = app.add_subcommand("arrangement", "braid group generators of a line arrangement");
  cmd_arr->add_option("input", arr_input, "arrangement JSON file")->required();
  add_common(cmd_arr, arr_flags);

  auto* cmd_render = app.add_subcommand("render", "draw a braid word");
  cmd_render->add_option("word", render_word, "braid word, e.g. \"s2 s1 s2 s1\"");
  cmd_render->add_option("--strands", render_strands, "strand count")->required();
  cmd_render->add_option("--render-format", render_fmt, "ascii, svg or tikz")
      ->check(CLI::IsMember({"ascii", "svg", "tikz"}));
  cmd_render->add_option("--out", render_out, "output file");

  auto* cmd_restrict = app.add_subcommand("restrict",
                                          "restrict a hypersurface f(z,u1..um) to a line");
  cmd_restrict->add_option("input", restrict_input, "polynomial in z and u1..um")->required();
  cmd_restrict->add_option("--uvars", restrict_uvars, "number of u variables")->required();
  cmd_restrict->add_option("--point", restrict_point, "base point, JSON list of [re,im]");
  cmd_restrict->add_option("--direction", restrict_direction, "direction, JSON list of [re,im]");
  cmd_restrict->add_flag("--braid", restrict_run_braid, "run the braid computation after restricting");
  add_common(cmd_restrict, restrict_flags);

  auto* cmd_verify = app.add_subcommand("verify", "re-check a report produced by this tool");
  cmd_verify->add_option("report", verify_report, "report JSON file")->required();
  cmd_verify->add_option("--input", verify_input, "the curve the report was computed from");
  cmd_verify->add_option("--lines", verify_lines, "the arrangement file the report came from");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_braid) {
      auto opts = engine_options(braid_flags);
      auto report = bt::braid_generators(bt::parse_poly(braid_input), opts);
      emit_report(report, braid_flags);
    } else if (*cmd_branch) {
      auto opts = engine_options(branch_flags);
      auto f = bt::parse_poly(branch_input);
      bt::BranchSet bs;
      if (f.deg_z() >= 2 && f.deg_t() >= 1) bs = bt::branch_points(f, opts.branch_tol);
      if (branch_flags.format == "json") {
        nlohmann::ordered_json j;
        auto arr = nlohmann::ordered_json::array();
        for (auto p : bs.points) arr.push_back({p.real(), p.imag()});
        j["branch_points"] = arr;
        emit(j.dump(2) + "\n", branch_flags);
      } else {
        std::ostringstream out;
        out << "branch points (" << bs.points.size() << "):";
        for (auto p : bs.points) out << " " << bt::format_complex(p);
        out << "\n";
        emit(out.str(), branch_flags);
      }
    } else if (*cmd_arr) {
      auto opts = engine_options(arr_flags);
      auto arr = load_arrangement(arr_input, opts.seed);
      auto report = bt::arrangement_braid_generators(arr, opts);
      emit_report(report, arr_flags);
    } else if (*cmd_render) {
      auto w = bt::word_from_string(render_strands, render_word);
      bt::RenderFormat rf = render_fmt == "ascii"  ? bt::RenderFormat::ascii
                            : render_fmt == "svg" ? bt::RenderFormat::svg
                                                   : bt::RenderFormat::tikz;
      std::string text = bt::render(w, rf);
      if (render_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(render_out, std::ios::binary);
        if (!out) throw bt::Error("cannot open " + render_out);
        out << text;
      }
    } else if (*cmd_restrict) {
      auto opts = engine_options(restrict_flags);
      auto F = bt::parse_multivariate(restrict_input, restrict_uvars);
      std::optional<std::vector<bt::Complex>> u0, v;
      if (!restrict_point.empty()) u0 = parse_point_list(restrict_point);
      if (!restrict_direction.empty()) v = parse_point_list(restrict_direction);
      auto f = bt::restrict_to_line(F, u0, v, opts.seed);
      if (restrict_run_braid) {
        emit_report(bt::braid_generators(f, opts), restrict_flags);
      } else if (restrict_flags.format == "json") {
        emit(bt::poly_to_json(f) + "\n", restrict_flags);
      } else {
        emit(bt::to_string(f) + "\n", restrict_flags);
      }
    } else if (*cmd_verify) {
      std::ifstream in(verify_report);
      if (!in) throw bt::Error("cannot open report " + verify_report);
      std::stringstream buf;
      buf << in.rdbuf();
      bt::BivariatePoly f;
      if (!verify_input.empty()) {
        f = bt::parse_poly(verify_input);
      } else if (!verify_lines.empty()) {
        nlohmann::json rj = nlohmann::json::parse(buf.str());
        std::uint64_t seed = rj.value("seed", 0ull);
        f = bt::arrangement_product_poly(load_arrangement(verify_lines, seed));
      } else {
        throw bt::Error("verify needs --input or --lines");
      }
      auto failures = bt::verify_report_json(buf.str(), f);
      if (failures.empty()) {
        std::cout << "OK\n";
      } else {
        std::cout << "FAIL\n";
        for (const auto& msg : failures) std::cerr << msg << "\n";
        return 1;
      }
    }
  } catch (const bt::LambdaExhaustedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const bt::ImproperCrossingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
