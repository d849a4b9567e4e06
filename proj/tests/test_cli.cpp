// End-to-end checks of the command line tool: exit codes, JSON shape,
// determinism, render goldens and the verify round trip.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int checks = 0, failures = 0;

void expect(bool ok, const std::string& what) {
  ++checks;
  if (!ok) {
    ++failures;
    std::fprintf(stderr, "FAILED: %s\n", what.c_str());
  }
}

struct RunResult {
  int exit_code;
  std::string out;
};

std::string g_binary;
std::string g_tmpdir;

RunResult run(const std::string& args) {
  std::string out_path = g_tmpdir + "/cli_out.txt";
  std::string cmd = g_binary + " " + args + " > " + out_path + " 2> " + g_tmpdir + "/cli_err.txt";
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(rc);
  std::ifstream in(out_path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  r.out = buf.str();
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: test_cli <braidtrack-binary> <data-dir>\n");
    return 2;
  }
  g_binary = argv[1];
  std::string data = argv[2];
  g_tmpdir = "/tmp";
  if (const char* env = std::getenv("TMPDIR")) g_tmpdir = env;

  {
    auto r = run("braid \"z^3 - t^2\" --seed 1 --format json");
    expect(r.exit_code == 0, "intro braid exits 0");
    expect(contains(r.out, "\"perm\": [\n        2,\n        3,\n        1\n      ]"),
           "intro braid permutation in json");
    expect(contains(r.out, "s2 s1 s2 s1"), "intro braid word in json");
    auto r2 = run("braid \"z^3 - t^2\" --seed 1 --format json");
    expect(r.out == r2.out, "identical command and seed give byte-identical output");
  }
  {
    auto r = run("braid \"z^4 - 4*z^2 + 3 + t\" --seed 1 --format text");
    expect(r.exit_code == 0, "quartic braid exits 0");
    expect(contains(r.out, "generator 2"), "quartic has two generators");
  }
  {
    auto r = run("braid \"z\" --format text");
    expect(r.exit_code == 0, "single strand exits 0");
    expect(contains(r.out, "strands: 1"), "single strand reported");
    expect(!contains(r.out, "generator"), "no generators for one strand");
  }
  {
    auto r = run("branch \"z^3 - t^2*(1-t)\" --format text");
    expect(r.exit_code == 0, "branch exits 0");
    expect(contains(r.out, "branch points (2)"), "two branch points listed");
  }
  {
    auto r = run("branch \"z^2 - t\" --format text");
    expect(contains(r.out, "branch points (1): 0"), "quadratic branch point at 0");
  }
  {
    auto r = run("braid \"(z-t)*(z-2*t)*(z-3*t)\" --seed 1");
    expect(r.exit_code == 2, "collinear reducible curve exits 2");
  }
  {
    auto r = run("braid \"z^3 - \"");
    expect(r.exit_code == 1, "parse error exits 1");
  }
  {
    auto r = run("arrangement " + data + "/lines5.json --seed 3 --format text");
    expect(r.exit_code == 0, "five line arrangement exits 0");
    expect(contains(r.out, "branch points (8)"), "eight branch points");
    expect(contains(r.out, "generator 8"), "eight generators");
  }
  {
    auto r = run("arrangement " + data + "/lines2.json --seed 1 --format text");
    expect(r.exit_code == 0, "two line arrangement exits 0");
    expect(contains(r.out, "core: s1 s1"), "node core is the full twist");
  }
  {
    auto r = run("arrangement " + data + "/lines14.json --seed 3 --format text");
    expect(r.exit_code == 0, "fourteen line arrangement exits 0");
    expect(contains(r.out, "branch points (46)"), "46 branch points");
    expect(contains(r.out, "generator 46"), "46 generators");
  }
  {
    auto r = run("braid \"z^3 - t^2\" --seed 1 --format text --render tikz");
    expect(contains(r.out, "a_{2} a_{1} a_{2} a_{1}"), "inline render of the core");
  }
  {
    auto r = run("render \"s2 s1 s2 s1\" --strands 3 --render-format tikz");
    expect(r.out ==
               "\\begin{tikzpicture}\n\\braid[number of strands=3] (braid) "
               "a_{2} a_{1} a_{2} a_{1} ;\n\\end{tikzpicture}\n",
           "tikz render golden");
  }
  {
    auto r = run("render \"\" --strands 4 --render-format ascii");
    expect(r.out == "  |   |   |   |\n", "ascii identity golden");
  }
  {
    auto pos = run("render \"s1\" --strands 2 --render-format svg");
    auto neg = run("render \"s1^-1\" --strands 2 --render-format svg");
    expect(pos.exit_code == 0 && neg.exit_code == 0, "svg renders exit 0");
    expect(pos.out != neg.out, "svg opposite crossings differ");
  }
  {
    auto r = run("restrict \"z^3 - u1*u2\" --uvars 2 --point \"[[0,0],[0,0]]\" "
                 "--direction \"[[1,0],[1,0]]\" --format text");
    expect(r.exit_code == 0, "restrict exits 0");
    expect(contains(r.out, "z^3"), "restriction keeps z^3");
    expect(contains(r.out, "t^2"), "restriction has t^2");
  }
  {
    std::string report = g_tmpdir + "/intro_report.json";
    auto r = run("braid \"z^3 - t^2\" --seed 1 --out " + report);
    expect(r.exit_code == 0, "braid --out exits 0");
    auto v = run("verify " + report + " --input \"z^3 - t^2\"");
    expect(v.exit_code == 0 && contains(v.out, "OK"), "fresh report verifies");

    // Flip one crossing sign in the report; verification must fail.
    std::ifstream in(report);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    auto p = text.find("\"sign\": 1");
    expect(p != std::string::npos, "report has a positive sign to flip");
    text.replace(p, 9, "\"sign\": -1");
    std::string bad = g_tmpdir + "/intro_report_bad.json";
    std::ofstream outf(bad, std::ios::binary);
    outf << text;
    outf.close();
    auto vb = run("verify " + bad + " --input \"z^3 - t^2\"");
    expect(vb.exit_code == 1 && contains(vb.out, "FAIL"), "tampered report fails");
  }
  {
    std::string svg = g_tmpdir + "/loops.svg";
    auto r = run("braid \"z^3 - t^2*(1-t)\" --seed 1 --plot-loops " + svg + " --format text");
    expect(r.exit_code == 0, "plot-loops exits 0");
    std::ifstream in(svg);
    std::stringstream buf;
    buf << in.rdbuf();
    expect(contains(buf.str(), "<svg"), "loop svg written");
  }
  {
    // BRAIDTRACK_SEED is the fallback when --seed is not given.
    setenv("BRAIDTRACK_SEED", "7", 1);
    auto env_run = run("braid \"z^3 - t^2\" --format json");
    auto flag_run = run("braid \"z^3 - t^2\" --seed 7 --format json");
    unsetenv("BRAIDTRACK_SEED");
    expect(env_run.out == flag_run.out, "BRAIDTRACK_SEED matches --seed");
  }
  {
    // Arrangement reports verify against their input file.
    std::string report = g_tmpdir + "/arr_report.json";
    auto r = run("arrangement " + data + "/lines5.json --seed 3 --out " + report);
    expect(r.exit_code == 0, "arrangement --out exits 0");
    auto v = run("verify " + report + " --lines " + data + "/lines5.json");
    expect(v.exit_code == 0 && contains(v.out, "OK"), "arrangement report verifies");
    auto v2 = run("verify " + report);
    expect(v2.exit_code == 1, "verify without an input exits 1");
  }
  {
    auto r = run("render \"x1\" --strands 3 --render-format ascii");
    expect(r.exit_code == 1, "bad word syntax exits 1");
    auto r2 = run("arrangement /nonexistent.json");
    expect(r2.exit_code == 1, "missing arrangement file exits 1");
  }

  std::printf("test_cli: %d checks, %d failures\n", checks, failures);
  return failures == 0 ? 0 : 1;
}
