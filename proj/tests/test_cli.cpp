#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "biotcr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = biotcr::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "biotcr_cli_test" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) n += line.find(needle) != std::string::npos;
  return n;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"converge", "--nx", "0"}).code == 2);
  CHECK(run({"converge", "--levels", "4,0"}).code == 2);
  CHECK(run({"converge", "--levels", "4,8", "--steps-per-level", "4"}).code == 2);
  CHECK(run({"footing", "--mode", "fast"}).code == 2);
  CHECK(run({"footing", "--tau", "-1"}).code == 2);
  CHECK(run({"footing", "--poisson", "0.5"}).code == 2);
  CHECK(run({"footing", "--no-such-flag"}).code == 2);
  CHECK(run({"run", "--mode", "both"}).code == 2);
  CHECK(run({"footing", "--config", "/nonexistent/biotcr.ini"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("single-level study prints a one-row table") {
  const fs::path dir = scratch("one_level");
  const Result r = run({"converge", "--levels", "4", "--mode", "lumped", "-o", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(count_lines(r.out, "4x4x4") == 1);
  CHECK(r.out.find("consistent") == std::string::npos);
  const std::string csv = slurp(dir / "convergence_lumped.csv");
  std::istringstream in(csv);
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "nx,tau,err_u_energy,err_p_l2,rate_u,rate_p");
  CHECK(row.rfind("4,2.5", 0) == 0);
  CHECK(!std::getline(in, extra));
  CHECK(fs::exists(dir / "converge_lumped_nx4.vtk"));
  CHECK(!fs::exists(dir / "convergence_consistent.csv"));
}

TEST_CASE("footing writes one output set per mode") {
  const fs::path both = scratch("footing_both");
  const Result r = run({"footing", "--nx", "8", "-o", both.string()});
  REQUIRE(r.code == 0);
  CHECK(count_lines(r.out, "footing ") == 2);
  for (const char* f : {"footing_lumped.vtk", "footing_consistent.vtk", "footing_lumped_state.csv",
                        "footing_consistent_state.csv", "footing_summary.csv", "config.ini"})
    CHECK(fs::exists(both / f));

  const fs::path one = scratch("footing_lumped");
  REQUIRE(run({"footing", "--nx", "8", "--mode", "lumped", "--formats", "vtk", "-o", one.string()}).code == 0);
  CHECK(fs::exists(one / "footing_lumped.vtk"));
  CHECK(!fs::exists(one / "footing_consistent.vtk"));
  CHECK(!fs::exists(one / "footing_summary.csv"));

  const fs::path checker = scratch("footing_checker");
  const Result c = run({"footing", "--nx", "8", "--mode", "lumped", "--kappa-spec", "checkerboard", "-o",
                        checker.string()});
  REQUIRE(c.code == 0);
  CHECK(c.out.find("kappa=checkerboard") != std::string::npos);
  CHECK(slurp(checker / "footing_summary.csv") != slurp(one / "footing_summary.csv"));
}

TEST_CASE("outputs are deterministic and the effective config reproduces them") {
  const fs::path a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
  const std::vector<std::string> args{"converge", "--levels", "4,8", "--gamma1", "0.75", "--diagonal", "alternating"};
  auto with_out = [&](const fs::path& d) {
    auto v = args;
    v.push_back("-o");
    v.push_back(d.string());
    return v;
  };
  REQUIRE(run(with_out(a)).code == 0);
  REQUIRE(run(with_out(b)).code == 0);
  for (const char* f : {"convergence_lumped.csv", "convergence_consistent.csv", "converge_lumped_nx8.vtk"})
    CHECK(slurp(a / f) == slurp(b / f));

  REQUIRE(run({"converge", "--config", (a / "config.ini").string(), "-o", c.string()}).code == 0);
  CHECK(slurp(a / "convergence_lumped.csv") == slurp(c / "convergence_lumped.csv"));
  CHECK(slurp(a / "convergence_consistent.csv") == slurp(c / "convergence_consistent.csv"));

  // The serialized config parses back to itself.
  biotcr::cli::RunConfig cfg;
  int code = 0;
  std::ostringstream sink;
  const std::string cfg_path = (a / "config.ini").string();
  const char* argv[] = {"biotcr", "converge", "--config", cfg_path.c_str()};
  REQUIRE(biotcr::cli::parse(4, argv, cfg, code, sink, sink));
  biotcr::cli::validate(cfg);
  CHECK(cfg.gamma1 == 0.75);
  CHECK(cfg.diagonal == "alternating");
  CHECK(cfg.levels == std::vector<std::size_t>{4, 8});
  CHECK(biotcr::cli::serialize(cfg) == slurp(a / "config.ini").substr(slurp(a / "config.ini").find('\n') + 1));
}

TEST_CASE("config file: flags win and unknown keys are rejected") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "in.ini");
    f << "# footing settings\nnx=4\nmode=consistent\ntau=0.01\n";
  }
  const Result r = run({"footing", "--config", (dir / "in.ini").string(), "--nx", "6", "-o", (dir / "out").string()});
  REQUIRE(r.code == 0);
  const std::string eff = slurp(dir / "out" / "config.ini");
  CHECK(eff.find("\nnx=6\n") != std::string::npos);
  CHECK(eff.find("\nmode=consistent\n") != std::string::npos);
  CHECK(eff.find("\ntau=0.01\n") != std::string::npos);
  CHECK(r.out.find("footing consistent") != std::string::npos);

  {
    std::ofstream f(dir / "bad.ini");
    f << "nx=4\nmeshsize=3\n";
  }
  CHECK(run({"footing", "--config", (dir / "bad.ini").string(), "-o", (dir / "bad").string()}).code == 2);
  CHECK(!fs::exists(dir / "bad"));
}

TEST_CASE("runtime failures exit 1") {
  const fs::path dir = scratch("runtime");
  fs::create_directories(dir);
  { std::ofstream(dir / "not_a_dir") << "x"; }
  CHECK(run({"footing", "--nx", "4", "-o", (dir / "not_a_dir").string()}).code == 1);

  { std::ofstream(dir / "garbage.csv") << "hello\n"; }
  CHECK(run({"run", "--nx", "4", "--restart", (dir / "garbage.csv").string(), "-o", (dir / "r").string()}).code == 1);

  REQUIRE(run({"run", "--nx", "4", "-o", (dir / "small").string()}).code == 0);
  CHECK(run({"run", "--nx", "5", "--restart", (dir / "small" / "run_state.csv").string(), "-o",
             (dir / "r2").string()})
            .code == 1);
}

TEST_CASE("restart continues a run exactly") {
  const fs::path full = scratch("restart_full"), half = scratch("restart_half"), rest = scratch("restart_rest");
  const std::vector<std::string> common{"run", "--problem", "manufactured", "--nx", "6", "--tau", "0.125"};
  auto go = [&](const std::string& steps, const fs::path& out, const std::string& restart = "") {
    auto v = common;
    v.insert(v.end(), {"--steps", steps, "-o", out.string()});
    if (!restart.empty()) v.insert(v.end(), {"--restart", restart});
    return run(v).code;
  };
  REQUIRE(go("4", full) == 0);
  REQUIRE(go("2", half) == 0);
  REQUIRE(go("2", rest, (half / "run_state.csv").string()) == 0);
  CHECK(slurp(full / "run_state.csv") == slurp(rest / "run_state.csv"));
  const std::string hist = slurp(full / "run_history.csv");
  CHECK(count_lines(hist, ",") == 5);
}
