#include <doctest.h>

#include <random>
#include <sstream>

#include "biotcr/io.hpp"
#include "fixtures.hpp"

using namespace biotcr;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::size_t find_line(const std::vector<std::string>& lines, const std::string& prefix) {
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (lines[i].rfind(prefix, 0) == 0) return i;
  return lines.size();
}

}  // namespace

TEST_CASE("legacy VTK layout") {
  const Mesh m = build_structured_mesh(2, 1);
  Vector p(m.num_cells());
  for (Eigen::Index c = 0; c < p.size(); ++c) p[c] = 0.5 * double(c);
  std::vector<Point> disp(m.num_vertices(), Point(1.0, -2.0));
  std::ostringstream out;
  write_vtk(out, m, {{"pressure", p}}, {{"displacement", disp}}, "unit test");
  const auto lines = lines_of(out.str());
  CHECK(lines[0] == "# vtk DataFile Version 3.0");
  CHECK(lines[1] == "unit test");
  CHECK(lines[2] == "ASCII");
  CHECK(lines[3] == "DATASET UNSTRUCTURED_GRID");
  CHECK(lines[4] == "POINTS 6 double");
  const std::size_t cells = find_line(lines, "CELLS ");
  REQUIRE(cells < lines.size());
  CHECK(lines[cells] == "CELLS 4 16");
  CHECK(lines[cells + 1].rfind("3 ", 0) == 0);
  const std::size_t types = find_line(lines, "CELL_TYPES");
  CHECK(lines[types] == "CELL_TYPES 4");
  for (std::size_t k = 1; k <= 4; ++k) CHECK(lines[types + k] == "5");
  const std::size_t cd = find_line(lines, "CELL_DATA");
  CHECK(lines[cd] == "CELL_DATA 4");
  CHECK(lines[cd + 1] == "SCALARS pressure double 1");
  CHECK(lines[cd + 2] == "LOOKUP_TABLE default");
  CHECK(std::stod(lines[cd + 4]) == 0.5);
  const std::size_t pd = find_line(lines, "POINT_DATA");
  CHECK(lines[pd] == "POINT_DATA 6");
  CHECK(lines[pd + 1] == "VECTORS displacement double");

  std::ostringstream bad;
  CHECK_THROWS_AS(write_vtk(bad, m, {{"p", Vector::Zero(3)}}), std::invalid_argument);
  CHECK_THROWS_AS(write_vtk(bad, m, {}, {{"u", std::vector<Point>(2)}}), std::invalid_argument);
  CHECK_THROWS_AS(write_vtk_file("/nonexistent-dir/x.vtk", m), std::runtime_error);
}

TEST_CASE("CR vertex values reproduce linear fields") {
  const Mesh m = build_structured_mesh(3, 2, {}, DiagonalRule::Alternating);
  Vector u(2 * m.num_faces());
  auto field = [](const Point& x) { return Point(1 + 2 * x.x() - x.y(), 0.5 * x.y()); };
  for (std::size_t f = 0; f < m.num_faces(); ++f) {
    const Point v = field(m.face(f).barycenter);
    u[2 * f] = v.x();
    u[2 * f + 1] = v.y();
  }
  const auto vals = cr_vertex_values(m, u);
  for (std::size_t v = 0; v < m.num_vertices(); ++v) CHECK((vals[v] - field(m.vertex(v))).norm() <= 1e-13);
}

TEST_CASE("convergence CSV") {
  ConvergenceReport r;
  ConvergenceLevel a;
  a.nx = 4;
  a.nt = 4;
  a.tau = 0.25;
  a.err_u_energy = 0.3;
  a.err_p_l2 = 0.05;
  ConvergenceLevel b = a;
  b.nx = 8;
  b.tau = 0.125;
  b.err_u_energy = 0.15;
  b.rate_u = 1.0;
  b.rate_p = 0.0;
  r.levels = {a, b};
  std::ostringstream out;
  write_convergence_csv(out, r);
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "nx,tau,err_u_energy,err_p_l2,rate_u,rate_p");
  CHECK(lines[1].substr(0, 2) == "4,");
  CHECK(lines[1].substr(lines[1].size() - 2) == ",,");
  CHECK(lines[2].find(",1.0000000000000000e+00,0.0000000000000000e+00") != std::string::npos);
}

TEST_CASE("state checkpoint round trip") {
  State s;
  std::mt19937 rng(4);
  std::normal_distribution<double> N(0, 1);
  s.u = Vector(10);
  s.w = Vector(5);
  s.p = Vector(2);
  for (auto& v : s.u) v = N(rng);
  for (auto& v : s.w) v = N(rng) * 1e-9;
  for (auto& v : s.p) v = N(rng) * 1e7;
  s.t = 1.0 / 3.0;
  std::stringstream buf;
  write_state_csv(buf, s);
  const std::string text = buf.str();
  const State r = read_state_csv(buf);
  CHECK(r.t == s.t);
  CHECK(r.u == s.u);
  CHECK(r.w == s.w);
  CHECK(r.p == s.p);

  std::stringstream again;
  write_state_csv(again, r);
  CHECK(again.str() == text);

  const auto lines = lines_of(text);
  CHECK(lines[0] == "# biotcr-state v1");
  CHECK(lines[2] == "sizes,10,5,2");
  CHECK(lines[3].rfind("u,0,", 0) == 0);

  auto fails = [](const std::string& input) {
    std::istringstream in(input);
    CHECK_THROWS_AS(read_state_csv(in), std::runtime_error);
  };
  fails("");
  fails("# other\n");
  fails("# biotcr-state v1\nt,0\n");
  fails("# biotcr-state v1\nt,0\nsizes,2,1,1\nu,0,1,2\nw,0,1\n");
  fails("# biotcr-state v1\nt,0\nsizes,2,1,1\nu,0,1,2\nw,3,1\np,0,1\n");
  fails("# biotcr-state v1\nt,x\nsizes,2,1,1\nu,0,1,2\nw,0,1\np,0,1\n");
  fails("# biotcr-state v1\nt,0\nsizes,2,1,1\nu,0,1,2\nw,0,1\np,0,1\nq,1\n");

  State bad = s;
  bad.u = Vector(3);
  std::ostringstream sink;
  CHECK_THROWS_AS(write_state_csv(sink, bad), std::invalid_argument);
}
