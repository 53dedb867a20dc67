#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "biotcr/io.hpp"
#include "biotcr/verification.hpp"

namespace biotcr::cli {

namespace fs = std::filesystem;

namespace {

std::string join(const auto& values) {
  std::ostringstream s;
  bool first = true;
  for (const auto& v : values) {
    if (!first) s << ',';
    s << v;
    first = false;
  }
  return s.str();
}

// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void add_options(CLI::App& app, RunConfig& c) {
  app.add_option("--levels", c.levels, "Mesh divisions per convergence level")->delimiter(',')->group("converge");
  app.add_option("--steps-per-level", c.steps_per_level, "Time steps per level (default: equal to divisions)")
      ->delimiter(',')
      ->group("converge");
  app.add_option("--final-time", c.final_time, "Final time of the manufactured problem")->group("converge");
  app.add_option("--young", c.young, "Young's modulus (manufactured problem)")->group("converge");
  app.add_option("--poisson", c.poisson, "Poisson ratio (manufactured problem)")->group("converge");
  app.add_option("--conductivity", c.conductivity, "Hydraulic conductivity (manufactured problem)")
      ->group("converge");

  app.add_option("--nx", c.nx, "Mesh divisions per side")->group("footing/run");
  app.add_option("--tau", c.tau, "Time step")->group("footing/run");
  app.add_option("--steps", c.steps, "Number of time steps (run)")->group("footing/run");
  app.add_option("--problem", c.problem, "Problem for run: footing or manufactured")
      ->check(CLI::IsMember({"footing", "manufactured"}))
      ->group("footing/run");
  app.add_option("--restart", c.restart, "State checkpoint to continue from (run)")->group("footing/run");
  app.add_option("--lambda", c.lambda, "First Lame parameter (footing)")->group("footing/run");
  app.add_option("--mu", c.mu, "Shear modulus (footing)")->group("footing/run");
  app.add_option("--kappa", c.kappa, "Homogeneous permeability (footing)")->group("footing/run");
  app.add_option("--kappa-spec", c.kappa_spec, "homogeneous or checkerboard")
      ->check(CLI::IsMember({"homogeneous", "checkerboard"}))
      ->group("footing/run");
  app.add_option("--checker-low", c.checker_low, "Checkerboard permeability on the low squares")
      ->group("footing/run");
  app.add_option("--checker-high", c.checker_high, "Checkerboard permeability elsewhere")->group("footing/run");

  app.add_option("--mode", c.mode, "Mass matrix: lumped, consistent or both")
      ->check(CLI::IsMember({"lumped", "consistent", "both"}));
  app.add_option("--gamma1", c.gamma1, "Jump penalty parameter");
  app.add_option("--diagonal", c.diagonal, "Cell diagonal: sw-ne or alternating")
      ->check(CLI::IsMember({"sw-ne", "alternating"}));
  app.add_option("--jump-boundary", c.jump_boundary, "Penalize jumps on boundary faces too");
  app.add_option("--jump-normal-only", c.jump_normal_only, "Penalize only the normal jump component");
  app.add_option("--output,-o", c.output, "Output directory");
  app.add_option("--formats", c.formats, "Output formats: csv, vtk")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "vtk"}));
}

bool wants(const RunConfig& c, const std::string& format) {
  return std::find(c.formats.begin(), c.formats.end(), format) != c.formats.end();
}

std::vector<MassMode> modes_of(const RunConfig& c) {
  if (c.mode == "lumped") return {MassMode::Lumped};
  if (c.mode == "consistent") return {MassMode::Consistent};
  return {MassMode::Lumped, MassMode::Consistent};
}

DiagonalRule diagonal_of(const RunConfig& c) {
  return c.diagonal == "alternating" ? DiagonalRule::Alternating : DiagonalRule::SouthWestToNorthEast;
}

JumpOptions jump_of(const RunConfig& c) { return JumpOptions{c.jump_boundary, c.jump_normal_only}; }

KappaSpec kappa_of(const RunConfig& c) {
  return c.kappa_spec == "checkerboard" ? KappaSpec::Checkerboard : KappaSpec::Homogeneous;
}

ConvergenceOptions convergence_options(const RunConfig& c) {
  ConvergenceOptions o;
  o.young = c.young;
  o.poisson = c.poisson;
  o.conductivity = c.conductivity;
  o.gamma1 = c.gamma1;
  o.final_time = c.final_time;
  o.diagonal = diagonal_of(c);
  o.jump = jump_of(c);
  return o;
}

FootingOptions footing_options(const RunConfig& c) {
  FootingOptions o;
  o.lambda = c.lambda;
  o.mu = c.mu;
  o.kappa = c.kappa;
  o.checker_low = c.checker_low;
  o.checker_high = c.checker_high;
  o.tau = c.tau;
  o.gamma1 = c.gamma1;
  o.diagonal = diagonal_of(c);
  o.jump = jump_of(c);
  return o;
}

std::ofstream open_output(const RunConfig& c, const std::string& name) {
  const fs::path path = fs::path(c.output) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void write_fields(const RunConfig& c, const std::string& name, const Mesh& mesh, const State& state,
                  std::vector<VtkCellScalar> extra = {}) {
  if (!wants(c, "vtk")) return;
  std::vector<VtkCellScalar> cells{{"pressure", state.p}};
  for (auto& e : extra) cells.push_back(std::move(e));
  auto out = open_output(c, name + ".vtk");
  write_vtk(out, mesh, cells, {{"displacement", cr_vertex_values(mesh, state.u)}}, name);
}

void write_checkpoint(const RunConfig& c, const std::string& name, const State& state) {
  if (!wants(c, "csv")) return;
  auto out = open_output(c, name + "_state.csv");
  write_state_csv(out, state);
}

std::string sci(double v, int precision = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*e", precision, v);
  return buf;
}

int cmd_converge(const RunConfig& c, std::ostream& out) {
  std::vector<std::pair<std::size_t, std::size_t>> levels;
  for (std::size_t k = 0; k < c.levels.size(); ++k)
    levels.emplace_back(c.levels[k], c.steps_per_level.empty() ? c.levels[k] : c.steps_per_level[k]);
  const ConvergenceOptions opts = convergence_options(c);
  const ExactSolution exact = sine_manufactured_solution();

  for (MassMode mode : modes_of(c)) {
    const std::string tag = to_string(mode);
    auto on_level = [&](std::size_t k, const ManufacturedRun& run) {
      const Vector p_exact =
          p0_projection(run.mesh, [&](const Point& x) { return exact.p(x, run.state.t); });
      write_fields(c, "converge_" + tag + "_nx" + std::to_string(levels[k].first), run.mesh, run.state,
                   {{"pressure_exact", p_exact}});
    };
    const ConvergenceReport report = convergence_study(levels, mode, opts, on_level);
    if (wants(c, "csv")) {
      auto csv = open_output(c, "convergence_" + tag + ".csv");
      write_convergence_csv(csv, report);
    }
    out << "mass mode: " << tag << '\n';
    out << "  nx x ny x nt        tau    |u-u_h|_a     |p-p_h|   rate_u  rate_p\n";
    for (const auto& l : report.levels) {
      char row[160];
      const std::string size = std::to_string(l.nx) + "x" + std::to_string(l.nx) + "x" + std::to_string(l.nt);
      std::snprintf(row, sizeof row, "  %-12s %10.3e  %11.4f  %10.4f", size.c_str(), l.tau, l.err_u_energy,
                    l.err_p_l2);
      out << row;
      if (l.rate_u && l.rate_p) {
        std::snprintf(row, sizeof row, "  %7.3f %7.3f", *l.rate_u, *l.rate_p);
        out << row;
      }
      out << '\n';
    }
  }
  return 0;
}

int cmd_footing(const RunConfig& c, std::ostream& out) {
  const FootingOptions opts = footing_options(c);
  std::ostringstream summary;
  summary << "mode,kappa,nx,tau,min_pressure,max_pressure,undershoot\n";
  for (MassMode mode : modes_of(c)) {
    const std::string tag = to_string(mode);
    const FootingResult r = footing_case(c.nx, mode, kappa_of(c), opts);
    write_fields(c, "footing_" + tag, r.mesh, r.state);
    write_checkpoint(c, "footing_" + tag, r.state);
    summary << tag << ',' << c.kappa_spec << ',' << c.nx << ',' << sci(c.tau, 16) << ','
            << sci(r.metrics.min_pressure, 16) << ',' << sci(r.metrics.max_pressure, 16) << ','
            << sci(r.metrics.undershoot, 16) << '\n';
    out << "footing " << tag << " kappa=" << c.kappa_spec << " nx=" << c.nx
        << " min_p=" << sci(r.metrics.min_pressure) << " max_p=" << sci(r.metrics.max_pressure)
        << " undershoot=" << sci(r.metrics.undershoot) << '\n';
  }
  if (wants(c, "csv")) open_output(c, "footing_summary.csv") << summary.str();
  return 0;
}

struct RunProblem {
  Mesh mesh = build_structured_mesh(1, 1);
  BoundarySpec bc;
  MaterialField material;
  DofMap dofs;
  std::function<Vector(double)> g;
  std::function<Vector(double)> f;
  State initial;
  std::optional<ExactSolution> exact;
};

// Fills p in place; the load callbacks refer back to p, which must not move.
void setup_run_problem(const RunConfig& c, RunProblem& p) {
  if (c.problem == "footing") {
    FootingProblem fp = footing_problem(c.nx, kappa_of(c), footing_options(c));
    p.mesh = std::move(fp.mesh);
    p.bc = fp.bc;
    p.material = std::move(fp.material);
    p.dofs = fp.dofs;
    p.g = [g = fp.g](double) { return g; };
    p.f = [f = fp.f](double) { return f; };
    p.initial = State::zero(p.dofs);
    return;
  }
  p.mesh = build_structured_mesh(c.nx, c.nx, {}, diagonal_of(c));
  p.bc = BoundarySpec::clamped_drained_top();
  p.exact = sine_manufactured_solution();
  const auto [lambda, mu] = lame_from_E_nu(c.young, c.poisson);
  p.material = MaterialField::uniform(p.mesh.num_cells(), lambda, mu, c.conductivity, c.gamma1);
  p.dofs = build_dof_map(p.mesh, p.bc);
  const auto src = manufactured_sources(*p.exact, lambda, mu, c.conductivity);
  p.g = [&p, g = src.g](double t) { return assemble_load_g(p.mesh, p.dofs, g, p.bc, t); };
  p.f = [&p, f = src.f](double t) { return assemble_source_f(p.mesh, p.dofs, f, t); };
  p.initial = State::zero(p.dofs);
  p.initial.u = cr_interpolant(p.mesh, [&p](const Point& x) { return p.exact->u(x, 0.0); });
  for (std::size_t i = 0; i < p.dofs.n_u; ++i)
    if (p.dofs.essential_u[i]) p.initial.u[static_cast<Eigen::Index>(i)] = 0.0;
}

int cmd_run(const RunConfig& c, std::ostream& out) {
  RunProblem p;
  setup_run_problem(c, p);

  State state = p.initial;
  if (!c.restart.empty()) {
    std::ifstream in(c.restart);
    if (!in) throw std::runtime_error("cannot open restart file " + c.restart);
    state = read_state_csv(in);
    if (static_cast<std::size_t>(state.u.size()) != p.dofs.n_u ||
        static_cast<std::size_t>(state.w.size()) != p.dofs.n_w ||
        static_cast<std::size_t>(state.p.size()) != p.dofs.n_p)
      throw std::runtime_error("restart file " + c.restart + " does not match the mesh");
  }

  const MassMode mode = modes_of(c).front();
  const BiotSystem system = BiotSystem::build(p.mesh, p.dofs, p.material, p.bc, c.tau, mode, jump_of(c));

  std::ostringstream history;
  history << "step,t,min_pressure,max_pressure,mass_balance,err_u_energy,err_p_l2\n";
  const double t0 = state.t;
  for (std::size_t n = 1; n <= c.steps; ++n) {
    const double t = t0 + static_cast<double>(n) * c.tau;
    const Vector g = p.g(t), f = p.f(t);
    State next = system.step(state, g, f);
    next.t = t;
    const double balance = system.mass_balance_residual(next, state, f).cwiseAbs().maxCoeff();
    const OscillationMetrics m = oscillation_metric(next.p, p.mesh);
    history << n << ',' << sci(t, 16) << ',' << sci(m.min_pressure, 16) << ',' << sci(m.max_pressure, 16) << ','
            << sci(balance, 16) << ',';
    if (p.exact) {
      history << sci(energy_norm_error(next.u, *p.exact, p.mesh, p.material, p.bc, t, jump_of(c)), 16) << ','
              << sci(l2_pressure_error(next.p, *p.exact, p.mesh, t), 16);
    } else {
      history << ',';
    }
    history << '\n';
    state = std::move(next);
  }

  write_fields(c, "run", p.mesh, state);
  write_checkpoint(c, "run", state);
  if (wants(c, "csv")) open_output(c, "run_history.csv") << history.str();
  const OscillationMetrics m = oscillation_metric(state.p, p.mesh);
  out << "run " << c.problem << ' ' << to_string(mode) << " nx=" << c.nx << " steps=" << c.steps
      << " t=" << sci(state.t) << " min_p=" << sci(m.min_pressure) << " max_p=" << sci(m.max_pressure) << '\n';
  return 0;
}

}  // namespace

bool parse(int argc, const char* const* argv, RunConfig& config, int& exit_code, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Biot poroelasticity with Crouzeix-Raviart displacement and mass-lumped RT0 flux", "biotcr"};
  app.set_config("--config", "", "Read key=value options from a file; flags on the command line win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  add_options(app, config);
  app.add_subcommand("converge", "Convergence study on the manufactured problem")->fallthrough();
  app.add_subcommand("footing", "One loaded step of the footing problem")->fallthrough();
  app.add_subcommand("run", "Transient run of a chosen problem")->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    exit_code = app.exit(e, out, err) == 0 ? 0 : 2;
    return false;
  }
  config.command = app.get_subcommands().front()->get_name();
  return true;
}

void validate(RunConfig& c) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw UsageError(msg);
  };
  need(c.command == "converge" || c.command == "footing" || c.command == "run", "unknown command '" + c.command + "'");
  need(!c.levels.empty(), "levels must not be empty");
  for (std::size_t n : c.levels) need(n > 0, "levels must be positive");
  need(c.steps_per_level.empty() || c.steps_per_level.size() == c.levels.size(),
       "steps-per-level needs one entry per level");
  for (std::size_t n : c.steps_per_level) need(n > 0, "steps-per-level must be positive");
  need(c.final_time > 0.0, "final-time must be positive");
  need(c.young > 0.0, "young must be positive");
  need(c.poisson > -1.0 && c.poisson < 0.5, "poisson must lie in (-1, 0.5)");
  need(c.conductivity > 0.0, "conductivity must be positive");
  need(c.nx > 0, "nx must be positive");
  need(c.tau > 0.0, "tau must be positive");
  need(c.steps > 0, "steps must be positive");
  need(c.lambda >= 0.0, "lambda must be non-negative");
  need(c.mu > 0.0, "mu must be positive");
  need(c.kappa > 0.0 && c.checker_low > 0.0 && c.checker_high > 0.0, "permeabilities must be positive");
  need(c.gamma1 >= 0.0, "gamma1 must be non-negative");
  need(!c.output.empty(), "output must not be empty");
  if (c.mode.empty()) c.mode = c.command == "run" ? "lumped" : "both";
  need(c.command != "run" || c.mode != "both", "run takes a single mode");
}

std::string serialize(const RunConfig& c) {
  std::ostringstream s;
  s << "levels=" << join(c.levels) << '\n';
  if (!c.steps_per_level.empty()) s << "steps-per-level=" << join(c.steps_per_level) << '\n';
  s << "final-time=" << num(c.final_time) << '\n';
  s << "young=" << num(c.young) << '\n';
  s << "poisson=" << num(c.poisson) << '\n';
  s << "conductivity=" << num(c.conductivity) << '\n';
  s << "nx=" << c.nx << '\n';
  s << "tau=" << num(c.tau) << '\n';
  s << "steps=" << c.steps << '\n';
  s << "problem=" << c.problem << '\n';
  if (!c.restart.empty()) s << "restart=" << c.restart << '\n';
  s << "lambda=" << num(c.lambda) << '\n';
  s << "mu=" << num(c.mu) << '\n';
  s << "kappa=" << num(c.kappa) << '\n';
  s << "kappa-spec=" << c.kappa_spec << '\n';
  s << "checker-low=" << num(c.checker_low) << '\n';
  s << "checker-high=" << num(c.checker_high) << '\n';
  if (!c.mode.empty()) s << "mode=" << c.mode << '\n';
  s << "gamma1=" << num(c.gamma1) << '\n';
  s << "diagonal=" << c.diagonal << '\n';
  s << "jump-boundary=" << (c.jump_boundary ? "true" : "false") << '\n';
  s << "jump-normal-only=" << (c.jump_normal_only ? "true" : "false") << '\n';
  s << "output=" << c.output << '\n';
  s << "formats=" << join(c.formats) << '\n';
  return s.str();
}

int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    fs::create_directories(c.output);
    open_output(c, "config.ini") << "# " << c.command << '\n' << serialize(c);
    if (c.command == "converge") return cmd_converge(c, out);
    if (c.command == "footing") return cmd_footing(c, out);
    return cmd_run(c, out);
  } catch (const std::exception& e) {
    err << "biotcr " << c.command << ": " << e.what() << '\n';
    return 1;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  int code = 0;
  if (!parse(argc, argv, config, code, out, err)) return code;
  try {
    validate(config);
  } catch (const UsageError& e) {
    err << "biotcr: " << e.what() << '\n';
    return 2;
  }
  return execute(config, out, err);
}

}  // namespace biotcr::cli
