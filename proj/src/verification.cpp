#include "biotcr/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "biotcr/quadrature.hpp"

namespace biotcr {

using std::numbers::pi;

std::string to_string(MassMode mode) { return mode == MassMode::Lumped ? "lumped" : "consistent"; }

ExactSolution sine_manufactured_solution() {
  ExactSolution ex;
  ex.u = [](const Point& x, double t) {
    const double v = std::exp(-t) * std::sin(pi * x.x()) * std::sin(pi * x.y());
    return Point(v, v);
  };
  ex.grad_u = [](const Point& x, double t) {
    const double e = std::exp(-t);
    const double dx = e * pi * std::cos(pi * x.x()) * std::sin(pi * x.y());
    const double dy = e * pi * std::sin(pi * x.x()) * std::cos(pi * x.y());
    Matrix2 g;
    g << dx, dy, dx, dy;
    return g;
  };
  ex.hess_u = [](const Point& x, double t) {
    const double e = std::exp(-t) * pi * pi;
    const double ss = std::sin(pi * x.x()) * std::sin(pi * x.y());
    const double cc = std::cos(pi * x.x()) * std::cos(pi * x.y());
    Matrix2 h;
    h << -e * ss, e * cc, e * cc, -e * ss;
    return std::array<Matrix2, 2>{h, h};
  };
  ex.div_u_t = [](const Point& x, double t) {
    const double s = std::cos(pi * x.x()) * std::sin(pi * x.y()) + std::sin(pi * x.x()) * std::cos(pi * x.y());
    return -std::exp(-t) * pi * s;
  };
  ex.p = [](const Point& x, double t) { return std::exp(-t) * (std::cos(pi * x.y()) + 1.0); };
  ex.grad_p = [](const Point& x, double t) { return Point(0.0, -std::exp(-t) * pi * std::sin(pi * x.y())); };
  ex.laplacian_p = [](const Point& x, double t) { return -std::exp(-t) * pi * pi * std::cos(pi * x.y()); };
  return ex;
}

ManufacturedSources manufactured_sources(const ExactSolution& exact, double lambda, double mu,
                                         double conductivity) {
  ManufacturedSources src;
  src.g = [exact, lambda, mu](const Point& x, double t) {
    const auto h = exact.hess_u(x, t);
    const Point gp = exact.grad_p(x, t);
    Point g;
    for (int i = 0; i < 2; ++i) {
      const double laplace_ui = h[i].trace();
      const double grad_div_i = h[0](i, 0) + h[1](i, 1);
      g[i] = -mu * laplace_ui - (lambda + mu) * grad_div_i + gp[i];
    }
    return g;
  };
  src.f = [exact, conductivity](const Point& x, double t) {
    return -exact.div_u_t(x, t) + conductivity * exact.laplacian_p(x, t);
  };
  src.w = [exact, conductivity](const Point& x, double t) -> Point { return -conductivity * exact.grad_p(x, t); };
  return src;
}

Vector cr_interpolant(const Mesh& mesh, const std::function<Point(const Point&)>& field) {
  Vector u = Vector::Zero(static_cast<Eigen::Index>(2 * mesh.num_faces()));
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Point v = field(mesh.face(f).barycenter);
    u[DofMap::u_dof(f, 0)] = v.x();
    u[DofMap::u_dof(f, 1)] = v.y();
  }
  return u;
}

Vector p0_projection(const Mesh& mesh, const std::function<double(const Point&)>& field) {
  Vector p = Vector::Zero(static_cast<Eigen::Index>(mesh.num_cells()));
  const QuadratureRule& rule = triangle_rule(4);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      sum += rule.weights[q] * field(from_barycentric(mesh, c, rule.points[q]));
    }
    p[static_cast<Eigen::Index>(c)] = sum;
  }
  return p;
}

namespace {

Point cr_value(const Vector& u_h, const Mesh& mesh, std::size_t cell, const Point& x) {
  const Barycentric b = barycentric(mesh, cell, x);
  Point v = Point::Zero();
  for (int j = 0; j < 3; ++j) {
    const std::size_t face = mesh.cell_faces(cell)[j].face;
    const double phi = cr_basis_eval(j, b);
    v.x() += phi * u_h[DofMap::u_dof(face, 0)];
    v.y() += phi * u_h[DofMap::u_dof(face, 1)];
  }
  return v;
}

Matrix2 cr_gradient(const Vector& u_h, const Mesh& mesh, std::size_t cell) {
  Matrix2 g = Matrix2::Zero();
  for (int j = 0; j < 3; ++j) {
    const std::size_t face = mesh.cell_faces(cell)[j].face;
    const Point grad = cr_basis_gradient(mesh, cell, j);
    g.row(0) += u_h[DofMap::u_dof(face, 0)] * grad.transpose();
    g.row(1) += u_h[DofMap::u_dof(face, 1)] * grad.transpose();
  }
  return g;
}

}  // namespace

double energy_norm_error(const Vector& u_h, const ExactSolution& exact, const Mesh& mesh,
                         const MaterialField& material, const BoundarySpec& bc, double time,
                         const JumpOptions& jump) {
  const QuadratureRule& rule = triangle_rule(4);
  double bulk = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const Matrix2 gh = cr_gradient(u_h, mesh, c);
    double cell_sum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Matrix2 d = exact.grad_u(from_barycentric(mesh, c, rule.points[q]), time) - gh;
      const Matrix2 eps = 0.5 * (d + d.transpose());
      cell_sum += rule.weights[q] * (2.0 * material.mu[c] * eps.squaredNorm() + material.lambda[c] * d.trace() * d.trace());
    }
    bulk += cell_sum * mesh.cell_area(c);
  }

  double jumps = 0.0;
  if (material.gamma1 > 0.0) {
    const LineRule& line = gauss_line_rule(3);
    for (std::size_t e = 0; e < mesh.num_faces(); ++e) {
      const Face& f = mesh.face(e);
      bool clamped = false;
      double mu_e = material.mu[f.t_plus];
      if (f.is_boundary()) {
        if (!jump.include_boundary) continue;
        clamped = bc.at(mesh.boundary_tag(e)).clamped;
      } else {
        mu_e = 0.5 * (mu_e + material.mu[*f.t_minus]);
      }
      const Point& a = mesh.vertex(f.endpoints[0]);
      const Point& b = mesh.vertex(f.endpoints[1]);
      std::vector<Point> values(line.points.size());
      Point mean = Point::Zero();
      for (std::size_t q = 0; q < line.points.size(); ++q) {
        const Point x = (1.0 - line.points[q]) * a + line.points[q] * b;
        Point j;
        if (f.t_minus) {
          j = -(cr_value(u_h, mesh, f.t_plus, x) - cr_value(u_h, mesh, *f.t_minus, x));
        } else {
          j = exact.u(x, time) - cr_value(u_h, mesh, f.t_plus, x);
        }
        values[q] = j;
        mean += line.weights[q] * j;
      }
      double face_sum = 0.0;
      for (std::size_t q = 0; q < line.points.size(); ++q) {
        Point j = values[q];
        if (f.is_boundary() && !clamped) j -= mean;
        const double m = jump.normal_component_only ? std::pow(j.dot(f.normal), 2) : j.squaredNorm();
        face_sum += line.weights[q] * m;
      }
      // h_e^{-1} int_e = face_sum since h_e = |e|.
      jumps += 2.0 * mu_e * material.gamma1 * face_sum;
    }
  }
  return std::sqrt(bulk + jumps);
}

double l2_pressure_error(const Vector& p_h, const ExactSolution& exact, const Mesh& mesh, double time) {
  const QuadratureRule& rule = triangle_rule(4);
  double sum = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    double cell_sum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double d = exact.p(from_barycentric(mesh, c, rule.points[q]), time) - p_h[static_cast<Eigen::Index>(c)];
      cell_sum += rule.weights[q] * d * d;
    }
    sum += cell_sum * mesh.cell_area(c);
  }
  return std::sqrt(sum);
}

std::vector<std::pair<std::size_t, std::size_t>> default_convergence_levels() {
  return {{4, 4}, {8, 8}, {16, 16}, {32, 32}, {64, 64}};
}

ManufacturedRun run_manufactured(std::size_t nx, std::size_t nt, MassMode mode, const ConvergenceOptions& options) {
  if (nx == 0 || nt == 0) throw std::invalid_argument("run_manufactured: nx and nt must be positive");
  Mesh mesh = build_structured_mesh(nx, nx, Rectangle{}, options.diagonal);
  const auto [lambda, mu] = lame_from_E_nu(options.young, options.poisson);
  const MaterialField material = MaterialField::uniform(mesh.num_cells(), lambda, mu, options.conductivity, options.gamma1);
  const BoundarySpec bc = BoundarySpec::clamped_drained_top();
  const DofMap dofs = build_dof_map(mesh, bc);
  const double tau = options.final_time / static_cast<double>(nt);

  const ExactSolution exact = sine_manufactured_solution();
  const ManufacturedSources src = manufactured_sources(exact, lambda, mu, options.conductivity);
  const BiotSystem system = BiotSystem::build(mesh, dofs, material, bc, tau, mode, options.jump);

  State initial = State::zero(dofs, 0.0);
  initial.u = cr_interpolant(mesh, [&](const Point& x) { return exact.u(x, 0.0); });
  for (std::size_t i = 0; i < dofs.n_u; ++i) {
    if (dofs.essential_u[i]) initial.u[static_cast<Eigen::Index>(i)] = 0.0;
  }

  TransientLoads loads;
  loads.g = [&](double t) { return assemble_load_g(mesh, dofs, src.g, bc, t); };
  loads.f = [&](double t) { return assemble_source_f(mesh, dofs, src.f, t); };

  State state = initial;
  for (std::size_t n = 1; n <= nt; ++n) {
    const double t = static_cast<double>(n) * tau;
    state = system.step(state, loads.g(t), loads.f(t));
    state.t = t;
  }
  const double t_end = state.t;
  const double eu = energy_norm_error(state.u, exact, mesh, material, bc, t_end, options.jump);
  const double ep = l2_pressure_error(state.p, exact, mesh, t_end);
  return ManufacturedRun{std::move(mesh), std::move(state), eu, ep};
}

ConvergenceReport convergence_study(const std::vector<std::pair<std::size_t, std::size_t>>& levels, MassMode mode,
                                    const ConvergenceOptions& options,
                                    const std::function<void(std::size_t, const ManufacturedRun&)>& on_level) {
  if (levels.empty()) throw std::invalid_argument("convergence_study: no levels");
  ConvergenceReport report;
  report.mode = mode;
  report.options = options;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto [nx, nt] = levels[k];
    ManufacturedRun run;
    try {
      run = run_manufactured(nx, nt, mode, options);
    } catch (const SolverError& e) {
      throw SolverError("convergence_study: level " + std::to_string(k) + " (nx=" + std::to_string(nx) +
                        ", nt=" + std::to_string(nt) + "): " + e.what());
    }
    ConvergenceLevel level;
    level.nx = nx;
    level.nt = nt;
    level.tau = options.final_time / static_cast<double>(nt);
    level.err_u_energy = run.err_u_energy;
    level.err_p_l2 = run.err_p_l2;
    if (k > 0) {
      const ConvergenceLevel& prev = report.levels.back();
      const double refine = std::log(static_cast<double>(nx) / static_cast<double>(prev.nx));
      if (refine > 0.0) {
        level.rate_u = std::log(prev.err_u_energy / level.err_u_energy) / refine;
        level.rate_p = std::log(prev.err_p_l2 / level.err_p_l2) / refine;
      }
    }
    report.levels.push_back(level);
    if (on_level) on_level(k, run);
  }
  return report;
}

std::vector<double> footing_conductivity(const Mesh& mesh, KappaSpec spec, const FootingOptions& options) {
  std::vector<double> k(mesh.num_cells(), options.kappa);
  if (spec == KappaSpec::Checkerboard) {
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
      const Point x = mesh.centroid(c);
      const bool low = (x.x() <= 0.5 && x.y() <= 0.5) || (x.x() >= 0.5 && x.y() >= 0.5);
      k[c] = low ? options.checker_low : options.checker_high;
    }
  }
  return k;
}

OscillationMetrics oscillation_metric(const Vector& p, const Mesh& mesh) {
  if (static_cast<std::size_t>(p.size()) != mesh.num_cells()) {
    throw std::invalid_argument("oscillation_metric: pressure size does not match cells");
  }
  OscillationMetrics m;
  if (p.size() == 0) return m;
  m.min_pressure = std::numeric_limits<double>::infinity();
  m.max_pressure = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const double v = p[static_cast<Eigen::Index>(c)];
    m.min_pressure = std::min(m.min_pressure, v);
    m.max_pressure = std::max(m.max_pressure, v);
    m.undershoot += std::max(0.0, -v) * mesh.cell_area(c);
  }
  return m;
}

FootingProblem footing_problem(std::size_t nx, KappaSpec spec, const FootingOptions& options) {
  Mesh mesh = build_structured_mesh(nx, nx, Rectangle{}, options.diagonal);
  BoundarySpec bc = BoundarySpec::footing(Point(0.0, -1.0));
  MaterialField material = MaterialField::uniform(mesh.num_cells(), options.lambda, options.mu, options.kappa, options.gamma1);
  material.conductivity = footing_conductivity(mesh, spec, options);
  DofMap dofs = build_dof_map(mesh, bc);
  Vector g = assemble_load_g(mesh, dofs, VectorField{}, bc, options.tau);
  Vector f = Vector::Zero(static_cast<Eigen::Index>(dofs.n_p));
  return FootingProblem{std::move(mesh), std::move(bc), std::move(material), std::move(dofs), std::move(g), std::move(f)};
}

FootingResult footing_case(std::size_t nx, MassMode mode, KappaSpec spec, const FootingOptions& options) {
  FootingProblem prob = footing_problem(nx, spec, options);
  const BiotSystem system = BiotSystem::build(prob.mesh, prob.dofs, prob.material, prob.bc, options.tau, mode, options.jump);
  State state = system.step(State::zero(prob.dofs, 0.0), prob.g, prob.f);
  const OscillationMetrics metrics = oscillation_metric(state.p, prob.mesh);
  return FootingResult{std::move(prob.mesh), std::move(state), metrics};
}

}  // namespace biotcr
