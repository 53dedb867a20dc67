#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "biotcr/assembly.hpp"
#include "biotcr/system.hpp"

namespace biotcr {

using Matrix2 = Eigen::Matrix2d;

/// Analytic displacement and pressure with the derivatives needed to build
/// sources and error norms. grad_u(x, t)(i, j) = d u_i / d x_j; hess_u[i] is
/// the Hessian of component i.
struct ExactSolution {
  std::function<Point(const Point&, double)> u;
  std::function<Matrix2(const Point&, double)> grad_u;
  std::function<std::array<Matrix2, 2>(const Point&, double)> hess_u;
  std::function<double(const Point&, double)> div_u_t;
  std::function<double(const Point&, double)> p;
  std::function<Point(const Point&, double)> grad_p;
  std::function<double(const Point&, double)> laplacian_p;
};

/// u = v = e^{-t} sin(pi x) sin(pi y), p = e^{-t} (cos(pi y) + 1).
ExactSolution sine_manufactured_solution();

struct ManufacturedSources {
  VectorField g;  // -div sigma'(u) + grad p
  ScalarField f;  // -div u_t - div w
  VectorField w;  // -K grad p
};

/// Closed-form sources for homogeneous lambda, mu, K.
ManufacturedSources manufactured_sources(const ExactSolution& exact, double lambda, double mu,
                                         double conductivity);

/// CR interpolant: face-barycenter values of a vector field.
Vector cr_interpolant(const Mesh& mesh, const std::function<Point(const Point&)>& field);

/// Cell averages (degree-4 quadrature).
Vector p0_projection(const Mesh& mesh, const std::function<double(const Point&)>& field);

/// sqrt(a_h(u - u_h, u - u_h)) with broken gradients; jump terms use the
/// exact trace on clamped boundary faces.
double energy_norm_error(const Vector& u_h, const ExactSolution& exact, const Mesh& mesh,
                         const MaterialField& material, const BoundarySpec& bc, double time,
                         const JumpOptions& jump = {});

/// sqrt(sum_T int_T (p - p_T)^2).
double l2_pressure_error(const Vector& p_h, const ExactSolution& exact, const Mesh& mesh, double time);

struct ConvergenceOptions {
  double young = 1.0;
  double poisson = 0.2;
  double conductivity = 1.0;
  double gamma1 = 0.5;
  double final_time = 1.0;
  DiagonalRule diagonal = DiagonalRule::SouthWestToNorthEast;
  JumpOptions jump{};
};

struct ConvergenceLevel {
  std::size_t nx = 0;
  std::size_t nt = 0;
  double tau = 0.0;
  double err_u_energy = 0.0;
  double err_p_l2 = 0.0;
  std::optional<double> rate_u;
  std::optional<double> rate_p;
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
  MassMode mode = MassMode::Lumped;
  ConvergenceOptions options;
};

/// Level sizes used for the reference table.
std::vector<std::pair<std::size_t, std::size_t>> default_convergence_levels();

/// Final-state fields of one manufactured-solution run.
struct ManufacturedRun {
  Mesh mesh;
  State state;
  double err_u_energy = 0.0;
  double err_p_l2 = 0.0;
};

/// Runs the manufactured problem on an nx-by-nx mesh with nt steps to the
/// final time: u clamped on the whole boundary, p = 0 on top, w.n = 0
/// elsewhere, u_h^0 = CR interpolant of u(., 0).
ManufacturedRun run_manufactured(std::size_t nx, std::size_t nt, MassMode mode,
                                 const ConvergenceOptions& options = {});

/// Observed rates are log(e_{k-1}/e_k) / log(nx_k / nx_{k-1}). on_level, if
/// set, sees each finished run before the next level starts.
ConvergenceReport convergence_study(const std::vector<std::pair<std::size_t, std::size_t>>& levels,
                                    MassMode mode, const ConvergenceOptions& options = {},
                                    const std::function<void(std::size_t, const ManufacturedRun&)>& on_level = {});

enum class KappaSpec { Homogeneous, Checkerboard };

struct FootingOptions {
  double lambda = 12500.0;
  double mu = 8333.0;
  double kappa = 1e-6;  // homogeneous value
  double checker_low = 1e-3;
  double checker_high = 1.0;
  double tau = 1e-3;
  double gamma1 = 0.5;
  DiagonalRule diagonal = DiagonalRule::SouthWestToNorthEast;
  JumpOptions jump{};
};

/// Per-cell conductivity of the footing problem.
std::vector<double> footing_conductivity(const Mesh& mesh, KappaSpec spec, const FootingOptions& options);

struct OscillationMetrics {
  double min_pressure = 0.0;
  double max_pressure = 0.0;
  double undershoot = 0.0;  // sum_T max(0, -p_T) |T|
};

OscillationMetrics oscillation_metric(const Vector& p, const Mesh& mesh);

/// Everything needed to build the footing step operator.
struct FootingProblem {
  Mesh mesh;
  BoundarySpec bc;
  MaterialField material;
  DofMap dofs;
  Vector g;  // load vector (traction on top)
  Vector f;  // zero source
};

FootingProblem footing_problem(std::size_t nx, KappaSpec spec, const FootingOptions& options = {});

struct FootingResult {
  Mesh mesh;
  State state;
  OscillationMetrics metrics;
};

/// One step of size tau from rest under a unit load on the drained top.
FootingResult footing_case(std::size_t nx, MassMode mode, KappaSpec spec, const FootingOptions& options = {});

std::string to_string(MassMode mode);

}  // namespace biotcr
