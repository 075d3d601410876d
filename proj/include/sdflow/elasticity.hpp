#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseCholesky>

#include <nlohmann/json_fwd.hpp>

#include "sdflow/geometry.hpp"

namespace sdflow {

// Two-dimensional Lame material; the stored energy density is
// Q(E) = mu |E|^2 + (lambda/2) (tr E)^2.
struct LameMaterial {
    double mu = 1.0;
    double lambda = 1.0;

    double poisson() const { return lambda / (2.0 * (lambda + mu)); }
    void validate() const {
        if (!(mu > 0.0)) throw Error("material: mu must be positive");
        if (!(lambda > -mu)) throw Error("material: lambda must exceed -mu");
    }
};

// Uniform-strain state of the flat film of any thickness: u = (e0 x1, c x2)
// with the traction-free top forcing lambda e0 + (lambda + 2 mu) c = 0.
double flat_film_contraction(const LameMaterial& mat, double e0);
double flat_film_q(const LameMaterial& mat, double e0);

// Displacement and derived quantities on the mapped strip mesh
// (x_i, xi_j h(x_i)), bilinear quadrilaterals, x-periodic, u = e0 (x1, 0) on
// the substrate, traction-free top.
class ElasticSolution {
  public:
    double energy() const { return energy_quad_; }
    double energy_stiffness_form() const { return energy_stiff_; }
    double domain_area() const { return area_; }
    double residual_rel() const { return residual_rel_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double ell() const { return ell_; }
    // Q(E(u)) at top-edge midpoints x_{i+1/2}, i = 0..nx-1.
    std::span<const double> trace_midpoints() const { return q_mid_; }
    // Periodic displacement correction at node (i,j), j=0..ny; the physical
    // displacement is u = (e0 x + v1, v2).
    std::span<const double> periodic_displacement() const { return v_; }
    nlohmann::json dump() const;

  private:
    friend class FilmSolver;
    int nx_ = 0, ny_ = 0;
    double ell_ = 0.0, e0_ = 0.0;
    double energy_quad_ = 0.0, energy_stiff_ = 0.0, area_ = 0.0, residual_rel_ = 0.0;
    std::vector<double> q_mid_;
    std::vector<double> v_;      // 2 dof per node, bottom row included (zeros)
    std::vector<double> h_fem_;  // film height at the nx mesh columns
};

// Assembles and factorizes the plane elasticity system on the strip mesh.
// Mesh topology, sparsity pattern and symbolic factorization are fixed at
// construction; per-solve work is element stiffness evaluation, numeric
// factorization and back substitution.
class FilmSolver {
  public:
    enum class Assembly { Serial, Parallel };

    FilmSolver(std::size_t n_grid, int nx, int ny, double ell, LameMaterial mat, double e0);

    ElasticSolution solve(std::span<const double> h_on_grid);

    void set_assembly(Assembly a) { assembly_ = a; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }

  private:
    void build_pattern();
    void assemble(const std::vector<double>& h_fem);

    std::size_t n_grid_;
    int nx_, ny_;
    double ell_, dx_;
    LameMaterial mat_;
    double e0_;
    Assembly assembly_ = Assembly::Parallel;

    int ndof_ = 0;
    // per element: 8 dof ids (-1 for substrate dofs) and 64 value slots
    std::vector<int> elem_dofs_;
    std::vector<int> elem_slots_;
    std::vector<std::vector<int>> color_elems_;
    Eigen::SparseMatrix<double> K_;
    Eigen::VectorXd rhs_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
    bool analyzed_ = false;
};

// One-shot solve of the film elastic equilibrium.
ElasticSolution solve_film(const HeightField& h, const LameMaterial& mat, double e0, int nx,
                           int ny);

// Projects the top-edge trace onto an n_target periodic grid keeping Fourier
// modes |k| <= kmax.
std::vector<double> boundary_Q_trace(const ElasticSolution& sol, std::size_t n_target, int kmax);

// Observed ratio ||q1 - q2||_inf / ||h1 - h2||_C1; returns 0 when the heights
// coincide.
double trace_lipschitz_probe(const HeightField& h1, const HeightField& h2,
                             const LameMaterial& mat, double e0, int nx, int ny);

}  // namespace sdflow
