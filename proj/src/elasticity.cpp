#include "sdflow/elasticity.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <nlohmann/json.hpp>

#include "sdflow/fft.hpp"

namespace sdflow {

namespace {

constexpr double kGauss = 0.57735026918962576451;  // 1/sqrt(3)

// corner order: (-1,-1), (1,-1), (1,1), (-1,1)
constexpr std::array<std::array<double, 2>, 4> kCorners = {
    {{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}}};

void shape_grad(double xi, double eta, std::array<double, 4>& dN_dxi,
                std::array<double, 4>& dN_deta) {
    for (int a = 0; a < 4; ++a) {
        dN_dxi[a] = 0.25 * kCorners[a][0] * (1.0 + kCorners[a][1] * eta);
        dN_deta[a] = 0.25 * kCorners[a][1] * (1.0 + kCorners[a][0] * xi);
    }
}

struct GpGeom {
    std::array<double, 4> dN_dx;
    std::array<double, 4> dN_dy;
    double detJ;
};

GpGeom gp_geometry(const std::array<double, 4>& xe, const std::array<double, 4>& ye, double xi,
                   double eta) {
    std::array<double, 4> dN_dxi, dN_deta;
    shape_grad(xi, eta, dN_dxi, dN_deta);
    double j00 = 0, j01 = 0, j10 = 0, j11 = 0;  // [dx/dxi dy/dxi; dx/deta dy/deta]
    for (int a = 0; a < 4; ++a) {
        j00 += dN_dxi[a] * xe[a];
        j01 += dN_dxi[a] * ye[a];
        j10 += dN_deta[a] * xe[a];
        j11 += dN_deta[a] * ye[a];
    }
    GpGeom g;
    g.detJ = j00 * j11 - j01 * j10;
    if (!(g.detJ > 0.0)) throw MeshError("strip mesh element has non-positive Jacobian");
    const double inv = 1.0 / g.detJ;
    for (int a = 0; a < 4; ++a) {
        g.dN_dx[a] = inv * (j11 * dN_dxi[a] - j01 * dN_deta[a]);
        g.dN_dy[a] = inv * (-j10 * dN_dxi[a] + j00 * dN_deta[a]);
    }
    return g;
}

struct Strain {
    double exx = 0, eyy = 0, exy = 0;
};

double density_q(const LameMaterial& mat, const Strain& e) {
    const double tr = e.exx + e.eyy;
    const double norm2 = e.exx * e.exx + e.eyy * e.eyy + 2.0 * e.exy * e.exy;
    return mat.mu * norm2 + 0.5 * mat.lambda * tr * tr;
}

}  // namespace

double flat_film_contraction(const LameMaterial& mat, double e0) {
    return -mat.lambda * e0 / (mat.lambda + 2.0 * mat.mu);
}

double flat_film_q(const LameMaterial& mat, double e0) {
    Strain e{e0, flat_film_contraction(mat, e0), 0.0};
    return density_q(mat, e);
}

FilmSolver::FilmSolver(std::size_t n_grid, int nx, int ny, double ell, LameMaterial mat,
                       double e0)
    : n_grid_(n_grid), nx_(nx), ny_(ny), ell_(ell), mat_(mat), e0_(e0) {
    mat_.validate();
    if (ny_ < 1) throw MeshError("strip mesh needs ny >= 1");
    if (nx_ < static_cast<int>(n_grid_) || nx_ % static_cast<int>(n_grid_) != 0 ||
        !spectral::is_pow2(static_cast<std::size_t>(nx_))) {
        throw MeshError("nx must be a power-of-two multiple of the height grid size");
    }
    dx_ = ell_ / static_cast<double>(nx_);
    ndof_ = 2 * nx_ * ny_;
    build_pattern();
}

void FilmSolver::build_pattern() {
    const int nx = nx_, ny = ny_;
    auto dof_of = [&](int i, int j, int comp) -> int {
        if (j == 0) return -1;  // substrate Dirichlet row
        return 2 * ((j - 1) * nx + ((i % nx + nx) % nx)) + comp;
    };

    const int nelem = nx * ny;
    elem_dofs_.assign(static_cast<std::size_t>(nelem) * 8, -1);
    color_elems_.assign(4, {});
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int e = j * nx + i;
            const std::array<std::array<int, 2>, 4> corners = {
                {{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
            for (int a = 0; a < 4; ++a) {
                for (int c = 0; c < 2; ++c) {
                    elem_dofs_[static_cast<std::size_t>(e) * 8 + 2 * a + c] =
                        dof_of(corners[a][0], corners[a][1], c);
                }
            }
            color_elems_[(i % 2) + 2 * (j % 2)].push_back(e);
        }
    }

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(nelem) * 64);
    for (int e = 0; e < nelem; ++e) {
        for (int a = 0; a < 8; ++a) {
            const int ra = elem_dofs_[static_cast<std::size_t>(e) * 8 + a];
            if (ra < 0) continue;
            for (int b = 0; b < 8; ++b) {
                const int cb = elem_dofs_[static_cast<std::size_t>(e) * 8 + b];
                if (cb < 0) continue;
                trips.emplace_back(ra, cb, 0.0);
            }
        }
    }
    K_.resize(ndof_, ndof_);
    K_.setFromTriplets(trips.begin(), trips.end());
    K_.makeCompressed();

    // map each element (a,b) pair to its slot in the compressed value array
    elem_slots_.assign(static_cast<std::size_t>(nelem) * 64, -1);
    const int* outer = K_.outerIndexPtr();
    const int* inner = K_.innerIndexPtr();
    for (int e = 0; e < nelem; ++e) {
        for (int a = 0; a < 8; ++a) {
            const int ra = elem_dofs_[static_cast<std::size_t>(e) * 8 + a];
            if (ra < 0) continue;
            for (int b = 0; b < 8; ++b) {
                const int cb = elem_dofs_[static_cast<std::size_t>(e) * 8 + b];
                if (cb < 0) continue;
                const int* begin = inner + outer[cb];
                const int* end = inner + outer[cb + 1];
                const int* it = std::lower_bound(begin, end, ra);
                elem_slots_[static_cast<std::size_t>(e) * 64 + 8 * a + b] =
                    static_cast<int>(outer[cb] + (it - begin));
            }
        }
    }
    rhs_.resize(ndof_);
}

void FilmSolver::assemble(const std::vector<double>& h_fem) {
    double* vals = K_.valuePtr();
    std::fill(vals, vals + K_.nonZeros(), 0.0);
    rhs_.setZero();

    const double dy = 1.0 / static_cast<double>(ny_);
    // Voigt stress of the mismatch strain diag(e0, 0)
    const double s0xx = (mat_.lambda + 2.0 * mat_.mu) * e0_;
    const double s0yy = mat_.lambda * e0_;

    auto element_kernel = [&](int e, std::array<double, 64>& ke, std::array<double, 8>& fe) {
        const int i = e % nx_, j = e / nx_;
        const double hl = h_fem[static_cast<std::size_t>(i)];
        const double hr = h_fem[static_cast<std::size_t>((i + 1) % nx_)];
        const std::array<double, 4> xe = {static_cast<double>(i) * dx_,
                                          static_cast<double>(i + 1) * dx_,
                                          static_cast<double>(i + 1) * dx_,
                                          static_cast<double>(i) * dx_};
        const std::array<double, 4> ye = {static_cast<double>(j) * dy * hl,
                                          static_cast<double>(j) * dy * hr,
                                          static_cast<double>(j + 1) * dy * hr,
                                          static_cast<double>(j + 1) * dy * hl};
        ke.fill(0.0);
        fe.fill(0.0);
        const double d00 = mat_.lambda + 2.0 * mat_.mu;
        const double d01 = mat_.lambda;
        const double dmu = mat_.mu;
        for (int gx = 0; gx < 2; ++gx) {
            for (int gy = 0; gy < 2; ++gy) {
                const GpGeom g = gp_geometry(xe, ye, gx ? kGauss : -kGauss,
                                             gy ? kGauss : -kGauss);
                const double w = g.detJ;  // unit gauss weights
                for (int a = 0; a < 4; ++a) {
                    const double ax = g.dN_dx[a], ay = g.dN_dy[a];
                    // rhs: -(C E0) : E(w) for w = N_a e_c
                    fe[2 * a + 0] -= w * s0xx * ax;
                    fe[2 * a + 1] -= w * s0yy * ay;
                    for (int b = 0; b < 4; ++b) {
                        const double bx = g.dN_dx[b], by = g.dN_dy[b];
                        // component blocks of B^T D B
                        ke[8 * (2 * a + 0) + 2 * b + 0] += w * (d00 * ax * bx + dmu * ay * by);
                        ke[8 * (2 * a + 0) + 2 * b + 1] += w * (d01 * ax * by + dmu * ay * bx);
                        ke[8 * (2 * a + 1) + 2 * b + 0] += w * (d01 * ay * bx + dmu * ax * by);
                        ke[8 * (2 * a + 1) + 2 * b + 1] += w * (d00 * ay * by + dmu * ax * bx);
                    }
                }
            }
        }
    };

    auto scatter = [&](int e, const std::array<double, 64>& ke, const std::array<double, 8>& fe) {
        const std::size_t base = static_cast<std::size_t>(e) * 64;
        for (int a = 0; a < 8; ++a) {
            const int ra = elem_dofs_[static_cast<std::size_t>(e) * 8 + a];
            if (ra < 0) continue;
            rhs_[ra] += fe[static_cast<std::size_t>(a)];
            for (int b = 0; b < 8; ++b) {
                const int slot = elem_slots_[base + 8 * static_cast<std::size_t>(a) +
                                             static_cast<std::size_t>(b)];
                if (slot >= 0) vals[slot] += ke[8 * static_cast<std::size_t>(a) +
                                                static_cast<std::size_t>(b)];
            }
        }
    };

    // Same-colored elements share no node, so the scatter below is race-free
    // and the accumulation order per slot is the fixed color order: the
    // parallel result is bitwise equal to the serial one.
    for (const auto& elems : color_elems_) {
        if (assembly_ == Assembly::Parallel) {
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(elems.size()); ++idx) {
                std::array<double, 64> ke;
                std::array<double, 8> fe;
                element_kernel(elems[static_cast<std::size_t>(idx)], ke, fe);
                scatter(elems[static_cast<std::size_t>(idx)], ke, fe);
            }
        } else {
            for (std::size_t idx = 0; idx < elems.size(); ++idx) {
                std::array<double, 64> ke;
                std::array<double, 8> fe;
                element_kernel(elems[idx], ke, fe);
                scatter(elems[idx], ke, fe);
            }
        }
    }
}

ElasticSolution FilmSolver::solve(std::span<const double> h_on_grid) {
    if (h_on_grid.size() != n_grid_) throw MeshError("height grid size mismatch");
    for (double v : h_on_grid) {
        if (!(v > 0.0)) throw MeshError("film height must be positive");
    }
    std::vector<double> h_fem = spectral::resample(h_on_grid, static_cast<std::size_t>(nx_));
    for (double v : h_fem) {
        if (!(v > 0.0)) throw MeshError("film height interpolant dips below the substrate");
    }

    assemble(h_fem);
    if (!analyzed_) {
        ldlt_.analyzePattern(K_);
        analyzed_ = true;
    }
    ldlt_.factorize(K_);
    if (ldlt_.info() != Eigen::Success) {
        throw SolveError("elastic stiffness factorization failed (singular system)");
    }
    Eigen::VectorXd v = ldlt_.solve(rhs_);
    if (ldlt_.info() != Eigen::Success) throw SolveError("elastic solve failed");

    ElasticSolution sol;
    sol.nx_ = nx_;
    sol.ny_ = ny_;
    sol.ell_ = ell_;
    sol.e0_ = e0_;
    sol.h_fem_ = h_fem;
    sol.residual_rel_ = (K_.selfadjointView<Eigen::Lower>() * v - rhs_).norm() /
                        std::max(1.0, rhs_.norm());

    // nodal displacement correction including the clamped substrate row
    sol.v_.assign(static_cast<std::size_t>(2 * nx_ * (ny_ + 1)), 0.0);
    for (int j = 1; j <= ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            for (int c = 0; c < 2; ++c) {
                sol.v_[static_cast<std::size_t>(2 * (j * nx_ + i) + c)] =
                    v[2 * ((j - 1) * nx_ + i) + c];
            }
        }
    }

    // energy by quadrature of Q(E0 + E(v)) and the top-edge trace
    const double dy = 1.0 / static_cast<double>(ny_);
    double energy = 0.0, area = 0.0;
    sol.q_mid_.assign(static_cast<std::size_t>(nx_), 0.0);
    auto vdof = [&](int i, int j, int c) -> double {
        return sol.v_[static_cast<std::size_t>(2 * (j * nx_ + ((i % nx_ + nx_) % nx_)) + c)];
    };
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const double hl = h_fem[static_cast<std::size_t>(i)];
            const double hr = h_fem[static_cast<std::size_t>((i + 1) % nx_)];
            const std::array<double, 4> xe = {static_cast<double>(i) * dx_,
                                              static_cast<double>(i + 1) * dx_,
                                              static_cast<double>(i + 1) * dx_,
                                              static_cast<double>(i) * dx_};
            const std::array<double, 4> ye = {static_cast<double>(j) * dy * hl,
                                              static_cast<double>(j) * dy * hr,
                                              static_cast<double>(j + 1) * dy * hr,
                                              static_cast<double>(j + 1) * dy * hl};
            const std::array<std::array<int, 2>, 4> corners = {
                {{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
            auto strain_at = [&](double xi, double eta) {
                const GpGeom g = gp_geometry(xe, ye, xi, eta);
                Strain e;
                for (int a = 0; a < 4; ++a) {
                    const double v1 = vdof(corners[a][0], corners[a][1], 0);
                    const double v2 = vdof(corners[a][0], corners[a][1], 1);
                    e.exx += g.dN_dx[a] * v1;
                    e.eyy += g.dN_dy[a] * v2;
                    e.exy += 0.5 * (g.dN_dy[a] * v1 + g.dN_dx[a] * v2);
                }
                e.exx += e0_;
                return e;
            };
            for (int gx = 0; gx < 2; ++gx) {
                for (int gy = 0; gy < 2; ++gy) {
                    const double xi = gx ? kGauss : -kGauss;
                    const double eta = gy ? kGauss : -kGauss;
                    const GpGeom g = gp_geometry(xe, ye, xi, eta);
                    energy += g.detJ * density_q(mat_, strain_at(xi, eta));
                    area += g.detJ;
                }
            }
            if (j == ny_ - 1) {
                const double qa = density_q(mat_, strain_at(-kGauss, 1.0));
                const double qb = density_q(mat_, strain_at(kGauss, 1.0));
                sol.q_mid_[static_cast<std::size_t>(i)] = std::max(0.0, 0.5 * (qa + qb));
            }
        }
    }
    sol.energy_quad_ = energy;
    sol.area_ = area;
    Strain e0s{e0_, 0.0, 0.0};
    sol.energy_stiff_ = density_q(mat_, e0s) * area - 0.5 * v.dot(K_.selfadjointView<Eigen::Lower>() * v);
    return sol;
}

nlohmann::json ElasticSolution::dump() const {
    nlohmann::json nodes = nlohmann::json::array();
    nlohmann::json u = nlohmann::json::array();
    const double dx = ell_ / static_cast<double>(nx_);
    const double dy = 1.0 / static_cast<double>(ny_);
    for (int j = 0; j <= ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const double x = static_cast<double>(i) * dx;
            const double y = static_cast<double>(j) * dy * h_fem_[static_cast<std::size_t>(i)];
            nodes.push_back({x, y});
            const double v1 = v_[static_cast<std::size_t>(2 * (j * nx_ + i) + 0)];
            const double v2 = v_[static_cast<std::size_t>(2 * (j * nx_ + i) + 1)];
            u.push_back({e0_ * x + v1, v2});
        }
    }
    nlohmann::json cells = nlohmann::json::array();
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            cells.push_back({j * nx_ + i, j * nx_ + (i + 1) % nx_, (j + 1) * nx_ + (i + 1) % nx_,
                             (j + 1) * nx_ + i});
        }
    }
    return nlohmann::json{{"nodes", nodes}, {"cells", cells}, {"u", u}};
}

ElasticSolution solve_film(const HeightField& h, const LameMaterial& mat, double e0, int nx,
                           int ny) {
    if (h.curve().mode() != CurveMode::PeriodicGraph) {
        throw MeshError("film elasticity requires periodic-graph geometry");
    }
    FilmSolver solver(h.size(), nx, ny, h.curve().param_length(), mat, e0);
    return solver.solve(h.values());
}

std::vector<double> boundary_Q_trace(const ElasticSolution& sol, std::size_t n_target,
                                     int kmax) {
    return spectral::resample_from_midpoints(sol.trace_midpoints(), n_target, kmax);
}

double trace_lipschitz_probe(const HeightField& h1, const HeightField& h2,
                             const LameMaterial& mat, double e0, int nx, int ny) {
    if (h1.size() != h2.size()) throw MeshError("probe needs matching grids");
    const std::size_t n = h1.size();
    bool equal = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (h1[i] != h2[i]) {
            equal = false;
            break;
        }
    }
    if (equal) return 0.0;

    FilmSolver solver(n, nx, ny, h1.curve().param_length(), mat, e0);
    const int kmax = static_cast<int>(n) / 3;
    auto q1 = boundary_Q_trace(solver.solve(h1.values()), n, kmax);
    auto q2 = boundary_Q_trace(solver.solve(h2.values()), n, kmax);

    std::vector<double> dh(n);
    for (std::size_t i = 0; i < n; ++i) dh[i] = h1[i] - h2[i];
    auto ddh = h1.curve().deriv(dh, 1);
    double num = 0.0, den = 0.0, dsup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num = std::max(num, std::abs(q1[i] - q2[i]));
        den = std::max(den, std::abs(dh[i]));
        dsup = std::max(dsup, std::abs(ddh[i]));
    }
    return num / (den + dsup);
}

}  // namespace sdflow
