#pragma once

#include <complex>
#include <string>
#include <vector>

#include "sdflow/geometry.hpp"

namespace sdflow {

struct Mat2 {
    double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;
};

// Positively one-homogeneous surface energy density phi and the tangential
// Hessian coefficient g(nu) = D^2 phi(nu) tau . tau that multiplies curvature.
//
// Every model is represented through its restriction to the unit circle,
// p(theta) = phi(cos theta, sin theta); then phi(nu) = |nu| p(theta(nu)),
// grad phi = p nu_hat + p' tau_hat and D^2 phi = ((p + p'') / |nu|) tau tau^T.
class AnisotropyModel {
  public:
    static AnisotropyModel isotropic(double c0 = 1e-3);
    static AnisotropyModel elliptic(double beta, double c0 = 1e-3);
    // Uniform theta samples of phi on [0, 2pi); trigonometric interpolation.
    static AnisotropyModel tabulated(std::vector<double> theta, std::vector<double> phi,
                                     double c0 = 1e-3);

    double phi(Vec2 nu) const;
    Vec2 grad_phi(Vec2 nu) const;
    Mat2 hess_phi(Vec2 nu) const;

    // g(nu) = D^2 phi(nu) tau . tau for unit nu (renormalized internally).
    // Throws EllipticityError when the value drops below c0/2.
    double g(Vec2 nu) const;

    double c0() const { return c0_; }
    const std::string& tag() const { return tag_; }

    struct EllipticityReport {
        double min_g = 0.0;
        double argmin_theta = 0.0;
        Vec2 argmin_nu;
        bool pass = false;
    };
    // Scans a 720-point sample of the unit circle; report-only.
    EllipticityReport check_ellipticity() const;

  private:
    AnisotropyModel() = default;
    void validate_structure() const;
    void profile(double theta, double& p, double& dp, double& ddp) const;

    enum class Kind { Isotropic, Elliptic, Tabulated } kind_ = Kind::Isotropic;
    double beta_ = 1.0;
    double c0_ = 1e-3;
    std::string tag_ = "isotropic";
    // tabulated: Fourier coefficients c_k of the profile, modes 0..m/2 with the
    // conjugate symmetry implied (profile is real)
    std::vector<std::complex<double>> profile_coeffs_;
};

// g evaluated through the model with the ellipticity floor check.
double g_of_nu(const AnisotropyModel& model, Vec2 nu);

}  // namespace sdflow
