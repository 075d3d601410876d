#include "sdflow/anisotropy.hpp"

#include <cmath>
#include <numbers>

#include "sdflow/fft.hpp"

namespace sdflow {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

AnisotropyModel AnisotropyModel::isotropic(double c0) {
    AnisotropyModel m;
    m.kind_ = Kind::Isotropic;
    m.c0_ = c0;
    m.tag_ = "isotropic";
    m.validate_structure();
    return m;
}

AnisotropyModel AnisotropyModel::elliptic(double beta, double c0) {
    if (!(beta > 0.0)) throw Error("elliptic anisotropy needs beta > 0");
    AnisotropyModel m;
    m.kind_ = Kind::Elliptic;
    m.beta_ = beta;
    m.c0_ = c0;
    m.tag_ = "elliptic(beta=" + std::to_string(beta) + ")";
    m.validate_structure();
    return m;
}

AnisotropyModel AnisotropyModel::tabulated(std::vector<double> theta, std::vector<double> phi,
                                           double c0) {
    const std::size_t m = theta.size();
    if (m < 8 || !spectral::is_pow2(m) || phi.size() != m) {
        throw Error("tabulated anisotropy needs matching power-of-two sample arrays (>= 8)");
    }
    const double dt = two_pi / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (std::abs(theta[i] - dt * static_cast<double>(i)) > 1e-9) {
            throw Error("tabulated anisotropy needs uniform theta samples on [0, 2pi)");
        }
        if (!(phi[i] > 0.0)) throw Error("tabulated anisotropy needs phi > 0");
    }
    AnisotropyModel out;
    out.kind_ = Kind::Tabulated;
    out.c0_ = c0;
    out.tag_ = "table(" + std::to_string(m) + ")";
    out.profile_coeffs_ = spectral::coefficients(phi);
    // keep modes up to (exclusive of) Nyquist; drop the rest for a smooth
    // interpolant with well-defined derivatives
    out.profile_coeffs_[m / 2] = 0.0;
    out.validate_structure();
    return out;
}

void AnisotropyModel::profile(double theta, double& p, double& dp, double& ddp) const {
    switch (kind_) {
        case Kind::Isotropic:
            p = 1.0;
            dp = 0.0;
            ddp = 0.0;
            return;
        case Kind::Elliptic: {
            const double c = std::cos(theta), s = std::sin(theta);
            const double b2 = beta_ * beta_;
            p = std::sqrt(c * c + b2 * s * s);
            const double q = (b2 - 1.0) * s * c;
            dp = q / p;
            ddp = (b2 - 1.0) * (c * c - s * s) / p - q * q / (p * p * p);
            return;
        }
        case Kind::Tabulated: {
            const std::size_t m = profile_coeffs_.size();
            double acc = profile_coeffs_[0].real();
            double dacc = 0.0, ddacc = 0.0;
            for (std::size_t k = 1; k < m / 2; ++k) {
                const auto c = profile_coeffs_[k];
                const double kk = static_cast<double>(k);
                const double ck = std::cos(kk * theta), sk = std::sin(kk * theta);
                // real profile: c_{-k} = conj(c_k)
                acc += 2.0 * (c.real() * ck - c.imag() * sk);
                dacc += 2.0 * kk * (-c.real() * sk - c.imag() * ck);
                ddacc += 2.0 * kk * kk * (-c.real() * ck + c.imag() * sk);
            }
            p = acc;
            dp = dacc;
            ddp = ddacc;
            return;
        }
    }
    p = dp = ddp = 0.0;
}

void AnisotropyModel::validate_structure() const {
    // positivity, homogeneity and the Euler relation on a 720-point sample
    for (int i = 0; i < 720; ++i) {
        const double theta = two_pi * static_cast<double>(i) / 720.0;
        const Vec2 nu{std::cos(theta), std::sin(theta)};
        const double f = phi(nu);
        if (!(f > 0.0)) throw Error("anisotropy density must be positive on S^1");
        const double f2 = phi({2.0 * nu.x, 2.0 * nu.y});
        if (std::abs(f2 - 2.0 * f) > 1e-8 * std::abs(f)) {
            throw Error("anisotropy density is not positively one-homogeneous");
        }
        const Vec2 gr = grad_phi(nu);
        if (std::abs(gr.x * nu.x + gr.y * nu.y - f) > 1e-8 * std::max(1.0, std::abs(f))) {
            throw Error("anisotropy density violates the Euler relation");
        }
    }
}

double AnisotropyModel::phi(Vec2 nu) const {
    const double r = std::hypot(nu.x, nu.y);
    double p, dp, ddp;
    profile(std::atan2(nu.y, nu.x), p, dp, ddp);
    return r * p;
}

Vec2 AnisotropyModel::grad_phi(Vec2 nu) const {
    const double r = std::hypot(nu.x, nu.y);
    const Vec2 nhat{nu.x / r, nu.y / r};
    const Vec2 that = rot90(nhat);
    double p, dp, ddp;
    profile(std::atan2(nu.y, nu.x), p, dp, ddp);
    return {p * nhat.x + dp * that.x, p * nhat.y + dp * that.y};
}

Mat2 AnisotropyModel::hess_phi(Vec2 nu) const {
    const double r = std::hypot(nu.x, nu.y);
    const Vec2 nhat{nu.x / r, nu.y / r};
    const Vec2 that = rot90(nhat);
    double p, dp, ddp;
    profile(std::atan2(nu.y, nu.x), p, dp, ddp);
    const double gg = (p + ddp) / r;
    return {gg * that.x * that.x, gg * that.x * that.y, gg * that.y * that.x,
            gg * that.y * that.y};
}

double AnisotropyModel::g(Vec2 nu) const {
    double p, dp, ddp;
    profile(std::atan2(nu.y, nu.x), p, dp, ddp);
    const double value = p + ddp;
    if (value < 0.5 * c0_) {
        throw EllipticityError("g(nu) = " + std::to_string(value) +
                               " below c0/2; anisotropy model is not strongly elliptic");
    }
    return value;
}

AnisotropyModel::EllipticityReport AnisotropyModel::check_ellipticity() const {
    EllipticityReport rep;
    rep.min_g = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 720; ++i) {
        const double theta = two_pi * static_cast<double>(i) / 720.0;
        double p, dp, ddp;
        profile(theta, p, dp, ddp);
        const double value = p + ddp;
        if (value < rep.min_g) {
            rep.min_g = value;
            rep.argmin_theta = theta;
            rep.argmin_nu = {std::cos(theta), std::sin(theta)};
        }
    }
    rep.pass = rep.min_g >= c0_;
    return rep;
}

double g_of_nu(const AnisotropyModel& model, Vec2 nu) { return model.g(nu); }

}  // namespace sdflow
