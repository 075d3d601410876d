#include "sdflow/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "sdflow/fft.hpp"

namespace sdflow {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

void require_grid(std::size_t n) {
    if (n < 16 || !spectral::is_pow2(n)) {
        throw GeometryError("reference grid size must be a power of two >= 16 "
                            "(spectral differentiation), got " + std::to_string(n));
    }
}
}  // namespace

void ReferenceCurve::finalize() {
    max_abs_k_ = 0.0;
    for (double k : k_) max_abs_k_ = std::max(max_abs_k_, std::abs(k));
    dk_ = deriv(k_, 1);

    if (mode_ == CurveMode::PeriodicGraph) {
        eta_bar_ = std::numeric_limits<double>::infinity();
        area_ = 0.0;
        return;
    }

    if (eta_bar_ <= 0.0) eta_bar_ = 0.9 / max_abs_k_;
    if (max_abs_k_ <= 0.0 || !std::isfinite(max_abs_k_)) {
        throw GeometryError("closed reference curve must have finite nonzero curvature");
    }
    if (eta_bar_ > 1.0 / max_abs_k_) {
        throw GeometryError("eta_bar exceeds 1/max|k_G|; normal graph not well-defined");
    }

    // Reconstruct positions by integrating the tangent and get the enclosed
    // area from the divergence theorem (translation invariant).
    const std::size_t n = n_;
    std::vector<double> tx(n), ty(n);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        tx[i] = tau_[i].x;
        ty[i] = tau_[i].y;
        mx += tx[i];
        my += ty[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    if (std::hypot(mx, my) > 1e-6) {
        throw GeometryError("reference curve samples do not close up");
    }
    auto px = spectral::antiderivative(tx, length_);
    auto py = spectral::antiderivative(ty, length_);
    double area = 0.0;
    for (std::size_t i = 0; i < n; ++i) area += px[i] * nu_[i].x + py[i] * nu_[i].y;
    area_ = 0.5 * area * spacing();

    // Frenet consistency of the supplied samples: d_sigma nu = k tau.
    auto dnux = deriv([&] {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = nu_[i].x;
        return v;
    }(), 1);
    auto dnuy = deriv([&] {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = nu_[i].y;
        return v;
    }(), 1);
    double frenet_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        frenet_err = std::max(frenet_err, std::hypot(dnux[i] - k_[i] * tau_[i].x,
                                                     dnuy[i] - k_[i] * tau_[i].y));
    }
    if (frenet_err > 1e-4 * (1.0 + max_abs_k_)) {
        throw GeometryError("curvature samples inconsistent with normals (d_sigma nu != k tau)");
    }
}

std::shared_ptr<const ReferenceCurve> ReferenceCurve::circle(std::size_t n, double radius,
                                                             double eta_bar) {
    require_grid(n);
    if (radius <= 0.0) throw GeometryError("circle radius must be positive");
    auto curve = std::shared_ptr<ReferenceCurve>(new ReferenceCurve());
    curve->mode_ = CurveMode::Closed;
    curve->n_ = n;
    curve->length_ = two_pi * radius;
    curve->eta_bar_ = eta_bar;
    curve->k_.assign(n, 1.0 / radius);
    curve->nu_.resize(n);
    curve->tau_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = two_pi * static_cast<double>(i) / static_cast<double>(n);
        curve->nu_[i] = {std::cos(theta), std::sin(theta)};
        curve->tau_[i] = rot90(curve->nu_[i]);
    }
    curve->finalize();
    return curve;
}

std::shared_ptr<const ReferenceCurve> ReferenceCurve::periodic_graph(std::size_t n, double ell) {
    require_grid(n);
    if (!(ell > 0.0)) throw GeometryError("graph period must be positive");
    auto curve = std::shared_ptr<ReferenceCurve>(new ReferenceCurve());
    curve->mode_ = CurveMode::PeriodicGraph;
    curve->n_ = n;
    curve->length_ = ell;
    curve->k_.assign(n, 0.0);
    curve->nu_.assign(n, Vec2{0.0, 1.0});
    curve->tau_.assign(n, rot90(Vec2{0.0, 1.0}));
    curve->finalize();
    return curve;
}

std::shared_ptr<const ReferenceCurve> ReferenceCurve::from_json(const nlohmann::json& doc) {
    const std::string mode = doc.at("mode").get<std::string>();
    const std::size_t n = doc.at("N").get<std::size_t>();
    if (mode == "graph") {
        return periodic_graph(n, doc.at("ell").get<double>());
    }
    if (mode != "closed") throw GeometryError("curve mode must be 'closed' or 'graph'");
    require_grid(n);
    const auto& points = doc.at("points");
    if (points.size() != n) throw GeometryError("points array length must equal N");

    auto curve = std::shared_ptr<ReferenceCurve>(new ReferenceCurve());
    curve->mode_ = CurveMode::Closed;
    curve->n_ = n;
    curve->eta_bar_ = doc.value("eta_bar", 0.0);
    curve->k_.resize(n);
    curve->nu_.resize(n);
    curve->tau_.resize(n);

    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = points[i];
        s[i] = p.at("s").get<double>();
        const auto& nu = p.at("nu");
        Vec2 v{nu.at(0).get<double>(), nu.at(1).get<double>()};
        const double norm = std::hypot(v.x, v.y);
        if (std::abs(norm - 1.0) > 1e-8) {
            throw GeometryError("normal samples must be unit vectors");
        }
        curve->nu_[i] = {v.x / norm, v.y / norm};
        curve->tau_[i] = rot90(curve->nu_[i]);
        curve->k_[i] = p.at("k").get<double>();
    }
    const double ds = s[1] - s[0];
    if (!(ds > 0.0)) throw GeometryError("arclength samples must be increasing");
    curve->length_ = ds * static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(s[i] - (s[0] + ds * static_cast<double>(i))) > 1e-9 * curve->length_) {
            throw GeometryError("arclength samples must be uniformly spaced");
        }
    }
    curve->finalize();
    return curve;
}

std::vector<double> ReferenceCurve::deriv(std::span<const double> f, int order) const {
    auto d = spectral::derivative(f, order, length_);
    if (mode_ == CurveMode::PeriodicGraph && (order % 2) == 1) {
        for (auto& v : d) v = -v;
    }
    return d;
}

HeightField::HeightField(CurvePtr curve, std::vector<double> values)
    : curve_(std::move(curve)), values_(std::move(values)) {
    auto msg = check(*curve_, values_);
    if (!msg.empty()) throw GeometryError(msg);
}

std::string HeightField::check(const ReferenceCurve& curve, std::span<const double> values) {
    if (values.size() != curve.size()) return "height samples must match the reference grid";
    if (curve.mode() == CurveMode::Closed) {
        const double bound = 0.5 * curve.eta_bar();
        for (double v : values) {
            if (!(std::abs(v) < bound)) {
                return "height bound violated: |h| must stay below eta_bar/2 = " +
                       std::to_string(bound);
            }
        }
    } else {
        for (double v : values) {
            if (!(v > 0.0)) return "graph height must stay positive (film touches substrate)";
        }
    }
    return {};
}

std::vector<double> jacobian(const HeightField& h) {
    const auto& curve = h.curve();
    const auto k = curve.curvature();
    const auto dh = curve.deriv(h.values(), 1);
    const std::size_t n = h.size();
    std::vector<double> J(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 1.0 + h[i] * k[i];
        if (!(a > 0.0)) {
            throw GeometryError("degenerate geometry: 1 + h k_G <= 0 at node " +
                                std::to_string(i));
        }
        J[i] = std::hypot(a, dh[i]);
    }
    return J;
}

Frame frame(const HeightField& h) {
    const auto& curve = h.curve();
    const auto k = curve.curvature();
    const auto dh = curve.deriv(h.values(), 1);
    const auto J = jacobian(h);
    const auto tau_g = curve.tangent();
    const auto nu_g = curve.normal();
    const std::size_t n = h.size();
    Frame out;
    out.tangent.resize(n);
    out.normal.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 1.0 + h[i] * k[i];
        out.tangent[i] = {(a * tau_g[i].x + dh[i] * nu_g[i].x) / J[i],
                          (a * tau_g[i].y + dh[i] * nu_g[i].y) / J[i]};
        out.normal[i] = {(-dh[i] * tau_g[i].x + a * nu_g[i].x) / J[i],
                         (-dh[i] * tau_g[i].y + a * nu_g[i].y) / J[i]};
    }
    return out;
}

std::vector<double> curvature(const HeightField& h) {
    const auto& curve = h.curve();
    const auto k = curve.curvature();
    const auto dk = curve.curvature_deriv();
    const auto dh = curve.deriv(h.values(), 1);
    const auto d2h = curve.deriv(h.values(), 2);
    const auto J = jacobian(h);
    const std::size_t n = h.size();
    std::vector<double> kf(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 1.0 + h[i] * k[i];
        const double num = -d2h[i] * a + 2.0 * dh[i] * dh[i] * k[i] + a * a * k[i] +
                           h[i] * dh[i] * dk[i];
        kf[i] = num / (J[i] * J[i] * J[i]);
    }
    return kf;
}

std::vector<double> tangential_derivative(std::span<const double> f, const HeightField& h,
                                          int order) {
    if (order < 1 || order > 3) {
        throw std::invalid_argument("tangential_derivative: order must be 1, 2 or 3");
    }
    if (f.size() != h.size()) {
        throw std::invalid_argument("tangential_derivative: field size mismatch");
    }
    const auto J = jacobian(h);
    std::vector<double> cur(f.begin(), f.end());
    for (int m = 0; m < order; ++m) {
        auto d = h.curve().deriv(cur, 1);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] /= J[i];
        cur = std::move(d);
    }
    return cur;
}

std::vector<double> enclosed_areas(const HeightField& h) {
    const auto& curve = h.curve();
    const double w = curve.spacing();
    double acc = 0.0;
    if (curve.mode() == CurveMode::Closed) {
        const auto k = curve.curvature();
        for (std::size_t i = 0; i < h.size(); ++i) {
            acc += (h[i] + 0.5 * h[i] * h[i] * k[i]) * w;
        }
        return {curve.reference_area() + acc};
    }
    for (std::size_t i = 0; i < h.size(); ++i) acc += h[i] * w;
    return {acc};
}

double anchored_distance(const HeightField& h) {
    const auto& curve = h.curve();
    const auto k = curve.curvature();
    const double w = curve.spacing();
    double acc = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        acc += (0.5 * h[i] * h[i] + h[i] * h[i] * h[i] * k[i] / 3.0) * w;
    }
    return acc;
}

double perimeter(const HeightField& h) {
    const auto J = jacobian(h);
    double acc = 0.0;
    for (double j : J) acc += j;
    return acc * h.curve().spacing();
}

double grid_l2(const ReferenceCurve& curve, std::span<const double> f) {
    double acc = 0.0;
    for (double v : f) acc += v * v;
    return std::sqrt(acc * curve.spacing());
}

}  // namespace sdflow
