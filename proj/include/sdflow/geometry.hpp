#pragma once

#include <memory>
#include <span>
#include <vector>

#include "sdflow/errors.hpp"

#include <nlohmann/json_fwd.hpp>

namespace sdflow {

enum class CurveMode { Closed, PeriodicGraph };

struct Vec2 {
    double x = 0.0, y = 0.0;
};

// Rotation by +90 degrees (counterclockwise).
inline Vec2 rot90(Vec2 v) { return {-v.y, v.x}; }

// Reference geometry the evolving boundary is written over as a normal graph.
//
// Closed mode stores one Jordan curve sampled uniformly in arclength: outward
// normals, curvature, total length and the tubular radius. Periodic-graph mode
// is the flat baseline of period `ell` (k_G = 0, nu_G = e2). The sample count
// must be a power of two (>= 16): every parameter derivative in this code is
// spectral.
class ReferenceCurve {
  public:
    static std::shared_ptr<const ReferenceCurve> circle(std::size_t n, double radius = 1.0,
                                                        double eta_bar = 0.0);
    static std::shared_ptr<const ReferenceCurve> periodic_graph(std::size_t n, double ell);
    // Schema: {mode, N, ell | points:[{s, nu:[x,y], k}], eta_bar}
    static std::shared_ptr<const ReferenceCurve> from_json(const nlohmann::json& doc);

    CurveMode mode() const { return mode_; }
    std::size_t size() const { return n_; }
    double param_length() const { return length_; }
    double spacing() const { return length_ / static_cast<double>(n_); }
    double eta_bar() const { return eta_bar_; }
    double reference_area() const { return area_; }
    double max_abs_curvature() const { return max_abs_k_; }

    std::span<const double> curvature() const { return k_; }
    std::span<const double> curvature_deriv() const { return dk_; }
    std::span<const Vec2> normal() const { return nu_; }
    std::span<const Vec2> tangent() const { return tau_; }

    // Derivative along the oriented reference parameter (the tangent direction
    // tau_G = R nu_G). In graph mode tau_G = (-1,0), so this is -d/dx.
    std::vector<double> deriv(std::span<const double> f, int order) const;

  private:
    ReferenceCurve() = default;
    void finalize();

    CurveMode mode_ = CurveMode::Closed;
    std::size_t n_ = 0;
    double length_ = 0.0;
    double eta_bar_ = 0.0;
    double area_ = 0.0;
    double max_abs_k_ = 0.0;
    std::vector<double> k_, dk_;
    std::vector<Vec2> nu_, tau_;
};

using CurvePtr = std::shared_ptr<const ReferenceCurve>;

// Periodic height samples over the reference grid; the evolving unknown.
// Construction enforces admissibility: |h| < eta_bar/2 in closed mode, h > 0
// in graph mode.
class HeightField {
  public:
    HeightField(CurvePtr curve, std::vector<double> values);

    // Empty string when admissible, otherwise the violated bound.
    static std::string check(const ReferenceCurve& curve, std::span<const double> values);

    const ReferenceCurve& curve() const { return *curve_; }
    const CurvePtr& curve_ptr() const { return curve_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

  private:
    CurvePtr curve_;
    std::vector<double> values_;
};

struct Frame {
    std::vector<Vec2> tangent;
    std::vector<Vec2> normal;
};

// Tangential Jacobian J = sqrt((1 + h k_G)^2 + (d_sigma h)^2) on the reference
// grid. Throws GeometryError when 1 + h k_G <= 0 at any node.
std::vector<double> jacobian(const HeightField& h);

// Unit tangent/normal of the graph boundary pulled back to the reference grid;
// tangent = rot90(normal) by construction.
Frame frame(const HeightField& h);

// Curvature of the graph boundary pulled back to the reference grid.
std::vector<double> curvature(const HeightField& h);

// n-fold tangential derivative (1/J d_param)^n of a field sampled on the
// reference grid, n in {1,2,3}.
std::vector<double> tangential_derivative(std::span<const double> f, const HeightField& h,
                                          int order);

// Areas enclosed by each boundary component (exact tubular quadrature added to
// the reference area in closed mode; integral of h in graph mode).
std::vector<double> enclosed_areas(const HeightField& h);

// Anchored distance integral over the symmetric difference with the reference,
// D = integral over Gamma_G of (h^2/2 + h^3 k_G / 3).
double anchored_distance(const HeightField& h);

// Perimeter of the graph boundary.
double perimeter(const HeightField& h);

// L2 norm over the reference measure of a grid field.
double grid_l2(const ReferenceCurve& curve, std::span<const double> f);

}  // namespace sdflow
