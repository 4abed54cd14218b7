#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "helico/expr.hpp"
#include "helico/numerics.hpp"

namespace helico {

using Vec2 = Eigen::Vector2d;

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double width() const { return hi - lo; }
    bool contains(double t) const { return t >= lo && t <= hi; }
};

enum class NuSource { Auto, Explicit, Angle };

// Plane curve gamma = (x, z) with unit normal nu = (a, b) = (cos phi, sin phi),
// mu = (-b, a), beta = gamma'.mu and ell = nu'.mu. All fields are symbolic in t.
class LegendreCurve {
public:
    static LegendreCurve from_tangent(Expr x, Expr z, Interval domain);
    static LegendreCurve with_normal(Expr x, Expr z, Expr a, Expr b, Interval domain);
    static LegendreCurve with_angle(Expr x, Expr z, Expr phi, Interval domain);

    NuSource nu_source() const { return source_; }
    const Interval& domain() const { return domain_; }

    const Expr& x() const { return x_; }
    const Expr& z() const { return z_; }
    const Expr& a() const { return a_; }
    const Expr& b() const { return b_; }
    const Expr& beta() const { return beta_; }
    const Expr& ell() const { return ell_; }
    const Expr& beta_dot() const { return beta_d_; }
    const Expr& ell_dot() const { return ell_d_; }
    const std::optional<Expr>& phi_expr() const { return phi_; }

    Vec2 gamma(double t) const { return {x_.eval(t), z_.eval(t)}; }
    Vec2 gamma_dot(double t) const { return {xd_.eval(t), zd_.eval(t)}; }
    Vec2 nu(double t) const { return {a_.eval(t), b_.eval(t)}; }
    Vec2 mu(double t) const { return {-b_.eval(t), a_.eval(t)}; }
    Vec2 nu_dot(double t) const { return {ad_.eval(t), bd_.eval(t)}; }
    double beta(double t) const { return beta_.eval(t); }
    double ell(double t) const { return ell_.eval(t); }
    // Smooth angle with nu = (cos phi, sin phi).
    double phi(double t) const;

    // Vertex function beta' ell - beta ell' and the ordinary-vertex quantity.
    Expr vertex_function() const;
    Expr vertex_quantity() const;

    std::vector<double> sample_ts(int n = 1001) const { return linspace(domain_.lo, domain_.hi, n); }

private:
    LegendreCurve(NuSource source, Expr x, Expr z, Expr a, Expr b, std::optional<Expr> phi, Interval domain);
    void validate();

    NuSource source_;
    Interval domain_;
    Expr x_, z_, a_, b_;
    Expr xd_, zd_, ad_, bd_;
    Expr beta_, ell_, beta_d_, ell_d_;
    std::optional<Expr> phi_;
    AngleFunction phi_samples_;
};

std::vector<double> singular_points(const LegendreCurve& c, const RootConfig& cfg = {});
bool is_front_at(const LegendreCurve& c, double t);
LegendreCurve parallel_curve(const LegendreCurve& c, double lambda);
Vec2 evolute(const LegendreCurve& c, double t);

struct Vertex {
    double t;
    bool ordinary;
};

struct VertexReport {
    bool degenerate_everywhere = false;
    std::vector<Vertex> vertices;
};

VertexReport vertices(const LegendreCurve& c, const RootConfig& cfg = {});

} // namespace helico
