#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "helico/expr.hpp"

namespace helico {

struct RootConfig {
    double abs_tol = 1e-12;
    double step_tol = 1e-10;
    int max_iter = 100;
    int bracket_samples = 512;

    void validate() const;
};

using ScalarFn = std::function<double(double)>;
using BivariateFn = std::function<double(double, double)>;

// Central differences with one Richardson step, order 1..3.
double derivative(const ScalarFn& f, double t, int order = 1);

// Sorted, deduplicated zeros of f on [lo, hi]. Non-finite samples are treated
// as gaps. `df`, when given, replaces the finite-difference slope in Newton.
std::vector<double> find_roots(const ScalarFn& f, double lo, double hi,
                               const RootConfig& cfg = {}, const ScalarFn& df = nullptr);

// Bracket-safeguarded Newton on [lo, hi] where f(lo), f(hi) differ in sign.
double solve_bracketed(const ScalarFn& f, double lo, double hi, const RootConfig& cfg = {},
                       const ScalarFn& df = nullptr);

enum class ContinuationStatus { Complete, Fold };

struct ContinuationResult {
    std::vector<std::pair<double, double>> branch; // (c, t)
    ContinuationStatus status = ContinuationStatus::Complete;
    std::string message;

    bool complete() const { return status == ContinuationStatus::Complete; }
};

// Follows t(c) with F(c, t(c)) = 0 along c_grid starting from t0.
// `dFdt` is optional; a finite difference in t is used otherwise.
ContinuationResult continue_root(const BivariateFn& F, double t0, const std::vector<double>& c_grid,
                                 const RootConfig& cfg = {}, const BivariateFn& dFdt = nullptr);

class AngleFunction {
public:
    AngleFunction() = default;
    AngleFunction(std::vector<double> ts, std::vector<double> phis);

    const std::vector<double>& ts() const { return ts_; }
    const std::vector<double>& values() const { return phis_; }
    bool empty() const { return ts_.empty(); }

    // Cubic interpolation through the four nearest nodes.
    double operator()(double t) const;

private:
    std::vector<double> ts_;
    std::vector<double> phis_;
};

// samples: parameter values with (cos, sin)-like direction vectors.
AngleFunction unwrap_angle(const std::vector<double>& ts,
                           const std::vector<std::pair<double, double>>& directions);

// Smallest m with |f^(m)(t0)| > 1e-8 * (1 + max_{j<m} |f^(j)(t0)|), derivatives
// taken symbolically. nullopt when all orders up to m_max vanish.
std::optional<int> vanishing_order(const Expr& f, double t0, int m_max = 8);

std::vector<double> linspace(double lo, double hi, int n);

} // namespace helico
