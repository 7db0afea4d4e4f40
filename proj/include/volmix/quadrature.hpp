#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace volmix {

struct QuadratureSpec {
    double rel_tol = 1e-8;
    unsigned max_depth = 20;  // adaptive subdivision limit
};

/// Raised when the adaptive rule exhausts its subdivision limit before the
/// requested relative tolerance; carries the partial estimate and the error
/// bound at the point of failure.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(double partial, double bound)
        : std::runtime_error("quadrature did not converge: estimate " +
                             std::to_string(partial) + ", error bound " +
                             std::to_string(bound)),
          partial_estimate(partial),
          error_bound(bound) {}

    double partial_estimate;
    double error_bound;
};

/// Adaptive Gauss-Kronrod over a finite interval.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    using rule = boost::math::quadrature::gauss_kronrod<double, 15>;
    double err = 0.0, l1 = 0.0;
    const double v = rule::integrate(std::forward<F>(f), a, b, spec.max_depth,
                                     spec.rel_tol, &err, &l1);
    const double scale = std::max(l1, std::abs(v));
    if (scale > 0.0 && err > 8.0 * spec.rel_tol * scale)
        throw QuadratureError(v, err);
    return v;
}

/// Adaptive quadrature over [lo, inf) via sigma = lo + u/(1-u), u in [0,1).
template <class F>
double integrate_semi_infinite(F&& f, double lo, const QuadratureSpec& spec = {}) {
    auto g = [&f, lo](double u) -> double {
        if (u >= 1.0) return 0.0;
        const double r = 1.0 / (1.0 - u);
        const double x = lo + u * r;
        const double fx = f(x);
        return fx == 0.0 ? 0.0 : fx * r * r;
    };
    return integrate(g, 0.0, 1.0, spec);
}

}  // namespace volmix
