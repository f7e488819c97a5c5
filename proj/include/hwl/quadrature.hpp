#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hwl {

// Adaptive Gauss-Kronrod on a finite interval. Interior-node rule, so
// integrable endpoint singularities (e.g. u^(-1/a) at 0) are handled.
template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10, unsigned max_depth = 22) {
    if (!(b > a)) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        std::forward<F>(f), a, b, max_depth, rel_tol);
}

} // namespace hwl
