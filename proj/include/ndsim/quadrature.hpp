#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace ndsim {

struct QuadratureBudget {
    double tol = 1e-6;  // relative to the integral's own scale, floored at 1
    std::uint64_t max_evals = 10'000'000;
    mutable std::uint64_t used = 0;
};

namespace detail {

template <class F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth, const QuadratureBudget& budget) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    budget.used += 2;
    if (budget.used > budget.max_evals)
        throw std::runtime_error("quadrature: evaluation budget exhausted");
    const double flm = f(lm), frm = f(rm);
    const double h = b - a;
    const double left = (h / 12.0) * (fa + 4.0 * flm + fm);
    const double right = (h / 12.0) * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget);
}

}  // namespace detail

// adaptive Simpson; the tolerance is scaled by the integral's rough magnitude
// so integrands of any units behave alike.  Throws when the eval cap is hit.
template <class F>
double integrate(const F& f, double a, double b, const QuadratureBudget& budget,
                 double tol_override = -1.0) {
    if (!(b > a)) return 0.0;
    const double tol = tol_override > 0.0 ? tol_override : budget.tol;
    budget.used += 3;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
    const double scaled = tol * std::max(1.0, std::abs(whole));
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, scaled, 48, budget);
}

}  // namespace ndsim
