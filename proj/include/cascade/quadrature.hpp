#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "cascade/errors.hpp"

namespace cascade {

struct QuadratureOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;
    // Pre-split [a, b] uniformly before refining; used to seed oscillatory
    // integrands so the error estimator sees resolved panels.
    int initial_subdivisions = 1;
    int max_intervals = 1 << 21;
    bool throw_on_failure = true;
};

template <class T>
struct QuadratureResult {
    T value{};
    double error_estimate = 0.0;
    int intervals = 0;
    bool converged = false;
};

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule
// (nodes for the positive half axis of [-1, 1]).
inline constexpr double gk15_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double gk15_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double gk15_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

inline double vnorm(double v) { return std::fabs(v); }
inline double vnorm(const std::complex<double>& v) { return std::abs(v); }

template <class F, class T>
void gk15_apply(F&& f, double a, double b, T& integral, double& error) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    T resk{};
    T resg{};
    double resabs = 0.0;
    T samples[15];
    int n = 0;
    for (int i = 0; i < 8; ++i) {
        if (i == 7) {
            const T fv = f(c);
            samples[n++] = fv;
            resk += gk15_wk[7] * fv;
            resg += gk15_wg[3] * fv;
            resabs += gk15_wk[7] * vnorm(fv);
        } else {
            const double dx = h * gk15_nodes[i];
            const T f1 = f(c - dx);
            const T f2 = f(c + dx);
            samples[n++] = f1;
            samples[n++] = f2;
            resk += gk15_wk[i] * (f1 + f2);
            if (i % 2 == 1) resg += gk15_wg[i / 2] * (f1 + f2);
            resabs += gk15_wk[i] * (vnorm(f1) + vnorm(f2));
        }
    }
    integral = resk * h;
    // QUADPACK-style error heuristic based on deviation from the panel mean.
    const T mean = resk * 0.5;
    double resasc = gk15_wk[7] * vnorm(samples[14] - mean);
    n = 0;
    for (int i = 0; i < 7; ++i) {
        resasc += gk15_wk[i] * (vnorm(samples[n] - mean) + vnorm(samples[n + 1] - mean));
        n += 2;
    }
    resasc *= std::fabs(h);
    resabs *= std::fabs(h);
    double err = vnorm(resk - resg) * std::fabs(h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(err, 50.0 * eps * resabs);
    error = err;
}

template <class T>
struct Panel {
    double a, b;
    T value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

} // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a, b]. T is double or
// std::complex<double> depending on the integrand.
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureOptions& opts = {})
    -> QuadratureResult<std::decay_t<decltype(f(a))>> {
    using T = std::decay_t<decltype(f(a))>;
    QuadratureResult<T> result;
    if (a == b) {
        result.converged = true;
        return result;
    }

    std::priority_queue<detail::Panel<T>> heap;
    T total{};
    double total_err = 0.0;
    const int n0 = std::max(1, opts.initial_subdivisions);
    for (int i = 0; i < n0; ++i) {
        const double x0 = a + (b - a) * static_cast<double>(i) / n0;
        const double x1 = a + (b - a) * static_cast<double>(i + 1) / n0;
        detail::Panel<T> p{x0, x1, T{}, 0.0};
        detail::gk15_apply(f, x0, x1, p.value, p.error);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }

    int used = n0;
    auto tolerance = [&]() {
        return std::max(opts.abs_tol, opts.rel_tol * detail::vnorm(total));
    };
    while (total_err > tolerance() && used < opts.max_intervals) {
        detail::Panel<T> worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b) {
            // interval at floating-point resolution; keep its estimate
            total_err -= worst.error;
            worst.error = 0.0;
            heap.push(worst);
            continue;
        }
        detail::Panel<T> left{worst.a, mid, T{}, 0.0};
        detail::Panel<T> right{mid, worst.b, T{}, 0.0};
        detail::gk15_apply(f, left.a, left.b, left.value, left.error);
        detail::gk15_apply(f, right.a, right.b, right.value, right.error);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++used;
    }

    result.value = total;
    result.error_estimate = total_err;
    result.intervals = used;
    result.converged = total_err <= tolerance();
    if (!result.converged && opts.throw_on_failure)
        throw QuadratureError("adaptive quadrature did not reach tolerance", detail::vnorm(total),
                              total_err);
    return result;
}

} // namespace cascade
