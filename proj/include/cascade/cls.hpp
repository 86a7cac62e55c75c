#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "cascade/constants.hpp"
#include "cascade/errors.hpp"
#include "cascade/geometry.hpp"
#include "cascade/kernels.hpp"
#include "cascade/quadrature.hpp"
#include "cascade/species.hpp"

namespace cascade::cls {

using geometry::AtomCloud;
using geometry::CylinderSpec;
using species::SpeciesData;

// Collective shift of the phase-matched mode, Im(lambda_N) in rad/s.
// Sign convention throughout this module: positive value = redshift of the
// idler line (the emitted line sits below omega3 by the returned amount).
// Output records carry this as redshift_positive = true.

struct CutoffConfig {
    double k_m = 0.0;  // rad/m, infrared cutoff
    double k_M = 0.0;  // rad/m, ultraviolet cutoff (ignored when infinite)
    bool k_M_infinite = false;

    void validate(double k3) const {
        if (!(k_m > 0.0) || !(k_m < k3))
            throw std::invalid_argument("need 0 < k_m < k3");
        if (!k_M_infinite && !(k_M > k3))
            throw std::invalid_argument("need k_M > k3 (or k_M_infinite)");
    }
};

// Long-wavelength cutoff from the ensemble volume: 2 pi / cbrt(pi a^2 h).
inline double infrared_cutoff(const CylinderSpec& spec) {
    return two_pi / std::cbrt(spec.volume());
}

// Short-wavelength cutoff from the atomic size. The 2 pi mapping is a
// convention of this library; set CutoffConfig::k_M directly to override.
inline double uv_cutoff(double atomic_radius) {
    if (!(atomic_radius > 0.0)) throw std::invalid_argument("atomic radius must be positive");
    return two_pi / atomic_radius;
}

inline CutoffConfig default_cutoffs(const CylinderSpec& spec, const SpeciesData& sp) {
    return {infrared_cutoff(spec), uv_cutoff(sp.atomic_radius), false};
}

// Leading order in k_m/k3 and k3/k_M:
//   Im(lambda_N) = (1/pi) N mu_bar(k3) Gamma3 (k_m/k3 - k3/k_M).
// Redshift for k_M -> infinity.
inline double cls_closed_form(double n_atoms, double mu_bar, double k3,
                              const CutoffConfig& cutoffs, double gamma3) {
    cutoffs.validate(k3);
    const double uv = cutoffs.k_M_infinite ? 0.0 : k3 / cutoffs.k_M;
    return n_atoms * mu_bar * gamma3 * (cutoffs.k_m / k3 - uv) / pi;
}

// Frozen-geometry cutoff integral evaluated through its exact antiderivative.
// With k normalized to k3 the integrand (1/k)(1/(k-1) + 1/(k+1)) = 2/(k^2-1)
// has antiderivative ln|k-1| - ln(k+1), continuous across the pole in the
// principal-value sense, so
//   Im(lambda_N) = (N mu_bar Gamma3 / 2 pi) [ F(k_M/k3) - F(k_m/k3) ],
// no numerical excision required.
inline double cls_cutoff_integral(double n_atoms, double mu_bar_at_k3, double k3,
                                  const CutoffConfig& cutoffs, double gamma3) {
    cutoffs.validate(k3);
    auto antiderivative = [](double k) { return std::log(std::fabs(k - 1.0)) - std::log(k + 1.0); };
    const double upper = cutoffs.k_M_infinite ? 0.0 : antiderivative(cutoffs.k_M / k3);
    const double pv = upper - antiderivative(cutoffs.k_m / k3);
    return n_atoms * mu_bar_at_k3 * gamma3 * pv / (2.0 * pi);
}

struct FullIntegralOptions {
    std::array<double, 3> excisions{1e-4, 1e-5, 1e-6};
    double outer_rel_tol = 1e-6;
    double mu_rel_tol = 1e-8;
    double mu_rel_tol_near_pole = 1e-10;
};

struct FullIntegralResult {
    double value = 0.0;              // rad/s, Richardson-extrapolated
    double richardson_spread = 0.0;  // |last two extrapolants|, rad/s
    std::array<double, 3> excised{}; // raw values at the three excisions
};

// Momentum integral without freezing the geometry integral at k = k3:
//   Im(lambda_N) = (N Gamma3 / 2 pi) P.V. Int_{k_m/k3}^{k_M/k3} dk
//                  k^3 mu_bar(k) [1/(k-1) + 1/(k+1)],
// the fold of the even integrand onto k > 0. The simple pole at k = 1 is
// handled by symmetric excision at the configured epsilons; the excised
// values converge linearly in epsilon and are Richardson-extrapolated.
inline FullIntegralResult cls_full_integral(const CylinderSpec& spec, const CutoffConfig& cutoffs,
                                            double gamma3, const FullIntegralOptions& opts = {}) {
    const double k3 = spec.k3();
    cutoffs.validate(k3);
    if (cutoffs.k_M_infinite)
        throw std::invalid_argument("full integral is ultraviolet-divergent; k_M must be finite");
    const double km = cutoffs.k_m / k3;
    const double kM = cutoffs.k_M / k3;
    const double Hs = spec.H();
    const double As = spec.A();
    const double n_atoms = static_cast<double>(spec.n_atoms);

    auto mu_at = [&](double k, double tol) {
        return geometry::detail::mu_bar_scaled(k * Hs, k * As, n_atoms, tol);
    };
    auto psi = [&](double k, double tol) {
        return k * k * k * mu_at(k, tol) * (1.0 / (k - 1.0) + 1.0 / (k + 1.0));
    };

    QuadratureOptions inner;
    inner.rel_tol = opts.outer_rel_tol;
    inner.abs_tol = 1e-16;
    inner.max_intervals = 4000;
    inner.throw_on_failure = false;  // mu_bar noise floors the error estimate

    // region integrals in log k away from the pole, linear k next to it
    auto integrate_log = [&](double a, double b) {
        if (a >= b) return 0.0;
        auto f = [&](double t) {
            const double k = std::exp(t);
            return psi(k, opts.mu_rel_tol) * k;
        };
        QuadratureOptions o = inner;
        o.initial_subdivisions = 16;
        return integrate(f, std::log(a), std::log(b), o).value;
    };
    auto integrate_lin = [&](double a, double b, double tol) {
        if (a >= b) return 0.0;
        QuadratureOptions o = inner;
        o.initial_subdivisions = 8;
        return integrate([&](double k) { return psi(k, tol); }, a, b, o).value;
    };

    const double eps0 = opts.excisions[0];
    const double lo_break = std::min(0.5, km * 2.0 + 0.25);
    const double hi_break = std::min(2.0, kM);
    double base = 0.0;
    base += integrate_log(km, lo_break);
    base += integrate_lin(lo_break, 1.0 - eps0, opts.mu_rel_tol);
    base += integrate_lin(1.0 + eps0, hi_break, opts.mu_rel_tol);
    base += integrate_log(hi_break, kM);

    // shrink the excision window: I(eps') = I(eps) + Int_eps'^eps of the
    // symmetrized strip, which is regular since the 1/(k-1) parts cancel
    auto strip = [&](double u) {
        return psi(1.0 + u, opts.mu_rel_tol_near_pole) + psi(1.0 - u, opts.mu_rel_tol_near_pole);
    };
    FullIntegralResult out;
    out.excised[0] = base;
    for (int i = 1; i < 3; ++i) {
        QuadratureOptions o = inner;
        o.initial_subdivisions = 8;
        const double increment = integrate(strip, opts.excisions[i], opts.excisions[i - 1], o).value;
        out.excised[i] = out.excised[i - 1] + increment;
    }
    // linear-in-epsilon Richardson with ratio-10 excisions
    const double r01 = (10.0 * out.excised[1] - out.excised[0]) / 9.0;
    const double r12 = (10.0 * out.excised[2] - out.excised[1]) / 9.0;
    const double scale = n_atoms * gamma3 / (2.0 * pi);
    out.value = scale * r12;
    out.richardson_spread = scale * std::fabs(r12 - r01);
    for (auto& v : out.excised) v *= scale;
    return out;
}

struct DiscreteSumResult {
    double value = 0.0;            // rad/s at the cloud's exclusion radius
    double value_wider_core = 0.0; // rad/s with pairs inside 2 r_ex dropped
};

// Microscopic counterpart of the integral forms: the shift of the phased
// symmetric mode from the pairwise shift kernel,
//   Im(lambda_N) = -(Gamma3/N) sum_{mu != nu} G_{mu nu} cos(kbar.(r_mu-r_nu))
// with the sigma-polarized kernel about the kbar axis. The 1/xi^3 core makes
// the sum sensitive to the exclusion radius, so the value at twice the
// cloud's hard core is reported alongside.
inline DiscreteSumResult cls_discrete_sum(const AtomCloud& cloud, const Eigen::Vector3d& kbar,
                                          double k3, double gamma3) {
    const std::size_t n = cloud.positions.size();
    if (n == 0) throw std::invalid_argument("cloud is empty");
    double acc = 0.0;
    double acc_wide = 0.0;
    const double wide = 2.0 * cloud.exclusion_radius;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Eigen::Vector3d d = cloud.positions[i] - cloud.positions[j];
            const double r = d.norm();
            const double g = kernels::g_circular(k3 * r, d.z() / r);
            const double term = 2.0 * g * std::cos(kbar.dot(d));
            acc += term;
            if (r >= wide) acc_wide += term;
        }
    }
    const double scale = -gamma3 / static_cast<double>(n);
    // note: sign convention above makes positive = redshift, matching the
    // spectra module's Im(lambda_N)
    return {scale * acc, scale * acc_wide};
}

// Bracketing bisection for the sign change of f on [lo, hi], to rel_tol.
template <class F>
double find_sign_change(F&& f, double lo, double hi, double rel_tol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::runtime_error("no sign change on the bracket");
    while ((hi - lo) > rel_tol * lo) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Radius at which the closed-form shift changes sign at fixed height,
// density and species. Species with a shorter D1 wavelength cross at a
// smaller radius.
inline double crossing_radius(const SpeciesData& sp, double height_h, double density_rho,
                              double a_lo = 1e-6, double a_hi = 1e-2, double rel_tol = 0.01) {
    auto shift_at = [&](double a) {
        auto spec = geometry::make_cylinder_spec(height_h, a, sp.lambda_D1, density_rho, 0);
        const double mu = geometry::mu_bar(spec);
        const CutoffConfig cut = default_cutoffs(spec, sp);
        return cls_closed_form(static_cast<double>(spec.n_atoms), mu, spec.k3(), cut, sp.gamma3);
    };
    return find_sign_change(shift_at, a_lo, a_hi, rel_tol);
}

} // namespace cascade::cls
