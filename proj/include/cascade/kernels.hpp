#pragma once

#include <cmath>
#include <stdexcept>

#include "cascade/bessel.hpp"

namespace cascade::kernels {

// Pairwise dipole-dipole kernels for two atoms separated by xi = k3 * r.
// f_dipole carries the decay coupling (in units of Gamma3), g_dipole the
// coherent shift coupling (in units of Gamma3); the coupling matrix uses
// f + 2i g per pair. Both are even in cos_theta, which enters only squared.
//
// Building blocks: spherical Bessel combinations evaluated in
// cancellation-free form,
//   sinc(xi)            = j0(xi)
//   j1_over(xi)         = j1(xi)/xi
//   y0(xi)              = -cos(xi)/xi
//   y1_over(xi)         = y1(xi)/xi
// so that  f = (3/2) [ (1-c^2) j0 - (1-3c^2) j1/xi ]
//          g = (3/4) [ (1-c^2) y0 - (1-3c^2) y1/xi ].

enum class Averaging {
    fixed_orientation,
    polarization_averaged,
};

struct KernelArgs {
    double xi = 0.0;         // k3 * separation, dimensionless, > 0
    double cos_theta = 0.0;  // dipole direction dotted with the pair axis
    Averaging averaging = Averaging::fixed_orientation;
};

namespace detail {

inline double j1_over_xi(double xi) {
    if (xi < 0.1) {
        const double x2 = xi * xi;
        // j1(xi)/xi = 1/3 - xi^2/30 + xi^4/840 - xi^6/45360 + ...
        return 1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0;
    }
    const double s = std::sin(xi);
    const double c = std::cos(xi);
    return s / (xi * xi * xi) - c / (xi * xi);
}

inline double y1_over_xi(double xi) {
    const double s = std::sin(xi);
    const double c = std::cos(xi);
    return -c / (xi * xi * xi) - s / (xi * xi);
}

inline void check_pair_args(double xi, double cos_theta) {
    if (!(xi > 0.0)) throw std::domain_error("kernel separation xi must be > 0");
    if (!(std::fabs(cos_theta) <= 1.0)) throw std::domain_error("|cos_theta| must be <= 1");
}

} // namespace detail

// Decay kernel for a fixed dipole orientation.
inline double f_dipole(double xi, double cos_theta) {
    detail::check_pair_args(xi, cos_theta);
    const double c2 = cos_theta * cos_theta;
    return 1.5 * ((1.0 - c2) * sinc(xi) - (1.0 - 3.0 * c2) * detail::j1_over_xi(xi));
}

// Shift kernel for a fixed dipole orientation; diverges as 1/xi^3 at contact,
// so callers must keep pairs outside an exclusion radius.
inline double g_dipole(double xi, double cos_theta) {
    detail::check_pair_args(xi, cos_theta);
    const double c2 = cos_theta * cos_theta;
    return 0.75 * ((1.0 - c2) * (-std::cos(xi) / xi) -
                   (1.0 - 3.0 * c2) * detail::y1_over_xi(xi));
}

// Uniform average of f_dipole over dipole directions.
inline double f_isotropic(double xi) {
    if (!(xi > 0.0)) throw std::domain_error("kernel separation xi must be > 0");
    return sinc(xi);
}

inline double g_isotropic(double xi) {
    if (!(xi > 0.0)) throw std::domain_error("kernel separation xi must be > 0");
    return -0.5 * std::cos(xi) / xi;
}

// Kernels for a circularly polarized (sigma) dipole about a fixed axis;
// cos_axis is the pair axis dotted with that quantization axis. Equivalent to
// averaging the fixed-orientation kernel over dipole azimuth in the
// transverse plane, cos_theta^2 -> (1 - cos_axis^2)/2.
inline double f_circular(double xi, double cos_axis) {
    detail::check_pair_args(xi, cos_axis);
    const double a2 = cos_axis * cos_axis;
    const double j0 = sinc(xi);
    const double j1ox = detail::j1_over_xi(xi);
    return 0.75 * ((1.0 + a2) * j0 - (3.0 * a2 - 1.0) * j1ox);
}

inline double g_circular(double xi, double cos_axis) {
    detail::check_pair_args(xi, cos_axis);
    const double a2 = cos_axis * cos_axis;
    const double y0 = -std::cos(xi) / xi;
    const double y1ox = detail::y1_over_xi(xi);
    return 0.375 * ((1.0 + a2) * y0 - (3.0 * a2 - 1.0) * y1ox);
}

inline double kernel_f(const KernelArgs& args) {
    if (args.averaging == Averaging::polarization_averaged) return f_isotropic(args.xi);
    return f_dipole(args.xi, args.cos_theta);
}

inline double kernel_g(const KernelArgs& args) {
    if (args.averaging == Averaging::polarization_averaged) return g_isotropic(args.xi);
    return g_dipole(args.xi, args.cos_theta);
}

// Analytic xi -> 0 limit of the decay kernel, any orientation.
inline double kernel_f_limit_zero() { return 1.0; }

} // namespace cascade::kernels
