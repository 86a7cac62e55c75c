#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cascade/bessel.hpp"
#include "cascade/constants.hpp"
#include "cascade/errors.hpp"
#include "cascade/kernels.hpp"
#include "cascade/quadrature.hpp"

namespace cascade::geometry {

using Eigen::Vector3d;

// Cylindrical sample geometry. The axis is z; the phase-matched emission
// direction kbar points along +z with |kbar| = k3. H and A are always
// recomputed from the stored lengths.
struct CylinderSpec {
    double height_h = 0.0;            // m
    double radius_a = 0.0;            // m
    double wavelength_lambda3 = 0.0;  // m, idler transition
    double density_rho = 0.0;         // atoms / m^3 (0 = derived from n_atoms)
    long n_atoms = 0;                 // 0 = derived from density

    double k3() const { return two_pi / wavelength_lambda3; }
    double H() const { return k3() * height_h; }
    double A() const { return k3() * radius_a; }
    double volume() const { return pi * radius_a * radius_a * height_h; }
    Vector3d kbar() const { return Vector3d(0.0, 0.0, k3()); }
};

// Validates lengths and reconciles density with atom number: if only one of
// the two is given the other is derived; if both are given they must agree
// to within 50%.
inline CylinderSpec make_cylinder_spec(double height_h, double radius_a, double lambda3,
                                       double density_rho = 0.0, long n_atoms = 0) {
    if (!(height_h > 0.0) || !(radius_a > 0.0) || !(lambda3 > 0.0))
        throw std::invalid_argument("cylinder lengths and wavelength must be positive");
    CylinderSpec spec{height_h, radius_a, lambda3, density_rho, n_atoms};
    const double volume = spec.volume();
    if (n_atoms <= 0 && density_rho <= 0.0)
        throw std::invalid_argument("need density_rho or n_atoms");
    if (n_atoms <= 0) {
        spec.n_atoms = std::max(1L, std::lround(density_rho * volume));
    } else if (density_rho <= 0.0) {
        spec.density_rho = static_cast<double>(n_atoms) / volume;
    } else {
        const double expected = density_rho * volume;
        if (std::fabs(static_cast<double>(n_atoms) - expected) >=
            0.5 * static_cast<double>(n_atoms))
            throw std::invalid_argument(
                "n_atoms and density disagree by more than 50% for this volume");
    }
    return spec;
}

struct AtomCloud {
    std::vector<Vector3d> positions;  // m, cylinder axis along z
    std::uint64_t seed = 0;
    double exclusion_radius = 0.0;  // m, pairwise hard-core distance
};

inline double default_exclusion_radius(const CylinderSpec& spec) {
    return spec.wavelength_lambda3 / 50.0;
}

namespace detail {

// Deterministic uniform double in [0, 1); independent of the standard
// library's distribution implementation so clouds are bit-stable.
inline double canonical(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace detail

// Uniform i.i.d. points in the cylinder with hard-core pairwise rejection.
// Deterministic for a fixed seed. Throws PackingError when the exclusion
// radius makes the request infeasible or the retry budget is exhausted.
inline AtomCloud sample_cylinder(const CylinderSpec& spec, std::uint64_t seed,
                                 double exclusion_radius) {
    const long n = spec.n_atoms;
    if (n <= 0) throw std::invalid_argument("spec.n_atoms must be positive");
    if (!(exclusion_radius > 0.0)) throw std::invalid_argument("exclusion radius must be > 0");
    // sphere-packing feasibility: hard cores of radius r_ex/2
    const double core_fraction =
        static_cast<double>(n) * (pi / 6.0) * std::pow(exclusion_radius, 3) / spec.volume();
    if (core_fraction > 0.3)
        throw PackingError("exclusion cores would fill " + std::to_string(core_fraction * 100) +
                           "% of the cylinder; sampling infeasible");

    std::mt19937_64 rng(seed);
    AtomCloud cloud;
    cloud.seed = seed;
    cloud.exclusion_radius = exclusion_radius;
    cloud.positions.reserve(n);
    const double r2min = exclusion_radius * exclusion_radius;
    long attempts_left = 10000L * n;
    while (static_cast<long>(cloud.positions.size()) < n) {
        if (--attempts_left < 0)
            throw PackingError("hard-core rejection exceeded retry budget");
        const double r = spec.radius_a * std::sqrt(detail::canonical(rng));
        const double phi = two_pi * detail::canonical(rng);
        const double z = (detail::canonical(rng) - 0.5) * spec.height_h;
        const Vector3d p(r * std::cos(phi), r * std::sin(phi), z);
        bool ok = true;
        for (const auto& q : cloud.positions) {
            if ((p - q).squaredNorm() < r2min) {
                ok = false;
                break;
            }
        }
        if (ok) cloud.positions.push_back(p);
    }
    return cloud;
}

using cascade::bessel_j1;

namespace detail {

// Geometric constant of a cylinder with dimensionless dimensions (H, A).
// Substituting x = cos(phi) and folding the removable 0/0 endpoint factors
// into sinc and J1(z)/z leaves an everywhere-regular integrand,
//   mu = (3/2) (N-1)/N Int_0^pi dphi sin(phi) (1 + cos^2 phi)
//        * sinc^2(H (1-cos phi)/2) * [J1(A sin phi)/(A sin phi)]^2,
// evaluated by adaptive Gauss-Kronrod quadrature seeded at the oscillation
// scale of the integrand.
inline double mu_bar_scaled(double Hs, double As, double n_atoms, double rel_tol = 1e-8) {
    if (!(Hs > 0.0) || !(As > 0.0)) throw std::invalid_argument("H and A must be positive");
    auto integrand = [Hs, As](double phi) {
        const double x = std::cos(phi);
        const double sphi = std::sin(phi);
        const double s = sinc(0.5 * Hs * (1.0 - x));
        const double j = bessel_j1_over_z(As * sphi);
        return (1.0 + x * x) * s * s * j * j * sphi;
    };
    QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    opts.abs_tol = 1e-14;
    const double rate = 0.5 * Hs + 2.0 * As;
    opts.initial_subdivisions =
        static_cast<int>(std::clamp(rate / 3.0, 1.0, static_cast<double>(1 << 20)));
    opts.max_intervals = std::max(1 << 21, 4 * opts.initial_subdivisions);
    const auto res = integrate(integrand, 0.0, pi, opts);
    const double pair_factor = (n_atoms - 1.0) / n_atoms;
    return 1.5 * pair_factor * res.value;
}

} // namespace detail

// Geometric constant mu_bar of the cylinder; collective decay rate of the
// phase-matched mode is (Gamma3/2)(N mu_bar + 1).
inline double mu_bar(const CylinderSpec& spec, double rel_tol = 1e-8) {
    return detail::mu_bar_scaled(spec.H(), spec.A(), static_cast<double>(spec.n_atoms), rel_tol);
}

// mu_bar at rescaled momentum k_rel = k/k3. Shares the code path with
// mu_bar: the 1/k^4 prefactor of the momentum-dependent form is equivalent
// to evaluating the geometric integral at (k H, k A).
inline double mu_bar_k(double k_rel, const CylinderSpec& spec, double rel_tol = 1e-8) {
    if (!(k_rel > 0.0)) throw std::invalid_argument("k_rel must be > 0");
    return detail::mu_bar_scaled(k_rel * spec.H(), k_rel * spec.A(),
                                 static_cast<double>(spec.n_atoms), rel_tol);
}

// Pair-kernel model used when summing over sampled clouds. For the
// phase-matched axial mode, polarization_averaged means the sigma
// (circularly polarized about the cylinder axis) dipole average, which is
// the kernel whose angular weight reproduces the mu_bar integrand; the
// isotropic average sin(xi)/xi is available separately for comparisons.
enum class DipoleModel {
    fixed_orientation,
    polarization_averaged,
    isotropic,
};

// Monte-Carlo estimate of the superradiant enhancement N mu_bar + 1:
// real part of (1/N) sum_{mu,nu} F_{mu nu} exp(-i kbar.(r_mu - r_nu)) with
// F_{mu mu} = 1 and kbar along the cylinder axis.
inline double enhancement_mc(const AtomCloud& cloud, const CylinderSpec& spec,
                             DipoleModel model = DipoleModel::polarization_averaged,
                             const Vector3d& dipole = Vector3d(1.0, 0.0, 0.0)) {
    const std::size_t n = cloud.positions.size();
    if (n == 0) throw std::invalid_argument("cloud is empty");
    const double k3 = spec.k3();
    const Vector3d kbar = spec.kbar();
    const Vector3d dhat = dipole.normalized();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vector3d d = cloud.positions[i] - cloud.positions[j];
            const double r = d.norm();
            const double xi = k3 * r;
            double f = 0.0;
            switch (model) {
                case DipoleModel::fixed_orientation:
                    f = kernels::f_dipole(xi, dhat.dot(d) / r);
                    break;
                case DipoleModel::polarization_averaged:
                    f = kernels::f_circular(xi, d.z() / r);
                    break;
                case DipoleModel::isotropic:
                    f = kernels::f_isotropic(xi);
                    break;
            }
            acc += 2.0 * f * std::cos(kbar.dot(d));
        }
    }
    return 1.0 + acc / static_cast<double>(n);
}

// (1/N^2) |sum_mu exp(i (kbar - k3).r_mu)|^2 with k3 = |kbar| k3_dir.
inline double structure_factor(const AtomCloud& cloud, const Vector3d& kbar,
                               const Vector3d& k3_dir) {
    const std::size_t n = cloud.positions.size();
    if (n == 0) throw std::invalid_argument("cloud is empty");
    if (std::fabs(k3_dir.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("k3_dir must be a unit vector");
    const Vector3d q = kbar - kbar.norm() * k3_dir;
    std::complex<double> sum = 0.0;
    for (const auto& p : cloud.positions) {
        const double phase = q.dot(p);
        sum += std::complex<double>(std::cos(phase), std::sin(phase));
    }
    const double nn = static_cast<double>(n);
    return std::norm(sum) / (nn * nn);
}

struct GeometryFactors {
    double mu_bar = 0.0;
    double enhancement = 0.0;      // N mu_bar + 1
    double structure_factor = 1.0; // at k3 along kbar
};

inline GeometryFactors geometry_factors(const CylinderSpec& spec) {
    GeometryFactors out;
    out.mu_bar = mu_bar(spec);
    out.enhancement = static_cast<double>(spec.n_atoms) * out.mu_bar + 1.0;
    out.structure_factor = 1.0;
    return out;
}

} // namespace cascade::geometry
