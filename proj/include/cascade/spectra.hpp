#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cascade/geometry.hpp"
#include "cascade/kernels.hpp"

namespace cascade::spectra {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXcd;
using std::complex;

enum class Basis { bare, phased };

// Dense collective coupling matrix. Entries are dimensionless, in units of
// Gamma3/2 with the sign factored out:
//   M_physical = -(Gamma3/2) * entries,
// so the bare-basis matrix is I + (F + 2iG) off the diagonal and the
// physical eigenvalues are lambda = -(Gamma3/2) * eig(entries).
struct CouplingMatrix {
    MatrixXcd entries;
    Basis basis = Basis::bare;
    Vector3d kbar = Vector3d::Zero();  // phasing wavevector (phased basis)

    static constexpr const char* units_convention =
        "M_physical = -(gamma3/2) * entries";
};

// Dipole model for the pair kernels entering the matrix. fixed uses the
// supplied orientation; circular_axis averages a sigma-polarized dipole
// about the supplied axis (the phase-matched mode's quantization axis),
// which is the model consistent with the cylindrical mu_bar integrand.
struct DipoleOrientation {
    enum class Kind { fixed, circular_axis } kind = Kind::circular_axis;
    Vector3d direction = Vector3d(0.0, 0.0, 1.0);

    static DipoleOrientation fixed(const Vector3d& d) {
        return {Kind::fixed, d.normalized()};
    }
    static DipoleOrientation circular(const Vector3d& axis = Vector3d(0, 0, 1)) {
        return {Kind::circular_axis, axis.normalized()};
    }
};

// Enforced ceiling for dense complex storage and O(N^3) solves.
inline constexpr long max_dense_atoms = 5000;

inline CouplingMatrix build_bare_matrix(const geometry::AtomCloud& cloud,
                                        const DipoleOrientation& orientation, double k3) {
    const long n = static_cast<long>(cloud.positions.size());
    if (n == 0) throw std::invalid_argument("cloud is empty");
    if (n > max_dense_atoms)
        throw std::invalid_argument("dense coupling matrix capped at N = " +
                                    std::to_string(max_dense_atoms));
    CouplingMatrix out;
    out.basis = Basis::bare;
    out.entries = MatrixXcd::Identity(n, n);
    for (long i = 0; i < n; ++i) {
        for (long j = i + 1; j < n; ++j) {
            const Vector3d d = cloud.positions[i] - cloud.positions[j];
            const double r = d.norm();
            const double xi = k3 * r;
            const double c = orientation.direction.dot(d) / r;
            double f, g;
            if (orientation.kind == DipoleOrientation::Kind::fixed) {
                f = kernels::f_dipole(xi, c);
                g = kernels::g_dipole(xi, c);
            } else {
                f = kernels::f_circular(xi, c);
                g = kernels::g_circular(xi, c);
            }
            const complex<double> k(f, 2.0 * g);
            out.entries(i, j) = k;
            out.entries(j, i) = k;  // one kernel call fills both triangles
        }
    }
    return out;
}

// Real orthogonal rotation carrying the bare single-excitation basis into the
// phased symmetric state (row N) plus N-1 orthonormal complements, with the
// propagation phases attached: S_{l mu} = exp(i kbar.r_mu) f_{l mu}.
struct PhasedBasis {
    MatrixXcd S;
    MatrixXd f;
    Vector3d kbar = Vector3d::Zero();
};

inline PhasedBasis build_phased_basis(const geometry::AtomCloud& cloud, const Vector3d& kbar) {
    const long n = static_cast<long>(cloud.positions.size());
    if (n < 2) throw std::invalid_argument("phased basis needs at least two atoms");
    PhasedBasis out;
    out.kbar = kbar;
    out.f = MatrixXd::Zero(n, n);
    const double sqn = std::sqrt(static_cast<double>(n));
    const double q = (1.0 + 1.0 / sqn) / static_cast<double>(n - 1);
    for (long mu = 0; mu < n; ++mu) out.f(n - 1, mu) = 1.0 / sqn;
    for (long l = 0; l < n - 1; ++l) {
        for (long mu = 0; mu < n - 1; ++mu) out.f(l, mu) = q - (mu == l ? 1.0 : 0.0);
        out.f(l, n - 1) = -1.0 / sqn;
    }
    out.S = MatrixXcd(n, n);
    for (long mu = 0; mu < n; ++mu) {
        const double phase = kbar.dot(cloud.positions[mu]);
        const complex<double> p(std::cos(phase), std::sin(phase));
        out.S.col(mu) = out.f.col(mu) * p;
    }
    return out;
}

// Rotate a bare-basis matrix: entries_phased = conj(S) entries S^T, i.e.
// (S A S^dagger)^T for the symmetric bare matrix. Element (N, N) is
// 1 + (1/N) sum_{mu != nu} K_{mu nu} with
// K = (F + 2iG) exp(-i kbar.(r_mu - r_nu)).
inline CouplingMatrix transform_matrix(const CouplingMatrix& m, const PhasedBasis& basis) {
    if (m.basis != Basis::bare) throw std::invalid_argument("expected a bare-basis matrix");
    if (m.entries.rows() != basis.S.rows())
        throw std::invalid_argument("matrix and basis dimensions differ");
    CouplingMatrix out;
    out.basis = Basis::phased;
    out.kbar = basis.kbar;
    out.entries = basis.S.conjugate() * m.entries * basis.S.transpose();
    return out;
}

// Full non-Hermitian eigendecomposition. Eigenvalues are stored in units of
// Gamma3/2 with the physical sign (single atom: -1), i.e.
// lambda_physical = (Gamma3/2) * eigenvalues[i], Re <= 0 for decaying modes.
struct SpectralDecomposition {
    VectorXcd eigenvalues;
    MatrixXcd U;
    MatrixXcd U_inv;
    long superradiant_index = -1;
    complex<double> lambda_N{};  // eigenvalue of the phase-matched mode, same units
};

// target: unit vector whose squared overlap selects the superradiant mode.
inline SpectralDecomposition eigendecompose(const CouplingMatrix& m, const VectorXcd& target) {
    const long n = m.entries.rows();
    if (!m.entries.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
    Eigen::ComplexEigenSolver<MatrixXcd> solver(m.entries, true);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("complex eigensolver failed to converge");
    SpectralDecomposition out;
    out.eigenvalues = -solver.eigenvalues();
    out.U = solver.eigenvectors();
    out.U_inv = out.U.inverse();
    double best = -1.0;
    for (long l = 0; l < n; ++l) {
        const double score = std::norm(target.dot(out.U.col(l)));
        if (score > best) {
            best = score;
            out.superradiant_index = l;
        }
    }
    out.lambda_N = out.eigenvalues(out.superradiant_index);
    return out;
}

// Phased-basis convenience: the target is the basis vector of the symmetric
// state (index N-1).
inline SpectralDecomposition eigendecompose(const CouplingMatrix& m) {
    const long n = m.entries.rows();
    VectorXcd target = VectorXcd::Zero(n);
    target(n - 1) = 1.0;
    if (m.basis == Basis::bare && n > 1)
        throw std::invalid_argument("bare-basis decomposition needs an explicit target vector");
    return eigendecompose(m, target);
}

// Phase-matched symmetric vector exp(i kbar.r_mu)/sqrt(N) in the bare basis.
inline VectorXcd phased_symmetric_vector(const geometry::AtomCloud& cloud, const Vector3d& kbar) {
    const long n = static_cast<long>(cloud.positions.size());
    VectorXcd v(n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (long mu = 0; mu < n; ++mu) {
        const double phase = kbar.dot(cloud.positions[mu]);
        v(mu) = complex<double>(std::cos(phase), std::sin(phase)) * norm;
    }
    return v;
}

struct DecayAndShift {
    double rate = 0.0;   // intensity decay constant, s^-1: -2 Re(lambda_N)
    double shift = 0.0;  // Im(lambda_N), rad/s; positive = redshift of the line
};

// From a full decomposition: uses the overlap-selected eigenvalue. At high
// density this mode hybridizes with the unsymmetric ones and its rate can
// sit below Gamma3 (N mu_bar + 1).
inline DecayAndShift symmetric_mode_decay_and_shift(const SpectralDecomposition& decomp,
                                                    double gamma3) {
    const complex<double> lambda_phys = 0.5 * gamma3 * decomp.lambda_N;
    return {-2.0 * lambda_phys.real(), lambda_phys.imag()};
}

// From the rotated matrix: lambda_N = -(Gamma3/2) A_NN, i.e. the symmetric
// row and column dropped. This is the form whose rate equals
// Gamma3 (N mu_bar + 1) and whose shift equals the phased shift-kernel sum
// -(Gamma3/N) sum_{mu != nu} G_{mu nu} exp(-i kbar.(r_mu - r_nu)).
inline DecayAndShift symmetric_mode_decay_and_shift(const CouplingMatrix& rotated,
                                                    double gamma3) {
    if (rotated.basis != Basis::phased)
        throw std::invalid_argument("expected a phased-basis matrix");
    const long n = rotated.entries.rows();
    const complex<double> lambda_phys = -0.5 * gamma3 * rotated.entries(n - 1, n - 1);
    return {-2.0 * lambda_phys.real(), lambda_phys.imag()};
}

// Decoupled symmetric-mode eigenvalue in units of Gamma3/2 (value -A_NN).
inline complex<double> symmetric_mode_lambda(const CouplingMatrix& rotated) {
    if (rotated.basis != Basis::phased)
        throw std::invalid_argument("expected a phased-basis matrix");
    const long n = rotated.entries.rows();
    return -rotated.entries(n - 1, n - 1);
}

} // namespace cascade::spectra
