#pragma once

// Truncated Fock-space kernel: states, ladder/quadrature operators,
// propagators, tensor products and post-selection contraction.
//
// Conventions (used throughout the library):
//   * nondimensional units, hbar = 1, defaults m = omega = 1
//   * x = sqrt(hbar/(2 m omega)) (a + a^dag),  p = sqrt(hbar m omega / 2) (a - a^dag)/i
//     so for m = omega = hbar = 1: x = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2))
//   * two-body index ordering is particle-1-major: Psi[n*d2 + m] = <n, m|Psi>

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wvlab/errors.hpp"

namespace wvlab {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Truncated one-oscillator space: basis |0>..|cutoff-1>.
struct FockSpace {
    int cutoff;
    double mass = 1.0;
    double omega = 1.0;
    double hbar = 1.0;

    FockSpace(int cutoff_, double mass_ = 1.0, double omega_ = 1.0, double hbar_ = 1.0)
        : cutoff(cutoff_), mass(mass_), omega(omega_), hbar(hbar_) {
        if (cutoff < 2) throw IndexOutOfRange("FockSpace cutoff must be >= 2");
        if (mass <= 0 || omega <= 0 || hbar <= 0)
            throw IndexOutOfRange("FockSpace parameters must be positive");
    }
};

/// Complex amplitudes over the truncated Fock basis. Unnormalized states are
/// first-class; `normalized` is metadata, never silently enforced.
struct StateVector {
    Vector amps;
    bool normalized = false;

    StateVector() = default;
    explicit StateVector(Vector a) : amps(std::move(a)) {
        normalized = std::abs(norm_sq() - 1.0) < 1e-12;
    }

    int dim() const { return static_cast<int>(amps.size()); }
    double norm_sq() const { return amps.squaredNorm(); }
    double norm() const { return amps.norm(); }

    /// Weight sitting in the top `margin` basis states.
    double tail_weight(int margin) const {
        const int d = dim();
        const int from = std::max(0, d - margin);
        return amps.segment(from, d - from).squaredNorm();
    }
};

/// Dense complex operator on the truncated space (or the product space).
struct OperatorMatrix {
    Matrix entries;
    bool hermitian_hint = false;

    OperatorMatrix() = default;
    explicit OperatorMatrix(Matrix m, bool hermitian = false)
        : entries(std::move(m)), hermitian_hint(hermitian) {
        if (entries.rows() != entries.cols())
            throw DimensionMismatch("OperatorMatrix must be square");
        if (hermitian_hint && hermiticity_defect() >= 1e-12)
            throw DimensionMismatch("hermitian_hint set but matrix is not Hermitian");
    }

    int dim() const { return static_cast<int>(entries.rows()); }
    double hermiticity_defect() const {
        return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    }
};

// Ladder and quadrature operators. <n-1|a|n> = sqrt(n).
OperatorMatrix annihilation(const FockSpace& space);
OperatorMatrix creation(const FockSpace& space);
OperatorMatrix number_op(const FockSpace& space);
OperatorMatrix position_op(const FockSpace& space);
OperatorMatrix momentum_op(const FockSpace& space);

/// Canonical free Hamiltonian: diag(hbar omega (n + 1/2)). The quadrature
/// form (x^2 + p^2)/2 corrupts the top two truncated levels and is kept only
/// as a cross-check in the tests.
OperatorMatrix oscillator_hamiltonian(const FockSpace& space);

OperatorMatrix identity_op(const FockSpace& space);

/// Coherent state c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!).
/// Throws TailTooHeavy if the truncated tail weight exceeds 1e-10;
/// adequate cutoffs satisfy cutoff >= |alpha|^2 + 6|alpha| + 10.
StateVector coherent_state(const FockSpace& space, Complex alpha);

/// Exact amplitude placement from (n, coefficient) pairs; unnormalized input
/// stays unnormalized (the `normalized` flag reflects the actual norm).
StateVector superposition(const FockSpace& space, const std::vector<std::pair<int, Complex>>& coeffs);

Complex inner(const StateVector& bra, const StateVector& ket);

/// exp(-i H t) |state> by eigendecomposition; H must be Hermitian.
StateVector evolve_free(const StateVector& state, const OperatorMatrix& h, double t);

/// Cached eigendecomposition of a Hermitian generator, for repeated
/// propagation at many times. Safe for concurrent reads once built.
class FreePropagator {
  public:
    explicit FreePropagator(const OperatorMatrix& h);

    int dim() const { return static_cast<int>(eigvals_.size()); }
    Vector apply(const Vector& v, double t) const;
    StateVector apply(const StateVector& s, double t) const;

  private:
    Eigen::VectorXd eigvals_;
    Matrix eigvecs_;
};

// Kronecker products, particle-1-major ordering.
OperatorMatrix tensor(const OperatorMatrix& opA, const OperatorMatrix& opB);
StateVector tensor_state(const StateVector& sA, const StateVector& sB);

/// Applies (P kron Q) to a two-body vector without forming the product matrix.
Vector apply_kron(const Matrix& p, const Matrix& q, const Vector& psi);

/// Contracts the two-body amplitude with <post| on particle 1:
/// phi_c[m] = sum_n conj(post[n]) Psi[n*d2 + m]. Unnormalized by design;
/// the caller divides by the relevant overlap.
StateVector postselect_particle1(const StateVector& two_body, const StateVector& post);

} // namespace wvlab
