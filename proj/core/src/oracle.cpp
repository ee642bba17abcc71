#include "wvlab/oracle.hpp"

#include <cmath>

namespace wvlab {

namespace {

constexpr Complex kI{0.0, 1.0};

Matrix interaction_matrix(const SeparableInteraction& v) {
    const int d = v.dim1() * v.dim2();
    Matrix m = Matrix::Zero(d, d);
    for (const auto& term : v.terms) m += tensor(term.a, term.b).entries;
    return m;
}

Matrix propagator_matrix(const OperatorMatrix& h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.entries);
    Matrix phases = Matrix::Zero(h.dim(), h.dim());
    for (int k = 0; k < h.dim(); ++k)
        phases(k, k) = std::exp(-kI * es.eigenvalues()(k) * t);
    return es.eigenvectors() * phases * es.eigenvectors().adjoint();
}

/// Fock amplitudes of the Gaussian annihilated by mu a + nu a^dag, via the
/// two-step recurrence c_{n+1} = -(nu/mu) sqrt(n/(n+1)) c_{n-1}.
StateVector gaussian_fock_state(const FockSpace& space, double ratio) {
    Vector c = Vector::Zero(space.cutoff);
    c(0) = 1.0;
    for (int n = 2; n < space.cutoff; n += 2)
        c(n) = -ratio * std::sqrt(double(n - 1) / double(n)) * c(n - 2);
    c /= c.norm();
    StateVector s(std::move(c));
    if (s.tail_weight(4) > 1e-10)
        throw TailTooHeavy("gaussian_fock_state: tail weight exceeds 1e-10, raise cutoff");
    return s;
}

} // namespace

TwoBodySystem::TwoBodySystem(FockSpace s1, FockSpace s2, OperatorMatrix h1_, OperatorMatrix h2_,
                             SeparableInteraction v_, int guard)
    : space1(s1), space2(s2), h1(std::move(h1_)), h2(std::move(h2_)), v(std::move(v_)),
      dimension_guard(guard) {
    if (h1.dim() != space1.cutoff || h2.dim() != space2.cutoff)
        throw DimensionMismatch("TwoBodySystem: Hamiltonian/space dimension mismatch");
    if (v.dim1() != space1.cutoff || v.dim2() != space2.cutoff)
        throw DimensionMismatch("TwoBodySystem: interaction/space dimension mismatch");
}

double TwoBodySystem::constant_coupling() const {
    if (!v.profile.is_constant())
        throw StepTooLarge("constant_coupling: profile is not constant in time");
    return v.lambda * v.profile(v.profile.t_i());
}

OperatorMatrix TwoBodySystem::total_hamiltonian() const {
    const FockSpace& s1 = space1;
    const FockSpace& s2 = space2;
    Matrix h = tensor(h1, identity_op(s2)).entries + tensor(identity_op(s1), h2).entries +
               constant_coupling() * interaction_matrix(v);
    return OperatorMatrix(std::move(h));
}

StateVector evolve_exact(const TwoBodySystem& sys, const StateVector& psi0, double tau) {
    if (sys.total_dim() > sys.dimension_guard)
        throw DimensionGuard("evolve_exact: total dimension " + std::to_string(sys.total_dim()) +
                             " exceeds guard " + std::to_string(sys.dimension_guard));
    if (psi0.dim() != sys.total_dim())
        throw DimensionMismatch("evolve_exact: state dimension mismatch");
    OperatorMatrix h = sys.total_hamiltonian();
    if (h.hermiticity_defect() > 1e-12)
        throw DimensionMismatch("evolve_exact: assembled Hamiltonian is not Hermitian");
    return FreePropagator(h).apply(psi0, tau);
}

StateVector evolve_trotter(const TwoBodySystem& sys, const StateVector& psi0, double tau, int n,
                           TrotterScheme scheme) {
    if (n < 1) throw StepTooLarge("evolve_trotter: step count must be >= 1");
    if (sys.total_dim() > sys.dimension_guard)
        throw DimensionGuard("evolve_trotter: dimension guard exceeded");
    const double dt = tau / n;
    const double coupling = sys.constant_coupling();

    const Matrix e1_full = propagator_matrix(sys.h1, tau);
    const Matrix e1_step = propagator_matrix(sys.h1, dt);
    const Matrix e2_step = propagator_matrix(sys.h2, dt);
    const Matrix id1 = Matrix::Identity(sys.space1.cutoff, sys.space1.cutoff);
    const Matrix id2 = Matrix::Identity(sys.space2.cutoff, sys.space2.cutoff);

    OperatorMatrix vmat(interaction_matrix(sys.v));
    Eigen::SelfAdjointEigenSolver<Matrix> esv(vmat.entries);
    Vector vphase(vmat.dim());
    for (int k = 0; k < vmat.dim(); ++k)
        vphase(k) = std::exp(-kI * coupling * esv.eigenvalues()(k) * dt);
    const auto apply_v_step = [&](Vector psi) {
        Vector w = esv.eigenvectors().adjoint() * psi;
        w.array() *= vphase.array();
        return Vector(esv.eigenvectors() * w);
    };

    Vector psi = psi0.amps;
    if (scheme == TrotterScheme::grouped) {
        // All H1 collected into one factor, then N H2 steps, then N V steps,
        // in the displayed grouping.
        psi = apply_kron(e1_full, id2, psi);
        for (int j = 0; j < n; ++j) psi = apply_kron(id1, e2_step, psi);
        for (int j = 0; j < n; ++j) psi = apply_v_step(psi);
    } else {
        for (int j = 0; j < n; ++j) {
            psi = apply_kron(e1_step, e2_step, psi);
            psi = apply_v_step(psi);
        }
    }
    return StateVector(std::move(psi));
}

StateVector evolve_stepped(const TwoBodySystem& sys, const StateVector& psi0, double tau,
                           int steps) {
    if (steps < 1) throw StepTooLarge("evolve_stepped: step count must be >= 1");
    if (sys.total_dim() > sys.dimension_guard)
        throw DimensionGuard("evolve_stepped: dimension guard exceeded");
    if (psi0.dim() != sys.total_dim())
        throw DimensionMismatch("evolve_stepped: state dimension mismatch");

    const double dt = tau / steps;
    const Matrix e1_half = propagator_matrix(sys.h1, 0.5 * dt);
    const Matrix e2_half = propagator_matrix(sys.h2, 0.5 * dt);

    OperatorMatrix vmat(interaction_matrix(sys.v));
    Eigen::SelfAdjointEigenSolver<Matrix> esv(vmat.entries);
    const Matrix& q = esv.eigenvectors();
    const Eigen::VectorXd& vv = esv.eigenvalues();

    const double t0 = sys.v.profile.t_i();
    Vector psi = psi0.amps;
    for (int j = 0; j < steps; ++j) {
        const double tm = t0 + (j + 0.5) * dt;
        const double c = sys.v.lambda * sys.v.profile(tm);
        psi = apply_kron(e1_half, e2_half, psi);
        if (c != 0.0) {
            Vector w = q.adjoint() * psi;
            for (Eigen::Index k = 0; k < w.size(); ++k)
                w(k) *= std::exp(-kI * c * vv(k) * dt);
            psi = q * w;
        }
        psi = apply_kron(e1_half, e2_half, psi);
    }
    return StateVector(std::move(psi));
}

std::pair<StateVector, Complex> conditional_state(const TwoBodySystem& sys,
                                                  const StateVector& psi1, const StateVector& phi0,
                                                  const StateVector& psi2_post, double tau,
                                                  int steps, double overlap_floor) {
    StateVector joint = tensor_state(psi1, phi0);
    StateVector evolved = sys.v.profile.is_constant() ? evolve_exact(sys, joint, tau)
                                                      : evolve_stepped(sys, joint, tau, steps);
    StateVector phi_c = postselect_particle1(evolved, psi2_post);

    // Reference overlap from the free evolution only; the interaction's
    // effect on the overlap is absorbed into the weak potential.
    const Complex overlap = psi2_post.amps.dot(FreePropagator(sys.h1).apply(psi1.amps, tau));
    if (std::abs(overlap) <= overlap_floor)
        throw OrthogonalSelection("conditional_state: free-evolution overlap below floor");
    return {std::move(phi_c), overlap};
}

double conditional_observable(const StateVector& phi_cond, const OperatorMatrix& o) {
    const double nrm = phi_cond.norm_sq();
    if (nrm <= 0.0) throw ZeroState("conditional_observable: zero conditional state");
    if (phi_cond.dim() != o.dim())
        throw DimensionMismatch("conditional_observable: dimension mismatch");
    return std::real(phi_cond.amps.dot(o.entries * phi_cond.amps)) / nrm;
}

StateVector momentum_profile_state(const FockSpace& space) {
    // psi(x) ~ e^{-x^2/4}: annihilated by 3a - a^dag.
    return gaussian_fock_state(space, -1.0 / 3.0);
}

StateVector position_profile_state(const FockSpace& space) {
    // psi(x) ~ e^{-x^2}: annihilated by 3a + a^dag.
    return gaussian_fock_state(space, 1.0 / 3.0);
}

} // namespace wvlab
