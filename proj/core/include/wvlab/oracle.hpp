#pragma once

// Ground truth: full two-body evolution under H = H1 + H2 + lambda g(t) V
// with post-selection on particle 1. The exact eigendecomposition path covers
// constant coupling profiles; windowed profiles use Strang-split stepping.
// The Trotter product is a separate, convergence-tested path.

#include <utility>

#include "wvlab/hilbert.hpp"
#include "wvlab/weak_potential.hpp"

namespace wvlab {

struct TwoBodySystem {
    FockSpace space1;
    FockSpace space2;
    OperatorMatrix h1;
    OperatorMatrix h2;
    SeparableInteraction v;
    int dimension_guard = 4096;

    TwoBodySystem(FockSpace s1, FockSpace s2, OperatorMatrix h1_, OperatorMatrix h2_,
                  SeparableInteraction v_, int guard = 4096);

    int total_dim() const { return space1.cutoff * space2.cutoff; }
    /// Constant interaction coefficient lambda * g; requires a constant profile.
    double constant_coupling() const;
    /// H1 (x) I + I (x) H2 + lambda g Sum A_k (x) B_k (constant profile).
    OperatorMatrix total_hamiltonian() const;
};

enum class TrotterScheme {
    /// The split product with all one-body factors collected:
    /// [e^{-i lam V dt}]^N [e^{-i H2 dt}]^N e^{-i H1 tau}. Deviation from the
    /// exact evolution is first order in lambda at any N.
    grouped,
    /// Standard first-order interleaved splitting, O(dt) error.
    interleaved,
};

/// e^{-iHtau} |psi0> via eigendecomposition of the full Hermitian H.
StateVector evolve_exact(const TwoBodySystem& sys, const StateVector& psi0, double tau);

StateVector evolve_trotter(const TwoBodySystem& sys, const StateVector& psi0, double tau, int n,
                           TrotterScheme scheme);

/// Strang-split stepping for time-dependent coupling profiles; second order
/// in the step size.
StateVector evolve_stepped(const TwoBodySystem& sys, const StateVector& psi0, double tau,
                           int steps);

/// Evolves psi1 (x) phi0 for tau, contracts with <psi2_post| on particle 1.
/// Returns the unnormalized conditional amplitude together with the
/// free-evolution reference overlap <psi2|e^{-iH1 tau}|psi1>; dividing by
/// that overlap gives the quantity the effective conditional dynamics
/// predicts. Constant profiles use the exact path, windowed profiles the
/// stepped path with `steps` intervals.
std::pair<StateVector, Complex> conditional_state(const TwoBodySystem& sys,
                                                  const StateVector& psi1,
                                                  const StateVector& phi0,
                                                  const StateVector& psi2_post, double tau,
                                                  int steps = 1024,
                                                  double overlap_floor = 1e-12);

/// <phi|O|phi> / <phi|phi>, real part (Hermitian observables).
double conditional_observable(const StateVector& phi_cond, const OperatorMatrix& o);

/// Test-particle state with momentum wavefunction proportional to e^{-p^2}
/// (squeezed vacuum, <p>=0, Var p = 1/4, Var x = 1), normalized.
StateVector momentum_profile_state(const FockSpace& space);

/// Mirror image: position wavefunction proportional to e^{-x^2}
/// (<x>=0, Var x = 1/4, Var p = 1), normalized.
StateVector position_profile_state(const FockSpace& space);

} // namespace wvlab
