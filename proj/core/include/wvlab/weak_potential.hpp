#pragma once

// Effective conditional dynamics of the test particle: the interaction on
// particle 1 is replaced by its weak value, giving a generally non-Hermitian
// effective potential acting on particle 2 alone. First order exponentiates
// the time-ordered effective Hamiltonian; second order adds the two-time
// Dyson correction to the conditional amplitude.

#include <functional>
#include <vector>

#include "wvlab/hilbert.hpp"
#include "wvlab/weak_value.hpp"

namespace wvlab {

/// Nonnegative temporal coupling profile, tabulated on a dense grid and
/// normalized so its trapezoid integral over [t_i, t_f] is exactly 1.
class TemporalProfile {
  public:
    /// g(t) = 1/(t_f - t_i).
    static TemporalProfile uniform(double t_i, double t_f);
    /// Normalized Gaussian window centered at `center` with width `sigma`,
    /// truncated to [t_i, t_f].
    static TemporalProfile gaussian_window(double t_i, double t_f, double center, double sigma);

    double operator()(double t) const;
    double t_i() const { return t_i_; }
    double t_f() const { return t_f_; }
    bool is_constant() const { return constant_; }

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    /// Trapezoid integral on the tabulation grid (1 by construction).
    double grid_integral() const;

  private:
    TemporalProfile(double t_i, double t_f, std::function<double(double)> shape);

    double t_i_, t_f_;
    bool constant_ = false;
    std::vector<double> grid_;
    std::vector<double> values_;
};

/// Interaction V(1,2) = sum_k A_k(1) (x) B_k(2), coupling lambda, temporal
/// profile g(t). The separable-sum form is required up front: the weak
/// potential is an operator on particle 2 only when V factorizes termwise.
struct SeparableInteraction {
    struct Term {
        OperatorMatrix a; // particle 1
        OperatorMatrix b; // particle 2
    };

    std::vector<Term> terms;
    double lambda = 0.0;
    TemporalProfile profile;

    SeparableInteraction(std::vector<Term> terms_, double lambda_, TemporalProfile profile_);

    int dim1() const { return terms.front().a.dim(); }
    int dim2() const { return terms.front().b.dim(); }
};

/// H_eff(t) = H2 + lambda g(t) sum_k (A_k)_w(t) B_k on a time grid.
struct EffectiveHamiltonianSeries {
    std::vector<double> t_grid;
    std::vector<Matrix> h_eff;
};

/// V_w(t) = lambda g(t) sum_k (A_k)_w(t) B_k, an operator on particle 2 with
/// complex scalar coefficients.
OperatorMatrix weak_potential_first_order(const PrePostPair& pair, const SeparableInteraction& v,
                                          double t);

EffectiveHamiltonianSeries effective_hamiltonian_series(const PrePostPair& pair,
                                                        const OperatorMatrix& h2,
                                                        const SeparableInteraction& v,
                                                        const std::vector<double>& t_grid);

/// Time-ordered product of per-step exponentials of H2 + V_w(t), first-order
/// accurate in lambda. Returns the UNNORMALIZED conditional state, comparable
/// to the oracle conditional amplitude divided by the free-evolution overlap.
/// The norm is not preserved (V_w is non-Hermitian) and is never restored.
StateVector conditional_evolve_first_order(const StateVector& phi0, const PrePostPair& pair,
                                           const OperatorMatrix& h2, const SeparableInteraction& v,
                                           const std::vector<double>& t_grid);

/// First-order evolution plus the second-order Dyson correction built from
/// the connected two-time kernel
///   <post| A_k(t) A_l(t') |pre>/<post|pre> - (A_k)_w(t) (A_l)_w(t'),
/// accurate to O(lambda^3) against the exact conditional amplitude.
StateVector conditional_evolve_second_order(const StateVector& phi0, const PrePostPair& pair,
                                            const OperatorMatrix& h2, const SeparableInteraction& v,
                                            const std::vector<double>& t_grid);

/// steps+1 equally spaced points spanning [t_i, t_f].
std::vector<double> uniform_grid(double t_i, double t_f, int steps);

} // namespace wvlab
