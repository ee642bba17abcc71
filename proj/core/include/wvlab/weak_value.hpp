#pragma once

// Weak values of observables between pre- and post-selected states:
// <post|A|pre> / <post|pre>, static or as trajectories across the
// selection interval with free evolution inserted on both sides.

#include <memory>
#include <vector>

#include "wvlab/hilbert.hpp"

namespace wvlab {

/// Pre-selected state at t_i and post-selected state at t_f for particle 1,
/// plus the free Hamiltonian connecting the two times.
/// States may be unnormalized; every weak value is a ratio and is invariant
/// under rescaling either state.
class PrePostPair {
  public:
    PrePostPair(StateVector pre, StateVector post, OperatorMatrix h_free,
                double t_i = 0.0, double t_f = 2.0 * 3.14159265358979323846,
                double overlap_floor = 1e-12);

    const StateVector& pre() const { return pre_; }
    const StateVector& post() const { return post_; }
    double t_i() const { return t_i_; }
    double t_f() const { return t_f_; }
    double overlap_floor() const { return overlap_floor_; }
    const FreePropagator& propagator() const { return *prop_; }

    /// <post| e^{-i H (t_f - t_i)} |pre>, the full-interval reference overlap.
    Complex interval_overlap() const;

  private:
    StateVector pre_, post_;
    double t_i_, t_f_;
    double overlap_floor_;
    std::shared_ptr<const FreePropagator> prop_;
};

struct WeakValueSample {
    double t;
    Complex value;
};

/// Equal-time weak value <post|A|pre>/<post|pre>; caller is responsible for
/// having evolved both states to the same instant.
Complex weak_value(const PrePostPair& pair, const OperatorMatrix& a);

/// <post| e^{-iH(t_f-t)} A e^{-iH(t-t_i)} |pre> / <post| e^{-iH(t_f-t_i)} |pre>
Complex weak_value_at_time(const PrePostPair& pair, const OperatorMatrix& a, double t);

/// Batch evaluation over a time grid, one sample series per operator.
/// Propagator work is shared across grid points.
std::vector<std::vector<WeakValueSample>> weak_trajectory(const PrePostPair& pair,
                                                          const std::vector<OperatorMatrix>& ops,
                                                          const std::vector<double>& t_grid);

} // namespace wvlab
