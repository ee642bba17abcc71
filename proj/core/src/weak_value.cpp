#include "wvlab/weak_value.hpp"

#include <cmath>

namespace wvlab {

PrePostPair::PrePostPair(StateVector pre, StateVector post, OperatorMatrix h_free, double t_i,
                         double t_f, double overlap_floor)
    : pre_(std::move(pre)), post_(std::move(post)), t_i_(t_i), t_f_(t_f),
      overlap_floor_(overlap_floor) {
    if (t_f_ <= t_i_) throw IndexOutOfRange("PrePostPair: t_f must exceed t_i");
    if (pre_.dim() != h_free.dim() || post_.dim() != h_free.dim())
        throw DimensionMismatch("PrePostPair: state/Hamiltonian dimension mismatch");
    prop_ = std::make_shared<const FreePropagator>(h_free);
    if (std::abs(interval_overlap()) <= overlap_floor_)
        throw OrthogonalSelection("PrePostPair: |<post|U|pre>| below overlap floor " +
                                  std::to_string(overlap_floor_));
}

Complex PrePostPair::interval_overlap() const {
    return post_.amps.dot(prop_->apply(pre_.amps, t_f_ - t_i_));
}

Complex weak_value(const PrePostPair& pair, const OperatorMatrix& a) {
    if (a.dim() != pair.pre().dim()) throw DimensionMismatch("weak_value: dimension mismatch");
    const Complex den = inner(pair.post(), pair.pre());
    if (std::abs(den) <= pair.overlap_floor())
        throw OrthogonalSelection("weak_value: overlap below floor");
    return pair.post().amps.dot(a.entries * pair.pre().amps) / den;
}

Complex weak_value_at_time(const PrePostPair& pair, const OperatorMatrix& a, double t) {
    if (t < pair.t_i() - 1e-12 || t > pair.t_f() + 1e-12)
        throw IndexOutOfRange("weak_value_at_time: t outside [t_i, t_f]");
    const Complex den = pair.interval_overlap();
    if (std::abs(den) <= pair.overlap_floor())
        throw OrthogonalSelection("weak_value_at_time: interval overlap below floor");
    const auto& prop = pair.propagator();
    const Vector pre_t = prop.apply(pair.pre().amps, t - pair.t_i());
    // <post| e^{-iH(t_f-t)} corresponds to back-evolving the post state.
    const Vector post_t = prop.apply(pair.post().amps, -(pair.t_f() - t));
    return post_t.dot(a.entries * pre_t) / den;
}

std::vector<std::vector<WeakValueSample>> weak_trajectory(const PrePostPair& pair,
                                                          const std::vector<OperatorMatrix>& ops,
                                                          const std::vector<double>& t_grid) {
    const Complex den = pair.interval_overlap();
    if (std::abs(den) <= pair.overlap_floor())
        throw OrthogonalSelection("weak_trajectory: interval overlap below floor");
    for (const auto& op : ops)
        if (op.dim() != pair.pre().dim())
            throw DimensionMismatch("weak_trajectory: operator dimension mismatch");

    std::vector<std::vector<WeakValueSample>> out(ops.size());
    for (auto& series : out) series.reserve(t_grid.size());

    const auto& prop = pair.propagator();
    for (double t : t_grid) {
        if (t < pair.t_i() - 1e-12 || t > pair.t_f() + 1e-12)
            throw IndexOutOfRange("weak_trajectory: grid point outside [t_i, t_f]");
        const Vector pre_t = prop.apply(pair.pre().amps, t - pair.t_i());
        const Vector post_t = prop.apply(pair.post().amps, -(pair.t_f() - t));
        for (std::size_t k = 0; k < ops.size(); ++k)
            out[k].push_back({t, post_t.dot(ops[k].entries * pre_t) / den});
    }
    return out;
}

} // namespace wvlab
