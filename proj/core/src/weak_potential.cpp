#include "wvlab/weak_potential.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace wvlab {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr int kProfileTableSize = 8192;

void check_grid(const std::vector<double>& grid, double t_i, double t_f) {
    if (grid.size() < 2) throw StepTooLarge("time grid needs at least two points");
    for (std::size_t j = 1; j < grid.size(); ++j)
        if (grid[j] <= grid[j - 1]) throw StepTooLarge("time grid must be strictly increasing");
    if (std::abs(grid.front() - t_i) > 1e-9 || std::abs(grid.back() - t_f) > 1e-9)
        throw StepTooLarge("time grid must span [t_i, t_f]");
}

/// Applies exp(-i dt W) with W = c B, B Hermitian with cached eigensystem.
class ScalarTermExp {
  public:
    explicit ScalarTermExp(const Matrix& b) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(b);
        eigvals_ = es.eigenvalues();
        eigvecs_ = es.eigenvectors();
    }

    double spectral_norm() const { return eigvals_.cwiseAbs().maxCoeff(); }

    Vector apply(const Vector& v, Complex c, double dt) const {
        Vector w = eigvecs_.adjoint() * v;
        for (Eigen::Index k = 0; k < w.size(); ++k)
            w(k) *= std::exp(-kI * dt * c * eigvals_(k));
        return eigvecs_ * w;
    }

  private:
    Eigen::VectorXd eigvals_;
    Matrix eigvecs_;
};

} // namespace

TemporalProfile::TemporalProfile(double t_i, double t_f, std::function<double(double)> shape)
    : t_i_(t_i), t_f_(t_f) {
    if (t_f_ <= t_i_) throw IndexOutOfRange("TemporalProfile: t_f must exceed t_i");
    const int n = kProfileTableSize;
    grid_.resize(n + 1);
    values_.resize(n + 1);
    const double dt = (t_f_ - t_i_) / n;
    for (int j = 0; j <= n; ++j) {
        grid_[j] = t_i_ + j * dt;
        values_[j] = shape(grid_[j]);
        if (values_[j] < 0.0) throw IndexOutOfRange("TemporalProfile: shape must be nonnegative");
    }
    double integral = 0.0;
    for (int j = 0; j < n; ++j) integral += 0.5 * (values_[j] + values_[j + 1]) * dt;
    if (integral <= 0.0) throw IndexOutOfRange("TemporalProfile: shape integrates to zero");
    for (double& v : values_) v /= integral;
}

TemporalProfile TemporalProfile::uniform(double t_i, double t_f) {
    TemporalProfile p(t_i, t_f, [](double) { return 1.0; });
    p.constant_ = true;
    return p;
}

TemporalProfile TemporalProfile::gaussian_window(double t_i, double t_f, double center,
                                                 double sigma) {
    if (sigma <= 0.0) throw IndexOutOfRange("TemporalProfile: sigma must be positive");
    if (center < t_i || center > t_f)
        throw IndexOutOfRange("TemporalProfile: window center outside [t_i, t_f]");
    return TemporalProfile(t_i, t_f, [center, sigma](double t) {
        const double u = (t - center) / sigma;
        return std::exp(-0.5 * u * u);
    });
}

double TemporalProfile::operator()(double t) const {
    if (t <= t_i_) return values_.front();
    if (t >= t_f_) return values_.back();
    const double dt = (t_f_ - t_i_) / (grid_.size() - 1);
    const double s = (t - t_i_) / dt;
    const auto j = static_cast<std::size_t>(s);
    const double frac = s - double(j);
    return values_[j] * (1.0 - frac) + values_[j + 1] * frac;
}

double TemporalProfile::grid_integral() const {
    double integral = 0.0;
    for (std::size_t j = 0; j + 1 < grid_.size(); ++j)
        integral += 0.5 * (values_[j] + values_[j + 1]) * (grid_[j + 1] - grid_[j]);
    return integral;
}

SeparableInteraction::SeparableInteraction(std::vector<Term> terms_, double lambda_,
                                           TemporalProfile profile_)
    : terms(std::move(terms_)), lambda(lambda_), profile(std::move(profile_)) {
    if (terms.empty()) throw DimensionMismatch("SeparableInteraction: at least one term required");
    for (const auto& term : terms) {
        if (term.a.dim() != terms.front().a.dim() || term.b.dim() != terms.front().b.dim())
            throw DimensionMismatch("SeparableInteraction: inconsistent term dimensions");
    }
}

OperatorMatrix weak_potential_first_order(const PrePostPair& pair, const SeparableInteraction& v,
                                          double t) {
    Matrix out = Matrix::Zero(v.dim2(), v.dim2());
    const double g = v.profile(t);
    for (const auto& term : v.terms)
        out += v.lambda * g * weak_value_at_time(pair, term.a, t) * term.b.entries;
    return OperatorMatrix(std::move(out));
}

EffectiveHamiltonianSeries effective_hamiltonian_series(const PrePostPair& pair,
                                                        const OperatorMatrix& h2,
                                                        const SeparableInteraction& v,
                                                        const std::vector<double>& t_grid) {
    EffectiveHamiltonianSeries series;
    series.t_grid = t_grid;
    series.h_eff.reserve(t_grid.size());
    for (double t : t_grid)
        series.h_eff.push_back(h2.entries + weak_potential_first_order(pair, v, t).entries);
    return series;
}

StateVector conditional_evolve_first_order(const StateVector& phi0, const PrePostPair& pair,
                                           const OperatorMatrix& h2, const SeparableInteraction& v,
                                           const std::vector<double>& t_grid) {
    check_grid(t_grid, pair.t_i(), pair.t_f());
    if (phi0.dim() != h2.dim() || v.dim2() != h2.dim())
        throw DimensionMismatch("conditional_evolve_first_order: particle-2 dimension mismatch");

    const FreePropagator prop2(h2);
    const bool single_hermitian =
        v.terms.size() == 1 && v.terms.front().b.hermiticity_defect() < 1e-12;
    std::unique_ptr<ScalarTermExp> term_exp;
    if (single_hermitian) term_exp = std::make_unique<ScalarTermExp>(v.terms.front().b.entries);

    Vector phi = phi0.amps;
    const auto& prop1 = pair.propagator();
    const Complex den = pair.interval_overlap();

    // One Strang substep over [ta, ta+dt] (dt may be negative inside the
    // composition): exact H2 halves around the exponential of the effective
    // potential sampled at the substep midpoint.
    const auto strang_substep = [&](double ta, double dt) {
        const double tm = ta + 0.5 * dt;
        const double g = v.profile(tm);
        phi = prop2.apply(phi, 0.5 * dt);
        if (v.lambda != 0.0 && g != 0.0) {
            const Vector pre_t = prop1.apply(pair.pre().amps, tm - pair.t_i());
            const Vector post_t = prop1.apply(pair.post().amps, -(pair.t_f() - tm));
            if (single_hermitian) {
                const Complex aw = post_t.dot(v.terms.front().a.entries * pre_t) / den;
                const Complex c = v.lambda * g * aw;
                if (std::abs(c) * term_exp->spectral_norm() * std::abs(dt) > 0.1)
                    throw StepTooLarge("conditional evolution: interaction step norm exceeds 0.1");
                phi = term_exp->apply(phi, c, dt);
            } else {
                Matrix w = Matrix::Zero(h2.dim(), h2.dim());
                for (const auto& term : v.terms) {
                    const Complex aw = post_t.dot(term.a.entries * pre_t) / den;
                    w += v.lambda * g * aw * term.b.entries;
                }
                if (w.norm() * std::abs(dt) > 0.1)
                    throw StepTooLarge("conditional evolution: interaction step norm exceeds 0.1");
                phi = ((-kI * dt) * w).exp() * phi;
            }
        }
        phi = prop2.apply(phi, 0.5 * dt);
    };

    // Fourth-order Yoshida composition of Strang substeps, with the
    // time-dependent potential sampled at each substep's own midpoint. Keeps
    // the splitting error well below the lambda^2 and lambda^3 signals the
    // residual sweeps measure.
    const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
    const double w0 = 1.0 - 2.0 * w1;
    for (std::size_t j = 0; j + 1 < t_grid.size(); ++j) {
        const double h = t_grid[j + 1] - t_grid[j];
        double t = t_grid[j];
        strang_substep(t, w1 * h);
        t += w1 * h;
        strang_substep(t, w0 * h);
        t += w0 * h;
        strang_substep(t, w1 * h);
    }
    return StateVector(std::move(phi));
}

StateVector conditional_evolve_second_order(const StateVector& phi0, const PrePostPair& pair,
                                            const OperatorMatrix& h2, const SeparableInteraction& v,
                                            const std::vector<double>& t_grid) {
    StateVector first = conditional_evolve_first_order(phi0, pair, h2, v, t_grid);
    if (v.lambda == 0.0) return first;

    const FreePropagator prop2(h2);
    const auto& prop1 = pair.propagator();
    const Complex den = pair.interval_overlap();
    const std::size_t nsteps = t_grid.size() - 1;
    const std::size_t nterms = v.terms.size();

    // Midpoint nodes with step-width weights; the t > t' triangle is summed
    // as strict node pairs plus a half-weight diagonal.
    std::vector<double> node(nsteps), weight(nsteps), gval(nsteps);
    for (std::size_t j = 0; j < nsteps; ++j) {
        node[j] = 0.5 * (t_grid[j] + t_grid[j + 1]);
        weight[j] = t_grid[j + 1] - t_grid[j];
        gval[j] = v.profile(node[j]);
    }
    // Nodes carrying a negligible share of the window contribute below
    // roundoff to the double integral; drop them so they are never stored.
    const double gmax = *std::max_element(gval.begin(), gval.end());
    for (double& g : gval)
        if (g < 1e-14 * gmax) g = 0.0;

    // Marching state, all held at the current node time. For each earlier
    // node t' with nonzero profile weight we keep
    //   z[l] = U1(t - t') A_l |pre(t')>      (particle 1)
    //   y[l] = U2(t - t') B_l U2(t') |phi0>  (particle 2)
    struct StoredNode {
        std::size_t idx;
        std::vector<Vector> z, y;
    };
    std::vector<StoredNode> stored;
    std::vector<std::vector<Complex>> aw(nterms, std::vector<Complex>(nsteps));
    Vector acc = Vector::Zero(phi0.dim());
    Vector phi_t = phi0.amps;

    for (std::size_t j = 0; j < nsteps; ++j) {
        if (j > 0) {
            const double dt = node[j] - node[j - 1];
            acc = prop2.apply(acc, dt);
            phi_t = prop2.apply(phi_t, dt);
            for (auto& sn : stored)
                for (std::size_t l = 0; l < nterms; ++l) {
                    sn.z[l] = prop1.apply(sn.z[l], dt);
                    sn.y[l] = prop2.apply(sn.y[l], dt);
                }
        } else {
            phi_t = prop2.apply(phi_t, node[0] - pair.t_i());
        }

        if (gval[j] == 0.0) continue;

        const Vector pre_t = prop1.apply(pair.pre().amps, node[j] - pair.t_i());
        const Vector post_t = prop1.apply(pair.post().amps, -(pair.t_f() - node[j]));
        for (std::size_t k = 0; k < nterms; ++k)
            aw[k][j] = post_t.dot(v.terms[k].a.entries * pre_t) / den;

        for (std::size_t k = 0; k < nterms; ++k) {
            const Matrix& ak = v.terms[k].a.entries;
            const Matrix& bk = v.terms[k].b.entries;
            for (std::size_t l = 0; l < nterms; ++l) {
                // Strict pairs t_j > t_{j'}.
                for (const auto& sn : stored) {
                    const Complex kernel = post_t.dot(ak * sn.z[l]) / den;
                    const Complex connected = kernel - aw[k][j] * aw[l][sn.idx];
                    acc += (weight[j] * gval[j] * weight[sn.idx] * gval[sn.idx] * connected) *
                           (bk * sn.y[l]);
                }
                // Half-weight diagonal t = t'.
                const Complex kernel = post_t.dot(ak * (v.terms[l].a.entries * pre_t)) / den;
                const Complex connected = kernel - aw[k][j] * aw[l][j];
                acc += (0.5 * weight[j] * weight[j] * gval[j] * gval[j] * connected) *
                       (bk * (v.terms[l].b.entries * phi_t));
            }
        }

        StoredNode sn;
        sn.idx = j;
        for (std::size_t l = 0; l < nterms; ++l) {
            sn.z.push_back(v.terms[l].a.entries * pre_t);
            sn.y.push_back(v.terms[l].b.entries * phi_t);
        }
        stored.push_back(std::move(sn));
    }

    acc = prop2.apply(acc, pair.t_f() - node[nsteps - 1]);
    const Complex pref = (-kI * v.lambda) * (-kI * v.lambda);
    return StateVector(first.amps + pref * acc);
}

std::vector<double> uniform_grid(double t_i, double t_f, int steps) {
    if (steps < 1) throw StepTooLarge("uniform_grid: steps must be >= 1");
    std::vector<double> grid(steps + 1);
    for (int j = 0; j <= steps; ++j) grid[j] = t_i + (t_f - t_i) * double(j) / steps;
    return grid;
}

} // namespace wvlab
