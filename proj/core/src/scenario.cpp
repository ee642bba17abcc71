#include "wvlab/scenario.hpp"

#include <cmath>

#include "wvlab/oracle.hpp"
#include "wvlab/weak_potential.hpp"
#include "wvlab/weak_value.hpp"

namespace wvlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Complex kI{0.0, 1.0};

struct ResidualRow {
    double lambda;
    double residual_first;
    double residual_second;
    double infidelity_first;
    double infidelity_second;
};

double infidelity(const StateVector& a, const StateVector& b) {
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 1.0;
    return 1.0 - std::abs(inner(a, b)) / (na * nb);
}

/// Oracle-vs-effective-dynamics comparison at one coupling strength.
ResidualRow residuals_for_lambda(const FockSpace& space, const OperatorMatrix& h1,
                                 const OperatorMatrix& h2, const PrePostPair& pair,
                                 const StateVector& phi0, const OperatorMatrix& a1,
                                 const OperatorMatrix& b2, const TemporalProfile& profile,
                                 double lambda, double tau, int steps, int guard) {
    SeparableInteraction v({{a1, b2}}, lambda, profile);
    TwoBodySystem sys(space, space, h1, h2, v, guard);
    auto [phi_c, overlap] = conditional_state(sys, pair.pre(), phi0, pair.post(), tau, steps);
    StateVector target(Vector(phi_c.amps / overlap));

    const auto grid = uniform_grid(pair.t_i(), pair.t_f(), steps);
    StateVector first = conditional_evolve_first_order(phi0, pair, h2, v, grid);
    StateVector second = conditional_evolve_second_order(phi0, pair, h2, v, grid);

    ResidualRow row{};
    row.lambda = lambda;
    row.residual_first = (target.amps - first.amps).norm();
    row.residual_second = (target.amps - second.amps).norm();
    row.infidelity_first = infidelity(target, first);
    row.infidelity_second = infidelity(target, second);
    return row;
}

Table residual_table(const std::vector<ResidualRow>& rows) {
    Table t;
    t.columns = {"lambda", "residual_first", "residual_second", "infidelity_first",
                 "infidelity_second"};
    for (const auto& r : rows)
        t.rows.push_back({r.lambda, r.residual_first, r.residual_second, r.infidelity_first,
                          r.infidelity_second});
    return t;
}

/// t, x_w, p_w and (x_w^2 + p_w^2)/2-style energy weak value on the grid.
Table trajectory_table(const PrePostPair& pair, const FockSpace& space,
                       const std::vector<double>& grid) {
    const OperatorMatrix x = position_op(space);
    const OperatorMatrix p = momentum_op(space);
    OperatorMatrix x2(Matrix(x.entries * x.entries), true);
    OperatorMatrix p2(Matrix(p.entries * p.entries), true);
    const auto series = weak_trajectory(pair, {x, p, x2, p2}, grid);

    Table t;
    t.columns = {"t", "x_w_re", "x_w_im", "p_w_re", "p_w_im", "H_w_re", "H_w_im"};
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const Complex xw = series[0][j].value;
        const Complex pw = series[1][j].value;
        // Energy weak value by linearity over the x^2 and p^2 operators.
        const Complex hw = 0.5 * (series[2][j].value + series[3][j].value);
        t.rows.push_back({grid[j], xw.real(), xw.imag(), pw.real(), pw.imag(), hw.real(),
                          hw.imag()});
    }
    return t;
}

void add_sweep_fits(ScenarioResult& result, const std::vector<ResidualRow>& rows) {
    std::vector<double> lambdas, r1, r2;
    for (const auto& r : rows) {
        lambdas.push_back(r.lambda);
        r1.push_back(r.residual_first);
        r2.push_back(r.residual_second);
    }
    const PowerLawFit f1 = sweep_and_fit(lambdas, r1);
    const PowerLawFit f2 = sweep_and_fit(lambdas, r2);
    result.summary.emplace_back("first_order_exponent", f1.exponent);
    result.summary.emplace_back("first_order_fit_max_dev", f1.max_dev);
    result.summary.emplace_back("second_order_exponent", f2.exponent);
    result.summary.emplace_back("second_order_fit_max_dev", f2.max_dev);
}

} // namespace

double ScenarioResult::summary_value(const std::string& key) const {
    for (const auto& [k, v] : summary)
        if (k == key) return v;
    throw Error("summary key '" + key + "' not present");
}

int ScenarioConfig::effective_cutoff() const {
    if (cutoff > 0) return cutoff;
    return scenario == ScenarioKind::fock_coupling ? 12 : 40;
}

InteractionKind ScenarioConfig::effective_interaction() const {
    if (interaction_set) return interaction;
    return scenario == ScenarioKind::fock_coupling ? InteractionKind::xx : InteractionKind::pp;
}

void ScenarioConfig::validate() const {
    if (lambda < 0.0 || lambda > 0.2)
        throw ConfigError("field lambda: must lie in [0, 0.2], got " + std::to_string(lambda));
    if (x0 <= 0.0) throw ConfigError("field x0: must be positive");
    if (cutoff != 0 && cutoff < 4) throw ConfigError("field cutoff: must be >= 4 (or 0 for the default)");
    if (period_count < 1) throw ConfigError("field period_count: must be >= 1");
    if (steps_per_period < 16) throw ConfigError("field steps_per_period: must be >= 16");
    if (kick_center < 0.0 || kick_center > 1.0)
        throw ConfigError("field kick_center: must lie in [0, 1] (fraction of a period)");
    if (kick_width <= 0.0 || kick_width > 0.25)
        throw ConfigError("field kick_width: must lie in (0, 0.25] (fraction of a period)");
    for (double l : sweep)
        if (l <= 0.0 || l > 0.2)
            throw ConfigError("field sweep: entries must lie in (0, 0.2]");
}

ScenarioResult run_fock_coupling(const ScenarioConfig& cfg) {
    cfg.validate();
    const FockSpace space(cfg.effective_cutoff());
    const double tau = 2.0 * kPi * cfg.period_count;
    const int steps = cfg.steps_per_period * cfg.period_count;

    const OperatorMatrix h = oscillator_hamiltonian(space);
    const StateVector pre = superposition(space, {{0, 1.0}, {1, -kI}, {2, 1.0}});
    const StateVector post = superposition(space, {{0, 1.0}, {1, 1.0}, {2, -1.0}});
    const PrePostPair pair(pre, post, h, 0.0, tau);

    const bool use_xx = cfg.effective_interaction() == InteractionKind::xx;
    const OperatorMatrix quad1 = use_xx ? position_op(space) : momentum_op(space);
    const OperatorMatrix quad2 = quad1;
    const TemporalProfile profile = TemporalProfile::uniform(0.0, tau);
    const StateVector phi0 = superposition(space, {{0, 1.0}});

    ScenarioResult result;

    // Weak-potential coefficient of the particle-2 quadrature at t = 0,
    // with the profile factor stripped: lambda sqrt(1/2) <post|(a+-a^dag)|pre>/<post|pre>.
    const OperatorMatrix ladder_sum = use_xx
        ? OperatorMatrix(Matrix(std::sqrt(2.0) * position_op(space).entries))
        : OperatorMatrix(Matrix(std::sqrt(2.0) * momentum_op(space).entries));
    const Complex coeff = cfg.lambda * std::sqrt(0.5) * weak_value(pair, ladder_sum);
    const std::string coeff_key = use_xx ? "coeff_x2" : "coeff_p2";
    result.summary.emplace_back(coeff_key + "_re", coeff.real());
    result.summary.emplace_back(coeff_key + "_im", coeff.imag());
    result.summary.emplace_back("overlap_abs", std::abs(inner(post, pre)));

    result.trajectory = trajectory_table(pair, space, uniform_grid(0.0, tau, steps));

    std::vector<double> lambdas = cfg.sweep.empty() ? std::vector<double>{cfg.lambda} : cfg.sweep;
    std::vector<ResidualRow> rows;
    for (double l : lambdas)
        rows.push_back(residuals_for_lambda(space, h, h, pair, phi0, quad1, quad2, profile, l, tau,
                                            steps, cfg.dimension_guard()));
    result.residuals = residual_table(rows);

    const ResidualRow& head =
        cfg.sweep.empty() ? rows.front()
                          : residuals_for_lambda(space, h, h, pair, phi0, quad1, quad2, profile,
                                                 cfg.lambda, tau, steps, cfg.dimension_guard());
    result.summary.emplace_back("residual_first", head.residual_first);
    result.summary.emplace_back("residual_second", head.residual_second);
    result.summary.emplace_back("infidelity_first", head.infidelity_first);
    result.summary.emplace_back("infidelity_second", head.infidelity_second);

    if (!cfg.sweep.empty()) add_sweep_fits(result, rows);
    return result;
}

ScenarioResult run_gaussian_pair(const ScenarioConfig& cfg) {
    cfg.validate();
    const double overlap_bound = std::exp(-cfg.x0 * cfg.x0);
    if (overlap_bound <= 1e-12)
        throw OrthogonalSelection("gaussian_pair: pre/post overlap exp(-x0^2) = " +
                                  std::to_string(overlap_bound) + " for x0 = " +
                                  std::to_string(cfg.x0) + " is below the floor 1e-12");

    const FockSpace space(cfg.effective_cutoff());
    const double tau = 2.0 * kPi * cfg.period_count;
    const int steps = cfg.steps_per_period * cfg.period_count;
    const bool use_pp = cfg.effective_interaction() == InteractionKind::pp;

    // pp couples to the position-displaced pair of the main experiment; the
    // xx control mirrors the whole setup a quarter period in phase space:
    // momentum-displaced selection states and a position-profile test state.
    const Complex alpha = use_pp ? Complex(cfg.x0 / std::sqrt(2.0), 0.0)
                                 : Complex(0.0, cfg.x0 / std::sqrt(2.0));
    const StateVector pre = coherent_state(space, alpha);
    const StateVector post = coherent_state(space, -alpha);
    const OperatorMatrix h = oscillator_hamiltonian(space);
    const PrePostPair pair(pre, post, h, 0.0, tau);

    ScenarioResult result;
    result.summary.emplace_back("overlap_abs", std::abs(inner(post, pre)));

    const auto grid = uniform_grid(0.0, tau, steps);
    result.trajectory = trajectory_table(pair, space, grid);

    const Table& traj = result.trajectory;
    result.summary.emplace_back("x_w_ti_re", traj.rows.front()[1]);
    result.summary.emplace_back("x_w_ti_imag", traj.rows.front()[2]);
    result.summary.emplace_back("p_w_ti_re", traj.rows.front()[3]);
    result.summary.emplace_back("p_w_ti_imag", traj.rows.front()[4]);
    result.summary.emplace_back("H_w_re", traj.rows.front()[5]);
    result.summary.emplace_back("H_w_im", traj.rows.front()[6]);

    // Flatness of the energy weak value and closed-form trajectory deviations.
    double hw_max_dev = 0.0, dev_x = 0.0, dev_p = 0.0;
    for (const auto& row : traj.rows) {
        const double t = row[0];
        hw_max_dev = std::max(hw_max_dev,
                              std::abs(Complex(row[5], row[6]) - Complex(traj.rows.front()[5],
                                                                         traj.rows.front()[6])));
        const Complex xw(row[1], row[2]);
        const Complex pw(row[3], row[4]);
        dev_x = std::max(dev_x, std::abs(xw - (-kI * cfg.x0 * std::sin(t))));
        dev_p = std::max(dev_p, std::abs(pw - (-kI * cfg.x0 * std::cos(t))));
    }
    result.summary.emplace_back("H_w_max_dev", hw_max_dev);
    result.summary.emplace_back("traj_max_dev_x", dev_x);
    result.summary.emplace_back("traj_max_dev_p", dev_p);

    // Classical-like equations of motion: dx_w/dt = p_w, dp_w/dt = -x_w,
    // five-point central differences on the emitted grid.
    double eom_dev = 0.0;
    const double hstep = grid[1] - grid[0];
    for (std::size_t j = 2; j + 2 < traj.rows.size(); ++j) {
        auto val = [&](std::size_t row, int re_col) {
            return Complex(traj.rows[row][re_col], traj.rows[row][re_col + 1]);
        };
        const Complex dxw = (-val(j + 2, 1) + 8.0 * val(j + 1, 1) - 8.0 * val(j - 1, 1) +
                             val(j - 2, 1)) / (12.0 * hstep);
        const Complex dpw = (-val(j + 2, 3) + 8.0 * val(j + 1, 3) - 8.0 * val(j - 1, 3) +
                             val(j - 2, 3)) / (12.0 * hstep);
        eom_dev = std::max(eom_dev, std::abs(dxw - val(j, 3)));
        eom_dev = std::max(eom_dev, std::abs(dpw + val(j, 1)));
    }
    result.summary.emplace_back("eom_max_dev", eom_dev);

    // Windowed kick experiment against the oracle.
    const double t_kick = cfg.kick_center * 2.0 * kPi;
    const double sigma = cfg.kick_width * 2.0 * kPi;
    const TemporalProfile window = TemporalProfile::gaussian_window(0.0, tau, t_kick, sigma);
    const OperatorMatrix quad = use_pp ? momentum_op(space) : position_op(space);
    const StateVector phi0 = use_pp ? momentum_profile_state(space)
                                    : position_profile_state(space);
    const OperatorMatrix xop = position_op(space);
    const OperatorMatrix pop = momentum_op(space);

    auto kick_observables = [&](double lambda) {
        SeparableInteraction v({{quad, quad}}, lambda, window);
        TwoBodySystem sys(space, space, h, h, v, cfg.dimension_guard());
        auto [phi_c, overlap] = conditional_state(sys, pre, phi0, post, tau, steps);
        return std::pair<double, double>{conditional_observable(phi_c, xop),
                                         conditional_observable(phi_c, pop)};
    };
    const auto [x_base, p_base] = kick_observables(0.0);
    const auto [x_kicked, p_kicked] = kick_observables(cfg.lambda);
    const double dx2 = x_kicked - x_base;
    const double dp2 = p_kicked - p_base;
    result.summary.emplace_back("dx2", dx2);
    result.summary.emplace_back("dp2", dp2);

    // Shift right after the kick: -+ lambda x0 cos(t_kick)/2 (pp moves the
    // momentum, the xx mirror the position), then rotated by the remaining
    // free evolution to the selection time.
    const double shift_at_kick = (use_pp ? -1.0 : 1.0) * cfg.lambda * cfg.x0 *
                                 std::cos(t_kick) / 2.0;
    const double rotation = std::cos(tau - t_kick);
    const double pred = shift_at_kick * rotation;
    if (use_pp) {
        result.summary.emplace_back("dp2_pred", pred);
        result.summary.emplace_back("dp2_pred_unrotated", cfg.lambda * cfg.x0 * std::cos(t_kick) / 2.0);
        result.summary.emplace_back("dp2_rel_err", pred != 0.0 ? std::abs(dp2 - pred) / std::abs(pred) : std::abs(dp2));
        result.summary.emplace_back("kick_ratio", dx2 != 0.0 ? std::abs(dp2 / dx2) : 0.0);
    } else {
        result.summary.emplace_back("dx2_pred", pred);
        result.summary.emplace_back("dx2_rel_err", pred != 0.0 ? std::abs(dx2 - pred) / std::abs(pred) : std::abs(dx2));
        result.summary.emplace_back("kick_ratio", dp2 != 0.0 ? std::abs(dx2 / dp2) : 0.0);
    }

    // First-order effective dynamics for the same kick.
    {
        SeparableInteraction v({{quad, quad}}, cfg.lambda, window);
        StateVector first = conditional_evolve_first_order(phi0, pair, h, v, grid);
        result.summary.emplace_back(use_pp ? "dp2_first" : "dx2_first",
                                    conditional_observable(first, use_pp ? pop : xop) -
                                        (use_pp ? p_base : x_base));
    }

    std::vector<double> lambdas = cfg.sweep.empty() ? std::vector<double>{cfg.lambda} : cfg.sweep;
    std::vector<ResidualRow> rows;
    for (double l : lambdas)
        rows.push_back(residuals_for_lambda(space, h, h, pair, phi0, quad, quad, window, l, tau,
                                            steps, cfg.dimension_guard()));
    result.residuals = residual_table(rows);
    if (!cfg.sweep.empty()) add_sweep_fits(result, rows);

    if (overlap_bound < 1e-6)
        result.warnings.push_back("pre/post overlap " + std::to_string(overlap_bound) +
                                  " is close to the floor; conditional quantities are ill-conditioned");
    return result;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    return cfg.scenario == ScenarioKind::fock_coupling ? run_fock_coupling(cfg)
                                                       : run_gaussian_pair(cfg);
}

PowerLawFit sweep_and_fit(const std::vector<double>& lambdas,
                          const std::vector<double>& residuals) {
    return fit_power_law(lambdas, residuals);
}

std::vector<ConvergenceRow> convergence_report(const ScenarioConfig& cfg) {
    ScenarioConfig refined = cfg;
    refined.cutoff = 2 * cfg.effective_cutoff();
    refined.steps_per_period = 2 * cfg.steps_per_period;

    const ScenarioResult base = run_scenario(cfg);
    const ScenarioResult fine = run_scenario(refined);

    std::vector<ConvergenceRow> report;
    for (const auto& [key, value] : base.summary) {
        for (const auto& [fkey, fvalue] : fine.summary) {
            if (fkey != key) continue;
            ConvergenceRow row;
            row.key = key;
            row.base = value;
            row.refined = fvalue;
            const double scale = std::max({std::abs(value), std::abs(fvalue), 1e-30});
            row.rel_change = std::abs(fvalue - value) / scale;
            row.flagged = row.rel_change > 1e-6;
            report.push_back(row);
            break;
        }
    }
    return report;
}

} // namespace wvlab
