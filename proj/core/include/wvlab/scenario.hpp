#pragma once

// Canned, parameterized reproductions of the two oscillator experiments:
// the Fock-superposition coupling and the Gaussian pre/post pair with the
// windowed kick, plus sweep/convergence analysis turning the error-order
// claims into fitted exponents.

#include <string>
#include <vector>

#include "wvlab/fit.hpp"
#include "wvlab/hilbert.hpp"

namespace wvlab {

enum class ScenarioKind { fock_coupling, gaussian_pair };
enum class InteractionKind { xx, pp };

struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::gaussian_pair;
    double lambda = 1e-2;
    double x0 = 2.0;             // gaussian_pair only
    int cutoff = 0;              // 0 = scenario default (fock 12, gaussian 40)
    int period_count = 1;
    int steps_per_period = 256;
    double kick_center = 0.5;    // fraction of a period
    double kick_width = 0.02;    // fraction of a period
    InteractionKind interaction = InteractionKind::pp;
    bool interaction_set = false; // false = scenario default (fock xx, gaussian pp)
    std::vector<double> sweep;   // optional lambda sweep
    bool override_dimension_guard = false;

    int effective_cutoff() const;
    InteractionKind effective_interaction() const;
    int dimension_guard() const { return override_dimension_guard ? 1 << 30 : 4096; }

    /// Structural validation; numerical guards (overlap, dimension, tails)
    /// are enforced where they trip, not here.
    void validate() const;
};

/// Ordered numeric columns; one CSV file per table.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ScenarioResult {
    Table trajectory; // t, x_w, p_w, H_w (re/im each)
    Table residuals;  // per-lambda oracle comparison
    std::vector<std::pair<std::string, double>> summary;
    std::vector<std::string> warnings;

    double summary_value(const std::string& key) const;
};

ScenarioResult run_fock_coupling(const ScenarioConfig& cfg);
ScenarioResult run_gaussian_pair(const ScenarioConfig& cfg);
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Log-log least-squares over (lambda, residual) points.
PowerLawFit sweep_and_fit(const std::vector<double>& lambdas,
                          const std::vector<double>& residuals);

struct ConvergenceRow {
    std::string key;
    double base;
    double refined;
    double rel_change;
    bool flagged; // rel_change above 1e-6
};

/// Doubles cutoff and steps_per_period and reports the change in every
/// summary number.
std::vector<ConvergenceRow> convergence_report(const ScenarioConfig& cfg);

} // namespace wvlab
