// wvlab command-line entry point: scenario dispatch and deterministic
// CSV/JSON emission for plots and regression baselines.
//
// Exit codes (external contract):
//   0 success, 1 internal error, 2 config parse/validation error,
//   3 numerical guard tripped, 4 selftest failure.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <future>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wvlab/config.hpp"
#include "wvlab/emit.hpp"
#include "wvlab/hilbert.hpp"
#include "wvlab/oracle.hpp"
#include "wvlab/scenario.hpp"
#include "wvlab/version.hpp"
#include "wvlab/weak_potential.hpp"
#include "wvlab/weak_value.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace wvlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

int parallel_width() {
    if (const char* env = std::getenv("WVLAB_PARALLEL")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

json config_echo(const ScenarioConfig& cfg) {
    json j;
    j["scenario"] = cfg.scenario == ScenarioKind::fock_coupling ? "fock_coupling" : "gaussian_pair";
    j["lambda"] = cfg.lambda;
    j["x0"] = cfg.x0;
    j["cutoff"] = cfg.effective_cutoff();
    j["period_count"] = cfg.period_count;
    j["steps_per_period"] = cfg.steps_per_period;
    j["kick_center"] = cfg.kick_center;
    j["kick_width"] = cfg.kick_width;
    j["interaction"] = cfg.effective_interaction() == InteractionKind::xx ? "xx" : "pp";
    j["sweep"] = cfg.sweep;
    return j;
}

void write_result(const ScenarioConfig& cfg, const ScenarioResult& result, const fs::path& out_dir,
                  double duration_s) {
    fs::create_directories(out_dir);
    write_file((out_dir / "trajectory.csv").string(), to_csv(result.trajectory));
    write_file((out_dir / "residuals.csv").string(), to_csv(result.residuals));
    write_file((out_dir / "summary.json").string(), to_flat_json(result.summary));

    json manifest;
    manifest["version"] = kVersion;
    manifest["config"] = config_echo(cfg);
    manifest["override_dimension_guard"] = cfg.override_dimension_guard;
    manifest["outputs"] = {"trajectory.csv", "residuals.csv", "summary.json"};
    manifest["warnings"] = result.warnings;
    manifest["duration_seconds"] = duration_s;
    write_file((out_dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateSweep& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const OrthogonalSelection& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return 3;
    } catch (const DimensionGuard& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return 3;
    } catch (const TailTooHeavy& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool override_guard,
            bool converge) {
    return run_guarded([&] {
        const auto start = std::chrono::steady_clock::now();
        ScenarioConfig cfg = load_config(config_path);
        cfg.override_dimension_guard = override_guard;
        const ScenarioResult result = run_scenario(cfg);
        const double duration =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_result(cfg, result, out_dir, duration);
        if (converge) {
            const auto report = convergence_report(cfg);
            std::string csv = "key,base,refined,rel_change,flagged\n";
            for (const auto& row : report)
                csv += row.key + ',' + format_double(row.base) + ',' + format_double(row.refined) +
                       ',' + format_double(row.rel_change) + ',' + (row.flagged ? "1" : "0") + '\n';
            write_file((fs::path(out_dir) / "convergence.csv").string(), csv);
        }
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        return 0;
    });
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, bool override_guard) {
    return run_guarded([&] {
        const auto start = std::chrono::steady_clock::now();
        ScenarioConfig cfg = load_config(config_path);
        cfg.override_dimension_guard = override_guard;
        if (cfg.sweep.size() < 3)
            throw DegenerateSweep("sweep: need at least 3 lambda values, got " +
                                  std::to_string(cfg.sweep.size()));

        // Fan out per-lambda runs, bounded width, deterministic ordered merge.
        std::vector<ScenarioConfig> cfgs;
        for (double l : cfg.sweep) {
            ScenarioConfig c = cfg;
            c.lambda = l;
            c.sweep.clear();
            cfgs.push_back(c);
        }
        std::vector<ScenarioResult> results(cfgs.size());
        const int width = parallel_width();
        for (std::size_t base = 0; base < cfgs.size(); base += width) {
            std::vector<std::future<ScenarioResult>> batch;
            for (std::size_t i = base; i < std::min(base + width, cfgs.size()); ++i)
                batch.push_back(std::async(std::launch::async,
                                           [&cfgs, i] { return run_scenario(cfgs[i]); }));
            for (std::size_t i = 0; i < batch.size(); ++i) results[base + i] = batch[i].get();
        }

        std::vector<double> lambdas, r1, r2;
        for (std::size_t i = 0; i < cfgs.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "lambda_%02zu", i);
            write_result(cfgs[i], results[i], fs::path(out_dir) / name, 0.0);
            lambdas.push_back(cfgs[i].lambda);
            r1.push_back(results[i].summary_value("residual_first"));
            r2.push_back(results[i].summary_value("residual_second"));
        }

        const PowerLawFit f1 = sweep_and_fit(lambdas, r1);
        const PowerLawFit f2 = sweep_and_fit(lambdas, r2);
        std::vector<std::pair<std::string, double>> fit_entries{
            {"first_order_exponent", f1.exponent},
            {"first_order_intercept", f1.log_intercept},
            {"first_order_fit_max_dev", f1.max_dev},
            {"second_order_exponent", f2.exponent},
            {"second_order_intercept", f2.log_intercept},
            {"second_order_fit_max_dev", f2.max_dev},
        };
        fs::create_directories(out_dir);
        write_file((fs::path(out_dir) / "sweep_fit.json").string(), to_flat_json(fit_entries));

        json manifest;
        manifest["version"] = kVersion;
        manifest["config"] = config_echo(cfg);
        manifest["override_dimension_guard"] = cfg.override_dimension_guard;
        manifest["outputs"] = {"sweep_fit.json"};
        manifest["duration_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_file((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
        return 0;
    });
}

struct SelfCheck {
    std::string name;
    std::function<std::pair<bool, std::string>()> body;
};

int cmd_selftest(const std::string& fault) {
    std::vector<SelfCheck> checks;
    const FockSpace space(30);

    checks.push_back({"ladder_commutator", [&, fault] {
        Matrix a = annihilation(space).entries;
        if (fault == "ladder") a(0, 1) += 1e-3;
        Matrix comm = a * a.adjoint() - a.adjoint() * a;
        double dev = (comm.topLeftCorner(space.cutoff - 1, space.cutoff - 1) -
                      Matrix::Identity(space.cutoff - 1, space.cutoff - 1)).cwiseAbs().maxCoeff();
        return std::pair{dev < 1e-12, "max dev " + format_double(dev)};
    }});
    checks.push_back({"canonical_commutator", [&] {
        Matrix x = position_op(space).entries, p = momentum_op(space).entries;
        Matrix comm = x * p - p * x;
        const int d = space.cutoff - 5;
        double dev = (comm.topLeftCorner(d, d) -
                      Complex(0, 1) * Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
        return std::pair{dev < 1e-12, "max dev " + format_double(dev)};
    }});
    checks.push_back({"hamiltonian_diagonal", [&] {
        Matrix x = position_op(space).entries, p = momentum_op(space).entries;
        Matrix h = 0.5 * (x * x + p * p);
        double dev = 0.0;
        for (int n = 0; n <= space.cutoff - 3; ++n)
            dev = std::max(dev, std::abs(h(n, n) - (n + 0.5)));
        return std::pair{dev < 1e-10, "max dev " + format_double(dev)};
    }});
    checks.push_back({"coherent_overlap", [&] {
        const FockSpace big(40);
        const double alpha = std::sqrt(2.0);
        auto plus = coherent_state(big, alpha), minus = coherent_state(big, -alpha);
        const double dev = std::abs(inner(minus, plus) - std::exp(-2.0 * alpha * alpha));
        return std::pair{dev < 1e-10, "dev " + format_double(dev)};
    }});
    checks.push_back({"fock_coupling_coefficient", [] {
        ScenarioConfig cfg;
        cfg.scenario = ScenarioKind::fock_coupling;
        cfg.lambda = 1e-2;
        cfg.steps_per_period = 64;
        auto result = run_fock_coupling(cfg);
        const Complex expect = cfg.lambda * std::sqrt(0.5) *
                               Complex(1.0 - std::sqrt(2.0), 1.0 + std::sqrt(2.0));
        const Complex got(result.summary_value("coeff_x2_re"), result.summary_value("coeff_x2_im"));
        const double dev = std::abs(got - expect);
        return std::pair{dev < 1e-12, "dev " + format_double(dev)};
    }});
    checks.push_back({"endpoint_weak_values", [] {
        const FockSpace big(40);
        auto pre = coherent_state(big, std::sqrt(2.0));
        auto post = coherent_state(big, -std::sqrt(2.0));
        PrePostPair pair(pre, post, oscillator_hamiltonian(big));
        const Complex xw = weak_value_at_time(pair, position_op(big), 0.0);
        const Complex pw = weak_value_at_time(pair, momentum_op(big), 0.0);
        const double dev = std::max(std::abs(xw), std::abs(pw - Complex(0.0, -2.0)));
        return std::pair{dev < 1e-9, "dev " + format_double(dev)};
    }});
    checks.push_back({"trajectory_closed_form", [] {
        const FockSpace big(40);
        const double x0 = 2.0;
        auto pre = coherent_state(big, x0 / std::sqrt(2.0));
        auto post = coherent_state(big, -x0 / std::sqrt(2.0));
        PrePostPair pair(pre, post, oscillator_hamiltonian(big));
        auto grid = uniform_grid(0.0, 2.0 * kPi, 64);
        auto series = weak_trajectory(pair, {position_op(big), momentum_op(big)}, grid);
        double dev = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            dev = std::max(dev, std::abs(series[0][j].value -
                                         Complex(0.0, -x0 * std::sin(grid[j]))));
            dev = std::max(dev, std::abs(series[1][j].value -
                                         Complex(0.0, -x0 * std::cos(grid[j]))));
        }
        return std::pair{dev < 1e-7, "max dev " + format_double(dev)};
    }});
    checks.push_back({"energy_weak_value", [] {
        ScenarioConfig cfg;
        cfg.scenario = ScenarioKind::gaussian_pair;
        cfg.steps_per_period = 64;
        auto result = run_gaussian_pair(cfg);
        const double dev = std::abs(result.summary_value("H_w_re") - (-1.5));
        return std::pair{dev < 1e-8, "dev " + format_double(dev)};
    }});
    checks.push_back({"lambda_zero_degenerate", [] {
        ScenarioConfig cfg;
        cfg.scenario = ScenarioKind::fock_coupling;
        cfg.lambda = 0.0;
        cfg.steps_per_period = 64;
        auto result = run_fock_coupling(cfg);
        const double r = std::max(result.summary_value("residual_first"),
                                  result.summary_value("residual_second"));
        return std::pair{r < 1e-10, "residual " + format_double(r)};
    }});
    checks.push_back({"postselect_roundtrip", [&] {
        auto sa = coherent_state(space, 0.7);
        auto sb = coherent_state(space, Complex(0.2, -0.4));
        auto joint = tensor_state(sa, sb);
        auto back = postselect_particle1(joint, sa);
        const double dev = (back.amps - Complex(sa.norm_sq(), 0.0) * sb.amps).norm();
        return std::pair{dev < 1e-12, "dev " + format_double(dev)};
    }});

    int failures = 0;
    std::string first_failed;
    for (const auto& check : checks) {
        bool ok = false;
        std::string detail;
        try {
            std::tie(ok, detail) = check.body();
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        std::cout << (ok ? "PASS" : "FAIL") << "  " << check.name << "  (" << detail << ")\n";
        if (!ok && ++failures == 1) first_failed = check.name;
    }
    if (failures) {
        std::cerr << "selftest: " << failures << " check(s) failed, first: " << first_failed
                  << "\n";
        return 4;
    }
    std::cout << "selftest: all " << checks.size() << " checks passed\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weak values and weak potentials for pre/post-selected oscillators"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    bool override_guard = false, converge = false;
    std::string fault;

    auto* run = app.add_subcommand("run", "run one scenario and emit CSV/JSON");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_flag("--override-dimension-guard", override_guard, "lift the two-body size guard");
    run->add_flag("--converge", converge, "also emit a cutoff/step-doubling convergence report");

    auto* sweep = app.add_subcommand("sweep", "run a lambda sweep and fit error exponents");
    sweep->add_option("config", config_path, "config file with a sweep list")->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_flag("--override-dimension-guard", override_guard, "lift the two-body size guard");

    auto* selftest = app.add_subcommand("selftest", "fast built-in acceptance subset");
    selftest->add_option("--inject-fault", fault)->group("");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, out_dir, override_guard, converge);
    if (sweep->parsed()) return cmd_sweep(config_path, out_dir, override_guard);
    return cmd_selftest(fault);
}
