#include <cmath>

#include <doctest.h>

#include "wvlab/weak_potential.hpp"

using namespace wvlab;

namespace {

constexpr double kPi = 3.14159265358979323846;
const Complex kI{0.0, 1.0};

PrePostPair fock_pair(const FockSpace& space, double tau = 2.0 * kPi) {
    auto pre = superposition(space, {{0, 1.0}, {1, -kI}, {2, 1.0}});
    auto post = superposition(space, {{0, 1.0}, {1, 1.0}, {2, -1.0}});
    return PrePostPair(pre, post, oscillator_hamiltonian(space), 0.0, tau);
}

PrePostPair gaussian_pair(const FockSpace& space, double x0) {
    auto pre = coherent_state(space, x0 / std::sqrt(2.0));
    auto post = coherent_state(space, -x0 / std::sqrt(2.0));
    return PrePostPair(pre, post, oscillator_hamiltonian(space));
}

} // namespace

TEST_CASE("temporal profiles integrate to exactly 1 on their grid") {
    auto u = TemporalProfile::uniform(0.0, 2.0 * kPi);
    CHECK(u.grid_integral() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(u.is_constant());
    CHECK(u(1.0) == doctest::Approx(1.0 / (2.0 * kPi)));
    CHECK(u(0.0) == doctest::Approx(1.0 / (2.0 * kPi)));

    auto g = TemporalProfile::gaussian_window(0.0, 2.0 * kPi, kPi, 0.1);
    CHECK(g.grid_integral() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(g.is_constant());
    // Peak at the center, symmetric, negligible at the edges.
    CHECK(g(kPi) > g(kPi + 0.2));
    CHECK(g(kPi - 0.15) == doctest::Approx(g(kPi + 0.15)).epsilon(1e-6));
    CHECK(g(0.0) < 1e-30);

    // A window truncated by the interval edge still integrates to 1.
    auto edge = TemporalProfile::gaussian_window(0.0, 2.0 * kPi, 0.0, 0.3);
    CHECK(edge.grid_integral() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weak potential equals the coupling times weak value times B") {
    const FockSpace space(12);
    auto pair = fock_pair(space);
    auto x = position_op(space);
    SeparableInteraction v({{x, x}}, 0.01, TemporalProfile::uniform(0.0, 2.0 * kPi));
    for (double t : {0.0, 2.1, 5.8}) {
        auto w = weak_potential_first_order(pair, v, t);
        const Complex aw = weak_value_at_time(pair, x, t);
        Matrix expect = 0.01 * v.profile(t) * aw * x.entries;
        CHECK((w.entries - expect).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("profile-stripped xx coefficient reproduces the ladder bracket") {
    const FockSpace space(12);
    auto pair = fock_pair(space);
    auto x = position_op(space);
    const double lambda = 3e-3;
    SeparableInteraction v({{x, x}}, lambda, TemporalProfile::uniform(0.0, 2.0 * kPi));
    auto w = weak_potential_first_order(pair, v, 0.0);
    // Dividing out g(0) leaves lambda (x1)_w x2. With x1 = sqrt(1/2)(a + a^dag)
    // the coefficient of x2 is lambda sqrt(1/2) [(1 - sqrt2) + i (1 + sqrt2)].
    const Complex coeff = w.entries(0, 1) / v.profile(0.0) / x.entries(0, 1);
    const Complex expect = lambda * std::sqrt(0.5) *
                           Complex(1.0 - std::sqrt(2.0), 1.0 + std::sqrt(2.0));
    CHECK(std::abs(coeff - expect) < 1e-15);
}

TEST_CASE("gaussian pair pp potential is purely imaginary at the endpoints") {
    const FockSpace space(40);
    const double x0 = 2.0;
    auto pair = gaussian_pair(space, x0);
    auto p = momentum_op(space);
    const double lambda = 1e-2;
    SeparableInteraction v({{p, p}}, lambda, TemporalProfile::uniform(0.0, 2.0 * kPi));
    auto w = weak_potential_first_order(pair, v, 0.0);
    // p_w(0) = -i x0: the effective potential is -i lambda g x0 p2, an
    // anti-Hermitian generator -- a pure momentum "kick" channel.
    Matrix expect = lambda * v.profile(0.0) * Complex(0.0, -x0) * p.entries;
    CHECK((w.entries - expect).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((w.entries + w.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("separable sums are handled termwise") {
    const FockSpace space(10);
    auto pair = fock_pair(space);
    auto x = position_op(space);
    auto p = momentum_op(space);
    auto profile = TemporalProfile::uniform(0.0, 2.0 * kPi);
    SeparableInteraction both({{x, x}, {p, p}}, 0.02, profile);
    SeparableInteraction only_x({{x, x}}, 0.02, profile);
    SeparableInteraction only_p({{p, p}}, 0.02, profile);
    const double t = 1.7;
    auto wb = weak_potential_first_order(pair, both, t);
    auto wx = weak_potential_first_order(pair, only_x, t);
    auto wp = weak_potential_first_order(pair, only_p, t);
    CHECK((wb.entries - wx.entries - wp.entries).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("lambda = 0 collapses to free evolution of the test particle") {
    const FockSpace space(12);
    auto pair = fock_pair(space);
    auto x = position_op(space);
    SeparableInteraction v({{x, x}}, 0.0, TemporalProfile::uniform(0.0, 2.0 * kPi));
    auto h2 = oscillator_hamiltonian(space);
    auto phi0 = superposition(space, {{0, 1.0}});
    auto grid = uniform_grid(0.0, 2.0 * kPi, 64);

    auto w = weak_potential_first_order(pair, v, 1.0);
    CHECK(w.entries.cwiseAbs().maxCoeff() == 0.0);

    auto free = evolve_free(phi0, h2, 2.0 * kPi);
    auto first = conditional_evolve_first_order(phi0, pair, h2, v, grid);
    auto second = conditional_evolve_second_order(phi0, pair, h2, v, grid);
    CHECK((first.amps - free.amps).norm() < 1e-12);
    CHECK((second.amps - free.amps).norm() < 1e-12);
}

TEST_CASE("effective Hamiltonian series is H2 plus the weak potential") {
    const FockSpace space(10);
    auto pair = fock_pair(space);
    auto x = position_op(space);
    auto h2 = oscillator_hamiltonian(space);
    SeparableInteraction v({{x, x}}, 0.05, TemporalProfile::uniform(0.0, 2.0 * kPi));
    auto grid = uniform_grid(0.0, 2.0 * kPi, 8);
    auto series = effective_hamiltonian_series(pair, h2, v, grid);
    REQUIRE(series.t_grid.size() == grid.size());
    REQUIRE(series.h_eff.size() == grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        Matrix expect =
            h2.entries + weak_potential_first_order(pair, v, grid[j]).entries;
        CHECK((series.h_eff[j] - expect).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("conditional evolution does not preserve the norm and never renormalizes") {
    const FockSpace space(40);
    const double x0 = 2.0;
    auto pair = gaussian_pair(space, x0);
    auto p = momentum_op(space);
    auto h2 = oscillator_hamiltonian(space);
    const double lambda = 1e-2;
    // Kick at the half period, where p_w = +i x0 is imaginary: the effective
    // potential there is anti-Hermitian and the amplitude norm must drift.
    SeparableInteraction v(
        {{p, p}}, lambda,
        TemporalProfile::gaussian_window(0.0, 2.0 * kPi, kPi, 0.02 * 2.0 * kPi));
    auto phi0 = superposition(space, {{0, 1.0}});
    auto phi = conditional_evolve_first_order(phi0, pair, h2, v,
                                              uniform_grid(0.0, 2.0 * kPi, 256));
    const double drift = std::abs(phi.norm() - 1.0);
    CHECK(drift > 1e-6);
    CHECK(drift < 1e-2);
}

TEST_CASE("first-order evolution self-converges at fourth order in the step") {
    const FockSpace space(12);
    auto pair = fock_pair(space);
    auto x = position_op(space);
    auto h2 = oscillator_hamiltonian(space);
    SeparableInteraction v({{x, x}}, 0.05, TemporalProfile::uniform(0.0, 2.0 * kPi));
    auto phi0 = superposition(space, {{0, 1.0}});

    auto coarse = conditional_evolve_first_order(phi0, pair, h2, v,
                                                 uniform_grid(0.0, 2.0 * kPi, 64));
    auto mid = conditional_evolve_first_order(phi0, pair, h2, v,
                                              uniform_grid(0.0, 2.0 * kPi, 128));
    auto fine = conditional_evolve_first_order(phi0, pair, h2, v,
                                               uniform_grid(0.0, 2.0 * kPi, 256));
    const double e1 = (coarse.amps - fine.amps).norm();
    const double e2 = (mid.amps - fine.amps).norm();
    CHECK(e1 < 1e-8);
    // Halving the step shrinks the defect by ~2^4 (the Richardson ratio for a
    // fourth-order one-step method compared against a common fine reference).
    CHECK(e1 / e2 > 10.0);
    CHECK(e1 / e2 < 24.0);
}

TEST_CASE("oversized interaction steps are rejected") {
    const FockSpace space(40);
    auto pair = gaussian_pair(space, 2.0);
    auto p = momentum_op(space);
    auto h2 = oscillator_hamiltonian(space);
    // Narrow, tall window with a coarse grid: the per-step exponent is large.
    SeparableInteraction v(
        {{p, p}}, 0.2,
        TemporalProfile::gaussian_window(0.0, 2.0 * kPi, kPi, 0.3));
    auto phi0 = superposition(space, {{0, 1.0}});
    CHECK_THROWS_AS(conditional_evolve_first_order(phi0, pair, h2, v,
                                                   uniform_grid(0.0, 2.0 * kPi, 16)),
                    StepTooLarge);
}

TEST_CASE("time grids must span the selection interval and increase") {
    const FockSpace space(8);
    auto pair = fock_pair(space);
    auto x = position_op(space);
    auto h2 = oscillator_hamiltonian(space);
    SeparableInteraction v({{x, x}}, 0.01, TemporalProfile::uniform(0.0, 2.0 * kPi));
    auto phi0 = superposition(space, {{0, 1.0}});
    CHECK_THROWS_AS(conditional_evolve_first_order(phi0, pair, h2, v, {0.0, 1.0}),
                    StepTooLarge);
    CHECK_THROWS_AS(conditional_evolve_first_order(phi0, pair, h2, v,
                                                   {0.0, 4.0, 2.0, 2.0 * kPi}),
                    StepTooLarge);
}

TEST_CASE("uniform_grid spans the interval with steps+1 points") {
    auto g = uniform_grid(0.0, 1.0, 4);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK(g[2] == doctest::Approx(0.5));
}

TEST_CASE("interaction construction validates shapes") {
    const FockSpace s1(6), s2(8);
    auto profile = TemporalProfile::uniform(0.0, 1.0);
    CHECK_THROWS_AS(SeparableInteraction({}, 0.1, profile), DimensionMismatch);
    // Mixed particle-1 dimensions across terms are rejected.
    CHECK_THROWS_AS(SeparableInteraction({{position_op(s1), position_op(s2)},
                                          {position_op(s2), position_op(s2)}},
                                         0.1, profile),
                    DimensionMismatch);
}
