#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "wdw/closed_forms.hpp"
#include "wdw/family.hpp"
#include "wdw/model.hpp"
#include "wdw/susy.hpp"

using namespace wdw;

namespace {

ModelParams fig1_params() { return with_msq(ModelParams{-1.0, 1, 0.0, 0.0, 1.0}, 4.0); }

closed::ClosedForm fig1_form() {
    return closed::make_closed_form(closed::CaseId::InflationMPos, fig1_params(), {1.0, 1.0});
}

const ModelParams kToy{-1.0, 0, 0.0, 0.0, 1.0};  // V = 0, q = 1

SampledFunction unit_seed(const Grid& g) {
    return SampledFunction::from_functions(
        g, [](double) { return 1.0; }, [](double) { return 0.0; });
}

}  // namespace

TEST_CASE("cumulative integral: u = 1, q = 1 gives A^2/2 exactly") {
    const Grid g = Grid::uniform(0.4, 2.0, 100);
    const auto iv = family::cumulative_integral(kToy, unit_seed(g));
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(iv.values[i] == doctest::Approx(0.5 * g[i] * g[i]).epsilon(1e-13));
}

TEST_CASE("cumulative integral: u = A, q = 0 gives A^3/3 exactly") {
    const ModelParams p{-1.0, 0, 0.0, 0.0, 0.0};
    const Grid g = Grid::uniform(0.4, 2.0, 100);
    const auto u = SampledFunction::from_functions(
        g, [](double a) { return a; }, [](double) { return 1.0; });
    const auto iv = family::cumulative_integral(p, u);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(iv.values[i] == doctest::Approx(g[i] * g[i] * g[i] / 3.0).epsilon(1e-13));
}

TEST_CASE("cumulative integral: refined-quadrature oracle and convergence rate") {
    const auto cf = fig1_form();
    const ModelParams p = cf.params;
    auto coarse_vs_refined = [&](std::size_t n) {
        const Grid g = Grid::uniform(0.6, 3.0, n);
        const auto u = closed::sample(cf, g);
        const auto iv = family::cumulative_integral(p, u);
        // oracle: same rule on a 20x refined grid sharing the coarse points
        const std::size_t nref = 20 * (n - 1) + 1;
        const Grid gr = Grid::uniform(0.6, 3.0, nref);
        const auto ur = closed::sample(cf, gr);
        const auto ivr = family::cumulative_integral(p, ur);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(iv.values[i] - ivr.values[20 * i]));
        return worst / ivr.values.back();
    };
    const double e1200 = coarse_vs_refined(1200);
    CHECK(e1200 < 3e-5);
    const double e2400 = coarse_vs_refined(2400);
    CHECK(e1200 / e2400 > 8.0);  // 4th-order composite rule: ideally ~16x
}

TEST_CASE("cumulative integral: head exponent override and integrability error") {
    const Grid g = Grid::uniform(0.4, 2.0, 64);
    const auto u = SampledFunction::from_functions(
        g, [](double a) { return a; }, [](double) { return 1.0; });
    const ModelParams p{-1.0, 0, 0.0, 0.0, 0.0};
    const auto auto_head = family::cumulative_integral(p, u);
    const auto forced = family::cumulative_integral(p, u, 1.0);
    CHECK(testutil::sup_diff(auto_head.values, forced.values) == 0.0);

    const ModelParams bad{-1.0, 0, 0.0, 0.0, -1.5};  // q <= -1
    CHECK_THROWS_AS(family::cumulative_integral(bad, u), ParameterDomainError);
    // q + 2r + 1 <= 0 via a decaying seed
    const auto dec = SampledFunction::from_functions(
        g, [](double a) { return std::pow(a, -0.4); },
        [](double a) { return -0.4 * std::pow(a, -1.4); });
    CHECK_THROWS_AS(family::cumulative_integral(ModelParams{-1.0, 0, 0.0, 0.0, -0.5}, dec),
                    ParameterDomainError);
}

TEST_CASE("lambda domain rules") {
    CHECK_NOTHROW(family::validate_lambda(2.0, 1.5));
    CHECK_NOTHROW(family::validate_lambda(0.0, 1.5));
    CHECK_THROWS_AS(family::validate_lambda(-0.5, 1.5), ParameterDomainError);  // g imaginary
    CHECK_THROWS_AS(family::validate_lambda(-2.0, 1.5), ParameterDomainError);  // needs the flag
    CHECK_THROWS_AS(family::validate_lambda(-2.0, 1.5, true), ParameterDomainError);
    CHECK_NOTHROW(family::validate_lambda(-2.6, 1.5, true));  // <= -1 - I(A_max)
}

TEST_CASE("bernoulli solution: trivial seed and stencil residual") {
    const Grid g = Grid::uniform(0.4, 2.0, 400);
    const auto u = unit_seed(g);
    const auto iv = family::cumulative_integral(kToy, u);
    const auto y = family::bernoulli_solution(kToy, u, iv, 0.0);
    // y = A^2/2 and y' - 2 W A^q y = A with W = 0
    const auto yp = fd_derivative(g, y.values);
    for (std::size_t i = interior_begin(g.size()); i < interior_end(g.size()); ++i) {
        CHECK(y.values[i] == doctest::Approx(0.5 * g[i] * g[i]).epsilon(1e-12));
        CHECK(yp[i] == doctest::Approx(g[i]).epsilon(1e-9));
    }
    // large lambda: y ~ lambda / u^2
    const auto ybig = family::bernoulli_solution(kToy, u, iv, 1e8);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(ybig.values[i] == doctest::Approx(1e8).epsilon(1e-7));
}

TEST_CASE("bernoulli residual on the isospectral-figure seed") {
    const auto cf = fig1_form();
    const ModelParams p = cf.params;
    const Grid g = Grid::uniform(0.6, 3.0, 1200);
    const auto u = closed::sample(cf, g);
    const auto iv = family::cumulative_integral(p, u);
    const auto ranges = susy::split_node_free(u, 16, 64);
    REQUIRE(!ranges.empty());
    const auto su = u.restricted(ranges[0].first, ranges[0].second);
    const auto si = iv.restricted(ranges[0].first, ranges[0].second);
    const auto w = susy::superpotential_from_seed(p, su);
    const auto y = family::bernoulli_solution(p, su, si, 1.0);
    const auto yp = fd_derivative(su.grid, y.values);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = interior_begin(su.size()); i < interior_end(su.size()); ++i) {
        const double aq = su.grid[i];  // q = 1
        const double res = yp[i] - 2.0 * w.values[i] * aq * y.values[i] - aq;
        scale = std::max(scale, std::abs(yp[i]) + std::abs(2.0 * w.values[i] * aq * y.values[i]) + aq);
        worst = std::max(worst, std::abs(res));
    }
    CHECK(worst / scale < 1e-6);

    // node in u and I + lambda <= 0 are rejected
    CHECK_THROWS_AS(family::bernoulli_solution(p, u, iv, 1.0), NodeInDomainError);
    CHECK_THROWS_AS(family::bernoulli_solution(p, su, si, -0.5 * (si.values.front() + si.values.back())),
                    ParameterDomainError);
}

TEST_CASE("shifted superpotential: trivial composition and large-lambda limit") {
    const Grid g = Grid::uniform(0.4, 2.0, 200);
    const auto u = unit_seed(g);
    const auto iv = family::cumulative_integral(kToy, u);
    susy::SuperpotentialField w0{g, std::vector<double>(g.size(), 0.0),
                                 std::vector<double>(g.size(), 0.0), "zero"};
    const auto wh = family::shifted_superpotential(kToy, w0, u, iv, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(wh.values[i] == doctest::Approx(1.0 / (0.5 * g[i] * g[i] + 1.0)).epsilon(1e-13));

    const auto wh_inf = family::shifted_superpotential(kToy, w0, u, iv, 1e9);
    CHECK(testutil::max_abs(wh_inf.values) < 2e-9);
}

TEST_CASE("shifted superpotential leaves the partner potential invariant") {
    const auto cf = fig1_form();
    const ModelParams p = cf.params;
    const Grid g = Grid::uniform(0.6, 3.0, 1200);
    const auto u = closed::sample(cf, g);
    const auto iv = family::cumulative_integral(p, u);
    const auto ranges = susy::split_node_free(u, 16, 64);
    const auto su = u.restricted(ranges[0].first, ranges[0].second);
    const auto si = iv.restricted(ranges[0].first, ranges[0].second);
    const auto w = susy::superpotential_from_seed(p, su);
    const auto wh = family::shifted_superpotential(p, w, su, si, 1.0);
    // A^(1+2q) W^2 + A^(1+q) W' computed from W and from W^ must agree
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < su.size(); ++i) {
        const double a = su.grid[i];
        const double a3 = std::pow(a, 3.0), a2 = std::pow(a, 2.0);
        const double vm_w = a3 * w.values[i] * w.values[i] + a2 * w.derivs[i];
        const double vm_wh = a3 * wh.values[i] * wh.values[i] + a2 * wh.derivs[i];
        scale = std::max(scale, std::abs(vm_w));
        worst = std::max(worst, std::abs(vm_w - vm_wh));
    }
    CHECK(worst / scale < 1e-6);
}

TEST_CASE("family potential: toy seed reproduces the hand-computed form") {
    // u = 1, q = 1, lambda = 1, W = 0: both routes give 2A^3/(A^2/2 + 1)^2
    const Grid g = Grid::uniform(0.4, 2.0, 200);
    const auto u = unit_seed(g);
    const auto iv = family::cumulative_integral(kToy, u);
    susy::SuperpotentialField w0{g, std::vector<double>(g.size(), 0.0),
                                 std::vector<double>(g.size(), 0.0), "zero"};
    const auto wh = family::shifted_superpotential(kToy, w0, u, iv, 1.0);
    const auto vh = family::family_potential(kToy, w0, wh, u, iv, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double shift = 0.5 * g[i] * g[i] + 1.0;
        const double expect = 2.0 * std::pow(g[i], 3.0) / (shift * shift);
        CHECK(vh.values[i] == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(family::family_potential_route_difference(kToy, w0, wh, u, iv, 1.0) < 1e-13);
}

TEST_CASE("family potential: corrupted shifted superpotential is caught") {
    const Grid g = Grid::uniform(0.4, 2.0, 200);
    const auto u = unit_seed(g);
    const auto iv = family::cumulative_integral(kToy, u);
    susy::SuperpotentialField w0{g, std::vector<double>(g.size(), 0.0),
                                 std::vector<double>(g.size(), 0.0), "zero"};
    auto wh = family::shifted_superpotential(kToy, w0, u, iv, 1.0);
    for (std::size_t i = 0; i < wh.values.size(); ++i)
        wh.values[i] += 1e-3 * (i % 2 ? 1.0 : -1.0);
    CHECK_THROWS_AS(family::family_potential(kToy, w0, wh, u, iv, 1.0),
                    InternalConsistencyError);
}

TEST_CASE("family wavefunction: lambda = 0 annihilates, large lambda converges") {
    const auto cf = fig1_form();
    const ModelParams p = cf.params;
    const Grid g = Grid::uniform(0.6, 3.0, 800);
    const auto u = closed::sample(cf, g);
    const auto iv = family::cumulative_integral(p, u);

    const auto zero = family::family_wavefunction(p, u, iv, 0.0);
    CHECK(testutil::max_abs(zero.values) == 0.0);

    const auto big = family::family_wavefunction(p, u, iv, 1e6);
    CHECK(testutil::sup_rel_diff(big.values, u.values) < 5e-6);

    CHECK_THROWS_AS(family::family_wavefunction(p, u, iv, -0.5), ParameterDomainError);
}

TEST_CASE("family wavefunction: deviation decreases monotonically in lambda") {
    const auto cf = fig1_form();
    const ModelParams p = cf.params;
    const Grid g = Grid::uniform(0.6, 3.0, 800);
    const auto u = closed::sample(cf, g);
    const auto iv = family::cumulative_integral(p, u);
    double prev = 1e300;
    for (double lam : {1.0, 11.0, 61.0, 161.0, 411.0}) {
        const auto uh = family::family_wavefunction(p, u, iv, lam);
        const double dev = testutil::sup_diff(uh.values, u.values);
        CHECK(dev < prev);
        prev = dev;
    }
}

TEST_CASE("full-pipeline smoke test on the exact polynomial zero mode") {
    // V = 0, q = 1, u = A^2: I = A^6/6 analytically
    const Grid g = Grid::uniform(0.4, 2.0, 600);
    const auto u = SampledFunction::from_functions(
        g, [](double a) { return a * a; }, [](double a) { return 2.0 * a; });
    const auto iv = family::cumulative_integral(kToy, u);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(iv.values[i] == doctest::Approx(std::pow(g[i], 6.0) / 6.0).epsilon(1e-7));
    const auto w = susy::superpotential_from_seed(kToy, u);
    const auto member = family::build_family_member(kToy, w, u, iv, 1.0);
    CHECK(family::verify_family_member(kToy, member) < 1e-6);

    // lambda -> infinity: the member degenerates to the seed
    const auto inf_member = family::build_family_member(kToy, w, u, iv, 1e9);
    // |u_hat - u| ~ |I - 1/2|/lambda with I(A_max) = 2^6/6 here
    CHECK(testutil::sup_rel_diff(inf_member.u_hat.values, u.values) < 2.5e-8);
    CHECK(family::verify_family_member(kToy, inf_member) ==
          doctest::Approx(relative_residual(kToy, u)).epsilon(1.0).scale(1e-9));
}

TEST_CASE("negative-lambda branch behind the explicit flag") {
    const Grid g = Grid::uniform(0.4, 2.0, 200);
    const auto u = unit_seed(g);
    const auto iv = family::cumulative_integral(kToy, u);
    const double imax = iv.values.back();
    const auto w = susy::superpotential_from_seed(kToy, u);
    CHECK_THROWS_AS(family::build_family_member(kToy, w, u, iv, -1.0 - imax - 0.5),
                    ParameterDomainError);  // without the flag
    const auto member =
        family::build_family_member(kToy, w, u, iv, -1.0 - imax - 0.5, true);
    CHECK(family::verify_family_member(kToy, member) < 1e-6);
    // g(lambda) is real there
    CHECK(std::isfinite(testutil::max_abs(member.u_hat.values)));
}

TEST_CASE("verify_family_member on the isospectral-figure members") {
    const auto cf = fig1_form();
    const ModelParams p = cf.params;
    const Grid g = Grid::uniform(0.6, 3.0, 1200);
    const auto u = closed::sample(cf, g);
    const auto iv = family::cumulative_integral(p, u);
    const auto ranges = susy::split_node_free(u, 16, 64);
    std::size_t rb = 0, re = 0;
    for (const auto& [b, e] : ranges)
        if (e - b > re - rb) {
            rb = b;
            re = e;
        }
    const auto su = u.restricted(rb, re);
    const auto si = iv.restricted(rb, re);
    const auto w = susy::superpotential_from_seed(p, su);
    for (double lam : {1.0, 11.0, 61.0, 161.0, 411.0}) {
        const auto member = family::build_family_member(p, w, su, si, lam);
        CHECK(family::verify_family_member(p, member) < 1e-5);
        CHECK(family::family_potential_route_difference(p, w, member.w_hat, su, si, lam) < 1e-6);
    }
}
