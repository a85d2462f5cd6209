#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "wdw/closed_forms.hpp"
#include "wdw/odesolve.hpp"
#include "wdw/specfun.hpp"

using namespace wdw;
using closed::CaseId;

namespace {

ModelParams fig1_params() { return with_msq(ModelParams{-1.0, 1, 0.0, 0.0, 1.0}, 4.0); }

struct ResidualCase {
    closed::ClosedForm cf;
    double a_min, a_max;
};

double closed_residual(const ResidualCase& rc, std::size_t n = 2000) {
    const auto u = closed::sample(rc.cf, Grid::uniform(rc.a_min, rc.a_max, n));
    return relative_residual(rc.cf.params, u);
}

}  // namespace

TEST_CASE("case/parameter consistency rules") {
    CHECK_THROWS_AS(
        closed::make_closed_form(CaseId::InflationMPos, ModelParams{-1.0, 1, 3.0, 0.0, 1.0}, {1, 1}),
        ConfigError);  // m^2 = -1 < 0
    CHECK_THROWS_AS(
        closed::make_closed_form(CaseId::InflationMPos,
                                 with_msq(ModelParams{-1.0, 1, 0.0, 0.0, 0.0}, 4.0), {1, 1}),
        ConfigError);  // q != 1
    CHECK_THROWS_AS(
        closed::make_closed_form(CaseId::DustFlat, ModelParams{0.0, 0, 0.0, 1.0, 1.0}, {1, 1}),
        ConfigError);  // cc = 0
    CHECK_THROWS_AS(
        closed::make_closed_form(CaseId::DustFlat, ModelParams{0.0, 0, -1.0, 1.0, 1.0}, {1, 1}),
        DomainError);  // cc < 0 has no real closed form
    CHECK_THROWS_AS(
        closed::make_closed_form(CaseId::DustFlat, ModelParams{0.0, 0, 1.0, 0.0, 2.0}, {1, 1}),
        DegenerateBasisError);  // alpha = 0
    CHECK_THROWS_AS(
        closed::make_closed_form(CaseId::StiffFlat, ModelParams{1.0, 0, -1.0, 1.0, 1.0}, {1, 1}),
        ImaginaryOrderError);  // 384 matter > ((1+q)/2)^2
}

TEST_CASE("deduce_case picks the right branch") {
    CHECK(closed::deduce_case(fig1_params()) == CaseId::InflationMPos);
    CHECK(closed::deduce_case(ModelParams{-1.0, 1, 3.0, 0.0, 1.0}) == CaseId::InflationMNeg);
    CHECK(closed::deduce_case(ModelParams{-1.0, 1, 0.0, 0.0, 1.0}) == CaseId::InflationMZeroClosed);
    CHECK(closed::deduce_case(ModelParams{-1.0, -1, 0.0, 0.0, 1.0}) == CaseId::InflationMZeroOpen);
    CHECK(closed::deduce_case(ModelParams{0.0, 0, 1.0, 0.5, 1.0}) == CaseId::DustFlat);
    CHECK(closed::deduce_case(ModelParams{1.0, 0, -1.0, 0.0, 1.0}) == CaseId::StiffFlat);
    CHECK_THROWS_AS(closed::deduce_case(ModelParams{0.5, 1, 0.0, 0.0, 1.0}), ConfigError);
}

TEST_CASE("inflation m^2>0: operator residual below 1e-6 on [0.6, 3]") {
    const auto cf = closed::make_closed_form(CaseId::InflationMPos, fig1_params(), {1.0, 1.0});
    CHECK(closed_residual({cf, 0.6, 3.0}) < 1e-6);
}

TEST_CASE("inflation m^2>0: flat-universe simplification z = 8A^3") {
    // kappa=0, m^2=4: u = 2A [c1 J_{1/3}(8A^3) + c2 J_{-1/3}(8A^3)]
    const ModelParams p = with_msq(ModelParams{-1.0, 0, 0.0, 0.0, 1.0}, 4.0);
    const auto cf = closed::make_closed_form(CaseId::InflationMPos, p, {0.7, -0.2});
    for (double a : {0.5, 0.9, 1.3}) {
        const double z = 8.0 * a * a * a;
        const double expect =
            2.0 * a *
            (0.7 * specfun::bessel({specfun::BesselFamily::J, 1.0 / 3.0}, z) -
             0.2 * specfun::bessel({specfun::BesselFamily::J, -1.0 / 3.0}, z));
        CHECK(closed::evaluate(cf, a).value == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("inflation m^2>0: turning-point domain error") {
    const auto cf = closed::make_closed_form(CaseId::InflationMPos, fig1_params(), {1.0, 1.0});
    CHECK_THROWS_AS(closed::evaluate(cf, 0.49), DomainError);  // m^2 A^2 < kappa
}

TEST_CASE("inflation m^2<0: residual and I/K asymptotics") {
    const ModelParams p{-1.0, 1, 3.0, 0.0, 1.0};  // m^2 = -1
    const auto cf = closed::make_closed_form(CaseId::InflationMNeg, p, {1.0, 1.0});
    CHECK(closed_residual({cf, 0.3, 2.0}) < 1e-6);

    // kappa = -1: |m^2| A^2 + kappa <= 0 at small A
    const ModelParams po{-1.0, -1, 3.0, 0.0, 1.0};
    const auto cfo = closed::make_closed_form(CaseId::InflationMNeg, po, {1.0, 1.0});
    CHECK_THROWS_AS(closed::evaluate(cfo, 0.5), DomainError);
    CHECK_NOTHROW(closed::evaluate(cfo, 1.5));

    const auto growing = closed::make_closed_form(CaseId::InflationMNeg, p, {1.0, 0.0});
    const auto decaying = closed::make_closed_form(CaseId::InflationMNeg, p, {0.0, 1.0});
    CHECK(closed::evaluate(growing, 2.0).value > closed::evaluate(growing, 1.5).value);
    CHECK(closed::evaluate(decaying, 2.0).value < closed::evaluate(decaying, 1.5).value);
    CHECK(closed::evaluate(decaying, 2.0).value > 0.0);
}

TEST_CASE("inflation m^2=0: half-integer collapse and residuals") {
    const ModelParams p{-1.0, 1, 0.0, 0.0, 1.0};  // nu = 1/2
    const auto cf = closed::make_closed_form(CaseId::InflationMZeroClosed, p, {1.0, 0.0});
    // A^{2 nu} I_{1/2}(6A^2) is proportional to sinh(6A^2)
    const double ratio0 = closed::evaluate(cf, 0.7).value / std::sinh(6.0 * 0.49);
    const double ratio1 = closed::evaluate(cf, 1.2).value / std::sinh(6.0 * 1.44);
    CHECK(ratio0 == doctest::Approx(ratio1).epsilon(1e-12));
    CHECK(closed_residual({cf, 0.2, 1.5}) < 1e-6);

    const ModelParams po{-1.0, -1, 0.0, 0.0, 1.0};
    const auto cfo = closed::make_closed_form(CaseId::InflationMZeroOpen, po, {0.4, 1.1});
    CHECK(closed_residual({cfo, 0.2, 1.5}) < 1e-6);
}

TEST_CASE("inflation m^2=0: order formula nu = (1+q)/4 via q=3") {
    // q = 3 gives integer order nu = 1
    const ModelParams p{-1.0, 1, 0.0, 0.0, 3.0};
    const auto cf = closed::make_closed_form(CaseId::InflationMZeroClosed, p, {1.0, 1.0});
    CHECK(closed_residual({cf, 0.2, 1.2}) < 1e-6);
    for (double a : {0.4, 0.9}) {
        const double z = 6.0 * a * a;
        const double expect =
            std::pow(a, 2.0) * (specfun::bessel({specfun::BesselFamily::I, 1.0}, z) +
                                specfun::bessel({specfun::BesselFamily::K, 1.0}, z));
        CHECK(closed::evaluate(cf, a).value == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("inflation m^2=0, kappa=0: trivial branch {A^{1+q}, const}") {
    const ModelParams p{-1.0, 0, 0.0, 0.0, 1.5};
    const closed::ClosedForm cf{CaseId::InflationMZeroClosed, p, {2.0, -3.0}};
    for (double a : {0.5, 1.7}) {
        CHECK(closed::evaluate(cf, a).value ==
              doctest::Approx(2.0 * std::pow(a, 2.5) - 3.0).epsilon(1e-14));
        CHECK(closed::evaluate(cf, a).deriv ==
              doctest::Approx(5.0 * std::pow(a, 1.5)).epsilon(1e-14));
    }
}

TEST_CASE("dust: residual below 1e-6 and origin limit") {
    const ModelParams p{0.0, 0, 1.0, 1.0, 1.0};
    const auto cf = closed::make_closed_form(CaseId::DustFlat, p, {1.0, 1.0});
    CHECK(closed_residual({cf, 0.1, 1.2}) < 1e-6);

    // z -> 0: the first branch tends to c1 (1F1 -> 1, exp -> 1)
    const auto first = closed::make_closed_form(CaseId::DustFlat, p, {0.8, 0.0});
    CHECK(closed::evaluate(first, 1e-4).value == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("dust: n = 0 truncation makes the first branch a pure exponential") {
    // n = (2-q)/6 - 16 matter / sqrt(3 cc): zero at q=1, cc=3, matter = 1/32
    const ModelParams p{0.0, 0, 3.0, 1.0 / 32.0, 1.0};
    const auto cf = closed::make_closed_form(CaseId::DustFlat, p, {1.0, 0.0});
    for (double a : {0.3, 0.8}) {
        const double z = (8.0 / 3.0) * 3.0 * a * a * a;
        CHECK(closed::evaluate(cf, a).value == doctest::Approx(std::exp(-0.5 * z)).epsilon(1e-12));
    }
}

TEST_CASE("stiff: residuals for both cosmological-constant signs") {
    const ModelParams neg{1.0, 0, -1.0, 0.1 / 384.0, 1.0};
    const auto cfn = closed::make_closed_form(CaseId::StiffFlat, neg, {1.0, 1.0});
    CHECK(closed_residual({cfn, 0.2, 1.5}) < 1e-6);

    const ModelParams pos{1.0, 0, 1.0, 0.1 / 384.0, 1.0};
    const auto cfp = closed::make_closed_form(CaseId::StiffFlat, pos, {1.0, 1.0});
    CHECK(closed_residual({cfp, 0.2, 1.5}) < 1e-6);
}

TEST_CASE("stiff: order mu threshold cases") {
    // matter = 0, q = 1: mu = 1/3; prefactor A^{(1+q)/2} = A
    const ModelParams p0{1.0, 0, -1.0, 0.0, 1.0};
    const auto cf0 = closed::make_closed_form(CaseId::StiffFlat, p0, {1.0, 0.0});
    for (double a : {0.5, 1.1}) {
        const double w = (4.0 / 3.0) * std::sqrt(3.0) * a * a * a;
        const double expect = a * specfun::bessel({specfun::BesselFamily::J, 1.0 / 3.0}, w);
        CHECK(closed::evaluate(cf0, a).value == doctest::Approx(expect).epsilon(1e-12));
    }
    // 384 matter = ((1+q)/2)^2: mu = 0, the J0/Y0 branch
    const ModelParams pz{1.0, 0, -1.0, 1.0 / 384.0, 1.0};
    const auto cfz = closed::make_closed_form(CaseId::StiffFlat, pz, {1.0, 1.0});
    CHECK(closed_residual({cfz, 0.2, 1.5}) < 1e-6);
}

TEST_CASE("every evaluator is linear in the coefficients") {
    const std::pair<closed::ClosedForm, double> cases[] = {
        {closed::make_closed_form(CaseId::InflationMPos, fig1_params(), {0.0, 0.0}), 1.0},
        {closed::make_closed_form(CaseId::InflationMNeg, ModelParams{-1.0, 1, 3.0, 0.0, 1.0},
                                  {0.0, 0.0}),
         0.9},
        {closed::make_closed_form(CaseId::DustFlat, ModelParams{0.0, 0, 1.0, 1.0, 1.0},
                                  {0.0, 0.0}),
         0.7},
        {closed::make_closed_form(CaseId::StiffFlat, ModelParams{1.0, 0, -1.0, 0.0, 1.0},
                                  {0.0, 0.0}),
         0.8},
    };
    for (const auto& [base, a] : cases) {
        closed::ClosedForm c10 = base, c01 = base, cab = base;
        c10.coeffs = {1.0, 0.0};
        c01.coeffs = {0.0, 1.0};
        cab.coeffs = {1.7, -0.45};
        const double expect =
            1.7 * closed::evaluate(c10, a).value - 0.45 * closed::evaluate(c01, a).value;
        CHECK(closed::evaluate(cab, a).value == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("every closed form agrees with the integrator seeded at its left end") {
    const ResidualCase cases[] = {
        {closed::make_closed_form(CaseId::InflationMPos, fig1_params(), {1.0, 1.0}), 0.6, 3.0},
        {closed::make_closed_form(CaseId::InflationMNeg, ModelParams{-1.0, 1, 3.0, 0.0, 1.0},
                                  {1.0, 1.0}),
         0.3, 2.0},
        {closed::make_closed_form(CaseId::InflationMZeroClosed,
                                  ModelParams{-1.0, 1, 0.0, 0.0, 1.0}, {1.0, 1.0}),
         0.2, 1.5},
        {closed::make_closed_form(CaseId::InflationMZeroOpen,
                                  ModelParams{-1.0, -1, 0.0, 0.0, 1.0}, {1.0, 1.0}),
         0.2, 1.5},
        {closed::make_closed_form(CaseId::DustFlat, ModelParams{0.0, 0, 1.0, 1.0, 1.0},
                                  {1.0, 1.0}),
         0.1, 1.2},
        {closed::make_closed_form(CaseId::StiffFlat, ModelParams{1.0, 0, -1.0, 0.1 / 384.0, 1.0},
                                  {1.0, 1.0}),
         0.2, 1.5},
    };
    for (const auto& rc : cases) {
        const Grid g = Grid::uniform(rc.a_min, rc.a_max, 1500);
        const auto exact = closed::sample(rc.cf, g);
        const auto vd = closed::evaluate(rc.cf, rc.a_min);
        const auto numeric = ode::integrate(rc.cf.params, g, vd.value, vd.deriv);
        CHECK(testutil::sup_rel_diff(numeric.values, exact.values) < 1e-5);
    }
}
