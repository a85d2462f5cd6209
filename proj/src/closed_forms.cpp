#include "wdw/closed_forms.hpp"

#include <cmath>

#include "wdw/specfun.hpp"

namespace wdw::closed {

using specfun::BesselFamily;
using specfun::BesselKind;
using specfun::bessel_with_derivative;

namespace {

constexpr double kMsqZeroTol = 1e-12;
constexpr double kTurningPointDelta = 1e-6;

bool near_nonpositive_integer(double x) {
    return x < 0.5 && std::abs(x - std::round(x)) < 1e-12;
}

}  // namespace

std::string case_name(CaseId id) {
    switch (id) {
        case CaseId::InflationMPos: return "inflation_mpos";
        case CaseId::InflationMNeg: return "inflation_mneg";
        case CaseId::InflationMZeroClosed: return "inflation_mzero_closed";
        case CaseId::InflationMZeroOpen: return "inflation_mzero_open";
        case CaseId::DustFlat: return "dust_flat";
        case CaseId::StiffFlat: return "stiff_flat";
    }
    return "unknown";
}

ClosedForm make_closed_form(CaseId id, const ModelParams& params,
                            std::array<double, 2> coeffs) {
    params.validate();
    const double m2 = msq(params);
    switch (id) {
        case CaseId::InflationMPos:
            if (params.gamma != -1.0 || params.q != 1.0 || !(m2 > kMsqZeroTol))
                throw ConfigError("inflation_mpos needs gamma=-1, q=1, m^2 > 0");
            break;
        case CaseId::InflationMNeg:
            if (params.gamma != -1.0 || params.q != 1.0 || !(m2 < -kMsqZeroTol))
                throw ConfigError("inflation_mneg needs gamma=-1, q=1, m^2 < 0");
            break;
        case CaseId::InflationMZeroClosed:
            if (params.gamma != -1.0 || std::abs(m2) > kMsqZeroTol || params.kappa != 1 ||
                !(params.q > -1.0))
                throw ConfigError("inflation_mzero (closed) needs gamma=-1, m^2=0, kappa=+1, q>-1");
            break;
        case CaseId::InflationMZeroOpen:
            if (params.gamma != -1.0 || std::abs(m2) > kMsqZeroTol || params.kappa != -1 ||
                !(params.q > -1.0))
                throw ConfigError("inflation_mzero (open) needs gamma=-1, m^2=0, kappa=-1, q>-1");
            break;
        case CaseId::DustFlat: {
            if (params.gamma != 0.0 || params.kappa != 0)
                throw ConfigError("dust_flat needs gamma=0, kappa=0");
            if (params.cc == 0.0) throw ConfigError("dust_flat needs a nonzero cosmological constant");
            if (params.cc < 0.0)
                throw DomainError(
                    "dust_flat closed form is real-valued only for positive cosmological "
                    "constant; use the numerical solver for cc < 0");
            const double alpha = (2.0 - params.q) / 3.0;
            if (near_nonpositive_integer(alpha) || near_nonpositive_integer(2.0 - alpha))
                throw DegenerateBasisError("dust_flat basis degenerates at alpha = " +
                                           std::to_string(alpha));
            break;
        }
        case CaseId::StiffFlat: {
            if (params.gamma != 1.0 || params.kappa != 0)
                throw ConfigError("stiff_flat needs gamma=1, kappa=0");
            if (params.cc == 0.0) throw ConfigError("stiff_flat needs a nonzero cosmological constant");
            const double s = 0.5 * (1.0 + params.q);
            if (s * s - 384.0 * params.matter < 0.0)
                throw ImaginaryOrderError(
                    "stiff_flat order is pure imaginary; use the numerical solver");
            break;
        }
    }
    return ClosedForm{id, params, coeffs};
}

CaseId deduce_case(const ModelParams& params) {
    const double m2 = msq(params);
    if (params.gamma == -1.0) {
        if (std::abs(m2) <= kMsqZeroTol) {
            if (params.kappa == 1) return CaseId::InflationMZeroClosed;
            if (params.kappa == -1) return CaseId::InflationMZeroOpen;
            throw ConfigError("gamma=-1, m^2=0, kappa=0 degenerates; no Bessel closed form");
        }
        return m2 > 0.0 ? CaseId::InflationMPos : CaseId::InflationMNeg;
    }
    if (params.gamma == 0.0 && params.kappa == 0) return CaseId::DustFlat;
    if (params.gamma == 1.0 && params.kappa == 0) return CaseId::StiffFlat;
    throw ConfigError("no closed form for these parameters; use the numerical solver");
}

namespace {

// u = v^{1/2} [c1 Z1(z) + c2 Z2(z)], v = m^2 A^2 - kappa (or |m^2| A^2 + kappa),
// z = (4/|m^2|) v^{3/2}; shared chain rule for the two inflation cases.
ValueDeriv inflation_bessel(double m2abs, double v, double dvda, double a, BesselFamily f1,
                            BesselFamily f2, double nu, const std::array<double, 2>& c) {
    const double sv = std::sqrt(v);
    const double z = (4.0 / m2abs) * v * sv;
    const double dzda = 12.0 * a * sv / (2.0 * m2abs * a) * dvda;  // = (6/m2abs) sv * dvda
    const auto b1 = bessel_with_derivative({f1, nu}, z);
    const auto b2 = bessel_with_derivative({f2, -nu}, z);
    const double combo = c[0] * b1.value + c[1] * b2.value;
    const double combo_p = c[0] * b1.deriv + c[1] * b2.deriv;
    const double u = sv * combo;
    const double du = 0.5 * dvda / sv * combo + sv * combo_p * dzda;
    return {u, du};
}

ValueDeriv eval_inflation_mpos(const ClosedForm& cf, double a) {
    const double m2 = msq(cf.params);
    const double v = m2 * a * a - cf.params.kappa;
    if (!(v > kTurningPointDelta))
        throw DomainError("inflation_mpos outside validity region: m^2 A^2 - kappa <= 0 at A = " +
                          std::to_string(a));
    return inflation_bessel(m2, v, 2.0 * m2 * a, a, BesselFamily::J, BesselFamily::J, 1.0 / 3.0,
                            cf.coeffs);
}

ValueDeriv eval_inflation_mneg(const ClosedForm& cf, double a) {
    const double m2abs = -msq(cf.params);
    const double v = m2abs * a * a + cf.params.kappa;
    if (!(v > kTurningPointDelta))
        throw DomainError("inflation_mneg outside validity region: |m^2| A^2 + kappa <= 0 at A = " +
                          std::to_string(a));
    const double sv = std::sqrt(v);
    const double z = (4.0 / m2abs) * v * sv;
    const double dzda = 12.0 * a * sv;
    const auto bi = bessel_with_derivative({BesselFamily::I, 1.0 / 3.0}, z);
    const auto bk = bessel_with_derivative({BesselFamily::K, 1.0 / 3.0}, z);
    const double combo = cf.coeffs[0] * bi.value + cf.coeffs[1] * bk.value;
    const double combo_p = cf.coeffs[0] * bi.deriv + cf.coeffs[1] * bk.deriv;
    return {sv * combo, m2abs * a / sv * combo + sv * combo_p * dzda};
}

ValueDeriv eval_inflation_mzero(const ClosedForm& cf, double a) {
    const double q = cf.params.q;
    if (cf.params.kappa == 0) {
        // A u'' = q u': the trivial branch {A^{1+q}, const}.
        const double u = cf.coeffs[0] * std::pow(a, 1.0 + q) + cf.coeffs[1];
        return {u, cf.coeffs[0] * (1.0 + q) * std::pow(a, q)};
    }
    const double nu = 0.25 * (1.0 + q);
    const double z = 6.0 * a * a;
    const double dzda = 12.0 * a;
    const bool closed_universe = cf.params.kappa == 1;
    const auto z1 = bessel_with_derivative(
        {closed_universe ? BesselFamily::I : BesselFamily::J, nu}, z);
    const auto z2 = bessel_with_derivative(
        {closed_universe ? BesselFamily::K : BesselFamily::Y, nu}, z);
    const double combo = cf.coeffs[0] * z1.value + cf.coeffs[1] * z2.value;
    const double combo_p = cf.coeffs[0] * z1.deriv + cf.coeffs[1] * z2.deriv;
    const double apow = std::pow(a, 2.0 * nu);
    return {apow * combo, 2.0 * nu * apow / a * combo + apow * combo_p * dzda};
}

ValueDeriv eval_dust_flat(const ClosedForm& cf, double a) {
    const double lam = cf.params.cc;
    const double q = cf.params.q;
    const double root = std::sqrt(3.0 * lam);
    const double z = (8.0 / 3.0) * root * a * a * a;
    const double dzda = 8.0 * root * a * a;
    const double alpha = (2.0 - q) / 3.0;
    const double n = (2.0 - q) / 6.0 - 16.0 * cf.params.matter / root;

    const double m1 = specfun::hyp1f1(n, alpha, z);
    const double m1p = specfun::hyp1f1_derivative(n, alpha, z);
    const double m2 = specfun::hyp1f1(n - alpha + 1.0, 2.0 - alpha, z);
    const double m2p = specfun::hyp1f1_derivative(n - alpha + 1.0, 2.0 - alpha, z);
    const double zp = std::pow(z, 1.0 - alpha);

    const double ez = std::exp(-0.5 * z);
    const double w = cf.coeffs[0] * m1 + cf.coeffs[1] * zp * m2;
    const double dwdz = cf.coeffs[0] * m1p +
                        cf.coeffs[1] * ((1.0 - alpha) * zp / z * m2 + zp * m2p);
    const double u = ez * w;
    const double dudz = ez * (dwdz - 0.5 * w);
    return {u, dudz * dzda};
}

ValueDeriv eval_stiff_flat(const ClosedForm& cf, double a) {
    const double lam = cf.params.cc;
    const double q = cf.params.q;
    const double s = 0.5 * (1.0 + q);
    const double mu = std::sqrt(s * s - 384.0 * cf.params.matter) / 3.0;
    const double root = std::sqrt(3.0 * std::abs(lam));
    const double w = (4.0 / 3.0) * root * a * a * a;
    const double dwda = 4.0 * root * a * a;
    const bool modified = lam > 0.0;
    const auto z1 =
        bessel_with_derivative({modified ? BesselFamily::I : BesselFamily::J, mu}, w);
    const auto z2 =
        bessel_with_derivative({modified ? BesselFamily::K : BesselFamily::Y, mu}, w);
    const double combo = cf.coeffs[0] * z1.value + cf.coeffs[1] * z2.value;
    const double combo_p = cf.coeffs[0] * z1.deriv + cf.coeffs[1] * z2.deriv;
    const double apow = std::pow(a, s);
    return {apow * combo, s * apow / a * combo + apow * combo_p * dwda};
}

}  // namespace

ValueDeriv evaluate(const ClosedForm& cf, double a) {
    if (!(a > 0.0)) throw DomainError("closed forms require A > 0");
    switch (cf.case_id) {
        case CaseId::InflationMPos: return eval_inflation_mpos(cf, a);
        case CaseId::InflationMNeg: return eval_inflation_mneg(cf, a);
        case CaseId::InflationMZeroClosed:
        case CaseId::InflationMZeroOpen: return eval_inflation_mzero(cf, a);
        case CaseId::DustFlat: return eval_dust_flat(cf, a);
        case CaseId::StiffFlat: return eval_stiff_flat(cf, a);
    }
    throw ConfigError("unknown closed-form case");
}

SampledFunction sample(const ClosedForm& cf, const Grid& grid) {
    std::vector<double> v(grid.size()), d(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto vd = evaluate(cf, grid[i]);
        v[i] = vd.value;
        d[i] = vd.deriv;
    }
    return SampledFunction(grid, std::move(v), std::move(d));
}

}  // namespace wdw::closed
