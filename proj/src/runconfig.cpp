#include "wdw/runconfig.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "wdw/closed_forms.hpp"
#include "wdw/family.hpp"
#include "wdw/odesolve.hpp"
#include "wdw/susy.hpp"

namespace wdw::cli {

namespace {

std::string fmt_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

std::string fmt_short(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

}  // namespace

void RunConfig::validate() const {
    model.validate();
    if (!(a_min > 0.0) || !(a_max > a_min))
        throw ConfigError("grid bounds must satisfy 0 < a_min < a_max");
    if (n_points < 16) throw ConfigError("need at least 16 grid points");
    if (!closed_form && (init_value || init_deriv)) {
        if (!init_value || !init_deriv)
            throw ConfigError("numeric seeding needs both --init-value and --init-deriv");
    }
    if (inject_noise < 0.0) throw ConfigError("noise amplitude must be >= 0");
}

ModelParams RunConfig::effective_params() const {
    if (!msq_target) return model;
    return with_msq(model, *msq_target);
}

std::vector<std::pair<std::string, std::string>> RunConfig::provenance(
    const std::string& command) const {
    const ModelParams p = effective_params();
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("command", command);
    kv.emplace_back("gamma", fmt_short(p.gamma));
    kv.emplace_back("kappa", std::to_string(p.kappa));
    kv.emplace_back("cc", fmt_short(p.cc));
    kv.emplace_back("matter", fmt_full(p.matter));
    kv.emplace_back("msq", fmt_full(msq(p)));
    kv.emplace_back("q", fmt_short(p.q));
    kv.emplace_back("a_min", fmt_short(a_min));
    kv.emplace_back("a_max", fmt_short(a_max));
    kv.emplace_back("n", std::to_string(n_points));
    if (!lambdas.empty()) {
        std::string ls;
        for (std::size_t i = 0; i < lambdas.size(); ++i)
            ls += (i ? "," : "") + fmt_short(lambdas[i]);
        kv.emplace_back("lambda", ls);
    }
    if (closed_form) {
        kv.emplace_back("closed_form", closed::case_name(closed::deduce_case(p)));
        kv.emplace_back("c1", fmt_full(c1));
        kv.emplace_back("c2", fmt_full(c2));
    } else if (init_value) {
        kv.emplace_back("init_value", fmt_full(*init_value));
        kv.emplace_back("init_deriv", fmt_full(*init_deriv));
    }
    return kv;
}

RunConfig fig1_config() {
    RunConfig cfg;
    cfg.model = ModelParams{-1.0, 1, 0.0, 0.0, 1.0};
    cfg.msq_target = 4.0;
    cfg.a_min = 0.6;
    cfg.a_max = 3.0;
    cfg.n_points = 1200;
    cfg.lambdas = {1.0, 11.0, 61.0, 161.0, 411.0};
    cfg.closed_form = true;
    cfg.c1 = 1.0;
    cfg.c2 = 1.0;
    return cfg;
}

void write_csv(const std::string& path, const Table& t) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    for (const auto& [k, v] : t.comments) out << "# " << k << "=" << v << "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        out << (c ? "," : "") << t.columns[c];
    out << "\n";
    const std::size_t rows = t.data.empty() ? 0 : t.data.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < t.data.size(); ++c)
            out << (c ? "," : "") << fmt_full(t.data[c][r]);
        out << "\n";
    }
    if (!out) throw ConfigError("failed writing output file: " + path);
}

Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file: " + path);
    Table t;
    std::string line;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            if (!body.empty() && body[0] == ' ') body.erase(0, 1);
            const auto eq = body.find('=');
            if (eq != std::string::npos)
                t.comments.emplace_back(body.substr(0, eq), body.substr(eq + 1));
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!header_done) {
            while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
            t.data.assign(t.columns.size(), {});
            header_done = true;
            continue;
        }
        std::size_t c = 0;
        while (std::getline(ss, cell, ',') && c < t.data.size())
            t.data[c++].push_back(std::strtod(cell.c_str(), nullptr));
    }
    return t;
}

void write_json_table(const std::string& path, const Table& t) {
    nlohmann::json j;
    for (const auto& [k, v] : t.comments) j["config"][k] = v;
    j["columns"] = t.columns;
    for (std::size_t c = 0; c < t.data.size(); ++c) j["data"][t.columns[c]] = t.data[c];
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

SampledFunction make_seed(const RunConfig& cfg, const Grid& grid) {
    const ModelParams p = cfg.effective_params();
    if (cfg.closed_form) {
        const auto cf = closed::make_closed_form(closed::deduce_case(p), p, {cfg.c1, cfg.c2});
        return closed::sample(cf, grid);
    }
    double v0 = 1.0, d0 = 0.0;
    if (cfg.init_value) {
        v0 = *cfg.init_value;
        d0 = *cfg.init_deriv;
    } else {
        // default: the Frobenius branch A^{1+q} seeded at the left edge
        const auto roots = ode::frobenius_exponents(p);
        if (!roots.complex_pair) {
            v0 = std::pow(grid.front(), roots.r2);
            d0 = roots.r2 * std::pow(grid.front(), roots.r2 - 1.0);
        }
    }
    return ode::integrate(p, grid, v0, d0);
}

namespace {

void emit_output(const RunConfig& cfg, const Table& t, const std::string& fallback) {
    const std::string path = cfg.output_path.empty() ? fallback : cfg.output_path;
    if (cfg.format == OutputFormat::Csv)
        write_csv(path, t);
    else
        write_json_table(path, t);
}

int map_error(const std::exception& e, std::ostream& diag) {
    diag << "error: " << e.what() << "\n";
    if (dynamic_cast<const IntegrationError*>(&e)) return kExitIntegration;
    if (dynamic_cast<const ParameterDomainError*>(&e)) return kExitLambdaDomain;
    return kExitConfig;
}

}  // namespace

int run_solve(const RunConfig& cfg, std::ostream& diag) {
    try {
        cfg.validate();
        const Grid grid = Grid::uniform(cfg.a_min, cfg.a_max, cfg.n_points);
        const auto u = make_seed(cfg, grid);
        Table t;
        t.comments = cfg.provenance("solve");
        t.columns = {"A", "u", "du"};
        t.data = {grid.points(), u.values, u.derivs};
        emit_output(cfg, t, "solution.csv");
        return kExitOk;
    } catch (const IntegrationError& e) {
        diag << "integration failed: " << e.what()
             << " (last good A = " << fmt_short(e.last_good_a()) << ")\n";
        return kExitIntegration;
    } catch (const std::exception& e) {
        return map_error(e, diag);
    }
}

int run_family(const RunConfig& cfg, std::ostream& diag) {
    try {
        cfg.validate();
        const ModelParams p = cfg.effective_params();
        if (cfg.lambdas.empty()) throw ConfigError("family needs at least one --lam value");
        const Grid grid = Grid::uniform(cfg.a_min, cfg.a_max, cfg.n_points);
        const auto u = make_seed(cfg, grid);
        const auto i_gamma = family::cumulative_integral(p, u);
        const double i_max = i_gamma.values.back();

        std::vector<double> offending;
        for (double lam : cfg.lambdas) {
            try {
                family::validate_lambda(lam, i_max, cfg.allow_negative_lambda);
            } catch (const ParameterDomainError&) {
                offending.push_back(lam);
            }
        }
        if (!offending.empty()) {
            diag << "lambda outside the admissible domain:";
            for (double lam : offending) diag << " " << fmt_short(lam);
            diag << " (default rule: lambda >= 0; lambda <= -1 - I(A_max) behind "
                    "--allow-negative-lambda)\n";
            return kExitLambdaDomain;
        }

        Table t;
        t.comments = cfg.provenance("family");
        t.columns = {"A", "u", "I_gamma"};
        t.data = {grid.points(), u.values, i_gamma.values};

        nlohmann::json checks = nlohmann::json::array();

        // node-free subinterval for the superpotential-level diagnostics
        const auto ranges = susy::split_node_free(u, 16, 32);
        std::size_t rb = 0, re = 0;
        for (const auto& [b, e] : ranges)
            if (e - b > re - rb) { rb = b; re = e; }

        for (double lam : cfg.lambdas) {
            const auto u_hat = family::family_wavefunction(p, u, i_gamma, lam);
            const auto v_hat = family::isospectral_potential(p, u, i_gamma, lam);
            t.columns.push_back("u_hat_" + fmt_short(lam));
            t.data.push_back(u_hat.values);
            t.columns.push_back("V_hat_" + fmt_short(lam));
            t.data.push_back(v_hat.values);

            if (re > rb) {
                const auto su = u.restricted(rb, re);
                const auto si = i_gamma.restricted(rb, re);
                const auto w = susy::superpotential_from_seed(p, su, "family-seed");
                const auto member =
                    family::build_family_member(p, w, su, si, lam, cfg.allow_negative_lambda);
                const double res = family::verify_family_member(p, member);
                checks.push_back({{"name", "family_residual[lambda=" + fmt_short(lam) + "]"},
                                  {"residual", res},
                                  {"threshold", 1e-5},
                                  {"pass", res < 1e-5}});
                const double route = family::family_potential_route_difference(
                    p, w, member.w_hat, su, si, lam);
                checks.push_back(
                    {{"name", "two_route_potential[lambda=" + fmt_short(lam) + "]"},
                     {"residual", route},
                     {"threshold", 1e-6},
                     {"pass", route < 1e-6}});
            }
        }

        const std::string path = cfg.output_path.empty() ? "family.csv" : cfg.output_path;
        if (cfg.format == OutputFormat::Csv)
            write_csv(path, t);
        else
            write_json_table(path, t);

        nlohmann::json sidecar;
        sidecar["checks"] = checks;
        for (const auto& [k, v] : cfg.provenance("family")) sidecar["config"][k] = v;
        std::ofstream side(path + ".checks.json");
        side << sidecar.dump(2) << "\n";
        return kExitOk;
    } catch (const IntegrationError& e) {
        diag << "integration failed: " << e.what()
             << " (last good A = " << fmt_short(e.last_good_a()) << ")\n";
        return kExitIntegration;
    } catch (const std::exception& e) {
        return map_error(e, diag);
    }
}

namespace {

struct Check {
    std::string name;
    double residual;
    double threshold;
    bool pass() const { return residual < threshold; }
};

// Smooth probe with analytic derivatives for operator-identity checks.
SampledFunction random_smooth(const Grid& g, std::mt19937& rng) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0), freq(0.5, 6.0);
    const double c0 = coef(rng), c1 = coef(rng), c2 = coef(rng);
    std::array<double, 3> as{}, bs{}, ws{};
    for (int j = 0; j < 3; ++j) {
        as[j] = coef(rng);
        bs[j] = coef(rng);
        ws[j] = freq(rng);
    }
    return SampledFunction::from_functions(
        g,
        [&](double a) {
            double v = c0 + c1 * a + c2 * a * a;
            for (int j = 0; j < 3; ++j)
                v += as[j] * std::sin(ws[j] * a) + bs[j] * std::cos(ws[j] * a);
            return v;
        },
        [&](double a) {
            double v = c1 + 2.0 * c2 * a;
            for (int j = 0; j < 3; ++j)
                v += ws[j] * (as[j] * std::cos(ws[j] * a) - bs[j] * std::sin(ws[j] * a));
            return v;
        });
}

double interior_max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (std::size_t i = interior_begin(v.size()); i < interior_end(v.size()); ++i)
        m = std::max(m, std::abs(v[i]));
    return m;
}

}  // namespace

int run_verify(const RunConfig& cfg, std::ostream& diag) {
    try {
        cfg.validate();
        const ModelParams p = cfg.effective_params();
        const Grid grid = Grid::uniform(cfg.a_min, cfg.a_max, cfg.n_points);
        const auto u = make_seed(cfg, grid);
        const auto i_gamma = family::cumulative_integral(p, u);

        const auto ranges = susy::split_node_free(u, 16, 32);
        if (ranges.empty())
            throw ConfigError("seed has no node-free subinterval large enough to verify");
        std::size_t rb = 0, re = 0;
        for (const auto& [b, e] : ranges)
            if (e - b > re - rb) { rb = b; re = e; }
        const auto su = u.restricted(rb, re);
        const auto si = i_gamma.restricted(rb, re);
        const Grid& sg = su.grid;
        const std::size_t n = su.size();
        const auto w = susy::superpotential_from_seed(p, su, "verify-seed");
        const auto vplus = susy::riccati_potential(p, w);

        std::vector<Check> checks;

        // factor-ordering expansion on a smooth probe
        const auto probe = SampledFunction::from_functions(
            sg, [](double a) { return std::sin(a); }, [](double a) { return std::cos(a); });
        checks.push_back({"ordering_identity", ordering_identity_check(p, probe), 1e-8});

        // factorization A+A- = H+ on random smooth functions
        std::mt19937 rng(12345);
        double worst_fact = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            const auto f = random_smooth(sg, rng);
            const auto lhs = susy::apply_aplus(p, w, susy::apply_aminus(p, w, f));
            const auto rhs = apply_hplus(p, f, &vplus.values);
            double scale = interior_max_abs(rhs.values);
            for (std::size_t i = interior_begin(n); i < interior_end(n); ++i)
                worst_fact = std::max(
                    worst_fact, std::abs(lhs.values[i] - rhs.values[i]) / (scale + 1e-300));
        }
        checks.push_back({"factorization_identity", worst_fact, 1e-6});

        // A- annihilates the seed
        {
            const auto r = susy::apply_aminus(p, w, su);
            std::vector<double> scale_terms(n);
            for (std::size_t i = 0; i < n; ++i)
                scale_terms[i] = std::pow(sg[i], -p.q) * su.derivs[i];
            const double scale = interior_max_abs(scale_terms);
            checks.push_back(
                {"seed_annihilation", interior_max_abs(r.values) / (scale + 1e-300), 1e-6});
        }

        // 1/u is the partner zero mode: A-(A+(1/u)) = 0
        {
            std::vector<double> iv(n), id(n);
            for (std::size_t i = 0; i < n; ++i) {
                iv[i] = 1.0 / su.values[i];
                id[i] = -su.derivs[i] / (su.values[i] * su.values[i]);
            }
            const SampledFunction inv(sg, std::move(iv), std::move(id));
            const auto r = susy::apply_aminus(p, w, susy::apply_aplus(p, w, inv));
            std::vector<double> scale_terms(n);
            for (std::size_t i = 0; i < n; ++i)
                scale_terms[i] = std::pow(sg[i], -1.0 - 2.0 * p.q) * potential(p, sg[i]) *
                                 inv.values[i];
            const double scale = interior_max_abs(scale_terms);
            checks.push_back(
                {"partner_zero_mode", interior_max_abs(r.values) / (scale + 1e-300), 1e-6});
        }

        // Riccati closure: rebuilt potential matches V(A)
        {
            const auto v_model = potential_samples(p, sg);
            double scale = interior_max_abs(v_model), worst = 0.0;
            for (std::size_t i = interior_begin(n); i < interior_end(n); ++i)
                worst = std::max(worst,
                                 std::abs(vplus.values[i] - v_model[i]) / (scale + 1e-300));
            checks.push_back({"riccati_closure", worst, 1e-5});
        }

        // Bernoulli equation residual with a finite-difference y'
        {
            const double lam = cfg.lambdas.empty() ? 1.0 : cfg.lambdas.front();
            family::validate_lambda(lam, si.values.back(), cfg.allow_negative_lambda);
            const auto y = family::bernoulli_solution(p, su, si, lam);
            const auto yp = fd_derivative(sg, y.values);
            double scale = 0.0, worst = 0.0;
            std::vector<double> res(n, 0.0), den(n, 0.0);
            for (std::size_t i = interior_begin(n); i < interior_end(n); ++i) {
                const double aq = std::pow(sg[i], p.q);
                const double drive = 2.0 * w.values[i] * aq * y.values[i];
                res[i] = yp[i] - drive - aq;
                scale = std::max(scale, std::abs(yp[i]) + std::abs(drive) + aq);
            }
            for (std::size_t i = interior_begin(n); i < interior_end(n); ++i)
                worst = std::max(worst, std::abs(res[i]) / (scale + 1e-300));
            checks.push_back({"bernoulli_residual", worst, 1e-6});
        }

        // per-lambda family checks
        const std::vector<double> lams = cfg.lambdas.empty() ? std::vector<double>{1.0}
                                                             : cfg.lambdas;
        for (double lam : lams) {
            family::validate_lambda(lam, si.values.back(), cfg.allow_negative_lambda);
            auto w_hat = family::shifted_superpotential(p, w, su, si, lam);
            if (cfg.inject_noise > 0.0) {
                double wmax = 0.0;
                for (double v : w_hat.values) wmax = std::max(wmax, std::abs(v));
                for (std::size_t i = 0; i < w_hat.values.size(); ++i)
                    w_hat.values[i] += cfg.inject_noise * wmax * (i % 2 ? 1.0 : -1.0);
            }
            const double route =
                family::family_potential_route_difference(p, w, w_hat, su, si, lam);
            checks.push_back(
                {"two_route_potential[lambda=" + fmt_short(lam) + "]", route, 1e-6});

            const auto member = family::build_family_member(p, w, su, si, lam,
                                                            cfg.allow_negative_lambda);
            checks.push_back({"family_residual[lambda=" + fmt_short(lam) + "]",
                              family::verify_family_member(p, member), 1e-5});
        }

        nlohmann::json report;
        bool all_pass = true;
        report["checks"] = nlohmann::json::array();
        for (const auto& c : checks) {
            report["checks"].push_back({{"name", c.name},
                                        {"residual", c.residual},
                                        {"threshold", c.threshold},
                                        {"pass", c.pass()}});
            all_pass = all_pass && c.pass();
            diag << (c.pass() ? "pass " : "FAIL ") << c.name << " residual=" << c.residual
                 << " threshold=" << c.threshold << "\n";
        }
        for (const auto& [k, v] : cfg.provenance("verify")) report["config"][k] = v;
        const std::string path = cfg.output_path.empty() ? "verify.json" : cfg.output_path;
        std::ofstream out(path);
        out << report.dump(2) << "\n";
        return all_pass ? kExitOk : kExitVerification;
    } catch (const IntegrationError& e) {
        diag << "integration failed: " << e.what()
             << " (last good A = " << fmt_short(e.last_good_a()) << ")\n";
        return kExitIntegration;
    } catch (const std::exception& e) {
        return map_error(e, diag);
    }
}

}  // namespace wdw::cli
