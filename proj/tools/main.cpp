// Command-line front end: solve the Wheeler-DeWitt equation, build the
// strictly isospectral family, or run the verification battery.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wdw/runconfig.hpp"

namespace {

struct OptionalInputs {
    double msq = 0.0;
    double init_value = 0.0;
    double init_deriv = 0.0;
};

void add_common_flags(CLI::App* cmd, wdw::cli::RunConfig& cfg, OptionalInputs& opt, bool& fig1,
                      std::string& format) {
    cmd->add_flag("--fig1", fig1,
                  "preset: gamma=-1 kappa=1 q=1 m^2=4 c1=c2=1 closed form, A in [0.6,3], "
                  "lambda = 1,11,61,161,411");
    cmd->add_option("--gamma", cfg.model.gamma, "barotropic index");
    cmd->add_option("--kappa", cfg.model.kappa, "curvature index (-1, 0, +1)");
    cmd->add_option("--cc", cfg.model.cc, "cosmological constant Lambda");
    cmd->add_option("--matter", cfg.model.matter, "matter coupling pi*G*M_gamma (>= 0)");
    cmd->add_option("--msq", opt.msq, "set matter so that m^2 = -cc/3 + (8/3) matter");
    cmd->add_option("--q", cfg.model.q, "factor-ordering parameter");
    cmd->add_option("--a-min", cfg.a_min, "left grid edge (> 0)");
    cmd->add_option("--a-max", cfg.a_max, "right grid edge");
    cmd->add_option("--n", cfg.n_points, "number of grid points (>= 16)");
    cmd->add_flag("--closed-form", cfg.closed_form, "seed from the closed form for these parameters");
    cmd->add_option("--c1", cfg.c1, "first superposition coefficient");
    cmd->add_option("--c2", cfg.c2, "second superposition coefficient");
    cmd->add_option("--init-value", opt.init_value, "initial u at a-min (numeric seeding)");
    cmd->add_option("--init-deriv", opt.init_deriv, "initial du/dA at a-min (numeric seeding)");
    cmd->add_option("--out", cfg.output_path, "output path");
    cmd->add_option("--format", format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

void collect_optionals(const CLI::App* cmd, const OptionalInputs& opt, wdw::cli::RunConfig& cfg) {
    if (cmd->count("--msq")) cfg.msq_target = opt.msq;
    if (cmd->count("--init-value")) cfg.init_value = opt.init_value;
    if (cmd->count("--init-deriv")) cfg.init_deriv = opt.init_deriv;
}

void apply_fig1(wdw::cli::RunConfig& cfg, const CLI::App* cmd) {
    const wdw::cli::RunConfig preset = wdw::cli::fig1_config();
    if (cmd->count("--gamma") == 0) cfg.model.gamma = preset.model.gamma;
    if (cmd->count("--kappa") == 0) cfg.model.kappa = preset.model.kappa;
    if (cmd->count("--cc") == 0) cfg.model.cc = preset.model.cc;
    if (cmd->count("--q") == 0) cfg.model.q = preset.model.q;
    if (cmd->count("--msq") == 0 && cmd->count("--matter") == 0)
        cfg.msq_target = preset.msq_target;
    if (cmd->count("--a-min") == 0) cfg.a_min = preset.a_min;
    if (cmd->count("--a-max") == 0) cfg.a_max = preset.a_max;
    if (cmd->count("--n") == 0) cfg.n_points = preset.n_points;
    if (cmd->count("--c1") == 0) cfg.c1 = preset.c1;
    if (cmd->count("--c2") == 0) cfg.c2 = preset.c2;
    const auto* lam = cmd->get_option_no_throw("--lam");
    if (lam && lam->count() == 0) cfg.lambdas = preset.lambdas;
    cfg.closed_form = true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Supersymmetric factorization and strictly isospectral families for the "
                 "barotropic FRW Wheeler-DeWitt equation"};
    app.require_subcommand(1);

    wdw::cli::RunConfig cfg;
    OptionalInputs opt;
    bool fig1 = false;
    std::string format = "csv";

    auto* solve = app.add_subcommand("solve", "solve one Wheeler-DeWitt problem and export A,u,du");
    add_common_flags(solve, cfg, opt, fig1, format);

    auto* family = app.add_subcommand(
        "family", "build the isospectral family: columns A,u,I and u_hat,V_hat per lambda");
    add_common_flags(family, cfg, opt, fig1, format);
    family->add_option("--lam", cfg.lambdas, "family parameter lambda (repeatable)");
    family->add_flag("--allow-negative-lambda", cfg.allow_negative_lambda,
                     "accept lambda <= -1 - I(A_max)");

    auto* verify = app.add_subcommand("verify", "run the factorization/family invariant battery");
    add_common_flags(verify, cfg, opt, fig1, format);
    verify->add_option("--lam", cfg.lambdas, "family parameter lambda (repeatable)");
    verify->add_flag("--allow-negative-lambda", cfg.allow_negative_lambda);
    verify->add_option("--inject-noise", cfg.inject_noise)->group("");  // test hook

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : wdw::cli::kExitConfig;
    }

    cfg.format = (format == "json") ? wdw::cli::OutputFormat::Json : wdw::cli::OutputFormat::Csv;

    CLI::App* active = solve->parsed() ? solve : (family->parsed() ? family : verify);
    collect_optionals(active, opt, cfg);
    if (fig1) apply_fig1(cfg, active);

    if (solve->parsed()) return wdw::cli::run_solve(cfg, std::cerr);
    if (family->parsed()) return wdw::cli::run_family(cfg, std::cerr);
    return wdw::cli::run_verify(cfg, std::cerr);
}
