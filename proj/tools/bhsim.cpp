// Command-line front end for figure runs, comparisons, simulations and the audit

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bhsim/experiment.hpp"

namespace ex = bhsim::experiment;

int main(int argc, char** argv)
{
    CLI::App app{"Dissipative two-site Bose-Hubbard simulator"};
    app.set_version_flag("--version", "bhsim 0.1.0");

    std::string command;
    std::string config_file;
    std::optional<double> omega, delta0, kappa, u, n_thermal, t_end, dt;
    std::optional<int> n_max;
    std::optional<std::string> out_dir;
    std::vector<double> zeta;
    bool svg = false;

    app.add_option("command", command, "figure1 | figure2 | compare | simulate | audit")
        ->required()
        ->check(CLI::IsMember({"figure1", "figure2", "compare", "simulate", "audit"}));
    app.add_option("--config", config_file, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--omega", omega, "on-site frequency");
    app.add_option("--delta0", delta0, "initial background field <ab>(0)");
    app.add_option("--kappa", kappa, "pair-loss rate");
    app.add_option("--u", u, "cross-mode interaction");
    app.add_option("--zeta", zeta, "damping values for figure runs")->delimiter(',');
    app.add_option("--n", n_thermal, "thermal symplectic eigenvalue (vacuum 0.5)");
    app.add_option("--t-end", t_end, "final time");
    app.add_option("--dt", dt, "time step or sampling interval");
    app.add_option("--nmax", n_max, "Fock cutoff per mode");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--svg", svg, "also write SVG charts");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cmd = ex::parse_command(command);
        ex::RunConfig cfg = config_file.empty() ? ex::default_config(cmd) : ex::load_config(config_file, cmd);
        if (omega) cfg.params.omega = *omega;
        if (delta0) cfg.params.delta0 = *delta0;
        if (kappa) cfg.params.kappa = *kappa;
        if (u) cfg.params.U = *u;
        if (!zeta.empty()) cfg.zeta_list = zeta;
        if (n_thermal) cfg.n_thermal = *n_thermal;
        if (t_end) cfg.t_end = *t_end;
        if (dt) cfg.dt = *dt;
        if (n_max) cfg.n_max = *n_max;
        if (out_dir) cfg.output_dir = *out_dir;
        if (svg) cfg.emit_svg = true;
        cfg.validate();

        const auto result = ex::run(cfg);
        if (!result.report.empty()) std::cout << result.report;
        for (const auto& f : result.files) std::cout << "wrote " << f.string() << "\n";
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        return result.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "bhsim: " << e.what() << "\n";
        return 1;
    }
}
