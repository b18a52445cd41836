// Run configurations, figure data, analytic-vs-numeric comparison and audit

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bhsim/fock.hpp"
#include "bhsim/params.hpp"

namespace bhsim::experiment {

enum class Command { figure1, figure2, compare, simulate, audit };

Command parse_command(const std::string& name);
std::string command_name(Command command);

// How the purity exponent is read: exp(-4 r) or the alternative exp(-r).
enum class PurityReading { factor_two, half_delta };

struct RunConfig {
    Command command{Command::figure1};
    ModelParams params;
    std::vector<double> zeta_list;
    double n_thermal{0.5}; // half-convention symplectic eigenvalue of the initial thermal part
    double t_end{4.0};
    double dt{0.05};
    int n_max{12};
    std::filesystem::path output_dir{"bhsim_out"};
    bool emit_svg{false};
    PurityReading purity_reading{PurityReading::factor_two};
    int record_every{10}; // integrator steps between recorded rows
    int samples{200};     // Simon-vs-PPT samples in the audit
    unsigned seed{20240611};

    // Throws std::invalid_argument unless t_end > 0, dt > 0, n_max >= 4 and n_thermal >= 0.5.
    void validate() const;
};

// Defaults per command: figure1 uses zeta in {0.1, 0.25, 0.5, 0.75}, figure2 {1, 0.75, 0.5, 0.25},
// both with omega = 0.25, delta0 = 0.25, n = 0.5 on [0, 4].
RunConfig default_config(Command command);

// Fields absent from the document keep the command defaults.
RunConfig config_from_json(const std::string& json_text, Command command);
RunConfig load_config(const std::filesystem::path& file, Command command);

// ---------------------------------------------------------------------------

// Uniform grid t_k = k * dt on [0, t_end]; the last point is t_end.
std::vector<double> time_grid(double t_end, double dt);

struct Figure1Curve {
    double zeta;
    std::vector<double> t, r, logneg_raw, logneg_clamped;
};

struct Figure2Curve {
    double zeta;
    std::vector<double> t, purity;
};

std::vector<Figure1Curve> figure1_curves(const RunConfig& config);
std::vector<Figure2Curve> figure2_curves(const RunConfig& config);

double analytic_purity(const ModelParams& params, double zeta, double t, PurityReading reading);

// Two-mode squeezed thermal state with <ab> = delta0 and occupations n_thermal - 1/2.
fock::DensityMatrix initial_state(const RunConfig& config);

struct CompareRow {
    double t;
    fock::cd delta_analytic;
    fock::cd delta_numeric;
    double purity_analytic;
    double purity_numeric;
    double abs_error;
};

struct CompareResult {
    std::vector<CompareRow> rows;
    double max_leakage;
    double max_trace_error;
    std::vector<std::string> warnings;
};

// Numeric evolution under the Mott Hamiltonian with pair loss next to the short-time field.
CompareResult compare(const RunConfig& config);

struct AuditCheck {
    std::string name;
    double residual;
    double tolerance;
    bool passed;
    std::string detail;
};

std::vector<AuditCheck> audit_checks(const RunConfig& config);

// Text shipped with the build describing sign and ordering conventions.
const char* conventions_text();

// ---------------------------------------------------------------------------

struct RunResult {
    int exit_code{0};
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
    std::string report; // audit text, empty otherwise
};

// Writes CSV (one file per curve), manifest.json and optional SVG into output_dir.
RunResult run_figure1(const RunConfig& config);
RunResult run_figure2(const RunConfig& config);
RunResult run_compare(const RunConfig& config);
RunResult run_simulate(const RunConfig& config);
RunResult run_audit(const RunConfig& config);
RunResult run(const RunConfig& config);

// "%.17g" formatting shared by every CSV writer.
std::string format_number(double value);

} // namespace bhsim::experiment
