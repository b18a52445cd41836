// Figure reproduction, comparison runs, audit and file output

#include "bhsim/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "bhsim/conventions.hpp"
#include "bhsim/gaussian.hpp"
#include "bhsim/lindblad.hpp"
#include "bhsim/svg.hpp"
#include "bhsim/tfd.hpp"

namespace bhsim::experiment {

namespace fs = std::filesystem;
using json = nlohmann::json;
using fock::cd;

Command parse_command(const std::string& name)
{
    if (name == "figure1") return Command::figure1;
    if (name == "figure2") return Command::figure2;
    if (name == "compare") return Command::compare;
    if (name == "simulate") return Command::simulate;
    if (name == "audit") return Command::audit;
    throw std::invalid_argument("unknown command: " + name);
}

std::string command_name(Command command)
{
    switch (command) {
    case Command::figure1: return "figure1";
    case Command::figure2: return "figure2";
    case Command::compare: return "compare";
    case Command::simulate: return "simulate";
    case Command::audit: return "audit";
    }
    return "unknown";
}

void RunConfig::validate() const
{
    params.validate();
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("RunConfig: t_end must be > 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("RunConfig: dt must be > 0");
    if (n_max < 4) throw std::invalid_argument("RunConfig: n_max must be >= 4");
    if (!(n_thermal >= 0.5)) throw std::invalid_argument("RunConfig: n_thermal must be >= 0.5");
    if (record_every < 1) throw std::invalid_argument("RunConfig: record_every must be >= 1");
    if (samples < 1) throw std::invalid_argument("RunConfig: samples must be >= 1");
    for (double z : zeta_list) {
        if (!(z >= 0.0) || !std::isfinite(z)) throw std::invalid_argument("RunConfig: zeta values must be >= 0");
    }
    if ((command == Command::figure1 || command == Command::figure2) && zeta_list.empty()) {
        throw std::invalid_argument("RunConfig: zeta_list must not be empty");
    }
}

RunConfig default_config(Command command)
{
    RunConfig c;
    c.command = command;
    c.params.omega = 0.25;
    c.params.delta0 = 0.25;
    c.n_thermal = 0.5;
    switch (command) {
    case Command::figure1:
        c.zeta_list = {0.1, 0.25, 0.5, 0.75};
        break;
    case Command::figure2:
        c.zeta_list = {1.0, 0.75, 0.5, 0.25};
        break;
    case Command::compare:
        c.t_end = 0.2;
        c.dt = 1e-3;
        c.n_max = 12;
        c.record_every = 10;
        break;
    case Command::simulate:
        c.t_end = 1.0;
        c.dt = 1e-3;
        c.n_max = 10;
        c.record_every = 50;
        break;
    case Command::audit:
        c.n_max = 12;
        break;
    }
    return c;
}

RunConfig config_from_json(const std::string& json_text, Command command)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");

    RunConfig c = default_config(command);
    for (const auto& [key, value] : doc.items()) {
        if (key == "command") {
            if (parse_command(value.get<std::string>()) != command) {
                throw std::invalid_argument("config: command field disagrees with the requested command");
            }
        } else if (key == "params") {
            for (const auto& [pk, pv] : value.items()) {
                if (pk == "omega") c.params.omega = pv.get<double>();
                else if (pk == "J") c.params.J = pv.get<double>();
                else if (pk == "U_a") c.params.U_a = pv.get<double>();
                else if (pk == "U_b") c.params.U_b = pv.get<double>();
                else if (pk == "U") c.params.U = pv.get<double>();
                else if (pk == "kappa") c.params.kappa = pv.get<double>();
                else if (pk == "delta0") c.params.delta0 = pv.get<double>();
                else if (pk == "include_C_factor") c.params.include_C_factor = pv.get<bool>();
                else throw std::invalid_argument("config: unknown params field " + pk);
            }
        } else if (key == "zeta_list") {
            c.zeta_list = value.get<std::vector<double>>();
        } else if (key == "n_thermal") {
            c.n_thermal = value.get<double>();
        } else if (key == "t_end") {
            c.t_end = value.get<double>();
        } else if (key == "dt") {
            c.dt = value.get<double>();
        } else if (key == "n_max") {
            c.n_max = value.get<int>();
        } else if (key == "output_dir") {
            c.output_dir = value.get<std::string>();
        } else if (key == "emit_svg") {
            c.emit_svg = value.get<bool>();
        } else if (key == "purity_reading") {
            const auto s = value.get<std::string>();
            if (s == "factor_two") c.purity_reading = PurityReading::factor_two;
            else if (s == "half_delta") c.purity_reading = PurityReading::half_delta;
            else throw std::invalid_argument("config: purity_reading must be factor_two or half_delta");
        } else if (key == "record_every") {
            c.record_every = value.get<int>();
        } else if (key == "samples") {
            c.samples = value.get<int>();
        } else if (key == "seed") {
            c.seed = value.get<unsigned>();
        } else {
            throw std::invalid_argument("config: unknown field " + key);
        }
    }
    return c;
}

RunConfig load_config(const fs::path& file, Command command)
{
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open config " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str(), command);
}

// ---------------------------------------------------------------------------

std::string format_number(double value) { return fmt::format("{:.17g}", value); }

std::vector<double> time_grid(double t_end, double dt)
{
    if (!(t_end > 0.0) || !(dt > 0.0)) throw std::invalid_argument("time_grid: t_end and dt must be > 0");
    const auto n = static_cast<long>(std::ceil(t_end / dt - 1e-9));
    std::vector<double> t;
    for (long k = 0; k < n; ++k) t.push_back(static_cast<double>(k) * dt);
    while (t.size() > 1 && t.back() >= t_end * (1.0 - 1e-12)) t.pop_back();
    t.push_back(t_end);
    return t;
}

double analytic_purity(const ModelParams& params, double zeta, double t, PurityReading reading)
{
    const double r = tfd::squeeze_parameter_r(params.delta0, params.omega, zeta, t);
    return reading == PurityReading::factor_two ? std::exp(-4.0 * r) : std::exp(-r);
}

std::vector<Figure1Curve> figure1_curves(const RunConfig& config)
{
    config.validate();
    const auto grid = time_grid(config.t_end, config.dt);
    std::vector<Figure1Curve> curves;
    for (double zeta : config.zeta_list) {
        Figure1Curve c{zeta, grid, {}, {}, {}};
        for (double t : grid) {
            const double r = tfd::squeeze_parameter_r(config.params.delta0, config.params.omega, zeta, t);
            c.r.push_back(r);
            c.logneg_raw.push_back(gaussian::squeeze_logneg(r, config.n_thermal, false));
            c.logneg_clamped.push_back(gaussian::squeeze_logneg(r, config.n_thermal, true));
        }
        curves.push_back(std::move(c));
    }
    return curves;
}

std::vector<Figure2Curve> figure2_curves(const RunConfig& config)
{
    config.validate();
    const auto grid = time_grid(config.t_end, config.dt);
    std::vector<Figure2Curve> curves;
    for (double zeta : config.zeta_list) {
        Figure2Curve c{zeta, grid, {}};
        for (double t : grid) c.purity.push_back(analytic_purity(config.params, zeta, t, config.purity_reading));
        curves.push_back(std::move(c));
    }
    return curves;
}

fock::DensityMatrix initial_state(const RunConfig& config)
{
    const auto basis = fock::build_basis(config.n_max);
    const double nbar = config.n_thermal - 0.5;
    return fock::squeezed_thermal(basis, nbar, nbar, config.params.delta0);
}

namespace {

lindblad::Trajectory evolve(const RunConfig& config)
{
    const auto rho0 = initial_state(config);
    const auto h = lindblad::build_mott_hamiltonian(config.params, rho0.basis());
    const auto spec = lindblad::LindbladSpec::pair_loss(h, config.params.kappa);
    return lindblad::integrate(spec, rho0, config.t_end, config.dt, config.record_every);
}

} // namespace

CompareResult compare(const RunConfig& config)
{
    config.validate();
    const auto traj = evolve(config);
    CompareResult out{};
    out.max_leakage = traj.max_leakage;
    out.max_trace_error = traj.max_trace_error;
    out.warnings = traj.warnings;
    const double zeta = config.params.damping_composite();
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double t = traj.times[k];
        const auto& rec = traj.records[k];
        CompareRow row{};
        row.t = t;
        row.delta_analytic = tfd::delta_short_time(config.params, t);
        row.delta_numeric = rec.delta;
        row.purity_analytic = analytic_purity(config.params, zeta, t, config.purity_reading);
        row.purity_numeric = rec.purity;
        row.abs_error = std::abs(row.delta_analytic - row.delta_numeric);
        out.rows.push_back(row);
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

double interior_max(const fock::OperatorMatrix& op, int limit)
{
    return op.restricted(limit).cwiseAbs().maxCoeff();
}

AuditCheck make_check(std::string name, double residual, double tolerance, std::string detail = {})
{
    return {std::move(name), residual, tolerance, residual < tolerance, std::move(detail)};
}

cd random_disk(std::mt19937_64& rng, double radius)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double rad = radius * std::sqrt(u(rng));
    const double ang = 2.0 * std::numbers::pi * u(rng);
    return std::polar(rad, ang);
}

// (zeta3, zeta_plus, zeta_minus) drawn uniformly in the complex 3-ball of the given radius.
tfd::SU11Coeffs random_su11(std::mt19937_64& rng, double radius)
{
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::array<double, 6> v{};
    double norm = 0.0;
    for (double& x : v) {
        x = g(rng);
        norm += x * x;
    }
    const double scale = radius * std::pow(u(rng), 1.0 / 6.0) / std::sqrt(norm);
    return tfd::make_su11(scale * cd(v[0], v[1]), scale * cd(v[2], v[3]), scale * cd(v[4], v[5]));
}

gaussian::CovarianceMatrix4 random_squeezed_thermal(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> nu(0.5, 3.0);
    std::uniform_real_distribution<double> sq(0.0, 1.5);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    const auto th = gaussian::thermal_covariance(nu(rng), nu(rng), gaussian::Convention::half);
    const auto sqz = gaussian::evolve_covariance(gaussian::squeeze_symplectic(sq(rng)), th);
    return gaussian::evolve_covariance(gaussian::local_rotation(ang(rng), ang(rng)), sqz);
}

} // namespace

std::vector<AuditCheck> audit_checks(const RunConfig& config)
{
    config.validate();
    using namespace fock;
    const auto basis = build_basis(config.n_max);
    const int inner = config.n_max - 1;
    const auto id = OperatorMatrix::identity(basis);
    const auto kp = pair_creator(basis);
    const auto km = pair_annihilator(basis);
    const auto k0 = pair_weight(basis);
    const auto n = total_number(basis);
    std::vector<AuditCheck> checks;

    const auto a = annihilator(basis, Mode::A);
    const auto b = annihilator(basis, Mode::B);
    checks.push_back(make_check("[a, a^dag] = 1", interior_max(commutator(a, adjoint(a)) - id, inner), 1e-12));
    checks.push_back(make_check("[b, b^dag] = 1", interior_max(commutator(b, adjoint(b)) - id, inner), 1e-12));
    checks.push_back(make_check("[K-, K+] = N + 1", interior_max(commutator(km, kp) - (n + id), inner), 1e-12));
    checks.push_back(make_check("[K0, K+] = K+", interior_max(commutator(k0, kp) - kp, inner), 1e-12));
    checks.push_back(make_check("[K0, K-] = -K-", interior_max(commutator(k0, km) + km, inner), 1e-12));
    checks.push_back(make_check("[N, K+] = 2 K+", interior_max(commutator(n, kp) - cd(2.0) * kp, inner), 1e-12));
    checks.push_back(make_check("[N, K-] = -2 K-", interior_max(commutator(n, km) + cd(2.0) * km, inner), 1e-12));

    double bog = 0.0;
    int bog_points = 0;
    for (double omega : {0.25, 0.5, 1.0, 2.0}) {
        for (double u : {0.0, 0.5, 1.0, 2.0}) {
            for (double d0 : {0.05, 0.25, 0.5}) {
                if (omega * omega <= 0.25 * u * u * d0 * d0) continue;
                const auto p = tfd::bogolyubov(omega, u, d0);
                bog = std::max(bog, std::abs(std::norm(p.mu) - std::norm(p.nu) - 1.0));
                ++bog_points;
            }
        }
    }
    checks.push_back(make_check("|mu|^2 - |nu|^2 = 1", bog, 1e-10, fmt::format("{} points", bog_points)));

    std::mt19937_64 rng(config.seed);
    double branch = 0.0;
    double phi_sq = 0.0;
    for (int k = 0; k < 20; ++k) {
        const auto z = tfd::make_su11(random_disk(rng, 0.5), random_disk(rng, 0.5), random_disk(rng, 0.5));
        phi_sq = std::max(phi_sq, std::abs(z.phi * z.phi - (0.25 * z.zeta3 * z.zeta3 - z.zeta_plus * z.zeta_minus)));
        const auto g1 = tfd::gamma_from_zeta(z, z.phi);
        const auto g2 = tfd::gamma_from_zeta(z, -z.phi);
        branch = std::max({branch, std::abs(g1.gamma3 - g2.gamma3), std::abs(g1.gamma_plus - g2.gamma_plus),
                           std::abs(g1.gamma_minus - g2.gamma_minus)});
    }
    checks.push_back(make_check("phi^2 = zeta3^2/4 - zeta+ zeta-", phi_sq, 1e-12));
    checks.push_back(make_check("gamma independent of the root sign", branch, 1e-10));

    double interior = 0.0;
    double full = 0.0;
    const int limit = tfd::disentanglement_interior_limit(config.n_max);
    for (int k = 0; k < 20; ++k) {
        const auto z = random_su11(rng, 0.2);
        const auto res = tfd::disentanglement_residual(basis, z);
        interior = std::max(interior, res.interior);
        full = std::max(full, res.full);
    }
    checks.push_back(make_check("disentangled product = exp(X) on interior", interior, 1e-8,
                                fmt::format("n <= {}, full-space residual {:.3e}", limit, full)));

    int agree = 0;
    int drawn = 0;
    int entangled = 0;
    while (drawn < config.samples) {
        const auto v = random_squeezed_thermal(rng);
        const auto rep = gaussian::simon_criterion(v);
        if (std::abs(rep.margin) <= 1e-9) continue;
        ++drawn;
        const bool ppt_separable = gaussian::pt_min_symplectic_eigenvalue(v) >= 0.5;
        if (!ppt_separable) ++entangled;
        if (ppt_separable == rep.separable) ++agree;
    }
    checks.push_back(make_check("Simon verdict = PPT verdict", static_cast<double>(drawn - agree), 0.5,
                                fmt::format("{}/{} agree, {} entangled", agree, drawn, entangled)));
    return checks;
}

const char* conventions_text() { return generated::kConventionsText; }

// ---------------------------------------------------------------------------

namespace {

std::string format_label(double v) { return fmt::format("{}", v); }

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

json params_json(const ModelParams& p)
{
    return {{"omega", p.omega}, {"J", p.J},         {"U_a", p.U_a},       {"U_b", p.U_b},
            {"U", p.U},         {"kappa", p.kappa}, {"delta0", p.delta0}, {"include_C_factor", p.include_C_factor}};
}

json config_json(const RunConfig& c)
{
    return {{"command", command_name(c.command)},
            {"params", params_json(c.params)},
            {"zeta_list", c.zeta_list},
            {"n_thermal", c.n_thermal},
            {"t_end", c.t_end},
            {"dt", c.dt},
            {"n_max", c.n_max},
            {"emit_svg", c.emit_svg},
            {"purity_reading", c.purity_reading == PurityReading::factor_two ? "factor_two" : "half_delta"},
            {"record_every", c.record_every},
            {"samples", c.samples},
            {"seed", c.seed}};
}

class OutputSet {
public:
    explicit OutputSet(const RunConfig& config) : config_(config)
    {
        fs::create_directories(config.output_dir);
    }

    void add(const std::string& name, const std::string& content)
    {
        const fs::path p = config_.output_dir / name;
        write_file(p, content);
        result_.files.push_back(p);
        names_.push_back(name);
    }

    RunResult finish(json extra = json::object())
    {
        json manifest = config_json(config_);
        manifest["files"] = names_;
        for (const auto& [k, v] : extra.items()) manifest[k] = v;
        const fs::path p = config_.output_dir / "manifest.json";
        write_file(p, manifest.dump(2) + "\n");
        result_.files.push_back(p);
        return std::move(result_);
    }

    RunResult& result() { return result_; }

private:
    const RunConfig& config_;
    RunResult result_;
    std::vector<std::string> names_;
};

} // namespace

RunResult run_figure1(const RunConfig& config)
{
    const auto curves = figure1_curves(config);
    OutputSet out(config);
    std::vector<svg::Series> series;
    for (const auto& c : curves) {
        std::string csv = "t,r,E_N_raw,E_N_clamped\n";
        for (std::size_t k = 0; k < c.t.size(); ++k) {
            csv += fmt::format("{},{},{},{}\n", format_number(c.t[k]), format_number(c.r[k]),
                               format_number(c.logneg_raw[k]), format_number(c.logneg_clamped[k]));
        }
        out.add("figure1_zeta_" + format_label(c.zeta) + ".csv", csv);
        series.push_back({"zeta = " + format_label(c.zeta), c.t, c.logneg_raw});
    }
    if (config.emit_svg) out.add("figure1.svg", svg::line_chart(series, "t", "E_N (raw)", "Entanglement vs time"));
    return out.finish();
}

RunResult run_figure2(const RunConfig& config)
{
    const auto curves = figure2_curves(config);
    OutputSet out(config);
    std::vector<svg::Series> series;
    for (const auto& c : curves) {
        std::string csv = "t,purity_analytic\n";
        for (std::size_t k = 0; k < c.t.size(); ++k) {
            csv += fmt::format("{},{}\n", format_number(c.t[k]), format_number(c.purity[k]));
        }
        out.add("figure2_zeta_" + format_label(c.zeta) + ".csv", csv);
        series.push_back({"zeta = " + format_label(c.zeta), c.t, c.purity});
    }
    if (config.emit_svg) out.add("figure2.svg", svg::line_chart(series, "t", "Tr rho^2", "Purity vs time"));
    return out.finish();
}

RunResult run_compare(const RunConfig& config)
{
    const auto cmp = compare(config);
    OutputSet out(config);
    const bool warned = !cmp.warnings.empty();
    std::string csv = fmt::format("# max_leakage={},max_trace_error={},warning={}\n", format_number(cmp.max_leakage),
                                  format_number(cmp.max_trace_error), warned ? "yes" : "no");
    csv += "t,delta_analytic_re,delta_analytic_im,delta_numeric_re,delta_numeric_im,purity_analytic,"
           "purity_numeric,abs_error_delta\n";
    std::vector<double> t, err;
    for (const auto& r : cmp.rows) {
        csv += fmt::format("{},{},{},{},{},{},{},{}\n", format_number(r.t), format_number(r.delta_analytic.real()),
                           format_number(r.delta_analytic.imag()), format_number(r.delta_numeric.real()),
                           format_number(r.delta_numeric.imag()), format_number(r.purity_analytic),
                           format_number(r.purity_numeric), format_number(r.abs_error));
        t.push_back(r.t);
        err.push_back(r.abs_error);
    }
    out.add("compare.csv", csv);
    if (config.emit_svg) {
        out.add("compare.svg", svg::line_chart({{"|delta_analytic - delta_numeric|", t, err}}, "t",
                                               "abs error", "Background field error"));
    }
    out.result().warnings = cmp.warnings;
    out.result().exit_code = warned ? 2 : 0;
    return out.finish({{"max_leakage", cmp.max_leakage}, {"warnings", cmp.warnings}});
}

RunResult run_simulate(const RunConfig& config)
{
    config.validate();
    const auto traj = evolve(config);
    OutputSet out(config);
    const bool warned = traj.warning;
    std::string csv = fmt::format("# max_leakage={},max_trace_error={},warning={}\n", format_number(traj.max_leakage),
                                  format_number(traj.max_trace_error), warned ? "yes" : "no");
    csv += "t,delta_re,delta_im,purity,trace_error,leakage,min_eigenvalue,E_N_ppt\n";
    std::vector<double> t, pur;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto& r = traj.records[k];
        double en = std::nan("");
        try {
            en = gaussian::ppt_logneg(r.covariance);
        } catch (const std::exception&) {
        }
        csv += fmt::format("{},{},{},{},{},{},{},{}\n", format_number(traj.times[k]), format_number(r.delta.real()),
                           format_number(r.delta.imag()), format_number(r.purity), format_number(r.trace_error),
                           format_number(r.leakage), format_number(r.min_eigenvalue), format_number(en));
        t.push_back(traj.times[k]);
        pur.push_back(r.purity);
    }
    out.add("simulate.csv", csv);
    if (config.emit_svg) out.add("simulate.svg", svg::line_chart({{"Tr rho^2", t, pur}}, "t", "purity", "Purity"));
    out.result().warnings = traj.warnings;
    out.result().exit_code = warned ? 2 : 0;
    return out.finish({{"max_leakage", traj.max_leakage}, {"warnings", traj.warnings}});
}

RunResult run_audit(const RunConfig& config)
{
    const auto checks = audit_checks(config);
    int passed = 0;
    std::string report = fmt::format("bhsim audit: n_max={}, seed={}\n\n", config.n_max, config.seed);
    for (const auto& c : checks) {
        if (c.passed) ++passed;
        report += fmt::format("{}  {:<44} residual {:.3e} (tol {:.0e})", c.passed ? "PASS" : "FAIL", c.name,
                              c.residual, c.tolerance);
        if (!c.detail.empty()) report += "  [" + c.detail + "]";
        report += "\n";
    }
    report += fmt::format("\n{}/{} checks passed\n\n", passed, checks.size());
    report += conventions_text();

    OutputSet out(config);
    out.add("audit.txt", report);
    out.result().report = report;
    out.result().exit_code = passed == static_cast<int>(checks.size()) ? 0 : 1;
    return out.finish({{"checks_passed", passed}, {"checks_total", checks.size()}});
}

RunResult run(const RunConfig& config)
{
    switch (config.command) {
    case Command::figure1: return run_figure1(config);
    case Command::figure2: return run_figure2(config);
    case Command::compare: return run_compare(config);
    case Command::simulate: return run_simulate(config);
    case Command::audit: return run_audit(config);
    }
    throw std::invalid_argument("run: unknown command");
}

} // namespace bhsim::experiment
