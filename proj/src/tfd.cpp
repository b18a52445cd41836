// Bogolyubov coefficients, background field, su(1,1) ordered products

#include "bhsim/tfd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

#include "bhsim/errors.hpp"

namespace bhsim::tfd {

namespace {

constexpr cd kI{0.0, 1.0};

// sinh(phi)/phi, even in phi.
cd sinhc(cd phi)
{
    if (std::abs(phi) < 1e-4) {
        const cd p2 = phi * phi;
        return 1.0 + p2 / 6.0 + p2 * p2 / 120.0;
    }
    return std::sinh(phi) / phi;
}

void require_time(double t, const char* where)
{
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument(std::string(where) + ": t must be >= 0");
}

// exp(gamma K+) from its matrix elements
//     <n_a + k, n_b + k| exp(gamma K+) |n_a, n_b> = gamma^k / k! sqrt((n_a + k)! (n_b + k)! / (n_a! n_b!)).
fock::Matrix pair_raising_exponential(const fock::TwoModeBasis& basis, cd gamma)
{
    fock::Matrix m = fock::Matrix::Zero(basis.dim(), basis.dim());
    const int top = basis.n_max();
    for (int na = 0; na <= top; ++na) {
        for (int nb = 0; nb <= top; ++nb) {
            cd term{1.0};
            const Eigen::Index col = basis.index(na, nb);
            for (int k = 0; na + k <= top && nb + k <= top; ++k) {
                if (k > 0) term *= gamma * std::sqrt(double(na + k) * double(nb + k)) / double(k);
                m(basis.index(na + k, nb + k), col) = term;
            }
        }
    }
    return m;
}

} // namespace

BogolyubovPair bogolyubov(double omega, double U, double delta0)
{
    const double gap = omega * omega - 0.25 * U * U * delta0 * delta0;
    if (!(gap > 0.0)) {
        throw DegenerateDiagonalization("bogolyubov: requires omega^2 > U^2 delta0^2 / 4");
    }
    const double root = std::sqrt(gap);
    BogolyubovPair p{};
    p.mu = omega / root;
    p.nu = 0.5 * U * delta0 / root;
    p.r = std::atanh(p.nu.real() / p.mu.real());
    return p;
}

SU11Coeffs make_su11(cd zeta3, cd zeta_plus, cd zeta_minus)
{
    return {zeta3, zeta_plus, zeta_minus, std::sqrt(0.25 * zeta3 * zeta3 - zeta_plus * zeta_minus)};
}

double background_prefactor(const ModelParams& params)
{
    if (!params.include_C_factor) return 1.0;
    if (params.omega == 0.0) throw std::domain_error("background_prefactor: C = U/omega with omega = 0");
    return params.U / params.omega;
}

cd delta_short_time(const ModelParams& params, double t)
{
    require_time(t, "delta_short_time");
    return (1.0 + kI * params.omega * t) * (background_prefactor(params) * params.delta0);
}

// ---------------------------------------------------------------------------

BackgroundField BackgroundField::short_time(const ModelParams& params, double t_end, int n_grid)
{
    params.validate();
    if (!(t_end > 0.0)) throw std::invalid_argument("BackgroundField::short_time: t_end must be > 0");
    if (n_grid < 2) throw std::invalid_argument("BackgroundField::short_time: n_grid must be >= 2");
    BackgroundField f;
    f.mode_ = FieldMode::short_time_closed_form;
    f.amplitude_ = background_prefactor(params) * params.delta0;
    f.omega_ = params.omega;
    const double h = t_end / (n_grid - 1);
    for (int k = 0; k < n_grid; ++k) {
        const double t = k == n_grid - 1 ? t_end : k * h;
        f.grid_.push_back(t);
        f.values_.push_back((1.0 + kI * f.omega_ * t) * f.amplitude_);
    }
    f.build_cumulative();
    return f;
}

BackgroundField BackgroundField::sampled(std::vector<double> grid, std::vector<cd> values)
{
    if (grid.size() < 2 || grid.size() != values.size()) {
        throw std::invalid_argument("BackgroundField::sampled: need >= 2 matching samples");
    }
    if (grid.front() != 0.0) throw std::invalid_argument("BackgroundField::sampled: grid must start at 0");
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (!(grid[k] > grid[k - 1])) throw std::invalid_argument("BackgroundField::sampled: grid not increasing");
    }
    BackgroundField f;
    f.mode_ = FieldMode::sampled;
    f.grid_ = std::move(grid);
    f.values_ = std::move(values);
    f.build_cumulative();
    return f;
}

BackgroundField BackgroundField::picard_result(std::vector<double> grid, std::vector<cd> values,
                                               PicardDiagnostics diagnostics)
{
    BackgroundField f = sampled(std::move(grid), std::move(values));
    f.mode_ = FieldMode::picard_iterated;
    f.picard_ = std::move(diagnostics);
    return f;
}

void BackgroundField::build_cumulative()
{
    cumulative_.assign(grid_.size(), cd(0.0));
    for (std::size_t k = 1; k < grid_.size(); ++k) {
        cumulative_[k] = cumulative_[k - 1] + 0.5 * (grid_[k] - grid_[k - 1]) * (values_[k] + values_[k - 1]);
    }
}

bool BackgroundField::covers(double t) const
{
    return t >= 0.0 && t <= grid_.back() * (1.0 + 1e-12);
}

cd BackgroundField::value_at(double t) const
{
    if (!covers(t)) throw std::domain_error("BackgroundField::value_at: t outside the grid");
    if (mode_ == FieldMode::short_time_closed_form) return (1.0 + kI * omega_ * t) * amplitude_;
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    if (it == grid_.end()) return values_.back();
    const auto k = static_cast<std::size_t>(it - grid_.begin());
    const double w = (t - grid_[k - 1]) / (grid_[k] - grid_[k - 1]);
    return (1.0 - w) * values_[k - 1] + w * values_[k];
}

cd BackgroundField::integral(double t) const
{
    if (!covers(t)) throw std::domain_error("BackgroundField::integral: t outside the grid");
    if (mode_ == FieldMode::short_time_closed_form) return amplitude_ * (t + 0.5 * kI * omega_ * t * t);
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    if (it == grid_.end()) return cumulative_.back();
    const auto k = static_cast<std::size_t>(it - grid_.begin());
    const double t0 = grid_[k - 1];
    return cumulative_[k - 1] + 0.5 * (t - t0) * (values_[k - 1] + value_at(t));
}

BackgroundField delta_picard(const ModelParams& params, double t_end, int n_grid, int n_iter,
                             const PicardOptions& options)
{
    params.validate();
    if (n_iter < 1) throw std::invalid_argument("delta_picard: n_iter must be >= 1");
    if (n_grid < 16) throw std::invalid_argument("delta_picard: n_grid must be >= 16");
    if (!(t_end > 0.0)) throw std::invalid_argument("delta_picard: t_end must be > 0");

    const double c_factor = background_prefactor(params);
    const double rate = c_factor * params.delta0;
    const cd coupling = options.kernel_scale * 0.5 * cd(params.U, -params.kappa);
    const auto n = static_cast<std::size_t>(n_grid);
    const double h = t_end / (n_grid - 1);

    std::vector<double> grid(n);
    std::vector<cd> source(n);
    std::vector<double> weight(n); // sinh^2(C delta0 t_k)
    for (std::size_t k = 0; k < n; ++k) {
        grid[k] = k + 1 == n ? t_end : static_cast<double>(k) * h;
        source[k] = delta_short_time(params, grid[k]);
        const double s = std::sinh(rate * grid[k]);
        weight[k] = s * s;
    }

    PicardDiagnostics diag;
    diag.tolerance = options.tolerance;
    std::vector<cd> current = source;
    std::vector<cd> next(n);
    for (int it = 0; it < n_iter; ++it) {
        cd running{0.0};
        next[0] = source[0];
        for (std::size_t k = 1; k < n; ++k) {
            if (options.kernel == KernelForm::outside) {
                running += 0.5 * h * (current[k] + current[k - 1]);
                next[k] = source[k] + coupling * weight[k] * running;
            } else {
                running += 0.5 * h * (weight[k] * current[k] + weight[k - 1] * current[k - 1]);
                next[k] = source[k] + coupling * running;
            }
        }
        double dist = 0.0;
        for (std::size_t k = 0; k < n; ++k) dist = std::max(dist, std::abs(next[k] - current[k]));
        diag.distances.push_back(dist);
        diag.iterations = it + 1;
        std::swap(current, next);
    }
    diag.converged = diag.distances.back() <= options.tolerance;
    return BackgroundField::picard_result(std::move(grid), std::move(current), std::move(diag));
}

// ---------------------------------------------------------------------------

SU11Coeffs zeta_coeffs(const ModelParams& params, double t, const BackgroundField& delta)
{
    require_time(t, "zeta_coeffs");
    if (!delta.covers(t)) throw std::domain_error("zeta_coeffs: background field does not cover t");
    const cd area = delta.integral(t);
    const cd zeta_minus = 0.5 * cd(params.kappa, params.U) * area; // (iU + kappa)/2
    const cd zeta_plus = 0.5 * cd(-params.kappa, params.U) * area; // (iU - kappa)/2
    return make_su11(kI * params.omega * t, zeta_plus, zeta_minus);
}

GammaCoeffs gamma_from_zeta(const SU11Coeffs& z, cd phi)
{
    const cd shc = sinhc(phi);
    const cd ch = std::cosh(phi);
    const cd reduced = ch - 0.5 * z.zeta3 * shc; // (2 phi cosh - zeta3 sinh) / (2 phi)
    if (std::abs(reduced) < 1e-14) {
        throw DisentanglementSingularity("gamma_from_zeta: vanishing denominator");
    }
    GammaCoeffs g;
    g.gamma3 = 1.0 / (reduced * reduced);
    if (std::abs(phi) > 1e-6) {
        const cd sh = std::sinh(phi);
        const cd den = 2.0 * phi * ch - z.zeta3 * sh;
        g.gamma_plus = 2.0 * z.zeta_plus * sh / den;
        g.gamma_minus = 2.0 * z.zeta_minus * sh / den;
        g.gamma3 = 1.0 / std::pow(ch - z.zeta3 / (2.0 * phi) * sh, 2);
    } else {
        g.gamma_plus = z.zeta_plus * shc / reduced;
        g.gamma_minus = z.zeta_minus * shc / reduced;
    }
    return g;
}

GammaCoeffs gamma_from_zeta(const SU11Coeffs& z) { return gamma_from_zeta(z, z.phi); }

ShortTimeGamma gamma_short_time(const ModelParams& params, double t)
{
    require_time(t, "gamma_short_time");
    const double zeta = params.damping_composite();
    ShortTimeGamma out{};
    // iU -+ kappa = -zeta e^{i phase}
    out.phase_plus = std::atan2(-params.U, params.kappa);
    out.phase_minus = std::atan2(-params.U, -params.kappa);
    const double magnitude = -0.5 * params.delta0 * zeta * t * (1.0 + 0.25 * params.omega * params.omega * t * t);
    out.coeffs.gamma_plus = magnitude * std::exp(kI * out.phase_plus);
    out.coeffs.gamma_minus = magnitude * std::exp(kI * out.phase_minus);
    out.coeffs.gamma3 = std::exp(kI * params.omega * t);
    out.in_validity_window = std::abs(params.omega) * t <= 0.5;
    return out;
}

double squeeze_parameter_r(double delta0, double omega, double zeta, double t)
{
    require_time(t, "squeeze_parameter_r");
    return 0.5 * delta0 * (1.0 + 0.25 * omega * omega * t * t) * zeta * t;
}

double squeeze_parameter_r(const ModelParams& params, double t)
{
    return squeeze_parameter_r(params.delta0, params.omega, params.damping_composite(), t);
}

// ---------------------------------------------------------------------------

fock::Matrix su11_exponential(const fock::TwoModeBasis& basis, const SU11Coeffs& z)
{
    const fock::Matrix gen = z.zeta3 * fock::pair_weight(basis).entries() +
                             z.zeta_plus * fock::pair_creator(basis).entries() +
                             z.zeta_minus * fock::pair_annihilator(basis).entries();
    return fock::matrix_exp(gen);
}

fock::Matrix disentangled_propagator(const fock::TwoModeBasis& basis, const GammaCoeffs& g)
{
    if (std::abs(g.gamma3) == 0.0) throw DisentanglementSingularity("disentangled_propagator: gamma3 = 0");
    // exp(g K-) is the transpose of exp(g K+) since K- = K+^T.
    const fock::Matrix raise = pair_raising_exponential(basis, g.gamma_plus);
    const fock::Matrix lower = pair_raising_exponential(basis, g.gamma_minus).transpose();
    const cd log_g3 = std::log(g.gamma3);
    Eigen::VectorXcd middle(basis.dim());
    for (Eigen::Index i = 0; i < basis.dim(); ++i) {
        const auto [na, nb] = basis.occupations(i);
        middle(i) = std::exp(0.5 * double(na + nb + 1) * log_g3);
    }
    return raise * middle.asDiagonal() * lower;
}

PropagatedState apply_disentangled_propagator(const GammaCoeffs& g, const fock::DensityMatrix& rho0)
{
    const auto& basis = rho0.basis();
    if (basis.n_max() < 8) throw std::invalid_argument("apply_disentangled_propagator: requires n_max >= 8");
    const fock::Matrix m = disentangled_propagator(basis, g);
    const fock::Matrix out = m * rho0.entries() * m.adjoint();
    const double tr = out.trace().real();
    return {fock::DensityMatrix::normalized(basis, out), tr};
}

int disentanglement_interior_limit(int n_max, int depth) { return std::max(0, n_max - depth); }

DisentanglementResidual disentanglement_residual(const fock::TwoModeBasis& basis, const SU11Coeffs& z,
                                                 int depth)
{
    const fock::OperatorMatrix diff(basis, su11_exponential(basis, z) -
                                               disentangled_propagator(basis, gamma_from_zeta(z)));
    auto trace_norm = [](const fock::Matrix& m) {
        return Eigen::BDCSVD<fock::Matrix>(m).singularValues().sum();
    };
    DisentanglementResidual res{};
    res.interior_limit = disentanglement_interior_limit(basis.n_max(), depth);
    res.interior = trace_norm(diff.restricted(res.interior_limit));
    res.full = trace_norm(diff.entries());
    return res;
}

} // namespace bhsim::tfd
