// Mean-field analytic solution of the pair-loss master equation
//
// The Hartree-Fock reduced generator is an su(1,1) element
//     X = zeta3 K0 + zeta_plus K+ + zeta_minus K-,   K0 = (N + 1)/2, K+ = a^dag b^dag, K- = ab,
// with [K0, K+-] = +-K+- and [K-, K+] = 2 K0. Its exponential factorizes as
//     exp(X) = exp(gamma_plus K+) exp(ln(gamma3) K0) exp(gamma_minus K-)
// with
//     phi^2       = zeta3^2/4 - zeta_plus zeta_minus
//     gamma_+-    = 2 zeta_+- sinh(phi) / (2 phi cosh(phi) - zeta3 sinh(phi))
//     gamma3      = (cosh(phi) - zeta3 sinh(phi) / (2 phi))^-2
// so the middle factor acts on |n_a, n_b> as gamma3^{(n_a + n_b + 1)/2}.

#pragma once

#include <vector>

#include "bhsim/fock.hpp"
#include "bhsim/params.hpp"

namespace bhsim::tfd {

using fock::cd;

struct BogolyubovPair {
    cd mu;    // cosh r
    cd nu;    // sinh r
    double r; // artanh(nu / mu)
};

// mu = omega / sqrt(omega^2 - U^2 delta0^2 / 4), nu = U delta0 / (2 sqrt(...)).
// Throws DegenerateDiagonalization unless omega^2 > U^2 delta0^2 / 4.
BogolyubovPair bogolyubov(double omega, double U, double delta0);

struct SU11Coeffs {
    cd zeta3;      // coefficient of K0
    cd zeta_plus;  // coefficient of K+
    cd zeta_minus; // coefficient of K-
    cd phi;        // principal root of zeta3^2/4 - zeta_plus zeta_minus
};

SU11Coeffs make_su11(cd zeta3, cd zeta_plus, cd zeta_minus);

struct GammaCoeffs {
    cd gamma3{1.0};
    cd gamma_plus{0.0};
    cd gamma_minus{0.0};
};

// C = U / omega when include_C_factor is set, otherwise 1.
double background_prefactor(const ModelParams& params);

// (1 + i omega t) C delta0
cd delta_short_time(const ModelParams& params, double t);

// outside: sinh^2(C delta0 t) outside the integral; integrand: sinh^2(C delta0 t') inside.
enum class KernelForm { outside, integrand };

struct PicardOptions {
    KernelForm kernel{KernelForm::outside};
    double kernel_scale{1.0}; // 0 switches the integral term off
    double tolerance{1e-6};
};

enum class FieldMode { short_time_closed_form, picard_iterated, sampled };

struct PicardDiagnostics {
    int iterations{0};
    std::vector<double> distances; // max |Delta^(k+1) - Delta^(k)| per iteration
    bool converged{false};
    double tolerance{1e-6};
};

// Background field Delta(t) = <ab> on [0, grid.back()].
class BackgroundField {
public:
    // Closed form (1 + i omega t) C delta0 sampled on n_grid points of [0, t_end].
    static BackgroundField short_time(const ModelParams& params, double t_end, int n_grid);
    // Tabulated samples; integrals use the trapezoid rule.
    static BackgroundField sampled(std::vector<double> grid, std::vector<cd> values);
    static BackgroundField picard_result(std::vector<double> grid, std::vector<cd> values,
                                         PicardDiagnostics diagnostics);

    FieldMode mode() const noexcept { return mode_; }
    const std::vector<double>& grid() const noexcept { return grid_; }
    const std::vector<cd>& values() const noexcept { return values_; }
    const PicardDiagnostics& picard() const noexcept { return picard_; }

    bool covers(double t) const;
    // Linear interpolation between samples (exact for the closed form).
    cd value_at(double t) const;
    // Integral of Delta over [0, t]; throws std::domain_error outside the grid.
    cd integral(double t) const;

private:
    BackgroundField() = default;
    void build_cumulative();

    FieldMode mode_{FieldMode::sampled};
    std::vector<double> grid_;
    std::vector<cd> values_;
    std::vector<cd> cumulative_;
    cd amplitude_{0.0}; // C delta0 for the closed form
    double omega_{0.0};
    PicardDiagnostics picard_;
};

// Fixed-point iteration of
//     Delta(t) = (1 + i omega t) C delta0 + ((U - i kappa)/2) sinh^2(C delta0 t) int_0^t Delta(t') dt'
// on a uniform grid with trapezoid quadrature, starting from the inhomogeneous term.
// Non-convergence is reported in picard(), not thrown.
BackgroundField delta_picard(const ModelParams& params, double t_end, int n_grid, int n_iter,
                             const PicardOptions& options = {});

// zeta3 = i omega t, zeta_-+ = ((iU +- kappa)/2) int_0^t Delta.
SU11Coeffs zeta_coeffs(const ModelParams& params, double t, const BackgroundField& delta);

// Throws DisentanglementSingularity when the denominator is below 1e-14 in magnitude.
GammaCoeffs gamma_from_zeta(const SU11Coeffs& z);
// Same formulas evaluated on an explicitly chosen root phi (either sign).
GammaCoeffs gamma_from_zeta(const SU11Coeffs& z, cd phi);

struct ShortTimeGamma {
    GammaCoeffs coeffs;
    double phase_plus;  // iU - kappa = -zeta e^{i phase_plus}, the K+ channel
    double phase_minus; // iU + kappa = -zeta e^{i phase_minus}, the K- channel
    bool in_validity_window; // omega t <= 0.5
};

// gamma_+- = -(delta0 zeta t / 2)(1 + omega^2 t^2 / 4) e^{i phase_+-}, zeta = sqrt(U^2 + kappa^2);
// gamma3 = e^{i omega t}, the phi ~ zeta3/2 limit.
ShortTimeGamma gamma_short_time(const ModelParams& params, double t);

// r = (delta0 / 2)(1 + omega^2 t^2 / 4) zeta t with zeta = sqrt(U^2 + kappa^2).
double squeeze_parameter_r(const ModelParams& params, double t);
// Same with zeta supplied directly.
double squeeze_parameter_r(double delta0, double omega, double zeta, double t);

// exp(zeta3 K0 + zeta_plus K+ + zeta_minus K-) on the truncated space.
fock::Matrix su11_exponential(const fock::TwoModeBasis& basis, const SU11Coeffs& z);

// exp(gamma_plus K+) exp(ln(gamma3) K0) exp(gamma_minus K-); exact on the truncated space.
fock::Matrix disentangled_propagator(const fock::TwoModeBasis& basis, const GammaCoeffs& g);

struct PropagatedState {
    fock::DensityMatrix state; // M rho0 M^dag / Tr
    double raw_trace;          // Tr(M rho0 M^dag) before normalization
};

// Requires n_max >= 8; throws DisentanglementSingularity if gamma3 == 0.
PropagatedState apply_disentangled_propagator(const GammaCoeffs& g, const fock::DensityMatrix& rho0);

// States with both occupations <= n_max - depth; the reference exp(X) of the truncated
// generator loses accuracy within about six quanta of the cutoff for |zeta| <= 0.2.
int disentanglement_interior_limit(int n_max, int depth = 6);

struct DisentanglementResidual {
    double interior; // trace norm of the difference on the interior block
    double full;     // trace norm on the whole truncated space
    int interior_limit;
};

DisentanglementResidual disentanglement_residual(const fock::TwoModeBasis& basis, const SU11Coeffs& z,
                                                 int depth = 6);

} // namespace bhsim::tfd
