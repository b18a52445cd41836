// Two-mode Gaussian covariance matrices and entanglement tests

#pragma once

#include <utility>

#include <Eigen/Dense>

namespace bhsim::gaussian {

using Matrix4 = Eigen::Matrix4d;
using Matrix2 = Eigen::Matrix2d;

// half: vacuum variance 1/2 (hbar = 1); unit: vacuum variance 1.
enum class Convention { half, unit };

// Vacuum variance of the convention.
double vacuum_floor(Convention c);

// Real symmetric second-moment matrix in quadrature order (x, p_x, y, p_y).
class CovarianceMatrix4 {
public:
    CovarianceMatrix4() = default;
    // Throws std::invalid_argument if entries are not symmetric to 1e-12.
    CovarianceMatrix4(const Matrix4& entries, Convention convention);

    const Matrix4& entries() const noexcept { return entries_; }
    Convention convention() const noexcept { return convention_; }

    double operator()(int i, int j) const { return entries_(i, j); }

    Matrix2 block_a() const { return entries_.block<2, 2>(0, 0); }
    Matrix2 block_b() const { return entries_.block<2, 2>(2, 2); }
    Matrix2 block_c() const { return entries_.block<2, 2>(0, 2); }

    // Same state expressed in the other convention (unit = 2 x half).
    CovarianceMatrix4 in_convention(Convention target) const;

    // Both symplectic eigenvalues above the vacuum floor (minus 1e-9).
    bool is_physical() const;

private:
    Matrix4 entries_{Matrix4::Identity() * 0.5};
    Convention convention_{Convention::half};
};

// Omega = [[0,1],[-1,0]] (+) [[0,1],[-1,0]]
Matrix4 symplectic_form();

// Max-entry defect of S Omega S^T - Omega.
double symplectic_defect(const Matrix4& s);

// diag(n1, n1, n2, n2); throws UnphysicalState below the vacuum floor.
CovarianceMatrix4 thermal_covariance(double n1, double n2, Convention convention);

// Real two-mode squeezer with +sinh(r) in the x-y block and -sinh(r) in the p block.
Matrix4 squeeze_symplectic(double r);

// Symplectic block-diagonal phase rotation of each mode.
Matrix4 local_rotation(double theta_a, double theta_b);

// S sigma S^T; throws std::invalid_argument if S is not symplectic to 1e-9.
CovarianceMatrix4 evolve_covariance(const Matrix4& s, const CovarianceMatrix4& sigma);

struct SimonReport {
    double lhs;
    double rhs;
    bool separable; // margin >= 0
    double margin;  // lhs - rhs
    bool physical;  // input satisfied the half-convention uncertainty bound
};

// detA detB + (1/4 - |detC|)^2 - tr(A J C J B J C^T J) >= (detA + detB) / 4,
// evaluated on the entries as given (the 1/4 constants assume the half convention).
SimonReport simon_criterion(const CovarianceMatrix4& v);

// Moduli of the eigenvalues of i Omega V, ascending; each appears twice in the spectrum.
// Throws std::invalid_argument when V is not positive definite.
std::pair<double, double> symplectic_eigenvalues(const CovarianceMatrix4& v);

// Momentum of mode two flipped: V -> P V P, P = diag(1, 1, 1, -1).
CovarianceMatrix4 partial_transpose(const CovarianceMatrix4& v);

// Smallest partial-transpose symplectic eigenvalue.
double pt_min_symplectic_eigenvalue(const CovarianceMatrix4& v);

// max(0, -log2(2 nu_pt)) for a physical half-convention state.
double ppt_logneg(const CovarianceMatrix4& v);

// -(1/2) log2(e^{-4r} / n) = 2 r log2(e) + (1/2) log2(n); clamped at 0 on request.
double squeeze_logneg(double r, double n, bool clamp = false);

// sinh^2(r) threshold (n2^2 - 1)(n1^2 - 1) / (n1 + n2)^2 for unit-convention n >= 1.
double thermal_entanglement_threshold(double n1, double n2);

// n_unit = 2 nu_half
double to_unit_convention(double nu_half);
double to_half_convention(double n_unit);

} // namespace bhsim::gaussian
