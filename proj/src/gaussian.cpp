// Two-mode Gaussian covariance matrices and entanglement tests

#include "bhsim/gaussian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "bhsim/errors.hpp"

namespace bhsim::gaussian {

double vacuum_floor(Convention c) { return c == Convention::half ? 0.5 : 1.0; }

CovarianceMatrix4::CovarianceMatrix4(const Matrix4& entries, Convention convention)
    : entries_(entries), convention_(convention)
{
    if (!entries_.allFinite()) throw std::invalid_argument("CovarianceMatrix4: non-finite entries");
    if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("CovarianceMatrix4: matrix is not symmetric");
    }
}

CovarianceMatrix4 CovarianceMatrix4::in_convention(Convention target) const
{
    if (target == convention_) return *this;
    const double factor = target == Convention::unit ? 2.0 : 0.5;
    return {entries_ * factor, target};
}

bool CovarianceMatrix4::is_physical() const
{
    if (entries_.llt().info() != Eigen::Success) return false;
    const auto [lo, hi] = symplectic_eigenvalues(*this);
    (void)hi;
    return lo >= vacuum_floor(convention_) - 1e-9;
}

Matrix4 symplectic_form()
{
    Matrix4 omega = Matrix4::Zero();
    omega(0, 1) = 1.0;
    omega(1, 0) = -1.0;
    omega(2, 3) = 1.0;
    omega(3, 2) = -1.0;
    return omega;
}

double symplectic_defect(const Matrix4& s)
{
    const Matrix4 omega = symplectic_form();
    return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
}

CovarianceMatrix4 thermal_covariance(double n1, double n2, Convention convention)
{
    const double floor = vacuum_floor(convention);
    if (!(n1 >= floor) || !(n2 >= floor)) {
        throw UnphysicalState("thermal_covariance: symplectic eigenvalue below the vacuum floor");
    }
    Matrix4 v = Matrix4::Zero();
    v.diagonal() << n1, n1, n2, n2;
    return {v, convention};
}

Matrix4 squeeze_symplectic(double r)
{
    if (!std::isfinite(r)) throw std::invalid_argument("squeeze_symplectic: non-finite r");
    const double c = std::cosh(r);
    const double s = std::sinh(r);
    Matrix4 m;
    m << c, 0.0, s, 0.0,
         0.0, c, 0.0, -s,
         s, 0.0, c, 0.0,
         0.0, -s, 0.0, c;
    return m;
}

Matrix4 local_rotation(double theta_a, double theta_b)
{
    Matrix4 m = Matrix4::Zero();
    m.block<2, 2>(0, 0) << std::cos(theta_a), std::sin(theta_a), -std::sin(theta_a), std::cos(theta_a);
    m.block<2, 2>(2, 2) << std::cos(theta_b), std::sin(theta_b), -std::sin(theta_b), std::cos(theta_b);
    return m;
}

CovarianceMatrix4 evolve_covariance(const Matrix4& s, const CovarianceMatrix4& sigma)
{
    if (symplectic_defect(s) > 1e-9) throw std::invalid_argument("evolve_covariance: transformation is not symplectic");
    const Matrix4 v = s * sigma.entries() * s.transpose();
    return {0.5 * (v + v.transpose()), sigma.convention()};
}

SimonReport simon_criterion(const CovarianceMatrix4& v)
{
    const Matrix2 a = v.block_a();
    const Matrix2 b = v.block_b();
    const Matrix2 c = v.block_c();
    Matrix2 j;
    j << 0.0, 1.0, -1.0, 0.0;

    const double quarter_minus = 0.25 - std::abs(c.determinant());
    SimonReport rep{};
    rep.lhs = a.determinant() * b.determinant() + quarter_minus * quarter_minus -
              (a * j * c * j * b * j * c.transpose() * j).trace();
    rep.rhs = 0.25 * (a.determinant() + b.determinant());
    rep.margin = rep.lhs - rep.rhs;
    rep.separable = rep.margin >= 0.0;
    rep.physical = v.in_convention(Convention::half).is_physical();
    return rep;
}

std::pair<double, double> symplectic_eigenvalues(const CovarianceMatrix4& v)
{
    if (v.entries().llt().info() != Eigen::Success) {
        throw std::invalid_argument("symplectic_eigenvalues: covariance is not positive definite");
    }
    // Omega V has eigenvalues +-i nu; their moduli are those of i Omega V.
    Eigen::EigenSolver<Matrix4> es(symplectic_form() * v.entries(), false);
    std::array<double, 4> mod{};
    for (int k = 0; k < 4; ++k) mod[static_cast<std::size_t>(k)] = std::abs(es.eigenvalues()(k));
    std::sort(mod.begin(), mod.end());
    return {0.5 * (mod[0] + mod[1]), 0.5 * (mod[2] + mod[3])};
}

CovarianceMatrix4 partial_transpose(const CovarianceMatrix4& v)
{
    Matrix4 p = Matrix4::Identity();
    p(3, 3) = -1.0;
    return {p * v.entries() * p, v.convention()};
}

double pt_min_symplectic_eigenvalue(const CovarianceMatrix4& v)
{
    return symplectic_eigenvalues(partial_transpose(v)).first;
}

double ppt_logneg(const CovarianceMatrix4& v)
{
    const CovarianceMatrix4 half = v.in_convention(Convention::half);
    if (!half.is_physical()) throw UnphysicalState("ppt_logneg: covariance violates the uncertainty bound");
    const double nu = pt_min_symplectic_eigenvalue(half);
    return std::max(0.0, -std::log2(2.0 * nu));
}

double squeeze_logneg(double r, double n, bool clamp)
{
    if (!(n > 0.0)) throw std::invalid_argument("squeeze_logneg: n must be > 0");
    if (!(r >= 0.0)) throw std::invalid_argument("squeeze_logneg: r must be >= 0");
    const double raw = 2.0 * r * std::numbers::log2e + 0.5 * std::log2(n);
    return clamp ? std::max(0.0, raw) : raw;
}

double thermal_entanglement_threshold(double n1, double n2)
{
    if (!(n1 >= 1.0) || !(n2 >= 1.0)) {
        throw std::invalid_argument("thermal_entanglement_threshold: unit-convention eigenvalues must be >= 1");
    }
    const double sum = n1 + n2;
    return (n2 * n2 - 1.0) * (n1 * n1 - 1.0) / (sum * sum);
}

double to_unit_convention(double nu_half) { return 2.0 * nu_half; }
double to_half_convention(double n_unit) { return 0.5 * n_unit; }

} // namespace bhsim::gaussian
