// Truncated two-mode Fock space, operators and states

#pragma once

#include <complex>
#include <cstddef>
#include <utility>

#include <Eigen/Dense>

namespace bhsim::fock {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

enum class Mode { A, B };

// Two bosonic modes, each truncated at n_max quanta. Flat index is
// n_a * (n_max + 1) + n_b.
class TwoModeBasis {
public:
    explicit TwoModeBasis(int n_max);

    int n_max() const noexcept { return n_max_; }
    int levels() const noexcept { return n_max_ + 1; }
    Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(levels()) * levels(); }

    Eigen::Index index(int n_a, int n_b) const;
    std::pair<int, int> occupations(Eigen::Index flat) const;

    // True if both occupations are <= limit.
    bool within(Eigen::Index flat, int limit) const;

    friend bool operator==(const TwoModeBasis&, const TwoModeBasis&) = default;

private:
    int n_max_;
};

TwoModeBasis build_basis(int n_max);

class OperatorMatrix {
public:
    OperatorMatrix(TwoModeBasis basis, Matrix entries);

    static OperatorMatrix zero(const TwoModeBasis& basis);
    static OperatorMatrix identity(const TwoModeBasis& basis);

    const TwoModeBasis& basis() const noexcept { return basis_; }
    const Matrix& entries() const noexcept { return entries_; }

    OperatorMatrix operator+(const OperatorMatrix& rhs) const;
    OperatorMatrix operator-(const OperatorMatrix& rhs) const;
    OperatorMatrix operator*(const OperatorMatrix& rhs) const;
    OperatorMatrix scaled(cd factor) const;

    Eigen::VectorXcd apply(const Eigen::VectorXcd& state) const;

    // Principal block on the states with n_a, n_b <= limit.
    Matrix restricted(int limit) const;

private:
    TwoModeBasis basis_;
    Matrix entries_;
};

OperatorMatrix operator*(cd factor, const OperatorMatrix& op);

// Hermitian, unit-trace, positive semidefinite operator.
class DensityMatrix {
public:
    // Validates hermiticity (1e-12), trace (1e-10) and min eigenvalue (-1e-8).
    static DensityMatrix checked(TwoModeBasis basis, Matrix entries);
    // Hermitizes and rescales to unit trace, then validates.
    static DensityMatrix normalized(TwoModeBasis basis, Matrix entries);
    static DensityMatrix pure(TwoModeBasis basis, const Eigen::VectorXcd& state);

    const TwoModeBasis& basis() const noexcept { return basis_; }
    const Matrix& entries() const noexcept { return entries_; }

private:
    DensityMatrix(TwoModeBasis basis, Matrix entries);

    TwoModeBasis basis_;
    Matrix entries_;
};

struct StateDiagnostics {
    double hermiticity_defect;
    double trace_error;
    double min_eigenvalue;
};
StateDiagnostics diagnose(const Matrix& rho);

OperatorMatrix annihilator(const TwoModeBasis& basis, Mode mode);
OperatorMatrix creator(const TwoModeBasis& basis, Mode mode);
OperatorMatrix number_operator(const TwoModeBasis& basis, Mode mode);
// N = a^dag a + b^dag b
OperatorMatrix total_number(const TwoModeBasis& basis);
// K+ = a^dag b^dag
OperatorMatrix pair_creator(const TwoModeBasis& basis);
// K- = a b
OperatorMatrix pair_annihilator(const TwoModeBasis& basis);
// K0 = (N + 1) / 2
OperatorMatrix pair_weight(const TwoModeBasis& basis);

OperatorMatrix adjoint(const OperatorMatrix& op);
OperatorMatrix commutator(const OperatorMatrix& x, const OperatorMatrix& y);

// Scaling-and-squaring with a Pade core (degree 3 to 13 chosen by the 1-norm).
Matrix matrix_exp(const Matrix& m);
OperatorMatrix matrix_exp(const OperatorMatrix& op);

Eigen::VectorXcd basis_state(const TwoModeBasis& basis, int n_a, int n_b);

DensityMatrix vacuum_state(const TwoModeBasis& basis);
// Product of Bose-Einstein diagonal states, renormalized on the truncated space.
DensityMatrix thermal_state(const TwoModeBasis& basis, double nbar_a, double nbar_b);
// exp(r (K+ - K-)) |0,0>, <ab> = sinh(r) cosh(r) before truncation.
DensityMatrix squeezed_vacuum(const TwoModeBasis& basis, double r);
// Two-mode squeezed thermal state whose untruncated <ab> equals target_ab > 0.
DensityMatrix squeezed_thermal(const TwoModeBasis& basis, double nbar_a, double nbar_b,
                               double target_ab);
// Squeeze parameter realizing <ab> = target_ab on top of thermal occupations.
double squeeze_for_pair_moment(double nbar_a, double nbar_b, double target_ab);

cd expectation(const OperatorMatrix& op, const DensityMatrix& rho);
cd expectation(const OperatorMatrix& op, const Matrix& rho);
double purity(const DensityMatrix& rho);
double purity(const Matrix& rho);

// Total population with n_a == n_max or n_b == n_max.
double leakage(const TwoModeBasis& basis, const Matrix& rho);

} // namespace bhsim::fock
