// Exact pair-loss master equation on the truncated Fock space

#pragma once

#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "bhsim/fock.hpp"
#include "bhsim/gaussian.hpp"
#include "bhsim/params.hpp"

namespace bhsim::lindblad {

using fock::cd;
using fock::DensityMatrix;
using fock::Matrix;
using fock::OperatorMatrix;
using fock::TwoModeBasis;

// omega N - J (a^dag b + b^dag a) + (U_a/2) a^dag a^dag a a + (U_b/2) b^dag b^dag b b
//   + (U/2) a^dag a b^dag b
OperatorMatrix build_full_hamiltonian(const ModelParams& params, const TwoModeBasis& basis);

// Mott-phase coherent part: omega N - (U/2) a^dag a b^dag b. The cross term enters with the
// sign that makes -i[H, rho] reproduce the pair-loss equation's coherent part, and whose
// Hartree-Fock factorization is the -U Delta/2 (K+ + K-) background term.
OperatorMatrix build_mott_hamiltonian(const ModelParams& params, const TwoModeBasis& basis);

// d rho/dt = -i[H, rho] + (rate/2)(2 L rho L^dag - L^dag L rho - rho L^dag L)
class LindbladSpec {
public:
    // Throws std::invalid_argument if H is not Hermitian to 1e-12 or rate < 0.
    LindbladSpec(OperatorMatrix hamiltonian, OperatorMatrix jump_op, double rate);

    // L = ab, the non-linear two-boson loss.
    static LindbladSpec pair_loss(OperatorMatrix hamiltonian, double kappa);

    const OperatorMatrix& hamiltonian() const noexcept { return hamiltonian_; }
    const OperatorMatrix& jump_op() const noexcept { return jump_op_; }
    double rate() const noexcept { return rate_; }
    const TwoModeBasis& basis() const noexcept { return hamiltonian_.basis(); }

    Matrix rhs(const Matrix& rho) const;

private:
    using Sparse = Eigen::SparseMatrix<cd>;
    using RowSparse = Eigen::SparseMatrix<cd, Eigen::RowMajor>;

    OperatorMatrix hamiltonian_;
    OperatorMatrix jump_op_;
    double rate_;
    RowSparse liouvillian_; // acts on the column-major vec(rho)
};

Matrix lindblad_rhs(const LindbladSpec& spec, const DensityMatrix& rho);
Matrix lindblad_rhs(const LindbladSpec& spec, const Matrix& rho);

// Symmetrized quadrature covariance (half convention), from normally ordered moments.
// rho is normalized by its trace before use.
gaussian::CovarianceMatrix4 covariance_from_state(const TwoModeBasis& basis, const Matrix& rho);
gaussian::CovarianceMatrix4 covariance_from_state(const DensityMatrix& rho);

struct Observables {
    cd delta;            // <ab>
    double purity;       // Tr rho^2 / (Tr rho)^2
    double trace_error;  // |Tr rho - 1|
    double leakage;      // population on the cutoff boundary
    double min_eigenvalue;
    gaussian::CovarianceMatrix4 covariance;
};

struct IntegrateOptions {
    bool retain_states{false};
    bool track_min_eigenvalue{true};
    double trace_warning{1e-6};
    double leakage_warning{1e-3};
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Observables> records;
    std::vector<Matrix> states; // raw, unnormalized; filled only when retained
    bool warning{false};
    std::vector<std::string> warnings;
    double max_trace_error{0.0};
    double max_leakage{0.0};
    double min_eigenvalue{1.0};
};

Observables observe(const TwoModeBasis& basis, const Matrix& rho, bool with_min_eigenvalue = true);

// Fixed-step RK4 with the Hermitian part enforced after each step. Records t = 0 and every
// record_every steps; the final time is round(t_end / dt) * dt.
Trajectory integrate(const LindbladSpec& spec, const DensityMatrix& rho0, double t_end, double dt,
                     int record_every, const IntegrateOptions& options = {});

} // namespace bhsim::lindblad
