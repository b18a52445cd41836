// Truncated two-mode Fock space, operators and states

#include "bhsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhsim/errors.hpp"
#include "bhsim/params.hpp"

namespace bhsim {

void ModelParams::validate() const
{
    for (double v : {omega, J, U_a, U_b, U, kappa, delta0}) {
        if (!std::isfinite(v)) throw std::invalid_argument("ModelParams: non-finite coupling");
    }
    if (kappa < 0.0) throw std::invalid_argument("ModelParams: kappa must be >= 0");
    if (delta0 <= 0.0) throw std::invalid_argument("ModelParams: delta0 must be > 0");
}

double ModelParams::damping_composite() const { return std::hypot(U, kappa); }

} // namespace bhsim

namespace bhsim::fock {

namespace {

void require_same_basis(const TwoModeBasis& x, const TwoModeBasis& y, const char* where)
{
    if (!(x == y)) {
        throw BasisMismatch(std::string(where) + ": operands use different cutoffs (" +
                            std::to_string(x.n_max()) + " vs " + std::to_string(y.n_max()) + ")");
    }
}

void require_dim(const TwoModeBasis& basis, const Matrix& m, const char* where)
{
    if (m.rows() != basis.dim() || m.cols() != basis.dim()) {
        throw BasisMismatch(std::string(where) + ": matrix shape does not match basis dimension");
    }
}

Matrix single_mode_lowering(int n_max)
{
    Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

} // namespace

TwoModeBasis::TwoModeBasis(int n_max) : n_max_(n_max)
{
    if (n_max < 1) throw std::invalid_argument("TwoModeBasis: cutoff n_max must be >= 1");
}

Eigen::Index TwoModeBasis::index(int n_a, int n_b) const
{
    if (n_a < 0 || n_b < 0 || n_a > n_max_ || n_b > n_max_) {
        throw std::out_of_range("TwoModeBasis::index: occupation outside cutoff");
    }
    return static_cast<Eigen::Index>(n_a) * levels() + n_b;
}

std::pair<int, int> TwoModeBasis::occupations(Eigen::Index flat) const
{
    if (flat < 0 || flat >= dim()) throw std::out_of_range("TwoModeBasis::occupations: bad index");
    return {static_cast<int>(flat / levels()), static_cast<int>(flat % levels())};
}

bool TwoModeBasis::within(Eigen::Index flat, int limit) const
{
    const auto [na, nb] = occupations(flat);
    return na <= limit && nb <= limit;
}

TwoModeBasis build_basis(int n_max) { return TwoModeBasis(n_max); }

OperatorMatrix::OperatorMatrix(TwoModeBasis basis, Matrix entries)
    : basis_(basis), entries_(std::move(entries))
{
    require_dim(basis_, entries_, "OperatorMatrix");
}

OperatorMatrix OperatorMatrix::zero(const TwoModeBasis& basis)
{
    return {basis, Matrix::Zero(basis.dim(), basis.dim())};
}

OperatorMatrix OperatorMatrix::identity(const TwoModeBasis& basis)
{
    return {basis, Matrix::Identity(basis.dim(), basis.dim())};
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& rhs) const
{
    require_same_basis(basis_, rhs.basis_, "operator+");
    return {basis_, entries_ + rhs.entries_};
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& rhs) const
{
    require_same_basis(basis_, rhs.basis_, "operator-");
    return {basis_, entries_ - rhs.entries_};
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& rhs) const
{
    require_same_basis(basis_, rhs.basis_, "operator*");
    return {basis_, entries_ * rhs.entries_};
}

OperatorMatrix OperatorMatrix::scaled(cd factor) const { return {basis_, factor * entries_}; }

OperatorMatrix operator*(cd factor, const OperatorMatrix& op) { return op.scaled(factor); }

Eigen::VectorXcd OperatorMatrix::apply(const Eigen::VectorXcd& state) const
{
    if (state.size() != basis_.dim()) throw BasisMismatch("OperatorMatrix::apply: state size mismatch");
    return entries_ * state;
}

Matrix OperatorMatrix::restricted(int limit) const
{
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < basis_.dim(); ++i) {
        if (basis_.within(i, limit)) keep.push_back(i);
    }
    const auto k = static_cast<Eigen::Index>(keep.size());
    Matrix block(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
        for (Eigen::Index c = 0; c < k; ++c) block(r, c) = entries_(keep[r], keep[c]);
    }
    return block;
}

// ---------------------------------------------------------------------------

StateDiagnostics diagnose(const Matrix& rho)
{
    StateDiagnostics d{};
    d.hermiticity_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    d.trace_error = std::abs(rho.trace() - cd(1.0, 0.0));
    const Matrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    return d;
}

DensityMatrix::DensityMatrix(TwoModeBasis basis, Matrix entries)
    : basis_(basis), entries_(std::move(entries))
{
}

DensityMatrix DensityMatrix::checked(TwoModeBasis basis, Matrix entries)
{
    require_dim(basis, entries, "DensityMatrix");
    if (!entries.allFinite()) throw NumericError("DensityMatrix: non-finite entries");
    const StateDiagnostics d = diagnose(entries);
    if (d.hermiticity_defect > 1e-12) throw UnphysicalState("DensityMatrix: not Hermitian");
    if (d.trace_error > 1e-10) throw UnphysicalState("DensityMatrix: trace differs from 1");
    if (d.min_eigenvalue < -1e-8) throw UnphysicalState("DensityMatrix: negative eigenvalue");
    return {basis, std::move(entries)};
}

DensityMatrix DensityMatrix::normalized(TwoModeBasis basis, Matrix entries)
{
    require_dim(basis, entries, "DensityMatrix");
    Matrix herm = 0.5 * (entries + entries.adjoint());
    const double tr = herm.trace().real();
    if (!(tr > 0.0) || !std::isfinite(tr)) throw UnphysicalState("DensityMatrix: non-positive trace");
    herm /= tr;
    return checked(basis, std::move(herm));
}

DensityMatrix DensityMatrix::pure(TwoModeBasis basis, const Eigen::VectorXcd& state)
{
    if (state.size() != basis.dim()) throw BasisMismatch("DensityMatrix::pure: state size mismatch");
    const double norm = state.norm();
    if (!(norm > 0.0)) throw UnphysicalState("DensityMatrix::pure: zero vector");
    const Eigen::VectorXcd psi = state / norm;
    return normalized(basis, psi * psi.adjoint());
}

// ---------------------------------------------------------------------------

OperatorMatrix annihilator(const TwoModeBasis& basis, Mode mode)
{
    const Matrix a1 = single_mode_lowering(basis.n_max());
    const Matrix id = Matrix::Identity(basis.levels(), basis.levels());
    Matrix out(basis.dim(), basis.dim());
    const Matrix& left = mode == Mode::A ? a1 : id;
    const Matrix& right = mode == Mode::A ? id : a1;
    // Kronecker product left (x) right in the n_a-major ordering.
    for (int i = 0; i < basis.levels(); ++i) {
        for (int j = 0; j < basis.levels(); ++j) {
            out.block(i * basis.levels(), j * basis.levels(), basis.levels(), basis.levels()) =
                left(i, j) * right;
        }
    }
    return {basis, std::move(out)};
}

OperatorMatrix creator(const TwoModeBasis& basis, Mode mode) { return adjoint(annihilator(basis, mode)); }

OperatorMatrix number_operator(const TwoModeBasis& basis, Mode mode)
{
    Matrix n = Matrix::Zero(basis.dim(), basis.dim());
    for (Eigen::Index i = 0; i < basis.dim(); ++i) {
        const auto [na, nb] = basis.occupations(i);
        n(i, i) = mode == Mode::A ? na : nb;
    }
    return {basis, std::move(n)};
}

OperatorMatrix total_number(const TwoModeBasis& basis)
{
    return number_operator(basis, Mode::A) + number_operator(basis, Mode::B);
}

OperatorMatrix pair_annihilator(const TwoModeBasis& basis)
{
    Matrix m = Matrix::Zero(basis.dim(), basis.dim());
    for (int na = 1; na <= basis.n_max(); ++na) {
        for (int nb = 1; nb <= basis.n_max(); ++nb) {
            m(basis.index(na - 1, nb - 1), basis.index(na, nb)) = std::sqrt(double(na) * double(nb));
        }
    }
    return {basis, std::move(m)};
}

OperatorMatrix pair_creator(const TwoModeBasis& basis) { return adjoint(pair_annihilator(basis)); }

OperatorMatrix pair_weight(const TwoModeBasis& basis)
{
    return (total_number(basis) + OperatorMatrix::identity(basis)).scaled(0.5);
}

OperatorMatrix adjoint(const OperatorMatrix& op) { return {op.basis(), op.entries().adjoint()}; }

OperatorMatrix commutator(const OperatorMatrix& x, const OperatorMatrix& y)
{
    require_same_basis(x.basis(), y.basis(), "commutator");
    return {x.basis(), x.entries() * y.entries() - y.entries() * x.entries()};
}

OperatorMatrix matrix_exp(const OperatorMatrix& op) { return {op.basis(), matrix_exp(op.entries())}; }

// ---------------------------------------------------------------------------

Eigen::VectorXcd basis_state(const TwoModeBasis& basis, int n_a, int n_b)
{
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis.dim());
    v(basis.index(n_a, n_b)) = 1.0;
    return v;
}

DensityMatrix vacuum_state(const TwoModeBasis& basis) { return DensityMatrix::pure(basis, basis_state(basis, 0, 0)); }

DensityMatrix thermal_state(const TwoModeBasis& basis, double nbar_a, double nbar_b)
{
    if (!(nbar_a >= 0.0) || !(nbar_b >= 0.0)) {
        throw std::invalid_argument("thermal_state: mean occupations must be >= 0");
    }
    auto weight = [](double nbar, int n) {
        if (nbar == 0.0) return n == 0 ? 1.0 : 0.0;
        return std::pow(nbar, n) / std::pow(1.0 + nbar, n + 1);
    };
    Matrix rho = Matrix::Zero(basis.dim(), basis.dim());
    for (Eigen::Index i = 0; i < basis.dim(); ++i) {
        const auto [na, nb] = basis.occupations(i);
        rho(i, i) = weight(nbar_a, na) * weight(nbar_b, nb);
    }
    return DensityMatrix::normalized(basis, std::move(rho));
}

double squeeze_for_pair_moment(double nbar_a, double nbar_b, double target_ab)
{
    if (!(target_ab > 0.0)) throw std::invalid_argument("squeeze_for_pair_moment: target must be > 0");
    if (!(nbar_a >= 0.0) || !(nbar_b >= 0.0)) {
        throw std::invalid_argument("squeeze_for_pair_moment: mean occupations must be >= 0");
    }
    // <ab> = (1 + nbar_a + nbar_b) sinh(r) cosh(r)
    return 0.5 * std::asinh(2.0 * target_ab / (1.0 + nbar_a + nbar_b));
}

DensityMatrix squeezed_vacuum(const TwoModeBasis& basis, double r)
{
    const Matrix gen = r * (pair_creator(basis).entries() - pair_annihilator(basis).entries());
    return DensityMatrix::pure(basis, matrix_exp(gen) * basis_state(basis, 0, 0));
}

DensityMatrix squeezed_thermal(const TwoModeBasis& basis, double nbar_a, double nbar_b, double target_ab)
{
    const double r = squeeze_for_pair_moment(nbar_a, nbar_b, target_ab);
    const Matrix s = matrix_exp(r * (pair_creator(basis).entries() - pair_annihilator(basis).entries()));
    const DensityMatrix th = thermal_state(basis, nbar_a, nbar_b);
    return DensityMatrix::normalized(basis, s * th.entries() * s.adjoint());
}

cd expectation(const OperatorMatrix& op, const Matrix& rho)
{
    if (rho.rows() != op.basis().dim() || rho.cols() != op.basis().dim()) {
        throw BasisMismatch("expectation: state does not match operator basis");
    }
    // Tr(op rho) without forming the product.
    return (op.entries().transpose().cwiseProduct(rho)).sum();
}

cd expectation(const OperatorMatrix& op, const DensityMatrix& rho)
{
    require_same_basis(op.basis(), rho.basis(), "expectation");
    return expectation(op, rho.entries());
}

double purity(const Matrix& rho) { return (rho.transpose().cwiseProduct(rho)).sum().real(); }

double purity(const DensityMatrix& rho) { return purity(rho.entries()); }

double leakage(const TwoModeBasis& basis, const Matrix& rho)
{
    double acc = 0.0;
    for (Eigen::Index i = 0; i < basis.dim(); ++i) {
        const auto [na, nb] = basis.occupations(i);
        if (na == basis.n_max() || nb == basis.n_max()) acc += rho(i, i).real();
    }
    return acc;
}

} // namespace bhsim::fock
