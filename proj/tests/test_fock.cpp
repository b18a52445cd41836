#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include <unsupported/Eigen/MatrixFunctions>

#include "bhsim/errors.hpp"
#include "bhsim/fock.hpp"
#include "support.hpp"

using namespace bhsim;
using namespace bhsim::fock;
using bhsim::testing::Gen;
using bhsim::testing::max_abs;

TEST_CASE("basis dimensions and index map")
{
    CHECK(build_basis(1).dim() == 4);
    CHECK(build_basis(10).dim() == 121);
    CHECK_THROWS_AS(build_basis(0), std::invalid_argument);

    const auto basis = build_basis(5);
    std::set<Eigen::Index> seen;
    for (int na = 0; na <= 5; ++na) {
        for (int nb = 0; nb <= 5; ++nb) {
            const auto k = basis.index(na, nb);
            CHECK(basis.occupations(k) == std::pair{na, nb});
            seen.insert(k);
        }
    }
    CHECK(seen.size() == static_cast<std::size_t>(basis.dim()));
    CHECK_THROWS_AS(basis.index(6, 0), std::out_of_range);
    CHECK(basis.within(basis.index(3, 2), 3));
    CHECK_FALSE(basis.within(basis.index(4, 2), 3));
}

TEST_CASE("ladder operators act on number states")
{
    const auto basis = build_basis(4);
    const auto a = annihilator(basis, Mode::A);
    const auto b = annihilator(basis, Mode::B);

    CHECK((a.apply(basis_state(basis, 1, 0)) - basis_state(basis, 0, 0)).norm() < 1e-15);
    CHECK(b.apply(basis_state(basis, 0, 0)).norm() < 1e-15);
    CHECK((a.apply(basis_state(basis, 2, 1)) - std::sqrt(2.0) * basis_state(basis, 1, 1)).norm() < 1e-15);
    CHECK((adjoint(a).apply(basis_state(basis, 0, 0)) - basis_state(basis, 1, 0)).norm() < 1e-15);

    const auto ad = creator(basis, Mode::A);
    for (int na = 0; na < basis.n_max(); ++na) {
        for (int nb = 0; nb <= basis.n_max(); ++nb) {
            CHECK(ad.entries()(basis.index(na + 1, nb), basis.index(na, nb)).real() ==
                  doctest::Approx(std::sqrt(na + 1.0)).epsilon(1e-15));
        }
    }
}

TEST_CASE("commutators on the interior")
{
    const auto basis = build_basis(6);
    const auto a = annihilator(basis, Mode::A);
    const auto b = annihilator(basis, Mode::B);
    const auto id = OperatorMatrix::identity(basis);

    CHECK(max_abs((commutator(a, adjoint(a)) - id).restricted(5)) < 1e-14);
    CHECK(max_abs(commutator(a, b).entries()) == 0.0);
    // The truncation shows up only on the boundary.
    CHECK(max_abs((commutator(a, adjoint(a)) - id).entries()) > 1.0);

    const auto kp = pair_creator(basis);
    const auto km = pair_annihilator(basis);
    const auto n = total_number(basis);
    CHECK(max_abs((commutator(km, kp) - (n + id)).restricted(5)) < 1e-13);
    CHECK(max_abs((commutator(n, km) + cd(2.0) * km).entries()) < 1e-13);
    CHECK(max_abs((pair_weight(basis) - cd(0.5) * (n + id)).entries()) < 1e-15);
}

TEST_CASE("operators on different cutoffs are rejected")
{
    const auto a4 = annihilator(build_basis(4), Mode::A);
    const auto a5 = annihilator(build_basis(5), Mode::A);
    CHECK_THROWS_AS(a4 + a5, BasisMismatch);
    CHECK_THROWS_AS(a4 * a5, BasisMismatch);
    CHECK_THROWS_AS(expectation(a4, vacuum_state(build_basis(5))), BasisMismatch);
}

TEST_CASE("matrix exponential basics")
{
    const auto basis = build_basis(4);
    CHECK(max_abs(matrix_exp(OperatorMatrix::zero(basis)).entries() - Matrix::Identity(25, 25)) == 0.0);

    const double theta = 0.37;
    const auto u = matrix_exp(cd(0.0, theta) * number_operator(basis, Mode::A));
    for (int n = 0; n <= 4; ++n) {
        const auto out = u.apply(basis_state(basis, n, 1));
        CHECK(std::abs(out(basis.index(n, 1)) - std::polar(1.0, theta * n)) < 1e-14);
    }
}

TEST_CASE("matrix exponential against Eigen's MatrixFunctions")
{
    Gen gen(11);
    for (double scale : {1e-3, 0.1, 1.0, 5.0, 40.0}) {
        for (int trial = 0; trial < 4; ++trial) {
            const Eigen::Index d = gen.integer(2, 30);
            Matrix x = gen.matrix(d);
            x *= scale / x.cwiseAbs().colwise().sum().maxCoeff();
            const Matrix ref = x.exp();
            const double err = max_abs(matrix_exp(x) - ref) / max_abs(ref);
            CHECK_MESSAGE(err < 1e-12, "scale " << scale << " d " << d << " err " << err);
        }
    }
    CHECK_THROWS_AS(matrix_exp(Matrix::Constant(2, 2, cd(std::nan(""), 0.0))), NumericError);
}

TEST_CASE("matrix exponential of a permuted block-diagonal matrix")
{
    Gen gen(14);
    const Eigen::Index d = 24;
    Matrix x = Matrix::Zero(d, d);
    // Three interleaved blocks: indices congruent mod 3.
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (i % 3 == j % 3) x(i, j) = gen.complex_normal();
        }
    }
    x *= 3.0 / x.norm();
    const Matrix ref = x.exp();
    CHECK(max_abs(matrix_exp(x) - ref) / max_abs(ref) < 1e-12);
    CHECK(max_abs(matrix_exp(x)) > 0.0);

    const auto basis = build_basis(6);
    const Matrix gen_sq = 0.4 * (pair_creator(basis) - pair_annihilator(basis)).entries();
    CHECK(max_abs(matrix_exp(gen_sq) - gen_sq.exp()) < 1e-13);
}

TEST_CASE("exp(X) exp(-X) = identity for norm <= 5")
{
    Gen gen(12);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index d = gen.integer(4, 36);
        Matrix x = gen.matrix(d);
        x *= gen.uniform(0.1, 5.0) / x.norm();
        CHECK(max_abs(matrix_exp(x) * matrix_exp(-x) - Matrix::Identity(d, d)) < 1e-10);
    }
}

TEST_CASE("two-mode squeezed vacuum pair moment")
{
    const auto basis = build_basis(20);
    const double r = 0.1;
    const auto psi = matrix_exp(cd(r) * (pair_creator(basis) - pair_annihilator(basis))).apply(basis_state(basis, 0, 0));
    const auto rho = DensityMatrix::pure(basis, psi);
    const cd ab = expectation(pair_annihilator(basis), rho);
    CHECK(ab.real() == doctest::Approx(std::cosh(r) * std::sinh(r)).epsilon(1e-12));
    CHECK(ab.real() == doctest::Approx(0.10066).epsilon(1e-4));
    CHECK(std::abs(ab.imag()) < 1e-15);

    const auto sv = squeezed_vacuum(basis, r);
    CHECK(max_abs(sv.entries() - rho.entries()) < 1e-14);
}

TEST_CASE("squeezed thermal state realizes the requested pair moment")
{
    const auto basis = build_basis(20);
    for (double nbar : {0.0, 0.1, 0.3}) {
        const auto rho = squeezed_thermal(basis, nbar, nbar, 0.25);
        CHECK(expectation(pair_annihilator(basis), rho).real() == doctest::Approx(0.25).epsilon(1e-8));
        CHECK(leakage(basis, rho.entries()) < 1e-9);
    }
    CHECK(fock::squeeze_for_pair_moment(0.0, 0.0, 0.25) == doctest::Approx(0.5 * std::asinh(0.5)));
}

TEST_CASE("thermal states")
{
    const auto basis = build_basis(8);
    CHECK(max_abs(thermal_state(basis, 0.0, 0.0).entries() - vacuum_state(basis).entries()) == 0.0);

    // Renormalization shifts weights by 2^-31 at this cutoff.
    const auto big = build_basis(30);
    const auto th = thermal_state(big, 1.0, 0.0);
    CHECK(th.entries()(big.index(1, 0), big.index(1, 0)).real() == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(std::abs(th.entries().trace() - 1.0) < 1e-12);

    const auto t2 = thermal_state(basis, 0.7, 0.2);
    CHECK(std::abs(t2.entries().trace() - 1.0) < 1e-12);
    CHECK(max_abs(t2.entries() - Matrix(t2.entries().diagonal().asDiagonal())) == 0.0);

    double last = 2.0;
    for (double nbar = 0.0; nbar <= 2.0; nbar += 0.25) {
        const double p = purity(thermal_state(basis, nbar, nbar));
        CHECK(p < last);
        last = p;
    }
    CHECK_THROWS_AS(thermal_state(basis, -0.1, 0.0), std::invalid_argument);
}

TEST_CASE("purity and expectation")
{
    const auto basis = build_basis(3);
    CHECK(purity(vacuum_state(basis)) == doctest::Approx(1.0));
    const double d = static_cast<double>(basis.dim());
    const auto mixed = DensityMatrix::checked(basis, Matrix::Identity(16, 16) / d);
    CHECK(purity(mixed) == doctest::Approx(1.0 / d));
    CHECK(expectation(total_number(basis), DensityMatrix::pure(basis, basis_state(basis, 2, 1))).real() ==
          doctest::Approx(3.0));
}

TEST_CASE("density matrix validation")
{
    const auto basis = build_basis(1);
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1.0;
    CHECK_NOTHROW(DensityMatrix::checked(basis, m));

    Matrix not_herm = m;
    not_herm(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix::checked(basis, not_herm), UnphysicalState);

    CHECK_THROWS_AS(DensityMatrix::checked(basis, 2.0 * m), UnphysicalState);

    Matrix neg = Matrix::Zero(4, 4);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix::checked(basis, neg), UnphysicalState);
    CHECK_THROWS_AS(DensityMatrix::checked(basis, Matrix::Identity(9, 9) / 9.0), BasisMismatch);

    const auto n = DensityMatrix::normalized(basis, 3.0 * m);
    CHECK(std::abs(n.entries().trace() - 1.0) < 1e-15);
}

TEST_CASE("normalized random states satisfy the density-matrix invariants")
{
    Gen gen(13);
    for (int trial = 0; trial < 20; ++trial) {
        const auto basis = build_basis(gen.integer(1, 5));
        const auto rho = DensityMatrix::normalized(basis, gen.density(basis.dim()) * gen.uniform(0.5, 3.0));
        const auto diag = diagnose(rho.entries());
        CHECK(diag.hermiticity_defect <= 1e-12);
        CHECK(diag.trace_error <= 1e-10);
        CHECK(diag.min_eigenvalue >= -1e-8);
    }
}

TEST_CASE("leakage counts the cutoff boundary")
{
    const auto basis = build_basis(3);
    CHECK(leakage(basis, DensityMatrix::pure(basis, basis_state(basis, 3, 0)).entries()) == 1.0);
    CHECK(leakage(basis, DensityMatrix::pure(basis, basis_state(basis, 2, 2)).entries()) == 0.0);
}
