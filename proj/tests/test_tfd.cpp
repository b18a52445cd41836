#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bhsim/errors.hpp"
#include "bhsim/gaussian.hpp"
#include "bhsim/lindblad.hpp"
#include "bhsim/tfd.hpp"
#include "support.hpp"

using namespace bhsim;
using namespace bhsim::tfd;
using bhsim::testing::Gen;

namespace {

ModelParams figure_params()
{
    ModelParams p;
    p.omega = 0.25;
    p.delta0 = 0.25;
    p.U = 1.0;
    p.kappa = 0.25;
    return p;
}

double gamma_gap(const GammaCoeffs& x, const GammaCoeffs& y)
{
    return std::max({std::abs(x.gamma3 - y.gamma3), std::abs(x.gamma_plus - y.gamma_plus),
                     std::abs(x.gamma_minus - y.gamma_minus)});
}

} // namespace

TEST_CASE("Bogolyubov coefficients")
{
    const auto free = bogolyubov(0.25, 0.0, 0.25);
    CHECK(free.mu.real() == 1.0);
    CHECK(std::abs(free.nu) == 0.0);
    CHECK(free.r == 0.0);

    const auto p = bogolyubov(0.25, 1.0, 0.25);
    CHECK(p.mu.real() == doctest::Approx(1.1547005).epsilon(1e-7));
    CHECK(p.nu.real() == doctest::Approx(0.5773503).epsilon(1e-7));
    CHECK(std::abs(std::norm(p.mu) - std::norm(p.nu) - 1.0) < 1e-12);
    CHECK(std::cosh(p.r) == doctest::Approx(p.mu.real()));

    CHECK_THROWS_AS(bogolyubov(0.25, 2.0, 0.25), DegenerateDiagonalization);
    CHECK_THROWS_AS(bogolyubov(0.1, 2.0, 0.25), DegenerateDiagonalization);
}

TEST_CASE("Bogolyubov normalization holds across the hyperbolic regime")
{
    Gen gen(31);
    int used = 0;
    while (used < 200) {
        const double omega = gen.uniform(-3.0, 3.0);
        const double u = gen.uniform(-3.0, 3.0);
        const double d0 = gen.uniform(0.01, 2.0);
        if (omega * omega <= 0.25 * u * u * d0 * d0 * 1.0001) continue;
        const auto p = bogolyubov(omega, u, d0);
        CHECK(std::abs(std::norm(p.mu) - std::norm(p.nu) - 1.0) < 1e-10);
        ++used;
    }
}

TEST_CASE("short-time background field")
{
    ModelParams p = figure_params();
    CHECK(delta_short_time(p, 0.0) == cd(0.25));
    CHECK(std::abs(delta_short_time(p, 0.4) - cd(0.25, 0.025)) < 1e-16);
    p.include_C_factor = true;
    CHECK(std::abs(delta_short_time(p, 0.0) - cd(1.0)) < 1e-15);
    CHECK(background_prefactor(p) == 4.0);
    CHECK_THROWS_AS(delta_short_time(p, -1.0), std::invalid_argument);
}

TEST_CASE("background field tabulation")
{
    const ModelParams p = figure_params();
    const auto f = BackgroundField::short_time(p, 2.0, 21);
    CHECK(f.mode() == FieldMode::short_time_closed_form);
    CHECK(f.covers(2.0));
    CHECK_FALSE(f.covers(2.1));
    CHECK_THROWS_AS(f.value_at(2.5), std::domain_error);
    CHECK_THROWS_AS(f.integral(-0.1), std::domain_error);
    CHECK(std::abs(f.integral(1.3) - 0.25 * cd(1.3, 0.5 * 0.25 * 1.3 * 1.3)) < 1e-15);

    // The trapezoid rule is exact for the linear field.
    const auto s = BackgroundField::sampled(f.grid(), f.values());
    CHECK(std::abs(s.integral(1.3) - f.integral(1.3)) < 1e-14);
    CHECK(std::abs(s.value_at(0.37) - f.value_at(0.37)) < 1e-15);

    CHECK_THROWS_AS(BackgroundField::sampled({0.0}, {cd(1.0)}), std::invalid_argument);
    CHECK_THROWS_AS(BackgroundField::sampled({0.0, 0.2, 0.1}, {cd(1), cd(1), cd(1)}), std::invalid_argument);
    CHECK_THROWS_AS(BackgroundField::sampled({0.1, 0.2}, {cd(1), cd(1)}), std::invalid_argument);
}

TEST_CASE("zeta coefficients")
{
    ModelParams p = figure_params();
    const auto f = BackgroundField::short_time(p, 1.0, 11);
    const auto z0 = zeta_coeffs(p, 0.0, f);
    CHECK(std::abs(z0.zeta3) + std::abs(z0.zeta_plus) + std::abs(z0.zeta_minus) == 0.0);

    ModelParams lossless = p;
    lossless.kappa = 0.0;
    const auto zl = zeta_coeffs(lossless, 0.6, f);
    CHECK(std::abs(zl.zeta_plus - zl.zeta_minus) == 0.0);

    const auto constant = BackgroundField::sampled({0.0, 0.1, 0.2}, {cd(0.25), cd(0.25), cd(0.25)});
    const auto z = zeta_coeffs(p, 0.1, constant);
    CHECK(std::abs(z.zeta_minus - cd(0.003125, 0.0125)) < 1e-16);
    CHECK(std::abs(z.zeta_plus - cd(-0.003125, 0.0125)) < 1e-16);
    CHECK(std::abs(z.zeta3 - cd(0.0, 0.025)) < 1e-17);
    CHECK(std::abs(z.phi * z.phi - (0.25 * z.zeta3 * z.zeta3 - z.zeta_plus * z.zeta_minus)) < 1e-16);

    CHECK_THROWS_AS(zeta_coeffs(p, 0.5, constant), std::domain_error);
}

TEST_CASE("gamma coefficients")
{
    const auto id = gamma_from_zeta(make_su11(0.0, 0.0, 0.0));
    CHECK(id.gamma3 == cd(1.0));
    CHECK(id.gamma_plus == cd(0.0));
    CHECK(id.gamma_minus == cd(0.0));

    const auto rot = gamma_from_zeta(make_su11(cd(0.0, 0.25 * 0.7), 0.0, 0.0));
    CHECK(std::abs(rot.gamma3) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(rot.gamma3 - std::polar(1.0, 0.25 * 0.7)) < 1e-14);

    Gen gen(32);
    for (int trial = 0; trial < 50; ++trial) {
        const auto z = make_su11(gen.disk(1.0), gen.disk(1.0), gen.disk(1.0));
        CHECK(std::abs(z.phi * z.phi - (0.25 * z.zeta3 * z.zeta3 - z.zeta_plus * z.zeta_minus)) < 1e-12);
        CHECK(gamma_gap(gamma_from_zeta(z, z.phi), gamma_from_zeta(z, -z.phi)) < 1e-12);
    }

    // Series branch and literal branch agree across the switch.
    const auto near = make_su11(cd(2e-6, 1e-6), cd(1e-6, 0.0), cd(0.0, 1e-6));
    const auto away = make_su11(cd(2e-5, 1e-5), cd(1e-5, 0.0), cd(0.0, 1e-5));
    CHECK(std::abs(gamma_from_zeta(near).gamma_plus / 1e-6 - gamma_from_zeta(away).gamma_plus / 1e-5) < 1e-4);

    // exp(2 K0) singular point: cosh(phi) = zeta3 sinh(phi) / (2 phi) with zeta_+- = 0 needs zeta3 -> infinity,
    // so use a finite zeta with a vanishing reduced denominator instead.
    const double x = 1.0;
    const cd zeta3 = 2.0 * x / std::tanh(x);
    const auto singular = make_su11(zeta3, cd(0.25 * zeta3 * zeta3 - x * x), 1.0);
    CHECK(std::abs(singular.phi - x) < 1e-12);
    CHECK_THROWS_AS(gamma_from_zeta(singular), DisentanglementSingularity);
}

TEST_CASE("short-time gamma")
{
    ModelParams p = figure_params();
    const auto g0 = gamma_short_time(p, 0.0);
    CHECK(std::abs(g0.coeffs.gamma_plus) == 0.0);
    CHECK(std::abs(g0.coeffs.gamma_minus) == 0.0);

    ModelParams lossless = p;
    lossless.kappa = 0.0;
    const auto g = gamma_short_time(lossless, 0.1);
    const double expected = 0.5 * 0.25 * 1.0 * 0.1 * (1.0 + 0.25 * 0.0625 * 0.01);
    CHECK(expected == doctest::Approx(0.012501953125));
    CHECK(std::abs(g.coeffs.gamma_plus) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::abs(g.coeffs.gamma_minus) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(g.in_validity_window);
    CHECK_FALSE(gamma_short_time(p, 3.0).in_validity_window);

    // iU -+ kappa = -zeta e^{i phase}
    const auto gp = gamma_short_time(p, 0.2);
    const double zeta = p.damping_composite();
    CHECK(std::abs(cd(-p.kappa, p.U) + zeta * std::exp(cd(0.0, gp.phase_plus))) < 1e-15);
    CHECK(std::abs(cd(p.kappa, p.U) + zeta * std::exp(cd(0.0, gp.phase_minus))) < 1e-15);
}

TEST_CASE("short-time gamma is the leading order of the zeta route")
{
    const ModelParams p = figure_params();
    const auto f = BackgroundField::short_time(p, 0.1, 3);
    auto deviation = [&](double t) {
        const auto exact = gamma_from_zeta(zeta_coeffs(p, t, f));
        return std::abs(gamma_short_time(p, t).coeffs.gamma_plus / exact.gamma_plus - 1.0);
    };
    const double order = std::log10(deviation(1e-2) / deviation(1e-3));
    CHECK(order == doctest::Approx(1.0).epsilon(0.1));
    CHECK(deviation(1e-3) < 1e-3);

    // Magnitude relative to the leading term t (iU -+ kappa) delta0 / 2 tends to 1.
    for (double t : {1e-1, 1e-2, 1e-3}) {
        const auto g = gamma_short_time(p, t).coeffs;
        const double lead_plus = std::abs(-t * cd(-p.kappa, p.U) * p.delta0 / 2.0);
        const double lead_minus = std::abs(-t * cd(p.kappa, p.U) * p.delta0 / 2.0);
        CHECK(std::abs(std::abs(g.gamma_plus) / lead_plus - 1.0) < t * t);
        CHECK(std::abs(std::abs(g.gamma_minus) / lead_minus - 1.0) < t * t);
    }
}

TEST_CASE("Picard iteration")
{
    ModelParams p = figure_params();

    PicardOptions off;
    off.kernel_scale = 0.0;
    const auto src = delta_picard(p, 1.0, 101, 3, off);
    for (std::size_t k = 0; k < src.grid().size(); ++k) {
        CHECK(src.values()[k] == delta_short_time(p, src.grid()[k]));
    }

    ModelParams free = p;
    free.U = 0.0;
    free.kappa = 0.0;
    const auto one = delta_picard(free, 1.0, 101, 2);
    CHECK(one.picard().distances.back() == 0.0);
    CHECK(one.values().back() == delta_short_time(free, 1.0));
    CHECK(one.mode() == FieldMode::picard_iterated);

    for (double t_end : {0.5, 1.0, 2.0}) {
        for (auto kernel : {KernelForm::outside, KernelForm::integrand}) {
            PicardOptions opts;
            opts.kernel = kernel;
            opts.tolerance = 1e-13;
            const auto f = delta_picard(p, t_end, 401, 25, opts);
            const auto& d = f.picard().distances;
            CHECK(f.picard().converged);
            for (std::size_t k = 1; k < d.size() && d[k] > 1e-13; ++k) CHECK(d[k] / d[k - 1] < 0.5);
            CHECK(f.values().front() == cd(0.25));
        }
    }

    ModelParams with_c = p;
    with_c.include_C_factor = true;
    CHECK(std::abs(delta_picard(with_c, 0.1, 32, 1).values().front() - cd(1.0)) < 1e-15);

    CHECK_FALSE(delta_picard(p, 2.0, 64, 1, PicardOptions{KernelForm::outside, 1.0, 1e-30}).picard().converged);
    CHECK_THROWS_AS(delta_picard(p, 1.0, 8, 3), std::invalid_argument);
    CHECK_THROWS_AS(delta_picard(p, 1.0, 64, 0), std::invalid_argument);
}

TEST_CASE("first Picard iterate departs from the short-time field at third order")
{
    const ModelParams p = figure_params();
    auto correction = [&](double t) {
        const auto f = delta_picard(p, t, 64, 1);
        return std::abs(f.values().back() - delta_short_time(p, t));
    };
    const double slope = std::log10(correction(1e-2) / correction(1e-3));
    CHECK(slope == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("squeeze parameter")
{
    CHECK(squeeze_parameter_r(0.25, 0.25, 0.5, 0.0) == 0.0);
    CHECK(squeeze_parameter_r(0.25, 0.25, 0.5, 1.0) == doctest::Approx(0.06347656).epsilon(1e-8));
    double last = -1.0;
    for (int k = 0; k <= 80; ++k) {
        const double r = squeeze_parameter_r(0.25, 0.25, 0.5, 0.05 * k);
        CHECK(r > last);
        last = r;
    }
    const ModelParams p = figure_params();
    CHECK(squeeze_parameter_r(p, 1.0) == doctest::Approx(squeeze_parameter_r(0.25, 0.25, std::hypot(1.0, 0.25), 1.0)));
}

TEST_CASE("ordered product reproduces the full exponential on the interior")
{
    const auto basis = fock::build_basis(12);
    Gen gen(33);
    for (int trial = 0; trial < 20; ++trial) {
        cd v[3];
        double norm = 0.0;
        for (auto& c : v) {
            c = gen.complex_normal();
            norm += std::norm(c);
        }
        const double scale = 0.2 * gen.uniform() / std::sqrt(norm);
        const auto z = make_su11(scale * v[0], scale * v[1], scale * v[2]);
        const auto res = disentanglement_residual(basis, z);
        CHECK(res.interior_limit == 6);
        CHECK(res.interior < 1e-8);
    }

    // Small cutoff: nothing is left but the vacuum block, and the full space shows the truncation.
    const auto small = fock::build_basis(4);
    const auto z = make_su11(cd(0.0, 0.1), cd(0.08, 0.05), cd(-0.05, 0.1));
    const auto res = disentanglement_residual(small, z);
    CHECK(res.interior_limit == 0);
    CHECK(res.interior < 1e-8);
    CHECK(res.full > 100.0 * res.interior);
}

TEST_CASE("disentangled propagator acting on states")
{
    const auto basis = fock::build_basis(12);
    const auto th = fock::thermal_state(basis, 0.2, 0.1);
    const auto same = apply_disentangled_propagator(GammaCoeffs{}, th);
    CHECK(testing::max_abs(same.state.entries() - th.entries()) < 1e-15);
    CHECK(same.raw_trace == doctest::Approx(1.0));

    CHECK_THROWS_AS(apply_disentangled_propagator(GammaCoeffs{}, fock::vacuum_state(fock::build_basis(6))),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_disentangled_propagator(GammaCoeffs{0.0, 0.0, 0.0}, th), DisentanglementSingularity);

    // Lossless short-time propagation of the vacuum is a two-mode squeeze by r(t).
    ModelParams p = figure_params();
    p.kappa = 0.0;
    const double t = 0.05 / p.omega;
    const auto out = apply_disentangled_propagator(gamma_short_time(p, t).coeffs, fock::vacuum_state(basis));
    const auto v = lindblad::covariance_from_state(out.state);
    const double r = squeeze_parameter_r(p, t);
    const auto ref = gaussian::evolve_covariance(gaussian::squeeze_symplectic(r),
                                                 gaussian::thermal_covariance(0.5, 0.5, gaussian::Convention::half));
    CHECK(std::abs(v.block_c().determinant()) ==
          doctest::Approx(std::abs(ref.block_c().determinant())).epsilon(0.05));
    CHECK(v.block_a().determinant() == doctest::Approx(ref.block_a().determinant()).epsilon(0.05));
}
