// Seeded input generators shared by the test binaries

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "bhsim/fock.hpp"
#include "bhsim/gaussian.hpp"

namespace bhsim::testing {

using cd = std::complex<double>;

// mt19937_64 output is fixed by the standard; the mapping to reals is done here so draws
// do not depend on the library's distribution implementations.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0)
    {
        const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)) % (hi - lo + 1); }

    double normal()
    {
        const double u1 = uniform(1e-300, 1.0);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    cd complex_normal() { return {normal(), normal()}; }

    // Uniform in the complex disk of the given radius.
    cd disk(double radius) { return std::polar(radius * std::sqrt(uniform()), 2.0 * std::numbers::pi * uniform()); }

    fock::Matrix matrix(Eigen::Index d)
    {
        fock::Matrix m(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) m(i, j) = complex_normal();
        }
        return m;
    }

    fock::Matrix hermitian(Eigen::Index d)
    {
        const fock::Matrix m = matrix(d);
        return 0.5 * (m + m.adjoint());
    }

    // Full-rank density matrix W W^dag / Tr.
    fock::Matrix density(Eigen::Index d)
    {
        const fock::Matrix w = matrix(d);
        const fock::Matrix rho = w * w.adjoint();
        return rho / rho.trace();
    }

    // Half-convention squeezed thermal state with random local rotations.
    gaussian::CovarianceMatrix4 squeezed_thermal(double nu_max = 3.0, double r_max = 1.5)
    {
        const auto th = gaussian::thermal_covariance(uniform(0.5, nu_max), uniform(0.5, nu_max),
                                                     gaussian::Convention::half);
        const auto sq = gaussian::evolve_covariance(gaussian::squeeze_symplectic(uniform(0.0, r_max)), th);
        const double two_pi = 2.0 * std::numbers::pi;
        return gaussian::evolve_covariance(gaussian::local_rotation(uniform(0.0, two_pi), uniform(0.0, two_pi)), sq);
    }

private:
    std::mt19937_64 eng_;
};

inline double max_abs(const fock::Matrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace bhsim::testing
