// Dense complex matrix exponential
//
// Scaling and squaring with diagonal Pade approximants of degree 3, 5, 7, 9
// or 13, selected from the 1-norm (Higham, SIAM J. Matrix Anal. Appl. 26, 2005).

#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "bhsim/errors.hpp"
#include "bhsim/fock.hpp"

namespace bhsim::fock {

namespace {

constexpr std::array<double, 4> kPade3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                       25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                        30270240.0,    2162160.0,    110880.0,     3960.0,
                                        90.0,          1.0};
constexpr std::array<double, 14> kPade13{
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double one_norm(const Matrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

Matrix solve_pade(const Matrix& u, const Matrix& v)
{
    Matrix out = (v - u).partialPivLu().solve(v + u);
    if (!out.allFinite()) throw NumericError("matrix_exp: Pade denominator is singular");
    return out;
}

// Degrees 3..9 share one shape: odd part on A, even part in powers of A^2.
template <std::size_t N>
Matrix pade_low(const Matrix& a, const std::array<double, N>& b)
{
    const Eigen::Index n = a.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    Matrix odd = b[1] * id;
    Matrix even = b[0] * id;
    Matrix power = id;
    for (std::size_t k = 2; k < N; k += 2) {
        power = power * a2;
        even += b[k] * power;
        if (k + 1 < N) odd += b[k + 1] * power;
    }
    return solve_pade(a * odd, even);
}

Matrix pade13(const Matrix& a)
{
    const auto& b = kPade13;
    const Eigen::Index n = a.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
    const Matrix u = a * (u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const Matrix v_inner = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
    const Matrix v = v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    return solve_pade(u, v);
}

Matrix dense_exp(const Matrix& m)
{
    const double norm = one_norm(m);
    if (norm <= kTheta3) return pade_low(m, kPade3);
    if (norm <= kTheta5) return pade_low(m, kPade5);
    if (norm <= kTheta7) return pade_low(m, kPade7);
    if (norm <= kTheta9) return pade_low(m, kPade9);

    const int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    Matrix result = pade13(m / std::ldexp(1.0, squarings));
    for (int i = 0; i < squarings; ++i) result = result * result;
    if (!result.allFinite()) throw NumericError("matrix_exp: overflow during squaring");
    return result;
}

// Groups of indices coupled through nonzero entries (union-find on the sparsity pattern).
std::vector<std::vector<Eigen::Index>> coupled_blocks(const Matrix& m)
{
    const Eigen::Index n = m.rows();
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    auto find = [&](Eigen::Index i) {
        while (parent[static_cast<std::size_t>(i)] != i) {
            auto& p = parent[static_cast<std::size_t>(i)];
            p = parent[static_cast<std::size_t>(p)];
            i = p;
        }
        return i;
    };
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i != j && m(i, j) != cd(0.0)) parent[static_cast<std::size_t>(find(i))] = find(j);
        }
    }
    std::vector<std::vector<Eigen::Index>> blocks;
    std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
    for (Eigen::Index i = 0; i < n; ++i) {
        auto& s = slot[static_cast<std::size_t>(find(i))];
        if (s < 0) {
            s = static_cast<Eigen::Index>(blocks.size());
            blocks.emplace_back();
        }
        blocks[static_cast<std::size_t>(s)].push_back(i);
    }
    return blocks;
}

} // namespace

Matrix matrix_exp(const Matrix& m)
{
    if (m.rows() != m.cols()) throw std::invalid_argument("matrix_exp: matrix must be square");
    if (!m.allFinite()) throw NumericError("matrix_exp: non-finite entries");
    if (m.size() == 0) return m;

    // A matrix that is block diagonal up to a permutation exponentiates block by block.
    const auto blocks = coupled_blocks(m);
    if (blocks.size() == 1) return dense_exp(m);
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (const auto& idx : blocks) {
        const Matrix e = dense_exp(m(idx, idx));
        out(idx, idx) = e;
    }
    return out;
}

} // namespace bhsim::fock
