// Pair-loss master equation, RK4 integrator and state observables

#include "bhsim/lindblad.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "bhsim/errors.hpp"

namespace bhsim::lindblad {

using fock::Mode;

namespace {

Eigen::SparseMatrix<cd> to_sparse(const Matrix& m)
{
    Eigen::SparseMatrix<cd> s = m.sparseView(cd(0.0), 1.0);
    s.prune(cd(0.0), 0.0);
    s.makeCompressed();
    return s;
}

// Tr(op rho) over the nonzeros of op.
cd sparse_expectation(const Eigen::SparseMatrix<cd>& op, const Matrix& rho)
{
    cd acc{0.0};
    for (int k = 0; k < op.outerSize(); ++k) {
        for (Eigen::SparseMatrix<cd>::InnerIterator it(op, k); it; ++it) acc += it.value() * rho(it.col(), it.row());
    }
    return acc;
}

} // namespace

OperatorMatrix build_full_hamiltonian(const ModelParams& params, const TwoModeBasis& basis)
{
    params.validate();
    const auto a = fock::annihilator(basis, Mode::A);
    const auto b = fock::annihilator(basis, Mode::B);
    const auto ad = fock::adjoint(a);
    const auto bd = fock::adjoint(b);
    const auto na = ad * a;
    const auto nb = bd * b;

    OperatorMatrix h = params.omega * (na + nb);
    h = h - params.J * (ad * b + bd * a);
    h = h + (0.5 * params.U_a) * (ad * ad * a * a);
    h = h + (0.5 * params.U_b) * (bd * bd * b * b);
    h = h + (0.5 * params.U) * (na * nb);
    return h;
}

OperatorMatrix build_mott_hamiltonian(const ModelParams& params, const TwoModeBasis& basis)
{
    params.validate();
    const auto na = fock::number_operator(basis, Mode::A);
    const auto nb = fock::number_operator(basis, Mode::B);
    return params.omega * (na + nb) - (0.5 * params.U) * (na * nb);
}

// ---------------------------------------------------------------------------

LindbladSpec::LindbladSpec(OperatorMatrix hamiltonian, OperatorMatrix jump_op, double rate)
    : hamiltonian_(std::move(hamiltonian)), jump_op_(std::move(jump_op)), rate_(rate)
{
    if (!(hamiltonian_.basis() == jump_op_.basis())) {
        throw BasisMismatch("LindbladSpec: Hamiltonian and jump operator bases differ");
    }
    if (!(rate_ >= 0.0) || !std::isfinite(rate_)) throw std::invalid_argument("LindbladSpec: rate must be >= 0");
    const Matrix& h = hamiltonian_.entries();
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("LindbladSpec: Hamiltonian is not Hermitian");
    }
    // Column-major vec(A rho B) = (B^T kron A) vec(rho), with G = -iH - (rate/2) L^dag L:
    //     vec(d rho/dt) = (I kron G + conj(G) kron I + rate conj(L) kron L) vec(rho).
    const Matrix& l = jump_op_.entries();
    const Sparse g = to_sparse(cd(0.0, -1.0) * h - (0.5 * rate_) * (l.adjoint() * l));
    const Sparse ls = to_sparse(l);
    const Eigen::Index d = h.rows();
    std::vector<Eigen::Triplet<cd>> trip;
    for (int k = 0; k < g.outerSize(); ++k) {
        for (Sparse::InnerIterator it(g, k); it; ++it) {
            for (Eigen::Index c = 0; c < d; ++c) {
                trip.emplace_back(c * d + it.row(), c * d + it.col(), it.value());
                trip.emplace_back(it.row() * d + c, it.col() * d + c, std::conj(it.value()));
            }
        }
    }
    if (rate_ > 0.0) {
        for (int k = 0; k < ls.outerSize(); ++k) {
            for (Sparse::InnerIterator u(ls, k); u; ++u) {
                for (int m = 0; m < ls.outerSize(); ++m) {
                    for (Sparse::InnerIterator v(ls, m); v; ++v) {
                        trip.emplace_back(u.row() * d + v.row(), u.col() * d + v.col(),
                                          rate_ * std::conj(u.value()) * v.value());
                    }
                }
            }
        }
    }
    liouvillian_.resize(d * d, d * d);
    liouvillian_.setFromTriplets(trip.begin(), trip.end());
    liouvillian_.prune(cd(0.0), 0.0);
    liouvillian_.makeCompressed();
}

LindbladSpec LindbladSpec::pair_loss(OperatorMatrix hamiltonian, double kappa)
{
    auto l = fock::pair_annihilator(hamiltonian.basis());
    return {std::move(hamiltonian), std::move(l), kappa};
}

Matrix LindbladSpec::rhs(const Matrix& rho) const
{
    const Eigen::Index d = basis().dim();
    if (rho.rows() != d || rho.cols() != d) throw BasisMismatch("lindblad_rhs: state does not match basis");
    Matrix out(d, d);
    Eigen::Map<Eigen::VectorXcd>(out.data(), d * d).noalias() =
        liouvillian_ * Eigen::Map<const Eigen::VectorXcd>(rho.data(), d * d);
    return out;
}

Matrix lindblad_rhs(const LindbladSpec& spec, const Matrix& rho) { return spec.rhs(rho); }

Matrix lindblad_rhs(const LindbladSpec& spec, const DensityMatrix& rho)
{
    if (!(rho.basis() == spec.basis())) throw BasisMismatch("lindblad_rhs: state does not match basis");
    return spec.rhs(rho.entries());
}

// ---------------------------------------------------------------------------

gaussian::CovarianceMatrix4 covariance_from_state(const TwoModeBasis& basis, const Matrix& rho_raw)
{
    if (rho_raw.rows() != basis.dim() || rho_raw.cols() != basis.dim()) {
        throw BasisMismatch("covariance_from_state: state does not match basis");
    }
    const Matrix rho = rho_raw / rho_raw.trace();
    using Sparse = Eigen::SparseMatrix<cd>;
    const Sparse a = to_sparse(fock::annihilator(basis, Mode::A).entries());
    const Sparse b = to_sparse(fock::annihilator(basis, Mode::B).entries());
    const Sparse ad = a.adjoint();
    const Sparse bd = b.adjoint();
    auto ev = [&](const Sparse& op) { return sparse_expectation(op, rho); };

    // Normally ordered products are exact on the truncated space.
    const cd m_a = ev(a), m_b = ev(b);
    const cd aa = ev(a * a), bb = ev(b * b), ab = ev(a * b);
    const double na = ev(ad * a).real(), nb = ev(bd * b).real();
    const cd bd_a = ev(bd * a); // <b^dag a>, with <a^dag b> = conj

    // Moments <o_k o_l> for o = (a, a^dag, b, b^dag).
    Eigen::Matrix4cd m;
    m << aa,                na + 1.0,  ab,               bd_a,
         na,                std::conj(aa), std::conj(bd_a), std::conj(ab),
         ab,                std::conj(bd_a), bb,           nb + 1.0,
         bd_a,              std::conj(ab), nb,             std::conj(bb);
    const Eigen::Vector4cd means(m_a, std::conj(m_a), m_b, std::conj(m_b));

    // Rows: x, p_x, y, p_y in terms of o.
    const double s = 1.0 / std::sqrt(2.0);
    const cd i1(0.0, 1.0);
    Eigen::Matrix4cd c = Eigen::Matrix4cd::Zero();
    c.row(0) << s, s, 0.0, 0.0;
    c.row(1) << -i1 * s, i1 * s, 0.0, 0.0;
    c.row(2) << 0.0, 0.0, s, s;
    c.row(3) << 0.0, 0.0, -i1 * s, i1 * s;

    const Eigen::Matrix4cd sym = 0.5 * (m + m.transpose());
    const Eigen::Matrix4cd second = c * sym * c.transpose();
    const Eigen::Vector4cd r_mean = c * means;
    gaussian::Matrix4 v;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) v(i, j) = second(i, j).real() - r_mean(i).real() * r_mean(j).real();
    }
    v = 0.5 * (v + v.transpose()).eval();
    return {v, gaussian::Convention::half};
}

gaussian::CovarianceMatrix4 covariance_from_state(const DensityMatrix& rho)
{
    return covariance_from_state(rho.basis(), rho.entries());
}

Observables observe(const TwoModeBasis& basis, const Matrix& rho, bool with_min_eigenvalue)
{
    Observables o{};
    const cd tr = rho.trace();
    o.trace_error = std::abs(tr - cd(1.0));
    o.delta = sparse_expectation(to_sparse(fock::pair_annihilator(basis).entries()), rho) / tr;
    o.purity = fock::purity(rho) / std::norm(tr);
    o.leakage = fock::leakage(basis, rho) / tr.real();
    o.min_eigenvalue = with_min_eigenvalue ? fock::diagnose(rho).min_eigenvalue : 0.0;
    o.covariance = covariance_from_state(basis, rho);
    return o;
}

Trajectory integrate(const LindbladSpec& spec, const DensityMatrix& rho0, double t_end, double dt,
                     int record_every, const IntegrateOptions& options)
{
    if (!(dt > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("integrate: dt and t_end must be > 0");
    if (record_every < 1) throw std::invalid_argument("integrate: record_every must be >= 1");
    if (!(rho0.basis() == spec.basis())) throw BasisMismatch("integrate: initial state does not match basis");

    const TwoModeBasis& basis = spec.basis();
    const auto steps = static_cast<long>(std::llround(t_end / dt));
    if (steps < 1) throw std::invalid_argument("integrate: t_end shorter than one step");

    Trajectory traj;
    auto record = [&](double t, const Matrix& rho) {
        Observables o = observe(basis, rho, options.track_min_eigenvalue);
        traj.max_trace_error = std::max(traj.max_trace_error, o.trace_error);
        traj.max_leakage = std::max(traj.max_leakage, o.leakage);
        if (options.track_min_eigenvalue) traj.min_eigenvalue = std::min(traj.min_eigenvalue, o.min_eigenvalue);
        traj.times.push_back(t);
        traj.records.push_back(std::move(o));
        if (options.retain_states) traj.states.push_back(rho);
    };

    Matrix rho = rho0.entries();
    record(0.0, rho);
    for (long step = 1; step <= steps; ++step) {
        const Matrix k1 = spec.rhs(rho);
        const Matrix k2 = spec.rhs(rho + (0.5 * dt) * k1);
        const Matrix k3 = spec.rhs(rho + (0.5 * dt) * k2);
        const Matrix k4 = spec.rhs(rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint()).eval();
        if (!rho.allFinite()) throw NumericError(fmt::format("integrate: state diverged at step {}", step));
        if (step % record_every == 0 || step == steps) record(static_cast<double>(step) * dt, rho);
    }

    if (traj.max_trace_error > options.trace_warning) {
        traj.warning = true;
        traj.warnings.push_back(fmt::format("trace error {:.3e} exceeds {:.1e}", traj.max_trace_error,
                                            options.trace_warning));
    }
    if (traj.max_leakage > options.leakage_warning) {
        traj.warning = true;
        traj.warnings.push_back(fmt::format("cutoff leakage {:.3e} exceeds {:.1e}", traj.max_leakage,
                                            options.leakage_warning));
    }
    return traj;
}

} // namespace bhsim::lindblad
