// Physical couplings of the dissipative two-site Bose-Hubbard model

#pragma once

namespace bhsim {

// All couplings are dimensionless with hbar = 1.
struct ModelParams {
    double omega{0.25};  // on-site frequency
    double J{0.0};       // hopping between the two modes
    double U_a{0.0};     // on-site interaction, mode a
    double U_b{0.0};     // on-site interaction, mode b
    double U{1.0};       // cross-mode interaction U_ab
    double kappa{0.25};  // pair-loss rate, >= 0
    double delta0{0.25}; // initial background field <ab>(0), > 0
    // Multiply the short-time background field by C = U/omega.
    bool include_C_factor{false};

    // Throws std::invalid_argument on kappa < 0, delta0 <= 0 or non-finite fields.
    void validate() const;

    // sqrt(U^2 + kappa^2), the damping composite entering the squeeze rate.
    double damping_composite() const;
};

} // namespace bhsim
