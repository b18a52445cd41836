// Exception types thrown by the bhsim library

#pragma once

#include <stdexcept>
#include <string>

namespace bhsim {

// Operands built on different truncated bases.
class BasisMismatch : public std::invalid_argument {
public:
    explicit BasisMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// NaN/Inf input or a numerical routine that could not produce a finite result.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Covariance or density matrix violating a physicality bound.
class UnphysicalState : public std::invalid_argument {
public:
    explicit UnphysicalState(const std::string& what) : std::invalid_argument(what) {}
};

// Bogolyubov transform requested outside the hyperbolic regime.
class DegenerateDiagonalization : public std::domain_error {
public:
    explicit DegenerateDiagonalization(const std::string& what) : std::domain_error(what) {}
};

// Vanishing denominator in the su(1,1) ordered-product coefficients.
class DisentanglementSingularity : public std::domain_error {
public:
    explicit DisentanglementSingularity(const std::string& what) : std::domain_error(what) {}
};

} // namespace bhsim
