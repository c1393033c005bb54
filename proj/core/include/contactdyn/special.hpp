#ifndef CONTACTDYN_SPECIAL_HPP
#define CONTACTDYN_SPECIAL_HPP

#include <cmath>
#include <stdexcept>

namespace contactdyn {

// phi_beta(u) = beta^{-1} ln(2 cosh(beta u)), in the overflow-safe
// log-sum-exp form  |u| + beta^{-1} ln(1 + e^{-2 beta |u|}).
inline double phi(double beta, double u) {
    if (beta <= 0.0) throw std::invalid_argument("phi: beta must be positive");
    const double a = std::abs(u);
    return a + std::log1p(std::exp(-2.0 * beta * a)) / beta;
}

// phi'_beta(u) = tanh(beta u)
inline double phi_prime(double beta, double u) {
    if (beta <= 0.0) throw std::invalid_argument("phi_prime: beta must be positive");
    return std::tanh(beta * u);
}

// phi''_beta(u) = beta sech^2(beta u)
inline double phi_second(double beta, double u) {
    const double t = std::tanh(beta * u);
    return beta * (1.0 - t * t);
}

inline double artanh(double x) { return std::atanh(x); }

}  // namespace contactdyn

#endif
