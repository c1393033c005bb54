#ifndef CONTACTDYN_HAMILTONIAN_HPP
#define CONTACTDYN_HAMILTONIAN_HPP

#include <functional>
#include <optional>
#include <utility>

#include "contactdyn/phase.hpp"

namespace contactdyn {

struct HamGradient {
    Eigen::VectorXd dp;  // dH/dp
    Eigen::VectorXd dq;  // dH/dq
    double dz = 0.0;     // dH/dz

    bool finite() const {
        return dp.allFinite() && dq.allFinite() && std::isfinite(dz);
    }
};

// A scalar field H(p,q,z) together with an optional analytic gradient.
// Without one, central finite differences with per-coordinate step
// h_i = max(1,|x_i|) * eps^{1/3} are used.  The q coordinates may be
// declared periodic (all shipped periodic models use a common period).
class ContactHamiltonian {
  public:
    using ValueFn = std::function<double(const PhasePoint&)>;
    using GradFn = std::function<HamGradient(const PhasePoint&)>;

    explicit ContactHamiltonian(ValueFn value) : value_(std::move(value)) {}
    ContactHamiltonian(ValueFn value, GradFn grad)
        : value_(std::move(value)), grad_(std::move(grad)) {}

    double operator()(const PhasePoint& x) const { return value_(x); }

    HamGradient gradient(const PhasePoint& x) const {
        if (grad_) return grad_(x);
        return fd_gradient(x);
    }

    bool has_analytic_gradient() const { return static_cast<bool>(grad_); }

    // dH(R) = dH/dz, the Reeb-direction derivative.
    double dH_R(const PhasePoint& x) const { return gradient(x).dz; }

    std::optional<double> q_period;

  private:
    HamGradient fd_gradient(const PhasePoint& x) const;

    ValueFn value_;
    GradFn grad_;
};

// The contact vector field of H in the standard frame:
//   v = (dH/dq + p dH/dz,  -dH/dp,  H - p . dH/dp).
TangentVector contact_vector_field(const ContactHamiltonian& H, const PhasePoint& x);

// Pointwise sum; gradients are summed when both sides carry one.
ContactHamiltonian operator+(const ContactHamiltonian& A, const ContactHamiltonian& B);

// Diagnostic residual pair for H at x:
//   first  |lambda(v_H)(x) - H(x)|
//   second |(L_{v_H} lambda - dH(R) lambda)(w)| maximized over a random
//          unit tangent frame, the Lie derivative evaluated by a centered
//          finite-difference pullback of lambda along the time-delta flow.
std::pair<double, double> verify_contact_identity(const ContactHamiltonian& H,
                                                  const PhasePoint& x,
                                                  double delta = 1e-4,
                                                  std::uint64_t seed = 0x5eedULL);

}  // namespace contactdyn

#endif
