#ifndef CONTACTDYN_MODELS_HPP
#define CONTACTDYN_MODELS_HPP

#include <complex>
#include <functional>

#include "contactdyn/contactomorphism.hpp"
#include "contactdyn/flow.hpp"
#include "contactdyn/hamiltonian.hpp"
#include "contactdyn/legendrian.hpp"

// Self-contained worked models with closed-form predictions: Newton's law of
// cooling (three Hamiltonians) and the contact Moebius dynamics on J^1 S^1.

namespace contactdyn {

struct CoolingModel {
    enum class Variant { coupled, isentropic, sine };

    Variant variant = Variant::coupled;
    double a = 2.0;      // relaxation rate of the potential deviation
    double b = 1.0;      // entropy coupling (coupled variant), 0 otherwise
    double sigma = 1.0;  // target entropy (coupled variant)
    double eps = 0.0;    // sine variant amplitude, requires eps * n_sine < a
    int n_sine = 0;

    // equilibrium internal energy z = phi(q); defaults to a clipped exp
    std::function<double(double)> phi;
    std::function<double(double)> dphi;
    std::function<double(double)> d2phi;

    static CoolingModel coupled(double a, double b, double sigma);
    static CoolingModel isentropic(double a);
    static CoolingModel sine(double a, double eps, int n);

    void validate() const;

    ContactHamiltonian hamiltonian() const;
    // (P,Q,Z) = (p - phi'(q), q - sigma, z - phi(q)); sigma = 0 for the
    // isentropic and sine variants.
    Contactomorphism stability_coordinates() const;

    // coupled/isentropic variants: exact solution via the linear (P,Q,Z) system
    PhasePoint closed_form(const PhasePoint& x0, double t) const;
    // limit point of the trajectory through x0
    PhasePoint limit_point(const PhasePoint& x0) const;
    // sine variant: exact entropy evolution from the cotangent quadrature
    double sine_q_closed_form(double q0, double t) const;

    Legendrian equilibrium_curve(double q_lo, double q_hi) const;  // {z=phi, p=phi'}
};

// Integrated endpoint; the full trajectory is written to *out when given.
PhasePoint cooling_flow(const CoolingModel& model, const PhasePoint& x0, double t,
                        Trajectory* out = nullptr);

// Least-squares exponential rate of |f(x(t))| over [t_lo, t_hi].
double fit_exponential_rate(const Trajectory& traj,
                            const std::function<double(const PhasePoint&)>& f, double t_lo,
                            double t_hi);

struct MoebiusModel {
    double eps = 0.1;    // cutoff matching width
    double a_inf = 2.0;  // upper bound of the cutoff profile

    // a(s) = s - 1 on [0, 1+eps], then a C^1 increasing tail saturating at a_inf
    double cutoff(double s) const;
    double cutoff_prime(double s) const;

    ContactHamiltonian hamiltonian() const;  // H = a(p^2 + z^2), q-period 2 pi

    // Moebius evolution of w = z + i p while p^2 + z^2 < 1 + eps:
    // w(t) = (w0 cosh t - sinh t) / (-w0 sinh t + cosh t)
    static std::complex<double> w_closed_form(std::complex<double> w0, double t);

    Legendrian lambda_st() const;    // {p=0, z=-1}
    Legendrian lambda_unst() const;  // {p=0, z=+1}
    Legendrian K_c(double c) const;  // {p=0, z=c}
};

PhasePoint moebius_trajectory(const MoebiusModel& model, const PhasePoint& x0, double t,
                              Trajectory* out = nullptr);

}  // namespace contactdyn

#endif
