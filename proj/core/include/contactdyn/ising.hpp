#ifndef CONTACTDYN_ISING_HPP
#define CONTACTDYN_ISING_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "contactdyn/hamiltonian.hpp"
#include "contactdyn/legendrian.hpp"
#include "contactdyn/special.hpp"

// Mean-field Ising thermodynamics: free energy, equilibrium branches and the
// fold, both relaxation scenarios, the stability-coordinate equilibrium
// curves and the admissible Hamiltonian family.

namespace contactdyn {

struct IsingParams {
    double b;     // interaction strength >= 0
    double beta;  // inverse temperature > 0
    double c;     // relaxation rate > 0

    void validate() const;
};

// F(p,q) = -phi_beta(q + b p) + b p^2 / 2;  the potential coordinate is z = -F.
double free_energy(const IsingParams& par, double p, double q);

enum class MeanFieldCase { A, B, marginal };

// Fold (spinodal) field magnitude a_{b,beta} for b beta > 1, from the
// tangency system  p = tanh(beta(q+bp)),  b beta sech^2(beta(q+bp)) = 1.
double fold_point(double b, double beta);

class EquilibriumBranches {
  public:
    EquilibriumBranches(const IsingParams& par, double q_lo, double q_hi, int n);

    MeanFieldCase kind() const { return kind_; }
    double fold_q() const { return fold_; }  // NaN in case A
    std::pair<double, double> window() const { return {q_lo_, q_hi_}; }

    // Case A evaluator.
    double r(double q) const;
    // Case B evaluators; s follows the convention s = -inf for q > a_{b,beta}
    // and +inf for q < -a_{b,beta}.
    double r_plus(double q) const;
    double r_minus(double q) const;
    double s(double q) const;

    // Sampled tables for export; NaN marks an absent branch value.
    const std::vector<double>& q_grid() const { return qs_; }
    const std::vector<double>& r_minus_grid() const { return rm_; }
    const std::vector<double>& s_grid() const { return sm_; }
    const std::vector<double>& r_plus_grid() const { return rp_; }

  private:
    IsingParams par_;
    MeanFieldCase kind_;
    double fold_;
    double p_star_;
    double q_lo_, q_hi_;
    std::vector<double> qs_, rm_, sm_, rp_;

    double solve(double q, double lo, double hi) const;
};

EquilibriumBranches equilibrium_branches(const IsingParams& par, double q_lo, double q_hi,
                                         int n = 1024);

struct ScenarioILimit {
    double p_inf;
    bool unstable;
};

// Limit of the fixed-field Glauber ODE  dp/dt = -c p + c tanh(beta(q+bp)).
// With cross_validate the ODE is integrated to t = 200/c and compared.
ScenarioILimit scenario_I_limit(const IsingParams& par, double p0, double q,
                                bool cross_validate = false);

struct ScenarioIILimit {
    double p_inf, q_inf, z_inf;
};

ScenarioIILimit scenario_II_limit(const IsingParams& par, double p0, double q0);

// Explicit solution of the contact relaxation flow in original coordinates.
PhasePoint ising_explicit_trajectory(const IsingParams& par, const PhasePoint& x0, double t);

struct ScenarioComparison {
    double max_discrepancy = 0.0;
    // rows (p0, q0, p_I, p_II)
    std::vector<std::array<double, 4>> rows;
};

// Discrepancy |p_I - p_II| over initial conditions delta-close to the
// equilibrium with |q0| >= K (K > a_{b,beta} required in case B).
ScenarioComparison compare_scenarios(const IsingParams& par, double delta, double K,
                                     int grid = 8);

// Lambda_{a,alpha} in the (b,beta) stability coordinates, with the
// large-|Q| asymptote P -> 0, Z -> (a-b)/2 checked at the window ends.
Legendrian lambda_a_alpha(double a, double alpha, double b, double beta, double Q_max = 20.0);

// dP/dQ at the Q = 0 chord: (alpha - beta + alpha beta (a-b)) / (1 - alpha (a-b)).
// Throws std::domain_error at the front-projection pole 1 - alpha (a-b) = 0.
double dPdQ_at_chord(double a, double alpha, double b, double beta);

// --- model Hamiltonians -----------------------------------------------------

// -c z on any R^{2n+1}
ContactHamiltonian linear_hamiltonian(double c);
// h_{b,beta}(p,q,z) = c(-z + phi_beta(q+bp) - b p^2/2)
ContactHamiltonian ising_hamiltonian(const IsingParams& par);
// the same flow in the primary coordinates: c(-Z + phi_beta(Q))
ContactHamiltonian ising_hamiltonian_pqz(const IsingParams& par);

// --- admissible perturbations of -cZ ----------------------------------------

struct PerturbationF {
    std::function<double(double P, double Q, double Z)> value;
    // (dF/dP, dF/dQ, dF/dZ)
    std::function<std::array<double, 3>(double P, double Q, double Z)> grad;
};

struct AdmissibilityReport {
    bool cond_i = false, cond_ii = false, cond_iii = false, cond_iv = false;
    double kappa1 = 0.0, kappa2 = 0.0;
    std::string violation;
    bool ok() const { return cond_i && cond_ii && cond_iii && cond_iv; }
};

struct AdmissibleHamiltonian {
    double c, tau;
    double eps = 0.0, rho = 0.0;  // set for the default family
    PerturbationF F;

    double value(double P, double Q, double Z) const;
    ContactHamiltonian to_hamiltonian() const;  // phase-space reading (P,Q,Z)
};

// Smooth bump supported on rho <= |P| <= 4 rho, peak 1 at |P| = 2.5 rho.
double bump_g(double P, double rho);
double bump_g_prime(double P, double rho);

AdmissibilityReport check_admissibility(double c, double tau, const PerturbationF& F);

// Default family F = eps sin(2 pi Q / tau) g(P).  The sampler runs on both
// overloads; a failing report throws std::invalid_argument.
AdmissibleHamiltonian make_admissible(double c, double tau, double eps, double rho);
AdmissibleHamiltonian make_admissible(double c, double tau, const PerturbationF& F);

}  // namespace contactdyn

#endif
