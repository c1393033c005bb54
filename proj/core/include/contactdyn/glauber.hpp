#ifndef CONTACTDYN_GLAUBER_HPP
#define CONTACTDYN_GLAUBER_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "contactdyn/ising.hpp"

// Discrete Glauber spin dynamics on a finite abelian group: exact master
// equation (|G| <= 16), the lumped Curie-Weiss chain, continuous-time Monte
// Carlo, a discrete-time mode, and the perturbed (Q,Z)-coupled dynamics.

namespace contactdyn {

struct SpinSystem {
    int N = 8;  // group (Z_N)^d presented as N^d sites
    int d = 1;
    bool curie_weiss = true;  // J_gh = b / |G| for g != h
    double b = 1.0;
    Eigen::MatrixXd J;  // explicit symmetric coupling when !curie_weiss
    double q = 0.0;     // external field
    double beta = 1.0;  // inverse temperature
    double c = 1.0;     // flip-rate scale

    int n_sites() const;
    double coupling(int g, int h) const;
    void validate() const;
};

using Configuration = std::vector<std::int8_t>;  // entries +-1

// H(sigma) = -q sum_g sigma(g) - sum_{unordered pairs} J_gh sigma(g) sigma(h).
// The unordered-pair convention makes Delta below hold verbatim.
double energy(const SpinSystem& sys, const Configuration& s);

// Delta = H(sigma) - H(sigma-bar_g) = -2 sigma(g) (q + sum_{h != g} J_gh sigma(h))
double energy_delta(const SpinSystem& sys, const Configuration& s, int g);

// w_g(sigma) = (c/2)(1 + tanh(beta Delta / 2))
double flip_rate(const SpinSystem& sys, const Configuration& s, int g);

// --- exact master equation (|G| <= 16, states indexed by spin bitmasks) ------

Eigen::VectorXd gibbs_measure(const SpinSystem& sys);
Eigen::VectorXd product_measure(const SpinSystem& sys, double m0);
Eigen::VectorXd master_generator_apply(const SpinSystem& sys, const Eigen::VectorXd& pi);
Eigen::VectorXd master_evolve(const SpinSystem& sys, const Eigen::VectorXd& pi0, double t,
                              double tol = 1e-10);
// distribution of the up-spin count k
Eigen::VectorXd lump_distribution(const SpinSystem& sys, const Eigen::VectorXd& pi);
std::vector<double> master_site_magnetizations(const SpinSystem& sys, const Eigen::VectorXd& pi);
double master_magnetization(const SpinSystem& sys, const Eigen::VectorXd& pi);
// -2 E[sigma(g) w_g(sigma)]
double master_flip_drift(const SpinSystem& sys, const Eigen::VectorXd& pi);

// --- lumped Curie-Weiss chain over k = #up spins ------------------------------

double lumped_rate_down(const SpinSystem& sys, int k);  // total k -> k-1
double lumped_rate_up(const SpinSystem& sys, int k);    // total k -> k+1
Eigen::VectorXd lumped_master_evolve(const SpinSystem& sys, const Eigen::VectorXd& pi0, double t,
                                     double tol = 1e-10);
Eigen::VectorXd lumped_stationary(const SpinSystem& sys);
Eigen::VectorXd binomial_lumped_measure(int n_sites, double m0);
double lumped_magnetization(const SpinSystem& sys, const Eigen::VectorXd& pik);
double lumped_flip_drift(const SpinSystem& sys, const Eigen::VectorXd& pik);

// --- Monte Carlo ---------------------------------------------------------------

struct MagnetizationPath {
    std::vector<double> t;
    std::vector<double> m;
    double at(double time) const;  // right-continuous step evaluation
};

Configuration all_up(int n);
Configuration random_product_configuration(int n, double m0, std::uint64_t seed);

MagnetizationPath gillespie_run(const SpinSystem& sys, const Configuration& s0, double t_max,
                                std::uint64_t seed);
// One sweep per step of length h: each site flips independently with
// probability h w_g(sigma), evaluated on the frozen configuration.
MagnetizationPath discrete_run(const SpinSystem& sys, const Configuration& s0, double h,
                               double t_max, std::uint64_t seed);

// --- perturbed dynamics (M1)-(M3) ----------------------------------------------

struct PerturbedRates {
    std::vector<double> w;  // per-site rates, clamped to [0, c']
    double c_prime;         // c - dF/dZ
    double r;               // noise mean dF/dQ
    double P;               // m - phi'_beta(Q)
    double dQ_dt;           // -dF/dP
    double dZ_dt;           // -c Z + F - P dF/dP
    bool clamped = false;
};

// Rates w'_g = (c'/2)(1 - sigma(g) tanh(beta(q + sum J sigma))) - sigma(g) r / 2
// evaluated at the macroscopic state (Q, Z); P is read off the configuration.
PerturbedRates perturbed_step_rates(const SpinSystem& sys, const Configuration& s, double Q,
                                    double Z, const PerturbationF& F);

struct PerturbedPath {
    std::vector<double> t, m, Q, Z, q_field;
};

// Event loop: sample (waiting time, site) from the current rates, advance
// (Q, Z) by one explicit Euler step over the waiting time, flip, and update
// q = Q - b m so the effective field matches the macroscopic state.
PerturbedPath perturbed_run(const SpinSystem& sys, const Configuration& s0, double Q0, double Z0,
                            const PerturbationF& F, double t_max, std::uint64_t seed);

}  // namespace contactdyn

#endif
