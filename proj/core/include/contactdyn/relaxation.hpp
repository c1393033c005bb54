#ifndef CONTACTDYN_RELAXATION_HPP
#define CONTACTDYN_RELAXATION_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "contactdyn/flow.hpp"
#include "contactdyn/hamiltonian.hpp"
#include "contactdyn/legendrian.hpp"

// Shooting solver for semi-infinite trajectories from one Legendrian to
// another, plus the nodal-set diagnostics (assumption checks and cores).

namespace contactdyn {

struct ShootingProblem {
    ContactHamiltonian H;
    Legendrian source;
    Legendrian target;      // must lie in {H = 0}
    double u_lo, u_hi;      // source parameter window
    double horizon;         // typically 50 / c
    double capture_eps = 1e-3;
    double escape_box_half_width = 50.0;
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    int samples_per_run = 500;
    double target_level_tol = 1e-8;

    ShootingProblem(ContactHamiltonian H_, Legendrian source_, Legendrian target_, double lo,
                    double hi, double horizon_)
        : H(std::move(H_)), source(std::move(source_)), target(std::move(target_)), u_lo(lo),
          u_hi(hi), horizon(horizon_) {}
};

enum class ShotClass { captured, escaped, undecided };

const char* to_string(ShotClass c);

struct ShootingResult {
    double u;
    ShotClass cls = ShotClass::undecided;
    bool stayed_in_sigma_plus = false;  // H > 0 at all samples before capture
    bool suspect_crossing = false;      // numerically crossed {H=0} at the target
    double final_distance = 0.0;
    Trajectory traj;
};

struct ShootReport {
    std::vector<ShootingResult> shots;
    std::vector<double> boundaries;  // bisected captured/escaped parameter edges

    int n_captured() const;
    int n_escaped() const;
};

ShootReport shoot(const ShootingProblem& prob, int grid_size);

// Single-parameter classification (used by the grid and the bisection).
ShootingResult classify_shot(const ShootingProblem& prob, double u, bool keep_trajectory = false);

// Negative-control Hamiltonian -c Z (1 - Z/delta): equals -cZ to first order
// near Z = 0 and vanishes on the invariant hypersurface {Z = delta}.
ContactHamiltonian blocking_hamiltonian(double c, double delta);

struct ClubsuitReport {
    bool cond_i = false, cond_ii = false, cond_iii = false, cond_iv = false;
    double kappa1 = 0.0, kappa2 = 0.0;
    std::string note;
    bool ok() const { return cond_i && cond_ii && cond_iii && cond_iv; }
};

// Sampled verification of assumption (i)-(iv) for (H, target) on the box
// p x q x z; kappa witnesses found by grid search.
ClubsuitReport verify_clubsuit(const ContactHamiltonian& H, const Legendrian& target,
                               const std::array<double, 2>& p_range,
                               const std::array<double, 2>& q_range,
                               const std::array<double, 2>& z_range);

// Parameter grid on an invariant surface; (u, v) run over [0,1).
struct SurfaceSampling {
    int nu = 64, nv = 64;
    std::function<PhasePoint(double u, double v)> point;
};

struct CoresResult {
    std::vector<PhasePoint> q_minus;  // forward limit cloud of {dH(R) < 0}
    std::vector<PhasePoint> q_plus;   // backward limit cloud of {dH(R) > 0}
    std::vector<PhasePoint> gamma;    // separating set {dH(R) = 0} on M
};

CoresResult compute_cores(const ContactHamiltonian& H, const SurfaceSampling& M, double s_max,
                          double invariance_tol = 1e-8);

// Symmetric Hausdorff distance between a point cloud and a curve (the curve
// side sampled at curve_samples parameters).
double hausdorff_cloud_curve(const std::vector<PhasePoint>& cloud, const Legendrian& curve,
                             int curve_samples = 4096);

}  // namespace contactdyn

#endif
