#ifndef CONTACTDYN_LEGENDRIAN_HPP
#define CONTACTDYN_LEGENDRIAN_HPP

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "contactdyn/phase.hpp"

namespace contactdyn {

class ContactHamiltonian;

// One single-valued piece of a curve written as a graph over q.
struct GraphBranch {
    double q_lo = 0.0, q_hi = 0.0;
    std::function<double(double)> p;
    std::function<double(double)> z;
    std::function<double(double)> dpdq;  // null: callers fall back to differences
};

// A Legendrian curve in the n = 1 contact space, one of
//   - the 1-jet graph {z = phi(q), p = phi'(q)} over an interval or circle,
//   - a parametric curve u -> (p,q,z),
//   - the Ising equilibrium Lambda_{a,alpha} written implicitly in the
//     (P,Q,Z) stability coordinates of (b,beta),
//   - a jet-graph bump perturbation of any of the above.
class Legendrian {
  public:
    struct Impl;

    static Legendrian jet_graph(std::function<double(double)> phi,
                                std::function<double(double)> dphi, double q_lo, double q_hi,
                                std::optional<double> q_period = std::nullopt);
    static Legendrian zero_section(double q_lo, double q_hi,
                                   std::optional<double> q_period = std::nullopt);
    static Legendrian parametric(std::function<PhasePoint(double)> f, double u_lo, double u_hi,
                                 std::function<TangentVector(double)> df = nullptr,
                                 std::optional<double> q_period = std::nullopt);
    static Legendrian ising_equilibrium(double a, double alpha, double b, double beta,
                                        double Q_max = 20.0);

    // Shift by psi through the jet-space sum (p,q,z) -> (p+psi'(q), q, z+psi(q)).
    Legendrian jet_perturbed(std::function<double(double)> psi,
                             std::function<double(double)> dpsi) const;

    PhasePoint at(double u) const;
    TangentVector tangent(double u) const;
    std::pair<double, double> param_window() const;
    std::optional<double> q_period() const;
    std::vector<GraphBranch> graph_branches(double q_lo, double q_hi, int grid = 2048) const;

  private:
    explicit Legendrian(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

// Euclidean distance from x to the curve (circle metric in q for periodic
// curves): 512-sample scan plus golden-section refinement.
double distance_to(const Legendrian& curve, const PhasePoint& x);

struct ReebChord {
    PhasePoint start;  // on curve0
    PhasePoint end;    // on curve1, same (p,q)
    double length;     // z_end - z_start > 0
    bool nondegenerate;
};

// All Reeb chords from curve0 up to curve1 over q in [q_lo, q_hi]: roots of
// p0(q) = p1(q) with z0(q) < z1(q), located by sign-change bracketing on a
// 2048-point grid and bisection to 1e-12.  A chord is flagged non-degenerate
// when |d/dq (p0 - p1)| > 1e-8 at the root.
std::vector<ReebChord> find_reeb_chords(const Legendrian& curve0, const Legendrian& curve1,
                                        double q_lo, double q_hi);

// max over a 512-point parameter grid of |lambda(tangent)| / |tangent|.
double verify_legendrian(const Legendrian& curve);

struct HyperbolicityEstimate {
    double a_est;  // normal contraction rate
    double b_est;  // tangential growth rate
    double c_est;  // min of -dH(R) along the curve
    bool normally_hyperbolic;
};

// Normal-hyperbolicity rates of an H-invariant curve inside M = {H = 0},
// from finite-difference flow-map differentials at 32 samples and
// t in {1,2,4,8} intersected with [0, t_max].
HyperbolicityEstimate estimate_hyperbolicity(const ContactHamiltonian& H,
                                             const Legendrian& curve, double t_max);

}  // namespace contactdyn

#endif
