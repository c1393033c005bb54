#ifndef CONTACTDYN_ODE_HPP
#define CONTACTDYN_ODE_HPP

#include <Eigen/Core>
#include <functional>
#include <limits>
#include <string>
#include <vector>

// Embedded Dormand-Prince 5(4) pair with PI step control, 4th-order dense
// output and event location by bisection on the dense polynomial.
// Integration backward in time (t1 < t0) is supported.

namespace contactdyn {

using OdeRhs = std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy)>;

struct OdeEvent {
    std::function<double(double t, const Eigen::VectorXd& y)> g;
    int direction = 0;     // +1: - to +, -1: + to -, 0: any crossing
    bool terminal = false;
    int tag = 0;
};

enum class OdeStatus { reached_end, terminal_event, step_underflow, nonfinite };

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  // 0: automatic
    // 0: record accepted steps; > 0: sample the dense output at this spacing.
    double sample_dt = 0.0;
    // Infinity-norm error control keeps the controller invariant under
    // permutations of the state vector (used by the master equation).
    bool max_norm = false;
    double event_time_tol = 0.0;  // 0: 1e-12 * |t1 - t0|
    long max_steps = 10'000'000;
};

struct OdeEventHit {
    double t;
    Eigen::VectorXd y;
    int event_index;
};

struct OdeSolution {
    std::vector<double> t;
    std::vector<Eigen::VectorXd> y;
    std::vector<OdeEventHit> events;
    OdeStatus status = OdeStatus::reached_end;
    long n_rhs = 0;

    const Eigen::VectorXd& back() const { return y.back(); }
};

OdeSolution ode_integrate(const OdeRhs& f, double t0, const Eigen::VectorXd& y0, double t1,
                          const OdeOptions& opts = {},
                          const std::vector<OdeEvent>& events = {});

// Fixed-step integration with the 5th-order solution of the same pair.
Eigen::VectorXd ode_integrate_fixed(const OdeRhs& f, double t0, const Eigen::VectorXd& y0,
                                    double t1, int n_steps);

}  // namespace contactdyn

#endif
