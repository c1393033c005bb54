#ifndef CONTACTDYN_FLOW_HPP
#define CONTACTDYN_FLOW_HPP

#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "contactdyn/hamiltonian.hpp"
#include "contactdyn/legendrian.hpp"
#include "contactdyn/phase.hpp"

namespace contactdyn {

enum class EventKind {
    hypersurface_crossing,
    entered_neighborhood,
    escaped_box,
    converged,
    max_time,
    stiff,
};

const char* to_string(EventKind k);

struct TrajectoryEvent {
    double t;
    EventKind kind;
    std::string payload;
};

struct Trajectory {
    std::vector<double> times;        // strictly increasing, starts at 0
    std::vector<PhasePoint> points;
    std::vector<TrajectoryEvent> events;

    const PhasePoint& back() const { return points.back(); }
    double t_end() const { return times.back(); }
    bool has_event(EventKind k) const;
};

struct ScalarEvent {
    std::function<double(const PhasePoint&)> fn;
    int direction = 0;
    bool terminal = false;
    std::string name;
    EventKind kind = EventKind::hypersurface_crossing;
};

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double max_time = 10.0;
    double sample_dt = 0.0;  // > 0: uniform dense-output sampling
    std::vector<ScalarEvent> events;
    // Escape from this box is reported as an event; completeness of the
    // Hamiltonian cannot be checked numerically.
    double escape_box_half_width = 50.0;
    bool escape_box = true;

    void validate() const;
};

Trajectory integrate(const ContactHamiltonian& H, const PhasePoint& x0,
                     const IntegratorConfig& cfg);

// Finite-difference differential of the flow map, columns
// (phi^t(x0 + d e_i) - phi^t(x0 - d e_i)) / (2 d), d = 1e-6 max(1,|x0|).
Eigen::MatrixXd flow_map_differential(const ContactHamiltonian& H, const PhasePoint& x0,
                                      double t, double tol = 1e-11);

// True iff distance_to(target, x(t)) <= eps for every recorded sample in the
// trailing window.
bool detect_convergence(const Trajectory& traj, const Legendrian& target, double eps,
                        double window);

// CSV export: header t,p_1..p_n,q_1..q_n,z, shortest round-trip decimals,
// events appended as lines prefixed "#event,".
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace contactdyn

#endif
