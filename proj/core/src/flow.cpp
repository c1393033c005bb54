#include "contactdyn/flow.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "contactdyn/ode.hpp"

namespace contactdyn {

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::hypersurface_crossing: return "hypersurface_crossing";
        case EventKind::entered_neighborhood: return "entered_neighborhood";
        case EventKind::escaped_box: return "escaped_box";
        case EventKind::converged: return "converged";
        case EventKind::max_time: return "max_time";
        case EventKind::stiff: return "stiff";
    }
    return "?";
}

bool Trajectory::has_event(EventKind k) const {
    return std::any_of(events.begin(), events.end(),
                       [k](const TrajectoryEvent& e) { return e.kind == k; });
}

void IntegratorConfig::validate() const {
    if (rel_tol <= 0.0 || abs_tol <= 0.0)
        throw std::invalid_argument("IntegratorConfig: tolerances must be positive");
    if (max_time <= 0.0) throw std::invalid_argument("IntegratorConfig: max_time must be positive");
}

Trajectory integrate(const ContactHamiltonian& H, const PhasePoint& x0,
                     const IntegratorConfig& cfg) {
    cfg.validate();
    if (!x0.finite()) throw std::invalid_argument("integrate: non-finite initial state");

    OdeRhs rhs = [&H](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        dy = contact_vector_field(H, PhasePoint::from_flat(y)).flat();
    };

    OdeOptions opts;
    opts.rel_tol = cfg.rel_tol;
    opts.abs_tol = cfg.abs_tol;
    opts.max_step = cfg.max_step;
    opts.sample_dt = cfg.sample_dt;
    opts.event_time_tol = 1e-12 * cfg.max_time;

    std::vector<OdeEvent> oev;
    for (const auto& se : cfg.events) {
        OdeEvent e;
        e.g = [fn = se.fn](double, const Eigen::VectorXd& y) {
            return fn(PhasePoint::from_flat(y));
        };
        e.direction = se.direction;
        e.terminal = se.terminal;
        oev.push_back(std::move(e));
    }
    const int box_index = static_cast<int>(oev.size());
    if (cfg.escape_box) {
        OdeEvent e;
        const double half = cfg.escape_box_half_width;
        e.g = [half](double, const Eigen::VectorXd& y) {
            return half - y.cwiseAbs().maxCoeff();
        };
        e.direction = -1;
        e.terminal = true;
        oev.push_back(std::move(e));
    }

    const OdeSolution sol = ode_integrate(rhs, 0.0, x0.flat(), cfg.max_time, opts, oev);

    Trajectory traj;
    traj.times.reserve(sol.t.size());
    traj.points.reserve(sol.t.size());
    for (std::size_t i = 0; i < sol.t.size(); ++i) {
        if (i > 0 && sol.t[i] <= traj.times.back()) continue;
        traj.times.push_back(sol.t[i]);
        traj.points.push_back(PhasePoint::from_flat(sol.y[i]));
    }

    for (const auto& hit : sol.events) {
        TrajectoryEvent te;
        te.t = hit.t;
        if (hit.event_index == box_index) {
            te.kind = EventKind::escaped_box;
            te.payload = "left [-" + std::to_string(cfg.escape_box_half_width) + "," +
                         std::to_string(cfg.escape_box_half_width) + "]";
        } else {
            const auto& se = cfg.events[static_cast<std::size_t>(hit.event_index)];
            te.kind = se.kind;
            te.payload = se.name;
        }
        traj.events.push_back(std::move(te));
    }

    switch (sol.status) {
        case OdeStatus::reached_end:
            traj.events.push_back({traj.t_end(), EventKind::max_time, ""});
            break;
        case OdeStatus::step_underflow:
            traj.events.push_back({traj.t_end(), EventKind::stiff, "step underflow"});
            break;
        case OdeStatus::nonfinite:
            traj.events.push_back({traj.t_end(), EventKind::stiff, "non-finite state"});
            break;
        case OdeStatus::terminal_event:
            break;
    }
    return traj;
}

Eigen::MatrixXd flow_map_differential(const ContactHamiltonian& H, const PhasePoint& x0,
                                      double t, double tol) {
    const Eigen::VectorXd y0 = x0.flat();
    const Eigen::Index dim = y0.size();
    Eigen::MatrixXd J = Eigen::MatrixXd::Identity(dim, dim);
    if (t == 0.0) return J;

    OdeRhs rhs = [&H](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        dy = contact_vector_field(H, PhasePoint::from_flat(y)).flat();
    };
    OdeOptions opts;
    opts.rel_tol = tol;
    opts.abs_tol = tol;

    const double d = 1e-6 * std::max(1.0, y0.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < dim; ++i) {
        Eigen::VectorXd yp = y0, ym = y0;
        yp(i) += d;
        ym(i) -= d;
        const Eigen::VectorXd up = ode_integrate(rhs, 0.0, yp, t, opts).back();
        const Eigen::VectorXd um = ode_integrate(rhs, 0.0, ym, t, opts).back();
        J.col(i) = (up - um) / (2.0 * d);
    }
    return J;
}

bool detect_convergence(const Trajectory& traj, const Legendrian& target, double eps,
                        double window) {
    if (traj.times.empty() || traj.t_end() <= window) return false;
    const double t0 = traj.t_end() - window;
    bool any = false;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.times[i] < t0) continue;
        any = true;
        if (distance_to(target, traj.points[i]) > eps) return false;
    }
    return any;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    if (traj.points.empty()) return;
    const Eigen::Index n = traj.points.front().n();
    os << "t";
    for (Eigen::Index i = 1; i <= n; ++i) os << fmt::format(",p_{}", i);
    for (Eigen::Index i = 1; i <= n; ++i) os << fmt::format(",q_{}", i);
    os << ",z\n";
    for (std::size_t r = 0; r < traj.times.size(); ++r) {
        os << fmt::format("{}", traj.times[r]);
        const PhasePoint& x = traj.points[r];
        for (Eigen::Index i = 0; i < n; ++i) os << fmt::format(",{}", x.p(i));
        for (Eigen::Index i = 0; i < n; ++i) os << fmt::format(",{}", x.q(i));
        os << fmt::format(",{}", x.z) << "\n";
    }
    for (const auto& e : traj.events) {
        os << fmt::format("#event,{},{}", e.t, to_string(e.kind));
        if (!e.payload.empty()) os << "," << e.payload;
        os << "\n";
    }
}

}  // namespace contactdyn
