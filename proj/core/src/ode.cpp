#include "contactdyn/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace contactdyn {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;

constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;

// b - b*, for the embedded 4th-order error estimate.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// Dense-output coefficients (Hairer, Norsett & Wanner).
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct DenseSegment {
    double t0, h;
    Eigen::VectorXd r1, r2, r3, r4, r5;

    Eigen::VectorXd eval(double t) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
    }
};

struct StepResult {
    Eigen::VectorXd y1;
    Eigen::VectorXd err;  // b - b* combination, scaled by h
    Eigen::VectorXd k7;   // FSAL derivative at (t0+h, y1)
};

// One DOPRI5 step from (t, y) with derivative k1 = f(t, y).
StepResult dopri5_step(const OdeRhs& f, double t, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& k1, double h, long& n_rhs,
                       Eigen::VectorXd* k_dense = nullptr) {
    const auto n = y.size();
    Eigen::VectorXd k2(n), k3(n), k4(n), k5(n), k6(n), ytmp(n);

    ytmp = y + h * (a21 * k1);
    f(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, ytmp, k6);

    StepResult r;
    r.y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    r.k7.resize(n);
    f(t + h, r.y1, r.k7);
    n_rhs += 6;

    r.err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * r.k7);

    if (k_dense) {
        *k_dense = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * r.k7);
    }
    return r;
}

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                  const Eigen::VectorXd& y1, const OdeOptions& o) {
    const auto n = err.size();
    if (o.max_norm) {
        double m = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sc = o.abs_tol + o.rel_tol * std::max(std::abs(y0(i)), std::abs(y1(i)));
            m = std::max(m, std::abs(err(i)) / sc);
        }
        return m;
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sc = o.abs_tol + o.rel_tol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        const double r = err(i) / sc;
        s += r * r;
    }
    return std::sqrt(s / static_cast<double>(n));
}

double initial_step(const OdeRhs& f, double t0, const Eigen::VectorXd& y0,
                    const Eigen::VectorXd& f0, double dir, const OdeOptions& o, long& n_rhs) {
    const auto n = y0.size();
    double d0 = 0.0, d1n = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sc = o.abs_tol + o.rel_tol * std::abs(y0(i));
        d0 = std::max(d0, std::abs(y0(i)) / sc);
        d1n = std::max(d1n, std::abs(f0(i)) / sc);
    }
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, o.max_step);

    Eigen::VectorXd y1 = y0 + dir * h0 * f0;
    Eigen::VectorXd f1(n);
    f(t0 + dir * h0, y1, f1);
    ++n_rhs;

    double d2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sc = o.abs_tol + o.rel_tol * std::abs(y0(i));
        d2 = std::max(d2, std::abs(f1(i) - f0(i)) / sc);
    }
    d2 /= h0;

    double h1;
    if (std::max(d1n, d2) <= 1e-15) {
        h1 = std::max(1e-6, h0 * 1e-3);
    } else {
        h1 = std::pow(0.01 / std::max(d1n, d2), 0.2);
    }
    return std::min({100.0 * h0, h1, o.max_step});
}

}  // namespace

OdeSolution ode_integrate(const OdeRhs& f, double t0, const Eigen::VectorXd& y0, double t1,
                          const OdeOptions& opts, const std::vector<OdeEvent>& events) {
    if (opts.rel_tol <= 0 || opts.abs_tol <= 0)
        throw std::invalid_argument("ode_integrate: tolerances must be positive");

    OdeSolution sol;
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    const double ev_tol = opts.event_time_tol > 0 ? opts.event_time_tol : 1e-12 * std::max(span, 1.0);

    sol.t.push_back(t0);
    sol.y.push_back(y0);

    if (span == 0.0) return sol;

    Eigen::VectorXd y = y0;
    double t = t0;
    Eigen::VectorXd k1(y.size());
    f(t, y, k1);
    ++sol.n_rhs;

    double h = opts.initial_step > 0 ? std::min(opts.initial_step, opts.max_step)
                                     : initial_step(f, t, y, k1, dir, opts, sol.n_rhs);

    std::vector<double> gvals(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) gvals[i] = events[i].g(t, y);

    double next_sample = opts.sample_dt > 0 ? t0 + dir * opts.sample_dt : 0.0;

    // PI controller state (Hairer's dopri5).
    constexpr double beta = 0.04, safe = 0.9, expo1 = 0.2 - beta * 0.75;
    constexpr double facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;
    double facold = 1e-4;
    bool last_rejected = false;

    for (long step = 0; step < opts.max_steps; ++step) {
        if (dir * (t - t1) >= 0.0) break;

        h = std::min(h, opts.max_step);
        bool last_step = false;
        if (std::abs(h) >= std::abs(t1 - t)) {
            h = std::abs(t1 - t);
            last_step = true;
        }
        if (h <= std::abs(t) * 1e-16 * 16.0 + 1e-300) {
            sol.status = OdeStatus::step_underflow;
            return sol;
        }

        Eigen::VectorXd kd;
        StepResult r = dopri5_step(f, t, y, k1, dir * h, sol.n_rhs, &kd);

        if (!r.y1.allFinite()) {
            // Retry smaller; give up when the step collapses.
            h *= 0.25;
            if (h <= std::abs(t) * 1e-16 * 16.0 + 1e-300) {
                sol.status = OdeStatus::nonfinite;
                return sol;
            }
            last_rejected = true;
            continue;
        }

        const double err = error_norm(r.err, y, r.y1, opts);
        const double fac11 = std::pow(std::max(err, 1e-30), expo1);

        if (err > 1.0) {
            h /= std::min(facc1, fac11 / safe);
            last_rejected = true;
            continue;
        }

        // Accepted.
        const double tnew = t + dir * h;
        DenseSegment seg;
        seg.t0 = t;
        seg.h = dir * h;
        seg.r1 = y;
        seg.r2 = r.y1 - y;
        seg.r3 = dir * h * k1 - seg.r2;
        seg.r4 = seg.r2 - dir * h * r.k7 - seg.r3;
        seg.r5 = kd;

        // Event location on this segment.
        bool terminated = false;
        double t_cut = tnew;
        for (std::size_t i = 0; i < events.size(); ++i) {
            const double g0 = gvals[i];
            const double g1 = events[i].g(tnew, r.y1);
            const bool up = g0 < 0.0 && g1 >= 0.0;
            const bool down = g0 > 0.0 && g1 <= 0.0;
            const int d = events[i].direction;
            const bool hit = (d >= 0 && up) || (d <= 0 && down);
            if (!hit) continue;

            double ta = t, tb = tnew, ga = g0;
            while (std::abs(tb - ta) > ev_tol) {
                const double tm = 0.5 * (ta + tb);
                const double gm = events[i].g(tm, seg.eval(tm));
                if ((ga < 0.0) == (gm < 0.0)) {
                    ta = tm;
                    ga = gm;
                } else {
                    tb = tm;
                }
            }
            const double te = 0.5 * (ta + tb);
            OdeEventHit hitrec{te, seg.eval(te), static_cast<int>(i)};
            sol.events.push_back(hitrec);
            if (events[i].terminal && (!terminated || dir * (te - t_cut) < 0)) {
                terminated = true;
                t_cut = te;
            }
        }

        // Record output up to t_cut.
        if (opts.sample_dt > 0) {
            while (dir * (next_sample - t_cut) <= 0 && dir * (next_sample - t) > 0) {
                sol.t.push_back(next_sample);
                sol.y.push_back(seg.eval(next_sample));
                next_sample += dir * opts.sample_dt;
            }
            if (terminated || last_step) {
                const Eigen::VectorXd yend = terminated ? seg.eval(t_cut) : r.y1;
                if (sol.t.empty() || sol.t.back() != t_cut) {
                    sol.t.push_back(t_cut);
                    sol.y.push_back(yend);
                }
            }
        } else {
            sol.t.push_back(t_cut);
            sol.y.push_back(terminated ? seg.eval(t_cut) : r.y1);
        }

        if (terminated) {
            sol.status = OdeStatus::terminal_event;
            return sol;
        }

        t = tnew;
        y = r.y1;
        k1 = r.k7;
        for (std::size_t i = 0; i < events.size(); ++i) gvals[i] = events[i].g(t, y);

        if (last_step) break;

        double fac = fac11 / std::pow(facold, beta);
        fac = std::max(facc2, std::min(facc1, fac / safe));
        double hnew = h / fac;
        if (last_rejected) hnew = std::min(hnew, h);
        last_rejected = false;
        facold = std::max(err, 1e-4);
        h = hnew;
    }

    sol.status = OdeStatus::reached_end;
    return sol;
}

Eigen::VectorXd ode_integrate_fixed(const OdeRhs& f, double t0, const Eigen::VectorXd& y0,
                                    double t1, int n_steps) {
    if (n_steps <= 0) throw std::invalid_argument("ode_integrate_fixed: n_steps > 0 required");
    const double h = (t1 - t0) / n_steps;
    Eigen::VectorXd y = y0;
    Eigen::VectorXd k1(y.size());
    long n_rhs = 0;
    for (int i = 0; i < n_steps; ++i) {
        const double t = t0 + i * h;
        f(t, y, k1);
        y = dopri5_step(f, t, y, k1, h, n_rhs).y1;
    }
    return y;
}

}  // namespace contactdyn
