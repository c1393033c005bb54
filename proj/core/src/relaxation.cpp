#include "contactdyn/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace contactdyn {

const char* to_string(ShotClass c) {
    switch (c) {
        case ShotClass::captured: return "captured";
        case ShotClass::escaped: return "escaped";
        case ShotClass::undecided: return "undecided";
    }
    return "?";
}

int ShootReport::n_captured() const {
    return static_cast<int>(std::count_if(shots.begin(), shots.end(), [](const ShootingResult& s) {
        return s.cls == ShotClass::captured;
    }));
}

int ShootReport::n_escaped() const {
    return static_cast<int>(std::count_if(shots.begin(), shots.end(), [](const ShootingResult& s) {
        return s.cls == ShotClass::escaped;
    }));
}

ShootingResult classify_shot(const ShootingProblem& prob, double u, bool keep_trajectory) {
    ShootingResult res;
    res.u = u;
    const PhasePoint x0 = prob.source.at(u);

    IntegratorConfig cfg;
    cfg.max_time = prob.horizon;
    cfg.rel_tol = prob.rel_tol;
    cfg.abs_tol = prob.abs_tol;
    cfg.sample_dt = prob.horizon / prob.samples_per_run;
    cfg.escape_box_half_width = prob.escape_box_half_width;
    {
        ScalarEvent ev;
        const ContactHamiltonian& H = prob.H;
        ev.fn = [&H](const PhasePoint& x) { return H(x); };
        ev.direction = -1;
        ev.terminal = true;
        ev.name = "left_sigma_plus";
        ev.kind = EventKind::hypersurface_crossing;
        cfg.events.push_back(std::move(ev));
    }

    const Trajectory traj = integrate(prob.H, x0, cfg);

    res.final_distance = distance_to(prob.target, traj.back());

    if (traj.has_event(EventKind::escaped_box)) {
        res.cls = ShotClass::escaped;
    } else if (traj.has_event(EventKind::hypersurface_crossing)) {
        // Crossing {H=0} at the invariant target component cannot happen for
        // an exact flow; flag it instead of classifying as escaped.
        if (res.final_distance <= 10.0 * prob.capture_eps) {
            res.cls = ShotClass::undecided;
            res.suspect_crossing = true;
        } else {
            res.cls = ShotClass::escaped;
        }
    } else if (traj.has_event(EventKind::stiff)) {
        res.cls = ShotClass::undecided;
    } else {
        // Full horizon reached: captured iff the trailing 20% stays in the tube.
        const double window = 0.2 * prob.horizon;
        res.cls = detect_convergence(traj, prob.target, prob.capture_eps, window)
                      ? ShotClass::captured
                      : ShotClass::undecided;
    }

    // Sigma_+ contract: H > 0 at every sample before entering the tube.
    bool in_plus = true;
    for (std::size_t i = 0; i < traj.points.size(); ++i) {
        if (distance_to(prob.target, traj.points[i]) <= prob.capture_eps) break;
        if (prob.H(traj.points[i]) <= 0.0) {
            in_plus = false;
            break;
        }
    }
    res.stayed_in_sigma_plus = in_plus;

    if (keep_trajectory) res.traj = traj;
    return res;
}

ShootReport shoot(const ShootingProblem& prob, int grid_size) {
    if (grid_size < 2) throw std::invalid_argument("shoot: grid_size >= 2 required");

    // Target must lie in the nodal set.
    {
        const auto [lo, hi] = prob.target.param_window();
        for (int i = 0; i <= 32; ++i) {
            const PhasePoint x = prob.target.at(lo + (hi - lo) * i / 32.0);
            if (std::abs(prob.H(x)) > prob.target_level_tol)
                throw std::invalid_argument("shoot: target does not lie in {H = 0}");
        }
    }

    ShootReport rep;
    rep.shots.reserve(grid_size);
    for (int i = 0; i < grid_size; ++i) {
        const double u = prob.u_lo + (prob.u_hi - prob.u_lo) * i / (grid_size - 1);
        rep.shots.push_back(classify_shot(prob, u, true));
    }

    // Refine captured/escaped transitions on the parameter axis.
    for (int i = 0; i + 1 < grid_size; ++i) {
        const ShotClass ca = rep.shots[i].cls, cb = rep.shots[i + 1].cls;
        const bool pair = (ca == ShotClass::captured && cb == ShotClass::escaped) ||
                          (ca == ShotClass::escaped && cb == ShotClass::captured);
        if (!pair) continue;
        double a = rep.shots[i].u, b = rep.shots[i + 1].u;
        ShotClass cls_a = ca;
        while (b - a > 1e-8) {
            const double m = 0.5 * (a + b);
            const ShotClass cm = classify_shot(prob, m).cls;
            if (cm == cls_a) {
                a = m;
            } else {
                b = m;
            }
        }
        rep.boundaries.push_back(0.5 * (a + b));
    }
    return rep;
}

ContactHamiltonian blocking_hamiltonian(double c, double delta) {
    if (c <= 0.0 || delta <= 0.0)
        throw std::invalid_argument("blocking_hamiltonian: c, delta > 0 required");
    auto value = [c, delta](const PhasePoint& x) { return -c * x.z * (1.0 - x.z / delta); };
    auto grad = [c, delta](const PhasePoint& x) {
        HamGradient g;
        g.dp = Eigen::VectorXd::Zero(x.n());
        g.dq = Eigen::VectorXd::Zero(x.n());
        g.dz = -c * (1.0 - 2.0 * x.z / delta);
        return g;
    };
    return ContactHamiltonian(value, grad);
}

ClubsuitReport verify_clubsuit(const ContactHamiltonian& H, const Legendrian& target,
                               const std::array<double, 2>& p_range,
                               const std::array<double, 2>& q_range,
                               const std::array<double, 2>& z_range) {
    ClubsuitReport rep;
    const int m = 21;

    double h_max = 0.0;
    std::vector<std::array<double, 2>> samples;  // (H, dH(R)) over Sigma_+
    samples.reserve((m + 1) * (m + 1) * (m + 1));
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j)
            for (int l = 0; l <= m; ++l) {
                const PhasePoint x(p_range[0] + (p_range[1] - p_range[0]) * i / m,
                                   q_range[0] + (q_range[1] - q_range[0]) * j / m,
                                   z_range[0] + (z_range[1] - z_range[0]) * l / m);
                const double h = H(x);
                if (h <= 0.0) continue;  // Sigma_+ read off sign H
                samples.push_back({h, H.dH_R(x)});
                h_max = std::max(h_max, h);
            }

    std::vector<double> kappas;
    for (int k = 10; k >= 1; --k) kappas.push_back(h_max * k / 10.0);

    auto slab_ok = [&](double lo, double hi) {
        for (const auto& s : samples)
            if (s[0] > lo && s[0] < hi && s[1] > 1e-12) return false;
        return true;
    };

    rep.kappa1 = 0.0;
    for (double k : kappas)
        if (slab_ok(0.0, k)) {
            rep.kappa1 = k;
            break;
        }
    rep.cond_i = rep.kappa1 > 0.0;

    rep.kappa2 = 0.0;
    for (double k : kappas) {
        if (k <= rep.kappa1) break;
        if (slab_ok(k, std::numeric_limits<double>::infinity())) rep.kappa2 = k;
    }
    if (rep.kappa2 == 0.0 && slab_ok(rep.kappa1, std::numeric_limits<double>::infinity()))
        rep.kappa2 = std::nextafter(rep.kappa1, h_max);
    rep.cond_ii = rep.kappa2 > rep.kappa1;

    // (iii): dH(R) < 0 in a small tube around the target.
    rep.cond_iii = true;
    const auto [u_lo, u_hi] = target.param_window();
    for (int i = 0; i <= 64 && rep.cond_iii; ++i) {
        const PhasePoint x = target.at(u_lo + (u_hi - u_lo) * i / 64.0);
        for (double dp : {-0.02, 0.0, 0.02})
            for (double dz : {-0.02, 0.0, 0.02}) {
                PhasePoint y = x;
                y.p(0) += dp;
                y.z += dz;
                if (H.dH_R(y) >= 0.0) {
                    rep.cond_iii = false;
                    rep.note = "(iii) fails: dH(R) >= 0 near the target";
                    break;
                }
            }
    }

    // (iv): trajectory probes from the Sigma_+ side of the target.
    rep.cond_iv = true;
    for (int i = 0; i < 8 && rep.cond_iv; ++i) {
        PhasePoint x = target.at(u_lo + (u_hi - u_lo) * (i + 0.5) / 8.0);
        PhasePoint y = x;
        y.z -= 0.02;  // below the nodal set
        if (H(y) <= 0.0) {
            y = x;
            y.z += 0.02;
            if (H(y) <= 0.0) continue;  // no Sigma_+ side found here
        }
        IntegratorConfig cfg;
        cfg.max_time = 30.0;
        cfg.rel_tol = 1e-9;
        cfg.abs_tol = 1e-11;
        const Trajectory tr = integrate(H, y, cfg);
        if (distance_to(target, tr.back()) > 1e-3) {
            rep.cond_iv = false;
            rep.note = "(iv) fails: probe near the target did not converge";
        }
    }
    return rep;
}

CoresResult compute_cores(const ContactHamiltonian& H, const SurfaceSampling& M, double s_max,
                          double invariance_tol) {
    CoresResult out;
    const int nu = M.nu, nv = M.nv;
    if (nu < 2 || nv < 2) throw std::invalid_argument("compute_cores: grid too small");

    Eigen::MatrixXd f(nu, nv);
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            const PhasePoint x = M.point(double(i) / nu, double(j) / nv);
            if (std::abs(H(x)) > invariance_tol)
                throw std::invalid_argument("compute_cores: sampled surface is not in {H = 0}");
            f(i, j) = H.dH_R(x);
        }

    // Gamma by bisection along u-edges (and v-edges) of the parameter grid.
    auto edge_root = [&](double u0, double v0, double u1, double v1, double f0) {
        double a = 0.0, b = 1.0;
        for (int it = 0; it < 40; ++it) {
            const double mid = 0.5 * (a + b);
            const PhasePoint x =
                M.point(u0 + (u1 - u0) * mid, v0 + (v1 - v0) * mid);
            const double fm = H.dH_R(x);
            if ((f0 < 0.0) == (fm < 0.0)) a = mid;
            else b = mid;
        }
        const double mid = 0.5 * (a + b);
        return M.point(u0 + (u1 - u0) * mid, v0 + (v1 - v0) * mid);
    };
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            const int i1 = (i + 1) % nu, j1 = (j + 1) % nv;
            if ((f(i, j) < 0.0) != (f(i1, j) < 0.0))
                out.gamma.push_back(edge_root(double(i) / nu, double(j) / nv, double(i + 1) / nu,
                                              double(j) / nv, f(i, j)));
            if ((f(i, j) < 0.0) != (f(i, j1) < 0.0))
                out.gamma.push_back(edge_root(double(i) / nu, double(j) / nv, double(i) / nu,
                                              double(j + 1) / nv, f(i, j)));
        }

    auto evolve = [&](const PhasePoint& x, double t_end) -> std::pair<bool, PhasePoint> {
        IntegratorConfig cfg;
        cfg.max_time = std::abs(t_end);
        cfg.rel_tol = 1e-8;
        cfg.abs_tol = 1e-10;
        if (t_end >= 0.0) {
            const Trajectory tr = integrate(H, x, cfg);
            return {!tr.has_event(EventKind::escaped_box), tr.back()};
        }
        // backward leg through the reversed field
        const ContactHamiltonian& Hc = H;
        auto value = [&Hc](const PhasePoint& y) { return -Hc(y); };
        auto grad = [&Hc](const PhasePoint& y) {
            HamGradient g = Hc.gradient(y);
            g.dp = -g.dp;
            g.dq = -g.dq;
            g.dz = -g.dz;
            return g;
        };
        const ContactHamiltonian Hrev(value, grad);
        const Trajectory tr = integrate(Hrev, x, cfg);
        return {!tr.has_event(EventKind::escaped_box), tr.back()};
    };

    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            if (f(i, j) == 0.0) continue;
            const PhasePoint x = M.point(double(i) / nu, double(j) / nv);
            if (f(i, j) < 0.0) {
                auto [ok, y] = evolve(x, s_max);
                if (ok) out.q_minus.push_back(y);
            } else {
                auto [ok, y] = evolve(x, -s_max);
                if (ok) out.q_plus.push_back(y);
            }
        }
    return out;
}

double hausdorff_cloud_curve(const std::vector<PhasePoint>& cloud, const Legendrian& curve,
                             int curve_samples) {
    if (cloud.empty()) throw std::invalid_argument("hausdorff_cloud_curve: empty cloud");
    double d_cloud = 0.0;
    for (const auto& x : cloud) d_cloud = std::max(d_cloud, distance_to(curve, x));

    const auto [lo, hi] = curve.param_window();
    const auto period = curve.q_period();
    double d_curve = 0.0;
    for (int i = 0; i < curve_samples; ++i) {
        const PhasePoint y = curve.at(lo + (hi - lo) * i / curve_samples);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& x : cloud) {
            double dq = y.q(0) - x.q(0);
            if (period) {
                dq = std::fmod(dq, *period);
                if (dq > 0.5 * *period) dq -= *period;
                if (dq < -0.5 * *period) dq += *period;
            }
            const double dp = y.p(0) - x.p(0), dz = y.z - x.z;
            best = std::min(best, dp * dp + dq * dq + dz * dz);
        }
        d_curve = std::max(d_curve, std::sqrt(best));
    }
    return std::max(d_cloud, d_curve);
}

}  // namespace contactdyn
