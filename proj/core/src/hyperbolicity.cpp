#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "contactdyn/flow.hpp"
#include "contactdyn/legendrian.hpp"

namespace contactdyn {

namespace {

Eigen::Vector3d cross3(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::Vector3d r;
    r(0) = a(1) * b(2) - a(2) * b(1);
    r(1) = a(2) * b(0) - a(0) * b(2);
    r(2) = a(0) * b(1) - a(1) * b(0);
    return r;
}

Eigen::VectorXd grad_vec(const ContactHamiltonian& H, const PhasePoint& x) {
    const HamGradient g = H.gradient(x);
    Eigen::VectorXd v(3);
    v << g.dp(0), g.dq(0), g.dz;
    return v;
}

PhasePoint flow_to(const ContactHamiltonian& H, const PhasePoint& x, double t) {
    IntegratorConfig cfg;
    cfg.max_time = t;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-13;
    cfg.escape_box = false;
    return integrate(H, x, cfg).back();
}

}  // namespace

HyperbolicityEstimate estimate_hyperbolicity(const ContactHamiltonian& H,
                                             const Legendrian& curve, double t_max) {
    const auto [u_lo, u_hi] = curve.param_window();

    // The curve must be invariant and R transverse to M = {H = 0} along it.
    for (int i = 0; i < 8; ++i) {
        const double u = u_lo + (u_hi - u_lo) * (i + 0.5) / 8.0;
        const PhasePoint x = curve.at(u);
        if (distance_to(curve, flow_to(H, x, 1.0)) > 1e-6)
            throw std::runtime_error("estimate_hyperbolicity: curve is not flow-invariant");
        if (std::abs(H.dH_R(x)) < 1e-12)
            throw std::runtime_error("estimate_hyperbolicity: M not transverse to R near curve");
    }

    std::vector<double> times;
    for (double t : {1.0, 2.0, 4.0, 8.0})
        if (t <= t_max) times.push_back(t);
    if (times.empty()) times.push_back(t_max);

    const int n_samples = 32;
    double a_est = std::numeric_limits<double>::infinity();
    double b_est = -std::numeric_limits<double>::infinity();
    double c_est = std::numeric_limits<double>::infinity();

    for (int i = 0; i < n_samples; ++i) {
        const double u = u_lo + (u_hi - u_lo) * (i + 0.5) / n_samples;
        const PhasePoint x = curve.at(u);
        c_est = std::min(c_est, -H.dH_R(x));

        // Splitting of T_x M: m1 along the curve, m2 its complement in ker dH.
        Eigen::VectorXd gh = grad_vec(H, x).normalized();
        Eigen::VectorXd m1 = curve.tangent(u).flat();
        m1 -= gh * gh.dot(m1);
        m1.normalize();
        Eigen::VectorXd m2 = cross3(gh, m1).normalized();

        for (double t : times) {
            const Eigen::MatrixXd J = flow_map_differential(H, x, t);
            const PhasePoint y = flow_to(H, x, t);

            const Eigen::VectorXd gy = grad_vec(H, y).normalized();
            Eigen::VectorXd t1 = J * m1;  // flow maps curve tangents to curve tangents
            t1 -= gy * gy.dot(t1);
            t1.normalize();
            const Eigen::VectorXd n1 = cross3(gy, t1).normalized();

            const Eigen::VectorXd Jm1 = J * m1, Jm2 = J * m2;
            const double a11 = t1.dot(Jm1), a12 = t1.dot(Jm2);
            const double a21 = n1.dot(Jm1), a22 = n1.dot(Jm2);

            const double norm_pi = std::hypot(a21, a22);
            const double norm_tau = std::hypot(a11, a12);
            a_est = std::min(a_est, -std::log(std::max(norm_pi, 1e-300)) / t);
            b_est = std::max(b_est, std::log(std::max(norm_tau, 1e-300)) / t);
        }
    }

    HyperbolicityEstimate est;
    est.a_est = a_est;
    est.b_est = b_est;
    est.c_est = c_est;
    est.normally_hyperbolic = a_est > 0.0 && a_est > std::abs(b_est);
    return est;
}

}  // namespace contactdyn
