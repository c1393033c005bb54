#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <sstream>

#include "contactdyn/flow.hpp"
#include "contactdyn/ising.hpp"
#include "contactdyn/models.hpp"
#include "contactdyn/ode.hpp"

using namespace contactdyn;

namespace {

ContactHamiltonian cooling_pqz(double a, double b) {
    // -aZ + bPQ in stability coordinates
    auto value = [a, b](const PhasePoint& x) { return -a * x.z + b * x.p(0) * x.q(0); };
    auto grad = [a, b](const PhasePoint& x) {
        HamGradient g;
        g.dp = Eigen::VectorXd::Constant(1, b * x.q(0));
        g.dq = Eigen::VectorXd::Constant(1, b * x.p(0));
        g.dz = -a;
        return g;
    };
    return ContactHamiltonian(value, grad);
}

}  // namespace

TEST_CASE("exponential contraction of -cz") {
    IntegratorConfig cfg;
    cfg.max_time = 5.0;
    const Trajectory traj = integrate(linear_hamiltonian(1.0), PhasePoint(1, 0, 1), cfg);
    const PhasePoint& xe = traj.back();
    CHECK(std::abs(xe.p(0) - std::exp(-5.0)) <= 1e-8);
    CHECK(std::abs(xe.q(0)) <= 1e-10);
    CHECK(std::abs(xe.z - std::exp(-5.0)) <= 1e-8);
}

TEST_CASE("Ising relaxation flow matches the explicit solution") {
    for (const double b : {6.0, 0.5}) {
        const IsingParams par{b, 1.0, 1.0};
        const ContactHamiltonian H = ising_hamiltonian(par);
        for (const double p0 : {-0.8, 0.1, 0.9}) {
            for (const double q0 : {-1.0, 0.4}) {
                const PhasePoint x0(p0, q0, 0.2);
                IntegratorConfig cfg;
                cfg.max_time = 10.0;
                cfg.sample_dt = 0.5;
                const Trajectory traj = integrate(H, x0, cfg);
                double worst = 0.0, drift = 0.0;
                for (std::size_t i = 0; i < traj.times.size(); ++i) {
                    const PhasePoint want = ising_explicit_trajectory(par, x0, traj.times[i]);
                    const PhasePoint& got = traj.points[i];
                    worst = std::max({worst, std::abs(want.p(0) - got.p(0)),
                                      std::abs(want.q(0) - got.q(0)), std::abs(want.z - got.z)});
                    drift = std::max(drift, std::abs((got.q(0) + b * got.p(0)) -
                                                     (q0 + b * p0)));
                }
                CHECK(worst <= 1e-6);
                CHECK(drift <= 1e-7);  // Q is a conserved quantity of this flow
            }
        }
    }
}

TEST_CASE("Moebius dynamics matches the closed form inside the solid torus") {
    const MoebiusModel model;
    Trajectory traj;
    moebius_trajectory(model, PhasePoint(0.5, 0.0, 0.0), 3.0, &traj);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const PhasePoint& x = traj.points[i];
        if (x.p(0) * x.p(0) + x.z * x.z >= 1.0 + model.eps) continue;
        const std::complex<double> w =
            MoebiusModel::w_closed_form(std::complex<double>(0.0, 0.5), traj.times[i]);
        CHECK(std::abs(x.z - w.real()) <= 1e-6);
        CHECK(std::abs(x.p(0) - w.imag()) <= 1e-6);
    }

    SUBCASE("fixed point on Lambda_st") {
        const PhasePoint xe = moebius_trajectory(model, PhasePoint(0.0, 0.3, -1.0), 5.0);
        CHECK(std::abs(xe.p(0)) <= 1e-9);
        CHECK(std::abs(xe.z + 1.0) <= 1e-9);
    }
}

TEST_CASE("flow map differential") {
    SUBCASE("t = 0 is the identity exactly") {
        const Eigen::MatrixXd J =
            flow_map_differential(linear_hamiltonian(1.0), PhasePoint(0.3, -0.2, 0.7), 0.0);
        CHECK(J.isIdentity(0.0));
    }
    SUBCASE("linear model") {
        const Eigen::MatrixXd J =
            flow_map_differential(linear_hamiltonian(1.0), PhasePoint(0.3, -0.2, 0.7), 1.0);
        Eigen::MatrixXd want = Eigen::MatrixXd::Zero(3, 3);
        want(0, 0) = std::exp(-1.0);
        want(1, 1) = 1.0;
        want(2, 2) = std::exp(-1.0);
        CHECK((J - want).cwiseAbs().maxCoeff() <= 1e-5);
    }
    SUBCASE("cooling model in stability coordinates") {
        const double a = 2.0, b = 1.0;
        const Eigen::MatrixXd J =
            flow_map_differential(cooling_pqz(a, b), PhasePoint(0.1, 0.2, -0.1), 1.0);
        Eigen::MatrixXd want = Eigen::MatrixXd::Zero(3, 3);
        want(0, 0) = std::exp(-(a - b));
        want(1, 1) = std::exp(-b);
        want(2, 2) = std::exp(-a);
        CHECK((J - want).cwiseAbs().maxCoeff() <= 1e-5);
    }
}

TEST_CASE("event location for z = 1/2 along the -cz flow") {
    IntegratorConfig cfg;
    cfg.max_time = 5.0;
    ScalarEvent ev;
    ev.fn = [](const PhasePoint& x) { return x.z - 0.5; };
    ev.direction = -1;
    ev.terminal = true;
    ev.name = "half";
    cfg.events.push_back(ev);
    const Trajectory traj = integrate(linear_hamiltonian(1.0), PhasePoint(0, 0, 1), cfg);
    REQUIRE(traj.has_event(EventKind::hypersurface_crossing));
    CHECK(std::abs(traj.events.front().t - std::log(2.0)) <= 1e-9);
    CHECK(std::abs(traj.t_end() - std::log(2.0)) <= 1e-9);
}

TEST_CASE("time reversal returns to the start") {
    const MoebiusModel model;
    std::vector<std::pair<ContactHamiltonian, PhasePoint>> cases;
    cases.emplace_back(linear_hamiltonian(1.0), PhasePoint(1, 0.3, 1));
    cases.emplace_back(cooling_pqz(2.0, 1.0), PhasePoint(0.5, -0.4, 0.8));
    cases.emplace_back(model.hamiltonian(), PhasePoint(0.5, 0.0, 0.0));
    for (auto& [H, x0] : cases) {
        IntegratorConfig cfg;
        cfg.max_time = 5.0;
        const PhasePoint mid = integrate(H, x0, cfg).back();
        auto value = [&H](const PhasePoint& x) { return -H(x); };
        auto grad = [&H](const PhasePoint& x) {
            HamGradient g = H.gradient(x);
            g.dp = -g.dp;
            g.dq = -g.dq;
            g.dz = -g.dz;
            return g;
        };
        const ContactHamiltonian Hrev(value, grad);
        const PhasePoint back = integrate(Hrev, mid, cfg).back();
        CHECK(std::abs(back.p(0) - x0.p(0)) <= 1e-7);
        CHECK(std::abs(back.q(0) - x0.q(0)) <= 1e-7);
        CHECK(std::abs(back.z - x0.z) <= 1e-7);
    }
}

TEST_CASE("fixed-step order: halving h shrinks the endpoint error at least 8x") {
    OdeRhs rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        dy = -y;  // the (p,z) part of the -z flow from (1,1)
    };
    Eigen::VectorXd y0(2);
    y0 << 1.0, 1.0;
    const double want = std::exp(-2.0);
    auto err = [&](int steps) {
        const Eigen::VectorXd ye = ode_integrate_fixed(rhs, 0.0, y0, 2.0, steps);
        return std::max(std::abs(ye(0) - want), std::abs(ye(1) - want));
    };
    const double e1 = err(8), e2 = err(16), e3 = err(32);
    CHECK(e1 / e2 >= 8.0);
    CHECK(e2 / e3 >= 8.0);
}

TEST_CASE("tighter tolerances do not worsen the endpoint") {
    auto endpoint_error = [](double tol) {
        IntegratorConfig cfg;
        cfg.max_time = 5.0;
        cfg.rel_tol = tol;
        cfg.abs_tol = tol * 1e-2;
        const PhasePoint xe = integrate(linear_hamiltonian(1.0), PhasePoint(1, 0, 1), cfg).back();
        return std::abs(xe.z - std::exp(-5.0)) + std::abs(xe.p(0) - std::exp(-5.0));
    };
    CHECK(endpoint_error(1e-9) < endpoint_error(1e-5));
}

TEST_CASE("convergence detection") {
    SUBCASE("-cz trajectory converges to the zero section") {
        IntegratorConfig cfg;
        cfg.max_time = 20.0;
        cfg.sample_dt = 0.1;
        const Trajectory traj = integrate(linear_hamiltonian(1.0), PhasePoint(1, 0, 1), cfg);
        CHECK(detect_convergence(traj, Legendrian::zero_section(-5, 5), 1e-4, 2.0));
    }
    SUBCASE("a constant trajectory at distance 1 does not") {
        ContactHamiltonian zero([](const PhasePoint&) { return 0.0; },
                                [](const PhasePoint& x) {
                                    HamGradient g;
                                    g.dp = Eigen::VectorXd::Zero(x.n());
                                    g.dq = Eigen::VectorXd::Zero(x.n());
                                    g.dz = 0.0;
                                    return g;
                                });
        IntegratorConfig cfg;
        cfg.max_time = 10.0;
        cfg.sample_dt = 0.1;
        const Trajectory traj = integrate(zero, PhasePoint(0, 0, 1), cfg);
        CHECK_FALSE(detect_convergence(traj, Legendrian::zero_section(-5, 5), 1e-4, 2.0));
    }
    SUBCASE("Moebius escape along the z-axis") {
        const MoebiusModel model;
        IntegratorConfig cfg;
        cfg.max_time = 60.0;
        cfg.sample_dt = 0.2;
        const Trajectory traj = integrate(model.hamiltonian(), PhasePoint(0.0, 0.0, 1.0001), cfg);
        CHECK(traj.has_event(EventKind::escaped_box));
        CHECK_FALSE(detect_convergence(traj, model.lambda_st(), 1e-3, 5.0));
    }
}

TEST_CASE("stiff blow-up is reported as an event, not a crash") {
    auto value = [](const PhasePoint& x) { return 1.0 / (1.0 - x.z); };
    const ContactHamiltonian H{value};
    IntegratorConfig cfg;
    cfg.max_time = 10.0;
    const Trajectory traj = integrate(H, PhasePoint(0, 0, 0), cfg);
    CHECK((traj.has_event(EventKind::stiff) || traj.has_event(EventKind::escaped_box)));
    CHECK(traj.t_end() < 10.0);
}

TEST_CASE("trajectory CSV round-trips") {
    IntegratorConfig cfg;
    cfg.max_time = 1.0;
    cfg.sample_dt = 0.25;
    const Trajectory traj = integrate(linear_hamiltonian(1.0), PhasePoint(1, 0.5, 1), cfg);
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,p_1,q_1,z");
    std::size_t row = 0;
    bool saw_event = false;
    while (std::getline(is, line)) {
        if (line.rfind("#event,", 0) == 0) {
            saw_event = true;
            continue;
        }
        REQUIRE(row < traj.times.size());
        const char* s = line.c_str();
        char* end;
        const double t = std::strtod(s, &end);
        const double p = std::strtod(end + 1, &end);
        const double q = std::strtod(end + 1, &end);
        const double z = std::strtod(end + 1, &end);
        CHECK(t == traj.times[row]);
        CHECK(p == traj.points[row].p(0));
        CHECK(q == traj.points[row].q(0));
        CHECK(z == traj.points[row].z);
        ++row;
    }
    CHECK(row == traj.times.size());
    CHECK(saw_event);  // at least the max_time marker
}
