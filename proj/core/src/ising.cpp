#include "contactdyn/ising.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "contactdyn/flow.hpp"
#include "contactdyn/ode.hpp"

namespace contactdyn {

namespace {
const double kNaN = std::numeric_limits<double>::quiet_NaN();
const double kInf = std::numeric_limits<double>::infinity();

// Safeguarded Newton on a bracket with a guaranteed single sign change.
double newton_bisect(const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double lo, double hi) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    if (f(hi) == 0.0) return hi;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 80; ++it) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((flo < 0.0) == (fx < 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        const double d = df(x);
        double xn = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (std::abs(xn - x) < 5e-16 * std::max(1.0, std::abs(x))) return xn;
        x = xn;
    }
    return x;
}
}  // namespace

void IsingParams::validate() const {
    if (beta <= 0.0) throw std::invalid_argument("IsingParams: beta must be positive");
    if (c <= 0.0) throw std::invalid_argument("IsingParams: c must be positive");
    if (b < 0.0) throw std::invalid_argument("IsingParams: b must be nonnegative");
}

double free_energy(const IsingParams& par, double p, double q) {
    return -phi(par.beta, q + par.b * p) + 0.5 * par.b * p * p;
}

double fold_point(double b, double beta) {
    if (b * beta <= 1.0) throw std::invalid_argument("fold_point: requires b beta > 1");
    const double p_star = std::sqrt(1.0 - 1.0 / (b * beta));
    return b * p_star - artanh(p_star) / beta;
}

// --- equilibrium branches -----------------------------------------------------

double EquilibriumBranches::solve(double q, double lo, double hi) const {
    const double b = par_.b, beta = par_.beta;
    auto f = [&](double p) { return p - std::tanh(beta * (q + b * p)); };
    auto df = [&](double p) {
        const double t = std::tanh(beta * (q + b * p));
        return 1.0 - b * beta * (1.0 - t * t);
    };
    const double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) return kNaN;
    return newton_bisect(f, df, lo, hi);
}

EquilibriumBranches::EquilibriumBranches(const IsingParams& par, double q_lo, double q_hi, int n)
    : par_(par), q_lo_(q_lo), q_hi_(q_hi) {
    par.validate();
    if (!(q_hi > q_lo)) throw std::invalid_argument("equilibrium_branches: empty q window");

    const double bb = par.b * par.beta;
    if (std::abs(bb - 1.0) <= 1e-12) {
        kind_ = MeanFieldCase::marginal;
        fold_ = kNaN;
        p_star_ = 0.0;
    } else if (bb < 1.0) {
        kind_ = MeanFieldCase::A;
        fold_ = kNaN;
        p_star_ = 0.0;
    } else {
        kind_ = MeanFieldCase::B;
        p_star_ = std::sqrt(1.0 - 1.0 / bb);
        fold_ = par.b * p_star_ - artanh(p_star_) / par.beta;
    }

    qs_.resize(n + 1);
    rm_.assign(n + 1, kNaN);
    sm_.assign(n + 1, kNaN);
    rp_.assign(n + 1, kNaN);
    for (int i = 0; i <= n; ++i) {
        const double q = q_lo + (q_hi - q_lo) * i / n;
        qs_[i] = q;
        if (kind_ == MeanFieldCase::B) {
            rm_[i] = solve(q, -1.0 - 1e-9, -p_star_);
            sm_[i] = solve(q, -p_star_, p_star_);
            rp_[i] = solve(q, p_star_, 1.0 + 1e-9);
        } else {
            rp_[i] = rm_[i] = solve(q, -1.0 - 1e-9, 1.0 + 1e-9);
        }
    }
}

double EquilibriumBranches::r(double q) const {
    const double v = solve(q, -1.0 - 1e-9, 1.0 + 1e-9);
    if (std::isnan(v)) throw std::runtime_error("EquilibriumBranches::r: root lost");
    return v;
}

double EquilibriumBranches::r_plus(double q) const {
    const double v = (kind_ == MeanFieldCase::B) ? solve(q, p_star_, 1.0 + 1e-9) : r(q);
    if (std::isnan(v)) throw std::runtime_error("EquilibriumBranches::r_plus: q below the fold");
    return v;
}

double EquilibriumBranches::r_minus(double q) const {
    const double v = (kind_ == MeanFieldCase::B) ? solve(q, -1.0 - 1e-9, -p_star_) : r(q);
    if (std::isnan(v)) throw std::runtime_error("EquilibriumBranches::r_minus: q above the fold");
    return v;
}

double EquilibriumBranches::s(double q) const {
    if (kind_ != MeanFieldCase::B)
        throw std::runtime_error("EquilibriumBranches::s: defined in case B only");
    if (q > fold_) return -kInf;
    if (q < -fold_) return kInf;
    const double v = solve(q, -p_star_, p_star_);
    return std::isnan(v) ? ((q > 0.0) ? -kInf : kInf) : v;
}

EquilibriumBranches equilibrium_branches(const IsingParams& par, double q_lo, double q_hi,
                                         int n) {
    return EquilibriumBranches(par, q_lo, q_hi, n);
}

// --- relaxation scenarios -----------------------------------------------------

ScenarioILimit scenario_I_limit(const IsingParams& par, double p0, double q,
                                bool cross_validate) {
    par.validate();
    EquilibriumBranches eq(par, q - 1.0, q + 1.0, 2);

    ScenarioILimit lim;
    lim.unstable = false;
    if (eq.kind() != MeanFieldCase::B) {
        lim.p_inf = eq.r(q);
    } else {
        const double sq = eq.s(q);
        if (p0 == sq) {
            lim.p_inf = sq;
            lim.unstable = true;
        } else if (p0 > sq) {
            lim.p_inf = eq.r_plus(q);
        } else {
            lim.p_inf = eq.r_minus(q);
        }
    }

    if (cross_validate && !lim.unstable) {
        const double b = par.b, beta = par.beta, c = par.c;
        OdeRhs rhs = [b, beta, c, q](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
            dy.resize(1);
            dy(0) = c * (-y(0) + std::tanh(beta * (q + b * y(0))));
        };
        Eigen::VectorXd y0(1);
        y0(0) = p0;
        const double p_ode = ode_integrate(rhs, 0.0, y0, 200.0 / c).back()(0);
        if (std::abs(p_ode - lim.p_inf) > 1e-5)
            throw std::runtime_error("scenario_I_limit: ODE cross-validation failed");
    }
    return lim;
}

ScenarioIILimit scenario_II_limit(const IsingParams& par, double p0, double q0) {
    par.validate();
    const double Q0 = q0 + par.b * p0;
    ScenarioIILimit lim;
    lim.p_inf = phi_prime(par.beta, Q0);
    lim.q_inf = q0 + par.b * (p0 - lim.p_inf);
    lim.z_inf = phi(par.beta, Q0) - 0.5 * par.b * lim.p_inf * lim.p_inf;
    return lim;
}

PhasePoint ising_explicit_trajectory(const IsingParams& par, const PhasePoint& x0, double t) {
    const double b = par.b, beta = par.beta, c = par.c;
    const double p0 = x0.p(0), q0 = x0.q(0), z0 = x0.z;
    const double Q0 = q0 + b * p0;
    const double Z0 = z0 + 0.5 * b * p0 * p0;
    const double e = std::exp(-c * t);
    const double p = e * (p0 - phi_prime(beta, Q0)) + phi_prime(beta, Q0);
    const double Z = e * (Z0 - phi(beta, Q0)) + phi(beta, Q0);
    return PhasePoint(p, Q0 - b * p, Z - 0.5 * b * p * p);
}

ScenarioComparison compare_scenarios(const IsingParams& par, double delta, double K, int grid) {
    par.validate();
    EquilibriumBranches eq(par, -(K + 4.0), K + 4.0, 8);
    if (eq.kind() == MeanFieldCase::B && K <= eq.fold_q())
        throw std::invalid_argument("compare_scenarios: case B requires K > a_{b,beta}");

    ScenarioComparison cmp;
    for (int side : {-1, 1}) {
        for (int i = 0; i < grid; ++i) {
            const double q0 = side * (K + 4.0 * i / std::max(1, grid - 1));
            const double p_eq = (eq.kind() == MeanFieldCase::B)
                                    ? (side > 0 ? eq.r_plus(q0) : eq.r_minus(q0))
                                    : eq.r(q0);
            for (int j = 0; j < 5; ++j) {
                const double p0 = p_eq + delta * (j - 2) / 2.0;
                if (std::abs(p0 - phi_prime(par.beta, q0 + par.b * p0)) > delta * (1.0 + 1e-9))
                    continue;
                const double pI = scenario_I_limit(par, p0, q0).p_inf;
                const double pII = scenario_II_limit(par, p0, q0).p_inf;
                cmp.rows.push_back({p0, q0, pI, pII});
                cmp.max_discrepancy = std::max(cmp.max_discrepancy, std::abs(pI - pII));
            }
        }
    }
    return cmp;
}

Legendrian lambda_a_alpha(double a, double alpha, double b, double beta, double Q_max) {
    if (alpha <= 0.0 || beta <= 0.0)
        throw std::invalid_argument("lambda_a_alpha: alpha, beta > 0 required");
    Legendrian L = Legendrian::ising_equilibrium(a, alpha, b, beta, Q_max);

    // Asymptote check at the window ends: P -> 0, Z -> (a-b)/2.
    const auto [u_lo, u_hi] = L.param_window();
    const double tol = std::max({1e-8, 20.0 * std::exp(-2.0 * beta * Q_max) / beta,
                                 20.0 * std::exp(-2.0 * alpha * Q_max) / alpha});
    for (double u : {u_lo, u_hi}) {
        const PhasePoint x = L.at(u);
        if (std::abs(x.p(0)) > tol || std::abs(x.z - 0.5 * (a - b)) > tol)
            throw std::runtime_error("lambda_a_alpha: asymptote check failed at Q = " +
                                     std::to_string(x.q(0)));
    }
    return L;
}

double dPdQ_at_chord(double a, double alpha, double b, double beta) {
    const double den = 1.0 - alpha * (a - b);
    if (std::abs(den) < 1e-12)
        throw std::domain_error("dPdQ_at_chord: front-projection pole 1 - alpha (a-b) = 0");
    return (alpha - beta + alpha * beta * (a - b)) / den;
}

// --- model Hamiltonians -------------------------------------------------------

ContactHamiltonian linear_hamiltonian(double c) {
    auto value = [c](const PhasePoint& x) { return -c * x.z; };
    auto grad = [c](const PhasePoint& x) {
        HamGradient g;
        g.dp = Eigen::VectorXd::Zero(x.n());
        g.dq = Eigen::VectorXd::Zero(x.n());
        g.dz = -c;
        return g;
    };
    return ContactHamiltonian(value, grad);
}

ContactHamiltonian ising_hamiltonian(const IsingParams& par) {
    par.validate();
    const double b = par.b, beta = par.beta, c = par.c;
    auto value = [b, beta, c](const PhasePoint& x) {
        const double Q = x.q(0) + b * x.p(0);
        return c * (-x.z + phi(beta, Q) - 0.5 * b * x.p(0) * x.p(0));
    };
    auto grad = [b, beta, c](const PhasePoint& x) {
        const double Q = x.q(0) + b * x.p(0);
        const double t = phi_prime(beta, Q);
        HamGradient g;
        g.dp = Eigen::VectorXd::Constant(1, c * b * (t - x.p(0)));
        g.dq = Eigen::VectorXd::Constant(1, c * t);
        g.dz = -c;
        return g;
    };
    return ContactHamiltonian(value, grad);
}

ContactHamiltonian ising_hamiltonian_pqz(const IsingParams& par) {
    par.validate();
    const double beta = par.beta, c = par.c;
    auto value = [beta, c](const PhasePoint& x) { return c * (-x.z + phi(beta, x.q(0))); };
    auto grad = [beta, c](const PhasePoint& x) {
        HamGradient g;
        g.dp = Eigen::VectorXd::Zero(1);
        g.dq = Eigen::VectorXd::Constant(1, c * phi_prime(beta, x.q(0)));
        g.dz = -c;
        return g;
    };
    return ContactHamiltonian(value, grad);
}

// --- admissible family ---------------------------------------------------------

double bump_g(double P, double rho) {
    const double u = (std::abs(P) - rho) / (3.0 * rho);
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double w = u * (1.0 - u);
    return std::exp(4.0 - 1.0 / w);
}

double bump_g_prime(double P, double rho) {
    const double u = (std::abs(P) - rho) / (3.0 * rho);
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double w = u * (1.0 - u);
    const double dg_du = std::exp(4.0 - 1.0 / w) * (1.0 - 2.0 * u) / (w * w);
    return dg_du * ((P >= 0.0) ? 1.0 : -1.0) / (3.0 * rho);
}

double AdmissibleHamiltonian::value(double P, double Q, double Z) const {
    return -c * Z + F.value(P, Q, Z);
}

ContactHamiltonian AdmissibleHamiltonian::to_hamiltonian() const {
    const double cc = c;
    const PerturbationF f = F;
    auto value = [cc, f](const PhasePoint& x) {
        return -cc * x.z + f.value(x.p(0), x.q(0), x.z);
    };
    auto grad = [cc, f](const PhasePoint& x) {
        const auto d = f.grad(x.p(0), x.q(0), x.z);
        HamGradient g;
        g.dp = Eigen::VectorXd::Constant(1, d[0]);
        g.dq = Eigen::VectorXd::Constant(1, d[1]);
        g.dz = -cc + d[2];
        return g;
    };
    ContactHamiltonian H(value, grad);
    H.q_period = tau;
    return H;
}

AdmissibilityReport check_admissibility(double c, double tau, const PerturbationF& F) {
    AdmissibilityReport rep;
    auto H = [&](double P, double Q, double Z) { return -c * Z + F.value(P, Q, Z); };
    auto Hz = [&](double P, double Q, double Z) { return -c + F.grad(P, Q, Z)[2]; };

    // Sample box around the equilibrium strip; Sigma_+ is read off sign H.
    const int m = 22;  // 22^3 ~ 1e4 points
    std::vector<double> kappas{1e-3, 1e-2, 1e-1, 0.5, 1.0, 2.0, 4.0};

    auto slab_ok = [&](double k_lo, double k_hi) {
        for (int i = 0; i <= m; ++i)
            for (int j = 0; j <= m; ++j)
                for (int l = 0; l <= m; ++l) {
                    const double P = -1.5 + 3.0 * i / m;
                    const double Q = tau * j / m;
                    const double Z = -3.0 + 6.0 * l / m;
                    const double h = H(P, Q, Z);
                    if (h <= k_lo || h >= k_hi) continue;
                    if (Hz(P, Q, Z) > 1e-12) return false;
                }
        return true;
    };

    rep.kappa1 = 0.0;
    for (double k : kappas)
        if (slab_ok(0.0, k)) rep.kappa1 = std::max(rep.kappa1, k);
    rep.cond_i = rep.kappa1 > 0.0;
    if (!rep.cond_i) rep.violation = "condition (i): dH/dZ > 0 in a band {0 < H < kappa1}";

    rep.kappa2 = 0.0;
    for (auto it = kappas.rbegin(); it != kappas.rend(); ++it) {
        if (*it <= rep.kappa1) break;
        if (slab_ok(*it, std::numeric_limits<double>::infinity())) rep.kappa2 = *it;
    }
    rep.cond_ii = rep.kappa2 > rep.kappa1;
    if (rep.cond_i && !rep.cond_ii)
        rep.violation = "condition (ii): dH/dZ > 0 above every candidate kappa2";

    // (iii) strictly negative dH/dZ in a tube around {P = Z = 0}.
    rep.cond_iii = true;
    for (int i = 0; i <= m && rep.cond_iii; ++i)
        for (int j = 0; j <= m && rep.cond_iii; ++j)
            for (int l = 0; l <= 4; ++l) {
                const double P = -0.05 + 0.1 * i / m;
                const double Q = tau * j / m;
                const double Z = -0.05 + 0.1 * l / 4;
                if (Hz(P, Q, Z) >= 0.0) {
                    rep.cond_iii = false;
                    rep.violation = "condition (iii): dH/dZ not negative near the equilibrium";
                    break;
                }
            }

    // (iv) local attraction probed from a T-invariant tube of radius 0.05.
    PerturbationF Fc = F;
    auto value = [c, Fc](const PhasePoint& x) { return -c * x.z + Fc.value(x.p(0), x.q(0), x.z); };
    auto grad = [c, Fc](const PhasePoint& x) {
        const auto d = Fc.grad(x.p(0), x.q(0), x.z);
        HamGradient g;
        g.dp = Eigen::VectorXd::Constant(1, d[0]);
        g.dq = Eigen::VectorXd::Constant(1, d[1]);
        g.dz = -c + d[2];
        return g;
    };
    const ContactHamiltonian Hc(value, grad);
    rep.cond_iv = true;
    for (int j = 0; j < 16; ++j) {
        const double th = 2.0 * M_PI * j / 16.0;
        const PhasePoint x0(0.05 * std::cos(th), tau * ((j * 5) % 16) / 16.0,
                            0.05 * std::sin(th));
        IntegratorConfig cfg;
        cfg.max_time = 20.0 / c;
        cfg.rel_tol = 1e-9;
        cfg.abs_tol = 1e-11;
        const Trajectory tr = integrate(Hc, x0, cfg);
        const PhasePoint& xe = tr.back();
        if (std::hypot(xe.p(0), xe.z) > 1e-3) {
            rep.cond_iv = false;
            rep.violation = "condition (iv): tube probe did not converge to the equilibrium";
            break;
        }
    }
    return rep;
}

AdmissibleHamiltonian make_admissible(double c, double tau, double eps, double rho) {
    if (c <= 0.0 || tau <= 0.0) throw std::invalid_argument("make_admissible: c, tau > 0");
    if (eps < 0.0 || rho <= 0.0) throw std::invalid_argument("make_admissible: eps >= 0, rho > 0");
    AdmissibleHamiltonian H;
    H.c = c;
    H.tau = tau;
    H.eps = eps;
    H.rho = rho;
    const double om = 2.0 * M_PI / tau;
    H.F.value = [eps, om, rho](double P, double Q, double) {
        return eps * std::sin(om * Q) * bump_g(P, rho);
    };
    H.F.grad = [eps, om, rho](double P, double Q, double) {
        return std::array<double, 3>{eps * std::sin(om * Q) * bump_g_prime(P, rho),
                                     eps * om * std::cos(om * Q) * bump_g(P, rho), 0.0};
    };
    const AdmissibilityReport rep = check_admissibility(c, tau, H.F);
    if (!rep.ok())
        throw std::invalid_argument("make_admissible: default family rejected: " + rep.violation);
    return H;
}

AdmissibleHamiltonian make_admissible(double c, double tau, const PerturbationF& F) {
    if (c <= 0.0 || tau <= 0.0) throw std::invalid_argument("make_admissible: c, tau > 0");
    const AdmissibilityReport rep = check_admissibility(c, tau, F);
    if (!rep.ok()) throw std::invalid_argument("make_admissible: shape rejected: " + rep.violation);
    AdmissibleHamiltonian H;
    H.c = c;
    H.tau = tau;
    H.F = F;
    return H;
}

}  // namespace contactdyn
