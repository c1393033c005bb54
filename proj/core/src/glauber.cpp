#include "contactdyn/glauber.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "contactdyn/ode.hpp"

namespace contactdyn {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int spin_sum(const Configuration& s) {
    int S = 0;
    for (std::int8_t v : s) S += v;
    return S;
}

// Ascending-value summation; canonical under permutations of the inputs.
double sorted_sum(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    double acc = 0.0;
    for (double v : terms) acc += v;
    return acc;
}

// Rate of flipping a site with spin sg in a Curie-Weiss configuration with
// spin sum S; depends only on (sg, S), which keeps the master equation
// bitwise equivariant under site permutations.
double cw_rate(const SpinSystem& sys, int sg, int S) {
    const int n = sys.n_sites();
    const double local = sys.q + (sys.b / n) * (S - sg);
    const double delta = -2.0 * sg * local;
    return 0.5 * sys.c * (1.0 + std::tanh(0.5 * sys.beta * delta));
}

}  // namespace

int SpinSystem::n_sites() const {
    int n = 1;
    for (int i = 0; i < d; ++i) n *= N;
    return n;
}

double SpinSystem::coupling(int g, int h) const {
    if (g == h) return 0.0;
    if (curie_weiss) return b / n_sites();
    return J(g, h);
}

void SpinSystem::validate() const {
    if (N < 1 || d < 1) throw std::invalid_argument("SpinSystem: N, d >= 1");
    if (beta <= 0.0) throw std::invalid_argument("SpinSystem: beta > 0");
    if (c < 0.0) throw std::invalid_argument("SpinSystem: c >= 0");
    if (!curie_weiss) {
        const int n = n_sites();
        if (J.rows() != n || J.cols() != n)
            throw std::invalid_argument("SpinSystem: J must be |G| x |G|");
        for (int g = 0; g < n; ++g) {
            if (J(g, g) != 0.0) throw std::invalid_argument("SpinSystem: J has nonzero diagonal");
            for (int h = 0; h < g; ++h)
                if (J(g, h) != J(h, g))
                    throw std::invalid_argument("SpinSystem: J must be symmetric");
        }
    }
}

double energy(const SpinSystem& sys, const Configuration& s) {
    const int n = sys.n_sites();
    if (static_cast<int>(s.size()) != n) throw std::invalid_argument("energy: size mismatch");
    double field = 0.0;
    for (int g = 0; g < n; ++g) field += s[g];
    double pair = 0.0;
    if (sys.curie_weiss) {
        const int S = spin_sum(s);
        // sum over unordered pairs of sigma(g) sigma(h) = (S^2 - n) / 2
        pair = (sys.b / n) * 0.5 * (static_cast<double>(S) * S - n);
    } else {
        for (int g = 0; g < n; ++g)
            for (int h = g + 1; h < n; ++h) pair += sys.J(g, h) * s[g] * s[h];
    }
    return -sys.q * field - pair;
}

double energy_delta(const SpinSystem& sys, const Configuration& s, int g) {
    const int n = sys.n_sites();
    double local = sys.q;
    if (sys.curie_weiss) {
        local += (sys.b / n) * (spin_sum(s) - s[g]);
    } else {
        for (int h = 0; h < n; ++h)
            if (h != g) local += sys.J(g, h) * s[h];
    }
    return -2.0 * s[g] * local;
}

double flip_rate(const SpinSystem& sys, const Configuration& s, int g) {
    return 0.5 * sys.c * (1.0 + std::tanh(0.5 * sys.beta * energy_delta(sys, s, g)));
}

// --- master equation ------------------------------------------------------------

namespace {

Configuration decode(int state, int n) {
    Configuration s(n);
    for (int g = 0; g < n; ++g) s[g] = (state >> g) & 1 ? 1 : -1;
    return s;
}

void check_master_size(const SpinSystem& sys) {
    if (sys.n_sites() > 16)
        throw std::invalid_argument("master equation: |G| <= 16 states only");
}

}  // namespace

Eigen::VectorXd gibbs_measure(const SpinSystem& sys) {
    check_master_size(sys);
    const int n = sys.n_sites();
    const int dim = 1 << n;
    Eigen::VectorXd pi(dim);
    double e_min = std::numeric_limits<double>::infinity();
    std::vector<double> e(dim);
    for (int st = 0; st < dim; ++st) {
        e[st] = energy(sys, decode(st, n));
        e_min = std::min(e_min, e[st]);
    }
    for (int st = 0; st < dim; ++st) pi(st) = std::exp(-sys.beta * (e[st] - e_min));
    pi /= pi.sum();
    return pi;
}

Eigen::VectorXd product_measure(const SpinSystem& sys, double m0) {
    check_master_size(sys);
    const int n = sys.n_sites();
    const int dim = 1 << n;
    const double pu = 0.5 * (1.0 + m0), pd = 0.5 * (1.0 - m0);
    Eigen::VectorXd pi(dim);
    for (int st = 0; st < dim; ++st) {
        const int k = __builtin_popcount(static_cast<unsigned>(st));
        pi(st) = std::pow(pu, k) * std::pow(pd, n - k);
    }
    return pi;
}

Eigen::VectorXd master_generator_apply(const SpinSystem& sys, const Eigen::VectorXd& pi) {
    check_master_size(sys);
    const int n = sys.n_sites();
    const int dim = 1 << n;
    if (pi.size() != dim) throw std::invalid_argument("master: pi has wrong dimension");

    Eigen::VectorXd out(dim);
    std::vector<double> terms;
    terms.reserve(n);
    for (int st = 0; st < dim; ++st) {
        const Configuration s = decode(st, n);
        double total_out;
        terms.clear();
        if (sys.curie_weiss) {
            const int S = spin_sum(s);
            const int k = (S + n) / 2;
            total_out = k * cw_rate(sys, +1, S) + (n - k) * cw_rate(sys, -1, S);
            for (int g = 0; g < n; ++g) {
                const int Sf = S - 2 * s[g];
                terms.push_back(pi(st ^ (1 << g)) * cw_rate(sys, -s[g], Sf));
            }
        } else {
            total_out = 0.0;
            for (int g = 0; g < n; ++g) total_out += flip_rate(sys, s, g);
            for (int g = 0; g < n; ++g) {
                Configuration sf = s;
                sf[g] = -sf[g];
                terms.push_back(pi(st ^ (1 << g)) * flip_rate(sys, sf, g));
            }
        }
        out(st) = -pi(st) * total_out + sorted_sum(terms);
    }
    return out;
}

Eigen::VectorXd master_evolve(const SpinSystem& sys, const Eigen::VectorXd& pi0, double t,
                              double tol) {
    check_master_size(sys);
    if (std::abs(pi0.sum() - 1.0) > 1e-12)
        throw std::invalid_argument("master_evolve: pi0 is not normalized");
    OdeRhs rhs = [&sys](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        dy = master_generator_apply(sys, y);
    };
    OdeOptions opts;
    opts.rel_tol = tol;
    opts.abs_tol = tol;
    opts.max_norm = true;  // permutation-invariant step control
    return ode_integrate(rhs, 0.0, pi0, t, opts).back();
}

Eigen::VectorXd lump_distribution(const SpinSystem& sys, const Eigen::VectorXd& pi) {
    const int n = sys.n_sites();
    Eigen::VectorXd pk = Eigen::VectorXd::Zero(n + 1);
    std::vector<std::vector<double>> bins(n + 1);
    for (int st = 0; st < pi.size(); ++st)
        bins[__builtin_popcount(static_cast<unsigned>(st))].push_back(pi(st));
    for (int k = 0; k <= n; ++k) pk(k) = sorted_sum(bins[k]);
    return pk;
}

std::vector<double> master_site_magnetizations(const SpinSystem& sys,
                                               const Eigen::VectorXd& pi) {
    const int n = sys.n_sites();
    std::vector<double> m(n);
    std::vector<double> terms;
    terms.reserve(pi.size());
    for (int g = 0; g < n; ++g) {
        terms.clear();
        for (int st = 0; st < pi.size(); ++st)
            terms.push_back(((st >> g) & 1 ? 1.0 : -1.0) * pi(st));
        m[g] = sorted_sum(terms);
    }
    return m;
}

double master_magnetization(const SpinSystem& sys, const Eigen::VectorXd& pi) {
    const int n = sys.n_sites();
    const Eigen::VectorXd pk = lump_distribution(sys, pi);
    double m = 0.0;
    for (int k = 0; k <= n; ++k) m += pk(k) * (2.0 * k - n) / n;
    return m;
}

double master_flip_drift(const SpinSystem& sys, const Eigen::VectorXd& pi) {
    const int n = sys.n_sites();
    double acc = 0.0;
    for (int st = 0; st < pi.size(); ++st) {
        const Configuration s = decode(st, n);
        double sw = 0.0;
        for (int g = 0; g < n; ++g) sw += s[g] * flip_rate(sys, s, g);
        acc += pi(st) * sw;
    }
    return -2.0 * acc / n;
}

// --- lumped chain ----------------------------------------------------------------

double lumped_rate_down(const SpinSystem& sys, int k) {
    const int n = sys.n_sites();
    if (k <= 0) return 0.0;
    return k * cw_rate(sys, +1, 2 * k - n);
}

double lumped_rate_up(const SpinSystem& sys, int k) {
    const int n = sys.n_sites();
    if (k >= n) return 0.0;
    return (n - k) * cw_rate(sys, -1, 2 * k - n);
}

Eigen::VectorXd lumped_master_evolve(const SpinSystem& sys, const Eigen::VectorXd& pi0, double t,
                                     double tol) {
    if (!sys.curie_weiss)
        throw std::invalid_argument("lumped_master_evolve: Curie-Weiss coupling required");
    const int n = sys.n_sites();
    if (pi0.size() != n + 1) throw std::invalid_argument("lumped: pi0 has wrong dimension");
    if (std::abs(pi0.sum() - 1.0) > 1e-12)
        throw std::invalid_argument("lumped_master_evolve: pi0 is not normalized");

    std::vector<double> up(n + 1), down(n + 1);
    for (int k = 0; k <= n; ++k) {
        up[k] = lumped_rate_up(sys, k);
        down[k] = lumped_rate_down(sys, k);
    }
    OdeRhs rhs = [&up, &down, n](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        dy.resize(n + 1);
        for (int k = 0; k <= n; ++k) {
            double v = -(up[k] + down[k]) * y(k);
            if (k > 0) v += up[k - 1] * y(k - 1);
            if (k < n) v += down[k + 1] * y(k + 1);
            dy(k) = v;
        }
    };
    OdeOptions opts;
    opts.rel_tol = tol;
    opts.abs_tol = tol;
    return ode_integrate(rhs, 0.0, pi0, t, opts).back();
}

Eigen::VectorXd lumped_stationary(const SpinSystem& sys) {
    if (!sys.curie_weiss)
        throw std::invalid_argument("lumped_stationary: Curie-Weiss coupling required");
    const int n = sys.n_sites();
    Eigen::VectorXd logpi(n + 1);
    logpi(0) = 0.0;
    for (int k = 0; k < n; ++k)
        logpi(k + 1) = logpi(k) + std::log(lumped_rate_up(sys, k)) -
                       std::log(lumped_rate_down(sys, k + 1));
    const double mx = logpi.maxCoeff();
    Eigen::VectorXd pi = (logpi.array() - mx).exp();
    pi /= pi.sum();
    return pi;
}

Eigen::VectorXd binomial_lumped_measure(int n_sites, double m0) {
    const double pu = 0.5 * (1.0 + m0);
    Eigen::VectorXd pi(n_sites + 1);
    for (int k = 0; k <= n_sites; ++k) {
        const double lg = std::lgamma(n_sites + 1.0) - std::lgamma(k + 1.0) -
                          std::lgamma(n_sites - k + 1.0) + k * std::log(pu) +
                          (n_sites - k) * std::log1p(-pu);
        pi(k) = std::exp(lg);
    }
    pi /= pi.sum();
    return pi;
}

double lumped_magnetization(const SpinSystem& sys, const Eigen::VectorXd& pik) {
    const int n = sys.n_sites();
    double m = 0.0;
    for (int k = 0; k <= n; ++k) m += pik(k) * (2.0 * k - n) / n;
    return m;
}

double lumped_flip_drift(const SpinSystem& sys, const Eigen::VectorXd& pik) {
    const int n = sys.n_sites();
    double acc = 0.0;
    for (int k = 0; k <= n; ++k)
        acc += pik(k) * (2.0 / n) * (lumped_rate_up(sys, k) - lumped_rate_down(sys, k));
    return acc;
}

// --- Monte Carlo -------------------------------------------------------------------

double MagnetizationPath::at(double time) const {
    if (t.empty()) throw std::runtime_error("MagnetizationPath: empty");
    auto it = std::upper_bound(t.begin(), t.end(), time);
    if (it == t.begin()) return m.front();
    return m[static_cast<std::size_t>(it - t.begin()) - 1];
}

Configuration all_up(int n) { return Configuration(n, 1); }

Configuration random_product_configuration(int n, double m0, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Configuration s(n);
    const double pu = 0.5 * (1.0 + m0);
    for (int g = 0; g < n; ++g) s[g] = uniform01(rng) < pu ? 1 : -1;
    return s;
}

MagnetizationPath gillespie_run(const SpinSystem& sys, const Configuration& s0, double t_max,
                                std::uint64_t seed) {
    sys.validate();
    const int n = sys.n_sites();
    Configuration s = s0;
    int S = spin_sum(s);
    std::mt19937_64 rng(seed);

    MagnetizationPath path;
    path.t.push_back(0.0);
    path.m.push_back(double(S) / n);

    std::vector<double> w(n);
    double time = 0.0;
    while (true) {
        double W = 0.0;
        double w_up = 0.0, w_down = 0.0;
        int k = (S + n) / 2;
        if (sys.curie_weiss) {
            w_up = cw_rate(sys, +1, S);
            w_down = cw_rate(sys, -1, S);
            W = k * w_up + (n - k) * w_down;
        } else {
            for (int g = 0; g < n; ++g) {
                w[g] = flip_rate(sys, s, g);
                W += w[g];
            }
        }
        if (W <= 0.0) break;

        const double dt = -std::log1p(-uniform01(rng)) / W;
        if (time + dt > t_max) break;
        time += dt;

        int g;
        if (sys.curie_weiss) {
            // pick the class, then a uniform site inside it
            const double u = uniform01(rng) * W;
            const bool flip_up_spin = u < k * w_up;
            const int idx =
                static_cast<int>(uniform01(rng) * (flip_up_spin ? k : n - k));
            int seen = 0;
            g = -1;
            for (int h = 0; h < n; ++h) {
                if ((s[h] == 1) == flip_up_spin) {
                    if (seen == idx) {
                        g = h;
                        break;
                    }
                    ++seen;
                }
            }
            if (g < 0) g = n - 1;
        } else {
            const double u = uniform01(rng) * W;
            double acc = 0.0;
            g = n - 1;
            for (int h = 0; h < n; ++h) {
                acc += w[h];
                if (u < acc) {
                    g = h;
                    break;
                }
            }
        }

        S -= 2 * s[g];
        s[g] = -s[g];
        path.t.push_back(time);
        path.m.push_back(double(S) / n);
    }
    path.t.push_back(t_max);
    path.m.push_back(double(S) / n);
    return path;
}

MagnetizationPath discrete_run(const SpinSystem& sys, const Configuration& s0, double h,
                               double t_max, std::uint64_t seed) {
    sys.validate();
    if (h <= 0.0 || h * sys.c > 1.0)
        throw std::invalid_argument("discrete_run: need 0 < h <= 1/c");
    const int n = sys.n_sites();
    Configuration s = s0;
    std::mt19937_64 rng(seed);

    MagnetizationPath path;
    path.t.push_back(0.0);
    path.m.push_back(double(spin_sum(s)) / n);

    std::vector<int> flips;
    for (double time = h; time <= t_max + 1e-12; time += h) {
        flips.clear();
        for (int g = 0; g < n; ++g)
            if (uniform01(rng) < h * flip_rate(sys, s, g)) flips.push_back(g);
        for (int g : flips) s[g] = -s[g];
        path.t.push_back(time);
        path.m.push_back(double(spin_sum(s)) / n);
    }
    return path;
}

// --- perturbed dynamics ---------------------------------------------------------

PerturbedRates perturbed_step_rates(const SpinSystem& sys, const Configuration& s, double Q,
                                    double Z, const PerturbationF& F) {
    sys.validate();
    const int n = sys.n_sites();
    PerturbedRates out;
    const double m = double(spin_sum(s)) / n;
    out.P = m - phi_prime(sys.beta, Q);

    const auto grad = F.grad(out.P, Q, Z);
    const double Fval = F.value(out.P, Q, Z);
    out.c_prime = sys.c - grad[2];
    if (out.c_prime <= 0.0)
        throw std::invalid_argument("perturbed_step_rates: c' <= 0, perturbation too large");
    out.r = grad[1];
    out.dQ_dt = -grad[0];
    out.dZ_dt = -sys.c * Z + Fval - out.P * grad[0];

    out.w.resize(n);
    const int S = spin_sum(s);
    for (int g = 0; g < n; ++g) {
        double local = sys.q;
        if (sys.curie_weiss) {
            local += (sys.b / n) * (S - s[g]);
        } else {
            for (int hh = 0; hh < n; ++hh)
                if (hh != g) local += sys.J(g, hh) * s[hh];
        }
        double wg = 0.5 * out.c_prime * (1.0 - s[g] * std::tanh(sys.beta * local)) -
                    0.5 * s[g] * out.r;
        if (wg < 0.0 || wg > out.c_prime) {
            out.clamped = true;
            wg = std::clamp(wg, 0.0, out.c_prime);
        }
        out.w[g] = wg;
    }
    return out;
}

PerturbedPath perturbed_run(const SpinSystem& sys0, const Configuration& s0, double Q0,
                            double Z0, const PerturbationF& F, double t_max,
                            std::uint64_t seed) {
    SpinSystem sys = sys0;
    const int n = sys.n_sites();
    Configuration s = s0;
    std::mt19937_64 rng(seed);

    double Q = Q0, Z = Z0;
    double m = double(spin_sum(s)) / n;
    sys.q = Q - sys.b * m;

    PerturbedPath path;
    auto record = [&](double time) {
        path.t.push_back(time);
        path.m.push_back(m);
        path.Q.push_back(Q);
        path.Z.push_back(Z);
        path.q_field.push_back(sys.q);
    };
    record(0.0);

    double time = 0.0;
    while (true) {
        const PerturbedRates rates = perturbed_step_rates(sys, s, Q, Z, F);
        double W = 0.0;
        for (double wg : rates.w) W += wg;
        double dt;
        if (W <= 0.0) {
            dt = t_max - time;
        } else {
            dt = -std::log1p(-uniform01(rng)) / W;
        }
        if (time + dt >= t_max || W <= 0.0) {
            const double rem = t_max - time;
            Q += rem * rates.dQ_dt;
            Z += rem * rates.dZ_dt;
            sys.q = Q - sys.b * m;
            time = t_max;
            record(time);
            break;
        }
        time += dt;
        // (M3): one explicit Euler step of the (Q, Z) equations per event
        Q += dt * rates.dQ_dt;
        Z += dt * rates.dZ_dt;

        const double u = uniform01(rng) * W;
        double acc = 0.0;
        int g = n - 1;
        for (int h = 0; h < n; ++h) {
            acc += rates.w[h];
            if (u < acc) {
                g = h;
                break;
            }
        }
        s[g] = -s[g];
        m += 2.0 * s[g] / double(n);
        sys.q = Q - sys.b * m;
        record(time);
    }
    return path;
}

}  // namespace contactdyn
