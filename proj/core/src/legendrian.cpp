#include "contactdyn/legendrian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "contactdyn/special.hpp"

namespace contactdyn {

namespace {

const double kParamFd = std::cbrt(std::numeric_limits<double>::epsilon());

double wrap_delta(double d, std::optional<double> period) {
    if (!period) return d;
    const double tau = *period;
    d = std::fmod(d, tau);
    if (d > 0.5 * tau) d -= tau;
    if (d < -0.5 * tau) d += tau;
    return d;
}

double golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double flo,
              double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Newton polished root inside a bracket known to contain exactly one root.
double solve_bracketed(const std::function<double(double)>& f,
                       const std::function<double(double)>& df, double lo, double hi,
                       double x0) {
    double flo = f(lo);
    double x = std::clamp(x0, lo, hi);
    for (int it = 0; it < 60; ++it) {
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
        if (std::abs(xn - x) < 1e-15 * std::max(1.0, std::abs(x))) return xn;
        x = xn;
    }
    return x;
}

}  // namespace

struct Legendrian::Impl {
    virtual ~Impl() = default;
    virtual PhasePoint at(double u) const = 0;
    virtual std::optional<TangentVector> analytic_tangent(double) const { return std::nullopt; }
    virtual std::pair<double, double> window() const = 0;
    virtual std::optional<double> q_period() const { return std::nullopt; }
    virtual std::vector<GraphBranch> branches(double q_lo, double q_hi, int grid) const = 0;
};

namespace {

// ---------------------------------------------------------------------------
// 1-jet graph {p = phi'(q), z = phi(q)}
struct JetGraphImpl final : Legendrian::Impl {
    std::function<double(double)> phi, dphi;
    double q_lo, q_hi;
    std::optional<double> period;

    PhasePoint at(double u) const override { return PhasePoint(dphi(u), u, phi(u)); }

    std::optional<TangentVector> analytic_tangent(double u) const override {
        const double h = std::max(1.0, std::abs(u)) * kParamFd;
        const double d2 = (dphi(u + h) - dphi(u - h)) / (2.0 * h);
        return TangentVector(d2, 1.0, dphi(u));
    }

    std::pair<double, double> window() const override { return {q_lo, q_hi}; }
    std::optional<double> q_period() const override { return period; }

    std::vector<GraphBranch> branches(double lo, double hi, int) const override {
        GraphBranch b;
        b.q_lo = std::max(lo, q_lo);
        b.q_hi = std::min(hi, q_hi);
        if (period) {  // full circle: any window is covered
            b.q_lo = lo;
            b.q_hi = hi;
        }
        auto dp = dphi;
        b.p = dp;
        b.z = phi;
        b.dpdq = [dp](double q) {
            const double h = std::max(1.0, std::abs(q)) * kParamFd;
            return (dp(q + h) - dp(q - h)) / (2.0 * h);
        };
        if (b.q_lo >= b.q_hi) return {};
        return {b};
    }
};

// ---------------------------------------------------------------------------
struct ParametricImpl final : Legendrian::Impl {
    std::function<PhasePoint(double)> f;
    std::function<TangentVector(double)> df;
    double u_lo, u_hi;
    std::optional<double> period;

    PhasePoint at(double u) const override { return f(u); }

    std::optional<TangentVector> analytic_tangent(double u) const override {
        if (df) return df(u);
        return std::nullopt;
    }

    std::pair<double, double> window() const override { return {u_lo, u_hi}; }
    std::optional<double> q_period() const override { return period; }

    std::vector<GraphBranch> branches(double lo, double hi, int grid) const override {
        // Graph representation requires monotone q(u).
        const int m = std::max(grid, 64);
        double prev = f(u_lo).q(0);
        int dir = 0;
        for (int i = 1; i <= m; ++i) {
            const double u = u_lo + (u_hi - u_lo) * i / m;
            const double q = f(u).q(0);
            const int s = (q > prev) ? 1 : (q < prev ? -1 : 0);
            if (s != 0) {
                if (dir == 0) dir = s;
                else if (s != dir)
                    throw std::invalid_argument("Legendrian: parametric curve is not monotone in q");
            }
            prev = q;
        }
        if (dir == 0) return {};  // vertical curve: no graph piece

        const double qa = f(u_lo).q(0), qb = f(u_hi).q(0);
        GraphBranch b;
        b.q_lo = std::max(lo, std::min(qa, qb));
        b.q_hi = std::min(hi, std::max(qa, qb));
        if (b.q_lo >= b.q_hi) return {};
        auto fn = f;
        const double ulo = u_lo, uhi = u_hi;
        auto u_of_q = [fn, ulo, uhi, dir](double q) {
            double a = ulo, b2 = uhi;
            double fa = fn(a).q(0) - q;
            for (int it = 0; it < 200 && b2 - a > 1e-14 * std::max(1.0, std::abs(b2)); ++it) {
                const double mid = 0.5 * (a + b2);
                const double fm = fn(mid).q(0) - q;
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b2 = mid;
                }
            }
            return 0.5 * (a + b2);
        };
        b.p = [fn, u_of_q](double q) { return fn(u_of_q(q)).p(0); };
        b.z = [fn, u_of_q](double q) { return fn(u_of_q(q)).z; };
        return {b};
    }
};

// ---------------------------------------------------------------------------
// Lambda_{a,alpha} in the (b,beta) stability coordinates:
//   G(P,Q) = P - tanh(A) + tanh(beta Q) = 0,
//   A = alpha (Q + k S),  S = P + tanh(beta Q),  k = a - b,
//   Z = phi_alpha(Q + k S) - phi_beta(Q) - k S^2 / 2.
// In terms of the magnetization S the equation reads S = tanh(alpha(Q + kS)),
// a self-consistency relation with fold structure when alpha k > 1.
struct IsingEqImpl final : Legendrian::Impl {
    double a, alpha, b, beta, Q_max;
    double k;        // a - b
    double kk;       // alpha * k (fold discriminant)
    double s_star;   // fold magnetization, kk > 1 only
    double q_fold;   // fold location a_eff > 0, kk > 1 only

    // traced polyline, oriented by increasing parameter
    std::vector<double> us, Ps, Qs, Zs;

    double g_of(double S, double Q) const { return S - std::tanh(alpha * (Q + k * S)); }
    double gS_of(double S, double Q) const {
        const double t = std::tanh(alpha * (Q + k * S));
        return 1.0 - alpha * k * (1.0 - t * t);
    }
    double Z_of(double S, double Q) const {
        return phi(alpha, Q + k * S) - phi(beta, Q) - 0.5 * k * S * S;
    }
    double P_of(double S, double Q) const { return S - std::tanh(beta * Q); }

    double G_of(double P, double Q) const { return g_of(P + std::tanh(beta * Q), Q); }
    void G_partials(double P, double Q, double& GP, double& GQ) const {
        const double tb = std::tanh(beta * Q);
        const double S = P + tb;
        const double A = alpha * (Q + k * S);
        const double tA = std::tanh(A);
        const double sA = 1.0 - tA * tA;
        const double sB = beta * (1.0 - tb * tb);
        GP = 1.0 - sA * alpha * k;
        GQ = -sA * alpha * (1.0 + k * sB) + sB;
    }

    // magnetization solved on a bracket containing exactly one root
    double solve_S(double Q, double lo, double hi, double guess) const {
        auto f = [&](double S) { return g_of(S, Q); };
        auto df = [&](double S) { return gS_of(S, Q); };
        return solve_bracketed(f, df, lo, hi, guess);
    }

    enum Branch { minus_b, mid_b, plus_b, single_b };

    // Domain of a branch intersected with [lo, hi]; empty -> lo > hi.
    std::pair<double, double> branch_domain(Branch br, double lo, double hi) const {
        lo = std::max(lo, -Q_max);
        hi = std::min(hi, Q_max);
        switch (br) {
            case single_b: return {lo, hi};
            case minus_b: return {lo, std::min(hi, q_fold)};
            case mid_b: return {std::max(lo, -q_fold), std::min(hi, q_fold)};
            case plus_b: return {std::max(lo, -q_fold), hi};
        }
        return {1.0, 0.0};
    }

    bool solve_branch(Branch br, double Q, double& S) const {
        double lo = -1.0 - 1e-9, hi = 1.0 + 1e-9;
        if (kk > 1.0) {
            switch (br) {
                case minus_b: hi = -s_star; break;
                case mid_b: lo = -s_star, hi = s_star; break;
                case plus_b: lo = s_star; break;
                default: break;
            }
        }
        const double flo = g_of(lo, Q), fhi = g_of(hi, Q);
        if (flo == 0.0) { S = lo; return true; }
        if (fhi == 0.0) { S = hi; return true; }
        if ((flo < 0.0) == (fhi < 0.0)) return false;
        S = solve_S(Q, lo, hi, 0.5 * (lo + hi));
        return true;
    }

    IsingEqImpl(double a_, double alpha_, double b_, double beta_, double Qm)
        : a(a_), alpha(alpha_), b(b_), beta(beta_), Q_max(Qm) {
        if (alpha <= 0.0 || beta <= 0.0)
            throw std::invalid_argument("ising_equilibrium: alpha, beta > 0 required");
        k = a - b;
        kk = alpha * k;
        s_star = 0.0;
        q_fold = 0.0;
        if (kk > 1.0) {
            s_star = std::sqrt(1.0 - 1.0 / kk);
            q_fold = k * s_star - artanh(s_star) / alpha;
        }
        trace();
    }

    void trace() {
        const int m = 4096;
        auto append = [&](Branch br, double Qa, double Qb) {
            for (int i = 0; i <= m; ++i) {
                const double Q = Qa + (Qb - Qa) * i / m;
                double S;
                if (!solve_branch(br, Q, S)) continue;
                const double P = P_of(S, Q);
                const double Z = Z_of(S, Q);
                if (!Qs.empty() && Q == Qs.back() && std::abs(P - Ps.back()) < 1e-12) continue;
                Qs.push_back(Q);
                Ps.push_back(P);
                Zs.push_back(Z);
            }
        };
        if (kk > 1.0 && q_fold < Q_max) {
            append(minus_b, -Q_max, q_fold);
            append(mid_b, q_fold, -q_fold);
            append(plus_b, -q_fold, Q_max);
        } else {
            append(single_b, -Q_max, Q_max);
        }
        if (Qs.size() < 2) throw std::runtime_error("ising_equilibrium: continuation lost the root");
        us.resize(Qs.size());
        us[0] = 0.0;
        for (std::size_t i = 1; i < Qs.size(); ++i) {
            const double dP = Ps[i] - Ps[i - 1], dQ = Qs[i] - Qs[i - 1], dZ = Zs[i] - Zs[i - 1];
            us[i] = us[i - 1] + std::sqrt(dP * dP + dQ * dQ + dZ * dZ);
        }
    }

    PhasePoint at(double u) const override {
        u = std::clamp(u, us.front(), us.back());
        const auto it = std::upper_bound(us.begin(), us.end(), u);
        std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - us.begin(), 1),
                                              us.size() - 1);
        const double w = (us[i] == us[i - 1]) ? 0.0 : (u - us[i - 1]) / (us[i] - us[i - 1]);
        double P = Ps[i - 1] + w * (Ps[i] - Ps[i - 1]);
        double Q = Qs[i - 1] + w * (Qs[i] - Qs[i - 1]);
        // polish back onto the curve along its normal
        double tP = Ps[i] - Ps[i - 1], tQ = Qs[i] - Qs[i - 1];
        const double tn = std::hypot(tP, tQ);
        if (tn > 0) {
            tP /= tn;
            tQ /= tn;
            const double P0 = P, Q0 = Q;
            for (int it2 = 0; it2 < 25; ++it2) {
                double GP, GQ;
                G_partials(P, Q, GP, GQ);
                const double r1 = G_of(P, Q);
                const double r2 = (P - P0) * tP + (Q - Q0) * tQ;
                const double det = GP * tQ - GQ * tP;
                if (det == 0.0) break;
                const double dP = (-r1 * tQ + r2 * GQ) / det;
                const double dQ = (-GP * r2 + tP * r1) / det;
                P += dP;
                Q += dQ;
                if (std::abs(dP) + std::abs(dQ) < 1e-14) break;
            }
        }
        const double S = P + std::tanh(beta * Q);
        return PhasePoint(P, Q, Z_of(S, Q));
    }

    std::optional<TangentVector> analytic_tangent(double u) const override {
        const PhasePoint x = at(u);
        const double P = x.p(0), Q = x.q(0);
        double GP, GQ;
        G_partials(P, Q, GP, GQ);
        double dP = -GQ, dQ = GP;
        // orient along increasing parameter
        const auto it = std::upper_bound(us.begin(), us.end(), std::clamp(u, us.front(), us.back()));
        std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - us.begin(), 1),
                                              us.size() - 1);
        if (dP * (Ps[i] - Ps[i - 1]) + dQ * (Qs[i] - Qs[i - 1]) < 0.0) {
            dP = -dP;
            dQ = -dQ;
        }
        const double nrm = std::hypot(dP, dQ);
        if (nrm > 0) {
            dP /= nrm;
            dQ /= nrm;
        }
        const double tb = std::tanh(beta * Q);
        const double S = P + tb;
        const double A = alpha * (Q + k * S);
        const double T = std::tanh(A);
        const double sB = beta * (1.0 - tb * tb);
        const double ZP = k * (T - S);
        const double ZQ = T * (1.0 + k * sB) - tb - k * S * sB;
        return TangentVector(dP, dQ, ZP * dP + ZQ * dQ);
    }

    std::pair<double, double> window() const override { return {us.front(), us.back()}; }

    std::vector<GraphBranch> branches(double lo, double hi, int) const override {
        std::vector<GraphBranch> out;
        auto add = [&](Branch br) {
            auto [dlo, dhi] = branch_domain(br, lo, hi);
            if (dlo >= dhi) return;
            GraphBranch gb;
            gb.q_lo = dlo;
            gb.q_hi = dhi;
            const IsingEqImpl* self = this;
            gb.p = [self, br](double Q) {
                double S;
                if (!self->solve_branch(br, Q, S))
                    throw std::runtime_error("ising_equilibrium: branch evaluation lost the root");
                return self->P_of(S, Q);
            };
            gb.z = [self, br](double Q) {
                double S;
                if (!self->solve_branch(br, Q, S))
                    throw std::runtime_error("ising_equilibrium: branch evaluation lost the root");
                return self->Z_of(S, Q);
            };
            gb.dpdq = [self, br](double Q) {
                double S;
                if (!self->solve_branch(br, Q, S))
                    throw std::runtime_error("ising_equilibrium: branch evaluation lost the root");
                double GP, GQ;
                self->G_partials(self->P_of(S, Q), Q, GP, GQ);
                return -GQ / GP;
            };
            out.push_back(std::move(gb));
        };
        if (kk > 1.0 && q_fold < Q_max) {
            add(minus_b);
            add(mid_b);
            add(plus_b);
        } else {
            add(single_b);
        }
        return out;
    }
};

// ---------------------------------------------------------------------------
struct JetPerturbedImpl final : Legendrian::Impl {
    std::shared_ptr<const Legendrian::Impl> base;
    std::function<double(double)> psi, dpsi;

    PhasePoint at(double u) const override {
        PhasePoint x = base->at(u);
        x.p(0) += dpsi(x.q(0));
        x.z += psi(x.q(0));
        return x;
    }

    std::optional<TangentVector> analytic_tangent(double u) const override {
        auto t = base->analytic_tangent(u);
        if (!t) return std::nullopt;
        const PhasePoint x = base->at(u);
        const double q = x.q(0);
        const double h = std::max(1.0, std::abs(q)) * kParamFd;
        const double d2psi = (dpsi(q + h) - dpsi(q - h)) / (2.0 * h);
        return TangentVector(t->dp(0) + d2psi * t->dq(0), t->dq(0),
                             t->dz + dpsi(q) * t->dq(0));
    }

    std::pair<double, double> window() const override { return base->window(); }
    std::optional<double> q_period() const override { return base->q_period(); }

    std::vector<GraphBranch> branches(double lo, double hi, int grid) const override {
        std::vector<GraphBranch> out = base->branches(lo, hi, grid);
        for (auto& gb : out) {
            auto p0 = gb.p, z0 = gb.z, dp0 = gb.dpdq;
            auto ps = psi, dps = dpsi;
            gb.p = [p0, dps](double q) { return p0(q) + dps(q); };
            gb.z = [z0, ps](double q) { return z0(q) + ps(q); };
            if (dp0) {
                gb.dpdq = [dp0, dps](double q) {
                    const double h = std::max(1.0, std::abs(q)) * kParamFd;
                    return dp0(q) + (dps(q + h) - dps(q - h)) / (2.0 * h);
                };
            }
        }
        return out;
    }
};

}  // namespace

// --- factories --------------------------------------------------------------

Legendrian Legendrian::jet_graph(std::function<double(double)> phi,
                                 std::function<double(double)> dphi, double q_lo, double q_hi,
                                 std::optional<double> q_period) {
    auto impl = std::make_shared<JetGraphImpl>();
    impl->phi = std::move(phi);
    impl->dphi = std::move(dphi);
    impl->q_lo = q_lo;
    impl->q_hi = q_hi;
    impl->period = q_period;
    return Legendrian(impl);
}

Legendrian Legendrian::zero_section(double q_lo, double q_hi, std::optional<double> q_period) {
    return jet_graph([](double) { return 0.0; }, [](double) { return 0.0; }, q_lo, q_hi,
                     q_period);
}

Legendrian Legendrian::parametric(std::function<PhasePoint(double)> f, double u_lo, double u_hi,
                                  std::function<TangentVector(double)> df,
                                  std::optional<double> q_period) {
    auto impl = std::make_shared<ParametricImpl>();
    impl->f = std::move(f);
    impl->df = std::move(df);
    impl->u_lo = u_lo;
    impl->u_hi = u_hi;
    impl->period = q_period;
    return Legendrian(impl);
}

Legendrian Legendrian::ising_equilibrium(double a, double alpha, double b, double beta,
                                         double Q_max) {
    return Legendrian(std::make_shared<IsingEqImpl>(a, alpha, b, beta, Q_max));
}

Legendrian Legendrian::jet_perturbed(std::function<double(double)> psi,
                                     std::function<double(double)> dpsi) const {
    auto impl = std::make_shared<JetPerturbedImpl>();
    impl->base = impl_;
    impl->psi = std::move(psi);
    impl->dpsi = std::move(dpsi);
    return Legendrian(impl);
}

PhasePoint Legendrian::at(double u) const { return impl_->at(u); }

TangentVector Legendrian::tangent(double u) const {
    if (auto t = impl_->analytic_tangent(u)) return *t;
    const auto [lo, hi] = impl_->window();
    double h = std::max(1.0, std::abs(u)) * kParamFd;
    h = std::min(h, 0.5 * (hi - lo));
    const double ua = std::max(lo, u - h), ub = std::min(hi, u + h);
    const PhasePoint xa = impl_->at(ua), xb = impl_->at(ub);
    const double d = ub - ua;
    return TangentVector((xb.p - xa.p) / d, (xb.q - xa.q) / d, (xb.z - xa.z) / d);
}

std::pair<double, double> Legendrian::param_window() const { return impl_->window(); }

std::optional<double> Legendrian::q_period() const { return impl_->q_period(); }

std::vector<GraphBranch> Legendrian::graph_branches(double q_lo, double q_hi, int grid) const {
    return impl_->branches(q_lo, q_hi, grid);
}

// --- operations --------------------------------------------------------------

double distance_to(const Legendrian& curve, const PhasePoint& x) {
    const auto [lo, hi] = curve.param_window();
    if (!(hi > lo)) throw std::invalid_argument("distance_to: empty parameter window");
    const auto period = curve.q_period();

    auto d2 = [&](double u) {
        const PhasePoint y = curve.at(u);
        const double dq = wrap_delta(y.q(0) - x.q(0), period);
        const double dp = y.p(0) - x.p(0);
        const double dz = y.z - x.z;
        return dp * dp + dq * dq + dz * dz;
    };

    const int m = 512;
    int best = 0;
    double bestv = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= m; ++i) {
        const double v = d2(lo + (hi - lo) * i / m);
        if (v < bestv) {
            bestv = v;
            best = i;
        }
    }
    const double du = (hi - lo) / m;
    const double a = std::max(lo, lo + (best - 1) * du);
    const double b = std::min(hi, lo + (best + 1) * du);
    const double u = golden_min(d2, a, b, std::max(1e-10, (hi - lo) * 1e-14));
    return std::sqrt(std::min(bestv, d2(u)));
}

std::vector<ReebChord> find_reeb_chords(const Legendrian& curve0, const Legendrian& curve1,
                                        double q_lo, double q_hi) {
    const auto b0s = curve0.graph_branches(q_lo, q_hi);
    const auto b1s = curve1.graph_branches(q_lo, q_hi);
    std::vector<ReebChord> out;

    for (const auto& b0 : b0s) {
        for (const auto& b1 : b1s) {
            const double lo = std::max({b0.q_lo, b1.q_lo, q_lo});
            const double hi = std::min({b0.q_hi, b1.q_hi, q_hi});
            if (!(hi > lo)) continue;

            auto f = [&](double q) { return b0.p(q) - b1.p(q); };
            const int m = 2048;
            double prev_q = lo, prev_f = f(lo);
            for (int i = 1; i <= m; ++i) {
                const double q = lo + (hi - lo) * i / m;
                const double fq = f(q);
                if (prev_f == 0.0 || (prev_f < 0.0) != (fq < 0.0)) {
                    const double qr = (prev_f == 0.0)
                                          ? prev_q
                                          : bisect(f, prev_q, q, prev_f, 1e-12);
                    const double z0 = b0.z(qr), z1 = b1.z(qr);
                    if (z1 - z0 > 1e-14) {
                        double df;
                        if (b0.dpdq && b1.dpdq) {
                            df = b0.dpdq(qr) - b1.dpdq(qr);
                        } else {
                            const double h = std::max(1.0, std::abs(qr)) * 1e-6;
                            df = (f(qr + h) - f(qr - h)) / (2.0 * h);
                        }
                        ReebChord ch;
                        ch.start = PhasePoint(b0.p(qr), qr, z0);
                        ch.end = PhasePoint(b1.p(qr), qr, z1);
                        ch.length = z1 - z0;
                        ch.nondegenerate = std::abs(df) > 1e-8;
                        out.push_back(std::move(ch));
                    }
                }
                prev_q = q;
                prev_f = fq;
            }
        }
    }

    std::sort(out.begin(), out.end(),
              [](const ReebChord& a, const ReebChord& b) { return a.start.q(0) < b.start.q(0); });
    std::vector<ReebChord> dedup;
    for (auto& ch : out) {
        if (!dedup.empty() && std::abs(ch.start.q(0) - dedup.back().start.q(0)) < 1e-9 &&
            std::abs(ch.start.p(0) - dedup.back().start.p(0)) < 1e-9)
            continue;
        dedup.push_back(std::move(ch));
    }
    return dedup;
}

double verify_legendrian(const Legendrian& curve) {
    const auto [lo, hi] = curve.param_window();
    const int m = 512;
    double worst = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double u = lo + (hi - lo) * i / m;
        const TangentVector t = curve.tangent(u);
        const double nrm = t.norm();
        if (nrm == 0.0) continue;
        worst = std::max(worst, std::abs(contact_form(curve.at(u), t)) / nrm);
    }
    return worst;
}

}  // namespace contactdyn
