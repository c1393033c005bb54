#include "contactdyn/models.hpp"

#include <cmath>
#include <stdexcept>

namespace contactdyn {

namespace {
double phi_exp(double q) { return std::exp(std::min(q, 700.0)); }
}  // namespace

CoolingModel CoolingModel::coupled(double a, double b, double sigma) {
    CoolingModel m;
    m.variant = Variant::coupled;
    m.a = a;
    m.b = b;
    m.sigma = sigma;
    m.validate();
    return m;
}

CoolingModel CoolingModel::isentropic(double a) {
    CoolingModel m;
    m.variant = Variant::isentropic;
    m.a = a;
    m.b = 0.0;
    m.sigma = 0.0;
    m.validate();
    return m;
}

CoolingModel CoolingModel::sine(double a, double eps, int n) {
    CoolingModel m;
    m.variant = Variant::sine;
    m.a = a;
    m.b = 0.0;
    m.sigma = 0.0;
    m.eps = eps;
    m.n_sine = n;
    m.validate();
    return m;
}

void CoolingModel::validate() const {
    if (a <= 0.0) throw std::invalid_argument("CoolingModel: a > 0 required");
    if (variant == Variant::coupled && !(a > b && b > 0.0))
        throw std::invalid_argument("CoolingModel: coupled variant needs a > b > 0");
    if (variant == Variant::sine && !(eps > 0.0 && n_sine > 0 && eps * n_sine < a))
        throw std::invalid_argument("CoolingModel: sine variant needs eps N < a");
}

static void fill_phi(const CoolingModel& m, std::function<double(double)>& f,
                     std::function<double(double)>& df, std::function<double(double)>& d2f) {
    f = m.phi ? m.phi : phi_exp;
    df = m.dphi ? m.dphi : (m.phi ? nullptr : phi_exp);
    d2f = m.d2phi ? m.d2phi : (m.phi ? nullptr : phi_exp);
    if (!df || !d2f)
        throw std::invalid_argument("CoolingModel: custom phi needs dphi and d2phi");
}

ContactHamiltonian CoolingModel::hamiltonian() const {
    validate();
    std::function<double(double)> f, df, d2f;
    fill_phi(*this, f, df, d2f);
    const double A = a, B = b, S = sigma, E = eps;
    const int N = n_sine;
    const Variant var = variant;

    auto value = [=](const PhasePoint& x) {
        const double p = x.p(0), q = x.q(0);
        double h = -A * (x.z - f(q));
        if (var == Variant::coupled) h += B * (p - df(q)) * (q - S);
        if (var == Variant::sine) {
            const double s = std::sin(N * q);
            h -= E * (p - df(q)) * s * s;
        }
        return h;
    };
    auto grad = [=](const PhasePoint& x) {
        const double p = x.p(0), q = x.q(0);
        HamGradient g;
        g.dp.resize(1);
        g.dq.resize(1);
        g.dz = -A;
        double gp = 0.0;
        double gq = A * df(q);
        if (var == Variant::coupled) {
            gp = B * (q - S);
            gq += -B * d2f(q) * (q - S) + B * (p - df(q));
        }
        if (var == Variant::sine) {
            const double s = std::sin(N * q);
            gp = -E * s * s;
            gq += E * d2f(q) * s * s - E * (p - df(q)) * N * std::sin(2.0 * N * q);
        }
        g.dp(0) = gp;
        g.dq(0) = gq;
        return g;
    };
    return ContactHamiltonian(value, grad);
}

Contactomorphism CoolingModel::stability_coordinates() const {
    std::function<double(double)> f, df, d2f;
    fill_phi(*this, f, df, d2f);
    return make_cooling(f, df, d2f, variant == Variant::coupled ? sigma : 0.0);
}

PhasePoint CoolingModel::closed_form(const PhasePoint& x0, double t) const {
    if (variant == Variant::sine)
        throw std::logic_error("CoolingModel::closed_form: use sine_q_closed_form");
    std::function<double(double)> f, df, d2f;
    fill_phi(*this, f, df, d2f);
    const Contactomorphism map = stability_coordinates();
    const PhasePoint y0 = map.forward(x0);
    const PhasePoint y(std::exp(-(a - b) * t) * y0.p(0), std::exp(-b * t) * y0.q(0),
                       std::exp(-a * t) * y0.z);
    return map.inverse(y);
}

PhasePoint CoolingModel::limit_point(const PhasePoint& x0) const {
    std::function<double(double)> f, df, d2f;
    fill_phi(*this, f, df, d2f);
    switch (variant) {
        case Variant::coupled:
            return PhasePoint(df(sigma), sigma, f(sigma));
        case Variant::isentropic:
            return PhasePoint(df(x0.q(0)), x0.q(0), f(x0.q(0)));
        case Variant::sine: {
            const double q0 = x0.q(0);
            const double k = std::floor(q0 * n_sine / M_PI);
            const double target = (std::sin(n_sine * q0) == 0.0) ? q0 : (k + 1) * M_PI / n_sine;
            return PhasePoint(df(target), target, f(target));
        }
    }
    throw std::logic_error("unreachable");
}

double CoolingModel::sine_q_closed_form(double q0, double t) const {
    if (variant != Variant::sine)
        throw std::logic_error("sine_q_closed_form: sine variant only");
    const double N = n_sine;
    const double s0 = std::sin(N * q0);
    if (s0 == 0.0) return q0;  // fixed point of the entropy equation
    const double k = std::floor(q0 * N / M_PI);
    // dq/dt = eps sin^2(Nq)  =>  cot(N q(t)) = cot(N q0) - eps N t
    const double cot0 = std::cos(N * q0) / s0;
    const double cot_t = cot0 - eps * N * t;
    const double acot = M_PI / 2.0 - std::atan(cot_t);  // in (0, pi)
    return (k * M_PI + acot) / N;
}

Legendrian CoolingModel::equilibrium_curve(double q_lo, double q_hi) const {
    std::function<double(double)> f, df, d2f;
    fill_phi(*this, f, df, d2f);
    return Legendrian::jet_graph(f, df, q_lo, q_hi);
}

PhasePoint cooling_flow(const CoolingModel& model, const PhasePoint& x0, double t,
                        Trajectory* out) {
    IntegratorConfig cfg;
    cfg.max_time = t;
    if (out) cfg.sample_dt = t / 400.0;
    const Trajectory traj = integrate(model.hamiltonian(), x0, cfg);
    if (out) *out = traj;
    return traj.back();
}

double fit_exponential_rate(const Trajectory& traj,
                            const std::function<double(const PhasePoint&)>& f, double t_lo,
                            double t_hi) {
    // least-squares slope of log|f| against t
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        if (t < t_lo || t > t_hi) continue;
        const double v = std::abs(f(traj.points[i]));
        if (v <= 0.0) continue;
        const double y = std::log(v);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++n;
    }
    if (n < 2) throw std::runtime_error("fit_exponential_rate: not enough samples");
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return -slope;
}

// --- Moebius ------------------------------------------------------------------

double MoebiusModel::cutoff(double s) const {
    if (s <= 1.0 + eps) return s - 1.0;
    return a_inf + (eps - a_inf) * std::exp(-(s - 1.0 - eps) / (a_inf - eps));
}

double MoebiusModel::cutoff_prime(double s) const {
    if (s <= 1.0 + eps) return 1.0;
    return std::exp(-(s - 1.0 - eps) / (a_inf - eps));
}

ContactHamiltonian MoebiusModel::hamiltonian() const {
    const MoebiusModel m = *this;
    auto value = [m](const PhasePoint& x) {
        return m.cutoff(x.p(0) * x.p(0) + x.z * x.z);
    };
    auto grad = [m](const PhasePoint& x) {
        const double da = m.cutoff_prime(x.p(0) * x.p(0) + x.z * x.z);
        HamGradient g;
        g.dp = Eigen::VectorXd::Constant(1, 2.0 * da * x.p(0));
        g.dq = Eigen::VectorXd::Zero(1);
        g.dz = 2.0 * da * x.z;
        return g;
    };
    ContactHamiltonian H(value, grad);
    H.q_period = 2.0 * M_PI;
    return H;
}

std::complex<double> MoebiusModel::w_closed_form(std::complex<double> w0, double t) {
    const double ch = std::cosh(t), sh = std::sinh(t);
    return (w0 * ch - sh) / (-w0 * sh + ch);
}

Legendrian MoebiusModel::lambda_st() const {
    return Legendrian::jet_graph([](double) { return -1.0; }, [](double) { return 0.0; }, 0.0,
                                 2.0 * M_PI, 2.0 * M_PI);
}

Legendrian MoebiusModel::lambda_unst() const {
    return Legendrian::jet_graph([](double) { return 1.0; }, [](double) { return 0.0; }, 0.0,
                                 2.0 * M_PI, 2.0 * M_PI);
}

Legendrian MoebiusModel::K_c(double c) const {
    return Legendrian::jet_graph([c](double) { return c; }, [](double) { return 0.0; }, 0.0,
                                 2.0 * M_PI, 2.0 * M_PI);
}

PhasePoint moebius_trajectory(const MoebiusModel& model, const PhasePoint& x0, double t,
                              Trajectory* out) {
    IntegratorConfig cfg;
    cfg.max_time = t;
    if (out) cfg.sample_dt = t / 400.0;
    const Trajectory traj = integrate(model.hamiltonian(), x0, cfg);
    if (out) *out = traj;
    return traj.back();
}

}  // namespace contactdyn
