#include "contactdyn/hamiltonian.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "contactdyn/ode.hpp"

namespace contactdyn {

namespace {
const double kFdStep = std::cbrt(std::numeric_limits<double>::epsilon());

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
}  // namespace

HamGradient ContactHamiltonian::fd_gradient(const PhasePoint& x) const {
    const Eigen::Index n = x.n();
    HamGradient g;
    g.dp.resize(n);
    g.dq.resize(n);

    PhasePoint a = x, b = x;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double h = std::max(1.0, std::abs(x.p(i))) * kFdStep;
        a.p(i) = x.p(i) + h;
        b.p(i) = x.p(i) - h;
        g.dp(i) = (value_(a) - value_(b)) / (2.0 * h);
        a.p(i) = b.p(i) = x.p(i);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const double h = std::max(1.0, std::abs(x.q(i))) * kFdStep;
        a.q(i) = x.q(i) + h;
        b.q(i) = x.q(i) - h;
        g.dq(i) = (value_(a) - value_(b)) / (2.0 * h);
        a.q(i) = b.q(i) = x.q(i);
    }
    {
        const double h = std::max(1.0, std::abs(x.z)) * kFdStep;
        a.z = x.z + h;
        b.z = x.z - h;
        g.dz = (value_(a) - value_(b)) / (2.0 * h);
    }
    return g;
}

TangentVector contact_vector_field(const ContactHamiltonian& H, const PhasePoint& x) {
    const HamGradient g = H.gradient(x);
    if (!g.finite())
        throw std::runtime_error("contact_vector_field: non-finite derivative values");
    const double h = H(x);
    TangentVector v;
    v.dp = g.dq + x.p * g.dz;
    v.dq = -g.dp;
    v.dz = h - x.p.dot(g.dp);
    return v;
}

ContactHamiltonian operator+(const ContactHamiltonian& A, const ContactHamiltonian& B) {
    auto value = [A, B](const PhasePoint& x) { return A(x) + B(x); };
    if (A.has_analytic_gradient() && B.has_analytic_gradient()) {
        auto grad = [A, B](const PhasePoint& x) {
            HamGradient ga = A.gradient(x), gb = B.gradient(x);
            ga.dp += gb.dp;
            ga.dq += gb.dq;
            ga.dz += gb.dz;
            return ga;
        };
        return ContactHamiltonian(value, grad);
    }
    return ContactHamiltonian(value);
}

std::pair<double, double> verify_contact_identity(const ContactHamiltonian& H,
                                                  const PhasePoint& x, double delta,
                                                  std::uint64_t seed) {
    const Eigen::Index n = x.n();
    const Eigen::Index dim = 2 * n + 1;

    const TangentVector v = contact_vector_field(H, x);
    const double r1 = std::abs(contact_form(x, v) - H(x));

    // Lie-derivative residual.  The time-(+/-delta) flow maps are taken with
    // two fixed DOPRI5 steps so that the map is smooth in the initial
    // condition; its differential is then formed by central differences.
    OdeRhs rhs = [&H](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        dy = contact_vector_field(H, PhasePoint::from_flat(y)).flat();
    };

    const Eigen::VectorXd y0 = x.flat();
    const double sx = 1e-5 * std::max(1.0, y0.cwiseAbs().maxCoeff());
    const double dHR = H.dH_R(x);

    std::mt19937_64 rng(seed);
    double r2 = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j) {
        Eigen::VectorXd w(dim);
        for (Eigen::Index i = 0; i < dim; ++i) w(i) = 2.0 * uniform01(rng) - 1.0;
        w.normalize();

        const Eigen::VectorXd yp = y0 + sx * w;
        const Eigen::VectorXd ym = y0 - sx * w;

        auto pullback = [&](double s) {
            const Eigen::VectorXd up = ode_integrate_fixed(rhs, 0.0, yp, s, 2);
            const Eigen::VectorXd um = ode_integrate_fixed(rhs, 0.0, ym, s, 2);
            const Eigen::VectorXd base = ode_integrate_fixed(rhs, 0.0, y0, s, 2);
            const Eigen::VectorXd dw = (up - um) / (2.0 * sx);
            return contact_form(PhasePoint::from_flat(base), TangentVector::from_flat(dw));
        };

        const double lie = (pullback(delta) - pullback(-delta)) / (2.0 * delta);
        const double lam = contact_form(x, TangentVector::from_flat(w));
        r2 = std::max(r2, std::abs(lie - dHR * lam));
    }
    return {r1, r2};
}

}  // namespace contactdyn
