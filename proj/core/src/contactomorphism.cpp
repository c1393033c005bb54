#include "contactdyn/contactomorphism.hpp"

#include <cmath>

#include "contactdyn/special.hpp"

namespace contactdyn {

Contactomorphism make_ising_primary(double b) {
    Contactomorphism m;
    m.forward = [b](const PhasePoint& x) {
        PhasePoint y = x;
        y.q = x.q + b * x.p;
        y.z = x.z + 0.5 * b * x.p.squaredNorm();
        return y;
    };
    m.inverse = [b](const PhasePoint& y) {
        PhasePoint x = y;
        x.q = y.q - b * y.p;
        x.z = y.z - 0.5 * b * y.p.squaredNorm();
        return x;
    };
    m.pushforward = [b](const PhasePoint& x, const TangentVector& v) {
        TangentVector w = v;
        w.dq = v.dq + b * v.dp;
        w.dz = v.dz + b * x.p.dot(v.dp);
        return w;
    };
    return m;
}

Contactomorphism make_ising_stability(double b, double beta) {
    Contactomorphism m;
    m.forward = [b, beta](const PhasePoint& x) {
        if (x.n() != 1) throw std::invalid_argument("ising_stability: n = 1 only");
        const double Q = x.q(0) + b * x.p(0);
        return PhasePoint(x.p(0) - phi_prime(beta, Q), Q,
                          x.z - phi(beta, Q) + 0.5 * b * x.p(0) * x.p(0));
    };
    m.inverse = [b, beta](const PhasePoint& y) {
        if (y.n() != 1) throw std::invalid_argument("ising_stability: n = 1 only");
        const double Q = y.q(0);
        const double p = y.p(0) + phi_prime(beta, Q);
        return PhasePoint(p, Q - b * p, y.z + phi(beta, Q) - 0.5 * b * p * p);
    };
    m.pushforward = [b, beta](const PhasePoint& x, const TangentVector& v) {
        const double Q = x.q(0) + b * x.p(0);
        const double dQ = v.dq(0) + b * v.dp(0);
        return TangentVector(v.dp(0) - phi_second(beta, Q) * dQ, dQ,
                             v.dz - phi_prime(beta, Q) * dQ + b * x.p(0) * v.dp(0));
    };
    return m;
}

Contactomorphism make_cooling(std::function<double(double)> phi_fn,
                              std::function<double(double)> dphi,
                              std::function<double(double)> d2phi, double sigma) {
    Contactomorphism m;
    m.forward = [phi_fn, dphi, sigma](const PhasePoint& x) {
        if (x.n() != 1) throw std::invalid_argument("cooling: n = 1 only");
        const double q = x.q(0);
        return PhasePoint(x.p(0) - dphi(q), q - sigma, x.z - phi_fn(q));
    };
    m.inverse = [phi_fn, dphi, sigma](const PhasePoint& y) {
        const double q = y.q(0) + sigma;
        return PhasePoint(y.p(0) + dphi(q), q, y.z + phi_fn(q));
    };
    m.pushforward = [dphi, d2phi](const PhasePoint& x, const TangentVector& v) {
        const double q = x.q(0);
        return TangentVector(v.dp(0) - d2phi(q) * v.dq(0), v.dq(0),
                             v.dz - dphi(q) * v.dq(0));
    };
    return m;
}

Contactomorphism make_custom(
    std::function<PhasePoint(const PhasePoint&)> forward,
    std::function<PhasePoint(const PhasePoint&)> inverse,
    std::function<TangentVector(const PhasePoint&, const TangentVector&)> pushforward) {
    return Contactomorphism{std::move(forward), std::move(inverse), std::move(pushforward)};
}

double lambda_preservation_residual(const Contactomorphism& map, const PhasePoint& x,
                                    const TangentVector& v) {
    const PhasePoint y = map.forward(x);
    const TangentVector w = map.pushforward(x, v);
    return std::abs(contact_form(y, w) - contact_form(x, v));
}

}  // namespace contactdyn
