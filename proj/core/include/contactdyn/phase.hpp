#ifndef CONTACTDYN_PHASE_HPP
#define CONTACTDYN_PHASE_HPP

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

// Standard contact space R^{2n+1} with coordinates (p, q, z) and the
// contact form  lambda = dz - p dq.  Flattened state layout used by the
// integrators is [p_1..p_n, q_1..q_n, z].

namespace contactdyn {

struct PhasePoint {
    Eigen::VectorXd p;
    Eigen::VectorXd q;
    double z = 0.0;

    PhasePoint() = default;
    PhasePoint(Eigen::VectorXd p_, Eigen::VectorXd q_, double z_)
        : p(std::move(p_)), q(std::move(q_)), z(z_) {
        if (p.size() != q.size())
            throw std::invalid_argument("PhasePoint: p and q must have equal length");
    }
    // n = 1 convenience
    PhasePoint(double p1, double q1, double z_) : p(1), q(1), z(z_) {
        p(0) = p1;
        q(0) = q1;
    }

    Eigen::Index n() const { return p.size(); }

    Eigen::VectorXd flat() const {
        Eigen::VectorXd y(2 * n() + 1);
        y.head(n()) = p;
        y.segment(n(), n()) = q;
        y(2 * n()) = z;
        return y;
    }

    static PhasePoint from_flat(const Eigen::VectorXd& y) {
        const Eigen::Index n = (y.size() - 1) / 2;
        if (2 * n + 1 != y.size())
            throw std::invalid_argument("PhasePoint::from_flat: even-sized state");
        PhasePoint x;
        x.p = y.head(n);
        x.q = y.segment(n, n);
        x.z = y(2 * n);
        return x;
    }

    bool finite() const {
        return p.allFinite() && q.allFinite() && std::isfinite(z);
    }
};

struct TangentVector {
    Eigen::VectorXd dp;
    Eigen::VectorXd dq;
    double dz = 0.0;

    TangentVector() = default;
    TangentVector(Eigen::VectorXd dp_, Eigen::VectorXd dq_, double dz_)
        : dp(std::move(dp_)), dq(std::move(dq_)), dz(dz_) {}
    TangentVector(double dp1, double dq1, double dz_) : dp(1), dq(1), dz(dz_) {
        dp(0) = dp1;
        dq(0) = dq1;
    }

    Eigen::Index n() const { return dp.size(); }

    Eigen::VectorXd flat() const {
        Eigen::VectorXd y(2 * n() + 1);
        y.head(n()) = dp;
        y.segment(n(), n()) = dq;
        y(2 * n()) = dz;
        return y;
    }

    static TangentVector from_flat(const Eigen::VectorXd& y) {
        const Eigen::Index n = (y.size() - 1) / 2;
        TangentVector v;
        v.dp = y.head(n);
        v.dq = y.segment(n, n);
        v.dz = y(2 * n);
        return v;
    }

    double norm() const { return flat().norm(); }

    TangentVector& operator+=(const TangentVector& o) {
        dp += o.dp;
        dq += o.dq;
        dz += o.dz;
        return *this;
    }
};

inline TangentVector operator+(TangentVector a, const TangentVector& b) { return a += b; }

inline TangentVector operator*(double s, const TangentVector& v) {
    return TangentVector(s * v.dp, s * v.dq, s * v.dz);
}

// lambda_x(v) = dz - sum_i p_i dq_i
inline double contact_form(const PhasePoint& x, const TangentVector& v) {
    if (x.n() != v.n())
        throw std::invalid_argument("contact_form: dimension mismatch");
    return v.dz - x.p.dot(v.dq);
}

}  // namespace contactdyn

#endif
