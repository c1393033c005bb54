#ifndef CONTACTDYN_CONTACTOMORPHISM_HPP
#define CONTACTDYN_CONTACTOMORPHISM_HPP

#include <functional>

#include "contactdyn/phase.hpp"

namespace contactdyn {

// An invertible coordinate change of the contact space together with its
// differential.  All factory-built maps pull lambda back to lambda.
struct Contactomorphism {
    std::function<PhasePoint(const PhasePoint&)> forward;
    std::function<PhasePoint(const PhasePoint&)> inverse;
    // Pushforward of a tangent vector attached at x (source coordinates).
    std::function<TangentVector(const PhasePoint&, const TangentVector&)> pushforward;
};

// (p,q,z) -> (P,Q,Z) = (p, q + b p, z + b p^2/2)
Contactomorphism make_ising_primary(double b);

// (p,q,z) -> (P,Q,Z) with Q = q + b p, P = p - phi'_beta(Q),
// Z = z - phi_beta(Q) + b p^2/2.   n = 1 only.
Contactomorphism make_ising_stability(double b, double beta);

// (p,q,z) -> (P,Q,Z) = (p - phi'(q), q - sigma, z - phi(q)).   n = 1 only.
Contactomorphism make_cooling(std::function<double(double)> phi,
                              std::function<double(double)> dphi,
                              std::function<double(double)> d2phi, double sigma);

// User-supplied maps; no lambda-preservation is implied beyond what the
// caller provides.
Contactomorphism make_custom(std::function<PhasePoint(const PhasePoint&)> forward,
                             std::function<PhasePoint(const PhasePoint&)> inverse,
                             std::function<TangentVector(const PhasePoint&, const TangentVector&)>
                                 pushforward);

// |lambda(Dx v) at forward(x) - lambda(v) at x|
double lambda_preservation_residual(const Contactomorphism& map, const PhasePoint& x,
                                    const TangentVector& v);

}  // namespace contactdyn

#endif
