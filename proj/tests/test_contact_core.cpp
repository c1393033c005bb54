#include <doctest.h>

#include <cmath>
#include <random>

#include "contactdyn/contactomorphism.hpp"
#include "contactdyn/hamiltonian.hpp"
#include "contactdyn/ising.hpp"
#include "contactdyn/models.hpp"
#include "contactdyn/phase.hpp"

using namespace contactdyn;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

PhasePoint random_point(std::mt19937_64& rng, double half = 5.0) {
    return PhasePoint(uniform(rng, -half, half), uniform(rng, -half, half),
                      uniform(rng, -half, half));
}

TangentVector random_tangent(std::mt19937_64& rng) {
    return TangentVector(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
}

ContactHamiltonian drop_gradient(const ContactHamiltonian& H) {
    return ContactHamiltonian([H](const PhasePoint& x) { return H(x); });
}

std::vector<std::pair<std::string, ContactHamiltonian>> model_corpus() {
    std::vector<std::pair<std::string, ContactHamiltonian>> out;
    out.emplace_back("linear", linear_hamiltonian(1.0));
    out.emplace_back("ising", ising_hamiltonian({6.0, 1.0, 1.0}));
    out.emplace_back("ising_pqz", ising_hamiltonian_pqz({6.0, 1.0, 1.0}));
    out.emplace_back("cooling", CoolingModel::coupled(2.0, 1.0, 1.0).hamiltonian());
    out.emplace_back("cooling_isentropic", CoolingModel::isentropic(2.0).hamiltonian());
    out.emplace_back("cooling_sine", CoolingModel::sine(2.0, 0.5, 3).hamiltonian());
    out.emplace_back("moebius", MoebiusModel{}.hamiltonian());
    out.emplace_back("admissible", make_admissible(1.0, 2.0 * M_PI, 0.2, 0.1).to_hamiltonian());
    return out;
}

}  // namespace

TEST_CASE("contact form evaluation") {
    CHECK(contact_form(PhasePoint(0, 0, 0), TangentVector(1, 0, 0)) == 0.0);
    CHECK(contact_form(PhasePoint(0, 0, 0), TangentVector(0, 0, 1)) == 1.0);
    CHECK(contact_form(PhasePoint(2, 5, 1), TangentVector(0, 1, 3)) == 1.0);

    PhasePoint x(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2), 0.0);
    TangentVector v(1, 0, 0);
    CHECK_THROWS_AS(contact_form(x, v), std::invalid_argument);
}

TEST_CASE("Reeb field from the unit Hamiltonian") {
    ContactHamiltonian one([](const PhasePoint&) { return 1.0; });
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        const PhasePoint x = random_point(rng);
        const TangentVector v = contact_vector_field(one, x);
        CHECK(v.dp(0) == 0.0);
        CHECK(v.dq(0) == 0.0);
        CHECK(v.dz == 1.0);
    }
}

TEST_CASE("contact field of -cz and the Ising relaxation Hamiltonian") {
    const double c = 1.0;
    const ContactHamiltonian H = linear_hamiltonian(c);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const PhasePoint x = random_point(rng);
        const TangentVector v = contact_vector_field(H, x);
        CHECK(v.dp(0) == doctest::Approx(-c * x.p(0)).epsilon(1e-14));
        CHECK(v.dq(0) == 0.0);
        CHECK(v.dz == doctest::Approx(-c * x.z).epsilon(1e-14));
    }

    const IsingParams par{6.0, 1.0, 1.0};
    const ContactHamiltonian Hi = ising_hamiltonian_pqz(par);
    for (int i = 0; i < 50; ++i) {
        const PhasePoint x = random_point(rng);
        const TangentVector v = contact_vector_field(Hi, x);
        const double want_p = -par.c * x.p(0) + par.c * phi_prime(par.beta, x.q(0));
        const double want_z = par.c * (-x.z + phi(par.beta, x.q(0)));
        CHECK(v.dp(0) == doctest::Approx(want_p).epsilon(1e-12));
        CHECK(v.dq(0) == 0.0);
        CHECK(v.dz == doctest::Approx(want_z).epsilon(1e-12));
    }
}

TEST_CASE("contact identity lambda(v_H) = H over the model corpus") {
    std::mt19937_64 rng(23);
    for (const auto& [name, H] : model_corpus()) {
        CAPTURE(name);
        const ContactHamiltonian Hfd = drop_gradient(H);
        for (int i = 0; i < 1000; ++i) {
            const PhasePoint x = random_point(rng);
            const double scale = std::max(1.0, std::abs(H(x)));
            CHECK(std::abs(contact_form(x, contact_vector_field(H, x)) - H(x)) <=
                  1e-9 * scale);
            CHECK(std::abs(contact_form(x, contact_vector_field(Hfd, x)) - Hfd(x)) <=
                  1e-5 * scale);
        }
    }
}

TEST_CASE("Lie-derivative residual of the contact identity") {
    ContactHamiltonian one([](const PhasePoint&) { return 1.0; });
    std::mt19937_64 rng(31);
    {
        const auto [r1, r2] = verify_contact_identity(one, random_point(rng));
        CHECK(r1 == 0.0);
        CHECK(r2 <= 1e-8);
    }
    const ContactHamiltonian H = linear_hamiltonian(1.0);
    for (int i = 0; i < 100; ++i) {
        const auto [r1, r2] = verify_contact_identity(H, random_point(rng, 2.0), 1e-4, rng());
        CHECK(r1 <= 1e-12);
        CHECK(r2 <= 1e-6);
    }
    const ContactHamiltonian Hi = ising_hamiltonian({6.0, 1.0, 1.0});
    for (int i = 0; i < 20; ++i) {
        const auto [r1, r2] = verify_contact_identity(Hi, random_point(rng, 2.0), 1e-4, rng());
        CHECK(r1 <= 1e-12);
        CHECK(r2 <= 1e-6);
    }
}

TEST_CASE("named contactomorphisms") {
    SUBCASE("ising_primary with b = 0 is the identity") {
        const Contactomorphism m = make_ising_primary(0.0);
        const PhasePoint x(0.7, -1.3, 2.2);
        const PhasePoint y = m.forward(x);
        CHECK(y.p(0) == x.p(0));
        CHECK(y.q(0) == x.q(0));
        CHECK(y.z == x.z);
    }
    SUBCASE("ising_stability at the quoted point") {
        const Contactomorphism m = make_ising_stability(6.0, 1.0);
        const PhasePoint y = m.forward(PhasePoint(0.5, 0.0, 0.0));
        CHECK(y.q(0) == doctest::Approx(3.0).epsilon(1e-15));
        CHECK(y.p(0) == doctest::Approx(0.5 - std::tanh(3.0)).epsilon(1e-15));
        CHECK(y.z == doctest::Approx(-std::log(2.0 * std::cosh(3.0)) + 0.75).epsilon(1e-14));
    }
    SUBCASE("cooling maps the equilibrium point to the origin") {
        const Contactomorphism m = make_cooling([](double q) { return std::exp(q); },
                                                [](double q) { return std::exp(q); },
                                                [](double q) { return std::exp(q); }, 1.0);
        const double e = std::exp(1.0);
        const PhasePoint y = m.forward(PhasePoint(e, 1.0, e));
        CHECK(std::abs(y.p(0)) <= 1e-15);
        CHECK(std::abs(y.q(0)) <= 1e-15);
        CHECK(std::abs(y.z) <= 1e-15);
    }
}

TEST_CASE("lambda preservation at 1000 random (point, tangent) pairs") {
    std::vector<Contactomorphism> maps;
    maps.push_back(make_ising_primary(6.0));
    maps.push_back(make_ising_stability(6.0, 1.0));
    maps.push_back(make_cooling([](double q) { return std::exp(std::min(q, 700.0)); },
                                [](double q) { return std::exp(std::min(q, 700.0)); },
                                [](double q) { return std::exp(std::min(q, 700.0)); }, 1.0));
    maps.push_back(make_custom(
        [](const PhasePoint& x) { return PhasePoint(x.p(0), x.q(0) + 2.0, x.z - 0.5); },
        [](const PhasePoint& x) { return PhasePoint(x.p(0), x.q(0) - 2.0, x.z + 0.5); },
        [](const PhasePoint&, const TangentVector& v) { return v; }));

    std::mt19937_64 rng(43);
    for (const auto& m : maps) {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const PhasePoint x = random_point(rng, 3.0);
            const TangentVector v = random_tangent(rng);
            worst = std::max(worst, lambda_preservation_residual(m, x, v));
        }
        CHECK(worst <= 1e-9);
    }

    SUBCASE("round trips invert") {
        const Contactomorphism m = make_ising_stability(2.0, 0.7);
        for (int i = 0; i < 100; ++i) {
            const PhasePoint x = random_point(rng, 3.0);
            const PhasePoint x2 = m.inverse(m.forward(x));
            CHECK(std::abs(x2.p(0) - x.p(0)) <= 1e-12);
            CHECK(std::abs(x2.q(0) - x.q(0)) <= 1e-12);
            CHECK(std::abs(x2.z - x.z) <= 1e-12);
        }
    }
}

TEST_CASE("contact field is additive in the Hamiltonian") {
    const ContactHamiltonian A = linear_hamiltonian(0.8);
    const ContactHamiltonian B = ising_hamiltonian({1.5, 0.4, 1.0});
    const ContactHamiltonian S = A + B;
    std::mt19937_64 rng(57);
    for (int i = 0; i < 200; ++i) {
        const PhasePoint x = random_point(rng);
        const TangentVector va = contact_vector_field(A, x);
        const TangentVector vb = contact_vector_field(B, x);
        const TangentVector vs = contact_vector_field(S, x);
        CHECK(std::abs(vs.dp(0) - va.dp(0) - vb.dp(0)) <= 1e-12);
        CHECK(std::abs(vs.dq(0) - va.dq(0) - vb.dq(0)) <= 1e-12);
        CHECK(std::abs(vs.dz - va.dz - vb.dz) <= 1e-12);
    }
}

TEST_CASE("finite-difference gradient error propagates within contract") {
    // gradient error itself, not the identity: the identity cancels exactly
    const ContactHamiltonian H = ising_hamiltonian({6.0, 1.0, 1.0});
    const ContactHamiltonian Hfd = drop_gradient(H);
    std::mt19937_64 rng(61);
    for (int i = 0; i < 200; ++i) {
        const PhasePoint x = random_point(rng);
        const HamGradient ga = H.gradient(x);
        const HamGradient gf = Hfd.gradient(x);
        CHECK(std::abs(ga.dp(0) - gf.dp(0)) <= 1e-5 * std::max(1.0, std::abs(ga.dp(0))));
        CHECK(std::abs(ga.dq(0) - gf.dq(0)) <= 1e-5 * std::max(1.0, std::abs(ga.dq(0))));
        CHECK(std::abs(ga.dz - gf.dz) <= 1e-7);
    }
}
