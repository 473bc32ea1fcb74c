#include "hcb/errors.hpp"
#include "hcb/fock.hpp"
#include "hcb/freefermion.hpp"

#include <doctest.h>

#include <cmath>

using namespace hcb;

namespace {

std::vector<int> box_occ(int L, int i1, int i2) {
    std::vector<int> occ(static_cast<size_t>(L), 0);
    for (int i = i1; i <= i2; ++i) occ[static_cast<size_t>(i - 1)] = 1;
    return occ;
}

} // namespace

TEST_CASE("correlation matrix construction") {
    SUBCASE("all zeros") {
        const auto c = correlation_from_occupations(std::vector<int>(5, 0));
        CHECK(c.C.norm() == 0.0);
    }
    SUBCASE("box trace counts particles") {
        const auto c = correlation_from_occupations(box_occ(180, 81, 100));
        CHECK(std::abs(c.C.trace().real() - 20.0) < 1e-12);
        CHECK((c.C - c.C.adjoint()).norm() == 0.0);
    }
    SUBCASE("bad occupations") {
        CHECK_THROWS_AS(correlation_from_occupations({0, 2, 1}), UsageError);
    }
}

TEST_CASE("ground state correlation") {
    SUBCASE("empty and filled bands") {
        const ModelParams p(1.0, 0.0, 7);
        CHECK(ground_state_correlation(p, 0).C.norm() == doctest::Approx(0.0));
        const auto full = ground_state_correlation(p, 7);
        CHECK((full.C - MatrixXcd::Identity(7, 7)).norm() < 1e-12);
    }
    SUBCASE("L=3 N=1 analytic eigenvector (1/2, sqrt2/2, 1/2)") {
        const auto c = ground_state_correlation(ModelParams(1.0, 0.0, 3), 1);
        CHECK(c.C(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(c.C(0, 0).real() == doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("idempotent projector") {
        const auto c = ground_state_correlation(ModelParams(1.0, 0.0, 12), 5);
        CHECK((c.C * c.C - c.C).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(c.C.trace().real() - 5.0) < 1e-10);
    }
    SUBCASE("engine refuses W != 0") {
        CHECK_THROWS_AS(ground_state_correlation(ModelParams(1.0, 0.5, 6), 2), UsageError);
    }
}

TEST_CASE("correlation evolution") {
    const ModelParams p(1.0, 0.0, 12);
    const auto c0 = correlation_from_occupations(box_occ(12, 5, 8));

    SUBCASE("t = 0 is the identity map") {
        const auto c = evolve_correlation(c0, p, 0.0);
        CHECK((c.C - c0.C).norm() < 1e-14);
    }

    SUBCASE("ground state is stationary") {
        const auto gs = ground_state_correlation(p, 4);
        const auto c = evolve_correlation(gs, p, 2.7);
        CHECK((c.C - gs.C).cwiseAbs().maxCoeff() < 1e-10);
    }

    SUBCASE("unitary conjugation preserves hermiticity, trace, spectrum") {
        const auto c = evolve_correlation(c0, p, 3.3);
        CHECK((c.C - c.C.adjoint()).norm() < 1e-12);
        CHECK(std::abs(c.C.trace().real() - 4.0) < 1e-10);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(c.C);
        for (int k = 0; k < 12; ++k) {
            CHECK(es.eigenvalues()[k] > -1e-10);
            CHECK(es.eigenvalues()[k] < 1.0 + 1e-10);
        }
    }

    SUBCASE("engine refuses W != 0") {
        CHECK_THROWS_AS(evolve_correlation(c0, ModelParams(1.0, 1.0, 12), 1.0), UsageError);
    }
}

TEST_CASE("cross-engine agreement with the exact oracle at W=0") {
    const int L = 12;
    const ModelParams p(1.0, 0.0, L);
    const auto c0 = correlation_from_occupations(box_occ(L, 5, 8));
    const FockBasis basis(L, 4);
    const FockEvolver ev(basis, p, 1e-12);
    FockVector v = box_state(basis, 5, 8);

    for (double t : {2.0, 3.0}) {
        const auto ct = evolve_correlation(c0, p, t);
        FockVector w = v;
        ev.step(w, t);
        const auto n_ff = density_from_correlation(ct);
        const auto n_ex = density(w);
        for (int i = 0; i < L; ++i)
            CHECK(n_ff[static_cast<size_t>(i)] ==
                  doctest::Approx(n_ex[static_cast<size_t>(i)]).epsilon(1e-8));
        // nearest-neighbor current is JW-invariant including its sign
        CHECK(half_current_from_correlation(ct, p.hop) ==
              doctest::Approx(half_current(w, p.hop)).epsilon(1e-8));
    }
}

TEST_CASE("density accessor integrity") {
    SUBCASE("identity matrix reads all ones") {
        CorrelationMatrix c{MatrixXcd::Identity(5, 5)};
        const auto n = density_from_correlation(c);
        for (double x : n) CHECK(x == 1.0);
    }
    SUBCASE("corrupted matrix raises an integrity error") {
        CorrelationMatrix c{MatrixXcd::Identity(4, 4) * 1.5};
        CHECK_THROWS_AS(density_from_correlation(c), IntegrityError);
    }
    SUBCASE("diagonal correlation carries no current") {
        CorrelationMatrix c{MatrixXcd::Identity(6, 6) * 0.5};
        CHECK(half_current_from_correlation(c, 1.0) == 0.0);
    }
}

TEST_CASE("light cone and ballistic radius for the box") {
    const int L = 60;
    const ModelParams p(1.0, 0.0, L);
    const auto c0 = correlation_from_occupations(box_occ(L, 26, 35));
    // density at distance d > 2Jt + 6 from the box edges stays tiny at early t
    for (double t : {1.0, 2.0, 3.0}) {
        const auto n = density_from_correlation(evolve_correlation(c0, p, t));
        for (int i = 1; i <= L; ++i) {
            const double d = std::max(26 - i, i - 35);
            if (d > 2.0 * t + 6.0) CHECK(n[static_cast<size_t>(i - 1)] < 1e-6);
        }
    }
}
