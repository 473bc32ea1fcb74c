#include "hcb/errors.hpp"
#include "hcb/fock.hpp"
#include "hcb/freefermion.hpp"

#include <doctest.h>

#include <cmath>

using namespace hcb;

TEST_CASE("box state construction") {
    const FockBasis basis(4, 2);
    const FockVector v = box_state(basis, 2, 3);
    // unit amplitude on 0110 (sites 2,3 occupied)
    CHECK(std::abs(v.amps[basis.index_of(0b0110)] - Complex(1.0, 0.0)) == 0.0);
    CHECK(v.amps.norm() == doctest::Approx(1.0).epsilon(1e-15));
    const auto n = density(v);
    CHECK(n[0] == 0.0);
    CHECK(n[1] == 1.0);
    CHECK(n[2] == 1.0);
    CHECK(n[3] == 0.0);

    CHECK_THROWS_AS(box_state(basis, 1, 3), UsageError); // width 3 != N=2
}

TEST_CASE("evolver basics") {
    const ModelParams p(1.0, 0.8, 8);
    const FockBasis basis(8, 3);
    const FockEvolver ev(basis, p);
    FockVector v = box_state(basis, 3, 5);

    SUBCASE("dt = 0 leaves the state unchanged") {
        const VectorXcd before = v.amps;
        ev.step(v, 0.0);
        CHECK((v.amps - before).norm() == 0.0);
    }

    SUBCASE("norm and energy conserved") {
        const double e0 = energy(v, p);
        for (int k = 0; k < 8; ++k) ev.step(v, 0.5);
        CHECK(v.amps.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(energy(v, p) == doctest::Approx(e0).epsilon(1e-9));
    }

    SUBCASE("eigenstate acquires only a global phase") {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(dense_hamiltonian(p, basis));
        FockVector eig{&basis, es.eigenvectors().col(2)};
        const auto n_before = density(eig);
        ev.step(eig, 1.3);
        const auto n_after = density(eig);
        for (size_t i = 0; i < n_before.size(); ++i)
            CHECK(n_before[i] == doctest::Approx(n_after[i]).epsilon(1e-10));
        const Complex ov = es.eigenvectors().col(2).dot(eig.amps);
        CHECK(std::abs(std::abs(ov) - 1.0) < 1e-10);
        CHECK(std::abs(ov - std::exp(Complex(0.0, -es.eigenvalues()[2] * 1.3))) < 1e-9);
    }
}

TEST_CASE("single-particle evolution matches the closed form") {
    const ModelParams p(1.0, 2.0, 3); // W irrelevant in the N=1 sector
    const FockBasis basis(3, 1);
    const FockEvolver ev(basis, p);
    FockVector v{&basis, VectorXcd::Zero(3)};
    v.amps[0] = 1.0; // particle on site 1
    const double t = 1.7;
    ev.step(v, t);
    const MatrixXcd u = expm_hermitian(single_particle_matrix(p).cast<Complex>(), t);
    // basis states 001, 010, 100 are sites 1,2,3 in order
    for (int i = 0; i < 3; ++i) CHECK(std::abs(v.amps[i] - u(i, 0)) < 1e-10);
}

TEST_CASE("krylov stepper agrees with the dense path") {
    const ModelParams p(1.0, 1.3, 12);
    const FockBasis basis(12, 4);
    const FockEvolver dense(basis, p, 1e-11);
    const FockEvolver krylov(basis, p, 1e-11, 1, /*force_krylov=*/true);
    FockVector a = box_state(basis, 5, 8);
    FockVector b = a;
    for (int k = 0; k < 4; ++k) {
        dense.step(a, 0.7);
        krylov.step(b, 0.7);
    }
    CHECK((a.amps - b.amps).norm() < 5e-10);
}

TEST_CASE("ground state") {
    SUBCASE("L=3 N=3: energy = W exactly") {
        const ModelParams p(1.0, 2.2, 3);
        const FockBasis basis(3, 3);
        const auto gs = ground_state(basis, p);
        CHECK(gs.energy == doctest::Approx(2.2).epsilon(1e-14));
    }

    SUBCASE("L=2-like single particle pair: analytic 2x2") {
        // smallest allowed L is 3; the (L=3, N=1) ground state is the k=1 mode
        const ModelParams p(1.0, 0.0, 3);
        const auto gs = ground_state(FockBasis(3, 1), p);
        CHECK(gs.energy == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
        // analytic eigenvector (1/2, sqrt(2)/2, 1/2)
        CHECK(std::abs(std::abs(gs.state.amps[1]) - std::sqrt(0.5)) < 1e-10);
    }

    SUBCASE("W=0 energy is the filled Fermi sea of eps_k") {
        const ModelParams p(1.0, 0.0, 10);
        const auto gs = ground_state(FockBasis(10, 4), p);
        double expect = 0.0;
        std::vector<double> eps;
        for (int l = 1; l <= 10; ++l) eps.push_back(-2.0 * std::cos(l * M_PI / 11));
        std::sort(eps.begin(), eps.end());
        for (int k = 0; k < 4; ++k) expect += eps[static_cast<size_t>(k)];
        CHECK(gs.energy == doctest::Approx(expect).epsilon(1e-10));
    }

    SUBCASE("lanczos path agrees with dense on an overlapping size") {
        const ModelParams p(1.0, 1.5, 16);
        const FockBasis basis(16, 5); // dim 4368 -> Lanczos
        REQUIRE(basis.dim() > 2000);
        const auto gs = ground_state(basis, p);
        // dense-solver oracle through the sector Hamiltonian applied columnwise
        // is too slow here; instead check the variational residual directly
        VectorXcd hv(basis.dim());
        par::apply_hamiltonian(basis, p, {gs.state.amps.data(), static_cast<size_t>(gs.state.amps.size())},
                               {hv.data(), static_cast<size_t>(hv.size())}, 1);
        CHECK((hv - gs.energy * gs.state.amps).norm() < 1e-7);
        CHECK(gs.state.amps.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("pair creation") {
    SUBCASE("vacuum gains exactly the central pair") {
        const FockBasis empty(6, 0), two(6, 2);
        FockVector vac{&empty, VectorXcd::Ones(1)};
        const auto res = apply_pair_creation(vac, 3, two);
        CHECK(res.weight == doctest::Approx(1.0).epsilon(1e-15));
        const auto n = density(res.state);
        CHECK(n[2] == doctest::Approx(1.0));
        CHECK(n[3] == doctest::Approx(1.0));
        CHECK(n[0] + n[1] + n[4] + n[5] == doctest::Approx(0.0));
    }

    SUBCASE("fully occupied input annihilates") {
        const FockBasis full(4, 4);
        // need a (L, N-2) source with occupied target sites: use N=2 on sites 2,3
        const FockBasis src(4, 2), dst(4, 4);
        FockVector v{&src, VectorXcd::Zero(src.dim())};
        v.amps[src.index_of(0b0110)] = 1.0;
        CHECK_THROWS_AS(apply_pair_creation(v, 2, dst), UsageError);
    }

    SUBCASE("weight equals the projected norm from the dense operator route") {
        const ModelParams p(1.0, 0.0, 6);
        const FockBasis src(6, 2), dst(6, 4);
        const auto gs = ground_state(src, p);
        const auto res = apply_pair_creation(gs.state, 3, dst);
        // brute-force route: weight = <gs| (1-n_3)(1-n_4) |gs>
        double expect = 0.0;
        for (std::int64_t a = 0; a < src.dim(); ++a) {
            const std::uint64_t s = src.state(a);
            if (!(s & 0b001100)) expect += std::norm(gs.state.amps[a]);
        }
        CHECK(res.weight == doctest::Approx(expect).epsilon(1e-12));
        CHECK(res.state.amps.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("half current against the continuity equation") {
    // Eq. 6 operator summed over right-half bonds equals d/dt of the
    // ramp-weighted moment sum_{j > L/2+1} (j - L/2 - 1) n_j. The naive
    // right-half occupancy derivative is the central-bond current instead and
    // vanishes for symmetric states; both facts are pinned here.
    const int L = 12;
    const ModelParams p(1.0, 2.0, L);
    const FockBasis basis(L, 4);
    const FockEvolver ev(basis, p, 1e-12);
    FockVector v = box_state(basis, 5, 8);
    ev.step(v, 4.0);

    const double jhalf = half_current(v, p.hop);

    const double dt = 1e-3;
    FockVector fwd = v, bwd = v;
    ev.step(fwd, dt);
    ev.step(bwd, -dt);
    const auto ramp = [L](const std::vector<double>& n) {
        double m = 0.0;
        for (int j = L / 2 + 2; j <= L; ++j) m += (j - L / 2 - 1) * n[static_cast<size_t>(j - 1)];
        return m;
    };
    const auto nright = [L](const std::vector<double>& n) {
        double m = 0.0;
        for (int j = L / 2 + 1; j <= L; ++j) m += n[static_cast<size_t>(j - 1)];
        return m;
    };
    const auto nf = density(fwd), nb = density(bwd);
    CHECK(jhalf == doctest::Approx((ramp(nf) - ramp(nb)) / (2 * dt)).epsilon(1e-5));
    CHECK(std::abs((nright(nf) - nright(nb)) / (2 * dt)) < 1e-6); // symmetric: no net crossing

    // frozen value from an independent implementation of the same protocol
    CHECK(jhalf == doctest::Approx(0.3458090696).epsilon(2e-7));
}

TEST_CASE("reflection symmetry of densities for the centered box") {
    const ModelParams p(1.0, 1.0, 10);
    const FockBasis basis(10, 4);
    const FockEvolver ev(basis, p);
    FockVector v = box_state(basis, 4, 7);
    ev.step(v, 3.0);
    const auto n = density(v);
    for (int i = 0; i < 5; ++i)
        CHECK(n[static_cast<size_t>(i)] == doctest::Approx(n[static_cast<size_t>(9 - i)]).epsilon(1e-9));
    double total = 0.0;
    for (double x : n) total += x;
    CHECK(total == doctest::Approx(4.0).epsilon(1e-10));
}
