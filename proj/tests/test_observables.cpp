#include "hcb/errors.hpp"
#include "hcb/freefermion.hpp"
#include "hcb/observables.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace hcb;

TEST_CASE("radius definition") {
    SUBCASE("t=0 profile gives exactly zero") {
        const std::vector<double> n = {0, 1, 1, 0};
        const double i0 = chain_center(4); // 2.5
        const double r0 = (1.0 / 2) * (n[1] * 0.25 + n[2] * 0.25);
        CHECK(radius(n, 2, i0, r0) == 0.0);
    }

    SUBCASE("hand-computed spread of a width-2 box to width 4") {
        // L=4, N=2: start n = (0,1,1,0), spread to uniform n = (.5,.5,.5,.5)
        const double i0 = 2.5;
        const double r0 = (1.0 / 2) * (0.25 + 0.25); // 0.25
        const std::vector<double> spread = {0.5, 0.5, 0.5, 0.5};
        const double m2 = (1.0 / 2) * (0.5 * 2.25 + 0.5 * 0.25 + 0.5 * 0.25 + 0.5 * 2.25); // 1.25
        CHECK(radius(spread, 2, i0, r0) == doctest::Approx(std::sqrt(m2 - r0)).epsilon(1e-15));
    }

    SUBCASE("slightly negative arguments clamp, corrupt ones throw") {
        const std::vector<double> n = {0, 1, 1, 0};
        const double r0 = 0.25;
        CHECK(radius(n, 2, 2.5, r0 + 5e-10) == 0.0);
        CHECK_THROWS_AS(radius(n, 2, 2.5, r0 + 1e-6), IntegrityError);
    }
}

TEST_CASE("series recording") {
    const ModelParams p(1.0, 0.0, 4);
    ObservableSeries s(p, 2, "test");
    const std::vector<double> n0 = {0, 1, 1, 0};

    SUBCASE("first row must be t=0; radius column starts at 0") {
        ObservableSeries bad(p, 2, "test");
        CHECK_THROWS_AS(bad.record(1.0, n0, 0, 0, 0), UsageError);
        s.record(0.0, n0, 0, 0, 0);
        CHECK(s.radius_col()[0] == 0.0);
        CHECK(s.total_n_col()[0] == doctest::Approx(2.0));
    }

    SUBCASE("appending keeps strict time order") {
        s.record(0.0, n0, 0, 0, 0);
        s.record(0.5, n0, 0.1, 0, 0);
        CHECK_THROWS_AS(s.record(0.5, n0, 0, 0, 0), UsageError);
        s.record(1.0, n0, 0.2, 0, 0);
        CHECK(s.rows() == 3);
    }

    SUBCASE("offline radius recomputation reproduces the stored column") {
        s.record(0.0, n0, 0, 0, 0);
        s.record(0.5, {0.2, 0.8, 0.8, 0.2}, 0, 0, 0);
        s.record(1.0, {0.4, 0.6, 0.6, 0.4}, 0, 0, 0);
        for (size_t r = 0; r < s.rows(); ++r) {
            const double re = radius(s.density_rows()[r], 2, chain_center(4), s.r0_sq());
            CHECK(re == doctest::Approx(s.radius_col()[r]).epsilon(1e-12));
        }
    }
}

TEST_CASE("csv emission is stable and self-describing") {
    const ModelParams p(1.0, 0.5, 3);
    ObservableSeries s(p, 1, "exact");
    s.record(0.0, {0, 1, 0}, 0, 0, 0);
    s.record(0.5, {0.25, 0.5, 0.25}, 0.125, 0.3, 1e-9);
    std::ostringstream os;
    s.write_csv(os, {"key = value"});
    const std::string text = os.str();
    CHECK(text.find("# format = hcb-series-v1") == 0);
    CHECK(text.find("# engine = exact") != std::string::npos);
    CHECK(text.find("# key = value") != std::string::npos);
    CHECK(text.find("time,radius,half_current,entropy_max,total_n,discarded_weight,n_1,n_2,n_3") !=
          std::string::npos);
    // two identical writes produce identical bytes
    std::ostringstream os2;
    s.write_csv(os2, {"key = value"});
    CHECK(text == os2.str());
}

TEST_CASE("melt time") {
    const int L = 8;
    const ModelParams p(1.0, 0.0, L);

    SUBCASE("vacuum melts at t = 0") {
        ObservableSeries s(p, 1, "x"); // N=1 to keep radius defined
        std::vector<double> n(L, 0.0);
        n[0] = 1.0; // particle far from the center sites 4,5
        s.record(0.0, n, 0, 0, 0);
        CHECK(melt_time(s, 0.5) == 0.0);
    }

    SUBCASE("never melting gives nullopt") {
        ObservableSeries s(p, 4, "x");
        std::vector<double> n = {0, 0, 1, 1, 1, 1, 0, 0};
        s.record(0.0, n, 0, 0, 0);
        s.record(1.0, n, 0, 0, 0);
        CHECK(!melt_time(s, 0.5).has_value());
    }

    SUBCASE("first crossing is reported") {
        ObservableSeries s(p, 4, "x");
        s.record(0.0, {0, 0, 1, 1, 1, 1, 0, 0}, 0, 0, 0);
        s.record(1.0, {0, 0.1, 0.9, 0.95, 0.95, 0.9, 0.1, 0}, 0, 0, 0);
        s.record(2.0, {0.2, 0.3, 0.5, 0.45, 0.45, 0.5, 0.3, 0.2}, 0, 0, 0);
        CHECK(melt_time(s, 0.5) == 2.0);
        CHECK(melt_time(s, 0.96) == 1.0);
        CHECK_THROWS_AS(melt_time(s, 1.5), UsageError);
    }
}

TEST_CASE("free expansion radius is monotone before the wavefront hits the wall") {
    const int L = 40;
    const ModelParams p(1.0, 0.0, L);
    std::vector<int> occ(L, 0);
    for (int i = 17; i <= 24; ++i) occ[static_cast<size_t>(i - 1)] = 1;
    const auto c0 = correlation_from_occupations(occ);
    ObservableSeries s(p, 8, "free-fermion");
    for (int k = 0; k <= 10; ++k) {
        const double t = 0.5 * k;
        s.record(t, density_from_correlation(evolve_correlation(c0, p, t)), 0, 0, 0);
    }
    for (size_t r = 1; r < s.rows(); ++r) CHECK(s.radius_col()[r] >= s.radius_col()[r - 1] - 1e-12);
}
