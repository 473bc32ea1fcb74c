#include "hcb/errors.hpp"
#include "hcb/fock_basis.hpp"

#include <doctest.h>

#include <bit>

using namespace hcb;

TEST_CASE("basis enumeration") {
    SUBCASE("L=2 N=1: {01, 10}") {
        const FockBasis b(2, 1);
        REQUIRE(b.dim() == 2);
        CHECK(b.state(0) == 0b01);
        CHECK(b.state(1) == 0b10);
    }

    SUBCASE("L=4 N=2 has binomial(4,2) = 6 entries in increasing order") {
        const FockBasis b(4, 2);
        REQUIRE(b.dim() == 6);
        for (std::int64_t a = 1; a < b.dim(); ++a) CHECK(b.state(a) > b.state(a - 1));
    }

    SUBCASE("L=12 N=4 has 495 entries") {
        // 495 = 12*11*10*9 / 24, computed by hand
        CHECK(FockBasis(12, 4).dim() == 495);
    }

    SUBCASE("all states have popcount N") {
        const FockBasis b(9, 4);
        for (std::int64_t a = 0; a < b.dim(); ++a)
            CHECK(std::popcount(b.state(a)) == 4);
    }

    SUBCASE("index_of inverts the ordering exactly") {
        const FockBasis b(11, 5);
        for (std::int64_t a = 0; a < b.dim(); ++a) CHECK(b.index_of(b.state(a)) == a);
    }

    SUBCASE("edge sectors") {
        CHECK(FockBasis(5, 0).dim() == 1);
        CHECK(FockBasis(5, 5).dim() == 1);
        CHECK(FockBasis(5, 5).state(0) == 0b11111);
    }

    SUBCASE("capacity and argument errors") {
        CHECK_THROWS_AS(FockBasis(40, 20), CapacityError); // ~1.4e11 states
        CHECK_THROWS_AS(FockBasis(4, 5), UsageError);
        CHECK_THROWS_AS(FockBasis(4, -1), UsageError);
    }
}

TEST_CASE("binomial table") {
    CHECK(binomial(12, 4) == 495);
    CHECK(binomial(64, 1) == 64);
    CHECK(binomial(6, 0) == 1);
    CHECK(binomial(5, 6) == 0);
}
