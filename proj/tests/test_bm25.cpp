#include <doctest.h>

#include <random>

#include "gti/bm25.hpp"
#include "support.hpp"

using namespace gti;

TEST_CASE("bm25 weight with length normalisation cancelled")
{
    // tf=1, df=1, N=1, dl=avgdl: idf = ln(1 + 0.5/1.5) and the tf factor is 1.
    Bm25Params p;
    CHECK(bm25_weight(1, 1, 10, 10.0, 1, p) == doctest::Approx(0.287682).epsilon(1e-6));
    CHECK(bm25_weight(1, 1, 10, 10.0, 1, p) == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-15));
}

TEST_CASE("bm25 matches a longhand formula over a random grid")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> n_dist(1, 5000);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        auto n = n_dist(rng);
        auto df = std::uniform_int_distribution<std::uint64_t>(1, n)(rng);
        auto tf = std::uniform_int_distribution<std::uint32_t>(1, 50)(rng);
        auto dl = std::uniform_int_distribution<std::uint64_t>(1, 500)(rng);
        double avg = 1.0 + 200.0 * unit(rng);
        Bm25Params p{0.1 + 3.0 * unit(rng), unit(rng)};
        auto got = bm25_weight(tf, df, dl, avg, n, p);
        auto want = test::ref_bm25(tf, double(df), double(dl), avg, double(n), p.k1, p.b);
        REQUIRE(test::rel_close(got, want, 1e-12));
    }
}

TEST_CASE("bm25 monotonicity and positivity")
{
    Bm25Params p;
    for (std::uint64_t df = 1; df <= 100; df += 7) {
        double prev = 0.0;
        for (std::uint32_t tf = 1; tf <= 30; ++tf) {
            auto w = bm25_weight(tf, df, 40, 35.0, 100, p);
            CHECK(w > 0.0);
            CHECK(w >= prev);
            prev = w;
        }
    }
    double prev = std::numeric_limits<double>::infinity();
    for (std::uint64_t df = 1; df <= 100; ++df) {
        auto w = bm25_weight(3, df, 40, 35.0, 100, p);
        CHECK(w <= prev);
        prev = w;
    }
    CHECK(bm25_weight(5, 3, 20, 20.0, 10, p) >= bm25_weight(1, 3, 20, 20.0, 10, p));
}

TEST_CASE("b = 0 removes the length dependence")
{
    Bm25Params p{1.2, 0.0};
    auto w = bm25_weight(3, 4, 1, 50.0, 100, p);
    for (std::uint64_t dl : {2u, 17u, 50u, 999u}) {
        CHECK(bm25_weight(3, 4, dl, 50.0, 100, p) == w);
    }
}

TEST_CASE("bm25 domain errors")
{
    Bm25Params p;
    CHECK_THROWS_AS((void)bm25_weight(0, 1, 1, 1.0, 1, p), DomainError);
    CHECK_THROWS_AS((void)bm25_weight(1, 0, 1, 1.0, 1, p), DomainError);
    CHECK_THROWS_AS((void)bm25_weight(1, 2, 1, 1.0, 1, p), DomainError);
    CHECK_THROWS_AS((void)bm25_weight(1, 1, 0, 1.0, 1, p), DomainError);
    CHECK_THROWS_AS((void)bm25_weight(1, 1, 1, 0.0, 1, p), DomainError);
    CHECK_THROWS_AS((Bm25Params{0.0, 0.4}.validate()), DomainError);
    CHECK_THROWS_AS((Bm25Params{0.9, 1.5}.validate()), DomainError);
    CHECK_THROWS_AS((Bm25Params{0.9, -0.1}.validate()), DomainError);
}
