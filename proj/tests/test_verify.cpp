#include <doctest.h>

#include <sstream>

#include "gti/common.hpp"
#include "gti/verify.hpp"

using namespace gti;

TEST_CASE("trials are deterministic in their seed")
{
    for (std::uint64_t seed : {1ULL, 99ULL, 123456ULL}) {
        auto a = run_trial(seed, 300);
        auto b = run_trial(seed, 300);
        REQUIRE(a.checks.size() == check_names().size());
        for (std::size_t i = 0; i < a.checks.size(); ++i) {
            CHECK(a.checks[i].tested == b.checks[i].tested);
            CHECK(a.checks[i].violated == b.checks[i].violated);
        }
    }
}

TEST_CASE("serial and parallel campaigns agree")
{
    VerifyOptions o;
    o.trials = 60;
    o.seed = 17;
    o.max_docs = 400;
    o.threads = 1;
    auto serial = run_verify_serial(o);
    o.threads = 3;
    auto parallel = run_verify(o);
    REQUIRE(serial.checks.size() == parallel.checks.size());
    for (std::size_t i = 0; i < serial.checks.size(); ++i) {
        CHECK(serial.checks[i].name == parallel.checks[i].name);
        CHECK(serial.checks[i].attempted == 60);
        CHECK(serial.checks[i].tested == parallel.checks[i].tested);
        CHECK(serial.checks[i].violations == parallel.checks[i].violations);
    }
    CHECK(serial.violations() == 0);
    CHECK(serial.find("rank_safety_bmw")->tested == 60);
    CHECK(serial.find("nope") == nullptr);

    std::ostringstream text;
    write_verify_report(text, serial);
    CHECK(text.str().find("containment: tested") != std::string::npos);
}

TEST_CASE("invalid campaign options")
{
    VerifyOptions o;
    o.max_docs = 0;
    CHECK_THROWS_AS((void)run_verify(o), DomainError);
    o.max_docs = 10;
    o.trials = 0;
    CHECK_THROWS_AS((void)run_verify(o), DomainError);
    o.trials = 1;
    o.threads = -1;
    CHECK_THROWS_AS(o.validate(), DomainError);
}
