#include <catch2/catch_amalgamated.hpp>

#include "hfm/integer_instance.hpp"
#include "oracles.hpp"

using namespace hfm;

TEST_CASE("prime stream small") {
    IntegerInstance z(100);
    std::vector<u64> got = z.primes_upto(10);
    CHECK(got == std::vector<u64>{2, 3, 5, 7});

    u64 count = 0;
    z.for_each_prime(100, [&](u64 p) {
        CHECK(oracle::is_prime_trial(p));
        ++count;
    });
    CHECK(count == 25);
}

TEST_CASE("prime count to 1e6 against independent sieve") {
    IntegerInstance z(1'000'000);
    auto expected = oracle::sieve_primes(1'000'000);
    std::size_t i = 0;
    bool all_match = true;
    z.for_each_prime(1'000'000, [&](u64 p) {
        if (i >= expected.size() || expected[i] != p) all_match = false;
        ++i;
    });
    CHECK(all_match);
    CHECK(i == 78498);
}

TEST_CASE("factorize basics") {
    IntegerInstance z(1000);
    CHECK(z.factorize(1).is_identity());

    Factorization f12 = z.factorize(12);
    REQUIRE(f12.terms().size() == 2);
    CHECK(f12.terms()[0].prime.norm_key == 2);
    CHECK(f12.terms()[0].multiplicity == 2);
    CHECK(f12.terms()[1].prime.norm_key == 3);
    CHECK(f12.terms()[1].multiplicity == 1);

    Factorization f97 = z.factorize(97);
    REQUIRE(f97.terms().size() == 1);
    CHECK(f97.terms()[0].prime.norm_key == 97);
    CHECK(f97.terms()[0].multiplicity == 1);
    // 97 is the 25th prime
    CHECK(f97.terms()[0].prime.index == 24);

    CHECK_THROWS_AS(z.factorize(0), std::invalid_argument);
    CHECK_THROWS_AS(z.factorize(1001), std::invalid_argument);
}

TEST_CASE("recomposition up to 1e6") {
    IntegerInstance z(1'000'000);
    bool ok = true;
    for (u64 n = 1; n <= 1'000'000; ++n) {
        if (z.factorize(n).norm_dense() != n) {
            ok = false;
            break;
        }
    }
    CHECK(ok);
}

TEST_CASE("exponent scan matches trial-division factorization") {
    IntegerInstance z(50'000, 4096);  // small segments exercise the chunking
    u64 next = 2;
    bool ok = true;
    z.scan(50'000, [&](const ElementStats& st) {
        if (st.n != next++) ok = false;
        auto f = oracle::factor(st.n);
        unsigned mx = 0, mn = 1u << 30;
        unsigned big = 0;
        for (auto& [p, e] : f) {
            mx = std::max(mx, e);
            mn = std::min(mn, e);
            big += e;
        }
        if (st.omega != f.size() || st.big_omega != big || st.max_exp != mx ||
            (f.size() && st.min_exp != mn))
            ok = false;
    });
    CHECK(ok);
    CHECK(next == 50'001);
}

TEST_CASE("range-restricted prime stream agrees with the full stream") {
    IntegerInstance z(200'000, 4096);
    auto all = oracle::sieve_primes(200'000);
    // arbitrary split points, including segment-boundary cases
    std::vector<std::pair<u64, u64>> ranges{{2, 50}, {4095, 4097}, {100'000, 150'000},
                                            {199'990, 200'000}, {7919, 7919}};
    for (auto [lo, hi] : ranges) {
        std::vector<u64> got;
        z.for_each_prime_in(lo, hi, [&](u64 p) { got.push_back(p); });
        std::vector<u64> expect;
        for (u64 p : all)
            if (p >= lo && p <= hi) expect.push_back(p);
        CHECK(got == expect);
    }
}

TEST_CASE("element count is the floor function") {
    IntegerInstance z(1000);
    CHECK(z.element_count(7) == 7);
    CHECK(z.element_count(1000) == 1000);
}

TEST_CASE("resource budgets are enforced") {
    IntegerInstance z(1000);
    CHECK_THROWS_AS(z.primes_upto(2000), std::length_error);  // beyond instance limit
    CHECK_THROWS_AS(z.scan(5000, [](const ElementStats&) {}), std::length_error);
    CHECK_THROWS_AS(IntegerInstance(u64{1} << 60), std::length_error);
}
