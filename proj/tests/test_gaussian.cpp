#include <catch2/catch_amalgamated.hpp>

#include "hfm/gaussian_instance.hpp"
#include "oracles.hpp"

using namespace hfm;

TEST_CASE("prime ideal stream small limits") {
    GaussianInstance zi(30);

    // norm <= 10: (2), (5), (5), (9) — matches the count of Gaussian prime
    // classes enumerated directly
    std::vector<u64> norms;
    zi.for_each_prime_handle(10, [&](PrimeHandle h) { norms.push_back(h.norm_key); });
    CHECK(norms == std::vector<u64>{2, 5, 5, 9});
    CHECK(norms.size() == oracle::gaussian_prime_classes(10));

    // norm <= 3: only the ramified ideal above 2 (3 is inert, norm 9)
    norms.clear();
    zi.for_each_prime_handle(3, [&](PrimeHandle h) { norms.push_back(h.norm_key); });
    CHECK(norms == std::vector<u64>{2});

    // norm <= 25: adds (13),(13),(17),(17); no prime ideal has norm 25
    // because 5 splits
    norms.clear();
    zi.for_each_prime_handle(25, [&](PrimeHandle h) { norms.push_back(h.norm_key); });
    CHECK(norms == std::vector<u64>{2, 5, 5, 9, 13, 13, 17, 17});
    CHECK(norms.size() == oracle::gaussian_prime_classes(25));
}

TEST_CASE("handle indices ascend with norm") {
    GaussianInstance zi(10'000);
    const auto& hs = zi.prime_handles();
    for (std::size_t i = 1; i < hs.size(); ++i) {
        CHECK(hs[i].index == hs[i - 1].index + 1);
        CHECK(hs[i].norm_key >= hs[i - 1].norm_key);
    }
}

TEST_CASE("ideal counts match the character divisor-sum oracle") {
    GaussianInstance zi(10'000);
    auto counts = zi.ideal_counts_by_norm(10'000);
    bool ok = true;
    for (u64 n = 1; n <= 10'000; ++n)
        if (counts[n] != oracle::gaussian_ideals_of_norm(n)) {
            ok = false;
            break;
        }
    CHECK(ok);
    CHECK(zi.ideal_count(1) == 1);
    // norms 1,2,4,5,5,8,9,10,10: nine ideals of norm <= 10
    CHECK(zi.ideal_count(10) == 9);
    i64 direct = 0;
    for (u64 n = 1; n <= 10; ++n) direct += oracle::gaussian_ideals_of_norm(n);
    CHECK(static_cast<i64>(zi.ideal_count(10)) == direct);
}

TEST_CASE("kappa is pi/4 and the Landau envelope holds to 1e6") {
    CHECK(GaussianInstance::kappa() == Catch::Approx(0.78539816339744831).epsilon(1e-14));

    GaussianInstance zi(1'000'000);
    auto counts = zi.ideal_counts_by_norm(1'000'000);
    u64 running = 0;
    double worst = 0.0;
    bool density_ok = true;
    for (u64 n = 1; n <= 1'000'000; ++n) {
        running += static_cast<u64>(counts[n]);
        if (running > n) density_ok = false;  // density bound I(x) <= x
        if (n == 1000 || n == 10'000 || n == 100'000 || n == 1'000'000) {
            double resid = std::abs(static_cast<double>(running) -
                                    GaussianInstance::kappa() * static_cast<double>(n));
            worst = std::max(worst, resid / std::cbrt(static_cast<double>(n)));
        }
    }
    CHECK(density_ok);
    CHECK(worst < 3.0);
}

TEST_CASE("enumeration visits every ideal once") {
    GaussianInstance zi(300);
    std::vector<u64> by_norm(301, 0);
    zi.enumerate(300, [&](const Factorization& f, u64 norm) {
        by_norm[norm] += 1;
        // recomposition: product of handle norms reproduces the norm
        CHECK(f.norm_dense() == norm);
    });
    auto counts = zi.ideal_counts_by_norm(300);
    bool ok = true;
    for (u64 n = 1; n <= 300; ++n)
        if (by_norm[n] != static_cast<u64>(counts[n])) ok = false;
    CHECK(ok);
}
