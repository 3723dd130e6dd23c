#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "hfm/graded_instance.hpp"
#include "oracles.hpp"

using namespace hfm;

TEST_CASE("irreducible counts against brute-force polynomial factoring") {
    CHECK(irreducible_count(2, 1) == 2);
    CHECK(irreducible_count(2, 2) == 1);
    CHECK(irreducible_count(3, 2) == 3);
    for (unsigned d = 1; d <= 6; ++d) CHECK(irreducible_count(2, d) == oracle::count_irreducible(2, d));
    for (unsigned d = 1; d <= 4; ++d) CHECK(irreducible_count(3, d) == oracle::count_irreducible(3, d));
    CHECK_THROWS_AS(irreducible_count(1, 3), std::invalid_argument);
}

TEST_CASE("element counts: q^n for F_q[x], both routes agree") {
    for (u64 q : {u64{2}, u64{3}}) {
        auto inst = GradedInstance::polynomial_ring(q, 12);
        auto counts = inst.element_counts(12);
        auto conv = inst.element_counts_by_convolution(12);
        for (unsigned n = 0; n <= 12; ++n) {
            CHECK(counts[n] == checked_pow(q, n));
            CHECK(conv[n] == counts[n]);
        }
    }
}

TEST_CASE("synthetic instance: multiset counting") {
    // three degree-1 primes: elements of degree 2 are the 6 multisets of size 2
    auto inst = GradedInstance::synthetic(2, {0, 3}, 1.0, 0.0);
    CHECK(inst.element_count(2) == 6);
    auto conv = inst.element_counts_by_convolution(4);
    CHECK(conv[2] == 6);
    // single degree-1 prime: one element per degree
    auto single = GradedInstance::synthetic(2, {0, 1}, 1.0, 0.0);
    auto counts = single.element_counts(5);
    for (unsigned n = 0; n <= 5; ++n) CHECK(counts[n] == 1);
}

TEST_CASE("enumeration: F2[x] small degrees") {
    auto inst = GradedInstance::polynomial_ring(2, 8);
    std::vector<u64> by_degree(9, 0);
    u64 total = 0;
    inst.enumerate(8, [&](const Factorization& f, unsigned degree) {
        CHECK(f.degree_graded() == degree);
        by_degree[degree] += 1;
        ++total;
    });
    for (unsigned n = 0; n <= 8; ++n) CHECK(by_degree[n] == (u64{1} << n));
    CHECK(total == 511);

    // degree <= 2 over F2: exactly 7 elements
    u64 small = 0;
    inst.enumerate(2, [&](const Factorization&, unsigned) { ++small; });
    CHECK(small == 7);

    // synthetic with a single degree-1 prime: 4 elements of degree <= 3
    auto single = GradedInstance::synthetic(2, {0, 1}, 1.0, 0.0);
    u64 n_single = 0;
    single.enumerate(3, [&](const Factorization&, unsigned) { ++n_single; });
    CHECK(n_single == 4);
}

TEST_CASE("enumeration budget") {
    auto inst = GradedInstance::polynomial_ring(2, 20);
    CHECK_THROWS_AS(inst.enumerate(20, [](const Factorization&, unsigned) {}, 1000),
                    std::length_error);
}

TEST_CASE("squarefree counts of degree n equal q^n - q^{n-1}") {
    for (u64 q : {u64{2}, u64{3}}) {
        unsigned top = q == 2 ? 10u : 8u;
        auto inst = GradedInstance::polynomial_ring(q, top);
        std::vector<u64> sf(top + 1, 0), totals(top + 1, 0);
        inst.enumerate(top, [&](const Factorization& f, unsigned degree) {
            totals[degree] += 1;
            if (is_h_free(f, 2)) sf[degree] += 1;
        });
        for (unsigned n = 2; n <= top; ++n)
            CHECK(sf[n] == checked_pow(q, n) - checked_pow(q, n - 1));
        // per-degree totals observed from enumeration match the Euler recurrence
        auto counts = inst.element_counts(top);
        for (unsigned n = 0; n <= top; ++n) CHECK(totals[n] == counts[n]);
    }
}

TEST_CASE("squarefree count closed form re-derived by brute force at q=2") {
    // direct polynomial enumeration: count monic squarefree of degree n <= 6
    for (unsigned n = 2; n <= 6; ++n) {
        u64 count = 1;
        for (unsigned i = 0; i < n; ++i) count *= 2;
        u64 sf = 0;
        for (u64 code = 0; code < count; ++code) {
            oracle::Poly f = oracle::poly_from_code(code, n, 2);
            // squarefree iff no irreducible square divides; brute force over
            // monic g with 2 deg g <= n
            bool square_divides = false;
            for (unsigned d = 1; 2 * d <= n && !square_divides; ++d) {
                u64 cnt = u64{1} << d;
                for (u64 gcode = 0; gcode < cnt && !square_divides; ++gcode) {
                    oracle::Poly g = oracle::poly_from_code(gcode, d, 2);
                    if (!oracle::poly_irreducible(g, 2)) continue;
                    // g^2 | f?
                    oracle::Poly g2;
                    g2.c.assign(2 * d + 1, 0);
                    for (std::size_t i = 0; i < g.c.size(); ++i)
                        for (std::size_t j = 0; j < g.c.size(); ++j)
                            g2.c[i + j] = (g2.c[i + j] + g.c[i] * g.c[j]) % 2;
                    if (oracle::poly_is_zero(oracle::poly_mod(f, g2, 2))) square_divides = true;
                }
            }
            if (!square_divides) ++sf;
        }
        CHECK(sf == (u64{1} << n) - (u64{1} << (n - 1)));
    }
}

TEST_CASE("synthetic instance file round trip") {
    std::string path = "synthetic_test_instance.txt";
    {
        std::ofstream out(path);
        out << "# synthetic variety-style instance\n";
        out << "q 4\n";
        out << "kappa 1.3333333333333333\n";
        out << "theta 0.5\n";
        out << "d 1 4\n";
        out << "d 2 6\n";
        out << "d 3 20\n";
    }
    auto inst = GradedInstance::from_file(path);
    CHECK(inst.q() == 4);
    CHECK(inst.pi_d(1) == 4);
    CHECK(inst.pi_d(2) == 6);
    CHECK(inst.pi_d(3) == 20);
    CHECK(inst.kappa() == Catch::Approx(4.0 / 3.0));
    CHECK(inst.theta() == Catch::Approx(0.5));
    CHECK_FALSE(inst.standard_prime_model());
    std::remove(path.c_str());

    CHECK_THROWS_AS(GradedInstance::from_file("does_not_exist.txt"), std::invalid_argument);
}
