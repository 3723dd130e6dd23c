#include <catch2/catch_amalgamated.hpp>

#include "hfm/verify.hpp"
#include "oracles.hpp"

using namespace hfm;

TEST_CASE("predicted main-term coefficients") {
    IntegerInstance z(2'000'000);
    auto pc = predict(TheoremId::hfree_count, z, 2, 1'000'000);
    REQUIRE(pc.terms.size() == 1);
    CHECK(pc.terms[0].coeff == Catch::Approx(6.0 / (M_PI * M_PI)).margin(1e-6));
    CHECK(pc.terms[0].shape == TermShape::x);

    auto pf = predict(TheoremId::hfull_count, z, 2, 1'000'000);
    REQUIRE(pf.terms.size() == 1);
    CHECK(pf.terms[0].coeff == Catch::Approx(2.17325433).margin(1e-4));
    CHECK(pf.terms[0].shape == TermShape::x_1h);

    // prediction values are monotone in x for each shape
    auto p1 = predict(TheoremId::hfree_omega1, z, 2, 1'000'000);
    double prev = 0.0;
    for (u64 x : {u64{100}, u64{1000}, u64{10'000}, u64{100'000}}) {
        double v = eval_prediction(p1, x);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("graded first-moment prediction carries the log log q shift") {
    // On the q-grid, log log x = log(n log q); written against log n the
    // x-term coefficient picks up exactly + log log q.
    auto f2 = GradedInstance::polynomial_ring(2, 40);
    auto p = predict(TheoremId::hfree_omega1, f2, 2, 40);
    REQUIRE(p.terms.size() == 2);
    double base = p.terms[0].coeff;   // kappa / zeta(2)
    double c1_term = p.terms[1].coeff;  // kappa C1 / zeta(2)
    for (unsigned n : {10u, 20u, 40u}) {
        double qn = std::pow(2.0, n);
        double direct = eval_prediction(p, n);
        double shifted = base * qn * std::log(static_cast<double>(n)) +
                         (c1_term + base * std::log(std::log(2.0))) * qn;
        CHECK(direct == Catch::Approx(shifted).epsilon(1e-12));
    }
}

TEST_CASE("predict refuses degenerate instances") {
    auto degen = GradedInstance::synthetic(2, {0, 1}, 1.0, 0.0);
    CHECK_THROWS_AS(predict(TheoremId::hfree_omega1, degen, 2, 40), std::domain_error);
}

TEST_CASE("residual tables") {
    IntegerInstance z(100'000);
    auto p = predict(TheoremId::hfree_count, z, 2, 100'000);
    std::vector<u64> cps{1000, 10'000, 100'000};
    // feed the prediction back: residuals vanish
    std::vector<double> exact;
    for (u64 x : cps) exact.push_back(eval_prediction(p, x));
    auto t = residual_table(p, cps, exact);
    for (auto& r : t.rows) {
        CHECK(r.residual == 0.0);
        CHECK(std::isfinite(r.normalized));
    }
    CHECK_THROWS_AS(residual_table(p, cps, {1.0}), std::invalid_argument);
}

TEST_CASE("error-shape selection by theta") {
    IntegerInstance z(1000);     // theta = 0 < 1/h: x^{1/h}
    auto p = predict(TheoremId::hfree_count, z, 2, 1000);
    CHECK(eval_error_shape(p, 100) == Catch::Approx(10.0));

    GaussianInstance zi(1000);   // theta = 1/3
    auto p2 = predict(TheoremId::hfree_count, zi, 2, 1000);
    CHECK(eval_error_shape(p2, 1'000'000) == Catch::Approx(1000.0));  // 1/2 > theta
    auto p3 = predict(TheoremId::hfree_count, zi, 3, 1000);
    // 1/3 == theta: x^{1/3} log x
    CHECK(eval_error_shape(p3, 1'000'000) ==
          Catch::Approx(100.0 * std::log(1e6)).epsilon(1e-12));
    auto p4 = predict(TheoremId::hfull_count, zi, 2, 1000);
    // h/(h+1) = 2/3 > theta, no equality case: x^{1/(h+1)}
    CHECK(eval_error_shape(p4, 1'000'000) == Catch::Approx(100.0));
}

TEST_CASE("fit_error_exponent recovers synthetic power laws") {
    for (double slope : {0.2, 1.0 / 3.0, 0.5, 0.75}) {
        ResidualTable t;
        for (u64 x : {u64{1000}, u64{10'000}, u64{100'000}, u64{1'000'000}, u64{10'000'000}}) {
            ResidualRow r;
            r.x = x;
            r.residual = std::pow(static_cast<double>(x), slope);
            t.rows.push_back(r);
        }
        CHECK(fit_error_exponent(t) == Catch::Approx(slope).margin(0.01));
    }

    // constant residuals: slope 0
    ResidualTable c;
    for (u64 x : {u64{1000}, u64{10'000}, u64{100'000}, u64{1'000'000}}) {
        ResidualRow r;
        r.x = x;
        r.residual = 7.0;
        c.rows.push_back(r);
    }
    CHECK(fit_error_exponent(c) == Catch::Approx(0.0).margin(1e-12));

    // all-zero residuals: exact agreement
    for (auto& r : c.rows) r.residual = 0.0;
    CHECK(fit_error_exponent(c) == -std::numeric_limits<double>::infinity());

    // preconditions
    ResidualTable small;
    small.rows.resize(3);
    CHECK_THROWS_AS(fit_error_exponent(small), std::invalid_argument);
    ResidualTable narrow;
    for (u64 x : {u64{1000}, u64{2000}, u64{4000}, u64{8000}}) {
        ResidualRow r;
        r.x = x;
        r.residual = 1.0;
        narrow.rows.push_back(r);
    }
    CHECK_THROWS_AS(fit_error_exponent(narrow), std::invalid_argument);
}

TEST_CASE("lemma checks over the integers") {
    IntegerInstance z(10'000'000);
    auto A = mertens_A(z, 10'000'000);

    auto t4 = lemma_check(LemmaId::mertens_part4, z, {10'000, 100'000, 1'000'000}, A);
    for (auto& r : t4.rows) CHECK(std::abs(r.normalized) < 0.1);

    auto ts = lemma_check(LemmaId::saidakeq, z, {10'000, 100'000, 1'000'000}, A);
    for (auto& r : ts.rows) CHECK(std::abs(r.normalized) < 5.0);
    // independent double-sum at 1e4: direct nested loops over an oracle sieve
    {
        auto primes = oracle::sieve_primes(5000);
        double lhs = 0.0;
        for (auto p : primes)
            for (auto q : primes) {
                if (p * q > 10'000) break;
                lhs += 1.0 / (static_cast<double>(p) * static_cast<double>(q));
            }
        CHECK(ts.rows[0].exact == Catch::Approx(lhs).epsilon(1e-12));
    }

    auto tw = lemma_check(LemmaId::sumnwpx2, z, {10'000, 100'000, 1'000'000}, A);
    for (auto& r : tw.rows) CHECK(std::abs(r.normalized) < 5.0);

    auto tp = lemma_check(LemmaId::sumplogp, z, {10'000, 100'000, 1'000'000}, A);
    for (auto& r : tp.rows) CHECK(std::abs(r.normalized) < 5.0);

    // harmonic sums: Sum 1/n - (log x + A') tends to 1/(2x), so the
    // x-normalized residual settles at 1/2
    auto t5 = lemma_check(LemmaId::boundnm_part5, z, {100'000, 1'000'000}, A);
    for (auto& r : t5.rows) CHECK(r.normalized == Catch::Approx(0.5).margin(0.01));
}
