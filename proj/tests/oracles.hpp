#pragma once
// Test-only oracles, independent of the library implementation paths:
// plain sieves, trial division, brute-force polynomial factoring over F_q,
// character divisor sums, and an Euler-Maclaurin zeta evaluator.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

using std::uint64_t;
using std::int64_t;

inline bool is_prime_trial(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<uint64_t> sieve_primes(uint64_t n) {
    std::vector<bool> is(n + 1, true);
    std::vector<uint64_t> out;
    for (uint64_t i = 2; i <= n; ++i) {
        if (!is[i]) continue;
        out.push_back(i);
        for (uint64_t j = i * i; j <= n; j += i) is[j] = false;
    }
    return out;
}

// exponent multiset of n by trial division
inline std::vector<std::pair<uint64_t, unsigned>> factor(uint64_t n) {
    std::vector<std::pair<uint64_t, unsigned>> out;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

inline unsigned omega(uint64_t n) { return static_cast<unsigned>(factor(n).size()); }

inline unsigned big_omega(uint64_t n) {
    unsigned s = 0;
    for (auto& [p, e] : factor(n)) s += e;
    return s;
}

inline bool squarefree(uint64_t n) {
    for (auto& [p, e] : factor(n))
        if (e >= 2) return false;
    return true;
}

inline bool h_free(uint64_t n, unsigned h) {
    for (auto& [p, e] : factor(n))
        if (e > h - 1) return false;
    return true;
}

inline bool h_full(uint64_t n, unsigned h) {
    for (auto& [p, e] : factor(n))
        if (e < h) return false;
    return true;
}

// chi_{-4}, the nontrivial character mod 4
inline int chi4(uint64_t n) {
    if (n % 2 == 0) return 0;
    return n % 4 == 1 ? 1 : -1;
}

// number of Z[i]-ideals of norm exactly n: sum_{d|n} chi4(d)
inline int64_t gaussian_ideals_of_norm(uint64_t n) {
    int64_t s = 0;
    for (uint64_t d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        s += chi4(d);
        if (d != n / d) s += chi4(n / d);
    }
    return s;
}

// Gaussian primes a+bi with norm <= x, counted up to unit multiples
// (one representative per associate class, conjugates distinct).
inline uint64_t gaussian_prime_classes(uint64_t x) {
    uint64_t count = 0;
    auto norm_prime = [&](uint64_t norm) {
        // a+bi is a Gaussian prime iff norm is a rational prime, or
        // b == 0 and a is a rational prime = 3 mod 4 (norm = a^2).
        return is_prime_trial(norm);
    };
    // b > 0, a > 0: one representative of each class with two nonzero parts;
    // conjugate classes a+bi / a-bi both counted via (a,b) and (b,a).
    for (uint64_t a = 1; a * a <= x; ++a)
        for (uint64_t b = 1; a * a + b * b <= x; ++b)
            if (norm_prime(a * a + b * b)) ++count;
    // axis primes: p = 3 mod 4 with p^2 <= x (class of p itself)
    for (uint64_t p = 3; p * p <= x; ++p)
        if (p % 4 == 3 && is_prime_trial(p)) ++count;
    return count;
}

// Euler-Maclaurin zeta for real s > 1, accurate to ~1e-15.
inline double zeta_em(double s) {
    const int N = 64;
    double sum = 0.0;
    for (int n = 1; n < N; ++n) sum += std::pow(n, -s);
    double Nd = N;
    sum += 0.5 * std::pow(Nd, -s);
    sum += std::pow(Nd, 1.0 - s) / (s - 1.0);
    // B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    const double bern[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730};
    double rising = s;          // s(s+1)...(s+2k-2), start k=1: just s
    double fact = 2.0;          // (2k)!
    for (int k = 1; k <= 6; ++k) {
        sum += bern[k - 1] / fact * rising * std::pow(Nd, -s - 2 * k + 1);
        // update to k+1: multiply rising by (s+2k-1)(s+2k), fact by (2k+1)(2k+2)
        rising *= (s + 2 * k - 1) * (s + 2 * k);
        fact *= (2 * k + 1) * (2 * k + 2);
    }
    return sum;
}

// --- monic polynomials over F_q (coefficient vectors, lowest degree first) ---

struct Poly {
    std::vector<unsigned> c;  // c[i] coefficient of x^i; monic: c.back() == 1
    unsigned deg() const { return static_cast<unsigned>(c.size()) - 1; }
};

inline Poly poly_from_code(uint64_t code, unsigned deg, unsigned q) {
    Poly f;
    f.c.resize(deg + 1);
    for (unsigned i = 0; i < deg; ++i) {
        f.c[i] = static_cast<unsigned>(code % q);
        code /= q;
    }
    f.c[deg] = 1;
    return f;
}

// remainder of a by b over F_q (b monic)
inline Poly poly_mod(Poly a, const Poly& b, unsigned q) {
    while (a.c.size() >= b.c.size()) {
        unsigned lead = a.c.back();
        if (lead != 0) {
            std::size_t shift = a.c.size() - b.c.size();
            for (std::size_t i = 0; i < b.c.size(); ++i) {
                unsigned sub = (lead * b.c[i]) % q;
                a.c[i + shift] = (a.c[i + shift] + q - sub % q) % q;
            }
        }
        a.c.pop_back();
        while (a.c.size() > 1 && a.c.back() == 0) a.c.pop_back();
        if (a.c.size() < b.c.size()) break;
    }
    return a;
}

inline bool poly_is_zero(const Poly& f) {
    for (unsigned v : f.c)
        if (v) return false;
    return true;
}

// brute force: f (monic, deg >= 1) irreducible iff no monic divisor of
// degree 1..deg/2 divides it
inline bool poly_irreducible(const Poly& f, unsigned q) {
    unsigned deg = f.deg();
    for (unsigned d = 1; 2 * d <= deg; ++d) {
        uint64_t count = 1;
        for (unsigned i = 0; i < d; ++i) count *= q;
        for (uint64_t code = 0; code < count; ++code) {
            Poly g = poly_from_code(code, d, q);
            if (poly_is_zero(poly_mod(f, g, q))) return false;
        }
    }
    return true;
}

inline uint64_t count_irreducible(unsigned q, unsigned deg) {
    uint64_t count = 1;
    for (unsigned i = 0; i < deg; ++i) count *= q;
    uint64_t irr = 0;
    for (uint64_t code = 0; code < count; ++code)
        if (poly_irreducible(poly_from_code(code, deg, q), q)) ++irr;
    return irr;
}

}  // namespace oracle
