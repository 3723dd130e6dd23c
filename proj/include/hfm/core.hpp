#pragma once
// Instance-agnostic monoid elements: a factorization is a sorted multiset of
// (prime handle, multiplicity).  All pointwise arithmetic functions (omega,
// Omega, mu, the h-free/h-full predicates) read this one representation.
//
// Norm bookkeeping lives on two grids: "dense" instances carry plain integer
// norms, "graded" instances carry degrees d with norm q^d.  A prime handle's
// norm_key is the norm itself on dense grids and the degree on graded grids.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "util.hpp"

namespace hfm {

enum class Grid : std::uint8_t { dense, graded };

struct NormKey {
    Grid grid = Grid::dense;
    u64 value = 1;  // dense: the norm n >= 1; graded: the degree d >= 0
};

struct PrimeHandle {
    u32 index = 0;     // ordinal in norm-ascending order, unique per instance
    u64 norm_key = 0;  // norm (dense) or degree (graded)

    friend bool operator==(const PrimeHandle&, const PrimeHandle&) = default;
};

struct Term {
    PrimeHandle prime;
    u32 multiplicity = 0;

    friend bool operator==(const Term&, const Term&) = default;
};

class Factorization {
public:
    Factorization() = default;  // the monoid identity, norm 1

    // Normalizes: sorts by prime index, rejects zero multiplicities and
    // duplicate prime indices.
    explicit Factorization(std::vector<Term> terms) : terms_(std::move(terms)) {
        std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
            return a.prime.index < b.prime.index;
        });
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (terms_[i].multiplicity == 0)
                throw std::invalid_argument("Factorization: zero multiplicity");
            if (i > 0 && terms_[i].prime.index == terms_[i - 1].prime.index)
                throw std::invalid_argument("Factorization: duplicate prime");
        }
    }

    // Fast path for callers that already hold canonical terms.
    static Factorization from_canonical(std::vector<Term> terms) {
        Factorization f;
        f.terms_ = std::move(terms);
        return f;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_identity() const { return terms_.empty(); }

    // Product of prime norms with multiplicity; dense grids only.
    u64 norm_dense() const {
        u64 n = 1;
        for (const Term& t : terms_)
            n = checked_mul(n, checked_pow(t.prime.norm_key, t.multiplicity));
        return n;
    }

    // Sum of prime degrees with multiplicity; graded grids only.
    u64 degree_graded() const {
        u64 d = 0;
        for (const Term& t : terms_) d += t.prime.norm_key * t.multiplicity;
        return d;
    }

    friend bool operator==(const Factorization&, const Factorization&) = default;

private:
    std::vector<Term> terms_;
};

inline void require_h(int h) {
    if (h < 2) throw std::invalid_argument("h must be >= 2");
}

// Number of distinct prime elements.
inline u32 omega(const Factorization& f) {
    return static_cast<u32>(f.terms().size());
}

// Number of prime elements counted with multiplicity.
inline u64 big_omega(const Factorization& f) {
    u64 s = 0;
    for (const Term& t : f.terms()) s += t.multiplicity;
    return s;
}

// Every multiplicity <= h-1; vacuously true for the identity.
inline bool is_h_free(const Factorization& f, int h) {
    require_h(h);
    for (const Term& t : f.terms())
        if (t.multiplicity > static_cast<u32>(h - 1)) return false;
    return true;
}

// Every multiplicity >= h; vacuously true for the identity.
inline bool is_h_full(const Factorization& f, int h) {
    require_h(h);
    for (const Term& t : f.terms())
        if (t.multiplicity < static_cast<u32>(h)) return false;
    return true;
}

// mu: 1 on the identity, (-1)^omega on 2-free elements, 0 otherwise.
inline int moebius(const Factorization& f) {
    for (const Term& t : f.terms())
        if (t.multiplicity >= 2) return 0;
    return (omega(f) % 2 == 0) ? 1 : -1;
}

// Splits f into its h-free part (multiplicities <= h-1) and h-full part
// (multiplicities >= h).  The parts share no prime and recompose f.
inline std::pair<Factorization, Factorization> split_h(const Factorization& f, int h) {
    require_h(h);
    std::vector<Term> free_part, full_part;
    for (const Term& t : f.terms()) {
        if (t.multiplicity <= static_cast<u32>(h - 1))
            free_part.push_back(t);
        else
            full_part.push_back(t);
    }
    return {Factorization::from_canonical(std::move(free_part)),
            Factorization::from_canonical(std::move(full_part))};
}

// Evaluates sum_{d : d^h | f} mu(d) by enumerating the divisor exponent
// tuples e_p in [0, floor(s_p / h)], and checks that the sum equals
// [f is h-free].
inline bool moebius_identity_check(const Factorization& f, int h) {
    require_h(h);
    const auto& terms = f.terms();
    std::vector<u32> bound(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
        bound[i] = terms[i].multiplicity / static_cast<u32>(h);

    i64 sum = 0;
    std::vector<u32> e(terms.size(), 0);
    for (;;) {
        // mu of the divisor with exponent vector e
        int mu = 1;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] >= 2) {
                mu = 0;
                break;
            }
            if (e[i] == 1) mu = -mu;
        }
        sum += mu;
        // next tuple, mixed radix
        std::size_t i = 0;
        while (i < e.size() && e[i] == bound[i]) e[i++] = 0;
        if (i == e.size()) break;
        ++e[i];
    }
    i64 expected = is_h_free(f, h) ? 1 : 0;
    return sum == expected;
}

}  // namespace hfm
