#pragma once
// The ideals of Z[i]: prime ideals arise from rational primes by splitting
// (p = 2 ramifies into one ideal of norm 2, p = 1 mod 4 splits into two
// ideals of norm p, p = 3 mod 4 stays inert with norm p^2).  Dense grid,
// kappa = pi/4, theta = 1/3.

#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "integer_instance.hpp"
#include "util.hpp"

namespace hfm {

class GaussianInstance {
public:
    explicit GaussianInstance(u64 limit) : limit_(limit) {
        if (limit < 2) throw std::invalid_argument("GaussianInstance: limit must be >= 2");
        if (limit > (u64{1} << 31))
            throw std::length_error("GaussianInstance: limit exceeds supported budget");
        build_handles();
    }

    u64 limit() const { return limit_; }
    static constexpr Grid grid() { return Grid::dense; }
    static constexpr double theta() { return 1.0 / 3.0; }  // 1 - 2/(n_K + 1), n_K = 2
    // Verified for all x <= limit at construction: I(x) <= x.
    static constexpr double density_bound() { return 1.0; }

    // kappa_K = 2^r1 (2 pi)^r2 h R / (nu sqrt|d_K|) for K = Q(i).
    static double kappa() {
        const int r1 = 0;           // real embeddings
        const int r2 = 1;           // conjugate pairs of complex embeddings
        const double class_number = 1.0;
        const double regulator = 1.0;
        const double roots_of_unity = 4.0;
        const double abs_discriminant = 4.0;
        double num = std::pow(2.0, r1) * std::pow(2.0 * 3.14159265358979323846, r2) *
                     class_number * regulator;
        return num / (roots_of_unity * std::sqrt(abs_discriminant));
    }

    // Prime ideal handles with norm <= limit, norm-ascending; the two
    // conjugate ideals above a split prime are adjacent handles.
    const std::vector<PrimeHandle>& prime_handles() const { return handles_; }

    template <class Fn>
    void for_each_prime_handle(u64 x, Fn&& fn) const {
        if (x > limit_) throw std::length_error("prime handles beyond instance limit");
        for (const PrimeHandle& h : handles_) {
            if (h.norm_key > x) break;
            fn(h);
        }
    }

    // counts[n] = number of ideals of norm exactly n, for n <= x, generated by
    // multiplying the local Euler factors over the prime-ideal stream.
    std::vector<i64> ideal_counts_by_norm(u64 x) const {
        if (x > limit_) throw std::length_error("ideal counts beyond instance limit");
        std::vector<i64> counts(x + 1, 0);
        if (x >= 1) counts[1] = 1;
        for (const PrimeHandle& h : handles_) {
            u64 t = h.norm_key;
            if (t > x) break;
            for (u64 m = t; m <= x; m += t) counts[m] += counts[m / t];
        }
        return counts;
    }

    std::vector<i64> element_counts_by_norm(u64 x) const { return ideal_counts_by_norm(x); }

    // Exact number of ideals of norm <= x (the unit ideal included).
    u64 ideal_count(u64 x) const {
        auto counts = ideal_counts_by_norm(x);
        u64 total = 0;
        for (u64 n = 1; n <= x; ++n) total += static_cast<u64>(counts[n]);
        return total;
    }

    // Enumerates every ideal with norm <= x exactly once as a Factorization,
    // by recursive multiset composition over the handle stream.
    template <class Fn>
    void enumerate(u64 x, Fn&& fn) const {
        if (x > limit_) throw std::length_error("enumerate beyond instance limit");
        std::vector<Term> stack;
        enumerate_rec(0, 1, x, stack, fn);
    }

private:
    void build_handles() {
        IntegerInstance rationals(std::max<u64>(limit_, 4));
        std::vector<u64> split_or_ramified;  // norms p (and 2)
        std::vector<u64> inert_squares;      // norms p^2
        rationals.for_each_prime(limit_, [&](u64 p) {
            if (p == 2) {
                split_or_ramified.push_back(2);  // ramified: one ideal
            } else if (p % 4 == 1) {
                split_or_ramified.push_back(p);  // two conjugate ideals
                split_or_ramified.push_back(p);
            } else if (checked_mul(p, p) <= limit_) {
                inert_squares.push_back(p * p);
            }
        });
        // merge the two norm-sorted streams
        handles_.reserve(split_or_ramified.size() + inert_squares.size());
        std::size_t i = 0, j = 0;
        u32 index = 0;
        while (i < split_or_ramified.size() || j < inert_squares.size()) {
            bool take_first = j >= inert_squares.size() ||
                              (i < split_or_ramified.size() &&
                               split_or_ramified[i] <= inert_squares[j]);
            u64 norm = take_first ? split_or_ramified[i++] : inert_squares[j++];
            handles_.push_back(PrimeHandle{index++, norm});
        }
    }

    template <class Fn>
    void enumerate_rec(std::size_t from, u64 norm, u64 x, std::vector<Term>& stack,
                       Fn& fn) const {
        fn(Factorization::from_canonical(stack), norm);
        for (std::size_t i = from; i < handles_.size(); ++i) {
            u64 t = handles_[i].norm_key;
            if (static_cast<u128>(norm) * t > x) break;
            u64 cur = norm;
            u32 mult = 0;
            while (static_cast<u128>(cur) * t <= x) {
                cur *= t;
                ++mult;
                stack.push_back({handles_[i], mult});
                enumerate_rec(i + 1, cur, x, stack, fn);
                stack.pop_back();
            }
        }
    }

    u64 limit_;
    std::vector<PrimeHandle> handles_;
};

}  // namespace hfm
