#pragma once
// The monoid (N, *): primes by segmented sieve, factorization through the
// least-prime-factor machinery, dense grid, kappa = 1, theta = 0.
//
// Heavy scans never materialize a table over the full range: the exponent
// scan walks segments (default 2^22) and hands per-element multiplicity
// statistics to a callback, so x = 1e8 censuses run in bounded memory.

#include <cstring>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "util.hpp"

namespace hfm {

// Multiplicity statistics of one integer, as produced by the exponent scan.
struct ElementStats {
    u64 n = 0;
    u32 omega = 0;     // distinct prime factors
    u32 big_omega = 0; // prime factors with multiplicity
    u32 max_exp = 0;
    u32 min_exp = 0;   // meaningful only when omega >= 1
};

class IntegerInstance {
public:
    explicit IntegerInstance(u64 limit, u64 segment_size = u64{1} << 22)
        : limit_(limit), segment_size_(segment_size) {
        if (limit < 2) throw std::invalid_argument("IntegerInstance: limit must be >= 2");
        if (limit > (u64{1} << 52))
            throw std::length_error("IntegerInstance: limit exceeds supported budget");
        base_primes_ = simple_primes(isqrt(limit));
    }

    u64 limit() const { return limit_; }
    u64 segment_size() const { return segment_size_; }
    static constexpr Grid grid() { return Grid::dense; }
    static constexpr double kappa() { return 1.0; }
    static constexpr double theta() { return 0.0; }
    // I(y) <= density_bound * y for all y >= 1 (here exactly floor(y) <= y).
    static constexpr double density_bound() { return 1.0; }

    u64 element_count(u64 x) const { return x; }  // I(x) = floor(x), x integral

    // counts[n] = number of elements of norm n (here: 1 for every n >= 1).
    std::vector<i64> element_counts_by_norm(u64 x) const {
        if (x > limit_) throw std::length_error("element counts beyond instance limit");
        std::vector<i64> counts(x + 1, 1);
        if (!counts.empty()) counts[0] = 0;
        return counts;
    }

    // Primes in [lo, hi] in increasing order, by segmented Eratosthenes.
    template <class Fn>
    void for_each_prime_in(u64 lo, u64 hi, Fn&& fn) const {
        if (hi > limit_) throw std::length_error("prime stream beyond instance limit");
        if (lo <= 2 && hi >= 2) fn(u64{2});
        lo = std::max<u64>(lo, 3);
        std::vector<std::uint8_t> seg;
        for (u64 seg_lo = lo; seg_lo <= hi; seg_lo += segment_size_) {
            u64 seg_hi = std::min(hi, seg_lo + segment_size_ - 1);
            // odd numbers in [seg_lo, seg_hi]
            u64 first = seg_lo | 1;
            u64 count = first > seg_hi ? 0 : (seg_hi - first) / 2 + 1;
            seg.assign(count, 1);
            for (u32 p : base_primes_) {
                if (p == 2) continue;
                u64 pp = u64{p} * p;
                if (pp > seg_hi) break;
                u64 start = std::max<u64>(pp, ((first + p - 1) / p) * p);
                if (start % 2 == 0) start += p;
                for (u64 m = start; m <= seg_hi; m += 2 * u64{p}) seg[(m - first) / 2] = 0;
            }
            for (u64 i = 0; i < count; ++i)
                if (seg[i]) fn(first + 2 * i);
        }
    }

    // All primes <= x in increasing order.
    template <class Fn>
    void for_each_prime(u64 x, Fn&& fn) const {
        if (x >= 2) for_each_prime_in(2, x, fn);
    }

    std::vector<u64> primes_upto(u64 x) const {
        std::vector<u64> out;
        for_each_prime(x, [&](u64 p) { out.push_back(p); });
        return out;
    }

    // Prime handles in norm order (index = ordinal of the prime).
    template <class Fn>
    void for_each_prime_handle(u64 x, Fn&& fn) const {
        u32 index = 0;
        for_each_prime(x, [&](u64 p) { fn(PrimeHandle{index++, p}); });
    }

    // Trial division over the cached base primes; exact for all n <= limit.
    Factorization factorize(u64 n) const {
        if (n == 0 || n > limit_) throw std::invalid_argument("factorize: need 1 <= n <= limit");
        std::vector<Term> terms;
        u64 rest = n;
        for (u32 p : base_primes_) {
            if (u64{p} * p > rest) break;
            if (rest % p == 0) {
                u32 e = 0;
                while (rest % p == 0) { rest /= p; ++e; }
                terms.push_back({PrimeHandle{prime_ordinal(p), p}, e});
            }
        }
        if (rest > 1) terms.push_back({PrimeHandle{prime_ordinal(rest), rest}, 1});
        return Factorization::from_canonical(std::move(terms));
    }

    // Streams (n, stats) for every n in [lo, hi] in increasing order, one
    // segment-sized chunk at a time.  fn must be cheap; it is called once
    // per integer.
    template <class Fn>
    void scan_range(u64 lo, u64 hi, Fn&& fn) const {
        if (hi > limit_) throw std::length_error("scan beyond instance limit");
        lo = std::max<u64>(lo, 2);
        if (lo > hi) return;
        u64 buf = std::min(segment_size_, hi - lo + 1);
        std::vector<u64> rem(buf);
        std::vector<u32> om(buf), big(buf), mx(buf), mn(buf);
        for (u64 chunk_lo = lo; chunk_lo <= hi; chunk_lo += segment_size_) {
            u64 chunk_hi = std::min(hi, chunk_lo + segment_size_ - 1);
            scan_segment(chunk_lo, chunk_hi, rem, om, big, mx, mn, fn);
        }
    }

    template <class Fn>
    void scan(u64 x, Fn&& fn) const {
        scan_range(2, x, fn);
    }

private:
    static std::vector<u32> simple_primes(u64 x) {
        std::vector<u32> out;
        if (x < 2) return out;
        std::vector<std::uint8_t> is(x + 1, 1);
        for (u64 i = 2; i <= x; ++i) {
            if (!is[i]) continue;
            out.push_back(static_cast<u32>(i));
            for (u64 j = i * i; j <= x; j += i) is[j] = 0;
        }
        return out;
    }

    // Ordinal of a prime p (0-based).  Primes above sqrt(limit) are resolved
    // against a lazily built full prime list so factorize() can hand out true
    // norm-ascending handle indices.
    u32 prime_ordinal(u64 p) const {
        auto it = std::lower_bound(base_primes_.begin(), base_primes_.end(), p);
        if (it != base_primes_.end() && *it == p)
            return static_cast<u32>(it - base_primes_.begin());
        if (limit_ > (u64{1} << 30))
            throw std::length_error("prime ordinals above sqrt(limit) need limit <= 2^30");
        std::call_once(cache_->built, [this] {
            for_each_prime(limit_, [&](u64 q) { cache_->primes.push_back(q); });
        });
        const auto& all = cache_->primes;
        auto jt = std::lower_bound(all.begin(), all.end(), p);
        if (jt == all.end() || *jt != p)
            throw std::logic_error("prime_ordinal: not a prime");
        return static_cast<u32>(jt - all.begin());
    }

    template <class Fn>
    void scan_segment(u64 lo, u64 hi, std::vector<u64>& rem, std::vector<u32>& om,
                      std::vector<u32>& big, std::vector<u32>& mx, std::vector<u32>& mn,
                      Fn&& fn) const {
        u64 len = hi - lo + 1;
        for (u64 i = 0; i < len; ++i) rem[i] = lo + i;
        std::memset(om.data(), 0, len * sizeof(u32));
        std::memset(big.data(), 0, len * sizeof(u32));
        std::memset(mx.data(), 0, len * sizeof(u32));
        for (u64 i = 0; i < len; ++i) mn[i] = 0xffffffffu;
        for (u32 p : base_primes_) {
            if (u64{p} * p > hi) break;
            u64 start = ((lo + p - 1) / p) * p;
            for (u64 m = start; m <= hi; m += p) {
                u64 i = m - lo;
                u32 e = 0;
                while (rem[i] % p == 0) { rem[i] /= p; ++e; }
                om[i] += 1;
                big[i] += e;
                if (e > mx[i]) mx[i] = e;
                if (e < mn[i]) mn[i] = e;
            }
        }
        ElementStats st;
        for (u64 i = 0; i < len; ++i) {
            st.n = lo + i;
            st.omega = om[i];
            st.big_omega = big[i];
            st.max_exp = mx[i];
            st.min_exp = mn[i];
            if (rem[i] > 1) {  // one leftover prime factor > sqrt(limit)
                st.omega += 1;
                st.big_omega += 1;
                if (st.max_exp < 1) st.max_exp = 1;
                st.min_exp = std::min<u32>(st.min_exp, 1);
            }
            if (st.omega == 0) st.min_exp = 0;
            fn(st);
        }
    }

    struct PrimeCache {
        std::once_flag built;
        std::vector<u64> primes;
    };

    u64 limit_;
    u64 segment_size_;
    std::vector<u32> base_primes_;
    mutable std::unique_ptr<PrimeCache> cache_ = std::make_unique<PrimeCache>();
};

}  // namespace hfm
