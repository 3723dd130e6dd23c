#pragma once
// Low-level helpers shared across the library: checked 64/128-bit integer
// arithmetic, integer roots, compensated (Neumaier) summation, a tiny
// adaptive quadrature, and a deterministic block-parallel scheduler.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hfm {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// Thrown when a mathematical cross-check fails (identity residual nonzero,
// convolution/census mismatch).  The CLI maps this to exit code 2.
class internal_error : public std::runtime_error {
public:
    explicit internal_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline u64 checked_mul(u64 a, u64 b) {
    u128 p = static_cast<u128>(a) * b;
    if (p > std::numeric_limits<u64>::max())
        throw std::overflow_error("u64 multiplication overflow");
    return static_cast<u64>(p);
}

inline i64 checked_mul_i64(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("i64 multiplication overflow");
    return r;
}

inline i64 checked_add_i64(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("i64 addition overflow");
    return r;
}

inline u64 checked_pow(u64 base, unsigned exp) {
    u64 r = 1;
    while (exp--) r = checked_mul(r, base);
    return r;
}

// Largest r with r*r <= n.
inline u64 isqrt(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && (static_cast<u128>(r) * r) > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Largest r with r^k <= n (k >= 1).
inline u64 iroot(u64 n, unsigned k) {
    if (k == 0) throw std::invalid_argument("iroot: k must be >= 1");
    if (k == 1 || n <= 1) return k == 1 ? n : n;
    if (k == 2) return isqrt(n);
    u64 r = static_cast<u64>(std::pow(static_cast<double>(n), 1.0 / k));
    auto pow_le = [&](u64 b) {
        u128 p = 1;
        for (unsigned i = 0; i < k; ++i) {
            p *= b;
            if (p > n) return false;
        }
        return p <= n;
    };
    while (r > 0 && !pow_le(r)) --r;
    while (pow_le(r + 1)) ++r;
    return r;
}

// Neumaier-compensated accumulator.  Deterministic for a fixed addition order.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    void add(const KahanSum& other) {
        add(other.sum);
        add(other.comp);
    }
    double value() const { return sum + comp; }
};

// Adaptive Simpson quadrature for smooth decaying integrands on [a, b].
namespace detail {
template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

template <class F>
double integrate(F f, double a, double b, double tol = 1e-13) {
    if (!(b > a)) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Runs `make(block)` for block = 0..n_blocks-1, possibly concurrently, then
// feeds the results to `combine(block, partial)` strictly in block order.
// The result is therefore independent of the worker count.
template <class Partial, class Make, class Combine>
void run_blocks(std::size_t n_blocks, unsigned workers, Make&& make, Combine&& combine) {
    if (n_blocks == 0) return;
    if (workers <= 1 || n_blocks == 1) {
        for (std::size_t i = 0; i < n_blocks; ++i) combine(i, make(i));
        return;
    }
    std::vector<Partial> slots(n_blocks);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n_blocks) break;
            slots[i] = make(i);
        }
    };
    unsigned n_threads = std::min<std::size_t>(workers, n_blocks);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < n_blocks; ++i) combine(i, std::move(slots[i]));
}

}  // namespace hfm
