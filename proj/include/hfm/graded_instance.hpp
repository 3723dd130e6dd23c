#pragma once
// Graded instances on the grid X = {q^z}: monic polynomials over F_q
// (kappa = q/(q-1), theta = 0) and synthetic degree-graded instances with
// user-supplied prime counts per degree.  All arithmetic is in degrees;
// norms q^d are never materialized as integers.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "util.hpp"

namespace hfm {

// Number of monic irreducible polynomials of degree d over F_q, by Moebius
// inversion of q^d = sum_{e|d} e * pi_e.
inline u64 irreducible_count(u64 q, unsigned d) {
    if (q < 2 || d < 1) throw std::invalid_argument("irreducible_count: need q >= 2, d >= 1");
    auto mu_int = [](unsigned n) {
        int m = 1;
        for (unsigned p = 2; p * p <= n; ++p) {
            if (n % p) continue;
            n /= p;
            if (n % p == 0) return 0;
            m = -m;
        }
        if (n > 1) m = -m;
        return m;
    };
    i128 total = 0;
    for (unsigned e = 1; e <= d; ++e) {
        if (d % e) continue;
        int mu = mu_int(e);
        if (mu == 0) continue;
        u64 qe = checked_pow(q, d / e);
        total += mu > 0 ? static_cast<i128>(qe) : -static_cast<i128>(qe);
    }
    if (total % d != 0 || total < 0)
        throw internal_error("irreducible_count: inversion failed");
    total /= d;
    if (total > std::numeric_limits<i64>::max())
        throw std::overflow_error("irreducible_count overflow");
    return static_cast<u64>(total);
}

class GradedInstance {
public:
    // F_q[x]: pi_d from the inversion formula, kappa = q/(q-1), theta = 0.
    static GradedInstance polynomial_ring(u64 q, unsigned max_degree) {
        GradedInstance inst;
        inst.q_ = q;
        inst.pi_.assign(max_degree + 1, 0);
        for (unsigned d = 1; d <= max_degree; ++d) inst.pi_[d] = irreducible_count(q, d);
        inst.kappa_ = static_cast<double>(q) / (static_cast<double>(q) - 1.0);
        inst.theta_ = 0.0;
        inst.standard_prime_model_ = true;  // pi_d = q^d/d + O(q^{d/2}/d)
        inst.build_handle_offsets();
        return inst;
    }

    // Synthetic instance: explicit prime counts per degree plus (kappa, theta).
    static GradedInstance synthetic(u64 q, std::vector<u64> pi_by_degree, double kappa,
                                    double theta) {
        if (q < 2) throw std::invalid_argument("synthetic instance: q must be >= 2");
        GradedInstance inst;
        inst.q_ = q;
        inst.pi_ = std::move(pi_by_degree);
        if (inst.pi_.empty()) inst.pi_.assign(1, 0);
        inst.pi_[0] = 0;
        inst.kappa_ = kappa;
        inst.theta_ = theta;
        inst.standard_prime_model_ = false;
        inst.build_handle_offsets();
        return inst;
    }

    // Definition file: header lines "q <base>", "kappa <v>", "theta <v>",
    // then lines "d <degree> <count>".
    static GradedInstance from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open instance file: " + path);
        u64 q = 0;
        double kappa = -1.0, theta = -1.0;
        std::vector<std::pair<unsigned, u64>> entries;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            std::string key;
            ls >> key;
            if (key == "q") {
                ls >> q;
            } else if (key == "kappa") {
                ls >> kappa;
            } else if (key == "theta") {
                ls >> theta;
            } else if (key == "d") {
                unsigned d;
                u64 count;
                if (!(ls >> d >> count))
                    throw std::invalid_argument("bad prime-count line: " + line);
                entries.emplace_back(d, count);
            } else {
                throw std::invalid_argument("unknown instance file key: " + key);
            }
        }
        if (q < 2 || kappa < 0 || theta < 0)
            throw std::invalid_argument("instance file missing q/kappa/theta header");
        unsigned max_d = 0;
        for (auto& [d, c] : entries) max_d = std::max(max_d, d);
        std::vector<u64> pi(max_d + 1, 0);
        for (auto& [d, c] : entries) {
            if (d == 0) throw std::invalid_argument("prime degree must be >= 1");
            pi[d] += c;
        }
        return synthetic(q, std::move(pi), kappa, theta);
    }

    u64 q() const { return q_; }
    unsigned max_degree() const { return static_cast<unsigned>(pi_.size()) - 1; }
    u64 pi_d(unsigned d) const { return d < pi_.size() ? pi_[d] : 0; }
    const std::vector<u64>& pi() const { return pi_; }
    double kappa() const { return kappa_; }
    double theta() const { return theta_; }
    bool standard_prime_model() const { return standard_prime_model_; }
    static constexpr Grid grid() { return Grid::graded; }
    // I_d <= density_bound * q^d per degree (exact equality for F_q[x]).
    double density_bound() const { return 1.0; }

    u64 prime_count_upto(unsigned max_d) const {
        u64 total = 0;
        for (unsigned d = 1; d <= max_d && d < pi_.size(); ++d) total += pi_[d];
        return total;
    }

    // Handles ordered by degree, anonymous within one degree.  Handle
    // ordinals are materialized only while their running count fits; beyond
    // that depth only the aggregate pi_d weights are usable.
    template <class Fn>
    void for_each_prime_handle(unsigned max_d, Fn&& fn) const {
        if (max_d > handle_degree_cap_)
            throw std::length_error("prime handles beyond the indexable degree range");
        for (unsigned d = 1; d <= max_d && d < pi_.size(); ++d) {
            u32 base = handle_offset_[d];
            for (u64 k = 0; k < pi_[d]; ++k)
                fn(PrimeHandle{base + static_cast<u32>(k), d});
        }
    }

    // Element counts I_n per degree 0..n_max via the Euler-product recurrence
    // n I_n = sum_{k<=n} c_k I_{n-k} with c_k = sum_{d|k} d pi_d.
    std::vector<u64> element_counts(unsigned n_max) const {
        std::vector<i128> c(n_max + 1, 0);
        for (unsigned d = 1; d <= n_max && d < pi_.size(); ++d)
            for (unsigned k = d; k <= n_max; k += d) c[k] += static_cast<i128>(d) * pi_[d];
        std::vector<i128> I(n_max + 1, 0);
        I[0] = 1;
        for (unsigned n = 1; n <= n_max; ++n) {
            i128 acc = 0;
            for (unsigned k = 1; k <= n; ++k) acc += c[k] * I[n - k];
            if (acc % n != 0) throw internal_error("element_counts: recurrence not integral");
            I[n] = acc / n;
            if (I[n] > static_cast<i128>(std::numeric_limits<i64>::max()))
                throw std::overflow_error("element_counts overflow");
        }
        std::vector<u64> out(n_max + 1);
        for (unsigned n = 0; n <= n_max; ++n) out[n] = static_cast<u64>(I[n]);
        return out;
    }

    // Same counts by direct series multiplication of the Euler factors
    // (1 - u^d)^{-pi_d}; kept as an independent route for cross-checks.
    std::vector<u64> element_counts_by_convolution(unsigned n_max) const {
        std::vector<i128> series(n_max + 1, 0);
        series[0] = 1;
        for (unsigned d = 1; d <= n_max && d < pi_.size(); ++d) {
            if (pi_[d] == 0) continue;
            // multiply by (1-u^d)^{-m}: B[n] = sum_k C(m-1+k, k) A[n-dk]
            std::vector<i128> binom(n_max / d + 1);
            binom[0] = 1;
            for (unsigned k = 1; k < binom.size(); ++k) {
                i128 num = binom[k - 1] * (static_cast<i128>(pi_[d]) - 1 + k);
                if (num % k != 0) throw internal_error("binomial recurrence failure");
                binom[k] = num / k;
            }
            std::vector<i128> next(n_max + 1, 0);
            for (unsigned n = 0; n <= n_max; ++n)
                for (unsigned k = 0; k * d <= n; ++k) next[n] += binom[k] * series[n - k * d];
            series = std::move(next);
        }
        std::vector<u64> out(n_max + 1);
        for (unsigned n = 0; n <= n_max; ++n) {
            if (series[n] < 0 || series[n] > static_cast<i128>(std::numeric_limits<i64>::max()))
                throw std::overflow_error("element_counts_by_convolution overflow");
            out[n] = static_cast<u64>(series[n]);
        }
        return out;
    }

    u64 element_count(unsigned n) const { return element_counts(n)[n]; }

    // Every element of degree <= n_max exactly once, by recursive multiset
    // composition over the prime stream.  Throws when the element total
    // exceeds the budget.
    template <class Fn>
    void enumerate(unsigned n_max, Fn&& fn, u64 budget = u64{1} << 27) const {
        auto counts = element_counts(n_max);
        u64 total = 0;
        for (u64 c : counts) total += c;
        if (total > budget) throw std::length_error("enumeration budget exceeded");
        std::vector<PrimeHandle> handles;
        for_each_prime_handle(n_max, [&](PrimeHandle h) { handles.push_back(h); });
        std::vector<Term> stack;
        enumerate_rec(handles, 0, 0, n_max, stack, fn);
    }

private:
    void build_handle_offsets() {
        handle_offset_.assign(pi_.size() + 1, 0);
        handle_degree_cap_ = std::numeric_limits<unsigned>::max();
        u64 running = 0;
        for (unsigned d = 1; d < pi_.size(); ++d) {
            if (running + pi_[d] > std::numeric_limits<u32>::max()) {
                handle_degree_cap_ = d - 1;
                break;
            }
            handle_offset_[d] = static_cast<u32>(running);
            running += pi_[d];
        }
    }

    template <class Fn>
    void enumerate_rec(const std::vector<PrimeHandle>& handles, std::size_t from,
                       unsigned degree, unsigned n_max, std::vector<Term>& stack,
                       Fn& fn) const {
        fn(Factorization::from_canonical(stack), degree);
        for (std::size_t i = from; i < handles.size(); ++i) {
            unsigned d = static_cast<unsigned>(handles[i].norm_key);
            if (degree + d > n_max) break;
            unsigned cur = degree;
            u32 mult = 0;
            while (cur + d <= n_max) {
                cur += d;
                ++mult;
                stack.push_back({handles[i], mult});
                enumerate_rec(handles, i + 1, cur, n_max, stack, fn);
                stack.pop_back();
            }
        }
    }

    u64 q_ = 2;
    std::vector<u64> pi_;  // pi_[d] primes of degree d; pi_[0] unused
    double kappa_ = 1.0;
    double theta_ = 0.0;
    bool standard_prime_model_ = false;
    std::vector<u32> handle_offset_;
    unsigned handle_degree_cap_ = 0;

    GradedInstance() = default;
};

}  // namespace hfm
