#pragma once
// Exact streaming censuses over a monoid instance: subset counts (all,
// h-free, h-full, with optional excluded primes), omega/Omega moments, and
// normal-order violation fractions, at a list of ascending checkpoints.
//
// Integers: h-free/all statistics stream through the segmented exponent
// scan; h-full statistics enumerate the decomposition tuples
// m = a_0^h a_1^{h+1} ... a_{h-1}^{2h-1} (a_j squarefree and pairwise
// coprime for j >= 1), so x = 1e10 is reachable without a sieve of that
// size.  Graded and Gaussian instances enumerate elements directly.
//
// Every reported number is exact; violation fractions are exact integer
// pairs (violations, members).

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "gaussian_instance.hpp"
#include "graded_instance.hpp"
#include "integer_instance.hpp"
#include "util.hpp"

namespace hfm {

struct CensusRequest {
    enum class Subset { all, h_free, h_full };
    enum class Statistic { count, omega_moment, big_omega_moment, violation_fraction };
    enum class Target { omega, big_omega };

    Subset subset = Subset::all;
    Statistic statistic = Statistic::count;
    int h = 2;
    int k = 1;                  // moment power (1 or 2)
    double epsilon = 0.5;       // violation band half-width
    Target target = Target::omega;
    std::vector<u64> excluded;  // prime norms (dense) or degrees (graded)
    std::vector<u64> checkpoints;
    unsigned workers = 1;

    void validate() const {
        require_h(h);
        if (checkpoints.empty()) throw std::invalid_argument("census: no checkpoints");
        for (std::size_t i = 1; i < checkpoints.size(); ++i)
            if (checkpoints[i] <= checkpoints[i - 1])
                throw std::invalid_argument("census: checkpoints must be strictly ascending");
        if (statistic == Statistic::omega_moment || statistic == Statistic::big_omega_moment)
            if (k != 1 && k != 2) throw std::invalid_argument("census: moment power must be 1 or 2");
        if (statistic == Statistic::violation_fraction && !(epsilon > 0))
            throw std::invalid_argument("census: epsilon must be positive");
        for (std::size_t i = 0; i < excluded.size(); ++i)
            for (std::size_t j = i + 1; j < excluded.size(); ++j)
                if (excluded[i] == excluded[j])
                    throw std::invalid_argument("census: excluded primes must be distinct");
        if (workers < 1) throw std::invalid_argument("census: workers must be >= 1");
    }
};

struct CensusValue {
    i64 count = 0;       // count or moment sum
    i64 violations = 0;  // violation-fraction numerator
    i64 members = 0;     // violation-fraction denominator
    bool fraction = false;

    double numeric() const {
        if (!fraction) return static_cast<double>(count);
        return members == 0 ? 0.0
                            : static_cast<double>(violations) / static_cast<double>(members);
    }
};

struct CensusResult {
    std::vector<u64> checkpoints;
    std::vector<CensusValue> values;
};

namespace detail {

struct Accum {
    i64 stat = 0;
    i64 violations = 0;
    i64 members = 0;

    void merge(const Accum& o) {
        stat = checked_add_i64(stat, o.stat);
        violations += o.violations;
        members += o.members;
    }
};

// Normal-order comparison: violation of the two-sided band around
// F = loglog N (times h for Omega over h-full elements).
inline bool violates(double value, double loglog_norm, double epsilon, double scale) {
    double f = scale * loglog_norm;
    return value < (1.0 - epsilon) * f || value > (1.0 + epsilon) * f;
}

// Stats-equivalent tuple of the fields census needs per element.
struct ElementView {
    u32 omega = 0;
    u64 big_omega = 0;
    u32 max_exp = 0;
    u32 min_exp = 0;
    double loglog_norm = 0.0;  // only for violation statistics
    bool in_violation_domain = false;
};

inline void accumulate(Accum& a, const CensusRequest& req, const ElementView& v) {
    switch (req.statistic) {
        case CensusRequest::Statistic::count:
            a.stat += 1;
            break;
        case CensusRequest::Statistic::omega_moment: {
            i64 w = static_cast<i64>(v.omega);
            a.stat += req.k == 1 ? w : w * w;
            break;
        }
        case CensusRequest::Statistic::big_omega_moment: {
            i64 w = static_cast<i64>(v.big_omega);
            a.stat += req.k == 1 ? w : w * w;
            break;
        }
        case CensusRequest::Statistic::violation_fraction: {
            if (!v.in_violation_domain) break;
            a.members += 1;
            double scale = (req.subset == CensusRequest::Subset::h_full &&
                            req.target == CensusRequest::Target::big_omega)
                               ? static_cast<double>(req.h)
                               : 1.0;
            double value = req.target == CensusRequest::Target::omega
                               ? static_cast<double>(v.omega)
                               : static_cast<double>(v.big_omega);
            if (violates(value, v.loglog_norm, req.epsilon, scale)) a.violations += 1;
            break;
        }
    }
}

inline bool subset_member(const CensusRequest& req, u32 omega, u32 max_exp, u32 min_exp) {
    switch (req.subset) {
        case CensusRequest::Subset::all: return true;
        case CensusRequest::Subset::h_free: return max_exp <= static_cast<u32>(req.h - 1);
        case CensusRequest::Subset::h_full: return omega == 0 || min_exp >= static_cast<u32>(req.h);
    }
    return false;
}

inline CensusResult finalize(const CensusRequest& req, std::vector<Accum> per_checkpoint) {
    CensusResult res;
    res.checkpoints = req.checkpoints;
    bool fraction = req.statistic == CensusRequest::Statistic::violation_fraction;
    bool count_stat = req.statistic == CensusRequest::Statistic::count;
    for (Accum& a : per_checkpoint) {
        CensusValue v;
        v.fraction = fraction;
        if (fraction) {
            v.violations = a.violations;
            v.members = a.members;
        } else {
            // the identity element belongs to every subset and contributes
            // nothing to any moment
            v.count = count_stat ? a.stat + 1 : a.stat;
        }
        res.values.push_back(v);
    }
    return res;
}

// --- integer h-full tuple enumeration ---------------------------------------

struct SmallFactorTable {
    std::vector<u32> lpf;  // least prime factor, lpf[0] = lpf[1] = 0

    explicit SmallFactorTable(u64 bound) {
        lpf.assign(bound + 1, 0);
        for (u64 i = 2; i <= bound; ++i) {
            if (lpf[i] != 0) continue;
            for (u64 j = i; j <= bound; j += i)
                if (lpf[j] == 0) lpf[j] = static_cast<u32>(i);
        }
    }

    // distinct primes; returns false when n is not squarefree (early out).
    bool squarefree_primes(u64 n, std::vector<u32>& out) const {
        out.clear();
        while (n > 1) {
            u32 p = lpf[n];
            n /= p;
            if (n % p == 0) return false;
            out.push_back(p);
        }
        return true;
    }

    void factor(u64 n, std::vector<std::pair<u32, u32>>& out) const {
        out.clear();
        while (n > 1) {
            u32 p = lpf[n];
            u32 e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.push_back({p, e});
        }
    }
};

inline bool divisible_by_any(u64 n, const std::vector<u64>& ds) {
    for (u64 d : ds)
        if (n % d == 0) return true;
    return false;
}

inline void require_prime_norms(const std::vector<u64>& ds, u64 limit) {
    for (u64 d : ds) {
        if (d < 2 || d > limit)
            throw std::invalid_argument("excluded prime not in instance");
        for (u64 t = 2; t * t <= d; ++t)
            if (d % t == 0) throw std::invalid_argument("excluded norm is not prime");
    }
}

// Count integers in [1, limit] coprime to every modulus in `ex` by
// inclusion-exclusion (|ex| is tiny).
inline i64 count_coprime_upto(u64 limit, const std::vector<u64>& ex) {
    i64 total = 0;
    std::size_t subsets = std::size_t{1} << ex.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        u64 prod = 1;
        int sign = 1;
        bool ok = true;
        for (std::size_t i = 0; i < ex.size(); ++i)
            if (mask >> i & 1) {
                if (prod > limit / ex[i] + 1) { ok = false; break; }
                prod *= ex[i];
                sign = -sign;
            }
        if (!ok || prod > limit) continue;
        total += sign * static_cast<i64>(limit / prod);
    }
    return total;
}

// Enumerates the squarefree, pairwise-coprime components (a_1..a_{h-1});
// for each completed choice calls fn(P, primes_aj, omega_aj, weighted_omega_aj)
// where P = prod a_j^{h+j} and weighted_omega_aj = sum (h+j) omega(a_j).
template <class Fn>
void hfull_stretch_rec(const SmallFactorTable& tbl, u64 x, int h, int j, u64 prod,
                       std::vector<u32>& used, u64 omega_aj, u64 weighted_aj,
                       const std::vector<u64>& excluded, Fn& fn) {
    if (j == 0) {
        fn(prod, used, omega_aj, weighted_aj);
        return;
    }
    const unsigned exp = static_cast<unsigned>(h + j);
    std::vector<u32> primes;
    for (u64 a = 1;; ++a) {
        u128 p = prod;
        bool fits = true;
        for (unsigned t = 0; t < exp; ++t) {
            p *= a;
            if (p > x) { fits = false; break; }
        }
        if (!fits) break;
        if (a > 1) {
            if (divisible_by_any(a, excluded)) continue;
            if (!tbl.squarefree_primes(a, primes)) continue;
            bool disjoint = true;
            for (u32 q : primes)
                if (std::binary_search(used.begin(), used.end(), q)) { disjoint = false; break; }
            if (!disjoint) continue;
            std::vector<u32> next_used = used;
            next_used.insert(next_used.end(), primes.begin(), primes.end());
            std::sort(next_used.begin(), next_used.end());
            hfull_stretch_rec(tbl, x, h, j - 1, static_cast<u64>(p), next_used,
                              omega_aj + primes.size(),
                              weighted_aj + exp * primes.size(), excluded, fn);
        } else {
            hfull_stretch_rec(tbl, x, h, j - 1, prod, used, omega_aj, weighted_aj, excluded, fn);
        }
    }
}

}  // namespace detail

// --- integer censuses --------------------------------------------------------

// h-full census over the integers via tuple enumeration.  Handles count,
// moments and violation fractions; counts use floor-root bulk counting of
// the free component a_0.
inline CensusResult hfull_census_integers(const IntegerInstance& inst, const CensusRequest& req) {
    req.validate();
    const u64 x = req.checkpoints.back();
    detail::require_prime_norms(req.excluded, inst.limit());
    const int h = req.h;
    detail::SmallFactorTable tbl_aj(std::max<u64>(iroot(x, static_cast<unsigned>(h + 1)), 1));
    const bool count_only = req.statistic == CensusRequest::Statistic::count;
    detail::SmallFactorTable tbl_a0(count_only ? 1
                                               : std::max<u64>(iroot(x, static_cast<unsigned>(h)), 1));

    std::vector<detail::Accum> per_cp(req.checkpoints.size());
    std::vector<std::pair<u32, u32>> a0_factors;

    auto on_tuple = [&](u64 P, const std::vector<u32>& primes_aj, u64 omega_aj, u64 weighted_aj) {
        if (count_only) {
            for (std::size_t c = 0; c < req.checkpoints.size(); ++c) {
                if (P > req.checkpoints[c]) continue;
                u64 bound = iroot(req.checkpoints[c] / P, static_cast<unsigned>(h));
                i64 n_a0 = detail::count_coprime_upto(bound, req.excluded);
                if (P == 1) n_a0 -= 1;  // a_0 = 1 is the identity, added in finalize
                per_cp[c].stat += n_a0;
            }
            return;
        }
        u64 a0_bound = iroot(x / P, static_cast<unsigned>(h));
        for (u64 a0 = 1; a0 <= a0_bound; ++a0) {
            if (a0 > 1 && detail::divisible_by_any(a0, req.excluded)) continue;
            u64 norm = P;
            for (int t = 0; t < h; ++t) norm *= a0;
            tbl_a0.factor(a0, a0_factors);
            u32 om_a0 = static_cast<u32>(a0_factors.size());
            u64 big_a0 = 0;
            u32 overlap = 0;
            for (auto& [p, e] : a0_factors) {
                big_a0 += e;
                if (std::binary_search(primes_aj.begin(), primes_aj.end(), p)) ++overlap;
            }
            detail::ElementView v;
            v.omega = static_cast<u32>(om_a0 + omega_aj - overlap);
            v.big_omega = static_cast<u64>(h) * big_a0 + weighted_aj;
            v.in_violation_domain = norm >= 3;
            if (v.in_violation_domain) v.loglog_norm = std::log(std::log(static_cast<double>(norm)));
            auto it = std::lower_bound(req.checkpoints.begin(), req.checkpoints.end(), norm);
            for (std::size_t c = it - req.checkpoints.begin(); c < req.checkpoints.size(); ++c)
                detail::accumulate(per_cp[c], req, v);
        }
    };

    std::vector<u32> used;
    detail::hfull_stretch_rec(tbl_aj, x, h, h - 1, 1, used, 0, 0, req.excluded, on_tuple);
    return detail::finalize(req, std::move(per_cp));
}

// Per-norm h-full counts over the integers (norm <= x), the census side of
// the convolution cross-check.  Index 1 carries the identity.
inline std::vector<i64> hfull_census_by_norm(const IntegerInstance& inst, int h, u64 x) {
    require_h(h);
    detail::SmallFactorTable tbl(std::max<u64>(iroot(x, static_cast<unsigned>(h + 1)), 1));
    std::vector<i64> out(x + 1, 0);
    if (x >= 1) out[1] = 1;
    std::vector<u32> used;
    std::vector<u64> no_exclusions;
    auto on_tuple = [&](u64 P, const std::vector<u32>&, u64, u64) {
        u64 a0_bound = iroot(x / P, static_cast<unsigned>(h));
        for (u64 a0 = 1; a0 <= a0_bound; ++a0) {
            u64 norm = P;
            for (int t = 0; t < h; ++t) norm *= a0;
            if (norm != 1) out[norm] += 1;  // identity handled once above
        }
    };
    detail::hfull_stretch_rec(tbl, x, h, h - 1, 1, used, 0, 0, no_exclusions, on_tuple);
    (void)inst;
    return out;
}

// Scan-based census over the integers (subsets all / h-free; h-full also
// supported here as the independent cross-check route).
inline CensusResult scan_census_integers(const IntegerInstance& inst, const CensusRequest& req) {
    req.validate();
    const u64 x = req.checkpoints.back();
    if (x > inst.limit()) throw std::length_error("census beyond instance limit");
    if (x > (u64{1} << 32)) throw std::length_error("scan census budget exceeded (use h-full tuples for large x)");
    detail::require_prime_norms(req.excluded, inst.limit());

    const u64 seg = inst.segment_size();
    const u64 n_blocks = x < 2 ? 0 : (x - 2) / seg + 1;
    struct Partial {
        detail::Accum total;
        std::vector<std::pair<std::size_t, detail::Accum>> inner;  // checkpoint idx -> prefix
    };

    std::vector<detail::Accum> per_cp(req.checkpoints.size());
    detail::Accum running;
    run_blocks<Partial>(
        static_cast<std::size_t>(n_blocks), req.workers,
        [&](std::size_t b) {
            u64 lo = 2 + b * seg;
            u64 hi = std::min(x, lo + seg - 1);
            Partial part;
            auto cp_begin = std::lower_bound(req.checkpoints.begin(), req.checkpoints.end(), lo);
            std::size_t next_cp = cp_begin - req.checkpoints.begin();
            inst.scan_range(lo, hi, [&](const ElementStats& st) {
                while (next_cp < req.checkpoints.size() && req.checkpoints[next_cp] < st.n) {
                    part.inner.emplace_back(next_cp, part.total);
                    ++next_cp;
                }
                if (!detail::divisible_by_any(st.n, req.excluded) &&
                    detail::subset_member(req, st.omega, st.max_exp, st.min_exp)) {
                    detail::ElementView v;
                    v.omega = st.omega;
                    v.big_omega = st.big_omega;
                    v.in_violation_domain = st.n >= 3;
                    if (v.in_violation_domain)
                        v.loglog_norm = std::log(std::log(static_cast<double>(st.n)));
                    detail::accumulate(part.total, req, v);
                }
            });
            while (next_cp < req.checkpoints.size() && req.checkpoints[next_cp] <= hi) {
                part.inner.emplace_back(next_cp, part.total);
                ++next_cp;
            }
            return part;
        },
        [&](std::size_t, Partial&& part) {
            for (auto& [idx, acc] : part.inner) {
                detail::Accum snap = running;
                snap.merge(acc);
                per_cp[idx] = snap;
            }
            running.merge(part.total);
        });
    return detail::finalize(req, std::move(per_cp));
}

// Front door for the integers: h-full requests go through the tuple
// decomposition, everything else streams through the sieve scan.
inline CensusResult run_census(const IntegerInstance& inst, const CensusRequest& req) {
    if (req.subset == CensusRequest::Subset::h_full) return hfull_census_integers(inst, req);
    return scan_census_integers(inst, req);
}

// --- enumeration-based censuses (graded and Gaussian) ------------------------

namespace detail {

template <class Inst>
std::vector<u32> excluded_handle_indices(const Inst& inst, const std::vector<u64>& keys,
                                         u64 scope) {
    std::vector<u32> idx;
    for (u64 key : keys) {
        bool found = false;
        inst.for_each_prime_handle(scope, [&](PrimeHandle h) {
            if (!found && h.norm_key == key) {
                idx.push_back(h.index);
                found = true;
            }
        });
        if (!found) throw std::invalid_argument("excluded prime not in instance");
    }
    std::sort(idx.begin(), idx.end());
    return idx;
}

inline ElementView view_of(const Factorization& f, double loglog_norm, bool in_domain) {
    ElementView v;
    v.omega = omega(f);
    v.big_omega = big_omega(f);
    u32 mx = 0, mn = 0xffffffffu;
    for (const Term& t : f.terms()) {
        mx = std::max(mx, t.multiplicity);
        mn = std::min(mn, t.multiplicity);
    }
    v.max_exp = mx;
    v.min_exp = f.terms().empty() ? 0 : mn;
    v.loglog_norm = loglog_norm;
    v.in_violation_domain = in_domain;
    return v;
}

inline bool contains_excluded(const Factorization& f, const std::vector<u32>& idx) {
    for (const Term& t : f.terms())
        if (std::binary_search(idx.begin(), idx.end(), t.prime.index)) return true;
    return false;
}

}  // namespace detail

inline CensusResult run_census(const GradedInstance& inst, const CensusRequest& req) {
    req.validate();
    unsigned n_max = static_cast<unsigned>(req.checkpoints.back());
    auto excluded = detail::excluded_handle_indices(inst, req.excluded, n_max);
    std::vector<detail::Accum> per_cp(req.checkpoints.size());
    double logq = std::log(static_cast<double>(inst.q()));
    inst.enumerate(n_max, [&](const Factorization& f, unsigned degree) {
        if (f.is_identity()) return;  // identity handled in finalize
        if (detail::contains_excluded(f, excluded)) return;
        u32 mx = 0, mn = 0xffffffffu;
        for (const Term& t : f.terms()) {
            mx = std::max(mx, t.multiplicity);
            mn = std::min(mn, t.multiplicity);
        }
        if (!detail::subset_member(req, omega(f), mx, mn)) return;
        double logn = degree * logq;
        bool in_domain = logn > 1.0;
        detail::ElementView v = detail::view_of(f, in_domain ? std::log(logn) : 0.0, in_domain);
        auto it = std::lower_bound(req.checkpoints.begin(), req.checkpoints.end(),
                                   static_cast<u64>(degree));
        for (std::size_t c = it - req.checkpoints.begin(); c < req.checkpoints.size(); ++c)
            detail::accumulate(per_cp[c], req, v);
    });
    return detail::finalize(req, std::move(per_cp));
}

inline CensusResult run_census(const GaussianInstance& inst, const CensusRequest& req) {
    req.validate();
    u64 x = req.checkpoints.back();
    auto excluded = detail::excluded_handle_indices(inst, req.excluded, x);
    std::vector<detail::Accum> per_cp(req.checkpoints.size());
    inst.enumerate(x, [&](const Factorization& f, u64 norm) {
        if (f.is_identity()) return;
        if (detail::contains_excluded(f, excluded)) return;
        u32 mx = 0, mn = 0xffffffffu;
        for (const Term& t : f.terms()) {
            mx = std::max(mx, t.multiplicity);
            mn = std::min(mn, t.multiplicity);
        }
        if (!detail::subset_member(req, omega(f), mx, mn)) return;
        bool in_domain = norm >= 3;
        detail::ElementView v = detail::view_of(
            f, in_domain ? std::log(std::log(static_cast<double>(norm))) : 0.0, in_domain);
        auto it = std::lower_bound(req.checkpoints.begin(), req.checkpoints.end(), norm);
        for (std::size_t c = it - req.checkpoints.begin(); c < req.checkpoints.size(); ++c)
            detail::accumulate(per_cp[c], req, v);
    });
    return detail::finalize(req, std::move(per_cp));
}

// Per-degree h-full counts for a graded instance (census side of the
// convolution cross-check); index = exact degree, entry 0 is the identity.
inline std::vector<i64> hfull_census_by_degree(const GradedInstance& inst, int h,
                                               unsigned n_max) {
    require_h(h);
    std::vector<i64> out(n_max + 1, 0);
    inst.enumerate(n_max, [&](const Factorization& f, unsigned degree) {
        if (f.is_identity()) {
            out[0] += 1;
            return;
        }
        for (const Term& t : f.terms())
            if (t.multiplicity < static_cast<u32>(h)) return;
        out[degree] += 1;
    });
    return out;
}

}  // namespace hfm
