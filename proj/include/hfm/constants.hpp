#pragma once
// Numerical evaluation of the theorem constants: zeta values, the Mertens
// constant A, B, C1/C2, gamma_h, L_h(r), D1/D2.  Every estimate carries an
// absolute tail bound derived from the comparison envelope
//   sum_{N(m) >= x} N(m)^{-alpha} <= c * alpha/(alpha-1) * x^{1-alpha},
// valid whenever I(y) <= c*y (c = instance density bound).  On top of the
// rigorous envelope, truncated prime sums fold in a density-model tail
// correction (dli(t) = dt/log t on dense grids, pi_d ~ q^d/d on graded
// grids with the standard model), so reported values are far more accurate
// than the conservative bounds.
//
// The A-family has no convergent tail: it is estimated by two-point
// extrapolation in 1/log x and flagged heuristic; degenerate instances are
// detected and reported as non-convergent.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gaussian_instance.hpp"
#include "graded_instance.hpp"
#include "integer_instance.hpp"
#include "util.hpp"

namespace hfm {

enum class ErrorQuality { rigorous, heuristic, non_convergent };

struct ConstantEstimate {
    double value = 0.0;
    double tail_bound = 0.0;  // absolute; rigorous unless quality says otherwise
    u64 cutoff = 0;           // norm (dense) or degree (graded) where summation stopped
    ErrorQuality quality = ErrorQuality::rigorous;
};

// |f(N)| <= amplitude * N^{-alpha} for all norms N >= the cutoff norm.
struct TailSpec {
    double alpha;
    double amplitude;
};

namespace detail {

inline double dense_cutoff_norm(u64 cutoff) { return static_cast<double>(cutoff); }

template <class Inst>
double rigorous_tail(const Inst& inst, TailSpec t, u64 cutoff) {
    if (t.alpha <= 1.0) throw std::invalid_argument("tail bound needs alpha > 1");
    if constexpr (Inst::grid() == Grid::dense) {
        double c = inst.density_bound();
        return t.amplitude * c * t.alpha / (t.alpha - 1.0) *
               std::pow(static_cast<double>(cutoff), 1.0 - t.alpha);
    } else {
        double c = inst.density_bound();
        double q = static_cast<double>(inst.q());
        double ratio = std::pow(q, 1.0 - t.alpha);  // < 1
        return t.amplitude * c * std::pow(ratio, static_cast<double>(cutoff) + 1.0) /
               (1.0 - ratio);
    }
}

// Model tail for dense grids: integral_cutoff^inf f(t)/log(t) dt, f >= 0
// decaying.  Substitution t = C e^u; unit panels in u until negligible.
template <class F>
double li_model_tail(F f, u64 cutoff) {
    double C = static_cast<double>(cutoff);
    double logC = std::log(C);
    double acc = 0.0;
    int quiet = 0;
    for (int k = 0; k < 400 && quiet < 3; ++k) {
        double panel = integrate(
            [&](double u) {
                double t = C * std::exp(u);
                return f(t) * t / (logC + u);
            },
            static_cast<double>(k), static_cast<double>(k + 1), 1e-16);
        acc += panel;
        if (std::abs(panel) < 1e-18 * (1.0 + std::abs(acc)))
            ++quiet;
        else
            quiet = 0;
    }
    return acc;
}

// Model tail for graded grids with the standard prime model pi_d ~ q^d / d.
template <class F>
double graded_model_tail(const GradedInstance& inst, F f, u64 cutoff_degree) {
    if (!inst.standard_prime_model()) return 0.0;
    double q = static_cast<double>(inst.q());
    double acc = 0.0;
    for (u64 d = cutoff_degree + 1; d < cutoff_degree + 3000; ++d) {
        double norm = std::pow(q, static_cast<double>(d));
        if (!std::isfinite(norm)) break;
        double fv = f(norm);
        if (fv == 0.0) break;
        double term = norm / static_cast<double>(d) * fv;
        acc += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(acc))) break;
    }
    return acc;
}

// Compensated sum of f(N(p)) over prime norms <= cutoff.  Fixed block
// schedule (the sieve segment grid), combined in block order, so the result
// does not depend on the worker count.
template <class F>
KahanSum sum_over_primes(const IntegerInstance& inst, u64 cutoff, unsigned workers, F f) {
    u64 seg = inst.segment_size();
    u64 n_blocks = cutoff < 2 ? 0 : (cutoff - 2) / seg + 1;
    KahanSum total;
    run_blocks<KahanSum>(
        static_cast<std::size_t>(n_blocks), workers,
        [&](std::size_t b) {
            u64 lo = 2 + b * seg;
            u64 hi = std::min(cutoff, lo + seg - 1);
            KahanSum part;
            inst.for_each_prime_in(lo, hi,
                                   [&](u64 p) { part.add(f(static_cast<double>(p))); });
            return part;
        },
        [&](std::size_t, KahanSum&& part) { total.add(part); });
    return total;
}

template <class F>
KahanSum sum_over_primes(const GaussianInstance& inst, u64 cutoff, unsigned workers, F f) {
    const auto& handles = inst.prime_handles();
    const std::size_t chunk = 1 << 16;
    std::size_t n = 0;
    while (n < handles.size() && handles[n].norm_key <= cutoff) ++n;
    std::size_t n_blocks = (n + chunk - 1) / chunk;
    KahanSum total;
    run_blocks<KahanSum>(
        n_blocks, workers,
        [&](std::size_t b) {
            KahanSum part;
            for (std::size_t i = b * chunk; i < std::min(n, (b + 1) * chunk); ++i)
                part.add(f(static_cast<double>(handles[i].norm_key)));
            return part;
        },
        [&](std::size_t, KahanSum&& part) { total.add(part); });
    return total;
}

template <class F>
KahanSum sum_over_primes(const GradedInstance& inst, u64 cutoff_degree, unsigned, F f) {
    if (inst.standard_prime_model() && cutoff_degree > inst.max_degree())
        throw std::length_error("graded cutoff beyond tabulated prime counts");
    KahanSum total;
    double q = static_cast<double>(inst.q());
    for (unsigned d = 1; d <= cutoff_degree && d <= inst.max_degree(); ++d) {
        if (inst.pi_d(d) == 0) continue;
        double norm = std::pow(q, static_cast<double>(d));
        total.add(static_cast<double>(inst.pi_d(d)) * f(norm));
    }
    return total;
}

// Truncated prime sum of a nonnegative decaying term, with the model tail
// folded into the value and the rigorous envelope reported as the bound.
template <class Inst, class F>
ConstantEstimate prime_sum_with_tail(const Inst& inst, u64 cutoff, unsigned workers, F f,
                                     TailSpec spec) {
    KahanSum s = sum_over_primes(inst, cutoff, workers, f);
    double model;
    if constexpr (Inst::grid() == Grid::dense)
        model = li_model_tail(f, cutoff);
    else
        model = graded_model_tail(inst, f, cutoff);
    ConstantEstimate est;
    est.value = s.value() + model;
    est.tail_bound = rigorous_tail(inst, spec, cutoff);
    est.cutoff = cutoff;
    est.quality = ErrorQuality::rigorous;
    return est;
}

inline double extrapolate_pair(double log1, double e1, double log2, double e2) {
    double a = (e1 - e2) / (1.0 / log1 - 1.0 / log2);
    return e2 - a / log2;
}

}  // namespace detail

// --- zeta ------------------------------------------------------------------

// Truncated Euler product over primes with norm <= cutoff norm, with the
// tail of log zeta corrected by the density model.
template <class Inst>
ConstantEstimate zeta_value(const Inst& inst, double s, u64 cutoff, unsigned workers = 1) {
    if (!(s > 1.0)) throw std::invalid_argument("zeta_value: need s > 1");
    auto f_log = [s](double t) { return -std::log1p(-std::pow(t, -s)); };
    TailSpec spec{s, 1.0 / (1.0 - std::pow(2.0, -s))};
    ConstantEstimate log_est = detail::prime_sum_with_tail(inst, cutoff, workers, f_log, spec);
    ConstantEstimate est;
    est.value = std::exp(log_est.value);
    est.tail_bound = est.value * std::expm1(log_est.tail_bound);
    est.cutoff = cutoff;
    est.quality = ErrorQuality::rigorous;
    return est;
}

// --- Mertens constant A ----------------------------------------------------

namespace detail {
// E(x) = sum_{N(p) <= x} 1/N(p) - log log x at several cutoffs, one pass.
template <class Inst>
std::vector<double> mertens_E(const Inst& inst, const std::vector<u64>& cutoffs) {
    std::vector<double> out;
    if constexpr (Inst::grid() == Grid::graded) {
        KahanSum s;
        double q = static_cast<double>(inst.q());
        std::size_t next = 0;
        for (unsigned d = 1; d <= cutoffs.back() && next < cutoffs.size(); ++d) {
            if (d <= inst.max_degree() && inst.pi_d(d) > 0)
                s.add(static_cast<double>(inst.pi_d(d)) * std::pow(q, -static_cast<double>(d)));
            while (next < cutoffs.size() && cutoffs[next] == d) {
                double logx = d * std::log(q);
                out.push_back(s.value() - std::log(logx));
                ++next;
            }
        }
        return out;
    } else {
        KahanSum s;
        std::size_t next = 0;
        auto visit = [&](u64 p) {
            while (next < cutoffs.size() && cutoffs[next] < p) {
                out.push_back(s.value() - std::log(std::log(static_cast<double>(cutoffs[next]))));
                ++next;
            }
            s.add(1.0 / static_cast<double>(p));
        };
        if constexpr (std::is_same_v<Inst, IntegerInstance>) {
            inst.for_each_prime(cutoffs.back(), visit);
        } else {
            inst.for_each_prime_handle(cutoffs.back(),
                                       [&](PrimeHandle h) { visit(h.norm_key); });
        }
        while (next < cutoffs.size()) {
            out.push_back(s.value() - std::log(std::log(static_cast<double>(cutoffs[next]))));
            ++next;
        }
        return out;
    }
}
}  // namespace detail

// A = lim (sum_{N(p)<=x} 1/N(p) - log log x), estimated by two-point
// extrapolation in 1/log x, flagged heuristic.  A second extrapolation from
// smaller cutoffs detects non-convergent (degenerate) instances.
template <class Inst>
ConstantEstimate mertens_A(const Inst& inst, u64 cutoff, unsigned /*workers*/ = 1) {
    std::vector<u64> cuts;
    std::vector<double> logx;
    if constexpr (Inst::grid() == Grid::graded) {
        if (cutoff < 7) throw std::invalid_argument("mertens_A: graded cutoff too small");
        u64 delta = std::max<u64>(2, cutoff / 6);
        cuts = {cutoff - 2 * delta, cutoff - delta, cutoff};
        double lq = std::log(static_cast<double>(inst.q()));
        for (u64 d : cuts) logx.push_back(d * lq);
    } else {
        if (cutoff < 8000) throw std::invalid_argument("mertens_A: cutoff too small");
        cuts = {cutoff / 64, cutoff / 8, cutoff};
        for (u64 c : cuts) logx.push_back(std::log(static_cast<double>(c)));
        // need a real population of primes below the smallest cutoff
        u64 count = 0;
        if constexpr (std::is_same_v<Inst, IntegerInstance>)
            inst.for_each_prime(cuts[0], [&](u64) { ++count; });
        else
            inst.for_each_prime_handle(cuts[0], [&](PrimeHandle) { ++count; });
        if (count < 100)
            throw std::invalid_argument("mertens_A: fewer than 100 primes below cutoff");
    }
    std::vector<double> E = detail::mertens_E(inst, cuts);
    double est_low = detail::extrapolate_pair(logx[0], E[0], logx[1], E[1]);
    double est_high = detail::extrapolate_pair(logx[1], E[1], logx[2], E[2]);
    ConstantEstimate out;
    out.value = est_high;
    out.cutoff = cutoff;
    double drift = std::abs(est_high - est_low);
    out.tail_bound = std::max(2.0 * drift, 1.0 / (logx[2] * logx[2]));
    out.quality = drift > 0.05 ? ErrorQuality::non_convergent : ErrorQuality::heuristic;
    return out;
}

// --- B -----------------------------------------------------------------------

template <class Inst>
double const_B(const Inst& inst) {
    const double pi = 3.14159265358979323846;
    if constexpr (Inst::grid() == Grid::dense) {
        (void)inst;
        return -pi * pi / 6.0;
    } else {
        double llq = std::log(std::log(static_cast<double>(inst.q())));
        return llq * llq - pi * pi / 6.0;
    }
}

// --- C1, C2 ------------------------------------------------------------------

template <class Inst>
std::pair<ConstantEstimate, ConstantEstimate> const_C(const Inst& inst, int h, u64 cutoff,
                                                      const ConstantEstimate& A,
                                                      unsigned workers = 1) {
    require_h(h);
    double dh = static_cast<double>(h);
    auto f1 = [dh](double t) {
        double th = std::pow(t, dh);
        if (!std::isfinite(th)) return 0.0;
        return (t - 1.0) / (t * (th - 1.0));
    };
    ConstantEstimate s1 = detail::prime_sum_with_tail(
        inst, cutoff, workers, f1, TailSpec{dh, 1.0 / (1.0 - std::pow(2.0, -dh))});
    ConstantEstimate c1;
    c1.value = A.value - s1.value;
    c1.tail_bound = A.tail_bound + s1.tail_bound;
    c1.cutoff = cutoff;
    c1.quality = A.quality;

    auto f2 = [dh](double t) {
        double th = std::pow(t, dh);
        if (!std::isfinite(th)) return 0.0;
        double r = (std::pow(t, dh - 1.0) - 1.0) / (th - 1.0);
        return r * r;
    };
    double amp2 = 1.0 / (1.0 - std::pow(2.0, -dh));
    ConstantEstimate s2 =
        detail::prime_sum_with_tail(inst, cutoff, workers, f2, TailSpec{2.0, amp2 * amp2});
    ConstantEstimate c2;
    c2.value = c1.value * c1.value + c1.value + const_B(inst) - s2.value;
    c2.tail_bound = (2.0 * std::abs(c1.value) + 1.0) * c1.tail_bound + s2.tail_bound;
    c2.cutoff = cutoff;
    c2.quality = A.quality;
    return {c1, c2};
}

// --- gamma_h -----------------------------------------------------------------

// Product over primes of 1 + (N - N^{1/h}) / (N^2 (N^{1/h} - 1)); the factor
// equals 1 + sum_{i=1}^{h-1} N^{i/h - 2}, which is what we evaluate.
template <class Inst>
ConstantEstimate gamma_h(const Inst& inst, int h, u64 cutoff, unsigned workers = 1) {
    require_h(h);
    double dh = static_cast<double>(h);
    auto f_log = [dh, h](double t) {
        double logt = std::log(t);
        double sum = 0.0;
        for (int i = 1; i <= h - 1; ++i)
            sum += std::exp((static_cast<double>(i) / dh - 2.0) * logt);
        return std::log1p(sum);
    };
    TailSpec spec{1.0 + 1.0 / dh, dh - 1.0};
    ConstantEstimate log_est = detail::prime_sum_with_tail(inst, cutoff, workers, f_log, spec);
    ConstantEstimate est;
    est.value = std::exp(log_est.value);
    est.tail_bound = est.value * std::expm1(log_est.tail_bound);
    est.cutoff = cutoff;
    est.quality = ErrorQuality::rigorous;
    return est;
}

// --- L_h(r) ------------------------------------------------------------------

template <class Inst>
ConstantEstimate L_h_value(const Inst& inst, int h, int r, u64 cutoff, unsigned workers = 1) {
    require_h(h);
    if (r <= h) throw std::invalid_argument("L_h(r): series diverges for r <= h");
    double dh = static_cast<double>(h), dr = static_cast<double>(r);
    auto f = [dh, dr](double t) {
        double a = std::pow(t, dr / dh - 1.0);
        double b = t - std::pow(t, 1.0 - 1.0 / dh) + 1.0;
        double denom = a * b;
        if (!std::isfinite(denom) || denom <= 0.0) return 0.0;
        return 1.0 / denom;
    };
    TailSpec spec{dr / dh, 1.0 / (1.0 - std::pow(2.0, -1.0 / dh))};
    return detail::prime_sum_with_tail(inst, cutoff, workers, f, spec);
}

// --- D1, D2 ------------------------------------------------------------------

template <class Inst>
std::pair<ConstantEstimate, ConstantEstimate> const_D(const Inst& inst, int h, u64 cutoff,
                                                      const ConstantEstimate& A,
                                                      unsigned workers = 1) {
    require_h(h);
    ConstantEstimate l1 = L_h_value(inst, h, h + 1, cutoff, workers);
    ConstantEstimate l2 = L_h_value(inst, h, 2 * h, cutoff, workers);
    ConstantEstimate d1;
    d1.value = A.value - std::log(static_cast<double>(h)) + l1.value - l2.value;
    d1.tail_bound = A.tail_bound + l1.tail_bound + l2.tail_bound;
    d1.cutoff = cutoff;
    d1.quality = A.quality;

    double dh = static_cast<double>(h);
    auto f3 = [dh](double t) {
        double b = t - std::pow(t, 1.0 - 1.0 / dh) + 1.0;
        if (!std::isfinite(b) || b <= 0.0) return 0.0;
        return 1.0 / (b * b);
    };
    double amp = 1.0 / (1.0 - std::pow(2.0, -1.0 / dh));
    ConstantEstimate s3 =
        detail::prime_sum_with_tail(inst, cutoff, workers, f3, TailSpec{2.0, amp * amp});
    ConstantEstimate d2;
    d2.value = d1.value * d1.value + d1.value + const_B(inst) - s3.value;
    d2.tail_bound = (2.0 * std::abs(d1.value) + 1.0) * d1.tail_bound + s3.tail_bound;
    d2.cutoff = cutoff;
    d2.quality = A.quality;
    return {d1, d2};
}

// --- A' (Lemma-level constant) ----------------------------------------------

// A' = kappa + integral_1^inf (I(y) - kappa*y) y^{-2} dy, by exact piecewise
// integration of the step function I up to the cutoff.  For the integers the
// remaining tail is rigorously below 1/cutoff and the modeled mean of the
// fractional part is folded in.
inline ConstantEstimate a_prime(const IntegerInstance& inst, u64 cutoff) {
    if (cutoff < 2 || cutoff > inst.limit())
        throw std::invalid_argument("a_prime: bad cutoff");
    KahanSum s;  // sum_{n < C} I(n)/(n(n+1)) with I(n) = n
    for (u64 n = 1; n < cutoff; ++n)
        s.add(1.0 / static_cast<double>(n + 1));
    double C = static_cast<double>(cutoff);
    ConstantEstimate est;
    est.value = 1.0 + s.value() - std::log(C) - 0.5 / C;
    est.tail_bound = 1.0 / C;
    est.cutoff = cutoff;
    est.quality = ErrorQuality::rigorous;
    return est;
}

inline ConstantEstimate a_prime(const GaussianInstance& inst, u64 cutoff) {
    if (cutoff < 2 || cutoff > inst.limit())
        throw std::invalid_argument("a_prime: bad cutoff");
    auto counts = inst.ideal_counts_by_norm(cutoff);
    double kappa = GaussianInstance::kappa();
    KahanSum s;
    u64 I = 0;
    for (u64 n = 1; n < cutoff; ++n) {
        I += static_cast<u64>(counts[n]);
        s.add(static_cast<double>(I) / (static_cast<double>(n) * static_cast<double>(n + 1)));
    }
    double C = static_cast<double>(cutoff);
    ConstantEstimate est;
    est.value = kappa + s.value() - kappa * std::log(C);
    I += static_cast<u64>(counts[cutoff]);
    double dev = std::abs(static_cast<double>(I) - kappa * C);
    est.tail_bound = (dev + std::cbrt(C)) / C;  // observed deviation, theta = 1/3 shape
    est.cutoff = cutoff;
    est.quality = ErrorQuality::heuristic;
    return est;
}

}  // namespace hfm
