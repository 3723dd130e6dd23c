#pragma once
// Confronts exact census values with theorem predictions assembled from the
// constants engine, and numerically checks the analytic lemmas.  Residual
// tables normalize by the stated error envelope; fitted error exponents are
// least-squares slopes of log|residual| against log x.
//
// Grid semantics: on the graded grid checkpoints are degrees n (x = q^n),
// log log x means log(n log q), and error shapes take the per-degree forms
// q^n/n, q^n log n / n, q^{n/h}/n.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "census.hpp"
#include "constants.hpp"
#include "util.hpp"

namespace hfm {

enum class TheoremId {
    hfree_count,
    hfull_count,
    hfree_omega1,
    hfree_omega2,
    hfull_omega1,
    hfull_omega2,
};

enum class TermShape { x, x_loglog, x_loglog2, x_1h, x_1h_loglog, x_1h_loglog2 };

enum class ErrorShape {
    r_sh,                  // h-free count envelope
    r_nh,                  // h-full count envelope
    x_over_logx,           // first-moment envelope, h-free
    x_loglog_over_logx,    // second-moment envelope, h-free
    x1h_over_logx,         // first-moment envelope, h-full
    x1h_loglog_over_logx,  // second-moment envelope, h-full
};

struct MainTerm {
    double coeff = 0.0;
    double coeff_tail = 0.0;
    TermShape shape = TermShape::x;
};

struct Prediction {
    TheoremId id = TheoremId::hfree_count;
    int h = 2;
    Grid grid = Grid::dense;
    double q = 0.0;      // graded grid base
    double theta = 0.0;  // instance error exponent
    std::vector<MainTerm> terms;
    ErrorShape error_shape = ErrorShape::r_sh;
};

namespace detail {

inline double grid_log_x(const Prediction& p, u64 cp) {
    if (p.grid == Grid::dense) return std::log(static_cast<double>(cp));
    return static_cast<double>(cp) * std::log(p.q);
}

inline double grid_loglog_x(const Prediction& p, u64 cp) {
    return std::log(grid_log_x(p, cp));
}

inline double grid_power(const Prediction& p, u64 cp, double a) {
    if (p.grid == Grid::dense) return std::pow(static_cast<double>(cp), a);
    return std::pow(p.q, static_cast<double>(cp) * a);
}

// In the graded error shapes a factor log x appears as the degree n.
inline double grid_log_factor(const Prediction& p, u64 cp) {
    if (p.grid == Grid::dense) return std::log(static_cast<double>(cp));
    return static_cast<double>(cp);
}

inline bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

}  // namespace detail

inline double eval_term(const Prediction& p, const MainTerm& t, u64 cp) {
    double ll = detail::grid_loglog_x(p, cp);
    double inv_h = 1.0 / static_cast<double>(p.h);
    switch (t.shape) {
        case TermShape::x: return t.coeff * detail::grid_power(p, cp, 1.0);
        case TermShape::x_loglog: return t.coeff * detail::grid_power(p, cp, 1.0) * ll;
        case TermShape::x_loglog2: return t.coeff * detail::grid_power(p, cp, 1.0) * ll * ll;
        case TermShape::x_1h: return t.coeff * detail::grid_power(p, cp, inv_h);
        case TermShape::x_1h_loglog: return t.coeff * detail::grid_power(p, cp, inv_h) * ll;
        case TermShape::x_1h_loglog2:
            return t.coeff * detail::grid_power(p, cp, inv_h) * ll * ll;
    }
    return 0.0;
}

// Sum of main terms, combined with compensation (the (loglog x)^2 pieces are
// close in magnitude at desk scale).
inline double eval_prediction(const Prediction& p, u64 cp) {
    KahanSum s;
    for (const MainTerm& t : p.terms) s.add(eval_term(p, t, cp));
    return s.value();
}

inline double eval_error_shape(const Prediction& p, u64 cp) {
    double inv_h = 1.0 / static_cast<double>(p.h);
    double logf = detail::grid_log_factor(p, cp);
    double ll = detail::grid_loglog_x(p, cp);
    switch (p.error_shape) {
        case ErrorShape::r_sh: {
            if (inv_h < p.theta) return detail::grid_power(p, cp, p.theta);
            if (detail::near(inv_h, p.theta)) return detail::grid_power(p, cp, inv_h) * logf;
            return detail::grid_power(p, cp, inv_h);
        }
        case ErrorShape::r_nh: {
            double h = static_cast<double>(p.h);
            if (h / (h + 1.0) < p.theta) return detail::grid_power(p, cp, p.theta / h);
            for (int i = 1; i <= p.h - 1; ++i)
                if (detail::near(h / (h + i), p.theta))
                    return detail::grid_power(p, cp, 1.0 / (h + 1.0)) * logf;
            return detail::grid_power(p, cp, 1.0 / (h + 1.0));
        }
        case ErrorShape::x_over_logx: return detail::grid_power(p, cp, 1.0) / logf;
        case ErrorShape::x_loglog_over_logx:
            return detail::grid_power(p, cp, 1.0) * ll / logf;
        case ErrorShape::x1h_over_logx: return detail::grid_power(p, cp, inv_h) / logf;
        case ErrorShape::x1h_loglog_over_logx:
            return detail::grid_power(p, cp, inv_h) * ll / logf;
    }
    return 1.0;
}

// Assembles the theorem's main terms for an instance.  Refuses to predict
// from non-convergent constants (degenerate instances).
template <class Inst>
Prediction predict(TheoremId id, const Inst& inst, int h, u64 cutoff, unsigned workers = 1) {
    require_h(h);
    Prediction p;
    p.id = id;
    p.h = h;
    p.grid = Inst::grid();
    p.theta = inst.theta();
    if constexpr (Inst::grid() == Grid::graded) p.q = static_cast<double>(inst.q());
    double kappa = inst.kappa();

    auto require_convergent = [](const ConstantEstimate& e, const char* what) {
        if (e.quality == ErrorQuality::non_convergent)
            throw std::domain_error(std::string("predict: non-convergent constant ") + what);
    };

    switch (id) {
        case TheoremId::hfree_count: {
            ConstantEstimate z = zeta_value(inst, static_cast<double>(h), cutoff, workers);
            double c = kappa / z.value;
            p.terms.push_back({c, c * (z.tail_bound / z.value), TermShape::x});
            p.error_shape = ErrorShape::r_sh;
            break;
        }
        case TheoremId::hfull_count: {
            ConstantEstimate g = gamma_h(inst, h, cutoff, workers);
            p.terms.push_back({kappa * g.value, kappa * g.tail_bound, TermShape::x_1h});
            p.error_shape = ErrorShape::r_nh;
            break;
        }
        case TheoremId::hfree_omega1:
        case TheoremId::hfree_omega2: {
            ConstantEstimate z = zeta_value(inst, static_cast<double>(h), cutoff, workers);
            ConstantEstimate A = mertens_A(inst, cutoff, workers);
            require_convergent(A, "A");
            auto [c1, c2] = const_C(inst, h, cutoff, A, workers);
            double base = kappa / z.value;
            double base_tail = base * (z.tail_bound / z.value);
            if (id == TheoremId::hfree_omega1) {
                p.terms.push_back({base, base_tail, TermShape::x_loglog});
                p.terms.push_back({base * c1.value,
                                   base * c1.tail_bound + base_tail * std::abs(c1.value),
                                   TermShape::x});
                p.error_shape = ErrorShape::x_over_logx;
            } else {
                p.terms.push_back({base, base_tail, TermShape::x_loglog2});
                p.terms.push_back({base * (2.0 * c1.value + 1.0),
                                   base * 2.0 * c1.tail_bound +
                                       base_tail * std::abs(2.0 * c1.value + 1.0),
                                   TermShape::x_loglog});
                p.terms.push_back({base * c2.value,
                                   base * c2.tail_bound + base_tail * std::abs(c2.value),
                                   TermShape::x});
                p.error_shape = ErrorShape::x_loglog_over_logx;
            }
            break;
        }
        case TheoremId::hfull_omega1:
        case TheoremId::hfull_omega2: {
            ConstantEstimate g = gamma_h(inst, h, cutoff, workers);
            ConstantEstimate A = mertens_A(inst, cutoff, workers);
            require_convergent(A, "A");
            auto [d1, d2] = const_D(inst, h, cutoff, A, workers);
            double base = kappa * g.value;
            double base_tail = kappa * g.tail_bound;
            if (id == TheoremId::hfull_omega1) {
                p.terms.push_back({base, base_tail, TermShape::x_1h_loglog});
                p.terms.push_back({base * d1.value,
                                   base * d1.tail_bound + base_tail * std::abs(d1.value),
                                   TermShape::x_1h});
                p.error_shape = ErrorShape::x1h_over_logx;
            } else {
                p.terms.push_back({base, base_tail, TermShape::x_1h_loglog2});
                p.terms.push_back({base * (2.0 * d1.value + 1.0),
                                   base * 2.0 * d1.tail_bound +
                                       base_tail * std::abs(2.0 * d1.value + 1.0),
                                   TermShape::x_1h_loglog});
                p.terms.push_back({base * d2.value,
                                   base * d2.tail_bound + base_tail * std::abs(d2.value),
                                   TermShape::x_1h});
                p.error_shape = ErrorShape::x1h_loglog_over_logx;
            }
            break;
        }
    }
    return p;
}

struct ResidualRow {
    u64 x = 0;  // norm (dense) or degree (graded)
    double exact = 0.0;
    double predicted = 0.0;
    double residual = 0.0;
    double normalized = 0.0;
};

struct ResidualTable {
    std::vector<ResidualRow> rows;
};

// exact[i] must be the census value at checkpoints[i].
inline ResidualTable residual_table(const Prediction& p, const std::vector<u64>& checkpoints,
                                    const std::vector<double>& exact) {
    if (checkpoints.size() != exact.size())
        throw std::invalid_argument("residual_table: size mismatch");
    ResidualTable t;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        ResidualRow r;
        r.x = checkpoints[i];
        r.exact = exact[i];
        r.predicted = eval_prediction(p, checkpoints[i]);
        r.residual = r.exact - r.predicted;
        double shape = eval_error_shape(p, checkpoints[i]);
        r.normalized = r.residual / shape;
        if (!std::isfinite(r.normalized))
            throw internal_error("residual_table: non-finite normalized residual");
        t.rows.push_back(r);
    }
    return t;
}

// Least-squares slope of log|residual| against log x.  Zero residuals are
// exact agreements and are skipped; all-zero tables report -inf.
inline double fit_error_exponent(const ResidualTable& t, double grid_log_q = 0.0) {
    if (t.rows.size() < 4)
        throw std::invalid_argument("fit_error_exponent: need >= 4 checkpoints");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    auto log_x = [&](const ResidualRow& r) {
        return grid_log_q > 0.0 ? r.x * grid_log_q : std::log(static_cast<double>(r.x));
    };
    for (const ResidualRow& r : t.rows) {
        lo = std::min(lo, log_x(r));
        hi = std::max(hi, log_x(r));
    }
    if (hi - lo < 3.0 * std::log(10.0) - 1e-9)
        throw std::invalid_argument("fit_error_exponent: checkpoints must span >= 3 decades");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const ResidualRow& r : t.rows) {
        if (r.residual == 0.0) continue;
        double X = log_x(r), Y = std::log(std::abs(r.residual));
        sx += X; sy += Y; sxx += X * X; sxy += X * Y;
        ++n;
    }
    if (n < 2) return -std::numeric_limits<double>::infinity();
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// --- lemma checks -------------------------------------------------------------

enum class LemmaId { mertens_part4, saidakeq, sumplogp, sumnwpx2, boundnm_part5 };

namespace detail {

struct PrimeRecipTable {
    std::vector<u64> primes;
    std::vector<double> prefix;  // prefix[i] = sum_{j<=i} 1/primes[j]

    double sum_upto(double y) const {
        if (primes.empty() || y < static_cast<double>(primes.front())) return 0.0;
        std::size_t idx =
            std::upper_bound(primes.begin(), primes.end(), static_cast<u64>(y)) -
            primes.begin();
        return idx == 0 ? 0.0 : prefix[idx - 1];
    }
};

inline PrimeRecipTable prime_recip_table(const IntegerInstance& inst, u64 bound) {
    PrimeRecipTable t;
    KahanSum s;
    inst.for_each_prime(bound, [&](u64 p) {
        t.primes.push_back(p);
        s.add(1.0 / static_cast<double>(p));
        t.prefix.push_back(s.value());
    });
    return t;
}

}  // namespace detail

// Computes the lemma's left side exactly (double prime sums by direct nested
// summation), subtracts the stated right side, and normalizes by the stated
// error shape.  Integers only; the dense x/2 cutoff is taken literally.
inline ResidualTable lemma_check(LemmaId id, const IntegerInstance& inst,
                                 const std::vector<u64>& checkpoints,
                                 const ConstantEstimate& A) {
    if (checkpoints.empty()) throw std::invalid_argument("lemma_check: no checkpoints");
    u64 x_max = checkpoints.back();
    double B = const_B(inst);
    ResidualTable out;

    switch (id) {
        case LemmaId::mertens_part4: {
            std::vector<double> E = detail::mertens_E(inst, checkpoints);
            for (std::size_t i = 0; i < checkpoints.size(); ++i) {
                ResidualRow r;
                r.x = checkpoints[i];
                double ll = std::log(std::log(static_cast<double>(r.x)));
                r.exact = E[i] + ll;  // sum of 1/p up to x
                r.predicted = ll + A.value;
                r.residual = r.exact - r.predicted;
                r.normalized = r.residual * std::log(static_cast<double>(r.x));
                out.rows.push_back(r);
            }
            return out;
        }
        case LemmaId::saidakeq:
        case LemmaId::sumplogp:
        case LemmaId::sumnwpx2: {
            auto tbl = detail::prime_recip_table(inst, x_max / 2);
            for (u64 x : checkpoints) {
                double xd = static_cast<double>(x);
                KahanSum lhs;
                for (u64 p : tbl.primes) {
                    if (p > x / 2) break;
                    double pd = static_cast<double>(p);
                    if (id == LemmaId::saidakeq)
                        lhs.add(tbl.sum_upto(xd / pd) / pd);
                    else if (id == LemmaId::sumplogp)
                        lhs.add(1.0 / (pd * std::log(xd / pd)));
                    else
                        lhs.add(std::log(std::log(xd / pd)) / pd);
                }
                double ll = std::log(std::log(xd));
                ResidualRow r;
                r.x = x;
                r.exact = lhs.value();
                if (id == LemmaId::saidakeq)
                    r.predicted = ll * ll + 2.0 * A.value * ll + A.value * A.value + B;
                else if (id == LemmaId::sumplogp)
                    r.predicted = 0.0;  // pure O-bound
                else
                    r.predicted = ll * ll + A.value * ll + B;
                r.residual = r.exact - r.predicted;
                r.normalized = r.residual * std::log(xd) / ll;
                out.rows.push_back(r);
            }
            return out;
        }
        case LemmaId::boundnm_part5: {
            ConstantEstimate ap =
                a_prime(inst, std::min(inst.limit(), std::max<u64>(x_max, 1u << 20)));
            KahanSum harmonic;
            std::size_t next = 0;
            for (u64 n = 1; n <= x_max && next < checkpoints.size(); ++n) {
                harmonic.add(1.0 / static_cast<double>(n));
                while (next < checkpoints.size() && checkpoints[next] == n) {
                    double xd = static_cast<double>(n);
                    ResidualRow r;
                    r.x = n;
                    r.exact = harmonic.value();
                    r.predicted = inst.kappa() * std::log(xd) + ap.value;
                    r.residual = r.exact - r.predicted;
                    // theta = 0: normalize by x^{1-theta} = x
                    r.normalized = r.residual * xd;
                    out.rows.push_back(r);
                    ++next;
                }
            }
            return out;
        }
    }
    throw std::invalid_argument("lemma_check: unknown lemma");
}

}  // namespace hfm
