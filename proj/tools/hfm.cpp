// Command-line front end: orchestrates instances, censuses, constants, and
// verification runs; emits CSV (stdout or --out).
//
// Exit codes: 0 success, 1 validation/usage error, 2 internal-consistency
// failure (alpha identity mismatch, convolution/census disagreement).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <variant>

#include "hfm/census.hpp"
#include "hfm/constants.hpp"
#include "hfm/csv.hpp"
#include "hfm/series.hpp"
#include "hfm/verify.hpp"

namespace {

using namespace hfm;

using Instance = std::variant<IntegerInstance, GaussianInstance, GradedInstance>;

struct RunConfig {
    std::string instance = "z";
    int h = 2;
    std::vector<std::string> checkpoints;  // decimal (dense) or d<N> (graded)
    std::string cutoff;                    // empty: grid-appropriate default
    unsigned workers = 1;
    std::string out;
    std::vector<u64> exclude;
};

bool is_polynomial_ring_name(const std::string& s, u64& q) {
    if (s.size() < 3 || s.front() != 'f' || s.back() != 'x') return false;
    std::string digits = s.substr(1, s.size() - 2);
    if (digits.empty()) return false;
    for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    q = std::stoull(digits);
    return q >= 2;
}

u64 parse_count_token(const std::string& tok) {
    double v = std::stod(tok);
    if (v < 0.0 || v > 9.3e18) throw std::invalid_argument("value out of range: " + tok);
    return static_cast<u64>(v + 0.5);
}

u64 parse_checkpoint(const std::string& tok, Grid grid) {
    if (tok.empty()) throw std::invalid_argument("empty checkpoint");
    if (tok[0] == 'd') {
        if (grid != Grid::graded)
            throw std::invalid_argument("degree checkpoint on a dense-grid instance: " + tok);
        return std::stoull(tok.substr(1));
    }
    double v = std::stod(tok);
    if (v < 1.0 || v > 9.3e18) throw std::invalid_argument("checkpoint out of range: " + tok);
    return static_cast<u64>(v + 0.5);
}

unsigned graded_degree_cap(u64 q) {
    double cap = 62.0 / std::log2(static_cast<double>(q));
    return static_cast<unsigned>(cap);
}

// Builds the instance sized for the requested checkpoints and cutoff.
u64 cutoff_of(const RunConfig& cfg) {
    return cfg.cutoff.empty() ? 0 : parse_count_token(cfg.cutoff);
}

bool is_polynomial_ring_name(const std::string& s, u64& q);
Grid instance_grid_for_name(const std::string& name);
unsigned graded_degree_cap(u64 q);

// The cutoff actually used: the flag when given, a grid default otherwise.
// Synthetic-file instances resolve their default after loading (0 here).
u64 effective_cutoff(const RunConfig& cfg) {
    u64 c = cutoff_of(cfg);
    if (c) return c;
    u64 q;
    if (cfg.instance == "z" || cfg.instance == "gaussian") return 1'000'000;
    if (is_polynomial_ring_name(cfg.instance, q))
        return std::min<u64>(40, graded_degree_cap(q));
    return 0;
}

Instance make_instance(const RunConfig& cfg, const std::vector<u64>& cps) {
    u64 top = effective_cutoff(cfg);
    for (u64 c : cps) top = std::max(top, c);
    u64 q = 0;
    if (cfg.instance == "z") {
        return IntegerInstance(std::max<u64>(top, 1000));
    } else if (cfg.instance == "gaussian") {
        return GaussianInstance(std::max<u64>(top, 1000));
    } else if (is_polynomial_ring_name(cfg.instance, q)) {
        unsigned want = static_cast<unsigned>(std::max<u64>(top, 30));
        unsigned cap = graded_degree_cap(q);
        if (want > cap)
            throw std::invalid_argument("degree range exceeds exact-arithmetic budget for q=" +
                                        std::to_string(q));
        return GradedInstance::polynomial_ring(q, want);
    }
    return GradedInstance::from_file(cfg.instance);
}

Grid instance_grid_for_name(const std::string& name) {
    u64 q;
    if (name == "z" || name == "gaussian") return Grid::dense;
    if (is_polynomial_ring_name(name, q)) return Grid::graded;
    return Grid::graded;  // synthetic files are graded instances
}

std::vector<u64> parse_checkpoints(const RunConfig& cfg) {
    Grid grid = instance_grid_for_name(cfg.instance);
    std::vector<u64> cps;
    for (const std::string& tok : cfg.checkpoints) cps.push_back(parse_checkpoint(tok, grid));
    if (cps.empty()) throw std::invalid_argument("no checkpoints given (--x or --checkpoints)");
    return cps;
}

u64 default_cutoff(const Instance& inst) {
    if (std::holds_alternative<GradedInstance>(inst)) {
        const auto& g = std::get<GradedInstance>(inst);
        return std::min<u64>(g.max_degree(), 40);
    }
    return 1'000'000;
}

struct OutputSink {
    std::ostringstream buffer;
    std::ostream& stream() { return buffer; }

    void flush(const std::string& path) {
        if (path.empty()) {
            std::cout << buffer.str();
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open output file: " + path);
        f << buffer.str();
    }
};

std::string quality_name(ErrorQuality q) {
    switch (q) {
        case ErrorQuality::rigorous: return "rigorous";
        case ErrorQuality::heuristic: return "heuristic";
        case ErrorQuality::non_convergent: return "non-convergent";
    }
    return "?";
}

// --- subcommand bodies -------------------------------------------------------

int run_constants(const RunConfig& cfg) {
    Instance inst = make_instance(cfg, {});
    OutputSink sink;
    std::visit(
        [&](const auto& I) {
            u64 cutoff = effective_cutoff(cfg);
            if (cutoff == 0) cutoff = default_cutoff(inst);
            auto& os = sink.stream();
            csv_header(os, {"name", "value", "tail_bound", "cutoff", "quality"});
            auto emit = [&](const std::string& name, const ConstantEstimate& e) {
                csv_row(os, {name, csv_num(e.value), csv_num(e.tail_bound),
                             csv_num(static_cast<unsigned long long>(e.cutoff)),
                             quality_name(e.quality)});
            };
            ConstantEstimate zh = zeta_value(I, static_cast<double>(cfg.h), cutoff, cfg.workers);
            emit("zeta_h", zh);
            ConstantEstimate A = mertens_A(I, cutoff, cfg.workers);
            emit("A", A);
            ConstantEstimate B{const_B(I), 0.0, cutoff, ErrorQuality::rigorous};
            emit("B", B);
            auto [c1, c2] = const_C(I, cfg.h, cutoff, A, cfg.workers);
            emit("C1", c1);
            emit("C2", c2);
            ConstantEstimate g = gamma_h(I, cfg.h, cutoff, cfg.workers);
            emit("gamma_h", g);
            emit("L_h(h+1)", L_h_value(I, cfg.h, cfg.h + 1, cutoff, cfg.workers));
            emit("L_h(2h)", L_h_value(I, cfg.h, 2 * cfg.h, cutoff, cfg.workers));
            auto [d1, d2] = const_D(I, cfg.h, cutoff, A, cfg.workers);
            emit("D1", d1);
            emit("D2", d2);
        },
        inst);
    sink.flush(cfg.out);
    return 0;
}

CensusRequest::Subset parse_subset(const std::string& s) {
    if (s == "all") return CensusRequest::Subset::all;
    if (s == "hfree") return CensusRequest::Subset::h_free;
    if (s == "hfull") return CensusRequest::Subset::h_full;
    throw std::invalid_argument("unknown subset: " + s);
}

const char* subset_name(CensusRequest::Subset s) {
    switch (s) {
        case CensusRequest::Subset::all: return "all";
        case CensusRequest::Subset::h_free: return "hfree";
        case CensusRequest::Subset::h_full: return "hfull";
    }
    return "?";
}

int run_count_like(const RunConfig& cfg, const std::string& subset,
                   CensusRequest::Statistic stat, int k, const std::string& function,
                   double epsilon) {
    std::vector<u64> cps = parse_checkpoints(cfg);
    Instance inst = make_instance(cfg, cps);
    CensusRequest req;
    req.subset = parse_subset(subset);
    req.statistic = stat;
    req.h = cfg.h;
    req.k = k;
    req.epsilon = epsilon;
    req.target = function == "bigomega" ? CensusRequest::Target::big_omega
                                        : CensusRequest::Target::omega;
    req.excluded = cfg.exclude;
    req.checkpoints = cps;
    req.workers = cfg.workers;

    CensusResult res = std::visit([&](const auto& I) { return run_census(I, req); }, inst);

    std::string stat_name;
    switch (stat) {
        case CensusRequest::Statistic::count: stat_name = "count"; break;
        case CensusRequest::Statistic::omega_moment: stat_name = "omega^" + std::to_string(k); break;
        case CensusRequest::Statistic::big_omega_moment:
            stat_name = "Omega^" + std::to_string(k);
            break;
        case CensusRequest::Statistic::violation_fraction:
            stat_name = (function == "bigomega" ? "Omega" : "omega") + std::string("-violation");
            break;
    }

    OutputSink sink;
    auto& os = sink.stream();
    if (stat == CensusRequest::Statistic::violation_fraction) {
        csv_header(os, {"x", "subset", "statistic", "violations", "members", "fraction"});
        for (std::size_t i = 0; i < cps.size(); ++i) {
            const CensusValue& v = res.values[i];
            csv_row(os, {csv_num(static_cast<unsigned long long>(cps[i])), subset_name(req.subset),
                         stat_name, csv_num(static_cast<long long>(v.violations)),
                         csv_num(static_cast<long long>(v.members)), csv_num(v.numeric())});
        }
    } else {
        csv_header(os, {"x", "subset", "statistic", "value"});
        for (std::size_t i = 0; i < cps.size(); ++i)
            csv_row(os, {csv_num(static_cast<unsigned long long>(cps[i])), subset_name(req.subset),
                         stat_name, csv_num(static_cast<long long>(res.values[i].count))});
    }
    sink.flush(cfg.out);
    return 0;
}

int run_alpha(const RunConfig& cfg, bool corrupt) {
    AlphaPolynomial ap = alpha_coeffs(cfg.h);
    if (corrupt) {
        if (ap.alpha.empty())
            ap.alpha[ap.r_min()] = 1;
        else
            ap.alpha.begin()->second += 1;
    }
    verify_alpha(ap);
    OutputSink sink;
    auto& os = sink.stream();
    csv_header(os, {"h", "r", "alpha"});
    if (ap.alpha.empty()) csv_comment(os, "phi_" + std::to_string(cfg.h) + " = 1; no coefficients");
    for (auto& [r, a] : ap.alpha)
        csv_row(os, {csv_num(static_cast<long long>(cfg.h)), csv_num(static_cast<long long>(r)),
                     csv_num(static_cast<long long>(a))});
    sink.flush(cfg.out);
    return 0;
}

int run_convolve(const RunConfig& cfg) {
    std::vector<u64> cps = parse_checkpoints(cfg);
    Instance inst = make_instance(cfg, cps);
    OutputSink sink;
    auto& os = sink.stream();
    csv_header(os, {"x", "convolution", "census"});
    std::visit(
        [&](const auto& I) {
            using T = std::decay_t<decltype(I)>;
            for (u64 x : cps) {
                i64 conv = hfull_count_by_convolution(I, cfg.h, x);
                i64 census;
                if constexpr (std::is_same_v<T, IntegerInstance>) {
                    CensusRequest req;
                    req.subset = CensusRequest::Subset::h_full;
                    req.h = cfg.h;
                    req.checkpoints = {x};
                    census = hfull_census_integers(I, req).values[0].count;
                } else if constexpr (std::is_same_v<T, GradedInstance>) {
                    auto by_deg = hfull_census_by_degree(I, cfg.h, static_cast<unsigned>(x));
                    census = 0;
                    for (i64 v : by_deg) census += v;
                } else {
                    CensusRequest req;
                    req.subset = CensusRequest::Subset::h_full;
                    req.h = cfg.h;
                    req.checkpoints = {x};
                    census = run_census(I, req).values[0].count;
                }
                if (conv != census)
                    throw internal_error("convolution/census disagreement at x=" +
                                         std::to_string(x));
                csv_row(os, {csv_num(static_cast<unsigned long long>(x)),
                             csv_num(static_cast<long long>(conv)),
                             csv_num(static_cast<long long>(census))});
            }
        },
        inst);
    sink.flush(cfg.out);
    return 0;
}

TheoremId parse_theorem(const std::string& s) {
    if (s == "hfree-count") return TheoremId::hfree_count;
    if (s == "hfull-count") return TheoremId::hfull_count;
    if (s == "hfree-omega1") return TheoremId::hfree_omega1;
    if (s == "hfree-omega2") return TheoremId::hfree_omega2;
    if (s == "hfull-omega1") return TheoremId::hfull_omega1;
    if (s == "hfull-omega2") return TheoremId::hfull_omega2;
    throw std::invalid_argument("unknown theorem: " + s);
}

int run_verify(const RunConfig& cfg, const std::string& theorem) {
    std::vector<u64> cps = parse_checkpoints(cfg);
    Instance inst = make_instance(cfg, cps);
    TheoremId id = parse_theorem(theorem);

    CensusRequest req;
    req.h = cfg.h;
    req.checkpoints = cps;
    req.workers = cfg.workers;
    switch (id) {
        case TheoremId::hfree_count:
            req.subset = CensusRequest::Subset::h_free;
            req.statistic = CensusRequest::Statistic::count;
            break;
        case TheoremId::hfull_count:
            req.subset = CensusRequest::Subset::h_full;
            req.statistic = CensusRequest::Statistic::count;
            break;
        case TheoremId::hfree_omega1:
        case TheoremId::hfree_omega2:
            req.subset = CensusRequest::Subset::h_free;
            req.statistic = CensusRequest::Statistic::omega_moment;
            req.k = id == TheoremId::hfree_omega1 ? 1 : 2;
            break;
        case TheoremId::hfull_omega1:
        case TheoremId::hfull_omega2:
            req.subset = CensusRequest::Subset::h_full;
            req.statistic = CensusRequest::Statistic::omega_moment;
            req.k = id == TheoremId::hfull_omega1 ? 1 : 2;
            break;
    }

    OutputSink sink;
    auto& os = sink.stream();
    csv_header(os, {"x", "exact", "predicted", "residual", "normalized"});
    std::visit(
        [&](const auto& I) {
            u64 cutoff = effective_cutoff(cfg);
            if (cutoff == 0) cutoff = default_cutoff(inst);
            Prediction pred = predict(id, I, cfg.h, cutoff, cfg.workers);
            CensusResult res = run_census(I, req);
            std::vector<double> exact;
            for (auto& v : res.values) exact.push_back(v.numeric());
            ResidualTable t = residual_table(pred, cps, exact);
            for (auto& r : t.rows)
                csv_row(os, {csv_num(static_cast<unsigned long long>(r.x)), csv_num(r.exact),
                             csv_num(r.predicted), csv_num(r.residual), csv_num(r.normalized)});
        },
        inst);
    sink.flush(cfg.out);
    return 0;
}

LemmaId parse_lemma(const std::string& s) {
    if (s == "mertens-part4") return LemmaId::mertens_part4;
    if (s == "saidakeq") return LemmaId::saidakeq;
    if (s == "sumplogp") return LemmaId::sumplogp;
    if (s == "sumnwpx2") return LemmaId::sumnwpx2;
    if (s == "boundnm-part5") return LemmaId::boundnm_part5;
    throw std::invalid_argument("unknown lemma: " + s);
}

int run_lemma(const RunConfig& cfg, const std::string& lemma) {
    if (cfg.instance != "z")
        throw std::invalid_argument("lemma checks run on the integer instance");
    std::vector<u64> cps = parse_checkpoints(cfg);
    u64 cutoff = cutoff_of(cfg) ? cutoff_of(cfg) : std::max<u64>(cps.back(), 1'000'000);
    IntegerInstance z(std::max(cutoff, cps.back()));
    ConstantEstimate A = mertens_A(z, cutoff, cfg.workers);
    ResidualTable t = lemma_check(parse_lemma(lemma), z, cps, A);
    OutputSink sink;
    auto& os = sink.stream();
    csv_header(os, {"x", "lhs", "rhs", "residual", "normalized"});
    for (auto& r : t.rows)
        csv_row(os, {csv_num(static_cast<unsigned long long>(r.x)), csv_num(r.exact),
                     csv_num(r.predicted), csv_num(r.residual), csv_num(r.normalized)});
    sink.flush(cfg.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"census and verification toolkit for h-free/h-full monoid elements"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string subset = "all", function = "omega", theorem, lemma;
    int k = 1;
    double epsilon = 0.5;
    bool corrupt_alpha = false;

    app.set_help_flag("--help", "print help");

    auto add_common = [&](CLI::App* sub, bool with_checkpoints) {
        sub->set_help_flag("--help", "print help");
        sub->add_option("--instance", cfg.instance,
                        "z | gaussian | f<q>x | synthetic instance file");
        sub->add_option("--h", cfg.h, "fullness/freeness order (h >= 2)");
        sub->add_option("--cutoff", cfg.cutoff, "constants cutoff (norm or degree)");
        sub->add_option("--workers", cfg.workers, "worker threads");
        sub->add_option("--out", cfg.out, "output CSV path (default stdout)");
        if (with_checkpoints) {
            sub->add_option("--checkpoints", cfg.checkpoints,
                            "comma-separated norms (or d<N> degrees)")
                ->delimiter(',');
            sub->add_option("--x", cfg.checkpoints, "single checkpoint");
        }
    };

    CLI::App* c_constants = app.add_subcommand("constants", "theorem constants as CSV");
    add_common(c_constants, false);

    CLI::App* c_count = app.add_subcommand("count", "subset counts at checkpoints");
    add_common(c_count, true);
    c_count->add_option("--subset", subset, "all | hfree | hfull");
    c_count->add_option("--exclude", cfg.exclude, "excluded prime norms")->delimiter(',');

    CLI::App* c_moments = app.add_subcommand("moments", "omega/Omega moment sums");
    add_common(c_moments, true);
    c_moments->add_option("--subset", subset);
    c_moments->add_option("--k", k, "moment power (1 or 2)");
    c_moments->add_option("--function", function, "omega | bigomega");
    c_moments->add_option("--exclude", cfg.exclude)->delimiter(',');

    CLI::App* c_viol = app.add_subcommand("violations", "normal-order violation fractions");
    add_common(c_viol, true);
    c_viol->add_option("--subset", subset);
    c_viol->add_option("--epsilon", epsilon, "band half-width");
    c_viol->add_option("--function", function, "omega | bigomega");

    CLI::App* c_alpha = app.add_subcommand("alpha", "alpha_{r,h} coefficient table");
    add_common(c_alpha, false);
    c_alpha->add_flag("--corrupt-alpha", corrupt_alpha)->group("");  // hidden test hook

    CLI::App* c_conv = app.add_subcommand("convolve", "h-full counts, convolution vs census");
    add_common(c_conv, true);

    CLI::App* c_verify = app.add_subcommand("verify", "residual table for one theorem");
    add_common(c_verify, true);
    c_verify->add_option("--theorem", theorem, "hfree-count | hfull-count | hfree-omega1 | "
                                               "hfree-omega2 | hfull-omega1 | hfull-omega2")
        ->required();

    CLI::App* c_lemma = app.add_subcommand("lemma", "numeric lemma checks");
    add_common(c_lemma, true);
    c_lemma->add_option("--lemma", lemma,
                        "mertens-part4 | saidakeq | sumplogp | sumnwpx2 | boundnm-part5")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cfg.h < 2) throw std::invalid_argument("h must be >= 2");
        if (cfg.workers < 1) throw std::invalid_argument("workers must be >= 1");
        if (app.got_subcommand(c_constants)) return run_constants(cfg);
        if (app.got_subcommand(c_count))
            return run_count_like(cfg, subset, CensusRequest::Statistic::count, 1, function,
                                  epsilon);
        if (app.got_subcommand(c_moments)) {
            auto stat = function == "bigomega" ? CensusRequest::Statistic::big_omega_moment
                                               : CensusRequest::Statistic::omega_moment;
            return run_count_like(cfg, subset, stat, k, function, epsilon);
        }
        if (app.got_subcommand(c_viol))
            return run_count_like(cfg, subset, CensusRequest::Statistic::violation_fraction, 1,
                                  function, epsilon);
        if (app.got_subcommand(c_alpha)) return run_alpha(cfg, corrupt_alpha);
        if (app.got_subcommand(c_conv)) return run_convolve(cfg);
        if (app.got_subcommand(c_verify)) return run_verify(cfg, theorem);
        if (app.got_subcommand(c_lemma)) return run_lemma(cfg, lemma);
        throw std::invalid_argument("no subcommand");
    } catch (const internal_error& e) {
        std::cerr << "internal-consistency failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
