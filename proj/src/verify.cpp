#include "switchmix/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

#include "switchmix/base_learner.hpp"
#include "switchmix/loss.hpp"
#include "switchmix/mixture_engine.hpp"
#include "switchmix/oracle_bench.hpp"
#include "switchmix/runner.hpp"
#include "switchmix/scheme_exp.hpp"
#include "switchmix/scheme_log.hpp"
#include "switchmix/scheme_quad.hpp"

namespace switchmix {

namespace {

// Tolerances and sizes of every check, in one place.
constexpr double kMixabilityTol = 1e-10;
constexpr int kMixabilityDraws = 10000;
constexpr double kMixabilitySeconds = 5.0;
constexpr double kValidityTol = 1e-12;
constexpr double kValiditySeconds = 60.0;
constexpr Time kValidityExpMax = 16;
constexpr Time kValidityQuadMax = 4096;
constexpr Time kValidityLogMax = Time{1} << 20;
constexpr Time kOptimalSeriesTerms = 10000;
constexpr double kSlackTol = 1e-8;
constexpr int kRandomMultiPaths = 500;
constexpr double kRelativeExact = 1e-12;
constexpr int kQuadCostSegmentations = 100;
constexpr double kAsymptoticSlack = 0.05;
constexpr int kBoundRandomSegmentations = 20;
constexpr int kSplitInstances = 1000;
constexpr Time kSplitMaxHorizon = 4096;
constexpr int kDpInstances = 200;
constexpr int kDoublingInstances = 50;
constexpr double kSublinearRatio = 0.5;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double symmetric(double half) { return half * (2.0 * unit() - 1.0); }
    // Uniform on {lo, ..., hi}.
    Time between(Time lo, Time hi) {
        const auto span = static_cast<double>(hi - lo + 1);
        return std::min(hi, lo + static_cast<Time>(unit() * span));
    }
    std::uint64_t seed() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

// S - 1 distinct change points in [2, T] plus the origin, sorted.
std::vector<Time> random_starts(Rng& rng, std::size_t segments, Time horizon) {
    std::vector<Time> pool;
    for (Time t = 2; t <= horizon; ++t)
        pool.push_back(t);
    std::vector<Time> starts{1};
    for (std::size_t i = 0; i + 1 < segments; ++i) {
        const auto j = static_cast<std::size_t>(rng.between(static_cast<Time>(i), static_cast<Time>(pool.size()) - 1));
        std::swap(pool[i], pool[j]);
        starts.push_back(pool[i]);
    }
    std::sort(starts.begin(), starts.end());
    return starts;
}

std::vector<Time> starts_of(const std::vector<Time>& ends) {
    std::vector<Time> starts{1};
    for (std::size_t i = 0; i + 1 < ends.size(); ++i)
        starts.push_back(ends[i] + 1);
    return starts;
}

std::vector<Time> lengths_of(const std::vector<Time>& starts, Time horizon) {
    std::vector<Time> out;
    for (std::size_t i = 0; i < starts.size(); ++i)
        out.push_back((i + 1 < starts.size() ? starts[i + 1] : horizon + 1) - starts[i]);
    return out;
}

// a <= b up to a relative rounding allowance.
bool leq_exact(double a, double b) { return a <= b + kRelativeExact * std::max(1.0, std::abs(b)); }

// --- 1 ---------------------------------------------------------------------

CriterionResult mixability_suite() {
    CriterionResult r;
    const auto start = std::chrono::steady_clock::now();
    const LossFamily sq = LossFamily::square();
    Rng rng(42);
    double worst = std::numeric_limits<double>::infinity();
    int failures = 0;
    for (int d = 0; d < kMixabilityDraws; ++d) {
        const auto n = static_cast<std::size_t>(rng.between(1, 12));
        WeightedEstimates w;
        for (std::size_t i = 0; i < n; ++i) {
            w.estimates.push_back(rng.symmetric(1.0));
            w.log_weights.push_back(-8.0 * rng.unit());
        }
        // Scale to a sub-probability.
        const double lse = log_sum_exp(w.log_weights);
        const double mass = std::log(0.05 + 0.95 * rng.unit());
        for (double& lw : w.log_weights)
            lw += mass - lse;
        const Estimate theta = mix_estimates(sq, w);
        const double deficit = mixability_deficit(sq, w, theta, rng.symmetric(1.0));
        worst = std::min(worst, deficit);
        if (deficit < -kMixabilityTol)
            ++failures;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = failures == 0 && secs < kMixabilitySeconds;
    r.detail = std::to_string(kMixabilityDraws) + " draws, " + std::to_string(failures) +
               " below -1e-10, min deficit " + fmt(worst) + ", " + fmt(secs, 3) + " s (limit 5 s)";
    return r;
}

// --- 2 ---------------------------------------------------------------------

CriterionResult weighting_validity() {
    CriterionResult r;
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> failures;
    const auto fail = [&](const std::string& what) {
        if (failures.size() < 5)
            failures.push_back(what);
        else if (failures.size() == 5)
            failures.push_back("...");
    };

    // exp: prior mass over every expert; later rows are the identity.
    for (ExpWeighting kind : {ExpWeighting::Naive, ExpWeighting::Better, ExpWeighting::Optimal}) {
        for (Time T = 1; T <= kValidityExpMax; ++T) {
            double total = 0.0;
            for (const auto& e : enumerate_experts(T, kValidityExpMax))
                total += initial_prior(kind, e);
            if (kind == ExpWeighting::Naive) {
                // Powers of two sum exactly: 2^{T-1} experts of weight 2^{-T}.
                const auto count = static_cast<std::uint64_t>(enumerate_experts(T, kValidityExpMax).size());
                if (total != 0.5 || count * 2 > (std::uint64_t{1} << T))
                    fail("exp.naive T=" + std::to_string(T));
            } else if (total > 1.0 + kValidityTol) {
                fail("exp T=" + std::to_string(T) + " prior mass " + fmt(total));
            }
            const ExpScheme scheme(kind, T, kValidityExpMax);
            for (Time t = 2; t <= T; ++t) {
                const auto mask0 = BinaryExpertParams{(std::uint64_t{1} << (T - 1)) | 1U, T};
                if (scheme.log_transition(t, mask0, mask0) != 0.0)
                    fail("exp self row at t=" + std::to_string(t));
            }
        }
    }

    // quad: the newborn row sum depends on the number of newborns L = T + 1 - t.
    for (QuadWeighting kind : {QuadWeighting::Naive, QuadWeighting::Better, QuadWeighting::Optimal}) {
        if (kind == QuadWeighting::Naive) {
            for (Time T = 1; T <= kValidityQuadMax; ++T) {
                const QuadWeightingKind k{kind, T};
                for (Time t = 1; t <= T; ++t) {
                    if (quad_validity_margin(k, t, T) < -kValidityTol)
                        fail("quad.naive T=" + std::to_string(T) + " t=" + std::to_string(t));
                }
            }
            continue;
        }
        double running = 0.0;
        const QuadWeightingKind k{kind, kValidityQuadMax};
        for (Time L = 1; L <= kValidityQuadMax; ++L) {
            running += newborn_weight(k, L);
            if (running > 1.0 + kValidityTol)
                fail("quad L=" + std::to_string(L));
        }
        // Spot check the margin routine itself over a full horizon.
        for (Time t = 1; t <= kValidityQuadMax; t += 37) {
            if (quad_validity_margin(k, t, kValidityQuadMax) < -kValidityTol)
                fail("quad margin t=" + std::to_string(t));
        }
    }
    {
        double sum = 0.0;
        const QuadWeightingKind k{QuadWeighting::Optimal, kOptimalSeriesTerms};
        for (Time l = 1; l <= kOptimalSeriesTerms; ++l)
            sum += newborn_weight(k, l);
        if (!(sum < 1.0))
            fail("quad.optimal finite sum at 1e4 is " + fmt(sum));
    }

    // log: closed-form margins at every t, then direct row sums.
    const LogWeighting log_kinds[] = {LogWeighting::Naive, LogWeighting::Better, LogWeighting::Smarter,
                                      LogWeighting::Optimal};
    for (LogWeighting kind : log_kinds) {
        for (Time t = 1; t <= kValidityLogMax; ++t) {
            if (log_validity_margin(kind, t) < -kValidityTol)
                fail("log margin t=" + std::to_string(t));
        }
    }
    Rng rng(2);
    std::vector<Time> probe;
    for (Time t = 2; t <= 4096; ++t)
        probe.push_back(t);
    for (int i = 0; i < 2000; ++i)
        probe.push_back(rng.between(4097, kValidityLogMax));
    for (Time t = 4096; t <= kValidityLogMax; t *= 2)
        probe.push_back(t);
    double largest_gap = 0.0;
    for (LogWeighting kind : log_kinds) {
        for (Time t : probe) {
            const BoundaryContext ctx = boundary_context(t);
            double worst_row = 0.0;
            for (const auto& from : active_experts(t - 1)) {
                double row = 0.0;
                for (const auto& to : active_experts(t))
                    row += transition_weight(kind, from, to, ctx);
                if (row > 1.0 + kValidityTol)
                    fail("log row sum " + fmt(row, 17) + " at t=" + std::to_string(t));
                const bool carries_only = (row == 1.0 && transition_weight(kind, from, from, ctx) == 1.0);
                if (!carries_only)
                    worst_row = std::max(worst_row, row);
            }
            largest_gap = std::max(largest_gap, std::abs((1.0 - worst_row) - log_validity_margin(kind, t)));
        }
    }
    if (largest_gap > 1e-12)
        fail("closed-form margin differs from row sums by " + fmt(largest_gap));

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = failures.empty() && secs < kValiditySeconds;
    std::string d = failures.empty() ? "all 10 weightings valid" : "violations:";
    for (const auto& f : failures)
        d += " " + f + ";";
    r.detail = d + " " + fmt(secs, 3) + " s (limit 60 s)";
    return r;
}

// --- 3 ---------------------------------------------------------------------

CriterionResult exhaustive_path_bound() {
    CriterionResult r;
    constexpr Time T = 8;
    const LossFamily sq = LossFamily::square();
    const BaseLearner ftl = BaseLearner::follow_the_leader();
    GeneratorSpec gen;
    gen.segments = 3;
    gen.noise = 0.2;
    gen.placement = BoundaryPlacement::Random;
    const auto data = generate(gen, T, 3).data;

    double worst = std::numeric_limits<double>::infinity();
    int violations = 0;
    int infeasible = 0;
    int feasible_multi = 0;
    Rng rng(11);
    for (ExpWeighting kind : {ExpWeighting::Naive, ExpWeighting::Better, ExpWeighting::Optimal}) {
        auto scheme = std::make_shared<ExpScheme>(kind, T, T);
        MixtureEngine engine(sq, scheme, ftl);
        const RunTrace& trace = engine.run(data);
        const auto experts = enumerate_experts(T, T);
        for (const auto& e : experts) {
            const PathSpec path(static_cast<std::size_t>(T), e);
            const double slack = path_bound_slack(trace, path, *scheme, sq, ftl);
            worst = std::min(worst, slack);
            if (slack < -kSlackTol)
                ++violations;
        }
        for (int p = 0; p < kRandomMultiPaths; ++p) {
            PathSpec path;
            std::size_t current = static_cast<std::size_t>(rng.between(0, static_cast<Time>(experts.size()) - 1));
            for (Time t = 1; t <= T; ++t) {
                if (t > 1 && rng.unit() < 0.4)
                    current = static_cast<std::size_t>(rng.between(0, static_cast<Time>(experts.size()) - 1));
                path.push_back(experts[current]);
            }
            if (path_switch_count(path) < 2)
                path.back() = experts[(current + 1) % experts.size()];
            try {
                const double slack = path_bound_slack(trace, path, *scheme, sq, ftl);
                ++feasible_multi;
                worst = std::min(worst, slack);
                if (slack < -kSlackTol)
                    ++violations;
            } catch (const InfeasiblePath&) {
                // W = +inf: the bound holds trivially.
                ++infeasible;
            }
        }
    }
    r.passed = violations == 0;
    r.detail = "3 x 128 single-expert paths, min slack " + fmt(worst) + "; of 1500 random multi-expert paths " +
               std::to_string(infeasible) + " have a zero transition (W = inf) and " +
               std::to_string(feasible_multi) + " are feasible; violations " + std::to_string(violations);
    return r;
}

// --- 4 ---------------------------------------------------------------------

CriterionResult quad_cost_identity() {
    CriterionResult r;
    constexpr Time T = 512;
    const QuadScheme scheme(QuadWeighting::Better, T);
    Rng rng(4);
    double worst = 0.0;
    for (int i = 0; i < kQuadCostSegmentations; ++i) {
        const auto S = static_cast<std::size_t>(rng.between(1, 64));
        const auto starts = random_starts(rng, S, T);
        const double measured = path_mixture_cost(scheme.competing_path(starts, T), scheme);
        double expected = 0.0;
        for (Time l : lengths_of(starts, T))
            expected += std::log(static_cast<double>(l)) + std::log(static_cast<double>(l + 1));
        worst = std::max(worst, std::abs(measured - expected) / expected);
    }
    r.passed = worst <= kRelativeExact;
    r.detail = "100 segmentations at T=512, max relative error " + fmt(worst) + " (limit 1e-12)";
    return r;
}

// --- 5 ---------------------------------------------------------------------

struct BoundForm {
    std::string name;
    bool exact;
    std::function<std::shared_ptr<const HyperExpertScheme>(Time)> make;
};

CriterionResult mixture_regret_bounds() {
    CriterionResult r;
    const std::vector<BoundForm> forms = {
        {"quad.naive", false,
         [](Time T) { return std::make_shared<QuadScheme>(QuadWeighting::Naive, T); }},
        {"quad.better", true, [](Time T) { return std::make_shared<QuadScheme>(QuadWeighting::Better, T); }},
        {"quad.optimal", false,
         [](Time T) { return std::make_shared<QuadScheme>(QuadWeighting::Optimal, T); }},
        {"log.naive", false, [](Time) { return std::make_shared<LogScheme>(LogWeighting::Naive); }},
        {"log.better", false, [](Time) { return std::make_shared<LogScheme>(LogWeighting::Better); }},
        {"log.smarter", false, [](Time) { return std::make_shared<LogScheme>(LogWeighting::Smarter); }},
        {"log.optimal", true, [](Time) { return std::make_shared<LogScheme>(LogWeighting::Optimal); }},
    };
    const Time horizons[] = {64, 256, 1024};
    const std::size_t segment_counts[] = {1, 2, 4, 8};

    std::vector<std::string> lines;
    bool ok = true;
    for (const auto& form : forms) {
        double worst_ratio = 0.0;
        double worst_asserted = 0.0;
        std::string worst_case;
        bool form_ok = true;
        for (Time T : horizons) {
            const auto scheme = form.make(T);
            const bool asserted = form.exact || T == 1024;
            for (std::size_t S : segment_counts) {
                std::vector<std::pair<std::string, std::vector<Time>>> cases;
                cases.emplace_back("equal", starts_of(place_boundaries(BoundaryPlacement::Equal, S, T, 0)));
                cases.emplace_back("geometric",
                                   starts_of(place_boundaries(BoundaryPlacement::Geometric, S, T, 0)));
                for (int i = 0; i < kBoundRandomSegmentations; ++i)
                    cases.emplace_back("random", starts_of(place_boundaries(BoundaryPlacement::Random, S, T,
                                                                            1000 + static_cast<std::uint64_t>(i))));
                const double bound = scheme->mixture_regret_bound(static_cast<double>(S), static_cast<double>(T));
                for (const auto& [label, starts] : cases) {
                    const double w = path_mixture_cost(scheme->competing_path(starts, T), *scheme);
                    const double ratio = bound > 0.0 ? w / bound : (w > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
                    worst_ratio = std::max(worst_ratio, ratio);
                    if (!asserted)
                        continue;
                    const bool holds = form.exact ? leq_exact(w, bound) : w <= (1.0 + kAsymptoticSlack) * bound;
                    if (ratio > worst_asserted) {
                        worst_asserted = ratio;
                        worst_case = "T=" + std::to_string(T) + " S=" + std::to_string(S) + " " + label;
                    }
                    if (!holds)
                        form_ok = false;
                }
            }
        }
        ok = ok && form_ok;
        lines.push_back(form.name + (form_ok ? " ok" : " FAILS") + " max W/bound " + fmt(worst_asserted, 4) +
                        (form.exact ? " (exact" : " (1.05 slack, T=1024") + ", at " + worst_case +
                        "; all T " + fmt(worst_ratio, 4) + ")");
    }
    r.passed = ok;
    for (const auto& l : lines)
        r.detail += (r.detail.empty() ? "" : "; ") + l;
    return r;
}

// --- 6 ---------------------------------------------------------------------

CriterionResult dyadic_split_count() {
    CriterionResult r;
    int violations = 0;
    double worst = 0.0;
    Rng rng(6);
    const auto check = [&](Time T, const std::vector<Time>& starts) {
        const auto segs = dyadic_split(T, starts);
        const double S = static_cast<double>(starts.size());
        bool good = static_cast<double>(segs.size()) <= S * std::log2(8.0 * static_cast<double>(T) / S);
        Time next = 1;
        for (const auto& seg : segs) {
            good = good && seg.start == next && std::has_single_bit(static_cast<std::uint64_t>(seg.length)) &&
                   seg.start % seg.length == 0 && seg.end == std::min(seg.start + seg.length - 1, T);
            for (Time c : starts)
                good = good && !(seg.start < c && c <= seg.end);
            next = seg.end + 1;
        }
        good = good && next == T + 1;
        worst = std::max(worst, static_cast<double>(segs.size()) / (S * std::log2(8.0 * static_cast<double>(T) / S)));
        return good;
    };
    for (int i = 0; i < kSplitInstances; ++i) {
        const Time T = rng.between(1, kSplitMaxHorizon);
        const auto S = static_cast<std::size_t>(rng.between(1, std::min<Time>(T, 128)));
        if (!check(T, random_starts(rng, S, T)))
            ++violations;
    }
    const std::vector<Time> origin{1};
    const auto eight = dyadic_split(8, origin);
    const bool eight_ok = eight.size() == 4;
    r.passed = violations == 0 && eight_ok;
    r.detail = "1000 change sets, violations " + std::to_string(violations) + ", max count/(S log2(8T/S)) " +
               fmt(worst, 4) + "; T=8 S=1 gives " + std::to_string(eight.size()) + " segments";
    return r;
}

// --- 7 ---------------------------------------------------------------------

CriterionResult switching_dp() {
    CriterionResult r;
    const LossFamily sq = LossFamily::square();
    Rng rng(7);
    int mismatches = 0;
    for (int i = 0; i < kDpInstances; ++i) {
        const Time T = rng.between(1, 12);
        const auto S = static_cast<std::size_t>(rng.between(1, std::min<Time>(T, 4)));
        std::vector<Observation> data;
        for (Time t = 0; t < T; ++t)
            data.push_back(rng.symmetric(1.0));
        const SwitchingFit dp = best_switching(data, sq, S);

        // Every choice of S - 1 cut points, lexicographically.
        double best_loss = std::numeric_limits<double>::infinity();
        std::vector<Time> best_ends;
        std::vector<Time> cuts(S - 1);
        std::function<void(std::size_t, Time)> rec = [&](std::size_t depth, Time from) {
            if (depth == S - 1) {
                std::vector<Time> ends(cuts.begin(), cuts.end());
                ends.push_back(T);
                double loss = 0.0;
                Time first = 1;
                for (Time e : ends) {
                    loss += best_fixed(std::span<const Observation>(data).subspan(
                                           static_cast<std::size_t>(first - 1), static_cast<std::size_t>(e - first + 1)),
                                       sq)
                                .loss;
                    first = e + 1;
                }
                if (loss < best_loss) {
                    best_loss = loss;
                    best_ends = ends;
                }
                return;
            }
            for (Time c = from; c <= T - 1; ++c) {
                cuts[depth] = c;
                rec(depth + 1, c + 1);
            }
        };
        rec(0, 1);
        if (dp.spec.ends != best_ends || dp.loss != best_loss)
            ++mismatches;
    }
    r.passed = mismatches == 0;
    r.detail = "200 instances T<=12 S<=4, mismatches " + std::to_string(mismatches);
    return r;
}

// --- 8 ---------------------------------------------------------------------

CriterionResult doubling_oracle_check() {
    CriterionResult r;
    bool closed_ok = doubling_run_lengths(7) == std::vector<Time>{1, 2, 4} &&
                     doubling_run_lengths(8) == std::vector<Time>{1, 2, 4, 1} &&
                     doubling_run_lengths(1) == std::vector<Time>{1};
    for (Time t = 1; t <= 4096; ++t) {
        const auto runs = doubling_run_lengths(t);
        const auto n_s = static_cast<std::size_t>(std::bit_width(static_cast<std::uint64_t>(t)) - 1);
        closed_ok = closed_ok && runs.size() == n_s + 1 && (Time{1} << n_s) <= t && t <= (Time{2} << n_s) - 1;
    }

    constexpr Time T = 512;
    const LossFamily sq = LossFamily::square();
    const BaseLearner ftl = BaseLearner::follow_the_leader();
    Rng rng(8);
    int violations = 0;
    double worst = 0.0;
    std::string worst_case;
    for (int i = 0; i < kDoublingInstances; ++i) {
        GeneratorSpec gen;
        gen.segments = static_cast<std::size_t>(rng.between(1, 16));
        gen.noise = 0.5 * rng.unit();
        gen.placement = BoundaryPlacement::Random;
        const auto data = generate(gen, T, rng.seed());
        const SegmentSpec spec = SegmentSpec::fitted(data.data, sq, data.ends);
        const OracleResult res = doubling_oracle(data.data, spec, ftl);
        const double bound = doubling_oracle_bound(static_cast<double>(gen.segments), static_cast<double>(T),
                                                   RegretBoundModel::constant_bound(res.max_run_regret));
        const double ratio = res.regret / bound;
        if (ratio > worst) {
            worst = ratio;
            worst_case = "S=" + std::to_string(gen.segments) + " noise " + fmt(gen.noise, 3);
        }
        if (res.regret > bound)
            ++violations;
    }
    r.passed = closed_ok && violations == 0;
    r.detail = std::string("run lengths ") + (closed_ok ? "match" : "MISMATCH") + "; 50 segmentations at T=512, " +
               std::to_string(violations) + " above the bound, max regret/bound " + fmt(worst, 4) + " (" + worst_case + ")";
    return r;
}

// --- 9 ---------------------------------------------------------------------

CriterionResult sublinearity() {
    CriterionResult r;
    RunConfig base;
    base.scheme = "log";
    base.weighting = "optimal";
    base.generator.segments = 2;
    base.generator.noise = 0.1;
    double per_step[2] = {0.0, 0.0};
    const Time horizons[2] = {256, 1024};
    for (int h = 0; h < 2; ++h) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            RunConfig cfg = base;
            cfg.horizon = horizons[h];
            cfg.seed = seed;
            const auto res = execute(cfg);
            per_step[h] += res.report.regret / static_cast<double>(horizons[h]) / 10.0;
        }
    }
    const double ratio = per_step[1] / per_step[0];
    r.passed = ratio < kSublinearRatio;
    r.detail = "mean regret/T " + fmt(per_step[0]) + " at T=256, " + fmt(per_step[1]) + " at T=1024, ratio " +
               fmt(ratio, 4) + " (limit 0.5)";
    return r;
}

// --- 10 --------------------------------------------------------------------

CriterionResult cross_scheme() {
    CriterionResult r;
    constexpr Time T = 10;
    const LossFamily sq = LossFamily::square();
    const BaseLearner ftl = BaseLearner::follow_the_leader();
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"exp", "naive"},  {"exp", "better"},  {"exp", "optimal"},  {"quad", "naive"},   {"quad", "better"},
        {"quad", "optimal"}, {"log", "naive"}, {"log", "better"}, {"log", "smarter"}, {"log", "optimal"},
    };
    int failures = 0;
    double worst = std::numeric_limits<double>::infinity();
    double max_gap = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        GeneratorSpec gen;
        gen.segments = 2;
        gen.noise = 0.1;
        gen.placement = BoundaryPlacement::Random;
        const auto data = generate(gen, T, seed);
        const SegmentSpec spec = SegmentSpec::fitted(data.data, sq, data.ends);
        double exp_opt = 0.0;
        double quad_opt = 0.0;
        for (const auto& [s, w] : pairs) {
            const auto scheme = make_scheme(s, w, T);
            MixtureEngine engine(sq, scheme, ftl);
            const RunTrace& trace = engine.run(data.data);
            try {
                const RegretReport rep = decompose_regret(trace, spec, *scheme, sq, ftl);
                worst = std::min(worst, rep.decomposition_slack());
                if (rep.decomposition_slack() < -kSlackTol)
                    ++failures;
            } catch (const Error&) {
                ++failures;
            }
            if (s == "exp" && w == "optimal")
                exp_opt = trace.cumulative_loss();
            if (s == "quad" && w == "optimal")
                quad_opt = trace.cumulative_loss();
        }
        max_gap = std::max(max_gap, std::abs(exp_opt - quad_opt));
    }
    r.passed = failures == 0;
    r.detail = "10 scheme/weighting pairs x 5 seeds at T=10, failed decompositions " + std::to_string(failures) +
               ", min slack " + fmt(worst) + "; |exp.optimal - quad.optimal| loss up to " + fmt(max_gap, 4) +
               " (reported, not asserted)";
    return r;
}

// --- 11 --------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CriterionResult determinism(const VerifyOptions& options) {
    CriterionResult r;
    RunConfig cfg;
    cfg.scheme = "quad";
    cfg.weighting = "optimal";
    cfg.horizon = 64;
    cfg.generator.segments = 2;
    cfg.generator.noise = 0.1;
    cfg.seed = 7;
    std::string outputs[2][2];
    for (int i = 0; i < 2; ++i) {
        cfg.out = options.scratch / ("run" + std::to_string(i));
        std::filesystem::remove_all(cfg.out);
        run(cfg);
        outputs[i][0] = slurp(cfg.out / "trace.csv");
        outputs[i][1] = slurp(cfg.out / "report.csv");
    }
    const bool same_trace = !outputs[0][0].empty() && outputs[0][0] == outputs[1][0];
    const bool same_report = !outputs[0][1].empty() && outputs[0][1] == outputs[1][1];
    r.passed = same_trace && same_report;
    r.detail = std::string("trace.csv ") + (same_trace ? "identical" : "DIFFERS") + " (" +
               std::to_string(outputs[0][0].size()) + " bytes), report.csv " + (same_report ? "identical" : "DIFFERS");
    return r;
}

} // namespace

std::string criterion_name(int id) {
    switch (id) {
    case 1:
        return "square-loss mixability";
    case 2:
        return "weighting validity";
    case 3:
        return "path bound, exhaustive exp scheme";
    case 4:
        return "quad.better path cost identity";
    case 5:
        return "mixture-regret bounds on canonical paths";
    case 6:
        return "dyadic split count";
    case 7:
        return "switching oracle DP vs brute force";
    case 8:
        return "doubling oracle";
    case 9:
        return "end-to-end sublinear regret";
    case 10:
        return "cross-scheme decompositions at T=10";
    case 11:
        return "run determinism";
    default:
        return "unknown";
    }
}

CriterionResult run_criterion(int id, const VerifyOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        switch (id) {
        case 1:
            r = mixability_suite();
            break;
        case 2:
            r = weighting_validity();
            break;
        case 3:
            r = exhaustive_path_bound();
            break;
        case 4:
            r = quad_cost_identity();
            break;
        case 5:
            r = mixture_regret_bounds();
            break;
        case 6:
            r = dyadic_split_count();
            break;
        case 7:
            r = switching_dp();
            break;
        case 8:
            r = doubling_oracle_check();
            break;
        case 9:
            r = sublinearity();
            break;
        case 10:
            r = cross_scheme();
            break;
        case 11:
            r = determinism(options);
            break;
        default:
            r.detail = "no such criterion";
            break;
        }
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.id = id;
    r.name = criterion_name(id);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<CriterionResult> run_all_criteria(const VerifyOptions& options) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id)
        out.push_back(run_criterion(id, options));
    return out;
}

std::string format_result(const CriterionResult& result) {
    std::ostringstream os;
    os << (result.passed ? "PASS" : "FAIL") << "  [" << (result.id < 10 ? " " : "") << result.id << "] "
       << result.name << "  (" << result.detail << ", " << fmt(result.seconds, 3) << " s)";
    return os.str();
}

} // namespace switchmix
