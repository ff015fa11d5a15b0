#include "switchmix/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "switchmix/scheme_exp.hpp"
#include "switchmix/scheme_log.hpp"
#include "switchmix/scheme_quad.hpp"

namespace switchmix {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform_symmetric(std::mt19937_64& rng, double half_width) {
    return half_width * (2.0 * uniform01(rng) - 1.0);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    return std::min(n - 1, static_cast<std::uint64_t>(uniform01(rng) * static_cast<double>(n)));
}

std::vector<Time> boundaries_with(BoundaryPlacement placement, std::size_t segments, Time horizon,
                                  std::mt19937_64& rng) {
    const auto S = static_cast<Time>(segments);
    if (S < 1 || S > horizon)
        throw ConfigError("segments must be in [1, T]");
    std::vector<Time> ends;
    ends.reserve(segments);
    switch (placement) {
    case BoundaryPlacement::Equal:
        for (Time s = 1; s <= S; ++s)
            ends.push_back(s * horizon / S);
        break;
    case BoundaryPlacement::Geometric: {
        // Lengths proportional to 1, 2, 4, ...: many short segments, one long.
        const double total = std::ldexp(1.0, static_cast<int>(S)) - 1.0;
        Time prev = 0;
        for (Time s = 1; s < S; ++s) {
            const double frac = (std::ldexp(1.0, static_cast<int>(s)) - 1.0) / total;
            Time e = static_cast<Time>(std::floor(frac * static_cast<double>(horizon)));
            e = std::clamp(e, prev + 1, horizon - (S - s));
            ends.push_back(e);
            prev = e;
        }
        ends.push_back(horizon);
        break;
    }
    case BoundaryPlacement::Random: {
        std::vector<Time> cuts(static_cast<std::size_t>(horizon - 1));
        std::iota(cuts.begin(), cuts.end(), Time{1});
        for (Time i = 0; i < S - 1; ++i) {
            const auto remaining = static_cast<std::uint64_t>(cuts.size()) - static_cast<std::uint64_t>(i);
            const auto j = static_cast<std::size_t>(i) + uniform_below(rng, remaining);
            std::swap(cuts[static_cast<std::size_t>(i)], cuts[j]);
        }
        ends.assign(cuts.begin(), cuts.begin() + (S - 1));
        std::sort(ends.begin(), ends.end());
        ends.push_back(horizon);
        break;
    }
    }
    return ends;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename Int>
Int parse_integer(const std::string& key, const std::string& value) {
    Int v{};
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ConfigError("bad integer for " + key + ": '" + value + "'");
    return v;
}

double parse_real(const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v))
        throw ConfigError("bad number for " + key + ": '" + value + "'");
    return v;
}

const std::map<std::string, std::vector<std::string>>& weightings_by_scheme() {
    static const std::map<std::string, std::vector<std::string>> table{
        {"exp", {"naive", "better", "optimal"}},
        {"quad", {"naive", "better", "optimal"}},
        {"log", {"naive", "better", "smarter", "optimal"}},
    };
    return table;
}

std::vector<Observation> read_observations(const std::filesystem::path& file, Time horizon) {
    std::ifstream in(file);
    if (!in)
        throw ConfigError("cannot open data file " + file.string());
    std::vector<Observation> data;
    std::string line;
    while (std::getline(in, line) && static_cast<Time>(data.size()) < horizon) {
        line = trim(line);
        if (line.empty() || line.front() == '#')
            continue;
        data.push_back(parse_real("data", line));
    }
    if (static_cast<Time>(data.size()) < horizon)
        throw ConfigError("data file holds " + std::to_string(data.size()) +
                          " observations, fewer than the horizon");
    return data;
}

void write_report_csv(const std::filesystem::path& file, const RegretReport& report) {
    std::ofstream out(file);
    if (!out)
        throw Error("cannot write " + file.string());
    out << RegretReport::kCsvHeader << '\n' << report.csv_row() << '\n';
    if (!out)
        throw Error("failed writing " + file.string());
}

} // namespace

void GeneratorSpec::validate() const {
    if (segments < 1)
        throw ConfigError("generator needs at least one segment");
    if (!means.empty() && means.size() != segments)
        throw ConfigError("generator needs one mean per segment or 'random'");
    for (double m : means) {
        if (!(m >= -1.0 && m <= 1.0))
            throw ConfigError("segment means must lie in [-1, 1]");
    }
    if (!(noise >= 0.0 && noise <= 1.0))
        throw ConfigError("noise amplitude must lie in [0, 1]");
}

std::vector<Time> place_boundaries(BoundaryPlacement placement, std::size_t segments, Time horizon,
                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return boundaries_with(placement, segments, horizon, rng);
}

GeneratedData generate(const GeneratorSpec& spec, Time horizon, std::uint64_t seed) {
    spec.validate();
    if (horizon < 1)
        throw ConfigError("horizon must be at least 1");
    std::mt19937_64 rng(seed);
    GeneratedData out;
    out.ends = boundaries_with(spec.placement, spec.segments, horizon, rng);
    out.means = spec.means;
    if (out.means.empty()) {
        for (std::size_t s = 0; s < spec.segments; ++s)
            out.means.push_back(uniform_symmetric(rng, 1.0));
    }
    out.data.reserve(static_cast<std::size_t>(horizon));
    std::size_t s = 0;
    for (Time t = 1; t <= horizon; ++t) {
        while (t > out.ends[s])
            ++s;
        const double x = out.means[s] + (spec.noise > 0.0 ? uniform_symmetric(rng, spec.noise) : 0.0);
        out.data.push_back(std::clamp(x, -1.0, 1.0));
    }
    return out;
}

std::string to_string(BoundaryPlacement placement) {
    switch (placement) {
    case BoundaryPlacement::Equal:
        return "equal";
    case BoundaryPlacement::Random:
        return "random";
    case BoundaryPlacement::Geometric:
        return "geometric";
    }
    return "";
}

BoundaryPlacement parse_placement(const std::string& name) {
    if (name == "equal")
        return BoundaryPlacement::Equal;
    if (name == "random")
        return BoundaryPlacement::Random;
    if (name == "geometric")
        return BoundaryPlacement::Geometric;
    throw ConfigError("unknown boundary placement '" + name + "'");
}

void RunConfig::set(const std::string& key, const std::string& raw) {
    const std::string value = trim(raw);
    if (key == "loss") {
        loss = value;
    } else if (key == "scheme") {
        scheme = value;
    } else if (key == "weighting") {
        weighting = value;
    } else if (key == "horizon") {
        horizon = parse_integer<Time>(key, value);
    } else if (key == "learner") {
        learner = value;
    } else if (key == "grid_size") {
        grid_size = parse_integer<std::size_t>(key, value);
    } else if (key == "data") {
        data_file = (value == "synthetic") ? std::string{} : value;
    } else if (key == "segments") {
        generator.segments = parse_integer<std::size_t>(key, value);
    } else if (key == "means") {
        generator.means.clear();
        if (value != "random") {
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ','))
                generator.means.push_back(parse_real(key, trim(item)));
        }
    } else if (key == "noise") {
        generator.noise = parse_real(key, value);
    } else if (key == "placement") {
        generator.placement = parse_placement(value);
    } else if (key == "seed") {
        seed = parse_integer<std::uint64_t>(key, value);
    } else if (key == "out") {
        out = value;
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void RunConfig::validate() const {
    if (loss != "square")
        throw ConfigError("only the square loss is available from the runner");
    const auto& table = weightings_by_scheme();
    const auto it = table.find(scheme);
    if (it == table.end())
        throw ConfigError("unknown scheme '" + scheme + "'");
    if (std::find(it->second.begin(), it->second.end(), weighting) == it->second.end())
        throw ConfigError("weighting '" + weighting + "' does not belong to scheme '" + scheme + "'");
    if (horizon < 1)
        throw ConfigError("horizon must be at least 1");
    if (scheme == "log" && horizon < 2)
        throw ConfigError("the logarithmic scheme needs a horizon of at least 2");
    if (scheme == "exp" && horizon > exp_horizon_cap())
        throw HorizonTooLarge("exponential scheme horizon " + std::to_string(horizon) + " exceeds cap " +
                              std::to_string(exp_horizon_cap()) + " (set SWITCHMIX_EXP_CAP to raise it)");
    if (learner != "ftl" && learner != "grid")
        throw ConfigError("learner must be 'ftl' or 'grid'");
    if (learner == "grid" && grid_size < 2)
        throw ConfigError("grid learner needs at least two points");
    generator.validate();
    if (static_cast<Time>(generator.segments) > horizon)
        throw ConfigError("more segments than steps");
}

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig config;
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line.front() == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        config.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return config;
}

RunConfig RunConfig::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw ConfigError("cannot open config " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::shared_ptr<const HyperExpertScheme> make_scheme(const std::string& scheme,
                                                     const std::string& weighting, Time horizon) {
    if (scheme == "exp") {
        const ExpWeighting w = weighting == "naive"    ? ExpWeighting::Naive
                               : weighting == "better" ? ExpWeighting::Better
                                                       : ExpWeighting::Optimal;
        return std::make_shared<ExpScheme>(w, horizon, exp_horizon_cap());
    }
    if (scheme == "quad") {
        const QuadWeighting w = weighting == "naive"    ? QuadWeighting::Naive
                                : weighting == "better" ? QuadWeighting::Better
                                                        : QuadWeighting::Optimal;
        return std::make_shared<QuadScheme>(w, horizon);
    }
    if (scheme == "log") {
        const LogWeighting w = weighting == "naive"     ? LogWeighting::Naive
                               : weighting == "better"  ? LogWeighting::Better
                               : weighting == "smarter" ? LogWeighting::Smarter
                                                        : LogWeighting::Optimal;
        return std::make_shared<LogScheme>(w);
    }
    throw ConfigError("unknown scheme '" + scheme + "'");
}

BaseLearner make_learner(const RunConfig& config) {
    return config.learner == "grid" ? BaseLearner::grid_aggregation(config.grid_size)
                                    : BaseLearner::follow_the_leader();
}

RunResult execute(const RunConfig& config) {
    config.validate();
    const LossFamily family = LossFamily::square();
    RunResult result;
    std::vector<Observation> data;
    if (config.data_file.empty()) {
        GeneratedData gen = generate(config.generator, config.horizon, config.seed);
        data = std::move(gen.data);
        result.spec = SegmentSpec::fitted(data, family, std::move(gen.ends));
    } else {
        data = read_observations(config.data_file, config.horizon);
        for (Observation x : data) {
            if (!family.in_domain(x))
                throw ConfigError("data file holds an observation outside [-1, 1]");
        }
        result.spec = best_switching(data, family, config.generator.segments).spec;
    }

    const auto scheme = make_scheme(config.scheme, config.weighting, config.horizon);
    const BaseLearner learner = make_learner(config);
    MixtureEngine engine(family, scheme, learner);
    result.trace = engine.run(data);
    result.report = decompose_regret(result.trace, result.spec, *scheme, family, learner);
    return result;
}

RunResult run(const RunConfig& config) {
    RunResult result = execute(config);
    std::error_code ec;
    std::filesystem::create_directories(config.out, ec);
    if (ec)
        throw Error("cannot create output directory " + config.out.string() + ": " + ec.message());
    {
        const auto file = config.out / "trace.csv";
        std::ofstream out(file);
        if (!out)
            throw Error("cannot write " + file.string());
        result.trace.write_csv(out);
        if (!out)
            throw Error("failed writing " + file.string());
    }
    write_report_csv(config.out / "report.csv", result.report);
    return result;
}

std::vector<SweepRow> sweep(const RunConfig& base, const SweepSpec& spec) {
    std::vector<std::pair<std::string, std::string>> pairs;
    if (spec.schemes.empty()) {
        pairs.emplace_back(base.scheme, base.weighting);
    } else {
        for (const auto& item : spec.schemes) {
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw ConfigError("scheme list entries look like scheme:weighting, got '" + item + "'");
            pairs.emplace_back(item.substr(0, colon), item.substr(colon + 1));
        }
    }

    std::vector<RunConfig> jobs;
    for (const auto& [scheme, weighting] : pairs) {
        for (Time T : spec.horizons) {
            for (std::size_t S : spec.segments) {
                for (std::uint64_t seed : spec.seeds) {
                    RunConfig cfg = base;
                    cfg.scheme = scheme;
                    cfg.weighting = weighting;
                    cfg.horizon = T;
                    cfg.generator.segments = S;
                    cfg.seed = seed;
                    cfg.validate();
                    jobs.push_back(std::move(cfg));
                }
            }
        }
    }

    std::vector<SweepRow> rows(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                rows[i] = SweepRow{execute(jobs[i]).report, jobs[i].seed};
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned n = spec.workers ? spec.workers : std::max(1U, std::thread::hardware_concurrency());
    n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, jobs.size())));
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < n; ++i)
        pool.emplace_back(worker);
    worker();
    pool.clear();
    for (const auto& e : errors) {
        if (e)
            std::rethrow_exception(e);
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kSweepCsvHeader << '\n';
    for (const auto& row : rows)
        out << row.report.csv_row() << ',' << row.seed << ',' << format_real(row.regret_per_step()) << '\n';
}

std::vector<SweepRow> sweep_to_csv(const RunConfig& base, const SweepSpec& spec) {
    auto rows = sweep(base, spec);
    std::error_code ec;
    std::filesystem::create_directories(base.out, ec);
    if (ec)
        throw Error("cannot create output directory " + base.out.string() + ": " + ec.message());
    const auto file = base.out / "sweep.csv";
    std::ofstream out(file);
    if (!out)
        throw Error("cannot write " + file.string());
    write_sweep_csv(out, rows);
    if (!out)
        throw Error("failed writing " + file.string());
    return rows;
}

} // namespace switchmix
