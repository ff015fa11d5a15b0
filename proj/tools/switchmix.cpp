#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "switchmix/runner.hpp"
#include "switchmix/verify.hpp"

namespace {

struct Overrides {
    std::optional<std::string> scheme;
    std::optional<std::string> weighting;
    std::optional<std::int64_t> horizon;
    std::optional<std::size_t> segments;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::vector<std::string> settings;

    void attach(CLI::App& cmd) {
        cmd.add_option("--scheme", scheme, "exp, quad or log");
        cmd.add_option("--weighting", weighting, "naive, better, smarter or optimal");
        cmd.add_option("--horizon", horizon, "number of steps T");
        cmd.add_option("--segments", segments, "number of segments S");
        cmd.add_option("--seed", seed, "generator seed");
        cmd.add_option("--out", out, "output directory");
        cmd.add_option("--set", settings, "extra key=value setting");
    }

    void apply(switchmix::RunConfig& cfg) const {
        for (const auto& kv : settings) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw switchmix::ConfigError("--set expects key=value, got '" + kv + "'");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (scheme)
            cfg.scheme = *scheme;
        if (weighting)
            cfg.weighting = *weighting;
        if (horizon)
            cfg.horizon = *horizon;
        if (segments)
            cfg.generator.segments = *segments;
        if (seed)
            cfg.seed = *seed;
        if (out)
            cfg.out = *out;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Switching-estimation mixtures: runs, sweeps and the property suite"};
    app.require_subcommand(1);

    std::string run_config;
    Overrides run_overrides;
    auto* run_cmd = app.add_subcommand("run", "run one configuration and write trace.csv and report.csv");
    run_cmd->add_option("config", run_config, "key=value config file")->required()->check(CLI::ExistingFile);
    run_overrides.attach(*run_cmd);

    std::string sweep_config;
    Overrides sweep_overrides;
    switchmix::SweepSpec sweep_spec;
    auto* sweep_cmd = app.add_subcommand("sweep", "run every (scheme, T, S, seed) combination into sweep.csv");
    sweep_cmd->add_option("config", sweep_config, "key=value config file")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--horizons", sweep_spec.horizons, "horizons T")->required();
    sweep_cmd->add_option("--segments", sweep_spec.segments, "segment counts S")->required();
    sweep_cmd->add_option("--seeds", sweep_spec.seeds, "seeds (may be empty)")->expected(0, -1);
    sweep_cmd->add_option("--schemes", sweep_spec.schemes, "scheme:weighting pairs");
    sweep_cmd->add_option("--workers", sweep_spec.workers, "worker threads (0 = all cores)");
    sweep_cmd->add_option("--out", sweep_overrides.out, "output directory");

    std::vector<int> criteria;
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance property suite");
    verify_cmd->add_option("--criterion", criteria, "criterion ids to run (default all)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            auto cfg = switchmix::RunConfig::load(run_config);
            run_overrides.apply(cfg);
            const auto result = switchmix::run(cfg);
            std::cout << switchmix::RegretReport::kCsvHeader << '\n' << result.report.csv_row() << '\n';
            return 0;
        }
        if (*sweep_cmd) {
            auto cfg = switchmix::RunConfig::load(sweep_config);
            sweep_overrides.apply(cfg);
            const auto rows = switchmix::sweep_to_csv(cfg, sweep_spec);
            std::cout << rows.size() << " rows written to " << (cfg.out / "sweep.csv").string() << '\n';
            return 0;
        }
        if (*verify_cmd) {
            if (criteria.empty()) {
                for (int id = 1; id <= switchmix::kCriterionCount; ++id)
                    criteria.push_back(id);
            }
            bool all = true;
            for (int id : criteria) {
                const auto result = switchmix::run_criterion(id);
                std::cout << switchmix::format_result(result) << std::endl;
                all = all && result.passed;
            }
            return all ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "switchmix: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
