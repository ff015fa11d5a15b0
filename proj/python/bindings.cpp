#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "switchmix/mixture_engine.hpp"
#include "switchmix/oracle_bench.hpp"
#include "switchmix/runner.hpp"
#include "switchmix/scheme_log.hpp"
#include "switchmix/verify.hpp"

namespace py = pybind11;
using namespace switchmix;

namespace {

class Mixture {
public:
    Mixture(const std::string& scheme, const std::string& weighting, Time horizon,
            const std::string& learner, std::size_t grid_size) {
        RunConfig cfg;
        cfg.scheme = scheme;
        cfg.weighting = weighting;
        cfg.horizon = horizon;
        cfg.learner = learner;
        cfg.grid_size = grid_size;
        cfg.validate();
        engine_ = std::make_unique<MixtureEngine>(LossFamily::square(), make_scheme(scheme, weighting, horizon),
                                                  make_learner(cfg));
    }

    StepRecord step(double x) { return engine_->step(x); }

    std::vector<double> run(const std::vector<double>& data) {
        std::vector<double> out;
        out.reserve(data.size());
        for (double x : data)
            out.push_back(engine_->step(x).theta_hat);
        return out;
    }

    std::vector<StepRecord> trace() const {
        const auto steps = engine_->trace().steps();
        return {steps.begin(), steps.end()};
    }

    const MixtureEngine& engine() const { return *engine_; }

private:
    std::unique_ptr<MixtureEngine> engine_;
};

py::dict report_dict(const RegretReport& r) {
    py::dict d;
    d["scheme"] = r.scheme;
    d["weighting"] = r.weighting;
    d["T"] = r.horizon;
    d["S"] = r.segments;
    d["mix_loss"] = r.mix_loss;
    d["oracle_loss"] = r.oracle_loss;
    d["regret"] = r.regret;
    d["path_E"] = r.path_expert_regret;
    d["W_measured"] = r.mixture_cost;
    d["W_bound"] = r.mixture_cost_bound;
    d["SE"] = r.path_segments;
    d["slack"] = r.decomposition_slack();
    return d;
}

RunConfig config_from(const std::map<std::string, std::string>& settings) {
    RunConfig cfg;
    for (const auto& [k, v] : settings)
        cfg.set(k, v);
    return cfg;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mixtures of restarted base learners for piecewise-constant estimation";

    auto base = py::register_exception<Error>(m, "SwitchmixError", PyExc_RuntimeError);
    py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<HorizonTooLarge>(m, "HorizonTooLarge", base.ptr());
    py::register_exception<RunComplete>(m, "RunComplete", base.ptr());
    py::register_exception<InfeasiblePath>(m, "InfeasiblePath", base.ptr());
    py::register_exception<BoundViolation>(m, "BoundViolation", base.ptr());

    py::class_<StepRecord>(m, "StepRecord")
        .def_readonly("t", &StepRecord::t)
        .def_readonly("theta_hat", &StepRecord::theta_hat)
        .def_readonly("x", &StepRecord::x)
        .def_readonly("loss", &StepRecord::loss)
        .def_readonly("pool_size", &StepRecord::pool_size)
        .def_readonly("log_total_weight", &StepRecord::log_total_weight)
        .def("__repr__", [](const StepRecord& r) {
            return "StepRecord(t=" + std::to_string(r.t) + ", theta_hat=" + format_real(r.theta_hat) + ")";
        });

    py::class_<Mixture>(m, "Mixture")
        .def(py::init<const std::string&, const std::string&, Time, const std::string&, std::size_t>(),
             py::arg("scheme"), py::arg("weighting"), py::arg("horizon"), py::arg("learner") = "ftl",
             py::arg("grid_size") = BaseLearner::kDefaultGridSize)
        .def("step", &Mixture::step, py::arg("x"))
        .def("run", &Mixture::run, py::arg("data"), "Steps through data; returns the estimates.")
        .def("trace", &Mixture::trace)
        .def_property_readonly("cumulative_loss",
                               [](const Mixture& mx) { return mx.engine().trace().cumulative_loss(); })
        .def_property_readonly("telescoped_loss_bound",
                               [](const Mixture& mx) { return mx.engine().telescoped_loss_bound(); })
        .def_property_readonly("pool_size", [](const Mixture& mx) { return mx.engine().pool().size(); })
        .def_property_readonly("next_time", [](const Mixture& mx) { return mx.engine().next_time(); });

    m.def(
        "mix_estimates",
        [](std::vector<double> estimates, std::vector<double> log_weights) {
            return mix_estimates(LossFamily::square(), WeightedEstimates{std::move(estimates), std::move(log_weights)});
        },
        py::arg("estimates"), py::arg("log_weights"), "Square-loss mixed estimate.");

    m.def(
        "best_fixed",
        [](const std::vector<double>& data) {
            const auto fit = best_fixed(data, LossFamily::square());
            return py::make_tuple(fit.theta, fit.loss);
        },
        py::arg("data"));

    m.def(
        "best_switching",
        [](const std::vector<double>& data, std::size_t segments) {
            const auto fit = best_switching(data, LossFamily::square(), segments);
            return py::make_tuple(fit.spec.ends, fit.spec.thetas, fit.loss);
        },
        py::arg("data"), py::arg("segments"), "Returns (ends, thetas, loss).");

    m.def(
        "dyadic_split",
        [](Time horizon, const std::vector<Time>& changes) {
            std::vector<std::tuple<Time, Time, Time>> out;
            for (const auto& s : dyadic_split(horizon, changes))
                out.emplace_back(s.start, s.length, s.end);
            return out;
        },
        py::arg("horizon"), py::arg("changes") = std::vector<Time>{}, "Returns (start, length, end) triples.");

    m.def(
        "mixture_regret_bound",
        [](const std::string& scheme, const std::string& weighting, double segments, Time horizon) {
            return make_scheme(scheme, weighting, horizon)->mixture_regret_bound(segments, static_cast<double>(horizon));
        },
        py::arg("scheme"), py::arg("weighting"), py::arg("segments"), py::arg("horizon"));

    m.def(
        "generate",
        [](std::size_t segments, Time horizon, double noise, std::uint64_t seed, const std::string& placement,
           std::vector<double> means) {
            GeneratorSpec spec;
            spec.segments = segments;
            spec.noise = noise;
            spec.placement = parse_placement(placement);
            spec.means = std::move(means);
            const auto g = generate(spec, horizon, seed);
            return py::make_tuple(g.data, g.ends, g.means);
        },
        py::arg("segments"), py::arg("horizon"), py::arg("noise") = 0.0, py::arg("seed") = 1,
        py::arg("placement") = "equal", py::arg("means") = std::vector<double>{},
        "Returns (data, ends, means).");

    m.def(
        "execute",
        [](const std::map<std::string, std::string>& settings) {
            const auto cfg = config_from(settings);
            RegretReport report;
            {
                py::gil_scoped_release release;
                report = execute(cfg).report;
            }
            return report_dict(report);
        },
        py::arg("settings"), "Runs one configuration given as key=value settings; returns the report.");

    m.def(
        "run_criterion",
        [](int id) {
            const auto r = run_criterion(id);
            return py::make_tuple(r.passed, r.detail);
        },
        py::arg("id"));
    m.attr("criterion_count") = kCriterionCount;
}
