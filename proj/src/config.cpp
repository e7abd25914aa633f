#include "config.hpp"

#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace epifit {

using nlohmann::json;

namespace {

const json& require(const json& doc, const char* key)
{
    if (!doc.is_object() || !doc.contains(key)) {
        throw ArgumentError(std::string("config is missing '") + key + "'");
    }
    return doc.at(key);
}

double require_number(const json& doc, const char* key)
{
    const json& v = require(doc, key);
    if (!v.is_number()) {
        throw ArgumentError(std::string("config field '") + key + "' must be a number");
    }
    return v.get<double>();
}

double number_or(const json& doc, const char* key, double fallback)
{
    if (!doc.is_object() || !doc.contains(key)) {
        return fallback;
    }
    if (!doc.at(key).is_number()) {
        throw ArgumentError(std::string("config field '") + key + "' must be a number");
    }
    return doc.at(key).get<double>();
}

std::vector<const char*> model_labels(Model m)
{
    if (m == Model::Sir) {
        return {kSirLabels.begin(), kSirLabels.end()};
    }
    return {kSeirLabels.begin(), kSeirLabels.end()};
}

std::vector<std::string> model_param_names(Model m)
{
    if (m == Model::Sir) {
        return {"beta", "gamma"};
    }
    return {"beta", "tau_e", "tau_r", "tau_s", "tau_rs", "tau_d", "p_s"};
}

// Parameters either as {name: value} pairs or as an array in the model's
// canonical order (the CLI flag form).
std::vector<double> params_by_name(const json& obj, Model m)
{
    const auto names = model_param_names(m);
    if (obj.is_array()) {
        if (obj.size() != names.size()) {
            throw ArgumentError("params arity mismatch: expected " +
                                std::to_string(names.size()) + " values");
        }
        std::vector<double> out;
        for (const json& v : obj) {
            if (!v.is_number()) {
                throw ArgumentError("params entries must be numbers");
            }
            out.push_back(v.get<double>());
        }
        return out;
    }
    if (!obj.is_object() || obj.size() != names.size()) {
        throw ArgumentError("params arity mismatch: expected " +
                            std::to_string(names.size()) + " values");
    }
    std::vector<double> out;
    out.reserve(names.size());
    for (const auto& name : names) {
        if (!obj.contains(name) || !obj.at(name).is_number()) {
            throw ArgumentError("params is missing numeric field '" + name + "'");
        }
        out.push_back(obj.at(name).get<double>());
    }
    return out;
}

} // namespace

RunConfig::RunConfig(json doc) : doc_(std::move(doc))
{
    validate();
}

RunConfig RunConfig::from_json_text(const std::string& text)
{
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
        throw ArgumentError("config is not valid JSON");
    }
    return RunConfig(std::move(doc));
}

RunConfig RunConfig::from_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ArgumentError("cannot open config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

void RunConfig::validate()
{
    if (!doc_.is_object()) {
        throw ArgumentError("config must be a JSON object");
    }
    model(); // model name must be valid when present
}

void RunConfig::override_value(const std::string& pointer, const std::string& value_json)
{
    json value = json::parse(value_json, nullptr, false);
    if (value.is_discarded()) {
        throw ArgumentError("override value is not valid JSON: " + value_json);
    }
    try {
        doc_[json::json_pointer(pointer)] = std::move(value);
    } catch (const json::exception& e) {
        throw ArgumentError("bad override pointer '" + pointer + "': " + e.what());
    }
}

std::string RunConfig::echo_text() const
{
    return doc_.dump(2) + "\n";
}

Model RunConfig::model() const
{
    if (!doc_.contains("model")) {
        return Model::Sir;
    }
    const std::string name = doc_.at("model").get<std::string>();
    if (name == "sir") {
        return Model::Sir;
    }
    if (name == "seir-covid") {
        return Model::SeirCovid;
    }
    throw ArgumentError("unknown model '" + name + "' (expected sir | seir-covid)");
}

int RunConfig::workers() const
{
    return static_cast<int>(number_or(doc_, "workers", 0));
}

std::uint64_t RunConfig::scan_guard() const
{
    return static_cast<std::uint64_t>(number_or(doc_, "scan_guard", 1e8));
}

CandidateGrid RunConfig::grid() const
{
    const json& g = require(doc_, "grid");
    const json& dims = require(g, "dims");
    if (!dims.is_array() || dims.empty()) {
        throw ArgumentError("grid.dims must be a non-empty array");
    }
    std::vector<GridDim> out;
    out.reserve(dims.size());
    for (const json& d : dims) {
        GridDim dim;
        dim.name = require(d, "name").get<std::string>();
        if (d.contains("values")) {
            for (const json& v : d.at("values")) {
                dim.values.push_back(v.get<double>());
            }
        } else {
            const std::string endpoints =
                d.contains("endpoints") ? d.at("endpoints").get<std::string>() : "half-open";
            RangeEndpoints e;
            if (endpoints == "half-open") {
                e = RangeEndpoints::HalfOpen;
            } else if (endpoints == "closed") {
                e = RangeEndpoints::Closed;
            } else {
                throw ArgumentError("grid endpoints must be half-open | closed");
            }
            dim.values = build_range_grid(require_number(d, "lo"), require_number(d, "hi"),
                                          require_number(d, "step"), e);
        }
        out.push_back(std::move(dim));
    }

    const auto names = model_param_names(model());
    if (out.size() == names.size()) {
        for (const auto& dim : out) {
            if (std::find(names.begin(), names.end(), dim.name) == names.end()) {
                throw ArgumentError("grid dimension '" + dim.name +
                                    "' is not a parameter of the model");
            }
        }
    } else {
        throw ArgumentError("grid dimensions do not match the model's parameter arity");
    }
    return CandidateGrid(std::move(out));
}

DiscreteDist RunConfig::dist(std::uint64_t cardinality) const
{
    if (!doc_.contains("q") || require(doc_, "q").is_null()) {
        return DiscreteDist::uniform(cardinality);
    }
    const json& q = doc_.at("q");
    const std::string kind = q.contains("kind") ? q.at("kind").get<std::string>() : "uniform";
    if (kind == "uniform") {
        return DiscreteDist::uniform(cardinality);
    }
    if (kind == "explicit") {
        std::vector<double> weights;
        for (const json& w : require(q, "weights")) {
            weights.push_back(w.get<double>());
        }
        if (weights.size() != cardinality) {
            throw ArgumentError("q.weights length does not match the grid cardinality");
        }
        return DiscreteDist::explicit_weights(std::move(weights));
    }
    throw ArgumentError("q.kind must be uniform | explicit");
}

FitnessSpec RunConfig::fitness() const
{
    const json& f = require(doc_, "fitness");
    FitnessSpec spec;
    const std::string kind = require(f, "kind").get<std::string>();
    if (kind == "pointwise-relative-band") {
        spec.kind = FitnessKind::PointwiseRelativeBand;
        spec.r = require_number(f, "r");
    } else if (kind == "mean-distance") {
        spec.kind = FitnessKind::MeanDistance;
        spec.delta_tolerance = require_number(f, "delta_tolerance");
    } else if (kind == "sup-relative-window") {
        spec.kind = FitnessKind::SupRelativeWindow;
        spec.r = require_number(f, "r");
    } else {
        throw ArgumentError("fitness.kind must be pointwise-relative-band | mean-distance | "
                            "sup-relative-window");
    }

    const json& window = require(f, "window");
    if (!window.is_array() || window.size() != 2) {
        throw ArgumentError("fitness.window must be [first, last]");
    }
    spec.window = {window[0].get<int>(), window[1].get<int>()};
    if (spec.window.last < spec.window.first) {
        throw ArgumentError("fitness.window is empty");
    }

    const auto labels = model_labels(model());
    const json& comps = require(f, "components");
    for (const json& c : comps) {
        const std::string name = c.get<std::string>();
        const auto it = std::find_if(labels.begin(), labels.end(),
                                     [&](const char* l) { return name == l; });
        if (it == labels.end()) {
            throw ArgumentError("fitness component '" + name + "' is not a model compartment");
        }
        spec.components.push_back(static_cast<std::size_t>(it - labels.begin()));
    }
    if (spec.components.empty()) {
        throw ArgumentError("fitness.components must be non-empty");
    }

    if (f.contains("reference")) {
        const std::string ref = f.at("reference").get<std::string>();
        if (ref == "observed") {
            spec.reference = BandReference::Observed;
        } else if (ref == "simulated") {
            spec.reference = BandReference::Simulated;
        } else {
            throw ArgumentError("fitness.reference must be observed | simulated");
        }
    }
    return spec;
}

std::vector<double> RunConfig::initial_state() const
{
    const json& init = require(doc_, "initial_state");
    if (!init.is_array()) {
        throw ArgumentError("initial_state must be an array");
    }
    const std::size_t arity = model() == Model::Sir ? 3 : 6;
    if (init.size() != arity) {
        throw ArgumentError("initial_state arity mismatch for the model");
    }
    std::vector<double> out;
    for (const json& v : init) {
        out.push_back(v.get<double>());
    }
    return out;
}

double RunConfig::population() const
{
    // US default; the population is a required configuration input for
    // count-based models and can always be overridden.
    return number_or(doc_, "population", 328200000.0);
}

double RunConfig::p_d() const
{
    return require_number(doc_, "p_d");
}

int RunConfig::horizon(int fallback) const
{
    return static_cast<int>(number_or(doc_, "horizon", fallback));
}

std::uint64_t RunConfig::sampling_n() const
{
    const json& s = require(doc_, "sampling");
    return static_cast<std::uint64_t>(require_number(s, "n"));
}

std::uint64_t RunConfig::sampling_seed() const
{
    if (!doc_.contains("sampling")) {
        return 1;
    }
    return static_cast<std::uint64_t>(number_or(doc_.at("sampling"), "seed", 1));
}

std::vector<double> RunConfig::simulate_params() const
{
    return params_by_name(require(require(doc_, "simulate"), "params"), model());
}

int RunConfig::simulate_horizon() const
{
    return static_cast<int>(require_number(require(doc_, "simulate"), "horizon"));
}

double RunConfig::simulate_p_d() const
{
    return require_number(require(doc_, "simulate"), "p_d");
}

bool RunConfig::has_emit_observed() const
{
    return doc_.contains("simulate") && doc_.at("simulate").contains("emit_observed");
}

bool RunConfig::emit_observed_is_reconstructable() const
{
    if (!has_emit_observed()) {
        return false;
    }
    const json& e = doc_.at("simulate").at("emit_observed");
    return e.contains("mode") && e.at("mode").get<std::string>() == "reconstruction-consistent";
}

covid::ReconstructableSpec RunConfig::emit_reconstructable_spec() const
{
    if (model() != Model::SeirCovid) {
        throw ArgumentError("emit_observed requires the seir-covid model");
    }
    const json& e = require(doc_, "simulate").at("emit_observed");
    covid::ReconstructableSpec spec;
    const auto values = simulate_params();
    spec.params.beta = values[0];
    spec.params.tau_e = values[1];
    spec.params.tau_r = values[2];
    spec.params.tau_s = values[3];
    spec.params.tau_rs = values[4];
    spec.params.tau_d = values[5];
    spec.params.p_s = values[6];
    spec.params.p_d = simulate_p_d();
    spec.population = population();
    spec.infected_stat_0 = require_number(e, "infected_stat");
    spec.deaths_0 = require_number(e, "deaths");
    spec.recovered_stat_0 = require_number(e, "recovered_stat");
    spec.days = simulate_horizon() + 1;
    spec.start = covid::parse_date(require(e, "start_date").get<std::string>());
    spec.round_to_integers = !e.contains("round") || e.at("round").get<bool>();
    return spec;
}

covid::SyntheticSpec RunConfig::emit_observed_spec() const
{
    if (model() != Model::SeirCovid) {
        throw ArgumentError("emit_observed requires the seir-covid model");
    }
    const json& e = require(doc_, "simulate").at("emit_observed");
    covid::SyntheticSpec spec;

    const auto values = simulate_params();
    spec.params.beta = values[0];
    spec.params.tau_e = values[1];
    spec.params.tau_r = values[2];
    spec.params.tau_s = values[3];
    spec.params.tau_rs = values[4];
    spec.params.tau_d = values[5];
    spec.params.p_s = values[6];
    spec.params.p_d = simulate_p_d();
    spec.population = population();

    const auto init = initial_state();
    std::copy(init.begin(), init.end(), spec.initial.begin());
    spec.initial_recovered_stat = number_or(e, "initial_recovered_stat", 0.0);
    spec.days = simulate_horizon() + 1;
    spec.start = covid::parse_date(require(e, "start_date").get<std::string>());
    spec.noise = number_or(e, "noise", 0.0);
    spec.noise_seed = static_cast<std::uint64_t>(number_or(e, "noise_seed", 1.0));
    if (e.contains("beta_schedule")) {
        for (const json& pair : e.at("beta_schedule")) {
            spec.beta_schedule.emplace_back(pair[0].get<int>(), pair[1].get<double>());
        }
    }
    return spec;
}

SirTrajectory RunConfig::observed_sir(int needed_last_day) const
{
    const json& obs = require(doc_, "observed");
    const json& gen = require(obs, "generator");
    const auto values = params_by_name(require(gen, "params"), Model::Sir);
    const int horizon = static_cast<int>(number_or(gen, "horizon",
                                                   static_cast<double>(needed_last_day - 1)));
    const auto init = initial_state();
    return simulate_sir({values[0], values[1]}, {init[0], init[1], init[2]}, horizon, 1);
}

SeirTrajectory RunConfig::observed_seir(int needed_last_day) const
{
    const json& obs = require(doc_, "observed");
    const json& gen = require(obs, "generator");
    const auto values = params_by_name(require(gen, "params"), Model::SeirCovid);
    SeirCovidParams p;
    p.beta = values[0];
    p.tau_e = values[1];
    p.tau_r = values[2];
    p.tau_s = values[3];
    p.tau_rs = values[4];
    p.tau_d = values[5];
    p.p_s = values[6];
    p.p_d = require_number(gen, "p_d");
    const int horizon = static_cast<int>(number_or(gen, "horizon",
                                                   static_cast<double>(needed_last_day - 1)));
    const auto init = initial_state();
    SeirState x0;
    std::copy(init.begin(), init.end(), x0.begin());
    return simulate_seir(rates_from_params(p, population()), x0, horizon, 1);
}

RunConfig::CovidConfig RunConfig::covid_config() const
{
    const json& c = require(doc_, "covid");
    CovidConfig out;
    out.data_path = require(c, "data").get<std::string>();
    out.seed = sampling_seed();

    out.options.population = population();
    out.options.n_estimate = static_cast<std::uint64_t>(number_or(c, "n", 500000));
    out.options.n_pre = static_cast<std::uint64_t>(number_or(c, "n_pre", 100000));
    out.options.inflation = number_or(c, "inflation", 1.1);
    out.options.horizon = static_cast<int>(number_or(c, "horizon", 730));
    out.options.workers = workers();
    const std::string mode =
        c.contains("p_d_mode") ? c.at("p_d_mode").get<std::string>() : "weekly";
    if (mode == "weekly") {
        out.options.p_d_mode = covid::PdMode::WeeklyIncidence;
    } else if (mode == "cumulative") {
        out.options.p_d_mode = covid::PdMode::Cumulative;
    } else {
        throw ArgumentError("covid.p_d_mode must be weekly | cumulative");
    }

    const json& t0 = require(c, "t0");
    if (t0.is_array()) {
        for (const json& d : t0) {
            out.t0_dates.push_back(covid::parse_date(d.get<std::string>()));
        }
    } else if (t0.is_object()) {
        const covid::Date start = covid::parse_date(require(t0, "start").get<std::string>());
        const covid::Date end = covid::parse_date(require(t0, "end").get<std::string>());
        const int stride = static_cast<int>(number_or(t0, "stride", 7));
        if (stride < 1) {
            throw ArgumentError("covid.t0.stride must be at least 1");
        }
        for (int day = covid::days_from_civil(start); day <= covid::days_from_civil(end);
             day += stride) {
            out.t0_dates.push_back(covid::civil_from_days(day));
        }
    } else {
        throw ArgumentError("covid.t0 must be a date list or {start, end, stride}");
    }
    if (out.t0_dates.empty()) {
        throw ArgumentError("covid.t0 selects no fitting dates");
    }
    return out;
}

RunConfig::BoundsConfig RunConfig::bounds_config() const
{
    BoundsConfig out;
    if (!doc_.contains("bounds")) {
        throw ArgumentError("config is missing 'bounds'");
    }
    const json& b = doc_.at("bounds");
    if (b.contains("ops")) {
        for (const json& op : b.at("ops")) {
            out.ops.push_back(op.get<std::string>());
        }
    }
    if (b.contains("query")) {
        const json& q = b.at("query");
        const auto opt = [&](const char* key) -> std::optional<double> {
            if (q.contains(key)) {
                return q.at(key).get<double>();
            }
            return std::nullopt;
        };
        out.epsilon = opt("epsilon");
        out.delta = opt("delta");
        out.c = opt("c");
        out.g = opt("g");
        out.p = opt("p");
        out.n = opt("n");
        out.h_cardinality = opt("h_cardinality");
        out.z_size = opt("z");
        out.trials = opt("trials");
    }
    if (b.contains("index_rule")) {
        const std::string rule = b.at("index_rule").get<std::string>();
        if (rule == "nearest") {
            out.index_rule = bounds::BinomialIndexRule::Nearest;
        } else if (rule == "ceiling") {
            out.index_rule = bounds::BinomialIndexRule::Ceiling;
        } else if (rule == "continuous") {
            out.index_rule = bounds::BinomialIndexRule::Continuous;
        } else {
            throw ArgumentError("bounds.index_rule must be nearest | ceiling | continuous");
        }
    }
    if (b.contains("curve")) {
        const json& c = b.at("curve");
        BoundsConfig::Curve curve;
        curve.delta = number_or(c, "delta", 0.1);
        curve.g = number_or(c, "g", 0.001);
        curve.p = number_or(c, "p", 1000);
        curve.c_min = number_or(c, "c_min", 0.7);
        curve.c_max = number_or(c, "c_max", 0.995);
        curve.c_step = number_or(c, "c_step", 0.005);
        out.curve = curve;
    }
    return out;
}

} // namespace epifit
