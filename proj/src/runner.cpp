#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "bounds.hpp"
#include "covid.hpp"
#include "errors.hpp"
#include "estimator.hpp"
#include "fitness.hpp"
#include "stats.hpp"
#include "textio.hpp"

namespace epifit {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- helpers

std::vector<std::string> grid_param_names(const CandidateGrid& grid)
{
    std::vector<std::string> names;
    names.reserve(grid.rank());
    for (const auto& dim : grid.dims()) {
        names.push_back(dim.name);
    }
    return names;
}

json params_object(const std::vector<std::string>& names, const std::vector<double>& values)
{
    json obj = json::object();
    for (std::size_t i = 0; i < names.size(); ++i) {
        obj[names[i]] = values[i];
    }
    return obj;
}

ResultDoc config_echo(const RunConfig& config)
{
    return {"config.json", config.echo_text()};
}

// Model evaluation plumbing shared by scan and estimate: simulates a
// candidate over the fitness window and scores it.
struct SirExperiment {
    SirState initial{};
    SirTrajectory observed;
    FitnessSpec spec;
    int eval_horizon = 0;
    int summary_horizon = 0;
    std::size_t beta_dim = 0;
    std::size_t gamma_dim = 0;
};

SirExperiment make_sir_experiment(const RunConfig& config, const CandidateGrid& grid)
{
    SirExperiment ex;
    const auto init = config.initial_state();
    std::copy(init.begin(), init.end(), ex.initial.begin());
    ex.spec = config.fitness();
    ex.observed = config.observed_sir(ex.spec.window.last);
    ex.eval_horizon = ex.spec.window.last - 1; // day labels start at 1
    ex.summary_horizon = config.horizon(60);
    bool have_beta = false, have_gamma = false;
    for (std::size_t d = 0; d < grid.dims().size(); ++d) {
        if (grid.dims()[d].name == "beta") {
            ex.beta_dim = d;
            have_beta = true;
        } else if (grid.dims()[d].name == "gamma") {
            ex.gamma_dim = d;
            have_gamma = true;
        }
    }
    if (!have_beta || !have_gamma) {
        throw ArgumentError("SIR grid needs 'beta' and 'gamma' dimensions");
    }
    return ex;
}

Evaluator sir_evaluator(const SirExperiment& ex)
{
    return [&ex](std::uint64_t, std::span<const double> values) {
        const SirParams params{values[ex.beta_dim], values[ex.gamma_dim]};
        const SirTrajectory sim = simulate_sir(params, ex.initial, ex.eval_horizon, 1);
        Evaluation out;
        out.good = evaluate_fitness(sim, ex.observed, ex.spec);
        out.worst_rel_err =
            worst_relative_error(sim, ex.observed, ex.spec.window, ex.spec.components);
        return out;
    };
}

Summarizer sir_summarizer(const SirExperiment& ex)
{
    return [&ex](std::uint64_t, std::span<const double> values) {
        const SirParams params{values[ex.beta_dim], values[ex.gamma_dim]};
        const SirTrajectory traj = simulate_sir(params, ex.initial, ex.summary_horizon, 1);
        TrajectorySummary summary;
        // Earliest day with the most simultaneously infected individuals;
        // day numbering starts at 1 for the initial state.
        summary.peak_day = traj.start_time;
        summary.peak_value = traj.states.front()[1];
        for (int day = traj.start_time; day <= traj.end_time(); ++day) {
            const double infected = traj.at_day(day)[1];
            if (infected > summary.peak_value) {
                summary.peak_value = infected;
                summary.peak_day = day;
            }
        }
        summary.final_state.assign(traj.states.back().begin(), traj.states.back().end());
        return summary;
    };
}

struct SeirExperiment {
    SeirState initial{};
    SeirTrajectory observed;
    FitnessSpec spec;
    SeirCovidParams base; // p_d and population carried through
    double population = 0;
    int eval_horizon = 0;
    int summary_horizon = 0;
    std::array<std::size_t, 7> dim_of{};
};

SeirExperiment make_seir_experiment(const RunConfig& config, const CandidateGrid& grid)
{
    SeirExperiment ex;
    const auto init = config.initial_state();
    std::copy(init.begin(), init.end(), ex.initial.begin());
    ex.spec = config.fitness();
    ex.observed = config.observed_seir(ex.spec.window.last);
    ex.eval_horizon = ex.spec.window.last - 1;
    ex.summary_horizon = config.horizon(365);
    ex.population = config.population();
    ex.base.p_d = config.p_d();

    static const std::array<const char*, 7> fields = {"beta",   "tau_e", "tau_r", "tau_s",
                                                      "tau_rs", "tau_d", "p_s"};
    for (std::size_t f = 0; f < fields.size(); ++f) {
        bool found = false;
        for (std::size_t d = 0; d < grid.dims().size(); ++d) {
            if (grid.dims()[d].name == fields[f]) {
                ex.dim_of[f] = d;
                found = true;
                break;
            }
        }
        if (!found) {
            throw ArgumentError(std::string("SEIR grid needs dimension '") + fields[f] + "'");
        }
    }
    return ex;
}

SeirCovidParams seir_params_at(const SeirExperiment& ex, std::span<const double> values)
{
    SeirCovidParams p = ex.base;
    p.beta = values[ex.dim_of[0]];
    p.tau_e = values[ex.dim_of[1]];
    p.tau_r = values[ex.dim_of[2]];
    p.tau_s = values[ex.dim_of[3]];
    p.tau_rs = values[ex.dim_of[4]];
    p.tau_d = values[ex.dim_of[5]];
    p.p_s = values[ex.dim_of[6]];
    return p;
}

Evaluator seir_evaluator(const SeirExperiment& ex)
{
    return [&ex](std::uint64_t, std::span<const double> values) {
        const auto rates = rates_from_params(seir_params_at(ex, values), ex.population);
        const SeirTrajectory sim = simulate_seir(rates, ex.initial, ex.eval_horizon, 1);
        Evaluation out;
        out.good = evaluate_fitness(sim, ex.observed, ex.spec);
        out.worst_rel_err =
            worst_relative_error(sim, ex.observed, ex.spec.window, ex.spec.components);
        return out;
    };
}

Summarizer seir_summarizer(const SeirExperiment& ex)
{
    return [&ex](std::uint64_t, std::span<const double> values) {
        const auto rates = rates_from_params(seir_params_at(ex, values), ex.population);
        const SeirTrajectory traj = simulate_seir(rates, ex.initial, ex.summary_horizon, 1);
        TrajectorySummary summary;
        summary.peak_day = covid::deaths_peak_day(traj, traj.start_time);
        summary.peak_value = traj.at_day(summary.peak_day)[5] -
                             traj.at_day(summary.peak_day - 1)[5];
        summary.final_state.assign(traj.states.back().begin(), traj.states.back().end());
        return summary;
    };
}

json goodset_json(const GoodSet& set, const RunConfig& config,
                  const std::vector<std::string>& names)
{
    json doc;
    doc["command"] = "estimate";
    doc["model"] = config.doc().contains("model") ? config.doc().at("model") : json("sir");
    doc["fitness"] = config.doc().at("fitness");
    doc["seed"] = set.seed;
    doc["n_sampled"] = set.n_sampled;
    doc["n_distinct_good"] = set.n_distinct_good();
    json accepted = json::array();
    for (const auto& a : set.accepted) {
        json entry;
        entry["index"] = a.index;
        entry["params"] = params_object(names, a.params);
        entry["worst_relative_error"] = a.worst_rel_err;
        entry["multiplicity"] = a.multiplicity;
        entry["first_draw"] = a.first_draw;
        entry["summary"] = {{"peak_day", a.summary.peak_day},
                            {"peak_value", a.summary.peak_value},
                            {"final_state", a.summary.final_state}};
        accepted.push_back(std::move(entry));
    }
    doc["accepted"] = std::move(accepted);
    return doc;
}

std::string goodset_csv(const GoodSet& set, const std::vector<std::string>& names,
                        const std::vector<const char*>& labels)
{
    std::ostringstream out;
    out << "index";
    for (const auto& n : names) {
        out << ',' << n;
    }
    out << ",multiplicity,first_draw,worst_relative_error,peak_day,peak_value";
    for (const char* l : labels) {
        out << ",final_" << l;
    }
    out << '\n';
    for (const auto& a : set.accepted) {
        out << a.index;
        for (double v : a.params) {
            out << ',' << g17(v);
        }
        out << ',' << a.multiplicity << ',' << a.first_draw << ',' << g17(a.worst_rel_err)
            << ',' << a.summary.peak_day << ',' << g17(a.summary.peak_value);
        for (double v : a.summary.final_state) {
            out << ',' << g17(v);
        }
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------- commands

std::vector<ResultDoc> run_simulate(const RunConfig& config)
{
    std::vector<ResultDoc> docs;
    const int horizon = config.simulate_horizon();
    std::ostringstream csv;

    if (config.model() == Model::Sir) {
        const auto values = config.simulate_params();
        const auto init = config.initial_state();
        const auto traj = simulate_sir({values[0], values[1]},
                                       {init[0], init[1], init[2]}, horizon, 1);
        csv << "t,S,I,R\n";
        for (int day = traj.start_time; day <= traj.end_time(); ++day) {
            const auto& s = traj.at_day(day);
            csv << day << ',' << g17(s[0]) << ',' << g17(s[1]) << ',' << g17(s[2]) << '\n';
        }
        docs.push_back({"trajectory.csv", csv.str()});
    } else if (config.has_emit_observed()) {
        // Synthetic observed-series generation: day numbering follows the
        // series positions so rows align with the emitted dates.
        covid::ObservedSeries series;
        SeirTrajectory truth;
        if (config.emit_observed_is_reconstructable()) {
            const auto spec = config.emit_reconstructable_spec();
            auto data = covid::synthesize_reconstructable(spec);
            series = std::move(data.series);
            truth = simulate_seir(rates_from_params(spec.params, spec.population),
                                  data.initial_state, spec.days - 1, 0);
        } else {
            const auto spec = config.emit_observed_spec();
            auto data = covid::synthesize_observed(spec);
            series = std::move(data.series);
            truth = std::move(data.truth);
        }
        csv << "t,S,E,I,I_s,R,D\n";
        for (int day = truth.start_time; day <= truth.end_time(); ++day) {
            const auto& s = truth.at_day(day);
            csv << day;
            for (double v : s) {
                csv << ',' << g17(v);
            }
            csv << '\n';
        }
        std::ostringstream obs;
        obs << "date,confirmed,deaths,recovered\n";
        for (std::size_t t = 0; t < series.size(); ++t) {
            obs << covid::format_date(series.date_at(t)) << ','
                << static_cast<long long>(series.confirmed_cum[t]) << ','
                << static_cast<long long>(series.deaths_cum[t]) << ','
                << static_cast<long long>(series.recovered_cum[t]) << '\n';
        }
        docs.push_back({"observed.csv", obs.str()});
        docs.push_back({"trajectory.csv", csv.str()});
    } else {
        const auto values = config.simulate_params();
        SeirCovidParams p;
        p.beta = values[0];
        p.tau_e = values[1];
        p.tau_r = values[2];
        p.tau_s = values[3];
        p.tau_rs = values[4];
        p.tau_d = values[5];
        p.p_s = values[6];
        p.p_d = config.simulate_p_d();
        const auto init = config.initial_state();
        SeirState x0;
        std::copy(init.begin(), init.end(), x0.begin());
        const auto traj =
            simulate_seir(rates_from_params(p, config.population()), x0, horizon, 1);
        csv << "t,S,E,I,I_s,R,D\n";
        for (int day = traj.start_time; day <= traj.end_time(); ++day) {
            csv << day;
            for (double v : traj.at_day(day)) {
                csv << ',' << g17(v);
            }
            csv << '\n';
        }
        docs.push_back({"trajectory.csv", csv.str()});
    }
    docs.push_back(config_echo(config));
    return docs;
}

std::vector<ResultDoc> run_scan(const RunConfig& config)
{
    const CandidateGrid grid = config.grid();
    const DiscreteDist dist = config.dist(grid.cardinality());
    const auto names = grid_param_names(grid);

    ScanResult result;
    if (config.model() == Model::Sir) {
        const auto ex = make_sir_experiment(config, grid);
        result = exhaustive_scan(grid, dist, sir_evaluator(ex), config.scan_guard(),
                                 config.workers());
    } else {
        const auto ex = make_seir_experiment(config, grid);
        result = exhaustive_scan(grid, dist, seir_evaluator(ex), config.scan_guard(),
                                 config.workers());
    }

    json doc;
    doc["command"] = "scan";
    doc["model"] = config.doc().contains("model") ? config.doc().at("model") : json("sir");
    doc["fitness"] = config.doc().at("fitness");
    doc["cardinality"] = grid.cardinality();
    doc["p"] = result.good_count;
    doc["G"] = result.good_mass;
    doc["good_indices"] = result.good_indices;

    std::ostringstream csv;
    csv << "index";
    for (const auto& n : names) {
        csv << ',' << n;
    }
    csv << '\n';
    for (std::uint64_t index : result.good_indices) {
        csv << index;
        for (double v : grid.param_at(index)) {
            csv << ',' << g17(v);
        }
        csv << '\n';
    }

    std::vector<ResultDoc> docs;
    docs.push_back({"scan.json", doc.dump(2) + "\n"});
    docs.push_back({"good_params.csv", csv.str()});
    docs.push_back(config_echo(config));
    return docs;
}

std::vector<ResultDoc> run_estimate(const RunConfig& config)
{
    const CandidateGrid grid = config.grid();
    const DiscreteDist dist = config.dist(grid.cardinality());
    const auto names = grid_param_names(grid);

    GoodSet set;
    std::vector<const char*> labels;
    if (config.model() == Model::Sir) {
        const auto ex = make_sir_experiment(config, grid);
        set = rejection_estimate(grid, dist, config.sampling_n(), config.sampling_seed(),
                                 sir_evaluator(ex), sir_summarizer(ex), config.workers());
        labels.assign(kSirLabels.begin(), kSirLabels.end());
    } else {
        const auto ex = make_seir_experiment(config, grid);
        set = rejection_estimate(grid, dist, config.sampling_n(), config.sampling_seed(),
                                 seir_evaluator(ex), seir_summarizer(ex), config.workers());
        labels.assign(kSeirLabels.begin(), kSeirLabels.end());
    }

    std::vector<ResultDoc> docs;
    docs.push_back({"goodset.json", goodset_json(set, config, names).dump(2) + "\n"});
    docs.push_back({"goodset.csv", goodset_csv(set, names, labels)});
    docs.push_back(config_echo(config));
    return docs;
}

std::vector<ResultDoc> run_bounds(const RunConfig& config)
{
    const auto bc = config.bounds_config();
    const auto need = [&](const std::optional<double>& field, const char* name) {
        if (!field) {
            throw ArgumentError(std::string("bounds query is missing '") + name + "'");
        }
        return *field;
    };
    const auto h_card = [&]() {
        if (bc.h_cardinality) {
            return *bc.h_cardinality;
        }
        if (bc.p) {
            return std::pow(2.0, *bc.p);
        }
        throw ArgumentError("bounds query needs h_cardinality or p");
    };

    json results = json::object();
    const auto want = [&](const char* op, bool computable) {
        if (!bc.ops.empty()) {
            return std::find(bc.ops.begin(), bc.ops.end(), op) != bc.ops.end();
        }
        return computable;
    };
    const auto with_ceil = [](double v) {
        return json{{"value", v}, {"ceil", std::ceil(v)}};
    };

    if (want("theorem1", bc.n && bc.epsilon && (bc.h_cardinality || bc.p))) {
        results["theorem1"] =
            bounds::theorem1_bound(need(bc.n, "n"), need(bc.epsilon, "epsilon"), h_card());
    }
    if (want("corollary", bc.epsilon && bc.delta && (bc.h_cardinality || bc.p))) {
        results["corollary_m"] = with_ceil(bounds::corollary_sample_size(
            need(bc.epsilon, "epsilon"), need(bc.delta, "delta"), h_card()));
    }
    if (want("eq9", bc.c && bc.delta && bc.g && bc.p)) {
        results["eq9_m"] = with_ceil(bounds::eq9_sample_size(
            need(bc.c, "c"), need(bc.delta, "delta"), need(bc.g, "g"), need(bc.p, "p")));
    }
    if (want("eq10", bc.c && bc.delta && bc.g && bc.p)) {
        results["eq10_m"] = with_ceil(
            bounds::eq10_sample_size(need(bc.c, "c"), need(bc.delta, "delta"),
                                     need(bc.g, "g"), need(bc.p, "p"), bc.index_rule));
    }
    if (want("prop2", bc.c && bc.g && bc.p && bc.n)) {
        results["prop2"] =
            bounds::prop2_probability_bound(need(bc.c, "c"), need(bc.g, "g"),
                                            need(bc.p, "p"), need(bc.n, "n"), bc.index_rule);
    }
    if (want("prop3", bc.n && bc.p)) {
        const auto sides = bounds::log_binomial_prefix_bound(
            static_cast<std::uint64_t>(need(bc.n, "n")),
            static_cast<std::uint64_t>(need(bc.p, "p")));
        results["prop3"] = {{"lhs", sides.lhs}, {"rhs", sides.rhs}};
    }
    if (want("min-c", bc.delta && bc.p)) {
        results["min_c"] = bounds::min_meaningful_c(need(bc.delta, "delta"), need(bc.p, "p"));
    }
    if (want("montecarlo", false)) {
        // Explicit opt-in only: runs `trials` synthetic estimations.
        const auto z = static_cast<std::uint64_t>(need(bc.z_size, "z"));
        const auto p = static_cast<std::uint64_t>(need(bc.p, "p"));
        const auto n = static_cast<std::uint64_t>(need(bc.n, "n"));
        const int trials = static_cast<int>(need(bc.trials, "trials"));
        const double rate = bounds::montecarlo_verify_theorem1(
            z, p, n, need(bc.epsilon, "epsilon"), trials, config.sampling_seed(),
            config.workers());
        results["montecarlo"] = {
            {"violation_rate", rate},
            {"theorem1_bound",
             bounds::theorem1_bound_pow2(static_cast<double>(n), need(bc.epsilon, "epsilon"),
                                         static_cast<double>(p))}};
    }
    if (results.empty() && !bc.curve) {
        throw ArgumentError("bounds query selects no computable operation");
    }

    json doc;
    doc["command"] = "bounds";
    doc["index_rule"] = bc.index_rule == bounds::BinomialIndexRule::Nearest ? "nearest"
                        : bc.index_rule == bounds::BinomialIndexRule::Ceiling ? "ceiling"
                                                                              : "continuous";
    doc["results"] = std::move(results);

    std::vector<ResultDoc> docs;
    docs.push_back({"bounds.json", doc.dump(2) + "\n"});
    if (bc.curve) {
        const auto& cu = *bc.curve;
        std::ostringstream csv;
        csv << "c,m_eq9,m_eq10\n";
        for (int k = 0;; ++k) {
            const double c = cu.c_min + k * cu.c_step;
            if (c > cu.c_max + 1e-12) {
                break;
            }
            csv << g17(c) << ',' << g17(bounds::eq9_sample_size(c, cu.delta, cu.g, cu.p))
                << ','
                << g17(bounds::eq10_sample_size(c, cu.delta, cu.g, cu.p, bc.index_rule))
                << '\n';
        }
        docs.push_back({"curve.csv", csv.str()});
    }
    docs.push_back(config_echo(config));
    return docs;
}

std::vector<ResultDoc> run_covid(const RunConfig& config)
{
    const CandidateGrid grid = config.grid();
    const DiscreteDist dist = config.dist(grid.cardinality());
    const auto names = grid_param_names(grid);
    const auto cc = config.covid_config();
    const auto obs = covid::load_series(cc.data_path);

    const auto outcomes =
        covid::weekly_sequence(grid, dist, obs, cc.t0_dates, cc.options, cc.seed);

    json weeks = json::array();
    std::ostringstream accepted_csv, peaks_csv, summary_csv;
    accepted_csv << "t0,index";
    for (const auto& n : names) {
        accepted_csv << ',' << n;
    }
    accepted_csv << ",multiplicity,first_draw,worst_relative_error,peak_day,peak_date\n";
    peaks_csv << "t0,p2.5,median,p97.5\n";
    summary_csv << "t0,parameter,min,q25,median,q75,max\n";

    for (const auto& week : outcomes) {
        const std::string t0_text = covid::format_date(week.t0);
        json entry;
        entry["t0"] = t0_text;
        entry["status"] = week.status;
        if (week.status == "ok" || week.status == "empty") {
            entry["t0_index"] = week.t0_index;
            entry["r_t0"] = week.r_t0;
            entry["p_d"] = week.p_d;
            entry["e_clamp_count"] = week.e_clamp_count;
            entry["n_sampled"] = week.good_set.n_sampled;
            entry["n_distinct_good"] = week.good_set.n_distinct_good();
        }
        if (week.status == "ok") {
            entry["peak_percentiles"] = {{"p2.5", week.peak_percentiles[0]},
                                         {"median", week.peak_percentiles[1]},
                                         {"p97.5", week.peak_percentiles[2]}};
            json accepted = json::array();
            for (const auto& a : week.good_set.accepted) {
                json ja;
                ja["index"] = a.index;
                ja["params"] = params_object(names, a.params);
                ja["worst_relative_error"] = a.worst_rel_err;
                ja["multiplicity"] = a.multiplicity;
                ja["peak_day"] = a.summary.peak_day;
                ja["peak_date"] = covid::format_date(
                    covid::add_days(obs.start, a.summary.peak_day));
                accepted.push_back(std::move(ja));

                accepted_csv << t0_text << ',' << a.index;
                for (double v : a.params) {
                    accepted_csv << ',' << g17(v);
                }
                accepted_csv << ',' << a.multiplicity << ',' << a.first_draw << ','
                             << g17(a.worst_rel_err) << ',' << a.summary.peak_day << ','
                             << covid::format_date(
                                    covid::add_days(obs.start, a.summary.peak_day))
                             << '\n';
            }
            entry["accepted"] = std::move(accepted);

            peaks_csv << t0_text << ',' << g17(week.peak_percentiles[0]) << ','
                      << g17(week.peak_percentiles[1]) << ','
                      << g17(week.peak_percentiles[2]) << '\n';

            for (std::size_t d = 0; d < names.size(); ++d) {
                std::vector<double> values;
                values.reserve(week.good_set.accepted.size());
                for (const auto& a : week.good_set.accepted) {
                    values.push_back(a.params[d]);
                }
                summary_csv << t0_text << ',' << names[d] << ','
                            << g17(*std::min_element(values.begin(), values.end())) << ','
                            << g17(percentile(values, 25)) << ','
                            << g17(percentile(values, 50)) << ','
                            << g17(percentile(values, 75)) << ','
                            << g17(*std::max_element(values.begin(), values.end())) << '\n';
            }
        }
        weeks.push_back(std::move(entry));
    }

    json doc;
    doc["command"] = "covid";
    doc["population"] = cc.options.population;
    doc["n"] = cc.options.n_estimate;
    doc["n_pre"] = cc.options.n_pre;
    doc["inflation"] = cc.options.inflation;
    doc["horizon"] = cc.options.horizon;
    doc["p_d_mode"] =
        cc.options.p_d_mode == covid::PdMode::WeeklyIncidence ? "weekly" : "cumulative";
    doc["seed"] = cc.seed;
    doc["weeks"] = std::move(weeks);

    std::vector<ResultDoc> docs;
    docs.push_back({"covid_results.json", doc.dump(2) + "\n"});
    docs.push_back({"accepted.csv", accepted_csv.str()});
    docs.push_back({"peaks.csv", peaks_csv.str()});
    docs.push_back({"params_summary.csv", summary_csv.str()});
    docs.push_back(config_echo(config));
    return docs;
}

} // namespace

std::vector<ResultDoc> run_command(const RunConfig& config, const std::string& command)
{
    if (command == "simulate") {
        return run_simulate(config);
    }
    if (command == "scan") {
        return run_scan(config);
    }
    if (command == "estimate") {
        return run_estimate(config);
    }
    if (command == "bounds") {
        return run_bounds(config);
    }
    if (command == "covid") {
        return run_covid(config);
    }
    throw ArgumentError("unknown command '" + command +
                        "' (expected simulate | scan | estimate | bounds | covid)");
}

} // namespace epifit
