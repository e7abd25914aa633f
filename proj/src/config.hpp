#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"
#include "candidates.hpp"
#include "covid.hpp"
#include "dynsys.hpp"
#include "fitness.hpp"

namespace epifit {

// A validated run configuration: a single JSON document whose fields the
// commands pull on demand. The document (with any overrides applied) is
// echoed into every output set for provenance.
class RunConfig {
public:
    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_file(const std::string& path);

    // Applies `value_json` at a JSON pointer (e.g. "/sampling/seed"),
    // creating intermediate objects as needed.
    void override_value(const std::string& pointer, const std::string& value_json);

    const nlohmann::json& doc() const { return doc_; }
    std::string echo_text() const;

    Model model() const;
    int workers() const;
    std::uint64_t scan_guard() const;

    CandidateGrid grid() const;
    DiscreteDist dist(std::uint64_t cardinality) const;
    FitnessSpec fitness() const;

    std::vector<double> initial_state() const;
    double population() const;
    double p_d() const;
    int horizon(int fallback) const;

    std::uint64_t sampling_n() const;
    std::uint64_t sampling_seed() const;

    // Parameters in the model's canonical order, by name.
    std::vector<double> simulate_params() const;
    int simulate_horizon() const;
    double simulate_p_d() const;
    bool has_emit_observed() const;
    bool emit_observed_is_reconstructable() const;
    covid::SyntheticSpec emit_observed_spec() const;
    covid::ReconstructableSpec emit_reconstructable_spec() const;

    // Observed trajectories for scan/estimate runs are generated from the
    // configured true parameters (or given as explicit states).
    SirTrajectory observed_sir(int needed_last_day) const;
    SeirTrajectory observed_seir(int needed_last_day) const;

    struct CovidConfig {
        std::string data_path;
        std::vector<covid::Date> t0_dates;
        covid::PipelineOptions options;
        std::uint64_t seed = 0;
    };
    CovidConfig covid_config() const;

    struct BoundsConfig {
        std::vector<std::string> ops;
        std::optional<double> epsilon, delta, c, g, p, n, h_cardinality;
        std::optional<double> z_size, trials; // Monte-Carlo verification
        bounds::BinomialIndexRule index_rule = bounds::BinomialIndexRule::Nearest;
        struct Curve {
            double delta = 0.1, g = 0.001, p = 1000;
            double c_min = 0.7, c_max = 0.995, c_step = 0.005;
        };
        std::optional<Curve> curve;
    };
    BoundsConfig bounds_config() const;

private:
    explicit RunConfig(nlohmann::json doc);
    void validate();

    nlohmann::json doc_;
};

} // namespace epifit
