#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "candidates.hpp"
#include "dynsys.hpp"
#include "estimator.hpp"

namespace epifit::covid {

// Calendar handling for daily epidemic series.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;
};

int days_from_civil(const Date& d);
Date civil_from_days(int days);
Date parse_date(const std::string& iso);
std::string format_date(const Date& d);
Date add_days(const Date& d, int days);

// Dated cumulative epidemic series plus the smoothed views the pipeline
// fits against: smoothed daily incidences and prevalences obtained by
// summing the smoothed incidences (day 0's incidence is the cumulative
// value itself). Recorded active infections are
// confirmed - recorded recoveries - deaths, on the smoothed prevalences.
struct ObservedSeries {
    Date start;
    std::vector<double> confirmed_cum, deaths_cum, recovered_cum;
    std::vector<double> confirmed_inc_s, deaths_inc_s, recovered_inc_s;
    std::vector<double> confirmed_prev_s, deaths_prev_s, recovered_prev_s;
    std::vector<double> infected_stat_s;

    std::size_t size() const { return confirmed_cum.size(); }
    Date date_at(std::size_t index) const { return add_days(start, static_cast<int>(index)); }
    std::optional<std::size_t> index_of(const Date& d) const;
};

// Validates the raw cumulative columns and derives the smoothed views.
ObservedSeries make_series(Date start, std::vector<double> confirmed,
                           std::vector<double> deaths, std::vector<double> recovered);

// Reads a `date,confirmed,deaths,recovered` CSV (UTF-8, header row,
// ISO-8601 dates, one row per day). Errors distinguish missing columns,
// non-contiguous dates and decreasing cumulative counts.
ObservedSeries load_series(const std::string& path);

// Centred seven-day average with shrinking windows at the boundaries;
// interior days always use the full [t-3, t+3] window.
std::vector<double> smooth7(std::span<const double> values);

enum class PdMode { WeeklyIncidence, Cumulative };

// Death rate around t0: smoothed deaths over smoothed confirmed, either on
// the week ending at t0 (incidence sums) or cumulatively; clamped to [0,1].
double moving_death_rate(const ObservedSeries& obs, std::size_t t0, PdMode mode);

// Initial SEIR state at t0 for a candidate parameter vector: recorded
// compartments read from the smoothed prevalences, unobserved compartments
// from the p_s scaling and the exposed-inversion formula. A negative
// exposed estimate clamps to zero (flagged via e_clamped).
SeirState initial_conditions(const ObservedSeries& obs, std::size_t t0,
                             const SeirCovidParams& params, double population,
                             bool* e_clamped = nullptr);

struct PipelineOptions {
    double population = 0;
    std::uint64_t n_estimate = 500000;
    std::uint64_t n_pre = 100000;
    double inflation = 1.1;
    int horizon = 730;
    PdMode p_d_mode = PdMode::WeeklyIncidence;
    int workers = 0;
};

struct WeekOutcome {
    std::size_t t0_index = 0;
    Date t0;
    std::string status; // "ok", "empty", or "error: <reason>"
    double r_t0 = 0;
    double p_d = 0;
    std::uint64_t e_clamp_count = 0;
    GoodSet good_set;
    std::vector<int> peak_days;                  // per accepted, series day index
    std::array<double, 3> peak_percentiles{};    // 2.5%, 50%, 97.5%
};

// Week-specific tolerance: inflation times the smallest sup-norm relative
// error over a pre-sample of candidates (failed simulations are skipped).
double calibrate_r(const CandidateGrid& grid, const DiscreteDist& dist,
                   const ObservedSeries& obs, std::size_t t0,
                   const PipelineOptions& opts, double p_d, std::uint64_t seed);

// One week's estimation at a calibrated tolerance, with peak-of-deaths
// percentiles over the accepted candidates.
WeekOutcome weekly_fit(const CandidateGrid& grid, const DiscreteDist& dist,
                       const ObservedSeries& obs, std::size_t t0,
                       const PipelineOptions& opts, double r_t0, double p_d,
                       std::uint64_t seed);

// Calibrates and fits every t0; per-t0 failures are recorded in the
// outcome's status and the sequence continues. Seeds derive from
// (master_seed, t0 date) so each week is individually reproducible.
std::vector<WeekOutcome> weekly_sequence(const CandidateGrid& grid,
                                         const DiscreteDist& dist,
                                         const ObservedSeries& obs,
                                         const std::vector<Date>& t0_dates,
                                         const PipelineOptions& opts,
                                         std::uint64_t master_seed);

// Earliest day label strictly after `after_day` maximizing the daily death
// increment D(t) - D(t-1).
int deaths_peak_day(const SeirTrajectory& traj, int after_day);

// Synthetic observed-series generation from a known parameter vector, used
// for round-trip validation and for producing bundled fixtures.
struct SyntheticSpec {
    SeirCovidParams params; // p_d is the cohort death proportion
    double population = 0;
    SeirState initial{};    // day-0 state
    double initial_recovered_stat = 0; // recorded recoveries at day 0
    int days = 0;
    Date start;
    double noise = 0; // multiplicative incidence noise amplitude
    std::uint64_t noise_seed = 0;
    std::vector<std::pair<int, double>> beta_schedule; // (from day, beta)
};

struct SyntheticData {
    ObservedSeries series;
    SeirTrajectory truth; // start_time = 0 (series day positions)
};

SyntheticData synthesize_observed(const SyntheticSpec& spec);

// Reconstruction-consistent generation: emits raw columns whose smoothed
// prevalences are an exact fixed point of the initial-condition
// reconstruction for the generating parameters, so the generator is
// recovered by the pipeline at every fitting date. Requires
// tau_d * (1 - p_s) / tau_s = 1 so the measured moving death rate equals
// the generating one.
struct ReconstructableSpec {
    SeirCovidParams params; // p_d is the generating death proportion
    double population = 0;
    double infected_stat_0 = 0;  // I_s at day 0
    double deaths_0 = 0;         // D at day 0
    double recovered_stat_0 = 0; // recorded recoveries at day 0
    int days = 0;
    Date start;
    bool round_to_integers = true;
};

struct ReconstructableData {
    ObservedSeries series;
    SeirState initial_state{}; // day-0 reconstructed state, for truth runs
};

ReconstructableData synthesize_reconstructable(const ReconstructableSpec& spec);

} // namespace epifit::covid
