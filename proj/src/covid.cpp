#include "covid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "errors.hpp"
#include "fitness.hpp"
#include "logging.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace epifit::covid {

namespace {

constexpr std::size_t kInfStat = 3; // I_s component index
constexpr std::size_t kDeaths = 5;  // D component index
const std::vector<std::size_t> kFitComponents = {kInfStat, kDeaths};

} // namespace

// Civil-calendar conversions (proleptic Gregorian, days since 1970-01-01).
int days_from_civil(const Date& d)
{
    int y = d.year;
    const int m = d.month;
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d.day - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int>(doe) - 719468;
}

Date civil_from_days(int days)
{
    days += 719468;
    const int era = (days >= 0 ? days : days - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(days - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned day = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : static_cast<unsigned>(-9));
    return {y + (m <= 2), static_cast<int>(m), static_cast<int>(day)};
}

Date parse_date(const std::string& iso)
{
    Date d;
    char extra = 0;
    if (std::sscanf(iso.c_str(), "%d-%d-%d%c", &d.year, &d.month, &d.day, &extra) != 3 ||
        d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) {
        throw DataError("bad ISO-8601 date: '" + iso + "'");
    }
    return d;
}

std::string format_date(const Date& d)
{
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

Date add_days(const Date& d, int days)
{
    return civil_from_days(days_from_civil(d) + days);
}

std::optional<std::size_t> ObservedSeries::index_of(const Date& d) const
{
    const int offset = days_from_civil(d) - days_from_civil(start);
    if (offset < 0 || offset >= static_cast<int>(size())) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(offset);
}

std::vector<double> smooth7(std::span<const double> values)
{
    const auto n = static_cast<std::ptrdiff_t>(values.size());
    std::vector<double> out(values.size());
    for (std::ptrdiff_t t = 0; t < n; ++t) {
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, t - 3);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, t + 3);
        double sum = 0;
        for (std::ptrdiff_t s = lo; s <= hi; ++s) {
            sum += values[static_cast<std::size_t>(s)];
        }
        out[static_cast<std::size_t>(t)] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

namespace {

std::vector<double> incidence_of(const std::vector<double>& cumulative)
{
    std::vector<double> inc(cumulative.size());
    for (std::size_t t = 0; t < cumulative.size(); ++t) {
        inc[t] = t == 0 ? cumulative[0] : cumulative[t] - cumulative[t - 1];
    }
    return inc;
}

std::vector<double> running_sum(const std::vector<double>& values)
{
    std::vector<double> out(values.size());
    double acc = 0;
    for (std::size_t t = 0; t < values.size(); ++t) {
        acc += values[t];
        out[t] = acc;
    }
    return out;
}

void check_cumulative(const std::vector<double>& values, const char* name)
{
    for (std::size_t t = 0; t < values.size(); ++t) {
        if (!(values[t] >= 0) || !std::isfinite(values[t])) {
            throw DataError(std::string("negative or non-finite ") + name + " count");
        }
        if (t > 0 && values[t] < values[t - 1]) {
            throw DataError(std::string("decreasing cumulative ") + name + " at row " +
                            std::to_string(t + 1));
        }
    }
}

} // namespace

ObservedSeries make_series(Date start, std::vector<double> confirmed,
                           std::vector<double> deaths, std::vector<double> recovered)
{
    if (confirmed.empty() || confirmed.size() != deaths.size() ||
        confirmed.size() != recovered.size()) {
        throw DataError("series columns are empty or of unequal length");
    }
    check_cumulative(confirmed, "confirmed");
    check_cumulative(deaths, "deaths");
    check_cumulative(recovered, "recovered");

    ObservedSeries s;
    s.start = start;
    s.confirmed_cum = std::move(confirmed);
    s.deaths_cum = std::move(deaths);
    s.recovered_cum = std::move(recovered);

    s.confirmed_inc_s = smooth7(incidence_of(s.confirmed_cum));
    s.deaths_inc_s = smooth7(incidence_of(s.deaths_cum));
    s.recovered_inc_s = smooth7(incidence_of(s.recovered_cum));
    s.confirmed_prev_s = running_sum(s.confirmed_inc_s);
    s.deaths_prev_s = running_sum(s.deaths_inc_s);
    s.recovered_prev_s = running_sum(s.recovered_inc_s);

    s.infected_stat_s.resize(s.size());
    for (std::size_t t = 0; t < s.size(); ++t) {
        s.infected_stat_s[t] =
            s.confirmed_prev_s[t] - s.recovered_prev_s[t] - s.deaths_prev_s[t];
    }
    return s;
}

ObservedSeries load_series(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open series file '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("series file is empty");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }

    std::map<std::string, std::size_t> columns;
    {
        std::stringstream header(line);
        std::string field;
        std::size_t pos = 0;
        while (std::getline(header, field, ',')) {
            columns[field] = pos++;
        }
    }
    for (const char* required : {"date", "confirmed", "deaths", "recovered"}) {
        if (!columns.count(required)) {
            throw DataError(std::string("missing column '") + required + "' in '" + path + "'");
        }
    }

    std::vector<Date> dates;
    std::vector<double> confirmed, deaths, recovered;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        if (fields.size() < columns.size()) {
            throw DataError("short row " + std::to_string(row) + " in '" + path + "'");
        }
        const auto number = [&](const char* name) {
            const std::string& text = fields[columns.at(name)];
            try {
                std::size_t used = 0;
                const double v = std::stod(text, &used);
                if (used != text.size()) {
                    throw std::invalid_argument(text);
                }
                return v;
            } catch (const std::exception&) {
                throw DataError("bad number '" + text + "' at row " + std::to_string(row));
            }
        };
        dates.push_back(parse_date(fields[columns.at("date")]));
        confirmed.push_back(number("confirmed"));
        deaths.push_back(number("deaths"));
        recovered.push_back(number("recovered"));
    }
    if (dates.empty()) {
        throw DataError("series file '" + path + "' has no data rows");
    }
    for (std::size_t t = 1; t < dates.size(); ++t) {
        if (days_from_civil(dates[t]) != days_from_civil(dates[t - 1]) + 1) {
            throw DataError("non-contiguous dates at row " + std::to_string(t + 2) +
                            " (" + format_date(dates[t]) + ")");
        }
    }
    return make_series(dates.front(), std::move(confirmed), std::move(deaths),
                       std::move(recovered));
}

double moving_death_rate(const ObservedSeries& obs, std::size_t t0, PdMode mode)
{
    if (t0 >= obs.size()) {
        throw ArgumentError("t0 outside the observed series");
    }
    double dead = 0;
    double conf = 0;
    if (mode == PdMode::WeeklyIncidence) {
        if (t0 < 6) {
            throw DataError("moving death rate needs seven smoothed days ending at t0");
        }
        for (std::size_t t = t0 - 6; t <= t0; ++t) {
            dead += obs.deaths_inc_s[t];
            conf += obs.confirmed_inc_s[t];
        }
    } else {
        dead = obs.deaths_prev_s[t0];
        conf = obs.confirmed_prev_s[t0];
    }
    if (!(conf > 0)) {
        throw DataError("zero confirmed incidence in the death-rate window");
    }
    return std::clamp(dead / conf, 0.0, 1.0);
}

SeirState initial_conditions(const ObservedSeries& obs, std::size_t t0,
                             const SeirCovidParams& params, double population,
                             bool* e_clamped)
{
    if (t0 + 1 >= obs.size()) {
        throw ArgumentError("initial conditions need smoothed data at t0 and t0+1");
    }
    if (!(params.p_s > 0)) {
        throw ArgumentError("p_s must be positive");
    }
    const SeirCovidRates rates = rates_from_params(params, population);

    const double i_s = obs.infected_stat_s[t0];
    const double d = obs.deaths_prev_s[t0];
    const double r_s = obs.recovered_prev_s[t0];
    if (!(i_s > 0) || d < 0 || r_s < 0) {
        throw DataError("observed compartments at t0 are not usable (I_s must be positive)");
    }

    const double scale = (1.0 - params.p_s) / params.p_s;
    const double i_now = scale * i_s;
    const double i_next = scale * obs.infected_stat_s[t0 + 1];
    const double r = (scale + 1.0) * r_s;

    double e = (i_next + (rates.nu_r + rates.gamma_s - 1.0) * i_now) / rates.gamma_i;
    if (e < 0) {
        e = 0;
        if (e_clamped != nullptr) {
            *e_clamped = true;
        }
    } else if (e_clamped != nullptr) {
        *e_clamped = false;
    }

    const double s = population - e - i_now - i_s - r - d;
    if (s < 0) {
        throw DataError("population too small for the scaled compartments at t0");
    }
    return {s, e, i_now, i_s, r, d};
}

namespace {

// Everything needed to score one candidate on one week.
struct WeekContext {
    const ObservedSeries* obs = nullptr;
    std::size_t t0 = 0;
    double p_d = 0;
    double population = 0;
    std::array<std::size_t, 7> dim_of{}; // grid position of each parameter field
    SeirTrajectory observed_window;      // I_s and D filled, other components zero
};

SeirCovidParams params_from_values(const WeekContext& ctx, std::span<const double> values)
{
    SeirCovidParams p;
    p.beta = values[ctx.dim_of[0]];
    p.tau_e = values[ctx.dim_of[1]];
    p.tau_r = values[ctx.dim_of[2]];
    p.tau_s = values[ctx.dim_of[3]];
    p.tau_rs = values[ctx.dim_of[4]];
    p.tau_d = values[ctx.dim_of[5]];
    p.p_s = values[ctx.dim_of[6]];
    p.p_d = ctx.p_d;
    return p;
}

std::array<std::size_t, 7> map_dims(const CandidateGrid& grid)
{
    static const std::array<const char*, 7> fields = {"beta",   "tau_e", "tau_r", "tau_s",
                                                      "tau_rs", "tau_d", "p_s"};
    std::array<std::size_t, 7> out{};
    for (std::size_t f = 0; f < fields.size(); ++f) {
        bool found = false;
        for (std::size_t d = 0; d < grid.dims().size(); ++d) {
            if (grid.dims()[d].name == fields[f]) {
                out[f] = d;
                found = true;
                break;
            }
        }
        if (!found) {
            throw ArgumentError(std::string("grid is missing dimension '") + fields[f] + "'");
        }
    }
    if (grid.rank() != 7) {
        throw ArgumentError("SEIR grid must have exactly the seven model dimensions");
    }
    return out;
}

WeekContext make_context(const CandidateGrid& grid, const ObservedSeries& obs,
                         std::size_t t0, double p_d, double population)
{
    if (t0 < 3 || t0 + 9 >= obs.size()) {
        throw DataError("t0 needs full smoothing windows: 3 <= t0 and data through t0+9");
    }
    WeekContext ctx;
    ctx.obs = &obs;
    ctx.t0 = t0;
    ctx.p_d = p_d;
    ctx.population = population;
    ctx.dim_of = map_dims(grid);
    ctx.observed_window.start_time = static_cast<int>(t0);
    ctx.observed_window.states.resize(7);
    for (int k = 0; k <= 6; ++k) {
        auto& state = ctx.observed_window.states[static_cast<std::size_t>(k)];
        state.fill(0.0);
        state[kInfStat] = obs.infected_stat_s[t0 + static_cast<std::size_t>(k)];
        state[kDeaths] = obs.deaths_prev_s[t0 + static_cast<std::size_t>(k)];
        if (!(state[kInfStat] > 0) || !(state[kDeaths] > 0)) {
            throw DataError("observed I_s and D must be positive across the fitting week");
        }
    }
    return ctx;
}

// Sup-norm relative error of one candidate over the week, or +inf when its
// reconstruction or simulation is invalid (such candidates simply do not
// fit; they must not abort the sweep).
double candidate_week_error(const WeekContext& ctx, std::span<const double> values,
                            bool* e_clamped = nullptr)
{
    try {
        const SeirCovidParams params = params_from_values(ctx, values);
        const SeirCovidRates rates = rates_from_params(params, ctx.population);
        const SeirState x0 =
            initial_conditions(*ctx.obs, ctx.t0, params, ctx.population, e_clamped);
        const SeirTrajectory sim =
            simulate_seir(rates, x0, 6, static_cast<int>(ctx.t0));
        const Window week{static_cast<int>(ctx.t0), static_cast<int>(ctx.t0) + 6};
        return worst_relative_error(sim, ctx.observed_window, week, kFitComponents);
    } catch (const DataError&) {
        return std::numeric_limits<double>::infinity();
    } catch (const SimulationError&) {
        return std::numeric_limits<double>::infinity();
    }
}

} // namespace

int deaths_peak_day(const SeirTrajectory& traj, int after_day)
{
    int best_day = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int day = traj.start_time + 1; day <= traj.end_time(); ++day) {
        if (day <= after_day) {
            continue;
        }
        const double daily = traj.at_day(day)[kDeaths] - traj.at_day(day - 1)[kDeaths];
        if (daily > best) {
            best = daily;
            best_day = day;
        }
    }
    if (best_day < 0) {
        throw ArgumentError("trajectory has no day after the requested start");
    }
    return best_day;
}

double calibrate_r(const CandidateGrid& grid, const DiscreteDist& dist,
                   const ObservedSeries& obs, std::size_t t0,
                   const PipelineOptions& opts, double p_d, std::uint64_t seed)
{
    if (opts.n_pre < 1) {
        throw ArgumentError("calibration needs at least one pre-sample draw");
    }
    const WeekContext ctx = make_context(grid, obs, t0, p_d, opts.population);

    std::vector<double> errors(static_cast<std::size_t>(opts.n_pre));
    parallel_chunks(opts.n_pre, opts.workers,
                    [&](std::uint64_t begin, std::uint64_t end, int) {
                        std::vector<double> values(grid.rank());
                        for (std::uint64_t i = begin; i < end; ++i) {
                            grid.decode(dist.sample_index(seed, i), values);
                            errors[static_cast<std::size_t>(i)] =
                                candidate_week_error(ctx, values);
                        }
                    });
    double best = std::numeric_limits<double>::infinity();
    for (double e : errors) {
        best = std::min(best, e);
    }
    if (!std::isfinite(best)) {
        throw DataError("all sampled candidate simulations failed in the calibration window");
    }
    return opts.inflation * best;
}

WeekOutcome weekly_fit(const CandidateGrid& grid, const DiscreteDist& dist,
                       const ObservedSeries& obs, std::size_t t0,
                       const PipelineOptions& opts, double r_t0, double p_d,
                       std::uint64_t seed)
{
    if (!(r_t0 > 0)) {
        throw ArgumentError("weekly fit needs a positive calibrated tolerance");
    }
    if (opts.horizon < 1) {
        throw ArgumentError("weekly fit needs a positive horizon");
    }
    const WeekContext ctx = make_context(grid, obs, t0, p_d, opts.population);

    std::atomic<std::uint64_t> clamps{0};
    const Evaluator evaluate = [&](std::uint64_t, std::span<const double> values) {
        bool clamped = false;
        const double err = candidate_week_error(ctx, values, &clamped);
        if (clamped) {
            clamps.fetch_add(1, std::memory_order_relaxed);
        }
        return Evaluation{err <= r_t0, err};
    };
    const Summarizer summarize = [&](std::uint64_t, std::span<const double> values) {
        TrajectorySummary summary;
        const SeirCovidParams params = params_from_values(ctx, values);
        const SeirCovidRates rates = rates_from_params(params, ctx.population);
        SeirTrajectory traj;
        traj.start_time = static_cast<int>(t0);
        traj.states.push_back(initial_conditions(*ctx.obs, t0, params, ctx.population));
        for (int k = 0; k < opts.horizon; ++k) {
            try {
                traj.states.push_back(
                    seir_step(traj.states.back(), rates, traj.start_time + k));
            } catch (const SimulationError&) {
                break; // peak taken over the valid prefix
            }
        }
        const int peak = deaths_peak_day(traj, static_cast<int>(t0));
        summary.peak_day = peak;
        summary.peak_value =
            traj.at_day(peak)[kDeaths] - traj.at_day(peak - 1)[kDeaths];
        summary.final_state.assign(traj.states.back().begin(), traj.states.back().end());
        return summary;
    };

    WeekOutcome outcome;
    outcome.t0_index = t0;
    outcome.t0 = obs.date_at(t0);
    outcome.r_t0 = r_t0;
    outcome.p_d = p_d;
    outcome.good_set = rejection_estimate(grid, dist, opts.n_estimate, seed, evaluate,
                                          summarize, opts.workers);
    outcome.e_clamp_count = clamps.load();

    if (outcome.good_set.accepted.empty()) {
        outcome.status = "empty";
        return outcome;
    }
    outcome.status = "ok";
    std::vector<double> peaks;
    peaks.reserve(outcome.good_set.accepted.size());
    for (const auto& a : outcome.good_set.accepted) {
        outcome.peak_days.push_back(a.summary.peak_day);
        peaks.push_back(static_cast<double>(a.summary.peak_day));
    }
    outcome.peak_percentiles = {percentile(peaks, 2.5), percentile(peaks, 50.0),
                                percentile(peaks, 97.5)};
    return outcome;
}

std::vector<WeekOutcome> weekly_sequence(const CandidateGrid& grid,
                                         const DiscreteDist& dist,
                                         const ObservedSeries& obs,
                                         const std::vector<Date>& t0_dates,
                                         const PipelineOptions& opts,
                                         std::uint64_t master_seed)
{
    std::vector<WeekOutcome> outcomes;
    outcomes.reserve(t0_dates.size());
    for (const Date& date : t0_dates) {
        WeekOutcome outcome;
        outcome.t0 = date;
        try {
            const auto index = obs.index_of(date);
            if (!index) {
                throw DataError("t0 " + format_date(date) + " is outside the observed series");
            }
            const std::size_t t0 = *index;
            outcome.t0_index = t0;
            const auto day_key = static_cast<std::uint64_t>(days_from_civil(date));
            const std::uint64_t week_seed = rng::derive_seed(master_seed, day_key);
            const double p_d = moving_death_rate(obs, t0, opts.p_d_mode);
            const double r_t0 = calibrate_r(grid, dist, obs, t0, opts, p_d,
                                            rng::derive_seed(week_seed, 1));
            log_info("t0 " + format_date(date) + ": r(t0) = " + std::to_string(r_t0) +
                     ", p_D = " + std::to_string(p_d));
            outcome = weekly_fit(grid, dist, obs, t0, opts, r_t0, p_d,
                                 rng::derive_seed(week_seed, 2));
            if (outcome.e_clamp_count > 0) {
                log_warn("t0 " + format_date(date) + ": exposed estimate clamped to 0 for " +
                         std::to_string(outcome.e_clamp_count) + " evaluations");
            }
        } catch (const Error& e) {
            outcome.status = std::string("error: ") + e.what();
        }
        outcomes.push_back(std::move(outcome));
    }
    return outcomes;
}

ReconstructableData synthesize_reconstructable(const ReconstructableSpec& spec)
{
    validate_seir_params(spec.params);
    if (spec.days < 20) {
        throw ArgumentError("reconstruction-consistent series needs at least 20 days");
    }
    if (!(spec.infected_stat_0 > 0) || spec.deaths_0 < 0 || spec.recovered_stat_0 < 0) {
        throw ArgumentError("seed compartments must be positive (I_s) and non-negative");
    }
    const SeirCovidRates r = rates_from_params(spec.params, spec.population);
    const double scale = (1.0 - spec.params.p_s) / spec.params.p_s;
    if (std::fabs(spec.params.tau_d * (1.0 - spec.params.p_s) / spec.params.tau_s - 1.0) >
        1e-9) {
        throw ArgumentError(
            "reconstruction-consistent generation needs tau_d * (1 - p_s) / tau_s = 1");
    }

    // Target smoothed prevalences: recorded infections grow geometrically,
    // deaths and recorded recoveries accumulate their outflows.
    const std::size_t n = static_cast<std::size_t>(spec.days);
    std::vector<double> i_s(n), deaths(n), rec(n), confirmed(n);
    i_s[0] = spec.infected_stat_0;
    deaths[0] = spec.deaths_0;
    rec[0] = spec.recovered_stat_0;
    const double growth = 1.0 + r.gamma_s * scale - (r.nu_rs + r.delta_death);
    if (!(growth > 1.0)) {
        throw ArgumentError("reconstruction-consistent generation needs a growing epidemic");
    }
    for (std::size_t t = 0; t + 1 < n; ++t) {
        i_s[t + 1] = i_s[t] * growth;
        deaths[t + 1] = deaths[t] + r.delta_death * i_s[t];
        rec[t + 1] = rec[t] + r.nu_rs * i_s[t];
    }
    for (std::size_t t = 0; t < n; ++t) {
        confirmed[t] = i_s[t] + rec[t] + deaths[t];
    }

    // Raw incidence: geometric targets pass through the interior smoothing
    // windows with a known gain; the day-0 value then absorbs the boundary
    // windows' mass deficit so the smoothed prevalence matches the target
    // from day ~10 on. The adjustment is linear, so a few probe rounds
    // converge exactly.
    double gain = 0;
    for (int k = -3; k <= 3; ++k) {
        gain += std::pow(growth, k);
    }
    gain /= 7.0;
    const double w0 = 1.0 / 4 + 1.0 / 5 + 1.0 / 6 + 1.0 / 7;
    const auto raw_from_prev = [&](const std::vector<double>& prev) {
        std::vector<double> inc(n);
        inc[0] = prev[0];
        for (std::size_t t = 1; t < n; ++t) {
            inc[t] = (prev[t] - prev[t - 1]) / gain;
        }
        for (int round = 0; round < 3; ++round) {
            std::vector<double> cum(n);
            double acc = 0;
            for (std::size_t t = 0; t < n; ++t) {
                acc += inc[t];
                cum[t] = acc;
            }
            const auto view = running_sum(smooth7(incidence_of(cum)));
            inc[0] += (prev[12] - view[12]) / w0;
        }
        if (inc[0] < 0) {
            throw ArgumentError("seed compartments too small for the boundary correction");
        }
        std::vector<double> cum(n);
        double acc = 0;
        for (std::size_t t = 0; t < n; ++t) {
            acc += inc[t];
            cum[t] = spec.round_to_integers ? std::round(acc) : acc;
        }
        return cum;
    };

    ReconstructableData out;
    out.series = make_series(spec.start, raw_from_prev(confirmed), raw_from_prev(deaths),
                             raw_from_prev(rec));

    const double i0 = scale * i_s[0];
    const double e0 = (scale * i_s[1] + (r.nu_r + r.gamma_s - 1.0) * i0) / r.gamma_i;
    const double r0 = (scale + 1.0) * rec[0];
    const double s0 = spec.population - e0 - i0 - i_s[0] - r0 - deaths[0];
    if (s0 < 0) {
        throw ArgumentError("population too small for the seeded compartments");
    }
    out.initial_state = {s0, e0, i0, i_s[0], r0, deaths[0]};
    return out;
}

SyntheticData synthesize_observed(const SyntheticSpec& spec)
{
    validate_seir_params(spec.params);
    if (spec.days < 1) {
        throw ArgumentError("synthetic series needs at least one day");
    }
    SeirCovidRates rates = rates_from_params(spec.params, spec.population);

    SyntheticData out;
    out.truth.start_time = 0;
    out.truth.states.push_back(spec.initial);

    // Flows into the recorded compartments accumulate the observable
    // cumulative series; confirmed = I_s + R_s + D by construction.
    const double d0 = spec.initial[kDeaths];
    std::vector<double> confirmed{spec.initial[kInfStat] + spec.initial_recovered_stat + d0};
    std::vector<double> deaths{d0};
    std::vector<double> recovered{spec.initial_recovered_stat};

    double beta = spec.params.beta;
    for (int t = 0; t + 1 < spec.days; ++t) {
        for (const auto& [from_day, value] : spec.beta_schedule) {
            if (from_day == t) {
                beta = value;
            }
        }
        rates.beta = beta;
        const SeirState& cur = out.truth.states.back();
        confirmed.push_back(confirmed.back() + rates.gamma_s * cur[2]);
        recovered.push_back(recovered.back() + rates.nu_rs * cur[kInfStat]);
        out.truth.states.push_back(seir_step(cur, rates, t));
        deaths.push_back(out.truth.states.back()[kDeaths]);
    }

    if (spec.noise > 0) {
        // Multiplicative noise on daily increments, re-accumulated so the
        // cumulative columns stay monotone.
        const auto jitter = [&](std::vector<double>& cum, std::uint64_t stream) {
            double acc = 0;
            double prev = 0;
            for (std::size_t t = 0; t < cum.size(); ++t) {
                const double inc = cum[t] - prev;
                prev = cum[t];
                const double u =
                    2.0 * rng::uniform_unit(rng::derive_seed(spec.noise_seed, stream), t) - 1.0;
                acc += inc * (1.0 + spec.noise * u);
                cum[t] = acc;
            }
        };
        jitter(confirmed, 1);
        jitter(deaths, 2);
        jitter(recovered, 3);
    }
    for (auto* column : {&confirmed, &deaths, &recovered}) {
        for (double& v : *column) {
            v = std::round(v);
        }
    }

    out.series = make_series(spec.start, std::move(confirmed), std::move(deaths),
                             std::move(recovered));
    return out;
}

} // namespace epifit::covid
