#pragma once

// Shared fixtures for the SIR grid-search experiments: the three candidate
// grids, the generating parameters, and the fitness the published counts
// were produced with (first ten states, tolerance band around each
// candidate's own values).

#include <cstdint>
#include <span>

#include "candidates.hpp"
#include "dynsys.hpp"
#include "estimator.hpp"
#include "fitness.hpp"

namespace fixtures {

inline const epifit::SirParams kTrueParams{0.25, 1.0 / 21.0};
inline const epifit::SirState kInitial{0.95, 0.05, 0.0};

inline epifit::CandidateGrid z1()
{
    using namespace epifit;
    return CandidateGrid({{"beta", build_range_grid(0, 1, 0.001, RangeEndpoints::HalfOpen)},
                          {"gamma", build_range_grid(0, 0.5, 0.001, RangeEndpoints::HalfOpen)}});
}

inline epifit::CandidateGrid z2()
{
    using namespace epifit;
    return CandidateGrid({{"beta", build_range_grid(0, 1, 0.001, RangeEndpoints::HalfOpen)},
                          {"gamma", build_range_grid(0, 0.2, 0.001, RangeEndpoints::HalfOpen)}});
}

inline epifit::CandidateGrid z3()
{
    using namespace epifit;
    return CandidateGrid({{"beta", build_range_grid(0.1, 0.5, 0.001, RangeEndpoints::Closed)},
                          {"gamma", build_range_grid(0, 0.2, 0.001, RangeEndpoints::HalfOpen)}});
}

inline epifit::SirTrajectory observed()
{
    return epifit::simulate_sir(kTrueParams, kInitial, 9, 1);
}

// Day 1 is the shared initial state, so the compared days are 2..10.
inline epifit::FitnessSpec table_fitness(double r)
{
    epifit::FitnessSpec spec;
    spec.kind = epifit::FitnessKind::PointwiseRelativeBand;
    spec.r = r;
    spec.window = {2, 10};
    spec.components = {0, 1, 2};
    spec.reference = epifit::BandReference::Simulated;
    return spec;
}

inline epifit::Evaluator table_evaluator(const epifit::SirTrajectory& obs,
                                         const epifit::FitnessSpec& spec)
{
    return [&obs, spec](std::uint64_t, std::span<const double> values) {
        const auto sim = epifit::simulate_sir({values[0], values[1]}, kInitial, 9, 1);
        epifit::Evaluation out;
        out.good = epifit::evaluate_fitness(sim, obs, spec);
        out.worst_rel_err =
            epifit::worst_relative_error(sim, obs, spec.window, spec.components);
        return out;
    };
}

// Peak of infected over a longer run; day numbering starts at 1 for the
// initial state.
inline epifit::Summarizer peak_summarizer(int horizon = 60)
{
    return [horizon](std::uint64_t, std::span<const double> values) {
        const auto traj =
            epifit::simulate_sir({values[0], values[1]}, kInitial, horizon, 1);
        epifit::TrajectorySummary summary;
        summary.peak_day = traj.start_time;
        summary.peak_value = traj.states.front()[1];
        for (int day = traj.start_time; day <= traj.end_time(); ++day) {
            if (traj.at_day(day)[1] > summary.peak_value) {
                summary.peak_value = traj.at_day(day)[1];
                summary.peak_day = day;
            }
        }
        summary.final_state.assign(traj.states.back().begin(), traj.states.back().end());
        return summary;
    };
}

} // namespace fixtures
