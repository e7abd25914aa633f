#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "candidates.hpp"

namespace epifit {

// Per-candidate verdict produced by a model evaluation: whether the
// simulated trajectory passes the fitness map and the smallest sup-norm
// relative tolerance it would pass at.
struct Evaluation {
    bool good = false;
    double worst_rel_err = 0;
};

// Trajectory digest recorded for accepted candidates so reporting never
// has to re-simulate.
struct TrajectorySummary {
    int peak_day = 0;    // earliest day label of the tracked maximum
    double peak_value = 0;
    std::vector<double> final_state;
};

using Evaluator = std::function<Evaluation(std::uint64_t index, std::span<const double> params)>;
using Summarizer = std::function<TrajectorySummary(std::uint64_t index, std::span<const double> params)>;

struct ScanResult {
    std::uint64_t good_count = 0;          // p
    double good_mass = 0;                  // G under the supplied q
    std::vector<std::uint64_t> good_indices; // ascending
};

struct AcceptedParam {
    std::uint64_t index = 0;
    std::vector<double> params;
    double worst_rel_err = 0;
    std::uint64_t multiplicity = 0; // times drawn among the N draws
    std::uint64_t first_draw = 0;   // earliest draw position that hit it
    TrajectorySummary summary;
};

// The estimated good-parameter set: distinct accepted candidates (sorted
// by grid index) with their draw multiplicities.
struct GoodSet {
    std::uint64_t n_sampled = 0;
    std::uint64_t seed = 0;
    std::vector<AcceptedParam> accepted;

    std::uint64_t n_distinct_good() const { return accepted.size(); }
};

// Evaluates every grid point, returning the exact good count p, the good
// mass G under q, and the good indices. Guarded against accidental
// enumeration of grids beyond `guard` points.
ScanResult exhaustive_scan(const CandidateGrid& grid, const DiscreteDist& dist,
                           const Evaluator& evaluate, std::uint64_t guard,
                           int workers);

// Rejection estimation: draws n indices from q, keeps those whose
// simulation passes the fitness map, and summarizes each distinct accepted
// candidate. The result is identical for any worker count.
GoodSet rejection_estimate(const CandidateGrid& grid, const DiscreteDist& dist,
                           std::uint64_t n, std::uint64_t seed,
                           const Evaluator& evaluate, const Summarizer& summarize,
                           int workers);

// Proportion of accepted draws in a pre-sample of size n_pre
// (multiplicities counted): the plug-in estimate of G.
double estimate_g_presample(const CandidateGrid& grid, const DiscreteDist& dist,
                            std::uint64_t n_pre, std::uint64_t seed,
                            const Evaluator& evaluate, int workers);

} // namespace epifit
