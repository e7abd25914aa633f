#include "estimator.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "errors.hpp"
#include "parallel.hpp"

namespace epifit {

namespace {

struct DrawRecord {
    std::uint64_t index = 0;
    double worst_rel_err = 0;
    bool good = false;
};

// Runs the evaluator over a draw range, annotating failures with the
// offending grid index.
void evaluate_range(const CandidateGrid& grid, const DiscreteDist& dist,
                    std::uint64_t seed, std::uint64_t begin, std::uint64_t end,
                    const Evaluator& evaluate, std::vector<DrawRecord>& records)
{
    std::vector<double> params(grid.rank());
    for (std::uint64_t i = begin; i < end; ++i) {
        const std::uint64_t index = dist.sample_index(seed, i);
        grid.decode(index, params);
        auto& rec = records[static_cast<std::size_t>(i)];
        rec.index = index;
        try {
            const Evaluation ev = evaluate(index, params);
            rec.good = ev.good;
            rec.worst_rel_err = ev.worst_rel_err;
        } catch (const Error& e) {
            throw SimulationError(std::string(e.what()) + " [grid index " +
                                      std::to_string(index) + "]",
                                  static_cast<int>(i));
        }
    }
}

} // namespace

ScanResult exhaustive_scan(const CandidateGrid& grid, const DiscreteDist& dist,
                           const Evaluator& evaluate, std::uint64_t guard,
                           int workers)
{
    if (dist.size() != grid.cardinality()) {
        throw ArgumentError("distribution size does not match grid cardinality");
    }
    if (grid.cardinality() > guard) {
        throw GuardError("grid cardinality " + std::to_string(grid.cardinality()) +
                         " exceeds the exhaustive-scan guard of " + std::to_string(guard));
    }

    const int n_workers = resolve_workers(workers);
    std::vector<std::vector<std::uint64_t>> good_per_chunk(
        static_cast<std::size_t>(n_workers));
    parallel_chunks(grid.cardinality(), n_workers,
                    [&](std::uint64_t begin, std::uint64_t end, int chunk) {
                        std::vector<double> params(grid.rank());
                        auto& good = good_per_chunk[static_cast<std::size_t>(chunk)];
                        for (std::uint64_t index = begin; index < end; ++index) {
                            grid.decode(index, params);
                            try {
                                if (evaluate(index, params).good) {
                                    good.push_back(index);
                                }
                            } catch (const Error& e) {
                                throw SimulationError(std::string(e.what()) +
                                                          " [grid index " +
                                                          std::to_string(index) + "]",
                                                      0);
                            }
                        }
                    });

    ScanResult result;
    for (const auto& chunk : good_per_chunk) {
        result.good_indices.insert(result.good_indices.end(), chunk.begin(), chunk.end());
    }
    result.good_count = result.good_indices.size();
    for (std::uint64_t index : result.good_indices) {
        result.good_mass += dist.mass_at(index);
    }
    return result;
}

GoodSet rejection_estimate(const CandidateGrid& grid, const DiscreteDist& dist,
                           std::uint64_t n, std::uint64_t seed,
                           const Evaluator& evaluate, const Summarizer& summarize,
                           int workers)
{
    if (n < 1) {
        throw ArgumentError("rejection estimation needs at least one draw");
    }
    if (dist.size() != grid.cardinality()) {
        throw ArgumentError("distribution size does not match grid cardinality");
    }

    std::vector<DrawRecord> records(static_cast<std::size_t>(n));
    parallel_chunks(n, workers, [&](std::uint64_t begin, std::uint64_t end, int) {
        evaluate_range(grid, dist, seed, begin, end, evaluate, records);
    });

    // Merge in draw order; the accepted set is keyed by grid index so the
    // outcome is independent of chunking.
    std::map<std::uint64_t, AcceptedParam> accepted;
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto& rec = records[static_cast<std::size_t>(i)];
        if (!rec.good) {
            continue;
        }
        auto [it, inserted] = accepted.try_emplace(rec.index);
        if (inserted) {
            it->second.index = rec.index;
            it->second.params = grid.param_at(rec.index);
            it->second.worst_rel_err = rec.worst_rel_err;
            it->second.first_draw = i;
        }
        it->second.multiplicity += 1;
    }

    GoodSet result;
    result.n_sampled = n;
    result.seed = seed;
    result.accepted.reserve(accepted.size());
    for (auto& [index, entry] : accepted) {
        if (summarize) {
            entry.summary = summarize(index, entry.params);
        }
        result.accepted.push_back(std::move(entry));
    }
    return result;
}

double estimate_g_presample(const CandidateGrid& grid, const DiscreteDist& dist,
                            std::uint64_t n_pre, std::uint64_t seed,
                            const Evaluator& evaluate, int workers)
{
    if (n_pre < 1) {
        throw ArgumentError("pre-sample needs at least one draw");
    }
    if (dist.size() != grid.cardinality()) {
        throw ArgumentError("distribution size does not match grid cardinality");
    }

    std::vector<DrawRecord> records(static_cast<std::size_t>(n_pre));
    parallel_chunks(n_pre, workers, [&](std::uint64_t begin, std::uint64_t end, int) {
        evaluate_range(grid, dist, seed, begin, end, evaluate, records);
    });
    std::uint64_t good = 0;
    for (const auto& rec : records) {
        good += rec.good ? 1 : 0;
    }
    return static_cast<double>(good) / static_cast<double>(n_pre);
}

} // namespace epifit
