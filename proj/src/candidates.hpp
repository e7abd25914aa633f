#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace epifit {

enum class RangeEndpoints { HalfOpen, Closed };

// Candidate values {lo+step, ..., hi} for half-open (lo, hi] ranges and
// {lo, lo+step, ..., hi} for closed [lo, hi] ranges. Values are computed
// as lo + k*step and then rounded to the step's decimal precision so that
// grid points are exact decimals (a 0.001-step grid contains exactly
// 0.250, not 0.250000000000000004).
std::vector<double> build_range_grid(double lo, double hi, double step,
                                     RangeEndpoints endpoints);

struct GridDim {
    std::string name;
    std::vector<double> values; // strictly increasing
};

// A finite Cartesian product of per-dimension candidate value lists.
// Indices are mixed-radix with the last-listed dimension fastest, so
// persisted indices stay portable across runs.
class CandidateGrid {
public:
    explicit CandidateGrid(std::vector<GridDim> dims);

    std::uint64_t cardinality() const { return cardinality_; }
    std::size_t rank() const { return dims_.size(); }
    const std::vector<GridDim>& dims() const { return dims_; }

    void decode(std::uint64_t index, std::span<double> out) const;
    std::vector<double> param_at(std::uint64_t index) const;
    std::uint64_t index_of(std::span<const double> values) const;

private:
    std::vector<GridDim> dims_;
    std::uint64_t cardinality_ = 0;
};

// Discrete sampling distribution over grid indices.
class DiscreteDist {
public:
    static DiscreteDist uniform(std::uint64_t size);
    static DiscreteDist explicit_weights(std::vector<double> weights);

    bool is_uniform() const { return cumulative_.empty(); }
    std::uint64_t size() const { return size_; }
    double mass_at(std::uint64_t index) const;

    // Draw `draw` of stream `seed`; a pure function of (seed, draw).
    std::uint64_t sample_index(std::uint64_t seed, std::uint64_t draw) const;

private:
    DiscreteDist() = default;

    std::uint64_t size_ = 0;
    std::vector<double> cumulative_; // empty for uniform
};

// n independent draws from q; deterministic given the seed and safe to
// partition across workers by draw ranges.
std::vector<std::uint64_t> sample(const DiscreteDist& dist, std::uint64_t n,
                                  std::uint64_t seed);

} // namespace epifit
