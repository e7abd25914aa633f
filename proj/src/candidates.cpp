#include "candidates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "rng.hpp"

namespace epifit {

namespace {

// Smallest number of decimals that represents `step` exactly (up to 12);
// grid values are rounded to this precision.
int step_decimals(double step)
{
    double scaled = step;
    for (int k = 0; k <= 12; ++k) {
        if (std::fabs(scaled - std::round(scaled)) <= 1e-9 * std::max(1.0, scaled)) {
            return k;
        }
        scaled *= 10.0;
    }
    return 12;
}

double round_to_decimals(double v, int decimals)
{
    const double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

} // namespace

std::vector<double> build_range_grid(double lo, double hi, double step,
                                     RangeEndpoints endpoints)
{
    if (!(lo < hi)) {
        throw ArgumentError("range grid requires lo < hi");
    }
    if (!(step > 0)) {
        throw ArgumentError("range grid requires step > 0");
    }
    const double span = hi - lo;
    const double ratio = span / step;
    const auto steps = static_cast<std::int64_t>(std::llround(ratio));
    if (steps <= 0 || std::fabs(span - static_cast<double>(steps) * step) > 1e-9) {
        throw ArgumentError("range (hi - lo) is not an integer multiple of step");
    }

    const int decimals = step_decimals(step);
    std::vector<double> values;
    const std::int64_t first = endpoints == RangeEndpoints::HalfOpen ? 1 : 0;
    values.reserve(static_cast<std::size_t>(steps - first + 1));
    for (std::int64_t k = first; k <= steps; ++k) {
        values.push_back(round_to_decimals(lo + static_cast<double>(k) * step, decimals));
    }
    return values;
}

CandidateGrid::CandidateGrid(std::vector<GridDim> dims) : dims_(std::move(dims))
{
    if (dims_.empty()) {
        throw ArgumentError("candidate grid needs at least one dimension");
    }
    cardinality_ = 1;
    for (const auto& dim : dims_) {
        if (dim.values.empty()) {
            throw ArgumentError("grid dimension '" + dim.name + "' is empty");
        }
        for (std::size_t i = 1; i < dim.values.size(); ++i) {
            if (!(dim.values[i - 1] < dim.values[i])) {
                throw ArgumentError("grid dimension '" + dim.name +
                                    "' values must be strictly increasing");
            }
        }
        const auto count = static_cast<std::uint64_t>(dim.values.size());
        if (cardinality_ > std::numeric_limits<std::uint64_t>::max() / count / 2) {
            throw ArgumentError("grid cardinality overflows");
        }
        cardinality_ *= count;
    }
}

void CandidateGrid::decode(std::uint64_t index, std::span<double> out) const
{
    if (index >= cardinality_) {
        throw ArgumentError("grid index out of range");
    }
    if (out.size() != dims_.size()) {
        throw ArgumentError("decode output arity mismatch");
    }
    for (std::size_t d = dims_.size(); d-- > 0;) {
        const auto count = static_cast<std::uint64_t>(dims_[d].values.size());
        out[d] = dims_[d].values[static_cast<std::size_t>(index % count)];
        index /= count;
    }
}

std::vector<double> CandidateGrid::param_at(std::uint64_t index) const
{
    std::vector<double> out(dims_.size());
    decode(index, out);
    return out;
}

std::uint64_t CandidateGrid::index_of(std::span<const double> values) const
{
    if (values.size() != dims_.size()) {
        throw ArgumentError("index_of arity mismatch");
    }
    std::uint64_t index = 0;
    for (std::size_t d = 0; d < dims_.size(); ++d) {
        const auto& vals = dims_[d].values;
        const auto it = std::lower_bound(vals.begin(), vals.end(), values[d]);
        if (it == vals.end() || *it != values[d]) {
            throw ArgumentError("value not on grid dimension '" + dims_[d].name + "'");
        }
        index = index * vals.size() + static_cast<std::uint64_t>(it - vals.begin());
    }
    return index;
}

DiscreteDist DiscreteDist::uniform(std::uint64_t size)
{
    if (size == 0) {
        throw ArgumentError("distribution over an empty grid");
    }
    DiscreteDist d;
    d.size_ = size;
    return d;
}

DiscreteDist DiscreteDist::explicit_weights(std::vector<double> weights)
{
    if (weights.empty()) {
        throw ArgumentError("distribution over an empty grid");
    }
    DiscreteDist d;
    d.size_ = weights.size();
    d.cumulative_.resize(weights.size());
    double sum = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] > 0)) {
            throw ArgumentError("distribution weights must be strictly positive");
        }
        sum += weights[i];
        d.cumulative_[i] = sum;
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
        throw ArgumentError("distribution weights must sum to 1");
    }
    d.cumulative_.back() = 1.0;
    return d;
}

double DiscreteDist::mass_at(std::uint64_t index) const
{
    if (index >= size_) {
        throw ArgumentError("distribution index out of range");
    }
    if (is_uniform()) {
        return 1.0 / static_cast<double>(size_);
    }
    const auto i = static_cast<std::size_t>(index);
    return i == 0 ? cumulative_[0] : cumulative_[i] - cumulative_[i - 1];
}

std::uint64_t DiscreteDist::sample_index(std::uint64_t seed, std::uint64_t draw) const
{
    if (is_uniform()) {
        return rng::bounded_draw(seed, draw, size_);
    }
    const double u = rng::uniform_unit(seed, draw);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto i = static_cast<std::uint64_t>(it - cumulative_.begin());
    return std::min(i, size_ - 1);
}

std::vector<std::uint64_t> sample(const DiscreteDist& dist, std::uint64_t n,
                                  std::uint64_t seed)
{
    std::vector<std::uint64_t> draws(static_cast<std::size_t>(n));
    for (std::uint64_t i = 0; i < n; ++i) {
        draws[static_cast<std::size_t>(i)] = dist.sample_index(seed, i);
    }
    return draws;
}

} // namespace epifit
