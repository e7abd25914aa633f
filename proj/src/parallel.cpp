#include "parallel.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace epifit {

int resolve_workers(int requested)
{
    if (requested > 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_chunks(std::uint64_t count, int workers,
                     const std::function<void(std::uint64_t, std::uint64_t, int)>& body)
{
    if (count == 0) {
        return;
    }
    const int n = static_cast<int>(std::min<std::uint64_t>(
        static_cast<std::uint64_t>(resolve_workers(workers)), count));
    if (n <= 1) {
        body(0, count, 0);
        return;
    }

    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
        const std::uint64_t begin = count * static_cast<std::uint64_t>(c) / n;
        const std::uint64_t end = count * (static_cast<std::uint64_t>(c) + 1) / n;
        pool.emplace_back([&, begin, end, c] {
            try {
                body(begin, end, c);
            } catch (...) {
                errors[static_cast<std::size_t>(c)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace epifit
