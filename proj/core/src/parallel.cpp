#include "hexakin/parallel.hpp"

#include <algorithm>
#include <cstdlib>

namespace hexakin {

int resolve_jobs(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HEXAKIN_JOBS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_chunks(std::uint64_t total, int jobs,
                     const std::function<void(int, std::uint64_t, std::uint64_t)>& fn) {
    jobs = std::max(1, jobs);
    if (total == 0) return;
    const auto n = static_cast<std::uint64_t>(jobs);
    const std::uint64_t chunk = (total + n - 1) / n;
    if (jobs == 1) {
        fn(0, 0, total);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(jobs));
    for (int i = 0; i < jobs; ++i) {
        const std::uint64_t begin = std::min(total, static_cast<std::uint64_t>(i) * chunk);
        const std::uint64_t end = std::min(total, begin + chunk);
        threads.emplace_back([&fn, i, begin, end] { fn(i, begin, end); });
    }
    for (auto& t : threads) t.join();
}

} // namespace hexakin
