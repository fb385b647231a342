#include "spinchain/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace spinchain {

namespace {
thread_local bool in_worker = false;
}

int thread_count() {
    if(const char *env = std::getenv("SPINCHAIN_THREADS")) {
        try {
            int n = std::stoi(env);
            if(n > 0) return n;
        } catch(const std::exception &) {}
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_blocks(std::size_t n, std::size_t blocks,
                     const std::function<void(std::size_t, std::size_t, std::size_t)> &body) {
    if(n == 0) return;
    blocks = std::clamp<std::size_t>(blocks, 1, n);
    auto range = [&](std::size_t b) { return std::pair{b * n / blocks, (b + 1) * n / blocks}; };

    auto workers = static_cast<std::size_t>(thread_count());
    if(in_worker || workers <= 1 || blocks == 1) {
        for(std::size_t b = 0; b < blocks; ++b) {
            auto [lo, hi] = range(b);
            body(b, lo, hi);
        }
        return;
    }

    workers = std::min(workers, blocks);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for(std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                in_worker = true;
                // static round-robin assignment keeps block->thread mapping fixed
                for(std::size_t b = w; b < blocks; b += workers) {
                    try {
                        auto [lo, hi] = range(b);
                        body(b, lo, hi);
                    } catch(...) {
                        std::lock_guard lock(error_mutex);
                        if(!first_error) first_error = std::current_exception();
                    }
                }
                in_worker = false;
            });
        }
    }
    if(first_error) std::rethrow_exception(first_error);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)> &body) {
    parallel_blocks(n, static_cast<std::size_t>(thread_count()),
                    [&](std::size_t, std::size_t lo, std::size_t hi) { body(lo, hi); });
}

} // namespace spinchain
