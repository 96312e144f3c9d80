#pragma once

#include <cstdint>
#include <exception>
#include <string>
#include <vector>

#include "slfv/errors.hpp"
#include "slfv/rng.hpp"

namespace slfv {

namespace detail {

template <class F>
auto invoke_replica(F& f, std::size_t index, std::uint64_t master) {
    try {
        return f(index, replica_seed(master, index));
    } catch (const BudgetExceeded& e) {
        throw BudgetExceeded("replica " + std::to_string(index) + ": " + e.what());
    } catch (const ContractViolation& e) {
        throw ContractViolation("replica " + std::to_string(index) + ": " + e.what());
    }
}

}  // namespace detail

/// Reference path: replicas one after another.
/// `f(index, seed)` must return a default-constructible result.
template <class F>
auto run_replicas_serial(std::size_t reps, std::uint64_t master, F&& f) {
    using R = decltype(f(std::size_t{}, std::uint64_t{}));
    std::vector<R> out(reps);
    for (std::size_t i = 0; i < reps; ++i) out[i] = detail::invoke_replica(f, i, master);
    return out;
}

/// OpenMP path. Results land in slots indexed by replica, so the output is
/// identical to the serial path for any worker count. If several replicas
/// throw, the one with the lowest index is rethrown.
template <class F>
auto run_replicas_parallel(std::size_t reps, std::uint64_t master, int workers, F&& f) {
    using R = decltype(f(std::size_t{}, std::uint64_t{}));
    std::vector<R> out(reps);
    std::vector<std::exception_ptr> errors(reps);
    const long long n = static_cast<long long>(reps);
#ifdef _OPENMP
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
#endif
    for (long long i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = detail::invoke_replica(f, static_cast<std::size_t>(i), master);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    (void)workers;
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

template <class F>
auto run_replicas(std::size_t reps, std::uint64_t master, int workers, F&& f) {
    if (workers <= 1) return run_replicas_serial(reps, master, std::forward<F>(f));
    return run_replicas_parallel(reps, master, workers, std::forward<F>(f));
}

}  // namespace slfv
