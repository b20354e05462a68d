#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <vector>

#include <omp.h>

namespace geodrev {

// Every grid kernel has an OpenMP path and a plain loop kept as the reference
// implementation. Both return bit-identical results: reductions keep the
// smallest index among equal values and NaN counts as larger than anything.
enum class Exec { serial, parallel };

struct Extremum {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = 0;
};

// Reads GEODREV_THREADS and caps the OpenMP thread count accordingly.
void configure_threads_from_env();
int max_threads();

namespace detail {

inline bool beats(double candidate, std::size_t ci, const Extremum& best) {
  if (std::isnan(candidate)) return !std::isnan(best.value) || ci < best.index;
  if (std::isnan(best.value)) return false;
  return candidate > best.value || (candidate == best.value && ci < best.index);
}

// Keeps the exception raised at the smallest index so error reporting does
// not depend on scheduling.
struct FirstError {
  std::exception_ptr error;
  std::size_t index = std::numeric_limits<std::size_t>::max();

  void record(std::size_t i, std::exception_ptr e) {
#pragma omp critical(geodrev_first_error)
    {
      if (i < index) {
        index = i;
        error = std::move(e);
      }
    }
  }
  void rethrow() const {
    if (error) std::rethrow_exception(error);
  }
};

}  // namespace detail

// Component-wise maxima of fn(i) for i in [0, n); fn returns std::array<double, K>.
template <std::size_t K, class Fn>
std::array<Extremum, K> max_over(std::size_t n, Fn&& fn, Exec exec = Exec::parallel) {
  std::array<Extremum, K> best{};
  if (exec == Exec::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::array<double, K> v = fn(i);
      for (std::size_t k = 0; k < K; ++k) {
        if (detail::beats(v[k], i, best[k])) best[k] = {v[k], i};
      }
    }
    return best;
  }

  detail::FirstError failure;
#pragma omp parallel
  {
    std::array<Extremum, K> local{};
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
      try {
        const std::array<double, K> v = fn(i);
        for (std::size_t k = 0; k < K; ++k) {
          if (detail::beats(v[k], i, local[k])) local[k] = {v[k], i};
        }
      } catch (...) {
        failure.record(i, std::current_exception());
      }
    }
#pragma omp critical(geodrev_max_over)
    {
      for (std::size_t k = 0; k < K; ++k) {
        if (detail::beats(local[k].value, local[k].index, best[k])) best[k] = local[k];
      }
    }
  }
  failure.rethrow();
  return best;
}

template <class Fn>
Extremum max_over(std::size_t n, Fn&& fn, Exec exec = Exec::parallel) {
  return max_over<1>(n, [&](std::size_t i) { return std::array<double, 1>{fn(i)}; }, exec)[0];
}

// Smallest value of fn(i); ties keep the smallest index.
template <class Fn>
Extremum min_over(std::size_t n, Fn&& fn, Exec exec = Exec::parallel) {
  Extremum e = max_over(n, [&](std::size_t i) { return -fn(i); }, exec);
  e.value = -e.value;
  return e;
}

// out[i] = fn(i), preserving order.
template <class T, class Fn>
std::vector<T> map_over(std::size_t n, Fn&& fn, Exec exec = Exec::parallel) {
  std::vector<T> out(n);
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  detail::FirstError failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      out[i] = fn(i);
    } catch (...) {
      failure.record(i, std::current_exception());
    }
  }
  failure.rethrow();
  return out;
}

}  // namespace geodrev
