#include "harmap/parallel.hpp"

#include <oneapi/tbb/blocked_range.h>
#include <oneapi/tbb/global_control.h>
#include <oneapi/tbb/parallel_for.h>
#include <oneapi/tbb/parallel_reduce.h>
#include <oneapi/tbb/partitioner.h>

#include <limits>
#include <memory>
#include <mutex>

namespace harmap::parallel {
namespace {

std::mutex g_control_mutex;
std::unique_ptr<tbb::global_control> g_control;
std::size_t g_max_threads = 0;

}  // namespace

void set_max_threads(std::size_t n) {
  std::lock_guard lock(g_control_mutex);
  g_control.reset();
  g_max_threads = n;
  if (n > 0) {
    g_control = std::make_unique<tbb::global_control>(
        tbb::global_control::max_allowed_parallelism, n);
  }
}

std::size_t max_threads() {
  return tbb::global_control::active_value(
      tbb::global_control::max_allowed_parallelism);
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  tbb::parallel_for(
      tbb::blocked_range<std::size_t>(0, n, kGrain),
      [&](const tbb::blocked_range<std::size_t>& r) {
        for (std::size_t i = r.begin(); i != r.end(); ++i) body(i);
      },
      tbb::simple_partitioner());
}

double sum(std::size_t n, const std::function<double(std::size_t)>& term) {
  if (n == 0) return 0.0;
  return tbb::parallel_deterministic_reduce(
      tbb::blocked_range<std::size_t>(0, n, kGrain), 0.0,
      [&](const tbb::blocked_range<std::size_t>& r, double acc) {
        double local = 0.0;
        for (std::size_t i = r.begin(); i != r.end(); ++i) local += term(i);
        return acc + local;
      },
      [](double a, double b) { return a + b; });
}

MaxResult max(std::size_t n, const std::function<double(std::size_t)>& term) {
  MaxResult init{-std::numeric_limits<double>::infinity(), 0};
  if (n == 0) return init;
  return tbb::parallel_deterministic_reduce(
      tbb::blocked_range<std::size_t>(0, n, kGrain), init,
      [&](const tbb::blocked_range<std::size_t>& r, MaxResult acc) {
        for (std::size_t i = r.begin(); i != r.end(); ++i) {
          const double v = term(i);
          if (v > acc.value) acc = {v, i};
        }
        return acc;
      },
      [](const MaxResult& a, const MaxResult& b) {
        if (b.value > a.value) return b;
        if (b.value == a.value && b.index < a.index) return b;
        return a;
      });
}

}  // namespace harmap::parallel
