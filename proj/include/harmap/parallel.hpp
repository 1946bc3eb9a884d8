#pragma once

#include <cstddef>
#include <functional>

namespace harmap::parallel {

/// Caps the worker count for every subsequent parallel call. 0 restores the
/// library default. Results never depend on this value.
void set_max_threads(std::size_t n);
std::size_t max_threads();

/// Block size used to split index ranges. Fixed so that the reduction tree,
/// and with it every floating-point sum, is independent of thread count.
inline constexpr std::size_t kGrain = 1024;

/// Runs body(i) for i in [0, n). Bodies must write to disjoint memory.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

/// Deterministic sum of term(i) over [0, n): sequential within fixed-size
/// blocks, blocks combined in a fixed binary tree.
double sum(std::size_t n, const std::function<double(std::size_t)>& term);

/// Deterministic maximum of term(i); returns the first argmax on ties.
struct MaxResult {
  double value = 0.0;
  std::size_t index = 0;
};
MaxResult max(std::size_t n, const std::function<double(std::size_t)>& term);

}  // namespace harmap::parallel
