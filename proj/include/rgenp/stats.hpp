#pragma once

#include <cstddef>
#include <span>

namespace rgenp {

/// Aggregate of one table row: min, max, mean and sample standard deviation
/// (divisor count - 1) over the finite values of a run.
struct StatsRow {
  std::size_t dimension = 0;
  std::size_t iterations = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double std = 0.0;
  std::size_t failures = 0;
  std::size_t samples = 0;
};

/// Values are sorted before accumulation so the result does not depend on
/// the order trials finished in. Non-finite values are counted as failures.
StatsRow summarize(std::span<const double> values, std::size_t dimension = 0,
                   std::size_t iterations = 0);

double median(std::span<const double> values);

}  // namespace rgenp
