#include "rgenp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rgenp/errors.hpp"

namespace rgenp {

StatsRow summarize(std::span<const double> values, std::size_t dimension,
                   std::size_t iterations) {
  StatsRow row;
  row.dimension = dimension;
  row.iterations = iterations;
  std::vector<double> finite;
  finite.reserve(values.size());
  for (double v : values) {
    if (std::isfinite(v))
      finite.push_back(v);
    else
      ++row.failures;
  }
  std::sort(finite.begin(), finite.end());
  row.samples = finite.size();
  if (finite.empty()) {
    row.min = row.max = row.mean = row.std = std::nan("");
    return row;
  }
  row.min = finite.front();
  row.max = finite.back();
  double sum = 0.0;
  for (double v : finite) sum += v;
  row.mean = std::clamp(sum / static_cast<double>(finite.size()), row.min, row.max);
  if (finite.size() > 1) {
    double ss = 0.0;
    for (double v : finite) ss += (v - row.mean) * (v - row.mean);
    row.std = std::sqrt(ss / static_cast<double>(finite.size() - 1));
  }
  return row;
}

double median(std::span<const double> values) {
  if (values.empty()) throw Error("median: no values");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace rgenp
