#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rgenp/pipeline.hpp"
#include "rgenp/report.hpp"
#include "rgenp/testgen.hpp"

namespace rgenp {

enum class Method { gepp, genp, genp_plan };

std::string to_string(Method method);
/// gepp, genp, genp+plan.
std::optional<Method> parse_method(const std::string& text);

struct ExperimentConfig {
  std::vector<std::size_t> dims{64, 256};
  std::size_t trials = 100;
  Method method = Method::genp_plan;
  PreconditionPlan plan;  // used by genp+plan only
  std::uint64_t master_seed = 0;
  std::size_t nullity = kDefaultNullity;
  std::size_t workers = 1;

  /// Throws Error unless every dimension is a power of two >= 8 and
  /// trials >= 1.
  void validate() const;
  ConfigEcho echo() const;
};

/// Residual history of one trial; empty when the solve failed.
struct TrialResult {
  std::size_t dimension = 0;
  std::size_t trial = 0;
  std::vector<double> history;
  std::optional<std::string> failure;
};

struct ExperimentResult {
  TableReport table;
  std::vector<TrialResult> trials;  // ordered by (dimension, trial)
};

/// The instance for (master, trial): identical across methods and plans, so
/// GENP with and without multipliers sees the same systems.
Seed trial_seed(std::uint64_t master, std::size_t trial);

/// One StatsRow per (dimension, refinement count). Failed trials enter the
/// row as failures, not as samples.
ExperimentResult run_residual_experiment(const ExperimentConfig& config);

/// min / max / mean / std of ||A^-1|| over the instances of `config`.
TableReport run_inverse_norm_experiment(const ExperimentConfig& config);

/// Runs task(i) for i in [0, count) on up to `workers` threads. The first
/// exception thrown by a task is rethrown after all threads join.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task);

}  // namespace rgenp
