#include "rgenp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "rgenp/errors.hpp"
#include "rgenp/factorization.hpp"
#include "rgenp/transforms.hpp"

namespace rgenp {

namespace {

enum : std::uint64_t { kTagPlan = 0x9a };

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::gepp: return "gepp";
    case Method::genp: return "genp";
    case Method::genp_plan: return "genp+plan";
  }
  return "gepp";
}

std::optional<Method> parse_method(const std::string& text) {
  if (text == "gepp") return Method::gepp;
  if (text == "genp") return Method::genp;
  if (text == "genp+plan" || text == "plan") return Method::genp_plan;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (dims.empty()) throw Error("experiment: no dimensions");
  for (std::size_t n : dims)
    if (n < 8 || !is_power_of_two(n))
      throw Error("experiment: dimension " + std::to_string(n) +
                  " is not a power of two >= 8");
  if (trials == 0) throw Error("experiment: trials must be at least 1");
  if (method == Method::genp_plan && plan.zero_pivot_threshold < 0.0)
    throw Error("experiment: negative zero-pivot threshold");
}

ConfigEcho ExperimentConfig::echo() const {
  std::string d;
  for (std::size_t n : dims) d += (d.empty() ? "" : ",") + std::to_string(n);
  ConfigEcho e{{"method", to_string(method)},
               {"dims", d},
               {"trials", std::to_string(trials)},
               {"nullity", std::to_string(nullity)},
               {"master_seed", std::to_string(master_seed)}};
  if (method == Method::genp_plan) {
    e.emplace_back("left", to_string(plan.left));
    e.emplace_back("right", to_string(plan.right));
    e.emplace_back("refinement_steps", std::to_string(plan.refinement_steps));
  }
  return e;
}

Seed trial_seed(std::uint64_t master, std::size_t trial) {
  return Seed{master, static_cast<std::uint64_t>(trial)};
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ExperimentResult run_residual_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::size_t steps =
      config.method == Method::genp_plan ? config.plan.refinement_steps : 0;

  ExperimentResult result;
  result.trials.resize(config.dims.size() * config.trials);
  parallel_for(result.trials.size(), config.workers, [&](std::size_t idx) {
    const std::size_t n = config.dims[idx / config.trials];
    const std::size_t trial = idx % config.trials;
    const Seed seed = trial_seed(config.master_seed, trial);
    TrialResult& out = result.trials[idx];
    out.dimension = n;
    out.trial = trial;

    const HardInstance inst = hard_matrix(seed, n, config.nullity);
    switch (config.method) {
      case Method::gepp: {
        const Vector x = lu_solve(gepp_factor(inst.matrix), inst.rhs);
        out.history.push_back(relative_residual(inst.matrix, x, inst.rhs));
        break;
      }
      case Method::genp:
      case Method::genp_plan: {
        const PreconditionPlan plan = config.method == Method::genp
                                          ? PreconditionPlan::identity()
                                          : config.plan;
        const SolveOutcome o =
            preconditioned_solve(inst.matrix, inst.rhs, plan, seed.derive(kTagPlan));
        if (o.failure)
          out.failure = o.failure->message;
        else
          out.history = o.residual_history;
        break;
      }
    }
  });

  TableReport& table = result.table;
  table.title = "Relative residual norms, " + to_string(config.method) +
                (config.method == Method::genp_plan ? " (" + describe(config.plan) + ")" : "");
  table.quantity = "||A x - b|| / ||b||";
  table.master_seed = config.master_seed;
  table.config = config.echo();
  for (std::size_t d = 0; d < config.dims.size(); ++d)
    for (std::size_t it = 0; it <= steps; ++it) {
      std::vector<double> values;
      values.reserve(config.trials);
      for (std::size_t t = 0; t < config.trials; ++t) {
        const TrialResult& tr = result.trials[d * config.trials + t];
        values.push_back(tr.history.size() > it ? tr.history[it]
                                                : std::numeric_limits<double>::infinity());
      }
      table.rows.push_back(summarize(values, config.dims[d], it));
    }
  return result;
}

TableReport run_inverse_norm_experiment(const ExperimentConfig& config) {
  config.validate();
  TableReport table;
  table.title = "Norms of the inverses of the input matrices";
  table.quantity = "||A^-1||";
  table.master_seed = config.master_seed;
  table.config = config.echo();
  table.config.front().second = "inverse-norm";
  std::vector<double> norms(config.dims.size() * config.trials);
  parallel_for(norms.size(), config.workers, [&](std::size_t idx) {
    const std::size_t n = config.dims[idx / config.trials];
    norms[idx] =
        hard_matrix(trial_seed(config.master_seed, idx % config.trials), n, config.nullity)
            .inverse_norm;
  });
  for (std::size_t d = 0; d < config.dims.size(); ++d)
    table.rows.push_back(summarize(
        std::span<const double>(norms).subspan(d * config.trials, config.trials),
        config.dims[d], 0));
  return table;
}

}  // namespace rgenp
