// Command-line driver: residual experiments, verification suites, instance
// generation and single preconditioned solves.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rgenp/errors.hpp"
#include "rgenp/exact.hpp"
#include "rgenp/experiment.hpp"
#include "rgenp/pipeline.hpp"
#include "rgenp/report.hpp"
#include "rgenp/testgen.hpp"
#include "rgenp/verify.hpp"

using namespace rgenp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string seed = "1";
  std::size_t trials = 0;  // 0: the command's own default
  std::vector<std::size_t> dims;
  std::string format = "markdown";
  std::string out;
  std::size_t workers = 1;

  std::uint64_t master() const {
    const auto s = parse_seed(seed);
    if (!s) throw UsageError("invalid seed '" + seed + "' (decimal or 0x hex)");
    return *s;
  }
  OutputFormat output_format() const {
    const auto f = parse_output_format(format);
    if (!f) throw UsageError("unknown format '" + format + "'");
    return *f;
  }
  std::size_t trials_or(std::size_t fallback) const { return trials ? trials : fallback; }
};

MultiplierKind multiplier(const std::string& text) {
  const auto k = parse_multiplier_kind(text);
  if (!k) throw UsageError("unknown multiplier '" + text + "'");
  return *k;
}

Vector read_vector(const std::string& path) {
  const RealMatrix m = read_matrix_file(path);
  if (m.cols() != 1 && m.rows() != 1)
    throw ParseError(path + ": right-hand side must be a single row or column");
  return Vector(m.data().begin(), m.data().end());
}

int finish(const CheckReport& report, const Globals& g) {
  emit_report(report, g.output_format(), g.out);
  return report.passed() ? kExitOk : kExitFailed;
}

void add_multiplier_options(CLI::App* cmd, std::string& left, std::string& right,
                            std::size_t& refine) {
  const std::vector<std::string> kinds{"none",     "gaussian", "circulant",
                                       "toeplitz", "hankel",   "finite-set"};
  cmd->add_option("--left", left, "left multiplier F")->check(CLI::IsMember(kinds));
  cmd->add_option("--right", right, "right multiplier H")->check(CLI::IsMember(kinds));
  cmd->add_option("--refine", refine, "iterative refinement steps");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized preconditioning for Gaussian elimination without pivoting"};
  app.require_subcommand(1);
  Globals g;
  auto add_globals = [&](CLI::App* cmd) {
    cmd->add_option("--seed", g.seed, "master seed, decimal or 0x hex");
    cmd->add_option("--trials", g.trials, "trials per dimension or sample count");
    cmd->add_option("--dims", g.dims, "dimensions, e.g. --dims 64 256")->delimiter(',');
    cmd->add_option("--format", g.format, "csv, markdown or json")
        ->check(CLI::IsMember({"csv", "markdown", "md", "json"}));
    cmd->add_option("--out", g.out, "output file (default standard output)");
    cmd->add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
  };
  add_globals(&app);

  // experiment
  auto* exp = app.add_subcommand("experiment", "residual tables on hard instances");
  add_globals(exp);
  std::string method = "genp+plan";
  std::string left = "gaussian";
  std::string right = "gaussian";
  std::size_t refine = 0;
  std::size_t nullity = kDefaultNullity;
  bool large = false;
  std::size_t large_trials = 10;
  exp->add_option("--method", method, "gepp, genp, genp+plan or inverse-norm")
      ->check(CLI::IsMember({"gepp", "genp", "genp+plan", "plan", "inverse-norm"}));
  add_multiplier_options(exp, left, right, refine);
  exp->add_option("--nullity", nullity, "nullity h of the leading block");
  exp->add_flag("--large", large, "append n = 1024 at a reduced trial count");
  exp->add_option("--large-trials", large_trials, "trials for n = 1024");

  // verify
  auto* ver = app.add_subcommand("verify", "verification suites");
  add_globals(ver);
  ver->require_subcommand(1);
  std::size_t max_size = 12;
  std::size_t k = 3;
  long long delta_lo = 0;
  long long delta_hi = 9;
  auto* v_spec = ver->add_subcommand("spectral", "singular-value bounds for FA and AH");
  auto* v_tail = ver->add_subcommand("tails", "Gaussian norm and condition tails");
  auto* v_fin = ver->add_subcommand("finite-set", "exact singularity frequencies");
  auto* v_safe = ver->add_subcommand("safety", "pivot bounds and Schur complement algebra");
  auto* v_pert = ver->add_subcommand("perturbation", "inverse perturbation bound");
  for (auto* c : {v_spec, v_tail, v_fin, v_safe, v_pert}) add_globals(c);
  for (auto* c : {v_spec, v_pert})
    c->add_option("--max-size", max_size, "largest dimension")->check(CLI::Range(2, 32));
  v_fin->add_option("--k", k, "matrix order")->check(CLI::Range(1, 6));
  v_fin->add_option("--delta-min", delta_lo, "smallest element of the set");
  v_fin->add_option("--delta-max", delta_hi, "largest element of the set");

  // generate
  auto* gen = app.add_subcommand("generate", "write a hard instance");
  add_globals(gen);
  std::size_t gen_n = 64;
  std::size_t gen_h = kDefaultNullity;
  std::size_t gen_trial = 0;
  std::string rhs_out;
  gen->add_option("-n,--n", gen_n, "dimension (power of two >= 8)");
  gen->add_option("--nullity", gen_h, "nullity h of the leading block");
  gen->add_option("--trial", gen_trial, "trial index under the master seed");
  gen->add_option("--rhs-out", rhs_out, "also write the right-hand side here");

  // solve
  auto* sol = app.add_subcommand("solve", "preconditioned GENP solve of A x = b");
  add_globals(sol);
  std::string matrix_path;
  std::string rhs_path;
  bool as_json = false;
  bool emit_solution = false;
  std::string s_left = "gaussian";
  std::string s_right = "gaussian";
  std::size_t s_refine = 0;
  sol->add_option("--matrix", matrix_path, "matrix file")->required();
  sol->add_option("--rhs", rhs_path, "right-hand side file")->required();
  add_multiplier_options(sol, s_left, s_right, s_refine);
  sol->add_flag("--json", as_json, "print the outcome as JSON");
  sol->add_flag("--emit-solution", emit_solution, "include x in the output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*exp) {
      ExperimentConfig cfg;
      if (!g.dims.empty()) cfg.dims = g.dims;
      cfg.trials = g.trials_or(100);
      cfg.master_seed = g.master();
      cfg.nullity = nullity;
      cfg.workers = g.workers;
      cfg.plan = {multiplier(left), multiplier(right), refine, 0.0};
      if (method != "inverse-norm") cfg.method = *parse_method(method);
      try {
        cfg.validate();
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      auto run = [&](const ExperimentConfig& c) {
        return method == "inverse-norm" ? run_inverse_norm_experiment(c)
                                        : run_residual_experiment(c).table;
      };
      TableReport table = run(cfg);
      if (large) {
        ExperimentConfig big = cfg;
        big.dims = {1024};
        big.trials = large_trials;
        const TableReport extra = run(big);
        table.rows.insert(table.rows.end(), extra.rows.begin(), extra.rows.end());
        table.config.emplace_back("large_trials", std::to_string(large_trials));
      }
      emit_report(table, g.output_format(), g.out);
      return kExitOk;
    }

    if (*ver) {
      const Seed seed{g.master(), 0};
      if (*v_spec) return finish(check_spectral_bounds(seed, g.trials_or(1000), max_size), g);
      if (*v_pert) return finish(check_perturbation(seed, g.trials_or(1000), max_size), g);
      if (*v_tail) {
        const std::size_t samples = g.trials_or(10000);
        if (samples < 10000) throw UsageError("tails needs at least 10000 samples");
        return finish(check_tail_bounds(seed, samples), g);
      }
      if (*v_fin) {
        if (delta_hi < delta_lo) throw UsageError("empty set: --delta-max below --delta-min");
        if (delta_hi - delta_lo >= 1000) throw UsageError("set larger than 1000 elements");
        return finish(check_finite_set_singularity(seed, k, FiniteSet::range(delta_lo, delta_hi),
                                                   g.trials_or(100000)),
                      g);
      }
      if (*v_safe) {
        CheckReport report = check_safety_bounds(seed, g.trials_or(100));
        const CheckReport algebra = check_schur_algebra(seed, g.trials_or(200));
        report.suite = "safety bounds and Schur complement algebra";
        report.records.insert(report.records.end(), algebra.records.begin(),
                              algebra.records.end());
        return finish(report, g);
      }
    }

    if (*gen) {
      const std::uint64_t master = g.master();
      if (gen_n < 8 || !is_power_of_two(gen_n) || gen_h >= gen_n / 2)
        throw UsageError("generate: n must be a power of two >= 8 and h < n/2");
      const HardInstance inst = hard_matrix(trial_seed(master, gen_trial), gen_n, gen_h);
      std::ostringstream os;
      os << "# seed=0x" << std::hex << master << std::dec << " trial=" << gen_trial
         << " n=" << inst.n << " h=" << inst.h << '\n';
      write_matrix(os, inst.matrix);
      if (g.out.empty() || g.out == "-") {
        std::cout << os.str();
      } else {
        std::ofstream f(g.out);
        if (!(f << os.str())) throw Error("cannot write " + g.out);
      }
      if (!rhs_out.empty()) {
        RealMatrix b(inst.n, 1, inst.rhs);
        write_matrix_file(rhs_out, b);
      }
      return kExitOk;
    }

    if (*sol) {
      const RealMatrix a = read_matrix_file(matrix_path);
      const Vector b = read_vector(rhs_path);
      if (!a.square() || b.size() != a.rows())
        throw UsageError("solve: matrix must be square and match the right-hand side");
      const PreconditionPlan plan{multiplier(s_left), multiplier(s_right), s_refine, 0.0};
      const Seed seed{g.master(), 0};
      const SolveOutcome o = preconditioned_solve(a, b, plan, seed);

      std::ostringstream text;
      if (as_json || g.output_format() == OutputFormat::json) {
        nlohmann::json j;
        j["plan"] = {{"left", s_left}, {"right", s_right}, {"refinement_steps", s_refine}};
        j["seed"] = seed.master;
        j["dimension"] = a.rows();
        if (o.failure) {
          j["relative_residual"] = nullptr;
          j["failure"] = {{"kind", o.failure->kind},
                          {"message", o.failure->message},
                          {"step", o.failure->step},
                          {"pivot", o.failure->pivot}};
        } else {
          j["relative_residual"] = o.relative_residual;
          j["failure"] = nullptr;
        }
        j["residual_history"] = o.residual_history;
        double min_pivot = std::numeric_limits<double>::infinity();
        for (const PivotRecord& r : o.safety.steps) min_pivot = std::min(min_pivot, r.pivot_norm);
        j["safety"] = {{"input_norm", o.safety.input_norm},
                       {"steps", o.safety.steps.size()},
                       {"min_pivot", o.safety.steps.empty() ? nlohmann::json(nullptr)
                                                            : nlohmann::json(min_pivot)},
                       {"growth_factor", o.safety.growth_factor}};
        if (emit_solution) j["solution"] = o.x;
        text << j.dump(2) << '\n';
      } else {
        text << "plan: " << describe(plan) << '\n';
        if (o.failure) {
          text << "failure: " << o.failure->message << '\n';
        } else {
          text.precision(3);
          text << std::scientific << "relative residual: " << o.relative_residual << '\n';
          text << "history:";
          for (double r : o.residual_history) text << ' ' << r;
          text << '\n';
          if (emit_solution) {
            text.precision(17);
            text << "solution:\n";
            for (double x : o.x) text << x << '\n';
          }
        }
      }
      if (g.out.empty() || g.out == "-") {
        std::cout << text.str();
      } else {
        std::ofstream f(g.out);
        if (!(f << text.str())) throw Error("cannot write " + g.out);
      }
      return o.failure ? kExitFailed : kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}
