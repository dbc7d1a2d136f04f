#pragma once

// Shuffled k-fold cross-validation, grid and random search drivers, and the
// GS/RS model-selection loop.
//
// Trials are independent: configurations are generated up front and results
// are stored by trial index, so a parallel search returns exactly what a
// sequential one would (except durations).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "grs/classifiers.hpp"
#include "grs/error.hpp"
#include "grs/hpspace.hpp"
#include "grs/random.hpp"

namespace grs {

struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::size_t> assignments;  // row -> fold
  std::uint64_t seed = 0;

  std::size_t n_rows() const { return assignments.size(); }

  std::vector<std::size_t> rows_in(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < assignments.size(); ++r)
      if (assignments[r] == fold) rows.push_back(r);
    return rows;
  }

  std::vector<std::size_t> rows_outside(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < assignments.size(); ++r)
      if (assignments[r] != fold) rows.push_back(r);
    return rows;
  }

  bool operator==(const FoldPlan&) const = default;
};

// Rows are permuted by a seeded shuffle and dealt into k contiguous blocks;
// the first n % k blocks receive one extra row.
inline FoldPlan shuffle_kfold(std::size_t n_rows, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ValueError("k-fold cross-validation needs k >= 2");
  if (k > n_rows)
    throw ValueError("k = " + std::to_string(k) + " exceeds the row count " +
                     std::to_string(n_rows));
  const auto perm = seeded_permutation(n_rows, mix_seed(seed, 0xF01D));
  FoldPlan plan{k, std::vector<std::size_t>(n_rows), seed};
  const std::size_t base = n_rows / k;
  const std::size_t extra = n_rows % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) plan.assignments[perm[pos++]] = f;
  }
  return plan;
}

struct TrialResult {
  Family family = Family::DT;
  Config config;  // fully resolved
  std::vector<double> fold_accuracies;
  double mean_accuracy = 0.0;
  double duration_seconds = 0.0;
  std::size_t trial_index = 0;
  std::size_t degenerate_folds = 0;  // folds scored 0 for single-class training data
};

using WarningSink = std::function<void(const std::string&)>;

struct TunerOptions {
  std::size_t workers = 1;
  WarningSink warn;
};

// Fits on all rows outside fold i and scores on fold i, for every fold. The
// model seed for fold i is mix_seed(seed, i). A fold whose training part is
// single-class scores 0 and is counted in `degenerate_folds`.
inline TrialResult cross_val_trial(const ModelSpec& spec, const DesignMatrix& train,
                                   const FoldPlan& folds, std::uint64_t seed,
                                   std::size_t trial_index = 0) {
  if (folds.n_rows() != train.rows())
    throw ValueError("fold plan covers " + std::to_string(folds.n_rows()) +
                     " rows but the design matrix has " + std::to_string(train.rows()));
  TrialResult result;
  result.family = spec.family;
  result.config = resolve_config(spec.family, spec.config);
  result.trial_index = trial_index;
  const ModelSpec resolved{spec.family, result.config};

  const auto start = std::chrono::steady_clock::now();
  for (std::size_t f = 0; f < folds.k; ++f) {
    const auto fit_rows = folds.rows_outside(f);
    const auto score_rows = folds.rows_in(f);
    const auto fit_part = train.take_rows(fit_rows);
    const auto score_part = train.take_rows(score_rows);
    try {
      const auto model = train_model(resolved, fit_part, mix_seed(seed, f));
      result.fold_accuracies.push_back(
          accuracy(predict(model, score_part.features), score_part.labels));
    } catch (const SingleClassError&) {
      result.fold_accuracies.push_back(0.0);
      ++result.degenerate_folds;
    }
  }
  result.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  double sum = 0.0;
  for (double a : result.fold_accuracies) sum += a;
  result.mean_accuracy = sum / static_cast<double>(result.fold_accuracies.size());
  return result;
}

// Highest mean accuracy; ties go to the lowest trial index regardless of the
// order of `trials`.
inline const TrialResult& select_best(std::span<const TrialResult> trials) {
  if (trials.empty()) throw TuningError("no trials to select from");
  const TrialResult* best = &trials[0];
  for (const auto& t : trials.subspan(1)) {
    if (t.mean_accuracy > best->mean_accuracy ||
        (t.mean_accuracy == best->mean_accuracy && t.trial_index < best->trial_index))
      best = &t;
  }
  return *best;
}

// Maximum worker count from GRS_MAX_WORKERS (unset, empty or 0 means one per
// hardware thread).
inline std::size_t workers_from_env() {
  std::size_t hw = std::max<unsigned>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GRS_MAX_WORKERS"); env && *env) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return hw;
}

// Evaluates configs[i] as trial i. With more than one worker, trials run on a
// pool of threads; results are placed by index. The first failing trial (by
// index) rethrows its exception after all workers finish.
inline std::vector<TrialResult> evaluate_trials(Family family, std::span<const Config> configs,
                                                const DesignMatrix& train, const FoldPlan& folds,
                                                std::uint64_t seed, const TunerOptions& options) {
  std::vector<TrialResult> results(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  auto run_one = [&](std::size_t i) {
    try {
      results[i] = cross_val_trial({family, configs[i]}, train, folds, seed, i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const std::size_t workers = std::min(std::max<std::size_t>(options.workers, 1), configs.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) run_one(i);
      });
    pool.clear();  // joins
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  if (options.warn)
    for (const auto& r : results)
      if (r.degenerate_folds > 0)
        options.warn(std::string(to_string(family)) + " trial " + std::to_string(r.trial_index) +
                     " " + format_config(r.config) + ": " + std::to_string(r.degenerate_folds) +
                     " fold(s) had single-class training data and scored 0");
  return results;
}

struct SearchOutcome {
  TrialResult best;
  std::vector<TrialResult> trials;
  double total_seconds = 0.0;
};

namespace detail {
inline SearchOutcome run_search(Family family, const std::vector<Config>& configs,
                                const DesignMatrix& train, const FoldPlan& folds,
                                std::uint64_t seed, const TunerOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SearchOutcome out;
  out.trials = evaluate_trials(family, configs, train, folds, seed, options);
  out.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.best = select_best(out.trials);
  return out;
}
}  // namespace detail

// Every grid configuration, evaluated with the same folds and model seed.
inline SearchOutcome grid_search(const SearchSpace& space, const DesignMatrix& train,
                                 const FoldPlan& folds, std::uint64_t seed,
                                 const TunerOptions& options = {}) {
  validate_space(space);
  return detail::run_search(space.family, grid_enumerate(space), train, folds, seed, options);
}

// `budget` configurations from random_sample(space, budget, sample_seed).
inline SearchOutcome random_search(const SearchSpace& space, std::size_t budget,
                                   const DesignMatrix& train, const FoldPlan& folds,
                                   std::uint64_t seed, std::uint64_t sample_seed,
                                   const TunerOptions& options = {}) {
  if (budget < 1) throw ValueError("random search budget must be at least 1");
  validate_space(space);
  return detail::run_search(space.family, random_sample(space, budget, sample_seed), train, folds,
                            seed, options);
}

// Cross-validated schema defaults.
inline TrialResult evaluate_baseline(Family family, const DesignMatrix& train,
                                     const FoldPlan& folds, std::uint64_t seed) {
  return cross_val_trial({family, default_config(family)}, train, folds, seed, 0);
}

// ---------------------------------------------------------------------------
// Model selection

enum class Method { GS, RS };

inline std::string_view to_string(Method m) { return m == Method::GS ? "GS" : "RS"; }

struct TuningSeeds {
  std::uint64_t folds = 1;   // shuffle_kfold
  std::uint64_t model = 2;   // every fit (per-fold streams derived from it)
  std::uint64_t search = 3;  // random-search draws (per-family streams derived from it)
};

struct TuningSettings {
  std::size_t k = 3;
  // Random-search budget for every family; default_rs_budget() when unset.
  std::optional<std::size_t> rs_budget;
  TuningSeeds seeds;
  TunerOptions options;
};

struct FamilyReport {
  Family family = Family::DT;
  std::optional<TrialResult> baseline;
  std::optional<SearchOutcome> gs;
  std::optional<SearchOutcome> rs;
  std::size_t grid_size = 0;
  std::size_t rs_budget = 0;
  std::vector<std::string> errors;

  // Better of GS and RS by mean CV accuracy; GS on ties.
  std::optional<Method> winner() const {
    if (gs && rs) return rs->best.mean_accuracy > gs->best.mean_accuracy ? Method::RS : Method::GS;
    if (gs) return Method::GS;
    if (rs) return Method::RS;
    return std::nullopt;
  }

  const TrialResult* best() const {
    const auto w = winner();
    if (!w) return nullptr;
    return *w == Method::GS ? &gs->best : &rs->best;
  }

  bool skipped() const { return !baseline && !gs && !rs; }
};

struct FinalSelection {
  Family family = Family::DT;
  Method method = Method::GS;
  Config config;
  double cv_accuracy = 0.0;
  double test_accuracy = 0.0;
};

struct TuningReport {
  std::vector<FamilyReport> families;
  FinalSelection final;
  TuningSeeds seeds;
  std::size_t k = 3;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::vector<std::string> feature_names;
};

inline std::uint64_t family_stream(std::uint64_t seed, Family family) {
  return mix_seed(seed, 100 + static_cast<std::uint64_t>(family));
}

// For each family: baseline, grid search and random search on shared folds;
// the family keeps the better search (GS on ties). Across families the best
// kept accuracy wins (earlier family on ties). The winner is refit on the full
// training matrix and scored once on `test`.
inline TuningReport grs_auto_hp(std::span<const Family> families,
                                const std::map<Family, SearchSpace>& spaces,
                                const DesignMatrix& train, const DesignMatrix& test,
                                const TuningSettings& settings = {}) {
  if (families.empty()) throw ValueError("no classifier families to tune");
  if (train.feature_names != test.feature_names)
    throw ValueError("train and test design matrices have different features");
  const auto folds = shuffle_kfold(train.rows(), settings.k, settings.seeds.folds);

  TuningReport report;
  report.seeds = settings.seeds;
  report.k = settings.k;
  report.train_rows = train.rows();
  report.test_rows = test.rows();
  report.feature_names = train.feature_names;

  const FamilyReport* winner = nullptr;
  for (const auto family : families) {
    FamilyReport fr;
    fr.family = family;
    SearchSpace space{family, {}};
    if (auto it = spaces.find(family); it != spaces.end()) space = it->second;
    space.family = family;
    fr.grid_size = grid_size(space);
    fr.rs_budget = settings.rs_budget.value_or(default_rs_budget(space));

    auto attempt = [&](const char* what, auto&& fn) {
      try {
        fn();
      } catch (const Error& e) {
        fr.errors.push_back(std::string(what) + ": " + e.what());
        if (settings.options.warn)
          settings.options.warn(std::string(to_string(family)) + " " + what + " failed: " + e.what());
      }
    };
    attempt("baseline", [&] { fr.baseline = evaluate_baseline(family, train, folds, settings.seeds.model); });
    attempt("grid search", [&] {
      fr.gs = grid_search(space, train, folds, settings.seeds.model, settings.options);
    });
    attempt("random search", [&] {
      fr.rs = random_search(space, fr.rs_budget, train, folds, settings.seeds.model,
                            family_stream(settings.seeds.search, family), settings.options);
    });
    report.families.push_back(std::move(fr));
  }

  for (const auto& fr : report.families) {
    const auto* best = fr.best();
    if (!best) continue;
    if (!winner || best->mean_accuracy > winner->best()->mean_accuracy) winner = &fr;
  }
  if (!winner) throw TuningError("every classifier family failed to tune");

  const auto& best = *winner->best();
  const auto model = train_model({winner->family, best.config}, train, settings.seeds.model);
  report.final.family = winner->family;
  report.final.method = *winner->winner();
  report.final.config = best.config;
  report.final.cv_accuracy = best.mean_accuracy;
  report.final.test_accuracy = accuracy(predict(model, test.features), test.labels);
  return report;
}

}  // namespace grs
