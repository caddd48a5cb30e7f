#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "iamlearn/bayes.hpp"
#include "iamlearn/culture.hpp"
#include "iamlearn/election.hpp"
#include "iamlearn/em.hpp"
#include "iamlearn/mle.hpp"
#include "iamlearn/rng.hpp"

namespace iamlearn {

enum class Estimator { Mle, Em, Bayes };

std::string_view to_string(Estimator e) noexcept;
Estimator parse_estimator(std::string_view name);

/// Model grammar: ic | hamming | resampling | fulliam | tiam:T | mix:<family>:K
struct ModelSpec {
  enum class Kind { Ic, Hamming, Resampling, TIam, FullIam, Mixture };
  Kind kind = Kind::Ic;
  std::size_t t = 0;                  // tiam only
  Family family = Family::FullIam;    // mixture only
  std::size_t k = 1;                  // mixture only

  std::string to_string() const;
};

ModelSpec parse_model_spec(std::string_view text);

struct AlgorithmSpec {
  ModelSpec model;
  Estimator estimator = Estimator::Mle;

  /// "<model>@<estimator>", e.g. "mix:fulliam:3@em".
  std::string id() const;
};

/// Checks the model/estimator pairing: mle fits single models, em and bayes
/// fit mixtures (bayes only for fulliam, hamming and resampling families).
AlgorithmSpec make_algorithm(const ModelSpec& model, Estimator estimator);
AlgorithmSpec parse_algorithm_id(std::string_view id);

struct LearnOptions {
  std::size_t em_restarts = 5;
  std::size_t em_max_iter = 300;
  double em_tol = 1e-6;
  std::size_t bayes_samples = 2000;
  std::size_t bayes_burn_in = 1000;
  double bayes_step = 0.05;
};

/// Runs one learner. When chain is non-null and the estimator is bayes, the
/// posterior chain is stored there.
FitReport learn(const Election& e, const AlgorithmSpec& algo,
                const LearnOptions& opts, Rng& rng,
                PosteriorChain* chain = nullptr);

struct ExperimentConfig {
  std::size_t n_eval = 1000;
  std::size_t n_sample_cap = 20000;
  std::size_t t_try = 5;
  std::size_t baseline_pairs = 5;
  std::uint64_t seed = 0;
  std::vector<AlgorithmSpec> algorithms;
  LearnOptions learn;
  /// Probability clamp applied to models when scoring the evaluation election.
  double eval_clamp = 1e-9;
  /// Off by default so reports are byte-reproducible; zero is written instead.
  bool record_wall_time = false;
};

/// Single-model learners plus EM and Bayesian mixtures with 2..4 components.
std::vector<AlgorithmSpec> default_algorithm_grid();
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

struct ReportRow {
  std::string instance;
  std::string algorithm;
  std::size_t run = 0;
  std::optional<double> train_ll;
  std::optional<double> eval_ll;       // clamped model
  std::optional<double> eval_ll_raw;   // unclamped model, may be -inf
  std::optional<double> absolute;
  std::optional<double> baseline;
  std::optional<double> relative;
  double wall_time = 0.0;
};

/// Sub-seed for (instance, repetition, stream); instance ids are hashed so a
/// subset of files reproduces the rows it would get in the full run.
std::uint64_t instance_seed(std::uint64_t master, std::string_view instance,
                            std::uint64_t repetition, std::uint64_t stream);

/// Learn/evaluate protocol for every algorithm of cfg, t_try times.
/// Ineligible instances yield one "skipped:too-few-voters" row.
std::vector<ReportRow> run_instance(std::string_view instance, const Election& e,
                                    const ExperimentConfig& cfg);

/// t-parameter IAM for every t in [1, m], t_try times.
std::vector<ReportRow> t_sweep(std::string_view instance, const Election& e,
                               const ExperimentConfig& cfg);

/// run_instance over every .pb / .json file of dir, in file-name order.
std::vector<ReportRow> run_experiment(const std::filesystem::path& dir,
                                      const ExperimentConfig& cfg);

double pearson(std::span<const double> xs, std::span<const double> ys);

/// Mean and sample variance of each metric per (instance, algorithm).
struct SummaryRow {
  std::string instance;
  std::string algorithm;
  std::size_t runs = 0;
  double mean_train_ll = 0.0, var_train_ll = 0.0;
  double mean_eval_ll = 0.0, var_eval_ll = 0.0;
  double mean_absolute = 0.0, var_absolute = 0.0;
  std::optional<double> mean_baseline;
  std::optional<double> mean_relative;
  bool best = false;   // lowest mean absolute distance for the instance
};

std::vector<SummaryRow> summarize(std::span<const ReportRow> rows);

void write_report_csv(std::ostream& out, std::span<const ReportRow> rows);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

/// Numeric (x, y) pairs from two named columns of a CSV with a header row.
/// Rows where either value is empty or non-finite are dropped.
std::pair<std::vector<double>, std::vector<double>> read_csv_columns(
    std::istream& in, std::string_view x, std::string_view y);

/// Shortest round-trip decimal for finite values; "inf"/"-inf"/"nan" otherwise.
std::string format_double(double v);

}  // namespace iamlearn
