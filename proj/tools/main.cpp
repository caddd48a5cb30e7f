#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "iamlearn/bayes.hpp"
#include "iamlearn/error.hpp"
#include "iamlearn/harness.hpp"
#include "iamlearn/likelihood.hpp"
#include "iamlearn/metrics.hpp"
#include "iamlearn/pabulib.hpp"

using namespace iamlearn;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON when the argument starts with '{', otherwise a file path.
Culture load_model(const std::string& arg) {
  const std::string text = !arg.empty() && arg.front() == '{' ? arg : read_file(arg);
  try {
    const Culture c = culture_from_json(nlohmann::json::parse(text));
    validate(c);
    return c;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::InvalidModel, ex.what());
  }
}

void write_csv(const std::string& path, std::span<const ReportRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  write_report_csv(out, rows);
}

void write_summary(const std::string& report_path, std::span<const ReportRow> rows) {
  std::filesystem::path p(report_path);
  const auto summary_path = p.parent_path() / (p.stem().string() + "_summary.csv");
  const auto summary = summarize(rows);
  std::ofstream out(summary_path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + summary_path.string());
  write_summary_csv(out, summary);
  for (const SummaryRow& s : summary) {
    if (!std::isfinite(s.var_absolute) || !std::isfinite(s.var_eval_ll)) {
      std::cerr << "warning: non-finite variance for " << s.instance << " " << s.algorithm << '\n';
    } else if (s.mean_absolute > 0.0) {
      std::cerr << s.instance << " " << s.algorithm
                << ": var/mean absolute = " << s.var_absolute / s.mean_absolute << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn and evaluate approval-election models"};
  app.require_subcommand(1);

  std::string file, model_arg, estimator = "mle", eval_file, dir, config_path, out_path, chain_path;
  std::string x_col, y_col;
  std::uint64_t seed = 0;
  std::size_t n = 0, n_eval = 1000, pairs = 5, t_try = 20;
  LearnOptions lopts;

  auto* parse = app.add_subcommand("parse", "Parse an election file and print it as JSON");
  parse->add_option("file", file)->required();

  auto* learn_cmd = app.add_subcommand("learn", "Fit a model and print it as JSON");
  learn_cmd->add_option("--model", model_arg, "ic|hamming|resampling|tiam:T|fulliam|mix:<family>:<K>")
      ->required();
  learn_cmd->add_option("--estimator", estimator, "mle|em|bayes");
  learn_cmd->add_option("--seed", seed);
  learn_cmd->add_option("--restarts", lopts.em_restarts);
  learn_cmd->add_option("--max-iter", lopts.em_max_iter);
  learn_cmd->add_option("--tol", lopts.em_tol);
  learn_cmd->add_option("--samples", lopts.bayes_samples);
  learn_cmd->add_option("--burn-in", lopts.bayes_burn_in);
  learn_cmd->add_option("--chain", chain_path, "Write retained posterior samples as JSON lines");
  learn_cmd->add_option("file", file)->required();

  auto* sample = app.add_subcommand("sample", "Sample an election from a model");
  sample->add_option("--model", model_arg, "Model JSON or path")->required();
  sample->add_option("--n", n)->required();
  sample->add_option("--seed", seed);

  auto* loglik = app.add_subcommand("loglik", "Log-likelihood of an election under a model");
  loglik->add_option("--model", model_arg, "Model JSON or path")->required();
  loglik->add_option("file", file)->required();

  auto* distance = app.add_subcommand("distance", "Absolute distance between a model and an election");
  distance->add_option("--model", model_arg, "Model JSON or path")->required();
  distance->add_option("--eval", eval_file)->required();
  distance->add_option("--seed", seed);

  auto* base = app.add_subcommand("baseline", "Baseline distance of an election");
  base->add_option("file", file)->required();
  base->add_option("--n-eval", n_eval);
  base->add_option("--pairs", pairs);
  base->add_option("--seed", seed);

  auto* experiment = app.add_subcommand("experiment", "Run the protocol over a directory");
  experiment->add_option("--dir", dir)->required();
  experiment->add_option("--config", config_path, "JSON config");
  experiment->add_option("--out", out_path)->required();

  auto* tsweep = app.add_subcommand("tsweep", "Absolute distance of t-IAM fits for every t");
  tsweep->add_option("file", file)->required();
  tsweep->add_option("--out", out_path)->required();
  tsweep->add_option("--config", config_path, "JSON config");
  tsweep->add_option("--t-try", t_try);
  tsweep->add_option("--n-eval", n_eval);
  tsweep->add_option("--seed", seed);

  auto* stats = app.add_subcommand("stats", "Pearson correlation of two CSV columns");
  stats->add_option("--x", x_col)->required();
  stats->add_option("--y", y_col)->required();
  stats->add_option("csv", file)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*parse) {
      std::cout << election_to_json(load_election(file)).dump() << '\n';
    } else if (*learn_cmd) {
      const Election e = load_election(file);
      const AlgorithmSpec algo = parse_algorithm_id(model_arg + "@" + estimator);
      Rng rng(seed);
      PosteriorChain chain;
      const FitReport fit = learn(e, algo, lopts, rng, &chain);
      if (!chain_path.empty()) {
        if (algo.estimator != Estimator::Bayes) {
          throw Error(ErrorKind::BadConfig, "--chain needs --estimator bayes");
        }
        std::ofstream out(chain_path, std::ios::binary);
        if (!out) throw Error(ErrorKind::Io, "cannot write " + chain_path);
        write_chain_jsonl(out, chain);
      }
      std::cout << culture_to_json(fit.model).dump() << '\n';
    } else if (*sample) {
      Rng rng(seed);
      std::cout << election_to_json(sample_election(load_model(model_arg), n, rng)).dump() << '\n';
    } else if (*loglik) {
      std::cout << format_double(log_prob_election(load_model(model_arg), load_election(file)))
                << '\n';
    } else if (*distance) {
      Rng rng(seed);
      std::cout << format_double(absolute_distance(load_model(model_arg), load_election(eval_file), rng))
                << '\n';
    } else if (*base) {
      Rng rng(seed);
      std::cout << format_double(baseline(load_election(file), n_eval, pairs, rng)) << '\n';
    } else if (*experiment) {
      ExperimentConfig cfg = config_path.empty() ? config_from_json(nlohmann::json::object())
                                                 : load_config(config_path);
      const auto rows = run_experiment(dir, cfg);
      write_csv(out_path, rows);
      write_summary(out_path, rows);
    } else if (*tsweep) {
      ExperimentConfig cfg = config_path.empty() ? config_from_json(nlohmann::json::object())
                                                 : load_config(config_path);
      if (tsweep->count("--t-try") || config_path.empty()) cfg.t_try = t_try;
      if (tsweep->count("--seed")) cfg.seed = seed;
      if (tsweep->count("--n-eval")) cfg.n_eval = n_eval;
      const std::filesystem::path p(file);
      write_csv(out_path, t_sweep(p.filename().string(), load_election(p), cfg));
    } else if (*stats) {
      std::ifstream in(file);
      if (!in) throw Error(ErrorKind::Io, "cannot open " + file);
      const auto [xs, ys] = read_csv_columns(in, x_col, y_col);
      std::cout << format_double(pearson(xs, ys)) << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "iamlearn: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
