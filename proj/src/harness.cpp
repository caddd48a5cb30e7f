#include "iamlearn/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "iamlearn/error.hpp"
#include "iamlearn/likelihood.hpp"
#include "iamlearn/metrics.hpp"
#include "iamlearn/pabulib.hpp"

namespace iamlearn {

namespace {

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorKind::BadConfig, "bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

// FNV-1a, 64-bit.
std::uint64_t hash_id(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Streams of one (instance, repetition).
constexpr std::uint64_t kSplitStream = 0;
constexpr std::uint64_t kBaselineStream = 1;
constexpr std::uint64_t kDistanceStream = 2;

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string optional_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

std::optional<double> parse_finite(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct RunningStats {
  std::vector<double> xs;
  double mean() const {
    double s = 0.0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
  }
  double variance() const {
    if (xs.size() < 2) return 0.0;
    const double mu = mean();
    double s = 0.0;
    for (double x : xs) s += (x - mu) * (x - mu);
    return s / static_cast<double>(xs.size() - 1);
  }
};

}  // namespace

std::string_view to_string(Estimator e) noexcept {
  switch (e) {
    case Estimator::Mle: return "mle";
    case Estimator::Em: return "em";
    case Estimator::Bayes: return "bayes";
  }
  return "?";
}

Estimator parse_estimator(std::string_view name) {
  if (name == "mle") return Estimator::Mle;
  if (name == "em") return Estimator::Em;
  if (name == "bayes") return Estimator::Bayes;
  throw Error(ErrorKind::BadConfig, "unknown estimator '" + std::string(name) + "'");
}

std::string ModelSpec::to_string() const {
  switch (kind) {
    case Kind::Ic: return "ic";
    case Kind::Hamming: return "hamming";
    case Kind::Resampling: return "resampling";
    case Kind::FullIam: return "fulliam";
    case Kind::TIam: return "tiam:" + std::to_string(t);
    case Kind::Mixture:
      return "mix:" + std::string(iamlearn::to_string(family)) + ":" + std::to_string(k);
  }
  return "?";
}

ModelSpec parse_model_spec(std::string_view text) {
  ModelSpec s;
  if (text == "ic") {
    s.kind = ModelSpec::Kind::Ic;
  } else if (text == "hamming") {
    s.kind = ModelSpec::Kind::Hamming;
  } else if (text == "resampling") {
    s.kind = ModelSpec::Kind::Resampling;
  } else if (text == "fulliam") {
    s.kind = ModelSpec::Kind::FullIam;
  } else if (text.starts_with("tiam:")) {
    s.kind = ModelSpec::Kind::TIam;
    s.t = parse_count(text.substr(5), "group count");
    if (s.t < 1) throw Error(ErrorKind::BadConfig, "tiam needs t >= 1");
  } else if (text.starts_with("mix:")) {
    const std::string_view rest = text.substr(4);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorKind::BadConfig, "mixture spec must be mix:<family>:<K>");
    }
    s.kind = ModelSpec::Kind::Mixture;
    s.family = parse_family(rest.substr(0, colon));
    s.k = parse_count(rest.substr(colon + 1), "component count");
    if (s.k < 1) throw Error(ErrorKind::BadConfig, "mixture needs K >= 1");
  } else {
    throw Error(ErrorKind::BadConfig, "unknown model '" + std::string(text) + "'");
  }
  return s;
}

std::string AlgorithmSpec::id() const {
  return model.to_string() + "@" + std::string(to_string(estimator));
}

AlgorithmSpec make_algorithm(const ModelSpec& model, Estimator estimator) {
  const bool mixture = model.kind == ModelSpec::Kind::Mixture;
  if (estimator == Estimator::Mle && mixture) {
    throw Error(ErrorKind::BadConfig, "mixtures are fitted with em or bayes");
  }
  if (estimator != Estimator::Mle && !mixture) {
    throw Error(ErrorKind::BadConfig, "single models are fitted with mle (use mix:<family>:1)");
  }
  if (estimator == Estimator::Bayes && model.family == Family::Ic) {
    throw Error(ErrorKind::BadConfig, "bayes supports fulliam, hamming and resampling mixtures");
  }
  return AlgorithmSpec{model, estimator};
}

AlgorithmSpec parse_algorithm_id(std::string_view id) {
  const auto at = id.rfind('@');
  if (at == std::string_view::npos) {
    throw Error(ErrorKind::BadConfig, "algorithm id must be <model>@<estimator>");
  }
  return make_algorithm(parse_model_spec(id.substr(0, at)), parse_estimator(id.substr(at + 1)));
}

FitReport learn(const Election& e, const AlgorithmSpec& algo, const LearnOptions& opts,
                Rng& rng, PosteriorChain* chain) {
  const ModelSpec& m = algo.model;
  switch (algo.estimator) {
    case Estimator::Mle:
      switch (m.kind) {
        case ModelSpec::Kind::Ic: return fit_ic(e);
        case ModelSpec::Kind::Hamming: return fit_hamming(e);
        case ModelSpec::Kind::Resampling: return fit_resampling(e);
        case ModelSpec::Kind::FullIam: return fit_full_iam(e);
        case ModelSpec::Kind::TIam: return fit_t_iam(e, m.t);
        case ModelSpec::Kind::Mixture: break;
      }
      break;
    case Estimator::Em: {
      EmOptions o;
      o.k = m.k;
      o.family = m.family;
      o.restarts = opts.em_restarts;
      o.max_iter = opts.em_max_iter;
      o.tol = opts.em_tol;
      return em_fit(e, o, rng).fit;
    }
    case Estimator::Bayes: {
      GibbsOptions o;
      o.k = m.k;
      o.family = m.family;
      o.total_samples = opts.bayes_samples;
      o.burn_in = opts.bayes_burn_in;
      o.step = opts.bayes_step;
      PosteriorChain local = gibbs_fit(e, o, rng);
      FitReport r;
      r.model = posterior_mean(local);
      r.train_log_likelihood = log_prob_election(r.model, e);
      if (chain) *chain = std::move(local);
      return r;
    }
  }
  throw Error(ErrorKind::BadConfig, "invalid algorithm " + algo.id());
}

std::vector<AlgorithmSpec> default_algorithm_grid() {
  std::vector<AlgorithmSpec> grid;
  for (const char* id : {"ic@mle", "hamming@mle", "resampling@mle", "fulliam@mle"}) {
    grid.push_back(parse_algorithm_id(id));
  }
  for (Family f : {Family::FullIam, Family::Hamming, Family::Resampling}) {
    for (std::size_t k = 2; k <= 4; ++k) {
      ModelSpec s;
      s.kind = ModelSpec::Kind::Mixture;
      s.family = f;
      s.k = k;
      grid.push_back(make_algorithm(s, Estimator::Em));
      grid.push_back(make_algorithm(s, Estimator::Bayes));
    }
  }
  return grid;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::BadConfig, "config must be a JSON object");
  ExperimentConfig cfg;
  cfg.algorithms = default_algorithm_grid();
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "n_eval") cfg.n_eval = value.get<std::size_t>();
      else if (key == "n_sample_cap") cfg.n_sample_cap = value.get<std::size_t>();
      else if (key == "t_try") cfg.t_try = value.get<std::size_t>();
      else if (key == "baseline_pairs") cfg.baseline_pairs = value.get<std::size_t>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "eval_clamp") cfg.eval_clamp = value.get<double>();
      else if (key == "record_wall_time") cfg.record_wall_time = value.get<bool>();
      else if (key == "em_restarts") cfg.learn.em_restarts = value.get<std::size_t>();
      else if (key == "em_max_iter") cfg.learn.em_max_iter = value.get<std::size_t>();
      else if (key == "em_tol") cfg.learn.em_tol = value.get<double>();
      else if (key == "bayes_samples") cfg.learn.bayes_samples = value.get<std::size_t>();
      else if (key == "bayes_burn_in") cfg.learn.bayes_burn_in = value.get<std::size_t>();
      else if (key == "bayes_step") cfg.learn.bayes_step = value.get<double>();
      else if (key == "algorithms") {
        cfg.algorithms.clear();
        for (const auto& id : value) cfg.algorithms.push_back(parse_algorithm_id(id.get<std::string>()));
      } else {
        throw Error(ErrorKind::BadConfig, "unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::BadConfig, ex.what());
  }
  if (cfg.t_try < 1) throw Error(ErrorKind::BadConfig, "t_try must be at least 1");
  if (cfg.n_eval < 1) throw Error(ErrorKind::BadConfig, "n_eval must be at least 1");
  if (cfg.baseline_pairs < 1) throw Error(ErrorKind::BadConfig, "baseline_pairs must be at least 1");
  if (!(cfg.eval_clamp >= 0.0 && cfg.eval_clamp < 0.5)) {
    throw Error(ErrorKind::BadConfig, "eval_clamp must lie in [0, 0.5)");
  }
  if (cfg.algorithms.empty()) throw Error(ErrorKind::BadConfig, "empty algorithm grid");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::BadConfig, path.string() + ": " + ex.what());
  }
  return config_from_json(j);
}

std::uint64_t instance_seed(std::uint64_t master, std::string_view instance,
                            std::uint64_t repetition, std::uint64_t stream) {
  return derive_seed(master, {hash_id(instance), repetition, stream});
}

std::vector<ReportRow> run_instance(std::string_view instance, const Election& e,
                                    const ExperimentConfig& cfg) {
  std::vector<ReportRow> rows;
  if (e.num_voters() < cfg.n_eval + 1) {
    ReportRow skip;
    skip.instance = instance;
    skip.algorithm = "skipped:too-few-voters";
    rows.push_back(std::move(skip));
    return rows;
  }
  const bool with_baseline = e.num_voters() >= 2 * cfg.n_eval;
  for (std::size_t rep = 0; rep < cfg.t_try; ++rep) {
    Rng split_rng(instance_seed(cfg.seed, instance, rep, kSplitStream));
    const auto [learn_e, eval_e] = split_learn_eval(e, cfg.n_eval, cfg.n_sample_cap, split_rng);
    std::optional<double> base;
    if (with_baseline) {
      Rng base_rng(instance_seed(cfg.seed, instance, rep, kBaselineStream));
      base = baseline(e, cfg.n_eval, cfg.baseline_pairs, base_rng);
    }
    for (const AlgorithmSpec& algo : cfg.algorithms) {
      const std::string id = algo.id();
      Rng learn_rng(instance_seed(cfg.seed, instance, rep, hash_id(id)));
      const auto start = std::chrono::steady_clock::now();
      const FitReport fit = learn(learn_e, algo, cfg.learn, learn_rng);
      const auto stop = std::chrono::steady_clock::now();

      ReportRow row;
      row.instance = instance;
      row.algorithm = id;
      row.run = rep;
      row.train_ll = fit.train_log_likelihood;
      row.eval_ll = log_prob_election(clamp_probabilities(fit.model, cfg.eval_clamp), eval_e);
      row.eval_ll_raw = log_prob_election(fit.model, eval_e);
      Rng dist_rng(instance_seed(cfg.seed, instance, rep, kDistanceStream));
      row.absolute = absolute_distance(fit.model, eval_e, dist_rng);
      if (base) {
        row.baseline = base;
        row.relative = make_distance_report(*row.absolute, *base).relative;
      }
      if (cfg.record_wall_time) row.wall_time = std::chrono::duration<double>(stop - start).count();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ReportRow> t_sweep(std::string_view instance, const Election& e,
                               const ExperimentConfig& cfg) {
  std::vector<ReportRow> rows;
  if (e.num_voters() < cfg.n_eval + 1) {
    ReportRow skip;
    skip.instance = instance;
    skip.algorithm = "skipped:too-few-voters";
    rows.push_back(std::move(skip));
    return rows;
  }
  const std::size_t m = e.num_candidates();
  const bool with_baseline = e.num_voters() >= 2 * cfg.n_eval;
  for (std::size_t rep = 0; rep < cfg.t_try; ++rep) {
    Rng split_rng(instance_seed(cfg.seed, instance, rep, kSplitStream));
    const auto [learn_e, eval_e] = split_learn_eval(e, cfg.n_eval, cfg.n_sample_cap, split_rng);
    std::optional<double> base;
    if (with_baseline) {
      Rng base_rng(instance_seed(cfg.seed, instance, rep, kBaselineStream));
      base = baseline(e, cfg.n_eval, cfg.baseline_pairs, base_rng);
    }
    const auto start = std::chrono::steady_clock::now();
    const auto fits = fit_t_iam_all(learn_e, m);
    const auto stop = std::chrono::steady_clock::now();
    for (std::size_t t = 1; t <= m; ++t) {
      const FitReport& fit = fits[t - 1];
      ReportRow row;
      row.instance = instance;
      row.algorithm = "tiam:" + std::to_string(t) + "@mle";
      row.run = rep;
      row.train_ll = fit.train_log_likelihood;
      row.eval_ll = log_prob_election(clamp_probabilities(fit.model, cfg.eval_clamp), eval_e);
      row.eval_ll_raw = log_prob_election(fit.model, eval_e);
      Rng dist_rng(instance_seed(cfg.seed, instance, rep, kDistanceStream));
      row.absolute = absolute_distance(fit.model, eval_e, dist_rng);
      if (base) {
        row.baseline = base;
        row.relative = make_distance_report(*row.absolute, *base).relative;
      }
      if (cfg.record_wall_time) row.wall_time = std::chrono::duration<double>(stop - start).count();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ReportRow> run_experiment(const std::filesystem::path& dir,
                                      const ExperimentConfig& cfg) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::Io, dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".pb" || ext == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  std::vector<ReportRow> rows;
  for (const auto& f : files) {
    const Election e = load_election(f);
    auto part = run_instance(f.filename().string(), e, cfg);
    rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  return rows;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorKind::DimensionMismatch, "sequences differ in length");
  if (xs.size() < 2) throw Error(ErrorKind::DegenerateInput, "need at least two points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorKind::DegenerateInput, "zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<SummaryRow> summarize(std::span<const ReportRow> rows) {
  struct Group {
    RunningStats train, eval, absolute, baseline, relative;
  };
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, Group> groups;
  for (const ReportRow& r : rows) {
    if (!r.absolute) continue;
    auto key = std::make_pair(r.instance, r.algorithm);
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) order.push_back(key);
    Group& g = it->second;
    if (r.train_ll) g.train.xs.push_back(*r.train_ll);
    if (r.eval_ll) g.eval.xs.push_back(*r.eval_ll);
    g.absolute.xs.push_back(*r.absolute);
    if (r.baseline) g.baseline.xs.push_back(*r.baseline);
    if (r.relative) g.relative.xs.push_back(*r.relative);
  }
  std::vector<SummaryRow> out;
  for (const auto& key : order) {
    const Group& g = groups.at(key);
    SummaryRow s;
    s.instance = key.first;
    s.algorithm = key.second;
    s.runs = g.absolute.xs.size();
    s.mean_train_ll = g.train.mean();
    s.var_train_ll = g.train.variance();
    s.mean_eval_ll = g.eval.mean();
    s.var_eval_ll = g.eval.variance();
    s.mean_absolute = g.absolute.mean();
    s.var_absolute = g.absolute.variance();
    if (!g.baseline.xs.empty()) s.mean_baseline = g.baseline.mean();
    if (!g.relative.xs.empty()) s.mean_relative = g.relative.mean();
    out.push_back(std::move(s));
  }
  std::map<std::string, std::size_t> best;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto [it, fresh] = best.try_emplace(out[i].instance, i);
    if (!fresh && out[i].mean_absolute < out[it->second].mean_absolute) it->second = i;
  }
  for (const auto& [instance, i] : best) out[i].best = true;
  return out;
}

void write_report_csv(std::ostream& out, std::span<const ReportRow> rows) {
  out << "instance,algorithm,run,train_ll,eval_ll,eval_ll_raw,absolute,baseline,relative,wall_time\n";
  for (const ReportRow& r : rows) {
    out << csv_field(r.instance) << ',' << csv_field(r.algorithm) << ',' << r.run << ','
        << optional_field(r.train_ll) << ',' << optional_field(r.eval_ll) << ','
        << optional_field(r.eval_ll_raw) << ',' << optional_field(r.absolute) << ','
        << optional_field(r.baseline) << ',' << optional_field(r.relative) << ','
        << format_double(r.wall_time) << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << "instance,algorithm,runs,mean_train_ll,var_train_ll,mean_eval_ll,var_eval_ll,"
         "mean_absolute,var_absolute,mean_baseline,mean_relative,best\n";
  for (const SummaryRow& s : rows) {
    out << csv_field(s.instance) << ',' << csv_field(s.algorithm) << ',' << s.runs << ','
        << format_double(s.mean_train_ll) << ',' << format_double(s.var_train_ll) << ','
        << format_double(s.mean_eval_ll) << ',' << format_double(s.var_eval_ll) << ','
        << format_double(s.mean_absolute) << ',' << format_double(s.var_absolute) << ','
        << optional_field(s.mean_baseline) << ',' << optional_field(s.mean_relative) << ','
        << (s.best ? 1 : 0) << '\n';
  }
}

std::pair<std::vector<double>, std::vector<double>> read_csv_columns(std::istream& in,
                                                                     std::string_view x,
                                                                     std::string_view y) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::MalformedRecord, "CSV has no header");
  const auto header = split_csv_line(line);
  auto column = [&](std::string_view name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(ErrorKind::MissingSection, "CSV has no column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t cx = column(x);
  const std::size_t cy = column(y);
  std::pair<std::vector<double>, std::vector<double>> out;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::MalformedRecord, "CSV row has " + std::to_string(fields.size()) +
                                                  " fields, header has " +
                                                  std::to_string(header.size()));
    }
    const auto vx = parse_finite(fields[cx]);
    const auto vy = parse_finite(fields[cy]);
    if (!vx || !vy) continue;
    out.first.push_back(*vx);
    out.second.push_back(*vy);
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace iamlearn
