#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "iamlearn/bayes.hpp"
#include "iamlearn/em.hpp"
#include "iamlearn/error.hpp"
#include "iamlearn/harness.hpp"
#include "iamlearn/likelihood.hpp"
#include "iamlearn/metrics.hpp"
#include "iamlearn/pabulib.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace iamlearn;

namespace {

// Models cross the boundary as JSON text; the Python layer turns it into dicts.
Culture model_from_text(const std::string& text) {
  try {
    Culture c = culture_from_json(nlohmann::json::parse(text));
    validate(c);
    return c;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::InvalidModel, ex.what());
  }
}

std::string model_to_text(const Culture& c) { return culture_to_json(c).dump(); }

Election from_ballots(std::size_t m, const std::vector<std::vector<std::size_t>>& ballots) {
  std::vector<ApprovalBallot> out;
  out.reserve(ballots.size());
  for (const auto& b : ballots) {
    for (std::size_t j : b) {
      if (j >= m) throw Error(ErrorKind::DimensionMismatch, "candidate index out of range");
    }
    out.push_back(ApprovalBallot::from_indices(m, b));
  }
  return Election::with_default_roster(m, std::move(out));
}

std::vector<std::vector<std::size_t>> ballots_of(const Election& e) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& b : e.ballots()) {
    std::vector<std::size_t> v;
    b.for_each_approved([&](std::size_t j) { v.push_back(j); });
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Learning approval-election models";

  py::register_exception<Error>(m, "IamlearnError", PyExc_ValueError);

  py::class_<Election>(m, "Election")
      .def(py::init(&from_ballots), "m"_a, "ballots"_a)
      .def_property_readonly("num_candidates", &Election::num_candidates)
      .def_property_readonly("num_voters", &Election::num_voters)
      .def_property_readonly("scores", [](const Election& e) {
        return std::vector<std::size_t>(e.scores().begin(), e.scores().end());
      })
      .def_property_readonly("ballots", &ballots_of)
      .def_property_readonly("candidate_ids", [](const Election& e) {
        std::vector<std::string> ids;
        for (const auto& c : e.candidates()) ids.push_back(c.external_id);
        return ids;
      })
      .def("to_json", [](const Election& e) { return election_to_json(e).dump(); })
      .def("__eq__", [](const Election& a, const Election& b) { return a == b; })
      .def("__repr__", [](const Election& e) {
        return "<Election m=" + std::to_string(e.num_candidates()) +
               " n=" + std::to_string(e.num_voters()) + ">";
      });

  m.def("parse_pabulib", &parse_pabulib, "text"_a);
  m.def("load_election", [](const std::string& path) { return load_election(path); }, "path"_a);

  m.def("_learn",
        [](const Election& e, const std::string& model, const std::string& estimator,
           std::uint64_t seed, std::size_t restarts, std::size_t max_iter, double tol,
           std::size_t samples, std::size_t burn_in) {
          LearnOptions o;
          o.em_restarts = restarts;
          o.em_max_iter = max_iter;
          o.em_tol = tol;
          o.bayes_samples = samples;
          o.bayes_burn_in = burn_in;
          Rng rng(seed);
          const FitReport r = learn(e, parse_algorithm_id(model + "@" + estimator), o, rng);
          return py::make_tuple(model_to_text(r.model), r.train_log_likelihood);
        },
        "election"_a, "model"_a, "estimator"_a, "seed"_a, "restarts"_a, "max_iter"_a, "tol"_a,
        "samples"_a, "burn_in"_a);

  m.def("_em_trace",
        [](const Election& e, std::size_t k, const std::string& family, std::uint64_t seed,
           std::size_t restarts) {
          EmOptions o;
          o.k = k;
          o.family = parse_family(family);
          o.restarts = restarts;
          Rng rng(seed);
          const EmResult r = em_fit(e, o, rng);
          return py::make_tuple(model_to_text(r.fit.model), r.trace.log_likelihood,
                                r.trace.converged);
        },
        "election"_a, "k"_a, "family"_a, "seed"_a, "restarts"_a);

  m.def("_sample",
        [](const std::string& model, std::size_t n, std::uint64_t seed) {
          Rng rng(seed);
          return sample_election(model_from_text(model), n, rng);
        },
        "model"_a, "n"_a, "seed"_a);

  m.def("_log_likelihood",
        [](const std::string& model, const Election& e) {
          return log_prob_election(model_from_text(model), e);
        },
        "model"_a, "election"_a);

  m.def("_absolute_distance",
        [](const std::string& model, const Election& e, std::uint64_t seed) {
          Rng rng(seed);
          return absolute_distance(model_from_text(model), e, rng);
        },
        "model"_a, "election"_a, "seed"_a);

  m.def("va_ham", &va_ham, "a"_a, "b"_a);
  m.def("baseline",
        [](const Election& e, std::size_t n_eval, std::size_t pairs, std::uint64_t seed) {
          Rng rng(seed);
          return baseline(e, n_eval, pairs, rng);
        },
        "election"_a, "n_eval"_a = 1000, "pairs"_a = 5, "seed"_a = 0);

  m.def("_run_experiment",
        [](const std::string& dir, const std::string& config) {
          const ExperimentConfig cfg = config_from_json(nlohmann::json::parse(config));
          std::ostringstream out;
          write_report_csv(out, run_experiment(dir, cfg));
          return out.str();
        },
        "directory"_a, "config"_a);

  m.def("pearson",
        [](const std::vector<double>& xs, const std::vector<double>& ys) { return pearson(xs, ys); },
        "xs"_a, "ys"_a);
}
