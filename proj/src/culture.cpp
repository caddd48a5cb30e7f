#include "iamlearn/culture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "iamlearn/error.hpp"

namespace iamlearn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

void require_probability(double p, const char* what) {
  if (!is_probability(p)) {
    throw Error(ErrorKind::InvalidModel,
                std::string(what) + " = " + std::to_string(p) + " is not in [0, 1]");
  }
}

void validate_component(const Component& c) {
  std::visit(overloaded{
                 [](const Ic& ic) { require_probability(ic.p, "p"); },
                 [](const Hamming& h) { require_probability(h.phi, "phi"); },
                 [](const Resampling& r) {
                   require_probability(r.p, "p");
                   require_probability(r.phi, "phi");
                 },
                 [](const TParamIam& t) {
                   std::vector<std::size_t> used(t.probs.size(), 0);
                   for (std::size_t g : t.group_of) {
                     if (g >= t.probs.size()) {
                       throw Error(ErrorKind::InvalidModel, "group index out of range");
                     }
                     ++used[g];
                   }
                   for (std::size_t g = 0; g < used.size(); ++g) {
                     if (used[g] == 0) {
                       throw Error(ErrorKind::InvalidModel,
                                   "group " + std::to_string(g) + " has no candidates");
                     }
                   }
                   for (double p : t.probs) require_probability(p, "group probability");
                 },
                 [](const FullIam& f) {
                   for (double p : f.probs) require_probability(p, "candidate probability");
                 },
             },
             c);
}

double clamp_to(double p, double eps) { return std::clamp(p, eps, 1.0 - eps); }

// One categorical draw from a single uniform.
std::size_t draw_component(std::span<const double> weights, Rng& rng) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    acc += weights[k];
    last_positive = k;
    if (u < acc) return k;
  }
  return last_positive;
}

// Independent-entry families: entry j approved iff u_j < probs[j].
ApprovalBallot sample_independent(std::span<const double> probs, Rng& rng) {
  ApprovalBallot b(probs.size());
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (rng.uniform() < probs[j]) b.set(j);
  }
  return b;
}

ApprovalBallot sample_resampling(const Resampling& r, Rng& rng) {
  ApprovalBallot b = r.central;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (rng.uniform() < r.phi) b.set(j, rng.uniform() < r.p);
  }
  return b;
}

// Per-component sampler with the candidate probabilities precomputed.
struct ComponentSampler {
  const Component* component;
  std::vector<double> probs;

  explicit ComponentSampler(const Component& c)
      : component(&c),
        probs(std::holds_alternative<Resampling>(c) ? std::vector<double>{}
                                                    : candidate_probabilities(c)) {}

  ApprovalBallot operator()(Rng& rng) const {
    if (const auto* r = std::get_if<Resampling>(component)) return sample_resampling(*r, rng);
    return sample_independent(probs, rng);
  }
};

nlohmann::json component_to_json(const Component& c) {
  return std::visit(
      overloaded{
          [](const Ic& ic) -> nlohmann::json {
            return {{"kind", "ic"}, {"m", ic.m}, {"p", ic.p}};
          },
          [](const Hamming& h) -> nlohmann::json {
            return {{"kind", "hamming"}, {"m", h.central.size()}, {"phi", h.phi},
                    {"central", h.central.approved()}};
          },
          [](const Resampling& r) -> nlohmann::json {
            return {{"kind", "resampling"}, {"m", r.central.size()}, {"p", r.p},
                    {"phi", r.phi}, {"central", r.central.approved()}};
          },
          [](const TParamIam& t) -> nlohmann::json {
            return {{"kind", "tiam"}, {"group_of", t.group_of}, {"probs", t.probs}};
          },
          [](const FullIam& f) -> nlohmann::json {
            return {{"kind", "fulliam"}, {"probs", f.probs}};
          },
      },
      c);
}

ApprovalBallot central_from_json(const nlohmann::json& j) {
  const auto m = j.at("m").get<std::size_t>();
  const auto idx = j.at("central").get<std::vector<std::size_t>>();
  return ApprovalBallot::from_indices(m, idx);
}

Component component_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "ic") return Ic{j.at("m").get<std::size_t>(), j.at("p").get<double>()};
  if (kind == "hamming") return Hamming{j.at("phi").get<double>(), central_from_json(j)};
  if (kind == "resampling") {
    return Resampling{j.at("p").get<double>(), j.at("phi").get<double>(), central_from_json(j)};
  }
  if (kind == "tiam") {
    return TParamIam{j.at("group_of").get<std::vector<std::size_t>>(),
                     j.at("probs").get<std::vector<double>>()};
  }
  if (kind == "fulliam") return FullIam{j.at("probs").get<std::vector<double>>()};
  if (kind == "mixture") throw Error(ErrorKind::InvalidModel, "mixtures cannot be nested");
  throw Error(ErrorKind::InvalidModel, "unknown model kind '" + kind + "'");
}

}  // namespace

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::Ic: return "ic";
    case Family::FullIam: return "fulliam";
    case Family::Hamming: return "hamming";
    case Family::Resampling: return "resampling";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name == "ic") return Family::Ic;
  if (name == "fulliam") return Family::FullIam;
  if (name == "hamming") return Family::Hamming;
  if (name == "resampling") return Family::Resampling;
  throw Error(ErrorKind::BadConfig, "unknown component family '" + std::string(name) + "'");
}

Family family_of(const Component& c) {
  return std::visit(overloaded{
                        [](const Ic&) { return Family::Ic; },
                        [](const Hamming&) { return Family::Hamming; },
                        [](const Resampling&) { return Family::Resampling; },
                        [](const TParamIam& t) {
                          if (t.probs.size() != 2) {
                            throw Error(ErrorKind::WrongArity,
                                        "only 2-parameter IAMs belong to a component family");
                          }
                          return Family::Resampling;
                        },
                        [](const FullIam&) { return Family::FullIam; },
                    },
                    c);
}

Culture to_culture(const Component& c) {
  return std::visit([](const auto& x) -> Culture { return x; }, c);
}

std::size_t num_candidates(const Component& c) {
  return std::visit(overloaded{
                        [](const Ic& ic) { return ic.m; },
                        [](const Hamming& h) { return h.central.size(); },
                        [](const Resampling& r) { return r.central.size(); },
                        [](const TParamIam& t) { return t.group_of.size(); },
                        [](const FullIam& f) { return f.probs.size(); },
                    },
                    c);
}

std::size_t num_candidates(const Culture& c) {
  return std::visit(overloaded{
                        [](const Mixture& mix) {
                          return mix.components.empty() ? std::size_t{0}
                                                        : num_candidates(mix.components.front());
                        },
                        [](const auto& x) { return num_candidates(Component(x)); },
                    },
                    c);
}

void validate(const Culture& c) {
  if (const auto* mix = std::get_if<Mixture>(&c)) {
    if (mix->components.empty()) throw Error(ErrorKind::InvalidModel, "mixture has no components");
    if (mix->weights.size() != mix->components.size()) {
      throw Error(ErrorKind::InvalidModel, "mixture weights and components differ in number");
    }
    double total = 0.0;
    for (double w : mix->weights) {
      if (!(w >= 0.0)) throw Error(ErrorKind::InvalidModel, "negative mixture weight");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw Error(ErrorKind::InvalidModel, "mixture weights sum to " + std::to_string(total));
    }
    const std::size_t m = num_candidates(mix->components.front());
    const std::size_t kind = mix->components.front().index();
    for (const auto& comp : mix->components) {
      if (num_candidates(comp) != m) {
        throw Error(ErrorKind::InvalidModel, "mixture components disagree on m");
      }
      if (comp.index() != kind) {
        throw Error(ErrorKind::InvalidModel, "mixture components must share one family");
      }
      validate_component(comp);
    }
    return;
  }
  std::visit(overloaded{[](const Mixture&) {},
                        [](const auto& x) { validate_component(Component(x)); }},
             c);
}

std::vector<double> candidate_probabilities(const Component& c) {
  return std::visit(
      overloaded{
          [](const Ic& ic) { return std::vector<double>(ic.m, ic.p); },
          [](const Hamming& h) {
            const double agree = 1.0 / (1.0 + h.phi);
            const double flip = h.phi / (1.0 + h.phi);
            std::vector<double> probs(h.central.size());
            for (std::size_t j = 0; j < probs.size(); ++j) probs[j] = h.central[j] ? agree : flip;
            return probs;
          },
          [](const Resampling& r) {
            const double in = (1.0 - r.phi) + r.phi * r.p;
            const double out = r.phi * r.p;
            std::vector<double> probs(r.central.size());
            for (std::size_t j = 0; j < probs.size(); ++j) probs[j] = r.central[j] ? in : out;
            return probs;
          },
          [](const TParamIam& t) {
            std::vector<double> probs(t.group_of.size());
            for (std::size_t j = 0; j < probs.size(); ++j) probs[j] = t.probs.at(t.group_of[j]);
            return probs;
          },
          [](const FullIam& f) { return f.probs; },
      },
      c);
}

Component clamp_probabilities(const Component& c, double eps) {
  return std::visit(
      overloaded{
          [&](const Ic& ic) -> Component { return Ic{ic.m, clamp_to(ic.p, eps)}; },
          [&](const Hamming& h) -> Component {
            // phi / (1 + phi) >= eps  <=>  phi >= eps / (1 - eps)
            return Hamming{std::max(h.phi, eps / (1.0 - eps)), h.central};
          },
          [&](const Resampling& r) -> Component {
            TParamIam t = resampling_to_2iam(r.p, r.phi, r.central);
            for (double& p : t.probs) p = clamp_to(p, eps);
            return t;
          },
          [&](const TParamIam& t) -> Component {
            TParamIam out = t;
            for (double& p : out.probs) p = clamp_to(p, eps);
            return out;
          },
          [&](const FullIam& f) -> Component {
            FullIam out = f;
            for (double& p : out.probs) p = clamp_to(p, eps);
            return out;
          },
      },
      c);
}

Culture clamp_probabilities(const Culture& c, double eps) {
  if (const auto* mix = std::get_if<Mixture>(&c)) {
    Mixture out{mix->weights, {}};
    for (const auto& comp : mix->components) out.components.push_back(clamp_probabilities(comp, eps));
    return out;
  }
  return std::visit(overloaded{[](const Mixture& m) -> Culture { return m; },
                               [&](const auto& x) -> Culture {
                                 return to_culture(clamp_probabilities(Component(x), eps));
                               }},
                    c);
}

Election sample_election(const Culture& c, std::size_t n, Rng& rng) {
  validate(c);
  const std::size_t m = num_candidates(c);
  std::vector<ApprovalBallot> ballots;
  ballots.reserve(n);
  if (const auto* mix = std::get_if<Mixture>(&c)) {
    std::vector<ComponentSampler> samplers;
    samplers.reserve(mix->components.size());
    for (const auto& comp : mix->components) samplers.emplace_back(comp);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = draw_component(mix->weights, rng);
      ballots.push_back(samplers[k](rng));
    }
  } else {
    const Component comp = std::visit(
        overloaded{[](const Mixture&) -> Component { return Ic{}; },
                   [](const auto& x) -> Component { return x; }},
        c);
    const ComponentSampler sampler(comp);
    for (std::size_t i = 0; i < n; ++i) ballots.push_back(sampler(rng));
  }
  return Election::with_default_roster(m, std::move(ballots));
}

TParamIam resampling_to_2iam(double p, double phi, const ApprovalBallot& central) {
  const double in = (1.0 - phi) + phi * p;
  const double out = phi * p;
  const std::size_t m = central.size();
  const std::size_t size = central.count();
  if (size == 0) return TParamIam{std::vector<std::size_t>(m, 0), {out}};
  if (size == m) return TParamIam{std::vector<std::size_t>(m, 0), {in}};
  TParamIam t{std::vector<std::size_t>(m, 1), {in, out}};
  for (std::size_t j = 0; j < m; ++j) {
    if (central[j]) t.group_of[j] = 0;
  }
  return t;
}

Resampling twoiam_to_resampling(const TParamIam& two) {
  if (two.probs.size() != 2) {
    throw Error(ErrorKind::WrongArity, "expected 2 groups, got " + std::to_string(two.probs.size()));
  }
  const std::size_t hi = two.probs[0] >= two.probs[1] ? 0 : 1;
  const double p1 = two.probs[hi];
  const double p2 = two.probs[1 - hi];
  ApprovalBallot central(two.group_of.size());
  for (std::size_t j = 0; j < two.group_of.size(); ++j) {
    if (two.group_of[j] == hi) central.set(j);
  }
  const double gap = p1 - p2;
  if (gap >= 1.0) return Resampling{0.0, 0.0, std::move(central)};
  const double phi = 1.0 - gap;
  const double p = std::clamp(p2 / phi, 0.0, 1.0);
  return Resampling{p, phi, std::move(central)};
}

TParamIam hamming_to_2iam(double phi, const ApprovalBallot& central) {
  const double agree = 1.0 / (1.0 + phi);
  const double flip = phi / (1.0 + phi);
  const std::size_t m = central.size();
  const std::size_t size = central.count();
  if (size == 0) return TParamIam{std::vector<std::size_t>(m, 0), {flip}};
  if (size == m) return TParamIam{std::vector<std::size_t>(m, 0), {agree}};
  TParamIam t{std::vector<std::size_t>(m, 1), {agree, flip}};
  for (std::size_t j = 0; j < m; ++j) {
    if (central[j]) t.group_of[j] = 0;
  }
  return t;
}

nlohmann::json culture_to_json(const Culture& c) {
  if (const auto* mix = std::get_if<Mixture>(&c)) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& comp : mix->components) comps.push_back(component_to_json(comp));
    return {{"kind", "mixture"}, {"weights", mix->weights}, {"components", std::move(comps)}};
  }
  return std::visit(overloaded{[](const Mixture&) { return nlohmann::json(); },
                               [](const auto& x) { return component_to_json(Component(x)); }},
                    c);
}

Culture culture_from_json(const nlohmann::json& j) {
  try {
    Culture out;
    if (j.at("kind").get<std::string>() == "mixture") {
      Mixture mix;
      mix.weights = j.at("weights").get<std::vector<double>>();
      for (const auto& comp : j.at("components")) mix.components.push_back(component_from_json(comp));
      out = std::move(mix);
    } else {
      out = to_culture(component_from_json(j));
    }
    validate(out);
    return out;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::InvalidModel, std::string("bad model JSON: ") + ex.what());
  }
}

}  // namespace iamlearn
