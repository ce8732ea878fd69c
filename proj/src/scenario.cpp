#include "hk/scenario.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "hk/rng.hpp"

namespace hk {

using nlohmann::json;

OpinionState generate_init(const InitSpec& spec, std::size_t n,
                           std::uint64_t seed) {
  if (spec.kind == InitSpec::Kind::kExplicit) {
    if (!spec.values.empty() && n != 0 && spec.values.size() != n) {
      throw std::invalid_argument("generate_init: explicit values disagree with n");
    }
    return OpinionState(spec.values, 0);
  }
  if (n == 0) {
    throw std::invalid_argument("generate_init: need at least one agent");
  }
  if (spec.kind == InitSpec::Kind::kUniformRandom ||
      spec.kind == InitSpec::Kind::kEquallySpaced) {
    if (!std::isfinite(spec.lo) || !std::isfinite(spec.hi) ||
        !(spec.lo < spec.hi)) {
      throw std::invalid_argument("generate_init: bounds must satisfy lo < hi");
    }
  }
  if (spec.kind == InitSpec::Kind::kTwoCluster) {
    if (!std::isfinite(spec.center_a) || !std::isfinite(spec.center_b) ||
        !std::isfinite(spec.width) || spec.width < 0.0) {
      throw std::invalid_argument("generate_init: bad cluster bands");
    }
  }

  std::vector<double> values(n);
  std::mt19937_64 gen(seed);
  switch (spec.kind) {
    case InitSpec::Kind::kUniformRandom:
      for (std::size_t i = 0; i < n; ++i) {
        values[i] = uniform_in(gen, spec.lo, spec.hi);
      }
      break;
    case InitSpec::Kind::kEquallySpaced:
      if (n == 1) {
        values[0] = spec.lo;
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          values[i] = spec.lo + static_cast<double>(i) * (spec.hi - spec.lo) /
                                    static_cast<double>(n - 1);
        }
      }
      break;
    case InitSpec::Kind::kTwoCluster: {
      const std::size_t first = (n + 1) / 2;
      for (std::size_t i = 0; i < n; ++i) {
        const double center = i < first ? spec.center_a : spec.center_b;
        values[i] = uniform_in(gen, center - spec.width / 2.0,
                               center + spec.width / 2.0);
      }
      break;
    }
    case InitSpec::Kind::kExplicit:
      break;  // handled above
  }
  return OpinionState(std::move(values), 0);
}

StepFn DynamicsSpec::make_step(const NeighborhoodSpec& spec) const {
  switch (kind) {
    case Kind::kHk:
      return [spec](const OpinionState& s) { return hk_step(s, spec); };
    case Kind::kWeighted: {
      if (!influence) {
        throw std::invalid_argument("dynamics: weighted kind needs an influence");
      }
      const InfluenceFunction f = *influence;
      return [spec, f](const OpinionState& s) {
        return weighted_step(s, spec, f);
      };
    }
    case Kind::kCost: {
      if (!profile) {
        throw std::invalid_argument("dynamics: cost kind needs a profile");
      }
      const CostProfileSet profiles{*profile};
      const double tol = argmin_tol;
      return [spec, profiles, tol](const OpinionState& s) {
        return cost_step(s, spec, profiles, tol);
      };
    }
  }
  throw std::logic_error("dynamics: unknown kind");
}

std::string DynamicsSpec::describe() const {
  switch (kind) {
    case Kind::kHk:
      return "hk";
    case Kind::kWeighted:
      return "weighted(" + (influence ? influence->describe() : "?") + ")";
    case Kind::kCost:
      if (!profile) return "cost(?)";
      return "cost(inertial=" + profile->inertial.describe() +
             ",disharmonic=" + profile->disharmonic.describe() + ")";
  }
  return "?";
}

NeighborhoodSpec Scenario::neighborhood() const {
  return gamma ? NeighborhoodSpec::bounded(*gamma)
               : NeighborhoodSpec::unbounded();
}

namespace {

std::string init_kind_name(InitSpec::Kind kind) {
  switch (kind) {
    case InitSpec::Kind::kUniformRandom: return "uniform_random";
    case InitSpec::Kind::kEquallySpaced: return "equally_spaced";
    case InitSpec::Kind::kTwoCluster: return "two_cluster";
    case InitSpec::Kind::kExplicit: return "explicit";
  }
  return "?";
}

InitSpec::Kind init_kind_from(const std::string& name) {
  if (name == "uniform_random") return InitSpec::Kind::kUniformRandom;
  if (name == "equally_spaced") return InitSpec::Kind::kEquallySpaced;
  if (name == "two_cluster") return InitSpec::Kind::kTwoCluster;
  if (name == "explicit") return InitSpec::Kind::kExplicit;
  throw std::invalid_argument("scenario: unknown init kind '" + name + "'");
}

std::string scenario_kind_name(Scenario::Kind kind) {
  switch (kind) {
    case Scenario::Kind::kSimulate: return "simulate";
    case Scenario::Kind::kCampaign: return "campaign";
    case Scenario::Kind::kIncentivize: return "incentivize";
    case Scenario::Kind::kScaling: return "scaling";
  }
  return "?";
}

Scenario::Kind scenario_kind_from(const std::string& name) {
  if (name == "simulate") return Scenario::Kind::kSimulate;
  if (name == "campaign") return Scenario::Kind::kCampaign;
  if (name == "incentivize") return Scenario::Kind::kIncentivize;
  if (name == "scaling") return Scenario::Kind::kScaling;
  throw std::invalid_argument("scenario: unknown kind '" + name + "'");
}

json init_to_json(const InitSpec& init) {
  json doc;
  doc["kind"] = init_kind_name(init.kind);
  switch (init.kind) {
    case InitSpec::Kind::kUniformRandom:
    case InitSpec::Kind::kEquallySpaced:
      doc["lo"] = init.lo;
      doc["hi"] = init.hi;
      break;
    case InitSpec::Kind::kTwoCluster:
      doc["center_a"] = init.center_a;
      doc["center_b"] = init.center_b;
      doc["width"] = init.width;
      break;
    case InitSpec::Kind::kExplicit:
      doc["values"] = init.values;
      break;
  }
  return doc;
}

InitSpec init_from_json(const json& doc) {
  InitSpec init;
  init.kind = init_kind_from(doc.at("kind").get<std::string>());
  switch (init.kind) {
    case InitSpec::Kind::kUniformRandom:
    case InitSpec::Kind::kEquallySpaced:
      init.lo = doc.at("lo").get<double>();
      init.hi = doc.at("hi").get<double>();
      break;
    case InitSpec::Kind::kTwoCluster:
      init.center_a = doc.at("center_a").get<double>();
      init.center_b = doc.at("center_b").get<double>();
      init.width = doc.at("width").get<double>();
      break;
    case InitSpec::Kind::kExplicit:
      init.values = doc.at("values").get<std::vector<double>>();
      break;
  }
  return init;
}

json stop_to_json(const StopSpec& stop) {
  json doc;
  switch (stop.rule.kind) {
    case StopRule::Kind::kMaxSteps:
      doc["kind"] = "max_steps";
      break;
    case StopRule::Kind::kFixedPoint:
      doc["kind"] = "fixed_point";
      doc["tolerance"] = stop.rule.tolerance;
      break;
    case StopRule::Kind::kAsymptotic:
      doc["kind"] = "asymptotic";
      doc["tolerance"] = stop.rule.tolerance;
      doc["window"] = stop.rule.window;
      break;
  }
  doc["max_steps"] = stop.rule.max_steps;
  return doc;
}

StopSpec stop_from_json(const json& doc) {
  StopSpec stop;
  const std::string kind = doc.at("kind").get<std::string>();
  const std::size_t max_steps = doc.at("max_steps").get<std::size_t>();
  if (kind == "max_steps") {
    stop.rule = StopRule::max_steps_only(max_steps);
  } else if (kind == "fixed_point") {
    stop.rule = StopRule::fixed_point(doc.value("tolerance", 1e-12), max_steps);
  } else if (kind == "asymptotic") {
    stop.rule = StopRule::asymptotic(doc.value("tolerance", 1e-9),
                                     doc.value("window", std::size_t{10}),
                                     max_steps);
  } else {
    throw std::invalid_argument("scenario: unknown stop kind '" + kind + "'");
  }
  return stop;
}

json dynamics_to_json(const DynamicsSpec& dynamics) {
  json doc;
  switch (dynamics.kind) {
    case DynamicsSpec::Kind::kHk:
      doc["kind"] = "hk";
      break;
    case DynamicsSpec::Kind::kWeighted:
      doc["kind"] = "weighted";
      doc["influence"] = influence_to_json(*dynamics.influence);
      break;
    case DynamicsSpec::Kind::kCost:
      doc["kind"] = "cost";
      doc["profile"] = {
          {"inertial", cost_function_to_json(dynamics.profile->inertial)},
          {"disharmonic", cost_function_to_json(dynamics.profile->disharmonic)},
      };
      if (dynamics.argmin_tol != 1e-12) doc["argmin_tol"] = dynamics.argmin_tol;
      break;
  }
  return doc;
}

DynamicsSpec dynamics_from_json(const json& doc) {
  DynamicsSpec dynamics;
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "hk") {
    dynamics.kind = DynamicsSpec::Kind::kHk;
  } else if (kind == "weighted") {
    dynamics.kind = DynamicsSpec::Kind::kWeighted;
    dynamics.influence = influence_from_json(doc.at("influence"));
  } else if (kind == "cost") {
    dynamics.kind = DynamicsSpec::Kind::kCost;
    const json& profile = doc.at("profile");
    dynamics.profile = CostProfile{
        cost_function_from_json(profile.at("inertial")),
        cost_function_from_json(profile.at("disharmonic")),
    };
    dynamics.argmin_tol = doc.value("argmin_tol", 1e-12);
  } else {
    throw std::invalid_argument("scenario: unknown dynamics kind '" + kind + "'");
  }
  return dynamics;
}

json campaign_to_json(const CampaignSection& section) {
  json doc;
  doc["theta"] = section.theta;
  switch (section.strategy) {
    case CampaignStrategy::kGreedyRecursive:
      doc["strategy"] = "greedy_recursive";
      break;
    case CampaignStrategy::kFixedOffset:
      doc["strategy"] = "fixed_offset";
      doc["offset"] = section.offset;
      break;
    case CampaignStrategy::kScripted: {
      doc["strategy"] = "scripted";
      json script = json::array();
      for (const auto& entry : section.script) {
        if (entry) {
          script.push_back(*entry);
        } else {
          script.push_back(nullptr);
        }
      }
      doc["script"] = std::move(script);
      break;
    }
  }
  doc["max_steps"] = section.max_steps;
  doc["crossing_tol"] = section.crossing_tol;
  return doc;
}

CampaignSection campaign_from_json(const json& doc) {
  CampaignSection section;
  section.theta = doc.at("theta").get<double>();
  const std::string strategy = doc.at("strategy").get<std::string>();
  if (strategy == "greedy_recursive") {
    section.strategy = CampaignStrategy::kGreedyRecursive;
  } else if (strategy == "fixed_offset") {
    section.strategy = CampaignStrategy::kFixedOffset;
    section.offset = doc.at("offset").get<double>();
  } else if (strategy == "scripted") {
    section.strategy = CampaignStrategy::kScripted;
    for (const json& entry : doc.at("script")) {
      if (entry.is_null()) {
        section.script.emplace_back(std::nullopt);
      } else {
        section.script.emplace_back(entry.get<double>());
      }
    }
  } else {
    throw std::invalid_argument("scenario: unknown strategy '" + strategy + "'");
  }
  section.max_steps = doc.at("max_steps").get<std::size_t>();
  section.crossing_tol = doc.value("crossing_tol", 1e-9);
  return section;
}

json incentive_to_json(const IncentiveSection& section) {
  json doc;
  doc["theta"] = section.theta;
  doc["rho"] = section.rho;
  doc["horizon"] = section.horizon;
  doc["split"] = section.split == BudgetSplit::kEven ? "even" : "front_loaded";
  doc["tolerance"] = section.tolerance;
  return doc;
}

IncentiveSection incentive_from_json(const json& doc) {
  IncentiveSection section;
  section.theta = doc.at("theta").get<double>();
  section.rho = doc.at("rho").get<double>();
  section.horizon = doc.at("horizon").get<std::size_t>();
  const std::string split = doc.value("split", std::string{"even"});
  if (split == "even") {
    section.split = BudgetSplit::kEven;
  } else if (split == "front_loaded") {
    section.split = BudgetSplit::kFrontLoaded;
  } else {
    throw std::invalid_argument("scenario: unknown split '" + split + "'");
  }
  section.tolerance = doc.value("tolerance", 1e-8);
  return section;
}

json scaling_to_json(const ScalingSection& section) {
  json doc;
  doc["n_values"] = section.n_values;
  doc["reps"] = section.reps;
  if (section.fixed_gamma) {
    doc["gamma"] = *section.fixed_gamma;
  } else if (section.spacing_ratio) {
    doc["gamma"] = json{{"spacing_ratio", *section.spacing_ratio}};
  }
  return doc;
}

ScalingSection scaling_from_json(const json& doc) {
  ScalingSection section;
  section.n_values = doc.at("n_values").get<std::vector<std::size_t>>();
  section.reps = doc.at("reps").get<std::size_t>();
  if (doc.contains("gamma")) {
    const json& gamma = doc.at("gamma");
    if (gamma.is_number()) {
      section.fixed_gamma = gamma.get<double>();
    } else {
      section.spacing_ratio = gamma.at("spacing_ratio").get<double>();
    }
  }
  return section;
}

}  // namespace

json influence_to_json(const InfluenceFunction& f) {
  json doc;
  switch (f.family()) {
    case InfluenceFamily::kConstantOne: doc["family"] = "constant_one"; break;
    case InfluenceFamily::kExpSquared: doc["family"] = "exp_sq"; break;
    case InfluenceFamily::kExpAbs: doc["family"] = "exp_abs"; break;
    case InfluenceFamily::kExpSqrt: doc["family"] = "exp_sqrt"; break;
    case InfluenceFamily::kPlateauLinear:
      doc["family"] = "plateau_linear";
      doc["epsilon"] = f.plateau_epsilon();
      doc["gamma"] = f.plateau_gamma();
      doc["terminal"] = f.plateau_terminal();
      break;
    case InfluenceFamily::kTable:
      doc["family"] = "table";
      doc["xs"] = f.table_xs();
      doc["ys"] = f.table_ys();
      break;
  }
  return doc;
}

InfluenceFunction influence_from_json(const json& doc) {
  const std::string family = doc.at("family").get<std::string>();
  if (family == "constant_one") return InfluenceFunction::constant_one();
  if (family == "exp_sq") return InfluenceFunction::exp_squared();
  if (family == "exp_abs") return InfluenceFunction::exp_abs();
  if (family == "exp_sqrt") return InfluenceFunction::exp_sqrt();
  if (family == "plateau_linear") {
    return InfluenceFunction::plateau_linear(doc.at("epsilon").get<double>(),
                                             doc.at("gamma").get<double>(),
                                             doc.at("terminal").get<double>());
  }
  if (family == "table") {
    return InfluenceFunction::table(doc.at("xs").get<std::vector<double>>(),
                                    doc.at("ys").get<std::vector<double>>());
  }
  throw std::invalid_argument("influence: unknown family '" + family + "'");
}

json cost_function_to_json(const CostFunction& c) {
  json doc;
  switch (c.family()) {
    case CostFamily::kPower:
      doc["family"] = "power";
      doc["exponent"] = c.exponent();
      break;
    case CostFamily::kTable:
      doc["family"] = "table";
      doc["xs"] = c.table_xs();
      doc["ys"] = c.table_ys();
      break;
  }
  return doc;
}

CostFunction cost_function_from_json(const json& doc) {
  const std::string family = doc.at("family").get<std::string>();
  if (family == "power") {
    return CostFunction::power(doc.at("exponent").get<double>());
  }
  if (family == "table") {
    return CostFunction::table(doc.at("xs").get<std::vector<double>>(),
                               doc.at("ys").get<std::vector<double>>());
  }
  throw std::invalid_argument("cost: unknown family '" + family + "'");
}

json scenario_to_json(const Scenario& scenario) {
  json doc;
  doc["name"] = scenario.name;
  doc["kind"] = scenario_kind_name(scenario.kind);
  doc["seed"] = scenario.seed;
  if (scenario.n != 0) doc["n"] = scenario.n;
  if (scenario.gamma) {
    doc["gamma"] = *scenario.gamma;
  } else {
    doc["gamma"] = "unbounded";
  }
  doc["init"] = init_to_json(scenario.init);
  doc["dynamics"] = dynamics_to_json(scenario.dynamics);
  doc["stop"] = stop_to_json(scenario.stop);
  if (scenario.campaign) doc["campaign"] = campaign_to_json(*scenario.campaign);
  if (scenario.incentive) {
    doc["incentive"] = incentive_to_json(*scenario.incentive);
  }
  if (scenario.scaling) doc["scaling"] = scaling_to_json(*scenario.scaling);
  return doc;
}

Scenario scenario_from_json(const json& doc) {
  Scenario scenario;
  scenario.name = doc.value("name", std::string{});
  scenario.kind = scenario_kind_from(doc.at("kind").get<std::string>());
  // No default here: a silently zero seed would masquerade as a real run.
  scenario.seed = doc.at("seed").get<std::uint64_t>();
  scenario.n = doc.value("n", std::size_t{0});
  if (doc.contains("gamma") && !doc.at("gamma").is_string()) {
    scenario.gamma = doc.at("gamma").get<double>();
  }
  scenario.init = init_from_json(doc.at("init"));
  if (doc.contains("dynamics")) {
    scenario.dynamics = dynamics_from_json(doc.at("dynamics"));
  }
  if (doc.contains("stop")) scenario.stop = stop_from_json(doc.at("stop"));
  if (doc.contains("campaign")) {
    scenario.campaign = campaign_from_json(doc.at("campaign"));
  }
  if (doc.contains("incentive")) {
    scenario.incentive = incentive_from_json(doc.at("incentive"));
  }
  if (doc.contains("scaling")) {
    scenario.scaling = scaling_from_json(doc.at("scaling"));
  }

  switch (scenario.kind) {
    case Scenario::Kind::kSimulate:
      if (scenario.n == 0 && scenario.init.kind != InitSpec::Kind::kExplicit) {
        throw std::invalid_argument("scenario: simulate needs n");
      }
      break;
    case Scenario::Kind::kCampaign:
      if (!scenario.campaign) {
        throw std::invalid_argument("scenario: campaign section missing");
      }
      if (!scenario.gamma) {
        throw std::invalid_argument("scenario: campaign needs a bounded gamma");
      }
      break;
    case Scenario::Kind::kIncentivize:
      if (!scenario.incentive) {
        throw std::invalid_argument("scenario: incentive section missing");
      }
      break;
    case Scenario::Kind::kScaling:
      if (!scenario.scaling || scenario.scaling->n_values.empty()) {
        throw std::invalid_argument("scenario: scaling section missing");
      }
      break;
  }
  return scenario;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open scenario file: " + path);
  }
  json doc = json::parse(in);
  // A manifest embeds the effective scenario; accept it directly so any run
  // can be reproduced from its manifest alone.
  if (doc.contains("scenario")) {
    return scenario_from_json(doc.at("scenario"));
  }
  return scenario_from_json(doc);
}

bool operator==(const Scenario& a, const Scenario& b) {
  return scenario_to_json(a) == scenario_to_json(b);
}

}  // namespace hk
