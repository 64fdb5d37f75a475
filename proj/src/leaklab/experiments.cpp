#include "leaklab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "leaklab/adversaries.hpp"
#include "leaklab/attack.hpp"
#include "leaklab/dp_toolkit.hpp"
#include "leaklab/errors.hpp"
#include "leaklab/leakage.hpp"
#include "leaklab/lemma_lab.hpp"
#include "leaklab/online_game.hpp"

namespace leaklab {

using nlohmann::json;

// Config fields

namespace {

struct Field {
  std::string name;
  std::function<void(ExperimentConfig&, const json&)> read;
  std::function<void(const ExperimentConfig&, json&)> write;
  std::function<void(ExperimentConfig&, const ExperimentConfig&)> merge;
};

[[noreturn]] void bad_type(const std::string& key, const char* want) {
  throw Error(ErrorCode::kParse,
              "config key '" + key + "' must be " + want);
}

template <class T>
T read_value(const std::string& key, const json& v) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) bad_type(key, "a boolean");
    return v.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) bad_type(key, "a string");
    return v.get<std::string>();
  } else if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) bad_type(key, "a number");
    return v.get<double>();
  } else if constexpr (std::is_same_v<T, int>) {
    if (!v.is_number_integer()) bad_type(key, "an integer");
    const auto x = v.get<std::int64_t>();
    if (x < -1000000 || x > 1000000) bad_type(key, "a small integer");
    return static_cast<int>(x);
  } else {
    static_assert(std::is_same_v<T, std::uint64_t>);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    bad_type(key, "a nonnegative integer");
  }
}

template <class T>
Field field(std::string name, std::optional<T> ExperimentConfig::*member) {
  Field f;
  f.name = name;
  f.read = [name, member](ExperimentConfig& c, const json& v) {
    c.*member = read_value<T>(name, v);
  };
  f.write = [name, member](const ExperimentConfig& c, json& out) {
    if (c.*member) out[name] = *(c.*member);
  };
  f.merge = [member](ExperimentConfig& base, const ExperimentConfig& over) {
    if (over.*member) base.*member = over.*member;
  };
  return f;
}

const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  static const std::vector<Field> table = {
      field("experiment", &C::experiment),
      field("d", &C::d),
      field("n", &C::n),
      field("rounds", &C::rounds),
      field("trials", &C::trials),
      field("seed", &C::seed),
      field("kind", &C::kind),
      field("learner", &C::learner),
      field("adversary", &C::adversary),
      field("epsilon", &C::epsilon),
      field("delta", &C::delta),
      field("output", &C::output),
      field("format", &C::format),
      field("jobs", &C::jobs),
      field("mode", &C::mode),
      field("samples", &C::samples),
      field("op", &C::op),
      field("k", &C::k),
      field("m", &C::m),
      field("epsilon2", &C::epsilon2),
      field("delta2", &C::delta2),
      field("p_i", &C::p_i),
      field("p_next", &C::p_next),
      field("probe_pairs", &C::probe_pairs),
      field("mc_samples", &C::mc_samples),
      field("threshold", &C::threshold),
      field("focused", &C::focused),
      field("oblivious", &C::oblivious),
      field("removal", &C::removal),
      field("claimed", &C::claimed),
      field("guard", &C::guard),
  };
  return table;
}

bool is_io_key(const std::string& key) {
  return key == "output" || key == "format" || key == "jobs";
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.push_back(f.name);
    return out;
  }();
  return keys;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParse, "config must be a single JSON object");
  }
  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    const auto it = std::find_if(fields().begin(), fields().end(),
                                 [&](const Field& f) { return f.name == key; });
    if (it == fields().end()) {
      throw Error(ErrorCode::kParse, "unknown config key '" + key + "'");
    }
    it->read(c, value);
  }
  return c;
}

ExperimentConfig merge_config(ExperimentConfig base,
                              const ExperimentConfig& overrides) {
  for (const auto& f : fields()) f.merge(base, overrides);
  return base;
}

json config_to_json(const ExperimentConfig& c, bool with_io) {
  json out = json::object();
  for (const auto& f : fields()) {
    if (!with_io && is_io_key(f.name)) continue;
    f.write(c, out);
  }
  return out;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "verify-bisection", "verify-regularity", "verify-buckets",
      "verify-fldspread", "verify-loginv",     "online-game",
      "ore-stress",       "attack",            "advantage-id",
      "jump-core",        "dp-calc",
  };
  return names;
}

bool experiment_needs_seed(const ExperimentConfig& c) {
  const std::string name = c.experiment.value_or("");
  if (name == "dp-calc") return false;
  if (name == "verify-bisection") return c.mode.value_or("exhaustive") != "exhaustive";
  return true;
}

// Runners

namespace {

double num(double v) { return round_significant(v, 12); }

json optional_num(const std::optional<double>& v) {
  return v ? json(num(*v)) : json(nullptr);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, message);
}

unsigned jobs_of(const ExperimentConfig& c) {
  return c.jobs ? static_cast<unsigned>(std::max<std::uint64_t>(1, *c.jobs))
                : default_jobs();
}

template <class T>
void set_default(std::optional<T>& slot, T value) {
  if (!slot) slot = value;
}

std::string csv_row(const std::vector<std::pair<std::string, std::string>>& cells) {
  std::string head, row;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) {
      head += ',';
      row += ',';
    }
    head += cells[k].first;
    row += cells[k].second;
  }
  return head + "\n" + row + "\n";
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

ExperimentResult finish(ExperimentConfig resolved, json body, bool violated,
                        std::string primary_name, std::string primary_csv,
                        std::vector<std::pair<std::string, std::string>> extra = {}) {
  ExperimentResult r;
  body["experiment"] = *resolved.experiment;
  body["config"] = config_to_json(resolved);
  body["outcome"] = violated ? "Violated" : "Ok";
  r.summary = std::move(body);
  r.violated = violated;
  r.primary_csv = primary_csv;
  r.artifacts.emplace_back(std::move(primary_name), std::move(primary_csv));
  for (auto& a : extra) r.artifacts.push_back(std::move(a));
  return r;
}

ExperimentResult run_bisection(ExperimentConfig c) {
  set_default(c.kind, std::string("floorlog"));
  set_default(c.d, 8);
  set_default(c.mode, std::string("exhaustive"));
  const DistanceKind kind = parse_distance_kind(*c.kind);
  c.kind = std::string(to_string(kind));
  BisectionMode mode;
  if (*c.mode == "exhaustive") {
    mode = BisectionMode::Exhaustive();
  } else if (*c.mode == "sampled") {
    set_default(c.samples, std::uint64_t{1000000});
    mode = BisectionMode::Sampled(*c.samples, *c.seed);
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "mode must be exhaustive or sampled, got '" + *c.mode + "'");
  }
  const BisectionResult res = check_bisection(kind, *c.d, mode);
  json body;
  body["verdict"] = res.holds ? "Holds" : "Fails";
  body["triples_checked"] = res.triples_checked;
  body["counterexample"] = res.counterexample ? json(*res.counterexample) : json(nullptr);
  std::string ce;
  if (res.counterexample) {
    const auto& t = *res.counterexample;
    ce = std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]);
  }
  const std::string csv = csv_row({{"kind", *c.kind},
                                   {"d", std::to_string(*c.d)},
                                   {"mode", *c.mode},
                                   {"verdict", res.holds ? "Holds" : "Fails"},
                                   {"triples_checked", std::to_string(res.triples_checked)},
                                   {"counterexample", ce}});
  return finish(c, body, !res.holds, "bisection.csv", csv);
}

json lemma_json(const LemmaReport& r) {
  json j;
  j["lemma"] = r.lemma;
  j["n"] = r.n;
  j["d"] = r.d;
  j["trials"] = r.trials;
  j["success"] = r.success;
  j["rate"] = num(r.rate);
  j["ci"] = num(r.ci);
  j["claimed"] = optional_num(r.claimed);
  j["verdict"] = std::string(to_string(r.verdict));
  j["observed_max"] = num(r.observed_max);
  j["diagnostic_only"] = r.diagnostic_only;
  if (r.first_violation) {
    const auto& v = *r.first_violation;
    j["first_violation"] = {{"trial", v.trial}, {"i", v.i}, {"y", v.y},
                            {"detail", v.detail}};
  } else {
    j["first_violation"] = nullptr;
  }
  if (!r.conditions.empty()) {
    json conds = json::array();
    for (const auto& cr : r.conditions) {
      conds.push_back({{"name", cr.name},
                       {"success", cr.success},
                       {"rate", num(cr.rate)},
                       {"ci", num(cr.ci)},
                       {"claimed", optional_num(cr.claimed)}});
    }
    j["conditions"] = conds;
  }
  return j;
}

std::string lemma_csv(const LemmaReport& r) {
  std::string out = "trial,success\n";
  for (std::size_t k = 0; k < r.per_trial.size(); ++k) {
    out += std::to_string(k) + "," + std::to_string(r.per_trial[k]) + "\n";
  }
  return out;
}

ExperimentResult run_lemma_experiment(ExperimentConfig c) {
  const std::string name = *c.experiment;
  const bool big = name == "verify-fldspread" || name == "verify-loginv";
  set_default(c.n, std::uint64_t{big ? 256u : 128u});
  set_default(c.d, 40);
  set_default(c.trials, std::uint64_t{name == "verify-loginv" ? 200u
                                      : big                   ? 500u
                                                              : 1000u});
  LemmaSetup setup;
  setup.n = *c.n;
  setup.d = *c.d;
  setup.trials = *c.trials;
  setup.seed = *c.seed;
  setup.jobs = jobs_of(c);
  setup.claimed = c.claimed;
  LemmaReport report;
  if (name == "verify-regularity") {
    report = verify_regularity(setup);
  } else if (name == "verify-buckets") {
    report = verify_bucket_sizes(setup);
  } else if (name == "verify-fldspread") {
    report = verify_fldspread(setup, c.guard);
  } else {
    set_default(c.probe_pairs, std::uint64_t{16});
    report = verify_log_invariance(setup, *c.probe_pairs);
  }
  return finish(c, lemma_json(report), report.verdict == Verdict::kViolated,
                "trials.csv", lemma_csv(report));
}

std::optional<std::size_t> mistake_bound(const std::string& learner,
                                         DistanceKind kind, int d) {
  if (learner == "halving") return static_cast<std::size_t>(d);
  if (learner == "lencthr" && kind != DistanceKind::kOrderOnly) {
    return static_cast<std::size_t>(d) + 4;
  }
  return std::nullopt;
}

EncLearnerFactory enc_learner_factory(const std::string& name) {
  if (name == "lencthr") {
    return [](const EvalOracle& oracle) {
      return std::make_unique<LEncThrLearner>(oracle);
    };
  }
  if (name == "constant0" || name == "constant1") {
    const int value = name == "constant1" ? 1 : 0;
    return [value](const EvalOracle&) {
      return std::make_unique<ConstantEncLearner>(value);
    };
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown learner '" + name + "'");
}

ExperimentResult run_online_game(ExperimentConfig c) {
  set_default(c.learner, std::string("lencthr"));
  set_default(c.adversary, std::string("adaptive"));
  set_default(c.d, 16);
  set_default(c.rounds, std::uint64_t{10000});
  set_default(c.kind, std::string("floorlog"));
  set_default(c.oblivious, false);
  const DistanceKind kind = parse_distance_kind(*c.kind);
  c.kind = std::string(to_string(kind));

  GameTranscript t;
  SymmetryStats stats;
  if (*c.learner == "halving") {
    const auto make_adversary = plain_adversary_factory(*c.adversary);
    PlainGameSetup setup{*c.d, *c.rounds, *c.seed, c.threshold, *c.oblivious};
    HalvingLearner learner(*c.d);
    t = run_plain_game(setup, learner, make_adversary);
  } else {
    const auto make_learner = enc_learner_factory(*c.learner);
    const auto make_adversary = enc_adversary_factory(*c.adversary, &stats);
    EncGameSetup setup{*c.d, kind, *c.rounds, *c.seed, c.threshold, *c.oblivious};
    if (*c.adversary == "ore-breaker" && !setup.threshold) {
      setup.threshold = domain_size(*c.d) / 2;
    }
    t = run_enc_game(setup, make_learner, make_adversary);
  }
  const auto bound = mistake_bound(*c.learner, kind, *c.d);
  std::optional<std::int64_t> max_potential;
  for (const auto& r : t.rounds) {
    if (r.potential_after) {
      max_potential = std::max(max_potential.value_or(0), *r.potential_after);
    }
  }
  json body;
  body["learner"] = t.learner_name;
  body["adversary"] = t.adversary_name;
  body["threshold"] = t.threshold;
  body["rounds_played"] = t.rounds.size();
  body["stopped_early"] = t.stopped_early;
  body["mistakes"] = t.total_mistakes;
  body["mistake_bound"] = bound ? json(*bound) : json(nullptr);
  body["within_bound"] = bound ? json(t.total_mistakes <= *bound) : json(nullptr);
  body["max_potential"] = max_potential ? json(*max_potential) : json(nullptr);
  if (*c.adversary == "ore-breaker") {
    body["symmetric_rounds"] = stats.rounds_checked - stats.asymmetric_rounds;
    body["asymmetric_rounds"] = stats.asymmetric_rounds;
  }
  std::ostringstream csv;
  write_transcript_csv(csv, t);
  return finish(c, body, bound && t.total_mistakes > *bound, "transcript.csv",
                csv.str());
}

ExperimentResult run_ore_stress(ExperimentConfig c) {
  set_default(c.d, 32);
  set_default(c.rounds, std::uint64_t{2000});
  set_default(c.trials, std::uint64_t{100});
  set_default(c.kind, std::string("orderonly"));
  set_default(c.learner, std::string("lencthr"));
  set_default(c.adversary, std::string("ore-breaker"));
  const DistanceKind kind = parse_distance_kind(*c.kind);
  c.kind = std::string(to_string(kind));
  require(*c.adversary == "ore-breaker", "ore-stress uses the ore-breaker adversary");
  const auto make_learner = enc_learner_factory(*c.learner);

  struct SeedRun {
    std::size_t mistakes = 0;
    std::size_t rounds = 0;
    SymmetryStats stats;
  };
  const auto runs = run_trials<SeedRun>(
      *c.trials, *c.seed, jobs_of(c), [&](std::size_t, Rng& rng) {
        SeedRun run;
        EncGameSetup setup{*c.d, kind, *c.rounds, rng(),
                           domain_size(*c.d) / 2, false};
        const auto t = run_enc_game(setup, make_learner,
                                    enc_adversary_factory("ore-breaker", &run.stats));
        run.mistakes = t.total_mistakes;
        run.rounds = t.rounds.size();
        return run;
      });
  std::size_t in_band = 0, asymmetric = 0, checked = 0, max_mistakes = 0;
  double lo_rate = 1.0, hi_rate = 0.0, sum_rate = 0.0;
  std::string csv = "seed_index,mistakes,rounds,rate,asymmetric_rounds\n";
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& run = runs[k];
    const double rate = run.rounds ? static_cast<double>(run.mistakes) /
                                         static_cast<double>(run.rounds)
                                   : 0.0;
    in_band += rate >= 0.45 && rate <= 0.55;
    lo_rate = std::min(lo_rate, rate);
    hi_rate = std::max(hi_rate, rate);
    sum_rate += rate;
    asymmetric += run.stats.asymmetric_rounds;
    checked += run.stats.rounds_checked;
    max_mistakes = std::max(max_mistakes, run.mistakes);
    csv += std::to_string(k) + "," + std::to_string(run.mistakes) + "," +
           std::to_string(run.rounds) + "," + fmt(rate) + "," +
           std::to_string(run.stats.asymmetric_rounds) + "\n";
  }
  json body;
  body["seeds"] = runs.size();
  body["in_band"] = in_band;
  body["band"] = {0.45, 0.55};
  body["min_rate"] = num(lo_rate);
  body["max_rate"] = num(hi_rate);
  body["mean_rate"] = num(sum_rate / static_cast<double>(runs.size()));
  body["max_mistakes"] = max_mistakes;
  body["rounds_checked"] = checked;
  body["asymmetric_rounds"] = asymmetric;
  bool violated;
  if (kind == DistanceKind::kOrderOnly) {
    // At least 90% of seeds in the band and symmetric candidates throughout.
    violated = in_band * 10 < runs.size() * 9 || asymmetric > 0;
  } else {
    const std::size_t bound = static_cast<std::size_t>(*c.d) + 4;
    body["mistake_bound"] = bound;
    violated = max_mistakes > bound;
  }
  return finish(c, body, violated, "seeds.csv", csv);
}

ExperimentResult run_attack_experiment(ExperimentConfig c) {
  set_default(c.n, std::uint64_t{16});
  set_default(c.d, 24);
  set_default(c.trials, std::uint64_t{100000});
  set_default(c.learner, std::string("largest-positive"));
  set_default(c.kind, std::string("floorlog"));
  set_default(c.focused, false);
  set_default(c.removal, std::string("direct"));
  const DistanceKind kind = parse_distance_kind(*c.kind);
  c.kind = std::string(to_string(kind));
  require(*c.removal == "direct" || *c.removal == "ai",
          "removal must be direct or ai, got '" + *c.removal + "'");
  if (*c.learner == "expmech") set_default(c.epsilon, 1.0);
  const auto learner = make_batch_learner(*c.learner, c.epsilon.value_or(1.0), *c.d);

  AttackSetup setup;
  setup.n = *c.n;
  setup.d = *c.d;
  setup.trials = *c.trials;
  setup.seed = *c.seed;
  setup.jobs = jobs_of(c);
  setup.kind = kind;
  setup.focused = *c.focused;
  setup.removal = *c.removal == "direct" ? RemovalConstruction::kDirect
                                         : RemovalConstruction::kAiIntersection;
  const AttackResult res = run_attack(setup, *learner);
  const auto& e = res.estimate;
  json body;
  body["advantage"] = num(e.advantage);
  body["p_left"] = num(e.p_left);
  body["p_right"] = num(e.p_right);
  body["sigma"] = num(e.sigma);
  body["ci_halfwidth"] = num(e.ci_halfwidth);
  body["correct_rate"] = num(e.correct_rate);
  body["trials"] = e.trials;
  body["aborted"] = res.aborted;
  body["abort_rate"] = num(res.abort_rate);
  body["invalid_non_aborted"] = res.invalid_non_aborted;
  body["reference_floor"] = num(1.0 / (8.0 * static_cast<double>(*c.n)));

  std::string csv = "trial,i,aborted,removal_size,b,guess,valid,p_hat_agree\n";
  std::string jsonl;
  for (const auto& log : res.logs) {
    csv += std::to_string(log.trial) + "," + std::to_string(log.i) + "," +
           (log.aborted ? "1" : "0") + "," + std::to_string(log.removal_size) +
           "," + std::to_string(log.b) + "," + std::to_string(log.guess) + "," +
           (log.valid ? "1" : "0") + "," + fmt(log.p_hat_agree) + "\n";
    json line = {{"trial", log.trial},
                 {"i", log.i},
                 {"aborted", log.aborted},
                 {"removal_size", log.removal_size},
                 {"b", log.b},
                 {"b_guess", log.guess},
                 {"p_hat_agree", num(log.p_hat_agree)}};
    jsonl += line.dump() + "\n";
  }
  return finish(c, body, res.invalid_non_aborted > 0, "trials.csv", csv,
                {{"trials.jsonl", jsonl}});
}

ExperimentResult run_advantage_identity(ExperimentConfig c) {
  set_default(c.p_i, 0.75);
  set_default(c.p_next, 0.25);
  set_default(c.trials, std::uint64_t{1000000});
  const IdentityCheck res =
      advantage_identity_check(*c.p_i, *c.p_next, *c.trials, *c.seed);
  const double sigma = std::sqrt(0.25 / static_cast<double>(*c.trials));
  const double tolerance = std::max(0.005, 4.0 * sigma);
  const double diff = std::fabs(res.empirical - res.analytic);
  json body;
  body["empirical"] = num(res.empirical);
  body["analytic"] = num(res.analytic);
  body["abs_diff"] = num(diff);
  body["tolerance"] = num(tolerance);
  const std::string csv = csv_row({{"p_i", fmt(*c.p_i)},
                                   {"p_next", fmt(*c.p_next)},
                                   {"trials", std::to_string(*c.trials)},
                                   {"empirical", fmt(res.empirical)},
                                   {"analytic", fmt(res.analytic)}});
  return finish(c, body, diff > tolerance, "identity.csv", csv);
}

ExperimentResult run_jump_core(ExperimentConfig c) {
  set_default(c.n, std::uint64_t{16});
  set_default(c.trials, std::uint64_t{100000});
  const JumpSearch res = jump_core_search(*c.n, *c.trials, *c.seed);
  json body;
  body["generated"] = res.generated;
  body["feasible"] = res.feasible;
  body["counterexamples"] = res.counterexamples;
  body["required_gap"] = num(1.0 / (2.0 * static_cast<double>(*c.n)));
  const std::string csv = csv_row({{"n", std::to_string(*c.n)},
                                   {"generated", std::to_string(res.generated)},
                                   {"feasible", std::to_string(res.feasible)},
                                   {"counterexamples", std::to_string(res.counterexamples)}});
  return finish(c, body, res.counterexamples > 0 || res.feasible < *c.trials,
                "jump.csv", csv);
}

ExperimentResult run_dp_calc(ExperimentConfig c) {
  require(c.op.has_value(), "dp-calc needs op (group, compose, subsample)");
  require(c.epsilon && c.delta, "dp-calc needs epsilon and delta");
  const PrivacyParams p{*c.epsilon, *c.delta};
  PrivacyParams out;
  if (*c.op == "group") {
    require(c.k.has_value(), "dp-calc group needs k");
    out = group_privacy(p, *c.k);
  } else if (*c.op == "compose") {
    require(c.epsilon2 && c.delta2, "dp-calc compose needs epsilon2 and delta2");
    out = compose(p, PrivacyParams{*c.epsilon2, *c.delta2});
  } else if (*c.op == "subsample") {
    require(c.m && c.n, "dp-calc subsample needs m and n");
    out = subsample_amplify(p, *c.m, *c.n);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown dp-calc op '" + *c.op + "'");
  }
  json body;
  body["op"] = *c.op;
  body["epsilon"] = num(out.epsilon);
  body["delta"] = num(out.delta);
  const std::string csv =
      csv_row({{"op", *c.op}, {"epsilon", fmt(out.epsilon)}, {"delta", fmt(out.delta)}});
  return finish(c, body, false, "privacy.csv", csv);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (!config.experiment) {
    throw Error(ErrorCode::kInvalidArgument, "config names no experiment");
  }
  const std::string& name = *config.experiment;
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown experiment '" + name + "'");
  }
  if (config.format && *config.format != "json" && *config.format != "csv") {
    throw Error(ErrorCode::kInvalidArgument,
                "format must be json or csv, got '" + *config.format + "'");
  }
  if (experiment_needs_seed(config) && !config.seed) {
    throw Error(ErrorCode::kInvalidArgument, name + " needs a seed");
  }
  if (config.d) check_bit_width(*config.d);

  if (name == "verify-bisection") return run_bisection(config);
  if (name == "online-game") return run_online_game(config);
  if (name == "ore-stress") return run_ore_stress(config);
  if (name == "attack") return run_attack_experiment(config);
  if (name == "advantage-id") return run_advantage_identity(config);
  if (name == "jump-core") return run_jump_core(config);
  if (name == "dp-calc") return run_dp_calc(config);
  return run_lemma_experiment(config);
}

}  // namespace leaklab
