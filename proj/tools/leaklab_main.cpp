// leaklab command-line runner. Exit codes: 0 consistent / within bound,
// 2 violated / bound exceeded, 1 usage or config error.

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cli_config.hpp"
#include "leaklab/leaklab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolated = 2;

enum class FlagType { kString, kInt, kUnsigned, kDouble, kBool };

struct FlagSpec {
  const char* flag;  // without leading dashes
  const char* key;   // config key
  FlagType type;
  const char* help;
};

const std::vector<FlagSpec>& all_flags() {
  static const std::vector<FlagSpec> flags = {
      {"kind", "kind", FlagType::kString, "leakage kind: floorlog, exact, orderonly"},
      {"d", "d", FlagType::kInt, "bit width of the message space"},
      {"n", "n", FlagType::kUnsigned, "sample size"},
      {"rounds", "rounds", FlagType::kUnsigned, "online game horizon"},
      {"trials", "trials", FlagType::kUnsigned, "Monte Carlo trials"},
      {"seed", "seed", FlagType::kUnsigned, "master seed"},
      {"learner", "learner", FlagType::kString, "learner name"},
      {"adversary", "adversary", FlagType::kString, "adversary name"},
      {"epsilon", "epsilon", FlagType::kDouble, "privacy epsilon"},
      {"delta", "delta", FlagType::kDouble, "privacy delta"},
      {"mode", "mode", FlagType::kString, "exhaustive or sampled"},
      {"samples", "samples", FlagType::kUnsigned, "triples for sampled mode"},
      {"k", "k", FlagType::kUnsigned, "group size"},
      {"m", "m", FlagType::kUnsigned, "subsample size"},
      {"epsilon2", "epsilon2", FlagType::kDouble, "second mechanism epsilon"},
      {"delta2", "delta2", FlagType::kDouble, "second mechanism delta"},
      {"p-i", "p_i", FlagType::kDouble, "agreement probability at i"},
      {"p-next", "p_next", FlagType::kDouble, "agreement probability at i+1"},
      {"probe-pairs", "probe_pairs", FlagType::kUnsigned, "probe pairs per interval"},
      {"threshold", "threshold", FlagType::kUnsigned, "target threshold"},
      {"focused", "focused", FlagType::kBool, "fix the attacked index"},
      {"oblivious", "oblivious", FlagType::kBool, "hide predictions from the adversary"},
      {"removal", "removal", FlagType::kString, "removal set: direct or ai"},
      {"claimed", "claimed", FlagType::kDouble, "override the claimed success bound"},
      {"guard", "guard", FlagType::kDouble, "override the guard band"},
  };
  return flags;
}

struct Command {
  std::string name;
  std::string help;
  std::vector<std::string> flags;
  std::string op;  // dp-calc sub-op
};

std::vector<Command> commands() {
  const std::vector<std::string> lemma = {"n", "d", "trials", "seed", "claimed"};
  auto with = [](std::vector<std::string> base, std::vector<std::string> more) {
    base.insert(base.end(), more.begin(), more.end());
    return base;
  };
  return {
      {"verify-bisection", "Check the bisection property of a distance",
       {"kind", "d", "mode", "samples", "seed"}, ""},
      {"verify-regularity", "Removal-set sizes stay within the polylog budget", lemma, ""},
      {"verify-buckets", "Bucket lengths stay within the guard band", lemma, ""},
      {"verify-fldspread", "Survivors see equal fld to both interval ends",
       with(lemma, {"guard"}), ""},
      {"verify-loginv", "Leakage is blind to positions inside the interval",
       with(lemma, {"probe-pairs"}), ""},
      {"online-game", "Play one online learning game and write its transcript",
       {"learner", "adversary", "d", "rounds", "kind", "seed", "threshold", "oblivious"}, ""},
      {"ore-stress", "Order-only leakage against the symmetric adversary",
       {"d", "rounds", "trials", "kind", "learner", "seed"}, ""},
      {"attack", "Run the private-learner attack in the static security game",
       {"n", "d", "trials", "learner", "kind", "focused", "removal", "epsilon", "seed"}, ""},
      {"advantage-id", "Check the agreement advantage identity",
       {"p-i", "p-next", "trials", "seed"}, ""},
      {"jump-core", "Search for adjacent-gap counterexamples", {"n", "trials", "seed"}, ""},
  };
}

std::vector<Command> dp_commands() {
  return {
      {"group", "Group privacy for k-neighbours", {"epsilon", "delta", "k"}, "group"},
      {"compose", "Basic composition of two mechanisms",
       {"epsilon", "delta", "epsilon2", "delta2"}, "compose"},
      {"subsample", "Amplification by subsampling m of n",
       {"epsilon", "delta", "m", "n"}, "subsample"},
  };
}

const FlagSpec& spec_for(const std::string& flag) {
  for (const auto& f : all_flags())
    if (flag == f.flag) return f;
  throw std::logic_error("no flag --" + flag);
}

nlohmann::json convert(const FlagSpec& spec, const std::string& text) {
  const std::string where = "--" + std::string(spec.flag);
  auto bad = [&](const char* what) -> nlohmann::json {
    throw leaklab_cli::ConfigError(where + " expects " + what + ", got '" + text + "'");
  };
  const char* first = text.data();
  const char* last = text.data() + text.size();
  switch (spec.type) {
    case FlagType::kString:
      return text;
    case FlagType::kInt: {
      int v = 0;
      auto [p, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || p != last) return bad("an integer");
      return v;
    }
    case FlagType::kUnsigned: {
      std::uint64_t v = 0;
      auto [p, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || p != last) return bad("a nonnegative integer");
      return v;
    }
    case FlagType::kDouble: {
      try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) return bad("a number");
        return v;
      } catch (const std::exception&) {
        return bad("a number");
      }
    }
    case FlagType::kBool:
      return true;
  }
  return nullptr;
}

struct Invocation {
  std::string experiment;
  std::string op;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> switches;
  std::string config_path;
  std::optional<std::uint64_t> jobs;
  std::string format = "json";
  std::string output;
};

void add_common(CLI::App* sub, Invocation& inv) {
  sub->add_option("--config", inv.config_path, "JSON config file; flags override it");
  sub->add_option("--jobs", inv.jobs, "worker threads (default: LEAKLAB_JOBS or all cores)");
  sub->add_option("--format", inv.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--output", inv.output, "write the result here instead of stdout");
}

void add_flags(CLI::App* sub, const Command& cmd, Invocation& inv) {
  for (const auto& name : cmd.flags) {
    const FlagSpec& spec = spec_for(name);
    if (spec.type == FlagType::kBool) {
      sub->add_flag("--" + name, inv.switches[name], spec.help);
    } else {
      sub->add_option("--" + name, inv.values[name], spec.help);
    }
  }
}

bool write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  out << data;
  return static_cast<bool>(out);
}

int run(const Invocation& inv, const Command& cmd, CLI::App* sub) {
  nlohmann::json config = nlohmann::json::object();
  if (!inv.config_path.empty()) config = leaklab_cli::load_config(inv.config_path);

  nlohmann::json overrides = nlohmann::json::object();
  overrides["experiment"] = inv.experiment;
  if (!inv.op.empty()) overrides["op"] = inv.op;
  for (const auto& name : cmd.flags) {
    const FlagSpec& spec = spec_for(name);
    if (sub->count("--" + name) == 0) continue;
    overrides[spec.key] = convert(spec, spec.type == FlagType::kBool ? "" : inv.values.at(name));
  }
  if (inv.jobs) overrides["jobs"] = *inv.jobs;
  if (!inv.output.empty()) overrides["output"] = inv.output;
  if (sub->count("--format") > 0 || !config.contains("format")) overrides["format"] = inv.format;
  config = leaklab_cli::apply_overrides(config, overrides);

  ll_report* raw = nullptr;
  if (ll_experiment_run(config.dump().c_str(), &raw) != LL_OK) {
    throw leaklab_cli::ConfigError(ll_last_error());
  }
  std::unique_ptr<ll_report, decltype(&ll_report_destroy)> report(raw, ll_report_destroy);

  const bool as_csv = config.value("format", std::string("json")) == "csv";
  const std::string main_output =
      as_csv ? ll_report_primary_csv(report.get()) : ll_report_summary_json(report.get());
  const std::string output = config.value("output", std::string());
  if (output.empty()) {
    std::cout << main_output;
  } else {
    const std::filesystem::path path(output);
    if (!write_file(path, main_output)) {
      throw leaklab_cli::ConfigError("cannot write '" + output + "'");
    }
    // Remaining artifacts go next to the main output as <stem>.<artifact>.
    const std::size_t count = ll_report_artifact_count(report.get());
    for (std::size_t k = as_csv ? 1 : 0; k < count; ++k) {
      std::size_t length = 0;
      const char* data = ll_report_artifact_data(report.get(), k, &length);
      std::filesystem::path side = path;
      side.replace_filename(path.stem().string() + "." +
                            ll_report_artifact_name(report.get(), k));
      if (!write_file(side, std::string(data, length))) {
        throw leaklab_cli::ConfigError("cannot write '" + side.string() + "'");
      }
    }
  }
  return ll_report_violated(report.get()) ? kExitViolated : kExitOk;
}

int run_report(const std::vector<std::string>& files) {
  bool violated = false;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw leaklab_cli::ConfigError("cannot open '" + file + "'");
    nlohmann::json summary;
    try {
      summary = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error&) {
      throw leaklab_cli::ConfigError("'" + file + "' is not a JSON summary");
    }
    const std::string outcome = summary.value("outcome", std::string("unknown"));
    violated = violated || outcome == "Violated";
    std::cout << file << ": " << summary.value("experiment", std::string("?")) << " "
              << outcome;
    if (summary.contains("verdict")) std::cout << " (" << summary["verdict"].get<std::string>() << ")";
    std::cout << "\n";
  }
  return violated ? kExitViolated : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"leaklab: experiments on leakage, online learning and private learning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ll_version()));

  Invocation inv;
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& cmd : commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    add_flags(sub, cmd, inv);
    add_common(sub, inv);
    subs.emplace_back(sub, cmd);
  }
  CLI::App* dp = app.add_subcommand("dp-calc", "Differential privacy calculus");
  dp->require_subcommand(1);
  for (const auto& cmd : dp_commands()) {
    CLI::App* sub = dp->add_subcommand(cmd.name, cmd.help);
    add_flags(sub, cmd, inv);
    add_common(sub, inv);
    subs.emplace_back(sub, Command{"dp-calc", cmd.help, cmd.flags, cmd.op});
  }
  std::vector<std::string> report_files;
  CLI::App* report = app.add_subcommand("report", "Summarize JSON outputs; exit 2 if any is violated");
  report->add_option("files", report_files, "summary files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "leaklab: error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (report->parsed()) return run_report(report_files);
    for (const auto& [sub, cmd] : subs) {
      if (!sub->parsed()) continue;
      inv.experiment = cmd.name;
      inv.op = cmd.op;
      return run(inv, cmd, sub);
    }
  } catch (const std::exception& e) {
    std::string message = e.what();
    for (char& ch : message)
      if (ch == '\n') ch = ' ';
    std::cerr << "leaklab: error: " << message << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
