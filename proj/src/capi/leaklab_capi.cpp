#include "leaklab/leaklab.h"

#include <exception>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "leaklab/dp_toolkit.hpp"
#include "leaklab/errors.hpp"
#include "leaklab/experiments.hpp"
#include "leaklab/fre_oracle.hpp"
#include "leaklab/leakage.hpp"
#include "leaklab/security_game.hpp"

struct ll_oracle {
  leaklab::KeyRegistry registry;
};

struct ll_report {
  std::string summary;
  std::string primary_csv;
  bool violated = false;
  std::vector<std::pair<std::string, std::string>> artifacts;
};

namespace {

thread_local std::string last_error;

ll_status fail(ll_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class Fn>
ll_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return LL_OK;
  } catch (const leaklab::Error& e) {
    return fail(static_cast<ll_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(LL_PARSE, e.what());
  } catch (const std::exception& e) {
    return fail(LL_INTERNAL, e.what());
  } catch (...) {
    return fail(LL_INTERNAL, "unknown failure");
  }
}

leaklab::DistanceKind to_kind(ll_distance_kind kind) {
  switch (kind) {
    case LL_FLOORLOG:
      return leaklab::DistanceKind::kFloorLog;
    case LL_EXACT:
      return leaklab::DistanceKind::kExact;
    case LL_ORDERONLY:
      return leaklab::DistanceKind::kOrderOnly;
  }
  throw leaklab::Error(leaklab::ErrorCode::kInvalidArgument, "unknown distance kind");
}

void need(const void* p, const char* what) {
  if (!p) {
    throw leaklab::Error(leaklab::ErrorCode::kInvalidArgument,
                         std::string(what) + " is null");
  }
}

ll_leak_output to_c(const leaklab::LeakOutput& o) {
  return {static_cast<int8_t>(o.c01), static_cast<int8_t>(o.c12),
          static_cast<int8_t>(o.c02), o.closeness_bit};
}

leaklab::CiphertextHandle from_c(const ll_ciphertext& c) {
  return {{c.nonce_hi, c.nonce_lo}, {{c.params.hi, c.params.lo}}};
}

leaklab::ExperimentConfig parse_config(const char* text) {
  need(text, "config_json");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw leaklab::Error(leaklab::ErrorCode::kParse,
                         std::string("config is not valid JSON: ") + e.what());
  }
  return leaklab::config_from_json(j);
}

}  // namespace

extern "C" {

const char* ll_version(void) { return "0.1.0"; }

const char* ll_last_error(void) { return last_error.c_str(); }

ll_status ll_distance(ll_distance_kind kind, uint64_t a, uint64_t b, int64_t* out) {
  return guarded([&] {
    need(out, "out");
    *out = leaklab::distance(to_kind(kind), a, b);
  });
}

ll_status ll_leak(ll_distance_kind kind, uint64_t x0, uint64_t x1, uint64_t x2,
                  ll_leak_output* out) {
  return guarded([&] {
    need(out, "out");
    *out = to_c(leaklab::leak(to_kind(kind), x0, x1, x2));
  });
}

ll_status ll_check_bisection(ll_distance_kind kind, int d, int exhaustive,
                             uint64_t samples, uint64_t seed, int* holds,
                             uint64_t counterexample[3], uint64_t* triples_checked) {
  return guarded([&] {
    need(holds, "holds");
    const auto mode = exhaustive ? leaklab::BisectionMode::Exhaustive()
                                 : leaklab::BisectionMode::Sampled(samples, seed);
    const auto res = leaklab::check_bisection(to_kind(kind), d, mode);
    *holds = res.holds ? 1 : 0;
    if (counterexample && res.counterexample) {
      for (int k = 0; k < 3; ++k) counterexample[k] = (*res.counterexample)[k];
    }
    if (triples_checked) *triples_checked = res.triples_checked;
  });
}

ll_status ll_oracle_create(uint64_t salt, ll_oracle** out) {
  return guarded([&] {
    need(out, "out");
    *out = new ll_oracle{leaklab::KeyRegistry(salt)};
  });
}

void ll_oracle_destroy(ll_oracle* oracle) { delete oracle; }

ll_status ll_oracle_gen(ll_oracle* oracle, int d, ll_distance_kind kind,
                        uint64_t seed, uint64_t* key_id, ll_params* params) {
  return guarded([&] {
    need(oracle, "oracle");
    need(key_id, "key_id");
    const auto keys = oracle->registry.gen(d, to_kind(kind), seed);
    *key_id = keys.sk.key_id;
    if (params) *params = {keys.params.id.hi, keys.params.id.lo};
  });
}

ll_status ll_oracle_enc(ll_oracle* oracle, uint64_t key_id, uint64_t m,
                        ll_ciphertext* out) {
  return guarded([&] {
    need(oracle, "oracle");
    need(out, "out");
    const auto c = oracle->registry.enc(leaklab::SecretKey{key_id}, m);
    *out = {c.nonce.hi, c.nonce.lo, {c.params.id.hi, c.params.id.lo}};
  });
}

ll_status ll_oracle_dec(const ll_oracle* oracle, uint64_t key_id,
                        const ll_ciphertext* c, uint64_t* m, int* ok) {
  return guarded([&] {
    need(oracle, "oracle");
    need(c, "c");
    need(ok, "ok");
    const auto res = oracle->registry.dec(leaklab::SecretKey{key_id}, from_c(*c));
    *ok = res ? 1 : 0;
    if (res && m) *m = *res;
  });
}

ll_status ll_oracle_eval(const ll_oracle* oracle, const ll_params* params,
                         const ll_ciphertext* c0, const ll_ciphertext* c1,
                         const ll_ciphertext* c2, ll_leak_output* out, int* ok) {
  return guarded([&] {
    need(oracle, "oracle");
    need(params, "params");
    need(c0, "c0");
    need(c1, "c1");
    need(c2, "c2");
    need(ok, "ok");
    const leaklab::ParamsTag tag{{params->hi, params->lo}};
    const auto res =
        oracle->registry.eval(tag, from_c(*c0), from_c(*c1), from_c(*c2));
    *ok = res ? 1 : 0;
    if (res && out) *out = to_c(*res);
  });
}

ll_status ll_validate_submission(ll_distance_kind kind, int d, const uint64_t* left,
                                 const uint64_t* right, size_t length, int* valid,
                                 size_t triple[3]) {
  return guarded([&] {
    need(valid, "valid");
    if (length > 0) {
      need(left, "left");
      need(right, "right");
    }
    leaklab::ChallengeSubmission sub;
    sub.left.assign(left, left + length);
    sub.right.assign(right, right + length);
    const auto res = leaklab::validate_submission(sub, to_kind(kind), d);
    *valid = res.valid() ? 1 : 0;
    if (triple) {
      for (int k = 0; k < 3; ++k) triple[k] = res.triple[k];
    }
  });
}

ll_status ll_dp_group(double epsilon, double delta, size_t k, double* epsilon_out,
                      double* delta_out) {
  return guarded([&] {
    need(epsilon_out, "epsilon_out");
    need(delta_out, "delta_out");
    const auto p = leaklab::group_privacy({epsilon, delta}, k);
    *epsilon_out = p.epsilon;
    *delta_out = p.delta;
  });
}

ll_status ll_dp_compose(double epsilon1, double delta1, double epsilon2,
                        double delta2, double* epsilon_out, double* delta_out) {
  return guarded([&] {
    need(epsilon_out, "epsilon_out");
    need(delta_out, "delta_out");
    const auto p = leaklab::compose({epsilon1, delta1}, {epsilon2, delta2});
    *epsilon_out = p.epsilon;
    *delta_out = p.delta;
  });
}

ll_status ll_dp_subsample(double epsilon, double delta, size_t m, size_t n,
                          double* epsilon_out, double* delta_out) {
  return guarded([&] {
    need(epsilon_out, "epsilon_out");
    need(delta_out, "delta_out");
    const auto p = leaklab::subsample_amplify({epsilon, delta}, m, n);
    *epsilon_out = p.epsilon;
    *delta_out = p.delta;
  });
}

ll_status ll_config_check(const char* config_json) {
  return guarded([&] { parse_config(config_json); });
}

ll_status ll_experiment_run(const char* config_json, ll_report** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    const auto res = leaklab::run_experiment(parse_config(config_json));
    auto report = std::make_unique<ll_report>();
    report->summary = res.summary.dump(2) + "\n";
    report->primary_csv = res.primary_csv;
    report->violated = res.violated;
    report->artifacts = res.artifacts;
    *out = report.release();
  });
}

void ll_report_destroy(ll_report* report) { delete report; }

const char* ll_report_summary_json(const ll_report* report) {
  return report ? report->summary.c_str() : "";
}

const char* ll_report_primary_csv(const ll_report* report) {
  return report ? report->primary_csv.c_str() : "";
}

int ll_report_violated(const ll_report* report) {
  return report && report->violated ? 1 : 0;
}

size_t ll_report_artifact_count(const ll_report* report) {
  return report ? report->artifacts.size() : 0;
}

const char* ll_report_artifact_name(const ll_report* report, size_t index) {
  if (!report || index >= report->artifacts.size()) return nullptr;
  return report->artifacts[index].first.c_str();
}

const char* ll_report_artifact_data(const ll_report* report, size_t index,
                                    size_t* length) {
  if (!report || index >= report->artifacts.size()) return nullptr;
  const std::string& data = report->artifacts[index].second;
  if (length) *length = data.size();
  return data.c_str();
}

}  // extern "C"
