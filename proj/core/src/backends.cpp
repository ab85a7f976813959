#include "tutorbench/backends.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <thread>

#include "tutorbench/promptkit.hpp"
#include "tutorbench/text.hpp"

namespace tutorbench {

void GenerationParams::validate() const {
  if (!(temperature >= 0.0 && temperature <= 2.0))
    throw Error(ErrorCode::InvalidRequest, "temperature must be in [0,2]");
  if (max_tokens <= 0)
    throw Error(ErrorCode::InvalidRequest, "max_tokens must be positive");
  if (!(top_p > 0.0 && top_p <= 1.0))
    throw Error(ErrorCode::InvalidRequest, "top_p must be in (0,1]");
}

const char* to_string(FinishReason reason) {
  switch (reason) {
    case FinishReason::Stop: return "stop";
    case FinishReason::Length: return "length";
    case FinishReason::Other: return "other";
  }
  return "other";
}

std::optional<FinishReason> parse_finish_reason(std::string_view text) {
  std::string t = to_lower(trim_view(text));
  if (t == "stop") return FinishReason::Stop;
  if (t == "length") return FinishReason::Length;
  if (t == "other") return FinishReason::Other;
  return std::nullopt;
}

void RetryPolicy::validate() const {
  if (max_attempts < 1)
    throw Error(ErrorCode::ConfigError, "max_attempts must be >= 1");
  if (base_delay.count() <= 0 || max_delay.count() <= 0)
    throw Error(ErrorCode::ConfigError, "retry delays must be positive");
  if (jitter < 0.0 || jitter > 1.0)
    throw Error(ErrorCode::ConfigError, "jitter must be in [0,1]");
  if (max_in_flight < 1)
    throw Error(ErrorCode::ConfigError, "max_in_flight must be >= 1");
}

namespace detail {

namespace {
Sleeper default_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}
}  // namespace

RetryGate::RetryGate(RetryPolicy policy, Sleeper sleeper)
    : policy_(policy),
      sleeper_(sleeper ? std::move(sleeper) : default_sleeper()),
      semaphore_(policy.max_in_flight),
      jitter_rng_(0x6a09e667f3bcc908ull) {
  policy_.validate();
}

std::chrono::milliseconds RetryGate::backoff_delay(int attempt) {
  // attempt is 1-based; the delay before attempt n+1 doubles each time.
  double delay = static_cast<double>(policy_.base_delay.count());
  for (int i = 1; i < attempt; ++i) delay *= 2.0;
  delay = std::min(delay, static_cast<double>(policy_.max_delay.count()));
  if (policy_.jitter > 0.0) {
    double u;
    {
      std::lock_guard lock(rng_mutex_);
      u = jitter_rng_.unit();
    }
    delay = delay * (1.0 - policy_.jitter) + delay * policy_.jitter * u;
  }
  auto ms = static_cast<std::int64_t>(delay);
  return std::chrono::milliseconds(ms > 0 ? ms : 1);
}

}  // namespace detail

CompletionClient::CompletionClient(CompletionBackend& backend,
                                   RetryPolicy policy, Sleeper sleeper)
    : backend_(backend), gate_(policy, std::move(sleeper)) {}

CompletionResult CompletionClient::complete(const std::string& prompt,
                                            const GenerationParams& params) {
  if (trim_view(prompt).empty())
    throw Error(ErrorCode::InvalidRequest, "prompt is empty");
  params.validate();

  int attempts = 0;
  CompletionResult result = gate_.run(
      [&] { return backend_.complete_once(prompt, params); }, attempts);
  result.attempts = attempts;
  return result;
}

EmbeddingClient::EmbeddingClient(EmbeddingProvider& provider,
                                 RetryPolicy policy, Sleeper sleeper)
    : provider_(provider), gate_(policy, std::move(sleeper)) {}

std::vector<TokenEmbedding> EmbeddingClient::embed(std::string_view text) {
  if (trim_view(text).empty())
    throw Error(ErrorCode::EmptyText, "cannot embed empty text");

  int attempts = 0;
  auto embeddings =
      gate_.run([&] { return provider_.embed_once(text); }, attempts);
  if (embeddings.empty())
    throw Error(ErrorCode::EmptyText, "tokenization produced no tokens");

  for (auto& e : embeddings) {
    double norm_sq = 0.0;
    for (double v : e.vector) norm_sq += v * v;
    if (!(norm_sq > 0.0) || !std::isfinite(norm_sq))
      throw Error(ErrorCode::ServerError,
                  "embedding for token \"" + e.token + "\" is degenerate");
    const double norm = std::sqrt(norm_sq);
    if (std::abs(norm - 1.0) > 1e-12) {
      for (double& v : e.vector) v /= norm;
    }
  }
  return embeddings;
}

RankerClient::RankerClient(RankerBackend& ranker, RetryPolicy policy,
                           Sleeper sleeper)
    : ranker_(ranker), gate_(policy, std::move(sleeper)) {}

RankerScores RankerClient::score(const std::vector<Turn>& context,
                                 const std::string& response) {
  if (trim_view(response).empty())
    throw Error(ErrorCode::EmptyText, "cannot score empty response");

  int attempts = 0;
  RankerScores scores =
      gate_.run([&] { return ranker_.score_once(context, response); },
                attempts);
  auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
  scores.updown = clamp01(scores.updown);
  scores.human_vs_rand = clamp01(scores.human_vs_rand);
  scores.human_vs_machine = clamp01(scores.human_vs_machine);
  return scores;
}

std::string finetune_prompt(const DialogueSample& sample,
                            const FinetuneSerialization& config) {
  return render_dialogue(sample, RoleLabeling::TeacherStudent, false) +
         config.prompt_suffix;
}

std::string export_finetune_dataset(const Corpus& corpus,
                                    const FinetuneSerialization& config) {
  std::string out;
  for (const auto& sample : corpus.samples) {
    if (!sample.reference_response)
      throw Error(ErrorCode::MissingReferences,
                  "sample \"" + sample.id + "\" has no reference response");
    nlohmann::ordered_json record;
    record["prompt"] = finetune_prompt(sample, config);
    record["completion"] =
        config.completion_prefix + *sample.reference_response +
        config.stop_marker;
    out += record.dump();
    out += '\n';
  }
  return out;
}

}  // namespace tutorbench
