#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tutorbench/corpus.hpp"
#include "tutorbench/error.hpp"
#include "tutorbench/rng.hpp"

namespace tutorbench {

struct GenerationParams {
  double temperature = 0.7;
  int max_tokens = 100;
  double top_p = 0.8;
  double frequency_penalty = 0.0;
  double presence_penalty = 0.0;
  std::optional<std::vector<std::string>> stop;
  std::string model;

  // Throws InvalidRequest on out-of-range values.
  void validate() const;
  bool operator==(const GenerationParams&) const = default;
};

enum class FinishReason { Stop, Length, Other };

const char* to_string(FinishReason reason);
std::optional<FinishReason> parse_finish_reason(std::string_view text);

struct CompletionResult {
  std::string text;
  FinishReason finish_reason = FinishReason::Other;
  int prompt_tokens = 0;
  int completion_tokens = 0;
  int latency_ms = 0;
  int attempts = 1;  // total request attempts, filled by CompletionClient
};

struct RankerScores {
  double updown = 0.0;
  double human_vs_rand = 0.0;
  double human_vs_machine = 0.0;
};

struct TokenEmbedding {
  std::string token;
  std::vector<double> vector;  // unit L2 norm
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_delay{500};
  std::chrono::milliseconds max_delay{30000};
  // Fraction of each capped-exponential backoff step that is randomized:
  // 0 keeps the full deterministic delay, 1 draws uniformly from (0, delay].
  double jitter = 1.0;
  int max_in_flight = 4;

  void validate() const;
};

// One request attempt. Implementations throw Error; Throttled/Timeout/
// ServerError are treated as transient by the clients below.
class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual std::string name() const = 0;
  virtual CompletionResult complete_once(const std::string& prompt,
                                         const GenerationParams& params) = 0;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string name() const = 0;
  virtual std::vector<TokenEmbedding> embed_once(std::string_view text) = 0;
};

class RankerBackend {
 public:
  virtual ~RankerBackend() = default;
  virtual std::string name() const = 0;
  virtual RankerScores score_once(const std::vector<Turn>& context,
                                  const std::string& response) = 0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

namespace detail {

class Semaphore {
 public:
  explicit Semaphore(int count) : count_(count) {}

  void acquire() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [this] { return count_ > 0; });
    --count_;
  }

  void release() {
    {
      std::lock_guard lock(mutex_);
      ++count_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  int count_;
};

// Shared retry engine: capped exponential backoff with optional jitter and
// a per-gate concurrency cap. The semaphore is held only while an attempt is
// in flight, never across backoff sleeps.
class RetryGate {
 public:
  RetryGate(RetryPolicy policy, Sleeper sleeper);

  template <typename F>
  auto run(F&& attempt, int& attempts) -> decltype(attempt()) {
    for (int n = 1;; ++n) {
      attempts = n;
      semaphore_.acquire();
      try {
        auto result = attempt();
        semaphore_.release();
        return result;
      } catch (const Error& e) {
        semaphore_.release();
        if (!is_transient(e.code())) throw;
        if (n >= policy_.max_attempts)
          throw Error(ErrorCode::BackendUnavailable,
                      "gave up after " + std::to_string(n) +
                          " attempts; last error: " + e.what());
        sleeper_(backoff_delay(n));
      }
    }
  }

  const RetryPolicy& policy() const { return policy_; }

 private:
  std::chrono::milliseconds backoff_delay(int attempt);

  RetryPolicy policy_;
  Sleeper sleeper_;
  detail::Semaphore semaphore_;
  std::mutex rng_mutex_;
  Rng jitter_rng_;
};

}  // namespace detail

// Retrying, rate-limited completion calls. Shareable across threads.
class CompletionClient {
 public:
  explicit CompletionClient(CompletionBackend& backend,
                            RetryPolicy policy = {}, Sleeper sleeper = {});

  // Throws InvalidRequest (empty prompt, bad params), AuthError, or
  // BackendUnavailable once transient retries are exhausted.
  CompletionResult complete(const std::string& prompt,
                            const GenerationParams& params);

  CompletionBackend& backend() { return backend_; }
  const RetryPolicy& policy() const { return gate_.policy(); }

 private:
  CompletionBackend& backend_;
  detail::RetryGate gate_;
};

// Retrying token-embedding calls; output vectors are re-normalized so every
// vector leaves with unit L2 norm. Throws EmptyText for blank input or a
// tokenization that yields nothing.
class EmbeddingClient {
 public:
  explicit EmbeddingClient(EmbeddingProvider& provider,
                           RetryPolicy policy = {}, Sleeper sleeper = {});

  std::vector<TokenEmbedding> embed(std::string_view text);

  EmbeddingProvider& provider() { return provider_; }

 private:
  EmbeddingProvider& provider_;
  detail::RetryGate gate_;
};

// Retrying ranker calls; scores are clamped into [0,1].
class RankerClient {
 public:
  explicit RankerClient(RankerBackend& ranker, RetryPolicy policy = {},
                        Sleeper sleeper = {});

  RankerScores score(const std::vector<Turn>& context,
                     const std::string& response);

  RankerBackend& ranker() { return ranker_; }

 private:
  RankerBackend& ranker_;
  detail::RetryGate gate_;
};

// Completion-style fine-tuning serialization: dialogue history plus a cue
// suffix as the prompt, the reference with a leading space and a stop marker
// as the completion.
struct FinetuneSerialization {
  std::string prompt_suffix = "\nteacher:";
  std::string completion_prefix = " ";
  std::string stop_marker = "\n";
};

std::string finetune_prompt(const DialogueSample& sample,
                            const FinetuneSerialization& config = {});

// One JSON record per sample, keys "prompt" and "completion", one per line.
// Throws MissingReferences.
std::string export_finetune_dataset(const Corpus& corpus,
                                    const FinetuneSerialization& config = {});

}  // namespace tutorbench
