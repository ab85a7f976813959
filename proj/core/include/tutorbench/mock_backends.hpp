#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tutorbench/backends.hpp"

namespace tutorbench {

// Deterministic offline stand-ins for the real services. Each one is a pure
// function of its inputs and the configured seed, so full pipelines can run
// and be replayed byte-for-byte without network access.

// Returns a canned teacher-style reply keyed by hash(prompt) ^ seed. Some
// keys produce the messy artifacts real completions show (cue-label echo,
// wrapping quotes, the model continuing the dialogue) so post-processing has
// something to chew on. Honors max_tokens by whitespace-token truncation.
class MockCompletionBackend : public CompletionBackend {
 public:
  explicit MockCompletionBackend(std::uint64_t seed = 0) : seed_(seed) {}

  std::string name() const override { return "mock-completion"; }
  CompletionResult complete_once(const std::string& prompt,
                                 const GenerationParams& params) override;

 private:
  std::uint64_t seed_;
};

// Context-free token embeddings: lowercased whitespace tokens (surrounding
// punctuation stripped), each mapped to a unit vector derived from
// hash(token) ^ seed. Identical tokens always get identical vectors.
class MockEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit MockEmbeddingProvider(std::uint64_t seed = 0, std::size_t dim = 16)
      : seed_(seed), dim_(dim) {}

  std::string name() const override { return "mock-embedding"; }
  std::vector<TokenEmbedding> embed_once(std::string_view text) override;

  // The tokenization the provider applies, exposed for tests.
  static std::vector<std::string> tokenize(std::string_view text);

 private:
  std::uint64_t seed_;
  std::size_t dim_;
};

// Deterministic heuristic scores, all in [0,1]. With w = response word count
// and overlap = fraction of response tokens that appear in the context:
//   human_vs_rand    = 0.5 + 0.5 * overlap
//   human_vs_machine = w / (w + 2)
//   updown           = (0.25 + 0.75 * overlap) * w / (w + 6)
class MockRankerBackend : public RankerBackend {
 public:
  std::string name() const override { return "mock-ranker"; }
  RankerScores score_once(const std::vector<Turn>& context,
                          const std::string& response) override;
};

}  // namespace tutorbench
