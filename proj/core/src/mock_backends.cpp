#include "tutorbench/mock_backends.hpp"

#include <cctype>
#include <cmath>
#include <unordered_set>

#include "tutorbench/text.hpp"

namespace tutorbench {

namespace {

const std::vector<std::string>& canned_bodies() {
  static const std::vector<std::string> bodies = {
      "Great, that's exactly right!",
      "Yes, that's correct. Can you try using it in another sentence?",
      "Not quite - remember the past simple form here.",
      "Good thinking, but a different word might fit this context better.",
      "Well done! Let's move on to the next exercise.",
      "Almost! Check the verb tense in your sentence.",
      "That's a good question - it depends on the context.",
      "Remember that we usually say it the other way around.",
      "Perfect! That would look good in an answer.",
      "Can you explain why you chose that word?",
  };
  return bodies;
}

std::string last_line(const std::string& text) {
  std::size_t pos = text.rfind('\n');
  return pos == std::string::npos ? text : text.substr(pos + 1);
}

std::string truncate_words(const std::string& text, int max_tokens,
                           bool& truncated) {
  truncated = false;
  if (max_tokens <= 0) return {};
  std::size_t i = 0;
  int words = 0;
  const auto is_space = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i >= text.size()) break;
    ++words;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (words == max_tokens) {
      truncated = i < text.size() &&
                  !trim_view(std::string_view(text).substr(i)).empty();
      return text.substr(0, i);
    }
  }
  return text;
}

}  // namespace

CompletionResult MockCompletionBackend::complete_once(
    const std::string& prompt, const GenerationParams& params) {
  const std::uint64_t h = splitmix64(fnv1a64(prompt) ^ seed_);
  const auto& bodies = canned_bodies();
  const std::string& body = bodies[(h >> 2) % bodies.size()];
  const std::string cue = last_line(prompt);
  const bool anonymous = starts_with_icase(cue, "Speaker");

  std::string raw;
  switch (h % 4) {
    case 0: raw = body; break;
    case 1: raw = cue + " " + body; break;
    case 2: raw = "'" + body + "'"; break;
    default: raw = cue + "' " + body + "'"; break;
  }
  if ((h >> 16) % 4 == 0) {
    raw += anonymous ? "\nSpeakerA: thank you!" : "\nstudent: thank you!";
  }

  bool truncated = false;
  raw = truncate_words(raw, params.max_tokens, truncated);

  CompletionResult result;
  result.text = raw;
  result.finish_reason = truncated ? FinishReason::Length : FinishReason::Stop;
  result.prompt_tokens = static_cast<int>(count_words(prompt));
  result.completion_tokens = static_cast<int>(count_words(raw));
  result.latency_ms = 0;
  return result;
}

std::vector<std::string> MockEmbeddingProvider::tokenize(
    std::string_view text) {
  std::vector<std::string> tokens;
  for (const auto& word : split_whitespace(text)) {
    std::string_view w(word);
    const auto is_punct = [](unsigned char c) {
      return std::ispunct(c) != 0;
    };
    while (!w.empty() && is_punct(static_cast<unsigned char>(w.front())))
      w.remove_prefix(1);
    while (!w.empty() && is_punct(static_cast<unsigned char>(w.back())))
      w.remove_suffix(1);
    if (!w.empty()) tokens.push_back(to_lower(w));
  }
  return tokens;
}

std::vector<TokenEmbedding> MockEmbeddingProvider::embed_once(
    std::string_view text) {
  std::vector<TokenEmbedding> out;
  for (auto& token : tokenize(text)) {
    TokenEmbedding e;
    e.vector.resize(dim_);
    // Components from splitmix64 only (no libm transcendentals), so the
    // vectors are bit-identical across platforms.
    const std::uint64_t key = splitmix64(fnv1a64(token) ^ seed_);
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const std::uint64_t bits = splitmix64(key + i + 1);
      const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
      e.vector[i] = 2.0 * u - 1.0;
      norm_sq += e.vector[i] * e.vector[i];
    }
    if (norm_sq <= 0.0) {
      e.vector[0] = 1.0;
      norm_sq = 1.0;
    }
    const double norm = std::sqrt(norm_sq);
    for (double& v : e.vector) v /= norm;
    e.token = std::move(token);
    out.push_back(std::move(e));
  }
  return out;
}

RankerScores MockRankerBackend::score_once(const std::vector<Turn>& context,
                                           const std::string& response) {
  std::unordered_set<std::string> context_tokens;
  for (const auto& turn : context) {
    for (auto& token : MockEmbeddingProvider::tokenize(turn.text))
      context_tokens.insert(std::move(token));
  }
  const auto response_tokens = MockEmbeddingProvider::tokenize(response);

  double overlap = 0.0;
  if (!response_tokens.empty()) {
    std::size_t hits = 0;
    for (const auto& token : response_tokens) {
      if (context_tokens.contains(token)) ++hits;
    }
    overlap = static_cast<double>(hits) /
              static_cast<double>(response_tokens.size());
  }
  const double w = static_cast<double>(response_tokens.size());

  RankerScores scores;
  scores.human_vs_rand = 0.5 + 0.5 * overlap;
  scores.human_vs_machine = w / (w + 2.0);
  scores.updown = (0.25 + 0.75 * overlap) * w / (w + 6.0);
  return scores;
}

}  // namespace tutorbench
