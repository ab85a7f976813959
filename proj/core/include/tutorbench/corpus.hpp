#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tutorbench {

enum class Role { Teacher, Student };

enum class Split { Train, Dev, Test, Custom };

const char* to_string(Role role);
const char* to_string(Split split);

// Case-insensitive ("teacher"/"Teacher"/"TEACHER" all accepted).
std::optional<Role> parse_role(std::string_view text);
std::optional<Split> parse_split(std::string_view text);

struct Turn {
  Role role = Role::Student;
  std::string text;

  bool operator==(const Turn&) const = default;
};

// One dialogue context plus the optional gold teacher utterance that ends it.
struct DialogueSample {
  std::string id;
  std::vector<Turn> utterances;
  std::optional<std::string> reference_response;

  bool operator==(const DialogueSample&) const = default;
};

struct Corpus {
  Split split = Split::Custom;
  std::vector<DialogueSample> samples;

  bool operator==(const Corpus&) const = default;
  const DialogueSample* find(std::string_view id) const;
};

struct ResponseLengthStats {
  std::size_t count = 0;  // samples with a reference
  double mean = 0.0;
  double stddev = 0.0;  // population
  std::size_t min = 0;
  std::size_t max = 0;

  bool operator==(const ResponseLengthStats&) const = default;
};

struct CorpusStats {
  std::size_t sample_count = 0;
  double turns_mean = 0.0;
  double turns_std = 0.0;  // population
  std::size_t turns_max = 0;
  // Whitespace-token word counts of reference responses; absent when no
  // sample carries a reference.
  std::optional<ResponseLengthStats> response;

  bool operator==(const CorpusStats&) const = default;
};

// Parse and validate one record. Roles are normalized case-insensitively;
// a null "response" counts as absent. Throws SchemaError naming the field.
DialogueSample validate_record(const nlohmann::json& record);

// Accepts a JSON array of records or one record per line. Record order is
// preserved. Throws MalformedFile, SchemaError (with record index and field
// name), DuplicateId.
Corpus load_corpus(const std::filesystem::path& path, Split split);
Corpus parse_corpus(std::string_view content, Split split);

nlohmann::ordered_json record_to_json(const DialogueSample& sample);

// JSON-lines, one record per line, trailing newline after each line.
std::string serialize_corpus(const Corpus& corpus);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Throws EmptyCorpus.
CorpusStats corpus_stats(const Corpus& corpus);

nlohmann::ordered_json stats_to_json(const CorpusStats& stats);
std::string stats_table(const CorpusStats& stats);

// Uniform draw of n samples without replacement, skipping exclude_ids.
// Deterministic for a given (corpus, n, seed, exclude_ids). Requires every
// sample to carry a reference (the result is an evaluation set). Throws
// MissingReferences, NotEnoughSamples.
Corpus sample_internal_test(const Corpus& corpus, std::size_t n,
                            std::uint64_t seed,
                            const std::set<std::string>& exclude_ids = {});

// Deterministic seeded partition into (train, holdout) with
// |holdout| = round(holdout_fraction * N), clamped to at least 1. Both parts
// keep the original corpus order. Throws InvalidFraction, EmptyCorpus.
std::pair<Corpus, Corpus> split_for_finetune(const Corpus& corpus,
                                             double holdout_fraction,
                                             std::uint64_t seed);

}  // namespace tutorbench
