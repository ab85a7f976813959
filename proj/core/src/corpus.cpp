#include "tutorbench/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "tutorbench/error.hpp"
#include "tutorbench/rng.hpp"
#include "tutorbench/text.hpp"

namespace tutorbench {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(Role role) {
  return role == Role::Teacher ? "teacher" : "student";
}

const char* to_string(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    case Split::Test: return "test";
    case Split::Custom: return "custom";
  }
  return "custom";
}

std::optional<Role> parse_role(std::string_view text) {
  std::string lowered = to_lower(trim_view(text));
  if (lowered == "teacher") return Role::Teacher;
  if (lowered == "student") return Role::Student;
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view text) {
  std::string lowered = to_lower(trim_view(text));
  if (lowered == "train") return Split::Train;
  if (lowered == "dev") return Split::Dev;
  if (lowered == "test") return Split::Test;
  if (lowered == "custom") return Split::Custom;
  return std::nullopt;
}

const DialogueSample* Corpus::find(std::string_view id) const {
  for (const auto& sample : samples) {
    if (sample.id == id) return &sample;
  }
  return nullptr;
}

namespace {

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, what);
}

std::string require_string(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) schema_error(std::string("missing field \"") + field + "\"");
  if (!it->is_string())
    schema_error(std::string("field \"") + field + "\" must be a string");
  return it->get<std::string>();
}

}  // namespace

DialogueSample validate_record(const json& record) {
  if (!record.is_object()) schema_error("record must be a JSON object");

  DialogueSample sample;
  sample.id = require_string(record, "id");
  if (trim_view(sample.id).empty()) schema_error("field \"id\" is empty");

  auto utt = record.find("utterances");
  if (utt == record.end()) schema_error("missing field \"utterances\"");
  if (!utt->is_array() || utt->empty())
    schema_error("field \"utterances\" must be a non-empty array");

  for (const auto& item : *utt) {
    if (!item.is_object()) schema_error("utterance must be an object");
    std::string role_text = require_string(item, "role");
    auto role = parse_role(role_text);
    if (!role)
      schema_error("unknown role \"" + role_text +
                   "\" (expected teacher or student)");
    std::string text = require_string(item, "text");
    if (trim_view(text).empty()) schema_error("field \"text\" is empty");
    sample.utterances.push_back(Turn{*role, std::move(text)});
  }

  auto resp = record.find("response");
  if (resp != record.end() && !resp->is_null()) {
    if (!resp->is_string()) schema_error("field \"response\" must be a string");
    std::string response = resp->get<std::string>();
    if (trim_view(response).empty()) schema_error("field \"response\" is empty");
    sample.reference_response = std::move(response);
  }
  return sample;
}

namespace {

Corpus build_corpus(std::vector<json> records, Split split) {
  Corpus corpus;
  corpus.split = split;
  corpus.samples.reserve(records.size());
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    DialogueSample sample;
    try {
      sample = validate_record(records[i]);
    } catch (const Error& e) {
      throw Error(ErrorCode::SchemaViolation,
                  "record " + std::to_string(i) + ": " + e.what());
    }
    if (!seen.insert(sample.id).second)
      throw Error(ErrorCode::DuplicateId,
                  "record " + std::to_string(i) + ": duplicate id \"" +
                      sample.id + "\"");
    corpus.samples.push_back(std::move(sample));
  }
  return corpus;
}

}  // namespace

Corpus parse_corpus(std::string_view content, Split split) {
  std::vector<json> records;
  std::string_view body = trim_view(content);
  if (!body.empty() && body.front() == '[') {
    json parsed;
    try {
      parsed = json::parse(body);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedFile, e.what());
    }
    if (!parsed.is_array())
      throw Error(ErrorCode::MalformedFile, "top-level JSON must be an array");
    records.assign(parsed.begin(), parsed.end());
  } else {
    std::size_t line_no = 0;
    for (const auto& line : split_lines(content)) {
      ++line_no;
      if (trim_view(line).empty()) continue;
      try {
        records.push_back(json::parse(line));
      } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedFile,
                    "line " + std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  return build_corpus(std::move(records), split);
}

Corpus load_corpus(const std::filesystem::path& path, Split split) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::MalformedFile,
                "cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_corpus(buffer.str(), split);
}

ordered_json record_to_json(const DialogueSample& sample) {
  ordered_json record;
  record["id"] = sample.id;
  ordered_json turns = ordered_json::array();
  for (const auto& turn : sample.utterances) {
    turns.push_back({{"role", to_string(turn.role)}, {"text", turn.text}});
  }
  record["utterances"] = std::move(turns);
  if (sample.reference_response)
    record["response"] = *sample.reference_response;
  return record;
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& sample : corpus.samples) {
    out += record_to_json(sample).dump();
    out += '\n';
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::PersistenceError,
                "cannot write file: " + path.string());
  out << serialize_corpus(corpus);
}

CorpusStats corpus_stats(const Corpus& corpus) {
  if (corpus.samples.empty())
    throw Error(ErrorCode::EmptyCorpus, "corpus has no samples");

  CorpusStats stats;
  stats.sample_count = corpus.samples.size();

  double turn_sum = 0.0;
  for (const auto& sample : corpus.samples) {
    const std::size_t turns = sample.utterances.size();
    turn_sum += static_cast<double>(turns);
    stats.turns_max = std::max(stats.turns_max, turns);
  }
  stats.turns_mean = turn_sum / static_cast<double>(stats.sample_count);
  double turn_var = 0.0;
  for (const auto& sample : corpus.samples) {
    const double d =
        static_cast<double>(sample.utterances.size()) - stats.turns_mean;
    turn_var += d * d;
  }
  stats.turns_std =
      std::sqrt(turn_var / static_cast<double>(stats.sample_count));

  std::vector<std::size_t> lengths;
  for (const auto& sample : corpus.samples) {
    if (sample.reference_response)
      lengths.push_back(count_words(*sample.reference_response));
  }
  if (!lengths.empty()) {
    ResponseLengthStats r;
    r.count = lengths.size();
    r.min = *std::min_element(lengths.begin(), lengths.end());
    r.max = *std::max_element(lengths.begin(), lengths.end());
    double sum = 0.0;
    for (std::size_t len : lengths) sum += static_cast<double>(len);
    r.mean = sum / static_cast<double>(r.count);
    double var = 0.0;
    for (std::size_t len : lengths) {
      const double d = static_cast<double>(len) - r.mean;
      var += d * d;
    }
    r.stddev = std::sqrt(var / static_cast<double>(r.count));
    stats.response = r;
  }
  return stats;
}

ordered_json stats_to_json(const CorpusStats& stats) {
  ordered_json out;
  out["sample_count"] = stats.sample_count;
  out["turns_mean"] = stats.turns_mean;
  out["turns_std"] = stats.turns_std;
  out["turns_max"] = stats.turns_max;
  if (stats.response) {
    out["response_count"] = stats.response->count;
    out["response_len_mean"] = stats.response->mean;
    out["response_len_std"] = stats.response->stddev;
    out["response_len_min"] = stats.response->min;
    out["response_len_max"] = stats.response->max;
  }
  return out;
}

std::string stats_table(const CorpusStats& stats) {
  std::ostringstream out;
  auto row = [&out](const std::string& label, const std::string& value) {
    out << label;
    for (std::size_t i = label.size(); i < 22; ++i) out << ' ';
    out << value << '\n';
  };
  auto fmt = [](double v) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << v;
    return s.str();
  };
  row("samples", std::to_string(stats.sample_count));
  row("turns/dialogue mean", fmt(stats.turns_mean));
  row("turns/dialogue std", fmt(stats.turns_std));
  row("turns/dialogue max", std::to_string(stats.turns_max));
  if (stats.response) {
    row("references", std::to_string(stats.response->count));
    row("response words mean", fmt(stats.response->mean));
    row("response words std", fmt(stats.response->stddev));
    row("response words min", std::to_string(stats.response->min));
    row("response words max", std::to_string(stats.response->max));
  } else {
    row("references", "0 (no response stats)");
  }
  return out.str();
}

Corpus sample_internal_test(const Corpus& corpus, std::size_t n,
                            std::uint64_t seed,
                            const std::set<std::string>& exclude_ids) {
  for (const auto& sample : corpus.samples) {
    if (!sample.reference_response)
      throw Error(ErrorCode::MissingReferences,
                  "sample \"" + sample.id + "\" has no reference response");
  }
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    if (!exclude_ids.contains(corpus.samples[i].id)) candidates.push_back(i);
  }
  if (candidates.size() < n)
    throw Error(ErrorCode::NotEnoughSamples,
                "need " + std::to_string(n) + " samples, only " +
                    std::to_string(candidates.size()) + " available");

  Rng rng(seed);
  std::vector<std::size_t> picks = rng.sample_indices(candidates.size(), n);
  Corpus out;
  out.split = Split::Custom;
  out.samples.reserve(n);
  for (std::size_t pick : picks)
    out.samples.push_back(corpus.samples[candidates[pick]]);
  return out;
}

std::pair<Corpus, Corpus> split_for_finetune(const Corpus& corpus,
                                             double holdout_fraction,
                                             std::uint64_t seed) {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
    throw Error(ErrorCode::InvalidFraction,
                "holdout_fraction must be in (0,1)");
  if (corpus.samples.empty())
    throw Error(ErrorCode::EmptyCorpus, "corpus has no samples");

  const std::size_t total = corpus.samples.size();
  std::size_t holdout_size = static_cast<std::size_t>(
      std::llround(holdout_fraction * static_cast<double>(total)));
  holdout_size = std::clamp<std::size_t>(holdout_size, 1, total);

  Rng rng(seed);
  std::vector<std::size_t> picks = rng.sample_indices(total, holdout_size);
  std::vector<bool> held(total, false);
  for (std::size_t pick : picks) held[pick] = true;

  Corpus train{corpus.split, {}};
  Corpus holdout{corpus.split, {}};
  for (std::size_t i = 0; i < total; ++i) {
    (held[i] ? holdout : train).samples.push_back(corpus.samples[i]);
  }
  return {std::move(train), std::move(holdout)};
}

}  // namespace tutorbench
