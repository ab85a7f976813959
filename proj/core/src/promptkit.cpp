#include "tutorbench/promptkit.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tutorbench/error.hpp"
#include "tutorbench/rng.hpp"
#include "tutorbench/text.hpp"

namespace tutorbench {

using nlohmann::json;

namespace {

const char* embedded_prompt_data =
#include "prompt_data.inc"
    ;

constexpr std::string_view announcement_marker = "The following are";

}  // namespace

const char* to_string(TemplateId id) {
  switch (id) {
    case TemplateId::A: return "A";
    case TemplateId::B: return "B";
    case TemplateId::C: return "C";
    case TemplateId::D: return "D";
    case TemplateId::E: return "E";
  }
  return "A";
}

std::optional<TemplateId> parse_template_id(std::string_view text) {
  std::string t = to_lower(trim_view(text));
  if (t == "a") return TemplateId::A;
  if (t == "b") return TemplateId::B;
  if (t == "c") return TemplateId::C;
  if (t == "d") return TemplateId::D;
  if (t == "e") return TemplateId::E;
  return std::nullopt;
}

std::string role_label(Role role, RoleLabeling labeling) {
  if (labeling == RoleLabeling::TeacherStudent)
    return role == Role::Teacher ? "teacher" : "student";
  return role == Role::Teacher ? "SpeakerB" : "SpeakerA";
}

std::vector<std::string> ExemplarSet::ids() const {
  std::vector<std::string> out;
  out.reserve(exemplars.size());
  for (const auto& sample : exemplars) out.push_back(sample.id);
  return out;
}

PromptData parse_prompt_data(std::string_view json_text) {
  json parsed;
  try {
    parsed = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedFile,
                std::string("prompt data: ") + e.what());
  }

  PromptData data;
  data.version = parsed.value("version", 0);
  for (const auto& entry : parsed.at("templates")) {
    PromptTemplate tpl;
    auto id = parse_template_id(entry.at("id").get<std::string>());
    if (!id)
      throw Error(ErrorCode::MalformedFile, "prompt data: unknown template id");
    tpl.id = *id;
    tpl.instruction = entry.at("instruction").get<std::string>();
    std::string labeling = entry.at("role_labeling").get<std::string>();
    if (labeling == "teacher_student") {
      tpl.role_labeling = RoleLabeling::TeacherStudent;
    } else if (labeling == "anonymous_speakers") {
      tpl.role_labeling = RoleLabeling::AnonymousSpeakers;
    } else {
      throw Error(ErrorCode::MalformedFile,
                  "prompt data: unknown role_labeling \"" + labeling + "\"");
    }
    tpl.cue_label = entry.at("cue_label").get<std::string>();
    data.templates.push_back(std::move(tpl));
  }

  const auto& filter = parsed.at("substantive_filter");
  data.substantive_filter.min_content_words =
      filter.at("min_content_words").get<std::size_t>();
  for (const auto& phrase : filter.at("stop_responses"))
    data.substantive_filter.stop_responses.insert(
        normalize_for_matching(phrase.get<std::string>()));
  for (const auto& token : filter.at("filler_tokens"))
    data.substantive_filter.filler_tokens.insert(
        normalize_for_matching(token.get<std::string>()));

  const auto& cues = parsed.at("teaching_cues");
  for (const auto& word : cues.at("keywords"))
    data.teaching_cues.keywords.insert(
        normalize_for_matching(word.get<std::string>()));
  for (const auto& phrase : cues.at("phrases"))
    data.teaching_cues.phrases.push_back(
        normalize_for_matching(phrase.get<std::string>()));
  return data;
}

PromptData load_prompt_data(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::MalformedFile,
                "cannot open prompt data: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_prompt_data(buffer.str());
}

const PromptData& builtin_prompt_data() {
  static const PromptData data = parse_prompt_data(embedded_prompt_data);
  return data;
}

std::vector<PromptTemplate> builtin_templates() {
  return builtin_prompt_data().templates;
}

const PromptTemplate& builtin_template(TemplateId id) {
  for (const auto& tpl : builtin_prompt_data().templates) {
    if (tpl.id == id) return tpl;
  }
  throw Error(ErrorCode::ConfigError, "template not found");
}

bool is_substantive_reference(std::string_view response,
                              const SubstantiveFilter& filter) {
  const std::string normalized = normalize_for_matching(response);
  if (normalized.empty()) return false;
  if (filter.stop_responses.contains(normalized)) return false;

  std::size_t content_words = 0;
  for (const auto& token : split_whitespace(normalized)) {
    if (!filter.filler_tokens.contains(token)) ++content_words;
  }
  return content_words >= filter.min_content_words;
}

bool is_substantive_reference(std::string_view response) {
  return is_substantive_reference(response,
                                  builtin_prompt_data().substantive_filter);
}

namespace {

bool has_teaching_cue(std::string_view reference, const TeachingCues& cues) {
  const std::string normalized = normalize_for_matching(reference);
  for (const auto& token : split_whitespace(normalized)) {
    if (cues.keywords.contains(token)) return true;
  }
  for (const auto& phrase : cues.phrases) {
    if (normalized.find(phrase) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

ExemplarSet select_exemplars(
    const Corpus& corpus, std::size_t k,
    const std::optional<std::vector<std::string>>& pinned_ids,
    std::uint64_t seed, const PromptData& data,
    const ExemplarSelectionOptions& options,
    std::vector<std::string>* warnings) {
  ExemplarSet set;

  if (pinned_ids) {
    for (const auto& id : *pinned_ids) {
      const DialogueSample* sample = corpus.find(id);
      if (!sample)
        throw Error(ErrorCode::UnknownPinnedId,
                    "pinned exemplar \"" + id + "\" not in corpus");
      if (!sample->reference_response)
        throw Error(ErrorCode::MissingReference,
                    "pinned exemplar \"" + id + "\" has no reference");
      if (!is_substantive_reference(*sample->reference_response,
                                    data.substantive_filter)) {
        if (options.strict_pinned_filter)
          throw Error(ErrorCode::PinnedFailsFilter,
                      "pinned exemplar \"" + id +
                          "\" fails the substantive-reference filter");
        if (warnings)
          warnings->push_back("pinned exemplar \"" + id +
                              "\" fails the substantive-reference filter");
      }
      set.exemplars.push_back(*sample);
    }
    return set;
  }

  if (k == 0) return set;

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    const auto& sample = corpus.samples[i];
    if (!sample.reference_response) continue;
    if (!is_substantive_reference(*sample.reference_response,
                                  data.substantive_filter))
      continue;
    if (!has_teaching_cue(*sample.reference_response, data.teaching_cues))
      continue;
    candidates.push_back(i);
  }
  if (candidates.size() < k)
    throw Error(ErrorCode::NotEnoughCandidates,
                "need " + std::to_string(k) + " exemplars, only " +
                    std::to_string(candidates.size()) + " pass the filters");

  Rng rng(seed);
  for (std::size_t pick : rng.sample_indices(candidates.size(), k))
    set.exemplars.push_back(corpus.samples[candidates[pick]]);
  return set;
}

std::string render_dialogue(const DialogueSample& sample,
                            RoleLabeling labeling, bool include_reference) {
  if (include_reference && !sample.reference_response)
    throw Error(ErrorCode::MissingReference,
                "sample \"" + sample.id + "\" has no reference response");

  std::string out;
  for (const auto& turn : sample.utterances) {
    if (!out.empty()) out += '\n';
    out += role_label(turn.role, labeling);
    out += ": ";
    out += turn.text;
  }
  if (include_reference) {
    if (!out.empty()) out += '\n';
    out += role_label(Role::Teacher, labeling);
    out += ": ";
    out += *sample.reference_response;
  }
  return out;
}

namespace {

// Drops the trailing "The following are example dialogues..." sentence so a
// zero-shot prompt does not announce examples it never shows.
std::string strip_example_announcement(const std::string& instruction) {
  std::size_t pos = instruction.rfind(announcement_marker);
  if (pos == std::string::npos) return trim(instruction);
  return trim(std::string_view(instruction).substr(0, pos));
}

}  // namespace

AssembledPrompt assemble_prompt(const PromptTemplate& tpl,
                                const ExemplarSet& exemplars,
                                const DialogueSample& target) {
  AssembledPrompt prompt;
  prompt.template_id = tpl.id;
  prompt.exemplar_ids = exemplars.ids();
  prompt.target_id = target.id;

  std::string text = exemplars.empty()
                         ? strip_example_announcement(tpl.instruction)
                         : tpl.instruction;
  text += "\n\n";
  for (const auto& exemplar : exemplars.exemplars) {
    text += render_dialogue(exemplar, tpl.role_labeling, true);
    text += "\n\n";
  }
  text += render_dialogue(target, tpl.role_labeling, false);
  text += '\n';
  text += tpl.cue_label;

  prompt.text = std::move(text);
  return prompt;
}

}  // namespace tutorbench
