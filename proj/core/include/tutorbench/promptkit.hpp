#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tutorbench/corpus.hpp"

namespace tutorbench {

enum class TemplateId { A, B, C, D, E };

enum class RoleLabeling { TeacherStudent, AnonymousSpeakers };

const char* to_string(TemplateId id);
std::optional<TemplateId> parse_template_id(std::string_view text);

// "teacher"/"student", or "SpeakerB"/"SpeakerA" when roles are anonymized.
std::string role_label(Role role, RoleLabeling labeling);

struct PromptTemplate {
  TemplateId id = TemplateId::A;
  std::string instruction;
  RoleLabeling role_labeling = RoleLabeling::TeacherStudent;
  std::string cue_label;  // trailing label that invites the completion
};

// Rejects bare acknowledgements/greetings and references with too little
// content to demonstrate anything in a few-shot block.
struct SubstantiveFilter {
  std::size_t min_content_words = 3;
  std::set<std::string> stop_responses;  // normalized exact matches
  std::set<std::string> filler_tokens;   // excluded from the content count
};

// Heuristic stand-in for hand-picking exemplars with a teaching focus:
// a reference qualifies when it mentions grammar/lexis vocabulary or uses
// a correction/explanation phrase.
struct TeachingCues {
  std::set<std::string> keywords;     // matched as whole normalized tokens
  std::vector<std::string> phrases;   // matched as normalized substrings
};

struct PromptData {
  int version = 0;
  std::vector<PromptTemplate> templates;
  SubstantiveFilter substantive_filter;
  TeachingCues teaching_cues;
};

// Data compiled in from the versioned JSON file shipped with the repo.
const PromptData& builtin_prompt_data();
PromptData parse_prompt_data(std::string_view json_text);
PromptData load_prompt_data(const std::filesystem::path& path);

std::vector<PromptTemplate> builtin_templates();
const PromptTemplate& builtin_template(TemplateId id);

struct ExemplarSet {
  std::vector<DialogueSample> exemplars;

  bool empty() const { return exemplars.empty(); }
  std::size_t size() const { return exemplars.size(); }
  std::vector<std::string> ids() const;
};

struct AssembledPrompt {
  std::string text;  // exact bytes sent to the backend
  TemplateId template_id = TemplateId::A;
  std::vector<std::string> exemplar_ids;
  std::string target_id;
};

bool is_substantive_reference(std::string_view response,
                              const SubstantiveFilter& filter);
bool is_substantive_reference(std::string_view response);

struct ExemplarSelectionOptions {
  // When set, pinned exemplars that fail the substantive filter abort with
  // PinnedFailsFilter instead of producing a warning.
  bool strict_pinned_filter = false;
};

// With pinned_ids: returns exactly those samples in the given order.
// Otherwise: filters to substantive references containing a teaching cue,
// then draws k deterministically by seed. k = 0 yields an empty set.
// Throws UnknownPinnedId, PinnedFailsFilter (strict mode only),
// NotEnoughCandidates, MissingReference.
ExemplarSet select_exemplars(
    const Corpus& corpus, std::size_t k,
    const std::optional<std::vector<std::string>>& pinned_ids,
    std::uint64_t seed, const PromptData& data = builtin_prompt_data(),
    const ExemplarSelectionOptions& options = {},
    std::vector<std::string>* warnings = nullptr);

// One "<label>: <text>" line per turn; when include_reference is set a final
// teacher-side line carries the reference. No trailing newline. Throws
// MissingReference.
std::string render_dialogue(const DialogueSample& sample,
                            RoleLabeling labeling, bool include_reference);

// Instruction block, blank line, exemplars (each rendered with its
// reference, blank-line separated), blank line, target without reference,
// then the cue label on its own line. With no exemplars the instruction's
// trailing example-announcement sentence is dropped. Pure and byte-stable.
AssembledPrompt assemble_prompt(const PromptTemplate& tpl,
                                const ExemplarSet& exemplars,
                                const DialogueSample& target);

}  // namespace tutorbench
