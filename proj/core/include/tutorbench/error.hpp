#pragma once

#include <stdexcept>
#include <string>

namespace tutorbench {

// Every failure the library reports carries one of these codes so callers
// (and the CLI exit-code mapping) can branch without parsing messages.
enum class ErrorCode {
  // corpus / data
  MalformedFile,
  SchemaViolation,
  DuplicateId,
  EmptyCorpus,
  NotEnoughSamples,
  MissingReferences,
  InvalidFraction,
  // promptkit
  NotEnoughCandidates,
  UnknownPinnedId,
  PinnedFailsFilter,
  MissingReference,
  UnknownSample,
  // backends
  BackendUnavailable,
  InvalidRequest,
  AuthError,
  Throttled,
  Timeout,
  ServerError,
  EmptyText,
  // runner
  ConfigError,
  PersistenceError,
  UnknownRun,
  CorruptArtifact,
  // metrics
  EmptyTokenList,
  InvalidWeights,
  ReferenceMismatch,
};

const char* to_string(ErrorCode code);

// Throttled/Timeout/ServerError come from a single request attempt and are
// retryable; everything else is terminal for the request.
bool is_transient(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tutorbench
