#include "tutorbench/error.hpp"

namespace tutorbench {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::SchemaViolation: return "SchemaError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::NotEnoughSamples: return "NotEnoughSamples";
    case ErrorCode::MissingReferences: return "MissingReferences";
    case ErrorCode::InvalidFraction: return "InvalidFraction";
    case ErrorCode::NotEnoughCandidates: return "NotEnoughCandidates";
    case ErrorCode::UnknownPinnedId: return "UnknownPinnedId";
    case ErrorCode::PinnedFailsFilter: return "PinnedFailsFilter";
    case ErrorCode::MissingReference: return "MissingReference";
    case ErrorCode::UnknownSample: return "UnknownSample";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::AuthError: return "AuthError";
    case ErrorCode::Throttled: return "Throttled";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::ServerError: return "ServerError";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::PersistenceError: return "PersistenceError";
    case ErrorCode::UnknownRun: return "UnknownRun";
    case ErrorCode::CorruptArtifact: return "CorruptArtifact";
    case ErrorCode::EmptyTokenList: return "EmptyTokenList";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::ReferenceMismatch: return "ReferenceMismatch";
  }
  return "UnknownError";
}

bool is_transient(ErrorCode code) {
  return code == ErrorCode::Throttled || code == ErrorCode::Timeout ||
         code == ErrorCode::ServerError;
}

}  // namespace tutorbench
