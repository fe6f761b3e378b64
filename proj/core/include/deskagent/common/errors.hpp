#pragma once

#include <stdexcept>
#include <string>

namespace deskagent {

/// Root of the deskagent exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed accessibility-tree text or other structured input.
class ParseError : public Error {
public:
    using Error::Error;
};

/// compile_action called on an action that fails validation.
class CompileError : public Error {
public:
    using Error::Error;
};

/// Transport-level failure of an external backend (model, embedder).
class BackendError : public Error {
public:
    using Error::Error;
};

/// Chat-completion failure after retries: transport, bad status, empty reply.
class ModelError : public BackendError {
public:
    using BackendError::BackendError;
};

/// Scripted backend found no rule matching the prompt.
class ScriptExhausted : public ModelError {
public:
    using ModelError::ModelError;
};

/// Memory store could not be written or reloaded.
class PersistError : public Error {
public:
    using Error::Error;
};

/// Manager plan text did not match the plan grammar, after one re-ask.
class PlanParseError : public Error {
public:
    using Error::Error;
};

/// Worker structured response did not match the four-section grammar, after one re-ask.
class ResponseParseError : public Error {
public:
    using Error::Error;
};

/// Environment task file missing, unreadable, or schema-invalid.
class TaskLoadError : public Error {
public:
    using Error::Error;
};

/// Environment failure during an episode.
class EnvError : public Error {
public:
    using Error::Error;
};

/// Memory inspection requested on a store that does not exist on disk.
class MissingStoreError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace deskagent
