#pragma once

#include <stdexcept>
#include <string>

namespace kdigo {

/// Root of every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UndefinedConversion : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };

// ingest
class SchemaError : public Error { using Error::Error; };
class ParseError : public Error { using Error::Error; };
class IntegrityError : public Error { using Error::Error; };
class IoError : public Error { using Error::Error; };

// preprocess / baseline
class EmptySeries : public Error { using Error::Error; };
class MissingDemographics : public Error { using Error::Error; };

// pipeline
class UnknownSubject : public Error { using Error::Error; };
class EmptySubject : public Error { using Error::Error; };
class EmptyInput : public Error { using Error::Error; };
class MixedSubjects : public Error { using Error::Error; };

// validate
class KeyMismatch : public Error { using Error::Error; };

} // namespace kdigo
