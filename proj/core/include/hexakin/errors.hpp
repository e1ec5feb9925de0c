#pragma once

#include <stdexcept>
#include <string>

namespace hexakin {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file (bad JSON/CSV syntax, missing or unknown field).
struct ParseError : Error {
    using Error::Error;
};

/// Structurally valid data violating a domain invariant; message names the check.
struct ValidationError : Error {
    using Error::Error;
};

/// Joint hexagons do not tile the circle or the built layout contradicts the config.
struct GeometryInconsistent : ValidationError {
    using ValidationError::ValidationError;
};

/// Leg length below numeric tolerance; direction undefined.
struct DegenerateLeg : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct SchemaMismatch : Error {
    using Error::Error;
};

struct ConfigHashMismatch : Error {
    using Error::Error;
};

struct EmptyDatabase : Error {
    using Error::Error;
};

struct InsufficientRecords : Error {
    using Error::Error;
};

} // namespace hexakin
