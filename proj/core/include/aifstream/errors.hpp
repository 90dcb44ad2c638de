#pragma once

#include <stdexcept>
#include <string>

namespace aifstream {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A configuration references an unknown parameter or state, or does not
/// cover the owning parameter space.
class InvalidConfigError : public Error {
public:
  using Error::Error;
};

/// A threshold expression cannot be evaluated against the active
/// configuration (e.g. non-numeric parameter state).
class ThresholdError : public Error {
public:
  using Error::Error;
};

/// A sample is missing a metric required by an SLO.
class MissingMetricError : public Error {
public:
  using Error::Error;
};

/// An operation that needs at least one sample received none.
class EmptyBatchError : public Error {
public:
  using Error::Error;
};

/// Variables, states or file contents do not match the expected schema.
class SchemaError : public Error {
public:
  using Error::Error;
};

/// All recorded surprise values are zero; no meaningful ig ratio exists.
class DegenerateHistoryError : public Error {
public:
  using Error::Error;
};

/// Scoring was requested before any configuration has been observed.
class ColdStartError : public Error {
public:
  using Error::Error;
};

/// File could not be read, written or parsed.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace aifstream
