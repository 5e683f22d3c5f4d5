#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace patchrank {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyFailingSet : public Error {
 public:
  EmptyFailingSet() : Error("baseline has no failing test") {}
};

class UnknownFormula : public Error {
 public:
  using Error::Error;
};

class EmptyPool : public Error {
 public:
  EmptyPool() : Error("no remaining patch to pop") {}
};

class IncompatibleMatrix : public Error {
 public:
  using Error::Error;
};

class GranularityMissing : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class AlreadyPartial : public Error {
 public:
  AlreadyPartial() : Error("dataset already holds a partial matrix") {}
};

class BadParams : public Error {
 public:
  using Error::Error;
};

class UnknownFormat : public Error {
 public:
  using Error::Error;
};

// Raised by the corpus loader. All three name the offending line or field.
class CorpusError : public Error {
 public:
  using Error::Error;
};

class ParseError : public CorpusError {
 public:
  ParseError(std::size_t line, const std::string &reason)
      : CorpusError("line " + std::to_string(line) + ": " + reason),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public CorpusError {
 public:
  SchemaError(std::size_t line, const std::string &field,
              const std::string &reason)
      : CorpusError("line " + std::to_string(line) + ": field '" + field +
                    "': " + reason),
        line_(line),
        field_(field) {}
  std::size_t line() const { return line_; }
  const std::string &field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class InvariantError : public CorpusError {
 public:
  using CorpusError::CorpusError;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace patchrank
