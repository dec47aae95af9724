#pragma once

#include <stdexcept>
#include <string>

namespace engage {

/// Base of every error the library throws. Catch this at tool boundaries.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// core_model
class MissingFile : public Error {
 public:
  explicit MissingFile(const std::string& path)
      : Error("missing file: " + path), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class SchemaViolation : public Error {
 public:
  SchemaViolation(const std::string& file, std::size_t line, const std::string& field,
                  const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": field '" + field + "': " + what),
        file_(file), line_(line), field_(field) {}
  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string field_;
};

class UnknownSpeakerLabel : public Error {
 public:
  explicit UnknownSpeakerLabel(const std::string& label)
      : Error("unknown speaker label: " + label), label_(label) {}
  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

class EmptyStream : public Error {
 public:
  using Error::Error;
};

// features
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class EmptyWindow : public Error {
 public:
  EmptyWindow() : Error("empty frame window") {}
};

// fusion
class NoTurns : public Error {
 public:
  NoTurns() : Error("conversation has no turns") {}
};

// llm
class TransportError : public Error {
 public:
  using Error::Error;
};

class AuthError : public Error {
 public:
  using Error::Error;
};

class ContextOverflow : public Error {
 public:
  using Error::Error;
};

/// Backend rejected the request or answered with something we cannot decode.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class NoNumericResponse : public Error {
 public:
  NoNumericResponse() : Error("no numeric response among text and first-token candidates") {}
};

class TemplateUnrecognized : public Error {
 public:
  TemplateUnrecognized() : Error("request does not contain the experimenter scale instruction") {}
};

// baselines
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class EmptySequence : public Error {
 public:
  EmptySequence() : Error("empty feature sequence") {}
};

class InsufficientNeighbors : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class TooFewDyads : public Error {
 public:
  using Error::Error;
};

// eval
class NoPredictions : public Error {
 public:
  NoPredictions() : Error("no records with predictions") {}
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

}  // namespace engage
