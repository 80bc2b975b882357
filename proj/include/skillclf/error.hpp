#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skillclf {

enum class ErrorCode {
  // corpus
  MalformedLine,
  InvalidLabel,
  InvalidIndex,
  DuplicateRecord,
  InvalidSpec,
  // embedding
  BadHeader,
  DimensionMismatch,
  CountMismatch,
  DuplicateKey,
  UnparsableFloat,
  MissingKey,
  // neural network
  SyntaxError,
  UnknownActivation,
  NonPositiveWidth,
  LengthMismatch,
  ShapeMismatch,
  EmptyDataset,
  NonFiniteLoss,
  InvalidHyperparams,
  BadFormat,
  ArchitectureMismatch,
  // hierarchy
  MissingEmbedding,
  NoPositives,
  NoNegatives,
  // evaluation
  TooFewInstances,
  DivisionByZero,
  InvalidArgument,
  // io
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::DuplicateRecord: return "DuplicateRecord";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::UnparsableFloat: return "UnparsableFloat";
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownActivation: return "UnknownActivation";
    case ErrorCode::NonPositiveWidth: return "NonPositiveWidth";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::InvalidHyperparams: return "InvalidHyperparams";
    case ErrorCode::BadFormat: return "BadFormat";
    case ErrorCode::ArchitectureMismatch: return "ArchitectureMismatch";
    case ErrorCode::MissingEmbedding: return "MissingEmbedding";
    case ErrorCode::NoPositives: return "NoPositives";
    case ErrorCode::NoNegatives: return "NoNegatives";
    case ErrorCode::TooFewInstances: return "TooFewInstances";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every domain failure raised by the library. The code is stable and meant
/// for programmatic handling; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Same code, with `context` prepended to the message.
  Error with_context(const std::string& context) const { return Error(code_, context, std::string(what())); }

  [[noreturn]] void rethrow_with_context(const std::string& context) const { throw with_context(context); }

 private:
  Error(ErrorCode code, const std::string& context, const std::string& inner)
      : std::runtime_error(context + ": " + inner), code_(code) {}

  ErrorCode code_;
};

}  // namespace skillclf
