#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace steg {

enum class ErrorCode {
  MissingHeader,
  SchemaMismatch,
  MalformedRow,
  EmptyTable,
  InsufficientAttacks,
  NoCategoricals,
  DimensionMismatch,
  InvalidNode,
  InvalidConfig,
  LengthExceedsT,
  InvalidDistance,
  EmptyCorpus,
  MissingEmbeddings,
  TooFewRows,
  LengthMismatch,
  EmptyInput,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingHeader: return "MissingHeader";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::InsufficientAttacks: return "InsufficientAttacks";
    case ErrorCode::NoCategoricals: return "NoCategoricals";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidNode: return "InvalidNode";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::LengthExceedsT: return "LengthExceedsT";
    case ErrorCode::InvalidDistance: return "InvalidDistance";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::MissingEmbeddings: return "MissingEmbeddings";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// what() without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace steg
