#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mammoscope {

/// Failure categories raised by the library. Each maps onto a named error
/// condition of one operation; callers switch on `Error::code()`.
enum class Errc {
  MalformedHeader,
  TruncatedData,
  SampleOutOfRange,
  DimensionMismatch,
  DegenerateImage,
  OddLength,
  SignalTooShort,
  TooManyLevels,
  MalformedDecomposition,
  EmptyMap,
  InsufficientData,
  BadK,
  MissingClass,
  EmptyTable,
  FeatureMismatch,
  UnknownVersion,
  CorruptModel,
  LengthMismatch,
  EmptyInput,
  NoPositives,
  NoNegatives,
  DegenerateLabels,
  TooFewRows,
  InvalidArgument,
  ConfigError,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mammoscope
