#include "mammoscope/error.hpp"

namespace mammoscope {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::TruncatedData: return "TruncatedData";
    case Errc::SampleOutOfRange: return "SampleOutOfRange";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DegenerateImage: return "DegenerateImage";
    case Errc::OddLength: return "OddLength";
    case Errc::SignalTooShort: return "SignalTooShort";
    case Errc::TooManyLevels: return "TooManyLevels";
    case Errc::MalformedDecomposition: return "MalformedDecomposition";
    case Errc::EmptyMap: return "EmptyMap";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::BadK: return "BadK";
    case Errc::MissingClass: return "MissingClass";
    case Errc::EmptyTable: return "EmptyTable";
    case Errc::FeatureMismatch: return "FeatureMismatch";
    case Errc::UnknownVersion: return "UnknownVersion";
    case Errc::CorruptModel: return "CorruptModel";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::NoPositives: return "NoPositives";
    case Errc::NoNegatives: return "NoNegatives";
    case Errc::DegenerateLabels: return "DegenerateLabels";
    case Errc::TooFewRows: return "TooFewRows";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace mammoscope
