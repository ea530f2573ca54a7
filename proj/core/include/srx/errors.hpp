#pragma once

#include <stdexcept>
#include <string>

namespace srx {

// Base class for every typed failure in the harness. Each condition the
// library promises to report gets its own type so callers can decide
// per-condition (skip, abort, surface to the CLI).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define SRX_DEFINE_ERROR(Name)                                    \
    class Name : public Error {                                   \
    public:                                                       \
        explicit Name(const std::string& msg) : Error(msg) {}     \
    }

// imaging-core
SRX_DEFINE_ERROR(FileNotFound);
SRX_DEFINE_ERROR(UnsupportedFormat);
SRX_DEFINE_ERROR(IoError);
SRX_DEFINE_ERROR(OddWidth);

// metrics
SRX_DEFINE_ERROR(ShapeMismatch);
SRX_DEFINE_ERROR(TooSmall);
SRX_DEFINE_ERROR(DegenerateInput);

// fid
SRX_DEFINE_ERROR(TooFewSamples);
SRX_DEFINE_ERROR(NotSymmetric);
SRX_DEFINE_ERROR(IndefiniteMatrix);
SRX_DEFINE_ERROR(DimensionMismatch);
SRX_DEFINE_ERROR(BadMagic);
SRX_DEFINE_ERROR(TruncatedFile);
SRX_DEFINE_ERROR(NonFiniteValue);

// dataset
SRX_DEFINE_ERROR(BadPairDimensions);
SRX_DEFINE_ERROR(EmptySource);
SRX_DEFINE_ERROR(ParseError);

// pipeline
SRX_DEFINE_ERROR(StageCrashed);
SRX_DEFINE_ERROR(MissingOutput);
SRX_DEFINE_ERROR(WrongOutputScale);
SRX_DEFINE_ERROR(ManifestInvalid);
SRX_DEFINE_ERROR(PhaseUnavailable);

// report
SRX_DEFINE_ERROR(EmptySeries);
SRX_DEFINE_ERROR(MissingReport);

#undef SRX_DEFINE_ERROR

} // namespace srx
