#pragma once

#include <stdexcept>
#include <string>

namespace sflab {

// Base for every error thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define SFLAB_ERROR(Name)                                       \
  struct Name : Error {                                         \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

SFLAB_ERROR(DivisionByZero);
SFLAB_ERROR(DimensionMismatch);
SFLAB_ERROR(AxisOutOfRange);
SFLAB_ERROR(NonUnitLeadingTerm);
SFLAB_ERROR(NotReal);
SFLAB_ERROR(LengthMismatch);
SFLAB_ERROR(BadArity);
SFLAB_ERROR(ArityUnsupported);
SFLAB_ERROR(DegreeError);
SFLAB_ERROR(NotPronilpotent);
SFLAB_ERROR(ChartMismatch);
SFLAB_ERROR(ThetaNotMC);
SFLAB_ERROR(BadBiDegree);
SFLAB_ERROR(NotInvertible);
SFLAB_ERROR(NotGood);
SFLAB_ERROR(ArityError);
SFLAB_ERROR(NonSmallDeformation);
SFLAB_ERROR(SingularAtSample);
SFLAB_ERROR(NotComplementary);
SFLAB_ERROR(DegenerateSplitting);
SFLAB_ERROR(DegreeBoundExceeded);
SFLAB_ERROR(InexactSlope);
SFLAB_ERROR(SyntaxError);
SFLAB_ERROR(TypeError);
SFLAB_ERROR(SemanticError);
SFLAB_ERROR(IoError);

#undef SFLAB_ERROR

}  // namespace sflab
