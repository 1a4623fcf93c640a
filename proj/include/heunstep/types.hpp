#pragma once

#include <complex>

namespace heunstep {

// Universal double-precision complex scalar used throughout the library.
using ComplexValue = std::complex<double>;

// Which side of the branch cut [1, inf) a hypergeometric argument approaches
// from.  Only meaningful when the argument lies on the cut; everywhere else
// the principal branch is unambiguous.
enum class CutSide { above, below };

// A hypergeometric argument together with its branch bookkeeping.
struct BranchedArgument {
  ComplexValue value{};
  CutSide cut_side = CutSide::above;

  BranchedArgument() = default;
  BranchedArgument(ComplexValue v, CutSide side = CutSide::above)
      : value(v), cut_side(side) {}
  BranchedArgument(double v, CutSide side = CutSide::above)
      : value(v, 0.0), cut_side(side) {}
};

}  // namespace heunstep
