#include "molgate/basis.hpp"

#include <stdexcept>

namespace molgate {
namespace {

const char* level_name(Level l) {
  switch (l) {
    case Level::Up:
      return "up";
    case Level::Down:
      return "down";
    case Level::Excited:
      return "e";
  }
  return "?";
}

}  // namespace

PairState InternalBasis::state(std::size_t i) {
  if (i >= kDimension) {
    throw std::out_of_range("InternalBasis::state: index out of range");
  }
  return kStates[i];
}

CVector InternalBasis::ket(PairState s) {
  CVector v = CVector::Zero(kDimension);
  v(static_cast<Index>(index(s))) = 1.0;
  return v;
}

CMatrix InternalBasis::computational_projector() {
  CMatrix p = CMatrix::Zero(kDimension, kDimension);
  for (std::size_t i = 0; i < kComputationalDimension; ++i) {
    p(static_cast<Index>(i), static_cast<Index>(i)) = 1.0;
  }
  return p;
}

std::string InternalBasis::label(PairState s) {
  return std::string(level_name(s.first)) + "," + level_name(s.second);
}

std::string InternalBasis::label(std::size_t i) { return label(state(i)); }

}  // namespace molgate
