#include "mpot/grid.hpp"

#include <limits>
#include <string>

#include "mpot/error.hpp"

namespace mpot {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NegativeMass: return "NegativeMass";
    case ErrorKind::ZeroTotal: return "ZeroTotal";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::DegenerateBounds: return "DegenerateBounds";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::UnbalancedTotals: return "UnbalancedTotals";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::InvalidPlan: return "InvalidPlan";
    case ErrorKind::InconsistentFlows: return "InconsistentFlows";
    case ErrorKind::NumericalUnderflow: return "NumericalUnderflow";
    case ErrorKind::ZeroOptimum: return "ZeroOptimum";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::TooLarge: return "TooLarge";
  }
  return "Unknown";
}

GridShape::GridShape(std::vector<Index> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw Error(ErrorKind::InvalidArgument, "grid shape needs at least one axis");
  strides_.assign(dims_.size(), 1);
  size_ = 1;
  for (std::size_t i = dims_.size(); i-- > 0;) {
    if (dims_[i] < 1) throw Error(ErrorKind::InvalidArgument, "axis " + std::to_string(i) + " has size < 1");
    strides_[i] = size_;
    if (__builtin_mul_overflow(size_, dims_[i], &size_)) {
      throw Error(ErrorKind::Overflow, "grid bin count does not fit in a 64-bit index");
    }
  }
}

Index GridShape::flat(std::span<const Index> coords) const {
  if (coords.size() != dims_.size()) {
    throw Error(ErrorKind::LengthMismatch, "point has " + std::to_string(coords.size()) + " coordinates, grid has " +
                                               std::to_string(dims_.size()) + " axes");
  }
  Index f = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (coords[i] < 0 || coords[i] >= dims_[i]) {
      throw Error(ErrorKind::IndexOutOfRange, "coordinate " + std::to_string(coords[i]) + " outside axis " +
                                                  std::to_string(i) + " of size " + std::to_string(dims_[i]));
    }
    f += coords[i] * strides_[i];
  }
  return f;
}

void GridShape::unflat(Index flat, std::span<Index> coords) const {
  if (flat < 0 || flat >= size_) throw Error(ErrorKind::IndexOutOfRange, "flat index " + std::to_string(flat));
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    coords[i] = (flat / strides_[i]) % dims_[i];
  }
}

std::vector<Index> GridShape::coords(Index flat) const {
  std::vector<Index> c(dims_.size());
  unflat(flat, c);
  return c;
}

}  // namespace mpot
