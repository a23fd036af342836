#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bfree {

enum class Errc {
  InvalidArgument,
  DimensionMismatch,
  RankDeficient,
  TooLarge,
  NotCoprime,
  NotPairwiseCoprime,
  NotEnoughIdeals,
  NotAZeroWindow,
  NotRectangular,
  NotUnimodular,
  NotSquarefree,
  NotAnIdeal,
  ZeroElement,
  UnknownPreset,
  ParseError,
  InconsistencyDetected,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace bfree
