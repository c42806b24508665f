#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace sllift {

/// Arbitrary-precision integer used for matrix entries and determinants.
using Int = boost::multiprecision::cpp_int;

enum class Errc {
  InvalidArgument,
  NotCoprime,
  NotUnit,
  PrimeTooLarge,
  FactorLimitExceeded,
  TooManyRoots,
  Overflow,
  NotSquare,
  BadShape,
  NotInvertible,
  DependentRows,
  NotExtendable,
  NotExtendableModQ,
  SearchExhausted,
  InvalidInput,
  NoUnitAlpha,
  SieveExhausted,
  BudgetExceeded,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace sllift
