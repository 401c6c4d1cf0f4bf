#ifndef VIR_ERRORS_HPP
#define VIR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vir {

enum class Errc {
  NotMonic,
  NotSquarefree,
  DivisionByZero,
  NotInvertible,
  ParseError,
  EmptyGenerators,
  ZeroScaler,
  NotMember,
  LatticeMismatch,
  ModeMismatch,
  NotAScaler,
  NotNilpotentChain,
  ModeError,
  ZeroDegree,
  WeightNotInSupport,
  NotASublattice,
  VariantMismatch,
  CosetMismatch,
  InvalidCoset,
  NotHomogeneous,
  WindowNotClosed,
  ParityMismatch,
  WeightError,
  WindowTooSmall,
  DisconnectedWindow,
  DegenerateSystem,
  UndefinedName,
  RedefinedName,
  InvalidArgument,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

} // namespace vir

#endif
