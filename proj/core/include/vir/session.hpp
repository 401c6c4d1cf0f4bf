#ifndef VIR_SESSION_HPP
#define VIR_SESSION_HPP

#include <memory>
#include <string>

namespace vir {

/// Line-oriented session files: one statement per line, '#' comments,
/// declarations (field, mode, lattice, coset, hom, elem, selem, module, salg,
/// smodule, table) and commands (bracket, jacobi, grade, autochi, autoscale,
/// member, rank, scaler, homeval, expad, pair2, closure, span, act, actres,
/// substruct, iso, restrict, fitab, sbracket, sjacobi, sact, sactres,
/// extcheck, classify). Output is byte-deterministic; the exit code is zero
/// iff no command reported a violation or NoMatch.

struct SessionOutcome {
  std::string output;
  int exit_code = 0;
};

class Session {
public:
  /// Parse and name-check; scalar literals are parsed against the session's
  /// field. Throws Error (ParseError, UndefinedName, RedefinedName, ...) with
  /// the line number in the message.
  static Session parse(const std::string& text, std::string base_dir = ".");

  /// Execute; runtime errors are reported in the output with their line and a
  /// nonzero exit code.
  SessionOutcome run() const;

  Session(Session&&) noexcept;
  Session& operator=(Session&&) noexcept;
  ~Session();

private:
  Session();
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper: parse + run; parse failures become output text with
/// exit code 2.
SessionOutcome run_session_text(const std::string& text, const std::string& base_dir = ".");

// Forward declaration; defined in scalar.hpp.
class Field;

/// "Q", or a monic squarefree polynomial in t (e.g. "t^2 - 2") naming Q(t).
Field field_from_spec_string(const std::string& spec);

} // namespace vir

#endif
