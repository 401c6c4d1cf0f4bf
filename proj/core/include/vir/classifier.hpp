#ifndef VIR_CLASSIFIER_HPP
#define VIR_CLASSIFIER_HPP

#include "vir/modules.hpp"
#include "vir/svir.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vir {

/// Explicit structure constants of an unknown graded module on a finite weight
/// window: L_probe v_nu = f(probe, nu) v_{probe+nu}, weights are offset + nu
/// with nu a lattice member (keys are Z-basis coordinates). The window records
/// which weight spaces are one-dimensional (true) and which vanish (false);
/// entries exist exactly for present sources with present targets.
///
/// Super tables add an odd sector indexed by the coset alpha + M (keys are
/// coordinates of index - alpha), odd probes, and the four action tables
/// even-even (f), odd-odd (fw), even->odd (gv), odd->even (gw).
struct ActionTable {
  Lattice lattice;
  Scalar offset;
  std::vector<Scalar> probes;
  std::map<std::vector<Int>, bool> window;
  std::map<std::pair<int, std::vector<Int>>, Scalar> f;

  bool is_super = false;
  Scalar alpha;
  std::vector<Scalar> gprobes;
  std::map<std::vector<Int>, bool> wwindow;
  std::map<std::pair<int, std::vector<Int>>, Scalar> fw;
  std::map<std::pair<int, std::vector<Int>>, Scalar> gv;
  std::map<std::pair<int, std::vector<Int>>, Scalar> gw;
};

struct SuperVerdict {
  SuperFamilyKind kind = SuperFamilyKind::SAab;
  Scalar a, b;
  std::string str() const;
};

struct ClassificationResult {
  std::optional<ModuleFamily> family;
  std::optional<SuperVerdict> super_family;
  /// Basis rescaling that carries the table to the family's closed form;
  /// keyed like the table windows. gauge_odd is used by super verdicts.
  std::map<std::vector<Int>, Scalar> gauge;
  std::map<std::vector<Int>, Scalar> gauge_odd;
  /// True when the verdict re-verified on every window entry through the
  /// module action (the independent route).
  bool certified = false;
  /// Per-candidate decisive rejection entries, in candidate order.
  std::vector<std::string> rejections;

  bool no_match() const { return !family && !super_family; }
  std::string verdict_str() const;
  /// Verdict plus gauge lines (or the rejection list for NoMatch), as printed
  /// by the CLI.
  std::string report(const ActionTable& table) const;
};

/// Match the table against the classified families in the fixed candidate
/// order (Aab, Aa, Ba, PrimePlusLine, AabPrime; or SAab, SAa, SBa for super
/// tables); recover parameters exactly, fit a gauge along a spanning tree of
/// the window graph, verify every entry, and certify through the module
/// action. Throws WindowTooSmall (fewer than two distinct probes or three
/// present weights), DisconnectedWindow (window graph not connected under
/// probe shifts), WindowNotClosed (missing entries).
ClassificationResult classify(const ActionTable& table);

/// classify restricted to a candidate sublist (same fixed relative order);
/// lets the uniqueness direction be tested: a table from one family must
/// reach NoMatch against the others.
ClassificationResult classify_candidates(const ActionTable& table,
                                         const std::vector<FamilyKind>& kinds);

struct FitEntry {
  Scalar mu, nu, f;
};

struct FitResult {
  std::optional<std::pair<Scalar, Scalar>> ab; // (a, b)
  std::optional<FitEntry> violated;            // set when inconsistent
};

/// Exact linear solve of f = a + nu + mu*b from entries; requires two distinct
/// probe degrees (DegenerateSystem otherwise). Inconsistent data returns the
/// violated entry.
FitResult fit_parameters(const std::vector<FitEntry>& entries);

/// Generate the honest table of a family on a window through the module
/// action.
ActionTable table_from_family(const ModuleFamily& fam, const std::vector<Scalar>& probes,
                              const std::vector<std::vector<Int>>& window);

/// Generate the honest table of a super family; the even sector is the
/// M-indexed sector of the family.
ActionTable table_from_super_family(const SuperFamily& fam, const std::vector<Scalar>& probes,
                                    const std::vector<Scalar>& gprobes,
                                    const std::vector<std::vector<Int>>& even_window,
                                    const std::vector<std::vector<Int>>& odd_window);

/// Rescale the table's basis vectors by the given nonzero gauges (odd gauge
/// used for super tables).
ActionTable scramble(const ActionTable& table, const std::map<std::vector<Int>, Scalar>& gauge,
                     const std::map<std::vector<Int>, Scalar>& gauge_odd = {});

/// Parse / serialize the line-oriented table file format:
///   table over <gens: scalar,...> offset <scalar>
///   probe <scalar>         (repeatable)
///   w <scalar>             present weight index
///   wzero <scalar>         dim-0 weight index
///   f <mu> <nu> <scalar>
/// super tables add:
///   coset <scalar> ; gprobe <scalar> ; gw/gwzero rows for the odd window;
///   fw/gv/gwact rows for the remaining tables.
ActionTable parse_table(const Field& field, const std::string& text);
std::string format_table(const ActionTable& table);

} // namespace vir

#endif
