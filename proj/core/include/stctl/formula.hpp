#ifndef STCTL_FORMULA_HPP
#define STCTL_FORMULA_HPP

// ============================================================================
//  formula.hpp -- STCTL formula AST, parser, desugaring, fragment analysis
//
//  State formulas:  phi ::= true | false | p | !phi | phi & phi | <<A>> gamma
//  Path formulas:   gamma ::= phi | !gamma | gamma & gamma
//                         | A X gamma | A(gamma U_I gamma) | E(gamma U_I gamma)
//                         | A(gamma R_I gamma) | E(gamma R_I gamma)
//  Surface sugar (|, ->, F, G, E X) is eliminated by desugar().
//
//  KEY DESIGN DECISIONS
//   * ASTs are immutable shared_ptr DAGs; safe to share across workers.
//   * A bare path formula at the top level is accepted and wrapped as <<>> gamma
//     (the empty coalition prunes nothing, so this is plain CTL/TCTL).
//   * A bare temporal operator (no A/E quantifier) is read as the elided
//     universal quantifier, as customary for <<A>> X / <<A>> U / <<A>> R.
// ============================================================================

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace stctl {

// ---------------------------------------------------------------------------
//  Intervals
// ---------------------------------------------------------------------------

struct Interval {
  static constexpr std::uint32_t kInf = 0xFFFFFFFFu;

  std::uint32_t lo = 0;
  std::uint32_t hi = kInf;   // kInf encodes +infinity
  bool lo_closed = true;
  bool hi_closed = false;    // must be false when hi == kInf

  bool is_full() const {
    return lo == 0 && lo_closed && hi == kInf;
  }
  bool unbounded() const { return hi == kInf; }

  bool operator==(const Interval&) const = default;
};

// Full interval [0, inf).
inline Interval full_interval() { return Interval{}; }

// ---------------------------------------------------------------------------
//  AST
// ---------------------------------------------------------------------------

struct StateFormula;
struct PathFormula;
using StatePtr = std::shared_ptr<const StateFormula>;
using PathPtr = std::shared_ptr<const PathFormula>;

struct StateFormula {
  enum class Kind {
    True, False, Prop, Not, And, Coalition,
    // surface sugar, removed by desugar():
    Or, Implies
  };

  Kind kind;
  std::string prop;                  // Prop
  StatePtr lhs, rhs;                 // Not (lhs only), And/Or/Implies
  std::vector<std::string> agents;   // Coalition (sorted, duplicate-free)
  PathPtr path;                      // Coalition
};

struct PathFormula {
  enum class Kind {
    Lift, Not, And,
    AllNext, AllUntil, ExUntil, AllRelease, ExRelease,
    // surface sugar, removed by desugar():
    Or, ExNext, AllFinally, ExFinally, AllGlobally, ExGlobally
  };

  Kind kind;
  StatePtr state;                    // Lift
  PathPtr lhs, rhs;                  // Not/Next/Finally/Globally use lhs only
  Interval interval;                 // U/R/F/G
};

// -- constructors -----------------------------------------------------------

StatePtr mk_true();
StatePtr mk_false();
StatePtr mk_prop(std::string name);
StatePtr mk_not(StatePtr f);
StatePtr mk_and(StatePtr a, StatePtr b);
StatePtr mk_or(StatePtr a, StatePtr b);
StatePtr mk_implies(StatePtr a, StatePtr b);
StatePtr mk_coalition(std::vector<std::string> agents, PathPtr g);

PathPtr mk_lift(StatePtr f);
PathPtr mk_pnot(PathPtr g);
PathPtr mk_pand(PathPtr a, PathPtr b);
PathPtr mk_por(PathPtr a, PathPtr b);
PathPtr mk_all_next(PathPtr g);
PathPtr mk_ex_next(PathPtr g);
PathPtr mk_all_until(PathPtr a, Interval iv, PathPtr b);
PathPtr mk_ex_until(PathPtr a, Interval iv, PathPtr b);
PathPtr mk_all_release(PathPtr a, Interval iv, PathPtr b);
PathPtr mk_ex_release(PathPtr a, Interval iv, PathPtr b);
PathPtr mk_all_finally(Interval iv, PathPtr g);
PathPtr mk_ex_finally(Interval iv, PathPtr g);
PathPtr mk_all_globally(Interval iv, PathPtr g);
PathPtr mk_ex_globally(Interval iv, PathPtr g);

// Structural equality (deep).
bool equal(const StatePtr& a, const StatePtr& b);
bool equal(const PathPtr& a, const PathPtr& b);

// ---------------------------------------------------------------------------
//  Parsing / printing
// ---------------------------------------------------------------------------

class FormulaError : public std::runtime_error {
 public:
  FormulaError(std::string msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Parses the concrete syntax; the result is already desugared.
StatePtr parse_formula(const std::string& text);

// Canonical concrete syntax for a (core-constructor) AST; parse(print(f)) == f.
std::string print_formula(const StatePtr& f);
std::string print_formula(const PathPtr& g);

// ---------------------------------------------------------------------------
//  Analyses
// ---------------------------------------------------------------------------

enum class Fragment { CTL, TCTL, ATL, TATL, SCTL, STCTL };

const char* fragment_name(Fragment f);

// Rewrites surface sugar to the core constructors; idempotent.
StatePtr desugar(const StatePtr& f);

// Least fragment that syntactically admits f (f must be desugared).
Fragment classify_fragment(const StatePtr& f);

// Maximum finite interval endpoint in f; 0 if none.
std::uint32_t max_constant(const StatePtr& f);

// True if f contains a Coalition node anywhere.
bool has_coalition(const StatePtr& f);

// Collects every agent name mentioned in coalition sets.
std::vector<std::string> coalition_agents(const StatePtr& f);

}  // namespace stctl

#endif  // STCTL_FORMULA_HPP
