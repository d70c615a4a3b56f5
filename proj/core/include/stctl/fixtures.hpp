#ifndef STCTL_FIXTURES_HPP
#define STCTL_FIXTURES_HPP

// ============================================================================
//  fixtures.hpp -- built-in benchmark/regression model generators
//
//  gen_voting: asynchronous voting scenario with v voters and c candidates.
//  Each voter registers for one modality (mail/internet/polling), receives a
//  ballot package from the election authority (EA), and votes for one
//  candidate.  The EA accepts registrations and votes inside clocked windows:
//    registration   mail t <= 1,  internet t <= 6,  polling t <= 10
//    voting         mail 1<=t<=7, internet 6<=t<=9, polling 10<=t<=11
//    close at t = 11; package hand-over states carry invariant x <= 0.
//  Voter 1's voted states are labeled v1..vc; voter k > 1 uses v{j}_{k} so
//  the propositions identify whose vote was cast.
//  The discrete twin keeps the structure, drops all clocks/guards/invariants
//  (clocks exist only under continuous semantics) and gives every transition
//  duration 1; the untimed twin likewise drops all timing.
//
//  gen_expressivity: the two 2-agent synchronous clock-free systems whose
//  initial states are indistinguishable by ATL formulas but distinguished by
//  <<1>>(E F p & E G !p).  Joint-action correlation between the two agents
//  is expressed with per-transition sync constraints.
// ============================================================================

#include "stctl/system.hpp"

namespace stctl {

SystemSpec gen_voting(int voters, int candidates,
                      Semantics sem = Semantics::Continuous);

struct ExpressivityPair {
  SystemSpec M;        // template a: phi holds at the initial state
  SystemSpec Mprime;   // template a': phi fails at the initial state
};

ExpressivityPair gen_expressivity(Semantics sem = Semantics::Untimed);

}  // namespace stctl

#endif  // STCTL_FIXTURES_HPP
