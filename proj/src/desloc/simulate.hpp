#pragma once

#include "desloc/localization.hpp"

namespace desloc {

/* Executable closed loop: the plant plus any number of controller or
   supervisor automata under an observation mask. An event runs iff the plant
   can execute it and every controller whose alphabet contains it has it
   defined; controllers without the event are bystanders. */
struct ClosedLoop {
  const Generator* plant = nullptr;
  std::vector<const Generator*> controllers;
  std::vector<std::set<EventId>> controller_alphabets;
  ObservationMask mask;
  bool alive = false; /* false once any component has no state at all */
  int plant_state = -1;
  std::vector<int> controller_states;
  std::vector<EventId> trace;
};

ClosedLoop make_closed_loop(const Generator& plant,
                            const std::vector<const Generator*>& controllers,
                            const ObservationMask& mask);

/* Stepping is pure: the advanced (or unchanged) loop is returned by value. */
struct StepResult {
  bool accepted = false;
  int refused_by = -2; /* -2 accepted, -1 plant, otherwise controller index */
  bool disablement = false; /* a controller refused a controllable event */
  std::string detail;
  ClosedLoop loop;
};

StepResult step(const ClosedLoop& loop, EventId event);

/* Exact bounded languages of a generator: every closed (and marked) string
   of length <= depth. Intended for oracle comparisons at small depth; the
   result size is the number of such strings. */
struct LanguageSample {
  std::set<std::vector<EventId>> closed;
  std::set<std::vector<EventId>> marked;
};

LanguageSample enumerate_language(const Generator& g, int depth);

/* Full reachability over joint configurations (the configuration space is
   finite, so safety and blocking are decided exactly); the string samples
   are cut off at `depth`. A configuration is marked when the plant and every
   controller are marked. `safety`, when given, walks alongside and any
   reachable string it cannot follow is a safety violation. */
struct ExploreReport {
  bool safe = true;
  std::vector<EventId> safety_witness;
  bool nonblocking = true;
  std::vector<EventId> blocking_witness;
  int configurations = 0;
  LanguageSample reached;
};

ExploreReport exhaustive_explore(const ClosedLoop& loop, int depth,
                                 const Generator* safety = nullptr);

/* Feasibility of a controller set under partial observation: unobservable
   events may appear only as selfloops, so lookalike strings drive every
   controller to the same state. Verified structurally, then spot-checked on
   seeded random lookalike pairs. */
struct FeasibilityResult {
  bool ok = true;
  std::string detail;
};

FeasibilityResult check_feasibility(
    const std::vector<const LocalController*>& controllers,
    const ObservationMask& mask);

/* Language comparison restricted to strings of length <= depth, for systems
   whose exact product is out of budget. Witness semantics match
   language_equal / language_subset. */
LanguageCompareResult bounded_language_equal(const Generator& a,
                                             const Generator& b, int depth);
LanguageCompareResult bounded_language_subset(const Generator& a,
                                              const Generator& b, int depth);

/* Default exploration depths: product-semantics oracles, observability
   oracles, and bounded global verification. */
inline constexpr int kDepthProduct = 8;
inline constexpr int kDepthOracle = 10;
inline constexpr int kDepthVerify = 12;

}  // namespace desloc
