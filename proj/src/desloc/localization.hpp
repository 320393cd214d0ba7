#pragma once

#include "desloc/synthesis.hpp"

namespace desloc {

/* Per-state control information of a supervisor for one target event α,
   computed against the plant contexts the closed loop can pair with each
   supervisor state. enabled and disabled are never both true. */
struct ControlData {
  EventId alpha = -1;
  std::vector<char> enabled;       /* α defined at x and exercisable in some context */
  std::vector<char> disabled;      /* α plant-eligible in some context, blocked at x */
  std::vector<char> marked_sup;    /* x marked in the supervisor */
  std::vector<char> marked_plant;  /* some paired plant state marked */
};

ControlData compute_control_data(const POSupervisor& sup, const Generator& plant,
                                 EventId alpha);

/* Consistency relation for merging supervisor states:
   no enable/disable clash, and marking agreement wherever both states have a
   plant-marked context. Symmetric and reflexive. */
bool control_consistent(int x, int y, const ControlData& d);

/* Partition of the supervisor states into pairwise consistent cells, closed
   under successors: for each cell and event, all member successors share a
   cell. Greedy merge in state order with deterministic tie-breaking; minimal
   size is not guaranteed. */
using ControlCover = std::vector<std::vector<int>>;
ControlCover build_control_cover(const POSupervisor& sup, const ControlData& d);

/* One local controller: enables/disables only controlled_event, observes a
   subset of the observable events (plus possibly controlled_event itself),
   and selfloops every unobservable event of its alphabet. */
struct LocalController {
  Generator automaton;
  EventId controlled_event = -1;
};

/* Quotient of the cover, restricted to controlled_event plus the events that
   change cells; every other kept event is total (selflooped where the
   quotient left it undefined), so only controlled_event is ever refused. */
LocalController induce_local_controller(const POSupervisor& sup,
                                        const ControlCover& cover, EventId alpha);

struct LocalizationResult {
  std::vector<LocalController> controllers;
  std::vector<EventId> trivially_enabled; /* suppressed: nothing to control */
};

/* One controller per controllable event that the supervisor ever disables;
   never-disabled events are reported as trivially enabled instead. Control
   covers separate marking-inconsistent states, so the emitted controllers
   also carry the supervisor's marking refinement; if no event is ever
   disabled but marking still binds, a single carrier controller is kept. */
LocalizationResult localize(const POSupervisor& sup, const Generator& plant);

/* Synchronous product of controllers for the same event. */
LocalController merge_local_controllers(const std::vector<const LocalController*>& parts,
                                        EventId alpha);

/* sync(plant, controllers...) vs sync(plant, supervisor), closed and marked. */
LanguageCompareResult verify_control_equivalence(
    const Generator& plant, const POSupervisor& sup,
    const std::vector<const LocalController*>& locs);

/* Control-equivalent reduction of a supervisor: greedy state merging that is
   consistent for every controllable event simultaneously, dropping events
   that neither change state nor carry a disablement. Falls back to the
   supervisor unchanged if the merged model fails the equivalence check;
   never increases the state count. */
Generator reduce_supervisor(const POSupervisor& sup, const Generator& plant);

/* Structural invariant violations of a local controller (empty when sound). */
std::vector<std::string> local_controller_violations(const LocalController& lc,
                                                     const ObservationMask& mask);

}  // namespace desloc
