#pragma once

#include "desloc/automaton.hpp"

namespace desloc {

/* Events shared by at least two of the inputs: the union of all pairwise
   alphabet intersections. Symmetric in argument order; needs >= 2 inputs. */
std::set<EventId> shared_alphabet(const std::vector<const Generator*>& parts);

struct ObserverCheckResult {
  bool ok = true;
  /* shortest string whose projection admits an unmatched marked extension */
  std::vector<EventId> witness_string;
  /* the offending extension, over the kept events */
  std::vector<EventId> witness_suffix;
  int witness_state = -1;           /* state reached by witness_string */
  std::vector<int> witness_subset;  /* lookalike states sharing its projection */
  std::string detail;
};

/* Natural observer property of projecting g onto `keep`: every marked
   extension of a projected string can be followed from any state that string
   may have reached. Decided structurally on the subset-construction
   abstraction; events of `keep` outside g's alphabet are ignored, since the
   projection erases nothing through them. */
ObserverCheckResult check_natural_observer(const Generator& g,
                                           const std::set<EventId>& keep);

/* Grows `seed` until projecting every input onto the result has the natural
   observer property. Deterministic saturation: take the first failing input,
   add the smallest-id event implicated in its witness, re-check. The result
   is a superset of seed and not guaranteed minimum; worst case it reaches
   the full alphabet, which always passes. */
std::set<EventId> minimal_observer_extension(
    const std::vector<const Generator*>& gs, const std::set<EventId>& seed);

}  // namespace desloc
