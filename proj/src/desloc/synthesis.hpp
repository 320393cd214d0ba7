#pragma once

#include "desloc/automaton.hpp"

namespace desloc {

/* One per-specification synthesis task: plant G, specification E, observation
   mask P. The ambient language for observability is E || Lm(G), held fixed. */
struct SynthesisProblem {
  Generator plant;
  Generator spec;
  ObservationMask mask;

  SynthesisProblem() = default;
  /* Asserts spec alphabet ⊆ plant alphabet (with matching attributes) and
     derives the mask from the plant's event table. */
  SynthesisProblem(Generator plant_, Generator spec_);
  SynthesisProblem(Generator plant_, Generator spec_, ObservationMask mask_);
};

struct ControllabilityResult {
  bool controllable = true;
  std::vector<EventId> witness;  /* shortest s with an uncontrollable escape */
  EventId event = -1;
};

/* K̄·Σ_uc ∩ L(G) ⊆ K̄, decided on the synchronized pair structure.
   Throws if k's closed language is not contained in the plant's. */
ControllabilityResult is_controllable(const Generator& k, const Generator& plant);

/* Trim recognizer of the supremal controllable sublanguage of E || Lm(G)
   w.r.t. L(G): delete product states violating controllability or trimness
   until fixpoint. May return the empty generator. */
Generator supcon(const SynthesisProblem& p);

struct ROResult {
  enum class Kind { transition, marking };
  bool ok = true;
  Kind kind = Kind::transition;
  std::vector<EventId> s;        /* string on the K̄ side */
  std::vector<EventId> s_prime;  /* lookalike on the ambient side */
  EventId sigma = -1;            /* transition kind only */
  int k_state = -1;              /* δ_K(s), for repair */
  std::string detail;
};

/* Relative observability of k w.r.t. the ambient language and the plant:
   for every lookalike pair (s, s′) with s ∈ K̄, s′ ∈ C̄,
     (i)  sσ ∈ K̄ ∧ s′σ ∈ L(G)  ⇒  s′σ ∈ K̄
     (ii) s ∈ K ∧ s′ ∈ L_m(G)   ⇒  s′ ∈ K.
   Twin construction over lookalike-reachable state pairs; the reported
   violation is deterministic: shortest pair level, then smallest event id
   (marking violations first), then discovery order.
   Asserts L(k) ⊆ L(ambient) ⊆ L(plant). */
ROResult check_relative_observability(const Generator& k, const Generator& ambient,
                                      const Generator& plant,
                                      const ObservationMask& mask);

/* Trim recognizer of a maximal controllable and observable sublanguage of
   E || Lm(G): start from the supremal controllable sublanguage, then
   alternate observability repair rounds with controllability re-enforcement
   until a round removes nothing.  Each repair round tracks lookalike sets
   against the current iterate and removes one deterministic batch of
   violations (all offending markings, else the offending continuations of
   the smallest event), so a violation whose only witness dies in an earlier
   batch never fires. */
Generator sup_rco(const SynthesisProblem& p);

namespace detail {

/* One repair round of the sup_rco fixpoint, exposed for tests and oracles.
   Returns k minus the highest-priority batch of feasibility violations
   quantified over k itself: all lookalike-inconsistent markings if any,
   otherwise the lookalike-inconsistent continuations of the smallest
   offending event; changed is false iff k already satisfies both
   conditions. */
struct ShrinkRound {
  Generator gen;
  bool changed = false;
};
ShrinkRound observability_shrink(const Generator& k, const SynthesisProblem& p);

}  // namespace detail

/* Controllable sublanguage of the sup_rco result with normal closure
   (K̄ = P⁻¹P(K̄) ∩ L(G)) and lookalike-consistent marking. Comparator only:
   a lower bound witnessing that observability-based synthesis is at least as
   permissive as normality-based synthesis. */
Generator sup_cn(const SynthesisProblem& p);

/* Feasible partial-observation supervisor: states are unobservable-closure
   subsets (uncertainty sets) of k's recognizer, reached along observable
   events; enabled unobservable events selfloop. */
struct POSupervisor {
  Generator automaton;
  std::vector<std::set<EventId>> disabled_map;    /* per state */
  std::vector<std::vector<int>> uncertainty_sets; /* per state, k-states */
};

/* Uncertainty-set realization for a controllable, observable k.
   Verifies L(G) ∩ L(SUP) = K̄ and Lm(G) ∩ Lm(SUP) = K; throws with the
   witness if k fails controllability, observability, or either equality. */
POSupervisor build_po_supervisor(const Generator& k, const Generator& plant,
                                 const ObservationMask& mask);

/* True iff the synchronous product of the inputs is nonblocking. */
bool nonconflict(const std::vector<const Generator*>& gs);

}  // namespace desloc
