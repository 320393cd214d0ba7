#ifndef DESLOC_AUTOMATON_HPP
#define DESLOC_AUTOMATON_HPP

#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace desloc {

using EventId = int;

/* Input and schema problems; property-check failures are returned as values. */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/* Thrown when an operation would exceed an explicit state budget; callers
   that offer a bounded fallback catch exactly this. */
class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& what) : Error(what) {}
};

struct EventInfo {
  bool controllable = false;
  bool observable = true;
};

/* Alphabet with per-event attributes. Ordered by event id so that every
   iteration over an alphabet is deterministic. */
class EventTable {
public:
  void add(EventId id, EventInfo info);
  /* Adds the event if absent; throws Error if present with other attributes. */
  void merge_event(EventId id, EventInfo info);
  void merge(const EventTable& other);

  bool contains(EventId id) const { return info_.count(id) != 0; }
  const EventInfo& at(EventId id) const;
  bool controllable(EventId id) const { return at(id).controllable; }
  bool observable(EventId id) const { return at(id).observable; }
  std::size_t size() const { return info_.size(); }

  std::vector<EventId> ids() const;
  std::vector<EventId> controllable_ids() const;
  std::vector<EventId> observable_ids() const;
  const std::map<EventId, EventInfo>& entries() const { return info_; }

  bool operator==(const EventTable& other) const;

private:
  std::map<EventId, EventInfo> info_;
};

/* View of an alphabet as "kept" (observed) versus erased events.
   Natural projection keeps exactly the events the mask observes. */
class ObservationMask {
public:
  ObservationMask() = default;
  explicit ObservationMask(std::set<EventId> unobservable)
      : unobservable_(std::move(unobservable)) {}

  static ObservationMask from_table(const EventTable& table);

  bool observes(EventId id) const { return unobservable_.count(id) == 0; }
  const std::set<EventId>& unobservable() const { return unobservable_; }

private:
  std::set<EventId> unobservable_;
};

/* Deterministic generator: dense states 0..state_count-1, partial transition
   function, marker states. state_count == 0 encodes the empty generator whose
   closed and marked languages are both empty. */
class Generator {
public:
  std::string name;
  int state_count = 0;
  int initial = 0;
  std::vector<int> marker;                /* sorted, unique */
  EventTable events;
  std::map<std::pair<int, EventId>, int> delta;
  std::vector<std::string> annotations;   /* empty, or one string per state */

  bool empty() const { return state_count == 0; }
  bool defined(int state, EventId event) const {
    return delta.count({state, event}) != 0;
  }
  /* -1 when undefined. */
  int target(int state, EventId event) const;
  bool marked(int state) const;
  void set_marked(int state, bool value);

  /* Throws Error on out-of-range states, unknown events, or a duplicate
     (source, event) pair; the duplicate rule keeps the generator
     deterministic. */
  void add_transition(int source, EventId event, int target);

  std::vector<EventId> alphabet() const { return events.ids(); }
  /* Events with at least one transition. */
  std::set<EventId> active_events() const;

  /* Throws Error if any structural invariant is violated. */
  void validate() const;
};

/* ----- reachability and trimming ----- */

std::vector<char> reachable_states(const Generator& g);
std::vector<char> coreachable_states(const Generator& g);

/* Visit (event, target) for every transition leaving `state`, events ascending. */
template <class F>
void for_each_transition_at(const Generator& g, int state, F&& visit) {
  for (auto it = g.delta.lower_bound({state, std::numeric_limits<EventId>::min()});
       it != g.delta.end() && it->first.first == state; ++it)
    visit(it->first.second, it->second);
}

struct TrimResult {
  Generator gen;
  /* old state -> new state, -1 when dropped */
  std::vector<int> state_map;
};

TrimResult trim_with_map(const Generator& g);
Generator trim(const Generator& g);

struct NonblockingResult {
  bool nonblocking = true;
  int witness_state = -1;  /* reachable but not coreachable */
};

NonblockingResult is_nonblocking(const Generator& g);

/* ----- synchronous product ----- */

struct SyncResult {
  Generator gen;
  /* product state -> component state, one vector per input */
  std::vector<std::vector<int>> origin;
};

/* Synchronous product: shared events move together, private events interleave.
   Events carry their attributes along; conflicting attributes are an Error.
   States are numbered in BFS discovery order with events taken in ascending
   id order, which makes the numbering deterministic. */
SyncResult sync_product(const std::vector<const Generator*>& parts,
                        long long state_budget = 0); /* 0 = unlimited */
Generator sync(const Generator& a, const Generator& b);
Generator sync_all(const std::vector<const Generator*>& parts);

/* Adds selfloops for the given events at every state; the events must not
   already belong to the alphabet. */
Generator selfloop(const Generator& g, const std::vector<std::pair<EventId, EventInfo>>& events);

/* ----- natural projection ----- */

std::vector<EventId> project_string(const std::vector<EventId>& s, const ObservationMask& mask);

struct ProjectionResult {
  Generator gen;
  /* projected state -> sorted subset of original states */
  std::vector<std::vector<int>> subsets;
};

/* Natural projection onto the kept events, determinized by subset
   construction; a subset is marked iff it contains a marked state. */
ProjectionResult project_with_subsets(const Generator& g, const std::set<EventId>& keep);
Generator project_generator(const Generator& g, const std::set<EventId>& keep);

/* ----- minimization and language comparison ----- */

/* Language-preserving minimization of the reachable part: states are merged
   when they agree on marking, liveness and successor classes. Preserves both
   the closed and the marked language; does not trim blocking states away. */
Generator minimize(const Generator& g);

struct LanguageCompareResult {
  bool equal = true;
  /* shortest string in exactly one closed or marked language */
  std::vector<EventId> witness;
  std::string detail;
};

/* True iff closed and marked languages coincide; decided by isomorphism of
   the minimized forms. */
LanguageCompareResult language_equal(const Generator& a, const Generator& b);
/* True iff L(a) subset of L(b) and Lm(a) subset of Lm(b). */
LanguageCompareResult language_subset(const Generator& a, const Generator& b);

/* Canonical state renumbering (BFS order over ascending event ids) so that
   isomorphic generators compare equal field by field. */
Generator canonical_form(const Generator& g);

std::string format_string(const std::vector<EventId>& s);

}  // namespace desloc

#endif
