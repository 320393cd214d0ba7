#include "desloc/localization.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <sstream>

namespace desloc {

namespace {

/* Plant-side context of each supervisor state, over the reachable pairs of
   sync(plant, sup): which plant events are eligible somewhere, and whether
   some paired plant state is marked. Events outside the supervisor alphabet
   leave the supervisor state unchanged. */
struct PairContext {
  std::vector<std::set<EventId>> eligible;
  std::vector<char> plant_marked;
};

PairContext pair_context(const Generator& sup_aut, const Generator& plant) {
  PairContext ctx;
  ctx.eligible.assign(sup_aut.state_count, {});
  ctx.plant_marked.assign(sup_aut.state_count, 0);
  if (sup_aut.empty() || plant.empty()) return ctx;

  std::vector<char> seen(static_cast<std::size_t>(plant.state_count) *
                             sup_aut.state_count,
                         0);
  std::deque<std::pair<int, int>> queue;
  auto visit = [&](int g, int x) {
    std::size_t key = static_cast<std::size_t>(g) * sup_aut.state_count + x;
    if (seen[key]) return;
    seen[key] = 1;
    queue.emplace_back(g, x);
  };
  visit(plant.initial, sup_aut.initial);
  while (!queue.empty()) {
    auto [g, x] = queue.front();
    queue.pop_front();
    if (plant.marked(g)) ctx.plant_marked[x] = 1;
    for_each_transition_at(plant, g, [&](EventId e, int gt) {
      ctx.eligible[x].insert(e);
      int xt = x;
      if (sup_aut.events.contains(e)) {
        xt = sup_aut.target(x, e);
        if (xt < 0) return;
      }
      visit(gt, xt);
    });
  }
  return ctx;
}

/* Greedy consistent partition: states in index order, each unplaced state is
   merged into the first existing cell (ascending by smallest member) that
   survives the successor-closure trial; failures roll the trial back. */
ControlCover greedy_cover(const Generator& aut,
                          const std::function<bool(int, int)>& consistent) {
  ControlCover cells;
  const int n = aut.state_count;
  if (n == 0) return cells;

  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::vector<int>> members(n);
  for (int i = 0; i < n; ++i) members[i] = {i};
  const std::vector<EventId> alphabet = aut.alphabet();

  auto find = [](std::vector<int>& p, int v) {
    while (p[v] != v) {
      p[v] = p[p[v]];
      v = p[v];
    }
    return v;
  };

  /* Union with the smaller root kept, so a root is always its cell's
     smallest member and cell order is stable. */
  auto try_merge = [&](std::vector<int>& p, std::vector<std::vector<int>>& m,
                       int a, int b) {
    std::deque<std::pair<int, int>> work;
    work.emplace_back(a, b);
    while (!work.empty()) {
      auto [u, v] = work.front();
      work.pop_front();
      int ru = find(p, u), rv = find(p, v);
      if (ru == rv) continue;
      for (int s : m[ru])
        for (int t : m[rv])
          if (!consistent(s, t)) return false;
      int keep = std::min(ru, rv), drop = std::max(ru, rv);
      p[drop] = keep;
      m[keep].insert(m[keep].end(), m[drop].begin(), m[drop].end());
      m[drop].clear();
      for (EventId e : alphabet) {
        int first = -1;
        for (int s : m[keep]) {
          int t = aut.target(s, e);
          if (t < 0) continue;
          if (first < 0)
            first = t;
          else if (find(p, first) != find(p, t))
            work.emplace_back(first, t);
        }
      }
    }
    return true;
  };

  for (int x = 1; x < n; ++x) {
    if (find(parent, x) != x) continue; /* already pulled into a cell */
    for (int r = 0; r < x; ++r) {
      if (find(parent, r) != r) continue;
      std::vector<int> p2 = parent;
      std::vector<std::vector<int>> m2 = members;
      if (try_merge(p2, m2, x, r)) {
        parent = std::move(p2);
        members = std::move(m2);
        break;
      }
    }
  }

  std::map<int, std::vector<int>> by_root;
  for (int s = 0; s < n; ++s) by_root[find(parent, s)].push_back(s);
  for (auto& [root, cell] : by_root) {
    std::sort(cell.begin(), cell.end());
    cells.push_back(std::move(cell));
  }
  return cells;
}

/* Deterministic quotient data of a partition: cell transitions and the
   events that move between cells somewhere. */
struct QuotientCore {
  std::vector<int> cell_of;
  std::vector<std::map<EventId, int>> trans;
  std::set<EventId> changing;
};

QuotientCore quotient_core(const Generator& aut, const ControlCover& cover) {
  QuotientCore q;
  q.cell_of.assign(aut.state_count, -1);
  for (std::size_t c = 0; c < cover.size(); ++c)
    for (int s : cover[c]) {
      if (s < 0 || s >= aut.state_count || q.cell_of[s] != -1)
        throw Error("cover is not a partition of the supervisor states");
      q.cell_of[s] = static_cast<int>(c);
    }
  for (int s = 0; s < aut.state_count; ++s)
    if (q.cell_of[s] == -1)
      throw Error("cover is not a partition of the supervisor states");

  q.trans.resize(cover.size());
  for (std::size_t c = 0; c < cover.size(); ++c)
    for (int s : cover[c])
      for_each_transition_at(aut, s, [&](EventId e, int t) {
        int tc = q.cell_of[t];
        auto it = q.trans[c].find(e);
        if (it == q.trans[c].end())
          q.trans[c][e] = tc;
        else if (it->second != tc)
          throw Error("cover is not closed under successors");
      });
  for (std::size_t c = 0; c < q.trans.size(); ++c)
    for (const auto& [e, tc] : q.trans[c])
      if (tc != static_cast<int>(c)) q.changing.insert(e);
  return q;
}

std::string cell_annotation(const std::vector<int>& cell) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < cell.size(); ++i) {
    if (i) out << ',';
    out << cell[i];
  }
  out << '}';
  return out.str();
}

/* Quotient automaton over the kept events; cells are already sorted by their
   smallest member. */
Generator build_quotient(const Generator& aut, const ControlCover& cover,
                         const QuotientCore& q, const std::set<EventId>& keep,
                         const std::string& name) {
  Generator g;
  g.name = name;
  g.state_count = static_cast<int>(cover.size());
  g.initial = q.cell_of[aut.initial];
  for (std::size_t c = 0; c < cover.size(); ++c) {
    bool marked = std::any_of(cover[c].begin(), cover[c].end(),
                              [&](int s) { return aut.marked(s); });
    if (marked) g.marker.push_back(static_cast<int>(c));
    g.annotations.push_back(cell_annotation(cover[c]));
  }
  for (EventId e : keep) g.events.add(e, aut.events.at(e));
  for (std::size_t c = 0; c < cover.size(); ++c)
    for (const auto& [e, tc] : q.trans[c])
      if (keep.count(e)) g.add_transition(static_cast<int>(c), e, tc);
  return g;
}

}  // namespace

ControlData compute_control_data(const POSupervisor& sup, const Generator& plant,
                                 EventId alpha) {
  const Generator& a = sup.automaton;
  if (!a.events.contains(alpha))
    throw Error("control data requested for event " + std::to_string(alpha) +
                " outside the supervisor alphabet");
  if (!a.events.controllable(alpha))
    throw Error("control data requested for uncontrollable event " +
                std::to_string(alpha));

  ControlData d;
  d.alpha = alpha;
  d.enabled.assign(a.state_count, 0);
  d.disabled.assign(a.state_count, 0);
  d.marked_sup.assign(a.state_count, 0);
  d.marked_plant.assign(a.state_count, 0);

  PairContext ctx = pair_context(a, plant);
  for (int x = 0; x < a.state_count; ++x) {
    bool eligible = ctx.eligible[x].count(alpha) != 0;
    bool defined = a.target(x, alpha) >= 0;
    d.enabled[x] = defined && eligible;
    d.disabled[x] = !defined && eligible;
    d.marked_sup[x] = a.marked(x);
    d.marked_plant[x] = ctx.plant_marked[x];
  }
  return d;
}

bool control_consistent(int x, int y, const ControlData& d) {
  if (d.enabled[x] && d.disabled[y]) return false;
  if (d.disabled[x] && d.enabled[y]) return false;
  if (d.marked_plant[x] && d.marked_plant[y] &&
      d.marked_sup[x] != d.marked_sup[y])
    return false;
  return true;
}

ControlCover build_control_cover(const POSupervisor& sup, const ControlData& d) {
  if (static_cast<int>(d.enabled.size()) != sup.automaton.state_count)
    throw Error("control data does not match the supervisor");
  return greedy_cover(sup.automaton,
                      [&](int x, int y) { return control_consistent(x, y, d); });
}

LocalController induce_local_controller(const POSupervisor& sup,
                                        const ControlCover& cover,
                                        EventId alpha) {
  const Generator& a = sup.automaton;
  if (!a.events.contains(alpha))
    throw Error("cannot induce a controller for event " +
                std::to_string(alpha) + " outside the supervisor alphabet");

  LocalController lc;
  lc.controlled_event = alpha;
  if (a.empty()) {
    lc.automaton.name = "loc_" + std::to_string(alpha);
    lc.automaton.events.add(alpha, a.events.at(alpha));
    return lc;
  }

  QuotientCore q = quotient_core(a, cover);
  std::set<EventId> keep = q.changing;
  keep.insert(alpha);
  lc.automaton =
      build_quotient(a, cover, q, keep, "loc_" + std::to_string(alpha));

  /* Total on every non-controlled event: the quotient never left an event
     undefined where the supervisor allowed it, so padding the gaps with
     selfloops cannot enlarge the closed loop, and it makes "only the
     controlled event is refused" a structural fact. */
  Generator& g = lc.automaton;
  for (EventId e : keep) {
    if (e == alpha) continue;
    for (int c = 0; c < g.state_count; ++c)
      if (!g.defined(c, e)) g.add_transition(c, e, c);
  }
  return lc;
}

LocalizationResult localize(const POSupervisor& sup, const Generator& plant) {
  LocalizationResult out;
  const Generator& a = sup.automaton;

  if (a.empty()) {
    /* An empty supervisor admits nothing; one empty controller blocks the
       closed loop the same way. */
    const EventTable& table = a.events.size() ? a.events : plant.events;
    std::vector<EventId> ctl = table.controllable_ids();
    LocalController lc;
    lc.automaton.name = "loc_empty";
    lc.controlled_event = ctl.empty() ? -1 : ctl.front();
    if (!ctl.empty()) lc.automaton.events.add(ctl.front(), table.at(ctl.front()));
    out.controllers.push_back(std::move(lc));
    return out;
  }

  /* A controller is worth emitting only where it exercises control: its
     event is disabled somewhere. Covers still separate marking-inconsistent
     states, so the emitted controllers carry the marking refinement and the
     never-disabled events need no automaton of their own. If nothing is ever
     disabled yet marking binds, one carrier keeps the closed-loop marking. */
  EventId marking_fallback = -1;
  ControlCover fallback_cover;
  for (EventId alpha : a.events.controllable_ids()) {
    ControlData d = compute_control_data(sup, plant, alpha);
    ControlCover cover = build_control_cover(sup, d);

    bool any_disabled =
        std::any_of(d.disabled.begin(), d.disabled.end(),
                    [](char f) { return f != 0; });
    if (!any_disabled) {
      if (marking_fallback < 0) {
        for (const std::vector<int>& cell : cover) {
          bool plant_marked = false, sup_marked = false;
          for (int s : cell) {
            plant_marked = plant_marked || d.marked_plant[s];
            sup_marked = sup_marked || d.marked_sup[s];
          }
          if (plant_marked && !sup_marked) {
            marking_fallback = alpha;
            fallback_cover = cover;
            break;
          }
        }
      }
      out.trivially_enabled.push_back(alpha);
      continue;
    }
    out.controllers.push_back(induce_local_controller(sup, cover, alpha));
  }
  if (out.controllers.empty() && marking_fallback >= 0) {
    out.trivially_enabled.erase(
        std::find(out.trivially_enabled.begin(), out.trivially_enabled.end(),
                  marking_fallback));
    out.controllers.push_back(
        induce_local_controller(sup, fallback_cover, marking_fallback));
  }
  return out;
}

LocalController merge_local_controllers(
    const std::vector<const LocalController*>& parts, EventId alpha) {
  if (parts.empty()) throw Error("no local controllers to merge");
  for (const LocalController* p : parts)
    if (p->controlled_event != alpha)
      throw Error("cannot merge controllers for events " +
                  std::to_string(alpha) + " and " +
                  std::to_string(p->controlled_event));
  LocalController lc;
  lc.controlled_event = alpha;
  if (parts.size() == 1) {
    lc.automaton = parts.front()->automaton;
    return lc;
  }
  std::vector<const Generator*> gs;
  gs.reserve(parts.size());
  for (const LocalController* p : parts) gs.push_back(&p->automaton);
  lc.automaton = sync_all(gs);
  lc.automaton.name = "loc_" + std::to_string(alpha);
  return lc;
}

LanguageCompareResult verify_control_equivalence(
    const Generator& plant, const POSupervisor& sup,
    const std::vector<const LocalController*>& locs) {
  std::vector<const Generator*> parts;
  parts.reserve(locs.size() + 1);
  parts.push_back(&plant);
  for (const LocalController* lc : locs) parts.push_back(&lc->automaton);
  Generator lhs = sync_all(parts);
  Generator rhs = sync(plant, sup.automaton);
  return language_equal(lhs, rhs);
}

Generator reduce_supervisor(const POSupervisor& sup, const Generator& plant) {
  const Generator& a = sup.automaton;
  if (a.state_count <= 1) return a;

  std::vector<EventId> ctl = a.events.controllable_ids();
  std::vector<ControlData> data;
  data.reserve(ctl.size());
  for (EventId e : ctl) data.push_back(compute_control_data(sup, plant, e));

  PairContext ctx = pair_context(a, plant);
  std::vector<char> sup_marked(a.state_count, 0);
  for (int s : a.marker) sup_marked[s] = 1;

  auto consistent = [&](int x, int y) {
    if (ctx.plant_marked[x] && ctx.plant_marked[y] &&
        sup_marked[x] != sup_marked[y])
      return false;
    for (const ControlData& d : data) {
      if (d.enabled[x] && d.disabled[y]) return false;
      if (d.disabled[x] && d.enabled[y]) return false;
    }
    return true;
  };

  ControlCover cover = greedy_cover(a, consistent);
  if (static_cast<int>(cover.size()) >= a.state_count) return a;

  QuotientCore q = quotient_core(a, cover);
  std::set<EventId> keep = q.changing;
  for (const ControlData& d : data)
    if (std::any_of(d.disabled.begin(), d.disabled.end(),
                    [](char f) { return f != 0; }))
      keep.insert(d.alpha);

  Generator red = build_quotient(a, cover, q, keep, a.name);
  LanguageCompareResult check =
      language_equal(sync(plant, red), sync(plant, a));
  if (!check.equal) return a;
  return red;
}

std::vector<std::string> local_controller_violations(const LocalController& lc,
                                                     const ObservationMask& mask) {
  std::vector<std::string> out;
  const Generator& g = lc.automaton;
  if (lc.controlled_event < 0) {
    out.push_back("controller has no controlled event");
    return out;
  }
  if (!g.events.contains(lc.controlled_event))
    out.push_back("controlled event " + std::to_string(lc.controlled_event) +
                  " is missing from the alphabet");
  for (EventId e : g.alphabet())
    if (e != lc.controlled_event && !mask.observes(e))
      out.push_back("unobservable event " + std::to_string(e) +
                    " other than the controlled one is in the alphabet");
  for (const auto& [key, target] : g.delta)
    if (!mask.observes(key.second) && target != key.first)
      out.push_back("unobservable event " + std::to_string(key.second) +
                    " changes state " + std::to_string(key.first) + " -> " +
                    std::to_string(target));
  for (int s = 0; s < g.state_count; ++s)
    for (EventId e : g.alphabet())
      if (e != lc.controlled_event && !g.defined(s, e))
        out.push_back("event " + std::to_string(e) + " is refused at state " +
                      std::to_string(s));
  return out;
}

}  // namespace desloc
