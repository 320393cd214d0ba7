#include "desloc/simulate.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

namespace desloc {

ClosedLoop make_closed_loop(const Generator& plant,
                            const std::vector<const Generator*>& controllers,
                            const ObservationMask& mask) {
  ClosedLoop loop;
  loop.plant = &plant;
  loop.controllers = controllers;
  loop.mask = mask;
  loop.alive = !plant.empty();
  loop.plant_state = plant.empty() ? -1 : plant.initial;
  for (const Generator* c : controllers) {
    std::vector<EventId> ids = c->alphabet();
    loop.controller_alphabets.emplace_back(ids.begin(), ids.end());
    loop.alive = loop.alive && !c->empty();
    loop.controller_states.push_back(c->empty() ? -1 : c->initial);
  }
  return loop;
}

StepResult step(const ClosedLoop& loop, EventId event) {
  StepResult res;
  res.loop = loop;
  if (!loop.alive) {
    res.refused_by = -1;
    res.detail = "closed loop is empty";
    return res;
  }
  int pt = loop.plant->events.contains(event)
               ? loop.plant->target(loop.plant_state, event)
               : -1;
  if (pt < 0) {
    res.refused_by = -1;
    res.detail = "event " + std::to_string(event) +
                 " is not eligible in the plant at state " +
                 std::to_string(loop.plant_state);
    return res;
  }
  std::vector<int> next = loop.controller_states;
  for (std::size_t i = 0; i < loop.controllers.size(); ++i) {
    if (!loop.controller_alphabets[i].count(event)) continue;
    int t = loop.controllers[i]->target(loop.controller_states[i], event);
    if (t < 0) {
      res.refused_by = static_cast<int>(i);
      res.disablement = loop.plant->events.controllable(event);
      const std::string& who = loop.controllers[i]->name;
      res.detail = (who.empty() ? "controller " + std::to_string(i) : who) +
                   (res.disablement ? " disables event " : " cannot follow event ") +
                   std::to_string(event);
      return res;
    }
    next[i] = t;
  }
  res.accepted = true;
  res.refused_by = -2;
  res.loop.plant_state = pt;
  res.loop.controller_states = std::move(next);
  res.loop.trace.push_back(event);
  return res;
}

LanguageSample enumerate_language(const Generator& g, int depth) {
  LanguageSample out;
  if (g.empty()) return out;
  std::vector<EventId> prefix;
  auto walk = [&](auto&& self, int state) -> void {
    out.closed.insert(prefix);
    if (g.marked(state)) out.marked.insert(prefix);
    if (static_cast<int>(prefix.size()) >= depth) return;
    for_each_transition_at(g, state, [&](EventId e, int t) {
      prefix.push_back(e);
      self(self, t);
      prefix.pop_back();
    });
  };
  walk(walk, g.initial);
  return out;
}

ExploreReport exhaustive_explore(const ClosedLoop& loop, int depth,
                                 const Generator* safety) {
  ExploreReport rpt;
  if (!loop.alive) return rpt;
  const Generator& plant = *loop.plant;
  const int nc = static_cast<int>(loop.controllers.size());

  std::set<EventId> safety_alpha;
  int safety_init = -1;
  if (safety && safety->empty()) {
    rpt.safe = false; /* legal language empty: even the empty string escapes */
    safety = nullptr;
  } else if (safety) {
    std::vector<EventId> ids = safety->alphabet();
    safety_alpha.insert(ids.begin(), ids.end());
    safety_init = safety->initial;
  }
  const int scomp = safety ? nc + 1 : -1;

  struct Rec {
    std::vector<int> cfg;
    int parent;
    EventId event;
  };
  std::vector<Rec> recs;
  std::map<std::vector<int>, int> idx;
  std::vector<std::vector<int>> preds;
  auto intern = [&](std::vector<int> cfg, int parent, EventId e) {
    auto [it, inserted] = idx.emplace(cfg, static_cast<int>(recs.size()));
    if (inserted) {
      recs.push_back({std::move(cfg), parent, e});
      preds.emplace_back();
    }
    return it->second;
  };
  auto trace_to = [&](int rec) {
    std::vector<EventId> s;
    for (int i = rec; recs[i].parent >= 0; i = recs[i].parent)
      s.push_back(recs[i].event);
    std::reverse(s.begin(), s.end());
    return s;
  };

  std::vector<int> start{plant.initial};
  start.insert(start.end(), loop.controller_states.begin(),
               loop.controller_states.end());
  if (safety) start.push_back(safety_init);
  intern(start, -1, -1);

  /* Advance the plant and controllers; the safety component shadows the run
     and its death is recorded, never a refusal. Returns false on refusal. */
  auto advance = [&](const std::vector<int>& cfg, EventId e,
                     std::vector<int>& out) {
    int pt = plant.target(cfg[0], e);
    if (pt < 0) return false;
    out = cfg;
    out[0] = pt;
    for (int i = 0; i < nc; ++i) {
      if (!loop.controller_alphabets[i].count(e)) continue;
      int t = loop.controllers[i]->target(cfg[1 + i], e);
      if (t < 0) return false;
      out[1 + i] = t;
    }
    if (safety) {
      int ss = cfg[scomp];
      if (ss >= 0 && safety_alpha.count(e)) out[scomp] = safety->target(ss, e);
    }
    return true;
  };

  for (std::size_t head = 0; head < recs.size(); ++head) {
    const std::vector<int> cfg = recs[head].cfg;
    for_each_transition_at(plant, cfg[0], [&](EventId e, int) {
      std::vector<int> next;
      if (!advance(cfg, e, next)) return;
      if (safety && cfg[scomp] >= 0 && next[scomp] < 0 && rpt.safe) {
        rpt.safe = false;
        rpt.safety_witness = trace_to(static_cast<int>(head));
        rpt.safety_witness.push_back(e);
      }
      int child = intern(std::move(next), static_cast<int>(head), e);
      preds[child].push_back(static_cast<int>(head));
    });
  }
  rpt.configurations = static_cast<int>(recs.size());

  auto config_marked = [&](const std::vector<int>& cfg) {
    if (!plant.marked(cfg[0])) return false;
    for (int i = 0; i < nc; ++i)
      if (!loop.controllers[i]->marked(cfg[1 + i])) return false;
    return true;
  };
  std::vector<char> coreach(recs.size(), 0);
  std::deque<int> work;
  for (std::size_t i = 0; i < recs.size(); ++i)
    if (config_marked(recs[i].cfg)) {
      coreach[i] = 1;
      work.push_back(static_cast<int>(i));
    }
  while (!work.empty()) {
    int i = work.front();
    work.pop_front();
    for (int p : preds[i])
      if (!coreach[p]) {
        coreach[p] = 1;
        work.push_back(p);
      }
  }
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (coreach[i]) continue;
    rpt.nonblocking = false;
    rpt.blocking_witness = trace_to(static_cast<int>(i));
    break;
  }

  std::vector<EventId> prefix;
  auto sample = [&](auto&& self, const std::vector<int>& cfg) -> void {
    rpt.reached.closed.insert(prefix);
    if (config_marked(cfg)) rpt.reached.marked.insert(prefix);
    if (static_cast<int>(prefix.size()) >= depth) return;
    for_each_transition_at(plant, cfg[0], [&](EventId e, int) {
      std::vector<int> next;
      if (!advance(cfg, e, next)) return;
      prefix.push_back(e);
      self(self, next);
      prefix.pop_back();
    });
  };
  sample(sample, recs[0].cfg);
  return rpt;
}

FeasibilityResult check_feasibility(
    const std::vector<const LocalController*>& controllers,
    const ObservationMask& mask) {
  FeasibilityResult res;
  for (const LocalController* lc : controllers) {
    for (const auto& [key, target] : lc->automaton.delta) {
      if (!mask.observes(key.second) && target != key.first) {
        res.ok = false;
        res.detail = "controller for event " +
                     std::to_string(lc->controlled_event) +
                     " moves on unobservable event " +
                     std::to_string(key.second) + " (state " +
                     std::to_string(key.first) + " -> " +
                     std::to_string(target) + ")";
        return res;
      }
    }
  }

  bool walkable = !controllers.empty();
  for (const LocalController* lc : controllers)
    walkable = walkable && !lc->automaton.empty();
  if (!walkable) return res;

  std::vector<std::set<EventId>> alphas;
  std::set<EventId> all;
  std::vector<int> init;
  for (const LocalController* lc : controllers) {
    std::vector<EventId> ids = lc->automaton.alphabet();
    alphas.emplace_back(ids.begin(), ids.end());
    all.insert(ids.begin(), ids.end());
    init.push_back(lc->automaton.initial);
  }
  const std::vector<EventId> events(all.begin(), all.end());
  auto advance = [&](std::vector<int>& cfg, EventId e) {
    std::vector<int> next = cfg;
    for (std::size_t i = 0; i < controllers.size(); ++i) {
      if (!alphas[i].count(e)) continue;
      int t = controllers[i]->automaton.target(cfg[i], e);
      if (t < 0) return false;
      next[i] = t;
    }
    cfg = std::move(next);
    return true;
  };
  auto enabled_unobservable = [&](const std::vector<int>& cfg) {
    std::vector<EventId> out;
    for (EventId e : events) {
      if (mask.observes(e)) continue;
      std::vector<int> probe = cfg;
      if (advance(probe, e)) out.push_back(e);
    }
    return out;
  };

  std::mt19937 rng(20260822u); /* fixed seed: reruns sample the same pairs */
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> cfg = init;
    std::vector<EventId> s;
    for (int len = 0; len < 12; ++len) {
      std::vector<EventId> eligible;
      for (EventId e : events) {
        std::vector<int> probe = cfg;
        if (advance(probe, e)) eligible.push_back(e);
      }
      if (eligible.empty()) break;
      EventId e = eligible[rng() % eligible.size()];
      advance(cfg, e);
      s.push_back(e);
    }

    /* Lookalike variant: drop unobservable occurrences, splice in enabled
       unobservable events; the projection is unchanged by construction. */
    std::vector<int> cfg2 = init;
    bool replay_ok = true;
    for (EventId e : s) {
      if (rng() % 4 == 0) {
        std::vector<EventId> ins = enabled_unobservable(cfg2);
        if (!ins.empty()) replay_ok = replay_ok && advance(cfg2, ins[rng() % ins.size()]);
      }
      if (!mask.observes(e) && rng() % 2 == 0) continue;
      replay_ok = replay_ok && advance(cfg2, e);
    }
    if (!replay_ok || cfg2 != cfg) {
      res.ok = false;
      std::ostringstream msg;
      msg << "lookalike replay diverged on trial " << trial << " after "
          << format_string(s);
      res.detail = msg.str();
      return res;
    }
  }
  return res;
}

namespace {

LanguageCompareResult bounded_compare(const Generator& a, const Generator& b,
                                      int depth, bool subset_only) {
  LanguageCompareResult res;
  if (a.empty() && b.empty()) return res;

  std::set<EventId> alpha;
  for (EventId e : a.alphabet()) alpha.insert(e);
  for (EventId e : b.alphabet()) alpha.insert(e);

  struct Rec {
    int sa, sb, parent, depth;
    EventId event;
  };
  std::vector<Rec> recs;
  std::map<std::pair<int, int>, int> seen;
  auto intern = [&](int sa, int sb, int parent, int d, EventId e) {
    auto [it, inserted] =
        seen.emplace(std::make_pair(sa, sb), static_cast<int>(recs.size()));
    if (inserted) recs.push_back({sa, sb, parent, d, e});
  };
  auto witness_to = [&](int rec) {
    std::vector<EventId> s;
    for (int i = rec; recs[i].parent >= 0; i = recs[i].parent)
      s.push_back(recs[i].event);
    std::reverse(s.begin(), s.end());
    return s;
  };
  intern(a.empty() ? -1 : a.initial, b.empty() ? -1 : b.initial, -1, 0, -1);

  for (std::size_t head = 0; head < recs.size(); ++head) {
    const Rec rec = recs[head];
    if (rec.sa >= 0 && rec.sb < 0) {
      res.equal = false;
      res.witness = witness_to(static_cast<int>(head));
      res.detail = "string in the first language only (depth-bounded check)";
      return res;
    }
    if (rec.sa < 0 && rec.sb >= 0 && !subset_only) {
      res.equal = false;
      res.witness = witness_to(static_cast<int>(head));
      res.detail = "string in the second language only (depth-bounded check)";
      return res;
    }
    bool ma = rec.sa >= 0 && a.marked(rec.sa);
    bool mb = rec.sb >= 0 && b.marked(rec.sb);
    if ((ma && !mb) || (mb && !ma && !subset_only)) {
      res.equal = false;
      res.witness = witness_to(static_cast<int>(head));
      res.detail = ma ? "marked in the first language only (depth-bounded check)"
                      : "marked in the second language only (depth-bounded check)";
      return res;
    }
    if (rec.depth >= depth) continue;
    if (rec.sa < 0 && subset_only) continue;
    for (EventId e : alpha) {
      int ta = rec.sa >= 0 ? a.target(rec.sa, e) : -1;
      int tb = rec.sb >= 0 ? b.target(rec.sb, e) : -1;
      if (ta < 0 && tb < 0) continue;
      intern(ta, tb, static_cast<int>(head), rec.depth + 1, e);
    }
  }
  return res;
}

}  // namespace

LanguageCompareResult bounded_language_equal(const Generator& a,
                                             const Generator& b, int depth) {
  return bounded_compare(a, b, depth, false);
}

LanguageCompareResult bounded_language_subset(const Generator& a,
                                              const Generator& b, int depth) {
  return bounded_compare(a, b, depth, true);
}

}  // namespace desloc
