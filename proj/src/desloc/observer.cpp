#include "desloc/observer.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace desloc {

namespace {

/* States reachable from `seed` through transitions labeled outside `keep`;
   sorted. This closes a subset under the erased events of a projection. */
std::vector<int> closure_over(const Generator& g, const std::vector<int>& seed,
                              const std::set<EventId>& keep) {
  std::vector<char> in(g.state_count, 0);
  std::deque<int> queue;
  for (int s : seed)
    if (!in[s]) {
      in[s] = 1;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for_each_transition_at(g, s, [&](EventId e, int t) {
      if (keep.count(e)) return;
      if (!in[t]) {
        in[t] = 1;
        queue.push_back(t);
      }
    });
  }
  std::vector<int> out;
  for (int s = 0; s < g.state_count; ++s)
    if (in[s]) out.push_back(s);
  return out;
}

}  // namespace

std::set<EventId> shared_alphabet(const std::vector<const Generator*>& parts) {
  if (parts.size() < 2)
    throw Error("shared alphabet needs at least two inputs");
  std::vector<std::set<EventId>> alphas;
  alphas.reserve(parts.size());
  for (const Generator* p : parts) {
    std::vector<EventId> ids = p->alphabet();
    alphas.emplace_back(ids.begin(), ids.end());
  }
  std::set<EventId> out;
  for (std::size_t i = 0; i < alphas.size(); ++i)
    for (std::size_t j = i + 1; j < alphas.size(); ++j)
      for (EventId e : alphas[i])
        if (alphas[j].count(e)) out.insert(e);
  return out;
}

ObserverCheckResult check_natural_observer(const Generator& g,
                                           const std::set<EventId>& keep) {
  ObserverCheckResult res;
  if (g.empty()) return res;

  std::set<EventId> kept;
  for (EventId e : g.alphabet())
    if (keep.count(e)) kept.insert(e);
  ProjectionResult obs = project_with_subsets(g, kept);
  const Generator& O = obs.gen;
  const std::vector<EventId> obs_alpha = O.alphabet();

  /* Reachable (state, abstraction-state) pairs: the abstraction follows the
     kept events and holds still through erased ones, so the second component
     is always the lookalike set of the first. */
  struct PairRec {
    int q, s, parent;
    EventId event;
  };
  std::vector<PairRec> pairs;
  std::map<std::pair<int, int>, int> pair_idx;
  auto push_pair = [&](int q, int s, int parent, EventId e) {
    auto [it, inserted] =
        pair_idx.emplace(std::make_pair(q, s), static_cast<int>(pairs.size()));
    if (inserted) pairs.push_back({q, s, parent, e});
    return it->second;
  };
  push_pair(g.initial, O.initial, -1, -1);

  auto rebuild_string = [&](int pidx) {
    std::vector<EventId> s;
    for (int i = pidx; pairs[i].parent >= 0; i = pairs[i].parent)
      s.push_back(pairs[i].event);
    std::reverse(s.begin(), s.end());
    return s;
  };

  /* Per state q: a determinization of g restarted at q over the kept events,
     and the explored product with the abstraction. Nodes survive across
     start subsets for the same q, so each product is walked once. */
  struct QData {
    std::map<std::vector<int>, int> det_idx;
    std::vector<std::vector<int>> det_subsets;
    std::vector<char> det_marked;
    struct Node {
      int o, d, parent;
      EventId event;
      int start_pair;
    };
    std::map<std::pair<int, int>, int> node_idx;
    std::vector<Node> nodes;
  };
  std::map<int, QData> per_q;
  auto det_intern = [&](QData& qd, std::vector<int> subset) {
    auto [it, inserted] =
        qd.det_idx.emplace(subset, static_cast<int>(qd.det_subsets.size()));
    if (inserted) {
      bool m = std::any_of(subset.begin(), subset.end(),
                           [&](int x) { return g.marked(x); });
      qd.det_subsets.push_back(std::move(subset));
      qd.det_marked.push_back(m);
    }
    return it->second;
  };

  for (std::size_t head = 0; head < pairs.size(); ++head) {
    const PairRec pr = pairs[head];

    QData& qd = per_q[pr.q];
    int d0 = det_intern(qd, closure_over(g, {pr.q}, kept));
    if (!qd.node_idx.count({pr.s, d0})) {
      std::deque<int> work;
      auto add_node = [&](int o, int d, int parent, EventId e, int start) {
        auto [it, inserted] = qd.node_idx.emplace(
            std::make_pair(o, d), static_cast<int>(qd.nodes.size()));
        if (inserted) {
          qd.nodes.push_back({o, d, parent, e, start});
          work.push_back(it->second);
        }
      };
      add_node(pr.s, d0, -1, -1, static_cast<int>(head));
      while (!work.empty()) {
        int ni = work.front();
        work.pop_front();
        const QData::Node nd = qd.nodes[ni];
        if (O.marked(nd.o) && !qd.det_marked[nd.d]) {
          std::vector<EventId> suffix;
          int walk = ni, start = -1;
          while (walk >= 0) {
            const QData::Node& n = qd.nodes[walk];
            if (n.parent < 0) {
              start = n.start_pair;
              break;
            }
            suffix.push_back(n.event);
            walk = n.parent;
          }
          std::reverse(suffix.begin(), suffix.end());
          res.ok = false;
          res.witness_suffix = std::move(suffix);
          res.witness_string = rebuild_string(start);
          res.witness_state = pairs[start].q;
          res.witness_subset = obs.subsets[pairs[start].s];
          std::ostringstream msg;
          msg << "projection is not an observer: after "
              << format_string(res.witness_string) << " the kept extension "
              << format_string(res.witness_suffix)
              << " reaches the marked abstraction but state "
              << res.witness_state << " cannot match it";
          res.detail = msg.str();
          return res;
        }
        for (EventId e : obs_alpha) {
          int ot = O.target(nd.o, e);
          if (ot < 0) continue;
          std::vector<int> step;
          for (int x : qd.det_subsets[nd.d]) {
            int tx = g.target(x, e);
            if (tx >= 0) step.push_back(tx);
          }
          int dt = det_intern(qd, closure_over(g, step, kept));
          add_node(ot, dt, ni, e, -1);
        }
      }
    }

    for_each_transition_at(g, pr.q, [&](EventId e, int qt) {
      int st = pr.s;
      if (kept.count(e)) {
        st = O.target(pr.s, e);
        if (st < 0) throw Error("internal: abstraction lost a kept transition");
      }
      push_pair(qt, st, static_cast<int>(head), e);
    });
  }
  return res;
}

std::set<EventId> minimal_observer_extension(
    const std::vector<const Generator*>& gs, const std::set<EventId>& seed) {
  std::set<EventId> current = seed;
  for (;;) {
    const Generator* failed = nullptr;
    ObserverCheckResult r;
    for (const Generator* g : gs) {
      r = check_natural_observer(*g, current);
      if (!r.ok) {
        failed = g;
        break;
      }
    }
    if (!failed) return current;

    /* Candidate events: erased events along the witness history or anywhere
       the lookalike subset can still go; adding one refines the projection
       where the ambiguity arose. */
    std::set<EventId> implicated;
    for (EventId e : r.witness_string)
      if (!current.count(e)) implicated.insert(e);
    std::vector<char> reach(failed->state_count, 0);
    std::deque<int> queue;
    for (int s : r.witness_subset)
      if (!reach[s]) {
        reach[s] = 1;
        queue.push_back(s);
      }
    while (!queue.empty()) {
      int s = queue.front();
      queue.pop_front();
      for_each_transition_at(*failed, s, [&](EventId e, int t) {
        if (!current.count(e)) implicated.insert(e);
        if (!reach[t]) {
          reach[t] = 1;
          queue.push_back(t);
        }
      });
    }
    if (implicated.empty())
      throw Error("observer extension stalled without an implicated event");
    current.insert(*implicated.begin());
  }
}

}  // namespace desloc
