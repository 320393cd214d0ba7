#include "desloc/synthesis.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace desloc {

SynthesisProblem::SynthesisProblem(Generator plant_, Generator spec_,
                                   ObservationMask mask_)
    : plant(std::move(plant_)), spec(std::move(spec_)), mask(std::move(mask_)) {
  for (const auto& [id, info] : spec.events.entries()) {
    if (!plant.events.contains(id))
      throw Error("specification event " + std::to_string(id) +
                  " is not in the plant alphabet");
    plant.events.merge_event(id, info); /* attribute conflicts throw */
  }
}

SynthesisProblem::SynthesisProblem(Generator plant_, Generator spec_)
    : SynthesisProblem(std::move(plant_), std::move(spec_), ObservationMask()) {
  mask = ObservationMask::from_table(plant.events);
}

/* ----- controllability ----- */

ControllabilityResult is_controllable(const Generator& k, const Generator& plant) {
  ControllabilityResult out;
  if (k.empty()) return out; /* the empty language is controllable */
  if (plant.empty())
    throw Error("k is not contained in the plant language: plant is empty");
  std::vector<EventId> alphabet = plant.alphabet();

  auto key = [&](int kx, int g) {
    return static_cast<long long>(kx) * plant.state_count + g;
  };
  std::unordered_map<long long, std::pair<long long, EventId>> parent;
  auto witness_to = [&](long long at) {
    std::vector<EventId> w;
    auto it = parent.find(at);
    while (it != parent.end() && it->second.second >= 0) {
      w.push_back(it->second.second);
      it = parent.find(it->second.first);
    }
    std::reverse(w.begin(), w.end());
    return w;
  };

  std::deque<std::pair<int, int>> queue{{k.initial, plant.initial}};
  parent.emplace(key(k.initial, plant.initial), std::make_pair(0LL, -1));
  while (!queue.empty()) {
    auto [kx, g] = queue.front();
    queue.pop_front();
    long long here = key(kx, g);
    /* containment: every k-move must be a plant-move */
    for_each_transition_at(k, kx, [&](EventId e, int) {
      if (plant.target(g, e) < 0) {
        std::vector<EventId> w = witness_to(here);
        w.push_back(e);
        throw Error("k is not contained in the plant language: " +
                    format_string(w));
      }
    });
    for (EventId e : alphabet) {
      int g2 = plant.target(g, e);
      if (g2 < 0) continue;
      int k2 = k.target(kx, e);
      if (k2 >= 0) {
        auto [it, inserted] = parent.emplace(key(k2, g2), std::make_pair(here, e));
        if (inserted) queue.push_back({k2, g2});
      } else if (!plant.events.controllable(e)) {
        out.controllable = false;
        out.witness = witness_to(here);
        out.event = e;
        return out;
      }
    }
  }
  return out;
}

/* ----- shared supcon machinery ----- */

namespace {

/* C = trim(E || G) with the plant-state component of every product state. */
struct Ambient {
  Generator gen;
  std::vector<int> plant_of;
};

Ambient build_ambient(const Generator& plant, const Generator& spec) {
  SyncResult sr = sync_product({&plant, &spec});
  TrimResult tr = trim_with_map(sr.gen);
  Ambient amb;
  amb.gen = std::move(tr.gen);
  amb.gen.name = "ambient";
  amb.plant_of.assign(amb.gen.state_count, -1);
  for (int s = 0; s < sr.gen.state_count; ++s)
    if (tr.state_map[s] >= 0) amb.plant_of[tr.state_map[s]] = sr.origin[0][s];
  return amb;
}

/* K as a state/transition/marker subset of the ambient recognizer. */
struct SubK {
  std::vector<char> alive;
  std::map<std::pair<int, EventId>, int> delta;
  std::vector<char> mark;
};

SubK make_subk(const Ambient& amb) {
  SubK k;
  k.alive.assign(amb.gen.state_count, 1);
  k.delta = amb.gen.delta;
  k.mark.assign(amb.gen.state_count, 0);
  for (int m : amb.gen.marker) k.mark[m] = 1;
  return k;
}

std::vector<std::vector<EventId>> uncontrollable_eligibility(const Ambient& amb,
                                                             const Generator& plant) {
  std::vector<EventId> uc;
  for (const auto& [id, info] : plant.events.entries())
    if (!info.controllable) uc.push_back(id);
  std::vector<std::vector<EventId>> elig(amb.gen.state_count);
  for (int s = 0; s < amb.gen.state_count; ++s)
    for (EventId e : uc)
      if (plant.target(amb.plant_of[s], e) >= 0) elig[s].push_back(e);
  return elig;
}

/* Trim + controllability state deletion until fixpoint. */
void sub_fixpoint(SubK& k, const Ambient& amb,
                  const std::vector<std::vector<EventId>>& uc_elig) {
  const int n = amb.gen.state_count;
  if (n == 0) return;
  while (true) {
    bool changed = false;
    std::vector<char> reach(n, 0);
    if (k.alive[amb.gen.initial]) {
      std::deque<int> q{amb.gen.initial};
      reach[amb.gen.initial] = 1;
      while (!q.empty()) {
        int s = q.front();
        q.pop_front();
        for (auto it = k.delta.lower_bound({s, std::numeric_limits<EventId>::min()});
             it != k.delta.end() && it->first.first == s; ++it) {
          int t = it->second;
          if (k.alive[t] && !reach[t]) {
            reach[t] = 1;
            q.push_back(t);
          }
        }
      }
    }
    std::vector<std::vector<int>> pred(n);
    for (const auto& [key, tgt] : k.delta)
      if (k.alive[key.first] && k.alive[tgt]) pred[tgt].push_back(key.first);
    std::vector<char> coreach(n, 0);
    std::deque<int> q;
    for (int s = 0; s < n; ++s)
      if (k.alive[s] && k.mark[s]) {
        coreach[s] = 1;
        q.push_back(s);
      }
    while (!q.empty()) {
      int s = q.front();
      q.pop_front();
      for (int pd : pred[s])
        if (!coreach[pd]) {
          coreach[pd] = 1;
          q.push_back(pd);
        }
    }
    for (int s = 0; s < n; ++s) {
      char next = k.alive[s] && reach[s] && coreach[s];
      if (next != k.alive[s]) {
        k.alive[s] = next;
        changed = true;
      }
    }
    for (int s = 0; s < n; ++s) {
      if (!k.alive[s]) continue;
      for (EventId e : uc_elig[s]) {
        auto it = k.delta.find({s, e});
        if (it == k.delta.end() || !k.alive[it->second]) {
          k.alive[s] = 0;
          changed = true;
          break;
        }
      }
    }
    if (!changed) break;
  }
  for (auto it = k.delta.begin(); it != k.delta.end();) {
    if (!k.alive[it->first.first] || !k.alive[it->second])
      it = k.delta.erase(it);
    else
      ++it;
  }
}

/* Keeps the ambient state numbering; dead states become unreachable. */
Generator sub_materialize(const SubK& k, const Ambient& amb, const std::string& name) {
  Generator g;
  g.name = name;
  g.events = amb.gen.events;
  if (amb.gen.empty() || !k.alive[amb.gen.initial]) return g;
  g.state_count = amb.gen.state_count;
  g.initial = amb.gen.initial;
  for (int s = 0; s < g.state_count; ++s)
    if (k.alive[s] && k.mark[s]) g.marker.push_back(s);
  for (const auto& [key, tgt] : k.delta)
    if (k.alive[key.first] && k.alive[tgt]) g.delta.emplace(key, tgt);
  g.annotations = amb.gen.annotations;
  return g;
}

}  // namespace

Generator supcon(const SynthesisProblem& p) {
  Ambient amb = build_ambient(p.plant, p.spec);
  std::vector<std::vector<EventId>> uc_elig = uncontrollable_eligibility(amb, p.plant);
  SubK k = make_subk(amb);
  sub_fixpoint(k, amb, uc_elig);
  Generator out = trim(sub_materialize(k, amb, "supcon"));
  out.name = "supcon";
  return out;
}

/* ----- relative observability ----- */

namespace {

struct TwinSide {
  int a, g, kx; /* ambient state, plant state, k state (-1 once outside K̄) */
};

}  // namespace

ROResult check_relative_observability(const Generator& k, const Generator& ambient,
                                      const Generator& plant,
                                      const ObservationMask& mask) {
  ROResult out;
  {
    LanguageCompareResult c = language_subset(k, ambient);
    if (!c.equal)
      throw Error("k is not a sublanguage of the ambient (" + c.detail + " at " +
                  format_string(c.witness) + ")");
    c = language_subset(ambient, plant);
    if (!c.equal)
      throw Error("ambient is not a sublanguage of the plant (" + c.detail +
                  " at " + format_string(c.witness) + ")");
  }
  if (k.empty()) return out; /* no string in K̄: both conditions vacuous */

  std::vector<EventId> alphabet = plant.alphabet();
  const long long sideN =
      static_cast<long long>(ambient.state_count) * plant.state_count *
      (k.state_count + 1);
  auto side_key = [&](const TwinSide& s) {
    return (static_cast<long long>(s.a) * plant.state_count + s.g) *
               (k.state_count + 1) +
           (s.kx + 1);
  };
  auto pair_key = [&](const TwinSide& x, const TwinSide& y) {
    return side_key(x) * sideN + side_key(y);
  };

  struct PairRec {
    TwinSide s1, s2;
    int parent;      /* index into recs, -1 at root */
    EventId sigma;   /* move that created this pair */
    int moved;       /* 0 = side 1, 1 = side 2, 2 = both */
  };
  std::vector<PairRec> recs;
  std::unordered_map<long long, int> seen;

  TwinSide root{ambient.initial, plant.initial, k.initial};
  recs.push_back({root, root, -1, -1, 2});
  seen.emplace(pair_key(root, root), 0);
  std::vector<int> level{0};

  auto rebuild = [&](int idx, int orient) {
    /* orient: which side plays s (the K̄ role) */
    std::vector<EventId> w1, w2;
    for (int at = idx; at >= 0; at = recs[at].parent) {
      const PairRec& r = recs[at];
      if (r.sigma < 0) break;
      if (r.moved == 0 || r.moved == 2) w1.push_back(r.sigma);
      if (r.moved == 1 || r.moved == 2) w2.push_back(r.sigma);
    }
    std::reverse(w1.begin(), w1.end());
    std::reverse(w2.begin(), w2.end());
    if (orient == 0) return std::make_pair(w1, w2);
    return std::make_pair(w2, w1);
  };

  struct Cand {
    EventId sigma; /* -1 for marking violations, so they sort first */
    int pair_idx;
    int orient;
    ROResult::Kind kind;
    int k_state;
  };

  while (!level.empty()) {
    std::vector<Cand> cands;
    for (int idx : level) {
      const PairRec& r = recs[idx];
      for (int orient = 0; orient < 2; ++orient) {
        const TwinSide& sk = orient == 0 ? r.s1 : r.s2; /* s: must be in K̄ */
        const TwinSide& so = orient == 0 ? r.s2 : r.s1; /* s′: in C̄ */
        if (sk.kx < 0) continue;
        if (k.marked(sk.kx) && plant.marked(so.g) &&
            !(so.kx >= 0 && k.marked(so.kx)))
          cands.push_back({-1, idx, orient, ROResult::Kind::marking, sk.kx});
        for (EventId e : alphabet) {
          if (k.target(sk.kx, e) < 0) continue;      /* need sσ ∈ K̄ */
          if (plant.target(so.g, e) < 0) continue;   /* need s′σ ∈ L(G) */
          if (so.kx >= 0 && k.target(so.kx, e) >= 0) continue; /* s′σ ∈ K̄: fine */
          cands.push_back({e, idx, orient, ROResult::Kind::transition, sk.kx});
        }
      }
    }
    if (!cands.empty()) {
      const Cand* best = &cands[0];
      for (const Cand& c : cands) {
        if (std::tie(c.sigma, c.pair_idx, c.orient) <
            std::tie(best->sigma, best->pair_idx, best->orient))
          best = &c;
      }
      out.ok = false;
      out.kind = best->kind;
      auto [s, sp] = rebuild(best->pair_idx, best->orient);
      out.s = std::move(s);
      out.s_prime = std::move(sp);
      out.sigma = best->kind == ROResult::Kind::transition ? best->sigma : -1;
      out.k_state = best->k_state;
      std::ostringstream os;
      if (best->kind == ROResult::Kind::transition)
        os << "lookalike strings disagree about extending with event " << best->sigma;
      else
        os << "lookalike strings disagree about marking";
      os << " (s=" << format_string(out.s) << ", s'=" << format_string(out.s_prime)
         << ")";
      out.detail = os.str();
      return out;
    }

    std::vector<int> next;
    auto advance = [&](const TwinSide& s, EventId e, TwinSide& to) {
      to.a = ambient.target(s.a, e);
      to.g = plant.target(s.g, e);
      to.kx = s.kx >= 0 ? k.target(s.kx, e) : -1;
      return to.a >= 0 && to.g >= 0; /* sides must stay inside C̄ */
    };
    auto push_pair = [&](const TwinSide& s1, const TwinSide& s2, int parent,
                         EventId e, int moved) {
      if (s1.kx < 0 && s2.kx < 0) return; /* no K̄ role left on either side */
      long long kk = pair_key(s1, s2);
      auto [it, inserted] = seen.emplace(kk, static_cast<int>(recs.size()));
      if (!inserted) return;
      recs.push_back({s1, s2, parent, e, moved});
      next.push_back(it->second);
    };
    for (int idx : level) {
      PairRec r = recs[idx]; /* copy: recs may reallocate */
      for (EventId e : alphabet) {
        TwinSide t1, t2;
        if (mask.observes(e)) {
          if (advance(r.s1, e, t1) && advance(r.s2, e, t2))
            push_pair(t1, t2, idx, e, 2);
        } else {
          if (advance(r.s1, e, t1)) push_pair(t1, r.s2, idx, e, 0);
          if (advance(r.s2, e, t2)) push_pair(r.s1, t2, idx, e, 1);
        }
      }
    }
    level = std::move(next);
  }
  return out;
}

/* ----- supremal controllable relatively-observable sublanguage ----- */

namespace detail {

/* One repair round at lookalike-exact granularity.

   States of the refinement are (x, U): x the current K-recognizer state of s,
   U the set of (ambient state, K state) reached by lookalike strings s' that
   stay inside K̄.  A continuation or marking violates feasibility exactly
   where some member of U witnesses it: the lookalike can follow the event in
   the plant (or is plant-marked) while K refuses. */
ShrinkRound observability_shrink(const Generator& k, const SynthesisProblem& p) {
  const Generator& plant = p.plant;
  const ObservationMask& mask = p.mask;
  /* probe knob: 0 iterate+batched, 1 fixed supcon+simultaneous,
     2 iterate+simultaneous, 3 fixed supcon+batched,
     4 fixed behavior+batched, 5 fixed behavior+simultaneous */
  static const int mode = [] {
    const char* v = std::getenv("DESLOC_RCO_MODE");
    return v ? std::atoi(v) : 0;
  }();
  const bool fixed_supcon = mode == 1 || mode == 3;
  const bool fixed_behavior = mode == 4 || mode == 5;
  const bool batched = mode == 0 || mode == 3 || mode == 4;
  /* Lookalikes are quantified over the ambient language: the current iterate,
     the supremal controllable sublanguage, or the full behavior E || Lm(G),
     depending on mode.  Pairing with the plant recovers the plant component
     of every lookalike state. */
  Ambient amb = fixed_behavior
                    ? build_ambient(p.plant, p.spec)
                    : build_ambient(p.plant, fixed_supcon ? supcon(p) : k);
  const Generator& C = amb.gen;
  std::vector<EventId> alphabet = plant.alphabet();
  std::vector<EventId> unobs;
  for (EventId e : alphabet)
    if (!mask.observes(e)) unobs.push_back(e);

  using Member = std::pair<int, int>; /* (ambient state, K state or -1) */
  auto uclo = [&](std::set<Member> s) {
    std::deque<Member> q(s.begin(), s.end());
    while (!q.empty()) {
      auto [c, r] = q.front();
      q.pop_front();
      for (EventId e : unobs) {
        int c2 = C.target(c, e);
        if (c2 < 0) continue; /* s' must stay inside C̄ */
        int r2 = r >= 0 ? k.target(r, e) : -1;
        if (s.emplace(c2, r2).second) q.push_back({c2, r2});
      }
    }
    return std::vector<Member>(s.begin(), s.end());
  };

  struct RefState {
    int x;
    std::vector<Member> u;
  };
  std::map<std::pair<int, std::vector<Member>>, int> index;
  std::vector<RefState> states;
  auto intern = [&](int x, std::vector<Member> u) {
    auto key = std::make_pair(x, u);
    auto [it, inserted] = index.emplace(std::move(key), static_cast<int>(states.size()));
    if (inserted) states.push_back({x, std::move(u)});
    return it->second;
  };

  ShrinkRound out;
  out.gen.name = k.name;
  out.gen.events = k.events;
  if (k.empty()) return out;

  intern(k.initial, uclo({{C.initial, k.initial}}));
  std::map<std::pair<int, EventId>, int> delta;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states.size() > 2'000'000)
      throw Error("observability refinement exceeded the state budget");
    const int x = states[i].x;
    const std::vector<Member> u = states[i].u; /* copy: states may reallocate */
    for (EventId e : alphabet) {
      int x2 = k.target(x, e);
      if (x2 < 0) continue;
      int j;
      if (mask.observes(e)) {
        std::set<Member> moved;
        for (auto [c, r] : u) {
          int c2 = C.target(c, e);
          if (c2 < 0) continue;
          moved.emplace(c2, r >= 0 ? k.target(r, e) : -1);
        }
        j = intern(x2, uclo(std::move(moved)));
      } else {
        j = intern(x2, u);
      }
      delta.emplace(std::make_pair(static_cast<int>(i), e), j);
    }
  }

  /* Collect every violation first, then remove only the highest-priority
     batch: all marking violations if there are any, otherwise the transition
     violations of the smallest offending event.  One batch per round keeps
     later checks honest: a violation witnessed only by strings an earlier
     batch removes is no violation once the lookalike sets catch up. */
  std::set<int> bad_marks;
  std::map<EventId, std::set<int>> bad_trans;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!k.marked(states[i].x)) continue;
    for (auto [c, r] : states[i].u) {
      /* (ii): a plant-marked lookalike must be marked in K */
      if (plant.marked(amb.plant_of[c]) && !(r >= 0 && k.marked(r))) {
        bad_marks.insert(static_cast<int>(i));
        break;
      }
    }
  }
  for (const auto& [key, j] : delta) {
    (void)j;
    auto [i, e] = key;
    for (auto [c, r] : states[i].u) {
      /* (i): a lookalike eligible for e in the plant must keep e in K̄ */
      if (plant.target(amb.plant_of[c], e) >= 0 && !(r >= 0 && k.target(r, e) >= 0)) {
        bad_trans[e].insert(i);
        break;
      }
    }
  }
  const bool drop_marks = !bad_marks.empty();
  const bool drop_trans = (!batched || !drop_marks) && !bad_trans.empty();
  const EventId drop_event =
      drop_trans && batched ? bad_trans.begin()->first : 0;

  auto trans_dropped = [&](int i, EventId e) {
    if (!drop_trans) return false;
    if (batched && e != drop_event) return false;
    auto it = bad_trans.find(e);
    return it != bad_trans.end() && it->second.count(i) > 0;
  };

  out.gen.state_count = static_cast<int>(states.size());
  out.gen.initial = 0;
  for (int i = 0; i < out.gen.state_count; ++i) {
    if (!k.marked(states[i].x)) continue;
    if (drop_marks && bad_marks.count(i)) {
      out.changed = true;
      continue;
    }
    out.gen.marker.push_back(i);
  }
  for (const auto& [key, j] : delta) {
    auto [i, e] = key;
    if (trans_dropped(i, e)) {
      out.changed = true;
      continue;
    }
    out.gen.delta.emplace(key, j);
  }
  return out;
}

}  // namespace detail

Generator sup_rco(const SynthesisProblem& p) {
  Generator k = supcon(p);
  /* each round removes one batch of violations, so rounds are cheap and many */
  for (int round = 0; round < 100000; ++round) {
    if (k.empty()) break;
    detail::ShrinkRound s = detail::observability_shrink(k, p);
    if (!s.changed) {
      Generator out = trim(std::move(k));
      out.name = "sup_rco";
      return out;
    }
    k = supcon(SynthesisProblem(p.plant, trim(std::move(s.gen)), p.mask));
    k = minimize(k); /* canonical recognizer keeps rounds small */
  }
  if (!k.empty())
    throw Error("observability fixpoint did not converge");
  k.name = "sup_rco";
  k.events = p.plant.events;
  return k;
}

/* ----- normality comparator ----- */

Generator sup_cn(const SynthesisProblem& p) {
  Generator k = sup_rco(p);
  k.name = "sup_cn";
  const Generator& G = p.plant;
  std::vector<EventId> alphabet = G.alphabet();
  std::vector<EventId> unobs;
  for (EventId e : alphabet)
    if (!p.mask.observes(e)) unobs.push_back(e);

  for (int round = 0; round < 10000; ++round) {
    if (k.empty()) return k;

    /* M: pair machine over L(G); second component dies outside K̄ */
    std::map<std::pair<int, int>, int> midx;
    std::vector<std::pair<int, int>> mst;
    std::vector<std::map<EventId, int>> mdelta;
    mst.push_back({G.initial, k.initial});
    midx.emplace(mst[0], 0);
    mdelta.emplace_back();
    for (std::size_t i = 0; i < mst.size(); ++i) {
      auto [g, kk] = mst[i];
      for (EventId e : alphabet) {
        int g2 = G.target(g, e);
        if (g2 < 0) continue;
        int k2 = kk >= 0 ? k.target(kk, e) : -1;
        auto [it, inserted] =
            midx.emplace(std::make_pair(g2, k2), static_cast<int>(mst.size()));
        if (inserted) {
          mst.push_back({g2, k2});
          mdelta.emplace_back();
        }
        mdelta[i][e] = it->second;
      }
    }
    auto closure = [&](std::set<int> s) {
      std::deque<int> q(s.begin(), s.end());
      while (!q.empty()) {
        int m = q.front();
        q.pop_front();
        for (EventId e : unobs) {
          auto it = mdelta[m].find(e);
          if (it != mdelta[m].end() && s.insert(it->second).second)
            q.push_back(it->second);
        }
      }
      return std::vector<int>(s.begin(), s.end());
    };

    /* P: k-state refined by the lookalike subset of M */
    std::map<std::vector<int>, int> pidx;
    std::vector<std::vector<int>> pst; /* [x, S...] */
    std::vector<std::map<EventId, int>> pdelta;
    {
      std::vector<int> init = closure({0});
      init.insert(init.begin(), k.initial);
      pidx.emplace(init, 0);
      pst.push_back(init);
      pdelta.emplace_back();
    }
    for (std::size_t i = 0; i < pst.size(); ++i) {
      int x = pst[i][0];
      for (EventId e : alphabet) {
        int x2 = k.target(x, e);
        if (x2 < 0) continue;
        std::vector<int> st;
        if (p.mask.observes(e)) {
          std::set<int> img;
          for (std::size_t j = 1; j < pst[i].size(); ++j) {
            auto it = mdelta[pst[i][j]].find(e);
            if (it != mdelta[pst[i][j]].end()) img.insert(it->second);
          }
          st = closure(std::move(img));
        } else {
          st.assign(pst[i].begin() + 1, pst[i].end());
        }
        st.insert(st.begin(), x2);
        auto [it, inserted] = pidx.emplace(st, static_cast<int>(pst.size()));
        if (inserted) {
          pst.push_back(st);
          pdelta.emplace_back();
        }
        pdelta[i][e] = it->second;
      }
    }

    std::vector<char> bad(pst.size(), 0), unmark(pst.size(), 0);
    bool any = false;
    for (std::size_t i = 0; i < pst.size(); ++i) {
      int x = pst[i][0];
      for (std::size_t j = 1; j < pst[i].size(); ++j) {
        auto [mg, mk] = mst[pst[i][j]];
        if (mk < 0) bad[i] = 1; /* a lookalike escaped K̄ inside L(G) */
        if (k.marked(x) && G.marked(mg) && (mk < 0 || !k.marked(mk)))
          unmark[i] = 1; /* a lookalike is plant-marked but not in K */
      }
      any = any || bad[i] || unmark[i];
    }
    if (!any) return k;

    Generator k2;
    k2.name = "sup_cn";
    k2.events = k.events;
    if (!bad[0]) {
      k2.state_count = static_cast<int>(pst.size());
      k2.initial = 0;
      for (std::size_t i = 0; i < pst.size(); ++i)
        if (!bad[i] && !unmark[i] && k.marked(pst[i][0]))
          k2.marker.push_back(static_cast<int>(i));
      for (std::size_t i = 0; i < pst.size(); ++i) {
        if (bad[i]) continue;
        for (const auto& [e, j] : pdelta[i])
          if (!bad[j]) k2.delta.emplace(std::make_pair(static_cast<int>(i), e), j);
      }
      k2 = trim(k2);
    }
    if (k2.empty()) {
      k = std::move(k2);
      k.name = "sup_cn";
      continue;
    }
    SynthesisProblem q(G, std::move(k2), p.mask);
    k = supcon(q);
    k.name = "sup_cn";
  }
  throw Error("normality fixpoint did not converge");
}

/* ----- uncertainty-set realization ----- */

namespace {

std::vector<std::set<EventId>> plant_eligibility(const Generator& k,
                                                 const Generator& plant) {
  std::vector<std::set<EventId>> elig(k.state_count);
  std::set<std::pair<int, int>> seen;
  std::deque<std::pair<int, int>> queue{{k.initial, plant.initial}};
  seen.insert(queue.front());
  while (!queue.empty()) {
    auto [kx, g] = queue.front();
    queue.pop_front();
    for_each_transition_at(plant, g, [&](EventId e, int g2) {
      elig[kx].insert(e);
      int k2 = k.target(kx, e);
      if (k2 >= 0 && seen.insert({k2, g2}).second) queue.push_back({k2, g2});
    });
  }
  return elig;
}

}  // namespace

POSupervisor build_po_supervisor(const Generator& k, const Generator& plant,
                                 const ObservationMask& mask) {
  POSupervisor sup;
  sup.automaton.name = "posup";
  sup.automaton.events = plant.events;
  if (k.empty()) return sup; /* closed loop is the empty language */

  for (const auto& [id, info] : k.events.entries())
    if (!plant.events.contains(id))
      throw Error("k event " + std::to_string(id) + " is not in the plant alphabet");
  {
    ControllabilityResult c = is_controllable(k, plant);
    if (!c.controllable)
      throw Error("k is not controllable: uncontrollable event " +
                  std::to_string(c.event) + " after " + format_string(c.witness));
    ROResult r = check_relative_observability(k, k, plant, mask);
    if (!r.ok) throw Error("k is not observable: " + r.detail);
  }

  std::vector<std::set<EventId>> elig = plant_eligibility(k, plant);
  std::vector<EventId> obs, unobs;
  for (EventId e : plant.alphabet())
    (mask.observes(e) ? obs : unobs).push_back(e);

  auto closure = [&](std::set<int> s) {
    std::deque<int> q(s.begin(), s.end());
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (EventId e : unobs) {
        int t = k.target(x, e);
        if (t >= 0 && s.insert(t).second) q.push_back(t);
      }
    }
    return std::vector<int>(s.begin(), s.end());
  };

  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>>& sets = sup.uncertainty_sets;
  sets.push_back(closure({k.initial}));
  index.emplace(sets[0], 0);
  Generator& a = sup.automaton;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (EventId e : obs) {
      std::set<int> img;
      for (int x : sets[i]) {
        int t = k.target(x, e);
        if (t >= 0) img.insert(t);
      }
      if (img.empty()) continue;
      std::vector<int> u = closure(std::move(img));
      auto [it, inserted] = index.emplace(u, static_cast<int>(sets.size()));
      if (inserted) sets.push_back(std::move(u));
      a.delta.emplace(std::make_pair(static_cast<int>(i), e), it->second);
    }
    for (EventId e : unobs) {
      bool enabled = false;
      for (int x : sets[i])
        if (k.target(x, e) >= 0) {
          enabled = true;
          break;
        }
      if (enabled)
        a.delta.emplace(std::make_pair(static_cast<int>(i), e),
                        static_cast<int>(i));
    }
  }
  a.state_count = static_cast<int>(sets.size());
  a.initial = 0;
  a.annotations.resize(a.state_count);
  for (int i = 0; i < a.state_count; ++i) {
    bool marked = false;
    std::ostringstream os;
    os << "{";
    for (std::size_t j = 0; j < sets[i].size(); ++j) {
      if (j) os << ",";
      os << sets[i][j];
      if (k.marked(sets[i][j])) marked = true;
    }
    os << "}";
    a.annotations[i] = os.str();
    if (marked) a.marker.push_back(i);
  }

  sup.disabled_map.resize(a.state_count);
  for (int i = 0; i < a.state_count; ++i) {
    for (EventId e : plant.events.controllable_ids()) {
      bool eligible = false;
      for (int x : sets[i])
        if (elig[x].count(e)) {
          eligible = true;
          break;
        }
      if (eligible && !a.defined(i, e)) sup.disabled_map[i].insert(e);
    }
  }

  Generator loop = sync(plant, a);
  LanguageCompareResult eq = language_equal(loop, k);
  if (!eq.equal)
    throw Error("supervisor realization failed: " + eq.detail + " at " +
                format_string(eq.witness));
  return sup;
}

bool nonconflict(const std::vector<const Generator*>& gs) {
  if (gs.empty()) return true;
  return is_nonblocking(sync_product(gs).gen).nonblocking;
}

}  // namespace desloc
