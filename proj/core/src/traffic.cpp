// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "asim/traffic.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "asim/errors.hpp"

namespace asim {

namespace {

// Source units per reduction block. Fixed so the floating-point summation
// order, and therefore the report, is independent of the worker count.
constexpr std::size_t kBlockSize = 64;

// The high word of tie_key is what orders predecessors.
constexpr std::uint64_t kKeyMask = 0xFFFFFFFF00000000ull;

// Adjacency over a subset of agents, renumbered 0..m-1.
struct Csr {
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> targets;
  // tie_key bits of edge e in the high word, the local id of its tail in the
  // low word, so a smaller value is a better predecessor.
  std::vector<std::uint64_t> rank;

  Csr(const NetworkState& state, const std::vector<AgentId>& ids,
      const std::vector<std::int32_t>& index, std::uint64_t tie_seed) {
    offsets.assign(ids.size() + 1, 0);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      std::uint32_t deg = 0;
      for (AgentId v : state.agent(ids[k]).links) deg += index[v] >= 0;
      offsets[k + 1] = offsets[k] + deg;
    }
    targets.reserve(offsets.back());
    rank.reserve(offsets.back());
    for (std::size_t k = 0; k < ids.size(); ++k) {
      for (AgentId v : state.agent(ids[k]).links) {
        if (index[v] < 0) continue;
        targets.push_back(static_cast<std::uint32_t>(index[v]));
        rank.push_back((edge_rank(tie_seed, v, ids[k]) & kKeyMask) | k);
      }
    }
  }

  std::size_t size() const { return offsets.size() - 1; }
};

// BFS tree rooted at one node with tie-broken parents. `order` lists nodes by
// discovery; `depth` and `parent_pos` are by position in it.
struct Tree {
  std::vector<std::int32_t> dist;  // by node, -1 = unseen
  std::vector<std::uint32_t> order;
  std::vector<std::uint32_t> depth;       // by position
  std::vector<std::uint32_t> parent_pos;  // by position

  explicit Tree(std::size_t n)
      : dist(n), order(n + 1), depth(n), parent_pos(n), best_(n), pos_(n) {}

  // Returns the number of nodes reached. Local ids preserve agent-id order,
  // so the low word of a packed candidate breaks key ties by agent id.
  std::size_t build(const Csr& g, std::uint32_t root, std::uint64_t salt) {
    std::fill(dist.begin(), dist.end(), -1);
    const std::uint64_t high = salt & kKeyMask;
    dist[root] = 0;
    order[0] = root;
    best_[root] = root;
    const std::uint32_t* offsets = g.offsets.data();
    const std::uint32_t* targets = g.targets.data();
    const std::uint64_t* rank = g.rank.data();
    std::int32_t* d = dist.data();
    std::uint64_t* best = best_.data();
    std::uint32_t* seen = order.data();
    std::uint32_t tail = 1;
    // Branch-free relaxation: an edge offers its packed key to the target
    // when the target is new or sits one level down, and the minimum wins.
    for (std::uint32_t head = 0; head < tail; ++head) {
      const std::uint32_t u = seen[head];
      const std::int32_t next = d[u] + 1;
      const std::uint32_t end = offsets[u + 1];
      for (std::uint32_t e = offsets[u]; e < end; ++e) {
        const std::uint32_t v = targets[e];
        const std::int32_t dv = d[v];
        const std::uint32_t fresh = static_cast<std::uint32_t>(dv) >> 31;
        const std::uint64_t eligible = fresh | static_cast<std::uint32_t>(dv == next);
        const std::uint64_t offer = (high ^ rank[e]) | (eligible - 1);
        // A fresh node's stale entry is masked to all ones.
        const std::uint64_t held = best[v] | (0 - std::uint64_t{fresh});
        best[v] = held < offer ? held : offer;
        d[v] = dv + static_cast<std::int32_t>(fresh) * (next + 1);
        seen[tail] = v;
        tail += fresh;
      }
    }
    for (std::uint32_t i = 0; i < tail; ++i) {
      const std::uint32_t v = order[i];
      pos_[v] = i;
      depth[i] = static_cast<std::uint32_t>(dist[v]);
    }
    for (std::uint32_t i = 1; i < tail; ++i) {
      parent_pos[i] = pos_[static_cast<std::uint32_t>(best_[order[i]])];
    }
    return tail;
  }

 private:
  std::vector<std::uint64_t> best_;  // by node: packed key and predecessor
  std::vector<std::uint32_t> pos_;   // by node
};

// Dense per-agent view of a PolicyAssignment. Blacklist membership is stored
// per source as a signature: an index into the distinct membership patterns
// over the blacklist groups.
struct PolicyTable {
  std::vector<double> egress;    // e_out where egress filtering applies
  std::vector<double> transit;   // e_in on flows passing through
  std::vector<double> delivery;  // e_in on flows terminating here
  std::vector<std::int32_t> blacklist_group;
  std::vector<std::uint32_t> signature;  // by source
  std::vector<char> patterns;            // [signature][group]
  std::size_t group_count = 0;
  bool any_blacklisted = false;

  PolicyTable(const NetworkState& state, const PolicyAssignment& policy) {
    const std::size_t n = state.agent_count();
    egress.assign(n, 0.0);
    transit.assign(n, 0.0);
    delivery.assign(n, 0.0);
    blacklist_group.assign(n, -1);
    std::map<std::pair<double, std::size_t>, std::int32_t> groups;
    std::vector<std::vector<char>> member;  // [group][source]
    for (const auto& [id, spec] : policy.entries()) {
      if (id >= n) throw LookupError("policy names unknown agent");
      if (spec.filters_egress()) egress[id] = spec.e_out;
      if (spec.filters_transit()) transit[id] = spec.e_in;
      if (spec.filters_delivery()) delivery[id] = spec.e_in;
      if (spec.blacklists()) {
        const auto key = std::make_pair(spec.blacklist_threshold, spec.size_cap);
        auto [it, inserted] =
            groups.emplace(key, static_cast<std::int32_t>(groups.size()));
        if (inserted) {
          std::vector<char> m(n, 0);
          for (AgentId a : blacklist_set(state, key.first, key.second)) {
            m[a] = 1;
            any_blacklisted = true;
          }
          member.push_back(std::move(m));
        }
        blacklist_group[id] = it->second;
      }
    }
    group_count = member.size();
    signature.assign(n, 0);
    std::map<std::vector<char>, std::uint32_t> seen;
    std::vector<char> pattern(group_count);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t g = 0; g < group_count; ++g) pattern[g] = member[g][a];
      auto [it, inserted] =
          seen.emplace(pattern, static_cast<std::uint32_t>(seen.size()));
      if (inserted) patterns.insert(patterns.end(), pattern.begin(), pattern.end());
      signature[a] = it->second;
    }
  }

  // True when some agent actually filters or blacklists someone.
  bool active() const {
    auto positive = [](double e) { return e > 0.0; };
    return any_blacklisted ||
           std::any_of(egress.begin(), egress.end(), positive) ||
           std::any_of(transit.begin(), transit.end(), positive) ||
           std::any_of(delivery.begin(), delivery.end(), positive);
  }

  // A single-homed agent can be folded into its neighbour when it does
  // nothing to traffic it receives or emits. Transit settings are moot for it.
  bool inert(AgentId a) const {
    return egress[a] == 0.0 && delivery[a] == 0.0 && blacklist_group[a] < 0;
  }

  bool drops(AgentId at, std::uint32_t sig) const {
    const std::int32_t g = blacklist_group[at];
    return g >= 0 && patterns[sig * group_count + static_cast<std::size_t>(g)];
  }
};

// The agents the BFS runs over, the folded single-homed agents hanging off
// them, and the list of source units.
struct Layout {
  std::vector<AgentId> core;          // core index -> agent
  std::vector<std::int32_t> index;    // agent -> core index, -1 if folded
  std::vector<double> pop;            // by core index
  std::vector<double> leaf_pop;       // folded population per core index
  std::vector<std::vector<AgentId>> leaves;  // folded agents per core index

  // A unit emits from `root` with distances offset by `hop` (1 for a bundle
  // of folded agents sharing a blacklist signature). good/wicked are the
  // emission weights: the sums of (1 - w) * pop and w * pop.
  struct Unit {
    std::uint32_t root = 0;
    std::uint32_t hop = 0;
    std::uint32_t sig = 0;
    double good = 0.0;
    double wicked = 0.0;
    double egress = 0.0;
    std::uint64_t salt = 0;
  };
  std::vector<Unit> units;

  Layout(const NetworkState& state, const PolicyTable& table,
         const std::vector<double>& all_pop, std::uint64_t tie_seed) {
    const std::size_t n = state.agent_count();
    index.assign(n, -1);
    std::vector<char> folded(n, 0);
    if (n >= 3) {
      for (const Agent& a : state.agents()) {
        folded[a.id] = a.links.size() == 1 &&
                       state.agent(a.links[0]).links.size() > 1 &&
                       table.inert(a.id);
      }
    }
    for (AgentId a = 0; a < n; ++a) {
      if (folded[a]) continue;
      index[a] = static_cast<std::int32_t>(core.size());
      core.push_back(a);
    }
    const std::size_t m = core.size();
    pop.resize(m);
    leaf_pop.assign(m, 0.0);
    leaves.resize(m);
    for (std::size_t k = 0; k < m; ++k) pop[k] = all_pop[core[k]];
    for (AgentId a = 0; a < n; ++a) {
      if (!folded[a]) continue;
      const auto k = static_cast<std::size_t>(index[state.agent(a).links[0]]);
      leaf_pop[k] += all_pop[a];
      leaves[k].push_back(a);
    }

    // Bundles follow their core node so they reuse its tree.
    for (std::size_t k = 0; k < m; ++k) {
      const Agent& a = state.agent(core[k]);
      Unit u;
      u.root = static_cast<std::uint32_t>(k);
      u.sig = table.signature[a.id];
      u.good = (1.0 - a.wickedness_rate) * all_pop[a.id];
      u.wicked = a.wickedness_rate * all_pop[a.id];
      u.egress = table.egress[a.id];
      u.salt = tie_salt(tie_seed, a.links.size() == 1 ? a.links[0] : a.id);
      units.push_back(u);

      std::map<std::uint32_t, Unit> bundles;
      for (AgentId l : leaves[k]) {
        const double w = state.agent(l).wickedness_rate;
        Unit& b = bundles[table.signature[l]];
        b.good += (1.0 - w) * all_pop[l];
        b.wicked += w * all_pop[l];
      }
      for (auto& [sig, b] : bundles) {
        b.root = static_cast<std::uint32_t>(k);
        b.hop = 1;
        b.sig = sig;
        b.salt = tie_salt(tie_seed, core[k]);
        units.push_back(b);
      }
    }
  }
};

// Accumulators one block of units writes into, by core index.
struct Partial {
  struct Slot {
    FlowAccount flow;
    // Per unit of a folded agent's population, what reaches the folded
    // agents of this core node: good and wicked.
    double leaf_good = 0.0, leaf_wicked = 0.0;
  };
  std::vector<Slot> slot;
  // Unit volume a folded agent at each core node emits beyond its siblings;
  // 0 where no bundle ran in this block.
  std::vector<double> bundle_reach;
  double emitted = 0.0;

  explicit Partial(std::size_t m) : slot(m), bundle_reach(m) {}

  void merge_into(Partial& total) const {
    for (std::size_t i = 0; i < slot.size(); ++i) {
      const Slot& x = slot[i];
      Slot& t = total.slot[i];
      t.flow.delivered_good += x.flow.delivered_good;
      t.flow.delivered_wicked += x.flow.delivered_wicked;
      t.flow.transited += x.flow.transited;
      t.flow.dropped_good_here += x.flow.dropped_good_here;
      t.flow.dropped_wicked_here += x.flow.dropped_wicked_here;
      t.leaf_good += x.leaf_good;
      t.leaf_wicked += x.leaf_wicked;
      if (bundle_reach[i] != 0.0) total.bundle_reach[i] = bundle_reach[i];
    }
    total.emitted += emitted;
  }
};

class SourceSweep {
 public:
  SourceSweep(const Csr& graph, const Layout& layout, const PolicyTable& policy,
              bool policy_active, const TrafficOptions& options)
      : graph_(graph),
        layout_(layout),
        policy_(policy),
        policy_active_(policy_active),
        once_(options.transit_filtering == TransitFiltering::once_per_path),
        tree_(graph.size()),
        inverse_square_(graph.size() + 3, 0.0),
        pops_(graph.size()),
        own_(graph.size()),
        beyond_(graph.size()),
        leaf_share_(graph.size()),
        fwd_g_(graph.size()),
        fwd_w_(graph.size()),
        fwd_filtered_(graph.size()) {
    for (std::size_t d = 1; d < inverse_square_.size(); ++d) {
      inverse_square_[d] = 1.0 / (static_cast<double>(d) * static_cast<double>(d));
    }
    for (std::size_t k = 0; k < pops_.size(); ++k) {
      pops_[k] = {layout.pop[k], layout.leaf_pop[k]};
    }
  }

  void run(const Layout::Unit& unit, Partial& out) {
    const std::size_t m = graph_.size();
    if (unit.root != built_root_ || unit.salt != built_salt_) {
      if (tree_.build(graph_, unit.root, unit.salt) != m) {
        throw StructuralError("agent " + std::to_string(layout_.core[unit.root]) +
                              " cannot reach every other agent");
      }
      built_root_ = unit.root;
      built_salt_ = unit.salt;
    }
    // 1/d^2 at hop distance d from the unit; 0 at the unit itself.
    const double* inv = inverse_square_.data() + unit.hop;

    std::fill(beyond_.begin(), beyond_.end(), 0.0);
    if (!policy_active_) {
      sweep_inactive(unit, inv, out);
    } else {
      sweep_active(unit, inv, out);
    }
  }

 private:
  // Per position, with v the node there and d its depth: own is the unit
  // volume to v itself, leaf_share the factor turning a folded agent's
  // population at v into its volume, and beyond the volume passing through
  // v (its subtree plus its folded agents), summed leaves-up.

  // Without filtering every volume arrives whole, so the ledger is written
  // in the same leaves-up pass.
  void sweep_inactive(const Layout::Unit& unit, const double* inv, Partial& out) {
    const std::size_t m = graph_.size();
    const std::uint32_t* order = tree_.order.data();
    const std::uint32_t* depth = tree_.depth.data();
    const std::uint32_t* pp = tree_.parent_pos.data();
    double* beyond = beyond_.data();
    const double good = unit.good;
    const double wicked = unit.wicked;
    const double total = good + wicked;
    for (std::size_t i = m - 1; i >= 1; --i) {
      const std::uint32_t v = order[i];
      const std::uint32_t d = depth[i];
      const auto [pop, leaf_pop] = pops_[v];
      const double own = pop * inv[d];
      const double share = inv[d + 1];
      const double through = beyond[i] + leaf_pop * share;
      beyond[pp[i]] += through + own;
      Partial::Slot& a = out.slot[v];
      a.flow.transited += total * (through + own);
      a.flow.delivered_good += good * own;
      a.flow.delivered_wicked += wicked * own;
      a.leaf_good += good * share;
      a.leaf_wicked += wicked * share;
    }
    const double reach = finish_root(unit, inv, out);
    Partial::Slot& r = out.slot[unit.root];
    if (unit.hop == 0) {
      r.leaf_good += good;
      r.leaf_wicked += wicked;
    } else {
      // A bundle delivers to its own core node; its siblings are settled
      // separately.
      const double own = pops_[unit.root].first * inv[0];
      r.flow.transited += total * (beyond[0] + own);
      r.flow.delivered_good += good * own;
      r.flow.delivered_wicked += wicked * own;
    }
    book_source(unit, reach, out);
  }

  // Emission at the unit's root, once beyond_ is complete. Returns the unit
  // volume the unit emits.
  double finish_root(const Layout::Unit& unit, const double* inv, Partial& out) {
    const auto [pop, leaf_pop] = pops_[unit.root];
    // A bundle's siblings are settled separately.
    const double root_share = unit.hop == 1 ? 0.0 : inv[1];
    const double reach = beyond_[0] + pop * inv[0] + leaf_pop * root_share;
    out.emitted += (unit.good + unit.wicked) * reach;
    if (unit.hop == 1) out.bundle_reach[unit.root] = reach;
    return reach;
  }

  void book_source(const Layout::Unit& unit, double reach, Partial& out) {
    if (unit.hop != 0) return;
    FlowAccount& src = out.slot[unit.root].flow;
    src.dropped_wicked_here += unit.wicked * reach * unit.egress;
    src.transited += (unit.good + unit.wicked * (1.0 - unit.egress)) * reach;
  }

  // Survival factors per unit of emitted good / wicked volume, and the ledger
  // entries, walking root-down.
  void sweep_active(const Layout::Unit& unit, const double* inv, Partial& out) {
    const std::size_t m = graph_.size();
    const auto& order = tree_.order;
    const auto& depth = tree_.depth;
    const auto& pp = tree_.parent_pos;
    for (std::size_t i = m - 1; i >= 1; --i) {
      const auto [pop, leaf_pop] = pops_[order[i]];
      own_[i] = pop * inv[depth[i]];
      leaf_share_[i] = inv[depth[i] + 1];
      beyond_[i] += leaf_pop * leaf_share_[i];
      beyond_[pp[i]] += beyond_[i] + own_[i];
    }
    own_[0] = pops_[unit.root].first * inv[0];
    leaf_share_[0] = unit.hop == 1 ? 0.0 : inv[1];
    const double reach = finish_root(unit, inv, out);

    std::size_t first = 0;
    if (unit.hop == 0) {
      fwd_g_[0] = 1.0;
      fwd_w_[0] = 1.0 - unit.egress;
      fwd_filtered_[0] = 0;
      out.slot[unit.root].leaf_good += unit.good;
      out.slot[unit.root].leaf_wicked += unit.wicked * fwd_w_[0];
      first = 1;
    }
    for (std::size_t i = first; i < m; ++i) {
      const std::uint32_t v = order[i];
      const AgentId agent = layout_.core[v];
      double ag = 1.0, aw = 1.0;
      char af = 0;
      if (i > 0) {
        ag = fwd_g_[pp[i]];
        aw = fwd_w_[pp[i]];
        af = fwd_filtered_[pp[i]];
      }
      const bool drop = policy_.drops(agent, unit.sig);
      const bool gate = !(once_ && af);
      const double transit_e = policy_.transit[agent];
      const double delivery_e = policy_.delivery[agent];
      Partial::Slot& slot = out.slot[v];
      FlowAccount& a = slot.flow;

      // Flows passing through v.
      const double tg = ag * unit.good * beyond_[i];
      const double tw = aw * unit.wicked * beyond_[i];
      a.transited += tg + tw;
      if (drop) {
        a.dropped_good_here += tg;
        a.dropped_wicked_here += tw;
        fwd_g_[i] = 0.0;
        fwd_w_[i] = 0.0;
        fwd_filtered_[i] = af;
      } else if (transit_e > 0.0 && gate) {
        a.dropped_wicked_here += tw * transit_e;
        fwd_g_[i] = ag;
        fwd_w_[i] = aw * (1.0 - transit_e);
        fwd_filtered_[i] = 1;
      } else {
        fwd_g_[i] = ag;
        fwd_w_[i] = aw;
        fwd_filtered_[i] = af;
      }
      slot.leaf_good += fwd_g_[i] * unit.good * leaf_share_[i];
      slot.leaf_wicked += fwd_w_[i] * unit.wicked * leaf_share_[i];

      // The flow terminating at v.
      const double dg = ag * unit.good * own_[i];
      double dw = aw * unit.wicked * own_[i];
      a.transited += dg + dw;
      if (drop) {
        a.dropped_good_here += dg;
        a.dropped_wicked_here += dw;
        continue;
      }
      if (delivery_e > 0.0 && gate) {
        a.dropped_wicked_here += dw * delivery_e;
        dw *= 1.0 - delivery_e;
      }
      a.delivered_good += dg;
      a.delivered_wicked += dw;
    }
    book_source(unit, reach, out);
  }

  const Csr& graph_;
  const Layout& layout_;
  const PolicyTable& policy_;
  bool policy_active_;
  bool once_;
  Tree tree_;
  std::uint32_t built_root_ = ~std::uint32_t{0};
  std::uint64_t built_salt_ = 0;
  std::vector<double> inverse_square_;
  std::vector<std::pair<double, double>> pops_;  // own and folded, by node
  std::vector<double> own_, beyond_, leaf_share_;
  std::vector<double> fwd_g_, fwd_w_;
  std::vector<char> fwd_filtered_;
};

// Books everything involving folded agents once the source sweeps are merged:
// what they receive from the sweeps, what they emit, and the flows between
// siblings on the same core node, which pass through that node only.
void settle_folded(const NetworkState& state, const Layout& layout,
                   const PolicyTable& table, const std::vector<double>& all_pop,
                   Partial& total, std::vector<FlowAccount>& per_agent) {
  for (std::size_t k = 0; k < layout.core.size(); ++k) {
    const auto& leaves = layout.leaves[k];
    if (leaves.empty()) continue;
    const AgentId hub = layout.core[k];
    const double pool = layout.leaf_pop[k];

    // Sibling traffic per signature: sums of good * (pool - pop) / 4 over
    // the senders, and the survival factors at the hub.
    struct Group {
      double good = 0.0, wicked = 0.0;       // emission weights
      double out_good = 0.0, out_wicked = 0.0;  // volume to siblings
      double keep_good = 1.0, keep_wicked = 1.0;
    };
    std::map<std::uint32_t, Group> groups;
    for (AgentId l : leaves) {
      const double w = state.agent(l).wickedness_rate;
      const double p = all_pop[l];
      Group& g = groups[table.signature[l]];
      g.good += (1.0 - w) * p;
      g.wicked += w * p;
      g.out_good += (1.0 - w) * p * (pool - p) / 4.0;
      g.out_wicked += w * p * (pool - p) / 4.0;
    }
    FlowAccount& h = per_agent[hub];
    double sum_good = 0.0, sum_wicked = 0.0;
    for (auto& [sig, g] : groups) {
      h.transited += g.out_good + g.out_wicked;
      if (table.drops(hub, sig)) {
        h.dropped_good_here += g.out_good;
        h.dropped_wicked_here += g.out_wicked;
        g.keep_good = 0.0;
        g.keep_wicked = 0.0;
      } else {
        h.dropped_wicked_here += g.out_wicked * table.transit[hub];
        g.keep_wicked = 1.0 - table.transit[hub];
      }
      sum_good += g.keep_good * g.good;
      sum_wicked += g.keep_wicked * g.wicked;
    }

    for (AgentId l : leaves) {
      const double w = state.agent(l).wickedness_rate;
      const double p = all_pop[l];
      const Group& own = groups[table.signature[l]];
      FlowAccount& a = per_agent[l];
      const double dg = p * total.slot[k].leaf_good +
                        p * (sum_good - own.keep_good * (1.0 - w) * p) / 4.0;
      const double dw = p * total.slot[k].leaf_wicked +
                        p * (sum_wicked - own.keep_wicked * w * p) / 4.0;
      a.delivered_good += dg;
      a.delivered_wicked += dw;
      a.transited += dg + dw;
      const double emitted = p * (total.bundle_reach[k] + (pool - p) / 4.0);
      a.transited += emitted;
      total.emitted += p * (pool - p) / 4.0;
    }
  }
}

std::vector<AgentId> bfs_parents(const NetworkState& state, AgentId source,
                                 std::uint64_t tie_seed,
                                 std::vector<std::int32_t>* dist_out) {
  const std::size_t n = state.agent_count();
  std::vector<AgentId> ids(n);
  std::vector<std::int32_t> index(n);
  for (AgentId a = 0; a < n; ++a) {
    ids[a] = a;
    index[a] = static_cast<std::int32_t>(a);
  }
  const Csr g(state, ids, index, tie_seed);
  Tree tree(n);
  const std::size_t reached =
      tree.build(g, source, tie_salt(tie_seed, tie_root(state, source)));
  std::vector<AgentId> parent(n, source);
  for (std::size_t i = 1; i < reached; ++i) {
    parent[tree.order[i]] = tree.order[tree.parent_pos[i]];
  }
  if (dist_out) *dist_out = tree.dist;
  return parent;
}

}  // namespace

AgentId tie_root(const NetworkState& state, AgentId source) {
  const Agent& a = state.agent(source);
  return a.links.size() == 1 ? a.links[0] : source;
}

std::vector<AgentId> shortest_path(const NetworkState& state, AgentId a,
                                   AgentId b, std::uint64_t tie_seed) {
  state.agent(a);
  state.agent(b);
  std::vector<std::int32_t> dist;
  const auto parent = bfs_parents(state, a, tie_seed, &dist);
  if (dist[b] < 0) {
    throw StructuralError("no path between agents " + std::to_string(a) +
                          " and " + std::to_string(b));
  }
  std::vector<AgentId> path{b};
  for (AgentId v = b; v != a; v = parent[v]) path.push_back(parent[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::size_t hop_distance(const NetworkState& state, AgentId a, AgentId b) {
  state.agent(a);
  state.agent(b);
  std::vector<std::int32_t> dist;
  bfs_parents(state, a, 0, &dist);
  if (dist[b] < 0) {
    throw StructuralError("no path between agents " + std::to_string(a) +
                          " and " + std::to_string(b));
  }
  return static_cast<std::size_t>(dist[b]);
}

double gravity_flow(const NetworkState& state, AgentId a, AgentId b) {
  if (a == b) throw PreconditionError("gravity_flow needs distinct agents");
  const auto d = static_cast<double>(hop_distance(state, a, b));
  return served_population(state, a) * served_population(state, b) / (d * d);
}

TrafficReport compute_traffic(const NetworkState& state,
                              const PolicyAssignment& policy,
                              const TrafficOptions& options) {
  const std::size_t n = state.agent_count();
  TrafficReport report;
  report.per_agent.assign(n, FlowAccount{});
  if (n < 2) return report;

  const std::vector<double> pop = served_populations(state);
  const PolicyTable table(state, policy);
  const bool active = table.active();
  const Layout layout(state, table, pop, options.tie_seed);
  const Csr graph(state, layout.core, layout.index, options.tie_seed);
  const std::size_t m = layout.core.size();

  const std::size_t blocks = (layout.units.size() + kBlockSize - 1) / kBlockSize;
  unsigned workers = options.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));

  Partial total(m);
  std::atomic<std::size_t> next_block{0};
  std::mutex merge_mutex;
  std::map<std::size_t, std::unique_ptr<Partial>> pending;
  std::size_t next_merge = 0;
  std::exception_ptr failure;

  auto work = [&] {
    try {
      SourceSweep sweep(graph, layout, table, active, options);
      for (;;) {
        const std::size_t b = next_block.fetch_add(1);
        if (b >= blocks) break;
        auto part = std::make_unique<Partial>(m);
        const std::size_t end = std::min(layout.units.size(), (b + 1) * kBlockSize);
        for (std::size_t u = b * kBlockSize; u < end; ++u) {
          sweep.run(layout.units[u], *part);
        }
        std::lock_guard lock(merge_mutex);
        pending.emplace(b, std::move(part));
        for (auto it = pending.find(next_merge); it != pending.end();
             it = pending.find(next_merge)) {
          it->second->merge_into(total);
          pending.erase(it);
          ++next_merge;
        }
      }
    } catch (...) {
      std::lock_guard lock(merge_mutex);
      if (!failure) failure = std::current_exception();
      next_block.store(blocks);
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t k = 0; k < m; ++k) report.per_agent[layout.core[k]] = total.slot[k].flow;
  settle_folded(state, layout, table, pop, total, report.per_agent);
  report.total_emitted = total.emitted;
  for (const FlowAccount& a : report.per_agent) {
    report.total_delivered_good += a.delivered_good;
    report.total_delivered_wicked += a.delivered_wicked;
    report.total_dropped_good += a.dropped_good_here;
    report.total_dropped_wicked += a.dropped_wicked_here;
  }
  return report;
}

double wicked_rate(const TrafficReport& report) {
  const double total = report.total_delivered_good + report.total_delivered_wicked;
  return total > 0.0 ? report.total_delivered_wicked / total : 0.0;
}

double wicked_rate(const TrafficReport& report, AgentId id) {
  if (id >= report.per_agent.size()) {
    throw LookupError("agent " + std::to_string(id) + " not in report");
  }
  const FlowAccount& a = report.per_agent[id];
  const double total = a.delivered_good + a.delivered_wicked;
  return total > 0.0 ? a.delivered_wicked / total : 0.0;
}

double wicked_rate(const TrafficReport& report, std::span<const AgentId> group) {
  double good = 0.0;
  double wicked = 0.0;
  for (AgentId id : group) {
    if (id >= report.per_agent.size()) {
      throw LookupError("agent " + std::to_string(id) + " not in report");
    }
    good += report.per_agent[id].delivered_good;
    wicked += report.per_agent[id].delivered_wicked;
  }
  return good + wicked > 0.0 ? wicked / (good + wicked) : 0.0;
}

std::vector<double> normalized_transit(const TrafficReport& report) {
  double total = 0.0;
  for (const FlowAccount& a : report.per_agent) total += a.transited;
  std::vector<double> share(report.per_agent.size(), 0.0);
  if (total > 0.0) {
    for (std::size_t i = 0; i < share.size(); ++i) {
      share[i] = report.per_agent[i].transited / total;
    }
  }
  return share;
}

}  // namespace asim
