#include "mpot/network_simplex.hpp"

#include <chrono>
#include <limits>
#include <string>

#include "mpot/error.hpp"

namespace mpot {
namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
constexpr signed char kUp = 1;     // tree arc points from node to parent
constexpr signed char kDown = -1;  // tree arc points from parent to node
constexpr signed char kTree = 0;
constexpr signed char kLower = 1;

// Spanning tree basis rooted at an artificial node. Arcs [0, m) are the
// network's; arc m + u is the artificial arc between node u and the root.
// The tree is kept as parent pointers plus a preorder thread with subtree
// sizes and last successors, so subtrees can be walked and re-rooted
// without adjacency lists.
class Simplex {
 public:
  Simplex(const FlowNetwork& net, const SolverOptions& options)
      : net_(net),
        n_(net.node_count),
        m_(net.arc_count()),
        root_(net.node_count),
        pricing_(m_, options.block_size > 0 ? static_cast<std::size_t>(options.block_size)
                                            : BlockSearch::default_block_size(m_)),
        validate_(options.validate_each_pivot) {
    block_size_ = options.block_size > 0 ? options.block_size
                                         : static_cast<std::int64_t>(BlockSearch::default_block_size(m_));
    init();
  }

  FlowSolution run() {
    const auto start = std::chrono::steady_clock::now();
    std::int64_t pivots = 0;
    const std::int64_t* cost = net_.costs.data();
    const NodeId* tail = net_.tails.data();
    const NodeId* head = net_.heads.data();
    auto reduced = [&](std::size_t e) -> std::int64_t {
      return state_[e] * (cost[e] + pi_[static_cast<std::size_t>(tail[e])] - pi_[static_cast<std::size_t>(head[e])]);
    };
    while (auto entering = pricing_.next(reduced)) {
      in_arc_ = *entering;
      find_join();
      if (!find_leaving()) throw Error(ErrorKind::Infeasible, "unbounded pivot on an uncapacitated network");
      change_flow();
      update_tree();
      update_potentials();
      ++pivots;
      if (validate_) audit();
    }

    FlowSolution sol;
    sol.flow.assign(flow_.begin(), flow_.begin() + static_cast<std::ptrdiff_t>(m_));
    sol.potential.assign(pi_.begin(), pi_.begin() + n_);
    sol.status = SolveStatus::Optimal;
    for (NodeId u = 0; u < n_; ++u) {
      if (flow_[m_ + static_cast<std::size_t>(u)] != 0) sol.status = SolveStatus::Infeasible;
    }
    for (std::size_t e = 0; e < m_; ++e) sol.objective += net_.costs[e] * flow_[e];
    sol.stats.pivots = pivots;
    sol.stats.block_size = block_size_;
    sol.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return sol;
  }

 private:
  std::size_t idx(NodeId u) const noexcept { return static_cast<std::size_t>(u); }

  void init() {
    const auto nodes = idx(n_) + 1;
    parent_.assign(nodes, -1);
    pred_.assign(nodes, 0);
    thread_.assign(nodes, 0);
    rev_thread_.assign(nodes, 0);
    succ_num_.assign(nodes, 0);
    last_succ_.assign(nodes, 0);
    pred_dir_.assign(nodes, kUp);
    pi_.assign(nodes, 0);
    flow_.assign(m_ + idx(n_), 0);
    state_.assign(m_, kLower);

    // Any path through the real network costs at most max_arc * (n - 1), so
    // routing a unit through the root must cost more than that.
    std::int64_t max_arc = 0;
    for (auto c : net_.costs) max_arc = std::max(max_arc, c);
    if (__builtin_mul_overflow(max_arc, static_cast<std::int64_t>(n_) + 1, &art_cost_) ||
        __builtin_add_overflow(art_cost_, 1, &art_cost_) || art_cost_ > kInf / 4) {
      throw Error(ErrorKind::Overflow, "artificial arc cost overflows");
    }

    parent_[idx(root_)] = -1;
    thread_[idx(root_)] = 0;
    rev_thread_[0] = root_;
    succ_num_[idx(root_)] = n_ + 1;
    last_succ_[idx(root_)] = root_ - 1;
    if (n_ == 0) {
      thread_[idx(root_)] = root_;
      rev_thread_[idx(root_)] = root_;
      last_succ_[idx(root_)] = root_;
    }
    for (NodeId u = 0; u < n_; ++u) {
      const auto e = m_ + idx(u);
      parent_[idx(u)] = root_;
      pred_[idx(u)] = e;
      thread_[idx(u)] = u + 1;
      rev_thread_[idx(u) + 1] = u;
      succ_num_[idx(u)] = 1;
      last_succ_[idx(u)] = u;
      const auto s = net_.supply[idx(u)];
      if (s >= 0) {
        pred_dir_[idx(u)] = kUp;
        pi_[idx(u)] = 0;
        flow_[e] = s;
      } else {
        pred_dir_[idx(u)] = kDown;
        pi_[idx(u)] = art_cost_;
        flow_[e] = -s;
      }
    }
  }

  NodeId arc_source(std::size_t e) const noexcept { return net_.tails[e]; }
  NodeId arc_target(std::size_t e) const noexcept { return net_.heads[e]; }

  void find_join() {
    NodeId u = arc_source(in_arc_);
    NodeId v = arc_target(in_arc_);
    while (u != v) {
      if (succ_num_[idx(u)] < succ_num_[idx(v)]) {
        u = parent_[idx(u)];
      } else {
        v = parent_[idx(v)];
      }
    }
    join_ = u;
  }

  // Ratio test along the pivot cycle. Ties on the first path keep the
  // earliest arc, ties on the second path the latest, which selects the last
  // blocking arc in cycle orientation and keeps the basis strongly feasible.
  bool find_leaving() {
    first_ = arc_source(in_arc_);
    second_ = arc_target(in_arc_);
    delta_ = kInf;
    int result = 0;
    for (NodeId u = first_; u != join_; u = parent_[idx(u)]) {
      if (pred_dir_[idx(u)] == kUp) {
        const auto d = flow_[pred_[idx(u)]];
        if (d < delta_) {
          delta_ = d;
          u_out_ = u;
          result = 1;
        }
      }
    }
    for (NodeId u = second_; u != join_; u = parent_[idx(u)]) {
      if (pred_dir_[idx(u)] == kDown) {
        const auto d = flow_[pred_[idx(u)]];
        if (d <= delta_) {
          delta_ = d;
          u_out_ = u;
          result = 2;
        }
      }
    }
    if (result == 1) {
      u_in_ = first_;
      v_in_ = second_;
    } else {
      u_in_ = second_;
      v_in_ = first_;
    }
    return result != 0;
  }

  void change_flow() {
    if (delta_ > 0) {
      flow_[in_arc_] += delta_;
      for (NodeId u = arc_source(in_arc_); u != join_; u = parent_[idx(u)]) {
        flow_[pred_[idx(u)]] -= pred_dir_[idx(u)] * delta_;
      }
      for (NodeId u = arc_target(in_arc_); u != join_; u = parent_[idx(u)]) {
        flow_[pred_[idx(u)]] += pred_dir_[idx(u)] * delta_;
      }
    }
    state_[in_arc_] = kTree;
    const auto out = pred_[idx(u_out_)];
    if (out < m_) state_[out] = kLower;
  }

  // Detaches the subtree hanging below the leaving arc, re-roots it at
  // u_in and hangs it under v_in, patching thread order, subtree sizes and
  // last successors along the way.
  void update_tree() {
    const NodeId old_rev_thread = rev_thread_[idx(u_out_)];
    const NodeId old_succ_num = succ_num_[idx(u_out_)];
    const NodeId old_last_succ = last_succ_[idx(u_out_)];
    v_out_ = parent_[idx(u_out_)];

    if (u_in_ == u_out_) {
      parent_[idx(u_in_)] = v_in_;
      pred_[idx(u_in_)] = in_arc_;
      pred_dir_[idx(u_in_)] = u_in_ == arc_source(in_arc_) ? kUp : kDown;
      if (thread_[idx(v_in_)] != u_out_) {
        NodeId after = thread_[idx(old_last_succ)];
        thread_[idx(old_rev_thread)] = after;
        rev_thread_[idx(after)] = old_rev_thread;
        after = thread_[idx(v_in_)];
        thread_[idx(v_in_)] = u_out_;
        rev_thread_[idx(u_out_)] = v_in_;
        thread_[idx(old_last_succ)] = after;
        rev_thread_[idx(after)] = old_last_succ;
      }
    } else {
      // when old_rev_thread == v_in, join and v_out coincide
      const NodeId thread_continue =
          old_rev_thread == v_in_ ? thread_[idx(old_last_succ)] : thread_[idx(v_in_)];

      // walk the stem from u_in up to u_out, reversing parent links
      NodeId stem = u_in_;
      NodeId par_stem = v_in_;
      NodeId last = last_succ_[idx(u_in_)];
      NodeId after = thread_[idx(last)];
      thread_[idx(v_in_)] = u_in_;
      dirty_revs_.clear();
      dirty_revs_.push_back(v_in_);
      while (stem != u_out_) {
        const NodeId next_stem = parent_[idx(stem)];
        thread_[idx(last)] = next_stem;
        dirty_revs_.push_back(last);

        // cut the stem's subtree out of the thread
        const NodeId before = rev_thread_[idx(stem)];
        thread_[idx(before)] = after;
        rev_thread_[idx(after)] = before;

        parent_[idx(stem)] = par_stem;
        par_stem = stem;
        stem = next_stem;

        last = last_succ_[idx(stem)] == last_succ_[idx(par_stem)] ? rev_thread_[idx(par_stem)]
                                                                    : last_succ_[idx(stem)];
        after = thread_[idx(last)];
      }
      parent_[idx(u_out_)] = par_stem;
      thread_[idx(last)] = thread_continue;
      rev_thread_[idx(thread_continue)] = last;
      last_succ_[idx(u_out_)] = last;

      if (old_rev_thread != v_in_) {
        thread_[idx(old_rev_thread)] = after;
        rev_thread_[idx(after)] = old_rev_thread;
      }
      for (const NodeId u : dirty_revs_) rev_thread_[idx(thread_[idx(u)])] = u;

      // pred arcs, directions, sizes and last successors along the stem
      NodeId tmp_sc = 0;
      const NodeId tmp_ls = last_succ_[idx(u_out_)];
      for (NodeId u = u_out_, p = parent_[idx(u)]; u != u_in_; u = p, p = parent_[idx(u)]) {
        pred_[idx(u)] = pred_[idx(p)];
        pred_dir_[idx(u)] = static_cast<signed char>(-pred_dir_[idx(p)]);
        tmp_sc += succ_num_[idx(u)] - succ_num_[idx(p)];
        succ_num_[idx(u)] = tmp_sc;
        last_succ_[idx(p)] = tmp_ls;
      }
      pred_[idx(u_in_)] = in_arc_;
      pred_dir_[idx(u_in_)] = u_in_ == arc_source(in_arc_) ? kUp : kDown;
      succ_num_[idx(u_in_)] = old_succ_num;
    }

    const NodeId up_limit_out = last_succ_[idx(join_)] == v_in_ ? join_ : -1;
    const NodeId last_succ_out = last_succ_[idx(u_out_)];
    for (NodeId u = v_in_; u != -1 && last_succ_[idx(u)] == v_in_; u = parent_[idx(u)]) {
      last_succ_[idx(u)] = last_succ_out;
    }
    if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
      for (NodeId u = v_out_; u != up_limit_out && last_succ_[idx(u)] == old_last_succ; u = parent_[idx(u)]) {
        last_succ_[idx(u)] = old_rev_thread;
      }
    } else if (last_succ_out != old_last_succ) {
      for (NodeId u = v_out_; u != up_limit_out && last_succ_[idx(u)] == old_last_succ; u = parent_[idx(u)]) {
        last_succ_[idx(u)] = last_succ_out;
      }
    }

    for (NodeId u = v_in_; u != join_; u = parent_[idx(u)]) succ_num_[idx(u)] += old_succ_num;
    for (NodeId u = v_out_; u != join_; u = parent_[idx(u)]) succ_num_[idx(u)] -= old_succ_num;
  }

  // Restores zero reduced cost on the entering arc by shifting either the
  // moved subtree or its complement, whichever is smaller.
  void update_potentials() {
    const std::int64_t sigma =
        pi_[idx(v_in_)] - pi_[idx(u_in_)] - pred_dir_[idx(u_in_)] * net_.costs[in_arc_];
    if (sigma == 0) return;
    const NodeId end = thread_[idx(last_succ_[idx(u_in_)])];
    if (2 * succ_num_[idx(u_in_)] <= n_ + 1) {
      for (NodeId u = u_in_; u != end; u = thread_[idx(u)]) pi_[idx(u)] += sigma;
    } else {
      for (NodeId u = end; u != u_in_; u = thread_[idx(u)]) pi_[idx(u)] -= sigma;
    }
  }

  // Full consistency check of the basis; only run when validation is on.
  void audit() const {
    auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidArgument, "simplex audit: " + what); };
    const auto nodes = idx(n_) + 1;
    std::vector<char> seen(nodes, 0);
    std::vector<NodeId> order;
    order.reserve(nodes);
    NodeId u = root_;
    for (std::size_t k = 0; k < nodes; ++k) {
      if (seen[idx(u)]) fail("thread revisits a node");
      seen[idx(u)] = 1;
      order.push_back(u);
      if (rev_thread_[idx(thread_[idx(u)])] != u) fail("rev_thread mismatch");
      u = thread_[idx(u)];
    }
    if (u != root_) fail("thread is not a single cycle");
    std::vector<std::size_t> pos(nodes);
    for (std::size_t k = 0; k < nodes; ++k) pos[idx(order[k])] = k;
    for (NodeId v = 0; v <= n_; ++v) {
      const auto sz = static_cast<std::size_t>(succ_num_[idx(v)]);
      const auto p = pos[idx(v)];
      if (p + sz - 1 >= nodes || order[p + sz - 1] != last_succ_[idx(v)]) fail("last_succ/succ_num mismatch");
      for (std::size_t k = p + 1; k < p + sz; ++k) {
        NodeId w = order[k];
        while (w != -1 && w != v) w = parent_[idx(w)];
        if (w != v) fail("thread block is not a subtree");
      }
      if (v == root_) continue;
      const auto e = pred_[idx(v)];
      const NodeId par = parent_[idx(v)];
      if (pos[idx(par)] >= p) fail("parent after child in thread");
      if (e < m_) {
        const bool up = arc_source(e) == v && arc_target(e) == par;
        const bool down = arc_source(e) == par && arc_target(e) == v;
        if (!(pred_dir_[idx(v)] == kUp ? up : down)) fail("pred arc does not join node and parent");
        if (state_[e] != kTree) fail("tree arc not marked as tree");
        if (net_.costs[e] + pi_[idx(arc_source(e))] - pi_[idx(arc_target(e))] != 0) fail("tree arc reduced cost");
      } else {
        if (e != m_ + idx(v) || par != root_) fail("artificial arc misplaced");
      }
      if (flow_[e] < 0) fail("negative flow");
    }
  }

  const FlowNetwork& net_;
  NodeId n_;
  std::size_t m_;
  NodeId root_;
  BlockSearch pricing_;
  bool validate_;
  std::int64_t block_size_ = 0;
  std::int64_t art_cost_ = 0;

  std::vector<NodeId> parent_;
  std::vector<std::size_t> pred_;
  std::vector<NodeId> thread_;
  std::vector<NodeId> rev_thread_;
  std::vector<NodeId> succ_num_;
  std::vector<NodeId> last_succ_;
  std::vector<signed char> pred_dir_;
  std::vector<std::int64_t> pi_;
  std::vector<std::int64_t> flow_;
  std::vector<signed char> state_;
  std::vector<NodeId> dirty_revs_;

  std::size_t in_arc_ = 0;
  NodeId join_ = 0, first_ = 0, second_ = 0, u_in_ = 0, v_in_ = 0, u_out_ = 0, v_out_ = 0;
  std::int64_t delta_ = 0;
};

}  // namespace

FlowSolution solve(const FlowNetwork& net, const SolverOptions& options) {
  validate(net);
  Simplex simplex(net, options);
  return simplex.run();
}

CertificateReport check_certificates(const FlowNetwork& net, const FlowSolution& sol) {
  CertificateReport r;
  if (sol.flow.size() != net.arc_count() || static_cast<NodeId>(sol.potential.size()) != net.node_count) {
    r.conservation = r.nonnegative = r.dual_feasible = r.complementary_slackness = r.objective_matches = false;
    return r;
  }
  std::vector<std::int64_t> net_out(static_cast<std::size_t>(net.node_count), 0);
  std::int64_t objective = 0;
  for (std::size_t e = 0; e < net.arc_count(); ++e) {
    const auto f = sol.flow[e];
    const auto u = static_cast<std::size_t>(net.tails[e]);
    const auto v = static_cast<std::size_t>(net.heads[e]);
    if (f < 0) r.nonnegative = false;
    net_out[u] += f;
    net_out[v] -= f;
    objective += net.costs[e] * f;
    const auto rc = net.costs[e] + sol.potential[u] - sol.potential[v];
    if (rc < 0) r.dual_feasible = false;
    if (f > 0 && rc != 0) r.complementary_slackness = false;
  }
  for (std::size_t u = 0; u < net_out.size(); ++u) {
    if (net_out[u] != net.supply[u]) r.conservation = false;
  }
  r.objective_matches = objective == sol.objective;
  return r;
}

}  // namespace mpot
