#include "ehc/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

namespace ehc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelTol = 1e-9;

double tol(double x) { return std::isfinite(x) ? kRelTol * std::fabs(x) + 1e-12 : 0.0; }

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int oi(Objective o) { return o == Objective::Latency ? 0 : 1; }

// Double-precision cost tables used to steer the search. Every decision that
// could be affected by rounding is re-checked with exact arithmetic.
struct Tables {
    struct Arc {
        int parent = 0;
        int child = 0;
        double cost[2][3][3];
        double min[2] = {kInf, kInf};
        double energy[3][3][3];  // [k][l][device]
    };

    std::size_t n = 0;
    std::vector<DeviceSet> allowed;
    std::vector<int> fixed_dev;
    std::vector<std::array<double, 3>> node_cost[2];
    std::vector<double> mem, sto;
    std::vector<Arc> arcs;
    std::vector<std::vector<std::pair<int, bool>>> adj;  // (arc, task is parent)
    std::array<std::optional<double>, 3> mem_b, sto_b, nrg_b;
    bool any_budget = false;
};

Tables build_tables(const Etfg& etfg) {
    const TaskGraph& g = etfg.graph();
    Tables t;
    t.n = g.size();
    t.allowed.resize(t.n);
    t.fixed_dev.assign(t.n, -1);
    for (auto& nc : t.node_cost) nc.assign(t.n, {kInf, kInf, kInf});
    t.mem.resize(t.n);
    t.sto.resize(t.n);
    t.adj.resize(t.n);
    for (std::size_t i = 0; i < t.n; ++i) {
        const Task& task = g.tasks[i];
        t.allowed[i] = task.allowed;
        if (task.fixed()) t.fixed_dev[i] = static_cast<int>(index_of(task.allowed.roles().front()));
        t.mem[i] = to_double(task.memory);
        t.sto[i] = to_double(task.storage);
        for (const CandidateNode& node : etfg.composite_node(task.id)) {
            t.node_cost[0][i][index_of(node.device)] = to_double(node.latency);
            t.node_cost[1][i][index_of(node.device)] = to_double(node.energy);
        }
    }
    t.arcs.resize(etfg.tfg_arcs().size());
    for (std::size_t a = 0; a < t.arcs.size(); ++a) {
        Tables::Arc& arc = t.arcs[a];
        arc.parent = etfg.tfg_arcs()[a].first.value - 1;
        arc.child = etfg.tfg_arcs()[a].second.value - 1;
        for (int o = 0; o < 2; ++o)
            for (auto& row : arc.cost[o]) std::fill(std::begin(row), std::end(row), kInf);
        for (auto& kk : arc.energy)
            for (auto& ll : kk) std::fill(std::begin(ll), std::end(ll), 0.0);
        for (const EtfgArc& ea : etfg.composite_arc(a)) {
            std::size_t k = index_of(ea.from_device), l = index_of(ea.to_device);
            arc.cost[0][k][l] = to_double(ea.comm_latency);
            arc.cost[1][k][l] = to_double(ea.comm_energy);
            for (int o = 0; o < 2; ++o) arc.min[o] = std::min(arc.min[o], arc.cost[o][k][l]);
            if (!ea.hops.empty()) {
                arc.energy[k][l][k] += to_double(ea.sender_energy());
                arc.energy[k][l][l] += to_double(ea.receiver_energy());
                if (ea.indicator.via) arc.energy[k][l][index_of(*ea.indicator.via)] += to_double(ea.relay_energy());
            }
        }
        t.adj[static_cast<std::size_t>(arc.parent)].push_back({static_cast<int>(a), true});
        t.adj[static_cast<std::size_t>(arc.child)].push_back({static_cast<int>(a), false});
    }
    for (DeviceRole r : kAllRoles) {
        const Device& d = etfg.system().device(r);
        std::size_t k = index_of(r);
        if (d.memory_budget) t.mem_b[k] = to_double(*d.memory_budget);
        if (d.storage_budget) t.sto_b[k] = to_double(*d.storage_budget);
        if (d.energy_budget) t.nrg_b[k] = to_double(*d.energy_budget);
        t.any_budget = t.any_budget || d.memory_budget || d.storage_budget || d.energy_budget;
    }
    return t;
}

// Incrementally maintained lower bound for one cost family.
struct Tracker {
    struct Undo {
        int task;
        std::array<double, 3> partial;
        double minp;
    };

    int o = 0;
    std::vector<std::array<double, 3>> partial;
    std::vector<double> minp;
    double assigned = 0, sum_min = 0, sum_free = 0;

    void init(const Tables& t, int objective) {
        o = objective;
        partial = t.node_cost[o];
        minp.resize(t.n);
        assigned = sum_min = sum_free = 0;
        for (std::size_t i = 0; i < t.n; ++i) {
            minp[i] = *std::min_element(partial[i].begin(), partial[i].end());
            sum_min += minp[i];
        }
        for (const Tables::Arc& a : t.arcs) sum_free += a.min[o];
    }

    double lb() const { return assigned + sum_min + sum_free; }

    // `assign` must not yet contain task i.
    void apply(const Tables& t, const std::vector<int>& assign, int i, int k, std::vector<Undo>& undo) {
        assigned += partial[i][k];
        sum_min -= minp[i];
        for (auto [a, is_parent] : t.adj[i]) {
            const Tables::Arc& arc = t.arcs[a];
            int j = is_parent ? arc.child : arc.parent;
            if (assign[j] >= 0) continue;
            undo.push_back({j, partial[j], minp[j]});
            sum_free -= arc.min[o];
            double m = kInf;
            for (int l = 0; l < 3; ++l) {
                if (!std::isfinite(partial[j][l])) continue;
                partial[j][l] += is_parent ? arc.cost[o][k][l] : arc.cost[o][l][k];
                m = std::min(m, partial[j][l]);
            }
            sum_min += m - minp[j];
            minp[j] = m;
        }
    }
};

struct Shared {
    std::mutex mu;
    bool has = false;
    Rational value;
    Assignment best;
    ObjectiveBreakdown breakdown;
    std::atomic<double> value_d{kInf};
    std::atomic<bool> abort{false};
    std::optional<Clock::time_point> deadline;

    void offer(const Rational& v, const Assignment& a, ObjectiveBreakdown b) {
        std::lock_guard lock(mu);
        if (has && (v > value || (v == value && !(a < best)))) return;
        has = true;
        value = v;
        best = a;
        breakdown = std::move(b);
        value_d.store(v.get_d());
    }
};

Assignment to_assignment(const std::vector<int>& assign) {
    Assignment a(assign.size());
    for (std::size_t i = 0; i < assign.size(); ++i) a[i] = kAllRoles[static_cast<std::size_t>(assign[i])];
    return a;
}

struct Snapshot {
    std::size_t undo_size[2];
    double scalars[2][3];
    std::array<double, 3> mem_used, sto_used, nrg_used, mand_mem, mand_sto, mand_nrg;
};

class Search {
public:
    Search(const Etfg& etfg, const Tables& t, Shared& shared, Objective obj, std::optional<Rational> lthr,
           std::vector<int> order)
        : etfg_(etfg), t_(t), s_(shared), obj_(obj), lthr_(std::move(lthr)), order_(std::move(order)) {
        assign_.assign(t.n, -1);
        trackers_[0].init(t, oi(obj));
        use_lat_ = lthr_.has_value();
        if (use_lat_) {
            trackers_[1].init(t, 0);
            lthr_d_ = lthr_->get_d();
        }
        mem_used_.fill(0);
        sto_used_.fill(0);
        nrg_used_.fill(0);
        mand_mem_.fill(0);
        mand_sto_.fill(0);
        mand_nrg_.fill(0);
        for (std::size_t i = 0; i < t.n; ++i) {
            int f = t.fixed_dev[i];
            if (f < 0) continue;
            mand_mem_[f] += t.mem[i];
            mand_sto_[f] += t.sto[i];
            mand_nrg_[f] += t.node_cost[1][i][f];
        }
    }

    SolverStats stats;

    std::size_t depth_count() const { return order_.size(); }

    bool fits(int i, int k) const {
        bool fixed_here = t_.fixed_dev[i] == k;
        auto over = [](double used, const std::optional<double>& b) { return b && used > *b + tol(*b); };
        if (over(mem_used_[k] + t_.mem[i] + mand_mem_[k] - (fixed_here ? t_.mem[i] : 0), t_.mem_b[k])) return false;
        if (over(sto_used_[k] + t_.sto[i] + mand_sto_[k] - (fixed_here ? t_.sto[i] : 0), t_.sto_b[k])) return false;
        if (t_.nrg_b[0] || t_.nrg_b[1] || t_.nrg_b[2]) {
            std::array<double, 3> delta{0, 0, 0};
            delta[k] += t_.node_cost[1][i][k];
            for (auto [a, is_parent] : t_.adj[i]) {
                const Tables::Arc& arc = t_.arcs[a];
                int j = is_parent ? arc.child : arc.parent;
                if (assign_[j] < 0) continue;
                const double* e = is_parent ? arc.energy[k][assign_[j]] : arc.energy[assign_[j]][k];
                for (int d = 0; d < 3; ++d) delta[d] += e[d];
            }
            for (int d = 0; d < 3; ++d) {
                double used = nrg_used_[d] + delta[d] + mand_nrg_[d] - (fixed_here && d == k ? t_.node_cost[1][i][k] : 0);
                if (over(used, t_.nrg_b[d])) return false;
            }
        }
        return true;
    }

    Snapshot apply(int i, int k) {
        Snapshot snap;
        for (int x = 0; x < 2; ++x) {
            snap.undo_size[x] = undo_[x].size();
            snap.scalars[x][0] = trackers_[x].assigned;
            snap.scalars[x][1] = trackers_[x].sum_min;
            snap.scalars[x][2] = trackers_[x].sum_free;
        }
        snap.mem_used = mem_used_;
        snap.sto_used = sto_used_;
        snap.nrg_used = nrg_used_;
        snap.mand_mem = mand_mem_;
        snap.mand_sto = mand_sto_;
        snap.mand_nrg = mand_nrg_;

        trackers_[0].apply(t_, assign_, i, k, undo_[0]);
        if (use_lat_) trackers_[1].apply(t_, assign_, i, k, undo_[1]);
        mem_used_[k] += t_.mem[i];
        sto_used_[k] += t_.sto[i];
        nrg_used_[k] += t_.node_cost[1][i][k];
        for (auto [a, is_parent] : t_.adj[i]) {
            const Tables::Arc& arc = t_.arcs[a];
            int j = is_parent ? arc.child : arc.parent;
            if (assign_[j] < 0) continue;
            const double* e = is_parent ? arc.energy[k][assign_[j]] : arc.energy[assign_[j]][k];
            for (int d = 0; d < 3; ++d) nrg_used_[d] += e[d];
        }
        if (int f = t_.fixed_dev[i]; f >= 0) {
            mand_mem_[f] -= t_.mem[i];
            mand_sto_[f] -= t_.sto[i];
            mand_nrg_[f] -= t_.node_cost[1][i][f];
        }
        assign_[i] = k;
        ++stats.nodes;
        return snap;
    }

    void undo(int i, const Snapshot& snap) {
        assign_[i] = -1;
        for (int x = 0; x < 2; ++x) {
            Tracker& tr = trackers_[x];
            auto& u = undo_[x];
            while (u.size() > snap.undo_size[x]) {
                tr.partial[u.back().task] = u.back().partial;
                tr.minp[u.back().task] = u.back().minp;
                u.pop_back();
            }
            tr.assigned = snap.scalars[x][0];
            tr.sum_min = snap.scalars[x][1];
            tr.sum_free = snap.scalars[x][2];
        }
        mem_used_ = snap.mem_used;
        sto_used_ = snap.sto_used;
        nrg_used_ = snap.nrg_used;
        mand_mem_ = snap.mand_mem;
        mand_sto_ = snap.mand_sto;
        mand_nrg_ = snap.mand_nrg;
    }

    double bound() const { return trackers_[0].lb(); }

    // True when the current subtree can be discarded.
    bool prune() {
        if (use_lat_ && trackers_[1].lb() > lthr_d_ + tol(lthr_d_)) {
            ++stats.budget_prunes;
            return true;
        }
        double lb = bound();
        double inc = s_.value_d.load(std::memory_order_relaxed);
        if (lb > inc + tol(inc)) {
            ++stats.bound_prunes;
            return true;
        }
        if (lb < inc - tol(inc)) return false;
        // Too close to call in floating point.
        Rational value;
        Assignment best;
        {
            std::lock_guard lock(s_.mu);
            if (!s_.has) return false;
            value = s_.value;
            best = s_.best;
        }
        ++stats.exact_checks;
        PartialAssignment partial(t_.n);
        for (std::size_t i = 0; i < t_.n; ++i)
            if (assign_[i] >= 0) partial[i] = kAllRoles[static_cast<std::size_t>(assign_[i])];
        Rational exact = lower_bound(etfg_, obj_, partial);
        bool cut = exact > value;
        if (!cut && exact == value) {
            // Prune when no completion can be lexicographically smaller than the incumbent.
            cut = true;
            for (std::size_t i = 0; i < t_.n; ++i) {
                if (assign_[i] < 0) {
                    cut = false;
                    break;
                }
                int inc_k = static_cast<int>(index_of(best[i]));
                if (assign_[i] != inc_k) {
                    cut = assign_[i] > inc_k;
                    break;
                }
            }
        }
        if (cut) ++stats.bound_prunes;
        return cut;
    }

    void leaf() {
        ++stats.leaves;
        double v = trackers_[0].assigned;
        double inc = s_.value_d.load(std::memory_order_relaxed);
        if (v > inc + tol(inc)) return;
        Assignment a = to_assignment(assign_);
        ++stats.exact_checks;
        ObjectiveBreakdown b = evaluate(etfg_, a, lthr_);
        if (!b.feasible()) return;
        Rational value = b.objective(obj_);
        s_.offer(value, a, std::move(b));
    }

    bool time_up() {
        if (s_.abort.load(std::memory_order_relaxed)) return true;
        if (s_.deadline && (stats.nodes & 1023) == 0 && Clock::now() >= *s_.deadline) s_.abort.store(true);
        return s_.abort.load(std::memory_order_relaxed);
    }

    // Explores the subtree below `depth`; returns the bound of whatever was left
    // unexplored on abort (+inf when the subtree was exhausted).
    double dfs(std::size_t depth) {
        if (depth == order_.size()) {
            leaf();
            return kInf;
        }
        int i = order_[depth];
        std::array<int, 3> cand{};
        int count = 0;
        for (DeviceRole r : t_.allowed[i].roles()) cand[count++] = static_cast<int>(index_of(r));
        const auto& part = trackers_[0].partial[i];
        std::stable_sort(cand.begin(), cand.begin() + count, [&](int a, int b) { return part[a] < part[b]; });

        for (int c = 0; c < count; ++c) {
            int k = cand[c];
            if (time_up()) return open_bound(i, cand, c, count);
            if (!fits(i, k)) {
                ++stats.budget_prunes;
                continue;
            }
            Snapshot snap = apply(i, k);
            double open = kInf;
            if (!prune()) open = dfs(depth + 1);
            undo(i, snap);
            if (s_.abort.load(std::memory_order_relaxed))
                return std::min(open, open_bound(i, cand, c + 1, count));
        }
        return kInf;
    }

    double open_bound(int i, const std::array<int, 3>& cand, int from, int count) {
        double m = kInf;
        for (int c = from; c < count; ++c) {
            if (!fits(i, cand[c])) continue;
            Snapshot snap = apply(i, cand[c]);
            m = std::min(m, bound());
            undo(i, snap);
        }
        return m;
    }

    // Applies a prefix along the branching order. Returns how many tasks were
    // applied; fewer than prefix.size() means the prefix is pruned.
    std::size_t apply_prefix(const std::vector<int>& prefix, std::vector<Snapshot>& snaps) {
        for (std::size_t d = 0; d < prefix.size(); ++d) {
            int i = order_[d];
            if (!fits(i, prefix[d])) {
                ++stats.budget_prunes;
                return d;
            }
            snaps.push_back(apply(i, prefix[d]));
            if (prune()) return d;
        }
        return prefix.size();
    }

    void undo_prefix(std::vector<Snapshot>& snaps) {
        while (!snaps.empty()) {
            undo(order_[snaps.size() - 1], snaps.back());
            snaps.pop_back();
        }
    }

private:
    const Etfg& etfg_;
    const Tables& t_;
    Shared& s_;
    Objective obj_;
    std::optional<Rational> lthr_;
    double lthr_d_ = kInf;
    bool use_lat_ = false;
    std::vector<int> order_;
    std::vector<int> assign_;
    Tracker trackers_[2];
    std::vector<Tracker::Undo> undo_[2];
    std::array<double, 3> mem_used_, sto_used_, nrg_used_, mand_mem_, mand_sto_, mand_nrg_;
};

void accumulate(SolverStats& into, const SolverStats& s) {
    into.nodes += s.nodes;
    into.bound_prunes += s.bound_prunes;
    into.budget_prunes += s.budget_prunes;
    into.leaves += s.leaves;
    into.exact_checks += s.exact_checks;
}

std::optional<Rational> effective_threshold(Objective o, std::optional<Rational> lthr) {
    if (o == Objective::Latency) return std::nullopt;
    return lthr;
}

Allocation finish(Objective o, Shared& s, SolverStats stats, bool aborted, double open_bound) {
    Allocation out;
    out.objective = o;
    out.stats = std::move(stats);
    if (s.has) {
        out.assignment = s.best;
        out.objective_value = s.value;
        out.breakdown = s.breakdown;
    }
    if (!aborted) {
        out.optimality = s.has ? Optimality::ProvenOptimal : Optimality::Infeasible;
        out.gap = 0;
        out.stats.lower_bound = s.has ? s.value.get_d() : kInf;
        return out;
    }
    if (!s.has) {
        out.optimality = Optimality::NoSolution;
        out.stats.lower_bound = open_bound;
        return out;
    }
    double lb = std::min(open_bound, s.value.get_d());
    out.stats.lower_bound = lb;
    Rational bound = rational_from_double(lb);
    if (bound >= s.value) {
        out.optimality = Optimality::ProvenOptimal;
        out.gap = 0;
    } else {
        out.optimality = Optimality::Incumbent;
        out.gap = s.value == 0 ? Rational(0) : Rational((s.value - bound) / s.value);
    }
    return out;
}

// ---- tree DP -------------------------------------------------------------

struct Forest {
    std::vector<int> order;   // BFS order, roots first within each component
    std::vector<int> parent;  // -1 for roots
    std::vector<int> parent_arc;
    std::vector<bool> parent_is_tfg_parent;  // orientation of the arc to the parent
};

Forest build_forest(const Tables& t) {
    Forest f;
    f.parent.assign(t.n, -1);
    f.parent_arc.assign(t.n, -1);
    f.parent_is_tfg_parent.assign(t.n, false);
    std::vector<bool> seen(t.n, false);
    for (std::size_t r = 0; r < t.n; ++r) {
        if (seen[r]) continue;
        seen[r] = true;
        std::size_t head = f.order.size();
        f.order.push_back(static_cast<int>(r));
        while (head < f.order.size()) {
            int u = f.order[head++];
            for (auto [a, u_is_parent] : t.adj[u]) {
                const Tables::Arc& arc = t.arcs[a];
                int v = u_is_parent ? arc.child : arc.parent;
                if (seen[v]) continue;
                seen[v] = true;
                f.parent[v] = u;
                f.parent_arc[v] = a;
                f.parent_is_tfg_parent[v] = u_is_parent;
                f.order.push_back(v);
            }
        }
    }
    return f;
}

template <typename Num>
struct DpCosts {
    std::vector<std::array<Num, 3>> node;
    std::vector<std::array<std::array<Num, 3>, 3>> arc;  // [k][l] for TFG (parent, child)
};

DpCosts<double> dp_costs_double(const Tables& t, int o) {
    DpCosts<double> c;
    c.node = t.node_cost[o];
    c.arc.resize(t.arcs.size());
    for (std::size_t a = 0; a < t.arcs.size(); ++a)
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) c.arc[a][k][l] = t.arcs[a].cost[o][k][l];
    return c;
}

DpCosts<Rational> dp_costs_exact(const Etfg& etfg, Objective o) {
    DpCosts<Rational> c;
    c.node.resize(etfg.task_count());
    for (const CandidateNode& n : etfg.nodes())
        c.node[static_cast<std::size_t>(n.task.value - 1)][index_of(n.device)] =
            o == Objective::Latency ? n.latency : n.energy;
    c.arc.resize(etfg.tfg_arcs().size());
    for (std::size_t a = 0; a < c.arc.size(); ++a)
        for (const EtfgArc& ea : etfg.composite_arc(a))
            c.arc[a][index_of(ea.from_device)][index_of(ea.to_device)] =
                o == Objective::Latency ? ea.comm_latency : ea.comm_energy;
    return c;
}

template <typename Num>
Num dp_value(const Forest& f, const DpCosts<Num>& c, const std::vector<DeviceSet>& allowed) {
    std::size_t n = f.order.size();
    std::vector<std::array<Num, 3>> best(n);
    for (std::size_t i = 0; i < n; ++i)
        for (DeviceRole r : allowed[i].roles()) best[i][index_of(r)] = c.node[i][index_of(r)];
    Num total = 0;
    for (std::size_t idx = n; idx-- > 0;) {
        int v = f.order[idx];
        bool first = true;
        Num m = 0;
        for (DeviceRole r : allowed[v].roles()) {
            const Num& x = best[v][index_of(r)];
            if (first || x < m) m = x;
            first = false;
        }
        int p = f.parent[v];
        if (p < 0) {
            total += m;
            continue;
        }
        const auto& arc = c.arc[f.parent_arc[v]];
        for (DeviceRole pr : allowed[p].roles()) {
            std::size_t k = index_of(pr);
            bool any = false;
            Num bm = 0;
            for (DeviceRole vr : allowed[v].roles()) {
                std::size_t l = index_of(vr);
                Num x = best[v][l] + (f.parent_is_tfg_parent[v] ? arc[k][l] : arc[l][k]);
                if (!any || x < bm) bm = x;
                any = true;
            }
            best[p][k] += bm;
        }
    }
    return total;
}

struct TreeResult {
    Assignment assignment;
    Rational value;
};

TreeResult tree_dp_core(const Etfg& etfg, Objective o, const Tables& t, SolverStats& stats) {
    Forest f = build_forest(t);
    DpCosts<double> cd = dp_costs_double(t, oi(o));
    DpCosts<Rational> cx = dp_costs_exact(etfg, o);
    std::vector<DeviceSet> allowed = t.allowed;
    Rational exact = dp_value(f, cx, allowed);
    double vd = dp_value(f, cd, allowed);

    auto reconstruct = [&](auto accept) {
        std::vector<DeviceSet> fix = t.allowed;
        Assignment a(t.n);
        for (std::size_t i = 0; i < t.n; ++i) {
            DeviceSet keep = fix[i];
            bool done = false;
            for (DeviceRole r : keep.roles()) {
                fix[i] = DeviceSet{r};
                ++stats.nodes;
                if (accept(fix)) {
                    a[i] = r;
                    done = true;
                    break;
                }
            }
            if (!done) throw Error("tree DP reconstruction failed");
        }
        return a;
    };

    Assignment a = reconstruct([&](const std::vector<DeviceSet>& fix) {
        double v = dp_value(f, cd, fix);
        return v <= vd + tol(vd);
    });
    ++stats.exact_checks;
    if (evaluate(etfg, a).objective(o) != exact) {
        a = reconstruct([&](const std::vector<DeviceSet>& fix) {
            ++stats.exact_checks;
            return dp_value(f, cx, fix) == exact;
        });
    }
    return {a, exact};
}

std::vector<int> branching_order(const Etfg& etfg) {
    auto topo = topological_order(etfg.graph());
    if (!topo) throw Error("task graph contains a cycle");
    std::vector<int> order;
    order.reserve(topo->size());
    for (TaskId id : *topo) order.push_back(id.value - 1);
    return order;
}

}  // namespace

std::string_view optimality_name(Optimality o) {
    switch (o) {
        case Optimality::ProvenOptimal: return "proven-optimal";
        case Optimality::Incumbent: return "incumbent-with-gap";
        case Optimality::Infeasible: return "infeasible";
        case Optimality::NoSolution: return "no-solution";
    }
    return "?";
}

Method parse_method(std::string_view text) {
    if (text == "auto") return Method::Auto;
    if (text == "bruteforce" || text == "brute-force") return Method::BruteForce;
    if (text == "tree-dp" || text == "treedp") return Method::TreeDp;
    if (text == "bnb" || text == "branch-and-bound") return Method::BranchAndBound;
    throw Error("unknown solver '" + std::string(text) + "' (expected auto, bruteforce, tree-dp, bnb)");
}

std::string_view method_name(Method m) {
    switch (m) {
        case Method::Auto: return "auto";
        case Method::BruteForce: return "bruteforce";
        case Method::TreeDp: return "tree-dp";
        case Method::BranchAndBound: return "bnb";
    }
    return "?";
}

nlohmann::json SolverStats::to_json() const {
    nlohmann::json j;
    j["method"] = method;
    j["nodes"] = nodes;
    j["bound_prunes"] = bound_prunes;
    j["budget_prunes"] = budget_prunes;
    j["leaves"] = leaves;
    j["exact_checks"] = exact_checks;
    j["wall_seconds"] = wall_seconds;
    j["threads"] = threads;
    if (std::isfinite(lower_bound))
        j["lower_bound"] = lower_bound;
    else
        j["lower_bound"] = nullptr;
    return j;
}

Rational lower_bound(const Etfg& etfg, Objective objective, const PartialAssignment& partial) {
    const TaskGraph& g = etfg.graph();
    if (partial.size() != g.size()) throw Error("partial assignment size mismatch");
    bool lat = objective == Objective::Latency;
    auto node_cost = [&](std::size_t i, DeviceRole d) -> const Rational& {
        const CandidateNode& n = etfg.nodes()[etfg.node_index(TaskId{static_cast<int>(i + 1)}, d)];
        return lat ? n.latency : n.energy;
    };
    auto arc_cost = [&](const EtfgArc& a) -> const Rational& { return lat ? a.comm_latency : a.comm_energy; };
    for (std::size_t i = 0; i < g.size(); ++i)
        if (partial[i] && !g.tasks[i].allowed.contains(*partial[i]))
            throw Error("partial assignment places task " + std::to_string(i + 1) + " outside its allowed set");

    Rational total = 0;
    std::vector<std::array<Rational, 3>> extra(g.size());
    for (std::size_t a = 0; a < etfg.tfg_arcs().size(); ++a) {
        std::size_t p = static_cast<std::size_t>(etfg.tfg_arcs()[a].first.value - 1);
        std::size_t c = static_cast<std::size_t>(etfg.tfg_arcs()[a].second.value - 1);
        auto span = etfg.composite_arc(a);
        if (partial[p] && partial[c]) {
            for (const EtfgArc& ea : span)
                if (ea.from_device == *partial[p] && ea.to_device == *partial[c]) total += arc_cost(ea);
        } else if (partial[p]) {
            for (const EtfgArc& ea : span)
                if (ea.from_device == *partial[p]) extra[c][index_of(ea.to_device)] += arc_cost(ea);
        } else if (partial[c]) {
            for (const EtfgArc& ea : span)
                if (ea.to_device == *partial[c]) extra[p][index_of(ea.from_device)] += arc_cost(ea);
        } else {
            const Rational* m = nullptr;
            for (const EtfgArc& ea : span)
                if (!m || arc_cost(ea) < *m) m = &arc_cost(ea);
            if (m) total += *m;
        }
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (partial[i]) {
            total += node_cost(i, *partial[i]);
            continue;
        }
        std::optional<Rational> m;
        for (DeviceRole r : g.tasks[i].allowed.roles()) {
            Rational v = node_cost(i, r) + extra[i][index_of(r)];
            if (!m || v < *m) m = v;
        }
        total += *m;
    }
    return total;
}

bool is_forest(const TaskGraph& g) {
    std::vector<int> parent(g.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [p, c] : g.arcs) {
        int a = find(p.value - 1), b = find(c.value - 1);
        if (a == b) return false;
        parent[a] = b;
    }
    return true;
}

Allocation solve_bruteforce(const Etfg& etfg, Objective objective, std::optional<Rational> latency_threshold) {
    auto t0 = Clock::now();
    latency_threshold = effective_threshold(objective, std::move(latency_threshold));
    Tables t = build_tables(etfg);
    double space = 1;
    for (const DeviceSet& s : t.allowed) space *= static_cast<double>(s.size());
    if (space > kBruteForceLimit)
        throw Error("brute force would enumerate " + std::to_string(space) + " assignments (limit " +
                    std::to_string(static_cast<long long>(kBruteForceLimit)) + ")");

    std::vector<std::vector<int>> choices(t.n);
    for (std::size_t i = 0; i < t.n; ++i)
        for (DeviceRole r : t.allowed[i].roles()) choices[i].push_back(static_cast<int>(index_of(r)));

    int o = oi(objective);
    std::optional<double> lthr_d;
    if (latency_threshold) lthr_d = latency_threshold->get_d();
    Shared s;
    SolverStats stats;
    stats.method = "bruteforce";
    std::vector<std::size_t> digit(t.n, 0);
    std::vector<int> assign(t.n);
    auto over = [](double used, const std::optional<double>& b) { return b && used > *b + tol(*b); };
    while (true) {
        for (std::size_t i = 0; i < t.n; ++i) assign[i] = choices[i][digit[i]];
        ++stats.leaves;
        ++stats.nodes;
        double cost = 0, lat = 0;
        std::array<double, 3> mem{}, sto{}, nrg{};
        for (std::size_t i = 0; i < t.n; ++i) {
            int k = assign[i];
            cost += t.node_cost[o][i][k];
            lat += t.node_cost[0][i][k];
            mem[k] += t.mem[i];
            sto[k] += t.sto[i];
            nrg[k] += t.node_cost[1][i][k];
        }
        for (const Tables::Arc& a : t.arcs) {
            int k = assign[a.parent], l = assign[a.child];
            cost += a.cost[o][k][l];
            lat += a.cost[0][k][l];
            for (int d = 0; d < 3; ++d) nrg[d] += a.energy[k][l][d];
        }
        bool clearly_infeasible = lthr_d && lat > *lthr_d + tol(*lthr_d);
        for (int d = 0; d < 3 && !clearly_infeasible; ++d)
            clearly_infeasible = over(mem[d], t.mem_b[d]) || over(sto[d], t.sto_b[d]) || over(nrg[d], t.nrg_b[d]);
        double inc = s.value_d.load();
        if (!clearly_infeasible && cost <= inc + tol(inc)) {
            Assignment a = to_assignment(assign);
            ++stats.exact_checks;
            ObjectiveBreakdown b = evaluate(etfg, a, latency_threshold);
            if (b.feasible()) {
                Rational v = b.objective(objective);
                if (!s.has || v < s.value) s.offer(v, a, std::move(b));
            }
        }
        std::size_t pos = t.n;
        while (pos > 0) {
            --pos;
            if (++digit[pos] < choices[pos].size()) break;
            digit[pos] = 0;
            if (pos == 0) {
                pos = t.n + 1;
                break;
            }
        }
        if (pos == t.n + 1 || t.n == 0) break;
    }
    stats.wall_seconds = seconds_since(t0);
    return finish(objective, s, std::move(stats), false, kInf);
}

Allocation solve_tree_dp(const Etfg& etfg, Objective objective) {
    auto t0 = Clock::now();
    if (!is_forest(etfg.graph())) throw Error("tree DP requires a forest-shaped task graph");
    Tables t = build_tables(etfg);
    if (t.any_budget) throw Error("tree DP does not support finite device budgets");
    SolverStats stats;
    stats.method = "tree-dp";
    TreeResult r = tree_dp_core(etfg, objective, t, stats);
    Allocation out;
    out.objective = objective;
    out.assignment = r.assignment;
    out.objective_value = r.value;
    out.breakdown = evaluate(etfg, r.assignment);
    out.optimality = Optimality::ProvenOptimal;
    out.gap = 0;
    out.stats = std::move(stats);
    out.stats.lower_bound = r.value.get_d();
    out.stats.wall_seconds = seconds_since(t0);
    return out;
}

Allocation solve_branch_and_bound(const Etfg& etfg, Objective objective, std::optional<Rational> latency_threshold,
                                  const SolveConfig& config) {
    auto t0 = Clock::now();
    latency_threshold = effective_threshold(objective, std::move(latency_threshold));
    Tables t = build_tables(etfg);
    std::vector<int> order = branching_order(etfg);
    Shared s;
    if (config.time_limit_seconds)
        s.deadline = t0 + std::chrono::duration_cast<Clock::duration>(
                              std::chrono::duration<double>(std::max(0.0, *config.time_limit_seconds)));
    int threads = std::max(1, config.threads);
    SolverStats stats;
    stats.method = "bnb";
    stats.threads = threads;
    double open = kInf;

    if (threads == 1 || t.n < 2) {
        Search search(etfg, t, s, objective, latency_threshold, order);
        if (!search.prune()) open = search.dfs(0);
        accumulate(stats, search.stats);
    } else {
        // Split the tree into prefixes over the first tasks of the branching order.
        std::size_t depth = 0;
        double count = 1;
        while (depth < order.size() && count < 16.0 * threads && count < 1e5)
            count *= static_cast<double>(t.allowed[order[depth++]].size());
        std::vector<std::vector<int>> prefixes{{}};
        for (std::size_t d = 0; d < depth; ++d) {
            std::vector<std::vector<int>> next;
            for (const auto& p : prefixes)
                for (DeviceRole r : t.allowed[order[d]].roles()) {
                    next.push_back(p);
                    next.back().push_back(static_cast<int>(index_of(r)));
                }
            prefixes = std::move(next);
        }
        std::atomic<std::size_t> next_prefix{0};
        std::vector<double> open_by_prefix(prefixes.size(), kInf);
        std::vector<bool> started(prefixes.size(), false);
        std::vector<SolverStats> local(static_cast<std::size_t>(threads));
        std::mutex started_mu;
        auto work = [&](std::size_t w) {
            Search search(etfg, t, s, objective, latency_threshold, order);
            std::vector<Snapshot> snaps;
            while (!s.abort.load()) {
                std::size_t p = next_prefix.fetch_add(1);
                if (p >= prefixes.size()) break;
                {
                    std::lock_guard lock(started_mu);
                    started[p] = true;
                }
                std::size_t applied = search.apply_prefix(prefixes[p], snaps);
                if (applied == prefixes[p].size()) open_by_prefix[p] = search.dfs(depth);
                search.undo_prefix(snaps);
                if (search.time_up()) break;
            }
            local[w] = search.stats;
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(work, static_cast<std::size_t>(w));
        for (auto& th : pool) th.join();
        for (const SolverStats& l : local) accumulate(stats, l);
        if (s.abort.load()) {
            Search probe(etfg, t, s, objective, latency_threshold, order);
            std::vector<Snapshot> snaps;
            for (std::size_t p = 0; p < prefixes.size(); ++p) {
                if (started[p]) {
                    open = std::min(open, open_by_prefix[p]);
                    continue;
                }
                std::size_t applied = probe.apply_prefix(prefixes[p], snaps);
                if (applied == prefixes[p].size()) open = std::min(open, probe.bound());
                probe.undo_prefix(snaps);
            }
        }
    }
    stats.wall_seconds = seconds_since(t0);
    return finish(objective, s, std::move(stats), s.abort.load(), open);
}

Allocation solve(const Etfg& etfg, Objective objective, std::optional<Rational> latency_threshold, Method method,
                 const SolveConfig& config) {
    latency_threshold = effective_threshold(objective, std::move(latency_threshold));
    switch (method) {
        case Method::BruteForce: return solve_bruteforce(etfg, objective, latency_threshold);
        case Method::TreeDp: {
            if (latency_threshold) throw Error("tree DP does not support a latency threshold");
            return solve_tree_dp(etfg, objective);
        }
        case Method::BranchAndBound: return solve_branch_and_bound(etfg, objective, latency_threshold, config);
        case Method::Auto: break;
    }
    if (is_forest(etfg.graph())) {
        auto t0 = Clock::now();
        Tables t = build_tables(etfg);
        SolverStats stats;
        stats.method = "tree-dp";
        TreeResult r = tree_dp_core(etfg, objective, t, stats);
        ObjectiveBreakdown b = evaluate(etfg, r.assignment, latency_threshold);
        if (b.feasible()) {
            Allocation out;
            out.objective = objective;
            out.assignment = r.assignment;
            out.objective_value = r.value;
            out.breakdown = std::move(b);
            out.optimality = Optimality::ProvenOptimal;
            out.gap = 0;
            out.stats = std::move(stats);
            out.stats.lower_bound = r.value.get_d();
            out.stats.wall_seconds = seconds_since(t0);
            return out;
        }
    }
    return solve_branch_and_bound(etfg, objective, latency_threshold, config);
}

nlohmann::json allocation_to_json(const Etfg& etfg, const Allocation& a) {
    nlohmann::json j;
    j["objective"] = objective_name(a.objective);
    j["status"] = optimality_name(a.optimality);
    j["stats"] = a.stats.to_json();
    if (!a.has_solution()) return j;
    j["value"] = format_decimal(a.objective_value);
    j["value_approx"] = a.objective_value.get_d();
    j["gap"] = a.gap.get_d();
    nlohmann::json assign = nlohmann::json::object();
    for (std::size_t i = 0; i < a.assignment.size(); ++i)
        assign[std::to_string(etfg.graph().tasks[i].id.value)] = std::string(1, role_letter(a.assignment[i]));
    j["assignment"] = assign;
    j["assignment_string"] = assignment_to_string(a.assignment);
    const ObjectiveBreakdown& b = a.breakdown;
    j["total_latency_s"] = b.total_latency.get_d();
    j["total_energy_j"] = b.total_energy.get_d();
    j["comp_latency_s"] = b.comp_latency.get_d();
    j["comm_latency_s"] = b.comm_latency.get_d();
    j["comp_energy_j"] = b.comp_energy.get_d();
    j["comm_energy_j"] = b.comm_energy.get_d();
    j["feasible"] = b.feasible();
    return j;
}

}  // namespace ehc
