#include "b1set/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace b1set {

namespace {

using clock_type = std::chrono::steady_clock;

std::vector<u64> valid_elements(u64 q, int lambda) {
    std::vector<u64> out;
    for (u64 x = 1; x < q; ++x)
        if (valid_element(x, q, lambda)) out.push_back(x);
    return out;
}

ConflictGraph empty_graph(u64 q, int lambda, std::vector<u64> verts) {
    ConflictGraph g;
    g.q = q;
    g.lambda = lambda;
    g.verts = std::move(verts);
    g.words = (g.verts.size() + 63) / 64;
    g.bits.assign(g.verts.size() * g.words, 0);
    return g;
}

void set_edge(ConflictGraph& g, std::size_t u, std::size_t v) {
    g.bits[u * g.words + v / 64] |= u64(1) << (v % 64);
    g.bits[v * g.words + u / 64] |= u64(1) << (u % 64);
}

ConflictGraph build_from_verts(u64 q, int lambda, std::vector<u64> verts) {
    ConflictGraph g = empty_graph(q, lambda, std::move(verts));
    const std::size_t n = g.verts.size();
    // bucket every product i*x by residue; bucket members are in conflict
    std::vector<std::vector<std::uint32_t>> buckets(q);
    for (std::size_t vi = 0; vi < n; ++vi)
        for (int i = 1; i <= lambda; ++i)
            buckets[mulmod(static_cast<u64>(i), g.verts[vi], q)].push_back(
                static_cast<std::uint32_t>(vi));
    for (const auto& bucket : buckets)
        for (std::size_t s = 0; s < bucket.size(); ++s)
            for (std::size_t t = s + 1; t < bucket.size(); ++t)
                if (bucket[s] != bucket[t]) set_edge(g, bucket[s], bucket[t]);
    return g;
}

} // namespace

ConflictGraph build_graph(u64 q, int lambda) {
    if (q < 2) throw std::invalid_argument("build_graph: modulus must be at least 2");
    if (lambda < 1) throw std::invalid_argument("build_graph: lambda must be positive");
    return build_from_verts(q, lambda, valid_elements(q, lambda));
}

ConflictGraph build_graph_restricted(u64 q, int lambda, const std::vector<u64>& allowed) {
    if (q < 2) throw std::invalid_argument("build_graph_restricted: modulus must be at least 2");
    std::vector<u64> verts(allowed);
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    for (u64 x : verts)
        if (x >= q) throw std::invalid_argument("build_graph_restricted: element out of range");
    std::erase_if(verts, [&](u64 x) { return x == 0 || !valid_element(x, q, lambda); });
    return build_from_verts(q, lambda, std::move(verts));
}

ConflictGraph build_graph_pairwise(u64 q, int lambda, bool parallel) {
    if (q < 2) throw std::invalid_argument("build_graph_pairwise: modulus must be at least 2");
    ConflictGraph g = empty_graph(q, lambda, valid_elements(q, lambda));
    const std::size_t n = g.verts.size();
    const long ln = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (long u = 0; u < ln; ++u) {
        // fill only row u; the (u,v) and (v,u) bits are set by symmetric work
        u64* row = g.bits.data() + static_cast<std::size_t>(u) * g.words;
        for (std::size_t v = 0; v < n; ++v) {
            if (static_cast<std::size_t>(u) == v) continue;
            if (conflicts(g.verts[u], g.verts[v], q, lambda)) row[v / 64] |= u64(1) << (v % 64);
        }
    }
    return g;
}

std::vector<std::vector<std::size_t>> components(const ConflictGraph& g) {
    const std::size_t n = g.verts.size();
    std::vector<char> seen(n, 0);
    std::vector<std::vector<std::size_t>> comps;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<std::size_t> comp;
        stack.push_back(s);
        seen[s] = 1;
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            const u64* row = g.row(u);
            for (std::size_t w = 0; w < g.words; ++w) {
                u64 bitsw = row[w];
                while (bitsw) {
                    std::size_t v = w * 64 + static_cast<std::size_t>(__builtin_ctzll(bitsw));
                    bitsw &= bitsw - 1;
                    if (!seen[v]) {
                        seen[v] = 1;
                        stack.push_back(v);
                    }
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

const char* to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::exact: return "exact";
        case SearchStatus::budget_exceeded: return "budget-exceeded";
        case SearchStatus::interrupted: return "interrupted";
    }
    return "unknown";
}

namespace {

// shared run limits; updated in coarse batches to keep the hot path cheap
struct Controls {
    u64 max_nodes = 0;
    bool use_deadline = false;
    clock_type::time_point deadline{};
    const std::atomic<bool>* stop = nullptr;
    std::atomic<u64> nodes{0};
    std::atomic<bool> exceeded{false};
    std::atomic<bool> interrupted{false};

    bool halted() const {
        return exceeded.load(std::memory_order_relaxed) ||
               interrupted.load(std::memory_order_relaxed);
    }
    void account(u64 batch) { nodes.fetch_add(batch, std::memory_order_relaxed); }
    // returns true when the search must wind down
    bool flush(u64 batch) {
        u64 total = nodes.fetch_add(batch, std::memory_order_relaxed) + batch;
        if (stop && stop->load(std::memory_order_relaxed))
            interrupted.store(true, std::memory_order_relaxed);
        else if (total > max_nodes || (use_deadline && clock_type::now() > deadline))
            exceeded.store(true, std::memory_order_relaxed);
        return halted();
    }
};

constexpr u64 kFlushMask = 63; // budget checked every 64 nodes

// branch-and-bound over one connected component, compact local indexing
struct CompSolver {
    std::size_t n = 0;
    std::size_t w = 0;
    std::vector<u64> adj;  // n rows of w words
    std::vector<u64> cur;  // chosen mask
    std::vector<u64> best; // best mask
    std::size_t cur_size = 0;
    std::size_t best_size = 0;
    std::vector<std::vector<u64>> cand_stack;
    std::vector<u64> cliques; // clique-cover scratch
    Controls* ctl = nullptr;
    u64 local_nodes = 0;
    bool halted = false;

    const u64* row(std::size_t v) const { return adj.data() + v * w; }

    static bool test_bit(const std::vector<u64>& m, std::size_t v) {
        return (m[v / 64] >> (v % 64)) & 1;
    }
    static void set_bit(std::vector<u64>& m, std::size_t v) { m[v / 64] |= u64(1) << (v % 64); }
    static void clear_bit(std::vector<u64>& m, std::size_t v) {
        m[v / 64] &= ~(u64(1) << (v % 64));
    }

    // greedy clique cover of cand; stops once the count admits no prune
    std::size_t cover_bound(const std::vector<u64>& cand, std::size_t cap) {
        cliques.assign(w * (cap + 1), 0);
        std::size_t count = 0;
        for (std::size_t word = 0; word < w; ++word) {
            u64 bitsw = cand[word];
            while (bitsw) {
                std::size_t v = word * 64 + static_cast<std::size_t>(__builtin_ctzll(bitsw));
                bitsw &= bitsw - 1;
                const u64* rv = row(v);
                bool placed = false;
                for (std::size_t c = 0; c < count; ++c) {
                    u64* cm = cliques.data() + c * w;
                    bool subset = true; // clique inside N(v)?
                    for (std::size_t t = 0; t < w; ++t)
                        if (cm[t] & ~rv[t]) {
                            subset = false;
                            break;
                        }
                    if (subset) {
                        cm[v / 64] |= u64(1) << (v % 64);
                        placed = true;
                        break;
                    }
                }
                if (!placed) {
                    if (count == cap) return cap + 1; // bound already useless
                    cliques[count * w + v / 64] |= u64(1) << (v % 64);
                    ++count;
                }
            }
        }
        return count;
    }

    void dfs(std::size_t depth) {
        if (halted) return;
        if ((++local_nodes & kFlushMask) == 0) {
            if (ctl->flush(kFlushMask + 1)) {
                halted = true;
                return;
            }
            local_nodes = 0;
        }
        // grow the stack before taking references: emplace_back relocates it,
        // and the recursive calls below grow it further, so references into
        // cand_stack are re-taken after every growth point
        if (depth + 1 >= cand_stack.size()) cand_stack.emplace_back(w, 0);
        std::vector<u64>& cand = cand_stack[depth];
        std::size_t first = n;
        for (std::size_t word = 0; word < w && first == n; ++word)
            if (cand[word]) first = word * 64 + static_cast<std::size_t>(__builtin_ctzll(cand[word]));
        if (first == n) {
            if (cur_size > best_size) {
                best = cur;
                best_size = cur_size;
            }
            return;
        }
        if (best_size >= cur_size) {
            std::size_t gap = best_size - cur_size; // need > gap candidates' cover
            if (cover_bound(cand, gap) <= gap) return;
        }
        // include the least candidate first so the first maximum found is the
        // lexicographically least one
        {
            std::vector<u64>& next = cand_stack[depth + 1];
            const u64* rv = row(first);
            for (std::size_t t = 0; t < w; ++t) next[t] = cand[t] & ~rv[t];
            clear_bit(next, first);
        }
        set_bit(cur, first);
        ++cur_size;
        dfs(depth + 1);
        clear_bit(cur, first);
        --cur_size;
        if (halted) return;
        std::vector<u64>& next2 = cand_stack[depth + 1];
        next2 = cand_stack[depth];
        clear_bit(next2, first);
        dfs(depth + 1);
    }

    void run() {
        cur.assign(w, 0);
        best.assign(w, 0);
        best_size = 0;
        cand_stack.assign(1, std::vector<u64>(w, 0));
        for (std::size_t v = 0; v < n; ++v) set_bit(cand_stack[0], v);
        dfs(0);
        // remaining node count only; a completed search stays exact even if
        // the tally lands past the cap
        ctl->account(local_nodes & kFlushMask);
    }
};

} // namespace

SearchResult solve_graph(const ConflictGraph& g, const Budget& budget, bool parallel,
                         const std::atomic<bool>* stop) {
    auto t0 = clock_type::now();
    Controls ctl;
    ctl.max_nodes = budget.max_nodes;
    ctl.use_deadline = budget.max_seconds > 0;
    if (ctl.use_deadline)
        ctl.deadline = t0 + std::chrono::duration_cast<clock_type::duration>(
                                std::chrono::duration<double>(budget.max_seconds));
    ctl.stop = stop;

    auto comps = components(g);
    const long nc = static_cast<long>(comps.size());
    std::vector<std::vector<std::size_t>> winners(comps.size()); // graph-indexed
    std::vector<char> complete(comps.size(), 1);

#pragma omp parallel for schedule(dynamic, 1) if (parallel && nc > 1)
    for (long ci = 0; ci < nc; ++ci) {
        const auto& comp = comps[ci];
        CompSolver solver;
        solver.n = comp.size();
        solver.w = (comp.size() + 63) / 64;
        solver.adj.assign(solver.n * solver.w, 0);
        for (std::size_t lu = 0; lu < comp.size(); ++lu)
            for (std::size_t lv = 0; lv < comp.size(); ++lv)
                if (lu != lv && g.adjacent(comp[lu], comp[lv]))
                    solver.adj[lu * solver.w + lv / 64] |= u64(1) << (lv % 64);
        solver.ctl = &ctl;
        solver.run();
        auto& win = winners[ci];
        for (std::size_t lv = 0; lv < comp.size(); ++lv)
            if (CompSolver::test_bit(solver.best, lv)) win.push_back(comp[lv]);
        if (solver.halted) complete[ci] = 0;
    }

    SearchResult res;
    res.q = g.q;
    res.lambda = g.lambda;
    for (const auto& win : winners)
        for (std::size_t v : win) res.witness.push_back(g.verts[v]);
    std::sort(res.witness.begin(), res.witness.end());
    res.max_size = res.witness.size();
    res.nodes = ctl.nodes.load();
    if (ctl.interrupted.load())
        res.status = SearchStatus::interrupted;
    else if (ctl.exceeded.load() || std::find(complete.begin(), complete.end(), 0) != complete.end())
        res.status = SearchStatus::budget_exceeded;
    else
        res.status = SearchStatus::exact;
    res.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
    return res;
}

SearchResult max_bset(u64 q, int lambda, const Budget& budget, bool parallel,
                      const std::atomic<bool>* stop) {
    return solve_graph(build_graph(q, lambda), budget, parallel, stop);
}

SearchResult max_bset_restricted(u64 q, int lambda, const std::vector<u64>& allowed,
                                 const Budget& budget, bool parallel,
                                 const std::atomic<bool>* stop) {
    return solve_graph(build_graph_restricted(q, lambda, allowed), budget, parallel, stop);
}

namespace {

// candidate-list backtracking; intentionally naive apart from a count prune
void enumerate_step(const std::vector<std::vector<char>>& adj, const std::vector<std::size_t>& cand,
                    std::vector<std::size_t>& cur, std::vector<std::size_t>& best) {
    if (cand.empty()) {
        if (cur.size() > best.size()) best = cur;
        return;
    }
    if (cur.size() + cand.size() <= best.size()) return;
    std::size_t v = cand.front();
    std::vector<std::size_t> inc;
    for (std::size_t u : cand)
        if (u != v && !adj[v][u]) inc.push_back(u);
    cur.push_back(v);
    enumerate_step(adj, inc, cur, best);
    cur.pop_back();
    std::vector<std::size_t> exc(cand.begin() + 1, cand.end());
    enumerate_step(adj, exc, cur, best);
}

} // namespace

SearchResult max_bset_enumerate(u64 q, int lambda) {
    auto t0 = clock_type::now();
    std::vector<u64> verts = valid_elements(q, lambda);
    const std::size_t n = verts.size();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (conflicts(verts[u], verts[v], q, lambda)) adj[u][v] = adj[v][u] = 1;
    std::vector<std::size_t> cand(n);
    for (std::size_t i = 0; i < n; ++i) cand[i] = i;
    std::vector<std::size_t> cur, best;
    enumerate_step(adj, cand, cur, best);
    SearchResult res;
    res.q = q;
    res.lambda = lambda;
    for (std::size_t v : best) res.witness.push_back(verts[v]);
    std::sort(res.witness.begin(), res.witness.end());
    res.max_size = res.witness.size();
    res.status = SearchStatus::exact;
    res.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
    return res;
}

} // namespace b1set
