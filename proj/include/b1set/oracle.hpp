#pragma once

#include "b1set/bset.hpp"

#include <atomic>
#include <cstddef>
#include <vector>

namespace b1set {

// dense-bitset conflict graph on the self-valid elements of [1, q)
struct ConflictGraph {
    u64 q = 0;
    int lambda = 4;
    std::vector<u64> verts;  // ascending
    std::size_t words = 0;   // row width in 64-bit words
    std::vector<u64> bits;   // verts.size() rows, row-major

    bool adjacent(std::size_t u, std::size_t v) const {
        return (bits[u * words + v / 64] >> (v % 64)) & 1;
    }
    const u64* row(std::size_t v) const { return bits.data() + v * words; }
};

// inverted-index build: bucket the products i*x, connect bucket members
ConflictGraph build_graph(u64 q, int lambda);
// definitional kernel: test every vertex pair; serial or OpenMP over rows
ConflictGraph build_graph_pairwise(u64 q, int lambda, bool parallel);
// restrict vertices to an allowed element subset (conflicts still mod q)
ConflictGraph build_graph_restricted(u64 q, int lambda, const std::vector<u64>& allowed);

// connected components as sorted lists of vertex indices, ordered by minimum
std::vector<std::vector<std::size_t>> components(const ConflictGraph& g);

enum class SearchStatus { exact, budget_exceeded, interrupted };
const char* to_string(SearchStatus s);

struct Budget {
    u64 max_nodes = 100'000'000;
    double max_seconds = 300.0; // <= 0 disables the time limit
};

struct SearchResult {
    u64 q = 0;
    int lambda = 4;
    std::vector<u64> witness; // ascending; lexicographically least maximum when exact
    u64 max_size = 0;
    SearchStatus status = SearchStatus::exact;
    u64 nodes = 0;
    double seconds = 0.0;
};

// exact maximum via branch-and-bound (greedy clique-cover upper bound,
// ascending vertex order, include-first); per-component searches may run in
// parallel, with results merged in canonical order so completed searches are
// deterministic
SearchResult solve_graph(const ConflictGraph& g, const Budget& budget = {}, bool parallel = true,
                         const std::atomic<bool>* stop = nullptr);
SearchResult max_bset(u64 q, int lambda, const Budget& budget = {}, bool parallel = true,
                      const std::atomic<bool>* stop = nullptr);
SearchResult max_bset_restricted(u64 q, int lambda, const std::vector<u64>& allowed,
                                 const Budget& budget = {}, bool parallel = true,
                                 const std::atomic<bool>* stop = nullptr);

// plain exhaustive reference (candidate-list backtracking, no bound machinery
// beyond a remaining-count prune); used to cross-check the solver in tests
SearchResult max_bset_enumerate(u64 q, int lambda);

} // namespace b1set
