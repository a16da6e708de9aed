// Compares the serial and OpenMP variants of the oracle kernels: conflict
// graph construction (definitional pairwise scan, serial and parallel, vs the
// inverted-index build) and the component search (serial vs parallel), and
// checks that every variant produces identical results.

#include "b1set/oracle.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace b1set;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_graph(const ConflictGraph& a, const ConflictGraph& b) {
    return a.verts == b.verts && a.bits == b.bits;
}

int bench_q(u64 q, int lambda) {
    std::cout << "q=" << q << " lambda=" << lambda << "\n";

    auto t0 = std::chrono::steady_clock::now();
    ConflictGraph serial = build_graph_pairwise(q, lambda, false);
    double ts = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    ConflictGraph parallel = build_graph_pairwise(q, lambda, true);
    double tp = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    ConflictGraph indexed = build_graph(q, lambda);
    double ti = seconds_since(t0);

    bool graphs_ok = same_graph(serial, parallel) && same_graph(serial, indexed);
    std::cout << "  graph   pairwise-serial " << ts << " s   pairwise-omp " << tp
              << " s   indexed " << ti << " s   " << (graphs_ok ? "identical" : "MISMATCH")
              << " (" << serial.verts.size() << " vertices)\n";

    t0 = std::chrono::steady_clock::now();
    SearchResult rs = solve_graph(indexed, Budget{}, false);
    double ss = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    SearchResult rp = solve_graph(indexed, Budget{}, true);
    double sp = seconds_since(t0);

    bool search_ok = rs.status == SearchStatus::exact && rp.status == SearchStatus::exact &&
                     rs.max_size == rp.max_size && rs.witness == rp.witness;
    std::cout << "  search  serial " << ss << " s (" << rs.nodes << " nodes)   parallel " << sp
              << " s (" << rp.nodes << " nodes)   max " << rs.max_size << "   "
              << (search_ok ? "identical" : "MISMATCH") << "\n";

    return graphs_ok && search_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<u64> qs;
    int lambda = 4;
    bool smoke = false;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--smoke") {
            smoke = true;
        } else if (arg == "--lambda" && i + 1 < argc) {
            lambda = std::atoi(argv[++i]);
        } else if (!arg.empty() && arg.find_first_not_of("0123456789") == std::string::npos) {
            qs.push_back(std::stoull(arg));
        } else {
            std::cerr << "usage: bench_oracle [--smoke] [--lambda L] [q ...]\n";
            return 2;
        }
    }
    if (qs.empty()) qs = smoke ? std::vector<u64>{48, 54, 84} : std::vector<u64>{84, 120, 162, 240, 420};

#ifdef _OPENMP
    std::cout << "OpenMP threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "OpenMP: not enabled\n";
#endif

    int rc = 0;
    for (u64 q : qs) rc |= bench_q(q, lambda);
    if (rc) std::cerr << "bench_oracle: kernel variants disagree\n";
    return rc;
}
