#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace b1set {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 exp, u64 m);
u64 invmod(u64 a, u64 m); // throws std::invalid_argument unless gcd(a, m) == 1

// prime factorization by trial division, ascending primes
std::vector<std::pair<u64, int>> factorize(u64 n);
u64 euler_phi(u64 n);
std::vector<u64> divisors(u64 n); // ascending

// q = 2^a * 3^b * r with gcd(r, 6) = 1
struct ModulusShape {
    u64 q = 0;
    int a = 0;
    int b = 0;
    u64 r = 1;
    std::vector<std::pair<u64, int>> r_factors; // prime factorization of r
};
ModulusShape factor_shape(u64 q);

// least n > 0 with l^n == 1 (mod m); composed from prime-power moduli,
// where orders lift by one factor of p per extra exponent step
u64 multiplicative_order(u64 l, u64 m);
u64 multiplicative_order_naive(u64 l, u64 m); // reference loop for cross-checks

// orbit x, gx, g^2 x, ... mod m until it closes
std::vector<u64> cyclic_orbit(u64 g, u64 x, u64 m);

// cosets of <g> acting on the units of Z_m; each coset sorted ascending,
// cosets ordered by their minimum element
std::vector<std::vector<u64>> unit_cosets(u64 g, u64 m);
std::vector<u64> coset_reps(u64 g, u64 m); // minimum element per coset

// One representative per coset of <2> in Z_{3d}^*, chosen so that the slices
// {2^{3i} x mod d : 0 <= i <= floor(ord_d(2) / 3)} of distinct representatives
// never meet.  The minimal representatives usually work as-is; when they do
// not, single cosets are re-pointed (doubling a member congruent mod d to an
// already-chosen representative, else any member), with backtracking.
struct SeparatedReps {
    std::vector<u64> reps;
    bool adjusted = false; // some representative differs from the coset minimum
};
SeparatedReps separated_reps_3d(u64 d);
bool reps_separated(u64 d, const std::vector<u64>& reps);

} // namespace b1set
