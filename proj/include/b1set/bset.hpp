#pragma once

#include "b1set/numtheory.hpp"

#include <optional>
#include <vector>

namespace b1set {

// B in Z_q with all products i*b mod q (1 <= i <= lambda, b in B) distinct
struct BSet {
    u64 q = 0;
    int lambda = 4;
    std::vector<u64> elements; // ascending, distinct, in [0, q)
};

// validates range, nonzero-ness and distinctness, sorts; throws
// std::invalid_argument
BSet make_bset(u64 q, int lambda, std::vector<u64> elements);

// i*x == j*y (mod q) with (i, x) != (j, y)
struct Violation {
    int i = 0;
    u64 x = 0;
    int j = 0;
    u64 y = 0;
};

// first collision under the canonical scan (elements ascending, then i
// ascending); nullopt when the defining property holds.  The raw overload
// accepts arbitrary residue lists (0 and duplicates included) so degenerate
// inputs produce a violation report instead of a type error.
std::optional<Violation> find_violation(u64 q, int lambda, std::vector<u64> elements);
std::optional<Violation> find_violation(const BSet& s);
bool verify(const BSet& s);

// k*x != 0 (mod q) for all 1 <= k <= lambda-1; a one-element set {x} is
// valid iff this holds (the product lambda*x may wrap to 0)
bool valid_element(u64 x, u64 q, int lambda);
// would {x, y} alone violate the property, i.e. some i*x == j*y (mod q)?
bool conflicts(u64 x, u64 y, u64 q, int lambda);

// {c * b mod q : b in B} in ascending order; duplicates are kept so a
// non-injective scaling is visible to the caller
std::vector<u64> scaled(const BSet& s, u64 c);

// --- residue-class partitions of Z_q, q = 2^a 3^b r -------------------------
// V_d (d | r): residues x with gcd(x, r) = r/d; closed under the product range
u64 class_of(u64 x, const ModulusShape& sh);
// U_ij: gcd(x, 2^a 3^b) = 2^i 3^j; requires x != 0
std::pair<int, int> gcd_exponents(u64 x, const ModulusShape& sh);
// L_i: gcd(x, 8) = 2^i for i < 3, and L_3 = multiples of 8; requires 8 | q, x != 0
int two_adic_level(u64 x, u64 q);

} // namespace b1set
