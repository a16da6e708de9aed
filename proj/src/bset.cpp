#include "b1set/bset.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace b1set {

BSet make_bset(u64 q, int lambda, std::vector<u64> elements) {
    if (q < 2) throw std::invalid_argument("make_bset: modulus must be at least 2");
    if (lambda < 1) throw std::invalid_argument("make_bset: lambda must be positive");
    std::sort(elements.begin(), elements.end());
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (elements[i] == 0 || elements[i] >= q)
            throw std::invalid_argument("make_bset: element " + std::to_string(elements[i]) +
                                        " outside [1, " + std::to_string(q) + ")");
        if (i > 0 && elements[i] == elements[i - 1])
            throw std::invalid_argument("make_bset: duplicate element " +
                                        std::to_string(elements[i]));
    }
    return BSet{q, lambda, std::move(elements)};
}

std::optional<Violation> find_violation(u64 q, int lambda, std::vector<u64> elements) {
    if (q < 2) throw std::invalid_argument("find_violation: modulus must be at least 2");
    if (lambda < 1) throw std::invalid_argument("find_violation: lambda must be positive");
    for (u64 x : elements)
        if (x >= q)
            throw std::invalid_argument("find_violation: element " + std::to_string(x) +
                                        " outside [0, " + std::to_string(q) + ")");
    std::sort(elements.begin(), elements.end());
    std::unordered_map<u64, std::pair<int, u64>> seen;
    seen.reserve(elements.size() * lambda * 2);
    for (u64 x : elements) {
        for (int i = 1; i <= lambda; ++i) {
            u64 v = mulmod(static_cast<u64>(i), x, q);
            auto [it, fresh] = seen.emplace(v, std::make_pair(i, x));
            if (!fresh) return Violation{it->second.first, it->second.second, i, x};
        }
    }
    return std::nullopt;
}

std::optional<Violation> find_violation(const BSet& s) {
    return find_violation(s.q, s.lambda, s.elements);
}

bool verify(const BSet& s) { return !find_violation(s).has_value(); }

bool valid_element(u64 x, u64 q, int lambda) {
    for (int k = 1; k < lambda; ++k)
        if (mulmod(static_cast<u64>(k), x, q) == 0) return false;
    return true;
}

bool conflicts(u64 x, u64 y, u64 q, int lambda) {
    for (int i = 1; i <= lambda; ++i) {
        u64 ix = mulmod(static_cast<u64>(i), x, q);
        for (int j = 1; j <= lambda; ++j)
            if (ix == mulmod(static_cast<u64>(j), y, q)) return true;
    }
    return false;
}

std::vector<u64> scaled(const BSet& s, u64 c) {
    std::vector<u64> out;
    out.reserve(s.elements.size());
    for (u64 b : s.elements) out.push_back(mulmod(c, b, s.q));
    std::sort(out.begin(), out.end());
    return out;
}

u64 class_of(u64 x, const ModulusShape& sh) {
    if (x >= sh.q) throw std::invalid_argument("class_of: residue out of range");
    u64 g = std::gcd(x, sh.r); // gcd(0, r) = r, putting 0 into V_1
    return sh.r / g;
}

std::pair<int, int> gcd_exponents(u64 x, const ModulusShape& sh) {
    if (x == 0 || x >= sh.q)
        throw std::invalid_argument("gcd_exponents: residue must lie in [1, q)");
    int i = 0, j = 0;
    u64 v = x;
    while (i < sh.a && v % 2 == 0) {
        v /= 2;
        ++i;
    }
    v = x;
    while (j < sh.b && v % 3 == 0) {
        v /= 3;
        ++j;
    }
    return {i, j};
}

int two_adic_level(u64 x, u64 q) {
    if (q % 8 != 0) throw std::invalid_argument("two_adic_level: modulus not divisible by 8");
    if (x == 0 || x >= q) throw std::invalid_argument("two_adic_level: residue out of range");
    if (x % 8 == 0) return 3;
    int i = 0;
    while (x % 2 == 0) {
        x /= 2;
        ++i;
    }
    return i;
}

} // namespace b1set
