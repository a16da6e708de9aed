#include "b1set/numtheory.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace b1set {

u64 mulmod(u64 a, u64 b, u64 m) {
    if (m == 0) throw std::invalid_argument("mulmod: modulus is zero");
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 0) throw std::invalid_argument("powmod: modulus is zero");
    if (m == 1) return 0;
    u64 acc = 1;
    base %= m;
    while (exp) {
        if (exp & 1) acc = mulmod(acc, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return acc;
}

u64 invmod(u64 a, u64 m) {
    if (m == 0) throw std::invalid_argument("invmod: modulus is zero");
    using i128 = __int128;
    i128 r0 = m, r1 = a % m, s0 = 0, s1 = 1;
    while (r1 != 0) {
        i128 k = r0 / r1;
        r0 -= k * r1;
        std::swap(r0, r1);
        s0 -= k * s1;
        std::swap(s0, s1);
    }
    if (r0 != 1)
        throw std::invalid_argument("invmod: " + std::to_string(a) + " is not invertible mod " +
                                    std::to_string(m));
    s0 %= m;
    if (s0 < 0) s0 += m;
    return static_cast<u64>(s0);
}

std::vector<std::pair<u64, int>> factorize(u64 n) {
    if (n == 0) throw std::invalid_argument("factorize: zero");
    std::vector<std::pair<u64, int>> out;
    auto strip = [&](u64 p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    for (u64 p = 5; p * p <= n; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

u64 euler_phi(u64 n) {
    u64 res = n;
    for (auto [p, e] : factorize(n)) {
        (void)e;
        res = res / p * (p - 1);
    }
    return res;
}

std::vector<u64> divisors(u64 n) {
    std::vector<u64> out{1};
    for (auto [p, e] : factorize(n)) {
        std::size_t base = out.size();
        u64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

ModulusShape factor_shape(u64 q) {
    if (q < 2) throw std::invalid_argument("factor_shape: modulus must be at least 2");
    ModulusShape sh{q, 0, 0, q, {}};
    while (sh.r % 2 == 0) {
        sh.r /= 2;
        ++sh.a;
    }
    while (sh.r % 3 == 0) {
        sh.r /= 3;
        ++sh.b;
    }
    if (sh.r > 1) sh.r_factors = factorize(sh.r);
    return sh;
}

namespace {

int val2(u64 n) {
    int v = 0;
    while (n % 2 == 0 && n > 0) {
        n /= 2;
        ++v;
    }
    return v;
}

u64 order_mod_prime(u64 l, u64 p) {
    // start from p-1 and strip prime factors while the power stays 1
    u64 n = p - 1;
    for (auto [f, e] : factorize(p - 1)) {
        (void)e;
        while (n % f == 0 && powmod(l, n / f, p) == 1) n /= f;
    }
    return n;
}

u64 order_prime_power(u64 l, u64 p, int k) {
    if (p == 2) {
        // ord mod 2^k reads off the 2-adic valuation of l -+ 1
        u64 m = u64(1) << k;
        u64 lr = l & (m - 1);
        if (k == 1 || lr == 1) return 1;
        if (lr % 4 == 1) {
            int mu = val2(lr - 1);
            return k <= mu ? u64(1) : u64(1) << (k - mu);
        }
        int mu = val2(lr + 1);
        int e = k - mu;
        if (e < 1) e = 1;
        return u64(1) << e;
    }
    u64 n = order_mod_prime(l % p, p);
    // mu = largest j <= k with l^n == 1 mod p^j; one factor of p per level above
    int mu = 1;
    u64 pe = p;
    while (mu < k) {
        u64 next = pe * p;
        if (powmod(l, n, next) != 1) break;
        pe = next;
        ++mu;
    }
    u64 ord = n;
    for (int t = mu; t < k; ++t) ord *= p;
    return ord;
}

} // namespace

u64 multiplicative_order(u64 l, u64 m) {
    if (m == 0) throw std::invalid_argument("multiplicative_order: modulus is zero");
    if (m == 1) return 1;
    if (std::gcd(l % m, m) != 1)
        throw std::invalid_argument("multiplicative_order: " + std::to_string(l) +
                                    " is not a unit mod " + std::to_string(m));
    u64 result = 1;
    for (auto [p, k] : factorize(m)) result = std::lcm(result, order_prime_power(l, p, k));
    return result;
}

u64 multiplicative_order_naive(u64 l, u64 m) {
    if (m == 0) throw std::invalid_argument("multiplicative_order_naive: modulus is zero");
    if (m == 1) return 1;
    if (std::gcd(l % m, m) != 1)
        throw std::invalid_argument("multiplicative_order_naive: not a unit");
    u64 v = l % m;
    u64 n = 1;
    while (v != 1) {
        v = mulmod(v, l, m);
        ++n;
    }
    return n;
}

std::vector<u64> cyclic_orbit(u64 g, u64 x, u64 m) {
    if (m == 0) throw std::invalid_argument("cyclic_orbit: modulus is zero");
    g %= m;
    x %= m;
    std::vector<u64> orbit{x};
    for (u64 y = mulmod(g, x, m); y != x; y = mulmod(y, g, m)) {
        orbit.push_back(y);
        if (orbit.size() > m) throw std::invalid_argument("cyclic_orbit: orbit does not close");
    }
    return orbit;
}

std::vector<std::vector<u64>> unit_cosets(u64 g, u64 m) {
    if (m == 0) throw std::invalid_argument("unit_cosets: modulus is zero");
    if (m == 1) return {{1}}; // trivial group, written multiplicatively
    if (std::gcd(g % m, m) != 1)
        throw std::invalid_argument("unit_cosets: generator is not a unit");
    std::vector<char> seen(m, 0);
    std::vector<std::vector<u64>> out;
    for (u64 x = 1; x < m; ++x) {
        if (seen[x] || std::gcd(x, m) != 1) continue;
        auto orb = cyclic_orbit(g, x, m);
        for (u64 y : orb) seen[y] = 1;
        std::sort(orb.begin(), orb.end());
        out.push_back(std::move(orb));
    }
    return out;
}

std::vector<u64> coset_reps(u64 g, u64 m) {
    std::vector<u64> reps;
    for (const auto& c : unit_cosets(g, m)) reps.push_back(c.front());
    return reps;
}

namespace {

// slice {2^{3i} x mod d : 0 <= i <= top} as a sorted vector
std::vector<u64> slice_mod_d(u64 d, u64 x, u64 top) {
    std::vector<u64> s;
    s.reserve(top + 1);
    u64 p = 1; // 8^i mod d
    for (u64 i = 0; i <= top; ++i) {
        s.push_back(mulmod(p, x, d));
        p = mulmod(p, 8, d);
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

bool slices_disjoint(const std::vector<u64>& a, const std::vector<u64>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return false;
        if (a[i] < b[j])
            ++i;
        else
            ++j;
    }
    return true;
}

} // namespace

bool reps_separated(u64 d, const std::vector<u64>& reps) {
    u64 top = multiplicative_order(2, d) / 3;
    std::vector<std::vector<u64>> slices;
    slices.reserve(reps.size());
    for (u64 x : reps) slices.push_back(slice_mod_d(d, x % d, top));
    for (std::size_t i = 0; i < slices.size(); ++i)
        for (std::size_t j = i + 1; j < slices.size(); ++j)
            if (!slices_disjoint(slices[i], slices[j])) return false;
    return true;
}

SeparatedReps separated_reps_3d(u64 d) {
    if (d < 2 || d % 2 == 0 || d % 3 == 0)
        throw std::invalid_argument("separated_reps_3d: d must be > 1 and coprime to 6");
    u64 m = 3 * d;
    auto cosets = unit_cosets(2, m);
    u64 top = multiplicative_order(2, d) / 3;

    std::vector<u64> chosen;
    std::vector<std::vector<u64>> slices; // mod-d slices of chosen reps

    auto admissible = [&](u64 x) {
        auto sx = slice_mod_d(d, x % d, top);
        for (const auto& s : slices)
            if (!slices_disjoint(sx, s)) return false;
        slices.push_back(std::move(sx));
        return true;
    };

    // candidate order per coset: minimum first, then doubled members whose
    // residue mod d matches an already-chosen representative, then the rest
    auto candidates = [&](std::size_t ci) {
        std::vector<u64> cands{cosets[ci].front()};
        for (u64 x : chosen)
            for (u64 e : cosets[ci])
                if (e % d == x % d && e != x) cands.push_back(2 * e % m);
        for (u64 e : cosets[ci]) cands.push_back(e);
        std::vector<u64> out;
        for (u64 c : cands)
            if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
        return out;
    };

    std::function<bool(std::size_t)> bt = [&](std::size_t ci) {
        if (ci == cosets.size()) return true;
        for (u64 c : candidates(ci)) {
            if (!admissible(c)) continue;
            chosen.push_back(c);
            if (bt(ci + 1)) return true;
            chosen.pop_back();
            slices.pop_back();
        }
        return false;
    };
    if (!bt(0))
        throw std::runtime_error("separated_reps_3d: no separated system for d=" +
                                 std::to_string(d));

    SeparatedReps out;
    out.reps = chosen;
    for (std::size_t i = 0; i < cosets.size(); ++i)
        if (chosen[i] != cosets[i].front()) out.adjusted = true;
    return out;
}

} // namespace b1set
