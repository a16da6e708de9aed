#include "b1set/construct.hpp"

#include "b1set/set_io.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <sstream>

namespace b1set {

const char* to_string(Exactness e) {
    return e == Exactness::exact ? "exact" : "lower-bound";
}

namespace {

u64 pow_u64(u64 base, int exp) {
    u64 v = 1;
    for (int i = 0; i < exp; ++i) v *= base;
    return v;
}

void require_base(const char* op, const BSet& base, u64 expect_q) {
    if (base.q != expect_q)
        throw std::invalid_argument(std::string(op) + ": base set is mod " +
                                    std::to_string(base.q) + ", expected mod " +
                                    std::to_string(expect_q));
    if (base.lambda != 4)
        throw std::invalid_argument(std::string(op) + ": base set must have lambda 4");
    if (!verify(base))
        throw std::invalid_argument(std::string(op) + ": base set fails verification");
}

BSet finish(const char* op, u64 q, std::vector<u64> elems) {
    BSet out = make_bset(q, 4, std::move(elems)); // throws on duplicates
    if (!verify(out))
        throw std::logic_error(std::string(op) + ": output fails verification for q=" +
                               std::to_string(q));
    return out;
}

} // namespace

BSet fold8_ap(const ModulusShape& sh, const BSet& base) {
    if (sh.a < 4) throw std::invalid_argument("fold8_ap: needs 16 | q");
    require_base("fold8_ap", base, sh.q / 8);
    const u64 q = sh.q;
    const u64 cnt = q / 16;
    std::vector<u64> elems;
    elems.reserve(2 * cnt + base.elements.size());
    for (u64 i = 0; i < cnt; ++i) elems.push_back(4 * i + 1);
    for (u64 i = 0; i < cnt; ++i) elems.push_back(4 * i + 3 + 3 * (q / 4)); // stays below q
    for (u64 c : base.elements) elems.push_back(mulmod(8, c, q));
    return finish("fold8_ap", q, std::move(elems));
}

BSet fold8_layers(const ModulusShape& sh, const BSet& base) {
    if (sh.a != 3 || sh.b < 1) throw std::invalid_argument("fold8_layers: needs q = 8*3^b*r, b >= 1");
    require_base("fold8_layers", base, sh.q / 8);
    const u64 q = sh.q;
    const u64 r = sh.r;
    std::vector<u64> elems;
    for (u64 d : divisors(r)) {
        const u64 alpha = r / d;
        for (int j = 0; j <= sh.b; ++j) {
            const u64 p3 = pow_u64(3, sh.b - j);
            const u64 md = pow_u64(3, j) * d;
            const u64 offset = 2 * pow_u64(3, sh.b) * r;
            std::size_t before = elems.size();
            for (u64 i = 1; i <= md + 1; ++i)
                if (std::gcd(i, 2 * md) == 1) elems.push_back((i * p3 * alpha + offset) % q);
            for (u64 i = md + 2; i < 2 * md; ++i)
                if (std::gcd(i, 2 * md) == 1) elems.push_back(i * p3 * alpha % q);
            const u64 expect = j == 0 ? euler_phi(d) : 2 * pow_u64(3, j - 1) * euler_phi(d);
            if (elems.size() - before != expect)
                throw std::logic_error("fold8_layers: layer (d=" + std::to_string(d) +
                                       ", j=" + std::to_string(j) + ") has size " +
                                       std::to_string(elems.size() - before) + ", expected " +
                                       std::to_string(expect));
        }
    }
    for (u64 c : base.elements) elems.push_back(mulmod(8, c, q));
    return finish("fold8_layers", q, std::move(elems));
}

SizeFormula m4_class(u64 d) {
    if (d == 0 || std::gcd(d, u64(6)) != 1)
        throw std::invalid_argument("m4_class: d must be coprime to 6");
    SizeFormula f{d, 1, 0};
    if (d == 1) return f;
    f.n = multiplicative_order(2, d);
    const u64 phi = euler_phi(d);
    if (f.n % 2 == 1)
        f.value = ((2 * f.n + 2) / 3 - 1) * phi / f.n;
    else
        f.value = (f.n / 3) * (2 * phi) / f.n;
    return f;
}

u64 m4_formula(u64 r) {
    if (std::gcd(r, u64(6)) != 1) throw std::invalid_argument("m4_formula: r must be coprime to 6");
    u64 total = 0;
    for (u64 d : divisors(r)) total += m4_class(d).value;
    return total;
}

const std::vector<u64>& confirmed_class_divisors() {
    // divisors whose class formula matched an exhaustive class search;
    // notably absent: 17, 41, 43 and 55, where the search beats the formula
    // (class maxima 9, 25, 26 and 25 against formula values 8, 24, 24 and 24),
    // and 59/61, where the search did not finish within budget
    static const std::vector<u64> table = {1,  5,  7,  11, 13, 19, 23, 25,
                                           29, 31, 35, 37, 47, 49, 53, 65};
    return table;
}

namespace {

// orbit slices {2^{3i+shift} * eta} according to the order of 2 mod d
void append_slices(std::vector<u64>& out, u64 eta, u64 n, u64 q) {
    auto emit = [&](u64 from, u64 to, u64 shift) { // exponents 3i+shift, i in [from, to)
        for (u64 i = from; i < to; ++i) out.push_back(mulmod(powmod(2, 3 * i + shift, q), eta, q));
    };
    if (n % 2 == 1 && n % 3 != 0) {
        emit(0, 2 * n / 3, 0);
    } else if (n % 2 == 1) {
        emit(0, n / 3, 0);
        emit(n / 3, (2 * n - 3) / 3, 1);
    } else {
        emit(0, n / 3, 0);
    }
}

std::vector<u64> class_elements(const ModulusShape& sh, u64 d) {
    std::vector<u64> out;
    for (u64 x = 1; x < sh.q; ++x)
        if (class_of(x, sh) == d) out.push_back(x);
    return out;
}

} // namespace

BSet triple_coset(const ModulusShape& sh, std::vector<std::string>* class_notes) {
    if (sh.a != 0 || sh.b != 1) throw std::invalid_argument("triple_coset: needs q = 3r");
    const u64 q = sh.q;
    const u64 r = sh.r;
    std::vector<u64> elems;
    for (u64 d : divisors(r)) {
        if (d == 1) continue; // no valid elements among the multiples of r
        const u64 n = multiplicative_order(2, d);
        const u64 target = m4_class(d).value;
        auto build = [&](const std::vector<u64>& reps) {
            std::vector<u64> t;
            for (u64 x : reps) append_slices(t, mulmod(x, r / d, q), n, q);
            std::sort(t.begin(), t.end());
            t.erase(std::unique(t.begin(), t.end()), t.end());
            return t;
        };
        auto usable = [&](const std::vector<u64>& t) {
            return t.size() == target && verify(BSet{q, 4, t});
        };
        std::vector<u64> t = build(coset_reps(2, 3 * d));
        std::string how = "minimal reps";
        if (!usable(t)) {
            t = build(separated_reps_3d(d).reps);
            how = "adjusted reps";
        }
        if (!usable(t)) {
            SearchResult sr = max_bset_restricted(q, 4, class_elements(sh, d));
            if (sr.status != SearchStatus::exact)
                throw std::runtime_error("triple_coset: class search for d=" + std::to_string(d) +
                                         " exceeded its budget");
            t = sr.witness;
            how = "class search (size " + std::to_string(t.size()) + " vs formula " +
                  std::to_string(target) + ")";
        }
        if (class_notes)
            class_notes->push_back("d=" + std::to_string(d) + ": " + how);
        elems.insert(elems.end(), t.begin(), t.end());
    }
    return finish("triple_coset", q, std::move(elems));
}

BSet lift_12r(const ModulusShape& sh, const BSet& base) {
    if (sh.a != 2 || sh.b != 1) throw std::invalid_argument("lift_12r: needs q = 12r");
    require_base("lift_12r", base, 2 * sh.r);
    const u64 q = sh.q;
    const u64 r = sh.r;
    std::vector<u64> elems;
    for (u64 d : divisors(r)) {
        const u64 alpha = r / d;
        std::size_t before = elems.size();
        for (u64 i = 1; i < 4 * d; ++i)
            if (std::gcd(i, 6 * d) == 1) elems.push_back(i * alpha % q);
        for (u64 i = 1; i <= 2 * d / 3; ++i) // inclusive upper ends
            if (std::gcd(i, 2 * d) == 1) elems.push_back((4 * r + 3 * i * alpha) % q);
        for (u64 i = 2 * d / 3 + 1; i <= 4 * d / 3; ++i)
            if (std::gcd(i, 2 * d) == 1) elems.push_back((8 * r + 3 * i * alpha) % q);
        if (elems.size() - before != 2 * euler_phi(d))
            throw std::logic_error("lift_12r: block d=" + std::to_string(d) + " has size " +
                                   std::to_string(elems.size() - before) + ", expected " +
                                   std::to_string(2 * euler_phi(d)));
    }
    for (u64 c : base.elements) elems.push_back(mulmod(6, c, q));
    return finish("lift_12r", q, std::move(elems));
}

BSet lift_2x3b(const ModulusShape& sh, const BSet& base) {
    if (sh.a != 1 || sh.b < 3) throw std::invalid_argument("lift_2x3b: needs q = 2*3^b*r, b >= 3");
    const u64 r = sh.r;
    const u64 p = pow_u64(3, sh.b - 1); // 3^(b-1)
    require_base("lift_2x3b", base, 2 * (p / 9) * r);
    const u64 q = sh.q;
    std::vector<u64> elems;
    for (u64 d : divisors(r)) {
        const u64 alpha = r / d;
        const u64 m = 2 * p * d;
        std::size_t before = elems.size();
        for (u64 i = 1; i <= p * d + 1; ++i)
            if (std::gcd(i, m) == 1) elems.push_back(i * alpha % q);
        for (u64 i = p * d + 2; i < m; ++i)
            if (std::gcd(i, m) == 1) elems.push_back((i * alpha + 4 * p * r) % q);
        if (elems.size() - before != euler_phi(m))
            throw std::logic_error("lift_2x3b: interval block d=" + std::to_string(d) +
                                   " has size " + std::to_string(elems.size() - before) +
                                   ", expected " + std::to_string(euler_phi(m)));
    }
    const u64 mod = p * r; // orbit slices live mod 3^(b-1) r, then scale by 6
    for (u64 d : divisors(r)) {
        const u64 m1 = multiplicative_order(2, p * d);
        const u64 m2 = multiplicative_order(2, (p / 3) * d);
        std::vector<u64> t;
        for (u64 x : coset_reps(2, (p / 3) * d)) {
            const u64 eta = mulmod(x, r / d, mod);
            if (m1 == 3 * m2 && m2 % 3 != 0) {
                for (u64 i = 0; i < m2; ++i) t.push_back(mulmod(powmod(2, 3 * i, mod), eta, mod));
            } else if (m1 == 3 * m2) {
                for (u64 i = 0; i < m2 / 3; ++i)
                    t.push_back(mulmod(powmod(2, 3 * i, mod), eta, mod));
                for (u64 i = m2 / 3; i < 2 * m2 / 3; ++i)
                    t.push_back(mulmod(powmod(2, 3 * i + 1, mod), eta, mod));
                for (u64 i = 2 * m2 / 3; i + 1 < m2; ++i)
                    t.push_back(mulmod(powmod(2, 3 * i + 2, mod), eta, mod));
            } else if (m1 == m2) {
                for (u64 delta = 0; delta < 3; ++delta) {
                    const u64 shifted = (eta + (p / 3) * r % mod * delta) % mod;
                    for (u64 i = 0; i < m1 / 3; ++i)
                        t.push_back(mulmod(powmod(2, 3 * i + delta, mod), shifted, mod));
                }
            } else {
                throw std::logic_error("lift_2x3b: order pattern (" + std::to_string(m1) + ", " +
                                       std::to_string(m2) + ") for d=" + std::to_string(d) +
                                       " matches no slice rule");
            }
        }
        std::vector<u64> check(t);
        std::sort(check.begin(), check.end());
        if (std::adjacent_find(check.begin(), check.end()) != check.end())
            throw std::logic_error("lift_2x3b: orbit slices for d=" + std::to_string(d) +
                                   " repeat a residue");
        for (u64 v : t) elems.push_back(mulmod(6, v, q));
    }
    for (u64 c : base.elements) elems.push_back(mulmod(27, c, q));
    return finish("lift_2x3b", q, std::move(elems));
}

u64 claimed_size_2x3b(const ModulusShape& sh, u64 base_size) {
    if (sh.a != 1 || sh.b < 3)
        throw std::invalid_argument("claimed_size_2x3b: needs q = 2*3^b*r, b >= 3");
    const u64 unit = 2 * pow_u64(3, sh.b - 3); // 2*3^(b-3)
    u64 deficit = 0;
    for (u64 d : divisors(sh.r)) {
        const u64 od = multiplicative_order(2, d);
        if (od % pow_u64(3, sh.b - 2) != 0) deficit += unit * euler_phi(d) / std::lcm(unit, od);
    }
    return base_size + 4 * unit * sh.r - deficit;
}

// --- provider ----------------------------------------------------------------

BaseProvider::BaseProvider() {
    auto put = [&](u64 q, std::vector<u64> elems, bool maximal) {
        builtin_[q] = ResolvedBase{make_bset(q, 4, std::move(elems)), "builtin", maximal};
    };
    put(6, {1}, true);
    put(10, {1, 9}, true);
    put(14, {1, 13}, true);
    put(15, {1, 7}, true);
    put(30, {1, 7}, false); // handy chain base; the true maximum for 30 is larger
}

void BaseProvider::add_user_set(const BSet& s) {
    if (s.lambda != 4)
        throw std::invalid_argument("base registry: base sets must have lambda 4");
    if (!verify(s))
        throw std::invalid_argument("base registry: set for q=" + std::to_string(s.q) +
                                    " fails verification");
    user_[s.q] = ResolvedBase{s, "user-file", false}; // maximality unknown
}

void BaseProvider::load_user_file(const std::string& path) { add_user_set(read_set_file(path)); }

void BaseProvider::load_user_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw std::invalid_argument("base registry: not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end()); // later files win on duplicate q
    for (const auto& f : files) load_user_file(f.string());
}

void BaseProvider::set_budget(const Budget& b) { budget_ = b; }

ResolvedBase BaseProvider::resolve(u64 q) const {
    if (auto it = builtin_.find(q); it != builtin_.end()) return it->second;
    if (auto it = user_.find(q); it != user_.end()) return it->second;
    SearchResult sr = max_bset(q, 4, budget_);
    if (sr.status != SearchStatus::exact)
        throw provider_error(q, "no base set for q=" + std::to_string(q) +
                                    ": search stopped with status " +
                                    std::string(to_string(sr.status)) + " after " +
                                    std::to_string(sr.nodes) + " nodes");
    return ResolvedBase{make_bset(q, 4, sr.witness), "oracle", true};
}

// --- dispatch ----------------------------------------------------------------

namespace {

std::string join_notes(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += "; ";
        out += p;
    }
    return out;
}

Report dispatch(u64 q, const BaseProvider& provider, bool top_level) {
    const ModulusShape sh = factor_shape(q);
    Report rep;

    if (sh.a >= 4) {
        Report sub = dispatch(q / 8, provider, false);
        rep.set = fold8_ap(sh, sub.set);
        rep.exactness = sub.exactness; // size adds exactly q/8 over the sub-modulus
        rep.steps.push_back(Step{"fold8_ap", q, q / 8, rep.set.elements.size(),
                                 "progressions 4i+1 and 4i+3+3q/4, plus 8x the base"});
        rep.steps.insert(rep.steps.end(), sub.steps.begin(), sub.steps.end());
        rep.base_source = sub.base_source;
        rep.notes = sub.notes;
        return rep;
    }

    if (sh.a == 3 && sh.b >= 1) {
        Report sub = dispatch(q / 8, provider, false);
        rep.set = fold8_layers(sh, sub.set);
        rep.exactness = sub.exactness;
        rep.steps.push_back(Step{"fold8_layers", q, q / 8, rep.set.elements.size(),
                                 "two-interval unit layers per divisor, plus 8x the base"});
        rep.steps.insert(rep.steps.end(), sub.steps.begin(), sub.steps.end());
        rep.base_source = sub.base_source;
        rep.notes = sub.notes;
        return rep;
    }

    if (sh.a == 0 && sh.b == 1) {
        std::vector<std::string> class_notes;
        rep.set = triple_coset(sh, &class_notes);
        const auto& confirmed = confirmed_class_divisors();
        std::vector<u64> unconfirmed;
        for (u64 d : divisors(sh.r))
            if (std::find(confirmed.begin(), confirmed.end(), d) == confirmed.end())
                unconfirmed.push_back(d);
        rep.exactness = unconfirmed.empty() ? Exactness::exact : Exactness::lower_bound;
        rep.steps.push_back(
            Step{"triple_coset", q, 0, rep.set.elements.size(), join_notes(class_notes)});
        rep.base_source = "none";
        if (!unconfirmed.empty()) {
            std::ostringstream os;
            os << "class maximum unconfirmed for divisor(s)";
            for (u64 d : unconfirmed) os << " " << d;
            os << "; size reported as a lower bound";
            rep.notes.push_back(os.str());
        }
        return rep;
    }

    if (top_level && sh.a == 2 && sh.b == 1) {
        ResolvedBase base = provider.resolve(2 * sh.r);
        rep.set = lift_12r(sh, base.set);
        rep.exactness = Exactness::lower_bound; // additive bound, tight in every search so far
        rep.steps.push_back(Step{"lift_12r", q, 2 * sh.r, rep.set.elements.size(),
                                 "three unit intervals per divisor, plus 6x the base"});
        rep.steps.push_back(
            Step{"base", 2 * sh.r, 0, base.set.elements.size(), "source: " + base.source});
        rep.base_source = base.source;
        return rep;
    }

    if (top_level && sh.a == 1 && sh.b >= 3) {
        const u64 base_q = 2 * pow_u64(3, sh.b - 3) * sh.r;
        ResolvedBase base = provider.resolve(base_q);
        rep.set = lift_2x3b(sh, base.set);
        rep.exactness = Exactness::lower_bound;
        rep.steps.push_back(Step{"lift_2x3b", q, base_q, rep.set.elements.size(),
                                 "unit intervals, 6x orbit slices, 27x the base"});
        rep.steps.push_back(
            Step{"base", base_q, 0, base.set.elements.size(), "source: " + base.source});
        rep.base_source = base.source;
        const u64 claimed = claimed_size_2x3b(sh, base.set.elements.size());
        if (claimed != rep.set.elements.size()) {
            std::ostringstream os;
            os << "size bound predicts " << claimed << " but the construction realizes "
               << rep.set.elements.size() << "; reporting the realized size";
            rep.notes.push_back(os.str());
        }
        return rep;
    }

    // no rule for this shape: the set IS the resolved base
    ResolvedBase base = provider.resolve(q);
    rep.set = base.set;
    rep.exactness = base.maximal ? Exactness::exact : Exactness::lower_bound;
    rep.steps.push_back(
        Step{"base", q, 0, rep.set.elements.size(), "source: " + base.source});
    rep.base_source = base.source;
    return rep;
}

} // namespace

Report construct(u64 q, const BaseProvider& provider) { return dispatch(q, provider, true); }

Report construct(u64 q) {
    BaseProvider provider;
    return construct(q, provider);
}

} // namespace b1set
