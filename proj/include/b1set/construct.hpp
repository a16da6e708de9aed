#pragma once

#include "b1set/bset.hpp"
#include "b1set/oracle.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace b1set {

// whether a reported size is provably the maximum or only a lower bound
enum class Exactness { exact, lower_bound };
const char* to_string(Exactness e);

struct Step {
    std::string op;   // construction rule or base lookup applied
    u64 q = 0;        // modulus the step produced a set for
    u64 base_q = 0;   // sub-modulus consumed, 0 for terminal steps
    u64 size = 0;
    std::string note; // per-divisor detail, fallback usage, ...
};

struct Report {
    BSet set;
    Exactness exactness = Exactness::exact;
    std::vector<Step> steps;        // outermost rule first
    std::string base_source;        // "builtin" | "user-file" | "oracle" | "none"
    std::vector<std::string> notes; // remarks such as size-claim mismatches
};

// base set for a sub-modulus together with how it was obtained and whether
// its size is known to be the maximum
struct ResolvedBase {
    BSet set;
    std::string source;
    bool maximal = false;
};

// raised when no base set can be produced within budget; names the modulus
struct provider_error : std::runtime_error {
    u64 sub_q;
    provider_error(u64 q, const std::string& msg) : std::runtime_error(msg), sub_q(q) {}
};

// base sets are looked up builtin-first, then user-supplied, then by search
class BaseProvider {
  public:
    BaseProvider();
    void add_user_set(const BSet& s); // verified; replaces an earlier user set for the same q
    void load_user_file(const std::string& path);
    void load_user_dir(const std::string& dir); // *.json in filename order
    void set_budget(const Budget& b);
    const Budget& budget() const { return budget_; }
    ResolvedBase resolve(u64 q) const;

  private:
    std::map<u64, ResolvedBase> builtin_;
    std::map<u64, ResolvedBase> user_;
    Budget budget_{};
};

// --- individual construction rules ------------------------------------------
// Every rule validates its inputs (shape, base modulus, base validity) and
// verifies its output, throwing std::invalid_argument / std::logic_error on
// violation.  "base" is a valid set for the indicated sub-modulus.

// a >= 4: two arithmetic progressions of odd residues plus 8*base(q/8)
BSet fold8_ap(const ModulusShape& sh, const BSet& base);
// a == 3, b >= 1: per-divisor two-interval unit layers plus 8*base(q/8)
BSet fold8_layers(const ModulusShape& sh, const BSet& base);
// a == 0, b == 1 (q = 3r): orbit slices of coset representatives, per divisor
BSet triple_coset(const ModulusShape& sh, std::vector<std::string>* class_notes = nullptr);
// a == 2, b == 1 (q = 12r): three unit intervals per divisor plus 6*base(2r)
BSet lift_12r(const ModulusShape& sh, const BSet& base);
// a == 1, b >= 3: unit intervals, six times orbit slices, 27*base(2*3^(b-3)*r)
BSet lift_2x3b(const ModulusShape& sh, const BSet& base);

// conjectured maximum within one divisor class V_d of Z_{3d}, d coprime to 6
struct SizeFormula {
    u64 d = 1;
    u64 n = 1; // ord_d(2)
    u64 value = 0;
};
SizeFormula m4_class(u64 d);
u64 m4_formula(u64 r); // sum of m4_class over the divisors of r

// divisors d for which m4_class(d) has been confirmed by exhaustive search to
// equal the true class maximum; drives the exactness flag of triple_coset
const std::vector<u64>& confirmed_class_divisors();

// printed size bound for the a == 1, b >= 3 rule; the realized size can
// exceed it, which dispatch reports as a note
u64 claimed_size_2x3b(const ModulusShape& sh, u64 base_size);

// route q = 2^a 3^b r to the applicable rule; shapes without a rule fall back
// to the provider (builtin/user/search)
Report construct(u64 q, const BaseProvider& provider);
Report construct(u64 q);

} // namespace b1set
