#pragma once

#include "b1set/bset.hpp"

#include <string>

namespace b1set {

// set files are JSON objects {"q": int, "lambda": int, "elements": [int...]};
// lambda defaults to 4 when absent; extra keys are ignored so report payloads
// that embed a set load directly
BSet parse_set_json(const std::string& text);
BSet read_set_file(const std::string& path);
std::string set_to_json(const BSet& s);
void write_set_file(const std::string& path, const BSet& s);

// same file format without the BSet invariants (0 or repeated elements stay),
// so the verifier can judge degenerate inputs instead of rejecting them
struct RawSet {
    u64 q = 0;
    int lambda = 4;
    std::vector<u64> elements;
};
RawSet parse_raw_set_json(const std::string& text);
RawSet read_raw_set_file(const std::string& path);

// "5,3,2" -> {5, 3, 2}; rejects empties and non-numeric entries
std::vector<u64> parse_u64_csv(const std::string& text);

} // namespace b1set
