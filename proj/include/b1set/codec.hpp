#pragma once

#include "b1set/bset.hpp"

#include <cstddef>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace b1set {

struct codec_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// single-check code over Z_q: codewords x with sum x_i * b_i == 0 (mod q);
// a lone magnitude-e bump at position i leaves syndrome e*b_i, and those
// lambda*m residues are distinct exactly because B is a valid set
struct Code {
    BSet base;
    std::unordered_map<u64, std::pair<std::size_t, int>> table; // syndrome -> (position, magnitude)
    std::size_t check_pos = 0; // position of the smallest unit element
    bool has_check = false;    // false when no element is invertible mod q

    std::size_t length() const { return base.elements.size(); }
};

Code build_code(const BSet& s); // rejects unverified sets; collision = loud failure

u64 syndrome(const Code& c, const std::vector<u64>& word);

enum class DecodeStatus { clean, corrected, uncorrectable };
const char* to_string(DecodeStatus s);

struct DecodeResult {
    DecodeStatus status = DecodeStatus::clean;
    std::vector<u64> word;      // corrected word; the input when uncorrectable
    std::size_t position = 0;   // set when corrected
    int magnitude = 0;          // set when corrected
    u64 syndrome_value = 0;
};

DecodeResult decode(const Code& c, std::vector<u64> word);

// systematic: message fills the non-check positions in order, the check
// position balances the sum to syndrome 0
std::vector<u64> encode(const Code& c, const std::vector<u64>& message);

} // namespace b1set
