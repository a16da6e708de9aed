#include "b1set/codec.hpp"

#include <numeric>
#include <string>

namespace b1set {

const char* to_string(DecodeStatus s) {
    switch (s) {
        case DecodeStatus::clean: return "clean";
        case DecodeStatus::corrected: return "corrected";
        case DecodeStatus::uncorrectable: return "uncorrectable";
    }
    return "unknown";
}

Code build_code(const BSet& s) {
    if (!verify(s)) throw codec_error("build_code: defining set fails verification");
    Code code;
    code.base = s;
    code.table.reserve(s.elements.size() * s.lambda * 2);
    for (std::size_t i = 0; i < s.elements.size(); ++i) {
        for (int e = 1; e <= s.lambda; ++e) {
            u64 key = mulmod(static_cast<u64>(e), s.elements[i], s.q);
            if (key == 0)
                throw codec_error("build_code: error " + std::to_string(e) + " at position " +
                                  std::to_string(i) + " is syndrome-invisible (key 0)");
            if (!code.table.emplace(key, std::make_pair(i, e)).second)
                throw codec_error("build_code: syndrome collision at key " + std::to_string(key));
        }
    }
    for (std::size_t i = 0; i < s.elements.size(); ++i) {
        if (std::gcd(s.elements[i], s.q) == 1) { // elements ascending: first hit is smallest
            code.check_pos = i;
            code.has_check = true;
            break;
        }
    }
    return code;
}

u64 syndrome(const Code& c, const std::vector<u64>& word) {
    if (word.size() != c.length())
        throw codec_error("syndrome: word length " + std::to_string(word.size()) +
                          ", code length " + std::to_string(c.length()));
    u64 s = 0;
    for (std::size_t i = 0; i < word.size(); ++i)
        s = (s + mulmod(word[i] % c.base.q, c.base.elements[i], c.base.q)) % c.base.q;
    return s;
}

DecodeResult decode(const Code& c, std::vector<u64> word) {
    DecodeResult res;
    res.syndrome_value = syndrome(c, word);
    res.word = std::move(word);
    for (u64& v : res.word) v %= c.base.q;
    if (res.syndrome_value == 0) {
        res.status = DecodeStatus::clean;
        return res;
    }
    auto it = c.table.find(res.syndrome_value);
    if (it == c.table.end()) {
        res.status = DecodeStatus::uncorrectable; // >1 error or magnitude out of range
        return res;
    }
    auto [pos, mag] = it->second;
    res.status = DecodeStatus::corrected;
    res.position = pos;
    res.magnitude = mag;
    const u64 q = c.base.q;
    res.word[pos] = (res.word[pos] + q - static_cast<u64>(mag) % q) % q;
    return res;
}

std::vector<u64> encode(const Code& c, const std::vector<u64>& message) {
    if (!c.has_check)
        throw codec_error("encode: no invertible check element; encoding unsupported");
    if (message.size() + 1 != c.length())
        throw codec_error("encode: message length " + std::to_string(message.size()) +
                          ", expected " + std::to_string(c.length() - 1));
    const u64 q = c.base.q;
    std::vector<u64> word(c.length(), 0);
    u64 acc = 0;
    std::size_t mi = 0;
    for (std::size_t i = 0; i < c.length(); ++i) {
        if (i == c.check_pos) continue;
        word[i] = message[mi++] % q;
        acc = (acc + mulmod(word[i], c.base.elements[i], q)) % q;
    }
    const u64 neg = (q - acc) % q;
    word[c.check_pos] = mulmod(neg, invmod(c.base.elements[c.check_pos], q), q);
    return word;
}

} // namespace b1set
