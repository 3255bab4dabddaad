#include "mdiq/extraction.hpp"

#include <bit>
#include <stdexcept>

namespace mdiq {

namespace {

// Reads 64 bits of v starting at bit offset pos (zero-padded past the end).
std::uint64_t window64(const std::vector<std::uint64_t>& w, std::size_t nbits, std::size_t pos) {
    if (pos >= nbits) return 0;
    const std::size_t q = pos >> 6;
    const unsigned sh = static_cast<unsigned>(pos & 63);
    std::uint64_t val = w[q] >> sh;
    if (sh != 0 && q + 1 < w.size()) val |= w[q + 1] << (64 - sh);
    return val;
}

}  // namespace

BitVec toeplitz_extract(const BitVec& raw, const BitVec& seed, const ExtractorSpec& spec) {
    if (spec.output_length > spec.input_length)
        throw std::invalid_argument("toeplitz_extract: output longer than input");
    if (raw.size() != spec.input_length)
        throw std::invalid_argument("toeplitz_extract: raw length mismatch");
    if (seed.size() != spec.seed_length())
        throw std::invalid_argument("toeplitz_extract: seed length mismatch");

    const std::size_t in = spec.input_length;
    const std::size_t out = spec.output_length;
    BitVec result(out);
    if (out == 0 || in == 0) return result;

    // Anti-diagonal layout: row i of T equals bits [out-1-i, out-1-i+in) of E,
    // where E[t] = seed[out-1-t] for t < out and E[t] = seed[t] for t >= out.
    BitVec e(in + out - 1);
    for (std::size_t t = 0; t < in + out - 1; ++t)
        e.set(t, t < out ? seed.get(out - 1 - t) : seed.get(t));

    const auto& xw = raw.words();
    for (std::size_t i = 0; i < out; ++i) {
        const std::size_t off = out - 1 - i;
        int parity = 0;
        for (std::size_t wi = 0; wi < xw.size(); ++wi) {
            std::uint64_t ew = window64(e.words(), e.size(), off + 64 * wi);
            parity ^= static_cast<int>(std::popcount(xw[wi] & ew) & 1u);
        }
        result.set(i, parity);
    }
    return result;
}

}  // namespace mdiq
