#pragma once

#include <cstddef>

#include "mdiq/bitstream.hpp"

namespace mdiq {

/// Toeplitz-hash extractor dimensions. The seed encodes the first column
/// (top to bottom) followed by the first row (left to right, second entry
/// onward): T(i,j) = seed[i-j] for i >= j, seed[output_length-1 + j-i] else.
struct ExtractorSpec {
    std::size_t input_length = 0;
    std::size_t output_length = 0;

    std::size_t seed_length() const {
        return input_length + output_length == 0 ? 0 : input_length + output_length - 1;
    }
};

/// Output = T . raw over GF(2). Deterministic and linear in raw for a fixed
/// seed. Throws on length mismatch.
BitVec toeplitz_extract(const BitVec& raw, const BitVec& seed, const ExtractorSpec& spec);

}  // namespace mdiq
