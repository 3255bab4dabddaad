#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mdiq {

/// Dense bit vector. Bit i of the logical stream maps to the most significant
/// remaining bit of byte i/8 when serialized.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    int get(std::size_t i) const { return static_cast<int>(words_[i >> 6] >> (i & 63) & 1u); }
    void set(std::size_t i, int bit) {
        std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (bit)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }
    void push_back(int bit) {
        if (size_ % 64 == 0) words_.push_back(0);
        ++size_;
        set(size_ - 1, bit);
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    BitVec operator^(const BitVec& other) const;
    bool operator==(const BitVec& other) const;

    /// Packed bytes, MSB-first within each byte; trailing bits zero.
    std::vector<std::uint8_t> to_bytes() const;
    static BitVec from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t bit_count);

    static BitVec from_string(const std::string& zeros_and_ones);
    static BitVec from_hex(const std::string& hex);  // MSB-first per nibble
    std::string to_string() const;

  private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// File layout: 8-byte little-endian bit count, then MSB-first packed payload.
void write_bit_file(const std::string& path, const BitVec& bits);
BitVec read_bit_file(const std::string& path);

}  // namespace mdiq
