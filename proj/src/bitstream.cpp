#include "mdiq/bitstream.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mdiq {

BitVec BitVec::operator^(const BitVec& other) const {
    if (size_ != other.size_) throw std::invalid_argument("BitVec xor: size mismatch");
    BitVec out(size_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i] ^ other.words_[i];
    return out;
}

bool BitVec::operator==(const BitVec& other) const {
    return size_ == other.size_ && words_ == other.words_;
}

std::vector<std::uint8_t> BitVec::to_bytes() const {
    std::vector<std::uint8_t> bytes((size_ + 7) / 8, 0);
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i)) bytes[i >> 3] |= static_cast<std::uint8_t>(0x80u >> (i & 7));
    return bytes;
}

BitVec BitVec::from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t bit_count) {
    if (bytes.size() * 8 < bit_count) throw std::invalid_argument("BitVec: byte buffer too short");
    BitVec out(bit_count);
    for (std::size_t i = 0; i < bit_count; ++i)
        out.set(i, bytes[i >> 3] >> (7 - (i & 7)) & 1);
    return out;
}

BitVec BitVec::from_string(const std::string& s) {
    BitVec out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("BitVec: expected 0/1 string");
        out.set(i, s[i] == '1');
    }
    return out;
}

BitVec BitVec::from_hex(const std::string& hex) {
    BitVec out(hex.size() * 4);
    for (std::size_t i = 0; i < hex.size(); ++i) {
        char c = hex[i];
        int v;
        if (c >= '0' && c <= '9')
            v = c - '0';
        else if (c >= 'a' && c <= 'f')
            v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            v = c - 'A' + 10;
        else
            throw std::invalid_argument("BitVec: invalid hex digit");
        for (int b = 0; b < 4; ++b) out.set(4 * i + b, v >> (3 - b) & 1);
    }
    return out;
}

std::string BitVec::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

void write_bit_file(const std::string& path, const BitVec& bits) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("write_bit_file: cannot open " + tmp);
        std::uint64_t n = bits.size();
        std::uint8_t header[8];
        for (int i = 0; i < 8; ++i) header[i] = static_cast<std::uint8_t>(n >> (8 * i));
        out.write(reinterpret_cast<const char*>(header), 8);
        auto bytes = bits.to_bytes();
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("write_bit_file: write failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("write_bit_file: rename failed for " + path);
}

BitVec read_bit_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_bit_file: cannot open " + path);
    std::uint8_t header[8];
    in.read(reinterpret_cast<char*>(header), 8);
    if (!in) throw std::runtime_error("read_bit_file: truncated header");
    std::uint64_t n = 0;
    for (int i = 0; i < 8; ++i) n |= static_cast<std::uint64_t>(header[i]) << (8 * i);
    std::vector<std::uint8_t> bytes((n + 7) / 8);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!in) throw std::runtime_error("read_bit_file: truncated payload");
    return BitVec::from_bytes(bytes, n);
}

}  // namespace mdiq
