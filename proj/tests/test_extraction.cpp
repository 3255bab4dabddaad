#include <doctest.h>

#include <stdexcept>

#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "mdiq/extraction.hpp"
#include "mdiq/io.hpp"

using namespace mdiq;

namespace {

BitVec random_bits(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    BitVec v(n);
    for (std::size_t i = 0; i < n; ++i) v.set(i, static_cast<int>(rng() & 1u));
    return v;
}

// Dense GF(2) matrix product, written independently of the word-parallel
// implementation so the two can check each other.
BitVec dense_toeplitz(const BitVec& raw, const BitVec& seed, const ExtractorSpec& spec) {
    BitVec out(spec.output_length);
    for (std::size_t i = 0; i < spec.output_length; ++i) {
        int acc = 0;
        for (std::size_t j = 0; j < spec.input_length; ++j) {
            std::size_t k = i >= j ? i - j : spec.output_length - 1 + (j - i);
            acc ^= seed.get(k) & raw.get(j);
        }
        out.set(i, acc);
    }
    return out;
}

std::size_t to_index(const BitVec& v) {
    std::size_t x = 0;
    for (std::size_t i = 0; i < v.size(); ++i) x |= static_cast<std::size_t>(v.get(i)) << i;
    return x;
}

BitVec from_index(std::size_t x, std::size_t n) {
    BitVec v(n);
    for (std::size_t i = 0; i < n; ++i) v.set(i, static_cast<int>(x >> i & 1u));
    return v;
}

}  // namespace

TEST_SUITE("bitstream") {

TEST_CASE("string, hex, and byte round trips agree on bit order") {
    BitVec v = BitVec::from_string("10000000");
    CHECK(v.size() == 8);
    CHECK(v.get(0) == 1);
    CHECK(v.to_bytes() == std::vector<std::uint8_t>{0x80});

    BitVec h = BitVec::from_hex("a5");
    CHECK(h.to_string() == "10100101");
    CHECK(h.to_bytes() == std::vector<std::uint8_t>{0xA5});

    // Partial final byte: trailing bits are zero padding.
    BitVec p = BitVec::from_string("11011");
    CHECK(p.size() == 5);
    CHECK(p.to_bytes() == std::vector<std::uint8_t>{0xD8});
    CHECK(BitVec::from_bytes(p.to_bytes(), 5) == p);

    BitVec r = random_bits(1000, 3);
    CHECK(BitVec::from_bytes(r.to_bytes(), r.size()) == r);
    CHECK(BitVec::from_string(r.to_string()) == r);

    CHECK_THROWS_AS(BitVec::from_string("10x"), std::invalid_argument);
    CHECK_THROWS_AS(BitVec::from_hex("0g"), std::invalid_argument);
}

TEST_CASE("xor and equality") {
    BitVec a = BitVec::from_string("1100");
    BitVec b = BitVec::from_string("1010");
    CHECK((a ^ b) == BitVec::from_string("0110"));
    CHECK((a ^ a) == BitVec(4));
    CHECK(!(a == b));
    CHECK_THROWS_AS(a ^ BitVec(3), std::invalid_argument);
}

TEST_CASE("bit files carry a little-endian length header") {
    const std::string path = "bitvec_roundtrip.tmp";
    BitVec v = random_bits(77, 9);  // deliberately not a byte multiple
    write_bit_file(path, v);

    std::ifstream in(path, std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    REQUIRE(bytes.size() == 8 + 10);
    CHECK(static_cast<unsigned char>(bytes[0]) == 77);
    for (int i = 1; i < 8; ++i) CHECK(bytes[i] == 0);

    CHECK(read_bit_file(path) == v);
    std::remove(path.c_str());

    CHECK_THROWS_AS(read_bit_file("no_such_file.tmp"), std::runtime_error);
}

}  // TEST_SUITE

TEST_SUITE("extraction") {

TEST_CASE("seed length bookkeeping") {
    CHECK(ExtractorSpec{0, 0}.seed_length() == 0);
    CHECK(ExtractorSpec{8, 4}.seed_length() == 11);
    CHECK(ExtractorSpec{1, 1}.seed_length() == 1);
}

TEST_CASE("degenerate and identity shapes") {
    SUBCASE("zero output length produces an empty stream") {
        ExtractorSpec spec{16, 0};
        CHECK(toeplitz_extract(random_bits(16, 1), BitVec(spec.seed_length()), spec).empty());
    }
    SUBCASE("the identity seed passes a square input through") {
        // Seed = 1 followed by zeros puts ones exactly on the diagonal.
        ExtractorSpec spec{10, 10};
        BitVec seed(spec.seed_length());
        seed.set(0, 1);
        BitVec raw = random_bits(10, 2);
        CHECK(toeplitz_extract(raw, seed, spec) == raw);
    }
    SUBCASE("length mismatches are rejected") {
        ExtractorSpec spec{8, 4};
        CHECK_THROWS_AS(toeplitz_extract(random_bits(7, 1), random_bits(11, 2), spec),
                        std::invalid_argument);
        CHECK_THROWS_AS(toeplitz_extract(random_bits(8, 1), random_bits(10, 2), spec),
                        std::invalid_argument);
    }
}

TEST_CASE("matches an independent dense matrix product") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        ExtractorSpec spec;
        spec.input_length = 1 + rng() % 200;
        spec.output_length = 1 + rng() % spec.input_length;
        BitVec raw = random_bits(spec.input_length, rng());
        BitVec seed = random_bits(spec.seed_length(), rng());
        CHECK(toeplitz_extract(raw, seed, spec) == dense_toeplitz(raw, seed, spec));
    }
}

TEST_CASE("linearity over all input pairs at small sizes") {
    ExtractorSpec spec{10, 5};
    BitVec seed = random_bits(spec.seed_length(), 21);
    std::vector<BitVec> images;
    images.reserve(1u << spec.input_length);
    for (std::size_t x = 0; x < (1u << spec.input_length); ++x)
        images.push_back(toeplitz_extract(from_index(x, spec.input_length), seed, spec));
    for (std::size_t x = 0; x < images.size(); ++x)
        for (std::size_t y = x + 1; y < images.size(); ++y)
            CHECK(images[x ^ y] == (images[x] ^ images[y]));
}

TEST_CASE("two-universality, exhaustive over every seed") {
    // For every pair of distinct inputs, the collision probability over a
    // uniform seed must not exceed 2^-output_length.
    ExtractorSpec spec{6, 4};
    const std::size_t n_inputs = 1u << spec.input_length;
    const std::size_t n_seeds = 1u << spec.seed_length();
    const double bound = 1.0 / (1u << spec.output_length);

    // images[s][x] packed as indices.
    std::vector<std::vector<std::size_t>> images(n_seeds, std::vector<std::size_t>(n_inputs));
    for (std::size_t s = 0; s < n_seeds; ++s) {
        BitVec seed = from_index(s, spec.seed_length());
        for (std::size_t x = 0; x < n_inputs; ++x)
            images[s][x] = to_index(toeplitz_extract(from_index(x, spec.input_length), seed, spec));
    }
    double worst = 0.0;
    for (std::size_t x = 0; x < n_inputs; ++x) {
        for (std::size_t y = x + 1; y < n_inputs; ++y) {
            std::size_t collisions = 0;
            for (std::size_t s = 0; s < n_seeds; ++s)
                if (images[s][x] == images[s][y]) ++collisions;
            worst = std::max(worst, static_cast<double>(collisions) / n_seeds);
        }
    }
    CHECK(worst <= bound + 1e-12);
}

TEST_CASE("frozen golden vector") {
    ExtractorSpec spec{8, 4};
    BitVec seed = BitVec::from_string("10110011100");
    BitVec raw = BitVec::from_string("11000101");
    BitVec out = toeplitz_extract(raw, seed, spec);
    CHECK(out.to_string() == "0011");
    CHECK(out == dense_toeplitz(raw, seed, spec));
}

}  // TEST_SUITE

TEST_SUITE("io") {

TEST_CASE("POVM pair JSON round trip") {
    PovmPair p = povm_from_effect(0.3, {0.1, -0.2, 0.25});
    PovmPair back = povm_pair_from_json(to_json(p));
    CHECK(back.f0.a == doctest::Approx(p.f0.a));
    for (int k = 0; k < 3; ++k) {
        CHECK(back.f0.n[k] == doctest::Approx(p.f0.n[k]));
        CHECK(back.f1.n[k] == doctest::Approx(p.f1.n[k]));
    }
    CHECK_THROWS(povm_pair_from_json(json::object()));
}

TEST_CASE("counts JSON round trip and schema errors") {
    TomographyCounts counts;
    counts.probes[0] = {1000, 900};
    counts.probes[1] = {1000, 100};
    counts.probes[2] = {999, 500};
    counts.probes[3] = {998, 499};
    TomographyCounts back = counts_from_json(to_json(counts));
    for (int i = 0; i < kNumProbes; ++i) {
        CHECK(back.probes[i].trials == counts.probes[i].trials);
        CHECK(back.probes[i].zeros == counts.probes[i].zeros);
    }

    json j = to_json(counts);
    j["probes"].erase("plus_i");
    CHECK_THROWS(counts_from_json(j));
    json bad = to_json(counts);
    bad["probes"]["one"]["zeros"] = 5000;  // more zeros than trials
    CHECK_THROWS(counts_from_json(bad));
}

TEST_CASE("atomic text write then load") {
    const std::string path = "io_roundtrip.tmp";
    write_text_file_atomic(path, "{\"x\": 1}\n");
    json j = load_json_file(path);
    CHECK(j["x"] == 1);
    std::remove(path.c_str());
    CHECK_THROWS(load_json_file(path));
}

}  // TEST_SUITE
