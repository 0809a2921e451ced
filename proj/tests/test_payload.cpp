#include <gtest/gtest.h>

#include "oracles.hpp"
#include "palqa/payload.hpp"

using namespace palqa;

namespace {

PayloadContents random_contents(oracle::Rng& rng) {
    PayloadContents p;
    p.width = rng.range(1, 200);
    p.height = rng.range(1, 200);
    p.Q = rng.range(1, 120);
    const auto nblocks = static_cast<std::uint32_t>(block_count_for(p.width, p.height));
    const double density = rng.unit() * 0.2;
    std::vector<std::uint8_t> plane;
    for (std::uint32_t b = 0; b < nblocks; ++b)
        for (std::uint8_t y = 0; y < 8; ++y)
            for (std::uint8_t xh = 0; xh < 4; ++xh)
                for (std::uint8_t lsb = 0; lsb < 2; ++lsb)
                    if (rng.unit() < density) {
                        p.records.push_back(CoeffRecord{b, y, xh, rng.below(2) == 1,
                                                        static_cast<std::uint8_t>(rng.range(1, 255))});
                        plane.push_back(lsb);
                    }
    p.ones = encode_ones(LsbPlane{plane});
    return p;
}

} // namespace

TEST(Payload, HeaderOnly) {
    PayloadContents p;
    p.width = 8;
    p.height = 8;
    p.Q = 16;
    const auto bytes = serialize(p);
    ASSERT_EQ(bytes.size(), 20U);
    EXPECT_EQ(bytes[0], 'P');
    EXPECT_EQ(bytes[3], 'Q');
    EXPECT_EQ(deserialize(bytes), p);
    EXPECT_EQ(bpp(bytes.size(), 8, 8), 2.5);
}

TEST(Payload, SingleRecordWidth) {
    PayloadContents p;
    p.width = 8;
    p.height = 8;
    p.Q = 8;
    p.records.push_back(CoeffRecord{0, 0, 0, false, 1});
    p.ones = OnesList{1, {}};
    const auto bytes = serialize(p);
    ASSERT_EQ(bytes.size(), 22U);
    EXPECT_EQ(bytes[20], 0x00);
    EXPECT_EQ(bytes[21], 0x01);
    EXPECT_EQ(body_bits(8, 8, 1, 0), 16U);
    EXPECT_EQ(deserialize(bytes), p);
}

TEST(Payload, BodyBitsFormula) {
    EXPECT_EQ(body_bits(256, 256, 100, 30), 100U * (10 + 16) + 30U * 7);
    EXPECT_EQ(ones_index_bits(1), 1);
    EXPECT_EQ(ones_index_bits(2), 1);
    EXPECT_EQ(ones_index_bits(3), 2);
}

TEST(Payload, RoundTripRandom) {
    oracle::Rng rng(113);
    for (int i = 0; i < 1000; ++i) {
        const auto p = random_contents(rng);
        const auto bytes = serialize(p);
        ASSERT_EQ(bytes.size(), kHeaderBytes + (body_bits(p.width, p.height, p.records.size(), p.ones.indices.size()) + 7) / 8);
        ASSERT_EQ(deserialize(bytes), p);
        ASSERT_EQ(serialize(deserialize(bytes)), bytes);
    }
}

TEST(Payload, RejectsCorruption) {
    oracle::Rng rng(127);
    PayloadContents p = random_contents(rng);
    while (p.records.empty()) p = random_contents(rng);
    const auto good = serialize(p);

    auto magic = good;
    magic[3] = 'X';
    EXPECT_THROW(deserialize(magic), FormatError);

    auto version = good;
    version[4] = 9;
    EXPECT_THROW(deserialize(version), FormatError);

    EXPECT_THROW(deserialize(std::span(good).first(10)), FormatError);
    EXPECT_THROW(deserialize(std::span(good).first(20)), FormatError);

    auto trailing = good;
    trailing.push_back(0);
    EXPECT_THROW(deserialize(trailing), FormatError);
}

TEST(Payload, RejectsNonCanonicalOrder) {
    PayloadContents p;
    p.width = 16;
    p.height = 8;
    p.Q = 8;
    p.records = {CoeffRecord{1, 0, 0, false, 1}, CoeffRecord{0, 0, 0, false, 1}};
    p.ones = OnesList{2, {}};
    EXPECT_THROW(deserialize(serialize(p)), FormatError);
}

TEST(Payload, BppProperties) {
    EXPECT_EQ(bpp(20, 16, 8), 1.25);
    EXPECT_EQ(bpp(100, 10, 10), 8.0);
    EXPECT_GE(bpp(kHeaderBytes, 300, 300), 8.0 * kHeaderBytes / (300.0 * 300.0));
}

TEST(Payload, RestoresFullCoefficients) {
    const std::vector<SparseCoeff> cs{{0, 1, 0, -1, 6}, {0, 4, 2, 1, 3}, {3, 7, 7, 1, 255}};
    const auto split = split_lsb(std::span<const SparseCoeff>(cs));
    const auto p = make_contents(cs, split.x_high, encode_ones(split.plane), 16, 16, 8);
    EXPECT_EQ(restore_coeffs(deserialize(serialize(p))), cs);
}
