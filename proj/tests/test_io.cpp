// CSV round trip, JSON conventions and checksums.

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "dissfield/error.hpp"
#include "dissfield/io.hpp"

using namespace dissfield;

TEST(Csv, RoundTripIsLossless) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    io::Table t{{{"tool", "dissfield"}, {"note", "a: b"}}, {"x", "y", "z"}, {}};
    for (int i = 0; i < 500; ++i)
        t.rows.push_back({std::ldexp(mant(gen), expo(gen)), mant(gen), std::numeric_limits<double>::denorm_min() * i});
    t.rows.push_back({0.1, -0.0, std::numeric_limits<double>::max()});
    std::istringstream in(io::format_csv(t));
    const auto back = io::parse_csv(in);
    EXPECT_EQ(back.metadata, t.metadata);
    EXPECT_EQ(back.columns, t.columns);
    ASSERT_EQ(back.rows.size(), t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(back.rows[i][j], t.rows[i][j]);
    EXPECT_TRUE(std::signbit(back.rows.back()[1]));
}

TEST(Csv, NonFiniteCells) {
    io::Table t{{}, {"a"}, {{std::nan("")}, {HUGE_VAL}, {-HUGE_VAL}}};
    std::istringstream in(io::format_csv(t));
    const auto back = io::parse_csv(in);
    EXPECT_TRUE(std::isnan(back.rows[0][0]));
    EXPECT_EQ(back.rows[1][0], HUGE_VAL);
    EXPECT_EQ(back.rows[2][0], -HUGE_VAL);
}

TEST(Csv, MalformedRows) {
    std::istringstream ragged("a,b\n1,2\n3\n");
    EXPECT_THROW(io::parse_csv(ragged), Error);
    std::istringstream bad("a\n1.5q\n");
    EXPECT_THROW(io::parse_csv(bad), Error);
    std::istringstream empty("# only: metadata\n");
    EXPECT_THROW(io::parse_csv(empty), Error);
}

TEST(Json, NonFiniteBecomesNull) {
    EXPECT_TRUE(io::number(std::nan("")).is_null());
    EXPECT_EQ(io::number(1.5).get<double>(), 1.5);
    const io::Table t{{{"k", "v"}}, {"a", "b"}, {{1.0, std::nan("")}}};
    const auto j = io::table_to_json(t);
    EXPECT_EQ(j.begin().key(), "metadata");
    EXPECT_TRUE(j["rows"][0][1].is_null());
}

TEST(Checksum, KnownDigest) {
    EXPECT_EQ(io::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(io::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
