#include "horizon_probe/errors.hpp"
#include "horizon_probe/ingest.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

namespace hp = horizon_probe;

namespace {

hp::PriceSeries parse(const std::string& text) {
    std::istringstream in(text);
    return hp::parse_price_csv(in);
}

}  // namespace

TEST(ParsePriceCsv, ThreeHourlyRows) {
    const auto s = parse(
        "timestamp,price_eur_mwh\n"
        "2024-01-01T00:00:00Z,10.0\n"
        "2024-01-01T01:00:00Z,-5.0\n"
        "2024-01-01T02:00:00Z,50.0\n");
    ASSERT_EQ(s.size(), 3u);
    EXPECT_DOUBLE_EQ(s.dt_hours(), 1.0);
    EXPECT_EQ(s.prices(), (std::vector<double>{10.0, -5.0, 50.0}));
}

TEST(ParsePriceCsv, ToleratesBomAndCrlf) {
    const auto s = parse(
        "\xEF\xBB\xBFtimestamp,price_eur_mwh\r\n"
        "2024-01-01T00:00:00Z,1\r\n"
        "2024-01-01T01:00:00Z,+2\r\n");
    EXPECT_EQ(s.prices(), (std::vector<double>{1.0, 2.0}));
}

TEST(ParsePriceCsv, MissingHourIsGap) {
    EXPECT_THROW(parse("timestamp,price_eur_mwh\n"
                       "2024-01-01T00:00:00Z,1\n"
                       "2024-01-01T01:00:00Z,2\n"
                       "2024-01-01T03:00:00Z,3\n"),
                 hp::GapDetected);
}

TEST(ParsePriceCsv, TwoHourSpacingIsGapAgainstHourlyStart) {
    // The first two rows fix the spacing; a later jump breaks it.
    try {
        (void)parse("timestamp,price_eur_mwh\n"
                    "2024-01-01T00:00:00Z,1\n"
                    "2024-01-01T01:00:00Z,2\n"
                    "2024-01-01T02:00:00Z,2\n"
                    "2024-01-01T04:00:00Z,2\n");
        FAIL();
    } catch (const hp::GapDetected& e) {
        EXPECT_EQ(e.line(), 5u);
    }
}

TEST(ParsePriceCsv, BadPriceReportsLine) {
    try {
        (void)parse("timestamp,price_eur_mwh\n"
                    "2024-01-01T00:00:00Z,1\n"
                    "2024-01-01T01:00:00Z,abc\n");
        FAIL();
    } catch (const hp::MalformedRow& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("abc"), std::string::npos);
    }
}

TEST(ParsePriceCsv, RejectsStructuralProblems) {
    EXPECT_THROW(parse(""), hp::EmptySeries);
    EXPECT_THROW(parse("timestamp,price_eur_mwh\n"), hp::EmptySeries);
    EXPECT_THROW(parse("timestamp,price_eur_mwh\n2024-01-01T00:00:00Z,1\n"), hp::EmptySeries);
    EXPECT_THROW(parse("time,price\n2024-01-01T00:00:00Z,1\n2024-01-01T01:00:00Z,1\n"), hp::MalformedRow);
    EXPECT_THROW(parse("timestamp,price_eur_mwh\n2024-01-01T00:00:00Z,1,2\n"), hp::MalformedRow);
    EXPECT_THROW(parse("timestamp,price_eur_mwh\n2024-01-01 00:00,1\n"), hp::MalformedRow);
    EXPECT_THROW(parse("timestamp,price_eur_mwh\n2024-01-01T00:30:00Z,1\n"), hp::MalformedRow);
    EXPECT_THROW(parse("timestamp,price_eur_mwh\n2024-01-01T00:00:00Z,nan\n"), hp::MalformedRow);
    EXPECT_THROW(parse("timestamp,price_eur_mwh\n2024-01-01T01:00:00Z,1\n2024-01-01T00:00:00Z,1\n"),
                 hp::GapDetected);
    EXPECT_THROW(parse("timestamp,price_eur_mwh\n2024-01-01T01:00:00Z,1\n2024-01-01T01:00:00Z,1\n"),
                 hp::GapDetected);
}

TEST(ParsePriceCsv, DataErrorsShareABase) {
    EXPECT_THROW(parse("timestamp,price_eur_mwh\n2024-01-01T00:00:00Z,x\n"), hp::DataError);
}

TEST(LoadPriceCsv, MissingFileIsIoErrorWithPath) {
    try {
        (void)hp::load_price_csv("/nonexistent/prices.csv");
        FAIL();
    } catch (const hp::IoError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/prices.csv"), std::string::npos);
    }
}

TEST(WritePriceCsv, RoundTripsExactly) {
    const auto s = hp::generate_synthetic(hp::SyntheticKind::spiky_random, 100, 3);
    std::ostringstream out;
    hp::write_price_csv(out, s);
    EXPECT_EQ(parse(out.str()), s);
}

TEST(Timestamps, FormatAndParse) {
    std::chrono::sys_seconds ts;
    ASSERT_TRUE(hp::parse_timestamp("2024-02-29T23:00:00Z", ts));
    EXPECT_EQ(hp::format_timestamp(ts), "2024-02-29T23:00:00Z");
    EXPECT_FALSE(hp::parse_timestamp("2023-02-29T00:00:00Z", ts));
    EXPECT_FALSE(hp::parse_timestamp("2024-01-01T24:00:00Z", ts));
    EXPECT_FALSE(hp::parse_timestamp("2024-01-01T00:00:00", ts));
}

TEST(GenerateSynthetic, ConstantIsFlat) {
    const auto s = hp::generate_synthetic(hp::SyntheticKind::constant, 10, 99);
    ASSERT_EQ(s.size(), 10u);
    const auto p = s.prices();
    EXPECT_TRUE(std::all_of(p.begin(), p.end(), [&](double v) { return v == p.front(); }));
}

TEST(GenerateSynthetic, SinusoidIsDeterministic) {
    const auto a = hp::generate_synthetic(hp::SyntheticKind::sinusoid, 48, 0);
    const auto b = hp::generate_synthetic(hp::SyntheticKind::sinusoid, 48, 0);
    EXPECT_EQ(a, b);
}

TEST(GenerateSynthetic, SpikyRandomSeed7HasNegativePrice) {
    const auto p = hp::generate_synthetic(hp::SyntheticKind::spiky_random, 200, 7).prices();
    EXPECT_TRUE(std::any_of(p.begin(), p.end(), [](double v) { return v < 0.0; }));
    EXPECT_TRUE(std::any_of(p.begin(), p.end(), [](double v) { return v > 120.0; }));
}

TEST(GenerateSynthetic, SeedsDiffer) {
    EXPECT_NE(hp::generate_synthetic(hp::SyntheticKind::spiky_random, 50, 1).prices(),
              hp::generate_synthetic(hp::SyntheticKind::spiky_random, 50, 2).prices());
}

TEST(GenerateSynthetic, RejectsShortLength) {
    EXPECT_THROW((void)hp::generate_synthetic(hp::SyntheticKind::constant, 1, 0), hp::InvalidLength);
}

TEST(SyntheticKind, NamesRoundTrip) {
    for (auto k : {hp::SyntheticKind::constant, hp::SyntheticKind::sinusoid, hp::SyntheticKind::spiky_random}) {
        EXPECT_EQ(hp::parse_synthetic_kind(hp::to_string(k)), k);
    }
    EXPECT_THROW((void)hp::parse_synthetic_kind("walk"), hp::InvalidArgument);
}
