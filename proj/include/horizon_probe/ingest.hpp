#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace horizon_probe {

/// Hour-aligned UTC instant and the day-ahead price cleared for it.
struct PricePoint {
    std::chrono::sys_seconds timestamp;
    double price = 0.0;  // EUR/MWh, may be negative

    friend bool operator==(const PricePoint&, const PricePoint&) = default;
};

/**
 * Uniformly spaced price series. Construction validates the invariants:
 * at least two points, finite prices, hour-aligned timestamps, and a
 * constant spacing equal to dt_hours.
 *
 * The optimizer only ever sees prices by step index; timestamps are carried
 * along for reporting.
 */
class PriceSeries {
public:
    PriceSeries(std::vector<PricePoint> points, double dt_hours);

    [[nodiscard]] const std::vector<PricePoint>& points() const noexcept { return points_; }
    [[nodiscard]] double dt_hours() const noexcept { return dt_hours_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] std::vector<double> prices() const;

    friend bool operator==(const PriceSeries&, const PriceSeries&) = default;

private:
    std::vector<PricePoint> points_;
    double dt_hours_;
};

inline constexpr std::string_view kPriceCsvHeader = "timestamp,price_eur_mwh";

/// Parses the price CSV (header `timestamp,price_eur_mwh`, ISO-8601 UTC).
/// Throws MalformedRow, GapDetected or EmptySeries.
[[nodiscard]] PriceSeries parse_price_csv(std::istream& in);
[[nodiscard]] PriceSeries load_price_csv(const std::string& path);

/// Writes the series in the format read by parse_price_csv. Prices use the
/// shortest representation that round-trips exactly.
void write_price_csv(std::ostream& out, const PriceSeries& series);

enum class SyntheticKind { constant, sinusoid, spiky_random };

[[nodiscard]] SyntheticKind parse_synthetic_kind(std::string_view name);
[[nodiscard]] std::string_view to_string(SyntheticKind kind) noexcept;

/// Deterministic synthetic hourly series starting 2024-01-01T00:00:00Z.
/// Throws InvalidLength when length < 2.
[[nodiscard]] PriceSeries generate_synthetic(SyntheticKind kind, std::size_t length, std::uint64_t seed);

// Timestamp helpers shared with the persistence code.
[[nodiscard]] std::string format_timestamp(std::chrono::sys_seconds ts);
/// Returns false when `text` is not of the form YYYY-MM-DDTHH:MM:SSZ.
[[nodiscard]] bool parse_timestamp(std::string_view text, std::chrono::sys_seconds& out);

}  // namespace horizon_probe
