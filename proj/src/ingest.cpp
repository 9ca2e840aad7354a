#include "horizon_probe/ingest.hpp"

#include "horizon_probe/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>

namespace horizon_probe {

namespace {

using namespace std::chrono;

constexpr sys_days kSyntheticStart = sys_days{year{2024} / January / 1};

bool parse_int(std::string_view text, int& out) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

bool parse_double(std::string_view text, double& out) {
    if (text.empty()) return false;
    // from_chars rejects a leading '+', which some exporters emit.
    if (text.front() == '+') text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

// Uniform double in [0, 1) from the top 53 bits; libstdc++ and libc++ would
// otherwise disagree on uniform_real_distribution output.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

PriceSeries::PriceSeries(std::vector<PricePoint> points, double dt_hours)
    : points_(std::move(points)), dt_hours_(dt_hours) {
    if (points_.size() < 2) {
        throw EmptySeries("price series needs at least 2 points, got " + std::to_string(points_.size()));
    }
    if (!(dt_hours_ > 0.0) || !std::isfinite(dt_hours_)) {
        throw InvalidArgument("dt_hours must be positive");
    }
    const auto step = duration_cast<seconds>(duration<double>(dt_hours_ * 3600.0));
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!std::isfinite(p.price)) {
            throw MalformedRow(i + 2, "price is not finite");
        }
        if (p.timestamp.time_since_epoch().count() % 3600 != 0) {
            throw MalformedRow(i + 2, "timestamp is not hour-aligned");
        }
        if (i > 0 && p.timestamp - points_[i - 1].timestamp != step) {
            throw GapDetected(i + 2, "expected spacing of " + std::to_string(dt_hours_) + " h before " +
                                         format_timestamp(p.timestamp));
        }
    }
}

std::vector<double> PriceSeries::prices() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.price);
    return out;
}

std::string format_timestamp(sys_seconds ts) {
    const auto day = floor<days>(ts);
    const year_month_day ymd{day};
    const hh_mm_ss hms{ts - day};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                  static_cast<long>(hms.seconds().count()));
    return buf;
}

bool parse_timestamp(std::string_view text, sys_seconds& out) {
    // YYYY-MM-DDTHH:MM:SSZ
    if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
        text[16] != ':' || text[19] != 'Z') {
        return false;
    }
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), mo) || !parse_int(text.substr(8, 2), d) ||
        !parse_int(text.substr(11, 2), h) || !parse_int(text.substr(14, 2), mi) ||
        !parse_int(text.substr(17, 2), s)) {
        return false;
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 59) return false;
    out = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
    return true;
}

PriceSeries parse_price_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw EmptySeries("price CSV is empty");
    ++line_no;
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kPriceCsvHeader) {
        throw MalformedRow(line_no, "expected header '" + std::string(kPriceCsvHeader) + "', got '" + line + "'");
    }

    std::vector<PricePoint> points;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw MalformedRow(line_no, "expected 2 fields");
        }
        const std::string_view ts_field(line.data(), comma);
        const std::string_view price_field(line.data() + comma + 1, line.size() - comma - 1);

        PricePoint point;
        if (!parse_timestamp(ts_field, point.timestamp)) {
            throw MalformedRow(line_no, "bad timestamp '" + std::string(ts_field) + "'");
        }
        if (point.timestamp.time_since_epoch().count() % 3600 != 0) {
            throw MalformedRow(line_no, "timestamp is not hour-aligned");
        }
        if (!parse_double(price_field, point.price) || !std::isfinite(point.price)) {
            throw MalformedRow(line_no, "bad price '" + std::string(price_field) + "'");
        }
        if (!points.empty() && point.timestamp <= points.back().timestamp) {
            throw GapDetected(line_no, "timestamps not strictly increasing at " + std::string(ts_field));
        }
        if (points.size() >= 2) {
            const auto expected = points[1].timestamp - points[0].timestamp;
            if (point.timestamp - points.back().timestamp != expected) {
                throw GapDetected(line_no, "non-uniform spacing at " + std::string(ts_field));
            }
        }
        points.push_back(point);
    }
    if (points.size() < 2) {
        throw EmptySeries("price CSV has " + std::to_string(points.size()) + " data rows, need at least 2");
    }
    const double dt = duration<double>(points[1].timestamp - points[0].timestamp).count() / 3600.0;
    return PriceSeries(std::move(points), dt);
}

PriceSeries load_price_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open price file '" + path + "'");
    return parse_price_csv(in);
}

void write_price_csv(std::ostream& out, const PriceSeries& series) {
    out << kPriceCsvHeader << '\n';
    char buf[64];
    for (const auto& p : series.points()) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p.price);
        out << format_timestamp(p.timestamp) << ',' << std::string_view(buf, end - buf) << '\n';
    }
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
    if (name == "constant") return SyntheticKind::constant;
    if (name == "sinusoid") return SyntheticKind::sinusoid;
    if (name == "spiky-random") return SyntheticKind::spiky_random;
    throw InvalidArgument("unknown synthetic kind '" + std::string(name) + "'");
}

std::string_view to_string(SyntheticKind kind) noexcept {
    switch (kind) {
        case SyntheticKind::constant: return "constant";
        case SyntheticKind::sinusoid: return "sinusoid";
        case SyntheticKind::spiky_random: return "spiky-random";
    }
    return "unknown";
}

PriceSeries generate_synthetic(SyntheticKind kind, std::size_t length, std::uint64_t seed) {
    if (length < 2) {
        throw InvalidLength("synthetic series length must be >= 2, got " + std::to_string(length));
    }
    std::vector<PricePoint> points(length);
    for (std::size_t i = 0; i < length; ++i) {
        points[i].timestamp = sys_seconds{kSyntheticStart} + hours{static_cast<long>(i)};
    }

    switch (kind) {
        case SyntheticKind::constant:
            for (auto& p : points) p.price = 50.0;
            break;
        case SyntheticKind::sinusoid: {
            const double phase = static_cast<double>(seed % 24);
            for (std::size_t i = 0; i < length; ++i) {
                points[i].price = 50.0 + 30.0 * std::sin(2.0 * std::numbers::pi * (static_cast<double>(i) + phase) / 24.0);
            }
            break;
        }
        case SyntheticKind::spiky_random: {
            // Mean-reverting walk around 60 EUR/MWh with upward spikes and
            // occasional negative excursions.
            std::mt19937_64 rng(seed);
            double level = 60.0;
            for (auto& p : points) {
                level += 0.15 * (60.0 - level) + 16.0 * (unit_uniform(rng) - 0.5);
                const double event = unit_uniform(rng);
                const double size = unit_uniform(rng);
                if (event < 0.04) {
                    p.price = level + 60.0 + 140.0 * size;
                } else if (event < 0.08) {
                    p.price = -5.0 - 55.0 * size;
                } else {
                    p.price = level;
                }
            }
            break;
        }
    }
    return PriceSeries(std::move(points), 1.0);
}

}  // namespace horizon_probe
