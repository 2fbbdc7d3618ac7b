#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "colddamp/error.hpp"

namespace colddamp {

enum class GridSpacing { Linear, Logarithmic, Adaptive };

inline const char* to_string(GridSpacing s) noexcept {
    switch (s) {
    case GridSpacing::Linear: return "lin";
    case GridSpacing::Logarithmic: return "log";
    case GridSpacing::Adaptive: return "adaptive";
    }
    return "?";
}

/// Strictly increasing frequency samples (rad/s) that never contain 0.
class FrequencyGrid {
public:
    FrequencyGrid() = default;

    FrequencyGrid(std::vector<double> samples, GridSpacing spacing)
        : samples_(std::move(samples)), spacing_(spacing) {
        detail::require(!samples_.empty(), ErrorCode::InvalidGrid, "grid is empty");
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            detail::require(std::isfinite(samples_[i]), ErrorCode::InvalidGrid,
                            "grid samples must be finite");
            detail::require(samples_[i] != 0.0, ErrorCode::InvalidGrid,
                            "grid must exclude Omega = 0");
            if (i > 0)
                detail::require(samples_[i] > samples_[i - 1], ErrorCode::InvalidGrid,
                                "grid must be strictly increasing");
        }
    }

    static FrequencyGrid linear(double start, double stop, std::size_t points) {
        check_bounds(start, stop, points);
        std::vector<double> s(points);
        if (points == 1) {
            s[0] = start;
        } else {
            const double step = (stop - start) / static_cast<double>(points - 1);
            for (std::size_t i = 0; i < points; ++i) s[i] = start + step * static_cast<double>(i);
            s.back() = stop;
        }
        return {std::move(s), GridSpacing::Linear};
    }

    static FrequencyGrid logarithmic(double start, double stop, std::size_t points) {
        check_bounds(start, stop, points);
        detail::require(start > 0.0, ErrorCode::InvalidGrid, "log grid needs start > 0");
        std::vector<double> s(points);
        if (points == 1) {
            s[0] = start;
        } else {
            const double l0 = std::log10(start), l1 = std::log10(stop);
            const double n = static_cast<double>(points - 1);
            // exponent computed per point, so exact decades stay exact
            for (std::size_t i = 0; i < points; ++i)
                s[i] = std::pow(10.0, (l0 * (n - static_cast<double>(i)) + l1 * static_cast<double>(i)) / n);
            s.front() = start;
            s.back() = stop;
        }
        return {std::move(s), GridSpacing::Logarithmic};
    }

    /// Grid refined around `center`: local spacing is max(finest, ratio * |Omega - center|),
    /// bounded to [lo, hi]. `center` itself is always a sample.
    static FrequencyGrid adaptive(double center, double finest, double ratio, double lo, double hi) {
        detail::require(lo > 0.0 && lo < center && center < hi, ErrorCode::InvalidGrid,
                        "adaptive grid needs 0 < lo < center < hi");
        detail::require(finest > 0.0 && ratio > 0.0, ErrorCode::InvalidGrid,
                        "adaptive grid needs positive finest spacing and ratio");
        auto side = [&](double limit) {
            std::vector<double> offsets;
            double d = 0.0;
            while (d < limit) {
                d += std::max(finest, ratio * d);
                offsets.push_back(std::min(d, limit));
            }
            return offsets;
        };
        const std::vector<double> below = side(center - lo);
        const std::vector<double> above = side(hi - center);
        std::vector<double> s;
        s.reserve(below.size() + above.size() + 1);
        for (auto it = below.rbegin(); it != below.rend(); ++it) s.push_back(center - *it);
        s.push_back(center);
        for (double d : above) s.push_back(center + d);
        s.front() = lo;
        s.back() = hi;
        return {std::move(s), GridSpacing::Adaptive};
    }

    /// Parses "START:STOP:POINTS:lin|log".
    static FrequencyGrid parse(std::string_view spec) {
        std::vector<std::string_view> parts;
        std::size_t pos = 0;
        while (true) {
            const std::size_t next = spec.find(':', pos);
            parts.push_back(spec.substr(pos, next - pos));
            if (next == std::string_view::npos) break;
            pos = next + 1;
        }
        detail::require(parts.size() == 4, ErrorCode::InvalidGrid,
                        "grid spec must be START:STOP:POINTS:lin|log");
        const double start = parse_double(parts[0]);
        const double stop = parse_double(parts[1]);
        std::size_t points = 0;
        const auto [p, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), points);
        detail::require(ec == std::errc() && p == parts[2].data() + parts[2].size(),
                        ErrorCode::InvalidGrid, "bad point count in grid spec");
        if (parts[3] == "lin") return linear(start, stop, points);
        if (parts[3] == "log") return logarithmic(start, stop, points);
        throw Error(ErrorCode::InvalidGrid, "grid spacing must be lin or log");
    }

    /// Mirror of the grid onto negative frequencies, prepended.
    FrequencyGrid symmetric() const {
        detail::require(samples_.front() > 0.0, ErrorCode::InvalidGrid,
                        "symmetric() needs a positive grid");
        std::vector<double> s;
        s.reserve(2 * samples_.size());
        for (auto it = samples_.rbegin(); it != samples_.rend(); ++it) s.push_back(-*it);
        s.insert(s.end(), samples_.begin(), samples_.end());
        return {std::move(s), spacing_};
    }

    std::span<const double> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }
    double front() const noexcept { return samples_.front(); }
    double back() const noexcept { return samples_.back(); }
    GridSpacing spacing() const noexcept { return spacing_; }
    auto begin() const noexcept { return samples_.begin(); }
    auto end() const noexcept { return samples_.end(); }

private:
    static void check_bounds(double start, double stop, std::size_t points) {
        detail::require(points >= 1, ErrorCode::InvalidGrid, "grid needs at least one point");
        detail::require(std::isfinite(start) && std::isfinite(stop), ErrorCode::InvalidGrid,
                        "grid bounds must be finite");
        detail::require(points == 1 || stop > start, ErrorCode::InvalidGrid,
                        "grid needs stop > start");
    }

    static double parse_double(std::string_view text) {
        double v = 0.0;
        const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || p != text.data() + text.size())
            throw Error(ErrorCode::InvalidGrid, "bad number '" + std::string(text) + "' in grid spec");
        return v;
    }

    std::vector<double> samples_;
    GridSpacing spacing_ = GridSpacing::Linear;
};

} // namespace colddamp
