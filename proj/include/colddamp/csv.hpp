#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "colddamp/error.hpp"

namespace colddamp::csv {

/// Shortest text that round-trips at 17 significant digits.
inline std::string number(double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ULL) noexcept {
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Accumulates CSV text: `#` comment lines, a header row, data rows, LF endings.
class Writer {
public:
    void comment(std::string_view text) {
        out_ += "# ";
        out_ += text;
        out_ += '\n';
    }

    void header(std::initializer_list<std::string_view> columns) { row_of(columns); }
    void header(const std::vector<std::string>& columns) { row_of(columns); }

    Writer& field(std::string_view text) {
        if (!at_line_start_) out_ += ',';
        out_ += text;
        at_line_start_ = false;
        return *this;
    }
    Writer& field(double v) { return field(number(v)); }
    void end_row() {
        out_ += '\n';
        at_line_start_ = true;
    }

    const std::string& str() const noexcept { return out_; }

private:
    template <typename Range>
    void row_of(const Range& columns) {
        for (const auto& c : columns) field(std::string_view(c));
        end_row();
    }

    std::string out_;
    bool at_line_start_ = true;
};

/// Writes via a sibling temp file and rename, so a failed run leaves no partial output.
inline void write_atomically(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        detail::require(static_cast<bool>(f), ErrorCode::InvalidConfig, "cannot write '" + tmp.string() + "'");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        detail::require(static_cast<bool>(f), ErrorCode::InvalidConfig, "write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

} // namespace colddamp::csv
