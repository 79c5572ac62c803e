#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

#include "gittins/error.hpp"

namespace gittins::harness {

/// Shortest round-trip decimal; "nan" / "inf" / "-inf" for non-finite values.
inline std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

template <class T>
std::string format_field(const T& v)
{
    if constexpr (std::is_same_v<T, bool>) {
        return v ? "1" : "0";
    } else if constexpr (std::is_floating_point_v<T>) {
        return format_number(static_cast<double>(v));
    } else if constexpr (std::is_integral_v<T>) {
        char buf[24];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return {buf, res.ptr};
    } else {
        return std::string(v);
    }
}

/// Comma-separated writer with a fixed header; every row must match its width.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::vector<std::string> header) : out_(path, std::ios::binary), width_(header.size())
    {
        if (!out_) throw ConfigError("cannot open '" + path + "' for writing");
        write_line(header);
    }

    template <class... Fields>
    void row(const Fields&... fields)
    {
        static_assert(sizeof...(Fields) > 0);
        detail::require(sizeof...(Fields) == width_, "CsvWriter: row width does not match header");
        std::string line;
        bool first = true;
        ((line += (first ? "" : ","), line += format_field(fields), first = false), ...);
        line += '\n';
        out_ << line;
    }

    void row_strings(const std::vector<std::string>& fields)
    {
        detail::require(fields.size() == width_, "CsvWriter: row width does not match header");
        write_line(fields);
    }

private:
    void write_line(const std::vector<std::string>& fields)
    {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

    std::ofstream out_;
    std::size_t width_;
};

} // namespace gittins::harness
