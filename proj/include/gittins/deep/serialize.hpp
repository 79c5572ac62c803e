#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gittins/deep/mlp.hpp"
#include "gittins/error.hpp"

namespace gittins::deep {

// Text format, one item per line:
//
//   gittins-mlp 1
//   dims <d0> <d1> ... <dL>
//   encoding <one_hot|scalar_pair>
//   states <N>
//   seed <u64>
//   params <count>
//   <value>            (count lines, shortest round-trip decimal)
//
// Values follow the flat layout of Mlp: per layer, W (out x in, column-major)
// then b.

struct MlpHeader {
    std::vector<std::size_t> dims;
    Encoding encoding = Encoding::one_hot;
    std::size_t num_states = 0;
    std::uint64_t seed = 0;
};

inline void save_mlp(std::ostream& out, const Mlp& net, const MlpHeader& header)
{
    out << "gittins-mlp 1\ndims";
    for (std::size_t d : net.dims()) out << ' ' << d;
    out << "\nencoding " << to_string(header.encoding) << "\nstates " << header.num_states << "\nseed " << header.seed
        << "\nparams " << net.size() << '\n';
    char buf[32];
    for (double v : net.values()) {
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        out.write(buf, res.ptr - buf);
        out.put('\n');
    }
}

inline Mlp load_mlp(std::istream& in, MlpHeader* header = nullptr)
{
    auto expect_key = [&](const std::string& key) -> std::istringstream {
        std::string line;
        detail::require(static_cast<bool>(std::getline(in, line)), "load_mlp: truncated header, expected " + key);
        std::istringstream ls(line);
        std::string k;
        ls >> k;
        detail::require(k == key, "load_mlp: expected '" + key + "', found '" + k + "'");
        return ls;
    };
    MlpHeader h;
    {
        auto ls = expect_key("gittins-mlp");
        int version = 0;
        ls >> version;
        detail::require(version == 1, "load_mlp: unsupported version");
    }
    {
        auto ls = expect_key("dims");
        std::size_t d = 0;
        while (ls >> d) h.dims.push_back(d);
    }
    {
        auto ls = expect_key("encoding");
        std::string e;
        ls >> e;
        detail::require(e == "one_hot" || e == "scalar_pair", "load_mlp: unknown encoding '" + e + "'");
        h.encoding = e == "one_hot" ? Encoding::one_hot : Encoding::scalar_pair;
    }
    expect_key("states") >> h.num_states;
    expect_key("seed") >> h.seed;
    std::size_t count = 0;
    expect_key("params") >> count;

    Mlp net(h.dims);
    detail::require(count == net.size(), "load_mlp: parameter count does not match dims");
    auto values = net.values();
    std::string line;
    for (std::size_t i = 0; i < count; ++i) {
        detail::require(static_cast<bool>(std::getline(in, line)), "load_mlp: truncated parameter list");
        const auto res = std::from_chars(line.data(), line.data() + line.size(), values[i]);
        detail::require(res.ec == std::errc{}, "load_mlp: bad value on parameter line " + std::to_string(i));
    }
    h.dims = net.dims();
    if (header) *header = std::move(h);
    return net;
}

} // namespace gittins::deep
