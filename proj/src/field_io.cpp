/* SPDX-License-Identifier: Apache-2.0 */
#include "dclab/field_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace dclab {

namespace {

constexpr const char* kMagic = "DCLAB1";

std::string num(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_num(const std::string& tok)
{
    double x = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        raise(ErrorCode::Parse, "field dump: bad number '" + tok + "'");
    return x;
}

void put_le(std::string& out, double x)
{
    std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    for (int b = 0; b < 8; ++b) out += static_cast<char>((bits >> (8 * b)) & 0xff);
}

double get_le(const char* p)
{
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[b])) << (8 * b);
    return std::bit_cast<double>(bits);
}

}  // namespace

std::string format_field(const ScalarField& u, bool binary)
{
    const GridSpec& g = u.grid();
    std::string out = kMagic;
    out += " " + std::to_string(g.dim);
    for (int a = 0; a < g.dim; ++a) out += " " + std::to_string(g.cells[a]);
    for (int a = 0; a < g.dim; ++a) out += " " + num(g.h[a]);
    for (int a = 0; a < g.dim; ++a) out += " " + num(g.origin[a]);
    out += binary ? " binary\n" : "\n";
    if (binary) {
        out.reserve(out.size() + 8 * u.size());
        for (double x : u.values()) put_le(out, x);
    } else {
        for (double x : u.values()) out += num(x) + "\n";
    }
    return out;
}

void write_field(const ScalarField& u, const std::string& path, bool binary)
{
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::Io, "cannot write field dump '" + path + "'");
    const std::string bytes = format_field(u, binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    require(static_cast<bool>(out), ErrorCode::Io, "short write to '" + path + "'");
}

ScalarField parse_field(const std::string& bytes)
{
    const auto eol = bytes.find('\n');
    require(eol != std::string::npos, ErrorCode::Parse, "field dump: missing header line");
    std::istringstream head(bytes.substr(0, eol));
    std::string tok;
    head >> tok;
    require(tok == kMagic, ErrorCode::Parse, "field dump: bad magic");
    int dim = 0;
    head >> dim;
    require(dim >= 1 && dim <= 3, ErrorCode::Parse, "field dump: bad dimension");
    std::vector<int> cells(dim);
    std::vector<double> h(dim), origin(dim), extent(dim);
    for (int a = 0; a < dim; ++a) head >> cells[a];
    for (int a = 0; a < dim; ++a) {
        head >> tok;
        h[a] = parse_num(tok);
    }
    for (int a = 0; a < dim; ++a) {
        head >> tok;
        origin[a] = parse_num(tok);
    }
    require(static_cast<bool>(head), ErrorCode::Parse, "field dump: truncated header");
    std::string mode;
    head >> mode;
    const bool binary = mode == "binary";
    for (int a = 0; a < dim; ++a) extent[a] = h[a] * cells[a];
    GridSpec g = make_grid(dim, origin, extent, cells);
    for (int a = 0; a < dim; ++a) g.h[a] = h[a];  // keep the recorded spacing bit-exact

    std::vector<double> values(g.node_count());
    if (binary) {
        require(bytes.size() - eol - 1 == 8 * values.size(), ErrorCode::Parse, "field dump: wrong body size");
        const char* p = bytes.data() + eol + 1;
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = get_le(p + 8 * i);
    } else {
        std::istringstream body(bytes.substr(eol + 1));
        for (std::size_t i = 0; i < values.size(); ++i) {
            require(static_cast<bool>(body >> tok), ErrorCode::Parse, "field dump: too few values");
            values[i] = parse_num(tok);
        }
        require(!(body >> tok), ErrorCode::Parse, "field dump: trailing values");
    }
    return ScalarField(g, std::move(values));
}

ScalarField read_field(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open field dump '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_field(text.str());
}

}  // namespace dclab
