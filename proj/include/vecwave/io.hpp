// SPDX-License-Identifier: Apache-2.0
#ifndef VECWAVE_IO_HPP
#define VECWAVE_IO_HPP

#include "vecwave/error.hpp"
#include "vecwave/scalar_wavelet.hpp"
#include "vecwave/star_product.hpp"
#include "vecwave/vector_basis_nd.hpp"
#include "vecwave/vtransform.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace vecwave {

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline long long parse_int(const std::string& s, const char* what)
{
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw FormatError("");
        return v;
    } catch (const std::exception&) {
        throw FormatError(std::string("bad integer for ") + what + ": '" + s + "'");
    }
}

/// Space-separated `key=value` tokens.
inline std::map<std::string, std::string> parse_fields(const std::string& line)
{
    std::map<std::string, std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw FormatError("expected key=value, got '" + tok + "'");
        out[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return out;
}

inline const std::string& field(const std::map<std::string, std::string>& f, const std::string& key, const std::string& line)
{
    const auto it = f.find(key);
    if (it == f.end()) throw FormatError("missing '" + key + "' in line '" + line + "'");
    return it->second;
}

inline std::string bits_string(const std::vector<int>& bits)
{
    std::string s;
    for (int b : bits) s += b ? '1' : '0';
    return s;
}

inline std::string tuple_string(const std::vector<int>& t, char sep)
{
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? std::string(1, sep) : std::string()) + std::to_string(t[i]);
    return s;
}

inline void write_f64le(std::ostream& os, const std::vector<double>& v)
{
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    } else {
        for (double x : v) {
            auto u = std::bit_cast<std::uint64_t>(x);
            char b[8];
            for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xFF);
            os.write(b, 8);
        }
    }
}

inline std::vector<double> read_f64le(std::istream& is, std::size_t count)
{
    std::vector<double> v(count);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(is.gcount()) != count * sizeof(double)) throw FormatError("payload truncated");
    if constexpr (std::endian::native != std::endian::little) {
        for (double& x : v) {
            const auto u = std::bit_cast<std::uint64_t>(x);
            std::uint64_t r = 0;
            for (int i = 0; i < 8; ++i) r |= ((u >> (8 * i)) & 0xFF) << (8 * (7 - i));
            x = std::bit_cast<double>(r);
        }
    }
    return v;
}

inline void expect_eof(std::istream& is)
{
    if (is.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after payload");
}

} // namespace detail

// ---- basis manifest ----

/// Plain-text manifest: key=value header, component table, one line per family.
inline void write_manifest(std::ostream& os, const BasisND& b)
{
    os << "format=vecwave-basis-1\n";
    os << "filter=" << b.mw.filter.name << '\n';
    os << "d=" << b.d << '\n';
    os << "m=" << b.m << '\n';
    os << "dilation=" << (1 << b.m) << '\n';
    os << "vanishing_moments=" << b.mw.filter.vanishing_moments << '\n';
    for (int r = 0; r < b.m; ++r) {
        const auto& c = b.mw.scaling[static_cast<std::size_t>(r)];
        os << "component=scaling row=" << r + 1 << " kind=" << to_string(c.kind) << " scale=" << c.scale << '\n';
    }
    for (int r = 0; r < b.m; ++r) {
        const auto& c = b.mw.wavelets[static_cast<std::size_t>(r)];
        os << "component=wavelet row=" << r + 1 << " kind=" << to_string(c.kind) << " scale=" << c.scale << '\n';
    }
    for (const auto& f : b.families) {
        os << "family=" << f.name << " eps=" << detail::bits_string(f.eps) << " block=" << f.block + 1 << " rows=";
        for (std::size_t r = 0; r < f.rows.size(); ++r) os << (r ? ";" : "") << '(' << detail::tuple_string(f.rows[r], ',') << ')';
        os << '\n';
    }
}

/// Parses and cross-checks a manifest; any inconsistency raises FormatError.
inline BasisND read_manifest(std::istream& is)
{
    std::map<std::string, std::string> header;
    std::vector<std::string> component_lines;
    std::vector<std::string> family_lines;
    std::string line;
    while (std::getline(is, line)) {
        line = detail::trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError("manifest: expected key=value, got '" + line + "'");
        const std::string key = line.substr(0, eq);
        if (key == "component") component_lines.push_back(line);
        else if (key == "family") family_lines.push_back(line);
        else if (key == "format" || key == "filter" || key == "d" || key == "m" || key == "dilation" || key == "vanishing_moments") {
            if (header.count(key)) throw FormatError("manifest: duplicate key '" + key + "'");
            header[key] = line.substr(eq + 1);
        } else
            throw FormatError("manifest: unknown key '" + key + "'");
    }
    if (detail::field(header, "format", "header") != "vecwave-basis-1") throw FormatError("manifest: unsupported format");
    ScalarFilter filter;
    try {
        filter = filter_by_name(detail::field(header, "filter", "header"));
    } catch (const ParameterError& e) {
        throw FormatError(std::string("manifest: ") + e.what());
    }
    const int d = static_cast<int>(detail::parse_int(detail::field(header, "d", "header"), "d"));
    const int m = static_cast<int>(detail::parse_int(detail::field(header, "m", "header"), "m"));
    try {
        detail::check_guard(d, m);
    } catch (const Error& e) {
        throw FormatError(std::string("manifest: ") + e.what());
    }
    if (header.count("dilation") && detail::parse_int(header["dilation"], "dilation") != (1 << m))
        throw FormatError("manifest: dilation must equal 2^m");
    if (header.count("vanishing_moments") && detail::parse_int(header["vanishing_moments"], "vanishing_moments") != filter.vanishing_moments)
        throw FormatError("manifest: vanishing_moments disagrees with the filter");

    Partition p = cyclic_partition(d, m);
    if (!family_lines.empty()) {
        std::map<long long, std::vector<std::vector<int>>> blocks;
        for (const auto& fl : family_lines) {
            const auto f = detail::parse_fields(fl);
            const long long block = detail::parse_int(detail::field(f, "block", fl), "block");
            std::vector<std::vector<int>> rows;
            for (const auto& part : detail::split(detail::field(f, "rows", fl), ';')) {
                if (part.size() < 2 || part.front() != '(' || part.back() != ')') throw FormatError("manifest: bad row tuple '" + part + "'");
                std::vector<int> t;
                for (const auto& v : detail::split(part.substr(1, part.size() - 2), ',')) t.push_back(static_cast<int>(detail::parse_int(v, "alpha")));
                rows.push_back(std::move(t));
            }
            auto [it, fresh] = blocks.emplace(block, rows);
            if (!fresh && it->second != rows) throw FormatError("manifest: block " + std::to_string(block) + " has conflicting rows");
        }
        p.blocks.clear();
        long long expect = 1;
        for (auto& [idx, rows] : blocks) {
            if (idx != expect++) throw FormatError("manifest: blocks must be numbered 1..m^(d-1)");
            p.blocks.push_back(rows);
        }
        try {
            p.validate();
        } catch (const ParameterError& e) {
            throw FormatError(std::string("manifest: ") + e.what());
        }
    }
    BasisND b = build_basis_nd(filter, d, m, p);
    if (!family_lines.empty()) {
        if (family_lines.size() != b.families.size()) throw FormatError("manifest: wrong number of families");
        for (std::size_t i = 0; i < family_lines.size(); ++i) {
            const auto f = detail::parse_fields(family_lines[i]);
            const auto& want = b.families[i];
            if (detail::field(f, "family", family_lines[i]) != want.name || detail::field(f, "eps", family_lines[i]) != detail::bits_string(want.eps) ||
                detail::parse_int(detail::field(f, "block", family_lines[i]), "block") != want.block + 1)
                throw FormatError("manifest: family line " + std::to_string(i + 1) + " does not match the construction");
        }
    }
    for (const auto& cl : component_lines) {
        const auto f = detail::parse_fields(cl);
        const std::string& which = detail::field(f, "component", cl);
        const long long row = detail::parse_int(detail::field(f, "row", cl), "row");
        if (row < 1 || row > m) throw FormatError("manifest: component row out of range");
        const auto& gens = which == "scaling" ? b.mw.scaling : which == "wavelet" ? b.mw.wavelets : throw FormatError("manifest: bad component kind");
        const auto& c = gens[static_cast<std::size_t>(row - 1)];
        if (detail::field(f, "kind", cl) != to_string(c.kind) || detail::parse_int(detail::field(f, "scale", cl), "scale") != c.scale)
            throw FormatError("manifest: component line '" + cl + "' does not match the construction");
    }
    return b;
}

// ---- VWAV1 signals ----

inline void write_signal(std::ostream& os, const VectorSignal& s)
{
    s.validate();
    os << "VWAV1 d=" << s.d << " m=" << s.m << " n=" << s.n << " dtype=f64le\n";
    for (const auto& c : s.channels) detail::write_f64le(os, c);
}

inline VectorSignal read_signal(std::istream& is)
{
    std::string header;
    if (!std::getline(is, header)) throw FormatError("VWAV1: missing header");
    int d = 0;
    int m = 0;
    long long n = 0;
    char dtype[32] = {};
    if (std::sscanf(header.c_str(), "VWAV1 d=%d m=%d n=%lld dtype=%31s", &d, &m, &n, dtype) != 4)
        throw FormatError("VWAV1: bad header '" + header + "'");
    if (std::strcmp(dtype, "f64le") != 0) throw FormatError("VWAV1: unsupported dtype '" + std::string(dtype) + "'");
    if (d < 1 || d > 2 || m < 1 || n < 1) throw FormatError("VWAV1: header values out of range");
    if (!std::has_single_bit(static_cast<unsigned long long>(n))) throw FormatError("VWAV1: n must be a power of two");
    VectorSignal s{d, m, n, {}};
    for (int c = 0; c < m; ++c) s.channels.push_back(detail::read_f64le(is, s.volume()));
    detail::expect_eof(is);
    return s;
}

// ---- decomposition files ----

/// Header, CSV regrouping manifest (one row per scalar subband), then the f64le payload channel by channel.
inline void write_decomposition(std::ostream& os, const VectorDecomposition& dec, const BasisND& basis)
{
    const auto& lay = dec.layout();
    os << "VWDEC1 d=" << lay.d << " m=" << lay.m << " n=" << lay.n << " levels=" << lay.levels << " filter=" << dec.filter_name()
       << " subbands=" << lay.subbands.size() << " per_channel=" << lay.per_channel << '\n';
    os << "index,eps,alpha,level,family,block,column,len0,len1,offset\n";
    for (std::size_t i = 0; i < lay.subbands.size(); ++i) {
        const auto& sb = lay.subbands[i];
        const auto& band = lay.bands[static_cast<std::size_t>(sb.band)];
        const auto& fam = basis.families[static_cast<std::size_t>(band.family)];
        os << i << ',' << detail::bits_string(sb.eps) << ',' << detail::tuple_string(sb.alpha, '-') << ',' << sb.level << ',' << fam.name
           << ',' << fam.block + 1 << ',' << sb.column + 1 << ',' << sb.extent[0] << ',' << (sb.extent.size() > 1 ? sb.extent[1] : 1) << ','
           << sb.offset << '\n';
    }
    os << "PAYLOAD f64le " << lay.per_channel * static_cast<std::size_t>(lay.m) << '\n';
    for (const auto& c : dec.coefficients()) detail::write_f64le(os, c);
}

/// Reads a decomposition and checks its regrouping manifest against `basis`; mismatches raise CorruptionError.
inline VectorDecomposition read_decomposition(std::istream& is, const BasisND& basis)
{
    std::string header;
    if (!std::getline(is, header)) throw FormatError("decomposition: missing header");
    int d = 0;
    int m = 0;
    long long n = 0;
    int levels = 0;
    char filter[32] = {};
    unsigned long long count = 0;
    unsigned long long per_channel = 0;
    if (std::sscanf(header.c_str(), "VWDEC1 d=%d m=%d n=%lld levels=%d filter=%31s subbands=%llu per_channel=%llu", &d, &m, &n, &levels,
                    filter, &count, &per_channel) != 7)
        throw FormatError("decomposition: bad header '" + header + "'");
    if (d != basis.d || m != basis.m) throw FormatError("decomposition: (d, m) differ from the manifest");
    if (filter != basis.mw.filter.name) throw FormatError("decomposition: filter differs from the manifest");
    RegroupLayout lay;
    try {
        lay = regrouping_layout(basis, n, levels);
    } catch (const ShapeError& e) {
        throw FormatError(std::string("decomposition: ") + e.what());
    }
    std::string line;
    if (!std::getline(is, line) || line != "index,eps,alpha,level,family,block,column,len0,len1,offset")
        throw FormatError("decomposition: missing manifest header");
    if (count != lay.subbands.size() || per_channel != lay.per_channel) throw CorruptionError("decomposition: subband census disagrees with the layout");
    for (std::size_t i = 0; i < lay.subbands.size(); ++i) {
        if (!std::getline(is, line)) throw FormatError("decomposition: manifest truncated");
        const auto& sb = lay.subbands[i];
        const auto& band = lay.bands[static_cast<std::size_t>(sb.band)];
        const auto& fam = basis.families[static_cast<std::size_t>(band.family)];
        std::ostringstream want;
        want << i << ',' << detail::bits_string(sb.eps) << ',' << detail::tuple_string(sb.alpha, '-') << ',' << sb.level << ',' << fam.name << ','
             << fam.block + 1 << ',' << sb.column + 1 << ',' << sb.extent[0] << ',' << (sb.extent.size() > 1 ? sb.extent[1] : 1) << ',' << sb.offset;
        if (line != want.str()) throw CorruptionError("decomposition: manifest row " + std::to_string(i) + " is inconsistent: '" + line + "'");
    }
    if (!std::getline(is, line)) throw FormatError("decomposition: missing payload marker");
    unsigned long long total = 0;
    if (std::sscanf(line.c_str(), "PAYLOAD f64le %llu", &total) != 1) throw FormatError("decomposition: bad payload marker");
    if (total != lay.per_channel * static_cast<std::size_t>(m)) throw CorruptionError("decomposition: payload size disagrees with the map");
    std::vector<std::vector<double>> coeffs;
    for (int c = 0; c < m; ++c) coeffs.push_back(detail::read_f64le(is, lay.per_channel));
    detail::expect_eof(is);
    return VectorDecomposition(std::move(lay), filter, std::move(coeffs));
}

// ---- SVG ----

namespace detail {

inline std::string fixed(double v, int digits = 4)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s = buf;
    if (s == "-0.0000") s = "0.0000";
    return s;
}

inline std::string xml_escape(const std::string& s)
{
    std::string o;
    for (char c : s) {
        switch (c) {
        case '&': o += "&amp;"; break;
        case '<': o += "&lt;"; break;
        case '>': o += "&gt;"; break;
        case '"': o += "&quot;"; break;
        default: o += c;
        }
    }
    return o;
}

} // namespace detail

/// Step-function plot: one horizontal segment per sample, zero axis, support ticks at the ends.
inline void write_function_svg(std::ostream& os, const SampledFunction& f, const std::string& title)
{
    constexpr double width = 640;
    constexpr double height = 360;
    constexpr double margin = 40;
    double lo = 0.0;
    double hi = 0.0;
    for (double v : f.values()) lo = std::min(lo, v), hi = std::max(hi, v);
    if (hi - lo < 1e-300) hi = lo + 1.0;
    const double x0 = f.support_begin();
    const double x1 = f.size() ? f.support_end() : x0 + 1.0;
    auto px = [&](double x) { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); };
    auto py = [&](double y) { return height - margin - (y - lo) / (hi - lo) * (height - 2 * margin); };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
       << height << "\">\n";
    os << "<title>" << detail::xml_escape(title) << "</title>\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << detail::fixed(py(0)) << "\" x2=\"" << width - margin << "\" y2=\"" << detail::fixed(py(0))
       << "\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
    os << "<text x=\"" << margin << "\" y=\"" << height - 12 << "\" font-size=\"11\">" << detail::fixed(x0, 6) << "</text>\n";
    os << "<text x=\"" << width - margin << "\" y=\"" << height - 12 << "\" font-size=\"11\" text-anchor=\"end\">" << detail::fixed(x1, 6) << "</text>\n";
    os << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1\" d=\"";
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto g = f.start() + static_cast<std::int64_t>(i);
        os << (i ? " " : "") << 'M' << detail::fixed(px(f.x_at(g))) << ' ' << detail::fixed(py(f.values()[i])) << " H" << detail::fixed(px(f.x_at(g + 1)));
    }
    os << "\"/>\n</svg>\n";
}

/**
 * Grayscale raster of one channel of a two-dimensional sample: mid-gray is 0,
 * black the most negative and white the most positive value. Runs of equal
 * value along a row share a rectangle; at most `max_side` cells per axis.
 */
inline void write_raster_svg(std::ostream& os, const VectorSampledFunction& f, int channel, const std::string& title, std::int64_t max_side = 256)
{
    if (f.dimension() != 2) throw FeatureError("raster plots need d = 2 (got d = " + std::to_string(f.dimension()) + ")");
    if (channel < 0 || channel >= f.channels()) throw ParameterError("raster plot: channel out of range");
    const std::int64_t rows = f.shape()[0];
    const std::int64_t cols = f.shape()[1];
    std::int64_t stride = 1;
    while (rows / stride > max_side || cols / stride > max_side) stride *= 2;
    const std::int64_t r_out = (rows + stride - 1) / stride;
    const std::int64_t c_out = (cols + stride - 1) / stride;
    double amp = 0.0;
    for (double v : f.channel(channel)) amp = std::max(amp, std::fabs(v));
    if (amp == 0.0) amp = 1.0;
    constexpr int cell = 2;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << c_out * cell << "\" height=\"" << r_out * cell << "\" viewBox=\"0 0 " << c_out * cell
       << ' ' << r_out * cell << "\" shape-rendering=\"crispEdges\">\n";
    os << "<title>" << detail::xml_escape(title) << "</title>\n";
    const auto& data = f.channel(channel);
    auto shade = [&](std::int64_t r, std::int64_t c) {
        const double v = data[static_cast<std::size_t>(r * stride * cols + c * stride)];
        return static_cast<int>(std::lround(127.5 + 127.5 * v / amp));
    };
    for (std::int64_t r = 0; r < r_out; ++r) {
        std::int64_t c = 0;
        while (c < c_out) {
            const int g = shade(r, c);
            std::int64_t e = c + 1;
            while (e < c_out && shade(r, e) == g) ++e;
            os << "<rect x=\"" << c * cell << "\" y=\"" << r * cell << "\" width=\"" << (e - c) * cell << "\" height=\"" << cell << "\" fill=\"rgb("
               << g << ',' << g << ',' << g << ")\"/>\n";
            c = e;
        }
    }
    os << "</svg>\n";
}

} // namespace vecwave

#endif // VECWAVE_IO_HPP
