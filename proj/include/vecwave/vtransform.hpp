// SPDX-License-Identifier: Apache-2.0
#ifndef VECWAVE_VTRANSFORM_HPP
#define VECWAVE_VTRANSFORM_HPP

#include "vecwave/error.hpp"
#include "vecwave/scalar_wavelet.hpp"
#include "vecwave/star_product.hpp"
#include "vecwave/vector_basis_nd.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace vecwave {

/// m channels of length N (d = 1) or N x N row-major arrays (d = 2), N a power of two.
struct VectorSignal {
    int d = 1;
    int m = 1;
    std::int64_t n = 0;
    std::vector<std::vector<double>> channels;

    [[nodiscard]] std::size_t volume() const
    {
        std::size_t v = 1;
        for (int a = 0; a < d; ++a) v *= static_cast<std::size_t>(n);
        return v;
    }

    void validate() const
    {
        if (d < 1 || d > 2) throw DimensionError("VectorSignal: d must be 1 or 2");
        if (n < 1 || !std::has_single_bit(static_cast<std::uint64_t>(n))) throw ShapeError("VectorSignal: N must be a power of two");
        if (m < 1 || static_cast<int>(channels.size()) != m) throw DimensionError("VectorSignal: expected m channels");
        for (const auto& c : channels)
            if (c.size() != volume()) throw ShapeError("VectorSignal: channel has wrong length");
    }
};

inline int log2_size(std::int64_t n)
{
    if (n < 1 || !std::has_single_bit(static_cast<std::uint64_t>(n))) throw ShapeError("length " + std::to_string(n) + " is not a power of two");
    return std::countr_zero(static_cast<std::uint64_t>(n));
}

namespace detail {

// Periodic analysis of x[0..n): low[i] = sum_k h_k x[(2i + k) mod n], high likewise with g.
inline void analysis_step(std::span<const double> x, std::span<double> low, std::span<double> high, const ScalarFilter& f)
{
    const std::size_t n = x.size();
    const std::size_t taps = f.h.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        double lo = 0.0;
        double hi = 0.0;
        for (std::size_t k = 0; k < taps; ++k) {
            const double v = x[(2 * i + k) % n];
            lo += f.h[k] * v;
            hi += f.g[k] * v;
        }
        low[i] = lo;
        if (!high.empty()) high[i] = hi;
    }
}

inline void synthesis_step(std::span<const double> low, std::span<const double> high, std::span<double> x, const ScalarFilter& f)
{
    const std::size_t n = x.size();
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t i = 0; i < n / 2; ++i)
        for (std::size_t k = 0; k < f.h.size(); ++k) x[(2 * i + k) % n] += f.h[k] * low[i] + f.g[k] * high[i];
}

// In place: [x] -> [phi | psi coarsest | ... | psi finest] after `levels` steps.
inline void analyze_line(std::vector<double>& buf, int levels, const ScalarFilter& f, std::vector<double>& tmp)
{
    std::size_t len = buf.size();
    for (int l = 0; l < levels; ++l, len /= 2) {
        tmp.assign(len, 0.0);
        analysis_step(std::span<const double>(buf.data(), len), std::span<double>(tmp.data(), len / 2),
                      std::span<double>(tmp.data() + len / 2, len / 2), f);
        std::copy(tmp.begin(), tmp.end(), buf.begin());
    }
}

inline void lowpass_line(std::vector<double>& buf, int levels, const ScalarFilter& f, std::vector<double>& tmp)
{
    std::size_t len = buf.size();
    for (int l = 0; l < levels; ++l, len /= 2) {
        tmp.assign(len / 2, 0.0);
        analysis_step(std::span<const double>(buf.data(), len), std::span<double>(tmp.data(), len / 2), {}, f);
        std::copy(tmp.begin(), tmp.end(), buf.begin());
    }
    buf.resize(len);
}

inline void synthesize_line(std::vector<double>& buf, int levels, const ScalarFilter& f, std::vector<double>& tmp)
{
    for (int l = levels - 1; l >= 0; --l) {
        const std::size_t len = buf.size() >> l;
        tmp.assign(len, 0.0);
        synthesis_step(std::span<const double>(buf.data(), len / 2), std::span<const double>(buf.data() + len / 2, len / 2),
                       std::span<double>(tmp.data(), len), f);
        std::copy(tmp.begin(), tmp.end(), buf.begin());
    }
}

/// Dense row-major array with per-axis extents.
struct Grid {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    static Grid cube(int d, std::size_t side) { return {std::vector<std::size_t>(static_cast<std::size_t>(d), side), {}}; }

    [[nodiscard]] std::size_t volume() const
    {
        std::size_t v = 1;
        for (auto s : shape) v *= s;
        return v;
    }
};

enum class LineOp { analyze, lowpass, synthesize };

// Multi-level line transform along one axis; lowpass shrinks that axis by 2^levels.
inline Grid along_axis(const Grid& in, std::size_t axis, int levels, LineOp op, const ScalarFilter& f)
{
    const std::size_t side = in.shape[axis];
    const std::size_t out_side = op == LineOp::lowpass ? side >> levels : side;
    std::size_t inner = 1;
    for (std::size_t b = axis + 1; b < in.shape.size(); ++b) inner *= in.shape[b];
    const std::size_t outer = in.volume() / (inner * side);
    Grid out{in.shape, {}};
    out.shape[axis] = out_side;
    out.data.assign(outer * out_side * inner, 0.0);
    std::vector<double> buf;
    std::vector<double> tmp;
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < inner; ++i) {
            buf.resize(side);
            const std::size_t in_base = o * side * inner + i;
            for (std::size_t t = 0; t < side; ++t) buf[t] = in.data[in_base + t * inner];
            if (op == LineOp::analyze) analyze_line(buf, levels, f, tmp);
            else if (op == LineOp::lowpass) lowpass_line(buf, levels, f, tmp);
            else synthesize_line(buf, levels, f, tmp);
            const std::size_t out_base = o * out_side * inner + i;
            for (std::size_t t = 0; t < out_side; ++t) out.data[out_base + t * inner] = buf[t];
        }
    return out;
}

// Applies the line transform along every axis: increasing axis order for analysis, reverse for synthesis.
inline Grid along_axes(Grid g, int levels, LineOp op, const ScalarFilter& f)
{
    if (levels <= 0) return g;
    const std::size_t d = g.shape.size();
    for (std::size_t step = 0; step < d; ++step) {
        const std::size_t axis = op == LineOp::synthesize ? d - 1 - step : step;
        g = along_axis(g, axis, levels, op, f);
    }
    return g;
}

} // namespace detail

/// Periodic scalar pyramid: approximation plus details ordered coarsest first.
struct ScalarPyramid {
    std::vector<double> approx;
    std::vector<std::vector<double>> details;
};

inline ScalarPyramid dwt_channel(std::span<const double> x, const ScalarFilter& f, int levels)
{
    const int S = log2_size(static_cast<std::int64_t>(x.size()));
    if (levels < 0 || levels > S) throw ShapeError("dwt_channel: levels must lie in 0..log2(N)");
    std::vector<double> buf(x.begin(), x.end());
    std::vector<double> tmp;
    detail::analyze_line(buf, levels, f, tmp);
    ScalarPyramid p;
    std::size_t len = buf.size() >> levels;
    p.approx.assign(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(len));
    for (int l = 0; l < levels; ++l, len *= 2)
        p.details.emplace_back(buf.begin() + static_cast<std::ptrdiff_t>(len), buf.begin() + static_cast<std::ptrdiff_t>(2 * len));
    return p;
}

inline std::vector<double> idwt_channel(const ScalarPyramid& p, const ScalarFilter& f)
{
    std::vector<double> buf = p.approx;
    for (const auto& d : p.details) {
        if (d.size() != buf.size()) throw ShapeError("idwt_channel: detail band has wrong length");
        buf.insert(buf.end(), d.begin(), d.end());
    }
    std::vector<double> tmp;
    detail::synthesize_line(buf, static_cast<int>(p.details.size()), f, tmp);
    return buf;
}

/// Scalar coefficient block of one tensor atom shape (level, eps, alpha) inside a channel pyramid.
struct ScalarSubband {
    int level = 0;
    int band = 0;
    int column = 0;
    std::vector<int> eps;
    std::vector<int> alpha;
    std::vector<std::int64_t> extent;
    std::vector<std::int64_t> origin;
    std::size_t offset = 0;

    [[nodiscard]] std::size_t size() const
    {
        std::size_t v = 1;
        for (auto e : extent) v *= static_cast<std::size_t>(e);
        return v;
    }
    bool operator==(const ScalarSubband&) const = default;
};

/// Matrix coefficients of one vector family at one level; column r is absent when `subband[r]` is -1.
struct MatrixBand {
    int family = 0;
    int level = 0;
    bool approximation = false;
    std::vector<std::int64_t> extent;
    std::vector<int> subband;

    [[nodiscard]] std::size_t count() const
    {
        std::size_t v = 1;
        for (auto e : extent) v *= static_cast<std::size_t>(e);
        return v;
    }
    bool operator==(const MatrixBand&) const = default;
};

/**
 * Bijection between scalar coefficients and matrix slots for an N^d signal
 * decomposed over `levels` scalar levels. Scales are relative to the coarsest
 * scalar level; vector level j has its top at scalar scale top[j].
 */
struct RegroupLayout {
    int d = 1;
    int m = 1;
    std::int64_t n = 0;
    int levels = 0;
    std::int64_t coarse = 0;
    std::vector<int> top;
    std::vector<ScalarSubband> subbands;
    std::vector<MatrixBand> bands;
    std::size_t per_channel = 0;

    bool operator==(const RegroupLayout&) const = default;
};

inline RegroupLayout regrouping_layout(const BasisND& basis, std::int64_t n, int levels)
{
    const int S = log2_size(n);
    if (levels < 0 || levels > S) throw ShapeError("levels must lie in 0.." + std::to_string(S));
    const int m = basis.m;
    RegroupLayout lay;
    lay.d = basis.d;
    lay.m = m;
    lay.n = n;
    lay.levels = levels;
    lay.coarse = n >> levels;
    const int jmax = levels >= m ? (levels - m) / m : -1;
    const int jtop = std::max(jmax, 0);
    for (int j = 0; j <= jtop; ++j) lay.top.push_back(j == jtop ? levels : m * (j + 1) + m - 1);

    auto add_band = [&](std::size_t fam, int j) {
        const VectorFamily& f = basis.families[fam];
        const int c = lay.top[static_cast<std::size_t>(j)];
        MatrixBand band{static_cast<int>(fam), j, f.e == 0, std::vector<std::int64_t>(static_cast<std::size_t>(lay.d), 0), {}};
        std::vector<ScalarSubband> cols;
        for (int r = 0; r < m; ++r) {
            ScalarSubband sb{j, static_cast<int>(lay.bands.size()), r, f.eps, f.rows[static_cast<std::size_t>(r)], {}, {}, 0};
            bool exists = true;
            for (int a = 0; a < lay.d; ++a) {
                const ComponentDescriptor c1 = tensor_factor(basis.mw, f.eps[static_cast<std::size_t>(a)], sb.alpha[static_cast<std::size_t>(a)], j);
                if (c1.kind == AtomKind::wavelet && c1.scale > c - 1) exists = false;
                sb.extent.push_back(lay.coarse << c1.scale);
                sb.origin.push_back(c1.kind == AtomKind::scaling ? 0 : lay.coarse << c1.scale);
            }
            if (!exists) {
                band.subband.push_back(-1);
                continue;
            }
            for (std::size_t a = 0; a < sb.extent.size(); ++a) band.extent[a] = std::max(band.extent[a], sb.extent[a]);
            sb.offset = lay.per_channel;
            lay.per_channel += sb.size();
            band.subband.push_back(static_cast<int>(lay.subbands.size()));
            lay.subbands.push_back(std::move(sb));
        }
        bool any = false;
        for (int s : band.subband) any = any || s >= 0;
        if (any) lay.bands.push_back(std::move(band));
    };
    for (std::size_t fam = 0; fam < basis.families.size(); ++fam)
        if (basis.families[fam].e == 0) add_band(fam, 0);
    for (int j = 0; j <= jtop; ++j)
        for (std::size_t fam = 0; fam < basis.families.size(); ++fam)
            if (basis.families[fam].e != 0) add_band(fam, j);
    return lay;
}

/// Per-channel scalar pyramids together with their matrix-coefficient view.
class VectorDecomposition {
public:
    VectorDecomposition() = default;
    VectorDecomposition(RegroupLayout layout, std::string filter_name, std::vector<std::vector<double>> coefficients)
        : layout_(std::move(layout)), filter_name_(std::move(filter_name)), coefficients_(std::move(coefficients))
    {
        if (static_cast<int>(coefficients_.size()) != layout_.m) throw CorruptionError("decomposition: expected m channel pyramids");
        for (const auto& c : coefficients_)
            if (c.size() != layout_.per_channel) throw CorruptionError("decomposition: pyramid length disagrees with the regrouping map");
    }

    [[nodiscard]] const RegroupLayout& layout() const { return layout_; }
    [[nodiscard]] const std::string& filter_name() const { return filter_name_; }
    [[nodiscard]] const std::vector<std::vector<double>>& coefficients() const { return coefficients_; }
    [[nodiscard]] std::vector<std::vector<double>>& coefficients() { return coefficients_; }

    /// Flat pyramid index of slot (band, k, column), or npos for a masked slot.
    [[nodiscard]] std::size_t slot_index(std::size_t band, std::size_t kflat, int column) const
    {
        const MatrixBand& b = layout_.bands.at(band);
        const int s = b.subband.at(static_cast<std::size_t>(column));
        if (s < 0) return npos;
        const ScalarSubband& sb = layout_.subbands[static_cast<std::size_t>(s)];
        std::size_t pos = 0;
        std::size_t rest = kflat;
        std::size_t denom = b.count();
        for (std::size_t a = 0; a < b.extent.size(); ++a) {
            denom /= static_cast<std::size_t>(b.extent[a]);
            const auto ka = static_cast<std::int64_t>(rest / denom);
            rest %= denom;
            if (ka >= sb.extent[a]) return npos;
            pos = pos * static_cast<std::size_t>(sb.extent[a]) + static_cast<std::size_t>(ka);
        }
        return sb.offset + pos;
    }

    [[nodiscard]] bool valid(std::size_t band, std::size_t kflat, int column) const { return slot_index(band, kflat, column) != npos; }

    /// C(i, r) = coefficient of channel i against row r's scalar atom; masked slots read as 0.
    [[nodiscard]] MatrixM matrix(std::size_t band, std::size_t kflat) const
    {
        MatrixM c(layout_.m);
        for (int r = 0; r < layout_.m; ++r) {
            const std::size_t idx = slot_index(band, kflat, r);
            if (idx == npos) continue;
            for (int i = 0; i < layout_.m; ++i) c(i, r) = coefficients_[static_cast<std::size_t>(i)][idx];
        }
        return c;
    }

    /// Writes the valid slots of `c`; masked slots must be zero.
    void set_matrix(std::size_t band, std::size_t kflat, const MatrixM& c)
    {
        for (int r = 0; r < layout_.m; ++r) {
            const std::size_t idx = slot_index(band, kflat, r);
            for (int i = 0; i < layout_.m; ++i) {
                if (idx == npos) {
                    if (c(i, r) != 0.0) throw CorruptionError("set_matrix: nonzero value in a masked slot");
                    continue;
                }
                coefficients_[static_cast<std::size_t>(i)][idx] = c(i, r);
            }
        }
    }

    [[nodiscard]] double energy() const
    {
        long double e = 0.0L;
        for (const auto& c : coefficients_)
            for (double v : c) e += static_cast<long double>(v) * v;
        return static_cast<double>(e);
    }

    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

private:
    RegroupLayout layout_;
    std::string filter_name_;
    std::vector<std::vector<double>> coefficients_;
};

namespace detail {

inline std::size_t grid_position(const ScalarSubband& sb, std::size_t local, std::size_t side)
{
    std::size_t pos = 0;
    std::size_t denom = sb.size();
    for (std::size_t a = 0; a < sb.extent.size(); ++a) {
        denom /= static_cast<std::size_t>(sb.extent[a]);
        const std::size_t ka = local / denom;
        local %= denom;
        pos = pos * side + static_cast<std::size_t>(sb.origin[a]) + ka;
    }
    return pos;
}

inline void check_signal(const VectorSignal& s, const BasisND& basis)
{
    s.validate();
    if (s.d != basis.d) throw DimensionError("signal dimension " + std::to_string(s.d) + " differs from basis d=" + std::to_string(basis.d));
    if (s.m != basis.m) throw DimensionError("signal has " + std::to_string(s.m) + " channels, basis expects " + std::to_string(basis.m));
}

} // namespace detail

/**
 * Per-channel separable analysis in the vector tensor basis. At vector level j
 * the current approximation (scalar scale c) is decomposed c - m j levels along
 * every axis; the blocks holding a wavelet factor are kept and the
 * approximation is reduced to scalar scale m j + m - 1 for the next level.
 */
inline VectorDecomposition analyze_vector(const VectorSignal& signal, const BasisND& basis, int levels)
{
    detail::check_signal(signal, basis);
    RegroupLayout lay = regrouping_layout(basis, signal.n, levels);
    const ScalarFilter& f = basis.mw.filter;
    const int m = basis.m;
    std::vector<std::vector<double>> out(static_cast<std::size_t>(m), std::vector<double>(lay.per_channel, 0.0));
    for (int ch = 0; ch < m; ++ch) {
        detail::Grid a = detail::Grid::cube(signal.d, static_cast<std::size_t>(signal.n));
        a.data = signal.channels[static_cast<std::size_t>(ch)];
        auto& dst = out[static_cast<std::size_t>(ch)];
        for (int j = static_cast<int>(lay.top.size()) - 1; j >= 0; --j) {
            const int c = lay.top[static_cast<std::size_t>(j)];
            const detail::Grid full = detail::along_axes(a, c - m * j, detail::LineOp::analyze, f);
            const std::size_t side = full.shape.front();
            for (const auto& sb : lay.subbands) {
                if (sb.level != j) continue;
                for (std::size_t t = 0; t < sb.size(); ++t) dst[sb.offset + t] = full.data[detail::grid_position(sb, t, side)];
            }
            if (j > 0) a = detail::along_axes(a, c - (m * j + m - 1), detail::LineOp::lowpass, f);
        }
    }
    return VectorDecomposition(std::move(lay), f.name, std::move(out));
}

inline VectorDecomposition analyze_vector(const VectorSignal& signal, const VectorBasis1D& basis, int levels)
{
    return analyze_vector(signal, build_basis_nd(basis.filter, 1, basis.m), levels);
}

/// Inverse of analyze_vector; throws CorruptionError when `dec` does not match the layout for (basis, N, levels).
inline VectorSignal synthesize_vector(const VectorDecomposition& dec, const BasisND& basis)
{
    const RegroupLayout& lay = dec.layout();
    if (lay.d != basis.d || lay.m != basis.m) throw CorruptionError("decomposition shape disagrees with the basis");
    if (!(regrouping_layout(basis, lay.n, lay.levels) == lay)) throw CorruptionError("decomposition regrouping map is inconsistent");
    if (dec.coefficients().size() != static_cast<std::size_t>(lay.m)) throw CorruptionError("decomposition: wrong channel count");
    for (const auto& c : dec.coefficients())
        if (c.size() != lay.per_channel) throw CorruptionError("decomposition: pyramid length disagrees with the regrouping map");
    const ScalarFilter& f = basis.mw.filter;
    const int m = basis.m;
    VectorSignal s{lay.d, m, lay.n, {}};
    for (int ch = 0; ch < m; ++ch) {
        const auto& src = dec.coefficients()[static_cast<std::size_t>(ch)];
        detail::Grid a;
        for (std::size_t j = 0; j < lay.top.size(); ++j) {
            const int c = lay.top[j];
            const auto side = static_cast<std::size_t>(lay.coarse << c);
            detail::Grid full = detail::Grid::cube(lay.d, side);
            full.data.assign(full.volume(), 0.0);
            if (j > 0) {
                const detail::Grid v = detail::along_axes(a, m - 1, detail::LineOp::analyze, f);
                const std::size_t vs = v.shape.front();
                for (std::size_t t = 0; t < v.data.size(); ++t) {
                    std::size_t pos = 0;
                    std::size_t rest = t;
                    std::size_t denom = v.data.size();
                    for (int ax = 0; ax < lay.d; ++ax) {
                        denom /= vs;
                        pos = pos * side + rest / denom;
                        rest %= denom;
                    }
                    full.data[pos] = v.data[t];
                }
            }
            for (const auto& sb : lay.subbands) {
                if (sb.level != static_cast<int>(j)) continue;
                for (std::size_t t = 0; t < sb.size(); ++t) full.data[detail::grid_position(sb, t, side)] = src[sb.offset + t];
            }
            a = detail::along_axes(std::move(full), c - m * static_cast<int>(j), detail::LineOp::synthesize, f);
        }
        s.channels.push_back(std::move(a.data));
    }
    return s;
}

inline VectorSignal synthesize_vector(const VectorDecomposition& dec, const VectorBasis1D& basis)
{
    return synthesize_vector(dec, build_basis_nd(basis.filter, 1, basis.m));
}

enum class MatrixNorm { frobenius, norm1 };

/// Zeroes every wavelet matrix coefficient whose norm is below tau; approximation bands are kept.
inline VectorDecomposition threshold_matrix(const VectorDecomposition& dec, double tau, MatrixNorm norm)
{
    if (!(tau >= 0.0)) throw ParameterError("threshold_matrix: tau must be >= 0");
    VectorDecomposition out = dec;
    const auto& bands = dec.layout().bands;
    for (std::size_t b = 0; b < bands.size(); ++b) {
        if (bands[b].approximation) continue;
        for (std::size_t k = 0; k < bands[b].count(); ++k) {
            const MatrixM c = dec.matrix(b, k);
            const double v = norm == MatrixNorm::frobenius ? frobenius(c) : norm1(c);
            if (v < tau) out.set_matrix(b, k, MatrixM(c.size()));
        }
    }
    return out;
}

} // namespace vecwave

#endif // VECWAVE_VTRANSFORM_HPP
