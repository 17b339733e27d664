// SPDX-License-Identifier: Apache-2.0
#ifndef VECWAVE_STAR_PRODUCT_HPP
#define VECWAVE_STAR_PRODUCT_HPP

#include "vecwave/error.hpp"
#include "vecwave/scalar_wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace vecwave {

/// Dense m x m real matrix, row-major. Value type of the *-product.
class MatrixM {
public:
    MatrixM() = default;
    explicit MatrixM(int m) : m_(m), a_(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0)
    {
        if (m < 1) throw DimensionError("MatrixM: size must be >= 1");
    }
    MatrixM(std::initializer_list<std::initializer_list<double>> rows) : MatrixM(static_cast<int>(rows.size()))
    {
        int i = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != m_) throw DimensionError("MatrixM: ragged initializer");
            int j = 0;
            for (double v : row) (*this)(i, j++) = v;
            ++i;
        }
    }

    static MatrixM zero(int m) { return MatrixM(m); }
    static MatrixM identity(int m)
    {
        MatrixM r(m);
        for (int i = 0; i < m; ++i) r(i, i) = 1.0;
        return r;
    }
    static MatrixM ones(int m)
    {
        MatrixM r(m);
        std::fill(r.a_.begin(), r.a_.end(), 1.0);
        return r;
    }

    [[nodiscard]] int size() const { return m_; }
    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * m_ + j)]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * m_ + j)]; }
    [[nodiscard]] const std::vector<double>& data() const { return a_; }

    [[nodiscard]] MatrixM transpose() const
    {
        MatrixM r(m_);
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    MatrixM& operator+=(const MatrixM& o)
    {
        check_same(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    MatrixM& operator-=(const MatrixM& o)
    {
        check_same(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    MatrixM& operator*=(double s)
    {
        for (double& v : a_) v *= s;
        return *this;
    }
    friend MatrixM operator+(MatrixM a, const MatrixM& b) { return a += b; }
    friend MatrixM operator-(MatrixM a, const MatrixM& b) { return a -= b; }
    friend MatrixM operator*(MatrixM a, double s) { return a *= s; }
    friend MatrixM operator*(double s, MatrixM a) { return a *= s; }
    friend MatrixM operator*(const MatrixM& a, const MatrixM& b)
    {
        a.check_same(b);
        MatrixM r(a.m_);
        for (int i = 0; i < a.m_; ++i)
            for (int k = 0; k < a.m_; ++k)
                for (int j = 0; j < a.m_; ++j) r(i, j) += a(i, k) * b(k, j);
        return r;
    }
    bool operator==(const MatrixM&) const = default;

    /// Largest absolute entry.
    [[nodiscard]] double max_abs() const
    {
        double r = 0;
        for (double v : a_) r = std::max(r, std::fabs(v));
        return r;
    }

private:
    void check_same(const MatrixM& o) const
    {
        if (o.m_ != m_) throw DimensionError("MatrixM: size mismatch " + std::to_string(m_) + " vs " + std::to_string(o.m_));
    }

    int m_ = 0;
    std::vector<double> a_;
};

/// ||A||_1 = max_j sum_i |a_ij|, the maximum absolute column sum.
inline double norm1(const MatrixM& a)
{
    double best = 0;
    for (int j = 0; j < a.size(); ++j) {
        double col = 0;
        for (int i = 0; i < a.size(); ++i) col += std::fabs(a(i, j));
        best = std::max(best, col);
    }
    return best;
}

inline double frobenius(const MatrixM& a)
{
    double s = 0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

/// Entrywise (Hadamard) product.
inline MatrixM hadamard(const MatrixM& a, const MatrixM& b)
{
    if (a.size() != b.size()) throw DimensionError("hadamard: shapes differ");
    MatrixM r(a.size());
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) r(i, j) = a(i, j) * b(i, j);
    return r;
}

/// One CSV row per matrix row, 17 significant digits.
inline void write_csv(std::ostream& os, const MatrixM& a)
{
    for (int i = 0; i < a.size(); ++i) {
        for (int j = 0; j < a.size(); ++j) os << (j ? "," : "") << format_real(a(i, j));
        os << '\n';
    }
}

/**
 * m real channels sampled on a shared d-dimensional dyadic grid.
 *
 * All channels live on one box window: grid indices start[a] .. start[a] + shape[a] - 1
 * along axis a, row-major with the last axis contiguous. Values outside the
 * window are zero.
 */
class VectorSampledFunction {
public:
    VectorSampledFunction() = default;
    VectorSampledFunction(int level, std::vector<std::int64_t> start, std::vector<std::int64_t> shape,
                          std::vector<std::vector<double>> channels)
        : level_(level), start_(std::move(start)), shape_(std::move(shape)), channels_(std::move(channels))
    {
        if (start_.size() != shape_.size() || start_.empty()) throw DimensionError("VectorSampledFunction: bad window");
        if (channels_.empty()) throw DimensionError("VectorSampledFunction: needs at least one channel");
        for (const auto& c : channels_)
            if (c.size() != volume()) throw DimensionError("VectorSampledFunction: channel size does not match window");
    }

    /// Stacks one-dimensional samples into channels, zero-padding to the union window.
    static VectorSampledFunction from_channels(const std::vector<SampledFunction>& parts)
    {
        if (parts.empty()) throw DimensionError("from_channels: no channels");
        const int level = parts.front().level();
        std::int64_t lo = parts.front().start();
        std::int64_t hi = parts.front().end();
        for (const auto& p : parts) {
            if (p.level() != level) throw ResolutionError("from_channels: channels sampled at different levels");
            lo = std::min(lo, p.start());
            hi = std::max(hi, p.end());
        }
        std::vector<std::vector<double>> ch;
        for (const auto& p : parts) {
            std::vector<double> v(static_cast<std::size_t>(hi - lo), 0.0);
            for (std::int64_t i = p.start(); i < p.end(); ++i) v[static_cast<std::size_t>(i - lo)] = p.at(i);
            ch.push_back(std::move(v));
        }
        return VectorSampledFunction(level, {lo}, {hi - lo}, std::move(ch));
    }

    /// Channel r is the outer product of factors[r][0] (x_1) ... factors[r][d-1] (x_d).
    static VectorSampledFunction separable(const std::vector<std::vector<SampledFunction>>& factors)
    {
        if (factors.empty() || factors.front().empty()) throw DimensionError("separable: no factors");
        const std::size_t d = factors.front().size();
        const int level = factors.front().front().level();
        std::vector<std::int64_t> lo(d), hi(d);
        for (std::size_t a = 0; a < d; ++a) {
            lo[a] = factors.front()[a].start();
            hi[a] = factors.front()[a].end();
        }
        for (const auto& row : factors) {
            if (row.size() != d) throw DimensionError("separable: rows differ in dimension");
            for (std::size_t a = 0; a < d; ++a) {
                if (row[a].level() != level) throw ResolutionError("separable: factors sampled at different levels");
                lo[a] = std::min(lo[a], row[a].start());
                hi[a] = std::max(hi[a], row[a].end());
            }
        }
        std::vector<std::int64_t> shape(d);
        for (std::size_t a = 0; a < d; ++a) shape[a] = hi[a] - lo[a];
        VectorSampledFunction out(level, lo, shape, std::vector<std::vector<double>>(factors.size(), std::vector<double>(volume_of(shape), 0.0)));
        for (std::size_t r = 0; r < factors.size(); ++r) {
            auto& dst = out.channels_[r];
            std::vector<std::int64_t> idx(d, 0);
            for (std::size_t flat = 0; flat < dst.size(); ++flat) {
                double v = 1.0;
                for (std::size_t a = 0; a < d && v != 0.0; ++a) v *= factors[r][a].at(lo[a] + idx[a]);
                dst[flat] = v;
                for (std::size_t a = d; a-- > 0;) {
                    if (++idx[a] < shape[a]) break;
                    idx[a] = 0;
                }
            }
        }
        return out;
    }

    [[nodiscard]] int level() const { return level_; }
    [[nodiscard]] int dimension() const { return static_cast<int>(start_.size()); }
    [[nodiscard]] int channels() const { return static_cast<int>(channels_.size()); }
    [[nodiscard]] double step() const { return std::ldexp(1.0, -level_); }
    [[nodiscard]] const std::vector<std::int64_t>& start() const { return start_; }
    [[nodiscard]] const std::vector<std::int64_t>& shape() const { return shape_; }
    [[nodiscard]] const std::vector<double>& channel(int r) const { return channels_.at(static_cast<std::size_t>(r)); }
    [[nodiscard]] std::size_t volume() const { return volume_of(shape_); }

    /// Value of channel r at absolute grid multi-index; zero outside the window.
    [[nodiscard]] double at(int r, const std::vector<std::int64_t>& index) const
    {
        std::size_t flat = 0;
        for (std::size_t a = 0; a < start_.size(); ++a) {
            const std::int64_t i = index[a] - start_[a];
            if (i < 0 || i >= shape_[a]) return 0.0;
            flat = flat * static_cast<std::size_t>(shape_[a]) + static_cast<std::size_t>(i);
        }
        return channels_[static_cast<std::size_t>(r)][flat];
    }

    /// A * f: channel i becomes sum_j A_ij f_j.
    [[nodiscard]] VectorSampledFunction mixed(const MatrixM& a) const
    {
        if (a.size() != channels()) throw DimensionError("mixed: matrix size differs from channel count");
        std::vector<std::vector<double>> out(channels_.size(), std::vector<double>(volume(), 0.0));
        for (int i = 0; i < channels(); ++i)
            for (int j = 0; j < channels(); ++j) {
                const double c = a(i, j);
                if (c == 0.0) continue;
                for (std::size_t n = 0; n < volume(); ++n) out[static_cast<std::size_t>(i)][n] += c * channels_[static_cast<std::size_t>(j)][n];
            }
        return VectorSampledFunction(level_, start_, shape_, std::move(out));
    }

    /// alpha * this + other, on the union window.
    [[nodiscard]] VectorSampledFunction axpy(double alpha, const VectorSampledFunction& other) const
    {
        check_compatible(other, "axpy");
        const std::size_t d = start_.size();
        std::vector<std::int64_t> lo(d), shape(d);
        for (std::size_t a = 0; a < d; ++a) {
            lo[a] = std::min(start_[a], other.start_[a]);
            shape[a] = std::max(start_[a] + shape_[a], other.start_[a] + other.shape_[a]) - lo[a];
        }
        std::vector<std::vector<double>> out(channels_.size(), std::vector<double>(volume_of(shape), 0.0));
        std::vector<std::int64_t> idx(d, 0), abs(d);
        for (std::size_t flat = 0; flat < volume_of(shape); ++flat) {
            for (std::size_t a = 0; a < d; ++a) abs[a] = lo[a] + idx[a];
            for (int r = 0; r < channels(); ++r)
                out[static_cast<std::size_t>(r)][flat] = alpha * at(r, abs) + other.at(r, abs);
            for (std::size_t a = d; a-- > 0;) {
                if (++idx[a] < shape[a]) break;
                idx[a] = 0;
            }
        }
        return VectorSampledFunction(level_, lo, shape, std::move(out));
    }

    void check_compatible(const VectorSampledFunction& o, const char* who) const
    {
        if (o.channels() != channels())
            throw DimensionError(std::string(who) + ": channel counts differ (" + std::to_string(channels()) + " vs " +
                                 std::to_string(o.channels()) + ")");
        if (o.dimension() != dimension()) throw DimensionError(std::string(who) + ": spatial dimensions differ");
        if (o.level() != level()) throw DimensionError(std::string(who) + ": grids differ");
    }

private:
    static std::size_t volume_of(const std::vector<std::int64_t>& shape)
    {
        std::size_t v = 1;
        for (auto s : shape) v *= static_cast<std::size_t>(std::max<std::int64_t>(s, 0));
        return v;
    }

    int level_ = 0;
    std::vector<std::int64_t> start_;
    std::vector<std::int64_t> shape_;
    std::vector<std::vector<double>> channels_;
};

/**
 * Matrix-valued pairing <f, g>_* = integral of f g^T: entry (i, j) is the
 * left-endpoint quadrature of f_i g_j over the common window.
 */
inline MatrixM star(const VectorSampledFunction& f, const VectorSampledFunction& g)
{
    f.check_compatible(g, "star");
    const int m = f.channels();
    const std::size_t d = static_cast<std::size_t>(f.dimension());
    std::vector<std::int64_t> lo(d), hi(d);
    for (std::size_t a = 0; a < d; ++a) {
        lo[a] = std::max(f.start()[a], g.start()[a]);
        hi[a] = std::min(f.start()[a] + f.shape()[a], g.start()[a] + g.shape()[a]);
        if (hi[a] <= lo[a]) return MatrixM(m);
    }
    std::vector<long double> acc(static_cast<std::size_t>(m * m), 0.0L);
    std::vector<double> row(static_cast<std::size_t>(m * m));
    // Odometer over the leading d-1 axes; the last axis is a contiguous run.
    std::vector<std::int64_t> idx(lo.begin(), lo.end());
    const std::int64_t run = hi[d - 1] - lo[d - 1];
    auto offset_of = [d](const VectorSampledFunction& h, const std::vector<std::int64_t>& at) {
        std::size_t flat = 0;
        for (std::size_t a = 0; a < d; ++a)
            flat = flat * static_cast<std::size_t>(h.shape()[a]) + static_cast<std::size_t>(at[a] - h.start()[a]);
        return flat;
    };
    while (true) {
        const std::size_t fo = offset_of(f, idx);
        const std::size_t go = offset_of(g, idx);
        std::fill(row.begin(), row.end(), 0.0);
        for (int i = 0; i < m; ++i) {
            const double* fp = f.channel(i).data() + fo;
            for (int j = 0; j < m; ++j) {
                const double* gp = g.channel(j).data() + go;
                double s = 0.0;
                for (std::int64_t t = 0; t < run; ++t) s += fp[t] * gp[t];
                row[static_cast<std::size_t>(i * m + j)] = s;
            }
        }
        for (std::size_t e = 0; e < row.size(); ++e) acc[e] += row[e];
        if (d == 1) break;
        std::size_t a = d - 1;
        bool done = true;
        while (a-- > 0) {
            if (++idx[a] < hi[a]) {
                done = false;
                break;
            }
            idx[a] = lo[a];
        }
        if (done) break;
    }
    long double cell = 1.0L;
    for (std::size_t a = 0; a < d; ++a) cell *= static_cast<long double>(f.step());
    MatrixM out(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out(i, j) = static_cast<double>(acc[static_cast<std::size_t>(i * m + j)] * cell);
    return out;
}

/// <f, f> summed over channels, square-rooted: the L2(R^d, R^m) norm.
inline double l2_norm(const VectorSampledFunction& f)
{
    const MatrixM s = star(f, f);
    double tr = 0;
    for (int i = 0; i < s.size(); ++i) tr += s(i, i);
    return std::sqrt(std::max(0.0, tr));
}

/**
 * Evaluates star(f, A g) directly and checks it against star(f, g) A^T;
 * throws InvariantError if the two orders disagree beyond 1e-12 (scaled by
 * the magnitudes involved).
 */
inline MatrixM star_with_matrix(const VectorSampledFunction& f, const MatrixM& a, const VectorSampledFunction& g)
{
    const MatrixM direct = star(f, g.mixed(a));
    const MatrixM base = star(f, g);
    const MatrixM reordered = base * a.transpose();
    const double scale = std::max(1.0, norm1(base) * norm1(a));
    if ((direct - reordered).max_abs() > 1e-12 * scale)
        throw InvariantError("star_with_matrix: <f, Ag>_* differs from <f, g>_* A^T");
    return direct;
}

} // namespace vecwave

#endif // VECWAVE_STAR_PRODUCT_HPP
