// SPDX-License-Identifier: Apache-2.0
#ifndef VECWAVE_SCALAR_WAVELET_HPP
#define VECWAVE_SCALAR_WAVELET_HPP

#include "vecwave/error.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace vecwave {

/// Working precision for filter design. Filter taps are derived and their
/// axioms checked in this type; transforms use the rounded double view.
using precise_real = boost::multiprecision::cpp_bin_float_50;

enum class AtomKind { scaling, wavelet };

inline const char* to_string(AtomKind kind) { return kind == AtomKind::scaling ? "phi" : "psi"; }

/**
 * Orthonormal two-scale filter pair of a compactly supported scalar wavelet.
 *
 * Taps are stored at integer offsets `offset .. offset + size() - 1` under the
 * normalization sum(h) = sqrt(2). The wavelet filter is the alternating flip
 * g_k = (-1)^k h_{L-1-k}, so phi and psi share the support [offset, offset + L - 1].
 */
struct ScalarFilter {
    std::string name;
    int offset = 0;
    std::vector<double> h;
    std::vector<double> g;
    std::vector<precise_real> h_precise;
    std::vector<precise_real> g_precise;
    int vanishing_moments = 1;

    [[nodiscard]] int size() const { return static_cast<int>(h.size()); }
    [[nodiscard]] const std::vector<double>& taps(AtomKind kind) const
    {
        return kind == AtomKind::scaling ? h : g;
    }
};

namespace detail {

inline ScalarFilter make_filter(std::string name, std::vector<precise_real> h, int vanishing)
{
    ScalarFilter f;
    f.name = std::move(name);
    f.vanishing_moments = vanishing;
    const auto L = h.size();
    f.h_precise = std::move(h);
    f.g_precise.resize(L);
    for (std::size_t k = 0; k < L; ++k) {
        const precise_real& v = f.h_precise[L - 1 - k];
        f.g_precise[k] = (k % 2 == 0) ? v : precise_real(-v);
    }
    f.h.reserve(L);
    f.g.reserve(L);
    for (std::size_t k = 0; k < L; ++k) {
        f.h.push_back(static_cast<double>(f.h_precise[k]));
        f.g.push_back(static_cast<double>(f.g_precise[k]));
    }
    return f;
}

// Minimal complex arithmetic over precise_real (std::complex is unspecified for
// non-builtin scalars).
struct Cplx {
    precise_real re{0};
    precise_real im{0};
};

inline Cplx operator+(const Cplx& a, const Cplx& b) { return {a.re + b.re, a.im + b.im}; }
inline Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
inline Cplx operator*(const Cplx& a, const Cplx& b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Cplx operator/(const Cplx& a, const Cplx& b)
{
    const precise_real den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
inline precise_real norm2(const Cplx& a) { return a.re * a.re + a.im * a.im; }

inline Cplx csqrt(const Cplx& z)
{
    using boost::multiprecision::sqrt;
    const precise_real mod = sqrt(norm2(z));
    if (mod == 0) return {};
    precise_real re2 = (mod + z.re) / 2;
    precise_real im2 = (mod - z.re) / 2;
    if (re2 < 0) re2 = 0;
    if (im2 < 0) im2 = 0;
    precise_real re = sqrt(re2);
    precise_real im = sqrt(im2);
    if (z.im < 0) im = -im;
    return {re, im};
}

inline Cplx horner(const std::vector<precise_real>& coeffs, const Cplx& z)
{
    Cplx acc{coeffs.back(), 0};
    for (std::size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * z + Cplx{coeffs[i], 0};
    return acc;
}

// Durand-Kerner iteration; coefficients in ascending order.
inline std::vector<Cplx> polynomial_roots(const std::vector<precise_real>& coeffs)
{
    const std::size_t n = coeffs.size() - 1;
    std::vector<precise_real> monic(coeffs.size());
    for (std::size_t i = 0; i <= n; ++i) monic[i] = coeffs[i] / coeffs[n];

    std::vector<Cplx> roots(n);
    Cplx seed{precise_real("0.4"), precise_real("0.9")};
    Cplx power{1, 0};
    for (auto& r : roots) {
        r = power;
        power = power * seed;
    }
    const precise_real tol = precise_real("1e-90");
    for (int iter = 0; iter < 2000; ++iter) {
        precise_real worst = 0;
        for (std::size_t i = 0; i < n; ++i) {
            Cplx den{1, 0};
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) den = den * (roots[i] - roots[j]);
            const Cplx step = horner(monic, roots[i]) / den;
            roots[i] = roots[i] - step;
            worst = std::max(worst, norm2(step));
        }
        if (worst < tol) break;
    }
    return roots;
}

inline precise_real binomial(int n, int k)
{
    precise_real r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Minimal-phase Daubechies lowpass filter by spectral factorization of
// P(y) = sum_{k<N} C(N-1+k, k) y^k, y = sin^2(w/2).
inline std::vector<precise_real> daubechies_taps(int N)
{
    using boost::multiprecision::sqrt;
    std::vector<Cplx> poly{{1, 0}};
    auto multiply = [&poly](const Cplx& root) {
        std::vector<Cplx> next(poly.size() + 1);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] = next[i + 1] + poly[i];
            next[i] = next[i] - poly[i] * root;
        }
        poly = std::move(next);
    };
    for (int i = 0; i < N; ++i) multiply(Cplx{-1, 0});
    if (N > 1) {
        std::vector<precise_real> p(static_cast<std::size_t>(N));
        for (int k = 0; k < N; ++k) p[static_cast<std::size_t>(k)] = binomial(N - 1 + k, k);
        for (const Cplx& y : polynomial_roots(p)) {
            // z + 1/z = 2 - 4y; keep the root inside the unit circle.
            const Cplx b{2 - 4 * y.re, -4 * y.im};
            const Cplx disc = csqrt(b * b - Cplx{4, 0});
            Cplx z = (b + disc) / Cplx{2, 0};
            if (norm2(z) > 1) z = (b - disc) / Cplx{2, 0};
            multiply(z);
        }
    }
    // Descending powers of z give the minimal-phase ordering (largest tap first).
    std::vector<precise_real> h;
    precise_real sum = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
        h.push_back(it->re);
        sum += it->re;
    }
    const precise_real scale = sqrt(precise_real(2)) / sum;
    for (auto& v : h) v *= scale;
    return h;
}

} // namespace detail

inline ScalarFilter haar_filter()
{
    using boost::multiprecision::sqrt;
    const precise_real r = 1 / sqrt(precise_real(2));
    return detail::make_filter("haar", {r, r}, 1);
}

/// Daubechies filter with N vanishing moments (length 2N), N in 1..10.
inline ScalarFilter daubechies_filter(int N)
{
    if (N < 1 || N > 10)
        throw ParameterError("daubechies_filter: order must lie in 1..10, got " + std::to_string(N));
    if (N == 1) return haar_filter();
    static std::mutex guard;
    static std::map<int, ScalarFilter> cache;
    std::lock_guard<std::mutex> lock(guard);
    auto it = cache.find(N);
    if (it == cache.end())
        it = cache.emplace(N, detail::make_filter("db" + std::to_string(N), detail::daubechies_taps(N), N)).first;
    return it->second;
}

/// Accepts "haar" and "db1".."db10".
inline ScalarFilter filter_by_name(const std::string& name)
{
    if (name == "haar") return haar_filter();
    if (name.size() >= 3 && name.rfind("db", 0) == 0) {
        const std::string digits = name.substr(2);
        if (digits.find_first_not_of("0123456789") == std::string::npos && digits.size() <= 2)
            return daubechies_filter(std::stoi(digits));
    }
    throw ParameterError("unknown filter '" + name + "' (expected haar or db1..db10)");
}

/// Measured deviations of a filter from the orthonormal-filter axioms.
struct FilterAxioms {
    double sum_deviation = 0;          ///< |sum h - sqrt 2|
    double orthonormality_deviation = 0; ///< max_n |sum_k h_k h_{k+2n} - delta_n|
    double moment_deviation = 0;       ///< max_{p<N} |sum_k g_k k^p|, k the absolute tap index
};

namespace detail {

template <class Real>
FilterAxioms axioms_of(const std::vector<Real>& h, const std::vector<Real>& g, int offset, int vanishing)
{
    using std::abs;
    using std::sqrt;
    FilterAxioms out;
    Real sum = 0;
    for (const auto& v : h) sum += v;
    out.sum_deviation = static_cast<double>(abs(sum - sqrt(Real(2))));
    const int L = static_cast<int>(h.size());
    for (int n = 0; 2 * n < L; ++n) {
        Real acc = 0;
        for (int k = 0; k + 2 * n < L; ++k) acc += h[static_cast<std::size_t>(k)] * h[static_cast<std::size_t>(k + 2 * n)];
        if (n == 0) acc -= 1;
        out.orthonormality_deviation = std::max(out.orthonormality_deviation, static_cast<double>(abs(acc)));
    }
    for (int p = 0; p < vanishing; ++p) {
        Real acc = 0;
        for (int k = 0; k < L; ++k) {
            Real xp = 1;
            for (int e = 0; e < p; ++e) xp *= Real(offset + k);
            acc += g[static_cast<std::size_t>(k)] * xp;
        }
        out.moment_deviation = std::max(out.moment_deviation, static_cast<double>(abs(acc)));
    }
    return out;
}

} // namespace detail

/// Axioms evaluated on the defining (extended precision) taps.
inline FilterAxioms filter_axioms(const ScalarFilter& f)
{
    return detail::axioms_of(f.h_precise, f.g_precise, f.offset, f.vanishing_moments);
}

/// Axioms evaluated on the rounded double taps used by the transforms.
inline FilterAxioms filter_axioms_double(const ScalarFilter& f)
{
    return detail::axioms_of(f.h, f.g, f.offset, f.vanishing_moments);
}

/**
 * A compactly supported function sampled on the dyadic grid of step 2^-level.
 *
 * Sample i sits at x = (start + i) * 2^-level; the function is zero outside
 * [start, start + size) in grid units. Quadrature is the left-endpoint sum.
 */
class SampledFunction {
public:
    SampledFunction() = default;
    SampledFunction(std::int64_t start, int level, std::vector<double> values)
        : start_(start), level_(level), values_(std::move(values))
    {
        if (level < 0) throw ResolutionError("SampledFunction: negative level");
        for (double v : values_)
            if (!std::isfinite(v)) throw ParameterError("SampledFunction: non-finite sample");
    }

    [[nodiscard]] std::int64_t start() const { return start_; }
    [[nodiscard]] std::int64_t end() const { return start_ + static_cast<std::int64_t>(values_.size()); }
    [[nodiscard]] int level() const { return level_; }
    [[nodiscard]] double step() const { return std::ldexp(1.0, -level_); }
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] double support_begin() const { return static_cast<double>(start_) * step(); }
    [[nodiscard]] double support_end() const { return static_cast<double>(end()) * step(); }
    [[nodiscard]] double x_at(std::int64_t grid_index) const { return static_cast<double>(grid_index) * step(); }

    /// Value at absolute grid index; zero outside the stored window.
    [[nodiscard]] double at(std::int64_t grid_index) const
    {
        const std::int64_t i = grid_index - start_;
        if (i < 0 || i >= static_cast<std::int64_t>(values_.size())) return 0.0;
        return values_[static_cast<std::size_t>(i)];
    }

    [[nodiscard]] SampledFunction translated(std::int64_t grid_shift) const
    {
        SampledFunction out = *this;
        out.start_ += grid_shift;
        return out;
    }

    [[nodiscard]] SampledFunction scaled(double factor) const
    {
        SampledFunction out = *this;
        for (double& v : out.values_) v *= factor;
        return out;
    }

    bool operator==(const SampledFunction&) const = default;

private:
    std::int64_t start_ = 0;
    int level_ = 0;
    std::vector<double> values_;
};

namespace detail {

// Integer-grid values of phi: the eigenvector of T_{n,m} = sqrt2 h_{2n-m} for
// eigenvalue 1 normalized by sum = 1, solved as (T - I + 1 1^T) v = 1.
// phi vanishes at the right end of its support, so the last node is dropped.
inline std::vector<long double> integer_values(const ScalarFilter& f)
{
    const int n = std::max(1, f.size() - 1);
    const long double s2 = std::sqrt(2.0L);
    std::vector<std::vector<long double>> a(static_cast<std::size_t>(n), std::vector<long double>(static_cast<std::size_t>(n) + 1, 0.0L));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const int k = 2 * r - c;
            long double t = (k >= 0 && k < f.size()) ? s2 * static_cast<long double>(f.h_precise[static_cast<std::size_t>(k)]) : 0.0L;
            if (r == c) t -= 1.0L;
            a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = t + 1.0L;
        }
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(n)] = 1.0L;
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) > std::fabs(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)])) piv = r;
        std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(piv)]);
        const auto& prow = a[static_cast<std::size_t>(col)];
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            auto& row = a[static_cast<std::size_t>(r)];
            const long double factor = row[static_cast<std::size_t>(col)] / prow[static_cast<std::size_t>(col)];
            if (factor == 0.0L) continue;
            for (int c = col; c <= n; ++c) row[static_cast<std::size_t>(c)] -= factor * prow[static_cast<std::size_t>(c)];
        }
    }
    std::vector<long double> v(static_cast<std::size_t>(f.size()), 0.0L);
    for (int r = 0; r < n; ++r)
        v[static_cast<std::size_t>(r)] = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(n)] / a[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
    return v;
}

// phi on the level-J grid over [0, L-1), computed level by level; even nodes
// are copied from the coarser level so restriction is exact.
inline std::vector<long double> cascade_scaling(const ScalarFilter& f, int J)
{
    const int L = f.size();
    std::vector<long double> cur = integer_values(f);
    cur.resize(static_cast<std::size_t>(std::max(1, L - 1)));
    std::vector<long double> h(f.h_precise.size());
    for (std::size_t k = 0; k < h.size(); ++k) h[k] = static_cast<long double>(f.h_precise[k]);
    const long double s2 = std::sqrt(2.0L);
    for (int j = 1; j <= J; ++j) {
        const std::int64_t half = std::int64_t{1} << (j - 1);
        const std::int64_t len = static_cast<std::int64_t>(std::max(1, L - 1)) << j;
        std::vector<long double> next(static_cast<std::size_t>(len), 0.0L);
        for (std::int64_t i = 0; i < len; ++i) {
            if (i % 2 == 0) {
                next[static_cast<std::size_t>(i)] = cur[static_cast<std::size_t>(i / 2)];
                continue;
            }
            long double acc = 0.0L;
            for (int k = 0; k < L; ++k) {
                const std::int64_t idx = i - k * half;
                if (idx < 0 || idx >= static_cast<std::int64_t>(cur.size())) continue;
                acc += h[static_cast<std::size_t>(k)] * cur[static_cast<std::size_t>(idx)];
            }
            next[static_cast<std::size_t>(i)] = s2 * acc;
        }
        cur = std::move(next);
    }
    return cur;
}

} // namespace detail

/**
 * Samples phi (or psi) of `filter` on the dyadic grid of step 2^-J over the
 * support [offset, offset + L - 1), starting from the exact integer-grid values
 * and iterating the two-scale relation J times.
 */
inline SampledFunction refine_sample(const ScalarFilter& filter, AtomKind which, int J)
{
    if (J < 0) throw ResolutionError("refine_sample: level must be >= 0");
    if (filter.size() < 2) throw ParameterError("refine_sample: filter must have at least two taps");
    const int L = filter.size();
    const std::int64_t base = static_cast<std::int64_t>(filter.offset) << J;
    if (which == AtomKind::scaling) {
        const auto phi = detail::cascade_scaling(filter, J);
        std::vector<double> v(phi.begin(), phi.end());
        return SampledFunction(base, J, std::move(v));
    }
    // psi(x) = sqrt2 sum_k g_k phi(2x - k): x on level J maps to level J of phi
    // at index 2i - k 2^J.
    const auto phi = detail::cascade_scaling(filter, J);
    const std::int64_t len = static_cast<std::int64_t>(L - 1) << J;
    const std::int64_t unit = std::int64_t{1} << J;
    const long double s2 = std::sqrt(2.0L);
    std::vector<double> v(static_cast<std::size_t>(len));
    for (std::int64_t i = 0; i < len; ++i) {
        long double acc = 0.0L;
        for (int k = 0; k < L; ++k) {
            const std::int64_t idx = 2 * i - k * unit;
            if (idx < 0 || idx >= static_cast<std::int64_t>(phi.size())) continue;
            acc += static_cast<long double>(filter.g_precise[static_cast<std::size_t>(k)]) * phi[static_cast<std::size_t>(idx)];
        }
        v[static_cast<std::size_t>(i)] = static_cast<double>(s2 * acc);
    }
    return SampledFunction(base, J, std::move(v));
}

/// Memoizes refine_sample per (filter name, kind, level); returned values are shared and immutable.
class AtomCache {
public:
    explicit AtomCache(ScalarFilter filter) : filter_(std::move(filter)) {}

    [[nodiscard]] const ScalarFilter& filter() const { return filter_; }

    const SampledFunction& get(AtomKind kind, int level) const
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(kind == AtomKind::scaling ? 0 : 1, level);
        auto it = cache_.find(key);
        if (it == cache_.end())
            it = cache_.emplace(key, std::make_shared<const SampledFunction>(refine_sample(filter_, kind, level))).first;
        return *it->second;
    }

private:
    ScalarFilter filter_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<int, int>, std::shared_ptr<const SampledFunction>> cache_;
};

/// step * sum f(x) g(x) over the common support; both functions must share a level.
inline double quad_inner(const SampledFunction& f, const SampledFunction& g)
{
    if (f.level() != g.level())
        throw ResolutionError("quad_inner: grids differ (levels " + std::to_string(f.level()) + " and " +
                              std::to_string(g.level()) + "); resample first");
    const std::int64_t lo = std::max(f.start(), g.start());
    const std::int64_t hi = std::min(f.end(), g.end());
    long double acc = 0.0L;
    for (std::int64_t i = lo; i < hi; ++i) acc += static_cast<long double>(f.at(i)) * g.at(i);
    return static_cast<double>(acc * static_cast<long double>(f.step()));
}

inline double l2_norm(const SampledFunction& f) { return std::sqrt(std::max(0.0, quad_inner(f, f))); }

/// step * sum x^p f(x) over the support, p <= 12.
inline double moment(const SampledFunction& f, int p)
{
    if (p < 0 || p > 12) throw ParameterError("moment: order must lie in 0..12");
    long double acc = 0.0L;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const long double x = static_cast<long double>(f.x_at(f.start() + static_cast<std::int64_t>(i)));
        long double xp = 1.0L;
        for (int e = 0; e < p; ++e) xp *= x;
        acc += xp * f.values()[i];
    }
    return static_cast<double>(acc * static_cast<long double>(f.step()));
}

/// Formats a double with 17 significant digits (round-trip exact).
inline std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// CSV form: `# start=<grid index> step=2^-<J> len=<n>` then one value per line.
inline void write_csv(std::ostream& os, const SampledFunction& f)
{
    os << "# start=" << f.start() << " step=2^-" << f.level() << " len=" << f.size() << '\n';
    for (double v : f.values()) os << format_real(v) << '\n';
}

inline SampledFunction read_csv(std::istream& is)
{
    std::string header;
    if (!std::getline(is, header)) throw FormatError("sampled-function CSV: missing header");
    long long start = 0;
    int level = 0;
    unsigned long long len = 0;
    if (std::sscanf(header.c_str(), "# start=%lld step=2^-%d len=%llu", &start, &level, &len) != 3)
        throw FormatError("sampled-function CSV: bad header '" + header + "'");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(len));
    std::string line;
    while (values.size() < len && std::getline(is, line)) {
        if (line.empty()) continue;
        try {
            std::size_t used = 0;
            values.push_back(std::stod(line, &used));
        } catch (const std::exception&) {
            throw FormatError("sampled-function CSV: bad value '" + line + "'");
        }
    }
    if (values.size() != len) throw FormatError("sampled-function CSV: expected " + std::to_string(len) + " values");
    return SampledFunction(start, level, std::move(values));
}

} // namespace vecwave

#endif // VECWAVE_SCALAR_WAVELET_HPP
