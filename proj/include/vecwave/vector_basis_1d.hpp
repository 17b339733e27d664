// SPDX-License-Identifier: Apache-2.0
#ifndef VECWAVE_VECTOR_BASIS_1D_HPP
#define VECWAVE_VECTOR_BASIS_1D_HPP

#include "vecwave/error.hpp"
#include "vecwave/scalar_wavelet.hpp"
#include "vecwave/star_product.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace vecwave {

/// One channel of a vector atom: gain * 2^{scale/2} atom(2^scale x - k), translation k at its own scale.
struct ComponentDescriptor {
    AtomKind kind = AtomKind::scaling;
    int scale = 0;
    double gain = 1.0;

    static ComponentDescriptor make(AtomKind kind, int scale) { return {kind, scale, 1.0}; }

    [[nodiscard]] double amplitude() const { return gain * std::sqrt(std::ldexp(1.0, scale)); }
    [[nodiscard]] ComponentDescriptor shifted(int by) const { return {kind, scale + by, gain}; }

    bool operator==(const ComponentDescriptor&) const = default;
};

inline std::string to_string(const ComponentDescriptor& c)
{
    return std::string(to_string(c.kind)) + "@" + std::to_string(c.scale);
}

/// Which vector atom of a basis: the scaling vector or the wavelet vector at level t.
struct AtomLevel {
    bool wavelet = false;
    int level = 0;

    static AtomLevel scaling() { return {false, 0}; }
    static AtomLevel wavelet_at(int t) { return {true, t}; }
};

/// m scaling functions and m mother wavelets of L2(R), each a scaled scalar atom.
struct Multiwavelet {
    ScalarFilter filter;
    int m = 1;
    std::vector<ComponentDescriptor> scaling;
    std::vector<ComponentDescriptor> wavelets;
};

/**
 * Vector-valued basis of L2(R, R^m) with dilation 2^m.
 *
 * The scaling vector has components (phi, psi@0, ..., psi@(m-2)); the wavelet
 * vector at level t has psi at scales m t + m - 1 ... m t + 2m - 2.
 */
struct VectorBasis1D {
    ScalarFilter filter;
    int m = 1;
    std::vector<ComponentDescriptor> scaling_spec;
    std::vector<ComponentDescriptor> mother_spec;

    [[nodiscard]] int dilation() const { return 1 << m; }

    [[nodiscard]] std::vector<ComponentDescriptor> wavelet_spec(int t) const
    {
        if (t < 0) throw ParameterError("wavelet_spec: level must be >= 0");
        std::vector<ComponentDescriptor> out;
        out.reserve(mother_spec.size());
        for (const auto& c : mother_spec) out.push_back(c.shifted(m * t));
        return out;
    }

    [[nodiscard]] std::vector<ComponentDescriptor> components(AtomLevel which) const
    {
        return which.wavelet ? wavelet_spec(which.level) : scaling_spec;
    }
};

inline VectorBasis1D build_vector_basis(const ScalarFilter& filter, int m)
{
    if (m < 1 || m > 16) throw ParameterError("build_vector_basis: m must lie in 1..16");
    VectorBasis1D b;
    b.filter = filter;
    b.m = m;
    b.scaling_spec.push_back(ComponentDescriptor::make(AtomKind::scaling, 0));
    for (int r = 0; r + 1 < m; ++r) b.scaling_spec.push_back(ComponentDescriptor::make(AtomKind::wavelet, r));
    for (int r = 0; r < m; ++r) b.mother_spec.push_back(ComponentDescriptor::make(AtomKind::wavelet, m - 1 + r));
    return b;
}

/// Samples amplitude * atom(2^scale x - k) on the level-J grid.
inline SampledFunction sample_component(const AtomCache& cache, const ComponentDescriptor& c, std::int64_t k, int J)
{
    if (c.scale < 0) throw ParameterError("sample_component: negative scale");
    if (c.scale > J)
        throw ResolutionError("sample_component: scale " + std::to_string(c.scale) + " exceeds grid level " + std::to_string(J));
    const SampledFunction& atom = cache.get(c.kind, J - c.scale);
    const double amp = c.amplitude();
    std::vector<double> v(atom.values());
    for (double& x : v) x *= amp;
    return SampledFunction(atom.start() + k * (std::int64_t{1} << (J - c.scale)), J, std::move(v));
}

inline VectorSampledFunction sample_vector_atom(const VectorBasis1D& basis, AtomLevel which, std::int64_t k, int J,
                                                const AtomCache& cache)
{
    std::vector<SampledFunction> parts;
    for (const auto& c : basis.components(which)) parts.push_back(sample_component(cache, c, k, J));
    return VectorSampledFunction::from_channels(parts);
}

inline VectorSampledFunction sample_vector_atom(const VectorBasis1D& basis, AtomLevel which, std::int64_t k, int J)
{
    const AtomCache cache(basis.filter);
    return sample_vector_atom(basis, which, k, J, cache);
}

/// Coefficients of a function in the orthonormal system 2^{scale/2} phi(2^scale x - n), n = start, start + 1, ...
struct ScalingExpansion {
    int scale = 0;
    std::int64_t start = 0;
    std::vector<double> coefficients;
};

/**
 * Expands amplitude * atom(2^s x - k) into scaling atoms at scale `target`
 * through the two-scale relations. Requires target >= s (target > s for psi).
 */
inline ScalingExpansion expand_to_scale(const ScalarFilter& filter, const ComponentDescriptor& c, std::int64_t k, int target)
{
    const bool is_wavelet = c.kind == AtomKind::wavelet;
    if (target < c.scale || (is_wavelet && target == c.scale))
        throw ParameterError("expand_to_scale: target scale " + std::to_string(target) + " too coarse for " + to_string(c));
    const double norm = c.gain;
    ScalingExpansion e{c.scale, k, {norm}};
    auto refine = [&filter](const ScalingExpansion& in, const std::vector<double>& taps) {
        ScalingExpansion out{in.scale + 1, 2 * in.start + filter.offset, {}};
        out.coefficients.assign(2 * in.coefficients.size() + taps.size() - 2, 0.0);
        for (std::size_t q = 0; q < in.coefficients.size(); ++q)
            for (std::size_t n = 0; n < taps.size(); ++n) out.coefficients[2 * q + n] += in.coefficients[q] * taps[n];
        return out;
    };
    if (is_wavelet) e = refine(e, filter.g);
    while (e.scale < target) e = refine(e, filter.h);
    return e;
}

/// Inner product of two scaled scalar atoms computed from their filter expansions.
inline double exact_inner(const ScalarFilter& filter, const ComponentDescriptor& a, std::int64_t ka,
                          const ComponentDescriptor& b, std::int64_t kb)
{
    const int target = std::max(a.scale, b.scale) + 1;
    const ScalingExpansion ea = expand_to_scale(filter, a, ka, target);
    const ScalingExpansion eb = expand_to_scale(filter, b, kb, target);
    const std::int64_t lo = std::max(ea.start, eb.start);
    const std::int64_t hi = std::min(ea.start + static_cast<std::int64_t>(ea.coefficients.size()),
                                     eb.start + static_cast<std::int64_t>(eb.coefficients.size()));
    long double acc = 0.0L;
    for (std::int64_t n = lo; n < hi; ++n)
        acc += static_cast<long double>(ea.coefficients[static_cast<std::size_t>(n - ea.start)]) *
               eb.coefficients[static_cast<std::size_t>(n - eb.start)];
    return static_cast<double>(acc);
}

inline Multiwavelet to_multiwavelet(const VectorBasis1D& basis)
{
    return {basis.filter, basis.m, basis.scaling_spec, basis.mother_spec};
}

/**
 * Largest |G - I| over the 2m generators, their translates |k| <= reach and
 * wavelet levels 0..levels-1 (wavelet level t shifts scales by m t).
 */
inline double multiwavelet_gram_deviation(const Multiwavelet& mw, int reach, int levels = 2)
{
    struct Item {
        ComponentDescriptor c;
        std::int64_t k;
    };
    std::vector<Item> items;
    for (std::int64_t k = -reach; k <= reach; ++k) {
        for (const auto& c : mw.scaling) items.push_back({c, k});
        for (int t = 0; t < levels; ++t)
            for (const auto& c : mw.wavelets) items.push_back({c.shifted(mw.m * t), k});
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i)
        for (std::size_t j = i; j < items.size(); ++j) {
            const double g = exact_inner(mw.filter, items[i].c, items[i].k, items[j].c, items[j].k);
            worst = std::max(worst, std::fabs(g - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

/**
 * Stacks m scaling functions into the scaling vector and m wavelets into the
 * mother wavelet vector. Throws NotOrthonormalError when the generators fail
 * the Gram check.
 */
inline VectorBasis1D from_multiwavelet(const Multiwavelet& mw, double tolerance = 1e-10)
{
    if (mw.m < 1 || static_cast<int>(mw.scaling.size()) != mw.m || static_cast<int>(mw.wavelets.size()) != mw.m)
        throw DimensionError("from_multiwavelet: expected m scaling functions and m wavelets");
    const double dev = multiwavelet_gram_deviation(mw, mw.filter.size() + 1);
    if (!(dev <= tolerance))
        throw NotOrthonormalError("from_multiwavelet: Gram deviation " + format_real(dev) + " exceeds " + format_real(tolerance));
    return {mw.filter, mw.m, mw.scaling, mw.wavelets};
}

/// Taps P_k, k = offset .. offset + size - 1, of Phi(x) = sum_k P_k 2^{m/2} Phi(2^m x - k).
struct MatrixFilter {
    std::int64_t offset = 0;
    std::vector<MatrixM> taps;
    int dilation = 2;
};

/// Derives the matrix refinement filter; only the first column (the phi channel) is nonzero.
inline MatrixFilter matrix_refinement_filter(const VectorBasis1D& basis)
{
    const int m = basis.m;
    const auto& first = basis.scaling_spec.front();
    if (first.kind != AtomKind::scaling || first.scale != 0 || first.gain != 1.0)
        throw ParameterError("matrix_refinement_filter: first scaling component must be phi at scale 0");
    std::vector<ScalingExpansion> rows;
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = std::numeric_limits<std::int64_t>::min();
    for (const auto& c : basis.scaling_spec) {
        rows.push_back(expand_to_scale(basis.filter, c, 0, m));
        lo = std::min(lo, rows.back().start);
        hi = std::max(hi, rows.back().start + static_cast<std::int64_t>(rows.back().coefficients.size()));
    }
    MatrixFilter mf{lo, std::vector<MatrixM>(static_cast<std::size_t>(hi - lo), MatrixM(m)), basis.dilation()};
    for (int r = 0; r < m; ++r) {
        const auto& e = rows[static_cast<std::size_t>(r)];
        for (std::size_t n = 0; n < e.coefficients.size(); ++n)
            mf.taps[static_cast<std::size_t>(e.start - lo) + n](r, 0) = e.coefficients[n];
    }
    return mf;
}

/// max over grid points of ||Phi(x) - sum_k P_k 2^{m/2} Phi(2^m x - k)||_1 on the level-J grid.
inline double refine_residual(const VectorBasis1D& basis, const MatrixFilter& mf, int J, const AtomCache& cache)
{
    const int m = basis.m;
    if (J < m) throw ResolutionError("refine_residual: J must be >= m");
    struct Term {
        int row;
        double weight;
        SampledFunction f;
    };
    std::vector<SampledFunction> target;
    for (const auto& c : basis.scaling_spec) target.push_back(sample_component(cache, c, 0, J));
    std::vector<Term> terms;
    for (std::size_t t = 0; t < mf.taps.size(); ++t) {
        const std::int64_t k = mf.offset + static_cast<std::int64_t>(t);
        for (int col = 0; col < m; ++col) {
            const ComponentDescriptor& c = basis.scaling_spec[static_cast<std::size_t>(col)];
            SampledFunction column;
            bool sampled = false;
            for (int r = 0; r < m; ++r) {
                const double w = mf.taps[t](r, col);
                if (w == 0.0) continue;
                if (!sampled) {
                    column = sample_component(cache, c.shifted(m), k * (std::int64_t{1} << c.scale), J);
                    sampled = true;
                }
                terms.push_back({r, w, column});
            }
        }
    }
    std::int64_t lo = target.front().start();
    std::int64_t hi = target.front().end();
    for (const auto& f : target) lo = std::min(lo, f.start()), hi = std::max(hi, f.end());
    for (const auto& t : terms) lo = std::min(lo, t.f.start()), hi = std::max(hi, t.f.end());
    const auto width = static_cast<std::size_t>(hi - lo);
    std::vector<std::vector<double>> diff(static_cast<std::size_t>(m), std::vector<double>(width, 0.0));
    for (int r = 0; r < m; ++r) {
        const auto& f = target[static_cast<std::size_t>(r)];
        for (std::int64_t i = f.start(); i < f.end(); ++i) diff[static_cast<std::size_t>(r)][static_cast<std::size_t>(i - lo)] += f.at(i);
    }
    for (const auto& t : terms)
        for (std::int64_t i = t.f.start(); i < t.f.end(); ++i)
            diff[static_cast<std::size_t>(t.row)][static_cast<std::size_t>(i - lo)] -= t.weight * t.f.at(i);
    double worst = 0.0;
    for (std::size_t i = 0; i < width; ++i) {
        double s = 0.0;
        for (int r = 0; r < m; ++r) s += std::fabs(diff[static_cast<std::size_t>(r)][i]);
        worst = std::max(worst, s);
    }
    return worst;
}

inline double refine_residual(const VectorBasis1D& basis, const MatrixFilter& mf, int J)
{
    const AtomCache cache(basis.filter);
    return refine_residual(basis, mf, J, cache);
}

} // namespace vecwave

#endif // VECWAVE_VECTOR_BASIS_1D_HPP
