// SPDX-License-Identifier: Apache-2.0
#ifndef VECWAVE_TENSOR_MULTIWAVELET_HPP
#define VECWAVE_TENSOR_MULTIWAVELET_HPP

#include "vecwave/error.hpp"
#include "vecwave/scalar_wavelet.hpp"
#include "vecwave/star_product.hpp"
#include "vecwave/vector_basis_1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace vecwave {

inline constexpr int max_enumeration_dimension = 6;
inline constexpr int max_enumeration_channels = 4;
inline constexpr int max_dense_dimension = 3;
inline constexpr std::size_t max_gram_atoms = 512;

/// Orientation bits eps and generator indices alpha (1-based) of a separable atom shape.
struct SubbandMember {
    std::vector<int> eps;
    std::vector<int> alpha;

    bool operator==(const SubbandMember&) const = default;
};

/// All shapes with exactly e wavelet factors.
struct SubbandFamily {
    int e = 0;
    std::vector<SubbandMember> members;
};

/// Separable atom: prod_i f^{eps_i, alpha_i}(x_i) at vector level j and translation k.
struct TensorAtom {
    int level = 0;
    std::vector<std::int64_t> k;
    std::vector<int> eps;
    std::vector<int> alpha;

    [[nodiscard]] int dimension() const { return static_cast<int>(eps.size()); }
    bool operator==(const TensorAtom&) const = default;
};

namespace detail {

/// Visits every tuple in {lo..hi}^d in lexicographic order.
inline void for_each_tuple(int d, int lo, int hi, const std::function<void(const std::vector<int>&)>& visit)
{
    std::vector<int> t(static_cast<std::size_t>(d), lo);
    if (d == 0 || hi < lo) return;
    while (true) {
        visit(t);
        int a = d - 1;
        while (a >= 0 && ++t[static_cast<std::size_t>(a)] > hi) t[static_cast<std::size_t>(a--)] = lo;
        if (a < 0) return;
    }
}

inline int popcount(const std::vector<int>& bits)
{
    int e = 0;
    for (int b : bits) e += b != 0;
    return e;
}

inline void check_guard(int d, int m)
{
    if (d < 1 || m < 1) throw ParameterError("dimension and channel count must be >= 1");
    if (d > max_enumeration_dimension || m > max_enumeration_channels)
        throw SizeError("enumeration guard exceeded: d <= " + std::to_string(max_enumeration_dimension) +
                        " and m <= " + std::to_string(max_enumeration_channels) + " required (got d=" +
                        std::to_string(d) + ", m=" + std::to_string(m) + ")");
}

} // namespace detail

/// Families indexed by e = 0..d; entry 0 is the base family (eps = 0).
inline std::vector<SubbandFamily> enumerate_families(int d, int m)
{
    detail::check_guard(d, m);
    std::vector<SubbandFamily> out(static_cast<std::size_t>(d) + 1);
    for (int e = 0; e <= d; ++e) out[static_cast<std::size_t>(e)].e = e;
    detail::for_each_tuple(d, 0, 1, [&](const std::vector<int>& eps) {
        auto& fam = out[static_cast<std::size_t>(detail::popcount(eps))];
        detail::for_each_tuple(d, 1, m, [&](const std::vector<int>& alpha) { fam.members.push_back({eps, alpha}); });
    });
    return out;
}

/// Writes `e,eps,alpha` rows, eps as a bit string and alpha as a dash-joined tuple.
inline void write_family_csv(std::ostream& os, const std::vector<SubbandFamily>& families)
{
    os << "e,eps,alpha\n";
    for (const auto& fam : families)
        for (const auto& mem : fam.members) {
            os << fam.e << ',';
            for (int b : mem.eps) os << b;
            os << ',';
            for (std::size_t i = 0; i < mem.alpha.size(); ++i) os << (i ? "-" : "") << mem.alpha[i];
            os << '\n';
        }
}

/// One-dimensional factor of a tensor atom: generator alpha of kind eps at vector level j.
inline ComponentDescriptor tensor_factor(const Multiwavelet& mw, int eps, int alpha, int level)
{
    if (alpha < 1 || alpha > mw.m) throw ParameterError("tensor_factor: alpha out of range");
    const auto& gens = eps ? mw.wavelets : mw.scaling;
    return gens[static_cast<std::size_t>(alpha - 1)].shifted(mw.m * level);
}

inline void check_atom(const TensorAtom& a)
{
    const std::size_t d = a.eps.size();
    if (d == 0 || a.alpha.size() != d || a.k.size() != d) throw DimensionError("TensorAtom: eps, alpha and k must share dimension");
}

inline std::vector<SampledFunction> tensor_factors(const TensorAtom& a, const Multiwavelet& mw, int J, const AtomCache& cache)
{
    check_atom(a);
    std::vector<SampledFunction> out;
    for (std::size_t i = 0; i < a.eps.size(); ++i)
        out.push_back(sample_component(cache, tensor_factor(mw, a.eps[i], a.alpha[i], a.level), a.k[i], J));
    return out;
}

/// Dense d-dimensional samples (one channel) of a tensor atom, d <= 3.
inline VectorSampledFunction sample_tensor_atom(const TensorAtom& a, const Multiwavelet& mw, int J, const AtomCache& cache)
{
    check_atom(a);
    if (a.dimension() > max_dense_dimension) throw SizeError("sample_tensor_atom: dense sampling limited to d <= 3");
    return VectorSampledFunction::separable({tensor_factors(a, mw, J, cache)});
}

inline VectorSampledFunction sample_tensor_atom(const TensorAtom& a, const Multiwavelet& mw, int J)
{
    const AtomCache cache(mw.filter);
    return sample_tensor_atom(a, mw, J, cache);
}

/// Pairwise quadrature inner products of densely sampled atoms.
inline MatrixM gram_matrix(const std::vector<TensorAtom>& atoms, const Multiwavelet& mw, int J, const AtomCache& cache)
{
    if (atoms.empty()) throw SizeError("gram_matrix: empty atom list");
    if (atoms.size() > max_gram_atoms) throw SizeError("gram_matrix: at most 512 atoms");
    std::vector<VectorSampledFunction> sampled;
    sampled.reserve(atoms.size());
    for (const auto& a : atoms) sampled.push_back(sample_tensor_atom(a, mw, J, cache));
    const int n = static_cast<int>(atoms.size());
    MatrixM g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = star(sampled[static_cast<std::size_t>(i)], sampled[static_cast<std::size_t>(j)])(0, 0);
            g(i, j) = v;
            g(j, i) = v;
        }
    return g;
}

inline MatrixM gram_matrix(const std::vector<TensorAtom>& atoms, const Multiwavelet& mw, int J)
{
    const AtomCache cache(mw.filter);
    return gram_matrix(atoms, mw, J, cache);
}

/// Product of the d one-dimensional quadrature inner products of the factors.
inline double separable_inner(const TensorAtom& a, const TensorAtom& b, const Multiwavelet& mw, int J, const AtomCache& cache)
{
    if (a.dimension() != b.dimension()) throw DimensionError("separable_inner: dimensions differ");
    const auto fa = tensor_factors(a, mw, J, cache);
    const auto fb = tensor_factors(b, mw, J, cache);
    double p = 1.0;
    for (std::size_t i = 0; i < fa.size(); ++i) p *= quad_inner(fa[i], fb[i]);
    return p;
}

/// Product of the d exact (filter-domain) inner products of the factors.
inline double exact_tensor_inner(const TensorAtom& a, const TensorAtom& b, const Multiwavelet& mw)
{
    check_atom(a);
    check_atom(b);
    if (a.dimension() != b.dimension()) throw DimensionError("exact_tensor_inner: dimensions differ");
    double p = 1.0;
    for (std::size_t i = 0; i < a.eps.size() && p != 0.0; ++i)
        p *= exact_inner(mw.filter, tensor_factor(mw, a.eps[i], a.alpha[i], a.level), a.k[i],
                         tensor_factor(mw, b.eps[i], b.alpha[i], b.level), b.k[i]);
    return p;
}

/**
 * Expands each factor of a base atom at level j through the scalar filters
 * into the first scaling generator at level j + 1, samples the expansion and
 * returns the largest pointwise deviation from the atom itself.
 */
inline double nesting_residual(const TensorAtom& a, const Multiwavelet& mw, int J, const AtomCache& cache)
{
    check_atom(a);
    if (detail::popcount(a.eps) != 0) throw ParameterError("nesting_residual: base atoms only");
    if (a.dimension() > max_dense_dimension) throw SizeError("nesting_residual: dense sampling limited to d <= 3");
    const ComponentDescriptor finer = tensor_factor(mw, 0, 1, a.level + 1);
    if (finer.kind != AtomKind::scaling) throw ParameterError("nesting_residual: first scaling generator must be phi");
    std::vector<SampledFunction> lhs = tensor_factors(a, mw, J, cache);
    std::vector<SampledFunction> rhs;
    for (std::size_t i = 0; i < a.eps.size(); ++i) {
        const ComponentDescriptor c = tensor_factor(mw, 0, a.alpha[i], a.level);
        const ScalingExpansion e = expand_to_scale(mw.filter, c, a.k[i], finer.scale);
        std::int64_t lo = lhs[i].start();
        std::int64_t hi = lhs[i].end();
        std::vector<SampledFunction> terms;
        for (std::size_t n = 0; n < e.coefficients.size(); ++n) {
            if (e.coefficients[n] == 0.0) continue;
            terms.push_back(sample_component(cache, finer, e.start + static_cast<std::int64_t>(n), J).scaled(e.coefficients[n] / finer.gain));
            lo = std::min(lo, terms.back().start());
            hi = std::max(hi, terms.back().end());
        }
        std::vector<double> sum(static_cast<std::size_t>(hi - lo), 0.0);
        for (const auto& t : terms)
            for (std::int64_t x = t.start(); x < t.end(); ++x) sum[static_cast<std::size_t>(x - lo)] += t.at(x);
        rhs.emplace_back(lo, J, std::move(sum));
    }
    const VectorSampledFunction l = VectorSampledFunction::separable({lhs});
    const VectorSampledFunction r = VectorSampledFunction::separable({rhs});
    const VectorSampledFunction diff = l.axpy(-1.0, r);
    double worst = 0.0;
    for (double v : diff.channel(0)) worst = std::max(worst, std::fabs(v));
    return worst;
}

} // namespace vecwave

#endif // VECWAVE_TENSOR_MULTIWAVELET_HPP
