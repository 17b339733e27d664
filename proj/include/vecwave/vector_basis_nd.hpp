// SPDX-License-Identifier: Apache-2.0
#ifndef VECWAVE_VECTOR_BASIS_ND_HPP
#define VECWAVE_VECTOR_BASIS_ND_HPP

#include "vecwave/error.hpp"
#include "vecwave/scalar_wavelet.hpp"
#include "vecwave/star_product.hpp"
#include "vecwave/tensor_multiwavelet.hpp"
#include "vecwave/vector_basis_1d.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace vecwave {

/// Division of {1..m}^d into m^{d-1} ordered blocks of m tuples; block rows become vector channels.
struct Partition {
    int d = 1;
    int m = 1;
    std::vector<std::vector<std::vector<int>>> blocks;

    /// Throws ParameterError unless blocks are disjoint, of size m, and cover {1..m}^d.
    void validate() const
    {
        std::size_t expected = 1;
        for (int i = 1; i < d; ++i) expected *= static_cast<std::size_t>(m);
        if (blocks.size() != expected) throw ParameterError("partition: expected m^(d-1) blocks");
        std::set<std::vector<int>> seen;
        for (const auto& block : blocks) {
            if (static_cast<int>(block.size()) != m) throw ParameterError("partition: every block needs exactly m tuples");
            for (const auto& a : block) {
                if (static_cast<int>(a.size()) != d) throw ParameterError("partition: tuple of wrong dimension");
                for (int v : a)
                    if (v < 1 || v > m) throw ParameterError("partition: tuple entry out of 1..m");
                if (!seen.insert(a).second) throw ParameterError("partition: tuple appears twice");
            }
        }
    }
};

/**
 * Block beta in {1..m}^{d-1} (lexicographic) holds rows r = 1..m with
 * alpha = (r, ((beta_i + r - 2) mod m) + 1, ...).
 */
inline Partition cyclic_partition(int d, int m)
{
    if (d < 1 || m < 1) throw ParameterError("cyclic_partition: d and m must be >= 1");
    Partition p{d, m, {}};
    auto emit = [&](const std::vector<int>& beta) {
        std::vector<std::vector<int>> block;
        for (int r = 1; r <= m; ++r) {
            std::vector<int> alpha{r};
            for (int b : beta) alpha.push_back((b + r - 2) % m + 1);
            block.push_back(std::move(alpha));
        }
        p.blocks.push_back(std::move(block));
    };
    if (d == 1)
        emit({});
    else
        detail::for_each_tuple(d - 1, 1, m, emit);
    p.validate();
    return p;
}

/// Uniformly shuffled valid partition; deterministic for a given seed.
inline Partition random_partition(int d, int m, std::uint64_t seed)
{
    if (d < 1 || m < 1) throw ParameterError("random_partition: d and m must be >= 1");
    std::vector<std::vector<int>> all;
    detail::for_each_tuple(d, 1, m, [&](const std::vector<int>& a) { all.push_back(a); });
    std::mt19937_64 rng(seed);
    std::shuffle(all.begin(), all.end(), rng);
    Partition p{d, m, {}};
    for (std::size_t i = 0; i < all.size(); i += static_cast<std::size_t>(m))
        p.blocks.emplace_back(all.begin() + static_cast<std::ptrdiff_t>(i), all.begin() + static_cast<std::ptrdiff_t>(i) + m);
    p.validate();
    return p;
}

/// A vector atom family: orientation eps paired with one partition block.
struct VectorFamily {
    std::string name;
    int e = 0;
    std::vector<int> eps;
    int block = 0;
    std::vector<std::vector<int>> rows;
};

struct BasisND {
    Multiwavelet mw;
    int d = 1;
    int m = 1;
    Partition partition;
    std::vector<VectorFamily> families;

    [[nodiscard]] std::vector<const VectorFamily*> families_with(int e) const
    {
        std::vector<const VectorFamily*> out;
        for (const auto& f : families)
            if (f.e == e) out.push_back(&f);
        return out;
    }

    [[nodiscard]] const VectorFamily& family(const std::string& name) const
    {
        for (const auto& f : families)
            if (f.name == name) return f;
        throw ParameterError("unknown family '" + name + "'");
    }
};

/// Families ordered by (e, eps, block), named Phi1.. for eps = 0 and Psi1.. otherwise.
inline BasisND build_basis_nd(const ScalarFilter& filter, int d, int m, const Partition& partition)
{
    detail::check_guard(d, m);
    if (partition.d != d || partition.m != m) throw DimensionError("build_basis_nd: partition shape differs from (d, m)");
    partition.validate();
    BasisND b{to_multiwavelet(build_vector_basis(filter, m)), d, m, partition, {}};
    std::vector<std::vector<int>> orientations;
    detail::for_each_tuple(d, 0, 1, [&](const std::vector<int>& eps) { orientations.push_back(eps); });
    std::stable_sort(orientations.begin(), orientations.end(),
                     [](const auto& x, const auto& y) { return detail::popcount(x) < detail::popcount(y); });
    int scaling_count = 0;
    int wavelet_count = 0;
    for (const auto& eps : orientations) {
        const int e = detail::popcount(eps);
        for (std::size_t l = 0; l < partition.blocks.size(); ++l) {
            const std::string name = e == 0 ? "Phi" + std::to_string(++scaling_count) : "Psi" + std::to_string(++wavelet_count);
            b.families.push_back({name, e, eps, static_cast<int>(l), partition.blocks[l]});
        }
    }
    return b;
}

inline BasisND build_basis_nd(const ScalarFilter& filter, int d, int m)
{
    detail::check_guard(d, m);
    return build_basis_nd(filter, d, m, cyclic_partition(d, m));
}

/// Row r of a family as a product such as `phi1(x)psi2(y)`.
inline std::string symbolic_row(const VectorFamily& f, int r)
{
    static const char* axes[] = {"x", "y", "z", "u", "v", "w"};
    std::string s;
    const auto& alpha = f.rows.at(static_cast<std::size_t>(r));
    for (std::size_t i = 0; i < alpha.size(); ++i)
        s += std::string(f.eps[i] ? "psi" : "phi") + std::to_string(alpha[i]) + "(" + axes[i] + ")";
    return s;
}

struct CatalogEntry {
    std::string name;
    std::vector<int> eps;
    int block = 0;
    std::vector<std::string> rows;
};

/// The eight d = m = 2 families with their symbolic channel formulas.
inline std::vector<CatalogEntry> planar_pair_catalog(const BasisND& basis)
{
    if (basis.d != 2 || basis.m != 2) throw ParameterError("planar_pair_catalog: requires d = m = 2");
    std::vector<CatalogEntry> out;
    for (const auto& f : basis.families) {
        CatalogEntry c{f.name, f.eps, f.block, {}};
        for (int r = 0; r < basis.m; ++r) c.rows.push_back(symbolic_row(f, r));
        out.push_back(std::move(c));
    }
    return out;
}

/// Scalar tensor atom carried by row r of a family at level j, translation k.
inline TensorAtom row_atom(const VectorFamily& f, int r, int level, const std::vector<std::int64_t>& k)
{
    return {level, k, f.eps, f.rows.at(static_cast<std::size_t>(r))};
}

/// Dense samples of a vector atom, channel r = row r's separable product (d <= 3).
inline VectorSampledFunction sample_vector_atom_nd(const BasisND& basis, const VectorFamily& f, int level,
                                                   const std::vector<std::int64_t>& k, int J, const AtomCache& cache)
{
    if (basis.d > max_dense_dimension) throw SizeError("sample_vector_atom_nd: dense sampling limited to d <= 3");
    if (static_cast<int>(k.size()) != basis.d) throw DimensionError("sample_vector_atom_nd: translation has wrong dimension");
    std::vector<std::vector<SampledFunction>> factors;
    for (int r = 0; r < basis.m; ++r) factors.push_back(tensor_factors(row_atom(f, r, level, k), basis.mw, J, cache));
    return VectorSampledFunction::separable(factors);
}

inline VectorSampledFunction sample_vector_atom_nd(const BasisND& basis, const VectorFamily& f, int level,
                                                   const std::vector<std::int64_t>& k, int J)
{
    const AtomCache cache(basis.mw.filter);
    return sample_vector_atom_nd(basis, f, level, k, J, cache);
}

/// A vector atom reference: family, level and translation.
struct VectorAtomRef {
    const VectorFamily* family = nullptr;
    int level = 0;
    std::vector<std::int64_t> k;
};

/// *-product whose entries are products of one-dimensional quadrature inner products.
inline MatrixM star_separable(const BasisND& basis, const VectorAtomRef& a, const VectorAtomRef& b, int J, const AtomCache& cache)
{
    MatrixM s(basis.m);
    for (int i = 0; i < basis.m; ++i)
        for (int j = 0; j < basis.m; ++j)
            s(i, j) = separable_inner(row_atom(*a.family, i, a.level, a.k), row_atom(*b.family, j, b.level, b.k), basis.mw, J, cache);
    return s;
}

/// *-product from the filter-domain inner products of the factors.
inline MatrixM star_exact(const BasisND& basis, const VectorAtomRef& a, const VectorAtomRef& b)
{
    MatrixM s(basis.m);
    for (int i = 0; i < basis.m; ++i)
        for (int j = 0; j < basis.m; ++j)
            s(i, j) = exact_tensor_inner(row_atom(*a.family, i, a.level, a.k), row_atom(*b.family, j, b.level, b.k), basis.mw);
    return s;
}

} // namespace vecwave

#endif // VECWAVE_VECTOR_BASIS_ND_HPP
