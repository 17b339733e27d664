// Partitioned vector bases of L2(R^d, R^m): partitions, family catalog, sampling and star-orthonormality.

#include "vecwave/vector_basis_nd.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace vecwave;

namespace {

using Rows = std::vector<std::vector<int>>;

std::vector<VectorAtomRef> atom_refs(const BasisND& b, int top_level, int reach)
{
    std::vector<VectorAtomRef> out;
    for (int j = 0; j <= top_level; ++j)
        for (const auto& f : b.families) {
            if (f.e == 0 && j > 0) continue;
            detail::for_each_tuple(b.d, -reach, reach, [&](const std::vector<int>& k) { out.push_back({&f, j, {k.begin(), k.end()}}); });
        }
    return out;
}

template <class StarFn>
double gram_deviation(const BasisND& b, const std::vector<VectorAtomRef>& atoms, StarFn&& star_fn)
{
    double worst = 0.0;
    for (std::size_t x = 0; x < atoms.size(); ++x)
        for (std::size_t y = x; y < atoms.size(); ++y) {
            MatrixM s = star_fn(atoms[x], atoms[y]);
            if (x == y) s -= MatrixM::identity(b.m);
            worst = std::max(worst, norm1(s));
        }
    return worst;
}

} // namespace

TEST(Partition, CyclicTwoByTwo)
{
    const Partition p = cyclic_partition(2, 2);
    ASSERT_EQ(p.blocks.size(), 2u);
    EXPECT_EQ(p.blocks[0], (Rows{{1, 1}, {2, 2}}));
    EXPECT_EQ(p.blocks[1], (Rows{{1, 2}, {2, 1}}));
}

TEST(Partition, OneDimensionalIsSingleBlock)
{
    const Partition p = cyclic_partition(1, 4);
    ASSERT_EQ(p.blocks.size(), 1u);
    EXPECT_EQ(p.blocks[0], (Rows{{1}, {2}, {3}, {4}}));
}

TEST(Partition, CyclicSatisfiesAxiomsByBruteForce)
{
    for (int d = 1; d <= 4; ++d)
        for (int m = 1; m <= 4; ++m) {
            const Partition p = cyclic_partition(d, m);
            std::size_t blocks = 1;
            for (int i = 1; i < d; ++i) blocks *= static_cast<std::size_t>(m);
            ASSERT_EQ(p.blocks.size(), blocks);
            std::set<std::vector<int>> all;
            for (const auto& block : p.blocks) {
                ASSERT_EQ(static_cast<int>(block.size()), m);
                std::set<std::vector<int>> inside(block.begin(), block.end());
                EXPECT_EQ(inside.size(), block.size());
                for (const auto& a : block) {
                    ASSERT_EQ(static_cast<int>(a.size()), d);
                    for (int v : a) EXPECT_TRUE(v >= 1 && v <= m);
                    all.insert(a);
                }
            }
            std::size_t total = 1;
            for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(m);
            EXPECT_EQ(all.size(), total) << "d=" << d << " m=" << m;
        }
    const Partition p = cyclic_partition(2, 3);
    EXPECT_EQ(p.blocks.size(), 3u);
}

TEST(Partition, ValidationRejectsBadBlocks)
{
    Partition p = cyclic_partition(2, 2);
    p.blocks[1][0] = {1, 1};
    EXPECT_THROW(p.validate(), ParameterError);
    Partition q = cyclic_partition(2, 2);
    q.blocks[0].pop_back();
    EXPECT_THROW(q.validate(), ParameterError);
    Partition r = cyclic_partition(2, 2);
    r.blocks[0][0] = {1, 3};
    EXPECT_THROW(r.validate(), ParameterError);
    EXPECT_THROW(build_basis_nd(haar_filter(), 2, 3, cyclic_partition(2, 2)), DimensionError);
}

TEST(Partition, RandomIsDeterministicAndValid)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Partition p = random_partition(3, 3, seed);
        EXPECT_NO_THROW(p.validate());
        EXPECT_EQ(p.blocks, random_partition(3, 3, seed).blocks);
    }
    EXPECT_NE(random_partition(3, 3, 1).blocks, random_partition(3, 3, 2).blocks);
}

TEST(BuildBasisND, HaarTwoByTwoCounts)
{
    const BasisND b = build_basis_nd(haar_filter(), 2, 2);
    EXPECT_EQ(b.families_with(0).size(), 2u);
    EXPECT_EQ(b.families_with(1).size() + b.families_with(2).size(), 6u);
    EXPECT_EQ(b.families.size(), 8u);
}

TEST(BuildBasisND, ScalarHaar)
{
    const BasisND b = build_basis_nd(haar_filter(), 1, 1);
    ASSERT_EQ(b.families.size(), 2u);
    EXPECT_EQ(b.families[0].name, "Phi1");
    EXPECT_EQ(b.families[1].name, "Psi1");
    EXPECT_EQ(b.families[1].rows, (Rows{{1}}));
}

TEST(BuildBasisND, FamilyCountFormula)
{
    for (int d = 1; d <= 4; ++d)
        for (int m = 1; m <= 3; ++m) {
            const BasisND b = build_basis_nd(haar_filter(), d, m);
            long long blocks = 1;
            for (int i = 1; i < d; ++i) blocks *= m;
            long long binom = 1;
            for (int e = 0; e <= d; ++e) {
                EXPECT_EQ(static_cast<long long>(b.families_with(e).size()), binom * blocks) << "d=" << d << " m=" << m << " e=" << e;
                // Unstacked rows recover every scalar shape of the subband exactly once.
                std::set<std::pair<std::vector<int>, std::vector<int>>> shapes;
                for (const VectorFamily* f : b.families_with(e))
                    for (const auto& row : f->rows) shapes.insert({f->eps, row});
                EXPECT_EQ(static_cast<long long>(shapes.size()), binom * blocks * m);
                binom = binom * (d - e) / (e + 1);
            }
        }
    const BasisND b = build_basis_nd(haar_filter(), 2, 3);
    EXPECT_EQ(b.families_with(0).size(), 3u);
    EXPECT_EQ(b.families_with(1).size() + b.families_with(2).size(), 9u);
    EXPECT_THROW(build_basis_nd(haar_filter(), 7, 2), SizeError);
}

TEST(Catalog, MatchesDisplayedAtomsSymbolForSymbol)
{
    const std::vector<std::pair<std::string, std::vector<std::string>>> expect{
        {"Phi1", {"phi1(x)phi1(y)", "phi2(x)phi2(y)"}}, {"Phi2", {"phi1(x)phi2(y)", "phi2(x)phi1(y)"}},
        {"Psi1", {"phi1(x)psi1(y)", "phi2(x)psi2(y)"}}, {"Psi2", {"phi1(x)psi2(y)", "phi2(x)psi1(y)"}},
        {"Psi3", {"psi1(x)phi1(y)", "psi2(x)phi2(y)"}}, {"Psi4", {"psi1(x)phi2(y)", "psi2(x)phi1(y)"}},
        {"Psi5", {"psi1(x)psi1(y)", "psi2(x)psi2(y)"}}, {"Psi6", {"psi1(x)psi2(y)", "psi2(x)psi1(y)"}},
    };
    const auto cat = planar_pair_catalog(build_basis_nd(haar_filter(), 2, 2));
    ASSERT_EQ(cat.size(), 8u);
    for (std::size_t i = 0; i < cat.size(); ++i) {
        EXPECT_EQ(cat[i].name, expect[i].first);
        EXPECT_EQ(cat[i].rows, expect[i].second) << cat[i].name;
    }
    EXPECT_EQ(cat[2].eps, (std::vector{0, 1}));
    EXPECT_EQ(cat[4].eps, (std::vector{1, 0}));
    EXPECT_EQ(cat[6].eps, (std::vector{1, 1}));
    EXPECT_THROW(planar_pair_catalog(build_basis_nd(haar_filter(), 2, 3)), ParameterError);
    EXPECT_THROW(planar_pair_catalog(build_basis_nd(haar_filter(), 3, 2)), ParameterError);
}

TEST(SampleVectorAtomND, HaarPhi1Channels)
{
    const BasisND b = build_basis_nd(haar_filter(), 2, 2);
    const auto f = sample_vector_atom_nd(b, b.family("Phi1"), 0, {0, 0}, 3);
    for (std::int64_t x = 0; x < 8; ++x)
        for (std::int64_t y = 0; y < 8; ++y) {
            EXPECT_EQ(f.at(0, {x, y}), 1.0);
            EXPECT_EQ(f.at(1, {x, y}), (x < 4 ? 1.0 : -1.0) * (y < 4 ? 1.0 : -1.0));
        }
    EXPECT_EQ(f.at(0, {8, 0}), 0.0);
}

TEST(SampleVectorAtomND, StarExamples)
{
    const BasisND b = build_basis_nd(haar_filter(), 2, 2);
    const auto p1 = sample_vector_atom_nd(b, b.family("Phi1"), 0, {0, 0}, 6);
    const auto p2 = sample_vector_atom_nd(b, b.family("Phi2"), 0, {0, 0}, 6);
    EXPECT_LE((star(p1, p1) - MatrixM::identity(2)).max_abs(), 1e-10);
    EXPECT_LE(star(p1, p2).max_abs(), 1e-10);
    EXPECT_THROW(b.family("Psi7"), ParameterError);
    EXPECT_THROW(sample_vector_atom_nd(b, b.family("Phi1"), 0, {0}, 6), DimensionError);
}

TEST(StarOrthonormality, HaarCyclicCatalog)
{
    const BasisND b = build_basis_nd(haar_filter(), 2, 2);
    const AtomCache cache(b.mw.filter);
    const auto atoms = atom_refs(b, 2, 2);
    EXPECT_EQ(atoms.size(), (2u + 6u * 3u) * 25u);
    const double dev = gram_deviation(b, atoms, [&](const VectorAtomRef& x, const VectorAtomRef& y) { return star_exact(b, x, y); });
    EXPECT_LE(dev, 1e-10);
}

TEST(StarOrthonormality, RandomPartitions)
{
    for (std::uint64_t seed : {3u, 5u, 8u, 13u, 21u}) {
        const BasisND b = build_basis_nd(haar_filter(), 2, 2, random_partition(2, 2, seed));
        const auto atoms = atom_refs(b, 2, 1);
        EXPECT_LE(gram_deviation(b, atoms, [&](const VectorAtomRef& x, const VectorAtomRef& y) { return star_exact(b, x, y); }), 1e-10)
            << "seed " << seed;
    }
    for (std::uint64_t seed : {1u, 2u}) {
        const BasisND b = build_basis_nd(daubechies_filter(2), 2, 3, random_partition(2, 3, seed));
        const auto atoms = atom_refs(b, 1, 1);
        EXPECT_LE(gram_deviation(b, atoms, [&](const VectorAtomRef& x, const VectorAtomRef& y) { return star_exact(b, x, y); }), 1e-12)
            << "seed " << seed;
    }
}

TEST(StarOrthonormality, DenseSeparableAndExactAgree)
{
    // Dense quadrature, factorized quadrature and filter-domain values coincide for Haar.
    const BasisND b = build_basis_nd(haar_filter(), 2, 2, random_partition(2, 2, 4));
    const AtomCache cache(b.mw.filter);
    const int J = 7;
    std::vector<VectorAtomRef> atoms;
    for (const auto& a : atom_refs(b, 2, 1))
        if (a.k[0] + a.k[1] == 0) atoms.push_back(a);
    std::vector<VectorSampledFunction> dense;
    for (const auto& a : atoms) dense.push_back(sample_vector_atom_nd(b, *a.family, a.level, a.k, J, cache));
    for (std::size_t x = 0; x < atoms.size(); ++x)
        for (std::size_t y = x; y < atoms.size(); ++y) {
            const MatrixM d = star(dense[x], dense[y]);
            EXPECT_LE((d - star_separable(b, atoms[x], atoms[y], J, cache)).max_abs(), 1e-12);
            EXPECT_LE((d - star_exact(b, atoms[x], atoms[y])).max_abs(), 1e-12);
        }
}

TEST(StarOrthonormality, ThreeDimensionalDaubechies)
{
    const BasisND b = build_basis_nd(daubechies_filter(3), 3, 2);
    const auto atoms = atom_refs(b, 1, 0);
    EXPECT_EQ(atoms.size(), 4u + 2u * 28u);
    EXPECT_LE(gram_deviation(b, atoms, [&](const VectorAtomRef& x, const VectorAtomRef& y) { return star_exact(b, x, y); }), 1e-12);
}
