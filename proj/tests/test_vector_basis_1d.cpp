// Univariate vector basis: component layout, sampling, refinement filter and multiwavelet conversion.

#include "vecwave/vector_basis_1d.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace vecwave;

namespace {

double haar_phi(double x) { return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0; }
double haar_psi(double x) { return haar_phi(2 * x) - haar_phi(2 * x - 1); }

/// Closed-form Haar evaluation of one channel: amplitude * atom(2^s x - k).
double haar_component(const ComponentDescriptor& c, double x, double k = 0.0)
{
    const double y = std::ldexp(x, c.scale) - k;
    return c.amplitude() * (c.kind == AtomKind::scaling ? haar_phi(y) : haar_psi(y));
}

struct Atom {
    AtomLevel which;
    std::int64_t k;
};

/// Largest norm1(star(a, b) - delta I) over pairs of sampled vector atoms.
double sampled_gram_deviation(const VectorBasis1D& b, const std::vector<Atom>& atoms, int J)
{
    const AtomCache cache(b.filter);
    std::vector<VectorSampledFunction> s;
    for (const auto& a : atoms) s.push_back(sample_vector_atom(b, a.which, a.k, J, cache));
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i; j < s.size(); ++j) {
            MatrixM g = star(s[i], s[j]);
            if (i == j) g -= MatrixM::identity(b.m);
            worst = std::max(worst, norm1(g));
        }
    return worst;
}

std::vector<Atom> atom_set(int m, int reach, int max_level, int J)
{
    std::vector<Atom> out;
    for (std::int64_t k = -reach; k <= reach; ++k) {
        out.push_back({AtomLevel::scaling(), k});
        for (int t = 0; t <= max_level; ++t)
            if (m * t + 2 * m - 2 < J) out.push_back({AtomLevel::wavelet_at(t), k});
    }
    return out;
}

} // namespace

TEST(BuildVectorBasis, HaarTwoChannels)
{
    const VectorBasis1D b = build_vector_basis(haar_filter(), 2);
    EXPECT_EQ(b.dilation(), 4);
    ASSERT_EQ(b.scaling_spec.size(), 2u);
    EXPECT_EQ(b.scaling_spec[0], ComponentDescriptor::make(AtomKind::scaling, 0));
    EXPECT_EQ(b.scaling_spec[1], ComponentDescriptor::make(AtomKind::wavelet, 0));
    const int expect[3][2] = {{1, 2}, {3, 4}, {5, 6}};
    for (int t = 0; t < 3; ++t) {
        const auto w = b.wavelet_spec(t);
        ASSERT_EQ(w.size(), 2u);
        for (int r = 0; r < 2; ++r) {
            EXPECT_EQ(w[static_cast<std::size_t>(r)].kind, AtomKind::wavelet);
            EXPECT_EQ(w[static_cast<std::size_t>(r)].scale, expect[t][r]);
        }
    }
    EXPECT_THROW(b.wavelet_spec(-1), ParameterError);
}

TEST(BuildVectorBasis, SingleChannelIsScalarBasis)
{
    const VectorBasis1D b = build_vector_basis(haar_filter(), 1);
    EXPECT_EQ(b.dilation(), 2);
    ASSERT_EQ(b.scaling_spec.size(), 1u);
    EXPECT_EQ(b.scaling_spec[0], ComponentDescriptor::make(AtomKind::scaling, 0));
    for (int t = 0; t < 4; ++t) EXPECT_EQ(b.wavelet_spec(t), std::vector{ComponentDescriptor::make(AtomKind::wavelet, t)});
}

TEST(BuildVectorBasis, Db2ThreeChannels)
{
    const VectorBasis1D b = build_vector_basis(daubechies_filter(2), 3);
    EXPECT_EQ(b.dilation(), 8);
    EXPECT_EQ(b.scaling_spec, (std::vector{ComponentDescriptor::make(AtomKind::scaling, 0), ComponentDescriptor::make(AtomKind::wavelet, 0),
                                           ComponentDescriptor::make(AtomKind::wavelet, 1)}));
    EXPECT_THROW(build_vector_basis(haar_filter(), 0), ParameterError);
}

TEST(BuildVectorBasis, ScalesPartitionWithoutGapOrOverlap)
{
    for (int m = 1; m <= 6; ++m) {
        const VectorBasis1D b = build_vector_basis(haar_filter(), m);
        for (int T = 0; T <= 5; ++T) {
            std::multiset<int> wavelet_scales;
            int scaling_phi = 0;
            for (const auto& c : b.scaling_spec) {
                if (c.kind == AtomKind::scaling) ++scaling_phi;
                else wavelet_scales.insert(c.scale);
            }
            for (int t = 0; t <= T; ++t)
                for (const auto& c : b.wavelet_spec(t)) wavelet_scales.insert(c.scale);
            EXPECT_EQ(scaling_phi, 1);
            // Each detail scale 0 .. mT + 2m - 2 appears exactly once.
            const int top = m * T + 2 * m - 2;
            ASSERT_EQ(static_cast<int>(wavelet_scales.size()), top + 1) << "m=" << m << " T=" << T;
            int expect = 0;
            for (int s : wavelet_scales) EXPECT_EQ(s, expect++);
        }
    }
}

TEST(SampleVectorAtom, HaarScalingChannels)
{
    const VectorBasis1D b = build_vector_basis(haar_filter(), 2);
    const VectorSampledFunction f = sample_vector_atom(b, AtomLevel::scaling(), 0, 4);
    ASSERT_EQ(f.channels(), 2);
    for (std::int64_t i = -4; i < 20; ++i) {
        const double x = std::ldexp(static_cast<double>(i), -4);
        EXPECT_EQ(f.at(0, {i}), haar_phi(x)) << i;
        EXPECT_EQ(f.at(1, {i}), haar_psi(x)) << i;
    }
}

TEST(SampleVectorAtom, HaarWaveletAmplitudes)
{
    const VectorBasis1D b = build_vector_basis(haar_filter(), 2);
    const VectorSampledFunction f = sample_vector_atom(b, AtomLevel::wavelet_at(0), 0, 4);
    for (std::int64_t i = -4; i < 20; ++i) {
        const double x = std::ldexp(static_cast<double>(i), -4);
        EXPECT_DOUBLE_EQ(f.at(0, {i}), std::sqrt(2.0) * haar_psi(2 * x)) << i;
        EXPECT_DOUBLE_EQ(f.at(1, {i}), 2.0 * haar_psi(4 * x)) << i;
    }
}

TEST(SampleVectorAtom, TranslationCovariance)
{
    for (int N : {1, 2, 3}) {
        const VectorBasis1D b = build_vector_basis(daubechies_filter(N), 3);
        const int J = 7;
        for (AtomLevel which : {AtomLevel::scaling(), AtomLevel::wavelet_at(0)}) {
            const VectorSampledFunction f0 = sample_vector_atom(b, which, 0, J);
            const VectorSampledFunction f3 = sample_vector_atom(b, which, 3, J);
            const auto comps = b.components(which);
            for (int r = 0; r < b.m; ++r) {
                // k counts translations at the component's own scale.
                const std::int64_t shift = std::int64_t{3} << (J - comps[static_cast<std::size_t>(r)].scale);
                for (std::int64_t i = f0.start()[0]; i < f0.start()[0] + f0.shape()[0]; ++i)
                    ASSERT_EQ(f0.at(r, {i}), f3.at(r, {i + shift}));
            }
        }
    }
}

TEST(SampleVectorAtom, CoarseGridRejected)
{
    const VectorBasis1D b = build_vector_basis(haar_filter(), 2);
    EXPECT_THROW(sample_vector_atom(b, AtomLevel::wavelet_at(1), 0, 3), ResolutionError);
    EXPECT_NO_THROW(sample_vector_atom(b, AtomLevel::wavelet_at(1), 0, 4));
}

TEST(MatrixRefinementFilter, HaarTwoChannelsByHand)
{
    const MatrixFilter mf = matrix_refinement_filter(build_vector_basis(haar_filter(), 2));
    EXPECT_EQ(mf.dilation, 4);
    EXPECT_EQ(mf.offset, 0);
    ASSERT_EQ(mf.taps.size(), 4u);
    const double row2[4] = {0.5, 0.5, -0.5, -0.5};
    for (int k = 0; k < 4; ++k) {
        const MatrixM& p = mf.taps[static_cast<std::size_t>(k)];
        EXPECT_NEAR(p(0, 0), 0.5, 1e-15);
        EXPECT_NEAR(p(1, 0), row2[k], 1e-15);
        EXPECT_EQ(p(0, 1), 0.0);
        EXPECT_EQ(p(1, 1), 0.0);
    }
}

TEST(MatrixRefinementFilter, SingleChannelIsScalarFilter)
{
    for (int N : {1, 2, 4}) {
        const ScalarFilter f = daubechies_filter(N);
        const MatrixFilter mf = matrix_refinement_filter(build_vector_basis(f, 1));
        EXPECT_EQ(mf.offset, f.offset);
        ASSERT_EQ(static_cast<int>(mf.taps.size()), f.size());
        for (int k = 0; k < f.size(); ++k) EXPECT_NEAR(mf.taps[static_cast<std::size_t>(k)](0, 0), f.h[static_cast<std::size_t>(k)], 1e-15);
    }
}

TEST(MatrixRefinementFilter, HaarIdentityAtArbitraryPoints)
{
    // Independent check with closed-form Haar functions off the sampling grid.
    for (int m = 1; m <= 4; ++m) {
        const VectorBasis1D b = build_vector_basis(haar_filter(), m);
        const MatrixFilter mf = matrix_refinement_filter(b);
        const double scale = std::sqrt(static_cast<double>(b.dilation()));
        for (int i = -10; i < 1000; ++i) {
            const double x = (i + 0.37) / 997.0;
            for (int r = 0; r < m; ++r) {
                double rhs = 0.0;
                for (std::size_t t = 0; t < mf.taps.size(); ++t)
                    for (int c = 0; c < m; ++c)
                        rhs += mf.taps[t](r, c) * scale *
                               haar_component(b.scaling_spec[static_cast<std::size_t>(c)], b.dilation() * x - static_cast<double>(mf.offset + static_cast<std::int64_t>(t)));
                EXPECT_NEAR(haar_component(b.scaling_spec[static_cast<std::size_t>(r)], x), rhs, 1e-12) << "m=" << m << " x=" << x;
            }
        }
    }
}

TEST(RefineResidual, Examples)
{
    const VectorBasis1D haar2 = build_vector_basis(haar_filter(), 2);
    EXPECT_LE(refine_residual(haar2, matrix_refinement_filter(haar2), 6), 1e-12);
    for (int J = 2; J <= 9; ++J) EXPECT_LE(refine_residual(haar2, matrix_refinement_filter(haar2), J), 1e-12) << J;
    const VectorBasis1D db2 = build_vector_basis(daubechies_filter(2), 2);
    EXPECT_LE(refine_residual(db2, matrix_refinement_filter(db2), 10), 1e-8);
    MatrixFilter zero = matrix_refinement_filter(haar2);
    for (auto& p : zero.taps) p = MatrixM::zero(2);
    // |phi| + |psi| = 2 on [0, 1).
    EXPECT_EQ(refine_residual(haar2, zero, 6), 2.0);
    EXPECT_THROW(refine_residual(haar2, zero, 1), ResolutionError);
}

TEST(RefineResidual, DaubechiesFamily)
{
    for (int N = 2; N <= 6; ++N)
        for (int m = 1; m <= 3; ++m) {
            const VectorBasis1D b = build_vector_basis(daubechies_filter(N), m);
            EXPECT_LE(refine_residual(b, matrix_refinement_filter(b), 10), 1e-8) << "db" << N << " m=" << m;
        }
}

TEST(Multiwavelet, HaarTwoChannelGenerators)
{
    const Multiwavelet mw = to_multiwavelet(build_vector_basis(haar_filter(), 2));
    EXPECT_EQ(mw.scaling, (std::vector{ComponentDescriptor::make(AtomKind::scaling, 0), ComponentDescriptor::make(AtomKind::wavelet, 0)}));
    EXPECT_EQ(mw.wavelets, (std::vector{ComponentDescriptor::make(AtomKind::wavelet, 1), ComponentDescriptor::make(AtomKind::wavelet, 2)}));
    EXPECT_DOUBLE_EQ(mw.wavelets[0].amplitude(), std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(mw.wavelets[1].amplitude(), 2.0);
    const Multiwavelet one = to_multiwavelet(build_vector_basis(haar_filter(), 1));
    EXPECT_EQ(one.scaling, std::vector{ComponentDescriptor::make(AtomKind::scaling, 0)});
    EXPECT_EQ(one.wavelets, std::vector{ComponentDescriptor::make(AtomKind::wavelet, 0)});
}

TEST(Multiwavelet, HaarGramExactUnderTranslations)
{
    for (int m = 1; m <= 4; ++m) EXPECT_LE(multiwavelet_gram_deviation(to_multiwavelet(build_vector_basis(haar_filter(), m)), 4, 3), 1e-10) << m;
}

TEST(Multiwavelet, DaubechiesGramFromFilterExpansion)
{
    for (int N = 2; N <= 5; ++N)
        for (int m = 1; m <= 3; ++m)
            EXPECT_LE(multiwavelet_gram_deviation(to_multiwavelet(build_vector_basis(daubechies_filter(N), m)), 2 * N, 2), 1e-12)
                << "db" << N << " m=" << m;
}

TEST(Multiwavelet, ExactInnerAgreesWithQuadrature)
{
    // Haar quadrature is exact; DB3 quadrature converges to the filter-domain value.
    const ScalarFilter haar = haar_filter();
    const AtomCache hc(haar);
    const ScalarFilter db3 = daubechies_filter(3);
    const AtomCache dc(db3);
    const std::vector<ComponentDescriptor> comps{ComponentDescriptor::make(AtomKind::scaling, 0), ComponentDescriptor::make(AtomKind::wavelet, 0),
                                                 ComponentDescriptor::make(AtomKind::wavelet, 1), ComponentDescriptor::make(AtomKind::scaling, 2)};
    for (const auto& a : comps)
        for (const auto& b : comps)
            for (std::int64_t k = -2; k <= 2; ++k) {
                EXPECT_NEAR(exact_inner(haar, a, 0, b, k), quad_inner(sample_component(hc, a, 0, 8), sample_component(hc, b, k, 8)), 1e-14);
                EXPECT_NEAR(exact_inner(db3, a, 0, b, k), quad_inner(sample_component(dc, a, 0, 14), sample_component(dc, b, k, 14)), 1e-5);
            }
}

TEST(Multiwavelet, RoundTripReproducesAtoms)
{
    for (int m = 1; m <= 3; ++m) {
        const VectorBasis1D b = build_vector_basis(haar_filter(), m);
        const VectorBasis1D back = from_multiwavelet(to_multiwavelet(b));
        EXPECT_EQ(back.m, m);
        for (AtomLevel which : {AtomLevel::scaling(), AtomLevel::wavelet_at(0), AtomLevel::wavelet_at(1)}) {
            const VectorSampledFunction x = sample_vector_atom(b, which, 1, 3 * m + 2);
            const VectorSampledFunction y = sample_vector_atom(back, which, 1, 3 * m + 2);
            for (int r = 0; r < m; ++r) EXPECT_EQ(x.channel(r), y.channel(r));
        }
    }
}

TEST(Multiwavelet, PerturbedGeneratorsRejected)
{
    Multiwavelet mw = to_multiwavelet(build_vector_basis(haar_filter(), 2));
    mw.wavelets[1].gain = 1.01;
    EXPECT_THROW(from_multiwavelet(mw), NotOrthonormalError);
    Multiwavelet dup = to_multiwavelet(build_vector_basis(daubechies_filter(2), 2));
    dup.wavelets[1] = dup.wavelets[0];
    EXPECT_THROW(from_multiwavelet(dup), NotOrthonormalError);
    Multiwavelet shortmw = to_multiwavelet(build_vector_basis(haar_filter(), 2));
    shortmw.wavelets.pop_back();
    EXPECT_THROW(from_multiwavelet(shortmw), DimensionError);
}

TEST(StarOrthonormality, HaarSampledAtoms)
{
    for (int m : {2, 3}) {
        // psi needs one grid level beyond its own scale.
        const int J = std::max(8, 2 * m + 2 * m - 1);
        const auto atoms = atom_set(m, 4, 2, J);
        EXPECT_EQ(atoms.size(), 9u * 4u);
        EXPECT_LE(sampled_gram_deviation(build_vector_basis(haar_filter(), m), atoms, J), 1e-10) << "m=" << m;
    }
}

TEST(StarOrthonormality, DaubechiesQuadratureConverges)
{
    // Fixed atom set; the quadrature defect shrinks with every refinement.
    for (int N = 2; N <= 4; ++N) {
        const VectorBasis1D b = build_vector_basis(daubechies_filter(N), 2);
        const auto atoms = atom_set(2, 2, 1, 8);
        double previous = INFINITY;
        for (int J = 8; J <= 12; J += 2) {
            const double dev = sampled_gram_deviation(b, atoms, J);
            EXPECT_LT(dev, previous) << "db" << N << " J=" << J;
            previous = dev;
        }
    }
}
