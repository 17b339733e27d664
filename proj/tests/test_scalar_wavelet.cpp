// Scalar filters, cascade sampling and quadrature.

#include "vecwave/scalar_wavelet.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace vecwave;

namespace {

const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

double max_shift_deviation(const SampledFunction& f, int max_shift)
{
    const std::int64_t unit = std::int64_t{1} << f.level();
    double worst = 0.0;
    for (int k = 0; k <= max_shift; ++k) {
        const double expect = k == 0 ? 1.0 : 0.0;
        worst = std::max(worst, std::fabs(quad_inner(f, f.translated(k * unit)) - expect));
    }
    return worst;
}

} // namespace

TEST(ScalarFilter, HaarTaps)
{
    const ScalarFilter f = haar_filter();
    ASSERT_EQ(f.size(), 2);
    EXPECT_EQ(f.offset, 0);
    EXPECT_DOUBLE_EQ(f.h[0], inv_sqrt2);
    EXPECT_DOUBLE_EQ(f.h[1], inv_sqrt2);
    EXPECT_DOUBLE_EQ(f.g[0], inv_sqrt2);
    EXPECT_DOUBLE_EQ(f.g[1], -inv_sqrt2);
    EXPECT_EQ(f.vanishing_moments, 1);
    EXPECT_NEAR(f.h[0] + f.h[1], std::sqrt(2.0), 1e-15);
}

TEST(ScalarFilter, Db1IsHaar)
{
    const ScalarFilter a = daubechies_filter(1);
    const ScalarFilter b = haar_filter();
    ASSERT_EQ(a.size(), b.size());
    for (int k = 0; k < a.size(); ++k) {
        EXPECT_NEAR(a.h[static_cast<std::size_t>(k)], b.h[static_cast<std::size_t>(k)], 1e-15);
        EXPECT_NEAR(a.g[static_cast<std::size_t>(k)], b.g[static_cast<std::size_t>(k)], 1e-15);
    }
}

TEST(ScalarFilter, Db2ClosedForm)
{
    // Closed-form minimal-phase taps (1+s, 3+s, 3-s, 1-s)/(4 sqrt2) with s = sqrt3.
    const double s = std::sqrt(3.0);
    const double denom = 4.0 * std::sqrt(2.0);
    const double expect[4] = {(1 + s) / denom, (3 + s) / denom, (3 - s) / denom, (1 - s) / denom};
    const ScalarFilter f = daubechies_filter(2);
    ASSERT_EQ(f.size(), 4);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(f.h[static_cast<std::size_t>(k)], expect[k], 1e-15) << "k=" << k;
}

TEST(ScalarFilter, Db3SecondMomentByDirectSum)
{
    const ScalarFilter f = daubechies_filter(3);
    long double acc = 0.0L;
    for (int k = 0; k < f.size(); ++k) {
        const long double x = f.offset + k;
        acc += static_cast<long double>(f.g[static_cast<std::size_t>(k)]) * x * x;
    }
    EXPECT_NEAR(static_cast<double>(acc), 0.0, 1e-10);
}

TEST(ScalarFilter, AllFiltersSatisfyAxioms)
{
    for (int N = 1; N <= 10; ++N) {
        const ScalarFilter f = daubechies_filter(N);
        EXPECT_EQ(f.size(), 2 * N);
        EXPECT_EQ(f.vanishing_moments, N);
        const FilterAxioms ax = filter_axioms(f);
        EXPECT_LE(ax.sum_deviation, 1e-12) << f.name;
        EXPECT_LE(ax.orthonormality_deviation, 1e-12) << f.name;
        EXPECT_LE(ax.moment_deviation, 1e-10) << f.name;
        // Double taps still meet the shift orthonormality bound.
        const FilterAxioms dx = filter_axioms_double(f);
        EXPECT_LE(dx.orthonormality_deviation, 1e-12) << f.name;
        long double gsum = 0.0L;
        for (double g : f.g) gsum += g;
        EXPECT_LE(std::fabs(static_cast<double>(gsum)), 1e-12) << f.name;
    }
}

TEST(ScalarFilter, OutOfRangeOrderRejected)
{
    EXPECT_THROW(daubechies_filter(0), ParameterError);
    EXPECT_THROW(daubechies_filter(11), ParameterError);
    EXPECT_THROW(filter_by_name("sym4"), ParameterError);
    EXPECT_EQ(filter_by_name("db4").name, "db4");
    EXPECT_EQ(filter_by_name("haar").name, "haar");
}

TEST(RefineSample, HaarScalingIsIndicator)
{
    const SampledFunction f = refine_sample(haar_filter(), AtomKind::scaling, 3);
    EXPECT_EQ(f.start(), 0);
    EXPECT_EQ(f.level(), 3);
    ASSERT_EQ(f.size(), 8u);
    for (double v : f.values()) EXPECT_DOUBLE_EQ(v, 1.0);
    EXPECT_EQ(f.at(-1), 0.0);
    EXPECT_EQ(f.at(8), 0.0);
}

TEST(RefineSample, HaarWaveletAtLevelOne)
{
    const SampledFunction f = refine_sample(haar_filter(), AtomKind::wavelet, 1);
    ASSERT_EQ(f.size(), 2u);
    EXPECT_DOUBLE_EQ(f.values()[0], 1.0);
    EXPECT_DOUBLE_EQ(f.values()[1], -1.0);
}

TEST(RefineSample, Db2IntegerValues)
{
    // phi(1) = (1+sqrt3)/2 and phi(2) = (1-sqrt3)/2 solve the 2x2 eigenproblem on the integers.
    const SampledFunction f = refine_sample(daubechies_filter(2), AtomKind::scaling, 0);
    EXPECT_NEAR(f.at(0), 0.0, 1e-15);
    EXPECT_NEAR(f.at(1), (1 + std::sqrt(3.0)) / 2, 1e-14);
    EXPECT_NEAR(f.at(2), (1 - std::sqrt(3.0)) / 2, 1e-14);
}

TEST(RefineSample, SupportMatchesFilterLength)
{
    for (int N : {2, 3, 5}) {
        const ScalarFilter filt = daubechies_filter(N);
        for (AtomKind kind : {AtomKind::scaling, AtomKind::wavelet}) {
            const SampledFunction f = refine_sample(filt, kind, 6);
            EXPECT_EQ(f.start(), std::int64_t{filt.offset} << 6);
            EXPECT_EQ(f.end(), std::int64_t{filt.offset + filt.size() - 1} << 6);
        }
    }
}

TEST(RefineSample, Db2IntegralIsOne)
{
    const SampledFunction f = refine_sample(daubechies_filter(2), AtomKind::scaling, 10);
    EXPECT_NEAR(moment(f, 0), 1.0, 1e-6);
}

TEST(RefineSample, NestedGridsAgree)
{
    for (int N : {1, 2, 3, 4, 7}) {
        const ScalarFilter filt = daubechies_filter(N);
        for (AtomKind kind : {AtomKind::scaling, AtomKind::wavelet}) {
            for (int J = 0; J < 9; ++J) {
                const SampledFunction coarse = refine_sample(filt, kind, J);
                const SampledFunction fine = refine_sample(filt, kind, J + 1);
                for (std::int64_t i = coarse.start(); i < coarse.end(); ++i)
                    ASSERT_EQ(coarse.at(i), fine.at(2 * i)) << filt.name << ' ' << to_string(kind) << " J=" << J << " i=" << i;
            }
        }
    }
}

TEST(RefineSample, NegativeLevelRejected)
{
    EXPECT_THROW(refine_sample(haar_filter(), AtomKind::scaling, -1), ResolutionError);
}

TEST(Quadrature, HaarInnerProductsExact)
{
    const ScalarFilter h = haar_filter();
    const SampledFunction phi = refine_sample(h, AtomKind::scaling, 5);
    const SampledFunction psi = refine_sample(h, AtomKind::wavelet, 5);
    EXPECT_EQ(quad_inner(phi, phi), 1.0);
    EXPECT_EQ(quad_inner(phi, psi), 0.0);
    EXPECT_EQ(quad_inner(phi, SampledFunction(0, 5, {})), 0.0);
    EXPECT_EQ(quad_inner(phi, SampledFunction(-7, 5, std::vector<double>(3, 0.0))), 0.0);
}

TEST(Quadrature, MismatchedGridRejected)
{
    const ScalarFilter h = haar_filter();
    EXPECT_THROW(quad_inner(refine_sample(h, AtomKind::scaling, 3), refine_sample(h, AtomKind::scaling, 4)), ResolutionError);
}

TEST(Quadrature, Moments)
{
    const ScalarFilter h = haar_filter();
    EXPECT_EQ(moment(refine_sample(h, AtomKind::wavelet, 4), 0), 0.0);
    EXPECT_EQ(moment(refine_sample(h, AtomKind::scaling, 4), 0), 1.0);
    EXPECT_NEAR(moment(refine_sample(daubechies_filter(2), AtomKind::wavelet, 12), 1), 0.0, 1e-6);
    EXPECT_THROW(moment(refine_sample(h, AtomKind::scaling, 2), 13), ParameterError);
}

TEST(Quadrature, ShiftOrthonormalityImprovesWithResolution)
{
    for (int N = 2; N <= 4; ++N) {
        const ScalarFilter filt = daubechies_filter(N);
        double previous = INFINITY;
        for (int J = 8; J <= 12; ++J) {
            const double dev = max_shift_deviation(refine_sample(filt, AtomKind::scaling, J), filt.size() - 1);
            EXPECT_LT(dev, previous) << filt.name << " J=" << J;
            // C 2^-J with a generous constant.
            EXPECT_LE(dev, 64.0 * std::ldexp(1.0, -J)) << filt.name << " J=" << J;
            previous = dev;
        }
    }
}

TEST(SampledFunction, CsvRoundTrip)
{
    const SampledFunction f = refine_sample(daubechies_filter(3), AtomKind::wavelet, 5);
    std::stringstream ss;
    write_csv(ss, f);
    std::string header;
    std::getline(std::stringstream(ss.str()), header);
    EXPECT_EQ(header, "# start=0 step=2^-5 len=160");
    const SampledFunction g = read_csv(ss);
    EXPECT_EQ(f, g);
}

TEST(SampledFunction, CsvErrors)
{
    std::stringstream bad_header("start=0\n1\n");
    EXPECT_THROW(read_csv(bad_header), FormatError);
    std::stringstream short_body("# start=0 step=2^-1 len=3\n1\n2\n");
    EXPECT_THROW(read_csv(short_body), FormatError);
    std::stringstream bad_value("# start=0 step=2^-1 len=1\nabc\n");
    EXPECT_THROW(read_csv(bad_value), FormatError);
}

TEST(SampledFunction, RejectsNonFinite)
{
    EXPECT_THROW(SampledFunction(0, 0, {1.0, NAN}), ParameterError);
    EXPECT_THROW(SampledFunction(0, 0, {INFINITY}), ParameterError);
}
