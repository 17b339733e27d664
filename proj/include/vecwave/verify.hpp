// SPDX-License-Identifier: Apache-2.0
#ifndef VECWAVE_VERIFY_HPP
#define VECWAVE_VERIFY_HPP

#include "vecwave/error.hpp"
#include "vecwave/scalar_wavelet.hpp"
#include "vecwave/star_product.hpp"
#include "vecwave/tensor_multiwavelet.hpp"
#include "vecwave/vector_basis_1d.hpp"
#include "vecwave/vector_basis_nd.hpp"
#include "vecwave/vtransform.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace vecwave {

/// Tolerances of one verification profile.
struct ToleranceProfile {
    std::string name;
    double gram = 1e-10;
    double residual = 1e-12;
    double moments = 1e-12;
    double nesting = 1e-10;
    /// Atoms are only paired when sampled at least this many levels finer than their own scale.
    int min_resolution = 0;

    static ToleranceProfile exact() { return {"exact", 1e-10, 1e-12, 1e-12, 1e-10, 0}; }
    static ToleranceProfile sampled() { return {"sampled", 1e-3, 1e-8, 1e-6, 1e-8, 8}; }

    static ToleranceProfile by_name(const std::string& s)
    {
        if (s == "exact") return exact();
        if (s == "sampled") return sampled();
        throw ParameterError("unknown tolerance profile '" + s + "' (expected exact or sampled)");
    }
};

enum class CheckStatus { pass, fail, skip };

inline const char* to_string(CheckStatus s)
{
    switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    default: return "skip";
    }
}

struct CheckResult {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    CheckStatus status = CheckStatus::skip;
};

inline CheckResult judge(std::string name, double deviation, double tolerance)
{
    const bool ok = std::isfinite(deviation) && deviation <= tolerance;
    return {std::move(name), deviation, tolerance, ok ? CheckStatus::pass : CheckStatus::fail};
}

namespace detail {

inline long long binomial_int(int n, int k)
{
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline long long ipow(long long b, int e)
{
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

/// Memoized one-dimensional quadrature inner products of scaled scalar atoms.
class InnerTable {
public:
    InnerTable(const AtomCache& cache, int J) : cache_(cache), J_(J) {}

    double operator()(const ComponentDescriptor& a, std::int64_t ka, const ComponentDescriptor& b, std::int64_t kb)
    {
        const auto key = std::make_tuple(static_cast<int>(a.kind), a.scale, a.gain, ka, static_cast<int>(b.kind), b.scale, b.gain, kb);
        const auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        const double v = quad_inner(sample_component(cache_, a, ka, J_), sample_component(cache_, b, kb, J_));
        memo_.emplace(key, v);
        return v;
    }

private:
    const AtomCache& cache_;
    int J_;
    std::map<std::tuple<int, int, double, std::int64_t, int, int, double, std::int64_t>, double> memo_;
};

/// Largest scalar scale used by any factor of a family at vector level j.
inline int max_factor_scale(const BasisND& b, const VectorFamily& f, int level)
{
    int s = 0;
    for (const auto& row : f.rows)
        for (std::size_t i = 0; i < row.size(); ++i) s = std::max(s, tensor_factor(b.mw, f.eps[i], row[i], level).scale);
    return s;
}

} // namespace detail

/// Atom set used by the Gram checks: all families, levels j <= 2 (base at 0), bounded translations.
inline std::vector<VectorAtomRef> verification_atoms(const BasisND& b, int max_scale, std::size_t cap = 600)
{
    const int reach = b.d == 1 ? 4 : b.d == 2 ? 2 : 0;
    const int top_level = b.d <= 2 ? 2 : 1;
    std::vector<std::vector<std::int64_t>> shifts;
    detail::for_each_tuple(b.d, -reach, reach, [&](const std::vector<int>& t) { shifts.emplace_back(t.begin(), t.end()); });
    std::vector<VectorAtomRef> out;
    for (int j = 0; j <= top_level; ++j)
        for (const auto& f : b.families) {
            if (f.e == 0 && j > 0) continue;
            if (detail::max_factor_scale(b, f, j) > max_scale) continue;
            for (const auto& k : shifts) {
                if (out.size() >= cap) return out;
                out.push_back({&f, j, k});
            }
        }
    return out;
}

/// max over atom pairs of ||star(a, b) - delta I||_1 with entries factorized into 1-D quadratures.
inline double star_gram_deviation(const BasisND& b, const std::vector<VectorAtomRef>& atoms, const AtomCache& cache, int J)
{
    detail::InnerTable inner(cache, J);
    double worst = 0.0;
    for (std::size_t x = 0; x < atoms.size(); ++x)
        for (std::size_t y = x; y < atoms.size(); ++y) {
            MatrixM s(b.m);
            for (int i = 0; i < b.m; ++i)
                for (int j = 0; j < b.m; ++j) {
                    const TensorAtom p = row_atom(*atoms[x].family, i, atoms[x].level, atoms[x].k);
                    const TensorAtom q = row_atom(*atoms[y].family, j, atoms[y].level, atoms[y].k);
                    double v = 1.0;
                    for (int a = 0; a < b.d && v != 0.0; ++a) {
                        const auto ua = static_cast<std::size_t>(a);
                        v *= inner(tensor_factor(b.mw, p.eps[ua], p.alpha[ua], p.level), p.k[ua], tensor_factor(b.mw, q.eps[ua], q.alpha[ua], q.level),
                                   q.k[ua]);
                    }
                    s(i, j) = v;
                }
            if (x == y) s -= MatrixM::identity(b.m);
            worst = std::max(worst, norm1(s));
        }
    return worst;
}

/**
 * Largest |integral of x^a psi-derived channel| over multi-exponents with
 * |a| < N, for every family at levels 0 and 1 and translation 0. Channels
 * without a wavelet factor are skipped.
 */
inline double vanishing_moment_deviation(const BasisND& b, const AtomCache& cache, int J)
{
    const int N = b.mw.filter.vanishing_moments;
    double worst = 0.0;
    for (int j = 0; j <= 1; ++j)
        for (const auto& f : b.families) {
            if (f.e == 0) continue;
            if (detail::max_factor_scale(b, f, j) > J - 1) continue;
            for (const auto& row : f.rows) {
                std::vector<std::vector<double>> m(static_cast<std::size_t>(b.d));
                for (int a = 0; a < b.d; ++a) {
                    const auto ua = static_cast<std::size_t>(a);
                    const SampledFunction s = sample_component(cache, tensor_factor(b.mw, f.eps[ua], row[ua], j), 0, J);
                    for (int p = 0; p < N; ++p) m[ua].push_back(moment(s, p));
                }
                detail::for_each_tuple(b.d, 0, N - 1, [&](const std::vector<int>& e) {
                    int total = 0;
                    for (int v : e) total += v;
                    if (total >= N) return;
                    double v = 1.0;
                    for (int a = 0; a < b.d; ++a) v *= m[static_cast<std::size_t>(a)][static_cast<std::size_t>(e[static_cast<std::size_t>(a)])];
                    worst = std::max(worst, std::fabs(v));
                });
            }
        }
    return worst;
}

/// Relative round-trip error and relative energy defect of a seeded random signal.
inline std::pair<double, double> round_trip_deviation(const BasisND& b, std::int64_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise;
    VectorSignal s{b.d, b.m, n, {}};
    for (int c = 0; c < b.m; ++c) {
        std::vector<double> v(s.volume());
        for (double& x : v) x = noise(rng);
        s.channels.push_back(std::move(v));
    }
    const int levels = log2_size(n);
    const VectorDecomposition dec = analyze_vector(s, b, levels);
    const VectorSignal r = synthesize_vector(dec, b);
    long double err = 0.0L;
    long double energy = 0.0L;
    for (int c = 0; c < b.m; ++c)
        for (std::size_t i = 0; i < s.volume(); ++i) {
            const long double x = s.channels[static_cast<std::size_t>(c)][i];
            const long double y = r.channels[static_cast<std::size_t>(c)][i];
            err += (x - y) * (x - y);
            energy += x * x;
        }
    const double pr = static_cast<double>(std::sqrt(err / energy));
    const double en = std::fabs(static_cast<double>((static_cast<long double>(dec.energy()) - energy) / energy));
    return {pr, en};
}

/// Runs every check for a basis; results sorted by name.
inline std::vector<CheckResult> run_verification(const BasisND& b, int J, const ToleranceProfile& prof)
{
    if (J < 1) throw ResolutionError("verify: J must be >= 1");
    std::vector<CheckResult> out;
    const ScalarFilter& filt = b.mw.filter;
    const AtomCache cache(filt);

    const FilterAxioms ax = filter_axioms(filt);
    out.push_back(judge("filter.sum", ax.sum_deviation, 1e-12));
    out.push_back(judge("filter.orthonormality", ax.orthonormality_deviation, 1e-12));
    out.push_back(judge("filter.moments", ax.moment_deviation, 1e-10));

    long long fam_dev = 0;
    for (int e = 0; e <= b.d; ++e)
        fam_dev = std::max(fam_dev, std::llabs(static_cast<long long>(b.families_with(e).size()) -
                                                detail::binomial_int(b.d, e) * detail::ipow(b.m, b.d - 1)));
    out.push_back(judge("count.vector_families", static_cast<double>(fam_dev), 0.0));
    const auto fams = enumerate_families(b.d, b.m);
    long long shape_dev = 0;
    long long total = 0;
    for (const auto& f : fams) {
        shape_dev = std::max(shape_dev, std::llabs(static_cast<long long>(f.members.size()) - detail::binomial_int(b.d, f.e) * detail::ipow(b.m, b.d)));
        total += static_cast<long long>(f.members.size());
    }
    shape_dev = std::max(shape_dev, std::llabs(total - detail::ipow(2LL * b.m, b.d)));
    out.push_back(judge("count.tensor_shapes", static_cast<double>(shape_dev), 0.0));

    // Finest atom scale: J minus the profile margin plus ceil(log2 d) when sampled, and at least J - 1.
    const int margin = std::max(1, prof.min_resolution + (prof.min_resolution > 0 ? static_cast<int>(std::bit_width(static_cast<unsigned>(b.d - 1))) : 0));
    const auto atoms = verification_atoms(b, J - margin);
    if (atoms.empty())
        out.push_back({"gram.star", 0.0, prof.gram, CheckStatus::skip});
    else
        out.push_back(judge("gram.star", star_gram_deviation(b, atoms, cache, J), prof.gram));

    if (J >= b.m) {
        const VectorBasis1D b1 = build_vector_basis(filt, b.m);
        out.push_back(judge("refinement.residual", refine_residual(b1, matrix_refinement_filter(b1), J, cache), prof.residual));
    } else
        out.push_back({"refinement.residual", 0.0, prof.residual, CheckStatus::skip});

    out.push_back(judge("moments.vanishing", vanishing_moment_deviation(b, cache, J), prof.moments));

    if (b.d <= max_dense_dimension) {
        const int Jd = std::min(J, b.d == 3 ? 5 : 8);
        double worst = 0.0;
        bool any = false;
        for (int j = 0; j <= 1; ++j)
            for (const auto& f : b.families) {
                if (f.e != 0 || b.m * (j + 1) > Jd) continue;
                for (int r = 0; r < b.m; ++r) {
                    worst = std::max(worst, nesting_residual(row_atom(f, r, j, std::vector<std::int64_t>(static_cast<std::size_t>(b.d), 0)), b.mw, Jd, cache));
                    any = true;
                }
            }
        out.push_back(any ? judge("nesting.tensor", worst, prof.nesting) : CheckResult{"nesting.tensor", 0.0, prof.nesting, CheckStatus::skip});
    } else
        out.push_back({"nesting.tensor", 0.0, prof.nesting, CheckStatus::skip});

    if (b.d <= 2) {
        const int Jd = std::min(J, b.d == 1 ? J : 6);
        const auto few = verification_atoms(b, Jd - prof.min_resolution, 8);
        double worst = 0.0;
        for (std::size_t x = 0; x < few.size(); ++x)
            for (std::size_t y = x; y < few.size(); ++y) {
                const MatrixM dense = star(sample_vector_atom_nd(b, *few[x].family, few[x].level, few[x].k, Jd, cache),
                                           sample_vector_atom_nd(b, *few[y].family, few[y].level, few[y].k, Jd, cache));
                worst = std::max(worst, (dense - star_separable(b, few[x], few[y], Jd, cache)).max_abs());
            }
        out.push_back(few.empty() ? CheckResult{"gram.separable_factorization", 0.0, 1e-12, CheckStatus::skip}
                                  : judge("gram.separable_factorization", worst, 1e-12));
        const auto [pr, en] = round_trip_deviation(b, b.d == 1 ? 256 : 64, 20240601);
        out.push_back(judge("reconstruction.round_trip", pr, 1e-10));
        out.push_back(judge("reconstruction.energy", en, 1e-10));
    } else {
        out.push_back({"gram.separable_factorization", 0.0, 1e-12, CheckStatus::skip});
        out.push_back({"reconstruction.round_trip", 0.0, 1e-10, CheckStatus::skip});
        out.push_back({"reconstruction.energy", 0.0, 1e-10, CheckStatus::skip});
    }
    std::sort(out.begin(), out.end(), [](const CheckResult& x, const CheckResult& y) { return x.name < y.name; });
    return out;
}

inline bool all_passed(const std::vector<CheckResult>& rs)
{
    return std::none_of(rs.begin(), rs.end(), [](const CheckResult& r) { return r.status == CheckStatus::fail; });
}

/// `check,deviation,tolerance,status`, one row per check in the given order.
inline void write_report_csv(std::ostream& os, const std::vector<CheckResult>& rs)
{
    os << "check,deviation,tolerance,status\n";
    for (const auto& r : rs) os << r.name << ',' << format_real(r.deviation) << ',' << format_real(r.tolerance) << ',' << to_string(r.status) << '\n';
}

} // namespace vecwave

#endif // VECWAVE_VERIFY_HPP
