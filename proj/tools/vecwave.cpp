// SPDX-License-Identifier: Apache-2.0
// vecwave: build, verify, transform, sample and plot vector-valued wavelet bases.

#include "vecwave/vecwave.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace vecwave;

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

int default_level()
{
    if (const char* env = std::getenv("VECWAVE_J")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 0 || v > 24) throw ParameterError(std::string("VECWAVE_J must be an integer in 0..24, got '") + env + "'");
        return static_cast<int>(v);
    }
    return 10;
}

std::ifstream open_in(const std::string& path, bool binary = false)
{
    std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
    if (!is) throw FormatError("cannot open '" + path + "' for reading");
    return is;
}

/// Writes to `path`, or stdout when the path is empty or "-".
template <class Fn>
void emit(const std::string& path, bool binary, Fn&& fn)
{
    if (path.empty() || path == "-") {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream os(path, binary ? std::ios::binary | std::ios::out : std::ios::out);
    if (!os) throw FormatError("cannot open '" + path + "' for writing");
    fn(os);
    if (!os) throw FormatError("failed writing '" + path + "'");
}

BasisND load_manifest(const std::string& path)
{
    auto is = open_in(path);
    return read_manifest(is);
}

double parse_threshold(const std::string& s)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !(v >= 0.0)) throw ParameterError("--threshold must be a non-negative number or inf, got '" + s + "'");
    return v;
}

std::vector<std::int64_t> parse_translation(const std::string& s, int d)
{
    std::vector<std::int64_t> k;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            k.push_back(std::stoll(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw ParameterError("--k expects comma-separated integers, got '" + s + "'");
        }
    }
    if (k.size() == 1 && d > 1) k.assign(static_cast<std::size_t>(d), k.front());
    if (static_cast<int>(k.size()) != d) throw ParameterError("--k needs " + std::to_string(d) + " entries");
    return k;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Orthonormal vector-valued wavelet bases: construction, verification and transforms"};
    app.require_subcommand(1);

    std::string filter_name;
    int dim = 1;
    int channels = 1;
    std::string out_path;
    auto* build = app.add_subcommand("build", "Write the basis manifest for a filter, dimension and channel count");
    build->add_option("--filter", filter_name, "haar or db1..db10")->required();
    build->add_option("--d", dim, "spatial dimension")->required();
    build->add_option("--m", channels, "channel count")->required();
    build->add_option("-o,--out", out_path, "manifest path (stdout if omitted)");

    std::string manifest_path;
    std::optional<int> level_opt;
    std::string profile_name;
    std::string report_path;
    auto* verify = app.add_subcommand("verify", "Run the invariant checks for a manifest");
    verify->add_option("--manifest", manifest_path, "basis manifest")->required();
    verify->add_option("--J", level_opt, "grid level (default $VECWAVE_J or 10)");
    verify->add_option("--profile", profile_name, "exact or sampled (default: exact for haar, sampled otherwise)");
    verify->add_option("--report", report_path, "CSV report path (stdout if omitted)");

    std::string in_path;
    std::optional<int> levels_opt;
    std::string threshold_text;
    std::string norm_name = "frobenius";
    bool inverse = false;
    auto* transform = app.add_subcommand("transform", "Forward or inverse vector wavelet transform of a VWAV1 file");
    transform->add_option("--in", in_path, "VWAV1 signal (forward) or decomposition file (--inverse)")->required();
    transform->add_option("--manifest", manifest_path, "basis manifest")->required();
    transform->add_option("--levels", levels_opt, "scalar decomposition levels (default log2 N)");
    transform->add_option("--threshold", threshold_text, "zero wavelet matrices with norm below this value (inf allowed)");
    transform->add_option("--norm", norm_name, "frobenius or norm1")->check(CLI::IsMember({"frobenius", "norm1"}));
    transform->add_flag("--inverse", inverse, "reconstruct a signal from a decomposition file");
    transform->add_option("-o,--out", out_path, "output path")->required();

    std::string family_name;
    int atom_level = 0;
    int channel = 1;
    std::string translation = "0";
    std::string function_path;
    auto* plot = app.add_subcommand("plot", "Render a manifest atom channel or a sampled-function CSV as SVG");
    plot->add_option("--manifest", manifest_path, "basis manifest");
    plot->add_option("--family", family_name, "family name such as Phi1 or Psi5");
    plot->add_option("--level", atom_level, "vector level j");
    plot->add_option("--channel", channel, "channel index, 1-based");
    plot->add_option("--k", translation, "translation, comma-separated per axis");
    plot->add_option("--J", level_opt, "grid level (default $VECWAVE_J or 10)");
    plot->add_option("--function", function_path, "sampled-function CSV to plot instead of an atom");
    plot->add_option("-o,--out", out_path, "SVG path (stdout if omitted)");

    std::string atom_name = "phi";
    auto* sample = app.add_subcommand("sample", "Sample a scalar scaling function or wavelet to CSV");
    sample->add_option("--filter", filter_name, "haar or db1..db10")->required();
    sample->add_option("--atom", atom_name, "phi or psi")->check(CLI::IsMember({"phi", "psi"}));
    sample->add_option("--J", level_opt, "grid level (default $VECWAVE_J or 10)");
    sample->add_option("-o,--out", out_path, "CSV path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*build) {
            const BasisND b = build_basis_nd(filter_by_name(filter_name), dim, channels);
            emit(out_path, false, [&](std::ostream& os) { write_manifest(os, b); });
            return exit_ok;
        }
        if (*verify) {
            const BasisND b = load_manifest(manifest_path);
            const int J = level_opt ? *level_opt : default_level();
            const ToleranceProfile prof =
                ToleranceProfile::by_name(profile_name.empty() ? (b.mw.filter.name == "haar" ? "exact" : "sampled") : profile_name);
            const auto results = run_verification(b, J, prof);
            emit(report_path, false, [&](std::ostream& os) { write_report_csv(os, results); });
            int failed = 0;
            for (const auto& r : results) failed += r.status == CheckStatus::fail;
            std::cerr << "verify " << b.mw.filter.name << " d=" << b.d << " m=" << b.m << " J=" << J << " profile=" << prof.name << ": "
                      << results.size() - static_cast<std::size_t>(failed) << '/' << results.size() << " checks ok\n";
            for (const auto& r : results)
                if (r.status == CheckStatus::fail)
                    std::cerr << "  FAILED " << r.name << " deviation=" << format_real(r.deviation) << " tolerance=" << format_real(r.tolerance) << '\n';
            return failed ? exit_failed : exit_ok;
        }
        if (*transform) {
            const BasisND b = load_manifest(manifest_path);
            if (inverse) {
                auto is = open_in(in_path, true);
                const VectorDecomposition dec = read_decomposition(is, b);
                const VectorSignal s = synthesize_vector(dec, b);
                emit(out_path, true, [&](std::ostream& os) { write_signal(os, s); });
                return exit_ok;
            }
            auto is = open_in(in_path, true);
            const VectorSignal s = read_signal(is);
            if (s.d != b.d || s.m != b.m)
                throw FormatError("signal header (d=" + std::to_string(s.d) + ", m=" + std::to_string(s.m) + ") does not match the manifest (d=" +
                                  std::to_string(b.d) + ", m=" + std::to_string(b.m) + ")");
            VectorDecomposition dec = analyze_vector(s, b, levels_opt ? *levels_opt : log2_size(s.n));
            if (!threshold_text.empty())
                dec = threshold_matrix(dec, parse_threshold(threshold_text), norm_name == "norm1" ? MatrixNorm::norm1 : MatrixNorm::frobenius);
            emit(out_path, true, [&](std::ostream& os) { write_decomposition(os, dec, b); });
            return exit_ok;
        }
        if (*plot) {
            if (!function_path.empty()) {
                auto is = open_in(function_path);
                const SampledFunction f = read_csv(is);
                emit(out_path, false, [&](std::ostream& os) { write_function_svg(os, f, function_path); });
                return exit_ok;
            }
            if (manifest_path.empty() || family_name.empty()) throw ParameterError("plot needs --function, or --manifest with --family");
            const BasisND b = load_manifest(manifest_path);
            if (b.d > 2) throw FeatureError("plotting d = " + std::to_string(b.d) + " atoms is not supported (d must be 1 or 2)");
            const VectorFamily& fam = b.family(family_name);
            if (fam.e == 0 && atom_level != 0) throw ParameterError("scaling families exist at level 0 only");
            if (channel < 1 || channel > b.m) throw ParameterError("--channel must lie in 1.." + std::to_string(b.m));
            const int J = level_opt ? *level_opt : default_level();
            const AtomCache cache(b.mw.filter);
            const auto k = parse_translation(translation, b.d);
            const std::string title = fam.name + " j=" + std::to_string(atom_level) + " channel " + std::to_string(channel) + ": " + symbolic_row(fam, channel - 1);
            const VectorSampledFunction v = sample_vector_atom_nd(b, fam, atom_level, k, J, cache);
            if (b.d == 1) {
                const SampledFunction f(v.start()[0], v.level(), v.channel(channel - 1));
                emit(out_path, false, [&](std::ostream& os) { write_function_svg(os, f, title); });
            } else {
                emit(out_path, false, [&](std::ostream& os) { write_raster_svg(os, v, channel - 1, title); });
            }
            return exit_ok;
        }
        if (*sample) {
            const ScalarFilter f = filter_by_name(filter_name);
            const int J = level_opt ? *level_opt : default_level();
            const SampledFunction s = refine_sample(f, atom_name == "phi" ? AtomKind::scaling : AtomKind::wavelet, J);
            emit(out_path, false, [&](std::ostream& os) { write_csv(os, s); });
            return exit_ok;
        }
    } catch (const vecwave::Error& e) {
        std::cerr << "vecwave: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "vecwave: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
