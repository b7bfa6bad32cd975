#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "subfractal/document.hpp"
#include "subfractal/errors.hpp"
#include "subfractal/geometry.hpp"
#include "subfractal/pressure.hpp"
#include "subfractal/selftest.hpp"

using nlohmann::json;
using namespace subfractal;

namespace {

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ResourceError("could not read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json words_as_names(const std::vector<Word>& words, const std::vector<std::string>& letters,
                    std::size_t limit) {
    json out = json::array();
    for (std::size_t i = 0; i < words.size() && i < limit; ++i) {
        json w = json::array();
        for (int j = 0; j < words[i].length(); ++j)
            w.push_back(letters[static_cast<std::size_t>(words[i][j] - 1)]);
        out.push_back(std::move(w));
    }
    return out;
}

std::optional<std::array<double, 2>> start_point(const SystemDocument& doc) {
    if (doc.osc_box)
        return doc.osc_box->center();
    return std::nullopt;
}

SystemDocument load_document(const std::string& input) {
    SystemDocument doc = parse_system_document(slurp(input));
    for (const std::string& w : doc.presentation.warnings())
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    return doc;
}

struct CommonOptions {
    double root_tol = default_root_tol;
    double eig_tol = default_eig_tol;
    std::size_t word_cap = default_word_cap;
    int threads = 0;
};

int cmd_bounds(const std::string& input, const CommonOptions& common, int diagnose) {
    SystemDocument doc = load_document(input);
    BoundsOptions options{common.root_tol, common.eig_tol, common.threads};
    auto started = std::chrono::steady_clock::now();
    DimensionReport bounds = dimension_bounds(doc.presentation, doc.contractions, options);

    ReportDocument report;
    report.input_digest = doc.digest;
    report.presentation_kind = doc.presentation_kind;
    report.letters = doc.letters;
    report.bounds = bounds;
    report.root_tol = common.root_tol;
    report.eig_tol = common.eig_tol;
    if (diagnose > 0) {
        std::vector<int> lengths;
        for (int n = 1; n <= diagnose; ++n)
            lengths.push_back(n);
        report.diagnostics = boundedness_diagnostics(doc.presentation, doc.contractions,
                                                     bounds.h, bounds.H, lengths,
                                                     common.word_cap);
    }
    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    std::cout << serialize_report(report);
    std::fprintf(stderr, "dimension bracket [%.12g, %.12g], %s\n", bounds.h, bounds.H,
                 bounds.irreducible ? "irreducible" : "reducible");
    return 0;
}

int cmd_words(const std::string& input, const CommonOptions& common, int length,
              std::size_t limit, bool count_only) {
    SystemDocument doc = load_document(input);
    WordSet words = doc.presentation.enumerate_allowed_words(length, common.word_cap);
    if (words.words.empty())
        throw EmptyLanguageError("the subshift has no words of length " + std::to_string(length));

    json out;
    out["length"] = length;
    out["count"] = words.count();
    if (!count_only) {
        out["words"] = words_as_names(words.words, doc.letters, limit);
        if (words.count() > limit)
            out["truncated_to"] = limit;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_pressure(const std::string& input, const CommonOptions& common, double t,
                 const std::string& side_name, std::optional<int> truncate, bool zero) {
    SystemDocument doc = load_document(input);
    BoundSide side = side_name == "upper" ? BoundSide::upper : BoundSide::lower;
    PressureEvaluator evaluator(doc.presentation, doc.contractions, side, truncate,
                                common.eig_tol);
    json out;
    out["side"] = side_name;
    out["method"] = truncate ? "truncated" : "spectral";
    if (truncate)
        out["n"] = *truncate;
    if (zero) {
        out["zero"] = find_pressure_zero(evaluator, common.root_tol);
    } else {
        out["t"] = t;
        out["pressure"] = evaluator(t);
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_estimate(const std::string& input, const CommonOptions& common,
                 const EstimateSettings& overrides, bool has_points, bool has_seed,
                 bool has_burn_in, bool has_scales) {
    SystemDocument doc = load_document(input);
    const AffineIFS& ifs = doc.require_ifs();

    EstimateSettings settings = doc.estimate;
    if (has_points)
        settings.points = overrides.points;
    if (has_seed)
        settings.seed = overrides.seed;
    if (has_burn_in)
        settings.burn_in = overrides.burn_in;
    if (has_scales)
        settings.scales = overrides.scales;

    PointCloud cloud = attractor_points(doc.presentation, ifs, settings.points, settings.burn_in,
                                        settings.seed, start_point(doc));
    BoxCountResult estimate = box_count_dimension(cloud, settings.scales);
    BoundsOptions options{common.root_tol, common.eig_tol, common.threads};
    DimensionReport bounds = dimension_bounds(doc.presentation, doc.contractions, options);

    json out;
    out["estimate"] = estimate.dimension;
    out["r_squared"] = estimate.r_squared;
    out["points"] = settings.points;
    out["seed"] = settings.seed;
    out["osc_assumed"] = true; // separation is user-asserted, never verified
    out["scales"] = json::array();
    for (const ScaleCount& s : estimate.scales)
        out["scales"].push_back({{"r", s.r}, {"boxes", s.boxes}});
    out["bounds"] = {{"h", bounds.h}, {"H", bounds.H}};
    out["warnings"] = estimate.warnings;
    std::cout << out.dump(2) << "\n";
    std::fprintf(stderr, "box-count estimate %.6g (R^2 %.4f) against bracket [%.6g, %.6g]\n",
                 estimate.dimension, estimate.r_squared, bounds.h, bounds.H);
    return 0;
}

int cmd_render(const std::string& input, const std::string& image_path,
               const std::string& csv_path, const RenderSettings& overrides, bool has_points,
               bool has_seed, bool has_size, bool has_width, bool has_height) {
    if (image_path.empty() && csv_path.empty())
        throw InputError("render needs --out and/or --csv");

    SystemDocument doc = load_document(input);
    const AffineIFS& ifs = doc.require_ifs();

    RenderSettings settings = doc.render;
    if (has_points)
        settings.points = overrides.points;
    if (has_seed)
        settings.seed = overrides.seed;
    if (has_size) {
        settings.width = overrides.width;
        settings.height = overrides.height;
    }
    if (has_width)
        settings.width = overrides.width;
    if (has_height)
        settings.height = overrides.height;

    PointCloud cloud = attractor_points(doc.presentation, ifs, settings.points, settings.burn_in,
                                        settings.seed, start_point(doc));
    json out;
    out["points"] = cloud.size();
    std::vector<std::string> warnings;
    if (!image_path.empty()) {
        for (const std::string& w : render_pgm(cloud, settings.width, settings.height, image_path))
            warnings.push_back(w);
        out["image"] = image_path;
        out["width"] = settings.width;
        out["height"] = settings.height;
    }
    if (!csv_path.empty()) {
        write_csv(cloud, csv_path);
        out["csv"] = csv_path;
    }
    out["warnings"] = warnings;
    for (const std::string& w : warnings)
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_selftest() {
    std::vector<SelftestResult> results = run_selftests();
    bool all_passed = true;
    for (const SelftestResult& r : results) {
        if (r.passed) {
            std::printf("PASS: %s\n", r.name.c_str());
        } else {
            all_passed = false;
            std::printf("FAIL: %s (%s)\n", r.name.c_str(), r.detail.c_str());
        }
    }
    return all_passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rigorous dimension brackets for attractor subsets carved out by subshifts"};
    app.require_subcommand(1);

    CommonOptions common;
    app.add_option("--root-tol", common.root_tol, "bisection tolerance for pressure zeros")
        ->check(CLI::PositiveNumber);
    app.add_option("--eig-tol", common.eig_tol, "convergence tolerance for spectral radii")
        ->check(CLI::PositiveNumber);
    app.add_option("--word-cap", common.word_cap, "hard cap on enumerated words");
    app.add_option("--threads", common.threads,
                   "worker threads (0 = SUBSHIFTDIM_THREADS or hardware)");

    std::string input;
    int diagnose = 0;
    CLI::App* bounds = app.add_subcommand("bounds", "compute the dimension bracket");
    bounds->fallthrough();
    bounds->add_option("input", input, "system document (JSON, - for stdin)")->required();
    bounds->add_option("--diagnose", diagnose,
                       "also tabulate weighted word sums up to this length")
        ->check(CLI::PositiveNumber);

    int word_length = 1;
    std::size_t word_limit = 1000;
    bool count_only = false;
    CLI::App* words = app.add_subcommand("words", "enumerate allowed words");
    words->fallthrough();
    words->add_option("input", input, "system document (JSON, - for stdin)")->required();
    words->add_option("--length", word_length, "word length")
        ->required()
        ->check(CLI::NonNegativeNumber);
    words->add_option("--limit", word_limit, "list at most this many words");
    words->add_flag("--count-only", count_only, "print the word count without the list");

    double t_value = 0.0;
    std::string side = "lower";
    std::string method = "spectral";
    int truncate_n = 0;
    bool zero = false;
    CLI::App* pressure_cmd = app.add_subcommand("pressure", "evaluate the pressure curve");
    pressure_cmd->fallthrough();
    pressure_cmd->add_option("input", input, "system document (JSON, - for stdin)")->required();
    CLI::Option* t_opt = pressure_cmd->add_option("--t", t_value, "exponent to evaluate at");
    pressure_cmd->add_option("--side", side, "which contraction bound to weight with")
        ->check(CLI::IsMember({"lower", "upper"}));
    CLI::Option* method_opt =
        pressure_cmd->add_option("--method", method, "spectral radius or finite-n word sums")
            ->check(CLI::IsMember({"spectral", "truncated"}));
    CLI::Option* truncate_opt =
        pressure_cmd->add_option("--n", truncate_n, "word length for the truncated method")
            ->check(CLI::PositiveNumber);
    pressure_cmd->add_flag("--zero", zero, "solve for the pressure zero instead");

    EstimateSettings est;
    CLI::App* estimate = app.add_subcommand("estimate", "box-count a sampled attractor");
    estimate->fallthrough();
    estimate->add_option("input", input, "system document (JSON, - for stdin)")->required();
    CLI::Option* est_points = estimate->add_option("--points", est.points, "sample size");
    CLI::Option* est_seed = estimate->add_option("--seed", est.seed, "random seed");
    CLI::Option* est_burn = estimate->add_option("--burn-in", est.burn_in, "burn-in steps");
    CLI::Option* est_scales = estimate->add_option("--scales", est.scales, "dyadic scales");

    RenderSettings rset;
    int render_size = 0;
    std::string image_path;
    std::string csv_path;
    CLI::App* render = app.add_subcommand("render", "sample the attractor to an image or CSV");
    render->fallthrough();
    render->add_option("input", input, "system document (JSON, - for stdin)")->required();
    render->add_option("--out", image_path, "output PGM image path");
    render->add_option("--csv", csv_path, "output CSV path");
    CLI::Option* r_points = render->add_option("--points", rset.points, "sample size");
    CLI::Option* r_seed = render->add_option("--seed", rset.seed, "random seed");
    CLI::Option* r_size = render->add_option("--size", render_size, "square image side length")
                              ->check(CLI::PositiveNumber);
    CLI::Option* r_width = render->add_option("--width", rset.width, "image width");
    CLI::Option* r_height = render->add_option("--height", rset.height, "image height");
    r_size->excludes(r_width);
    r_size->excludes(r_height);

    CLI::App* selftest = app.add_subcommand("selftest", "run the built-in fixture checks");
    selftest->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (bounds->parsed())
            return cmd_bounds(input, common, diagnose);
        if (words->parsed())
            return cmd_words(input, common, word_length, word_limit, count_only);
        if (pressure_cmd->parsed()) {
            if (!zero && t_opt->count() == 0)
                throw InputError("pressure needs --t or --zero");
            if (method_opt->count() > 0 && method == "truncated" && truncate_opt->count() == 0)
                throw InputError("--method truncated needs --n");
            if (method_opt->count() > 0 && method == "spectral" && truncate_opt->count() > 0)
                throw InputError("--method spectral does not take --n");
            std::optional<int> truncation;
            if (truncate_opt->count() > 0)
                truncation = truncate_n;
            return cmd_pressure(input, common, t_value, side, truncation, zero);
        }
        if (estimate->parsed())
            return cmd_estimate(input, common, est, est_points->count() > 0,
                                est_seed->count() > 0, est_burn->count() > 0,
                                est_scales->count() > 0);
        if (render->parsed()) {
            if (r_size->count() > 0) {
                rset.width = render_size;
                rset.height = render_size;
            }
            return cmd_render(input, image_path, csv_path, rset, r_points->count() > 0,
                              r_seed->count() > 0, r_size->count() > 0, r_width->count() > 0,
                              r_height->count() > 0);
        }
        if (selftest->parsed())
            return cmd_selftest();
    } catch (const InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NotApplicableError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const EmptyLanguageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "error: %s (best estimate %.12g)\n", e.what(), e.best_estimate());
        return 4;
    } catch (const ResourceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 5;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
