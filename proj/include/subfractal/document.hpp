#ifndef SUBFRACTAL_DOCUMENT_HPP
#define SUBFRACTAL_DOCUMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subfractal/geometry.hpp"
#include "subfractal/pressure.hpp"
#include "subfractal/sofic.hpp"

namespace subfractal {

inline constexpr const char* tool_version = "0.1.0";

struct RenderSettings {
    int width = 800;
    int height = 800;
    std::size_t points = 200'000;
    std::uint64_t seed = 1;
    int burn_in = default_burn_in;
};

struct EstimateSettings {
    std::size_t points = 200'000;
    std::uint64_t seed = 1;
    int burn_in = default_burn_in;
    int scales = 8;
};

/// A fully validated input document: alphabet, contraction bounds, the
/// subshift presentation, and (optionally) the affine system plus
/// sampling settings.
struct SystemDocument {
    std::vector<std::string> letters;
    ContractionSystem contractions;
    Presentation presentation;
    std::string presentation_kind; // "forbidden_words" or "graph"
    std::optional<AffineIFS> ifs;
    std::optional<Box> osc_box;
    RenderSettings render;
    EstimateSettings estimate;
    std::string digest; // fnv1a64 of the input bytes

    const AffineIFS& require_ifs() const;
};

/// Parse and validate a system document. Throws InputError with a
/// pointed message on any schema or consistency violation.
SystemDocument parse_system_document(const std::string& json_text);

/// Canonical JSON form of a parsed document (normalized forbidden words,
/// resolved defaults). Parsing the output reproduces the same document.
std::string serialize_system_document(const SystemDocument& doc);

struct ReportDocument {
    std::string version = tool_version;
    std::string input_digest;
    double wall_ms = 0.0;
    std::string presentation_kind;
    std::vector<std::string> letters;
    DimensionReport bounds;
    double root_tol = default_root_tol;
    double eig_tol = default_eig_tol;
    std::vector<BoundednessRow> diagnostics; // optional, filled on request
};

std::string serialize_report(const ReportDocument& report);
ReportDocument parse_report_document(const std::string& json_text);

/// 64-bit FNV-1a digest of a byte string, formatted "fnv1a64:<16 hex>".
std::string fnv1a64_digest(const std::string& bytes);

} // namespace subfractal

#endif
