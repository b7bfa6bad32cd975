#include "subfractal/document.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "subfractal/errors.hpp"

using nlohmann::json;

namespace subfractal {

namespace {

const json& require_key(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object())
        throw InputError(where + " must be a JSON object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw InputError(where + " is missing \"" + key + "\"");
    return *it;
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number())
        throw InputError(where + " must be a number");
    return v.get<double>();
}

int as_positive_int(const json& v, const std::string& where) {
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw InputError(where + " must be a positive integer");
    return static_cast<int>(v.get<long long>());
}

std::vector<double> as_number_array(const json& v, std::size_t want, const std::string& where) {
    if (!v.is_array() || v.size() != want)
        throw InputError(where + " must be an array of " + std::to_string(want) + " numbers");
    std::vector<double> out;
    for (const json& x : v)
        out.push_back(as_number(x, where + " entries"));
    return out;
}

std::vector<std::string> default_letters(int m) {
    std::vector<std::string> letters;
    for (int i = 1; i <= m; ++i)
        letters.push_back(std::to_string(i));
    return letters;
}

std::vector<std::string> letter_names_from_array(const json& arr) {
    if (arr.empty())
        throw InputError("the alphabet needs at least one letter");
    std::vector<std::string> letters;
    for (const json& l : arr) {
        if (!l.is_string() || l.get<std::string>().empty())
            throw InputError("alphabet letters must be nonempty strings");
        letters.push_back(l.get<std::string>());
    }
    std::vector<std::string> sorted = letters;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InputError("alphabet letters must be distinct");
    return letters;
}

std::vector<std::string> parse_letters(const json& alphabet) {
    if (alphabet.is_number_integer())
        return default_letters(as_positive_int(alphabet, "\"alphabet\""));
    if (alphabet.is_array())
        return letter_names_from_array(alphabet);
    if (alphabet.is_object()) {
        if (alphabet.contains("letters"))
            return letter_names_from_array(alphabet["letters"]);
        if (alphabet.contains("size"))
            return default_letters(as_positive_int(alphabet["size"], "\"alphabet.size\""));
        throw InputError("\"alphabet\" needs either \"letters\" or \"size\"");
    }
    throw InputError("\"alphabet\" must be a size or an array of letter names");
}

int letter_index(const json& token, const std::vector<std::string>& letters,
                 const std::string& where) {
    if (token.is_number_integer()) {
        long long v = token.get<long long>();
        if (v < 1 || v > static_cast<long long>(letters.size()))
            throw InputError(where + ": letter index " + std::to_string(v) +
                             " outside 1.." + std::to_string(letters.size()));
        return static_cast<int>(v);
    }
    if (token.is_string()) {
        auto it = std::find(letters.begin(), letters.end(), token.get<std::string>());
        if (it == letters.end())
            throw InputError(where + ": unknown letter \"" + token.get<std::string>() + "\"");
        return static_cast<int>(it - letters.begin()) + 1;
    }
    throw InputError(where + ": letters must be names or 1-based indices");
}

/// A forbidden word is either a string of single-character letter names
/// ("212") or an array of letter tokens ([2, 1, 2]).
Word parse_word(const json& entry, const std::vector<std::string>& letters,
                const std::string& where) {
    std::vector<int> out;
    if (entry.is_string()) {
        for (char ch : entry.get<std::string>()) {
            std::string name(1, ch);
            auto it = std::find(letters.begin(), letters.end(), name);
            if (it == letters.end())
                throw InputError(where + ": character '" + name +
                                 "' is not a single-letter name; use the array form for "
                                 "multi-character letters");
            out.push_back(static_cast<int>(it - letters.begin()) + 1);
        }
        return Word(std::move(out));
    }
    if (entry.is_array()) {
        for (const json& token : entry)
            out.push_back(letter_index(token, letters, where));
        return Word(std::move(out));
    }
    throw InputError(where + " must be a string of letter names or an array of letters");
}

Presentation parse_presentation(const json& pres, const std::vector<std::string>& letters,
                                std::string& kind) {
    Alphabet alphabet(static_cast<int>(letters.size()));
    if (!pres.is_object())
        throw InputError("\"presentation\" must be an object");
    bool has_words = pres.contains("forbidden_words");
    bool has_graph = pres.contains("graph");
    if (has_words == has_graph)
        throw InputError("\"presentation\" needs exactly one of \"forbidden_words\" or \"graph\"");

    if (has_words) {
        kind = "forbidden_words";
        const json& arr = pres["forbidden_words"];
        if (!arr.is_array())
            throw InputError("\"presentation.forbidden_words\" must be an array of words");
        std::vector<Word> raw;
        for (std::size_t i = 0; i < arr.size(); ++i)
            raw.push_back(parse_word(arr[i], letters,
                                     "forbidden word #" + std::to_string(i + 1)));
        return Presentation(alphabet, normalize_forbidden_set(raw, alphabet));
    }

    kind = "graph";
    const json& gspec = pres["graph"];
    const json& vertices = require_key(gspec, "vertices", "\"presentation.graph\"");
    LabeledGraph g;
    g.alphabet_size = alphabet.size;
    if (vertices.is_number_integer()) {
        g.vertex_count = as_positive_int(vertices, "\"presentation.graph.vertices\"");
    } else if (vertices.is_array()) {
        std::vector<std::string> names;
        for (const json& v : vertices) {
            if (!v.is_string() || v.get<std::string>().empty())
                throw InputError("graph vertex names must be nonempty strings");
            names.push_back(v.get<std::string>());
        }
        if (names.empty())
            throw InputError("\"presentation.graph.vertices\" must not be empty");
        std::vector<std::string> sorted = names;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw InputError("graph vertex names must be distinct");
        g.vertex_names = std::move(names);
        g.vertex_count = static_cast<int>(g.vertex_names.size());
    } else {
        throw InputError("\"presentation.graph.vertices\" must be a vertex count or an array "
                         "of names");
    }

    auto vertex_index = [&](const json& token, const std::string& where) {
        if (token.is_number_integer()) {
            long long v = token.get<long long>();
            if (v < 1 || v > g.vertex_count)
                throw InputError(where + ": vertex index " + std::to_string(v) + " outside 1.." +
                                 std::to_string(g.vertex_count));
            return static_cast<int>(v) - 1;
        }
        if (token.is_string()) {
            auto it = std::find(g.vertex_names.begin(), g.vertex_names.end(),
                                token.get<std::string>());
            if (it == g.vertex_names.end())
                throw InputError(where + ": unknown vertex \"" + token.get<std::string>() + "\"");
            return static_cast<int>(it - g.vertex_names.begin());
        }
        throw InputError(where + ": vertices must be names or 1-based indices");
    };

    const json& edges = require_key(gspec, "edges", "\"presentation.graph\"");
    if (!edges.is_array())
        throw InputError("\"presentation.graph.edges\" must be an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const json& e = edges[i];
        std::string where = "edge #" + std::to_string(i + 1);
        LabeledEdge edge;
        if (e.is_array()) {
            if (e.size() != 3)
                throw InputError(where + " must be [from, to, label]");
            edge.from = vertex_index(e[0], where);
            edge.to = vertex_index(e[1], where);
            edge.label = letter_index(e[2], letters, where);
        } else if (e.is_object()) {
            edge.from = vertex_index(require_key(e, "from", where), where);
            edge.to = vertex_index(require_key(e, "to", where), where);
            edge.label = letter_index(require_key(e, "label", where), letters, where);
        } else {
            throw InputError(where + " must be a [from, to, label] array or an object");
        }
        g.edges.push_back(edge);
    }
    return Presentation(alphabet, std::move(g));
}

std::optional<Box> parse_osc_box(const json& ifs_spec, int dimension) {
    if (!ifs_spec.contains("osc_box"))
        return std::nullopt;
    const json& b = ifs_spec["osc_box"];
    Box box;
    box.dimension = dimension;
    std::vector<double> lo = as_number_array(require_key(b, "lo", "\"ifs.osc_box\""),
                                             static_cast<std::size_t>(dimension),
                                             "\"ifs.osc_box.lo\"");
    std::vector<double> hi = as_number_array(require_key(b, "hi", "\"ifs.osc_box\""),
                                             static_cast<std::size_t>(dimension),
                                             "\"ifs.osc_box.hi\"");
    for (int d = 0; d < dimension; ++d) {
        box.lo[static_cast<std::size_t>(d)] = lo[static_cast<std::size_t>(d)];
        box.hi[static_cast<std::size_t>(d)] = hi[static_cast<std::size_t>(d)];
        if (!(lo[static_cast<std::size_t>(d)] < hi[static_cast<std::size_t>(d)]))
            throw InputError("\"ifs.osc_box\" must have lo < hi in every coordinate");
    }
    return box;
}

std::optional<AffineIFS> parse_ifs(const json& root, const ContractionSystem& contractions,
                                   std::optional<Box>& osc_box) {
    if (!root.contains("ifs"))
        return std::nullopt;
    const json& spec = root["ifs"];
    int dimension = as_positive_int(require_key(spec, "dimension", "\"ifs\""),
                                    "\"ifs.dimension\"");
    if (dimension != 1 && dimension != 2)
        throw InputError("\"ifs.dimension\" must be 1 or 2");

    const json& maps_spec = require_key(spec, "maps", "\"ifs\"");
    if (!maps_spec.is_array() ||
        maps_spec.size() != static_cast<std::size_t>(contractions.alphabet_size()))
        throw InputError("\"ifs.maps\" must list one map per letter (" +
                         std::to_string(contractions.alphabet_size()) + " expected)");

    std::vector<AffineMap> maps;
    std::size_t d = static_cast<std::size_t>(dimension);
    for (std::size_t i = 0; i < maps_spec.size(); ++i) {
        std::string where = "map #" + std::to_string(i + 1);
        AffineMap m;
        m.dimension = dimension;
        std::vector<double> lin = as_number_array(require_key(maps_spec[i], "linear", where),
                                                  d * d, where + " \"linear\"");
        std::vector<double> off = as_number_array(require_key(maps_spec[i], "offset", where), d,
                                                  where + " \"offset\"");
        std::copy(lin.begin(), lin.end(), m.linear.begin());
        std::copy(off.begin(), off.end(), m.offset.begin());
        maps.push_back(m);
    }

    AffineIFS ifs(dimension, std::move(maps));
    ifs.check_matches(contractions);

    osc_box = parse_osc_box(spec, dimension);
    if (osc_box) {
        double slack = 1e-9 * (1.0 + osc_box->extent());
        for (int letter = 1; letter <= ifs.map_count(); ++letter) {
            Box image = map_image_hull(ifs.map(letter), *osc_box);
            if (!osc_box->contains(image.lo, slack) || !osc_box->contains(image.hi, slack))
                throw InputError("\"ifs.osc_box\" is not invariant under map #" +
                                 std::to_string(letter));
        }
    }
    return ifs;
}

std::uint64_t parse_seed(const json& v, const std::string& where) {
    if (!v.is_number_unsigned() && !v.is_number_integer())
        throw InputError(where + " must be a nonnegative integer");
    if (v.is_number_integer() && v.get<long long>() < 0)
        throw InputError(where + " must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

RenderSettings parse_render(const json& root) {
    RenderSettings s;
    if (!root.contains("render"))
        return s;
    const json& r = root["render"];
    if (!r.is_object())
        throw InputError("\"render\" must be an object");
    if (r.contains("width"))
        s.width = as_positive_int(r["width"], "\"render.width\"");
    if (r.contains("height"))
        s.height = as_positive_int(r["height"], "\"render.height\"");
    if (r.contains("points"))
        s.points = static_cast<std::size_t>(as_positive_int(r["points"], "\"render.points\""));
    if (r.contains("seed"))
        s.seed = parse_seed(r["seed"], "\"render.seed\"");
    if (r.contains("burn_in")) {
        s.burn_in = as_positive_int(r["burn_in"], "\"render.burn_in\"");
        if (s.burn_in < min_burn_in)
            throw InputError("\"render.burn_in\" must be at least " + std::to_string(min_burn_in));
    }
    return s;
}

EstimateSettings parse_estimate(const json& root) {
    EstimateSettings s;
    if (!root.contains("estimate"))
        return s;
    const json& e = root["estimate"];
    if (!e.is_object())
        throw InputError("\"estimate\" must be an object");
    if (e.contains("points"))
        s.points = static_cast<std::size_t>(as_positive_int(e["points"], "\"estimate.points\""));
    if (e.contains("seed"))
        s.seed = parse_seed(e["seed"], "\"estimate.seed\"");
    if (e.contains("burn_in")) {
        s.burn_in = as_positive_int(e["burn_in"], "\"estimate.burn_in\"");
        if (s.burn_in < min_burn_in)
            throw InputError("\"estimate.burn_in\" must be at least " +
                             std::to_string(min_burn_in));
    }
    if (e.contains("scales")) {
        s.scales = as_positive_int(e["scales"], "\"estimate.scales\"");
        if (s.scales < min_box_scales)
            throw InputError("\"estimate.scales\" must be at least " +
                             std::to_string(min_box_scales));
    }
    return s;
}

} // namespace

const AffineIFS& SystemDocument::require_ifs() const {
    if (!ifs)
        throw InputError("this command needs an \"ifs\" section in the system document");
    return *ifs;
}

SystemDocument parse_system_document(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("system document is not valid JSON: ") + e.what());
    }
    if (!root.is_object())
        throw InputError("system document must be a JSON object");

    std::vector<std::string> letters = parse_letters(require_key(root, "alphabet", "document"));
    std::size_t m = letters.size();

    const json& cons = require_key(root, "contractions", "document");
    std::vector<double> c =
        as_number_array(require_key(cons, "c", "\"contractions\""), m, "\"contractions.c\"");
    std::vector<double> c_bar = c;
    if (cons.contains("c_bar"))
        c_bar = as_number_array(cons["c_bar"], m, "\"contractions.c_bar\"");
    ContractionSystem contractions(std::move(c), std::move(c_bar));

    std::string kind;
    Presentation presentation =
        parse_presentation(require_key(root, "presentation", "document"), letters, kind);

    std::optional<Box> osc_box;
    std::optional<AffineIFS> ifs = parse_ifs(root, contractions, osc_box);

    return SystemDocument{std::move(letters), std::move(contractions), std::move(presentation),
                          std::move(kind),    std::move(ifs),          osc_box,
                          parse_render(root), parse_estimate(root),    fnv1a64_digest(json_text)};
}

std::string serialize_system_document(const SystemDocument& doc) {
    json out;
    if (doc.letters == default_letters(static_cast<int>(doc.letters.size())))
        out["alphabet"] = doc.letters.size();
    else
        out["alphabet"] = doc.letters;
    out["contractions"]["c"] = doc.contractions.lower_bounds();
    out["contractions"]["c_bar"] = doc.contractions.upper_bounds();

    if (doc.presentation_kind == "forbidden_words") {
        json words = json::array();
        for (const Word& w : doc.presentation.forbidden().words())
            words.push_back(w.letters());
        out["presentation"]["forbidden_words"] = std::move(words);
    } else {
        const LabeledGraph& g = doc.presentation.graph();
        if (g.vertex_names.empty())
            out["presentation"]["graph"]["vertices"] = g.vertex_count;
        else {
            json vertices = json::array();
            for (int v = 0; v < g.vertex_count; ++v)
                vertices.push_back(g.vertex_name(v));
            out["presentation"]["graph"]["vertices"] = std::move(vertices);
        }
        json edges = json::array();
        for (const LabeledEdge& e : g.edges)
            edges.push_back({e.from + 1, e.to + 1, e.label});
        out["presentation"]["graph"]["edges"] = std::move(edges);
    }

    if (doc.ifs) {
        json maps = json::array();
        std::size_t d = static_cast<std::size_t>(doc.ifs->dimension());
        for (int letter = 1; letter <= doc.ifs->map_count(); ++letter) {
            const AffineMap& m = doc.ifs->map(letter);
            maps.push_back(
                {{"linear", std::vector<double>(m.linear.begin(), m.linear.begin() + d * d)},
                 {"offset", std::vector<double>(m.offset.begin(), m.offset.begin() + d)}});
        }
        out["ifs"] = {{"dimension", doc.ifs->dimension()}, {"maps", std::move(maps)}};
        if (doc.osc_box) {
            out["ifs"]["osc_box"] = {
                {"lo", std::vector<double>(doc.osc_box->lo.begin(), doc.osc_box->lo.begin() + d)},
                {"hi", std::vector<double>(doc.osc_box->hi.begin(), doc.osc_box->hi.begin() + d)}};
        }
    }

    out["render"] = {{"width", doc.render.width},
                     {"height", doc.render.height},
                     {"points", doc.render.points},
                     {"seed", doc.render.seed},
                     {"burn_in", doc.render.burn_in}};
    out["estimate"] = {{"points", doc.estimate.points},
                       {"seed", doc.estimate.seed},
                       {"burn_in", doc.estimate.burn_in},
                       {"scales", doc.estimate.scales}};
    return out.dump(2) + "\n";
}

namespace {

DimensionKind dimension_kind_from_name(const std::string& name) {
    for (DimensionKind k : {DimensionKind::hausdorff, DimensionKind::packing,
                            DimensionKind::lower_box, DimensionKind::upper_box})
        if (dimension_kind_name(k) == name)
            return k;
    throw InputError("unknown dimension kind \"" + name + "\"");
}

} // namespace

std::string serialize_report(const ReportDocument& report) {
    json out;
    out["tool_version"] = report.version;
    out["input_digest"] = report.input_digest;
    out["wall_ms"] = report.wall_ms;
    out["presentation_kind"] = report.presentation_kind;
    out["alphabet"] = report.letters;
    out["h"] = report.bounds.h;
    out["H"] = report.bounds.H;
    out["irreducible"] = report.bounds.irreducible;
    out["lower_certified"] = report.bounds.lower_certified;
    json applies = json::array();
    for (DimensionKind k : report.bounds.applies_to)
        applies.push_back(dimension_kind_name(k));
    out["applies_to"] = std::move(applies);

    json components = json::array();
    for (const ComponentBound& c : report.bounds.components)
        components.push_back({{"id", c.id},
                              {"vertices", c.vertex_names},
                              {"h", c.h},
                              {"H", c.H},
                              {"degenerate", c.degenerate}});
    out["per_component"] = std::move(components);
    json transitional = json::array();
    for (const TransitionalEdge& e : report.bounds.transitional)
        transitional.push_back({e.from, e.to});
    out["transitional"] = std::move(transitional);
    out["notes"] = report.bounds.notes;
    out["parameters"] = {{"root_tol", report.root_tol}, {"eig_tol", report.eig_tol}};
    if (!report.diagnostics.empty()) {
        json rows = json::array();
        for (const BoundednessRow& row : report.diagnostics)
            rows.push_back({{"n", row.n},
                            {"lower_sum", row.lower_sum},
                            {"upper_sum", row.upper_sum}});
        out["diagnostics"] = std::move(rows);
    }
    return out.dump(2) + "\n";
}

ReportDocument parse_report_document(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("report document is not valid JSON: ") + e.what());
    }

    ReportDocument report;
    report.version = require_key(root, "tool_version", "report").get<std::string>();
    report.input_digest = require_key(root, "input_digest", "report").get<std::string>();
    report.wall_ms = as_number(require_key(root, "wall_ms", "report"), "wall_ms");
    report.presentation_kind =
        require_key(root, "presentation_kind", "report").get<std::string>();
    for (const json& l : require_key(root, "alphabet", "report"))
        report.letters.push_back(l.get<std::string>());

    report.bounds.h = as_number(require_key(root, "h", "report"), "h");
    report.bounds.H = as_number(require_key(root, "H", "report"), "H");
    report.bounds.irreducible = require_key(root, "irreducible", "report").get<bool>();
    report.bounds.lower_certified =
        require_key(root, "lower_certified", "report").get<bool>();
    for (const json& name : require_key(root, "applies_to", "report"))
        report.bounds.applies_to.push_back(dimension_kind_from_name(name.get<std::string>()));

    for (const json& c : require_key(root, "per_component", "report")) {
        ComponentBound b;
        b.id = static_cast<int>(as_number(require_key(c, "id", "component"), "component.id"));
        for (const json& v : require_key(c, "vertices", "component"))
            b.vertex_names.push_back(v.get<std::string>());
        b.h = as_number(require_key(c, "h", "component"), "component.h");
        b.H = as_number(require_key(c, "H", "component"), "component.H");
        b.degenerate = require_key(c, "degenerate", "component").get<bool>();
        report.bounds.components.push_back(std::move(b));
    }
    for (const json& e : require_key(root, "transitional", "report")) {
        if (!e.is_array() || e.size() != 2)
            throw InputError("transitional entries must be [from, to] pairs");
        report.bounds.transitional.push_back({e[0].get<std::string>(), e[1].get<std::string>()});
    }
    for (const json& n : require_key(root, "notes", "report"))
        report.bounds.notes.push_back(n.get<std::string>());

    const json& params = require_key(root, "parameters", "report");
    report.root_tol = as_number(require_key(params, "root_tol", "\"parameters\""), "root_tol");
    report.eig_tol = as_number(require_key(params, "eig_tol", "\"parameters\""), "eig_tol");

    if (root.contains("diagnostics")) {
        for (const json& r : root["diagnostics"]) {
            BoundednessRow row;
            row.n = static_cast<int>(as_number(require_key(r, "n", "diagnostics row"), "n"));
            row.lower_sum = as_number(require_key(r, "lower_sum", "diagnostics row"), "lower_sum");
            row.upper_sum = as_number(require_key(r, "upper_sum", "diagnostics row"), "upper_sum");
            report.diagnostics.push_back(row);
        }
    }
    return report;
}

std::string fnv1a64_digest(const std::string& bytes) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

} // namespace subfractal
