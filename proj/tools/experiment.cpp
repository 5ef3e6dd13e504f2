#include "experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "chernlab/connection.hpp"
#include "chernlab/errors.hpp"

namespace chernlab::cli {

namespace {

int line_of(const ConfigFile& cfg, const std::string& section, const std::string& key) {
    const ConfigValue* v = cfg.find(section, key);
    return v ? v->line : 0;
}

std::string where(const std::string& section, const std::string& key) { return section + "." + key; }

double real_value(const ConfigValue& v, const std::string& name) {
    try {
        return Expr::parse(v.text).eval(0.0, 0.0);
    } catch (const Error& e) {
        throw ConfigError(name + ": " + e.what(), v.line);
    }
}

long integer_value(const ConfigValue& v, const std::string& name) {
    long out = 0;
    const char* first = v.text.data();
    const char* last = first + v.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) throw ConfigError(name + ": expected an integer, got '" + v.text + "'", v.line);
    return out;
}

bool bool_value(const ConfigValue& v, const std::string& name) {
    if (v.text == "true" || v.text == "yes" || v.text == "1") return true;
    if (v.text == "false" || v.text == "no" || v.text == "0") return false;
    throw ConfigError(name + ": expected true or false, got '" + v.text + "'", v.line);
}

std::pair<int, int> resolution_value(const ConfigValue& v, const std::string& name) {
    const auto x = v.text.find('x');
    if (x == std::string::npos) throw ConfigError(name + ": expected NUxNV, got '" + v.text + "'", v.line);
    const long nu = integer_value({v.text.substr(0, x), v.line}, name);
    const long nv = integer_value({v.text.substr(x + 1), v.line}, name);
    return {static_cast<int>(nu), static_cast<int>(nv)};
}

Expr expr_value(const ConfigValue& v, const std::string& name) {
    try {
        return Expr::parse(v.text);
    } catch (const ParseError& e) {
        throw ConfigError(name + ": " + e.what(), v.line);
    }
}

const ConfigValue& required(const ConfigFile& cfg, const std::string& section, const std::string& key) {
    const ConfigValue* v = cfg.find(section, key);
    if (!v) throw ConfigError("missing required key " + where(section, key), 0);
    return *v;
}

std::vector<Point2> vertex_list(const ConfigValue& v, const std::string& name) {
    std::vector<Point2> out;
    std::istringstream items(v.text);
    std::string item;
    while (std::getline(items, item, ';')) {
        std::istringstream coords(item);
        std::string a, b, extra;
        if (!(coords >> a >> b) || (coords >> extra))
            throw ConfigError(name + ": each vertex is 'u v', separated by ';'", v.line);
        out.push_back({real_value({a, v.line}, name), real_value({b, v.line}, name)});
    }
    return out;
}

ParamDomain custom_domain(const ConfigFile& cfg) {
    const ConfigValue& kind = required(cfg, "surface", "domain");
    try {
        if (kind.text == "rectangle") {
            auto bound = [&](const std::string& key) { return real_value(required(cfg, "surface", key), where("surface", key)); };
            auto flag = [&](const std::string& key) {
                const ConfigValue* v = cfg.find("surface", key);
                return v ? bool_value(*v, where("surface", key)) : false;
            };
            return ParamDomain::rectangle(bound("u_min"), bound("u_max"), bound("v_min"), bound("v_max"),
                                          flag("periodic_u"), flag("periodic_v"));
        }
        if (kind.text == "octagon") return ParamDomain::geodesic_polygon(octagon_vertices());
        if (kind.text == "polygon") {
            auto vs = vertex_list(required(cfg, "surface", "vertices"), "surface.vertices");
            const ConfigValue* edges = cfg.find("surface", "edges");
            const std::string e = edges ? edges->text : "straight";
            if (e == "straight") return ParamDomain::polygon(std::move(vs));
            if (e == "geodesic") return ParamDomain::geodesic_polygon(std::move(vs));
            throw ConfigError("surface.edges: expected straight or geodesic", edges->line);
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("surface.domain: ") + e.what(), kind.line);
    }
    throw ConfigError("surface.domain: expected rectangle, octagon or polygon, got '" + kind.text + "'", kind.line);
}

Surface custom_surface(const ConfigFile& cfg) {
    cfg.reject_unknown("surface", {"kind", "name", "domain", "g11", "g12", "g22", "u_min", "u_max", "v_min", "v_max",
                                   "periodic_u", "periodic_v", "vertices", "edges"});
    ParamDomain domain = custom_domain(cfg);
    const ConfigValue* g12 = cfg.find("surface", "g12");
    MetricField field = expression_metric(domain, expr_value(required(cfg, "surface", "g11"), "surface.g11"),
                                          g12 ? expr_value(*g12, "surface.g12") : Expr::parse("0"),
                                          expr_value(required(cfg, "surface", "g22"), "surface.g22"));
    const ConfigValue* name = cfg.find("surface", "name");
    const int n = domain.is_rectangle() ? 64 : 16;
    Surface s{name ? name->text : "custom", std::move(field), std::nullopt, nullptr, {}};
    s.reference = QuadratureSpec::for_domain(s.domain(), n, n);
    return s;
}

Surface configured_surface(const ConfigFile& cfg) {
    const ConfigValue& kind = required(cfg, "surface", "kind");
    if (kind.text == "custom") return custom_surface(cfg);
    SurfaceParams params;
    for (const auto& [key, value] : cfg.section("surface"))
        if (key != "kind") params[key] = value.text;
    try {
        return make_surface(kind.text, params);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("[surface]: ") + e.what(), kind.line);
    }
}

}  // namespace

ExperimentConfig build_experiment(const ConfigFile& cfg) {
    if (!cfg.has_section("surface")) throw ConfigError("missing [surface] section", 0);
    ExperimentConfig out(configured_surface(cfg));
    out.quadrature = out.surface.reference;

    cfg.reject_unknown("quadrature", {"n_u", "n_v", "resolution"});
    if (const ConfigValue* r = cfg.find("quadrature", "resolution")) {
        const auto [nu, nv] = resolution_value(*r, "quadrature.resolution");
        out.quadrature.n_u = nu;
        out.quadrature.n_v = nv;
    }
    if (const ConfigValue* v = cfg.find("quadrature", "n_u")) out.quadrature.n_u = static_cast<int>(integer_value(*v, "quadrature.n_u"));
    if (const ConfigValue* v = cfg.find("quadrature", "n_v")) out.quadrature.n_v = static_cast<int>(integer_value(*v, "quadrature.n_v"));
    if (out.quadrature.n_u < 8 || out.quadrature.n_v < 8)
        throw ConfigError("quadrature node counts must be at least 8", line_of(cfg, "quadrature", "n_u"));

    cfg.reject_unknown("compare", {"kind", "factor", "seed", "amplitude", "n_u", "n_v"});
    if (cfg.has_section("compare")) {
        const ConfigValue& kind = required(cfg, "compare", "kind");
        if (kind.text == "conformal") {
            out.compare = CompareKind::conformal;
            const ConfigValue& f = required(cfg, "compare", "factor");
            expr_value(f, "compare.factor");
            out.factor = f.text;
        } else if (kind.text == "perturbed") {
            out.compare = CompareKind::perturbed;
            out.amplitude = 0.1;
        } else if (kind.text == "twist") {
            out.compare = CompareKind::twist;
            out.amplitude = 0.3;
        } else {
            throw ConfigError("compare.kind: expected conformal, perturbed or twist, got '" + kind.text + "'", kind.line);
        }
        if (const ConfigValue* v = cfg.find("compare", "amplitude")) {
            if (out.compare == CompareKind::conformal) throw ConfigError("compare.amplitude does not apply to conformal", v->line);
            out.amplitude = real_value(*v, "compare.amplitude");
        }
        if (const ConfigValue* v = cfg.find("compare", "seed")) {
            const long seed = integer_value(*v, "compare.seed");
            if (seed < 0) throw ConfigError("compare.seed must be nonnegative", v->line);
            out.seed = static_cast<std::uint64_t>(seed);
        }
        if (!out.surface.domain().fully_periodic())
            throw ConfigError("comparisons need a fully periodic surface domain", kind.line);
        out.eta_n_u = out.quadrature.n_u;
        out.eta_n_v = out.quadrature.n_v;
        if (const ConfigValue* v = cfg.find("compare", "n_u")) out.eta_n_u = static_cast<int>(integer_value(*v, "compare.n_u"));
        if (const ConfigValue* v = cfg.find("compare", "n_v")) out.eta_n_v = static_cast<int>(integer_value(*v, "compare.n_v"));
        if (out.eta_n_u < 8 || out.eta_n_v < 8) throw ConfigError("comparison grid must be at least 8x8", line_of(cfg, "compare", "n_u"));
    }

    cfg.reject_unknown("output", {"format", "path", "timing"});
    if (const ConfigValue* v = cfg.find("output", "format")) {
        if (v->text == "csv")
            out.format = ReportFormat::csv;
        else if (v->text == "json")
            out.format = ReportFormat::json;
        else
            throw ConfigError("output.format: expected csv or json, got '" + v->text + "'", v->line);
    }
    if (const ConfigValue* v = cfg.find("output", "path")) out.out_path = v->text;
    if (const ConfigValue* v = cfg.find("output", "timing")) out.timing = bool_value(*v, "output.timing");
    return out;
}

MetricField comparison_field(const ExperimentConfig& config) {
    const MetricField& g = config.surface.field;
    switch (config.compare) {
        case CompareKind::conformal:
            return conformal_scale(g, expression_scalar(Expr::parse(config.factor)));
        case CompareKind::perturbed:
            return perturb_metric(g, config.seed, config.amplitude);
        case CompareKind::twist:
            return pullback_metric(ParamMap::twist(g.domain(), config.amplitude), g);
        case CompareKind::none:
            break;
    }
    throw InvalidArgument("no comparison configured");
}

ReportRow run(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const ChernResult r = chern_number(config.surface.field, config.quadrature);
    ReportRow row;
    row.surface = config.surface.name;
    row.n_u = r.n_u;
    row.n_v = r.n_v;
    row.raw_chern = r.raw;
    row.rounded = r.rounded;
    row.residual = r.residual;
    row.max_lemma1_residual = r.max_lemma1_residual;
    row.converged = r.converged;
    if (config.compare != CompareKind::none) {
        const MetricField g_prime = comparison_field(config);
        const ChernResult rp = chern_number(g_prime, config.quadrature);
        const OneForm eta = connection_difference(config.surface.field, g_prime, config.eta_n_u, config.eta_n_v);
        Comparison c;
        c.raw_chern_prime = rp.raw;
        c.rounded_prime = rp.rounded;
        c.converged_prime = rp.converged;
        c.delta_raw = rp.raw - r.raw;
        c.stokes_residual = stokes_residual(eta);
        c.eta_realness_max = eta.imag_residual;
        row.comparison = c;
    }
    if (config.timing)
        row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
}

GridDump sample_grid(const ExperimentConfig& config) {
    const ParamDomain& domain = config.surface.domain();
    const int nu = config.quadrature.n_u, nv = config.quadrature.n_v;
    const RectangleShape box = domain.bounding_box();
    // Periodic axes sample from the left edge, others at cell centres.
    const double ou = domain.is_rectangle() && domain.rect().periodic_u ? 0.0 : 0.5;
    const double ov = domain.is_rectangle() && domain.rect().periodic_v ? 0.0 : 0.5;
    GridDump out{config.surface.name, nu, nv, {}, {}, {}, {}};
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            const Point2 p{box.u_min + (i + ou) * (box.u_max - box.u_min) / nu,
                           box.v_min + (j + ov) * (box.v_max - box.v_min) / nv};
            if (!domain.contains(p)) continue;
            const CurvatureReport r = curvature_two_form(config.surface.field, p);
            out.points.push_back(p);
            out.K.push_back(r.K);
            out.area_coeff.push_back(r.area_coeff);
            out.k_area.push_back(r.K * r.area_coeff);
        }
    }
    return out;
}

std::string format_number(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

namespace {

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
            out += buf;
        } else {
            out += c;
        }
    }
    return out + "\"";
}

std::string json_number(double x) { return std::isfinite(x) ? format_number(x) : "null"; }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// Field name and rendered value, in schema order; strings are marked so the
// JSON writer can quote them.
struct Field {
    std::string name;
    std::string value;
    bool is_string = false;
};

std::vector<Field> row_fields(const ReportRow& row) {
    std::vector<Field> f{{"surface", row.surface, true},
                         {"n_u", std::to_string(row.n_u)},
                         {"n_v", std::to_string(row.n_v)},
                         {"raw_chern", json_number(row.raw_chern)},
                         {"rounded", std::to_string(row.rounded)},
                         {"residual", json_number(row.residual)},
                         {"max_lemma1_residual", json_number(row.max_lemma1_residual)},
                         {"runtime_ms", json_number(row.runtime_ms)}};
    if (row.comparison) {
        const Comparison& c = *row.comparison;
        f.push_back({"raw_chern_prime", json_number(c.raw_chern_prime)});
        f.push_back({"delta_raw", json_number(c.delta_raw)});
        f.push_back({"stokes_residual", json_number(c.stokes_residual)});
        f.push_back({"eta_realness_max", json_number(c.eta_realness_max)});
    }
    return f;
}

std::string json_fields(const std::vector<Field>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        out += i ? ",\n  " : "  ";
        out += json_string(fields[i].name) + ": " + (fields[i].is_string ? json_string(fields[i].value) : fields[i].value);
    }
    return out;
}

std::string json_array(const std::vector<double>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += json_number(xs[i]);
    }
    return out + "]";
}

}  // namespace

std::string format_report(const ReportRow& row, ReportFormat format) {
    const auto fields = row_fields(row);
    if (format == ReportFormat::json) return "{\n" + json_fields(fields) + "\n}\n";
    std::string header, values;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) {
            header += ',';
            values += ',';
        }
        header += fields[i].name;
        values += fields[i].is_string ? csv_field(fields[i].value) : fields[i].value;
    }
    return header + "\n" + values + "\n";
}

std::string format_grid(const GridDump& grid, const ReportRow& summary, ReportFormat format) {
    if (format == ReportFormat::json) {
        std::vector<double> us, vs;
        for (const Point2& p : grid.points) {
            us.push_back(p.u);
            vs.push_back(p.v);
        }
        std::string out = "{\n" + json_fields(row_fields(summary)) + ",\n";
        out += "  \"grid\": {\n";
        out += "    \"u\": " + json_array(us) + ",\n";
        out += "    \"v\": " + json_array(vs) + ",\n";
        out += "    \"K\": " + json_array(grid.K) + ",\n";
        out += "    \"area_coeff\": " + json_array(grid.area_coeff) + ",\n";
        out += "    \"k_area\": " + json_array(grid.k_area) + "\n";
        out += "  }\n}\n";
        return out;
    }
    std::string out = "u,v,K,area_coeff,k_area\n";
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        out += format_number(grid.points[i].u) + ',' + format_number(grid.points[i].v) + ',' + format_number(grid.K[i]) +
               ',' + format_number(grid.area_coeff[i]) + ',' + format_number(grid.k_area[i]) + '\n';
    }
    return out;
}

}  // namespace chernlab::cli
