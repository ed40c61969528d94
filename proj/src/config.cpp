/* SPDX-License-Identifier: Apache-2.0 */
#include "dclab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace dclab {

namespace {

[[noreturn]] void parse_error(const std::string& what) { raise(ErrorCode::Parse, what); }

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double to_double(const std::string& key, const std::string& s)
{
    const std::string t = trim(s);
    double x = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) parse_error(key + ": not a number: '" + t + "'");
    return x;
}

long long to_int(const std::string& key, const std::string& s)
{
    const std::string t = trim(s);
    long long x = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) parse_error(key + ": not an integer: '" + t + "'");
    return x;
}

bool to_bool(const std::string& key, const std::string& s)
{
    const std::string t = trim(s);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    parse_error(key + ": not a boolean: '" + t + "'");
}

// Comma-separated items; commas inside parentheses belong to the item.
std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    for (const auto& item : out)
        if (item.empty()) parse_error("empty list item in '" + s + "'");
    return out;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F f)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + f(xs[i]);
    return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& s)
{
    std::vector<double> out;
    for (const auto& item : split_list(s)) out.push_back(to_double(key, item));
    return out;
}

Point to_point(const std::string& key, const std::string& s)
{
    const auto xs = to_doubles(key, s);
    if (xs.size() > 3) parse_error(key + ": at most three components");
    Point p{};
    for (std::size_t i = 0; i < xs.size(); ++i) p[i] = xs[i];
    return p;
}

std::string point_text(const Point& p, int dim)
{
    std::vector<double> xs(p.begin(), p.begin() + std::clamp(dim, 1, 3));
    return join(xs, fmt);
}

const char* boundary_name(BoundaryMode m)
{
    switch (m) {
    case BoundaryMode::Constant: return "constant";
    case BoundaryMode::Exact: return "exact";
    case BoundaryMode::Quadrature: return "quadrature";
    case BoundaryMode::Affine: return "affine";
    }
    return "constant";
}

BoundaryMode parse_boundary(const std::string& s)
{
    for (auto m : {BoundaryMode::Constant, BoundaryMode::Exact, BoundaryMode::Quadrature, BoundaryMode::Affine})
        if (s == boundary_name(m)) return m;
    parse_error("unknown boundary mode '" + s + "'");
}

struct Key {
    const char* section;
    const char* name;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

#define DBL(sec, name, field)                                                                          \
    Key{sec, name, [](ExperimentConfig& c, const std::string& v) { c.field = to_double(name, v); },     \
        [](const ExperimentConfig& c) { return fmt(c.field); }}
#define INT(sec, name, field)                                                                          \
    Key{sec, name,                                                                                     \
        [](ExperimentConfig& c, const std::string& v) {                                                \
            c.field = static_cast<decltype(c.field)>(to_int(name, v));                                  \
        },                                                                                             \
        [](const ExperimentConfig& c) { return std::to_string(c.field); }}
#define BOOL(sec, name, field)                                                                         \
    Key{sec, name, [](ExperimentConfig& c, const std::string& v) { c.field = to_bool(name, v); },       \
        [](const ExperimentConfig& c) { return std::string(c.field ? "true" : "false"); }}
#define STR(sec, name, field)                                                                          \
    Key{sec, name, [](ExperimentConfig& c, const std::string& v) { c.field = trim(v); },                \
        [](const ExperimentConfig& c) { return c.field; }}
#define DBLS(sec, name, field)                                                                         \
    Key{sec, name, [](ExperimentConfig& c, const std::string& v) { c.field = to_doubles(name, v); },    \
        [](const ExperimentConfig& c) { return join(c.field, fmt); }}
#define STRS(sec, name, field)                                                                         \
    Key{sec, name, [](ExperimentConfig& c, const std::string& v) { c.field = split_list(v); },          \
        [](const ExperimentConfig& c) { return join(c.field, [](const std::string& s) { return s; }); }}

const std::vector<Key>& keys()
{
    static const std::vector<Key> table = {
        Key{"experiment", "kind",
            [](ExperimentConfig& c, const std::string& v) { c.kind = parse_experiment_kind(trim(v)); },
            [](const ExperimentConfig& c) { return std::string(to_string(c.kind)); }},
        Key{"experiment", "seed",
            [](ExperimentConfig& c, const std::string& v) {
                const long long s = to_int("seed", v);
                if (s < 0) parse_error("seed must be non-negative");
                c.seed = static_cast<std::uint64_t>(s);
            },
            [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
        INT("geometry", "dim", geometry.dim),
        Key{"geometry", "center",
            [](ExperimentConfig& c, const std::string& v) { c.geometry.center = to_point("center", v); },
            [](const ExperimentConfig& c) { return point_text(c.geometry.center, c.geometry.dim); }},
        DBL("geometry", "radius", geometry.radius),
        INT("geometry", "n", geometry.n),
        Key{"boundary", "mode",
            [](ExperimentConfig& c, const std::string& v) { c.boundary.mode = parse_boundary(trim(v)); },
            [](const ExperimentConfig& c) { return std::string(boundary_name(c.boundary.mode)); }},
        DBL("boundary", "value", boundary.value),
        DBL("boundary", "plateau_radius", boundary.plateau_radius),
        Key{"boundary", "slope",
            [](ExperimentConfig& c, const std::string& v) { c.boundary.slope = to_point("slope", v); },
            [](const ExperimentConfig& c) { return point_text(c.boundary.slope, c.geometry.dim); }},
        DBL("boundary", "offset", boundary.offset),
        STR("source", "term", source),
        INT("stencil", "k", stencil_k),
        Key{"stencil", "gradient",
            [](ExperimentConfig& c, const std::string& v) {
                const std::string t = trim(v);
                if (t == "half_spread")
                    c.gradient = GradientSurrogate::HalfSpread;
                else if (t == "monotone")
                    c.gradient = GradientSurrogate::Monotone;
                else
                    parse_error("unknown gradient surrogate '" + t + "'");
            },
            [](const ExperimentConfig& c) {
                return std::string(c.gradient == GradientSurrogate::Monotone ? "monotone" : "half_spread");
            }},
        DBL("solver", "tol", solver.tol),
        INT("solver", "max_sweeps", solver.max_sweeps),
        DBL("solver", "damping", solver.damping),
        Key{"solver", "order",
            [](ExperimentConfig& c, const std::string& v) {
                const std::string t = trim(v);
                if (t == "lexicographic")
                    c.solver.order = SweepOrder::Lexicographic;
                else if (t == "redblack")
                    c.solver.order = SweepOrder::RedBlack;
                else
                    parse_error("unknown sweep order '" + t + "'");
            },
            [](const ExperimentConfig& c) {
                return std::string(c.solver.order == SweepOrder::RedBlack ? "redblack" : "lexicographic");
            }},
        BOOL("solver", "symmetric", solver.symmetric),
        INT("solver", "bracket_expansion_cap", solver.bracket_expansion_cap),
        BOOL("solver", "auto_damping", solver.auto_damping),
        INT("solver", "stall_window", solver.stall_window),
        INT("solver", "stall_limit", solver.stall_limit),
        BOOL("solver", "allow_nonmonotone", solver.allow_nonmonotone),
        INT("solver", "threads", solver.threads),
        DBL("analysis", "epsilon", analysis.epsilon),
        Key{"analysis", "n_list",
            [](ExperimentConfig& c, const std::string& v) {
                c.analysis.n_list.clear();
                for (const auto& item : split_list(v)) c.analysis.n_list.push_back(static_cast<int>(to_int("n_list", item)));
            },
            [](const ExperimentConfig& c) {
                return join(c.analysis.n_list, [](int x) { return std::to_string(x); });
            }},
        DBL("analysis", "min_order", analysis.min_order),
        DBL("analysis", "max_rel_error", analysis.max_rel_error),
        DBL("analysis", "plateau_tol_h", analysis.plateau_tol_h),
        DBL("analysis", "fit_r_min", analysis.fit_r_min),
        DBL("analysis", "fit_r_max", analysis.fit_r_max),
        INT("analysis", "fit_count", analysis.fit_count),
        DBL("analysis", "exponent_tol", analysis.exponent_tol),
        STR("analysis", "fit_center", analysis.fit_center),
        DBLS("analysis", "kappa_list", analysis.kappa_list),
        DBL("analysis", "mu", analysis.mu),
        DBL("analysis", "flat_eps", analysis.flat_eps),
        INT("analysis", "flat_bisections", analysis.flat_bisections),
        DBL("analysis", "theta", analysis.theta),
        DBLS("analysis", "r_list", analysis.r_list),
        DBL("analysis", "fraction_tol", analysis.fraction_tol),
        DBLS("analysis", "porosity_radii", analysis.porosity_radii),
        DBL("analysis", "sigma_floor", analysis.sigma_floor),
        DBL("analysis", "dim_min", analysis.dim_min),
        DBL("analysis", "dim_max", analysis.dim_max),
        INT("analysis", "probes", analysis.probes),
        INT("analysis", "probe_radius", analysis.probe_radius),
        DBL("analysis", "probe_tol", analysis.probe_tol),
        DBL("analysis", "probe_tol_f", analysis.probe_tol_f),
        STR("analysis", "candidate", analysis.candidate),
        STR("analysis", "contrast_term", analysis.contrast_term),
        INT("analysis", "contrast_n", analysis.contrast_n),
        DBL("analysis", "contrast_radius", analysis.contrast_radius),
        DBL("analysis", "contrast_tol", analysis.contrast_tol),
        DBL("analysis", "stability_tol", analysis.stability_tol),
        STRS("audit", "terms", audit.terms),
        STRS("audit", "conditions", audit.conditions),
        DBL("audit", "gamma", audit.gamma),
        DBL("audit", "delta_max", audit.delta_max),
        DBL("audit", "t_max", audit.t_max),
        INT("audit", "samples", audit.samples),
        Key{"audit", "report_only",
            [](ExperimentConfig& c, const std::string& v) {
                c.audit.report_only = trim(v).empty() ? std::vector<std::string>{} : split_list(v);
            },
            [](const ExperimentConfig& c) {
                return join(c.audit.report_only, [](const std::string& s) { return s; });
            }},
        STR("output", "dir", output.dir),
        BOOL("output", "binary", output.binary),
        BOOL("output", "json", output.json),
        BOOL("output", "dump_field", output.dump_field),
    };
    return table;
}

#undef DBL
#undef INT
#undef BOOL
#undef STR
#undef DBLS
#undef STRS

const Key& find_key(const std::string& section, const std::string& key)
{
    for (const Key& k : keys())
        if (section == k.section && key == k.name) return k;
    parse_error("unknown key '" + key + "' in section [" + section + "]");
}

void validate(const ExperimentConfig& c)
{
    require(c.analysis.fit_center == "interface" || c.analysis.fit_center == "free_boundary", ErrorCode::Parse,
            "analysis.fit_center must be interface or free_boundary");
    require(c.geometry.dim >= 1 && c.geometry.dim <= 3, ErrorCode::Parse, "geometry.dim must be 1, 2 or 3");
    require(c.geometry.radius > 0.0, ErrorCode::Parse, "geometry.radius must be positive");
    require(c.geometry.n >= 2, ErrorCode::Parse, "geometry.n must be at least 2");
    require(c.stencil_k >= 1, ErrorCode::Parse, "stencil.k must be at least 1");
    require(c.solver.tol > 0.0, ErrorCode::Parse, "solver.tol must be positive");
    require(c.solver.max_sweeps >= 1, ErrorCode::Parse, "solver.max_sweeps must be at least 1");
    require(c.solver.damping > 0.0 && c.solver.damping <= 1.0, ErrorCode::Parse, "solver.damping must lie in (0, 1]");
    require(c.solver.threads >= 1, ErrorCode::Parse, "solver.threads must be at least 1");
    for (int n : c.analysis.n_list) require(n >= 2, ErrorCode::Parse, "analysis.n_list entries must be at least 2");
}

}  // namespace

const char* to_string(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::Solve: return "solve";
    case ExperimentKind::Convergence: return "convergence";
    case ExperimentKind::Flatness: return "flatness";
    case ExperimentKind::Borderline: return "borderline";
    case ExperimentKind::LiouvillePlateau: return "liouville";
    case ExperimentKind::PorosityStudy: return "porosity";
    case ExperimentKind::ConditionAudit: return "audit";
    case ExperimentKind::Verify: return "verify";
    }
    return "solve";
}

ExperimentKind parse_experiment_kind(const std::string& text)
{
    for (auto k : {ExperimentKind::Solve, ExperimentKind::Convergence, ExperimentKind::Flatness,
                   ExperimentKind::Borderline, ExperimentKind::LiouvillePlateau, ExperimentKind::PorosityStudy,
                   ExperimentKind::ConditionAudit, ExperimentKind::Verify})
        if (text == to_string(k)) return k;
    parse_error("unknown experiment kind '" + text + "'");
}

ExperimentConfig parse_config(const std::string& text)
{
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') parse_error("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            const auto& ks = keys();
            if (std::none_of(ks.begin(), ks.end(), [&](const Key& k) { return section == k.section; }))
                parse_error("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) parse_error("line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty()) parse_error("line " + std::to_string(lineno) + ": key outside any section");
        try {
            find_key(section, trim(line.substr(0, eq))).set(cfg, line.substr(eq + 1));
        } catch (const Error& e) {
            parse_error("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    validate(cfg);
    cfg.hash = fnv1a64(text);
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string serialize_config(const ExperimentConfig& cfg)
{
    std::string out;
    std::string section;
    for (const Key& k : keys()) {
        if (section != k.section) {
            if (!section.empty()) out += '\n';
            section = k.section;
            out += "[" + section + "]\n";
        }
        out += std::string(k.name) + " = " + k.get(cfg) + "\n";
    }
    return out;
}

void set_config_value(ExperimentConfig& cfg, const std::string& section, const std::string& key,
                      const std::string& value)
{
    find_key(section, key).set(cfg, value);
    validate(cfg);
}

std::string get_config_value(const ExperimentConfig& cfg, const std::string& section, const std::string& key)
{
    return find_key(section, key).get(cfg);
}

std::uint64_t fnv1a64(const std::string& bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t hash)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b)
{
    return serialize_config(a) == serialize_config(b);
}

}  // namespace dclab
