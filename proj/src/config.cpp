#include "degel/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "degel/errors.hpp"

namespace degel {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<long> to_long(std::string_view s) {
    s = trim(s);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// Typed readers; each throws ParseError on a malformed value.
struct Reader {
    std::size_t line;
    std::string key;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(line, key + ": " + what); }

    double real(std::string_view v) const {
        const auto d = to_double(v);
        if (!d) fail("expected a real number, got '" + std::string(v) + "'");
        return *d;
    }
    long integer(std::string_view v) const {
        const auto d = to_long(v);
        if (!d) fail("expected an integer, got '" + std::string(v) + "'");
        return *d;
    }
    bool boolean(std::string_view v) const {
        if (v == "true" || v == "on" || v == "1") return true;
        if (v == "false" || v == "off" || v == "0") return false;
        fail("expected a boolean, got '" + std::string(v) + "'");
    }
    Point point(std::string_view v) const {
        const auto parts = split(v, ',');
        if (parts.size() != 2) fail("expected a point 'x,y'");
        return {real(parts[0]), real(parts[1])};
    }
    std::vector<double> list(std::string_view v) const {
        std::vector<double> out;
        for (auto p : split(v, ',')) out.push_back(real(p));
        if (out.empty()) fail("expected a non-empty list");
        return out;
    }
    std::string length(std::string_view v) const {
        std::string_view num = v;
        if (!num.empty() && num.back() == 'h') num.remove_suffix(1);
        const double d = real(num);
        if (!(d > 0.0)) fail("length must be positive");
        return std::string(v);
    }
    TaggedSpec tagged(std::string_view v) const {
        try {
            return parse_tagged(v);
        } catch (const ParameterError& e) {
            fail(e.what());
        }
    }
};

using Setter = std::function<void(ExperimentConfig&, const Reader&, std::string_view)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"experiment",
         [](ExperimentConfig& c, const Reader& r, std::string_view v) {
             const auto& tags = experiment_tags();
             if (std::find(tags.begin(), tags.end(), v) == tags.end()) r.fail("unknown experiment '" + std::string(v) + "'");
             c.experiment = std::string(v);
         }},
        {"n",
         [](ExperimentConfig& c, const Reader& r, std::string_view v) {
             const long n = r.integer(v);
             if (n % 2 == 0) r.fail("n must be odd");
             if (n < 9) r.fail("n must be >= 9");
             c.n = static_cast<int>(n);
         }},
        {"center", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.center = r.point(v); }},
        {"radius", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.radius = r.real(v); }},
        {"operator",
         [](ExperimentConfig& c, const Reader& r, std::string_view v) {
             static const std::vector<std::string> ops{"laplacian", "pucci+", "pucci-", "p-laplacian",
                                                      "infinity-laplacian", "m-momentum"};
             if (std::find(ops.begin(), ops.end(), v) == ops.end()) r.fail("unknown operator '" + std::string(v) + "'");
             c.op = std::string(v);
         }},
        {"operator.lambda", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.op_lambda = r.real(v); }},
        {"operator.Lambda", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.op_Lambda = r.real(v); }},
        {"operator.p", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.op_p = r.real(v); }},
        {"operator.m", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.op_m = static_cast<int>(r.integer(v)); }},
        {"operator.sigma", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.op_sigma = r.point(v); }},
        {"operator.xi_bound", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.op_xi_bound = r.real(v); }},
        {"degeneracy", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.degeneracy = r.boolean(v); }},
        {"p",
         [](ExperimentConfig& c, const Reader& r, std::string_view v) {
             c.p = r.real(v);
             if (!(c.p > 0.0)) r.fail("p must be positive");
         }},
        {"q", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.q = r.real(v); }},
        {"a",
         [](ExperimentConfig& c, const Reader& r, std::string_view v) {
             c.a = r.tagged(v);
             if (c.a.kind != "const" && c.a.kind != "power" && c.a.kind != "table") {
                 r.fail("a must be const:<v>, power:<alpha> or table:<path>");
             }
             if (c.a.kind != "table" && c.a.args.size() != 1) r.fail("a needs exactly one argument");
         }},
        {"eps_reg", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.eps_reg = r.real(v); }},
        {"source", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.source = r.tagged(v); }},
        {"mu", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.mu = r.real(v); }},
        {"boundary", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.boundary = r.tagged(v); }},
        {"obstacle", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.obstacle = r.tagged(v); }},
        {"solver.tol", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.tol = r.real(v); }},
        {"solver.dt_safety", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.dt_safety = r.real(v); }},
        {"solver.max_iter", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.max_iter = r.integer(v); }},
        {"solver.monotone_pucci",
         [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.monotone_pucci = r.boolean(v); }},
        {"analysis.x0", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.x0 = r.point(v); }},
        {"analysis.r_min", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.r_min = r.length(v); }},
        {"analysis.r_max", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.r_max = r.length(v); }},
        {"analysis.per_decade",
         [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.per_decade = static_cast<int>(r.integer(v)); }},
        {"analysis.beta", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.beta = r.real(v); }},
        {"analysis.sampled", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.sampled = r.boolean(v); }},
        {"analysis.threshold", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.threshold = r.real(v); }},
        {"barrier.lambda", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.barrier_lambda = r.real(v); }},
        {"barrier.Lambda", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.barrier_Lambda = r.real(v); }},
        {"barrier.L1", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.barrier_L1 = r.real(v); }},
        {"barrier.N", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.barrier_N = static_cast<int>(r.integer(v)); }},
        {"barrier.diam", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.barrier_diam = r.real(v); }},
        {"barrier.norm_a", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.barrier_norm_a = r.real(v); }},
        {"barrier.m", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.barrier_m = r.real(v); }},
        {"barrier.c_fraction",
         [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.barrier_c_fraction = r.real(v); }},
        {"approximation.deltas", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.deltas = r.list(v); }},
        {"approximation.radius", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.approx_radius = r.real(v); }},
        {"recession.taus", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.taus = r.list(v); }},
        {"recession.samples",
         [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.recession_samples = static_cast<int>(r.integer(v)); }},
        {"band.min", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.band_min = r.real(v); }},
        {"band.max", [](ExperimentConfig& c, const Reader& r, std::string_view v) { c.band_max = r.real(v); }},
    };
    return table;
}

std::size_t line_of(const ExperimentConfig& c, const std::string& key) {
    const auto it = c.lines.find(key);
    return it == c.lines.end() ? 0 : it->second;
}

// Cross-field checks, reported at the line of the key that breaks them.
void validate(const ExperimentConfig& c) {
    if (c.degeneracy && !(c.q >= c.p)) throw ParseError(line_of(c, "q"), "q: p <= q required");
    if (!(c.mu > 0.0 && c.mu < c.p + 1.0)) throw ParseError(line_of(c, "mu"), "mu: mu < p+1 required (0 < mu < p+1)");
    if (!(c.radius > 0.0 && c.radius <= 1.0)) throw ParseError(line_of(c, "radius"), "radius: must lie in (0,1]");
    if (!(c.tol > 0.0)) throw ParseError(line_of(c, "solver.tol"), "solver.tol: must be positive");
    if (!(c.dt_safety > 0.0 && c.dt_safety < 0.5)) {
        throw ParseError(line_of(c, "solver.dt_safety"), "solver.dt_safety: must lie in (0, 0.5)");
    }
    if (c.max_iter < 1) throw ParseError(line_of(c, "solver.max_iter"), "solver.max_iter: must be >= 1");
    if (!(c.eps_reg >= 0.0)) throw ParseError(line_of(c, "eps_reg"), "eps_reg: must be >= 0");
    if (c.per_decade < 1) throw ParseError(line_of(c, "analysis.per_decade"), "analysis.per_decade: must be >= 1");
    if (c.recession_samples < 1) throw ParseError(line_of(c, "recession.samples"), "recession.samples: must be >= 1");
    static const std::vector<std::string> sources{"const", "exact", "deadcore"};
    if (std::find(sources.begin(), sources.end(), c.source.kind) == sources.end()) {
        throw ParseError(line_of(c, "source"), "source: expected const:<c>, exact or deadcore:<f>");
    }
    static const std::vector<std::string> boundaries{"const", "exact", "plane", "saddle"};
    if (std::find(boundaries.begin(), boundaries.end(), c.boundary.kind) == boundaries.end()) {
        throw ParseError(line_of(c, "boundary"), "boundary: expected const:<c>, exact, plane:<b1>:<b2> or saddle:<eps>");
    }
    static const std::vector<std::string> obstacles{"none", "const", "bump"};
    if (std::find(obstacles.begin(), obstacles.end(), c.obstacle.kind) == obstacles.end()) {
        throw ParseError(line_of(c, "obstacle"), "obstacle: expected none, const:<c> or bump:<height>:<radius>");
    }
}

}  // namespace

const std::vector<std::string>& experiment_tags() {
    static const std::vector<std::string> tags{"solve",        "exact-check",   "exponent", "deadcore",
                                               "obstacle",     "barrier-root",  "approximation", "recession"};
    return tags;
}

TaggedSpec parse_tagged(std::string_view text) {
    text = trim(text);
    if (text.empty()) throw ParameterError("empty specification");
    TaggedSpec spec;
    const auto colon = text.find(':');
    spec.kind = std::string(trim(text.substr(0, colon)));
    if (colon == std::string_view::npos) return spec;
    const std::string_view rest = text.substr(colon + 1);
    spec.raw = std::string(trim(rest));
    if (spec.kind == "table") {
        if (spec.raw.empty()) throw ParameterError("table needs a path");
        return spec;
    }
    for (auto part : split(rest, ':')) {
        const auto d = to_double(part);
        if (!d) throw ParameterError("bad numeric argument '" + std::string(part) + "' in '" + std::string(text) + "'");
        spec.args.push_back(*d);
    }
    return spec;
}

double resolve_length(const std::string& text, double h) {
    std::string_view v = trim(text);
    double scale = 1.0;
    if (!v.empty() && v.back() == 'h') {
        v.remove_suffix(1);
        scale = h;
    }
    const auto d = to_double(v);
    if (!d) throw ParameterError("bad length '" + text + "'");
    return *d * scale;
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "missing key");
        if (value.empty()) throw ParseError(line_no, key + ": missing value");

        const auto& table = setters();
        const auto it = table.find(key);
        if (it == table.end()) throw ParseError(line_no, "unknown key '" + key + "'");
        if (cfg.lines.count(key)) {
            throw ParseError(line_no, "duplicate key '" + key + "' (first set on line " +
                                          std::to_string(cfg.lines[key]) + ")");
        }
        cfg.lines[key] = line_no;
        it->second(cfg, Reader{line_no, key}, value);
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open config file " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

}  // namespace degel
