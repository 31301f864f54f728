#include "hfb/config.hpp"
#include "hfb/errors.hpp"
#include "hfb/linear.hpp"
#include "hfb/norms.hpp"

#include <toml.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace hfb {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw validation_error(path + ": " + msg);
}

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void check_keys(const toml::table& t, const std::string& prefix, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : t) {
        std::string key(k.str());
        if (!allowed.count(key)) fail(join(prefix, key), "unknown key");
    }
}

double as_real(const toml::node& n, const std::string& path) {
    if (auto f = n.as_floating_point()) return f->get();
    if (auto i = n.as_integer()) return static_cast<double>(i->get());
    fail(path, "expected a number");
}

void read_real(const toml::table& t, const std::string& prefix, const char* key, double& out) {
    if (auto n = t.get(key)) out = as_real(*n, join(prefix, key));
}

void read_int(const toml::table& t, const std::string& prefix, const char* key, int& out) {
    if (auto n = t.get(key)) {
        auto i = n->as_integer();
        if (!i) fail(join(prefix, key), "expected an integer");
        if (i->get() < std::numeric_limits<int>::min() || i->get() > std::numeric_limits<int>::max())
            fail(join(prefix, key), "integer out of range");
        out = static_cast<int>(i->get());
    }
}

void read_string(const toml::table& t, const std::string& prefix, const char* key, std::string& out) {
    if (auto n = t.get(key)) {
        auto s = n->as_string();
        if (!s) fail(join(prefix, key), "expected a string");
        out = s->get();
    }
}

const toml::array* array_at(const toml::table& t, const std::string& prefix, const char* key) {
    auto n = t.get(key);
    if (!n) return nullptr;
    auto a = n->as_array();
    if (!a) fail(join(prefix, key), "expected an array");
    return a;
}

void read_real_list(const toml::table& t, const std::string& prefix, const char* key, std::vector<double>& out) {
    auto a = array_at(t, prefix, key);
    if (!a) return;
    out.clear();
    for (std::size_t i = 0; i < a->size(); ++i)
        out.push_back(as_real(*a->get(i), join(prefix, key) + "[" + std::to_string(i) + "]"));
}

void read_string_list(const toml::table& t, const std::string& prefix, const char* key,
                      std::vector<std::string>& out) {
    auto a = array_at(t, prefix, key);
    if (!a) return;
    out.clear();
    for (std::size_t i = 0; i < a->size(); ++i) {
        auto s = a->get(i)->as_string();
        if (!s) fail(join(prefix, key) + "[" + std::to_string(i) + "]", "expected a string");
        out.push_back(s->get());
    }
}

void read_vec3(const toml::table& t, const std::string& prefix, const char* key, Vec3& out) {
    std::vector<double> v;
    read_real_list(t, prefix, key, v);
    if (!array_at(t, prefix, key)) return;
    if (v.size() > 3) fail(join(prefix, key), "at most 3 components");
    out = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
}

const toml::table* sub_table(const toml::table& t, const char* key) {
    auto n = t.get(key);
    if (!n) return nullptr;
    auto s = n->as_table();
    if (!s) fail(key, "expected a table");
    return s;
}

std::string toml_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::string s = format_real(v);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string real_list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + toml_real(v[i]);
    return s + "]";
}

std::string string_list(const std::vector<std::string>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + quoted(v[i]);
    return s + "]";
}

std::string vec_list(const Vec3& v, int dim) {
    return real_list(std::vector<double>(v.begin(), v.begin() + std::clamp(dim, 1, 3)));
}

void require_multiple(double t, double dt, const std::string& path) {
    const double steps = t / dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps) fail(path, "must be an integer multiple of dt");
}

}  // namespace

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ScenarioConfig parse_config(const std::string& text) {
    toml::table t;
    try {
        t = toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << "config: TOML parse error at line " << e.source().begin.line << ": " << e.description();
        throw validation_error(os.str());
    }
    check_keys(t, "", {"scenario_id", "dim", "points", "length", "N_list", "beta", "epsilon", "T", "dt",
                       "sample_every", "norms", "seed", "shadows", "phi", "k0", "output", "linear"});
    ScenarioConfig c;
    read_string(t, "", "scenario_id", c.scenario_id);
    read_int(t, "", "dim", c.dim);
    read_int(t, "", "points", c.points);
    read_real(t, "", "length", c.length);
    read_real_list(t, "", "N_list", c.n_list);
    read_real(t, "", "beta", c.beta);
    read_real(t, "", "epsilon", c.epsilon);
    read_real(t, "", "T", c.t_final);
    read_real(t, "", "dt", c.dt);
    read_int(t, "", "sample_every", c.sample_every);
    read_string_list(t, "", "norms", c.norms);
    if (auto n = t.get("seed")) {
        auto i = n->as_integer();
        if (!i || i->get() < 0) fail("seed", "expected a non-negative integer");
        c.seed = static_cast<std::uint64_t>(i->get());
    }
    if (auto n = t.get("shadows")) {
        auto b = n->as_boolean();
        if (!b) fail("shadows", "expected a boolean");
        c.shadows = b->get();
    }
    if (auto p = sub_table(t, "phi")) {
        check_keys(*p, "phi", {"width", "center", "momentum"});
        read_real(*p, "phi", "width", c.phi.width);
        read_vec3(*p, "phi", "center", c.phi.offset);
        read_vec3(*p, "phi", "momentum", c.phi.momentum);
    }
    if (auto p = sub_table(t, "k0")) {
        check_keys(*p, "k0", {"amplitude", "width", "center"});
        read_real(*p, "k0", "amplitude", c.k0.amplitude);
        read_real(*p, "k0", "width", c.k0.width);
        read_vec3(*p, "k0", "center", c.k0.offset);
    }
    if (auto p = sub_table(t, "output")) {
        check_keys(*p, "output", {"csv", "json", "summary"});
        read_string(*p, "output", "csv", c.output.csv);
        read_string(*p, "output", "json", c.output.json);
        read_string(*p, "output", "summary", c.output.summary);
    }
    if (auto p = sub_table(t, "linear")) {
        check_keys(*p, "linear", {"T", "dt", "band", "amplitude", "inequalities"});
        read_real(*p, "linear", "T", c.linear.t_final);
        read_real(*p, "linear", "dt", c.linear.dt);
        read_real(*p, "linear", "band", c.linear.band);
        read_real(*p, "linear", "amplitude", c.linear.amplitude);
        read_string_list(*p, "linear", "inequalities", c.linear.inequalities);
    }
    validate_config(c);
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
    std::ostringstream o;
    o << "scenario_id = " << quoted(c.scenario_id) << "\n";
    o << "dim = " << c.dim << "\n";
    o << "points = " << c.points << "\n";
    o << "length = " << toml_real(c.length) << "\n";
    o << "N_list = " << real_list(c.n_list) << "\n";
    o << "beta = " << toml_real(c.beta) << "\n";
    o << "epsilon = " << toml_real(c.epsilon) << "\n";
    o << "T = " << toml_real(c.t_final) << "\n";
    o << "dt = " << toml_real(c.dt) << "\n";
    o << "sample_every = " << c.sample_every << "\n";
    o << "norms = " << string_list(c.norms) << "\n";
    o << "seed = " << c.seed << "\n";
    o << "shadows = " << (c.shadows ? "true" : "false") << "\n";
    o << "\n[phi]\n";
    o << "width = " << toml_real(c.phi.width) << "\n";
    o << "center = " << vec_list(c.phi.offset, c.dim) << "\n";
    o << "momentum = " << vec_list(c.phi.momentum, c.dim) << "\n";
    o << "\n[k0]\n";
    o << "amplitude = " << toml_real(c.k0.amplitude) << "\n";
    o << "width = " << toml_real(c.k0.width) << "\n";
    o << "center = " << vec_list(c.k0.offset, c.dim) << "\n";
    o << "\n[output]\n";
    o << "csv = " << quoted(c.output.csv) << "\n";
    o << "json = " << quoted(c.output.json) << "\n";
    o << "summary = " << quoted(c.output.summary) << "\n";
    o << "\n[linear]\n";
    o << "T = " << toml_real(c.linear.t_final) << "\n";
    o << "dt = " << toml_real(c.linear.dt) << "\n";
    o << "band = " << toml_real(c.linear.band) << "\n";
    o << "amplitude = " << toml_real(c.linear.amplitude) << "\n";
    o << "inequalities = " << string_list(c.linear.inequalities) << "\n";
    return o.str();
}

void validate_config(const ScenarioConfig& c) {
    if (c.scenario_id.empty()) fail("scenario_id", "must not be empty");
    for (char ch : c.scenario_id)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.'))
            fail("scenario_id", "only letters, digits, '_', '-' and '.' are allowed");
    if (c.dim < 1 || c.dim > 3) fail("dim", "must be 1, 2 or 3, got " + std::to_string(c.dim));
    if (c.points < 8 || (c.points & (c.points - 1)) != 0)
        fail("points", "must be a power of two >= 8, got " + std::to_string(c.points));
    if (!(c.length > 0.0) || !std::isfinite(c.length)) fail("length", "must be positive");
    if (!(c.beta > 0.0 && c.beta <= 1.0)) fail("beta", "must lie in (0, 1]");
    if (!(c.epsilon >= 0.0) || !std::isfinite(c.epsilon)) fail("epsilon", "must be >= 0");
    const GridSpec g = make_grid(c.dim, c.points, c.length);
    if (c.n_list.empty()) fail("N_list", "must not be empty");
    for (std::size_t i = 0; i < c.n_list.size(); ++i) {
        const std::string path = "N_list[" + std::to_string(i) + "]";
        const double n = c.n_list[i];
        if (!(n >= 1.0) || !std::isfinite(n)) fail(path, "N must be >= 1");
        const double dil = std::pow(n, c.beta);
        if (dil > g.nyquist())
            fail(path, "N = " + format_real(n) + " gives N^beta = " + format_real(dil) + " above the Nyquist frequency " +
                           format_real(g.nyquist()) + " of the grid (dim=" + std::to_string(c.dim) +
                           ", points=" + std::to_string(c.points) + ", length=" + format_real(c.length) + ")");
    }
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) fail("dt", "must be positive");
    if (!(c.t_final > 0.0) || !std::isfinite(c.t_final)) fail("T", "must be positive");
    require_multiple(c.t_final, c.dt, "T");
    if (c.sample_every < 1) fail("sample_every", "must be >= 1");
    const long steps = std::lround(c.t_final / c.dt);
    if (steps % c.sample_every != 0)
        fail("sample_every", "must divide the step count " + std::to_string(steps));
    const auto& vocab = norm_vocabulary();
    for (std::size_t i = 0; i < c.norms.size(); ++i)
        if (std::find(vocab.begin(), vocab.end(), c.norms[i]) == vocab.end())
            fail("norms[" + std::to_string(i) + "]", "unknown norm '" + c.norms[i] + "'");
    if (!(c.phi.width > 0.0)) fail("phi.width", "must be positive");
    if (!(c.k0.width > 0.0)) fail("k0.width", "must be positive");
    if (!(c.k0.amplitude >= 0.0)) fail("k0.amplitude", "must be >= 0");
    for (int a = c.dim; a < 3; ++a) {
        if (c.phi.offset[a] != 0.0) fail("phi.center", "more components than dim");
        if (c.phi.momentum[a] != 0.0) fail("phi.momentum", "more components than dim");
        if (c.k0.offset[a] != 0.0) fail("k0.center", "more components than dim");
    }
    if (c.output.csv.empty()) fail("output.csv", "must not be empty");
    if (c.output.json.empty()) fail("output.json", "must not be empty");
    if (c.output.summary.empty()) fail("output.summary", "must not be empty");
    if (!(c.linear.dt > 0.0)) fail("linear.dt", "must be positive");
    if (!(c.linear.t_final > 0.0)) fail("linear.T", "must be positive");
    require_multiple(c.linear.t_final, c.linear.dt, "linear.T");
    if (std::lround(c.linear.t_final / c.linear.dt) + 1 < 16)
        fail("linear.T", "needs at least 15 steps of linear.dt for the time derivative");
    if (!(c.linear.band > 0.0) || c.linear.band > g.nyquist())
        fail("linear.band", "must lie in (0, " + format_real(g.nyquist()) + "]");
    if (!(c.linear.amplitude >= 0.0)) fail("linear.amplitude", "must be >= 0");
    const auto& inames = inequality_names();
    for (std::size_t i = 0; i < c.linear.inequalities.size(); ++i)
        if (std::find(inames.begin(), inames.end(), c.linear.inequalities[i]) == inames.end())
            fail("linear.inequalities[" + std::to_string(i) + "]",
                 "unknown inequality '" + c.linear.inequalities[i] + "'");
}

GridSpec config_grid(const ScenarioConfig& c) { return make_grid(c.dim, c.points, c.length); }

std::vector<std::string> config_norms(const ScenarioConfig& c) {
    return c.norms.empty() ? norm_vocabulary() : c.norms;
}

}  // namespace hfb
