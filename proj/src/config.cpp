// config.cpp — INI parsing with Boost.PropertyTree, schema checks and section builders

#include "dissfield/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "dissfield/error.hpp"
#include "dissfield/io.hpp"

namespace dissfield {

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& msg) {
    throw Error(ErrorKind::ConfigInvalid, field + ": " + msg);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size() && std::isfinite(out);
}

} // namespace

const std::vector<SchemaField>& config_schema() {
    static const std::vector<SchemaField> schema{
        {"model", "kind", nullptr, "drude_lorentz | ohmic | tabulated"},
        {"model", "eta", nullptr, "coupling strength (drude_lorentz, ohmic)"},
        {"model", "omega0", nullptr, "resonance frequency (drude_lorentz)"},
        {"model", "gamma", nullptr, "damping rate (drude_lorentz)"},
        {"model", "omega_c", nullptr, "cutoff frequency (ohmic)"},
        {"model", "path", nullptr, "two-column file '# omega im_chi' (tabulated), relative to the config"},
        {"mode", "k", nullptr, "wavenumber"},
        {"mode", "m", "0", "mass term; omega_k = sqrt(m^2 + k^2)"},
        {"constants", "hbar", "1", "reduced Planck constant"},
        {"constants", "kB", "1", "Boltzmann constant"},
        {"numerics", "rel_tol", "1e-8", "quadrature relative tolerance"},
        {"numerics", "abs_tol", "1e-12", "quadrature absolute tolerance"},
        {"numerics", "max_subdivisions", "2000", "quadrature subdivision budget"},
        {"numerics", "tail_map", "algebraic", "algebraic | exponential map for [a, inf)"},
        {"numerics", "epsilon", "1e-9", "pole regularisation relative to omega_k^2"},
        {"kk", "omega", "linspace(0, 10, 200)", "frequency grid"},
        {"kk", "threshold", "1e-3", "maximum relative deviation for exit 0"},
        {"greens", "omega", "linspace(0.01, 5, 500)", "frequency grid"},
        {"greens", "sum_rule_tolerance", "1e-3", "allowed |sum rule - 1| for exit 0"},
        {"thermo", "T", "0.2, 1, 5", "increasing temperature grid"},
        {"thermo", "T_ref", "0", "thermodynamic-integration anchor; 0 selects 100 * max frequency"},
        {"thermo", "T_max", "1e6", "largest anchor temperature tried"},
        {"thermo", "plateau_tol", "1e-6", "classical plateau tolerance relative to kT_ref"},
        {"thermo", "consistency_threshold", "1e-2", "maximum consistency deviation for exit 0"},
        {"correlate", "T", nullptr, "temperature; 0 selects the vacuum"},
        {"correlate", "dt", nullptr, "time separations"},
        {"correlate", "dr", nullptr, "space separations"},
        {"coherent", "kind", nullptr, "constant | gaussian_packet | tabulated"},
        {"coherent", "re", "0", "real part (constant)"},
        {"coherent", "im", "0", "imaginary part (constant)"},
        {"coherent", "amplitude", "1", "peak amplitude (gaussian_packet)"},
        {"coherent", "center", nullptr, "centre frequency (gaussian_packet)"},
        {"coherent", "width", nullptr, "frequency width (gaussian_packet)"},
        {"coherent", "phase", "0", "phase (gaussian_packet)"},
        {"coherent", "path", nullptr, "three-column file '# omega re im' (tabulated)"},
        {"langevin", "T", nullptr, "temperature"},
        {"langevin", "dt", "0.05", "time step"},
        {"langevin", "t_max", "2000", "horizon"},
        {"langevin", "burn_in", "200", "discarded initial time"},
        {"langevin", "n_traj", "10000", "ensemble size"},
        {"langevin", "seed", "0", "64-bit master seed"},
        {"langevin", "acf_stride", "1", "lag spacing of the autocorrelation"},
        {"langevin", "acf_max_lag", "50", "largest autocorrelation lag"},
        {"langevin", "method", "automatic", "automatic | auxiliary | convolution"},
        {"langevin", "dump_trajectories", "0", "number of trajectories written as CSV"},
        {"output", "directory", "out", "output directory, relative to the working directory"},
        {"output", "format", "csv", "csv | json for tables"},
        {"threads", "count", "0", "worker threads; 0 selects the machine parallelism"},
    };
    return schema;
}

namespace {

const SchemaField* find_field(const std::string& section, const std::string& key) {
    for (const auto& f : config_schema())
        if (section == f.section && key == f.key) return &f;
    return nullptr;
}

bool known_section(const std::string& section) {
    return std::any_of(config_schema().begin(), config_schema().end(),
                       [&](const auto& f) { return section == f.section; });
}

} // namespace

RunConfig RunConfig::parse(std::istream& in, std::filesystem::path base_dir) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        invalid("config", std::string("line ") + std::to_string(e.line()) + ": " + e.message());
    }
    RunConfig cfg;
    cfg.base_dir_ = std::move(base_dir);
    for (const auto& [section, body] : tree) {
        if (body.empty()) invalid(section, "key outside of any section");
        if (!known_section(section)) invalid(section, "unknown section");
        auto& sec = cfg.sections_[section];
        for (const auto& [key, value] : body) {
            if (!find_field(section, key)) invalid(section + "." + key, "unknown key");
            sec[key] = trim(value.data());
        }
    }
    return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) invalid("config", "cannot open " + path.string());
    return parse(in, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

std::optional<std::string> RunConfig::raw(const std::string& section, const std::string& key) const {
    const SchemaField* field = find_field(section, key);
    if (!field) invalid(section + "." + key, "not in the schema");
    const auto s = sections_.find(section);
    if (s != sections_.end()) {
        const auto k = s->second.find(key);
        if (k != s->second.end()) return k->second;
    }
    if (field->default_value) return std::string(field->default_value);
    return std::nullopt;
}

std::string RunConfig::get_string(const std::string& section, const std::string& key) const {
    const auto v = raw(section, key);
    if (!v || v->empty()) invalid(section + "." + key, "required value is missing");
    return *v;
}

double RunConfig::get_double(const std::string& section, const std::string& key) const {
    const std::string text = get_string(section, key);
    double out;
    if (!parse_number(text, out)) invalid(section + "." + key, "expected a finite number, got '" + text + "'");
    return out;
}

std::int64_t RunConfig::get_int(const std::string& section, const std::string& key) const {
    const std::string text = trim(get_string(section, key));
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty()) invalid(section + "." + key, "expected an integer, got '" + text + "'");
    return v;
}

std::vector<double> RunConfig::get_list(const std::string& section, const std::string& key) const {
    const std::string field = section + "." + key;
    const std::string text = trim(get_string(section, key));
    std::vector<double> out;
    if (text.rfind("linspace", 0) == 0) {
        const auto open = text.find('('), close = text.rfind(')');
        if (open == std::string::npos || close == std::string::npos || close < open || close + 1 != text.size())
            invalid(field, "malformed linspace(a, b, n)");
        std::stringstream args(text.substr(open + 1, close - open - 1));
        std::vector<std::string> parts;
        for (std::string p; std::getline(args, p, ',');) parts.push_back(p);
        double a, b, n;
        if (parts.size() != 3 || !parse_number(parts[0], a) || !parse_number(parts[1], b) || !parse_number(parts[2], n) ||
            n < 1 || n != std::floor(n))
            invalid(field, "malformed linspace(a, b, n)");
        const auto count = static_cast<std::int64_t>(n);
        for (std::int64_t i = 0; i < count; ++i)
            out.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
        return out;
    }
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        double v;
        if (!parse_number(item, v)) invalid(field, "expected a list of numbers, got '" + trim(item) + "'");
        out.push_back(v);
    }
    if (out.empty()) invalid(field, "empty list");
    return out;
}

void RunConfig::require_section(const std::string& section) const {
    if (!has_section(section)) invalid(section, "required section is missing");
}

std::string RunConfig::normalized() const {
    std::string out;
    for (const auto& [section, body] : sections_)
        for (const auto& [key, value] : body) out += section + "." + key + "=" + value + "\n";
    return out;
}

std::string RunConfig::digest() const { return io::sha256_hex(normalized()); }

namespace {

void allow_only(const RunConfig& cfg, const std::string& section, const std::set<std::string>& keys,
                const std::string& context) {
    const auto it = cfg.sections().find(section);
    if (it == cfg.sections().end()) return;
    for (const auto& [key, value] : it->second)
        if (!keys.count(key)) invalid(section + "." + key, "not used by " + context);
}

numerics::QuadratureSpec build_quadrature(const RunConfig& cfg) {
    numerics::QuadratureSpec q;
    q.rel_tol = cfg.get_double("numerics", "rel_tol");
    q.abs_tol = cfg.get_double("numerics", "abs_tol");
    q.max_subdivisions = static_cast<int>(cfg.get_int("numerics", "max_subdivisions"));
    const std::string map = cfg.get_string("numerics", "tail_map");
    if (map == "algebraic")
        q.infinite_tail_map = numerics::TailMap::algebraic;
    else if (map == "exponential")
        q.infinite_tail_map = numerics::TailMap::exponential;
    else
        invalid("numerics.tail_map", "expected algebraic or exponential, got '" + map + "'");
    if (!(q.rel_tol > 0.0) || !(q.abs_tol >= 0.0) || q.max_subdivisions < 1)
        invalid("numerics", "tolerances must be positive and max_subdivisions >= 1");
    return q;
}

void positive(double v, const std::string& field) {
    if (!(v > 0.0)) invalid(field, "must be positive");
}

} // namespace

SusceptibilityModel build_model(const RunConfig& cfg) {
    cfg.require_section("model");
    const std::string kind = cfg.get_string("model", "kind");
    const auto quad = build_quadrature(cfg);
    if (kind == "drude_lorentz") {
        allow_only(cfg, "model", {"kind", "eta", "omega0", "gamma"}, "kind drude_lorentz");
        DrudeLorentz d{cfg.get_double("model", "eta"), cfg.get_double("model", "omega0"),
                       cfg.get_double("model", "gamma")};
        if (d.eta < 0.0) invalid("model.eta", "must be non-negative");
        positive(d.omega0, "model.omega0");
        positive(d.gamma, "model.gamma");
        return {d, quad};
    }
    if (kind == "ohmic") {
        allow_only(cfg, "model", {"kind", "eta", "omega_c"}, "kind ohmic");
        Ohmic o{cfg.get_double("model", "eta"), cfg.get_double("model", "omega_c")};
        if (o.eta < 0.0) invalid("model.eta", "must be non-negative");
        positive(o.omega_c, "model.omega_c");
        return {o, quad};
    }
    if (kind == "tabulated") {
        allow_only(cfg, "model", {"kind", "path"}, "kind tabulated");
        const std::filesystem::path path = cfg.base_dir() / cfg.get_string("model", "path");
        try {
            return {Tabulated::load(path.string()), quad};
        } catch (const Error& e) {
            invalid("model.path", e.what());
        }
    }
    invalid("model.kind", "expected drude_lorentz, ohmic or tabulated, got '" + kind + "'");
}

ModeContext build_mode(const RunConfig& cfg) {
    cfg.require_section("mode");
    const double k = cfg.get_double("mode", "k");
    const double m = cfg.get_double("mode", "m");
    if (k < 0.0 || m < 0.0 || (k == 0.0 && m == 0.0)) invalid("mode", "need k, m >= 0 and not both zero");
    return ModeContext::make(k, m);
}

Constants build_constants(const RunConfig& cfg) {
    Constants c{cfg.get_double("constants", "hbar"), cfg.get_double("constants", "kB")};
    positive(c.hbar, "constants.hbar");
    positive(c.kB, "constants.kB");
    return c;
}

ResponseEvaluator build_evaluator(const RunConfig& cfg) {
    const double eps = cfg.get_double("numerics", "epsilon");
    positive(eps, "numerics.epsilon");
    return {build_model(cfg), build_mode(cfg), build_constants(cfg).hbar, eps};
}

KKSettings build_kk(const RunConfig& cfg) {
    KKSettings s{cfg.get_list("kk", "omega"), cfg.get_double("kk", "threshold")};
    for (double w : s.omega)
        if (w < 0.0) invalid("kk.omega", "frequencies must be non-negative");
    positive(s.threshold, "kk.threshold");
    return s;
}

GreensSettings build_greens(const RunConfig& cfg) {
    GreensSettings s{cfg.get_list("greens", "omega"), cfg.get_double("greens", "sum_rule_tolerance")};
    for (double w : s.omega) positive(w, "greens.omega");
    positive(s.sum_rule_tolerance, "greens.sum_rule_tolerance");
    return s;
}

ThermoSettings build_thermo(const RunConfig& cfg) {
    ThermoSettings s;
    s.T = cfg.get_list("thermo", "T");
    for (std::size_t i = 0; i < s.T.size(); ++i) {
        positive(s.T[i], "thermo.T");
        if (i > 0 && !(s.T[i] > s.T[i - 1])) invalid("thermo.T", "must be strictly increasing");
    }
    s.integration.T_ref = cfg.get_double("thermo", "T_ref");
    s.integration.T_max = cfg.get_double("thermo", "T_max");
    s.integration.plateau_tol = cfg.get_double("thermo", "plateau_tol");
    if (s.integration.T_ref < 0.0) invalid("thermo.T_ref", "must be non-negative");
    positive(s.integration.T_max, "thermo.T_max");
    positive(s.integration.plateau_tol, "thermo.plateau_tol");
    s.consistency_threshold = cfg.get_double("thermo", "consistency_threshold");
    positive(s.consistency_threshold, "thermo.consistency_threshold");
    return s;
}

CorrelateSettings build_correlate(const RunConfig& cfg) {
    cfg.require_section("correlate");
    CorrelateSettings s;
    s.T = cfg.get_double("correlate", "T");
    if (s.T < 0.0) invalid("correlate.T", "must be non-negative");
    s.grid.dt_values = cfg.get_list("correlate", "dt");
    s.grid.dr_values = cfg.get_list("correlate", "dr");
    return s;
}

std::optional<CoherentAmplitude> build_coherent(const RunConfig& cfg) {
    if (!cfg.has_section("coherent")) return std::nullopt;
    const std::string kind = cfg.get_string("coherent", "kind");
    if (kind == "constant") {
        allow_only(cfg, "coherent", {"kind", "re", "im"}, "kind constant");
        return CoherentAmplitude(
            CoherentAmplitude::Constant{{cfg.get_double("coherent", "re"), cfg.get_double("coherent", "im")}});
    }
    if (kind == "gaussian_packet") {
        allow_only(cfg, "coherent", {"kind", "amplitude", "center", "width", "phase"}, "kind gaussian_packet");
        CoherentAmplitude::GaussianPacket g{cfg.get_double("coherent", "amplitude"),
                                            cfg.get_double("coherent", "center"), cfg.get_double("coherent", "width"),
                                            cfg.get_double("coherent", "phase")};
        positive(g.center, "coherent.center");
        positive(g.width, "coherent.width");
        return CoherentAmplitude(g);
    }
    if (kind == "tabulated") {
        allow_only(cfg, "coherent", {"kind", "path"}, "kind tabulated");
        const std::string field = "coherent.path";
        const std::filesystem::path path = cfg.base_dir() / cfg.get_string("coherent", "path");
        std::ifstream in(path);
        if (!in) invalid(field, "cannot open " + path.string());
        CoherentAmplitude::Table t;
        std::string line;
        bool header = false;
        while (std::getline(in, line)) {
            const std::string tl = trim(line);
            if (tl.empty()) continue;
            if (tl[0] == '#') {
                std::stringstream hs(tl.substr(1));
                std::string a, b, c;
                hs >> a >> b >> c;
                if (a == "omega" && b == "re" && c == "im") header = true;
                continue;
            }
            std::stringstream ls(tl);
            double w, re, im;
            if (!(ls >> w >> re >> im)) invalid(field, "malformed row '" + tl + "'");
            t.omega.push_back(w);
            t.values.emplace_back(re, im);
        }
        if (!header) invalid(field, "missing header '# omega re im'");
        try {
            return CoherentAmplitude(t);
        } catch (const Error& e) {
            invalid(field, e.what());
        }
    }
    invalid("coherent.kind", "expected constant, gaussian_packet or tabulated, got '" + kind + "'");
}

LangevinSettings build_langevin(const RunConfig& cfg) {
    cfg.require_section("langevin");
    LangevinSettings s;
    auto& c = s.config;
    c.T = cfg.get_double("langevin", "T");
    c.kB = build_constants(cfg).kB;
    c.dt = cfg.get_double("langevin", "dt");
    c.t_max = cfg.get_double("langevin", "t_max");
    c.burn_in = cfg.get_double("langevin", "burn_in");
    c.n_traj = cfg.get_int("langevin", "n_traj");
    const std::string seed = cfg.get_string("langevin", "seed");
    try {
        std::size_t used = 0;
        c.seed = std::stoull(seed, &used, 0);
        if (used != seed.size() || seed[0] == '-') throw std::invalid_argument("seed");
    } catch (const std::exception&) {
        invalid("langevin.seed", "expected an unsigned 64-bit integer, got '" + seed + "'");
    }
    c.acf_stride = cfg.get_double("langevin", "acf_stride");
    c.acf_max_lag = cfg.get_double("langevin", "acf_max_lag");
    const std::string method = cfg.get_string("langevin", "method");
    if (method == "automatic")
        c.method = MemoryMethod::automatic;
    else if (method == "auxiliary")
        c.method = MemoryMethod::auxiliary;
    else if (method == "convolution")
        c.method = MemoryMethod::convolution;
    else
        invalid("langevin.method", "expected automatic, auxiliary or convolution, got '" + method + "'");
    positive(c.T, "langevin.T");
    positive(c.dt, "langevin.dt");
    positive(c.burn_in, "langevin.burn_in");
    if (!(c.t_max > c.burn_in)) invalid("langevin.t_max", "must exceed burn_in");
    if (c.n_traj < 1) invalid("langevin.n_traj", "must be >= 1");
    positive(c.acf_stride, "langevin.acf_stride");
    if (c.acf_max_lag < 0.0) invalid("langevin.acf_max_lag", "must be non-negative");
    s.dump_trajectories = cfg.get_int("langevin", "dump_trajectories");
    if (s.dump_trajectories < 0) invalid("langevin.dump_trajectories", "must be non-negative");
    return s;
}

OutputSettings build_output(const RunConfig& cfg) {
    OutputSettings s;
    s.directory = cfg.get_string("output", "directory");
    const std::string format = cfg.get_string("output", "format");
    if (format == "csv")
        s.format = OutputFormat::csv;
    else if (format == "json")
        s.format = OutputFormat::json;
    else
        invalid("output.format", "expected csv or json, got '" + format + "'");
    return s;
}

int build_threads(const RunConfig& cfg) {
    const auto n = cfg.get_int("threads", "count");
    if (n < 0) invalid("threads.count", "must be non-negative");
    if (n == 0) return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return static_cast<int>(n);
}

} // namespace dissfield
