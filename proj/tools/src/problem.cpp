#include <cmath>
#include <fstream>
#include <sstream>

#include "hsd/cli.hpp"

namespace hsd::cli {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw Error(ErrorKind::Input, path + ": " + what);
}

const json& member(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(path.empty() ? key : path + "." + key, "missing required field");
    return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& path) {
    const auto it = j.find(key);
    return it == j.end() ? fallback : number(*it, join(path, key));
}

int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

cplx complex_value(const json& j, const std::string& path) {
    if (j.is_number()) return number(j, path);
    if (!j.is_array() || j.size() != 2) fail(path, "expected a complex number [re, im]");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

std::vector<double> number_list(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& path) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) fail(join(path, it.key()), "unknown field");
    }
}

SpectralGrid parse_grid(const json& j) {
    reject_unknown(j, {"dim", "points", "xi_extent"}, "grid");
    const int dim = integer(member(j, "dim", "grid"), "grid.dim");
    const int points = integer(member(j, "points", "grid"), "grid.points");
    const double extent = number(member(j, "xi_extent", "grid"), "grid.xi_extent");
    if (dim < 1 || dim > 3) fail("grid.dim", "must be 1, 2 or 3");
    if (points < 4 || points % 2) fail("grid.points", "must be even and at least 4");
    if (!(extent > 0.0)) fail("grid.xi_extent", "must be positive");
    return SpectralGrid(dim, points, extent);
}

RationalRoot parse_root(const json& j, const std::string& path) {
    reject_unknown(j, {"re", "im", "scaled"}, path);
    RationalRoot r;
    r.re = number_or(j, "re", 0.0, path);
    r.im = number(member(j, "im", path), join(path, "im"));
    if (const auto it = j.find("scaled"); it != j.end()) {
        if (!it->is_boolean()) fail(join(path, "scaled"), "expected a boolean");
        r.scaled = it->get<bool>();
    }
    return r;
}

SymbolSpec parse_symbol(const json& j, const SpectralGrid& g, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    int sources = 0;
    for (const char* k : {"operator", "rational", "product"}) sources += j.contains(k);
    if (sources != 1) fail(path, "exactly one of operator, rational, product is required");

    if (j.contains("operator")) {
        reject_unknown(j, {"operator", "shift_unit"}, path);
        double unit = 1.0;
        if (const auto it = j.find("shift_unit"); it != j.end()) {
            if (*it == "dx") unit = g.dx();
            else if (*it != "absolute") fail(join(path, "shift_unit"), "expected \"dx\" or \"absolute\"");
        }
        const json& terms = j["operator"];
        const std::string tpath = join(path, "operator");
        if (!terms.is_array() || terms.empty()) fail(tpath, "expected a nonempty array of terms");
        std::vector<ShiftTerm> out;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string ip = tpath + "[" + std::to_string(i) + "]";
            reject_unknown(terms[i], {"coeff", "shift"}, ip);
            ShiftTerm t{complex_value(member(terms[i], "coeff", ip), ip + ".coeff"),
                        number_list(member(terms[i], "shift", ip), ip + ".shift")};
            if (static_cast<int>(t.shift.size()) != g.dim()) fail(ip + ".shift", "length must equal grid.dim");
            if (t.shift.back() < 0.0) fail(ip + ".shift", "last component must be nonnegative");
            for (double& c : t.shift) c *= unit;
            out.push_back(std::move(t));
        }
        return {DifferenceOperator(std::move(out))};
    }
    if (j.contains("rational")) {
        reject_unknown(j, {"rational"}, path);
        const json& r = j["rational"];
        const std::string rpath = join(path, "rational");
        if (!r.is_object()) fail(rpath, "expected an object");
        if (r.contains("preset")) {
            const std::string name = r["preset"].is_string() ? r["preset"].get<std::string>() : "";
            if (name == "omega_power") {
                reject_unknown(r, {"preset", "ae"}, rpath);
                return {RationalPreset::omega_power(integer(member(r, "ae", rpath), rpath + ".ae"))};
            }
            if (name == "quadratic_ratio") {
                reject_unknown(r, {"preset", "b", "a"}, rpath);
                return {RationalPreset::quadratic_ratio(number(member(r, "b", rpath), rpath + ".b"),
                                                        number(member(r, "a", rpath), rpath + ".a"))};
            }
            fail(rpath + ".preset", "expected \"omega_power\" or \"quadratic_ratio\"");
        }
        reject_unknown(r, {"gain", "zeros", "poles"}, rpath);
        RationalPreset p;
        if (r.contains("gain")) p.gain = complex_value(r["gain"], rpath + ".gain");
        for (const char* key : {"zeros", "poles"}) {
            if (!r.contains(key)) continue;
            const json& list = r[key];
            const std::string lp = rpath + "." + key;
            if (!list.is_array()) fail(lp, "expected an array");
            for (std::size_t i = 0; i < list.size(); ++i)
                (std::string(key) == "zeros" ? p.zeros : p.poles)
                    .push_back(parse_root(list[i], lp + "[" + std::to_string(i) + "]"));
        }
        return {p};
    }
    reject_unknown(j, {"product"}, path);
    const json& list = j["product"];
    const std::string ppath = join(path, "product");
    if (!list.is_array() || list.empty()) fail(ppath, "expected a nonempty array of symbols");
    ProductSpec prod;
    for (std::size_t i = 0; i < list.size(); ++i)
        prod.factors.push_back(parse_symbol(list[i], g, ppath + "[" + std::to_string(i) + "]"));
    return {prod};
}

Extension parse_extension(const json& j, const std::string& path) {
    if (j == "zero") return Extension::Zero;
    if (j == "reflect") return Extension::Reflect;
    fail(path, "expected \"zero\" or \"reflect\"");
}

RhsSpec parse_rhs(const json& j, const std::filesystem::path& base) {
    const std::string path = "rhs";
    if (!j.is_object()) fail(path, "expected an object");
    const json& preset = member(j, "preset", path);
    RhsSpec r;
    if (preset == "gaussian_bump") {
        reject_unknown(j, {"preset", "center", "width", "offset", "prime_width", "amplitude", "extension"}, path);
        r.kind = RhsKind::GaussianBump;
        r.center = number_or(j, "center", r.center, path);
        r.width = number_or(j, "width", r.width, path);
        if (!(r.width > 0.0)) fail("rhs.width", "must be positive");
    } else if (preset == "exp_decay") {
        reject_unknown(j, {"preset", "rate", "offset", "prime_width", "amplitude", "extension"}, path);
        r.kind = RhsKind::ExpDecay;
        r.rate = number_or(j, "rate", r.rate, path);
        if (!(r.rate > 0.0)) fail("rhs.rate", "must be positive");
    } else if (preset == "samples") {
        reject_unknown(j, {"preset", "path", "extension"}, path);
        r.kind = RhsKind::Samples;
        const json& p = member(j, "path", path);
        if (!p.is_string()) fail("rhs.path", "expected a string");
        r.samples = base / p.get<std::string>();
    } else {
        fail("rhs.preset", "expected \"gaussian_bump\", \"exp_decay\" or \"samples\"");
    }
    r.offset = number_or(j, "offset", 0.0, path);
    if (r.offset < 0.0) fail("rhs.offset", "must be nonnegative");
    r.prime_width = number_or(j, "prime_width", 1.0, path);
    if (!(r.prime_width > 0.0)) fail("rhs.prime_width", "must be positive");
    if (j.contains("amplitude")) r.amplitude = complex_value(j["amplitude"], "rhs.amplitude");
    if (j.contains("extension")) r.extension = parse_extension(j["extension"], "rhs.extension");
    return r;
}

BoundaryData parse_data(const json& j, const std::string& path) {
    BoundaryData d;
    if (j.is_object()) {
        reject_unknown(j, {"amplitude", "gaussian_width"}, path);
        if (j.contains("amplitude")) d.amplitude = complex_value(j["amplitude"], path + ".amplitude");
        if (j.contains("gaussian_width")) {
            d.gaussian_width = number(j["gaussian_width"], path + ".gaussian_width");
            if (!(*d.gaussian_width > 0.0)) fail(path + ".gaussian_width", "must be positive");
        }
        return d;
    }
    d.amplitude = complex_value(j, path);
    return d;
}

std::vector<BoundaryData> parse_data_list(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    std::vector<BoundaryData> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_data(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

BcSpec parse_bc(const json& j) {
    if (!j.is_object()) fail("bc", "expected an object");
    if (j.contains("traces") == j.contains("pseudodiff")) fail("bc", "exactly one of traces, pseudodiff is required");
    reject_unknown(j, {"traces", "pseudodiff"}, "bc");
    BcSpec bc;
    if (j.contains("traces")) {
        const json& t = j["traces"];
        reject_unknown(t, {"p", "r", "mixing"}, "bc.traces");
        bc.kind = BcSpec::Kind::Traces;
        bc.p = number_list(member(t, "p", "bc.traces"), "bc.traces.p");
        for (std::size_t a = 0; a < bc.p.size(); ++a)
            for (std::size_t b = a + 1; b < bc.p.size(); ++b)
                if (bc.p[a] == bc.p[b]) fail("bc.traces.p", "duplicate trace planes");
        bc.data = parse_data_list(member(t, "r", "bc.traces"), "bc.traces.r");
        if (bc.data.size() != bc.p.size()) fail("bc.traces.r", "must have one entry per plane");
        if (t.contains("mixing")) {
            const json& m = t["mixing"];
            const std::size_t n = bc.p.size();
            if (!m.is_array() || m.size() != n) fail("bc.traces.mixing", "expected an n x n matrix");
            for (std::size_t i = 0; i < n; ++i) {
                const std::string rp = "bc.traces.mixing[" + std::to_string(i) + "]";
                if (!m[i].is_array() || m[i].size() != n) fail(rp, "expected a row of length n");
                for (std::size_t k = 0; k < n; ++k) bc.mixing.push_back(complex_value(m[i][k], rp));
            }
        }
    } else {
        const json& list = j["pseudodiff"];
        if (!list.is_array() || list.empty()) fail("bc.pseudodiff", "expected a nonempty array of conditions");
        bc.kind = BcSpec::Kind::PseudoDiff;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string cp = "bc.pseudodiff[" + std::to_string(i) + "]";
            reject_unknown(list[i], {"symbol", "r"}, cp);
            const json& sym = member(list[i], "symbol", cp);
            reject_unknown(sym, {"gain", "plus_power", "minus_power"}, cp + ".symbol");
            ConditionSymbol cs;
            if (sym.contains("gain")) cs.gain = complex_value(sym["gain"], cp + ".symbol.gain");
            if (sym.contains("plus_power")) cs.plus_power = integer(sym["plus_power"], cp + ".symbol.plus_power");
            if (sym.contains("minus_power")) cs.minus_power = integer(sym["minus_power"], cp + ".symbol.minus_power");
            if (cs.gain == cplx(0.0)) fail(cp + ".symbol.gain", "must be nonzero");
            bc.symbols.push_back(cs);
            bc.data.push_back(parse_data(member(list[i], "r", cp), cp + ".r"));
        }
    }
    return bc;
}

}  // namespace

std::vector<cplx> BoundaryData::sample(const SpectralGrid& g) const {
    std::vector<cplx> out(g.slices(), amplitude);
    if (gaussian_width)
        for (std::size_t s = 0; s < g.slices(); ++s) {
            const double z = g.xi_prime_norm(s) / *gaussian_width;
            out[s] = amplitude * std::exp(-0.5 * z * z);
        }
    return out;
}

json Tolerances::to_json() const {
    return {{"residual", residual},           {"support", support},
            {"reconstruction", reconstruction}, {"one_sidedness", one_sidedness},
            {"trace", trace},                 {"determinant", determinant},
            {"rounding", rounding},           {"ellipticity", ellipticity},
            {"boundary_layer", boundary_layer}, {"interior_fraction", interior_fraction},
            {"residual_taper", residual_taper}};
}

void Tolerances::set(const std::string& key, double value) {
    if (!std::isfinite(value)) throw Error(ErrorKind::Input, "tolerance " + key + " must be finite");
    double* slot = nullptr;
    if (key == "residual") slot = &residual;
    else if (key == "support") slot = &support;
    else if (key == "reconstruction") slot = &reconstruction;
    else if (key == "one_sidedness") slot = &one_sidedness;
    else if (key == "trace") slot = &trace;
    else if (key == "determinant") slot = &determinant;
    else if (key == "rounding") slot = &rounding;
    else if (key == "ellipticity") slot = &ellipticity;
    else if (key == "boundary_layer") slot = &boundary_layer;
    else if (key == "interior_fraction") slot = &interior_fraction;
    else if (key == "residual_taper") slot = &residual_taper;
    if (!slot) throw Error(ErrorKind::Input, "tolerances." + key + ": unknown tolerance");
    *slot = value;
}

void apply_override(Tolerances& tol, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw Error(ErrorKind::Input, "--tol-override expects key=value, got \"" + assignment + "\"");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw Error(ErrorKind::Input, "--tol-override " + key + ": \"" + text + "\" is not a number");
    tol.set(key, value);
}

Command parse_command(const std::string& name) {
    if (name == "analyze") return Command::Analyze;
    if (name == "factorize") return Command::Factorize;
    if (name == "solve") return Command::Solve;
    if (name == "bvp") return Command::Bvp;
    if (name == "verify") return Command::Verify;
    throw Error(ErrorKind::Input, "unknown command \"" + name + "\"");
}

const char* to_string(Command c) noexcept {
    switch (c) {
        case Command::Analyze: return "analyze";
        case Command::Factorize: return "factorize";
        case Command::Solve: return "solve";
        case Command::Bvp: return "bvp";
        case Command::Verify: return "verify";
    }
    return "?";
}

std::uint64_t fnv1a64(const std::string& bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

ProblemSpec parse_problem(const json& j, const std::filesystem::path& base_dir, const std::string& digest) {
    if (!j.is_object()) fail("(root)", "expected an object");
    reject_unknown(j, {"grid", "symbol", "s", "rhs", "bc", "tolerances"}, "");
    ProblemSpec spec;
    spec.digest = digest;
    spec.grid = parse_grid(member(j, "grid", ""));
    spec.symbol = parse_symbol(member(j, "symbol", ""), spec.grid, "symbol");
    if (spec_dimension(spec.symbol) != 0 && spec_dimension(spec.symbol) != spec.grid.dim())
        fail("symbol", "dimension does not match grid.dim");
    try {
        validate(spec.symbol);
    } catch (const Error& e) {
        fail("symbol", e.what());
    }
    spec.s = number_or(j, "s", 0.0, "");
    if (j.contains("rhs")) spec.rhs = parse_rhs(j["rhs"], base_dir);
    if (j.contains("bc")) spec.bc = parse_bc(j["bc"]);
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        if (!t.is_object()) fail("tolerances", "expected an object");
        for (auto it = t.begin(); it != t.end(); ++it)
            spec.tol.set(it.key(), number(it.value(), "tolerances." + it.key()));
    }
    return spec;
}

ProblemSpec load_problem(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Input, "cannot open problem file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Input, path.string() + ": " + e.what());
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return parse_problem(j, path.parent_path(), hex);
}

}  // namespace hsd::cli
