#include "gpe/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "gpe/io.hpp"

namespace gpe {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct IniEntry {
    std::string value;
    bool used = false;
};

// section -> key -> value, with use tracking so leftover keys can be named.
using IniData = std::map<std::string, std::map<std::string, IniEntry>>;

IniData parse_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    IniData data;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section header at " + path + ":" +
                                  std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("config: empty section name at " + path + ":" +
                                  std::to_string(lineno));
            data[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at " + path + ":" +
                              std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config: empty key at " + path + ":" + std::to_string(lineno));
        if (section.empty())
            throw ConfigError("config: key '" + key + "' outside any [section] at " + path + ":" +
                              std::to_string(lineno));
        if (!data[section].emplace(key, IniEntry{value, false}).second)
            throw ConfigError("config: duplicate key '" + section + "." + key + "'");
    }
    return data;
}

class Reader {
public:
    explicit Reader(IniData data) : data_(std::move(data)) {}

    bool has_section(const std::string& section) const { return data_.count(section) > 0; }

    std::optional<std::string> get(const std::string& section, const std::string& key) {
        auto sit = data_.find(section);
        if (sit == data_.end()) return std::nullopt;
        auto kit = sit->second.find(key);
        if (kit == sit->second.end()) return std::nullopt;
        kit->second.used = true;
        return kit->second.value;
    }

    std::string require(const std::string& section, const std::string& key) {
        auto v = get(section, key);
        if (!v) throw ConfigError("config: missing required key '" + section + "." + key + "'");
        return *v;
    }

    double get_real(const std::string& section, const std::string& key, double fallback) {
        auto v = get(section, key);
        return v ? parse_real(section, key, *v) : fallback;
    }

    long get_int(const std::string& section, const std::string& key, long fallback) {
        auto v = get(section, key);
        return v ? parse_int(section, key, *v) : fallback;
    }

    bool get_bool(const std::string& section, const std::string& key, bool fallback) {
        auto v = get(section, key);
        if (!v) return fallback;
        if (*v == "true") return true;
        if (*v == "false") return false;
        throw ConfigError("config: '" + section + "." + key + "' must be true or false");
    }

    double parse_real(const std::string& section, const std::string& key,
                      const std::string& text) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(text, &pos);
            if (pos != text.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config: '" + section + "." + key + "' must be a number (got '" +
                              text + "')");
        }
    }

    long parse_int(const std::string& section, const std::string& key, const std::string& text) {
        long v = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            throw ConfigError("config: '" + section + "." + key + "' must be an integer (got '" +
                              text + "')");
        return v;
    }

    std::vector<std::string> tokens(const std::string& text) const {
        std::istringstream in(text);
        std::vector<std::string> out;
        std::string tok;
        while (in >> tok) out.push_back(tok);
        return out;
    }

    // Unknown sections/keys are configuration mistakes, not extensions.
    void reject_unused(const std::set<std::string>& known_sections) const {
        for (const auto& [section, entries] : data_) {
            if (!known_sections.count(section))
                throw ConfigError("config: unknown section '[" + section + "]'");
            for (const auto& [key, entry] : entries)
                if (!entry.used)
                    throw ConfigError("config: unknown key '" + section + "." + key + "'");
        }
    }

private:
    IniData data_;
};

template <typename T, typename Parse>
std::array<T, 3> per_axis(Reader& reader, const std::string& section, const std::string& key,
                          int dim, Parse&& parse) {
    const std::string text = reader.require(section, key);
    const std::vector<std::string> toks = reader.tokens(text);
    std::array<T, 3> out{};
    if (toks.size() == 1) {
        const T v = parse(section, key, toks[0]);
        out.fill(v);
    } else if (toks.size() == static_cast<std::size_t>(dim)) {
        for (int a = 0; a < dim; ++a) out[a] = parse(section, key, toks[a]);
    } else {
        throw ConfigError("config: '" + section + "." + key + "' needs 1 or " +
                          std::to_string(dim) + " values");
    }
    return out;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
    Reader reader(parse_ini(path));
    RunConfig rc;

    // [problem]
    rc.problem.dim = static_cast<int>(reader.get_int("problem", "dim", 0));
    if (rc.problem.dim < 1 || rc.problem.dim > 3)
        throw ConfigError("config: 'problem.dim' must be 1, 2 or 3");
    const int dim = rc.problem.dim;
    rc.problem.n = per_axis<int>(reader, "problem", "n", dim,
                                 [&](auto& s, auto& k, auto& t) {
                                     return static_cast<int>(reader.parse_int(s, k, t));
                                 });
    for (int a = 0; a < dim; ++a)
        if (rc.problem.n[a] < 4)
            throw ConfigError("config: 'problem.n' must be >= 4 on every axis");
    rc.problem.lo = per_axis<double>(reader, "problem", "lo", dim,
                                     [&](auto& s, auto& k, auto& t) {
                                         return reader.parse_real(s, k, t);
                                     });
    rc.problem.hi = per_axis<double>(reader, "problem", "hi", dim,
                                     [&](auto& s, auto& k, auto& t) {
                                         return reader.parse_real(s, k, t);
                                     });
    for (int a = 0; a < dim; ++a)
        if (!(rc.problem.hi[a] > rc.problem.lo[a]))
            throw ConfigError("config: 'problem.hi' must exceed 'problem.lo' on every axis");
    rc.problem.beta = reader.get_real("problem", "beta", 0.0);
    if (!(rc.problem.beta >= 0.0))
        throw ConfigError("config: 'problem.beta' must be >= 0");

    const std::string pot = reader.get("problem", "potential").value_or("harmonic");
    if (pot == "harmonic") {
        rc.problem.potential = PotentialKind::Harmonic;
        rc.problem.omega = reader.get_real("problem", "omega", 1.0);
    } else if (pot == "harmonic_lattice_1d") {
        if (dim != 1)
            throw ConfigError("config: potential 'harmonic_lattice_1d' requires problem.dim = 1");
        rc.problem.potential = PotentialKind::HarmonicLattice1d;
        rc.problem.lattice_amplitude = reader.get_real("problem", "lattice_amplitude", 25.0);
        rc.problem.lattice_period = reader.get_real("problem", "lattice_period", 4.0);
        if (rc.problem.lattice_period == 0.0)
            throw ConfigError("config: 'problem.lattice_period' must be nonzero");
    } else if (pot == "custom_file") {
        rc.problem.potential = PotentialKind::CustomFile;
        rc.problem.potential_file = reader.require("problem", "potential_file");
    } else {
        throw ConfigError("config: 'problem.potential' must be one of "
                          "harmonic | harmonic_lattice_1d | custom_file (got '" + pot + "')");
    }

    // [solver]
    rc.solver.tau = reader.get_real("solver", "tau", 0.0);
    if (!(rc.solver.tau > 0.0)) throw ConfigError("config: 'solver.tau' must be > 0");
    const std::string stab = reader.get("solver", "stabilizer").value_or("auto");
    if (stab == "auto") {
        rc.solver.stabilizer_auto = true;
    } else if (stab == "fixed") {
        rc.solver.stabilizer_auto = false;
        rc.solver.stabilizer_value = reader.get_real("solver", "stabilizer_value", -1.0);
        if (!(rc.solver.stabilizer_value >= 0.0))
            throw ConfigError("config: 'solver.stabilizer_value' must be >= 0 when fixed");
    } else {
        throw ConfigError("config: 'solver.stabilizer' must be auto or fixed (got '" + stab +
                          "')");
    }
    rc.solver.tol = reader.get_real("solver", "tol", 1e-8);
    if (!(rc.solver.tol > 0.0)) throw ConfigError("config: 'solver.tol' must be > 0");
    rc.solver.max_steps = reader.get_int("solver", "max_steps", 100000);
    if (rc.solver.max_steps < 1) throw ConfigError("config: 'solver.max_steps' must be >= 1");
    rc.solver.record_history = reader.get_bool("solver", "record_history", true);

    const std::string init = reader.get("solver", "initial").value_or("gaussian");
    if (init == "gaussian") {
        rc.initial = InitialKind::Gaussian;
    } else if (init == "exp_neg_v") {
        rc.initial = InitialKind::ExpNegV;
    } else if (init == "file") {
        rc.initial = InitialKind::File;
        rc.initial_file = reader.require("solver", "initial_file");
    } else {
        throw ConfigError("config: 'solver.initial' must be one of "
                          "gaussian | exp_neg_v | file (got '" + init + "')");
    }

    // [outputs]
    rc.outputs.history_csv = reader.get_bool("outputs", "history_csv", true);
    rc.outputs.summary_json = reader.get_bool("outputs", "summary_json", true);
    rc.outputs.state_binary = reader.get_bool("outputs", "state_binary", true);
    rc.outputs.state_csv = reader.get_bool("outputs", "state_csv", false);

    // [study]
    if (reader.has_section("study")) {
        StudyConfig sc;
        const std::string mode = reader.require("study", "mode");
        if (mode == "temporal") sc.mode = StudyMode::Temporal;
        else if (mode == "spatial") sc.mode = StudyMode::Spatial;
        else
            throw ConfigError("config: 'study.mode' must be temporal or spatial (got '" + mode +
                              "')");
        sc.levels = static_cast<int>(reader.get_int("study", "levels", 4));
        if (sc.levels < 3) throw ConfigError("config: 'study.levels' must be >= 3");
        if (sc.mode == StudyMode::Spatial && rc.problem.potential == PotentialKind::CustomFile)
            throw ConfigError("config: spatial studies cannot resample a custom_file potential");
        rc.study = sc;
    }

    // [verify]
    rc.verify.steps = static_cast<int>(reader.get_int("verify", "steps", 200));
    if (rc.verify.steps < 1) throw ConfigError("config: 'verify.steps' must be >= 1");

    reader.reject_unused({"problem", "solver", "outputs", "study", "verify"});
    return rc;
}

GpeProblem build_problem(const ProblemConfig& pc) { return build_problem(pc, pc.n); }

GpeProblem build_problem(const ProblemConfig& pc, const std::array<int, 3>& n_override) {
    const GridSpec spec = GridSpec::make(
        pc.dim, std::span<const int>(n_override.data(), pc.dim),
        std::span<const double>(pc.lo.data(), pc.dim),
        std::span<const double>(pc.hi.data(), pc.dim));
    switch (pc.potential) {
        case PotentialKind::Harmonic:
            return GpeProblem::make(harmonic_potential(spec, pc.omega), pc.beta);
        case PotentialKind::HarmonicLattice1d:
            return GpeProblem::make(
                harmonic_lattice_potential_1d(spec, pc.lattice_amplitude, pc.lattice_period),
                pc.beta);
        case PotentialKind::CustomFile: {
            GridFunction v = load_gpgf(pc.potential_file);
            if (v.spec() != spec)
                throw ConfigError("config: potential file grid does not match [problem] grid");
            return GpeProblem::make(std::move(v), pc.beta);
        }
    }
    throw ConfigError("config: unreachable potential kind");
}

GridFunction build_initial(const RunConfig& rc, const GpeProblem& p) {
    switch (rc.initial) {
        case InitialKind::Gaussian: return initial_gaussian(p.spec());
        case InitialKind::ExpNegV: return initial_exp_neg_v(p);
        case InitialKind::File: {
            GridFunction f = load_gpgf(rc.initial_file);
            if (f.spec() != p.spec())
                throw ConfigError("config: initial state grid does not match [problem] grid");
            return f;
        }
    }
    throw ConfigError("config: unreachable initial kind");
}

}  // namespace gpe
