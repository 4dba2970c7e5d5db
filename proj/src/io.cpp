#include "gpe/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace gpe {

namespace {

static_assert(std::endian::native == std::endian::little,
              "GPGF serialization assumes a little-endian host");

constexpr char kMagic[4] = {'G', 'P', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_f64(std::ostream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

double read_f64(std::istream& in) {
    double v = 0.0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    return out;
}

// Shortest round-trippable decimal form.
std::string fmt(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

}  // namespace

void save_gpgf(const std::string& path, const GridFunction& f) {
    std::ofstream out = open_out(path, std::ios::binary);
    const GridSpec& spec = f.spec();
    out.write(kMagic, 4);
    write_u32(out, kVersion);
    write_u32(out, static_cast<std::uint32_t>(spec.dim()));
    for (int a = 0; a < spec.dim(); ++a) write_u32(out, static_cast<std::uint32_t>(spec.n(a)));
    for (int a = 0; a < spec.dim(); ++a) write_f64(out, spec.lo(a));
    for (int a = 0; a < spec.dim(); ++a) write_f64(out, spec.hi(a));
    for (const Complex& v : f.values()) {
        write_f64(out, v.real());
        write_f64(out, v.imag());
    }
    if (!out) throw ConfigError("write failed: " + path);
}

GridFunction load_gpgf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open for reading: " + path);
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw ConfigError(path + ": not a GPGF file (bad magic)");
    const std::uint32_t version = read_u32(in);
    if (version != kVersion)
        throw ConfigError(path + ": unsupported GPGF version " + std::to_string(version));
    const std::uint32_t dim = read_u32(in);
    if (dim < 1 || dim > 3) throw ConfigError(path + ": invalid dimension");

    std::array<int, 3> n{};
    std::array<double, 3> lo{}, hi{};
    for (std::uint32_t a = 0; a < dim; ++a) n[a] = static_cast<int>(read_u32(in));
    for (std::uint32_t a = 0; a < dim; ++a) lo[a] = read_f64(in);
    for (std::uint32_t a = 0; a < dim; ++a) hi[a] = read_f64(in);
    if (!in) throw ConfigError(path + ": truncated header");

    const GridSpec spec = GridSpec::make(static_cast<int>(dim),
                                         std::span<const int>(n.data(), dim),
                                         std::span<const double>(lo.data(), dim),
                                         std::span<const double>(hi.data(), dim));
    GridFunction f(spec);
    for (auto& v : f.values()) {
        const double re = read_f64(in);
        const double im = read_f64(in);
        v = Complex{re, im};
    }
    if (!in) throw ConfigError(path + ": truncated payload");
    return f;
}

void save_state_csv(const std::string& path, const GridFunction& f) {
    std::ofstream out = open_out(path);
    const GridSpec& spec = f.spec();
    const int dim = spec.dim();
    const char* headers[3] = {"x", "x,y", "x,y,z"};
    out << headers[dim - 1] << ",re,im\n";

    std::array<int, 3> idx{0, 0, 0};
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (int a = 0; a < dim; ++a) out << fmt(spec.coord(a, idx[a])) << ',';
        out << fmt(f[i].real()) << ',' << fmt(f[i].imag()) << '\n';
        for (int a = dim - 1; a >= 0; --a) {
            if (++idx[a] < spec.n(a)) break;
            idx[a] = 0;
        }
    }
    if (!out) throw ConfigError("write failed: " + path);
}

void save_history_csv(const std::string& path, const std::vector<StepDiagnostics>& history) {
    std::ofstream out = open_out(path);
    out << "step,E_h,E_std,lambda,A,norm_drift,ortho_defect,increment\n";
    for (const StepDiagnostics& d : history) {
        out << d.step << ',' << fmt(d.e_h_after) << ',' << fmt(d.e_std_after) << ','
            << fmt(d.lambda) << ',' << fmt(d.stabilizer) << ',' << fmt(d.norm_drift) << ','
            << fmt(d.ortho_defect) << ',' << fmt(d.increment) << '\n';
    }
    if (!out) throw ConfigError("write failed: " + path);
}

void save_energy_plot_script(const std::string& path, const std::string& history_csv) {
    std::ofstream out = open_out(path);
    out << "set datafile separator ','\n"
        << "set xlabel 'step'\n"
        << "set ylabel 'E_h'\n"
        << "set key top right\n"
        << "plot '" << history_csv << "' using 1:2 with lines title 'modified energy', \\\n"
        << "     '" << history_csv << "' using 1:3 with lines title 'standard energy'\n";
    if (!out) throw ConfigError("write failed: " + path);
}

nlohmann::json summary_to_json(const RunSummary& s) {
    return nlohmann::json{
        {"converged", s.converged},
        {"steps", s.steps},
        {"energy_modified", s.energy_modified},
        {"energy_standard", s.energy_standard},
        {"lambda", s.lambda},
        {"gpe_residual", s.gpe_residual},
        {"final_increment", s.final_increment},
    };
}

nlohmann::json study_to_json(const StudyReport& r) {
    nlohmann::json j{
        {"mode", r.mode == StudyMode::Temporal ? "temporal" : "spatial"},
        {"level_values", r.level_values},
        {"level_steps", r.level_steps},
        {"err_l2", r.err_l2},
        {"err_linf", r.err_linf},
        {"order_l2", r.order_l2},
        {"order_linf", r.order_linf},
        {"window", {r.window_lo, r.window_hi}},
        {"degenerate_exact", r.degenerate_exact},
        {"pass", r.pass},
    };
    if (!r.degenerate_exact) {
        j["mean_order_l2"] = r.mean_order_l2;
        j["mean_order_linf"] = r.mean_order_linf;
    }
    return j;
}

void save_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw ConfigError("write failed: " + path);
}

void save_study_csv(const std::string& path, const StudyReport& r) {
    std::ofstream out = open_out(path);
    out << "level,value,err_l2,err_linf,order_l2,order_linf\n";
    for (std::size_t i = 0; i < r.level_values.size(); ++i) {
        out << i << ',' << fmt(r.level_values[i]) << ',';
        if (i < r.err_l2.size()) out << fmt(r.err_l2[i]) << ',' << fmt(r.err_linf[i]);
        else out << ',';
        out << ',';
        if (i < r.order_l2.size()) out << fmt(r.order_l2[i]) << ',' << fmt(r.order_linf[i]);
        else out << ',';
        out << '\n';
    }
    if (!out) throw ConfigError("write failed: " + path);
}

void save_study_plot_script(const std::string& path, const std::string& study_csv,
                            const StudyReport& r) {
    const char* xlabel = r.mode == StudyMode::Temporal ? "tau" : "h";
    std::ofstream out = open_out(path);
    out << "set datafile separator ','\n"
        << "set logscale xy\n"
        << "set xlabel '" << xlabel << "'\n"
        << "set ylabel 'error vs next-finer reference'\n"
        << "set key bottom right\n"
        << "plot '" << study_csv << "' using 2:3 with linespoints title 'l2', \\\n"
        << "     '" << study_csv << "' using 2:4 with linespoints title 'linf'\n";
    if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace gpe
