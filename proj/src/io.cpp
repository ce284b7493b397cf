#include "otoc/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace otoc {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("io: cannot open for writing: " + path);
    return f;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_curve(const std::string& path, const OtocCurve& curve) {
    auto f = open_out(path);
    const auto& m = curve.meta;
    f << "# otoc-curve v1\n";
    f << "# rows = " << m.rows << "\n";
    f << "# cols = " << m.cols << "\n";
    f << "# h = " << format_double(m.h) << "\n";
    f << "# j = " << format_double(m.j) << "\n";
    f << "# v1 = " << pauli_name(m.v1.pauli) << " " << m.v1.site << "\n";
    f << "# v2 = " << pauli_name(m.v2.pauli) << " " << m.v2.site << "\n";
    f << "# initial_kind = " << m.initial_kind << "\n";
    f << "# source = " << m.source << "\n";
    f << "# seed = " << m.seed << "\n";
    f << "# alpha = " << format_double(m.alpha) << "\n";
    f << "# sigma = " << format_double(m.sigma) << "\n";
    f << "# ensemble_size = " << m.ensemble_size << "\n";
    f << "# columns: t re_f im_f err phase_correction\n";
    for (const auto& p : curve.points) {
        f << format_double(p.t) << '\t' << format_double(p.f.real()) << '\t'
          << format_double(p.f.imag()) << '\t' << format_double(p.err) << '\t'
          << format_double(p.phase_correction) << '\n';
    }
    if (!f) throw std::runtime_error("io: write failed: " + path);
}

OtocCurve read_curve(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("io: cannot open curve file: " + path);

    OtocCurve curve;
    std::map<std::string, std::string> meta;
    std::string line;
    bool tagged = false;
    while (std::getline(f, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = trim(line.substr(1));
            if (body.rfind("otoc-curve", 0) == 0) tagged = true;
            const auto eq = body.find('=');
            if (eq != std::string::npos) {
                meta[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
            }
            continue;
        }
        std::istringstream row(line);
        OtocPoint p;
        double re = 0.0, im = 0.0;
        if (!(row >> p.t >> re >> im >> p.err)) {
            throw std::runtime_error("io: malformed curve row in " + path + ": " + line);
        }
        row >> p.phase_correction;  // optional
        p.f = Complex(re, im);
        curve.points.push_back(p);
    }
    if (!tagged) throw std::runtime_error("io: " + path + " is not an otoc-curve file");

    auto get = [&](const char* key) -> std::string {
        auto it = meta.find(key);
        return it == meta.end() ? "" : it->second;
    };
    auto& m = curve.meta;
    if (!get("rows").empty()) m.rows = std::stoi(get("rows"));
    if (!get("cols").empty()) m.cols = std::stoi(get("cols"));
    if (!get("h").empty()) m.h = std::stod(get("h"));
    if (!get("j").empty()) m.j = std::stod(get("j"));
    if (!get("seed").empty()) m.seed = std::stoull(get("seed"));
    if (!get("alpha").empty()) m.alpha = std::stod(get("alpha"));
    if (!get("sigma").empty()) m.sigma = std::stod(get("sigma"));
    if (!get("ensemble_size").empty()) m.ensemble_size = std::stoi(get("ensemble_size"));
    m.initial_kind = get("initial_kind");
    m.source = get("source");
    for (const char* key : {"v1", "v2"}) {
        std::istringstream spec(get(key));
        std::string pauli;
        int site = 0;
        if (spec >> pauli >> site) {
            PauliOp op{pauli_from_name(pauli), site};
            (std::string(key) == "v1" ? m.v1 : m.v2) = op;
        }
    }
    return curve;
}

void write_curve_json(const std::string& path, const OtocCurve& curve) {
    nlohmann::json j;
    const auto& m = curve.meta;
    j["format"] = "otoc-curve";
    j["version"] = 1;
    j["metadata"] = {
        {"rows", m.rows},
        {"cols", m.cols},
        {"h", m.h},
        {"j", m.j},
        {"v1", {{"pauli", std::string(1, pauli_name(m.v1.pauli))}, {"site", m.v1.site}}},
        {"v2", {{"pauli", std::string(1, pauli_name(m.v2.pauli))}, {"site", m.v2.site}}},
        {"initial_kind", m.initial_kind},
        {"source", m.source},
        {"seed", m.seed},
        {"alpha", m.alpha},
        {"sigma", m.sigma},
        {"ensemble_size", m.ensemble_size},
    };
    auto& pts = j["points"] = nlohmann::json::array();
    for (const auto& p : curve.points) {
        pts.push_back({{"t", p.t},
                       {"re_f", p.f.real()},
                       {"im_f", p.f.imag()},
                       {"err", p.err},
                       {"phase_correction", p.phase_correction}});
    }
    auto f = open_out(path);
    f << j.dump(2) << '\n';
}

void write_phase_log(const std::string& path, const PhaseLogBook& book) {
    auto f = open_out(path);
    f << "# otoc-phase-log v1\n";
    f << "# columns: context step t re_E im_E delta_phi accumulated_phi warning\n";
    for (const auto& entry : book.entries) {
        for (const auto& s : entry.log.steps) {
            f << entry.context << '\t' << s.step << '\t' << format_double(s.t) << '\t'
              << format_double(s.energy.real()) << '\t' << format_double(s.energy.imag()) << '\t'
              << format_double(s.delta_phi) << '\t' << format_double(s.accumulated_phi) << '\t'
              << (s.step_size_warning ? 1 : 0) << '\n';
        }
    }
}

void write_plot_series(const std::string& path, const OtocCurve& curve, PlotSeries series) {
    auto f = open_out(path);
    for (const auto& p : curve.points) {
        double v = series == PlotSeries::re ? p.f.real()
                   : series == PlotSeries::im ? p.f.imag()
                                              : p.err;
        f << format_double(p.t) << '\t' << format_double(v) << '\n';
    }
}

}  // namespace otoc
