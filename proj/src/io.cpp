#include "sltc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sltc/numerics.hpp"

namespace sltc::io {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("JSON parse error in " + path + ": " + e.what());
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_number(const std::string& s, const std::string& path, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(path + ":" + std::to_string(line_no) + ": not a number: '" + s + "'");
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ProblemFile load_problem(const std::string& path) {
    const json j = parse_file(path);
    for (const char* key : {"S", "q_samples", "M", "alpha", "beta"}) {
        if (!j.contains(key)) {
            throw ConfigError(path + ": missing required field '" + key + "'");
        }
    }
    const double S = j.at("S").get<double>();
    auto q = j.at("q_samples").get<std::vector<double>>();
    const auto& M = j.at("M");
    if (!M.is_array() || M.size() != 2 || !M[0].is_array() || M[0].size() != 2 ||
        M[1].size() != 2) {
        throw ConfigError(path + ": field 'M' must be a 2x2 array");
    }
    TransferMatrix transfer(M[0][0].get<double>(), M[0][1].get<double>(), M[1][0].get<double>(),
                            M[1][1].get<double>());
    ProblemFile out{Problem(S, std::move(q), transfer),
                    BoundaryAngles(j.at("alpha").get<double>(), j.at("beta").get<double>())};
    if (j.contains("steps_per_side")) {
        out.problem.steps_per_side = j.at("steps_per_side").get<int>();
    }
    return out;
}

std::string problem_to_json(const Problem& problem, const BoundaryAngles& angles) {
    json j;
    j["S"] = problem.half_width();
    j["q_samples"] = problem.q_samples();
    const auto& M = problem.transfer();
    j["M"] = {{M.m11, M.m12}, {M.m21, M.m22}};
    j["alpha"] = angles.alpha;
    j["beta"] = angles.beta;
    return j.dump();
}

void save_problem(const std::string& path, const Problem& problem, const BoundaryAngles& angles) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << problem_to_json(problem, angles) << "\n";
}

std::string config_header(const std::string& resolved_config_json) {
    std::ostringstream os;
    os << "# config: " << resolved_config_json << "\n";
    os << "# config_hash: " << fnv1a64_hex(resolved_config_json) << "\n";
    return os.str();
}

namespace {

// hash previously stamped by config_header, for sidecar files
std::string hash_from_header(const std::string& header_comment) {
    const std::string tag = "# config_hash: ";
    const auto pos = header_comment.find(tag);
    if (pos == std::string::npos) return {};
    const auto end = header_comment.find('\n', pos);
    return header_comment.substr(pos + tag.size(), end - pos - tag.size());
}

}  // namespace

void write_spectrum_csv(const std::string& path, const std::vector<double>& eigenvalues,
                        const std::optional<std::vector<double>>& norming,
                        const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << header_comment;
    out << "n,lambda,a_n\n";
    for (std::size_t n = 0; n < eigenvalues.size(); ++n) {
        out << n << "," << format_double(eigenvalues[n]) << ",";
        if (norming.has_value()) out << format_double((*norming)[n]);
        out << "\n";
    }
}

SpectrumCsv read_spectrum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    SpectrumCsv out;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    bool any_norming = false;
    bool missing_norming = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // "n,lambda[,a_n]"
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() < 2) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected n,lambda[,a_n]");
        }
        out.eigenvalues.push_back(parse_number(fields[1], path, line_no));
        if (fields.size() >= 3 && !fields[2].empty()) {
            if (!out.norming.has_value()) out.norming.emplace();
            out.norming->push_back(parse_number(fields[2], path, line_no));
            any_norming = true;
        } else {
            missing_norming = true;
        }
    }
    if (any_norming && missing_norming) {
        throw ConfigError(path + ": the a_n column must be filled on every row or on none");
    }
    return out;
}

void write_m_probe_csv(const std::string& path, const std::vector<MProbeRow>& rows,
                       const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << header_comment;
    out << "lambda,m_real,m_imag,tail_bound\n";
    for (const auto& r : rows) {
        out << format_double(r.lambda) << "," << format_double(r.m.real()) << ","
            << format_double(r.m.imag()) << "," << format_double(r.tail_bound) << "\n";
    }
}

void write_scattering_csv(const std::string& path, const ScatteringData& data,
                          const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << header_comment;
    out << (data.AB.has_value() ? "xi,Re_R,Im_R,Re_A,Im_A,Re_B,Im_B" : "xi,Re_R,Im_R") << "\n";
    for (std::size_t i = 0; i < data.xi_grid.size(); ++i) {
        out << format_double(data.xi_grid[i]) << "," << format_double(data.R[i].real()) << ","
            << format_double(data.R[i].imag());
        if (data.AB.has_value()) {
            const auto& ab = (*data.AB)[i];
            out << "," << format_double(ab.A.real()) << "," << format_double(ab.A.imag()) << ","
                << format_double(ab.B.real()) << "," << format_double(ab.B.imag());
        }
        out << "\n";
    }
    json sidecar;
    sidecar["bound_states"] = data.bound_states;
    sidecar["S"] = data.half_width;
    const std::string hash = hash_from_header(header_comment);
    if (!hash.empty()) sidecar["config_hash"] = hash;
    std::ofstream side(path + ".json");
    if (!side) throw ConfigError("cannot write file: " + path + ".json");
    side << sidecar.dump() << "\n";
}

ScatteringData read_scattering_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    ScatteringData data;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    bool with_ab = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_csv_line(line);
        if (!header_seen) {
            header_seen = true;
            with_ab = fields.size() >= 7;
            if (with_ab) data.AB.emplace();
            continue;
        }
        if (fields.size() < 3 || (with_ab && fields.size() < 7)) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": malformed row");
        }
        data.xi_grid.push_back(parse_number(fields[0], path, line_no));
        data.R.emplace_back(parse_number(fields[1], path, line_no),
                            parse_number(fields[2], path, line_no));
        if (with_ab) {
            data.AB->push_back({Complex{parse_number(fields[3], path, line_no),
                                        parse_number(fields[4], path, line_no)},
                                Complex{parse_number(fields[5], path, line_no),
                                        parse_number(fields[6], path, line_no)}});
        }
    }
    const std::string sidecar_path = path + ".json";
    std::ifstream side(sidecar_path);
    if (side) {
        try {
            const json sidecar = json::parse(side);
            if (sidecar.contains("bound_states")) {
                data.bound_states = sidecar.at("bound_states").get<std::vector<double>>();
            }
            if (sidecar.contains("S")) data.half_width = sidecar.at("S").get<double>();
        } catch (const json::parse_error& e) {
            throw ConfigError("JSON parse error in " + sidecar_path + ": " + e.what());
        }
    }
    return data;
}

}  // namespace sltc::io
