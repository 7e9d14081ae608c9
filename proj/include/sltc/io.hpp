#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sltc/problem.hpp"
#include "sltc/scattering.hpp"
#include "sltc/spectrum.hpp"
#include "sltc/types.hpp"

namespace sltc::io {

// Problem definition file: JSON object
//   {"S": ..., "q_samples": [...], "M": [[m11,m12],[m21,m22]],
//    "alpha": ..., "beta": ...}
// All angles in radians.
struct ProblemFile {
    Problem problem;
    BoundaryAngles angles;
};

ProblemFile load_problem(const std::string& path);
std::string problem_to_json(const Problem& problem, const BoundaryAngles& angles);
void save_problem(const std::string& path, const Problem& problem, const BoundaryAngles& angles);

// Leading comment block for every emitted file: the resolved configuration
// as canonical JSON plus its hash.  Consumers skip lines starting with '#'.
std::string config_header(const std::string& resolved_config_json);

// Spectra CSV: header "n,lambda,a_n"; the a_n column stays empty when no
// norming constants were computed.
void write_spectrum_csv(const std::string& path, const std::vector<double>& eigenvalues,
                        const std::optional<std::vector<double>>& norming,
                        const std::string& header_comment);

struct SpectrumCsv {
    std::vector<double> eigenvalues;
    std::optional<std::vector<double>> norming;
};

SpectrumCsv read_spectrum_csv(const std::string& path);

// m-probe CSV: "lambda,m_real,m_imag,tail_bound".
struct MProbeRow {
    double lambda;
    Complex m;
    double tail_bound;
};

void write_m_probe_csv(const std::string& path, const std::vector<MProbeRow>& rows,
                       const std::string& header_comment);

// Scattering CSV: "xi,Re_R,Im_R[,Re_A,Im_A,Re_B,Im_B]" with a JSON sidecar
// (same path + ".json") holding {"bound_states": [...], "S": ...}.
void write_scattering_csv(const std::string& path, const ScatteringData& data,
                          const std::string& header_comment);
ScatteringData read_scattering_csv(const std::string& path);

// Deterministic shortest-roundtrip decimal formatting.
std::string format_double(double v);

}  // namespace sltc::io
