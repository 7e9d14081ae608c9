#include <complex>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sltc/asymptotics.hpp"
#include "sltc/inverse.hpp"
#include "sltc/io.hpp"
#include "sltc/numerics.hpp"
#include "sltc/scattering.hpp"
#include "sltc/spectrum.hpp"

namespace {

using nlohmann::json;
using namespace sltc;

// "--grid a:b:n" (n linear points) or "--grid v1,v2,..."
std::vector<double> parse_grid(const std::string& spec) {
    if (spec.empty()) throw ConfigError("empty grid specification");
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double a = 0.0;
        double b = 0.0;
        int n = 0;
        if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3 || n < 1) {
            throw ConfigError("grid must be 'start:stop:count' or a comma list");
        }
        for (int i = 0; i < n; ++i) {
            out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
        }
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("grid entry is not a number: '" + tok + "'");
        }
    }
    return out;
}

struct CommonArgs {
    std::string problem_path;
    std::optional<double> alpha;
    std::optional<double> beta;
    int n_max = 8;
    std::size_t truncation = 2000;
    int steps = 0;
    std::string grid;
    std::string out_path;
    double tolerance = 0.0;
};

io::ProblemFile load_with_overrides(const CommonArgs& args) {
    if (args.problem_path.empty()) throw ConfigError("--problem is required");
    io::ProblemFile pf = io::load_problem(args.problem_path);
    if (args.alpha) pf.angles = BoundaryAngles(*args.alpha, pf.angles.beta);
    if (args.beta) pf.angles = BoundaryAngles(pf.angles.alpha, *args.beta);
    if (args.steps > 0) pf.problem.steps_per_side = args.steps;
    return pf;
}

void write_or_stdout(const std::string& path, const std::function<void(std::ostream&)>& emit) {
    if (path.empty()) {
        emit(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path);
    emit(out);
}

json base_config(const char* subcommand, const CommonArgs& args) {
    json cfg;
    cfg["subcommand"] = subcommand;
    if (!args.problem_path.empty()) cfg["problem"] = args.problem_path;
    if (args.alpha) cfg["alpha"] = *args.alpha;
    if (args.beta) cfg["beta"] = *args.beta;
    return cfg;
}

int run_forward(const CommonArgs& args, bool with_norming) {
    io::ProblemFile pf = load_with_overrides(args);
    SpectrumOptions opts;
    opts.with_norming = with_norming;
    const SpectralDataset ds = compute_spectrum(pf.problem, pf.angles, args.n_max, opts);
    json cfg = base_config("forward-spectrum", args);
    cfg["alpha"] = pf.angles.alpha;
    cfg["beta"] = pf.angles.beta;
    cfg["n_max"] = args.n_max;
    cfg["steps_per_side"] = pf.problem.steps_per_side;
    cfg["norming"] = with_norming;
    const std::string header = io::config_header(cfg.dump());
    if (args.out_path.empty()) {
        std::cout << header << "n,lambda,a_n\n";
        for (std::size_t n = 0; n < ds.eigenvalues.size(); ++n) {
            std::cout << n << "," << io::format_double(ds.eigenvalues[n]) << ",";
            if (ds.norming_constants) std::cout << io::format_double((*ds.norming_constants)[n]);
            std::cout << "\n";
        }
    } else {
        io::write_spectrum_csv(args.out_path, ds.eigenvalues, ds.norming_constants, header);
    }
    return 0;
}

int run_m_eval(const CommonArgs& args) {
    io::ProblemFile pf = load_with_overrides(args);
    const auto grid = parse_grid(args.grid);
    std::vector<io::MProbeRow> rows(grid.size());
    parallel_for_index(grid.size(), [&](std::size_t i) {
        rows[i] = {grid[i], weyl_m(pf.problem, pf.angles, Complex{grid[i], 0.0}), 0.0};
    });
    json cfg = base_config("m-eval", args);
    cfg["alpha"] = pf.angles.alpha;
    cfg["beta"] = pf.angles.beta;
    cfg["grid"] = args.grid;
    cfg["steps_per_side"] = pf.problem.steps_per_side;
    const std::string header = io::config_header(cfg.dump());
    write_or_stdout(args.out_path, [&](std::ostream& os) {
        os << header << "lambda,m_real,m_imag,tail_bound\n";
        for (const auto& r : rows) {
            os << io::format_double(r.lambda) << "," << io::format_double(r.m.real()) << ","
               << io::format_double(r.m.imag()) << "," << io::format_double(r.tail_bound) << "\n";
        }
    });
    return 0;
}

int run_invert_two_spectra(const std::string& lambda_csv, const std::string& mu_csv,
                           const CommonArgs& args, double alpha_prime) {
    TwoSpectraInput input;
    input.lambdas = io::read_spectrum_csv(lambda_csv).eigenvalues;
    input.mus = io::read_spectrum_csv(mu_csv).eigenvalues;
    input.alpha = args.alpha.value_or(0.0);
    input.alpha_prime = alpha_prime;
    input.truncation = args.truncation;
    input.validate();
    if (input.lambdas.size() < input.truncation) {
        input.lambdas = extend_spectrum(input.lambdas, input.truncation);
    }
    if (input.mus.size() < input.truncation) {
        input.mus = extend_spectrum(input.mus, input.truncation);
    }
    const TwoSpectraReconstruction rec(input);
    const auto grid = parse_grid(args.grid.empty() ? "-1,-2,-5,-10,-20" : args.grid);
    std::vector<io::MProbeRow> rows;
    rows.reserve(grid.size());
    for (double l : grid) {
        const MEval ev = rec.m(Complex{l, 0.0});
        rows.push_back({l, ev.value, ev.tail_bound});
    }
    json cfg;
    cfg["subcommand"] = "invert-two-spectra";
    cfg["lambda_spectrum"] = lambda_csv;
    cfg["mu_spectrum"] = mu_csv;
    cfg["alpha"] = input.alpha;
    cfg["alpha_prime"] = input.alpha_prime;
    cfg["truncation"] = input.truncation;
    cfg["C"] = rec.C();
    cfg["C_error"] = rec.C_error();
    const std::string header = io::config_header(cfg.dump());
    write_or_stdout(args.out_path, [&](std::ostream& os) {
        os << header << "lambda,m_real,m_imag,tail_bound\n";
        for (const auto& r : rows) {
            os << io::format_double(r.lambda) << "," << io::format_double(r.m.real()) << ","
               << io::format_double(r.m.imag()) << "," << io::format_double(r.tail_bound) << "\n";
        }
    });
    std::cerr << "C = " << io::format_double(rec.C()) << " +- " << io::format_double(rec.C_error())
              << "\n";
    return 0;
}

int run_invert_norming(const std::string& spectrum_csv, const CommonArgs& args,
                       std::optional<double> m0) {
    const io::SpectrumCsv data = io::read_spectrum_csv(spectrum_csv);
    if (!data.norming.has_value()) {
        throw ConfigError("norming constants required: " + spectrum_csv +
                          " has no a_n column");
    }
    MittagLefflerModel model;
    model.eigenvalues = data.eigenvalues;
    model.norming_constants = *data.norming;
    model.alpha = args.alpha.value_or(M_PI / 2.0);
    model.m_at_zero = m0;
    model.truncation = args.truncation;
    model.validate();
    const auto grid = parse_grid(args.grid.empty() ? "-1,-2,-5,-10,-20" : args.grid);
    std::vector<io::MProbeRow> rows;
    rows.reserve(grid.size());
    for (double l : grid) {
        const MEval ev = m_from_norming(model, Complex{l, 0.0});
        rows.push_back({l, ev.value, ev.tail_bound});
    }
    json cfg;
    cfg["subcommand"] = "invert-norming";
    cfg["spectrum"] = spectrum_csv;
    cfg["alpha"] = model.alpha;
    cfg["truncation"] = model.truncation;
    if (m0) cfg["m0"] = *m0;
    const std::string header = io::config_header(cfg.dump());
    write_or_stdout(args.out_path, [&](std::ostream& os) {
        os << header << "lambda,m_real,m_imag,tail_bound\n";
        for (const auto& r : rows) {
            os << io::format_double(r.lambda) << "," << io::format_double(r.m.real()) << ","
               << io::format_double(r.m.imag()) << "," << io::format_double(r.tail_bound) << "\n";
        }
    });
    return 0;
}

int run_scatter_forward(const CommonArgs& args) {
    io::ProblemFile pf = load_with_overrides(args);
    const auto grid = parse_grid(args.grid.empty() ? "0.25:10:40" : args.grid);
    const ScatteringData data = reflection(pf.problem, grid);
    json cfg = base_config("scatter-forward", args);
    cfg["grid"] = args.grid;
    cfg["steps_per_side"] = pf.problem.steps_per_side;
    const std::string header = io::config_header(cfg.dump());
    if (args.out_path.empty()) throw ConfigError("--out is required for scatter-forward");
    io::write_scattering_csv(args.out_path, data, header);
    return 0;
}

int run_scatter_recover(const std::string& scattering_csv, const CommonArgs& args,
                        bool phase_retrieval) {
    ScatteringData data = io::read_scattering_csv(scattering_csv);
    const double alpha = args.alpha.value_or(M_PI / 2.0);
    if (!data.AB.has_value()) {
        if (!phase_retrieval) {
            throw ConfigError("insufficient data: no A/B columns in " + scattering_csv +
                              " (pass --phase-retrieval to reconstruct A's phase from |R|; "
                              "experimental, no bound states)");
        }
        const PhaseRetrievalResult pr = retrieve_AB_from_reflection(data);
        data.AB = pr.AB;
        std::cerr << "phase retrieval quadrature error estimate: "
                  << io::format_double(pr.quadrature_error) << "\n";
    }
    const auto recovered = recover_W_at_S(data, alpha);
    json cfg;
    cfg["subcommand"] = "scatter-recover";
    cfg["scattering"] = scattering_csv;
    cfg["alpha"] = alpha;
    cfg["phase_retrieval"] = phase_retrieval;
    const std::string header = io::config_header(cfg.dump());
    write_or_stdout(args.out_path, [&](std::ostream& os) {
        os << header
           << "xi,Re_w1,Im_w1,Re_w2,Im_w2,Re_dw1,Im_dw1,Re_dw2,Im_dw2\n";
        for (std::size_t i = 0; i < recovered.size(); ++i) {
            const auto& w = recovered[i];
            os << io::format_double(data.xi_grid[i]);
            for (Complex v : {w.w1, w.w2, w.dw1, w.dw2}) {
                os << "," << io::format_double(v.real()) << "," << io::format_double(v.imag());
            }
            os << "\n";
        }
    });
    return 0;
}

int run_round_trip(const CommonArgs& args) {
    io::ProblemFile pf = load_with_overrides(args);
    const int n_max = args.n_max;
    const double tolerance = args.tolerance > 0.0 ? args.tolerance : 1e-6;

    SpectrumOptions with_norming;
    with_norming.with_norming = true;
    const BoundaryAngles nn(M_PI / 2.0, M_PI / 2.0);
    const BoundaryAngles nd(M_PI / 2.0, M_PI);
    const SpectralDataset direct_nn = compute_spectrum(pf.problem, nn, n_max, with_norming);
    const SpectralDataset direct_nd = compute_spectrum(pf.problem, nd, n_max);

    const ForwardScatteringModel model(pf.problem);
    const NeumannData rec = neumann_data_from_scattering(model, pf.problem.transfer(), n_max);

    double max_dev_nn = 0.0;
    double max_dev_nd = 0.0;
    double max_dev_a = 0.0;
    for (int i = 0; i < n_max; ++i) {
        max_dev_nn = std::max(max_dev_nn, std::abs(rec.nn_eigenvalues[i] -
                                                   direct_nn.eigenvalues[i]));
        max_dev_nd = std::max(max_dev_nd, std::abs(rec.nd_eigenvalues[i] -
                                                   direct_nd.eigenvalues[i]));
        max_dev_a = std::max(max_dev_a, std::abs(rec.nn_norming[i] -
                                                 (*direct_nn.norming_constants)[i]));
    }

    json cfg = base_config("round-trip", args);
    cfg["n_max"] = n_max;
    cfg["tolerance"] = tolerance;
    cfg["steps_per_side"] = pf.problem.steps_per_side;
    const std::string header = io::config_header(cfg.dump());
    write_or_stdout(args.out_path, [&](std::ostream& os) {
        os << header << "n,nn_direct,nn_recovered,nd_direct,nd_recovered,a_direct,a_recovered\n";
        for (int i = 0; i < n_max; ++i) {
            os << i << "," << io::format_double(direct_nn.eigenvalues[i]) << ","
               << io::format_double(rec.nn_eigenvalues[i]) << ","
               << io::format_double(direct_nd.eigenvalues[i]) << ","
               << io::format_double(rec.nd_eigenvalues[i]) << ","
               << io::format_double((*direct_nn.norming_constants)[i]) << ","
               << io::format_double(rec.nn_norming[i]) << "\n";
        }
    });
    std::cerr << "max |NN deviation| = " << io::format_double(max_dev_nn) << "\n"
              << "max |ND deviation| = " << io::format_double(max_dev_nd) << "\n"
              << "max |a_n deviation| = " << io::format_double(max_dev_a) << "\n";
    if (max_dev_nn > tolerance || max_dev_nd > tolerance || max_dev_a > tolerance) {
        std::cerr << "round trip exceeded tolerance " << tolerance << "\n";
        return 1;
    }
    return 0;
}

int run_check_asymptotics(const CommonArgs& args) {
    io::ProblemFile pf = load_with_overrides(args);
    const auto ks = parse_grid(args.grid.empty() ? "10,20,40,80" : args.grid);
    json cfg = base_config("check-asymptotics", args);
    cfg["alpha"] = pf.angles.alpha;
    cfg["beta"] = pf.angles.beta;
    cfg["grid"] = args.grid;
    const std::string header = io::config_header(cfg.dump());
    write_or_stdout(args.out_path, [&](std::ostream& os) {
        os << header << "k,exact,leading,ratio\n";
        for (double k : ks) {
            const Complex lambda{-k * k, 0.0};
            const double exact = characteristic(pf.problem, pf.angles, lambda).real();
            const double leading =
                delta_leading(pf.problem.half_width(), pf.problem.transfer(), pf.angles, lambda)
                    .real();
            os << io::format_double(k) << "," << io::format_double(exact) << ","
               << io::format_double(leading) << "," << io::format_double(exact / leading) << "\n";
        }
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sturm-Liouville spectra, m-functions and scattering with an interior "
                 "transfer condition"};
    app.require_subcommand(1);

    CommonArgs args;
    double alpha_prime = M_PI / 2.0;
    std::optional<double> m0;
    bool no_norming = false;
    bool phase_retrieval = false;
    std::string lambda_csv, mu_csv, spectrum_csv, scattering_csv;

    auto add_common = [&](CLI::App* cmd, bool needs_problem) {
        if (needs_problem) cmd->add_option("--problem", args.problem_path, "problem JSON file");
        cmd->add_option("--alpha", args.alpha, "boundary angle at -S (radians)");
        cmd->add_option("--beta", args.beta, "boundary angle at S (radians)");
        cmd->add_option("--n-max", args.n_max, "number of eigenvalues");
        cmd->add_option("--truncation", args.truncation, "series/product truncation N");
        cmd->add_option("--steps", args.steps, "integration steps per half-interval");
        cmd->add_option("--grid", args.grid, "probe grid: 'start:stop:count' or comma list");
        cmd->add_option("--out", args.out_path, "output file (stdout when omitted)");
        cmd->add_option("--tolerance", args.tolerance, "comparison tolerance override");
    };

    auto* forward = app.add_subcommand("forward-spectrum", "eigenvalues and norming constants");
    add_common(forward, true);
    forward->add_flag("--no-norming", no_norming, "skip the norming-constant column");

    auto* meval = app.add_subcommand("m-eval", "m-function on a lambda grid");
    add_common(meval, true);

    auto* i2 = app.add_subcommand("invert-two-spectra",
                                  "reconstruct m from two spectra (Hadamard quotient)");
    i2->add_option("lambda_csv", lambda_csv, "spectrum for alpha")->required();
    i2->add_option("mu_csv", mu_csv, "spectrum for alpha'")->required();
    i2->add_option("--alpha-prime", alpha_prime, "boundary angle of the second spectrum");
    add_common(i2, false);

    auto* inorm = app.add_subcommand("invert-norming",
                                     "reconstruct m from one spectrum plus norming constants");
    inorm->add_option("spectrum_csv", spectrum_csv, "CSV with n,lambda,a_n")->required();
    inorm->add_option("--m0", m0, "constant term m(0) (required for alpha = 0)");
    add_common(inorm, false);

    auto* sf = app.add_subcommand("scatter-forward", "reflection coefficient and A/B samples");
    add_common(sf, true);

    auto* sr = app.add_subcommand("scatter-recover",
                                  "recover W(S, xi) from scattering coefficients");
    sr->add_option("scattering_csv", scattering_csv, "scattering CSV (with sidecar)")->required();
    sr->add_flag("--phase-retrieval", phase_retrieval,
                 "reconstruct A's phase from |R| (experimental, no bound states)");
    add_common(sr, false);

    auto* rt = app.add_subcommand("round-trip",
                                  "forward -> scattering -> recovered NN/ND data comparison");
    add_common(rt, true);

    auto* ca = app.add_subcommand("check-asymptotics",
                                  "characteristic function against its leading form");
    add_common(ca, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (forward->parsed()) return run_forward(args, !no_norming);
        if (meval->parsed()) return run_m_eval(args);
        if (i2->parsed()) return run_invert_two_spectra(lambda_csv, mu_csv, args, alpha_prime);
        if (inorm->parsed()) return run_invert_norming(spectrum_csv, args, m0);
        if (sf->parsed()) return run_scatter_forward(args);
        if (sr->parsed()) return run_scatter_recover(scattering_csv, args, phase_retrieval);
        if (rt->parsed()) return run_round_trip(args);
        if (ca->parsed()) return run_check_asymptotics(args);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
