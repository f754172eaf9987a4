// Command-line front end: noise sweeps, single-point certification and SDPA
// export for the randomness-rate analysis.
//
// Exit codes: 0 success, 2 usage error, 3 I/O error, 4 solver failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bellrand/oracle.hpp"
#include "bellrand/sweep.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitSolver = 4;

std::optional<std::pair<int, int>> parse_settings(const std::string& text) {
    if (text.empty()) return std::nullopt;
    int x = -1, y = -1;
    char comma = 0;
    std::istringstream ss(text);
    if (!(ss >> x >> comma >> y) || comma != ',' || (x | y) & ~1)
        throw CLI::ValidationError("--settings", "expected x,y with x,y in {0,1}");
    return std::make_pair(x, y);
}

void print_row(const bellrand::SweepRow& row) {
    std::printf("noise=%s param=%.6g case=%d settings=%s\n",
                bellrand::to_string(row.noise).c_str(), row.param, row.case_id,
                row.settings.c_str());
    std::printf("  chsh          = %.12g\n", row.chsh);
    std::printf("  g_upper       = %.12g\n", row.guessing_upper);
    std::printf("  hmin_bits     = %.12g\n", row.hmin_bits);
    std::printf("  gap           = %.3g   status = %s\n", row.gap, row.status.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Device-independent randomness rates for noisy Bell experiments"};
    app.require_subcommand(1);

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "Certify rates over a noise grid");
    std::string sweep_noise = "white";
    std::string sweep_cases = "1,2,3";
    std::string sweep_grid = "0:0.025:1";
    std::string sweep_out = "sweep.csv";
    std::string sweep_ratio_out;
    int sweep_jobs = 1;
    sweep->add_option("--noise", sweep_noise, "white | dephasing")->required();
    sweep->add_option("--cases", sweep_cases, "comma list from {1,2,3}");
    sweep->add_option("--grid", sweep_grid, "start:step:end (params in [0,1])");
    sweep->add_option("--out", sweep_out, "output CSV path")->required();
    sweep->add_option("--ratios-out", sweep_ratio_out,
                      "ratio CSV path (default: <out>.ratios.csv)");
    sweep->add_option("--jobs", sweep_jobs, "concurrent solves")->check(CLI::Range(1, 256));

    // ---- certify ----
    auto* certify = app.add_subcommand("certify", "Certify a single point");
    std::string cert_noise;
    double cert_param = 0.0;
    int cert_case = 2;
    std::string cert_settings;
    bool show_dual = false;
    certify->add_option("--noise", cert_noise, "white | dephasing")->required();
    certify->add_option("--param", cert_param, "noise parameter in [0,1]")->required();
    certify->add_option("--case", cert_case, "1, 2 or 3")->required();
    certify->add_option("--settings", cert_settings,
                        "fixed settings x,y (cases 1-2; default: optimize)");
    certify->add_flag("--show-dual", show_dual, "print the dual Bell expression");

    // ---- export ----
    auto* exported = app.add_subcommand("export", "Write one guessing SDP as SDPA sparse");
    std::string exp_noise;
    double exp_param = 0.0;
    int exp_case = 2;
    std::string exp_settings;
    std::string exp_out;
    bool exp_solve = false;
    exported->add_option("--noise", exp_noise, "white | dephasing")->required();
    exported->add_option("--param", exp_param, "noise parameter in [0,1]")->required();
    exported->add_option("--case", exp_case, "1, 2 or 3")->required();
    exported->add_option("--settings", exp_settings, "fixed settings x,y (cases 1-2)");
    exported->add_option("--out", exp_out, "output .dat-s path")->required();
    exported->add_flag("--solve", exp_solve,
                       "also solve internally and print the objective");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    using namespace bellrand;
    try {
        if (sweep->parsed()) {
            const NoiseKind kind = noise_from_string(sweep_noise);
            const GridSpec grid = GridSpec::parse(sweep_grid);
            std::vector<int> cases;
            {
                std::istringstream ss(sweep_cases);
                std::string tok;
                while (std::getline(ss, tok, ',')) cases.push_back(std::stoi(tok));
                if (cases.empty()) throw std::invalid_argument("no cases given");
            }
            const auto rows = run_sweep(kind, grid, cases, sweep_jobs);
            write_text_file(sweep_out, sweep_csv(rows));
            const std::string rpath =
                sweep_ratio_out.empty() ? sweep_out + ".ratios.csv" : sweep_ratio_out;
            write_text_file(rpath, ratio_csv(rows));
            std::printf("wrote %zu rows to %s (ratios: %s)\n", rows.size(),
                        sweep_out.c_str(), rpath.c_str());
            for (const auto& r : rows)
                if (r.status == "failed") std::fprintf(stderr, "warning: failed row at param=%g case=%d\n", r.param, r.case_id);
            return 0;
        }
        if (certify->parsed()) {
            const NoiseKind kind = noise_from_string(cert_noise);
            CertifiedResult full;
            const SweepRow row =
                certify_point(kind, cert_param, cert_case, parse_settings(cert_settings), &full);
            print_row(row);
            const ProgramSpec spec = [&]() {
                const Behavior obs = noise_behavior(kind, cert_param);
                if (cert_case == 3) return ProgramSpec::case3(obs);
                int x0 = row.settings[0] - '0', y0 = row.settings[2] - '0';
                return cert_case == 1 ? ProgramSpec::case1(obs, x0, y0)
                                      : ProgramSpec::case2(obs, x0, y0);
            }();
            const auto check = verify_certificate(full.certificate, spec);
            std::printf("  certificate   : %s (min eig %.2e, slack %.2e, bound %.12g)\n",
                        check.ok ? "verified" : "FAILED", check.min_eigenvalue,
                        check.residual_slack, check.certified_bound);
            const auto sandwich = sandwich_check(spec, full);
            std::printf("  oracle lower  = %.12g (gap %.3g, %s)\n", sandwich.lower,
                        sandwich.gap, sandwich.ok ? "consistent" : "INCONSISTENT");
            if (show_dual) {
                static const char* names[8] = {"A0", "A1", "B0", "B1",
                                               "A0B0", "A0B1", "A1B0", "A1B1"};
                std::printf("  dual Bell expression (G <= coeffs.q + offset):\n");
                for (int k = 0; k < 8; ++k)
                    std::printf("    %-5s %+.12g\n", names[k],
                                full.certificate.quantity_coeffs[k]);
                std::printf("    mu    %+.12g\n", full.certificate.offset);
            }
            return 0;
        }
        if (exported->parsed()) {
            const NoiseKind kind = noise_from_string(exp_noise);
            const ProgramSpec spec = export_point(kind, exp_param, exp_case,
                                                  parse_settings(exp_settings), exp_out);
            std::printf("wrote %s\n", exp_out.c_str());
            if (exp_solve) {
                const CertifiedResult res = bellrand::certify(spec);
                std::printf("internal objective (guessing_upper) = %.12g\n",
                            res.guessing_upper);
            }
            return 0;
        }
    } catch (const std::invalid_argument& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitUsage;
    } catch (const std::ios_base::failure& ex) {
        std::fprintf(stderr, "i/o error: %s\n", ex.what());
        return kExitIo;
    } catch (const std::runtime_error& ex) {
        const std::string what = ex.what();
        if (what.find("cannot open") != std::string::npos ||
            what.find("write failed") != std::string::npos) {
            std::fprintf(stderr, "i/o error: %s\n", what.c_str());
            return kExitIo;
        }
        std::fprintf(stderr, "solver error: %s\n", what.c_str());
        return kExitSolver;
    }
    return 0;
}
