#ifndef BELLRAND_SWEEP_HPP
#define BELLRAND_SWEEP_HPP

#include <optional>
#include <string>
#include <vector>

#include "bellrand/guessing.hpp"

namespace bellrand {

enum class NoiseKind { white, dephasing };

std::string to_string(NoiseKind k);
NoiseKind noise_from_string(const std::string& s);  // throws on unknown

Behavior noise_behavior(NoiseKind kind, double param);
QuantumModel noise_model(NoiseKind kind, double param);

/// One certification outcome inside a sweep.
struct SweepRow {
    NoiseKind noise = NoiseKind::white;
    double param = 0.0;
    int case_id = 0;
    double chsh = 0.0;
    double guessing_upper = 1.0;
    double hmin_bits = 0.0;
    double gap = 0.0;
    std::string status;
    std::string settings;  // "x,y" for cases 1-2, "all" for case 3
};

struct GridSpec {
    double start = 0.0;
    double step = 0.025;
    double end = 1.0;

    std::vector<double> points() const;  // inclusive of end (within step/2)
    static GridSpec parse(const std::string& text);  // "start:step:end"
};

/// Certify one point. Cases 1-2 without explicit settings run
/// best_fixed_settings; case 3 ignores the settings argument.
SweepRow certify_point(NoiseKind kind, double param, int case_id,
                       std::optional<std::pair<int, int>> settings = std::nullopt,
                       CertifiedResult* full = nullptr);

/// One row per (param, case), cases 1-2 at their best fixed settings.
/// Per-row failures are recorded in the status column and the sweep
/// continues. Rows come back sorted by (param, case) regardless of the
/// number of jobs.
std::vector<SweepRow> run_sweep(NoiseKind kind, const GridSpec& grid,
                                const std::vector<int>& cases, int jobs = 1);

/// Fixed CSV layout: noise,param,case,chsh,g_upper,hmin_bits,gap,status,settings
/// with floats at 12 significant digits, header always present.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Companion ratio table mirroring the figure insets: per param, hmin of
/// each case and the case2/case1, case3/case1 ratios; ratio cells are empty
/// where the case-1 rate is below 1e-6.
std::string ratio_csv(const std::vector<SweepRow>& rows);

void write_text_file(const std::string& path, const std::string& content);

/// Assemble the guessing program for one point and write it in SDPA sparse
/// format. Returns the assembled spec for further use.
ProgramSpec export_point(NoiseKind kind, double param, int case_id,
                         std::optional<std::pair<int, int>> settings,
                         const std::string& path);

}  // namespace bellrand

#endif
