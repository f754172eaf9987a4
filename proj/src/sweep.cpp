#include "bellrand/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bellrand/quantum.hpp"
#include "bellrand/sdpa_io.hpp"

namespace bellrand {

std::string to_string(NoiseKind k) {
    return k == NoiseKind::white ? "white" : "dephasing";
}

NoiseKind noise_from_string(const std::string& s) {
    if (s == "white") return NoiseKind::white;
    if (s == "dephasing") return NoiseKind::dephasing;
    throw std::invalid_argument("unknown noise kind: " + s);
}

QuantumModel noise_model(NoiseKind kind, double param) {
    return kind == NoiseKind::white ? white_noise_model(param) : dephasing_model(param);
}

Behavior noise_behavior(NoiseKind kind, double param) {
    return behavior_from_model(noise_model(kind, param));
}

std::vector<double> GridSpec::points() const {
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (end < start) throw std::invalid_argument("grid end before start");
    std::vector<double> pts;
    for (int i = 0;; ++i) {
        const double v = start + i * step;
        if (v > end + step * 0.5) break;
        pts.push_back(std::min(v, end));
        if (pts.size() > 100000) throw std::invalid_argument("grid too fine");
    }
    return pts;
}

GridSpec GridSpec::parse(const std::string& text) {
    GridSpec g;
    char c1 = 0, c2 = 0;
    std::istringstream ss(text);
    if (!(ss >> g.start >> c1 >> g.step >> c2 >> g.end) || c1 != ':' || c2 != ':')
        throw std::invalid_argument("grid must be start:step:end");
    return g;
}

SweepRow certify_point(NoiseKind kind, double param, int case_id,
                       std::optional<std::pair<int, int>> settings,
                       CertifiedResult* full) {
    if (!(param >= 0.0 && param <= 1.0))
        throw std::invalid_argument("noise parameter must lie in [0,1]");
    if (case_id < 1 || case_id > 3) throw std::invalid_argument("case must be 1, 2 or 3");
    const Behavior obs = noise_behavior(kind, param);

    SweepRow row;
    row.noise = kind;
    row.param = param;
    row.case_id = case_id;

    CertifiedResult res;
    if (case_id == 3) {
        res = certify_case3_tightened(obs);
        row.settings = "all";
    } else {
        const ProgramMode mode = case_id == 1 ? ProgramMode::case1_chsh_only
                                              : ProgramMode::case2_fixed_full;
        if (settings) {
            const auto [x0, y0] = *settings;
            res = certify(case_id == 1 ? ProgramSpec::case1(obs, x0, y0)
                                       : ProgramSpec::case2(obs, x0, y0));
            row.settings = std::to_string(x0) + "," + std::to_string(y0);
        } else {
            auto [where, best] = best_fixed_settings(mode, obs);
            res = std::move(best);
            row.settings = std::to_string(where.first) + "," + std::to_string(where.second);
        }
    }
    row.chsh = res.chsh_value;
    row.guessing_upper = res.guessing_upper;
    row.hmin_bits = res.hmin_bits;
    row.gap = res.gap;
    row.status = to_string(res.status);
    if (full) *full = std::move(res);
    return row;
}

std::vector<SweepRow> run_sweep(NoiseKind kind, const GridSpec& grid,
                                const std::vector<int>& cases, int jobs) {
    const auto pts = grid.points();
    for (double v : pts)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("grid leaves the unit interval");
    struct Task {
        double param;
        int case_id;
    };
    std::vector<Task> tasks;
    for (double v : pts)
        for (int c : cases) {
            if (c < 1 || c > 3) throw std::invalid_argument("case must be 1, 2 or 3");
            tasks.push_back({v, c});
        }
    std::vector<SweepRow> rows(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                rows[i] = certify_point(kind, tasks[i].param, tasks[i].case_id);
            } catch (const std::exception& ex) {
                SweepRow& r = rows[i];
                r.noise = kind;
                r.param = tasks[i].param;
                r.case_id = tasks[i].case_id;
                r.chsh = std::nan("");
                r.guessing_upper = std::nan("");
                r.hmin_bits = std::nan("");
                r.gap = std::nan("");
                r.status = "failed";
                r.settings = "";
            }
        }
    };
    const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.param != b.param) return a.param < b.param;
        return a.case_id < b.case_id;
    });
    return rows;
}

namespace {

std::string f12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "noise,param,case,chsh,g_upper,hmin_bits,gap,status,settings\n";
    for (const auto& r : rows) {
        os << to_string(r.noise) << "," << f12(r.param) << "," << r.case_id << ","
           << f12(r.chsh) << "," << f12(r.guessing_upper) << "," << f12(r.hmin_bits)
           << "," << f12(r.gap) << "," << r.status << ",\"" << r.settings << "\"\n";
    }
    return os.str();
}

std::string ratio_csv(const std::vector<SweepRow>& rows) {
    std::map<double, std::map<int, const SweepRow*>> by_param;
    for (const auto& r : rows) by_param[r.param][r.case_id] = &r;
    std::ostringstream os;
    os << "noise,param,hmin_case1,hmin_case2,hmin_case3,ratio_case2_to_case1,"
          "ratio_case3_to_case1\n";
    for (const auto& [param, cases] : by_param) {
        const std::string noise =
            to_string(cases.begin()->second->noise);
        os << noise << "," << f12(param);
        std::array<double, 3> hmin{std::nan(""), std::nan(""), std::nan("")};
        for (int c = 1; c <= 3; ++c) {
            auto it = cases.find(c);
            if (it != cases.end()) hmin[c - 1] = it->second->hmin_bits;
            os << ",";
            if (it != cases.end() && std::isfinite(hmin[c - 1])) os << f12(hmin[c - 1]);
        }
        for (int c = 2; c <= 3; ++c) {
            os << ",";
            if (std::isfinite(hmin[0]) && hmin[0] >= 1e-6 && std::isfinite(hmin[c - 1]))
                os << f12(hmin[c - 1] / hmin[0]);
        }
        os << "\n";
    }
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

ProgramSpec export_point(NoiseKind kind, double param, int case_id,
                         std::optional<std::pair<int, int>> settings,
                         const std::string& path) {
    if (!(param >= 0.0 && param <= 1.0))
        throw std::invalid_argument("noise parameter must lie in [0,1]");
    const Behavior obs = noise_behavior(kind, param);
    ProgramSpec spec;
    if (case_id == 3) {
        spec = ProgramSpec::case3(obs);
    } else if (case_id == 1 || case_id == 2) {
        const auto [x0, y0] = settings.value_or(std::pair<int, int>{0, 0});
        spec = case_id == 1 ? ProgramSpec::case1(obs, x0, y0)
                            : ProgramSpec::case2(obs, x0, y0);
    } else {
        throw std::invalid_argument("case must be 1, 2 or 3");
    }
    const auto prog = assemble(spec);
    write_sdpa_file(prog.problem, path);
    return spec;
}

}  // namespace bellrand
