#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bellrand/guessing.hpp"
#include "bellrand/oracle.hpp"
#include "bellrand/sdpa_io.hpp"
#include "bellrand/sweep.hpp"

namespace py = pybind11;
using namespace bellrand;

namespace {

std::optional<std::pair<int, int>> settings_arg(const py::object& s) {
    if (s.is_none()) return std::nullopt;
    const auto t = s.cast<std::pair<int, int>>();
    return t;
}

py::dict result_dict(const SweepRow& row, const CertifiedResult& res) {
    py::dict d;
    d["noise"] = to_string(row.noise);
    d["param"] = row.param;
    d["case"] = row.case_id;
    d["chsh"] = res.chsh_value;
    d["g_upper"] = res.guessing_upper;
    d["hmin_bits"] = res.hmin_bits;
    d["gap"] = res.gap;
    d["status"] = to_string(res.status);
    d["settings"] = row.settings;
    d["dual_coefficients"] = res.certificate.quantity_coeffs;
    d["dual_offset"] = res.certificate.offset;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Randomness-rate certification for noisy two-party Bell experiments";

    m.def(
        "behavior_table",
        [](const std::string& noise, double param) {
            const Behavior b = noise_behavior(noise_from_string(noise), param);
            return b.table;
        },
        py::arg("noise"), py::arg("param"),
        "P(a,b|x,y) table (index ((x*2+y)*2+a)*2+b) of the noisy model");

    m.def(
        "chsh_value",
        [](const std::string& noise, double param) {
            return evaluate_bell(chsh_expression(),
                                 noise_behavior(noise_from_string(noise), param));
        },
        py::arg("noise"), py::arg("param"));

    m.def(
        "is_local",
        [](const std::string& noise, double param) {
            return is_local_2222(noise_behavior(noise_from_string(noise), param)).local;
        },
        py::arg("noise"), py::arg("param"),
        "exact local-polytope membership of the model behavior");

    m.def("monomial_count",
          []() { return MomentStructure::instance().monomial_count(); },
          "number of canonical local-level-2 monomials");

    m.def(
        "certify",
        [](const std::string& noise, double param, int case_id, const py::object& settings) {
            CertifiedResult res;
            SweepRow row;
            {
                py::gil_scoped_release release;
                row = certify_point(noise_from_string(noise), param, case_id,
                                    settings_arg(settings), &res);
            }
            return result_dict(row, res);
        },
        py::arg("noise"), py::arg("param"), py::arg("case"),
        py::arg("settings") = py::none(),
        "certify one point; cases 1-2 optimize the settings unless given");

    m.def(
        "oracle_lower_bound",
        [](const std::string& noise, double param, int case_id, const py::object& settings) {
            const NoiseKind kind = noise_from_string(noise);
            const Behavior obs = noise_behavior(kind, param);
            SettingsDistribution dist = SettingsDistribution::uniform();
            if (case_id != 3) {
                const auto st = settings_arg(settings).value_or(std::pair<int, int>{0, 0});
                dist = SettingsDistribution::point_mass(st.first, st.second);
            }
            py::gil_scoped_release release;
            const auto trivial = ExplicitDecomposition::make({{1.0, obs}}, obs);
            double lower = decomposition_guess_value(trivial, dist);
            const auto d = greedy_local_extraction(obs);
            if (fully_deterministic(d))
                lower = std::max(lower, decomposition_guess_value(d, dist));
            return lower;
        },
        py::arg("noise"), py::arg("param"), py::arg("case"),
        py::arg("settings") = py::none(),
        "explicit-decomposition lower bound on the guessing probability");

    m.def(
        "export_sdpa",
        [](const std::string& noise, double param, int case_id, const py::object& settings,
           const std::string& path) {
            py::gil_scoped_release release;
            export_point(noise_from_string(noise), param, case_id, settings_arg(settings),
                         path);
        },
        py::arg("noise"), py::arg("param"), py::arg("case"), py::arg("settings"),
        py::arg("path"), "write the assembled guessing SDP in SDPA sparse format");

    m.def(
        "sweep",
        [](const std::string& noise, double start, double step, double end,
           const std::vector<int>& cases, int jobs) {
            std::vector<SweepRow> rows;
            {
                py::gil_scoped_release release;
                rows = run_sweep(noise_from_string(noise), GridSpec{start, step, end},
                                 cases, jobs);
            }
            py::list out;
            for (const auto& r : rows) {
                py::dict d;
                d["noise"] = to_string(r.noise);
                d["param"] = r.param;
                d["case"] = r.case_id;
                d["chsh"] = r.chsh;
                d["g_upper"] = r.guessing_upper;
                d["hmin_bits"] = r.hmin_bits;
                d["gap"] = r.gap;
                d["status"] = r.status;
                d["settings"] = r.settings;
                out.append(d);
            }
            return out;
        },
        py::arg("noise"), py::arg("start"), py::arg("step"), py::arg("end"),
        py::arg("cases") = std::vector<int>{1, 2, 3}, py::arg("jobs") = 1);

    m.attr("__version__") = "0.1.0";
}
