#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bellrand/guessing.hpp"
#include "bellrand/oracle.hpp"
#include "bellrand/sweep.hpp"

using namespace bellrand;

// reference values computed with an independent convex-optimization stack
// (moment formulation solved by a separate interior-point implementation)
namespace oracle_values {
constexpr double white_case1_V090 = 0.7697319807011689;
constexpr double white_case2_V080 = 0.8981674966833014;
constexpr double white_case2_V090 = 0.7461756838255204;
constexpr double deph_case1_p060 = 0.8809443890759787;
constexpr double deph_case2_p060_s00 = 0.8679427116654163;
constexpr double deph_case2_p060_s10 = 0.8258515055666986;
constexpr double deph_case3_p060 = 0.7891602401041428;
}  // namespace oracle_values

TEST_CASE("strategy enumeration") {
    const Behavior obs = noise_behavior(NoiseKind::white, 0.9);
    CHECK(enumerate_strategies(ProgramSpec::case1(obs, 0, 0)).size() == 4);
    CHECK(enumerate_strategies(ProgramSpec::case2(obs, 1, 1)).size() == 4);
    const auto s3 = enumerate_strategies(ProgramSpec::case3(obs));
    CHECK(s3.size() == 256);
    // lexicographic: first strategy guesses (0,0) everywhere, last (1,1)
    for (int s = 0; s < 4; ++s) {
        CHECK(s3.front().guess[s] == 0);
        CHECK(s3.back().guess[s] == 3);
    }
    // fixed-settings strategies leave other settings unset
    const auto s2 = enumerate_strategies(ProgramSpec::case2(obs, 1, 0));
    CHECK(s2[2].guess[2] == 2);
    CHECK(s2[2].guess[0] == -1);
}

TEST_CASE("spec validation") {
    const Behavior obs = noise_behavior(NoiseKind::white, 0.9);
    ProgramSpec bad = ProgramSpec::case2(obs, 0, 0);
    bad.fixed_settings.reset();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    ProgramSpec bad3 = ProgramSpec::case3(obs);
    bad3.settings_distribution = SettingsDistribution::point_mass(0, 0);
    CHECK_THROWS_AS(bad3.validate(), std::invalid_argument);
}

TEST_CASE("assembled program shape") {
    const Behavior obs = noise_behavior(NoiseKind::white, 0.9);
    const auto p2 = assemble(ProgramSpec::case2(obs, 0, 0));
    CHECK(p2.problem.blocks.size() == 4);
    CHECK(p2.problem.equalities.size() == 9);
    const auto p1 = assemble(ProgramSpec::case1(obs, 0, 0));
    CHECK(p1.problem.blocks.size() == 4);
    CHECK(p1.problem.equalities.size() == 2);
}

TEST_CASE("even split of the model moments is feasible") {
    const auto& ms = MomentStructure::instance();
    const Behavior obs = noise_behavior(NoiseKind::white, 0.7);
    const auto prog = assemble(ProgramSpec::case2(obs, 0, 0));
    const auto mom = ms.model_moments(white_noise_model(0.7));
    const int K = ms.monomial_count();
    std::vector<double> y(prog.problem.num_vars);
    for (int e = 0; e < 4; ++e)
        for (int i = 0; i < K; ++i) y[e * K + i] = 0.25 * mom[i];
    for (const auto& eq : prog.problem.equalities) {
        double s = 0.0;
        for (const auto& [var, coeff] : eq.row) s += coeff * y[var];
        CHECK(s == doctest::Approx(eq.rhs).epsilon(1e-10));
    }
}

TEST_CASE("certify matches the independent reference values") {
    const Behavior w09 = noise_behavior(NoiseKind::white, 0.9);
    SUBCASE("case 1 white V=0.9") {
        const auto r = certify(ProgramSpec::case1(w09, 0, 0));
        CHECK(r.guessing_upper ==
              doctest::Approx(oracle_values::white_case1_V090).epsilon(2e-6));
        CHECK(r.hmin_bits == doctest::Approx(-std::log2(r.guessing_upper)).epsilon(1e-12));
        CHECK(r.status == SolveStatus::optimal);
    }
    SUBCASE("case 2 white V=0.9") {
        const auto r = certify(ProgramSpec::case2(w09, 0, 0));
        CHECK(r.guessing_upper ==
              doctest::Approx(oracle_values::white_case2_V090).epsilon(2e-6));
    }
    SUBCASE("case 2 white V=0.8") {
        const auto r = certify(ProgramSpec::case2(noise_behavior(NoiseKind::white, 0.8), 0, 0));
        CHECK(r.guessing_upper ==
              doctest::Approx(oracle_values::white_case2_V080).epsilon(2e-6));
    }
    SUBCASE("dephasing p=0.6, case 1 and both case-2 settings") {
        const Behavior d06 = noise_behavior(NoiseKind::dephasing, 0.6);
        const auto r1 = certify(ProgramSpec::case1(d06, 0, 0));
        CHECK(r1.guessing_upper ==
              doctest::Approx(oracle_values::deph_case1_p060).epsilon(2e-6));
        const auto r00 = certify(ProgramSpec::case2(d06, 0, 0));
        CHECK(r00.guessing_upper ==
              doctest::Approx(oracle_values::deph_case2_p060_s00).epsilon(2e-6));
        const auto r10 = certify(ProgramSpec::case2(d06, 1, 0));
        CHECK(r10.guessing_upper ==
              doctest::Approx(oracle_values::deph_case2_p060_s10).epsilon(2e-6));
    }
}

TEST_CASE("extremal point: upper bound meets the trivial lower bound") {
    const Behavior w1 = noise_behavior(NoiseKind::white, 1.0);
    const auto r = certify(ProgramSpec::case2(w1, 0, 0));
    const double target = (2.0 + std::sqrt(2.0)) / 8.0;
    CHECK(std::abs(r.guessing_upper - target) <= 1e-4);
    CHECK(r.guessing_upper >= target - 1e-9);  // it is an upper bound
    CHECK(r.hmin_bits == doctest::Approx(1.2284).epsilon(1e-3));
}

TEST_CASE("local behavior certifies nothing") {
    const Behavior w05 = noise_behavior(NoiseKind::white, 0.5);
    const auto r = certify(ProgramSpec::case2(w05, 0, 0));
    CHECK(r.hmin_bits <= 1e-4);
    CHECK(r.guessing_upper == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("case ordering at dephasing p=0.6") {
    const Behavior d06 = noise_behavior(NoiseKind::dephasing, 0.6);
    auto [w1, r1] = best_fixed_settings(ProgramMode::case1_chsh_only, d06);
    auto [w2, r2] = best_fixed_settings(ProgramMode::case2_fixed_full, d06);
    const auto r3 = certify(ProgramSpec::case3(d06));
    CHECK(r3.guessing_upper ==
          doctest::Approx(oracle_values::deph_case3_p060).epsilon(5e-6));
    CHECK(r3.hmin_bits >= r2.hmin_bits - 1e-6);
    CHECK(r2.hmin_bits >= r1.hmin_bits - 1e-6);
}

TEST_CASE("best_fixed_settings") {
    SUBCASE("white noise ties resolve to (0,0)") {
        const Behavior w08 = noise_behavior(NoiseKind::white, 0.8);
        auto [where, r] = best_fixed_settings(ProgramMode::case2_fixed_full, w08);
        CHECK(where.first == 0);
        CHECK(where.second == 0);
        // all four settings agree for the isotropic model
        for (int x0 = 0; x0 < 2; ++x0)
            for (int y0 = 0; y0 < 2; ++y0) {
                const auto ri = certify(ProgramSpec::case2(w08, x0, y0));
                CHECK(std::abs(ri.hmin_bits - r.hmin_bits) < 1e-6);
            }
    }
    SUBCASE("dephasing picks the better setting pair") {
        const Behavior d06 = noise_behavior(NoiseKind::dephasing, 0.6);
        auto [where, r] = best_fixed_settings(ProgramMode::case2_fixed_full, d06);
        CHECK(r.guessing_upper ==
              doctest::Approx(oracle_values::deph_case2_p060_s10).epsilon(5e-6));
        CHECK(where.first == 1);  // x0 = 1 settings win for dephasing noise
        // consistency with the manual run
        const auto manual = certify(ProgramSpec::case2(d06, where.first, where.second));
        CHECK(manual.guessing_upper == doctest::Approx(r.guessing_upper).epsilon(1e-9));
    }
}

TEST_CASE("dual certificate structure") {
    SUBCASE("case 2 white: symmetric correlation expression") {
        const auto r = certify(ProgramSpec::case2(noise_behavior(NoiseKind::white, 0.9), 0, 0));
        const auto& c = r.certificate.quantity_coeffs;
        CHECK(std::abs(c[5] - c[6]) <= 1e-4);  // c(A0B1) == c(A1B0)
        for (int k = 0; k < 4; ++k) CHECK(std::abs(c[k]) <= 1e-4);  // no marginals
    }
    SUBCASE("case 2 dephasing: correlation expression without that symmetry") {
        const auto r =
            certify(ProgramSpec::case2(noise_behavior(NoiseKind::dephasing, 0.5), 1, 0));
        const auto& c = r.certificate.quantity_coeffs;
        for (int k = 0; k < 4; ++k) CHECK(std::abs(c[k]) <= 1e-4);
        CHECK(std::abs(c[5] - c[6]) > 1e-2);  // asymmetric
    }
    SUBCASE("case 1 returns the scaled CHSH direction") {
        const auto r = certify(ProgramSpec::case1(noise_behavior(NoiseKind::white, 0.9), 0, 0));
        CHECK(r.certificate.chsh_only);
        const auto& c = r.certificate.quantity_coeffs;
        CHECK(c[4] == doctest::Approx(c[5]).epsilon(1e-12));
        CHECK(c[4] == doctest::Approx(c[6]).epsilon(1e-12));
        CHECK(c[4] == doctest::Approx(-c[7]).epsilon(1e-12));
        CHECK(c[4] == doctest::Approx(r.certificate.chsh_multiplier).epsilon(1e-12));
    }
}

TEST_CASE("dual bell expression evaluates like the quantity form") {
    const Behavior obs = noise_behavior(NoiseKind::dephasing, 0.5);
    const auto r = certify(ProgramSpec::case2(obs, 1, 0));
    const auto [expr2, offset2] = extract_dual_bell(r);
    CHECK(offset2 == r.certificate.offset);
    const BellExpression expr = dual_bell_expression(r.certificate);
    CHECK(expr2.coefficients == expr.coefficients);
    double via_quantities = r.certificate.offset;
    const auto q = obs.quantities();
    for (int k = 0; k < 8; ++k) via_quantities += r.certificate.quantity_coeffs[k] * q[k];
    CHECK(evaluate_bell(expr, obs) + r.certificate.offset ==
          doctest::Approx(via_quantities).epsilon(1e-12));
    // the certified statement holds: G <= coeffs . q + mu
    CHECK(r.guessing_upper <= via_quantities + 1e-9);
}

TEST_CASE("verify_certificate") {
    const Behavior obs = noise_behavior(NoiseKind::white, 0.8);
    const ProgramSpec spec = ProgramSpec::case2(obs, 0, 0);
    const auto r = certify(spec);
    SUBCASE("passes on the solver certificate") {
        const auto check = verify_certificate(r.certificate, spec);
        CHECK(check.ok);
        CHECK(check.min_eigenvalue >= -1e-9);
        CHECK(check.certified_bound >= r.guessing_upper - 1e-6);
        CHECK(check.certified_bound <= r.guessing_upper + 1e-6);
    }
    SUBCASE("fails when mu is lowered") {
        DualCertificate tampered = r.certificate;
        tampered.offset -= 0.05;
        const auto check = verify_certificate(tampered, spec);
        CHECK_FALSE(check.ok);
    }
    SUBCASE("trivial certificate verifies and certifies G <= 1") {
        const auto trivial = trivial_certificate(spec);
        const auto check = verify_certificate(trivial, spec);
        CHECK(check.ok);
        CHECK(check.min_eigenvalue >= -1e-12);
        CHECK(check.residual_slack <= 1e-10);
        CHECK(check.certified_bound == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("trivial certificate for case 3 verifies too") {
        const ProgramSpec spec3 = ProgramSpec::case3(obs);
        const auto check = verify_certificate(trivial_certificate(spec3), spec3);
        CHECK(check.ok);
        CHECK(check.certified_bound == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("inconsistent observed data is rejected") {
    // the PR box: no-signaling but outside the quantum set (CHSH = 4)
    Behavior pr;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    pr.at(a, b, x, y) = ((a ^ b) == (x & y)) ? 0.5 : 0.0;
    REQUIRE(validate_behavior(pr).ok);
    CHECK_THROWS_AS(certify(ProgramSpec::case1(pr, 0, 0)), std::runtime_error);
}

TEST_CASE("monotonicity: case 2 tightens case 1") {
    const Behavior w085 = noise_behavior(NoiseKind::white, 0.85);
    const auto r1 = certify(ProgramSpec::case1(w085, 0, 0));
    const auto r2 = certify(ProgramSpec::case2(w085, 0, 0));
    CHECK(r1.hmin_bits <= r2.hmin_bits + 1e-6);
}

TEST_CASE("relabelings") {
    const Behavior w = noise_behavior(NoiseKind::white, 0.9);
    SUBCASE("identity and involution") {
        const Relabeling id{};
        for (int i = 0; i < 16; ++i) CHECK(relabel(w, id).table[i] == w.table[i]);
        Relabeling g;
        g.swap_x = true;
        g.flip_b = {true, false};
        const Behavior twice = relabel(relabel(w, g), g);
        for (int i = 0; i < 16; ++i)
            CHECK(twice.table[i] == doctest::Approx(w.table[i]).epsilon(1e-14));
    }
    SUBCASE("relabeled behaviors stay valid and keep |S|") {
        Relabeling g;
        g.swap_x = true;
        g.swap_y = true;
        g.flip_a = {true, false};
        g.flip_b = {false, true};
        const Behavior r = relabel(w, g);
        CHECK(validate_behavior(r).ok);
        CHECK(is_local_2222(r).max_facet_value ==
              doctest::Approx(is_local_2222(w).max_facet_value).epsilon(1e-12));
    }
    SUBCASE("dephasing behavior is fixed by the y-swap relabeling") {
        const Behavior d = noise_behavior(NoiseKind::dephasing, 0.6);
        Relabeling g;
        g.swap_y = true;
        g.flip_a = {false, true};
        const Behavior r = relabel(d, g);
        for (int i = 0; i < 16; ++i)
            CHECK(r.table[i] == doctest::Approx(d.table[i]).epsilon(1e-13));
    }
    SUBCASE("transferred certificates verify at the target settings") {
        const Behavior d = noise_behavior(NoiseKind::dephasing, 0.6);
        const auto r10 = certify(ProgramSpec::case2(d, 1, 0));
        Relabeling g;
        g.swap_y = true;
        g.flip_a = {false, true};
        REQUIRE(relabel_settings(g, {1, 0}) == std::pair<int, int>{1, 1});
        const DualCertificate cand = relabel_certificate(r10.certificate, g, {1, 0});
        const auto check = verify_certificate(cand, ProgramSpec::case2(d, 1, 1));
        CHECK(check.ok);
        CHECK(check.certified_bound ==
              doctest::Approx(r10.guessing_upper).epsilon(1e-9));
    }
}

TEST_CASE("degenerate endpoint ordering after cross-tightening") {
    const Behavior w1 = noise_behavior(NoiseKind::white, 1.0);
    auto [s1, r1] = best_fixed_settings(ProgramMode::case1_chsh_only, w1);
    auto [s2, r2] = best_fixed_settings(ProgramMode::case2_fixed_full, w1);
    const auto r3 = certify_case3_tightened(w1);
    CHECK(r3.hmin_bits >= r2.hmin_bits - 1e-6);
    CHECK(r2.hmin_bits >= r1.hmin_bits - 1e-6);
    CHECK(s1 == std::pair<int, int>{0, 0});
    CHECK(s2 == std::pair<int, int>{0, 0});
    // everything collapses to the same value at the noiseless point
    CHECK(std::abs(r3.hmin_bits - r1.hmin_bits) < 1e-5);
    // and the tightened case-3 certificate still verifies
    const auto check = verify_certificate(r3.certificate, ProgramSpec::case3(w1));
    CHECK(check.ok);
}
