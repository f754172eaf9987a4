#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "bellrand/guessing.hpp"
#include "bellrand/sdpa_io.hpp"
#include "bellrand/sweep.hpp"

using namespace bellrand;

namespace {

bool problems_equal(const BlockProblem& a, const BlockProblem& b) {
    if (a.num_vars != b.num_vars) return false;
    if (a.objective != b.objective) return false;
    if (a.blocks.size() != b.blocks.size()) return false;
    auto entries_equal = [](const SparseSym& x, const SparseSym& y) {
        if (x.entries.size() != y.entries.size()) return false;
        for (size_t i = 0; i < x.entries.size(); ++i)
            if (x.entries[i].row != y.entries[i].row ||
                x.entries[i].col != y.entries[i].col ||
                x.entries[i].value != y.entries[i].value)
                return false;
        return true;
    };
    for (size_t e = 0; e < a.blocks.size(); ++e) {
        if (a.blocks[e].size != b.blocks[e].size) return false;
        if (!entries_equal(a.blocks[e].constant, b.blocks[e].constant)) return false;
        if (a.blocks[e].basis.size() != b.blocks[e].basis.size()) return false;
        for (size_t j = 0; j < a.blocks[e].basis.size(); ++j) {
            if (a.blocks[e].basis[j].first != b.blocks[e].basis[j].first) return false;
            if (!entries_equal(a.blocks[e].basis[j].second, b.blocks[e].basis[j].second))
                return false;
        }
    }
    if (a.equalities.size() != b.equalities.size()) return false;
    for (size_t k = 0; k < a.equalities.size(); ++k) {
        if (a.equalities[k].rhs != b.equalities[k].rhs) return false;
        if (a.equalities[k].row != b.equalities[k].row) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("export layout for a case-2 problem") {
    const Behavior obs = noise_behavior(NoiseKind::white, 0.9);
    const auto prog = assemble(ProgramSpec::case2(obs, 0, 0));
    const std::string text = export_sdpa(prog.problem);
    // 4 moment blocks plus the split-equality diagonal block (9 equalities)
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> data;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '*' && line[0] != '"') data.push_back(line);
    REQUIRE(data.size() >= 4);
    CHECK(data[0] == std::to_string(prog.problem.num_vars));
    CHECK(data[1] == "5");
    CHECK(data[2] == "25 25 25 25 -18");
}

TEST_CASE("round trip: case-1 problem") {
    const Behavior obs = noise_behavior(NoiseKind::white, 0.8);
    const auto prog = assemble(ProgramSpec::case1(obs, 0, 0));
    const std::string text = export_sdpa(prog.problem);
    const BlockProblem back = import_sdpa(text);
    CHECK(problems_equal(prog.problem, back));
    // export of the reimport is byte identical
    CHECK(export_sdpa(back) == text);
}

TEST_CASE("round trip: problem with a constant part") {
    BlockProblem p;
    p.num_vars = 2;
    p.objective = {1.0, -0.25};
    BlockProblem::Block bl;
    bl.size = 3;
    bl.constant.add(0, 0, 1.0);
    bl.constant.add(1, 2, -0.5);
    bl.constant.add(2, 2, 2.0);
    SparseSym f1, f2;
    f1.add(0, 1, 1.0);
    f1.add(1, 1, 0.125);
    f2.add(2, 2, -1.0);
    bl.basis.emplace_back(0, f1);
    bl.basis.emplace_back(1, f2);
    p.blocks.push_back(bl);
    p.equalities.push_back({{{0, 0.5}, {1, 1.0}}, 0.75});
    const std::string text = export_sdpa(p);
    const BlockProblem back = import_sdpa(text);
    CHECK(problems_equal(p, back));
}

TEST_CASE("import rejects malformed input") {
    CHECK_THROWS_AS(import_sdpa(""), SdpaParseError);
    // entry below the diagonal
    const std::string below =
        "1\n1\n2\n0\n1 1 2 1 1.0\n";
    CHECK_THROWS_AS(import_sdpa(below), SdpaParseError);
    // block index out of range
    const std::string badblock = "1\n1\n2\n0\n1 2 1 1 1.0\n";
    CHECK_THROWS_AS(import_sdpa(badblock), SdpaParseError);
    // non-numeric garbage
    CHECK_THROWS_AS(import_sdpa("x\n"), SdpaParseError);
    // line numbers are reported
    try {
        import_sdpa("* comment\n1\n1\n2\n0\n1 1 2 1 1.0\n");
        CHECK(false);
    } catch (const SdpaParseError& e) {
        CHECK(e.line_number == 6);
    }
}

TEST_CASE("comments and foreign diagonal blocks") {
    // a foreign file: diagonal block that is not a paired-equality encoding
    const std::string text =
        "* a foreign problem\n"
        "\" quoted comment style\n"
        "1\n"
        "2\n"
        "2 -1\n"
        "-1.0\n"
        "0 1 1 1 -1\n"
        "0 1 2 2 -1\n"
        "1 1 1 2 1\n"
        "1 2 1 1 1\n";
    const BlockProblem p = import_sdpa(text);
    CHECK(p.num_vars == 1);
    CHECK(p.blocks.size() == 2);  // the 2x2 block and one 1x1 block
    CHECK(p.blocks[0].size == 2);
    CHECK(p.blocks[1].size == 1);
    CHECK(p.equalities.empty());
    CHECK(p.objective[0] == 1.0);
    // solvable: max y s.t. [[1,y],[y,1]] psd and y >= 0
    const auto rep = solve(p);
    CHECK(rep.primal_objective == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("17 significant digits survive the round trip") {
    BlockProblem p;
    p.num_vars = 1;
    p.objective = {0.1234567890123456789};
    BlockProblem::Block bl;
    bl.size = 1;
    bl.constant.add(0, 0, 1.0 / 3.0);
    SparseSym f;
    f.add(0, 0, -std::sqrt(2.0));
    bl.basis.emplace_back(0, f);
    p.blocks.push_back(bl);
    const BlockProblem back = import_sdpa(export_sdpa(p));
    CHECK(back.objective[0] == p.objective[0]);
    CHECK(back.blocks[0].constant.entries[0].value == p.blocks[0].constant.entries[0].value);
    CHECK(back.blocks[0].basis[0].second.entries[0].value ==
          p.blocks[0].basis[0].second.entries[0].value);
}
