#include "bellrand/sdpa_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace bellrand {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// entry rows: (matno, block, i, j, value), all 1-based, i <= j
using EntryRow = std::tuple<int, int, int, int, double>;

}  // namespace

std::string export_sdpa(const BlockProblem& p) {
    p.validate();
    const int m = static_cast<int>(p.equalities.size());
    const int nsq = static_cast<int>(p.blocks.size());
    std::ostringstream os;
    os << "* SDPA sparse export of a block LMI problem\n";
    os << "* internal form: maximize c.y  s.t.  A y = b,"
          "  X_e = F0_e + sum_j y_j F_ej psd\n";
    os << "* encoded as:    minimize (-c).x  s.t.  X = sum_j x_j F_j - F_0 psd\n";
    os << "* moment blocks keep their sizes; F_0 = -F0_e on them.\n";
    if (m > 0) {
        os << "* the trailing diagonal block of size " << 2 * m
           << " encodes the equalities as\n";
        os << "* split inequalities: entry k is (Ay-b)_k >= 0, entry " << m
           << "+k is (b-Ay)_k >= 0.\n";
    }
    os << "* internal objective = -(sdpa objective value).\n";
    os << p.num_vars << "\n";
    os << (nsq + (m > 0 ? 1 : 0)) << "\n";
    for (int e = 0; e < nsq; ++e) os << p.blocks[e].size << (e + 1 < nsq || m > 0 ? " " : "");
    if (m > 0) os << -(2 * m);
    os << "\n";
    for (int j = 0; j < p.num_vars; ++j)
        os << fmt17(-p.objective[j]) << (j + 1 < p.num_vars ? " " : "");
    os << "\n";

    std::vector<EntryRow> rows;
    for (int e = 0; e < nsq; ++e) {
        const auto& bl = p.blocks[e];
        for (const auto& ent : bl.constant.entries)
            if (ent.value != 0.0)
                rows.emplace_back(0, e + 1, ent.row + 1, ent.col + 1, -ent.value);
        for (const auto& [var, s] : bl.basis)
            for (const auto& ent : s.entries)
                if (ent.value != 0.0)
                    rows.emplace_back(var + 1, e + 1, ent.row + 1, ent.col + 1, ent.value);
    }
    const int dblk = nsq + 1;
    for (int k = 0; k < m; ++k) {
        const auto& eq = p.equalities[k];
        if (eq.rhs != 0.0) {
            rows.emplace_back(0, dblk, k + 1, k + 1, eq.rhs);
            rows.emplace_back(0, dblk, m + k + 1, m + k + 1, -eq.rhs);
        }
        for (const auto& [var, coeff] : eq.row)
            if (coeff != 0.0) {
                rows.emplace_back(var + 1, dblk, k + 1, k + 1, coeff);
                rows.emplace_back(var + 1, dblk, m + k + 1, m + k + 1, -coeff);
            }
    }
    std::sort(rows.begin(), rows.end(),
              [](const EntryRow& a, const EntryRow& b) {
                  return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a),
                                  std::get<3>(a)) <
                         std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b),
                                  std::get<3>(b));
              });
    for (const auto& [matno, blk, i, j, v] : rows)
        os << matno << " " << blk << " " << i << " " << j << " " << fmt17(v) << "\n";
    return os.str();
}

void write_sdpa_file(const BlockProblem& p, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << export_sdpa(p);
    if (!f) throw std::runtime_error("write failed: " + path);
}

BlockProblem import_sdpa(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    auto next_data_line = [&in, &line, &lineno]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            size_t pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos) continue;
            if (line[pos] == '*' || line[pos] == '"') continue;
            return true;
        }
        return false;
    };
    auto clean_numbers = [](const std::string& s) {
        std::string out = s;
        for (char& c : out)
            if (c == ',' || c == '{' || c == '}' || c == '(' || c == ')') c = ' ';
        return out;
    };

    if (!next_data_line()) throw SdpaParseError(lineno, "missing variable count");
    int nvars = 0;
    {
        std::istringstream ls(clean_numbers(line));
        if (!(ls >> nvars) || nvars <= 0)
            throw SdpaParseError(lineno, "bad variable count");
    }
    if (!next_data_line()) throw SdpaParseError(lineno, "missing block count");
    int nblocks = 0;
    {
        std::istringstream ls(clean_numbers(line));
        if (!(ls >> nblocks) || nblocks <= 0)
            throw SdpaParseError(lineno, "bad block count");
    }
    if (!next_data_line()) throw SdpaParseError(lineno, "missing block sizes");
    std::vector<int> sizes;
    {
        std::istringstream ls(clean_numbers(line));
        int s;
        while (ls >> s) sizes.push_back(s);
        if (static_cast<int>(sizes.size()) != nblocks)
            throw SdpaParseError(lineno, "block size count mismatch");
        for (int v : sizes)
            if (v == 0) throw SdpaParseError(lineno, "zero block size");
    }
    if (!next_data_line()) throw SdpaParseError(lineno, "missing objective row");
    std::vector<double> cvec;
    {
        std::istringstream ls(clean_numbers(line));
        double v;
        while (ls >> v) cvec.push_back(v);
        if (static_cast<int>(cvec.size()) != nvars)
            throw SdpaParseError(lineno, "objective length mismatch");
    }

    // entries per (matno, block)
    struct Raw {
        int matno, blk, i, j;
        double v;
    };
    std::vector<Raw> raw;
    while (next_data_line()) {
        std::istringstream ls(clean_numbers(line));
        Raw r{};
        if (!(ls >> r.matno >> r.blk >> r.i >> r.j >> r.v))
            throw SdpaParseError(lineno, "bad entry line");
        if (r.matno < 0 || r.matno > nvars)
            throw SdpaParseError(lineno, "matrix number out of range");
        if (r.blk < 1 || r.blk > nblocks)
            throw SdpaParseError(lineno, "block number out of range");
        const int bsize = std::abs(sizes[r.blk - 1]);
        if (r.i < 1 || r.j < 1 || r.i > bsize || r.j > bsize)
            throw SdpaParseError(lineno, "entry index out of range");
        if (r.i > r.j)
            throw SdpaParseError(lineno, "entry below the diagonal (i > j)");
        if (sizes[r.blk - 1] < 0 && r.i != r.j)
            throw SdpaParseError(lineno, "off-diagonal entry in a diagonal block");
        raw.push_back(r);
    }

    BlockProblem p;
    p.num_vars = nvars;
    p.objective.resize(nvars);
    for (int j = 0; j < nvars; ++j) p.objective[j] = -cvec[j];

    // try to recognize the trailing diagonal block as paired equalities
    int eq_block = -1;
    int eq_m = 0;
    if (!sizes.empty() && sizes.back() < 0 && (-sizes.back()) % 2 == 0) {
        eq_block = nblocks;
        eq_m = (-sizes.back()) / 2;
        std::map<std::pair<int, int>, double> diag;  // (matno, pos) -> value
        for (const auto& r : raw)
            if (r.blk == eq_block) diag[{r.matno, r.i}] += r.v;
        for (const auto& [key, v] : diag) {
            const int pos = key.second;
            const int mate = pos <= eq_m ? pos + eq_m : pos - eq_m;
            auto it = diag.find({key.first, mate});
            if (it == diag.end() || it->second != -v) {
                eq_block = -1;  // not our encoding; keep as a plain block
                break;
            }
        }
        if (eq_block > 0) {
            p.equalities.resize(eq_m);
            for (const auto& [key, v] : diag) {
                const auto& [matno, pos] = key;
                if (pos > eq_m) continue;
                if (matno == 0)
                    p.equalities[pos - 1].rhs = v;
                else
                    p.equalities[pos - 1].row.emplace_back(matno - 1, v);
            }
            for (auto& eq : p.equalities)
                std::sort(eq.row.begin(), eq.row.end());
        }
    }

    for (int b = 1; b <= nblocks; ++b) {
        if (b == eq_block && eq_block > 0) continue;
        const int sz = sizes[b - 1];
        if (sz > 0) {
            BlockProblem::Block bl;
            bl.size = sz;
            std::map<int, SparseSym> by_var;
            for (const auto& r : raw) {
                if (r.blk != b) continue;
                if (r.matno == 0)
                    bl.constant.add(r.i - 1, r.j - 1, -r.v);
                else
                    by_var[r.matno - 1].add(r.i - 1, r.j - 1, r.v);
            }
            for (auto& [var, s] : by_var) bl.basis.emplace_back(var, std::move(s));
            p.blocks.push_back(std::move(bl));
        } else {
            // diagonal block -> one 1x1 block per position
            const int d = -sz;
            std::vector<BlockProblem::Block> ones(d);
            for (auto& bl : ones) bl.size = 1;
            std::vector<std::map<int, double>> by_pos_var(d);
            for (const auto& r : raw) {
                if (r.blk != b) continue;
                if (r.matno == 0)
                    ones[r.i - 1].constant.add(0, 0, -r.v);
                else
                    by_pos_var[r.i - 1][r.matno - 1] += r.v;
            }
            for (int pos = 0; pos < d; ++pos)
                for (const auto& [var, v] : by_pos_var[pos]) {
                    SparseSym s;
                    s.add(0, 0, v);
                    ones[pos].basis.emplace_back(var, std::move(s));
                }
            for (auto& bl : ones) p.blocks.push_back(std::move(bl));
        }
    }
    if (p.blocks.empty()) throw SdpaParseError(lineno, "no psd blocks after parsing");
    // canonical entry order inside each sparse matrix
    auto sort_entries = [](SparseSym& s) {
        std::sort(s.entries.begin(), s.entries.end(),
                  [](const SparseSym::Entry& a, const SparseSym::Entry& b) {
                      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
                  });
    };
    for (auto& bl : p.blocks) {
        sort_entries(bl.constant);
        std::sort(bl.basis.begin(), bl.basis.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [var, s] : bl.basis) sort_entries(s);
    }
    p.validate();
    return p;
}

BlockProblem read_sdpa_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return import_sdpa(ss.str());
}

}  // namespace bellrand
