#ifndef BELLRAND_SDPA_IO_HPP
#define BELLRAND_SDPA_IO_HPP

#include <stdexcept>
#include <string>

#include "bellrand/sdp.hpp"

namespace bellrand {

struct SdpaParseError : std::runtime_error {
    int line_number;
    SdpaParseError(int line, const std::string& what)
        : std::runtime_error("sdpa parse error at line " + std::to_string(line) + ": " +
                             what),
          line_number(line) {}
};

/// Serialize to the SDPA sparse format (.dat-s). Deterministic and
/// bit-exact: entries sorted, 17 significant digits. The internal
/// maximization problem is written as the standard SDPA minimization with
/// negated objective; equality constraints become one paired diagonal block
/// (entry k carries (Ay-b)_k >= 0, entry m+k its negation). The mapping is
/// documented in the file's comment header.
std::string export_sdpa(const BlockProblem& p);

void write_sdpa_file(const BlockProblem& p, const std::string& path);

/// Parse SDPA sparse text back into a BlockProblem. Inverse of export_sdpa
/// on its image: the paired diagonal block is recognized and restored as
/// equality constraints. Foreign diagonal blocks become 1x1 blocks. Comment
/// lines start with '*' or '"'. Throws SdpaParseError with a line number.
BlockProblem import_sdpa(const std::string& text);

BlockProblem read_sdpa_file(const std::string& path);

}  // namespace bellrand

#endif
