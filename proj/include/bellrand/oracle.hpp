#ifndef BELLRAND_ORACLE_HPP
#define BELLRAND_ORACLE_HPP

#include <utility>
#include <vector>

#include "bellrand/guessing.hpp"
#include "bellrand/scenario.hpp"

namespace bellrand {

/// Convex decomposition of a target behavior. Validity (weights >= 0 summing
/// to 1 within 1e-10, weighted mix reproducing the target entry-wise within
/// 1e-9) is checked on construction via make().
struct ExplicitDecomposition {
    std::vector<std::pair<double, Behavior>> terms;
    Behavior target;

    static ExplicitDecomposition make(std::vector<std::pair<double, Behavior>> terms,
                                      Behavior target);
};

/// Average guessing value of the decomposition: each component is guessed at
/// its most likely outcome pair per setting. A valid lower bound on G for
/// the target behavior whenever every component is admissible (quantum);
/// deterministic points always are.
double decomposition_guess_value(const ExplicitDecomposition& d,
                                 const SettingsDistribution& dist);

/// True when every term of the decomposition is a deterministic point.
bool fully_deterministic(const ExplicitDecomposition& d);

/// Constructive local-model search. Greedy passes over the 16 deterministic
/// points in fixed lexicographic order subtract maximal weights; if a
/// residue survives, an exact phase-1 simplex over the deterministic points
/// is tried on the original target. Local behaviors yield an
/// all-deterministic decomposition (guess value 1); nonlocal behaviors yield
/// a partial decomposition whose last term is the quantum remainder.
ExplicitDecomposition greedy_local_extraction(const Behavior& b);

struct SandwichReport {
    double lower = 0.0;  // best explicit-decomposition guess value
    double upper = 1.0;  // certified relaxation bound
    double gap = 0.0;    // upper - lower
    bool ok = false;     // lower <= upper + 1e-6
};

/// Brackets the true guessing probability between the oracle lower bound
/// (trivial decomposition and greedy extraction) and the SDP upper bound.
SandwichReport sandwich_check(const ProgramSpec& spec, const CertifiedResult& result);

}  // namespace bellrand

#endif
