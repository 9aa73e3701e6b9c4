#pragma once

#include <map>
#include <optional>
#include <utility>

#include "hiergap/lp.hpp"
#include "hiergap/parallel.hpp"
#include "hiergap/rational.hpp"
#include "hiergap/types.hpp"

namespace hiergap {

// Distribution over {0,1}^k keyed by the number of zero coordinates:
// weights[r] is the total probability of the class of vectors with exactly
// r zeros, spread uniformly inside the class.
struct BinaryWeightDistribution {
  unsigned k = 0;
  std::map<unsigned, Rational> weights;

  Rational total() const {
    Rational s = 0;
    for (const auto& [r, a] : weights) s += a;
    return s;
  }
};

// Fully materialized distribution on tuples over {0..q-1}.
struct AtomDistribution {
  unsigned q = 0, k = 0;
  std::map<Tuple, Rational> atoms;
};

// Materialization cap for lifted supports; above it, marginal checks run
// combinatorially on the weight classes instead of atom by atom.
inline constexpr uint64_t kAtomMaterializeCap = 1000000;

// A predicate distribution: always carries the weight-class form, and the
// atom form whenever the lifted support fits under kAtomMaterializeCap.
// Nonzero coordinates are uniform over {1..q-1} independently, which is
// what makes the weight-class marginals exact.
class SaDistribution {
 public:
  unsigned q = 0, k = 0;
  PredicateKind kind = PredicateKind::Odd;
  BinaryWeightDistribution weights;
  std::optional<AtomDistribution> atoms;

  // Probability of one tuple; zero off-support.
  Rational atom_prob(const Tuple& t) const;
  Integer support_size() const;
};

// Number of lifted atoms of the weight-class distribution over alphabet q.
Integer lifted_support_size(const BinaryWeightDistribution& w, unsigned q);

// Expand weight classes (or binary atoms) over alphabet q: every nonzero
// coordinate splits uniformly into q-1 atoms. Throws CapExceeded past the
// materialization cap.
AtomDistribution lift_binary(const BinaryWeightDistribution& w, unsigned q);
AtomDistribution lift_binary(const AtomDistribution& binary, unsigned q);

// Weight-class distribution + q -> handle (atoms filled in when small).
SaDistribution make_sa_distribution(BinaryWeightDistribution w, unsigned q,
                                    PredicateKind kind);

struct PiWitness {
  int i = 0, j = 0;  // 1-indexed coordinates; j = 0 for a balance witness
  Sym g = 0, gp = 0;
  Rational value;
};

struct PiReport {
  bool balanced = true;
  bool pairwise = true;
  std::optional<PiWitness> witness;
  bool ok() const { return balanced && pairwise; }
};

// Exact marginal check: every Pr[x_i = g] = 1/q and every
// Pr[x_i = g, x_j = g'] = 1/q^2. The atom overload counts over atoms (the
// kernel is parallel over atoms); the handle overload uses the weight-class
// marginals, and cross-checks against the atom path when atoms exist.
PiReport verify_pi(const AtomDistribution& d, ExecMode mode = ExecMode::Parallel);
PiReport verify_pi(const SaDistribution& d, ExecMode mode = ExecMode::Parallel);

bool verify_parity_support(const SaDistribution& d, PredicateKind kind);
bool verify_parity_support(const AtomDistribution& d, PredicateKind kind);

// Exact LP oracle for the existence of a balanced pairwise independent
// distribution supported on the given predicate. By symmetrization the
// question reduces to the weight-class LP
//   sum a_r = 1,  sum r a_r = k/q,  sum r(r-1) a_r = k(k-1)/q^2,  a_r >= 0
// over the parity-allowed zero counts r.
struct PiFeasibility {
  bool feasible = false;
  std::optional<SaDistribution> dist;  // certified when feasible
  LinearProgram lp;
  FarkasCertificate farkas;  // verified when infeasible
};

PiFeasibility pi_feasibility(unsigned k, unsigned q, PredicateKind kind);

// The closed-form weight-class families, dispatched by (k, q, kind):
//   (i)   even k >= 4, q = k-2
//   (ii)  odd  k >= 5, q = k-3
//   (iii) even k >= 6, q = k-4
// Construction fails loudly on uncovered combinations. Every returned
// distribution is certified balanced pairwise independent with the right
// support parity.
SaDistribution dist_from_closed_form(unsigned k, unsigned q, PredicateKind kind);

// Direct constructions at q = k-1: the odd family needs odd k.
SaDistribution odd_dist_q_eq_kminus1(unsigned k);
SaDistribution even_dist_q_eq_kminus1(unsigned k);

// Predicate table for check degrees {dc, dc-2}: alphabet q = dc-3 for odd
// dc, q = dc-4 for even dc; all four (arity, parity) entries certified.
struct SaPredicateTable {
  unsigned dc = 0, q = 0;
  std::map<std::pair<unsigned, PredicateKind>, SaDistribution> entries;
};

SaPredicateTable select_sa_predicates(unsigned dc);

}  // namespace hiergap
