#include "hiergap/pairwise.hpp"

#include <algorithm>
#include <stdexcept>

namespace hiergap {

namespace {

Rational class_atom_prob(const BinaryWeightDistribution& w, unsigned q, unsigned r,
                         const Rational& a_r) {
  // a_r spread uniformly over C(k,r) zero patterns and (q-1)^(k-r) value
  // choices for the nonzero coordinates
  Integer count = binom(w.k, r) * ipow(q - 1, w.k - r);
  return a_r / Rational(count);
}

void check_weights(const BinaryWeightDistribution& w) {
  for (const auto& [r, a] : w.weights) {
    if (r > w.k) throw std::invalid_argument("weight class above arity");
    if (a < 0) throw std::invalid_argument("negative class probability");
  }
  if (w.total() != 1) throw std::invalid_argument("class probabilities do not sum to 1");
}

// All k-tuples over {0..q-1} with zeros exactly at the positions given by
// the combination enumerator; visit(tuple, prob) per atom.
template <typename F>
void enumerate_class(unsigned k, unsigned q, unsigned r, const Rational& prob, F&& visit) {
  std::vector<unsigned> pos(r);
  for (unsigned i = 0; i < r; ++i) pos[i] = i;
  Tuple t(k, 1);
  for (;;) {
    // fill zeros at pos, iterate nonzero values elsewhere
    std::vector<unsigned> free_idx;
    std::fill(t.begin(), t.end(), Sym{1});
    for (unsigned p : pos) t[p] = 0;
    for (unsigned i = 0; i < k; ++i)
      if (t[i] != 0) free_idx.push_back(i);
    for (;;) {
      visit(t, prob);
      // odometer over nonzero values {1..q-1}
      size_t d = 0;
      while (d < free_idx.size()) {
        if (t[free_idx[d]] + 1u < q) {
          ++t[free_idx[d]];
          break;
        }
        t[free_idx[d]] = 1;
        ++d;
      }
      if (d == free_idx.size()) break;
    }
    // next combination of zero positions
    if (r == 0) break;
    int i = static_cast<int>(r) - 1;
    while (i >= 0 && pos[i] == k - r + i) --i;
    if (i < 0) break;
    ++pos[i];
    for (unsigned j = i + 1; j < r; ++j) pos[j] = pos[j - 1] + 1;
  }
}

}  // namespace

Rational SaDistribution::atom_prob(const Tuple& t) const {
  if (t.size() != k) throw std::invalid_argument("tuple arity mismatch");
  unsigned r = static_cast<unsigned>(zero_count(t));
  auto it = weights.weights.find(r);
  if (it == weights.weights.end() || it->second == 0) return 0;
  return class_atom_prob(weights, q, r, it->second);
}

Integer SaDistribution::support_size() const {
  Integer n = 0;
  for (const auto& [r, a] : weights.weights)
    if (a != 0) n += binom(k, r) * ipow(q - 1, k - r);
  return n;
}

Integer lifted_support_size(const BinaryWeightDistribution& w, unsigned q) {
  Integer n = 0;
  for (const auto& [r, a] : w.weights)
    if (a != 0) n += binom(w.k, r) * ipow(q - 1, w.k - r);
  return n;
}

AtomDistribution lift_binary(const BinaryWeightDistribution& w, unsigned q) {
  if (q < 2) throw std::invalid_argument("alphabet must have at least 2 symbols");
  check_weights(w);
  Integer n = lifted_support_size(w, q);
  if (n > kAtomMaterializeCap)
    throw CapExceeded("lifted support of " + n.get_str() + " atoms exceeds cap");
  AtomDistribution out;
  out.q = q;
  out.k = w.k;
  for (const auto& [r, a] : w.weights) {
    if (a == 0) continue;
    Rational prob = class_atom_prob(w, q, r, a);
    enumerate_class(w.k, q, r, prob,
                    [&](const Tuple& t, const Rational& p) { out.atoms[t] += p; });
  }
  return out;
}

AtomDistribution lift_binary(const AtomDistribution& binary, unsigned q) {
  if (binary.q != 2) throw std::invalid_argument("lift_binary needs a binary input");
  AtomDistribution out;
  out.q = q;
  out.k = binary.k;
  Integer total = 0;
  for (const auto& [t, p] : binary.atoms)
    total += ipow(q - 1, t.size() - zero_count(t));
  if (total > kAtomMaterializeCap) throw CapExceeded("lifted support exceeds cap");
  for (const auto& [t, p] : binary.atoms) {
    size_t w = t.size() - zero_count(t);
    Rational each = p / Rational(ipow(q - 1, w));
    std::vector<size_t> ones;
    for (size_t i = 0; i < t.size(); ++i)
      if (t[i] != 0) ones.push_back(i);
    Tuple cur(t.begin(), t.end());
    for (size_t i : ones) cur[i] = 1;
    for (;;) {
      out.atoms[cur] += each;
      size_t d = 0;
      while (d < ones.size()) {
        if (cur[ones[d]] + 1u < q) {
          ++cur[ones[d]];
          break;
        }
        cur[ones[d]] = 1;
        ++d;
      }
      if (d == ones.size()) break;
    }
  }
  return out;
}

SaDistribution make_sa_distribution(BinaryWeightDistribution w, unsigned q,
                                    PredicateKind kind) {
  check_weights(w);
  SaDistribution d;
  d.q = q;
  d.k = w.k;
  d.kind = kind;
  d.weights = std::move(w);
  if (lifted_support_size(d.weights, q) <= kAtomMaterializeCap)
    d.atoms = lift_binary(d.weights, q);
  return d;
}

PiReport verify_pi(const AtomDistribution& d, ExecMode mode) {
  unsigned k = d.k, q = d.q;
  size_t pair_cells = static_cast<size_t>(k) * k * q * q;
  std::vector<Rational> single(static_cast<size_t>(k) * q, Rational(0));
  std::vector<Rational> pair(pair_cells, Rational(0));

  std::vector<std::pair<const Tuple*, const Rational*>> flat;
  flat.reserve(d.atoms.size());
  for (const auto& [t, p] : d.atoms) flat.emplace_back(&t, &p);

  auto accumulate = [&](size_t lo, size_t hi, std::vector<Rational>& s,
                        std::vector<Rational>& pr) {
    for (size_t a = lo; a < hi; ++a) {
      const Tuple& t = *flat[a].first;
      const Rational& p = *flat[a].second;
      for (unsigned i = 0; i < k; ++i) {
        s[static_cast<size_t>(i) * q + t[i]] += p;
        for (unsigned j = i + 1; j < k; ++j)
          pr[((static_cast<size_t>(i) * k + j) * q + t[i]) * q + t[j]] += p;
      }
    }
  };

  if (mode == ExecMode::Serial || thread_count() == 1 || flat.size() < 1024) {
    accumulate(0, flat.size(), single, pair);
  } else {
    int nt = thread_count();
    std::vector<std::vector<Rational>> ts(nt), tp(nt);
#pragma omp parallel num_threads(nt)
    {
      int id = thread_id();
      ts[id].assign(single.size(), Rational(0));
      tp[id].assign(pair.size(), Rational(0));
      size_t chunk = (flat.size() + nt - 1) / nt;
      size_t lo = std::min(flat.size(), chunk * id);
      size_t hi = std::min(flat.size(), lo + chunk);
      accumulate(lo, hi, ts[id], tp[id]);
    }
    // merge in thread order; exact addition makes the result
    // schedule-independent anyway
    for (int id = 0; id < nt; ++id) {
      for (size_t c = 0; c < single.size(); ++c) single[c] += ts[id][c];
      for (size_t c = 0; c < pair.size(); ++c) pair[c] += tp[id][c];
    }
  }

  PiReport rep;
  Rational one_q = rat(1, q);
  Rational one_q2 = rat(1, static_cast<long>(q) * q);
  for (unsigned i = 0; i < k && rep.balanced; ++i)
    for (Sym g = 0; g < q; ++g) {
      const Rational& v = single[static_cast<size_t>(i) * q + g];
      if (v != one_q) {
        rep.balanced = false;
        rep.witness = PiWitness{static_cast<int>(i) + 1, 0, g, 0, v};
        break;
      }
    }
  for (unsigned i = 0; i < k && rep.pairwise; ++i)
    for (unsigned j = i + 1; j < k && rep.pairwise; ++j)
      for (Sym g = 0; g < q && rep.pairwise; ++g)
        for (Sym gp = 0; gp < q; ++gp) {
          const Rational& v = pair[((static_cast<size_t>(i) * k + j) * q + g) * q + gp];
          if (v != one_q2) {
            rep.pairwise = false;
            if (!rep.witness)
              rep.witness = PiWitness{static_cast<int>(i) + 1, static_cast<int>(j) + 1, g, gp, v};
            break;
          }
        }
  return rep;
}

PiReport verify_pi(const SaDistribution& d, ExecMode mode) {
  unsigned k = d.k, q = d.q;
  // Weight-class marginals; exact because classes are position- and
  // value-symmetric by construction.
  Rational p0 = 0, p00 = 0;
  for (const auto& [r, a] : d.weights.weights) {
    p0 += a * rat(r, k);
    if (k > 1) p00 += a * Rational(Integer(r) * (r >= 1 ? r - 1 : 0)) / Rational(Integer(k) * (k - 1));
  }
  Rational pnz = (Rational(1) - p0) / Rational(q - 1);                 // Pr[x_i = g], g != 0
  Rational one_q = rat(1, q), one_q2 = rat(1, static_cast<long>(q) * q);

  PiReport rep;
  if (p0 != one_q) {
    rep.balanced = false;
    rep.witness = PiWitness{1, 0, 0, 0, p0};
    return rep;
  }
  if (pnz != one_q) {
    rep.balanced = false;
    rep.witness = PiWitness{1, 0, 1, 0, pnz};
    return rep;
  }
  if (k > 1) {
    Rational p0n = 0, pnn = 0;  // Pr[x_i=0, x_j=g'!=0], Pr[both nonzero specific]
    for (const auto& [r, a] : d.weights.weights) {
      Integer kk = Integer(k) * (k - 1);
      p0n += a * Rational(Integer(r) * (k - r)) / Rational(kk);
      pnn += a * Rational(Integer(k - r) * (k - r >= 1 ? k - r - 1 : 0)) / Rational(kk);
    }
    p0n /= Rational(q - 1);
    pnn /= Rational(static_cast<long>(q - 1) * (q - 1));
    if (p00 != one_q2) {
      rep.pairwise = false;
      rep.witness = PiWitness{1, 2, 0, 0, p00};
    } else if (p0n != one_q2) {
      rep.pairwise = false;
      rep.witness = PiWitness{1, 2, 0, 1, p0n};
    } else if (pnn != one_q2) {
      rep.pairwise = false;
      rep.witness = PiWitness{1, 2, 1, 1, pnn};
    }
  }
  // Cross-check against the atom path whenever atoms are materialized; the
  // two routes must agree cell for cell.
  if (rep.ok() && d.atoms) {
    PiReport atom_rep = verify_pi(*d.atoms, mode);
    if (!atom_rep.ok()) return atom_rep;
  }
  return rep;
}

bool verify_parity_support(const AtomDistribution& d, PredicateKind kind) {
  for (const auto& [t, p] : d.atoms)
    if (p != 0 && !kind_matches(kind, zero_count(t))) return false;
  return true;
}

bool verify_parity_support(const SaDistribution& d, PredicateKind kind) {
  for (const auto& [r, a] : d.weights.weights)
    if (a != 0 && !kind_matches(kind, r)) return false;
  if (d.atoms && !verify_parity_support(*d.atoms, kind)) return false;
  return true;
}

PiFeasibility pi_feasibility(unsigned k, unsigned q, PredicateKind kind) {
  if (k < 1 || q < 2) throw std::invalid_argument("pi_feasibility needs k >= 1, q >= 2");
  PiFeasibility out;
  LinearProgram& lp = out.lp;
  std::vector<unsigned> classes;
  for (unsigned r = 0; r <= k; ++r)
    if (kind_matches(kind, r)) classes.push_back(r);
  for (unsigned r : classes) lp.add_var("a" + std::to_string(r), Rational(0));

  auto row = [&](auto coeff_of) {
    std::vector<Rational> c;
    for (unsigned r : classes) c.push_back(coeff_of(r));
    return c;
  };
  lp.constraints.push_back({row([](unsigned) { return Rational(1); }), Relation::EQ, Rational(1)});
  lp.constraints.push_back({row([](unsigned r) { return Rational(r); }), Relation::EQ, rat(k, q)});
  lp.constraints.push_back(
      {row([](unsigned r) { return Rational(Integer(r) * (r >= 1 ? r - 1 : 0)); }),
       Relation::EQ, Rational(Integer(k) * (k - 1)) / Rational(Integer(q) * q)});

  LpResult res = lp_feasible(lp);
  if (res.status == LpStatus::Infeasible) {
    out.feasible = false;
    out.farkas = res.farkas;
    return out;
  }
  out.feasible = true;
  BinaryWeightDistribution w;
  w.k = k;
  for (size_t i = 0; i < classes.size(); ++i)
    if (res.assignment[i] != 0) w.weights[classes[i]] = res.assignment[i];
  SaDistribution d = make_sa_distribution(std::move(w), q, kind);
  if (!verify_pi(d).ok() || !verify_parity_support(d, kind))
    throw std::logic_error("pi_feasibility produced an uncertified distribution");
  out.dist = std::move(d);
  return out;
}

namespace {

// Exact polynomial-in-k rationals from the three closed-form families.
Rational poly(const std::vector<long>& coeffs, long k) {
  // coeffs highest degree first
  Integer acc = 0;
  for (long c : coeffs) acc = acc * k + c;
  return Rational(acc);
}

BinaryWeightDistribution closed_form_weights(unsigned k, unsigned q, PredicateKind kind) {
  long K = k;
  BinaryWeightDistribution w;
  w.k = k;
  auto add = [&](unsigned r, const Rational& a) { w.weights[r] += a; };

  if (k % 2 == 0 && q == k - 2 && k >= 4) {  // family (i)
    if (kind == PredicateKind::Odd) {
      add(1, poly({2, -13, 25, -12}, K) / poly({2, -12, 24, -16}, K));
      add(3, poly({1, -1}, K) / poly({2, -8, 8}, K));
      add(k - 1, poly({1, -3}, K) / poly({1, -6, 12, -8}, K));  // merges into r=3 at k=4
    } else {
      add(0, poly({4, -23, 32}, K) / poly({8, -32, 32}, K));
      add(2, poly({2, -5, 0}, K) / poly({4, -16, 16}, K));
      add(4, poly({1, 0}, K) / poly({8, -32, 32}, K));
    }
  } else if (k % 2 == 1 && q == k - 3 && k >= 5) {  // family (ii)
    if (kind == PredicateKind::Odd) {
      add(1, poly({1, -8, 16, 0}, K) / poly({1, -7, 15, -9}, K));
      add(3, poly({1, -4, 0}, K) / poly({1, -9, 27, -27}, K));
      add(k, poly({1, -10, 27}, K) / poly({1, -10, 36, -54, 27}, K));
    } else {
      add(0, poly({2, -17, 36}, K) / poly({4, -24, 36}, K));
      add(2, poly({1, -4, 0}, K) / poly({2, -12, 18}, K));
      add(4, poly({1, 0}, K) / poly({4, -24, 36}, K));
    }
  } else if (k % 2 == 0 && q == k - 4 && k >= 6) {  // family (iii)
    if (kind == PredicateKind::Odd) {
      add(1, poly({2, -23, 75, -48}, K) / poly({2, -20, 64, -64}, K));
      add(3, poly({3, -19, 16}, K) / poly({2, -24, 96, -128}, K));
      add(k - 1, poly({1, -13, 48}, K) / poly({1, -14, 72, -160, 128}, K));
    } else {
      add(0, poly({4, -45, 128}, K) / poly({8, -64, 128}, K));
      add(2, poly({2, -11, 0}, K) / poly({4, -32, 64}, K));
      add(4, poly({3, 0}, K) / poly({8, -64, 128}, K));
    }
  } else {
    throw std::invalid_argument("no closed-form family covers (k=" + std::to_string(k) +
                                ", q=" + std::to_string(q) + ")");
  }
  return w;
}

SaDistribution certify(SaDistribution d) {
  PiReport rep = verify_pi(d);
  if (!rep.ok()) throw std::logic_error("constructed distribution is not balanced pairwise independent");
  if (!verify_parity_support(d, d.kind))
    throw std::logic_error("constructed distribution violates its parity support");
  return d;
}

}  // namespace

SaDistribution dist_from_closed_form(unsigned k, unsigned q, PredicateKind kind) {
  if (kind == PredicateKind::AtLeastOneZero)
    throw std::invalid_argument("closed forms exist for parity kinds only");
  return certify(make_sa_distribution(closed_form_weights(k, q, kind), q, kind));
}

SaDistribution odd_dist_q_eq_kminus1(unsigned k) {
  if (k < 3 || k % 2 == 0) throw std::invalid_argument("odd construction needs odd k >= 3");
  unsigned q = k - 1;
  Rational p = rat(1, q);
  BinaryWeightDistribution w;
  w.k = k;
  w.weights[k] = p * p;                 // the all-zero vector
  w.weights[1] = Rational(1) - p * p;   // k vectors with a single zero
  return certify(make_sa_distribution(std::move(w), q, PredicateKind::Odd));
}

SaDistribution even_dist_q_eq_kminus1(unsigned k) {
  if (k < 3) throw std::invalid_argument("even construction needs k >= 3");
  unsigned q = k - 1;
  Rational p = rat(1, q);
  BinaryWeightDistribution w;
  w.k = k;
  w.weights[2] = p * p * Rational(binom(k, 2));
  w.weights[0] = Rational(1) - w.weights[2];  // equals (1-p)/2
  return certify(make_sa_distribution(std::move(w), q, PredicateKind::Even));
}

SaPredicateTable select_sa_predicates(unsigned dc) {
  if (dc < 5) throw std::invalid_argument("select_sa_predicates needs dc >= 5");
  SaPredicateTable table;
  table.dc = dc;
  if (dc % 2 == 1) {
    table.q = dc - 3;
    table.entries[{dc, PredicateKind::Odd}] = dist_from_closed_form(dc, table.q, PredicateKind::Odd);
    table.entries[{dc, PredicateKind::Even}] = dist_from_closed_form(dc, table.q, PredicateKind::Even);
    table.entries[{dc - 2, PredicateKind::Odd}] = odd_dist_q_eq_kminus1(dc - 2);
    table.entries[{dc - 2, PredicateKind::Even}] = even_dist_q_eq_kminus1(dc - 2);
  } else {
    table.q = dc - 4;
    table.entries[{dc, PredicateKind::Odd}] = dist_from_closed_form(dc, table.q, PredicateKind::Odd);
    table.entries[{dc, PredicateKind::Even}] = dist_from_closed_form(dc, table.q, PredicateKind::Even);
    table.entries[{dc - 2, PredicateKind::Odd}] =
        dist_from_closed_form(dc - 2, table.q, PredicateKind::Odd);
    table.entries[{dc - 2, PredicateKind::Even}] =
        dist_from_closed_form(dc - 2, table.q, PredicateKind::Even);
  }
  return table;
}

}  // namespace hiergap
