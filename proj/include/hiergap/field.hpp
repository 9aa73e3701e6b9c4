#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace hiergap {

// Index of a field element in the polynomial basis: the element with
// coefficients (c_0,...,c_{m-1}) over GF(p) has index sum c_i * p^i.
using Sym = uint16_t;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// GF(p^m) with exact arithmetic, q = p^m <= 2^16. The modulus is the
// lexicographically-first irreducible monic polynomial of degree m over
// GF(p) (coefficients read as base-p digits), so field tables are
// reproducible across runs. Instances are interned by (p, m): two calls to
// Field::make(2, 3) return the same object, and elements of distinct Field
// objects never mix (operations throw).
class Field {
 public:
  static FieldPtr make(unsigned p, unsigned m);

  unsigned p() const { return p_; }
  unsigned m() const { return m_; }
  uint32_t q() const { return q_; }
  // m+1 coefficients, constant term first, leading coefficient 1.
  const std::vector<unsigned>& modulus() const { return modulus_; }

  Sym add(Sym a, Sym b) const;
  Sym sub(Sym a, Sym b) const;
  Sym neg(Sym a) const;
  Sym mul(Sym a, Sym b) const;
  Sym inv(Sym a) const;  // throws std::domain_error on 0
  Sym pow(Sym a, uint64_t e) const;

  // Tr(a) = a + a^p + ... + a^(p^(m-1)), an element of the prime subfield,
  // returned as its value in 0..p-1.
  unsigned trace(Sym a) const;

  std::vector<unsigned> coeffs(Sym a) const;
  Sym from_coeffs(const std::vector<unsigned>& c) const;

  // Basis element x^j as a field element (j < m).
  Sym basis(unsigned j) const;

  std::string describe() const;  // "GF(p^m)"

 private:
  Field(unsigned p, unsigned m);
  Sym mul_slow(Sym a, Sym b) const;

  unsigned p_, m_;
  uint32_t q_;
  std::vector<unsigned> modulus_;
  // x^(m+i) reduced mod modulus, i = 0..m-2; used by mul_slow.
  std::vector<std::vector<unsigned>> xpow_red_;
  // Dense tables when q is small enough to afford them.
  bool tabled_ = false;
  std::vector<Sym> mul_table_;    // q*q
  std::vector<Sym> inv_table_;    // q
  std::vector<unsigned> tr_table_;  // q
};

inline void require_same_field(const Field& a, const Field& b) {
  if (&a != &b) throw std::invalid_argument("elements of distinct fields mixed in one operation");
}

// Value type carrying its field; cross-field arithmetic is a hard error.
class FieldElement {
 public:
  FieldElement(FieldPtr f, Sym v) : f_(std::move(f)), v_(v) {
    if (v_ >= f_->q()) throw std::invalid_argument("element index out of range");
  }

  Sym value() const { return v_; }
  const FieldPtr& field() const { return f_; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    require_same_field(*a.f_, *b.f_);
    return {a.f_, a.f_->add(a.v_, b.v_)};
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    require_same_field(*a.f_, *b.f_);
    return {a.f_, a.f_->sub(a.v_, b.v_)};
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    require_same_field(*a.f_, *b.f_);
    return {a.f_, a.f_->mul(a.v_, b.v_)};
  }
  FieldElement operator-() const { return {f_, f_->neg(v_)}; }
  FieldElement inverse() const { return {f_, f_->inv(v_)}; }
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.f_ == b.f_ && a.v_ == b.v_;
  }

 private:
  FieldPtr f_;
  Sym v_;
};

// Exact Gaussian elimination over the field. Either infeasible, or a
// particular solution plus a basis of the kernel.
struct LinearSolution {
  bool feasible = false;
  std::vector<Sym> particular;
  std::vector<std::vector<Sym>> kernel;
};

LinearSolution solve_linear(const Field& F, std::vector<std::vector<Sym>> A,
                            std::vector<Sym> b);

// All c in G^k (as an F_p-basis) with sum_v Tr(c_v * h_v) = 0 for every
// generator h. This turns a subgroup of G^k into its defining character
// equations; dim_Fp(result) = m*k - dim_Fp(span of generators).
std::vector<std::vector<Sym>> annihilator(const Field& F,
                                          const std::vector<std::vector<Sym>>& generators,
                                          size_t k);

// Small dense linear algebra over the prime field GF(p), used both by
// annihilator() and by the character-equation systems. Rows are vectors of
// length ncols with entries in 0..p-1.
struct FpSystem {
  unsigned p = 2;
  size_t ncols = 0;
  std::vector<std::vector<unsigned>> rows;  // homogeneous part
  std::vector<unsigned> rhs;                // one entry per row
};

struct FpSolution {
  bool feasible = false;
  std::vector<unsigned> particular;
  std::vector<std::vector<unsigned>> kernel;
  size_t rank = 0;
};

FpSolution fp_solve(const FpSystem& sys);

}  // namespace hiergap
