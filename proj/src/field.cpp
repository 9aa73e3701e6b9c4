#include "hiergap/field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace hiergap {

namespace {

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Polynomials over GF(p) as coefficient vectors, constant term first.
using Poly = std::vector<unsigned>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// Remainder of f by monic g; empty vector is the zero polynomial.
Poly poly_mod(Poly f, const Poly& g, unsigned p) {
  size_t dg = g.size() - 1;
  trim(f);
  while (f.size() > dg) {
    unsigned lead = f.back();
    size_t shift = f.size() - 1 - dg;
    if (lead != 0) {
      for (size_t i = 0; i <= dg; ++i) {
        unsigned sub = (lead * g[i]) % p;
        f[i + shift] = (f[i + shift] + p - sub) % p;
      }
    }
    f.pop_back();
    trim(f);
  }
  return f;
}

bool divides(const Poly& d, Poly f, unsigned p) {
  Poly r = poly_mod(std::move(f), d, p);
  return r.empty();
}

// Trial division against every monic polynomial of degree 1..m/2.
bool is_irreducible(const Poly& f, unsigned p, unsigned m) {
  if (m == 1) return true;
  for (unsigned d = 1; 2 * d <= m; ++d) {
    uint64_t count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    for (uint64_t t = 0; t < count; ++t) {
      Poly g(d + 1, 0);
      uint64_t tt = t;
      for (unsigned i = 0; i < d; ++i) {
        g[i] = tt % p;
        tt /= p;
      }
      g[d] = 1;
      if (divides(g, f, p)) return false;
    }
  }
  return true;
}

Poly first_irreducible(unsigned p, unsigned m) {
  uint64_t count = 1;
  for (unsigned i = 0; i < m; ++i) count *= p;
  for (uint64_t t = 0; t < count; ++t) {
    Poly f(m + 1, 0);
    uint64_t tt = t;
    for (unsigned i = 0; i < m; ++i) {
      f[i] = tt % p;
      tt /= p;
    }
    f[m] = 1;
    if (is_irreducible(f, p, m)) return f;
  }
  throw std::logic_error("no irreducible polynomial found");  // unreachable
}

}  // namespace

FieldPtr Field::make(unsigned p, unsigned m) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
  if (m < 1) throw std::invalid_argument("extension degree must be >= 1");
  double logq = m * std::log2(static_cast<double>(p));
  if (logq > 16.0001) throw std::invalid_argument("field order exceeds 2^16");

  static std::mutex mu;
  static std::map<std::pair<unsigned, unsigned>, std::weak_ptr<const Field>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = registry[{p, m}];
  if (auto existing = slot.lock()) return existing;
  FieldPtr f(new Field(p, m));
  slot = f;
  return f;
}

Field::Field(unsigned p, unsigned m) : p_(p), m_(m) {
  uint64_t q = 1;
  for (unsigned i = 0; i < m; ++i) q *= p;
  q_ = static_cast<uint32_t>(q);
  modulus_ = first_irreducible(p, m);

  // x^(m+i) mod modulus, as coefficient vectors of length m
  xpow_red_.resize(m_ > 1 ? m_ - 1 : 0);
  for (unsigned i = 0; i + 1 < m_; ++i) {
    Poly f(m_ + i + 1, 0);
    f[m_ + i] = 1;
    Poly r = poly_mod(f, modulus_, p_);
    r.resize(m_, 0);
    xpow_red_[i] = r;
  }

  tabled_ = q_ <= 1024;
  if (tabled_) {
    mul_table_.resize(static_cast<size_t>(q_) * q_);
    for (uint32_t a = 0; a < q_; ++a)
      for (uint32_t b = 0; b <= a; ++b) {
        Sym v = mul_slow(static_cast<Sym>(a), static_cast<Sym>(b));
        mul_table_[static_cast<size_t>(a) * q_ + b] = v;
        mul_table_[static_cast<size_t>(b) * q_ + a] = v;
      }
    inv_table_.assign(q_, 0);
    for (uint32_t a = 1; a < q_; ++a) {
      // Fermat: a^(q-2)
      Sym acc = 1, base = static_cast<Sym>(a);
      uint64_t e = q_ - 2;
      while (e) {
        if (e & 1) acc = mul_table_[static_cast<size_t>(acc) * q_ + base];
        base = mul_table_[static_cast<size_t>(base) * q_ + base];
        e >>= 1;
      }
      inv_table_[a] = acc;
    }
    tr_table_.assign(q_, 0);
    for (uint32_t a = 0; a < q_; ++a) {
      Sym acc = 0, term = static_cast<Sym>(a);
      for (unsigned i = 0; i < m_; ++i) {
        acc = add(acc, term);
        Sym nt = term;
        for (unsigned j = 1; j < p_; ++j) nt = mul_table_[static_cast<size_t>(nt) * q_ + term];
        term = nt;  // term^p
      }
      tr_table_[a] = coeffs(acc)[0];
    }
  }
}

Sym Field::add(Sym a, Sym b) const {
  if (p_ == 2) return a ^ b;
  uint32_t out = 0, mult = 1, x = a, y = b;
  for (unsigned i = 0; i < m_; ++i) {
    out += ((x + y) % p_) * mult;
    x /= p_;
    y /= p_;
    mult *= p_;
  }
  return static_cast<Sym>(out);
}

Sym Field::neg(Sym a) const {
  if (p_ == 2) return a;
  uint32_t out = 0, mult = 1, x = a;
  for (unsigned i = 0; i < m_; ++i) {
    out += ((p_ - x % p_) % p_) * mult;
    x /= p_;
    mult *= p_;
  }
  return static_cast<Sym>(out);
}

Sym Field::sub(Sym a, Sym b) const { return add(a, neg(b)); }

Sym Field::mul_slow(Sym a, Sym b) const {
  std::vector<unsigned> ca = coeffs(a), cb = coeffs(b);
  std::vector<unsigned> prod(2 * m_ - 1, 0);
  for (unsigned i = 0; i < m_; ++i) {
    if (ca[i] == 0) continue;
    for (unsigned j = 0; j < m_; ++j)
      prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p_;
  }
  std::vector<unsigned> out(prod.begin(), prod.begin() + m_);
  for (unsigned d = m_; d < 2 * m_ - 1; ++d) {
    unsigned c = prod[d];
    if (c == 0) continue;
    const auto& red = xpow_red_[d - m_];
    for (unsigned i = 0; i < m_; ++i) out[i] = (out[i] + c * red[i]) % p_;
  }
  return from_coeffs(out);
}

Sym Field::mul(Sym a, Sym b) const {
  if (tabled_) return mul_table_[static_cast<size_t>(a) * q_ + b];
  return mul_slow(a, b);
}

Sym Field::inv(Sym a) const {
  if (a == 0) throw std::domain_error("inverse of zero field element");
  if (tabled_) return inv_table_[a];
  return pow(a, q_ - 2);
}

Sym Field::pow(Sym a, uint64_t e) const {
  Sym acc = 1, base = a;
  while (e) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return acc;
}

unsigned Field::trace(Sym a) const {
  if (tabled_) return tr_table_[a];
  Sym acc = 0, term = a;
  for (unsigned i = 0; i < m_; ++i) {
    acc = add(acc, term);
    term = pow(term, p_);
  }
  return coeffs(acc)[0];
}

std::vector<unsigned> Field::coeffs(Sym a) const {
  std::vector<unsigned> c(m_);
  uint32_t x = a;
  for (unsigned i = 0; i < m_; ++i) {
    c[i] = x % p_;
    x /= p_;
  }
  return c;
}

Sym Field::from_coeffs(const std::vector<unsigned>& c) const {
  uint32_t out = 0, mult = 1;
  for (unsigned i = 0; i < m_; ++i) {
    out += (i < c.size() ? c[i] % p_ : 0) * mult;
    mult *= p_;
  }
  return static_cast<Sym>(out);
}

Sym Field::basis(unsigned j) const {
  std::vector<unsigned> c(m_, 0);
  c.at(j) = 1;
  return from_coeffs(c);
}

std::string Field::describe() const {
  if (m_ == 1) return "GF(" + std::to_string(p_) + ")";
  return "GF(" + std::to_string(p_) + "^" + std::to_string(m_) + ")";
}

LinearSolution solve_linear(const Field& F, std::vector<std::vector<Sym>> A,
                            std::vector<Sym> b) {
  size_t rows = A.size();
  size_t cols = rows == 0 ? 0 : A[0].size();
  for (const auto& r : A)
    if (r.size() != cols) throw std::invalid_argument("ragged matrix");
  if (b.size() != rows) throw std::invalid_argument("rhs size mismatch");

  std::vector<size_t> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t pr = r;
    while (pr < rows && A[pr][c] == 0) ++pr;
    if (pr == rows) continue;
    std::swap(A[pr], A[r]);
    std::swap(b[pr], b[r]);
    Sym piv_inv = F.inv(A[r][c]);
    for (size_t j = c; j < cols; ++j) A[r][j] = F.mul(A[r][j], piv_inv);
    b[r] = F.mul(b[r], piv_inv);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || A[i][c] == 0) continue;
      Sym f = A[i][c];
      for (size_t j = c; j < cols; ++j) A[i][j] = F.sub(A[i][j], F.mul(f, A[r][j]));
      b[i] = F.sub(b[i], F.mul(f, b[r]));
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (b[i] != 0) return {};  // infeasible

  LinearSolution out;
  out.feasible = true;
  out.particular.assign(cols, 0);
  for (size_t i = 0; i < pivot_col.size(); ++i) out.particular[pivot_col[i]] = b[i];

  std::vector<bool> is_pivot(cols, false);
  for (size_t c : pivot_col) is_pivot[c] = true;
  for (size_t c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<Sym> v(cols, 0);
    v[c] = 1;
    for (size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = F.neg(A[i][c]);
    out.kernel.push_back(std::move(v));
  }
  return out;
}

FpSolution fp_solve(const FpSystem& sys) {
  unsigned p = sys.p;
  size_t rows = sys.rows.size(), cols = sys.ncols;
  std::vector<std::vector<unsigned>> A = sys.rows;
  std::vector<unsigned> b = sys.rhs;
  if (b.size() != rows) throw std::invalid_argument("fp_solve rhs mismatch");

  auto inv_mod = [&](unsigned a) {
    for (unsigned x = 1; x < p; ++x)
      if (a * x % p == 1) return x;
    throw std::logic_error("non-invertible pivot");
  };

  std::vector<size_t> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t pr = r;
    while (pr < rows && A[pr][c] == 0) ++pr;
    if (pr == rows) continue;
    std::swap(A[pr], A[r]);
    std::swap(b[pr], b[r]);
    unsigned pi = inv_mod(A[r][c]);
    for (size_t j = c; j < cols; ++j) A[r][j] = A[r][j] * pi % p;
    b[r] = b[r] * pi % p;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || A[i][c] == 0) continue;
      unsigned f = A[i][c];
      for (size_t j = c; j < cols; ++j) A[i][j] = (A[i][j] + (p - f) * A[r][j]) % p;
      b[i] = (b[i] + (p - f) * b[r]) % p;
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (b[i] != 0) return {};

  FpSolution out;
  out.feasible = true;
  out.rank = pivot_col.size();
  out.particular.assign(cols, 0);
  for (size_t i = 0; i < pivot_col.size(); ++i) out.particular[pivot_col[i]] = b[i];
  std::vector<bool> is_pivot(cols, false);
  for (size_t c : pivot_col) is_pivot[c] = true;
  for (size_t c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<unsigned> v(cols, 0);
    v[c] = 1;
    for (size_t i = 0; i < pivot_col.size(); ++i)
      v[pivot_col[i]] = (p - A[i][c]) % p;
    out.kernel.push_back(std::move(v));
  }
  return out;
}

std::vector<std::vector<Sym>> annihilator(const Field& F,
                                          const std::vector<std::vector<Sym>>& generators,
                                          size_t k) {
  unsigned p = F.p(), m = F.m();
  // Unknowns: F_p coordinates c_{v,j} of c_v in the polynomial basis.
  // <c, h> = sum_v Tr(c_v h_v) = sum_{v,j} c_{v,j} Tr(x^j * h_v).
  FpSystem sys;
  sys.p = p;
  sys.ncols = m * k;
  for (const auto& h : generators) {
    if (h.size() != k) throw std::invalid_argument("generator length mismatch");
    std::vector<unsigned> row(m * k, 0);
    for (size_t v = 0; v < k; ++v)
      for (unsigned j = 0; j < m; ++j)
        row[v * m + j] = F.trace(F.mul(F.basis(j), h[v]));
    sys.rows.push_back(std::move(row));
    sys.rhs.push_back(0);
  }
  if (generators.empty()) {
    sys.rows.push_back(std::vector<unsigned>(m * k, 0));
    sys.rhs.push_back(0);
  }
  FpSolution sol = fp_solve(sys);

  std::vector<std::vector<Sym>> basis;
  for (const auto& kv : sol.kernel) {
    std::vector<Sym> c(k);
    for (size_t v = 0; v < k; ++v) {
      std::vector<unsigned> cc(kv.begin() + v * m, kv.begin() + (v + 1) * m);
      c[v] = F.from_coeffs(cc);
    }
    basis.push_back(std::move(c));
  }
  return basis;
}

}  // namespace hiergap
