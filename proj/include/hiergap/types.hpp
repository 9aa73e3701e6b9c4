#pragma once

#include <cstddef>
#include <vector>

#include "hiergap/field.hpp"

namespace hiergap {

using Tuple = std::vector<Sym>;

// Predicate kinds in zero-count semantics, the form every stretched
// predicate takes: a tuple satisfies Odd/Even if its number of zero
// coordinates is odd/even, and AtLeastOneZero if some coordinate is zero.
enum class PredicateKind { Odd, Even, AtLeastOneZero };

inline size_t zero_count(const Tuple& t) {
  size_t z = 0;
  for (Sym s : t)
    if (s == 0) ++z;
  return z;
}

inline bool kind_matches(PredicateKind kind, size_t zeros) {
  switch (kind) {
    case PredicateKind::Odd:
      return zeros % 2 == 1;
    case PredicateKind::Even:
      return zeros % 2 == 0;
    case PredicateKind::AtLeastOneZero:
      return zeros >= 1;
  }
  return false;
}

inline const char* kind_name(PredicateKind kind) {
  switch (kind) {
    case PredicateKind::Odd:
      return "odd";
    case PredicateKind::Even:
      return "even";
    case PredicateKind::AtLeastOneZero:
      return "geq1zero";
  }
  return "?";
}

}  // namespace hiergap
