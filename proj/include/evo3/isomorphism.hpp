// Isomorphism decisions with explicit witnesses: invariant-based rejection,
// canonical-type comparison, and witness search over the structured
// change-of-basis families.
#ifndef EVO3_ISOMORPHISM_HPP
#define EVO3_ISOMORPHISM_HPP

#include "evo3/classifier.hpp"
#include "evo3/solve_monomial.hpp"

namespace evo3 {

struct RegimeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class IsoVerdict { Yes, No, UndecidedDistinct };
enum class IsoTier { Invariants, Canonical, WitnessSearch };

template <class K>
struct IsoResult {
  IsoVerdict verdict = IsoVerdict::UndecidedDistinct;
  IsoTier tier = IsoTier::Invariants;
  std::optional<Mat3<K>> witness;                  // for Yes
  std::string certificate;                         // for No
  std::optional<CanonicalType<K>> type1, type2;    // attached when computed
};

/// Three-tier decision. NO only from provably invariant mismatches for the
/// shared regime; YES always carries a verified witness; canonical-type
/// difference alone yields UNDECIDED-DISTINCT.
template <class K>
IsoResult<K> are_isomorphic(const Mat3<K>& m1, const Mat3<K>& m2);

enum class WitnessFamilyKind {
  Group,          // monomial matrices (S3 x (K*)^3)
  QFamily,        // the duplicated-column (c1 = 0) regime family
  QPrimeFamily,   // the annihilator-1 (c1 = c2 = 0) regime family
  Dim1Canonical,  // dim A^2 = 1, through canonical-form composition
};

/// Solve the family's free scalars so that transform(m1, P) = m2; verified
/// before returning. RegimeMismatch when m1 is outside the family's regime.
template <class K>
std::optional<Mat3<K>> find_witness_family(const Mat3<K>& m1, const Mat3<K>& m2,
                                           WitnessFamilyKind kind);

/// Exhaustive finite-grid search across all witness families; test oracle for
/// the solvers (incomplete by construction: it only sees the grid).
template <class K>
std::optional<Mat3<K>> brute_force_oracle(const Mat3<K>& m1, const Mat3<K>& m2,
                                          const std::vector<K>& scalar_grid);

/// Default oracle grid for the complex backend: roots of unity, small
/// rationals and their 2/3/7-th roots.
std::vector<Cx> default_oracle_grid();

extern template IsoResult<Cx> are_isomorphic<Cx>(const Mat3<Cx>&, const Mat3<Cx>&);
extern template IsoResult<Rational> are_isomorphic<Rational>(const Mat3<Rational>&,
                                                             const Mat3<Rational>&);

}  // namespace evo3

#endif  // EVO3_ISOMORPHISM_HPP
