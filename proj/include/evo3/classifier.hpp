// Constructive classification of 3x3 structure matrices: every input maps to
// a canonical table row with residual parameters and an explicit witness
// basis change, following the case tree for dim A^2 in {0,1,2,3}.
#ifndef EVO3_CLASSIFIER_HPP
#define EVO3_CLASSIFIER_HPP

#include "evo3/tables.hpp"

namespace evo3 {

struct WrongDimensionClass : std::logic_error {
  using std::logic_error::logic_error;
};

template <class K>
struct CanonicalType {
  int dim_class = 0;
  std::string table;  // "0" for the zero algebra, otherwise "T1".."T24"
  int row = 0;        // 1-based row within the table's family list
  std::vector<std::pair<std::string, K>> params;  // sorted by parameter name
  Mat3<K> canonical_matrix = Mat3<K>::Constant(field_traits<K>::zero());
  bool near_branch_boundary = false;  // a branch test fell within tolerance

  std::string family_id() const {
    return dim_class == 0 ? "0" : table + "." + std::to_string(row);
  }
};

template <class K>
bool same_type(const CanonicalType<K>& a, const CanonicalType<K>& b) {
  if (a.dim_class != b.dim_class || a.table != b.table || a.row != b.row) return false;
  if (a.params.size() != b.params.size()) return false;
  for (size_t k = 0; k < a.params.size(); ++k) {
    if (a.params[k].first != b.params[k].first) return false;
    if (!field_traits<K>::eq(a.params[k].second, b.params[k].second)) return false;
  }
  return true;
}

template <class K>
struct ClassificationResult {
  CanonicalType<K> type;
  Mat3<K> witness;  // transform(input, witness) == type.canonical_matrix
  InvariantProfile profile;
};

/// Full classification; dispatches on dim A^2. Witness is verified before
/// returning. The rational backend throws RootUnavailable when a required
/// root does not exist exactly.
template <class K>
ClassificationResult<K> classify(const Mat3<K>& m);

template <class K>
ClassificationResult<K> canonicalize_dim1(const Mat3<K>& m);
template <class K>
ClassificationResult<K> canonicalize_dim2(const Mat3<K>& m);
template <class K>
ClassificationResult<K> canonicalize_dim3(const Mat3<K>& m);

/// Extension property of A^2 for dim A^2 = 1, decided by the proof's
/// criterion (independent of canonicalization).
template <class K>
bool extension_property(const Mat3<K>& m);

/// Principal degenerate two-dimensional evolution ideal, for dim A^2 = 1.
/// Decided through canonicalization; when present, a generator (coordinates
/// in the canonical basis) is returned.
template <class K>
std::pair<bool, std::optional<Vec3<K>>> has_pd2ei(const Mat3<K>& m);

/// Per-row Table 1 metadata (EP, dim ann, PD2EI).
struct Dim1RowFacts {
  bool extension_property;
  int ann_dim;
  bool pd2ei;
};
const std::array<Dim1RowFacts, 7>& table1_facts();

/// Invariant profile with the class-specific flags populated.
template <class K>
InvariantProfile invariant_profile(const Mat3<K>& m);

extern template ClassificationResult<Cx> classify<Cx>(const Mat3<Cx>&);
extern template ClassificationResult<Rational> classify<Rational>(const Mat3<Rational>&);

}  // namespace evo3

#endif  // EVO3_CLASSIFIER_HPP
