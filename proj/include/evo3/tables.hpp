// Machine-readable table data: canonical family rows, orbit tables, primed
// (M, P, M') identification tables, and the verification harness that checks
// every claim the tables make.
#ifndef EVO3_TABLES_HPP
#define EVO3_TABLES_HPP

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "evo3/group_action.hpp"
#include "evo3/scalar_expr.hpp"

namespace evo3 {

struct ConstraintViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ExprMat = std::array<std::array<ExprPtr, 3>, 3>;

ExprMat parse_expr_mat(const std::vector<std::vector<std::string>>& cells);

template <class K>
Mat3<K> eval_mat(const ExprMat& m, const EvalEnv<K>& env) {
  Mat3<K> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out(i, j) = eval_expr<K>(m[i][j], env);
  return out;
}

// ---------------------------------------------------------------------------
// canonical families (first-column representatives of the tables)

struct Family {
  std::string id;          // e.g. "T20.3"
  int dim_class;           // rank of every member
  ExprMat cells;           // parametric representative
  std::array<std::array<bool, 3>, 3> pattern;   // nonzero positions
  std::vector<std::pair<std::array<int, 2>, ExprPtr>> fixed;  // constant entries
  std::vector<std::string> params;
  std::vector<std::pair<std::string, ExprPtr>> readout;  // param from m_ij vars
};

const std::vector<Family>& families();
const Family* find_family(const std::string& id);

/// Number of canonical families per dim(A^2) class: {7, 57, 51}.
std::array<int, 3> family_counts();

/// Instantiate a family at a parameter assignment. Checks the nonzero pattern
/// and the rank constraint; throws ConstraintViolated otherwise.
template <class K>
Mat3<K> instantiate(const Family& f, const std::map<std::string, K>& params);

/// Read the residual parameters back off a matrix matching the family pattern.
template <class K>
std::map<std::string, K> read_params(const Family& f, const Mat3<K>& m);

// ---------------------------------------------------------------------------
// full table documents

struct OrbitTable {                 // orbit6 / orbit2 / figure shapes
  std::string id;
  std::string kind;
  int dim_class;
  std::string caption;
  std::vector<std::string> columns;              // "id", "(1,2)", ..., or "Q"
  std::vector<std::optional<Perm>> column_sigma;  // null for the Q column
  std::vector<std::vector<ExprMat>> rows;
};

struct PrimedRow {
  ExprMat m, p, mp;
  unsigned phi_root = 7;
  unsigned zeta_root = 3;
};

struct PrimedTable {
  std::string id;
  int dim_class;
  std::vector<PrimedRow> rows;
};

struct SingleTable {  // Table 1
  std::string id;
  std::string caption;
  std::vector<ExprMat> rows;
};

struct ErratumEntry {
  std::string table;
  int row = -1;
  std::string column;        // orbit label, "P", "M'", or "" for structural
  std::optional<std::array<int, 2>> cell;
  std::string note;
};

/// Replace the embedded errata with an external file; must be called before
/// any table data is first accessed.
void set_errata_override(const std::string& json_path);

const SingleTable& table1();
const std::vector<OrbitTable>& orbit_tables();
/// Tables 8..13: each listed cell is its own canonical family (no orbit columns).
const std::vector<OrbitTable>& family_cell_tables();
const std::vector<PrimedTable>& primed_tables();
const std::vector<ErratumEntry>& errata();
bool has_erratum(const std::string& table, int row);
/// Errata-corrected M' for a primed row, when one is recorded.
std::optional<ExprMat> corrected_mp(const std::string& table, int row);

// ---------------------------------------------------------------------------
// verification harness

struct RowReport {
  std::string table;
  int row = 0;
  bool pass = false;
  bool via_erratum = false;
  std::string detail;
};

struct VerifyOptions {
  int samples_per_row = 5;
  uint64_t seed = 20240317;
  std::string filter;  // verify only tables whose id starts with this
};

/// Checks that each non-first cell of every orbit-table row equals
/// act_permutation(column sigma, first cell) (and the figure Q-columns equal
/// the Q action). Exact over the rational backend on integer samples.
template <class K>
std::vector<RowReport> verify_row_orbits(const VerifyOptions& opt);

/// Checks every primed row: is_natural_change(M, P) and transform(M, P) = M'
/// at sampled parameters, enumerating radical branches. Rows that fail as
/// printed pass only when an erratum records a verifying correction.
std::vector<RowReport> verify_primed_rows(const VerifyOptions& opt);

/// The set S display: canonical col2 = col3 representatives.
const std::vector<ExprMat>& set_s();

}  // namespace evo3

#endif  // EVO3_TABLES_HPP
