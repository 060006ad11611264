#include "evo3/tables.hpp"

#include <json.hpp>

#include <fstream>
#include <mutex>

namespace evo3 {

namespace detail {
const std::map<std::string, std::string_view>& embedded_data();
}

using nlohmann::json;

namespace {

std::string& errata_override_path() {
  static std::string path;
  return path;
}

json load_json(const std::string& name) {
  if (name == "errata.json" && !errata_override_path().empty()) {
    std::ifstream in(errata_override_path());
    if (!in) throw std::runtime_error("cannot open errata file " + errata_override_path());
    json j;
    in >> j;
    return j;
  }
  const auto& files = detail::embedded_data();
  auto it = files.find(name);
  if (it == files.end()) throw std::runtime_error("missing embedded data: " + name);
  return json::parse(it->second);
}

std::vector<std::vector<std::string>> cells_of(const json& j) {
  std::vector<std::vector<std::string>> out;
  for (const auto& row : j) {
    std::vector<std::string> r;
    for (const auto& c : row) r.push_back(c.get<std::string>());
    out.push_back(std::move(r));
  }
  return out;
}

Perm perm_from_json(const json& j) {
  Perm p;
  for (int i = 0; i < 3; ++i) p.map[i] = j[i].get<int>();
  return p;
}

struct ErrataFix {
  std::string table;
  int row;
  std::string column;
  std::optional<std::array<int, 2>> cell;
  ExprPtr corrected_cell;                  // for kind=cell
  std::optional<ExprMat> corrected_mat;    // for kind=matrix
  std::string note;
};

struct Store {
  SingleTable t1;
  std::vector<OrbitTable> orbit;
  std::vector<OrbitTable> cells;  // Tables 8..13: independent family cells
  std::vector<PrimedTable> primed;
  std::vector<Family> fams;
  std::vector<ErratumEntry> errata;
  std::vector<ErrataFix> fixes;
  std::vector<ExprMat> sets;
};

const char* kTableFiles[] = {
    "t01.json", "t02.json", "t03.json", "t04.json", "t05.json", "t06.json",
    "t07.json", "t08.json", "t09.json", "t10.json", "t11.json", "t12.json",
    "t13.json", "t14.json", "t15.json", "t16.json", "t17.json", "t18.json",
    "t19.json", "t20.json", "t21.json", "t22.json", "t23.json", "t24.json",
    "t02p.json", "t03p.json", "t04p.json", "t05p.json", "t06p.json",
    "t07p.json", "t09p.json", "t10p.json", "t11p.json", "t12p.json",
    "t13p.json", "t16p.json", "t17p.json", "t19p.json", "t20p.json",
    "t21p.json", "t22p.json", "t23p.json",
    "f1.json", "f2.json", "f3.json", "f4.json", "f5.json"};

// the eight set-S representatives (col2 = col3 families)
const char* kSetS[8][3][3] = {
    {{"1", "0", "0"}, {"0", "1", "1"}, {"0", "alpha", "alpha"}},
    {{"0", "1", "1"}, {"1", "0", "0"}, {"alpha", "0", "0"}},
    {{"alpha", "1", "1"}, {"0", "1", "1"}, {"0", "beta", "beta"}},
    {{"0", "0", "0"}, {"1", "1", "1"}, {"alpha", "beta", "beta"}},
    {{"1", "1", "1"}, {"alpha", "0", "0"}, {"beta", "0", "0"}},
    {{"1", "0", "0"}, {"alpha", "1", "1"}, {"beta", "gamma", "gamma"}},
    {{"0", "1", "1"}, {"alpha", "1", "1"}, {"beta", "gamma", "gamma"}},
    {{"alpha", "1", "1"}, {"beta", "1", "1"}, {"gamma", "lam", "lam"}}};

Store build_store() {
  Store s;
  for (const char* fname : kTableFiles) {
    json doc = load_json(fname);
    std::string kind = doc["kind"];
    std::string id = doc["id"];
    if (kind == "single") {
      s.t1.id = id;
      s.t1.caption = doc.value("caption", "");
      for (const auto& row : doc["rows"])
        s.t1.rows.push_back(parse_expr_mat(cells_of(row["m"])));
    } else if (kind == "primed") {
      PrimedTable t;
      t.id = id;
      t.dim_class = doc["dim_class"];
      for (const auto& row : doc["rows"]) {
        PrimedRow r;
        r.m = parse_expr_mat(cells_of(row["m"]));
        r.p = parse_expr_mat(cells_of(row["p"]));
        r.mp = parse_expr_mat(cells_of(row["mp"]));
        r.phi_root = row.value("phi_root", 7);
        r.zeta_root = row.value("zeta_root", 3);
        t.rows.push_back(std::move(r));
      }
      s.primed.push_back(std::move(t));
    } else {
      OrbitTable t;
      t.id = id;
      t.kind = kind;
      t.dim_class = doc["dim_class"];
      t.caption = doc.value("caption", "");
      if (doc.contains("columns")) {
        for (const auto& c : doc["columns"]) t.columns.push_back(c.get<std::string>());
        for (const auto& cs : doc["column_sigma"]) {
          if (cs.is_null())
            t.column_sigma.push_back(std::nullopt);
          else
            t.column_sigma.push_back(perm_from_json(cs));
        }
      }
      for (const auto& row : doc["rows"]) {
        std::vector<ExprMat> cells;
        for (const auto& c : row["cells"]) cells.push_back(parse_expr_mat(cells_of(c)));
        t.rows.push_back(std::move(cells));
      }
      if (kind == "cells3")
        s.cells.push_back(std::move(t));
      else
        s.orbit.push_back(std::move(t));
    }
  }

  json fams = load_json("families.json");
  for (const auto& f : fams["families"]) {
    Family fam;
    fam.id = f["family"];
    fam.dim_class = f["dim_class"];
    fam.cells = parse_expr_mat(cells_of(f["cells"]));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) fam.pattern[i][j] = f["pattern"][i][j].get<int>() != 0;
    for (const auto& fx : f["fixed"])
      fam.fixed.push_back({{fx["pos"][0].get<int>(), fx["pos"][1].get<int>()},
                           parse_expr(fx["value"].get<std::string>())});
    for (const auto& p : f["params"]) fam.params.push_back(p.get<std::string>());
    for (const auto& r : f["readout"])
      fam.readout.push_back({r["param"].get<std::string>(),
                             parse_expr(r["expr"].get<std::string>())});
    s.fams.push_back(std::move(fam));
  }

  json err = load_json("errata.json");
  for (const auto& e : err) {
    ErratumEntry entry;
    entry.table = e["table"];
    entry.row = e.value("row", -1);
    entry.column = e.value("column", "");
    if (e.contains("cell") && !e["cell"].is_null())
      entry.cell = std::array<int, 2>{e["cell"][0].get<int>(), e["cell"][1].get<int>()};
    entry.note = e.value("note", "");
    s.errata.push_back(entry);

    ErrataFix fix;
    fix.table = entry.table;
    fix.row = entry.row;
    fix.column = entry.column;
    fix.cell = entry.cell;
    fix.note = entry.note;
    if (e.contains("corrected") && !e["corrected"].is_null()) {
      if (e["corrected"].is_string())
        fix.corrected_cell = parse_expr(e["corrected"].get<std::string>());
      else if (e["corrected"].is_array() && e.value("kind", "") != "structural")
        fix.corrected_mat = parse_expr_mat(cells_of(e["corrected"]));
    }
    s.fixes.push_back(std::move(fix));
  }

  for (auto& m : kSetS) {
    std::vector<std::vector<std::string>> cells(3, std::vector<std::string>(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) cells[i][j] = m[i][j];
    s.sets.push_back(parse_expr_mat(cells));
  }
  return s;
}

const Store& store() {
  static const Store s = build_store();
  return s;
}

}  // namespace

ExprMat parse_expr_mat(const std::vector<std::vector<std::string>>& cells) {
  if (cells.size() != 3) throw ParseError("matrix is not 3x3");
  ExprMat out;
  for (int i = 0; i < 3; ++i) {
    if (cells[i].size() != 3) throw ParseError("matrix is not 3x3");
    for (int j = 0; j < 3; ++j) out[i][j] = parse_expr(cells[i][j]);
  }
  return out;
}

const std::vector<Family>& families() { return store().fams; }

const Family* find_family(const std::string& id) {
  for (const auto& f : families())
    if (f.id == id) return &f;
  return nullptr;
}

std::array<int, 3> family_counts() {
  std::array<int, 3> c{0, 0, 0};
  for (const auto& f : families()) c[f.dim_class - 1]++;
  return c;
}

void set_errata_override(const std::string& json_path) {
  errata_override_path() = json_path;
}

const SingleTable& table1() { return store().t1; }
const std::vector<OrbitTable>& orbit_tables() { return store().orbit; }
const std::vector<OrbitTable>& family_cell_tables() { return store().cells; }
const std::vector<PrimedTable>& primed_tables() { return store().primed; }
const std::vector<ErratumEntry>& errata() { return store().errata; }
const std::vector<ExprMat>& set_s() { return store().sets; }

std::optional<ExprMat> corrected_mp(const std::string& table, int row) {
  for (const auto& f : store().fixes)
    if (f.table == table && f.row == row && f.column == "M'" && f.corrected_mat)
      return f.corrected_mat;
  return std::nullopt;
}

bool has_erratum(const std::string& table, int row) {
  for (const auto& e : store().errata)
    if (e.table == table && e.row == row) return true;
  return false;
}

template <class K>
Mat3<K> instantiate(const Family& f, const std::map<std::string, K>& params) {
  EvalEnv<K> env;
  env.vars = params;
  Mat3<K> m = eval_mat<K>(f.cells, env);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      bool z = field_traits<K>::is_zero(m(i, j));
      if (z == f.pattern[i][j])
        throw ConstraintViolated(f.id + ": entry (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ") violates the nonzero pattern");
    }
  if (rank3(m) != f.dim_class)
    throw ConstraintViolated(f.id + ": parameters break the rank constraint");
  return m;
}

template <class K>
std::map<std::string, K> read_params(const Family& f, const Mat3<K>& m) {
  EvalEnv<K> env;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      env.vars["m" + std::to_string(i + 1) + std::to_string(j + 1)] = m(i, j);
  std::map<std::string, K> out;
  for (const auto& [name, expr] : f.readout) out[name] = eval_expr<K>(expr, env);
  return out;
}

template Mat3<Cx> instantiate<Cx>(const Family&, const std::map<std::string, Cx>&);
template Mat3<Rational> instantiate<Rational>(const Family&,
                                              const std::map<std::string, Rational>&);
template std::map<std::string, Cx> read_params<Cx>(const Family&, const Mat3<Cx>&);
template std::map<std::string, Rational> read_params<Rational>(const Family&,
                                                               const Mat3<Rational>&);

// ---------------------------------------------------------------------------
// verification harness

namespace {

std::vector<std::string> expr_params(const ExprMat& m) {
  std::vector<std::string> out;
  std::vector<ExprPtr> stack;
  for (const auto& row : m)
    for (const auto& e : row) stack.push_back(e);
  while (!stack.empty()) {
    ExprPtr e = stack.back();
    stack.pop_back();
    if (e->kind == Expr::Kind::Symbol && e->text != "i" && e->text != "zeta3" &&
        e->text != "phi7") {
      if (std::find(out.begin(), out.end(), e->text) == out.end()) out.push_back(e->text);
    }
    for (const auto& a : e->args) stack.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> row_params(std::initializer_list<const ExprMat*> mats) {
  std::vector<std::string> out;
  for (const ExprMat* m : mats)
    for (const auto& p : expr_params(*m))
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

const ErrataFix* find_fix(const std::string& table, int row, const std::string& column,
                          std::optional<std::array<int, 2>> cell = std::nullopt) {
  for (const auto& f : store().fixes) {
    if (f.table != table || f.row != row || f.column != column) continue;
    if (cell && (!f.cell || *f.cell != *cell)) continue;
    return &f;
  }
  return nullptr;
}

// joint radical keys over a list of matrices
std::vector<std::pair<std::string, unsigned>> mat_radical_keys(
    std::initializer_list<const ExprMat*> mats) {
  std::vector<std::pair<std::string, unsigned>> keys;
  for (const ExprMat* m : mats)
    for (const auto& row : *m)
      for (const auto& e : row)
        for (auto& k : radical_keys(e))
          if (std::find(keys.begin(), keys.end(), k) == keys.end())
            keys.push_back(std::move(k));
  return keys;
}

// verify transform(M, P) == M' at one sample, allowing any consistent root
// branches in M and P jointly and per-cell branches in M'
bool primed_sample_ok(const ExprMat& me, const ExprMat& pe, const ExprMat& mpe,
                      const EvalEnv<Cx>& base_env) {
  auto keys = mat_radical_keys({&me, &pe});
  size_t combos = 1;
  for (auto& [_, q] : keys) combos *= q;
  if (combos > 20000) return false;

  std::vector<unsigned> idx(keys.size(), 0);
  for (size_t step = 0; step < combos; ++step) {
    EvalEnv<Cx> env = base_env;
    for (size_t k = 0; k < keys.size(); ++k) env.branches[keys[k]] = idx[k];
    bool ok = true;
    Mat3<Cx> m, p;
    try {
      m = eval_mat<Cx>(me, env);
      p = eval_mat<Cx>(pe, env);
      if (!is_natural_change(m, p)) ok = false;
    } catch (const std::exception&) {
      ok = false;
    }
    if (ok) {
      Mat3<Cx> t = transform(m, p, /*force=*/true);
      for (int i = 0; i < 3 && ok; ++i)
        for (int j = 0; j < 3 && ok; ++j) {
          const ExprPtr& cell = mpe[i][j];
          bool cell_ok = false;
          auto extra = radical_keys(cell);
          std::erase_if(extra, [&](const auto& k) {
            return std::find(keys.begin(), keys.end(), k) != keys.end();
          });
          size_t cc = 1;
          for (auto& [_, q] : extra) cc *= q;
          std::vector<unsigned> cidx(extra.size(), 0);
          for (size_t cs = 0; cs < cc && !cell_ok; ++cs) {
            EvalEnv<Cx> env2 = env;
            for (size_t k = 0; k < extra.size(); ++k) env2.branches[extra[k]] = cidx[k];
            try {
              if (approx_eq(eval_expr<Cx>(cell, env2), t(i, j))) cell_ok = true;
            } catch (const std::exception&) {
            }
            for (size_t k = 0; k < extra.size(); ++k) {
              if (++cidx[k] < extra[k].second) break;
              cidx[k] = 0;
            }
          }
          if (!cell_ok) ok = false;
        }
    }
    if (ok) return true;
    for (size_t k = 0; k < keys.size(); ++k) {
      if (++idx[k] < keys[k].second) break;
      idx[k] = 0;
    }
  }
  return false;
}

}  // namespace

std::vector<RowReport> verify_primed_rows(const VerifyOptions& opt) {
  std::vector<RowReport> out;
  for (const auto& table : primed_tables()) {
    if (!opt.filter.empty() && table.id.rfind(opt.filter, 0) != 0) continue;
    std::mt19937_64 rng(opt.seed);
    for (size_t ri = 0; ri < table.rows.size(); ++ri) {
      const PrimedRow& row = table.rows[ri];
      auto params = row_params({&row.m, &row.p, &row.mp});
      std::uniform_real_distribution<double> re(0.3, 2.1), im(-1.3, 1.3);

      auto run = [&](const ExprMat& mp) {
        std::mt19937_64 local(opt.seed + ri * 7919);
        for (int s = 0; s < opt.samples_per_row; ++s) {
          EvalEnv<Cx> env;
          env.phi_root = row.phi_root;
          env.zeta_root = row.zeta_root;
          for (const auto& p : params) env.vars[p] = Cx(re(local), im(local));
          if (!primed_sample_ok(row.m, row.p, mp, env)) return false;
        }
        return true;
      };

      RowReport rep;
      rep.table = table.id;
      rep.row = static_cast<int>(ri);
      rep.pass = run(row.mp);
      if (!rep.pass) {
        if (const ErrataFix* fix = find_fix(table.id, static_cast<int>(ri), "M'");
            fix && fix->corrected_mat) {
          rep.pass = run(*fix->corrected_mat);
          rep.via_erratum = rep.pass;
          rep.detail = rep.pass ? "passes with the errata correction"
                                : "fails even with the errata correction";
        } else {
          rep.detail = "does not verify as printed";
        }
      }
      out.push_back(std::move(rep));
    }
  }
  return out;
}

template <class K>
std::vector<RowReport> verify_row_orbits(const VerifyOptions& opt) {
  std::vector<RowReport> out;
  for (const auto& table : orbit_tables()) {
    if (!opt.filter.empty() && table.id.rfind(opt.filter, 0) != 0) continue;
    for (size_t ri = 0; ri < table.rows.size(); ++ri) {
      const auto& cells = table.rows[ri];
      std::vector<std::string> params;
      for (const auto& c : cells)
        for (const auto& p : expr_params(c))
          if (std::find(params.begin(), params.end(), p) == params.end())
            params.push_back(p);

      RowReport rep;
      rep.table = table.id;
      rep.row = static_cast<int>(ri);
      rep.pass = true;

      std::mt19937_64 rng(opt.seed + ri);
      for (int s = 0; s < opt.samples_per_row && rep.pass; ++s) {
        EvalEnv<K> env;
        for (const auto& p : params) {
          if constexpr (field_traits<K>::exact) {
            env.vars[p] = Rational(static_cast<long>(2 + rng() % 11),
                                   static_cast<long>(1 + rng() % 5));
          } else {
            std::uniform_real_distribution<double> re(0.3, 2.1), im(-1.3, 1.3);
            env.vars[p] = Cx(re(rng), im(rng));
          }
        }
        Mat3<K> first;
        try {
          first = eval_mat<K>(cells[0], env);
        } catch (const std::exception&) {
          rep.pass = false;
          rep.detail = "first cell does not evaluate on this backend";
          break;
        }
        for (size_t ci = 1; ci < cells.size(); ++ci) {
          Mat3<K> want = eval_mat<K>(cells[ci], env);
          Mat3<K> got;
          if (table.column_sigma[ci]) {
            got = act_permutation(*table.column_sigma[ci], first);
          } else {
            // figure Q column: the Q-family action at the sampled parameters
            EvalEnv<K> qenv = env;
            ExprMat q = parse_expr_mat({{"p11", "0", "0"},
                                        {"0", "p22", "-(p32*p33)/p22"},
                                        {"0", "p32", "p33"}});
            got = transform(first, eval_mat<K>(q, qenv), /*force=*/true);
          }
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
              if (field_traits<K>::eq(got(i, j), want(i, j))) continue;
              const ErrataFix* fix =
                  find_fix(table.id, static_cast<int>(ri), table.columns[ci],
                           std::array<int, 2>{i + 1, j + 1});
              bool fixed = false;
              if (fix && fix->corrected_cell) {
                K corr = eval_expr<K>(fix->corrected_cell, env);
                fixed = field_traits<K>::eq(got(i, j), corr);
              }
              if (!fixed) {
                rep.pass = false;
                rep.detail = "cell (" + std::to_string(i + 1) + "," +
                             std::to_string(j + 1) + ") of column " + table.columns[ci] +
                             " disagrees";
              } else {
                rep.via_erratum = true;
              }
            }
        }
      }
      out.push_back(std::move(rep));
    }
  }
  return out;
}

template std::vector<RowReport> verify_row_orbits<Cx>(const VerifyOptions&);
template std::vector<RowReport> verify_row_orbits<Rational>(const VerifyOptions&);

}  // namespace evo3
