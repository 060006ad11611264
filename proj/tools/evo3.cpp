// Command-line front end: invariants, classification, isomorphism testing,
// change verification and table verification.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "evo3/isomorphism.hpp"
#include "evo3/tables.hpp"

using nlohmann::json;
using namespace evo3;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitParse = 2;
constexpr int kExitRoot = 3;

struct Options {
  std::string field = "complex";
  double tol = 1e-9;
  bool pretty = false;
  uint64_t seed = 20240317;
};

json read_json_file(const std::string& path) {
  if (path == "-") {
    json j;
    std::cin >> j;
    return j;
  }
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  in >> j;
  return j;
}

template <class K>
Mat3<K> parse_matrix_doc(const json& doc) {
  const json& m = doc.contains("matrix") ? doc.at("matrix") : doc;
  if (!m.is_array() || m.size() != 3) throw ParseError("matrix must be 3x3");
  Mat3<K> out;
  for (int i = 0; i < 3; ++i) {
    if (!m[i].is_array() || m[i].size() != 3) throw ParseError("matrix must be 3x3");
    for (int j = 0; j < 3; ++j) {
      if (m[i][j].is_number()) {
        out(i, j) = parse_scalar<K>(m[i][j].dump());
      } else {
        out(i, j) = parse_scalar<K>(m[i][j].get<std::string>());
      }
    }
  }
  return out;
}

template <class K>
std::string field_name();
template <>
std::string field_name<Cx>() { return "complex"; }
template <>
std::string field_name<Rational>() { return "rational"; }

template <class K>
json mat_json(const Mat3<K>& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) {
    json r = json::array();
    for (int j = 0; j < 3; ++j) r.push_back(to_string(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

json profile_json(const InvariantProfile& p) {
  json j{{"dim_square", p.dim_square}, {"ann_dim", p.ann_dim},
         {"zero_count", p.zero_count}, {"diag_zero_count", p.diag_zero_count},
         {"rank", p.rank}};
  if (p.extension_property) j["extension_property"] = *p.extension_property;
  if (p.property_2li) j["property_2li"] = *p.property_2li;
  if (p.pd2ei) j["pd2ei"] = *p.pd2ei;
  return j;
}

template <class K>
json type_json(const CanonicalType<K>& t) {
  json params = json::array();
  for (const auto& [name, value] : t.params)
    params.push_back({{"name", name}, {"value", to_string(value)}});
  json j{{"dim", t.dim_class},
         {"table", t.table},
         {"row", t.row},
         {"params", params},
         {"canonical_matrix", mat_json(t.canonical_matrix)}};
  if (t.near_branch_boundary) j["near_branch_boundary"] = true;
  return j;
}

void emit(const json& j, const Options& opt) {
  if (opt.pretty)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << j.dump() << "\n";
}

template <class K>
int cmd_invariants(const std::string& input, const Options& opt) {
  Mat3<K> m = parse_matrix_doc<K>(read_json_file(input));
  json j = profile_json(invariant_profile(m));
  j["field"] = field_name<K>();
  emit(j, opt);
  return kExitOk;
}

template <class K>
int cmd_classify(const std::string& input, const Options& opt) {
  Mat3<K> m = parse_matrix_doc<K>(read_json_file(input));
  ClassificationResult<K> r = classify(m);
  json j{{"field", field_name<K>()},
         {"type", type_json(r.type)},
         {"witness", mat_json(r.witness)},
         {"profile", profile_json(r.profile)}};
  emit(j, opt);
  return kExitOk;
}

template <class K>
int cmd_isomorphic(const std::string& a, const std::string& b, const Options& opt) {
  Mat3<K> m1 = parse_matrix_doc<K>(read_json_file(a));
  Mat3<K> m2 = parse_matrix_doc<K>(read_json_file(b));
  IsoResult<K> r = are_isomorphic(m1, m2);
  json j{{"field", field_name<K>()}};
  j["verdict"] = r.verdict == IsoVerdict::Yes  ? "yes"
                 : r.verdict == IsoVerdict::No ? "no"
                                               : "undecided-distinct";
  j["tier"] = r.tier == IsoTier::Invariants  ? "invariants"
              : r.tier == IsoTier::Canonical ? "canonical"
                                             : "witness-search";
  if (r.witness) {
    j["witness"] = mat_json(*r.witness);
    try {
      GroupElement<K> g = group_element_from_matrix(*r.witness);
      json scal = json::array();
      for (const auto& s : g.scalars) scal.push_back(to_string(s));
      j["witness_group"] = {{"perm", {g.sigma.map[0], g.sigma.map[1], g.sigma.map[2]}},
                            {"scalars", scal}};
    } catch (const std::invalid_argument&) {
    }
  }
  if (!r.certificate.empty()) j["certificate"] = r.certificate;
  if (r.type1) j["type1"] = type_json(*r.type1);
  if (r.type2) j["type2"] = type_json(*r.type2);
  emit(j, opt);
  return kExitOk;
}

template <class K>
int cmd_verify_change(const std::string& mpath, const std::string& ppath,
                      const Options& opt) {
  Mat3<K> m = parse_matrix_doc<K>(read_json_file(mpath));
  Mat3<K> p = parse_matrix_doc<K>(read_json_file(ppath));
  bool natural = is_natural_change(m, p);
  json j{{"field", field_name<K>()}, {"is_natural_change", natural}};
  if (natural) j["transformed"] = mat_json(transform(m, p));
  emit(j, opt);
  return natural ? kExitOk : kExitFail;
}

int cmd_verify_tables(const std::string& filter, const Options& opt, bool rational) {
  VerifyOptions vopt;
  vopt.seed = opt.seed;
  vopt.filter = filter;
  std::vector<RowReport> reports;
  if (rational) {
    reports = verify_row_orbits<Rational>(vopt);
  } else {
    reports = verify_row_orbits<Cx>(vopt);
    auto primed = verify_primed_rows(vopt);
    reports.insert(reports.end(), primed.begin(), primed.end());
  }
  int failed = 0, erratum = 0;
  json rows = json::array();
  for (const auto& r : reports) {
    if (!r.pass) ++failed;
    if (r.via_erratum) ++erratum;
    rows.push_back({{"table", r.table},
                    {"row", r.row},
                    {"pass", r.pass},
                    {"via_erratum", r.via_erratum},
                    {"detail", r.detail}});
  }
  json j{{"rows", rows},
         {"checked", reports.size()},
         {"failed", failed},
         {"passed_via_erratum", erratum}};
  emit(j, opt);
  if (!opt.pretty)
    std::cerr << "verified " << reports.size() << " rows, " << failed << " failed, "
              << erratum << " passed via errata\n";
  return failed == 0 ? kExitOk : kExitFail;
}

template <class K>
int dispatch(const std::string& cmd, const std::vector<std::string>& args,
             const Options& opt) {
  if (cmd == "invariants") return cmd_invariants<K>(args.at(0), opt);
  if (cmd == "classify") return cmd_classify<K>(args.at(0), opt);
  if (cmd == "isomorphic") return cmd_isomorphic<K>(args.at(0), args.at(1), opt);
  if (cmd == "verify-change") return cmd_verify_change<K>(args.at(0), args.at(1), opt);
  throw std::logic_error("bad command");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"three-dimensional evolution algebras: classification tools"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--field", opt.field, "scalar field backend")
      ->check(CLI::IsMember({"complex", "rational"}));
  app.add_option("--tol", opt.tol, "relative tolerance (complex backend)");
  bool json_flag = false;
  app.add_flag("--json", json_flag, "compact JSON output (default)");
  app.add_flag("--pretty", opt.pretty, "indent JSON output");
  app.add_option("--seed", opt.seed, "seed for sampled verification");

  std::string in_a, in_b, filter;

  auto* inv = app.add_subcommand("invariants", "algebraic invariants of a matrix");
  inv->add_option("matrix", in_a, "matrix document (JSON file or '-')")->required();

  auto* cls = app.add_subcommand("classify", "canonical form, type and witness");
  cls->add_option("matrix", in_a)->required();

  auto* iso = app.add_subcommand("isomorphic", "isomorphism decision with witness");
  iso->add_option("a", in_a)->required();
  iso->add_option("b", in_b)->required();

  auto* vc = app.add_subcommand("verify-change", "check a basis-change matrix");
  vc->add_option("matrix", in_a)->required();
  vc->add_option("change", in_b)->required();

  auto* vt = app.add_subcommand("verify-tables", "re-verify the built-in classification tables");
  vt->add_option("filter", filter, "only tables whose id starts with this");
  std::string errata_path;
  vt->add_option("--errata", errata_path, "errata file overriding the embedded one");

  CLI11_PARSE(app, argc, argv);
  set_complex_tolerance(opt.tol);

  try {
    std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "verify-tables") {
      if (!errata_path.empty()) set_errata_override(errata_path);
      return cmd_verify_tables(filter, opt, opt.field == "rational");
    }
    std::vector<std::string> args;
    if (!in_a.empty()) args.push_back(in_a);
    if (!in_b.empty()) args.push_back(in_b);
    if (opt.field == "rational") return dispatch<Rational>(cmd, args, opt);
    return dispatch<Cx>(cmd, args, opt);
  } catch (const RootUnavailable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRoot;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
