// JSON and text formats: big integers as decimal strings, matrices,
// lattices, coset space shapes, family specs, polynomials and records.
//
// Polynomial grammar (one variable x, integer coefficients):
//   poly := ['+'|'-'] term (('+'|'-') term)*
//   term := INT | [INT ['*']] 'x' ['^' INT]
// e.g. "x^2-3x+1", "-2*x^3 + x - 7". A JSON array is read as coefficients
// with the constant term first.

#ifndef POLYFLAT_IO_HPP_
#define POLYFLAT_IO_HPP_

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "constructions.hpp"
#include "core.hpp"
#include "exact.hpp"
#include "profiler.hpp"
#include "quotients.hpp"

namespace polyflat {

using Json = nlohmann::json;

namespace io {

inline void reject_unknown_keys(const Json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
  if (!obj.is_object())
    fail(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      fail("unknown key '" + key + "' in " + where);
}

inline const Json& require(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key))
    fail("missing key '" + key + "' in " + where);
  return obj.at(key);
}

// INTEGERS

inline Int int_from_json(const Json& j) {
  if (j.is_number_integer())
    return j.is_number_unsigned() ? Int(j.get<std::uint64_t>()) : Int(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() == start || !std::all_of(s.begin() + static_cast<long>(start), s.end(),
                                          [](unsigned char c) { return std::isdigit(c); }))
      fail("'" + s + "' is not a decimal integer");
    return Int(s[0] == '+' ? s.substr(1) : s);
  }
  fail("expected an integer (number or decimal string), got " + j.dump());
}

inline std::int64_t small_int(const Json& j, const std::string& what) {
  Int v = int_from_json(j);
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    fail(what + " does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

inline std::uint64_t positive_int(const Json& j, const std::string& what) {
  std::int64_t v = small_int(j, what);
  if (v < 1)
    fail(what + " must be positive");
  return static_cast<std::uint64_t>(v);
}

inline Json to_json(const Int& x) { return x.str(); }

// MATRICES AND LATTICES

inline std::vector<IntVector> rows_from_json(const Json& j, const std::string& what) {
  if (!j.is_array())
    fail(what + " must be an array of rows");
  std::vector<IntVector> rows;
  for (const auto& row : j) {
    if (!row.is_array())
      fail(what + " must be an array of rows");
    IntVector r;
    for (const auto& x : row)
      r.push_back(int_from_json(x));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline IntMatrix matrix_from_json(const Json& j) {
  auto rows = rows_from_json(j, "matrix");
  if (rows.empty())
    fail("matrix must have at least one row");
  for (const auto& r : rows)
    if (r.size() != rows.size())
      fail("matrix must be square");
  return IntMatrix::from_rows(rows);
}

inline std::vector<IntMatrix> matrices_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    fail("expected a nonempty array of matrices");
  std::vector<IntMatrix> out;
  for (const auto& m : j)
    out.push_back(matrix_from_json(m));
  return out;
}

inline Json rows_to_json(const std::vector<IntVector>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row = Json::array();
    for (const auto& x : r)
      row.push_back(to_json(x));
    out.push_back(std::move(row));
  }
  return out;
}

inline Json to_json(const IntMatrix& m) { return rows_to_json(m.rows()); }
inline Json to_json(const Lattice& l) { return rows_to_json(l.basis()); }

inline Lattice lattice_from_json(const Json& j, std::size_t dim) {
  auto rows = rows_from_json(j, "lattice");
  for (const auto& r : rows)
    if (r.size() != dim)
      fail("lattice rows must have length " + std::to_string(dim));
  return hnf(std::move(rows), dim);
}

// POLYNOMIALS

inline IntPoly parse_poly(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch)))
      s += ch;
  if (s.empty())
    fail("empty polynomial");
  std::size_t i = 0;
  IntVector coeffs;
  auto digits = [&]() {
    std::size_t from = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
      ++i;
    return s.substr(from, i - from);
  };
  auto bad = [&]() { fail("cannot parse polynomial '" + text + "' at position " + std::to_string(i)); };
  bool first = true;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      bad();
    }
    first = false;
    std::string num = digits();
    Int coeff = num.empty() ? Int(1) : Int(num);
    std::size_t power = 0;
    if (i < s.size() && s[i] == '*') {
      if (num.empty())
        bad();
      ++i;
      if (i >= s.size() || s[i] != 'x')
        bad();
    }
    if (i < s.size() && s[i] == 'x') {
      ++i;
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::string e = digits();
        if (e.empty() || e.size() > 6)
          bad();
        power = std::stoul(e);
      }
    } else if (num.empty()) {
      bad();
    }
    if (coeffs.size() <= power)
      coeffs.resize(power + 1);
    coeffs[power] += sign * coeff;
  }
  return IntPoly(std::move(coeffs));
}

inline std::string format_poly(const IntPoly& f) {
  if (f.is_zero())
    return "0";
  std::ostringstream out;
  bool first = true;
  for (int k = f.degree(); k >= 0; --k) {
    Int c = f[static_cast<std::size_t>(k)];
    if (c == 0)
      continue;
    if (c < 0)
      out << '-';
    else if (!first)
      out << '+';
    Int a = abs(c);
    if (a != 1 || k == 0)
      out << a;
    if (k >= 1)
      out << 'x';
    if (k >= 2)
      out << '^' << k;
    first = false;
  }
  return out.str();
}

inline IntPoly poly_from_json(const Json& j) {
  if (j.is_string())
    return parse_poly(j.get<std::string>());
  if (j.is_array()) {
    IntVector c;
    for (const auto& x : j)
      c.push_back(int_from_json(x));
    IntPoly f(std::move(c));
    if (f.is_zero())
      fail("zero polynomial");
    return f;
  }
  fail("polynomial must be an expression string or a coefficient array");
}

// SHAPES

inline Json shape_to_json(const TriangularQuotient& t) {
  Json comms = Json::array();
  for (const auto& r : t.relations())
    for (std::size_t k = 0; k < t.arity(); ++k)
      if (r.value[k] != 0)
        comms.push_back({r.i + 1, r.j + 1, k + 1, r.value[k]});
  Json central = Json::array();
  for (bool b : t.central_flags())
    central.push_back(b);
  return {{"shape", "triangular"},
          {"h", t.arity()},
          {"commutators", comms},
          {"moduli", t.moduli()},
          {"central", central},
          {"names", t.names()}};
}

inline Json shape_to_json(const LatticeSemidirectQuotient& l) {
  Json ms = Json::array();
  for (const auto& m : l.matrices())
    ms.push_back(to_json(m));
  return {{"shape", "lattice_semidirect"},
          {"matrices", ms},
          {"lattice", to_json(l.lattice())},
          {"torsion", l.torsion()}};
}

inline Json shape_to_json(const ZpZrGroup& z) {
  return {{"shape", "zpzr"},
          {"p", z.p()},
          {"r", z.r()},
          {"m", z.multiplier()},
          {"translations", z.translations()}};
}

inline Json shape_to_json(const CosetSpace& s) {
  return std::visit([](const auto& x) { return shape_to_json(x); }, s.shape());
}

inline TriangularQuotient triangular_from_json(const Json& j) {
  reject_unknown_keys(j, {"shape", "h", "commutators", "moduli", "central", "names"}, "triangular shape");
  std::size_t h = positive_int(require(j, "h", "triangular shape"), "h");
  std::vector<TriangularQuotient::Relation> rels;
  if (j.contains("commutators")) {
    for (const auto& c : j.at("commutators")) {
      if (!c.is_array() || c.size() != 4)
        fail("commutator entries are [i, j, k, exponent] with 1-based indices");
      std::uint64_t i = positive_int(c[0], "i"), jj = positive_int(c[1], "j"),
                    k = positive_int(c[2], "k");
      if (i > h || jj > h || k > h)
        fail("commutator index out of range");
      auto it = std::find_if(rels.begin(), rels.end(), [&](const auto& r) {
        return r.i == i - 1 && r.j == jj - 1;
      });
      if (it == rels.end()) {
        rels.push_back({i - 1, jj - 1, Coords(h, 0)});
        it = rels.end() - 1;
      }
      it->value[k - 1] += small_int(c[3], "commutator exponent");
    }
  }
  std::vector<std::int64_t> moduli;
  for (const auto& q : require(j, "moduli", "triangular shape"))
    moduli.push_back(small_int(q, "modulus"));
  std::vector<bool> central;
  if (j.contains("central"))
    for (const auto& b : j.at("central")) {
      if (!b.is_boolean())
        fail("central flags must be booleans");
      central.push_back(b.get<bool>());
    }
  std::vector<std::string> names;
  if (j.contains("names"))
    names = j.at("names").get<std::vector<std::string>>();
  return TriangularQuotient(h, std::move(rels), std::move(moduli), std::move(central),
                            std::move(names));
}

inline Shape shape_from_json(const Json& j) {
  if (!j.is_object())
    fail("shape must be a JSON object");
  std::string kind = require(j, "shape", "shape").get<std::string>();
  if (kind == "triangular")
    return triangular_from_json(j);
  if (kind == "zpzr") {
    reject_unknown_keys(j, {"shape", "p", "r", "m", "translations"}, "zpzr shape");
    std::vector<u64> tr{1};
    if (j.contains("translations")) {
      tr.clear();
      for (const auto& t : j.at("translations"))
        tr.push_back(static_cast<u64>(small_int(t, "translation")));
    }
    return ZpZrGroup(positive_int(require(j, "p", "zpzr shape"), "p"),
                     positive_int(require(j, "r", "zpzr shape"), "r"),
                     positive_int(require(j, "m", "zpzr shape"), "m"), tr);
  }
  if (kind == "lattice_semidirect") {
    reject_unknown_keys(j, {"shape", "matrices", "lattice", "torsion"}, "lattice_semidirect shape");
    auto ms = matrices_from_json(require(j, "matrices", "lattice_semidirect shape"));
    Lattice l = lattice_from_json(require(j, "lattice", "lattice_semidirect shape"), ms[0].dim());
    std::vector<std::int64_t> torsion;
    for (const auto& r : require(j, "torsion", "lattice_semidirect shape")) {
      if (r.is_string() && r.get<std::string>() == "infinite")
        fail("infinite torsion is not allowed in a finite coset space");
      torsion.push_back(small_int(r, "torsion modulus"));
    }
    return LatticeSemidirectQuotient(std::move(ms), std::move(l), std::move(torsion));
  }
  fail("unknown shape '" + kind + "'");
}

// FAMILY SPECS

inline Variant variant_from_string(const std::string& s) {
  if (s == "1")
    return Variant::one;
  if (s == "ord")
    return Variant::ord;
  fail("variant must be \"1\", \"ord\" or \"both\"");
}

inline FamilySpec family_from_json(const Json& j) {
  reject_unknown_keys(j, {"kind", "matrix", "matrices", "p_min", "p_max", "n_min", "n_max", "variant"},
                      "family spec");
  FamilySpec f;
  std::string kind = require(j, "kind", "family spec").get<std::string>();
  if (kind == "heis_quotients")
    f.kind = FamilyKind::heis_quotients;
  else if (kind == "heis_cosets")
    f.kind = FamilyKind::heis_cosets;
  else if (kind == "zn_by_z")
    f.kind = FamilyKind::zn_by_z;
  else if (kind == "zn_by_zm")
    f.kind = FamilyKind::zn_by_zm;
  else
    fail("unknown family kind '" + kind + "'");
  if (j.contains("matrix") && j.contains("matrices"))
    fail("give either 'matrix' or 'matrices', not both");
  if (j.contains("matrix"))
    f.matrices.push_back(matrix_from_json(j.at("matrix")));
  if (j.contains("matrices"))
    f.matrices = matrices_from_json(j.at("matrices"));
  bool by_n = f.kind == FamilyKind::heis_cosets;
  std::string lo = by_n ? "n_min" : "p_min", hi = by_n ? "n_max" : "p_max";
  if (j.contains(by_n ? "p_max" : "n_max") || j.contains(by_n ? "p_min" : "n_min"))
    fail(std::string("family ") + kind + " is parameterised by " + (by_n ? "n" : "p"));
  f.param_max = positive_int(require(j, hi, "family spec"), hi);
  if (j.contains(lo))
    f.param_min = positive_int(j.at(lo), lo);
  if (j.contains("variant")) {
    std::string v = j.at("variant").get<std::string>();
    if (v == "both")
      f.variants = {Variant::one, Variant::ord};
    else
      f.variants = {variant_from_string(v)};
  }
  f.validate();
  return f;
}

inline Json to_json(const FamilySpec& f) {
  Json j{{"kind", to_string(f.kind)}};
  bool by_n = f.kind == FamilyKind::heis_cosets;
  j[by_n ? "n_min" : "p_min"] = f.param_min;
  j[by_n ? "n_max" : "p_max"] = f.param_max;
  if (!f.matrices.empty()) {
    Json ms = Json::array();
    for (const auto& m : f.matrices)
      ms.push_back(to_json(m));
    j["matrices"] = ms;
    j["variant"] = f.variants.size() == 2 ? "both" : to_string(f.variants[0]);
  }
  return j;
}

// RECORDS

inline std::string csv_header() { return "kind,param,variant,index,diameter,normal,runtime_ms"; }

inline std::string format_ms(double ms) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(3);
  out << ms;
  return out.str();
}

inline std::string csv_row(const FlatnessRecord& r) {
  std::ostringstream out;
  out << r.kind << ',' << r.param << ',' << r.variant << ',' << r.index << ','
      << (r.diameter ? std::to_string(*r.diameter) : "") << ',' << (r.normal ? "true" : "false") << ','
      << format_ms(r.runtime_ms);
  return out.str();
}

inline Json to_json(const FlatnessRecord& r) {
  Json j{{"kind", r.kind},
         {"param", r.param},
         {"variant", r.variant},
         {"index", to_json(r.index)},
         {"diameter", r.diameter ? Json(*r.diameter) : Json(nullptr)},
         {"normal", r.normal},
         {"runtime_ms", r.runtime_ms}};
  if (!r.note.empty())
    j["note"] = r.note;
  return j;
}

inline Json to_json(const ExponentFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"records_used", f.records_used},
          {"residual", f.residual}};
}

inline Json to_json(const ViolationReport& v, double alpha, double c) {
  Json j{{"alpha", alpha}, {"c", c}};
  j["witness"] = v.witness ? to_json(*v.witness) : Json(nullptr);
  j["min_ratio"] = v.min_ratio ? Json(*v.min_ratio) : Json(nullptr);
  j["min_ratio_param"] = v.min_ratio_param ? Json(*v.min_ratio_param) : Json(nullptr);
  return j;
}

}  // namespace io
}  // namespace polyflat

#endif  // POLYFLAT_IO_HPP_
