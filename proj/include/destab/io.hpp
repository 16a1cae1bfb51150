#pragma once

// JSON documents for groups, representations, points, subvarieties, search
// configurations and subgroups, plus serializers for results. Rationals are
// "p/q" strings; plain integers are accepted on input.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "destab/errors.hpp"
#include "destab/gcr.hpp"
#include "destab/group.hpp"
#include "destab/instability.hpp"
#include "destab/matrix.hpp"
#include "destab/parallel.hpp"
#include "destab/rational.hpp"
#include "destab/representation.hpp"
#include "destab/rparabolic.hpp"

namespace destab::io {

using json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void fail(const std::string& what) { throw SchemaError(what); }

inline const json& field(const json& j, const char* key) {
  if (!j.is_object()) fail(std::string("expected an object holding \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing field \"") + key + "\"");
  return *it;
}

inline const json& array(const json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  return j;
}

inline std::int64_t integer(const json& j, const char* what) {
  if (!j.is_number_integer()) fail(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

inline std::size_t count(const json& j, const char* what) {
  auto v = integer(j, what);
  if (v < 0) fail(std::string(what) + " must be nonnegative");
  return static_cast<std::size_t>(v);
}

inline bool boolean(const json& j, const char* what) {
  if (!j.is_boolean()) fail(std::string(what) + " must be a boolean");
  return j.get<bool>();
}

inline const std::string& string(const json& j, const char* what) {
  if (!j.is_string()) fail(std::string(what) + " must be a string");
  return j.get_ref<const std::string&>();
}

}  // namespace detail

// ---- primitives ----

inline Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  detail::fail("rational must be a \"p/q\" string or an integer");
}

inline json to_json(const Rational& q) { return format_rational(q); }

inline Vector vector_from_json(const json& j) {
  Vector v;
  for (const auto& x : detail::array(j, "vector")) v.push_back(rational_from_json(x));
  return v;
}

inline json to_json(const Vector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

inline Matrix matrix_from_json(const json& j) {
  const auto& rows = detail::array(j, "matrix");
  if (rows.empty()) detail::fail("matrix must have at least one row");
  std::vector<Vector> vs;
  for (const auto& r : rows) vs.push_back(vector_from_json(r));
  const auto cols = vs.front().size();
  for (const auto& r : vs)
    if (r.size() != cols) detail::fail("matrix rows have different lengths");
  return Matrix::from_rows(vs, cols);
}

inline json to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
  return out;
}

inline std::vector<Matrix> matrices_from_json(const json& j) {
  std::vector<Matrix> out;
  for (const auto& m : detail::array(j, "matrix list")) out.push_back(matrix_from_json(m));
  return out;
}

inline json to_json(const std::vector<Matrix>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(to_json(m));
  return out;
}

inline json to_json(const Character& c) { return c.weights(); }
inline json to_json(const TorusCocharacter& d) { return d.exponents(); }

inline std::vector<std::int64_t> integers_from_json(const json& j, const char* what) {
  std::vector<std::int64_t> out;
  for (const auto& x : detail::array(j, what)) out.push_back(detail::integer(x, what));
  return out;
}

// ---- group ----

inline GroupSpec group_from_json(const json& j) {
  std::vector<Factor> factors;
  for (const auto& f : detail::array(detail::field(j, "factors"), "factors")) {
    const auto& fam = detail::string(detail::field(f, "family"), "family");
    Factor fac;
    if (fam == "GL")
      fac.family = Family::GL;
    else if (fam == "SL")
      fac.family = Family::SL;
    else
      detail::fail("family must be \"GL\" or \"SL\"");
    fac.rank = detail::count(detail::field(f, "rank"), "rank");
    factors.push_back(fac);
  }
  std::optional<Matrix> gram;
  if (auto it = j.find("gram"); it != j.end()) {
    if (it->is_string()) {
      if (it->get<std::string>() != "identity") detail::fail("gram must be \"identity\" or an integer matrix");
    } else {
      gram = matrix_from_json(*it);
    }
  }
  return GroupSpec(std::move(factors), std::move(gram));
}

inline json to_json(const GroupSpec& g) {
  json f = json::array();
  for (const auto& x : g.factors()) f.push_back({{"family", to_string(x.family)}, {"rank", x.rank}});
  json out{{"factors", f}};
  if (g.norm().gram().is_identity())
    out["gram"] = "identity";
  else
    out["gram"] = to_json(g.norm().gram());
  return out;
}

// ---- representation and points ----

inline Representation representation_from_json(const json& j) {
  const auto& kind = detail::string(detail::field(j, "kind"), "kind");
  if (kind == "conjugation_tuples")
    return Representation::conjugation_tuples(detail::count(detail::field(j, "m"), "m"),
                                              detail::count(detail::field(j, "count"), "count"));
  if (kind == "sym_power") return Representation::sym_power(detail::count(detail::field(j, "degree"), "degree"));
  if (kind == "adjoint") return Representation::adjoint(detail::count(detail::field(j, "m"), "m"));
  if (kind == "direct_sum") {
    std::vector<Representation> parts;
    for (const auto& s : detail::array(detail::field(j, "summands"), "summands"))
      parts.push_back(representation_from_json(s));
    return Representation::direct_sum(std::move(parts));
  }
  detail::fail("unknown representation kind \"" + kind + "\"");
}

inline json to_json(const Representation& r) {
  switch (r.kind()) {
    case Representation::Kind::ConjugationTuples:
      return {{"kind", "conjugation_tuples"}, {"m", r.group_dim()}, {"count", r.count()}};
    case Representation::Kind::SymPower: return {{"kind", "sym_power"}, {"degree", r.degree()}};
    case Representation::Kind::Adjoint: return {{"kind", "adjoint"}, {"m", r.group_dim()}};
    case Representation::Kind::DirectSum: {
      json s = json::array();
      for (const auto& p : r.summands()) s.push_back(to_json(p));
      return {{"kind", "direct_sum"}, {"summands", s}};
    }
  }
  return {};
}

// A coordinate array, or {"matrices": [...]} for tuple representations.
inline Point point_from_json(const Representation& rep, const json& j) {
  Point p;
  if (j.is_object() && j.contains("matrices")) {
    auto ms = matrices_from_json(j.at("matrices"));
    p = point_from_matrices(ms);
  } else {
    p = Point(vector_from_json(j));
  }
  if (p.size() != rep.dim())
    detail::fail("point has " + std::to_string(p.size()) + " coordinates, representation has " +
                 std::to_string(rep.dim()));
  return p;
}

inline json to_json(const Representation& rep, const Point& p) {
  if (rep.is_conjugation()) return {{"matrices", to_json(matrices_from_point(rep, p))}};
  return to_json(p.coords);
}

// ---- cocharacters and parabolics ----

inline Cocharacter cocharacter_from_json(const GroupSpec& group, const json& j) {
  TorusCocharacter d(integers_from_json(detail::field(j, "exponents"), "exponents"));
  if (d.size() != group.dimension()) detail::fail("exponent vector length does not match the group");
  Matrix base = Matrix::identity(group.dimension());
  if (auto it = j.find("base"); it != j.end()) base = matrix_from_json(*it);
  return Cocharacter(group, std::move(base), std::move(d));
}

inline json to_json(const Cocharacter& c) {
  return {{"exponents", to_json(c.torus())}, {"base", to_json(c.base())}};
}

inline json to_json(const ParabolicDescriptor& p) {
  json flag = json::array();
  for (const auto& block : p.flag()) {
    json subs = json::array();
    for (const auto& sub : block) {
      json basis = json::array();
      for (const auto& v : sub) basis.push_back(to_json(v));
      subs.push_back(basis);
    }
    flag.push_back(subs);
  }
  return {{"cocharacter", to_json(p.cocharacter())},
          {"partition", p.partition()},
          {"proper", p.is_proper()},
          {"flag", flag}};
}

// ---- subvarieties ----

// {"kind":"zero_locus"} | {"kind":"identity_tuple"} |
// {"kind":"custom","generators":[[{"coeff":"p/q","vars":[[index,exp],...]},...],...]}
inline SubvarietySpec subvariety_from_json(const Representation& rep, const json& j) {
  const auto& kind = detail::string(detail::field(j, "kind"), "kind");
  if (kind == "zero_locus") return SubvarietySpec::zero_locus(rep);
  if (kind == "identity_tuple") return SubvarietySpec::identity_tuple(rep);
  if (kind != "custom") detail::fail("unknown subvariety kind \"" + kind + "\"");
  std::vector<Polynomial> gens;
  for (const auto& g : detail::array(detail::field(j, "generators"), "generators")) {
    Polynomial p;
    for (const auto& term : detail::array(g, "generator")) {
      std::vector<Monomial::Factor> fs;
      for (const auto& v : detail::array(detail::field(term, "vars"), "vars")) {
        if (!v.is_array() || v.size() != 2) detail::fail("monomial factor must be [index, exponent]");
        const auto idx = detail::count(v[0], "variable index");
        const auto e = detail::count(v[1], "exponent");
        if (idx >= rep.dim()) detail::fail("variable index out of range");
        fs.emplace_back(static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(e));
      }
      p += Polynomial::monomial(Monomial(std::move(fs)), rational_from_json(detail::field(term, "coeff")));
    }
    gens.push_back(std::move(p));
  }
  bool asserted = true;
  if (auto it = j.find("g_stable_asserted"); it != j.end()) asserted = detail::boolean(*it, "g_stable_asserted");
  return SubvarietySpec::custom(rep, std::move(gens), asserted);
}

inline json to_json(const SubvarietySpec& s) {
  switch (s.kind()) {
    case SubvarietySpec::Kind::ZeroLocus: return {{"kind", "zero_locus"}};
    case SubvarietySpec::Kind::IdentityTuple: return {{"kind", "identity_tuple"}};
    case SubvarietySpec::Kind::Custom: break;
  }
  json gens = json::array();
  for (const auto& g : s.generators()) {
    json terms = json::array();
    for (const auto& [mono, c] : g.terms()) {
      json vars = json::array();
      for (const auto& [v, e] : mono.factors()) vars.push_back({v, e});
      terms.push_back({{"coeff", to_json(c)}, {"vars", vars}});
    }
    gens.push_back(terms);
  }
  return {{"kind", "custom"}, {"generators", gens}, {"g_stable_asserted", s.g_stable_asserted()}};
}

// ---- search configuration ----

// {"exponent_box":B, "shear_bound":s} builds the Weyl × shear family;
// an explicit "family" list replaces it.
inline SearchConfig config_from_json(const GroupSpec& group, const json& j) {
  if (!j.is_object()) detail::fail("configuration must be an object");
  std::int64_t box = 4, shear = 1;
  if (auto it = j.find("exponent_box"); it != j.end()) box = detail::integer(*it, "exponent_box");
  if (auto it = j.find("shear_bound"); it != j.end()) shear = detail::integer(*it, "shear_bound");
  if (box < 1) detail::fail("exponent_box must be at least 1");
  if (shear < 0) detail::fail("shear_bound must be nonnegative");
  SearchConfig cfg;
  if (auto it = j.find("family"); it != j.end()) {
    cfg.exponent_box = box;
    cfg.family = matrices_from_json(*it);
  } else {
    cfg = SearchConfig::weyl_shear(group, box, shear);
  }
  if (auto it = j.find("oracle_mode"); it != j.end()) cfg.oracle_mode = detail::boolean(*it, "oracle_mode");
  if (auto it = j.find("normalizer_samples"); it != j.end()) cfg.normalizer_samples = matrices_from_json(*it);
  cfg.threads = threads_from_env();
  if (auto it = j.find("threads"); it != j.end()) {
    auto t = detail::integer(*it, "threads");
    if (t < 1) detail::fail("threads must be at least 1");
    cfg.threads = static_cast<unsigned>(t);
  }
  cfg.validate(group);
  return cfg;
}

inline json to_json(const SearchConfig& c) {
  return {{"exponent_box", c.exponent_box},
          {"shear_bound", c.shear_bound},
          {"family_size", c.family.size()},
          {"oracle_mode", c.oracle_mode},
          {"normalizer_samples", to_json(c.normalizer_samples)}};
}

// ---- subgroups and Lie subalgebras ----

inline SubgroupPresentation subgroup_from_json(const json& j) {
  return SubgroupPresentation{matrices_from_json(detail::field(j, "generators"))};
}

inline LieSubalgebra lie_from_json(const json& j) { return LieSubalgebra{matrices_from_json(detail::field(j, "basis"))}; }

// ---- results ----

inline json to_json(const OptimizationResult& r) {
  json out{{"status", to_string(r.status)}};
  if (r.lambda) out["lambda"] = to_json(*r.lambda);
  out["value_sq"] = to_json(r.value_sq);
  if (r.parabolic) out["parabolic"] = to_json(*r.parabolic);
  json active_orders = json::array(), active_supports = json::array();
  for (const auto& c : r.certificate.active_orders) active_orders.push_back(to_json(c));
  for (const auto& c : r.certificate.active_supports) active_supports.push_back(to_json(c));
  json cert{{"tori_examined", r.certificate.tori_examined},
            {"frame_index", r.certificate.frame_index},
            {"active_orders", active_orders},
            {"active_supports", active_supports},
            {"dual_checked", r.certificate.dual_checked},
            {"tied_frames", r.certificate.tied_frames},
            {"ties_share_parabolic", r.certificate.ties_share_parabolic},
            {"normalizer_outside", r.certificate.normalizer_outside}};
  if (r.certificate.oracle_value) {
    cert["oracle_value"] = to_json(*r.certificate.oracle_value);
    cert["oracle_tori"] = r.certificate.oracle_tori;
  }
  out["certificate"] = cert;
  out["global_verified"] = r.global_verified;
  out["tuple_length"] = r.tuple_length;
  out["norm_gram"] = to_json(r.norm_gram);
  return out;
}

inline json to_json(const Representation& rep, const ClosednessVerdict& v) {
  json out{{"verdict", v.closed ? "closed_within_bound" : "not_closed"}};
  if (v.witness) out["witness"] = to_json(*v.witness);
  if (v.witness_limit) out["witness_limit"] = to_json(rep, *v.witness_limit);
  out["examined"] = v.examined;
  out["admissible"] = v.admissible;
  out["bound"] = v.bound;
  out["family_size"] = v.family_size;
  return out;
}

inline json to_json(const Representation& rep, const GcrVerdict& v) {
  json out{{"status", to_string(v.status)}};
  if (v.witness) out["witness"] = to_json(*v.witness);
  if (v.witness_limit) out["witness_limit"] = to_json(rep, *v.witness_limit);
  if (!v.radical.empty()) out["radical_basis"] = to_json(v.radical);
  if (v.family_size > 0) {
    out["bounded"] = v.bounded;
    out["bound"] = v.bound;
    out["family_size"] = v.family_size;
    out["examined"] = v.examined;
    out["admissible"] = v.admissible;
  }
  return out;
}

inline json to_json(const Reduction& r) {
  json chain = json::array();
  for (const auto& c : r.chain) chain.push_back(to_json(c));
  json out{{"chain", chain}, {"m", {{"generators", to_json(r.m.generators)}}}};
  if (r.algebra_certifies) out["algebra_certifies"] = *r.algebra_certifies;
  return out;
}

inline json to_json(const CentreSimplex& c) {
  json out{{"has_centre", c.has_centre}};
  if (c.parabolic) out["simplex"] = to_json(*c.parabolic);
  out["stabilizing_samples"] = c.stabilizing_samples;
  out["optimum"] = to_json(c.optimum);
  return out;
}

}  // namespace destab::io
