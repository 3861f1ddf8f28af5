#ifndef FROBREP_JSON_IO_HPP
#define FROBREP_JSON_IO_HPP

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "frobrep/autgroup.hpp"
#include "frobrep/char_ring.hpp"
#include "frobrep/errors.hpp"
#include "frobrep/glnrep.hpp"
#include "frobrep/linalg.hpp"

// JSON encodings. A Laurent polynomial is {"terms": [{"exp", "coeff"}, ...]} in increasing
// exponent order; a weight multiset is {"weights": [{"coords", "mult"}, ...]}; a subspace is
// its echelon basis.

namespace frobrep {

using Json = nlohmann::ordered_json;

inline Json to_json(const LaurentPoly& f) {
  Json terms = Json::array();
  for (const auto& [e, c] : f.terms()) terms.push_back(Json{{"exp", e}, {"coeff", c}});
  return Json{{"terms", terms}};
}

inline LaurentPoly laurent_from_json(const Json& j, int n) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
    throw ParameterError("Laurent polynomial must be an object with a \"terms\" array");
  LaurentPoly f(n);
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || !t.contains("exp") || !t.contains("coeff") || !t["exp"].is_array() ||
        !t["coeff"].is_number_integer())
      throw ParameterError("Laurent term must be {\"exp\": [...], \"coeff\": integer}");
    Exponent e;
    try {
      e = t["exp"].get<Exponent>();
    } catch (const std::exception&) {
      throw ParameterError("Laurent exponents must be integers");
    }
    if (static_cast<int>(e.size()) != n)
      throw ParameterError("Laurent term has " + std::to_string(e.size()) + " exponents, expected " + std::to_string(n));
    f.add_term(e, t["coeff"].get<long long>());
  }
  return f;
}

inline Json to_json(const std::map<Exponent, long long>& terms) {
  Json weights = Json::array();
  for (const auto& [w, c] : terms) weights.push_back(Json{{"coords", w}, {"mult", c}});
  return Json{{"weights", weights}};
}

/// A scalar for F_p, else the F_p-coordinates over the monomial basis of A.
inline Json to_json(const AlgebraElement& a) {
  if (a.fp_dimension() == 1) return a.constant();
  return a.fp_coordinates();
}

inline Json to_json(const TestAlgebra& A) { return Json{{"p", A.prime()}, {"orders", A.orders()}}; }

/// {"n","r","p","terms":[{"exp","coeff"}]}, terms in degree-lexicographic order.
inline Json to_json(const TruncatedPolynomial& f) {
  const PolyRing& R = *f.ring();
  Json terms = Json::array();
  for (std::size_t code : R.deglex_codes())
    if (f.has_term(code)) terms.push_back(Json{{"exp", R.exponents(code)}, {"coeff", to_json(f.coefficient(code))}});
  return Json{{"n", R.n()}, {"r", R.r()}, {"p", R.prime()}, {"terms", terms}};
}

inline Json to_json(const GroupPoint& g) {
  Json images = Json::array();
  for (const auto& f : g.images()) images.push_back(to_json(f));
  return Json{{"n", g.n()}, {"r", g.r()}, {"p", g.prime()}, {"algebra", to_json(*g.algebra())}, {"images", images}};
}

inline Json to_json(const Subspace& s) {
  Json rows = Json::array();
  for (const auto& v : s.basis()) rows.push_back(v);
  return Json{{"ambient_dim", s.ambient_dim()}, {"p", s.prime()}, {"basis", rows}};
}

/// "2,1,0" or "(2,1,0)" -> {2,1,0}.
inline Weight parse_weight(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (ch != '(' && ch != ')' && ch != ' ') t.push_back(ch);
  Weight w;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw ParameterError("malformed weight '" + text + "'");
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw ParameterError("malformed weight '" + text + "'");
    }
    if (used != item.size()) throw ParameterError("malformed weight '" + text + "'");
    w.push_back(v);
  }
  if (w.empty()) throw ParameterError("empty weight");
  return w;
}

}  // namespace frobrep

#endif  // FROBREP_JSON_IO_HPP
