#include <json.hpp>

#include "voa/error.hpp"
#include "voa/fock.hpp"

namespace voa {

namespace {

using nlohmann::json;

Scalar scalar_field(const json& j, const char* what) {
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (j.is_string()) return parse_scalar(j.get<std::string>());
  throw Error(ErrorCode::InvalidAlgebra, std::string("expected a number or expression for ") + what);
}

Rational eval_mn(const Scalar& s, std::int64_t m, std::int64_t n) {
  return s.evaluate({{"m", Rational(static_cast<long>(m))}, {"n", Rational(static_cast<long>(n))}});
}

struct TermSpec {
  int gen;
  Scalar coeff;
  std::optional<Scalar> delta;
};

struct EntrySpec {
  std::vector<TermSpec> terms;
  Scalar central_param;
  Scalar central_coeff;
  bool has_central = false;
};

BracketRule make_rule(const EntrySpec& e) {
  return [e](std::int64_t m, std::int64_t n) {
    BracketValue v;
    for (const auto& t : e.terms) {
      if (t.delta && eval_mn(*t.delta, m, n) != 0) continue;
      Rational c = eval_mn(t.coeff, m, n);
      if (c != 0) v.terms.emplace_back(t.gen, Scalar(c));
    }
    if (e.has_central && m + n == 0) v.central = e.central_param * Scalar(eval_mn(e.central_coeff, m, n));
    return v;
  };
}

bool same(const BracketValue& a, const BracketValue& b, const Scalar& sign) {
  std::map<int, Scalar> ta, tb;
  for (const auto& [g, c] : a.terms) ta[g] += c;
  for (const auto& [g, c] : b.terms) tb[g] += c * sign;
  for (const auto& [g, c] : ta)
    if (!(c == tb[g])) return false;
  for (const auto& [g, c] : tb)
    if (!(c == ta[g])) return false;
  return a.central == b.central * sign;
}

}  // namespace

std::shared_ptr<ModeAlgebra> load_algebra_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("algebra document: ") + e.what());
  }
  try {
    std::vector<GeneratorSpec> gens;
    for (const auto& g : doc.at("generators")) {
      GeneratorSpec spec;
      spec.name = g.at("name").get<std::string>();
      spec.weight = HalfInt::from_twice(g.at("weight").get<std::int64_t>());
      const std::string parity = g.value("parity", "even");
      if (parity != "even" && parity != "odd")
        throw Error(ErrorCode::InvalidAlgebra, "parity must be 'even' or 'odd'");
      spec.odd = parity == "odd";
      gens.push_back(std::move(spec));
    }
    auto alg = std::make_shared<ModeAlgebra>(doc.value("name", "custom"), gens);
    if (doc.contains("central_params"))
      alg->set_central_params(doc.at("central_params").get<std::vector<std::string>>());

    std::map<std::pair<int, int>, EntrySpec> entries;
    if (doc.contains("brackets")) {
      for (const auto& b : doc.at("brackets")) {
        const int x = alg->find(b.at("lhs").get<std::string>());
        const int y = alg->find(b.at("rhs").get<std::string>());
        EntrySpec e;
        if (b.contains("terms")) {
          for (const auto& t : b.at("terms")) {
            TermSpec ts{alg->find(t.at("gen").get<std::string>()), scalar_field(t.at("coeff"), "coeff"), {}};
            if (t.contains("delta_condition") && !t.at("delta_condition").is_null())
              ts.delta = scalar_field(t.at("delta_condition"), "delta_condition");
            e.terms.push_back(std::move(ts));
          }
        }
        if (b.contains("central") && !b.at("central").is_null()) {
          const auto& c = b.at("central");
          e.has_central = true;
          e.central_param = scalar_field(c.at("param"), "central param");
          e.central_coeff = scalar_field(c.at("coeff"), "central coeff");
        }
        if (!entries.emplace(std::make_pair(x, y), std::move(e)).second)
          throw Error(ErrorCode::InvalidAlgebra, "duplicate bracket entry");
      }
    }
    for (const auto& [key, e] : entries) {
      const auto [x, y] = key;
      auto rule = make_rule(e);
      auto rev = entries.find({y, x});
      if (rev == entries.end()) {
        alg->set_bracket(x, y, rule);
        continue;
      }
      alg->set_bracket_one_way(x, y, rule);
      auto back = make_rule(rev->second);
      const Scalar sign = (alg->odd(x) && alg->odd(y)) ? Scalar(1) : Scalar(-1);
      for (std::int64_t m = -3; m <= 3; ++m)
        for (std::int64_t n = -3; n <= 3; ++n)
          if (!same(rule(m, n), back(n, m), sign))
            throw Error(ErrorCode::InvalidAlgebra, "bracket between '" + alg->generator(x).name + "' and '" +
                                                       alg->generator(y).name + "' is not skew-symmetric");
    }
    if (doc.contains("lattice")) {
      const auto& l = doc.at("lattice");
      alg->set_lattice(l.at("N").get<int>(), alg->find(l.at("boson").get<std::string>()));
    }
    return alg;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidAlgebra, std::string("algebra document: ") + e.what());
  }
}

}  // namespace voa
