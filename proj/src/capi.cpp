#include "voa/voa.h"

#include <algorithm>
#include <json.hpp>
#include <sstream>
#include <string>

#include "voa/characters.hpp"
#include "voa/coords.hpp"
#include "voa/correlators.hpp"
#include "voa/error.hpp"
#include "voa/ope.hpp"
#include "voa/presets.hpp"

struct voa_algebra {
  voa::AlgebraInstance inst;
};

struct voa_result {
  std::string text;
  bool passed = true;
};

namespace {

using json = nlohmann::json;
using namespace voa;

thread_local std::string last_error;

voa_status status_of(ErrorCode c) { return static_cast<voa_status>(static_cast<int>(c) + 1); }

template <class F>
voa_status guarded(voa_result** out, F&& body) {
  last_error.clear();
  if (out == nullptr) {
    last_error = "null result pointer";
    return VOA_USAGE;
  }
  *out = nullptr;
  try {
    auto res = std::make_unique<voa_result>();
    body(*res);
    *out = res.release();
    return VOA_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return VOA_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw Error(ErrorCode::Usage, std::string("missing ") + what);
}

ParamPoint params_of(const char* text) { return text ? parse_param_point(text) : ParamPoint{}; }

HalfInt parse_half(const char* text, const char* what) {
  require(text, what);
  Scalar s = parse_scalar(text);
  if (!s.is_constant()) throw Error(ErrorCode::Parse, std::string(what) + " must be a number");
  const Rational twice = s.constant() * 2;
  if (twice.get_den() != 1) throw Error(ErrorCode::Parse, std::string(what) + " must be a multiple of 1/2");
  return HalfInt::from_twice(twice.get_num().get_si());
}

State at_point(State s, const ParamPoint& p) { return p.empty() ? s : s.substitute(p); }

std::vector<State> parse_list(const ModeAlgebra& alg, const char* text) {
  std::vector<State> out;
  std::string all(text);
  std::size_t start = 0;
  while (start <= all.size()) {
    std::size_t end = all.find(';', start);
    if (end == std::string::npos) end = all.size();
    std::string item = all.substr(start, end - start);
    if (item.find_first_not_of(" \t") != std::string::npos) out.push_back(alg.parse_state(item));
    start = end + 1;
  }
  if (out.empty()) throw Error(ErrorCode::Usage, "empty state list");
  return out;
}

const AlgebraInstance& instance(const voa_algebra* alg) {
  require(alg, "algebra");
  return alg->inst;
}

std::string state_list_text(const ModeAlgebra& alg, const std::vector<State>& vs) {
  std::ostringstream os;
  for (const auto& v : vs) os << "  " << alg.render(v) << "\n";
  return os.str();
}

json state_list_json(const ModeAlgebra& alg, const std::vector<State>& vs) {
  json arr = json::array();
  for (const auto& v : vs) arr.push_back(alg.render(v));
  return arr;
}

}  // namespace

extern "C" {

const char* voa_status_name(voa_status status) {
  if (status == VOA_OK) return "Ok";
  if (status == VOA_INTERNAL) return "Internal";
  if (status > VOA_OK && status < VOA_INTERNAL) return error_code_name(static_cast<ErrorCode>(status - 1));
  return "Unknown";
}

const char* voa_last_error(void) { return last_error.c_str(); }

voa_status voa_algebra_load(const char* spec, voa_algebra** out) {
  last_error.clear();
  if (out == nullptr) {
    last_error = "null algebra pointer";
    return VOA_USAGE;
  }
  *out = nullptr;
  try {
    require(spec, "algebra name");
    *out = new voa_algebra{preset_by_name(spec)};
    return VOA_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return VOA_INTERNAL;
  }
}

void voa_algebra_free(voa_algebra* alg) { delete alg; }

const char* voa_algebra_name(const voa_algebra* alg) { return alg ? alg->inst.name.c_str() : ""; }

const char* voa_result_text(const voa_result* res) { return res ? res->text.c_str() : ""; }
int voa_result_passed(const voa_result* res) { return res && res->passed ? 1 : 0; }
void voa_result_free(voa_result* res) { delete res; }

voa_status voa_verify(const voa_algebra* alg, int degree, int json_out, voa_result** out) {
  return guarded(out, [&](voa_result& r) {
    const auto& inst = instance(alg);
    if (degree < 0) degree = inst.verify_degree;
    AxiomReport rep = verify_axioms(*inst.fields, inst.name, degree);
    r.passed = rep.passed();
    r.text = json_out ? rep.to_json(inst.algebra()) + "\n" : rep.to_text(inst.algebra());
  });
}

voa_status voa_ope(const voa_algebra* alg, const char* a, const char* b, const char* params, int json_out,
                   voa_result** out) {
  return guarded(out, [&](voa_result& r) {
    const auto& inst = instance(alg);
    const ModeAlgebra& A = inst.algebra();
    require(a, "state A");
    require(b, "state B");
    const ParamPoint p = params_of(params);
    const State sa = A.parse_state(a), sb = A.parse_state(b);
    const OpeSingularPart sp = singular_part(*inst.fields, sa, sb);
    std::vector<std::pair<int, State>> poles;
    for (auto it = sp.poles.rbegin(); it != sp.poles.rend(); ++it) {
      State s = at_point(it->second, p);
      if (!s.is_zero()) poles.emplace_back(it->first, s);
    }
    if (json_out) {
      json j;
      j["algebra"] = inst.name;
      j["a"] = A.render(sa);
      j["b"] = A.render(sb);
      json arr = json::array();
      for (const auto& [k, s] : poles) arr.push_back({{"order", k}, {"state", A.render(s)}});
      j["poles"] = arr;
      r.text = j.dump(2) + "\n";
    } else {
      std::string body;
      for (const auto& [k, s] : poles) body += (body.empty() ? "" : ", ") + std::to_string(k) + ": " + A.render(s);
      r.text = "{" + body + "}\n";
    }
  });
}

voa_status voa_bracket(const voa_algebra* alg, const char* a, const char* m, const char* b, const char* n,
                       const char* c, const char* params, int json_out, voa_result** out) {
  return guarded(out, [&](voa_result& r) {
    const auto& inst = instance(alg);
    const ModeAlgebra& A = inst.algebra();
    require(a, "state A");
    require(b, "state B");
    const ParamPoint p = params_of(params);
    const State sa = A.parse_state(a), sb = A.parse_state(b);
    const HalfInt hm = parse_half(m, "mode m"), hn = parse_half(n, "mode n");
    OperatorCombination op = commutator_via_formula(*inst.fields, sa, hm, sb, hn);
    if (!p.empty())
      for (auto& t : op) {
        t.coeff = t.coeff.substitute(p);
        t.state = t.state.substitute(p);
      }
    const std::string lhs = "[(" + A.render(sa) + ")_" + hm.str() + ", (" + A.render(sb) + ")_" + hn.str() + "]";
    const std::string rhs = op.empty() ? "0" : render(A, op);
    json j;
    j["algebra"] = inst.name;
    j["bracket"] = lhs;
    j["formula"] = rhs;
    r.text = lhs + " = " + rhs + "\n";
    if (c != nullptr) {
      const State sc = A.parse_state(c);
      const State via = at_point(apply(*inst.fields, op, sc), p);
      const State direct = at_point(supercommutator(*inst.fields, sa, hm, sb, hn, sc), p);
      r.passed = via == direct;
      j["applied_to"] = A.render(sc);
      j["value"] = A.render(via);
      j["agrees_with_modes"] = r.passed;
      r.text += lhs + " " + A.render(sc) + " = " + A.render(via) + "\n";
      r.text += r.passed ? "agrees with direct mode composition\n"
                         : "DIFFERS from direct mode composition: " + A.render(direct) + "\n";
    }
    if (json_out) r.text = j.dump(2) + "\n";
  });
}

voa_status voa_character(const voa_algebra* alg, long sector, int cutoff, const char* params, int json_out,
                         voa_result** out) {
  return guarded(out, [&](voa_result& r) {
    const QSeries q = character(instance(alg), sector, cutoff, params_of(params));
    r.text = (json_out ? q.to_json() : q.str()) + "\n";
  });
}

voa_status voa_npoint(const voa_algebra* alg, const char* states, const char* phi, int n, long window,
                      int json_out, voa_result** out) {
  return guarded(out, [&](voa_result& r) {
    const auto& inst = instance(alg);
    const ModeAlgebra& A = inst.algebra();
    Functional fn;
    const State phi_state = A.parse_state(phi ? phi : "|0>");
    for (const auto& [m, c] : phi_state.terms()) fn[m] = c;
    json j;
    j["algebra"] = inst.name;
    std::ostringstream os;
    if (states != nullptr) {
      std::vector<State> as = parse_list(A, states);
      if (as.size() > 5) throw Error(ErrorCode::Usage, "at most 5 insertions");
      std::vector<ExpansionRegion> regions;
      ExpansionRegion reg = ExpansionRegion::identity(static_cast<int>(as.size()));
      do regions.push_back(reg);
      while (std::next_permutation(reg.order.begin(), reg.order.end()));
      CorrelatorReport rep = consistency_check(*inst.fields, as, fn, regions, window);
      r.passed = rep.ok;
      j["insertions"] = state_list_json(A, as);
      j["regions"] = regions.size();
      j["cases"] = rep.cases;
      j["consistent"] = rep.ok;
      j["correlator"] = json::parse(rep.correlator.to_json());
      if (!rep.ok) j["witness"] = rep.witness;
      os << "f = " << rep.correlator.str() << "\n";
      os << "regions " << regions.size() << ", " << rep.cases << " coefficients: "
         << (rep.ok ? "consistent" : "INCONSISTENT") << "\n";
      if (!rep.ok) os << "  " << rep.witness << "\n";
    } else {
      if (n < 0) throw Error(ErrorCode::Usage, "npoint needs --states or --n");
      std::vector<RationalCorrelator> family;
      json arr = json::array();
      for (int k = 0; k <= n; ++k) {
        family.push_back(heisenberg_npoint(A, fn, k));
        arr.push_back(json::parse(family.back().to_json()));
        os << "omega_" << k << " = " << family.back().str() << "\n";
      }
      CorrelatorReport boot = bootstrap_verify(family);
      r.passed = boot.ok;
      j["family"] = arr;
      j["bootstrap"] = boot.ok;
      j["bootstrap_cases"] = boot.cases;
      if (!boot.ok) j["witness"] = boot.witness;
      os << "bootstrap " << (boot.ok ? "holds" : "FAILS") << " (" << boot.cases << " diagonals)\n";
      if (!boot.ok) os << "  " << boot.witness << "\n";
    }
    r.text = json_out ? j.dump(2) + "\n" : os.str();
  });
}

namespace {

void coset_report(voa_result& r, const AlgebraInstance& inst, const std::vector<State>& w, const char* degree,
                  const char* params, int json_out, const char* what) {
  const ModeAlgebra& A = inst.algebra();
  const HalfInt d = parse_half(degree, "degree");
  const std::vector<State> vs = coset_graded(*inst.fields, w, d, params_of(params));
  if (json_out) {
    json j;
    j["algebra"] = inst.name;
    j["kind"] = what;
    j["subalgebra_generators"] = state_list_json(A, w);
    j["degree"] = d.str();
    j["dimension"] = vs.size();
    j["basis"] = state_list_json(A, vs);
    r.text = j.dump(2) + "\n";
  } else {
    r.text = std::string(what) + " of " + inst.name + " at degree " + d.str() + ": dimension " +
             std::to_string(vs.size()) + "\n" + state_list_text(A, vs);
  }
}

}  // namespace

voa_status voa_center(const voa_algebra* alg, const char* degree, const char* params, int json_out,
                      voa_result** out) {
  return guarded(out, [&](voa_result& r) {
    const auto& inst = instance(alg);
    coset_report(r, inst, inst.generating_states, degree, params, json_out, "center");
  });
}

voa_status voa_coset(const voa_algebra* alg, const char* states, const char* degree, const char* params, int json_out,
                     voa_result** out) {
  return guarded(out, [&](voa_result& r) {
    const auto& inst = instance(alg);
    require(states, "subalgebra states");
    coset_report(r, inst, parse_list(inst.algebra(), states), degree, params, json_out, "coset");
  });
}

voa_status voa_coord_check(const voa_algebra* alg, const char* a, const char* rho, int degree, const char* params,
                           int json_out, voa_result** out) {
  return guarded(out, [&](voa_result& r) {
    const auto& inst = instance(alg);
    const ModeAlgebra& A = inst.algebra();
    require(a, "state A");
    require(rho, "coordinate change");
    if (!inst.conformal) throw Error(ErrorCode::Usage, "'" + inst.name + "' has no conformal vector");
    const ParamPoint p = params_of(params);
    const State omega = at_point(*inst.conformal, p);
    const State sa = at_point(A.parse_state(a), p);
    const CoordChange rc = CoordChange::parse(rho);
    const VirasoroCharge q = decompose(rc);
    if (degree < 0) degree = 3;

    const CoordReport huang = huang_check(*inst.fields, omega, sa, rc, degree);
    std::optional<CoordReport> primary;
    try {
      primary = primary_differential_check(*inst.fields, omega, sa, rc, degree);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotPrimary) throw;
    }
    r.passed = huang.ok && (!primary || primary->ok);

    json j;
    j["algebra"] = inst.name;
    j["state"] = A.render(sa);
    j["rho"] = rc.str();
    json v = json::array();
    for (const auto& x : q.v) v.push_back(x.str());
    j["v0"] = q.v0.str();
    j["v"] = v;
    j["degree"] = degree;
    j["huang"] = {{"passed", huang.ok}, {"cases", huang.cases}, {"witness", huang.witness}};
    if (primary)
      j["primary"] = {{"passed", primary->ok}, {"cases", primary->cases}, {"witness", primary->witness}};
    else
      j["primary"] = nullptr;

    std::ostringstream os;
    os << "rho(z) coefficients " << rc.str() << "\n";
    os << "v0 = " << q.v0.str();
    for (std::size_t i = 0; i < q.v.size(); ++i) os << ", v" << i + 1 << " = " << q.v[i].str();
    os << "\n";
    os << "conjugation identity  " << (huang.ok ? "PASS" : "FAIL") << "  " << huang.cases << " cases\n";
    if (!huang.ok) os << "  " << huang.witness << "\n";
    if (primary) {
      os << "primary transformation " << (primary->ok ? "PASS" : "FAIL") << "  " << primary->cases << " cases\n";
      if (!primary->ok) os << "  " << primary->witness << "\n";
    } else {
      os << "primary transformation skipped (state is not primary)\n";
    }
    r.text = json_out ? j.dump(2) + "\n" : os.str();
  });
}

voa_status voa_bf_check(int degree_twice, int json_out, voa_result** out) {
  return guarded(out, [&](voa_result& r) {
    const BosonFermionReport map = boson_fermion_check(degree_twice);
    const CharacterComparison dims = boson_fermion_character_check(degree_twice);
    r.passed = map.ok && dims.ok;
    json j;
    j["degree_twice"] = degree_twice;
    j["map"] = {{"passed", map.ok}, {"witness", map.witness}};
    j["dimensions"] = {{"passed", dims.ok}, {"witness", dims.witness}};
    json rows = json::array();
    std::ostringstream os;
    os << "degree  fermion  lattice\n";
    for (std::size_t t = 0; t < dims.dims.size(); ++t) {
      const std::string d = HalfInt::from_twice(static_cast<std::int64_t>(t)).str();
      rows.push_back({{"degree", d}, {"fermion", dims.dims[t].first}, {"lattice", dims.dims[t].second}});
      os << d;
      for (std::size_t k = d.size(); k < 8; ++k) os << ' ';
      std::string f = std::to_string(dims.dims[t].first);
      os << f;
      for (std::size_t k = f.size(); k < 9; ++k) os << ' ';
      os << dims.dims[t].second << "\n";
    }
    j["table"] = rows;
    os << "graded dimensions " << (dims.ok ? "agree" : "DIFFER") << "\n";
    if (!dims.ok) os << "  " << dims.witness << "\n";
    os << "field map psi -> Y(1_{-1}), psistar -> Y(1_1): " << (map.ok ? "intertwines and is bijective" : "FAILS")
       << "\n";
    if (!map.ok) os << "  " << map.witness << "\n";
    r.text = json_out ? j.dump(2) + "\n" : os.str();
  });
}

}  // extern "C"
