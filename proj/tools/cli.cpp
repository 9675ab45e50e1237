#include "cli.hpp"

#include "CLI11.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace hyperheight::cli {

namespace {

namespace mp = boost::multiprecision;
using nlohmann::json;

std::string trim(std::string s) {
  auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (!s.empty() && ws(s.back())) s.pop_back();
  size_t i = 0;
  while (i < s.size() && ws(s[i])) ++i;
  return s.substr(i);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

Rational parse_rational(const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) throw ValidationError("empty number");
  if (t[0] == '+') t.erase(0, 1);
  for (char c : t)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/'))
      throw ValidationError("malformed rational '" + text + "' (use integers or p/q)");
  try {
    Rational q(t);
    if (q.get_den() == 0) throw ValidationError("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw ValidationError("malformed rational '" + text + "'");
  }
}

std::vector<Rational> parse_list(const std::string& text) {
  std::string t = trim(text);
  if (!t.empty() && t.front() == '[' && t.back() == ']') t = t.substr(1, t.size() - 2);
  std::vector<Rational> out;
  for (const auto& s : split(t, ',')) out.push_back(parse_rational(s));
  return out;
}

Real parse_real(const std::string& text) {
  std::string t = trim(text);
  if (t.empty() || t == "+") return Real(1);
  if (t == "-") return Real(-1);
  if (t[0] == '+') t.erase(0, 1);
  for (char c : t)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == 'e' || c == 'E' || c == '+'))
      throw ValidationError("malformed number '" + text + "'");
  try {
    return Real(t);
  } catch (const std::exception&) {
    throw ValidationError("malformed number '" + text + "'");
  }
}

// Exit status for a library error.
int exit_code(const Error& e) {
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const ReductionDataRequired*>(&e))
    return kExitValidation;
  if (dynamic_cast<const NumericalDegeneracy*>(&e) || dynamic_cast<const PrecisionError*>(&e))
    return kExitDegenerate;
  if (dynamic_cast<const FactorizationBudgetExceeded*>(&e)) return kExitBudget;
  return kExitFailure;
}

std::string rational_str(const Rational& q) { return q.get_str(); }

std::string json_real(const Real& x, const Precision& p) { return to_string(x, p.working_digits()); }

json json_complex(const Complex& z, const Precision& p) { return json::array({json_real(z.re, p), json_real(z.im, p)}); }

json json_matrix(const CMatrix& M, const Precision& p) {
  json out = json::array();
  for (const auto& row : M) {
    json r = json::array();
    for (const auto& z : row) r.push_back(json_complex(z, p));
    out.push_back(r);
  }
  return out;
}

std::string reasons_str(const std::vector<PlaceReason>& rs) {
  std::string s;
  for (auto r : rs) s += (s.empty() ? "" : ", ") + reason_name(r);
  return s;
}

struct Job {
  std::string curve;
  std::vector<std::string> points;
  std::string point2;
  int prec = 0;
  std::uint64_t seed = 0;
  bool json_out = false;
  std::vector<std::string> reduction_files;
  double budget = 60;
  int dim = 1;
  std::string tau;
  std::string z;
};

Precision resolve_precision(const Job& job) {
  Precision p{40, 10};
  if (job.prec > 0) {
    p.digits = job.prec;
  } else if (const char* env = std::getenv("HYPERHEIGHT_PREC"); env && *env) {
    try {
      size_t used = 0;
      p.digits = std::stoi(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw ValidationError(std::string("HYPERHEIGHT_PREC must be an integer, got '") + env + "'");
    }
  }
  p.validate();
  return p;
}

HeightOptions make_options(const Job& job, const HyperellipticCurve& C) {
  HeightOptions o;
  o.prec = resolve_precision(job);
  o.seed = job.seed;
  o.factor_budget = std::chrono::milliseconds(static_cast<long>(job.budget * 1000));
  for (const auto& path : job.reduction_files)
    for (auto& [p, d] : load_reduction_file(path, &C)) {
      if (o.reduction_data.count(p)) throw ValidationError("reduction data for p = " + p.get_str() + " given twice");
      o.reduction_data.emplace(p, std::move(d));
    }
  return o;
}

std::string fmt(const Real& x, const Precision& p) { return to_string(x, p.digits - 5); }

void print_breakdown(std::ostream& out, const HeightBreakdown& b) {
  const Precision& p = b.precision_used;
  out << "curve            " << b.curve_id << "\n";
  out << "divisor          " << b.divisor_description << "\n";
  if (b.torsion) {
    out << "torsion          order " << b.multiplier << "\n";
    out << "height           " << fmt(b.total_height, p) << "\n";
    return;
  }
  out << "evaluated        " << b.evaluated_divisor << "  (multiplier " << b.multiplier << ")\n";
  out << "lambda           " << rational_str(b.lambda) << "\n";
  out << "E                " << b.e_description << "\n";
  for (const auto& t : b.local_terms)
    out << "p = " << t.prime.get_str() << "  horizontal " << rational_str(t.horizontal) << "  fibral "
        << rational_str(t.fibral) << "  [" << reasons_str(t.reasons) << "]\n";
  for (const auto& r : b.residual_terms)
    out << "residual " << r.d_term << " x " << r.e_term << "  weight " << rational_str(r.weight) << "  log "
        << r.cofactor.get_str() << "\n";
  out << "non-archimedean  " << fmt(b.nonarchimedean_sum, p) << "\n";
  out << "archimedean      " << fmt(b.archimedean_term, p) << "\n";
  out << "height           " << fmt(b.total_height, p) << "\n";
}

Real value_or_zero(const HyperellipticCurve& C, const MumfordDivisor& D, const HeightOptions& o) {
  if (D.is_identity()) {
    PrecisionScope s(o.prec);
    return Real(0);
  }
  return neron_tate_height(C, D, o).total_height;
}

const std::string& single_point(const Job& job) {
  if (job.points.size() != 1) throw ValidationError("give exactly one --point for this command");
  return job.points.front();
}

int cmd_height(const Job& job, std::ostream& out) {
  auto C = parse_curve(job.curve);
  auto D = parse_divisor(single_point(job), C);
  auto o = make_options(job, C);
  o.periods = periods_for(C, o);
  auto bD = neron_tate_height(C, D, o);
  if (job.point2.empty()) {
    if (job.json_out)
      out << to_json(bD).dump(2) << "\n";
    else
      print_breakdown(out, bD);
    return kExitOk;
  }
  auto E = parse_divisor(job.point2, C);
  auto bE = neron_tate_height(C, E, o);
  Real hs = value_or_zero(C, cantor_add(D, E, C), o);
  Real hd = value_or_zero(C, cantor_add(D, involution(E), C), o);
  PrecisionScope s(o.prec);
  Real residual = mp::abs(2 * bD.total_height + 2 * bE.total_height - hs - hd);
  if (job.json_out) {
    json j;
    j["heights"] = json::array({to_json(bD), to_json(bE)});
    j["height_sum"] = json_real(hs, o.prec);
    j["height_difference"] = json_real(hd, o.prec);
    j["parallelogram_residual"] = json_real(residual, o.prec);
    out << j.dump(2) << "\n";
  } else {
    print_breakdown(out, bD);
    out << "\n";
    print_breakdown(out, bE);
    out << "\n";
    out << "h(D + E)         " << fmt(hs, o.prec) << "\n";
    out << "h(D - E)         " << fmt(hd, o.prec) << "\n";
    out << "parallelogram    " << to_string(residual, 6) << "\n";
  }
  return kExitOk;
}

int cmd_pair(const Job& job, std::ostream& out) {
  auto C = parse_curve(job.curve);
  auto D = parse_divisor(single_point(job), C);
  if (job.point2.empty()) throw ValidationError("pair needs --point2");
  auto E = parse_divisor(job.point2, C);
  auto o = make_options(job, C);
  Real v = height_pairing(C, D, E, o);
  PrecisionScope s(o.prec);
  if (job.json_out)
    out << json{{"pairing", json_real(v, o.prec)}}.dump(2) << "\n";
  else
    out << "pairing          " << fmt(v, o.prec) << "\n";
  return kExitOk;
}

int cmd_regulator(const Job& job, std::ostream& out) {
  auto C = parse_curve(job.curve);
  if (job.points.empty()) throw ValidationError("regulator needs at least one --point");
  std::vector<MumfordDivisor> pts;
  for (const auto& t : job.points) pts.push_back(parse_divisor(t, C));
  auto o = make_options(job, C);
  Real v = regulator(C, pts, o);
  PrecisionScope s(o.prec);
  if (job.json_out)
    out << json{{"regulator", json_real(v, o.prec)}, {"points", pts.size()}}.dump(2) << "\n";
  else
    out << "regulator        " << fmt(v, o.prec) << "\n";
  return kExitOk;
}

int cmd_places(const Job& job, std::ostream& out) {
  auto C = parse_curve(job.curve);
  std::vector<std::string> texts = job.points;
  if (!job.point2.empty()) texts.push_back(job.point2);
  if (texts.empty()) throw ValidationError("places needs --point");
  auto budget = std::chrono::milliseconds(static_cast<long>(job.budget * 1000));
  std::map<Integer, std::set<PlaceReason>> merged;
  for (const auto& t : texts) {
    auto D = ensure_weierstrass_free(parse_divisor(t, C), C).divisor;
    auto E = construct_E(D, choose_lambda(D, C, job.seed), C);
    for (const auto& r : candidate_places(C, to_formal(D), E, budget))
      merged[r.prime].insert(r.reasons.begin(), r.reasons.end());
  }
  std::vector<PlaceReport> reports;
  for (const auto& [p, rs] : merged) reports.push_back({p, std::vector<PlaceReason>(rs.begin(), rs.end())});
  out << to_json(reports).dump(2) << "\n";
  return kExitOk;
}

int cmd_periods(const Job& job, std::ostream& out) {
  auto C = parse_curve(job.curve);
  Precision p = resolve_precision(job);
  auto d = homology_and_periods(C, p);
  PrecisionScope s(p);
  if (job.json_out) {
    json j;
    j["curve"] = C.id();
    j["genus"] = d.genus;
    json bp = json::array();
    for (const auto& z : d.branch_points) bp.push_back(json_complex(z, p));
    j["branch_points"] = bp;
    j["homology_paths"] = d.homology_paths;
    j["period_matrix"] = json_matrix(d.period_matrix, p);
    j["normalization_matrix"] = json_matrix(d.normalization_matrix, p);
    json rc = json::array();
    for (const auto& z : d.riemann_constant) rc.push_back(json_complex(z, p));
    j["riemann_constant"] = rc;
    j["symmetry_defect"] = to_string(d.symmetry_defect, 6);
    j["min_eigen_bound"] = to_string(d.min_eigen_bound, 6);
    j["quadrature_nodes"] = d.quadrature_nodes;
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  int w = p.digits - 5;
  out << "curve            " << C.id() << "\n";
  out << "genus            " << d.genus << "\n";
  out << "branch points\n";
  for (const auto& z : d.branch_points) out << "  " << to_string(z, w) << "\n";
  out << "homology\n";
  for (const auto& h : d.homology_paths) out << "  " << h << "\n";
  out << "period matrix\n";
  for (const auto& row : d.period_matrix) {
    out << " ";
    for (const auto& z : row) out << " " << to_string(z, w);
    out << "\n";
  }
  out << "riemann constant\n";
  for (const auto& z : d.riemann_constant) out << "  " << to_string(z, w) << "\n";
  out << "symmetry defect  " << to_string(d.symmetry_defect, 6) << "\n";
  return kExitOk;
}

int cmd_theta(const Job& job, std::ostream& out) {
  Precision p = resolve_precision(job);
  PrecisionScope s(p);
  int g = job.dim;
  if (g < 1) throw ValidationError("--dim must be positive");
  if (job.tau.empty()) throw ValidationError("theta needs --tau");
  auto rows = split(job.tau, ';');
  CMatrix O(g, CVector(g));
  if (rows.size() == 1 && split(rows[0], ',').size() == 1) {
    Complex t = parse_complex(rows[0]);
    for (int i = 0; i < g; ++i) O[i][i] = t;
  } else {
    if (static_cast<int>(rows.size()) != g) throw ValidationError("--tau needs " + std::to_string(g) + " rows");
    for (int i = 0; i < g; ++i) {
      auto cols = split(rows[i], ',');
      if (static_cast<int>(cols.size()) != g)
        throw ValidationError("--tau row " + std::to_string(i + 1) + " needs " + std::to_string(g) + " entries");
      for (int k = 0; k < g; ++k) O[i][k] = parse_complex(cols[k]);
    }
  }
  CVector z(g);
  if (!job.z.empty()) {
    auto zs = split(job.z, ',');
    if (zs.size() == 1 && g > 1) {
      Complex v = parse_complex(zs[0]);
      for (auto& c : z) c = v;
    } else {
      if (static_cast<int>(zs.size()) != g) throw ValidationError("--z needs " + std::to_string(g) + " entries");
      for (int i = 0; i < g; ++i) z[i] = parse_complex(zs[i]);
    }
  }
  Complex t = theta(z, O, p);
  if (job.json_out)
    out << json{{"theta", json_complex(t, p)}}.dump(2) << "\n";
  else
    out << "theta            " << to_string(t, p.digits - 5) << "\n";
  return kExitOk;
}

int cmd_selfcheck(const Job& job, std::ostream& out) {
  Precision p = resolve_precision(job);
  Real tol;
  {
    PrecisionScope s(p);
    tol = mp::pow(Real(10), -(p.digits - 5));
  }
  bool ok = true;
  auto check = [&](const std::string& name, const std::function<bool()>& f) {
    bool pass = false;
    std::string why;
    try {
      pass = f();
    } catch (const std::exception& e) {
      why = std::string(" (") + e.what() + ")";
    }
    ok &= pass;
    out << (pass ? "PASS " : "FAIL ") << name << why << "\n";
  };
  check("theta(0; i) = pi^(1/4) / Gamma(3/4)", [&] {
    PrecisionScope s(p);
    Complex t = theta({Complex()}, {{Complex(Real(0), Real(1))}}, p);
    return abs(t - Complex(mp::pow(pi(), Real("0.25")) / boost::math::tgamma(Real("0.75")))) < tol;
  });
  check("period matrix of y^2 = x^3 - x is i", [&] {
    auto d = homology_and_periods(make_curve(Poly{0, -1, 0, 1}), p);
    PrecisionScope s(p);
    return abs(d.period_matrix[0][0] - Complex(Real(0), Real(1))) < tol;
  });
  check("<(1,3), (1,-3)>_3 = 1 on y^2 = x^7 - 15x^3 + 11x^2 - 13x + 25", [&] {
    auto C = make_curve(Poly{25, -13, 11, -15, 0, 0, 0, 1});
    auto D = point_divisor(1, 3, C);
    return local_nonarch_pairing(to_formal(D), construct_E(D, 0, C), C, Integer(3)).total == 1;
  });
  check("h(2P) = 4 h(P) on y^2 = x^3 + 2x^2 - 10x + 11", [&] {
    auto C = make_curve(Poly{11, -10, 2, 1});
    HeightOptions o;
    o.prec = p;
    o.periods = periods_for(C, o);
    auto P = point_divisor(1, 2, C);
    Real h = neron_tate_height(C, P, o).total_height;
    Real h2 = neron_tate_height(C, multiply(P, 2, C), o).total_height;
    PrecisionScope s(p);
    return mp::abs(h2 - 4 * h) < tol && h > 0;
  });
  return ok ? kExitOk : kExitFailure;
}

std::string yaml_where(const YAML::Node& n) {
  auto m = n.Mark();
  if (m.line < 0) return "";
  return " (line " + std::to_string(m.line + 1) + ")";
}

void require_keys(const YAML::Node& n, const std::set<std::string>& allowed, const std::string& what) {
  if (!n.IsMap()) throw ValidationError(what + " must be a mapping" + yaml_where(n));
  for (const auto& kv : n) {
    auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ValidationError(what + ": unknown field '" + key + "'" + yaml_where(kv.first));
  }
}

Integer yaml_integer(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) throw ValidationError(what + " must be an integer" + yaml_where(n));
  auto s = n.as<std::string>();
  Integer v;
  if (s.empty() || v.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0)
    throw ValidationError(what + " must be an integer, got '" + s + "'" + yaml_where(n));
  return v;
}

long yaml_long(const YAML::Node& n, const std::string& what) {
  Integer v = yaml_integer(n, what);
  if (!v.fits_slong_p()) throw ValidationError(what + " is out of range" + yaml_where(n));
  return v.get_si();
}

std::string yaml_string(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) throw ValidationError(what + " must be a string" + yaml_where(n));
  return n.as<std::string>();
}

ReductionData parse_document(const YAML::Node& doc, const std::string& at) {
  require_keys(doc, {"schema", "prime", "components", "matrix", "infinity_component", "assignments"}, at);
  if (!doc["schema"]) throw ValidationError(at + ": missing field 'schema'");
  if (yaml_long(doc["schema"], at + ": schema") != 1)
    throw ValidationError(at + ": unsupported schema " + doc["schema"].as<std::string>() + " (expected 1)");
  for (const char* key : {"prime", "components", "matrix"})
    if (!doc[key]) throw ValidationError(at + ": missing field '" + key + "'");
  ReductionData d;
  d.prime = yaml_integer(doc["prime"], at + ": prime");
  std::string where = at + " (p = " + d.prime.get_str() + ")";
  const auto& comps = doc["components"];
  if (!comps.IsSequence()) throw ValidationError(where + ": components must be a list" + yaml_where(comps));
  for (const auto& c : comps) {
    require_keys(c, {"id", "multiplicity"}, where + ": component");
    if (!c["id"]) throw ValidationError(where + ": component without id" + yaml_where(c));
    FibreComponent fc;
    fc.id = yaml_string(c["id"], where + ": component id");
    if (c["multiplicity"]) fc.multiplicity = yaml_long(c["multiplicity"], where + ": multiplicity");
    d.components.push_back(fc);
  }
  const auto& m = doc["matrix"];
  if (!m.IsSequence()) throw ValidationError(where + ": matrix must be a list of rows" + yaml_where(m));
  for (const auto& row : m) {
    if (!row.IsSequence()) throw ValidationError(where + ": matrix row must be a list" + yaml_where(row));
    std::vector<long> r;
    for (const auto& v : row) r.push_back(yaml_long(v, where + ": matrix entry"));
    d.matrix.push_back(std::move(r));
  }
  if (doc["infinity_component"]) {
    d.infinity_component = yaml_string(doc["infinity_component"], where + ": infinity_component");
  } else if (d.components.size() == 1) {
    d.infinity_component = d.components[0].id;
  } else {
    throw ValidationError(where + ": missing field 'infinity_component'");
  }
  if (const auto& a = doc["assignments"]) {
    if (!a.IsMap()) throw ValidationError(where + ": assignments must be a mapping" + yaml_where(a));
    for (const auto& kv : a)
      d.assignments[kv.first.as<std::string>()] = yaml_string(kv.second, where + ": assignment");
  }
  try {
    validate_reduction_data(d);
  } catch (const ValidationError& e) {
    throw ValidationError(at + ": " + e.what());
  }
  return d;
}

}  // namespace

HyperellipticCurve parse_curve(const std::string& text) {
  if (trim(text).empty()) throw ValidationError("--curve is required (coefficients, constant term first)");
  try {
    return make_curve(parse_list(text));
  } catch (const ValidationError& e) {
    throw ValidationError("curve '" + text + "': " + e.what());
  }
}

MumfordDivisor parse_divisor(const std::string& text, const HyperellipticCurve& C) {
  std::string t = trim(text);
  if (t.empty()) throw ValidationError("empty divisor");
  try {
    if (t.front() == '[') {
      auto parts = split(t, ';');
      if (parts.size() != 2) throw ValidationError("Mumford form is [a-coeffs];[b-coeffs]");
      auto a = parse_list(parts[0]);
      auto b = parts[1] == "[]" ? std::vector<Rational>{} : parse_list(parts[1]);
      return make_divisor(Poly(a), Poly(b), C);
    }
    MumfordDivisor D;
    if (t.front() != '(') t = "(" + t + ")";
    size_t i = 0;
    while (i < t.size()) {
      if (t[i] != '(') throw ValidationError("expected '(' at position " + std::to_string(i));
      size_t j = t.find(')', i);
      if (j == std::string::npos) throw ValidationError("unbalanced parentheses");
      auto xy = split(t.substr(i + 1, j - i - 1), ',');
      if (xy.size() != 2) throw ValidationError("a point is (x,y)");
      D = cantor_add(D, point_divisor(parse_rational(xy[0]), parse_rational(xy[1]), C), C);
      i = j + 1;
      while (i < t.size() && t[i] == ' ') ++i;
      if (i < t.size()) {
        if (t[i] != '+') throw ValidationError("points are joined with '+'");
        ++i;
        while (i < t.size() && t[i] == ' ') ++i;
      }
    }
    return D;
  } catch (const ValidationError& e) {
    throw ValidationError("divisor '" + text + "': " + e.what());
  }
}

Complex parse_complex(const std::string& text) {
  std::string t = trim(text);
  t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
  if (t.empty()) throw ValidationError("empty complex number");
  if (t.back() != 'i') return Complex(parse_real(t));
  std::string body = t.substr(0, t.size() - 1);
  // Split before the last sign that is not an exponent sign.
  size_t cut = std::string::npos;
  for (size_t k = body.size(); k-- > 1;)
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      cut = k;
      break;
    }
  if (cut == std::string::npos) return Complex(Real(0), parse_real(body));
  return Complex(parse_real(body.substr(0, cut)), parse_real(body.substr(cut)));
}

std::map<Integer, ReductionData> parse_reduction_yaml(const std::string& text, const HyperellipticCurve* C) {
  std::vector<YAML::Node> docs;
  try {
    docs = YAML::LoadAll(text);
  } catch (const YAML::Exception& e) {
    throw ValidationError(std::string("reduction data: ") + e.what());
  }
  std::map<Integer, ReductionData> out;
  int k = 0;
  for (const auto& doc : docs) {
    ++k;
    if (doc.IsNull()) continue;
    std::string at = "reduction data document " + std::to_string(k);
    ReductionData d;
    try {
      d = parse_document(doc, at);
    } catch (const YAML::Exception& e) {
      throw ValidationError(at + ": " + e.what());
    }
    if (C && d.prime != 2 && !mpz_divisible_p(C->discriminant.get_mpz_t(), d.prime.get_mpz_t()))
      throw ValidationError(at + ": prime mismatch, " + d.prime.get_str() + " is not a bad prime of " + C->id());
    if (out.count(d.prime)) throw ValidationError(at + ": second document for p = " + d.prime.get_str());
    out.emplace(d.prime, std::move(d));
  }
  return out;
}

std::map<Integer, ReductionData> load_reduction_file(const std::string& path, const HyperellipticCurve* C) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open reduction file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_reduction_yaml(ss.str(), C);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

json to_json(const HeightBreakdown& b) {
  const Precision& p = b.precision_used;
  PrecisionScope s(p);
  json j;
  j["curve"] = b.curve_id;
  j["divisor"] = b.divisor_description;
  j["evaluated_divisor"] = b.evaluated_divisor;
  j["e_divisor"] = b.e_description;
  j["lambda"] = rational_str(b.lambda);
  j["multiplier"] = b.multiplier;
  j["torsion"] = b.torsion;
  json locals = json::array();
  for (const auto& t : b.local_terms) {
    json reasons = json::array();
    for (auto r : t.reasons) reasons.push_back(reason_name(r));
    locals.push_back({{"prime", t.prime.get_str()},
                      {"horizontal", rational_str(t.horizontal)},
                      {"fibral", rational_str(t.fibral)},
                      {"log_p", json_real(t.weight, p)},
                      {"reasons", reasons},
                      {"padic_digits", t.digits}});
  }
  j["local_terms"] = locals;
  json res = json::array();
  for (const auto& r : b.residual_terms)
    res.push_back({{"d_term", r.d_term},
                   {"e_term", r.e_term},
                   {"weight", rational_str(r.weight)},
                   {"cofactor", r.cofactor.get_str()},
                   {"value", json_real(r.value, p)}});
  j["residual_terms"] = res;
  j["nonarchimedean_sum"] = json_real(b.nonarchimedean_sum, p);
  j["archimedean_term"] = json_real(b.archimedean_term, p);
  j["archimedean_attempts"] = b.archimedean_attempts;
  j["total_height"] = json_real(b.total_height, p);
  j["precision"] = {{"digits", p.digits}, {"guard", p.guard}};
  return j;
}

json to_json(const std::vector<PlaceReport>& places) {
  json out = json::array();
  for (const auto& r : places) {
    json reasons = json::array();
    for (auto x : r.reasons) reasons.push_back(reason_name(x));
    out.push_back({{"prime", r.prime.get_str()}, {"reasons", reasons}});
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neron-Tate heights on Jacobians of odd-degree hyperelliptic curves over Q", "hyperheight"};
  app.require_subcommand(1);
  Job job;
  auto curve_opts = [&](CLI::App* sub) {
    sub->add_option("--curve", job.curve, "coefficients of f, constant term first")->required();
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--prec", job.prec, "decimal digits (default $HYPERHEIGHT_PREC or 40)");
    sub->add_flag("--json", job.json_out, "machine-readable output");
  };
  auto engine = [&](CLI::App* sub) {
    curve_opts(sub);
    common(sub);
    sub->add_option("--seed", job.seed, "seed for lambda and auxiliary points");
    sub->add_option("--reduction", job.reduction_files, "reduction-data YAML file (repeatable)");
    sub->add_option("--budget", job.budget, "factorization budget in seconds")->check(CLI::PositiveNumber);
  };
  std::map<std::string, std::function<int(const Job&, std::ostream&)>> handlers = {
      {"height", cmd_height}, {"pair", cmd_pair},       {"regulator", cmd_regulator}, {"places", cmd_places},
      {"periods", cmd_periods}, {"theta", cmd_theta}, {"selfcheck", cmd_selfcheck}};

  auto* h = app.add_subcommand("height", "Neron-Tate height of a divisor, with diagnostics for a second one");
  engine(h);
  h->add_option("--point", job.points, "divisor: x,y or (x,y)+(x,y) or [a];[b]")->required();
  h->add_option("--point2", job.point2, "second divisor; adds the parallelogram residual");
  auto* pr = app.add_subcommand("pair", "height pairing <D1, D2>");
  engine(pr);
  pr->add_option("--point", job.points, "first divisor")->required();
  pr->add_option("--point2", job.point2, "second divisor")->required();
  auto* rg = app.add_subcommand("regulator", "determinant of the height pairing matrix");
  engine(rg);
  rg->add_option("--point", job.points, "divisor (repeat for each generator)")->required();
  auto* pl = app.add_subcommand("places", "candidate primes as JSON");
  curve_opts(pl);
  pl->add_option("--point", job.points, "divisor")->required();
  pl->add_option("--point2", job.point2, "second divisor");
  pl->add_option("--seed", job.seed, "seed for lambda");
  pl->add_option("--budget", job.budget, "factorization budget in seconds")->check(CLI::PositiveNumber);
  auto* pe = app.add_subcommand("periods", "branch points, period matrix and Riemann constant");
  curve_opts(pe);
  common(pe);
  auto* th = app.add_subcommand("theta", "Riemann theta function");
  common(th);
  th->add_option("--dim", job.dim, "genus g");
  th->add_option("--tau", job.tau, "period matrix: rows split by ';', entries by ','; one entry means tau I")
      ->required();
  th->add_option("--z", job.z, "argument, comma separated (default 0)");
  auto* sc = app.add_subcommand("selfcheck", "quick internal consistency checks");
  common(sc);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  auto* chosen = app.get_subcommands().front();
  try {
    return handlers.at(chosen->get_name())(job, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace hyperheight::cli
