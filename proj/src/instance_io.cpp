#include "isomono/instance_io.hpp"

#include <fstream>

namespace isomono {

using nlohmann::json;

namespace {

Rational rat_field(const json &j, const char *what) {
  if (j.is_number_integer())
    return Rational(j.get<long>());
  if (j.is_string())
    return Rational::parse(j.get<std::string>());
  throw ParseError(std::string("expected a rational string for ") + what);
}

std::vector<Rational> rat_array(const json &j, const char *what) {
  if (!j.is_array())
    throw ParseError(std::string("expected an array for ") + what);
  std::vector<Rational> out;
  for (auto &x : j)
    out.push_back(rat_field(x, what));
  return out;
}

} // namespace

InstanceFile parse_instance(const json &j) {
  InstanceFile out;
  if (!j.is_object())
    throw ParseError("instance file must be a JSON object");
  if (j.contains("schema_version")) {
    out.schema_version = j.at("schema_version").get<int>();
    if (out.schema_version != 1)
      throw ParseError("unsupported schema_version");
  }
  if (!j.contains("points"))
    throw ParseError("missing 'points'");
  for (auto &pj : j.at("points")) {
    PointData<Rational> p;
    std::string pos = pj.at("pos").is_string() ? pj.at("pos").get<std::string>()
                                               : pj.at("pos").dump();
    if (pos == "inf" || pos == "infinity") {
      p.at_infinity = true;
    } else {
      p.pos = Rational::parse(pos);
    }
    p.order = pj.at("order").get<int>();
    std::string kind = pj.at("kind").get<std::string>();
    if (kind == "reg")
      p.kind = PointKind::kRegular;
    else if (kind == "un")
      p.kind = PointKind::kUnramified;
    else if (kind == "ra")
      p.kind = PointKind::kRamified;
    else
      throw ParseError("unknown point kind '" + kind + "'");
    const json &th = pj.at("theta");
    if (p.kind == PointKind::kRamified) {
      p.theta_ra = rat_array(th.at("ra"), "theta.ra");
    } else {
      p.theta_plus = rat_array(th.at("plus"), "theta.plus");
      p.theta_minus = rat_array(th.at("minus"), "theta.minus");
    }
    out.inst.pts.push_back(std::move(p));
  }
  if (j.contains("darboux"))
    for (auto &dj : j.at("darboux"))
      out.inst.dar.push_back({rat_field(dj.at("q"), "q"), rat_field(dj.at("p"), "p")});
  if (j.contains("options")) {
    const json &oj = j.at("options");
    if (oj.contains("truncation"))
      out.options.truncation_extra = oj.at("truncation").get<int>();
    if (oj.contains("margin"))
      out.options.margin = oj.at("margin").get<double>();
    if (oj.contains("rtol"))
      out.options.rtol = oj.at("rtol").get<double>();
  }
  return out;
}

InstanceFile load_instance(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open instance file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return parse_instance(j);
}

json instance_to_json(const Instance &inst) {
  json pts = json::array();
  for (auto &p : inst.pts) {
    json pj;
    pj["pos"] = p.at_infinity ? "inf" : p.pos.str();
    pj["order"] = p.order;
    pj["kind"] = kind_name(p.kind);
    json th;
    if (p.kind == PointKind::kRamified) {
      json arr = json::array();
      for (auto &x : p.theta_ra)
        arr.push_back(x.str());
      th["ra"] = arr;
    } else {
      json plus = json::array(), minus = json::array();
      for (auto &x : p.theta_plus)
        plus.push_back(x.str());
      for (auto &x : p.theta_minus)
        minus.push_back(x.str());
      th["plus"] = plus;
      th["minus"] = minus;
    }
    pj["theta"] = th;
    pts.push_back(pj);
  }
  json dar = json::array();
  for (auto &d : inst.dar)
    dar.push_back({{"q", d.q.str()}, {"p", d.p.str()}});
  return json{{"schema_version", 1}, {"points", pts}, {"darboux", dar}};
}

json poly_to_json(const PolyQ &p) {
  json arr = json::array();
  for (int k = 0; k <= p.degree(); ++k)
    arr.push_back(p.coeff(k).str());
  return arr;
}

json ratfunc_to_json(const RatFunc &f) {
  return json{{"num", poly_to_json(f.num)}, {"den", poly_to_json(f.den)}};
}

json conn_to_json(const ConnQ &conn) {
  json m;
  m["bundle"] = conn.bundle == Bundle::kEn2 ? "En2" : "E1";
  m["n"] = conn.n;
  m["omega"] = json::array({ratfunc_to_json(to_ratfunc(conn.om.a11)),
                            ratfunc_to_json(to_ratfunc(conn.om.a12)),
                            ratfunc_to_json(to_ratfunc(conn.om.a21)),
                            ratfunc_to_json(to_ratfunc(conn.om.a22))});
  return m;
}

json darboux_to_json(const std::vector<DarbouxPair<Rational>> &dar) {
  json arr = json::array();
  for (auto &d : dar)
    arr.push_back({{"q", d.q.str()}, {"p", d.p.str()}});
  return arr;
}

} // namespace isomono
