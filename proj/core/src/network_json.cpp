#include "snc/network_json.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "snc/error.hpp"

namespace snc {
namespace {

using nlohmann::json;
using Kind = ParseError::Kind;

const json& field(const json& obj, const std::string& ptr, const char* key) {
  if (!obj.is_object()) throw ParseError(Kind::Schema, ptr, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(Kind::Schema, ptr + "/" + key, "missing field");
  return *it;
}

double number(const json& obj, const std::string& ptr, const char* key) {
  const auto& v = field(obj, ptr, key);
  if (!v.is_number()) throw ParseError(Kind::Schema, ptr + "/" + key, "expected a number");
  return v.get<double>();
}

long long integer(const json& obj, const std::string& ptr, const char* key) {
  const auto& v = field(obj, ptr, key);
  if (!v.is_number_integer())
    throw ParseError(Kind::Schema, ptr + "/" + key, "expected an integer");
  return v.get<long long>();
}

std::string string(const json& obj, const std::string& ptr, const char* key) {
  const auto& v = field(obj, ptr, key);
  if (!v.is_string()) throw ParseError(Kind::Schema, ptr + "/" + key, "expected a string");
  return v.get<std::string>();
}

const json& array(const json& obj, const std::string& ptr, const char* key) {
  const auto& v = field(obj, ptr, key);
  if (!v.is_array()) throw ParseError(Kind::Schema, ptr + "/" + key, "expected an array");
  return v;
}

EmissionDist parse_emission(const json& e, const std::string& ptr) {
  const auto type = string(e, ptr, "type");
  EmissionDist d;
  if (type == "constant")
    d = Constant{number(e, ptr, "value")};
  else if (type == "bernoulli_scaled")
    d = ScaledBernoulli{number(e, ptr, "value"), number(e, ptr, "prob")};
  else if (type == "poisson")
    d = Poisson{number(e, ptr, "mean")};
  else
    throw ParseError(Kind::Schema, ptr + "/type", "unknown emission type '" + type + "'");
  try {
    validate(d);
  } catch (const InvalidModel& err) {
    throw ParseError(Kind::Model, ptr, err.what());
  }
  return d;
}

Mmp parse_mmp(const json& obj, const std::string& ptr) {
  const auto& rows = array(obj, ptr, "transition");
  const auto& ems = array(obj, ptr, "emissions");
  const auto n = rows.size();
  if (n == 0) throw ParseError(Kind::Schema, ptr + "/transition", "empty matrix");
  Matrix p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto rp = ptr + "/transition/" + std::to_string(i);
    if (!rows[i].is_array() || rows[i].size() != n)
      throw ParseError(Kind::Schema, rp, "expected a row of " + std::to_string(n) + " numbers");
    for (std::size_t j = 0; j < n; ++j) {
      if (!rows[i][j].is_number())
        throw ParseError(Kind::Schema, rp + "/" + std::to_string(j), "expected a number");
      p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
    }
  }
  if (ems.size() != n)
    throw ParseError(Kind::Schema, ptr + "/emissions",
                     "expected " + std::to_string(n) + " emissions, got " +
                         std::to_string(ems.size()));
  std::vector<EmissionDist> dists;
  for (std::size_t i = 0; i < n; ++i)
    dists.push_back(parse_emission(ems[i], ptr + "/emissions/" + std::to_string(i)));
  try {
    return Mmp(std::move(p), std::move(dists));
  } catch (const InvalidModel& err) {
    throw ParseError(Kind::Model, ptr + "/transition", err.what());
  }
}

ServiceModel parse_service(const json& s, const std::string& ptr) {
  const auto type = string(s, ptr, "type");
  if (type == "constant_rate") {
    const double rate = number(s, ptr, "rate");
    if (!(rate > 0.0)) throw ParseError(Kind::Model, ptr + "/rate", "rate must be > 0");
    return ConstantRate{rate};
  }
  if (type == "mmp") return MarkovService{parse_mmp(s, ptr)};
  throw ParseError(Kind::Schema, ptr + "/type", "unknown service type '" + type + "'");
}

json emission_json(const EmissionDist& d) {
  if (const auto* c = std::get_if<Constant>(&d)) return {{"type", "constant"}, {"value", c->value}};
  if (const auto* b = std::get_if<ScaledBernoulli>(&d))
    return {{"type", "bernoulli_scaled"}, {"value", b->value}, {"prob", b->prob}};
  return {{"type", "poisson"}, {"mean", std::get<Poisson>(d).mean}};
}

json mmp_json(const Mmp& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.transition().rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.transition().cols(); ++j) row.push_back(m.transition()(i, j));
    rows.push_back(row);
  }
  json ems = json::array();
  for (const auto& e : m.emissions()) ems.push_back(emission_json(e));
  return {{"transition", rows}, {"emissions", ems}};
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError(Kind::Syntax, "", err.what());
  }
}

json::json_pointer pointer(const std::string& p) {
  try {
    return json::json_pointer(p);
  } catch (const json::exception& err) {
    throw ParseError(Kind::Schema, p, err.what());
  }
}

}  // namespace

TandemNetwork parse_network(const std::string& text) {
  const json doc = parse_text(text);
  if (!doc.is_object()) throw ParseError(Kind::Schema, "", "expected an object");

  const auto& servers = array(doc, "", "servers");
  if (servers.empty()) throw ParseError(Kind::Schema, "/servers", "no servers");
  std::map<long long, ServiceModel> by_id;
  for (std::size_t k = 0; k < servers.size(); ++k) {
    const auto ptr = "/servers/" + std::to_string(k);
    const auto id = integer(servers[k], ptr, "id");
    if (id < 1 || id > static_cast<long long>(servers.size()))
      throw ParseError(Kind::Schema, ptr + "/id",
                       "server ids must be 1.." + std::to_string(servers.size()));
    if (by_id.count(id)) throw ParseError(Kind::Schema, ptr + "/id", "duplicate server id");
    by_id.emplace(id, parse_service(field(servers[k], ptr, "service"), ptr + "/service"));
  }
  std::vector<ServiceModel> models;
  for (auto& [id, m] : by_id) models.push_back(std::move(m));
  const auto n = static_cast<long long>(models.size());

  const auto& flows = array(doc, "", "flows");
  std::vector<FlowSpec> specs;
  bool have_flow1 = false;
  std::map<long long, std::size_t> seen;
  for (std::size_t k = 0; k < flows.size(); ++k) {
    const auto ptr = "/flows/" + std::to_string(k);
    const auto id = integer(flows[k], ptr, "id");
    const auto first = integer(flows[k], ptr, "first");
    const auto last = integer(flows[k], ptr, "last");
    if (seen.count(id)) throw ParseError(Kind::Schema, ptr + "/id", "duplicate flow id");
    seen.emplace(id, k);
    if (first < 1 || first > last || last > n)
      throw ParseError(Kind::Path, ptr,
                       "path [" + std::to_string(first) + ", " + std::to_string(last) +
                           "] is not an interval of 1.." + std::to_string(n));
    if (id == 1) {
      if (first != 1 || last != n)
        throw ParseError(Kind::MissingFlow, ptr,
                         "flow 1 must have first=1 and last=" + std::to_string(n));
      have_flow1 = true;
    }
    auto arrival = parse_mmp(field(flows[k], ptr, "arrival"), ptr + "/arrival");
    specs.push_back(FlowSpec{static_cast<int>(id), static_cast<std::size_t>(first),
                             static_cast<std::size_t>(last), std::move(arrival)});
  }
  if (!have_flow1) throw ParseError(Kind::MissingFlow, "/flows", "no flow with id 1");
  try {
    return TandemNetwork(std::move(models), std::move(specs));
  } catch (const InvalidModel& err) {
    throw ParseError(Kind::Model, "", err.what());
  }
}

TandemNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(Kind::Syntax, "", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

std::string network_to_json(const TandemNetwork& net) {
  json servers = json::array();
  for (std::size_t j = 1; j <= net.n_servers(); ++j) {
    json svc;
    if (const auto* c = std::get_if<ConstantRate>(&net.server(j))) {
      svc = {{"type", "constant_rate"}, {"rate", c->rate}};
    } else {
      svc = mmp_json(std::get<MarkovService>(net.server(j)).mmp);
      svc["type"] = "mmp";
    }
    servers.push_back({{"id", j}, {"service", svc}});
  }
  json flows = json::array();
  for (const auto& f : net.flows())
    flows.push_back({{"id", f.id}, {"first", f.first}, {"last", f.last}, {"arrival", mmp_json(f.arrival)}});
  return json{{"servers", servers}, {"flows", flows}}.dump(2);
}

std::string set_number(const std::string& text, const std::string& ptr, double value) {
  json doc = parse_text(text);
  const auto p = pointer(ptr);
  if (!doc.contains(p) || !doc.at(p).is_number())
    throw ParseError(Kind::Schema, ptr, "does not resolve to a number");
  doc[p] = value;
  return doc.dump(2);
}

double get_number(const std::string& text, const std::string& ptr) {
  const json doc = parse_text(text);
  const auto p = pointer(ptr);
  if (!doc.contains(p) || !doc.at(p).is_number())
    throw ParseError(Kind::Schema, ptr, "does not resolve to a number");
  return doc.at(p).get<double>();
}

}  // namespace snc
