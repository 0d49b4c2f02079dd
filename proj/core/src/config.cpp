#include "floc/config.hpp"

#include <fstream>
#include <set>

#include "floc/error.hpp"

namespace floc {

using nlohmann::json;

namespace {

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& base) {
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw ConfigError(join(base, key), "unknown field");
}

const json& require(const json& j, const std::string& key, const std::string& base) {
  if (!j.is_object()) throw ConfigError(base.empty() ? "config" : base, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(join(base, key), "missing required field");
  return *it;
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  return j.get<double>();
}

double require_number(const json& j, const std::string& key, const std::string& base) {
  return number(require(j, key, base), join(base, key));
}

std::optional<double> optional_number(const json& j, const std::string& key, const std::string& base) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return number(*it, join(base, key));
}

ChemostatParams parse_params(const json& j) {
  ChemostatParams p;
  p.D = require_number(j, "D", "");
  p.S_in = require_number(j, "S_in", "");
  p.D_u = optional_number(j, "D_u", "").value_or(p.D);
  p.D_v = optional_number(j, "D_v", "").value_or(p.D);
  p.epsilon = optional_number(j, "epsilon", "");
  return p;
}

AttachmentLaws parse_laws(const json& j) {
  const auto& att = require(j, "attachment", "");
  reject_unknown(att, {"linear_total"}, "attachment");
  const auto& lt = require(att, "linear_total", "attachment");
  reject_unknown(lt, {"a"}, "attachment.linear_total");
  const double a = require_number(lt, "a", "attachment.linear_total");

  const auto& det = require(j, "detachment", "");
  reject_unknown(det, {"constant"}, "detachment");
  const auto& c = require(det, "constant", "detachment");
  reject_unknown(c, {"b"}, "detachment.constant");
  const double b = require_number(c, "b", "detachment.constant");
  return AttachmentLaws(LinearTotal{a}, ConstantDetachment{b});
}

std::vector<double> number_array(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

json load_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config", "cannot read " + path.string());
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
}

GrowthLaw parse_growth(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  reject_unknown(j, {"monod"}, field);
  const auto& m = require(j, "monod", field);
  const std::string mf = join(field, "monod");
  reject_unknown(m, {"mu_max", "K"}, mf);
  return GrowthLaw(Monod{require_number(m, "mu_max", mf), require_number(m, "K", mf)});
}

Model parse_model(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  reject_unknown(j, {"name", "description", "growth_u", "growth_v", "attachment", "detachment", "D", "S_in", "D_u", "D_v",
                     "epsilon", "allow_removal_above_dilution"},
                 "");
  ValidationOptions opts;
  if (const auto it = j.find("allow_removal_above_dilution"); it != j.end()) {
    if (!it->is_boolean()) throw ConfigError("allow_removal_above_dilution", "expected true or false");
    opts.allow_removal_above_dilution = it->get<bool>();
  }
  auto params = parse_params(j);
  validate(params, opts);
  return Model(params, parse_growth(require(j, "growth_u", ""), "growth_u"),
               parse_growth(require(j, "growth_v", ""), "growth_v"), parse_laws(j), opts);
}

bool is_multispecies_config(const json& j) { return j.is_object() && j.contains("species"); }

MultiSpeciesModel parse_multispecies(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  reject_unknown(j, {"name", "description", "species", "A", "b", "D", "S_in", "D_u", "D_v"}, "");
  const auto params = parse_params(j);
  validate(params);
  const auto& species = require(j, "species", "");
  if (!species.is_array() || species.empty()) throw ConfigError("species", "expected a nonempty array");
  std::vector<GrowthLaw> gu, gv;
  for (std::size_t i = 0; i < species.size(); ++i) {
    const std::string base = "species[" + std::to_string(i) + "]";
    reject_unknown(species[i], {"name", "growth_u", "growth_v"}, base);
    gu.push_back(parse_growth(require(species[i], "growth_u", base), base + ".growth_u"));
    gv.push_back(parse_growth(require(species[i], "growth_v", base), base + ".growth_v"));
  }
  const auto& a = require(j, "A", "");
  if (!a.is_array()) throw ConfigError("A", "expected an array of rows");
  std::vector<std::vector<double>> A;
  for (std::size_t i = 0; i < a.size(); ++i) A.push_back(number_array(a[i], "A[" + std::to_string(i) + "]"));
  return MultiSpeciesModel(params, std::move(gu), std::move(gv), std::move(A), number_array(require(j, "b", ""), "b"));
}

json to_json(const GrowthLaw& growth) {
  if (growth.is_monod()) return {{"monod", {{"mu_max", growth.monod().mu_max}, {"K", growth.monod().K}}}};
  return {{"custom", growth.label()}};
}

json to_json(const Model& model) {
  const auto& p = model.params();
  json j;
  j["growth_u"] = to_json(model.growth_u());
  j["growth_v"] = to_json(model.growth_v());
  const auto& laws = model.laws();
  j["attachment"] = laws.linear_total() ? json{{"linear_total", {{"a", laws.linear_total()->a}}}} : json{{"custom", true}};
  j["detachment"] = laws.constant_detachment() ? json{{"constant", {{"b", laws.constant_detachment()->b}}}}
                                               : json{{"custom", true}};
  j["D"] = p.D;
  j["S_in"] = p.S_in;
  j["D_u"] = p.D_u;
  j["D_v"] = p.D_v;
  j["epsilon"] = p.epsilon ? json(*p.epsilon) : json(nullptr);
  return j;
}

json to_json(const MultiSpeciesModel& model) {
  const auto& p = model.params();
  json species = json::array();
  for (std::size_t i = 0; i < model.size(); ++i)
    species.push_back({{"growth_u", to_json(model.growth_u(i))}, {"growth_v", to_json(model.growth_v(i))}});
  return {{"species", species}, {"A", model.A()}, {"b", model.b()}, {"D", p.D},
          {"S_in", p.S_in},     {"D_u", p.D_u},   {"D_v", p.D_v},   {"attachment_enabled", model.attachment_enabled()}};
}

json to_json(const Equilibrium& eq) {
  json state;
  if (const auto* f = std::get_if<FullState>(&eq.state)) {
    state = {{"s", f->s}, {"u", f->u}, {"v", f->v}};
  } else {
    const auto& r = std::get<ReducedState>(eq.state);
    state = {{"s", r.s}, {"x", r.x}};
  }
  return {{"state", state},
          {"kind", to_string(eq.kind)},
          {"classification", to_string(eq.classification)},
          {"eigenvalues",
           {{eq.eigenvalues[0].real(), eq.eigenvalues[0].imag()}, {eq.eigenvalues[1].real(), eq.eigenvalues[1].imag()}}},
          {"residual", eq.residual},
          {"gamma_prime_sign", eq.gamma_prime_sign ? json(*eq.gamma_prime_sign) : json(nullptr)}};
}

json to_json(const std::vector<Equilibrium>& eqs) {
  json out = json::array();
  for (const auto& e : eqs) out.push_back(to_json(e));
  return out;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
}

}  // namespace floc
