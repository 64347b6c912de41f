#include "vincl/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace vincl {

namespace {

std::string describe(const std::string& message, const std::string& field,
                     std::optional<std::size_t> line, std::optional<std::size_t> column) {
  std::ostringstream os;
  os << "instance: ";
  if (line) {
    os << "line " << *line;
    if (column) os << ", column " << *column;
    os << ": ";
  }
  if (!field.empty()) os << "field " << field << ": ";
  os << message;
  return os.str();
}

using json = nlohmann::json;

std::string child(const std::string& path, std::string_view key) {
  return path + "/" + std::string(key);
}
std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ParseError(message, path.empty() ? "/" : path);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "number is not finite");
  return v;
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) fail(path, "must be > 0");
  return v;
}

Vector vector(const json& j, std::size_t dim, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of " + std::to_string(dim) + " numbers");
  if (j.size() != dim) {
    fail(path, "expected " + std::to_string(dim) + " entries, got " + std::to_string(j.size()));
  }
  std::vector<double> v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = number(j[i], child(path, i));
  return Vector(std::move(v));
}

Matrix matrix(const json& j, std::size_t dim, const std::string& path) {
  const auto n = static_cast<Eigen::Index>(dim);
  if (j.is_number()) return number(j, path) * Matrix::Identity(n, n);
  if (!j.is_array() || j.size() != dim) {
    fail(path, "expected a scalar or " + std::to_string(dim) + " rows of " +
                   std::to_string(dim) + " numbers");
  }
  Matrix m(n, n);
  for (std::size_t r = 0; r < dim; ++r) {
    const Vector row = vector(j[r], dim, child(path, r));
    for (std::size_t c = 0; c < dim; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
  }
  return m;
}

void only_keys(const json& j, std::initializer_list<std::string_view> keys,
               const std::string& path) {
  for (const auto& [k, _] : j.items()) {
    bool known = false;
    for (auto key : keys) known = known || k == key;
    if (!known) fail(child(path, k), "unknown field");
  }
}

AffineRealization affine(const json& j, std::size_t dim, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object with \"matrix\" and optional \"offset\"");
  only_keys(j, {"matrix", "offset"}, path);
  if (!j.contains("matrix")) fail(child(path, "matrix"), "missing");
  return AffineRealization{matrix(j["matrix"], dim, child(path, "matrix")),
                           j.contains("offset") ? vector(j["offset"], dim, child(path, "offset"))
                                                : Vector::zeros(dim)};
}

SingleValuedMap single(const json& doc, std::string_view key, std::size_t dim) {
  if (!doc.contains(key)) return SingleValuedMap::zero(dim);
  auto a = affine(doc[std::string(key)], dim, child("", key));
  return SingleValuedMap::affine(std::move(a.linear), std::move(a.offset));
}

FiniteSetValuedMap set_map(const json& doc, std::string_view key, std::size_t dim) {
  const std::string path = child("", key);
  if (!doc.contains(key)) return FiniteSetValuedMap::identity(dim);
  const json& j = doc[std::string(key)];
  if (j.is_string()) {
    if (j.get<std::string>() != "identity") fail(path, "expected \"identity\" or an object");
    return FiniteSetValuedMap::identity(dim);
  }
  if (!j.is_object() || j.size() != 1) {
    fail(path, "expected \"identity\", {\"branches\": [...]} or {\"grid\": [...]}");
  }
  if (j.contains("branches")) {
    const json& b = j["branches"];
    const std::string bp = child(path, "branches");
    if (!b.is_array() || b.empty()) fail(bp, "expected a nonempty array");
    std::vector<AffineRealization> maps;
    for (std::size_t i = 0; i < b.size(); ++i) maps.push_back(affine(b[i], dim, child(bp, i)));
    return FiniteSetValuedMap::branches(std::move(maps));
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    const std::string gp = child(path, "grid");
    if (!g.is_array() || g.empty()) fail(gp, "expected a nonempty array");
    FiniteSetValuedMap::Grid grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string np = child(gp, i);
      if (!g[i].is_object()) fail(np, "expected {\"node\": [...], \"values\": [[...], ...]}");
      only_keys(g[i], {"node", "values"}, np);
      if (!g[i].contains("node")) fail(child(np, "node"), "missing");
      if (!g[i].contains("values")) fail(child(np, "values"), "missing");
      grid.nodes.push_back(vector(g[i]["node"], dim, child(np, "node")));
      const json& vals = g[i]["values"];
      const std::string vp = child(np, "values");
      if (!vals.is_array() || vals.empty()) fail(vp, "expected a nonempty array of points");
      PointSet set;
      for (std::size_t k = 0; k < vals.size(); ++k) set.push_back(vector(vals[k], dim, child(vp, k)));
      grid.values.push_back(std::move(set));
    }
    return FiniteSetValuedMap::grid(std::move(grid));
  }
  fail(path, "expected \"identity\", {\"branches\": [...]} or {\"grid\": [...]}");
}

std::string mode(const json& doc, std::string_view key, std::string_view expected) {
  if (!doc.contains(key)) return std::string(expected);
  const json& j = doc[std::string(key)];
  if (!j.is_string() || j.get<std::string>() != expected) {
    fail(child("", key), "only \"" + std::string(expected) + "\" is supported");
  }
  return std::string(expected);
}

json matrix_json(const Matrix& m) {
  // Multiples of the identity are written as scalars.
  const auto n = m.rows();
  bool scalar = true;
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) scalar = scalar && m(r, c) == (r == c ? m(0, 0) : 0.0);
  }
  if (scalar) return m(0, 0);
  json rows = json::array();
  for (Eigen::Index r = 0; r < n; ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < n; ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (double x : v.coords()) out.push_back(x);
  return out;
}

json affine_json(const AffineRealization& a) {
  json out{{"matrix", matrix_json(a.linear)}};
  if (norm(a.offset) != 0.0) out["offset"] = vector_json(a.offset);
  return out;
}

json set_map_json(const FiniteSetValuedMap& m, std::string_view label) {
  switch (m.kind()) {
    case FiniteSetValuedMap::Kind::identity: return "identity";
    case FiniteSetValuedMap::Kind::branches: {
      json b = json::array();
      for (const auto& a : m.branch_maps()) b.push_back(affine_json(a));
      return json{{"branches", std::move(b)}};
    }
    case FiniteSetValuedMap::Kind::grid: {
      json g = json::array();
      const auto& grid = m.grid_data();
      for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        json vals = json::array();
        for (const auto& p : grid.values[i]) vals.push_back(vector_json(p));
        g.push_back(json{{"node", vector_json(grid.nodes[i])}, {"values", std::move(vals)}});
      }
      return json{{"grid", std::move(g)}};
    }
    case FiniteSetValuedMap::Kind::function: break;
  }
  throw Error(ErrorCode::invalid_argument,
              "instance_to_json: " + std::string(label) + " is a black-box map");
}

}  // namespace

ParseError::ParseError(const std::string& message, std::string field,
                       std::optional<std::size_t> line, std::optional<std::size_t> column)
    : Error(ErrorCode::parse_error, describe(message, field, line, column)),
      field_(std::move(field)),
      line_(line),
      column_(column) {}

InclusionInstance instance_from_json(const json& doc) {
  if (!doc.is_object()) fail("", "expected a JSON object");
  only_keys(doc, {"name", "dim", "q", "c_q", "rho", "omega", "A", "B", "C", "D", "f", "g", "F",
                  "H", "M", "S", "T", "constants"},
            "");
  if (!doc.contains("dim")) fail("/dim", "missing");
  const json& jd = doc["dim"];
  if (!jd.is_number_integer() || jd.get<long long>() < 1) fail("/dim", "expected a positive integer");
  const auto dim = static_cast<std::size_t>(jd.get<long long>());

  SpaceConfig space;
  space.dim = dim;
  if (doc.contains("q")) {
    space.q = number(doc["q"], "/q");
    if (!(space.q > 1.0)) fail("/q", "must be > 1");
  }
  if (doc.contains("c_q")) space.c_q = positive(doc["c_q"], "/c_q");

  std::string name = "instance";
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail("/name", "expected a string");
    name = doc["name"].get<std::string>();
  }

  PairMapF F = PairMapF::zero(dim);
  if (doc.contains("F")) {
    const json& jf = doc["F"];
    if (!jf.is_object()) fail("/F", "expected an object with \"P\", \"Q\" and optional \"offset\"");
    only_keys(jf, {"P", "Q", "offset"}, "/F");
    const auto n = static_cast<Eigen::Index>(dim);
    F = PairMapF::affine(jf.contains("P") ? matrix(jf["P"], dim, "/F/P") : Matrix::Zero(n, n),
                         jf.contains("Q") ? matrix(jf["Q"], dim, "/F/Q") : Matrix::Zero(n, n),
                         jf.contains("offset") ? vector(jf["offset"], dim, "/F/offset")
                                               : Vector::zeros(dim));
  }
  mode(doc, "H", "additive");
  mode(doc, "M", "f-minus-g");

  Constants constants;
  if (doc.contains("constants")) {
    const json& jc = doc["constants"];
    if (!jc.is_object()) fail("/constants", "expected an object");
    for (const auto& [key, value] : jc.items()) {
      const std::string path = child("/constants", key);
      bool known = false;
      for (const auto& s : Constants::slots()) known = known || s.name == key;
      if (!known) fail(path, "unknown constant");
      constants.set(key, number(value, path));
    }
  }

  InclusionInstance inst{
      .name = std::move(name),
      .space = space,
      .A = single(doc, "A", dim),
      .B = single(doc, "B", dim),
      .C = single(doc, "C", dim),
      .D = single(doc, "D", dim),
      .f = single(doc, "f", dim),
      .g = single(doc, "g", dim),
      .H = BiSlotMapH::additive(),
      .F = std::move(F),
      .M = SetValuedMapM::f_minus_g(),
      .S = set_map(doc, "S", dim),
      .T = set_map(doc, "T", dim),
      .omega = doc.contains("omega") ? vector(doc["omega"], dim, "/omega") : Vector::zeros(dim),
      .rho = doc.contains("rho") ? positive(doc["rho"], "/rho") : 1.0,
      .constants = constants,
  };
  inst.validate();
  return inst;
}

InclusionInstance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Convert the byte offset into line and column (both 1-based).
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ParseError(msg, "", line, column);
  }
  return instance_from_json(doc);
}

InclusionInstance load_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string(), "");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

json instance_to_json(const InclusionInstance& inst) {
  if (!inst.H.is_additive()) {
    throw Error(ErrorCode::invalid_argument, "instance_to_json: H is not additive");
  }
  if (!inst.M.is_f_minus_g()) {
    throw Error(ErrorCode::invalid_argument, "instance_to_json: M is not f-minus-g");
  }
  json doc;
  doc["name"] = inst.name;
  doc["dim"] = inst.dim();
  doc["q"] = inst.space.q;
  doc["c_q"] = inst.space.c_q;
  doc["rho"] = inst.rho;
  doc["omega"] = vector_json(inst.omega);
  const std::pair<const char*, const SingleValuedMap*> maps[] = {
      {"A", &inst.A}, {"B", &inst.B}, {"C", &inst.C}, {"D", &inst.D}, {"f", &inst.f}, {"g", &inst.g}};
  for (const auto& [label, map] : maps) {
    if (!map->is_affine()) {
      throw Error(ErrorCode::invalid_argument,
                  std::string("instance_to_json: ") + label + " is a black-box map");
    }
    doc[label] = affine_json(*map->affine());
  }
  const auto& fa = inst.F.affine();
  if (!fa) throw Error(ErrorCode::invalid_argument, "instance_to_json: F is a black-box map");
  doc["F"] = json{{"P", matrix_json(fa->first)}, {"Q", matrix_json(fa->second)}};
  if (norm(fa->offset) != 0.0) doc["F"]["offset"] = vector_json(fa->offset);
  doc["H"] = "additive";
  doc["M"] = "f-minus-g";
  doc["S"] = set_map_json(inst.S, "S");
  doc["T"] = set_map_json(inst.T, "T");
  json constants = json::object();
  for (const auto& s : Constants::slots()) {
    if (const auto& v = inst.constants.*s.member) constants[std::string(s.name)] = *v;
  }
  doc["constants"] = std::move(constants);
  return doc;
}

}  // namespace vincl
