#include "lcrn/fnspec_format.hpp"

#include <json.hpp>

#include "lcrn/errors.hpp"

namespace lcrn {

namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError("missing field '" + path + key + "'");
  }
  return obj.at(key);
}

Int asInt(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError("'" + path + "' must be an integer");
  return v.get<Int>();
}

std::vector<Int> intList(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError("'" + path + "' must be an array of integers");
  std::vector<Int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(asInt(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::string> nameList(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError("'" + path + "' must be an array of names");
  std::vector<std::string> out;
  for (const json& n : v) {
    if (!n.is_string()) throw ParseError("'" + path + "' must hold strings");
    out.push_back(n.get<std::string>());
  }
  return out;
}

}  // namespace

SemilinearFunctionSpec parseSpec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; translate to line/column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("malformed JSON", line, col);
  }
  if (!doc.is_object()) throw ParseError("top level must be an object");

  SemilinearFunctionSpec spec;
  Int k = asInt(field(doc, "arity_in", ""), "arity_in");
  Int l = asInt(field(doc, "arity_out", ""), "arity_out");
  if (k < 1 || l < 1) throw ValidationError("arities must be >= 1");
  spec.k = static_cast<std::size_t>(k);
  spec.l = static_cast<std::size_t>(l);
  if (doc.contains("inputs")) spec.inputNames = nameList(doc["inputs"], "inputs");
  if (doc.contains("outputs")) spec.outputNames = nameList(doc["outputs"], "outputs");

  const json& pieces = field(doc, "pieces", "");
  if (!pieces.is_array()) throw ParseError("'pieces' must be an array");
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    std::string path = "pieces[" + std::to_string(p) + "].";
    const json& obj = pieces[p];
    AffinePiece piece;
    piece.k = spec.k;
    piece.l = spec.l;
    const json& coeff = field(obj, "coeff", path);
    if (!coeff.is_array()) throw ParseError("'" + path + "coeff' must be an array of rows");
    for (std::size_t i = 0; i < coeff.size(); ++i) {
      piece.coeff.push_back(intList(coeff[i], path + "coeff[" + std::to_string(i) + "]"));
    }
    piece.denom = intList(field(obj, "denom", path), path + "denom");
    piece.bOffset = intList(field(obj, "b", path), path + "b");
    piece.cOffset = intList(field(obj, "c", path), path + "c");
    const json& domain = field(obj, "domain", path);
    if (!domain.is_string()) throw ParseError("'" + path + "domain' must be a string");
    DomainPredicate dom = [&] {
      try {
        return parseDomain(domain.get<std::string>(), spec.k);
      } catch (const ParseError& e) {
        throw ParseError(path + e.what());
      }
    }();
    spec.pieces.push_back({std::move(piece), std::move(dom)});
  }
  spec.validateStructure();
  return spec;
}

std::string serializeSpec(const SemilinearFunctionSpec& spec) {
  json doc = json::object();
  doc["arity_in"] = spec.k;
  doc["arity_out"] = spec.l;
  if (!spec.inputNames.empty()) doc["inputs"] = spec.inputNames;
  if (!spec.outputNames.empty()) doc["outputs"] = spec.outputNames;
  json pieces = json::array();
  for (const GuardedPiece& gp : spec.pieces) {
    json p = json::object();
    p["coeff"] = gp.piece.coeff;
    p["denom"] = gp.piece.denom;
    p["b"] = gp.piece.bOffset;
    p["c"] = gp.piece.cOffset;
    p["domain"] = gp.domain.toString();
    pieces.push_back(std::move(p));
  }
  doc["pieces"] = std::move(pieces);
  return doc.dump(2) + "\n";
}

}  // namespace lcrn
