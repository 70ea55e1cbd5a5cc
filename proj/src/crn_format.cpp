#include "lcrn/crn_format.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <vector>

#include "lcrn/errors.hpp"

namespace lcrn {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::string> parseNameList(std::string_view body, std::size_t line) {
  std::vector<std::string> names;
  body = trim(body);
  if (body.empty()) return names;
  for (std::string_view part : split(body, ',')) {
    std::string_view name = trim(part);
    if (!isValidSpeciesName(name)) {
      throw ParseError("invalid species name '" + std::string(name) + "'", line);
    }
    names.emplace_back(name);
  }
  return names;
}

std::vector<std::pair<std::string, std::uint32_t>> parseSide(std::string_view side,
                                                             std::size_t line) {
  side = trim(side);
  if (side.empty()) throw ParseError("empty reaction side (use 0 for no molecules)", line);
  std::vector<std::pair<std::string, std::uint32_t>> terms;
  if (side == "0") return terms;
  for (std::string_view part : split(side, '+')) {
    std::string_view term = trim(part);
    std::size_t i = 0;
    while (i < term.size() && std::isdigit(static_cast<unsigned char>(term[i]))) ++i;
    std::uint32_t count = 1;
    if (i > 0) {
      if (term[0] == '0' || i > 9) {
        throw ParseError("bad coefficient in term '" + std::string(term) + "'", line);
      }
      count = static_cast<std::uint32_t>(std::stoul(std::string(term.substr(0, i))));
    }
    std::string_view name = trim(term.substr(i));
    if (!isValidSpeciesName(name)) {
      throw ParseError("bad term '" + std::string(term) + "'", line);
    }
    terms.emplace_back(std::string(name), count);
  }
  return terms;
}

struct PendingReaction {
  NamedReaction reaction;
  std::size_t line;
};

}  // namespace

Crn parseCrn(std::string_view text) {
  std::vector<std::string> species;
  std::map<std::string, std::size_t> declaredAt;
  std::optional<std::vector<std::string>> inputs, outputs, yesvoters;
  std::map<std::string, std::size_t> headerLine;
  std::vector<PendingReaction> pending;

  std::size_t lineNo = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++lineNo;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (auto arrow = line.find("->"); arrow != std::string_view::npos) {
      NamedReaction r{parseSide(line.substr(0, arrow), lineNo),
                      parseSide(line.substr(arrow + 2), lineNo)};
      std::uint32_t order = 0;
      for (const auto& t : r.reactants) order += t.second;
      if (order == 0) throw ParseError("reaction needs at least one reactant", lineNo);
      if (order > 2) {
        throw ParseError("reactions are at most bimolecular (" + std::to_string(order) +
                             " reactant molecules)",
                         lineNo);
      }
      pending.push_back({std::move(r), lineNo});
      continue;
    }

    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected header or reaction", lineNo);
    std::string key(trim(line.substr(0, colon)));
    if (headerLine.count(key)) throw ParseError("repeated header '" + key + "'", lineNo);
    headerLine[key] = lineNo;
    std::vector<std::string> names = parseNameList(line.substr(colon + 1), lineNo);
    if (key == "species") {
      for (const std::string& n : names) {
        if (declaredAt.count(n)) throw ParseError("duplicate species '" + n + "'", lineNo);
        declaredAt[n] = lineNo;
        species.push_back(n);
      }
    } else if (key == "inputs") {
      inputs = std::move(names);
    } else if (key == "outputs") {
      outputs = std::move(names);
    } else if (key == "yesvoters") {
      yesvoters = std::move(names);
    } else {
      throw ParseError("unknown header '" + key + "'", lineNo);
    }
  }

  auto requireDeclared = [&](const std::string& n, std::size_t at) {
    if (!declaredAt.count(n)) throw ParseError("undeclared species '" + n + "'", at);
  };
  CrnBuilder builder;
  for (const std::string& n : species) builder.addSpecies(n);
  for (const PendingReaction& p : pending) {
    for (const auto& t : p.reaction.reactants) requireDeclared(t.first, p.line);
    for (const auto& t : p.reaction.products) requireDeclared(t.first, p.line);
    builder.addReaction(p.reaction);
  }
  auto roles = [&](const char* key, const std::optional<std::vector<std::string>>& names) {
    if (!names) return;
    for (const std::string& n : *names) requireDeclared(n, headerLine[key]);
  };
  roles("inputs", inputs);
  roles("outputs", outputs);
  roles("yesvoters", yesvoters);
  if (inputs) builder.setInputs(*inputs);
  if (outputs) builder.setOutputs(*outputs);
  if (yesvoters) builder.setYesVoters(*yesvoters);
  try {
    return builder.build();
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
}

std::string serializeCrn(const Crn& crn) {
  auto join = [&](auto&& ids) {
    std::string out;
    for (SpeciesId s : ids) {
      if (!out.empty()) out += ", ";
      out += crn.name(s);
    }
    return out;
  };
  std::vector<SpeciesId> all(crn.numSpecies());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<SpeciesId>(i);

  std::string out = "species: " + join(all) + "\n";
  out += "inputs: " + join(crn.inputs()) + "\n";
  out += "outputs: " + join(crn.outputs()) + "\n";
  if (crn.hasVoters()) {
    std::vector<SpeciesId> yes;
    for (SpeciesId s : all) {
      if (crn.isYesVoter(s)) yes.push_back(s);
    }
    out += "yesvoters: " + join(yes) + "\n";
  }
  for (const Reaction& r : crn.reactions()) out += crn.format(r) + "\n";
  return out;
}

}  // namespace lcrn
