#include "lcrn/semilinear.hpp"

#include <cctype>
#include <limits>
#include <sstream>

#include "lcrn/errors.hpp"

namespace lcrn {

namespace {

using Wide = __int128;

Wide dot(std::span<const Int> a, std::span<const Int> x) {
  Wide sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += static_cast<Wide>(a[i]) * x[i];
  return sum;
}

void requireArity(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ValidationError(std::string(what) + " has arity " + std::to_string(got) +
                          ", expected " + std::to_string(want));
  }
}

}  // namespace

std::size_t arity(const Atom& atom) {
  return std::visit([](const auto& a) { return a.a.size(); }, atom);
}

bool evalAtom(const Atom& atom, std::span<const Int> x) {
  requireArity(x.size(), arity(atom), "input");
  if (const auto* th = std::get_if<ThresholdAtom>(&atom)) return dot(th->a, x) >= th->t;
  const auto& md = std::get<ModAtom>(atom);
  Wide rem = dot(md.a, x) % md.m;
  if (rem < 0) rem += md.m;
  return rem == md.r;
}

std::string formatAtom(const Atom& atom) {
  std::ostringstream os;
  if (const auto* th = std::get_if<ThresholdAtom>(&atom)) {
    os << "(ge";
    for (Int v : th->a) os << ' ' << v;
    os << ' ' << th->t << ')';
  } else {
    const auto& md = std::get<ModAtom>(atom);
    os << "(mod";
    for (Int v : md.a) os << ' ' << v;
    os << ' ' << md.m << ' ' << md.r << ')';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
DomainPredicate DomainPredicate::constant(bool value) {
  DomainPredicate p;
  p.kind_ = value ? Kind::True : Kind::False;
  return p;
}

DomainPredicate DomainPredicate::atom(Atom a) {
  DomainPredicate p;
  p.kind_ = Kind::Atom;
  p.atom_ = std::move(a);
  return p;
}

DomainPredicate DomainPredicate::negate(DomainPredicate inner) {
  DomainPredicate p;
  p.kind_ = Kind::Not;
  p.children_.push_back(std::move(inner));
  return p;
}

DomainPredicate DomainPredicate::conjunction(std::vector<DomainPredicate> parts) {
  DomainPredicate p;
  p.kind_ = Kind::And;
  p.children_ = std::move(parts);
  return p;
}

DomainPredicate DomainPredicate::disjunction(std::vector<DomainPredicate> parts) {
  DomainPredicate p;
  p.kind_ = Kind::Or;
  p.children_ = std::move(parts);
  return p;
}

bool DomainPredicate::evaluate(const std::function<bool(const Atom&)>& atomValue) const {
  switch (kind_) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Atom: return atomValue(*atom_);
    case Kind::Not: return !children_[0].evaluate(atomValue);
    case Kind::And:
      for (const auto& c : children_) {
        if (!c.evaluate(atomValue)) return false;
      }
      return true;
    case Kind::Or:
      for (const auto& c : children_) {
        if (c.evaluate(atomValue)) return true;
      }
      return false;
  }
  return false;
}

bool DomainPredicate::evaluate(std::span<const Int> x) const {
  return evaluate([&](const Atom& a) { return evalAtom(a, x); });
}

void DomainPredicate::collectAtoms(std::vector<Atom>& out) const {
  if (kind_ == Kind::Atom) out.push_back(*atom_);
  for (const auto& c : children_) c.collectAtoms(out);
}

void DomainPredicate::validate(std::size_t k) const {
  if (kind_ == Kind::Atom) {
    requireArity(arity(*atom_), k, "domain atom");
    if (const auto* md = std::get_if<ModAtom>(&*atom_)) {
      if (md->m < 2) throw ValidationError("mod atom needs modulus >= 2");
      if (md->r < 0 || md->r >= md->m) throw ValidationError("mod atom residue out of range");
    }
  }
  if (kind_ == Kind::Not && children_.size() != 1) throw ValidationError("not takes one operand");
  for (const auto& c : children_) c.validate(k);
}

std::string DomainPredicate::toString() const {
  switch (kind_) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::Atom: return formatAtom(*atom_);
    default: break;
  }
  std::string out = kind_ == Kind::Not ? "(not" : kind_ == Kind::And ? "(and" : "(or";
  for (const auto& c : children_) out += " " + c.toString();
  return out + ")";
}

bool DomainPredicate::operator==(const DomainPredicate& other) const {
  return kind_ == other.kind_ && atom_ == other.atom_ && children_ == other.children_;
}

// ---------------------------------------------------------------------------
namespace {

class SexprParser {
 public:
  SexprParser(std::string_view text, std::size_t k) : text_(text), k_(k) {}

  DomainPredicate parse() {
    DomainPredicate p = formula();
    skipSpace();
    if (pos_ != text_.size()) fail("trailing input");
    return p;
  }

 private:
  std::string_view text_;
  std::size_t k_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("domain: " + what + " at column " + std::to_string(pos_ + 1));
  }

  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view token() {
    skipSpace();
    if (pos_ >= text_.size()) fail("unexpected end");
    if (text_[pos_] == '(' || text_[pos_] == ')') return text_.substr(pos_++, 1);
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  bool peekClose() {
    skipSpace();
    return pos_ < text_.size() && text_[pos_] == ')';
  }

  Int integer() {
    std::string_view t = token();
    std::size_t i = (t.size() > 1 && t[0] == '-') ? 1 : 0;
    if (i == t.size()) fail("expected integer");
    for (std::size_t j = i; j < t.size(); ++j) {
      if (!std::isdigit(static_cast<unsigned char>(t[j]))) {
        fail("expected integer, got '" + std::string(t) + "'");
      }
    }
    try {
      return std::stoll(std::string(t));
    } catch (const std::out_of_range&) {
      fail("integer out of range");
    }
  }

  std::vector<Int> integersUntilClose() {
    std::vector<Int> out;
    while (!peekClose()) out.push_back(integer());
    ++pos_;
    return out;
  }

  DomainPredicate formula() {
    std::string_view t = token();
    if (t == "true") return DomainPredicate::constant(true);
    if (t == "false") return DomainPredicate::constant(false);
    if (t != "(") fail("expected formula, got '" + std::string(t) + "'");
    std::string_view op = token();
    if (op == "ge") {
      std::vector<Int> v = integersUntilClose();
      if (v.size() != k_ + 1) {
        throw ValidationError("ge atom needs " + std::to_string(k_) +
                              " coefficients and a threshold, got " + std::to_string(v.size()) +
                              " integers");
      }
      Int t0 = v.back();
      v.pop_back();
      return DomainPredicate::atom(ThresholdAtom{std::move(v), t0});
    }
    if (op == "mod") {
      std::vector<Int> v = integersUntilClose();
      if (v.size() != k_ + 2) {
        throw ValidationError("mod atom needs " + std::to_string(k_) +
                              " coefficients, a modulus and a residue, got " +
                              std::to_string(v.size()) + " integers");
      }
      Int r = v.back();
      v.pop_back();
      Int m = v.back();
      v.pop_back();
      if (m < 2) fail("modulus must be >= 2");
      if (r < 0 || r >= m) fail("residue must lie in [0, m)");
      return DomainPredicate::atom(ModAtom{std::move(v), m, r});
    }
    if (op == "not" || op == "and" || op == "or") {
      std::vector<DomainPredicate> parts;
      while (!peekClose()) parts.push_back(formula());
      ++pos_;
      if (op == "not") {
        if (parts.size() != 1) fail("not takes exactly one operand");
        return DomainPredicate::negate(std::move(parts[0]));
      }
      return op == "and" ? DomainPredicate::conjunction(std::move(parts))
                         : DomainPredicate::disjunction(std::move(parts));
    }
    fail("unknown operator '" + std::string(op) + "'");
  }
};

}  // namespace

DomainPredicate parseDomain(std::string_view text, std::size_t k) {
  return SexprParser(text, k).parse();
}

// ---------------------------------------------------------------------------
void AffinePiece::validate() const {
  if (coeff.size() != k) throw ValidationError("coeff must have one row per input");
  for (const auto& row : coeff) {
    if (row.size() != l) throw ValidationError("coeff rows must have one entry per output");
  }
  if (denom.size() != l || bOffset.size() != l) {
    throw ValidationError("denom and b must have one entry per output");
  }
  if (cOffset.size() != k) throw ValidationError("c must have one entry per input");
  for (Int d : denom) {
    if (d < 1) throw ValidationError("denominators must be >= 1");
  }
  for (Int b : bOffset) {
    if (b < 0) throw ValidationError("b offsets must be >= 0");
  }
  for (Int c : cOffset) {
    if (c < 0) throw ValidationError("c offsets must be >= 0");
  }
}

std::optional<FunctionValue> tryEvalPiece(const AffinePiece& p, std::span<const Int> x) {
  requireArity(x.size(), p.k, "input");
  for (std::size_t i = 0; i < p.k; ++i) {
    if (x[i] < p.cOffset[i]) return std::nullopt;
  }
  FunctionValue y(p.l);
  for (std::size_t j = 0; j < p.l; ++j) {
    Wide sum = 0;
    for (std::size_t i = 0; i < p.k; ++i) {
      sum += static_cast<Wide>(p.coeff[i][j]) * (static_cast<Wide>(x[i]) - p.cOffset[i]);
    }
    if (sum % p.denom[j] != 0) return std::nullopt;
    Wide v = p.bOffset[j] + sum / p.denom[j];
    if (v < 0) return std::nullopt;
    if (v > std::numeric_limits<Int>::max()) throw DomainError("piece value overflows");
    y[j] = static_cast<Int>(v);
  }
  return y;
}

FunctionValue evalPiece(const AffinePiece& p, std::span<const Int> x) {
  requireArity(x.size(), p.k, "input");
  for (std::size_t i = 0; i < p.k; ++i) {
    if (x[i] < p.cOffset[i]) {
      throw DomainError("x(" + std::to_string(i + 1) + ") = " + std::to_string(x[i]) +
                        " is below the offset c = " + std::to_string(p.cOffset[i]));
    }
  }
  auto y = tryEvalPiece(p, x);
  if (!y) throw DomainError("denominator does not divide the sum, or the value is negative");
  return *y;
}

// ---------------------------------------------------------------------------
void SemilinearFunctionSpec::validateStructure() const {
  if (k == 0) throw ValidationError("arity_in must be >= 1");
  if (l == 0) throw ValidationError("arity_out must be >= 1");
  if (pieces.empty()) throw ValidationError("a spec needs at least one piece");
  for (const GuardedPiece& gp : pieces) {
    if (gp.piece.k != k || gp.piece.l != l) throw ValidationError("piece arity mismatch");
    gp.piece.validate();
    gp.domain.validate(k);
  }
  if (!inputNames.empty() && inputNames.size() != k) {
    throw ValidationError("inputs must name every input");
  }
  if (!outputNames.empty() && outputNames.size() != l) {
    throw ValidationError("outputs must name every output");
  }
}

std::vector<std::string> SemilinearFunctionSpec::resolvedInputNames() const {
  if (!inputNames.empty()) return inputNames;
  if (k == 1) return {"X"};
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= k; ++i) out.push_back("X" + std::to_string(i));
  return out;
}

std::vector<std::string> SemilinearFunctionSpec::resolvedOutputNames() const {
  if (!outputNames.empty()) return outputNames;
  if (l == 1) return {"Y"};
  std::vector<std::string> out;
  for (std::size_t j = 1; j <= l; ++j) out.push_back("Y" + std::to_string(j));
  return out;
}

std::optional<std::size_t> selectPiece(const SemilinearFunctionSpec& spec,
                                       std::span<const Int> x) {
  requireArity(x.size(), spec.k, "input");
  for (std::size_t i = 0; i < spec.pieces.size(); ++i) {
    if (spec.pieces[i].domain.evaluate(x)) return i;
  }
  return std::nullopt;
}

namespace {
std::string formatVector(std::span<const Int> x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(x[i]);
  }
  return out + ")";
}
}  // namespace

FunctionValue evalFunction(const SemilinearFunctionSpec& spec, std::span<const Int> x) {
  auto idx = selectPiece(spec, x);
  if (!idx) throw CoverageError("no piece domain contains x = " + formatVector(x));
  return evalPiece(spec.pieces[*idx].piece, x);
}

ValidationReport validate(const SemilinearFunctionSpec& spec, Int bound) {
  if (bound < 1) throw ValidationError("validation bound must be >= 1");
  ValidationReport report;
  forEachInput(spec.k, bound, [&](const InputVector& x) {
    if (!report.ok) return;
    ++report.checked;
    auto idx = selectPiece(spec, x);
    if (!idx) {
      report.ok = false;
      report.counterexample = x;
      report.message = "no piece domain contains x = " + formatVector(x);
      return;
    }
    try {
      evalPiece(spec.pieces[*idx].piece, x);
    } catch (const DomainError& e) {
      report.ok = false;
      report.counterexample = x;
      report.message = "piece " + std::to_string(*idx + 1) + " undefined at x = " +
                       formatVector(x) + ": " + e.what();
    }
  });
  return report;
}

void forEachInput(std::size_t k, Int bound, const std::function<void(const InputVector&)>& fn) {
  InputVector x(k, 0);
  for (;;) {
    fn(x);
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (x[i] < bound) {
        ++x[i];
        break;
      }
      x[i] = 0;
      if (i == 0) return;
    }
    if (k == 0) return;
  }
}

void forEachInputUpToNorm(std::size_t k, Int maxNorm,
                          const std::function<void(const InputVector&)>& fn) {
  forEachInput(k, maxNorm, [&](const InputVector& x) {
    Int norm = 0;
    for (Int v : x) norm += v;
    if (norm <= maxNorm) fn(x);
  });
}

}  // namespace lcrn
