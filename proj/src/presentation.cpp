#include "liefox/presentation.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace liefox {

LieExpr LieExpr::gen(std::string name) {
  LieExpr e;
  e.node_ = std::make_shared<Node>(Node{Kind::Gen, std::move(name), Scalar(), nullptr, nullptr, {}});
  return e;
}

LieExpr LieExpr::bracket(LieExpr a, LieExpr b) {
  LieExpr e;
  e.node_ = std::make_shared<Node>(Node{Kind::Bracket, "", Scalar(),
                                        std::make_shared<const LieExpr>(std::move(a)),
                                        std::make_shared<const LieExpr>(std::move(b)),
                                        {}});
  return e;
}

LieExpr LieExpr::scale(Scalar c, LieExpr child) {
  LieExpr e;
  e.node_ = std::make_shared<Node>(Node{Kind::Scale, "", std::move(c),
                                        std::make_shared<const LieExpr>(std::move(child)), nullptr, {}});
  return e;
}

LieExpr LieExpr::sum(std::vector<LieExpr> terms) {
  LieExpr e;
  e.node_ = std::make_shared<Node>(Node{Kind::Sum, "", Scalar(), nullptr, nullptr, std::move(terms)});
  return e;
}

bool LieExpr::operator==(const LieExpr& o) const {
  if (kind() != o.kind()) return false;
  switch (kind()) {
    case Kind::Gen:
      return name() == o.name();
    case Kind::Bracket:
      return left() == o.left() && right() == o.right();
    case Kind::Scale:
      return coeff() == o.coeff() && left() == o.left();
    case Kind::Sum: {
      if (terms().size() != o.terms().size()) return false;
      for (size_t i = 0; i < terms().size(); ++i)
        if (!(terms()[i] == o.terms()[i])) return false;
      return true;
    }
  }
  return false;
}

static void print_expr(const LieExpr& e, std::ostream& os, bool lead_sign_space);

static void print_term(const LieExpr& e, std::ostream& os) {
  switch (e.kind()) {
    case LieExpr::Kind::Gen:
      os << e.name();
      break;
    case LieExpr::Kind::Bracket:
      os << '[';
      print_expr(e.left(), os, false);
      os << ',';
      print_expr(e.right(), os, false);
      os << ']';
      break;
    case LieExpr::Kind::Scale: {
      std::string c = e.coeff().str();
      if (c != "1") os << c << '*';
      print_term(e.left(), os);
      break;
    }
    case LieExpr::Kind::Sum:
      // sums appear only at top level or directly under brackets
      print_expr(e, os, false);
      break;
  }
}

static void print_expr(const LieExpr& e, std::ostream& os, bool) {
  if (e.kind() != LieExpr::Kind::Sum) {
    print_term(e, os);
    return;
  }
  if (e.terms().empty()) {
    os << '0';
    return;
  }
  bool first = true;
  for (const LieExpr& t : e.terms()) {
    const LieExpr* body = &t;
    bool neg = false;
    std::string coeff;
    if (t.kind() == LieExpr::Kind::Scale) {
      std::string c = t.coeff().str();
      if (!c.empty() && c[0] == '-') {
        neg = true;
        c = c.substr(1);
      }
      coeff = c;
      body = &t.left();
    }
    if (first) {
      if (neg) os << '-';
      first = false;
    } else {
      os << (neg ? " - " : " + ");
    }
    if (!coeff.empty() && coeff != "1") os << coeff << '*';
    print_term(*body, os);
  }
}

std::string LieExpr::str() const {
  std::ostringstream os;
  print_expr(*this, os, true);
  return os.str();
}

namespace {

struct ExprParser {
  const std::string& s;
  const FieldSpec& field;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) { throw ExprParseError(pos, msg); }

  bool name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '.';
  }

  std::string parse_int() {
    skip();
    size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) fail("expected integer");
    return s.substr(start, pos - start);
  }

  LieExpr parse_atom() {
    skip();
    if (pos >= s.size()) fail("expected name or bracket");
    if (s[pos] == '[') {
      ++pos;
      LieExpr a = parse_expr();
      if (!eat(',')) fail("expected ','");
      LieExpr b = parse_expr();
      if (!eat(']')) fail("expected ']'");
      return LieExpr::bracket(std::move(a), std::move(b));
    }
    if (!name_char(s[pos]) || (s[pos] >= '0' && s[pos] <= '9')) fail("expected name or bracket");
    size_t start = pos;
    while (pos < s.size() && name_char(s[pos])) ++pos;
    return LieExpr::gen(s.substr(start, pos - start));
  }

  LieExpr parse_term() {
    skip();
    if (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      std::string num = parse_int();
      std::string lit = num;
      skip();
      if (pos < s.size() && s[pos] == '/') {
        ++pos;
        lit += "/" + parse_int();
      }
      if (!eat('*')) fail("expected '*' after scalar");
      Scalar c = Scalar::parse(field, lit);
      return LieExpr::scale(std::move(c), parse_atom());
    }
    return parse_atom();
  }

  LieExpr parse_expr() {
    std::vector<LieExpr> terms;
    skip();
    bool neg = false;
    if (pos < s.size() && s[pos] == '-') {
      neg = true;
      ++pos;
    }
    auto push = [&](LieExpr t, bool negate) {
      if (negate) {
        if (t.kind() == LieExpr::Kind::Scale)
          t = LieExpr::scale(-t.coeff(), t.left());
        else
          t = LieExpr::scale(Scalar(field, -1), std::move(t));
      }
      terms.push_back(std::move(t));
    };
    push(parse_term(), neg);
    for (;;) {
      skip();
      if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        bool minus = s[pos] == '-';
        ++pos;
        push(parse_term(), minus);
      } else {
        break;
      }
    }
    if (terms.size() == 1) return terms[0];
    return LieExpr::sum(std::move(terms));
  }
};

}  // namespace

LieExpr parse_lie_expr(const std::string& text, const FieldSpec& field) {
  ExprParser p{text, field};
  LieExpr e = p.parse_expr();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return e;
}

ValidationReport validate_presentation(const FreeSumPresentation& p) {
  ValidationReport rep;
  auto bad = [&](const std::string& where, const std::string& msg) {
    rep.problems.push_back({where, msg});
  };

  if (p.cap < 1) bad("cap", "truncation cap must be at least 1");
  if (p.summands.empty() && p.free_generators.empty())
    bad("presentation", "at least one summand or free generator is required");
  if (!p.field.rational() && p.field.p < 2) bad("field", "invalid field modulus");

  std::set<std::string> names;
  auto claim = [&](const std::string& n, const std::string& where) {
    if (n.empty()) bad(where, "empty name");
    if (!names.insert(n).second) bad(where, "duplicate name '" + n + "'");
  };

  for (size_t si = 0; si < p.summands.size(); ++si) {
    const SummandSpec& a = p.summands[si];
    std::string where = "summand '" + a.name + "'";
    claim(a.name, where);
    size_t n = a.weights.size();
    if (n == 0) bad(where, "empty summand");
    if (a.basis.size() != n) bad(where, "basis names and weights differ in length");
    for (const std::string& b : a.basis) claim(b, where);
    for (size_t i = 0; i < n; ++i)
      if (a.weights[i] < 1)
        bad(where, "weight of basis vector " + std::to_string(i + 1) + " must be positive");
    if (a.c.size() != n) {
      bad(where, "structure constant table has wrong shape");
      continue;
    }
    auto cval = [&](size_t i, size_t j, size_t k) -> Scalar {
      auto it = a.c[i][j].find(k);
      return it == a.c[i][j].end() ? Scalar() : it->second;
    };
    for (size_t i = 0; i < n; ++i) {
      if (a.c[i].size() != n) {
        bad(where, "structure constant table has wrong shape");
        continue;
      }
      for (size_t j = 0; j < n; ++j) {
        for (const auto& [k, v] : a.c[i][j]) {
          if (k >= n) {
            bad(where, "structure constant target index out of range");
            continue;
          }
          if (v != -cval(j, i, k))
            bad(where, "antisymmetry: c[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) +
                           "] inconsistent with c[" + std::to_string(j + 1) + "][" +
                           std::to_string(i + 1) + "]");
          if (!v.is_zero() && a.weights[k] != a.weights[i] + a.weights[j])
            bad(where, "grading: w(" + a.basis[k] + ") != w(" + a.basis[i] + ")+w(" + a.basis[j] +
                           ") in bracket [" + a.basis[i] + "," + a.basis[j] + "]");
        }
      }
    }
    // Jacobi over all basis triples
    size_t nn = n;
    for (size_t i = 0; i < nn; ++i)
      for (size_t j = i; j < nn; ++j)
        for (size_t k = j; k < nn; ++k) {
          std::map<size_t, Scalar> acc;
          auto addterm = [&](size_t x, size_t y, size_t z) {
            // [x, [y, z]]
            for (const auto& [l, v] : a.c[y][z])
              for (const auto& [m, w] : a.c[x][l]) {
                acc[m] += v * w;
              }
          };
          addterm(i, j, k);
          addterm(j, k, i);
          addterm(k, i, j);
          for (const auto& [m, v] : acc)
            if (!v.is_zero()) {
              bad(where, "Jacobi fails on (" + a.basis[i] + "," + a.basis[j] + "," + a.basis[k] + ")");
              break;
            }
        }
  }

  for (const FreeGeneratorSpec& g : p.free_generators) {
    claim(g.name, "free generator '" + g.name + "'");
    if (g.weight < 1) bad("free generator '" + g.name + "'", "weight must be positive");
  }

  if (p.ideal.kind == IdealSpec::Kind::Explicit && p.ideal.generators.empty())
    bad("ideal", "explicit ideal with no generators");
  for (int m : p.series)
    if (m < 1) bad("series", "signature entries must be positive");

  return rep;
}

static Scalar parse_bracket_scalar(const FieldSpec& f, const nlohmann::json& j) {
  if (j.is_number_integer()) return Scalar(f, j.get<long>());
  if (j.is_string()) return Scalar::parse(f, j.get<std::string>());
  throw input_error("structure constant value must be an integer or 'num/den' string");
}

FreeSumPresentation load_presentation_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(std::string("presentation is not valid JSON: ") + e.what());
  }
  FreeSumPresentation p;
  try {
    if (j.contains("field")) {
      const auto& f = j["field"];
      std::string t = f.value("type", "Q");
      if (t == "Q")
        p.field = FieldSpec::rationals();
      else if (t == "GF")
        p.field = FieldSpec::prime(f.at("p").get<unsigned long>());
      else
        throw input_error("unknown field type '" + t + "'");
    }
    p.cap = j.value("cap", 0);
    for (const auto& js : j.value("summands", nlohmann::json::array())) {
      SummandSpec s;
      s.name = js.at("name").get<std::string>();
      size_t dim = js.at("dim").get<size_t>();
      s.weights = js.at("weights").get<std::vector<int>>();
      if (s.weights.size() != dim)
        throw input_error("summand '" + s.name + "': dim and weights length differ");
      if (js.contains("basis")) {
        s.basis = js["basis"].get<std::vector<std::string>>();
      } else {
        for (size_t i = 1; i <= dim; ++i) s.basis.push_back(s.name + std::to_string(i));
      }
      s.c.assign(dim, std::vector<std::map<size_t, Scalar>>(dim));
      for (const auto& br : js.value("brackets", nlohmann::json::array())) {
        if (!br.is_array() || br.size() != 4) throw input_error("bracket entries are [i,j,k,value]");
        size_t i = br[0].get<size_t>(), jj = br[1].get<size_t>(), k = br[2].get<size_t>();
        if (i < 1 || i > dim || jj < 1 || jj > dim || k < 1 || k > dim)
          throw input_error("bracket index out of range in summand '" + s.name + "'");
        Scalar v = parse_bracket_scalar(p.field, br[3]);
        auto& cell = s.c[i - 1][jj - 1];
        if (cell.count(k - 1)) throw input_error("duplicate bracket entry in summand '" + s.name + "'");
        if (!v.is_zero()) cell[k - 1] = v;
      }
      // complete missing antisymmetric counterparts
      for (size_t i = 0; i < dim; ++i)
        for (size_t jj = 0; jj < dim; ++jj)
          for (const auto& [k, v] : s.c[i][jj])
            if (!s.c[jj][i].count(k)) s.c[jj][i][k] = -v;
      p.summands.push_back(std::move(s));
    }
    for (const auto& jg : j.value("free_generators", nlohmann::json::array())) {
      FreeGeneratorSpec g;
      g.name = jg.at("name").get<std::string>();
      g.weight = jg.value("weight", 1);
      p.free_generators.push_back(std::move(g));
    }
    if (j.contains("ideal")) {
      const auto& ji = j["ideal"];
      std::string kind = ji.at("kind").get<std::string>();
      if (kind == "cartesian")
        p.ideal.kind = IdealSpec::Kind::Cartesian;
      else if (kind == "explicit") {
        p.ideal.kind = IdealSpec::Kind::Explicit;
        p.ideal.generators = ji.at("generators").get<std::vector<std::string>>();
      } else
        throw input_error("unknown ideal kind '" + kind + "'");
    }
    p.series = j.value("series", std::vector<int>{});
    p.relators = j.value("relators", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("presentation JSON shape: ") + e.what());
  }
  return p;
}

FreeSumPresentation load_presentation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open presentation file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_presentation_json(ss.str());
}

}  // namespace liefox
