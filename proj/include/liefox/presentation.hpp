#pragma once
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "liefox/field.hpp"

namespace liefox {

// Lie expression AST. Grammar:
//   expr := ['-'] term (('+'|'-') term)*
//   term := (int ['/' int] '*')? atom
//   atom := NAME | '[' expr ',' expr ']'
class LieExpr {
 public:
  enum class Kind { Gen, Bracket, Scale, Sum };

  static LieExpr gen(std::string name);
  static LieExpr bracket(LieExpr a, LieExpr b);
  static LieExpr scale(Scalar c, LieExpr e);
  static LieExpr sum(std::vector<LieExpr> terms);

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const Scalar& coeff() const { return node_->coeff; }
  const LieExpr& left() const { return *node_->a; }
  const LieExpr& right() const { return *node_->b; }
  const std::vector<LieExpr>& terms() const { return node_->terms; }

  bool operator==(const LieExpr& o) const;
  std::string str() const;

 private:
  struct Node {
    Kind kind;
    std::string name;                  // Gen
    Scalar coeff;                      // Scale
    std::shared_ptr<const LieExpr> a;  // Bracket left / Scale child
    std::shared_ptr<const LieExpr> b;  // Bracket right
    std::vector<LieExpr> terms;        // Sum
  };
  std::shared_ptr<const Node> node_;
};

struct ExprParseError : input_error {
  size_t offset;
  ExprParseError(size_t off, const std::string& msg)
      : input_error("expression error at offset " + std::to_string(off) + ": " + msg),
        offset(off) {}
};

LieExpr parse_lie_expr(const std::string& text, const FieldSpec& field);

// One Lie-algebra summand given by structure constants over a graded basis.
struct SummandSpec {
  std::string name;
  std::vector<std::string> basis;    // basis vector names
  std::vector<int> weights;          // positive, one per basis vector
  // c[i][j] = bracket [x_i, x_j] as a row over basis indices; full table,
  // both orders present after loading.
  std::vector<std::vector<std::map<size_t, Scalar>>> c;
};

struct FreeGeneratorSpec {
  std::string name;
  int weight = 1;
};

struct IdealSpec {
  enum class Kind { None, Cartesian, Explicit };
  Kind kind = Kind::None;
  std::vector<std::string> generators;  // expressions, Kind::Explicit
};

struct FreeSumPresentation {
  FieldSpec field;
  std::vector<SummandSpec> summands;
  std::vector<FreeGeneratorSpec> free_generators;
  int cap = 0;
  IdealSpec ideal;
  std::vector<int> series;              // optional block signature
  std::vector<std::string> relators;    // optional expressions
};

struct Diagnostic {
  std::string where;
  std::string message;
};

struct ValidationReport {
  std::vector<Diagnostic> problems;
  bool ok() const { return problems.empty(); }
};

// Total validation: antisymmetry, Jacobi, grading compatibility, weight
// positivity, name uniqueness, cap sanity. Returns diagnostics, never throws
// on semantic problems.
ValidationReport validate_presentation(const FreeSumPresentation& p);

FreeSumPresentation load_presentation_json(const std::string& json_text);
FreeSumPresentation load_presentation_file(const std::string& path);

}  // namespace liefox
