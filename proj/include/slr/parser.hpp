#pragma once

#include "slr/wp.hpp"

namespace slr {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& m) : std::runtime_error(m) {}
};

struct LemmaDecl {
  std::string name;
  Assertion hyp;
  Assertion goal;
  std::string loc;
};

struct PropertyDecl {
  PropertyInstance instance;
  bool check = false;
  bool derive = false;
  bool recursive = false;
  std::string loc;
};

struct AtomDecl {
  std::string name;
  Sort abst;
};

struct InputFile {
  std::vector<AtomDecl> atoms;
  std::vector<PropertyDecl> properties;
  std::vector<LemmaDecl> lemmas;
  std::vector<ProcSpec> procedures;  // body null for extern specs
};

// Surface syntax (used by the CLI and goldens):
//   terms       x, 0, 1/2, true, (), (a, b), [1, 2], {1, 2}, a + b, a = b,
//               pi1(t), len(l), map(f, l), addr(1, a, b), iv(0, N), \x:T. t
//   assertions  x :: P, A ** B, A /\ pure(t), A -* B, A -> B, EX a:T. A,
//               ALL a:T. A, t |= A, TOP, BOT, emp
//   predicates  Ref[addr(1)](IntV), Slice[iv(0, N)](P), {a: P, b: Q}, P + Q,
//               n (+) P permission sugar via perm[n](P)
class Parser {
 public:
  Parser(const Registry& reg, std::string text, std::string file = "<input>");

  Term parse_term_all();
  Assertion parse_assertion_all();
  Pred parse_pred_all();
  InputFile parse_file();

  // local scope: name -> replacement term (formals as projections)
  std::map<std::string, Term> scope;
  std::map<std::string, Sort> var_sorts;  // free-variable sort annotations

 private:
  const Registry& reg;
  std::string src, file;
  size_t pos = 0;
  int line = 1;

  [[noreturn]] void fail(const std::string& m);
  void ws();
  bool eat(const std::string& tok);
  bool peek(const std::string& tok);
  void expect(const std::string& tok);
  std::string ident();
  bool peek_ident();

  Sort sort();
  Term term();      // full precedence chain
  Term t_or();
  Term t_and();
  Term t_cmp();
  Term t_add();
  Term t_mul();
  Term t_unary();
  Term t_atom();
  Term var_ref(const std::string& name);

  Pred pred();
  Pred pred_atom_like();
  Assertion assertion();
  Assertion a_imp_level();
  Assertion a_star_level();
  Assertion a_atom();

  ProcSpec procedure(bool is_extern);
  Prog block(std::vector<std::pair<std::string, Term>>& locals, Term& env_shape);
  Prog block_at(std::map<std::string, int>& births, int depth);
};

std::string read_file(const std::string& path);

}  // namespace slr
