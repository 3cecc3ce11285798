#include "slr/parser.hpp"

#include <fstream>
#include <sstream>

#include "slr/simplify.hpp"
#include "slr/stdlib.hpp"

namespace slr {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Parser::Parser(const Registry& r, std::string text, std::string f)
    : reg(r), src(std::move(text)), file(std::move(f)) {}

void Parser::fail(const std::string& m) {
  throw ParseError(file + ":" + std::to_string(line) + ": " + m);
}

void Parser::ws() {
  while (pos < src.size()) {
    char c = src[pos];
    if (c == '\n') { ++line; ++pos; continue; }
    if (isspace((unsigned char)c)) { ++pos; continue; }
    if (c == '/' && pos + 1 < src.size() && src[pos + 1] == '/') {
      while (pos < src.size() && src[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
}

bool Parser::peek(const std::string& tok) {
  ws();
  if (src.compare(pos, tok.size(), tok) != 0) return false;
  // keyword boundary for identifier-like tokens
  if (isalpha((unsigned char)tok[0])) {
    size_t e = pos + tok.size();
    if (e < src.size() && (isalnum((unsigned char)src[e]) || src[e] == '_')) return false;
  }
  return true;
}

bool Parser::eat(const std::string& tok) {
  if (!peek(tok)) return false;
  pos += tok.size();
  return true;
}

void Parser::expect(const std::string& tok) {
  if (!eat(tok)) fail("expected '" + tok + "' near '" + src.substr(pos, 16) + "'");
}

std::string Parser::ident() {
  ws();
  size_t s = pos;
  if (pos < src.size() && (isalpha((unsigned char)src[pos]) || src[pos] == '_')) {
    ++pos;
    while (pos < src.size() && (isalnum((unsigned char)src[pos]) || src[pos] == '_' ||
                                src[pos] == '\''))
      ++pos;
  }
  if (s == pos) fail("expected identifier");
  return src.substr(s, pos - s);
}

bool Parser::peek_ident() {
  ws();
  return pos < src.size() && (isalpha((unsigned char)src[pos]) || src[pos] == '_');
}

// --- sorts --------------------------------------------------------------------

Sort Parser::sort() {
  ws();
  if (eat("(")) {
    std::vector<Sort> comps = {sort()};
    while (eat(",")) comps.push_back(sort());
    expect(")");
    Sort s = comps.size() == 1 ? comps[0] : tuple_sort(comps);
    if (eat("+")) return sum_sort(s, sort());
    if (eat("->")) return fun_sort(s, sort());
    return s;
  }
  std::string n = ident();
  Sort s;
  if (n == "int") s = int_sort();
  else if (n == "bool") s = bool_sort();
  else if (n == "rat") s = rat_sort();
  else if (n == "unit") s = unit_sort();
  else if (n == "addr" || n == "path") s = list_sort(abstract_sort("key"));
  else if (n == "interval") s = scalar_sort("interval");
  else if (n == "list") {
    expect("<");
    Sort e = sort();
    expect(">");
    s = list_sort(e);
  } else if (n == "set") {
    expect("<");
    Sort e = sort();
    expect(">");
    s = set_sort(e);
  } else {
    s = abstract_sort(n);
  }
  if (eat("+")) return sum_sort(s, sort());
  if (eat("->")) return fun_sort(s, sort());
  return s;
}

// --- terms --------------------------------------------------------------------

Term Parser::var_ref(const std::string& name) {
  auto it = scope.find(name);
  if (it != scope.end()) return it->second;
  auto st = var_sorts.find(name);
  return mk_fvar(name, st != var_sorts.end() ? st->second : any_sort());
}

Term Parser::term() { return t_or(); }

Term Parser::t_or() {
  Term t = t_and();
  while (eat("||")) t = mk_or(t, t_and());
  return t;
}

Term Parser::t_and() {
  Term t = t_cmp();
  while (eat("&&")) t = mk_and(t, t_cmp());
  return t;
}

Term Parser::t_cmp() {
  Term t = t_add();
  ws();
  if (eat("==>")) return mk_imp(t, t_cmp());
  if (eat("=")) return mk_con("eq", {t, t_add()}, bool_sort());
  if (eat("!=")) return mk_not(mk_con("eq", {t, t_add()}, bool_sort()));
  if (eat("<=")) return mk_con("le", {t, t_add()}, bool_sort());
  if (eat("<")) return mk_con("lt", {t, t_add()}, bool_sort());
  if (eat("in")) return mk_mem(t, t_add());
  if (eat("subset")) return mk_con("subset", {t, t_add()}, bool_sort());
  return t;
}

Term Parser::t_add() {
  Term t = t_mul();
  while (true) {
    ws();
    if (eat("++")) { t = mk_append(t, t_mul()); continue; }
    if (peek("+") && !peek("+)")) { eat("+"); t = mk_con("add", {t, t_mul()}, t->sort); continue; }
    if (eat("-")) { t = mk_con("sub", {t, t_mul()}, t->sort); continue; }
    break;
  }
  return t;
}

Term Parser::t_mul() {
  Term t = t_unary();
  while (true) {
    ws();
    if (peek("**")) break;  // assertion star, never a term product
    if (eat("*")) { t = mk_con("mul", {t, t_unary()}, t->sort); continue; }
    break;
  }
  return t;
}

Term Parser::t_unary() {
  ws();
  if (eat("!")) return mk_not(t_unary());
  return t_atom();
}

Term Parser::t_atom() {
  ws();
  if (pos >= src.size()) fail("unexpected end of input in term");
  char c = src[pos];
  if (c == '(') {
    ++pos;
    ws();
    if (eat(")")) return mk_unit();
    std::vector<Term> comps = {term()};
    while (eat(",")) comps.push_back(term());
    expect(")");
    return comps.size() == 1 ? comps[0] : mk_tuple(comps);
  }
  if (c == '[') {
    ++pos;
    std::vector<Term> es;
    if (!peek("]")) {
      es.push_back(term());
      while (eat(",")) es.push_back(term());
    }
    expect("]");
    Sort e = es.empty() ? any_sort() : es[0]->sort;
    return mk_list(std::move(es), e);
  }
  if (c == '{') {
    ++pos;
    std::vector<Term> es;
    if (!peek("}")) {
      es.push_back(term());
      while (eat(",")) es.push_back(term());
    }
    expect("}");
    Sort e = es.empty() ? int_sort() : es[0]->sort;
    return mk_setlit(std::move(es), e);
  }
  if (c == '\\') {
    ++pos;
    std::string v = ident();
    expect(":");
    Sort s = sort();
    expect(".");
    Term saved;
    bool had = scope.count(v);
    if (had) saved = scope[v];
    scope[v] = mk_fvar(v, s);
    Term body = term();
    if (had) scope[v] = saved;
    else scope.erase(v);
    return lam_of(v, s, body);
  }
  if (c == '\'') {
    ++pos;
    return mk_sym(ident());
  }
  if (c == '?') {
    ++pos;
    if (eat("e")) {
      size_t s0 = pos;
      while (pos < src.size() && isdigit((unsigned char)src[pos])) ++pos;
      return mk_evar(std::stoi(src.substr(s0, pos - s0)), any_sort());
    }
    fail("expected evar ?eN");
  }
  if (isdigit(c)) {
    size_t s0 = pos;
    while (pos < src.size() && isdigit((unsigned char)src[pos])) ++pos;
    long long n = std::stoll(src.substr(s0, pos - s0));
    if (pos < src.size() && src[pos] == '/') {
      ++pos;
      size_t s1 = pos;
      while (pos < src.size() && isdigit((unsigned char)src[pos])) ++pos;
      return mk_rat(n, std::stoll(src.substr(s1, pos - s1)));
    }
    return mk_int(n);
  }
  if (eat("true")) return mk_bool(true);
  if (eat("false")) return mk_bool(false);
  if (eat("EX")) {
    std::string v = ident();
    expect(":");
    Sort s = sort();
    expect(".");
    return exists_of(v, s, term());
  }
  if (eat("ALL")) {
    std::string v = ident();
    expect(":");
    Sort s = sort();
    expect(".");
    return forall_of(v, s, term());
  }
  std::string n = ident();
  ws();
  if (pos < src.size() && src[pos] == '(') {
    // builtin applications
    ++pos;
    std::vector<Term> args;
    if (!peek(")")) {
      if (n == "addr") {
        // addr(block, field, ...) builds a key path
        args.push_back(term());
        std::vector<Term> keys;
        Term first = args[0];
        keys.push_back(first->sort->kind == SortKind::Int
                           ? mk_con("ik", {first}, abstract_sort("key"))
                           : first);
        while (eat(",")) {
          ws();
          if (peek_ident()) keys.push_back(mk_sym(ident()));
          else {
            Term t = term();
            keys.push_back(t->sort->kind == SortKind::Int ? mk_con("ik", {t}, abstract_sort("key"))
                                                          : t);
          }
        }
        expect(")");
        return mk_list(std::move(keys), abstract_sort("key"));
      }
      args.push_back(term());
      while (eat(",")) args.push_back(term());
    }
    expect(")");
    auto a = [&](size_t i) { return args.at(i); };
    if (n == "pi1") return mk_proj(0, a(0));
    if (n == "pi2") return mk_proj(1, a(0));
    if (n == "pi3") return mk_proj(2, a(0));
    if (n == "len") return mk_len(a(0));
    if (n == "map") return mk_map(a(0), a(1));
    if (n == "setof") return mk_setof(a(0));
    if (n == "zip") return mk_zip(a(0), a(1));
    if (n == "unzip") return mk_unzip(a(0));
    if (n == "append") return mk_append(a(0), a(1));
    if (n == "slice") return mk_lslice(a(0), a(1), a(2));
    if (n == "idx") return mk_idx(a(0), a(1));
    if (n == "replicate") return mk_replicate(a(0), a(1));
    if (n == "cons") return mk_cons(a(0), a(1));
    if (n == "iv") return mk_ivl(a(0), a(1));
    if (n == "arrow") return mk_con("arrow", {a(0), a(1), a(2)}, scalar_sort("larrow"));
    if (n == "ik") return mk_con("ik", {a(0)}, abstract_sort("key"));
    if (n == "ki") return mk_con("ki", {a(0)}, int_sort());
    if (n == "union") return mk_union(a(0), a(1));
    if (n == "setminus") return mk_setminus(a(0), a(1));
    if (n == "inter") return mk_inter(a(0), a(1));
    if (n == "singleton") return mk_singleton(a(0));
    if (n == "mapget") return mk_mapget(a(0), a(1));
    if (n == "the") return mk_the_elem(a(0));
    if (n == "inj1") return mk_inj1(a(0), sum_sort(a(0)->sort, any_sort()));
    if (n == "inj2") return mk_inj2(a(0), sum_sort(any_sort(), a(0)->sort));
    if (n == "image") return mk_image(a(0), a(1));
    if (n == "bind") return mk_bindset(a(0), a(1));
    if (n == "suffixes") return mk_con("suffixes", {a(0)}, set_sort(a(0)->sort));
    if (n == "truthy") return mk_con("truthy", {a(0)}, bool_sort());
    if (n == "l2s") {
      Sort es = a(0)->sort->kind == SortKind::List ? a(0)->sort->args[0] : any_sort();
      return mk_con("l2s", {a(0)}, sum_sort(unit_sort(), pair_sort(es, a(0)->sort)));
    }
    // application of a scoped function-valued variable
    Term f = var_ref(n);
    Term app = f;
    for (auto& x : args) app = mk_app(app, x);
    return app;
  }
  return var_ref(n);
}

// --- predicates ---------------------------------------------------------------

Pred Parser::pred() {
  Pred p = pred_atom_like();
  ws();
  while (true) {
    if (eat("**")) { p = pred_star(p, pred_atom_like()); continue; }
    if (eat("+")) { p = pred_sum(p, pred_atom_like()); continue; }
    break;
  }
  return p;
}

Pred Parser::pred_atom_like() {
  ws();
  if (eat("(")) {
    Pred p = pred();
    expect(")");
    return p;
  }
  if (eat("{")) {
    // record sugar {a: P, b.c: Q}
    std::vector<Pred> fields;
    do {
      std::string f = ident();
      std::vector<Term> keys = {mk_sym(f)};
      while (eat(".")) keys.push_back(mk_sym(ident()));
      expect(":");
      Pred inner = pred();
      fields.push_back(reg.make_op("Path", {mk_list(keys, abstract_sort("key"))}, {inner}));
    } while (eat(","));
    expect("}");
    Pred p = fields[0];
    for (size_t i = 1; i < fields.size(); ++i) p = pred_star(p, fields[i]);
    return p;
  }
  std::string n = ident();
  if (n == "Emp") return pred_emp();
  if (n == "Id") return pred_id(world_sort());
  std::vector<Term> scalars;
  if (eat("[")) {
    if (!peek("]")) {
      scalars.push_back(term());
      while (eat(",")) scalars.push_back(term());
    }
    expect("]");
  }
  std::vector<Pred> args;
  if (eat("(")) {
    if (!peek(")")) {
      args.push_back(pred());
      while (eat(",")) args.push_back(pred());
    }
    expect(")");
  }
  const PredicateDef* d = reg.find_pred(n);
  if (d && (d->sig.n_preds > 0 || !d->sig.scalar_sorts.empty())) {
    // coerce scalar sorts where the parser defaulted to any
    for (size_t i = 0; i < scalars.size() && i < d->sig.scalar_sorts.size(); ++i) {
      if (is_any(scalars[i]->sort) && scalars[i]->kind == TermKind::FVar)
        scalars[i] = mk_fvar(scalars[i]->name, d->sig.scalar_sorts[i]);
    }
    return reg.make_op(n, scalars, args);
  }
  if (!scalars.empty() || !args.empty()) fail("unknown predicate operator " + n);
  Sort abst = d && d->sig.abst_sort ? d->sig.abst_sort({}, {}) : any_sort();
  return slr::pred_atom(n, abst);
}

// --- assertions -----------------------------------------------------------------

Assertion Parser::assertion() {
  Assertion a = a_imp_level();
  while (eat("\\/")) a = a_or(a, a_imp_level());
  return a;
}

Assertion Parser::a_imp_level() {
  Assertion a = a_star_level();
  ws();
  if (eat("-*")) return a_wand(a, a_imp_level());
  if (eat("->")) return a_implies(a, a_imp_level());
  return a;
}

Assertion Parser::a_star_level() {
  Assertion a = a_atom();
  while (true) {
    ws();
    if (eat("**")) { a = a_star(a, a_atom()); continue; }
    if (eat("/\\")) { a = a_and(a, a_atom()); continue; }
    break;
  }
  return a;
}

Assertion Parser::a_atom() {
  ws();
  if (eat("TOP")) return a_top();
  if (eat("BOT")) return a_bot();
  if (eat("emp")) return a_emp();
  if (eat("pure")) {
    expect("(");
    Term t = term();
    expect(")");
    return a_pure(t);
  }
  if (eat("EX")) {
    std::string v = ident();
    expect(":");
    Sort s = sort();
    expect(".");
    bool had = var_sorts.count(v);
    Sort saved = had ? var_sorts[v] : Sort{};
    var_sorts[v] = s;
    Assertion body = assertion();
    if (had) var_sorts[v] = saved;
    else var_sorts.erase(v);
    return a_exists(v, s, body);
  }
  if (eat("ALL")) {
    std::string v = ident();
    expect(":");
    Sort s = sort();
    expect(".");
    bool had = var_sorts.count(v);
    Sort saved = had ? var_sorts[v] : Sort{};
    var_sorts[v] = s;
    Assertion body = assertion();
    if (had) var_sorts[v] = saved;
    else var_sorts.erase(v);
    return a_forall(v, s, body);
  }
  if (eat("(")) {
    Assertion a = assertion();
    expect(")");
    return a;
  }
  // term :: pred, or term |= assertion
  Term t = term();
  ws();
  if (eat("::")) return a_pred(pred(), t);
  if (eat("|=")) return a_satisfies(t, a_atom());
  // bare boolean terms read as pure facts
  if (sort_eq(t->sort, bool_sort())) return a_pure(t);
  fail("expected '::' after term in assertion");
}

// --- top-level ------------------------------------------------------------------

Term Parser::parse_term_all() {
  Term t = term();
  ws();
  if (pos != src.size()) fail("trailing input after term");
  return t;
}

Assertion Parser::parse_assertion_all() {
  Assertion a = assertion();
  ws();
  if (pos != src.size()) fail("trailing input after assertion");
  return a;
}

Pred Parser::parse_pred_all() {
  Pred p = pred();
  ws();
  if (pos != src.size()) fail("trailing input after predicate");
  return p;
}

InputFile Parser::parse_file() {
  InputFile out;
  ws();
  while (pos < src.size()) {
    if (eat("ghost")) {
      std::string n = ident();
      expect(":");
      var_sorts[n] = sort();
      expect(";");
    } else if (eat("atom")) {
      AtomDecl a;
      a.name = ident();
      expect(":");
      a.abst = sort();
      expect(";");
      var_sorts[a.name];  // no-op, names stay visible
      out.atoms.push_back(a);
    } else if (eat("lemma")) {
      LemmaDecl l;
      l.loc = file + ":" + std::to_string(line);
      l.name = ident();
      expect(":");
      l.hyp = assertion();
      expect("|-");
      l.goal = assertion();
      out.lemmas.push_back(std::move(l));
    } else if (eat("property")) {
      PropertyDecl pd;
      pd.loc = file + ":" + std::to_string(line);
      std::string kind = ident();
      expect("(");
      pd.instance.op = ident();
      if (eat(",")) pd.instance.op2 = ident();
      expect(")");
      static const std::map<std::string, PropKind> kinds = {
          {"Functor", PropKind::TF}, {"SepHom", PropKind::SH},  {"Assoc", PropKind::SA},
          {"Dist", PropKind::SD},    {"SUnit", PropKind::S1},   {"SUnitG", PropKind::S1p},
          {"SZero", PropKind::S0},   {"IdEleI", PropKind::IE_I}, {"IdEleE", PropKind::IE_E},
          {"Trans", PropKind::Tr}};
      auto k = kinds.find(kind);
      if (k == kinds.end()) fail("unknown property kind " + kind);
      pd.instance.kind = k->second;
      static const std::map<std::string, std::string> witness_names = {
          {"map", "m"},   {"dom", "d"},    {"split", "s"},  {"merge", "z"},   {"cat", "z"},
          {"comp", "g"},  {"decomp", "h"}, {"unwrap", "g"}, {"wrap", "h"},    {"leq", "leq"},
          {"to", "f"},    {"from", "g"},   {"pmap", "pmap"}, {"pmapinv", "pmap_inv"},
          {"isub", "isub"}};
      expect("{");
      if (!peek("}")) {
        do {
          std::string wn = ident();
          expect("=");
          Term wt = term();
          auto wi = witness_names.find(wn);
          pd.instance.w[wi != witness_names.end() ? wi->second : wn] = simplify(wt);
        } while (eat(","));
      }
      expect("}");
      while (true) {
        if (eat("check")) pd.check = true;
        else if (eat("derive-recursive")) { pd.derive = true; pd.recursive = true; }
        else if (eat("derive")) pd.derive = true;
        else break;
      }
      out.properties.push_back(std::move(pd));
    } else if (eat("extern")) {
      expect("procedure");
      out.procedures.push_back(procedure(true));
    } else if (eat("procedure")) {
      out.procedures.push_back(procedure(false));
    } else {
      fail("expected a declaration near '" + src.substr(pos, 24) + "'");
    }
    ws();
  }
  return out;
}

// --- procedures -------------------------------------------------------------------

ProcSpec Parser::procedure(bool is_extern) {
  ProcSpec p;
  p.name = ident();
  expect("(");
  std::vector<std::pair<std::string, Sort>> formals;
  if (!peek(")")) {
    do {
      std::string n = ident();
      expect(":");
      formals.emplace_back(n, sort());
    } while (eat(","));
  }
  expect(")");

  std::vector<Sort> fs;
  for (auto& [n, s] : formals) fs.push_back(s);
  p.arg_sort = formals.empty() ? unit_sort() : formals.size() == 1 ? fs[0] : tuple_sort(fs);
  Term argsv = mk_fvar(p.arg_name, p.arg_sort);
  auto saved_scope = scope;
  for (size_t i = 0; i < formals.size(); ++i)
    scope[formals[i].first] = formals.size() == 1 ? argsv : mk_proj((int)i, argsv);

  expect("requires");
  p.pre = assertion();
  expect("ensures");
  bool had_ret = var_sorts.count("ret");
  var_sorts["ret"] = any_sort();
  p.post = assertion();
  if (!had_ret) var_sorts.erase("ret");
  p.ret_sort = any_sort();

  if (!is_extern) {
    std::vector<std::pair<std::string, Term>> locals;
    Term env_shape = mk_fvar("$env", any_sort());
    // inside the body, formals are projections of the *current* environment
    p.body = block(locals, env_shape);
  }
  scope = saved_scope;
  return p;
}

Prog Parser::block(std::vector<std::pair<std::string, Term>>& locals, Term& env_shape) {
  (void)locals;
  (void)env_shape;
  std::map<std::string, int> births;  // let-bound name -> birth depth
  int depth = 0;
  return block_at(births, depth);
}

// Environment layout: formals live in the base tuple; every executed
// statement extends the environment with its result, so a name born when k
// statements had run is reached by pi2 . pi1^(depth-1-k).
Prog Parser::block_at(std::map<std::string, int>& births0, int depth0) {
  expect("{");
  std::map<std::string, int> births = births0;
  int depth = depth0;

  auto base = [&]() {
    Term e = mk_fvar("$env", any_sort());
    for (int i = 0; i < depth; ++i) e = mk_proj(0, e);
    return e;
  };
  auto accessor = [&](const std::string& n) -> std::optional<Term> {
    auto it = births.find(n);
    if (it == births.end()) return std::nullopt;
    Term e = mk_fvar("$env", any_sort());
    for (int i = 0; i < depth - 1 - it->second; ++i) e = mk_proj(0, e);
    return mk_proj(1, e);
  };
  auto term_here = [&]() {
    Term t = term();
    // let-bound locals first (they shadow formals), then formals over args
    std::set<std::string> fv;
    collect_fvars(t, fv);
    for (auto& n : fv) {
      auto acc = accessor(n);
      if (acc) t = subst_fvar(t, n, *acc);
    }
    t = subst_fvar(t, "args", base());
    return t;
  };

  std::vector<Prog> stmts;
  auto push = [&](Prog s) {
    stmts.push_back(std::move(s));
    ++depth;
  };

  while (!peek("}")) {
    std::string loc = file + ":" + std::to_string(line);
    if (eat("let")) {
      std::string n = ident();
      expect("=");
      ws();
      if (eat("load")) {
        expect("(");
        Term a = term_here();
        expect(")");
        expect(";");
        push(prog_op("load", a, {}, loc));
      } else if (eat("alloc")) {
        expect("(");
        expect(")");
        expect(";");
        push(prog_op("alloc", mk_unit(), {}, loc));
      } else if (eat("call")) {
        std::string callee = ident();
        expect("(");
        Term a = peek(")") ? mk_unit() : term_here();
        while (eat(",")) a = mk_pair(a, term_here());
        expect(")");
        expect(";");
        push(prog_call(callee, a, loc));
      } else {
        Term a = term_here();
        expect(";");
        push(prog_op("pure", a, {}, loc));
      }
      births[n] = depth - 1;
    } else if (eat("store")) {
      expect("(");
      Term a = term_here();
      expect(",");
      Term v = term_here();
      expect(")");
      expect(";");
      push(prog_op("store", mk_pair(a, v), {}, loc));
    } else if (eat("free")) {
      expect("(");
      Term a = term_here();
      expect(")");
      expect(";");
      push(prog_op("free", a, {}, loc));
    } else if (eat("call")) {
      std::string callee = ident();
      expect("(");
      Term a = peek(")") ? mk_unit() : term_here();
      while (eat(",")) a = mk_pair(a, term_here());
      expect(")");
      expect(";");
      push(prog_call(callee, a, loc));
    } else if (eat("if")) {
      expect("(");
      Term c = term_here();
      expect(")");
      Prog tb = block_at(births, depth);
      expect("else");
      Prog fb = block_at(births, depth);
      push(prog_if(c, tb, fb, loc));
    } else if (eat("while")) {
      expect("(");
      // guard and invariant speak about the loop state through $env; names
      // visible here keep their entry accessors
      Term c = term_here();
      expect(")");
      expect("invariant");
      Assertion inv;
      {
        // assertion over the entry-shaped environment
        auto saved = scope;
        for (auto& [n, k] : births) {
          Term e = mk_fvar("$env", any_sort());
          for (int i = 0; i < depth - 1 - k; ++i) e = mk_proj(0, e);
          scope[n] = mk_proj(1, e);
        }
        Term b2 = mk_fvar("$env", any_sort());
        for (int i = 0; i < depth; ++i) b2 = mk_proj(0, b2);
        // formals re-rooted at the loop-state base
        for (auto& [n, t] : saved)
          if (scope.find(n) == scope.end() || !births.count(n))
            scope[n] = subst_fvar(t, "args", b2);
        inv = assertion();
        scope = saved;
      }
      Prog body = block_at(births, depth);
      push(prog_while(c, inv, body, loc));
    } else if (eat("next")) {
      Term t = term_here();
      expect(";");
      push(prog_op("pure", t, {}, loc));
      break;
    } else if (eat("skip")) {
      expect(";");
      push(prog_op("skip", mk_unit(), {}, loc));
    } else if (eat("abort")) {
      expect(";");
      push(prog_op("abort", mk_unit(), {}, loc));
    } else if (eat("return")) {
      Term t = term_here();
      expect(";");
      push(prog_op("pure", t, {}, loc));
      break;
    } else {
      fail("unknown statement near '" + src.substr(pos, 16) + "'");
    }
  }
  expect("}");
  if (stmts.empty()) return prog_op("skip", mk_unit());
  Prog out = stmts[0];
  for (size_t i = 1; i < stmts.size(); ++i) out = prog_seq(out, stmts[i]);
  return out;
}

}  // namespace slr
