#include "slr/model.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace slr {

// --- structural heap algebra ---------------------------------------------------

Value heap_cell(const std::vector<Value>& path, const Value& perm, const Value& val) {
  return v_set({v_pair(v_list(path), v_pair(perm, val))});
}

std::optional<Value> heap_star(const Value& a, const Value& b, const Value& cap) {
  bool ae = a.k == VKind::Set && a.elems.empty();
  bool be = b.k == VKind::Set && b.elems.empty();
  if (ae) return b;
  if (be) return a;
  if (a.k != VKind::Set || b.k != VKind::Set) return std::nullopt;  // value-worlds only join unit
  std::vector<Value> cells = a.elems;
  for (auto& cb : b.elems) {
    bool merged = false;
    for (auto& ca : cells) {
      if (value_eq(ca.elems[0], cb.elems[0])) {
        // same address: values must agree, permissions add within the cap
        if (!value_eq(ca.elems[1].elems[1], cb.elems[1].elems[1])) return std::nullopt;
        Value p = rat_add(ca.elems[1].elems[0], cb.elems[1].elems[0]);
        if (!rat_le(p, cap)) return std::nullopt;
        ca = v_pair(ca.elems[0], v_pair(p, ca.elems[1].elems[1]));
        merged = true;
        break;
      }
    }
    if (!merged) cells.push_back(cb);
  }
  return v_set(std::move(cells));
}

Value heap_prefix(const Value& key, const Value& h) {
  std::vector<Value> cells;
  for (auto& c : h.elems) {
    std::vector<Value> path = {key};
    path.insert(path.end(), c.elems[0].elems.begin(), c.elems[0].elems.end());
    cells.push_back(v_pair(v_list(std::move(path)), c.elems[1]));
  }
  return v_set(std::move(cells));
}

std::optional<Value> heap_strip(const Value& key, const Value& h) {
  if (h.k != VKind::Set) return std::nullopt;
  std::vector<Value> cells;
  for (auto& c : h.elems) {
    const auto& path = c.elems[0].elems;
    if (path.empty() || !value_eq(path[0], key)) return std::nullopt;
    cells.push_back(v_pair(v_list({path.begin() + 1, path.end()}), c.elems[1]));
  }
  return v_set(std::move(cells));
}

std::optional<Value> heap_scale(const Value& factor, const Value& h) {
  if (h.k != VKind::Set) return std::nullopt;
  if (factor.num <= 0) return std::nullopt;
  std::vector<Value> cells;
  for (auto& c : h.elems)
    cells.push_back(v_pair(c.elems[0], v_pair(rat_mul(factor, c.elems[1].elems[0]), c.elems[1].elems[1])));
  return v_set(std::move(cells));
}

// --- model ----------------------------------------------------------------------

std::optional<Value> FiniteModel::star(const Value& a, const Value& b) const {
  if (use_table) {
    int i = world_index(a), j = world_index(b);
    if (i < 0 || j < 0) return std::nullopt;
    auto it = table.find({i, j});
    if (it == table.end()) return std::nullopt;
    return carrier[it->second];
  }
  return heap_star(a, b, perm_cap);
}

int FiniteModel::world_index(const Value& w) const {
  for (size_t i = 0; i < carrier.size(); ++i)
    if (value_eq(carrier[i], w)) return (int)i;
  return -1;
}

std::vector<std::pair<Value, Value>> FiniteModel::splits_naive(const Value& w) const {
  std::vector<std::pair<Value, Value>> out;
  for (auto& a : carrier)
    for (auto& b : carrier) {
      auto s = star(a, b);
      if (s && value_eq(*s, w)) out.emplace_back(a, b);
    }
  if (w.k != VKind::Set) {  // value-worlds split only against the unit
    out.emplace_back(unit, w);
    out.emplace_back(w, unit);
  }
  return out;
}

const std::vector<std::pair<Value, Value>>& FiniteModel::splits(const Value& w) const {
  auto it = split_memo.find(w);
  if (it != split_memo.end()) return it->second;
  std::vector<std::pair<Value, Value>> out;
  if (use_table) {
    out = splits_naive(w);
  } else if (w.k != VKind::Set) {
    out.emplace_back(unit, w);
    out.emplace_back(w, unit);
  } else {
    // assign every cell to the left, the right, or split its permission
    std::vector<std::vector<std::pair<std::optional<Value>, std::optional<Value>>>> choices;
    for (auto& c : w.elems) {
      std::vector<std::pair<std::optional<Value>, std::optional<Value>>> opts;
      opts.push_back({c, std::nullopt});
      opts.push_back({std::nullopt, c});
      const Value& perm = c.elems[1].elems[0];
      for (auto& p1 : perms)
        for (auto& p2 : perms)
          if (value_eq(rat_add(p1, p2), perm)) {
            Value l = v_pair(c.elems[0], v_pair(p1, c.elems[1].elems[1]));
            Value r = v_pair(c.elems[0], v_pair(p2, c.elems[1].elems[1]));
            opts.push_back({l, r});
          }
      choices.push_back(std::move(opts));
    }
    std::vector<Value> left, right;
    std::function<void(size_t)> go = [&](size_t i) {
      if (i == choices.size()) {
        out.emplace_back(v_set(left), v_set(right));
        return;
      }
      for (auto& [l, r] : choices[i]) {
        size_t ln = left.size(), rn = right.size();
        if (l) left.push_back(*l);
        if (r) right.push_back(*r);
        go(i + 1);
        left.resize(ln);
        right.resize(rn);
      }
    };
    go(0);
  }
  return split_memo.emplace(w, std::move(out)).first->second;
}

std::vector<Value> FiniteModel::universe(const Sort& s) const {
  std::vector<Value> out;
  auto cap = [&](std::vector<Value> v) {
    if ((int)v.size() > universe_cap) v.resize(universe_cap);
    return v;
  };
  switch (s->kind) {
    case SortKind::Bool: return {v_bool(false), v_bool(true)};
    case SortKind::Unit: return {v_unit()};
    case SortKind::Int:
      for (auto i : ints) out.push_back(v_int(i));
      return out;
    case SortKind::Rat: {
      out.push_back(v_rat(0, 1));
      for (auto& p : perms) out.push_back(p);
      out.push_back(v_rat(1, 1));
      return cap([&] {
        std::vector<Value> v = out;
        std::sort(v.begin(), v.end(), ValueLess{});
        v.erase(std::unique(v.begin(), v.end(), value_eq), v.end());
        return v;
      }());
    }
    case SortKind::Tuple: {
      std::vector<std::vector<Value>> comps;
      for (auto& cs : s->args) comps.push_back(universe(cs));
      std::vector<Value> cur;
      std::function<void(size_t)> go = [&](size_t i) {
        if ((int)out.size() >= universe_cap) return;
        if (i == comps.size()) {
          out.push_back(v_tuple(cur));
          return;
        }
        for (auto& v : comps[i]) {
          cur.push_back(v);
          go(i + 1);
          cur.pop_back();
        }
      };
      go(0);
      return out;
    }
    case SortKind::List: {
      std::vector<Value> elems = universe(s->args[0]);
      std::vector<Value> cur;
      std::function<void(int)> go = [&](int depth) {
        if ((int)out.size() >= universe_cap) return;
        out.push_back(v_list(cur));
        if (depth == max_list_len) return;
        for (auto& e : elems) {
          cur.push_back(e);
          go(depth + 1);
          cur.pop_back();
        }
      };
      go(0);
      return out;
    }
    case SortKind::Set: {
      std::vector<Value> elems = universe(s->args[0]);
      if ((int)elems.size() > 8) elems.resize(8);
      std::vector<Value> cur;
      std::function<void(size_t, int)> go = [&](size_t i, int card) {
        if ((int)out.size() >= universe_cap) return;
        if (i == elems.size()) {
          out.push_back(v_set(cur));
          return;
        }
        go(i + 1, card);
        if (card < max_set_card) {
          cur.push_back(elems[i]);
          go(i + 1, card + 1);
          cur.pop_back();
        }
      };
      go(0, 0);
      std::sort(out.begin(), out.end(), ValueLess{});
      out.erase(std::unique(out.begin(), out.end(), value_eq), out.end());
      return out;
    }
    case SortKind::Sum: {
      for (auto& v : universe(s->args[0])) out.push_back(v_inj1(v));
      for (auto& v : universe(s->args[1])) out.push_back(v_inj2(v));
      return cap(std::move(out));
    }
    case SortKind::Fun: {
      std::vector<Value> dom = universe(s->args[0]);
      std::vector<Value> cod = universe(s->args[1]);
      if (dom.empty() || cod.empty()) return out;
      double total = 1;
      for (size_t i = 0; i < dom.size(); ++i) total *= (double)cod.size();
      if (total <= (double)fun_space_cap) {
        std::vector<size_t> pick(dom.size(), 0);
        while (true) {
          std::vector<std::pair<Value, Value>> g;
          for (size_t i = 0; i < dom.size(); ++i) g.emplace_back(dom[i], cod[pick[i]]);
          out.push_back(v_fun(std::move(g)));
          size_t i = 0;
          for (; i < pick.size(); ++i) {
            if (++pick[i] < cod.size()) break;
            pick[i] = 0;
          }
          if (i == pick.size()) break;
        }
      } else {
        // deterministic sample: constants, identity-ish, rotations
        for (auto& c : cod) {
          std::vector<std::pair<Value, Value>> g;
          for (auto& d : dom) g.emplace_back(d, c);
          out.push_back(v_fun(std::move(g)));
        }
        for (size_t r = 0; r < std::min<size_t>(cod.size(), 7); ++r) {
          std::vector<std::pair<Value, Value>> g;
          for (size_t i = 0; i < dom.size(); ++i) g.emplace_back(dom[i], cod[(i + r) % cod.size()]);
          out.push_back(v_fun(std::move(g)));
        }
      }
      return cap(std::move(out));
    }
    case SortKind::Scalar: {
      if (s->name == "interval") {
        for (auto i : ints)
          for (auto j : ints)
            if (i <= j) out.push_back(v_pair(v_int(i), v_int(j)));
        return out;
      }
      if (s->name == "larrow") {
        for (auto a : ints)
          for (auto n : ints)
            for (auto b : ints)
              if (n >= 0) out.push_back(v_tuple({v_int(a), v_int(n), v_int(b)}));
        return cap(std::move(out));
      }
      if (s->name == "nnrat") return universe(rat_sort());
      return out;
    }
    case SortKind::Abstract: {
      if (s->name == "world") return carrier;
      if (s->name == "key") {
        for (auto& y : syms) out.push_back(v_sym(y));
        for (auto i : ints) out.push_back(v_int(i));
        return out;
      }
      auto it = abs_universes.find(s->name);
      if (it != abs_universes.end()) return it->second;
      return out;
    }
  }
  return out;
}

// --- built-in family --------------------------------------------------------------

FiniteModel make_heap_model(int ncells, int maxval, const std::string& name, bool half_perms) {
  FiniteModel m;
  m.name = name.empty() ? "heap" + std::to_string(ncells) : name;
  m.unit = v_set({});
  m.perms = half_perms ? std::vector<Value>{v_rat(1, 2), v_rat(1, 1)}
                       : std::vector<Value>{v_rat(1, 1)};
  m.ints.clear();
  for (long long i = 0; i <= std::max(3, maxval); ++i) m.ints.push_back(i);
  // carrier: all partial maps {1..ncells} -> perm x {0..maxval}; the carrier
  // carries every permission the splits can produce
  std::vector<Value> cur;
  std::function<void(int)> go = [&](int addr) {
    if (addr >= ncells) {
      m.carrier.push_back(v_set(cur));
      return;
    }
    go(addr + 1);
    for (int v = 0; v <= maxval; ++v)
      for (auto& p : m.perms) {
        cur.push_back(v_pair(v_list({v_int(addr)}), v_pair(p, v_int(v))));
        go(addr + 1);
        cur.pop_back();
      }
  };
  go(0);
  // test atoms: TA/TB own one cell whose value is the abstraction
  for (int v = 0; v <= maxval; ++v) {
    m.atom_interp["TA"].push_back({v_int(v), heap_cell({v_int(0)}, v_rat(1, 1), v_int(v))});
    if (ncells >= 2)
      m.atom_interp["TB"].push_back({v_int(v), heap_cell({v_int(1)}, v_rat(1, 1), v_int(v))});
    if (ncells >= 3)
      m.atom_interp["TC"].push_back({v_int(v), heap_cell({v_int(2)}, v_rat(1, 1), v_int(v))});
  }
  // value refinements (identity over cell values)
  for (int v = 0; v <= maxval; ++v) m.atom_interp["IntV"].push_back({v_int(v), v_int(v)});
  m.abs_universes["elem"] = m.universe(int_sort());
  m.abs_universes["val"] = m.universe(int_sort());
  return m;
}

FiniteModel make_recmem_model() {
  FiniteModel m;
  m.name = "recmem";
  m.unit = v_set({});
  m.perms = {v_rat(1, 2), v_rat(1, 1)};
  m.ints = {0, 1, 2};
  // addresses: block 1 fields a.a, a.b, b
  std::vector<std::vector<Value>> addrs = {
      {v_int(1), v_sym("a"), v_sym("a")},
      {v_int(1), v_sym("a"), v_sym("b")},
      {v_int(1), v_sym("b")},
  };
  std::vector<Value> cur;
  std::function<void(size_t)> go = [&](size_t i) {
    if (i == addrs.size()) {
      m.carrier.push_back(v_set(cur));
      return;
    }
    go(i + 1);
    for (auto& p : m.perms)
      for (int v = 0; v <= 1; ++v) {
        cur.push_back(v_pair(v_list(addrs[i]), v_pair(p, v_int(v))));
        go(i + 1);
        cur.pop_back();
      }
  };
  go(0);
  for (int v = 0; v <= 1; ++v) m.atom_interp["IntV"].push_back({v_int(v), v_int(v)});
  m.abs_universes["elem"] = m.universe(int_sort());
  m.abs_universes["val"] = m.universe(int_sort());
  return m;
}

FiniteModel make_listmem_model() {
  FiniteModel m;
  m.name = "listmem";
  m.unit = v_set({});
  m.perms = {v_rat(1, 1)};
  m.ints = {0, 1, 2};
  std::vector<Value> cur;
  std::function<void(int)> go = [&](int blk) {
    if (blk > 2) {
      m.carrier.push_back(v_set(cur));
      return;
    }
    std::vector<std::optional<int>> datas = {std::nullopt, 0, 1};
    for (auto d : datas) {
      size_t n0 = cur.size();
      if (d) cur.push_back(v_pair(v_list({v_int(blk), v_sym("data")}), v_pair(v_rat(1, 1), v_int(*d))));
      std::vector<std::optional<int>> nexts = {std::nullopt, 0, 1, 2};
      for (auto nx : nexts) {
        size_t n1 = cur.size();
        if (nx)
          cur.push_back(v_pair(v_list({v_int(blk), v_sym("next")}), v_pair(v_rat(1, 1), v_int(*nx))));
        go(blk + 1);
        cur.resize(n1);
      }
      cur.resize(n0);
    }
  };
  go(1);
  for (int v = 0; v <= 1; ++v) m.atom_interp["IntV"].push_back({v_int(v), v_int(v)});
  m.abs_universes["elem"] = m.universe(int_sort());
  m.abs_universes["val"] = m.universe(int_sort());
  m.max_list_len = 3;
  return m;
}

FiniteModel make_grid_model(int n, int maxval) {
  FiniteModel m;
  m.name = "grid" + std::to_string(n);
  m.unit = v_set({});
  m.perms = {v_rat(1, 1)};
  m.ints = {0, 1, 2, 3};
  std::vector<Value> cur;
  std::function<void(int)> go = [&](int idx) {
    if (idx == n * n) {
      m.carrier.push_back(v_set(cur));
      return;
    }
    go(idx + 1);
    for (int v = 0; v <= maxval; ++v) {
      cur.push_back(v_pair(v_list({v_int(idx / n), v_int(idx % n)}), v_pair(v_rat(1, 1), v_int(v))));
      go(idx + 1);
      cur.pop_back();
    }
  };
  go(0);
  m.abs_universes["elem"] = m.universe(int_sort());
  m.abs_universes["val"] = m.universe(int_sort());
  m.max_list_len = 2;
  return m;
}

const std::vector<FiniteModel>& builtin_models() {
  static std::vector<FiniteModel> ms = [] {
    std::vector<FiniteModel> v;
    v.push_back(make_heap_model(2, 1));
    v.push_back(make_recmem_model());
    v.push_back(make_listmem_model());
    return v;
  }();
  return ms;
}

const std::vector<FiniteModel>& sweep_models() {
  static std::vector<FiniteModel> ms = [] {
    std::vector<FiniteModel> v = builtin_models();
    v.push_back(make_heap_model(3, 2, "", false));
    v.push_back(make_heap_model(4, 3, "", false));
    return v;
  }();
  return ms;
}

std::optional<std::string> validate_pcm(const FiniteModel& m) {
  for (auto& w : m.carrier) {
    auto r = m.star(w, m.unit);
    if (!r || !value_eq(*r, w)) return "identity law fails at " + show_value(w);
    auto l = m.star(m.unit, w);
    if (!l || !value_eq(*l, w)) return "left identity fails at " + show_value(w);
  }
  for (auto& a : m.carrier)
    for (auto& b : m.carrier) {
      auto ab = m.star(a, b), ba = m.star(b, a);
      if (ab.has_value() != ba.has_value())
        return "commutativity (definedness) fails at " + show_value(a) + ", " + show_value(b);
      if (ab && !value_eq(*ab, *ba))
        return "commutativity fails at " + show_value(a) + ", " + show_value(b);
    }
  if (m.carrier.size() <= 100) {
    for (auto& a : m.carrier)
      for (auto& b : m.carrier) {
        auto ab = m.star(a, b);
        if (!ab) continue;
        for (auto& c : m.carrier) {
          auto abc = m.star(*ab, c);
          if (!abc) continue;
          auto bc = m.star(b, c);
          if (!bc) return "associativity (definedness) fails";
          auto abc2 = m.star(a, *bc);
          if (!abc2 || !value_eq(*abc, *abc2)) return "associativity fails";
        }
      }
  }
  return std::nullopt;
}

// --- dump / load -------------------------------------------------------------------

std::string value_repr(const Value& v) {
  std::ostringstream os;
  switch (v.k) {
    case VKind::Unit: os << "u"; break;
    case VKind::Bool: os << (v.b ? "#t" : "#f"); break;
    case VKind::Int: os << v.i; break;
    case VKind::Rat: os << "r" << v.num << "/" << v.den; break;
    case VKind::Sym: os << "'" << v.sym; break;
    case VKind::Tuple:
    case VKind::List:
    case VKind::Set: {
      os << (v.k == VKind::Tuple ? "(T" : v.k == VKind::List ? "(L" : "(S");
      for (auto& e : v.elems) os << " " << value_repr(e);
      os << ")";
      break;
    }
    default: os << "u"; break;
  }
  return os.str();
}

namespace {
Value parse_value(const std::string& s, size_t& i) {
  auto skip = [&] { while (i < s.size() && s[i] == ' ') ++i; };
  skip();
  if (s[i] == '(') {
    ++i;
    char tag = s[i + 1] == 'T' || s[i] == 'T' ? s[i] : s[i];
    tag = s[i];
    ++i;
    std::vector<Value> es;
    while (true) {
      skip();
      if (s[i] == ')') { ++i; break; }
      es.push_back(parse_value(s, i));
    }
    if (tag == 'T') return v_tuple(std::move(es));
    if (tag == 'L') return v_list(std::move(es));
    return v_set(std::move(es));
  }
  if (s[i] == 'u') { ++i; return v_unit(); }
  if (s[i] == '#') { bool b = s[i + 1] == 't'; i += 2; return v_bool(b); }
  if (s[i] == '\'') {
    ++i;
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != ')') ++j;
    std::string sym = s.substr(i, j - i);
    i = j;
    return v_sym(sym);
  }
  if (s[i] == 'r') {
    ++i;
    size_t j = s.find('/', i);
    long long num = std::stoll(s.substr(i, j - i));
    size_t k = j + 1;
    size_t e = k;
    while (e < s.size() && (isdigit(s[e]) || s[e] == '-')) ++e;
    long long den = std::stoll(s.substr(k, e - k));
    i = e;
    return v_rat(num, den);
  }
  size_t j = i;
  while (j < s.size() && (isdigit(s[j]) || s[j] == '-')) ++j;
  long long n = std::stoll(s.substr(i, j - i));
  i = j;
  return v_int(n);
}
}  // namespace

Value value_parse(const std::string& s) {
  size_t i = 0;
  return parse_value(s, i);
}

std::string model_dump(const FiniteModel& m) {
  std::ostringstream os;
  os << "model " << m.name << "\n";
  os << "cap " << value_repr(m.perm_cap) << "\n";
  for (auto& p : m.perms) os << "perm " << value_repr(p) << "\n";
  for (size_t i = 0; i < m.carrier.size(); ++i)
    os << "world " << i << " " << value_repr(m.carrier[i]) << "\n";
  os << "unit " << m.world_index(m.unit) << "\n";
  for (size_t i = 0; i < m.carrier.size(); ++i)
    for (size_t j = 0; j < m.carrier.size(); ++j) {
      auto r = m.star(m.carrier[i], m.carrier[j]);
      if (r) {
        int k = m.world_index(*r);
        if (k >= 0) os << "op " << i << " " << j << " " << k << "\n";
      }
    }
  for (auto& [name, pairs] : m.atom_interp)
    for (auto& [x, w] : pairs) {
      int k = m.world_index(w);
      os << "interp " << name << " " << (k >= 0 ? std::to_string(k) : "@" + value_repr(w)) << " "
         << value_repr(x) << "\n";
    }
  for (auto& [v, val] : m.term_env) os << "env " << v << " " << value_repr(val) << "\n";
  return os.str();
}

FiniteModel model_load(const std::string& text) {
  FiniteModel m;
  m.use_table = true;
  m.perms.clear();
  std::istringstream is(text);
  std::string line;
  std::map<int, Value> worlds;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "model") ls >> m.name;
    else if (kw == "cap") {
      std::string r;
      std::getline(ls, r);
      m.perm_cap = value_parse(r);
    } else if (kw == "perm") {
      std::string r;
      std::getline(ls, r);
      m.perms.push_back(value_parse(r));
    } else if (kw == "world") {
      int i;
      ls >> i;
      std::string r;
      std::getline(ls, r);
      worlds[i] = value_parse(r);
    } else if (kw == "unit") {
      int i;
      ls >> i;
      m.unit = worlds.at(i);
    } else if (kw == "op") {
      int i, j, k;
      ls >> i >> j >> k;
      m.table[{i, j}] = k;
    } else if (kw == "interp") {
      std::string name, wref;
      ls >> name >> wref;
      std::string r;
      std::getline(ls, r);
      Value x = value_parse(r);
      Value w = wref[0] == '@' ? value_parse(wref.substr(1)) : worlds.at(std::stoi(wref));
      m.atom_interp[name].push_back({x, w});
    } else if (kw == "env") {
      std::string v, r;
      ls >> v;
      std::getline(ls, r);
      m.term_env[v] = value_parse(r);
    }
  }
  m.carrier.reserve(worlds.size());
  for (auto& [i, w] : worlds) m.carrier.push_back(w);
  return m;
}

}  // namespace slr
