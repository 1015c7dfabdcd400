#include "gcx/corpus/runner.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <variant>

#include "gcx/exterior/errors.hpp"
#include "gcx/exterior/map.hpp"
#include "gcx/gcs/piecewise.hpp"
#include "gcx/gcs/surgery.hpp"
#include "gcx/topology/classify.hpp"

namespace gcx::corpus {

namespace {

// Scalars, forms, vector fields and sections X + ξ share one value type so
// that arithmetic can promote between them.
struct Val {
  enum class Kind { scalar, form, vector, section };
  Kind kind = Kind::scalar;
  Expr e;
  MixedForm f;
  VectorField v;
};

struct RegionEntry {
  ChartPtr chart;
  Region region;
};

using ModelPtr = std::shared_ptr<const LuttingerModel>;
using Entity = std::variant<ChartPtr, RegionEntry, BumpPtr, Val, SpinorStructure, CoordinateMap, ModelPtr,
                            GroupPresentation, ManifoldDescriptor>;

const char* entity_kind(const Entity& e) {
  static const char* names[] = {"chart", "region", "bump", "value", "spinor", "map", "model", "group", "manifold"};
  return names[e.index()];
}

const std::set<std::string> kDeclarations{"chart",  "use",      "bump",      "region",  "scalar", "form",
                                          "vector", "section",  "spinor",    "bfield",  "luttinger", "gluck",
                                          "map",    "model",    "group",     "free_product", "quotient",
                                          "manifold", "locus",  "surgery",   "twist",   "cover",  "branched"};

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string join(const std::vector<std::string>& parts, const std::string& sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

std::string join_longs(const std::vector<long>& v) {
  std::vector<std::string> parts;
  for (long x : v) parts.push_back(std::to_string(x));
  return join(parts);
}

std::vector<const Node*> items(const Node& n) {
  std::vector<const Node*> out;
  if (n.kind == Node::Kind::list) {
    for (const Node& k : n.kids) out.push_back(&k);
  } else {
    out.push_back(&n);
  }
  return out;
}

class Runner {
 public:
  Runner(const Scenario& s, const RunOptions& opts) : scenario_(s), opts_(opts) {
    check_.samples = opts.samples;
    check_.seed = opts.seed;
    check_.tolerance = opts.tolerance;
    report_.scenario = s.name;
    report_.reproduces = s.reproduces;
    report_.options = opts;
    report_.warnings = s.warnings;
  }

  Report run() {
    for (const Statement& st : scenario_.statements) execute(st);
    return std::move(report_);
  }

 private:
  // ------------------------------------------------------------------ errors

  [[noreturn]] void semantic(const Node* at, const std::string& msg) const {
    throw ParseError(at && at->line ? at->line : stmt_->line, at && at->line ? at->column : 1, msg);
  }

  // ------------------------------------------------------------- symbol table

  void define(const std::string& name, Entity e) {
    if (symbols_.count(name)) semantic(nullptr, "'" + name + "' is already defined");
    symbols_.emplace(name, std::move(e));
  }

  const Entity& lookup(const std::string& name, const Node* at) const {
    auto it = symbols_.find(name);
    if (it == symbols_.end()) semantic(at, "unknown name '" + name + "'");
    return it->second;
  }

  template <class T>
  const T& get(const std::string& name, const char* kind, const Node* at = nullptr) const {
    const Entity& e = lookup(name, at);
    if (const T* t = std::get_if<T>(&e)) return *t;
    semantic(at, "'" + name + "' is a " + entity_kind(e) + ", expected a " + kind);
  }

  std::string ident(const Node& n, const char* what) const {
    if (n.kind != Node::Kind::ident) semantic(&n, std::string("expected ") + what + " name, found '" + print(n) + "'");
    return n.text;
  }

  const Node& required(const Statement& st, const std::string& key) const {
    if (const Node* n = st.clause(key)) return *n;
    semantic(nullptr, "'" + st.keyword + "' needs " + key + "=...");
  }

  const Node& value_of(const Statement& st) const {
    if (!st.value) semantic(nullptr, "'" + st.keyword + "' needs '= ...'");
    return *st.value;
  }

  ChartPtr current_chart() const {
    if (!chart_) semantic(nullptr, "no chart declared yet");
    return chart_;
  }

  ChartPtr chart_clause(const Statement& st) const {
    if (const Node* c = st.clause("chart")) return get<ChartPtr>(ident(*c, "chart"), "chart", c);
    return current_chart();
  }

  // ------------------------------------------------------------ evaluation

  Val scalar(Expr e) const { return Val{Val::Kind::scalar, std::move(e), {}, {}}; }
  Val form(MixedForm f) const { return Val{Val::Kind::form, {}, std::move(f), {}}; }

  static MixedForm as_form(const Val& v, const ChartPtr& chart) {
    if (v.kind == Val::Kind::form) return v.f;
    return MixedForm::scalar(chart, v.e);
  }

  Val add(const Val& a, const Val& b, const ChartPtr& chart, const Node* at) const {
    using K = Val::Kind;
    if (a.kind == K::scalar && b.kind == K::scalar) return scalar(a.e + b.e);
    const bool av = a.kind == K::vector || a.kind == K::section;
    const bool bv = b.kind == K::vector || b.kind == K::section;
    if (!av && !bv) return form(as_form(a, chart) + as_form(b, chart));
    if ((a.kind == K::scalar && !a.e.is_zero()) || (b.kind == K::scalar && !b.e.is_zero())) {
      semantic(at, "cannot add a function to a vector field");
    }
    Val out{K::section, {}, MixedForm(chart), VectorField(chart)};
    for (const Val* v : {&a, &b}) {
      if (v->kind == K::vector || v->kind == K::section) out.v = out.v + v->v;
      if (v->kind == K::form || v->kind == K::section) out.f = out.f + v->f;
    }
    if (out.f.is_zero() && a.kind != K::section && b.kind != K::section) out.kind = K::vector;
    return out;
  }

  static Val scale(const Expr& c, const Val& v) {
    Val out = v;
    if (v.kind == Val::Kind::scalar) out.e = c * v.e;
    if (v.kind == Val::Kind::form || v.kind == Val::Kind::section) out.f = c * v.f;
    if (v.kind == Val::Kind::vector || v.kind == Val::Kind::section) out.v = c * v.v;
    return out;
  }

  Expr need_scalar(const Val& v, const Node& at) const {
    if (v.kind != Val::Kind::scalar) semantic(&at, "expected a function, found a form or vector: " + print(at));
    return v.e;
  }

  MixedForm need_form(const Val& v, const ChartPtr& chart, const Node& at) const {
    if (v.kind == Val::Kind::vector || v.kind == Val::Kind::section) semantic(&at, "expected a form: " + print(at));
    return as_form(v, chart);
  }

  Val eval(const Node& n, const ChartPtr& chart) const {
    switch (n.kind) {
      case Node::Kind::number: {
        auto q = parse_rational(n.text);
        if (!q) semantic(&n, "bad number '" + n.text + "'");
        return scalar(Expr(*q));
      }
      case Node::Kind::string:
        semantic(&n, "a string is not a value here");
      case Node::Kind::ident:
        return resolve(n, chart);
      case Node::Kind::modulus: {
        const Expr e = need_scalar(eval(n.kids[0], chart), n.kids[0]);
        const Expr c = chart ? conjugate(e, chart->partners()) : e;
        return scalar(sqrt(e * c));
      }
      case Node::Kind::unary:
        return scale(Expr(-1), eval(n.kids[0], chart));
      case Node::Kind::list:
        semantic(&n, "a list is not a value here");
      case Node::Kind::call:
        return call(n, chart);
      case Node::Kind::binary:
        break;
    }
    const std::string& op = n.text;
    if (op == "+" || op == "-") {
      Val r = eval(n.kids[1], chart);
      if (op == "-") r = scale(Expr(-1), r);
      return add(eval(n.kids[0], chart), r, chart, &n);
    }
    if (op == "*") {
      const Val a = eval(n.kids[0], chart), b = eval(n.kids[1], chart);
      if (a.kind == Val::Kind::scalar) return scale(a.e, b);
      if (b.kind == Val::Kind::scalar) return scale(b.e, a);
      semantic(&n, "'*' needs a function on one side; use '^' to wedge forms");
    }
    if (op == "/") {
      const Expr den = need_scalar(eval(n.kids[1], chart), n.kids[1]);
      return scale(Expr(1) / den, eval(n.kids[0], chart));
    }
    if (op == "^") {
      const Val a = eval(n.kids[0], chart), b = eval(n.kids[1], chart);
      if (a.kind == Val::Kind::scalar && b.kind == Val::Kind::scalar) return scalar(a.e * b.e);
      if (!chart) semantic(&n, "forms need a chart");
      return form(wedge(need_form(a, chart, n.kids[0]), need_form(b, chart, n.kids[1])));
    }
    if (op == "**") {
      const Expr base = need_scalar(eval(n.kids[0], chart), n.kids[0]);
      return scalar(pow(base, integer(n.kids[1])));
    }
    semantic(&n, "operator '" + op + "' is not allowed in a value");
  }

  Val resolve(const Node& n, const ChartPtr& chart) const {
    const std::string& name = n.text;
    if (auto it = symbols_.find(name); it != symbols_.end()) {
      if (const Val* v = std::get_if<Val>(&it->second)) return *v;
      if (const SpinorStructure* s = std::get_if<SpinorStructure>(&it->second)) return form(s->rho());
      semantic(&n, "'" + name + "' is a " + entity_kind(it->second) + " and cannot be used in a value");
    }
    if (name == "i") return scalar(Expr::imaginary_unit());
    if (chart) {
      if (auto s = chart->slot_index(name)) return scalar(chart->symbol(*s));
      if (name.size() > 1 && name[0] == 'd') {
        if (auto s = chart->slot_index(name.substr(1))) return form(MixedForm::differential(chart, *s));
      }
    }
    semantic(&n, "unknown name '" + name + "'" + (chart ? " on chart '" + chart->name() + "'" : std::string()));
  }

  Val call(const Node& n, const ChartPtr& chart) const {
    const std::string& f = n.text;
    auto arity = [&](std::size_t k) {
      if (n.kids.size() != k) semantic(&n, f + "() takes " + std::to_string(k) + " argument(s)");
    };
    if (f == "exp" || f == "log" || f == "sqrt" || f == "sin" || f == "cos") {
      arity(1);
      const Val a = eval(n.kids[0], chart);
      if (a.kind == Val::Kind::scalar) {
        if (f == "exp") return scalar(exp(a.e));
        if (f == "log") return scalar(log(a.e));
        if (f == "sqrt") return scalar(sqrt(a.e));
        if (f == "sin") return scalar(sin(a.e));
        return scalar(cos(a.e));
      }
      if (f != "exp") semantic(&n, f + "() of a form is not defined");
      const MixedForm m = need_form(a, chart, n.kids[0]);
      const Expr c0 = m.coefficient(0);
      MixedForm rest = m - MixedForm::scalar(chart, c0);
      return form(exp(c0) * exp_form(rest));
    }
    if (f == "d") {
      arity(1);
      if (!chart) semantic(&n, "d() needs a chart");
      return form(d(need_form(eval(n.kids[0], chart), chart, n.kids[0])));
    }
    if (f == "conj" || f == "re" || f == "im") {
      arity(1);
      const Val a = eval(n.kids[0], chart);
      if (!chart) semantic(&n, f + "() needs a chart");
      const MixedForm m = need_form(a, chart, n.kids[0]);
      const MixedForm r = f == "conj" ? conj(m) : f == "re" ? real_part(m) : imag_part(m);
      if (a.kind == Val::Kind::scalar) return scalar(r.coefficient(0));
      return form(r);
    }
    if (f == "vec") {
      if (!chart) semantic(&n, "vec() needs a chart");
      Val out{Val::Kind::vector, {}, MixedForm(chart), VectorField(chart)};
      for (const Node& a : n.kids) {
        if (a.kind != Node::Kind::binary || a.text != ":") semantic(&a, "vec() takes coordinate: coefficient pairs");
        const std::string slot = ident(a.kids[0], "coordinate");
        auto s = chart->slot_index(slot);
        if (!s) semantic(&a.kids[0], "chart '" + chart->name() + "' has no coordinate '" + slot + "'");
        out.v.accumulate(*s, need_scalar(eval(a.kids[1], chart), a.kids[1]));
      }
      return out;
    }
    if (f == "iota") {
      arity(2);
      const Val x = eval(n.kids[0], chart);
      if (x.kind != Val::Kind::vector) semantic(&n.kids[0], "iota() needs a vector field first");
      return form(interior(x.v, need_form(eval(n.kids[1], chart), chart, n.kids[1])));
    }
    if (f == "pullback") {
      arity(2);
      const CoordinateMap& m = get<CoordinateMap>(ident(n.kids[0], "map"), "map", &n.kids[0]);
      const Val v = eval(n.kids[1], m.target());
      if (v.kind == Val::Kind::scalar) return scalar(pullback(m, v.e));
      return form(pullback(m, need_form(v, m.target(), n.kids[1])));
    }
    if (auto it = symbols_.find(f); it != symbols_.end()) {
      if (const BumpPtr* b = std::get_if<BumpPtr>(&it->second)) {
        arity(1);
        return scalar(Expr::bump(*b, 0, need_scalar(eval(n.kids[0], chart), n.kids[0])));
      }
    }
    semantic(&n, "unknown function '" + f + "'");
  }

  // ---------------------------------------------------------- literal values

  Gaussian constant(const Node& n) const {
    const Expr e = need_scalar(eval(n, nullptr), n);
    auto g = eval_exact(e, Point{});
    if (!g) semantic(&n, "expected an exact constant, found '" + print(n) + "'");
    return *g;
  }

  long integer(const Node& n) const {
    const Gaussian g = constant(n);
    if (!g.is_real() || g.re().get_den() != 1 || !g.re().get_num().fits_slong_p()) {
      semantic(&n, "expected an integer, found '" + print(n) + "'");
    }
    return g.re().get_num().get_si();
  }

  long integer_clause(const Statement& st, const std::string& key, std::optional<long> fallback = std::nullopt) const {
    if (const Node* n = st.clause(key)) return integer(*n);
    if (fallback) return *fallback;
    semantic(nullptr, "'" + st.keyword + "' needs " + key + "=...");
  }

  bool boolean(const Node& n) const {
    if (n.kind == Node::Kind::ident && (n.text == "true" || n.text == "false")) return n.text == "true";
    semantic(&n, "expected true or false, found '" + print(n) + "'");
  }

  bool bool_clause(const Statement& st, const std::string& key, bool fallback) const {
    const Node* n = st.clause(key);
    return n ? boolean(*n) : fallback;
  }

  std::string text(const Node& n) const {
    if (n.kind == Node::Kind::string || n.kind == Node::Kind::ident) return n.text;
    semantic(&n, "expected a string, found '" + print(n) + "'");
  }

  std::vector<long> integers(const Node& n) const {
    std::vector<long> out;
    for (const Node* k : items(n)) out.push_back(integer(*k));
    return out;
  }

  SurgeryParams params(const Statement& st) const {
    return {integer_clause(st, "p"), integer_clause(st, "q"), integer_clause(st, "a"), integer_clause(st, "b")};
  }

  Spin spin(const Node& n) const {
    const std::string s = text(n);
    if (s == "spin") return Spin::spin;
    if (s == "non_spin" || s == "non-spin" || s == "nonspin") return Spin::non_spin;
    if (s == "unknown") return Spin::unknown;
    semantic(&n, "spin must be spin, non_spin or unknown");
  }

  GroupPresentation group(const Node& n) const {
    if (n.kind == Node::Kind::string) return GroupPresentation::parse(n.text);
    return get<GroupPresentation>(ident(n, "group"), "group", &n);
  }

  std::vector<LabelFactor> factors(const std::string& label) const {
    std::vector<LabelFactor> out;
    std::size_t start = 0;
    while (start <= label.size()) {
      const std::size_t star = label.find('*', start);
      std::string part = label.substr(start, star == std::string::npos ? std::string::npos : star - start);
      const auto b = part.find_first_not_of(' ');
      const auto e = part.find_last_not_of(' ');
      part = b == std::string::npos ? "" : part.substr(b, e - b + 1);
      out.push_back(parse_label_factor(part));
      if (star == std::string::npos) break;
      start = star + 1;
    }
    return out;
  }

  Point point(const Node& n, const ChartPtr& chart) const {
    std::map<std::string, Gaussian> values;
    for (const Node* k : items(n)) {
      if (k->kind != Node::Kind::binary || k->text != ":") semantic(k, "points are written (coordinate: value, ...)");
      values[ident(k->kids[0], "coordinate")] = constant(k->kids[1]);
    }
    return make_point(*chart, values);
  }

  Region region(const Node& n, const ChartPtr& chart) const {
    std::vector<Constraint> cs;
    std::vector<const Node*> stack{&n};
    std::vector<const Node*> conds;
    while (!stack.empty()) {
      const Node* k = stack.back();
      stack.pop_back();
      if (k->kind == Node::Kind::binary && k->text == "and") {
        stack.push_back(&k->kids[1]);
        stack.push_back(&k->kids[0]);
      } else if (k->kind == Node::Kind::list) {
        for (auto it = k->kids.rbegin(); it != k->kids.rend(); ++it) stack.push_back(&*it);
      } else {
        conds.push_back(k);
      }
    }
    static const std::map<std::string, Relation> rels{{"<", Relation::lt},  {"<=", Relation::le}, {">", Relation::gt},
                                                      {">=", Relation::ge}, {"==", Relation::eq}, {"!=", Relation::ne}};
    for (const Node* c : conds) {
      auto r = c->kind == Node::Kind::binary ? rels.find(c->text) : rels.end();
      if (r == rels.end()) semantic(c, "a region is a conjunction of comparisons, found '" + print(*c) + "'");
      cs.push_back(Constraint::make(*chart, need_scalar(eval(c->kids[0], chart), c->kids[0]), r->second,
                                    constant(c->kids[1])));
    }
    return Region(std::move(cs));
  }

  Region region_clause(const Statement& st, const ChartPtr& chart, const std::string& key = "region") const {
    const Node* n = st.clause(key);
    if (!n) return {};
    if (n->kind == Node::Kind::ident) {
      const RegionEntry& r = get<RegionEntry>(n->text, "region", n);
      if (r.chart != chart) semantic(n, "region '" + n->text + "' lives on chart '" + r.chart->name() + "'");
      return r.region;
    }
    return region(*n, chart);
  }

  BumpPtr bump_clause(const Statement& st) const {
    if (const Node* n = st.clause("bump")) return get<BumpPtr>(ident(*n, "bump"), "bump", n);
    return default_radial_bump();
  }

  const SpinorStructure& spinor_named(const Statement& st) const {
    return get<SpinorStructure>(st.name, "spinor");
  }

  // ------------------------------------------------------------ statements

  using Values = std::vector<std::pair<std::string, std::string>>;

  void manifold_values(const ManifoldDescriptor& m, Values& out) const {
    out.emplace_back("name", m.name);
    out.emplace_back("dim", std::to_string(m.dim));
    out.emplace_back("euler", std::to_string(m.euler));
    out.emplace_back("signature", m.signature ? std::to_string(*m.signature) : "undefined");
    out.emplace_back("spin", spin_name(m.spin));
    out.emplace_back("components", std::to_string(m.components.size()));
    out.emplace_back("pi1", m.pi1 ? m.pi1->str() : "unknown");
    out.emplace_back("ab", m.pi1 ? abelianization(*m.pi1).str() : "unknown");
    out.emplace_back("b2", m.h2 ? std::to_string(m.h2->b2) : "unknown");
  }

  void declare_manifold(const Statement& st, ManifoldDescriptor m, std::size_t old_notes, CommandResult& cr) {
    m.name = st.name;
    for (std::size_t k = old_notes; k < m.notes.size(); ++k) cr.notes.push_back(m.notes[k]);
    manifold_values(m, cr.values);
    define(st.name, std::move(m));
  }

  void dispatch(const Statement& st, CommandResult& cr) {
    const std::string& kw = st.keyword;
    Values& out = cr.values;
    if (kw == "chart") {
      std::vector<Coordinate> coords;
      for (const Node* k : items(value_of(st))) {
        if (k->kind != Node::Kind::binary || k->text != ":") semantic(k, "charts are written name: kind, ...");
        static const std::map<std::string, CoordKind> kinds{{"real", CoordKind::real},
                                                            {"radial", CoordKind::radial},
                                                            {"angle", CoordKind::angle},
                                                            {"complex", CoordKind::complex}};
        const std::string kind = ident(k->kids[1], "coordinate kind");
        auto it = kinds.find(kind);
        if (it == kinds.end()) semantic(&k->kids[1], "coordinate kind must be real, radial, angle or complex");
        coords.push_back({ident(k->kids[0], "coordinate"), it->second, "", ""});
      }
      chart_ = make_chart(st.name, coords);
      define(st.name, chart_);
      out.emplace_back("dim", std::to_string(chart_->dim()));
    } else if (kw == "use") {
      chart_ = get<ChartPtr>(st.name, "chart");
    } else if (kw == "bump") {
      const Gaussian lo = constant(required(st, "zero_below")), hi = constant(required(st, "one_above"));
      if (!lo.is_real() || !hi.is_real() || !(lo.re() < hi.re())) semantic(nullptr, "bump needs zero_below < one_above");
      define(st.name, std::make_shared<const Bump>(Bump{st.name, lo.re(), hi.re()}));
    } else if (kw == "region") {
      const ChartPtr c = chart_clause(st);
      Region r = region(value_of(st), c);
      out.emplace_back("region", r.str());
      define(st.name, RegionEntry{c, std::move(r)});
    } else if (kw == "scalar") {
      const Expr e = need_scalar(eval(value_of(st), chart_), value_of(st));
      out.emplace_back("value", e.str());
      define(st.name, scalar(e));
    } else if (kw == "form") {
      const ChartPtr c = current_chart();
      const MixedForm f = need_form(eval(value_of(st), c), c, value_of(st));
      out.emplace_back("zero", yes_no(f.is_zero()));
      out.emplace_back("terms", std::to_string(f.terms().size()));
      out.emplace_back("degree", f.is_zero() ? "none" : f.homogeneous() ? std::to_string(f.max_degree()) : "mixed");
      if (f.is_zero()) cr.notes.push_back("form '" + st.name + "' is the zero form");
      define(st.name, form(f));
    } else if (kw == "vector" || kw == "section") {
      const ChartPtr c = current_chart();
      Val v = eval(value_of(st), c);
      if (kw == "vector" && v.kind != Val::Kind::vector) semantic(&value_of(st), "expected a vector field");
      if (kw == "section") {
        v = add(v, form(MixedForm(c)), c, &value_of(st));
        v.kind = Val::Kind::section;
      }
      define(st.name, std::move(v));
    } else if (kw == "spinor") {
      const ChartPtr c = current_chart();
      const MixedForm rho = need_form(eval(value_of(st), c), c, value_of(st));
      MixedForm h(c);
      if (const Node* n = st.clause("twist")) h = need_form(eval(*n, c), c, *n);
      std::optional<GeneralizedSection> cert;
      if (const Node* n = st.clause("certificate")) {
        Val v = add(eval(*n, c), form(MixedForm(c)), c, n);
        if (v.v.chart() == nullptr) v.v = VectorField(c);
        cert = GeneralizedSection{v.v, v.f};
      }
      std::optional<DecompositionHints> hints;
      if (const Node* n = st.clause("hints")) {
        const auto parts = items(*n);
        if (parts.size() != 3) semantic(n, "hints=(B, omega, Omega)");
        hints = DecompositionHints{need_form(eval(*parts[0], c), c, *parts[0]), need_form(eval(*parts[1], c), c, *parts[1]),
                                   need_form(eval(*parts[2], c), c, *parts[2]), region_clause(st, c, "hints_region")};
      }
      define(st.name, SpinorStructure(st.name, rho, h, cert, hints, check_));
    } else if (kw == "bfield") {
      const SpinorStructure& s = get<SpinorStructure>(ident(value_of(st), "spinor"), "spinor", &value_of(st));
      const Node& b = required(st, "b");
      define(st.name, b_field_transform(s, need_form(eval(b, s.chart()), s.chart(), b), check_).renamed(st.name));
    } else if (kw == "luttinger" || kw == "gluck") {
      const ChartPtr c = current_chart();
      const Node* extra = st.clause(kw == "luttinger" ? "sigma" : "r");
      const MixedForm f = extra ? need_form(eval(*extra, c), c, *extra) : MixedForm(c);
      SpinorStructure s = kw == "luttinger" ? build_luttinger_spinor(c, params(st), bump_clause(st), f, check_)
                                            : build_gluck_spinor(c, params(st), bump_clause(st), f, check_);
      define(st.name, s.renamed(st.name));
    } else if (kw == "map") {
      const ChartPtr src = get<ChartPtr>(ident(required(st, "from"), "chart"), "chart", st.clause("from"));
      const ChartPtr tgt = get<ChartPtr>(ident(required(st, "to"), "chart"), "chart", st.clause("to"));
      std::map<std::string, Expr> images;
      for (const Node* k : items(value_of(st))) {
        if (k->kind != Node::Kind::binary || k->text != ":") semantic(k, "maps are written target: image, ...");
        images[ident(k->kids[0], "coordinate")] = need_scalar(eval(k->kids[1], src), k->kids[1]);
      }
      define(st.name, CoordinateMap(st.name, src, tgt, std::move(images), region_clause(st, src, "domain")));
    } else if (kw == "model") {
      define(st.name, std::make_shared<const LuttingerModel>(make_luttinger_model(params(st), bump_clause(st), check_)));
    } else if (kw == "group") {
      GroupPresentation g = group(value_of(st));
      out.emplace_back("presentation", g.str());
      out.emplace_back("ab", abelianization(g).str());
      define(st.name, std::move(g));
    } else if (kw == "free_product") {
      const auto parts = items(value_of(st));
      if (parts.size() != 2) semantic(&value_of(st), "free_product NAME = (G, H)");
      GroupPresentation g = free_product(group(*parts[0]), group(*parts[1])).group;
      out.emplace_back("presentation", g.str());
      out.emplace_back("ab", abelianization(g).str());
      define(st.name, std::move(g));
    } else if (kw == "quotient") {
      const GroupPresentation g = group(value_of(st));
      std::vector<Word> words;
      for (const Node* w : items(required(st, "words"))) words.push_back(g.parse_word(text(*w)));
      GroupPresentation qg = quotient_normal_closure(g, words);
      out.emplace_back("presentation", qg.str());
      out.emplace_back("ab", abelianization(qg).str());
      define(st.name, std::move(qg));
    } else if (kw == "manifold") {
      ManifoldDescriptor m;
      m.name = st.name;
      m.dim = static_cast<int>(integer_clause(st, "dim"));
      m.euler = integer_clause(st, "euler");
      if (st.clause("signature")) m.signature = integer_clause(st, "signature");
      if (const Node* n = st.clause("spin")) m.spin = spin(*n);
      if (const Node* n = st.clause("pi1")) m.pi1 = group(*n);
      if (const Node* n = st.clause("b2")) {
        m.h2 = H2Data{integer(*n), {}};
        if (const Node* t = st.clause("torsion")) m.h2->torsion = integers(*t);
      }
      if (const Node* n = st.clause("components")) {
        for (const Node* c : items(*n)) m.components.push_back(TypeChangeComponent{factors(text(*c)), "original"});
      }
      m.validate();
      manifold_values(m, out);
      define(st.name, std::move(m));
    } else if (kw == "locus") {
      const Node& mn = required(st, "manifold");
      const std::string mname = ident(mn, "manifold");
      ManifoldDescriptor m = get<ManifoldDescriptor>(mname, "manifold", &mn);
      SurgeryLocus l;
      l.name = st.name;
      const std::string kind = text(required(st, "kind"));
      if (kind == "luttinger") {
        l.kind = LocusKind::luttinger;
      } else if (kind == "gluck") {
        l.kind = LocusKind::gluck;
      } else if (kind == "branch") {
        l.kind = LocusKind::branch;
      } else {
        semantic(st.clause("kind"), "locus kind must be luttinger, gluck or branch");
      }
      if (const Node* n = st.clause("sigma")) l.sigma = factors(text(*n));
      l.neighborhood_trivial = bool_clause(st, "trivial", false);
      l.j_symplectic = bool_clause(st, "jsymplectic", false);
      l.euler = integer_clause(st, "euler", 0);
      if (const Node* n = st.clause("complement")) {
        GroupPresentation g = group(*n);
        GluingData gd{g, g.parse_word(text(required(st, "meridian"))), g.parse_word(text(required(st, "l1"))),
                      g.parse_word(text(required(st, "l2")))};
        l.gluing = std::move(gd);
      }
      m.loci.push_back(std::move(l));
      symbols_.erase(mname);
      symbols_.emplace(mname, std::move(m));
    } else if (kw == "surgery" || kw == "twist") {
      const Node& src = value_of(st);
      const ManifoldDescriptor& m = get<ManifoldDescriptor>(ident(src, "manifold"), "manifold", &src);
      const std::string locus = ident(required(st, "locus"), "locus");
      ManifoldDescriptor r = kw == "surgery" ? apply_luttinger(m, locus, params(st)) : apply_gluck(m, locus, params(st));
      declare_manifold(st, std::move(r), m.notes.size(), cr);
    } else if (kw == "cover") {
      const Node& src = value_of(st);
      const ManifoldDescriptor& m = get<ManifoldDescriptor>(ident(src, "manifold"), "manifold", &src);
      std::optional<GroupPresentation> witness;
      if (const Node* n = st.clause("pi1")) witness = group(*n);
      declare_manifold(st, apply_cover(m, integer_clause(st, "degree"), witness), m.notes.size(), cr);
    } else if (kw == "branched") {
      const Node& src = value_of(st);
      const ManifoldDescriptor& m = get<ManifoldDescriptor>(ident(src, "manifold"), "manifold", &src);
      BranchingData data;
      data.degree = integer_clause(st, "degree");
      if (const Node* n = st.clause("branch")) {
        for (const Node* b : items(*n)) {
          if (b->kind != Node::Kind::binary || b->text != ":") semantic(b, "branch=(locus: indices, ...)");
          data.components.push_back({ident(b->kids[0], "locus"), integers(b->kids[1])});
        }
      }
      declare_manifold(st, apply_branched_cover(m, data), m.notes.size(), cr);
    } else if (kw == "note") {
      cr.notes.push_back(text(required(st, "text")));
    } else {
      check(st, cr);
    }
  }

  std::vector<Point> sample(const Statement& st, const ChartPtr& chart, const Region& domain) const {
    const Region where = domain.intersect(region_clause(st, chart));
    const int n = static_cast<int>(integer_clause(st, "samples", 10));
    std::string axis;
    bool zero = false;
    if (const Node* z = st.clause("zero")) {
      axis = ident(*z, "coordinate");
      zero = true;
    } else if (const Node* z = st.clause("nonzero")) {
      axis = ident(*z, "coordinate");
    }
    if (!axis.empty() && !chart->coordinate(axis)) semantic(nullptr, "chart '" + chart->name() + "' has no '" + axis + "'");
    PointSampler sampler(*chart, where, opts_.seed + static_cast<std::uint64_t>(stmt_->line));
    std::vector<Point> out;
    while (static_cast<int>(out.size()) < n) {
      Point p = sampler.next();
      if (zero) {
        p[axis] = Gaussian(0);
        if (p.count(axis + "bar")) p[axis + "bar"] = Gaussian(0);
      } else if (!axis.empty() && p[axis].is_zero()) {
        continue;
      }
      out.push_back(std::move(p));
    }
    return out;
  }

  // samples= on a check overrides the run-wide sample count
  CheckOptions options(const Statement& st) const {
    CheckOptions o = check_;
    if (st.clause("samples")) o.samples = static_cast<int>(integer_clause(st, "samples"));
    return o;
  }

  void check(const Statement& st, CommandResult& cr) {
    const std::string& kw = st.keyword;
    Values& out = cr.values;
    const CheckOptions co = options(st);
    if (!opts_.checks) {
      cr.status = "skipped";
      // still resolve the subject so that unknown names surface
      if (!st.name.empty()) (void)lookup(st.name, nullptr);
      return;
    }
    if (kw == "type") {
      const SpinorStructure& s = spinor_named(st);
      std::set<int> types;
      int points = 0;
      if (const Node* at = st.clause("at")) {
        types.insert(type_at(s.rho(), point(*at, s.chart()), opts_.tolerance));
        points = 1;
      } else {
        for (const Point& p : sample(st, s.chart(), s.rho().domain())) {
          types.insert(type_at(s.rho(), p, opts_.tolerance));
          ++points;
        }
      }
      std::vector<std::string> ts;
      for (int t : types) ts.push_back(std::to_string(t));
      out.emplace_back("type", types.size() == 1 ? ts[0] : "mixed(" + join(ts) + ")");
      out.emplace_back("points", std::to_string(points));
    } else if (kw == "nondegenerate") {
      const SpinorStructure& s = spinor_named(st);
      out.emplace_back("nondegenerate",
                       yes_no(check_nondegenerate(s, point(required(st, "at"), s.chart()), opts_.tolerance)));
    } else if (kw == "integrable" || kw == "verify") {
      const SpinorStructure& s = spinor_named(st);
      const IntegrabilityResult r = check_integrable(s, co);
      out.emplace_back("integrable", yes_no(r.integrable));
      out.emplace_back("stored", yes_no(r.from_stored));
      out.emplace_back("certificate", r.certificate ? r.certificate->str() : "none");
      out.emplace_back("residual", r.integrable ? "0" : "nonzero");
      out.emplace_back("h", s.h().str());
      out.emplace_back("verified_by", r.verification.structural
                                          ? std::string("expansion")
                                          : std::to_string(r.verification.samples_used) + " samples");
      out.emplace_back("detail", r.detail);
      if (kw == "verify") {
        const StabilityResult sr = check_stable(s, co);
        out.emplace_back("stable", yes_no(sr.stable));
        out.emplace_back("locus", sr.locus);
      }
    } else if (kw == "stable") {
      const StabilityResult r = check_stable(spinor_named(st), co);
      out.emplace_back("stable", yes_no(r.stable));
      out.emplace_back("locus", r.locus);
      out.emplace_back("points", std::to_string(r.points_checked));
      out.emplace_back("detail", r.detail);
    } else if (kw == "compare") {
      const ChartPtr c = chart_clause(st);
      Node lhs = Node::ident(st.name);
      lhs.line = st.line;
      const MixedForm a = need_form(eval(lhs, c), c, lhs);
      const MixedForm b = need_form(eval(value_of(st), c), c, value_of(st));
      const Region r = region_clause(st, c);
      const Agreement ag = bool_clause(st, "scale", false) ? agree_up_to_scale(a, b, co, r) : forms_agree(a, b, co, r);
      out.emplace_back("agree", yes_no(ag.agree));
      out.emplace_back("difference", ag.first_difference ? a.monomial_str(*ag.first_difference) : "none");
      out.emplace_back("structural", yes_no(ag.structural));
    } else if (kw == "lemma") {
      const ModelPtr& m = get<ModelPtr>(st.name, "model");
      const Agreement ag = check_extension_lemma(*m, co);
      out.emplace_back("agree", yes_no(ag.agree));
      out.emplace_back("samples", std::to_string(ag.samples_used));
      out.emplace_back("difference",
                       ag.first_difference ? MixedForm(m->polar).monomial_str(*ag.first_difference) : "none");
    } else if (kw == "glue") {
      const ModelPtr& m = get<ModelPtr>(st.name, "model");
      Rational beta(1);
      if (const Node* n = st.clause("beta")) {
        const Gaussian g = constant(*n);
        if (!g.is_real()) semantic(n, "beta must be real");
        beta = g.re();
      }
      const GluedModel g = glue_luttinger_model(*m, bool_clause(st, "cutoff", true), beta, co);
      const PiecewiseResult r = assemble_piecewise(g.pieces, g.overlaps, co);
      out.emplace_back("ok", yes_no(r.ok));
      bool spin_ok = true, h_ok = true;
      std::string diff = "none";
      for (const OverlapResult& o : r.overlaps) {
        spin_ok = spin_ok && o.spinors_agree;
        h_ok = h_ok && o.h_agree;
        if (diff == "none" && !o.difference_monomial.empty()) diff = o.difference_monomial;
      }
      out.emplace_back("spinors_agree", yes_no(spin_ok));
      out.emplace_back("h_agree", yes_no(h_ok));
      out.emplace_back("difference", diff);
      out.emplace_back("loci", join(r.loci));
      out.emplace_back("detail", r.detail);
    } else if (kw == "invariants") {
      manifold_values(get<ManifoldDescriptor>(st.name, "manifold"), out);
    } else if (kw == "abelianize") {
      const Entity& e = lookup(st.name, nullptr);
      GroupPresentation g;
      if (const auto* m = std::get_if<ManifoldDescriptor>(&e)) {
        if (!m->pi1) throw Error("fundamental group of '" + st.name + "' is unknown");
        g = *m->pi1;
      } else {
        g = get<GroupPresentation>(st.name, "group or manifold");
      }
      const Abelianization ab = abelianization(g);
      out.emplace_back("ab", ab.str());
      out.emplace_back("rank", std::to_string(ab.rank));
      out.emplace_back("torsion", "[" + join_longs(ab.torsion) + "]");
    } else if (kw == "components") {
      const ComponentsReport r = components_report(get<ManifoldDescriptor>(st.name, "manifold"));
      std::vector<std::string> labels, ascii, b1s, origins;
      for (const auto& e : r.entries) {
        labels.push_back(e.label);
        ascii.push_back(e.label_ascii);
        b1s.push_back(std::to_string(e.b1));
        origins.push_back(e.origin);
      }
      out.emplace_back("count", std::to_string(r.entries.size()));
      out.emplace_back("labels", join(labels));
      out.emplace_back("labels_ascii", join(ascii));
      out.emplace_back("b1", join(b1s));
      out.emplace_back("origins", join(origins));
      out.emplace_back("heterogeneous", yes_no(r.heterogeneous));
      out.emplace_back("dim4_all_tori", yes_no(r.dim4_all_tori));
    } else if (kw == "params") {
      const ParamCheck c = validate_surgery_params(params(st));
      out.emplace_back("ok", yes_no(c.ok));
      out.emplace_back("det", std::to_string(c.determinant));
      out.emplace_back("violation", c.violation.empty() ? "none" : c.violation);
      std::vector<std::string> rows;
      for (const auto& row : c.matrix) rows.push_back("[" + join_longs({row[0], row[1], row[2]}) + "]");
      out.emplace_back("matrix", "[" + join(rows) + "]");
    } else if (kw == "scan_params") {
      const long r = integer_clause(st, "range", 3);
      long tuples = 0, accepted = 0, mismatches = 0;
      bool det_ok = true;
      for (long p = -r; p <= r; ++p)
        for (long q = -r; q <= r; ++q)
          for (long a = -r; a <= r; ++a)
            for (long b = -r; b <= r; ++b) {
              ++tuples;
              const ParamCheck c = validate_surgery_params({p, q, a, b});
              const long det = p * b - a * q;
              const bool expect_ok = (det == 1 || det == -1) && (-a * q) * det > 0;
              if (c.ok != expect_ok) ++mismatches;
              if (c.ok) {
                ++accepted;
                const auto& m = c.matrix;
                const long mdet = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                                  m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                                  m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
                det_ok = det_ok && (mdet == 1 || mdet == -1);
              }
            }
      out.emplace_back("tuples", std::to_string(tuples));
      out.emplace_back("accepted", std::to_string(accepted));
      out.emplace_back("mismatches", std::to_string(mismatches));
      out.emplace_back("det_ok", yes_no(det_ok));
    } else if (kw == "classify5") {
      const long k = st.clause("k") ? integer_clause(st, "k")
                                    : surgery_rank_k(integer_clause(st, "b2"), integer_clause(st, "genus"));
      std::vector<long> torsion;
      if (const Node* t = st.clause("torsion")) torsion = integers(*t);
      out.emplace_back("k", std::to_string(k));
      out.emplace_back("result", classify_simply_connected_5(k, spin(required(st, "spin")), torsion,
                                                             bool_clause(st, "ascii", false)));
    } else if (kw == "riemann_hurwitz") {
      std::vector<long> idx;
      if (const Node* n = st.clause("indices")) idx = integers(*n);
      const RiemannHurwitz r = riemann_hurwitz_check(integer_clause(st, "cover"), integer_clause(st, "base"),
                                                     integer_clause(st, "degree"), idx);
      out.emplace_back("ok", yes_no(r.ok));
      out.emplace_back("violation", r.violation.empty() ? "none" : r.violation);
    } else if (kw == "realize") {
      const auto found = realize_branched_cover(integer_clause(st, "cover"), integer_clause(st, "base"),
                                                integer_clause(st, "max_degree", 6), integer_clause(st, "max_index", 6));
      out.emplace_back("found", yes_no(!found.empty()));
      out.emplace_back("count", std::to_string(found.size()));
      out.emplace_back("first", found.empty() ? "none"
                                              : "d=" + std::to_string(found[0].degree) + " [" +
                                                    join_longs(found[0].indices) + "]");
    } else {
      semantic(nullptr, "unhandled statement '" + kw + "'");
    }
  }

  void execute(const Statement& st) {
    stmt_ = &st;
    CommandResult cr;
    cr.line = st.line;
    cr.text = print(st);
    bool error_expected = false;
    for (const auto& [k, _] : st.expects) error_expected = error_expected || k == "error";
    const bool declaration = kDeclarations.count(st.keyword) > 0;
    try {
      dispatch(st, cr);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      if (declaration && !error_expected) {
        throw ParseError(st.line, 1, st.keyword + (st.name.empty() ? "" : " " + st.name) + ": " + e.what());
      }
      cr.error = e.what();
    }
    if (cr.status == "skipped") {
      report_.commands.push_back(std::move(cr));
      return;
    }
    bool all = true;
    for (const auto& [key, node] : st.expects) {
      Assertion a;
      a.line = st.line;
      a.key = key;
      a.expected = expected_text(node);
      if (key == "error") {
        a.actual = cr.error.empty() ? "<no error>" : cr.error;
        a.passed = !cr.error.empty() && cr.error.find(a.expected) != std::string::npos;
      } else if (!cr.error.empty()) {
        a.actual = "error: " + cr.error;
      } else if (key == "note") {
        a.actual = cr.notes.empty() ? "<no notes>" : join(cr.notes, "; ");
        for (const std::string& n : cr.notes) a.passed = a.passed || n.find(a.expected) != std::string::npos;
      } else {
        a.actual = "<missing>";
        for (const auto& [k, v] : cr.values) {
          if (k == key) a.actual = v;
        }
        a.passed = a.actual == a.expected;
      }
      all = all && a.passed;
      report_.assertions.push_back(std::move(a));
    }
    if (!st.expects.empty()) {
      cr.status = all ? "pass" : "fail";
    } else if (!cr.error.empty()) {
      cr.status = "fail";
    } else {
      cr.status = cr.notes.empty() ? "ok" : "flagged";
    }
    report_.commands.push_back(std::move(cr));
  }

  const Scenario& scenario_;
  RunOptions opts_;
  CheckOptions check_;
  Report report_;
  std::map<std::string, Entity> symbols_;
  ChartPtr chart_;
  const Statement* stmt_ = nullptr;
};

}  // namespace

int Report::failures() const {
  int n = 0;
  for (const Assertion& a : assertions) n += a.passed ? 0 : 1;
  for (const CommandResult& c : commands) {
    if (c.status == "fail" && !c.error.empty()) {
      bool asserted = false;
      for (const Assertion& a : assertions) asserted = asserted || a.line == c.line;
      if (!asserted) ++n;
    }
  }
  return n;
}

std::string Report::machine() const {
  std::ostringstream o;
  int passed = 0, flagged = 0;
  for (const Assertion& a : assertions) passed += a.passed ? 1 : 0;
  for (const CommandResult& c : commands) flagged += c.status == "flagged" ? 1 : 0;
  o << "scenario: " << scenario << "\n";
  o << "reproduces: " << (reproduces.empty() ? "-" : reproduces) << "\n";
  o << "seed: " << options.seed << "\n";
  o << "samples: " << options.samples << "\n";
  o << "tolerance: " << options.tolerance << "\n";
  o << "statements: " << commands.size() << "\n";
  o << "assertions: " << assertions.size() << "\n";
  o << "passed: " << passed << "\n";
  o << "failed: " << failures() << "\n";
  o << "flagged: " << flagged << "\n";
  o << "warnings: " << warnings.size() << "\n";
  for (const Assertion& a : assertions) {
    o << "assert.L" << a.line << "." << a.key << ": " << (a.passed ? "pass" : "fail") << "\n";
  }
  o << "status: " << (passed == static_cast<int>(assertions.size()) && failures() == 0 ? "pass" : "fail") << "\n";
  return o.str();
}

std::string Report::str() const {
  std::ostringstream o;
  o << "scenario " << scenario;
  if (!reproduces.empty()) o << " (" << reproduces << ")";
  o << "\n";
  for (const std::string& w : warnings) o << "  warning: " << w << "\n";
  for (const CommandResult& c : commands) {
    o << "  [" << c.status << "] line " << c.line << ": " << c.text << "\n";
    for (const auto& [k, v] : c.values) {
      if (k == "detail" && v.size() > 160) {
        o << "      " << k << " = " << v.substr(0, 160) << "...\n";
      } else {
        o << "      " << k << " = " << v << "\n";
      }
    }
    for (const std::string& n : c.notes) o << "      note: " << n << "\n";
    if (!c.error.empty()) o << "      error: " << c.error << "\n";
    for (const Assertion& a : assertions) {
      if (a.line != c.line || a.passed) continue;
      o << "      FAILED " << a.key << ": expected '" << a.expected << "', got '" << a.actual << "'\n";
    }
  }
  o << "---\n" << machine();
  return o.str();
}

Report run_scenario(const Scenario& s, const RunOptions& opts) { return Runner(s, opts).run(); }

Scenario parse_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ParseError(0, 0, "cannot read '" + file.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), file.stem().string());
}

Report run_file(const std::filesystem::path& file, const RunOptions& opts) { return run_scenario(parse_file(file), opts); }

}  // namespace gcx::corpus
