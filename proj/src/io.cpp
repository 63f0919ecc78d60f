#include "htnact/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace htn {

std::string Diagnostic::str(const std::string& file) const {
  std::string s = file.empty() ? "" : file + ":";
  return s + std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

namespace {

// -- lexing ------------------------------------------------------------------

struct Tok {
  enum class K { ident, punct, end };
  K k = K::end;
  std::string text;
  int line = 0;
  int col = 0;
};

struct ParseFail {
  Diagnostic d;
};

bool ident_start(unsigned char c) { return std::isalnum(c) || c == '_'; }
bool ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '@' || c == '.' || c == '-' || c == '\'' || c == '#';
}

/// Tokens of one line; the trailing end token carries the column past the
/// last character. '#' at a token boundary starts a comment.
std::vector<Tok> lex_line(const std::string& s, int line) {
  std::vector<Tok> out;
  std::size_t i = 0;
  auto col = [&](std::size_t at) { return static_cast<int>(at) + 1; };
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') break;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::K::ident, s.substr(i, j - i), line, col(i)});
      i = j;
      continue;
    }
    if (c == '!' && i + 1 < s.size() && s[i + 1] == '=') {
      out.push_back({Tok::K::punct, "!=", line, col(i)});
      i += 2;
      continue;
    }
    if (std::string("(),:[]!=;|").find(static_cast<char>(c)) != std::string::npos) {
      out.push_back({Tok::K::punct, std::string(1, static_cast<char>(c)), line, col(i)});
      ++i;
      continue;
    }
    if (s.compare(i, 2, "\xC2\xAC") == 0) {  // ¬
      out.push_back({Tok::K::punct, "!", line, col(i)});
      i += 2;
      continue;
    }
    if (s.compare(i, 3, "\xE2\x88\xA8") == 0) {  // ∨
      out.push_back({Tok::K::punct, "|", line, col(i)});
      i += 3;
      continue;
    }
    std::ostringstream msg;
    if (c >= 0x20 && c < 0x7f)
      msg << "unexpected character '" << static_cast<char>(c) << "'";
    else
      msg << "unexpected byte 0x" << std::hex << static_cast<int>(c);
    throw ParseFail{{line, col(i), msg.str()}};
  }
  out.push_back({Tok::K::end, "", line, col(s.size())});
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(std::move(cur));
  return lines;
}

// -- parsing -----------------------------------------------------------------

bool is_variable_name(const std::string& s) {
  return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

bool is_constraint_keyword(const std::string& s) {
  return s == "ord" || s == "before" || s == "after" || s == "between";
}

class Cursor {
 public:
  explicit Cursor(std::vector<Tok> toks) : t_(std::move(toks)) {}

  const Tok& peek(std::size_t k = 0) const { return t_[std::min(i_ + k, t_.size() - 1)]; }
  bool at_end() const { return peek().k == Tok::K::end; }
  bool is(const std::string& text, std::size_t k = 0) const {
    return peek(k).k != Tok::K::end && peek(k).text == text;
  }
  bool accept(const std::string& text) {
    if (!is(text)) return false;
    ++i_;
    return true;
  }
  void expect(const std::string& text) {
    if (!accept(text)) fail("expected '" + text + "'");
  }
  std::string ident(const std::string& what) {
    if (peek().k != Tok::K::ident) fail("expected " + what);
    return t_[i_++].text;
  }
  void expect_end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Tok& k = peek();
    std::string found = k.k == Tok::K::end ? "end of line" : "'" + k.text + "'";
    throw ParseFail{{k.line, k.col, msg + (msg.rfind("unexpected", 0) == 0 ? "" : ", found " + found)}};
  }
  bool contains(const std::string& text) const {
    for (const auto& k : t_)
      if (k.k != Tok::K::end && k.text == text) return true;
    return false;
  }
  const Tok& at(std::size_t i) const { return t_[i]; }
  std::size_t size() const { return t_.size(); }

 private:
  std::vector<Tok> t_;
  std::size_t i_ = 0;
};

Term parse_term(Cursor& c) {
  std::string name = c.ident("a term");
  return is_variable_name(name) ? Term::var(std::move(name)) : Term::constant(std::move(name));
}

std::vector<Term> parse_args(Cursor& c) {
  std::vector<Term> args;
  if (!c.accept("(")) return args;
  if (c.accept(")")) return args;
  do args.push_back(parse_term(c));
  while (c.accept(","));
  c.expect(")");
  return args;
}

Task parse_task(Cursor& c) {
  Task t;
  t.symbol = c.ident("a task symbol");
  t.args = parse_args(c);
  return t;
}

Atom parse_atom(Cursor& c) {
  Atom a;
  a.predicate = c.ident("a predicate");
  a.args = parse_args(c);
  return a;
}

Literal parse_literal(Cursor& c) {
  bool positive = true;
  while (c.accept("!") || (c.is("not") && !is_constraint_keyword(c.peek(1).text) && c.accept("not")))
    positive = !positive;
  if (c.peek().k == Tok::K::ident && (c.is("=", 1) || c.is("!=", 1))) {
    Term l = parse_term(c);
    if (c.accept("!=")) positive = !positive;
    else c.expect("=");
    Term r = parse_term(c);
    return {positive, {kEqualityPredicate, {std::move(l), std::move(r)}}};
  }
  return {positive, parse_atom(c)};
}

TaskRef parse_ref(Cursor& c) {
  if ((c.is("first") || c.is("last")) && c.is("[", 1)) {
    const bool first = c.ident("first or last") == "first";
    c.expect("[");
    LabelSet labels;
    if (!c.is("]")) {
      do labels.insert(TaskLabel(c.ident("a task label")));
      while (c.accept(","));
    }
    c.expect("]");
    return first ? TaskRef::first(std::move(labels)) : TaskRef::last(std::move(labels));
  }
  return TaskRef::plain(TaskLabel(c.ident("a task label")));
}

Constraint parse_constraint(Cursor& c) {
  bool neg = false;
  while (c.accept("not")) neg = !neg;
  const std::string kw = c.ident("ord, before, after or between");
  if (kw == "ord") {
    TaskRef x = parse_ref(c);
    TaskRef y = parse_ref(c);
    return Constraint::order(std::move(x), std::move(y), neg);
  }
  if (kw == "before") {
    Literal l = parse_literal(c);
    return Constraint::before(std::move(l), parse_ref(c), neg);
  }
  if (kw == "after") {
    TaskRef x = parse_ref(c);
    return Constraint::after(std::move(x), parse_literal(c), neg);
  }
  if (kw == "between") {
    TaskRef x = parse_ref(c);
    Literal l = parse_literal(c);
    return Constraint::between(std::move(x), std::move(l), parse_ref(c), neg);
  }
  throw ParseFail{{c.at(0).line, c.at(0).col, "unknown constraint '" + kw + "'"}};
}

/// constraint { (';' | 'and') constraint }, or `true`.
void parse_constraint_line(Cursor& c, Formula& phi) {
  if (c.contains("|") || c.contains("or"))
    c.fail("disjunctive formulas are not supported; give one conjunct per line");
  if (c.accept("true")) {
    c.expect_end();
    return;
  }
  do phi.insert(parse_constraint(c));
  while (c.accept(";") || c.accept("and"));
  c.expect_end();
}

template <class F>
void comma_list(Cursor& c, F item) {
  if (c.at_end()) return;
  do item();
  while (c.accept(","));
  c.expect_end();
}

void parse_labelled_tasks(Cursor& c, TaskSet& tasks) {
  comma_list(c, [&] {
    const Tok at = c.peek();
    TaskLabel n(c.ident("a task label"));
    c.expect(":");
    Task t = parse_task(c);
    if (!tasks.emplace(n, std::move(t)).second)
      throw ParseFail{{at.line, at.col, "duplicate task label " + n.name}};
  });
}

/// Runs `f` on each line's cursor; collects one diagnostic per failing line.
template <class F>
void for_each_line(const std::string& text, std::vector<Diagnostic>& diags, F f) {
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      Cursor c(lex_line(lines[i], static_cast<int>(i) + 1));
      if (c.at_end()) continue;
      f(c);
    } catch (const ParseFail& e) {
      diags.push_back(e.d);
    }
  }
}

}  // namespace

Parsed<Domain> parse_domain(const std::string& text) {
  Parsed<Domain> out;
  Domain D;
  bool named = false;
  enum class Block { none, op, method, method_constraints } block = Block::none;
  std::string op_name;
  std::map<std::string, int> method_line;

  for_each_line(text, out.diagnostics, [&](Cursor& c) {
    const Tok head = c.peek();
    if (block == Block::method_constraints && head.k == Tok::K::ident &&
        (head.text == "not" || is_constraint_keyword(head.text) || head.text == "true")) {
      parse_constraint_line(c, D.methods.back().body.formula);
      return;
    }
    if (head.k != Tok::K::ident) c.fail("unexpected '" + head.text + "'");
    const std::string kw = c.ident("a declaration");
    if (kw == "domain") {
      if (named) c.fail("unexpected second domain declaration");
      D.name = c.ident("a domain name");
      named = true;
      c.expect_end();
      block = Block::none;
    } else if (kw == "operator") {
      Operator op;
      op.head = parse_task(c);
      c.expect_end();
      op_name = op.head.symbol;
      if (op_name != kNopSymbol && D.operators.count(op_name))
        throw ParseFail{{head.line, head.col, "duplicate operator " + op_name}};
      D.operators[op_name] = std::move(op);
      block = Block::op;
    } else if (kw == "pre" || kw == "add" || kw == "del") {
      if (block != Block::op) c.fail("unexpected '" + kw + "' outside an operator");
      c.expect(":");
      Operator& op = D.operators[op_name];
      if (kw == "pre")
        comma_list(c, [&] { op.pre.push_back(parse_literal(c)); });
      else
        comma_list(c, [&] { (kw == "add" ? op.add : op.del).push_back(parse_atom(c)); });
    } else if (kw == "method") {
      Method m;
      m.name = c.ident("a method name");
      method_line[m.name] = head.line;
      m.head = parse_task(c);
      c.expect_end();
      D.methods.push_back(std::move(m));
      block = Block::method;
    } else if (kw == "tasks") {
      if (block == Block::none || block == Block::op) c.fail("unexpected 'tasks' outside a method");
      c.expect(":");
      parse_labelled_tasks(c, D.methods.back().body.tasks);
    } else if (kw == "constraints") {
      if (block == Block::none || block == Block::op)
        c.fail("unexpected 'constraints' outside a method");
      c.expect(":");
      block = Block::method_constraints;
      if (!c.at_end()) parse_constraint_line(c, D.methods.back().body.formula);
    } else {
      throw ParseFail{{head.line, head.col, "unexpected '" + kw + "'"}};
    }
  });
  if (!named) out.diagnostics.push_back({1, 1, "no domain declared"});
  if (!out.diagnostics.empty()) return out;
  for (const auto& m : append_trailing_nops(D))
    out.warnings.push_back({method_line[m], 1, "method " + m + " has no trailing task; appended " + m + ".end:nop"});
  out.value = std::move(D);
  return out;
}

Parsed<Problem> parse_problem(const std::string& text) {
  Parsed<Problem> out;
  Problem p;
  bool in_constraints = false;
  for_each_line(text, out.diagnostics, [&](Cursor& c) {
    const Tok head = c.peek();
    if (in_constraints && head.k == Tok::K::ident &&
        (head.text == "not" || is_constraint_keyword(head.text) || head.text == "true")) {
      parse_constraint_line(c, p.network.formula);
      return;
    }
    in_constraints = false;
    const std::string kw = c.ident("a declaration");
    if (kw == "problem") {
      p.name = c.ident("a problem name");
      c.expect_end();
    } else if (kw == "init") {
      c.expect(":");
      comma_list(c, [&] {
        const Tok at = c.peek();
        Atom a = parse_atom(c);
        if (!is_ground(a))
          throw ParseFail{{at.line, at.col, "initial state atom " + to_string(a) + " is not ground"}};
        p.init.insert(std::move(a));
      });
    } else if (kw == "tasks") {
      c.expect(":");
      parse_labelled_tasks(c, p.network.tasks);
    } else if (kw == "constraints") {
      c.expect(":");
      in_constraints = true;
      if (!c.at_end()) parse_constraint_line(c, p.network.formula);
    } else {
      throw ParseFail{{head.line, head.col, "unexpected '" + kw + "'"}};
    }
  });
  if (out.diagnostics.empty()) out.value = std::move(p);
  return out;
}

namespace {

std::vector<ObservedTask> parse_observed(Cursor& c, const Domain* D) {
  std::vector<ObservedTask> out;
  comma_list(c, [&] {
    const Tok at = c.peek();
    ObservedTask o;
    if (c.peek().k == Tok::K::ident && c.is(":", 1)) {
      o.label = c.ident("a task label");
      c.expect(":");
    }
    o.task = parse_task(c);
    if (!is_ground(o.task))
      throw ParseFail{{at.line, at.col, "observed task " + to_string(o.task) + " is not ground"}};
    if (D && !D->is_primitive(o.task) && !D->has_methods(o.task.symbol))
      throw ParseFail{{at.line, at.col, "unknown task symbol '" + o.task.symbol + "'"}};
    out.push_back(std::move(o));
  });
  return out;
}

}  // namespace

Parsed<Scenario> parse_scenario(const std::string& text, const Domain* D) {
  Parsed<Scenario> out;
  Scenario s;
  for_each_line(text, out.diagnostics, [&](Cursor& c) {
    const Tok at = c.peek();
    const std::string n = c.ident("an iteration number");
    std::size_t iteration = 0;
    if (n.empty() || n.size() > 9 || n.find_first_not_of("0123456789") != std::string::npos)
      throw ParseFail{{at.line, at.col, "expected an iteration number, found '" + n + "'"}};
    iteration = static_cast<std::size_t>(std::stoul(n));
    c.expect(":");
    auto tasks = parse_observed(c, D);
    auto& slot = s.events[iteration];
    slot.insert(slot.end(), tasks.begin(), tasks.end());
  });
  if (out.diagnostics.empty()) out.value = std::move(s);
  return out;
}

Parsed<std::vector<ObservedTask>> parse_task_list(const std::string& text) {
  Parsed<std::vector<ObservedTask>> out;
  try {
    Cursor c(lex_line(text, 1));
    out.value = parse_observed(c, nullptr);
  } catch (const ParseFail& e) {
    out.diagnostics.push_back(e.d);
  }
  return out;
}

Parsed<std::vector<Directive>> parse_script(const std::string& text) {
  Parsed<std::vector<Directive>> out;
  std::vector<Directive> script;
  for_each_line(text, out.diagnostics, [&](Cursor& c) {
    const Tok at = c.peek();
    Directive d;
    d.line = at.line;
    const std::string kw = c.ident("act, reduce or replace");
    if (kw == "act") {
      d.kind = Directive::Kind::act;
      d.label = c.ident("a task label");
    } else if (kw == "reduce") {
      d.kind = Directive::Kind::reduce;
      d.label = c.ident("a task label");
      d.method = c.ident("a method name");
    } else if (kw == "replace") {
      d.kind = Directive::Kind::replace;
      d.label = c.ident("a task label");
      if (!c.at_end()) d.method = c.ident("a method name");
    } else {
      throw ParseFail{{at.line, at.col, "unknown directive '" + kw + "'"}};
    }
    c.expect_end();
    script.push_back(std::move(d));
  });
  if (out.diagnostics.empty()) out.value = std::move(script);
  return out;
}

// -- printing ----------------------------------------------------------------

namespace {

template <class T, class F>
std::string join(const T& xs, F f, const char* sep = ", ") {
  std::string s;
  for (const auto& x : xs) {
    if (!s.empty()) s += sep;
    s += f(x);
  }
  return s;
}

std::string print_tasks(const TaskSet& tasks) {
  return join(tasks, [](const auto& kv) { return kv.first.name + ":" + to_string(kv.second); });
}

void print_formula(std::ostringstream& os, const Formula& phi, const char* indent) {
  if (phi.empty()) return;
  os << indent << "constraints:\n";
  for (const auto& c : phi) os << indent << "  " << to_string(c) << "\n";
}

}  // namespace

std::string print_domain(const Domain& D) {
  std::ostringstream os;
  os << "domain " << D.name << "\n";
  for (const auto& [name, op] : D.operators) {
    if (name == kNopSymbol && op == Operator{Task{kNopSymbol, {}}, {}, {}, {}}) continue;
    os << "\noperator " << to_string(op.head) << "\n";
    if (!op.pre.empty()) os << "  pre: " << join(op.pre, [](const Literal& l) { return to_string(l); }) << "\n";
    if (!op.add.empty()) os << "  add: " << join(op.add, [](const Atom& a) { return to_string(a); }) << "\n";
    if (!op.del.empty()) os << "  del: " << join(op.del, [](const Atom& a) { return to_string(a); }) << "\n";
  }
  for (const auto& m : D.methods) {
    os << "\nmethod " << m.name << " " << to_string(m.head) << "\n";
    if (!m.body.tasks.empty()) os << "  tasks: " << print_tasks(m.body.tasks) << "\n";
    print_formula(os, m.body.formula, "  ");
  }
  return os.str();
}

std::string print_problem(const Problem& p) {
  std::ostringstream os;
  if (!p.name.empty()) os << "problem " << p.name << "\n";
  os << "init: " << join(p.init, [](const Atom& a) { return to_string(a); }) << "\n";
  if (!p.network.tasks.empty()) os << "tasks: " << print_tasks(p.network.tasks) << "\n";
  print_formula(os, p.network.formula, "");
  return os.str();
}

std::string print_scenario(const Scenario& s) {
  std::ostringstream os;
  for (const auto& [i, tasks] : s.events) {
    os << i << ": "
       << join(tasks, [](const ObservedTask& o) {
            return (o.label.empty() ? "" : o.label + ":") + to_string(o.task);
          })
       << "\n";
  }
  return os.str();
}

std::string print_script(const std::vector<Directive>& s) {
  std::ostringstream os;
  for (const auto& d : s) {
    switch (d.kind) {
      case Directive::Kind::act: os << "act " << d.label; break;
      case Directive::Kind::reduce: os << "reduce " << d.label << " " << d.method; break;
      case Directive::Kind::replace:
        os << "replace " << d.label << (d.method.empty() ? "" : " " + d.method);
        break;
    }
    os << "\n";
  }
  return os.str();
}

ScheduledEvents to_events(const Scenario& s) { return ScheduledEvents(s.events); }

// -- export ------------------------------------------------------------------

namespace {

using ojson = nlohmann::ordered_json;

ojson strings(const std::vector<std::string>& xs) {
  ojson a = ojson::array();
  for (const auto& x : xs) a.push_back(x);
  return a;
}

ojson state_json(const State& s) {
  std::vector<std::string> xs;
  for (const auto& a : s) xs.push_back(to_string(a));
  return strings(xs);
}

ojson network_json(const TaskNetwork& d) {
  ojson j;
  std::vector<std::string> tasks, phi;
  for (const auto& [n, t] : d.tasks) tasks.push_back(n.name + ":" + to_string(t));
  for (const auto& c : d.formula) phi.push_back(to_string(c));
  j["tasks"] = strings(tasks);
  j["formula"] = strings(phi);
  return j;
}

ojson couples_json(const CoupleSet& R) {
  ojson a = ojson::array();
  for (const auto& [o, c] : R) {
    ojson j;
    j["origin"] = o.name;
    std::vector<std::string> pursued, alts;
    for (const auto& n : c.pursued) pursued.push_back(n.name);
    for (const auto& alt : c.alternatives) alts.push_back(alt.method);
    j["pursued"] = strings(pursued);
    j["alternatives"] = strings(alts);
    a.push_back(std::move(j));
  }
  return a;
}

ojson binding_json(const Substitution& theta) {
  ojson j = ojson::object();
  for (const auto& [v, t] : theta) j[v] = t.name;
  return j;
}

ojson config_json(const Configuration& c, const ExportOptions& opt) {
  ojson j;
  j["state"] = state_json(c.state);
  if (opt.full_configurations) {
    j["network"] = network_json(c.network);
    j["couples"] = couples_json(c.couples);
  }
  return j;
}

}  // namespace

std::string export_trace(const Trace& t, const ExportOptions& opt) {
  ojson doc;
  doc["format"] = "htnact-trace";
  doc["version"] = 1;
  doc["initial"] = config_json(t.initial, opt);
  ojson steps = ojson::array();
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& s = t.steps[i].step;
    const Configuration& before = t.before(i);
    const Configuration& after = t.steps[i].config;
    ojson j;
    j["index"] = i + 1;
    j["kind"] = to_string(s.kind);
    switch (s.kind) {
      case Step::Kind::action:
        j["label"] = s.label.name;
        j["task"] = to_string(s.task);
        j["binding"] = binding_json(s.binding);
        break;
      case Step::Kind::reduction:
        j["label"] = s.label.name;
        j["task"] = to_string(s.task);
        j["method"] = s.method;
        break;
      case Step::Kind::replacement:
        j["label"] = s.label.name;
        j["method"] = s.method;
        j["complete"] = s.complete;
        j["jump"] = s.jump;
        break;
      case Step::Kind::observation: {
        std::vector<std::string> xs;
        for (const auto& lt : s.observed) xs.push_back(to_string(lt));
        j["observed"] = strings(xs);
        break;
      }
      case Step::Kind::initial: break;
    }
    std::vector<std::string> added, removed;
    for (const auto& a : after.state)
      if (!before.state.count(a)) added.push_back(to_string(a));
    for (const auto& a : before.state)
      if (!after.state.count(a)) removed.push_back(to_string(a));
    j["state_delta"] = {{"added", strings(added)}, {"removed", strings(removed)}};
    if (opt.full_configurations) {
      j["network"] = network_json(after.network);
      j["couples"] = couples_json(after.couples);
    }
    j["status"] = to_string(classify(after));
    steps.push_back(std::move(j));
  }
  doc["steps"] = std::move(steps);

  const Freedom f = freedom_predicates(t);
  ojson summary;
  summary["length"] = t.size();
  summary["status"] = to_string(classify(t));
  std::vector<std::string> acts, labels;
  for (const auto& a : actions_performed(t)) acts.push_back(to_string(a));
  for (const auto& n : action_labels(t)) labels.push_back(n.name);
  summary["actions"] = strings(acts);
  summary["action_labels"] = strings(labels);
  summary["complete_replacement_free"] = f.complete_replacement_free;
  summary["partial_replacement_free"] = f.partial_replacement_free;
  summary["jump_free"] = f.jump_free;
  summary["final_state"] = state_json(t.last().state);
  doc["summary"] = std::move(summary);
  return doc.dump(2) + "\n";
}

std::string export_plans(const std::set<Plan>& plans) {
  ojson a = ojson::array();
  for (const auto& p : plans) {
    ojson plan = ojson::array();
    for (const auto& lt : p) plan.push_back({{"label", lt.label.name}, {"task", to_string(lt.task)}});
    a.push_back(std::move(plan));
  }
  return a.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace htn
