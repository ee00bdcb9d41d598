#include "vcsp/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "vcsp/error.hpp"

namespace vcsp::io {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

std::string format_tuple(const Tuple& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + std::to_string(t[i]);
  return s;
}

namespace {

// Tokenized non-empty lines with their 1-based line numbers; '#' starts a comment.
struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

class Reader {
 public:
  Reader(const std::string& text, std::string source) : lines_(tokenize(text)), source_(std::move(source)) {}

  bool done() const { return pos_ >= lines_.size(); }
  const Line& peek() const { return lines_[pos_]; }
  const Line& next() {
    if (done()) fail_eof();
    return lines_[pos_++];
  }

  [[noreturn]] void fail(const Line& l, const std::string& msg) const {
    throw InputError(source_ + ":" + std::to_string(l.number) + ": " + msg);
  }
  [[noreturn]] void fail_eof() const { throw InputError(source_ + ": unexpected end of file"); }

  long long integer(const Line& l, const std::string& tok) const {
    long long v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) fail(l, "expected an integer, got '" + tok + "'");
    return v;
  }
  ExtRat value(const Line& l, const std::string& tok) const {
    try {
      return ExtRat::parse(tok);
    } catch (const InputError& e) {
      fail(l, e.what());
    }
  }
  Rational rational(const Line& l, const std::string& tok) const {
    try {
      return Rational::parse(tok);
    } catch (const InputError& e) {
      fail(l, e.what());
    }
  }
  void expect_count(const Line& l, std::size_t n, const std::string& what) const {
    if (l.tokens.size() != n) fail(l, what + " expects " + std::to_string(n - 1) + " fields");
  }

 private:
  std::vector<Line> lines_;
  std::string source_;
  std::size_t pos_ = 0;
};

}  // namespace

Instance parse_instance(const std::string& text, const std::string& source) {
  Reader r(text, source);
  const Line& head = r.next();
  if (head.tokens[0] != "vcsp") r.fail(head, "expected header 'vcsp <domain_size> <num_vars>'");
  r.expect_count(head, 3, "header");
  const long long d = r.integer(head, head.tokens[1]);
  const long long n = r.integer(head, head.tokens[2]);
  if (d < 1 || d > 1000) r.fail(head, "domain size out of range");
  if (n < 0 || n > 100000000) r.fail(head, "number of variables out of range");
  Instance inst{int(n), int(d)};

  while (!r.done()) {
    const Line& l = r.next();
    const std::string& kw = l.tokens[0];
    if (kw == "relation") {
      r.expect_count(l, 3, "relation");
      const std::string name = l.tokens[1];
      const long long arity = r.integer(l, l.tokens[2]);
      if (arity < 1 || arity > 16) r.fail(l, "relation arity out of range");
      if (inst.find_relation(name)) r.fail(l, "duplicate relation name '" + name + "'");
      std::uint64_t size = 0;
      try {
        size = power(std::uint64_t(d), int(arity));
      } catch (const ResourceError&) {
        r.fail(l, "relation table too large");
      }
      if (size > (std::uint64_t(1) << 26)) r.fail(l, "relation table too large");
      std::vector<std::optional<ExtRat>> entries(size);
      std::optional<ExtRat> fallback;
      bool closed = false;
      while (!closed) {
        const Line& e = r.next();
        if (e.tokens[0] == "end") {
          r.expect_count(e, 1, "end");
          closed = true;
        } else if (e.tokens[0] == "default") {
          r.expect_count(e, 2, "default");
          if (fallback) r.fail(e, "duplicate default");
          fallback = r.value(e, e.tokens[1]);
        } else {
          r.expect_count(e, std::size_t(arity) + 1, "tuple line");
          Tuple t(arity);
          for (int i = 0; i < arity; ++i) {
            const long long v = r.integer(e, e.tokens[i]);
            if (v < 0 || v >= d) r.fail(e, "tuple entry " + e.tokens[i] + " outside the domain");
            t[i] = int(v);
          }
          auto& slot = entries[tuple_index(t, int(d))];
          if (slot) r.fail(e, "tuple listed twice");
          slot = r.value(e, e.tokens[arity]);
        }
      }
      std::vector<ExtRat> table;
      table.reserve(size);
      for (std::uint64_t i = 0; i < size; ++i) {
        if (entries[i])
          table.push_back(*entries[i]);
        else if (fallback)
          table.push_back(*fallback);
        else
          r.fail(l, "relation '" + name + "' leaves tuple (" + format_tuple(tuple_at(i, int(arity), int(d))) +
                        ") unlisted and has no default");
      }
      inst.add_relation(WeightedRelation(int(arity), int(d), std::move(table)), name);
    } else if (kw == "constraint") {
      if (l.tokens.size() < 2) r.fail(l, "constraint needs a relation name");
      auto id = inst.find_relation(l.tokens[1]);
      if (!id) r.fail(l, "unknown relation '" + l.tokens[1] + "'");
      const int arity = inst.relation(*id).arity();
      std::size_t fields = l.tokens.size() - 2;
      std::int64_t mult = 1;
      if (fields >= 2 && l.tokens[l.tokens.size() - 2] == "*") {
        mult = r.integer(l, l.tokens.back());
        if (mult < 1) r.fail(l, "multiplicity must be positive");
        fields -= 2;
      }
      if (fields != std::size_t(arity))
        r.fail(l, "relation '" + l.tokens[1] + "' has arity " + std::to_string(arity) + ", got " +
                      std::to_string(fields) + " variables");
      std::vector<int> scope;
      for (std::size_t i = 0; i < fields; ++i) {
        const long long v = r.integer(l, l.tokens[2 + i]);
        if (v < 0 || v >= n) r.fail(l, "variable " + l.tokens[2 + i] + " out of range");
        scope.push_back(int(v));
      }
      inst.add_constraint(*id, std::move(scope), mult);
    } else {
      r.fail(l, "unexpected '" + kw + "'");
    }
  }
  return inst;
}

std::string format_instance(const Instance& inst) {
  std::ostringstream os;
  os << "vcsp " << inst.domain_size() << ' ' << inst.num_vars() << '\n';
  for (std::size_t r = 0; r < inst.relations().size(); ++r) {
    const auto& rel = inst.relations()[r];
    os << "relation " << inst.relation_names()[r] << ' ' << rel.arity() << '\n';
    // Most frequent value, ties to the earliest first occurrence.
    std::vector<std::pair<ExtRat, std::size_t>> counts;
    for (const auto& e : rel.table()) {
      auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& p) { return p.first == e; });
      if (it == counts.end())
        counts.emplace_back(e, 1);
      else
        ++it->second;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < counts.size(); ++i)
      if (counts[i].second > counts[best].second) best = i;
    const ExtRat& fallback = counts[best].first;
    for (std::uint64_t i = 0; i < rel.size(); ++i)
      if (rel[i] != fallback)
        os << format_tuple(tuple_at(i, rel.arity(), rel.domain_size())) << ' ' << rel[i].str() << '\n';
    os << "default " << fallback.str() << "\nend\n";
  }
  for (const auto& c : inst.constraints()) {
    os << "constraint " << inst.relation_names()[c.relation];
    for (int v : c.scope) os << ' ' << v;
    if (c.multiplicity != 1) os << " * " << c.multiplicity;
    os << '\n';
  }
  return os.str();
}

std::vector<NamedOperation> parse_operations(const std::string& text, const std::string& source) {
  Reader r(text, source);
  std::vector<NamedOperation> out;
  while (!r.done()) {
    const Line& l = r.next();
    if (l.tokens[0] != "op") r.fail(l, "expected 'op <name> <arity> <domain_size>'");
    r.expect_count(l, 4, "op");
    const long long m = r.integer(l, l.tokens[2]);
    const long long d = r.integer(l, l.tokens[3]);
    if (m < 1 || m > 12 || d < 1 || d > 64) r.fail(l, "operation arity or domain out of range");
    const std::uint64_t size = power(std::uint64_t(d), int(m));
    if (size > (std::uint64_t(1) << 24)) r.fail(l, "operation table too large");
    std::vector<int> table(size, -1);
    while (true) {
      const Line& e = r.next();
      if (e.tokens[0] == "end") break;
      r.expect_count(e, std::size_t(m) + 1, "operation line");
      Tuple t(m);
      for (int i = 0; i <= m; ++i) {
        const long long v = r.integer(e, e.tokens[i]);
        if (v < 0 || v >= d) r.fail(e, "value " + e.tokens[i] + " outside the domain");
        if (i < m) t[i] = int(v);
      }
      auto& slot = table[tuple_index(t, int(d))];
      if (slot >= 0) r.fail(e, "tuple listed twice");
      slot = int(r.integer(e, e.tokens[m]));
    }
    for (std::uint64_t i = 0; i < size; ++i)
      if (table[i] < 0)
        r.fail(l, "operation '" + l.tokens[1] + "' misses tuple (" + format_tuple(tuple_at(i, int(m), int(d))) + ")");
    out.push_back({l.tokens[1], Operation(int(m), int(d), std::move(table))});
  }
  return out;
}

std::string format_operation(const std::string& name, const Operation& op) {
  std::ostringstream os;
  os << "op " << name << ' ' << op.arity() << ' ' << op.domain_size() << '\n';
  for (std::uint64_t i = 0; i < op.table().size(); ++i)
    os << format_tuple(tuple_at(i, op.arity(), op.domain_size())) << ' ' << op.table()[i] << '\n';
  os << "end\n";
  return os.str();
}

sa::SaSolution parse_solution(const std::string& text, const std::string& source) {
  Reader r(text, source);
  const Line& head = r.next();
  if (head.tokens[0] != "sa") r.fail(head, "expected header 'sa <domain_size>'");
  r.expect_count(head, 2, "header");
  const long long d = r.integer(head, head.tokens[1]);
  if (d < 1 || d > 1000) r.fail(head, "domain size out of range");
  // Entries grouped by sorted scope, in first-appearance order.
  std::vector<sa::Scope> order;
  std::map<sa::Scope, std::vector<Rational>> dists;
  while (!r.done()) {
    const Line& l = r.next();
    if (l.tokens[0] != "lambda") r.fail(l, "expected 'lambda <vars> | <labels> = <value>'");
    auto bar = std::find(l.tokens.begin(), l.tokens.end(), "|");
    auto eq = std::find(l.tokens.begin(), l.tokens.end(), "=");
    if (bar == l.tokens.end() || eq == l.tokens.end() || eq < bar || eq + 2 != l.tokens.end())
      r.fail(l, "malformed lambda line");
    const std::size_t width = std::size_t(bar - l.tokens.begin()) - 1;
    if (width == 0 || std::size_t(eq - bar) - 1 != width) r.fail(l, "scope and assignment lengths differ");
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < width; ++i) {
      const long long v = r.integer(l, l.tokens[1 + i]);
      const long long a = r.integer(l, *(bar + 1 + std::ptrdiff_t(i)));
      if (v < 0) r.fail(l, "negative variable index");
      if (a < 0 || a >= d) r.fail(l, "label outside the domain");
      pairs.emplace_back(int(v), int(a));
    }
    std::sort(pairs.begin(), pairs.end());
    sa::Scope scope;
    Tuple labels;
    for (auto [v, a] : pairs) {
      if (!scope.empty() && scope.back() == v) r.fail(l, "variable repeated in a scope");
      scope.push_back(v);
      labels.push_back(a);
    }
    auto [it, inserted] = dists.try_emplace(scope);
    if (inserted) {
      it->second.assign(power(std::uint64_t(d), int(width)), Rational(0));
      order.push_back(scope);
    }
    auto& slot = it->second[tuple_index(labels, int(d))];
    if (!slot.is_zero()) r.fail(l, "entry listed twice");
    slot = r.rational(l, eq[1]);
  }
  sa::SaSolution out{int(d)};
  for (auto& s : order) out.set(s, std::move(dists[s]));
  return out;
}

void write_solution(std::ostream& os, const sa::SaSolution& lambda) {
  const int d = lambda.domain_size();
  os << "sa " << d << '\n';
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const auto& scope = lambda.scopes()[i];
    const auto& dist = lambda.distribution(i);
    std::string vars;
    for (int v : scope) vars += ' ' + std::to_string(v);
    for (std::uint64_t s = 0; s < dist.size(); ++s) {
      if (dist[s].is_zero()) continue;
      os << "lambda" << vars << " | " << format_tuple(tuple_at(s, int(scope.size()), d)) << " = " << dist[s].str()
         << '\n';
    }
  }
}

std::string format_solution(const sa::SaSolution& lambda) {
  std::ostringstream os;
  write_solution(os, lambda);
  return os.str();
}

lp::LinearProgram parse_lp(const std::string& text, const std::string& source) {
  Reader r(text, source);
  const Line& head = r.next();
  if (head.tokens[0] != "lp") r.fail(head, "expected header 'lp <num_vars>'");
  r.expect_count(head, 2, "header");
  const long long n = r.integer(head, head.tokens[1]);
  if (n < 0 || n > 10000000) r.fail(head, "number of variables out of range");
  lp::LinearProgram prog{int(n)};
  bool ended = false;
  while (!r.done()) {
    const Line& l = r.next();
    const std::string& kw = l.tokens[0];
    if (ended) r.fail(l, "content after 'end'");
    if (kw == "min") {
      r.expect_count(l, std::size_t(n) + 1, "min");
      for (int j = 0; j < n; ++j) prog.set_objective(j, r.rational(l, l.tokens[1 + j]));
    } else if (kw == "row") {
      r.expect_count(l, std::size_t(n) + 3, "row");
      std::vector<std::pair<int, Rational>> terms;
      for (int j = 0; j < n; ++j) terms.emplace_back(j, r.rational(l, l.tokens[1 + j]));
      const std::string& s = l.tokens[1 + n];
      lp::Sense sense;
      if (s == "<=")
        sense = lp::Sense::LessEqual;
      else if (s == "=")
        sense = lp::Sense::Equal;
      else if (s == ">=")
        sense = lp::Sense::GreaterEqual;
      else
        r.fail(l, "unknown sense '" + s + "'");
      prog.add_row(std::move(terms), sense, r.rational(l, l.tokens[2 + n]));
    } else if (kw == "bound") {
      r.expect_count(l, 4, "bound");
      const long long j = r.integer(l, l.tokens[1]);
      if (j < 0 || j >= n) r.fail(l, "bound variable out of range");
      const std::string& lo = l.tokens[2];
      const std::string& hi = l.tokens[3];
      prog.set_lower(int(j), lo == "-inf" ? std::nullopt : std::optional<Rational>(r.rational(l, lo)));
      prog.set_upper(int(j), hi == "inf" ? std::nullopt : std::optional<Rational>(r.rational(l, hi)));
    } else if (kw == "end") {
      ended = true;
    } else {
      r.fail(l, "unexpected '" + kw + "'");
    }
  }
  return prog;
}

std::string format_lp(const lp::LinearProgram& prog) {
  std::ostringstream os;
  const int n = prog.num_vars();
  os << "lp " << n << "\nmin";
  for (const auto& c : prog.objective()) os << ' ' << c.str();
  os << '\n';
  for (const auto& row : prog.rows()) {
    std::vector<Rational> dense(n);
    for (const auto& [j, a] : row.terms) dense[j] = a;
    os << "row";
    for (const auto& a : dense) os << ' ' << a.str();
    os << (row.sense == lp::Sense::LessEqual ? " <= " : row.sense == lp::Sense::Equal ? " = " : " >= ")
       << row.rhs.str() << '\n';
  }
  for (int j = 0; j < n; ++j) {
    const auto& lo = prog.lower()[j];
    const auto& hi = prog.upper()[j];
    if (lo && lo->is_zero() && !hi) continue;
    os << "bound " << j << ' ' << (lo ? lo->str() : "-inf") << ' ' << (hi ? hi->str() : "inf") << '\n';
  }
  os << "end\n";
  return os.str();
}

}  // namespace vcsp::io
