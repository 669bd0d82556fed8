#include "noether/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace noether {

namespace {

enum class Variance { lower, upper, any };

struct LabelUse {
  IndexLabel label;
  Variance variance;
  std::size_t pos;
};

struct SymFactor {
  enum class Kind { field, coord, metric, delta };
  Kind kind;
  std::string name;              // field name
  std::vector<LabelUse> labels;  // derivative slots for fields, index slots otherwise
};

struct SymTerm {
  ExactComplex coef{1};
  int mass_power = 0;
  std::vector<SymFactor> factors;
};

using SymSum = std::vector<SymTerm>;

struct Token {
  enum class Kind { ident, number, lbracket, rbracket, comma, lparen, rparen, plus, minus, star, slash, caret, end };
  Kind kind;
  std::string text;
  std::size_t pos;
  bool conj = false;
};

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words{"d", "g", "x", "lap", "m", "i", "delta"};
  return words;
}

std::vector<Token> lex(std::string_view s, std::size_t base) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      Token t{Token::Kind::ident, std::string(s.substr(start, i - start)), base + start};
      if (i < s.size() && s[i] == '*' && reserved_words().count(t.text) == 0) {
        t.conj = true;
        ++i;
      }
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Token::Kind::number, std::string(s.substr(start, i - start)), base + start});
      continue;
    }
    Token::Kind k;
    switch (c) {
      case '[': k = Token::Kind::lbracket; break;
      case ']': k = Token::Kind::rbracket; break;
      case ',': k = Token::Kind::comma; break;
      case '(': k = Token::Kind::lparen; break;
      case ')': k = Token::Kind::rparen; break;
      case '+': k = Token::Kind::plus; break;
      case '-': k = Token::Kind::minus; break;
      case '*': k = Token::Kind::star; break;
      case '/': k = Token::Kind::slash; break;
      case '^': k = Token::Kind::caret; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", base + i);
    }
    out.push_back({k, std::string(1, c), base + i});
    ++i;
  }
  out.push_back({Token::Kind::end, "", base + s.size()});
  return out;
}

SymSum multiply(const SymSum& a, const SymSum& b) {
  SymSum out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) {
      SymTerm t;
      t.coef = x.coef * y.coef;
      t.mass_power = x.mass_power + y.mass_power;
      t.factors = x.factors;
      t.factors.insert(t.factors.end(), y.factors.begin(), y.factors.end());
      out.push_back(std::move(t));
    }
  }
  return out;
}

SymSum differentiate(const SymSum& sum, const LabelUse& index) {
  SymSum out;
  for (const auto& term : sum) {
    for (std::size_t i = 0; i < term.factors.size(); ++i) {
      const SymFactor& f = term.factors[i];
      SymTerm t = term;
      switch (f.kind) {
        case SymFactor::Kind::field:
          t.factors[i].labels.insert(t.factors[i].labels.begin(), index);
          break;
        case SymFactor::Kind::coord: {
          // d_mu x^a = delta^a_mu
          LabelUse up = f.labels[0];
          up.variance = Variance::upper;
          LabelUse lo = index;
          lo.variance = Variance::lower;
          t.factors[i] = SymFactor{SymFactor::Kind::delta, {}, {up, lo}};
          break;
        }
        default:
          continue;
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

class Parser {
public:
  Parser(std::vector<Token> tokens, int dim, const std::set<std::string>* known)
      : toks_(std::move(tokens)), dim_(dim), known_(known) {}

  SymSum parse_all() {
    SymSum s = expr();
    if (peek().kind != Token::Kind::end) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return s;
  }

private:
  const Token& peek() const { return toks_[p_]; }
  const Token& next() { return toks_[p_++]; }
  bool accept(Token::Kind k) {
    if (peek().kind != k) return false;
    ++p_;
    return true;
  }
  const Token& expect(Token::Kind k, const char* what) {
    if (peek().kind != k) {
      std::string got = peek().kind == Token::Kind::end ? "end of input" : "'" + peek().text + "'";
      throw ParseError(std::string("expected ") + what + ", got " + got, peek().pos);
    }
    return next();
  }

  SymSum expr() {
    SymSum out;
    bool negate = false;
    if (accept(Token::Kind::minus)) {
      negate = true;
    } else {
      accept(Token::Kind::plus);
    }
    while (true) {
      SymSum t = term();
      if (negate) {
        for (auto& x : t) x.coef = -x.coef;
      }
      out.insert(out.end(), t.begin(), t.end());
      if (accept(Token::Kind::plus)) {
        negate = false;
      } else if (accept(Token::Kind::minus)) {
        negate = true;
      } else {
        break;
      }
    }
    return out;
  }

  bool starts_factor() const {
    auto k = peek().kind;
    return k == Token::Kind::ident || k == Token::Kind::number || k == Token::Kind::lparen;
  }

  SymSum term() {
    if (!starts_factor()) {
      std::string got = peek().kind == Token::Kind::end ? "end of input" : "'" + peek().text + "'";
      throw ParseError("expected a factor, got " + got, peek().pos);
    }
    SymSum acc = factor();
    while (true) {
      if (accept(Token::Kind::star)) {
        acc = multiply(acc, factor());
      } else if (starts_factor()) {
        acc = multiply(acc, factor());
      } else if (accept(Token::Kind::slash)) {
        const Token& d = expect(Token::Kind::number, "a numeric divisor");
        Rational den(d.text);
        if (sgn(den) == 0) throw ParseError("zero denominator", d.pos);
        acc = multiply(acc, scalar(ExactComplex(Rational(1) / den)));
      } else {
        break;
      }
    }
    return acc;
  }

  LabelUse label(Variance v) {
    const Token& t = next();
    if (t.kind == Token::Kind::number) {
      int value = std::stoi(t.text);
      if (value >= dim_) throw ParseError("index " + t.text + " out of range for D=" + std::to_string(dim_), t.pos);
      return {IndexLabel::concrete(value), v, t.pos};
    }
    if (t.kind == Token::Kind::ident && !t.conj) return {IndexLabel::free(t.text), v, t.pos};
    throw ParseError("expected an index label", t.pos);
  }

  static SymSum scalar(const ExactComplex& c, int mass_power = 0) {
    SymTerm t;
    t.coef = c;
    t.mass_power = mass_power;
    return {t};
  }

  SymSum factor() {
    const Token& t = peek();
    if (t.kind == Token::Kind::number) {
      next();
      Rational r(t.text);
      if (accept(Token::Kind::slash)) {
        const Token& d = expect(Token::Kind::number, "a denominator");
        Rational den(d.text);
        if (sgn(den) == 0) throw ParseError("zero denominator", d.pos);
        r /= den;
      }
      return scalar(ExactComplex(r));
    }
    if (accept(Token::Kind::lparen)) {
      SymSum s = expr();
      expect(Token::Kind::rparen, "')'");
      return s;
    }
    if (t.kind != Token::Kind::ident) throw ParseError("expected a factor, got '" + t.text + "'", t.pos);
    next();
    const std::string& w = t.text;
    if (w == "i") return scalar(ExactComplex::i());
    if (w == "m") {
      int power = 1;
      if (accept(Token::Kind::caret)) {
        bool neg = accept(Token::Kind::minus);
        const Token& n = expect(Token::Kind::number, "an integer exponent");
        power = std::stoi(n.text) * (neg ? -1 : 1);
      }
      return scalar(ExactComplex(1), power);
    }
    if (w == "d") {
      expect(Token::Kind::lbracket, "'['");
      LabelUse l = label(Variance::lower);
      expect(Token::Kind::rbracket, "']'");
      return differentiate(factor(), l);
    }
    if (w == "lap") {
      std::size_t pos = t.pos;
      SymSum inner = factor();
      SymSum out;
      for (int a = 1; a < dim_; ++a) {
        LabelUse l{IndexLabel::concrete(a), Variance::lower, pos};
        SymSum part = differentiate(differentiate(inner, l), l);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    }
    if (w == "g" || w == "delta") {
      expect(Token::Kind::lbracket, "'['");
      LabelUse a = label(w == "g" ? Variance::any : Variance::upper);
      expect(Token::Kind::comma, "','");
      LabelUse b = label(w == "g" ? Variance::any : Variance::lower);
      expect(Token::Kind::rbracket, "']'");
      SymTerm s;
      s.factors.push_back({w == "g" ? SymFactor::Kind::metric : SymFactor::Kind::delta, {}, {a, b}});
      return {s};
    }
    if (w == "x") {
      expect(Token::Kind::lbracket, "'['");
      LabelUse a = label(Variance::upper);
      expect(Token::Kind::rbracket, "']'");
      SymTerm s;
      s.factors.push_back({SymFactor::Kind::coord, {}, {a}});
      return {s};
    }
    std::string name = t.conj ? w + "*" : w;
    if (known_ != nullptr && known_->count(name) == 0) throw ParseError("unknown field '" + name + "'", t.pos);
    SymTerm s;
    s.factors.push_back({SymFactor::Kind::field, name, {}});
    return {s};
  }

  std::vector<Token> toks_;
  std::size_t p_ = 0;
  int dim_;
  const std::set<std::string>* known_;
};

// Index discipline per term; returns the sorted free labels of the term.
std::vector<std::string> check_term(const SymTerm& t) {
  std::map<std::string, std::vector<const LabelUse*>> uses;
  for (const auto& f : t.factors) {
    for (const auto& l : f.labels) {
      if (!l.label.is_concrete()) uses[l.label.name].push_back(&l);
    }
  }
  std::vector<std::string> free;
  for (const auto& [name, list] : uses) {
    if (list.size() > 2) {
      throw ParseError("index '" + name + "' appears " + std::to_string(list.size()) + " times in one term",
                       list[2]->pos);
    }
    if (list.size() == 1) {
      free.push_back(name);
      continue;
    }
    Variance a = list[0]->variance;
    Variance b = list[1]->variance;
    if (a != Variance::any && a == b) {
      const char* kind = a == Variance::lower ? "two lower (derivative)" : "two upper (coordinate)";
      throw ParseError("index '" + name + "' pairs " + kind + " slots; contract through g[.,.]",
                       std::max(list[0]->pos, list[1]->pos));
    }
  }
  return free;
}

Expr to_expr(const SymTerm& t, int dim) {
  Expr e = Expr::constant(dim, t.coef, t.mass_power);
  for (const auto& f : t.factors) {
    std::vector<IndexLabel> slots;
    for (const auto& l : f.labels) slots.push_back(l.label);
    switch (f.kind) {
      case SymFactor::Kind::field:
        e = e * Expr::field(dim, f.name, slots);
        break;
      case SymFactor::Kind::coord:
        e = e * Expr::coord(dim, slots[0]);
        break;
      case SymFactor::Kind::metric:
        e = e * Expr::metric(dim, slots[0], slots[1]);
        break;
      case SymFactor::Kind::delta:
        e = e * Expr::delta(dim, slots[0], slots[1]);
        break;
    }
  }
  return e;
}

Expr parse_at(std::string_view text, std::size_t base, int dim, const std::set<std::string>* known) {
  if (dim < 1) throw std::invalid_argument("parse_expr: dimension must be >= 1");
  Parser parser(lex(text, base), dim, known);
  SymSum sum = parser.parse_all();
  std::optional<std::vector<std::string>> signature;
  for (const auto& t : sum) {
    auto free = check_term(t);
    if (!signature) {
      signature = free;
    } else if (*signature != free) {
      std::size_t pos = base;
      for (const auto& f : t.factors) {
        for (const auto& l : f.labels) pos = std::max(pos, l.pos);
      }
      throw ParseError("free indices differ between terms", pos);
    }
  }
  Expr out(dim, signature.value_or(std::vector<std::string>{}));
  for (const auto& t : sum) out += to_expr(t, dim);
  return out;
}

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

}  // namespace

Expr parse_expr(std::string_view text, int dim, const std::set<std::string>* known_fields) {
  return parse_at(text, 0, dim, known_fields);
}

std::string describe_position(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

LagrangianSource parse_lagrangian_source(std::string_view text) {
  LagrangianSource src;
  std::size_t offset = 0;
  bool have_lagrangian = false;
  while (offset < text.size()) {
    std::size_t eol = text.find('\n', offset);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(offset, eol - offset);
    std::string t = trim(line);
    std::size_t line_start = offset;
    offset = eol + 1;
    if (t.empty() || t[0] == '#') continue;

    std::istringstream words(t);
    std::string key;
    words >> key;
    if (key == "dim") {
      int d = 0;
      if (!(words >> d) || d < 2 || d > 4) throw ParseError("dim must be an integer in 2..4", line_start);
      src.dim = d;
    } else if (key == "fields") {
      std::string f;
      while (words >> f) {
        if (is_conjugate_name(f)) throw ParseError("declare complex fields without '*'", line_start);
        src.complex_base.push_back(f);
        src.fields.push_back(f);
        src.fields.push_back(f + "*");
      }
    } else if (key == "real") {
      std::string f;
      while (words >> f) {
        src.fields.push_back(f);
        src.real_fields.insert(f);
      }
    } else if (key == "generator") {
      std::size_t eq = t.find('=');
      if (eq == std::string::npos) throw ParseError("generator needs '= rows'", line_start);
      std::string name = trim(std::string_view(t).substr(9, eq - 9));
      std::vector<std::vector<ExactComplex>> rows;
      std::string body = t.substr(eq + 1);
      std::istringstream rs(body);
      std::string row;
      while (std::getline(rs, row, ';')) {
        std::vector<ExactComplex> entries;
        std::istringstream es(row);
        std::string entry;
        while (std::getline(es, entry, ',')) {
          Expr v = parse_at(entry, line_start, src.dim, nullptr);
          if (v.size() > 1 || !fields_of(v).empty() || (!v.is_zero() && v.terms().begin()->first.mass_power != 0)) {
            throw ParseError("generator entries must be numbers", line_start);
          }
          entries.push_back(v.is_zero() ? ExactComplex(0) : v.terms().begin()->second);
        }
        rows.push_back(std::move(entries));
      }
      src.generators[name] = std::move(rows);
    } else if (key == "L" || key.rfind("L=", 0) == 0) {
      std::size_t eq = text.find('=', line_start);
      std::size_t body = eq + 1;
      std::set<std::string> known(src.fields.begin(), src.fields.end());
      src.lagrangian = parse_at(text.substr(body), body, src.dim, &known);
      if (!src.lagrangian.free_labels().empty()) {
        throw ParseError("the Lagrangian must not carry free indices", body);
      }
      have_lagrangian = true;
      break;
    } else {
      throw ParseError("unknown directive '" + key + "'", line_start);
    }
  }
  if (!have_lagrangian) throw ParseError("missing 'L = ...' line", text.size());
  if (src.fields.empty()) throw ParseError("no fields declared", 0);
  return src;
}

}  // namespace noether
