#include "accd/ddsl/parser.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace accd::ddsl {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += i + 1 == items.size() ? " or " : ", ";
    out += items[i];
  }
  return out;
}

enum class Tok { Ident, Integer, Float, String, LParen, RParen, LBrace, RBrace, Comma, Semi, Assign, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier name, string body, or number spelling
  std::int64_t ival = 0;
  double fval = 0.0;
  Span span;
};

const std::set<std::string, std::less<>> kKeywords = {
    "DVar", "DSet", "int", "float", "double", "AccD_Comp_Dist", "AccD_Dist_Select",
    "AccD_Update", "AccD_Iter", "true", "false"};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Token t;
      t.span = here();
      if (pos_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = text_[pos_];
      if (is_ident_start(c)) {
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) advance();
        t.kind = Tok::Ident;
        t.text = std::string(text_.substr(t.span.offset, pos_ - t.span.offset));
      } else if (is_digit(c) || (c == '-' && pos_ + 1 < text_.size() && is_digit(text_[pos_ + 1]))) {
        lex_number(t);
      } else if (c == '"') {
        lex_string(t);
      } else {
        static constexpr std::string_view punct = "(){},;=";
        const auto k = punct.find(c);
        if (k == std::string_view::npos) {
          throw SyntaxError(describe_char(c), t.span.line, t.span.col, {});
        }
        static constexpr Tok kinds[] = {Tok::LParen, Tok::RParen, Tok::LBrace, Tok::RBrace,
                                        Tok::Comma,  Tok::Semi,   Tok::Assign};
        t.kind = kinds[k];
        t.text = std::string(1, c);
        advance();
      }
      t.span.length = pos_ - t.span.offset;
      out.push_back(std::move(t));
    }
  }

 private:
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

  static std::string describe_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0x21 && u < 0x7f) return std::string("unexpected character '") + c + "'";
    std::ostringstream os;
    os << "unexpected byte 0x" << std::hex << static_cast<unsigned>(u);
    return os.str();
  }

  Span here() const { return {pos_, 0, line_, col_}; }

  void advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++col_;  // UTF-8 continuation bytes share the column of their lead byte
    }
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        const Span start = here();
        advance();
        advance();
        for (;;) {
          if (pos_ >= text_.size()) {
            throw SyntaxError("unterminated comment", start.line, start.col, {"*/"});
          }
          if (text_[pos_] == '*' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
            advance();
            advance();
            break;
          }
          advance();
        }
      } else {
        return;
      }
    }
  }

  void lex_number(Token& t) {
    const std::size_t start = pos_;
    if (text_[pos_] == '-') advance();
    bool is_float = false;
    while (pos_ < text_.size() && is_digit(text_[pos_])) advance();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      is_float = true;
      advance();
      if (pos_ >= text_.size() || !is_digit(text_[pos_])) {
        throw SyntaxError("malformed number", line_, col_, {"digit"});
      }
      while (pos_ < text_.size() && is_digit(text_[pos_])) advance();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      is_float = true;
      advance();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
      if (pos_ >= text_.size() || !is_digit(text_[pos_])) {
        throw SyntaxError("malformed exponent", line_, col_, {"digit"});
      }
      while (pos_ < text_.size() && is_digit(text_[pos_])) advance();
    }
    if (pos_ < text_.size() && is_ident_start(text_[pos_])) {
      throw SyntaxError("malformed number", line_, col_, {"digit"});
    }
    t.text = std::string(text_.substr(start, pos_ - start));
    const char* b = t.text.data();
    const char* e = b + t.text.size();
    if (is_float) {
      t.kind = Tok::Float;
      auto [p, ec] = std::from_chars(b, e, t.fval);
      if (ec != std::errc{} || p != e || !std::isfinite(t.fval)) {
        throw SyntaxError("number out of range", t.span.line, t.span.col, {});
      }
    } else {
      t.kind = Tok::Integer;
      auto [p, ec] = std::from_chars(b, e, t.ival);
      if (ec != std::errc{} || p != e) {
        throw SyntaxError("integer literal out of range", t.span.line, t.span.col, {});
      }
    }
  }

  void lex_string(Token& t) {
    advance();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\n') break;
      advance();
    }
    if (pos_ >= text_.size() || text_[pos_] != '"') {
      throw SyntaxError("unterminated string", t.span.line, t.span.col, {"\""});
    }
    t.kind = Tok::String;
    t.text = std::string(text_.substr(start, pos_ - start));
    advance();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return "string \"" + t.text + "\"";
    case Tok::Ident: return "'" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

Span cover(const Span& a, const Span& b) {
  Span s = a;
  s.length = b.offset + b.length - a.offset;
  return s;
}

const std::vector<std::string> kConstructStarts = {"AccD_Comp_Dist", "AccD_Dist_Select",
                                                   "AccD_Update", "AccD_Iter"};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    Program p;
    if (!is_word("DVar") && !is_word("DSet")) fail({"DVar", "DSet"});
    while (is_word("DVar") || is_word("DSet")) p.decls.push_back(decl());
    while (peek().kind != Tok::End) {
      if (!is_construct_start()) {
        std::vector<std::string> exp = kConstructStarts;
        if (p.body.empty()) exp.insert(exp.begin(), {"DVar", "DSet"});
        exp.push_back("end of input");
        fail(exp);
      }
      if (is_word("AccD_Iter")) {
        p.body.push_back(iter());
      } else {
        p.body.push_back(std::visit([](auto&& n) -> Construct { return std::move(n); }, stmt(false)));
      }
    }
    return p;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool is_word(std::string_view w, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == w;
  }
  bool is_construct_start() const {
    for (const auto& w : kConstructStarts) {
      if (is_word(w)) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::vector<std::string>& expected) const {
    const Token& t = peek();
    throw SyntaxError("expected " + join(expected) + ", found " + describe(t), t.span.line,
                      t.span.col, expected);
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail({what});
    return take();
  }

  Ident ident() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || kKeywords.contains(t.text)) fail({"identifier"});
    take();
    return {t.text, t.span};
  }

  DType dtype() {
    if (is_word("int")) return take(), DType::Int32;
    if (is_word("float")) return take(), DType::Float32;
    if (is_word("double")) return take(), DType::Float64;
    fail({"int", "float", "double"});
  }

  SizeRef size_ref() {
    const Token& t = peek();
    if (t.kind == Tok::Integer && t.ival >= 0) {
      take();
      return {t.ival, t.span};
    }
    if (t.kind == Tok::Ident && !kKeywords.contains(t.text)) {
      take();
      return {Ident{t.text, t.span}, t.span};
    }
    fail({"identifier", "non-negative integer"});
  }

  StringLit string_lit() {
    const Token& t = expect(Tok::String, "string");
    return {t.text, t.span};
  }

  Decl decl() {
    const Token& kw = take();
    if (kw.text == "DVar") {
      VarDecl v;
      v.name = ident();
      v.dtype = dtype();
      const Token& t = peek();
      if (t.kind == Tok::Integer) {
        v.init = Literal{t.ival, t.span};
        take();
      } else if (t.kind == Tok::Float) {
        v.init = Literal{t.fval, t.span};
        take();
      } else if (t.kind != Tok::Semi) {
        fail({"literal", "';'"});
      }
      v.span = cover(kw.span, expect(Tok::Semi, "';'").span);
      return v;
    }
    SetDecl s;
    s.name = ident();
    s.dtype = dtype();
    s.size = size_ref();
    s.dim = size_ref();
    s.span = cover(kw.span, expect(Tok::Semi, "';'").span);
    return s;
  }

  Span terminator(const Span& start, const Span& last, bool in_iter) {
    if (peek().kind == Tok::Semi) return cover(start, take().span);
    if (in_iter && peek().kind == Tok::RBrace) return cover(start, last);
    fail({"';'"});
  }

  Stmt stmt(bool in_iter) {
    const Token& kw = take();
    if (kw.text == "AccD_Comp_Dist") {
      ComputeDist c;
      expect(Tok::LParen, "'('");
      c.src = ident();
      expect(Tok::Comma, "','");
      c.trg = ident();
      expect(Tok::Comma, "','");
      c.dist_mat = ident();
      expect(Tok::Comma, "','");
      c.id_mat = ident();
      expect(Tok::Comma, "','");
      c.dim = size_ref();
      expect(Tok::Comma, "','");
      c.metric = string_lit();
      expect(Tok::Comma, "','");
      c.weights = size_ref();
      const Span close = expect(Tok::RParen, "')'").span;
      c.span = terminator(kw.span, close, in_iter);
      return c;
    }
    if (kw.text == "AccD_Dist_Select") {
      DistSelect s;
      expect(Tok::LParen, "'('");
      s.dist_mat = ident();
      expect(Tok::Comma, "','");
      s.id_mat = ident();
      expect(Tok::Comma, "','");
      s.range = size_ref();
      expect(Tok::Comma, "','");
      s.scope = string_lit();
      expect(Tok::Comma, "','");
      s.out = ident();
      const Span close = expect(Tok::RParen, "')'").span;
      s.span = terminator(kw.span, close, in_iter);
      return s;
    }
    if (kw.text == "AccD_Update") {
      Update u;
      expect(Tok::LParen, "'('");
      u.operands.push_back(ident());
      do {
        expect(Tok::Comma, "','");
        u.operands.push_back(ident());
      } while (peek().kind == Tok::Comma);
      const Span close = expect(Tok::RParen, "')'").span;
      u.span = terminator(kw.span, close, in_iter);
      return u;
    }
    fail(kConstructStarts);
  }

  Iter iter() {
    const Token& kw = take();
    Iter it;
    expect(Tok::LParen, "'('");
    const Token& ctl = peek();
    if (ctl.kind == Tok::Integer && ctl.ival >= 0) {
      it.control = ctl.ival;
    } else if (ctl.kind == Tok::Ident && !kKeywords.contains(ctl.text)) {
      it.control = Ident{ctl.text, ctl.span};
    } else {
      fail({"identifier", "non-negative integer"});
    }
    it.control_span = take().span;
    expect(Tok::RParen, "')'");
    expect(Tok::LBrace, "'{'");
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::Assign) {
      StatusInit si;
      si.var = ident();
      take();
      if (is_word("true")) {
        si.value = true;
      } else if (!is_word("false")) {
        fail({"true", "false"});
      }
      take();
      si.span = cover(si.var.span, expect(Tok::Semi, "';'").span);
      it.status_init = si;
    }
    do {
      if (is_word("AccD_Iter")) {
        throw SyntaxError("nested AccD_Iter is not allowed", peek().span.line, peek().span.col,
                          {"AccD_Comp_Dist", "AccD_Dist_Select", "AccD_Update"});
      }
      if (!is_construct_start()) {
        std::vector<std::string> exp = {"AccD_Comp_Dist", "AccD_Dist_Select", "AccD_Update"};
        if (!it.body.empty()) exp.push_back("'}'");
        fail(exp);
      }
      it.body.push_back(stmt(true));
    } while (peek().kind != Tok::RBrace);
    it.span = cover(kw.span, take().span);
    return it;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string format_literal(const Literal& l) {
  if (l.is_integer()) return std::to_string(std::get<std::int64_t>(l.value));
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, std::get<double>(l.value));
  std::string s(buf, p);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string format_size(const SizeRef& s) {
  return s.is_ident() ? s.ident().name : std::to_string(s.integer());
}

void print_stmt(std::ostream& os, const Stmt& s) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ComputeDist>) {
          os << "AccD_Comp_Dist(" << n.src.name << ", " << n.trg.name << ", " << n.dist_mat.name
             << ", " << n.id_mat.name << ", " << format_size(n.dim) << ", \"" << n.metric.text
             << "\", " << format_size(n.weights) << ");";
        } else if constexpr (std::is_same_v<T, DistSelect>) {
          os << "AccD_Dist_Select(" << n.dist_mat.name << ", " << n.id_mat.name << ", "
             << format_size(n.range) << ", \"" << n.scope.text << "\", " << n.out.name << ");";
        } else {
          os << "AccD_Update(";
          for (std::size_t i = 0; i < n.operands.size(); ++i) {
            os << (i ? ", " : "") << n.operands[i].name;
          }
          os << ");";
        }
      },
      s);
}

}  // namespace

SyntaxError::SyntaxError(const std::string& message, std::size_t line, std::size_t col,
                         std::vector<std::string> expected)
    : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + message),
      message_(message),
      line_(line),
      col_(col),
      expected_(std::move(expected)) {}

Program parse(std::string_view text) {
  Lexer lex(text);
  Parser parser(lex.run());
  return parser.program();
}

std::string pretty_print(const Program& p) {
  std::ostringstream os;
  for (const auto& d : p.decls) {
    if (const auto* v = std::get_if<VarDecl>(&d)) {
      os << "DVar " << v->name.name << ' ' << dtype_keyword(v->dtype);
      if (v->init) os << ' ' << format_literal(*v->init);
      os << ";\n";
    } else {
      const auto& s = std::get<SetDecl>(d);
      os << "DSet " << s.name.name << ' ' << dtype_keyword(s.dtype) << ' ' << format_size(s.size)
         << ' ' << format_size(s.dim) << ";\n";
    }
  }
  for (const auto& c : p.body) {
    if (const auto* it = std::get_if<Iter>(&c)) {
      os << "AccD_Iter(";
      if (const auto* id = std::get_if<Ident>(&it->control)) {
        os << id->name;
      } else {
        os << std::get<std::int64_t>(it->control);
      }
      os << ")\n{\n";
      if (it->status_init) {
        os << "    " << it->status_init->var.name << " = "
           << (it->status_init->value ? "true" : "false") << ";\n";
      }
      for (const auto& s : it->body) {
        os << "    ";
        print_stmt(os, s);
        os << '\n';
      }
      os << "}\n";
    } else {
      std::visit(
          [&](const auto& n) {
            if constexpr (!std::is_same_v<std::decay_t<decltype(n)>, Iter>) print_stmt(os, n);
          },
          c);
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace accd::ddsl
