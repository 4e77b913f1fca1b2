#include <cctype>
#include <set>

#include "join2pn/syntax.hpp"

namespace join2pn {

namespace {

enum class Tok { Name, Nil, Def, In, Bar, React, LAngle, RAngle, Comma, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

bool is_name_start(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return is_name_start(c) || c == '\''; }

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' ) {  // comment to end of line
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    SourcePos pos{line, col};
    if (is_name_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_name_char(src[j])) ++j;
      std::string word = src.substr(i, j - i);
      Tok kind = Tok::Name;
      if (word == "def") kind = Tok::Def;
      else if (word == "in") kind = Tok::In;
      out.push_back({kind, word, pos});
      advance(j - i);
      continue;
    }
    if (c == '|' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Tok::React, "|>", pos});
      advance(2);
      continue;
    }
    Tok kind;
    switch (c) {
      case '|': kind = Tok::Bar; break;
      case '<': kind = Tok::LAngle; break;
      case '>': kind = Tok::RAngle; break;
      case ',': kind = Tok::Comma; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
    out.push_back({kind, std::string(1, c), pos});
    advance(1);
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Process program() {
    Process p = proc();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().pos); }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      const auto& t = peek();
      fail(std::string("expected ") + what + (t.kind == Tok::End ? " at end of input" : ", found '" + t.text + "'"));
    }
    return next();
  }

  // proc := item ("|" item)*, where a `def` item swallows everything after it.
  Process proc() {
    Process acc = item();
    while (peek().kind == Tok::Bar) {
      next();
      acc = Process::par(acc, item());
    }
    return acc;
  }

  Process item() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Def:
        return definition();
      case Tok::LParen: {
        next();
        Process p = proc();
        expect(Tok::RParen, "')'");
        return p;
      }
      case Tok::Name: {
        if (t.text == "0" && toks_[pos_ + 1].kind != Tok::LAngle) {
          next();
          return Process::nil();
        }
        auto [chan, args] = message();
        return Process::message(std::move(chan), std::move(args));
      }
      default:
        fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
  }

  std::pair<Name, std::vector<Name>> message() {
    Name chan = expect(Tok::Name, "a channel name").text;
    expect(Tok::LAngle, "'<'");
    std::vector<Name> args;
    if (peek().kind != Tok::RAngle) {
      args.push_back(expect(Tok::Name, "a name").text);
      while (peek().kind == Tok::Comma) {
        next();
        args.push_back(expect(Tok::Name, "a name").text);
      }
    }
    expect(Tok::RAngle, "'>'");
    return {std::move(chan), std::move(args)};
  }

  Process definition() {
    const SourcePos start = expect(Tok::Def, "'def'").pos;
    Definition d;
    d.pos = start;
    std::set<Name> channels, params;
    auto templ = [&] {
      const SourcePos at = peek().pos;
      auto [chan, ps] = message();
      if (!channels.insert(chan).second)
        throw ParseError("channel '" + chan + "' repeated in join pattern", at);
      for (const auto& p : ps)
        if (!params.insert(p).second)
          throw ParseError("parameter '" + p + "' repeated in join pattern", at);
      d.pattern.push_back({std::move(chan), std::move(ps)});
    };
    templ();
    while (peek().kind == Tok::Bar) {
      if (d.pattern.size() == 2) fail("join pattern with more than 2 messages");
      next();
      templ();
    }
    expect(Tok::React, "'|>'");
    d.reaction = proc();
    expect(Tok::In, "'in'");
    Process scope = proc();
    return Process::def(std::move(d), std::move(scope));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Process parse(const std::string& text) { return elaborate(Parser(lex(text)).program()); }

}  // namespace join2pn
