#include "esp/text.hpp"

#include <cctype>

namespace esp {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

namespace {

class ExprParser {
 public:
  ExprParser(const Ring& ring, std::string_view text) : ring_(ring), text_(text) {}

  Elem run() {
    Elem e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::ParseError, "element '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + why);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Elem expr() {
    Elem acc = term();
    for (;;) {
      if (eat('+')) acc += term();
      else if (eat('-')) acc -= term();
      else return acc;
    }
  }

  Elem term() {
    Elem acc = unary();
    for (;;) {
      if (eat('*')) {
        acc *= unary();
      } else if (eat('/')) {
        Elem d = unary();
        auto q = ring_->try_divide(acc, d);
        if (!q) fail(d.str() + " does not divide " + acc.str());
        acc = *q;
      } else {
        return acc;
      }
    }
  }

  Elem unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Elem power() {
    Elem base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent must be a non-negative integer");
      return ring_->pow(base, std::stoull(std::string(text_.substr(start, pos_ - start))));
    }
    return base;
  }

  Elem atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Elem e = expr();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      mpz_class v(std::string(text_.substr(start, pos_ - start)));
      return ring_->from_rational(mpq_class(v));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      auto v = ring_->variable_elem(name);
      if (!v) fail("unknown variable '" + name + "' in " + ring_->descriptor());
      return *v;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const Ring& ring_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

class DescriptorParser {
 public:
  explicit DescriptorParser(std::string_view text) : text_(text), tokens_(split(text, ':')) {}

  Ring run() {
    Ring r = ring();
    if (idx_ != tokens_.size()) fail("trailing '" + tokens_[idx_] + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::ParseError, "ring descriptor '" + std::string(text_) + "': " + why);
  }

  const std::string& next() {
    if (idx_ >= tokens_.size()) fail("unexpected end");
    return tokens_[idx_++];
  }

  Ring ring() {
    std::string kind = trim(next());
    if (kind == "zmod") {
      std::string m = trim(next());
      if (m.empty() || m.find_first_not_of("0123456789") != std::string::npos) fail("bad modulus '" + m + "'");
      return RingImpl::integers_mod(std::stoll(m));
    }
    if (kind == "q") return RingImpl::rationals();
    if (kind == "poly") {
      Ring base = ring();
      auto vars = split(next(), ',');
      for (auto& v : vars) {
        v = trim(v);
        if (v.empty()) fail("empty variable name");
      }
      return RingImpl::multi_poly(base, vars);
    }
    if (kind == "upoly") {
      Ring base = ring();
      std::string v = trim(next());
      if (v.empty()) fail("empty variable name");
      return RingImpl::uni_poly(base, v);
    }
    if (kind == "loc") {
      Ring base = ring();
      std::string s = trim(next());
      if (s.rfind("s=", 0) != 0) fail("localization needs s=<element>");
      return RingImpl::localize(base, parse_elem(base, s.substr(2)));
    }
    fail("unknown ring kind '" + kind + "'");
  }

  std::string_view text_;
  std::vector<std::string> tokens_;
  std::size_t idx_ = 0;
};

}  // namespace

Ring ring_make(std::string_view descriptor) { return DescriptorParser(descriptor).run(); }

Elem parse_elem(const Ring& ring, std::string_view text) { return ExprParser(ring, text).run(); }

std::string format_sympmat(const Matrix& m) {
  std::string out = "sympmat n=" + std::to_string(m.rows() / 2) + " ring=" + m.ring()->descriptor() + " entries=";
  for (std::size_t i = 0; i < m.entries().size(); ++i) out += (i ? ";" : "") + m.entries()[i].str();
  return out;
}

Matrix parse_sympmat(std::string_view text, Ring* ring_out) {
  std::string t = trim(text);
  auto fail = [&](const std::string& why) -> Matrix { throw Error(ErrorCode::ParseError, "sympmat: " + why); };
  if (t.rfind("sympmat ", 0) != 0) return fail("missing 'sympmat' header");
  auto n_at = t.find(" n=");
  auto ring_at = t.find(" ring=");
  auto entries_at = t.find(" entries=");
  if (n_at == std::string::npos || ring_at == std::string::npos || entries_at == std::string::npos)
    return fail("expected n=, ring= and entries= fields");
  std::size_t n = std::stoul(t.substr(n_at + 3, ring_at - n_at - 3));
  Ring ring = ring_make(trim(t.substr(ring_at + 6, entries_at - ring_at - 6)));
  auto parts = split(t.substr(entries_at + 9), ';');
  if (parts.size() != 4 * n * n) return fail("expected " + std::to_string(4 * n * n) + " entries");
  std::vector<Elem> es;
  for (const auto& p : parts) es.push_back(parse_elem(ring, p));
  if (ring_out) *ring_out = ring;
  return Matrix::from_entries(ring, 2 * n, 2 * n, std::move(es));
}

}  // namespace esp
