#include "esp/word.hpp"

#include <cstdio>
#include <sstream>

#include "esp/text.hpp"

namespace esp {

Atom Atom::s(std::size_t i, std::size_t j, Elem e) {
  Atom a;
  a.kind = AtomKind::S;
  a.i = i;
  a.j = j;
  a.param = std::move(e);
  return a;
}

Atom Atom::e12(Elem e) {
  Atom a;
  a.kind = AtomKind::E12;
  a.param = std::move(e);
  return a;
}

Atom Atom::e21(Elem e) {
  Atom a;
  a.kind = AtomKind::E21;
  a.param = std::move(e);
  return a;
}

Atom Atom::abcd(Shape shape, std::size_t pos, Elem e) {
  Atom a;
  a.kind = AtomKind::ABCD;
  a.shape = shape;
  a.i = pos;
  a.param = std::move(e);
  return a;
}

Atom Atom::unit(Shape shape, std::size_t pos, Elem e) {
  if (shape != Shape::B && shape != Shape::C) throw Error(ErrorCode::BadIndices, "unit atoms have shape B or C");
  Atom a;
  a.kind = AtomKind::Unit;
  a.shape = shape;
  a.i = pos;
  a.param = std::move(e);
  return a;
}

Atom Atom::placed(Shape shape, std::size_t f, std::size_t g, Elem e) {
  Atom a;
  a.kind = AtomKind::Placed;
  a.shape = shape;
  a.i = f;
  a.j = g;
  a.param = std::move(e);
  return a;
}

Atom Atom::block(std::size_t pos, Matrix x) {
  Atom a;
  a.kind = AtomKind::Block;
  a.i = pos;
  a.mat = std::move(x);
  return a;
}

Atom Atom::corner(Matrix delta) {
  Atom a;
  a.kind = AtomKind::Corner;
  a.mat = std::move(delta);
  return a;
}

Atom Atom::diag(std::vector<Matrix> blocks) {
  Atom a;
  a.kind = AtomKind::Diag;
  a.blocks = std::move(blocks);
  return a;
}

Atom Atom::dense(Matrix m) {
  Atom a;
  a.kind = AtomKind::Dense;
  a.mat = std::move(m);
  return a;
}

void check_atom(const Atom& a, std::size_t n) {
  auto bad = [&](const std::string& why) { throw Error(ErrorCode::BadIndices, atom_text(a) + ": " + why); };
  switch (a.kind) {
    case AtomKind::S:
      if (a.i < 1 || a.j < 1 || a.i > 2 * n || a.j > 2 * n || a.i == a.j || a.j == pi_index(a.i))
        bad("indices out of range");
      break;
    case AtomKind::ABCD:
    case AtomKind::Block:
      if (a.i < 2 || a.i > n) bad("position must lie in 2.." + std::to_string(n));
      break;
    case AtomKind::Unit:
      if (a.i < 1 || a.i > n) bad("position must lie in 1.." + std::to_string(n));
      break;
    case AtomKind::Placed:
      if (a.i < 1 || a.j <= a.i || a.j > n) bad("block range out of bounds");
      break;
    case AtomKind::Diag:
      if (a.blocks.size() != n) bad("expected " + std::to_string(n) + " blocks");
      break;
    case AtomKind::Dense:
      if (a.mat.rows() != 2 * n || a.mat.cols() != 2 * n) bad("wrong size");
      break;
    default: break;
  }
}

Matrix atom_matrix(const Atom& a, const Ring& ring, std::size_t n) {
  check_atom(a, n);
  switch (a.kind) {
    case AtomKind::S: return gen_S(ring, n, a.i, a.j, a.param);
    case AtomKind::E12: return gen_corner(ring, n, CornerKind::E12, a.param);
    case AtomKind::E21: return gen_corner(ring, n, CornerKind::E21, a.param);
    case AtomKind::ABCD: return gen_abcd(ring, n, a.shape, a.i, a.param);
    case AtomKind::Unit: return gen_small(ring, n, a.shape, a.i, a.param);
    case AtomKind::Placed: return gen_placed(ring, n, a.shape, a.i, a.j, a.param);
    case AtomKind::Block: return block_E_at(n, a.i, a.mat.lift(ring));
    case AtomKind::Corner: return place_block(n, a.mat.lift(ring), 1);
    case AtomKind::Diag: {
      Matrix m = Matrix::identity(ring, 2 * n);
      for (std::size_t k = 0; k < n; ++k) m.set_block(2 * k, 2 * k, a.blocks[k]);
      return m;
    }
    case AtomKind::Dense: return a.mat.lift(ring);
  }
  return Matrix();
}

Atom atom_inverse(const Atom& a) {
  Atom b = a;
  switch (a.kind) {
    case AtomKind::S:
    case AtomKind::E12:
    case AtomKind::E21:
    case AtomKind::ABCD:
    case AtomKind::Unit:
    case AtomKind::Placed: b.param = -a.param; break;
    case AtomKind::Block: b.mat = -a.mat; break;
    case AtomKind::Corner: b.mat = inverse_sl2(a.mat); break;
    case AtomKind::Diag:
      for (auto& m : b.blocks) m = inverse_sl2(m);
      break;
    case AtomKind::Dense: b.mat = symplectic_inverse(a.mat); break;
  }
  return b;
}

Atom map_atom(const Atom& a, const Ring& target, const std::function<Elem(const Elem&)>& f) {
  Atom b = a;
  if (a.param.valid()) b.param = target->embed(f(a.param));
  if (a.mat.rows() > 0) b.mat = a.mat.map(target, f);
  for (auto& m : b.blocks) m = m.map(target, f);
  return b;
}

namespace {

std::string entries_text(const std::vector<Elem>& es) {
  std::string out;
  for (std::size_t i = 0; i < es.size(); ++i) out += (i ? ";" : "") + es[i].str();
  return out;
}

}  // namespace

std::string atom_text(const Atom& a) {
  switch (a.kind) {
    case AtomKind::S: return "S " + std::to_string(a.i) + " " + std::to_string(a.j) + " " + a.param.str();
    case AtomKind::E12: return "E12 " + a.param.str();
    case AtomKind::E21: return "E21 " + a.param.str();
    case AtomKind::ABCD: return std::string(1, shape_char(a.shape)) + " " + std::to_string(a.i) + " " + a.param.str();
    case AtomKind::Unit: return std::string("U") + shape_char(a.shape) + " " + std::to_string(a.i) + " " + a.param.str();
    case AtomKind::Placed:
      return std::string("P") + shape_char(a.shape) + " " + std::to_string(a.i) + " " + std::to_string(a.j) + " " +
             a.param.str();
    case AtomKind::Block: return "EBLK " + std::to_string(a.i) + " " + entries_text(a.mat.entries());
    case AtomKind::Corner: return "CORNER " + entries_text(a.mat.entries());
    case AtomKind::Diag: {
      std::vector<Elem> es;
      for (const auto& m : a.blocks) es.insert(es.end(), m.entries().begin(), m.entries().end());
      return "DIAG " + entries_text(es);
    }
    case AtomKind::Dense: return "DENSE " + entries_text(a.mat.entries());
  }
  return "?";
}

Word& Word::append(const Word& w) {
  atoms.insert(atoms.end(), w.atoms.begin(), w.atoms.end());
  return *this;
}

Matrix eval(const Word& w) {
  const std::size_t d = 2 * w.n;
  Matrix m = Matrix::identity(w.ring, d);
  struct Entry {
    std::size_t k, j;
    Elem v;
  };
  std::vector<Entry> off;
  for (const auto& a : w.atoms) {
    // m * (I + N) = m + m N with N sparse.
    Matrix g = atom_matrix(a, w.ring, w.n);
    off.clear();
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = 0; j < d; ++j) {
        Elem v = k == j ? g(k, j) - w.ring->one() : g(k, j);
        if (!v.is_zero()) off.push_back({k, j, std::move(v)});
      }
    if (off.empty()) continue;
    Matrix base = m;
    for (const auto& e : off)
      for (std::size_t i = 0; i < d; ++i) {
        const Elem& x = base(i, e.k);
        if (!x.is_zero()) m(i, e.j) += x * e.v;
      }
  }
  return m;
}

Word inverse(const Word& w) {
  Word out(w.ring, w.n);
  out.atoms.reserve(w.atoms.size());
  for (auto it = w.atoms.rbegin(); it != w.atoms.rend(); ++it) out.atoms.push_back(atom_inverse(*it));
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  return out.append(b);
}

Word commutator(const Word& g, const Word& h) {
  Word out = g;
  out.append(h).append(inverse(g)).append(inverse(h));
  return out;
}

Word map_word(const Word& w, const Ring& target, const std::function<Elem(const Elem&)>& f) {
  Word out(target, w.n);
  out.atoms.reserve(w.atoms.size());
  for (const auto& a : w.atoms) out.atoms.push_back(map_atom(a, target, f));
  return out;
}

Word lift_word(const Word& w, const Ring& target) {
  return map_word(w, target, [](const Elem& e) { return e; });
}

bool is_abcd_only(const Word& w) {
  for (const auto& a : w.atoms)
    if (!a.is_abcd()) return false;
  return true;
}

Word drop_trivial(const Word& w) {
  Word out(w.ring, w.n);
  for (const auto& a : w.atoms) {
    bool trivial = false;
    switch (a.kind) {
      case AtomKind::S:
      case AtomKind::E12:
      case AtomKind::E21:
      case AtomKind::ABCD:
      case AtomKind::Unit:
      case AtomKind::Placed: trivial = a.param.is_zero(); break;
      case AtomKind::Block: trivial = a.mat.is_zero(); break;
      case AtomKind::Corner:
      case AtomKind::Dense: trivial = a.mat.is_identity(); break;
      case AtomKind::Diag: {
        trivial = true;
        for (const auto& m : a.blocks) trivial = trivial && m.is_identity();
        break;
      }
    }
    if (!trivial) out.atoms.push_back(a);
  }
  return out;
}

std::string word_text(const Word& w) {
  std::string out;
  for (const auto& a : w.atoms) out += atom_text(a) + "\n";
  return out;
}

namespace {

std::size_t parse_index(const std::string& tok, const std::string& line) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw Error(ErrorCode::ParseError, "expected an index, got '" + tok + "' in '" + line + "'");
  return std::stoul(tok);
}

std::vector<Elem> parse_entries(const Ring& ring, const std::string& text, std::size_t expected, const std::string& line) {
  auto parts = split(text, ';');
  if (parts.size() != expected)
    throw Error(ErrorCode::ParseError, "expected " + std::to_string(expected) + " ';'-separated entries in '" + line + "'");
  std::vector<Elem> es;
  for (const auto& p : parts) es.push_back(parse_elem(ring, p));
  return es;
}

}  // namespace

Atom parse_atom(const Ring& ring, std::size_t n, std::string_view line_view) {
  std::string line = trim(line_view);
  std::istringstream is(line);
  std::string head;
  is >> head;
  auto rest_after = [&](std::size_t tokens) {
    std::istringstream ts(line);
    std::string t;
    for (std::size_t k = 0; k < tokens; ++k) ts >> t;
    std::string r;
    std::getline(ts, r);
    r = trim(r);
    if (r.empty()) throw Error(ErrorCode::ParseError, "missing element in '" + line + "'");
    return r;
  };
  std::string tok1, tok2;
  Atom a;
  if (head == "S") {
    is >> tok1 >> tok2;
    a = Atom::s(parse_index(tok1, line), parse_index(tok2, line), parse_elem(ring, rest_after(3)));
  } else if (head == "E12") {
    a = Atom::e12(parse_elem(ring, rest_after(1)));
  } else if (head == "E21") {
    a = Atom::e21(parse_elem(ring, rest_after(1)));
  } else if (head.size() == 1 && shape_from_char(head[0])) {
    is >> tok1;
    a = Atom::abcd(*shape_from_char(head[0]), parse_index(tok1, line), parse_elem(ring, rest_after(2)));
  } else if ((head == "UB" || head == "UC")) {
    is >> tok1;
    a = Atom::unit(*shape_from_char(head[1]), parse_index(tok1, line), parse_elem(ring, rest_after(2)));
  } else if (head.size() == 2 && head[0] == 'P' && shape_from_char(head[1])) {
    is >> tok1 >> tok2;
    a = Atom::placed(*shape_from_char(head[1]), parse_index(tok1, line), parse_index(tok2, line),
                     parse_elem(ring, rest_after(3)));
  } else if (head == "EBLK") {
    is >> tok1;
    a = Atom::block(parse_index(tok1, line), Matrix::from_entries(ring, 2, 2, parse_entries(ring, rest_after(2), 4, line)));
    if (!det2(a.mat).is_zero()) throw Error(ErrorCode::NonZeroDet, "EBLK block must have determinant 0: '" + line + "'");
  } else if (head == "CORNER") {
    a = Atom::corner(Matrix::from_entries(ring, 2, 2, parse_entries(ring, rest_after(1), 4, line)));
    if (!det2(a.mat).is_one()) throw Error(ErrorCode::ParseError, "CORNER must have determinant 1: '" + line + "'");
  } else if (head == "DIAG") {
    auto es = parse_entries(ring, rest_after(1), 4 * n, line);
    std::vector<Matrix> bs;
    for (std::size_t k = 0; k < n; ++k)
      bs.push_back(Matrix::from_entries(ring, 2, 2, {es[4 * k], es[4 * k + 1], es[4 * k + 2], es[4 * k + 3]}));
    a = Atom::diag(std::move(bs));
  } else if (head == "DENSE") {
    a = Atom::dense(Matrix::from_entries(ring, 2 * n, 2 * n, parse_entries(ring, rest_after(1), 4 * n * n, line)));
    if (!is_symplectic(a.mat)) throw Error(ErrorCode::ParseError, "DENSE matrix is not symplectic: '" + line + "'");
  } else {
    throw Error(ErrorCode::ParseError, "unknown atom '" + head + "'");
  }
  check_atom(a, n);
  return a;
}

Word parse_word(const Ring& ring, std::size_t n, std::string_view text) {
  Word w(ring, n);
  auto lines = split(text, '\n');
  for (std::size_t k = 0; k < lines.size(); ++k) {
    std::string line = lines[k];
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      w.atoms.push_back(parse_atom(ring, n, line));
    } catch (const Error& e) {
      ErrorCode code = e.code() == ErrorCode::BadIndices ? ErrorCode::BadIndices : ErrorCode::ParseError;
      throw Error(code, "line " + std::to_string(k + 1) + ": " + e.what());
    }
  }
  return w;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t word_digest(const Word& w) { return fnv1a64(w.ring->descriptor() + "\n" + word_text(w)); }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace esp
