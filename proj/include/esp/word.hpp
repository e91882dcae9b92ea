#pragma once

// Words in symplectic generators and their evaluation.
//
// Text format, one atom per line ('#' starts a comment):
//   S i j <e>          E12 <e>          E21 <e>
//   A|B|C|D <pos> <e>  UB|UC <pos> <e>  PA|PB|PC|PD <f> <g> <e>
//   EBLK <pos> <e>;<e>;<e>;<e>    (E^pos of a det-0 2x2 block)
//   CORNER <e>;<e>;<e>;<e>        (delta ⊥ I, det delta = 1)
//   DIAG <e>;...                  (delta_1 ⊥ ... ⊥ delta_n, 4n entries)
//   DENSE <e>;...                 (explicit symplectic matrix, 4n^2 entries)

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "esp/symplectic.hpp"

namespace esp {

enum class AtomKind { S, E12, E21, ABCD, Unit, Placed, Block, Corner, Diag, Dense };

struct Atom {
  AtomKind kind = AtomKind::S;
  Shape shape = Shape::A;
  std::size_t i = 0;  // S: row; ABCD/Unit/Block: position; Placed: first block
  std::size_t j = 0;  // S: column; Placed: last block
  Elem param;
  Matrix mat;                  // Block/Corner: 2x2; Dense: 2n x 2n
  std::vector<Matrix> blocks;  // Diag

  static Atom s(std::size_t i, std::size_t j, Elem e);
  static Atom e12(Elem e);
  static Atom e21(Elem e);
  static Atom abcd(Shape shape, std::size_t pos, Elem e);
  static Atom unit(Shape shape, std::size_t pos, Elem e);
  static Atom placed(Shape shape, std::size_t f, std::size_t g, Elem e);
  static Atom block(std::size_t pos, Matrix x);
  static Atom corner(Matrix delta);
  static Atom diag(std::vector<Matrix> blocks);
  static Atom dense(Matrix m);

  bool is_abcd() const { return kind == AtomKind::ABCD; }
};

Matrix atom_matrix(const Atom& a, const Ring& ring, std::size_t n);
Atom atom_inverse(const Atom& a);
/// The atom with its parameters pushed into `target` through `f`.
Atom map_atom(const Atom& a, const Ring& target, const std::function<Elem(const Elem&)>& f);
std::string atom_text(const Atom& a);
/// Checks indices against the ambient n; throws BadIndices.
void check_atom(const Atom& a, std::size_t n);

struct Word {
  Ring ring;
  std::size_t n = 2;
  std::vector<Atom> atoms;

  Word() = default;
  Word(Ring r, std::size_t n_, std::vector<Atom> as = {}) : ring(std::move(r)), n(n_), atoms(std::move(as)) {}

  std::size_t size() const { return atoms.size(); }
  bool empty() const { return atoms.empty(); }
  Word& push(Atom a) {
    atoms.push_back(std::move(a));
    return *this;
  }
  Word& append(const Word& w);
};

Matrix eval(const Word& w);
Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);
/// [g, h] = g h g^{-1} h^{-1}.
Word commutator(const Word& g, const Word& h);
/// Parameters mapped into another ring.
Word map_word(const Word& w, const Ring& target, const std::function<Elem(const Elem&)>& f);
Word lift_word(const Word& w, const Ring& target);
bool is_abcd_only(const Word& w);
/// Drops atoms whose parameter is zero (they evaluate to I).
Word drop_trivial(const Word& w);

std::string word_text(const Word& w);
/// Errors name the offending line.
Word parse_word(const Ring& ring, std::size_t n, std::string_view text);
Atom parse_atom(const Ring& ring, std::size_t n, std::string_view line);

std::uint64_t fnv1a64(std::string_view s);
std::uint64_t word_digest(const Word& w);
std::string hex64(std::uint64_t v);

}  // namespace esp
