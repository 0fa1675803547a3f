//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include "leakaudit/chem/smiles.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "leakaudit/chem/element.hpp"

namespace leakaudit::chem {

ParseError::ParseError(std::size_t offset, std::string reason)
    : std::runtime_error("SMILES parse error at offset " +
                         std::to_string(offset) + ": " + reason),
      offset_(offset), reason_(std::move(reason)) { }

std::optional<int> organic_implicit_h(int atomic_number, bool aromatic,
                                      int bond_valence) {
  const auto allowed = allowed_valences(atomic_number, 0);
  if (allowed.empty())
    return std::nullopt;
  if (aromatic) {
    if (bond_valence + 1 <= allowed.front())
      return allowed.front() - bond_valence - 1;
    if (std::ranges::any_of(allowed,
                            [&](int v) { return v >= bond_valence; }))
      return 0;
    return std::nullopt;
  }
  for (const int v: allowed) {
    if (v >= bond_valence)
      return v - bond_valence;
  }
  return std::nullopt;
}

namespace {

struct RawAtom {
  int z = 0;
  int charge = 0;
  std::optional<int> isotope;
  bool aromatic = false;
  bool bracket = false;
  int hcount = 0;
  std::size_t offset = 0;
};

struct RawBond {
  int a;
  int b;
  char symbol;  // 0 when implicit
  std::size_t offset;
};

struct RingOpen {
  int atom;
  char symbol;
  std::size_t offset;
};

bool is_bond_symbol(char c) {
  return c == '-' || c == '=' || c == '#' || c == ':' || c == '/' ||
         c == '\\' || c == '$';
}

// '/' and '\' only carry stereo; for ring-closure agreement they are '-'.
char plain_symbol(char c) {
  return (c == '/' || c == '\\') ? '-' : c;
}

class Parser {
public:
  Parser(std::string_view text, std::size_t base): text_(text), base_(base) { }

  Molecule run();

private:
  [[noreturn]] void fail(std::size_t pos, std::string reason) const {
    throw ParseError(base_ + pos, std::move(reason));
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  int parse_organic_atom();
  int parse_bracket_atom();
  int parse_ring_number();
  void add_atom_to_chain(int atom, std::size_t offset);

  std::string_view text_;
  std::size_t base_;
  std::size_t pos_ = 0;

  std::vector<RawAtom> atoms_;
  std::vector<RawBond> bonds_;

  int prev_ = -1;
  char pending_bond_ = 0;
  std::size_t pending_offset_ = 0;
  std::vector<std::pair<int, std::size_t>> branches_;  // (atom, offset of "(")
  std::map<int, RingOpen> rings_;
};

int Parser::parse_organic_atom() {
  const std::size_t start = pos_;
  const char c = peek();
  RawAtom atom;
  atom.offset = start;
  if (c == 'C' && peek(1) == 'l') {
    atom.z = 17;
    pos_ += 2;
  } else if (c == 'B' && peek(1) == 'r') {
    atom.z = 35;
    pos_ += 2;
  } else {
    switch (c) {
    case 'B':
      atom.z = 5;
      break;
    case 'C':
      atom.z = 6;
      break;
    case 'N':
      atom.z = 7;
      break;
    case 'O':
      atom.z = 8;
      break;
    case 'P':
      atom.z = 15;
      break;
    case 'S':
      atom.z = 16;
      break;
    case 'F':
      atom.z = 9;
      break;
    case 'I':
      atom.z = 53;
      break;
    case 'b':
      atom.z = 5;
      atom.aromatic = true;
      break;
    case 'c':
      atom.z = 6;
      atom.aromatic = true;
      break;
    case 'n':
      atom.z = 7;
      atom.aromatic = true;
      break;
    case 'o':
      atom.z = 8;
      atom.aromatic = true;
      break;
    case 'p':
      atom.z = 15;
      atom.aromatic = true;
      break;
    case 's':
      atom.z = 16;
      atom.aromatic = true;
      break;
    case '*':
      fail(start, "wildcard atom '*' is not supported");
    default:
      fail(start, std::string("unknown element symbol '") + c + "'");
    }
    ++pos_;
  }
  atoms_.push_back(atom);
  return static_cast<int>(atoms_.size()) - 1;
}

int Parser::parse_bracket_atom() {
  const std::size_t start = pos_;
  ++pos_;  // '['
  RawAtom atom;
  atom.offset = start;
  atom.bracket = true;

  if (std::isdigit(static_cast<unsigned char>(peek()))) {
    int iso = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      iso = iso * 10 + (peek() - '0');
      if (iso > 999)
        fail(pos_, "isotope out of range");
      ++pos_;
    }
    atom.isotope = iso;
  }

  const std::size_t sym_pos = pos_;
  const char c0 = peek();
  if (std::islower(static_cast<unsigned char>(c0))) {
    static constexpr std::array<std::pair<std::string_view, int>, 8>
        kAromatic = {{{"se", 34},
                      {"as", 33},
                      {"b", 5},
                      {"c", 6},
                      {"n", 7},
                      {"o", 8},
                      {"p", 15},
                      {"s", 16}}};
    bool found = false;
    for (const auto &[sym, z]: kAromatic) {
      if (text_.substr(pos_, sym.size()) == sym) {
        atom.z = z;
        atom.aromatic = true;
        pos_ += sym.size();
        found = true;
        break;
      }
    }
    if (!found)
      fail(sym_pos, std::string("unknown aromatic element symbol '") + c0 +
                        "'");
  } else if (std::isupper(static_cast<unsigned char>(c0))) {
    const char c1 = peek(1);
    std::optional<int> z;
    if (std::islower(static_cast<unsigned char>(c1))) {
      z = element_from_symbol(text_.substr(pos_, 2));
      if (z)
        pos_ += 2;
    }
    if (!z) {
      z = element_from_symbol(text_.substr(pos_, 1));
      if (!z)
        fail(sym_pos, std::string("unknown element symbol '") + c0 + "'");
      ++pos_;
    }
    atom.z = *z;
  } else if (c0 == '*') {
    fail(sym_pos, "wildcard atom '*' is not supported");
  } else {
    fail(sym_pos, "expected element symbol in bracket atom");
  }

  // Chirality is parsed and dropped.
  if (peek() == '@') {
    ++pos_;
    if (peek() == '@') {
      ++pos_;
    } else {
      static constexpr std::array<std::string_view, 5> kClasses = {
          "TH", "AL", "SP", "TB", "OH"};
      for (const auto cls: kClasses) {
        if (text_.substr(pos_, 2) == cls) {
          pos_ += 2;
          if (!std::isdigit(static_cast<unsigned char>(peek())))
            fail(pos_, "chirality class requires a number");
          while (std::isdigit(static_cast<unsigned char>(peek())))
            ++pos_;
          break;
        }
      }
    }
  }

  if (peek() == 'H') {
    ++pos_;
    atom.hcount = 1;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      atom.hcount = peek() - '0';
      ++pos_;
    }
  }

  if (peek() == '+' || peek() == '-') {
    const char sign = peek();
    const int s = sign == '+' ? 1 : -1;
    ++pos_;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      int mag = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        mag = mag * 10 + (peek() - '0');
        ++pos_;
      }
      if (mag > 15)
        fail(pos_, "formal charge out of range");
      atom.charge = s * mag;
    } else {
      int mag = 1;
      while (peek() == sign) {
        ++mag;
        ++pos_;
      }
      atom.charge = s * mag;
    }
  }

  if (peek() == ':') {
    ++pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      fail(pos_, "atom class requires a number");
    while (std::isdigit(static_cast<unsigned char>(peek())))
      ++pos_;
  }

  if (peek() != ']') {
    if (at_end())
      fail(start, "unbalanced '[': missing ']'");
    fail(pos_, std::string("unexpected character '") + peek() +
                   "' in bracket atom");
  }
  ++pos_;
  atoms_.push_back(atom);
  return static_cast<int>(atoms_.size()) - 1;
}

int Parser::parse_ring_number() {
  if (peek() != '%') {
    const int n = peek() - '0';
    ++pos_;
    return n;
  }
  const std::size_t start = pos_;
  ++pos_;
  if (peek() == '(') {
    ++pos_;
    int n = 0;
    bool any = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      n = n * 10 + (peek() - '0');
      if (n > 99999)
        fail(start, "ring closure number out of range");
      ++pos_;
      any = true;
    }
    if (!any || peek() != ')')
      fail(start, "malformed %(n) ring closure");
    ++pos_;
    return n;
  }
  if (!std::isdigit(static_cast<unsigned char>(peek())) ||
      !std::isdigit(static_cast<unsigned char>(peek(1))))
    fail(start, "'%' must be followed by two digits");
  const int n = (peek() - '0') * 10 + (peek(1) - '0');
  pos_ += 2;
  return n;
}

void Parser::add_atom_to_chain(int atom, std::size_t offset) {
  if (prev_ >= 0) {
    bonds_.push_back({prev_, atom, pending_bond_,
                      pending_bond_ != 0 ? pending_offset_ : offset});
  } else if (pending_bond_ != 0) {
    fail(pending_offset_, "bond symbol without a preceding atom");
  }
  pending_bond_ = 0;
  prev_ = atom;
}

Molecule Parser::run() {
  bool just_opened_branch = false;
  while (!at_end()) {
    const char c = peek();
    const std::size_t here = pos_;
    if (c == '[') {
      add_atom_to_chain(parse_bracket_atom(), here);
      just_opened_branch = false;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '*') {
      add_atom_to_chain(parse_organic_atom(), here);
      just_opened_branch = false;
    } else if (c == '(') {
      if (prev_ < 0)
        fail(here, "branch without a preceding atom");
      if (pending_bond_ != 0)
        fail(pending_offset_, "bond symbol before '('");
      branches_.emplace_back(prev_, here);
      ++pos_;
      just_opened_branch = true;
    } else if (c == ')') {
      if (branches_.empty())
        fail(here, "unbalanced ')'");
      if (just_opened_branch)
        fail(here, "empty branch");
      if (pending_bond_ != 0)
        fail(pending_offset_, "bond symbol not followed by an atom");
      prev_ = branches_.back().first;
      branches_.pop_back();
      ++pos_;
    } else if (is_bond_symbol(c)) {
      if (c == '$')
        fail(here, "quadruple bonds are not supported");
      if (pending_bond_ != 0)
        fail(here, "consecutive bond symbols");
      if (prev_ < 0)
        fail(here, "bond symbol without a preceding atom");
      pending_bond_ = c;
      pending_offset_ = here;
      ++pos_;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
      if (prev_ < 0)
        fail(here, "ring closure without a preceding atom");
      const int num = parse_ring_number();
      if (auto it = rings_.find(num); it != rings_.end()) {
        const RingOpen open = it->second;
        rings_.erase(it);
        char sym = pending_bond_ != 0 ? pending_bond_ : open.symbol;
        if (pending_bond_ != 0 && open.symbol != 0 &&
            plain_symbol(pending_bond_) != plain_symbol(open.symbol))
          fail(here, "conflicting bond symbols on ring closure " +
                         std::to_string(num));
        bonds_.push_back({open.atom, prev_, sym, here});
      } else {
        rings_.emplace(num, RingOpen {prev_, pending_bond_, here});
      }
      pending_bond_ = 0;
      just_opened_branch = false;
    } else if (c == '.') {
      if (pending_bond_ != 0)
        fail(pending_offset_, "bond symbol before '.'");
      prev_ = -1;
      ++pos_;
      just_opened_branch = false;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      fail(here, "unexpected whitespace");
    } else if (c == ']') {
      fail(here, "unbalanced ']'");
    } else {
      fail(here, std::string("unexpected character '") + c + "'");
    }
  }

  if (pending_bond_ != 0)
    fail(pending_offset_, "bond symbol not followed by an atom");
  if (!branches_.empty())
    fail(branches_.back().second, "unbalanced '(': missing ')'");
  if (!rings_.empty()) {
    const auto &[num, open] = *rings_.begin();
    fail(open.offset,
         "unresolved ring-closure digit " + std::to_string(num));
  }

  const int n = static_cast<int>(atoms_.size());

  // Simple-graph checks with source offsets.
  {
    std::set<std::pair<int, int>> seen;
    for (const RawBond &b: bonds_) {
      if (b.a == b.b)
        fail(b.offset, "ring closure bonds an atom to itself");
      if (!seen.emplace(std::minmax(b.a, b.b)).second)
        fail(b.offset, "duplicate bond between the same pair of atoms");
    }
  }

  // Ring membership decides whether an unmarked bond between two aromatic
  // atoms is aromatic.
  std::vector<Bond> provisional;
  provisional.reserve(bonds_.size());
  for (const RawBond &b: bonds_)
    provisional.push_back({b.a, b.b, BondOrder::kSingle});
  std::vector<Atom> placeholder(static_cast<std::size_t>(n));
  const Molecule topo(placeholder, provisional);

  std::vector<Bond> bonds;
  bonds.reserve(bonds_.size());
  for (std::size_t i = 0; i < bonds_.size(); ++i) {
    const RawBond &rb = bonds_[i];
    const bool both_aromatic = atoms_[static_cast<std::size_t>(rb.a)].aromatic &&
                               atoms_[static_cast<std::size_t>(rb.b)].aromatic;
    const bool ring = topo.is_ring_bond(static_cast<int>(i));
    BondOrder order = BondOrder::kSingle;
    switch (rb.symbol) {
    case '=':
      order = BondOrder::kDouble;
      break;
    case '#':
      order = BondOrder::kTriple;
      break;
    case ':':
      if (!both_aromatic)
        fail(rb.offset, "aromatic bond between non-aromatic atoms");
      if (!ring)
        fail(rb.offset, "aromatic bond outside a ring");
      order = BondOrder::kAromatic;
      break;
    case 0:
      order = (both_aromatic && ring) ? BondOrder::kAromatic
                                      : BondOrder::kSingle;
      break;
    default:
      break;
    }
    bonds.push_back({rb.a, rb.b, order});
  }

  std::vector<int> aromatic_bonds(static_cast<std::size_t>(n), 0);
  std::vector<int> valence(static_cast<std::size_t>(n), 0);
  for (const Bond &b: bonds) {
    if (b.order == BondOrder::kAromatic) {
      ++aromatic_bonds[static_cast<std::size_t>(b.a)];
      ++aromatic_bonds[static_cast<std::size_t>(b.b)];
    }
    valence[static_cast<std::size_t>(b.a)] += valence_contribution(b.order);
    valence[static_cast<std::size_t>(b.b)] += valence_contribution(b.order);
  }
  for (int i = 0; i < n; ++i) {
    const RawAtom &ra = atoms_[static_cast<std::size_t>(i)];
    if (ra.aromatic && aromatic_bonds[static_cast<std::size_t>(i)] < 2)
      fail(ra.offset, "aromatic atom is not part of an aromatic ring");
  }

  // Plain [H] with one heavy neighbor on a single bond is folded into that
  // neighbor's hydrogen count.
  std::vector<std::uint8_t> drop(static_cast<std::size_t>(n), 0);
  std::vector<int> folded_h(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const RawAtom &ra = atoms_[static_cast<std::size_t>(i)];
    if (ra.z != 1 || !ra.bracket || ra.isotope || ra.charge != 0 ||
        ra.hcount != 0 || topo.degree(i) != 1)
      continue;
    const Neighbor nb = topo.neighbors(i).front();
    if (atoms_[static_cast<std::size_t>(nb.atom)].z == 1 ||
        bonds[static_cast<std::size_t>(nb.bond)].order != BondOrder::kSingle)
      continue;
    drop[static_cast<std::size_t>(i)] = 1;
    ++folded_h[static_cast<std::size_t>(nb.atom)];
  }

  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const RawAtom &ra = atoms_[static_cast<std::size_t>(i)];
    const int bv = valence[static_cast<std::size_t>(i)];
    Atom a;
    a.atomic_number = ra.z;
    a.formal_charge = ra.charge;
    a.isotope = ra.isotope;
    a.aromatic = ra.aromatic;
    if (ra.bracket) {
      const auto allowed = allowed_valences(ra.z, ra.charge);
      if (!allowed.empty() && bv + ra.hcount > allowed.back())
        fail(ra.offset, "valence of " + std::string(element_symbol(ra.z)) +
                            " exceeds every allowed valence");
      a.implicit_h = ra.hcount;
    } else {
      // Folded hydrogens are already counted in the bond valence.
      const auto h = organic_implicit_h(ra.z, ra.aromatic, bv);
      if (!h)
        fail(ra.offset, "valence of " + std::string(element_symbol(ra.z)) +
                            " exceeds every allowed valence");
      a.implicit_h = *h;
    }
    a.implicit_h += folded_h[static_cast<std::size_t>(i)];
    atoms.push_back(a);
  }

  // Drop folded hydrogens and renumber.
  std::vector<int> remap(static_cast<std::size_t>(n), -1);
  std::vector<Atom> kept;
  kept.reserve(atoms.size());
  for (int i = 0; i < n; ++i) {
    if (drop[static_cast<std::size_t>(i)])
      continue;
    remap[static_cast<std::size_t>(i)] = static_cast<int>(kept.size());
    kept.push_back(atoms[static_cast<std::size_t>(i)]);
  }
  std::vector<Bond> kept_bonds;
  kept_bonds.reserve(bonds.size());
  for (const Bond &b: bonds) {
    const int a = remap[static_cast<std::size_t>(b.a)];
    const int c = remap[static_cast<std::size_t>(b.b)];
    if (a < 0 || c < 0)
      continue;
    kept_bonds.push_back({a, c, b.order});
  }
  return Molecule(std::move(kept), std::move(kept_bonds));
}

bool ring_element(int z) {
  return z == 6 || z == 7 || z == 8 || z == 16;
}

// Enumerates simple 6-cycles through ring bonds, each once, as atom lists
// starting at their smallest atom.
std::vector<std::array<int, 6>> six_rings(const Molecule &mol) {
  std::vector<std::array<int, 6>> rings;
  std::array<int, 6> path {};
  std::vector<std::uint8_t> on_path(static_cast<std::size_t>(mol.atom_count()),
                                    0);

  auto extend = [&](auto &&self, int depth) -> void {
    const int last = path[static_cast<std::size_t>(depth) - 1];
    for (const Neighbor &nb: mol.neighbors(last)) {
      if (!mol.is_ring_bond(nb.bond))
        continue;
      const int v = nb.atom;
      if (depth == 6) {
        if (v == path[0] && path[1] < path[5])
          rings.push_back(path);
        continue;
      }
      if (v <= path[0] || on_path[static_cast<std::size_t>(v)])
        continue;
      path[static_cast<std::size_t>(depth)] = v;
      on_path[static_cast<std::size_t>(v)] = 1;
      self(self, depth + 1);
      on_path[static_cast<std::size_t>(v)] = 0;
    }
  };

  for (int s = 0; s < mol.atom_count(); ++s) {
    if (!mol.is_ring_atom(s))
      continue;
    path[0] = s;
    on_path[static_cast<std::size_t>(s)] = 1;
    extend(extend, 1);
    on_path[static_cast<std::size_t>(s)] = 0;
  }
  return rings;
}

// Marks alternating single/double six-membered C/N/O/S rings aromatic so
// Kekule and aromatic spellings converge. Already aromatic bonds match
// either parity, which lets fused Kekule systems resolve over repeated
// passes.
Molecule aromatize_alternating_rings(const Molecule &mol) {
  const auto rings = six_rings(mol);
  if (rings.empty())
    return mol;

  std::vector<Atom> atoms = mol.atoms();
  std::vector<Bond> bonds = mol.bonds();
  std::vector<std::uint8_t> done(rings.size(), 0);

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t r = 0; r < rings.size(); ++r) {
      if (done[r])
        continue;
      const auto &ring = rings[r];
      if (!std::ranges::all_of(ring, [&](int a) {
            return ring_element(atoms[static_cast<std::size_t>(a)].atomic_number);
          }))
        continue;

      std::array<int, 6> ring_bonds {};
      int non_aromatic = 0;
      for (std::size_t i = 0; i < 6; ++i) {
        ring_bonds[i] = mol.find_bond(ring[i], ring[(i + 1) % 6]);
        if (bonds[static_cast<std::size_t>(ring_bonds[i])].order !=
            BondOrder::kAromatic)
          ++non_aromatic;
      }
      if (non_aromatic == 0) {
        done[r] = 1;
        continue;
      }

      bool alternating = false;
      for (std::size_t parity = 0; parity < 2 && !alternating; ++parity) {
        alternating = true;
        for (std::size_t i = 0; i < 6; ++i) {
          const BondOrder o = bonds[static_cast<std::size_t>(ring_bonds[i])].order;
          const BondOrder want =
              (i % 2 == parity) ? BondOrder::kDouble : BondOrder::kSingle;
          if (o != BondOrder::kAromatic && o != want) {
            alternating = false;
            break;
          }
        }
      }
      if (!alternating)
        continue;

      for (const int a: ring)
        atoms[static_cast<std::size_t>(a)].aromatic = true;
      for (const int b: ring_bonds)
        bonds[static_cast<std::size_t>(b)].order = BondOrder::kAromatic;
      done[r] = 1;
      changed = true;
    }
  }
  return Molecule(std::move(atoms), std::move(bonds), mol.source_id());
}

}  // namespace

Molecule parse_smiles(std::string_view text) {
  std::size_t begin = 0;
  while (begin < text.size() &&
         std::isspace(static_cast<unsigned char>(text[begin])))
    ++begin;
  std::size_t end = text.size();
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])))
    --end;
  if (begin == end)
    throw ParseError(0, "empty SMILES string");

  Parser parser(text.substr(begin, end - begin), begin);
  return aromatize_alternating_rings(parser.run());
}

}  // namespace leakaudit::chem
