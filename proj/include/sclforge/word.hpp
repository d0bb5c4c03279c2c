#pragma once

// Free-group words over named generators.
//
// A Word is a freely reduced sequence of run-length blocks (generator, nonzero
// exponent). Adjacent blocks always carry distinct generators, so the block
// list is the unique reduced form and structural equality is group equality in
// the free group.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sclforge {

struct Generator {
  std::string name;
  std::optional<unsigned> index;

  Generator() = default;
  explicit Generator(std::string n, std::optional<unsigned> i = std::nullopt)
      : name(std::move(n)), index(i) {}

  auto operator<=>(const Generator&) const = default;
  bool operator==(const Generator&) const = default;

  std::string str() const {
    return index ? name + std::to_string(*index) : name;
  }
};

struct Block {
  Generator gen;
  std::int64_t exp = 0;
  bool operator==(const Block&) const = default;
};

class Word {
 public:
  Word() = default;

  static Word letter(const Generator& g, std::int64_t e = 1) {
    Word w;
    w.push(g, e);
    return w;
  }

  static Word from_blocks(const std::vector<Block>& blocks) {
    Word w;
    for (const auto& b : blocks) w.push(b.gen, b.exp);
    return w;
  }

  const std::vector<Block>& blocks() const { return blocks_; }
  bool is_identity() const { return blocks_.empty(); }

  /// Number of letters counted with multiplicity.
  std::int64_t length() const {
    std::int64_t n = 0;
    for (const auto& b : blocks_) n += b.exp < 0 ? -b.exp : b.exp;
    return n;
  }

  /// Appends g^e and restores reducedness.
  void push(const Generator& g, std::int64_t e) {
    if (e == 0) return;
    if (!blocks_.empty() && blocks_.back().gen == g) {
      blocks_.back().exp += e;
      if (blocks_.back().exp == 0) blocks_.pop_back();
      return;
    }
    blocks_.push_back({g, e});
  }

  void append(const Word& other) {
    for (const auto& b : other.blocks_) push(b.gen, b.exp);
  }

  Word inverse() const {
    Word w;
    w.blocks_.reserve(blocks_.size());
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it)
      w.blocks_.push_back({it->gen, -it->exp});
    return w;
  }

  Word pow(std::int64_t k) const {
    if (k < 0) return inverse().pow(-k);
    Word w;
    for (std::int64_t i = 0; i < k; ++i) w.append(*this);
    return w;
  }

  /// Exponent sum of one generator.
  std::int64_t exponent_sum(const Generator& g) const {
    std::int64_t s = 0;
    for (const auto& b : blocks_)
      if (b.gen == g) s += b.exp;
    return s;
  }

  /// Generators occurring in the word, sorted and deduplicated.
  std::vector<Generator> support() const {
    std::vector<Generator> out;
    for (const auto& b : blocks_) out.push_back(b.gen);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Text form accepted by parse_word; the identity prints as "1".
  std::string str() const {
    if (blocks_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& b : blocks_) {
      if (!first) os << ' ';
      first = false;
      os << b.gen.str();
      if (b.exp != 1) os << '^' << b.exp;
    }
    return os.str();
  }

  bool operator==(const Word&) const = default;

 private:
  std::vector<Block> blocks_;
};

inline std::ostream& operator<<(std::ostream& os, const Word& w) {
  return os << w.str();
}

inline Word operator*(Word u, const Word& v) {
  u.append(v);
  return u;
}

inline Word reduce_concat(const Word& u, const Word& v) { return u * v; }

/// h z h^-1
inline Word conjugate(const Word& h, const Word& z) {
  return h * z * h.inverse();
}

/// g h g^-1 h^-1
inline Word commutator(const Word& g, const Word& h) {
  return g * h * g.inverse() * h.inverse();
}

/// Ordered generating set; the order fixes abelianization coordinates.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<Generator> gens) : gens_(std::move(gens)) {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (!pos_.emplace(gens_[i], i).second)
        throw std::invalid_argument("duplicate generator " + gens_[i].str());
    }
  }

  /// {a, b}
  static Alphabet two_generator() {
    return Alphabet({Generator("a"), Generator("b")});
  }

  /// {a1, b1, a2, b2, ..., a_genus, b_genus}
  static Alphabet surface(unsigned genus) {
    std::vector<Generator> g;
    for (unsigned i = 1; i <= genus; ++i) {
      g.emplace_back("a", i);
      g.emplace_back("b", i);
    }
    return Alphabet(std::move(g));
  }

  std::size_t rank() const { return gens_.size(); }
  const std::vector<Generator>& generators() const { return gens_; }
  const Generator& operator[](std::size_t i) const { return gens_.at(i); }

  std::optional<std::size_t> position(const Generator& g) const {
    auto it = pos_.find(g);
    if (it == pos_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const Generator& g) const { return pos_.count(g) != 0; }

  bool contains(const Word& w) const {
    return std::all_of(w.blocks().begin(), w.blocks().end(),
                       [&](const Block& b) { return contains(b.gen); });
  }

  /// Abelianization vector in alphabet order.
  std::vector<std::int64_t> exponent_sums(const Word& w) const {
    std::vector<std::int64_t> v(rank(), 0);
    for (const auto& b : w.blocks()) {
      auto p = position(b.gen);
      if (!p) throw std::invalid_argument("generator " + b.gen.str() + " not in alphabet");
      v[*p] += b.exp;
    }
    return v;
  }

 private:
  std::vector<Generator> gens_;
  std::map<Generator, std::size_t> pos_;
};

inline bool has_zero_exponent_sums(const Word& w) {
  for (const auto& g : w.support())
    if (w.exponent_sum(g) != 0) return false;
  return true;
}

/// Homomorphism of free groups given by generator images.
class GroupHom {
 public:
  GroupHom() = default;
  explicit GroupHom(std::map<Generator, Word> images) : images_(std::move(images)) {}

  void set(const Generator& g, Word image) { images_[g] = std::move(image); }

  const std::map<Generator, Word>& images() const { return images_; }

  Word apply(const Word& w) const {
    Word out;
    for (const auto& b : w.blocks()) {
      auto it = images_.find(b.gen);
      if (it == images_.end())
        throw std::invalid_argument("homomorphism has no image for generator " + b.gen.str());
      out.append(it->second.pow(b.exp));
    }
    return out;
  }

  /// a_i -> a, b_i -> b for i = 1..genus.
  static GroupHom surface_to_one_relator(unsigned genus) {
    GroupHom q;
    for (unsigned i = 1; i <= genus; ++i) {
      q.set(Generator("a", i), Word::letter(Generator("a")));
      q.set(Generator("b", i), Word::letter(Generator("b")));
    }
    return q;
  }

 private:
  std::map<Generator, Word> images_;
};

inline Word apply_hom(const GroupHom& phi, const Word& w) { return phi.apply(w); }

}  // namespace sclforge
