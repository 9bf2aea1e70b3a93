#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dpz/dynkin_type.hpp"
#include "dpz/errors.hpp"

namespace dpz {

// ---------------------------------------------------------------------------
// The Picard lattice of a degree-2 weak del Pezzo surface, realized as the
// blowup of the plane in seven points: basis (L, e1..e7), intersection form
// diag(1,-1,...,-1), canonical class K = -3L + e1 + ... + e7 with K^2 = 2.
// ---------------------------------------------------------------------------

struct LatticeClass {
  std::array<int, 8> v{};  // (L-coefficient, e1..e7 coefficients)

  int& operator[](int i) { return v[i]; }
  int operator[](int i) const { return v[i]; }
  bool operator==(const LatticeClass&) const = default;
  bool operator<(const LatticeClass& other) const { return v < other.v; }

  LatticeClass operator+(const LatticeClass& o) const {
    LatticeClass r;
    for (int i = 0; i < 8; ++i) r.v[i] = v[i] + o.v[i];
    return r;
  }
  LatticeClass operator-() const {
    LatticeClass r;
    for (int i = 0; i < 8; ++i) r.v[i] = -v[i];
    return r;
  }
  LatticeClass scaled(int s) const {
    LatticeClass r;
    for (int i = 0; i < 8; ++i) r.v[i] = s * v[i];
    return r;
  }
};

inline int dot(const LatticeClass& a, const LatticeClass& b) {
  int total = a.v[0] * b.v[0];
  for (int i = 1; i < 8; ++i) total -= a.v[i] * b.v[i];
  return total;
}

inline LatticeClass canonical_class() {
  LatticeClass k;
  k.v = {-3, 1, 1, 1, 1, 1, 1, 1};
  return k;
}

inline LatticeClass line_class() {
  LatticeClass l;
  l.v = {1, 0, 0, 0, 0, 0, 0, 0};
  return l;
}

inline LatticeClass exceptional_class(int i) {
  if (i < 1 || i > 7) throw input_error("exceptional basis index out of range");
  LatticeClass e;
  e.v[i] = 1;
  return e;
}

/// Root difference e_i - e_j; handy when writing chains in tests.
inline LatticeClass e_diff(int i, int j) {
  LatticeClass r = exceptional_class(i);
  r.v[j] -= 1;
  return r;
}

inline std::string to_string(const LatticeClass& c) {
  std::string s = "(";
  for (int i = 0; i < 8; ++i) {
    if (i) s += ",";
    s += std::to_string(c.v[i]);
  }
  return s + ")";
}

/// Reflection in a root R (R^2 = -2): x -> x + (x.R) R.
inline LatticeClass reflect(const LatticeClass& x, const LatticeClass& root) {
  return x + root.scaled(dot(x, root));
}

enum class ClassKind { MinusOne, Root };

class Dp2Lattice {
 public:
  Dp2Lattice() {
    enumerate();
    build_neighbors();
  }

  /// All classes with (E^2, E.K) = (-1,-1) or (R^2, R.K) = (-2,0), in
  /// lexicographic coordinate order. Bounded exhaustive search: the two
  /// quadratic constraints force |L-coefficient| <= 3 and entry bounds 4.
  const std::vector<LatticeClass>& classes(ClassKind kind) const {
    return kind == ClassKind::MinusOne ? minus_ones_ : roots_;
  }

  const std::vector<LatticeClass>& minus_one_classes() const { return minus_ones_; }
  const std::vector<LatticeClass>& roots() const { return roots_; }

  std::optional<int> root_index(const LatticeClass& r) const {
    auto it = std::lower_bound(roots_.begin(), roots_.end(), r);
    if (it == roots_.end() || !(*it == r)) return std::nullopt;
    return static_cast<int>(it - roots_.begin());
  }

  bool is_root(const LatticeClass& r) const { return root_index(r).has_value(); }

  /// Ordered tuples (R_1..R_n) of roots forming a chain: consecutive pairing
  /// 1, all other pairings 0. `limit` == 0 enumerates everything.
  std::vector<std::vector<LatticeClass>> find_chain_embeddings(int n,
                                                               std::size_t limit = 0) const {
    std::vector<std::vector<LatticeClass>> out;
    for_each_chain(n, [&](const std::vector<LatticeClass>& tuple) {
      out.push_back(tuple);
      return limit == 0 || out.size() < limit;
    });
    return out;
  }

  /// Depth-first enumeration of chain embeddings in lexicographic root
  /// order; the visitor returns false to stop early.
  void for_each_chain(int n,
                      const std::function<bool(const std::vector<LatticeClass>&)>& visit) const {
    if (n < 1 || n > 7) throw input_error("chain length must lie in 1..7");
    std::vector<int> chain;
    enumerate_chains(n, chain, [&](const std::vector<int>& ids) {
      std::vector<LatticeClass> tuple;
      tuple.reserve(ids.size());
      for (int id : ids) tuple.push_back(roots_[id]);
      return visit(tuple);
    });
  }

  /// Grows a random chain embedding of length n; deterministic for a given
  /// generator state. Used for sampled property suites.
  std::vector<LatticeClass> random_chain(int n, std::mt19937_64& rng) const {
    if (n < 1 || n > 7) throw input_error("chain length must lie in 1..7");
    for (int attempt = 0; attempt < 10000; ++attempt) {
      std::vector<int> ids;
      ids.push_back(std::uniform_int_distribution<int>(0, static_cast<int>(roots_.size()) - 1)(rng));
      while (static_cast<int>(ids.size()) < n) {
        std::vector<int> options;
        for (int cand : neighbors_[ids.back()]) {
          bool ok = true;
          for (std::size_t j = 0; j + 1 < ids.size(); ++j)
            if (dot(roots_[cand], roots_[ids[j]]) != 0) {
              ok = false;
              break;
            }
          if (ok) options.push_back(cand);
        }
        if (options.empty()) break;
        ids.push_back(options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)]);
      }
      if (static_cast<int>(ids.size()) == n) {
        std::vector<LatticeClass> tuple;
        for (int id : ids) tuple.push_back(roots_[id]);
        return tuple;
      }
    }
    throw std::logic_error("random chain growth failed to terminate");
  }

 private:
  std::vector<LatticeClass> minus_ones_;
  std::vector<LatticeClass> roots_;
  std::vector<std::vector<int>> neighbors_;  // roots pairing 1 with a given root

  void enumerate() {
    LatticeClass k = canonical_class();
    for (int d = -3; d <= 3; ++d) {
      LatticeClass c;
      c.v[0] = d;
      search_coeffs(c, 1, k);
    }
    std::sort(minus_ones_.begin(), minus_ones_.end());
    std::sort(roots_.begin(), roots_.end());
  }

  void search_coeffs(LatticeClass& c, int pos, const LatticeClass& k) {
    if (pos == 8) {
      int self = dot(c, c);
      int deg = dot(c, k);
      if (self == -1 && deg == -1) minus_ones_.push_back(c);
      if (self == -2 && deg == 0) roots_.push_back(c);
      return;
    }
    // Remaining square budget: need sum of e-squares to be d^2+1 or d^2+2.
    int used = 0;
    for (int i = 1; i < pos; ++i) used += c.v[i] * c.v[i];
    int budget = c.v[0] * c.v[0] + 2 - used;
    if (budget < 0) return;
    for (int value = -4; value <= 4; ++value) {
      if (value * value > budget) continue;
      c.v[pos] = value;
      search_coeffs(c, pos + 1, k);
    }
    c.v[pos] = 0;
  }

  void build_neighbors() {
    neighbors_.assign(roots_.size(), {});
    for (std::size_t i = 0; i < roots_.size(); ++i)
      for (std::size_t j = 0; j < roots_.size(); ++j)
        if (i != j && dot(roots_[i], roots_[j]) == 1) neighbors_[i].push_back(static_cast<int>(j));
  }

  // Depth-first chain enumeration in lexicographic root order; the visitor
  // returns false to stop early.
  bool enumerate_chains(int n, std::vector<int>& chain,
                        const std::function<bool(const std::vector<int>&)>& visit) const {
    if (static_cast<int>(chain.size()) == n) return visit(chain);
    const std::vector<int>* candidates = nullptr;
    std::vector<int> all;
    if (chain.empty()) {
      all.resize(roots_.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
      candidates = &all;
    } else {
      candidates = &neighbors_[chain.back()];
    }
    for (int cand : *candidates) {
      bool ok = true;
      for (std::size_t j = 0; j + 1 < chain.size(); ++j)
        if (dot(roots_[cand], roots_[chain[j]]) != 0) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chain.push_back(cand);
      bool keep_going = enumerate_chains(n, chain, visit);
      chain.pop_back();
      if (!keep_going) return false;
    }
    return true;
  }
};

// ---------------------------------------------------------------------------
// Special (-1)-class patterns attached to a chain of roots. Witnesses are
// lattice-level certificates: necessary conditions for the corresponding
// curves to exist on an actual surface, not proofs of realizability.
// ---------------------------------------------------------------------------

enum class PatternKind { A, B, C };

struct SpecialCurvePattern {
  PatternKind kind;
  std::vector<LatticeClass> witnesses;       // one or two (-1)-classes
  std::optional<LatticeClass> isolated_root; // kind C only
};

namespace detail {

/// True when E pairs delta_{j,position} with the chain.
inline bool pairs_delta(const LatticeClass& e, const std::vector<LatticeClass>& chain,
                        std::size_t position) {
  for (std::size_t j = 0; j < chain.size(); ++j)
    if (dot(e, chain[j]) != (j + 1 == position ? 1 : 0)) return false;
  return true;
}

/// Class identity 2E = -K - sum m_j R_j (- m4 R4), the half-anticanonical
/// form a one-witness pattern must satisfy.
inline bool half_anticanonical_identity(const LatticeClass& e,
                                        const std::vector<LatticeClass>& chain,
                                        const std::vector<int>& mults,
                                        const LatticeClass* extra, int extra_mult) {
  LatticeClass sum = e.scaled(2) + canonical_class();
  for (std::size_t j = 0; j < chain.size(); ++j) sum = sum + chain[j].scaled(mults[j]);
  if (extra) sum = sum + extra->scaled(extra_mult);
  return sum == LatticeClass{};
}

}  // namespace detail

inline bool is_kind_b_witness(const LatticeClass& e, const std::vector<LatticeClass>& chain) {
  if (chain.size() != 5) return false;
  return detail::pairs_delta(e, chain, 3) &&
         detail::half_anticanonical_identity(e, chain, {1, 2, 3, 2, 1}, nullptr, 0);
}

inline bool is_kind_c_witness(const LatticeClass& e, const std::vector<LatticeClass>& chain,
                              const LatticeClass& isolated) {
  if (chain.size() != 3) return false;
  for (const auto& r : chain)
    if (dot(isolated, r) != 0) return false;
  return detail::pairs_delta(e, chain, 2) && dot(e, isolated) == 1 &&
         detail::half_anticanonical_identity(e, chain, {1, 2, 1}, &isolated, 1);
}

/// Searches for the first special pattern attached to an A_n chain of roots
/// (n >= 3), trying the two-witness pattern first, then the one-witness
/// patterns. `extra_roots` supplies the candidate isolated roots that the
/// one-witness n = 3 pattern needs; the search only verifies orthogonality,
/// it does not hunt for global configurations.
inline SpecialCurvePattern special_curve_search(const Dp2Lattice& lattice,
                                                const std::vector<LatticeClass>& chain,
                                                const std::vector<LatticeClass>& extra_roots = {}) {
  const std::size_t n = chain.size();
  if (n < 3) throw input_error("special-curve search needs a chain of length >= 3");
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      int expected = (j == k) ? -2 : (j + 1 == k || k + 1 == j ? 1 : 0);
      if (dot(chain[j], chain[k]) != expected)
        throw input_error("chain argument is not a chain of roots");
    }
    if (!lattice.is_root(chain[j])) throw input_error("chain entry is not a root");
  }

  const auto& units = lattice.minus_one_classes();

  // Two distinct orthogonal (-1)-classes, one meeting the chain at position
  // 2, the other at position n-1.
  std::vector<LatticeClass> head, tail;
  for (const auto& e : units) {
    if (detail::pairs_delta(e, chain, 2)) head.push_back(e);
    if (detail::pairs_delta(e, chain, n - 1)) tail.push_back(e);
  }
  for (const auto& e1 : head)
    for (const auto& e2 : tail)
      if (!(e1 == e2) && dot(e1, e2) == 0)
        return SpecialCurvePattern{PatternKind::A, {e1, e2}, std::nullopt};

  if (n == 5) {
    for (const auto& e : units)
      if (is_kind_b_witness(e, chain)) return SpecialCurvePattern{PatternKind::B, {e}, std::nullopt};
  }
  if (n == 3) {
    for (const auto& e : units)
      for (const auto& isolated : extra_roots)
        if (is_kind_c_witness(e, chain, isolated))
          return SpecialCurvePattern{PatternKind::C, {e}, isolated};
  }
  throw input_error("no special curve pattern exists for this chain configuration");
}

// ---------------------------------------------------------------------------
// Prime-type refinement. For the ambiguous degree-2 families the singularity
// type is pinned down by whether a (-1)-class meets the central chain
// component (and, for the A3 families, also one of the isolated roots).
// ---------------------------------------------------------------------------

struct ChainEmbedding {
  std::vector<LatticeClass> chain;   // the A5 or A3 component, in chain order
  std::vector<LatticeClass> extras;  // isolated roots (the A1 components)
};

inline DynkinType refine_prime_type(const Dp2Lattice& lattice, const DynkinType& type,
                                    const ChainEmbedding& embedding) {
  validate_dynkin(type);
  if (!prime_mark_applicable(type)) return type;

  const std::size_t n = embedding.chain.size();
  const bool a5_family = (type.summands.front().rank == 5);
  if ((a5_family && n != 5) || (!a5_family && n != 3))
    throw input_error("chain embedding length does not match the Dynkin type");
  const std::size_t center = a5_family ? 3 : 2;

  bool found = false;
  for (const auto& e : lattice.minus_one_classes()) {
    if (!detail::pairs_delta(e, embedding.chain, center)) continue;
    if (a5_family) {
      bool clean = true;
      for (const auto& extra : embedding.extras)
        if (dot(e, extra) != 0) {
          clean = false;
          break;
        }
      if (clean) {
        found = true;
        break;
      }
    } else {
      // A3 families: the witness must also meet one isolated root once and
      // avoid the remaining ones.
      for (std::size_t pick = 0; pick < embedding.extras.size(); ++pick) {
        bool ok = dot(e, embedding.extras[pick]) == 1;
        for (std::size_t other = 0; ok && other < embedding.extras.size(); ++other)
          if (other != pick && dot(e, embedding.extras[other]) != 0) ok = false;
        if (ok) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
  }
  DynkinType out = type;
  out.prime = found ? PrimeMark::Single : PrimeMark::Double;
  return out;
}

}  // namespace dpz
