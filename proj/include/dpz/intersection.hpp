#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpz/errors.hpp"
#include "dpz/rational.hpp"

namespace dpz {

// ---------------------------------------------------------------------------
// Curve configurations
//
// A CurveConfig is a finite list of smooth rational curves on a smooth
// projective surface together with their integer Gram matrix, canonical
// degrees and a flag marking the curves contracted by the resolution of
// singularities. It is the computational stand-in for the part of the
// Picard group spanned by named curves.
// ---------------------------------------------------------------------------

struct Curve {
  std::string label;
  int self_int = 0;
  int k_degree = 0;  // pairing with the canonical class; -2 - self_int
  bool contracted = false;
};

class CurveConfig {
 public:
  explicit CurveConfig(int surface_k2) : surface_k2_(surface_k2) {}

  int add_curve(const std::string& label, int self_int, bool contracted = false) {
    if (index_.count(label)) throw input_error("duplicate curve label: " + label);
    if (contracted && self_int > -2)
      throw input_error("contracted curve must have self-intersection <= -2: " + label);
    int id = static_cast<int>(curves_.size());
    curves_.push_back(Curve{label, self_int, -2 - self_int, contracted});
    index_[label] = id;
    for (auto& row : gram_) row.push_back(0);
    gram_.emplace_back(curves_.size(), 0);
    gram_[id][id] = self_int;
    return id;
  }

  void set_meeting(const std::string& a, const std::string& b, int mult = 1) {
    int i = id_of(a), j = id_of(b);
    if (i == j) throw input_error("self meeting must go through self_int: " + a);
    if (mult < 0) throw input_error("negative intersection of distinct curves");
    gram_[i][j] = mult;
    gram_[j][i] = mult;
  }

  int id_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw input_error("unknown curve label: " + label);
    return it->second;
  }
  bool has(const std::string& label) const { return index_.count(label) != 0; }

  const Curve& curve(int id) const { return curves_.at(id); }
  const Curve& curve(const std::string& label) const { return curves_.at(id_of(label)); }
  const std::vector<Curve>& curves() const { return curves_; }
  int gram(int i, int j) const { return gram_.at(i).at(j); }
  int surface_k2() const { return surface_k2_; }
  std::size_t size() const { return curves_.size(); }

 private:
  int surface_k2_;
  std::vector<Curve> curves_;
  std::map<std::string, int> index_;
  std::vector<std::vector<int>> gram_;
};

// ---------------------------------------------------------------------------
// Divisors: an exact-rational combination  kappa*K + sum c_i * C_i.
// A label absent from coeffs means coefficient zero.
// ---------------------------------------------------------------------------

struct ExtendedDivisor {
  Rational kappa;                          // coefficient of the canonical class K
  std::map<std::string, Rational> coeffs;  // curve label -> coefficient

  ExtendedDivisor() = default;

  Rational coeff(const std::string& label) const {
    auto it = coeffs.find(label);
    return it == coeffs.end() ? Rational(0) : it->second;
  }

  ExtendedDivisor& add(const std::string& label, const Rational& c) {
    if (c == 0) return *this;
    Rational& slot = coeffs[label];
    slot += c;
    if (slot == 0) coeffs.erase(label);
    return *this;
  }

  ExtendedDivisor& add(const ExtendedDivisor& other, const Rational& scale = Rational(1)) {
    kappa += scale * other.kappa;
    for (const auto& [label, c] : other.coeffs) add(label, scale * c);
    return *this;
  }

  ExtendedDivisor scaled(const Rational& s) const {
    ExtendedDivisor out;
    out.add(*this, s);
    return out;
  }

  bool is_zero() const { return kappa == 0 && coeffs.empty(); }

  static ExtendedDivisor anti_canonical() {
    ExtendedDivisor d;
    d.kappa = -1;
    return d;
  }
  static ExtendedDivisor of_curve(const std::string& label, const Rational& c = Rational(1)) {
    ExtendedDivisor d;
    d.add(label, c);
    return d;
  }
};

/// Intersection number of two divisors, bilinear over the config data:
/// K.K = surface_k2, K.C = k_degree(C), C.C' = gram entry.
inline Rational pairing(const CurveConfig& config, const ExtendedDivisor& a,
                        const ExtendedDivisor& b) {
  Rational total = a.kappa * b.kappa * config.surface_k2();
  for (const auto& [label, c] : b.coeffs) {
    if (a.kappa != 0) total += a.kappa * c * config.curve(label).k_degree;
  }
  for (const auto& [la, ca] : a.coeffs) {
    int i = config.id_of(la);
    if (b.kappa != 0) total += b.kappa * ca * config.curve(i).k_degree;
    for (const auto& [lb, cb] : b.coeffs) total += ca * cb * config.gram(i, config.id_of(lb));
  }
  return total;
}

// ---------------------------------------------------------------------------
// Exact linear algebra helpers
// ---------------------------------------------------------------------------

/// Solves A x = rhs by Gaussian elimination over the rationals.
/// Returns nullopt when the matrix is singular.
inline std::optional<std::vector<Rational>> solve_linear_system(
    std::vector<std::vector<Rational>> a, std::vector<Rational> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      Rational factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      rhs[row] -= factor * rhs[col];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / a[i][i];
  return x;
}

/// Exact negative-definiteness test via leading principal minors: the k-th
/// elimination pivot equals minor(k)/minor(k-1), so the form is negative
/// definite iff every pivot is negative. A zero pivot means a vanishing
/// leading minor, which already rules definiteness out.
inline bool is_negative_definite(const std::vector<std::vector<Rational>>& matrix) {
  const std::size_t n = matrix.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) throw input_error("negative-definiteness test needs a square matrix");
    for (std::size_t j = 0; j < i; ++j)
      if (matrix[i][j] != matrix[j][i])
        throw input_error("negative-definiteness test needs a symmetric matrix");
  }
  std::vector<std::vector<Rational>> a = matrix;
  for (std::size_t col = 0; col < n; ++col) {
    if (a[col][col] >= 0) return false;  // zero pivot or wrong sign
    for (std::size_t row = col + 1; row < n; ++row) {
      if (a[row][col] == 0) continue;
      Rational factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
    }
  }
  return true;
}

inline bool is_negative_definite_int(const std::vector<std::vector<int>>& matrix) {
  std::vector<std::vector<Rational>> a(matrix.size());
  for (std::size_t i = 0; i < matrix.size(); ++i)
    a[i].assign(matrix[i].begin(), matrix[i].end());
  return is_negative_definite(a);
}

inline std::vector<std::vector<Rational>> gram_of(const CurveConfig& config,
                                                  const std::vector<std::string>& labels) {
  std::vector<int> ids;
  ids.reserve(labels.size());
  for (const auto& l : labels) ids.push_back(config.id_of(l));
  std::vector<std::vector<Rational>> g(ids.size(), std::vector<Rational>(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = 0; j < ids.size(); ++j) g[i][j] = config.gram(ids[i], ids[j]);
  return g;
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Riemann-Roch lower bound for dim |D| on a smooth rational surface:
/// (D.(D - K)) / 2. Makes no claim about the actual dimension.
inline Rational riemann_roch_lower_bound(const CurveConfig& config, const ExtendedDivisor& d) {
  Rational self = pairing(config, d, d);
  Rational anti = pairing(config, d, ExtendedDivisor::anti_canonical());
  return (self + anti) / 2;
}

/// Self-intersection of sum a_j D_j along a chain of (-2)-curves, in closed
/// form: -(a_1^2 + a_n^2) - sum (a_j - a_{j+1})^2.
inline Rational an_weighted_self_intersection(const std::vector<long long>& weights) {
  if (weights.empty()) throw input_error("weighted chain needs at least one entry");
  Integer first = weights.front(), last = weights.back();
  Integer total = -(first * first + last * last);
  for (std::size_t j = 0; j + 1 < weights.size(); ++j) {
    Integer diff = Integer(weights[j]) - Integer(weights[j + 1]);
    total -= diff * diff;
  }
  return Rational(total);
}

/// The unique divisor supported on `support` whose pairing with each support
/// curve equals the prescribed target. Requires the support Gram matrix to
/// be negative definite (which guarantees uniqueness).
inline ExtendedDivisor solve_prescribed_pairing(const CurveConfig& config,
                                                const std::vector<std::string>& support,
                                                const std::map<std::string, Rational>& targets) {
  for (const auto& [label, value] : targets) {
    (void)value;
    config.id_of(label);  // throws on unknown labels
  }
  auto g = gram_of(config, support);
  if (!is_negative_definite(g))
    throw input_error("prescribed-pairing solve needs a negative definite support");
  std::vector<Rational> rhs(support.size(), Rational(0));
  for (std::size_t i = 0; i < support.size(); ++i) {
    auto it = targets.find(support[i]);
    if (it != targets.end()) rhs[i] = it->second;
  }
  auto solution = solve_linear_system(g, rhs);
  if (!solution) throw std::logic_error("negative definite Gram matrix cannot be singular");
  ExtendedDivisor out;
  for (std::size_t i = 0; i < support.size(); ++i) out.add(support[i], (*solution)[i]);
  return out;
}

/// Adds the unique combination of the listed curves that makes the divisor
/// orthogonal to each of them (the total-transform correction across a
/// contraction). Requires a negative definite Gram on the listed curves.
inline ExtendedDivisor orthogonal_correction(const CurveConfig& config,
                                             const std::vector<std::string>& curves,
                                             const ExtendedDivisor& divisor) {
  auto gram = gram_of(config, curves);
  if (!is_negative_definite(gram))
    throw input_error("orthogonal correction needs a negative definite curve set");
  std::vector<Rational> rhs(curves.size());
  for (std::size_t i = 0; i < curves.size(); ++i)
    rhs[i] = -pairing(config, divisor, ExtendedDivisor::of_curve(curves[i]));
  auto solution = solve_linear_system(gram, rhs);
  if (!solution) throw std::logic_error("negative definite Gram matrix cannot be singular");
  ExtendedDivisor out = divisor;
  for (std::size_t i = 0; i < curves.size(); ++i) out.add(curves[i], (*solution)[i]);
  return out;
}

/// Chain of n (-2)-curves labelled D1..Dn with consecutive meetings; the
/// ambient surface only enters through k2.
inline CurveConfig an_chain_config(int n, int surface_k2 = 2) {
  if (n < 1) throw input_error("chain length must be positive");
  CurveConfig config(surface_k2);
  for (int j = 1; j <= n; ++j) config.add_curve("D" + std::to_string(j), -2, true);
  for (int j = 1; j < n; ++j)
    config.set_meeting("D" + std::to_string(j), "D" + std::to_string(j + 1));
  return config;
}

struct ChainCorrectionDivisor {
  std::vector<Rational> coefficients;  // on D_1..D_n in chain order
  Rational self_int;
};

/// Closed form for the divisor B supported on a chain of n (-2)-curves with
/// (-B . D_j) = delta_{j,ell}: coefficient (n-ell+1)/(n+1)*j at position
/// j <= ell and ell*(n-j+1)/(n+1) beyond, with B^2 = -(n-ell+1)*ell/(n+1).
inline ChainCorrectionDivisor bl_divisor(int n, int ell) {
  if (n < 1) throw input_error("chain length must be positive");
  if (ell < 1 || ell > n) throw input_error("chain position out of range");
  ChainCorrectionDivisor out;
  out.coefficients.resize(n);
  for (int j = 1; j <= n; ++j) {
    if (j <= ell)
      out.coefficients[j - 1] = Rational(Integer(n - ell + 1) * j, Integer(n + 1));
    else
      out.coefficients[j - 1] = Rational(Integer(ell) * (n - j + 1), Integer(n + 1));
  }
  out.self_int = Rational(-Integer(n - ell + 1) * ell, Integer(n + 1));
  return out;
}

}  // namespace dpz
