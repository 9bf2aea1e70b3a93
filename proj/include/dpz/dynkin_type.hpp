#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "dpz/errors.hpp"

namespace dpz {

// ---------------------------------------------------------------------------
// Dynkin types of Du Val singularity configurations, with the prime
// refinement used to split the ambiguous degree-2 families.
// ---------------------------------------------------------------------------

enum class PrimeMark { None, Single, Double };

struct DynkinSummand {
  char family = 'A';  // 'A', 'D' or 'E'
  int rank = 1;

  bool operator==(const DynkinSummand&) const = default;
  // Order: bigger ranks first, D/E before A at equal rank keeps printing tidy.
  bool operator<(const DynkinSummand& other) const {
    if (rank != other.rank) return rank > other.rank;
    return family > other.family;
  }
};

struct DynkinType {
  std::vector<DynkinSummand> summands;  // kept sorted
  PrimeMark prime = PrimeMark::None;

  int total_rank() const {
    int total = 0;
    for (const auto& s : summands) total += s.rank;
    return total;
  }

  bool empty() const { return summands.empty(); }

  void normalize() { std::sort(summands.begin(), summands.end()); }

  bool same_summands(const std::vector<DynkinSummand>& other) const {
    return summands == other;
  }

  bool operator==(const DynkinType&) const = default;
};

inline DynkinType make_dynkin(std::vector<DynkinSummand> summands,
                              PrimeMark prime = PrimeMark::None) {
  DynkinType t{std::move(summands), prime};
  t.normalize();
  return t;
}

/// The four degree-2 families whose singularity type needs a prime mark.
inline bool prime_mark_applicable(const DynkinType& type) {
  static const std::vector<std::vector<DynkinSummand>> ambiguous = {
      {{'A', 5}, {'A', 1}},
      {{'A', 5}},
      {{'A', 3}, {'A', 1}, {'A', 1}},
      {{'A', 3}, {'A', 1}},
  };
  for (auto list : ambiguous) {
    std::sort(list.begin(), list.end());
    if (type.summands == list) return true;
  }
  return false;
}

inline void validate_summand(const DynkinSummand& s) {
  switch (s.family) {
    case 'A':
      if (s.rank < 1) throw input_error("A-type rank must be >= 1");
      return;
    case 'D':
      if (s.rank < 4) throw input_error("D-type rank must be >= 4");
      return;
    case 'E':
      if (s.rank < 6 || s.rank > 8) throw input_error("E-type rank must be 6, 7 or 8");
      return;
    default:
      throw input_error(std::string("unknown Dynkin family: ") + s.family);
  }
}

inline void validate_dynkin(const DynkinType& type) {
  for (const auto& s : type.summands) validate_summand(s);
  if (type.prime != PrimeMark::None && !prime_mark_applicable(type))
    throw input_error("prime mark only applies to the ambiguous degree-2 families");
}

// Text form: summands joined by '+', repeated summands collapsed with a
// multiplicity prefix ("A3+2A1"). Primed types carry trailing apostrophes,
// with the summand list parenthesized: "(A5)'", "(A3+2A1)''".
inline std::string to_string(const DynkinType& type) {
  if (type.summands.empty()) return "smooth";
  std::string body;
  for (std::size_t i = 0; i < type.summands.size();) {
    std::size_t j = i;
    while (j < type.summands.size() && type.summands[j] == type.summands[i]) ++j;
    if (!body.empty()) body += "+";
    if (j - i > 1) body += std::to_string(j - i);
    body += type.summands[i].family + std::to_string(type.summands[i].rank);
    i = j;
  }
  switch (type.prime) {
    case PrimeMark::None:
      return body;
    case PrimeMark::Single:
      return "(" + body + ")'";
    case PrimeMark::Double:
      return "(" + body + ")''";
  }
  return body;
}

inline DynkinType parse_dynkin(const std::string& text) {
  std::string body = text;
  PrimeMark prime = PrimeMark::None;
  while (!body.empty() && body.back() == '\'') {
    body.pop_back();
    prime = (prime == PrimeMark::None) ? PrimeMark::Single : PrimeMark::Double;
    if (prime == PrimeMark::Double && !body.empty() && body.back() == '\'')
      throw input_error("at most two prime marks: " + text);
  }
  if (!body.empty() && body.front() == '(' && body.back() == ')')
    body = body.substr(1, body.size() - 2);
  if (body == "smooth" || body.empty()) {
    if (prime != PrimeMark::None) throw input_error("prime mark on empty type: " + text);
    return DynkinType{};
  }
  DynkinType type;
  type.prime = prime;
  if (body.back() == '+') throw input_error("malformed Dynkin type: " + text);
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t next = body.find('+', pos);
    std::string piece = body.substr(pos, next == std::string::npos ? next : next - pos);
    pos = (next == std::string::npos) ? body.size() : next + 1;
    if (piece.empty()) throw input_error("malformed Dynkin type: " + text);
    std::size_t k = 0;
    int multiplicity = 0;
    while (k < piece.size() && std::isdigit(static_cast<unsigned char>(piece[k])))
      multiplicity = multiplicity * 10 + (piece[k++] - '0');
    if (multiplicity == 0) multiplicity = 1;
    if (k >= piece.size()) throw input_error("malformed Dynkin type: " + text);
    char family = piece[k++];
    if (k >= piece.size()) throw input_error("missing rank in Dynkin type: " + text);
    int rank = 0;
    while (k < piece.size() && std::isdigit(static_cast<unsigned char>(piece[k])))
      rank = rank * 10 + (piece[k++] - '0');
    if (k != piece.size()) throw input_error("malformed Dynkin summand: " + piece);
    for (int m = 0; m < multiplicity; ++m) type.summands.push_back({family, rank});
  }
  type.normalize();
  validate_dynkin(type);
  return type;
}

// ---------------------------------------------------------------------------
// Existence of an anticanonical polar cylinder on a Du Val del Pezzo
// surface, as a function of (degree, singularity type):
//   degree >= 4          always;
//   degree == 3          iff singular;
//   degree == 2          iff some singularity is not A1;
//   degree == 1          iff some singularity is not A1, A2, A3 or D4.
// ---------------------------------------------------------------------------
inline bool has_anticanonical_cylinder(int degree, const DynkinType& type) {
  if (degree < 1 || degree > 9) throw input_error("degree must lie in 1..9");
  validate_dynkin(type);
  if (type.total_rank() > 9 - degree)
    throw input_error("singularity rank exceeds what the degree allows");
  if (degree >= 4) return true;
  if (degree == 3) return !type.empty();
  auto worse_than = [&](auto&& is_mild) {
    for (const auto& s : type.summands)
      if (!is_mild(s)) return true;
    return false;
  };
  if (degree == 2)
    return worse_than([](const DynkinSummand& s) { return s.family == 'A' && s.rank == 1; });
  return worse_than([](const DynkinSummand& s) {
    return (s.family == 'A' && s.rank <= 3) || (s.family == 'D' && s.rank == 4);
  });
}

}  // namespace dpz
