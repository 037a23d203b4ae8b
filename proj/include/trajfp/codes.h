// Copyright 2026 The trajfp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Binary collusion-secure codes (Boneh-Shaw, Tardos) and their embedding
// into trajectories.
//
// Users are 0-based throughout: user 0 of a Boneh-Shaw code owns the
// all-ones word and user n-1 the all-zeros word.
//
// Embedding: each position of a trajectory has one secret "marked" cell, a
// Moore neighbor of the original, shared by all analyzers. Bit 1 reports the
// marked cell and bit 0 the original, so colluders only see differences
// where their bits differ.

#ifndef TRAJFP_CODES_H_
#define TRAJFP_CODES_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "trajfp/error.h"
#include "trajfp/geo.h"
#include "trajfp/rng.h"

namespace trajfp {

enum class CodeKind { kBonehShaw, kTardos };

using Bits = std::vector<std::uint8_t>;

struct BinaryCodebook {
  CodeKind kind = CodeKind::kBonehShaw;
  std::vector<Bits> codewords;  // one per user
  std::vector<double> bias;     // Tardos only: Pr[bit i = 1]
  int c = 0;                    // Tardos: collusion size
  double omega = 0.0;           // Tardos: error probability
  int k = 0;                    // Tardos: ceil(log2(1 / omega))
  int d = 0;                    // Boneh-Shaw: block size

  std::size_t users() const { return codewords.size(); }
  std::size_t length() const { return codewords.empty() ? 0 : codewords[0].size(); }
  double tardos_threshold() const { return 20.0 * c * k; }
};

// Gamma(n, d): (n - 1) blocks of d bits; user i has i zero-blocks followed by
// ones.
inline BinaryCodebook bs_generate(int n_users, int d) {
  require(n_users >= 2, ErrorCode::kInvalidArgument, "need at least two users");
  require(d >= 1, ErrorCode::kInvalidArgument, "block size must be >= 1");
  BinaryCodebook book;
  book.kind = CodeKind::kBonehShaw;
  book.d = d;
  const std::size_t len = static_cast<std::size_t>(n_users - 1) * d;
  for (int i = 0; i < n_users; ++i) {
    Bits word(len, 1);
    for (std::size_t b = 0; b < static_cast<std::size_t>(i) * d; ++b) word[b] = 0;
    book.codewords.push_back(std::move(word));
  }
  return book;
}

// Accuses the owner of the first block with strictly more ones than zeros;
// the all-zeros owner if there is none.
inline int bs_detect(std::span<const std::uint8_t> leaked, const BinaryCodebook& book) {
  require(book.kind == CodeKind::kBonehShaw, ErrorCode::kInvalidArgument,
          "not a Boneh-Shaw codebook");
  require(leaked.size() == book.length(), ErrorCode::kLengthMismatch,
          "leaked word length does not match the code");
  const auto blocks = book.users() - 1;
  for (std::size_t b = 0; b < blocks; ++b) {
    int ones = 0;
    for (int i = 0; i < book.d; ++i) ones += leaked[b * book.d + i] ? 1 : 0;
    if (2 * ones > book.d) return static_cast<int>(b);
  }
  return static_cast<int>(book.users() - 1);
}

inline int tardos_k(double omega) {
  return static_cast<int>(std::ceil(std::log2(1.0 / omega) - 1e-12));
}

inline std::size_t tardos_length(int c, double omega) {
  return static_cast<std::size_t>(100) * c * c * tardos_k(omega);
}

// Biases p_i = sin^2(r_i), r_i ~ U[t', pi/2 - t'] with sin^2(t') = 1/(300c);
// bits are independent Bernoulli(p_i). `length` overrides the secure length
// 100 c^2 k (trajectory embedding uses the trajectory length).
inline BinaryCodebook tardos_generate(int n_users, int c, double omega, Rng& rng,
                                      std::optional<std::size_t> length = std::nullopt) {
  require(n_users >= 2, ErrorCode::kInvalidArgument, "need at least two users");
  require(c >= 2, ErrorCode::kInvalidArgument, "Tardos codes need c >= 2");
  require(omega > 0.0 && omega < 1.0, ErrorCode::kInvalidArgument,
          "omega must be in (0, 1)");
  BinaryCodebook book;
  book.kind = CodeKind::kTardos;
  book.c = c;
  book.omega = omega;
  book.k = tardos_k(omega);
  const std::size_t m = length.value_or(tardos_length(c, omega));
  const double t = 1.0 / (300.0 * c);
  const double t_prime = std::asin(std::sqrt(t));
  book.bias.resize(m);
  for (double& p : book.bias) {
    const double r = uniform(rng, t_prime, std::numbers::pi / 2.0 - t_prime);
    p = std::sin(r) * std::sin(r);
  }
  book.codewords.assign(static_cast<std::size_t>(n_users), Bits(m, 0));
  for (auto& word : book.codewords) {
    for (std::size_t i = 0; i < m; ++i) word[i] = bernoulli(rng, book.bias[i]) ? 1 : 0;
  }
  return book;
}

struct TardosAccusation {
  std::vector<double> scores;
  int accused = 0;  // argmax, lowest user on ties
  bool tie = false;
  double threshold = 0.0;
  std::vector<int> above_threshold;
};

inline TardosAccusation tardos_score(std::span<const std::uint8_t> leaked,
                                     const BinaryCodebook& book) {
  require(book.kind == CodeKind::kTardos, ErrorCode::kInvalidArgument,
          "not a Tardos codebook");
  require(leaked.size() == book.length(), ErrorCode::kLengthMismatch,
          "leaked word length does not match the code");
  TardosAccusation acc;
  acc.threshold = book.tardos_threshold();
  acc.scores.assign(book.users(), 0.0);
  for (std::size_t i = 0; i < leaked.size(); ++i) {
    if (!leaked[i]) continue;
    const double p = book.bias[i];
    const double up = std::sqrt((1.0 - p) / p);
    const double down = -std::sqrt(p / (1.0 - p));
    for (std::size_t j = 0; j < book.users(); ++j) {
      acc.scores[j] += book.codewords[j][i] ? up : down;
    }
  }
  for (std::size_t j = 0; j < book.users(); ++j) {
    if (acc.scores[j] > acc.scores[acc.accused]) {
      acc.accused = static_cast<int>(j);
    }
    if (acc.scores[j] >= acc.threshold) acc.above_threshold.push_back(static_cast<int>(j));
  }
  for (std::size_t j = 0; j < book.users(); ++j) {
    if (static_cast<int>(j) != acc.accused && acc.scores[j] == acc.scores[acc.accused]) {
      acc.tie = true;
    }
  }
  return acc;
}

// Secret marked cell per position.
using MarkMap = std::vector<Cell>;

inline MarkMap make_mark_map(std::span<const Cell> original, const Grid& g, Rng& rng) {
  MarkMap marks;
  marks.reserve(original.size());
  for (Cell c : original) {
    const auto hood = neighbors(c, g, /*include_self=*/false);
    marks.push_back(hood[uniform_index(rng, hood.size())]);
  }
  return marks;
}

namespace detail {

inline std::vector<Cell> embed_cells(std::span<const Cell> original,
                                     std::span<const std::uint8_t> bits,
                                     const MarkMap& marks, bool truncate) {
  require(marks.size() == original.size(), ErrorCode::kLengthMismatch,
          "mark map length does not match trajectory");
  if (!truncate) {
    require(bits.size() == original.size(), ErrorCode::kLengthMismatch,
            "codeword length does not match trajectory");
  }
  std::vector<Cell> out(original.begin(), original.end());
  for (std::size_t j = 0; j < out.size() && j < bits.size(); ++j) {
    if (bits[j]) out[j] = marks[j];
  }
  return out;
}

}  // namespace detail

// Writes a codeword into a trajectory. With `truncate`, extra bits are
// dropped and missing bits read as 0.
template <Role R>
  requires(R == Role::kPostProcessed || R == Role::kNoisy)
FingerprintedTrajectory code_embed(const TypedTrajectory<R>& x_star,
                                   std::span<const std::uint8_t> bits,
                                   const MarkMap& marks, bool truncate) {
  return FingerprintedTrajectory(
      x_star.id(), detail::embed_cells(x_star.cells(), bits, marks, truncate));
}

// Reads a codeword of `code_length` bits back from a (possibly attacked)
// trajectory: 1 where the cell is strictly nearer the marked cell than the
// original. Positions past the trajectory read as 0.
inline Bits read_bits(std::span<const Cell> observed, std::span<const Cell> original,
                      const MarkMap& marks, std::size_t code_length) {
  require(observed.size() == original.size() && marks.size() == original.size(),
          ErrorCode::kLengthMismatch, "trajectory lengths differ");
  Bits bits(code_length, 0);
  for (std::size_t j = 0; j < code_length && j < observed.size(); ++j) {
    bits[j] = cell_distance_sq(observed[j], marks[j]) <
                      cell_distance_sq(observed[j], original[j])
                  ? 1
                  : 0;
  }
  return bits;
}

}  // namespace trajfp

#endif  // TRAJFP_CODES_H_
