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

// Producing one fingerprinted copy of a shareable dataset per analyzer.
//
// Seeds are hierarchical: analyzer a uses derive_seed(master, kAnalyzer, a)
// and its copy of trajectory t draws from derive_seed(that, kTrajectory, t),
// so any single copy can be regenerated without producing the rest.

#ifndef TRAJFP_DISTRIBUTE_H_
#define TRAJFP_DISTRIBUTE_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajfp/codes.h"
#include "trajfp/error.h"
#include "trajfp/fingerprint.h"
#include "trajfp/geo.h"
#include "trajfp/markov.h"
#include "trajfp/rng.h"

namespace trajfp {

enum class Scheme { kDsfs, kBonehShaw, kTardos, kPfs };

inline std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kDsfs: return "dsfs";
    case Scheme::kBonehShaw: return "bs";
    case Scheme::kTardos: return "tardos";
    case Scheme::kPfs: return "pfs";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view s) {
  for (Scheme x : {Scheme::kDsfs, Scheme::kBonehShaw, Scheme::kTardos, Scheme::kPfs}) {
    if (scheme_name(x) == s) return x;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown scheme '" + std::string(s) + "'");
}

inline bool is_code_scheme(Scheme s) {
  return s == Scheme::kBonehShaw || s == Scheme::kTardos;
}

struct SchemeConfig {
  Scheme scheme = Scheme::kDsfs;
  FingerprintConfig fp;
  double sigma = 0.005;  // PFS filter
  int c = 3;             // Tardos collusion size
  double omega = 0.01;   // Tardos error probability
};

struct CopyRecord {
  int analyzer_id = 0;
  std::uint64_t seed = 0;
  Dataset copies;
};

// Secret material of the code-based schemes, shared by all copies.
struct CodeMaterial {
  BinaryCodebook codebook;
  std::vector<MarkMap> marks;  // one per trajectory
};

// Regenerates any (analyzer, trajectory) copy on demand. When the source is
// a subset of a dataset, `seed_index` gives each member's index in the full
// dataset so its copies match those of a full distribution.
class CopyFactory {
 public:
  CopyFactory(std::vector<PostProcessedTrajectory> source, const MarkovModel& m,
              SchemeConfig cfg, int n_analyzers, std::uint64_t master_seed,
              std::vector<std::size_t> seed_index = {})
      : source_(std::move(source)),
        seed_index_(std::move(seed_index)),
        model_(&m),
        cfg_(cfg),
        n_analyzers_(n_analyzers),
        master_seed_(master_seed) {
    require(n_analyzers >= 1, ErrorCode::kInvalidArgument, "need at least one analyzer");
    require(seed_index_.empty() || seed_index_.size() == source_.size(),
            ErrorCode::kInvalidArgument, "seed index does not match the source");
    if (cfg_.scheme == Scheme::kDsfs) cfg_.fp.validate();
    if (!is_code_scheme(cfg_.scheme)) return;
    require(n_analyzers >= 2, ErrorCode::kInvalidArgument,
            "code schemes need at least two analyzers");
    std::size_t longest = 0;
    CodeMaterial code;
    for (std::size_t t = 0; t < source_.size(); ++t) {
      longest = std::max(longest, source_[t].size());
      Rng rng(derive_seed(master_seed_, seed_stream::kMarks, key(t)));
      code.marks.push_back(make_mark_map(source_[t].cells(), m.grid(), rng));
    }
    if (cfg_.scheme == Scheme::kBonehShaw) {
      code.codebook = bs_generate(n_analyzers, 1);
    } else {
      Rng rng(derive_seed(master_seed_, seed_stream::kCodebook));
      code.codebook = tardos_generate(n_analyzers, cfg_.c, cfg_.omega, rng,
                                      std::max<std::size_t>(longest, 1));
    }
    code_ = std::move(code);
  }

  int analyzers() const { return n_analyzers_; }
  std::size_t trajectories() const { return source_.size(); }
  const SchemeConfig& config() const { return cfg_; }
  const MarkovModel& model() const { return *model_; }
  const PostProcessedTrajectory& source(std::size_t t) const { return source_.at(t); }
  const std::optional<CodeMaterial>& code() const { return code_; }

  std::uint64_t analyzer_seed(int a) const {
    return derive_seed(master_seed_, seed_stream::kAnalyzer, static_cast<std::uint64_t>(a));
  }

  FingerprintedTrajectory copy(int analyzer, std::size_t t) const {
    require(analyzer >= 0 && analyzer < n_analyzers_, ErrorCode::kInvalidArgument,
            "analyzer id out of range");
    const PostProcessedTrajectory& x = source_.at(t);
    Rng rng(derive_seed(analyzer_seed(analyzer), seed_stream::kTrajectory, key(t)));
    switch (cfg_.scheme) {
      case Scheme::kDsfs:
        return dsfs_fingerprint(x, *model_, cfg_.fp, rng);
      case Scheme::kPfs:
        return pfs_fingerprint(x, *model_, cfg_.fp.p, cfg_.sigma, rng);
      case Scheme::kBonehShaw:
      case Scheme::kTardos:
        return code_embed(x, code_->codebook.codewords[static_cast<std::size_t>(analyzer)],
                          code_->marks[t], /*truncate=*/true);
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown scheme");
  }

  // All analyzers' copies of trajectory t, by analyzer id.
  std::vector<FingerprintedTrajectory> copies_of(std::size_t t) const {
    std::vector<FingerprintedTrajectory> out;
    out.reserve(static_cast<std::size_t>(n_analyzers_));
    for (int a = 0; a < n_analyzers_; ++a) out.push_back(copy(a, t));
    return out;
  }

 private:
  // Seed key of local trajectory t: its index in the full dataset.
  std::uint64_t key(std::size_t t) const {
    return seed_index_.empty() ? t : seed_index_[t];
  }

  std::vector<PostProcessedTrajectory> source_;
  std::vector<std::size_t> seed_index_;
  const MarkovModel* model_;
  SchemeConfig cfg_;
  int n_analyzers_;
  std::uint64_t master_seed_;
  std::optional<CodeMaterial> code_;
};

struct Distribution {
  Scheme scheme = Scheme::kDsfs;
  std::vector<CopyRecord> records;
  std::optional<CodeMaterial> code;
};

inline Distribution distribute(const Dataset& dataset, const MarkovModel& m,
                               int n_analyzers, const SchemeConfig& cfg,
                               std::uint64_t master_seed) {
  require(n_analyzers >= 2, ErrorCode::kInvalidArgument, "need at least two analyzers");
  require(dataset.grid == m.grid(), ErrorCode::kInvalidArgument,
          "dataset and model grids differ");
  CopyFactory factory(typed<Role::kPostProcessed>(dataset), m, cfg, n_analyzers,
                      master_seed);
  Distribution out;
  out.scheme = cfg.scheme;
  out.code = factory.code();
  for (int a = 0; a < n_analyzers; ++a) {
    std::vector<FingerprintedTrajectory> copies;
    copies.reserve(factory.trajectories());
    for (std::size_t t = 0; t < factory.trajectories(); ++t) copies.push_back(factory.copy(a, t));
    out.records.push_back({a, factory.analyzer_seed(a), make_dataset(dataset.grid, copies)});
  }
  return out;
}

}  // namespace trajfp

#endif  // TRAJFP_DISTRIBUTE_H_
