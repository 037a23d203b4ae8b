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

// Plain-text interchange: point and cell CSVs, model and codebook CSVs,
// detection reports, key=value configs, and JSON manifests.
//
// CSVs are unquoted; identifiers must not contain commas or newlines. Rows of
// one trajectory are contiguous with increasing seq, and trajectories keep
// their dataset order.

#ifndef TRAJFP_IO_H_
#define TRAJFP_IO_H_

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <fstream>
#include <initializer_list>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "json.hpp"
#include "trajfp/codes.h"
#include "trajfp/detect.h"
#include "trajfp/error.h"
#include "trajfp/geo.h"
#include "trajfp/markov.h"

namespace trajfp {

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto k = line.find(sep, start);
    out.push_back(trim(line.substr(start, k == std::string_view::npos ? k : k - start)));
    if (k == std::string_view::npos) break;
    start = k + 1;
  }
  return out;
}

inline std::string where(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

template <typename T>
T parse_number(const std::string& s, std::size_t line_no) {
  T v{};
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for doubles is incomplete on some toolchains.
    std::size_t used = 0;
    try {
      v = static_cast<T>(std::stod(s, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) {
      throw Error(ErrorCode::kParseError, where(line_no) + "not a number: '" + s + "'");
    }
  } else {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::kParseError, where(line_no) + "not an integer: '" + s + "'");
    }
  }
  return v;
}

// Non-empty lines with their 1-based numbers.
inline std::vector<std::pair<std::size_t, std::string>> lines_of(std::istream& in) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::string t = trim(line);
    if (!t.empty()) out.emplace_back(n, std::move(t));
  }
  return out;
}

inline void expect_header(const std::vector<std::string>& got,
                          std::initializer_list<std::string_view> want, std::size_t line_no) {
  bool ok = got.size() == want.size();
  std::size_t i = 0;
  for (auto w : want) {
    if (!ok) break;
    ok = got[i++] == w;
  }
  if (!ok) {
    std::string expected;
    for (auto w : want) expected += (expected.empty() ? "" : ",") + std::string(w);
    throw Error(ErrorCode::kParseError, where(line_no) + "expected header " + expected);
  }
}

inline void check_id(const std::string& id) {
  require(!id.empty() && id.find_first_of(",\n\r") == std::string::npos,
          ErrorCode::kInvalidArgument, "trajectory ids must be nonempty and comma-free");
}

// Groups rows by id, enforcing contiguity and increasing seq.
class RowGrouper {
 public:
  template <typename Row>
  void add(const std::string& id, long long seq, std::size_t line_no,
           std::vector<std::pair<std::string, std::vector<Row>>>& groups, Row row) {
    if (groups.empty() || groups.back().first != id) {
      if (!seen_.emplace(id, true).second) {
        throw Error(ErrorCode::kParseError,
                    where(line_no) + "rows of trajectory '" + id + "' are not contiguous");
      }
      groups.push_back({id, {}});
      last_seq_ = -1;
    }
    if (seq <= last_seq_) {
      throw Error(ErrorCode::kParseError, where(line_no) + "seq must increase within '" + id + "'");
    }
    last_seq_ = seq;
    groups.back().second.push_back(std::move(row));
  }

 private:
  std::map<std::string, bool> seen_;
  long long last_seq_ = -1;
};

}  // namespace detail

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write to '" + path + "' failed");
}

// ---- trajectories ----------------------------------------------------------

struct PointTrajectory {
  std::string id;
  std::vector<GeoPoint> points;
};

// traj_id,seq,x,y[,t]
inline std::vector<PointTrajectory> read_point_csv(std::istream& in) {
  const auto lines = detail::lines_of(in);
  require(!lines.empty(), ErrorCode::kParseError, "missing header");
  const auto header = detail::split(lines[0].second);
  const bool timed = header.size() == 5;
  if (timed) {
    detail::expect_header(header, {"traj_id", "seq", "x", "y", "t"}, lines[0].first);
  } else {
    detail::expect_header(header, {"traj_id", "seq", "x", "y"}, lines[0].first);
  }
  std::vector<std::pair<std::string, std::vector<GeoPoint>>> groups;
  detail::RowGrouper grouper;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [no, text] = lines[i];
    const auto f = detail::split(text);
    if (f.size() != header.size()) {
      throw Error(ErrorCode::kParseError, detail::where(no) + "wrong field count");
    }
    GeoPoint p{detail::parse_number<double>(f[2], no), detail::parse_number<double>(f[3], no),
               std::nullopt};
    if (timed) p.t = detail::parse_number<double>(f[4], no);
    grouper.add(f[0], detail::parse_number<long long>(f[1], no), no, groups, p);
  }
  std::vector<PointTrajectory> out;
  for (auto& [id, pts] : groups) out.push_back({id, std::move(pts)});
  return out;
}

inline void write_point_csv(std::ostream& out, const std::vector<PointTrajectory>& trajs) {
  bool timed = false;
  for (const auto& t : trajs) {
    for (const auto& p : t.points) timed = timed || p.t.has_value();
  }
  out << (timed ? "traj_id,seq,x,y,t\n" : "traj_id,seq,x,y\n");
  out << std::setprecision(17);
  for (const auto& t : trajs) {
    detail::check_id(t.id);
    for (std::size_t j = 0; j < t.points.size(); ++j) {
      const auto& p = t.points[j];
      out << t.id << ',' << j << ',' << p.x << ',' << p.y;
      if (timed) out << ',' << p.t.value_or(0.0);
      out << '\n';
    }
  }
}

// traj_id,seq,ix,iy. The role is carried by the manifest, not the file.
inline Dataset read_cell_csv(std::istream& in, const Grid& grid, Role role) {
  const auto lines = detail::lines_of(in);
  require(!lines.empty(), ErrorCode::kParseError, "missing header");
  detail::expect_header(detail::split(lines[0].second), {"traj_id", "seq", "ix", "iy"},
                        lines[0].first);
  std::vector<std::pair<std::string, std::vector<Cell>>> groups;
  detail::RowGrouper grouper;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [no, text] = lines[i];
    const auto f = detail::split(text);
    if (f.size() != 4) throw Error(ErrorCode::kParseError, detail::where(no) + "wrong field count");
    const Cell c{detail::parse_number<int>(f[2], no), detail::parse_number<int>(f[3], no)};
    if (!grid.contains(c)) {
      throw Error(ErrorCode::kOutOfBounds, detail::where(no) + "cell off the grid");
    }
    grouper.add(f[0], detail::parse_number<long long>(f[1], no), no, groups, c);
  }
  Dataset d{grid, {}};
  for (auto& [id, cells] : groups) d.trajectories.push_back({id, role, std::move(cells)});
  return d;
}

inline void write_cell_csv(std::ostream& out, const Dataset& d) {
  out << "traj_id,seq,ix,iy\n";
  for (const Trajectory& t : d.trajectories) {
    detail::check_id(t.id);
    for (std::size_t j = 0; j < t.cells.size(); ++j) {
      out << t.id << ',' << j << ',' << t.cells[j].ix << ',' << t.cells[j].iy << '\n';
    }
  }
}

// ---- key=value -------------------------------------------------------------

using KeyValues = std::map<std::string, std::string>;

// `key = value` lines; '#' starts a comment. Later keys override earlier.
inline KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParseError, detail::where(no) + "expected key=value");
    }
    const std::string key = detail::trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw Error(ErrorCode::kParseError, detail::where(no) + "empty key");
    kv[key] = detail::trim(std::string_view(t).substr(eq + 1));
  }
  return kv;
}

inline double kv_double(const KeyValues& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw Error(ErrorCode::kParseError, "missing key '" + key + "'");
  try {
    return detail::parse_number<double>(it->second, 0);
  } catch (const Error&) {
    throw Error(ErrorCode::kParseError, "key '" + key + "' is not a number");
  }
}

// n, x_min, y_min, x_max, y_max
inline Grid grid_from_config(const KeyValues& kv) {
  const double n = kv_double(kv, "n");
  require(n == static_cast<int>(n), ErrorCode::kParseError, "grid n must be an integer");
  return Grid(static_cast<int>(n), {kv_double(kv, "x_min"), kv_double(kv, "y_min"),
                                    kv_double(kv, "x_max"), kv_double(kv, "y_max")});
}

inline void write_grid_config(std::ostream& out, const Grid& g) {
  out << std::setprecision(17) << "n=" << g.n() << "\nx_min=" << g.bbox().x_min
      << "\ny_min=" << g.bbox().y_min << "\nx_max=" << g.bbox().x_max
      << "\ny_max=" << g.bbox().y_max << '\n';
}

// 64-bit FNV-1a, hex.
inline std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

// Hash of the canonical (sorted) key=value form.
inline std::string config_hash(const KeyValues& kv) {
  std::string canon;
  for (const auto& [k, v] : kv) canon += k + "=" + v + "\n";
  return fnv1a_hex(canon);
}

// ---- model -----------------------------------------------------------------

// Two sections: from_ix,from_iy,to_ix,to_iy,prob then ix,iy,visits.
inline void write_model_csv(std::ostream& out, const MarkovModel& m) {
  const Grid& g = m.grid();
  out << std::setprecision(17) << "from_ix,from_iy,to_ix,to_iy,prob\n";
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const Cell from = g.cell(i);
    for (const Transition& t : m.row(i)) {
      const Cell to = g.cell(t.to);
      out << from.ix << ',' << from.iy << ',' << to.ix << ',' << to.iy << ',' << t.prob << '\n';
    }
  }
  out << "ix,iy,visits\n";
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const Cell c = g.cell(i);
    out << c.ix << ',' << c.iy << ',' << m.visits()[i] << '\n';
  }
}

// Rows are re-validated, so a loaded model is row-stochastic or rejected.
inline MarkovModel read_model_csv(std::istream& in, const Grid& g) {
  const auto lines = detail::lines_of(in);
  require(!lines.empty(), ErrorCode::kParseError, "missing header");
  detail::expect_header(detail::split(lines[0].second),
                        {"from_ix", "from_iy", "to_ix", "to_iy", "prob"}, lines[0].first);
  std::vector<std::vector<Transition>> rows(g.cell_count());
  std::vector<double> visits(g.cell_count(), 0.0);
  auto cell_at = [&](const std::string& a, const std::string& b, std::size_t no) {
    const Cell c{detail::parse_number<int>(a, no), detail::parse_number<int>(b, no)};
    if (!g.contains(c)) throw Error(ErrorCode::kOutOfBounds, detail::where(no) + "cell off the grid");
    return c;
  };
  std::size_t i = 1;
  for (; i < lines.size(); ++i) {
    const auto& [no, text] = lines[i];
    const auto f = detail::split(text);
    if (f.size() == 3 && f[0] == "ix") {
      detail::expect_header(f, {"ix", "iy", "visits"}, no);
      break;
    }
    if (f.size() != 5) throw Error(ErrorCode::kParseError, detail::where(no) + "wrong field count");
    const Cell from = cell_at(f[0], f[1], no);
    const Cell to = cell_at(f[2], f[3], no);
    rows[g.index(from)].push_back(
        {static_cast<std::uint32_t>(g.index(to)), detail::parse_number<double>(f[4], no)});
  }
  require(i < lines.size(), ErrorCode::kParseError, "missing visits section");
  for (++i; i < lines.size(); ++i) {
    const auto& [no, text] = lines[i];
    const auto f = detail::split(text);
    if (f.size() != 3) throw Error(ErrorCode::kParseError, detail::where(no) + "wrong field count");
    visits[g.index(cell_at(f[0], f[1], no))] = detail::parse_number<double>(f[2], no);
  }
  try {
    return MarkovModel(g, std::move(rows), std::move(visits));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError, std::string("invalid model: ") + e.what());
  }
}

// ---- codebook --------------------------------------------------------------

// user,bit_0..bit_{m-1}; Tardos books end with a `bias` row.
inline void write_codebook_csv(std::ostream& out, const BinaryCodebook& book) {
  out << "user";
  for (std::size_t i = 0; i < book.length(); ++i) out << ",bit_" << i;
  out << '\n';
  for (std::size_t u = 0; u < book.users(); ++u) {
    out << u;
    for (std::uint8_t b : book.codewords[u]) out << ',' << static_cast<int>(b);
    out << '\n';
  }
  if (book.kind == CodeKind::kTardos) {
    out << std::setprecision(17) << "bias";
    for (double p : book.bias) out << ',' << p;
    out << '\n';
  }
}

// Codeword bits and bias only; scheme parameters travel in the manifest.
inline BinaryCodebook read_codebook_csv(std::istream& in) {
  const auto lines = detail::lines_of(in);
  require(!lines.empty(), ErrorCode::kParseError, "missing header");
  const auto header = detail::split(lines[0].second);
  require(!header.empty() && header[0] == "user", ErrorCode::kParseError,
          "codebook header must start with 'user'");
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i] != "bit_" + std::to_string(i - 1)) {
      throw Error(ErrorCode::kParseError, "codebook header has bad column '" + header[i] + "'");
    }
  }
  BinaryCodebook book;
  book.kind = CodeKind::kBonehShaw;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [no, text] = lines[i];
    const auto f = detail::split(text);
    if (f.size() != header.size()) {
      throw Error(ErrorCode::kParseError, detail::where(no) + "wrong field count");
    }
    if (f[0] == "bias") {
      book.kind = CodeKind::kTardos;
      for (std::size_t k = 1; k < f.size(); ++k) book.bias.push_back(detail::parse_number<double>(f[k], no));
      continue;
    }
    if (detail::parse_number<std::size_t>(f[0], no) != book.codewords.size()) {
      throw Error(ErrorCode::kParseError, detail::where(no) + "users must be numbered 0, 1, ...");
    }
    Bits w;
    for (std::size_t k = 1; k < f.size(); ++k) {
      const int b = detail::parse_number<int>(f[k], no);
      if (b != 0 && b != 1) throw Error(ErrorCode::kParseError, detail::where(no) + "bits must be 0/1");
      w.push_back(static_cast<std::uint8_t>(b));
    }
    book.codewords.push_back(std::move(w));
  }
  return book;
}

// ---- detection report ------------------------------------------------------

// traj_id,analyzer,score per (trajectory, analyzer), then one summary row
// `summary,<final_accused>,<vote share>`.
inline void write_report_csv(std::ostream& out, const AggregateReport& r,
                             const std::vector<std::string>& traj_ids) {
  require(traj_ids.size() == r.per_trajectory.size(), ErrorCode::kInvalidArgument,
          "one id per report");
  out << std::setprecision(17) << "traj_id,analyzer,score\n";
  for (std::size_t t = 0; t < traj_ids.size(); ++t) {
    const auto& s = r.per_trajectory[t].scores;
    for (std::size_t a = 0; a < s.size(); ++a) out << traj_ids[t] << ',' << a << ',' << s[a] << '\n';
  }
  const double share =
      static_cast<double>(r.vote_counts.at(static_cast<std::size_t>(r.final_accused))) /
      static_cast<double>(r.per_trajectory.size());
  out << "summary," << r.final_accused << ',' << share << '\n';
}

inline nlohmann::json report_manifest(const AggregateReport& r,
                                      const std::vector<std::string>& traj_ids) {
  nlohmann::json j;
  j["final_accused"] = r.final_accused;
  j["tie"] = r.tie;
  j["vote_counts"] = r.vote_counts;
  nlohmann::json per = nlohmann::json::array();
  for (std::size_t t = 0; t < r.per_trajectory.size(); ++t) {
    per.push_back({{"traj_id", traj_ids.at(t)},
                   {"accused", r.per_trajectory[t].accused},
                   {"tie", r.per_trajectory[t].tie}});
  }
  j["per_trajectory"] = per;
  return j;
}

// ---- manifests -------------------------------------------------------------

struct Manifest {
  Role role = Role::kRaw;
  std::uint64_t seed = 0;
  std::string config_hash;
  nlohmann::json extra = nlohmann::json::object();  // e.g. analyzer_id, scheme
};

inline nlohmann::json to_json(const Manifest& m) {
  nlohmann::json j = m.extra;
  j["role"] = std::string(role_name(m.role));
  j["seed"] = m.seed;
  j["config_hash"] = m.config_hash;
  return j;
}

inline Manifest manifest_from_json(const nlohmann::json& j) {
  try {
    Manifest m;
    m.role = parse_role(j.at("role").get<std::string>());
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.extra = j;
    m.extra.erase("role");
    m.extra.erase("seed");
    m.extra.erase("config_hash");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bad manifest: ") + e.what());
  }
}

inline Manifest read_manifest(const std::string& path) {
  try {
    return manifest_from_json(nlohmann::json::parse(read_text_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, "'" + path + "': " + e.what());
  }
}

inline void write_manifest(const std::string& path, const Manifest& m) {
  write_text_file(path, to_json(m).dump(2) + "\n");
}

}  // namespace trajfp

#endif  // TRAJFP_IO_H_
