// Empirical degree histograms, edge-degree joint counts and tail slopes.
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace dpa {

enum class Side { in, out };

struct DegreeHistogram {
  Side side = Side::in;
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t n_total = 0;

  std::uint64_t at(std::uint64_t d) const {
    auto it = counts.find(d);
    return it == counts.end() ? 0 : it->second;
  }
  std::uint64_t max_degree() const { return counts.empty() ? 0 : counts.rbegin()->first; }
  friend bool operator==(const DegreeHistogram&, const DegreeHistogram&) = default;
};

struct EdgeDegreeJointCounts {
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> counts;
  std::uint64_t loop_count = 0;

  std::uint64_t at(std::uint64_t d1, std::uint64_t d2) const {
    auto it = counts.find({d1, d2});
    return it == counts.end() ? 0 : it->second;
  }
  friend bool operator==(const EdgeDegreeJointCounts&, const EdgeDegreeJointCounts&) = default;
};

inline DegreeHistogram histogram_of(std::span<const std::uint32_t> degrees, Side side) {
  std::vector<std::uint64_t> dense;
  for (auto d : degrees) {
    if (d >= dense.size()) dense.resize(static_cast<std::size_t>(d) + 1, 0);
    ++dense[d];
  }
  DegreeHistogram h;
  h.side = side;
  h.n_total = degrees.size();
  for (std::size_t d = 0; d < dense.size(); ++d) {
    if (dense[d] != 0) h.counts.emplace(d, dense[d]);
  }
  return h;
}

inline DegreeHistogram degree_histogram(const DirectedMultigraph& g, Side side) {
  return histogram_of(side == Side::in ? g.in_degrees() : g.out_degrees(), side);
}

/// X(t,d1,d2) for every pair at once: source out-degree d1, target in-degree d2, loops excluded.
inline EdgeDegreeJointCounts edge_joint_counts(const DirectedMultigraph& g) {
  EdgeDegreeJointCounts out;
  auto src = g.sources();
  auto dst = g.targets();
  auto in_deg = g.in_degrees();
  auto out_deg = g.out_degrees();
  // most mass sits at small degrees, so count those densely
  constexpr std::uint32_t kDense = 64;
  std::vector<std::uint64_t> dense(kDense * kDense, 0);
  for (std::size_t k = 0; k < src.size(); ++k) {
    if (src[k] == dst[k]) {
      ++out.loop_count;
      continue;
    }
    std::uint32_t d1 = out_deg[src[k]];
    std::uint32_t d2 = in_deg[dst[k]];
    if (d1 < kDense && d2 < kDense) {
      ++dense[d1 * kDense + d2];
    } else {
      ++out.counts[{d1, d2}];
    }
  }
  for (std::uint32_t d1 = 0; d1 < kDense; ++d1) {
    for (std::uint32_t d2 = 0; d2 < kDense; ++d2) {
      if (auto c = dense[d1 * kDense + d2]) out.counts[{d1, d2}] += c;
    }
  }
  return out;
}

inline std::uint64_t x_count(const DirectedMultigraph& g, std::uint64_t d1, std::uint64_t d2) {
  require(d1 >= 1 && d2 >= 1, ErrorCode::invalid_argument, "x_count needs d1 >= 1 and d2 >= 1");
  auto src = g.sources();
  auto dst = g.targets();
  auto in_deg = g.in_degrees();
  auto out_deg = g.out_degrees();
  std::uint64_t count = 0;
  for (std::size_t k = 0; k < src.size(); ++k) {
    if (src[k] != dst[k] && out_deg[src[k]] == d1 && in_deg[dst[k]] == d2) ++count;
  }
  return count;
}

inline void write_histogram_csv(const DegreeHistogram& h, std::ostream& out) {
  out << "degree,count\n";
  for (const auto& [d, c] : h.counts) out << d << ',' << c << '\n';
}

inline void write_joint_csv(const EdgeDegreeJointCounts& j, std::ostream& out) {
  out << "d1,d2,count\n";
  for (const auto& [key, c] : j.counts) out << key.first << ',' << key.second << ',' << c << '\n';
}

namespace detail {

inline std::vector<std::uint64_t> parse_csv_row(const std::string& line, std::size_t fields, std::size_t line_no) {
  std::vector<std::uint64_t> values;
  std::size_t start = 0;
  for (std::size_t f = 0; f < fields; ++f) {
    auto end = line.find(',', start);
    bool last = f + 1 == fields;
    require(last ? end == std::string::npos : end != std::string::npos, ErrorCode::malformed_row,
            "wrong field count on line " + std::to_string(line_no));
    values.push_back(parse_index(std::string_view(line).substr(start, last ? std::string::npos : end - start),
                                 line_no));
    start = end + 1;
  }
  return values;
}

inline std::string read_header(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::malformed_row, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace detail

inline DegreeHistogram read_histogram_csv(std::istream& in, Side side = Side::in) {
  require(detail::read_header(in) == "degree,count", ErrorCode::malformed_row, "header must be 'degree,count'");
  DegreeHistogram h;
  h.side = side;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto v = detail::parse_csv_row(line, 2, line_no);
    h.counts[v[0]] += v[1];
    h.n_total += v[1];
  }
  return h;
}

inline EdgeDegreeJointCounts read_joint_csv(std::istream& in) {
  require(detail::read_header(in) == "d1,d2,count", ErrorCode::malformed_row, "header must be 'd1,d2,count'");
  EdgeDegreeJointCounts j;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto v = detail::parse_csv_row(line, 3, line_no);
    j.counts[{v[0], v[1]}] += v[2];
  }
  return j;
}

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Least-squares slope of log(count) against log(d + shift) over degrees in [dmin, dmax] with positive values.
inline SlopeFit tail_slope(const std::vector<std::pair<double, double>>& degree_value, double dmin, double dmax,
                           double shift = 0.0) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (const auto& [d, v] : degree_value) {
    if (d < dmin || d > dmax || !(v > 0.0)) continue;
    double lx = std::log(d + shift);
    double ly = std::log(v);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  require(m >= 2, ErrorCode::invalid_argument, "tail_slope needs at least two positive points");
  double denom = static_cast<double>(m) * sxx - sx * sx;
  SlopeFit fit;
  fit.points = m;
  fit.slope = (static_cast<double>(m) * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / static_cast<double>(m);
  return fit;
}

}  // namespace dpa
