#include "failover/covering_array.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace failover {

namespace {

void check_shape(int strength, int cols) {
  if (cols < 1 || cols > 24)
    throw std::invalid_argument("column count must be in 1..24");
  if (strength < 1) throw std::invalid_argument("strength must be >= 1");
  if (strength > cols)
    throw std::invalid_argument("strength exceeds column count");
}

// All t-subsets of columns 0..l-1 in lexicographic order.
std::vector<std::vector<int>> column_subsets(int l, int t) {
  std::vector<std::vector<int>> out;
  std::vector<int> pick(t);
  for (int i = 0; i < t; ++i) pick[i] = i;
  while (true) {
    out.push_back(pick);
    int i = t - 1;
    while (i >= 0 && pick[i] == l - (t - i)) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < t; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

std::uint32_t tuple_at(std::uint32_t row, const std::vector<int>& cols_subset,
                       int l) {
  std::uint32_t tup = 0;
  for (int c : cols_subset) tup = (tup << 1) | ((row >> (l - 1 - c)) & 1u);
  return tup;
}

}  // namespace

SearchGuard SearchGuard::from_env() {
  SearchGuard g;
  const char* raw = std::getenv("FAILOVER_LAB_GUARD");
  if (!raw) return g;
  int t = 0, l = 0;
  if (std::sscanf(raw, "%d,%d", &t, &l) != 2 || t < 1 || l < 1)
    throw std::invalid_argument(
        "FAILOVER_LAB_GUARD must be 'MAX_T,MAX_L' with positive integers");
  g.max_strength = t;
  g.max_cols = l;
  return g;
}

CoveringArray::CoveringArray(int strength, int cols,
                             std::vector<std::uint32_t> rows)
    : strength_(strength), cols_(cols), rows_(std::move(rows)) {
  check_shape(strength, cols);
  if (rows_.empty()) throw std::invalid_argument("array needs at least one row");
  const std::uint32_t limit = 1u << cols_;
  for (std::uint32_t r : rows_)
    if (r >= limit) throw std::invalid_argument("row has out-of-range bits");
}

CoveringArray CoveringArray::from_cells(
    int strength, const std::vector<std::vector<int>>& cells) {
  if (cells.empty()) throw std::invalid_argument("array needs at least one row");
  const int l = static_cast<int>(cells.front().size());
  check_shape(strength, l);
  std::vector<std::uint32_t> rows;
  rows.reserve(cells.size());
  for (const auto& row : cells) {
    if (static_cast<int>(row.size()) != l)
      throw std::invalid_argument("ragged rows");
    std::uint32_t bits = 0;
    for (int v : row) {
      if (v != 0 && v != 1) throw std::invalid_argument("cells must be 0 or 1");
      bits = (bits << 1) | static_cast<std::uint32_t>(v);
    }
    rows.push_back(bits);
  }
  return CoveringArray(strength, l, std::move(rows));
}

int CoveringArray::cell(int row, int col) const {
  if (col < 0 || col >= cols_) throw std::invalid_argument("column out of range");
  return static_cast<int>((rows_.at(row) >> (cols_ - 1 - col)) & 1u);
}

std::vector<std::vector<int>> CoveringArray::cells() const {
  std::vector<std::vector<int>> out(rows_.size(), std::vector<int>(cols_));
  for (int r = 0; r < rows(); ++r)
    for (int c = 0; c < cols_; ++c) out[r][c] = cell(r, c);
  return out;
}

std::vector<int> CoverageGap::tuple_bits() const {
  std::vector<int> bits(strength);
  for (int i = 0; i < strength; ++i)
    bits[i] = static_cast<int>((tuple >> (strength - 1 - i)) & 1u);
  return bits;
}

std::vector<CoverageGap> coverage_gaps(const std::vector<std::uint32_t>& rows,
                                       int cols, int strength) {
  check_shape(strength, cols);
  std::vector<CoverageGap> gaps;
  const std::uint32_t n_tuples = 1u << strength;
  std::vector<char> seen(n_tuples);
  for (const auto& subset : column_subsets(cols, strength)) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::uint32_t r : rows) seen[tuple_at(r, subset, cols)] = 1;
    for (std::uint32_t tup = 0; tup < n_tuples; ++tup) {
      if (seen[tup]) continue;
      CoverageGap g;
      g.columns.reserve(subset.size());
      for (int c : subset) g.columns.push_back(c + 1);
      g.tuple = tup;
      g.strength = strength;
      gaps.push_back(std::move(g));
    }
  }
  return gaps;
}

std::optional<CoverageGap> first_coverage_gap(
    const std::vector<std::uint32_t>& rows, int cols, int strength) {
  check_shape(strength, cols);
  const std::uint32_t n_tuples = 1u << strength;
  std::vector<char> seen(n_tuples);
  for (const auto& subset : column_subsets(cols, strength)) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::uint32_t r : rows) seen[tuple_at(r, subset, cols)] = 1;
    for (std::uint32_t tup = 0; tup < n_tuples; ++tup) {
      if (seen[tup]) continue;
      CoverageGap g;
      for (int c : subset) g.columns.push_back(c + 1);
      g.tuple = tup;
      g.strength = strength;
      return g;
    }
  }
  return std::nullopt;
}

bool is_covering_array(const CoveringArray& m) {
  return !first_coverage_gap(m.row_data(), m.cols(), m.strength()).has_value();
}

std::vector<CoverageGap> uncovered_tuples(const CoveringArray& m) {
  return coverage_gaps(m.row_data(), m.cols(), m.strength());
}

namespace {

// Backtracking search for a fixed row count. Symmetry is broken by fixing
// the first row to all zeros (column symbol flips), keeping rows strictly
// increasing, and generating fresh rows sorted inside every class of
// columns that are still indistinguishable (column permutations). Rows that
// cover no new tuple are skipped; a minimal array never needs one.
struct ExactSearch {
  int t, l, n;
  std::vector<std::vector<int>> subsets;
  int n_subsets;
  std::uint32_t n_tuples;
  std::vector<std::uint32_t> covered;
  std::vector<int> missing;
  long long uncovered_total = 0;
  std::vector<std::uint32_t> rows;
  std::vector<std::pair<int, int>> segments;  // [start, end) column ranges
  std::optional<std::vector<std::uint32_t>> result;

  ExactSearch(int t_, int l_, int n_) : t(t_), l(l_), n(n_) {
    subsets = column_subsets(l, t);
    n_subsets = static_cast<int>(subsets.size());
    n_tuples = 1u << t;
    covered.assign(n_subsets, 0);
    missing.assign(n_subsets, static_cast<int>(n_tuples));
    rows.push_back(0);
    for (int si = 0; si < n_subsets; ++si) place_row_coverage(0, si);
    segments.push_back({0, l});
  }

  void place_row_coverage(std::uint32_t row, int si) {
    std::uint32_t tup = tuple_at(row, subsets[si], l);
    if (!((covered[si] >> tup) & 1u)) {
      covered[si] |= 1u << tup;
      --missing[si];
    }
  }

  long long init_uncovered() {
    uncovered_total = 0;
    for (int m : missing) uncovered_total += m;
    return uncovered_total;
  }

  // candidate rows: per segment choose how many ones; ones sit in the
  // low-order (rightmost) columns of the segment.
  void gen_candidates(std::size_t seg, std::uint32_t acc,
                      std::vector<std::uint32_t>& out) const {
    if (seg == segments.size()) {
      out.push_back(acc);
      return;
    }
    auto [a, b] = segments[seg];
    const int len = b - a;
    for (int ones = 0; ones <= len; ++ones) {
      std::uint32_t mask = ones == 0 ? 0u : ((1u << ones) - 1u) << (l - b);
      gen_candidates(seg + 1, acc | mask, out);
    }
  }

  bool dfs(int placed) {
    if (uncovered_total == 0) {
      result = rows;
      return true;
    }
    if (placed == n) return false;
    const long long remaining = n - placed;
    if (uncovered_total > remaining * n_subsets) return false;
    for (int m : missing)
      if (m > remaining) return false;

    std::vector<std::uint32_t> cand;
    gen_candidates(0, 0, cand);

    // score each admissible candidate; try high-coverage rows first
    // (completeness is unaffected, every candidate still gets explored)
    struct Scored {
      std::uint32_t row;
      int fresh;
    };
    std::vector<Scored> scored;
    scored.reserve(cand.size());
    int best = 0;
    for (std::uint32_t row : cand) {
      if (row <= rows.back()) continue;
      int fresh = 0;
      for (int si = 0; si < n_subsets; ++si) {
        std::uint32_t tup = tuple_at(row, subsets[si], l);
        if (!((covered[si] >> tup) & 1u)) ++fresh;
      }
      if (fresh == 0) continue;
      best = std::max(best, fresh);
      scored.push_back({row, fresh});
    }
    if (uncovered_total > best + (remaining - 1) * n_subsets) return false;
    std::stable_sort(scored.begin(), scored.end(),
                     [](const Scored& lhs, const Scored& rhs) {
                       if (lhs.fresh != rhs.fresh) return lhs.fresh > rhs.fresh;
                       return lhs.row < rhs.row;
                     });

    std::vector<int> touched;
    for (const Scored& pick : scored) {
      if (uncovered_total - pick.fresh > (remaining - 1) * n_subsets) continue;
      const std::uint32_t row = pick.row;
      touched.clear();
      for (int si = 0; si < n_subsets; ++si) {
        std::uint32_t tup = tuple_at(row, subsets[si], l);
        if (!((covered[si] >> tup) & 1u)) touched.push_back(si);
      }

      for (int si : touched) {
        covered[si] |= 1u << tuple_at(row, subsets[si], l);
        --missing[si];
      }
      uncovered_total -= static_cast<long long>(touched.size());
      rows.push_back(row);

      auto saved_segments = segments;
      refine_segments(row);

      bool done = dfs(placed + 1);

      segments = std::move(saved_segments);
      rows.pop_back();
      uncovered_total += static_cast<long long>(touched.size());
      for (int si : touched) {
        covered[si] &= ~(1u << tuple_at(row, subsets[si], l));
        ++missing[si];
      }
      if (done) return true;
    }
    return false;
  }

  void refine_segments(std::uint32_t row) {
    std::vector<std::pair<int, int>> next;
    next.reserve(segments.size() + 4);
    for (auto [a, b] : segments) {
      std::uint32_t seg_mask = ((1u << (b - a)) - 1u) << (l - b);
      int ones = std::popcount(row & seg_mask);
      int split = b - ones;
      if (split > a) next.push_back({a, split});
      if (split < b) next.push_back({split, b});
    }
    segments = std::move(next);
  }
};

}  // namespace

std::optional<CoveringArray> search_with_rows(int strength, int cols, int n) {
  check_shape(strength, cols);
  if (strength > 5)
    throw std::invalid_argument("exact search supports strength <= 5");
  if (n < 1) throw std::invalid_argument("row count must be >= 1");
  if (n < (1 << strength)) return std::nullopt;  // some subset needs 2^t rows
  ExactSearch search(strength, cols, n);
  search.init_uncovered();
  search.dfs(1);
  if (!search.result) return std::nullopt;
  return CoveringArray(strength, cols, std::move(*search.result));
}

ExactCount can_exact(int strength, int cols, const SearchGuard& guard) {
  check_shape(strength, cols);
  if (!guard.admits(strength, cols))
    throw guard_exceeded(
        "exhaustive search refused: strength " + std::to_string(strength) +
        ", cols " + std::to_string(cols) + " exceeds guard (max " +
        std::to_string(guard.max_strength) + "," +
        std::to_string(guard.max_cols) +
        "); raise FAILOVER_LAB_GUARD to override");
  for (int n = 1 << strength; n <= (1 << cols); ++n) {
    auto witness = search_with_rows(strength, cols, n);
    if (witness) return ExactCount{witness->rows(), std::move(*witness)};
  }
  throw std::logic_error("exhaustive search failed to terminate");
}

CoveringArray greedy_construct(int strength, int cols) {
  check_shape(strength, cols);
  if (strength > 5)
    throw std::invalid_argument("greedy construction supports strength <= 5");
  const auto subsets = column_subsets(cols, strength);
  const int n_subsets = static_cast<int>(subsets.size());
  const std::uint32_t n_tuples = 1u << strength;
  std::vector<std::uint32_t> covered(n_subsets, 0);
  long long uncovered = static_cast<long long>(n_subsets) * n_tuples;

  // per column: which subsets touch it, and at which position
  std::vector<std::vector<std::pair<int, int>>> col_hits(cols);
  for (int si = 0; si < n_subsets; ++si)
    for (int j = 0; j < strength; ++j)
      col_hits[subsets[si][j]].push_back({si, j});

  std::vector<std::uint32_t> rows;
  while (uncovered > 0) {
    std::uint32_t row = 0;
    for (int c = 0; c < cols; ++c) {
      long long score[2] = {0, 0};
      for (auto [si, pos] : col_hits[c]) {
        const auto& sub = subsets[si];
        for (std::uint32_t tup = 0; tup < n_tuples; ++tup) {
          if ((covered[si] >> tup) & 1u) continue;
          bool fits = true;
          for (int j = 0; j < strength && fits; ++j) {
            if (sub[j] >= c) break;  // columns beyond c are still free
            int want = static_cast<int>((tup >> (strength - 1 - j)) & 1u);
            int have = static_cast<int>((row >> (cols - 1 - sub[j])) & 1u);
            fits = want == have;
          }
          if (fits) ++score[(tup >> (strength - 1 - pos)) & 1u];
        }
      }
      if (score[1] > score[0]) row |= 1u << (cols - 1 - c);
    }

    int fresh = 0;
    for (int si = 0; si < n_subsets; ++si) {
      std::uint32_t tup = tuple_at(row, subsets[si], cols);
      if (!((covered[si] >> tup) & 1u)) ++fresh;
    }
    if (fresh == 0) {
      // fall back to embedding the first remaining gap directly
      row = 0;
      bool found = false;
      for (int si = 0; si < n_subsets && !found; ++si) {
        for (std::uint32_t tup = 0; tup < n_tuples && !found; ++tup) {
          if ((covered[si] >> tup) & 1u) continue;
          for (int j = 0; j < strength; ++j)
            if ((tup >> (strength - 1 - j)) & 1u)
              row |= 1u << (cols - 1 - subsets[si][j]);
          found = true;
        }
      }
    }

    for (int si = 0; si < n_subsets; ++si) {
      std::uint32_t tup = tuple_at(row, subsets[si], cols);
      if (!((covered[si] >> tup) & 1u)) {
        covered[si] |= 1u << tup;
        --uncovered;
      }
    }
    rows.push_back(row);
  }
  return CoveringArray(strength, cols, std::move(rows));
}

double sarkar_lower_bound(int strength, int cols) {
  if (strength < 1) throw std::invalid_argument("strength must be >= 1");
  if (cols < strength) throw std::invalid_argument("need cols >= strength");
  const int m = cols - strength + 1;
  if (m < 1) throw std::invalid_argument("cols - strength + 1 must be >= 1");
  return std::ldexp(1.0, strength - 2) * std::log2(static_cast<double>(m));
}

CoveringArray parse_ca_text(const std::string& text, int strength) {
  std::vector<std::vector<int>> cells;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream toks(line);
    std::string tok;
    std::vector<int> row;
    while (toks >> tok) {
      for (char ch : tok) {
        if (ch != '0' && ch != '1')
          throw std::invalid_argument("covering array cells must be 0 or 1");
        row.push_back(ch - '0');
      }
    }
    if (!row.empty()) cells.push_back(std::move(row));
  }
  if (cells.empty()) throw std::invalid_argument("no rows in covering array text");
  return CoveringArray::from_cells(strength, cells);
}

std::string ca_to_text(const CoveringArray& m) {
  std::string out;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (c) out += ' ';
      out += static_cast<char>('0' + m.cell(r, c));
    }
    out += '\n';
  }
  return out;
}

int ceil_log2(unsigned long long x) {
  if (x == 0) throw std::invalid_argument("ceil_log2 needs x >= 1");
  if (x == 1) return 0;
  return std::bit_width(x - 1);
}

}  // namespace failover
