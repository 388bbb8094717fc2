#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace failover {

struct guard_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Size guard for the exhaustive covering array number search. Raise it
/// with FAILOVER_LAB_GUARD="MAX_T,MAX_L" (or an explicit instance).
struct SearchGuard {
  int max_strength = 3;
  int max_cols = 6;

  bool admits(int strength, int cols) const {
    return strength <= max_strength && cols <= max_cols;
  }
  static SearchGuard from_env();
};

/// An N x l binary array with a claimed strength t. Rows are stored as
/// bitmasks with column 1 at the most significant of the l bits, so
/// integer order on row words equals row-wise lexicographic order.
class CoveringArray {
 public:
  CoveringArray(int strength, int cols, std::vector<std::uint32_t> rows);

  static CoveringArray from_cells(int strength,
                                  const std::vector<std::vector<int>>& cells);

  int rows() const { return static_cast<int>(rows_.size()); }
  int cols() const { return cols_; }
  int strength() const { return strength_; }

  /// Cell value, 0-based row and column.
  int cell(int row, int col) const;
  std::uint32_t row_bits(int row) const { return rows_.at(row); }
  const std::vector<std::uint32_t>& row_data() const { return rows_; }
  std::vector<std::vector<int>> cells() const;

 private:
  int strength_;
  int cols_;
  std::vector<std::uint32_t> rows_;
};

/// One coverage hole: a t-subset of columns (1-based, ascending) and the
/// tuple that never occurs there. Tuple bit order follows the columns,
/// columns[0] at the most significant bit.
struct CoverageGap {
  std::vector<int> columns;
  std::uint32_t tuple = 0;
  int strength = 0;

  std::vector<int> tuple_bits() const;
  bool operator==(const CoverageGap&) const = default;
};

bool is_covering_array(const CoveringArray& m);

/// Complete gap list in deterministic order: column subsets lexicographic,
/// tuples numeric. Empty iff is_covering_array.
std::vector<CoverageGap> uncovered_tuples(const CoveringArray& m);

/// Row-level variants shared with the adversary; these accept zero rows.
std::vector<CoverageGap> coverage_gaps(const std::vector<std::uint32_t>& rows,
                                       int cols, int strength);
std::optional<CoverageGap> first_coverage_gap(
    const std::vector<std::uint32_t>& rows, int cols, int strength);

struct ExactCount {
  int n;
  CoveringArray witness;
};

/// Minimum N such that an N x cols binary array of the given strength
/// exists, by iterative deepening on N over a canonical-form backtracking
/// search. Also hands back one witness.
ExactCount can_exact(int strength, int cols, const SearchGuard& guard = {});

/// Fixed-row-count backtracking search in row-canonical form (first row
/// all zeros, rows strictly increasing, fresh rows sorted inside column
/// classes, every row must cover something new). Complete for
/// n <= CAN(strength, cols); above that a witness padded with duplicate
/// rows always exists, so the minimum is what matters.
std::optional<CoveringArray> search_with_rows(int strength, int cols, int n);

/// Deterministic one-row-at-a-time density construction; ties toward 0.
/// Output always passes is_covering_array.
CoveringArray greedy_construct(int strength, int cols);

/// Leading term 2^(t-2) * log2(l - t + 1) of the known asymptotic lower
/// bound on CAN(t, l, 2); the (1 + o(1)) factor is omitted, so treat the
/// value as an asymptotic reference, not a certified bound.
double sarkar_lower_bound(int strength, int cols);

/// Text format: whitespace-separated 0/1 cells, one row per line.
CoveringArray parse_ca_text(const std::string& text, int strength);
std::string ca_to_text(const CoveringArray& m);

/// Smallest w >= 0 with 2^w >= x; x >= 1.
int ceil_log2(unsigned long long x);

}  // namespace failover
