#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mfv {

/// Calendar month. Quarterly observations live on the final month of
/// their quarter (3, 6, 9, 12).
struct YearMonth {
  int year = 0;
  int month = 1;  // 1..12

  int index() const { return year * 12 + (month - 1); }
  static YearMonth from_index(int idx) {
    int y = idx >= 0 ? idx / 12 : (idx - 11) / 12;
    return {y, idx - y * 12 + 1};
  }
  YearMonth plus(int months) const { return from_index(index() + months); }
  bool is_quarter_end() const { return month % 3 == 0; }

  bool operator==(const YearMonth& o) const { return index() == o.index(); }
  bool operator!=(const YearMonth& o) const { return !(*this == o); }
  bool operator<(const YearMonth& o) const { return index() < o.index(); }
  bool operator<=(const YearMonth& o) const { return index() <= o.index(); }

  std::string str() const;
};

/// Parses "YYYY-MM" or "YYYYQn" (quarters map to the quarter-end month).
/// Returns the date and whether the token was quarterly.
std::pair<YearMonth, bool> parse_date(const std::string& token);

enum class Frequency { Monthly, Quarterly };

struct Series {
  std::string id;
  Frequency frequency = Frequency::Monthly;
  std::vector<YearMonth> dates;                 // strictly increasing
  std::vector<std::optional<double>> values;    // nullopt = missing

  std::size_t size() const { return dates.size(); }
  void validate() const;  // throws on invariant violations
};

enum class TransformKind { None, LogDiff };

struct TransformSpec {
  TransformKind kind = TransformKind::None;
  double scale = 1.0;  // 1200 for monthly growth, 400 for quarterly
};

/// value_t = scale * (ln x_t - ln x_{t-1}); output drops the first date.
Series apply_transform(const Series& s, const TransformSpec& spec);

/// Per-series publication delay in months between the reference period
/// and availability on the forecast date.
struct PublicationPattern {
  std::vector<std::pair<std::string, int>> delay_months;

  int delay_for(const std::string& id) const;  // 0 if not listed
};

struct CsvSchema {
  int date_column = 0;
  int value_column = 1;
  bool has_header = true;
};

Series load_series_csv(const std::string& path, const CsvSchema& schema = {});

/// Aligned monthly/quarterly panel on a common monthly index.
struct MixedPanel {
  YearMonth start;
  int T = 0;  // number of months

  std::vector<std::string> monthly_ids;
  std::vector<std::string> quarterly_ids;
  std::vector<TransformSpec> monthly_transforms;
  std::vector<TransformSpec> quarterly_transforms;

  // T x n_m and T x n_q; cell valid only where the mask is true.
  Eigen::MatrixXd monthly;
  Eigen::MatrixXd quarterly;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> monthly_obs;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> quarterly_obs;

  int balanced_through = -1;  // T_b as a 0-based month index

  int n_m() const { return static_cast<int>(monthly_ids.size()); }
  int n_q() const { return static_cast<int>(quarterly_ids.size()); }
  int n() const { return n_m() + n_q(); }
  YearMonth date_at(int t) const { return start.plus(t); }

  std::optional<double> monthly_at(int t, int j) const {
    return monthly_obs(t, j) ? std::optional<double>(monthly(t, j)) : std::nullopt;
  }
  std::optional<double> quarterly_at(int t, int j) const {
    return quarterly_obs(t, j) ? std::optional<double>(quarterly(t, j)) : std::nullopt;
  }
  /// Last month index with any observation in any series, or -1.
  int last_observed() const;
};

MixedPanel assemble_panel(const std::vector<Series>& monthly,
                          const std::vector<Series>& quarterly);

/// Cuts each series so that its last observation is `asof` minus one
/// month minus its delay, producing the ragged edge.
MixedPanel truncate_to_vintage(const MixedPanel& p, const YearMonth& asof,
                               const PublicationPattern& pattern);

}  // namespace mfv
