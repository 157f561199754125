#include "mfv/tsdata.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mfv {

std::string YearMonth::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return buf;
}

std::pair<YearMonth, bool> parse_date(const std::string& token) {
  auto fail = [&]() -> std::pair<YearMonth, bool> {
    throw std::invalid_argument("unparseable date: '" + token + "'");
  };
  std::string s = token;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  s = s.substr(i);

  auto qpos = s.find_first_of("Qq");
  if (qpos != std::string::npos) {
    int year, q;
    if (std::sscanf(s.c_str(), "%d", &year) != 1) return fail();
    if (std::sscanf(s.c_str() + qpos + 1, "%d", &q) != 1 || q < 1 || q > 4) return fail();
    return {{year, 3 * q}, true};
  }
  int year, month;
  if (std::sscanf(s.c_str(), "%d-%d", &year, &month) != 2 || month < 1 || month > 12)
    return fail();
  return {{year, month}, false};
}

void Series::validate() const {
  if (dates.size() != values.size())
    throw std::invalid_argument("series '" + id + "': dates/values length mismatch");
  for (std::size_t i = 1; i < dates.size(); ++i)
    if (!(dates[i - 1] < dates[i]))
      throw std::invalid_argument("series '" + id + "': dates not strictly increasing at " +
                                  dates[i].str());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] && !std::isfinite(*values[i]))
      throw std::invalid_argument("series '" + id + "': non-finite value at " + dates[i].str());
    if (frequency == Frequency::Quarterly && values[i] && !dates[i].is_quarter_end())
      throw std::invalid_argument("series '" + id + "': quarterly value off quarter end at " +
                                  dates[i].str());
  }
}

Series apply_transform(const Series& s, const TransformSpec& spec) {
  if (spec.scale <= 0.0) throw std::invalid_argument("transform scale must be > 0");
  if (spec.kind == TransformKind::None) return s;

  if (s.size() < 2)
    throw std::invalid_argument("series '" + s.id + "': need length >= 2 for log_diff");
  Series out;
  out.id = s.id;
  out.frequency = s.frequency;
  int step = s.frequency == Frequency::Quarterly ? 3 : 1;
  for (std::size_t i = 1; i < s.size(); ++i) {
    out.dates.push_back(s.dates[i]);
    bool contiguous = s.dates[i].index() - s.dates[i - 1].index() == step;
    if (!contiguous || !s.values[i] || !s.values[i - 1]) {
      out.values.push_back(std::nullopt);
      continue;
    }
    double prev = *s.values[i - 1], cur = *s.values[i];
    if (prev <= 0.0 || cur <= 0.0)
      throw std::domain_error("series '" + s.id + "': non-positive level under log_diff at " +
                              s.dates[i].str());
    out.values.push_back(spec.scale * (std::log(cur) - std::log(prev)));
  }
  return out;
}

int PublicationPattern::delay_for(const std::string& id) const {
  for (const auto& [sid, d] : delay_months)
    if (sid == id) return d;
  return 0;
}

Series load_series_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open series file: " + path);

  Series s;
  {
    auto slash = path.find_last_of('/');
    auto base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    s.id = dot == std::string::npos ? base : base.substr(0, dot);
  }

  std::string line;
  int row = 0;
  bool quarterly = false, first = true;
  std::set<int> seen;
  while (std::getline(in, line)) {
    ++row;
    if (row == 1 && schema.has_header) continue;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;

    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    int need = std::max(schema.date_column, schema.value_column) + 1;
    if (static_cast<int>(cells.size()) < need)
      throw std::runtime_error(path + ": row " + std::to_string(row) + ": too few columns");

    YearMonth ym;
    bool q;
    try {
      std::tie(ym, q) = parse_date(cells[schema.date_column]);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ": row " + std::to_string(row) + ": malformed date '" +
                               cells[schema.date_column] + "'");
    }
    if (first) {
      quarterly = q;
      first = false;
    }
    if (!seen.insert(ym.index()).second)
      throw std::invalid_argument(path + ": duplicate date " + ym.str());

    std::optional<double> value;
    try {
      std::size_t pos = 0;
      double v = std::stod(cells[schema.value_column], &pos);
      while (pos < cells[schema.value_column].size() &&
             std::isspace(static_cast<unsigned char>(cells[schema.value_column][pos])))
        ++pos;
      if (pos == cells[schema.value_column].size() && std::isfinite(v)) value = v;
    } catch (const std::exception&) {
      // unparseable values are explicit missing
    }
    s.dates.push_back(ym);
    s.values.push_back(value);
  }
  s.frequency = quarterly ? Frequency::Quarterly : Frequency::Monthly;

  std::vector<std::size_t> order(s.dates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return s.dates[a] < s.dates[b]; });
  Series sorted = s;
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted.dates[i] = s.dates[order[i]];
    sorted.values[i] = s.values[order[i]];
  }
  sorted.validate();
  return sorted;
}

int MixedPanel::last_observed() const {
  for (int t = T - 1; t >= 0; --t) {
    for (int j = 0; j < n_m(); ++j)
      if (monthly_obs(t, j)) return t;
    for (int j = 0; j < n_q(); ++j)
      if (quarterly_obs(t, j)) return t;
  }
  return -1;
}

MixedPanel assemble_panel(const std::vector<Series>& monthly,
                          const std::vector<Series>& quarterly) {
  for (const auto& s : monthly) {
    s.validate();
    if (s.frequency != Frequency::Monthly)
      throw std::invalid_argument("series '" + s.id + "' is not monthly");
  }
  for (const auto& s : quarterly) {
    s.validate();
    if (s.frequency != Frequency::Quarterly)
      throw std::invalid_argument("series '" + s.id + "' is not quarterly");
  }

  int lo = INT32_MAX, hi = INT32_MIN;
  for (const auto* group : {&monthly, &quarterly})
    for (const auto& s : *group) {
      if (s.dates.empty()) continue;
      lo = std::min(lo, s.dates.front().index());
      hi = std::max(hi, s.dates.back().index());
    }
  if (lo > hi) throw std::invalid_argument("assemble_panel: no observations in any series");

  MixedPanel p;
  p.start = YearMonth::from_index(lo);
  p.T = hi - lo + 1;
  int nm = static_cast<int>(monthly.size()), nq = static_cast<int>(quarterly.size());
  p.monthly = Eigen::MatrixXd::Zero(p.T, nm);
  p.quarterly = Eigen::MatrixXd::Zero(p.T, nq);
  p.monthly_obs.setConstant(p.T, nm, false);
  p.quarterly_obs.setConstant(p.T, nq, false);
  p.monthly_transforms.resize(nm);
  p.quarterly_transforms.resize(nq);

  for (int j = 0; j < nm; ++j) {
    p.monthly_ids.push_back(monthly[j].id);
    for (std::size_t i = 0; i < monthly[j].size(); ++i)
      if (monthly[j].values[i]) {
        int t = monthly[j].dates[i].index() - lo;
        p.monthly(t, j) = *monthly[j].values[i];
        p.monthly_obs(t, j) = true;
      }
  }
  for (int j = 0; j < nq; ++j) {
    p.quarterly_ids.push_back(quarterly[j].id);
    for (std::size_t i = 0; i < quarterly[j].size(); ++i)
      if (quarterly[j].values[i]) {
        int t = quarterly[j].dates[i].index() - lo;
        p.quarterly(t, j) = *quarterly[j].values[i];
        p.quarterly_obs(t, j) = true;
      }
  }

  p.balanced_through = -1;
  for (int t = 0; t < p.T; ++t) {
    bool all = true;
    for (int j = 0; j < nm; ++j) all = all && p.monthly_obs(t, j);
    if (!all) break;
    p.balanced_through = t;
  }
  return p;
}

MixedPanel truncate_to_vintage(const MixedPanel& p, const YearMonth& asof,
                               const PublicationPattern& pattern) {
  if (asof.index() < p.start.index())
    throw std::invalid_argument("truncate_to_vintage: asof precedes panel start");

  MixedPanel out = p;
  for (int j = 0; j < p.n_m(); ++j) {
    int last = asof.index() - 1 - pattern.delay_for(p.monthly_ids[j]);
    for (int t = 0; t < p.T; ++t)
      if (p.start.index() + t > last) out.monthly_obs(t, j) = false;
  }
  for (int j = 0; j < p.n_q(); ++j) {
    int last = asof.index() - 1 - pattern.delay_for(p.quarterly_ids[j]);
    for (int t = 0; t < p.T; ++t)
      if (p.start.index() + t > last) out.quarterly_obs(t, j) = false;
  }

  out.balanced_through = -1;
  for (int t = 0; t < out.T; ++t) {
    bool all = true;
    for (int j = 0; j < out.n_m(); ++j) all = all && out.monthly_obs(t, j);
    if (!all) break;
    out.balanced_through = t;
  }
  return out;
}

}  // namespace mfv
