#include "mfv/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mfv/aggregation.hpp"

namespace mfv {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

const std::string* IniSection::find(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

std::string IniSection::get(const std::string& key, const std::string& fallback) const {
  const std::string* v = find(key);
  return v ? *v : fallback;
}

double IniSection::get_num(const std::string& key, double fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  try {
    return std::stod(*v);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' has non-numeric value '" + *v + "'");
  }
}

bool IniSection::get_bool(const std::string& key, bool fallback) const {
  const std::string* v = find(key);
  if (!v) return fallback;
  std::string s = lower(*v);
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw std::invalid_argument("config: key '" + key + "' has non-boolean value '" + *v + "'");
}

std::vector<IniSection> parse_ini(std::istream& in) {
  std::vector<IniSection> sections;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: malformed section header at line " +
                                    std::to_string(lineno));
      sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected 'key = value' at line " +
                                  std::to_string(lineno));
    if (sections.empty())
      throw std::invalid_argument("config: entry before any section at line " +
                                  std::to_string(lineno));
    sections.back().entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return sections;
}

namespace {

EstimateSettings read_estimate(const IniSection& s, EstimateSettings base) {
  base.lambda1 = s.get_num("lambda1", base.lambda1);
  base.lambda2 = s.get_num("lambda2", base.lambda2);
  base.p = static_cast<int>(s.get_num("p", base.p));
  base.ss_variant = lower(s.get("ss_variant", base.ss_variant));
  base.csv = s.get_bool("csv", base.csv);
  base.c0 = s.get_num("c0", base.c0);
  base.c1 = s.get_num("c1", base.c1);
  base.mu_phi = s.get_num("mu_phi", base.mu_phi);
  base.omega_phi = s.get_num("omega_phi", base.omega_phi);
  base.sigma2_mean = s.get_num("sigma2_mean", base.sigma2_mean);
  base.d = s.get_num("d", base.d);
  base.draws = static_cast<int>(s.get_num("draws", base.draws));
  base.burnin = static_cast<int>(s.get_num("burnin", base.burnin));
  base.thin = static_cast<int>(s.get_num("thin", base.thin));
  base.seed = static_cast<std::uint64_t>(s.get_num("seed", static_cast<double>(base.seed)));
  if (base.ss_variant != "minn" && base.ss_variant != "ss" && base.ss_variant != "ssng")
    throw std::invalid_argument("config: ss_variant must be minn, ss, or ssng");
  return base;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

}  // namespace

AppConfig parse_config(std::istream& in) {
  AppConfig cfg;
  for (const IniSection& s : parse_ini(in)) {
    if (s.name == "series") {
      SeriesConfig sc;
      sc.id = s.get("id");
      if (sc.id.empty()) throw std::invalid_argument("config: [series] requires an id");
      sc.path = s.get("path");
      std::string freq = lower(s.get("frequency", "monthly"));
      if (freq == "monthly")
        sc.frequency = Frequency::Monthly;
      else if (freq == "quarterly")
        sc.frequency = Frequency::Quarterly;
      else
        throw std::invalid_argument("config: frequency must be monthly or quarterly");
      std::string tr = lower(s.get("transform", "none"));
      if (tr == "none")
        sc.transform.kind = TransformKind::None;
      else if (tr == "log_diff")
        sc.transform.kind = TransformKind::LogDiff;
      else
        throw std::invalid_argument("config: transform must be none or log_diff");
      sc.transform.scale =
          s.get_num("scale", sc.frequency == Frequency::Monthly ? 1200.0 : 400.0);
      sc.delay_months = static_cast<int>(s.get_num("delay_months", 0));
      sc.prior_mean = s.get_num("prior_mean", 0.0);
      sc.prior_sd = s.get_num("prior_sd", 1.0);
      if (!(sc.prior_sd > 0.0))
        throw std::invalid_argument("config: prior_sd must be > 0 for series " + sc.id);
      cfg.series.push_back(std::move(sc));
    } else if (s.name == "estimate") {
      cfg.estimate = read_estimate(s, cfg.estimate);
    } else if (s.name.rfind("model:", 0) == 0) {
      ModelSpecConfig mc;
      mc.name = trim(s.name.substr(6));
      if (mc.name.empty()) throw std::invalid_argument("config: [model:] requires a name");
      mc.settings = read_estimate(s, cfg.estimate);
      cfg.models.push_back(std::move(mc));
    } else if (s.name == "evaluate") {
      cfg.eval.first_origin = s.get("first_origin");
      cfg.eval.last_origin = s.get("last_origin");
      cfg.eval.step = static_cast<int>(s.get_num("step", cfg.eval.step));
      cfg.eval.horizon = static_cast<int>(s.get_num("horizon", cfg.eval.horizon));
      cfg.eval.targets = split_list(s.get("targets"));
      cfg.eval.benchmark = s.get("benchmark");
      cfg.eval.textbook_lpds = s.get_bool("textbook_lpds", false);
    } else if (s.name == "forecast") {
      cfg.forecast.horizon = static_cast<int>(s.get_num("horizon", cfg.forecast.horizon));
      cfg.forecast.asof = s.get("asof");
    } else if (s.name == "simulate") {
      cfg.simulate.T = static_cast<int>(s.get_num("T", cfg.simulate.T));
      cfg.simulate.nm = static_cast<int>(s.get_num("n_monthly", cfg.simulate.nm));
      cfg.simulate.nq = static_cast<int>(s.get_num("n_quarterly", cfg.simulate.nq));
      cfg.simulate.p = static_cast<int>(s.get_num("p", cfg.simulate.p));
      cfg.simulate.rho = s.get_num("rho", cfg.simulate.rho);
      cfg.simulate.phi = s.get_num("phi", cfg.simulate.phi);
      cfg.simulate.sigma2 = s.get_num("sigma2", cfg.simulate.sigma2);
      cfg.simulate.seed = static_cast<std::uint64_t>(s.get_num("seed", 1.0));
      for (const std::string& tok : split_list(s.get("ragged")))
        cfg.simulate.ragged.push_back(std::stoi(tok));
    } else {
      throw std::invalid_argument("config: unknown section [" + s.name + "]");
    }
  }
  return cfg;
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  return parse_config(in);
}

MixedPanel build_panel(const AppConfig& cfg, const std::string& base_dir) {
  std::vector<Series> monthly, quarterly;
  for (const SeriesConfig& sc : cfg.series) {
    std::string path = sc.path;
    if (!path.empty() && path.front() != '/' && !base_dir.empty())
      path = base_dir + "/" + path;
    Series s = load_series_csv(path);
    s.id = sc.id;
    s.frequency = sc.frequency;
    if (sc.transform.kind != TransformKind::None) s = apply_transform(s, sc.transform);
    (sc.frequency == Frequency::Monthly ? monthly : quarterly).push_back(std::move(s));
  }
  return assemble_panel(monthly, quarterly);
}

PublicationPattern publication_pattern(const AppConfig& cfg) {
  PublicationPattern pat;
  for (const SeriesConfig& sc : cfg.series)
    if (sc.delay_months > 0) pat.delay_months.emplace_back(sc.id, sc.delay_months);
  return pat;
}

MfModelData to_model_data(const MixedPanel& panel, int p) {
  MfModelData data;
  data.p = p;
  data.ym = panel.monthly;
  data.ym_obs = panel.monthly_obs;
  data.yq = panel.quarterly;
  data.yq_obs = panel.quarterly_obs;
  data.Tb = panel.balanced_through;
  return data;
}

PriorSpec build_prior(const AppConfig& cfg, const EstimateSettings& est, const MixedPanel& panel) {
  int n = panel.n(), p = est.p;

  MinnesotaSpec minn;
  minn.lambda1 = est.lambda1;
  minn.lambda2 = est.lambda2;
  minn.s_r.resize(n);
  auto series_scale = [&](const Eigen::MatrixXd& y,
                          const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& obs,
                          int j) {
    std::vector<double> vals;
    for (int t = 0; t < y.rows(); ++t)
      if (obs(t, j)) vals.push_back(y(t, j));
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
    return v.size() >= 8 ? ar_residual_scale(v) : 1.0;
  };
  for (int j = 0; j < panel.n_m(); ++j)
    minn.s_r[j] = series_scale(panel.monthly, panel.monthly_obs, j);
  for (int j = 0; j < panel.n_q(); ++j)
    minn.s_r[panel.n_m() + j] = series_scale(panel.quarterly, panel.quarterly_obs, j);

  SteadyStatePrior ss;
  ss.variant =
      est.ss_variant == "ssng" ? SteadyStateVariant::NormalGamma : SteadyStateVariant::Fixed;
  ss.mu_psi.resize(n);
  ss.omega_psi.resize(n);
  int mi = 0, qi = 0;
  for (const SeriesConfig& sc : cfg.series) {
    int idx = sc.frequency == Frequency::Monthly ? mi++ : panel.n_m() + qi++;
    ss.mu_psi[idx] = sc.prior_mean;
    ss.omega_psi[idx] = sc.prior_sd * sc.prior_sd;
  }
  ss.c0 = est.c0;
  ss.c1 = est.c1;

  CSVPrior csv;
  csv.mu_phi = est.mu_phi;
  csv.omega_phi = est.omega_phi;
  csv.sigma2_mean = est.sigma2_mean;
  csv.d = est.d;

  return make_default_prior(minn, ss, csv, n, p);
}

ModelConfig to_model_config(const EstimateSettings& est) {
  ModelConfig mc;
  mc.psi_mode = est.ss_variant == "minn"   ? PsiMode::Minnesota
                : est.ss_variant == "ssng" ? PsiMode::NormalGamma
                                           : PsiMode::Fixed;
  mc.csv = est.csv;
  return mc;
}

SamplerConfig to_sampler_config(const EstimateSettings& est) {
  SamplerConfig sc;
  sc.draws = est.draws;
  sc.burnin = est.burnin;
  sc.thin = est.thin;
  sc.seed = est.seed;
  return sc;
}

MixedPanel monthly_only(const MixedPanel& panel) {
  MixedPanel out = panel;
  out.quarterly_ids.clear();
  out.quarterly_transforms.clear();
  out.quarterly.resize(panel.T, 0);
  out.quarterly_obs.resize(panel.T, 0);
  return out;
}

QuarterlyPanel aggregate_to_quarterly(const MixedPanel& panel) {
  auto w = triangular_weights().weights;
  QuarterlyPanel out;
  for (const auto& id : panel.monthly_ids) out.ids.push_back(id);
  for (const auto& id : panel.quarterly_ids) out.ids.push_back(id);
  int nm = panel.n_m(), nq = panel.n_q(), n = nm + nq;

  std::vector<int> qmonths;
  for (int t = 0; t < panel.T; ++t)
    if (panel.date_at(t).is_quarter_end() && t >= 4) qmonths.push_back(t);

  int Q = static_cast<int>(qmonths.size());
  out.y = Eigen::MatrixXd::Zero(Q, n);
  out.obs.setConstant(Q, n, false);
  out.dates.reserve(Q);
  for (int qi = 0; qi < Q; ++qi) {
    int t = qmonths[qi];
    out.dates.push_back(panel.date_at(t));
    for (int j = 0; j < nm; ++j) {
      bool logdiff = panel.monthly_transforms.size() > static_cast<std::size_t>(j) &&
                     panel.monthly_transforms[j].kind == TransformKind::LogDiff;
      double acc = 0.0;
      bool ok = true;
      if (logdiff) {
        for (int i = 0; i < 5 && ok; ++i) {
          ok = panel.monthly_obs(t - i, j);
          if (ok) acc += w[i] * panel.monthly(t - i, j);
        }
      } else {
        for (int i = 0; i < 3 && ok; ++i) {
          ok = panel.monthly_obs(t - i, j);
          if (ok) acc += panel.monthly(t - i, j) / 3.0;
        }
      }
      if (ok) {
        out.y(qi, j) = acc;
        out.obs(qi, j) = true;
      }
    }
    for (int j = 0; j < nq; ++j)
      if (panel.quarterly_obs(t, j)) {
        out.y(qi, nm + j) = panel.quarterly(t, j);
        out.obs(qi, nm + j) = true;
      }
  }
  return out;
}

}  // namespace mfv
