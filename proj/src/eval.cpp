#include "mfv/eval.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace mfv {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

double lpds(const VectorXd& y, const VectorXd& mean, const MatrixXd& cov) {
  int n = static_cast<int>(y.size());
  Eigen::LLT<MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("lpds: predictive covariance not positive definite");
  MatrixXd L = llt.matrixL();
  VectorXd w = L.triangularView<Eigen::Lower>().solve(y - mean);
  double logdet = 2.0 * L.diagonal().array().log().sum();
  return n * kLog2Pi + logdet + w.squaredNorm();
}

double lpds_textbook(const VectorXd& y, const VectorXd& mean, const MatrixXd& cov) {
  return -0.5 * lpds(y, mean, cov);
}

double rmse(const VectorXd& errors) {
  if (errors.size() == 0) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(errors.squaredNorm() / errors.size());
}

DmResult dm_test(const VectorXd& d, int h) {
  int T = static_cast<int>(d.size());
  DmResult res;
  res.T = T;
  if (T < 2) return res;

  double dbar = d.mean();
  VectorXd c = d.array() - dbar;
  int M = std::max(h - 1, 0);
  double s = c.squaredNorm() / T;
  for (int k = 1; k <= M && k < T; ++k) {
    double gk = 0.0;
    for (int t = k; t < T; ++t) gk += c[t] * c[t - k];
    gk /= T;
    s += 2.0 * (1.0 - static_cast<double>(k) / (M + 1)) * gk;
  }
  if (!(s > 0.0)) return res;

  double stat = dbar / std::sqrt(s / T);
  double harvey = std::sqrt((T + 1.0 - 2.0 * h + h * (h - 1.0) / T) / T);
  stat *= harvey;
  res.stat = stat;
  boost::math::students_t dist(T - 1);
  res.pvalue = 2.0 * boost::math::cdf(dist, -std::abs(stat));
  return res;
}

std::vector<ForecastObs> recursive_evaluate(const MfModelData& full, const PriorSpec& prior,
                                            const ModelConfig& model, const SamplerConfig& cfg,
                                            const EvalConfig& eval) {
  int n = full.n(), nm = full.n_m(), p = full.p, T = full.T();
  std::vector<ForecastObs> out;

  for (int origin = eval.first_origin; origin <= eval.last_origin; origin += eval.step) {
    if (origin >= T - 1) break;
    MfModelData est;
    est.p = p;
    est.ym = full.ym.topRows(origin + 1);
    est.ym_obs = full.ym_obs.topRows(origin + 1);
    est.yq = full.yq.topRows(origin + 1);
    est.yq_obs = full.yq_obs.topRows(origin + 1);
    est.Tb = -1;
    for (int t = 0; t <= origin; ++t) {
      bool all = true;
      for (int j = 0; j < nm; ++j) all = all && est.ym_obs(t, j);
      if (all)
        est.Tb = t;
      else
        break;
    }

    SamplerConfig run_cfg = cfg;
    run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(origin);
    GibbsRun run = run_chain(est, prior, model, run_cfg);
    PredictiveDraws pred =
        predictive_simulate(run.draws, eval.horizon, model.csv, run_cfg.seed + 7919);

    int nd = static_cast<int>(pred.z.size());
    for (int v : eval.target_vars) {
      for (int lead = 1; lead <= eval.horizon; ++lead) {
        int t = origin + lead;
        if (t >= T) break;
        bool have = v < nm ? full.ym_obs(t, v) : full.yq_obs(t, v - nm);
        if (!have) continue;
        double actual = v < nm ? full.ym(t, v) : full.yq(t, v - nm);
        int row = p + lead - 1;
        double m1 = 0.0, m2 = 0.0;
        for (int j = 0; j < nd; ++j) {
          double x = v < nm ? pred.z[j](row, v) : aggregated_at(pred.z[j], v, row);
          m1 += x;
          m2 += x * x;
        }
        m1 /= nd;
        double vv = std::max(m2 / nd - m1 * m1, 1e-12);
        out.push_back({origin, v, lead, actual, m1, vv});
      }
    }
  }
  return out;
}

namespace {

std::string stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.10) return "*";
  return "";
}

}  // namespace

ReportTable build_report(const std::vector<ModelEval>& models, int benchmark,
                         const std::vector<std::string>& var_names, bool textbook_lpds_flag) {
  // (var, lead) cells present for the benchmark, keyed by origin
  const ModelEval& bench = models[benchmark];
  std::map<std::pair<int, int>, std::map<int, const ForecastObs*>> bench_cells;
  for (const auto& o : bench.obs) bench_cells[{o.var, o.lead}][o.origin] = &o;

  auto uni_lpds = [&](const ForecastObs& o) {
    VectorXd y(1), m(1);
    MatrixXd V(1, 1);
    y << o.actual;
    m << o.mean;
    V << o.var_pred;
    return textbook_lpds_flag ? lpds_textbook(y, m, V) : lpds(y, m, V);
  };

  std::ostringstream csv, txt;
  csv << "model,variable,lead,rmse,rel_rmse,mean_lpds,dm_p_se,dm_p_lpds\n";
  txt << "forecast comparison (benchmark: " << bench.name << ")\n";
  txt << "RMSE entries for non-benchmark models are ratios to the benchmark;\n"
      << "LPDS entries are per-observation means. DM stars: * 10%  ** 5%  *** 1%\n\n";

  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const ModelEval& mdl = models[mi];
    std::map<std::pair<int, int>, std::map<int, const ForecastObs*>> cells;
    for (const auto& o : mdl.obs) cells[{o.var, o.lead}][o.origin] = &o;

    txt << mdl.name << "\n";
    for (const auto& [key, by_origin] : cells) {
      auto [var, lead] = key;
      std::vector<double> se, lp, se_b, lp_b;
      for (const auto& [origin, o] : by_origin) {
        auto bit = bench_cells.find(key);
        const ForecastObs* b = nullptr;
        if (bit != bench_cells.end()) {
          auto it2 = bit->second.find(origin);
          if (it2 != bit->second.end()) b = it2->second;
        }
        if (!b) continue;  // score only on the common sample
        double e = o->actual - o->mean;
        double eb = b->actual - b->mean;
        se.push_back(e * e);
        se_b.push_back(eb * eb);
        lp.push_back(uni_lpds(*o));
        lp_b.push_back(uni_lpds(*b));
      }
      if (se.empty()) continue;
      int Tn = static_cast<int>(se.size());
      VectorXd vse = Eigen::Map<VectorXd>(se.data(), Tn);
      VectorXd vseb = Eigen::Map<VectorXd>(se_b.data(), Tn);
      VectorXd vlp = Eigen::Map<VectorXd>(lp.data(), Tn);
      VectorXd vlpb = Eigen::Map<VectorXd>(lp_b.data(), Tn);

      double r = std::sqrt(vse.mean());
      double rb = std::sqrt(vseb.mean());
      double mlp = vlp.mean();
      DmResult dm_se{}, dm_lp{};
      if (mi != static_cast<std::size_t>(benchmark)) {
        dm_se = dm_test(vse - vseb, lead);
        dm_lp = dm_test(vlp - vlpb, lead);
      }
      std::string name =
          var < static_cast<int>(var_names.size()) ? var_names[var] : std::to_string(var);
      csv << mdl.name << ',' << name << ',' << lead << ',' << r << ','
          << (rb > 0 ? r / rb : std::numeric_limits<double>::quiet_NaN()) << ',' << mlp << ','
          << (mi == static_cast<std::size_t>(benchmark) ? 1.0 : dm_se.pvalue) << ','
          << (mi == static_cast<std::size_t>(benchmark) ? 1.0 : dm_lp.pvalue) << '\n';

      txt << "  " << name << " h=" << lead << "  rmse=";
      if (mi == static_cast<std::size_t>(benchmark))
        txt << r;
      else
        txt << (rb > 0 ? r / rb : 0.0) << stars(dm_se.pvalue);
      txt << "  lpds=" << mlp;
      if (mi != static_cast<std::size_t>(benchmark)) txt << stars(dm_lp.pvalue);
      txt << "  (T=" << Tn << ")\n";
    }
    txt << "\n";
  }
  return {csv.str(), txt.str()};
}

}  // namespace mfv
