#include "mfvar.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "mfv/config.hpp"
#include "mfv/eval.hpp"
#include "mfv/forecast.hpp"
#include "mfv/gibbs.hpp"
#include "mfv/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void set_err(char* errbuf, size_t errlen, const std::string& msg) {
  if (!errbuf || errlen == 0) return;
  std::strncpy(errbuf, msg.c_str(), errlen - 1);
  errbuf[errlen - 1] = '\0';
}

int guarded(char* errbuf, size_t errlen, const std::function<void()>& fn) {
  try {
    fn();
    return MFV_OK;
  } catch (const std::invalid_argument& e) {
    set_err(errbuf, errlen, e.what());
    return MFV_ERR_CONFIG;
  } catch (const std::ios_base::failure& e) {
    set_err(errbuf, errlen, e.what());
    return MFV_ERR_IO;
  } catch (const std::exception& e) {
    set_err(errbuf, errlen, e.what());
    std::string what = e.what();
    return what.find("cannot open") != std::string::npos ||
                   what.find("No such file") != std::string::npos
               ? MFV_ERR_IO
               : MFV_ERR_NUMERIC;
  }
}

std::string dir_of(const std::string& path) {
  fs::path p(path);
  return p.has_parent_path() ? p.parent_path().string() : std::string(".");
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open for writing: " + path.string());
  out << std::setprecision(17);
  return out;
}

std::vector<mfv::ModelSpecConfig> model_list(const mfv::AppConfig& cfg) {
  if (!cfg.models.empty()) return cfg.models;
  return {{"model", cfg.estimate}};
}

struct FitResult {
  mfv::GibbsRun run;
  mfv::ModelConfig model;
  int p = 0;
};

FitResult fit_one(const mfv::AppConfig& cfg, const mfv::EstimateSettings& est,
                  const mfv::MixedPanel& panel, uint64_t seed_override) {
  mfv::MfModelData data = mfv::to_model_data(panel, est.p);
  mfv::PriorSpec prior = mfv::build_prior(cfg, est, panel);
  mfv::ModelConfig model = mfv::to_model_config(est);
  mfv::SamplerConfig sampler = mfv::to_sampler_config(est);
  if (seed_override != 0) sampler.seed = seed_override;
  return {mfv::run_chain(data, prior, model, sampler), model, est.p};
}

void write_draws_csv(const fs::path& path, const mfv::DrawsStore& d) {
  auto out = open_out(path);
  int n = d.n, p = d.p, m = d.m;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n * p; ++c) out << "pi_" << r << '_' << c << ',';
  for (int c = 0; c < n; ++c)
    for (int r = c; r < n; ++r) out << "sigma_" << r << '_' << c << ',';
  for (int j = 0; j < n * m; ++j) out << "psi_" << j << ',';
  out << "lambda_psi,phi_psi,phi,sigma2,h_last";
  for (int l = 0; l < p; ++l)
    for (int v = 0; v < n; ++v) out << ",zlag_" << l << '_' << v;
  out << '\n';

  for (int j = 0; j < d.pi.rows(); ++j) {
    for (int k = 0; k < d.pi.cols(); ++k) out << d.pi(j, k) << ',';
    for (int k = 0; k < d.sigma.cols(); ++k) out << d.sigma(j, k) << ',';
    for (int k = 0; k < d.psi.cols(); ++k) out << d.psi(j, k) << ',';
    out << d.hyper(j, 0) << ',' << d.hyper(j, 1) << ',' << d.hyper(j, 2) << ','
        << d.hyper(j, 3) << ',' << d.h_last[j];
    for (int k = 0; k < d.zlag.cols(); ++k) out << ',' << d.zlag(j, k);
    out << '\n';
  }
}

json run_manifest(const mfv::EstimateSettings& est, const mfv::GibbsRun& run,
                  const mfv::MixedPanel& panel) {
  json j;
  j["variant"] = est.ss_variant;
  j["csv"] = est.csv;
  j["p"] = est.p;
  j["lambda1"] = est.lambda1;
  j["lambda2"] = est.lambda2;
  j["draws"] = est.draws;
  j["burnin"] = est.burnin;
  j["thin"] = est.thin;
  j["seed"] = est.seed;
  j["T"] = panel.T;
  j["start"] = panel.start.str();
  j["n_monthly"] = panel.n_m();
  j["n_quarterly"] = panel.n_q();
  j["mh_accept_rate"] = run.mh_accept_rate;
  j["mh_scale"] = run.mh_scale;
  j["explosive_draws"] = run.explosive;
  return j;
}

mfv::MixedPanel load_panel_for(const mfv::AppConfig& cfg, const std::string& config_path) {
  mfv::MixedPanel panel = mfv::build_panel(cfg, dir_of(config_path));
  if (!cfg.forecast.asof.empty()) {
    auto [asof, quarterly] = mfv::parse_date(cfg.forecast.asof);
    (void)quarterly;
    panel = mfv::truncate_to_vintage(panel, asof, mfv::publication_pattern(cfg));
  }
  return panel;
}

void run_models(const mfv::AppConfig& cfg, int jobs,
                const std::function<void(const mfv::ModelSpecConfig&)>& work) {
  auto models = model_list(cfg);
  if (jobs <= 1 || models.size() <= 1) {
    for (const auto& m : models) work(m);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(models.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < models.size(); i += jobs) {
    pool.clear();
    for (int t = 0; t < jobs && next < models.size(); ++t, ++next) {
      std::size_t idx = next;
      pool.emplace_back([&, idx] {
        try {
          work(models[idx]);
        } catch (...) {
          errors[idx] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

extern "C" {

const char* mfv_version(void) { return "0.1.0"; }

struct mfv_panel {
  mfv::MixedPanel panel;
};

int mfv_panel_load(const char* config_path, mfv_panel** out, char* errbuf, size_t errlen) {
  if (!config_path || !out) {
    set_err(errbuf, errlen, "null argument");
    return MFV_ERR_INVALID;
  }
  return guarded(errbuf, errlen, [&] {
    mfv::AppConfig cfg = mfv::load_config(config_path);
    *out = new mfv_panel{load_panel_for(cfg, config_path)};
  });
}

void mfv_panel_free(mfv_panel* panel) { delete panel; }

int mfv_panel_dims(const mfv_panel* panel, int* T, int* n_monthly, int* n_quarterly) {
  if (!panel) return MFV_ERR_INVALID;
  if (T) *T = panel->panel.T;
  if (n_monthly) *n_monthly = panel->panel.n_m();
  if (n_quarterly) *n_quarterly = panel->panel.n_q();
  return MFV_OK;
}

int mfv_simulate(const char* config_path, const char* output_dir, uint64_t seed, char* errbuf,
                 size_t errlen) {
  if (!config_path || !output_dir) {
    set_err(errbuf, errlen, "null argument");
    return MFV_ERR_INVALID;
  }
  return guarded(errbuf, errlen, [&] {
    mfv::AppConfig cfg = mfv::load_config(config_path);
    const mfv::SimulateSettings& s = cfg.simulate;
    int n = s.nm + s.nq;

    mfv::SimParams params;
    params.Pi = Eigen::MatrixXd::Zero(n, n * s.p);
    params.Pi.leftCols(n).diagonal().setConstant(s.rho);
    params.Sigma = Eigen::MatrixXd::Identity(n, n);
    params.Psi = Eigen::MatrixXd::Zero(n, 1);
    params.phi = s.phi;
    params.sigma2 = s.sigma2;

    mfv::RngStream rng(seed != 0 ? seed : s.seed, 0);
    mfv::SimOutput sim = mfv::simulate_model(params, s.T, s.p, s.nm, s.nq, rng, s.ragged);

    fs::create_directories(output_dir);
    fs::path base(output_dir);
    mfv::YearMonth start{2000, 1};

    std::ostringstream config;
    config << std::setprecision(17);
    for (int j = 0; j < n; ++j) {
      bool monthly = j < s.nm;
      std::string id = (monthly ? "m" : "q") + std::to_string(monthly ? j + 1 : j - s.nm + 1);
      std::string file = id + ".csv";
      auto out = open_out(base / file);
      out << "date,value\n";
      for (int t = 0; t < s.T; ++t) {
        if (monthly) {
          out << start.plus(t).str() << ','
              << (sim.data.ym_obs(t, j) ? std::to_string(sim.data.ym(t, j)) : "NA") << '\n';
        } else if (sim.data.yq_obs(t, j - s.nm)) {
          out << start.plus(t).str() << ',' << sim.data.yq(t, j - s.nm) << '\n';
        }
      }
      config << "[series]\nid = " << id << "\npath = " << file << "\nfrequency = "
             << (monthly ? "monthly" : "quarterly") << "\nprior_mean = 0\nprior_sd = 1\n\n";
    }
    config << "[estimate]\np = " << s.p << "\ncsv = " << (s.sigma2 > 0 ? "true" : "false")
           << "\n";
    open_out(base / "panel.ini") << config.str();

    json truth;
    truth["p"] = s.p;
    truth["n_monthly"] = s.nm;
    truth["n_quarterly"] = s.nq;
    truth["phi"] = params.phi;
    truth["sigma2"] = params.sigma2;
    truth["pi"] = std::vector<double>(params.Pi.data(), params.Pi.data() + params.Pi.size());
    truth["h"] = std::vector<double>(sim.h.data(), sim.h.data() + sim.h.size());
    std::vector<double> zflat(sim.z.data(), sim.z.data() + sim.z.size());
    truth["z_col_major"] = zflat;
    open_out(base / "truth.json") << truth.dump(2) << '\n';

    json manifest;
    manifest["kind"] = "simulation";
    manifest["T"] = s.T;
    manifest["seed"] = seed != 0 ? seed : s.seed;
    open_out(base / "manifest.json") << manifest.dump(2) << '\n';
  });
}

int mfv_estimate(const char* config_path, const char* output_dir, uint64_t seed, int jobs,
                 char* errbuf, size_t errlen) {
  if (!config_path || !output_dir) {
    set_err(errbuf, errlen, "null argument");
    return MFV_ERR_INVALID;
  }
  return guarded(errbuf, errlen, [&] {
    mfv::AppConfig cfg = mfv::load_config(config_path);
    mfv::MixedPanel panel = load_panel_for(cfg, config_path);
    fs::create_directories(output_dir);
    run_models(cfg, jobs, [&](const mfv::ModelSpecConfig& mc) {
      FitResult fit = fit_one(cfg, mc.settings, panel, seed);
      fs::path dir = fs::path(output_dir) / mc.name;
      fs::create_directories(dir);
      write_draws_csv(dir / "draws.csv", fit.run.draws);
      open_out(dir / "manifest.json")
          << run_manifest(mc.settings, fit.run, panel).dump(2) << '\n';
    });
  });
}

int mfv_forecast(const char* config_path, const char* output_dir, uint64_t seed, int jobs,
                 char* errbuf, size_t errlen) {
  if (!config_path || !output_dir) {
    set_err(errbuf, errlen, "null argument");
    return MFV_ERR_INVALID;
  }
  return guarded(errbuf, errlen, [&] {
    mfv::AppConfig cfg = mfv::load_config(config_path);
    mfv::MixedPanel panel = load_panel_for(cfg, config_path);
    fs::create_directories(output_dir);
    int H = cfg.forecast.horizon;

    std::vector<std::string> names;
    for (const auto& id : panel.monthly_ids) names.push_back(id);
    for (const auto& id : panel.quarterly_ids) names.push_back(id);

    run_models(cfg, jobs, [&](const mfv::ModelSpecConfig& mc) {
      FitResult fit = fit_one(cfg, mc.settings, panel, seed);
      mfv::PredictiveDraws pred = mfv::predictive_simulate(
          fit.run.draws, H, fit.model.csv,
          (seed != 0 ? seed : mc.settings.seed) + 104729);
      mfv::ForecastSummary sum = mfv::summarize(pred);

      fs::path dir = fs::path(output_dir) / mc.name;
      fs::create_directories(dir);
      auto out = open_out(dir / "forecast.csv");
      out << "variable,horizon,date,mean,sd,q05,q50,q95\n";
      int nm = panel.n_m(), n = panel.n();
      mfv::YearMonth origin = panel.date_at(panel.T - 1);
      for (int v = 0; v < n; ++v)
        for (int h = 1; h <= H; ++h) {
          mfv::YearMonth date = origin.plus(h);
          if (v < nm) {
            out << names[v] << ',' << h << ',' << date.str() << ',' << sum.mean(h - 1, v) << ','
                << sum.sd(h - 1, v) << ',' << sum.q05(h - 1, v) << ',' << sum.q50(h - 1, v)
                << ',' << sum.q95(h - 1, v) << '\n';
          } else if (date.is_quarter_end()) {
            // aggregate each path over the five-month window
            int nd = static_cast<int>(pred.z.size());
            std::vector<double> vals(nd);
            double m1 = 0.0, m2 = 0.0;
            for (int j = 0; j < nd; ++j) {
              vals[j] = mfv::aggregated_at(pred.z[j], v, pred.p + h - 1);
              m1 += vals[j];
              m2 += vals[j] * vals[j];
            }
            m1 /= nd;
            double sd = std::sqrt(std::max(m2 / nd - m1 * m1, 0.0));
            std::sort(vals.begin(), vals.end());
            auto q = [&](double pr) {
              return vals[std::min<std::size_t>(vals.size() - 1,
                                                static_cast<std::size_t>(pr * (nd - 1) + 0.5))];
            };
            out << names[v] << ',' << h << ',' << date.str() << ',' << m1 << ',' << sd << ','
                << q(0.05) << ',' << q(0.50) << ',' << q(0.95) << '\n';
          }
        }
      open_out(dir / "manifest.json")
          << run_manifest(mc.settings, fit.run, panel).dump(2) << '\n';
    });
  });
}

int mfv_evaluate(const char* config_path, const char* output_dir, uint64_t seed, int jobs,
                 char* errbuf, size_t errlen) {
  if (!config_path || !output_dir) {
    set_err(errbuf, errlen, "null argument");
    return MFV_ERR_INVALID;
  }
  return guarded(errbuf, errlen, [&] {
    mfv::AppConfig cfg = mfv::load_config(config_path);
    mfv::MixedPanel panel = mfv::build_panel(cfg, dir_of(config_path));
    if (cfg.eval.first_origin.empty() || cfg.eval.last_origin.empty())
      throw std::invalid_argument("evaluate: [evaluate] needs first_origin and last_origin");

    auto month_index = [&](const std::string& tok) {
      auto [ym, q] = mfv::parse_date(tok);
      (void)q;
      int idx = ym.index() - panel.start.index();
      if (idx < 0 || idx >= panel.T)
        throw std::invalid_argument("evaluate: date " + tok + " outside the panel");
      return idx;
    };

    std::vector<std::string> names;
    for (const auto& id : panel.monthly_ids) names.push_back(id);
    for (const auto& id : panel.quarterly_ids) names.push_back(id);

    mfv::EvalConfig ev;
    ev.first_origin = month_index(cfg.eval.first_origin);
    ev.last_origin = month_index(cfg.eval.last_origin);
    ev.step = cfg.eval.step;
    ev.horizon = cfg.eval.horizon;
    ev.textbook_lpds = cfg.eval.textbook_lpds;
    for (const std::string& id : cfg.eval.targets) {
      auto it = std::find(names.begin(), names.end(), id);
      if (it == names.end())
        throw std::invalid_argument("evaluate: unknown target series " + id);
      ev.target_vars.push_back(static_cast<int>(it - names.begin()));
    }
    if (ev.target_vars.empty())
      for (int v = 0; v < panel.n(); ++v) ev.target_vars.push_back(v);

    auto models = model_list(cfg);
    int benchmark = 0;
    if (!cfg.eval.benchmark.empty()) {
      auto it = std::find_if(models.begin(), models.end(),
                             [&](const auto& m) { return m.name == cfg.eval.benchmark; });
      if (it == models.end())
        throw std::invalid_argument("evaluate: unknown benchmark model " + cfg.eval.benchmark);
      benchmark = static_cast<int>(it - models.begin());
    }

    std::vector<mfv::ModelEval> results(models.size());
    run_models(cfg, jobs, [&](const mfv::ModelSpecConfig& mc) {
      std::size_t idx = 0;
      while (models[idx].name != mc.name) ++idx;
      mfv::MfModelData full = mfv::to_model_data(panel, mc.settings.p);
      mfv::PriorSpec prior = mfv::build_prior(cfg, mc.settings, panel);
      mfv::SamplerConfig sampler = mfv::to_sampler_config(mc.settings);
      if (seed != 0) sampler.seed = seed;
      results[idx] = {mc.name, mfv::recursive_evaluate(full, prior,
                                                       mfv::to_model_config(mc.settings),
                                                       sampler, ev)};
    });

    mfv::ReportTable report =
        mfv::build_report(results, benchmark, names, cfg.eval.textbook_lpds);
    fs::create_directories(output_dir);
    open_out(fs::path(output_dir) / "report.csv") << report.csv;
    open_out(fs::path(output_dir) / "report.txt") << report.text;
  });
}

}  // extern "C"
