#include "balcast/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "balcast/error.hpp"
#include "balcast/ingest.hpp"
#include "balcast/parallel.hpp"

namespace balcast {

namespace {

// Absolute scaled errors of one held-out window.
struct WindowErrors {
  bool ok = false;
  std::vector<double> hist;                             // [s]
  std::vector<std::vector<std::vector<double>>> subseq;  // [M][lambda][s]
};

Date last_origin_base(Date last, Step step) {
  if (step == Step::Daily) return last;
  const Date sunday = last.week_end();
  return sunday == last ? last : sunday - 7;
}

}  // namespace

std::string_view account_class_name(AccountClass c) {
  return c == AccountClass::Paycheck ? "paycheck" : "nopaycheck";
}

AccountClass classify_account(const Ledger& ledger, std::string_view account, const SimilarityConfig& similarity) {
  const auto txns = ledger.transactions_of(account);
  if (txns.empty()) return AccountClass::NonPaycheck;
  std::vector<double> inflows;
  for (const auto& t : txns) {
    if (t.amount.value() < 0) inflows.push_back(-t.amount.to_double());
  }
  if (inflows.empty()) return AccountClass::NonPaycheck;
  const double p75 = percentile(inflows, 75.0);
  for (const auto& r : extract_all_recurring(txns, txns.back().date, similarity)) {
    const auto k = r.frequency.kind;
    if ((k == FrequencyKind::Semimonthly || k == FrequencyKind::Biweekly) && r.mean_amount < 0.0 &&
        -r.mean_amount >= p75 - 0.005) {
      return AccountClass::Paycheck;
    }
  }
  return AccountClass::NonPaycheck;
}

std::vector<std::size_t> TuningGrids::default_taus(std::size_t S) {
  std::vector<std::size_t> out(S + 1);
  for (std::size_t i = 0; i <= S; ++i) out[i] = i;
  return out;
}

void TuningGrids::validate(std::size_t S) const {
  if (M.empty() || lambda.empty() || tau.empty()) throw InvalidArgument("tuning grids must not be empty");
  for (auto m : M) {
    if (m == 0) throw InvalidArgument("grid M values must be positive");
  }
  for (double l : lambda) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw InvalidArgument("grid lambda values must be finite and >= 0");
  }
  for (auto t : tau) {
    if (t > S) throw InvalidArgument("grid tau values must lie in [0, S]");
  }
}

TunedParameters tune_parameters(const Ledger& training, const std::vector<AccountId>& accounts,
                                const TuningOptions& options) {
  const auto& base = options.base;
  base.validate();
  const auto& grids = options.grids;
  grids.validate(base.S);
  if (options.windows < 3) throw InvalidArgument("tuning needs at least three held-out windows");
  if (accounts.empty()) throw InvalidArgument("no accounts to tune");
  if (training.empty()) throw DataError("the training ledger is empty");

  const int width = step_days(options.step);
  const std::size_t S = base.S;
  const Date end = last_origin_base(training.last_date(), options.step);
  if (options.stride == 0) throw InvalidArgument("tuning stride must be positive");
  const std::size_t span = base.L + S + (options.windows - 1) * options.stride;
  if (end - training.first_date() < static_cast<int>(span * static_cast<std::size_t>(width))) {
    throw DataError("training period too short for " + std::to_string(options.windows) + " held-out windows");
  }
  std::vector<Date> origins;
  for (std::size_t k = 0; k < options.windows; ++k) {
    origins.push_back(end - static_cast<int>(S + k * options.stride) * width);
  }

  std::vector<ForecastCorpus> corpora(origins.size());
  parallel_for(origins.size(), options.threads, [&](std::size_t k) {
    corpora[k] = build_forecast_corpus(training, origins[k], options.step, options.similarity, options.mine_recurring);
  });

  const std::size_t max_m = *std::max_element(grids.M.begin(), grids.M.end());
  const std::size_t nk = origins.size();
  std::vector<WindowErrors> errors(accounts.size() * nk);
  parallel_for(errors.size(), options.threads, [&](std::size_t task) {
    const auto& account = accounts[task / nk];
    const std::size_t k = task % nk;
    WindowErrors& out = errors[task];
    try {
      const auto series = build_series_from_opening(training, account, options.step);
      const double sd = sample_stdev(series.values);
      if (!(sd > 0.0)) return;
      const double scale = 10.0 / sd;
      const auto at = series.index_of(origins[k]);
      if (!at || series.date_at(*at) != origins[k] || *at + S >= series.size()) return;

      const auto snap = make_snapshot(training, account, origins[k], options.step, options.similarity,
                                      options.mine_recurring);
      const auto hist = hist_avg_forecast(snap, S);
      ForecastConfig cfg = base;
      cfg.M = max_m;
      const auto prep = prepare_subseq(snap, cfg, corpora[k]);

      auto err = [&](const std::vector<double>& pred) {
        std::vector<double> e(S);
        for (std::size_t s = 0; s < S; ++s) e[s] = std::abs(pred[s] - series.values[*at + 1 + s]) * scale;
        return e;
      };
      out.hist = err(hist.predictions);
      out.subseq.assign(grids.M.size(), {});
      for (std::size_t mi = 0; mi < grids.M.size(); ++mi) {
        for (double lambda : grids.lambda) {
          cfg.M = grids.M[mi];
          cfg.lambda = lambda;
          out.subseq[mi].push_back(err(fit_subseq(snap, prep, cfg).predictions));
        }
      }
      out.ok = true;
    } catch (const DataError&) {
      out.ok = false;
    }
  });

  std::size_t used = 0;
  for (const auto& e : errors) used += e.ok ? 1 : 0;
  if (used == 0) throw DataError("no held-out window could be forecast during tuning");

  // Hybrid error of account a's window k for (M index, lambda index, tau).
  auto window_error = [&](const WindowErrors& e, std::size_t mi, std::size_t li, std::size_t tau) {
    double sum = 0.0;
    for (std::size_t s = 0; s < S; ++s) sum += s < tau ? e.hist[s] : e.subseq[mi][li][s];
    return sum;
  };

  TunedParameters best;
  double best_score = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_lambda(accounts.size(), 0);
  for (std::size_t mi = 0; mi < grids.M.size(); ++mi) {
    for (std::size_t tau : grids.tau) {
      double total = 0.0;
      std::vector<std::size_t> chosen(accounts.size(), 0);
      for (std::size_t a = 0; a < accounts.size(); ++a) {
        double account_best = std::numeric_limits<double>::infinity();
        for (std::size_t li = 0; li < grids.lambda.size(); ++li) {
          double sum = 0.0;
          bool any = false;
          for (std::size_t k = 0; k < nk; ++k) {
            const auto& e = errors[a * nk + k];
            if (!e.ok) continue;
            any = true;
            sum += window_error(e, mi, li, tau);
          }
          if (!any) break;
          if (sum < account_best) {
            account_best = sum;
            chosen[a] = li;
          }
        }
        if (std::isfinite(account_best)) total += account_best;
      }
      if (total < best_score) {
        best_score = total;
        best.M = grids.M[mi];
        best.tau = tau;
        best_lambda = chosen;
      }
    }
  }

  best.mae = best_score / static_cast<double>(used * S);
  best.windows_used = used;
  for (std::size_t a = 0; a < accounts.size(); ++a) {
    bool any = false;
    for (std::size_t k = 0; k < nk; ++k) any = any || errors[a * nk + k].ok;
    best.lambda[accounts[a]] = any ? grids.lambda[best_lambda[a]] : base.lambda;
  }
  return best;
}

}  // namespace balcast
