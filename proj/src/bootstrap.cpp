#include "schervish/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "schervish/summation.hpp"

namespace schervish {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Run body(r) for r in [0, n) on up to `threads` workers. Each r writes only
// its own output slot, so scheduling cannot change the result.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t r = 0; r < n; ++r) body(r);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t r = t; r < n; r += threads) body(r);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double ratio(std::span<const WeightedLoss> col, const std::vector<std::size_t>* idx) {
  CompensatedSum num, den;
  const std::size_t n = idx ? idx->size() : col.size();
  for (std::size_t k = 0; k < n; ++k) {
    const WeightedLoss& x = col[idx ? (*idx)[k] : k];
    num += x.weight * x.loss;
    den += x.weight;
  }
  return num.value() / den.value();
}

void draw(std::mt19937_64& rng, std::size_t n, std::vector<std::size_t>& out) {
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  out.resize(n);
  for (auto& i : out) i = pick(rng);
}

ConfidenceInterval percentile(std::vector<double>& stats, double level, double point) {
  const double tail = 0.5 * (1.0 - level);
  ConfidenceInterval ci;
  ci.point = point;
  ci.lo = quantile(stats, tail);
  ci.hi = quantile(stats, 1.0 - tail);
  return ci;
}

}  // namespace

void BootstrapSpec::validate() const {
  if (replicates < 100) throw std::invalid_argument("bootstrap needs at least 100 replicates");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must lie in (0,1)");
}

std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t r) { return splitmix64(splitmix64(seed) ^ r); }

double quantile(std::vector<double>& values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::size_t Stratum::rows() const { return columns.empty() ? 0 : columns.front().size(); }

std::vector<ConfidenceInterval> bootstrap_contrasts(std::span<const Stratum> strata,
                                                    std::span<const Contrast> contrasts, const BootstrapSpec& spec) {
  spec.validate();
  for (const Stratum& s : strata) {
    if (s.rows() == 0) throw std::invalid_argument("bootstrap stratum is empty");
    for (const auto& col : s.columns) {
      if (col.size() != s.rows()) throw std::invalid_argument("bootstrap columns differ in length");
    }
  }
  for (const Contrast& con : contrasts) {
    for (const Term& t : con) {
      if (t.stratum >= strata.size() || t.column >= strata[t.stratum].columns.size()) {
        throw std::invalid_argument("bootstrap contrast refers to a missing column");
      }
    }
  }

  // Each column's weighted mean is computed once per draw, however many
  // contrasts use it.
  auto evaluate = [&](const std::vector<std::vector<std::size_t>>* draws) {
    std::vector<std::vector<double>> means(strata.size());
    for (std::size_t s = 0; s < strata.size(); ++s) means[s].assign(strata[s].columns.size(), NAN);
    std::vector<double> out;
    for (const Contrast& con : contrasts) {
      double v = 0.0;
      for (const Term& t : con) {
        double& m = means[t.stratum][t.column];
        if (std::isnan(m)) m = ratio(strata[t.stratum].columns[t.column], draws ? &(*draws)[t.stratum] : nullptr);
        v += t.coef * m;
      }
      out.push_back(v);
    }
    return out;
  };

  const std::vector<double> point = evaluate(nullptr);
  std::vector<std::vector<double>> stats(contrasts.size(), std::vector<double>(spec.replicates));
  parallel_for(spec.replicates, spec.threads, [&](std::size_t r) {
    std::mt19937_64 rng(replicate_seed(spec.seed, r));
    std::vector<std::vector<std::size_t>> draws(strata.size());
    for (std::size_t s = 0; s < strata.size(); ++s) draw(rng, strata[s].rows(), draws[s]);
    const std::vector<double> v = evaluate(&draws);
    for (std::size_t k = 0; k < v.size(); ++k) stats[k][r] = v[k];
  });

  std::vector<ConfidenceInterval> out;
  for (std::size_t k = 0; k < contrasts.size(); ++k) {
    out.push_back(percentile(stats[k], spec.level, point[k]));
  }
  return out;
}

ConfidenceInterval bootstrap_ci(std::span<const WeightedLoss> losses, double scale, const BootstrapSpec& spec) {
  if (losses.empty()) throw std::invalid_argument("bootstrap needs at least one loss");
  Stratum s;
  s.columns.emplace_back(losses.begin(), losses.end());
  const Contrast con{Term{0, 0, scale}};
  return bootstrap_contrasts(std::span(&s, 1), std::span(&con, 1), spec).front();
}

ConfidenceInterval bootstrap_recompute(const Dataset& d, const std::function<double(const Dataset&)>& statistic,
                                       const BootstrapSpec& spec) {
  spec.validate();
  const std::vector<Sample> rows = d.samples();
  std::vector<double> stats(spec.replicates);
  parallel_for(spec.replicates, spec.threads, [&](std::size_t r) {
    std::mt19937_64 rng(replicate_seed(spec.seed, r));
    std::vector<std::size_t> idx;
    std::vector<Sample> picked(rows.size());
    while (true) {
      draw(rng, rows.size(), idx);
      bool pos = false, neg = false;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        picked[k] = rows[idx[k]];
        (picked[k].label == 1 ? pos : neg) = true;
      }
      if (pos && neg) break;
    }
    stats[r] = statistic(Dataset(picked));
  });
  return percentile(stats, spec.level, statistic(d));
}

}  // namespace schervish
