#include "sedsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "sedsim/constants.hpp"
#include "sedsim/error.hpp"

namespace sedsim {

using C = PhysicalConstants;

Histogram::Histogram(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.size() < 2) throw InvalidParameter("histogram needs at least two edges");
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (!(edges_[i] > edges_[i - 1])) {
      throw InvalidParameter("histogram edges must be strictly increasing");
    }
  }
  counts_.assign(edges_.size() - 1, 0);
}

Histogram Histogram::uniform(double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw InvalidParameter("uniform histogram needs hi > lo and bins > 0");
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  }
  edges.back() = hi;
  return Histogram(std::move(edges));
}

std::size_t freedman_diaconis_bins(std::span<const double> samples, std::size_t max_bins) {
  if (samples.size() < 2) throw InsufficientData("Freedman-Diaconis needs at least two samples");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const auto quantile = [&s](double q) {
    const double pos = q * static_cast<double>(s.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(i);
    return i + 1 < s.size() ? s[i] + f * (s[i + 1] - s[i]) : s[i];
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  const double range = s.back() - s.front();
  if (!(iqr > 0.0) || !(range > 0.0)) return 1;
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(s.size()));
  const double n = std::ceil(range / width);
  return std::clamp<std::size_t>(static_cast<std::size_t>(n), 1, max_bins);
}

Histogram Histogram::freedman_diaconis(std::span<const double> samples) {
  const std::size_t bins = freedman_diaconis_bins(samples);
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) {
    // Constant data: one bin around the value.
    const double pad = lo != 0.0 ? 1e-9 * std::abs(lo) : 1e-300;
    lo -= pad;
    hi += pad;
  }
  Histogram h = uniform(lo, hi, bins);
  h.add(samples);
  return h;
}

void Histogram::add(double value) {
  if (value < edges_.front()) {
    ++underflow_;
    return;
  }
  if (value > edges_.back()) {
    ++overflow_;
    return;
  }
  auto it = std::upper_bound(edges_.begin(), edges_.end(), value);
  std::size_t bin = static_cast<std::size_t>(it - edges_.begin());
  bin = bin == 0 ? 0 : bin - 1;
  bin = std::min(bin, counts_.size() - 1);
  ++counts_[bin];
  ++in_range_;
}

void Histogram::add(std::span<const double> values) {
  for (double v : values) add(v);
}

void Histogram::merge(const Histogram& other) {
  if (other.edges_ != edges_) throw InvalidParameter("cannot merge histograms with different edges");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  in_range_ += other.in_range_;
  underflow_ += other.underflow_;
  overflow_ += other.overflow_;
}

std::vector<double> Histogram::density() const {
  if (in_range_ == 0) throw InsufficientData("histogram has no in-range samples");
  std::vector<double> d(counts_.size());
  const double n = static_cast<double>(in_range_);
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    d[i] = static_cast<double>(counts_[i]) / (n * width(i));
  }
  return d;
}

double DensityGrid::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) s += density[i] * (edges[i + 1] - edges[i]);
  return s;
}

DensityGrid to_density(const Histogram& h) {
  return {std::vector<double>(h.edges().begin(), h.edges().end()), h.density()};
}

double total_variation(const DensityGrid& p, const DensityGrid& q) {
  if (p.edges != q.edges || p.density.size() != q.density.size()) {
    throw InvalidParameter("total variation needs densities on identical edges");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < p.density.size(); ++i) {
    s += std::abs(p.density[i] - q.density[i]) * (p.edges[i + 1] - p.edges[i]);
  }
  return 0.5 * s;
}

PhaseSamples sequential_sample(const Trajectory& traj, double t_start, unsigned stride) {
  if (stride == 0) throw InvalidParameter("stride must be at least 1");
  if (traj.empty() || t_start > traj.times().back()) {
    throw InvalidParameter("t_start lies beyond the end of the trajectory");
  }
  const double discard = 5.0 * traj.params().transient_time();
  if (t_start < discard * (1.0 - 1e-12)) {
    throw InvalidParameter("t_start must be at least 5 transient times");
  }
  const auto t = traj.times();
  const auto first = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), t_start) - t.begin());
  PhaseSamples out;
  const double m = traj.params().mass();
  for (std::size_t i = first; i < t.size(); i += stride) {
    out.x.push_back(traj.x()[i]);
    out.p.push_back(m * traj.v()[i]);
  }
  return out;
}

PhaseSamples ensemble_sample(std::span<const State> finals, const OscillatorParams& params) {
  PhaseSamples out;
  if (finals.empty()) return out;
  const double t_end = finals.front().t;
  for (const State& s : finals) {
    if (std::abs(s.t - t_end) > 1e-12 * std::abs(t_end)) {
      throw InvalidParameter("ensemble members end at different times");
    }
    out.x.push_back(s.x);
    out.p.push_back(params.mass() * s.v);
  }
  return out;
}

PhaseSamples ensemble_sample(std::span<const Trajectory> members) {
  if (members.empty()) return {};
  std::vector<State> finals;
  finals.reserve(members.size());
  for (const auto& m : members) {
    if (m.empty()) throw InvalidParameter("empty ensemble member");
    finals.push_back({m.times().back(), m.x().back(), m.v().back()});
  }
  return ensemble_sample(finals, members.front().params());
}

double DistributionSummary::kurtosis() const {
  const double m2 = moments.at(2);
  return moments.at(4) / (m2 * m2);
}

DistributionSummary summarize(const PhaseSamples& samples, const OscillatorParams& params,
                              int max_order) {
  const std::size_t n = samples.size();
  if (n < 2 || samples.p.size() != n) {
    throw InsufficientData("summarize needs at least two (x, p) samples");
  }
  DistributionSummary s;
  s.sample_count = n;
  const double nd = static_cast<double>(n);
  s.mean_x = std::accumulate(samples.x.begin(), samples.x.end(), 0.0) / nd;
  s.mean_p = std::accumulate(samples.p.begin(), samples.p.end(), 0.0) / nd;
  double ssx = 0.0, ssp = 0.0, energy = 0.0;
  const double m = params.mass(), w0 = params.omega0();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = samples.x[i] - s.mean_x, dp = samples.p[i] - s.mean_p;
    ssx += dx * dx;
    ssp += dp * dp;
    const double x = samples.x[i], p = samples.p[i];
    energy += 0.5 * m * w0 * w0 * x * x + 0.5 * p * p / m;
  }
  s.sigma_x = std::sqrt(ssx / (nd - 1.0));
  s.sigma_p = std::sqrt(ssp / (nd - 1.0));
  s.uncertainty_product = s.sigma_x * s.sigma_p;
  s.mean_energy = energy / nd;
  const int order = std::max(max_order, 4);
  std::vector<double> acc(order + 1, 0.0);
  for (double x : samples.x) {
    double pw = 1.0;
    for (int k = 1; k <= order; ++k) {
      pw *= x;
      acc[k] += pw;
    }
  }
  for (int k = 1; k <= order; ++k) s.moments[k] = acc[k] / nd;
  return s;
}

double gaussian_target(double x, const OscillatorParams& params) {
  const double a = params.mass() * params.omega0() / C::hbar;
  return std::sqrt(a / kPi) * std::exp(-a * x * x);
}

double gaussian_target_cdf(double x, const OscillatorParams& params) {
  return 0.5 * std::erfc(-x / (std::sqrt(2.0) * params.sigma_x_target()));
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InsufficientData("KS distance of an empty sample");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_threshold(double n_effective) { return 1.63 / std::sqrt(n_effective); }

FitReport goodness_of_fit(const Histogram& hist, const OscillatorParams& params,
                          double n_effective) {
  const std::uint64_t total = hist.in_range() + hist.underflow() + hist.overflow();
  if (total == 0) throw InsufficientData("empty histogram");
  FitReport r;
  const double n = static_cast<double>(total);
  r.n_effective = n_effective > 0.0 ? n_effective : n;
  r.ks_threshold = ks_threshold(r.n_effective);

  const auto edges = hist.edges();
  const auto counts = hist.counts();
  double cum = static_cast<double>(hist.underflow());
  r.ks_distance = std::abs(cum / n - gaussian_target_cdf(edges[0], params));
  const double scale = r.n_effective / n;
  unsigned used = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    cum += static_cast<double>(counts[i]);
    const double f_hi = gaussian_target_cdf(edges[i + 1], params);
    r.ks_distance = std::max(r.ks_distance, std::abs(cum / n - f_hi));
    const double expected = n * (f_hi - gaussian_target_cdf(edges[i], params));
    if (expected >= 5.0) {
      const double diff = static_cast<double>(counts[i]) - expected;
      r.chi2 += diff * diff / expected;
      ++used;
    }
  }
  r.ks_pass = r.ks_distance < r.ks_threshold;
  r.chi2_dof = used > 1 ? used - 1 : 0;
  if (r.chi2_dof > 0) {
    r.chi2_p_value = boost::math::gamma_q(0.5 * r.chi2_dof, 0.5 * r.chi2 * scale);
  }
  return r;
}

AmplitudeSeries envelope(const Trajectory& traj) {
  AmplitudeSeries out;
  const double w0 = traj.params().omega0();
  out.times.assign(traj.times().begin(), traj.times().end());
  out.amplitude.resize(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out.amplitude[i] = std::hypot(traj.x()[i], traj.v()[i] / w0);
  }
  return out;
}

AmplitudeSeries subsample(const AmplitudeSeries& series, double spacing) {
  if (!(spacing > 0.0)) throw InvalidParameter("subsample spacing must be positive");
  if (series.times.size() < 2) throw InsufficientData("envelope series too short");
  const double t0 = series.times.front();
  const double span = series.times.back() - t0;
  if (span < 10.0 * spacing) {
    throw InsufficientData("envelope spans fewer than 10 sampling intervals");
  }
  const auto count = static_cast<std::size_t>(std::floor(span / spacing)) + 1;
  AmplitudeSeries out;
  out.representative = true;
  out.times.reserve(count);
  out.amplitude.reserve(count);
  std::size_t j = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = std::min(t0 + static_cast<double>(k) * spacing, series.times.back());
    while (j + 2 < series.times.size() && series.times[j + 1] < t) ++j;
    const double ta = series.times[j], tb = series.times[j + 1];
    const double f = std::clamp((t - ta) / (tb - ta), 0.0, 1.0);
    out.times.push_back(t);
    out.amplitude.push_back(series.amplitude[j] + f * (series.amplitude[j + 1] - series.amplitude[j]));
  }
  return out;
}

Histogram amplitude_distribution(const AmplitudeSeries& series, double min_spacing,
                                 std::size_t bins) {
  const AmplitudeSeries sub = subsample(series, min_spacing);
  if (bins == 0) return Histogram::freedman_diaconis(sub.amplitude);
  const auto [lo, hi] = std::minmax_element(sub.amplitude.begin(), sub.amplitude.end());
  Histogram h = Histogram::uniform(*lo, *hi > *lo ? *hi : *lo + 1e-300, bins);
  h.add(sub.amplitude);
  return h;
}

double double_peak_density(double amplitude, double x) {
  if (!(amplitude > 0.0)) throw InvalidParameter("double-peak amplitude must be positive");
  if (std::abs(x) >= amplitude) return 0.0;
  return 1.0 / (kPi * std::sqrt(amplitude * amplitude - x * x));
}

double double_peak_mass(double amplitude, double a, double b) {
  if (!(amplitude > 0.0)) throw InvalidParameter("double-peak amplitude must be positive");
  const double lo = std::clamp(a / amplitude, -1.0, 1.0);
  const double hi = std::clamp(b / amplitude, -1.0, 1.0);
  return (std::asin(hi) - std::asin(lo)) / kPi;
}

DensityGrid reconstruct(const Histogram& f_amplitude, std::span<const double> x_edges) {
  if (x_edges.size() < 2) throw InvalidParameter("reconstruction grid needs two edges");
  DensityGrid out;
  out.edges.assign(x_edges.begin(), x_edges.end());
  out.density.assign(x_edges.size() - 1, 0.0);
  const auto f = f_amplitude.density();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double weight = f[i] * f_amplitude.width(i);
    const double a = f_amplitude.center(i);
    if (weight == 0.0 || !(a > 0.0)) continue;
    for (std::size_t k = 0; k + 1 < x_edges.size(); ++k) {
      if (x_edges[k + 1] <= -a || x_edges[k] >= a) continue;
      out.density[k] += weight * double_peak_mass(a, x_edges[k], x_edges[k + 1]);
    }
  }
  for (std::size_t k = 0; k < out.density.size(); ++k) {
    out.density[k] /= x_edges[k + 1] - x_edges[k];
  }
  return out;
}

DensityGrid reconstruct_from_amplitudes(std::span<const double> amplitudes,
                                        std::span<const double> x_edges) {
  if (x_edges.size() < 2) throw InvalidParameter("reconstruction grid needs two edges");
  if (amplitudes.empty()) throw InsufficientData("no amplitude samples");
  DensityGrid out;
  out.edges.assign(x_edges.begin(), x_edges.end());
  out.density.assign(x_edges.size() - 1, 0.0);
  const double weight = 1.0 / static_cast<double>(amplitudes.size());
  for (double a : amplitudes) {
    if (!(a > 0.0)) continue;
    // Only bins overlapping [-a, a] receive mass.
    auto k = static_cast<std::size_t>(
        std::upper_bound(x_edges.begin(), x_edges.end(), -a) - x_edges.begin());
    k = k == 0 ? 0 : k - 1;
    for (; k + 1 < x_edges.size() && x_edges[k] < a; ++k) {
      out.density[k] += weight * double_peak_mass(a, x_edges[k], x_edges[k + 1]);
    }
  }
  for (std::size_t k = 0; k < out.density.size(); ++k) {
    out.density[k] /= x_edges[k + 1] - x_edges[k];
  }
  return out;
}

CoherenceEstimate coherence_time_empirical(const Trajectory& traj, double t_start,
                                           CoherenceCriterion criterion, double tau_coh_hint) {
  const auto t = traj.times();
  const auto first = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), t_start) - t.begin());
  if (t.size() < first + 3) throw InsufficientData("coherence segment too short");
  CoherenceEstimate est;
  est.segment = t.back() - t[first];
  if (tau_coh_hint > 0.0 && est.segment < 20.0 * tau_coh_hint) {
    throw InsufficientData("coherence segment shorter than 20 coherence times");
  }

  // Decimate to about one sample per natural period; the lag grid follows.
  const double dt = (t.back() - t[first]) / static_cast<double>(t.size() - 1 - first);
  const auto stride = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(traj.params().natural_period() / dt)));
  const double w0 = traj.params().omega0();
  std::vector<std::complex<double>> z;
  for (std::size_t i = first; i < t.size(); i += stride) {
    z.emplace_back(traj.x()[i], -traj.v()[i] / w0);
  }
  const std::size_t n = z.size();
  if (n < 4) throw InsufficientData("coherence segment too short after decimation");
  est.lag_step = dt * static_cast<double>(stride);

  double power = 0.0;
  for (const auto& zi : z) power += std::norm(zi);
  power /= static_cast<double>(n);
  if (!(power > 0.0)) throw InsufficientData("coherence of a zero signal");

  const double threshold = criterion == CoherenceCriterion::kOneOverE ? std::exp(-1.0) : 0.0;
  double prev = 1.0;
  const std::size_t max_lag = n / 2;
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) acc += std::conj(z[i]) * z[i + lag];
    const double r = std::abs(acc) / (static_cast<double>(n - lag) * power);
    const bool hit = criterion == CoherenceCriterion::kOneOverE ? r <= threshold : r > prev;
    if (hit) {
      est.decayed = true;
      if (criterion == CoherenceCriterion::kOneOverE) {
        // Linear interpolation between the bracketing lags.
        const double frac = (prev - threshold) / (prev - r);
        est.value = (static_cast<double>(lag - 1) + frac) * est.lag_step;
      } else {
        est.value = static_cast<double>(lag - 1) * est.lag_step;
      }
      return est;
    }
    prev = r;
  }
  est.value = est.segment;
  return est;
}

RandomWalkEstimate diagnostics_x0_E0(const ModeSet& modes, const OscillatorParams& params) {
  RandomWalkEstimate r;
  std::vector<double> freqs = modes.frequencies();
  std::sort(freqs.begin(), freqs.end());
  const auto n_omega =
      static_cast<double>(std::unique(freqs.begin(), freqs.end()) - freqs.begin());
  const double w0 = params.omega0();
  const auto e0_for = [&](double volume) {
    return std::sqrt(2.0 * n_omega) * 0.5 * std::sqrt(C::hbar * w0 / (C::epsilon0 * volume));
  };
  const double response = params.charge() == 0.0
                              ? 0.0
                              : params.charge() / (params.mass() * params.gamma() * w0 * w0 * w0);
  r.e0 = e0_for(modes.volume());
  r.x0 = response * r.e0;
  const double shell = 4.0 * kPi * w0 * w0 * params.damping_rate() / (C::c * C::c * C::c);
  r.x0_resonance_shell = response * e0_for(normalization_volume(n_omega, shell));
  r.x0_over_sigma = r.x0_resonance_shell / params.sigma_x_target();
  r.reference_ratio = std::sqrt(3.0 / kPi);
  return r;
}

}  // namespace sedsim
