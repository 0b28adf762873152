#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "sedsim/dynamics.hpp"
#include "sedsim/params.hpp"
#include "sedsim/vacuum_field.hpp"

namespace sedsim {

/// Fixed-edge histogram with additive counts. Samples outside [edges.front(),
/// edges.back()) go to underflow/overflow (the last edge is inclusive).
class Histogram {
 public:
  explicit Histogram(std::vector<double> edges);

  static Histogram uniform(double lo, double hi, std::size_t bins);
  /// Bins chosen by the Freedman-Diaconis rule over the sample range, then filled.
  static Histogram freedman_diaconis(std::span<const double> samples);

  void add(double value);
  void add(std::span<const double> values);
  /// Adds counts of a histogram with identical edges. Throws InvalidParameter otherwise.
  void merge(const Histogram& other);

  std::span<const double> edges() const noexcept { return edges_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::size_t bins() const noexcept { return counts_.size(); }
  double width(std::size_t i) const { return edges_[i + 1] - edges_[i]; }
  double center(std::size_t i) const { return 0.5 * (edges_[i] + edges_[i + 1]); }
  std::uint64_t in_range() const noexcept { return in_range_; }
  std::uint64_t underflow() const noexcept { return underflow_; }
  std::uint64_t overflow() const noexcept { return overflow_; }

  /// counts / (in_range * width); integrates to 1 over the edges.
  /// Throws InsufficientData when no sample fell in range.
  std::vector<double> density() const;

 private:
  std::vector<double> edges_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t in_range_ = 0;
  std::uint64_t underflow_ = 0;
  std::uint64_t overflow_ = 0;
};

/// Freedman-Diaconis bin count 2 IQR n^(-1/3), clamped to [1, max_bins].
std::size_t freedman_diaconis_bins(std::span<const double> samples, std::size_t max_bins = 4096);

/// Piecewise-constant density on explicit edges.
struct DensityGrid {
  std::vector<double> edges;
  std::vector<double> density;

  double integral() const;
};

DensityGrid to_density(const Histogram& h);

/// 1/2 sum |p - q| dx on shared edges.
double total_variation(const DensityGrid& p, const DensityGrid& q);

struct PhaseSamples {
  std::vector<double> x;  // m
  std::vector<double> p;  // kg m / s

  std::size_t size() const noexcept { return x.size(); }
};

/// Every stride-th recorded point at or after t_start, with p = m v.
/// Throws InvalidParameter when t_start is before 5 transient times or past the end.
PhaseSamples sequential_sample(const Trajectory& traj, double t_start, unsigned stride = 1);

/// Final (x, p) of every member. Throws InvalidParameter when final times differ.
PhaseSamples ensemble_sample(std::span<const Trajectory> members);
PhaseSamples ensemble_sample(std::span<const State> finals, const OscillatorParams& params);

struct DistributionSummary {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double sigma_x = 0.0;  // unbiased
  double sigma_p = 0.0;
  double uncertainty_product = 0.0;
  double mean_energy = 0.0;
  std::map<int, double> moments;  // raw <x^n> for n = 1..max_order
  std::uint64_t sample_count = 0;

  /// <x^4> / <x^2>^2 from the raw moments.
  double kurtosis() const;
};

/// Throws InsufficientData for fewer than 2 samples.
DistributionSummary summarize(const PhaseSamples& samples, const OscillatorParams& params,
                              int max_order = 4);

/// Ground-state position density sqrt(m omega0 / pi hbar) exp(-m omega0 x^2 / hbar).
double gaussian_target(double x, const OscillatorParams& params);
double gaussian_target_cdf(double x, const OscillatorParams& params);

/// Exact two-sided KS distance of the sample CDF against cdf.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

/// 1% two-sided Kolmogorov-Smirnov critical value 1.63 / sqrt(n).
double ks_threshold(double n_effective);

struct FitReport {
  double ks_distance = 0.0;  // evaluated at the bin edges
  double n_effective = 0.0;
  double ks_threshold = 0.0;
  bool ks_pass = false;
  double chi2 = 0.0;         // over bins with expected count >= 5
  unsigned chi2_dof = 0;
  double chi2_p_value = 0.0; // with counts rescaled to n_effective
};

/// Compares a histogram to the ground-state Gaussian. n_effective <= 0 means
/// use the in-range count (independent samples).
FitReport goodness_of_fit(const Histogram& hist, const OscillatorParams& params,
                          double n_effective = 0.0);

struct AmplitudeSeries {
  std::vector<double> times;
  std::vector<double> amplitude;
  bool representative = false;  // spacing >= the requested decorrelation time
};

/// Quadrature envelope sqrt(x^2 + (v / omega0)^2) at the recorded times.
AmplitudeSeries envelope(const Trajectory& traj);

/// Envelope interpolated at t_front + k * spacing, k = 0..floor(span / spacing).
/// Throws InsufficientData when the series is shorter than 10 spacings.
AmplitudeSeries subsample(const AmplitudeSeries& series, double spacing);

/// Histogram f(A) of the subsampled envelope; bins == 0 selects Freedman-Diaconis.
Histogram amplitude_distribution(const AmplitudeSeries& series, double min_spacing,
                                 std::size_t bins = 0);

/// Arcsine law 1 / (pi sqrt(A^2 - x^2)) of a fixed-amplitude oscillator.
/// Throws InvalidParameter for A <= 0.
double double_peak_density(double amplitude, double x);

/// Exact probability of [a, b] under the arcsine law of amplitude A.
double double_peak_mass(double amplitude, double a, double b);

/// P(x) = sum over amplitude bins of f(A) dA times the arcsine law at the bin
/// centre, each integrated analytically over the x bins.
DensityGrid reconstruct(const Histogram& f_amplitude, std::span<const double> x_edges);

/// Same sum taken over individual amplitude samples, each weighted 1/n. No
/// amplitude binning, so narrow turning-point peaks land in the right x bins.
DensityGrid reconstruct_from_amplitudes(std::span<const double> amplitudes,
                                        std::span<const double> x_edges);

enum class CoherenceCriterion { kOneOverE, kFirstZero };

struct CoherenceEstimate {
  double value = 0.0;     // s; equals segment when no decay was found
  bool decayed = false;
  double segment = 0.0;   // s
  double lag_step = 0.0;  // s
};

/// Width of the normalized autocorrelation envelope |<z*(t) z(t + tau)>| / <|z|^2>
/// with z = x - i v / omega0, using recorded points at or after t_start.
/// When tau_coh_hint > 0 the segment must cover 20 of those times.
CoherenceEstimate coherence_time_empirical(const Trajectory& traj, double t_start,
                                           CoherenceCriterion criterion =
                                               CoherenceCriterion::kOneOverE,
                                           double tau_coh_hint = 0.0);

struct RandomWalkEstimate {
  double e0 = 0.0;  // V/m, with the mode set's own volume
  double x0 = 0.0;  // m, with the mode set's own volume
  /// x0 with the shell thickness set to the resonance width gamma omega0^2
  /// instead of the sampled range; this is the normalization under which the
  /// estimate is compared with the ground-state spread.
  double x0_resonance_shell = 0.0;
  double x0_over_sigma = 0.0;    // x0_resonance_shell / sqrt(hbar / 2 m omega0)
  double reference_ratio = 0.0;  // sqrt(3 / pi)
};

/// Random-walk magnitudes sqrt(2 N_omega) (1/2) sqrt(hbar omega0 / eps0 V) for
/// the field and (e / m gamma omega0^3) times that for the position.
RandomWalkEstimate diagnostics_x0_E0(const ModeSet& modes, const OscillatorParams& params);

}  // namespace sedsim
