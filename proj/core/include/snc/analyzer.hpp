#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "snc/bounds.hpp"
#include "snc/network.hpp"
#include "snc/optimize.hpp"

namespace snc {

enum class Metric { Delay, Backlog };

struct Method {
  enum class Kind { Pmoo, Martingale };
  Kind kind = Kind::Pmoo;
  std::size_t site = 0;  // martingale server h, 1-based

  static Method pmoo() { return {Kind::Pmoo, 0}; }
  static Method martingale(std::size_t h) { return {Kind::Martingale, h}; }
  std::string label() const;
};

/// One optimized bound. For martingale delay the two terms are optimized
/// separately; theta2 is NaN otherwise.
struct BoundValue {
  double raw = 0.0;
  double theta = 0.0;
  double theta2 = 0.0;
  double term1 = 0.0;
  double term2 = 0.0;
};

struct BoundPoint {
  std::size_t value = 0;
  double probability = 0.0;  // min(1, running minimum of raw)
  double raw = 0.0;
  double theta = 0.0;
  double theta2 = 0.0;
  std::size_t site = 0;  // martingale site that produced the entry
};

struct BoundCurve {
  Metric metric = Metric::Delay;
  std::string method;
  std::size_t site = 0;
  std::vector<BoundPoint> entries;
};

/// Pointwise minimum of curves over the same value range, labelled
/// martingale_best; entries keep the site that produced them.
BoundCurve envelope(const std::vector<BoundCurve>& curves);

/// Optimized bounds for one network. Characterizations are cached per theta
/// and shared between calls; safe for concurrent use.
class Analyzer {
 public:
  explicit Analyzer(TandemNetwork net, OptimizeOptions opts = {});

  const TandemNetwork& network() const { return net_; }
  const std::vector<ThetaStar>& theta_stars() const { return stars_; }

  /// Servers passing check_martingale_site.
  std::vector<std::size_t> admissible_sites() const;

  std::shared_ptr<const NetworkChar> characterization(double theta) const;

  BoundValue bound(const Method& method, Metric metric, std::size_t value) const;

  /// Entries for value = lo..hi, evaluated in parallel.
  BoundCurve curve(const Method& method, Metric metric, std::size_t lo, std::size_t hi) const;

  /// Pointwise minimum over every admissible site.
  BoundCurve martingale_best(Metric metric, std::size_t lo, std::size_t hi) const;

  /// Least delay T with bound <= epsilon.
  std::size_t quantile(const Method& method, double epsilon) const;

 private:
  BoundValue pmoo(Metric metric, std::size_t value) const;
  BoundValue martingale(std::size_t h, Metric metric, std::size_t value) const;

  TandemNetwork net_;
  OptimizeOptions opts_;
  std::vector<ThetaStar> stars_;
  mutable std::shared_mutex cache_mutex_;
  mutable std::unordered_map<std::uint64_t, std::shared_ptr<const NetworkChar>> cache_;
};

}  // namespace snc
