#include "sapsm/strings.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sapsm {

IndexVector::IndexVector(std::vector<std::size_t> indices) : idx_(std::move(indices)) {
  if (idx_.empty()) throw std::invalid_argument("index vector must have length >= 1");
}

void MStarParams::validate() const {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(delta > 0.0 && delta < 1.0 / static_cast<double>(m))) {
    throw std::invalid_argument("delta must satisfy 0 < delta < 1/m (m = " + std::to_string(m) +
                                ", delta = " + format_double(delta) + ")");
  }
  if (q_bar < m) {
    throw std::invalid_argument("q_bar must satisfy q_bar >= m (m = " + std::to_string(m) +
                                ", q_bar = " + std::to_string(q_bar) + ")");
  }
}

Amalgamator::Amalgamator(std::vector<IndexVector> strings, std::vector<double> weights,
                         std::size_t m)
    : strings_(std::move(strings)), weights_(std::move(weights)), m_(m) {
  if (strings_.empty()) throw std::invalid_argument("amalgamator: no strings");
  if (strings_.size() != weights_.size()) {
    throw std::invalid_argument("amalgamator: " + std::to_string(strings_.size()) + " strings but " +
                                std::to_string(weights_.size()) + " weights");
  }
  for (const auto& t : strings_) {
    for (std::size_t i : t) {
      if (i >= m_) {
        throw std::invalid_argument("amalgamator: index " + std::to_string(i) +
                                    " out of range for m = " + std::to_string(m_));
      }
    }
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("amalgamator: weights must be finite and > 0");
  }
  const double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(sum - 1.0) > kWeightRenormalizeTol) {
    throw std::invalid_argument("amalgamator: weights sum to " + std::to_string(sum) +
                                ", expected 1");
  }
  if (std::abs(sum - 1.0) > 0.0) {
    for (double& w : weights_) w /= sum;
  }
  if (!is_fit(strings_, m_)) throw std::invalid_argument("amalgamator: strings are not fit");
}

Amalgamator Amalgamator::cyclic(std::size_t m) {
  std::vector<std::size_t> all(m);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return Amalgamator({IndexVector(std::move(all))}, {1.0}, m);
}

Amalgamator Amalgamator::simultaneous(std::size_t m) {
  std::vector<IndexVector> strings;
  strings.reserve(m);
  for (std::size_t i = 0; i < m; ++i) strings.emplace_back(std::vector<std::size_t>{i});
  return Amalgamator(std::move(strings), std::vector<double>(m, 1.0 / static_cast<double>(m)), m);
}

Vector apply_string(const Problem& problem, const IndexVector& t, const Vector& x) {
  Vector y = x;
  for (std::size_t i : t) {
    if (i >= problem.size()) {
      throw std::out_of_range("apply_string: index " + std::to_string(i) +
                              " out of range for m = " + std::to_string(problem.size()));
    }
    y = project(problem.set(i), y);
  }
  return y;
}

bool is_fit(const std::vector<IndexVector>& strings, std::size_t m) {
  std::vector<bool> seen(m, false);
  for (const auto& t : strings) {
    for (std::size_t i : t) {
      if (i < m) seen[i] = true;
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

bool is_m_fit(const std::vector<IndexVector>& strings, const Problem& problem, double radius) {
  if (!is_fit(strings, problem.size())) return false;
  for (const auto& t : strings) {
    bool anchored = false;
    for (std::size_t i : t) {
      if (i >= problem.size()) return false;
      const auto r = enclosing_radius(problem.set(i));
      if (r && *r <= radius) {
        anchored = true;
        break;
      }
    }
    if (!anchored) return false;
  }
  return true;
}

bool validate_amalgamator(const Amalgamator& a, const MStarParams& params) {
  if (a.num_sets() != params.m) return false;
  if (!is_fit(a.strings(), params.m)) return false;
  const auto& w = a.weights();
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  if (std::abs(sum - 1.0) > kWeightSumTol) return false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (w[j] < params.delta) return false;
    if (a.strings()[j].length() > params.q_bar) return false;
  }
  return true;
}

Vector apply_amalgamator(const Problem& problem, const Amalgamator& a, const Vector& x) {
  if (a.num_sets() != problem.size()) {
    throw std::invalid_argument("apply_amalgamator: amalgamator built for m = " +
                                std::to_string(a.num_sets()) + ", problem has m = " +
                                std::to_string(problem.size()));
  }
  if (a.size() == 1 && a.weights().front() == 1.0) return apply_string(problem, a.strings().front(), x);
  Vector acc = Vector::Zero(x.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    acc += a.weights()[j] * apply_string(problem, a.strings()[j], x);
  }
  return acc;
}

}  // namespace sapsm
