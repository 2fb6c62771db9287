#include "swapsim/clicks.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "linalg.hpp"

namespace swapsim {

namespace {

// log P(vacuum on idx) for excess covariance x.
double log_vacuum(const Matrix& x, const std::vector<Eigen::Index>& idx) {
  const Matrix half = 0.5 * x(idx, idx);
  return -0.5 * detail::log_det_identity_plus(half, "click probability");
}

// Positions of `idx` inside `alive`; every entry of idx must be alive.
std::vector<Eigen::Index> relocate(const std::vector<Eigen::Index>& idx,
                                   const std::vector<Eigen::Index>& alive) {
  std::vector<Eigen::Index> out;
  out.reserve(idx.size());
  for (auto i : idx) {
    for (std::size_t k = 0; k < alive.size(); ++k) {
      if (alive[k] == i) {
        out.push_back(static_cast<Eigen::Index>(k));
        break;
      }
    }
  }
  return out;
}

// P(every group in `groups` holds at least one photon) for excess x, with
// groups given as disjoint index lists into x. Only the rows of the
// remaining groups are carried through each conditioning step.
double all_nonempty(const Matrix& x, const std::vector<std::vector<Eigen::Index>>& groups,
                    std::size_t first) {
  if (first == groups.size()) return 1.0;
  const auto& g = groups[first];
  const double log_q = log_vacuum(x, g);
  if (first + 1 == groups.size()) return -std::expm1(log_q);

  std::vector<Eigen::Index> rest;
  std::vector<std::vector<Eigen::Index>> moved(groups.size());
  for (std::size_t k = first + 1; k < groups.size(); ++k) {
    for (auto i : groups[k]) {
      moved[k].push_back(static_cast<Eigen::Index>(rest.size()));
      rest.push_back(i);
    }
  }
  const Matrix x_rest = x(rest, rest);
  // N_g = I - V_g:  P(N_g N_rest) = P(N_rest) - Q_g P(N_rest | V_g).
  const double without = all_nonempty(x_rest, moved, first + 1);
  const Matrix cond = detail::condition_excess(x_rest, x(rest, g), x(g, g), "click probability");
  const double with_vacuum = all_nonempty(cond, moved, first + 1);
  return without - std::exp(log_q) * with_vacuum;
}

}  // namespace

ClickEngine::ClickEngine(const GaussianState& state, std::vector<ModeList> required,
                         std::vector<ModeList> detectors, double nu) {
  if (!(nu >= 0.0 && nu < 1.0)) throw std::invalid_argument("ClickEngine: nu must lie in [0, 1)");
  if (detectors.size() > 16) throw std::invalid_argument("ClickEngine: at most 16 detectors");

  // Restrict to the modes that are actually observed.
  ModeList used;
  std::unordered_set<std::string> seen;
  auto collect = [&](const std::vector<ModeList>& groups) {
    for (const auto& g : groups) {
      if (g.empty()) throw std::invalid_argument("ClickEngine: empty detector group");
      for (const auto& m : g) {
        if (!seen.insert(m).second) {
          throw std::invalid_argument("ClickEngine: mode '" + m + "' in two groups");
        }
        used.push_back(m);
      }
    }
  };
  collect(required);
  collect(detectors);
  if (used.empty()) {
    x_ = Matrix::Zero(0, 0);
  } else {
    x_ = extract(state, used).excess();
  }
  const ModeRegister reg(used);
  auto make = [&](const ModeList& g) {
    return Group{quadrature_indices(reg, g), std::pow(1.0 - nu, static_cast<double>(g.size()))};
  };
  for (const auto& g : required) required_.push_back(make(g));
  for (const auto& g : detectors) detectors_.push_back(make(g));

  const std::size_t subsets = std::size_t{1} << detectors_.size();
  conditioned_.resize(subsets);
  have_conditioned_.assign(subsets, 0);
  memo_.assign(subsets * subsets, std::numeric_limits<double>::quiet_NaN());
}

const ClickEngine::Conditioned& ClickEngine::conditioned(std::uint32_t s) {
  if (!have_conditioned_[s]) {
    std::vector<char> dropped(static_cast<std::size_t>(x_.rows()), 0);
    std::vector<Eigen::Index> idx;
    for (std::size_t d = 0; d < detectors_.size(); ++d) {
      if (!(s & (1u << d))) continue;
      for (auto i : detectors_[d].idx) {
        idx.push_back(i);
        dropped[static_cast<std::size_t>(i)] = 1;
      }
    }
    Conditioned& c = conditioned_[s];
    c.alive.clear();
    for (Eigen::Index i = 0; i < x_.rows(); ++i) {
      if (!dropped[static_cast<std::size_t>(i)]) c.alive.push_back(i);
    }
    c.x = idx.empty() ? x_
                      : detail::condition_excess(x_(c.alive, c.alive), x_(c.alive, idx),
                                                 x_(idx, idx), "click probability");
    have_conditioned_[s] = 1;
  }
  return conditioned_[s];
}

double ClickEngine::required_on(const Conditioned& c) const {
  // Each "on" element I - b V splits as (1 - b) I + b N; expand over the
  // subsets T of groups that take the N branch. Every term is >= 0.
  const std::size_t k = required_.size();
  std::vector<Eigen::Index> req;
  std::vector<std::vector<Eigen::Index>> local(k);
  for (std::size_t g = 0; g < k; ++g) {
    for (auto i : relocate(required_[g].idx, c.alive)) {
      local[g].push_back(static_cast<Eigen::Index>(req.size()));
      req.push_back(i);
    }
  }
  const Matrix x = c.x(req, req);
  double total = 0.0;
  for (std::uint32_t t = 0; t < (1u << k); ++t) {
    double weight = 1.0;
    std::vector<std::vector<Eigen::Index>> groups;
    for (std::size_t g = 0; g < k; ++g) {
      if (t & (1u << g)) {
        weight *= required_[g].off_factor;
        groups.push_back(local[g]);
      } else {
        weight *= 1.0 - required_[g].off_factor;
      }
    }
    if (weight == 0.0) continue;
    total += weight * all_nonempty(x, groups, 0);
  }
  return total;
}

// E(s, r) = Tr[tau_s H prod_{d in r} N_d], tau_s = state conditioned on
// vacuum in the detectors of s, H = all required groups click.
double ClickEngine::nested(std::uint32_t s, std::uint32_t r) {
  const std::size_t subsets = std::size_t{1} << detectors_.size();
  double& slot = memo_[s * subsets + r];
  if (!std::isnan(slot)) return slot;
  if (r == 0) {
    slot = required_on(conditioned(s));
    return slot;
  }
  const int d = std::countr_zero(r);
  const std::uint32_t rest = r & (r - 1);
  const Conditioned& c = conditioned(s);
  const double q =
      std::exp(log_vacuum(c.x, relocate(detectors_[static_cast<std::size_t>(d)].idx, c.alive)));
  slot = nested(s, rest) - q * nested(s | (1u << d), rest);
  return slot;
}

double ClickEngine::required_probability() { return nested(0, 0); }

double ClickEngine::joint_probability(std::uint32_t clicked) {
  const std::uint32_t all = (std::uint32_t{1} << detectors_.size()) - 1;
  if (clicked & ~all) throw std::invalid_argument("ClickEngine: click mask out of range");
  return probability(clicked, all & ~clicked);
}

double ClickEngine::probability(std::uint32_t on, std::uint32_t off) {
  const std::uint32_t all = (std::uint32_t{1} << detectors_.size()) - 1;
  if ((on | off) & ~all) throw std::invalid_argument("ClickEngine: detector mask out of range");
  if (on & off) throw std::invalid_argument("ClickEngine: detector both on and off");

  double prefactor = 1.0;
  std::vector<Eigen::Index> off_idx;
  for (std::size_t d = 0; d < detectors_.size(); ++d) {
    if (off & (1u << d)) {
      prefactor *= detectors_[d].off_factor;
      off_idx.insert(off_idx.end(), detectors_[d].idx.begin(), detectors_[d].idx.end());
    }
  }
  if (!off_idx.empty()) prefactor *= std::exp(log_vacuum(x_, off_idx));

  double total = 0.0;
  // Sub-masks t of `on`: detectors taking the N branch.
  for (std::uint32_t t = on;; t = (t - 1) & on) {
    double weight = 1.0;
    for (std::size_t d = 0; d < detectors_.size(); ++d) {
      const std::uint32_t bit = 1u << d;
      if (!(on & bit)) continue;
      weight *= (t & bit) ? detectors_[d].off_factor : 1.0 - detectors_[d].off_factor;
    }
    if (weight != 0.0) total += weight * nested(off, t);
    if (t == 0) break;
  }
  return prefactor * total;
}

std::vector<double> ClickEngine::joint_distribution() {
  const std::size_t subsets = std::size_t{1} << detectors_.size();
  std::vector<double> out(subsets);
  for (std::uint32_t m = 0; m < subsets; ++m) out[m] = joint_probability(m);
  return out;
}

double coincidence_probability(const GaussianState& state, const std::vector<ModeList>& groups,
                               double nu) {
  ClickEngine engine(state, groups, {}, nu);
  return engine.required_probability();
}

}  // namespace swapsim
