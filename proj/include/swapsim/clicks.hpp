#pragma once

// On/off (threshold) detection of Gaussian states with dark counts.
//
// A detector group is a set of modes read out by one on/off detector whose
// "off" element is (1 - nu)^k |0><0| on its k modes. Probabilities are built
// from nested vacuum conditioning instead of plain inclusion-exclusion, so
// coincidences of order mu^2 stay accurate down to mu ~ 1e-6 where the
// textbook 1 - P1 + P2 - P3 form would cancel to noise.

#include <cstdint>
#include <vector>

#include "swapsim/gaussian.hpp"

namespace swapsim {

class ClickEngine {
 public:
  // `required` groups must all click in every probability returned; the
  // `detectors` (at most 16) are resolved outcome by outcome.
  ClickEngine(const GaussianState& state, std::vector<ModeList> required,
              std::vector<ModeList> detectors, double nu);

  // P(all required groups click), detectors unobserved.
  double required_probability();

  // P(all required click, detector i clicks iff bit i of `clicked` is set).
  double joint_probability(std::uint32_t clicked);

  // P(all required click, detectors in `on` click, detectors in `off` stay
  // silent); the remaining detectors are not observed. Masks must be disjoint.
  double probability(std::uint32_t on, std::uint32_t off);

  // joint_probability for every mask, indexed by mask.
  std::vector<double> joint_distribution();

  std::size_t detector_count() const { return detectors_.size(); }

 private:
  struct Group {
    std::vector<Eigen::Index> idx;  // quadrature rows in x_
    double off_factor;              // (1 - nu)^k
  };

  // Excess of the modes left after vacuum conditioning on the detectors in
  // a subset; alive[k] is the row of x_ that row k came from.
  struct Conditioned {
    Matrix x;
    std::vector<Eigen::Index> alive;
  };

  const Conditioned& conditioned(std::uint32_t s);
  double required_on(const Conditioned& c) const;
  double nested(std::uint32_t s, std::uint32_t r);

  Matrix x_;
  std::vector<Group> required_;
  std::vector<Group> detectors_;
  std::vector<Conditioned> conditioned_;
  std::vector<char> have_conditioned_;
  std::vector<double> memo_;
};

// All groups in `groups` click (ordinary coincidence probability).
double coincidence_probability(const GaussianState& state, const std::vector<ModeList>& groups,
                               double nu);

}  // namespace swapsim
