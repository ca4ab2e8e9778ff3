#pragma once

#include <stdexcept>

namespace jscc {

// A precondition of a model operation does not hold (b <= 0, HLS with
// b < 1/m_min, gain outside the DMT support, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested finite-SNR transmission cannot be realized, e.g. the BS
// power ordering collapses at low SNR or a search space has no feasible
// candidate.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jscc
