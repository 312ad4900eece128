#pragma once

#include <stdexcept>
#include <string>

namespace rnds {

/// Input outside the domain of an operation (nonpositive radius, point
/// outside a chart, parameters violating the standing assumptions).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A chart that degenerates on horizons was asked to represent a horizon
/// point. The message names the chart that covers the point regularly.
class SingularChartError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Root finding, inversion or integration failed to converge, or an
/// internal consistency check between two routes disagreed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rnds
