#pragma once

#include <stdexcept>
#include <string>

namespace uwoc {

/// Argument outside the mathematical domain of a function (gamma pole,
/// negative distance, non-positive Mellin-Barnes argument, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The two pole families of a Mellin-Barnes integrand cannot be separated,
/// or a residue expansion meets coincident poles it cannot resolve.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Contour quadrature failed to converge within its refinement cap.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double last, double previous)
      : std::runtime_error(what), last_(last), previous_(previous) {}

  double last() const noexcept { return last_; }
  double previous() const noexcept { return previous_; }

 private:
  double last_;
  double previous_;
};

/// Not enough usable data (e.g. too few points for a slope fit).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace uwoc
