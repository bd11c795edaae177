#ifndef MOMENT_BOUNDS_ERRORS_HPP
#define MOMENT_BOUNDS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace moment_bounds {

// Exit-code class of a failure: usage errors map to 1, domain errors to 2,
// IO failures to 3.
enum class error_class { usage = 1, domain = 2, io = 3 };

class error : public std::runtime_error {
public:
  error(std::string kind, const std::string& what, error_class cls = error_class::domain)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)), cls_(cls) {}
  const std::string& kind() const noexcept { return kind_; }
  error_class classification() const noexcept { return cls_; }

private:
  std::string kind_;
  error_class cls_;
};

class not_positive_definite : public error {
public:
  explicit not_positive_definite(std::size_t index)
      : error("NotPositiveDefinite", "non-positive pivot at index " + std::to_string(index)),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

class pole_at_energy : public error {
public:
  explicit pole_at_energy(int q)
      : error("PoleAtEnergy", "denominator vanishes at recursion index " + std::to_string(q)),
        q_(q) {}
  int q() const noexcept { return q_; }

private:
  int q_;
};

inline error invalid_matrix(const std::string& m) { return error("InvalidMatrix", m); }
inline error invalid_tolerance(const std::string& m) { return error("InvalidTolerance", m, error_class::usage); }
inline error index_out_of_range(const std::string& m) { return error("IndexOutOfRange", m, error_class::usage); }
inline error invalid_window(const std::string& m) { return error("InvalidWindow", m, error_class::usage); }
inline error not_a_minimum_bracket(const std::string& m) { return error("NotAMinimumBracket", m); }
inline error non_integrable_singularity(const std::string& m) { return error("NonIntegrableSingularity", m); }
inline error out_of_domain(const std::string& m) { return error("OutOfDomain", m); }
inline error order_too_small(const std::string& m) { return error("OrderTooSmall", m, error_class::usage); }
inline error non_integrable_weight(const std::string& m) { return error("NonIntegrableWeight", m); }
inline error no_feasible_point(const std::string& m) { return error("NoFeasiblePoint", m); }
inline error insufficient_precision(const std::string& m) {
  return error("WeightMomentsInsufficientPrecision", m + "; raise the working digits");
}
inline error center_not_below_bound(const std::string& m) { return error("CenterNotBelowBound", m); }
inline error degenerate_nullspace(const std::string& m) { return error("DegenerateNullspace", m); }
inline error io_failure(const std::string& m) { return error("IOFailure", m, error_class::io); }
inline error usage_error(const std::string& m) { return error("Usage", m, error_class::usage); }

}  // namespace moment_bounds

#endif
