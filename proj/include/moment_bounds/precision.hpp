#ifndef MOMENT_BOUNDS_PRECISION_HPP
#define MOMENT_BOUNDS_PRECISION_HPP

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <locale>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>

#include "errors.hpp"

namespace moment_bounds {

using PrecScalar = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                                 boost::multiprecision::et_off>;

template <class Real>
struct precision_traits {
  static unsigned digits() { return std::numeric_limits<Real>::digits10; }
};

template <>
struct precision_traits<PrecScalar> {
  static unsigned digits() { return PrecScalar::default_precision(); }
};

// Decimal digits carried by newly created values of Real.
template <class Real>
unsigned working_digits() {
  return precision_traits<Real>::digits();
}

// 10^(-k) at the working precision.
template <class Real>
Real ten_to_minus(long k) {
  using std::pow;
  return pow(Real(10), Real(-k));
}

// Sets the MPFR default precision for the lifetime of the object.
// Boost keeps the default in a single global, so scopes must not overlap
// across threads.
class precision_scope {
public:
  explicit precision_scope(unsigned digits) : saved_(PrecScalar::default_precision()) {
    if (digits < 16) throw error("InvalidPrecision", "digits must be at least 16", error_class::usage);
    PrecScalar::default_precision(digits);
  }
  ~precision_scope() { PrecScalar::default_precision(saved_); }
  precision_scope(const precision_scope&) = delete;
  precision_scope& operator=(const precision_scope&) = delete;

private:
  unsigned saved_;
};

inline unsigned default_digits(unsigned largest_order) {
  return std::max(100u, 4u * largest_order + 20u);
}

// Flag beats environment beats the order-based default.
inline unsigned resolve_digits(unsigned flag_digits, unsigned largest_order) {
  if (flag_digits) return flag_digits;
  if (const char* env = std::getenv("MOMENT_BOUNDS_DIGITS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v >= 16) return static_cast<unsigned>(v);
  }
  return default_digits(largest_order);
}

// Exact decimal parse at the working precision (no double intermediary).
template <class Real>
Real parse_decimal(const std::string& text) {
  if constexpr (std::is_same_v<Real, PrecScalar>) {
    try {
      return PrecScalar(text);
    } catch (const std::exception&) {
      throw usage_error("not a decimal number: '" + text + "'");
    }
  } else {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(text, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != text.size() || text.empty()) throw usage_error("not a decimal number: '" + text + "'");
    return Real(v);
  }
}

// Scientific or fixed text with `sig` significant digits, '.' decimal point
// and lowercase exponent.
template <class Real>
std::string format_number(const Real& x, unsigned sig) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(static_cast<int>(std::max(1u, sig)));
  os << x;
  return os.str();
}

template <class Real>
double to_double(const Real& x) {
  return static_cast<double>(x);
}

}  // namespace moment_bounds

#endif
