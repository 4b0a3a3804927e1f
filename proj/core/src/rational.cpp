#include "metdisc/rational.hpp"

#include "metdisc/errors.hpp"

namespace metdisc {

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      const boost::multiprecision::cpp_int num(text.substr(0, slash));
      const boost::multiprecision::cpp_int den(text.substr(slash + 1));
      if (den == 0) throw InputError("rational with zero denominator: " + text);
      return Rational(num, den);
    }
    if (text.find_first_of(".eE") == std::string::npos) {
      return Rational(boost::multiprecision::cpp_int(text));
    }
    return Rational(std::stod(text));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("cannot parse rational: " + text);
  }
}

}  // namespace metdisc
