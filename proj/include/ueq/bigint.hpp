#ifndef UEQ_BIGINT_HPP
#define UEQ_BIGINT_HPP

#include <boost/multiprecision/cpp_int.hpp>

namespace ueq {

// Derivation counts grow like p^{2n}, so machine words overflow almost
// immediately; everything countable is kept exact.
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

}  // namespace ueq

#endif  // UEQ_BIGINT_HPP
