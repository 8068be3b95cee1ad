// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace stlab {

// Exact rational scalar. mpq_class arithmetic keeps results canonical, but
// values assembled from raw numerator/denominator must be canonicalized here.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "a" or "a/b" with optional sign, arbitrary precision.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("rational: empty string");
    Rational q;
    if (q.set_str(text, 10) != 0)
        throw std::invalid_argument("rational: cannot parse '" + text + "'");
    if (q.get_den() == 0) throw std::invalid_argument("rational: zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) {
    return q.get_str();
}

}  // namespace stlab
