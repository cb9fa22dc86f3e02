#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace rht {

using Integer = mpz_class;
using Rational = mpq_class;

// errors shared by every module
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rational make_rational(long p, long q = 1) {
    Rational r(p, q);
    r.canonicalize();
    return r;
}

// compact form: "3", "-1/2"
inline std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// report form, always "p/q"
inline std::string to_pq(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational parse_rational(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0 || r.get_den() == 0)
        throw std::invalid_argument("not a rational: " + s);
    r.canonicalize();
    return r;
}

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace rht
