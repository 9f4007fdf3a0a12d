#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsec {

using Integer = boost::multiprecision::cpp_int;
using IntVector = std::vector<Integer>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// word over the wrong alphabet, unknown generator names
class AlphabetError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                     : what),
          line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

class LatticeError : public Error {
public:
    using Error::Error;
};

inline Integer abs(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd(Integer a, Integer b) {
    a = abs(a);
    b = abs(b);
    while (b != 0) {
        Integer r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// floor division and nonnegative remainder for b > 0
inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

inline Integer floor_mod(const Integer& a, const Integer& b) { return a - floor_div(a, b) * b; }

inline Integer ceil_div(const Integer& a, const Integer& b) { return -floor_div(-a, b); }

inline long long to_ll(const Integer& a) {
    if (a > Integer(INT64_MAX) || a < Integer(INT64_MIN)) throw Error("integer out of machine range");
    return static_cast<long long>(a);
}

inline std::string to_string(const Integer& a) { return a.str(); }

inline std::string to_string(const IntVector& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].str();
    }
    return s + "]";
}

inline IntVector int_vector(std::initializer_list<long long> xs) {
    IntVector v;
    for (long long x : xs) v.emplace_back(x);
    return v;
}

}  // namespace hsec
