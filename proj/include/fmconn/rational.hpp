// Exact rational-complex scalar type. All coefficient arithmetic in the
// library goes through this type; there is no floating point anywhere.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fmconn {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw Error("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat rat_from_strings(const std::string& num, const std::string& den) {
    Rat q(mpz_class(num), mpz_class(den));
    if (q.get_den() == 0) throw Error("rational with zero denominator");
    q.canonicalize();
    return q;
}

// Complex number with exact rational real and imaginary parts.  Denominators
// are kept positive and in lowest terms by mpq_class canonicalization.
struct QC {
    Rat re, im;

    QC() : re(0), im(0) {}
    QC(long n) : re(n), im(0) {}
    QC(const Rat& r) : re(r), im(0) {}
    QC(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

    static QC i() { return QC(Rat(0), Rat(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    QC operator-() const { return QC(-re, -im); }
    QC conj() const { return QC(re, -im); }

    QC& operator+=(const QC& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    QC& operator-=(const QC& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    QC& operator*=(const QC& o) {
        Rat r = re * o.re - im * o.im;
        Rat i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }

    friend QC operator+(QC a, const QC& b) { return a += b; }
    friend QC operator-(QC a, const QC& b) { return a -= b; }
    friend QC operator*(QC a, const QC& b) { return a *= b; }

    QC inv() const {
        Rat n = re * re + im * im;
        if (n == 0) throw Error("division by zero");
        return QC(re / n, -im / n);
    }
    friend QC operator/(const QC& a, const QC& b) { return a * b.inv(); }

    friend bool operator==(const QC& a, const QC& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const QC& a, const QC& b) { return !(a == b); }
};

inline std::string to_string(const Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

// "3/2", "3/2+1/2*i", "-i", "0" -- the same textual form the parser accepts.
inline std::string to_string(const QC& c) {
    if (c.is_zero()) return "0";
    std::ostringstream os;
    if (c.re != 0) os << c.re;
    if (c.im != 0) {
        if (c.re != 0 && c.im > 0) os << "+";
        if (c.im == 1)
            os << "i";
        else if (c.im == -1)
            os << "-i";
        else
            os << c.im << "*i";
    }
    return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const QC& c) { return os << to_string(c); }

inline QC qc(long num, long den = 1) { return QC(rat(num, den)); }

}  // namespace fmconn
