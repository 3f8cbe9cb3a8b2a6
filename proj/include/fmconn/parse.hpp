// Plain-text grammar for series literals: signed rational coefficients,
// `i` for the imaginary unit, variables z, t1..tn, s, `^` powers, `*` `/`
// `+` `-` and parentheses.  Examples:  "1/2*z^2 - t1*t2^3", "(2-3i)/5 * z".
#pragma once

#include "series.hpp"

#include <cctype>
#include <string>

namespace fmconn {

namespace detail {

class SeriesParser {
  public:
    SeriesParser(const std::string& text, const Truncation& tr) : s_(text), tr_(tr) {}

    Series parse() {
        Series r = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return r;
    }

  private:
    const std::string& s_;
    Truncation tr_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) {
        throw Error("parse error at position " + std::to_string(pos_) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    Series expr() {
        Series acc = eat('-') ? -term() : (eat('+'), term());
        for (;;) {
            if (eat('+'))
                acc = acc + term();
            else if (eat('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    Series term() {
        Series acc = factor();
        for (;;) {
            if (eat('*')) {
                acc = acc * factor();
            } else if (eat('/')) {
                Series d = factor();
                QC c = d.constant_term();
                Series rest = d - Series::constant(tr_, c);
                if (!rest.is_zero_strict() || c.is_zero())
                    fail("division only by nonzero constants");
                acc = acc * QC(c.inv());
            } else if (peek() == '(' || std::isalpha((unsigned char)peek()) ||
                       std::isdigit((unsigned char)peek())) {
                // juxtaposition, e.g. "2i" or "3t1"
                acc = acc * factor();
            } else {
                return acc;
            }
        }
    }

    Series factor() {
        Series base = atom();
        if (eat('^')) {
            skip_ws();
            bool neg = eat('-');
            if (!std::isdigit((unsigned char)peek())) fail("integer exponent expected");
            long e = 0;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_]))
                e = e * 10 + (s_[pos_++] - '0');
            if (neg) {
                // negative powers only of the bare z monomial
                Series zs = Series::monomial(tr_, QC(1), 1);
                if (!equal_reliable(base, zs)) fail("negative power of a non-z base");
                return Series::monomial(tr_, QC(1), (int)-e);
            }
            Series acc = Series::one(tr_);
            for (long k = 0; k < e; ++k) acc = acc * base;
            return acc;
        }
        return base;
    }

    Series atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Series r = expr();
            if (!eat(')')) fail("')' expected");
            return r;
        }
        if (c == '-') {
            ++pos_;
            return -atom();
        }
        if (std::isdigit((unsigned char)c)) return number();
        if (c == 'i') {
            ++pos_;
            return Series::constant(tr_, QC::i());
        }
        if (c == 'z') {
            ++pos_;
            return Series::monomial(tr_, QC(1), 1);
        }
        if (c == 's') {
            ++pos_;
            return Series::monomial(tr_, QC(1), 0, {}, 1);
        }
        if (c == 't') {
            ++pos_;
            if (pos_ >= s_.size() || !std::isdigit((unsigned char)s_[pos_]))
                fail("variable index expected after 't'");
            int idx = 0;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_]))
                idx = idx * 10 + (s_[pos_++] - '0');
            if (idx < 1 || idx > tr_.n_vars) fail("t-variable index out of range");
            std::vector<int> te(idx, 0);
            te[idx - 1] = 1;
            return Series::monomial(tr_, QC(1), 0, te);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    Series number() {
        std::string digits;
        while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) digits += s_[pos_++];
        QC val(rat_from_strings(digits, "1"));
        if (pos_ < s_.size() && s_[pos_] == 'i') {
            ++pos_;
            return Series::constant(tr_, val * QC::i());
        }
        return Series::constant(tr_, val);
    }
};

}  // namespace detail

inline Series parse_series(const std::string& text, const Truncation& tr) {
    return detail::SeriesParser(text, tr).parse();
}

// Exact rational-complex literal, e.g. "1/2", "-3", "1/2+2/3i", "-i".
inline QC parse_qc(const std::string& text) {
    Truncation tr(0, 0, 0, 0, false);
    Series s = parse_series(text, tr);
    return s.constant_term();
}

}  // namespace fmconn
