// Truncated formal series in t1..tn (plus the optional square root s of t2)
// and a distinguished variable z with finitely many negative exponents.
//
// Values are immutable after construction and every operation is a pure
// function, so series can be shared freely.
//
// Besides the truncation bounds each series carries two reliability marks:
//   reliable_t  -- t-coefficients are exact up to this total degree
//                  (t-derivatives lose the top degree);
//   reliable_z  -- z-coefficients are exact up to this exponent
//                  (kZExact until a nonzero term is truncated away above
//                  z_max, or a z-shift moves the loss downward).
// Comparisons and zero tests assert only within the common reliable window.
#pragma once

#include "rational.hpp"
#include "truncation.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fmconn {

class Series {
  public:
    using Term = std::pair<Mono, QC>;

    explicit Series(const Truncation& tr)
        : trunc_(tr), reliable_t_(tr.t_deg), reliable_z_(kZExact) {}

    static Series zero(const Truncation& tr) { return Series(tr); }

    static Series constant(const Truncation& tr, const QC& c) {
        Series s(tr);
        if (!c.is_zero()) s.terms_.push_back({Mono{}, c});
        return s;
    }

    static Series one(const Truncation& tr) { return constant(tr, QC(1)); }

    // c * z^zexp * t^texp * s^sexp, reduced by s^2 -> t2 and truncated.
    static Series monomial(const Truncation& tr, const QC& c, int zexp,
                           const std::vector<int>& texp = {}, int sexp = 0) {
        Series s(tr);
        if (c.is_zero()) return s;
        Mono m;
        if (zexp < tr.z_min) throw Error("monomial below z_min");
        if ((int)texp.size() > tr.n_vars) throw Error("monomial has too many t-variables");
        for (int e : texp)
            if (e < 0) throw Error("negative t-exponent");
        if (sexp < 0) throw Error("negative s-exponent");
        if (sexp > 0 && !tr.uses_s) throw Error("s used without uses_s");
        if (sexp >= 2) {
            if (tr.n_vars < 2) throw Error("s requires a t2 variable");
        }
        m.z = (int16_t)zexp;
        for (size_t i = 0; i < texp.size(); ++i) m.t[i] = (uint8_t)texp[i];
        m.t[1] = (uint8_t)(m.t[1] + sexp / 2);
        m.s = (uint8_t)(sexp % 2);
        if (zexp > tr.z_max || m.half_deg() > tr.half_deg_bound()) {
            // a genuinely dropped term: nothing kept, mark the loss
            if (zexp > tr.z_max) s.reliable_z_ = tr.z_max;
            return s;
        }
        s.terms_.push_back({m, c});
        return s;
    }

    const Truncation& trunc() const { return trunc_; }
    const std::vector<Term>& terms() const { return terms_; }
    int reliable_t() const { return reliable_t_; }
    int reliable_z() const { return reliable_z_; }
    bool empty() const { return terms_.empty(); }

    bool in_window(const Mono& m) const {
        return m.z <= std::min(reliable_z_, trunc_.z_max) &&
               m.half_deg() <= 2 * reliable_t_ + (trunc_.uses_s ? 1 : 0);
    }

    // True if no term survives inside the reliable window.
    bool is_zero() const {
        for (const auto& [m, c] : terms_)
            if (in_window(m)) return false;
        return true;
    }
    // True if literally no terms are stored (junk outside the window counts).
    bool is_zero_strict() const { return terms_.empty(); }

    QC coeff(const Mono& m) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term& t, const Mono& k) { return t.first < k; });
        if (it != terms_.end() && it->first == m) return it->second;
        return QC(0);
    }

    QC coeff(int zexp, const std::vector<int>& texp = {}, int sexp = 0) const {
        Mono m;
        m.z = (int16_t)zexp;
        for (size_t i = 0; i < texp.size(); ++i) m.t[i] = (uint8_t)texp[i];
        m.t[1] = (uint8_t)(m.t[1] + sexp / 2);
        m.s = (uint8_t)(sexp % 2);
        return coeff(m);
    }

    // Value at (z,t) = (0,0).
    QC constant_term() const { return coeff(Mono{}); }

    int min_z_exponent() const {
        int mn = 0;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (first || m.z < mn) mn = m.z;
            first = false;
        }
        return mn;
    }

    friend Series operator-(const Series& a) {
        Series r(a.trunc_);
        r.reliable_t_ = a.reliable_t_;
        r.reliable_z_ = a.reliable_z_;
        r.terms_.reserve(a.terms_.size());
        for (const auto& [m, c] : a.terms_) r.terms_.push_back({m, -c});
        return r;
    }

    friend Series operator+(const Series& a, const Series& b) {
        require_same(a.trunc_, b.trunc_, "series add");
        Series r(a.trunc_);
        r.reliable_t_ = std::min(a.reliable_t_, b.reliable_t_);
        r.reliable_z_ = std::min(a.reliable_z_, b.reliable_z_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        while (ia != a.terms_.end() && ib != b.terms_.end()) {
            if (ia->first < ib->first)
                r.terms_.push_back(*ia++);
            else if (ib->first < ia->first)
                r.terms_.push_back(*ib++);
            else {
                QC c = ia->second + ib->second;
                if (!c.is_zero()) r.terms_.push_back({ia->first, c});
                ++ia;
                ++ib;
            }
        }
        r.terms_.insert(r.terms_.end(), ia, a.terms_.end());
        r.terms_.insert(r.terms_.end(), ib, b.terms_.end());
        return r;
    }

    friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

    friend Series operator*(const Series& a, const Series& b) {
        require_same(a.trunc_, b.trunc_, "series mul");
        const Truncation& tr = a.trunc_;
        Series r(tr);
        int pa = std::min(a.min_z_exponent(), 0);
        int pb = std::min(b.min_z_exponent(), 0);
        long rz = std::min((long)a.reliable_z_ + pb, (long)b.reliable_z_ + pa);
        r.reliable_t_ = std::min(a.reliable_t_, b.reliable_t_);
        r.reliable_z_ = (int)std::min(rz, (long)kZExact);
        std::map<Mono, QC> acc;
        bool dropped_z = false;
        const int hbound = tr.half_deg_bound();
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                int z = ma.z + mb.z;
                if (z > tr.z_max) {
                    dropped_z = true;
                    continue;
                }
                if (z < tr.z_min) throw Error("series mul: z-exponent underflow");
                Mono m;
                m.z = (int16_t)z;
                int hd = 0;
                for (int i = 0; i < tr.n_vars; ++i) {
                    m.t[i] = (uint8_t)(ma.t[i] + mb.t[i]);
                    hd += 2 * m.t[i];
                }
                int sexp = ma.s + mb.s;
                m.t[1] = (uint8_t)(m.t[1] + sexp / 2);
                m.s = (uint8_t)(sexp % 2);
                hd += sexp;  // 2*(s/2) + s%2 == s
                if (hd > hbound) continue;
                QC& slot = acc[m];
                slot += ca * cb;
            }
        }
        if (dropped_z) r.reliable_z_ = std::min(r.reliable_z_, tr.z_max);
        r.terms_.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (!c.is_zero()) r.terms_.push_back({m, std::move(c)});
        return r;
    }

    friend Series operator*(const QC& c, const Series& a) {
        Series r(a.trunc_);
        r.reliable_t_ = a.reliable_t_;
        r.reliable_z_ = a.reliable_z_;
        if (c.is_zero()) return r;
        r.terms_.reserve(a.terms_.size());
        for (const auto& [m, k] : a.terms_) r.terms_.push_back({m, c * k});
        return r;
    }
    friend Series operator*(const Series& a, const QC& c) { return c * a; }

    // Formal partial derivative with respect to t_i (0-based).  The top
    // t-degree of the result is no longer trustworthy.
    Series derive_t(int i) const {
        if (i < 0 || i >= trunc_.n_vars) throw Error("derive_t: variable out of range");
        if (trunc_.uses_s && i == 1) throw Error("derive_t(t2) not defined with uses_s");
        Series r(trunc_);
        r.reliable_t_ = reliable_t_ - 1;
        if (r.reliable_t_ < 0) r.reliable_t_ = 0;
        r.reliable_z_ = reliable_z_;
        std::map<Mono, QC> acc;
        for (const auto& [m, c] : terms_) {
            if (m.t[i] == 0) continue;
            Mono d = m;
            d.t[i] = (uint8_t)(d.t[i] - 1);
            acc[d] = c * QC((long)m.t[i]);
        }
        for (auto& [m, c] : acc)
            if (!c.is_zero()) r.terms_.push_back({m, std::move(c)});
        return r;
    }

    Series derive_z() const {
        Series r(trunc_);
        r.reliable_t_ = reliable_t_;
        r.reliable_z_ = reliable_z_ >= kZExact ? kZExact : reliable_z_ - 1;
        std::map<Mono, QC> acc;
        for (const auto& [m, c] : terms_) {
            if (m.z == 0) continue;
            Mono d = m;
            d.z = (int16_t)(d.z - 1);
            if (d.z < trunc_.z_min) throw Error("derive_z: z-exponent underflow");
            acc[d] = c * QC((long)m.z);
        }
        for (auto& [m, c] : acc)
            if (!c.is_zero()) r.terms_.push_back({m, std::move(c)});
        return r;
    }

    // Multiply by z^k (k may be negative).
    Series shift_z(int k) const {
        Series r(trunc_);
        r.reliable_t_ = reliable_t_;
        long rz = reliable_z_ >= kZExact ? (long)kZExact : (long)reliable_z_ + k;
        bool dropped = false;
        for (const auto& [m, c] : terms_) {
            int z = m.z + k;
            if (z > trunc_.z_max) {
                dropped = true;
                continue;
            }
            if (z < trunc_.z_min) throw Error("shift_z: z-exponent underflow");
            Mono d = m;
            d.z = (int16_t)z;
            r.terms_.push_back({d, c});
        }
        if (dropped) rz = std::min(rz, (long)trunc_.z_max);
        r.reliable_z_ = (int)std::min(rz, (long)kZExact);
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term& x, const Term& y) { return x.first < y.first; });
        return r;
    }

    // Substitute z -> -z.
    Series flip_z() const {
        Series r(trunc_);
        r.reliable_t_ = reliable_t_;
        r.reliable_z_ = reliable_z_;
        r.terms_.reserve(terms_.size());
        for (const auto& [m, c] : terms_) r.terms_.push_back({m, (m.z & 1) ? -c : c});
        return r;
    }

    // The z^k-slice as a series concentrated in z-degree 0.
    Series coeff_z(int k) const {
        Series r(trunc_);
        r.reliable_t_ = reliable_t_;
        for (const auto& [m, c] : terms_) {
            if (m.z != k) continue;
            Mono d = m;
            d.z = 0;
            r.terms_.push_back({d, c});
        }
        return r;
    }

    // Terms of total t-degree d (s counts as half; only whole degrees here).
    Series t_part(int d) const {
        Series r(trunc_);
        r.reliable_t_ = reliable_t_;
        r.reliable_z_ = reliable_z_;
        for (const auto& [m, c] : terms_)
            if (m.s == 0 && m.t_total() == d) r.terms_.push_back({m, c});
        return r;
    }

    Series restrict_t0() const { return t_part(0); }

    // Split into (z-exponents < 0, z-exponents >= 0).
    std::pair<Series, Series> split_z_sign() const {
        Series neg(trunc_), pos(trunc_);
        neg.reliable_t_ = pos.reliable_t_ = reliable_t_;
        neg.reliable_z_ = pos.reliable_z_ = reliable_z_;
        for (const auto& [m, c] : terms_)
            (m.z < 0 ? neg : pos).terms_.push_back({m, c});
        return {neg, pos};
    }

    // Exact division by c * z^zexp * t^texp * s^sexp.  Every term must be
    // divisible; s-divisions act on half-degrees of t2.
    Series div_monomial(const QC& c, int zexp, const std::vector<int>& texp = {},
                        int sexp = 0) const {
        if (c.is_zero()) throw Error("division by zero monomial");
        QC cinv = c.inv();
        Series r(trunc_);
        r.reliable_t_ = reliable_t_;  // t-exponents only decrease
        long rz = reliable_z_ >= kZExact ? (long)kZExact : (long)reliable_z_ - zexp;
        r.reliable_z_ = (int)std::min(rz, (long)kZExact);
        for (const auto& [m, k] : terms_) {
            Mono d = m;
            int z = m.z - zexp;
            if (z < trunc_.z_min) throw Error("div_monomial: z-exponent underflow");
            if (z > trunc_.z_max) throw Error("div_monomial: z-exponent overflow");
            d.z = (int16_t)z;
            for (size_t i = 0; i < texp.size(); ++i) {
                if (d.t[i] < texp[i]) throw Error("div_monomial: not divisible (t)");
                d.t[i] = (uint8_t)(d.t[i] - texp[i]);
            }
            if (sexp != 0) {
                if (!trunc_.uses_s) throw Error("div_monomial: s without uses_s");
                int half = 2 * d.t[1] + d.s - sexp;
                if (half < 0) throw Error("div_monomial: not divisible (s)");
                d.t[1] = (uint8_t)(half / 2);
                d.s = (uint8_t)(half % 2);
            }
            r.terms_.push_back({d, k * cinv});
        }
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term& x, const Term& y) { return x.first < y.first; });
        return r;
    }

    // exp(S) = sum S^k/k!; requires zero constant term and no negative
    // z-exponents, so the sum is finite within the truncation.
    Series exp() const {
        if (!constant_term().is_zero()) throw Error("exp: nonzero constant term");
        if (min_z_exponent() < 0) throw Error("exp: negative z-exponents");
        Series acc = one(trunc_);
        Series pw = one(trunc_);
        Rat fact(1);
        int bound = trunc_.z_max + trunc_.t_deg + 2;
        for (int k = 1; k <= bound; ++k) {
            pw = pw * (*this);
            if (pw.is_zero_strict()) break;
            fact *= k;
            acc = acc + pw * QC(Rat(1) / fact);
        }
        return acc;
    }

    // Re-truncate into a different window.  Widening is lossless; narrowing
    // drops terms (and records the z-loss when a nonzero term falls off the
    // top).  uses_s may only be turned on, never silently off.
    Series cast(const Truncation& to) const {
        if (to.n_vars < trunc_.n_vars) throw Error("cast: cannot drop t-variables");
        if (trunc_.uses_s && !to.uses_s) throw Error("cast: cannot drop s");
        Series r(to);
        r.reliable_t_ = std::min(reliable_t_, to.t_deg);
        long rz = reliable_z_;
        for (const auto& [m, c] : terms_) {
            if (m.z < to.z_min) throw Error("cast: z-exponent below new z_min");
            if (m.z > to.z_max) {
                rz = std::min(rz, (long)to.z_max);
                continue;
            }
            if (m.half_deg() > to.half_deg_bound()) continue;
            r.terms_.push_back({m, c});
        }
        r.reliable_z_ = (int)std::min(rz, (long)kZExact);
        return r;
    }

    // Substitute t_i -> subs[i] (each with zero constant term, equal
    // truncations); z and s are untouched (s must be absent).
    Series compose_t(const std::vector<Series>& subs) const {
        if ((int)subs.size() != trunc_.n_vars) throw Error("compose_t: wrong substitution count");
        for (const auto& s : subs) {
            require_same(s.trunc(), trunc_, "compose_t");
            if (!s.constant_term().is_zero())
                throw Error("compose_t: substitution with nonzero constant term");
        }
        if (trunc_.uses_s) throw Error("compose_t with uses_s");
        int rt = reliable_t_;
        int rz = reliable_z_;
        for (const auto& s : subs) {
            rt = std::min(rt, s.reliable_t());
            rz = std::min(rz, s.reliable_z());
        }
        // powers of each substitution, computed on demand
        std::vector<std::vector<Series>> pows(subs.size());
        for (size_t i = 0; i < subs.size(); ++i) pows[i].push_back(one(trunc_));
        auto power = [&](size_t i, int e) -> const Series& {
            while ((int)pows[i].size() <= e) pows[i].push_back(pows[i].back() * subs[i]);
            return pows[i][e];
        };
        Series acc(trunc_);
        for (const auto& [m, c] : terms_) {
            Series term = monomial(trunc_, c, m.z);
            for (int i = 0; i < trunc_.n_vars; ++i)
                if (m.t[i] > 0) term = term * power(i, m.t[i]);
            acc = acc + term;
        }
        Series r = acc;
        r.reliable_t_ = std::min(acc.reliable_t_, rt);
        r.reliable_z_ = std::min(acc.reliable_z_, rz);
        return r;
    }

    // Rewrite every t2^k as s^{2k} under a uses_s truncation (the canonical
    // form folds s^2 back to t2, so the stored value is unchanged -- this is
    // a cast that permits s-monomials like tau = s^{m-2} afterwards).
    Series substitute_sqrt(const Truncation& to) const {
        if (!to.uses_s) throw Error("substitute_sqrt: target truncation lacks uses_s");
        return cast(to);
    }

    // Smallest stored monomial inside the reliable window, for diagnostics.
    std::optional<Term> first_term() const {
        for (const auto& t : terms_)
            if (in_window(t.first)) return t;
        return std::nullopt;
    }

    std::string str() const;

  private:
    Truncation trunc_;
    std::vector<Term> terms_;  // sorted by Mono, no zero coefficients
    int reliable_t_;
    int reliable_z_;
};

inline std::string mono_str(const Mono& m) {
    std::ostringstream os;
    bool any = false;
    auto piece = [&](const std::string& v, int e) {
        if (e == 0) return;
        if (any) os << "*";
        os << v;
        if (e != 1) os << "^" << e;
        any = true;
    };
    piece("z", m.z);
    for (int i = 0; i < kMaxVars; ++i) piece("t" + std::to_string(i + 1), m.t[i]);
    piece("s", m.s);
    if (!any) os << "1";
    return os.str();
}

inline std::string Series::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        if (m == Mono{}) {
            os << "(" << to_string(c) << ")";
        } else if (c == QC(1)) {
            os << mono_str(m);
        } else {
            os << "(" << to_string(c) << ")*" << mono_str(m);
        }
    }
    return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Series& s) { return os << s.str(); }

// Equality inside the common reliable window.
inline bool equal_reliable(const Series& a, const Series& b) { return (a - b).is_zero(); }

}  // namespace fmconn
