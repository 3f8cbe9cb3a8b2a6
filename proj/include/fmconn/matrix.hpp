// Square matrices over QC (constant) and over Series.  MatrixSeries is the
// carrier of connection forms, gauge matrices and pairings.
#pragma once

#include "series.hpp"

#include <functional>
#include <vector>

namespace fmconn {

// Dense r x r matrix of exact rational-complex numbers.
struct QCMat {
    int r = 0;
    std::vector<QC> a;  // row-major

    QCMat() = default;
    explicit QCMat(int n) : r(n), a(n * n) {}

    static QCMat identity(int n) {
        QCMat m(n);
        for (int i = 0; i < n; ++i) m(i, i) = QC(1);
        return m;
    }

    QC& operator()(int i, int j) { return a[i * r + j]; }
    const QC& operator()(int i, int j) const { return a[i * r + j]; }

    bool is_zero() const {
        for (const auto& c : a)
            if (!c.is_zero()) return false;
        return true;
    }

    friend QCMat operator*(const QCMat& x, const QCMat& y) {
        QCMat z(x.r);
        for (int i = 0; i < x.r; ++i)
            for (int k = 0; k < x.r; ++k) {
                if (x(i, k).is_zero()) continue;
                for (int j = 0; j < x.r; ++j) z(i, j) += x(i, k) * y(k, j);
            }
        return z;
    }
    friend QCMat operator+(QCMat x, const QCMat& y) {
        for (int i = 0; i < x.r * x.r; ++i) x.a[i] += y.a[i];
        return x;
    }
    friend QCMat operator-(QCMat x, const QCMat& y) {
        for (int i = 0; i < x.r * x.r; ++i) x.a[i] -= y.a[i];
        return x;
    }

    QCMat transpose() const {
        QCMat z(r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) z(j, i) = (*this)(i, j);
        return z;
    }

    // Gauss-Jordan inverse; throws on a singular matrix.
    QCMat inverse() const {
        QCMat m = *this, inv = identity(r);
        for (int col = 0; col < r; ++col) {
            int piv = -1;
            for (int i = col; i < r; ++i)
                if (!m(i, col).is_zero()) {
                    piv = i;
                    break;
                }
            if (piv < 0) throw Error("singular matrix");
            if (piv != col)
                for (int j = 0; j < r; ++j) {
                    std::swap(m.a[piv * r + j], m.a[col * r + j]);
                    std::swap(inv.a[piv * r + j], inv.a[col * r + j]);
                }
            QC d = m(col, col).inv();
            for (int j = 0; j < r; ++j) {
                m(col, j) = m(col, j) * d;
                inv(col, j) = inv(col, j) * d;
            }
            for (int i = 0; i < r; ++i) {
                if (i == col || m(i, col).is_zero()) continue;
                QC f = m(i, col);
                for (int j = 0; j < r; ++j) {
                    m(i, j) -= f * m(col, j);
                    inv(i, j) -= f * inv(col, j);
                }
            }
        }
        return inv;
    }
};

class MatrixSeries {
  public:
    MatrixSeries(int r, const Truncation& tr) : r_(r), trunc_(tr), e_(r * r, Series::zero(tr)) {}

    static MatrixSeries identity(int r, const Truncation& tr) {
        MatrixSeries m(r, tr);
        for (int i = 0; i < r; ++i) m.at(i, i) = Series::one(tr);
        return m;
    }

    static MatrixSeries from_const(const QCMat& c, const Truncation& tr) {
        MatrixSeries m(c.r, tr);
        for (int i = 0; i < c.r; ++i)
            for (int j = 0; j < c.r; ++j)
                if (!c(i, j).is_zero()) m.at(i, j) = Series::constant(tr, c(i, j));
        return m;
    }

    int rows() const { return r_; }
    const Truncation& trunc() const { return trunc_; }

    Series& at(int i, int j) { return e_[i * r_ + j]; }
    const Series& at(int i, int j) const { return e_[i * r_ + j]; }

    bool is_zero() const {
        for (const auto& s : e_)
            if (!s.is_zero()) return false;
        return true;
    }
    bool is_zero_strict() const {
        for (const auto& s : e_)
            if (!s.is_zero_strict()) return false;
        return true;
    }

    MatrixSeries map(const std::function<Series(const Series&)>& f) const {
        MatrixSeries m(r_, trunc_);
        for (int i = 0; i < r_ * r_; ++i) m.e_[i] = f(e_[i]);
        // keep the target truncation in sync when f re-truncates
        if (!m.e_.empty()) m.trunc_ = m.e_[0].trunc();
        return m;
    }

    friend MatrixSeries operator+(const MatrixSeries& a, const MatrixSeries& b) {
        MatrixSeries m(a.r_, a.trunc_);
        for (int i = 0; i < a.r_ * a.r_; ++i) m.e_[i] = a.e_[i] + b.e_[i];
        return m;
    }
    friend MatrixSeries operator-(const MatrixSeries& a, const MatrixSeries& b) {
        MatrixSeries m(a.r_, a.trunc_);
        for (int i = 0; i < a.r_ * a.r_; ++i) m.e_[i] = a.e_[i] - b.e_[i];
        return m;
    }
    friend MatrixSeries operator-(const MatrixSeries& a) {
        MatrixSeries m(a.r_, a.trunc_);
        for (int i = 0; i < a.r_ * a.r_; ++i) m.e_[i] = -a.e_[i];
        return m;
    }
    friend MatrixSeries operator*(const MatrixSeries& a, const MatrixSeries& b) {
        if (a.r_ != b.r_) throw Error("matrix size mismatch");
        MatrixSeries m(a.r_, a.trunc_);
        for (int i = 0; i < a.r_; ++i)
            for (int j = 0; j < a.r_; ++j) {
                Series acc = Series::zero(a.trunc_);
                for (int k = 0; k < a.r_; ++k) acc = acc + a.at(i, k) * b.at(k, j);
                m.at(i, j) = acc;
            }
        return m;
    }
    friend MatrixSeries operator*(const Series& s, const MatrixSeries& a) {
        return a.map([&](const Series& x) { return s * x; });
    }
    friend MatrixSeries operator*(const QC& c, const MatrixSeries& a) {
        return a.map([&](const Series& x) { return c * x; });
    }

    MatrixSeries transpose() const {
        MatrixSeries m(r_, trunc_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < r_; ++j) m.at(j, i) = at(i, j);
        return m;
    }

    MatrixSeries derive_t(int i) const {
        return map([i](const Series& s) { return s.derive_t(i); });
    }
    MatrixSeries derive_z() const {
        return map([](const Series& s) { return s.derive_z(); });
    }
    MatrixSeries shift_z(int k) const {
        return map([k](const Series& s) { return s.shift_z(k); });
    }
    MatrixSeries flip_z() const {
        return map([](const Series& s) { return s.flip_z(); });
    }
    MatrixSeries coeff_z(int k) const {
        return map([k](const Series& s) { return s.coeff_z(k); });
    }
    MatrixSeries t_part(int d) const {
        return map([d](const Series& s) { return s.t_part(d); });
    }
    MatrixSeries restrict_t0() const {
        return map([](const Series& s) { return s.restrict_t0(); });
    }
    MatrixSeries cast(const Truncation& to) const {
        return map([&](const Series& s) { return s.cast(to); });
    }

    QCMat value00() const {
        QCMat m(r_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < r_; ++j) m(i, j) = at(i, j).constant_term();
        return m;
    }

    // Constant matrix, if the entries are constants inside the reliable
    // window; throws otherwise.
    QCMat as_const() const {
        QCMat m = value00();
        MatrixSeries diff = *this - MatrixSeries::from_const(m, trunc_);
        if (!diff.is_zero()) throw Error("matrix is not constant");
        return m;
    }

    Series trace() const {
        Series s = Series::zero(trunc_);
        for (int i = 0; i < r_; ++i) s = s + at(i, i);
        return s;
    }

    int min_z_exponent() const {
        int mn = 0;
        for (const auto& s : e_) mn = std::min(mn, s.min_z_exponent());
        return mn;
    }

    // Two-sided inverse within truncation.  The constant part at
    // (z,t) = (0,0) must be invertible; the Neumann tail terminates because
    // the correction has positive (z,t)-valuation.
    MatrixSeries inverse() const {
        QCMat c0 = value00();
        QCMat c0inv = c0.inverse();  // throws "singular matrix" if not invertible
        MatrixSeries m0inv = from_const(c0inv, trunc_);
        MatrixSeries n = m0inv * (*this) - identity(r_, trunc_);
        MatrixSeries acc = identity(r_, trunc_);
        MatrixSeries pw = identity(r_, trunc_);
        int bound = trunc_.z_max - std::min(trunc_.z_min, min_z_exponent()) + trunc_.t_deg + 2;
        for (int k = 1; k <= bound; ++k) {
            pw = pw * n;
            if (pw.is_zero_strict()) break;
            acc = (k & 1) ? acc - pw : acc + pw;
            if (k == bound) throw Error("matrix inverse did not terminate");
        }
        return acc * m0inv;
    }

    std::string str() const {
        std::ostringstream os;
        for (int i = 0; i < r_; ++i) {
            os << "[ ";
            for (int j = 0; j < r_; ++j) {
                if (j) os << " | ";
                os << at(i, j).str();
            }
            os << " ]\n";
        }
        return os.str();
    }

  private:
    int r_;
    Truncation trunc_;
    std::vector<Series> e_;
};

inline bool equal_reliable(const MatrixSeries& a, const MatrixSeries& b) {
    return (a - b).is_zero();
}

// First nonzero entry position and monomial, for residual diagnostics.
inline std::string first_offending(const MatrixSeries& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.rows(); ++j) {
            if (m.at(i, j).is_zero()) continue;
            auto t = m.at(i, j).first_term();
            if (!t) continue;
            std::ostringstream os;
            os << "entry (" << i + 1 << "," << j + 1 << "): (" << to_string(t->second) << ")*"
               << mono_str(t->first);
            return os.str();
        }
    return "";
}

}  // namespace fmconn
