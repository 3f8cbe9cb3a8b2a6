// Truncation bounds for the series ring.  A truncation is a property of
// values: two series interoperate only if their truncations agree exactly.
#pragma once

#include "rational.hpp"

#include <array>
#include <cstdint>
#include <ostream>

namespace fmconn {

constexpr int kMaxVars = 6;

// Sentinel for "z-coefficients exact at every order kept" (no truncation
// loss has occurred on the z^{>0} side yet).
constexpr int kZExact = 1 << 20;

// Series are kept modulo z^{z_max+1} and modulo total t-degree t_deg+1;
// z-exponents below z_min are an arithmetic error, not a truncation.
// With uses_s an auxiliary variable s with s^2 = t2 is allowed; s counts
// as half a t-degree and its exponent is kept in {0,1}.
struct Truncation {
    int z_max = 8;
    int z_min = 0;
    int t_deg = 12;
    int n_vars = 2;
    bool uses_s = false;

    Truncation() = default;
    Truncation(int zmax, int zmin, int tdeg, int nvars, bool s = false)
        : z_max(zmax), z_min(zmin), t_deg(tdeg), n_vars(nvars), uses_s(s) {
        if (z_max < 0 || z_min > 0 || t_deg < 0 || n_vars < 0 || n_vars > kMaxVars)
            throw Error("invalid truncation bounds");
    }

    // Highest admissible half-degree 2*sum(t)+s.
    int half_deg_bound() const { return 2 * t_deg + (uses_s ? 1 : 0); }

    Truncation with_z_min(int zmin) const {
        Truncation t = *this;
        t.z_min = zmin;
        return t;
    }
    Truncation with_s(bool s) const {
        Truncation t = *this;
        t.uses_s = s;
        return t;
    }

    friend bool operator==(const Truncation& a, const Truncation& b) {
        return a.z_max == b.z_max && a.z_min == b.z_min && a.t_deg == b.t_deg &&
               a.n_vars == b.n_vars && a.uses_s == b.uses_s;
    }
    friend bool operator!=(const Truncation& a, const Truncation& b) { return !(a == b); }
};

inline std::ostream& operator<<(std::ostream& os, const Truncation& t) {
    os << "{z:" << t.z_min << ".." << t.z_max << ", t_deg:" << t.t_deg << ", n:" << t.n_vars;
    if (t.uses_s) os << ", s";
    return os << "}";
}

inline void require_same(const Truncation& a, const Truncation& b, const char* where) {
    if (a != b) throw Error(std::string("truncation mismatch in ") + where);
}

// Exponent key of one monomial c * z^z * t1^t[0] * ... * s^s.
struct Mono {
    int16_t z = 0;
    uint8_t s = 0;
    std::array<uint8_t, kMaxVars> t{};

    int t_total() const {
        int d = 0;
        for (auto e : t) d += e;
        return d;
    }
    int half_deg() const { return 2 * t_total() + s; }
    bool t_free() const { return t_total() == 0 && s == 0; }

    friend bool operator==(const Mono& a, const Mono& b) {
        return a.z == b.z && a.s == b.s && a.t == b.t;
    }
    friend bool operator<(const Mono& a, const Mono& b) {
        if (a.z != b.z) return a.z < b.z;
        if (a.t != b.t) return a.t < b.t;
        return a.s < b.s;
    }
};

}  // namespace fmconn
