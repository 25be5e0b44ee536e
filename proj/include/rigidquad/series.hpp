#pragma once

// Exact truncated power series over the rationals and the generating
// functions of rigid quadrangulations: R(t), Qhat/Q/H/F/Z and the trivariate
// Delta/B/C series of double-based quadrangulations. No floating point.

#include "rigidquad/numeric.hpp"

#include <stdexcept>
#include <vector>

namespace rq {

// Univariate series truncated at t^N (inclusive), exact rational coefficients.
class UniSeries {
  public:
    explicit UniSeries(int order) : c_(order + 1) {
        if (order < 0) throw std::invalid_argument("series order must be >= 0");
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const Rat& operator[](int k) const { return c_.at(k); }
    Rat& operator[](int k) { return c_.at(k); }

    static UniSeries t(int order) {
        UniSeries s(order);
        if (order >= 1) s[1] = 1;
        return s;
    }

    friend UniSeries operator+(const UniSeries& a, const UniSeries& b) {
        UniSeries r(std::min(a.order(), b.order()));
        for (int k = 0; k <= r.order(); ++k) r[k] = a[k] + b[k];
        return r;
    }
    friend UniSeries operator-(const UniSeries& a, const UniSeries& b) {
        UniSeries r(std::min(a.order(), b.order()));
        for (int k = 0; k <= r.order(); ++k) r[k] = a[k] - b[k];
        return r;
    }
    friend UniSeries operator*(const UniSeries& a, const UniSeries& b) {
        UniSeries r(std::min(a.order(), b.order()));
        for (int i = 0; i <= r.order(); ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; i + j <= r.order(); ++j)
                if (b[j] != 0) r[i + j] += a[i] * b[j];
        }
        return r;
    }
    UniSeries& operator*=(const Rat& s) {
        for (auto& c : c_) c *= s;
        return *this;
    }
    friend UniSeries operator*(UniSeries a, const Rat& s) { return a *= s; }

    bool is_zero() const {
        for (const auto& c : c_)
            if (c != 0) return false;
        return true;
    }

    // Composition a(inner); requires inner constant term 0.
    UniSeries compose(const UniSeries& inner) const {
        if (inner[0] != 0) throw std::invalid_argument("compose: inner series must have c0 = 0");
        const int N = std::min(order(), inner.order());
        UniSeries r(N), pw(N);
        pw[0] = 1;
        r[0] = c_[0];
        for (int k = 1; k <= N; ++k) {
            pw = pw * inner;
            if (c_[k] == 0) continue;
            for (int j = 0; j <= N; ++j) r[j] += c_[k] * pw[j];
        }
        return r;
    }

    // 1 / this; requires nonzero constant term.
    UniSeries reciprocal() const {
        if (c_[0] == 0) throw std::invalid_argument("reciprocal: c0 = 0");
        UniSeries r(order());
        r[0] = Rat(1) / c_[0];
        for (int k = 1; k <= order(); ++k) {
            Rat acc = 0;
            for (int j = 1; j <= k; ++j) acc += c_[j] * r[k - j];
            r[k] = -acc / c_[0];
        }
        return r;
    }

    // exp(this); requires c0 = 0.
    UniSeries exp() const {
        if (c_[0] != 0) throw std::invalid_argument("exp: c0 must be 0");
        const int N = order();
        UniSeries r(N), pw(N);
        pw[0] = 1;
        r[0] = 1;
        Int fact = 1;
        for (int k = 1; k <= N; ++k) {
            pw = pw * (*this);
            fact *= k;
            if (pw.is_zero()) break;
            const Rat inv = Rat(1) / Rat(fact);
            for (int j = 0; j <= N; ++j) r[j] += inv * pw[j];
        }
        return r;
    }

    // Quotient by t^k; requires the first k coefficients to vanish.
    UniSeries shift_down(int k) const {
        for (int j = 0; j < k && j <= order(); ++j)
            if (c_[j] != 0) throw std::domain_error("shift_down: series not divisible by t^k");
        UniSeries r(order() - k);
        for (int j = 0; j <= r.order(); ++j) r[j] = c_[j + k];
        return r;
    }

  private:
    std::vector<Rat> c_;
};

// ---------------------------------------------------------------------------
// Generating functions (coefficient of t^n counts objects of degree n).

// R(t): the unique series with R = t + O(t^2) solving
//   sum_{n>=0} Cat(n) C(2n,n) R^{n+1} = t.
// Solved coefficient by coefficient: the n-th coefficient of the defect
// determines R_n because the equation reads t = R + higher-order terms.
inline UniSeries solve_R(int order) {
    if (order < 1) throw std::invalid_argument("solve_R: order must be >= 1");
    std::vector<Rat> w(order); // w_n = C(2n,n)^2 / (n+1)
    for (int n = 0; n < order; ++n) {
        const Int b = binomial(2 * n, n);
        w[n] = Rat(b * b, n + 1);
    }
    UniSeries R(order);
    R[1] = 1;
    auto defect = [&](const UniSeries& r) {
        UniSeries acc(order), pw(order);
        pw[0] = 1;
        for (int n = 0; n < order; ++n) {
            pw = pw * r; // r^{n+1}
            for (int j = 0; j <= order; ++j) acc[j] += w[n] * pw[j];
        }
        acc[1] -= 1; // minus t
        return acc;
    };
    for (int m = 2; m <= order; ++m) {
        const UniSeries d = defect(R);
        R[m] -= d[m];
    }
    // Defining identity holds exactly at full order.
    const UniSeries d = defect(R);
    if (!d.is_zero()) throw std::logic_error("solve_R: back-substitution failed");
    return R;
}

// Number of pre-Q-trees: |Qhat_{n+1,p}| = Cat(n) C(2n-p, n-p).
inline UniSeries q_hat_series(long long p, int order) {
    UniSeries s(order);
    for (int n = 0; n + 1 <= order; ++n)
        s[n + 1] = Rat(binomial(2 * n, n) * binomial(2 * n - p, n - p), n + 1);
    return s;
}

// Q^(p)(t) = Qhat^(p)(R(t)).
inline UniSeries q_series(long long p, int order, const UniSeries& R) {
    return q_hat_series(p, order).compose(R);
}
inline UniSeries q_series(long long p, int order) { return q_series(p, order, solve_R(order)); }

// H^(p) = Q^(p) for p >= 0 and Q^(p) - Q^(p+1) for p < 0.
inline UniSeries h_series(long long p, int order, const UniSeries& R) {
    if (p >= 0) return q_series(p, order, R);
    return q_series(p, order, R) - q_series(p + 1, order, R);
}
inline UniSeries h_series(long long p, int order) { return h_series(p, order, solve_R(order)); }

// F^(p): complete base-p rigid quadrangulations; equals H^(p) through the
// tree bijection, with F^(0) = t by convention.
inline UniSeries f_series(long long p, int order, const UniSeries& R) { return h_series(p, order, R); }
inline UniSeries f_series(long long p, int order) { return h_series(p, order); }

// Z(t) = (F^(1)(t) - t^2) / (2t): rooted-only rigid quadrangulations.
inline UniSeries z_series(int order, const UniSeries& R) {
    UniSeries num = f_series(1, order + 1, R);
    num[2] -= 1;
    UniSeries z = num.shift_down(1); // exact by construction, checked
    z *= Rat(1, 2);
    return z;
}
inline UniSeries z_series(int order) { return z_series(order, solve_R(order + 1)); }

// ---------------------------------------------------------------------------
// Trivariate series in (t, x, y): per t-degree m a dense polynomial table in
// x and y with degrees 0..m (every monomial of the Delta/B/C family satisfies
// deg_x <= m and deg_y <= m).

class TriSeries {
  public:
    explicit TriSeries(int order) : order_(order) {
        if (order < 0) throw std::invalid_argument("series order must be >= 0");
        c_.resize(order + 1);
        for (int m = 0; m <= order; ++m) c_[m].assign((m + 1) * (m + 1), Rat(0));
    }

    int order() const { return order_; }

    const Rat& at(int m, int i, int j) const { return c_.at(m).at(idx(m, i, j)); }
    void set(int m, int i, int j, Rat v) { c_.at(m).at(idx(m, i, j)) = std::move(v); }
    void add(int m, int i, int j, const Rat& v) { c_.at(m).at(idx(m, i, j)) += v; }

    Rat constant_term() const { return at(0, 0, 0); }

    friend TriSeries operator+(const TriSeries& a, const TriSeries& b) {
        TriSeries r(std::min(a.order_, b.order_));
        for (int m = 0; m <= r.order_; ++m)
            for (int i = 0; i <= m; ++i)
                for (int j = 0; j <= m; ++j) r.set(m, i, j, a.at(m, i, j) + b.at(m, i, j));
        return r;
    }
    friend TriSeries operator-(const TriSeries& a, const TriSeries& b) {
        TriSeries r(std::min(a.order_, b.order_));
        for (int m = 0; m <= r.order_; ++m)
            for (int i = 0; i <= m; ++i)
                for (int j = 0; j <= m; ++j) r.set(m, i, j, a.at(m, i, j) - b.at(m, i, j));
        return r;
    }
    friend TriSeries operator*(const TriSeries& a, const TriSeries& b) {
        TriSeries r(std::min(a.order_, b.order_));
        for (int ma = 0; ma <= r.order_; ++ma)
            for (int ia = 0; ia <= ma; ++ia)
                for (int ja = 0; ja <= ma; ++ja) {
                    const Rat& ca = a.at(ma, ia, ja);
                    if (ca == 0) continue;
                    for (int mb = 0; ma + mb <= r.order_; ++mb)
                        for (int ib = 0; ib <= mb; ++ib)
                            for (int jb = 0; jb <= mb; ++jb) {
                                const Rat& cb = b.at(mb, ib, jb);
                                if (cb != 0) r.add(ma + mb, ia + ib, ja + jb, ca * cb);
                            }
                }
        return r;
    }

    bool is_zero() const {
        for (const auto& tier : c_)
            for (const auto& v : tier)
                if (v != 0) return false;
        return true;
    }

    // exp(this) - requires zero constant term (t-adic valuation >= 1 is what
    // the Delta series provides).
    TriSeries exp() const {
        if (constant_term() != 0) throw std::invalid_argument("exp: constant term must be 0");
        TriSeries r(order_), pw(order_);
        pw.set(0, 0, 0, 1);
        r.set(0, 0, 0, 1);
        Int fact = 1;
        for (int k = 1; k <= order_; ++k) {
            pw = pw * (*this);
            fact *= k;
            if (pw.is_zero()) break;
            const Rat inv = Rat(1) / Rat(fact);
            for (int m = 0; m <= order_; ++m)
                for (int i = 0; i <= m; ++i)
                    for (int j = 0; j <= m; ++j)
                        if (pw.at(m, i, j) != 0) r.add(m, i, j, inv * pw.at(m, i, j));
        }
        return r;
    }

    TriSeries negated() const {
        TriSeries r(order_);
        for (int m = 0; m <= order_; ++m)
            for (int i = 0; i <= m; ++i)
                for (int j = 0; j <= m; ++j) r.set(m, i, j, -at(m, i, j));
        return r;
    }

    static TriSeries one(int order) {
        TriSeries r(order);
        r.set(0, 0, 0, 1);
        return r;
    }

    // 1/(1 - this); requires zero constant term.
    TriSeries geometric() const {
        if (constant_term() != 0) throw std::invalid_argument("geometric: constant term must be 0");
        TriSeries r = one(order_), pw = one(order_);
        for (int k = 1; k <= order_; ++k) {
            pw = pw * (*this);
            if (pw.is_zero()) break;
            r = r + pw;
        }
        return r;
    }

  private:
    static int idx(int m, int i, int j) {
        if (i < 0 || j < 0 || i > m || j > m) throw std::out_of_range("TriSeries index");
        return i * (m + 1) + j;
    }

    int order_;
    std::vector<std::vector<Rat>> c_;
};

// Delta(t,x,y): complete Delta-type rigid quadrangulations weighted by the
// inverse of their degeneracy; x marks the co-base length, y the base length.
//   Delta = sum_{n>=0} sum_{i,j=0}^{n} C(2n-i,n) C(2n-j,n) / (n+1)
//           * x^{i+1} y^{j+1} R^{n+1}.
inline TriSeries delta_series(int order, const UniSeries& R) {
    TriSeries d(order);
    UniSeries pw(order);
    pw[0] = 1;
    for (int n = 0; n + 1 <= order; ++n) {
        pw = pw * R; // R^{n+1}
        for (int i = 0; i <= n; ++i) {
            if (i + 1 > order) break;
            const Int bi = binomial(2 * n - i, n);
            if (bi == 0) continue;
            for (int j = 0; j <= n; ++j) {
                if (j + 1 > order) break;
                const Int bj = binomial(2 * n - j, n);
                if (bj == 0) continue;
                const Rat coef = Rat(bi * bj, n + 1);
                for (int m = std::max(i + 1, j + 1); m <= order; ++m)
                    if (pw[m] != 0) d.add(m, i + 1, j + 1, coef * pw[m]);
            }
        }
    }
    return d;
}
inline TriSeries delta_series(int order) { return delta_series(order, solve_R(order)); }

// Pre-Q analogue Delta-hat: same sum with t^{n+1} in place of R^{n+1}.
inline TriSeries delta_hat_series(int order) {
    return delta_series(order, UniSeries::t(order));
}

inline TriSeries b_series(int order, const UniSeries& R) {
    return delta_series(order, R).exp() - TriSeries::one(order);
}
inline TriSeries b_series(int order) { return b_series(order, solve_R(order)); }

inline TriSeries c_series(int order, const UniSeries& R) {
    return TriSeries::one(order) - delta_series(order, R).negated().exp();
}
inline TriSeries c_series(int order) { return c_series(order, solve_R(order)); }

// ---------------------------------------------------------------------------
// sum over (n_1, n_2, ...) with 1 n_1 + 2 n_2 + ... = m of
// prod_k 1 / (k^{n_k} n_k!); equals 1 for every m >= 0.
inline Rat multiplicative_partition_sum(int m) {
    // Walk partitions of m by largest part; exact rationals throughout.
    Rat total = 0;
    auto rec = [&](auto&& self, int remaining, int max_part, const Rat& weight) -> void {
        if (remaining == 0) {
            total += weight;
            return;
        }
        for (int k = std::min(remaining, max_part); k >= 1; --k) {
            // multiplicity of part k
            Rat w = weight;
            for (int cnt = 1; cnt * k <= remaining; ++cnt) {
                w *= Rat(1, Int(k) * cnt); // extends 1/(k^cnt cnt!)
                self(self, remaining - cnt * k, k - 1, w);
            }
        }
    };
    rec(rec, m, m, Rat(1));
    return total;
}

} // namespace rq
