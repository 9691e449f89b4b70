#pragma once

// Truncated polynomial ring over Q(i) in the paired variables
// t_k, tb_k, z_k, zb_k (k = 1..n), lam, lamb.  "b" marks the conjugate
// partner.  z_k stands for log t_k and is never truncated; the total degree
// in the t-type and lam-type variables is truncated at a fixed order.

#include "mhs/scalars.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mhs {

enum class VarKind { T, TBar, Z, ZBar, Lambda, LambdaBar };

struct Var {
    VarKind kind;
    int index = 0; // 1-based for t/z kinds, ignored for lambda kinds
};

/// Variable layout shared by every element: n, the truncation order.
struct ParamRing {
    int n = 1;
    int truncation = 6;

    std::size_t nvars() const { return static_cast<std::size_t>(4 * n + 2); }

    std::size_t slot(Var v) const
    {
        auto check = [&] {
            if (v.index < 1 || v.index > n)
                throw std::out_of_range("variable index out of range");
        };
        switch (v.kind) {
        case VarKind::T: check(); return static_cast<std::size_t>(v.index - 1);
        case VarKind::TBar: check(); return static_cast<std::size_t>(n + v.index - 1);
        case VarKind::Z: check(); return static_cast<std::size_t>(2 * n + v.index - 1);
        case VarKind::ZBar: check(); return static_cast<std::size_t>(3 * n + v.index - 1);
        case VarKind::Lambda: return static_cast<std::size_t>(4 * n);
        case VarKind::LambdaBar: return static_cast<std::size_t>(4 * n + 1);
        }
        return 0;
    }

    Var var_at(std::size_t s) const
    {
        int i = static_cast<int>(s);
        if (i < n) return {VarKind::T, i + 1};
        if (i < 2 * n) return {VarKind::TBar, i - n + 1};
        if (i < 3 * n) return {VarKind::Z, i - 2 * n + 1};
        if (i < 4 * n) return {VarKind::ZBar, i - 3 * n + 1};
        if (i == 4 * n) return {VarKind::Lambda, 0};
        return {VarKind::LambdaBar, 0};
    }

    bool truncated_slot(std::size_t s) const
    {
        auto k = var_at(s).kind;
        return k != VarKind::Z && k != VarKind::ZBar;
    }

    std::size_t partner(std::size_t s) const
    {
        int i = static_cast<int>(s);
        if (i < n) return s + n;
        if (i < 2 * n) return s - n;
        if (i < 3 * n) return s + n;
        if (i < 4 * n) return s - n;
        return i == 4 * n ? s + 1 : s - 1;
    }

    std::string var_name(std::size_t s) const
    {
        Var v = var_at(s);
        std::string k = std::to_string(v.index);
        switch (v.kind) {
        case VarKind::T: return "t" + k;
        case VarKind::TBar: return "tb" + k;
        case VarKind::Z: return "z" + k;
        case VarKind::ZBar: return "zb" + k;
        case VarKind::Lambda: return "lam";
        case VarKind::LambdaBar: return "lamb";
        }
        return "?";
    }

    Var parse_var(const std::string& name) const
    {
        if (name == "lam") return {VarKind::Lambda, 0};
        if (name == "lamb") return {VarKind::LambdaBar, 0};
        auto idx = [&](std::size_t from) { return std::stoi(name.substr(from)); };
        if (name.rfind("tb", 0) == 0) return {VarKind::TBar, idx(2)};
        if (name.rfind("zb", 0) == 0) return {VarKind::ZBar, idx(2)};
        if (name.rfind("t", 0) == 0) return {VarKind::T, idx(1)};
        if (name.rfind("z", 0) == 0) return {VarKind::Z, idx(1)};
        throw std::invalid_argument("unknown variable '" + name + "'");
    }

    friend bool operator==(const ParamRing&, const ParamRing&) = default;
};

/// Point at which elements are evaluated numerically.  z_k = log t_k with
/// Im z_k in [0, 2*pi); barred variables take complex conjugates.
struct Assignment {
    std::vector<std::complex<double>> t;
    std::complex<double> lambda{0.0, 0.0};
};

inline std::complex<double> log_branch(std::complex<double> t)
{
    if (t == std::complex<double>(0.0, 0.0))
        throw std::domain_error("log of zero coordinate");
    std::complex<double> z = std::log(t);
    if (z.imag() < 0.0)
        z += std::complex<double>(0.0, 2.0 * std::numbers::pi);
    return z;
}

class ParamElement {
  public:
    using Exponents = std::vector<int>;

    ParamElement() = default;
    explicit ParamElement(ParamRing ring) : ring_(ring) {}

    static ParamElement constant(ParamRing ring, const Gauss& c)
    {
        ParamElement e(ring);
        if (!c.is_zero())
            e.terms_.emplace(Exponents(ring.nvars(), 0), c);
        return e;
    }

    static ParamElement variable(ParamRing ring, Var v)
    {
        ParamElement e(ring);
        Exponents ex(ring.nvars(), 0);
        ex[ring.slot(v)] = 1;
        e.add_term(std::move(ex), Gauss(1));
        return e;
    }

    static ParamElement monomial(ParamRing ring, Exponents ex, const Gauss& c)
    {
        if (ex.size() != ring.nvars())
            throw std::invalid_argument("exponent vector has wrong length");
        ParamElement e(ring);
        e.add_term(std::move(ex), c);
        return e;
    }

    const ParamRing& ring() const { return ring_; }
    const std::map<Exponents, Gauss>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int truncated_degree(const Exponents& ex) const
    {
        int d = 0;
        for (std::size_t s = 0; s < ex.size(); ++s)
            if (ring_.truncated_slot(s))
                d += ex[s];
        return d;
    }

    /// Constant term (coefficient of the empty monomial).
    Gauss constant_term() const
    {
        auto it = terms_.find(Exponents(ring_.nvars(), 0));
        return it == terms_.end() ? Gauss(0) : it->second;
    }

    bool is_constant() const
    {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponents(ring_.nvars(), 0));
    }

    ParamElement operator-() const
    {
        ParamElement r = *this;
        for (auto& [ex, c] : r.terms_)
            c = -c;
        return r;
    }

    ParamElement& operator+=(const ParamElement& o)
    {
        require_same_ring(o);
        for (const auto& [ex, c] : o.terms_)
            add_term(ex, c);
        return *this;
    }
    ParamElement& operator-=(const ParamElement& o)
    {
        require_same_ring(o);
        for (const auto& [ex, c] : o.terms_)
            add_term(ex, -c);
        return *this;
    }
    ParamElement& operator*=(const ParamElement& o)
    {
        *this = *this * o;
        return *this;
    }

    friend ParamElement operator+(ParamElement a, const ParamElement& b) { return a += b; }
    friend ParamElement operator-(ParamElement a, const ParamElement& b) { return a -= b; }

    friend ParamElement operator*(const ParamElement& a, const ParamElement& b)
    {
        a.require_same_ring(b);
        ParamElement r(a.ring_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents ex(ea.size());
                for (std::size_t s = 0; s < ex.size(); ++s)
                    ex[s] = ea[s] + eb[s];
                if (r.truncated_degree(ex) > r.ring_.truncation)
                    continue;
                r.add_term(std::move(ex), ca * cb);
            }
        return r;
    }

    friend ParamElement operator*(const Gauss& c, const ParamElement& a)
    {
        ParamElement r(a.ring_);
        if (c.is_zero())
            return r;
        for (const auto& [ex, v] : a.terms_)
            r.terms_.emplace(ex, c * v);
        return r;
    }
    friend ParamElement operator*(const ParamElement& a, const Gauss& c) { return c * a; }

    friend bool operator==(const ParamElement& a, const ParamElement& b)
    {
        return a.ring_.n == b.ring_.n && a.terms_ == b.terms_;
    }

    /// Swaps barred and unbarred variables and conjugates coefficients.
    ParamElement conj() const
    {
        ParamElement r(ring_);
        for (const auto& [ex, c] : terms_) {
            Exponents e2(ex.size());
            for (std::size_t s = 0; s < ex.size(); ++s)
                e2[ring_.partner(s)] = ex[s];
            r.terms_.emplace(std::move(e2), c.conj());
        }
        return r;
    }

    /// The derivation t_k d/dt_k: xi(t_k) = t_k, xi(z_k) = 1, barred vars and
    /// lambda are constants.
    ParamElement xi(int k) const
    {
        std::size_t st = ring_.slot({VarKind::T, k});
        std::size_t sz = ring_.slot({VarKind::Z, k});
        ParamElement r(ring_);
        for (const auto& [ex, c] : terms_) {
            if (ex[st] != 0)
                r.add_term(ex, c * Gauss(ex[st]));
            if (ex[sz] != 0) {
                Exponents e2 = ex;
                e2[sz] -= 1;
                r.add_term(std::move(e2), c * Gauss(ex[sz]));
            }
        }
        return r;
    }

    std::complex<double> evaluate(const Assignment& at) const
    {
        if (at.t.size() != static_cast<std::size_t>(ring_.n))
            throw std::invalid_argument("assignment has wrong number of t coordinates");
        std::vector<std::complex<double>> value(ring_.nvars());
        for (int k = 1; k <= ring_.n; ++k) {
            auto t = at.t[k - 1];
            if (std::abs(t) >= 1.0)
                throw std::domain_error("t coordinate outside the unit disk");
            auto z = log_branch(t);
            value[ring_.slot({VarKind::T, k})] = t;
            value[ring_.slot({VarKind::TBar, k})] = std::conj(t);
            value[ring_.slot({VarKind::Z, k})] = z;
            value[ring_.slot({VarKind::ZBar, k})] = std::conj(z);
        }
        value[ring_.slot({VarKind::Lambda, 0})] = at.lambda;
        value[ring_.slot({VarKind::LambdaBar, 0})] = std::conj(at.lambda);
        std::complex<double> sum{0.0, 0.0};
        for (const auto& [ex, c] : terms_) {
            std::complex<double> term = c.to_complex();
            for (std::size_t s = 0; s < ex.size(); ++s)
                for (int p = 0; p < ex[s]; ++p)
                    term *= value[s];
            sum += term;
        }
        return sum;
    }

    /// Exact substitution lam -> value, lamb -> conj(value).
    ParamElement substitute_lambda(const Gauss& value) const
    {
        std::size_t sl = ring_.slot({VarKind::Lambda, 0});
        std::size_t sb = ring_.slot({VarKind::LambdaBar, 0});
        ParamElement r(ring_);
        for (const auto& [ex, c] : terms_) {
            Gauss f = c;
            for (int p = 0; p < ex[sl]; ++p)
                f *= value;
            for (int p = 0; p < ex[sb]; ++p)
                f *= value.conj();
            Exponents e2 = ex;
            e2[sl] = 0;
            e2[sb] = 0;
            r.add_term(std::move(e2), f);
        }
        return r;
    }

    /// Sets every t_k and tb_k to zero (drops monomials containing them).
    ParamElement at_t_zero() const
    {
        ParamElement r(ring_);
        for (const auto& [ex, c] : terms_) {
            bool keep = true;
            for (int k = 1; k <= ring_.n && keep; ++k)
                keep = ex[ring_.slot({VarKind::T, k})] == 0 && ex[ring_.slot({VarKind::TBar, k})] == 0;
            if (keep)
                r.terms_.emplace(ex, c);
        }
        return r;
    }

    bool involves(VarKind kind) const
    {
        for (const auto& [ex, c] : terms_)
            for (std::size_t s = 0; s < ex.size(); ++s)
                if (ex[s] != 0 && ring_.var_at(s).kind == kind)
                    return true;
        return false;
    }

    /// Same element with a different truncation order (re-truncating if lower).
    ParamElement with_truncation(int order) const
    {
        ParamRing r2 = ring_;
        r2.truncation = order;
        ParamElement r(r2);
        for (const auto& [ex, c] : terms_)
            if (r.truncated_degree(ex) <= order)
                r.terms_.emplace(ex, c);
        return r;
    }

    /// Human readable form, e.g. "2*lam*t1 - 1/2 i*z1".
    std::string str() const
    {
        if (terms_.empty())
            return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [ex, c] : terms_) {
            std::string mono;
            for (std::size_t s = 0; s < ex.size(); ++s) {
                if (ex[s] == 0)
                    continue;
                if (!mono.empty())
                    mono += "*";
                mono += ring_.var_name(s);
                if (ex[s] > 1)
                    mono += "^" + std::to_string(ex[s]);
            }
            std::string coeff = c.str();
            bool negative_real = c.is_real() && sgn(c.re()) < 0;
            if (!first)
                os << (negative_real ? " - " : " + ");
            else if (negative_real)
                os << "-";
            if (negative_real)
                coeff = Gauss(-c.re()).str();
            if (mono.empty())
                os << coeff;
            else if (coeff == "1")
                os << mono;
            else if (c.is_real())
                os << coeff << "*" << mono;
            else
                os << "(" << coeff << ")*" << mono;
            first = false;
        }
        return os.str();
    }

  private:
    void add_term(Exponents ex, const Gauss& c)
    {
        if (c.is_zero() || truncated_degree(ex) > ring_.truncation)
            return;
        auto [it, inserted] = terms_.try_emplace(std::move(ex), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    void require_same_ring(const ParamElement& o) const
    {
        if (ring_.n != o.ring_.n)
            throw std::invalid_argument("parameter ring mismatch");
    }

    ParamRing ring_{};
    std::map<Exponents, Gauss> terms_;
};

inline ParamElement conj(const ParamElement& x) { return x.conj(); }

/// Product t_1 ... t_n.
inline ParamElement t_product(ParamRing ring)
{
    ParamElement::Exponents ex(ring.nvars(), 0);
    for (int k = 1; k <= ring.n; ++k)
        ex[ring.slot({VarKind::T, k})] = 1;
    return ParamElement::monomial(ring, std::move(ex), Gauss(1));
}

using ParamVector = std::vector<ParamElement>;

} // namespace mhs
