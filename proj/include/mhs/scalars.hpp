#pragma once

// Exact coefficient fields: rationals (GMP) and Gaussian rationals.

#include <gmpxx.h>

#include <cctype>
#include <complex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace mhs {

using Rational = mpq_class;

inline Rational parse_rational(std::string_view text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    if (s.empty())
        throw std::invalid_argument("empty rational literal");
    if (s.front() == '+')
        s.erase(s.begin());
    auto slash = s.find('/');
    auto valid_int = [](std::string_view v) {
        if (v.empty())
            return false;
        std::size_t i = (v.front() == '-') ? 1 : 0;
        if (i == v.size())
            return false;
        for (; i < v.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(v[i])))
                return false;
        return true;
    };
    if (slash == std::string::npos) {
        if (!valid_int(s))
            throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
        return Rational(mpz_class(s));
    }
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den.front() == '-')
        throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    mpz_class d(den);
    if (d == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational r(mpz_class(num), d);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Element re + im*i of Q(i). Always exact; conj is the field involution.
class Gauss {
  public:
    Gauss() = default;
    Gauss(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im))
    {
        re_.canonicalize();
        im_.canonicalize();
    }
    Gauss(int v) : re_(v), im_(0) {}
    Gauss(long v) : re_(v), im_(0) {}

    static Gauss i() { return Gauss(0, 1); }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    Gauss conj() const { return Gauss(re_, -im_); }
    Rational norm() const { return re_ * re_ + im_ * im_; }

    Gauss inverse() const
    {
        if (is_zero())
            throw std::domain_error("division by zero in Q(i)");
        Rational n = norm();
        return Gauss(re_ / n, -im_ / n);
    }

    Gauss operator-() const { return Gauss(-re_, -im_); }
    Gauss& operator+=(const Gauss& o)
    {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    Gauss& operator-=(const Gauss& o)
    {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    Gauss& operator*=(const Gauss& o)
    {
        Rational r = re_ * o.re_ - im_ * o.im_;
        Rational m = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }
    Gauss& operator/=(const Gauss& o) { return *this *= o.inverse(); }

    friend Gauss operator+(Gauss a, const Gauss& b) { return a += b; }
    friend Gauss operator-(Gauss a, const Gauss& b) { return a -= b; }
    friend Gauss operator*(Gauss a, const Gauss& b) { return a *= b; }
    friend Gauss operator/(Gauss a, const Gauss& b) { return a /= b; }
    friend bool operator==(const Gauss& a, const Gauss& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
    friend bool operator!=(const Gauss& a, const Gauss& b) { return !(a == b); }

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

    /// "p/q" for real values, "p/q+r/s i" (or "p/q+i") otherwise.
    std::string str() const
    {
        if (is_real())
            return re_.get_str();
        std::string out;
        if (sgn(re_) != 0)
            out = re_.get_str() + (sgn(im_) > 0 ? "+" : "-");
        else if (sgn(im_) < 0)
            out = "-";
        Rational a = abs(im_);
        out += (a == 1) ? std::string("i") : a.get_str() + " i";
        return out;
    }

  private:
    Rational re_{0};
    Rational im_{0};
};

inline std::ostream& operator<<(std::ostream& os, const Gauss& g) { return os << g.str(); }

inline std::string to_string(const Gauss& g) { return g.str(); }

/// Accepts "a", "a+b i", "a-bi", "b i", "i", "-i" with rational a, b.
inline Gauss parse_gauss(std::string_view text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    if (s.empty())
        throw std::invalid_argument("empty scalar literal");
    if (s.back() != 'i')
        return Gauss(parse_rational(s));
    s.pop_back();
    // split at the last sign that is not leading
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
        if (s[k] == '+' || s[k] == '-') {
            split = k;
            break;
        }
    std::string re_part, im_part;
    if (split == std::string::npos)
        im_part = s;
    else {
        re_part = s.substr(0, split);
        im_part = s.substr(split);
    }
    if (im_part.empty() || im_part == "+")
        im_part = "1";
    else if (im_part == "-")
        im_part = "-1";
    Rational re = re_part.empty() ? Rational(0) : parse_rational(re_part);
    return Gauss(re, parse_rational(im_part));
}

// Uniform field interface used by the templated linear algebra.
inline bool is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_zero(const Gauss& g) { return g.is_zero(); }
inline Rational conj(const Rational& r) { return r; }
inline Gauss conj(const Gauss& g) { return g.conj(); }

} // namespace mhs
