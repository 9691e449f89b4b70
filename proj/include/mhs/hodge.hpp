#pragma once

// Filtrations, mixed Hodge structures, Tate twists and skew pairings.
//
// A structure is stored on its complexification C^d.  The real (or rational)
// form is the fixed locus of the antilinear involution x -> conj_matrix * x̄.
// Tate twists follow the 2*pi*i normalisation: the real form of H(m) is
// (2*pi*i)^m H_R, so conj on H(m) is (-1)^m conj on H.

#include "mhs/linalg.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mhs {

/// W_k = 0 for k < lo, pieces[k - lo] for lo <= k <= hi, ambient above hi.
class IncreasingFiltration {
  public:
    IncreasingFiltration() = default;
    IncreasingFiltration(std::size_t ambient, int lo, std::vector<GSpace> pieces)
        : ambient_(ambient), lo_(lo), pieces_(std::move(pieces))
    {
        for (const auto& p : pieces_)
            if (p.ambient() != ambient_)
                throw std::invalid_argument("filtration piece has wrong ambient dimension");
    }

    /// Single jump: W_k = 0 for k < at, ambient for k >= at.
    static IncreasingFiltration trivial(std::size_t ambient, int at)
    {
        return IncreasingFiltration(ambient, at, {GSpace::full(ambient)});
    }

    std::size_t ambient() const { return ambient_; }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(pieces_.size()) - 1; }
    const std::vector<GSpace>& pieces() const { return pieces_; }

    GSpace at(int k) const
    {
        if (k < lo_)
            return GSpace::zero(ambient_);
        if (k > hi())
            return GSpace::full(ambient_);
        return pieces_[static_cast<std::size_t>(k - lo_)];
    }

    /// First index where monotonicity fails (W_{k-1} not inside W_k).
    std::optional<int> first_violation() const
    {
        for (int k = lo_; k <= hi() + 1; ++k)
            if (!at(k).contains(at(k - 1)))
                return k;
        return std::nullopt;
    }

    /// Indices k with W_k != W_{k-1}.
    std::vector<int> jumps() const
    {
        std::vector<int> j;
        for (int k = lo_; k <= hi() + 1; ++k)
            if (!(at(k) == at(k - 1)))
                j.push_back(k);
        return j;
    }

    IncreasingFiltration shifted(int by) const { return IncreasingFiltration(ambient_, lo_ + by, pieces_); }

    /// Drops redundant leading zeros and trailing full pieces.
    IncreasingFiltration normalized() const
    {
        auto j = jumps();
        if (j.empty())
            return trivial(ambient_, 0);
        std::vector<GSpace> p;
        for (int k = j.front(); k <= j.back(); ++k)
            p.push_back(at(k));
        return IncreasingFiltration(ambient_, j.front(), std::move(p));
    }

    friend bool operator==(const IncreasingFiltration& a, const IncreasingFiltration& b)
    {
        if (a.ambient_ != b.ambient_)
            return false;
        int lo = std::min(a.lo_, b.lo_) - 1, hi = std::max(a.hi(), b.hi()) + 1;
        for (int k = lo; k <= hi; ++k)
            if (!(a.at(k) == b.at(k)))
                return false;
        return true;
    }

  private:
    std::size_t ambient_ = 0;
    int lo_ = 0;
    std::vector<GSpace> pieces_;
};

/// F^p = ambient for p < lo, pieces[p - lo] for lo <= p <= hi, 0 above hi.
class DecreasingFiltration {
  public:
    DecreasingFiltration() = default;
    DecreasingFiltration(std::size_t ambient, int lo, std::vector<GSpace> pieces)
        : ambient_(ambient), lo_(lo), pieces_(std::move(pieces))
    {
        for (const auto& p : pieces_)
            if (p.ambient() != ambient_)
                throw std::invalid_argument("filtration piece has wrong ambient dimension");
    }

    /// F^p = ambient for p <= at, 0 above.
    static DecreasingFiltration trivial(std::size_t ambient, int at)
    {
        return DecreasingFiltration(ambient, at, {GSpace::full(ambient)});
    }

    std::size_t ambient() const { return ambient_; }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(pieces_.size()) - 1; }
    const std::vector<GSpace>& pieces() const { return pieces_; }

    GSpace at(int p) const
    {
        if (p < lo_)
            return GSpace::full(ambient_);
        if (p > hi())
            return GSpace::zero(ambient_);
        return pieces_[static_cast<std::size_t>(p - lo_)];
    }

    std::optional<int> first_violation() const
    {
        for (int p = lo_; p <= hi() + 1; ++p)
            if (!at(p - 1).contains(at(p)))
                return p;
        return std::nullopt;
    }

    DecreasingFiltration shifted(int by) const { return DecreasingFiltration(ambient_, lo_ + by, pieces_); }

    friend bool operator==(const DecreasingFiltration& a, const DecreasingFiltration& b)
    {
        if (a.ambient_ != b.ambient_)
            return false;
        int lo = std::min(a.lo_, b.lo_) - 1, hi = std::max(a.hi(), b.hi()) + 1;
        for (int p = lo; p <= hi; ++p)
            if (!(a.at(p) == b.at(p)))
                return false;
        return true;
    }

  private:
    std::size_t ambient_ = 0;
    int lo_ = 0;
    std::vector<GSpace> pieces_;
};

/// Image of each piece under a linear map (used for quotients).
inline IncreasingFiltration map_filtration(const GMatrix& m, const IncreasingFiltration& w)
{
    std::vector<GSpace> p;
    for (int k = w.lo(); k <= w.hi(); ++k)
        p.push_back(apply(m, w.at(k)));
    return IncreasingFiltration(m.rows(), w.lo(), std::move(p));
}

inline DecreasingFiltration map_filtration(const GMatrix& m, const DecreasingFiltration& f)
{
    std::vector<GSpace> p;
    for (int k = f.lo(); k <= f.hi(); ++k)
        p.push_back(apply(m, f.at(k)));
    return DecreasingFiltration(m.rows(), f.lo(), std::move(p));
}

/// Preimage of each piece intersected with a subspace, in the subspace's
/// coordinates (embedding columns span the subspace).
inline IncreasingFiltration pull_filtration(const GMatrix& embedding, const IncreasingFiltration& w)
{
    std::vector<GSpace> p;
    for (int k = w.lo(); k <= w.hi(); ++k)
        p.push_back(preimage(embedding, w.at(k)));
    return IncreasingFiltration(embedding.cols(), w.lo(), std::move(p));
}

inline DecreasingFiltration pull_filtration(const GMatrix& embedding, const DecreasingFiltration& f)
{
    std::vector<GSpace> p;
    for (int k = f.lo(); k <= f.hi(); ++k)
        p.push_back(preimage(embedding, f.at(k)));
    return DecreasingFiltration(embedding.cols(), f.lo(), std::move(p));
}

struct MixedHodgeStructure {
    std::size_t dim = 0;
    GMatrix conj_matrix; // conj(x) = conj_matrix * x̄
    IncreasingFiltration W;
    DecreasingFiltration F;
    int twist = 0;

    GVec conj(const GVec& x) const { return conj_matrix * mhs::conj(x); }

    GSpace conj(const GSpace& s) const
    {
        std::vector<GVec> v;
        for (const auto& b : s.basis_vectors())
            v.push_back(conj(b));
        return GSpace::span(dim, v);
    }

    bool is_real(const GVec& x) const { return conj(x) == x; }
    bool is_real(const GSpace& s) const { return conj(s) == s; }
};

/// Sub-structure on a subspace S (assumed stable under conj; filtrations induced).
inline MixedHodgeStructure restrict_to(const MixedHodgeStructure& m, const GSpace& s)
{
    GMatrix e = s.embedding();
    MixedHodgeStructure r;
    r.dim = s.dim();
    r.conj_matrix = s.coordinate_map() * m.conj_matrix * e.conj();
    r.W = pull_filtration(e, m.W);
    r.F = pull_filtration(e, m.F);
    r.twist = m.twist;
    return r;
}

/// Quotient by a sub-structure A (assumed conj-stable).
inline MixedHodgeStructure quotient_by(const MixedHodgeStructure& m, const GSpace& a, QuotientMap<Gauss>* out = nullptr)
{
    auto q = quotient_map(a, GSpace::full(m.dim));
    MixedHodgeStructure r;
    r.dim = q.dim();
    r.conj_matrix = q.map * m.conj_matrix * q.section.conj();
    r.W = map_filtration(q.map, m.W);
    r.F = map_filtration(q.map, m.F);
    r.twist = m.twist;
    if (out)
        *out = std::move(q);
    return r;
}

/// Subquotient B/A for A ⊆ B ⊆ M, with the quotient map from M's coordinates.
struct Subquotient {
    MixedHodgeStructure structure;
    QuotientMap<Gauss> projection; // defined on M's coordinates; meaningful on B
};

inline Subquotient subquotient(const MixedHodgeStructure& m, const GSpace& a, const GSpace& b)
{
    auto q = quotient_map(a, b);
    MixedHodgeStructure r;
    r.dim = q.dim();
    r.conj_matrix = q.map * m.conj_matrix * q.section.conj();
    std::vector<GSpace> wp;
    for (int k = m.W.lo(); k <= m.W.hi(); ++k)
        wp.push_back(apply(q.map, intersect(m.W.at(k), b)));
    r.W = IncreasingFiltration(r.dim, m.W.lo(), std::move(wp));
    std::vector<GSpace> fp;
    for (int p = m.F.lo(); p <= m.F.hi(); ++p)
        fp.push_back(apply(q.map, intersect(m.F.at(p), b)));
    r.F = DecreasingFiltration(r.dim, m.F.lo(), std::move(fp));
    r.twist = m.twist;
    return {std::move(r), std::move(q)};
}

/// Gr^W_k with the induced Hodge filtration.
inline MixedHodgeStructure gr_W(const MixedHodgeStructure& m, int k)
{
    auto sq = subquotient(m, m.W.at(k - 1), m.W.at(k));
    sq.structure.W = IncreasingFiltration::trivial(sq.structure.dim, k);
    return sq.structure;
}

inline Subquotient gr_W_with_projection(const MixedHodgeStructure& m, int k)
{
    auto sq = subquotient(m, m.W.at(k - 1), m.W.at(k));
    sq.structure.W = IncreasingFiltration::trivial(sq.structure.dim, k);
    return sq;
}

struct MhsVerdict {
    bool ok = true;
    int weight = 0;
    int level = 0;
    GVec witness;
    std::string reason;
    explicit operator bool() const { return ok; }
};

/// Passes iff W is defined over the real form, both filtrations are monotone,
/// and every Gr^W_k is pure of weight k: F^p ⊕ conj F^{k-p+1} = Gr^W_k.
inline MhsVerdict check_mhs(const MixedHodgeStructure& m)
{
    MhsVerdict v;
    auto fail = [&](int k, int p, GVec w, std::string why) {
        v.ok = false;
        v.weight = k;
        v.level = p;
        v.witness = std::move(w);
        v.reason = std::move(why);
        return v;
    };
    if (m.dim == 0)
        return v;
    if (auto k = m.W.first_violation())
        return fail(*k, 0, {}, "weight filtration is not increasing at index " + std::to_string(*k));
    if (auto p = m.F.first_violation()) {
        // locate the weight where the offending vector first appears
        GSpace bad = m.F.at(*p);
        GSpace prev = m.F.at(*p - 1);
        for (int k = m.W.lo(); k <= m.W.hi() + 1; ++k) {
            GSpace piece = intersect(bad, m.W.at(k));
            for (const auto& b : piece.basis_vectors())
                if (!prev.contains(b))
                    return fail(k, *p, b, "Hodge filtration is not decreasing at level " + std::to_string(*p));
        }
        return fail(0, *p, {}, "Hodge filtration is not decreasing at level " + std::to_string(*p));
    }
    for (int k = m.W.lo(); k <= m.W.hi(); ++k)
        if (!m.is_real(m.W.at(k)))
            return fail(k, 0, {}, "W_" + std::to_string(k) + " is not defined over the real form");
    for (int k = m.W.lo(); k <= m.W.hi(); ++k) {
        auto sq = gr_W_with_projection(m, k);
        const auto& g = sq.structure;
        if (g.dim == 0)
            continue;
        int plo = std::min(g.F.lo(), k + 1 - g.F.hi()) - 1;
        int phi = std::max(g.F.hi(), k + 1 - g.F.lo()) + 1;
        for (int p = plo; p <= phi; ++p) {
            GSpace fp = g.F.at(p);
            GSpace cf = g.conj(g.F.at(k - p + 1));
            GSpace meet = intersect(fp, cf);
            if (!meet.is_zero())
                return fail(k, p, sq.projection.section * meet.basis().row(0),
                            "F^p and conj F^(k-p+1) meet on Gr^W_k");
            if (fp.dim() + cf.dim() != g.dim) {
                GSpace s = sum(fp, cf);
                for (std::size_t i = 0; i < g.dim; ++i) {
                    auto e = unit_vector<Gauss>(g.dim, i);
                    if (!s.contains(e))
                        return fail(k, p, sq.projection.section * e, "F^p + conj F^(k-p+1) misses part of Gr^W_k");
                }
            }
        }
    }
    return v;
}

/// M(m): W shifts by -2m, F by -m, real form multiplied by (2*pi*i)^m.
inline MixedHodgeStructure tate_twist(const MixedHodgeStructure& m, int by)
{
    MixedHodgeStructure r = m;
    r.W = m.W.shifted(-2 * by);
    r.F = m.F.shifted(-by);
    if (by % 2 != 0)
        r.conj_matrix = Gauss(-1) * m.conj_matrix;
    r.twist = m.twist + by;
    return r;
}

inline MixedHodgeStructure direct_sum(const std::vector<MixedHodgeStructure>& parts)
{
    MixedHodgeStructure r;
    std::vector<GMatrix> conjs;
    int wlo = 0, whi = 0, flo = 0, fhi = 0;
    bool first = true;
    for (const auto& p : parts) {
        r.dim += p.dim;
        conjs.push_back(p.conj_matrix);
        if (first) {
            wlo = p.W.lo(), whi = p.W.hi(), flo = p.F.lo(), fhi = p.F.hi();
            first = false;
        } else {
            wlo = std::min(wlo, p.W.lo());
            whi = std::max(whi, p.W.hi());
            flo = std::min(flo, p.F.lo());
            fhi = std::max(fhi, p.F.hi());
        }
    }
    r.conj_matrix = block_diagonal(conjs);
    auto stack = [&](auto piece_of) {
        std::vector<GVec> v;
        std::size_t off = 0;
        for (const auto& p : parts) {
            for (const auto& b : piece_of(p).basis_vectors()) {
                GVec e(r.dim, Gauss(0));
                for (std::size_t i = 0; i < b.size(); ++i)
                    e[off + i] = b[i];
                v.push_back(std::move(e));
            }
            off += p.dim;
        }
        return GSpace::span(r.dim, v);
    };
    std::vector<GSpace> wp, fp;
    for (int k = wlo; k <= whi; ++k)
        wp.push_back(stack([k](const MixedHodgeStructure& p) { return p.W.at(k); }));
    for (int q = flo; q <= fhi; ++q)
        fp.push_back(stack([q](const MixedHodgeStructure& p) { return p.F.at(q); }));
    r.W = IncreasingFiltration(r.dim, wlo, std::move(wp));
    r.F = DecreasingFiltration(r.dim, flo, std::move(fp));
    r.twist = parts.empty() ? 0 : parts.front().twist;
    return r;
}

/// Change of coordinates x_new = P x_old.
inline MixedHodgeStructure change_basis(const MixedHodgeStructure& m, const GMatrix& p, const GMatrix& p_inv)
{
    MixedHodgeStructure r = m;
    r.conj_matrix = p * m.conj_matrix * p_inv.conj();
    r.W = map_filtration(p, m.W);
    r.F = map_filtration(p, m.F);
    return r;
}

/// Real vectors spanning a conj-stable subspace.
inline std::vector<GVec> real_basis(const MixedHodgeStructure& m, const GSpace& s)
{
    std::vector<GVec> out;
    auto add = [&](const GVec& v) {
        if (is_zero_vector(v))
            return;
        if (!GSpace::span(m.dim, out).contains(v))
            out.push_back(v);
    };
    Gauss half(Rational(1, 2));
    Gauss half_i_inv = Gauss(Rational(1, 2)) * Gauss::i().inverse();
    for (const auto& b : s.basis_vectors()) {
        GVec cb = m.conj(b);
        if (cb == b) {
            add(b);
            continue;
        }
        add(scale(half, b + cb));
        add(scale(half_i_inv, b - cb));
    }
    return out;
}

/// Hom_MHS(Q, M): real vectors in W_0 whose complexification lies in F^0.
struct HodgeClasses {
    GSpace span;              // complex span
    std::vector<GVec> basis;  // real basis of the solution space
    std::size_t dim() const { return span.dim(); }
};

inline HodgeClasses hom_from_Q(const MixedHodgeStructure& m)
{
    if (auto v = check_mhs(m); !v)
        throw std::invalid_argument("hom_from_Q: not a mixed Hodge structure (" + v.reason + ")");
    GSpace f0 = m.F.at(0);
    GSpace s = intersect(intersect(m.W.at(0), f0), m.conj(f0));
    return {s, real_basis(m, s)};
}

struct Pairing {
    GMatrix form; // <x, y> = x^T form y, normalised by (2*pi*i)^{-1}
    bool skew = true;
    int weight = -1;

    Gauss operator()(const GVec& x, const GVec& y) const
    {
        GVec fy = form * y;
        Gauss s(0);
        for (std::size_t i = 0; i < x.size(); ++i)
            s += x[i] * fy[i];
        return s;
    }
};

struct PairingVerdict {
    bool ok = true;
    std::string reason;
    explicit operator bool() const { return ok; }
};

/// Skew symmetry, reality (<conj x, conj y> = conj <x, y>) and
/// <W_k, W_l> = 0 for k + l < 2*weight.
inline PairingVerdict check_pairing(const Pairing& q, const MixedHodgeStructure& m)
{
    if (q.form.rows() != m.dim || q.form.cols() != m.dim)
        return {false, "pairing has wrong size"};
    if (q.skew && !(q.form.transpose() == Gauss(-1) * q.form))
        return {false, "pairing is not skew-symmetric"};
    // conj_matrix^T form conj_matrix = conj(form)
    if (!(m.conj_matrix.transpose() * q.form * m.conj_matrix == q.form.conj()))
        return {false, "pairing is not real on the real form"};
    for (int k = m.W.lo(); k <= m.W.hi(); ++k)
        for (int l = m.W.lo(); l <= m.W.hi(); ++l) {
            if (k + l >= 2 * q.weight)
                continue;
            for (const auto& x : m.W.at(k).basis_vectors())
                for (const auto& y : m.W.at(l).basis_vectors())
                    if (!q(x, y).is_zero())
                        return {false, "W_" + std::to_string(k) + " and W_" + std::to_string(l) + " are not orthogonal"};
        }
    return {};
}

} // namespace mhs
