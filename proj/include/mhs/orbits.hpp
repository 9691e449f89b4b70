#pragma once

// Nilpotent families, monodromy and relative monodromy weight filtrations,
// and validation of pure and mixed nilpotent orbits.

#include "mhs/hodge.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace mhs {

namespace detail {

inline unsigned nilpotency_index(const GMatrix& n)
{
    // smallest m with n^m = 0
    GMatrix p = GMatrix::identity(n.rows());
    for (unsigned m = 0; m <= n.rows(); ++m) {
        if (p.is_zero())
            return m;
        p = p * n;
    }
    throw std::invalid_argument("matrix is not nilpotent");
}

} // namespace detail

/// Monodromy weight filtration of a nilpotent N centred at `center`:
/// N M_k ⊆ M_{k-2} and N^j : Gr_{c+j} -> Gr_{c-j} is an isomorphism.
/// Built recursively from Ker N^m and Im N^m, m the top nonzero power.
inline IncreasingFiltration monodromy_filtration(const GMatrix& n, int center)
{
    std::size_t d = n.rows();
    if (n.cols() != d)
        throw std::invalid_argument("monodromy_filtration: matrix is not square");
    unsigned idx = detail::nilpotency_index(n);
    if (idx <= 1)
        return IncreasingFiltration::trivial(d, center);
    int m = static_cast<int>(idx) - 1;
    GMatrix nm = power(n, static_cast<unsigned>(m));
    GSpace ker = kernel(nm), img = image(nm);
    auto q = quotient_map(img, ker);
    std::vector<GSpace> pieces;
    // indices center-m .. center+m-1 ; M_{center+m} = all
    IncreasingFiltration inner;
    if (q.dim() > 0)
        inner = monodromy_filtration(q.map * n * q.section, center);
    for (int k = center - m; k <= center + m - 1; ++k) {
        if (k == center - m)
            pieces.push_back(img);
        else if (k == center + m - 1)
            pieces.push_back(ker);
        else if (q.dim() == 0)
            pieces.push_back(img);
        else
            pieces.push_back(intersect(ker, preimage(q.map, inner.at(k))));
    }
    return IncreasingFiltration(d, center - m, std::move(pieces)).normalized();
}

struct FiltrationCheck {
    bool ok = true;
    std::string reason;
    explicit operator bool() const { return ok; }
};

/// Checks the two characterising properties of the monodromy filtration.
inline FiltrationCheck verify_monodromy_filtration(const GMatrix& n, const IncreasingFiltration& m, int center)
{
    if (auto k = m.first_violation())
        return {false, "not increasing at " + std::to_string(*k)};
    for (int k = m.lo() - 1; k <= m.hi() + 2; ++k)
        if (!m.at(k - 2).contains(apply(n, m.at(k))))
            return {false, "N M_" + std::to_string(k) + " not inside M_" + std::to_string(k - 2)};
    int span = std::max(std::abs(m.lo() - center), std::abs(m.hi() - center)) + 1;
    for (int j = 0; j <= span; ++j) {
        auto top = quotient_map(m.at(center + j - 1), m.at(center + j));
        auto bot = quotient_map(m.at(center - j - 1), m.at(center - j));
        if (top.dim() != bot.dim())
            return {false, "Gr_" + std::to_string(center + j) + " and Gr_" + std::to_string(center - j) + " differ in dimension"};
        if (top.dim() == 0)
            continue;
        GMatrix induced = bot.map * power(n, static_cast<unsigned>(j)) * top.section;
        if (rank(induced) != top.dim())
            return {false, "N^" + std::to_string(j) + " is not an isomorphism Gr_" + std::to_string(center + j) + " -> Gr_" +
                               std::to_string(center - j)};
    }
    return {};
}

namespace detail {

inline IncreasingFiltration restrict_filtration(const IncreasingFiltration& w, const GSpace& s)
{
    return pull_filtration(s.embedding(), w);
}

/// Filtration induced on Gr^{W'}_j = W'_j / W'_{j-1} in quotient coordinates.
inline IncreasingFiltration induced_on_graded(const IncreasingFiltration& m, const QuotientMap<Gauss>& q, const GSpace& big)
{
    std::vector<GSpace> p;
    for (int k = m.lo(); k <= m.hi(); ++k)
        p.push_back(apply(q.map, intersect(m.at(k), big)));
    return IncreasingFiltration(q.dim(), m.lo(), std::move(p));
}

} // namespace detail

/// Checks that m induces on every Gr^{W'}_j the monodromy filtration of the
/// induced nilpotent centred at j, and that N M_k ⊆ M_{k-2}.
inline FiltrationCheck verify_relative_filtration(const GMatrix& n, const IncreasingFiltration& wp, const IncreasingFiltration& m)
{
    if (auto k = m.first_violation())
        return {false, "not increasing at " + std::to_string(*k)};
    for (int k = m.lo() - 1; k <= m.hi() + 2; ++k)
        if (!m.at(k - 2).contains(apply(n, m.at(k))))
            return {false, "N M_" + std::to_string(k) + " not inside M_" + std::to_string(k - 2)};
    for (int j : wp.jumps()) {
        GSpace big = wp.at(j), small = wp.at(j - 1);
        auto q = quotient_map(small, big);
        GMatrix gn = q.map * n * q.section;
        auto expected = monodromy_filtration(gn, j);
        auto induced = detail::induced_on_graded(m, q, big);
        if (!(expected == induced))
            return {false, "induced filtration on Gr^W'_" + std::to_string(j) + " is not the monodromy filtration"};
    }
    return {};
}

/// Relative monodromy filtration of N with respect to W' (N preserves W'),
/// or nullopt when none exists.  The candidate lifts the graded filtrations
/// through primitive vectors and is verified before being returned.
inline std::optional<IncreasingFiltration> relative_monodromy_filtration(const GMatrix& n, const IncreasingFiltration& wp)
{
    std::size_t d = n.rows();
    for (int k = wp.lo(); k <= wp.hi(); ++k)
        if (!wp.at(k).contains(apply(n, wp.at(k))))
            throw std::invalid_argument("relative_monodromy_filtration: N does not preserve W'");
    auto jumps = wp.jumps();
    if (jumps.empty())
        return IncreasingFiltration::trivial(d, 0);
    int b = jumps.back();
    if (jumps.size() == 1)
        return monodromy_filtration(n, b);

    GSpace sub = wp.at(b - 1);
    GMatrix emb = sub.embedding();
    GMatrix sel = sub.coordinate_map();
    auto inner = relative_monodromy_filtration(sel * n * emb, detail::restrict_filtration(wp, sub));
    if (!inner)
        return std::nullopt;
    // inner filtration pushed into ambient coordinates
    auto lower = [&](int k) { return apply(emb, inner->at(k)); };

    auto q = quotient_map(sub, GSpace::full(d));
    GMatrix gn = q.map * n * q.section;
    auto top = monodromy_filtration(gn, b);

    std::vector<std::pair<int, GVec>> lifted; // (weight b+l, lift)
    int lmax = std::max(0, top.hi() - b);
    for (int l = lmax; l >= 0; --l) {
        GMatrix gpow = power(gn, static_cast<unsigned>(l + 1));
        GSpace kern = kernel(gpow);
        GSpace hi_part = intersect(kern, top.at(b + l));
        GSpace lo_part = intersect(kern, top.at(b + l - 1));
        std::vector<GVec> chosen = lo_part.basis_vectors();
        GMatrix npow = power(n, static_cast<unsigned>(l + 1));
        GSpace target = lower(b - l - 2);
        for (const auto& v : hi_part.basis_vectors()) {
            if (GSpace::span(gn.rows(), chosen).contains(v))
                continue;
            chosen.push_back(v);
            GVec x0 = q.section * v;
            // find a in sub with npow (x0 + a) in target
            std::vector<GVec> cols;
            for (std::size_t c = 0; c < emb.cols(); ++c)
                cols.push_back(npow * emb.col(c));
            for (const auto& t : target.basis_vectors())
                cols.push_back(t);
            GVec rhs = scale(Gauss(-1), npow * x0);
            GVec x = x0;
            if (!is_zero_vector(rhs)) {
                if (cols.empty())
                    return std::nullopt;
                auto sol = solve(GMatrix::from_columns(cols, d), rhs);
                if (!sol)
                    return std::nullopt;
                GVec a(emb.cols());
                for (std::size_t c = 0; c < emb.cols(); ++c)
                    a[c] = (*sol)[c];
                x = x0 + emb * a;
            }
            lifted.emplace_back(b + l, x);
        }
    }

    int lo = std::min(inner->lo(), top.lo()) - 1;
    int hi = std::max(inner->hi(), top.hi()) + 1;
    std::vector<GSpace> pieces;
    for (int k = lo; k <= hi; ++k) {
        std::vector<GVec> gens = lower(k).basis_vectors();
        for (const auto& [w, x] : lifted) {
            GVec y = x;
            for (int i = 0; w - 2 * i >= lo - 2 && i <= static_cast<int>(d); ++i) {
                if (w - 2 * i <= k)
                    gens.push_back(y);
                y = n * y;
            }
        }
        pieces.push_back(GSpace::span(d, gens));
    }
    IncreasingFiltration m = IncreasingFiltration(d, lo, std::move(pieces)).normalized();
    if (!verify_relative_filtration(n, wp, m))
        return std::nullopt;
    return m;
}

/// Commuting nilpotent endomorphisms N_i : H -> H(-1).
struct NilpotentFamily {
    std::vector<GMatrix> N;

    std::size_t size() const { return N.size(); }

    GMatrix partial_sum(unsigned mask) const
    {
        GMatrix s(N.at(0).rows(), N.at(0).cols());
        for (std::size_t i = 0; i < N.size(); ++i)
            if (mask & (1u << i))
                s += N[i];
        return s;
    }

    /// Empty string when valid, otherwise the first problem found.
    std::string problem(std::size_t dim) const
    {
        for (std::size_t i = 0; i < N.size(); ++i) {
            if (N[i].rows() != dim || N[i].cols() != dim)
                return "N_" + std::to_string(i + 1) + " has wrong size";
            if (!is_nilpotent(N[i]))
                return "N_" + std::to_string(i + 1) + " is not nilpotent";
        }
        for (std::size_t i = 0; i < N.size(); ++i)
            for (std::size_t j = i + 1; j < N.size(); ++j)
                if (!(N[i] * N[j] == N[j] * N[i]))
                    return "N_" + std::to_string(i + 1) + " and N_" + std::to_string(j + 1) + " do not commute";
        return {};
    }

    /// The same N on every one of n variables (pullback along t_1...t_n).
    static NilpotentFamily pullback(const GMatrix& n, int count)
    {
        return NilpotentFamily{std::vector<GMatrix>(static_cast<std::size_t>(count), n)};
    }
};

struct NilpotentOrbit {
    MixedHodgeStructure limit;
    NilpotentFamily family;
    std::optional<Pairing> pairing;
    int weight = -1;
};

struct OrbitVerdict {
    bool ok = true;
    char clause = 0; // 'a'..'d'
    std::string reason;
    GVec witness;
    explicit operator bool() const { return ok; }
};

/// Griffiths transversality N F^p ⊆ F^{p-1}; returns a witness on failure.
inline std::optional<GVec> transversality_witness(const GMatrix& n, const DecreasingFiltration& f)
{
    for (int p = f.lo() - 1; p <= f.hi() + 1; ++p) {
        GSpace target = f.at(p - 1);
        for (const auto& x : f.at(p).basis_vectors())
            if (!target.contains(n * x))
                return x;
    }
    return std::nullopt;
}

/// (a) limit is a MHS, (b) Griffiths transversality, (c) every nonempty
/// partial sum of the N_i has monodromy filtration W centred at the weight,
/// (d) pairing compatibility and Hodge-Riemann orthogonality.
inline OrbitVerdict check_pure_nilpotent_orbit(const NilpotentOrbit& orbit)
{
    const auto& h = orbit.limit;
    if (h.dim == 0)
        return {};
    if (auto p = orbit.family.problem(h.dim); !p.empty())
        return {false, 'c', p, {}};
    if (auto v = check_mhs(h); !v)
        return {false, 'a', "limit is not a mixed Hodge structure: " + v.reason, v.witness};
    for (std::size_t i = 0; i < orbit.family.size(); ++i)
        if (auto w = transversality_witness(orbit.family.N[i], h.F))
            return {false, 'b', "N_" + std::to_string(i + 1) + " violates Griffiths transversality", *w};
    unsigned subsets = 1u << orbit.family.size();
    for (unsigned mask = 1; mask < subsets; ++mask) {
        auto m = monodromy_filtration(orbit.family.partial_sum(mask), orbit.weight);
        if (!(m == h.W))
            return {false, 'c', "monodromy filtration of a partial sum differs from W (subset mask " + std::to_string(mask) + ")", {}};
    }
    if (orbit.pairing) {
        const auto& q = *orbit.pairing;
        if (auto v = check_pairing(q, h); !v)
            return {false, 'd', v.reason, {}};
        for (std::size_t i = 0; i < orbit.family.size(); ++i) {
            const auto& n = orbit.family.N[i];
            if (!(n.transpose() * q.form + q.form * n).is_zero())
                return {false, 'd', "pairing is not infinitesimally invariant under N_" + std::to_string(i + 1), {}};
        }
        for (int p = h.F.lo() - 1; p <= h.F.hi() + 1; ++p) {
            int other = orbit.weight - p + 1;
            for (const auto& x : h.F.at(p).basis_vectors())
                for (const auto& y : h.F.at(other).basis_vectors())
                    if (!q(x, y).is_zero())
                        return {false, 'd', "F^" + std::to_string(p) + " and F^" + std::to_string(other) + " are not orthogonal", x};
        }
    }
    return {};
}

/// Mixed nilpotent orbit ((H, W'); N_i): relative filtrations exist for each
/// N_i, Griffiths transversality holds and every Gr^{W'}_k is a pure orbit.
struct MixedNilpotentOrbit {
    MixedHodgeStructure structure; // W here is the relative (limit) weight filtration
    IncreasingFiltration relative_to;
    NilpotentFamily family;
};

inline OrbitVerdict check_mixed_nilpotent_orbit(const MixedNilpotentOrbit& m)
{
    const auto& h = m.structure;
    if (auto p = m.family.problem(h.dim); !p.empty())
        return {false, 'c', p, {}};
    for (std::size_t i = 0; i < m.family.size(); ++i) {
        for (int k = m.relative_to.lo(); k <= m.relative_to.hi(); ++k)
            if (!m.relative_to.at(k).contains(apply(m.family.N[i], m.relative_to.at(k))))
                return {false, 'i', "N_" + std::to_string(i + 1) + " does not preserve W'", {}};
        if (!relative_monodromy_filtration(m.family.N[i], m.relative_to))
            return {false, 'i', "no relative monodromy filtration for N_" + std::to_string(i + 1), {}};
        if (auto w = transversality_witness(m.family.N[i], h.F))
            return {false, 'b', "N_" + std::to_string(i + 1) + " violates Griffiths transversality", *w};
    }
    for (int j : m.relative_to.jumps()) {
        auto sq = subquotient(h, m.relative_to.at(j - 1), m.relative_to.at(j));
        NilpotentOrbit piece;
        piece.limit = sq.structure;
        piece.weight = j;
        for (const auto& n : m.family.N)
            piece.family.N.push_back(sq.projection.map * n * sq.projection.section);
        piece.limit.W = monodromy_filtration(piece.family.partial_sum((1u << piece.family.size()) - 1), j);
        if (auto v = check_pure_nilpotent_orbit(piece); !v)
            return {false, 'i', "Gr^W'_" + std::to_string(j) + " is not a pure nilpotent orbit: " + v.reason, {}};
    }
    if (auto v = check_mhs(h); !v)
        return {false, 'a', "limit is not a mixed Hodge structure: " + v.reason, v.witness};
    return {};
}

// ---------------------------------------------------------------------------
// Four-vector normal form for a weight -1 orbit with dim Im N = 1.

struct Prop21Basis {
    std::array<GVec, 4> u;
    Gauss a;             // u_2 + a u_3 ∈ F^0 W_0
    GSpace complement;   // orthogonal complement of span(u_1..u_4)
};

struct BasisVerdict {
    std::vector<int> violated; // condition numbers 1..5
    std::vector<std::string> reasons;
    bool ok() const { return violated.empty(); }
    explicit operator bool() const { return ok(); }
};

namespace detail {

inline bool has_type(const MixedHodgeStructure& h, int weight, const GVec& x, int p, int q)
{
    auto sq = gr_W_with_projection(h, weight);
    GVec cls = sq.projection.map * x;
    if (is_zero_vector(cls))
        return false;
    const auto& g = sq.structure;
    return g.F.at(p).contains(cls) && g.conj(g.F.at(q)).contains(cls);
}

} // namespace detail

/// Checks conditions (1) memberships, (2) conjugation and N relations,
/// (3) Hodge types on Gr^W_{-1}, (4) u_2 + a u_3 ∈ F^0 W_0, (5) pairing pattern.
inline BasisVerdict validate_prop21_basis(const MixedHodgeStructure& h, const GMatrix& n, const Pairing& q,
                                          const std::array<GVec, 4>& u, const Gauss& a)
{
    BasisVerdict v;
    auto flag = [&](int c, std::string why) {
        if (v.violated.empty() || v.violated.back() != c)
            v.violated.push_back(c);
        v.reasons.push_back(std::move(why));
    };
    if (GSpace::span(h.dim, {u[0], u[1], u[2], u[3]}).dim() != 4)
        flag(1, "u_1..u_4 are linearly dependent");
    if (!intersect(h.F.at(1), h.W.at(-1)).contains(u[0]))
        flag(1, "u_1 not in F^1 W_-1");
    if (!h.W.at(0).contains(u[1]) || !h.is_real(u[1]))
        flag(1, "u_2 not in W_0 H_R");
    if (!h.W.at(-2).contains(u[2]))
        flag(1, "u_3 not in W_-2");
    if (!intersect(h.F.at(-2), h.W.at(-1)).contains(u[3]))
        flag(1, "u_4 not in F^-2 W_-1");

    if (!(h.conj(u[0]) == u[3]))
        flag(2, "conj u_1 != u_4");
    if (!(h.conj(u[1]) == u[1]))
        flag(2, "conj u_2 != u_2");
    if (!(h.conj(u[2]) == scale(Gauss(-1), u[2])))
        flag(2, "conj u_3 != -u_3");
    if (!(n * u[1] == u[2]))
        flag(2, "N u_2 != u_3");
    for (int j : {0, 2, 3})
        if (!is_zero_vector(n * u[j]))
            flag(2, "N u_" + std::to_string(j + 1) + " != 0");

    if (!detail::has_type(h, -1, u[0], 1, -2))
        flag(3, "[u_1] is not of type (1,-2)");
    if (!detail::has_type(h, -1, u[3], -2, 1))
        flag(3, "[u_4] is not of type (-2,1)");

    if (!intersect(h.F.at(0), h.W.at(0)).contains(u[1] + scale(a, u[2])))
        flag(4, "u_2 + a u_3 not in F^0 W_0");

    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            bool allowed = (i + j == 3); // {1,4} or {2,3}
            if (!allowed && !q(u[i], u[j]).is_zero())
                flag(5, "<u_" + std::to_string(i + 1) + ",u_" + std::to_string(j + 1) + "> != 0");
        }
    std::sort(v.violated.begin(), v.violated.end());
    v.violated.erase(std::unique(v.violated.begin(), v.violated.end()), v.violated.end());
    return v;
}

/// Produces u_1..u_4 and a for a weight -1 orbit with dim Im N = 1 and
/// Gr_F^1 != 0.  Throws std::invalid_argument naming the failed hypothesis.
inline Prop21Basis construct_prop21_basis(const NilpotentOrbit& orbit)
{
    const auto& h = orbit.limit;
    if (orbit.family.size() == 0)
        throw std::invalid_argument("orbit has no nilpotent operator");
    const GMatrix& n = orbit.family.N[0];
    for (const auto& m : orbit.family.N)
        if (!(m == n))
            throw std::invalid_argument("operators differ; expected a single N (or its pullback)");
    if (orbit.weight != -1)
        throw std::invalid_argument("orbit weight must be -1");
    if (rank(n) != 1)
        throw std::invalid_argument("dim Im N must be 1");
    if (h.F.at(1) == h.F.at(2))
        throw std::invalid_argument("Gr_F^1 vanishes");
    if (!orbit.pairing)
        throw std::invalid_argument("a polarising pairing is required");
    const Pairing& q = *orbit.pairing;

    // u_1: F^1 W_-1 with class of type (1,-2)
    auto gr = gr_W_with_projection(h, -1);
    GSpace f1w = intersect(h.F.at(1), h.W.at(-1));
    std::optional<GVec> u1;
    for (const auto& x : f1w.basis_vectors()) {
        GVec cls = gr.projection.map * x;
        if (!is_zero_vector(cls) && gr.structure.conj(gr.structure.F.at(-2)).contains(cls)) {
            u1 = x;
            break;
        }
    }
    if (!u1)
        throw std::invalid_argument("no vector of type (1,-2) in F^1 W_-1");

    // u_3: imaginary generator of W_-2 = Im N
    GVec g = image(n).basis().row(0);
    GVec u3 = g - h.conj(g);
    if (is_zero_vector(u3))
        u3 = scale(Gauss::i(), g);
    if (!h.F.at(-1).contains(u3))
        throw std::invalid_argument("Im N is not contained in F^-1");

    // v ∈ F^0 W_0 with N v = u_3
    GSpace f0w0 = intersect(h.F.at(0), h.W.at(0));
    GMatrix e = f0w0.embedding();
    auto y = solve(n * e, u3);
    if (!y)
        throw std::invalid_argument("N does not map F^0 W_0 onto Im N");
    GVec v = e * *y;

    // make v - conj v lie in W_-2 by adding i w, w ∈ F^0 W_-1
    GVec d = v - h.conj(v);
    GVec cls = gr.projection.map * scale(Gauss::i(), d);
    if (!is_zero_vector(cls)) {
        const auto& g1 = gr.structure;
        GSpace fpart = g1.F.at(0);
        GSpace cpart = g1.conj(fpart);
        std::vector<GVec> cols = fpart.basis_vectors();
        for (const auto& c : cpart.basis_vectors())
            cols.push_back(c);
        auto sol = solve(GMatrix::from_columns(cols, g1.dim), cls);
        if (!sol)
            throw std::invalid_argument("Gr^W_-1 is not F^0 ⊕ conj F^0");
        GVec f(g1.dim, Gauss(0));
        for (std::size_t c = 0; c < fpart.dim(); ++c)
            f = f + scale((*sol)[c], fpart.basis().row(c));
        // lift f into F^0 W_-1
        GSpace f0w1 = intersect(h.F.at(0), h.W.at(-1));
        GMatrix e1 = f0w1.embedding();
        auto z = solve(gr.projection.map * e1, f);
        if (!z)
            throw std::invalid_argument("cannot lift the F^0 component into F^0 W_-1");
        v = v + scale(Gauss::i(), e1 * *z);
    }
    GVec dd = v - h.conj(v);
    // dd = mu u_3 with mu real; a = mu / 2 makes v - a u_3 real
    Gauss mu(0);
    for (std::size_t i = 0; i < dd.size(); ++i)
        if (!u3[i].is_zero()) {
            mu = dd[i] / u3[i];
            break;
        }
    if (!(scale(mu, u3) == dd))
        throw std::invalid_argument("v - conj v is not a multiple of u_3");
    Gauss a = mu * Gauss(Rational(1, 2));
    GVec u2 = v - scale(a, u3);

    // pairing pattern: adjust u_1 by a multiple of u_3 if needed
    Gauss p12 = q(*u1, u2);
    if (!p12.is_zero())
        *u1 = *u1 - scale(p12 / q(u3, u2), u3);
    GVec u4 = h.conj(*u1);

    Prop21Basis out{{*u1, u2, u3, u4}, a, GSpace::zero(h.dim)};
    std::vector<GVec> rows;
    for (const auto& x : out.u)
        rows.push_back(q.form.transpose() * x); // functional y -> <x, y>
    out.complement = kernel(GMatrix::from_rows(rows, h.dim));
    auto verdict = validate_prop21_basis(h, n, q, out.u, out.a);
    if (!verdict)
        throw std::invalid_argument("constructed basis fails validation: " + verdict.reasons.front());
    return out;
}

} // namespace mhs
