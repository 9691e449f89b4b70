#pragma once

// Seeded generators and independent reference computations for the tests.

#include "mhs/deformation.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using namespace mhs;

inline constexpr std::uint64_t kDefaultSeed = 20240611;

inline Rational random_rational(std::mt19937_64& rng, int range = 3)
{
    std::uniform_int_distribution<int> num(-range, range), den(1, 3);
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

inline GMatrix random_invertible(std::mt19937_64& rng, std::size_t d)
{
    // unit lower times unit upper with random rational entries
    GMatrix l = GMatrix::identity(d), u = GMatrix::identity(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            l(i, j) = Gauss(random_rational(rng, 2));
            u(j, i) = Gauss(random_rational(rng, 2));
        }
    return l * u;
}

/// Textbook elimination, kept apart from the library's echelon code.
inline std::size_t echelon_rank(GMatrix m)
{
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c).is_zero())
            ++p;
        if (p == m.rows())
            continue;
        for (std::size_t j = 0; j < m.cols(); ++j)
            std::swap(m(r, j), m(p, j));
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            if (m(i, c).is_zero())
                continue;
            Gauss f = m(i, c) / m(r, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

inline GMatrix columns(const std::vector<GVec>& vs, std::size_t d)
{
    if (vs.empty())
        return GMatrix(d, 0);
    return GMatrix::from_columns(vs, d);
}

inline std::size_t dim_span(const std::vector<GVec>& vs, std::size_t d) { return vs.empty() ? 0 : echelon_rank(columns(vs, d)); }

inline std::vector<GVec> basis_of(const GSpace& s) { return s.basis_vectors(); }

inline std::vector<GVec> concat(std::vector<GVec> a, const std::vector<GVec>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

inline std::vector<GVec> apply_all(const GMatrix& m, const std::vector<GVec>& vs)
{
    std::vector<GVec> out;
    for (const auto& v : vs)
        out.push_back(m * v);
    return out;
}

/// Both defining properties of the monodromy filtration, via ranks only.
inline bool is_monodromy_filtration(const GMatrix& n, const IncreasingFiltration& m, int center)
{
    std::size_t d = n.rows();
    int lo = m.lo() - 2, hi = m.hi() + 2;
    for (int k = lo; k <= hi; ++k) {
        auto mk = basis_of(m.at(k)), mk1 = basis_of(m.at(k - 1));
        if (dim_span(concat(mk, mk1), d) != mk.size())
            return false;
        auto img = apply_all(n, mk);
        auto low = basis_of(m.at(k - 2));
        if (dim_span(concat(low, img), d) != low.size())
            return false;
    }
    for (int j = 0; center + j <= hi; ++j) {
        auto top = basis_of(m.at(center + j)), top1 = basis_of(m.at(center + j - 1));
        auto bot = basis_of(m.at(center - j)), bot1 = basis_of(m.at(center - j - 1));
        std::size_t gr_top = top.size() - top1.size(), gr_bot = bot.size() - bot1.size();
        if (gr_top != gr_bot)
            return false;
        GMatrix nj = power(n, static_cast<unsigned>(j));
        // N^j maps Gr_{c+j} onto Gr_{c-j}: images of top plus bot1 fill bot
        std::size_t reach = dim_span(concat(apply_all(nj, top), bot1), d);
        if (reach != bot.size())
            return false;
        // and kills nothing beyond M_{c+j-1}: N^j M_{c+j-1} ⊆ M_{c-j-1} is implied by the shift property
    }
    return true;
}

/// Split nilpotent orbit built from Jordan strings; real strings have
/// conj v = v, the others come in conjugate pairs.  A random rational change
/// of basis hides the splitting.  The family is N_i = c_i N with c_i > 0.
struct RandomOrbit {
    NilpotentOrbit orbit;
    std::size_t dim = 0;
};

inline RandomOrbit random_orbit(std::mt19937_64& rng, std::size_t max_dim, int weight, int family_size = 1,
                                bool hide_splitting = true)
{
    struct Str {
        int len;
        int p, q;
        int partner; // -1 real string, otherwise index of its conjugate
    };
    std::vector<Str> strings;
    std::size_t d = 0;
    std::uniform_int_distribution<int> len_dist(1, 4), coin(0, 1), shift(-1, 1);
    while (d < max_dim) {
        int len = std::min<int>(len_dist(rng), static_cast<int>(max_dim - d));
        int top = weight + (len - 1);
        bool can_real = (top % 2 == 0);
        bool want_pair = !can_real || (coin(rng) && d + 2 * static_cast<std::size_t>(len) <= max_dim);
        if (want_pair) {
            if (d + 2 * static_cast<std::size_t>(len) > max_dim) {
                if (can_real) {
                    strings.push_back({len, top / 2, top / 2, -1});
                    d += static_cast<std::size_t>(len);
                    continue;
                }
                break;
            }
            int p = (top + 1) / 2 + std::abs(shift(rng)) + (can_real ? 1 : 0);
            int q = top - p;
            int idx = static_cast<int>(strings.size());
            strings.push_back({len, p, q, idx + 1});
            strings.push_back({len, q, p, idx});
            d += 2 * static_cast<std::size_t>(len);
        } else {
            strings.push_back({len, top / 2, top / 2, -1});
            d += static_cast<std::size_t>(len);
        }
        if (coin(rng) && d >= 2)
            break;
    }
    if (d == 0) {
        int top = weight;
        if (top % 2 == 0) {
            strings.push_back({1, top / 2, top / 2, -1});
            d = 1;
        } else {
            strings.push_back({1, (top + 1) / 2, top - (top + 1) / 2, 1});
            strings.push_back({1, top - (top + 1) / 2, (top + 1) / 2, 0});
            d = 2;
        }
    }
    // basis: for each string, N^0 v, N^1 v, ...
    std::vector<std::size_t> offset;
    std::size_t off = 0;
    for (const auto& s : strings) {
        offset.push_back(off);
        off += static_cast<std::size_t>(s.len);
    }
    GMatrix n(d, d), conj(d, d);
    std::vector<int> wt(d), hp(d);
    for (std::size_t s = 0; s < strings.size(); ++s) {
        const auto& st = strings[s];
        for (int j = 0; j < st.len; ++j) {
            std::size_t i = offset[s] + static_cast<std::size_t>(j);
            if (j + 1 < st.len)
                n(i + 1, i) = 1;
            wt[i] = weight + st.len - 1 - 2 * j;
            hp[i] = st.p - j;
            std::size_t target = st.partner < 0 ? i : offset[static_cast<std::size_t>(st.partner)] + static_cast<std::size_t>(j);
            conj(target, i) = (j % 2 == 0) ? 1 : -1;
        }
    }
    int wlo = *std::min_element(wt.begin(), wt.end()), whi = *std::max_element(wt.begin(), wt.end());
    int flo = *std::min_element(hp.begin(), hp.end()), fhi = *std::max_element(hp.begin(), hp.end());
    std::vector<GSpace> wp, fp;
    for (int k = wlo; k <= whi; ++k) {
        std::vector<GVec> v;
        for (std::size_t i = 0; i < d; ++i)
            if (wt[i] <= k)
                v.push_back(unit_vector<Gauss>(d, i));
        wp.push_back(GSpace::span(d, v));
    }
    for (int p = flo; p <= fhi; ++p) {
        std::vector<GVec> v;
        for (std::size_t i = 0; i < d; ++i)
            if (hp[i] >= p)
                v.push_back(unit_vector<Gauss>(d, i));
        fp.push_back(GSpace::span(d, v));
    }
    MixedHodgeStructure h;
    h.dim = d;
    h.conj_matrix = conj;
    h.W = IncreasingFiltration(d, wlo, std::move(wp));
    h.F = DecreasingFiltration(d, flo, std::move(fp));

    GMatrix p = random_invertible(rng, d);
    if (!hide_splitting)
        p = GMatrix::identity(d);
    GMatrix pinv(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        auto col = solve(p, unit_vector<Gauss>(d, i));
        for (std::size_t r = 0; r < d; ++r)
            pinv(r, i) = (*col)[r];
    }
    RandomOrbit out;
    out.dim = d;
    out.orbit.limit = change_basis(h, p, pinv);
    out.orbit.weight = weight;
    GMatrix np = p * n * pinv;
    std::uniform_int_distribution<int> pos(1, 3);
    for (int i = 0; i < family_size; ++i) {
        Rational c(pos(rng), pos(rng));
        c.canonicalize();
        out.orbit.family.N.push_back(Gauss(c) * np);
    }
    return out;
}

/// Random nilpotent matrix: strictly lower triangular conjugated by a random invertible.
inline GMatrix random_nilpotent(std::mt19937_64& rng, std::size_t d)
{
    GMatrix s(d, d);
    std::uniform_int_distribution<int> coin(0, 2);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (coin(rng))
                s(i, j) = Gauss(random_rational(rng, 2));
    GMatrix p = random_invertible(rng, d);
    GMatrix pinv(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        auto col = solve(p, unit_vector<Gauss>(d, i));
        for (std::size_t r = 0; r < d; ++r)
            pinv(r, i) = (*col)[r];
    }
    return p * s * pinv;
}

/// Laplace expansion along the first row.
inline ParamElement laplace_det(const std::vector<ParamVector>& m, const ParamRing& ring)
{
    std::size_t d = m.size();
    if (d == 1)
        return m[0][0];
    ParamElement det(ring);
    for (std::size_t c = 0; c < d; ++c) {
        if (m[0][c].is_zero())
            continue;
        std::vector<ParamVector> minor;
        for (std::size_t r = 1; r < d; ++r) {
            ParamVector row;
            for (std::size_t k = 0; k < d; ++k)
                if (k != c)
                    row.push_back(m[r][k]);
            minor.push_back(row);
        }
        ParamElement term = m[0][c] * laplace_det(minor, ring);
        det += (c % 2 == 0) ? term : Gauss(-1) * term;
    }
    return det;
}

/// dim H^1(I) = dim I^1 - echelon_rank(d_1 on I^1) - echelon_rank(d_0), with the complex
/// written out directly from the operators.
inline std::size_t h1_dimension(const std::vector<GMatrix>& ns)
{
    std::size_t n = ns.size(), d = ns.at(0).rows();
    // spanning set of I^1 inside ⊕_i H
    std::vector<GVec> span;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            GVec v(n * d, Gauss(0));
            GVec c = ns[i].col(j);
            for (std::size_t r = 0; r < d; ++r)
                v[i * d + r] = c[r];
            span.push_back(v);
        }
    // d_0 : H -> ⊕ H
    GMatrix d0(n * d, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                d0(i * d + r, c) = ns[i](r, c);
    // d_1 : ⊕_i H -> ⊕_{i<j} H, (x_i) -> (N_i x_j - N_j x_i)
    std::size_t pairs = n * (n - 1) / 2;
    GMatrix d1(pairs * d, n * d);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, ++idx)
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c < d; ++c) {
                    d1(idx * d + r, j * d + c) += ns[i](r, c);
                    d1(idx * d + r, i * d + c) -= ns[j](r, c);
                }
    GMatrix b = columns(span, n * d);
    std::size_t dim_i1 = echelon_rank(b);
    std::size_t z = dim_i1 - (pairs ? echelon_rank(d1 * b) : 0);
    return z - echelon_rank(d0);
}

inline GMatrix block_upper(const GMatrix& a, const GMatrix& x, const GMatrix& b)
{
    std::size_t p = a.rows(), q = b.rows();
    GMatrix m(p + q, p + q);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            m(i, j) = a(i, j);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j)
            m(p + i, p + j) = b(i, j);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < q; ++j)
            m(i, p + j) = x(i, j);
    return m;
}

inline GMatrix random_rect(std::mt19937_64& rng, std::size_t r, std::size_t c)
{
    GMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = Gauss(random_rational(rng));
    return m;
}

/// Re-derives the filtration induced on W'_j / W'_{j-1} by intersecting and
/// checking the monodromy properties with the rank oracle.
inline bool induces_monodromy_on_graded(const GMatrix& n, const IncreasingFiltration& wp, const IncreasingFiltration& m)
{
    std::size_t d = n.rows();
    for (int j : wp.jumps()) {
        auto q = quotient_map(wp.at(j - 1), wp.at(j));
        GMatrix gn = q.map * n * q.section;
        std::vector<GSpace> pieces;
        int lo = m.lo() - 1, hi = m.hi() + 1;
        for (int k = lo; k <= hi; ++k)
            pieces.push_back(apply(q.map, intersect(m.at(k), wp.at(j))));
        IncreasingFiltration induced(q.dim(), lo, pieces);
        if (!is_monodromy_filtration(gn, induced, j))
            return false;
    }
    for (int k = m.lo(); k <= m.hi() + 2; ++k)
        if (!m.at(k - 2).contains(apply(n, m.at(k))))
            return false;
    (void)d;
    return true;
}

} // namespace oracle
