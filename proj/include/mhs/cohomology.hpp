#pragma once

// Koszul complex K•, intersection complex I• ⊆ K•, their cohomology, the
// class of an extension and the constructor realising a given class.

#include "mhs/orbits.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mhs {

/// Subsets of {0..n-1} of size k in lexicographic order.
inline std::vector<std::vector<int>> subsets_of_size(int n, int k)
{
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n)
        return out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        cur[static_cast<std::size_t>(i)] = i;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i)
            --i;
        if (i < 0)
            break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

struct ChainComplex {
    std::vector<MixedHodgeStructure> terms;
    std::vector<GMatrix> d; // d[k] : terms[k] -> terms[k+1]

    std::size_t length() const { return terms.size(); }

    std::vector<std::size_t> dims() const
    {
        std::vector<std::size_t> out;
        for (const auto& t : terms)
            out.push_back(t.dim);
        return out;
    }

    bool is_complex() const
    {
        for (std::size_t k = 0; k + 1 < d.size(); ++k)
            if (!(d[k + 1] * d[k]).is_zero())
                return false;
        return true;
    }
};

namespace detail {

inline GMatrix koszul_differential(const NilpotentFamily& fam, std::size_t dim, int k)
{
    int n = static_cast<int>(fam.size());
    auto src = subsets_of_size(n, k), dst = subsets_of_size(n, k + 1);
    GMatrix d(dst.size() * dim, src.size() * dim);
    for (std::size_t a = 0; a < src.size(); ++a) {
        const auto& s = src[a];
        for (int j = 0; j < n; ++j) {
            if (std::find(s.begin(), s.end(), j) != s.end())
                continue;
            auto t = s;
            t.insert(std::upper_bound(t.begin(), t.end(), j), j);
            std::size_t b = static_cast<std::size_t>(std::find(dst.begin(), dst.end(), t) - dst.begin());
            int below = static_cast<int>(std::count_if(s.begin(), s.end(), [j](int i) { return i < j; }));
            Gauss sign = (below % 2 == 0) ? Gauss(1) : Gauss(-1);
            const GMatrix& nj = fam.N[static_cast<std::size_t>(j)];
            for (std::size_t r = 0; r < dim; ++r)
                for (std::size_t c = 0; c < dim; ++c)
                    if (!nj(r, c).is_zero())
                        d(b * dim + r, a * dim + c) = sign * nj(r, c);
        }
    }
    return d;
}

inline GMatrix product_of(const NilpotentFamily& fam, const std::vector<int>& s, std::size_t dim)
{
    GMatrix p = GMatrix::identity(dim);
    for (int i : s)
        p = p * fam.N[static_cast<std::size_t>(i)];
    return p;
}

} // namespace detail

/// K^k = ⊕_{|I|=k} H(-k) with signed sums of the N_j as differentials.
inline ChainComplex koszul_complex(const MixedHodgeStructure& h, const NilpotentFamily& fam)
{
    if (auto p = fam.problem(h.dim); !p.empty())
        throw std::invalid_argument("koszul_complex: " + p);
    int n = static_cast<int>(fam.size());
    ChainComplex c;
    for (int k = 0; k <= n; ++k) {
        std::size_t count = subsets_of_size(n, k).size();
        c.terms.push_back(direct_sum(std::vector<MixedHodgeStructure>(count, tate_twist(h, -k))));
        if (k < n)
            c.d.push_back(detail::koszul_differential(fam, h.dim, k));
    }
    return c;
}

/// I• together with the degreewise inclusion into K•.
struct IntersectionComplex {
    ChainComplex complex;
    ChainComplex koszul;
    std::vector<GSpace> inside; // I^k as a subspace of K^k
};

inline IntersectionComplex ic_complex_with_inclusion(const MixedHodgeStructure& h, const NilpotentFamily& fam)
{
    IntersectionComplex out;
    out.koszul = koszul_complex(h, fam);
    int n = static_cast<int>(fam.size());
    for (int k = 0; k <= n; ++k) {
        auto subs = subsets_of_size(n, k);
        std::size_t total = subs.size() * h.dim;
        std::vector<GVec> gens;
        for (std::size_t a = 0; a < subs.size(); ++a) {
            GSpace im = image(detail::product_of(fam, subs[a], h.dim));
            for (const auto& v : im.basis_vectors()) {
                GVec e(total, Gauss(0));
                for (std::size_t i = 0; i < h.dim; ++i)
                    e[a * h.dim + i] = v[i];
                gens.push_back(std::move(e));
            }
        }
        GSpace s = GSpace::span(total, gens);
        out.inside.push_back(s);
        out.complex.terms.push_back(restrict_to(out.koszul.terms[static_cast<std::size_t>(k)], s));
    }
    for (int k = 0; k < n; ++k) {
        const auto& src = out.inside[static_cast<std::size_t>(k)];
        const auto& dst = out.inside[static_cast<std::size_t>(k + 1)];
        out.complex.d.push_back(dst.coordinate_map() * out.koszul.d[static_cast<std::size_t>(k)] * src.embedding());
    }
    return out;
}

/// I^k = ⊕_{|I|=k} Im(Π_{i∈I} N_i)(-k), a subcomplex of K•.
inline ChainComplex ic_complex(const MixedHodgeStructure& h, const NilpotentFamily& fam)
{
    return ic_complex_with_inclusion(h, fam).complex;
}

struct Cohomology {
    Subquotient quotient; // Z^k / B^k with projection from C^k coordinates
    GSpace cycles;
    GSpace boundaries;
    std::size_t dim() const { return quotient.structure.dim; }
};

inline Cohomology cohomology(const ChainComplex& c, int k)
{
    if (k < 0 || static_cast<std::size_t>(k) >= c.terms.size())
        throw std::out_of_range("cohomology degree out of range");
    const auto& t = c.terms[static_cast<std::size_t>(k)];
    GSpace z = (static_cast<std::size_t>(k) < c.d.size()) ? kernel(c.d[static_cast<std::size_t>(k)]) : GSpace::full(t.dim);
    GSpace b = (k > 0) ? image(c.d[static_cast<std::size_t>(k - 1)]) : GSpace::zero(t.dim);
    return {subquotient(t, b, z), z, b};
}

/// H^k(C) with induced W, F and twist.
inline MixedHodgeStructure h(const ChainComplex& c, int k) { return cohomology(c, k).quotient.structure; }

/// H^1(I•) -> H^1(K•) induced by the inclusion.  Throws if it fails to be injective.
inline GMatrix h1_inclusion(const MixedHodgeStructure& hs, const NilpotentFamily& fam)
{
    auto ic = ic_complex_with_inclusion(hs, fam);
    if (ic.complex.terms.size() < 2)
        return GMatrix(0, 0);
    auto hi = cohomology(ic.complex, 1);
    auto hk = cohomology(ic.koszul, 1);
    GMatrix m = hk.quotient.projection.map * ic.inside[1].embedding() * hi.quotient.projection.section;
    if (rank(m) != m.cols())
        throw std::logic_error("H^1 of I• does not inject into H^1 of K•");
    return m;
}

/// d(F^p) = Im d ∩ F^p for every p (d is then a morphism strict for F).
inline bool is_strict(const GMatrix& d, const MixedHodgeStructure& src, const MixedHodgeStructure& dst)
{
    GSpace im = image(d);
    int lo = std::min(src.F.lo(), dst.F.lo()) - 1, hi = std::max(src.F.hi(), dst.F.hi()) + 1;
    for (int p = lo; p <= hi; ++p) {
        GSpace fp = src.F.at(p);
        GSpace img = fp.dim() ? apply(d, fp) : GSpace::zero(dst.dim);
        if (!(img == intersect(im, dst.F.at(p))))
            return false;
    }
    return true;
}

/// Element of H^1(I•): representative in ⊕_i H (one block per index) and its
/// coordinates in the quotient.
struct NormalFunctionClass {
    GVec representative;
    GVec coordinates;
};

struct ExtensionData {
    NilpotentOrbit base;
    GVec alpha_Q;  // ⊕_i H, real
    GVec alpha_F;  // ⊕_i H, in F^0 of I^1
    GVec beta;     // in H
    MixedNilpotentOrbit extension;
    std::string lift_Q; // "representative" | "realified"
    std::string lift_F; // "rational" | "solved"
};

namespace detail {

struct H1Data {
    IntersectionComplex ic;
    Cohomology h1;
};

inline H1Data h1_data(const NilpotentOrbit& orbit)
{
    auto ic = ic_complex_with_inclusion(orbit.limit, orbit.family);
    if (ic.complex.terms.size() < 2)
        throw std::invalid_argument("family must have at least one operator");
    auto h1 = cohomology(ic.complex, 1);
    return {std::move(ic), std::move(h1)};
}

/// Class coordinates of a ⊕_i H vector; nullopt if it is not a cycle of I^1.
inline std::optional<GVec> class_of(const H1Data& data, const GVec& rep)
{
    const GSpace& in = data.ic.inside[1];
    if (rep.size() != in.ambient() || !in.contains(rep))
        return std::nullopt;
    GVec c = in.coordinates(rep);
    if (!data.h1.cycles.contains(c))
        return std::nullopt;
    return data.h1.quotient.projection.map * c;
}

} // namespace detail

/// Class of a ⊕_i H representative.  Throws if it is not a cycle in I^1.
inline NormalFunctionClass make_class(const NilpotentOrbit& orbit, const GVec& representative)
{
    auto data = detail::h1_data(orbit);
    auto c = detail::class_of(data, representative);
    if (!c)
        throw std::invalid_argument("representative is not in (⊕ Im N_i)^0");
    return {representative, *c};
}

/// Class whose representative has the given coordinates on the canonical basis of Z^1(I•).
inline NormalFunctionClass class_from_cycle_coordinates(const NilpotentOrbit& orbit, const GVec& coeffs)
{
    auto data = detail::h1_data(orbit);
    const GSpace& z = data.h1.cycles;
    if (coeffs.size() != z.dim())
        throw std::invalid_argument("expected " + std::to_string(z.dim()) + " coefficients on the cycle basis, got " +
                                    std::to_string(coeffs.size()));
    GVec c(z.ambient(), Gauss(0));
    for (std::size_t i = 0; i < z.dim(); ++i)
        c = c + scale(coeffs[i], z.basis().row(i));
    GVec rep = data.ic.inside[1].embedding() * c;
    return {rep, data.h1.quotient.projection.map * c};
}

inline IncreasingFiltration extension_weight_prime(std::size_t d)
{
    std::vector<GVec> h;
    for (std::size_t i = 0; i < d; ++i)
        h.push_back(unit_vector<Gauss>(d + 1, i));
    return IncreasingFiltration(d + 1, -1, {GSpace::span(d + 1, h), GSpace::full(d + 1)});
}

/// Extension 0 -> H -> H' -> Q(0) -> 0 realising the Hodge class alpha.
inline ExtensionData build_extension(const NilpotentOrbit& orbit, const NormalFunctionClass& alpha)
{
    if (auto v = check_pure_nilpotent_orbit(orbit); !v)
        throw std::invalid_argument("base is not a nilpotent orbit (clause " + std::string(1, v.clause) + "): " + v.reason);
    const auto& h = orbit.limit;
    std::size_t d = h.dim, n = orbit.family.size();
    auto data = detail::h1_data(orbit);
    auto cls = detail::class_of(data, alpha.representative);
    if (!cls)
        throw std::invalid_argument("alpha: representative is not in (⊕ Im N_i)^0");
    const auto& h1 = data.h1.quotient.structure;
    auto hodge = hom_from_Q(h1);
    if (!hodge.span.contains(*cls) || !h1.is_real(*cls))
        throw std::invalid_argument("alpha is not a Hodge class of type (0,0) in H^1");

    const auto& k1 = data.ic.koszul.terms[1];
    ExtensionData e;
    e.base = orbit;
    e.alpha_Q = alpha.representative;
    e.lift_Q = "representative";
    if (!k1.is_real(e.alpha_Q)) {
        e.alpha_Q = scale(Gauss(Rational(1, 2)), e.alpha_Q + k1.conj(e.alpha_Q));
        e.lift_Q = "realified";
    }
    if (k1.F.at(0).contains(e.alpha_Q)) {
        e.alpha_F = e.alpha_Q;
        e.lift_F = "rational";
    } else {
        const auto& i1 = data.ic.complex.terms[1];
        GSpace fz = intersect(i1.F.at(0), data.h1.cycles);
        GMatrix emb = fz.embedding();
        auto y = fz.dim() ? solve(data.h1.quotient.projection.map * emb, *cls) : std::nullopt;
        if (!y)
            throw std::logic_error("alpha has no lift to F^0");
        e.alpha_F = data.ic.inside[1].embedding() * (emb * *y);
        e.lift_F = "solved";
    }
    auto beta = solve(data.ic.koszul.d[0], e.alpha_F - e.alpha_Q);
    if (!beta)
        throw std::logic_error("lift equation for beta has no solution");
    e.beta = *beta;

    MixedHodgeStructure hp;
    hp.dim = d + 1;
    hp.conj_matrix = block_diagonal<Gauss>({h.conj_matrix, GMatrix::identity(1)});
    NilpotentFamily fam;
    for (std::size_t i = 0; i < n; ++i) {
        GMatrix m(d + 1, d + 1);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c)
                m(r, c) = orbit.family.N[i](r, c);
            m(r, d) = e.alpha_Q[i * d + r];
        }
        fam.N.push_back(std::move(m));
    }
    auto embed = [&](const GSpace& s) {
        std::vector<GVec> v;
        for (auto b : s.basis_vectors()) {
            b.push_back(Gauss(0));
            v.push_back(std::move(b));
        }
        return v;
    };
    GVec sigma = e.beta;
    sigma.push_back(Gauss(1));
    int flo = std::min(h.F.lo(), 0), fhi = std::max(h.F.hi(), 0);
    std::vector<GSpace> fp;
    for (int p = flo; p <= fhi; ++p) {
        auto v = embed(h.F.at(p));
        if (p <= 0)
            v.push_back(sigma);
        fp.push_back(GSpace::span(d + 1, v));
    }
    hp.F = DecreasingFiltration(d + 1, flo, std::move(fp));
    auto wp = extension_weight_prime(d);
    auto w = relative_monodromy_filtration(fam.partial_sum((1u << n) - 1), wp);
    if (!w)
        throw std::logic_error("extension has no relative monodromy filtration");
    hp.W = *w;
    e.extension = {hp, wp, fam};
    if (auto v = check_mixed_nilpotent_orbit(e.extension); !v)
        throw std::logic_error("constructed extension fails validation (clause " + std::string(1, v.clause) + "): " + v.reason);
    return e;
}

/// Class of (N'_i σ(1))_i with σ(1) = (0, 1).
inline NormalFunctionClass class_of_extension(const ExtensionData& e)
{
    if (auto v = check_mixed_nilpotent_orbit(e.extension); !v)
        throw std::invalid_argument("extension is not a mixed nilpotent orbit (clause " + std::string(1, v.clause) + "): " +
                                    v.reason);
    std::size_t d = e.base.limit.dim;
    GVec rep;
    for (const auto& m : e.extension.family.N)
        for (std::size_t r = 0; r < d; ++r)
            rep.push_back(m(r, d));
    return make_class(e.base, rep);
}

/// For N_i = N: true iff F^{-1} ∩ conj F^{-1} in Gr^W_{-2} meets Ker(Gr N) only in 0.
/// When true, H^1(I•) carries no Hodge classes; a violation throws std::logic_error.
inline bool check_remark24_vanishing(const MixedHodgeStructure& hs, const NilpotentFamily& fam)
{
    if (fam.size() == 0)
        throw std::invalid_argument("empty family");
    for (const auto& m : fam.N)
        if (!(m == fam.N[0]))
            throw std::invalid_argument("check_remark24_vanishing requires all N_i equal");
    auto gr = gr_W_with_projection(hs, -2);
    if (gr.structure.dim == 0)
        return true;
    auto low = subquotient(hs, hs.W.at(-5), hs.W.at(-4));
    GMatrix grn = low.projection.map * fam.N[0] * gr.projection.section;
    GSpace ker = low.projection.dim() ? kernel(grn) : GSpace::full(gr.structure.dim);
    GSpace f = gr.structure.F.at(-1);
    GSpace s = intersect(intersect(f, gr.structure.conj(f)), ker);
    if (!s.is_zero())
        return false;
    auto ic = ic_complex(hs, fam);
    if (ic.terms.size() >= 2 && hom_from_Q(h(ic, 1)).dim() != 0)
        throw std::logic_error("vanishing criterion holds but H^1 carries Hodge classes");
    return true;
}

} // namespace mhs
