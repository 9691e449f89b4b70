#pragma once

// Built-in example structures.

#include "mhs/orbits.hpp"

#include <array>
#include <initializer_list>

namespace mhs::fixtures {

inline GVec vec(std::initializer_list<Gauss> xs) { return GVec(xs); }

inline GSpace span(std::size_t d, std::initializer_list<GVec> vs) { return GSpace::span(d, std::vector<GVec>(vs)); }

inline GVec e(std::size_t d, std::size_t i) { return unit_vector<Gauss>(d, i); }

/// Weight -1 orbit on u_1..u_4 with N u_2 = u_3,
/// conj: u_1 <-> u_4, u_2 -> u_2, u_3 -> -u_3, and u_2 + a u_3 ∈ F^0 (a = 1/2).
struct H1Orbit {
    NilpotentOrbit orbit;
    std::array<GVec, 4> u;
    Gauss a;
};

inline H1Orbit h1_orbit()
{
    const std::size_t d = 4;
    Gauss a(Rational(1, 2));
    MixedHodgeStructure h;
    h.dim = d;
    h.conj_matrix = GMatrix(d, d);
    h.conj_matrix(3, 0) = 1;
    h.conj_matrix(1, 1) = 1;
    h.conj_matrix(2, 2) = -1;
    h.conj_matrix(0, 3) = 1;
    h.W = IncreasingFiltration(d, -2, {span(d, {e(d, 2)}), span(d, {e(d, 0), e(d, 2), e(d, 3)}), GSpace::full(d)});
    h.F = DecreasingFiltration(d, -2,
                               {GSpace::full(d), span(d, {e(d, 0), e(d, 1), e(d, 2)}), span(d, {e(d, 0), vec({0, 1, a, 0})}),
                                span(d, {e(d, 0)}), GSpace::zero(d)});
    GMatrix n(d, d);
    n(2, 1) = 1;
    Pairing q;
    q.form = GMatrix(d, d);
    q.form(0, 3) = Gauss(0, -2);
    q.form(3, 0) = Gauss(0, 2);
    q.form(1, 2) = Gauss(0, -1);
    q.form(2, 1) = Gauss(0, 1);
    q.weight = -1;
    H1Orbit out;
    out.orbit = NilpotentOrbit{h, NilpotentFamily{{n}}, q, -1};
    out.u = {e(d, 0), e(d, 1), e(d, 2), e(d, 3)};
    out.a = a;
    return out;
}

/// The same orbit pulled back to n variables (N_k = N).
inline NilpotentOrbit h1_pullback(int n)
{
    auto o = h1_orbit().orbit;
    o.family = NilpotentFamily::pullback(o.family.N[0], n);
    return o;
}

/// e_1, e_2 real of weight 0, f_1, f_2 of weight -2 with conj f = -f;
/// N_1 e_1 = f_1, N_2 e_2 = f_2, N_3 e_i = f_1 + f_2.
inline NilpotentOrbit remark25()
{
    const std::size_t d = 4;
    MixedHodgeStructure h;
    h.dim = d;
    h.conj_matrix = GMatrix(d, d);
    h.conj_matrix(0, 0) = 1;
    h.conj_matrix(1, 1) = 1;
    h.conj_matrix(2, 2) = -1;
    h.conj_matrix(3, 3) = -1;
    GSpace f = span(d, {e(d, 2), e(d, 3)});
    h.W = IncreasingFiltration(d, -2, {f, f, GSpace::full(d)});
    h.F = DecreasingFiltration(d, -1, {GSpace::full(d), span(d, {e(d, 0), e(d, 1)})});
    GMatrix n1(d, d), n2(d, d), n3(d, d);
    n1(2, 0) = 1;
    n2(3, 1) = 1;
    n3(2, 0) = 1;
    n3(3, 0) = 1;
    n3(2, 1) = 1;
    n3(3, 1) = 1;
    return NilpotentOrbit{h, NilpotentFamily{{n1, n2, n3}}, std::nullopt, -1};
}

/// e_1 of type (1,-1), e_2 = conj e_1, f_i = N e_i with f_1 of type (0,-2);
/// F^{-1} ∩ conj F^{-1} vanishes on Gr^W_{-2}.
inline NilpotentOrbit vanishing_instance(int n)
{
    const std::size_t d = 4;
    MixedHodgeStructure h;
    h.dim = d;
    h.conj_matrix = GMatrix(d, d);
    h.conj_matrix(1, 0) = 1;
    h.conj_matrix(0, 1) = 1;
    h.conj_matrix(3, 2) = -1;
    h.conj_matrix(2, 3) = -1;
    GSpace f = span(d, {e(d, 2), e(d, 3)});
    h.W = IncreasingFiltration(d, -2, {f, f, GSpace::full(d)});
    h.F = DecreasingFiltration(d, -2,
                               {GSpace::full(d), span(d, {e(d, 0), e(d, 2), e(d, 1)}), span(d, {e(d, 0), e(d, 2)}),
                                span(d, {e(d, 0)})});
    GMatrix m(d, d);
    m(2, 0) = 1;
    m(3, 1) = 1;
    return NilpotentOrbit{h, NilpotentFamily::pullback(m, n), std::nullopt, -1};
}

} // namespace mhs::fixtures
