#pragma once

// One-parameter deformation of the weight -1 orbit with dim Im N = 1, pulled
// back along t = t_1...t_n, and the checks run on it: transversality,
// orthogonality, frame independence, positivity, the limit fiber, stability
// of F^{-1} under vector fields, and the obstruction certificate.

#include "mhs/cohomology.hpp"
#include "mhs/param_ring.hpp"

#include <Eigen/Dense>

#include <array>
#include <algorithm>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace mhs {

inline ParamVector apply(const GMatrix& m, const ParamVector& v, const ParamRing& ring)
{
    ParamVector r(m.rows(), ParamElement(ring));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero())
                r[i] += m(i, j) * v[j];
    return r;
}

inline ParamVector constant_vector(const ParamRing& ring, const GVec& v)
{
    ParamVector r;
    for (const auto& x : v)
        r.push_back(ParamElement::constant(ring, x));
    return r;
}

struct FamilyParams {
    int n = 1;
    std::optional<Gauss> lambda; // nullopt: symbolic
    std::optional<Gauss> a;      // default: derived from the basis
    std::optional<Gauss> C;      // default: <u_1,u_4> / <u_2,u_3>
    int truncation = 6;
};

struct DeformationFamily {
    ParamRing ring;
    Gauss a, C;
    std::optional<Gauss> lambda;
    GMatrix conj4;  // conj in u-coordinates
    GMatrix form4;  // pairing in u-coordinates
    GMatrix N4;     // N in u-coordinates (same for every k)
    IncreasingFiltration W4;
    std::array<ParamVector, 4> w; // Hodge frame in ũ-coordinates
    std::map<int, int> rank_override;

    int n() const { return ring.n; }

    ParamElement Lam() const
    {
        return lambda ? ParamElement::constant(ring, *lambda) : ParamElement::variable(ring, {VarKind::Lambda, 0});
    }

    /// Number of frame vectors spanning F^p.
    int rank(int p) const
    {
        if (auto it = rank_override.find(p); it != rank_override.end())
            return it->second;
        return std::clamp(2 - p, 0, 4);
    }

    /// exp(-Σ z_k N_k) applied to ũ-coordinates gives u-coordinates.
    ParamVector to_u(const ParamVector& v) const
    {
        ParamElement z(ring);
        for (int k = 1; k <= n(); ++k)
            z += ParamElement::variable(ring, {VarKind::Z, k});
        ParamElement coeff = ParamElement::constant(ring, Gauss(1));
        ParamVector term = v, out = v;
        for (int m = 1; m <= 4; ++m) {
            term = apply(N4, term, ring);
            coeff = coeff * (Gauss(Rational(-1, m)) * z);
            for (std::size_t i = 0; i < 4; ++i)
                out[i] += coeff * term[i];
        }
        return out;
    }

    ParamVector conj_u(const ParamVector& v) const
    {
        ParamVector c;
        for (const auto& x : v)
            c.push_back(x.conj());
        return apply(conj4, c, ring);
    }

    /// ξ_k in ũ-coordinates: ξ_k ũ_j = -(N ũ_j).
    ParamVector xi(int k, const ParamVector& v) const
    {
        ParamVector nv = apply(N4, v, ring);
        ParamVector r;
        for (std::size_t i = 0; i < 4; ++i)
            r.push_back(v[i].xi(k) - nv[i]);
        return r;
    }

    /// Coefficients on (w_1..w_4) of a ũ-coordinate vector (the frame is
    /// lower triangular with constant diagonal).
    ParamVector frame_coordinates(const ParamVector& v) const
    {
        ParamVector c(4, ParamElement(ring));
        for (std::size_t j = 0; j < 4; ++j) {
            ParamElement rest = v[j];
            for (std::size_t i = 0; i < j; ++i)
                rest -= c[i] * w[i][j];
            Gauss diag = w[j][j].constant_term();
            if (diag.is_zero() || !(w[j][j] == ParamElement::constant(ring, diag)))
                throw std::logic_error("frame diagonal is not a nonzero constant");
            c[j] = diag.inverse() * rest;
        }
        return c;
    }

    Gauss pair(const GVec& x, const GVec& y) const
    {
        GVec fy = form4 * y;
        Gauss s(0);
        for (std::size_t i = 0; i < 4; ++i)
            s += x[i] * fy[i];
        return s;
    }

    ParamElement pair(const ParamVector& x, const ParamVector& y) const
    {
        ParamElement s(ring);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                if (!form4(i, j).is_zero())
                    s += form4(i, j) * (x[i] * y[j]);
        return s;
    }
};

/// ṽ = exp(-Σ log(t_k) N_k) v in u-coordinates.
inline ParamVector horizontal_to_deligne(const ParamRing& ring, const NilpotentFamily& fam, const ParamVector& v)
{
    ParamVector out = v, term = v;
    std::vector<ParamElement> z;
    for (int k = 1; k <= ring.n; ++k)
        z.push_back(ParamElement::variable(ring, {VarKind::Z, k}));
    // exp(-Σ z_k N_k) as a finite series; the N_k commute
    ParamElement coeff = ParamElement::constant(ring, Gauss(1));
    for (std::size_t m = 1; m <= v.size(); ++m) {
        ParamVector next(v.size(), ParamElement(ring));
        for (std::size_t k = 0; k < fam.size(); ++k) {
            auto nk = apply(fam.N[k], term, ring);
            for (std::size_t i = 0; i < v.size(); ++i)
                next[i] += z[k] * nk[i];
        }
        term = next;
        Gauss f = Gauss(Rational(m % 2 ? -1 : 1, 1));
        coeff = Gauss(Rational(1, static_cast<long>(m))) * coeff;
        for (std::size_t i = 0; i < v.size(); ++i)
            out[i] += (f * coeff) * term[i];
    }
    return out;
}

inline ParamVector horizontal_to_deligne(const ParamRing& ring, const NilpotentFamily& fam, const GVec& v)
{
    return horizontal_to_deligne(ring, fam, constant_vector(ring, v));
}

/// Family with frame
///   w_1 = ũ_1 + CλT(ũ_2 + aũ_3 + ½λTũ_4), w_2 = ũ_2 + (a-1)ũ_3 + λTũ_4,
///   w_3 = -ũ_3 + λTũ_4, w_4 = ũ_4,  T = t_1...t_n.
inline DeformationFamily build_family(const NilpotentOrbit& orbit, const std::array<GVec, 4>& u, const Gauss& a_basis,
                                      const FamilyParams& params)
{
    if (params.n < 1)
        throw std::invalid_argument("n must be at least 1");
    if (!orbit.pairing)
        throw std::invalid_argument("build_family: orbit has no pairing");
    const auto& h = orbit.limit;
    const GMatrix& n = orbit.family.N.at(0);
    if (auto v = validate_prop21_basis(h, n, *orbit.pairing, u, a_basis); !v)
        throw std::invalid_argument("build_family: invalid basis: " + v.reasons.front());

    DeformationFamily f;
    f.ring = ParamRing{params.n, std::max(params.truncation, 2 * params.n + 2)};
    f.lambda = params.lambda;
    GMatrix U = GMatrix::from_columns({u[0], u[1], u[2], u[3]}, h.dim);
    auto coords = [&](const GVec& x) {
        auto c = solve(U, x);
        if (!c)
            throw std::logic_error("vector outside span(u_1..u_4)");
        return *c;
    };
    f.conj4 = GMatrix(4, 4);
    f.N4 = GMatrix(4, 4);
    for (std::size_t j = 0; j < 4; ++j) {
        GVec cj = coords(h.conj(u[j])), nj = coords(n * u[j]);
        for (std::size_t i = 0; i < 4; ++i) {
            f.conj4(i, j) = cj[i];
            f.N4(i, j) = nj[i];
        }
    }
    f.form4 = U.transpose() * orbit.pairing->form * U;
    f.W4 = pull_filtration(U, h.W);
    Gauss q14 = f.form4(0, 3), q23 = f.form4(1, 2);
    f.a = params.a.value_or(a_basis + Gauss(1));
    f.C = params.C.value_or(q14 / q23);

    auto& R = f.ring;
    ParamElement lt = f.Lam() * t_product(R);
    ParamElement one = ParamElement::constant(R, Gauss(1)), zero(R);
    ParamElement clt = f.C * lt;
    f.w[0] = {one, clt, f.a * clt, Gauss(Rational(1, 2)) * (clt * lt)};
    f.w[1] = {zero, one, ParamElement::constant(R, f.a - Gauss(1)), lt};
    f.w[2] = {zero, zero, ParamElement::constant(R, Gauss(-1)), lt};
    f.w[3] = {zero, zero, zero, one};
    return f;
}

struct SymbolicVerdict {
    bool ok = true;
    std::string failure; // e.g. "xi_1 w_3"
    std::string witness; // polynomial
    explicit operator bool() const { return ok; }
};

/// ξ_k w_1 = CλT w_2, ξ_k w_2 = w_3, ξ_k w_3 = λT w_4, ξ_k w_4 = 0 and ξ_k F^p ⊆ F^{p-1}.
inline SymbolicVerdict check_transversality(const DeformationFamily& f)
{
    const auto& R = f.ring;
    ParamElement lt = f.Lam() * t_product(R);
    ParamElement zero(R), one = ParamElement::constant(R, Gauss(1));
    std::array<ParamVector, 4> expected = {ParamVector{zero, f.C * lt, zero, zero}, ParamVector{zero, zero, one, zero},
                                           ParamVector{zero, zero, zero, lt}, ParamVector{zero, zero, zero, zero}};
    for (int k = 1; k <= f.n(); ++k)
        for (int j = 0; j < 4; ++j) {
            auto c = f.frame_coordinates(f.xi(k, f.w[static_cast<std::size_t>(j)]));
            std::string name = "xi_" + std::to_string(k) + " w_" + std::to_string(j + 1);
            int p = 2 - (j + 1);
            for (int i = f.rank(p - 1); i < 4; ++i)
                if (!c[static_cast<std::size_t>(i)].is_zero())
                    return {false, name + " leaves F^" + std::to_string(p - 1),
                            "coefficient of w_" + std::to_string(i + 1) + ": " + c[static_cast<std::size_t>(i)].str()};
            for (std::size_t i = 0; i < 4; ++i)
                if (!(c[i] == expected[static_cast<std::size_t>(j)][i]))
                    return {false, name, "coefficient of w_" + std::to_string(i + 1) + " is " + c[i].str() + ", expected " +
                                             expected[static_cast<std::size_t>(j)][i].str()};
        }
    return {};
}

/// <F^p, F^{-p}> = 0, i.e. <w_i, w_j> = 0 for i + j <= 4.
inline SymbolicVerdict check_orthogonality(const DeformationFamily& f)
{
    for (int i = 1; i <= 4; ++i)
        for (int j = i; i + j <= 4; ++j) {
            auto v = f.pair(f.to_u(f.w[static_cast<std::size_t>(i - 1)]), f.to_u(f.w[static_cast<std::size_t>(j - 1)]));
            if (!v.is_zero())
                return {false, "<w_" + std::to_string(i) + ",w_" + std::to_string(j) + ">", v.str()};
        }
    return {};
}

/// Rows w_1, w_2, w_3, conj(w_1) in u-coordinates.
inline std::array<ParamVector, 4> independence_rows(const DeformationFamily& f)
{
    auto w1 = f.to_u(f.w[0]);
    return {w1, f.to_u(f.w[1]), f.to_u(f.w[2]), f.conj_u(w1)};
}

/// Leibniz expansion of a 4x4 determinant in the parameter ring.
inline ParamElement determinant(const std::array<ParamVector, 4>& rows, const ParamRing& ring)
{
    std::array<int, 4> perm = {0, 1, 2, 3};
    ParamElement det(ring);
    do {
        int inversions = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)])
                    ++inversions;
        ParamElement term = ParamElement::constant(ring, Gauss(inversions % 2 ? -1 : 1));
        for (std::size_t i = 0; i < 4 && !term.is_zero(); ++i)
            term = term * rows[i][static_cast<std::size_t>(perm[i])];
        det += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

struct Sample {
    Assignment at;
    std::string label;
};

/// Grid t ∈ radii × {1, i, -1, -i} (all t_k equal) for each λ.
inline std::vector<Sample> default_samples(int n, const std::vector<std::complex<double>>& lambdas = {0.0, 1e-3, {0.0, 1e-2}},
                                           const std::vector<double>& radii = {1e-1, 1e-2})
{
    const std::array<std::complex<double>, 4> phases = {1.0, {0.0, 1.0}, -1.0, {0.0, -1.0}};
    std::vector<Sample> out;
    for (auto lam : lambdas)
        for (double r : radii)
            for (auto ph : phases) {
                Sample s;
                s.at.t.assign(static_cast<std::size_t>(n), r * ph);
                s.at.lambda = lam;
                std::ostringstream os;
                os << "t=" << r << "*(" << ph.real() << "," << ph.imag() << ") lambda=(" << lam.real() << "," << lam.imag() << ")";
                s.label = os.str();
                out.push_back(std::move(s));
            }
    return out;
}

struct IndependenceVerdict {
    bool ok = true;
    ParamElement symbolic;
    std::vector<std::complex<double>> values;
    std::string failure;
    explicit operator bool() const { return ok; }
};

inline Eigen::Matrix4cd evaluate_rows(const std::array<ParamVector, 4>& rows, const Assignment& at)
{
    Eigen::Matrix4cd m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].evaluate(at);
    return m;
}

inline IndependenceVerdict check_frame_independence(const DeformationFamily& f, const std::vector<Sample>& samples,
                                                    double tolerance = 1e-9)
{
    IndependenceVerdict v;
    auto rows = independence_rows(f);
    v.symbolic = determinant(rows, f.ring);
    for (const auto& s : samples) {
        auto d = evaluate_rows(rows, s.at).determinant();
        v.values.push_back(d);
        if (std::abs(d) <= tolerance && v.ok) {
            v.ok = false;
            v.failure = "singular frame at " + s.label;
        }
    }
    return v;
}

struct PositivityResult {
    std::string label;
    std::array<std::complex<double>, 4> values{}; // p = 1, 0, -1, -2
    bool ok = true;
    std::string reason;
};

struct PositivityVerdict {
    bool ok = true;
    std::vector<PositivityResult> samples;
    explicit operator bool() const { return ok; }
};

/// i^{-2p-1} <η, conj η> > 0 for generators η of F^p ∩ conj F^{-1-p}.
inline PositivityVerdict check_positivity(const DeformationFamily& f, const std::vector<Sample>& samples, double tolerance = 1e-9)
{
    using cd = std::complex<double>;
    Eigen::Matrix4cd S, Cm;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            S(i, j) = f.form4(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).to_complex();
            Cm(i, j) = f.conj4(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).to_complex();
        }
    std::array<ParamVector, 4> wu;
    for (std::size_t j = 0; j < 4; ++j)
        wu[j] = f.to_u(f.w[j]);
    auto rows = independence_rows(f);
    PositivityVerdict out;
    for (const auto& s : samples) {
        PositivityResult r;
        r.label = s.label;
        auto fail = [&](std::string why) {
            if (r.ok) {
                r.ok = false;
                r.reason = std::move(why);
            }
        };
        if (std::abs(evaluate_rows(rows, s.at).determinant()) <= tolerance) {
            fail("frame is singular");
            out.ok = false;
            out.samples.push_back(r);
            continue;
        }
        std::array<Eigen::Vector4cd, 4> w, wb;
        for (int j = 0; j < 4; ++j) {
            for (int i = 0; i < 4; ++i)
                w[static_cast<std::size_t>(j)](i) = wu[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)].evaluate(s.at);
            wb[static_cast<std::size_t>(j)] = Cm * w[static_cast<std::size_t>(j)].conjugate();
        }
        Eigen::Matrix<cd, 4, 5> m;
        m << w[0], w[1], -wb[0], -wb[1], -wb[2];
        Eigen::FullPivLU<Eigen::Matrix<cd, 4, 5>> lu(m);
        lu.setThreshold(1e-12);
        Eigen::MatrixXcd ker = lu.kernel();
        if (ker.cols() != 1) {
            fail("dim F^0 ∩ conj F^-1 is " + std::to_string(ker.cols()) + ", expected 1");
        } else {
            Eigen::VectorXcd x = ker.col(0);
            cd norm = std::abs(x(1)) > tolerance ? x(1) : x(0);
            x /= norm;
            Eigen::Vector4cd eta1 = w[0];
            Eigen::Vector4cd eta2 = x(0) * w[0] + x(1) * w[1];
            std::array<Eigen::Vector4cd, 4> eta = {eta1, eta2, Cm * eta2.conjugate(), Cm * eta1.conjugate()};
            const cd i(0.0, 1.0);
            for (int k = 0; k < 4; ++k) {
                int p = 1 - k;
                const auto& e = eta[static_cast<std::size_t>(k)];
                Eigen::Vector4cd eb = Cm * e.conjugate();
                cd q = (e.transpose() * S * eb)(0, 0);
                cd val = std::pow(i, -2 * p - 1) * q;
                r.values[static_cast<std::size_t>(k)] = val;
                double scale = std::max(1.0, std::abs(val));
                if (std::abs(val.imag()) > 1e-7 * scale)
                    fail("value for p=" + std::to_string(p) + " is not real");
                else if (val.real() <= tolerance)
                    fail("value for p=" + std::to_string(p) + " is not positive");
            }
        }
        if (!r.ok)
            out.ok = false;
        out.samples.push_back(std::move(r));
    }
    return out;
}

struct LimitFiber {
    std::array<GVec, 4> frame;
    bool lambda_free = true;
    MixedHodgeStructure structure;
    MhsVerdict verdict;
};

/// t_k = 0 in the ũ-frame; ũ_j then identifies with u_j.
inline LimitFiber limit_fiber(const DeformationFamily& f)
{
    LimitFiber out;
    for (std::size_t j = 0; j < 4; ++j) {
        GVec v;
        for (const auto& x : f.w[j]) {
            auto y = x.at_t_zero();
            if (y.involves(VarKind::Lambda) || y.involves(VarKind::LambdaBar) || !y.is_constant())
                out.lambda_free = false;
            v.push_back(y.constant_term());
        }
        out.frame[j] = std::move(v);
    }
    auto& h = out.structure;
    h.dim = 4;
    h.conj_matrix = f.conj4;
    h.W = f.W4;
    std::vector<GSpace> fp;
    for (int p = -2; p <= 2; ++p) {
        std::vector<GVec> gens(out.frame.begin(), out.frame.begin() + f.rank(p));
        fp.push_back(GSpace::span(4, gens));
    }
    h.F = DecreasingFiltration(4, -2, std::move(fp));
    out.verdict = check_mhs(h);
    return out;
}

struct Theorem15Verdict {
    bool holds = true;
    std::string witness; // e.g. "xi_1 w_3 = lam*t1*t2 w_4"
    explicit operator bool() const { return holds; }
};

/// ξ_k F^{-1} ⊆ F^{-1} over the parameter ring for every k.
inline Theorem15Verdict check_theorem15_hypothesis(const DeformationFamily& f)
{
    int r = f.rank(-1);
    for (int k = 1; k <= f.n(); ++k)
        for (int j = 0; j < r; ++j) {
            auto c = f.frame_coordinates(f.xi(k, f.w[static_cast<std::size_t>(j)]));
            for (int i = r; i < 4; ++i)
                if (!c[static_cast<std::size_t>(i)].is_zero())
                    return {false, "xi_" + std::to_string(k) + " w_" + std::to_string(j + 1) + " = " +
                                       c[static_cast<std::size_t>(i)].str() + " w_" + std::to_string(i + 1) + " mod F^-1"};
        }
    return {};
}

struct Certificate {
    int n = 0;
    std::size_t target_dim = 0;
    std::string equation;
    std::string identity;
    bool identity_verified = false;
    std::optional<bool> feasible;
    std::optional<Gauss> lambda;
    std::vector<Rational> c;
    int truncation = 0;
    std::size_t unknowns = 0;
    std::size_t equations = 0;
};

namespace detail {

/// t-monomials t^μ with |μ| <= d, as exponent vectors of length n.
inline std::vector<std::vector<int>> t_monomials(int n, int d)
{
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == n) {
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            cur[static_cast<std::size_t>(pos)] = e;
            rec(pos + 1, left - e);
        }
        cur[static_cast<std::size_t>(pos)] = 0;
    };
    rec(0, d);
    return out;
}

inline ParamElement t_monomial(const ParamRing& ring, const std::vector<int>& mu)
{
    ParamElement::Exponents ex(ring.nvars(), 0);
    for (int k = 1; k <= ring.n; ++k)
        ex[ring.slot({VarKind::T, k})] = mu[static_cast<std::size_t>(k - 1)];
    return ParamElement::monomial(ring, std::move(ex), Gauss(1));
}

/// Coefficient of t^mu (no other t, tb or z powers) as an element in λ only.
inline ParamElement t_coefficient(const ParamElement& x, const std::vector<int>& mu)
{
    const auto& ring = x.ring();
    ParamElement out(ring);
    for (const auto& [ex, c] : x.terms()) {
        bool match = true;
        for (int k = 1; k <= ring.n && match; ++k)
            match = ex[ring.slot({VarKind::T, k})] == mu[static_cast<std::size_t>(k - 1)] &&
                    ex[ring.slot({VarKind::TBar, k})] == 0 && ex[ring.slot({VarKind::Z, k})] == 0 &&
                    ex[ring.slot({VarKind::ZBar, k})] == 0;
        if (!match)
            continue;
        auto e2 = ex;
        for (int k = 1; k <= ring.n; ++k)
            e2[ring.slot({VarKind::T, k})] = 0;
        out += ParamElement::monomial(ring, std::move(e2), c);
    }
    return out;
}

/// w_4-coefficient of ξ_k w'_0 as a linear form: one entry per unknown
/// h_j[μ] plus one entry per c_k.
struct ObstructionForm {
    std::vector<std::pair<int, std::vector<int>>> unknowns; // (j, μ)
    std::vector<ParamElement> h_terms;                        // parallel to unknowns
    std::vector<ParamElement> c_terms;                        // coefficient of c_m, m = 1..n
};

inline ObstructionForm obstruction_form(const DeformationFamily& f, int k, int degree)
{
    ObstructionForm out;
    const auto& R = f.ring;
    std::array<ParamElement, 4> A;
    for (std::size_t j = 0; j < 4; ++j)
        A[j] = f.frame_coordinates(f.xi(k, f.w[j]))[3];
    for (int j = 1; j <= 4; ++j)
        for (const auto& mu : t_monomials(f.n(), degree)) {
            ParamElement tm = t_monomial(R, mu);
            ParamElement term = tm * A[static_cast<std::size_t>(j - 1)];
            if (j == 4)
                term += tm.xi(k);
            out.unknowns.emplace_back(j, mu);
            out.h_terms.push_back(std::move(term));
        }
    // ξ_k ũ'_0 = -c_k ũ_3, ũ_3 spanning Im N
    GVec e2 = unit_vector<Gauss>(4, 1);
    GVec u3 = f.N4 * e2;
    Gauss sign(0);
    for (std::size_t i = 0; i < 4; ++i)
        if (!u3[i].is_zero())
            sign = u3[i];
    ParamElement along = f.frame_coordinates(constant_vector(R, scale(sign.inverse(), u3)))[3];
    for (int m = 1; m <= f.n(); ++m)
        out.c_terms.push_back(m == k ? Gauss(-1) * along : ParamElement(R));
    return out;
}

inline std::string lambda_name(const ParamElement& coeff, const ParamRing& ring, bool& ok)
{
    auto lam = ParamElement::variable(ring, {VarKind::Lambda, 0});
    if (coeff == lam)
        return "";
    if (coeff == Gauss(-1) * lam)
        return "-";
    ok = false;
    return coeff.str();
}

} // namespace detail

/// Obstruction to a class (c_1..c_n) on the deformed orbit: target dimension
/// of H^1(I•), the equation from ξ_k w'_0 ∈ F^{-1}, the identity read off at
/// t_1...t_n, and (for numeric λ and c) exact feasibility of the system
/// truncated at the given degree.
inline Certificate theorem23_certificate(const NilpotentOrbit& orbit, const std::array<GVec, 4>& u, const Gauss& a_basis,
                                         FamilyParams params, const std::optional<std::vector<Rational>>& c, int degree)
{
    if (params.n < 2)
        throw std::invalid_argument("certificate requires n >= 2");
    if (degree < 0)
        throw std::invalid_argument("truncation degree must be nonnegative");
    int n = params.n;
    Certificate cert;
    cert.n = n;
    cert.lambda = params.lambda;
    cert.truncation = degree;
    if (c) {
        if (c->size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("expected " + std::to_string(n) + " values of c");
        cert.c = *c;
    }

    NilpotentOrbit pulled = orbit;
    pulled.family = NilpotentFamily::pullback(orbit.family.N.at(0), n);
    cert.target_dim = h(ic_complex(pulled.limit, pulled.family), 1).dim;

    params.truncation = std::max(params.truncation, degree + 2 * n + 4);
    FamilyParams symbolic = params;
    symbolic.lambda.reset();
    auto fs = build_family(orbit, u, a_basis, symbolic);
    std::vector<int> ones(static_cast<std::size_t>(n), 1);
    std::vector<detail::ObstructionForm> forms;
    for (int k = 1; k <= n; ++k)
        forms.push_back(detail::obstruction_form(fs, k, n));

    {
        const auto& f1 = forms[0];
        std::string eq;
        for (std::size_t i = 0; i < f1.unknowns.size(); ++i) {
            const auto& [j, mu] = f1.unknowns[i];
            if (mu != std::vector<int>(static_cast<std::size_t>(n), 0))
                continue;
            ParamElement a = fs.frame_coordinates(fs.xi(1, fs.w[static_cast<std::size_t>(j - 1)]))[3];
            if (!a.is_zero())
                eq += "(" + a.str() + ")*h" + std::to_string(j) + " + ";
        }
        ParamElement cc = Gauss(-1) * f1.c_terms[0];
        cert.equation = eq + "xi_k(h4) - (" + cc.str() + ")*c_k = 0";
    }

    bool ok = true;
    std::vector<std::string> parts;
    for (int k = 1; k < n; ++k) {
        const auto& fa = forms[static_cast<std::size_t>(k - 1)];
        const auto& fb = forms[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < fa.h_terms.size(); ++i)
            if (!detail::t_coefficient(fa.h_terms[i] - fb.h_terms[i], ones).is_zero())
                ok = false;
        // coefficient of c_k in (E_k - E_{k+1}) at t_1...t_n
        ParamElement ck = detail::t_coefficient(fa.c_terms[static_cast<std::size_t>(k - 1)] - fb.c_terms[static_cast<std::size_t>(k - 1)], ones);
        ParamElement ck1 = detail::t_coefficient(fa.c_terms[static_cast<std::size_t>(k)] - fb.c_terms[static_cast<std::size_t>(k)], ones);
        if (!(ck == Gauss(-1) * ck1))
            ok = false;
        std::string prefix = detail::lambda_name(Gauss(-1) * ck, fs.ring, ok);
        parts.push_back(prefix + "λ(c_" + std::to_string(k) + "−c_" + std::to_string(k + 1) + ")=0");
    }
    cert.identity_verified = ok;
    for (std::size_t i = 0; i < parts.size(); ++i)
        cert.identity += (i ? ", " : "") + parts[i];

    if (params.lambda && c) {
        auto fn = build_family(orbit, u, a_basis, params);
        auto monos = detail::t_monomials(n, degree);
        std::vector<detail::ObstructionForm> nf;
        for (int k = 1; k <= n; ++k)
            nf.push_back(detail::obstruction_form(fn, k, degree));
        std::size_t nu = nf[0].unknowns.size();
        std::vector<GVec> rows;
        GVec rhs;
        for (int k = 1; k <= n; ++k) {
            const auto& form = nf[static_cast<std::size_t>(k - 1)];
            for (const auto& nu_mono : monos) {
                GVec row(nu, Gauss(0));
                for (std::size_t i = 0; i < nu; ++i)
                    row[i] = detail::t_coefficient(form.h_terms[i], nu_mono).constant_term();
                Gauss cpart(0);
                for (int m = 0; m < n; ++m)
                    cpart += Gauss((*c)[static_cast<std::size_t>(m)]) *
                             detail::t_coefficient(form.c_terms[static_cast<std::size_t>(m)], nu_mono).constant_term();
                rows.push_back(std::move(row));
                rhs.push_back(Gauss(-1) * cpart);
            }
        }
        cert.unknowns = nu;
        cert.equations = rows.size();
        cert.feasible = solve(GMatrix::from_rows(rows, nu), rhs).has_value();
    }
    return cert;
}

} // namespace mhs
