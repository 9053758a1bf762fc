#pragma once

// Diagonal-matrix expressions over the E / Ebar / D bases: componentwise
// algebra and embedding of truncated series back into grid evaluations.

#include <functional>

#include "weylstar/word.hpp"

namespace weylstar {

enum class DiagBasis { Emat, EbarMat, Dmat };

inline const char* to_string(DiagBasis b) {
    switch (b) {
        case DiagBasis::Emat: return "E";
        case DiagBasis::EbarMat: return "Ebar";
        default: return "D";
    }
}

// Coefficient sequence against the diagonal matrix units, truncated at order
// N.  E and Ebar index over 0..N, D over -N..N.
class DiagSeries {
public:
    DiagSeries(DiagBasis basis, int N) : basis_(basis), N_(N) {
        if (N < 0) throw ValidationError("negative truncation order");
        coeffs_.assign(size_t(basis == DiagBasis::Dmat ? 2 * N + 1 : N + 1), cplx(0.0));
    }

    static DiagSeries from_fn(DiagBasis basis, int N, const std::function<cplx(int)>& f) {
        DiagSeries d(basis, N);
        for (int n = d.min_index(); n <= d.max_index(); ++n) d.set(n, f(n));
        return d;
    }

    DiagBasis basis() const { return basis_; }
    int order() const { return N_; }
    int min_index() const { return basis_ == DiagBasis::Dmat ? -N_ : 0; }
    int max_index() const { return N_; }

    cplx at(int n) const { return coeffs_[idx(n)]; }
    void set(int n, cplx c) { coeffs_[idx(n)] = c; }

    DiagSeries& operator*=(cplx s) {
        for (auto& c : coeffs_) c *= s;
        return *this;
    }

    static double distance(const DiagSeries& a, const DiagSeries& b) {
        check_compatible(a, b);
        double m = 0.0;
        for (size_t i = 0; i < a.coeffs_.size(); ++i)
            m = std::max(m, std::abs(a.coeffs_[i] - b.coeffs_[i]));
        return m;
    }

    friend DiagSeries diag_add(const DiagSeries& a, const DiagSeries& b) {
        check_compatible(a, b);
        DiagSeries r = a;
        for (size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] += b.coeffs_[i];
        return r;
    }

    friend DiagSeries diag_mul(const DiagSeries& a, const DiagSeries& b) {
        check_compatible(a, b);
        DiagSeries r = a;
        for (size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] *= b.coeffs_[i];
        return r;
    }

    friend DiagSeries diag_invert(const DiagSeries& a) {
        DiagSeries r = a;
        for (auto& c : r.coeffs_) {
            if (c == cplx(0.0)) throw ZeroComponent("diagonal inverse of a zero component");
            c = 1.0 / c;
        }
        return r;
    }

private:
    static void check_compatible(const DiagSeries& a, const DiagSeries& b) {
        if (a.basis_ != b.basis_ || a.N_ != b.N_)
            throw ValidationError("diagonal series bases or orders differ");
    }
    size_t idx(int n) const {
        int lo = min_index();
        if (n < lo || n > max_index()) throw IndexOutOfRange("diagonal index out of range");
        return size_t(n - lo);
    }

    DiagBasis basis_;
    int N_;
    std::vector<cplx> coeffs_;
};

// Additive pair of E and Ebar series; cross terms vanish (E Ebar = 0).
struct HybridDiag {
    DiagSeries epart;
    DiagSeries ebarpart;

    HybridDiag(DiagSeries e, DiagSeries eb) : epart(std::move(e)), ebarpart(std::move(eb)) {
        if (epart.basis() != DiagBasis::Emat || ebarpart.basis() != DiagBasis::EbarMat)
            throw ValidationError("hybrid requires an E part and an Ebar part");
    }
};

// Diagonal expression of e_*^{w (z + H)} in the given basis.
inline DiagSeries diag_exp(DiagBasis basis, cplx z, cplx w, int N) {
    return DiagSeries::from_fn(basis, N, [&](int n) -> cplx {
        switch (basis) {
            case DiagBasis::Emat: return std::exp(w * (z + double(n) + 0.5));
            case DiagBasis::Dmat: return std::exp(w * (z + double(n)));
            default: return std::exp(w * (z - double(n) - 0.5));
        }
    });
}

inline MatrixKind matrix_kind_of(DiagBasis b) {
    switch (b) {
        case DiagBasis::Emat: return MatrixKind::E;
        case DiagBasis::EbarMat: return MatrixKind::Ebar;
        default: return MatrixKind::D;
    }
}

// Sum_{n} coeff(n) * matrix_element(kind, n, n) evaluated on the grid.  When
// `require_convergence` is set, the expression-parameter class must match the
// basis for the infinite sum to make sense in Hol(C^2).
//
// The diagonal elements share one vacuum contour, so the sum is evaluated
// incrementally per contour node: E_{k,k} data follows from E_{k-1,k-1} by
// one u-application on the left and one v-application on the right.
inline EvalGrid diag_embed(const DiagSeries& d, const ExprParam& K, const EvalGrid& grid,
                           const HbarConfig& h = HbarConfig(),
                           const QuadratureConfig& cfg = QuadratureConfig(),
                           bool require_convergence = false) {
    if (require_convergence) {
        KClassTag tag = classify(K).tag;
        bool ok = (d.basis() == DiagBasis::Emat && tag == KClassTag::Kplus) ||
                  (d.basis() == DiagBasis::EbarMat && tag == KClassTag::Kminus) ||
                  (d.basis() == DiagBasis::Dmat && tag == KClassTag::Kzero);
        if (!ok) throw WrongClass("basis incompatible with expression-parameter class");
    }
    EvalGrid out;
    out.points = grid.points;
    out.values.assign(grid.points.size(), cplx(0.0));

    VacuumKind vk = d.basis() == DiagBasis::Emat      ? VacuumKind::Vac
                    : d.basis() == DiagBasis::EbarMat ? VacuumKind::BarVac
                                                      : VacuumKind::PseudoVac;
    IntegralElement base = vacuum(vk, K, h, cfg);
    cplx ih = h.ih();

    // norm(k): E: 1/(k! (ih)^k); Ebar: (-1)^k/(k! (ih)^k); D: 1/((1/2)_k (ih)^{|k|}).
    auto norm = [&](int k) -> cplx {
        switch (d.basis()) {
            case DiagBasis::Emat: return 1.0 / (detail::factorial(k) * std::pow(ih, double(k)));
            case DiagBasis::EbarMat:
                return std::pow(-1.0, double(k)) /
                       (detail::factorial(k) * std::pow(ih, double(k)));
            default:
                return 1.0 / (pochhammer(0.5, k) * std::pow(ih, double(std::abs(k))));
        }
    };
    char lg = d.basis() == DiagBasis::EbarMat ? 'v' : 'u';
    char rg = d.basis() == DiagBasis::EbarMat ? 'u' : 'v';

    for (const auto& node : base.nodes) {
        GaussPoly G = realize(node.word, K, h);
        // ascending indices 0..N
        GaussPoly Gk = G;
        for (int k = 0; k <= d.max_index(); ++k) {
            if (k > 0) {
                star_left_gen_inplace(lg, Gk, K, h);
                star_right_gen_inplace(Gk, rg, K, h);
            }
            cplx c = d.at(k) * norm(k) * node.weight;
            if (c == cplx(0.0)) continue;
            for (size_t i = 0; i < out.points.size(); ++i)
                out.values[i] += c * Gk.eval(out.points[i].first, out.points[i].second, h);
        }
        // descending indices for the D basis
        if (d.basis() == DiagBasis::Dmat && d.min_index() < 0) {
            GaussPoly Gm = G;
            for (int k = -1; k >= d.min_index(); --k) {
                star_left_gen_inplace('v', Gm, K, h);
                star_right_gen_inplace(Gm, 'u', K, h);
                cplx c = d.at(k) * norm(k) * node.weight;
                if (c == cplx(0.0)) continue;
                for (size_t i = 0; i < out.points.size(); ++i)
                    out.values[i] += c * Gm.eval(out.points[i].first, out.points[i].second, h);
            }
        }
    }
    return out;
}

inline EvalGrid diag_embed(const HybridDiag& d, const ExprParam& K, const EvalGrid& grid,
                           const HbarConfig& h = HbarConfig(),
                           const QuadratureConfig& cfg = QuadratureConfig()) {
    EvalGrid a = diag_embed(d.epart, K, grid, h, cfg);
    EvalGrid b = diag_embed(d.ebarpart, K, grid, h, cfg);
    a += b;
    return a;
}

// Tail magnitude |coeff(N)|, reported as a convergence diagnostic.
inline double diag_tail_estimate(const DiagSeries& d) {
    double m = std::abs(d.at(d.max_index()));
    if (d.basis() == DiagBasis::Dmat) m = std::max(m, std::abs(d.at(d.min_index())));
    return m;
}

} // namespace weylstar
