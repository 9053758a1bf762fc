#pragma once

// Symbolic words  scalar * sign * L ** gen^p ** e_*^{zeta(H + shift)} ** gen^q ** R
// (** is the twisted product, H = (1/ih) u o v), quadrature-weighted sums of
// words, and the operations built from them: vacuums, matrix elements,
// star-delta, Fourier coefficients, one-sided inverses and contour residues.
//
// Contours live in the zeta-variable of the generator H; the closed form is
// evaluated at t = zeta/2.  Sheet signs of contour nodes are tracked by
// analytic continuation along the contour, anchored at zeta = 0.

#include <functional>
#include <utility>
#include <vector>

#include "weylstar/starexp.hpp"

namespace weylstar {

struct QuadratureConfig {
    int periodic_nodes = 256;   // nodes per periodic contour
    double panel_width = 0.5;   // Gauss-Legendre panel width on line contours
    double trunc_tol = 1e-14;   // truncate infinite integrals below this amplitude
    double margin = 1e-3;       // singularity margin for continuation paths
};

struct GenPow {
    char gen = 'u'; // 'u' or 'v'
    int pow = 0;
};

struct Word {
    cplx scalar{1.0};
    int sign = +1;
    WeylPoly left_extra = WeylPoly::one();   // leftmost polynomial factor
    std::vector<GenPow> left_gens;           // outermost-to-innermost
    cplx zeta{0.0};
    cplx shift{0.0};                         // e_*^{zeta (H + shift)}
    std::vector<GenPow> right_gens;          // innermost-to-outermost
    WeylPoly right_extra = WeylPoly::one();  // rightmost polynomial factor

    bool is_polynomial() const { return zeta == cplx(0.0); }
};

// K-expression of the word as polynomial-dressed Gaussian.
inline GaussPoly realize(const Word& w, const ExprParam& K, const HbarConfig& h = HbarConfig()) {
    GaussPoly G;
    if (!w.is_polynomial()) G = exp_2H(w.zeta * 0.5, K, h);

    for (const auto& gp : w.right_gens)
        for (int k = 0; k < gp.pow; ++k) star_right_gen_inplace(G, gp.gen, K, h);
    if (!w.right_extra.is_one()) G = star_right(G, w.right_extra, K, h);
    for (auto it = w.left_gens.rbegin(); it != w.left_gens.rend(); ++it)
        for (int k = 0; k < it->pow; ++k) star_left_gen_inplace(it->gen, G, K, h);
    if (!w.left_extra.is_one()) G = star_left(w.left_extra, G, K, h);

    G.amp *= w.scalar * double(w.sign) * std::exp(w.zeta * w.shift);
    return G;
}

namespace detail {

inline cplx slide_left_shift(const GenPow& gp) {
    // e_*^{z(H+s)} ** u^n = u^n ** e_*^{z(H+s+n)};  e ** v^n = v^n ** e(s-n).
    return (gp.gen == 'u') ? cplx(gp.pow) : cplx(-gp.pow);
}
inline cplx slide_right_shift(const GenPow& gp) {
    // u^n ** e_*^{z(H+s)} = e(s-n) ** u^n;  v^n ** e = e(s+n) ** v^n.
    return (gp.gen == 'u') ? cplx(-gp.pow) : cplx(gp.pow);
}

inline void append_gens(std::vector<GenPow>& dst, const std::vector<GenPow>& src) {
    for (const auto& gp : src) {
        if (gp.pow == 0) continue;
        if (!dst.empty() && dst.back().gen == gp.gen)
            dst.back().pow += gp.pow;
        else
            dst.push_back(gp);
    }
}

// Reduce a polynomial word (zeta = 0) to its K-expression.
inline WeylPoly polynomial_of_word(const Word& w, const ExprParam& K, const HbarConfig& h) {
    GaussPoly G = realize(w, K, h);
    WeylPoly p = G.poly;
    p *= G.amp;
    return p;
}

} // namespace detail

// Normal-form product of two words.  Inner boundary polynomials slide across
// the exponentials and the exponential factors merge by the exponential law;
// the sheet signs compose multiplicatively.  Callers that track branches
// along contours override the sign afterwards.
inline Word word_mul(const Word& w1, const Word& w2, const ExprParam& K,
                     const HbarConfig& h = HbarConfig()) {
    if (w1.is_polynomial()) {
        WeylPoly p = detail::polynomial_of_word(w1, K, h);
        Word r = w2;
        r.left_extra = w2.left_extra.is_one() ? p : star_product(p, w2.left_extra, K, h);
        return r;
    }
    if (w2.is_polynomial()) {
        WeylPoly p = detail::polynomial_of_word(w2, K, h);
        Word r = w1;
        r.right_extra = w1.right_extra.is_one() ? p : star_product(w1.right_extra, p, K, h);
        return r;
    }
    if (!w1.right_extra.is_one() || !w2.left_extra.is_one())
        throw ValidationError("word_mul requires mergeable inner boundaries");

    // Slide w1's right group left across its exponential and w2's left group
    // right across its exponential, then merge the exponentials.
    cplx s1 = w1.shift, s2 = w2.shift;
    for (const auto& gp : w1.right_gens) s1 += detail::slide_left_shift(gp);
    for (const auto& gp : w2.left_gens) s2 += detail::slide_right_shift(gp);

    Word r;
    r.scalar = w1.scalar * w2.scalar * std::exp(w1.zeta * s1 + w2.zeta * s2);
    r.sign = w1.sign * w2.sign;
    r.left_extra = w1.left_extra;
    r.left_gens = w1.left_gens;
    detail::append_gens(r.left_gens, w1.right_gens);
    r.zeta = w1.zeta + w2.zeta;
    r.shift = 0.0;
    detail::append_gens(r.right_gens, w2.left_gens);
    detail::append_gens(r.right_gens, w2.right_gens);
    r.right_extra = w2.right_extra;
    if (r.zeta == cplx(0.0)) {
        // Exponentials cancelled; the scalar already carries the e^{z s} parts.
        r.shift = 0.0;
    }
    return r;
}

// Quadrature discretization of an integral of words.
struct IntegralNode {
    cplx weight{1.0};
    Word word;
};

struct IntegralElement {
    enum class Kind { Vertical, RealLine, Generic };

    std::vector<IntegralNode> nodes;
    Kind kind = Kind::Generic;
    double anchor_re = 0.0; // Vertical: contour Re (zeta units); RealLine: 0

    IntegralElement& scale(cplx s) {
        for (auto& n : nodes) n.weight *= s;
        return *this;
    }
};

inline EvalGrid eval_grid(const IntegralElement& elem, const EvalGrid& grid, const ExprParam& K,
                          const HbarConfig& h = HbarConfig()) {
    EvalGrid out;
    out.points = grid.points;
    out.values.assign(grid.points.size(), cplx(0.0));
    for (const auto& n : elem.nodes) {
        GaussPoly G = realize(n.word, K, h);
        for (size_t i = 0; i < out.points.size(); ++i)
            out.values[i] += n.weight * G.eval(out.points[i].first, out.points[i].second, h);
    }
    return out;
}

inline IntegralElement apply_left(const WeylPoly& p, IntegralElement elem, const ExprParam& K,
                                  const HbarConfig& h = HbarConfig()) {
    for (auto& n : elem.nodes) {
        Word& w = n.word;
        w.left_extra = w.left_extra.is_one() ? p : star_product(p, w.left_extra, K, h);
    }
    return elem;
}

inline IntegralElement apply_right(IntegralElement elem, const WeylPoly& p, const ExprParam& K,
                                   const HbarConfig& h = HbarConfig()) {
    for (auto& n : elem.nodes) {
        Word& w = n.word;
        w.right_extra = w.right_extra.is_one() ? p : star_product(w.right_extra, p, K, h);
    }
    return elem;
}

inline IntegralElement apply_left_gen(char gen, int pow, IntegralElement elem) {
    if (pow < 0) throw IndexOutOfRange("negative generator power");
    if (pow == 0) return elem;
    for (auto& n : elem.nodes) {
        Word& w = n.word;
        if (!w.left_extra.is_one())
            throw ValidationError("apply_left_gen after apply_left is unsupported");
        std::vector<GenPow> g{{gen, pow}};
        detail::append_gens(g, w.left_gens);
        w.left_gens = std::move(g);
    }
    return elem;
}

inline IntegralElement apply_right_gen(IntegralElement elem, char gen, int pow) {
    if (pow < 0) throw IndexOutOfRange("negative generator power");
    if (pow == 0) return elem;
    for (auto& n : elem.nodes) {
        Word& w = n.word;
        if (!w.right_extra.is_one())
            throw ValidationError("apply_right_gen after apply_right is unsupported");
        detail::append_gens(w.right_gens, {{gen, pow}});
    }
    return elem;
}

// ---------------------------------------------------------------------------
// Contour builders
// ---------------------------------------------------------------------------

namespace detail {

inline int sheet_sign(const BranchTracker& tr) { return tr.sign_vs_principal(); }

// Gauss-Legendre 8-point rule on [-1, 1].
inline constexpr double kGL8X[8] = {-0.9602898564975363, -0.7966664774136267,
                                    -0.5255324099163290, -0.1834346424956498,
                                    0.1834346424956498,  0.5255324099163290,
                                    0.7966664774136267,  0.9602898564975363};
inline constexpr double kGL8W[8] = {0.1012285362903763, 0.2223810344533745,
                                    0.3137066458778873, 0.3626837833783620,
                                    0.3626837833783620, 0.3137066458778873,
                                    0.2223810344533745, 0.1012285362903763};

} // namespace detail

// Periodic vertical contour: norm * \int_{t_lo}^{t_hi} extra(zeta) e_*^{zeta(H+lam)} dt
// along zeta = s + i t, with midpoint nodes and tracked sheet signs.
inline IntegralElement vertical_periodic_element(
    double s, cplx lam, double t_lo, double t_hi, cplx norm, const ExprParam& K,
    const HbarConfig& h, const QuadratureConfig& cfg = QuadratureConfig(),
    const std::function<cplx(cplx)>& extra = nullptr) {
    (void)h;
    int n = cfg.periodic_nodes;
    double dt = (t_hi - t_lo) / n;

    IntegralElement elem;
    elem.kind = IntegralElement::Kind::Vertical;
    elem.anchor_re = s;
    elem.nodes.resize(n);

    BranchTracker anchor(K, cfg.margin);
    anchor.advance_to(cplx(s * 0.5, 0.0)); // horizontal anchor leg at height 0

    auto make_node = [&](int idx, const BranchTracker& tr, double t) {
        IntegralNode node;
        cplx zeta(s, t);
        node.weight = norm * dt;
        if (extra) node.weight *= extra(zeta);
        node.word.zeta = zeta;
        node.word.shift = lam;
        node.word.sign = detail::sheet_sign(tr);
        elem.nodes[idx] = std::move(node);
    };

    // Downward pass (heights below the anchor), then upward pass.
    {
        BranchTracker tr = anchor;
        for (int k = n - 1; k >= 0; --k) {
            double t = t_lo + (k + 0.5) * dt;
            if (t >= 0.0) continue;
            tr.advance_to(cplx(s * 0.5, t * 0.5));
            make_node(k, tr, t);
        }
    }
    {
        BranchTracker tr = anchor;
        for (int k = 0; k < n; ++k) {
            double t = t_lo + (k + 0.5) * dt;
            if (t < 0.0) continue;
            tr.advance_to(cplx(s * 0.5, t * 0.5));
            make_node(k, tr, t);
        }
    }
    return elem;
}

// Line contour along the real zeta-axis: \int_lo^hi w(s) e_*^{s(H+lam)} ds with
// Gauss-Legendre panels and tracked signs.
inline IntegralElement real_line_element(double lo, double hi, cplx lam,
                                         const std::function<cplx(double)>& weight_fn,
                                         const ExprParam& K, const HbarConfig& h,
                                         const QuadratureConfig& cfg = QuadratureConfig()) {
    (void)h;
    if (!(hi > lo)) throw ValidationError("empty integration range");
    int panels = std::max(1, int(std::ceil((hi - lo) / cfg.panel_width)));
    double pw = (hi - lo) / panels;

    struct Raw {
        double s;
        cplx w;
    };
    std::vector<Raw> raw;
    raw.reserve(size_t(panels) * 8);
    for (int p = 0; p < panels; ++p) {
        double a = lo + p * pw, b = a + pw;
        for (int q = 0; q < 8; ++q) {
            double s = 0.5 * (a + b) + 0.5 * (b - a) * detail::kGL8X[q];
            raw.push_back({s, 0.5 * (b - a) * detail::kGL8W[q] * weight_fn(s)});
        }
    }

    IntegralElement elem;
    elem.kind = IntegralElement::Kind::RealLine;
    elem.anchor_re = 0.0;
    elem.nodes.resize(raw.size());

    auto fill = [&](size_t idx, const BranchTracker& tr) {
        IntegralNode node;
        node.weight = raw[idx].w;
        node.word.zeta = cplx(raw[idx].s, 0.0);
        node.word.shift = lam;
        node.word.sign = detail::sheet_sign(tr);
        elem.nodes[idx] = std::move(node);
    };

    // March outward from 0 in both directions.
    {
        BranchTracker tr(K, cfg.margin);
        for (size_t i = raw.size(); i-- > 0;) {
            if (raw[i].s > 0.0) continue;
            tr.advance_to(cplx(raw[i].s * 0.5, 0.0));
            fill(i, tr);
        }
    }
    {
        BranchTracker tr(K, cfg.margin);
        for (size_t i = 0; i < raw.size(); ++i) {
            if (raw[i].s <= 0.0) continue;
            tr.advance_to(cplx(raw[i].s * 0.5, 0.0));
            fill(i, tr);
        }
    }
    return elem;
}

// Family sum with point nodes at real zeta positions (series-type elements).
inline IntegralElement family_point_sum(const std::vector<std::pair<double, cplx>>& pos_weight,
                                        cplx lam, const ExprParam& K, const HbarConfig& h,
                                        const QuadratureConfig& cfg = QuadratureConfig()) {
    (void)h;
    std::vector<size_t> order(pos_weight.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return pos_weight[a].first < pos_weight[b].first; });

    IntegralElement elem;
    elem.kind = IntegralElement::Kind::RealLine;
    elem.anchor_re = 0.0;
    elem.nodes.resize(pos_weight.size());

    auto fill = [&](size_t idx, const BranchTracker& tr) {
        IntegralNode node;
        node.weight = pos_weight[idx].second;
        node.word.zeta = cplx(pos_weight[idx].first, 0.0);
        node.word.shift = lam;
        node.word.sign = detail::sheet_sign(tr);
        elem.nodes[idx] = std::move(node);
    };

    {
        BranchTracker tr(K, cfg.margin);
        for (size_t i = order.size(); i-- > 0;) {
            size_t idx = order[i];
            if (pos_weight[idx].first > 0.0) continue;
            tr.advance_to(cplx(pos_weight[idx].first * 0.5, 0.0));
            fill(idx, tr);
        }
    }
    {
        BranchTracker tr(K, cfg.margin);
        for (size_t i = 0; i < order.size(); ++i) {
            size_t idx = order[i];
            if (pos_weight[idx].first <= 0.0) continue;
            tr.advance_to(cplx(pos_weight[idx].first * 0.5, 0.0));
            fill(idx, tr);
        }
    }
    return elem;
}

// ---------------------------------------------------------------------------
// Products of integral elements
// ---------------------------------------------------------------------------

namespace detail {

inline bool uniform_word_structure(const IntegralElement& e) {
    if (e.nodes.empty()) return false;
    const Word& w0 = e.nodes.front().word;
    auto same_gens = [](const std::vector<GenPow>& a, const std::vector<GenPow>& b) {
        if (a.size() != b.size()) return false;
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i].gen != b[i].gen || a[i].pow != b[i].pow) return false;
        return true;
    };
    for (const auto& n : e.nodes) {
        const Word& w = n.word;
        if (w.shift != w0.shift || !same_gens(w.left_gens, w0.left_gens) ||
            !same_gens(w.right_gens, w0.right_gens) || !w.left_extra.is_one() ||
            !w.right_extra.is_one() || !w0.left_extra.is_one() || !w0.right_extra.is_one())
            return false;
    }
    return true;
}

} // namespace detail

// Product of two quadrature elements: the double sum over merged words.  The
// sheet of each merged node is obtained by continuing the family from the
// first factor's node along the translate of the second factor's contour
// path, which is what the exponential law requires.
//
// For two vertical contours with uniform word structure the double sum is a
// convolution: all pairs on one anti-diagonal share the merged parameter, so
// they fold into a single node per tracked sign.
inline IntegralElement product(const IntegralElement& A, const IntegralElement& B,
                               const ExprParam& K, const HbarConfig& h = HbarConfig(),
                               const QuadratureConfig& cfg = QuadratureConfig(),
                               bool allow_collapse = true) {
    if (B.kind == IntegralElement::Kind::Generic)
        throw ValidationError("product requires a contour-backed second factor");

    // Sweep order over B's nodes: outward from its anchor point.
    std::vector<size_t> order(B.nodes.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto key = [&](size_t i) {
        const cplx z = B.nodes[i].word.zeta;
        return (B.kind == IntegralElement::Kind::Vertical) ? std::imag(z)
                                                           : std::real(z) - B.anchor_re;
    };
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return key(a) < key(b); });
    size_t first_up = 0;
    while (first_up < order.size() && key(order[first_up]) < 0.0) ++first_up;

    const bool collapse = allow_collapse && A.kind == IntegralElement::Kind::Vertical &&
                          B.kind == IntegralElement::Kind::Vertical &&
                          detail::uniform_word_structure(A) && detail::uniform_word_structure(B);

    IntegralElement out;
    out.kind = IntegralElement::Kind::Generic;

    // Merged word template (collapse path): slide shifts once; per-pair
    // scalars e^{z1 s1'} e^{z2 s2'} fold into the node weights.
    Word tmpl;
    cplx s1p = 0.0, s2p = 0.0;
    std::vector<cplx> phase_a, phase_b;
    if (collapse) {
        const Word& wa = A.nodes.front().word;
        const Word& wb = B.nodes.front().word;
        s1p = wa.shift;
        for (const auto& gp : wa.right_gens) s1p += detail::slide_left_shift(gp);
        s2p = wb.shift;
        for (const auto& gp : wb.left_gens) s2p += detail::slide_right_shift(gp);
        tmpl.left_gens = wa.left_gens;
        detail::append_gens(tmpl.left_gens, wa.right_gens);
        detail::append_gens(tmpl.right_gens, wb.left_gens);
        detail::append_gens(tmpl.right_gens, wb.right_gens);
        phase_a.reserve(A.nodes.size());
        for (const auto& n : A.nodes)
            phase_a.push_back(n.weight * n.word.scalar * std::exp(n.word.zeta * s1p));
        phase_b.reserve(B.nodes.size());
        for (const auto& n : B.nodes)
            phase_b.push_back(n.weight * n.word.scalar * std::exp(n.word.zeta * s2p));
    } else {
        out.nodes.reserve(A.nodes.size() * B.nodes.size());
    }

    // collapse accumulators per (anti-diagonal, sign); the sheet of each pair
    // is measured against one reference root per diagonal, because merged
    // points can land exactly on the principal branch cut
    const long nb_count = long(B.nodes.size());
    std::vector<cplx> acc_pos, acc_neg;
    std::vector<cplx> diag_zeta, diag_root;
    std::vector<char> seen;
    if (collapse) {
        size_t diags = A.nodes.size() + B.nodes.size() - 1;
        acc_pos.assign(diags, 0.0);
        acc_neg.assign(diags, 0.0);
        diag_zeta.assign(diags, 0.0);
        diag_root.assign(diags, 0.0);
        seen.assign(diags, 0);
    }

    for (size_t ai = 0; ai < A.nodes.size(); ++ai) {
        const auto& na = A.nodes[ai];
        const cplx za = na.word.zeta;
        const cplx ta = za * 0.5;
        cplx sqrt_fa =
            double(na.word.sign) * std::sqrt(detail::radicand(ta, K)); // continued sheet at za

        BranchTracker base(K, ta, sqrt_fa, cfg.margin);
        // Translated anchor leg of B's canonical path.
        base.advance_to(ta + cplx(B.anchor_re * 0.5, 0.0));

        auto emit = [&](size_t bi, const BranchTracker& tr) {
            const auto& nb = B.nodes[bi];
            if (collapse) {
                size_t d = ai + bi;
                if (!seen[d]) {
                    diag_zeta[d] = za + nb.word.zeta;
                    diag_root[d] = std::sqrt(detail::radicand(diag_zeta[d] * 0.5, K));
                    seen[d] = 1;
                }
                int sign = std::real(tr.sqrt_f() / diag_root[d]) > 0.0 ? +1 : -1;
                (sign > 0 ? acc_pos : acc_neg)[d] += phase_a[ai] * phase_b[bi];
            } else {
                Word merged = word_mul(na.word, nb.word, K, h);
                merged.sign = detail::sheet_sign(tr);
                out.nodes.push_back({na.weight * nb.weight, std::move(merged)});
            }
        };

        {
            BranchTracker tr = base;
            for (size_t i = first_up; i-- > 0;) {
                size_t bi = order[i];
                tr.advance_to(ta + B.nodes[bi].word.zeta * 0.5);
                emit(bi, tr);
            }
        }
        {
            BranchTracker tr = base;
            for (size_t i = first_up; i < order.size(); ++i) {
                size_t bi = order[i];
                tr.advance_to(ta + B.nodes[bi].word.zeta * 0.5);
                emit(bi, tr);
            }
        }
    }

    if (collapse) {
        out.nodes.reserve(2 * (A.nodes.size() + size_t(nb_count)));
        for (size_t d = 0; d < acc_pos.size(); ++d) {
            for (int s : {+1, -1}) {
                cplx w = (s > 0) ? acc_pos[d] : acc_neg[d];
                if (w == cplx(0.0)) continue;
                Word word = tmpl;
                word.zeta = diag_zeta[d];
                word.sign = s;
                out.nodes.push_back({w, std::move(word)});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Named elements
// ---------------------------------------------------------------------------

enum class VacuumKind { Vac, BarVac, PseudoVac };

// Exchanging interval in the zeta-variable of the generator H.
inline std::pair<double, double> interval_H(const ExprParam& K) {
    auto [a, b] = exchanging_interval(K);
    return {2.0 * a, 2.0 * b};
}

inline IntegralElement vacuum(VacuumKind kind, const ExprParam& K,
                              const HbarConfig& h = HbarConfig(),
                              const QuadratureConfig& cfg = QuadratureConfig()) {
    KClass cls = classify(K);
    if (cls.tag == KClassTag::Degenerate) throw WrongClass("degenerate expression parameter");
    auto [A, B] = interval_H(K);

    double s = 0.0;
    cplx lam = 0.0;
    switch (kind) {
        case VacuumKind::Vac:
            s = A - 1.0;
            lam = -0.5;
            break;
        case VacuumKind::BarVac:
            s = B + 1.0;
            lam = 0.5;
            break;
        case VacuumKind::PseudoVac:
            if (cls.tag != KClassTag::Kzero)
                throw WrongClass("pseudo-vacuum requires a Kzero parameter");
            s = 0.5 * (A + B);
            lam = 0.0;
            break;
    }
    return vertical_periodic_element(s, lam, -2.0 * M_PI, 2.0 * M_PI, 1.0 / (4.0 * M_PI), K, h,
                                     cfg);
}

enum class MatrixKind { E, Ebar, D };

inline IntegralElement matrix_element(MatrixKind kind, int p, int q, const ExprParam& K,
                                      const HbarConfig& h = HbarConfig(),
                                      const QuadratureConfig& cfg = QuadratureConfig()) {
    cplx ih = h.ih();
    switch (kind) {
        case MatrixKind::E: {
            if (p < 0 || q < 0) throw IndexOutOfRange("E indices must be nonnegative");
            IntegralElement e = vacuum(VacuumKind::Vac, K, h, cfg);
            e = apply_left_gen('u', p, std::move(e));
            e = apply_right_gen(std::move(e), 'v', q);
            // Factor-wise roots: under this branch convention E_{k,k} equals
            // the k-th Fourier coefficient of the family.
            cplx norm = 1.0 / (std::sqrt(detail::factorial(p)) * std::sqrt(detail::factorial(q)) *
                               std::pow(std::sqrt(ih), double(p + q)));
            e.scale(norm);
            return e;
        }
        case MatrixKind::Ebar: {
            if (p < 0 || q < 0) throw IndexOutOfRange("Ebar indices must be nonnegative");
            IntegralElement e = vacuum(VacuumKind::BarVac, K, h, cfg);
            e = apply_left_gen('v', p, std::move(e));
            e = apply_right_gen(std::move(e), 'u', q);
            cplx norm = std::pow(I, double(p + q)) /
                        (std::sqrt(detail::factorial(p)) * std::sqrt(detail::factorial(q)) *
                         std::pow(std::sqrt(ih), double(p + q)));
            e.scale(norm);
            return e;
        }
        case MatrixKind::D: {
            IntegralElement e = vacuum(VacuumKind::PseudoVac, K, h, cfg);
            e = apply_left_gen(p >= 0 ? 'u' : 'v', std::abs(p), std::move(e));
            e = apply_right_gen(std::move(e), q >= 0 ? 'v' : 'u', std::abs(q));
            // Factor-wise principal roots; for negative indices this branch
            // choice is the one under which D_{n,n} equals the n-th Fourier
            // coefficient of the family.
            cplx norm = 1.0 / (std::sqrt(pochhammer(0.5, p)) * std::sqrt(pochhammer(0.5, q)) *
                               std::pow(std::sqrt(ih), double(std::abs(p) + std::abs(q))));
            e.scale(norm);
            return e;
        }
    }
    throw ValidationError("unknown matrix kind");
}

enum class FourierKind { Etilde, Dtilde, EbarTilde };

inline IntegralElement fourier_coeff(FourierKind kind, int n, double s, const ExprParam& K,
                                     const HbarConfig& h = HbarConfig(),
                                     const QuadratureConfig& cfg = QuadratureConfig()) {
    auto [A, B] = interval_H(K);
    cplx mu;
    switch (kind) {
        case FourierKind::Etilde:
            if (!(s < A)) throw WrongRegion("Etilde requires s < a");
            mu = double(n) + 0.5;
            break;
        case FourierKind::Dtilde:
            if (!(s > A && s < B)) throw WrongRegion("Dtilde requires a < s < b");
            mu = double(n);
            break;
        case FourierKind::EbarTilde:
            if (!(s > B)) throw WrongRegion("EbarTilde requires s > b");
            mu = -(double(n) + 0.5);
            break;
    }
    return vertical_periodic_element(s, -mu, 0.0, 2.0 * M_PI, 1.0 / (2.0 * M_PI), K, h, cfg);
}

// One-sided inverses of (z + H).
inline IntegralElement inverse_pm(cplx z, int sign, const ExprParam& K,
                                  const HbarConfig& h = HbarConfig(),
                                  const QuadratureConfig& cfg = QuadratureConfig()) {
    double logtol = -std::log(cfg.trunc_tol);
    if (sign > 0) {
        if (!(std::real(z) > -0.5)) throw OutOfHalfPlane("(z+H)^{-1}_+ requires Re z > -1/2");
        double rate = std::real(z) + 0.5;
        double S = std::min(logtol / rate + 5.0, 4000.0);
        return real_line_element(-S, 0.0, z, [](double) { return cplx(1.0); }, K, h, cfg);
    }
    if (!(std::real(z) < 0.5)) throw OutOfHalfPlane("(z+H)^{-1}_- requires Re z < 1/2");
    double rate = 0.5 - std::real(z);
    double S = std::min(logtol / rate + 5.0, 4000.0);
    IntegralElement e = real_line_element(0.0, S, z, [](double) { return cplx(1.0); }, K, h, cfg);
    e.scale(-1.0);
    return e;
}

// delta_*(i z + (1/hbar) u o v - xi): line integral of the family.
inline IntegralElement star_delta(cplx z, double xi, const ExprParam& K,
                                  const HbarConfig& h = HbarConfig(),
                                  const QuadratureConfig& cfg = QuadratureConfig()) {
    if (!(std::abs(std::real(z)) < 0.5)) throw OutOfStrip("star_delta requires |Re z| < 1/2");
    double logtol = -std::log(cfg.trunc_tol);
    double Sm = logtol / (0.5 + std::real(z)) + 5.0;
    double Sp = logtol / (0.5 - std::real(z)) + 5.0;
    return real_line_element(-Sm, Sp, z + I * xi, [](double) { return cplx(1.0); }, K, h, cfg);
}

// Star-delta smeared against a Gaussian bump in xi (unit mass, center xi0):
// the s-integrand acquires the factor exp(i s xi0 - w^2 s^2 / 2).
inline IntegralElement star_delta_smeared(cplx z, double xi0, double width, const ExprParam& K,
                                          const HbarConfig& h = HbarConfig(),
                                          const QuadratureConfig& cfg = QuadratureConfig()) {
    if (!(std::abs(std::real(z)) < 0.5)) throw OutOfStrip("star_delta requires |Re z| < 1/2");
    if (!(width > 0.0)) throw ValidationError("smearing width must be positive");
    double logtol = -std::log(cfg.trunc_tol);
    double Sgauss = std::sqrt(2.0 * logtol) / width + 1.0;
    double Sm = std::min(logtol / (0.5 + std::real(z)) + 5.0, Sgauss);
    double Sp = std::min(logtol / (0.5 - std::real(z)) + 5.0, Sgauss);
    return real_line_element(
        -Sm, Sp, z,
        [=](double s) { return std::exp(cplx(-0.5 * width * width * s * s, s * xi0)); }, K, h,
        cfg);
}

// Analytic continuation of the one-sided inverses past their convergence
// half-plane.  The far tail of the half-line integral is the geometric
// Fourier expansion of the family, which integrates in closed form:
//
//   (z+H)^{-1}_+  =  int_{-S}^0 e_*^{t(z+H)} dt
//                    + sum_{k<=m} e^{-S(z+k+1/2)}/(z+k+1/2) E_{k,k}
//   (z+H)^{-1}_-  = -int_0^{S} e_*^{t(z+H)} dt
//                    + sum_{k<=m} e^{ S(z-k-1/2)}/(z-k-1/2) Ebar_{k,k}
//
// valid off the explicit poles; the dropped tail decays like e^{-(S-|a|)k}.
// The diagonal elements are cached so a residue contour reuses them.
class ContinuedResolvent {
public:
    ContinuedResolvent(int hsign, const ExprParam& K, const HbarConfig& h = HbarConfig(),
                       const QuadratureConfig& cfg = QuadratureConfig(), int m = 8)
        : hsign_(hsign), K_(K), h_(h), cfg_(cfg), m_(m) {
        auto [A, B] = interval_H(K);
        S_ = std::max(std::abs(A), std::abs(B)) + 3.0;
        for (int k = 0; k <= m_; ++k) {
            head_plus_.push_back(matrix_element(MatrixKind::E, k, k, K, h, cfg));
            head_minus_.push_back(matrix_element(MatrixKind::Ebar, k, k, K, h, cfg));
        }
    }

    // Continued (z + hsign H)^{-1} on the chosen branch.
    IntegralElement at(cplx z, int branch) const {
        double guard = 1e-8;
        for (int k = 0; k <= m_; ++k) {
            cplx pole = (branch > 0) ? -(double(k) + 0.5) : (double(k) + 0.5);
            if (std::abs(z - pole) < guard) throw PoleError("continued inverse evaluated at a pole");
        }
        IntegralElement out;
        if (branch > 0) {
            out = real_line_element(
                hsign_ > 0 ? -S_ : 0.0, hsign_ > 0 ? 0.0 : S_, double(hsign_) * z,
                [](double) { return cplx(1.0); }, K_, h_, cfg_);
            const auto& head = (hsign_ > 0) ? head_plus_ : head_minus_;
            for (int k = 0; k <= m_; ++k) {
                cplx c = std::exp(-S_ * (z + double(k) + 0.5)) / (z + double(k) + 0.5);
                append_scaled(out, head[size_t(k)], c);
            }
        } else {
            out = real_line_element(
                hsign_ > 0 ? 0.0 : -S_, hsign_ > 0 ? S_ : 0.0, double(hsign_) * z,
                [](double) { return cplx(1.0); }, K_, h_, cfg_);
            out.scale(-1.0);
            const auto& head = (hsign_ > 0) ? head_minus_ : head_plus_;
            for (int k = 0; k <= m_; ++k) {
                cplx c = std::exp(S_ * (z - double(k) - 0.5)) / (z - double(k) - 0.5);
                append_scaled(out, head[size_t(k)], c);
            }
        }
        out.kind = IntegralElement::Kind::Generic;
        return out;
    }

    // Continued star-delta: difference of the two continued inverses, with
    // poles at -(k+1/2) (residue E_{k,k}) and +(k+1/2) (residue -Ebar_{k,k}).
    IntegralElement delta(cplx z) const {
        IntegralElement a = at(z, +1);
        IntegralElement b = at(z, -1);
        b.scale(-1.0);
        a.nodes.insert(a.nodes.end(), b.nodes.begin(), b.nodes.end());
        return a;
    }

private:
    static void append_scaled(IntegralElement& dst, IntegralElement src, cplx c) {
        src.scale(c);
        dst.nodes.insert(dst.nodes.end(), src.nodes.begin(), src.nodes.end());
    }

    int hsign_;
    ExprParam K_;
    HbarConfig h_;
    QuadratureConfig cfg_;
    int m_;
    double S_;
    std::vector<IntegralElement> head_plus_;
    std::vector<IntegralElement> head_minus_;
};

// (1/2 pi i) \oint f(w) dw around a circle, evaluated on a grid.
inline EvalGrid contour_residue(const std::function<IntegralElement(cplx)>& f, cplx center,
                                double radius, int n_nodes, const EvalGrid& grid,
                                const ExprParam& K, const HbarConfig& h = HbarConfig()) {
    EvalGrid out;
    out.points = grid.points;
    out.values.assign(grid.points.size(), cplx(0.0));
    double dth = 2.0 * M_PI / n_nodes;
    for (int k = 0; k < n_nodes; ++k) {
        double th = (k + 0.5) * dth;
        cplx w = center + radius * std::exp(I * th);
        IntegralElement fe;
        try {
            fe = f(w);
        } catch (const Error& e) {
            throw ContourHitsPole(std::string("integrand failed on contour: ") + e.what());
        }
        EvalGrid g = eval_grid(fe, grid, K, h);
        cplx jac = radius * std::exp(I * th) * dth / (2.0 * M_PI);
        for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += jac * g.values[i];
    }
    return out;
}

} // namespace weylstar
