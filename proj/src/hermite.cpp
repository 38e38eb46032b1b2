#include "asln/hermite.hpp"

#include "asln/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace asln::hermite {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double gauss_pdf(double x) {
    if (std::isinf(x)) return 0.0;
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Gaussian upper tail P(xi > a).
double gauss_tail(double a) {
    if (a == -kInf) return 1.0;
    if (a == kInf) return 0.0;
    return 0.5 * std::erfc(a / std::numbers::sqrt2);
}

// Pieces of the built-in piecewise-polynomial functions at unit scale:
// f(x) = poly(x) on (lo, hi). tanh has no such form.
struct Piece {
    double lo, hi;
    detail::Poly poly;
};

bool piecewise_form(Nonlinearity f, std::vector<Piece>& pieces) {
    switch (f) {
        case Nonlinearity::Sign:
            pieces = {{-kInf, 0.0, {-1.0}}, {0.0, kInf, {1.0}}};
            return true;
        case Nonlinearity::Relu:
            pieces = {{0.0, kInf, {0.0, 1.0}}};
            return true;
        case Nonlinearity::Cube:
            pieces = {{-kInf, kInf, {0.0, 0.0, 0.0, 1.0}}};
            return true;
        case Nonlinearity::Identity:
            pieces = {{-kInf, kInf, {0.0, 1.0}}};
            return true;
        case Nonlinearity::Tanh:
            return false;
    }
    return false;
}

// Rescale the argument: p(scale*x) as a polynomial in x.
detail::Poly scale_argument(const detail::Poly& p, double scale) {
    detail::Poly out(p.size());
    double s = 1.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        out[j] = p[j] * s;
        s *= scale;
    }
    return out;
}

const QuadratureRule& rule200() {
    static const QuadratureRule r = gauss_hermite(200);
    return r;
}

double quad_expect(const QuadratureRule& r, auto&& h) {
    double acc = 0.0;
    for (Index i = 0; i < r.nodes.size(); ++i) acc += r.weights(i) * h(r.nodes(i));
    return acc;
}

}  // namespace

namespace detail {

Poly he_poly(int n) {
    // He_0 = 1, He_1 = x, He_{k+1} = x He_k - k He_{k-1}; monic.
    Poly prev = {1.0};
    if (n == 0) return prev;
    Poly cur = {0.0, 1.0};
    for (int k = 1; k < n; ++k) {
        Poly next(cur.size() + 1, 0.0);
        for (std::size_t j = 0; j < cur.size(); ++j) next[j + 1] += cur[j];
        for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= k * prev[j];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

double poly_gauss_integral(const Poly& q, double lo, double hi) {
    // Expand q in the Hermite basis (monic, so back-substitution is exact),
    // then use integral_a^inf He_m phi = He_{m-1}(a) phi(a) for m >= 1 and
    // the Gaussian tail for m = 0.
    Poly rem = q;
    const int deg = static_cast<int>(q.size()) - 1;
    std::vector<double> coef(q.size(), 0.0);
    for (int m = deg; m >= 0; --m) {
        const double c = rem[m];
        coef[m] = c;
        if (c != 0.0) {
            const Poly hm = he_poly(m);
            for (std::size_t j = 0; j < hm.size(); ++j) rem[j] -= c * hm[j];
        }
    }
    auto upper = [](int m, double a) {
        if (m == 0) return gauss_tail(a);
        if (std::isinf(a)) return 0.0;
        return hermite_he(m - 1, a) * gauss_pdf(a);
    };
    double acc = 0.0;
    for (int m = 0; m <= deg; ++m)
        if (coef[m] != 0.0) acc += coef[m] * (upper(m, lo) - upper(m, hi));
    return acc;
}

}  // namespace detail

QuadratureRule gauss_hermite(int n) {
    if (n < 1) throw dimension_error("gauss_hermite: n must be >= 1");
    Matrix jacobi = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = std::sqrt(static_cast<double>(k));
        jacobi(k - 1, k) = b;
        jacobi(k, k - 1) = b;
    }
    const auto eig = spectral::sym_eig(jacobi);
    QuadratureRule out;
    out.nodes = eig.eigenvalues.reverse();  // ascending
    out.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        const double v0 = eig.eigenvectors(0, n - 1 - i);
        out.weights(i) = v0 * v0;  // total mass 1 for the normalized weight
    }
    return out;
}

double hermite_he(int n, double x) {
    if (n == 0) return 1.0;
    double prev = 1.0, cur = x;
    for (int k = 1; k < n; ++k) {
        const double next = x * cur - k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double expect_he(Nonlinearity f, int n, double scale) {
    if (n < 0) throw dimension_error("expect_he: n must be >= 0");
    std::vector<Piece> pieces;
    if (!piecewise_form(f, pieces)) {
        return quad_expect(rule200(),
                           [&](double x) { return apply(f, scale * x) * hermite_he(n, x); });
    }
    double acc = 0.0;
    for (const auto& piece : pieces) {
        const detail::Poly p = scale_argument(piece.poly, scale);
        const detail::Poly q = detail::poly_mul(p, detail::he_poly(n));
        // breakpoints are at 0 or +-inf, so they are scale-invariant
        acc += detail::poly_gauss_integral(q, piece.lo, piece.hi);
    }
    return acc;
}

double expect_sq(Nonlinearity f, double scale) {
    std::vector<Piece> pieces;
    if (!piecewise_form(f, pieces)) {
        return quad_expect(rule200(), [&](double x) {
            const double v = apply(f, scale * x);
            return v * v;
        });
    }
    double acc = 0.0;
    for (const auto& piece : pieces) {
        const detail::Poly p = scale_argument(piece.poly, scale);
        acc += detail::poly_gauss_integral(detail::poly_mul(p, p), piece.lo, piece.hi);
    }
    return acc;
}

}  // namespace asln::hermite
