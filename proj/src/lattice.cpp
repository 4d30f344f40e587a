#include "sparsetrace/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace sparsetrace {

Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    Int p(s.substr(0, slash));
    Int q(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return Rat(p, q);
}

std::string rat_to_string(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

IMat IMat::identity(int n) {
    IMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

std::vector<Int> IMat::col(int c) const {
    std::vector<Int> v(rows);
    for (int r = 0; r < rows; ++r) v[r] = at(r, c);
    return v;
}

IMat mat_mul(const IMat& lhs, const IMat& rhs) {
    if (lhs.cols != rhs.rows) throw std::invalid_argument("matrix dimension mismatch");
    IMat out(lhs.rows, rhs.cols);
    for (int i = 0; i < lhs.rows; ++i)
        for (int k = 0; k < lhs.cols; ++k) {
            const Int& l = lhs.at(i, k);
            if (l == 0) continue;
            for (int j = 0; j < rhs.cols; ++j) out.at(i, j) += l * rhs.at(k, j);
        }
    return out;
}

std::vector<Int> mat_apply(const IMat& m, const std::vector<Int>& v) {
    if (m.cols != static_cast<int>(v.size())) throw std::invalid_argument("matrix/vector mismatch");
    std::vector<Int> out(m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out[i] += m.at(i, j) * v[j];
    return out;
}

Int determinant(const IMat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("determinant of non-square matrix");
    int n = m.rows;
    if (n == 0) return 1;
    // Bareiss fraction-free elimination.
    IMat w = m;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (w.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (w.at(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                w.at(i, j) = (w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j)) / prev;
        prev = w.at(k, k);
    }
    return sign > 0 ? w.at(n - 1, n - 1) : -w.at(n - 1, n - 1);
}

std::optional<std::vector<Rat>> solve_rational(const IMat& m, const std::vector<Rat>& b) {
    if (m.rows != static_cast<int>(b.size())) throw std::invalid_argument("solve: size mismatch");
    int rows = m.rows, cols = m.cols;
    std::vector<std::vector<Rat>> w(rows, std::vector<Rat>(cols + 1));
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) w[i][j] = Rat(m.at(i, j));
        w[i][cols] = b[i];
    }
    std::vector<int> pivot_col_of_row;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (w[i][c] != 0) { p = i; break; }
        if (p < 0) continue;
        std::swap(w[r], w[p]);
        Rat inv = w[r][c];
        for (int j = c; j <= cols; ++j) w[r][j] /= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || w[i][c] == 0) continue;
            Rat f = w[i][c];
            for (int j = c; j <= cols; ++j) w[i][j] -= f * w[r][j];
        }
        pivot_col_of_row.push_back(c);
        ++r;
    }
    for (int i = r; i < rows; ++i)
        if (w[i][cols] != 0) return std::nullopt;  // inconsistent
    if (r < cols) {
        // underdetermined; require a unique solution
        return std::nullopt;
    }
    std::vector<Rat> x(cols);
    for (int i = 0; i < r; ++i) x[pivot_col_of_row[i]] = w[i][cols];
    return x;
}

std::optional<std::vector<Int>> solve_integral(const IMat& m, const std::vector<Int>& b) {
    std::vector<Rat> rb(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) rb[i] = Rat(b[i]);
    auto x = solve_rational(m, rb);
    if (!x) return std::nullopt;
    std::vector<Int> out(x->size());
    for (std::size_t i = 0; i < x->size(); ++i) {
        if (denominator((*x)[i]) != 1) return std::nullopt;
        out[i] = numerator((*x)[i]);
    }
    return out;
}

namespace {

void negate_col(IMat& m, int c) {
    for (int r = 0; r < m.rows; ++r) m.at(r, c) = -m.at(r, c);
}

void add_col_multiple(IMat& m, int dst, int src, const Int& f) {
    for (int r = 0; r < m.rows; ++r) m.at(r, dst) += f * m.at(r, src);
}

Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

Hnf hermite_normal_form(const IMat& generators) {
    IMat w = generators;
    int rows = w.rows, cols = w.cols;
    Hnf out;
    int lead = 0;  // next pivot column slot
    std::vector<int> pivots;
    for (int i = 0; i < rows && lead < cols; ++i) {
        // Euclidean reduction among columns >= lead on row i until at most
        // one nonzero entry remains. Pick the smallest |entry| (lowest column
        // on ties) as the divisor each round.
        while (true) {
            int best = -1, other = -1;
            for (int j = lead; j < cols; ++j) {
                if (w.at(i, j) == 0) continue;
                if (best < 0 || abs(w.at(i, j)) < abs(w.at(i, best))) best = j;
            }
            if (best < 0) break;
            for (int j = lead; j < cols; ++j) {
                if (j == best || w.at(i, j) == 0) continue;
                other = j;
                Int q = floor_div(w.at(i, j), w.at(i, best));
                add_col_multiple(w, j, best, -q);
            }
            if (other < 0) {  // single nonzero entry; it is the pivot
                if (best != lead)
                    for (int r = 0; r < rows; ++r) std::swap(w.at(r, best), w.at(r, lead));
                if (w.at(i, lead) < 0) negate_col(w, lead);
                // reduce earlier columns against this pivot
                for (int j = 0; j < lead; ++j) {
                    Int q = floor_div(w.at(i, j), w.at(i, lead));
                    if (q != 0) add_col_multiple(w, j, lead, -q);
                }
                pivots.push_back(i);
                ++lead;
                break;
            }
        }
    }
    out.basis = IMat(rows, lead);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < lead; ++c) out.basis.at(r, c) = w.at(r, c);
    out.pivot_rows = pivots;
    return out;
}

Snf smith_normal_form(const IMat& m) {
    Snf s;
    s.d = m;
    s.u = IMat::identity(m.rows);
    s.v = IMat::identity(m.cols);
    IMat& d = s.d;
    int n = std::min(m.rows, m.cols);

    auto row_op = [&](int dst, int src, const Int& f) {
        for (int j = 0; j < d.cols; ++j) d.at(dst, j) += f * d.at(src, j);
        for (int j = 0; j < s.u.cols; ++j) s.u.at(dst, j) += f * s.u.at(src, j);
    };
    auto col_op = [&](int dst, int src, const Int& f) {
        add_col_multiple(d, dst, src, f);
        add_col_multiple(s.v, dst, src, f);
    };
    auto swap_rows = [&](int a, int b) {
        if (a == b) return;
        for (int j = 0; j < d.cols; ++j) std::swap(d.at(a, j), d.at(b, j));
        for (int j = 0; j < s.u.cols; ++j) std::swap(s.u.at(a, j), s.u.at(b, j));
    };
    auto swap_cols = [&](int a, int b) {
        if (a == b) return;
        for (int r = 0; r < d.rows; ++r) std::swap(d.at(r, a), d.at(r, b));
        for (int r = 0; r < s.v.rows; ++r) std::swap(s.v.at(r, a), s.v.at(r, b));
    };

    for (int k = 0; k < n; ++k) {
        while (true) {
            int pr = -1, pc = -1;
            for (int i = k; i < d.rows; ++i)
                for (int j = k; j < d.cols; ++j) {
                    if (d.at(i, j) == 0) continue;
                    if (pr < 0 || abs(d.at(i, j)) < abs(d.at(pr, pc))) { pr = i; pc = j; }
                }
            if (pr < 0) break;  // all zero from here on
            swap_rows(k, pr);
            swap_cols(k, pc);
            bool clean = true;
            for (int i = k + 1; i < d.rows; ++i) {
                if (d.at(i, k) == 0) continue;
                Int q = floor_div(d.at(i, k), d.at(k, k));
                row_op(i, k, -q);
                if (d.at(i, k) != 0) clean = false;
            }
            for (int j = k + 1; j < d.cols; ++j) {
                if (d.at(k, j) == 0) continue;
                Int q = floor_div(d.at(k, j), d.at(k, k));
                col_op(j, k, -q);
                if (d.at(k, j) != 0) clean = false;
            }
            if (!clean) continue;
            // enforce divisibility of the remaining block by d(k,k)
            int bad_i = -1, bad_j = -1;
            for (int i = k + 1; i < d.rows && bad_i < 0; ++i)
                for (int j = k + 1; j < d.cols; ++j)
                    if (d.at(i, j) % d.at(k, k) != 0) { bad_i = i; bad_j = j; break; }
            if (bad_i < 0) break;
            row_op(k, bad_i, 1);
            (void)bad_j;
        }
        if (d.at(k, k) < 0) {
            for (int j = 0; j < d.cols; ++j) d.at(k, j) = -d.at(k, j);
            for (int j = 0; j < s.u.cols; ++j) s.u.at(k, j) = -s.u.at(k, j);
        }
        if (d.at(k, k) != 0) s.rank = k + 1;
    }
    return s;
}

std::vector<Int> Snf::invariant_factors() const {
    std::vector<Int> f;
    int n = std::min(d.rows, d.cols);
    for (int i = 0; i < n; ++i)
        if (d.at(i, i) != 0) f.push_back(d.at(i, i));
    return f;
}

IMat inverse_unimodular(const IMat& u) {
    int n = u.rows;
    if (u.cols != n) throw std::invalid_argument("inverse of non-square matrix");
    IMat out(n, n);
    for (int c = 0; c < n; ++c) {
        std::vector<Int> e(n);
        e[c] = 1;
        auto x = solve_integral(u, e);
        if (!x) throw std::invalid_argument("matrix is not unimodular");
        for (int r = 0; r < n; ++r) out.at(r, c) = (*x)[r];
    }
    return out;
}

IMat unimodular_with_first_column(const std::vector<Int>& c) {
    int n = static_cast<int>(c.size());
    IMat col(n, 1);
    for (int i = 0; i < n; ++i) col.at(i, 0) = c[i];
    Snf s = smith_normal_form(col);
    if (s.rank != 1 || s.d.at(0, 0) != 1)
        throw std::invalid_argument("vector is zero or not primitive");
    // u * c = +-e1, so the first column of u^-1 is +-c.
    IMat m = inverse_unimodular(s.u);
    bool flip = false;
    for (int i = 0; i < n; ++i)
        if (m.at(i, 0) != c[i]) { flip = true; break; }
    if (flip) {
        for (int i = 0; i < n; ++i) m.at(i, 0) = -m.at(i, 0);
        for (int i = 0; i < n; ++i)
            if (m.at(i, 0) != c[i]) throw std::logic_error("completion failed");
    }
    return m;
}

}  // namespace sparsetrace
