#pragma once

// Exact integer linear algebra: Smith normal form, kernels, cokernels and
// classes of vectors in a cokernel. Everything is value-semantic; matrices of
// zero height or width are legal throughout.

#include "okgraph/errors.hpp"
#include "okgraph/integer.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace okgraph {

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_) throw ValidationError("ragged matrix literal");
            for (long long x : row) data_.emplace_back(x);
        }
    }

    static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols_if_empty = 0) {
        IntMatrix m(rows.size(), rows.empty() ? cols_if_empty : rows.front().size());
        for (std::size_t i = 0; i < m.rows_; ++i) {
            if (rows[i].size() != m.cols_) throw ValidationError("ragged matrix rows");
            for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static IntMatrix diagonal(std::size_t rows, std::size_t cols, const IntVector& diag) {
        IntMatrix m(rows, cols);
        for (std::size_t i = 0; i < diag.size() && i < rows && i < cols; ++i) m(i, i) = diag[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const IntVector& entries() const { return data_; }

    IntVector row(std::size_t i) const {
        return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }
    IntVector column(std::size_t j) const {
        IntVector out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
        return out;
    }

    std::vector<IntVector> to_rows() const {
        std::vector<IntVector> out;
        out.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
        return out;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Sub-block [r0, r0+nr) x [c0, c0+nc).
    IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) throw ValidationError("block out of range");
        IntMatrix b(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    IntMatrix left_columns(std::size_t nc) const { return block(0, 0, rows_, nc); }

    void set_block(std::size_t r0, std::size_t c0, const IntMatrix& b) {
        if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw ValidationError("block out of range");
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    IntVector operator*(const IntVector& x) const {
        if (x.size() != cols_) throw ValidationError("matrix-vector dimension mismatch");
        IntVector y(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            Integer s = 0;
            for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
            y[i] = std::move(s);
        }
        return y;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_) throw ValidationError("matrix product dimension mismatch");
        IntMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Integer& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
        a.require_same_shape(b);
        IntMatrix c = a;
        for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
        return c;
    }

    friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
        a.require_same_shape(b);
        IntMatrix c = a;
        for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
        return c;
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    // Elementary operations, used by the eliminations below.
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }
    /// row[dst] += factor * row[src]
    void add_row(std::size_t dst, std::size_t src, const Integer& factor) {
        if (factor == 0) return;
        for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
    }
    /// col[dst] += factor * col[src]
    void add_col(std::size_t dst, std::size_t src, const Integer& factor) {
        if (factor == 0) return;
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
    }
    void negate_row(std::size_t i) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
    }
    void negate_col(std::size_t j) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
    }

    std::string str() const {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < rows_; ++i) {
            os << (i ? ",[" : "[");
            for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
            os << ']';
        }
        os << ']';
        return os.str();
    }

private:
    void require_same_shape(const IntMatrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw ValidationError("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    IntVector data_;
};

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(IntMatrix a) {
    if (a.rows() != a.cols()) throw ValidationError("determinant of a non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            a.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

// ---------------------------------------------------------------------------
// Smith normal form

struct SmithDecomposition {
    IntMatrix u;  // rows x rows, unimodular
    IntMatrix d;  // rows x cols, diagonal, d_i | d_{i+1}, d_i >= 0
    IntMatrix v;  // cols x cols, unimodular

    std::size_t rank() const {
        std::size_t r = 0;
        while (r < d.rows() && r < d.cols() && d(r, r) != 0) ++r;
        return r;
    }
    IntVector diagonal() const {
        IntVector out;
        for (std::size_t i = 0; i < d.rows() && i < d.cols(); ++i) out.push_back(d(i, i));
        return out;
    }
};

enum class PivotRule { kMinAbs, kFirstNonzero };
enum class SweepOrder { kColumnFirst, kRowFirst };

struct SnfOptions {
    PivotRule pivot = PivotRule::kMinAbs;
    SweepOrder order = SweepOrder::kColumnFirst;
};

namespace detail {

class SmithEliminator {
public:
    SmithEliminator(const IntMatrix& a, SnfOptions opts)
        : d_(a), u_(IntMatrix::identity(a.rows())), v_(IntMatrix::identity(a.cols())), opts_(opts) {}

    SmithDecomposition run() {
        const std::size_t steps = std::min(d_.rows(), d_.cols());
        for (std::size_t t = 0; t < steps; ++t) {
            if (!place_pivot(t)) break;
            do {
                // Swaps inside one sweep can refill the other line.
                while (!column_clear(t) || !row_clear(t)) {
                    if (opts_.order == SweepOrder::kColumnFirst) {
                        clear_column(t);
                        clear_row(t);
                    } else {
                        clear_row(t);
                        clear_column(t);
                    }
                }
            } while (fix_divisibility(t));
            if (d_(t, t) < 0) {
                d_.negate_col(t);
                v_.negate_col(t);
            }
        }
        return {std::move(u_), std::move(d_), std::move(v_)};
    }

private:
    bool place_pivot(std::size_t t) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (std::size_t j = t; j < d_.cols(); ++j) {
            for (std::size_t i = t; i < d_.rows(); ++i) {
                if (d_(i, j) == 0) continue;
                if (!best) {
                    best = {i, j};
                    if (opts_.pivot == PivotRule::kFirstNonzero) break;
                } else if (abs_value(d_(i, j)) < abs_value(d_(best->first, best->second))) {
                    best = {i, j};
                }
            }
            if (best && opts_.pivot == PivotRule::kFirstNonzero) break;
        }
        if (!best) return false;
        row_swap(t, best->first);
        col_swap(t, best->second);
        return true;
    }

    bool column_clear(std::size_t t) const {
        for (std::size_t i = t + 1; i < d_.rows(); ++i)
            if (d_(i, t) != 0) return false;
        return true;
    }
    bool row_clear(std::size_t t) const {
        for (std::size_t j = t + 1; j < d_.cols(); ++j)
            if (d_(t, j) != 0) return false;
        return true;
    }

    // Euclid on column t.
    void clear_column(std::size_t t) {
        for (;;) {
            std::size_t i = t + 1;
            while (i < d_.rows() && d_(i, t) == 0) ++i;
            if (i == d_.rows()) return;
            Integer q = d_(i, t) / d_(t, t);
            row_add(i, t, -q);
            if (d_(i, t) != 0) row_swap(i, t);
        }
    }

    void clear_row(std::size_t t) {
        for (;;) {
            std::size_t j = t + 1;
            while (j < d_.cols() && d_(t, j) == 0) ++j;
            if (j == d_.cols()) return;
            Integer q = d_(t, j) / d_(t, t);
            col_add(j, t, -q);
            if (d_(t, j) != 0) col_swap(j, t);
        }
    }

    // Pivot must divide the trailing block; otherwise fold an offending row in.
    bool fix_divisibility(std::size_t t) {
        for (std::size_t i = t + 1; i < d_.rows(); ++i)
            for (std::size_t j = t + 1; j < d_.cols(); ++j)
                if (d_(i, j) % d_(t, t) != 0) {
                    row_add(t, i, 1);
                    return true;
                }
        return false;
    }

    void row_swap(std::size_t a, std::size_t b) {
        d_.swap_rows(a, b);
        u_.swap_rows(a, b);
    }
    void col_swap(std::size_t a, std::size_t b) {
        d_.swap_cols(a, b);
        v_.swap_cols(a, b);
    }
    void row_add(std::size_t dst, std::size_t src, const Integer& f) {
        d_.add_row(dst, src, f);
        u_.add_row(dst, src, f);
    }
    void col_add(std::size_t dst, std::size_t src, const Integer& f) {
        d_.add_col(dst, src, f);
        v_.add_col(dst, src, f);
    }

    IntMatrix d_;
    IntMatrix u_;
    IntMatrix v_;
    SnfOptions opts_;
};

}  // namespace detail

/// Smith normal form with unimodular witnesses: u * a * v == d.
inline SmithDecomposition smith_normal_form(const IntMatrix& a, SnfOptions opts = {}) {
    return detail::SmithEliminator(a, opts).run();
}

/// Row-style Hermite normal form of the row lattice of `a`: nonzero rows first,
/// positive pivots, entries above each pivot reduced into [0, pivot).
inline IntMatrix hermite_rows(IntMatrix h) {
    std::size_t p = 0;
    for (std::size_t c = 0; c < h.cols() && p < h.rows(); ++c) {
        for (;;) {
            std::optional<std::size_t> best;
            for (std::size_t i = p; i < h.rows(); ++i)
                if (h(i, c) != 0 && (!best || abs_value(h(i, c)) < abs_value(h(*best, c)))) best = i;
            if (!best) break;
            h.swap_rows(p, *best);
            bool done = true;
            for (std::size_t i = p + 1; i < h.rows(); ++i) {
                if (h(i, c) == 0) continue;
                h.add_row(i, p, -(h(i, c) / h(p, c)));
                if (h(i, c) != 0) done = false;
            }
            if (done) break;
        }
        if (h(p, c) == 0) continue;
        if (h(p, c) < 0) h.negate_row(p);
        for (std::size_t i = 0; i < p; ++i) h.add_row(i, p, -floor_div(h(i, c), h(p, c)));
        ++p;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Finitely generated abelian groups

/// Z^free_rank + Z/torsion[0] + ... in invariant-factor form.
struct AbelianGroup {
    std::size_t free_rank = 0;
    IntVector torsion;  // each >= 2, torsion[i] | torsion[i+1]

    /// Canonical form of Z^free_rank + (+)_i Z/factors[i]; factors in any
    /// order, entries 0 count as free, entries +-1 vanish.
    static AbelianGroup from_factors(std::size_t free_rank, const IntVector& factors);

    bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
    std::size_t coordinate_count() const { return free_rank + torsion.size(); }

    /// Order of the torsion subgroup.
    Integer torsion_order() const {
        Integer o = 1;
        for (const auto& t : torsion) o *= t;
        return o;
    }

    /// "Z^2 + Z/2 + Z/6"; "Z" for rank one; "0" for the trivial group.
    std::string str() const {
        std::vector<std::string> parts;
        if (free_rank == 1) parts.emplace_back("Z");
        if (free_rank > 1) parts.push_back("Z^" + std::to_string(free_rank));
        for (const auto& t : torsion) parts.push_back("Z/" + t.str());
        if (parts.empty()) return "0";
        std::string out = parts.front();
        for (std::size_t i = 1; i < parts.size(); ++i) out += " + " + parts[i];
        return out;
    }

    friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;
};

inline AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b) {
    IntVector factors = a.torsion;
    factors.insert(factors.end(), b.torsion.begin(), b.torsion.end());
    return AbelianGroup::from_factors(a.free_rank + b.free_rank, factors);
}

/// Element of an AbelianGroup in the coordinates of its decomposition.
struct GroupElement {
    AbelianGroup group;
    IntVector free_coords;     // length free_rank
    IntVector torsion_coords;  // 0 <= c_i < torsion[i]

    static GroupElement zero(const AbelianGroup& g) {
        return {g, IntVector(g.free_rank, Integer(0)), IntVector(g.torsion.size(), Integer(0))};
    }

    bool is_zero() const {
        return std::all_of(free_coords.begin(), free_coords.end(), [](const Integer& x) { return x == 0; }) &&
               std::all_of(torsion_coords.begin(), torsion_coords.end(), [](const Integer& x) { return x == 0; });
    }

    /// Free coordinates followed by torsion coordinates.
    IntVector coords() const {
        IntVector out = free_coords;
        out.insert(out.end(), torsion_coords.begin(), torsion_coords.end());
        return out;
    }

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

/// The quotient map Z^rows -> coker(a), in coordinates. Row i of `projection`
/// gives coordinate i: the first `group.free_rank` rows are the free
/// coordinates, the remaining rows are reduced modulo group.torsion.
struct CokernelMap {
    AbelianGroup group;
    IntMatrix projection;

    GroupElement apply(const IntVector& x) const {
        if (x.size() != projection.cols()) throw ValidationError("vector length does not match cokernel domain");
        IntVector y = projection * x;
        GroupElement g = GroupElement::zero(group);
        for (std::size_t i = 0; i < group.free_rank; ++i) g.free_coords[i] = y[i];
        for (std::size_t i = 0; i < group.torsion.size(); ++i)
            g.torsion_coords[i] = floor_mod(y[group.free_rank + i], group.torsion[i]);
        return g;
    }
};

/// Quotient map onto coker(a) = Z^rows / a Z^cols. Free coordinates are the
/// Hermite-normalized functionals vanishing on the image, so they do not
/// depend on elimination choices.
inline CokernelMap cokernel_map(const IntMatrix& a) {
    SmithDecomposition snf = smith_normal_form(a);
    const std::size_t r = snf.rank();
    const std::size_t rows = a.rows();
    CokernelMap map;
    map.group.free_rank = rows - r;
    std::vector<IntVector> torsion_rows;
    for (std::size_t i = 0; i < r; ++i) {
        const Integer& di = snf.d(i, i);
        if (di == 1) continue;
        map.group.torsion.push_back(di);
        IntVector row = snf.u.row(i);
        for (auto& x : row) x = floor_mod(x, di);
        torsion_rows.push_back(std::move(row));
    }
    IntMatrix free_rows = hermite_rows(snf.u.block(r, 0, rows - r, rows));
    map.projection = IntMatrix(map.group.coordinate_count(), rows);
    map.projection.set_block(0, 0, free_rows);
    for (std::size_t i = 0; i < torsion_rows.size(); ++i)
        for (std::size_t j = 0; j < rows; ++j) map.projection(map.group.free_rank + i, j) = torsion_rows[i][j];
    return map;
}

inline AbelianGroup cokernel_group(const IntMatrix& a) {
    SmithDecomposition snf = smith_normal_form(a);
    AbelianGroup g;
    const std::size_t r = snf.rank();
    g.free_rank = a.rows() - r;
    for (std::size_t i = 0; i < r; ++i)
        if (snf.d(i, i) != 1) g.torsion.push_back(snf.d(i, i));
    return g;
}

inline AbelianGroup AbelianGroup::from_factors(std::size_t free_rank, const IntVector& factors) {
    IntVector nonzero;
    for (const auto& f : factors) {
        if (f == 0)
            ++free_rank;
        else
            nonzero.push_back(abs_value(f));
    }
    AbelianGroup g = cokernel_group(IntMatrix::diagonal(nonzero.size(), nonzero.size(), nonzero));
    g.free_rank += free_rank;
    return g;
}

/// Columns form a Z-basis of {x : a x = 0}, in column-Hermite form.
inline IntMatrix kernel_basis(const IntMatrix& a) {
    SmithDecomposition snf = smith_normal_form(a);
    const std::size_t r = snf.rank();
    const std::size_t k = a.cols() - r;
    IntMatrix basis = snf.v.block(0, r, a.cols(), k);
    return hermite_rows(basis.transpose()).transpose();
}

inline AbelianGroup kernel_group(const IntMatrix& a) {
    AbelianGroup g;
    g.free_rank = a.cols() - smith_normal_form(a).rank();
    return g;
}

inline GroupElement coset_class(const IntMatrix& a, const IntVector& x) {
    if (x.size() != a.rows()) throw ValidationError("coset_class: vector length must equal row count");
    return cokernel_map(a).apply(x);
}

/// Some y with a y = x, when one exists.
inline std::optional<IntVector> solve_in_image(const IntMatrix& a, const IntVector& x) {
    if (x.size() != a.rows()) throw ValidationError("solve_in_image: vector length must equal row count");
    SmithDecomposition snf = smith_normal_form(a);
    const std::size_t r = snf.rank();
    IntVector y = snf.u * x;
    IntVector z(a.cols(), Integer(0));
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (i < r) {
            if (y[i] % snf.d(i, i) != 0) return std::nullopt;
            z[i] = y[i] / snf.d(i, i);
        } else if (y[i] != 0) {
            return std::nullopt;
        }
    }
    IntVector w = snf.v * z;
    if (a * w != x) throw VerificationError("solve_in_image: witness failed to verify");
    return w;
}

/// Parses "Z^2 + Z/4 + Z/2", "Z", "0". Terms may appear in any order; the
/// returned list keeps torsion factors in input order (1s dropped).
struct GroupTerms {
    std::size_t free_rank = 0;
    IntVector torsion;
};

inline GroupTerms parse_group_terms(std::string_view text) {
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '\t') s.push_back(c);
    GroupTerms out;
    if (s.empty()) throw ValidationError("empty group specification");
    if (s == "0") return out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find('+', pos);
        std::string term = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (term.empty()) throw ValidationError("malformed group specification: '" + std::string(text) + "'");
        try {
            if (term == "0") {
            } else if (term == "Z") {
                out.free_rank += 1;
            } else if (term.rfind("Z^", 0) == 0) {
                Integer r = parse_integer(term.substr(2));
                if (r < 0) throw ValidationError("negative rank");
                out.free_rank += static_cast<std::size_t>(to_int64(r));
            } else if (term.rfind("Z/", 0) == 0) {
                Integer d = parse_integer(term.substr(2));
                if (d < 1) throw ValidationError("torsion factor must be >= 1 in '" + term + "'");
                if (d > 1) out.torsion.push_back(d);
            } else {
                throw ValidationError("unknown group term '" + term + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw ValidationError(std::string("malformed group term: ") + e.what());
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

inline AbelianGroup parse_group(std::string_view text) {
    GroupTerms t = parse_group_terms(text);
    return AbelianGroup::from_factors(t.free_rank, t.torsion);
}

}  // namespace okgraph
