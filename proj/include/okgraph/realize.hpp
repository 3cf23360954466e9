#pragma once

// Graphs realizing a prescribed (K0, [1], K1) with finitely generated groups
// and rank K1 <= rank K0.
//
// Base step: for T (L x (L - l0)) and S (L x L) nonnegative,
//   N~ = [[2I, T~ + S + X], [I, I + S + X]],   M = [[I, S], [I, I]],
// X the tridiagonal band of ones, T~ = T padded with zero columns. Keeping the
// first 2L - l0 columns of N~ as regular vertices gives
//   coker(I0 - N) = coker T, ker(I0 - N) = ker T, coker(I1 - M) = coker S,
//   ker(I1 - M) = ker S,
// with (1, ..., 1) mapping to 0. The last l0 vertices receive infinite
// families. A nonzero unit is installed by adding one vertex in front.

#include "okgraph/classify.hpp"
#include "okgraph/ktheory.hpp"

#include <iomanip>
#include <sstream>

namespace okgraph {

/// A finitely generated abelian group with fixed coordinates: free part first,
/// then torsion factors in the order given (not necessarily a divisor chain).
struct GroupSpec {
    std::size_t free_rank = 0;
    IntVector torsion;                 // each >= 2
    std::optional<IntVector> unit;     // coordinates, free then torsion

    AbelianGroup group() const { return AbelianGroup::from_factors(free_rank, torsion); }
    std::size_t coordinate_count() const { return free_rank + torsion.size(); }

    bool unit_is_zero() const {
        if (!unit) return true;
        return std::all_of(unit->begin(), unit->end(), [](const Integer& x) { return x == 0; });
    }

    /// "Z^2+Z/4+Z/2"; unit "0,0,1,0" (free coordinates, then torsion).
    static GroupSpec parse(std::string_view group_text, std::optional<std::string_view> unit_text = std::nullopt) {
        GroupTerms t = parse_group_terms(group_text);
        GroupSpec spec{t.free_rank, t.torsion, std::nullopt};
        if (unit_text) {
            IntVector coords;
            std::string s(*unit_text);
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ',')) {
                std::string trimmed;
                for (char c : item)
                    if (c != ' ' && c != '\t') trimmed.push_back(c);
                try {
                    coords.push_back(parse_integer(trimmed));
                } catch (const std::invalid_argument& e) {
                    throw ValidationError(std::string("malformed unit: ") + e.what());
                }
            }
            spec.set_unit(std::move(coords));
        }
        return spec;
    }

    void set_unit(IntVector coords) {
        if (coords.size() != coordinate_count())
            throw ValidationError("unit has " + std::to_string(coords.size()) + " coordinates, group has " +
                                  std::to_string(coordinate_count()));
        for (std::size_t i = 0; i < torsion.size(); ++i)
            coords[free_rank + i] = floor_mod(coords[free_rank + i], torsion[i]);
        unit = std::move(coords);
    }

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
};

/// Order of an element given in spec coordinates; 0 means infinite.
inline Integer element_order(std::size_t free_rank, const IntVector& torsion, const IntVector& coords) {
    for (std::size_t i = 0; i < free_rank; ++i)
        if (coords[i] != 0) return 0;
    Integer order = 1;
    for (std::size_t i = 0; i < torsion.size(); ++i) {
        Integer o = torsion[i] / gcd(coords[free_rank + i], torsion[i]);
        order = order / gcd(order, o) * o;
    }
    return order;
}

inline Integer element_order(const GroupElement& e) {
    return element_order(e.group.free_rank, e.group.torsion, e.coords());
}

/// Square diag(torsion..., 0 per free rank): cokernel is the spec's group.
inline IntMatrix diag_presentation(const GroupSpec& spec) {
    IntVector diag = spec.torsion;
    diag.resize(spec.coordinate_count(), Integer(0));
    return IntMatrix::diagonal(diag.size(), diag.size(), diag);
}

/// Tridiagonal band of ones.
inline IntMatrix band_matrix(std::size_t n) {
    IntMatrix x(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = (k == 0 ? 0 : k - 1); l < n && l <= k + 1; ++l) x(k, l) = 1;
    return x;
}

struct BlockEmbedding {
    IntMatrix n_tilde;  // 2L x 2L
    IntMatrix m;        // 2L x 2L
    std::size_t l0 = 0;

    /// The regular columns of N~.
    IntMatrix n_regular() const { return n_tilde.left_columns(n_tilde.cols() - l0); }
};

inline BlockEmbedding block_embed(const IntMatrix& t, const IntMatrix& s) {
    const std::size_t L = s.rows();
    if (s.cols() != L) throw ValidationError("block_embed: S must be square");
    if (t.rows() != L) throw ValidationError("block_embed: T must have as many rows as S");
    if (t.cols() > L) throw ValidationError("block_embed: T has more columns than rows");
    if (L == 0) throw ValidationError("block_embed: empty blocks");
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t j = 0; j < L; ++j)
            if (s(i, j) < 0) throw ValidationError("block_embed: S has a negative entry");
        for (std::size_t j = 0; j < t.cols(); ++j)
            if (t(i, j) < 0) throw ValidationError("block_embed: T has a negative entry");
    }
    IntMatrix t_sq(L, L);
    t_sq.set_block(0, 0, t);
    const IntMatrix x = band_matrix(L);
    const IntMatrix id = IntMatrix::identity(L);

    BlockEmbedding out;
    out.l0 = L - t.cols();
    out.n_tilde = IntMatrix(2 * L, 2 * L);
    out.n_tilde.set_block(0, 0, id + id);
    out.n_tilde.set_block(0, L, t_sq + s + x);
    out.n_tilde.set_block(L, 0, id);
    out.n_tilde.set_block(L, L, id + s + x);
    out.m = IntMatrix(2 * L, 2 * L);
    out.m.set_block(0, 0, id);
    out.m.set_block(0, L, s);
    out.m.set_block(L, 0, id);
    out.m.set_block(L, L, id);
    return out;
}

inline std::string vertex_name(std::size_t index, std::size_t count) {
    std::size_t width = std::max<std::size_t>(2, std::to_string(count).size());
    std::ostringstream os;
    os << 'v' << std::setw(static_cast<int>(width)) << std::setfill('0') << (index + 1);
    return os.str();
}

/// One edge per nonzero N entry (dom = row, ran = column); the last l0
/// vertices each receive a family with n = 1, m = 0 from `family_source`.
inline WeightedGraph graph_from_matrices(const IntMatrix& n_big, const IntMatrix& m_big, std::size_t l0,
                                         std::size_t family_source = 0) {
    const std::size_t k = n_big.rows();
    if (n_big.cols() != k || m_big.rows() != k || m_big.cols() != k)
        throw ValidationError("graph_from_matrices: N and M must be square of equal size");
    if (k == 0) throw ValidationError("graph_from_matrices: empty matrices");
    if (l0 > k) throw ValidationError("graph_from_matrices: rank deficit exceeds size");
    if (l0 > 0 && family_source >= k) throw ValidationError("graph_from_matrices: family source out of range");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i) names.push_back(vertex_name(i, k));
    std::vector<EdgeSpec> edges;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            if (n_big(a, b) < 0) throw ValidationError("graph_from_matrices: negative N entry");
            if (n_big(a, b) == 0) {
                if (m_big(a, b) != 0)
                    throw ValidationError("graph_from_matrices: N = 0 but M != 0 at (" + std::to_string(a) + ", " +
                                          std::to_string(b) + ")");
                continue;
            }
            edges.push_back({"e_" + names[a] + "_" + names[b], names[a], names[b], n_big(a, b), m_big(a, b)});
        }
    std::vector<FamilySpec> families;
    for (std::size_t l = k - l0; l < k; ++l) families.push_back({names[family_source], names[l], 1, 0});
    return build_graph(names, std::move(edges), std::move(families));
}

/// Matrix data of a realization plus the surjection pi: Z^{E0} -> W onto the
/// group W = Z^witness_free + (+)_i Z/witness_torsion[i] that coker(I0 - N)
/// should be isomorphic to.
struct MatrixRealization {
    IntMatrix n_tilde;
    IntMatrix m;
    std::size_t l0 = 0;
    std::size_t family_source = 0;
    IntMatrix witness;  // coordinates x vertices
    std::size_t witness_free = 0;
    IntVector witness_torsion;
};

namespace detail {

/// Relation columns of W: witness_torsion[i] in coordinate witness_free + i.
inline IntMatrix witness_relations(std::size_t free, const IntVector& torsion) {
    IntMatrix r(free + torsion.size(), torsion.size());
    for (std::size_t i = 0; i < torsion.size(); ++i) r(free + i, i) = torsion[i];
    return r;
}

inline bool zero_in_w(std::size_t free, const IntVector& torsion, const IntVector& y) {
    for (std::size_t i = 0; i < free; ++i)
        if (y[i] != 0) return false;
    for (std::size_t i = 0; i < torsion.size(); ++i)
        if (y[free + i] % torsion[i] != 0) return false;
    return true;
}

inline IntMatrix hcat(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix out(a.rows(), a.cols() + b.cols());
    out.set_block(0, 0, a);
    out.set_block(0, a.cols(), b);
    return out;
}

}  // namespace detail

/// pi(x) = class of x_bottom - x_top in coker T, where the rows of T are laid
/// out as [torsion diagonal | ones | free rows] (free rows last, `free` of them).
inline IntMatrix block_witness(std::size_t L, std::size_t free, std::size_t torsion_count) {
    IntMatrix p(free + torsion_count, 2 * L);
    for (std::size_t j = 0; j < free; ++j) {
        p(j, L + (L - free + j)) = 1;
        p(j, L - free + j) = -1;
    }
    for (std::size_t i = 0; i < torsion_count; ++i) {
        p(free + i, L + i) = 1;
        p(free + i, i) = -1;
    }
    return p;
}

struct UnitAdjustment {
    MatrixRealization result;
    IntVector representative;  // a with pi(a) = g, min a = 0
    std::size_t k0 = 0;        // first index with a_k = 0
};

/// Prepends a vertex so that (1, ..., 1) maps to g. Requires ker(I1 - M) = 0
/// and pi(1, ..., 1) = 0 on the input.
inline UnitAdjustment adjust_unit_class(const MatrixRealization& base, const IntVector& g) {
    const std::size_t k = base.n_tilde.rows();
    const std::size_t coords = base.witness_free + base.witness_torsion.size();
    if (g.size() != coords) throw ValidationError("adjust_unit_class: g has the wrong number of coordinates");
    const IntMatrix rel = detail::witness_relations(base.witness_free, base.witness_torsion);
    if (detail::zero_in_w(base.witness_free, base.witness_torsion, g))
        throw ValidationError("adjust_unit_class: g is zero, use the base construction");
    if (!detail::zero_in_w(base.witness_free, base.witness_torsion, base.witness * IntVector(k, Integer(1))))
        throw ValidationError("adjust_unit_class: pi(1, ..., 1) is not zero");
    const IntMatrix i1m = IntMatrix::identity(k) - base.m;
    if (kernel_group(i1m).free_rank != 0) throw ValidationError("adjust_unit_class: ker(I1 - M) is not zero");

    auto sol = solve_in_image(detail::hcat(base.witness, rel), g);
    if (!sol) throw ValidationError("adjust_unit_class: g is not in the image of pi");
    UnitAdjustment out;
    out.representative.assign(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(k));
    Integer lo = *std::min_element(out.representative.begin(), out.representative.end());
    for (auto& x : out.representative) x -= lo;
    out.k0 = static_cast<std::size_t>(
        std::find(out.representative.begin(), out.representative.end(), Integer(0)) - out.representative.begin());
    const IntVector& a = out.representative;
    const std::size_t k0 = out.k0;

    MatrixRealization& r = out.result;
    r.n_tilde = IntMatrix(k + 1, k + 1);
    r.m = IntMatrix(k + 1, k + 1);
    r.n_tilde(0, 0) = 2;
    r.m(0, 0) = 2;
    for (std::size_t l = 0; l < k; ++l)
        r.n_tilde(0, l + 1) = l == k0 ? Integer(2 * base.n_tilde(k0, k0) - 2) : Integer(2 * base.n_tilde(k0, l));
    for (std::size_t q = 0; q < k; ++q) {
        r.n_tilde(q + 1, 0) = a[q];
        // Only where an edge exists, so that N' = 0 forces M' = 0.
        r.m(q + 1, 0) = a[q] >= 1 ? 1 : 0;
        for (std::size_t l = 0; l < k; ++l) {
            r.n_tilde(q + 1, l + 1) = base.n_tilde(q, l);
            r.m(q + 1, l + 1) = base.m(q, l);
        }
    }
    r.l0 = base.l0;
    r.family_source = base.family_source + 1;
    r.witness_free = base.witness_free;
    r.witness_torsion = base.witness_torsion;
    // pi'(x0, x) = pi(x) + (2 x_{k0} - x0) g
    r.witness = IntMatrix(coords, k + 1);
    for (std::size_t i = 0; i < coords; ++i) {
        r.witness(i, 0) = -g[i];
        for (std::size_t l = 0; l < k; ++l) r.witness(i, l + 1) = base.witness(i, l);
        r.witness(i, k0 + 1) += 2 * g[i];
    }
    return out;
}

// ---------------------------------------------------------------------------

enum class Route { kAuto, kBlock, kOneVertex };

inline std::string to_string(Route r) {
    switch (r) {
        case Route::kBlock: return "block";
        case Route::kOneVertex: return "one-vertex";
        default: return "auto";
    }
}

struct RealizeOptions {
    Route route = Route::kAuto;
    ClassifyOptions classify;
};

struct VerificationChecks {
    bool k0_match = false;
    bool k1_match = false;
    bool unit_match = false;        // pi(1, ..., 1) = g and the unit orders agree
    bool witness_well_defined = false;
    bool witness_surjective = false;
    bool witness_injective = false;
    bool minimal = false;
    bool has_loop = false;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

struct RealizationReport {
    GroupSpec k0_spec;
    GroupSpec k1_spec;
    std::string route;  // "one-vertex", "block", "block-unit"
    std::optional<IntMatrix> t;
    std::optional<IntMatrix> s;
    MatrixRealization matrices;
    IntVector witness_target;  // g in witness coordinates (zero for the base construction)
    WeightedGraph graph;
    KInvariants computed;
    MinimalityStatus minimality = MinimalityStatus::kUnknown;
    VerificationChecks checks;
};

/// Recomputes everything from the graph and the witness.
inline VerificationChecks verify_realization(RealizationReport& report, const ClassifyOptions& options = {}) {
    VerificationChecks c;
    const WeightedGraph& g = report.graph;
    const MatrixRealization& mr = report.matrices;
    report.computed = k_invariants(g);
    const KMatrices km = assemble(g);
    const IntMatrix a0 = km.i0_minus_n();
    const std::size_t nv = g.vertex_count();

    c.k0_match = report.computed.k0 == report.k0_spec.group();
    if (!c.k0_match)
        c.failures.push_back("k0 factors mismatch: computed " + report.computed.k0.str() + ", expected " +
                             report.k0_spec.group().str());
    c.k1_match = report.computed.k1 == report.k1_spec.group();
    if (!c.k1_match)
        c.failures.push_back("k1 factors mismatch: computed " + report.computed.k1.str() + ", expected " +
                             report.k1_spec.group().str());

    const std::size_t wf = mr.witness_free;
    const IntVector& wt = mr.witness_torsion;
    const IntMatrix& p = mr.witness;
    const IntMatrix rel = detail::witness_relations(wf, wt);
    if (p.cols() != nv || p.rows() != wf + wt.size() || report.witness_target.size() != p.rows()) {
        c.failures.push_back("witness shape does not match the graph");
    } else {
        c.witness_well_defined = true;
        for (std::size_t j = 0; j < a0.cols(); ++j)
            if (!detail::zero_in_w(wf, wt, p * a0.column(j))) c.witness_well_defined = false;
        if (!c.witness_well_defined) c.failures.push_back("witness does not vanish on image(I0 - N)");

        const IntMatrix pr = detail::hcat(p, rel);
        c.witness_surjective = cokernel_group(pr).is_trivial();
        if (!c.witness_surjective) c.failures.push_back("witness is not surjective");

        const IntMatrix ker = kernel_basis(pr);
        c.witness_injective = true;
        for (std::size_t j = 0; j < ker.cols(); ++j) {
            IntVector x = ker.column(j);
            x.resize(nv);
            if (!solve_in_image(a0, x)) c.witness_injective = false;
        }
        if (!c.witness_injective) c.failures.push_back("witness kernel is larger than image(I0 - N)");

        IntVector y = p * IntVector(nv, Integer(1));
        for (std::size_t i = 0; i < y.size(); ++i) y[i] -= report.witness_target[i];
        c.unit_match = detail::zero_in_w(wf, wt, y);
        if (!c.unit_match) c.failures.push_back("witness does not send (1, ..., 1) to the unit");

        IntVector spec_unit = report.k0_spec.unit.value_or(IntVector(report.k0_spec.coordinate_count(), Integer(0)));
        Integer want = element_order(report.k0_spec.free_rank, report.k0_spec.torsion, spec_unit);
        Integer got = element_order(report.computed.unit);
        if (want != got) {
            c.unit_match = false;
            c.failures.push_back("unit order mismatch: computed " + got.str() + ", expected " + want.str());
        }
    }

    report.minimality = minimality(g, options).status;
    c.minimal = report.minimality == MinimalityStatus::kMinimal;
    if (!c.minimal) c.failures.push_back("minimality is " + to_string(report.minimality));
    c.has_loop = has_loop(g).has_value();
    if (!c.has_loop) c.failures.push_back("graph has no loop");
    report.checks = c;
    return c;
}

namespace detail {

inline bool one_vertex_applicable(const GroupSpec& k0, const GroupSpec& k1) {
    if (k0.free_rank != 0 || k0.torsion.size() != 1) return false;
    if (k1.free_rank != 0 || k1.torsion.size() > 1) return false;
    if (k0.unit_is_zero()) return false;
    return gcd((*k0.unit)[0], k0.torsion[0]) == 1;
}

}  // namespace detail

/// Realizes (k0 with optional unit, k1). Throws ValidationError on bad specs
/// and VerificationError when the round-trip fails.
inline RealizationReport realize(const GroupSpec& k0_spec, const GroupSpec& k1_spec, const RealizeOptions& options = {}) {
    if (k1_spec.unit) throw ValidationError("k1 takes no unit");
    if (k1_spec.free_rank > k0_spec.free_rank)
        throw ValidationError("rank of K1 (" + std::to_string(k1_spec.free_rank) + ") exceeds rank of K0 (" +
                              std::to_string(k0_spec.free_rank) + ")");
    for (const auto* spec : {&k0_spec, &k1_spec})
        for (const auto& t : spec->torsion)
            if (t < 2) throw ValidationError("torsion factors must be >= 2");

    RealizationReport report;
    report.k0_spec = k0_spec;
    report.k1_spec = k1_spec;
    if (k0_spec.unit) report.k0_spec.set_unit(*k0_spec.unit);

    const bool one_vertex_ok = detail::one_vertex_applicable(report.k0_spec, k1_spec);
    if (options.route == Route::kOneVertex && !one_vertex_ok)
        throw ValidationError("one-vertex route needs K0 = Z/p with a unit prime to p and K1 cyclic");

    if (one_vertex_ok && options.route != Route::kBlock) {
        const Integer p = report.k0_spec.torsion[0];
        const Integer q = k1_spec.torsion.empty() ? Integer(1) : k1_spec.torsion[0];
        const Integer n = 1 + p;
        Integer m = 1 + q;
        if (m % n == 0) m = 1 - q;
        report.route = "one-vertex";
        report.matrices.n_tilde = IntMatrix::from_rows({{n}});
        report.matrices.m = IntMatrix::from_rows({{m}});
        report.matrices.witness = IntMatrix::from_rows({{(*report.k0_spec.unit)[0]}});
        report.matrices.witness_torsion = {p};
        report.witness_target = {(*report.k0_spec.unit)[0]};
        report.graph = one_vertex_graph(n, m);
    } else {
        const std::size_t r0 = k0_spec.free_rank, r1 = k1_spec.free_rank;
        const std::size_t t0 = k0_spec.torsion.size(), t1 = k1_spec.torsion.size();
        const std::size_t l0 = r0 - r1;
        const bool with_unit = !report.k0_spec.unit_is_zero();
        std::size_t L;
        IntMatrix t, s;
        if (!with_unit) {
            // ker S = Z^r1 carries the free part of K1; coker T = A0 + Z^l0.
            L = std::max({t0 + l0, t1 + r1, std::size_t(1)});
            IntVector sd = k1_spec.torsion;
            sd.resize(t1 + r1, Integer(0));
            sd.resize(L, Integer(1));
            s = IntMatrix::diagonal(L, L, sd);
            IntVector td = k0_spec.torsion;
            td.resize(L - l0, Integer(1));
            t = IntMatrix::diagonal(L, L - l0, td);
        } else {
            // S injective; r1 zero columns of T give ker T = Z^r1, coker T = A0 + Z^r0.
            L = std::max({t0 + r0, t1, std::size_t(1)});
            IntVector sd = k1_spec.torsion;
            sd.resize(L, Integer(1));
            s = IntMatrix::diagonal(L, L, sd);
            IntVector td = k0_spec.torsion;
            td.resize(L - r0, Integer(1));
            t = IntMatrix(L, L - l0);
            t.set_block(0, 0, IntMatrix::diagonal(L, L - r0, td));
        }
        BlockEmbedding be = block_embed(t, s);
        MatrixRealization base;
        base.n_tilde = be.n_tilde;
        base.m = be.m;
        base.l0 = be.l0;
        base.family_source = 0;
        const std::size_t free = with_unit ? r0 : l0;
        base.witness = block_witness(L, free, t0);
        base.witness_free = free;
        base.witness_torsion = k0_spec.torsion;
        report.t = t;
        report.s = s;
        if (with_unit) {
            report.route = "block-unit";
            report.matrices = adjust_unit_class(base, *report.k0_spec.unit).result;
            report.witness_target = *report.k0_spec.unit;
        } else {
            report.route = "block";
            report.matrices = base;
            report.witness_target = IntVector(free + t0, Integer(0));
        }
        report.graph = graph_from_matrices(report.matrices.n_tilde, report.matrices.m, report.matrices.l0,
                                           report.matrices.family_source);
    }

    verify_realization(report, options.classify);
    if (!report.checks.ok()) {
        std::string msg = "realization failed verification:";
        for (const auto& f : report.checks.failures) msg += " " + f + ";";
        throw VerificationError(msg);
    }
    return report;
}

}  // namespace okgraph
