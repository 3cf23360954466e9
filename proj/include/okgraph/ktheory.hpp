#pragma once

// K-theory of O(E x_{n,m} T):
//   K0 = coker(I0 - N) + ker(I1 - M),  K1 = ker(I0 - N) + coker(I1 - M),
// with [1] the class of (1, ..., 1) in coker(I0 - N).

#include "okgraph/graph.hpp"
#include "okgraph/intlin.hpp"

#include <string>
#include <vector>

namespace okgraph {

struct KMatrices {
    IntMatrix n_matrix;  // rows: all vertices; columns: regular vertices in E0_m
    IntMatrix m_matrix;  // rows: all vertices; columns: E0_m
    VertexSet rows;
    VertexSet rg_m_columns;
    VertexSet m_columns;

    /// I0 - N: the coordinate embedding of the column set minus N.
    IntMatrix i0_minus_n() const { return embedding(rg_m_columns) - n_matrix; }
    IntMatrix i1_minus_m() const { return embedding(m_columns) - m_matrix; }

private:
    IntMatrix embedding(const VertexSet& cols) const {
        IntMatrix e(rows.size(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) e(cols[j], j) = 1;
        return e;
    }
};

/// N_{v,w} = sum of n(e), M_{v,w} = sum of m(e) over finite edges with d(e) = v,
/// r(e) = w. Families never land in a column set, so they are skipped.
inline KMatrices assemble(const WeightedGraph& g) {
    KMatrices k;
    k.rows = all_vertices(g);
    k.m_columns = m_vertices(g);
    k.rg_m_columns = set_intersection(regular_vertices(g), k.m_columns);
    k.n_matrix = IntMatrix(g.vertex_count(), k.rg_m_columns.size());
    k.m_matrix = IntMatrix(g.vertex_count(), k.m_columns.size());
    std::vector<std::ptrdiff_t> rg_pos(g.vertex_count(), -1), m_pos(g.vertex_count(), -1);
    for (std::size_t j = 0; j < k.rg_m_columns.size(); ++j) rg_pos[k.rg_m_columns[j]] = static_cast<std::ptrdiff_t>(j);
    for (std::size_t j = 0; j < k.m_columns.size(); ++j) m_pos[k.m_columns[j]] = static_cast<std::ptrdiff_t>(j);
    for (std::size_t a = 0; a < g.edge_count(); ++a) {
        const Arrow& e = g.arrow(a);
        if (rg_pos[e.ran] >= 0) k.n_matrix(e.dom, static_cast<std::size_t>(rg_pos[e.ran])) += e.n;
        if (m_pos[e.ran] >= 0) k.m_matrix(e.dom, static_cast<std::size_t>(m_pos[e.ran])) += e.m;
    }
    return k;
}

struct KInvariants {
    AbelianGroup k0;
    AbelianGroup k1;
    /// [1] in k0. Free coordinates list the ker(I1 - M) part first, then the
    /// coker(I0 - N) part; the unit is zero on the former.
    GroupElement unit;

    // The four summands, for reports.
    AbelianGroup coker_n;
    AbelianGroup ker_m;
    AbelianGroup ker_n;
    AbelianGroup coker_m;

    friend bool operator==(const KInvariants& a, const KInvariants& b) {
        return a.k0 == b.k0 && a.k1 == b.k1 && a.unit == b.unit;
    }
};

inline KInvariants k_invariants_from(const KMatrices& km) {
    const IntMatrix a0 = km.i0_minus_n();
    const IntMatrix a1 = km.i1_minus_m();
    CokernelMap coker0 = cokernel_map(a0);
    KInvariants k;
    k.coker_n = coker0.group;
    k.ker_n = kernel_group(a0);
    k.ker_m = kernel_group(a1);
    k.coker_m = cokernel_group(a1);
    // Kernels are free, so the sums are already in invariant-factor form.
    k.k0 = {k.ker_m.free_rank + k.coker_n.free_rank, k.coker_n.torsion};
    k.k1 = {k.ker_n.free_rank + k.coker_m.free_rank, k.coker_m.torsion};

    GroupElement unit_in_coker = coker0.apply(IntVector(km.rows.size(), Integer(1)));
    k.unit = GroupElement::zero(k.k0);
    for (std::size_t i = 0; i < k.coker_n.free_rank; ++i)
        k.unit.free_coords[k.ker_m.free_rank + i] = unit_in_coker.free_coords[i];
    k.unit.torsion_coords = unit_in_coker.torsion_coords;
    return k;
}

inline KInvariants k_invariants(const WeightedGraph& g) { return k_invariants_from(assemble(g)); }

/// Closed-form K-theory of the one-vertex graph E_{n,m}:
///
///            | m = 0   | m = 1             | m != 0, 1
///   n = 1    | (Z, Z)  | (Z + Z, Z + Z)    | (Z, Z + Z/|m-1|)
///   n >= 2   | (Z, Z)  | (Z + Z/(n-1), Z)  | (Z/(n-1), Z/|m-1|)
///
/// [1] is 1 when m != 1 and (0, 1) when m = 1.
inline KInvariants one_vertex_reference(const Integer& n, const Integer& m) {
    if (n < 1) throw ValidationError("one_vertex_reference: n must be >= 1");
    KInvariants k;
    auto element = [](const AbelianGroup& grp, IntVector free, IntVector tors) {
        GroupElement e{grp, std::move(free), {}};
        for (std::size_t i = 0; i < grp.torsion.size(); ++i) e.torsion_coords.push_back(floor_mod(tors[i], grp.torsion[i]));
        return e;
    };
    const Integer n1 = n - 1;
    if (m == 0) {
        k.k0 = AbelianGroup::from_factors(1, {});
        k.k1 = AbelianGroup::from_factors(1, {});
        k.unit = element(k.k0, {1}, {});
    } else if (m == 1) {
        // K0 = Z + Z/(n-1), where Z/0 = Z when n = 1.
        k.k0 = AbelianGroup::from_factors(1, {n1});
        k.k1 = AbelianGroup::from_factors(n == 1 ? 2 : 1, {});
        if (n == 1)
            k.unit = element(k.k0, {0, 1}, {});
        else
            k.unit = element(k.k0, {0}, IntVector(k.k0.torsion.size(), Integer(1)));
    } else {
        const Integer m1 = abs_value(m - 1);
        if (n == 1) {
            k.k0 = AbelianGroup::from_factors(1, {});
            k.k1 = AbelianGroup::from_factors(1, {m1});
            k.unit = element(k.k0, {1}, {});
        } else {
            k.k0 = AbelianGroup::from_factors(0, {n1});
            k.k1 = AbelianGroup::from_factors(0, {m1});
            k.unit = element(k.k0, {}, IntVector(k.k0.torsion.size(), Integer(1)));
        }
    }
    return k;
}

/// The one-vertex graph E_{n,m}: vertex "v", loop "e".
inline WeightedGraph one_vertex_graph(const Integer& n, const Integer& m) {
    return build_graph({"v"}, {{"e", "v", "v", n, m}});
}

}  // namespace okgraph
