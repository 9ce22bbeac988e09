//! Exhaustive slice enumeration and exact rank computations.
//!
//! A slice fixes a family, leg counts and a vertex count; its basis is the
//! set of canonical nonzero graphs. Cohomology dimensions come from exact
//! ranks of the differential between consecutive slices over the rationals.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::QcharError;
use crate::linalg::QMatrix;
use crate::rational::Rat;

use super::{canonicalize, graph_differential, ComplexSlice, DecoratedGraph, Family, GraphVector};

/// Hard cap on the vertex count of any enumerated slice, overridable
/// through `QCHAR_BUDGET_VERTICES`.
pub fn vertex_budget() -> usize {
    std::env::var("QCHAR_BUDGET_VERTICES")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(8)
}

fn empty_slice(family: Family, n: usize, m: usize, k: usize) -> ComplexSlice {
    ComplexSlice {
        family,
        in_legs: n,
        out_legs: m,
        vertices: k,
        basis: Vec::new(),
    }
}

/// All canonical nonzero graphs of the family with `n` in-legs, `m`
/// out-legs and `k` vertices.
pub fn enumerate_basis(
    family: Family,
    n: usize,
    m: usize,
    k: usize,
) -> Result<ComplexSlice, QcharError> {
    let budget = vertex_budget();
    if k > budget {
        return Err(QcharError::Budget(format!(
            "slice needs {k} vertices but the budget is {budget} \
             (raise QCHAR_BUDGET_VERTICES to override)"
        )));
    }
    if k == 0 {
        // Only the empty graph, which carries no legs.
        let basis = if n == 0 && m == 0 && family != Family::Mixed {
            vec![]
        } else {
            vec![]
        };
        return Ok(ComplexSlice {
            family,
            in_legs: n,
            out_legs: m,
            vertices: k,
            basis,
        });
    }

    // Families of bivalent vertices have a unique shape per vertex count, so
    // skip the general search.
    match family {
        Family::Polygon => {
            if n != 0 || m != 0 {
                return Ok(empty_slice(family, n, m, k));
            }
            let (g, s) = canonicalize(&DecoratedGraph::polygon(k));
            let basis = if s == 0 { vec![] } else { vec![g] };
            return Ok(ComplexSlice {
                family,
                in_legs: n,
                out_legs: m,
                vertices: k,
                basis,
            });
        }
        Family::Line => {
            if n != 1 || m != 1 {
                return Ok(empty_slice(family, n, m, k));
            }
            let (g, s) = canonicalize(&DecoratedGraph::line(k));
            let basis = if s == 0 { vec![] } else { vec![g] };
            return Ok(ComplexSlice {
                family,
                in_legs: n,
                out_legs: m,
                vertices: k,
                basis,
            });
        }
        Family::Tree => {
            // Every vertex needs two incoming incidences and a tree on k
            // vertices supplies k - 1 internal edges, so n >= k + 1.
            if m != 1 || k + 1 > n {
                return Ok(empty_slice(family, n, m, k));
            }
        }
        Family::Cyclic => {
            if m != 0 || k > n {
                return Ok(empty_slice(family, n, m, k));
            }
        }
        Family::AllConnected | Family::Mixed => {}
    }

    let mut found: BTreeSet<DecoratedGraph> = BTreeSet::new();
    // Outgoing structure: each vertex points at a target vertex or holds an
    // out-leg (encoded as k).
    let mut out_choice = vec![0usize; k];
    loop {
        let holders: Vec<usize> = (0..k).filter(|&v| out_choice[v] == k).collect();
        if holders.len() == m {
            let edges: Vec<(usize, usize)> = (0..k)
                .filter(|&v| out_choice[v] < k)
                .map(|v| (v, out_choice[v]))
                .collect();
            let mut edge_in = vec![0usize; k];
            for &(_, t) in &edges {
                edge_in[t] += 1;
            }
            let need: Vec<usize> = match family {
                Family::Tree | Family::Cyclic => {
                    (0..k).map(|v| 2usize.saturating_sub(edge_in[v])).collect()
                }
                _ => (0..k).map(|v| 1usize.saturating_sub(edge_in[v])).collect(),
            };
            for perm in out_leg_orders(&holders) {
                assign_in_legs(
                    family,
                    k,
                    &edges,
                    &perm,
                    &need,
                    n,
                    &mut Vec::with_capacity(n),
                    &mut found,
                );
            }
        }
        // Advance the mixed-radix counter.
        let mut pos = 0;
        loop {
            if pos == k {
                let basis: Vec<DecoratedGraph> = found.into_iter().collect();
                return Ok(ComplexSlice {
                    family,
                    in_legs: n,
                    out_legs: m,
                    vertices: k,
                    basis,
                });
            }
            out_choice[pos] += 1;
            if out_choice[pos] <= k {
                break;
            }
            out_choice[pos] = 0;
            pos += 1;
        }
    }
}

/// All assignments of numbered out-legs to the holder vertices.
fn out_leg_orders(holders: &[usize]) -> Vec<Vec<usize>> {
    if holders.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &h) in holders.iter().enumerate() {
        let mut rest: Vec<usize> = holders.to_vec();
        rest.remove(i);
        for mut tail in out_leg_orders(&rest) {
            let mut v = vec![h];
            v.append(&mut tail);
            out.push(v);
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn assign_in_legs(
    family: Family,
    k: usize,
    edges: &[(usize, usize)],
    out_legs: &[usize],
    need: &[usize],
    remaining: usize,
    acc: &mut Vec<usize>,
    found: &mut BTreeSet<DecoratedGraph>,
) {
    // Prune: every vertex must still be able to reach its quota.
    let mut deficiency = 0usize;
    for v in 0..k {
        let have = acc.iter().filter(|&&w| w == v).count();
        deficiency += need[v].saturating_sub(have);
    }
    if deficiency > remaining {
        return;
    }
    if remaining == 0 {
        let Ok(g) = DecoratedGraph::new(k, edges.to_vec(), acc.clone(), out_legs.to_vec()) else {
            return;
        };
        if !family.matches(&g) {
            return;
        }
        let (cg, s) = canonicalize(&g);
        if s != 0 {
            found.insert(cg);
        }
        return;
    }
    for v in 0..k {
        acc.push(v);
        assign_in_legs(family, k, edges, out_legs, need, remaining - 1, acc, found);
        acc.pop();
    }
}

/// Matrix of the differential from `src` to `dst` in their canonical bases.
pub fn slice_matrix(src: &ComplexSlice, dst: &ComplexSlice) -> QMatrix {
    let mut m = QMatrix::zero(dst.basis.len(), src.basis.len());
    for (j, g) in src.basis.iter().enumerate() {
        let d = graph_differential(&GraphVector::single(g));
        for (h, c) in d.terms() {
            let i = dst
                .basis
                .iter()
                .position(|b| b == h)
                .unwrap_or_else(|| panic!("differential left the enumerated slice at {h}"));
            m.set(i, j, c.clone());
        }
    }
    m
}

/// Cohomology dimensions of a family with fixed leg counts, listed for
/// vertex counts `1..max_k - 1` (the last slice only feeds a rank).
pub fn family_cohomology_dims(
    family: Family,
    n: usize,
    m: usize,
    max_k: usize,
) -> Result<Vec<(usize, usize)>, QcharError> {
    let slices: Vec<ComplexSlice> = (0..=max_k)
        .map(|k| enumerate_basis(family, n, m, k))
        .collect::<Result<_, _>>()?;
    let ranks: Vec<usize> = (0..max_k)
        .map(|k| slice_matrix(&slices[k], &slices[k + 1]).rank())
        .collect();
    let mut out = Vec::new();
    for k in 1..max_k {
        let dim = slices[k].basis.len();
        let h = dim - ranks[k] - ranks[k - 1];
        out.push((k, h));
    }
    Ok(out)
}

/// Cohomology table of the standard complexes indexed the classical way:
/// trees carry `n + 1` in-legs and one out-leg, cycles carry `n` in-legs;
/// for the bivalent families `n` bounds the vertex count.
pub fn cohomology_dims(family: Family, n: usize) -> Result<Vec<(usize, usize)>, QcharError> {
    match family {
        Family::Tree => family_cohomology_dims(Family::Tree, n + 1, 1, n + 1),
        Family::Cyclic => family_cohomology_dims(Family::Cyclic, n, 0, n + 1),
        Family::Polygon => family_cohomology_dims(Family::Polygon, 0, 0, n + 1),
        Family::Line => family_cohomology_dims(Family::Line, 1, 1, n + 1),
        other => Err(QcharError::InvalidInput(format!(
            "cohomology tables cover tree, cyclic, polygon and line, not {other}"
        ))),
    }
}

/// The three families of distinguished closed vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CocycleSeries {
    /// Pure cycles with an odd number of bivalent vertices.
    A,
    /// Chains of trivalent vertices with one out-leg.
    B,
    /// Cycles of trivalent vertices, one in-leg each.
    C,
}

impl std::str::FromStr for CocycleSeries {
    type Err = QcharError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(CocycleSeries::A),
            "B" | "b" => Ok(CocycleSeries::B),
            "C" | "c" => Ok(CocycleSeries::C),
            other => Err(QcharError::InvalidInput(format!(
                "unknown series {other:?}; use A, B or C"
            ))),
        }
    }
}

pub fn basis_cocycles(series: CocycleSeries, n: usize) -> Result<GraphVector, QcharError> {
    if n == 0 {
        return Err(QcharError::InvalidInput("series index must be >= 1".into()));
    }
    let g = match series {
        CocycleSeries::A => DecoratedGraph::polygon(2 * n - 1),
        CocycleSeries::B => DecoratedGraph::caterpillar(n),
        CocycleSeries::C => DecoratedGraph::wheel(n),
    };
    Ok(GraphVector::single(&g))
}

/// Checks that every vector of the top tree slice is a combination of
/// chain-shaped graphs plus a differential of the next-lower slice. The
/// chain-shaped basis graphs are those whose vertices each receive at most
/// one internal edge.
pub fn trivalent_reduction_holds(n: usize) -> Result<bool, QcharError> {
    let top = enumerate_basis(Family::Tree, n + 1, 1, n)?;
    let below = enumerate_basis(Family::Tree, n + 1, 1, n.saturating_sub(1))?;
    let dim = top.basis.len();
    if dim == 0 {
        return Ok(true);
    }
    let is_chain = |g: &DecoratedGraph| -> bool {
        (0..g.vertex_count())
            .all(|v| g.edges().iter().filter(|&&(_, t)| t == v).count() <= 1)
    };
    let chain_cols: Vec<usize> = top
        .basis
        .iter()
        .enumerate()
        .filter(|(_, g)| is_chain(g))
        .map(|(i, _)| i)
        .collect();
    let image = slice_matrix(&below, &top);
    let mut m = QMatrix::zero(dim, chain_cols.len() + image.cols);
    for (j, &i) in chain_cols.iter().enumerate() {
        m.set(i, j, Rat::from_integer(1.into()));
    }
    for j in 0..image.cols {
        for i in 0..dim {
            let v = image.get(i, j).clone();
            if !v.is_zero() {
                m.set(i, chain_cols.len() + j, v);
            }
        }
    }
    Ok(m.rank() == dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_slice_contains_the_chains() {
        let slice = enumerate_basis(Family::Tree, 3, 1, 2).unwrap();
        let (cat, _) = canonicalize(&DecoratedGraph::caterpillar(2));
        assert!(slice.basis.contains(&cat));
        assert!(!slice.basis.is_empty());
    }

    #[test]
    fn tree_slices_above_the_weight_are_empty() {
        // With 4 in-legs a tree can have at most 3 vertices.
        let slice = enumerate_basis(Family::Tree, 4, 1, 4).unwrap();
        assert_eq!(slice.dim(), 0);
        let slice = enumerate_basis(Family::Cyclic, 3, 0, 4).unwrap();
        assert_eq!(slice.dim(), 0);
    }

    #[test]
    fn two_vertex_polygon_slice_is_empty() {
        let slice = enumerate_basis(Family::Polygon, 0, 0, 2).unwrap();
        assert_eq!(slice.dim(), 0);
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a = enumerate_basis(Family::Tree, 4, 1, 3).unwrap();
        let b = enumerate_basis(Family::Tree, 4, 1, 3).unwrap();
        assert_eq!(a.basis, b.basis);
    }

    #[test]
    fn budget_violations_are_loud() {
        let err = enumerate_basis(Family::Polygon, 0, 0, 64).unwrap_err();
        assert!(matches!(err, QcharError::Budget(_)));
    }

    #[test]
    fn small_tree_tables() {
        // The tree table at weight n concentrates in top degree m = n with
        // dimension n!: the surviving classes are the caterpillars whose
        // head vertex carries the first in-leg, and with n + 1 numbered
        // in-legs there are n! of those (choose the head partner, then
        // order the rest along the spine). Checked here against the
        // brute-force rank computation.
        assert_eq!(cohomology_dims(Family::Tree, 1).unwrap(), vec![(1, 1)]);
        assert_eq!(
            cohomology_dims(Family::Tree, 2).unwrap(),
            vec![(1, 0), (2, 2)]
        );
        assert_eq!(
            cohomology_dims(Family::Tree, 3).unwrap(),
            vec![(1, 0), (2, 0), (3, 6)]
        );
    }

    #[test]
    fn small_cyclic_tables() {
        assert_eq!(cohomology_dims(Family::Cyclic, 1).unwrap(), vec![(1, 1)]);
        assert_eq!(
            cohomology_dims(Family::Cyclic, 2).unwrap(),
            vec![(1, 0), (2, 1)]
        );
        assert_eq!(
            cohomology_dims(Family::Cyclic, 3).unwrap(),
            vec![(1, 0), (2, 0), (3, 2)]
        );
    }

    #[test]
    fn polygon_table_alternates() {
        assert_eq!(
            cohomology_dims(Family::Polygon, 5).unwrap(),
            vec![(1, 1), (2, 0), (3, 1), (4, 0), (5, 1)]
        );
    }

    #[test]
    fn line_complex_is_acyclic() {
        assert_eq!(
            cohomology_dims(Family::Line, 4).unwrap(),
            vec![(1, 0), (2, 0), (3, 0), (4, 0)]
        );
    }

    #[test]
    fn named_cocycles_are_closed() {
        for n in 1..=3usize {
            for series in [CocycleSeries::A, CocycleSeries::B, CocycleSeries::C] {
                let v = basis_cocycles(series, n).unwrap();
                assert!(!v.is_zero(), "series {series:?} n={n} should be nonzero");
                assert!(
                    graph_differential(&v).is_zero(),
                    "series {series:?} n={n} should be closed"
                );
            }
        }
    }

    #[test]
    fn chains_span_top_cohomology_in_small_weights() {
        for n in 2..=3usize {
            assert!(
                trivalent_reduction_holds(n).unwrap(),
                "chain reduction fails at weight {n}"
            );
        }
    }

    #[test]
    fn mixed_slices_vanish_in_small_cases() {
        let dims = family_cohomology_dims(Family::Mixed, 1, 1, 4).unwrap();
        for (k, dim) in dims {
            assert_eq!(dim, 0, "mixed complex should vanish at {k} vertices");
        }
    }
}

