//! Decorated directed graphs: canonical signed forms, the vertex-splitting
//! differential, slice enumeration with rank computations, and evaluation
//! to tensor fields on odd domains.
//!
//! A graph has labeled vertices `1..k` (stored 0-based), numbered incoming
//! legs, numbered outgoing legs, and directed edges. Every vertex has
//! exactly one outgoing incidence, either an edge or an out-leg, and at
//! least one incoming incidence. Loops are allowed and graphs need not be
//! connected. Swapping two vertex labels negates a graph; a graph carrying
//! an automorphism that induces an odd vertex permutation is zero.

pub mod diff;
pub mod enumerate;
pub mod eval;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::QcharError;
use crate::rational::{parse_rat, signed_parts, Rat};

pub use diff::graph_differential;
pub use enumerate::{basis_cocycles, cohomology_dims, enumerate_basis, CocycleSeries};
pub use eval::evaluate_graph;

/// An incoming attachment of a vertex, in the order used both by the
/// differential's splitting signs and by evaluation: numbered legs first,
/// then edges by source label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slot {
    InLeg(usize),
    Edge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DecoratedGraph {
    k: usize,
    /// Sorted by source vertex; each vertex is the source of at most one.
    edges: Vec<(usize, usize)>,
    /// `in_legs[l]` is the vertex carrying incoming leg `l + 1`.
    in_legs: Vec<usize>,
    /// `out_legs[l]` is the vertex whose outgoing incidence is leg `l + 1`.
    out_legs: Vec<usize>,
}

impl DecoratedGraph {
    pub fn new(
        k: usize,
        mut edges: Vec<(usize, usize)>,
        in_legs: Vec<usize>,
        out_legs: Vec<usize>,
    ) -> Result<Self, QcharError> {
        edges.sort_unstable();
        for &(s, t) in &edges {
            if s >= k || t >= k {
                return Err(QcharError::InvalidInput(format!(
                    "edge ({},{}) out of range for {k} vertices",
                    s + 1,
                    t + 1
                )));
            }
        }
        for &v in in_legs.iter().chain(out_legs.iter()) {
            if v >= k {
                return Err(QcharError::InvalidInput(format!(
                    "leg attached to vertex {} of {k}",
                    v + 1
                )));
            }
        }
        let mut out_count = vec![0usize; k];
        for &(s, _) in &edges {
            out_count[s] += 1;
        }
        for &v in &out_legs {
            out_count[v] += 1;
        }
        if let Some(v) = (0..k).find(|&v| out_count[v] != 1) {
            return Err(QcharError::InvalidInput(format!(
                "vertex {} has {} outgoing incidences, want exactly 1",
                v + 1,
                out_count[v]
            )));
        }
        let g = Self { k, edges, in_legs, out_legs };
        if let Some(v) = (0..k).find(|&v| g.in_count(v) == 0) {
            return Err(QcharError::InvalidInput(format!(
                "vertex {} has no incoming incidence",
                v + 1
            )));
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn in_legs(&self) -> &[usize] {
        &self.in_legs
    }

    pub fn out_legs(&self) -> &[usize] {
        &self.out_legs
    }

    /// Number of incoming incidences (edges plus legs) at `v`.
    pub fn in_count(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(_, t)| t == v).count()
            + self.in_legs.iter().filter(|&&w| w == v).count()
    }

    /// The unique outgoing edge target of `v`, if its outgoing incidence is
    /// an edge.
    pub fn out_target(&self, v: usize) -> Option<usize> {
        self.edges.iter().find(|&&(s, _)| s == v).map(|&(_, t)| t)
    }

    /// Incoming slots of `v` in canonical order: legs by number, then edges
    /// by source label.
    pub fn slots(&self, v: usize) -> Vec<Slot> {
        let mut slots: Vec<Slot> = self
            .in_legs
            .iter()
            .enumerate()
            .filter(|&(_, &w)| w == v)
            .map(|(l, _)| Slot::InLeg(l))
            .collect();
        slots.extend(
            self.edges
                .iter()
                .filter(|&&(_, t)| t == v)
                .map(|&(s, _)| Slot::Edge(s)),
        );
        slots
    }

    pub fn is_bivalent(&self, v: usize) -> bool {
        self.in_count(v) == 1
    }

    /// Connectivity of the vertex set under the edge relation, ignoring
    /// legs. The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        if self.k <= 1 {
            return true;
        }
        let mut parent: Vec<usize> = (0..self.k).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for &(s, t) in &self.edges {
            let (a, b) = (find(&mut parent, s), find(&mut parent, t));
            if a != b {
                parent[a] = b;
            }
        }
        let root = find(&mut parent, 0);
        (1..self.k).all(|v| find(&mut parent, v) == root)
    }

    /// First Betti number for a connected graph: edges − vertices + 1.
    pub fn genus(&self) -> usize {
        (self.edges.len() + 1).saturating_sub(self.k)
    }

    /// Applies a vertex relabeling; `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> DecoratedGraph {
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(s, t)| (perm[s], perm[t]))
            .collect();
        edges.sort_unstable();
        DecoratedGraph {
            k: self.k,
            edges,
            in_legs: self.in_legs.iter().map(|&v| perm[v]).collect(),
            out_legs: self.out_legs.iter().map(|&v| perm[v]).collect(),
        }
    }

    /// The one-vertex graph with `n` incoming legs and one out-leg.
    pub fn corolla(n: usize) -> DecoratedGraph {
        DecoratedGraph::new(1, vec![], vec![0; n], vec![0]).expect("corolla is valid")
    }

    /// The cycle on `k` vertices with no legs; `k = 1` is the single-vertex
    /// loop.
    pub fn polygon(k: usize) -> DecoratedGraph {
        let edges = (0..k).map(|v| (v, (v + 1) % k)).collect();
        DecoratedGraph::new(k, edges, vec![], vec![]).expect("polygon is valid")
    }

    /// The chain of `k` bivalent vertices with one in-leg at the start and
    /// one out-leg at the end.
    pub fn line(k: usize) -> DecoratedGraph {
        let edges = (0..k.saturating_sub(1)).map(|v| (v, v + 1)).collect();
        DecoratedGraph::new(k, edges, vec![0], vec![k - 1]).expect("line is valid")
    }

    /// The chain of `n` vertices where the head carries in-legs 1, 2 and
    /// each later vertex `i` carries in-leg `i + 1`; one out-leg at the
    /// tail. Every vertex has exactly two incoming incidences.
    pub fn caterpillar(n: usize) -> DecoratedGraph {
        let edges = (0..n.saturating_sub(1)).map(|v| (v, v + 1)).collect();
        let mut in_legs = vec![0, 0];
        in_legs.extend(1..n);
        DecoratedGraph::new(n, edges, in_legs, vec![n - 1]).expect("caterpillar is valid")
    }

    /// The cycle on `n` vertices where vertex `i` carries in-leg `i`; every
    /// vertex has exactly two incoming incidences.
    pub fn wheel(n: usize) -> DecoratedGraph {
        let edges = (0..n).map(|v| (v, (v + 1) % n)).collect();
        DecoratedGraph::new(n, edges, (0..n).collect(), vec![]).expect("wheel is valid")
    }

    fn encoding(&self) -> (&Vec<(usize, usize)>, &Vec<usize>, &Vec<usize>) {
        (&self.edges, &self.in_legs, &self.out_legs)
    }
}

fn permutation_parity(perm: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for i in 0..k {
        let mut next = Vec::with_capacity(out.len() * (i + 1));
        for p in &out {
            for pos in 0..=i {
                let mut q = p.clone();
                q.insert(pos, i);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Lexicographically minimal vertex relabeling of `g` together with the
/// sign of the permutation achieving it. Sign `0` means some automorphism
/// of `g` induces an odd vertex permutation, so the class of `g` is zero.
pub fn canonicalize(g: &DecoratedGraph) -> (DecoratedGraph, i8) {
    let k = g.vertex_count();
    if k <= 1 {
        return (g.clone(), 1);
    }
    let mut best: Option<(DecoratedGraph, i8)> = None;
    let mut killed = false;
    for perm in permutations(k) {
        let cand = g.relabel(&perm);
        let sign = permutation_parity(&perm);
        match &mut best {
            None => best = Some((cand, sign)),
            Some((bg, bs)) => {
                if cand.encoding() < bg.encoding() {
                    *bg = cand;
                    *bs = sign;
                    killed = false;
                } else if cand.encoding() == bg.encoding() && sign != *bs {
                    killed = true;
                }
            }
        }
    }
    let (bg, bs) = best.expect("k >= 2 has permutations");
    if killed {
        (bg, 0)
    } else {
        (bg, bs)
    }
}

/// A finite rational linear combination of canonical graphs. Insertion
/// canonicalizes, applies the relabeling sign, and drops classes killed by
/// odd automorphisms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphVector {
    terms: BTreeMap<DecoratedGraph, Rat>,
}

impl GraphVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(g: &DecoratedGraph) -> Self {
        let mut v = Self::zero();
        v.add_graph(g, Rat::from_integer(1.into()));
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DecoratedGraph, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: &DecoratedGraph) -> Rat {
        let (cg, s) = canonicalize(g);
        if s == 0 {
            return Rat::zero();
        }
        let c = self.terms.get(&cg).cloned().unwrap_or_else(Rat::zero);
        if s > 0 {
            c
        } else {
            -c
        }
    }

    pub fn add_graph(&mut self, g: &DecoratedGraph, c: Rat) {
        if c.is_zero() {
            return;
        }
        let (cg, s) = canonicalize(g);
        if s == 0 {
            return;
        }
        let c = if s > 0 { c } else { -c };
        match self.terms.get_mut(&cg) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&cg);
                }
            }
            None => {
                self.terms.insert(cg, c);
            }
        }
    }

    pub fn add(&self, other: &GraphVector) -> GraphVector {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            // Keys are already canonical; merge directly.
            match out.terms.get_mut(g) {
                Some(slot) => {
                    *slot += c.clone();
                    if slot.is_zero() {
                        out.terms.remove(g);
                    }
                }
                None => {
                    out.terms.insert(g.clone(), c.clone());
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> GraphVector {
        if c.is_zero() {
            return GraphVector::zero();
        }
        GraphVector {
            terms: self.terms.iter().map(|(g, v)| (g.clone(), v * c)).collect(),
        }
    }

    pub fn sub(&self, other: &GraphVector) -> GraphVector {
        self.add(&other.scale(&Rat::from_integer((-1).into())))
    }
}

impl fmt::Display for DecoratedGraph {
    /// One-line form `k; edges: s->t,...; in: v1,...; out: w1,...` with
    /// 1-based labels and empty sections left blank.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges = self
            .edges
            .iter()
            .map(|&(s, t)| format!("{}->{}", s + 1, t + 1))
            .collect::<Vec<_>>()
            .join(",");
        let ins = self
            .in_legs
            .iter()
            .map(|&v| (v + 1).to_string())
            .collect::<Vec<_>>()
            .join(",");
        let outs = self
            .out_legs
            .iter()
            .map(|&v| (v + 1).to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "{}; edges: {}; in: {}; out: {}", self.k, edges, ins, outs)
    }
}

pub fn parse_graph(line: &str) -> Result<DecoratedGraph, QcharError> {
    let bad = |msg: &str| QcharError::InvalidInput(format!("graph line {line:?}: {msg}"));
    let mut parts = line.split(';').map(str::trim);
    let k: usize = parts
        .next()
        .ok_or_else(|| bad("missing vertex count"))?
        .parse()
        .map_err(|_| bad("bad vertex count"))?;
    let section = |parts: &mut dyn Iterator<Item = &str>, name: &str| -> Result<String, QcharError> {
        let s = parts
            .next()
            .ok_or_else(|| bad(&format!("missing section {name}")))?;
        s.strip_prefix(&format!("{name}:"))
            .map(|rest| rest.trim().to_string())
            .ok_or_else(|| bad(&format!("expected section {name}")))
    };
    let edges_s = section(&mut parts, "edges")?;
    let in_s = section(&mut parts, "in")?;
    let out_s = section(&mut parts, "out")?;
    let mut edges = Vec::new();
    if !edges_s.is_empty() {
        for e in edges_s.split(',') {
            let (s, t) = e
                .trim()
                .split_once("->")
                .ok_or_else(|| bad("edge without ->"))?;
            let s: usize = s.trim().parse().map_err(|_| bad("bad edge source"))?;
            let t: usize = t.trim().parse().map_err(|_| bad("bad edge target"))?;
            if s == 0 || t == 0 {
                return Err(bad("labels are 1-based"));
            }
            edges.push((s - 1, t - 1));
        }
    }
    let parse_list = |s: &str| -> Result<Vec<usize>, QcharError> {
        if s.is_empty() {
            return Ok(vec![]);
        }
        s.split(',')
            .map(|v| {
                let v: usize = v.trim().parse().map_err(|_| bad("bad leg vertex"))?;
                if v == 0 {
                    return Err(bad("labels are 1-based"));
                }
                Ok(v - 1)
            })
            .collect()
    };
    DecoratedGraph::new(k, edges, parse_list(&in_s)?, parse_list(&out_s)?)
}

/// Renders a graph vector one term per line, `coefficient * graph`.
pub fn render_vector(v: &GraphVector) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.terms()
        .map(|(g, c)| {
            let (sign, mag) = signed_parts(c);
            format!("{sign}{mag} * {g}")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Parses the output of [`render_vector`].
pub fn parse_vector(text: &str) -> Result<GraphVector, QcharError> {
    let mut out = GraphVector::zero();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line == "0" {
            continue;
        }
        let (coeff, graph) = line
            .split_once('*')
            .ok_or_else(|| QcharError::InvalidInput(format!("term without '*': {line:?}")))?;
        let c = parse_rat(coeff.trim())?;
        let g = parse_graph(graph.trim())?;
        out.add_graph(&g, c);
    }
    Ok(out)
}

/// The graph families whose slices the engine enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Connected, genus 0, no bivalent vertices, one out-leg.
    Tree,
    /// Connected, genus 1, no bivalent vertices, no out-legs.
    Cyclic,
    /// Connected, all vertices bivalent, no legs: the pure cycles.
    Polygon,
    /// Connected, all vertices bivalent, one in-leg and one out-leg.
    Line,
    /// Every connected graph with the given leg counts.
    AllConnected,
    /// Connected with at least one bivalent and one higher vertex.
    Mixed,
}

impl Family {
    pub fn matches(&self, g: &DecoratedGraph) -> bool {
        let k = g.vertex_count();
        let all_bivalent = (0..k).all(|v| g.is_bivalent(v));
        let none_bivalent = (0..k).all(|v| !g.is_bivalent(v));
        match self {
            Family::Tree => {
                g.is_connected() && none_bivalent && g.genus() == 0 && g.out_legs().len() == 1
            }
            Family::Cyclic => {
                g.is_connected() && none_bivalent && g.genus() == 1 && g.out_legs().is_empty()
            }
            Family::Polygon => {
                g.is_connected()
                    && all_bivalent
                    && g.in_legs().is_empty()
                    && g.out_legs().is_empty()
            }
            Family::Line => {
                g.is_connected()
                    && all_bivalent
                    && g.in_legs().len() == 1
                    && g.out_legs().len() == 1
            }
            Family::AllConnected => g.is_connected(),
            Family::Mixed => g.is_connected() && !all_bivalent && !none_bivalent,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = QcharError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tree" => Ok(Family::Tree),
            "cyclic" => Ok(Family::Cyclic),
            "polygon" => Ok(Family::Polygon),
            "line" => Ok(Family::Line),
            "all-connected" => Ok(Family::AllConnected),
            "mixed" => Ok(Family::Mixed),
            other => Err(QcharError::InvalidInput(format!(
                "unknown family {other:?}; use tree, cyclic, polygon, line, all-connected or mixed"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Tree => "tree",
            Family::Cyclic => "cyclic",
            Family::Polygon => "polygon",
            Family::Line => "line",
            Family::AllConnected => "all-connected",
            Family::Mixed => "mixed",
        };
        write!(f, "{s}")
    }
}

/// A fully enumerated slice: all canonical nonzero graphs of a family with
/// fixed leg counts and vertex count, in deterministic order.
#[derive(Debug, Clone)]
pub struct ComplexSlice {
    pub family: Family,
    pub in_legs: usize,
    pub out_legs: usize,
    pub vertices: usize,
    pub basis: Vec<DecoratedGraph>,
}

impl ComplexSlice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn validity_checks() {
        // A vertex with two outgoing incidences is rejected.
        assert!(DecoratedGraph::new(1, vec![(0, 0)], vec![], vec![0]).is_err());
        // A vertex with no incoming incidence is rejected.
        assert!(DecoratedGraph::new(2, vec![(0, 1)], vec![1], vec![1]).is_err());
        // The single-vertex loop is fine.
        assert!(DecoratedGraph::new(1, vec![(0, 0)], vec![], vec![]).is_ok());
    }

    #[test]
    fn corolla_is_already_canonical() {
        let g = DecoratedGraph::corolla(3);
        let (cg, s) = canonicalize(&g);
        assert_eq!(cg, g);
        assert_eq!(s, 1);
    }

    #[test]
    fn vertex_swap_carries_minus_one() {
        // The caterpillar with 2 vertices, and the same graph with vertex
        // labels interchanged: same canonical form, opposite signs.
        let g = DecoratedGraph::caterpillar(2);
        let swapped = g.relabel(&[1, 0]);
        let (cg, s) = canonicalize(&g);
        let (cs, ss) = canonicalize(&swapped);
        assert_eq!(cg, cs);
        assert_eq!(s, -ss, "odd relabeling must flip the stored sign");
    }

    #[test]
    fn two_gon_is_killed_by_its_odd_automorphism() {
        let g = DecoratedGraph::polygon(2);
        let (_, s) = canonicalize(&g);
        assert_eq!(s, 0, "swapping the two cycle vertices is an automorphism");
        let v = GraphVector::single(&g);
        assert!(v.is_zero());
    }

    #[test]
    fn odd_polygons_survive_canonicalization() {
        for k in [1usize, 3, 5, 7] {
            let (_, s) = canonicalize(&DecoratedGraph::polygon(k));
            assert_ne!(s, 0, "{k}-gon should be a nonzero class");
        }
        for k in [2usize, 4, 6] {
            let (_, s) = canonicalize(&DecoratedGraph::polygon(k));
            assert_eq!(s, 0, "{k}-gon should be killed");
        }
    }

    #[test]
    fn insertion_merges_signed_copies() {
        let g = DecoratedGraph::caterpillar(2);
        let swapped = g.relabel(&[1, 0]);
        let mut v = GraphVector::zero();
        v.add_graph(&g, int(1));
        v.add_graph(&swapped, int(1));
        assert!(v.is_zero(), "g + swapped(g) must cancel");
        let mut w = GraphVector::zero();
        w.add_graph(&g, int(1));
        w.add_graph(&swapped, int(-2));
        assert_eq!(w.coeff(&g), int(3));
    }

    #[test]
    fn slot_order_is_legs_then_edges() {
        // Two-vertex graph: edge 1->2, legs 1 on v2, 2 on v1, 3 on v2.
        let g = DecoratedGraph::new(2, vec![(0, 1)], vec![1, 0, 1], vec![1]).unwrap();
        assert_eq!(
            g.slots(1),
            vec![Slot::InLeg(0), Slot::InLeg(2), Slot::Edge(0)]
        );
        assert_eq!(g.slots(0), vec![Slot::InLeg(1)]);
    }

    #[test]
    fn text_format_round_trip() {
        let g = DecoratedGraph::new(3, vec![(0, 1), (1, 2)], vec![0, 0, 1], vec![2]).unwrap();
        let line = g.to_string();
        assert_eq!(line, "3; edges: 1->2,2->3; in: 1,1,2; out: 3");
        assert_eq!(parse_graph(&line).unwrap(), g);

        let p = DecoratedGraph::polygon(1);
        assert_eq!(p.to_string(), "1; edges: 1->1; in: ; out: ");
        assert_eq!(parse_graph(&p.to_string()).unwrap(), p);

        let mut v = GraphVector::zero();
        v.add_graph(&g, crate::rational::rat(-3, 2));
        v.add_graph(&p, int(2));
        let text = render_vector(&v);
        assert_eq!(parse_vector(&text).unwrap(), v);
    }

    #[test]
    fn family_predicates() {
        assert!(Family::Tree.matches(&DecoratedGraph::caterpillar(3)));
        assert!(Family::Cyclic.matches(&DecoratedGraph::wheel(3)));
        assert!(Family::Polygon.matches(&DecoratedGraph::polygon(5)));
        assert!(Family::Line.matches(&DecoratedGraph::line(4)));
        assert!(!Family::Tree.matches(&DecoratedGraph::line(4)));
        // A bivalent vertex feeding a trivalent one: mixed.
        let g = DecoratedGraph::new(2, vec![(0, 1)], vec![0, 1], vec![1]).unwrap();
        assert!(Family::Mixed.matches(&g));
        assert!(Family::AllConnected.matches(&g));
        assert!(!Family::Tree.matches(&g));
    }
}
