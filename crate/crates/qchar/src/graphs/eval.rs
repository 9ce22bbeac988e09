//! Evaluation of graph vectors to tensor fields on an odd domain.
//!
//! A vertex with `n` incoming slots stands for the `(n,1)` tensor of n-th
//! partials of the structure field's components; an edge contracts the
//! source's upper index into the target's slot. The Koszul signs of the
//! gluing depend only on the graph, not on the summed indices, so the
//! engine computes one overall sign per graph from a symbol word and then
//! sums plain products of components.
//!
//! Slot order at a vertex is numbered legs first, then edges by source
//! label; component symmetry of the derivative tensors makes the result
//! independent of that choice, and relabeling vertices scales the result
//! by the permutation sign. Both facts are exercised in tests.

use std::collections::BTreeMap;

use crate::error::QcharError;
use crate::superalg::{
    derivative_tensor, is_homological, GrassmannPolynomial, TensorField, VectorField,
};

use super::{DecoratedGraph, GraphVector, Slot};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sym {
    /// Slot symbol of a vertex: `Dc(v, r)` is slot rank `r` at vertex `v`.
    Dc(usize, usize),
    /// The component of the vertex tensor.
    Coef(usize),
    /// The output symbol of a vertex.
    Del(usize),
}

/// The index-independent sign of a graph: build the per-vertex symbol words
/// in label order, contract every edge (the derivative symbol must sit
/// immediately left of its slot symbol, moving costs the parities it
/// crosses), then reorder what is left into the normal form with leg slots
/// in decreasing leg order, coefficients in label order and outputs in leg
/// order.
fn graph_sign_with_order(g: &DecoratedGraph, edge_order: &[(usize, usize)]) -> i8 {
    let k = g.vertex_count();
    let slots: Vec<Vec<Slot>> = (0..k).map(|v| g.slots(v)).collect();
    let parity = |s: &Sym, slots: &[Vec<Slot>]| -> u8 {
        match s {
            Sym::Dc(..) | Sym::Del(_) => 1,
            Sym::Coef(v) => (slots[*v].len() % 2) as u8,
        }
    };
    let mut word: Vec<Sym> = Vec::new();
    for v in 0..k {
        for r in (0..slots[v].len()).rev() {
            word.push(Sym::Dc(v, r));
        }
        word.push(Sym::Coef(v));
        word.push(Sym::Del(v));
    }
    let mut sign = 1i8;
    for &(u, t) in edge_order {
        let r = slots[t]
            .iter()
            .position(|s| *s == Slot::Edge(u))
            .expect("edge slot present at its target");
        let pd = word
            .iter()
            .position(|s| *s == Sym::Del(u))
            .expect("output symbol present");
        let pc = word
            .iter()
            .position(|s| *s == Sym::Dc(t, r))
            .expect("slot symbol present");
        let (lo, hi) = if pd < pc { (pd, pc) } else { (pc, pd) };
        let between: u32 = word[lo + 1..hi]
            .iter()
            .map(|s| parity(s, &slots) as u32)
            .sum();
        if between % 2 == 1 {
            sign = -sign;
        }
        if pd > pc {
            // The derivative symbol approaches its slot from the right and
            // must additionally cross it.
            sign = -sign;
        }
        word.remove(hi);
        word.remove(lo);
    }
    let mut target: Vec<Sym> = Vec::new();
    for l in (0..g.in_legs().len()).rev() {
        let v = g.in_legs()[l];
        let r = slots[v]
            .iter()
            .position(|s| *s == Slot::InLeg(l))
            .expect("leg slot present");
        target.push(Sym::Dc(v, r));
    }
    for v in 0..k {
        target.push(Sym::Coef(v));
    }
    for &v in g.out_legs() {
        target.push(Sym::Del(v));
    }
    debug_assert_eq!(word.len(), target.len());
    for (i, want) in target.iter().enumerate() {
        let j = word[i..]
            .iter()
            .position(|s| s == want)
            .expect("normal form symbol present")
            + i;
        let moving = parity(&word[j], &slots);
        let mut jj = j;
        while jj > i {
            if moving == 1 && parity(&word[jj - 1], &slots) == 1 {
                sign = -sign;
            }
            word.swap(jj - 1, jj);
            jj -= 1;
        }
    }
    sign
}

fn graph_sign(g: &DecoratedGraph) -> i8 {
    graph_sign_with_order(g, g.edges())
}

struct Evaluator<'a> {
    g: &'a DecoratedGraph,
    slots: Vec<Vec<Slot>>,
    /// Per vertex, the nonzero components of its derivative tensor:
    /// `(slot indices, output index, value)`.
    comps: Vec<Vec<(Vec<u8>, u8, GrassmannPolynomial)>>,
    sign: i8,
    upper_idx: Vec<Option<u8>>,
    /// Output index demanded by an already-processed edge target.
    req_upper: Vec<Option<u8>>,
    leg_idx: Vec<u8>,
    out_idx: Vec<u8>,
    result: TensorField,
}

impl Evaluator<'_> {
    fn run(&mut self, v: usize, acc: &GrassmannPolynomial) {
        if v == self.g.vertex_count() {
            let value = if self.sign > 0 { acc.clone() } else { -acc };
            self.result
                .add_to(self.leg_idx.clone(), self.out_idx.clone(), value);
            return;
        }
        for ci in 0..self.comps[v].len() {
            let (lower, upper, value) = {
                let c = &self.comps[v][ci];
                (c.0.clone(), c.1, c.2.clone())
            };
            if let Some(req) = self.req_upper[v] {
                if upper != req {
                    continue;
                }
            }
            let mut ok = true;
            for (r, slot) in self.slots[v].iter().enumerate() {
                match *slot {
                    Slot::Edge(s) if s < v => {
                        if self.upper_idx[s] != Some(lower[r]) {
                            ok = false;
                            break;
                        }
                    }
                    Slot::Edge(s) if s == v => {
                        if upper != lower[r] {
                            ok = false;
                            break;
                        }
                    }
                    _ => {}
                }
            }
            if !ok {
                continue;
            }
            let next = acc * &value;
            if next.is_zero() {
                continue;
            }
            // Commit the choices, remembering what to undo.
            let mut touched_req: Vec<usize> = Vec::new();
            for (r, slot) in self.slots[v].iter().enumerate() {
                match *slot {
                    Slot::InLeg(l) => self.leg_idx[l] = lower[r],
                    Slot::Edge(s) if s > v => {
                        self.req_upper[s] = Some(lower[r]);
                        touched_req.push(s);
                    }
                    _ => {}
                }
            }
            // Conflicting demands on one future vertex: two slots cannot
            // both constrain it unless they agree, and `req_upper` keeps
            // only the last. Re-check agreement.
            let consistent = self.slots[v].iter().enumerate().all(|(r, slot)| match *slot {
                Slot::Edge(s) if s > v => self.req_upper[s] == Some(lower[r]),
                _ => true,
            });
            if consistent {
                self.upper_idx[v] = Some(upper);
                if let Some(l) = self
                    .g
                    .out_legs()
                    .iter()
                    .position(|&w| w == v)
                {
                    self.out_idx[l] = upper;
                }
                self.run(v + 1, &next);
                self.upper_idx[v] = None;
            }
            for s in touched_req {
                self.req_upper[s] = None;
            }
        }
    }
}

/// Evaluates one decorated graph against a structure field, with all sign
/// bookkeeping but no coefficient.
pub(crate) fn evaluate_raw(
    g: &DecoratedGraph,
    q: &VectorField,
    cache: &mut BTreeMap<usize, TensorField>,
) -> TensorField {
    let k = g.vertex_count();
    let slots: Vec<Vec<Slot>> = (0..k).map(|v| g.slots(v)).collect();
    for v in 0..k {
        let n = slots[v].len();
        cache
            .entry(n)
            .or_insert_with(|| derivative_tensor(q, n));
    }
    let comps: Vec<Vec<(Vec<u8>, u8, GrassmannPolynomial)>> = (0..k)
        .map(|v| {
            cache[&slots[v].len()]
                .iter()
                .map(|((lo, up), val)| (lo.clone(), up[0], val.clone()))
                .collect()
        })
        .collect();
    let mut ev = Evaluator {
        g,
        sign: graph_sign(g),
        comps,
        slots,
        upper_idx: vec![None; k],
        req_upper: vec![None; k],
        leg_idx: vec![0; g.in_legs().len()],
        out_idx: vec![0; g.out_legs().len()],
        result: TensorField::zero(
            q.domain().clone(),
            g.in_legs().len(),
            g.out_legs().len(),
        ),
    };
    ev.run(0, &GrassmannPolynomial::one(q.domain().dim()));
    ev.result
}

/// Evaluates a graph vector against a homological structure field. All
/// graphs in the vector must share one tensor type; the result is the
/// matching `(in-legs, out-legs)` tensor field.
pub fn evaluate_graph(v: &GraphVector, q: &VectorField) -> Result<TensorField, QcharError> {
    if !is_homological(q) {
        return Err(QcharError::InvalidInput(
            "evaluation requires a homological structure field".into(),
        ));
    }
    let mut shape: Option<(usize, usize)> = None;
    for (g, _) in v.terms() {
        let s = (g.in_legs().len(), g.out_legs().len());
        match shape {
            None => shape = Some(s),
            Some(prev) if prev != s => {
                return Err(QcharError::InvalidInput(format!(
                    "graphs of mixed tensor type in one vector: ({},{}) and ({},{})",
                    prev.0, prev.1, s.0, s.1
                )))
            }
            _ => {}
        }
    }
    let (n, m) = shape.unwrap_or((0, 0));
    let mut result = TensorField::zero(q.domain().clone(), n, m);
    let mut cache: BTreeMap<usize, TensorField> = BTreeMap::new();
    for (g, c) in v.terms() {
        let t = evaluate_raw(g, q, &mut cache);
        result = result.add(&t.scale(c));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::graph_differential;
    use crate::rational::int;
    use crate::superalg::{jacobian, lie_derivative, OddDomain};

    fn borel() -> VectorField {
        let domain = OddDomain::new(2);
        let q1 = GrassmannPolynomial::monomial(2, &[0, 1], int(-1));
        VectorField::new(
            domain.clone(),
            vec![GrassmannPolynomial::zero(2), q1],
        )
        .unwrap()
    }

    fn sl2() -> VectorField {
        // Chevalley-Eilenberg field for the 3-dimensional algebra with
        // [e1,e2] = e1, [e1,e3] = 2 e2, [e2,e3] = e3.
        let domain = OddDomain::new(3);
        let q1 = GrassmannPolynomial::monomial(3, &[0, 1], int(-1));
        let q2 = GrassmannPolynomial::monomial(3, &[0, 2], int(-2));
        let q3 = GrassmannPolynomial::monomial(3, &[1, 2], int(-1));
        VectorField::new(domain.clone(), vec![q1, q2, q3]).unwrap()
    }

    fn double_borel() -> VectorField {
        let domain = OddDomain::new(4);
        let zero = GrassmannPolynomial::zero(4);
        let q2 = GrassmannPolynomial::monomial(4, &[0, 1], int(-1));
        let q4 = GrassmannPolynomial::monomial(4, &[2, 3], int(-1));
        VectorField::new(domain.clone(), vec![zero.clone(), q2, zero, q4]).unwrap()
    }

    #[test]
    fn corollas_evaluate_to_derivative_tensors() {
        for q in [borel(), sl2()] {
            for n in 1..=3usize {
                let v = GraphVector::single(&DecoratedGraph::corolla(n));
                let t = evaluate_graph(&v, &q).unwrap();
                assert_eq!(t, derivative_tensor(&q, n), "corolla {n} mismatch");
            }
        }
    }

    #[test]
    fn chains_evaluate_to_twist_powers() {
        for q in [borel(), sl2()] {
            let lam = jacobian(&q);
            for k in 1..=3usize {
                let v = GraphVector::single(&DecoratedGraph::line(k));
                let t = evaluate_graph(&v, &q).unwrap();
                assert_eq!(t, lam.mat_pow(k), "chain of {k} mismatch");
            }
        }
    }

    #[test]
    fn single_loop_evaluates_to_divergence() {
        // On the rank-2 solvable field the loop gives the positive trace of
        // the twist, the first coordinate function.
        let q = borel();
        let v = GraphVector::single(&DecoratedGraph::polygon(1));
        let t = evaluate_graph(&v, &q).unwrap();
        assert_eq!(t.get(&[], &[]), GrassmannPolynomial::generator(2, 0));
    }

    #[test]
    fn vertex_relabeling_scales_by_permutation_sign() {
        let q = sl2();
        let mut cache = BTreeMap::new();
        let cat = DecoratedGraph::caterpillar(2);
        let swapped = cat.relabel(&[1, 0]);
        let a = evaluate_raw(&cat, &q, &mut cache);
        let b = evaluate_raw(&swapped, &q, &mut cache);
        assert_eq!(a, b.scale(&int(-1)), "odd relabeling must negate");

        let wheel = DecoratedGraph::wheel(3);
        let cycled = wheel.relabel(&[1, 2, 0]);
        let a = evaluate_raw(&wheel, &q, &mut cache);
        let b = evaluate_raw(&cycled, &q, &mut cache);
        assert_eq!(a, b, "even relabeling must preserve the value");
    }

    #[test]
    fn contraction_order_does_not_change_the_sign() {
        use itertools::Itertools;
        for g in [
            DecoratedGraph::wheel(3),
            DecoratedGraph::polygon(3),
            DecoratedGraph::new(2, vec![(0, 1), (1, 1)], vec![0], vec![]).unwrap(),
            DecoratedGraph::new(3, vec![(0, 2), (1, 2), (2, 2)], vec![0, 1], vec![]).unwrap(),
        ] {
            let baseline = graph_sign(&g);
            for perm in g.edges().iter().cloned().permutations(g.edges().len()) {
                assert_eq!(
                    graph_sign_with_order(&g, &perm),
                    baseline,
                    "edge order changed the sign on {g}"
                );
            }
        }
    }

    #[test]
    fn evaluation_intertwines_differential_and_lie_derivative() {
        let fields = [borel(), sl2(), double_borel()];
        let samples = [
            DecoratedGraph::corolla(2),
            DecoratedGraph::corolla(3),
            DecoratedGraph::corolla(4),
            DecoratedGraph::caterpillar(2),
            DecoratedGraph::polygon(1),
            DecoratedGraph::wheel(1),
            DecoratedGraph::wheel(2),
            DecoratedGraph::line(1),
            DecoratedGraph::line(2),
            DecoratedGraph::new(1, vec![(0, 0)], vec![0], vec![]).unwrap(),
            DecoratedGraph::new(2, vec![(0, 1)], vec![0, 0, 0, 1], vec![1]).unwrap(),
        ];
        for q in &fields {
            for g in &samples {
                let v = GraphVector::single(g);
                if v.is_zero() {
                    continue;
                }
                let dv = graph_differential(&v);
                let rhs = lie_derivative(q, &evaluate_graph(&v, q).unwrap()).unwrap();
                if dv.is_zero() {
                    assert!(rhs.is_zero(), "closed graph {g} has nonzero Lie derivative");
                } else {
                    let lhs = evaluate_graph(&dv, q).unwrap();
                    assert_eq!(lhs, rhs, "chain rule fails on {g}");
                }
            }
        }
    }

    #[test]
    fn non_homological_fields_are_rejected() {
        let domain = OddDomain::new(4);
        let zero = GrassmannPolynomial::zero(4);
        let q1 = GrassmannPolynomial::monomial(4, &[1, 2], int(1));
        let q2 = GrassmannPolynomial::monomial(4, &[2, 3], int(1));
        let q4 = GrassmannPolynomial::monomial(4, &[0, 1], int(1));
        let q = VectorField::new(domain, vec![q1, q2, zero, q4]).unwrap();
        assert!(!is_homological(&q));
        let v = GraphVector::single(&DecoratedGraph::corolla(2));
        assert!(evaluate_graph(&v, &q).is_err());
    }
}
