//! The three series of invariant tensors attached to a homological field in
//! flat coordinates, their closed forms for quadratic fields, and the
//! finite linear-algebra decision of exactness.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::{CEQManifold, LieSuperAlgebraSpec};
use crate::error::QcharError;
use crate::linalg::QMatrix;
use crate::rational::Rat;
use crate::superalg::{
    derivative_tensor, jacobian, lie_derivative, supertrace, GrassmannPolynomial, TensorField,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Series {
    A,
    B,
    C,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Series::A => write!(f, "A"),
            Series::B => write!(f, "B"),
            Series::C => write!(f, "C"),
        }
    }
}

/// One computed class representative together with what has been decided
/// about it. `exact` stays `None` until an exactness decision is requested.
#[derive(Debug, Clone)]
pub struct ClassReport {
    pub series: Series,
    pub n: usize,
    pub representative: TensorField,
    pub closed: bool,
    pub exact: Option<bool>,
    pub primitive: Option<TensorField>,
}

/// Endomorphism-valued slice of the second-derivative tensor at lower
/// index `i`: the matrix with entries `d_i d_k Q^j`.
fn endo_slice(d2: &TensorField, i: u8) -> TensorField {
    let dim = d2.domain().dim() as u8;
    let mut m = TensorField::zero(d2.domain().clone(), 1, 1);
    for k in 0..dim {
        for j in 0..dim {
            let v = d2.get(&[i, k], &[j]);
            if !v.is_zero() {
                m.add_to(vec![k], vec![j], v);
            }
        }
    }
    m
}

/// All products `P(a_1..a_n)` of the derivative endomorphisms, composed so
/// that the slice for `a_n` is applied on the outside. Keys are the index
/// tuples in slot order.
fn endo_products(m: &CEQManifold, n: usize) -> BTreeMap<Vec<u8>, TensorField> {
    let dim = m.domain().dim() as u8;
    let d2 = derivative_tensor(m.q(), 2);
    let slices: Vec<TensorField> = (0..dim).map(|i| endo_slice(&d2, i)).collect();
    let mut level: BTreeMap<Vec<u8>, TensorField> = BTreeMap::new();
    for a in 0..dim {
        level.insert(vec![a], slices[a as usize].clone());
    }
    for _ in 1..n {
        let mut next = BTreeMap::new();
        for (tuple, prod) in &level {
            for a in 0..dim {
                let mut key = tuple.clone();
                key.push(a);
                next.insert(key, slices[a as usize].mat_mul(prod));
            }
        }
        level = next;
    }
    level
}

fn wrap_scalar(domain: &crate::superalg::OddDomain, f: GrassmannPolynomial) -> TensorField {
    let mut t = TensorField::zero(domain.clone(), 0, 0);
    t.add_to(vec![], vec![], f);
    t
}

fn report(m: &CEQManifold, series: Series, n: usize, representative: TensorField) -> ClassReport {
    let closed = lie_derivative(m.q(), &representative)
        .map(|l| l.is_zero())
        .unwrap_or(false);
    ClassReport { series, n, representative, closed, exact: None, primitive: None }
}

/// The scalar class of index `n`: the supertrace of the (2n-1)-st power of
/// the first-derivative endomorphism.
pub fn class_a(m: &CEQManifold, n: usize) -> ClassReport {
    assert!(n >= 1);
    let lam = jacobian(m.q());
    let rep = supertrace(&lam.mat_pow(2 * n - 1)).expect("jacobian is a (1,1) tensor");
    report(m, Series::A, n, wrap_scalar(m.domain(), rep))
}

/// The `(n+1, 1)` class of index `n`: products of `n` derivative
/// endomorphisms, with the extra lower slot as the endomorphism input.
pub fn class_b(m: &CEQManifold, n: usize) -> ClassReport {
    assert!(n >= 1);
    let dim = m.domain().dim() as u8;
    let mut rep = TensorField::zero(m.domain().clone(), n + 1, 1);
    for (tuple, prod) in endo_products(m, n) {
        for k in 0..dim {
            for j in 0..dim {
                let v = prod.get(&[k], &[j]);
                if v.is_zero() {
                    continue;
                }
                let mut lower = tuple.clone();
                lower.push(k);
                rep.add_to(lower, vec![j], v);
            }
        }
    }
    report(m, Series::B, n, rep)
}

/// The `(n, 0)` class of index `n`: the supertrace of the `(n+1, 1)` class
/// over its endomorphism slot.
pub fn class_c(m: &CEQManifold, n: usize) -> ClassReport {
    assert!(n >= 1);
    let mut rep = TensorField::zero(m.domain().clone(), n, 0);
    for (tuple, prod) in endo_products(m, n) {
        let tr = supertrace(&prod).expect("product of (1,1) tensors");
        if !tr.is_zero() {
            rep.add_to(tuple, vec![], tr);
        }
    }
    report(m, Series::C, n, rep)
}

/// Matrix product of adjoint matrices for an index tuple, composed left to
/// right: entry `[d][k]` of `ad_{a_1} ad_{a_2} ... ad_{a_n}`.
fn ad_product(spec: &LieSuperAlgebraSpec, tuple: &[usize]) -> Vec<Vec<Rat>> {
    let dim = spec.dim();
    let mut prod = spec.ad(tuple[0]);
    for &a in &tuple[1..] {
        let right = spec.ad(a);
        let mut next = vec![vec![Rat::zero(); dim]; dim];
        #[allow(clippy::needless_range_loop)]
        for d in 0..dim {
            for k in 0..dim {
                let mut acc = Rat::zero();
                for mm in 0..dim {
                    acc += &prod[d][mm] * &right[mm][k];
                }
                next[d][k] = acc;
            }
        }
        prod = next;
    }
    prod
}

fn trace(mat: &[Vec<Rat>]) -> Rat {
    let mut acc = Rat::zero();
    for (i, row) in mat.iter().enumerate() {
        acc += row[i].clone();
    }
    acc
}

fn tuples(dim: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                (0..dim).map(move |a| {
                    let mut t2 = t.clone();
                    t2.push(a);
                    t2
                })
            })
            .collect();
    }
    out
}

/// Closed form of the scalar series for a quadratic field, written directly
/// in adjoint matrices: the ghost polynomial
/// `tr(ad_{a_1} ... ad_{a_{2n-1}}) c^{a_1} ... c^{a_{2n-1}}`.
pub fn adjoint_class_a(spec: &LieSuperAlgebraSpec, n: usize) -> GrassmannPolynomial {
    let dim = spec.dim();
    let len = 2 * n - 1;
    let mut out = GrassmannPolynomial::zero(dim);
    for tuple in tuples(dim, len) {
        // Repeated ghost indices kill the monomial; skip them early.
        let mut seen = 0u32;
        if tuple.iter().any(|&a| {
            let bit = 1u32 << a;
            let dup = seen & bit != 0;
            seen |= bit;
            dup
        }) {
            continue;
        }
        let tr = trace(&ad_product(spec, &tuple));
        if tr.is_zero() {
            continue;
        }
        let mut mono = GrassmannPolynomial::constant(dim, tr);
        for &a in &tuple {
            mono = &mono * &GrassmannPolynomial::generator(dim, a);
        }
        out = &out + &mono;
    }
    out
}

/// Closed form of the `(n+1, 1)` series for a quadratic field: constant
/// components `(ad_{a_1} ... ad_{a_n})^b_{a_{n+1}}`.
pub fn adjoint_class_b(spec: &LieSuperAlgebraSpec, n: usize) -> TensorField {
    let dim = spec.dim();
    let mut out = TensorField::zero(spec.ghost_domain(), n + 1, 1);
    for tuple in tuples(dim, n) {
        let prod = ad_product(spec, &tuple);
        for k in 0..dim {
            for b in 0..dim {
                if prod[b][k].is_zero() {
                    continue;
                }
                let mut lower: Vec<u8> = tuple.iter().map(|&a| a as u8).collect();
                lower.push(k as u8);
                out.add_to(
                    lower,
                    vec![b as u8],
                    GrassmannPolynomial::constant(dim, prod[b][k].clone()),
                );
            }
        }
    }
    out
}

/// Closed form of the `(n, 0)` series for a quadratic field: constant
/// components `tr(ad_{a_1} ... ad_{a_n})`.
pub fn adjoint_class_c(spec: &LieSuperAlgebraSpec, n: usize) -> TensorField {
    let dim = spec.dim();
    let mut out = TensorField::zero(spec.ghost_domain(), n, 0);
    for tuple in tuples(dim, n) {
        let tr = trace(&ad_product(spec, &tuple));
        if tr.is_zero() {
            continue;
        }
        let lower: Vec<u8> = tuple.iter().map(|&a| a as u8).collect();
        out.add_to(lower, vec![], GrassmannPolynomial::constant(dim, tr));
    }
    out
}

fn all_keys(dim: u8, n_lower: usize, n_upper: usize) -> Vec<(Vec<u8>, Vec<u8>)> {
    let mut keys = vec![(vec![], vec![])];
    for slot in 0..(n_lower + n_upper) {
        keys = keys
            .into_iter()
            .flat_map(|(l, u): (Vec<u8>, Vec<u8>)| {
                (0..dim).map(move |i| {
                    let mut l2 = l.clone();
                    let mut u2 = u.clone();
                    if slot < n_lower {
                        l2.push(i);
                    } else {
                        u2.push(i);
                    }
                    (l2, u2)
                })
            })
            .collect();
    }
    keys
}

fn is_homogeneous_quadratic(q: &crate::superalg::VectorField) -> bool {
    q.comps()
        .iter()
        .all(|c| c.terms().all(|(mask, _)| mask.count_ones() == 2))
}

/// Decides whether a closed tensor is a Lie derivative along `Q` of some
/// tensor of the same type. The search space is the full finite span of
/// monomial tensors (restricted to the complementary component parity when
/// the input is parity-homogeneous); a returned primitive `S` is certified
/// by recomputing `L_Q S` exactly. For a homogeneous quadratic field the
/// solve splits into independent blocks by polynomial degree.
pub fn is_exact(
    m: &CEQManifold,
    t: &TensorField,
) -> Result<(bool, Option<TensorField>), QcharError> {
    m.domain().check_same(t.domain())?;
    let lt = lie_derivative(m.q(), t)?;
    if !lt.is_zero() {
        return Err(QcharError::InvalidInput(
            "exactness is only decided for closed tensors, and this one is not closed".into(),
        ));
    }
    if t.is_zero() {
        return Ok((
            true,
            Some(TensorField::zero(m.domain().clone(), t.n_lower(), t.n_upper())),
        ));
    }
    let dim = m.domain().dim();
    let target_parity = t.component_parity().map(|p| (p + 1) % 2);
    let keys = all_keys(dim as u8, t.n_lower(), t.n_upper());
    let masks: Vec<u32> = (0..(1u32 << dim))
        .filter(|mask| match target_parity {
            Some(p) => mask.count_ones() % 2 == p as u32,
            None => true,
        })
        .collect();

    // A block is one polynomial degree of the candidate basis when the
    // field raises degree uniformly, otherwise the whole basis at once.
    let split = is_homogeneous_quadratic(m.q());
    let blocks: Vec<Vec<u32>> = if split {
        let mut by_degree: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &mask in &masks {
            by_degree.entry(mask.count_ones()).or_default().push(mask);
        }
        by_degree.into_values().collect()
    } else {
        vec![masks]
    };

    fn intern(
        key: (Vec<u8>, Vec<u8>, u32),
        row_index: &mut BTreeMap<(Vec<u8>, Vec<u8>, u32), usize>,
    ) -> usize {
        let next = row_index.len();
        *row_index.entry(key).or_insert(next)
    }

    let mut primitive = TensorField::zero(m.domain().clone(), t.n_lower(), t.n_upper());
    let mut covered = TensorField::zero(m.domain().clone(), t.n_lower(), t.n_upper());
    for block_masks in blocks {
        // Right-hand side restricted to what this block can produce. In the
        // degree-split case every term of the derivative raises polynomial
        // degree by exactly one; otherwise no restriction applies.
        let rhs = if split {
            let rhs_degrees: std::collections::BTreeSet<u32> =
                block_masks.iter().map(|m| m.count_ones() + 1).collect();
            let mut rhs = TensorField::zero(m.domain().clone(), t.n_lower(), t.n_upper());
            for ((l, u), v) in t.iter() {
                let mut part = GrassmannPolynomial::zero(dim);
                for (mask, c) in v.terms() {
                    if rhs_degrees.contains(&mask.count_ones()) {
                        part.add_term(mask, c.clone());
                    }
                }
                if !part.is_zero() {
                    rhs.add_to(l.clone(), u.clone(), part);
                }
            }
            rhs
        } else {
            t.clone()
        };

        // Columns: the derivative of each monomial candidate, stored sparsely.
        let mut row_index: BTreeMap<(Vec<u8>, Vec<u8>, u32), usize> = BTreeMap::new();
        let mut columns: Vec<Vec<(usize, Rat)>> = Vec::new();
        for (l, u) in &keys {
            for &mask in &block_masks {
                let mut s = TensorField::zero(m.domain().clone(), t.n_lower(), t.n_upper());
                let mut mono = GrassmannPolynomial::zero(dim);
                mono.add_term(mask, crate::rational::int(1));
                s.add_to(l.clone(), u.clone(), mono);
                let ls = lie_derivative(m.q(), &s)?;
                let mut col = Vec::new();
                for ((cl, cu), v) in ls.iter() {
                    for (cmask, c) in v.terms() {
                        let r = intern((cl.clone(), cu.clone(), cmask), &mut row_index);
                        col.push((r, c.clone()));
                    }
                }
                columns.push(col);
            }
        }
        for ((l, u), v) in rhs.iter() {
            for (mask, _) in v.terms() {
                intern((l.clone(), u.clone(), mask), &mut row_index);
            }
        }

        let rows = row_index.len();
        let cols = columns.len();
        let mut a = QMatrix::zero(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col {
                a.set(*i, j, v.clone());
            }
        }
        let mut b = vec![Rat::zero(); rows];
        for ((l, u), v) in rhs.iter() {
            for (mask, c) in v.terms() {
                let r = row_index[&(l.clone(), u.clone(), mask)];
                b[r] = c.clone();
            }
        }
        let Some(x) = a.solve(&b) else {
            return Ok((false, None));
        };
        let mut idx = 0;
        for (l, u) in &keys {
            for &mask in &block_masks {
                if !x[idx].is_zero() {
                    let mut mono = GrassmannPolynomial::zero(dim);
                    mono.add_term(mask, x[idx].clone());
                    primitive.add_to(l.clone(), u.clone(), mono);
                }
                idx += 1;
            }
        }
        covered = covered.add(&rhs);
    }
    // Components of t outside every block's reach make the system
    // infeasible (nothing maps onto them).
    if !covered.sub(t).is_zero() {
        return Ok((false, None));
    }
    let check = lie_derivative(m.q(), &primitive)?;
    if !check.sub(t).is_zero() {
        return Err(QcharError::Internal(
            "solver produced a primitive that fails recheck".into(),
        ));
    }
    Ok((true, Some(primitive)))
}

/// The scalar class of index 1 together with an exactness verdict: the
/// obstruction to the existence of an invariant density.
pub fn modular_class(spec: &LieSuperAlgebraSpec) -> Result<ClassReport, QcharError> {
    let m = super::ce_field(spec)?;
    let mut rep = class_a(&m, 1);
    let (ex, prim) = is_exact(&m, &rep.representative)?;
    rep.exact = Some(ex);
    rep.primitive = prim.filter(|_| ex);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmanifolds::{builtin_algebra, ce_field};
    use crate::rational::int;
    use crate::sampling::Sampler;

    fn manifold(name: &str) -> CEQManifold {
        ce_field(&builtin_algebra(name).unwrap()).unwrap()
    }

    #[test]
    fn scalar_class_of_sl2_vanishes() {
        // Semisimplicity makes every adjoint matrix traceless.
        let m = manifold("sl2");
        let rep = class_a(&m, 1);
        assert!(rep.representative.is_zero());
        assert!(rep.closed);
    }

    #[test]
    fn all_three_series_are_closed_on_builtins() {
        for name in ["sl2", "borel2", "heisenberg3"] {
            let m = manifold(name);
            for n in 1..=3 {
                assert!(class_a(&m, n).closed, "{name} scalar class {n}");
                assert!(class_b(&m, n).closed, "{name} endomorphism class {n}");
                assert!(class_c(&m, n).closed, "{name} traced class {n}");
            }
        }
    }

    #[test]
    fn series_are_closed_on_random_homological_fields() {
        let mut s = Sampler::new(19);
        for _ in 0..3 {
            let f = s.homological_field(4);
            let m = CEQManifold::from_field(f).unwrap();
            for n in 1..=2 {
                assert!(class_a(&m, n).closed);
                assert!(class_b(&m, n).closed);
                assert!(class_c(&m, n).closed);
            }
        }
    }

    /// The engine representatives and the adjoint closed forms agree up to
    /// fixed convention factors: the supertrace on an all-odd frame is
    /// minus the matrix trace (one global sign for the traced series), and
    /// for the scalar series the matrix product inside the trace composes
    /// against the ghost order, so reversing the odd ghosts contributes
    /// another (-1)^(n-1). The endomorphism series matches on the nose.
    #[test]
    fn quadratic_fields_match_the_adjoint_closed_forms() {
        for name in ["sl2", "borel2", "heisenberg3"] {
            let spec = builtin_algebra(name).unwrap();
            let m = ce_field(&spec).unwrap();
            for n in 1..=2 {
                let a_engine = class_a(&m, n).representative.get(&[], &[]);
                let a_adj = adjoint_class_a(&spec, n);
                let sign = if n % 2 == 0 { int(1) } else { int(-1) };
                assert_eq!(a_engine, a_adj.scale(&sign), "{name} scalar class {n}");

                let b_engine = class_b(&m, n).representative;
                assert_eq!(
                    b_engine,
                    adjoint_class_b(&spec, n),
                    "{name} endomorphism class {n}"
                );

                let c_engine = class_c(&m, n).representative;
                assert_eq!(
                    c_engine,
                    adjoint_class_c(&spec, n).scale(&int(-1)),
                    "{name} traced class {n}"
                );
            }
        }
    }

    #[test]
    fn killing_tensor_of_sl2() {
        // The traced class of index 2 is the Killing pairing: closed form
        // value 2 on (e0, e0), and nondegenerate as a matrix.
        let spec = builtin_algebra("sl2").unwrap();
        let adj = adjoint_class_c(&spec, 2);
        assert_eq!(adj.get(&[1, 1], &[]), GrassmannPolynomial::constant(3, int(2)));
        let mut k = QMatrix::zero(3, 3);
        for a in 0..3u8 {
            for b in 0..3u8 {
                k.set(a as usize, b as usize, adj.get(&[a, b], &[]).coeff(0));
            }
        }
        assert!(!k.det().is_zero(), "Killing pairing of sl2 must be nondegenerate");
        // The engine representative is the same tensor up to the
        // convention factor for n = 2.
        let m = ce_field(&spec).unwrap();
        let c2 = class_c(&m, 2).representative;
        assert_eq!(c2.get(&[1, 1], &[]), GrassmannPolynomial::constant(3, int(-2)));
    }

    #[test]
    fn exactness_decision_on_constructed_coboundaries() {
        let m = manifold("sl2");
        let mut s = Sampler::new(23);
        let seed = s.tensor(m.domain(), 1, 1, 0);
        let t = lie_derivative(m.q(), &seed).unwrap();
        let (ex, prim) = is_exact(&m, &t).unwrap();
        assert!(ex, "a constructed coboundary must be recognized as exact");
        let p = prim.unwrap();
        assert_eq!(lie_derivative(m.q(), &p).unwrap(), t);
    }

    #[test]
    fn modular_class_of_borel_is_not_exact() {
        let rep = modular_class(&builtin_algebra("borel2").unwrap()).unwrap();
        // Representative is -c0 in this supertrace convention.
        assert_eq!(
            rep.representative.get(&[], &[]),
            GrassmannPolynomial::monomial(2, &[0], int(-1))
        );
        assert!(rep.closed);
        assert_eq!(rep.exact, Some(false));
        assert!(rep.primitive.is_none());
    }

    #[test]
    fn modular_classes_of_unimodular_algebras_vanish() {
        for name in ["sl2", "heisenberg3", "abelian:3"] {
            let rep = modular_class(&builtin_algebra(name).unwrap()).unwrap();
            assert!(rep.representative.is_zero(), "{name} must have zero divergence");
            assert_eq!(rep.exact, Some(true));
        }
    }

    #[test]
    fn non_closed_input_is_rejected() {
        let m = manifold("borel2");
        let mut t = TensorField::zero(m.domain().clone(), 0, 0);
        t.add_to(vec![], vec![], GrassmannPolynomial::generator(2, 1));
        // Q(c1) = -c0.c1 is nonzero, so c1 is not closed.
        assert!(is_exact(&m, &t).is_err());
    }
}
