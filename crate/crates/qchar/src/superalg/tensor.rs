use std::collections::BTreeMap;

use num_traits::Zero;

use super::{GrassmannPolynomial, OddDomain, VectorField};
use crate::error::QcharError;
use crate::rational::Rat;

/// A covariant tensor field of type `(n_lower, n_upper)` on a purely odd
/// domain, stored sparsely by index tuples. The component convention fixes
/// the abstract tensor as
///
/// `T = dc^{i_n} ... dc^{i_1} T_{i_1..i_n}^{j_1..j_m} d_{j_1} ... d_{j_m}`
///
/// (coframe factors reversed on the left, frame factors in order on the
/// right); every sign below is derived from that layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorField {
    domain: OddDomain,
    n_lower: usize,
    n_upper: usize,
    comps: BTreeMap<(Vec<u8>, Vec<u8>), GrassmannPolynomial>,
}

impl TensorField {
    pub fn zero(domain: OddDomain, n_lower: usize, n_upper: usize) -> Self {
        Self { domain, n_lower, n_upper, comps: BTreeMap::new() }
    }

    pub fn domain(&self) -> &OddDomain {
        &self.domain
    }

    pub fn n_lower(&self) -> usize {
        self.n_lower
    }

    pub fn n_upper(&self) -> usize {
        self.n_upper
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn get(&self, lower: &[u8], upper: &[u8]) -> GrassmannPolynomial {
        assert_eq!(lower.len(), self.n_lower);
        assert_eq!(upper.len(), self.n_upper);
        self.comps
            .get(&(lower.to_vec(), upper.to_vec()))
            .cloned()
            .unwrap_or_else(|| GrassmannPolynomial::zero(self.domain.dim()))
    }

    pub fn add_to(&mut self, lower: Vec<u8>, upper: Vec<u8>, value: GrassmannPolynomial) {
        assert_eq!(lower.len(), self.n_lower);
        assert_eq!(upper.len(), self.n_upper);
        if value.is_zero() {
            return;
        }
        let key = (lower, upper);
        match self.comps.get_mut(&key) {
            Some(slot) => {
                *slot = &*slot + &value;
                if slot.is_zero() {
                    self.comps.remove(&key);
                }
            }
            None => {
                self.comps.insert(key, value);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Vec<u8>, Vec<u8>), &GrassmannPolynomial)> {
        self.comps.iter()
    }

    pub fn add(&self, other: &TensorField) -> TensorField {
        assert_eq!((self.n_lower, self.n_upper), (other.n_lower, other.n_upper));
        let mut out = self.clone();
        for ((l, u), v) in &other.comps {
            out.add_to(l.clone(), u.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &TensorField) -> TensorField {
        self.add(&other.scale(&-crate::rational::one()))
    }

    pub fn scale(&self, c: &Rat) -> TensorField {
        if c.is_zero() {
            return TensorField::zero(self.domain.clone(), self.n_lower, self.n_upper);
        }
        let comps = self
            .comps
            .iter()
            .map(|(k, v)| (k.clone(), v.scale(c)))
            .collect();
        TensorField { domain: self.domain.clone(), n_lower: self.n_lower, n_upper: self.n_upper, comps }
    }

    /// Parity of the component polynomials when they are uniformly
    /// homogeneous; `None` otherwise.
    pub fn component_parity(&self) -> Option<u8> {
        let mut parity = None;
        for v in self.comps.values() {
            let p = v.parity()?;
            match parity {
                None => parity = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        parity.or(Some(0))
    }

    /// The identity endomorphism as a (1,1) tensor.
    pub fn identity(domain: OddDomain) -> Self {
        let mut t = TensorField::zero(domain.clone(), 1, 1);
        for a in 0..domain.dim() as u8 {
            t.add_to(vec![a], vec![a], GrassmannPolynomial::one(domain.dim()));
        }
        t
    }

    /// Endomorphism composition in lower-to-upper index order:
    /// `(A * B)_k^j = sum_m A_k^m B_m^j`.
    pub fn mat_mul(&self, other: &TensorField) -> TensorField {
        assert_eq!((self.n_lower, self.n_upper), (1, 1));
        assert_eq!((other.n_lower, other.n_upper), (1, 1));
        let mut out = TensorField::zero(self.domain.clone(), 1, 1);
        for ((l, u), a) in &self.comps {
            for ((l2, u2), b) in &other.comps {
                if u[0] != l2[0] {
                    continue;
                }
                out.add_to(l.clone(), u2.clone(), a * b);
            }
        }
        out
    }

    pub fn mat_pow(&self, k: usize) -> TensorField {
        assert!(k >= 1);
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mat_mul(self);
        }
        acc
    }
}

/// The `(1,1)` tensor of first partials `L_i^j = d_i Q^j` (the twisting
/// endomorphism of the tangent lift).
pub fn jacobian(q: &VectorField) -> TensorField {
    let dim = q.domain().dim();
    let mut t = TensorField::zero(q.domain().clone(), 1, 1);
    for j in 0..dim as u8 {
        for i in 0..dim as u8 {
            t.add_to(vec![i], vec![j], q.comp(j as usize).partial(i as usize));
        }
    }
    t
}

/// The `(n,1)` tensor of iterated partials `d_{i_1} ... d_{i_n} Q^j`, the
/// evaluation of the n-corolla generator.
pub fn derivative_tensor(q: &VectorField, n: usize) -> TensorField {
    let dim = q.domain().dim();
    let mut t = TensorField::zero(q.domain().clone(), n, 1);
    for j in 0..dim as u8 {
        let mut layer: BTreeMap<Vec<u8>, GrassmannPolynomial> = BTreeMap::new();
        layer.insert(vec![], q.comp(j as usize).clone());
        for _ in 0..n {
            let mut next = BTreeMap::new();
            for (idx, f) in &layer {
                for i in 0..dim as u8 {
                    // New derivative acts leftmost, so it prepends.
                    let df = f.partial(i as usize);
                    if df.is_zero() {
                        continue;
                    }
                    let mut key = vec![i];
                    key.extend_from_slice(idx);
                    next.insert(key, df);
                }
            }
            layer = next;
        }
        for (idx, f) in layer {
            t.add_to(idx, vec![j], f);
        }
    }
    t
}

/// Supertrace of a `(1,1)` tensor: `Str T = sum_a (-1)^{e_a} T_a^a`, which on
/// a purely odd domain is minus the ordinary trace.
pub fn supertrace(t: &TensorField) -> Result<GrassmannPolynomial, QcharError> {
    if (t.n_lower, t.n_upper) != (1, 1) {
        return Err(QcharError::InvalidInput(format!(
            "supertrace needs a (1,1) tensor, got ({},{})",
            t.n_lower, t.n_upper
        )));
    }
    let mut out = GrassmannPolynomial::zero(t.domain.dim());
    for a in 0..t.domain.dim() as u8 {
        out = &out - &t.get(&[a], &[a]);
    }
    Ok(out)
}

/// Lie derivative of a tensor field along an odd vector field, acting as an
/// odd derivation that commutes with contraction. In components, with
/// `G_i^j = d_i Q^j`:
///
/// `(L_Q T)_I^J = (-1)^n Q(T_I^J)
///              + (-1)^{n-1} sum_{p,l} G_{I_p}^l T_{I[p->l]}^J
///              + (-1)^n sum_{s,u} inv(T_I^{J[s->u]}) G_u^{J_s}`
///
/// where `inv` negates the odd part of the coefficient (the Koszul cost of
/// the frame correction crossing it).
pub fn lie_derivative(q: &VectorField, t: &TensorField) -> Result<TensorField, QcharError> {
    q.domain().check_same(t.domain())?;
    if q.parity() != 1 {
        return Err(QcharError::InvalidInput(
            "lie_derivative is implemented along odd fields only".into(),
        ));
    }
    let dim = q.domain().dim();
    let (n, m) = (t.n_lower, t.n_upper);
    let g = jacobian(q);
    let sign_n = if n % 2 == 0 { 1 } else { -1 };
    let mut out = TensorField::zero(t.domain.clone(), n, m);

    for ((lower, upper), f) in &t.comps {
        // Action on the coefficient.
        let qf = q.apply(f);
        if !qf.is_zero() {
            let v = if sign_n > 0 { qf } else { -&qf };
            out.add_to(lower.clone(), upper.clone(), v);
        }
        // Coframe corrections: the stored component feeds every key that
        // differs in one lower slot.
        for p in 0..n {
            for k in 0..dim as u8 {
                let gk = g.get(&[k], &[lower[p]]);
                if gk.is_zero() {
                    continue;
                }
                let term = &gk * f;
                if term.is_zero() {
                    continue;
                }
                let mut key = lower.clone();
                key[p] = k;
                let v = if sign_n > 0 { -&term } else { term };
                out.add_to(key, upper.clone(), v);
            }
        }
        // Frame corrections on upper slots.
        for s in 0..m {
            let f_inv = f.parity_involution();
            for b in 0..dim as u8 {
                let gb = g.get(&[upper[s]], &[b]);
                if gb.is_zero() {
                    continue;
                }
                let term = &f_inv * &gb;
                if term.is_zero() {
                    continue;
                }
                let mut key = upper.clone();
                key[s] = b;
                let v = if sign_n > 0 { term } else { -&term };
                out.add_to(lower.clone(), key, v);
            }
        }
    }
    Ok(out)
}
