use super::{GrassmannPolynomial, OddDomain, TensorField, VectorField};
use crate::error::QcharError;
use crate::linalg::QMatrix;
use crate::rational::{one, zero, Rat};

/// A polynomial change of odd coordinates `c^i -> phi^i(c)` on a purely odd
/// domain. Every image is odd (so the substitution preserves parity) and the
/// linear part is invertible, which makes the substitution an automorphism of
/// the Grassmann algebra: the nonlinear tail is nilpotent, so the inverse is
/// again polynomial and can be found by a finite fixed-point iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddSubstitution {
    domain: OddDomain,
    images: Vec<GrassmannPolynomial>,
}

impl OddSubstitution {
    pub fn new(domain: OddDomain, images: Vec<GrassmannPolynomial>) -> Result<Self, QcharError> {
        let dim = domain.dim();
        if images.len() != dim {
            return Err(QcharError::InvalidInput(format!(
                "substitution on a dimension-{dim} domain needs {dim} images, got {}",
                images.len()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            if img.dim() != dim {
                return Err(QcharError::DomainMismatch { left: dim, right: img.dim() });
            }
            if img.is_zero() || img.parity() != Some(1) {
                return Err(QcharError::InvalidInput(format!(
                    "image of generator {i} must be odd and nonzero"
                )));
            }
        }
        let subst = Self { domain, images };
        if subst.linear_inverse().is_none() {
            return Err(QcharError::InvalidInput(
                "linear part of the substitution is singular".into(),
            ));
        }
        Ok(subst)
    }

    pub fn identity(domain: OddDomain) -> Self {
        let images = (0..domain.dim())
            .map(|i| GrassmannPolynomial::generator(domain.dim(), i))
            .collect();
        Self { domain, images }
    }

    pub fn domain(&self) -> &OddDomain {
        &self.domain
    }

    pub fn images(&self) -> &[GrassmannPolynomial] {
        &self.images
    }

    /// The induced algebra endomorphism: every generator in `f` is replaced
    /// by its image.
    pub fn apply(&self, f: &GrassmannPolynomial) -> GrassmannPolynomial {
        assert_eq!(f.dim(), self.domain.dim());
        f.substitute(&self.images)
    }

    /// Inverse of the linear part as `Linv[j][i] = (L^{-1})^j_i`, meaning
    /// `sum_j L^i_j Linv[j][k] = delta^i_k` where `L^i_j` is the coefficient
    /// of `c^j` in `phi^i`. Returns `None` when the linear part is singular.
    fn linear_inverse(&self) -> Option<Vec<Vec<Rat>>> {
        let dim = self.domain.dim();
        let mut l = QMatrix::zero(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                l.set(i, j, self.images[i].coeff(1u32 << j));
            }
        }
        let mut inv = vec![vec![zero(); dim]; dim];
        for k in 0..dim {
            let mut rhs = vec![zero(); dim];
            rhs[k] = one();
            let col = l.solve(&rhs)?;
            for j in 0..dim {
                inv[j][k] = col[j].clone();
            }
        }
        Some(inv)
    }

    /// The inverse substitution `psi`, characterised by
    /// `phi^i(psi) = c^i` for every generator. Writing
    /// `phi^i = sum_j L^i_j c^j + H^i` with `H^i` of degree at least three,
    /// the characterisation rearranges to the fixed-point equation
    /// `psi^j = sum_i (L^{-1})^j_i (c^i - H^i(psi))`, and iterating it gains
    /// two polynomial degrees per pass, so it stabilises quickly.
    pub fn inverse(&self) -> OddSubstitution {
        let dim = self.domain.dim();
        let linv = self
            .linear_inverse()
            .expect("constructor guarantees an invertible linear part");
        let tails: Vec<GrassmannPolynomial> = self
            .images
            .iter()
            .map(|img| {
                let mut tail = GrassmannPolynomial::zero(dim);
                for (mask, c) in img.terms() {
                    if mask.count_ones() >= 3 {
                        tail.add_term(mask, c.clone());
                    }
                }
                tail
            })
            .collect();
        let linear_images: Vec<GrassmannPolynomial> = (0..dim)
            .map(|j| {
                let mut p = GrassmannPolynomial::zero(dim);
                for i in 0..dim {
                    p.add_term(1u32 << i, linv[j][i].clone());
                }
                p
            })
            .collect();
        let mut psi = linear_images.clone();
        loop {
            let mut next = Vec::with_capacity(dim);
            for j in 0..dim {
                let mut p = linear_images[j].clone();
                for i in 0..dim {
                    let correction = tails[i].substitute(&psi);
                    if correction.is_zero() {
                        continue;
                    }
                    p = &p - &correction.scale(&linv[j][i]);
                }
                next.push(p);
            }
            if next == psi {
                break;
            }
            psi = next;
        }
        OddSubstitution { domain: self.domain.clone(), images: psi }
    }

    /// Composition in application order: `(self.compose(&other)).apply(f)`
    /// equals `other.apply(self.apply(f))`.
    pub fn compose(&self, other: &OddSubstitution) -> OddSubstitution {
        assert_eq!(self.domain.dim(), other.domain.dim());
        let images = self.images.iter().map(|img| other.apply(img)).collect();
        OddSubstitution { domain: self.domain.clone(), images }
    }

    /// The field conjugated by the substitution, `Q' = S^{-1} Q S` where `S`
    /// is `apply`. This is the pushforward of `Q` along the coordinate
    /// change: it is again a derivation of the same parity, and it is
    /// homological exactly when `Q` is.
    pub fn conjugate_field(&self, q: &VectorField) -> Result<VectorField, QcharError> {
        self.domain.check_same(q.domain())?;
        let inv = self.inverse();
        let comps = (0..self.domain.dim())
            .map(|j| inv.apply(&q.apply(&self.images[j])))
            .collect();
        VectorField::new(self.domain.clone(), comps)
    }

    /// Jacobian of the substitution, `M[i][a] = d_i phi^a`. Every entry is
    /// even (an odd derivative of an odd image), so the entries commute with
    /// everything and index gymnastics below need no Koszul signs.
    fn jacobian_entries(&self) -> Vec<Vec<GrassmannPolynomial>> {
        let dim = self.domain.dim();
        (0..dim)
            .map(|i| (0..dim).map(|a| self.images[a].partial(i)).collect())
            .collect()
    }

    /// Inverse of the Jacobian over the Grassmann algebra. With `M = L + E`
    /// (constant part plus nilpotent higher part), the Neumann series
    /// `M^{-1} = sum_k (-L^{-1} E)^k L^{-1}` terminates because each factor
    /// of `E` raises polynomial degree by at least two.
    fn jacobian_inverse(&self) -> Vec<Vec<GrassmannPolynomial>> {
        let dim = self.domain.dim();
        let m = self.jacobian_entries();
        let linv_rows = self
            .linear_inverse()
            .expect("constructor guarantees an invertible linear part");
        // The Jacobian's constant part is P[i][a] = coefficient of c^i in
        // phi^a, while linear_inverse works with its transpose, so the
        // constant part of the inverse Jacobian is Linv read transposed.
        let linv: Vec<Vec<GrassmannPolynomial>> = (0..dim)
            .map(|a| {
                (0..dim)
                    .map(|j| GrassmannPolynomial::constant(dim, linv_rows[j][a].clone()))
                    .collect()
            })
            .collect();
        let minus_linv_e: Vec<Vec<GrassmannPolynomial>> = (0..dim)
            .map(|a| {
                (0..dim)
                    .map(|j| {
                        let mut s = GrassmannPolynomial::zero(dim);
                        for k in 0..dim {
                            // Nonconstant tail of the Jacobian entry.
                            let mut e = GrassmannPolynomial::zero(dim);
                            for (mask, c) in m[k][j].terms() {
                                if mask != 0 {
                                    e.add_term(mask, c.clone());
                                }
                            }
                            s = &s - &(&linv[a][k] * &e);
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        let mut n = linv.clone();
        let mut power = linv;
        loop {
            // power <- minus_linv_e * power
            let next: Vec<Vec<GrassmannPolynomial>> = (0..dim)
                .map(|a| {
                    (0..dim)
                        .map(|j| {
                            let mut s = GrassmannPolynomial::zero(dim);
                            for k in 0..dim {
                                s = &s + &(&minus_linv_e[a][k] * &power[k][j]);
                            }
                            s
                        })
                        .collect()
                })
                .collect();
            if next.iter().all(|row| row.iter().all(|p| p.is_zero())) {
                break;
            }
            for a in 0..dim {
                for j in 0..dim {
                    n[a][j] = &n[a][j] + &next[a][j];
                }
            }
            power = next;
        }
        n
    }

    /// Transports a tensor computed in the target coordinates back to the
    /// source coordinates: coefficients are substituted, each lower slot is
    /// contracted with the Jacobian `M[i][a] = d_i phi^a`, and an upper slot
    /// with its inverse. Because all Jacobian entries are even this needs no
    /// signs, and the transport intertwines the Lie derivatives along a
    /// field and its conjugate.
    pub fn transport(&self, t: &TensorField) -> Result<TensorField, QcharError> {
        self.domain.check_same(t.domain())?;
        if t.n_upper() > 1 {
            return Err(QcharError::InvalidInput(format!(
                "transport supports at most one upper index, got {}",
                t.n_upper()
            )));
        }
        let dim = self.domain.dim() as u8;
        let n = t.n_lower();
        let m_mat = self.jacobian_entries();
        // Substitute the coefficients first.
        let mut cur = TensorField::zero(self.domain.clone(), n, t.n_upper());
        for ((lower, upper), f) in t.iter() {
            cur.add_to(lower.clone(), upper.clone(), self.apply(f));
        }
        // Contract the upper slot with the inverse Jacobian.
        if t.n_upper() == 1 {
            let n_mat = self.jacobian_inverse();
            let mut next = TensorField::zero(self.domain.clone(), n, 1);
            for ((lower, upper), f) in cur.iter() {
                let b = upper[0] as usize;
                for j in 0..dim {
                    let entry = &n_mat[b][j as usize];
                    if entry.is_zero() {
                        continue;
                    }
                    next.add_to(lower.clone(), vec![j], f * entry);
                }
            }
            cur = next;
        }
        // Contract each lower slot with the Jacobian.
        for slot in 0..n {
            let mut next = TensorField::zero(self.domain.clone(), n, t.n_upper());
            for ((lower, upper), f) in cur.iter() {
                let a = lower[slot] as usize;
                for i in 0..dim {
                    let entry = &m_mat[i as usize][a];
                    if entry.is_zero() {
                        continue;
                    }
                    let mut key = lower.clone();
                    key[slot] = i;
                    next.add_to(key, upper.clone(), f * entry);
                }
            }
            cur = next;
        }
        Ok(cur)
    }
}
