use super::{koszul_sign, GrassmannPolynomial, OddDomain};
use crate::error::QcharError;

/// A polynomial vector field `X = X^j d/dc^j` on a purely odd domain.
/// Components are stored with the coefficient to the left of the derivative,
/// and the field carries a definite parity: on an odd domain a field is odd
/// exactly when all its components are even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    domain: OddDomain,
    parity: u8,
    comps: Vec<GrassmannPolynomial>,
}

impl VectorField {
    pub fn new(domain: OddDomain, comps: Vec<GrassmannPolynomial>) -> Result<Self, QcharError> {
        if comps.len() != domain.dim() {
            return Err(QcharError::InvalidInput(format!(
                "vector field needs {} components, got {}",
                domain.dim(),
                comps.len()
            )));
        }
        let mut comp_parity: Option<u8> = None;
        for (j, c) in comps.iter().enumerate() {
            if c.dim() != domain.dim() {
                return Err(QcharError::DomainMismatch { left: domain.dim(), right: c.dim() });
            }
            if c.is_zero() {
                continue;
            }
            let p = c.parity().ok_or_else(|| {
                QcharError::InvalidInput(format!(
                    "component {j} mixes parities; fields must be homogeneous"
                ))
            })?;
            match comp_parity {
                None => comp_parity = Some(p),
                Some(q) if q != p => {
                    return Err(QcharError::InvalidInput(
                        "components of mixed parity; fields must be homogeneous".into(),
                    ))
                }
                _ => {}
            }
        }
        // All generators are odd, so the operator parity flips the component
        // parity. The zero field gets odd parity: it is the zero of the space
        // of homological fields, which is where this engine lives.
        let parity = (comp_parity.unwrap_or(0) + 1) % 2;
        Ok(Self { domain, parity, comps })
    }

    pub fn zero_odd(domain: OddDomain) -> Self {
        let comps = vec![GrassmannPolynomial::zero(domain.dim()); domain.dim()];
        Self { domain, parity: 1, comps }
    }

    pub fn domain(&self) -> &OddDomain {
        &self.domain
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn comp(&self, j: usize) -> &GrassmannPolynomial {
        &self.comps[j]
    }

    pub fn comps(&self) -> &[GrassmannPolynomial] {
        &self.comps
    }

    /// Applies the field to a function: `X(f) = sum_j X^j (d_j f)`.
    pub fn apply(&self, f: &GrassmannPolynomial) -> GrassmannPolynomial {
        let mut out = GrassmannPolynomial::zero(self.domain.dim());
        for (j, xj) in self.comps.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            out = &out + &(xj * &f.partial(j));
        }
        out
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| format!("({}) d/d{}", c.render(&self.domain), self.domain.name(j)))
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Graded commutator `[X, Y] = X Y - (-1)^{|X||Y|} Y X` as a vector field.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField, QcharError> {
    x.domain().check_same(y.domain())?;
    let dim = x.domain().dim();
    let sign = koszul_sign(x.parity(), y.parity());
    let mut comps = Vec::with_capacity(dim);
    for j in 0..dim {
        let first = x.apply(y.comp(j));
        let second = y.apply(x.comp(j));
        let second = if sign > 0 { second } else { -&second };
        comps.push(&first - &second);
    }
    VectorField::new(x.domain().clone(), comps)
}

/// A field is homological when it is odd and `[Q, Q] = 0`, which on an odd
/// domain reduces to `Q(Q^j) = 0` for every component.
pub fn is_homological(q: &VectorField) -> bool {
    if q.parity() != 1 {
        return false;
    }
    (0..q.domain().dim()).all(|j| q.apply(q.comp(j)).is_zero())
}
