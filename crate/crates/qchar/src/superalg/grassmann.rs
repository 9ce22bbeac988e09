use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::OddDomain;
use crate::rational::Rat;

/// A polynomial in anticommuting generators with exact rational
/// coefficients. Monomials are stored as bitmasks over the generator set,
/// always read in increasing generator order; zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrassmannPolynomial {
    dim: usize,
    terms: BTreeMap<u32, Rat>,
}

/// Sign of sorting the concatenation of two disjoint increasing monomials
/// into one increasing monomial: each generator of `b` crosses every higher
/// generator of `a`.
fn merge_sign(a: u32, b: u32) -> i8 {
    let mut crossings = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        crossings += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if crossings % 2 == 0 {
        1
    } else {
        -1
    }
}

impl GrassmannPolynomial {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= 30, "odd domains beyond 30 generators are out of scope");
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rat::from_integer(1.into()))
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(0, c);
        p
    }

    /// The generator with index `i` (zero-based).
    pub fn generator(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut p = Self::zero(dim);
        p.add_term(1 << i, Rat::from_integer(1.into()));
        p
    }

    /// `c * g_{i1} g_{i2} ...` for strictly increasing indices.
    pub fn monomial(dim: usize, indices: &[usize], c: Rat) -> Self {
        let mut mask = 0u32;
        for w in indices.windows(2) {
            assert!(w[0] < w[1], "monomial indices must be strictly increasing");
        }
        for &i in indices {
            assert!(i < dim);
            mask |= 1 << i;
        }
        let mut p = Self::zero(dim);
        p.add_term(mask, c);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rat)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn coeff(&self, mask: u32) -> Rat {
        self.terms.get(&mask).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, mask: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        let terms = self.terms.iter().map(|(&m, v)| (m, v * c)).collect();
        Self { dim: self.dim, terms }
    }

    /// Parity of a homogeneous polynomial; `None` when parities mix.
    pub fn parity(&self) -> Option<u8> {
        let mut parity = None;
        for &m in self.terms.keys() {
            let p = (m.count_ones() % 2) as u8;
            match parity {
                None => parity = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        parity.or(Some(0))
    }

    /// The image under the parity involution: odd part negated. Useful for
    /// Koszul bookkeeping of inhomogeneous coefficients.
    pub fn parity_involution(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&m, c)| (m, if m.count_ones() % 2 == 1 { -c.clone() } else { c.clone() }))
            .collect();
        Self { dim: self.dim, terms }
    }

    pub fn even_part(&self) -> Self {
        self.filter_parity(0)
    }

    pub fn odd_part(&self) -> Self {
        self.filter_parity(1)
    }

    fn filter_parity(&self, p: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(&m, _)| m.count_ones() % 2 == p)
            .map(|(&m, c)| (m, c.clone()))
            .collect();
        Self { dim: self.dim, terms }
    }

    /// Polynomial degree slice: monomials with exactly `d` generators.
    pub fn degree_part(&self, d: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(&m, _)| m.count_ones() == d)
            .map(|(&m, c)| (m, c.clone()))
            .collect();
        Self { dim: self.dim, terms }
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    /// Left partial derivative with respect to generator `i`.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.dim);
        let bit = 1u32 << i;
        let mut out = Self::zero(self.dim);
        for (&m, c) in &self.terms {
            if m & bit == 0 {
                continue;
            }
            let below = (m & (bit - 1)).count_ones();
            let sign = if below % 2 == 0 { c.clone() } else { -c.clone() };
            out.add_term(m & !bit, sign);
        }
        out
    }

    /// Algebra homomorphism sending generator `i` to `images[i]`. Images
    /// must be odd for the map to respect parity; callers enforce that.
    pub fn substitute(&self, images: &[GrassmannPolynomial]) -> Self {
        assert_eq!(images.len(), self.dim);
        let target_dim = images.first().map_or(self.dim, |p| p.dim);
        let mut out = Self::zero(target_dim);
        for (&m, c) in &self.terms {
            let mut acc = Self::constant(target_dim, c.clone());
            let mut rest = m;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                acc = &acc * &images[i];
                if acc.is_zero() {
                    break;
                }
                rest &= rest - 1;
            }
            out = &out + &acc;
        }
        out
    }

    pub fn render(&self, domain: &OddDomain) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (&m, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = crate::rational::signed_parts(c);
            if idx == 0 {
                if sign == "-" {
                    out.push_str("-");
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            out.push_str(&mag);
            let mut rest = m;
            let mut first = true;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                out.push(if first { ' ' } else { '.' });
                out.push_str(domain.name(i));
                first = false;
                rest &= rest - 1;
            }
        }
        out
    }
}

impl Add for &GrassmannPolynomial {
    type Output = GrassmannPolynomial;
    fn add(self, rhs: &GrassmannPolynomial) -> GrassmannPolynomial {
        assert_eq!(self.dim, rhs.dim, "mixed Grassmann dimensions");
        let mut out = self.clone();
        for (&m, c) in &rhs.terms {
            out.add_term(m, c.clone());
        }
        out
    }
}

impl Sub for &GrassmannPolynomial {
    type Output = GrassmannPolynomial;
    fn sub(self, rhs: &GrassmannPolynomial) -> GrassmannPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &GrassmannPolynomial {
    type Output = GrassmannPolynomial;
    fn neg(self) -> GrassmannPolynomial {
        let terms = self.terms.iter().map(|(&m, c)| (m, -c.clone())).collect();
        GrassmannPolynomial { dim: self.dim, terms }
    }
}

impl Mul for &GrassmannPolynomial {
    type Output = GrassmannPolynomial;
    fn mul(self, rhs: &GrassmannPolynomial) -> GrassmannPolynomial {
        assert_eq!(self.dim, rhs.dim, "mixed Grassmann dimensions");
        let mut out = GrassmannPolynomial::zero(self.dim);
        for (&ma, ca) in &self.terms {
            for (&mb, cb) in &rhs.terms {
                if ma & mb != 0 {
                    continue; // repeated generator
                }
                let sign = merge_sign(ma, mb);
                let c = if sign > 0 { ca * cb } else { -(ca * cb) };
                out.add_term(ma | mb, c);
            }
        }
        out
    }
}
