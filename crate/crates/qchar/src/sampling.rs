//! Seeded random generators for the exact objects used across the crate.
//!
//! Everything here is driven by an explicit seed through a counter-based
//! stream cipher, so a run is reproducible from its seed alone: the same
//! seed yields the same polynomials, fields and substitutions on every
//! platform. Coefficients are kept small so that exact arithmetic stays
//! fast even after a few rounds of multiplication.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{int, Rat};
use crate::superalg::{
    is_homological, GrassmannPolynomial, OddDomain, OddSubstitution, TensorField, VectorField,
};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// A small integer coefficient, possibly zero.
    pub fn coefficient(&mut self) -> Rat {
        int(self.int_in(-4, 4))
    }

    /// A small integer coefficient, never zero.
    pub fn nonzero_coefficient(&mut self) -> Rat {
        let mag = self.int_in(1, 4);
        let sign = if self.rng.gen_bool(0.5) { 1 } else { -1 };
        int(sign * mag)
    }

    pub fn coefficients(&mut self, n: usize) -> Vec<Rat> {
        (0..n).map(|_| self.coefficient()).collect()
    }

    /// A random polynomial of homogeneous parity. Monomials of the requested
    /// parity and degree at least `min_degree` each appear with probability
    /// one half.
    pub fn polynomial(&mut self, dim: usize, parity: u8, min_degree: u32) -> GrassmannPolynomial {
        let mut p = GrassmannPolynomial::zero(dim);
        for mask in 0..(1u32 << dim) {
            let deg = mask.count_ones();
            if deg % 2 != parity as u32 || deg < min_degree {
                continue;
            }
            if self.rng.gen_bool(0.5) {
                p.add_term(mask, self.nonzero_coefficient());
            }
        }
        p
    }

    /// A sparse random tensor whose components all have the given parity.
    pub fn tensor(
        &mut self,
        domain: &OddDomain,
        n_lower: usize,
        n_upper: usize,
        parity: u8,
    ) -> TensorField {
        let dim = domain.dim() as u8;
        let mut t = TensorField::zero(domain.clone(), n_lower, n_upper);
        let mut keys = vec![(vec![], vec![])];
        for _ in 0..n_lower {
            keys = keys
                .into_iter()
                .flat_map(|(l, u): (Vec<u8>, Vec<u8>)| {
                    (0..dim).map(move |i| {
                        let mut l2 = l.clone();
                        l2.push(i);
                        (l2, u.clone())
                    })
                })
                .collect();
        }
        for _ in 0..n_upper {
            keys = keys
                .into_iter()
                .flat_map(|(l, u): (Vec<u8>, Vec<u8>)| {
                    (0..dim).map(move |j| {
                        let mut u2 = u.clone();
                        u2.push(j);
                        (l.clone(), u2)
                    })
                })
                .collect();
        }
        for (l, u) in keys {
            if self.rng.gen_bool(0.3) {
                let p = self.polynomial(domain.dim(), parity, 0);
                t.add_to(l, u, p);
            }
        }
        t
    }

    /// A random invertible change of odd coordinates: an invertible integer
    /// linear part plus, when the dimension allows it, sparse cubic terms.
    pub fn substitution(&mut self, domain: &OddDomain) -> OddSubstitution {
        let dim = domain.dim();
        for _ in 0..200 {
            let mut images = Vec::with_capacity(dim);
            for _ in 0..dim {
                let mut img = GrassmannPolynomial::zero(dim);
                for j in 0..dim {
                    let c = self.int_in(-2, 2);
                    if c != 0 {
                        img.add_term(1u32 << j, int(c));
                    }
                }
                for mask in 0..(1u32 << dim) {
                    if mask.count_ones() == 3 && self.rng.gen_bool(0.25) {
                        img.add_term(mask, int(self.int_in(-2, 2)));
                    }
                }
                images.push(img);
            }
            if let Ok(s) = OddSubstitution::new(domain.clone(), images) {
                return s;
            }
        }
        panic!("failed to sample an invertible substitution in 200 attempts");
    }

    /// A random homological field on `q` odd coordinates. A block-diagonal
    /// seed field (nilpotent two-coordinate blocks and constant
    /// translation blocks, both of which square to zero) is scaled and then
    /// conjugated by a random coordinate change, which preserves squaring
    /// to zero while producing dense higher-degree components.
    pub fn homological_field(&mut self, q: usize) -> VectorField {
        let domain = OddDomain::new(q);
        let mut comps = vec![GrassmannPolynomial::zero(q); q];
        let mut i = 0;
        while i < q {
            if i + 1 < q && self.rng.gen_bool(0.6) {
                // Q = -c_i c_{i+1} d_{i+1} on the block, the nonabelian
                // two-dimensional piece.
                comps[i + 1] = GrassmannPolynomial::monomial(q, &[i, i + 1], int(-1));
                i += 2;
            } else {
                if self.rng.gen_bool(0.5) {
                    // Constant translation component; squares to zero on
                    // its own and has no overlap with the other blocks.
                    comps[i] = GrassmannPolynomial::constant(q, self.nonzero_coefficient());
                }
                i += 1;
            }
        }
        let scale = self.nonzero_coefficient();
        let base = VectorField::new(
            domain.clone(),
            comps.into_iter().map(|c| c.scale(&scale)).collect(),
        )
        .expect("block seed field is well formed");
        debug_assert!(is_homological(&base));
        let s = self.substitution(&domain);
        s.conjugate_field(&base).expect("conjugation stays on the same domain")
    }
}
