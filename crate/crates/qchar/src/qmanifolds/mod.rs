//! Finite-dimensional Q-manifolds built from Lie (super)algebra structure
//! constants: the induced odd vector field on the shifted algebra, the
//! characteristic cocycles of the three tensor series, exactness decisions
//! by finite linear algebra, and the jet-level consistency identities.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::QcharError;
use crate::rational::{parse_rat, Rat};
use crate::superalg::{is_homological, GrassmannPolynomial, OddDomain, VectorField};

mod classes;
mod jets;

pub use classes::{
    adjoint_class_a, adjoint_class_b, adjoint_class_c, class_a, class_b, class_c, is_exact,
    modular_class, ClassReport, Series,
};
pub use jets::{gauss_chain_check, jet_components, jet_expansion};

/// A Lie superalgebra presented by structure constants over Q:
/// `[t_a, t_b] = f_ab^d t_d` with `f` graded-antisymmetric and satisfying
/// the graded Jacobi identity. Both are validated on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieSuperAlgebraSpec {
    names: Vec<String>,
    parities: Vec<u8>,
    /// f[a][b][d] is the coefficient of basis element `d` in `[t_a, t_b]`.
    f: Vec<Vec<Vec<Rat>>>,
}

impl LieSuperAlgebraSpec {
    /// Builds and validates a spec from an explicit bracket list. Brackets
    /// may be given in one orientation only; the other is filled in by
    /// graded antisymmetry. When both orientations are present they must
    /// agree with the graded antisymmetry rule.
    pub fn from_parts(
        names: Vec<String>,
        parities: Vec<u8>,
        brackets: Vec<(usize, usize, usize, Rat)>,
    ) -> Result<Self, QcharError> {
        let dim = names.len();
        if dim == 0 {
            return Err(QcharError::InvalidInput("algebra needs at least one basis element".into()));
        }
        if parities.len() != dim {
            return Err(QcharError::InvalidInput("one parity per basis element required".into()));
        }
        if parities.iter().any(|p| *p > 1) {
            return Err(QcharError::InvalidInput("parities must be 0 or 1".into()));
        }
        {
            let mut seen = std::collections::BTreeSet::new();
            for n in &names {
                if !seen.insert(n.clone()) {
                    return Err(QcharError::InvalidInput(format!("duplicate basis name {n}")));
                }
            }
        }
        let mut f = vec![vec![vec![Rat::from_integer(0.into()); dim]; dim]; dim];
        let mut given = vec![vec![false; dim]; dim];
        for (a, b, d, c) in brackets {
            if a >= dim || b >= dim || d >= dim {
                return Err(QcharError::InvalidInput("bracket index out of range".into()));
            }
            given[a][b] = true;
            f[a][b][d] = &f[a][b][d] + &c;
        }
        // Parity consistency of every declared coefficient.
        for a in 0..dim {
            for b in 0..dim {
                for d in 0..dim {
                    if f[a][b][d] != Rat::from_integer(0.into())
                        && parities[d] != (parities[a] + parities[b]) % 2
                    {
                        return Err(QcharError::InvalidInput(format!(
                            "parity mismatch: [{}, {}] cannot contain {}",
                            names[a], names[b], names[d]
                        )));
                    }
                }
            }
        }
        // Graded antisymmetry: close missing orientations, check given ones.
        for a in 0..dim {
            for b in a..dim {
                let sign: i64 = if parities[a] & parities[b] == 1 { 1 } else { -1 };
                let flip = |v: &Rat| v * &Rat::from_integer(sign.into());
                if given[a][b] && given[b][a] {
                    for d in 0..dim {
                        if f[b][a][d] != flip(&f[a][b][d]) {
                            return Err(QcharError::InvalidInput(format!(
                                "antisymmetry violated between [{}, {}] and [{}, {}]",
                                names[a], names[b], names[b], names[a]
                            )));
                        }
                    }
                } else if given[a][b] {
                    for d in 0..dim {
                        f[b][a][d] = flip(&f[a][b][d]);
                    }
                } else if given[b][a] {
                    for d in 0..dim {
                        f[a][b][d] = flip(&f[b][a][d]);
                    }
                }
                if a == b && parities[a] == 0 {
                    // [t, t] = 0 for even t is forced by antisymmetry.
                    for d in 0..dim {
                        if !num_traits::Zero::is_zero(&f[a][a][d]) {
                            return Err(QcharError::InvalidInput(format!(
                                "antisymmetry forces [{}, {}] = 0",
                                names[a], names[a]
                            )));
                        }
                    }
                }
            }
        }
        let spec = Self { names, parities, f };
        spec.check_jacobi()?;
        Ok(spec)
    }

    fn check_jacobi(&self) -> Result<(), QcharError> {
        let dim = self.dim();
        let sgn = |x: u8, y: u8| -> i64 {
            if x & y & 1 == 1 {
                -1
            } else {
                1
            }
        };
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    for d in 0..dim {
                        let mut acc = Rat::from_integer(0.into());
                        for m in 0..dim {
                            let t1 = &self.f[a][b][m] * &self.f[m][c][d];
                            let t2 = &self.f[b][c][m] * &self.f[m][a][d];
                            let t3 = &self.f[c][a][m] * &self.f[m][b][d];
                            acc += t1 * Rat::from_integer(sgn(self.parities[a], self.parities[c]).into());
                            acc += t2 * Rat::from_integer(sgn(self.parities[b], self.parities[a]).into());
                            acc += t3 * Rat::from_integer(sgn(self.parities[c], self.parities[b]).into());
                        }
                        if !num_traits::Zero::is_zero(&acc) {
                            return Err(QcharError::InvalidInput(format!(
                                "Jacobi identity fails on ({}, {}, {})",
                                self.names[a], self.names[b], self.names[c]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.parities[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn structure_constant(&self, a: usize, b: usize, d: usize) -> &Rat {
        &self.f[a][b][d]
    }

    /// Matrix of the adjoint action of `t_a`: entry `[d][k] = f_ak^d`, so
    /// that `ad_a(t_k) = sum_d f_ak^d t_d`.
    pub fn ad(&self, a: usize) -> Vec<Vec<Rat>> {
        let dim = self.dim();
        (0..dim)
            .map(|d| (0..dim).map(|k| self.f[a][k][d].clone()).collect())
            .collect()
    }

    fn ghost_name(basis_name: &str) -> String {
        if let Some(rest) = basis_name.strip_prefix('e') {
            if !rest.is_empty() {
                return format!("c{rest}");
            }
        }
        format!("c_{basis_name}")
    }

    /// The odd domain of ghost coordinates, one per basis element, named
    /// after the basis.
    pub fn ghost_domain(&self) -> OddDomain {
        OddDomain::with_names(
            (0..self.dim()).map(|i| Self::ghost_name(self.name(i))).collect(),
        )
    }
}

#[derive(Deserialize)]
struct AlgebraFile {
    basis: Vec<BasisEntry>,
    #[serde(default)]
    brackets: Vec<BracketEntry>,
}

#[derive(Deserialize)]
struct BasisEntry {
    name: String,
    #[serde(default)]
    parity: u8,
}

#[derive(Deserialize)]
struct BracketEntry {
    a: String,
    b: String,
    out: BTreeMap<String, String>,
}

/// Parses an algebra description in the JSON input format: a basis list with
/// parities and a bracket list with rational coefficients given as strings.
pub fn parse_algebra(text: &str) -> Result<LieSuperAlgebraSpec, QcharError> {
    let file: AlgebraFile = serde_json::from_str(text)
        .map_err(|e| QcharError::InvalidInput(format!("algebra file: {e}")))?;
    let names: Vec<String> = file.basis.iter().map(|b| b.name.clone()).collect();
    let parities: Vec<u8> = file.basis.iter().map(|b| b.parity).collect();
    let index = |name: &str| -> Result<usize, QcharError> {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| QcharError::InvalidInput(format!("unknown basis element {name}")))
    };
    let mut brackets = Vec::new();
    for br in &file.brackets {
        let a = index(&br.a)?;
        let b = index(&br.b)?;
        for (out_name, coeff) in &br.out {
            let d = index(out_name)?;
            brackets.push((a, b, d, parse_rat(coeff)?));
        }
    }
    LieSuperAlgebraSpec::from_parts(names, parities, brackets)
}

/// The built-in algebras addressable by name: `sl2` (Weyl basis), `borel2`,
/// `heisenberg3`, and `abelian:<n>`.
pub fn builtin_algebra(name: &str) -> Result<LieSuperAlgebraSpec, QcharError> {
    let int = |v: i64| Rat::from_integer(v.into());
    match name {
        "sl2" => LieSuperAlgebraSpec::from_parts(
            vec!["e-1".into(), "e0".into(), "e1".into()],
            vec![0, 0, 0],
            vec![
                // [e-1, e1] = 2 e0, [e0, e1] = e1, [e0, e-1] = -e-1.
                (0, 2, 1, int(2)),
                (1, 2, 2, int(1)),
                (1, 0, 0, int(-1)),
            ],
        ),
        "borel2" => LieSuperAlgebraSpec::from_parts(
            vec!["e0".into(), "e1".into()],
            vec![0, 0],
            vec![(0, 1, 1, int(1))],
        ),
        "heisenberg3" => LieSuperAlgebraSpec::from_parts(
            vec!["x".into(), "y".into(), "z".into()],
            vec![0, 0, 0],
            vec![(0, 1, 2, int(1))],
        ),
        _ => {
            if let Some(n) = name.strip_prefix("abelian:") {
                let n: usize = n
                    .parse()
                    .map_err(|_| QcharError::InvalidInput(format!("bad abelian size {n}")))?;
                if n == 0 || n > 8 {
                    return Err(QcharError::InvalidInput(
                        "abelian size must be between 1 and 8".into(),
                    ));
                }
                LieSuperAlgebraSpec::from_parts(
                    (1..=n).map(|i| format!("e{i}")).collect(),
                    vec![0; n],
                    vec![],
                )
            } else {
                Err(QcharError::InvalidInput(format!(
                    "unknown built-in algebra {name}; available: sl2, borel2, heisenberg3, abelian:<n>"
                )))
            }
        }
    }
}

/// An odd domain with a homological vector field on it. The field is either
/// the Chevalley-Eilenberg differential of an algebra spec or any
/// user-supplied polynomial field squaring to zero.
#[derive(Debug, Clone)]
pub struct CEQManifold {
    domain: OddDomain,
    q: VectorField,
    spec: Option<LieSuperAlgebraSpec>,
}

impl CEQManifold {
    /// Wraps a homological field as a Q-manifold.
    pub fn from_field(q: VectorField) -> Result<Self, QcharError> {
        if !is_homological(&q) {
            return Err(QcharError::InvalidInput(
                "field does not square to zero, so it defines no Q-manifold".into(),
            ));
        }
        Ok(Self { domain: q.domain().clone(), q, spec: None })
    }

    pub fn domain(&self) -> &OddDomain {
        &self.domain
    }

    pub fn q(&self) -> &VectorField {
        &self.q
    }

    pub fn spec(&self) -> Option<&LieSuperAlgebraSpec> {
        self.spec.as_ref()
    }
}

/// The Chevalley-Eilenberg field of an algebra spec: one odd ghost per even
/// basis element and `Q^d = 1/2 c^b c^a f_ab^d`. Odd basis elements would
/// need even ghosts, which the purely odd engine does not support; they are
/// rejected with a diagnostic naming the offending element.
pub fn ce_field(spec: &LieSuperAlgebraSpec) -> Result<CEQManifold, QcharError> {
    let dim = spec.dim();
    for i in 0..dim {
        if spec.parity(i) == 1 {
            return Err(QcharError::InvalidInput(format!(
                "basis element {} is odd: its ghost coordinate would be even, \
                 and this engine only works over purely odd domains",
                spec.name(i)
            )));
        }
    }
    let domain = spec.ghost_domain();
    let half = Rat::new(1.into(), 2.into());
    let mut comps = vec![GrassmannPolynomial::zero(dim); dim];
    for a in 0..dim {
        for b in 0..dim {
            if a == b {
                continue;
            }
            for d in 0..dim {
                let coeff = &half * spec.structure_constant(a, b, d);
                if num_traits::Zero::is_zero(&coeff) {
                    continue;
                }
                // The summand is (coeff) c^b c^a; store against the sorted
                // monomial with the reordering sign.
                let signed = if b < a { coeff } else { -coeff };
                let mask = (1u32 << a) | (1u32 << b);
                comps[d].add_term(mask, signed);
            }
        }
    }
    let q = VectorField::new(domain.clone(), comps)?;
    debug_assert!(is_homological(&q), "Jacobi was validated, so Q must square to zero");
    Ok(CEQManifold { domain, q, spec: Some(spec.clone()) })
}

/// Outcome of a batch of named exact checks.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub checks: Vec<(String, bool)>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}
