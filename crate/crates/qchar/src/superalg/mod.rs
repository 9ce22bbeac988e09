//! Exterior (Grassmann) algebra over Q on a purely odd coordinate domain,
//! together with vector fields and covariant tensors on it.
//!
//! Everything here follows one sign discipline: coefficients act from the
//! left, partial derivatives are left derivatives, and moving odd objects
//! past each other costs the Koszul sign `(-1)^{e1*e2}`.

mod grassmann;
mod subst;
mod tensor;
mod vector;

pub use grassmann::GrassmannPolynomial;
pub use subst::OddSubstitution;
pub use tensor::{derivative_tensor, jacobian, lie_derivative, supertrace, TensorField};
pub use vector::{is_homological, lie_bracket, VectorField};

use crate::error::QcharError;

/// The Koszul sign picked up when two homogeneous objects of parities
/// `e1`, `e2` move past each other.
pub fn koszul_sign(e1: u8, e2: u8) -> i8 {
    if (e1 & e2 & 1) == 1 {
        -1
    } else {
        1
    }
}

/// A purely odd coordinate domain R^{0|q}. All generators square to zero
/// and anticommute; `names` only affect rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddDomain {
    dim: usize,
    names: Vec<String>,
}

impl OddDomain {
    pub fn new(dim: usize) -> Self {
        let names = (1..=dim).map(|i| format!("c{i}")).collect();
        Self { dim, names }
    }

    pub fn with_names(names: Vec<String>) -> Self {
        Self { dim: names.len(), names }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// The doubled domain used for jet expansions: generators of `self`
    /// followed by a second copy with `y`-prefixed names.
    pub fn doubled(&self) -> OddDomain {
        let mut names = self.names.clone();
        names.extend(self.names.iter().map(|n| format!("y[{n}]")));
        OddDomain::with_names(names)
    }

    pub fn check_same(&self, other: &OddDomain) -> Result<(), QcharError> {
        if self != other {
            return Err(QcharError::DomainMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}
