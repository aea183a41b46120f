//! Unvalidated presentation data, as produced by a parser or built in code.
//!
//! Names are plain strings here. Validation into [`FiniteCategory`],
//! [`TangentDiagram`] and [`DiagramMorphism`] resolves them and checks every
//! structural law.
//!
//! [`FiniteCategory`]: crate::FiniteCategory
//! [`TangentDiagram`]: crate::TangentDiagram
//! [`DiagramMorphism`]: crate::DiagramMorphism

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::Rational;

/// Prefix of the reserved identity morphism names, `id:<object>`.
pub const IDENTITY_PREFIX: &str = "id:";

/// Letters, digits, underscore and hyphen; at least one character.
pub fn is_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

pub fn identity_name(object: &str) -> String {
    let mut s = String::with_capacity(IDENTITY_PREFIX.len() + object.len());
    s.push_str(IDENTITY_PREFIX);
    s.push_str(object);
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawObject {
    pub name: String,
    pub dim: usize,
    pub separated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawMorphism {
    pub name: String,
    pub src: String,
    pub dst: String,
    /// Jacobian rows as written; `[]` stands for any matrix with no entries.
    pub jac: Vec<Vec<Rational>>,
}

/// A composition table entry `outer ∘ inner = result`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawComposite {
    pub outer: String,
    pub inner: String,
    pub result: String,
}

/// One space presentation: objects with dimensions, morphisms with
/// Jacobians, and the composition table of non-identity pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawPresentation {
    pub name: String,
    pub objects: Vec<RawObject>,
    pub morphisms: Vec<RawMorphism>,
    pub composites: Vec<RawComposite>,
}

impl RawPresentation {
    pub fn new(name: impl Into<String>) -> Self {
        RawPresentation { name: name.into(), ..Default::default() }
    }

    pub fn object(mut self, name: &str, dim: usize) -> Self {
        self.objects.push(RawObject { name: name.to_string(), dim, separated: false });
        self
    }

    pub fn separated_object(mut self, name: &str, dim: usize) -> Self {
        self.objects.push(RawObject { name: name.to_string(), dim, separated: true });
        self
    }

    pub fn morphism(mut self, name: &str, src: &str, dst: &str, jac: Vec<Vec<Rational>>) -> Self {
        self.morphisms.push(RawMorphism { name: name.to_string(), src: src.to_string(), dst: dst.to_string(), jac });
        self
    }

    /// Adds a morphism whose Jacobian has small integer entries.
    pub fn morphism_int(self, name: &str, src: &str, dst: &str, jac: &[&[i64]]) -> Self {
        let rows = jac.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
        self.morphism(name, src, dst, rows)
    }

    /// Records `outer ∘ inner = result`.
    pub fn compose(mut self, outer: &str, inner: &str, result: &str) -> Self {
        self.composites.push(RawComposite {
            outer: outer.to_string(),
            inner: inner.to_string(),
            result: result.to_string(),
        });
        self
    }
}

/// Unvalidated functor between two named spaces. Identities are mapped
/// implicitly and may not appear as sources in `morphism_map`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawFunctor {
    pub name: String,
    pub src: String,
    pub dst: String,
    pub object_map: Vec<(String, String)>,
    pub morphism_map: Vec<(String, String)>,
}

impl RawFunctor {
    pub fn new(name: impl Into<String>, src: impl Into<String>, dst: impl Into<String>) -> Self {
        RawFunctor { name: name.into(), src: src.into(), dst: dst.into(), ..Default::default() }
    }

    pub fn map_object(mut self, from: &str, to: &str) -> Self {
        self.object_map.push((from.to_string(), to.to_string()));
        self
    }

    pub fn map_morphism(mut self, from: &str, to: &str) -> Self {
        self.morphism_map.push((from.to_string(), to.to_string()));
        self
    }
}
