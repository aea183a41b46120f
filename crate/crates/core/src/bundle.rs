//! Exactness of `T(F) → T(E) → T(B) → 0` on finite bundle presentations.
//!
//! The bundle hypothesis itself cannot be checked on finite data. The
//! verifier checks the conclusions on the computed spaces; a violation means
//! the presentation is not a faithful model of a bundle.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::colimit::{induced_map, tangent_space, ColimitError};
use crate::diagram::{DiagramMorphism, FunctorError, TangentDiagram};
use crate::linalg;
use crate::matrix::RationalMatrix;
use crate::presentation::RawFunctor;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BundleError {
    #[error("functor `{name}`: {source}")]
    Functor { name: String, source: FunctorError },
    #[error(transparent)]
    Colimit(#[from] ColimitError),
    #[error("π∘ι induces the nonzero map {0}; the fiber inclusion must compose to a constant")]
    FunctorMismatch(RationalMatrix),
    #[error("exactness checks disagree with rank(ι) + rank(π) = dim T(E)")]
    Inconsistent,
}

/// Fiber, total space and base, with the fiber inclusion and projection.
#[derive(Clone, Debug)]
pub struct BundlePresentation {
    pub fiber: TangentDiagram,
    pub total: TangentDiagram,
    pub base: TangentDiagram,
    pub iota: DiagramMorphism,
    pub pi: DiagramMorphism,
}

impl BundlePresentation {
    /// Validates both functors against the three diagrams.
    pub fn new(
        fiber: TangentDiagram,
        total: TangentDiagram,
        base: TangentDiagram,
        iota: &RawFunctor,
        pi: &RawFunctor,
    ) -> Result<Self, BundleError> {
        let iota = DiagramMorphism::validate(iota, &fiber, &total)
            .map_err(|source| BundleError::Functor { name: iota.name.clone(), source })?;
        let pi = DiagramMorphism::validate(pi, &total, &base)
            .map_err(|source| BundleError::Functor { name: pi.name.clone(), source })?;
        Ok(BundlePresentation { fiber, total, base, iota, pi })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    Bundle,
    GroupQuotient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// A base vector outside the image of π.
    PiNotSurjective,
    /// A kernel vector of π outside the image of ι.
    KernelNotImage,
    /// A nonzero kernel vector of ι although both spaces are filtered.
    IotaNotInjective,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    ExactThreeTerm,
    ExactFourTerm,
    Violation { kind: ViolationKind, witness: Vec<Rational> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub kind: SequenceKind,
    /// `(dim T(F), dim T(E), dim T(B))`.
    pub dims: (usize, usize, usize),
    pub pi_surjective: bool,
    pub image_iota_equals_kernel_pi: bool,
    pub iota_injective: bool,
    /// `(filtered E, filtered B)`.
    pub filtered: (bool, bool),
    pub verdict: Verdict,
    pub iota_map: RationalMatrix,
    pub pi_map: RationalMatrix,
}

/// Computes the three tangent spaces and the induced maps and decides
/// exactness at each spot.
///
/// The four-term verdict is reserved for presentations whose total space
/// and base are both filtered; injectivity of `ι_*` is reported factually
/// otherwise and never counts as a violation there.
pub fn verify_bundle(p: &BundlePresentation) -> Result<ExactnessReport, BundleError> {
    let (tf, te, tb) = (tangent_space(&p.fiber), tangent_space(&p.total), tangent_space(&p.base));
    let iota_map = induced_map(&p.iota, &tf, &te)?;
    let pi_map = induced_map(&p.pi, &te, &tb)?;
    let composite = pi_map.mul(&iota_map);
    if !composite.is_zero() {
        return Err(BundleError::FunctorMismatch(composite));
    }

    let dims = (tf.dimension(), te.dimension(), tb.dimension());
    let (rank_iota, rank_pi) = (iota_map.rank(), pi_map.rank());

    let pi_surjective = rank_pi == dims.2;
    let uncovered_base = (!pi_surjective).then(|| {
        (0..dims.2)
            .map(|k| unit(dims.2, k))
            .find(|e| !linalg::in_column_span(&pi_map, e))
            .expect("a proper image misses some basis vector")
    });

    // image ⊆ kernel holds since π∘ι = 0; check kernel ⊆ image directly.
    let image_in_kernel = (0..iota_map.cols()).all(|k| pi_map.apply(&iota_map.column(k)).iter().all(Zero::is_zero));
    let kernel_escape = linalg::null_space(&pi_map).into_iter().find(|v| !linalg::in_column_span(&iota_map, v));
    let image_iota_equals_kernel_pi = image_in_kernel && kernel_escape.is_none();
    if image_iota_equals_kernel_pi != (rank_iota + rank_pi == dims.1) {
        return Err(BundleError::Inconsistent);
    }

    let iota_kernel = linalg::null_space(&iota_map).into_iter().next();
    let iota_injective = rank_iota == dims.0;
    debug_assert_eq!(iota_injective, iota_kernel.is_none());

    let filtered = (p.total.category().is_filtered(), p.base.category().is_filtered());
    let verdict = if let Some(witness) = uncovered_base {
        Verdict::Violation { kind: ViolationKind::PiNotSurjective, witness }
    } else if let Some(witness) = kernel_escape {
        Verdict::Violation { kind: ViolationKind::KernelNotImage, witness }
    } else if filtered.0 && filtered.1 {
        match iota_kernel {
            None => Verdict::ExactFourTerm,
            Some(witness) => Verdict::Violation { kind: ViolationKind::IotaNotInjective, witness },
        }
    } else {
        Verdict::ExactThreeTerm
    };

    Ok(ExactnessReport {
        kind: SequenceKind::Bundle,
        dims,
        pi_surjective,
        image_iota_equals_kernel_pi,
        iota_injective,
        filtered,
        verdict,
        iota_map,
        pi_map,
    })
}

/// The sequence `T(H) → T(G) → T(G/H) → 0` of a group quotient, which is a
/// bundle with fiber `H`.
pub fn verify_group_quotient(
    group: TangentDiagram,
    subgroup: TangentDiagram,
    quotient: TangentDiagram,
    iota: &RawFunctor,
    pi: &RawFunctor,
) -> Result<ExactnessReport, BundleError> {
    let p = BundlePresentation::new(subgroup, group, quotient, iota, pi)?;
    let mut report = verify_bundle(&p)?;
    report.kind = SequenceKind::GroupQuotient;
    Ok(report)
}

fn unit(n: usize, k: usize) -> Vec<Rational> {
    let mut v = alloc::vec![Rational::zero(); n];
    v[k] = num_traits::One::one();
    v
}
