//! Finite categories enriched with plot-domain dimensions and germ
//! Jacobians, functors between them, and products.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::category::{CategoryError, FiniteCategory, MorphismId, ObjectId};
use crate::matrix::RationalMatrix;
use crate::presentation::{RawFunctor, RawObject, RawPresentation};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error("missing {kind} assignment for `{name}`")]
    MissingAssignment { kind: &'static str, name: String },
    #[error("Jacobian of `{morphism}` has the wrong shape (expected {rows}x{cols})")]
    ShapeMismatch { morphism: String, rows: usize, cols: usize },
    #[error("Jacobians are not functorial: jac({outer})·jac({inner}) = {product} but jac({result}) = {found}")]
    NonFunctorialJacobian {
        outer: String,
        inner: String,
        result: String,
        product: Box<RationalMatrix>,
        found: Box<RationalMatrix>,
    },
}

/// A finite surrogate of a germ category: every object carries the
/// dimension of its plot domain and every morphism the derivative at 0 of its
/// germ, with `jac(g∘f) = jac(g)·jac(f)` holding exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentDiagram {
    name: String,
    cat: FiniteCategory,
    dims: Vec<usize>,
    /// Indexed by morphism, identities included.
    jacs: Vec<RationalMatrix>,
    separated: Vec<ObjectId>,
    offsets: Vec<usize>,
}

impl TangentDiagram {
    /// Validates a full presentation.
    pub fn from_raw(raw: &RawPresentation) -> Result<Self, DiagramError> {
        let cat = FiniteCategory::from_raw(raw)?;
        let dims: BTreeMap<String, usize> = raw.objects.iter().map(|o| (o.name.clone(), o.dim)).collect();
        let jacs: BTreeMap<String, Vec<Vec<Rational>>> =
            raw.morphisms.iter().map(|m| (m.name.clone(), m.jac.clone())).collect();
        let mut d = Self::validate(raw.name.clone(), cat, &dims, &jacs)?;
        d.separated = raw
            .objects
            .iter()
            .filter(|o| o.separated)
            .map(|o| d.cat.object_by_name(&o.name).expect("validated"))
            .collect();
        Ok(d)
    }

    /// Attaches dimensions and Jacobians to a validated category, checking
    /// shapes, identity Jacobians and functoriality on the whole table.
    pub fn validate(
        name: String,
        cat: FiniteCategory,
        dims: &BTreeMap<String, usize>,
        jacs: &BTreeMap<String, Vec<Vec<Rational>>>,
    ) -> Result<Self, DiagramError> {
        let dims: Vec<usize> = cat
            .object_names()
            .map(|o| {
                dims.get(o)
                    .copied()
                    .ok_or_else(|| DiagramError::MissingAssignment { kind: "dimension", name: o.to_string() })
            })
            .collect::<Result<_, _>>()?;
        let mut matrices = Vec::with_capacity(cat.morphism_count());
        for m in cat.morphism_ids() {
            let (src, dst) = (dims[cat.src(m).index()], dims[cat.dst(m).index()]);
            if cat.is_identity(m) {
                matrices.push(RationalMatrix::identity(src));
                continue;
            }
            let name = cat.name_of(m);
            let literal = jacs
                .get(name)
                .ok_or_else(|| DiagramError::MissingAssignment { kind: "Jacobian", name: name.to_string() })?;
            let jac = RationalMatrix::from_rows(dst, src, literal).ok_or_else(|| DiagramError::ShapeMismatch {
                morphism: name.to_string(),
                rows: dst,
                cols: src,
            })?;
            matrices.push(jac);
        }
        for (g, f, h) in cat.composition_table() {
            let product = matrices[g.index()].mul(&matrices[f.index()]);
            if product != matrices[h.index()] {
                return Err(DiagramError::NonFunctorialJacobian {
                    outer: cat.name_of(g).to_string(),
                    inner: cat.name_of(f).to_string(),
                    result: cat.name_of(h).to_string(),
                    product: Box::new(product),
                    found: Box::new(matrices[h.index()].clone()),
                });
            }
        }
        let offsets = dims
            .iter()
            .scan(0, |acc, &d| {
                let start = *acc;
                *acc += d;
                Some(start)
            })
            .collect();
        Ok(TangentDiagram { name, cat, dims, jacs: matrices, separated: Vec::new(), offsets })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn category(&self) -> &FiniteCategory {
        &self.cat
    }

    pub fn dim(&self, o: ObjectId) -> usize {
        self.dims[o.index()]
    }

    pub fn jacobian(&self, m: MorphismId) -> &RationalMatrix {
        &self.jacs[m.index()]
    }

    /// Objects flagged as modeling injective plots.
    pub fn separated(&self) -> &[ObjectId] {
        &self.separated
    }

    /// Dimension of `F`, the direct sum of all plot-domain tangent spaces.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Offset of the summand of `o` inside `F`.
    pub fn offset(&self, o: ObjectId) -> usize {
        self.offsets[o.index()]
    }

    /// Canonical presentation of this diagram: declared morphisms in order,
    /// and the full table of non-identity composites.
    pub fn to_raw(&self) -> RawPresentation {
        let cat = &self.cat;
        let separated = |o: ObjectId| self.separated.contains(&o);
        let mut raw = RawPresentation::new(self.name.clone());
        raw.objects = cat
            .object_ids()
            .map(|o| RawObject { name: cat.object_name(o).to_string(), dim: self.dim(o), separated: separated(o) })
            .collect();
        for m in cat.declared_morphisms() {
            let jac = self.jacobian(m);
            let rows = if jac.rows() * jac.cols() == 0 { Vec::new() } else { jac.to_rows() };
            raw = raw.morphism(cat.name_of(m), cat.object_name(cat.src(m)), cat.object_name(cat.dst(m)), rows);
        }
        for (g, f, h) in cat.composition_table() {
            raw = raw.compose(cat.name_of(g), cat.name_of(f), cat.name_of(h));
        }
        raw
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FunctorError {
    #[error("functor `{functor}` expects {side} space `{expected}` but got `{found}`")]
    SpaceMismatch { functor: String, side: &'static str, expected: String, found: String },
    #[error("unknown {kind} `{name}` in functor")]
    Unknown { kind: &'static str, name: String },
    #[error("functor assigns `{0}` more than once")]
    DuplicateAssignment(String),
    #[error("functor maps identity `{0}`; identities are mapped implicitly")]
    IdentityAssignment(String),
    #[error("functor has no image for `{0}`")]
    MissingAssignment(String),
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("object `{object}` has dimension {from} but its image `{image}` has dimension {to}")]
    DimensionChanged { object: String, image: String, from: usize, to: usize },
    #[error("morphism `{morphism}` and its image `{image}` have different Jacobians")]
    JacobianChanged { morphism: String, image: String },
}

/// A dimension- and Jacobian-preserving functor between tangent diagrams,
/// modeling postcomposition of plots with a smooth map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramMorphism {
    name: String,
    source: String,
    target: String,
    object_map: Vec<ObjectId>,
    morphism_map: Vec<MorphismId>,
}

impl DiagramMorphism {
    pub fn validate(raw: &RawFunctor, src: &TangentDiagram, dst: &TangentDiagram) -> Result<Self, FunctorError> {
        for (side, expected, found) in [("source", &raw.src, src.name()), ("target", &raw.dst, dst.name())] {
            if expected != found {
                return Err(FunctorError::SpaceMismatch {
                    functor: raw.name.clone(),
                    side,
                    expected: expected.clone(),
                    found: found.to_string(),
                });
            }
        }
        let (a, b) = (src.category(), dst.category());
        let unknown = |kind, name: &str| FunctorError::Unknown { kind, name: name.to_string() };

        let mut object_map = vec![None; a.object_count()];
        for (from, to) in &raw.object_map {
            let o = a.object_by_name(from).ok_or_else(|| unknown("source object", from))?;
            let image = b.object_by_name(to).ok_or_else(|| unknown("target object", to))?;
            if object_map[o.index()].replace(image).is_some() {
                return Err(FunctorError::DuplicateAssignment(from.clone()));
            }
        }
        let object_map: Vec<ObjectId> = a
            .object_ids()
            .zip(object_map)
            .map(|(o, img)| img.ok_or_else(|| FunctorError::MissingAssignment(a.object_name(o).to_string())))
            .collect::<Result<_, _>>()?;

        let mut morphism_map: Vec<Option<MorphismId>> =
            a.morphism_ids().map(|m| a.is_identity(m).then(|| b.identity(object_map[a.src(m).index()]))).collect();
        for (from, to) in &raw.morphism_map {
            let m = a.morphism_by_name(from).ok_or_else(|| unknown("source morphism", from))?;
            if a.is_identity(m) {
                return Err(FunctorError::IdentityAssignment(from.clone()));
            }
            let image = b.morphism_by_name(to).ok_or_else(|| unknown("target morphism", to))?;
            if morphism_map[m.index()].replace(image).is_some() {
                return Err(FunctorError::DuplicateAssignment(from.clone()));
            }
        }
        let morphism_map: Vec<MorphismId> = a
            .morphism_ids()
            .zip(morphism_map)
            .map(|(m, img)| img.ok_or_else(|| FunctorError::MissingAssignment(a.name_of(m).to_string())))
            .collect::<Result<_, _>>()?;

        let functor = DiagramMorphism {
            name: raw.name.clone(),
            source: src.name().to_string(),
            target: dst.name().to_string(),
            object_map,
            morphism_map,
        };
        functor.check(src, dst)?;
        Ok(functor)
    }

    fn check(&self, src: &TangentDiagram, dst: &TangentDiagram) -> Result<(), FunctorError> {
        let (a, b) = (src.category(), dst.category());
        for o in a.object_ids() {
            let image = self.map_object(o);
            if src.dim(o) != dst.dim(image) {
                return Err(FunctorError::DimensionChanged {
                    object: a.object_name(o).to_string(),
                    image: b.object_name(image).to_string(),
                    from: src.dim(o),
                    to: dst.dim(image),
                });
            }
        }
        for m in a.morphism_ids() {
            let image = self.map_morphism(m);
            if b.src(image) != self.map_object(a.src(m)) || b.dst(image) != self.map_object(a.dst(m)) {
                return Err(FunctorError::NotAFunctor(format!(
                    "image `{}` of `{}` has the wrong endpoints",
                    b.name_of(image),
                    a.name_of(m)
                )));
            }
            if src.jacobian(m) != dst.jacobian(image) {
                return Err(FunctorError::JacobianChanged {
                    morphism: a.name_of(m).to_string(),
                    image: b.name_of(image).to_string(),
                });
            }
        }
        for (g, f, h) in a.composition_table() {
            let (fg, ff, fh) = (self.map_morphism(g), self.map_morphism(f), self.map_morphism(h));
            if b.compose(fg, ff) != Some(fh) {
                return Err(FunctorError::NotAFunctor(format!(
                    "composition `{} ∘ {} = {}` is not preserved",
                    a.name_of(g),
                    a.name_of(f),
                    a.name_of(h)
                )));
            }
        }
        Ok(())
    }

    pub fn identity(d: &TangentDiagram) -> Self {
        let cat = d.category();
        DiagramMorphism {
            name: format!("id-{}", d.name()),
            source: d.name().to_string(),
            target: d.name().to_string(),
            object_map: cat.object_ids().collect(),
            morphism_map: cat.morphism_ids().collect(),
        }
    }

    /// The composite `next ∘ self`.
    pub fn then(&self, next: &DiagramMorphism) -> Result<Self, FunctorError> {
        if self.target != next.source {
            return Err(FunctorError::SpaceMismatch {
                functor: next.name.clone(),
                side: "source",
                expected: next.source.clone(),
                found: self.target.clone(),
            });
        }
        Ok(DiagramMorphism {
            name: format!("{}-then-{}", self.name, next.name),
            source: self.source.clone(),
            target: next.target.clone(),
            object_map: self.object_map.iter().map(|&o| next.map_object(o)).collect(),
            morphism_map: self.morphism_map.iter().map(|&m| next.map_morphism(m)).collect(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn map_object(&self, o: ObjectId) -> ObjectId {
        self.object_map[o.index()]
    }

    pub fn map_morphism(&self, m: MorphismId) -> MorphismId {
        self.morphism_map[m.index()]
    }

    /// Raw form naming every non-identity assignment.
    pub fn to_raw(&self, src: &TangentDiagram, dst: &TangentDiagram) -> RawFunctor {
        let (a, b) = (src.category(), dst.category());
        let mut raw = RawFunctor::new(self.name.clone(), self.source.clone(), self.target.clone());
        for o in a.object_ids() {
            raw = raw.map_object(a.object_name(o), b.object_name(self.map_object(o)));
        }
        for m in a.declared_morphisms() {
            raw = raw.map_morphism(a.name_of(m), b.name_of(self.map_morphism(m)));
        }
        raw
    }
}

fn product_name(a: &str, b: &str) -> String {
    format!("{a}_x_{b}")
}

fn product_component(cat: &FiniteCategory, m: MorphismId) -> String {
    if cat.is_identity(m) {
        format!("id-{}", cat.object_name(cat.src(m)))
    } else {
        cat.name_of(m).to_string()
    }
}

/// Product of two tangent diagrams.
///
/// Objects are pairs `a_x_b` (first factor major) of dimension
/// `dim a + dim b`; morphisms are pairs with block-diagonal Jacobians and
/// componentwise composition. The result is re-validated from its raw form,
/// so a name collision between generated names surfaces as an error.
pub fn product_diagram(a: &TangentDiagram, b: &TangentDiagram) -> Result<TangentDiagram, DiagramError> {
    let (ca, cb) = (a.category(), b.category());
    let mut raw = RawPresentation::new(product_name(a.name(), b.name()));
    for x in ca.object_ids() {
        for y in cb.object_ids() {
            raw = raw.object(&product_name(ca.object_name(x), cb.object_name(y)), a.dim(x) + b.dim(y));
        }
    }
    let pairs: Vec<(MorphismId, MorphismId)> = ca
        .morphism_ids()
        .flat_map(|f| cb.morphism_ids().map(move |g| (f, g)))
        .filter(|&(f, g)| !(ca.is_identity(f) && cb.is_identity(g)))
        .collect();
    let pair_name = |f: MorphismId, g: MorphismId| {
        if ca.is_identity(f) && cb.is_identity(g) {
            crate::presentation::identity_name(&product_name(ca.object_name(ca.src(f)), cb.object_name(cb.src(g))))
        } else {
            product_name(&product_component(ca, f), &product_component(cb, g))
        }
    };
    for &(f, g) in &pairs {
        let src = product_name(ca.object_name(ca.src(f)), cb.object_name(cb.src(g)));
        let dst = product_name(ca.object_name(ca.dst(f)), cb.object_name(cb.dst(g)));
        let jac = a.jacobian(f).block_diag(b.jacobian(g));
        let rows = if jac.rows() * jac.cols() == 0 { Vec::new() } else { jac.to_rows() };
        raw = raw.morphism(&pair_name(f, g), &src, &dst, rows);
    }
    for &(g1, g2) in &pairs {
        for &(f1, f2) in &pairs {
            if let (Some(h1), Some(h2)) = (ca.compose(g1, f1), cb.compose(g2, f2)) {
                raw = raw.compose(&pair_name(g1, g2), &pair_name(f1, f2), &pair_name(h1, h2));
            }
        }
    }
    TangentDiagram::from_raw(&raw)
}
