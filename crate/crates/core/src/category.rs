//! Finite categories given by an explicit composition table, and the
//! combinatorial properties decided on them: weak filteredness,
//! filteredness, monomorphisms and injective generation.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::presentation::{identity_name, is_token, RawPresentation};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectId(pub(crate) usize);

impl ObjectId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorphismId(pub(crate) usize);

impl MorphismId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: ObjectId,
    pub dst: ObjectId,
    pub is_identity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CategoryError {
    #[error("invalid name `{0}` (expected letters, digits, `_` or `-`)")]
    InvalidName(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("composite `{outer} {inner}` involves an identity; identity composition is implicit")]
    RedundantComposite { outer: String, inner: String },
    #[error("composite `{outer} {inner}` is listed more than once")]
    DuplicateComposite { outer: String, inner: String },
    #[error("missing composite for composable pair `{outer} {inner}`")]
    MissingComposite { outer: String, inner: String },
    #[error("bad composite `{outer} {inner} = {result}`: {reason}")]
    BadComposite { outer: String, inner: String, result: String, reason: &'static str },
    #[error("composition is not associative on `{h} {g} {f}`: ({h}∘{g})∘{f} = {left} but {h}∘({g}∘{f}) = {right}")]
    NonAssociative { h: String, g: String, f: String, left: String, right: String },
    #[error("separated object `{object}` receives distinct parallel morphisms `{first}` and `{second}`")]
    SeparationViolation { object: String, first: String, second: String },
    #[error("injective generation predicts a filtered category but the parallel pair ({first}, {second}) is not coequalized")]
    Inconsistent { first: String, second: String },
}

/// A validated finite category.
///
/// Morphisms are indexed with the identities first (in object order)
/// followed by the declared morphisms in declaration order. All enumerations
/// below follow this order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    /// `compose[g * m + f]` is `g ∘ f` when `dst(f) == src(g)`.
    compose: Vec<Option<MorphismId>>,
    /// `hom[a * n + b]` lists the morphisms `a → b`.
    hom: Vec<Vec<MorphismId>>,
    object_index: BTreeMap<String, ObjectId>,
    morphism_index: BTreeMap<String, MorphismId>,
}

impl FiniteCategory {
    /// Validates the category part of a presentation (dimensions and
    /// Jacobians are ignored).
    pub fn from_raw(raw: &RawPresentation) -> Result<Self, CategoryError> {
        let mut object_index = BTreeMap::new();
        let mut objects = Vec::with_capacity(raw.objects.len());
        for o in &raw.objects {
            if !is_token(&o.name) {
                return Err(CategoryError::InvalidName(o.name.clone()));
            }
            if object_index.insert(o.name.clone(), ObjectId(objects.len())).is_some() {
                return Err(CategoryError::DuplicateId(o.name.clone()));
            }
            objects.push(o.name.clone());
        }

        let mut morphisms: Vec<Morphism> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| Morphism { name: identity_name(o), src: ObjectId(i), dst: ObjectId(i), is_identity: true })
            .collect();
        let mut morphism_index: BTreeMap<String, MorphismId> =
            morphisms.iter().enumerate().map(|(i, m)| (m.name.clone(), MorphismId(i))).collect();
        let lookup_object =
            |name: &str| object_index.get(name).copied().ok_or_else(|| CategoryError::UnknownObject(name.into()));
        for m in &raw.morphisms {
            if !is_token(&m.name) {
                return Err(CategoryError::InvalidName(m.name.clone()));
            }
            let src = lookup_object(&m.src)?;
            let dst = lookup_object(&m.dst)?;
            if morphism_index.insert(m.name.clone(), MorphismId(morphisms.len())).is_some() {
                return Err(CategoryError::DuplicateId(m.name.clone()));
            }
            morphisms.push(Morphism { name: m.name.clone(), src, dst, is_identity: false });
        }

        let n = objects.len();
        let count = morphisms.len();
        let mut compose = vec![None; count * count];
        for f in 0..count {
            for g in 0..count {
                if morphisms[f].dst != morphisms[g].src {
                    continue;
                }
                if morphisms[g].is_identity {
                    compose[g * count + f] = Some(MorphismId(f));
                } else if morphisms[f].is_identity {
                    compose[g * count + f] = Some(MorphismId(g));
                }
            }
        }

        let lookup_morphism =
            |name: &str| morphism_index.get(name).copied().ok_or_else(|| CategoryError::UnknownMorphism(name.into()));
        let mut listed = vec![false; count * count];
        for c in &raw.composites {
            let g = lookup_morphism(&c.outer)?;
            let f = lookup_morphism(&c.inner)?;
            let h = lookup_morphism(&c.result)?;
            let bad = |reason| CategoryError::BadComposite {
                outer: c.outer.clone(),
                inner: c.inner.clone(),
                result: c.result.clone(),
                reason,
            };
            if morphisms[g.0].is_identity || morphisms[f.0].is_identity {
                return Err(CategoryError::RedundantComposite { outer: c.outer.clone(), inner: c.inner.clone() });
            }
            if morphisms[f.0].dst != morphisms[g.0].src {
                return Err(bad("the pair is not composable"));
            }
            if morphisms[h.0].src != morphisms[f.0].src || morphisms[h.0].dst != morphisms[g.0].dst {
                return Err(bad("endpoints of the result do not match"));
            }
            let slot = g.0 * count + f.0;
            if core::mem::replace(&mut listed[slot], true) {
                return Err(CategoryError::DuplicateComposite { outer: c.outer.clone(), inner: c.inner.clone() });
            }
            compose[slot] = Some(h);
        }
        for f in 0..count {
            for g in 0..count {
                if morphisms[f].dst == morphisms[g].src && compose[g * count + f].is_none() {
                    return Err(CategoryError::MissingComposite {
                        outer: morphisms[g].name.clone(),
                        inner: morphisms[f].name.clone(),
                    });
                }
            }
        }

        let mut hom = vec![Vec::new(); n * n];
        for (i, m) in morphisms.iter().enumerate() {
            hom[m.src.0 * n + m.dst.0].push(MorphismId(i));
        }

        let cat = FiniteCategory { objects, morphisms, compose, hom, object_index, morphism_index };
        cat.check_associativity()?;
        Ok(cat)
    }

    fn check_associativity(&self) -> Result<(), CategoryError> {
        for f in self.morphism_ids() {
            for g in self.hom_from(self.dst(f)) {
                let gf = self.compose(g, f).expect("composable");
                for h in self.hom_from(self.dst(g)) {
                    let left = self.compose(self.compose(h, g).expect("composable"), f).expect("composable");
                    let right = self.compose(h, gf).expect("composable");
                    if left != right {
                        return Err(CategoryError::NonAssociative {
                            h: self.name_of(h).into(),
                            g: self.name_of(g).into(),
                            f: self.name_of(f).into(),
                            left: self.name_of(left).into(),
                            right: self.name_of(right).into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_ids(&self) -> impl Iterator<Item = ObjectId> + Clone {
        (0..self.objects.len()).map(ObjectId)
    }

    pub fn morphism_ids(&self) -> impl Iterator<Item = MorphismId> + Clone {
        (0..self.morphisms.len()).map(MorphismId)
    }

    /// Declared (non-identity) morphisms in declaration order.
    pub fn declared_morphisms(&self) -> impl Iterator<Item = MorphismId> + Clone {
        (self.objects.len()..self.morphisms.len()).map(MorphismId)
    }

    pub fn object_name(&self, o: ObjectId) -> &str {
        &self.objects[o.0]
    }

    pub fn name_of(&self, m: MorphismId) -> &str {
        &self.morphisms[m.0].name
    }

    pub fn morphism(&self, m: MorphismId) -> &Morphism {
        &self.morphisms[m.0]
    }

    pub fn src(&self, m: MorphismId) -> ObjectId {
        self.morphisms[m.0].src
    }

    pub fn dst(&self, m: MorphismId) -> ObjectId {
        self.morphisms[m.0].dst
    }

    pub fn is_identity(&self, m: MorphismId) -> bool {
        self.morphisms[m.0].is_identity
    }

    pub fn identity(&self, o: ObjectId) -> MorphismId {
        MorphismId(o.0)
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjectId> {
        self.object_index.get(name).copied()
    }

    /// Resolves declared names as well as the reserved `id:<object>` names.
    pub fn morphism_by_name(&self, name: &str) -> Option<MorphismId> {
        self.morphism_index.get(name).copied()
    }

    /// `g ∘ f`, or `None` when the pair is not composable.
    pub fn compose(&self, g: MorphismId, f: MorphismId) -> Option<MorphismId> {
        self.compose[g.0 * self.morphisms.len() + f.0]
    }

    pub fn hom(&self, a: ObjectId, b: ObjectId) -> &[MorphismId] {
        &self.hom[a.0 * self.objects.len() + b.0]
    }

    /// All morphisms with source `a`, in morphism order.
    pub fn hom_from(&self, a: ObjectId) -> impl Iterator<Item = MorphismId> + '_ {
        self.morphism_ids().filter(move |&m| self.src(m) == a)
    }

    /// Composable non-identity pairs `(g, f)` with their composite, in table order.
    pub fn composition_table(&self) -> impl Iterator<Item = (MorphismId, MorphismId, MorphismId)> + '_ {
        self.declared_morphisms()
            .flat_map(move |g| self.declared_morphisms().filter_map(move |f| self.compose(g, f).map(|h| (g, f, h))))
    }

    /// Unordered pairs of parallel morphisms `(f, g)` with `f` before `g`.
    pub fn parallel_pairs(&self) -> impl Iterator<Item = (MorphismId, MorphismId)> + '_ {
        self.hom
            .iter()
            .flat_map(|ms| ms.iter().enumerate().flat_map(move |(i, &f)| ms[i + 1..].iter().map(move |&g| (f, g))))
    }

    /// An object with exactly one morphism from every object, if any.
    pub fn terminal_object(&self) -> Option<ObjectId> {
        self.object_ids().find(|&t| self.object_ids().all(|a| self.hom(a, t).len() == 1))
    }

    fn has_cocone(&self, a: ObjectId, b: ObjectId) -> bool {
        self.object_ids().any(|e| !self.hom(a, e).is_empty() && !self.hom(b, e).is_empty())
    }

    fn coequalizes(&self, f: MorphismId, g: MorphismId) -> bool {
        self.hom_from(self.dst(f)).any(|h| self.compose(h, f) == self.compose(h, g))
    }

    fn weak_failure(&self) -> Option<FilterednessWitness> {
        if self.objects.is_empty() {
            return Some(FilterednessWitness::Empty);
        }
        for a in self.object_ids() {
            for b in self.object_ids().skip(a.0) {
                if !self.has_cocone(a, b) {
                    return Some(FilterednessWitness::ObjectPair(a, b));
                }
            }
        }
        None
    }

    /// Nonempty with a zigzag of morphisms between any two objects. Germ
    /// categories are connected through the constant plot.
    pub fn is_connected(&self) -> bool {
        let n = self.object_count();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(a) = stack.pop() {
            for m in self.morphism_ids() {
                let (s, t) = (self.src(m).0, self.dst(m).0);
                for (x, y) in [(s, t), (t, s)] {
                    if x == a && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_weakly_filtered(&self) -> bool {
        self.weak_failure().is_none()
    }

    pub fn is_filtered(&self) -> bool {
        self.filteredness().filtered
    }

    /// Decides weak filteredness (a cocone on every pair of objects, including
    /// `C = D`) and filteredness (additionally, every parallel pair is
    /// coequalized by some morphism out of its codomain).
    pub fn filteredness(&self) -> FilterednessReport {
        if let Some(w) = self.weak_failure() {
            return FilterednessReport { weakly_filtered: false, filtered: false, failure_witness: Some(w) };
        }
        let failure = self
            .parallel_pairs()
            .find(|&(f, g)| !self.coequalizes(f, g))
            .map(|(f, g)| FilterednessWitness::ParallelPair(f, g));
        FilterednessReport { weakly_filtered: true, filtered: failure.is_none(), failure_witness: failure }
    }

    /// Morphisms `m` that are left-cancellable: `m∘f = m∘g` implies `f = g`.
    pub fn monomorphisms(&self) -> Vec<MorphismId> {
        self.morphism_ids()
            .filter(|&m| {
                self.parallel_pairs()
                    .filter(|&(f, _)| self.dst(f) == self.src(m))
                    .all(|(f, g)| self.compose(m, f) != self.compose(m, g))
            })
            .collect()
    }

    /// Checks injective generation against objects flagged as modeling
    /// injective plots.
    ///
    /// A separated object may receive at most one morphism from any object:
    /// two germs `f, g : r → q` both satisfy `q∘f = r = q∘g`, so injectivity
    /// of `q` forces `f = g`. The category is injectively generated when every
    /// object maps to some separated object. Under that hypothesis a weakly
    /// filtered category is filtered, and the result is cross-checked.
    pub fn check_injective_generation(&self, separated: &[ObjectId]) -> Result<InjectiveGeneration, CategoryError> {
        for &q in separated {
            for a in self.object_ids() {
                if let [first, second, ..] = self.hom(a, q) {
                    return Err(CategoryError::SeparationViolation {
                        object: self.object_name(q).into(),
                        first: self.name_of(*first).into(),
                        second: self.name_of(*second).into(),
                    });
                }
            }
        }
        let uncovered = self.object_ids().find(|&a| !separated.iter().any(|&q| !self.hom(a, q).is_empty()));
        let injectively_generated = uncovered.is_none();
        let report = self.filteredness();
        let derived_filtered = injectively_generated && report.weakly_filtered;
        if derived_filtered && !report.filtered {
            let Some(FilterednessWitness::ParallelPair(f, g)) = report.failure_witness else {
                unreachable!("a weakly filtered, unfiltered category fails on a parallel pair")
            };
            return Err(CategoryError::Inconsistent { first: self.name_of(f).into(), second: self.name_of(g).into() });
        }
        Ok(InjectiveGeneration { injectively_generated, derived_filtered, uncovered })
    }

    /// Objects' names in order; the identity prefix is reserved.
    pub fn object_names(&self) -> impl Iterator<Item = &str> {
        self.objects.iter().map(String::as_str)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilterednessWitness {
    /// The category has no objects.
    Empty,
    /// Two objects without a common cocone.
    ObjectPair(ObjectId, ObjectId),
    /// A parallel pair that no morphism coequalizes.
    ParallelPair(MorphismId, MorphismId),
}

impl FilterednessWitness {
    pub fn display<'a>(&'a self, cat: &'a FiniteCategory) -> impl fmt::Display + 'a {
        WitnessDisplay { witness: self, cat }
    }
}

struct WitnessDisplay<'a> {
    witness: &'a FilterednessWitness,
    cat: &'a FiniteCategory,
}

impl fmt::Display for WitnessDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self.witness {
            FilterednessWitness::Empty => f.write_str("empty"),
            FilterednessWitness::ObjectPair(a, b) => {
                write!(f, "objects ({}, {}) have no cocone", self.cat.object_name(a), self.cat.object_name(b))
            }
            FilterednessWitness::ParallelPair(p, q) => {
                write!(f, "parallel pair ({}, {}) is not coequalized", self.cat.name_of(p), self.cat.name_of(q))
            }
        }
    }
}

/// Outcome of the filteredness decision. `failure_witness` is present exactly
/// when `filtered` is false; it names an object pair when the category is not
/// even weakly filtered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FilterednessReport {
    pub weakly_filtered: bool,
    pub filtered: bool,
    pub failure_witness: Option<FilterednessWitness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InjectiveGeneration {
    pub injectively_generated: bool,
    /// Weakly filtered and injectively generated, hence filtered.
    pub derived_filtered: bool,
    /// First object with no morphism into a separated object.
    pub uncovered: Option<ObjectId>,
}
