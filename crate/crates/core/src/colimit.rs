//! Exact computation of the tangent space `T = F/R` of a tangent diagram.
//!
//! `F` is the direct sum of the plot-domain tangent spaces, one summand per
//! object in declaration order. `R` is spanned by the basic relations
//! `(r, v) - (q, jac(f)·v)`, one column per non-identity morphism `f: r → q`
//! and basis vector `v` of the source summand.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::category::{MorphismId, ObjectId};
use crate::diagram::{DiagramMorphism, TangentDiagram};
use crate::linalg::{self, Echelon};
use crate::matrix::RationalMatrix;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ColimitError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("vector for `{object}` has length {found}, expected {expected}")]
    LengthMismatch { object: String, expected: usize, found: usize },
    #[error("tangent space belongs to `{found}`, expected `{expected}`")]
    WrongDiagram { expected: String, found: String },
    #[error("no linear map is induced by `{0}`")]
    Inconsistent(String),
}

/// An element of `F`, written as a list of `(object, vector)` terms.
///
/// Terms may mention an object more than once; they are summed when the
/// vector is resolved against a diagram.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalTangentVector {
    pub terms: Vec<(String, Vec<Rational>)>,
}

impl FormalTangentVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(mut self, object: &str, v: Vec<Rational>) -> Self {
        self.terms.push((object.to_string(), v));
        self
    }

    pub fn term_int(self, object: &str, v: &[i64]) -> Self {
        self.term(object, v.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    /// Resolves names and sums duplicate objects, keeping first-mention order.
    pub fn normalize(&self, d: &TangentDiagram) -> Result<Vec<(ObjectId, Vec<Rational>)>, ColimitError> {
        let mut out: Vec<(ObjectId, Vec<Rational>)> = Vec::new();
        for (name, v) in &self.terms {
            let o = d.category().object_by_name(name).ok_or_else(|| ColimitError::UnknownObject(name.clone()))?;
            if v.len() != d.dim(o) {
                return Err(ColimitError::LengthMismatch { object: name.clone(), expected: d.dim(o), found: v.len() });
            }
            match out.iter_mut().find(|(p, _)| *p == o) {
                Some((_, acc)) => acc.iter_mut().zip(v).for_each(|(a, b)| *a += b),
                None => out.push((o, v.clone())),
            }
        }
        Ok(out)
    }

    /// The vector as a dense element of `F`.
    pub fn to_dense(&self, d: &TangentDiagram) -> Result<Vec<Rational>, ColimitError> {
        let mut dense = vec![Rational::zero(); d.total_dim()];
        for (o, v) in self.normalize(d)? {
            let start = d.offset(o);
            for (x, y) in dense[start..start + v.len()].iter_mut().zip(v) {
                *x += y;
            }
        }
        Ok(dense)
    }
}

/// Columns of the relation matrix, grouped by morphism.
pub(crate) fn relation_matrix(d: &TangentDiagram) -> (RationalMatrix, Vec<(MorphismId, usize)>) {
    let cat = d.category();
    let n = d.total_dim();
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    let mut blocks = Vec::new();
    for f in cat.declared_morphisms() {
        let (r, q) = (cat.src(f), cat.dst(f));
        let jac = d.jacobian(f);
        blocks.push((f, d.dim(r)));
        for k in 0..d.dim(r) {
            let mut col = vec![Rational::zero(); n];
            col[d.offset(r) + k] += Rational::one();
            for (i, x) in jac.column(k).into_iter().enumerate() {
                col[d.offset(q) + i] -= x;
            }
            columns.push(col);
        }
    }
    let mut data = Vec::with_capacity(n * columns.len());
    for row in 0..n {
        data.extend(columns.iter().map(|c| c[row].clone()));
    }
    let m = RationalMatrix::from_data(n, columns.len(), data).expect("shape");
    (m, blocks)
}

/// The computed colimit: its dimension and the cocone `p_*` of projections
/// `T₀U_r → T`, one per object.
#[derive(Clone, Debug)]
pub struct TangentSpace<'d> {
    diagram: &'d TangentDiagram,
    dimension: usize,
    projections: Vec<RationalMatrix>,
    /// For each quotient coordinate, the summand basis vector mapping to it.
    generators: Vec<(ObjectId, usize)>,
    relation_rank: usize,
}

/// Computes `T = F/R` exactly.
///
/// Quotient coordinates are the free columns of the reduced row echelon form
/// of `R`; the projection of a summand basis vector is its reduction modulo
/// `R` read off on those columns. The output is fully determined by the
/// presentation order.
pub fn tangent_space(d: &TangentDiagram) -> TangentSpace<'_> {
    let (rel, _) = relation_matrix(d);
    let n = d.total_dim();
    let ech = Echelon::from_rows(rel.transpose().to_rows(), n);
    let free = ech.free_columns();
    let dimension = free.len();

    // Coordinates of every basis vector of F in the quotient basis.
    let mut coords: Vec<Vec<Rational>> = vec![vec![Rational::zero(); dimension]; n];
    for (k, &c) in free.iter().enumerate() {
        coords[c][k] = Rational::one();
    }
    for (row, &p) in ech.rows().iter().zip(ech.pivots()) {
        for (k, &c) in free.iter().enumerate() {
            coords[p][k] = -row[c].clone();
        }
    }

    let cat = d.category();
    let projections = cat
        .object_ids()
        .map(|o| {
            let mut m = RationalMatrix::zeros(dimension, d.dim(o));
            for j in 0..d.dim(o) {
                for (k, x) in coords[d.offset(o) + j].iter().enumerate() {
                    m.set(k, j, x.clone());
                }
            }
            m
        })
        .collect();
    let generators = free
        .iter()
        .map(|&c| {
            let o = cat
                .object_ids()
                .filter(|&o| d.offset(o) <= c && d.dim(o) > 0)
                .last()
                .expect("free column lies in some summand");
            (o, c - d.offset(o))
        })
        .collect();
    TangentSpace { diagram: d, dimension, projections, generators, relation_rank: ech.rank() }
}

impl<'d> TangentSpace<'d> {
    pub fn diagram(&self) -> &'d TangentDiagram {
        self.diagram
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn relation_rank(&self) -> usize {
        self.relation_rank
    }

    pub fn projection(&self, o: ObjectId) -> &RationalMatrix {
        &self.projections[o.index()]
    }

    /// Summand basis vectors `(object, index)` projecting onto the quotient
    /// basis, one per coordinate.
    pub fn generators(&self) -> &[(ObjectId, usize)] {
        &self.generators
    }

    /// The class `Σ p_*(v)` of a formal vector, in quotient coordinates.
    pub fn push_class(&self, w: &FormalTangentVector) -> Result<Vec<Rational>, ColimitError> {
        let mut out = vec![Rational::zero(); self.dimension];
        for (o, v) in w.normalize(self.diagram)? {
            for (acc, x) in out.iter_mut().zip(self.projection(o).apply(&v)) {
                *acc += x;
            }
        }
        Ok(out)
    }

    /// Class of a dense element of `F`.
    pub fn push_dense(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dimension];
        for o in self.diagram.category().object_ids() {
            let start = self.diagram.offset(o);
            let part = &v[start..start + self.diagram.dim(o)];
            for (acc, x) in out.iter_mut().zip(self.projection(o).apply(part)) {
                *acc += x;
            }
        }
        out
    }

    /// Some object whose projection is onto, if any.
    ///
    /// Over an infinite field a finite union of proper subspaces never covers
    /// the space, so every class is `p_*(u)` for a single plot exactly when
    /// one projection is surjective. A diagram without objects has no plots
    /// and is reported as not 1-representable.
    pub fn one_representing_object(&self) -> Option<ObjectId> {
        self.diagram.category().object_ids().find(|&o| self.projection(o).rank() == self.dimension)
    }
}

/// One basic relation `(r, v) - (q, jac(f)·v)` per summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationDecomposition {
    pub summands: Vec<(MorphismId, Vec<Rational>)>,
}

impl RelationDecomposition {
    /// Sums the relations into a dense element of `F`.
    pub fn resum(&self, d: &TangentDiagram) -> Vec<Rational> {
        let cat = d.category();
        let mut out = vec![Rational::zero(); d.total_dim()];
        for (f, v) in &self.summands {
            let (r, q) = (cat.src(*f), cat.dst(*f));
            for (i, x) in v.iter().enumerate() {
                out[d.offset(r) + i] += x;
            }
            for (i, x) in d.jacobian(*f).apply(v).into_iter().enumerate() {
                out[d.offset(q) + i] -= x;
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroDecision {
    Zero(RelationDecomposition),
    /// The nonzero class, in quotient coordinates.
    Nonzero(Vec<Rational>),
}

impl ZeroDecision {
    pub fn is_zero(&self) -> bool {
        matches!(self, ZeroDecision::Zero(_))
    }
}

/// Decides whether `w` vanishes in `T` by solving `R·c = w`. A solution is
/// regrouped per morphism into a [`RelationDecomposition`].
pub fn is_zero(d: &TangentDiagram, w: &FormalTangentVector) -> Result<ZeroDecision, ColimitError> {
    let dense = w.to_dense(d)?;
    let (rel, blocks) = relation_matrix(d);
    match linalg::solve(&rel, &dense) {
        Some(coeffs) => {
            let mut summands = Vec::new();
            let mut rest = coeffs.as_slice();
            for (f, len) in blocks {
                let (v, tail) = rest.split_at(len);
                rest = tail;
                if v.iter().any(|x| !x.is_zero()) {
                    summands.push((f, v.to_vec()));
                }
            }
            Ok(ZeroDecision::Zero(RelationDecomposition { summands }))
        }
        None => Ok(ZeroDecision::Nonzero(tangent_space(d).push_dense(&dense))),
    }
}

/// A plot `q` through which every term factors with `Σ jac(fᵢ)·uᵢ = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SinglePlotWitness {
    pub target: ObjectId,
    /// One germ per normalized term of the input, in term order.
    pub germs: Vec<MorphismId>,
}

/// Searches for a [`SinglePlotWitness`] of `w`.
///
/// Targets are tried in object order and germ tuples lexicographically in
/// morphism order; the first hit is returned. The search is exhaustive and
/// exponential in the number of terms.
pub fn single_plot_witness(
    d: &TangentDiagram,
    w: &FormalTangentVector,
) -> Result<Option<SinglePlotWitness>, ColimitError> {
    let terms = w.normalize(d)?;
    let cat = d.category();
    for q in cat.object_ids() {
        // Images jac(f)·u for each candidate germ of each term.
        let candidates: Vec<Vec<(MorphismId, Vec<Rational>)>> =
            terms.iter().map(|(p, u)| cat.hom(*p, q).iter().map(|&f| (f, d.jacobian(f).apply(u))).collect()).collect();
        if candidates.iter().any(Vec::is_empty) {
            continue;
        }
        let mut choice = vec![0usize; terms.len()];
        loop {
            let mut sum = vec![Rational::zero(); d.dim(q)];
            for (cands, &c) in candidates.iter().zip(&choice) {
                for (acc, x) in sum.iter_mut().zip(&cands[c].1) {
                    *acc += x;
                }
            }
            if sum.iter().all(Zero::is_zero) {
                let germs = candidates.iter().zip(&choice).map(|(cands, &c)| cands[c].0).collect();
                return Ok(Some(SinglePlotWitness { target: q, germs }));
            }
            if !advance(&mut choice, &candidates) {
                break;
            }
        }
    }
    Ok(None)
}

/// Odometer step over candidate tuples, last term varying fastest.
fn advance<T>(choice: &mut [usize], candidates: &[Vec<T>]) -> bool {
    for i in (0..choice.len()).rev() {
        choice[i] += 1;
        if choice[i] < candidates[i].len() {
            return true;
        }
        choice[i] = 0;
    }
    false
}

/// The linear map `T(src) → T(dst)` induced by a functor.
///
/// It is the unique `M` with `M · p_src(r) = p_dst(Φ(r))` for every object
/// `r`; column `k` is read off at the generator of coordinate `k` and the
/// identity is then verified on every object.
pub fn induced_map(
    functor: &DiagramMorphism,
    src: &TangentSpace<'_>,
    dst: &TangentSpace<'_>,
) -> Result<RationalMatrix, ColimitError> {
    for (expected, space) in [(functor.source(), src), (functor.target(), dst)] {
        if space.diagram().name() != expected {
            return Err(ColimitError::WrongDiagram {
                expected: expected.to_string(),
                found: space.diagram().name().to_string(),
            });
        }
    }
    let mut m = RationalMatrix::zeros(dst.dimension(), src.dimension());
    for (k, &(o, j)) in src.generators().iter().enumerate() {
        let column = dst.projection(functor.map_object(o)).column(j);
        for (i, x) in column.into_iter().enumerate() {
            m.set(i, k, x);
        }
    }
    for o in src.diagram().category().object_ids() {
        if m.mul(src.projection(o)) != *dst.projection(functor.map_object(o)) {
            return Err(ColimitError::Inconsistent(functor.name().to_string()));
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::RawPresentation;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x.into())).collect()
    }

    fn euclidean(n: usize) -> TangentDiagram {
        TangentDiagram::from_raw(&RawPresentation::new("euclidean").object("u", n)).unwrap()
    }

    fn orbifold() -> TangentDiagram {
        TangentDiagram::from_raw(
            &RawPresentation::new("orbifold")
                .object("q", 1)
                .morphism_int("s", "q", "q", &[&[-1]])
                .compose("s", "s", "id:q"),
        )
        .unwrap()
    }

    fn axes_cross() -> TangentDiagram {
        TangentDiagram::from_raw(&RawPresentation::new("axes").object("a1", 1).object("a2", 1)).unwrap()
    }

    fn torus_total() -> TangentDiagram {
        TangentDiagram::from_raw(
            &RawPresentation::new("total")
                .object("u", 1)
                .object("c", 1)
                .morphism_int("j", "c", "u", &[&[0]])
                .morphism_int("z", "c", "c", &[&[0]])
                .compose("z", "z", "z")
                .compose("j", "z", "j"),
        )
        .unwrap()
    }

    fn morphism(d: &TangentDiagram, name: &str) -> MorphismId {
        d.category().morphism_by_name(name).unwrap()
    }

    #[test]
    fn euclidean_projection_is_identity() {
        for n in 0..5 {
            let d = euclidean(n);
            let t = tangent_space(&d);
            assert_eq!(t.dimension(), n);
            assert_eq!(t.projection(ObjectId(0)), &RationalMatrix::identity(n));
        }
    }

    #[test]
    fn orbifold_tangent_space_vanishes() {
        let d = orbifold();
        let t = tangent_space(&d);
        assert_eq!(t.dimension(), 0);
        assert_eq!(t.relation_rank(), 1);
        assert_eq!(t.push_class(&FormalTangentVector::new().term_int("q", &[5])).unwrap(), Vec::<Rational>::new());
    }

    #[test]
    fn axes_cross_projections_are_coordinate_inclusions() {
        let d = axes_cross();
        let t = tangent_space(&d);
        assert_eq!(t.dimension(), 2);
        assert_eq!(t.projection(ObjectId(0)), &RationalMatrix::from_ints(&[&[1], &[0]]));
        assert_eq!(t.projection(ObjectId(1)), &RationalMatrix::from_ints(&[&[0], &[1]]));
        assert_eq!(t.one_representing_object(), None);
    }

    #[test]
    fn torus_total_space_is_a_line() {
        let d = torus_total();
        let t = tangent_space(&d);
        assert_eq!(t.dimension(), 1);
        assert_eq!(t.projection(ObjectId(0)), &RationalMatrix::from_ints(&[&[1]]));
        assert_eq!(t.projection(ObjectId(1)), &RationalMatrix::from_ints(&[&[0]]));
        assert_eq!(t.one_representing_object(), Some(ObjectId(0)));
    }

    #[test]
    fn empty_diagram_is_the_zero_space() {
        let d = TangentDiagram::from_raw(&RawPresentation::new("empty")).unwrap();
        let t = tangent_space(&d);
        assert_eq!(t.dimension(), 0);
        assert_eq!(t.one_representing_object(), None);
        assert!(t.push_class(&FormalTangentVector::new()).unwrap().is_empty());
    }

    #[test]
    fn push_class_errors() {
        let d = euclidean(2);
        let t = tangent_space(&d);
        assert_eq!(
            t.push_class(&FormalTangentVector::new().term_int("v", &[1])),
            Err(ColimitError::UnknownObject("v".into()))
        );
        assert_eq!(
            t.push_class(&FormalTangentVector::new().term_int("u", &[1])),
            Err(ColimitError::LengthMismatch { object: "u".into(), expected: 2, found: 1 })
        );
        assert_eq!(t.push_class(&FormalTangentVector::new().term_int("u", &[1, 0])).unwrap(), ints(&[1, 0]));
        assert_eq!(t.push_class(&FormalTangentVector::new()).unwrap(), ints(&[0, 0]));
    }

    #[test]
    fn orbifold_zero_decomposition_uses_half() {
        let d = orbifold();
        let w = FormalTangentVector::new().term_int("q", &[1]);
        let ZeroDecision::Zero(dec) = is_zero(&d, &w).unwrap() else { panic!("expected zero") };
        assert_eq!(dec.summands, vec![(morphism(&d, "s"), vec![q(1, 2)])]);
        assert_eq!(dec.resum(&d), ints(&[1]));
    }

    #[test]
    fn euclidean_vector_is_nonzero() {
        let d = euclidean(2);
        let w = FormalTangentVector::new().term_int("u", &[1, 0]);
        assert_eq!(is_zero(&d, &w).unwrap(), ZeroDecision::Nonzero(ints(&[1, 0])));
    }

    #[test]
    fn constant_plot_vector_dies_through_the_zero_arrow() {
        let d = torus_total();
        let w = FormalTangentVector::new().term_int("c", &[3]);
        let ZeroDecision::Zero(dec) = is_zero(&d, &w).unwrap() else { panic!("expected zero") };
        assert_eq!(dec.summands, vec![(morphism(&d, "j"), ints(&[3]))]);
        assert_eq!(dec.resum(&d), w.to_dense(&d).unwrap());
    }

    #[test]
    fn duplicate_terms_are_summed() {
        let d = axes_cross();
        let w = FormalTangentVector::new().term_int("a1", &[1]).term_int("a2", &[2]).term_int("a1", &[-1]);
        assert_eq!(w.normalize(&d).unwrap(), vec![(ObjectId(0), ints(&[0])), (ObjectId(1), ints(&[2]))]);
    }

    #[test]
    fn witness_examples() {
        let d = torus_total();
        let w = FormalTangentVector::new().term_int("c", &[3]);
        let found = single_plot_witness(&d, &w).unwrap().unwrap();
        assert_eq!(found, SinglePlotWitness { target: ObjectId(0), germs: vec![morphism(&d, "j")] });

        let e = euclidean(1);
        assert_eq!(single_plot_witness(&e, &FormalTangentVector::new().term_int("u", &[1])).unwrap(), None);

        let o = orbifold();
        let w = FormalTangentVector::new().term_int("q", &[1]);
        assert!(is_zero(&o, &w).unwrap().is_zero());
        assert_eq!(single_plot_witness(&o, &w).unwrap(), None);
    }

    #[test]
    fn witness_for_several_terms() {
        // Two lines into a plane, with opposite vectors along the same axis.
        let d = TangentDiagram::from_raw(
            &RawPresentation::new("v")
                .object("a", 1)
                .object("b", 1)
                .object("w", 2)
                .morphism_int("i", "a", "w", &[&[1], &[0]])
                .morphism_int("k", "b", "w", &[&[1], &[0]]),
        )
        .unwrap();
        let w = FormalTangentVector::new().term_int("a", &[2]).term_int("b", &[-2]);
        let found = single_plot_witness(&d, &w).unwrap().unwrap();
        assert_eq!(found.target, ObjectId(2));
        assert_eq!(found.germs, vec![morphism(&d, "i"), morphism(&d, "k")]);
        assert!(is_zero(&d, &w).unwrap().is_zero());
    }

    #[test]
    fn induced_map_of_identity_is_identity() {
        let d = torus_total();
        let t = tangent_space(&d);
        let m = induced_map(&DiagramMorphism::identity(&d), &t, &t).unwrap();
        assert_eq!(m, RationalMatrix::identity(1));
    }

    #[test]
    fn torus_projection_and_fiber_inclusion() {
        use crate::presentation::RawFunctor;
        let total = torus_total();
        let base = TangentDiagram::from_raw(&{
            let mut r = total.to_raw();
            r.name = "base".into();
            r
        })
        .unwrap();
        let fiber = TangentDiagram::from_raw(
            &RawPresentation::new("fiber").object("c", 1).morphism_int("z", "c", "c", &[&[0]]).compose("z", "z", "z"),
        )
        .unwrap();
        let pi = DiagramMorphism::validate(
            &RawFunctor::new("pi", "total", "base")
                .map_object("c", "c")
                .map_object("u", "u")
                .map_morphism("j", "j")
                .map_morphism("z", "z"),
            &total,
            &base,
        )
        .unwrap();
        let iota = DiagramMorphism::validate(
            &RawFunctor::new("iota", "fiber", "total").map_object("c", "c").map_morphism("z", "z"),
            &fiber,
            &total,
        )
        .unwrap();
        let (tf, te, tb) = (tangent_space(&fiber), tangent_space(&total), tangent_space(&base));
        assert_eq!(induced_map(&pi, &te, &tb).unwrap(), RationalMatrix::identity(1));
        assert_eq!(induced_map(&iota, &tf, &te).unwrap().shape(), (1, 0));
        assert!(matches!(induced_map(&pi, &tb, &te), Err(ColimitError::WrongDiagram { .. })));
    }
}
