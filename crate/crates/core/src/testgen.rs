//! Test support: random and exhaustive families of valid tangent diagrams,
//! and an independent elimination oracle. Enabled by the `testgen` feature.
//!
//! Random diagrams are concrete: an object is a finite set together with a
//! dimension, a morphism is a pair (function between the sets, matrix), and
//! composition is componentwise. Closing a few random generators under
//! composition gives a category whose Jacobians are functorial by
//! construction; distinct functions with equal matrices give distinct germs
//! with the same derivative.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::diagram::TangentDiagram;
use crate::matrix::RationalMatrix;
use crate::presentation::{RawFunctor, RawPresentation};
use crate::Rational;

#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub max_objects: usize,
    pub max_dim: usize,
    /// Total morphisms, identities included.
    pub max_morphisms: usize,
    pub max_generators: usize,
    /// Probability of adding a terminal sink object.
    pub sink_probability: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_objects: 5, max_dim: 3, max_morphisms: 12, max_generators: 4, sink_probability: 0.3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Arrow {
    src: usize,
    dst: usize,
    func: Vec<usize>,
    jac: RationalMatrix,
}

/// A concrete category: objects `(set size, dimension)` and the
/// non-identity arrows, closed under composition.
#[derive(Clone, Debug)]
pub struct Concrete {
    sets: Vec<usize>,
    dims: Vec<usize>,
    arrows: Vec<Arrow>,
}

impl Concrete {
    fn identity(&self, a: usize) -> Arrow {
        Arrow { src: a, dst: a, func: (0..self.sets[a]).collect(), jac: RationalMatrix::identity(self.dims[a]) }
    }

    fn compose(g: &Arrow, f: &Arrow) -> Arrow {
        Arrow { src: f.src, dst: g.dst, func: f.func.iter().map(|&x| g.func[x]).collect(), jac: g.jac.mul(&f.jac) }
    }

    /// Closes `gens` under composition; `None` once the total morphism count
    /// would exceed `cap`.
    fn close(sets: Vec<usize>, dims: Vec<usize>, gens: Vec<Arrow>, cap: usize) -> Option<Self> {
        let mut c = Concrete { sets, dims, arrows: Vec::new() };
        let n = c.sets.len();
        for g in gens {
            if g != c.identity(g.src) && !c.arrows.contains(&g) {
                c.arrows.push(g);
            }
        }
        if c.arrows.len() + n > cap {
            return None;
        }
        loop {
            let mut added = false;
            let len = c.arrows.len();
            for i in 0..len {
                for j in 0..len {
                    if c.arrows[j].dst != c.arrows[i].src {
                        continue;
                    }
                    let h = Self::compose(&c.arrows[i], &c.arrows[j]);
                    if h != c.identity(h.src) && !c.arrows.contains(&h) {
                        c.arrows.push(h);
                        added = true;
                        if c.arrows.len() + n > cap {
                            return None;
                        }
                    }
                }
            }
            if !added {
                return Some(c);
            }
        }
    }

    fn name_of(&self, a: &Arrow) -> String {
        if *a == self.identity(a.src) {
            format!("id:o{}", a.src)
        } else {
            format!("m{}", self.arrows.iter().position(|b| b == a).expect("closed"))
        }
    }

    pub fn presentation(&self, name: &str) -> RawPresentation {
        let mut raw = RawPresentation::new(name);
        for (i, &d) in self.dims.iter().enumerate() {
            raw = raw.object(&format!("o{i}"), d);
        }
        for (i, a) in self.arrows.iter().enumerate() {
            let rows = if a.jac.rows() * a.jac.cols() == 0 { Vec::new() } else { a.jac.to_rows() };
            raw = raw.morphism(&format!("m{i}"), &format!("o{}", a.src), &format!("o{}", a.dst), rows);
        }
        for g in &self.arrows {
            for f in &self.arrows {
                if f.dst == g.src {
                    raw = raw.compose(&self.name_of(g), &self.name_of(f), &self.name_of(&Self::compose(g, f)));
                }
            }
        }
        raw
    }

    pub fn diagram(&self, name: &str) -> TangentDiagram {
        TangentDiagram::from_raw(&self.presentation(name)).expect("concrete categories are valid diagrams")
    }

    /// Forgets the set components: objects become singletons and arrows with
    /// equal endpoints and Jacobian are identified. The returned functor maps
    /// `self` onto the result.
    pub fn forget_sets(&self, name: &str, coarse_name: &str) -> (Concrete, RawFunctor) {
        let strip = |a: &Arrow| Arrow { src: a.src, dst: a.dst, func: vec![0; 1], jac: a.jac.clone() };
        let sets = vec![1; self.sets.len()];
        let gens = self.arrows.iter().map(strip).collect();
        let coarse = Concrete::close(sets, self.dims.clone(), gens, usize::MAX).expect("no cap");
        let mut f = RawFunctor::new(format!("{name}-to-{coarse_name}"), name, coarse_name);
        for i in 0..self.sets.len() {
            f = f.map_object(&format!("o{i}"), &format!("o{i}"));
        }
        for (i, a) in self.arrows.iter().enumerate() {
            f = f.map_morphism(&format!("m{i}"), &coarse.name_of(&strip(a)));
        }
        (coarse, f)
    }

    /// Adds `extra` fresh objects and arrows from every old object into them
    /// (constant function, random matrix), closing under composition. The
    /// inclusion of `self` is returned as a functor.
    pub fn extend<R: Rng>(
        &self,
        rng: &mut R,
        name: &str,
        bigger_name: &str,
        extra_dims: &[usize],
        cap: usize,
    ) -> Option<(Concrete, RawFunctor)> {
        let mut sets = self.sets.clone();
        let mut dims = self.dims.clone();
        let old = sets.len();
        for &d in extra_dims {
            sets.push(1);
            dims.push(d);
        }
        let mut gens = self.arrows.clone();
        for t in old..sets.len() {
            for s in 0..old {
                if rng.gen_bool(0.5) {
                    gens.push(Arrow { src: s, dst: t, func: vec![0; sets[s]], jac: zero_matrix(dims[t], dims[s]) });
                }
            }
        }
        let bigger = Concrete::close(sets, dims, gens, cap)?;
        // Old arrows keep their composites, so they stay closed among themselves.
        let mut f = RawFunctor::new(format!("{name}-into-{bigger_name}"), name, bigger_name);
        for i in 0..old {
            f = f.map_object(&format!("o{i}"), &format!("o{i}"));
        }
        for (i, a) in self.arrows.iter().enumerate() {
            f = f.map_morphism(&format!("m{i}"), &bigger.name_of(a));
        }
        Some((bigger, f))
    }
}

fn zero_matrix(rows: usize, cols: usize) -> RationalMatrix {
    RationalMatrix::zeros(rows, cols)
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> RationalMatrix {
    const ENTRIES: [i64; 6] = [-1, 0, 0, 0, 1, 1];
    let data = (0..rows * cols).map(|_| Rational::from_integer(ENTRIES[rng.gen_range(0..ENTRIES.len())].into()));
    RationalMatrix::from_data(rows, cols, data.collect()).expect("shape")
}

/// A random concrete category within the configured bounds.
pub fn random_concrete<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Concrete {
    loop {
        let n = rng.gen_range(1..=cfg.max_objects);
        let sink = n > 1 && rng.gen_bool(cfg.sink_probability);
        let sets: Vec<usize> = (0..n).map(|i| if sink && i == n - 1 { 1 } else { rng.gen_range(1..=2) }).collect();
        let dims: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=cfg.max_dim)).collect();
        let free = if sink { n - 1 } else { n };
        let mut gens = Vec::new();
        for _ in 0..rng.gen_range(0..=cfg.max_generators) {
            let (src, dst) = (rng.gen_range(0..free), rng.gen_range(0..free));
            let func = (0..sets[src]).map(|_| rng.gen_range(0..sets[dst])).collect();
            gens.push(Arrow { src, dst, func, jac: random_matrix(rng, dims[dst], dims[src]) });
        }
        if sink {
            let t = n - 1;
            for s in 0..t {
                gens.push(Arrow { src: s, dst: t, func: vec![0; sets[s]], jac: zero_matrix(dims[t], dims[s]) });
            }
        }
        if let Some(c) = Concrete::close(sets, dims, gens, cfg.max_morphisms) {
            return c;
        }
    }
}

pub fn random_diagram<R: Rng>(rng: &mut R, cfg: &GenConfig) -> TangentDiagram {
    random_concrete(rng, cfg).diagram("random")
}

/// Random element of `F`, entries in `-2..=2`.
pub fn random_vector<R: Rng>(rng: &mut R, len: usize) -> Vec<Rational> {
    (0..len).map(|_| Rational::from_integer(rng.gen_range(-2i64..=2).into())).collect()
}

/// Every category with at most 3 objects and at most 2 non-identity
/// morphisms, with dimensions at most 2 and Jacobians from a fixed list of
/// small matrices per shape. Diagrams failing validation are skipped.
pub fn for_each_small_diagram(mut visit: impl FnMut(&TangentDiagram)) {
    for n in 0..=3usize {
        for dims in tuples(n, 3) {
            for k in 0..=2usize {
                for ends in tuples(2 * k, n.max(1)).filter(|_| n > 0 || k == 0) {
                    let ends: Vec<(usize, usize)> = ends.chunks(2).map(|c| (c[0], c[1])).collect();
                    if k == 2 && ends[0] > ends[1] {
                        continue;
                    }
                    for_each_table(n, &ends, |composites| {
                        for jacs in jacobian_choices(&dims, &ends) {
                            let mut raw = RawPresentation::new("small");
                            for (i, &d) in dims.iter().enumerate() {
                                raw = raw.object(&format!("o{i}"), d);
                            }
                            for (i, (&(s, t), jac)) in ends.iter().zip(&jacs).enumerate() {
                                let rows = if jac.rows() * jac.cols() == 0 { Vec::new() } else { jac.to_rows() };
                                raw = raw.morphism(&format!("m{i}"), &format!("o{s}"), &format!("o{t}"), rows);
                            }
                            for (g, f, h) in composites {
                                raw = raw.compose(g, f, h);
                            }
                            if let Ok(d) = TangentDiagram::from_raw(&raw) {
                                visit(&d);
                            }
                        }
                    });
                }
            }
        }
    }
}

/// All `len`-tuples over `0..base`.
fn tuples(len: usize, base: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = base.pow(len as u32);
    (0..total).map(move |mut code| {
        let mut t = vec![0; len];
        for x in t.iter_mut() {
            *x = code % base;
            code /= base;
        }
        t
    })
}

/// Enumerates candidate composition tables: for every composable pair, a
/// result with matching endpoints (identity included).
fn for_each_table(_n: usize, ends: &[(usize, usize)], mut visit: impl FnMut(&[(&str, &str, &str)])) {
    let names: Vec<String> = (0..ends.len()).map(|i| format!("m{i}")).collect();
    let mut pairs = Vec::new();
    for g in 0..ends.len() {
        for f in 0..ends.len() {
            if ends[f].1 == ends[g].0 {
                let (s, t) = (ends[f].0, ends[g].1);
                let mut options: Vec<String> =
                    (0..ends.len()).filter(|&h| ends[h] == (s, t)).map(|h| names[h].clone()).collect();
                if s == t {
                    options.push(format!("id:o{s}"));
                }
                pairs.push((g, f, options));
            }
        }
    }
    if pairs.iter().any(|(_, _, o)| o.is_empty()) {
        return;
    }
    let mut choice = vec![0usize; pairs.len()];
    loop {
        let table: Vec<(&str, &str, &str)> = pairs
            .iter()
            .zip(&choice)
            .map(|((g, f, opts), &c)| (names[*g].as_str(), names[*f].as_str(), opts[c].as_str()))
            .collect();
        visit(&table);
        let mut i = 0;
        loop {
            if i == choice.len() {
                return;
            }
            choice[i] += 1;
            if choice[i] < pairs[i].2.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn small_matrices(rows: usize, cols: usize) -> Vec<RationalMatrix> {
    if rows * cols == 0 {
        return vec![RationalMatrix::zeros(rows, cols)];
    }
    const SCALARS: [&[i64]; 4] = [&[0], &[1], &[-1], &[2]];
    const VECTORS: [&[i64]; 4] = [&[0, 0], &[1, 0], &[0, 1], &[1, -1]];
    const SQUARES: [&[i64]; 8] = [
        &[0, 0, 0, 0],
        &[1, 0, 0, 1],
        &[-1, 0, 0, -1],
        &[1, 0, 0, 0],
        &[0, 0, 0, 1],
        &[0, 1, 1, 0],
        &[1, 1, 0, 1],
        &[0, 1, 0, 0],
    ];
    let lists: &[&[i64]] = match (rows, cols) {
        (1, 1) => &SCALARS,
        (1, 2) | (2, 1) => &VECTORS,
        _ => &SQUARES,
    };
    lists
        .iter()
        .map(|entries| {
            let data = entries.iter().map(|&x| Rational::from_integer(x.into())).collect();
            RationalMatrix::from_data(rows, cols, data).expect("shape")
        })
        .collect()
}

fn jacobian_choices(dims: &[usize], ends: &[(usize, usize)]) -> Vec<Vec<RationalMatrix>> {
    let per: Vec<Vec<RationalMatrix>> = ends.iter().map(|&(s, t)| small_matrices(dims[t], dims[s])).collect();
    let mut out = vec![Vec::new()];
    for options in per {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |m| {
                    let mut v = prefix.clone();
                    v.push(m.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// Dense fraction-free elimination over the integers, independent of the
/// rational Gauss-Jordan used by the engine.
pub mod oracle {
    use alloc::vec;
    use alloc::vec::Vec;

    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Zero};

    use crate::diagram::TangentDiagram;
    use crate::Rational;

    /// Relation columns, built directly from the presentation.
    pub fn relation_columns(d: &TangentDiagram) -> Vec<Vec<Rational>> {
        let cat = d.category();
        let mut offsets = Vec::new();
        let mut n = 0;
        for o in cat.object_ids() {
            offsets.push(n);
            n += d.dim(o);
        }
        let mut cols = Vec::new();
        for m in cat.morphism_ids().filter(|&m| !cat.is_identity(m)) {
            let (r, q) = (cat.src(m).index(), cat.dst(m).index());
            let jac = d.jacobian(m);
            for k in 0..jac.cols() {
                let mut col = vec![Rational::zero(); n];
                col[offsets[r] + k] += Rational::one();
                for i in 0..jac.rows() {
                    col[offsets[q] + i] -= jac.get(i, k);
                }
                cols.push(col);
            }
        }
        cols
    }

    fn integer_column(col: &[Rational]) -> Vec<BigInt> {
        let lcm = col.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        col.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect()
    }

    /// Rank of the matrix with the given columns, by Bareiss elimination.
    pub fn rank(columns: &[Vec<Rational>], rows: usize) -> usize {
        let cols: Vec<Vec<BigInt>> = columns.iter().map(|c| integer_column(c)).collect();
        let mut m: Vec<Vec<BigInt>> = (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let ncols = cols.len();
        let mut prev = BigInt::one();
        let mut rank = 0;
        for col in 0..ncols {
            let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else { continue };
            m.swap(rank, p);
            for i in rank + 1..rows {
                for j in col + 1..ncols {
                    let v = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                    debug_assert!((&v % &prev).is_zero());
                    m[i][j] = v / &prev;
                }
                m[i][col] = BigInt::zero();
            }
            prev = m[rank][col].clone();
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    pub fn tangent_dimension(d: &TangentDiagram) -> usize {
        let n: usize = d.category().object_ids().map(|o| d.dim(o)).sum();
        n - rank(&relation_columns(d), n)
    }

    /// `w ∈ span R` iff appending `w` does not raise the rank.
    pub fn is_zero(d: &TangentDiagram, dense: &[Rational]) -> bool {
        let mut cols = relation_columns(d);
        let n = dense.len();
        let base = rank(&cols, n);
        cols.push(dense.to_vec());
        rank(&cols, n) == base
    }
}
