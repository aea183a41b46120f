use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tangent_core::testgen::{self, oracle, GenConfig};
use tangent_core::{
    induced_map, is_zero, product_diagram, single_plot_witness, tangent_space, DiagramMorphism, FormalTangentVector,
    Rational, RationalMatrix, TangentDiagram, ZeroDecision,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn diagram(seed: u64) -> TangentDiagram {
    testgen::random_diagram(&mut rng(seed), &GenConfig::default())
}

fn formal(d: &TangentDiagram, dense: &[Rational], keep_zero: bool) -> FormalTangentVector {
    let cat = d.category();
    let mut w = FormalTangentVector::new();
    for o in cat.object_ids() {
        let slice = &dense[d.offset(o)..d.offset(o) + d.dim(o)];
        if keep_zero || slice.iter().any(|x| !x.is_zero()) {
            w = w.term(cat.object_name(o), slice.to_vec());
        }
    }
    w
}

/// A random element of `span R`.
fn relation_combination(d: &TangentDiagram, r: &mut impl Rng) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); d.total_dim()];
    for col in oracle::relation_columns(d) {
        let c = Rational::from_integer(r.gen_range(-2i64..=2).into());
        for (acc, x) in out.iter_mut().zip(col) {
            *acc += c.clone() * x;
        }
    }
    out
}

/// The product law needs connected factors: over `A×B` the colimit of
/// `T(A)` is taken once per component of `B`.
fn connected(r: &mut impl Rng, cfg: &GenConfig, name: &str) -> TangentDiagram {
    loop {
        let d = testgen::random_concrete(r, cfg).diagram(name);
        if d.category().is_connected() {
            return d;
        }
    }
}

fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn filtered_implies_weakly_filtered(seed in any::<u64>()) {
        let cat = diagram(seed).category().clone();
        let report = cat.filteredness();
        prop_assert!(!report.filtered || report.weakly_filtered);
        prop_assert_eq!(report.filtered, report.failure_witness.is_none());
    }

    #[test]
    fn terminal_object_implies_filtered(seed in any::<u64>()) {
        let cfg = GenConfig { sink_probability: 1.0, ..GenConfig::default() };
        let d = testgen::random_diagram(&mut rng(seed), &cfg);
        let cat = d.category();
        if cat.terminal_object().is_some() {
            prop_assert!(cat.is_filtered());
        }
    }

    #[test]
    fn identities_are_monic(seed in any::<u64>()) {
        let cat = diagram(seed).category().clone();
        let monos = cat.monomorphisms();
        for o in cat.object_ids() {
            prop_assert!(monos.contains(&cat.identity(o)));
        }
    }

    #[test]
    fn injective_generation_with_weak_filteredness_gives_filteredness(seed in any::<u64>(), mask in any::<u8>()) {
        let cat = diagram(seed).category().clone();
        let eligible: Vec<_> = cat
            .object_ids()
            .filter(|&q| cat.object_ids().all(|a| cat.hom(a, q).len() <= 1))
            .filter(|q| mask & (1 << (q.index() % 8)) != 0)
            .collect();
        let report = cat.check_injective_generation(&eligible).expect("no inconsistency");
        if report.derived_filtered {
            prop_assert!(cat.is_filtered());
        }
        prop_assert_eq!(report.injectively_generated, report.uncovered.is_none());
    }

    #[test]
    fn cocone_compatibility_and_rank_nullity(seed in any::<u64>()) {
        let d = diagram(seed);
        let t = tangent_space(&d);
        let cat = d.category();
        for f in cat.morphism_ids() {
            let (r, q) = (cat.src(f), cat.dst(f));
            prop_assert_eq!(t.projection(q).mul(d.jacobian(f)), t.projection(r).clone());
        }
        prop_assert_eq!(t.dimension(), d.total_dim() - t.relation_rank());
        prop_assert_eq!(t.dimension(), oracle::tangent_dimension(&d));
    }

    #[test]
    fn zero_decisions_match_projection_and_oracle(seed in any::<u64>()) {
        let d = diagram(seed);
        let t = tangent_space(&d);
        let mut r = rng(seed ^ 0x5eed);
        for round in 0..4 {
            let mut dense = relation_combination(&d, &mut r);
            if round % 2 == 1 {
                dense = add(&dense, &testgen::random_vector(&mut r, d.total_dim()));
            }
            let w = formal(&d, &dense, round == 2);
            let decision = is_zero(&d, &w).unwrap();
            let class = t.push_class(&w).unwrap();
            prop_assert_eq!(decision.is_zero(), class.iter().all(Zero::is_zero));
            prop_assert_eq!(decision.is_zero(), oracle::is_zero(&d, &dense));
            match decision {
                ZeroDecision::Zero(dec) => prop_assert_eq!(dec.resum(&d), dense),
                ZeroDecision::Nonzero(coords) => prop_assert_eq!(coords, class),
            }
        }
    }

    #[test]
    fn filtered_diagrams_have_witnesses_and_representing_plots(seed in any::<u64>()) {
        let d = diagram(seed);
        if d.category().is_filtered() {
            let t = tangent_space(&d);
            prop_assert!(t.one_representing_object().is_some());
            let mut r = rng(seed ^ 0x77);
            for _ in 0..3 {
                let dense = relation_combination(&d, &mut r);
                let w = formal(&d, &dense, false);
                let witness = single_plot_witness(&d, &w).unwrap();
                prop_assert!(witness.is_some());
            }
        }
    }

    #[test]
    fn products_add_dimensions_and_filteredness(a in any::<u64>(), b in any::<u64>()) {
        let cfg = GenConfig { max_objects: 3, max_dim: 2, max_morphisms: 6, ..GenConfig::default() };
        let da = connected(&mut rng(a), &cfg, "A");
        let db = connected(&mut rng(b), &cfg, "B");
        let p = product_diagram(&da, &db).unwrap();
        prop_assert_eq!(
            tangent_space(&p).dimension(),
            tangent_space(&da).dimension() + tangent_space(&db).dimension()
        );
        let (ca, cb, cp) = (da.category(), db.category(), p.category());
        prop_assert_eq!(cp.is_filtered(), ca.is_filtered() && cb.is_filtered());
        prop_assert_eq!(cp.is_weakly_filtered(), ca.is_weakly_filtered() && cb.is_weakly_filtered());
    }

    #[test]
    fn induced_maps_are_functorial_and_well_defined(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cfg = GenConfig { max_objects: 4, ..GenConfig::default() };
        let fine = testgen::random_concrete(&mut r, &cfg);
        let (coarse, forget) = fine.forget_sets("A", "B");
        let extra: Vec<usize> = (0..r.gen_range(1..=2)).map(|_| r.gen_range(0..=3)).collect();
        let Some((big, include)) = coarse.extend(&mut r, "B", "C", &extra, 40) else { return Ok(()) };
        let (da, db, dc) = (fine.diagram("A"), coarse.diagram("B"), big.diagram("C"));
        let phi = DiagramMorphism::validate(&forget, &da, &db).unwrap();
        let psi = DiagramMorphism::validate(&include, &db, &dc).unwrap();
        let (ta, tb, tc) = (tangent_space(&da), tangent_space(&db), tangent_space(&dc));

        let id = induced_map(&DiagramMorphism::identity(&da), &ta, &ta).unwrap();
        prop_assert_eq!(id, RationalMatrix::identity(ta.dimension()));

        let m_phi = induced_map(&phi, &ta, &tb).unwrap();
        let m_psi = induced_map(&psi, &tb, &tc).unwrap();
        let m_both = induced_map(&phi.then(&psi).unwrap(), &ta, &tc).unwrap();
        prop_assert_eq!(m_psi.mul(&m_phi), m_both);

        // Equal classes in A push forward to equal classes in B.
        let w = testgen::random_vector(&mut r, da.total_dim());
        let w2 = add(&w, &relation_combination(&da, &mut r));
        let push = |dense: &[Rational]| {
            let mut out = vec![Rational::zero(); db.total_dim()];
            for o in da.category().object_ids() {
                let target = db.offset(phi.map_object(o));
                for i in 0..da.dim(o) {
                    out[target + i] += &dense[da.offset(o) + i];
                }
            }
            out
        };
        let c1 = tb.push_dense(&push(&w));
        prop_assert_eq!(&c1, &tb.push_dense(&push(&w2)));
        prop_assert_eq!(c1, m_phi.apply(&ta.push_dense(&w)));
    }
}

#[test]
fn exhaustive_small_family_matches_oracle() {
    let mut count = 0;
    let mut r = rng(7);
    testgen::for_each_small_diagram(|d| {
        count += 1;
        assert_eq!(tangent_space(d).dimension(), oracle::tangent_dimension(d));
        let n = d.total_dim();
        let mut probes: Vec<Vec<Rational>> =
            (0..n).map(|i| (0..n).map(|j| Rational::from_integer(((i == j) as i64).into())).collect()).collect();
        probes.push(relation_combination(d, &mut r));
        for dense in probes {
            let decision = is_zero(d, &formal(d, &dense, true)).unwrap();
            assert_eq!(decision.is_zero(), oracle::is_zero(d, &dense));
        }
    });
    assert!(count > 1000, "family has {count} diagrams");
}

#[test]
fn disconnected_products_count_components() {
    // Two points times a line: one copy of the line per point.
    let a = TangentDiagram::from_raw(&tangent_core::RawPresentation::new("A").object("p", 0).object("q", 0)).unwrap();
    let b = TangentDiagram::from_raw(&tangent_core::RawPresentation::new("B").object("u", 1)).unwrap();
    let p = product_diagram(&a, &b).unwrap();
    assert_eq!(tangent_space(&p).dimension(), 2);
}

#[test]
fn random_population_contains_filtered_and_unfiltered_diagrams() {
    let (mut filtered, mut weak_only, mut neither) = (0, 0, 0);
    for seed in 0..300 {
        let r = diagram(seed).category().filteredness();
        match (r.weakly_filtered, r.filtered) {
            (_, true) => filtered += 1,
            (true, false) => weak_only += 1,
            _ => neither += 1,
        }
    }
    assert!(filtered >= 50 && weak_only >= 5 && neither >= 50, "{filtered} {weak_only} {neither}");
}
