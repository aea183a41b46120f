//! Built-in presentations of standard examples, with their expected facts.

use tangent_core::{product_diagram, DiagramMorphism, RawFunctor, RawPresentation, TangentDiagram};

use crate::format::{write_functor, write_presentation};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown corpus entry `{0}`")]
pub struct UnknownEntry(pub String);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusFile {
    pub name: String,
    pub text: String,
}

/// Golden facts of one space file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceFacts {
    pub file: String,
    pub dimension: usize,
    pub weakly_filtered: bool,
    pub filtered: bool,
    pub one_representable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleFacts {
    pub dims: (usize, usize, usize),
    pub exactness: &'static str,
    pub group_quotient: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub description: &'static str,
    pub files: Vec<CorpusFile>,
    pub spaces: Vec<SpaceFacts>,
    pub bundle: Option<BundleFacts>,
}

impl CorpusEntry {
    pub fn file(&self, name: &str) -> Option<&CorpusFile> {
        self.files.iter().find(|f| f.name == name)
    }
}

/// Bundle entries store their files under these names.
pub const BUNDLE_FILES: [&str; 5] = ["fiber.tan", "total.tan", "base.tan", "iota.tan", "pi.tan"];

const EUCLIDEAN: &str = "Euclidean space R^n at the origin, n = 0..4, as the single identity plot \
of dimension n. The identity germ is terminal among plot germs of an open set, so the germ category \
is filtered and the tangent space is R^n, represented by that plot. Emit `euclidean-k` for one member \
or `euclidean-n` for the whole family.";

const AXES_CROSS: &str = "The union of the two coordinate axes in R^2 at the origin. Modeled by the \
two axis inclusions, both injective and flagged separated, with identities only. The 2-dimensional \
plots into the cross are omitted; the two generators still give tangent dimension 2, no cocone joins \
the axes, so the category is not weakly filtered, and no single plot represents the tangent space.";

const ORBIFOLD: &str = "The half line R/O(1) at the orbit of 0. The quotient plot q has exactly two \
endomorphism germs over the quotient, +1 and -1, with s∘s = id. The relation (q,v) = (q,-v) kills the \
tangent space; the parallel pair (id, s) is not coequalized, so the category is weakly filtered but \
not filtered.";

const WEAK_NOT_FILTERED: &str = "A minimal weakly filtered category that is not filtered: two lines A, \
B and two parallel germs f, g : A -> B with Jacobians 1 and -1. Every pair of objects has a cocone, \
nothing coequalizes f and g, and the relations e_A - e_B and e_A + e_B span, so the tangent space is 0.";

const TORUS: &str = "The irrational torus T = R/(Z + θZ) as the bundle R -> T with fiber the dense \
subgroup. Each space has a constant plot c with a zero-Jacobian idempotent z, and the line and torus \
have the plot u through the point with the constant germ j : c -> u (j∘z = j). θ appears in no \
Jacobian: plot germs into the torus lift uniquely to the line, so line and torus share one germ \
category, while the fiber, being discrete, has only constant plots. Tangent dimensions are 0, 1 and 1 \
and the sequence is exact with an injective first map.";

const CIRCLE: &str = "The circle bundle R -> R/Z with fiber Z. Plot germs into the circle lift \
uniquely to the line and the fiber is discrete, so the presentation has the same shape as the \
irrational torus model; dimensions 0, 1, 1 and an exact four-term sequence.";

const TRIVIAL: &str = "The trivial bundle R x R -> R with fiber R, built with the product \
construction. Base and fiber lines each carry their identity plot and the constant plot of dimension \
0. The total space is the product of the base line with the fiber line; the projection forgets the \
fiber factor by mapping it onto a point model: a plot y of dimension 1 with a zero-Jacobian \
idempotent e = z∘k factoring through the constant plot, so it keeps plot dimensions while killing \
their tangent vectors. The fiber includes over the constant plot of the base. Dimensions 1, 2, 1.";

const WHOLE_GROUP: &str = "The quotient of the group R^2 by the whole group. H = G = R^2 each have the \
identity plot; the quotient is a point, modeled by a plane plot y whose zero-Jacobian idempotent e \
collapses it. The inclusion is an isomorphism on tangent spaces; dimensions 2, 2, 0.";

const TRIVIAL_SUBGROUP: &str = "The quotient of the group R^2 by the trivial subgroup. G and G/{e} \
both have the identity plot u and the constant plot o with z : o -> u; the subgroup is the constant \
plot alone. The projection is an isomorphism on tangent spaces; dimensions 0, 2, 2.";

pub fn corpus_list() -> Vec<(&'static str, &'static str)> {
    vec![
        ("euclidean-n", EUCLIDEAN),
        ("axes-cross", AXES_CROSS),
        ("orbifold-halfline-O1", ORBIFOLD),
        ("weak-not-filtered", WEAK_NOT_FILTERED),
        ("irrational-torus-bundle", TORUS),
        ("circle-bundle", CIRCLE),
        ("trivial-bundle-1x1", TRIVIAL),
        ("group-quotient-whole", WHOLE_GROUP),
        ("group-quotient-trivial", TRIVIAL_SUBGROUP),
    ]
}

/// Every listed entry, in list order.
pub fn corpus_entries() -> Vec<CorpusEntry> {
    corpus_list().into_iter().map(|(name, _)| corpus_entry(name).expect("listed")).collect()
}

pub fn corpus_entry(name: &str) -> Result<CorpusEntry, UnknownEntry> {
    if let Some(k) = name.strip_prefix("euclidean-") {
        return match k {
            "n" => {
                let members: Vec<CorpusEntry> = (0..=4).map(euclidean).collect();
                Ok(CorpusEntry {
                    name: name.into(),
                    description: EUCLIDEAN,
                    files: members.iter().flat_map(|e| e.files.clone()).collect(),
                    spaces: members.iter().flat_map(|e| e.spaces.clone()).collect(),
                    bundle: None,
                })
            }
            _ => match k.parse::<usize>() {
                Ok(n) if n <= 4 && k == n.to_string() => Ok(euclidean(n)),
                _ => Err(UnknownEntry(name.into())),
            },
        };
    }
    let entry = match name {
        "axes-cross" => {
            let raw = RawPresentation::new("axes-cross").separated_object("a1", 1).separated_object("a2", 1);
            single(name, AXES_CROSS, &raw, 2, (false, false), false)
        }
        "orbifold-halfline-O1" => {
            let raw = RawPresentation::new("orbifold")
                .object("q", 1)
                .morphism_int("s", "q", "q", &[&[-1]])
                .compose("s", "s", "id:q");
            single(name, ORBIFOLD, &raw, 0, (true, false), true)
        }
        "weak-not-filtered" => {
            let raw = RawPresentation::new("weak-not-filtered")
                .object("A", 1)
                .object("B", 1)
                .morphism_int("f", "A", "B", &[&[1]])
                .morphism_int("g", "A", "B", &[&[-1]]);
            single(name, WEAK_NOT_FILTERED, &raw, 0, (true, false), true)
        }
        "irrational-torus-bundle" => lifted_quotient(name, TORUS, ["lattice", "line", "torus"]),
        "circle-bundle" => lifted_quotient(name, CIRCLE, ["integers", "line", "circle"]),
        "trivial-bundle-1x1" => trivial_bundle(),
        "group-quotient-whole" => {
            let h = RawPresentation::new("subgroup").object("u", 2);
            let g = RawPresentation::new("group").object("u", 2);
            let point = RawPresentation::new("quotient")
                .object("y", 2)
                .morphism_int("e", "y", "y", &[&[0, 0], &[0, 0]])
                .compose("e", "e", "e");
            let iota = RawFunctor::new("iota", "subgroup", "group").map_object("u", "u");
            let pi = RawFunctor::new("pi", "group", "quotient").map_object("u", "y");
            bundle(name, WHOLE_GROUP, [h, g, point], iota, pi, (2, 2, 0), true)
        }
        "group-quotient-trivial" => {
            let plane = |n: &str| RawPresentation::new(n).object("u", 2).object("o", 0).morphism("z", "o", "u", vec![]);
            let e = RawPresentation::new("subgroup").object("o", 0);
            let iota = RawFunctor::new("iota", "subgroup", "group").map_object("o", "o");
            let pi = RawFunctor::new("pi", "group", "quotient")
                .map_object("u", "u")
                .map_object("o", "o")
                .map_morphism("z", "z");
            bundle(name, TRIVIAL_SUBGROUP, [e, plane("group"), plane("quotient")], iota, pi, (0, 2, 2), true)
        }
        _ => return Err(UnknownEntry(name.into())),
    };
    Ok(entry)
}

fn diagram(raw: &RawPresentation) -> TangentDiagram {
    TangentDiagram::from_raw(raw).expect("corpus presentations are valid")
}

fn space_file(file: String, d: &TangentDiagram) -> CorpusFile {
    CorpusFile { name: file, text: write_presentation(&d.to_raw()) }
}

fn euclidean(n: usize) -> CorpusEntry {
    let name = format!("euclidean-{n}");
    single(&name, EUCLIDEAN, &RawPresentation::new(name.clone()).object("u", n), n, (true, true), true)
}

fn single(
    name: &str,
    description: &'static str,
    raw: &RawPresentation,
    dimension: usize,
    (weakly_filtered, filtered): (bool, bool),
    one_representable: bool,
) -> CorpusEntry {
    let file = format!("{name}.tan");
    CorpusEntry {
        name: name.into(),
        description,
        files: vec![space_file(file.clone(), &diagram(raw))],
        spaces: vec![SpaceFacts { file, dimension, weakly_filtered, filtered, one_representable }],
        bundle: None,
    }
}

/// Bundle with filtered total space and base and the given dimensions.
fn bundle(
    name: &str,
    description: &'static str,
    [fiber, total, base]: [RawPresentation; 3],
    iota: RawFunctor,
    pi: RawFunctor,
    dims: (usize, usize, usize),
    group_quotient: bool,
) -> CorpusEntry {
    let spaces = [diagram(&fiber), diagram(&total), diagram(&base)];
    let iota = DiagramMorphism::validate(&iota, &spaces[0], &spaces[1]).expect("corpus functors are valid");
    let pi = DiagramMorphism::validate(&pi, &spaces[1], &spaces[2]).expect("corpus functors are valid");
    let mut files: Vec<CorpusFile> =
        spaces.iter().zip(BUNDLE_FILES).map(|(d, f)| space_file(f.to_string(), d)).collect();
    files.push(CorpusFile { name: BUNDLE_FILES[3].into(), text: write_functor(&iota.to_raw(&spaces[0], &spaces[1])) });
    files.push(CorpusFile { name: BUNDLE_FILES[4].into(), text: write_functor(&pi.to_raw(&spaces[1], &spaces[2])) });
    let facts = |i: usize, dimension: usize| SpaceFacts {
        file: BUNDLE_FILES[i].into(),
        dimension,
        weakly_filtered: true,
        filtered: true,
        one_representable: true,
    };
    CorpusEntry {
        name: name.into(),
        description,
        files,
        spaces: vec![facts(0, dims.0), facts(1, dims.1), facts(2, dims.2)],
        bundle: Some(BundleFacts { dims, exactness: "ExactFourTerm", group_quotient }),
    }
}

/// Quotient of the line by a discrete subgroup whose plot germs lift
/// uniquely: total space and base share the germ category.
fn lifted_quotient(name: &str, description: &'static str, [f, e, b]: [&str; 3]) -> CorpusEntry {
    let with_line = |n: &str| {
        RawPresentation::new(n)
            .object("u", 1)
            .object("c", 1)
            .morphism_int("j", "c", "u", &[&[0]])
            .morphism_int("z", "c", "c", &[&[0]])
            .compose("j", "z", "j")
            .compose("z", "z", "z")
    };
    let fiber = RawPresentation::new(f).object("c", 1).morphism_int("z", "c", "c", &[&[0]]).compose("z", "z", "z");
    let iota = RawFunctor::new("iota", f, e).map_object("c", "c").map_morphism("z", "z");
    let pi = RawFunctor::new("pi", e, b)
        .map_object("u", "u")
        .map_object("c", "c")
        .map_morphism("j", "j")
        .map_morphism("z", "z");
    bundle(name, description, [fiber, with_line(e), with_line(b)], iota, pi, (0, 1, 1), false)
}

fn trivial_bundle() -> CorpusEntry {
    let line = |n: &str, obj: &str, pt: &str| {
        RawPresentation::new(n).object(obj, 1).object(pt, 0).morphism(&format!("z-{pt}"), pt, obj, vec![])
    };
    let base_line = diagram(&line("base-line", "u", "o"));
    let fiber = line("fiber-line", "y", "d");
    let point = line("point", "y", "d")
        .morphism("k", "y", "d", vec![])
        .morphism_int("e", "y", "y", &[&[0]])
        .compose("k", "z-d", "id:d")
        .compose("z-d", "k", "e")
        .compose("e", "e", "e")
        .compose("e", "z-d", "z-d")
        .compose("k", "e", "k");
    let total = product_diagram(&base_line, &diagram(&fiber)).expect("valid product");
    let base = product_diagram(&base_line, &diagram(&point)).expect("valid product");
    let iota = RawFunctor::new("iota", "fiber-line", total.name())
        .map_object("y", "o_x_y")
        .map_object("d", "o_x_d")
        .map_morphism("z-d", "id-o_x_z-d");
    let mut pi = RawFunctor::new("pi", total.name(), base.name());
    for o in total.category().object_names() {
        pi = pi.map_object(o, o);
    }
    for m in total.category().declared_morphisms() {
        let name = total.category().name_of(m);
        pi = pi.map_morphism(name, name);
    }
    bundle("trivial-bundle-1x1", TRIVIAL, [fiber, total.to_raw(), base.to_raw()], iota, pi, (1, 2, 1), false)
}
