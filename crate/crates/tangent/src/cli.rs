//! Command dispatch. [`run`] is the whole program minus process IO.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use tangent_core::{
    is_zero, product_diagram, single_plot_witness, tangent_space, verify_bundle, BundlePresentation, SequenceKind,
    TangentDiagram, Verdict, ViolationKind, ZeroDecision,
};

use crate::corpus::{corpus_entry, corpus_list};
use crate::format::{self, write_matrix, write_presentation, write_vector, VectorDisplay};
use crate::report::{render_json, render_text};

/// Printed with every bundle report.
pub const BUNDLE_NOTE: &str = "the bundle hypothesis is not checked; a violation means the presentation is \
not a faithful model of a bundle, not that exactness fails";

#[derive(Parser, Debug)]
#[command(name = "tangent", version, about = "Exact internal tangent spaces of finite germ-category presentations")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a presentation and list its monomorphisms.
    Validate { file: PathBuf },
    /// Compute the tangent space and the projection of every plot.
    Tangent { file: PathBuf },
    /// Decide weak filteredness and filteredness (exit 1 if not filtered).
    Filtered { file: PathBuf },
    /// Decide 1-representability (exit 1 if not).
    Onerep { file: PathBuf },
    /// Decide whether a formal vector is zero (exit 1 if nonzero).
    Zero {
        file: PathBuf,
        /// Terms as `oid:r,r,...;oid:...`.
        #[arg(long = "vec", allow_hyphen_values = true)]
        vector: String,
    },
    /// Search for a single plot through which a vector vanishes (exit 1 if none).
    Witness {
        file: PathBuf,
        #[arg(long = "vec", allow_hyphen_values = true)]
        vector: String,
    },
    /// Write the product of two presentations.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Check exactness of the tangent sequence of a bundle (exit 1 on a violation).
    Bundle {
        #[arg(long)]
        fiber: PathBuf,
        #[arg(long)]
        total: PathBuf,
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        iota: PathBuf,
        #[arg(long)]
        pi: PathBuf,
        /// Report the sequence as that of a group quotient G -> G/H.
        #[arg(long)]
        group_quotient: bool,
    },
    /// Built-in example presentations.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusCommand {
    List,
    /// Print an entry, or write its files into a directory.
    Emit {
        name: String,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Input errors; all exit with code 2.
#[derive(Debug, thiserror::Error)]
enum Error {
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("{0}: {1}")]
    Input(String, String),
}

fn input(path: &Path, e: impl ToString) -> Error {
    Error::Input(path.display().to_string(), e.to_string())
}

enum Output {
    Report(Value, i32),
    Raw(String),
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(Output::Report(v, code)) => {
            let stdout = if cli.json { render_json(&v) } else { render_text(&v) };
            Outcome { code, stdout, stderr: String::new() }
        }
        Ok(Output::Raw(text)) => Outcome { code: 0, stdout: text, stderr: String::new() },
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(path.display().to_string(), e))
}

fn load_space(path: &Path) -> Result<TangentDiagram, Error> {
    let raw = format::parse_presentation(&read(path)?).map_err(|e| input(path, e))?;
    TangentDiagram::from_raw(&raw).map_err(|e| input(path, e))
}

fn load_functor(path: &Path) -> Result<tangent_core::RawFunctor, Error> {
    format::parse_functor(&read(path)?).map_err(|e| input(path, e))
}

fn report(command: &str, space: &TangentDiagram) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), command.into());
    m.insert("space".into(), space.name().into());
    m
}

fn code(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

fn dispatch(command: &Command) -> Result<Output, Error> {
    match command {
        Command::Validate { file } => {
            let d = load_space(file)?;
            let cat = d.category();
            let mut m = report("validate", &d);
            m.insert("valid".into(), true.into());
            m.insert("objects".into(), cat.object_count().into());
            m.insert("morphisms".into(), cat.declared_morphisms().count().into());
            m.insert("composites".into(), cat.composition_table().count().into());
            let separated: Vec<&str> = d.separated().iter().map(|&o| cat.object_name(o)).collect();
            m.insert("separated".into(), json!(separated));
            let monos: Vec<&str> = cat.monomorphisms().into_iter().map(|f| cat.name_of(f)).collect();
            m.insert("monomorphisms".into(), json!(monos));
            Ok(Output::Report(m.into(), 0))
        }
        Command::Tangent { file } => {
            let d = load_space(file)?;
            let t = tangent_space(&d);
            let cat = d.category();
            let mut m = report("tangent", &d);
            m.insert("dimension".into(), t.dimension().into());
            m.insert("summand_dimension".into(), d.total_dim().into());
            m.insert("relation_rank".into(), t.relation_rank().into());
            let projections: Map<String, Value> = cat
                .object_ids()
                .map(|o| (cat.object_name(o).to_string(), write_matrix(t.projection(o)).into()))
                .collect();
            m.insert("projections".into(), projections.into());
            Ok(Output::Report(m.into(), 0))
        }
        Command::Filtered { file } => {
            let d = load_space(file)?;
            let cat = d.category();
            let r = cat.filteredness();
            let mut m = report("filtered", &d);
            m.insert("weakly_filtered".into(), r.weakly_filtered.into());
            m.insert("filtered".into(), r.filtered.into());
            m.insert("witness".into(), r.failure_witness.map(|w| w.display(cat).to_string()).into());
            if !d.separated().is_empty() {
                let g = cat.check_injective_generation(d.separated()).map_err(|e| input(file, e))?;
                let separated: Vec<&str> = d.separated().iter().map(|&o| cat.object_name(o)).collect();
                m.insert(
                    "injective_generation".into(),
                    json!({
                        "separated": separated,
                        "injectively_generated": g.injectively_generated,
                        "derived_filtered": g.derived_filtered,
                        "uncovered": g.uncovered.map(|o| cat.object_name(o)),
                    }),
                );
            }
            Ok(Output::Report(m.into(), code(r.filtered)))
        }
        Command::Onerep { file } => {
            let d = load_space(file)?;
            let t = tangent_space(&d);
            let witness = t.one_representing_object();
            let mut m = report("onerep", &d);
            m.insert("dimension".into(), t.dimension().into());
            m.insert("one_representable".into(), witness.is_some().into());
            m.insert("witness".into(), witness.map(|o| d.category().object_name(o)).into());
            Ok(Output::Report(m.into(), code(witness.is_some())))
        }
        Command::Zero { file, vector } => {
            let d = load_space(file)?;
            let w = format::parse_vector(vector).map_err(|e| Error::Input("--vec".into(), e.to_string()))?;
            let decision = is_zero(&d, &w).map_err(|e| Error::Input("--vec".into(), e.to_string()))?;
            let cat = d.category();
            let mut m = report("zero", &d);
            m.insert("vector".into(), VectorDisplay(&w).to_string().into());
            m.insert("zero".into(), decision.is_zero().into());
            match &decision {
                ZeroDecision::Zero(dec) => {
                    let terms: Vec<Value> = dec
                        .summands
                        .iter()
                        .map(|(f, v)| {
                            json!({
                                "morphism": cat.name_of(*f),
                                "source": cat.object_name(cat.src(*f)),
                                "target": cat.object_name(cat.dst(*f)),
                                "vector": write_vector(v),
                            })
                        })
                        .collect();
                    m.insert("decomposition".into(), terms.into());
                }
                ZeroDecision::Nonzero(class) => {
                    m.insert("class".into(), write_vector(class).into());
                }
            }
            Ok(Output::Report(m.into(), code(decision.is_zero())))
        }
        Command::Witness { file, vector } => {
            let d = load_space(file)?;
            let w = format::parse_vector(vector).map_err(|e| Error::Input("--vec".into(), e.to_string()))?;
            let zero = is_zero(&d, &w).map_err(|e| Error::Input("--vec".into(), e.to_string()))?.is_zero();
            let found = single_plot_witness(&d, &w).map_err(|e| Error::Input("--vec".into(), e.to_string()))?;
            let cat = d.category();
            let terms = w.normalize(&d).expect("checked above");
            let mut m = report("witness", &d);
            m.insert("vector".into(), VectorDisplay(&w).to_string().into());
            m.insert("filtered".into(), cat.is_filtered().into());
            m.insert("zero".into(), zero.into());
            let witness = found.as_ref().map(|s| {
                let germs: Vec<Value> = terms
                    .iter()
                    .zip(&s.germs)
                    .map(|((o, _), f)| json!({ "object": cat.object_name(*o), "germ": cat.name_of(*f) }))
                    .collect();
                json!({ "target": cat.object_name(s.target), "germs": germs })
            });
            m.insert("witness".into(), witness.into());
            Ok(Output::Report(m.into(), code(found.is_some())))
        }
        Command::Product { a, b, output } => {
            let (da, db) = (load_space(a)?, load_space(b)?);
            let p = product_diagram(&da, &db).map_err(|e| input(a, e))?;
            let text = write_presentation(&p.to_raw());
            let Some(out) = output else { return Ok(Output::Raw(text)) };
            fs::write(out, &text).map_err(|e| Error::Io(out.display().to_string(), e))?;
            let mut m = report("product", &p);
            m.insert("factors".into(), json!([da.name(), db.name()]));
            m.insert("dimension".into(), tangent_space(&p).dimension().into());
            m.insert(
                "factor_dimensions".into(),
                json!([tangent_space(&da).dimension(), tangent_space(&db).dimension()]),
            );
            m.insert("objects".into(), p.category().object_count().into());
            m.insert("morphisms".into(), p.category().declared_morphisms().count().into());
            m.insert("output".into(), out.display().to_string().into());
            Ok(Output::Report(m.into(), 0))
        }
        Command::Bundle { fiber, total, base, iota, pi, group_quotient } => {
            let (f, e, b) = (load_space(fiber)?, load_space(total)?, load_space(base)?);
            let (raw_iota, raw_pi) = (load_functor(iota)?, load_functor(pi)?);
            let p = BundlePresentation::new(f, e, b, &raw_iota, &raw_pi).map_err(|e| input(iota, e))?;
            let mut r = verify_bundle(&p).map_err(|e| input(pi, e))?;
            if *group_quotient {
                r.kind = SequenceKind::GroupQuotient;
            }
            let (exactness, violation) = match &r.verdict {
                Verdict::ExactThreeTerm => ("ExactThreeTerm", Value::Null),
                Verdict::ExactFourTerm => ("ExactFourTerm", Value::Null),
                Verdict::Violation { kind, witness } => {
                    let kind = match kind {
                        ViolationKind::PiNotSurjective => "pi_not_surjective",
                        ViolationKind::KernelNotImage => "kernel_not_image",
                        ViolationKind::IotaNotInjective => "iota_not_injective",
                    };
                    ("Violation", json!({ "kind": kind, "witness": write_vector(witness) }))
                }
            };
            let sequence = match r.kind {
                SequenceKind::Bundle => "bundle",
                SequenceKind::GroupQuotient => "group-quotient",
            };
            let v = json!({
                "command": "bundle",
                "sequence": sequence,
                "fiber": p.fiber.name(),
                "total": p.total.name(),
                "base": p.base.name(),
                "dimensions": { "fiber": r.dims.0, "total": r.dims.1, "base": r.dims.2 },
                "pi_surjective": r.pi_surjective,
                "image_iota_equals_kernel_pi": r.image_iota_equals_kernel_pi,
                "iota_injective": r.iota_injective,
                "filtered": { "total": r.filtered.0, "base": r.filtered.1 },
                "exactness": exactness,
                "violation": violation,
                "iota_map": write_matrix(&r.iota_map),
                "pi_map": write_matrix(&r.pi_map),
                "note": BUNDLE_NOTE,
            });
            Ok(Output::Report(v, code(violation.is_null())))
        }
        Command::Corpus { command: CorpusCommand::List } => {
            let entries: Vec<Value> =
                corpus_list().into_iter().map(|(n, d)| json!({ "name": n, "description": d })).collect();
            Ok(Output::Report(json!({ "command": "corpus list", "entries": entries }), 0))
        }
        Command::Corpus { command: CorpusCommand::Emit { name, output } } => {
            let entry = corpus_entry(name).map_err(|e| Error::Input("corpus".into(), e.to_string()))?;
            let Some(dir) = output else {
                if let [file] = entry.files.as_slice() {
                    return Ok(Output::Raw(file.text.clone()));
                }
                let text = entry.files.iter().map(|f| format!("# file: {}\n{}", f.name, f.text)).collect();
                return Ok(Output::Raw(text));
            };
            fs::create_dir_all(dir).map_err(|e| Error::Io(dir.display().to_string(), e))?;
            let mut written = Vec::new();
            for f in &entry.files {
                let path = dir.join(&f.name);
                fs::write(&path, &f.text).map_err(|e| Error::Io(path.display().to_string(), e))?;
                written.push(path.display().to_string());
            }
            Ok(Output::Report(json!({ "command": "corpus emit", "entry": entry.name, "files": written }), 0))
        }
    }
}
