use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tangent::corpus::{corpus_entries, corpus_entry, CorpusEntry, BUNDLE_FILES};
use tangent::format::{parse_functor, parse_presentation, write_functor, write_presentation};
use tangent::run;
use tangent_core::{tangent_space, TangentDiagram};

fn emit(entry: &CorpusEntry, dir: &Path) -> PathBuf {
    let out = dir.join(&entry.name);
    let o = run(["tangent", "corpus", "emit", &entry.name, "-o", out.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    out
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["tangent", "--json"];
    full.extend_from_slice(args);
    let o = run(full);
    assert!(o.stderr.is_empty(), "{}", o.stderr);
    (o.code, serde_json::from_str(&o.stdout).unwrap())
}

#[test]
fn corpus_texts_are_canonical_and_round_trip() {
    for entry in corpus_entries() {
        for f in &entry.files {
            if f.text.starts_with("functor") {
                let raw = parse_functor(&f.text).unwrap();
                assert_eq!(write_functor(&raw), f.text, "{}", f.name);
            } else {
                let raw = parse_presentation(&f.text).unwrap();
                assert_eq!(write_presentation(&raw), f.text, "{}", f.name);
                let d = TangentDiagram::from_raw(&raw).unwrap();
                assert_eq!(write_presentation(&d.to_raw()), f.text, "{}", f.name);
            }
        }
    }
}

#[test]
fn golden_facts_reproduce_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    for entry in corpus_entries() {
        let out = emit(&entry, dir.path());
        for facts in &entry.spaces {
            let file = out.join(&facts.file);
            let file = file.to_str().unwrap();
            let (code, t) = json(&["tangent", file]);
            assert_eq!(code, 0);
            assert_eq!(t["dimension"], facts.dimension, "{}/{}", entry.name, facts.file);
            let (code, f) = json(&["filtered", file]);
            assert_eq!(f["weakly_filtered"], facts.weakly_filtered, "{}", entry.name);
            assert_eq!(f["filtered"], facts.filtered, "{}", entry.name);
            assert_eq!(code, if facts.filtered { 0 } else { 1 });
            let (code, r) = json(&["onerep", file]);
            assert_eq!(r["one_representable"], facts.one_representable, "{}", entry.name);
            assert_eq!(code, if facts.one_representable { 0 } else { 1 });
            assert_eq!(json(&["validate", file]).0, 0);
        }
        if let Some(b) = &entry.bundle {
            let p: Vec<String> = BUNDLE_FILES.iter().map(|f| out.join(f).to_str().unwrap().to_string()).collect();
            let (code, r) =
                json(&["bundle", "--fiber", &p[0], "--total", &p[1], "--base", &p[2], "--iota", &p[3], "--pi", &p[4]]);
            assert_eq!(code, 0);
            assert_eq!(r["exactness"], b.exactness);
            let dims = &r["dimensions"];
            assert_eq!(
                (dims["fiber"].clone(), dims["total"].clone(), dims["base"].clone()),
                (b.dims.0.into(), b.dims.1.into(), b.dims.2.into())
            );
        }
    }
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_tangent");
    let orbifold = emit(&corpus_entry("orbifold-halfline-O1").unwrap(), dir.path()).join("orbifold-halfline-O1.tan");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();

    let o = status(&["filtered", orbifold.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("parallel pair (id:q, s)"));
    assert_eq!(status(&["zero", orbifold.to_str().unwrap(), "--vec", "q:-3/2"]).status.code(), Some(0));
    assert_eq!(status(&["tangent", orbifold.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(status(&["tangent", "/nonexistent/file.tan"]).status.code(), Some(2));
    assert_eq!(status(&["zero", orbifold.to_str().unwrap(), "--vec", "q:0.5"]).status.code(), Some(2));
    assert_eq!(status(&["zero", orbifold.to_str().unwrap(), "--vec", "p:1"]).status.code(), Some(2));
    assert_eq!(status(&["zero", orbifold.to_str().unwrap(), "--vec", "q:1,2"]).status.code(), Some(2));
    assert_eq!(status(&["corpus", "emit", "no-such-entry"]).status.code(), Some(2));
    assert_eq!(status(&["bogus"]).status.code(), Some(2));
    assert_eq!(status(&["--help"]).status.code(), Some(0));

    let cross = emit(&corpus_entry("axes-cross").unwrap(), dir.path()).join("axes-cross.tan");
    assert_eq!(status(&["zero", cross.to_str().unwrap(), "--vec", "a1:1"]).status.code(), Some(1));
    assert_eq!(status(&["onerep", cross.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn input_errors_name_the_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tan");
    std::fs::write(&bad, "space s\nobject a dim 1\nmorphism f : a -> a jac [[1 2]]\n").unwrap();
    let o = run(["tangent", "validate", bad.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 3, column 29"), "{}", o.stderr);

    std::fs::write(&bad, "space s\nobject a dim 1\nobject b dim 1\nmorphism f : a -> b jac [[1,0]]\n").unwrap();
    let o = run(["tangent", "validate", bad.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("wrong shape"), "{}", o.stderr);

    std::fs::write(&bad, "space s\nobject a dim 1\nmorphism f : a -> a jac [[0]]\n").unwrap();
    let o = run(["tangent", "validate", bad.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("missing composite"), "{}", o.stderr);

    std::fs::write(&bad, "space s\nobject a dim 1\nobject u dim 0\nmorphism z : u -> a jac []\n").unwrap();
    assert_eq!(run(["tangent", "validate", bad.to_str().unwrap()]).code, 0);
}

#[test]
fn product_writes_a_valid_presentation() {
    let dir = tempfile::tempdir().unwrap();
    let orbifold = emit(&corpus_entry("orbifold-halfline-O1").unwrap(), dir.path()).join("orbifold-halfline-O1.tan");
    let plane = emit(&corpus_entry("euclidean-2").unwrap(), dir.path()).join("euclidean-2.tan");
    let out = dir.path().join("product.tan");
    let (code, r) =
        json(&["product", plane.to_str().unwrap(), orbifold.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["dimension"], 2);
    let d = TangentDiagram::from_raw(&parse_presentation(&std::fs::read_to_string(&out).unwrap()).unwrap()).unwrap();
    assert_eq!(d.name(), "euclidean-2_x_orbifold");
    assert_eq!(tangent_space(&d).dimension(), 2);
    let (code, f) = json(&["filtered", out.to_str().unwrap()]);
    assert_eq!((code, f["filtered"].clone()), (1, Value::Bool(false)));
}

/// Flattens a report into `path = value` pairs using the text conventions.
fn flatten_json(v: &Value, prefix: &str, out: &mut Vec<(String, String)>) {
    fn scalar(v: &Value) -> String {
        match v {
            Value::Null => "none".into(),
            Value::String(s) => s.clone(),
            Value::Array(items) => format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(", ")),
            other => other.to_string(),
        }
    }
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                let nested = matches!(x, Value::Object(_))
                    || matches!(x, Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()));
                if nested {
                    flatten_json(x, &path, out);
                } else {
                    out.push((path, scalar(x)));
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten_json(x, &format!("{prefix}.{i}"), out);
            }
        }
        other => out.push((prefix.into(), scalar(other))),
    }
}

fn flatten_text(text: &str) -> Vec<(String, String)> {
    let mut out = Vec::new();
    // (indent of children, path prefix)
    let mut stack: Vec<(usize, String)> = vec![(0, String::new())];
    let mut items: HashMap<String, usize> = HashMap::new();
    for line in text.lines() {
        let mut indent = line.len() - line.trim_start().len();
        let mut body = line.trim_start();
        if let Some(rest) = body.strip_prefix("- ") {
            while stack.last().unwrap().0 > indent {
                stack.pop();
            }
            let list = stack.last().unwrap().1.clone();
            let i = items.entry(list.clone()).or_default();
            stack.push((indent + 2, format!("{list}.{i}")));
            *i += 1;
            indent += 2;
            body = rest;
        }
        while stack.last().unwrap().0 > indent {
            stack.pop();
        }
        let prefix = stack.last().unwrap().1.clone();
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        if let Some(key) = body.strip_suffix(':') {
            stack.push((indent + 2, join(key)));
        } else {
            let (k, v) = body.split_once(": ").expect("key: value");
            out.push((join(k), v.to_string()));
        }
    }
    out
}

#[test]
fn json_and_text_reports_carry_the_same_fields() {
    let dir = tempfile::tempdir().unwrap();
    let mut invocations: Vec<Vec<String>> = vec![vec!["corpus".into(), "list".into()]];
    for entry in corpus_entries() {
        let out = emit(&entry, dir.path());
        for facts in &entry.spaces {
            let file = out.join(&facts.file).to_str().unwrap().to_string();
            for cmd in ["validate", "tangent", "filtered", "onerep"] {
                invocations.push(vec![cmd.into(), file.clone()]);
            }
        }
        if entry.bundle.is_some() {
            let mut args = vec!["bundle".to_string()];
            for (flag, f) in ["--fiber", "--total", "--base", "--iota", "--pi"].iter().zip(BUNDLE_FILES) {
                args.push(flag.to_string());
                args.push(out.join(f).to_str().unwrap().to_string());
            }
            invocations.push(args);
        }
    }
    let orbifold = dir.path().join("orbifold-halfline-O1/orbifold-halfline-O1.tan").to_str().unwrap().to_string();
    let cross = dir.path().join("axes-cross/axes-cross.tan").to_str().unwrap().to_string();
    for (file, v) in [(&orbifold, "q:1"), (&cross, "a1:1;a2:2"), (&orbifold, "q:2;q:-2")] {
        invocations.push(vec!["zero".into(), file.clone(), "--vec".into(), v.into()]);
        invocations.push(vec!["witness".into(), file.clone(), "--vec".into(), v.into()]);
    }
    for args in invocations {
        let text = run(std::iter::once("tangent".to_string()).chain(args.clone()));
        let js = run(["tangent".to_string(), "--json".to_string()].into_iter().chain(args.clone()));
        assert_eq!(text.code, js.code, "{args:?}");
        let mut expected = Vec::new();
        flatten_json(&serde_json::from_str(&js.stdout).unwrap(), "", &mut expected);
        assert_eq!(flatten_text(&text.stdout), expected, "{args:?}");
    }
}

#[test]
fn stable_json_field_names() {
    let dir = tempfile::tempdir().unwrap();
    let out = emit(&corpus_entry("irrational-torus-bundle").unwrap(), dir.path());
    let base = out.join("base.tan");
    let (_, t) = json(&["tangent", base.to_str().unwrap()]);
    assert_eq!(t["dimension"], 1);
    let (_, f) = json(&["filtered", base.to_str().unwrap()]);
    assert!(f.get("weakly_filtered").is_some() && f.get("filtered").is_some() && f.get("witness").is_some());
    let (_, r) = json(&["onerep", base.to_str().unwrap()]);
    assert_eq!(r["one_representable"], true);
    assert_eq!(r["witness"], "u");
}

#[test]
fn corpus_emit_to_stdout() {
    let o = run(["tangent", "corpus", "emit", "euclidean-1"]);
    assert_eq!(o.stdout, "space euclidean-1\nobject u dim 1\n");
    let o = run(["tangent", "corpus", "emit", "circle-bundle"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.matches("# file: ").count(), 5);
}
