//! Deterministic plain-text rendering of models and artifacts.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::cyclo::{CongruenceGuard, GenValue};
use crate::induction::{GreenTable, MultiplicityMatrix};
use crate::model::Model;
use crate::pipeline::Artifacts;
use crate::table::GenericGroup;

/// Rows padded to common column widths, two spaces apart.
fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| {
            rows.iter()
                .filter_map(|r| r.get(j))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (j, cell) in r.iter().enumerate() {
            line.push_str(cell);
            if j + 1 < r.len() {
                let pad = widths[j] - cell.chars().count() + 2;
                line.extend(std::iter::repeat_n(' ', pad));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// The guard under which `v` is stated, when it narrows `ctx`.
fn cell(v: &GenValue, ctx: &CongruenceGuard) -> String {
    if ctx.implies(v.guard()) {
        v.to_string()
    } else {
        format!("{v} [{}]", v.guard())
    }
}

fn strings(v: &[String]) -> Vec<String> {
    v.to_vec()
}

fn group_text(out: &mut String, model: &Model, g: &GenericGroup) {
    let _ = writeln!(out, "== group {}", g.name);
    let _ = writeln!(out, "order {}", g.order);
    let _ = writeln!(out, "valid for {}", g.guard);
    // One block per distinct class guard, in order of first appearance.
    let mut blocks: Vec<(CongruenceGuard, Vec<usize>)> = Vec::new();
    for (i, c) in g.classes.iter().enumerate() {
        let guard = g
            .guard
            .intersect(&c.guard)
            .unwrap_or_else(|_| c.guard.clone());
        match blocks.iter_mut().find(|(b, _)| *b == guard) {
            Some((_, idx)) => idx.push(i),
            None => blocks.push((guard, vec![i])),
        }
    }
    for (guard, idx) in &blocks {
        out.push('\n');
        if *guard != g.guard {
            let _ = writeln!(out, "-- valid for {guard}");
        }
        let mut rows = vec![
            std::iter::once("class".to_string())
                .chain(idx.iter().map(|&i| g.classes[i].name.clone()))
                .collect::<Vec<_>>(),
            std::iter::once("centralizer".to_string())
                .chain(
                    idx.iter()
                        .map(|&i| cell(&g.classes[i].centralizer_order, guard)),
                )
                .collect(),
        ];
        for ch in model.characters_of(&g.name) {
            if !idx
                .iter()
                .any(|&i| ch.function.values.contains_key(&g.classes[i].name))
            {
                continue;
            }
            let mut row = vec![ch.name().to_string()];
            for &i in idx {
                row.push(match ch.function.values.get(&g.classes[i].name) {
                    Some(v) => cell(v, guard),
                    None => ".".into(),
                });
            }
            rows.push(row);
        }
        out.push_str(&aligned(&rows));
    }
    let parts: Vec<String> = model
        .characters_of(&g.name)
        .filter(|c| c.function.values.is_empty())
        .map(|c| c.name().to_string())
        .collect();
    if !parts.is_empty() {
        let _ = writeln!(out, "\nno values stored for {}", parts.join(", "));
    }
}

fn green_text(out: &mut String, t: &GreenTable) {
    let _ = writeln!(out, "== Green function {}", t.key());
    let ctx = t
        .weights
        .first()
        .map(|v| v.guard().clone())
        .unwrap_or_default();
    if !ctx.is_trivial() {
        let _ = writeln!(out, "valid for {ctx}");
    }
    let mut rows = vec![std::iter::once(String::new())
        .chain(strings(&t.v_classes))
        .collect::<Vec<_>>()];
    for (u, r) in t.u_classes.iter().zip(&t.q) {
        rows.push(
            std::iter::once(u.clone())
                .chain(r.iter().map(|v| cell(v, &ctx)))
                .collect(),
        );
    }
    rows.push(
        std::iter::once("weight".to_string())
            .chain(t.weights.iter().map(|v| cell(v, &ctx)))
            .collect(),
    );
    out.push_str(&aligned(&rows));
}

fn mult_text(out: &mut String, m: &MultiplicityMatrix) {
    let _ = writeln!(out, "== multiplicities {}", m.key());
    let mut rows = vec![std::iter::once(String::new())
        .chain(strings(&m.cols))
        .collect::<Vec<_>>()];
    for (psi, r) in m.rows.iter().zip(&m.entries) {
        rows.push(
            std::iter::once(psi.clone())
                .chain(r.iter().map(i64::to_string))
                .collect(),
        );
    }
    out.push_str(&aligned(&rows));
}

pub fn model_text(model: &Model) -> String {
    let mut out = String::new();
    let mut sections: Vec<String> = Vec::new();
    for g in &model.groups {
        let mut s = String::new();
        group_text(&mut s, model, g);
        sections.push(s);
    }
    for r in &model.registries {
        let mut s = String::new();
        let _ = writeln!(s, "== Deligne-Lusztig data {}", r.group);
        if let Some(n) = &r.torus_count {
            let _ = writeln!(s, "tori {n}");
        }
        let mut rows = vec![vec![
            "pair".into(),
            "|T|".into(),
            "orbit".into(),
            "constituents".into(),
        ]];
        for e in &r.entries {
            let cons: Vec<String> = e
                .multiplicities
                .iter()
                .filter(|(_, &k)| k != 0)
                .map(|(n, k)| format!("{k}*{n}"))
                .collect();
            rows.push(vec![
                e.label.clone(),
                e.torus_order.to_string(),
                e.orbit_size.to_string(),
                cons.join(" "),
            ]);
        }
        s.push_str(&aligned(&rows));
        sections.push(s);
    }
    for t in &model.green_tables {
        let mut s = String::new();
        green_text(&mut s, t);
        sections.push(s);
    }
    for m in &model.multiplicities {
        let mut s = String::new();
        mult_text(&mut s, m);
        sections.push(s);
    }
    for d in &model.split_data {
        let mut s = String::new();
        let _ = writeln!(s, "== split class {} in {}", d.parent, d.group);
        let ctx = model
            .group(&d.group)
            .map(|g| g.guard.clone())
            .unwrap_or_default();
        let mut rows = vec![std::iter::once(String::new())
            .chain(strings(&d.chi_functions))
            .collect::<Vec<_>>()];
        for (c, r) in d.children.iter().zip(&d.values) {
            rows.push(
                std::iter::once(c.clone())
                    .chain(r.iter().map(|v| cell(v, &ctx)))
                    .collect(),
            );
        }
        s.push_str(&aligned(&rows));
        let _ = writeln!(s, "-- indicator coefficients");
        let rows: Vec<Vec<String>> = d
            .children
            .iter()
            .zip(&d.coefficients)
            .map(|(c, r)| {
                std::iter::once(c.clone())
                    .chain(r.iter().map(ToString::to_string))
                    .collect()
            })
            .collect();
        s.push_str(&aligned(&rows));
        for (chi, exp) in &d.expansions {
            let terms: Vec<String> = exp.iter().map(|(n, c)| format!("({c})*{n}")).collect();
            let _ = writeln!(s, "{chi} = {}", terms.join(" + "));
        }
        sections.push(s);
    }
    for o in &model.oracles {
        let mut s = String::new();
        let _ = writeln!(s, "== {} at q = {} ({})", o.group, o.q, o.source);
        let mut rows = vec![std::iter::once(String::new())
            .chain(strings(&o.classes))
            .collect::<Vec<_>>()];
        for (k, r) in &o.rows {
            rows.push(
                std::iter::once(k.clone())
                    .chain(r.iter().cloned())
                    .collect(),
            );
        }
        s.push_str(&aligned(&rows));
        sections.push(s);
    }
    out.push_str(&sections.join("\n"));
    out
}

pub fn artifacts_text(a: &Artifacts) -> String {
    let mut sections: Vec<String> = Vec::new();
    sections.push(format!("== plan {}\n", a.plan));
    for t in &a.green_tables {
        let mut s = String::new();
        green_text(&mut s, t);
        sections.push(s);
    }
    // Unipotent values grouped by group, one row per character.
    let mut by_group: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, f) in a.unipotent_values.iter().enumerate() {
        by_group.entry(f.group.as_str()).or_default().push(i);
    }
    for (g, idx) in by_group {
        let mut s = String::new();
        let _ = writeln!(s, "== unipotent values {g}");
        let mut classes: Vec<String> = Vec::new();
        for &i in &idx {
            for c in a.unipotent_values[i].values.keys() {
                if !classes.contains(c) {
                    classes.push(c.clone());
                }
            }
        }
        let ctx = idx
            .iter()
            .find_map(|&i| a.unipotent_values[i].values.values().next())
            .map(|v| v.guard().clone())
            .unwrap_or_default();
        if !ctx.is_trivial() {
            let _ = writeln!(s, "valid for {ctx}");
        }
        let mut rows = vec![std::iter::once(String::new())
            .chain(classes.iter().cloned())
            .collect::<Vec<_>>()];
        for &i in &idx {
            let f = &a.unipotent_values[i];
            let mut row = vec![f.label().to_string()];
            for c in &classes {
                row.push(
                    f.values
                        .get(c)
                        .map(|v| cell(v, &ctx))
                        .unwrap_or_else(|| ".".into()),
                );
            }
            rows.push(row);
        }
        s.push_str(&aligned(&rows));
        sections.push(s);
    }
    for m in &a.multiplicities {
        let mut s = String::new();
        mult_text(&mut s, m);
        sections.push(s);
    }
    for e in &a.evaluations {
        let mut s = String::new();
        let _ = writeln!(s, "== {} in {} by {}", e.character, e.group, e.method);
        let ctx = e
            .values
            .first()
            .map(|v| v.guard().clone())
            .unwrap_or_default();
        if !ctx.is_trivial() {
            let _ = writeln!(s, "valid for {ctx}");
        }
        let rows: Vec<Vec<String>> = e
            .classes
            .iter()
            .zip(&e.values)
            .map(|(c, v)| vec![c.clone(), cell(v, &ctx)])
            .collect();
        s.push_str(&aligned(&rows));
        sections.push(s);
    }
    sections.join("\n")
}

/// Either kind of JSON document the tools read.
#[derive(Clone, Debug)]
pub enum Document {
    Model(Model),
    Artifacts(Artifacts),
}

#[derive(serde::Deserialize)]
struct Header {
    #[serde(default)]
    format: Option<String>,
}

/// Reads a model (validated) or an artifacts file, told apart by `format`.
pub fn read_document(text: &str) -> crate::Result<Document> {
    let header: Header = serde_json::from_str(text).map_err(|e| crate::model::json_error(&e))?;
    if header.format.as_deref() == Some(crate::pipeline::ARTIFACT_FORMAT) {
        Artifacts::from_json(text).map(Document::Artifacts)
    } else {
        crate::model::ingest_str(text).map(Document::Model)
    }
}

impl Document {
    pub fn to_json(&self) -> String {
        match self {
            Document::Model(m) => m.to_json(),
            Document::Artifacts(a) => a.to_json(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Document::Model(m) => model_text(m),
            Document::Artifacts(a) => artifacts_text(a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_are_aligned_and_trimmed() {
        let rows = vec![
            vec!["a".to_string(), "bbb".to_string(), "c".to_string()],
            vec!["dddd".to_string(), "e".to_string(), String::new()],
        ];
        assert_eq!(aligned(&rows), "a     bbb  c\ndddd  e\n");
    }

    #[test]
    fn narrower_guards_are_shown() {
        let even = CongruenceGuard::even();
        let v: GenValue = "q".parse().unwrap();
        assert_eq!(cell(&v.clone().set_guard(even.clone()), &even), "q");
        let narrow = even
            .intersect(&CongruenceGuard::divides_q_minus_one(3))
            .unwrap();
        assert_eq!(cell(&v.set_guard(narrow), &even), "q [2|q, 3|q-1]");
    }
}
