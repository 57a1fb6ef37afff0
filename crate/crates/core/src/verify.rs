//! Consistency checks over a whole model.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use crate::cyclo::{identity_equal, CongruenceGuard, CycNum, GenValue};
use crate::error::Result;
use crate::linalg::determinant;
use crate::model::Model;
use crate::split::table_inner;
use crate::table::{inner_product, ClassFunction, GenericGroup};

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Values of `q` to specialise at; oracles are compared at their own `q`
    /// when this is empty, and only at listed values otherwise.
    pub at: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn record(&mut self, name: impl Into<String>, outcome: Result<String>, failures: Vec<String>) {
        let (passed, detail) = match outcome {
            Err(e) => (false, e.to_string()),
            Ok(summary) if failures.is_empty() => (true, summary),
            Ok(_) => (false, failures.join("; ")),
        };
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

pub fn verify(model: &Model, opts: &VerifyOptions) -> VerifyReport {
    let mut rep = VerifyReport::default();
    if model.is_empty() {
        return rep;
    }
    let issues = model.validate();
    let failures = issues.issues.iter().map(ToString::to_string).collect();
    rep.record("structure", Ok("no issues".into()), failures);

    for g in model.groups.iter().filter(|g| g.complete) {
        let mut bad = Vec::new();
        let out = orthogonality(model, g, &mut bad);
        rep.record(format!("orthogonality {}", g.name), out, bad);
    }
    for d in &model.split_data {
        let mut bad = Vec::new();
        let out = split_suite(model, &d.group, &d.parent, &mut bad);
        rep.record(format!("split {}/{}", d.group, d.parent), out, bad);
    }
    for l in psi_groups(model) {
        let mut bad = Vec::new();
        let out = psi_determinant(model, &l, &opts.at, &mut bad);
        rep.record(format!("psi-determinant {l}"), out, bad);
    }
    if !opts.at.is_empty() {
        let mut bad = Vec::new();
        let out = integrality(model, &opts.at, &mut bad);
        rep.record("integrality", out, bad);
    }
    for o in &model.oracles {
        if !opts.at.is_empty() && !opts.at.contains(&o.q) {
            continue;
        }
        let mut bad = Vec::new();
        let out = oracle(model, o, &mut bad);
        rep.record(format!("oracle {} q={}", o.group, o.q), out, bad);
    }
    for g in &model.groups {
        let mut bad = Vec::new();
        let out = coverage(model, g, &mut bad);
        rep.record(format!("guard coverage {}", g.name), out, bad);
    }
    rep
}

fn total_characters<'a>(model: &'a Model, g: &'a GenericGroup) -> Vec<&'a ClassFunction> {
    let all = g.class_names();
    model
        .characters_of(&g.name)
        .map(|c| &c.function)
        .filter(|f| f.covers(&all))
        .collect()
}

fn orthogonality(model: &Model, g: &GenericGroup, bad: &mut Vec<String>) -> Result<String> {
    let chars = total_characters(model, g);
    let mut pairs = 0;
    for (i, a) in chars.iter().enumerate() {
        for b in &chars[i..] {
            let ip = inner_product(g, a, b, None)?.value;
            let expect = GenValue::from_int(i64::from(a.name == b.name));
            pairs += 1;
            if !identity_equal(&ip, &expect)? {
                bad.push(format!("<{}, {}> = {ip}", a.label(), b.label()));
            }
        }
    }
    Ok(format!("{} characters, {pairs} pairs", chars.len()))
}

/// `Σ ε_{C_i} = k·χ_0` on the children, and `⟨χ_a, χ_b⟩` computed both from
/// the value table and from the expansions wherever both exist.
fn split_suite(model: &Model, group: &str, parent: &str, bad: &mut Vec<String>) -> Result<String> {
    let d = model.split(group, parent)?;
    let g = model.group(group)?;
    let k = d.k();
    for (l, x) in d.indicator_sum()?.iter().enumerate() {
        let expect = d.values[l][0].scale_int(k as i64);
        if !identity_equal(x, &expect)? {
            bad.push(format!(
                "indicator sum at {} is {x}, expected {expect}",
                d.children[l]
            ));
        }
    }
    let mut routes = 0;
    for a in 0..k {
        for b in a..k {
            let table = table_inner(d, g, a, b)?;
            let (na, nb) = (&d.chi_functions[a], &d.chi_functions[b]);
            if d.expansions.contains_key(na) && d.expansions.contains_key(nb) {
                let exp = d.expansion_inner(na, nb)?;
                routes += 1;
                if !identity_equal(&table, &exp)? {
                    bad.push(format!(
                        "<{na}, {nb}>: table gives {table}, expansions give {exp}"
                    ));
                }
            }
        }
    }
    Ok(format!("k = {k}, {routes} pairs checked by both routes"))
}

/// Groups appearing as `L` in a Green table or multiplicity matrix.
fn psi_groups(model: &Model) -> BTreeSet<String> {
    model
        .green_tables
        .iter()
        .map(|t| t.l_label.clone())
        .chain(model.multiplicities.iter().map(|m| m.l_label.clone()))
        .collect()
}

/// `det(ψ_i(v_j))` over the unipotent characters and classes of `l`; nonzero,
/// and equal at each listed `q` to the determinant of the specialised matrix.
fn psi_determinant(model: &Model, l: &str, at: &[i64], bad: &mut Vec<String>) -> Result<String> {
    let lg = model.group(l)?;
    let v = lg.unipotent_classes();
    let rows: Vec<&ClassFunction> = model
        .characters_of(l)
        .filter(|c| c.series == "1" && c.function.covers(&v))
        .map(|c| &c.function)
        .collect();
    if rows.len() != v.len() {
        bad.push(format!(
            "{} unipotent characters with values for {} unipotent classes",
            rows.len(),
            v.len()
        ));
        return Ok(String::new());
    }
    let m = rows
        .iter()
        .map(|f| {
            v.iter()
                .map(|c| f.get(c).cloned())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let det = determinant(&m)?;
    if det.is_zero() {
        bad.push("determinant vanishes".into());
    }
    let guard = m
        .iter()
        .flatten()
        .try_fold(lg.guard.clone(), |g, x| g.intersect(x.guard()))?;
    let mut tried = Vec::new();
    for &q in at.iter().filter(|&&q| guard.admits(q)) {
        let numeric = m
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.eval_at(q).map(GenValue::from_cyc))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let direct = determinant(&numeric)?
            .as_constant()
            .unwrap_or_else(CycNum::zero);
        let special = det.clone().set_guard(guard.clone()).eval_at(q)?;
        if direct != special {
            bad.push(format!(
                "at q = {q}: specialised matrix gives {direct}, determinant gives {special}"
            ));
        }
        tried.push(q.to_string());
    }
    let at_text = if tried.is_empty() {
        String::new()
    } else {
        format!(", matches at q = {}", tried.join(","))
    };
    Ok(format!("det = {det}{at_text}"))
}

fn is_positive_integer(c: &CycNum) -> bool {
    c.as_rational()
        .is_some_and(|r| r.is_integer() && r.numer() > &0.into())
}

/// Character values and Green function values are algebraic integers, and
/// class sizes are positive integers, wherever the guards admit `q`.
fn integrality(model: &Model, at: &[i64], bad: &mut Vec<String>) -> Result<String> {
    let mut count = 0usize;
    for &q in at {
        for g in model.groups.iter().filter(|g| g.guard.admits(q)) {
            for c in &g.classes {
                if !c.guard.admits(q) {
                    continue;
                }
                let size = g.class_size(&c.name)?;
                count += 1;
                match size.eval_at(q) {
                    Ok(s) if is_positive_integer(&s) => {}
                    Ok(s) => bad.push(format!("|{}/{}| = {s} at q = {q}", g.name, c.name)),
                    Err(e) => bad.push(format!("|{}/{}| at q = {q}: {e}", g.name, c.name)),
                }
            }
            for ch in model.characters_of(&g.name) {
                for (class, x) in &ch.function.values {
                    let admitted =
                        g.class(class).is_ok_and(|c| c.guard.admits(q)) && x.guard().admits(q);
                    if !admitted {
                        continue;
                    }
                    count += 1;
                    match x.eval_at(q) {
                        Ok(y) if y.is_algebraic_integer() => {}
                        Ok(y) => bad.push(format!(
                            "{}/{}({class}) = {y} at q = {q}",
                            g.name,
                            ch.name()
                        )),
                        Err(e) => {
                            bad.push(format!("{}/{}({class}) at q = {q}: {e}", g.name, ch.name()))
                        }
                    }
                }
            }
        }
        for t in &model.green_tables {
            let admitted = model.group(&t.g_label).is_ok_and(|g| g.guard.admits(q));
            for (u, row) in t.u_classes.iter().zip(&t.q) {
                for (v, x) in t.v_classes.iter().zip(row) {
                    if !admitted || !x.guard().admits(q) {
                        continue;
                    }
                    count += 1;
                    match x.eval_at(q) {
                        Ok(y) if y.is_algebraic_integer() => {}
                        Ok(y) => bad.push(format!("Q_{}({u}, {v}) = {y} at q = {q}", t.key())),
                        Err(e) => bad.push(format!("Q_{}({u}, {v}) at q = {q}: {e}", t.key())),
                    }
                }
            }
        }
    }
    Ok(format!("{count} specialisations"))
}

/// Rows of the model, specialised at the oracle's `q`, against the oracle's
/// rows as multisets. Complete groups must match exactly; fragments must be
/// contained in the oracle.
fn oracle(model: &Model, o: &crate::model::Oracle, bad: &mut Vec<String>) -> Result<String> {
    let g = model.group(&o.group)?;
    for c in &o.classes {
        g.class(c)?;
    }
    let mut expected: Vec<Vec<CycNum>> = o.parsed_rows()?.into_values().collect();
    let mut found = Vec::new();
    for ch in model.characters_of(&o.group) {
        if !ch.function.covers(&o.classes) {
            continue;
        }
        let row = o
            .classes
            .iter()
            .map(|c| ch.function.get(c)?.eval_at(o.q))
            .collect::<Result<Vec<_>>>()?;
        found.push((ch.name().to_string(), row));
    }
    let n = found.len();
    for (name, row) in found {
        match expected.iter().position(|r| *r == row) {
            Some(i) => {
                expected.swap_remove(i);
            }
            None => bad.push(format!("{name} specialises to a row the oracle lacks")),
        }
    }
    if g.complete && !expected.is_empty() {
        bad.push(format!(
            "{} oracle rows have no counterpart",
            expected.len()
        ));
    }
    Ok(format!("{n} rows match ({})", o.source))
}

/// Every split family has its datum, each congruence variant of the group
/// holds either all or none of a family's classes, and the characters of a
/// complete group are defined everywhere.
fn coverage(model: &Model, g: &GenericGroup, bad: &mut Vec<String>) -> Result<String> {
    let modulus = g
        .classes
        .iter()
        .fold(g.guard.modulus(), |m, c| m.lcm(&c.guard.modulus()));
    let variants: Vec<CongruenceGuard> = g.guard.refine(modulus);
    let mut lines = Vec::new();
    for v in &variants {
        let present: Vec<&str> = g
            .classes
            .iter()
            .filter(|c| c.guard.compatible(v))
            .map(|c| c.name.as_str())
            .collect();
        if present.is_empty() {
            bad.push(format!("no classes when {v}"));
        }
        lines.push(format!("{v}: {} classes", present.len()));
    }
    let parents: BTreeSet<&str> = g
        .classes
        .iter()
        .filter_map(|c| c.split_parent.as_deref())
        .collect();
    for p in &parents {
        if model.split(&g.name, p).is_err() {
            bad.push(format!("no split datum for {p}"));
        }
        let guards: BTreeSet<String> = g
            .classes
            .iter()
            .filter(|c| c.split_parent.as_deref() == Some(*p))
            .map(|c| c.guard.to_string())
            .collect();
        if guards.len() > 1 {
            bad.push(format!("classes split from {p} carry different guards"));
        }
    }
    if g.complete {
        let all = g.class_names();
        for ch in model.characters_of(&g.name) {
            if !ch.function.covers(&all) {
                bad.push(format!("{} is not defined on every class", ch.name()));
            }
        }
    }
    Ok(lines.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ingest_str;

    const SL2_Q4: &str = include_str!("../data/sl2_q4.json");

    #[test]
    fn empty_model_has_nothing_to_check() {
        assert!(verify(&Model::default(), &VerifyOptions::default())
            .checks
            .is_empty());
    }

    #[test]
    fn fixture_passes() {
        let rep = verify(&ingest_str(SL2_Q4).unwrap(), &VerifyOptions { at: vec![4] });
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn a_wrong_value_breaks_orthogonality_and_the_oracle() {
        let mut m = ingest_str(SL2_Q4).unwrap();
        let st = m.characters.iter_mut().find(|c| c.name() == "St").unwrap();
        st.function.values.insert("1".into(), GenValue::from_int(5));
        let rep = verify(&m, &VerifyOptions::default());
        let failed: Vec<&str> = rep.failures().map(|c| c.name.as_str()).collect();
        assert!(
            failed.iter().any(|n| n.starts_with("orthogonality")),
            "{rep}"
        );
        assert!(failed.iter().any(|n| n.starts_with("oracle")), "{rep}");
    }
}
