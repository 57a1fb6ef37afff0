//! Plans, their execution, and the artifacts they produce.
//!
//! Steps run in order; each one looks for its inputs first among the
//! artifacts of earlier steps and then in the model, so any step can also be
//! run alone against precomputed data.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cyclo::{CongruenceGuard, CycNum, GenValue};
use crate::error::{Error, Result};
use crate::green::{rhs_from_mult, solve_green, GreenShape};
use crate::induction::{
    decompose_induction, induce_unipotent, schewe_value, GreenTable, MultiplicityMatrix,
};
use crate::model::{
    green_to_raw, json_error, mult_to_raw, read_value, write_value, Model, RawGreen, RawMult,
    RawValue,
};
use crate::split::{chi0_inner, evaluate_on_split};
use crate::table::ClassFunction;
use crate::uniform::{multiplicities_of, value_via_uniform};

pub const ARTIFACT_FORMAT: &str = "lietab-artifacts/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Plan {
    pub name: String,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case", deny_unknown_fields)]
pub enum Step {
    /// Recover `Q_{L⊆P}` from multiplicities and unipotent values.
    Green {
        g: String,
        l: String,
        p: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        psis: Option<Vec<String>>,
    },
    /// Values of characters of `g` on its unipotent classes.
    UnipotentValues {
        g: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        characters: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        method: Option<ValueMethod>,
    },
    /// Multiplicities `m(ψ, ρ)` by decomposing `R_{L⊆P}(ψ)`.
    Decompose {
        g: String,
        l: String,
        p: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        psis: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        candidates: Vec<String>,
    },
    /// `ρ(su)` for `u` unipotent in `L`, by Schewe's formula.
    Schewe {
        g: String,
        l: String,
        p: String,
        label: String,
        rho: Vec<String>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        twists: BTreeMap<String, String>,
    },
    /// `ρ` on the rational classes of a split F-stable class.
    Split {
        g: String,
        parent: String,
        rho: Vec<String>,
        /// `⟨ρ, χ_j⟩` supplied directly, by character.
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        inner_products: BTreeMap<String, Vec<String>>,
    },
    /// `ρ(g)` by the uniform expansion of the class indicator.
    Uniform {
        g: String,
        rho: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        classes: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueMethod {
    Data,
    Uniform,
    Induce,
}

/// Values of one character on a list of classes.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub method: String,
    pub group: String,
    pub character: String,
    pub classes: Vec<String>,
    pub values: Vec<GenValue>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Artifacts {
    pub plan: String,
    pub green_tables: Vec<GreenTable>,
    pub unipotent_values: Vec<ClassFunction>,
    pub multiplicities: Vec<MultiplicityMatrix>,
    pub evaluations: Vec<Evaluation>,
}

impl Artifacts {
    pub fn is_empty(&self) -> bool {
        self.green_tables.is_empty()
            && self.unipotent_values.is_empty()
            && self.multiplicities.is_empty()
            && self.evaluations.is_empty()
    }

    pub fn evaluation(&self, character: &str) -> Option<&Evaluation> {
        self.evaluations.iter().find(|e| e.character == character)
    }
}

struct Run<'a> {
    model: &'a Model,
    out: Artifacts,
}

impl Run<'_> {
    fn green_table(&self, g: &str, l: &str, p: &str) -> Result<GreenTable> {
        self.out
            .green_tables
            .iter()
            .rev()
            .find(|t| t.g_label == g && t.l_label == l && t.p_label == p)
            .or_else(|| self.model.green_table(g, l, p))
            .cloned()
            .ok_or_else(|| Error::MissingData(format!("Green table {l}<{p}<{g}")))
    }

    fn multiplicity(&self, g: &str, l: &str, p: &str) -> Result<MultiplicityMatrix> {
        self.out
            .multiplicities
            .iter()
            .rev()
            .find(|m| m.g_label == g && m.l_label == l && m.p_label == p)
            .or_else(|| self.model.multiplicity(g, l, p))
            .cloned()
            .ok_or_else(|| Error::MissingData(format!("multiplicity matrix {l}<{p}<{g}")))
    }

    /// Ingested values overlaid with any values computed by earlier steps.
    fn function(&self, group: &str, name: &str) -> Result<ClassFunction> {
        let mut f = match self.model.character(group, name) {
            Ok(c) => c.function.clone(),
            Err(e) => {
                if !self
                    .out
                    .unipotent_values
                    .iter()
                    .any(|f| f.group == group && f.label() == name)
                {
                    return Err(e);
                }
                ClassFunction::new(group, Some(name))
            }
        };
        for computed in self
            .out
            .unipotent_values
            .iter()
            .filter(|f| f.group == group && f.label() == name)
        {
            for (k, v) in &computed.values {
                f.values.insert(k.clone(), v.clone());
            }
        }
        Ok(f)
    }

    fn functions(&self, group: &str, names: &[String]) -> Result<BTreeMap<String, ClassFunction>> {
        names
            .iter()
            .map(|n| Ok((n.clone(), self.function(group, n)?)))
            .collect()
    }

    fn unipotent_characters(&self, group: &str) -> Vec<String> {
        self.model
            .characters_of(group)
            .filter(|c| c.series == "1")
            .map(|c| c.name().to_string())
            .collect()
    }

    fn step(&mut self, step: &Step) -> Result<()> {
        match step {
            Step::Green { g, l, p, psis } => self.green(g, l, p, psis.as_deref()),
            Step::UnipotentValues {
                g,
                characters,
                method,
            } => self.unipotent_values(g, characters, *method),
            Step::Decompose {
                g,
                l,
                p,
                psis,
                candidates,
            } => self.decompose(g, l, p, psis.as_deref(), candidates),
            Step::Schewe {
                g,
                l,
                p,
                label,
                rho,
                twists,
            } => self.schewe(g, l, p, label, rho, twists),
            Step::Split {
                g,
                parent,
                rho,
                inner_products,
            } => self.split(g, parent, rho, inner_products),
            Step::Uniform { g, rho, classes } => self.uniform(g, rho, classes),
        }
    }

    fn green(&mut self, g: &str, l: &str, p: &str, psis: Option<&[String]>) -> Result<()> {
        let m = self.multiplicity(g, l, p)?;
        let gg = self.model.group(g)?;
        let lg = self.model.group(l)?;
        let psis: Vec<String> = psis
            .map(<[String]>::to_vec)
            .unwrap_or_else(|| m.rows.clone());
        let mut rows = Vec::new();
        for psi in &psis {
            let i = m.rows.iter().position(|r| r == psi).ok_or_else(|| {
                Error::MissingData(format!("no multiplicities for {psi} in {}", m.key()))
            })?;
            rows.push(m.entries[i].clone());
        }
        let m = MultiplicityMatrix {
            rows: psis.clone(),
            entries: rows,
            ..m
        };
        let u_classes = gg.unipotent_classes();
        let v_classes = lg.unipotent_classes();
        let rho_values = self.functions(g, &m.cols)?;
        let rhs = rhs_from_mult(&m, &rho_values, &u_classes)?;
        let psi_matrix = psis
            .iter()
            .map(|psi| {
                let f = self.function(l, psi)?;
                v_classes
                    .iter()
                    .map(|v| f.get(v).cloned())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let weights = v_classes
            .iter()
            .map(|v| lg.class_size(v))
            .collect::<Result<Vec<_>>>()?;
        let shape = GreenShape {
            g_label: g.into(),
            l_label: l.into(),
            p_label: p.into(),
            u_classes,
            v_classes,
        };
        let table = solve_green(&rhs, &psi_matrix, &weights, &shape)?;
        self.out.green_tables.push(table);
        Ok(())
    }

    fn unipotent_values(
        &mut self,
        g: &str,
        names: &[String],
        method: Option<ValueMethod>,
    ) -> Result<()> {
        let group = self.model.group(g)?;
        let u_classes = group.unipotent_classes();
        let names: Vec<String> = if names.is_empty() {
            self.model
                .characters_of(g)
                .map(|c| c.name().to_string())
                .collect()
        } else {
            names.to_vec()
        };
        for name in &names {
            let ch = self.model.character(g, name)?;
            let how = method.unwrap_or(if ch.induced_from.is_some() {
                ValueMethod::Induce
            } else if ch.series == "1" {
                ValueMethod::Data
            } else {
                ValueMethod::Uniform
            });
            let mut f = ClassFunction::new(g, Some(name));
            match how {
                ValueMethod::Data => {
                    for u in &u_classes {
                        f.values.insert(u.clone(), ch.function.get(u)?.clone());
                    }
                }
                ValueMethod::Uniform => {
                    let reg = self.model.registry(g)?;
                    let mults = multiplicities_of(reg, name);
                    for u in &u_classes {
                        f.values
                            .insert(u.clone(), value_via_uniform(&mults, reg, group, u)?);
                    }
                }
                ValueMethod::Induce => {
                    let src = ch.induced_from.as_ref().ok_or_else(|| {
                        Error::MissingData(format!("{g}/{name} names no inducing character"))
                    })?;
                    let sign = ch.sign.ok_or_else(|| {
                        Error::MissingData(format!("{g}/{name} has no sign for its induction"))
                    })?;
                    let q = self.green_table(g, &src.l, &src.p)?;
                    let psi = self.function(&src.l, &src.psi)?;
                    let r = induce_unipotent(&q, &psi)?;
                    for u in &u_classes {
                        f.values.insert(u.clone(), r.get(u)?.scale_int(sign as i64));
                    }
                    if let Some(id) = &group.identity_class {
                        let degree = f.get(id)?;
                        if !degree.is_eventually_positive() {
                            return Err(Error::SignMismatch(format!(
                                "{g}/{name}: sign {sign} gives degree {degree}"
                            )));
                        }
                    }
                }
            }
            self.out.unipotent_values.push(f);
        }
        Ok(())
    }

    fn decompose(
        &mut self,
        g: &str,
        l: &str,
        p: &str,
        psis: Option<&[String]>,
        candidates: &[String],
    ) -> Result<()> {
        let q = self.green_table(g, l, p)?;
        let psis = psis
            .map(<[String]>::to_vec)
            .unwrap_or_else(|| self.unipotent_characters(l));
        let candidates = if candidates.is_empty() {
            self.unipotent_characters(g)
        } else {
            candidates.to_vec()
        };
        let cand = candidates
            .iter()
            .map(|c| self.function(g, c))
            .collect::<Result<Vec<_>>>()?;
        let mut entries = Vec::new();
        for psi in &psis {
            let r = induce_unipotent(&q, &self.function(l, psi)?)?;
            let m = decompose_induction(&r, &cand, &q.u_classes)
                .map_err(|e| e.context(format!("{}({psi})", q.key())))?;
            entries.push(m);
        }
        self.out.multiplicities.push(MultiplicityMatrix {
            g_label: g.into(),
            l_label: l.into(),
            p_label: p.into(),
            rows: psis,
            cols: candidates,
            entries,
        });
        Ok(())
    }

    fn schewe(
        &mut self,
        g: &str,
        l: &str,
        p: &str,
        label: &str,
        rho: &[String],
        twists: &BTreeMap<String, String>,
    ) -> Result<()> {
        let m = self.multiplicity(g, l, p)?;
        let lg = self.model.group(l)?;
        let v_classes = lg.unipotent_classes();
        let psi_values = self.functions(l, &m.rows)?;
        let twists = twists
            .iter()
            .map(|(k, s)| {
                let v = read_value(
                    &RawValue::Plain(s.clone()),
                    &CongruenceGuard::trivial(),
                    &format!("twist of {k}"),
                )?;
                let c = v.as_constant().ok_or_else(|| {
                    Error::Precondition(format!("twist of {k} must be a root of unity, got {s}"))
                })?;
                Ok((k.clone(), c))
            })
            .collect::<Result<BTreeMap<String, CycNum>>>()?;
        for r in rho {
            let col = m.column(r)?;
            let values = v_classes
                .iter()
                .map(|u| schewe_value(&col, &psi_values, u, &twists))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| e.context(format!("{g}/{r} at {label}")))?;
            self.out.evaluations.push(Evaluation {
                method: "schewe".into(),
                group: g.into(),
                character: r.clone(),
                classes: v_classes.iter().map(|u| format!("{label}.{u}")).collect(),
                values,
            });
        }
        Ok(())
    }

    fn split(
        &mut self,
        g: &str,
        parent: &str,
        rho: &[String],
        given: &BTreeMap<String, Vec<String>>,
    ) -> Result<()> {
        let d = self.model.split(g, parent)?;
        let group = self.model.group(g)?;
        for r in rho {
            let ip = match given.get(r) {
                Some(list) => list
                    .iter()
                    .map(|s| {
                        read_value(
                            &RawValue::Plain(s.clone()),
                            &group.guard,
                            &format!("⟨{r}, χ⟩"),
                        )
                    })
                    .collect::<Result<Vec<_>>>()?,
                None => {
                    let reg = self.model.registry(g)?;
                    let mut ip = vec![chi0_inner(&multiplicities_of(reg, r), reg, group, d)?];
                    for chi in &d.chi_functions[1..] {
                        let exp = d.expansions.get(chi).ok_or_else(|| {
                            Error::MissingData(format!("no expansion of {chi} for {parent}"))
                        })?;
                        ip.push(
                            exp.get(r)
                                .map(GenValue::conj)
                                .unwrap_or_else(GenValue::zero),
                        );
                    }
                    ip
                }
            };
            let values = evaluate_on_split(&ip, d)?
                .into_iter()
                .zip(&d.children)
                .map(|(v, c)| v.with_guard(&group.class(c)?.guard))
                .collect::<Result<Vec<_>>>()?;
            self.out.evaluations.push(Evaluation {
                method: "split".into(),
                group: g.into(),
                character: r.clone(),
                classes: d.children.clone(),
                values,
            });
        }
        Ok(())
    }

    fn uniform(&mut self, g: &str, rho: &[String], classes: &[String]) -> Result<()> {
        let group = self.model.group(g)?;
        let reg = self.model.registry(g)?;
        let classes: Vec<String> = if classes.is_empty() {
            group
                .classes
                .iter()
                .filter(|c| c.connected_centralizer != Some(false))
                .map(|c| c.name.clone())
                .collect()
        } else {
            classes.to_vec()
        };
        for c in &classes {
            if group.class(c)?.connected_centralizer == Some(false) {
                return Err(Error::Precondition(format!(
                    "{g}/{c} has a disconnected centralizer"
                )));
            }
        }
        for r in rho {
            self.model.character(g, r)?;
            let mults = multiplicities_of(reg, r);
            let values = classes
                .iter()
                .map(|c| value_via_uniform(&mults, reg, group, c))
                .collect::<Result<Vec<_>>>()?;
            self.out.evaluations.push(Evaluation {
                method: "uniform".into(),
                group: g.into(),
                character: r.clone(),
                classes: classes.clone(),
                values,
            });
        }
        Ok(())
    }
}

/// Executes `plan` against `model`.
pub fn run_pipeline(model: &Model, plan: &Plan) -> Result<Artifacts> {
    let mut run = Run {
        model,
        out: Artifacts {
            plan: plan.name.clone(),
            ..Artifacts::default()
        },
    };
    for (i, step) in plan.steps.iter().enumerate() {
        run.step(step)
            .map_err(|e| e.context(format!("plan {} step {}", plan.name, i + 1)))?;
    }
    Ok(run.out)
}

// ---------------------------------------------------------------------------
// Serialized artifacts.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArtifacts {
    format: String,
    plan: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    green_tables: Vec<RawGreen>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    unipotent_values: Vec<RawColumn>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    multiplicities: Vec<RawMult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    evaluations: Vec<RawEvaluation>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawColumn {
    group: String,
    name: String,
    #[serde(default, skip_serializing_if = "CongruenceGuard::is_trivial")]
    guard: CongruenceGuard,
    values: BTreeMap<String, RawValue>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEvaluation {
    method: String,
    group: String,
    character: String,
    #[serde(default, skip_serializing_if = "CongruenceGuard::is_trivial")]
    guard: CongruenceGuard,
    classes: Vec<String>,
    values: Vec<RawValue>,
}

fn common_guard<'a>(vals: impl IntoIterator<Item = &'a GenValue>) -> CongruenceGuard {
    vals.into_iter()
        .next()
        .map(|v| v.guard().clone())
        .unwrap_or_default()
}

impl Artifacts {
    pub fn to_json(&self) -> String {
        let raw = RawArtifacts {
            format: ARTIFACT_FORMAT.into(),
            plan: self.plan.clone(),
            green_tables: self
                .green_tables
                .iter()
                .map(|t| green_to_raw(t, &CongruenceGuard::trivial()))
                .collect(),
            unipotent_values: self
                .unipotent_values
                .iter()
                .map(|f| {
                    let guard = common_guard(f.values.values());
                    RawColumn {
                        group: f.group.clone(),
                        name: f.label().to_string(),
                        values: f
                            .values
                            .iter()
                            .map(|(k, v)| (k.clone(), write_value(v, &guard)))
                            .collect(),
                        guard,
                    }
                })
                .collect(),
            multiplicities: self.multiplicities.iter().map(mult_to_raw).collect(),
            evaluations: self
                .evaluations
                .iter()
                .map(|e| {
                    let guard = common_guard(&e.values);
                    RawEvaluation {
                        method: e.method.clone(),
                        group: e.group.clone(),
                        character: e.character.clone(),
                        classes: e.classes.clone(),
                        values: e.values.iter().map(|v| write_value(v, &guard)).collect(),
                        guard,
                    }
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&raw).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Artifacts> {
        let raw: RawArtifacts = serde_json::from_str(text).map_err(|e| json_error(&e))?;
        if raw.format != ARTIFACT_FORMAT {
            return Err(Error::Format {
                line: 0,
                column: 0,
                message: format!("unsupported artifact format {}", raw.format),
            });
        }
        let mut out = Artifacts {
            plan: raw.plan,
            ..Artifacts::default()
        };
        for t in raw.green_tables {
            let what = format!("Green table {}<{}<{}", t.l, t.p, t.g);
            let ctx = CongruenceGuard::trivial();
            out.green_tables.push(GreenTable {
                q: t.q
                    .iter()
                    .map(|r| r.iter().map(|v| read_value(v, &ctx, &what)).collect())
                    .collect::<Result<Vec<Vec<_>>>>()?,
                weights: t
                    .weights
                    .iter()
                    .map(|v| read_value(v, &ctx, &what))
                    .collect::<Result<_>>()?,
                g_label: t.g,
                l_label: t.l,
                p_label: t.p,
                u_classes: t.u_classes,
                v_classes: t.v_classes,
            });
        }
        for c in raw.unipotent_values {
            let mut f = ClassFunction::new(&c.group, Some(&c.name));
            for (k, v) in &c.values {
                f.values.insert(
                    k.clone(),
                    read_value(v, &c.guard, &format!("{}/{} at {k}", c.group, c.name))?,
                );
            }
            out.unipotent_values.push(f);
        }
        for m in raw.multiplicities {
            out.multiplicities.push(MultiplicityMatrix {
                g_label: m.g,
                l_label: m.l,
                p_label: m.p,
                rows: m.rows,
                cols: m.cols,
                entries: m.entries,
            });
        }
        for e in raw.evaluations {
            let what = format!("evaluation of {}/{}", e.group, e.character);
            out.evaluations.push(Evaluation {
                values: e
                    .values
                    .iter()
                    .map(|v| read_value(v, &e.guard, &what))
                    .collect::<Result<_>>()?,
                method: e.method,
                group: e.group,
                character: e.character,
                classes: e.classes,
            });
        }
        Ok(out)
    }
}
