//! The JSON table format and the validated in-memory model.
//!
//! Every value is written in the expression syntax of [`crate::cyclo`], either
//! as a plain string (valid under the surrounding guard) or as
//! `{"expr": ..., "guard": {"modulus": m, "residues": [...]}}`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cyclo::{parse_genvalue, CongruenceGuard, CycNum, GenValue};
use crate::error::{Error, Result};
use crate::induction::{GreenTable, MultiplicityMatrix};
use crate::pipeline::Plan;
use crate::split::{validate_split, SplitClassDatum};
use crate::table::{
    validate_class_function, validate_group, ClassFamily, ClassFunction, GenericGroup, IssueKind,
    ValidationReport,
};
use crate::uniform::{validate_registry, DLDatum, DLRegistry};

pub const FORMAT: &str = "lietab/1";

/// An irreducible character (or its known part) with its series label.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub function: ClassFunction,
    /// Lusztig series label; `"1"` is the unipotent series.
    pub series: String,
    /// Sign `ε` in `ρ = ε·R_{L⊆P}(ψ)`, when the character is reached that way.
    pub sign: Option<i8>,
    /// `(L, P, ψ)` for characters obtained by induction.
    pub induced_from: Option<InducedFrom>,
}

impl Character {
    pub fn name(&self) -> &str {
        self.function.label()
    }

    pub fn group(&self) -> &str {
        &self.function.group
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InducedFrom {
    pub l: String,
    pub p: String,
    pub psi: String,
}

/// A specialised character table computed independently of the engine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Oracle {
    pub group: String,
    pub q: i64,
    pub source: String,
    pub classes: Vec<String>,
    /// Row label to values, in the order of `classes`.
    pub rows: BTreeMap<String, Vec<String>>,
}

impl Oracle {
    pub fn parsed_rows(&self) -> Result<BTreeMap<String, Vec<CycNum>>> {
        self.rows
            .iter()
            .map(|(k, vals)| {
                let parsed = vals
                    .iter()
                    .map(|s| {
                        parse_genvalue(s, &CongruenceGuard::trivial())
                            .map_err(|e| e.context(format!("oracle {} row {k}", self.group)))?
                            .as_constant()
                            .ok_or_else(|| {
                                Error::Precondition(format!("oracle entry {s} is not a number"))
                            })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((k.clone(), parsed))
            })
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Model {
    pub groups: Vec<GenericGroup>,
    pub characters: Vec<Character>,
    pub registries: Vec<DLRegistry>,
    pub green_tables: Vec<GreenTable>,
    pub multiplicities: Vec<MultiplicityMatrix>,
    pub split_data: Vec<SplitClassDatum>,
    pub oracles: Vec<Oracle>,
    pub plans: Vec<Plan>,
}

impl Model {
    pub fn group(&self, name: &str) -> Result<&GenericGroup> {
        self.groups
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGroup(name.to_string()))
    }

    pub fn character(&self, group: &str, name: &str) -> Result<&Character> {
        self.characters
            .iter()
            .find(|c| c.group() == group && c.name() == name)
            .ok_or_else(|| Error::UnknownCharacter {
                group: group.to_string(),
                name: name.to_string(),
            })
    }

    pub fn characters_of<'a>(&'a self, group: &'a str) -> impl Iterator<Item = &'a Character> + 'a {
        self.characters.iter().filter(move |c| c.group() == group)
    }

    /// Class functions of the characters of `group`, by name.
    pub fn functions_of(&self, group: &str) -> BTreeMap<String, ClassFunction> {
        self.characters_of(group)
            .map(|c| (c.name().to_string(), c.function.clone()))
            .collect()
    }

    pub fn registry(&self, group: &str) -> Result<&DLRegistry> {
        self.registries
            .iter()
            .find(|r| r.group == group)
            .ok_or_else(|| Error::MissingData(format!("no Deligne–Lusztig registry for {group}")))
    }

    pub fn green_table(&self, g: &str, l: &str, p: &str) -> Option<&GreenTable> {
        self.green_tables
            .iter()
            .find(|t| t.g_label == g && t.l_label == l && t.p_label == p)
    }

    pub fn multiplicity(&self, g: &str, l: &str, p: &str) -> Option<&MultiplicityMatrix> {
        self.multiplicities
            .iter()
            .find(|m| m.g_label == g && m.l_label == l && m.p_label == p)
    }

    pub fn split(&self, group: &str, parent: &str) -> Result<&SplitClassDatum> {
        self.split_data
            .iter()
            .find(|d| d.group == group && d.parent == parent)
            .ok_or_else(|| Error::MissingData(format!("no split datum for {parent} in {group}")))
    }

    pub fn plan(&self, name: &str) -> Option<&Plan> {
        self.plans.iter().find(|p| p.name == name)
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
            && self.characters.is_empty()
            && self.registries.is_empty()
            && self.green_tables.is_empty()
            && self.multiplicities.is_empty()
            && self.split_data.is_empty()
    }

    /// Every structural check, aggregated.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let mut names = BTreeSet::new();
        for g in &self.groups {
            if !names.insert(g.name.as_str()) {
                rep.push(IssueKind::DuplicateClass, &g.name, "group defined twice");
            }
            rep.extend(validate_group(g));
        }
        let mut seen = BTreeSet::new();
        for c in &self.characters {
            let subject = format!("{}/{}", c.group(), c.name());
            if !seen.insert((c.group(), c.name())) {
                rep.push(
                    IssueKind::DuplicateClass,
                    &subject,
                    "character defined twice",
                );
            }
            if c.function.name.is_none() || c.series.is_empty() {
                rep.push(
                    IssueKind::SeriesMismatch,
                    &subject,
                    "character needs a name and a series",
                );
            }
            match self.group(c.group()) {
                Ok(g) => rep.extend(validate_class_function(&c.function, g)),
                Err(e) => rep.push(IssueKind::UnknownReference, &subject, e.to_string()),
            }
            if let Some(s) = c.sign {
                if s != 1 && s != -1 {
                    rep.push(
                        IssueKind::SignMismatch,
                        &subject,
                        format!("sign {s} is not ±1"),
                    );
                }
            }
        }
        for r in &self.registries {
            match self.group(&r.group) {
                Ok(g) => rep.extend(validate_registry(r, g)),
                Err(e) => rep.push(IssueKind::UnknownReference, &r.group, e.to_string()),
            }
            for e in &r.entries {
                for name in e.multiplicities.keys() {
                    if self.character(&r.group, name).is_err() {
                        rep.push(
                            IssueKind::UnknownReference,
                            &e.label,
                            format!("multiplicity for unknown character {name}"),
                        );
                    }
                }
            }
        }
        for t in &self.green_tables {
            let l = self.group(&t.l_label).ok();
            rep.extend(t.validate(l));
            if let Ok(g) = self.group(&t.g_label) {
                for u in &t.u_classes {
                    if g.class(u).is_err() {
                        rep.push(
                            IssueKind::UnknownClass,
                            t.key(),
                            format!("{} has no class {u}", g.name),
                        );
                    }
                }
            }
        }
        for m in &self.multiplicities {
            if !m.is_consistent() {
                rep.push(
                    IssueKind::RegistryMismatch,
                    m.key(),
                    "ragged multiplicity matrix",
                );
            }
            for (names, grp) in [(&m.rows, &m.l_label), (&m.cols, &m.g_label)] {
                if self.group(grp).is_err() {
                    continue;
                }
                for n in names {
                    if self.character(grp, n).is_err() {
                        rep.push(
                            IssueKind::UnknownReference,
                            m.key(),
                            format!("{grp} has no character {n}"),
                        );
                    }
                }
            }
        }
        for d in &self.split_data {
            match self.group(&d.group) {
                Ok(g) => rep.extend(validate_split(d, g, &self.functions_of(&d.group))),
                Err(e) => rep.push(IssueKind::UnknownReference, &d.parent, e.to_string()),
            }
        }
        rep
    }
}

// ---------------------------------------------------------------------------
// Serialized form.

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawValue {
    Plain(String),
    Guarded {
        expr: String,
        guard: CongruenceGuard,
    },
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModel {
    #[serde(default)]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub groups: Vec<RawGroup>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub characters: Vec<RawCharacter>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub registries: Vec<RawRegistry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub green_tables: Vec<RawGreen>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub multiplicities: Vec<RawMult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub split_data: Vec<RawSplit>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub oracles: Vec<Oracle>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub plans: Vec<Plan>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGroup {
    pub name: String,
    pub order: RawValue,
    #[serde(default, skip_serializing_if = "CongruenceGuard::is_trivial")]
    pub guard: CongruenceGuard,
    #[serde(default, skip_serializing_if = "is_false")]
    pub complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity_class: Option<String>,
    pub classes: Vec<RawClass>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawClass {
    pub name: String,
    pub centralizer: RawValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub unipotent: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semisimple: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guard: Option<CongruenceGuard>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_parent: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connected_centralizer: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCharacter {
    pub group: String,
    pub name: String,
    pub series: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub induced_from: Option<InducedFrom>,
    #[serde(default)]
    pub values: BTreeMap<String, RawValue>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRegistry {
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus_count: Option<RawValue>,
    pub entries: Vec<RawDatum>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDatum {
    pub label: String,
    /// Label of the entry for `θ^{-1}`; the entry itself when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<String>,
    pub torus_order: RawValue,
    pub orbit_size: RawValue,
    pub values: BTreeMap<String, RawValue>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub multiplicities: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGreen {
    pub g: String,
    pub l: String,
    pub p: String,
    pub u_classes: Vec<String>,
    pub v_classes: Vec<String>,
    pub q: Vec<Vec<RawValue>>,
    pub weights: Vec<RawValue>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMult {
    pub g: String,
    pub l: String,
    pub p: String,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSplit {
    pub group: String,
    pub parent: String,
    pub children: Vec<String>,
    pub chi_functions: Vec<String>,
    pub coefficients: Vec<Vec<String>>,
    pub values: Vec<Vec<RawValue>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expansions: BTreeMap<String, BTreeMap<String, RawValue>>,
}

pub(crate) fn read_value(raw: &RawValue, ctx: &CongruenceGuard, what: &str) -> Result<GenValue> {
    let v = match raw {
        RawValue::Plain(s) => parse_genvalue(s, ctx),
        RawValue::Guarded { expr, guard } => parse_genvalue(expr, &guard.intersect(ctx)?),
    };
    v.map_err(|e| e.context(what))
}

pub(crate) fn write_value(v: &GenValue, ctx: &CongruenceGuard) -> RawValue {
    if v.guard() == ctx {
        RawValue::Plain(v.to_string())
    } else {
        RawValue::Guarded {
            expr: v.to_string(),
            guard: v.guard().clone(),
        }
    }
}

fn read_values(
    raw: &BTreeMap<String, RawValue>,
    ctx: &CongruenceGuard,
    what: &str,
) -> Result<BTreeMap<String, GenValue>> {
    raw.iter()
        .map(|(k, v)| Ok((k.clone(), read_value(v, ctx, &format!("{what} at {k}"))?)))
        .collect()
}

fn write_values(
    vals: &BTreeMap<String, GenValue>,
    ctx: &CongruenceGuard,
) -> BTreeMap<String, RawValue> {
    vals.iter()
        .map(|(k, v)| (k.clone(), write_value(v, ctx)))
        .collect()
}

fn read_cyc(s: &str, what: &str) -> Result<CycNum> {
    parse_genvalue(s, &CongruenceGuard::trivial())
        .map_err(|e| e.context(what))?
        .as_constant()
        .ok_or_else(|| Error::Precondition(format!("{what}: {s} is not a constant")))
}

impl RawModel {
    fn group_guard(&self, name: &str) -> CongruenceGuard {
        self.groups
            .iter()
            .find(|g| g.name == name)
            .map(|g| g.guard.clone())
            .unwrap_or_default()
    }

    pub fn into_model(self) -> Result<Model> {
        if let Some(f) = &self.format {
            if f != FORMAT {
                return Err(Error::Format {
                    line: 0,
                    column: 0,
                    message: format!("unsupported format {f}"),
                });
            }
        }
        let mut model = Model::default();
        for g in &self.groups {
            let gg = g.guard.clone();
            let order = read_value(&g.order, &gg, &format!("order of {}", g.name))?;
            let mut classes = Vec::new();
            for c in &g.classes {
                let guard = match &c.guard {
                    Some(cg) => cg
                        .intersect(&gg)
                        .map_err(|e| e.context(format!("{}/{}", g.name, c.name)))?,
                    None => gg.clone(),
                };
                let cent = read_value(
                    &c.centralizer,
                    &guard,
                    &format!("centralizer of {}/{}", g.name, c.name),
                )?;
                classes.push(ClassFamily {
                    name: c.name.clone(),
                    centralizer_order: cent,
                    inverse_class: c.inverse.clone().unwrap_or_else(|| c.name.clone()),
                    is_unipotent: c.unipotent,
                    semisimple_label: c.semisimple.clone(),
                    guard,
                    split_parent: c.split_parent.clone(),
                    connected_centralizer: c.connected_centralizer,
                });
            }
            model.groups.push(GenericGroup {
                name: g.name.clone(),
                order,
                classes,
                complete: g.complete,
                guard: gg,
                identity_class: g.identity_class.clone(),
            });
        }
        for c in &self.characters {
            let ctx = self.group_guard(&c.group);
            let what = format!("{}/{}", c.group, c.name);
            model.characters.push(Character {
                function: ClassFunction {
                    name: Some(c.name.clone()),
                    group: c.group.clone(),
                    values: read_values(&c.values, &ctx, &what)?,
                },
                series: c.series.clone(),
                sign: c.sign,
                induced_from: c.induced_from.clone(),
            });
        }
        for r in &self.registries {
            let ctx = self.group_guard(&r.group);
            let labels: Vec<&str> = r.entries.iter().map(|e| e.label.as_str()).collect();
            let mut entries = Vec::new();
            let mut pairing = Vec::new();
            for e in &r.entries {
                let what = format!("{}/{}", r.group, e.label);
                let inv = e.inverse.as_deref().unwrap_or(&e.label);
                pairing.push(labels.iter().position(|l| *l == inv).ok_or_else(|| {
                    Error::IncompleteRegistry(format!("{what}: inverse {inv} is not listed"))
                })?);
                entries.push(DLDatum {
                    label: e.label.clone(),
                    torus_order: read_value(
                        &e.torus_order,
                        &ctx,
                        &format!("torus order of {what}"),
                    )?,
                    orbit_size: read_value(&e.orbit_size, &ctx, &format!("orbit size of {what}"))?,
                    values: ClassFunction {
                        name: Some(e.label.clone()),
                        group: r.group.clone(),
                        values: read_values(&e.values, &ctx, &what)?,
                    },
                    multiplicities: e.multiplicities.clone(),
                });
            }
            model.registries.push(DLRegistry {
                group: r.group.clone(),
                entries,
                inverse_pairing: pairing,
                torus_count: r
                    .torus_count
                    .as_ref()
                    .map(|t| read_value(t, &ctx, &format!("torus count of {}", r.group)))
                    .transpose()?,
            });
        }
        for t in &self.green_tables {
            let ctx = self.group_guard(&t.g);
            let what = format!("Green table {}<{}<{}", t.l, t.p, t.g);
            let q =
                t.q.iter()
                    .map(|row| row.iter().map(|v| read_value(v, &ctx, &what)).collect())
                    .collect::<Result<Vec<Vec<_>>>>()?;
            let weights = t
                .weights
                .iter()
                .map(|v| read_value(v, &ctx, &what))
                .collect::<Result<Vec<_>>>()?;
            model.green_tables.push(GreenTable {
                g_label: t.g.clone(),
                l_label: t.l.clone(),
                p_label: t.p.clone(),
                u_classes: t.u_classes.clone(),
                v_classes: t.v_classes.clone(),
                q,
                weights,
            });
        }
        for m in &self.multiplicities {
            model.multiplicities.push(MultiplicityMatrix {
                g_label: m.g.clone(),
                l_label: m.l.clone(),
                p_label: m.p.clone(),
                rows: m.rows.clone(),
                cols: m.cols.clone(),
                entries: m.entries.clone(),
            });
        }
        for d in &self.split_data {
            let ctx = self.group_guard(&d.group);
            let what = format!("split datum {}/{}", d.group, d.parent);
            let coefficients = d
                .coefficients
                .iter()
                .map(|r| r.iter().map(|s| read_cyc(s, &what)).collect())
                .collect::<Result<Vec<Vec<_>>>>()?;
            let values = d
                .values
                .iter()
                .map(|r| r.iter().map(|v| read_value(v, &ctx, &what)).collect())
                .collect::<Result<Vec<Vec<_>>>>()?;
            let expansions = d
                .expansions
                .iter()
                .map(|(k, e)| Ok((k.clone(), read_values(e, &ctx, &what)?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            model.split_data.push(SplitClassDatum {
                group: d.group.clone(),
                parent: d.parent.clone(),
                children: d.children.clone(),
                chi_functions: d.chi_functions.clone(),
                coefficients,
                values,
                expansions,
            });
        }
        model.oracles = self.oracles;
        model.plans = self.plans;
        Ok(model)
    }
}

impl Model {
    fn guard_of(&self, group: &str) -> CongruenceGuard {
        self.group(group)
            .map(|g| g.guard.clone())
            .unwrap_or_default()
    }

    pub fn to_raw(&self) -> RawModel {
        let groups = self
            .groups
            .iter()
            .map(|g| RawGroup {
                name: g.name.clone(),
                order: write_value(&g.order, &g.guard),
                guard: g.guard.clone(),
                complete: g.complete,
                identity_class: g.identity_class.clone(),
                classes: g
                    .classes
                    .iter()
                    .map(|c| RawClass {
                        name: c.name.clone(),
                        centralizer: write_value(&c.centralizer_order, &c.guard),
                        inverse: (c.inverse_class != c.name).then(|| c.inverse_class.clone()),
                        unipotent: c.is_unipotent,
                        semisimple: c.semisimple_label.clone(),
                        guard: (c.guard != g.guard).then(|| c.guard.clone()),
                        split_parent: c.split_parent.clone(),
                        connected_centralizer: c.connected_centralizer,
                    })
                    .collect(),
            })
            .collect();
        let characters = self
            .characters
            .iter()
            .map(|c| RawCharacter {
                group: c.group().to_string(),
                name: c.name().to_string(),
                series: c.series.clone(),
                sign: c.sign,
                induced_from: c.induced_from.clone(),
                values: write_values(&c.function.values, &self.guard_of(c.group())),
            })
            .collect();
        let registries = self
            .registries
            .iter()
            .map(|r| {
                let ctx = self.guard_of(&r.group);
                RawRegistry {
                    group: r.group.clone(),
                    torus_count: r.torus_count.as_ref().map(|t| write_value(t, &ctx)),
                    entries: r
                        .entries
                        .iter()
                        .enumerate()
                        .map(|(i, e)| RawDatum {
                            label: e.label.clone(),
                            inverse: (r.inverse_pairing[i] != i)
                                .then(|| r.entries[r.inverse_pairing[i]].label.clone()),
                            torus_order: write_value(&e.torus_order, &ctx),
                            orbit_size: write_value(&e.orbit_size, &ctx),
                            values: write_values(&e.values.values, &ctx),
                            multiplicities: e.multiplicities.clone(),
                        })
                        .collect(),
                }
            })
            .collect();
        let green_tables = self
            .green_tables
            .iter()
            .map(|t| green_to_raw(t, &self.guard_of(&t.g_label)))
            .collect();
        let multiplicities = self.multiplicities.iter().map(mult_to_raw).collect();
        let split_data = self
            .split_data
            .iter()
            .map(|d| {
                let ctx = self.guard_of(&d.group);
                RawSplit {
                    group: d.group.clone(),
                    parent: d.parent.clone(),
                    children: d.children.clone(),
                    chi_functions: d.chi_functions.clone(),
                    coefficients: d
                        .coefficients
                        .iter()
                        .map(|r| r.iter().map(CycNum::to_string).collect())
                        .collect(),
                    values: d
                        .values
                        .iter()
                        .map(|r| r.iter().map(|v| write_value(v, &ctx)).collect())
                        .collect(),
                    expansions: d
                        .expansions
                        .iter()
                        .map(|(k, e)| (k.clone(), write_values(e, &ctx)))
                        .collect(),
                }
            })
            .collect();
        RawModel {
            format: Some(FORMAT.to_string()),
            groups,
            characters,
            registries,
            green_tables,
            multiplicities,
            split_data,
            oracles: self.oracles.clone(),
            plans: self.plans.clone(),
        }
    }

    /// Canonical JSON text.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_raw()).expect("serializable");
        s.push('\n');
        s
    }
}

pub(crate) fn green_to_raw(t: &GreenTable, ctx: &CongruenceGuard) -> RawGreen {
    RawGreen {
        g: t.g_label.clone(),
        l: t.l_label.clone(),
        p: t.p_label.clone(),
        u_classes: t.u_classes.clone(),
        v_classes: t.v_classes.clone(),
        q: t.q
            .iter()
            .map(|r| r.iter().map(|v| write_value(v, ctx)).collect())
            .collect(),
        weights: t.weights.iter().map(|v| write_value(v, ctx)).collect(),
    }
}

pub(crate) fn mult_to_raw(m: &MultiplicityMatrix) -> RawMult {
    RawMult {
        g: m.g_label.clone(),
        l: m.l_label.clone(),
        p: m.p_label.clone(),
        rows: m.rows.clone(),
        cols: m.cols.clone(),
        entries: m.entries.clone(),
    }
}

pub(crate) fn json_error(e: &serde_json::Error) -> Error {
    Error::Format {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses a model without validating it.
pub fn parse_model(text: &str) -> Result<Model> {
    let raw: RawModel = serde_json::from_str(text).map_err(|e| json_error(&e))?;
    raw.into_model()
}

/// Parses and validates a model from JSON text.
pub fn ingest_str(text: &str) -> Result<Model> {
    let model = parse_model(text)?;
    let rep = model.validate();
    if rep.is_empty() {
        Ok(model)
    } else {
        Err(Error::InconsistentTable(rep))
    }
}

/// Reads, parses and validates a model file.
pub fn ingest(path: impl AsRef<Path>) -> Result<Model> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    ingest_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SL2: &str = include_str!("../data/sl2_generic.json");

    #[test]
    fn fixture_is_canonical() {
        let m = ingest_str(SL2).unwrap();
        assert_eq!(m.to_json(), SL2);
        assert_eq!(m.group("SL2").unwrap().unipotent_classes(), ["1", "u"]);
        assert!(m.group("GL2").is_err());
    }

    #[test]
    fn unknown_fields_are_format_errors() {
        let text = SL2.replacen("\"groups\"", "\"colour\": 1,\n  \"groups\"", 1);
        assert!(matches!(ingest_str(&text), Err(Error::Format { .. })));
    }

    #[test]
    fn duplicate_characters_are_reported() {
        let mut raw: serde_json::Value = serde_json::from_str(SL2).unwrap();
        let chars = raw["characters"].as_array_mut().unwrap();
        let first = chars[0].clone();
        chars.push(first);
        let e = ingest_str(&raw.to_string()).unwrap_err().to_string();
        assert!(e.contains("character defined twice"), "{e}");
    }

    #[test]
    fn guarded_values_keep_their_guard() {
        let v: RawValue =
            serde_json::from_str(r#"{"expr": "q - 1", "guard": {"modulus": 3, "residues": [1]}}"#)
                .unwrap();
        let RawValue::Guarded { guard, .. } = &v else {
            panic!("expected a guarded value");
        };
        assert_eq!(guard.to_string(), "3|q-1");
        assert_eq!(serde_json::to_value(&v).unwrap()["expr"], "q - 1");
    }
}
