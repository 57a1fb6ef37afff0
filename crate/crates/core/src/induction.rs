//! Lusztig induction on unipotent supports.

use std::collections::BTreeMap;

use crate::cyclo::{CycNum, GenValue};
use crate::error::{Error, Result};
use crate::linalg::solve_full_rank;
use crate::table::{ClassFunction, GenericGroup, IssueKind, ValidationReport};

/// Two-variable Green function `Q_{L⊆P}(u_k, v_j)` with weights
/// `c_j = [L^F : C_L(v_j)^F]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GreenTable {
    pub g_label: String,
    pub l_label: String,
    /// Opaque; tables for different parabolics are never identified.
    pub p_label: String,
    pub u_classes: Vec<String>,
    pub v_classes: Vec<String>,
    /// Rows indexed by `u_classes`, columns by `v_classes`.
    pub q: Vec<Vec<GenValue>>,
    pub weights: Vec<GenValue>,
}

impl GreenTable {
    pub fn key(&self) -> String {
        format!("{}<{}<{}", self.l_label, self.p_label, self.g_label)
    }

    /// Dimensions, and weights against the class data of `l` when given.
    pub fn validate(&self, l: Option<&GenericGroup>) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let key = self.key();
        let (n, m) = (self.u_classes.len(), self.v_classes.len());
        if self.q.len() != n || self.q.iter().any(|r| r.len() != m) || self.weights.len() != m {
            rep.push(
                IssueKind::RegistryMismatch,
                &key,
                format!("expected {n}×{m} values and {m} weights"),
            );
            return rep;
        }
        for (v, c) in self.v_classes.iter().zip(&self.weights) {
            if !c.is_polynomial() {
                rep.push(
                    IssueKind::NonPolynomialClassSize,
                    format!("{key}/{v}"),
                    format!("weight {c}"),
                );
            }
            if let Some(l) = l {
                match l.class_size(v) {
                    Ok(size) if size == c.clone().set_guard(size.guard().clone()) => {}
                    Ok(size) => rep.push(
                        IssueKind::RegistryMismatch,
                        format!("{key}/{v}"),
                        format!("weight {c} but class size in {} is {size}", l.name),
                    ),
                    Err(e) => {
                        rep.push(IssueKind::UnknownClass, format!("{key}/{v}"), e.to_string())
                    }
                }
            }
        }
        rep
    }
}

/// Integer multiplicities `m(ψ, ρ) = ⟨R_{L⊆P}(ψ), ρ⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityMatrix {
    pub g_label: String,
    pub l_label: String,
    pub p_label: String,
    /// Characters `ψ` of `L`.
    pub rows: Vec<String>,
    /// Characters `ρ` of `G`.
    pub cols: Vec<String>,
    pub entries: Vec<Vec<i64>>,
}

impl MultiplicityMatrix {
    pub fn key(&self) -> String {
        format!("{}<{}<{}", self.l_label, self.p_label, self.g_label)
    }

    pub fn zero(g: &str, l: &str, p: &str, rows: Vec<String>, cols: Vec<String>) -> Self {
        let entries = vec![vec![0; cols.len()]; rows.len()];
        MultiplicityMatrix {
            g_label: g.into(),
            l_label: l.into(),
            p_label: p.into(),
            rows,
            cols,
            entries,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.entries.len() == self.rows.len()
            && self.entries.iter().all(|r| r.len() == self.cols.len())
    }

    /// `ψ ↦ m(ψ, ρ)` for one character `ρ` of `G`.
    pub fn column(&self, rho: &str) -> Result<BTreeMap<String, i64>> {
        let j = self
            .cols
            .iter()
            .position(|c| c == rho)
            .ok_or_else(|| Error::UnknownCharacter {
                group: self.g_label.clone(),
                name: rho.to_string(),
            })?;
        Ok(self
            .rows
            .iter()
            .zip(&self.entries)
            .map(|(psi, row)| (psi.clone(), row[j]))
            .collect())
    }
}

/// `R_{L⊆P}(ψ)(u_k) = Σ_j c_j·Q(u_k, v_j)·ψ(v_j)`.
pub fn induce_unipotent(q: &GreenTable, psi: &ClassFunction) -> Result<ClassFunction> {
    if q.q.len() != q.u_classes.len()
        || q.weights.len() != q.v_classes.len()
        || q.q.iter().any(|r| r.len() != q.v_classes.len())
    {
        return Err(Error::DimensionMismatch(format!("Green table {}", q.key())));
    }
    let psi_v = q
        .v_classes
        .iter()
        .map(|v| psi.get(v).cloned())
        .collect::<Result<Vec<_>>>()?;
    let weighted = psi_v
        .iter()
        .zip(&q.weights)
        .map(|(p, c)| p.mul(c))
        .collect::<Result<Vec<_>>>()?;
    let mut out = ClassFunction::new(&q.g_label, None);
    if let Some(n) = &psi.name {
        out.name = Some(format!("R({n})"));
    }
    for (u, row) in q.u_classes.iter().zip(&q.q) {
        let mut acc = GenValue::zero();
        for (x, w) in row.iter().zip(&weighted) {
            if !x.is_zero() && !w.is_zero() {
                acc = acc.add(&x.mul(w)?)?;
            }
        }
        out.values.insert(u.clone(), acc);
    }
    Ok(out)
}

/// `ρ(su) = Σ_ψ m(ψ, ρ)·θ_ψ(s)·ψ(u)`, with `θ_ψ(s)` from `twists` (1 when absent).
pub fn schewe_value(
    m: &BTreeMap<String, i64>,
    psi_values: &BTreeMap<String, ClassFunction>,
    u: &str,
    twists: &BTreeMap<String, CycNum>,
) -> Result<GenValue> {
    let mut acc = GenValue::zero();
    for (psi, &k) in m {
        if k == 0 {
            continue;
        }
        let f = psi_values.get(psi).ok_or_else(|| {
            Error::SupportMismatch(format!("no values for {psi}, which has multiplicity {k}"))
        })?;
        let mut term = f.get(u)?.scale_int(k);
        if let Some(t) = twists.get(psi) {
            term = term.scale(t);
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// The unique integer vector `m` with `Σ_i m_i·ρ_i(u) = R(u)` for every
/// class `u` in `classes`.
pub fn decompose_induction(
    r_values: &ClassFunction,
    candidates: &[ClassFunction],
    classes: &[String],
) -> Result<Vec<i64>> {
    let name = r_values.label().to_string();
    let a = classes
        .iter()
        .map(|u| {
            candidates
                .iter()
                .map(|rho| rho.get(u).cloned())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let b = classes
        .iter()
        .map(|u| Ok(vec![r_values.get(u)?.clone()]))
        .collect::<Result<Vec<_>>>()?;
    if candidates.is_empty() {
        return if b.iter().all(|r| r[0].is_zero()) {
            Ok(Vec::new())
        } else {
            Err(Error::Inconsistent(format!(
                "{name} is nonzero but there are no candidates"
            )))
        };
    }
    let x = solve_full_rank(&a, &b).map_err(|e| match e {
        Error::RankDeficient { rank, expected, .. } => Error::RankDeficient {
            rank,
            expected,
            context: format!("candidate values for {name}"),
        },
        Error::Inconsistent(msg) => Error::Inconsistent(format!("{name}: {msg}")),
        other => other,
    })?;
    x.iter()
        .zip(candidates)
        .map(|(row, rho)| {
            row[0]
                .as_integer()
                .and_then(|i| i64::try_from(i).ok())
                .ok_or_else(|| {
                    Error::NoIntegerSolution(format!(
                        "coefficient of {} in {name} is {}",
                        rho.label(),
                        row[0]
                    ))
                })
        })
        .collect()
}
