//! Characters on an F-stable class that splits into several rational classes.
//!
//! With children `C_1..C_k` and class functions `χ_0..χ_{k-1}` supported on
//! their union, `ε_{C_i} = Σ_j A[i][j]·χ_j`. Knowing `⟨ρ, χ_j⟩` for every `j`
//! then gives `ρ(g_i) = ⟨ρ, ε_{C_i}⟩`.

use std::collections::BTreeMap;

use crate::cyclo::{identity_equal, CycNum, GenValue};
use crate::error::{Error, Result};
use crate::linalg::{determinant, solve_square};
use crate::table::{inner_product, ClassFunction, GenericGroup, IssueKind, ValidationReport};
use crate::uniform::{value_via_uniform, DLRegistry};

#[derive(Clone, Debug, PartialEq)]
pub struct SplitClassDatum {
    pub group: String,
    /// Label of the F-stable class.
    pub parent: String,
    pub children: Vec<String>,
    /// Names of `χ_0..χ_{k-1}`; `χ_0` is the indicator of the parent.
    pub chi_functions: Vec<String>,
    /// `A[i][j]`, the coefficient of `χ_j` in `ε_{C_i}`.
    pub coefficients: Vec<Vec<CycNum>>,
    /// `values[i][j] = χ_j(C_i)`.
    pub values: Vec<Vec<GenValue>>,
    /// Optional expansions of `χ_j` in irreducible characters.
    pub expansions: BTreeMap<String, BTreeMap<String, GenValue>>,
}

impl SplitClassDatum {
    pub fn k(&self) -> usize {
        self.children.len()
    }

    fn coefficient_values(&self) -> Vec<Vec<GenValue>> {
        self.coefficients
            .iter()
            .map(|r| r.iter().cloned().map(GenValue::from_cyc).collect())
            .collect()
    }

    /// `χ_j` as a class function on the children.
    pub fn chi(&self, j: usize) -> ClassFunction {
        let mut f = ClassFunction::new(&self.group, Some(&self.chi_functions[j]));
        for (i, c) in self.children.iter().enumerate() {
            f.values.insert(c.clone(), self.values[i][j].clone());
        }
        f
    }

    pub fn chi_index(&self, name: &str) -> Result<usize> {
        self.chi_functions
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownCharacter {
                group: self.group.clone(),
                name: name.to_string(),
            })
    }

    /// `Σ_j A[i][j]·χ_j(C_l)`, i.e. `ε_{C_i}` on the children.
    pub fn indicator_on_children(&self, i: usize) -> Result<Vec<GenValue>> {
        (0..self.k())
            .map(|l| {
                let mut acc = GenValue::zero();
                for (a, x) in self.coefficients[i].iter().zip(&self.values[l]) {
                    acc = acc.add(&x.scale(a))?;
                }
                Ok(acc)
            })
            .collect()
    }

    /// `Σ_i ε_{C_i}` on the children.
    pub fn indicator_sum(&self) -> Result<Vec<GenValue>> {
        let mut acc = vec![GenValue::zero(); self.k()];
        for i in 0..self.k() {
            for (slot, x) in acc.iter_mut().zip(self.indicator_on_children(i)?) {
                *slot = slot.add(&x)?;
            }
        }
        Ok(acc)
    }

    /// `⟨χ_a, χ_b⟩` from the expansions, taking the irreducibles orthonormal.
    pub fn expansion_inner(&self, a: &str, b: &str) -> Result<GenValue> {
        let missing =
            |n: &str| Error::MissingData(format!("no expansion of {n} for {}", self.parent));
        let ea = self.expansions.get(a).ok_or_else(|| missing(a))?;
        let eb = self.expansions.get(b).ok_or_else(|| missing(b))?;
        let mut acc = GenValue::zero();
        for (rho, x) in ea {
            if let Some(y) = eb.get(rho) {
                acc = acc.add(&x.mul(&y.conj())?)?;
            }
        }
        Ok(acc)
    }
}

/// Checks the datum against `g` and, where available, against the class
/// functions in `characters` named by the expansions.
pub fn validate_split(
    d: &SplitClassDatum,
    g: &GenericGroup,
    characters: &BTreeMap<String, ClassFunction>,
) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let k = d.k();
    let subject = format!("{}/{}", d.group, d.parent);
    if d.group != g.name {
        rep.push(
            IssueKind::UnknownReference,
            &subject,
            format!("group is not {}", g.name),
        );
        return rep;
    }
    if d.chi_functions.len() != k
        || d.coefficients.len() != k
        || d.values.len() != k
        || d.coefficients.iter().any(|r| r.len() != k)
        || d.values.iter().any(|r| r.len() != k)
    {
        rep.push(
            IssueKind::SplitMismatch,
            &subject,
            format!("expected {k}×{k} data"),
        );
        return rep;
    }
    let mut cents = Vec::new();
    for c in &d.children {
        match g.class(c) {
            Err(e) => {
                rep.push(IssueKind::UnknownClass, &subject, e.to_string());
                return rep;
            }
            Ok(cls) => {
                if cls.split_parent.as_deref() != Some(d.parent.as_str()) {
                    rep.push(
                        IssueKind::SplitMismatch,
                        format!("{}/{c}", d.group),
                        format!("not marked as split from {}", d.parent),
                    );
                }
                if !d.children.contains(&cls.inverse_class) {
                    rep.push(
                        IssueKind::SplitMismatch,
                        format!("{}/{c}", d.group),
                        format!("inverse {} is outside the split class", cls.inverse_class),
                    );
                }
                cents.push(cls.centralizer_order.clone());
            }
        }
    }
    match determinant(&d.coefficient_values()) {
        Ok(det) if !det.is_zero() => {}
        _ => rep.push(
            IssueKind::SplitMismatch,
            &subject,
            "coefficient matrix is singular",
        ),
    }
    for i in 0..k {
        let row = match d.indicator_on_children(i) {
            Ok(r) => r,
            Err(e) => {
                rep.push(IssueKind::SplitMismatch, &subject, e.to_string());
                continue;
            }
        };
        for (l, x) in row.iter().enumerate() {
            let expect = if i == l {
                cents[i].clone()
            } else {
                GenValue::zero()
            };
            if !identity_equal(x, &expect).unwrap_or(false) {
                rep.push(
                    IssueKind::SplitMismatch,
                    format!("{}/{}", d.group, d.children[i]),
                    format!(
                        "combination gives {x} at {}, expected {expect}",
                        d.children[l]
                    ),
                );
            }
        }
    }
    // χ_j(g^{-1}) = conj(χ_j(g)).
    for (i, c) in d.children.iter().enumerate() {
        let Ok(cls) = g.class(c) else { continue };
        let Some(inv) = d.children.iter().position(|x| *x == cls.inverse_class) else {
            continue;
        };
        for j in 0..k {
            if !identity_equal(&d.values[inv][j], &d.values[i][j].conj()).unwrap_or(false) {
                rep.push(
                    IssueKind::SplitMismatch,
                    format!("{}/{c}", d.group),
                    format!(
                        "{} is not conjugate at the inverse class",
                        d.chi_functions[j]
                    ),
                );
            }
        }
    }
    // Expansions against stored characters, when every constituent is known.
    for (j, name) in d.chi_functions.iter().enumerate() {
        let Some(exp) = d.expansions.get(name) else {
            continue;
        };
        if !exp
            .keys()
            .all(|r| characters.get(r).is_some_and(|f| f.covers(&d.children)))
        {
            continue;
        }
        let terms: Vec<(GenValue, &ClassFunction)> = exp
            .iter()
            .map(|(r, c)| (c.clone(), &characters[r]))
            .collect();
        let ok = crate::table::combine(&terms)
            .and_then(|f| f.restrict(&d.children))
            .and_then(|f| f.identity_equal(&d.chi(j)));
        if !matches!(ok, Ok(true)) {
            rep.push(
                IssueKind::SplitMismatch,
                format!("{}/{name}", d.group),
                "expansion disagrees with the value table",
            );
        }
    }
    rep
}

/// `ρ(g_i) = Σ_j conj(A[i][j])·⟨ρ, χ_j⟩`.
pub fn evaluate_on_split(ip: &[GenValue], d: &SplitClassDatum) -> Result<Vec<GenValue>> {
    if ip.len() != d.k() {
        return Err(Error::DimensionMismatch(format!(
            "{} inner products for {} split classes of {}",
            ip.len(),
            d.k(),
            d.parent
        )));
    }
    d.coefficients
        .iter()
        .map(|row| {
            let mut acc = GenValue::zero();
            for (a, x) in row.iter().zip(ip) {
                acc = acc.add(&x.scale(&a.conj()))?;
            }
            Ok(acc)
        })
        .collect()
}

/// Inverse of [`evaluate_on_split`]: the inner products from the values.
pub fn inner_products_from_values(
    values: &[GenValue],
    d: &SplitClassDatum,
) -> Result<Vec<GenValue>> {
    if values.len() != d.k() {
        return Err(Error::DimensionMismatch(format!("{} values", values.len())));
    }
    let a: Vec<Vec<GenValue>> = d
        .coefficients
        .iter()
        .map(|r| r.iter().map(|x| GenValue::from_cyc(x.conj())).collect())
        .collect();
    let b: Vec<Vec<GenValue>> = values.iter().map(|v| vec![v.clone()]).collect();
    Ok(solve_square(&a, &b)?
        .into_iter()
        .map(|mut r| r.remove(0))
        .collect())
}

/// `⟨ρ, χ_0⟩ = ⟨ρ, ε_{C^F}⟩`, through the uniform expansion of each child
/// weighted by its share `|C_i| / |C^F|` of the F-stable class.
pub fn chi0_inner(
    rho_mults: &BTreeMap<String, i64>,
    reg: &DLRegistry,
    g: &GenericGroup,
    d: &SplitClassDatum,
) -> Result<GenValue> {
    let sizes = d
        .children
        .iter()
        .map(|c| g.class_size(c))
        .collect::<Result<Vec<_>>>()?;
    let total = GenValue::sum(&sizes)?;
    let mut acc = GenValue::zero();
    for (c, s) in d.children.iter().zip(&sizes) {
        let rho = value_via_uniform(rho_mults, reg, g, c)?;
        acc = acc.add(&rho.mul(s)?.div(&total)?)?;
    }
    Ok(acc)
}

/// `⟨χ_a, χ_b⟩` over the children, from the value table.
pub fn table_inner(d: &SplitClassDatum, g: &GenericGroup, a: usize, b: usize) -> Result<GenValue> {
    Ok(inner_product(g, &d.chi(a), &d.chi(b), Some(&d.children))?.value)
}
