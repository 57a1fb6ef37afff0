//! Generic table fragments and the class-function calculus.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cyclo::{identity_equal, CongruenceGuard, CycNum, GenValue};
use crate::error::{Error, Result};

/// One named conjugacy class (or class representative for a guard variant).
#[derive(Clone, Debug, PartialEq)]
pub struct ClassFamily {
    pub name: String,
    pub centralizer_order: GenValue,
    pub inverse_class: String,
    pub is_unipotent: bool,
    pub semisimple_label: Option<String>,
    pub guard: CongruenceGuard,
    /// The F-stable class this rational class was split from.
    pub split_parent: Option<String>,
    /// Asserted by the data, never verified.
    pub connected_centralizer: Option<bool>,
}

impl ClassFamily {
    pub fn new(name: &str, centralizer_order: GenValue) -> Self {
        ClassFamily {
            name: name.to_string(),
            centralizer_order,
            inverse_class: name.to_string(),
            is_unipotent: false,
            semisimple_label: None,
            guard: CongruenceGuard::trivial(),
            split_parent: None,
            connected_centralizer: None,
        }
    }
}

/// A table fragment: a group order and a list of classes.
#[derive(Clone, Debug, PartialEq)]
pub struct GenericGroup {
    pub name: String,
    pub order: GenValue,
    pub classes: Vec<ClassFamily>,
    /// Whether `classes` is exhaustive for every admissible `q`.
    pub complete: bool,
    /// Guard under which the whole fragment is valid.
    pub guard: CongruenceGuard,
    pub identity_class: Option<String>,
}

impl GenericGroup {
    pub fn class(&self, name: &str) -> Result<&ClassFamily> {
        self.classes
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::UnknownClass {
                group: self.name.clone(),
                class: name.to_string(),
            })
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    pub fn class_names(&self) -> Vec<String> {
        self.classes.iter().map(|c| c.name.clone()).collect()
    }

    pub fn unipotent_classes(&self) -> Vec<String> {
        self.classes
            .iter()
            .filter(|c| c.is_unipotent)
            .map(|c| c.name.clone())
            .collect()
    }

    /// `|C| = |G| / |C_G(g)|`.
    pub fn class_size(&self, name: &str) -> Result<GenValue> {
        self.order.div(&self.class(name)?.centralizer_order)
    }

    /// Classes belonging to the same F-stable class `parent`.
    pub fn split_children(&self, parent: &str) -> Vec<String> {
        self.classes
            .iter()
            .filter(|c| c.split_parent.as_deref() == Some(parent))
            .map(|c| c.name.clone())
            .collect()
    }
}

/// Kinds of invariant violation found by the validators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IssueKind {
    DuplicateClass,
    NonPolynomialOrder,
    NonPolynomialClassSize,
    NonPositiveCentralizer,
    UnknownInverse,
    InverseMismatch,
    InverseNotInvolution,
    MissingIdentity,
    IdentityMismatch,
    OrderSumMismatch,
    GuardConflict,
    UnknownClass,
    ValueGuardConflict,
    SplitMismatch,
    RegistryMismatch,
    UnknownReference,
    SeriesMismatch,
    SignMismatch,
}

impl fmt::Display for IssueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub kind: IssueKind,
    /// Table, class or character the issue refers to.
    pub subject: String,
    pub detail: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.kind, self.subject, self.detail)
    }
}

/// Outcome of a validation pass; empty iff every invariant holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn push(&mut self, kind: IssueKind, subject: impl Into<String>, detail: impl Into<String>) {
        self.issues.push(Issue {
            kind,
            subject: subject.into(),
            detail: detail.into(),
        });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.issues.extend(other.issues);
    }

    pub fn has(&self, kind: IssueKind) -> bool {
        self.issues.iter().any(|i| i.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

/// Checks every structural invariant of `g`.
pub fn validate_group(g: &GenericGroup) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let subject = |c: &str| format!("{}/{}", g.name, c);
    if !g.order.is_polynomial() {
        rep.push(
            IssueKind::NonPolynomialOrder,
            &g.name,
            format!("order {}", g.order),
        );
    }
    let mut seen = BTreeSet::new();
    for c in &g.classes {
        if !seen.insert(c.name.as_str()) {
            rep.push(
                IssueKind::DuplicateClass,
                subject(&c.name),
                "name occurs twice",
            );
        }
    }
    let by_name: HashMap<&str, &ClassFamily> =
        g.classes.iter().map(|c| (c.name.as_str(), c)).collect();

    for c in &g.classes {
        if !c.guard.compatible(&g.guard) {
            rep.push(
                IssueKind::GuardConflict,
                subject(&c.name),
                format!("class guard {} excludes group guard {}", c.guard, g.guard),
            );
        }
        if !c.centralizer_order.is_polynomial() || !c.centralizer_order.is_eventually_positive() {
            rep.push(
                IssueKind::NonPositiveCentralizer,
                subject(&c.name),
                format!("centralizer order {}", c.centralizer_order),
            );
        }
        match g.order.div(&c.centralizer_order) {
            Ok(size) if size.is_polynomial() => {}
            Ok(size) => rep.push(
                IssueKind::NonPolynomialClassSize,
                subject(&c.name),
                format!("class size {size}"),
            ),
            Err(e) => rep.push(
                IssueKind::NonPolynomialClassSize,
                subject(&c.name),
                e.to_string(),
            ),
        }
        match by_name.get(c.inverse_class.as_str()) {
            None => rep.push(
                IssueKind::UnknownInverse,
                subject(&c.name),
                format!("inverse class {} does not exist", c.inverse_class),
            ),
            Some(inv) => {
                if inv.inverse_class != c.name {
                    rep.push(
                        IssueKind::InverseNotInvolution,
                        subject(&c.name),
                        format!("{} -> {} -> {}", c.name, inv.name, inv.inverse_class),
                    );
                }
                if inv.centralizer_order != c.centralizer_order || inv.guard != c.guard {
                    rep.push(
                        IssueKind::InverseMismatch,
                        subject(&c.name),
                        format!("inverse {} has different centralizer or guard", inv.name),
                    );
                }
            }
        }
    }

    if let Some(id) = &g.identity_class {
        match by_name.get(id.as_str()) {
            None => rep.push(
                IssueKind::MissingIdentity,
                &g.name,
                format!("no class {id}"),
            ),
            Some(c) => {
                let same = identity_equal(&c.centralizer_order, &g.order).unwrap_or(false);
                if c.inverse_class != c.name || !same {
                    rep.push(
                        IssueKind::IdentityMismatch,
                        subject(id),
                        "identity must be self-inverse with centralizer equal to the group order",
                    );
                }
            }
        }
    }

    if g.complete {
        check_order_sum(g, &mut rep);
    }
    rep
}

/// For every residue variant of the class guards, the class sizes of the
/// classes present under that variant must add up to the group order.
fn check_order_sum(g: &GenericGroup, rep: &mut ValidationReport) {
    let modulus = g
        .classes
        .iter()
        .fold(g.guard.modulus(), |m, c| m.lcm(&c.guard.modulus()));
    for variant in g.guard.refine(modulus) {
        let mut sum = GenValue::zero();
        for c in g.classes.iter().filter(|c| c.guard.compatible(&variant)) {
            let size = match g.order.div(&c.centralizer_order) {
                Ok(s) => s,
                Err(_) => return,
            };
            sum = match sum.add(&size.set_guard(CongruenceGuard::trivial())) {
                Ok(s) => s,
                Err(_) => return,
            };
        }
        let order = g.order.clone().set_guard(CongruenceGuard::trivial());
        if !identity_equal_at_variant(&sum, &order, &variant) {
            rep.push(
                IssueKind::OrderSumMismatch,
                &g.name,
                format!("under {variant}: sum of class sizes is {sum}, order is {order}"),
            );
        }
    }
}

fn identity_equal_at_variant(a: &GenValue, b: &GenValue, variant: &CongruenceGuard) -> bool {
    match (a.clone().with_guard(variant), b.clone().with_guard(variant)) {
        (Ok(a), Ok(b)) => identity_equal(&a, &b).unwrap_or(false),
        _ => false,
    }
}

/// A class function given on `support`, the key set of `values`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassFunction {
    pub name: Option<String>,
    pub group: String,
    pub values: BTreeMap<String, GenValue>,
}

impl ClassFunction {
    pub fn new(group: &str, name: Option<&str>) -> Self {
        ClassFunction {
            name: name.map(str::to_string),
            group: group.to_string(),
            values: BTreeMap::new(),
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn with(mut self, class: &str, v: GenValue) -> Self {
        self.values.insert(class.to_string(), v);
        self
    }

    pub fn label(&self) -> &str {
        self.name.as_deref().unwrap_or("<anonymous>")
    }

    pub fn support(&self) -> impl Iterator<Item = &String> {
        self.values.keys()
    }

    pub fn get(&self, class: &str) -> Result<&GenValue> {
        self.values.get(class).ok_or_else(|| {
            Error::SupportMismatch(format!("{} is not defined at {}", self.label(), class))
        })
    }

    pub fn covers<'a>(&self, classes: impl IntoIterator<Item = &'a String>) -> bool {
        classes.into_iter().all(|c| self.values.contains_key(c))
    }

    /// Pointwise complex conjugate, i.e. `g ↦ f(g^{-1})` for characters.
    pub fn conj(&self) -> ClassFunction {
        ClassFunction {
            name: self.name.as_ref().map(|n| format!("conj({n})")),
            group: self.group.clone(),
            values: self
                .values
                .iter()
                .map(|(k, v)| (k.clone(), v.conj()))
                .collect(),
        }
    }

    pub fn restrict(&self, classes: &[String]) -> Result<ClassFunction> {
        let mut out = ClassFunction::new(&self.group, self.name.as_deref());
        for c in classes {
            out.values.insert(c.clone(), self.get(c)?.clone());
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(GenValue::is_zero)
    }

    /// Symbolic equality on the common support, which must coincide.
    pub fn identity_equal(&self, other: &ClassFunction) -> Result<bool> {
        if self.values.len() != other.values.len() || !self.covers(other.values.keys()) {
            return Ok(false);
        }
        for (k, v) in &self.values {
            if !identity_equal(v, &other.values[k])? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Checks a class function against its group.
pub fn validate_class_function(f: &ClassFunction, g: &GenericGroup) -> ValidationReport {
    let mut rep = ValidationReport::default();
    if f.group != g.name {
        rep.push(
            IssueKind::UnknownReference,
            f.label(),
            format!("belongs to {}, not {}", f.group, g.name),
        );
        return rep;
    }
    for (class, v) in &f.values {
        match g.class(class) {
            Err(_) => rep.push(
                IssueKind::UnknownClass,
                format!("{}@{}", f.label(), class),
                format!("{} has no class {class}", g.name),
            ),
            Ok(c) => {
                if !v.guard().compatible(&c.guard) || !v.guard().compatible(&g.guard) {
                    rep.push(
                        IssueKind::ValueGuardConflict,
                        format!("{}@{}", f.label(), class),
                        format!("value guard {} vs class guard {}", v.guard(), c.guard),
                    );
                }
            }
        }
    }
    rep
}

/// A value of `⟨f, g⟩` together with whether it was taken over every class of
/// a complete group.
#[derive(Clone, Debug, PartialEq)]
pub struct InnerProduct {
    pub value: GenValue,
    pub partial: bool,
}

/// `Σ_{C ∈ over} f(C)·conj(g(C)) / |C_G(g_C)|`; all classes when `over` is
/// `None`.
pub fn inner_product(
    g: &GenericGroup,
    f: &ClassFunction,
    h: &ClassFunction,
    over: Option<&[String]>,
) -> Result<InnerProduct> {
    for func in [f, h] {
        if func.group != g.name {
            return Err(Error::SupportMismatch(format!(
                "{} belongs to {}, not {}",
                func.label(),
                func.group,
                g.name
            )));
        }
    }
    let all = g.class_names();
    let over = over.unwrap_or(&all);
    let mut acc = GenValue::zero();
    for c in over {
        let cent = &g.class(c)?.centralizer_order;
        let a = f.get(c)?;
        let b = h.get(c)?;
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let term = a.mul(&b.conj())?.div(cent)?;
        acc = acc.add(&term)?;
    }
    let full = g.complete && over.len() == all.len() && all.iter().all(|c| over.contains(c));
    Ok(InnerProduct {
        value: acc,
        partial: !full,
    })
}

/// The normalised indicator `ε_C`: `|C_G(g)|` on `C`, zero elsewhere.
pub fn indicator(g: &GenericGroup, class: &str) -> Result<ClassFunction> {
    let c = g.class(class)?;
    let mut f = ClassFunction::new(&g.name, Some(&format!("eps({class})")));
    for other in &g.classes {
        let v = if other.name == class {
            c.centralizer_order.clone()
        } else {
            GenValue::zero()
        };
        f.values.insert(other.name.clone(), v);
    }
    Ok(f)
}

/// `ε` of the F-stable class whose rational classes are the split children
/// of `parent`: `Σ_i (|C_i| / Σ_j |C_j|) · ε_{C_i}`.
pub fn parent_indicator(g: &GenericGroup, parent: &str) -> Result<ClassFunction> {
    let children = g.split_children(parent);
    if children.is_empty() {
        return Err(Error::UnknownClass {
            group: g.name.clone(),
            class: parent.to_string(),
        });
    }
    let sizes = children
        .iter()
        .map(|c| g.class_size(c))
        .collect::<Result<Vec<_>>>()?;
    let total = GenValue::sum(&sizes)?;
    let mut terms = Vec::new();
    for (c, s) in children.iter().zip(&sizes) {
        terms.push((s.div(&total)?, indicator(g, c)?));
    }
    let refs: Vec<(GenValue, &ClassFunction)> = terms.iter().map(|(a, f)| (a.clone(), f)).collect();
    Ok(combine(&refs)?.named(&format!("eps({parent})")))
}

/// Pointwise linear combination on the common support.
pub fn combine(terms: &[(GenValue, &ClassFunction)]) -> Result<ClassFunction> {
    let Some((_, first)) = terms.first() else {
        return Err(Error::SupportMismatch("empty linear combination".into()));
    };
    let mut support: BTreeSet<&String> = first.values.keys().collect();
    for (_, f) in terms {
        if f.group != first.group {
            return Err(Error::SupportMismatch(format!(
                "{} and {} belong to different groups",
                first.label(),
                f.label()
            )));
        }
        support.retain(|c| f.values.contains_key(*c));
    }
    if support.is_empty() {
        return Err(Error::SupportMismatch("supports do not intersect".into()));
    }
    let mut out = ClassFunction::new(&first.group, None);
    for c in support {
        let mut acc = GenValue::zero();
        for (a, f) in terms {
            let v = &f.values[c];
            if !a.is_zero() && !v.is_zero() {
                acc = acc.add(&a.mul(v)?)?;
            }
        }
        out.values.insert(c.clone(), acc);
    }
    Ok(out)
}

/// `combine` with cyclotomic scalars.
pub fn combine_scalars(terms: &[(CycNum, &ClassFunction)]) -> Result<ClassFunction> {
    let lifted: Vec<(GenValue, &ClassFunction)> = terms
        .iter()
        .map(|(c, f)| (GenValue::from_cyc(c.clone()), *f))
        .collect();
    combine(&lifted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> GenValue {
        s.parse().unwrap()
    }

    /// The symmetric group on three letters as a fragment with constant values.
    fn s3() -> GenericGroup {
        let mut a = ClassFamily::new("1", v("6"));
        a.is_unipotent = true;
        GenericGroup {
            name: "S3".into(),
            order: v("6"),
            classes: vec![
                a,
                ClassFamily::new("t", v("2")),
                ClassFamily::new("c", v("3")),
            ],
            complete: true,
            guard: CongruenceGuard::trivial(),
            identity_class: Some("1".into()),
        }
    }

    fn chi(name: &str, vals: [&str; 3]) -> ClassFunction {
        ClassFunction::new("S3", Some(name))
            .with("1", v(vals[0]))
            .with("t", v(vals[1]))
            .with("c", v(vals[2]))
    }

    #[test]
    fn valid_fragment() {
        assert!(validate_group(&s3()).is_empty());
    }

    #[test]
    fn mutations_are_reported() {
        let mut g = s3();
        g.classes.pop();
        assert!(validate_group(&g).has(IssueKind::OrderSumMismatch));
        let mut g = s3();
        g.classes[1].inverse_class = "c".into();
        let r = validate_group(&g);
        assert!(r.has(IssueKind::InverseNotInvolution), "{r}");
        let mut g = s3();
        g.classes[2].centralizer_order = v("q");
        assert!(validate_group(&g).has(IssueKind::NonPolynomialClassSize));
    }

    #[test]
    fn orthogonality_and_indicators() {
        let g = s3();
        let sign = chi("sign", ["1", "-1", "1"]);
        let triv = chi("1", ["1", "1", "1"]);
        let ip = inner_product(&g, &sign, &triv, None).unwrap();
        assert!(ip.value.is_zero() && !ip.partial);
        assert!(inner_product(&g, &sign, &sign, None)
            .unwrap()
            .value
            .is_one());
        let eps = indicator(&g, "t").unwrap();
        assert_eq!(inner_product(&g, &sign, &eps, None).unwrap().value, v("-1"));
        assert_eq!(inner_product(&g, &eps, &eps, None).unwrap().value, v("2"));
        let part = inner_product(&g, &sign, &triv, Some(&["1".to_string()])).unwrap();
        assert!(part.partial);
    }

    #[test]
    fn combination() {
        let f = chi("f", ["q", "1", "z(3)"]);
        let zero = combine(&[(v("1"), &f), (v("-1"), &f)]).unwrap();
        assert!(zero.is_zero());
        let same = combine(&[(v("1"), &f)]).unwrap();
        assert!(same.identity_equal(&f).unwrap());
        let short = ClassFunction::new("S3", None).with("t", v("2"));
        let c = combine(&[(v("1"), &f), (v("1"), &short)]).unwrap();
        assert_eq!(c.values.len(), 1);
        let disjoint = ClassFunction::new("S3", None).with("x", v("2"));
        assert!(matches!(
            combine(&[(v("1"), &f), (v("1"), &disjoint)]),
            Err(Error::SupportMismatch(_))
        ));
    }
}
