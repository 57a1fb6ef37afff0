//! Deligne–Lusztig registries and uniform functions.

use std::collections::BTreeMap;

use crate::cyclo::{identity_equal, GenValue};
use crate::error::{Error, Result};
use crate::table::{
    inner_product, validate_class_function, ClassFunction, GenericGroup, IssueKind,
    ValidationReport,
};

/// One `G^F`-orbit of pairs `(T, θ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DLDatum {
    pub label: String,
    /// `|T^F|`.
    pub torus_order: GenValue,
    /// The virtual character `R_{T,θ}`, possibly on a partial support.
    pub values: ClassFunction,
    /// `⟨R_{T,θ}, ρ⟩` by character name; absent names have multiplicity 0.
    pub multiplicities: BTreeMap<String, i64>,
    /// Number of pairs in the orbit.
    pub orbit_size: GenValue,
}

/// The pairs `(T, θ)` of a group, listed by orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct DLRegistry {
    pub group: String,
    pub entries: Vec<DLDatum>,
    /// `inverse_pairing[i]` is the orbit of `(T, θ^{-1})`.
    pub inverse_pairing: Vec<usize>,
    /// Number of F-stable maximal tori; when present the registry is checked
    /// to account for all of them.
    pub torus_count: Option<GenValue>,
}

impl DLRegistry {
    pub fn entry(&self, label: &str) -> Result<&DLDatum> {
        self.entries
            .iter()
            .find(|e| e.label == label)
            .ok_or_else(|| Error::IncompleteRegistry(format!("no entry {label} in {}", self.group)))
    }

    /// `Σ orbit_size / |T^F|`, the number of tori the registry accounts for.
    pub fn tori_accounted(&self) -> Result<GenValue> {
        let mut acc = GenValue::zero();
        for e in &self.entries {
            acc = acc.add(&e.orbit_size.div(&e.torus_order)?)?;
        }
        Ok(acc)
    }

    /// Fails unless the registry provably lists every orbit.
    pub fn ensure_complete(&self) -> Result<()> {
        let Some(count) = &self.torus_count else {
            return Err(Error::IncompleteRegistry(format!(
                "registry of {} declares no torus count",
                self.group
            )));
        };
        if !identity_equal(&self.tori_accounted()?, count)? {
            return Err(Error::IncompleteRegistry(format!(
                "registry of {} accounts for {} tori, expected {count}",
                self.group,
                self.tori_accounted()?
            )));
        }
        Ok(())
    }

    fn ensure_values(&self, classes: &[String]) -> Result<()> {
        for e in &self.entries {
            if let Some(c) = classes.iter().find(|c| !e.values.values.contains_key(*c)) {
                return Err(Error::IncompleteRegistry(format!(
                    "{} has no value at class {c}",
                    e.label
                )));
            }
        }
        Ok(())
    }
}

/// Checks the pairing, the values and the torus count of `reg`.
pub fn validate_registry(reg: &DLRegistry, g: &GenericGroup) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let n = reg.entries.len();
    if reg.group != g.name {
        rep.push(
            IssueKind::UnknownReference,
            &reg.group,
            format!("registry group differs from {}", g.name),
        );
    }
    if reg.inverse_pairing.len() != n {
        rep.push(
            IssueKind::RegistryMismatch,
            &reg.group,
            format!("{} pairing entries for {n} data", reg.inverse_pairing.len()),
        );
        return rep;
    }
    for (i, &j) in reg.inverse_pairing.iter().enumerate() {
        let e = &reg.entries[i];
        if j >= n || reg.inverse_pairing[j] != i {
            rep.push(
                IssueKind::RegistryMismatch,
                &e.label,
                "inverse pairing is not an involution",
            );
            continue;
        }
        let f = &reg.entries[j];
        if e.torus_order != f.torus_order {
            rep.push(
                IssueKind::RegistryMismatch,
                &e.label,
                format!("paired with {} of different torus order", f.label),
            );
        }
        for (c, v) in &e.values.values {
            if let Some(w) = f.values.values.get(c) {
                if !identity_equal(&v.conj(), w).unwrap_or(false) {
                    rep.push(
                        IssueKind::RegistryMismatch,
                        format!("{}@{c}", e.label),
                        format!("value at the inverse pair {} is not the conjugate", f.label),
                    );
                }
            }
        }
    }
    for e in &reg.entries {
        rep.extend(validate_class_function(&e.values, g));
    }
    if reg.torus_count.is_some() {
        if let Err(err) = reg.ensure_complete() {
            rep.push(IssueKind::RegistryMismatch, &reg.group, err.to_string());
        }
    }
    rep
}

fn support_classes(g: &GenericGroup, f: &ClassFunction) -> Vec<String> {
    g.classes
        .iter()
        .filter(|c| f.values.contains_key(&c.name))
        .map(|c| c.name.clone())
        .collect()
}

/// `|G^F|^{-1} Σ orbit_size·|T^F|·⟨f, R_{T,θ}⟩·R_{T,θ}` on the support of `f`.
pub fn uniform_project(
    f: &ClassFunction,
    reg: &DLRegistry,
    g: &GenericGroup,
) -> Result<ClassFunction> {
    if f.group != g.name || reg.group != g.name {
        return Err(Error::SupportMismatch(format!(
            "{} and the registry of {} do not belong to {}",
            f.label(),
            reg.group,
            g.name
        )));
    }
    reg.ensure_complete()?;
    let classes = support_classes(g, f);
    if classes.len() != f.values.len() {
        return Err(Error::SupportMismatch(format!(
            "{} is defined outside the classes of {}",
            f.label(),
            g.name
        )));
    }
    reg.ensure_values(&classes)?;
    let mut out = ClassFunction::new(&g.name, f.name.as_deref());
    for c in &classes {
        out.values.insert(c.clone(), GenValue::zero());
    }
    for e in &reg.entries {
        let ip = inner_product(g, f, &e.values, Some(&classes))?.value;
        if ip.is_zero() {
            continue;
        }
        let w = e.orbit_size.mul(&e.torus_order)?.mul(&ip)?.div(&g.order)?;
        for c in &classes {
            let r = &e.values.values[c];
            if !r.is_zero() {
                let slot = out.values.get_mut(c).expect("initialised");
                *slot = slot.add(&w.mul(r)?)?;
            }
        }
    }
    Ok(out)
}

/// True iff `f` equals its uniform projection.
pub fn is_uniform(f: &ClassFunction, reg: &DLRegistry, g: &GenericGroup) -> Result<bool> {
    uniform_project(f, reg, g)?.identity_equal(f)
}

/// The value at `class` of the character with multiplicities `mults`
/// (`⟨R_{T,θ}, ρ⟩` by registry label), through the uniform expansion of the
/// class indicator:
///
/// `ρ(g) = |G^F|^{-1} Σ orbit_size·|T^F|·⟨R_{T,θ}, ρ⟩·R_{T,θ}(g)`.
///
/// Valid when the centralizer of `g` is connected, which the data asserts.
pub fn value_via_uniform(
    mults: &BTreeMap<String, i64>,
    reg: &DLRegistry,
    g: &GenericGroup,
    class: &str,
) -> Result<GenValue> {
    g.class(class)?;
    reg.ensure_complete()?;
    for label in mults.keys() {
        reg.entry(label)?;
    }
    let mut acc = GenValue::zero();
    for e in &reg.entries {
        let m = mults.get(&e.label).copied().unwrap_or(0);
        if m == 0 {
            continue;
        }
        let r = e.values.values.get(class).ok_or_else(|| {
            Error::IncompleteRegistry(format!("{} has no value at class {class}", e.label))
        })?;
        acc = acc.add(&e.orbit_size.mul(&e.torus_order)?.mul(r)?.scale_int(m))?;
    }
    acc.div(&g.order)
}

/// Multiplicities of the character `name` over all registry entries.
pub fn multiplicities_of(reg: &DLRegistry, name: &str) -> BTreeMap<String, i64> {
    reg.entries
        .iter()
        .filter_map(|e| {
            e.multiplicities
                .get(name)
                .filter(|&&m| m != 0)
                .map(|&m| (e.label.clone(), m))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CongruenceGuard;
    use crate::table::ClassFamily;

    fn v(s: &str) -> GenValue {
        s.parse().unwrap()
    }

    /// `G = T = Z/3`: each `R_{T,θ}` is the linear character `θ` itself.
    fn cyclic() -> (GenericGroup, DLRegistry) {
        let g = GenericGroup {
            name: "Z3".into(),
            order: v("3"),
            classes: vec![
                ClassFamily::new("1", v("3")),
                {
                    let mut c = ClassFamily::new("t", v("3"));
                    c.inverse_class = "t2".into();
                    c
                },
                {
                    let mut c = ClassFamily::new("t2", v("3"));
                    c.inverse_class = "t".into();
                    c
                },
            ],
            complete: true,
            guard: CongruenceGuard::trivial(),
            identity_class: Some("1".into()),
        };
        let lin = |k: i64| {
            ClassFunction::new("Z3", Some(&format!("theta{k}")))
                .with("1", v("1"))
                .with("t", v(&format!("z(3)^{k}")))
                .with("t2", v(&format!("z(3)^{}", 2 * k)))
        };
        let entries = (0..3)
            .map(|k| DLDatum {
                label: format!("theta{k}"),
                torus_order: v("3"),
                values: lin(k),
                multiplicities: BTreeMap::from([(format!("chi{k}"), 1)]),
                orbit_size: v("1"),
            })
            .collect();
        let reg = DLRegistry {
            group: "Z3".into(),
            entries,
            inverse_pairing: vec![0, 2, 1],
            torus_count: Some(v("1")),
        };
        (g, reg)
    }

    #[test]
    fn registry_is_consistent() {
        let (g, reg) = cyclic();
        let rep = validate_registry(&reg, &g);
        assert!(rep.is_empty(), "{rep}");
        let mut bad = reg.clone();
        bad.inverse_pairing = vec![0, 1, 2];
        assert!(validate_registry(&bad, &g).has(IssueKind::RegistryMismatch));
    }

    #[test]
    fn value_uses_theta_not_its_inverse() {
        let (g, reg) = cyclic();
        let chi1 = multiplicities_of(&reg, "chi1");
        assert_eq!(value_via_uniform(&chi1, &reg, &g, "t").unwrap(), v("z(3)"));
        assert_eq!(value_via_uniform(&chi1, &reg, &g, "1").unwrap(), v("1"));
        assert!(value_via_uniform(&BTreeMap::new(), &reg, &g, "t")
            .unwrap()
            .is_zero());
    }

    #[test]
    fn projection_fixes_everything_on_an_abelian_group() {
        let (g, reg) = cyclic();
        let f = ClassFunction::new("Z3", None)
            .with("1", v("q"))
            .with("t", v("1/2"))
            .with("t2", v("z(3)"));
        assert!(is_uniform(&f, &reg, &g).unwrap());
        let mut short = reg.clone();
        short.entries.pop();
        short.inverse_pairing = vec![0, 1];
        assert!(matches!(
            uniform_project(&f, &short, &g),
            Err(Error::IncompleteRegistry(_))
        ));
    }
}
