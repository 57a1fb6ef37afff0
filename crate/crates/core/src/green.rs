//! Recovery of two-variable Green functions from multiplicities.
//!
//! For characters `ψ_1..ψ_n` of `L` and unipotent classes `u_1..u_N` of `G`,
//!
//! `Σ_ρ m(ψ_i, ρ)·ρ(u_k) = Σ_j c_j·Q(u_k, v_j)·ψ_i(v_j)`,
//!
//! and since `(ψ_i(v_j))` is square and invertible each `u_k` determines its
//! row of `Q` on its own.

use std::collections::BTreeMap;

use crate::cyclo::GenValue;
use crate::error::{Error, Result};
use crate::induction::{GreenTable, MultiplicityMatrix};
use crate::linalg::{mat_mul, solve_square, transpose};
use crate::table::ClassFunction;

/// `RHS[k][i] = Σ_ρ m(ψ_i, ρ)·ρ(u_k)`.
pub fn rhs_from_mult(
    m: &MultiplicityMatrix,
    rho_values: &BTreeMap<String, ClassFunction>,
    u_classes: &[String],
) -> Result<Vec<Vec<GenValue>>> {
    if !m.is_consistent() {
        return Err(Error::DimensionMismatch(format!(
            "multiplicity matrix {}",
            m.key()
        )));
    }
    let mut out = vec![vec![GenValue::zero(); m.rows.len()]; u_classes.len()];
    for (j, rho) in m.cols.iter().enumerate() {
        if m.entries.iter().all(|r| r[j] == 0) {
            continue;
        }
        let f = rho_values.get(rho).ok_or_else(|| {
            Error::SupportMismatch(format!("no unipotent values for {rho} ({})", m.key()))
        })?;
        for (k, u) in u_classes.iter().enumerate() {
            let val = f.get(u)?;
            for (i, row) in m.entries.iter().enumerate() {
                if row[j] != 0 {
                    out[k][i] = out[k][i].add(&val.scale_int(row[j]))?;
                }
            }
        }
    }
    Ok(out)
}

/// Labels and class lists of the table being solved for.
#[derive(Clone, Debug)]
pub struct GreenShape {
    pub g_label: String,
    pub l_label: String,
    pub p_label: String,
    pub u_classes: Vec<String>,
    pub v_classes: Vec<String>,
}

/// Solves for `Q` given `RHS` (`N×n`), `psi_matrix[i][j] = ψ_i(v_j)` and
/// the weights `c_j`.
pub fn solve_green(
    rhs: &[Vec<GenValue>],
    psi_matrix: &[Vec<GenValue>],
    weights: &[GenValue],
    shape: &GreenShape,
) -> Result<GreenTable> {
    let n = shape.v_classes.len();
    let key = format!("{}<{}<{}", shape.l_label, shape.p_label, shape.g_label);
    if psi_matrix.len() != n
        || psi_matrix.iter().any(|r| r.len() != n)
        || weights.len() != n
        || rhs.len() != shape.u_classes.len()
        || rhs.iter().any(|r| r.len() != n)
    {
        return Err(Error::DimensionMismatch(format!(
            "Green system for {key}: {n} classes of L, {} of G",
            shape.u_classes.len()
        )));
    }
    if let Some(j) = weights.iter().position(GenValue::is_zero) {
        return Err(Error::DivisionByZero(format!(
            "weight of {} in {key}",
            shape.v_classes[j]
        )));
    }
    // Ψ·Yᵀ = RHSᵀ with Y[k][j] = c_j·Q(u_k, v_j).
    let x = solve_square(psi_matrix, &transpose(rhs)).map_err(|e| match e {
        Error::NonInvertibleMatrix(msg) => Error::NonInvertibleMatrix(format!("{key}: {msg}")),
        other => other,
    })?;
    let y = transpose(&x);
    let q = y
        .iter()
        .map(|row| {
            row.iter()
                .zip(weights)
                .map(|(a, c)| a.div(c))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let back = mat_mul(&y, &transpose(psi_matrix))?;
    for (k, (a, b)) in back.iter().zip(rhs).enumerate() {
        if a.iter()
            .zip(b)
            .any(|(x, y)| !crate::cyclo::identity_equal(x, y).unwrap_or(false))
        {
            return Err(Error::Inconsistent(format!(
                "{key}: equations at {} are not satisfied",
                shape.u_classes[k]
            )));
        }
    }

    Ok(GreenTable {
        g_label: shape.g_label.clone(),
        l_label: shape.l_label.clone(),
        p_label: shape.p_label.clone(),
        u_classes: shape.u_classes.clone(),
        v_classes: shape.v_classes.clone(),
        q,
        weights: weights.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::induction::induce_unipotent;

    fn v(s: &str) -> GenValue {
        s.parse().unwrap()
    }

    fn shape(u: &[&str], w: &[&str]) -> GreenShape {
        GreenShape {
            g_label: "G".into(),
            l_label: "L".into(),
            p_label: "P".into(),
            u_classes: u.iter().map(|s| s.to_string()).collect(),
            v_classes: w.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn torus_case_copies_the_column() {
        let rhs = vec![vec![v("q+1")], vec![v("1")]];
        let t = solve_green(
            &rhs,
            &[vec![v("1")]],
            &[v("1")],
            &shape(&["1", "u"], &["1"]),
        )
        .unwrap();
        assert_eq!(t.q, rhs);
    }

    #[test]
    fn roundtrip_through_induction() {
        let s = shape(&["1", "u", "w"], &["1", "v"]);
        let q = vec![
            vec![v("q^2"), v("1/2")],
            vec![v("q"), v("0")],
            vec![v("1"), v("q-3")],
        ];
        let weights = vec![v("1"), v("q^2-1")];
        let table = GreenTable {
            g_label: "G".into(),
            l_label: "L".into(),
            p_label: "P".into(),
            u_classes: s.u_classes.clone(),
            v_classes: s.v_classes.clone(),
            q: q.clone(),
            weights: weights.clone(),
        };
        let psis = [["1", "1"], ["q", "-1"]];
        let psi_matrix: Vec<Vec<GenValue>> = psis
            .iter()
            .map(|r| r.iter().map(|x| v(x)).collect())
            .collect();
        let mut rhs = vec![vec![]; 3];
        for row in &psi_matrix {
            let f = ClassFunction::new("L", None)
                .with("1", row[0].clone())
                .with("v", row[1].clone());
            let r = induce_unipotent(&table, &f).unwrap();
            for (k, u) in s.u_classes.iter().enumerate() {
                rhs[k].push(r.values[u].clone());
            }
        }
        let solved = solve_green(&rhs, &psi_matrix, &weights, &s).unwrap();
        assert_eq!(solved.q, q);
    }

    #[test]
    fn singular_psi_matrix() {
        let s = shape(&["1"], &["1", "v"]);
        let psi = vec![vec![v("1"), v("q")], vec![v("2"), v("2*q")]];
        let err = solve_green(&[vec![v("1"), v("2")]], &psi, &[v("1"), v("1")], &s);
        assert!(matches!(err, Err(Error::NonInvertibleMatrix(m)) if m.contains("L<P<G")));
    }

    #[test]
    fn rhs_sums_columns() {
        let m = MultiplicityMatrix {
            g_label: "G".into(),
            l_label: "L".into(),
            p_label: "P".into(),
            rows: vec!["psi".into()],
            cols: vec!["a".into(), "b".into()],
            entries: vec![vec![1, 2]],
        };
        let vals = BTreeMap::from([
            (
                "a".to_string(),
                ClassFunction::new("G", None).with("1", v("q")),
            ),
            (
                "b".to_string(),
                ClassFunction::new("G", None).with("1", v("1")),
            ),
        ]);
        let r = rhs_from_mult(&m, &vals, &["1".to_string()]).unwrap();
        assert_eq!(r, vec![vec![v("q+2")]]);
        let z = MultiplicityMatrix::zero("G", "L", "P", vec!["psi".into()], vec!["c".into()]);
        assert!(rhs_from_mult(&z, &BTreeMap::new(), &["1".to_string()]).unwrap()[0][0].is_zero());
    }
}
