//! Fraction-free linear algebra over `Q(ζ)(q)`.
//!
//! Rows of rational functions are first scaled by the lcm of their
//! denominators, then reduced with Bareiss elimination so every intermediate
//! entry stays a polynomial and every division is exact.

use crate::cyclo::{CongruenceGuard, GenValue, Poly};
use crate::error::{Error, Result};

/// Fraction-free row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<Poly>>,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
    /// Sign of the row permutation.
    pub sign: i8,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Scales each row by the lcm of its denominators. Returns the polynomial
/// rows, the multiplier used for each row and the combined guard.
pub fn clear_denominators(
    rows: &[Vec<GenValue>],
) -> Result<(Vec<Vec<Poly>>, Vec<Poly>, CongruenceGuard)> {
    let mut guard = CongruenceGuard::trivial();
    let mut out = Vec::with_capacity(rows.len());
    let mut mults = Vec::with_capacity(rows.len());
    for row in rows {
        let mut l = Poly::one();
        for v in row {
            guard = guard.intersect(v.guard())?;
            if !v.denominator().is_one() {
                l = l.lcm(v.denominator());
            }
        }
        out.push(
            row.iter()
                .map(|v| {
                    if l.is_one() {
                        v.numerator().clone()
                    } else {
                        let f = l.exact_div(v.denominator()).expect("lcm is a multiple");
                        v.numerator() * &f
                    }
                })
                .collect(),
        );
        mults.push(l);
    }
    Ok((out, mults, guard))
}

fn pivot_weight(p: &Poly) -> (usize, usize) {
    (p.degree().unwrap_or(0), p.term_count())
}

/// Bareiss elimination choosing pivots among the first `pivot_cols` columns;
/// the remaining columns are carried along as right-hand sides.
pub fn bareiss(mut m: Vec<Vec<Poly>>, pivot_cols: usize) -> Echelon {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = Poly::one();
    let mut pivots = Vec::new();
    let mut sign = 1i8;
    let mut row = 0;
    for col in 0..pivot_cols.min(ncols) {
        if row == nrows {
            break;
        }
        // Lowest degree pivot keeps intermediate growth small.
        let Some(p) = (row..nrows)
            .filter(|&i| !m[i][col].is_zero())
            .min_by_key(|&i| pivot_weight(&m[i][col]))
        else {
            continue;
        };
        if p != row {
            m.swap(p, row);
            sign = -sign;
        }
        let (top, rest) = m.split_at_mut(row + 1);
        let pr = &top[row];
        for r in rest.iter_mut() {
            let factor = r[col].clone();
            for j in col + 1..ncols {
                let t = &(&pr[col] * &r[j]) - &(&factor * &pr[j]);
                r[j] = if prev.is_one() {
                    t
                } else {
                    t.exact_div(&prev).expect("Bareiss division is exact")
                };
            }
            r[col] = Poly::zero();
        }
        prev = m[row][col].clone();
        pivots.push(col);
        row += 1;
    }
    Echelon {
        rows: m,
        pivots,
        sign,
    }
}

/// Rank over the function field.
pub fn rank(m: &[Vec<GenValue>]) -> Result<usize> {
    let (rows, _, _) = clear_denominators(m)?;
    let cols = rows.first().map_or(0, Vec::len);
    Ok(bareiss(rows, cols).rank())
}

/// Determinant of a square matrix.
pub fn determinant(m: &[Vec<GenValue>]) -> Result<GenValue> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "determinant of a non-square {n}-row matrix"
        )));
    }
    if n == 0 {
        return Ok(GenValue::one());
    }
    let (rows, mults, guard) = clear_denominators(m)?;
    let e = bareiss(rows, n);
    if e.rank() < n {
        return Ok(GenValue::zero().set_guard(guard));
    }
    let mut den = Poly::one();
    for l in &mults {
        den = &den * l;
    }
    let num = e.rows[n - 1][n - 1].scale(&(e.sign as i64).into());
    GenValue::from_fraction(num, den, guard)
}

/// Solves `A·X = B` for an `N×r` matrix `A` of rank `r` (so `N >= r`) and an
/// `N×m` right-hand side. The solution is unique; every equation beyond the
/// first `r` pivots is checked.
pub fn solve_full_rank(a: &[Vec<GenValue>], b: &[Vec<GenValue>]) -> Result<Vec<Vec<GenValue>>> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{n} equations but {} right-hand side rows",
            b.len()
        )));
    }
    let r = a.first().map_or(0, Vec::len);
    let m = b.first().map_or(0, Vec::len);
    if a.iter().any(|row| row.len() != r) || b.iter().any(|row| row.len() != m) {
        return Err(Error::DimensionMismatch("ragged matrix".into()));
    }
    let aug: Vec<Vec<GenValue>> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x.iter().chain(y).cloned().collect())
        .collect();
    let (rows, _, guard) = clear_denominators(&aug)?;
    let e = bareiss(rows, r);
    if e.rank() < r {
        return Err(Error::RankDeficient {
            rank: e.rank(),
            expected: r,
            context: String::new(),
        });
    }
    for (i, row) in e.rows.iter().enumerate().skip(r) {
        if let Some(j) = (r..r + m).find(|&j| !row[j].is_zero()) {
            return Err(Error::Inconsistent(format!(
                "equation {i} fails for right-hand side {}",
                j - r
            )));
        }
    }
    // Full rank with pivots in columns 0..r, so rows 0..r are upper triangular.
    let lift = |p: &Poly| GenValue::from_poly(p.clone()).set_guard(guard.clone());
    let mut x = vec![vec![GenValue::zero(); m]; r];
    for c in 0..m {
        for i in (0..r).rev() {
            let mut acc = lift(&e.rows[i][r + c]);
            for j in i + 1..r {
                if !e.rows[i][j].is_zero() {
                    acc = acc.sub(&lift(&e.rows[i][j]).mul(&x[j][c])?)?;
                }
            }
            x[i][c] = acc.div(&lift(&e.rows[i][i]))?;
        }
    }
    Ok(x)
}

/// Solves the square system `A·X = B`.
pub fn solve_square(a: &[Vec<GenValue>], b: &[Vec<GenValue>]) -> Result<Vec<Vec<GenValue>>> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "coefficient matrix is not square ({n} rows)"
        )));
    }
    let singular = |e| match e {
        Error::RankDeficient { rank, expected, .. } => Error::NonInvertibleMatrix(format!(
            "rank {rank} < {expected}, determinant is identically zero"
        )),
        other => other,
    };
    if b.first().map_or(0, Vec::len) <= n {
        return solve_full_rank(a, b).map_err(singular);
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{n} equations but {} right-hand side rows",
            b.len()
        )));
    }
    // Wide right-hand sides would carry their denominators through every
    // elimination step. Instead A⁻¹ = P/d with P polynomial, and each column
    // of B is combined over its own common denominator.
    let identity: Vec<Vec<GenValue>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| GenValue::from_int(i64::from(i == j)))
                .collect()
        })
        .collect();
    let inv = solve_full_rank(a, &identity).map_err(singular)?;
    let (p, d) = over_common_denominator(inv.iter().flatten());
    let p: Vec<&[Poly]> = p.chunks(n).collect();
    let mut guard = inv
        .iter()
        .flatten()
        .try_fold(CongruenceGuard::trivial(), |g, v| g.intersect(v.guard()))?;
    let m = b[0].len();
    if b.iter().any(|r| r.len() != m) {
        return Err(Error::DimensionMismatch("ragged matrix".into()));
    }
    let mut x = vec![Vec::with_capacity(m); n];
    for k in 0..m {
        let col: Vec<&GenValue> = b.iter().map(|r| &r[k]).collect();
        for v in &col {
            guard = guard.intersect(v.guard())?;
        }
        let (c, e) = over_common_denominator(col.iter().copied());
        let den = &d * &e;
        for (i, row) in p.iter().enumerate() {
            let mut num = Poly::zero();
            for (pij, cj) in row.iter().zip(&c) {
                if !pij.is_zero() && !cj.is_zero() {
                    num = &num + &(pij * cj);
                }
            }
            x[i].push(GenValue::from_fraction(num, den.clone(), guard.clone())?);
        }
    }
    Ok(x)
}

/// Numerators of `values` over the lcm of their denominators, and that lcm.
fn over_common_denominator<'a>(
    values: impl Iterator<Item = &'a GenValue> + Clone,
) -> (Vec<Poly>, Poly) {
    let mut l = Poly::one();
    for v in values.clone() {
        if !v.denominator().is_one() && l.exact_div(v.denominator()).is_none() {
            l = l.lcm(v.denominator());
        }
    }
    let nums = values
        .map(|v| {
            if v.denominator() == &l {
                v.numerator().clone()
            } else {
                v.numerator() * &l.exact_div(v.denominator()).expect("lcm is a multiple")
            }
        })
        .collect();
    (nums, l)
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// `A·B` over the function field.
pub fn mat_mul(a: &[Vec<GenValue>], b: &[Vec<GenValue>]) -> Result<Vec<Vec<GenValue>>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != inner) {
        return Err(Error::DimensionMismatch("inner dimensions differ".into()));
    }
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = GenValue::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc = acc.add(&x.mul(&b[k][j])?)?;
                        }
                    }
                    Ok(acc)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[&str]]) -> Vec<Vec<GenValue>> {
        rows.iter()
            .map(|r| r.iter().map(|s| s.parse().unwrap()).collect())
            .collect()
    }

    #[test]
    fn wide_right_hand_sides_match_column_solves() {
        let a = m(&[&["q", "1", "0"], &["1", "q", "1"], &["0", "1", "q+1"]]);
        let cols = ["1", "1/q", "q^2", "1/(q-1)", "(q+1)/(q^2+1)"];
        let b: Vec<Vec<GenValue>> = (0..3)
            .map(|i| {
                cols.iter()
                    .map(|c| c.parse::<GenValue>().unwrap().scale_int(i + 1))
                    .collect()
            })
            .collect();
        let wide = solve_square(&a, &b).unwrap();
        for k in 0..cols.len() {
            let col: Vec<Vec<GenValue>> = b.iter().map(|r| vec![r[k].clone()]).collect();
            let x = solve_full_rank(&a, &col).unwrap();
            for i in 0..3 {
                assert_eq!(wide[i][k], x[i][0]);
            }
        }
        let singular = m(&[&["q", "1"], &["q^2", "q"]]);
        let b = m(&[&["1", "2", "3"], &["4", "5", "6"]]);
        assert!(matches!(
            solve_square(&singular, &b),
            Err(Error::NonInvertibleMatrix(_))
        ));
    }

    #[test]
    fn small_determinants() {
        let a = m(&[&["q", "1"], &["1", "q"]]);
        assert_eq!(determinant(&a).unwrap(), "q^2 - 1".parse().unwrap());
        let b = m(&[&["1/q", "1"], &["1", "q"]]);
        assert!(determinant(&b).unwrap().is_zero());
        assert_eq!(rank(&b).unwrap(), 1);
        let c = m(&[&["0", "1", "0"], &["1", "0", "0"], &["0", "0", "q"]]);
        assert_eq!(determinant(&c).unwrap(), "-q".parse().unwrap());
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = m(&[
            &["q", "1/2", "z(3)"],
            &["q^2", "q-1", "1"],
            &["1/(q+1)", "3", "q"],
        ]);
        let d = determinant(&a).unwrap();
        let e = |i: usize, j: usize| a[i][j].clone();
        let minor = |r: [usize; 2], c: [usize; 2]| {
            e(r[0], c[0])
                .mul(&e(r[1], c[1]))
                .unwrap()
                .sub(&e(r[0], c[1]).mul(&e(r[1], c[0])).unwrap())
                .unwrap()
        };
        let expected = e(0, 0)
            .mul(&minor([1, 2], [1, 2]))
            .unwrap()
            .sub(&e(0, 1).mul(&minor([1, 2], [0, 2])).unwrap())
            .unwrap()
            .add(&e(0, 2).mul(&minor([1, 2], [0, 1])).unwrap())
            .unwrap();
        assert_eq!(d, expected);
    }

    #[test]
    fn overdetermined_solve() {
        let a = m(&[&["1", "q"], &["q", "1"], &["1", "1"]]);
        let x = m(&[&["2"], &["-1/q"]]);
        let b = mat_mul(&a, &x).unwrap();
        assert_eq!(solve_full_rank(&a, &b).unwrap(), x);
        let mut bad = b.clone();
        bad[2][0] = "7".parse().unwrap();
        assert!(matches!(
            solve_full_rank(&a, &bad),
            Err(Error::Inconsistent(_))
        ));
        let dep = m(&[&["1", "2"], &["q", "2*q"], &["1", "2"]]);
        assert!(matches!(
            solve_full_rank(&dep, &b),
            Err(Error::RankDeficient {
                rank: 1,
                expected: 2,
                ..
            })
        ));
        assert!(matches!(
            solve_square(&m(&[&["1", "q"], &["1", "q"]]), &m(&[&["1"], &["1"]])),
            Err(Error::NonInvertibleMatrix(_))
        ));
    }
}
