//! Dense univariate polynomials in `q` with cyclotomic coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::number::{fmt_unsigned_term, CycNum, Rat};

/// Polynomial `Σ coeffs[i]·q^i`. The coefficient vector never has trailing
/// zeros; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<CycNum>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(CycNum::one())
    }

    pub fn constant(c: CycNum) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_int(i: i64) -> Self {
        Self::constant(CycNum::from_int(i))
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(CycNum::one(), 1)
    }

    pub fn monomial(c: CycNum, degree: usize) -> Self {
        let mut v = vec![CycNum::zero(); degree + 1];
        v[degree] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<CycNum>) -> Self {
        while coeffs.last().is_some_and(CycNum::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&CycNum> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> CycNum {
        self.coeffs.first().cloned().unwrap_or_else(CycNum::zero)
    }

    pub fn scale(&self, c: &CycNum) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn conj(&self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(CycNum::conj).collect())
    }

    pub fn make_monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Division with remainder. Panics when `divisor` is zero.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        let db = divisor.degree().expect("polynomial division by zero");
        let lead_inv = divisor.coeffs[db]
            .inv()
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return (Poly::zero(), self.clone());
        }
        let mut quo = vec![CycNum::zero(); rem.len() - db];
        for i in (0..quo.len()).rev() {
            let c = &rem[i + db] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let t = &c * d;
                rem[i + j] = &rem[i + j] - &t;
            }
            quo[i] = c;
        }
        rem.truncate(db);
        (Poly::from_coeffs(quo), Poly::from_coeffs(rem))
    }

    /// Quotient of an exact division; `None` when the remainder is nonzero.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.make_monic(), other.make_monic());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.is_constant() {
                return Poly::one();
            }
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.make_monic();
        }
        a
    }

    pub fn eval(&self, x: &CycNum) -> CycNum {
        let mut acc = CycNum::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_int(&self, x: i64) -> CycNum {
        self.eval(&CycNum::from_int(x))
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// True when every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.as_rational().is_some())
    }

    /// Sign of the leading coefficient when it is rational.
    pub fn leading_sign(&self) -> Option<i8> {
        let l = self.lead()?.as_rational()?;
        Some(if l.is_positive() { 1 } else { -1 })
    }

    /// Number of printed terms.
    pub(crate) fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub(crate) fn lcm(&self, other: &Poly) -> Poly {
        if self.is_one() {
            return other.make_monic();
        }
        if other.is_one() {
            return self.make_monic();
        }
        let g = self.gcd(other);
        (self * &other.exact_div(&g).expect("gcd divides")).make_monic()
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut v = long.coeffs.clone();
        for (x, y) in v.iter_mut().zip(&short.coeffs) {
            *x = &*x + y;
        }
        Poly::from_coeffs(v)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let c = match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a - b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => -b,
                (None, None) => unreachable!(),
            };
            v.push(c);
        }
        Poly::from_coeffs(v)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let (Some(a), Some(b)) = (small_rational(self), small_rational(rhs)) {
            if let Some(p) = small_product(&a, &b) {
                return p;
            }
        }
        schoolbook(self, rhs)
    }
}

fn schoolbook(x: &Poly, y: &Poly) -> Poly {
    let mut v = vec![CycNum::zero(); x.coeffs.len() + y.coeffs.len() - 1];
    for (i, a) in x.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.coeffs.iter().enumerate() {
            if !b.is_zero() {
                let t = a * b;
                v[i + j] = &v[i + j] + &t;
            }
        }
    }
    Poly::from_coeffs(v)
}

/// Rational coefficients as machine integers over one denominator.
struct SmallRational {
    nums: Vec<i64>,
    den: i64,
}

fn small_rational(p: &Poly) -> Option<SmallRational> {
    let mut den: i64 = 1;
    for c in &p.coeffs {
        let d = i64::try_from(c.as_rational()?.denom()).ok()?;
        den = den.checked_mul(d / den.gcd(&d))?;
    }
    let nums = p
        .coeffs
        .iter()
        .map(|c| {
            let r = c.as_rational().expect("checked above");
            let n = i64::try_from(r.numer()).ok()?;
            let d = i64::try_from(r.denom()).ok()?;
            n.checked_mul(den / d)
        })
        .collect::<Option<Vec<_>>>()?;
    Some(SmallRational { nums, den })
}

/// Convolution in `i128`; `None` on overflow.
fn small_product(a: &SmallRational, b: &SmallRational) -> Option<Poly> {
    let mut v = vec![0i128; a.nums.len() + b.nums.len() - 1];
    for (i, &x) in a.nums.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.nums.iter().enumerate() {
            v[i + j] = v[i + j].checked_add(i128::from(x) * i128::from(y))?;
        }
    }
    let den = BigInt::from(i128::from(a.den) * i128::from(b.den));
    Some(Poly::from_coeffs(
        v.into_iter()
            .map(|c| CycNum::from_rat(Rat::new(BigInt::from(c), den.clone())))
            .collect(),
    ))
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn fmt_q(e: usize) -> String {
    match e {
        0 => String::new(),
        1 => "q".into(),
        _ => format!("q^{e}"),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            // A single-term coefficient carries its own sign; longer ones are
            // parenthesised and added.
            let single = c.term_count() == 1;
            let (negative, body) = if single {
                let (rc, ce) = c.terms().next().unwrap();
                let unsigned = fmt_unsigned_term(rc, ce, c.conductor());
                let body = match (e, unsigned.as_str()) {
                    (0, _) => unsigned,
                    (_, "1") => fmt_q(e),
                    _ => format!("{unsigned}*{}", fmt_q(e)),
                };
                (rc.is_negative(), body)
            } else if e == 0 {
                (false, format!("({c})"))
            } else {
                (false, format!("({c})*{}", fmt_q(e)))
            };
            match (first, negative) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::one()
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| CycNum::from_int(x)).collect())
    }

    #[test]
    fn machine_integer_product_agrees() {
        let half = CycNum::from_rat(Rat::new(1.into(), 2.into()));
        let a = Poly::from_coeffs(vec![
            half.clone(),
            CycNum::from_int(-3),
            CycNum::from_int(7),
        ]);
        let b = Poly::from_coeffs(vec![CycNum::from_int(5), half]);
        assert_eq!(&a * &b, schoolbook(&a, &b));
        // Too large for i128 accumulation: the general route is taken.
        let big = p(&[i64::MAX, i64::MAX, i64::MAX]);
        assert!(small_product(
            &small_rational(&big).unwrap(),
            &small_rational(&big).unwrap()
        )
        .is_none());
        assert_eq!(&big * &big, schoolbook(&big, &big));
        let z = Poly::constant(CycNum::zeta(3));
        assert_eq!(&z * &a, schoolbook(&z, &a));
    }

    #[test]
    fn gcd_and_division() {
        let a = p(&[-1, 0, 1]); // q^2 - 1
        let b = p(&[1, 1]); // q + 1
        assert_eq!(a.gcd(&b), b);
        assert_eq!(a.exact_div(&b), Some(p(&[-1, 1])));
        assert_eq!(p(&[1, 0, 1]).gcd(&b), Poly::one());
        let (q, r) = p(&[3, 0, 0, 2]).divrem(&p(&[1, 1]));
        assert_eq!(&(&q * &p(&[1, 1])) + &r, p(&[3, 0, 0, 2]));
    }

    #[test]
    fn display_orders_by_decreasing_degree() {
        assert_eq!(p(&[0, -1, 0, 2]).to_string(), "2*q^3 - q");
        assert_eq!(p(&[-1, 1]).to_string(), "q - 1");
        let c = Poly::from_coeffs(vec![CycNum::one(), &CycNum::one() + &CycNum::zeta(3)]);
        assert_eq!(c.to_string(), "(1 + z(3))*q + 1");
    }

    #[test]
    fn cyclotomic_gcd() {
        // (q - ζ)(q + 1) and (q - ζ)(q - 2) share q - ζ.
        let z = CycNum::zeta(3);
        let lin = Poly::from_coeffs(vec![-&z, CycNum::one()]);
        let a = &lin * &p(&[1, 1]);
        let b = &lin * &p(&[-2, 1]);
        assert_eq!(a.gcd(&b), lin);
    }
}
