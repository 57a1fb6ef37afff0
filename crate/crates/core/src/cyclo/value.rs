//! Guarded rational functions in `q`, the value type of every table entry.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::guard::CongruenceGuard;
use super::number::{CycNum, Rat};
use super::poly::Poly;
use crate::error::{Error, Result};

/// A reduced fraction `num/den` of polynomials in `q` over `Q(ζ)`, valid for
/// the integers admitted by `guard`.
///
/// The denominator is monic and coprime to the numerator, so the stored form
/// is canonical and structural equality is equality of functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenValue {
    num: Poly,
    den: Poly,
    guard: CongruenceGuard,
}

impl GenValue {
    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_int(i: i64) -> Self {
        Self::from_poly(Poly::from_int(i))
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::from_cyc(CycNum::from_rat(r))
    }

    pub fn from_cyc(c: CycNum) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        GenValue {
            num: p,
            den: Poly::one(),
            guard: CongruenceGuard::trivial(),
        }
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::from_poly(Poly::q())
    }

    /// Builds and normalizes `num/den` under `guard`.
    pub fn from_fraction(num: Poly, den: Poly, guard: CongruenceGuard) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero(String::new()));
        }
        Ok(Self::normalized(num, den, guard))
    }

    /// `num/den` known to be coprime; only the leading coefficient of the
    /// denominator is normalized.
    fn reduced(num: Poly, den: Poly, guard: CongruenceGuard) -> Self {
        if num.is_zero() {
            return GenValue {
                num,
                den: Poly::one(),
                guard,
            };
        }
        let lc = den.lead().unwrap().inv().expect("nonzero lead");
        if lc.is_one() {
            return GenValue { num, den, guard };
        }
        GenValue {
            num: num.scale(&lc),
            den: den.scale(&lc),
            guard,
        }
    }

    fn normalized(num: Poly, den: Poly, guard: CongruenceGuard) -> Self {
        if num.is_zero() {
            return GenValue {
                num,
                den: Poly::one(),
                guard,
            };
        }
        if den.is_constant() {
            let c = den.constant_term().inv().expect("nonzero denominator");
            return GenValue {
                num: num.scale(&c),
                den: Poly::one(),
                guard,
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.lead().unwrap().inv().expect("nonzero lead");
        GenValue {
            num: num.scale(&lc),
            den: den.scale(&lc),
            guard,
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn guard(&self) -> &CongruenceGuard {
        &self.guard
    }

    /// Restricts the value to `guard ∧ self.guard`.
    pub fn with_guard(mut self, guard: &CongruenceGuard) -> Result<Self> {
        self.guard = self.guard.intersect(guard)?;
        Ok(self)
    }

    /// Replaces the guard outright.
    pub fn set_guard(mut self, guard: CongruenceGuard) -> Self {
        self.guard = guard;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn as_constant(&self) -> Option<CycNum> {
        self.is_constant().then(|| self.num.constant_term())
    }

    /// The value as an integer when it is an integer constant.
    pub fn as_integer(&self) -> Option<BigInt> {
        let c = self.as_constant()?;
        let r = c.as_rational()?;
        r.is_integer().then(|| r.to_integer())
    }

    pub fn add(&self, other: &GenValue) -> Result<GenValue> {
        let guard = self.guard.intersect(&other.guard)?;
        if self.den == other.den {
            let num = &self.num + &other.num;
            if self.den.is_one() {
                return Ok(GenValue {
                    num,
                    den: Poly::one(),
                    guard,
                });
            }
            return Ok(Self::normalized(num, self.den.clone(), guard));
        }
        // b = g·b', d = g·d': only g can share a factor with the new numerator.
        let g = self.den.gcd(&other.den);
        if g.is_one() {
            let num = &(&self.num * &other.den) + &(&other.num * &self.den);
            return Ok(Self::reduced(num, &self.den * &other.den, guard));
        }
        let b1 = self.den.exact_div(&g).expect("gcd divides");
        let d1 = other.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &d1) + &(&other.num * &b1);
        let den = &(&b1 * &d1) * &g;
        if num.is_zero() {
            return Ok(Self::reduced(num, den, guard));
        }
        let t = num.gcd(&g);
        if t.is_one() {
            return Ok(Self::reduced(num, den, guard));
        }
        Ok(Self::reduced(
            num.exact_div(&t).expect("gcd divides numerator"),
            den.exact_div(&t).expect("gcd divides denominator"),
            guard,
        ))
    }

    pub fn sub(&self, other: &GenValue) -> Result<GenValue> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &GenValue) -> Result<GenValue> {
        let guard = self.guard.intersect(&other.guard)?;
        if self.den.is_one() && other.den.is_one() {
            return Ok(GenValue {
                num: &self.num * &other.num,
                den: Poly::one(),
                guard,
            });
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero().set_guard(guard));
        }
        // Both factors are reduced, so cancelling across is enough.
        let (a, d) = cancel(&self.num, &other.den);
        let (c, b) = cancel(&other.num, &self.den);
        Ok(Self::reduced(&a * &c, &b * &d, guard))
    }

    pub fn div(&self, other: &GenValue) -> Result<GenValue> {
        if other.is_zero() {
            return Err(Error::DivisionByZero(format!("({self}) / 0")));
        }
        let guard = self.guard.intersect(&other.guard)?;
        Ok(Self::normalized(
            &self.num * &other.den,
            &self.den * &other.num,
            guard,
        ))
    }

    pub fn neg(&self) -> GenValue {
        GenValue {
            num: -&self.num,
            den: self.den.clone(),
            guard: self.guard.clone(),
        }
    }

    pub fn inv(&self) -> Result<GenValue> {
        GenValue::one().div(self)
    }

    pub fn pow(&self, e: i64) -> Result<GenValue> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = u32::try_from(e.unsigned_abs())
            .map_err(|_| Error::Precondition(format!("exponent {e} too large")))?;
        Ok(GenValue {
            num: base.num.pow(e),
            den: base.den.pow(e),
            guard: base.guard,
        })
    }

    pub fn scale(&self, c: &CycNum) -> GenValue {
        if c.is_zero() {
            return GenValue::zero().set_guard(self.guard.clone());
        }
        GenValue {
            num: self.num.scale(c),
            den: self.den.clone(),
            guard: self.guard.clone(),
        }
    }

    pub fn scale_int(&self, i: i64) -> GenValue {
        self.scale(&CycNum::from_int(i))
    }

    /// Complex conjugation of coefficients; `q` is real.
    pub fn conj(&self) -> GenValue {
        GenValue {
            num: self.num.conj(),
            den: self.den.conj(),
            guard: self.guard.clone(),
        }
    }

    /// Exact substitution `q := q0`.
    pub fn eval_at(&self, q0: i64) -> Result<CycNum> {
        if q0 < 2 {
            return Err(Error::Precondition(format!("q0 = {q0} must be at least 2")));
        }
        if !self.guard.admits(q0) {
            return Err(Error::GuardViolation {
                q: q0,
                guard: self.guard.clone(),
            });
        }
        self.eval_unchecked(q0)
    }

    fn eval_unchecked(&self, q0: i64) -> Result<CycNum> {
        let d = self.den.eval_int(q0);
        if d.is_zero() {
            return Err(Error::DivisionByZero(format!("({self}) at q = {q0}")));
        }
        Ok(&self.num.eval_int(q0) * &d.inv()?)
    }

    /// True when the leading coefficients of numerator and denominator are
    /// rational with the same sign, i.e. the value is positive for large `q`.
    pub fn is_eventually_positive(&self) -> bool {
        match (self.num.leading_sign(), self.den.leading_sign()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }

    pub fn sum<'a>(values: impl IntoIterator<Item = &'a GenValue>) -> Result<GenValue> {
        values
            .into_iter()
            .try_fold(GenValue::zero(), |acc, v| acc.add(v))
    }
}

/// Symbolic equality of two guarded values.
///
/// The difference is brought to canonical form; when its numerator is not
/// structurally zero, the verdict is confirmed by substituting `d + 1`
/// admissible integers, `d` being the numerator degree.
/// `(x/g, y/g)` with `g = gcd(x, y)`.
fn cancel(x: &Poly, y: &Poly) -> (Poly, Poly) {
    if y.is_constant() || x.is_constant() {
        return (x.clone(), y.clone());
    }
    let g = x.gcd(y);
    if g.is_one() {
        return (x.clone(), y.clone());
    }
    (
        x.exact_div(&g).expect("gcd divides"),
        y.exact_div(&g).expect("gcd divides"),
    )
}

pub fn identity_equal(a: &GenValue, b: &GenValue) -> Result<bool> {
    // Reduced forms with monic denominators are unique.
    if a.num == b.num && a.den == b.den {
        a.guard.intersect(&b.guard)?;
        return Ok(true);
    }
    let diff = a.sub(b)?;
    if diff.num.is_zero() {
        return Ok(true);
    }
    let d = diff.num.degree().unwrap_or(0);
    let mut checked = 0;
    for q0 in diff.guard.admissible_from(2) {
        if diff.den.eval_int(q0).is_zero() {
            continue;
        }
        if !diff.num.eval_int(q0).is_zero() {
            return Ok(false);
        }
        checked += 1;
        if checked > d {
            break;
        }
    }
    Ok(true)
}

/// `identity_equal` under an explicitly supplied guard.
pub fn identity_equal_under(a: &GenValue, b: &GenValue, guard: &CongruenceGuard) -> Result<bool> {
    let a = a.clone().with_guard(guard)?;
    identity_equal(&a, b)
}

impl fmt::Display for GenValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.term_count() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        let den = if self.den.term_count() > 1 {
            format!("({})", self.den)
        } else {
            self.den.to_string()
        };
        write!(f, "{num}/{den}")
    }
}

impl FromStr for GenValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_genvalue(s, &CongruenceGuard::trivial())
    }
}

impl From<CycNum> for GenValue {
    fn from(c: CycNum) -> Self {
        GenValue::from_cyc(c)
    }
}

impl From<Poly> for GenValue {
    fn from(p: Poly) -> Self {
        GenValue::from_poly(p)
    }
}

impl From<i64> for GenValue {
    fn from(i: i64) -> Self {
        GenValue::from_int(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> GenValue {
        s.parse().unwrap()
    }

    #[test]
    fn reduced_fraction() {
        let x = v("(q^2-1)/(q+1)");
        assert!(x.is_polynomial());
        assert_eq!(x, v("q-1"));
        let y = v("(2*q)/(2*q+2)");
        assert_eq!(y.denominator(), &v("q+1").numerator().clone());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(v("(1/2)*q*(q-1)^2").eval_at(2).unwrap(), CycNum::one());
        assert_eq!(v("q^4").eval_at(2).unwrap(), CycNum::from_int(16));
        let guarded = v("q")
            .with_guard(&CongruenceGuard::divides_q_minus_one(3))
            .unwrap();
        assert!(matches!(
            guarded.eval_at(2),
            Err(Error::GuardViolation { q: 2, .. })
        ));
        assert!(matches!(
            v("1/(q-2)").eval_at(2),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn identity_examples() {
        assert!(identity_equal(&v("q^2-1"), &v("(q-1)*(q+1)")).unwrap());
        assert!(!identity_equal(&v("q-1"), &v("q+1")).unwrap());
        let a = v("q")
            .with_guard(&CongruenceGuard::divides_q_minus_one(3))
            .unwrap();
        let b = v("q")
            .with_guard(&CongruenceGuard::divides_q_plus_one(3))
            .unwrap();
        assert!(matches!(
            identity_equal(&a, &b),
            Err(Error::UnsatisfiableGuard(_))
        ));
    }

    #[test]
    fn positivity() {
        assert!(v("q^2-q").is_eventually_positive());
        assert!(!v("1-q").is_eventually_positive());
        assert!(v("(q-1)/(q+1)").is_eventually_positive());
        assert!(!v("0").is_eventually_positive());
    }
}
