//! Exact elements of cyclotomic fields `Q(ζ_N)`.
//!
//! An element is stored in the power basis `1, ζ, …, ζ^{φ(N)-1}` of
//! `Q[x]/Φ_N(x)`. Mixed-conductor arithmetic coerces both operands into
//! `Q(ζ_L)` with `L = lcm`. Conductors `N ≡ 2 (mod 4)` are never stored since
//! `Q(ζ_N) = Q(ζ_{N/2})`, and values with no irrational part collapse to
//! conductor 1.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

static PHI_CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();

/// Coefficients (low to high) of the cyclotomic polynomial `Φ_n`.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    let cache = PHI_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let divisor = cyclotomic_polynomial(d);
            poly = exact_div_monic_i64(&poly, &divisor);
        }
    }
    let poly = Arc::new(poly);
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

fn exact_div_monic_i64(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quo = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quo[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quo
}

/// Euler's totient, equal to the degree of `Φ_n`.
pub fn totient(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

/// Reduces a dense rational polynomial modulo `Φ_n`; output has length `φ(n)`.
fn reduce_mod_phi(n: u32, mut v: Vec<Rat>) -> Vec<Rat> {
    let phi = cyclotomic_polynomial(n);
    let d = phi.len() - 1;
    if v.len() > d {
        for i in (d..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut v[i], Rat::zero());
            for (j, &pj) in phi.iter().enumerate().take(d) {
                if pj != 0 {
                    v[i - d + j] -= &c * Rat::from_integer(BigInt::from(pj));
                }
            }
        }
    }
    v.resize(d, Rat::zero());
    v
}

#[derive(Clone, Debug)]
pub struct CycNum {
    conductor: u32,
    coeffs: Vec<Rat>,
}

impl CycNum {
    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        CycNum {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(i: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(i)))
    }

    pub fn from_bigint(i: BigInt) -> Self {
        Self::from_rat(Rat::from_integer(i))
    }

    /// The primitive root of unity `ζ_n = exp(2πi/n)`.
    pub fn zeta(n: u32) -> Self {
        Self::zeta_pow(n, 1)
    }

    /// `ζ_n^k` for any integer `k`.
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        assert!(n >= 1, "root of unity of order 0");
        if n % 4 == 2 {
            // ζ_n = -ζ_m^{(m+1)/2} with m = n/2 odd.
            let m = n / 2;
            let e = k.rem_euclid(n as i64);
            let base = Self::zeta_pow(m, e * ((m as i64 + 1) / 2));
            return if e % 2 == 1 { -base } else { base };
        }
        let e = k.rem_euclid(n as i64) as usize;
        let mut v = vec![Rat::zero(); e + 1];
        v[e] = Rat::one();
        Self::from_parts(n, v)
    }

    /// Builds `Σ coeffs[i] ζ_n^i` from an arbitrary-length coefficient list.
    pub fn from_parts(n: u32, coeffs: Vec<Rat>) -> Self {
        assert!(n >= 1 && n % 4 != 2, "conductor {n} is not canonical");
        let coeffs = reduce_mod_phi(n, coeffs);
        Self::canonical(n, coeffs)
    }

    fn canonical(n: u32, coeffs: Vec<Rat>) -> Self {
        if n != 1 && coeffs.iter().skip(1).all(Zero::is_zero) {
            let c0 = coeffs.into_iter().next().unwrap_or_else(Rat::zero);
            return Self::from_rat(c0);
        }
        CycNum {
            conductor: n,
            coeffs,
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Coefficients in the power basis of `Q(ζ_conductor)`.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        (self.conductor == 1).then(|| &self.coeffs[0])
    }

    /// True when every power-basis coefficient is an integer, i.e. the value
    /// lies in the ring of integers `Z[ζ_N]`.
    pub fn is_algebraic_integer(&self) -> bool {
        self.coeffs.iter().all(Rat::is_integer)
    }

    /// Coefficients of `self` inside `Q(ζ_m)`; `m` must be a multiple of the conductor.
    fn coerce(&self, m: u32) -> Vec<Rat> {
        if m == self.conductor {
            return self.coeffs.clone();
        }
        debug_assert_eq!(m % self.conductor, 0);
        let step = (m / self.conductor) as usize;
        let mut v = vec![Rat::zero(); step * (self.coeffs.len() - 1) + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        reduce_mod_phi(m, v)
    }

    fn common(&self, other: &CycNum) -> (u32, Vec<Rat>, Vec<Rat>) {
        let n = self.conductor.lcm(&other.conductor);
        (n, self.coerce(n), other.coerce(n))
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> CycNum {
        if self.conductor == 1 {
            return self.clone();
        }
        let n = self.conductor as usize;
        let mut v = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[(n - i) % n] += c;
        }
        Self::from_parts(self.conductor, v)
    }

    /// Galois action `ζ ↦ ζ^k` for `k` coprime to the conductor.
    pub fn galois(&self, k: i64) -> CycNum {
        if self.conductor == 1 {
            return self.clone();
        }
        let n = self.conductor as i64;
        assert_eq!(k.gcd(&n), 1, "galois exponent must be coprime to conductor");
        let mut v = vec![Rat::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[((i as i64) * k).rem_euclid(n) as usize] += c;
        }
        Self::from_parts(self.conductor, v)
    }

    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse of zero cyclotomic".into()));
        }
        if self.conductor == 1 {
            return Ok(Self::from_rat(self.coeffs[0].recip()));
        }
        let phi: Vec<Rat> = cyclotomic_polynomial(self.conductor)
            .iter()
            .map(|&c| Rat::from_integer(BigInt::from(c)))
            .collect();
        let s = rat_poly::inverse_mod(&self.coeffs, &phi);
        Ok(Self::from_parts(self.conductor, s))
    }

    pub fn div(&self, other: &CycNum) -> Result<CycNum> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<CycNum> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycNum::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, r: &Rat) -> CycNum {
        Self::canonical(self.conductor, self.coeffs.iter().map(|c| c * r).collect())
    }

    /// Nonzero terms as `(coefficient, exponent)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Rat, usize)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (c, i))
    }

    pub fn term_count(&self) -> usize {
        self.terms().count()
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (_, a, b) = self.common(other);
        a == b
    }
}

impl Eq for CycNum {}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, rhs: &'a CycNum) -> CycNum {
        if self.conductor == 1 && rhs.conductor == 1 {
            return CycNum::from_rat(&self.coeffs[0] + &rhs.coeffs[0]);
        }
        let (n, mut a, b) = self.common(rhs);
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        CycNum::canonical(n, a)
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &'a CycNum) -> CycNum {
        if self.conductor == 1 && rhs.conductor == 1 {
            return CycNum::from_rat(&self.coeffs[0] - &rhs.coeffs[0]);
        }
        let (n, mut a, b) = self.common(rhs);
        for (x, y) in a.iter_mut().zip(b) {
            *x -= y;
        }
        CycNum::canonical(n, a)
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &'a CycNum) -> CycNum {
        if self.conductor == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.conductor == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let (n, a, b) = self.common(rhs);
        let mut prod = vec![Rat::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        CycNum::from_parts(n, prod)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<i64> for CycNum {
    fn from(i: i64) -> Self {
        CycNum::from_int(i)
    }
}

impl From<Rat> for CycNum {
    fn from(r: Rat) -> Self {
        CycNum::from_rat(r)
    }
}

pub(crate) fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Writes a single term `c·ζ^e` with the sign of `c` dropped.
pub(crate) fn fmt_unsigned_term(c: &Rat, e: usize, n: u32) -> String {
    let a = c.abs();
    if e == 0 {
        return fmt_rat(&a);
    }
    let root = if e == 1 {
        format!("z({n})")
    } else {
        format!("z({n})^{e}")
    };
    if a.is_one() {
        root
    } else {
        format!("{}*{root}", fmt_rat(&a))
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, e) in self.terms() {
            let body = fmt_unsigned_term(c, e, self.conductor);
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Dense polynomial helpers over `Q`, used for inversion in `Q[x]/Φ_n`.
mod rat_poly {
    use super::Rat;
    use num_traits::Zero;

    fn trim(mut v: Vec<Rat>) -> Vec<Rat> {
        while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        if v.is_empty() {
            v.push(Rat::zero());
        }
        v
    }

    fn is_zero(v: &[Rat]) -> bool {
        v.iter().all(Zero::is_zero)
    }

    fn deg(v: &[Rat]) -> usize {
        v.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    fn divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
        let db = deg(b);
        let lead = b[db].clone();
        let mut r = trim(a.to_vec());
        if is_zero(&r) || deg(&r) < db {
            return (vec![Rat::zero()], r);
        }
        let mut q = vec![Rat::zero(); deg(&r) - db + 1];
        while !is_zero(&r) && deg(&r) >= db {
            let dr = deg(&r);
            let c = &r[dr] / &lead;
            for j in 0..=db {
                let t = &c * &b[j];
                r[dr - db + j] -= t;
            }
            q[dr - db] = c;
            r = trim(r);
        }
        (trim(q), r)
    }

    fn mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let n = a.len().max(b.len());
        let mut out = vec![Rat::zero(); n];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, y) in b.iter().enumerate() {
            out[i] -= y;
        }
        trim(out)
    }

    /// `s` with `s·a ≡ 1 (mod m)`; `a` must be coprime to `m`.
    pub(super) fn inverse_mod(a: &[Rat], m: &[Rat]) -> Vec<Rat> {
        let (mut r0, mut r1) = (trim(m.to_vec()), trim(a.to_vec()));
        let (mut s0, mut s1) = (vec![Rat::zero()], vec![Rat::from_integer(1.into())]);
        while !(is_zero(&r1)) && deg(&r1) > 0 {
            let (q, r) = divrem(&r0, &r1);
            let s = sub(&s0, &mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        assert!(
            !is_zero(&r1),
            "element not invertible modulo cyclotomic polynomial"
        );
        let c = r1[0].recip();
        s1.iter().map(|x| x * &c).collect()
    }
}
