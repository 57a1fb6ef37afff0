//! Expression syntax for table values.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := ("-" | "+") unary | power
//! power  := atom ("^" "-"? integer)?
//! atom   := integer | "q" | "z(" integer ")" | "(" expr ")"
//! ```
//!
//! Whitespace is ignored. `z(N)` denotes the root of unity `exp(2πi/N)`.

use num_bigint::BigInt;

use super::guard::CongruenceGuard;
use super::number::CycNum;
use super::value::GenValue;
use crate::error::{Error, Result};

/// Parses `expr` and restricts the result to `guard`.
pub fn parse_genvalue(expr: &str, guard: &CongruenceGuard) -> Result<GenValue> {
    let mut p = Parser {
        src: expr.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let v = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(&format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    v.with_guard(guard)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.to_string(),
            context: String::new(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<GenValue> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<GenValue> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    if d.is_zero() {
                        return Err(Error::DivisionByZero(format!(
                            "divisor at position {at} is identically zero"
                        )));
                    }
                    acc = acc.div(&d)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<GenValue> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<GenValue> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.pos;
        let e = self.integer()?;
        let e: i64 = i64::try_from(e).map_err(|_| Error::Parse {
            position: at,
            message: "exponent out of range".into(),
            context: String::new(),
        })?;
        if negative && base.is_zero() {
            return Err(Error::DivisionByZero("zero to a negative power".into()));
        }
        base.pow(if negative { -e } else { e })
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("valid digits"))
    }

    fn atom(&mut self) -> Result<GenValue> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                Ok(GenValue::from_cyc(CycNum::from_bigint(self.integer()?)))
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(GenValue::q())
            }
            Some(b'z') => {
                self.pos += 1;
                self.expect(b'(')?;
                let at = self.pos;
                let n = self.integer()?;
                let n = u32::try_from(n)
                    .ok()
                    .filter(|&n| (1..=100_000).contains(&n))
                    .ok_or_else(|| Error::Parse {
                        position: at,
                        message: "root of unity order must be between 1 and 100000".into(),
                        context: String::new(),
                    })?;
                self.expect(b')')?;
                Ok(GenValue::from_cyc(CycNum::zeta(n)))
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) => Err(self.error(&format!("unexpected `{}`", c as char))),
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::Poly;

    fn v(s: &str) -> GenValue {
        parse_genvalue(s, &CongruenceGuard::trivial()).unwrap()
    }

    #[test]
    fn table_entries() {
        let x = v("q^4*(q^2-1)*(q^4-1)");
        assert_eq!(x.numerator().degree(), Some(10));
        assert!(x.is_polynomial());
        let psi9 = v("(1/2)*q*(q+1)^2");
        assert_eq!(psi9.to_string(), "1/2*q^3 + q^2 + 1/2*q");
        assert!(v("1").is_one());
        assert_eq!(v(" - q / 2 "), v("-1/2*q"));
    }

    #[test]
    fn roots_of_unity() {
        assert!(v("1 + z(3) + z(3)^2").is_zero());
        assert_eq!(v("z(3)^-1"), v("z(3)^2"));
        assert_eq!(v("z(4)^2"), v("-1"));
    }

    #[test]
    fn print_parse_roundtrip() {
        for s in [
            "(1/2)*q*(q-1)^2",
            "-(1/2)*q*(q-1)",
            "q^4*z(3)^2",
            "(q + z(5))/(q^2 + 1)",
            "3*q/(q+1)",
            "-q/(q+1)",
            "1/q^2",
            "(1+z(3))*q^2 - z(3)",
            "(q-1)/(3*q^2)",
        ] {
            let x = v(s);
            let printed = x.to_string();
            assert_eq!(v(&printed), x, "{s} -> {printed}");
            assert_eq!(v(&printed).to_string(), printed);
        }
    }

    #[test]
    fn errors_carry_position() {
        match parse_genvalue("q + * 2", &CongruenceGuard::trivial()) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_genvalue("(q + 1", &CongruenceGuard::trivial()),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_genvalue("x", &CongruenceGuard::trivial()),
            Err(Error::Parse { position: 0, .. })
        ));
        assert!(matches!(
            parse_genvalue("1/(q-q)", &CongruenceGuard::trivial()),
            Err(Error::DivisionByZero(_))
        ));
        assert!(matches!(
            CongruenceGuard::new(3, []).and_then(|g| parse_genvalue("q", &g)),
            Err(Error::UnsatisfiableGuard(_))
        ));
    }

    #[test]
    fn guard_is_attached() {
        let g = CongruenceGuard::divides_q_minus_one(3);
        let x = parse_genvalue("q", &g).unwrap();
        assert_eq!(x.guard(), &g);
        assert_eq!(x.numerator(), &Poly::q());
    }
}
