//! Congruence conditions on `q`.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The admissible residues of `q` modulo `modulus`.
///
/// Always stored with the smallest modulus that describes the same set, so two
/// guards are equal exactly when they admit the same integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGuard", into = "RawGuard")]
pub struct CongruenceGuard {
    modulus: u64,
    residues: BTreeSet<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawGuard {
    modulus: u64,
    residues: Vec<u64>,
}

impl TryFrom<RawGuard> for CongruenceGuard {
    type Error = Error;
    fn try_from(raw: RawGuard) -> Result<Self> {
        CongruenceGuard::new(raw.modulus, raw.residues)
    }
}

impl From<CongruenceGuard> for RawGuard {
    fn from(g: CongruenceGuard) -> Self {
        RawGuard {
            modulus: g.modulus,
            residues: g.residues.into_iter().collect(),
        }
    }
}

impl Default for CongruenceGuard {
    fn default() -> Self {
        Self::trivial()
    }
}

impl CongruenceGuard {
    pub fn trivial() -> Self {
        CongruenceGuard {
            modulus: 1,
            residues: BTreeSet::from([0]),
        }
    }

    pub fn new(modulus: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::UnsatisfiableGuard("modulus must be positive".into()));
        }
        let residues: BTreeSet<u64> = residues.into_iter().map(|r| r % modulus).collect();
        if residues.is_empty() {
            return Err(Error::UnsatisfiableGuard(format!(
                "no admissible residue modulo {modulus}"
            )));
        }
        Ok(Self::minimize(modulus, residues))
    }

    /// `q ≡ r (mod m)`.
    pub fn residue(m: u64, r: u64) -> Result<Self> {
        Self::new(m, [r])
    }

    /// `m | q - 1`.
    pub fn divides_q_minus_one(m: u64) -> Self {
        Self::new(m, [1]).expect("nonempty")
    }

    /// `m | q + 1`.
    pub fn divides_q_plus_one(m: u64) -> Self {
        Self::new(m, [m - 1]).expect("nonempty")
    }

    /// `q` even.
    pub fn even() -> Self {
        Self::new(2, [0]).expect("nonempty")
    }

    fn minimize(modulus: u64, residues: BTreeSet<u64>) -> Self {
        for d in 1..=modulus {
            if !modulus.is_multiple_of(d) {
                continue;
            }
            let reduced: BTreeSet<u64> = residues.iter().map(|r| r % d).collect();
            let full = (0..modulus).filter(|r| reduced.contains(&(r % d))).count();
            if full == residues.len() {
                return CongruenceGuard {
                    modulus: d,
                    residues: reduced,
                };
            }
        }
        unreachable!("d = modulus always matches")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &BTreeSet<u64> {
        &self.residues
    }

    pub fn is_trivial(&self) -> bool {
        self.modulus == 1
    }

    pub fn admits(&self, q: i64) -> bool {
        self.residues
            .contains(&(q.rem_euclid(self.modulus as i64) as u64))
    }

    /// Conjunction of two guards.
    pub fn intersect(&self, other: &CongruenceGuard) -> Result<CongruenceGuard> {
        if other.is_trivial() || self == other {
            return Ok(self.clone());
        }
        if self.is_trivial() {
            return Ok(other.clone());
        }
        let m = self.modulus.lcm(&other.modulus);
        let residues: BTreeSet<u64> = (0..m)
            .filter(|r| {
                self.residues.contains(&(r % self.modulus))
                    && other.residues.contains(&(r % other.modulus))
            })
            .collect();
        if residues.is_empty() {
            return Err(Error::UnsatisfiableGuard(format!("{self} and {other}")));
        }
        Ok(Self::minimize(m, residues))
    }

    /// True when every integer admitted by `self` is admitted by `other`.
    pub fn implies(&self, other: &CongruenceGuard) -> bool {
        self.intersect(other).is_ok_and(|g| &g == self)
    }

    pub fn compatible(&self, other: &CongruenceGuard) -> bool {
        self.intersect(other).is_ok()
    }

    /// Admissible integers `q >= start`, in increasing order.
    pub fn admissible_from(&self, start: i64) -> impl Iterator<Item = i64> + '_ {
        (start..).filter(move |&q| self.admits(q))
    }

    /// Splits the guard into single-residue guards modulo `modulus`, which must
    /// be a multiple of this guard's modulus.
    pub fn refine(&self, modulus: u64) -> Vec<CongruenceGuard> {
        debug_assert_eq!(modulus % self.modulus, 0);
        (0..modulus)
            .filter(|&r| self.residues.contains(&(r % self.modulus)))
            .map(|r| CongruenceGuard::residue(modulus, r).expect("nonempty"))
            .collect()
    }
}

fn prime_power_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while m > 1 {
        if p * p > m {
            out.push(m);
            break;
        }
        let mut pk = 1;
        while m.is_multiple_of(p) {
            m /= p;
            pk *= p;
        }
        if pk > 1 {
            out.push(pk);
        }
        p += 1;
    }
    out
}

impl fmt::Display for CongruenceGuard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.modulus;
        if m == 1 {
            return write!(f, "all q");
        }
        if self.residues.len() == 1 {
            // One condition per prime-power factor of the modulus.
            let r = *self.residues.iter().next().unwrap();
            let parts: Vec<String> = prime_power_factors(m)
                .into_iter()
                .map(|pk| match r % pk {
                    0 => format!("{pk}|q"),
                    1 => format!("{pk}|q-1"),
                    x if x == pk - 1 => format!("{pk}|q+1"),
                    x => format!("q≡{x} mod {pk}"),
                })
                .collect();
            return write!(f, "{}", parts.join(", "));
        }
        let rs: Vec<String> = self.residues.iter().map(u64::to_string).collect();
        write!(f, "q mod {m} in {{{}}}", rs.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_modulus() {
        let g = CongruenceGuard::new(6, [1, 3, 5]).unwrap();
        assert_eq!(g.modulus(), 2);
        assert_eq!(g, CongruenceGuard::new(2, [1]).unwrap());
        assert!(CongruenceGuard::new(4, [0, 1, 2, 3]).unwrap().is_trivial());
    }

    #[test]
    fn intersection() {
        let even = CongruenceGuard::even();
        let g = even
            .intersect(&CongruenceGuard::divides_q_minus_one(3))
            .unwrap();
        assert_eq!(g, CongruenceGuard::residue(6, 4).unwrap());
        assert!(g.admits(4) && g.admits(16) && !g.admits(8));
        let bad = CongruenceGuard::divides_q_minus_one(3)
            .intersect(&CongruenceGuard::divides_q_plus_one(3));
        assert!(matches!(bad, Err(Error::UnsatisfiableGuard(_))));
        assert!(matches!(
            CongruenceGuard::new(3, []),
            Err(Error::UnsatisfiableGuard(_))
        ));
    }

    #[test]
    fn display() {
        assert_eq!(CongruenceGuard::divides_q_minus_one(3).to_string(), "3|q-1");
        assert_eq!(CongruenceGuard::divides_q_plus_one(3).to_string(), "3|q+1");
        assert_eq!(CongruenceGuard::even().to_string(), "2|q");
        assert_eq!(
            CongruenceGuard::residue(6, 4).unwrap().to_string(),
            "2|q, 3|q-1"
        );
        assert_eq!(
            CongruenceGuard::residue(8, 4).unwrap().to_string(),
            "q≡4 mod 8"
        );
        assert_eq!(
            CongruenceGuard::residue(12, 5).unwrap().to_string(),
            "4|q-1, 3|q+1"
        );
        assert_eq!(CongruenceGuard::trivial().to_string(), "all q");
    }

    #[test]
    fn implication() {
        let g = CongruenceGuard::residue(8, 4).unwrap();
        assert!(g.implies(&CongruenceGuard::even()));
        assert!(!CongruenceGuard::even().implies(&g));
    }
}
