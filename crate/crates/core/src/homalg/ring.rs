use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::arith;
use crate::{Error, Result};

/// Largest `𝔽_p`-dimension accepted for a local nilpotent algebra.
pub const MAX_NILPOTENT_DIM: usize = 64;

/// The set of primes inverted in a localisation of `ℤ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimeSet {
    Finite(BTreeSet<u64>),
    /// Every prime except the listed ones.
    AllExcept(BTreeSet<u64>),
}

impl PrimeSet {
    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimeSet::Finite(s) => s.contains(&p),
            PrimeSet::AllExcept(s) => !s.contains(&p),
        }
    }

    pub fn with(&self, extra: &BTreeSet<u64>) -> PrimeSet {
        match self {
            PrimeSet::Finite(s) => PrimeSet::Finite(s | extra),
            PrimeSet::AllExcept(s) => PrimeSet::AllExcept(s - extra),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseRing {
    /// `ℤ` with a set of primes inverted.
    Integers { inverted: PrimeSet },
    /// `ℤ/n`.
    Modular { n: u64 },
    /// `𝔽_p[x₁,…,x_k]/(x₁^{e₁},…,x_k^{e_k})`.
    LocalNilpotent { p: u64, exponents: Vec<u32> },
}

impl BaseRing {
    pub fn integers() -> Self {
        BaseRing::Integers {
            inverted: PrimeSet::Finite(BTreeSet::new()),
        }
    }

    pub fn rationals() -> Self {
        BaseRing::Integers {
            inverted: PrimeSet::AllExcept(BTreeSet::new()),
        }
    }

    pub fn localized(inverted: PrimeSet) -> Result<Self> {
        let ps = match &inverted {
            PrimeSet::Finite(s) | PrimeSet::AllExcept(s) => s,
        };
        if let Some(p) = ps.iter().find(|&&p| !arith::is_prime(p)) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        Ok(BaseRing::Integers { inverted })
    }

    /// `ℤ_(p)`.
    pub fn local_integers(p: u64) -> Result<Self> {
        Self::localized(PrimeSet::AllExcept([p].into()))
    }

    pub fn modular(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::input(format!("modulus must be at least 2, got {n}")));
        }
        Ok(BaseRing::Modular { n })
    }

    pub fn local_nilpotent(p: u64, exponents: Vec<u32>) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        if exponents.iter().any(|&e| e < 2) {
            return Err(Error::input("nilpotency exponents must be at least 2"));
        }
        let dim = exponents
            .iter()
            .try_fold(1usize, |acc, &e| acc.checked_mul(e as usize))
            .unwrap_or(usize::MAX);
        if dim > MAX_NILPOTENT_DIM {
            return Err(Error::Bound {
                bound: "nilpotent-dim",
                limit: MAX_NILPOTENT_DIM,
                required: dim,
            });
        }
        Ok(BaseRing::LocalNilpotent { p, exponents })
    }

    pub fn is_integral(&self) -> bool {
        matches!(self, BaseRing::Integers { .. })
    }

    /// Whether `p` is a closed point of `Spec` of an integer variant.
    pub fn has_closed_prime(&self, p: u64) -> bool {
        match self {
            BaseRing::Integers { inverted } => arith::is_prime(p) && !inverted.contains(p),
            BaseRing::Modular { n } => arith::is_prime(p) && n % p == 0,
            BaseRing::LocalNilpotent { .. } => false,
        }
    }

    pub fn has_prime(&self, q: &Prime) -> bool {
        match (self, q) {
            (BaseRing::Integers { .. }, Prime::Zero) => true,
            (BaseRing::LocalNilpotent { .. }, Prime::Maximal) => true,
            (_, Prime::Closed(p)) => self.has_closed_prime(*p),
            _ => false,
        }
    }

    /// Residue characteristic for local nilpotent algebras.
    pub fn field_char(&self) -> Option<u64> {
        match self {
            BaseRing::LocalNilpotent { p, .. } => Some(*p),
            _ => None,
        }
    }

    pub fn to_json(&self) -> RingJson {
        let mut j = RingJson::default();
        match self {
            BaseRing::Integers { inverted } => {
                j.kind = "integers".into();
                match inverted {
                    PrimeSet::Finite(s) => j.inverted = Some(s.iter().copied().collect()),
                    PrimeSet::AllExcept(s) => j.inverted_all_except = Some(s.iter().copied().collect()),
                }
            }
            BaseRing::Modular { n } => {
                j.kind = "modular".into();
                j.n = Some(*n);
            }
            BaseRing::LocalNilpotent { p, exponents } => {
                j.kind = "local_nilpotent".into();
                j.p = Some(*p);
                j.exponents = Some(exponents.clone());
            }
        }
        j
    }

    pub fn from_json(j: &RingJson) -> Result<Self> {
        match j.kind.as_str() {
            "integers" => match (&j.inverted, &j.inverted_all_except) {
                (Some(_), Some(_)) => Err(Error::input(
                    "give at most one of `inverted` and `inverted_all_except`",
                )),
                (_, Some(s)) => Self::localized(PrimeSet::AllExcept(s.iter().copied().collect())),
                (s, None) => Self::localized(PrimeSet::Finite(
                    s.iter().flatten().copied().collect(),
                )),
            },
            "modular" => Self::modular(j.n.ok_or_else(|| Error::input("modular ring needs `n`"))?),
            "local_nilpotent" => Self::local_nilpotent(
                j.p.ok_or_else(|| Error::input("local_nilpotent ring needs `p`"))?,
                j.exponents
                    .clone()
                    .ok_or_else(|| Error::input("local_nilpotent ring needs `exponents`"))?,
            ),
            other => Err(Error::input(format!("unknown ring kind `{other}`"))),
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<u64>| s.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match self {
            BaseRing::Integers { inverted: PrimeSet::Finite(s) } if s.is_empty() => write!(f, "Z"),
            BaseRing::Integers { inverted: PrimeSet::Finite(s) } => write!(f, "Z[1/{}]", list(s)),
            BaseRing::Integers { inverted: PrimeSet::AllExcept(s) } if s.is_empty() => write!(f, "Q"),
            BaseRing::Integers { inverted: PrimeSet::AllExcept(s) } => write!(f, "Z_({})", list(s)),
            BaseRing::Modular { n } => write!(f, "Z/{n}"),
            BaseRing::LocalNilpotent { p, exponents } => {
                let gens: Vec<String> = (1..=exponents.len()).map(|i| format!("x{i}")).collect();
                let rels: Vec<String> = exponents
                    .iter()
                    .enumerate()
                    .map(|(i, e)| format!("x{}^{e}", i + 1))
                    .collect();
                write!(f, "F_{p}[{}]/({})", gens.join(","), rels.join(","))
            }
        }
    }
}

/// Wire form of a ring.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverted: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverted_all_except: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<u32>>,
}

/// A prime ideal of one of the supported rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Prime {
    /// `(0)` of a localisation of `ℤ`.
    Zero,
    /// `(p)`.
    Closed(u64),
    /// The maximal ideal of a local nilpotent algebra.
    Maximal,
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prime::Zero => write!(f, "(0)"),
            Prime::Closed(p) => write!(f, "({p})"),
            Prime::Maximal => write!(f, "m"),
        }
    }
}

impl std::str::FromStr for Prime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "m" {
            return Ok(Prime::Maximal);
        }
        let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
        match inner.parse::<u64>() {
            Ok(0) => Ok(Prime::Zero),
            Ok(p) if arith::is_prime(p) => Ok(Prime::Closed(p)),
            _ => Err(Error::input(format!("`{s}` is not a prime descriptor"))),
        }
    }
}

impl Serialize for Prime {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An element of a supported ring, for stable Koszul complexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingElement {
    /// An integer, read in `ℤ_S` or `ℤ/n`.
    Int(BigInt),
    /// Coefficients over the monomial basis of a local nilpotent algebra;
    /// index 0 is the constant term.
    Poly(Vec<u64>),
}

impl RingElement {
    pub fn int(x: i64) -> Self {
        RingElement::Int(BigInt::from(x))
    }

    /// The generator `x_i` (0-based) of a local nilpotent algebra.
    pub fn generator(ring: &BaseRing, i: usize) -> Result<Self> {
        let BaseRing::LocalNilpotent { exponents, .. } = ring else {
            return Err(Error::input("generators exist only for local nilpotent algebras"));
        };
        if i >= exponents.len() {
            return Err(Error::input(format!("no generator x{}", i + 1)));
        }
        let dim: usize = exponents.iter().map(|&e| e as usize).product();
        let stride: usize = exponents[..i].iter().map(|&e| e as usize).product();
        let mut v = vec![0; dim];
        v[stride] = 1;
        Ok(RingElement::Poly(v))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingElement::Int(x) => x.is_zero(),
            RingElement::Poly(v) => v.iter().all(|&c| c == 0),
        }
    }

    pub fn is_unit_int(&self) -> bool {
        matches!(self, RingElement::Int(x) if x.abs().is_one())
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElement::Int(x) => write!(f, "{x}"),
            RingElement::Poly(v) => write!(f, "{v:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_json_round_trip() {
        let rings = [
            BaseRing::integers(),
            BaseRing::rationals(),
            BaseRing::local_integers(2).unwrap(),
            BaseRing::localized(PrimeSet::Finite([2, 3].into())).unwrap(),
            BaseRing::modular(12).unwrap(),
            BaseRing::local_nilpotent(2, vec![2, 3]).unwrap(),
        ];
        let shown: Vec<String> = rings.iter().map(|r| r.to_string()).collect();
        assert_eq!(shown, ["Z", "Q", "Z_(2)", "Z[1/2,3]", "Z/12", "F_2[x1,x2]/(x1^2,x2^3)"]);
        for r in rings {
            assert_eq!(BaseRing::from_json(&r.to_json()).unwrap(), r);
        }
        assert!(BaseRing::modular(1).is_err());
        assert!(BaseRing::local_nilpotent(2, vec![1]).is_err());
        assert!(BaseRing::local_nilpotent(2, vec![8, 8, 8]).is_err());
    }

    #[test]
    fn prime_parsing() {
        assert_eq!("(2)".parse::<Prime>().unwrap(), Prime::Closed(2));
        assert_eq!("(0)".parse::<Prime>().unwrap(), Prime::Zero);
        assert_eq!("m".parse::<Prime>().unwrap(), Prime::Maximal);
        assert!("(4)".parse::<Prime>().is_err());
    }

    #[test]
    fn generators_of_nilpotent_algebra() {
        let r = BaseRing::local_nilpotent(2, vec![2, 3]).unwrap();
        assert_eq!(RingElement::generator(&r, 0).unwrap(), RingElement::Poly(vec![0, 1, 0, 0, 0, 0]));
        assert_eq!(RingElement::generator(&r, 1).unwrap(), RingElement::Poly(vec![0, 0, 1, 0, 0, 0]));
    }
}
