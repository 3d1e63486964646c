use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::complex::ChainComplex;
use super::fp::FpMatrix;
use super::matrix::Matrix;
use super::ring::{BaseRing, Prime, RingElement};
use super::{cohomology, localize_complex};
use crate::{Error, Result};

/// `R^gens / im rel`, optionally with extra primes inverted (`tag`).
///
/// Tags only occur over localisations of `ℤ`: a block with tag `T` stands
/// for the module `(ℤ^gens / im rel)[1/T]`, which need not be finitely
/// generated over the base ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub gens: usize,
    pub rel: Matrix,
    pub tag: BTreeSet<u64>,
}

impl Block {
    pub fn free(gens: usize) -> Self {
        Block {
            gens,
            rel: Matrix::zeros(gens, 0),
            tag: BTreeSet::new(),
        }
    }

    pub fn new(rel: Matrix) -> Self {
        Block {
            gens: rel.rows(),
            rel,
            tag: BTreeSet::new(),
        }
    }

    /// `ℤ/a₁ ⊕ ℤ/a₂ ⊕ …`.
    pub fn cyclic(orders: &[i64]) -> Self {
        let n = orders.len();
        let mut rel = Matrix::zeros(n, n);
        for (i, &a) in orders.iter().enumerate() {
            rel[(i, i)] = BigInt::from(a);
        }
        Block::new(rel)
    }

    pub fn with_tag(mut self, tag: BTreeSet<u64>) -> Self {
        self.tag = tag;
        self
    }

    /// Adds `m · I` to the relations.
    pub fn with_modulus(&self, m: &BigInt) -> Self {
        let extra = Matrix::scalar(self.gens, m.clone());
        Block {
            gens: self.gens,
            rel: Matrix::hstack(self.gens, &[&self.rel, &extra]),
            tag: self.tag.clone(),
        }
    }
}

/// A finite-dimensional `𝔽_p`-vector space with commuting nilpotent
/// operators, one per generator of the algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilModule {
    pub dim: usize,
    pub actions: Vec<FpMatrix>,
}

impl NilModule {
    pub fn new(ring: &BaseRing, dim: usize, actions: Vec<FpMatrix>) -> Result<Self> {
        let BaseRing::LocalNilpotent { p, exponents } = ring else {
            return Err(Error::input("nilpotent modules need a local nilpotent algebra"));
        };
        if actions.len() != exponents.len() {
            return Err(Error::input(format!(
                "expected {} action matrices, got {}",
                exponents.len(),
                actions.len()
            )));
        }
        for (i, a) in actions.iter().enumerate() {
            if a.rows() != dim || a.cols() != dim || a.p() != *p {
                return Err(Error::input(format!("action of x{} has the wrong shape", i + 1)));
            }
            if !a.pow(exponents[i]).is_zero() {
                return Err(Error::input(format!("x{}^{} does not act as zero", i + 1, exponents[i])));
            }
            for (j, b) in actions.iter().enumerate().skip(i + 1) {
                if a.mul(b) != b.mul(a) {
                    return Err(Error::input(format!("actions of x{} and x{} do not commute", i + 1, j + 1)));
                }
            }
        }
        Ok(NilModule { dim, actions })
    }

    pub fn zero(ring: &BaseRing) -> Self {
        Self::free(ring, 0)
    }

    /// `R^k`, on the monomial basis of each copy.
    pub fn free(ring: &BaseRing, k: usize) -> Self {
        let BaseRing::LocalNilpotent { p, exponents } = ring else {
            panic!("free nilpotent module over a non-nilpotent ring");
        };
        let d: usize = exponents.iter().map(|&e| e as usize).product();
        let one: Vec<FpMatrix> = (0..exponents.len())
            .map(|i| {
                let stride: usize = exponents[..i].iter().map(|&e| e as usize).product();
                let mut a = FpMatrix::zeros(*p, d, d);
                for m in 0..d {
                    let deg = (m / stride) % exponents[i] as usize;
                    if deg + 1 < exponents[i] as usize {
                        a.set(m + stride, m, 1);
                    }
                }
                a
            })
            .collect();
        let actions = one
            .iter()
            .map(|a| FpMatrix::block_diag(*p, &vec![a; k]))
            .collect();
        NilModule { dim: d * k, actions }
    }

    /// `R / (x₁,…,x_k)`.
    pub fn residue_field(ring: &BaseRing) -> Self {
        let BaseRing::LocalNilpotent { p, exponents } = ring else {
            panic!("residue field of a non-nilpotent ring");
        };
        NilModule {
            dim: 1,
            actions: vec![FpMatrix::zeros(*p, 1, 1); exponents.len()],
        }
    }

    /// The operator by which a ring element acts.
    pub fn action_of(&self, ring: &BaseRing, x: &RingElement) -> Result<FpMatrix> {
        let (BaseRing::LocalNilpotent { p, exponents }, RingElement::Poly(coeffs)) = (ring, x) else {
            return Err(Error::input("expected a polynomial over a local nilpotent algebra"));
        };
        let d: usize = exponents.iter().map(|&e| e as usize).product();
        if coeffs.len() != d {
            return Err(Error::input(format!("expected {d} coefficients, got {}", coeffs.len())));
        }
        let mut out = FpMatrix::zeros(*p, self.dim, self.dim);
        for (m, &c) in coeffs.iter().enumerate() {
            if c % p == 0 {
                continue;
            }
            let mut op = FpMatrix::identity(*p, self.dim);
            let mut rest = m;
            for (i, &e) in exponents.iter().enumerate() {
                op = op.mul(&self.actions[i].pow((rest % e as usize) as u32));
                rest /= e as usize;
            }
            out = out.add(&op.scale(c));
        }
        Ok(out)
    }

    pub fn direct_sum(&self, other: &NilModule, p: u64) -> NilModule {
        NilModule {
            dim: self.dim + other.dim,
            actions: self
                .actions
                .iter()
                .zip(&other.actions)
                .map(|(a, b)| FpMatrix::block_diag(p, &[a, b]))
                .collect(),
        }
    }
}

/// Isomorphism invariants of a module over a localisation of `ℤ` or `ℤ/n`.
///
/// `rank` is the `ℚ`-dimension of `M ⊗ ℚ`. Localised at a prime `q` the
/// torsion-free part is `ℤ_(q)^{rank − b} ⊕ ℚ^b` with `b = divisible[q]`
/// (zero when absent); the remaining parts are the finite primary torsion
/// and `prufer[q]` copies of `ℤ(q^∞)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AbelianForm {
    pub rank: usize,
    /// Elementary divisors `q^e`, sorted.
    pub torsion: Vec<(u64, u32)>,
    pub divisible: BTreeMap<u64, usize>,
    pub prufer: BTreeMap<u64, usize>,
}

impl AbelianForm {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty() && self.prufer.is_empty()
    }

    /// Whether the localisation at `q` vanishes.
    pub fn is_zero_at(&self, q: &Prime) -> bool {
        match q {
            Prime::Zero => self.rank == 0,
            Prime::Closed(p) => {
                self.rank == 0
                    && !self.torsion.iter().any(|(t, _)| t == p)
                    && !self.prufer.contains_key(p)
            }
            Prime::Maximal => self.is_zero(),
        }
    }

    pub fn torsion_primes(&self) -> BTreeSet<u64> {
        self.torsion
            .iter()
            .map(|&(p, _)| p)
            .chain(self.prufer.keys().copied())
            .collect()
    }

    /// Invariant factors `d₁ | d₂ | …` of the finite torsion part.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &(p, e) in &self.torsion {
            by_prime.entry(p).or_default().push(e);
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![BigInt::from(1); len];
        for (p, mut es) in by_prime {
            es.sort_unstable_by(|a, b| b.cmp(a));
            for (k, e) in es.into_iter().enumerate() {
                out[len - 1 - k] *= BigInt::from(p).pow(e);
            }
        }
        out
    }

    pub(crate) fn push_torsion(&mut self, p: u64, e: u32) {
        self.torsion.push((p, e));
        self.torsion.sort_unstable();
    }
}

impl fmt::Display for AbelianForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "Z".to_string() } else { format!("Z^{}", self.rank) });
        }
        for (q, b) in &self.divisible {
            parts.push(format!("Q^{b}@{q}"));
        }
        for (q, e) in &self.torsion {
            parts.push(if *e == 1 { format!("Z/{q}") } else { format!("Z/{q}^{e}") });
        }
        for (q, k) in &self.prufer {
            parts.push(if *k == 1 { format!("Z({q}^inf)") } else { format!("Z({q}^inf)^{k}") });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Invariants of a module over a local nilpotent algebra: dimension and the
/// ranks of `x_i^j` for `j = 1, 2, …` (the Jordan type of each generator).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct NilForm {
    pub dim: usize,
    pub ranks: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ModuleForm {
    Abelian(AbelianForm),
    Nilpotent(NilForm),
}

impl ModuleForm {
    pub fn is_zero(&self) -> bool {
        match self {
            ModuleForm::Abelian(a) => a.is_zero(),
            ModuleForm::Nilpotent(n) => n.dim == 0,
        }
    }

    pub fn is_zero_at(&self, q: &Prime) -> bool {
        match self {
            ModuleForm::Abelian(a) => a.is_zero_at(q),
            ModuleForm::Nilpotent(n) => n.dim == 0,
        }
    }

    pub fn as_abelian(&self) -> Option<&AbelianForm> {
        match self {
            ModuleForm::Abelian(a) => Some(a),
            ModuleForm::Nilpotent(_) => None,
        }
    }
}

impl fmt::Display for ModuleForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleForm::Abelian(a) => write!(f, "{a}"),
            ModuleForm::Nilpotent(n) if n.dim == 0 => write!(f, "0"),
            ModuleForm::Nilpotent(n) => write!(f, "F^{} {:?}", n.dim, n.ranks),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleBody {
    Presented(Block),
    Nil(NilModule),
}

/// A module over one of the supported rings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedModule {
    ring: BaseRing,
    body: ModuleBody,
}

impl PresentedModule {
    /// Columns of `rel` are relations, rows are generators.
    pub fn new(ring: BaseRing, rel: Matrix) -> Result<Self> {
        if ring.field_char().is_some() {
            return Err(Error::input("use `nilpotent` for modules over a local nilpotent algebra"));
        }
        Ok(PresentedModule {
            ring,
            body: ModuleBody::Presented(Block::new(rel)),
        })
    }

    pub fn from_block(ring: BaseRing, block: Block) -> Result<Self> {
        if !block.tag.is_empty() && !ring.is_integral() {
            return Err(Error::input("tags need a localisation of Z"));
        }
        Ok(PresentedModule {
            ring,
            body: ModuleBody::Presented(block),
        })
    }

    pub fn nilpotent(ring: BaseRing, m: NilModule) -> Self {
        PresentedModule {
            ring,
            body: ModuleBody::Nil(m),
        }
    }

    pub fn ring(&self) -> &BaseRing {
        &self.ring
    }

    pub fn body(&self) -> &ModuleBody {
        &self.body
    }

    /// The module as a complex concentrated in degree 0.
    pub fn to_complex(&self) -> ChainComplex {
        match &self.body {
            ModuleBody::Presented(b) => ChainComplex::abelian(self.ring.clone(), 0, vec![vec![b.clone()]], vec![])
                .expect("a single module is a complex"),
            ModuleBody::Nil(m) => ChainComplex::nilpotent(self.ring.clone(), 0, vec![m.clone()], vec![])
                .expect("a single module is a complex"),
        }
    }

    pub fn canonical_form(&self) -> Result<ModuleForm> {
        cohomology(&self.to_complex(), 0)
    }

    pub fn localize(&self, q: &Prime) -> Result<PresentedModule> {
        let c = localize_complex(&self.to_complex(), q)?;
        Ok(c.term_module(0))
    }
}

/// Weakly associated primes: those minimal over the annihilator of some element.
///
/// Over the supported rings these are read off the canonical form: `(0)`
/// when there are elements of infinite order, `(q)` when there is
/// `q`-torsion, and the maximal ideal for nonzero modules over a local
/// nilpotent algebra.
pub fn weakly_associated(m: &PresentedModule) -> Result<BTreeSet<Prime>> {
    Ok(weakly_associated_form(&m.canonical_form()?))
}

pub fn weakly_associated_form(form: &ModuleForm) -> BTreeSet<Prime> {
    match form {
        ModuleForm::Nilpotent(n) if n.dim > 0 => [Prime::Maximal].into(),
        ModuleForm::Nilpotent(_) => BTreeSet::new(),
        ModuleForm::Abelian(a) => {
            let mut out: BTreeSet<Prime> = a.torsion_primes().into_iter().map(Prime::Closed).collect();
            if a.rank > 0 {
                out.insert(Prime::Zero);
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_nilpotent_module_is_valid() {
        let r = BaseRing::local_nilpotent(2, vec![2, 3]).unwrap();
        let m = NilModule::free(&r, 2);
        assert_eq!(m.dim, 12);
        NilModule::new(&r, m.dim, m.actions.clone()).unwrap();
        let x2 = RingElement::generator(&r, 1).unwrap();
        let a = m.action_of(&r, &x2).unwrap();
        assert_eq!(a, m.actions[1]);
    }

    #[test]
    fn invariant_factors_from_elementary_divisors() {
        let f = AbelianForm {
            torsion: vec![(2, 1), (2, 2), (3, 1)],
            ..Default::default()
        };
        assert_eq!(f.invariant_factors(), vec![BigInt::from(2), BigInt::from(12)]);
        assert_eq!(f.to_string(), "Z/2 + Z/2^2 + Z/3");
    }
}
