//! Bounded cochain complexes over the supported rings.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::fp::FpMatrix;
use super::matrix::{smith_normal_form, Matrix};
use super::module::{Block, ModuleBody, NilModule, PresentedModule};
use super::ring::{BaseRing, PrimeSet, RingJson};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Body {
    /// Each degree is a direct sum of blocks; `diffs[k]` maps degree
    /// `lo + k` to `lo + k + 1` on generator coordinates.
    Abelian {
        terms: Vec<Vec<Block>>,
        diffs: Vec<Matrix>,
    },
    Nil {
        terms: Vec<NilModule>,
        diffs: Vec<FpMatrix>,
    },
}

/// A cochain complex concentrated in degrees `lo..=hi`; differentials raise
/// degree. `d ∘ d = 0` and well-definedness on presentations are checked at
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    ring: BaseRing,
    lo: i64,
    body: Body,
}

/// A degreewise map of complexes, on generator coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainMap {
    Abelian { lo: i64, maps: Vec<Matrix> },
    Nil { lo: i64, maps: Vec<FpMatrix> },
}

impl ChainComplex {
    pub fn abelian(ring: BaseRing, lo: i64, terms: Vec<Vec<Block>>, diffs: Vec<Matrix>) -> Result<Self> {
        if ring.field_char().is_some() {
            return Err(Error::input("presented terms need a localisation of Z or Z/n"));
        }
        let c = ChainComplex {
            ring,
            lo,
            body: Body::Abelian { terms, diffs },
        };
        c.validate_abelian()?;
        Ok(c)
    }

    pub fn nilpotent(ring: BaseRing, lo: i64, terms: Vec<NilModule>, diffs: Vec<FpMatrix>) -> Result<Self> {
        if ring.field_char().is_none() {
            return Err(Error::input("nilpotent terms need a local nilpotent algebra"));
        }
        let c = ChainComplex {
            ring,
            lo,
            body: Body::Nil { terms, diffs },
        };
        c.validate_nil()?;
        Ok(c)
    }

    /// The zero complex in degree 0.
    pub fn zero(ring: BaseRing) -> Self {
        match ring.field_char() {
            Some(_) => {
                let z = NilModule::zero(&ring);
                ChainComplex::nilpotent(ring, 0, vec![z], vec![]).expect("zero complex")
            }
            None => ChainComplex::abelian(ring, 0, vec![vec![]], vec![]).expect("zero complex"),
        }
    }

    pub fn ring(&self) -> &BaseRing {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        match &self.body {
            Body::Abelian { terms, .. } => terms.len(),
            Body::Nil { terms, .. } => terms.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn is_nilpotent(&self) -> bool {
        matches!(self.body, Body::Nil { .. })
    }

    fn index(&self, i: i64) -> Option<usize> {
        (i >= self.lo && i <= self.hi()).then(|| (i - self.lo) as usize)
    }

    pub fn blocks(&self, i: i64) -> &[Block] {
        match (&self.body, self.index(i)) {
            (Body::Abelian { terms, .. }, Some(k)) => &terms[k],
            _ => &[],
        }
    }

    pub fn gens(&self, i: i64) -> usize {
        match &self.body {
            Body::Abelian { .. } => self.blocks(i).iter().map(|b| b.gens).sum(),
            Body::Nil { .. } => self.nil_term(i).dim,
        }
    }

    /// Starting generator index of each block in degree `i`.
    pub fn block_offsets(&self, i: i64) -> Vec<usize> {
        let mut off = 0;
        self.blocks(i)
            .iter()
            .map(|b| {
                let o = off;
                off += b.gens;
                o
            })
            .collect()
    }

    /// Block-diagonal relation matrix of degree `i`, without the ring modulus.
    pub fn relations(&self, i: i64) -> Matrix {
        let rels: Vec<&Matrix> = self.blocks(i).iter().map(|b| &b.rel).collect();
        Matrix::block_diag(&rels)
    }

    /// Relations of degree `i` together with `n · I` over `ℤ/n`.
    pub fn full_relations(&self, i: i64) -> Matrix {
        let r = self.relations(i);
        match &self.ring {
            BaseRing::Modular { n } => {
                let g = r.rows();
                Matrix::hstack(g, &[&r, &Matrix::scalar(g, BigInt::from(*n))])
            }
            _ => r,
        }
    }

    /// `d^i`, zero outside the stored range.
    pub fn diff(&self, i: i64) -> Matrix {
        match (&self.body, self.index(i), self.index(i + 1)) {
            (Body::Abelian { diffs, .. }, Some(k), Some(_)) => diffs[k].clone(),
            _ => Matrix::zeros(self.gens(i + 1), self.gens(i)),
        }
    }

    pub fn nil_term(&self, i: i64) -> NilModule {
        match (&self.body, self.index(i)) {
            (Body::Nil { terms, .. }, Some(k)) => terms[k].clone(),
            _ => NilModule::zero(&self.ring),
        }
    }

    pub fn nil_diff(&self, i: i64) -> FpMatrix {
        let p = self.ring.field_char().expect("nilpotent complex");
        match (&self.body, self.index(i), self.index(i + 1)) {
            (Body::Nil { diffs, .. }, Some(k), Some(_)) => diffs[k].clone(),
            _ => FpMatrix::zeros(p, self.gens(i + 1), self.gens(i)),
        }
    }

    pub fn term_module(&self, i: i64) -> PresentedModule {
        match &self.body {
            Body::Nil { .. } => PresentedModule::nilpotent(self.ring.clone(), self.nil_term(i)),
            Body::Abelian { .. } => {
                let blocks = self.blocks(i);
                let block = match blocks {
                    [b] => b.clone(),
                    _ => Block::new(self.relations(i)),
                };
                PresentedModule::from_block(self.ring.clone(), block).expect("term of a valid complex")
            }
        }
    }

    pub fn is_tagged(&self) -> bool {
        self.degrees().any(|i| self.blocks(i).iter().any(|b| !b.tag.is_empty()))
    }

    pub fn tag_primes(&self) -> BTreeSet<u64> {
        self.degrees()
            .flat_map(|i| self.blocks(i).iter().flat_map(|b| b.tag.iter().copied()))
            .collect()
    }

    /// Every nonzero matrix entry (relations and differentials).
    pub fn entries(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        for i in self.degrees() {
            out.extend(self.relations(i).entries().filter(|x| !x.is_zero()).cloned());
            out.extend(self.diff(i).entries().filter(|x| !x.is_zero()).cloned());
        }
        out
    }

    fn validate_abelian(&self) -> Result<()> {
        let Body::Abelian { terms, diffs } = &self.body else {
            unreachable!()
        };
        if terms.is_empty() {
            return Err(Error::input("a complex needs at least one degree"));
        }
        if diffs.len() + 1 != terms.len() {
            return Err(Error::input(format!(
                "{} degrees need {} differentials, got {}",
                terms.len(),
                terms.len() - 1,
                diffs.len()
            )));
        }
        for i in self.degrees() {
            for b in self.blocks(i) {
                if b.rel.rows() != b.gens {
                    return Err(Error::input(format!("degree {i}: relation matrix has the wrong number of rows")));
                }
                if !b.tag.is_empty() && !self.ring.is_integral() {
                    return Err(Error::input("tags need a localisation of Z"));
                }
                if let Some(p) = b.tag.iter().find(|&&p| !super::arith::is_prime(p)) {
                    return Err(Error::input(format!("tag entry {p} is not prime")));
                }
            }
        }
        for (k, d) in diffs.iter().enumerate() {
            let i = self.lo + k as i64;
            if d.rows() != self.gens(i + 1) || d.cols() != self.gens(i) {
                return Err(Error::input(format!(
                    "d^{i} should be {}x{}, got {}x{}",
                    self.gens(i + 1),
                    self.gens(i),
                    d.rows(),
                    d.cols()
                )));
            }
            self.check_tag_monotone(i, d)?;
            let image = d.mul(&self.full_relations(i));
            if !self.in_image(i + 1, &image) {
                return Err(Error::input(format!("d^{i} does not respect the relations")));
            }
        }
        for i in self.lo..self.hi() - 1 {
            let dd = self.diff(i + 1).mul(&self.diff(i));
            if !self.in_image(i + 2, &dd) {
                return Err(Error::input(format!("d^{} ∘ d^{i} is not zero", i + 1)));
            }
        }
        Ok(())
    }

    /// Maps may only go from a block to blocks with at least the same
    /// primes inverted.
    fn check_tag_monotone(&self, i: i64, d: &Matrix) -> Result<()> {
        let (src, dst) = (self.blocks(i), self.blocks(i + 1));
        let (so, dof) = (self.block_offsets(i), self.block_offsets(i + 1));
        for (bs, s) in src.iter().enumerate() {
            for (bd, t) in dst.iter().enumerate() {
                if s.tag.is_subset(&t.tag) {
                    continue;
                }
                for r in 0..t.gens {
                    for c in 0..s.gens {
                        if !d[(dof[bd] + r, so[bs] + c)].is_zero() {
                            return Err(Error::input(format!(
                                "d^{i} maps a block with more primes inverted into one with fewer"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether every column of `y` lies in the relation submodule of degree
    /// `i`, block by block over the block's own localisation.
    pub(crate) fn in_image(&self, i: i64, y: &Matrix) -> bool {
        let offs = self.block_offsets(i);
        let all_cols: Vec<usize> = (0..y.cols()).collect();
        self.blocks(i).iter().zip(offs).all(|(b, o)| {
            let rows: Vec<usize> = (o..o + b.gens).collect();
            let part = y.select(&rows, &all_cols);
            let (rel, inverted) = match &self.ring {
                BaseRing::Modular { n } => (
                    Matrix::hstack(b.gens, &[&b.rel, &Matrix::scalar(b.gens, BigInt::from(*n))]),
                    PrimeSet::Finite(BTreeSet::new()),
                ),
                BaseRing::Integers { inverted } => (b.rel.clone(), inverted.with(&b.tag)),
                BaseRing::LocalNilpotent { .. } => unreachable!(),
            };
            in_span(&rel, &part, &inverted)
        })
    }

    fn validate_nil(&self) -> Result<()> {
        let Body::Nil { terms, diffs } = &self.body else {
            unreachable!()
        };
        if terms.is_empty() {
            return Err(Error::input("a complex needs at least one degree"));
        }
        if diffs.len() + 1 != terms.len() {
            return Err(Error::input("wrong number of differentials"));
        }
        for t in terms {
            NilModule::new(&self.ring, t.dim, t.actions.clone())?;
        }
        for (k, d) in diffs.iter().enumerate() {
            let i = self.lo + k as i64;
            let (s, t) = (&terms[k], &terms[k + 1]);
            if d.rows() != t.dim || d.cols() != s.dim {
                return Err(Error::input(format!("d^{i} has the wrong shape")));
            }
            for (a, b) in s.actions.iter().zip(&t.actions) {
                if d.mul(a) != b.mul(d) {
                    return Err(Error::input(format!("d^{i} is not linear over the algebra")));
                }
            }
            if k + 1 < diffs.len() && !diffs[k + 1].mul(d).is_zero() {
                return Err(Error::input(format!("d^{} ∘ d^{i} is not zero", i + 1)));
            }
        }
        Ok(())
    }

    /// Same data over another ring; used for restriction and extension of
    /// scalars along surjections and localisations.
    pub(crate) fn with_ring(&self, ring: BaseRing) -> Result<ChainComplex> {
        match &self.body {
            Body::Abelian { terms, diffs } => ChainComplex::abelian(ring, self.lo, terms.clone(), diffs.clone()),
            Body::Nil { terms, diffs } => ChainComplex::nilpotent(ring, self.lo, terms.clone(), diffs.clone()),
        }
    }

    /// Applies `f` to every block, keeping differentials.
    pub(crate) fn map_blocks(&self, ring: BaseRing, f: impl Fn(&Block) -> Block) -> Result<ChainComplex> {
        let Body::Abelian { terms, diffs } = &self.body else {
            return Err(Error::input("expected a complex of presented modules"));
        };
        let terms = terms.iter().map(|t| t.iter().map(&f).collect()).collect();
        ChainComplex::abelian(ring, self.lo, terms, diffs.clone())
    }

    /// `C[k]`: degree `i` holds `C^{i+k}`, differentials scaled by `(−1)^k`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let sign = k.rem_euclid(2) == 1;
        let body = match &self.body {
            Body::Abelian { terms, diffs } => Body::Abelian {
                terms: terms.clone(),
                diffs: diffs.iter().map(|d| if sign { d.neg() } else { d.clone() }).collect(),
            },
            Body::Nil { terms, diffs } => Body::Nil {
                terms: terms.clone(),
                diffs: diffs.iter().map(|d| if sign { d.neg() } else { d.clone() }).collect(),
            },
        };
        ChainComplex {
            ring: self.ring.clone(),
            lo: self.lo - k,
            body,
        }
    }

    pub fn direct_sum(&self, other: &ChainComplex) -> Result<ChainComplex> {
        if self.ring != other.ring {
            return Err(Error::input("direct sum of complexes over different rings"));
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        match (&self.body, &other.body) {
            (Body::Abelian { .. }, Body::Abelian { .. }) => {
                let terms = (lo..=hi)
                    .map(|i| [self.blocks(i), other.blocks(i)].concat())
                    .collect();
                let diffs = (lo..hi)
                    .map(|i| Matrix::block_diag(&[&self.diff(i), &other.diff(i)]))
                    .collect();
                ChainComplex::abelian(self.ring.clone(), lo, terms, diffs)
            }
            (Body::Nil { .. }, Body::Nil { .. }) => {
                let p = self.ring.field_char().expect("nilpotent");
                let terms = (lo..=hi)
                    .map(|i| self.nil_term(i).direct_sum(&other.nil_term(i), p))
                    .collect();
                let diffs = (lo..hi)
                    .map(|i| FpMatrix::block_diag(p, &[&self.nil_diff(i), &other.nil_diff(i)]))
                    .collect();
                ChainComplex::nilpotent(self.ring.clone(), lo, terms, diffs)
            }
            _ => unreachable!("same ring implies same body kind"),
        }
    }

    /// `cone(f)^i = C^{i+1} ⊕ C′^i` with `d(c, c′) = (−d c, f c + d c′)`.
    pub fn cone(&self, target: &ChainComplex, f: &ChainMap) -> Result<ChainComplex> {
        if self.ring != target.ring {
            return Err(Error::input("cone of a map between complexes over different rings"));
        }
        let lo = (self.lo - 1).min(target.lo);
        let hi = (self.hi() - 1).max(target.hi());
        match f {
            ChainMap::Abelian { lo: flo, maps } => {
                let fm = |i: i64| -> Matrix {
                    let k = i - flo;
                    if k >= 0 && (k as usize) < maps.len() {
                        maps[k as usize].clone()
                    } else {
                        Matrix::zeros(target.gens(i), self.gens(i))
                    }
                };
                for i in self.degrees().chain(target.degrees()) {
                    let m = fm(i);
                    if m.rows() != target.gens(i) || m.cols() != self.gens(i) {
                        return Err(Error::input(format!("map in degree {i} has the wrong shape")));
                    }
                }
                let terms = (lo..=hi)
                    .map(|i| [self.blocks(i + 1), target.blocks(i)].concat())
                    .collect();
                let diffs = (lo..hi)
                    .map(|i| {
                        let (a, b) = (self.gens(i + 1), target.gens(i));
                        let (a2, b2) = (self.gens(i + 2), target.gens(i + 1));
                        let mut d = Matrix::zeros(a2 + b2, a + b);
                        d.set_block(0, 0, &self.diff(i + 1).neg());
                        d.set_block(a2, 0, &fm(i + 1));
                        d.set_block(a2, a, &target.diff(i));
                        d
                    })
                    .collect();
                ChainComplex::abelian(self.ring.clone(), lo, terms, diffs)
            }
            ChainMap::Nil { lo: flo, maps } => {
                let p = self.ring.field_char().expect("nilpotent");
                let fm = |i: i64| -> FpMatrix {
                    let k = i - flo;
                    if k >= 0 && (k as usize) < maps.len() {
                        maps[k as usize].clone()
                    } else {
                        FpMatrix::zeros(p, target.gens(i), self.gens(i))
                    }
                };
                let terms = (lo..=hi)
                    .map(|i| self.nil_term(i + 1).direct_sum(&target.nil_term(i), p))
                    .collect();
                let diffs = (lo..hi)
                    .map(|i| {
                        let (a, b) = (self.gens(i + 1), target.gens(i));
                        let (a2, b2) = (self.gens(i + 2), target.gens(i + 1));
                        let mut d = FpMatrix::zeros(p, a2 + b2, a + b);
                        d.set_block(0, 0, &self.nil_diff(i + 1).neg());
                        d.set_block(a2, 0, &fm(i + 1));
                        d.set_block(a2, a, &target.nil_diff(i));
                        d
                    })
                    .collect();
                ChainComplex::nilpotent(self.ring.clone(), lo, terms, diffs)
            }
        }
    }
}

impl ChainMap {
    /// Multiplication by an integer, `C → C`.
    pub fn scalar(c: &ChainComplex, k: i64) -> ChainMap {
        match c.ring.field_char() {
            Some(p) => ChainMap::Nil {
                lo: c.lo,
                maps: c
                    .degrees()
                    .map(|i| FpMatrix::identity(p, c.gens(i)).scale(k.rem_euclid(p as i64) as u64))
                    .collect(),
            },
            None => ChainMap::Abelian {
                lo: c.lo,
                maps: c.degrees().map(|i| Matrix::scalar(c.gens(i), BigInt::from(k))).collect(),
            },
        }
    }

    pub fn zero(source: &ChainComplex) -> ChainMap {
        match source.ring.field_char() {
            Some(_) => ChainMap::Nil { lo: 0, maps: vec![] },
            None => ChainMap::Abelian { lo: 0, maps: vec![] },
        }
    }
}

/// Whether each column of `y` lies in the column span of `rel` over `ℤ_S`.
pub(crate) fn in_span(rel: &Matrix, y: &Matrix, inverted: &PrimeSet) -> bool {
    if y.is_zero() {
        return true;
    }
    let s = smith_normal_form(rel);
    let c = s.u.mul(y);
    for j in 0..y.cols() {
        for i in 0..c.rows() {
            let x = &c[(i, j)];
            if i < s.rank {
                let g = s.diag[i].gcd(x);
                if !is_unit(&(&s.diag[i] / g), inverted) {
                    return false;
                }
            } else if !x.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Whether a nonzero integer is a unit of `ℤ_S`.
pub(crate) fn is_unit(x: &BigInt, inverted: &PrimeSet) -> bool {
    if x.is_zero() {
        return false;
    }
    match inverted {
        PrimeSet::Finite(s) => {
            let mut x = x.abs();
            for &p in s {
                let p = BigInt::from(p);
                while x.is_multiple_of(&p) {
                    x /= &p;
                }
            }
            x.is_one()
        }
        PrimeSet::AllExcept(s) => s.iter().all(|&p| !x.is_multiple_of(&BigInt::from(p))),
    }
}

fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        m.to_rows()
            .into_iter()
            .map(|r| Value::Array(r.into_iter().map(big_to_json).collect()))
            .collect(),
    )
}

fn big_to_json(x: BigInt) -> Value {
    match i64::try_from(&x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn big_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::input(format!("`{n}` is not an integer"))),
        Value::String(s) => s.parse().map_err(|_| Error::input(format!("`{s}` is not an integer"))),
        other => Err(Error::input(format!("expected an integer, got {other}"))),
    }
}

/// Row-major integer matrix; `[]` stands for a zero matrix of the expected shape.
fn matrix_from_json(v: &Value, rows: usize, cols: Option<usize>) -> Result<Matrix> {
    let arr = v.as_array().ok_or_else(|| Error::input("expected a matrix (array of rows)"))?;
    if arr.is_empty() {
        return Ok(Matrix::zeros(rows, cols.unwrap_or(0)));
    }
    if arr.len() != rows {
        return Err(Error::input(format!("expected {rows} rows, got {}", arr.len())));
    }
    let parsed: Vec<Vec<BigInt>> = arr
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::input("matrix rows must be arrays"))?
                .iter()
                .map(big_from_json)
                .collect()
        })
        .collect::<Result<_>>()?;
    let width = cols.unwrap_or(parsed[0].len());
    if parsed.iter().any(|r| r.len() != width) {
        return Err(Error::input(format!("matrix rows must all have length {width}")));
    }
    Ok(Matrix::from_rows(rows, width, &parsed))
}

fn fp_from_json(p: u64, v: &Value, n: usize) -> Result<FpMatrix> {
    let m = matrix_from_json(v, n, Some(n))?;
    let mut out = FpMatrix::zeros(p, n, n);
    for i in 0..n {
        for j in 0..n {
            let x = m[(i, j)].mod_floor(&BigInt::from(p));
            out.set(i, j, u64::try_from(&x).expect("reduced"));
        }
    }
    Ok(out)
}

fn fp_to_json(m: &FpMatrix) -> Value {
    json!(m.to_rows())
}

fn block_from_json(v: &Value) -> Result<Vec<Block>> {
    match v {
        Value::Array(_) => {
            let rows = v.as_array().map_or(0, Vec::len);
            Ok(vec![Block::new(matrix_from_json(v, rows, None)?)])
        }
        Value::Object(o) => {
            if let Some(k) = o.keys().find(|k| !["gens", "relations", "tag", "blocks"].contains(&k.as_str())) {
                return Err(Error::input(format!("unknown module field `{k}`")));
            }
            if let Some(bs) = o.get("blocks") {
                let arr = bs.as_array().ok_or_else(|| Error::input("`blocks` must be an array"))?;
                let mut out = Vec::new();
                for b in arr {
                    out.extend(block_from_json(b)?);
                }
                return Ok(out);
            }
            let gens = o
                .get("gens")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::input("module object needs `gens`"))? as usize;
            let rel = match o.get("relations") {
                Some(r) => matrix_from_json(r, gens, None)?,
                None => Matrix::zeros(gens, 0),
            };
            let tag: BTreeSet<u64> = match o.get("tag") {
                Some(t) => serde_json::from_value(t.clone())
                    .map_err(|e| Error::input(format!("bad tag: {e}")))?,
                None => BTreeSet::new(),
            };
            Ok(vec![Block { gens, rel, tag }])
        }
        other => Err(Error::input(format!("expected a module, got {other}"))),
    }
}

impl ChainComplex {
    pub fn from_json(v: &Value) -> Result<ChainComplex> {
        let obj = v.as_object().ok_or_else(|| Error::input("complex must be a JSON object"))?;
        let ring_json: RingJson = serde_json::from_value(
            obj.get("ring").cloned().ok_or_else(|| Error::input("complex needs `ring`"))?,
        )
        .map_err(|e| Error::input(format!("bad ring: {e}")))?;
        let ring = BaseRing::from_json(&ring_json)?;
        let degrees: (i64, i64) = serde_json::from_value(
            obj.get("degrees").cloned().ok_or_else(|| Error::input("complex needs `degrees`"))?,
        )
        .map_err(|e| Error::input(format!("bad degrees: {e}")))?;
        if degrees.1 < degrees.0 {
            return Err(Error::input("degrees must satisfy lo ≤ hi"));
        }
        let count = (degrees.1 - degrees.0 + 1) as usize;
        let modules = obj
            .get("modules")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input("complex needs `modules`"))?;
        if modules.len() != count {
            return Err(Error::input(format!("expected {count} modules, got {}", modules.len())));
        }
        let empty = Vec::new();
        let diffs_json = match obj.get("differentials") {
            Some(d) => d.as_array().ok_or_else(|| Error::input("`differentials` must be an array"))?,
            None => &empty,
        };
        if !diffs_json.is_empty() && diffs_json.len() != count - 1 {
            return Err(Error::input(format!(
                "expected {} differentials, got {}",
                count - 1,
                diffs_json.len()
            )));
        }
        match ring.field_char() {
            Some(p) => {
                let terms: Vec<NilModule> = modules
                    .iter()
                    .map(|m| {
                        let dim = m
                            .get("dim")
                            .and_then(Value::as_u64)
                            .ok_or_else(|| Error::input("nilpotent module needs `dim`"))?
                            as usize;
                        let acts = m
                            .get("actions")
                            .and_then(Value::as_array)
                            .ok_or_else(|| Error::input("nilpotent module needs `actions`"))?;
                        let actions = acts.iter().map(|a| fp_from_json(p, a, dim)).collect::<Result<_>>()?;
                        NilModule::new(&ring, dim, actions)
                    })
                    .collect::<Result<_>>()?;
                let diffs = (0..count - 1)
                    .map(|k| {
                        let (r, c) = (terms[k + 1].dim, terms[k].dim);
                        let m = match diffs_json.get(k) {
                            Some(d) => matrix_from_json(d, r, Some(c))?,
                            None => Matrix::zeros(r, c),
                        };
                        let mut out = FpMatrix::zeros(p, r, c);
                        for i in 0..r {
                            for j in 0..c {
                                let x = m[(i, j)].mod_floor(&BigInt::from(p));
                                out.set(i, j, u64::try_from(&x).expect("reduced"));
                            }
                        }
                        Ok(out)
                    })
                    .collect::<Result<_>>()?;
                ChainComplex::nilpotent(ring, degrees.0, terms, diffs)
            }
            None => {
                let terms: Vec<Vec<Block>> = modules.iter().map(block_from_json).collect::<Result<_>>()?;
                let gens: Vec<usize> = terms.iter().map(|t| t.iter().map(|b| b.gens).sum()).collect();
                let diffs = (0..count - 1)
                    .map(|k| match diffs_json.get(k) {
                        Some(d) => matrix_from_json(d, gens[k + 1], Some(gens[k])),
                        None => Ok(Matrix::zeros(gens[k + 1], gens[k])),
                    })
                    .collect::<Result<_>>()?;
                ChainComplex::abelian(ring, degrees.0, terms, diffs)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let ring = serde_json::to_value(self.ring.to_json()).expect("ring serialises");
        let (modules, diffs): (Vec<Value>, Vec<Value>) = match &self.body {
            Body::Abelian { terms, diffs } => (
                terms
                    .iter()
                    .map(|t| {
                        let blocks: Vec<Value> = t
                            .iter()
                            .map(|b| {
                                let mut o = json!({"gens": b.gens, "relations": matrix_to_json(&b.rel)});
                                if !b.tag.is_empty() {
                                    o["tag"] = json!(b.tag);
                                }
                                o
                            })
                            .collect();
                        match blocks.len() {
                            1 => blocks.into_iter().next().expect("one block"),
                            0 => json!({"gens": 0}),
                            _ => json!({ "blocks": blocks }),
                        }
                    })
                    .collect(),
                diffs.iter().map(matrix_to_json).collect(),
            ),
            Body::Nil { terms, diffs } => (
                terms
                    .iter()
                    .map(|t| json!({"dim": t.dim, "actions": t.actions.iter().map(fp_to_json).collect::<Vec<_>>()}))
                    .collect(),
                diffs.iter().map(fp_to_json).collect(),
            ),
        };
        json!({
            "ring": ring,
            "degrees": [self.lo, self.hi()],
            "modules": modules,
            "differentials": diffs,
        })
    }
}

impl From<&PresentedModule> for ChainComplex {
    fn from(m: &PresentedModule) -> Self {
        m.to_complex()
    }
}

impl ModuleBody {
    pub fn gens(&self) -> usize {
        match self {
            ModuleBody::Presented(b) => b.gens,
            ModuleBody::Nil(n) => n.dim,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn times_two() -> ChainComplex {
        ChainComplex::abelian(
            BaseRing::integers(),
            0,
            vec![vec![Block::free(1)], vec![Block::free(1)]],
            vec![Matrix::from_i64(&[&[2]])],
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_complexes() {
        let r = BaseRing::integers();
        let err = ChainComplex::abelian(
            r.clone(),
            0,
            vec![vec![Block::free(1)], vec![Block::free(1)], vec![Block::free(1)]],
            vec![Matrix::from_i64(&[&[1]]), Matrix::from_i64(&[&[1]])],
        );
        assert!(err.is_err());
        // over Z/4 the composite 2·2 vanishes
        let ok = ChainComplex::abelian(
            BaseRing::modular(4).unwrap(),
            0,
            vec![vec![Block::free(1)], vec![Block::free(1)], vec![Block::free(1)]],
            vec![Matrix::from_i64(&[&[2]]), Matrix::from_i64(&[&[2]])],
        );
        assert!(ok.is_ok());
        // Z/2 → Z by 1 is not well defined
        let bad = ChainComplex::abelian(
            r,
            0,
            vec![vec![Block::cyclic(&[2])], vec![Block::free(1)]],
            vec![Matrix::from_i64(&[&[1]])],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = times_two();
        let back = ChainComplex::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        let text = r#"{"ring":{"kind":"integers"},"degrees":[0,0],"modules":[[[6]]]}"#;
        let m = ChainComplex::from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(m.gens(0), 1);
    }

    #[test]
    fn units_of_localisations() {
        let s = PrimeSet::Finite([2].into());
        assert!(is_unit(&BigInt::from(-8), &s));
        assert!(!is_unit(&BigInt::from(6), &s));
        let t = PrimeSet::AllExcept([3].into());
        assert!(is_unit(&BigInt::from(10), &t));
        assert!(!is_unit(&BigInt::from(6), &t));
    }
}
