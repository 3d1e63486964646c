//! Supports of complexes over the supported rings.
//!
//! The small support of `C` is the set of primes `𝔭` such that
//! `K∞(x̄) ⊗ C_𝔭` is not acyclic for every finite `x̄ ⊆ 𝔭`. The big support
//! asks only that `C_𝔭` is not acyclic, and the Foxby support that
//! `C ⊗^L k(𝔭)` is nonzero.
//!
//! # Finiteness over `ℤ_S`
//!
//! `Spec ℤ_S` is infinite when `S` is finite, so descriptors may be
//! cofinite in the closed points. Call a prime `q ∉ S` a *candidate* when it
//! divides an entry of the presentation, a torsion order of some `Hⁱ(C)`, or
//! appears as an inverted-prime tag. For a non-candidate `q` every nonzero
//! entry is a unit of `ℤ_(q)`, so `Hⁱ(C_q) = Hⁱ(C) ⊗ ℤ_(q)` is free of rank
//! `rank Hⁱ(C)`. Each of the three tests then depends only on these ranks:
//! `q` belongs to the support exactly when some `Hⁱ(C)` has positive rank,
//! the same answer for all non-candidates. One representative decides the
//! cofinite flag; two more are sampled as a guard.
//!
//! # Generators
//!
//! At a closed point `(q)` of `ℤ_S` or `ℤ/n` the ideal is generated by `q`,
//! and `K∞(x̄)` for `x̄ ⊆ (q)` only depends on the radical of `(x̄)`, which is
//! `(q)` or the unit ideal. So the single sequence `(q)` decides membership.
//! At `(0)` the only element is `0` and `K∞(0) = R`. Over a local nilpotent
//! algebra every element of `𝔪` is nilpotent and `K∞(x̄) ⊗ C ≅ C`.
//! [`small_support_exhaustive`] runs every sequence of length at most two
//! from a generating set instead, as a cross-check.

mod checks;
pub mod random;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::homalg::{
    arith, cohomology_all, derived_tensor_residue, entry_primes, is_acyclic, koszul_sequence, koszul_stable,
    localize_complex, minimal_dims, weakly_associated_form, BaseRing, ChainComplex, ModuleForm, Prime, PrimeSet,
    RingElement,
};
use crate::poset::FinitePoset;
use crate::spectral::SpectralSpace;
use crate::{Error, Result};

pub use checks::{
    base_change_check, gamma_v, local_away_v, localize_support_check, main1_property_suite, BaseChangeReport,
    LocalizeReport, Main1Report, RingMap,
};

/// `Spec R`, explicit when finite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecOf {
    ring: BaseRing,
    points: Option<Vec<Prime>>,
    space: Option<SpectralSpace>,
}

impl SpecOf {
    pub fn ring(&self) -> &BaseRing {
        &self.ring
    }

    /// The primes, when there are finitely many.
    pub fn points(&self) -> Option<&[Prime]> {
        self.points.as_deref()
    }

    pub fn space(&self) -> Option<&SpectralSpace> {
        self.space.as_ref()
    }

    pub fn is_finite(&self) -> bool {
        self.points.is_some()
    }

    pub fn contains(&self, q: &Prime) -> bool {
        self.ring.has_prime(q)
    }

    /// Position of a prime in [`SpecOf::points`].
    pub fn index_of(&self, q: &Prime) -> Option<usize> {
        self.points.as_ref()?.iter().position(|p| p == q)
    }

    pub fn describe(&self) -> String {
        match &self.points {
            Some(ps) => ps.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
            None => match &self.ring {
                BaseRing::Integers {
                    inverted: PrimeSet::Finite(s),
                } if s.is_empty() => "(0) and every (p)".to_string(),
                BaseRing::Integers {
                    inverted: PrimeSet::Finite(s),
                } => format!(
                    "(0) and every (p) with p not in {{{}}}",
                    s.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
                ),
                _ => unreachable!("finite spectra are listed"),
            },
        }
    }
}

pub fn spec(ring: &BaseRing) -> SpecOf {
    let points: Option<Vec<Prime>> = match ring {
        BaseRing::Integers {
            inverted: PrimeSet::AllExcept(e),
        } => Some(
            std::iter::once(Prime::Zero)
                .chain(e.iter().filter(|&&p| arith::is_prime(p)).map(|&p| Prime::Closed(p)))
                .collect(),
        ),
        BaseRing::Integers { .. } => None,
        BaseRing::Modular { n } => Some(arith::factor(*n).into_iter().map(|(p, _)| Prime::Closed(p)).collect()),
        BaseRing::LocalNilpotent { .. } => Some(vec![Prime::Maximal]),
    };
    let space = points.as_ref().map(|ps| {
        let names: Vec<String> = ps.iter().map(ToString::to_string).collect();
        let pairs: Vec<(String, String)> = if ps.first() == Some(&Prime::Zero) {
            names[1..].iter().map(|n| (names[0].clone(), n.clone())).collect()
        } else {
            vec![]
        };
        SpectralSpace::new(FinitePoset::from_pairs(&names, &pairs).expect("valid spectrum"))
    });
    SpecOf {
        ring: ring.clone(),
        points,
        space,
    }
}

/// A subset of `Spec R`: finitely many explicit primes, optionally the
/// generic point, and optionally all closed points outside a finite set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportDescriptor {
    ring: BaseRing,
    primes: BTreeSet<Prime>,
    generic: bool,
    cofinite: bool,
    except: BTreeSet<u64>,
}

#[derive(Serialize)]
struct DescriptorJson<'a> {
    primes: &'a BTreeSet<Prime>,
    generic: bool,
    cofinite: bool,
    except: Vec<String>,
}

impl Serialize for SupportDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DescriptorJson {
            primes: &self.primes,
            generic: self.generic,
            cofinite: self.cofinite,
            except: self.except.iter().map(|p| Prime::Closed(*p).to_string()).collect(),
        }
        .serialize(s)
    }
}

impl SupportDescriptor {
    /// A finite set of primes of `ring`.
    pub fn finite(ring: &BaseRing, primes: impl IntoIterator<Item = Prime>) -> Result<Self> {
        let mut out = SupportDescriptor::empty(ring);
        for q in primes {
            if !ring.has_prime(&q) {
                return Err(Error::input(format!("{q} is not a prime of {ring}")));
            }
            match q {
                Prime::Zero => out.generic = true,
                q => {
                    out.primes.insert(q);
                }
            }
        }
        Ok(out)
    }

    pub fn empty(ring: &BaseRing) -> Self {
        SupportDescriptor {
            ring: ring.clone(),
            primes: BTreeSet::new(),
            generic: false,
            cofinite: false,
            except: BTreeSet::new(),
        }
    }

    /// `(0)` (when requested) plus every closed point outside `except`.
    pub fn cofinite(ring: &BaseRing, generic: bool, except: impl IntoIterator<Item = u64>) -> Result<Self> {
        if !matches!(
            ring,
            BaseRing::Integers {
                inverted: PrimeSet::Finite(_)
            }
        ) {
            return Err(Error::input("cofinite supports only occur over Z with finitely many primes inverted"));
        }
        Ok(SupportDescriptor {
            ring: ring.clone(),
            primes: BTreeSet::new(),
            generic,
            cofinite: true,
            except: except.into_iter().filter(|&p| ring.has_closed_prime(p)).collect(),
        })
    }

    pub fn ring(&self) -> &BaseRing {
        &self.ring
    }

    /// Explicit non-generic primes; empty when the descriptor is cofinite.
    pub fn primes(&self) -> &BTreeSet<Prime> {
        &self.primes
    }

    pub fn generic(&self) -> bool {
        self.generic
    }

    pub fn is_cofinite(&self) -> bool {
        self.cofinite
    }

    pub fn except(&self) -> &BTreeSet<u64> {
        &self.except
    }

    pub fn is_empty(&self) -> bool {
        !self.generic && !self.cofinite && self.primes.is_empty()
    }

    pub fn contains(&self, q: &Prime) -> bool {
        match q {
            Prime::Zero => self.generic,
            Prime::Closed(p) if self.cofinite => !self.except.contains(p) && self.ring.has_closed_prime(*p),
            q => self.primes.contains(q),
        }
    }

    /// All primes, when the descriptor is finite.
    pub fn to_set(&self) -> Option<BTreeSet<Prime>> {
        if self.cofinite {
            return None;
        }
        let mut out = self.primes.clone();
        if self.generic {
            out.insert(Prime::Zero);
        }
        Some(out)
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::input(format!(
                "supports over different rings: {} and {}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let generic = self.generic || other.generic;
        Ok(match (self.cofinite, other.cofinite) {
            (false, false) => SupportDescriptor {
                primes: &self.primes | &other.primes,
                generic,
                ..self.clone()
            },
            (true, true) => SupportDescriptor {
                except: &self.except & &other.except,
                generic,
                ..self.clone()
            },
            (true, false) => self.union_with_finite(other, generic),
            (false, true) => other.union_with_finite(self, generic),
        })
    }

    fn union_with_finite(&self, finite: &Self, generic: bool) -> Self {
        SupportDescriptor {
            except: self
                .except
                .iter()
                .filter(|&&p| !finite.primes.contains(&Prime::Closed(p)))
                .copied()
                .collect(),
            generic,
            ..self.clone()
        }
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let generic = self.generic && other.generic;
        Ok(match (self.cofinite, other.cofinite) {
            (true, true) => SupportDescriptor {
                except: &self.except | &other.except,
                generic,
                ..self.clone()
            },
            (false, _) => SupportDescriptor {
                primes: self.primes.iter().filter(|q| other.contains(q)).copied().collect(),
                generic,
                ..self.clone()
            },
            (true, false) => SupportDescriptor {
                primes: other.primes.iter().filter(|q| self.contains(q)).copied().collect(),
                generic,
                ..other.clone()
            },
        })
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.check_ring(other)?;
        if self.generic && !other.generic {
            return Ok(false);
        }
        Ok(if self.cofinite {
            other.cofinite && other.except.is_subset(&self.except)
        } else {
            self.primes.iter().all(|q| other.contains(q))
        })
    }

    /// Removes the closed points `(p)` with `p ∈ w`.
    pub fn without(&self, w: &BTreeSet<u64>) -> Self {
        let mut out = self.clone();
        if out.cofinite {
            out.except
                .extend(w.iter().filter(|&&p| self.ring.has_closed_prime(p)).copied());
        } else {
            out.primes.retain(|q| !matches!(q, Prime::Closed(p) if w.contains(p)));
        }
        out
    }

    /// The same subset read in `Spec` of another ring whose spectrum
    /// contains it.
    fn reinterpret(&self, ring: &BaseRing) -> Result<Self> {
        let mut out = self.clone();
        out.ring = ring.clone();
        if self.cofinite {
            if !matches!(
                ring,
                BaseRing::Integers {
                    inverted: PrimeSet::Finite(_)
                }
            ) {
                return Err(Error::input(format!("{ring} has no cofinite subsets")));
            }
            out.except.retain(|&p| ring.has_closed_prime(p));
        } else {
            for q in self.to_set().expect("finite") {
                if !ring.has_prime(&q) {
                    return Err(Error::input(format!("{q} is not a prime of {ring}")));
                }
            }
        }
        Ok(out)
    }

    /// Complement in `Spec R`, for finite spectra.
    pub fn complement(&self) -> Result<Self> {
        let sp = spec(&self.ring);
        let Some(points) = sp.points() else {
            return Err(Error::input("complements are taken in finite spectra"));
        };
        SupportDescriptor::finite(&self.ring, points.iter().filter(|q| !self.contains(q)).copied())
    }
}

impl std::fmt::Display for SupportDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.generic {
            parts.push("(0)".into());
        }
        if self.cofinite {
            if self.except.is_empty() {
                parts.push("all (p)".into());
            } else {
                let ex: Vec<String> = self.except.iter().map(|p| p.to_string()).collect();
                parts.push(format!("all (p) except p in {{{}}}", ex.join(",")));
            }
        }
        parts.extend(self.primes.iter().map(ToString::to_string));
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The test defining membership of a prime in a support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Membership {
    Small,
    SmallExhaustive,
    Big,
    Foxby,
}

fn member(c: &ChainComplex, q: &Prime, how: Membership) -> Result<bool> {
    match how {
        Membership::Foxby => {
            let k = derived_tensor_residue(c, q)?;
            Ok(!minimal_dims(&k).is_empty())
        }
        Membership::Big => Ok(!is_acyclic(&localize_complex(c, q)?)?),
        Membership::Small => {
            let cq = localize_complex(c, q)?;
            let xs = single_sequence(c.ring(), q)?;
            Ok(!is_acyclic(&koszul_sequence(&cq, &xs)?)?)
        }
        Membership::SmallExhaustive => {
            let cq = localize_complex(c, q)?;
            if is_acyclic(&cq)? {
                return Ok(false);
            }
            let gens = generating_set(c.ring(), q)?;
            for x in &gens {
                let kx = koszul_stable(&cq, x)?;
                if is_acyclic(&kx)? {
                    return Ok(false);
                }
                for y in &gens {
                    if is_acyclic(&koszul_stable(&kx, y)?)? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

fn single_sequence(ring: &BaseRing, q: &Prime) -> Result<Vec<RingElement>> {
    Ok(match q {
        Prime::Zero => vec![RingElement::int(0)],
        Prime::Closed(p) => vec![RingElement::int(*p as i64)],
        Prime::Maximal => generators(ring)?,
    })
}

fn generators(ring: &BaseRing) -> Result<Vec<RingElement>> {
    let BaseRing::LocalNilpotent { exponents, .. } = ring else {
        return Err(Error::input("the maximal ideal belongs to a local nilpotent algebra"));
    };
    (0..exponents.len()).map(|i| RingElement::generator(ring, i)).collect()
}

/// A redundant generating set of `q`, so that sequences mix generators.
fn generating_set(ring: &BaseRing, q: &Prime) -> Result<Vec<RingElement>> {
    Ok(match q {
        Prime::Zero => vec![RingElement::int(0)],
        Prime::Closed(p) => {
            let other = if *p == 2 { 3 } else { 2 };
            vec![RingElement::int(*p as i64), RingElement::int((p * other) as i64)]
        }
        Prime::Maximal => {
            let mut g = generators(ring)?;
            if g.len() >= 2 {
                let (RingElement::Poly(a), RingElement::Poly(b)) = (&g[0], &g[1]) else {
                    unreachable!()
                };
                let p = ring.field_char().expect("nilpotent");
                g.push(RingElement::Poly(a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()));
            }
            g
        }
    })
}

/// Closed points of `Spec ℤ_S` at which the three supports may deviate from
/// their generic behaviour.
fn candidate_primes(c: &ChainComplex) -> Result<BTreeSet<u64>> {
    let mut out = entry_primes(c)?;
    out.extend(c.tag_primes());
    for (_, h) in cohomology_all(c)? {
        if let ModuleForm::Abelian(a) = h {
            out.extend(a.torsion_primes());
            out.extend(a.divisible.keys().copied());
        }
    }
    out.retain(|&p| c.ring().has_closed_prime(p));
    Ok(out)
}

/// Three closed points of `Spec ℤ_S` that are not candidates.
fn representatives(c: &ChainComplex, candidates: &BTreeSet<u64>) -> Vec<u64> {
    let BaseRing::Integers {
        inverted: PrimeSet::Finite(s),
    } = c.ring()
    else {
        return vec![];
    };
    let mut p = candidates.iter().chain(s).copied().max().unwrap_or(1);
    let mut out = Vec::new();
    while out.len() < 3 {
        p = arith::next_prime(p);
        if !s.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn support_by(c: &ChainComplex, how: Membership) -> Result<SupportDescriptor> {
    let ring = c.ring();
    if let Some(points) = spec(ring).points() {
        let mut inside = Vec::new();
        for q in points {
            if member(c, q, how)? {
                inside.push(*q);
            }
        }
        return SupportDescriptor::finite(ring, inside);
    }
    let candidates = candidate_primes(c)?;
    let generic = member(c, &Prime::Zero, how)?;
    let reps = representatives(c, &candidates);
    let verdicts = reps
        .iter()
        .map(|&p| member(c, &Prime::Closed(p), how))
        .collect::<Result<Vec<bool>>>()?;
    if verdicts.iter().any(|&v| v != verdicts[0]) {
        return Err(Error::Precondition(format!(
            "support is not constant on the non-candidate primes {reps:?}"
        )));
    }
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for &p in &candidates {
        if member(c, &Prime::Closed(p), how)? {
            inside.push(p);
        } else {
            outside.push(p);
        }
    }
    if verdicts[0] {
        SupportDescriptor::cofinite(ring, generic, outside)
    } else {
        let primes = inside
            .into_iter()
            .map(Prime::Closed)
            .chain(generic.then_some(Prime::Zero));
        SupportDescriptor::finite(ring, primes)
    }
}

/// `supp C`, testing the single sequence `(q)` at each closed point.
pub fn small_support(c: &ChainComplex) -> Result<SupportDescriptor> {
    support_by(c, Membership::Small)
}

/// `supp C`, requiring every sequence of length at most two from a
/// generating set of each prime to leave a non-acyclic complex.
pub fn small_support_exhaustive(c: &ChainComplex) -> Result<SupportDescriptor> {
    support_by(c, Membership::SmallExhaustive)
}

/// `Supp C = { 𝔭 : C_𝔭 not acyclic }`.
pub fn big_support(c: &ChainComplex) -> Result<SupportDescriptor> {
    support_by(c, Membership::Big)
}

/// `{ 𝔭 : C ⊗^L k(𝔭) ≠ 0 }`, over localisations of `ℤ`.
pub fn foxby_support(c: &ChainComplex) -> Result<SupportDescriptor> {
    if !c.ring().is_integral() {
        return Err(Error::input("Foxby support is provided over localisations of Z"));
    }
    support_by(c, Membership::Foxby)
}

/// Whether `supp C = ∅`.
pub fn detect_vanishing(c: &ChainComplex) -> Result<bool> {
    Ok(small_support(c)?.is_empty())
}

/// Weakly associated primes of `⊕ Hⁱ(C)`.
pub fn weakly_associated_cohomology(c: &ChainComplex) -> Result<BTreeSet<Prime>> {
    let mut out = BTreeSet::new();
    for (_, h) in cohomology_all(c)? {
        out.extend(weakly_associated_form(&h));
    }
    Ok(out)
}

/// Minimal elements of a set of primes under inclusion.
pub fn minimal_primes(ps: &BTreeSet<Prime>) -> BTreeSet<Prime> {
    if ps.contains(&Prime::Zero) {
        [Prime::Zero].into()
    } else {
        ps.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::{Block, Matrix};

    fn module(ring: BaseRing, orders: &[i64]) -> ChainComplex {
        let b = if orders.is_empty() { Block::free(1) } else { Block::cyclic(orders) };
        ChainComplex::abelian(ring, 0, vec![vec![b]], vec![]).unwrap()
    }

    fn times(k: i64) -> ChainComplex {
        ChainComplex::abelian(
            BaseRing::integers(),
            0,
            vec![vec![Block::free(1)], vec![Block::free(1)]],
            vec![Matrix::from_i64(&[&[k]])],
        )
        .unwrap()
    }

    fn closed(ps: &[u64]) -> BTreeSet<Prime> {
        ps.iter().map(|&p| Prime::Closed(p)).collect()
    }

    #[test]
    fn spectra() {
        let s = spec(&BaseRing::modular(12).unwrap());
        assert_eq!(s.points().unwrap(), &[Prime::Closed(2), Prime::Closed(3)]);
        assert!(s.space().unwrap().order().covers().is_empty());
        let s = spec(&BaseRing::local_nilpotent(2, vec![2, 3]).unwrap());
        assert_eq!(s.points().unwrap(), &[Prime::Maximal]);
        let s = spec(&BaseRing::integers());
        assert!(!s.is_finite());
        assert!(s.contains(&Prime::Zero) && s.contains(&Prime::Closed(101)));
        let s = spec(&BaseRing::local_integers(5).unwrap());
        assert_eq!(s.points().unwrap(), &[Prime::Zero, Prime::Closed(5)]);
        assert_eq!(s.space().unwrap().order().covers(), vec![(0, 1)]);
    }

    #[test]
    fn supports_of_z6() {
        let c = module(BaseRing::integers(), &[6]);
        for s in [small_support(&c), big_support(&c), foxby_support(&c)] {
            assert_eq!(s.unwrap().to_set().unwrap(), closed(&[2, 3]));
        }
        assert_eq!(weakly_associated_cohomology(&c).unwrap(), closed(&[2, 3]));
    }

    #[test]
    fn multiplication_by_two() {
        let s = small_support(&times(2)).unwrap();
        assert_eq!(s.to_set().unwrap(), closed(&[2]));
        assert_eq!(foxby_support(&times(2)).unwrap(), s);
        assert!(detect_vanishing(&times(1)).unwrap());
        assert!(small_support(&times(-1)).unwrap().is_empty());
    }

    #[test]
    fn integers_have_everything() {
        let c = module(BaseRing::integers(), &[]);
        for s in [small_support(&c), big_support(&c), foxby_support(&c)] {
            let s = s.unwrap();
            assert!(s.generic() && s.is_cofinite() && s.except().is_empty());
        }
        let c = module(BaseRing::integers(), &[4]);
        assert_eq!(foxby_support(&c).unwrap().to_set().unwrap(), closed(&[2]));
    }

    #[test]
    fn small_support_of_free_part_with_torsion() {
        // ℤ ⊕ ℤ/6 ⊕ 0: everything, including (2) and (3)
        let c = ChainComplex::abelian(
            BaseRing::integers(),
            0,
            vec![vec![Block::free(1), Block::cyclic(&[6])]],
            vec![],
        )
        .unwrap();
        let s = small_support(&c).unwrap();
        assert!(s.generic() && s.is_cofinite() && s.except().is_empty());
        assert_eq!(s, small_support_exhaustive(&c).unwrap());
    }

    #[test]
    fn modular_and_nilpotent() {
        let r = BaseRing::modular(12).unwrap();
        let c = module(r.clone(), &[4]);
        assert_eq!(small_support(&c).unwrap().to_set().unwrap(), closed(&[2]));
        let c = module(r, &[]);
        assert_eq!(small_support(&c).unwrap().to_set().unwrap(), closed(&[2, 3]));
        let ln = BaseRing::local_nilpotent(2, vec![2, 3]).unwrap();
        let c = crate::homalg::PresentedModule::nilpotent(ln.clone(), crate::homalg::NilModule::free(&ln, 1))
            .to_complex();
        assert_eq!(small_support(&c).unwrap().to_set().unwrap(), [Prime::Maximal].into());
        assert!(detect_vanishing(&ChainComplex::zero(ln)).unwrap());
    }

    #[test]
    fn descriptor_algebra() {
        let z = BaseRing::integers();
        let a = SupportDescriptor::cofinite(&z, true, [2, 3]).unwrap();
        let b = SupportDescriptor::finite(&z, [Prime::Closed(3), Prime::Closed(7)]).unwrap();
        let u = a.union(&b).unwrap();
        assert_eq!(u.except(), &[2].into());
        let i = a.intersection(&b).unwrap();
        assert_eq!(i.to_set().unwrap(), closed(&[7]));
        assert!(i.is_subset(&a).unwrap() && i.is_subset(&b).unwrap());
        assert!(!a.is_subset(&b).unwrap());
        assert_eq!(a.without(&[5].into()).except(), &[2, 3, 5].into());
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"primes":[],"generic":true,"cofinite":true,"except":["(2)","(3)"]}"#);
    }
}
