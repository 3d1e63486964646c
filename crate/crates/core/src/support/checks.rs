//! Consistency checks relating supports across localisation, base change and
//! the torsion/localisation triangle `Γ_V C → C → L_V C`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::Serialize;

use super::{small_support, spec, SupportDescriptor};
use crate::homalg::{
    arith, hom_complex_h0, invert_primes, is_acyclic, koszul_stable, reduce_mod, BaseRing, ChainComplex,
    ChainMap, HomVerdict, Prime, PrimeSet, RingElement,
};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalizeReport {
    /// `supp C_W`.
    pub localized: SupportDescriptor,
    /// `{ 𝔭 ∈ supp C : 𝔭 ∩ W = ∅ }`.
    pub filtered: SupportDescriptor,
    pub holds: bool,
}

/// Compares `supp C_W` with the primes of `supp C` avoiding `W`.
pub fn localize_support_check(c: &ChainComplex, w: &BTreeSet<u64>) -> Result<LocalizeReport> {
    if let Some(p) = w.iter().find(|&&p| !arith::is_prime(p)) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    let localized = small_support(&invert_primes(c, w)?)?;
    let filtered = small_support(c)?.without(w).reinterpret(localized.ring())?;
    Ok(LocalizeReport {
        holds: localized == filtered,
        localized,
        filtered,
    })
}

/// A ring map `f: R → S` along which complexes are restricted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingMap {
    /// `ℤ → ℤ/n`.
    IntegersToModular { n: u64 },
    /// `ℤ/n → ℤ/m` for `m | n`.
    ModularToModular { n: u64, m: u64 },
    /// `ℤ → ℤ[S⁻¹]` for a finite set of primes.
    IntegersToLocalized { inverted: BTreeSet<u64> },
}

impl RingMap {
    pub fn source(&self) -> Result<BaseRing> {
        match self {
            RingMap::IntegersToModular { .. } | RingMap::IntegersToLocalized { .. } => Ok(BaseRing::integers()),
            RingMap::ModularToModular { n, m } => {
                if *m == 0 || n % m != 0 {
                    return Err(Error::input(format!("Z/{n} -> Z/{m} needs {m} | {n}")));
                }
                BaseRing::modular(*n)
            }
        }
    }

    pub fn target(&self) -> Result<BaseRing> {
        match self {
            RingMap::IntegersToModular { n } => BaseRing::modular(*n),
            RingMap::ModularToModular { m, .. } => BaseRing::modular(*m),
            RingMap::IntegersToLocalized { inverted } => {
                if let Some(p) = inverted.iter().find(|&&p| !arith::is_prime(p)) {
                    return Err(Error::input(format!("{p} is not prime")));
                }
                BaseRing::localized(PrimeSet::Finite(inverted.clone()))
            }
        }
    }

    /// `C` viewed as a complex over the source ring.
    pub fn restrict(&self, c: &ChainComplex) -> Result<ChainComplex> {
        let source = self.source()?;
        if *c.ring() != self.target()? {
            return Err(Error::input(format!(
                "complex lives over {}, the map targets {}",
                c.ring(),
                self.target()?
            )));
        }
        match self {
            RingMap::IntegersToModular { n: k } | RingMap::ModularToModular { m: k, .. } => {
                let k = BigInt::from(*k);
                c.map_blocks(source, |b| b.with_modulus(&k))
            }
            RingMap::IntegersToLocalized { inverted } => c.map_blocks(source, |b| {
                let mut b = b.clone();
                b.tag.extend(inverted.iter().copied());
                b
            }),
        }
    }

    /// `Spec f`, applied to a subset of the target spectrum.
    pub fn push_forward(&self, s: &SupportDescriptor) -> Result<SupportDescriptor> {
        let source = self.source()?;
        if s.is_cofinite() {
            let RingMap::IntegersToLocalized { inverted } = self else {
                unreachable!("finite target spectrum")
            };
            let except = s.except().iter().chain(inverted).copied();
            SupportDescriptor::cofinite(&source, s.generic(), except)
        } else {
            SupportDescriptor::finite(&source, s.to_set().expect("finite"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseChangeReport {
    /// `Spec f (supp_S C)`.
    pub pushed: SupportDescriptor,
    /// `supp_R C`.
    pub restricted: SupportDescriptor,
    pub holds: bool,
}

/// Compares `Spec f(supp_S C)` with `supp_R C` for `C` over the target of `f`.
pub fn base_change_check(f: &RingMap, c: &ChainComplex) -> Result<BaseChangeReport> {
    let pushed = f.push_forward(&small_support(c)?)?;
    let restricted = small_support(&f.restrict(c)?)?;
    Ok(BaseChangeReport {
        holds: pushed == restricted,
        pushed,
        restricted,
    })
}

fn check_thomason(ring: &BaseRing, v: &BTreeSet<Prime>) -> Result<()> {
    let sp = spec(ring);
    let (Some(points), Some(space)) = (sp.points(), sp.space()) else {
        return Err(Error::input("Γ_V and L_V are provided for rings with finite spectrum"));
    };
    if ring.is_integral() {
        return Err(Error::input("Γ_V and L_V are provided over Z/n and local nilpotent algebras"));
    }
    let mut mask = 0;
    for q in v {
        let i = points
            .iter()
            .position(|p| p == q)
            .ok_or_else(|| Error::input(format!("{q} is not a prime of {ring}")))?;
        mask |= 1 << i;
    }
    space.thomason(mask)?;
    Ok(())
}

/// An element whose vanishing locus is `V`.
fn defining_element(ring: &BaseRing, v: &BTreeSet<Prime>) -> Result<RingElement> {
    match ring {
        BaseRing::Modular { .. } => Ok(RingElement::int(
            v.iter()
                .map(|q| match q {
                    Prime::Closed(p) => *p as i64,
                    _ => unreachable!("checked"),
                })
                .product(),
        )),
        BaseRing::LocalNilpotent { exponents, .. } => {
            let dim: usize = exponents.iter().map(|&e| e as usize).product();
            let mut coeffs = vec![0; dim];
            if v.is_empty() {
                coeffs[0] = 1;
            } else {
                return RingElement::generator(ring, 0);
            }
            Ok(RingElement::Poly(coeffs))
        }
        BaseRing::Integers { .. } => unreachable!("checked"),
    }
}

/// `Γ_V C = K∞(x) ⊗ C` for an element `x` with `V(x) = V`.
pub fn gamma_v(c: &ChainComplex, v: &BTreeSet<Prime>) -> Result<ChainComplex> {
    check_thomason(c.ring(), v)?;
    koszul_stable(c, &defining_element(c.ring(), v)?)
}

/// `L_V C`: localisation away from `V`.
///
/// Over `ℤ/n` this is `C ⊗ ℤ/m` with `m` the part of `n` supported off `V`;
/// a local nilpotent algebra has `L_∅ = id` and `L_{𝔪} = 0`.
pub fn local_away_v(c: &ChainComplex, v: &BTreeSet<Prime>) -> Result<ChainComplex> {
    check_thomason(c.ring(), v)?;
    match c.ring() {
        BaseRing::Modular { n } => {
            let m: u64 = arith::factor(*n)
                .into_iter()
                .filter(|(p, _)| !v.contains(&Prime::Closed(*p)))
                .map(|(p, e)| p.pow(e))
                .product();
            reduce_mod(c, m)
        }
        _ if v.is_empty() => Ok(c.clone()),
        ring => Ok(ChainComplex::zero(ring.clone())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Main1Report {
    /// `supp cone(f) ⊆ supp C ∪ supp C′` for the maps tried.
    pub cone: bool,
    /// `supp Γ_V C = supp C ∩ V`.
    pub gamma: bool,
    /// `supp L_V C = supp C ∩ Vᶜ`.
    pub local: bool,
    /// `supp C ⊆ V ⇔ L_V C acyclic`.
    pub acyclic_local: bool,
    /// `supp C ⊆ Vᶜ ⇔ Γ_V C acyclic`.
    pub acyclic_gamma: bool,
    /// `supp (C ⊕ C′) = supp C ∪ supp C′`.
    pub sum: bool,
    /// `Hom(Γ_V C, L_V C′[k]) = 0`, and `Hom(C, C′[k]) = 0` when `V`
    /// separates the supports; `None` when derived Hom is unavailable.
    pub orthogonal: Option<bool>,
}

impl Main1Report {
    pub fn all_pass(&self) -> bool {
        self.cone && self.gamma && self.local && self.acyclic_local && self.acyclic_gamma && self.sum
            && self.orthogonal != Some(false)
    }
}

/// Degree window used for orthogonality.
pub const ORTHOGONALITY_WINDOW: (i64, i64) = (-3, 3);

pub fn main1_property_suite(c: &ChainComplex, c2: &ChainComplex, v: &BTreeSet<Prime>) -> Result<Main1Report> {
    if c.ring() != c2.ring() {
        return Err(Error::input("both complexes must be over the same ring"));
    }
    let ring = c.ring();
    check_thomason(ring, v)?;
    let vd = SupportDescriptor::finite(ring, v.iter().copied())?;
    let vc = vd.complement()?;
    let s = small_support(c)?;
    let s2 = small_support(c2)?;
    let both = s.union(&s2)?;

    let mut cone = true;
    for k in [0, 1, 2, 3] {
        let cn = c.cone(c, &ChainMap::scalar(c, k))?;
        cone &= small_support(&cn)?.is_subset(&s)?;
    }
    let cn = c.cone(c2, &ChainMap::zero(c))?;
    cone &= small_support(&cn)?.is_subset(&both)?;

    let g = gamma_v(c, v)?;
    let l = local_away_v(c, v)?;
    let gamma = small_support(&g)? == s.intersection(&vd)?;
    let local = small_support(&l)? == s.intersection(&vc)?;
    let acyclic_local = s.is_subset(&vd)? == is_acyclic(&l)?;
    let acyclic_gamma = s.is_subset(&vc)? == is_acyclic(&g)?;
    let sum = small_support(&c.direct_sum(c2)?)? == both;

    let orthogonal = match ring {
        BaseRing::Modular { .. } => {
            let vanishes = |a: &ChainComplex, b: &ChainComplex| -> Result<bool> {
                Ok(hom_complex_h0(a, b, ORTHOGONALITY_WINDOW)?.verdict == HomVerdict::Vanishes)
            };
            let mut ok = vanishes(&g, &local_away_v(c2, v)?)?;
            if s.is_subset(&vd)? && s2.is_subset(&vc)? {
                ok &= vanishes(c, c2)?;
            }
            Some(ok)
        }
        _ => None,
    };
    Ok(Main1Report {
        cone,
        gamma,
        local,
        acyclic_local,
        acyclic_gamma,
        sum,
        orthogonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::Block;

    fn module(ring: BaseRing, orders: &[i64]) -> ChainComplex {
        let b = if orders.is_empty() { Block::free(1) } else { Block::cyclic(orders) };
        ChainComplex::abelian(ring, 0, vec![vec![b]], vec![]).unwrap()
    }

    fn primes(ps: &[u64]) -> BTreeSet<Prime> {
        ps.iter().map(|&p| Prime::Closed(p)).collect()
    }

    #[test]
    fn localisation_filters_support() {
        let c = module(BaseRing::integers(), &[6]);
        let r = localize_support_check(&c, &[3].into()).unwrap();
        assert!(r.holds);
        assert_eq!(r.localized.to_set().unwrap(), primes(&[2]));
        assert!(localize_support_check(&c, &BTreeSet::new()).unwrap().holds);
        let free = module(BaseRing::integers(), &[]);
        let r = localize_support_check(&free, &[2, 5].into()).unwrap();
        assert!(r.holds && r.localized.is_cofinite());
    }

    #[test]
    fn base_change_examples() {
        let f = RingMap::IntegersToModular { n: 6 };
        let r = base_change_check(&f, &module(BaseRing::modular(6).unwrap(), &[2])).unwrap();
        assert!(r.holds);
        assert_eq!(r.pushed.to_set().unwrap(), primes(&[2]));
        let f = RingMap::ModularToModular { n: 12, m: 4 };
        let r = base_change_check(&f, &module(BaseRing::modular(4).unwrap(), &[])).unwrap();
        assert!(r.holds);
        assert_eq!(r.restricted.to_set().unwrap(), primes(&[2]));
        let f = RingMap::IntegersToLocalized { inverted: [2].into() };
        let ring = f.target().unwrap();
        let r = base_change_check(&f, &module(ring.clone(), &[])).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!(r.pushed.except(), &[2].into());
        let r = base_change_check(&f, &module(ring, &[12])).unwrap();
        assert!(r.holds);
        assert_eq!(r.restricted.to_set().unwrap(), primes(&[3]));
        assert!(base_change_check(&f, &module(BaseRing::integers(), &[])).is_err());
    }

    #[test]
    fn torsion_and_localisation_over_z6() {
        let r = BaseRing::modular(6).unwrap();
        let c = module(r.clone(), &[]);
        let g = gamma_v(&c, &primes(&[2])).unwrap();
        assert_eq!(small_support(&g).unwrap().to_set().unwrap(), primes(&[2]));
        let l = local_away_v(&c, &primes(&[2])).unwrap();
        assert_eq!(small_support(&l).unwrap().to_set().unwrap(), primes(&[3]));
        let report = main1_property_suite(&c, &module(r.clone(), &[3]), &primes(&[2])).unwrap();
        assert!(report.all_pass(), "{report:?}");
        let report = main1_property_suite(&module(r.clone(), &[2]), &module(r, &[3]), &primes(&[2])).unwrap();
        assert_eq!(report.orthogonal, Some(true));
        assert!(report.all_pass());
    }

    #[test]
    fn whole_space_and_empty_set() {
        let r = BaseRing::modular(12).unwrap();
        let c = module(r.clone(), &[]);
        for v in [primes(&[2, 3]), BTreeSet::new()] {
            assert!(main1_property_suite(&c, &c, &v).unwrap().all_pass());
        }
        let ln = BaseRing::local_nilpotent(2, vec![2, 3]).unwrap();
        let c = crate::homalg::PresentedModule::nilpotent(ln.clone(), crate::homalg::NilModule::free(&ln, 1))
            .to_complex();
        for v in [[Prime::Maximal].into(), BTreeSet::new()] {
            let rep = main1_property_suite(&c, &c, &v).unwrap();
            assert!(rep.all_pass() && rep.orthogonal.is_none());
        }
    }

    #[test]
    fn rejects_non_thomason_input() {
        let c = module(BaseRing::modular(6).unwrap(), &[]);
        assert!(gamma_v(&c, &primes(&[5])).is_err());
        assert!(gamma_v(&module(BaseRing::integers(), &[]), &primes(&[2])).is_err());
    }
}
