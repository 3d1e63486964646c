//! Finite posets read as finite spectral spaces.
//!
//! Convention throughout: `p ≤ q` in the underlying order means `p ⊆ q` as
//! prime ideals, i.e. `q` lies in the closure of `p`. Open sets are then the
//! down-sets and closed sets the up-sets; the closure of a point is its
//! principal up-set.
//!
//! In a finite spectral space every open set is quasi-compact, so the
//! Thomason subsets (unions of closed sets with quasi-compact complement) are
//! exactly the closed sets themselves and their unions, i.e. the up-sets.
//!
//! Most predicates below enumerate open and closed sets literally rather than
//! using the order-theoretic shortcuts, so that shortcuts and definitions can
//! be tested against each other.

use std::collections::BTreeSet;

use crate::bits::{self, Mask};
use crate::poset::FinitePoset;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpectralSpace {
    order: FinitePoset,
}

/// A specialization-closed subset of a [`SpectralSpace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThomasonSet {
    members: Mask,
}

impl ThomasonSet {
    pub fn members(&self) -> Mask {
        self.members
    }
}

/// A basic open `V ∩ Uᶜ` of the localising topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LocalisingBasic {
    pub v: ThomasonSet,
    pub u: ThomasonSet,
    pub set: Mask,
}

impl SpectralSpace {
    pub fn new(order: FinitePoset) -> Self {
        SpectralSpace { order }
    }

    pub fn order(&self) -> &FinitePoset {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn all(&self) -> Mask {
        self.order.all()
    }

    pub fn names(&self, m: Mask) -> Vec<String> {
        self.order.names(m)
    }

    pub fn point(&self, name: &str) -> Result<usize> {
        self.order.index_of(name)
    }

    pub fn opens(&self) -> Vec<Mask> {
        self.order.down_sets()
    }

    pub fn closeds(&self) -> Vec<Mask> {
        self.order.up_sets()
    }

    pub fn is_open(&self, m: Mask) -> bool {
        self.order.is_down_set(m)
    }

    pub fn is_closed(&self, m: Mask) -> bool {
        self.order.is_up_set(m)
    }

    /// Closure of a subset: everything specializing from one of its points.
    pub fn closure(&self, m: Mask) -> Mask {
        self.order.up_closure(m)
    }

    pub fn thomason(&self, m: Mask) -> Result<ThomasonSet> {
        if m & !self.all() != 0 {
            return Err(Error::input("subset mentions points outside the space"));
        }
        if !self.order.is_up_set(m) {
            return Err(Error::input(format!(
                "{:?} is not specialization closed",
                self.names(m)
            )));
        }
        Ok(ThomasonSet { members: m })
    }

    /// All Thomason subsets, in increasing mask order.
    pub fn thomason_sets(&self) -> Vec<ThomasonSet> {
        self.order
            .up_sets()
            .into_iter()
            .map(|members| ThomasonSet { members })
            .collect()
    }

    /// `Z(p) = { q : q ⊄ p }`, the largest Thomason set avoiding `p`.
    pub fn z_set(&self, p: &str) -> Result<ThomasonSet> {
        let i = self.point(p)?;
        Ok(self.z_set_at(i))
    }

    pub fn z_set_at(&self, i: usize) -> ThomasonSet {
        ThomasonSet {
            members: self.all() & !self.order.down_mask(i),
        }
    }

    pub fn hochster_dual(&self) -> SpectralSpace {
        SpectralSpace {
            order: self.order.opposite(),
        }
    }

    /// Opens of the topology generated by the opens and the closed sets.
    pub fn skula_opens(&self) -> Vec<Mask> {
        let mut basis = BTreeSet::new();
        for v in self.opens() {
            for c in self.closeds() {
                basis.insert(v & c);
            }
        }
        union_closure(basis)
    }

    /// Every triple `(V, U, V ∩ Uᶜ)` over pairs of Thomason sets.
    pub fn localising_basic_opens(&self) -> Vec<LocalisingBasic> {
        let ts = self.thomason_sets();
        let mut out = Vec::with_capacity(ts.len() * ts.len());
        for &v in &ts {
            for &u in &ts {
                out.push(LocalisingBasic {
                    v,
                    u,
                    set: v.members & !u.members,
                });
            }
        }
        out
    }

    /// Opens of the localising topology, generated by the basics `V ∩ Uᶜ`.
    pub fn localising_opens(&self) -> Vec<Mask> {
        union_closure(self.localising_basic_opens().into_iter().map(|b| b.set).collect())
    }

    /// Points `p` with `{p} = V ∩ Uᶜ` for some Thomason `V`, `U`.
    pub fn visible_points(&self) -> Mask {
        let mut vis = 0;
        for b in self.localising_basic_opens() {
            if b.set.count_ones() == 1 {
                vis |= b.set;
            }
        }
        vis
    }

    /// Points of `y` that are isolated in the subspace `y`.
    pub fn isolated_points(&self, y: Mask) -> Mask {
        let opens = self.opens();
        bits::members(y)
            .filter(|&p| opens.iter().any(|&v| v & y == bits::singleton(p)))
            .fold(0, |acc, p| acc | bits::singleton(p))
    }

    /// Points `p ∈ s` admitting an open `V` with `p ∈ V ∩ s ⊆ closure{p}`.
    pub fn weakly_isolated_in(&self, s: Mask) -> Mask {
        let opens = self.opens();
        bits::members(s)
            .filter(|&p| {
                let cl = self.closure(bits::singleton(p));
                opens
                    .iter()
                    .any(|&v| bits::contains(v, p) && bits::is_subset(v & s, cl))
            })
            .fold(0, |acc, p| acc | bits::singleton(p))
    }

    /// Weakly isolated points of a closed set given by names.
    pub fn weakly_isolated_points<S: AsRef<str>>(&self, closed: &[S]) -> Result<Vec<String>> {
        let c = self.order.mask_of(closed)?;
        if !self.is_closed(c) {
            return Err(Error::input(format!(
                "{:?} is not a closed set",
                self.names(c)
            )));
        }
        Ok(self.names(self.weakly_isolated_in(c)))
    }

    /// Cantor–Bendixson rank: number of rounds of isolated-point removal
    /// needed to exhaust the space, or `None` if the process stalls.
    pub fn cb_rank(&self) -> Option<usize> {
        let mut remaining = self.all();
        let mut rank = 0;
        while remaining != 0 {
            let iso = self.isolated_points(remaining);
            if iso == 0 {
                return None;
            }
            remaining &= !iso;
            rank += 1;
        }
        Some(rank)
    }

    /// Every nonempty closed set has an isolated point.
    pub fn is_scattered(&self) -> bool {
        self.closeds()
            .into_iter()
            .filter(|&c| c != 0)
            .all(|c| self.isolated_points(c) != 0)
    }

    /// Every nonempty closed set has a weakly isolated point.
    pub fn is_weakly_scattered(&self) -> bool {
        self.closeds()
            .into_iter()
            .filter(|&c| c != 0)
            .all(|c| self.weakly_isolated_in(c) != 0)
    }

    /// Every closed set is the closure of its weakly isolated points.
    pub fn closeds_generated_by_weakly_isolated(&self) -> bool {
        self.closeds()
            .into_iter()
            .all(|c| self.closure(self.weakly_isolated_in(c)) == c)
    }

    /// `T½`: every singleton is the intersection of an open and a closed set.
    pub fn is_t_half(&self) -> bool {
        let opens = self.opens();
        let closeds = self.closeds();
        (0..self.len()).all(|p| {
            opens
                .iter()
                .any(|&v| closeds.iter().any(|&c| v & c == bits::singleton(p)))
        })
    }

    pub fn is_hochster_scattered(&self) -> bool {
        self.hochster_dual().is_scattered()
    }

    pub fn is_hochster_weakly_scattered(&self) -> bool {
        self.hochster_dual().is_weakly_scattered()
    }
}

/// Closes a family of subsets under arbitrary unions (including the empty one).
pub fn union_closure(seed: BTreeSet<Mask>) -> Vec<Mask> {
    let mut family = seed;
    family.insert(0);
    let mut frontier: Vec<Mask> = family.iter().copied().collect();
    let gens: Vec<Mask> = frontier.clone();
    while let Some(a) = frontier.pop() {
        for &g in &gens {
            let u = a | g;
            if family.insert(u) {
                frontier.push(u);
            }
        }
    }
    family.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::enumerate_all_up_to;

    fn chain2() -> SpectralSpace {
        SpectralSpace::new(FinitePoset::chain(&["g", "m"]))
    }

    fn a2() -> SpectralSpace {
        SpectralSpace::new(FinitePoset::antichain(&["p", "q"]))
    }

    fn vee() -> SpectralSpace {
        SpectralSpace::new(
            FinitePoset::from_pairs(&["g", "m1", "m2"], &[("g", "m1"), ("g", "m2")]).unwrap(),
        )
    }

    fn named(x: &SpectralSpace, sets: Vec<Mask>) -> Vec<Vec<String>> {
        let mut v: Vec<Vec<String>> = sets.into_iter().map(|m| x.names(m)).collect();
        v.sort();
        v
    }

    fn strs(v: &[&[&str]]) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = v
            .iter()
            .map(|s| s.iter().map(|x| x.to_string()).collect())
            .collect();
        out.sort();
        out
    }

    #[test]
    fn thomason_examples() {
        let x = chain2();
        let t = x.thomason_sets().into_iter().map(|t| t.members()).collect();
        assert_eq!(named(&x, t), strs(&[&[], &["m"], &["g", "m"]]));
        assert_eq!(a2().thomason_sets().len(), 4);
        let v = vee();
        let t = v.thomason_sets().into_iter().map(|t| t.members()).collect();
        assert_eq!(
            named(&v, t),
            strs(&[&[], &["m1"], &["m2"], &["m1", "m2"], &["g", "m1", "m2"]])
        );
    }

    #[test]
    fn z_set_examples() {
        let x = chain2();
        assert_eq!(x.z_set("m").unwrap().members(), 0);
        assert_eq!(x.names(x.z_set("g").unwrap().members()), vec!["m"]);
        let v = vee();
        assert_eq!(v.names(v.z_set("m1").unwrap().members()), vec!["m2"]);
        assert!(x.z_set("nope").is_err());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(chain2().hochster_dual().order(), &chain2().order().opposite());
        assert_eq!(a2().hochster_dual(), a2());
        assert_eq!(chain2().hochster_dual().hochster_dual(), chain2());
    }

    #[test]
    fn skula_is_discrete_on_examples() {
        assert_eq!(chain2().skula_opens().len(), 4);
        assert_eq!(a2().skula_opens().len(), 4);
        for p in enumerate_all_up_to(4).unwrap() {
            let x = SpectralSpace::new(p);
            assert_eq!(x.skula_opens().len(), 1 << x.len());
        }
    }

    #[test]
    fn localising_basics_examples() {
        let x = chain2();
        let m = x.point("m").unwrap();
        let g = x.point("g").unwrap();
        let basics = x.localising_basic_opens();
        assert!(basics
            .iter()
            .any(|b| b.v.members() == 1 << m && b.u.members() == 0 && b.set == 1 << m));
        assert!(basics.iter().any(|b| b.v.members() == x.all()
            && b.u.members() == 1 << m
            && b.set == 1 << g));
        let v = vee();
        let g = v.point("g").unwrap();
        assert!(v.localising_basic_opens().iter().any(|b| b.set == 1 << g));
        for s in [chain2(), a2(), vee()] {
            assert_eq!(s.localising_opens(), s.hochster_dual().skula_opens());
        }
    }

    #[test]
    fn visible_points_examples() {
        assert_eq!(chain2().visible_points(), 0b11);
        assert_eq!(a2().visible_points(), 0b11);
    }

    #[test]
    fn weakly_isolated_examples() {
        let x = chain2();
        assert_eq!(x.weakly_isolated_points(&["g", "m"]).unwrap(), vec!["g"]);
        assert_eq!(a2().weakly_isolated_points(&["p", "q"]).unwrap(), vec!["p", "q"]);
        assert_eq!(
            vee().weakly_isolated_points(&["m1", "m2"]).unwrap(),
            vec!["m1", "m2"]
        );
        assert!(matches!(x.weakly_isolated_points(&["g"]), Err(Error::Input(_))));
    }

    #[test]
    fn cb_rank_examples() {
        assert_eq!(a2().cb_rank(), Some(1));
        assert_eq!(chain2().cb_rank(), Some(2));
        for n in 1..=6 {
            let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let x = SpectralSpace::new(FinitePoset::chain(&refs));
            assert_eq!(x.cb_rank(), Some(n));
        }
    }

    #[test]
    fn scatteredness_examples() {
        for x in [chain2(), a2(), vee()] {
            assert!(x.is_scattered());
            assert!(x.is_weakly_scattered());
            assert!(x.is_hochster_scattered());
            assert!(x.is_hochster_weakly_scattered());
        }
    }
}
