//! Finite frames.
//!
//! A finite frame is the same thing as a finite distributive lattice. Frames
//! are stored with full meet/join tables; elements are addressed by index and
//! carry string identifiers (sorted, like poset elements).

mod hom;
mod nucleus;
mod scatter;

pub use hom::{enumerate_frame_homs, FrameHom};
pub use nucleus::{
    assembly, closed_nucleus, count_factorizations, open_nucleus, sigma, universal_factorization, validate_nucleus,
    Assembly, Nucleus, NucleusAxiom, NucleusReport, NucleusTable, NucleusViolation, Sigma,
    DEFAULT_MAX_FRAME,
};
pub use scatter::{weakly_scattered_conditions, WeaklyScatteredReport};

use serde::Serialize;

use crate::bits::{self, Mask};
use crate::poset::FinitePoset;
use crate::spectral::SpectralSpace;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFrame {
    order: FinitePoset,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
    /// Present when elements are subsets of some point set, ordered by inclusion.
    sets: Option<Vec<Mask>>,
}

impl FiniteFrame {
    /// Validates that `order` is a bounded distributive lattice.
    pub fn from_poset(order: FinitePoset) -> Result<Self> {
        let n = order.len();
        if n == 0 {
            return Err(Error::input("a frame has at least one element"));
        }
        let all = order.all();
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in a..n {
                let lower = order.down_mask(a) & order.down_mask(b);
                let upper = order.up_mask(a) & order.up_mask(b);
                let glb = order.maximal(lower);
                let lub = order.minimal(upper);
                if glb.count_ones() != 1 || lub.count_ones() != 1 {
                    return Err(Error::input(format!(
                        "`{}` and `{}` lack a unique meet or join; not a lattice",
                        order.name(a),
                        order.name(b)
                    )));
                }
                let (m, j) = (glb.trailing_zeros() as usize, lub.trailing_zeros() as usize);
                meet[a][b] = m;
                meet[b][a] = m;
                join[a][b] = j;
                join[b][a] = j;
            }
        }
        let bottom = order.minimal(all);
        let top = order.maximal(all);
        if bottom.count_ones() != 1 || top.count_ones() != 1 {
            return Err(Error::input("lattice is not bounded"));
        }
        let frame = FiniteFrame {
            order,
            meet,
            join,
            bottom: bottom.trailing_zeros() as usize,
            top: top.trailing_zeros() as usize,
            sets: None,
        };
        if let Some((x, y, z)) = frame.distributivity_witness() {
            return Err(Error::input(format!(
                "lattice is not distributive at ({}, {}, {})",
                frame.name(x),
                frame.name(y),
                frame.name(z)
            )));
        }
        Ok(frame)
    }

    /// The lattice of the given subsets of `points`, ordered by inclusion.
    pub fn from_subsets(points: &[String], sets: &[Mask]) -> Result<Self> {
        let mut uniq: Vec<Mask> = sets.to_vec();
        uniq.sort_unstable();
        uniq.dedup();
        let names: Vec<String> = uniq.iter().map(|&m| set_name(points, m)).collect();
        let n = uniq.len();
        let mut rel = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                rel[i][j] = bits::is_subset(uniq[i], uniq[j]);
            }
        }
        let order = FinitePoset::from_matrix(names.clone(), rel)?;
        let mut frame = FiniteFrame::from_poset(order)?;
        let by_name: Vec<Mask> = frame
            .order
            .elements()
            .iter()
            .map(|nm| uniq[names.iter().position(|x| x == nm).expect("name present")])
            .collect();
        frame.sets = Some(by_name);
        Ok(frame)
    }

    /// The Boolean algebra of all subsets of `points`.
    pub fn powerset(points: &[String]) -> Result<Self> {
        let sets: Vec<Mask> = bits::powerset(points.len()).collect();
        Self::from_subsets(points, &sets)
    }

    /// `0 < 1 < ... < k-1`, named `"0"`, `"1"`, ...
    pub fn chain(k: usize) -> Result<Self> {
        let names: Vec<String> = (0..k).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        FiniteFrame::from_poset(FinitePoset::chain(&refs))
    }

    pub fn order(&self) -> &FinitePoset {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, i: usize) -> &str {
        self.order.name(i)
    }

    pub fn names(&self) -> &[String] {
        self.order.elements()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.order.index_of(name)
    }

    pub fn sets(&self) -> Option<&[Mask]> {
        self.sets.as_deref()
    }

    /// Index of the element that is the given subset, for subset frames.
    pub fn index_of_set(&self, m: Mask) -> Option<usize> {
        self.sets.as_ref()?.iter().position(|&s| s == m)
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn join_all(&self, it: impl IntoIterator<Item = usize>) -> usize {
        it.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, it: impl IntoIterator<Item = usize>) -> usize {
        it.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    fn distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = self.meet(x, self.join(y, z));
                    let rhs = self.join(self.meet(x, y), self.meet(x, z));
                    if lhs != rhs {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// Heyting implication `x → y = ⋁{ z : z ∧ x ≤ y }`.
    pub fn implies(&self, x: usize, y: usize) -> usize {
        self.join_all((0..self.len()).filter(|&z| self.leq(self.meet(z, x), y)))
    }

    pub fn complement(&self, x: usize) -> Option<usize> {
        (0..self.len()).find(|&y| self.meet(x, y) == self.bottom && self.join(x, y) == self.top)
    }

    pub fn is_complemented(&self, x: usize) -> bool {
        self.complement(x).is_some()
    }

    /// Every element has a complement.
    pub fn is_boolean(&self) -> bool {
        (0..self.len()).all(|x| self.is_complemented(x))
    }

    /// Meet-irreducible elements: `p ≠ 1` with `x ∧ y ≤ p ⇒ x ≤ p or y ≤ p`.
    pub fn primes(&self) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&p| p != self.top)
            .filter(|&p| {
                (0..n).all(|x| {
                    (0..n).all(|y| !self.leq(self.meet(x, y), p) || self.leq(x, p) || self.leq(y, p))
                })
            })
            .collect()
    }

    /// Minimal elements of `{ p prime : x ≤ p }`.
    pub fn min_primes(&self, x: usize) -> Vec<usize> {
        let above: Vec<usize> = self.primes().into_iter().filter(|&p| self.leq(x, p)).collect();
        above
            .iter()
            .copied()
            .filter(|&p| !above.iter().any(|&q| q != p && self.leq(q, p)))
            .collect()
    }

    /// Primes `p ∈ min(x)` with `x = ⋀ min(x)` and `x ≠ ⋀ (min(x) ∖ {p})`.
    pub fn essential_primes(&self, x: usize) -> Vec<usize> {
        let mins = self.min_primes(x);
        if self.meet_all(mins.iter().copied()) != x {
            return Vec::new();
        }
        mins.iter()
            .copied()
            .filter(|&p| self.meet_all(mins.iter().copied().filter(|&q| q != p)) != x)
            .collect()
    }

    pub fn names_of(&self, idx: &[usize]) -> Vec<String> {
        let mut v: Vec<String> = idx.iter().map(|&i| self.name(i).to_string()).collect();
        v.sort();
        v
    }
}

fn set_name(points: &[String], m: Mask) -> String {
    let inner: Vec<&str> = bits::members(m).map(|i| points[i].as_str()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Frame of open sets (down-sets), `0 = ∅`, `1 = X`.
pub fn frame_of(x: &SpectralSpace) -> FiniteFrame {
    FiniteFrame::from_subsets(x.order().elements(), &x.opens()).expect("opens form a frame")
}

/// Frame of opens of the Skula topology of `x`.
pub fn skula_frame(x: &SpectralSpace) -> FiniteFrame {
    FiniteFrame::from_subsets(x.order().elements(), &x.skula_opens()).expect("a topology is a frame")
}

/// Points of a frame and the comparison map into the frame of their opens.
#[derive(Debug, Clone)]
pub struct Spc {
    pub space: SpectralSpace,
    /// `x ↦ D(x) = { p : x ≰ p }`.
    pub lambda: FrameHom,
    pub is_spatial: bool,
}

/// Space of primes of `f`, with the prime order as specialization order.
pub fn spc(f: &FiniteFrame) -> Spc {
    let primes = f.primes();
    let names: Vec<String> = primes.iter().map(|&p| f.name(p).to_string()).collect();
    let n = primes.len();
    let mut rel = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            rel[i][j] = f.leq(primes[i], primes[j]);
        }
    }
    let order = FinitePoset::from_matrix(names, rel).expect("restriction of an order");
    let space = SpectralSpace::new(order);
    let target = frame_of(&space);
    let map: Vec<usize> = (0..f.len())
        .map(|x| {
            let d = primes
                .iter()
                .filter(|&&p| !f.leq(x, p))
                .map(|&p| bits::singleton(space.point(f.name(p)).expect("prime is a point")))
                .fold(0, |acc, b| acc | b);
            target.index_of_set(d).expect("D(x) is open")
        })
        .collect();
    let lambda = FrameHom::new(f.clone(), target, map).expect("D preserves finite meets and joins");
    let is_spatial = lambda.is_bijective();
    Spc {
        space,
        lambda,
        is_spatial,
    }
}

/// Wire representation of a frame element table, used by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct FrameSummary {
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
    pub bottom: String,
    pub top: String,
}

impl FiniteFrame {
    pub fn summary(&self) -> FrameSummary {
        let json = self.order.to_json();
        FrameSummary {
            elements: json.elements,
            leq: json.leq,
            bottom: self.name(self.bottom).to_string(),
            top: self.name(self.top).to_string(),
        }
    }
}
