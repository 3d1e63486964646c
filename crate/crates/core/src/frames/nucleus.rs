//! Nuclei, the assembly, and its universal property.

use serde::Serialize;

use super::{frame_of, hom::enumerate_frame_homs, skula_frame, FiniteFrame, FrameHom};
use crate::poset::FinitePoset;
use crate::spectral::SpectralSpace;
use crate::{Error, Result};

/// Default bound on the size of a frame whose nuclei are enumerated.
pub const DEFAULT_MAX_FRAME: usize = 16;

/// A self-map of a frame satisfying the four nucleus axioms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nucleus {
    map: Vec<usize>,
}

impl Nucleus {
    pub fn new(frame: &FiniteFrame, map: Vec<usize>) -> Result<Self> {
        match validate_nucleus(frame, &map) {
            NucleusReport { violation: None, .. } => Ok(Nucleus { map }),
            NucleusReport {
                violation: Some(v), ..
            } => Err(Error::input(format!("not a nucleus: {}", v.describe(frame)))),
        }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NucleusAxiom {
    /// `x ≤ ν(x)`
    Inflationary,
    /// `x ≤ y ⇒ ν(x) ≤ ν(y)`
    Monotone,
    /// `ν(ν(x)) = ν(x)`
    Idempotent,
    /// `ν(x ∧ y) = ν(x) ∧ ν(y)`
    MeetPreserving,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NucleusViolation {
    pub axiom: NucleusAxiom,
    pub witness: Vec<usize>,
}

impl NucleusViolation {
    pub fn describe(&self, f: &FiniteFrame) -> String {
        let w: Vec<&str> = self.witness.iter().map(|&i| f.name(i)).collect();
        format!("{:?} fails at {:?}", self.axiom, w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NucleusReport {
    pub ok: bool,
    pub violation: Option<NucleusViolation>,
}

/// Checks the nucleus axioms in order, reporting the first failure.
pub fn validate_nucleus(f: &FiniteFrame, map: &[usize]) -> NucleusReport {
    let fail = |axiom, witness| NucleusReport {
        ok: false,
        violation: Some(NucleusViolation { axiom, witness }),
    };
    let n = f.len();
    if map.len() != n || map.iter().any(|&y| y >= n) {
        return fail(NucleusAxiom::Inflationary, vec![]);
    }
    if let Some(x) = (0..n).find(|&x| !f.leq(x, map[x])) {
        return fail(NucleusAxiom::Inflationary, vec![x]);
    }
    for x in 0..n {
        for y in 0..n {
            if f.leq(x, y) && !f.leq(map[x], map[y]) {
                return fail(NucleusAxiom::Monotone, vec![x, y]);
            }
        }
    }
    if let Some(x) = (0..n).find(|&x| map[map[x]] != map[x]) {
        return fail(NucleusAxiom::Idempotent, vec![x]);
    }
    for x in 0..n {
        for y in 0..n {
            if map[f.meet(x, y)] != f.meet(map[x], map[y]) {
                return fail(NucleusAxiom::MeetPreserving, vec![x, y]);
            }
        }
    }
    NucleusReport {
        ok: true,
        violation: None,
    }
}

/// `y ↦ x ∨ y`.
pub fn closed_nucleus(f: &FiniteFrame, x: usize) -> Nucleus {
    Nucleus {
        map: (0..f.len()).map(|y| f.join(x, y)).collect(),
    }
}

/// `y ↦ x → y`.
pub fn open_nucleus(f: &FiniteFrame, x: usize) -> Nucleus {
    Nucleus {
        map: (0..f.len()).map(|y| f.implies(x, y)).collect(),
    }
}

/// Enumerates nuclei by backtracking over a linear extension of `f`.
///
/// Candidates for `ν(x)` are the elements above `x`; a candidate is pruned as
/// soon as monotonicity, meet preservation or idempotence fails on the
/// values fixed so far.
fn enumerate_nuclei(f: &FiniteFrame) -> Vec<Nucleus> {
    let order = f.order().linear_extension();
    let n = f.len();
    let mut st = Search {
        f,
        order: &order,
        map: vec![usize::MAX; n],
        must_fix: vec![0; n],
        out: Vec::new(),
    };
    st.extend(0);
    let mut out = st.out;
    out.sort();
    out
}

struct Search<'a> {
    f: &'a FiniteFrame,
    order: &'a [usize],
    map: Vec<usize>,
    /// number of assigned elements whose value is this element
    must_fix: Vec<u32>,
    out: Vec<Nucleus>,
}

impl Search<'_> {
    fn extend(&mut self, pos: usize) {
        let f = self.f;
        if pos == self.order.len() {
            self.out.push(Nucleus {
                map: self.map.clone(),
            });
            return;
        }
        let x = self.order[pos];
        let candidates: Vec<usize> = if self.must_fix[x] > 0 {
            vec![x]
        } else {
            (0..f.len()).filter(|&v| f.leq(x, v)).collect()
        };
        'cand: for v in candidates {
            // idempotence: an already-assigned value must be a fixed point
            if v != x && self.map[v] != usize::MAX && self.map[v] != v {
                continue;
            }
            for y in 0..f.len() {
                let fy = self.map[y];
                if fy == usize::MAX {
                    continue;
                }
                if f.leq(y, x) && !f.leq(fy, v) {
                    continue 'cand;
                }
                let m = f.meet(x, y);
                let fm = if m == x { v } else { self.map[m] };
                if fm != usize::MAX && fm != f.meet(v, fy) {
                    continue 'cand;
                }
            }
            self.map[x] = v;
            self.must_fix[v] += 1;
            self.extend(pos + 1);
            self.must_fix[v] -= 1;
            self.map[x] = usize::MAX;
        }
    }
}

/// The frame of all nuclei of a frame, ordered pointwise.
#[derive(Debug, Clone)]
pub struct Assembly {
    base: FiniteFrame,
    nuclei: Vec<Nucleus>,
    frame: FiniteFrame,
}

impl Assembly {
    pub fn base(&self) -> &FiniteFrame {
        &self.base
    }

    pub fn frame(&self) -> &FiniteFrame {
        &self.frame
    }

    /// Nucleus at a given element index of [`Assembly::frame`].
    pub fn nucleus(&self, i: usize) -> &Nucleus {
        &self.nuclei[i]
    }

    pub fn nuclei(&self) -> &[Nucleus] {
        &self.nuclei
    }

    pub fn index_of(&self, nu: &Nucleus) -> Option<usize> {
        self.nuclei.iter().position(|m| m == nu)
    }

    /// `α: x ↦ (y ↦ x ∨ y)`.
    pub fn alpha(&self) -> FrameHom {
        let map = (0..self.base.len())
            .map(|x| {
                self.index_of(&closed_nucleus(&self.base, x))
                    .expect("closed nuclei are nuclei")
            })
            .collect();
        FrameHom::new(self.base.clone(), self.frame.clone(), map).expect("α is a frame homomorphism")
    }

    /// Least nucleus above both, by iterating `ν ∘ μ` to a fixpoint.
    pub fn join_by_iteration(&self, a: usize, b: usize) -> Nucleus {
        let (nu, mu) = (&self.nuclei[a], &self.nuclei[b]);
        let mut cur: Vec<usize> = (0..self.base.len()).collect();
        loop {
            let next: Vec<usize> = cur.iter().map(|&x| nu.apply(mu.apply(x))).collect();
            if next == cur {
                return Nucleus { map: cur };
            }
            cur = next;
        }
    }

    /// Value tables keyed by the base frame's element names.
    pub fn tables(&self) -> Vec<NucleusTable> {
        (0..self.frame.len())
            .map(|i| NucleusTable {
                id: self.frame.name(i).to_string(),
                values: (0..self.base.len())
                    .map(|x| {
                        (
                            self.base.name(x).to_string(),
                            self.base.name(self.nuclei[i].apply(x)).to_string(),
                        )
                    })
                    .collect(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NucleusTable {
    pub id: String,
    pub values: Vec<(String, String)>,
}

/// Enumerates all nuclei of `f` and orders them pointwise.
pub fn assembly(f: &FiniteFrame, max_frame: usize) -> Result<Assembly> {
    if f.len() > max_frame {
        return Err(Error::Bound {
            bound: "max-frame",
            limit: max_frame,
            required: f.len(),
        });
    }
    let nuclei = enumerate_nuclei(f);
    let width = nuclei.len().to_string().len();
    let names: Vec<String> = (0..nuclei.len()).map(|i| format!("n{i:0width$}")).collect();
    let k = nuclei.len();
    let mut rel = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            rel[i][j] = (0..f.len()).all(|x| f.leq(nuclei[i].apply(x), nuclei[j].apply(x)));
        }
    }
    let frame = FiniteFrame::from_poset(FinitePoset::from_matrix(names, rel)?)?;
    Ok(Assembly {
        base: f.clone(),
        nuclei,
        frame,
    })
}

/// The unique `φ̃: N(F) → Y` with `φ̃ ∘ α = φ`, for complemented `φ`.
///
/// Uses `ν = ⋁ₐ (c_{ν(a)} ∧ u_a)` in `N(F)`, so
/// `φ̃(ν) = ⋁ₐ φ(ν(a)) ∧ ¬φ(a)`; the result is verified to be a frame
/// homomorphism making the triangle commute.
pub fn universal_factorization(phi: &FrameHom, asm: &Assembly) -> Result<FrameHom> {
    if phi.source() != asm.base() {
        return Err(Error::input("φ does not start at the assembly's base frame"));
    }
    if let Some(x) = phi.uncomplemented_witness() {
        return Err(Error::Precondition(format!(
            "φ({}) = {} has no complement in the target",
            phi.source().name(x),
            phi.target().name(phi.apply(x))
        )));
    }
    let f = asm.base();
    let y = phi.target();
    let neg: Vec<usize> = (0..f.len())
        .map(|a| y.complement(phi.apply(a)).expect("checked complemented"))
        .collect();
    let map: Vec<usize> = asm
        .nuclei()
        .iter()
        .map(|nu| y.join_all((0..f.len()).map(|a| y.meet(phi.apply(nu.apply(a)), neg[a]))))
        .collect();
    let tilde = FrameHom::new(asm.frame().clone(), y.clone(), map)?;
    let alpha = asm.alpha();
    if (0..f.len()).any(|x| tilde.apply(alpha.apply(x)) != phi.apply(x)) {
        return Err(Error::Precondition("factorization does not commute with α".into()));
    }
    Ok(tilde)
}

/// Number of frame homomorphisms `N(F) → Y` with `ψ ∘ α = φ`.
pub fn count_factorizations(phi: &FrameHom, asm: &Assembly) -> usize {
    let alpha = asm.alpha();
    enumerate_frame_homs(asm.frame(), phi.target())
        .into_iter()
        .filter(|psi| (0..phi.source().len()).all(|x| psi[alpha.apply(x)] == phi.apply(x)))
        .count()
}

/// The comparison map from the assembly of `F(X)` to the Skula frame.
#[derive(Debug, Clone)]
pub struct Sigma {
    pub assembly: Assembly,
    pub skula: FiniteFrame,
    /// `F(f_X): F(X) → F(Sk X)`, the inclusion of opens.
    pub inclusion: FrameHom,
    pub hom: FrameHom,
    pub is_isomorphism: bool,
}

pub fn sigma(x: &SpectralSpace, max_frame: usize) -> Result<Sigma> {
    let fx = frame_of(x);
    let asm = assembly(&fx, max_frame)?;
    let skula = skula_frame(x);
    let map = (0..fx.len())
        .map(|v| {
            let set = fx.sets().expect("open frame")[v];
            skula.index_of_set(set).expect("opens are Skula open")
        })
        .collect();
    let inclusion = FrameHom::new(fx, skula.clone(), map)?;
    let hom = universal_factorization(&inclusion, &asm)?;
    let is_isomorphism = hom.is_bijective();
    Ok(Sigma {
        assembly: asm,
        skula,
        inclusion,
        hom,
        is_isomorphism,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::enumerate_all_up_to;

    /// Independent oracle: every self-map, filtered by the axioms.
    fn brute_nuclei(f: &FiniteFrame) -> Vec<Vec<usize>> {
        let n = f.len();
        let mut out = Vec::new();
        let total = n.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let map: Vec<usize> = (0..n)
                .map(|_| {
                    let v = c % n;
                    c /= n;
                    v
                })
                .collect();
            if validate_nucleus(f, &map).ok {
                out.push(map);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn validate_examples() {
        let c3 = FiniteFrame::chain(3).unwrap();
        assert!(validate_nucleus(&c3, &[0, 1, 2]).ok);
        assert!(validate_nucleus(&c3, &[2, 2, 2]).ok);
        let r = validate_nucleus(&c3, &[0, 0, 2]);
        assert!(!r.ok);
        let v = r.violation.unwrap();
        assert_eq!(v.axiom, NucleusAxiom::Inflationary);
        assert_eq!(v.witness, vec![1]);
    }

    #[test]
    fn three_chain_has_four_nuclei() {
        let c3 = FiniteFrame::chain(3).unwrap();
        let asm = assembly(&c3, DEFAULT_MAX_FRAME).unwrap();
        assert_eq!(asm.nuclei().len(), 4);
        let got: Vec<Vec<usize>> = asm.nuclei().iter().map(|n| n.map().to_vec()).collect();
        assert_eq!(got, brute_nuclei(&c3));
        for nu in [
            Nucleus { map: vec![0, 1, 2] },
            Nucleus { map: vec![2, 2, 2] },
            closed_nucleus(&c3, 1),
            open_nucleus(&c3, 1),
        ] {
            assert!(asm.index_of(&nu).is_some());
        }
        assert!(asm.frame().is_boolean());
        assert_eq!(assembly(&FiniteFrame::chain(2).unwrap(), 16).unwrap().nuclei().len(), 2);
    }

    #[test]
    fn enumeration_matches_brute_force_on_small_frames() {
        for p in enumerate_all_up_to(3).unwrap() {
            let f = frame_of(&SpectralSpace::new(p));
            if f.len() > 6 {
                continue;
            }
            let got: Vec<Vec<usize>> = assembly(&f, 16)
                .unwrap()
                .nuclei()
                .iter()
                .map(|n| n.map().to_vec())
                .collect();
            assert_eq!(got, brute_nuclei(&f));
        }
    }

    #[test]
    fn bound_is_enforced() {
        let c3 = FiniteFrame::chain(3).unwrap();
        assert!(matches!(assembly(&c3, 2), Err(Error::Bound { limit: 2, .. })));
    }

    #[test]
    fn alpha_images_are_complemented_by_open_nuclei() {
        let f = frame_of(&SpectralSpace::new(
            FinitePoset::from_pairs(&["g", "m1", "m2"], &[("g", "m1"), ("g", "m2")]).unwrap(),
        ));
        let asm = assembly(&f, 16).unwrap();
        let nf = asm.frame();
        let alpha = asm.alpha();
        for x in 0..f.len() {
            let u = asm.index_of(&open_nucleus(&f, x)).unwrap();
            let c = alpha.apply(x);
            assert_eq!(nf.join(c, u), nf.top());
            assert_eq!(nf.meet(c, u), nf.bottom());
        }
    }

    #[test]
    fn joins_by_iteration_agree_with_order_joins() {
        let f = frame_of(&SpectralSpace::new(FinitePoset::chain(&["a", "b", "c"])));
        let asm = assembly(&f, 16).unwrap();
        for a in 0..asm.frame().len() {
            for b in 0..asm.frame().len() {
                let j = asm.frame().join(a, b);
                assert_eq!(&asm.join_by_iteration(a, b), asm.nucleus(j));
            }
        }
    }

    #[test]
    fn factorization_of_alpha_is_identity() {
        let c3 = FiniteFrame::chain(3).unwrap();
        let asm = assembly(&c3, 16).unwrap();
        let tilde = universal_factorization(&asm.alpha(), &asm).unwrap();
        assert_eq!(tilde.map(), (0..asm.frame().len()).collect::<Vec<_>>());
    }

    #[test]
    fn factorization_of_thomason_inclusion_is_unique_and_bijective() {
        // 3-chain = Thomason sets of Chain2, included into the 2² powerset.
        let x = SpectralSpace::new(FinitePoset::chain(&["g", "m"]));
        let points = x.order().elements().to_vec();
        let thom: Vec<u64> = x.thomason_sets().iter().map(|t| t.members()).collect();
        let tf = FiniteFrame::from_subsets(&points, &thom).unwrap();
        let pw = FiniteFrame::powerset(&points).unwrap();
        let map = (0..tf.len())
            .map(|i| pw.index_of_set(tf.sets().unwrap()[i]).unwrap())
            .collect();
        let phi = FrameHom::new(tf.clone(), pw, map).unwrap();
        let asm = assembly(&tf, 16).unwrap();
        let tilde = universal_factorization(&phi, &asm).unwrap();
        assert!(tilde.is_bijective());
        assert_eq!(count_factorizations(&phi, &asm), 1);
    }

    #[test]
    fn non_complemented_phi_is_rejected() {
        let c3 = FiniteFrame::chain(3).unwrap();
        let id = FrameHom::new(c3.clone(), c3.clone(), vec![0, 1, 2]).unwrap();
        let asm = assembly(&c3, 16).unwrap();
        match universal_factorization(&id, &asm) {
            Err(Error::Precondition(msg)) => assert!(msg.contains('1')),
            other => panic!("expected precondition error, got {other:?}"),
        }
    }

    #[test]
    fn sigma_examples() {
        let s = sigma(&SpectralSpace::new(FinitePoset::chain(&["g", "m"])), 16).unwrap();
        assert!(s.is_isomorphism);
        assert_eq!(s.assembly.nuclei().len(), 4);
        assert_eq!(s.skula.len(), 4);
        let one = sigma(&SpectralSpace::new(FinitePoset::antichain(&["p"])), 16).unwrap();
        assert!(one.is_isomorphism);
        for p in enumerate_all_up_to(3).unwrap() {
            assert!(sigma(&SpectralSpace::new(p), 16).unwrap().is_isomorphism);
        }
    }
}
