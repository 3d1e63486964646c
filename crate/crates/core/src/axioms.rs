//! Abstract support data on finite spectral spaces.
//!
//! A datum is a frame homomorphism `γ` from the Thomason sets of a space
//! into a model of the Bousfield lattice, together with complements for the
//! images. The localising topology on a finite space is discrete and is
//! generated by the sets `V ∩ Uᶜ` for Thomason `V`, `U`; the candidate
//! extension is `η(V ∩ Uᶜ) = γ(V) ∧ γ(U)ᶜ`, and the datum is supportive when
//! this is well defined and a frame homomorphism.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{self, Mask};
use crate::frames::{
    assembly, enumerate_frame_homs, frame_of, sigma, skula_frame, universal_factorization, FiniteFrame, FrameHom,
};
use crate::homalg::BaseRing;
use crate::poset::{FinitePoset, PosetJson};
use crate::spectral::{LocalisingBasic, SpectralSpace};
use crate::support::spec;
use crate::{Error, Result};

/// Alternative covers sampled per open set by default.
pub const DEFAULT_COVER_SAMPLES: usize = 50;
/// Largest target frame for the exhaustive uniqueness check.
pub const UNIQUENESS_LIMIT: usize = 16;

/// The frame of Thomason sets (up-sets) of `x`.
pub fn thomason_frame(x: &SpectralSpace) -> FiniteFrame {
    frame_of(&x.hochster_dual())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportDatum {
    space: SpectralSpace,
    gamma: FrameHom,
    /// `complements[v]` is the recorded complement of `γ(v)`.
    complements: Vec<Option<usize>>,
}

/// Wire format of a [`SupportDatum`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumJson {
    pub space: PosetJson,
    pub bousfield: PosetJson,
    /// `[thomason set, element]` pairs, one per Thomason set.
    pub gamma: Vec<(Vec<String>, String)>,
    /// `[element, complement]` pairs; computed in the frame when absent.
    #[serde(default)]
    pub complements: Option<Vec<(String, String)>>,
}

impl SupportDatum {
    /// A datum whose complements are read off the target frame.
    pub fn new(space: SpectralSpace, bousfield: FiniteFrame, gamma: Vec<usize>) -> Result<Self> {
        let gamma = FrameHom::new(thomason_frame(&space), bousfield, gamma)?;
        let complements = gamma
            .map()
            .iter()
            .map(|&y| gamma.target().complement(y))
            .collect();
        Ok(SupportDatum {
            space,
            gamma,
            complements,
        })
    }

    /// A datum with explicitly recorded complements, one per Thomason set.
    pub fn with_complements(
        space: SpectralSpace,
        bousfield: FiniteFrame,
        gamma: Vec<usize>,
        complements: Vec<usize>,
    ) -> Result<Self> {
        let mut d = Self::new(space, bousfield, gamma)?;
        if complements.len() != d.complements.len() || complements.iter().any(|&c| c >= d.bousfield().len()) {
            return Err(Error::input("one complement per Thomason set is required"));
        }
        d.complements = complements.into_iter().map(Some).collect();
        Ok(d)
    }

    pub fn space(&self) -> &SpectralSpace {
        &self.space
    }

    pub fn bousfield(&self) -> &FiniteFrame {
        self.gamma.target()
    }

    pub fn gamma(&self) -> &FrameHom {
        &self.gamma
    }

    pub fn thomason(&self) -> &FiniteFrame {
        self.gamma.source()
    }

    fn thomason_index(&self, m: Mask) -> usize {
        self.thomason().index_of_set(m).expect("Thomason set")
    }

    fn gamma_of(&self, m: Mask) -> usize {
        self.gamma.apply(self.thomason_index(m))
    }

    fn complement_of(&self, m: Mask) -> Option<usize> {
        self.complements[self.thomason_index(m)]
    }

    pub fn from_json(j: &DatumJson) -> Result<Self> {
        let space = SpectralSpace::new(FinitePoset::from_json(&j.space)?);
        let bousfield = FiniteFrame::from_poset(FinitePoset::from_json(&j.bousfield)?)?;
        let t = thomason_frame(&space);
        let mut map = vec![None; t.len()];
        for (set, elem) in &j.gamma {
            let m = space.order().mask_of(set)?;
            let v = t
                .index_of_set(m)
                .ok_or_else(|| Error::input(format!("{set:?} is not a Thomason set")))?;
            map[v] = Some(bousfield.index_of(elem)?);
        }
        let map: Vec<usize> = map
            .into_iter()
            .enumerate()
            .map(|(v, y)| y.ok_or_else(|| Error::input(format!("γ is missing the Thomason set {}", t.name(v)))))
            .collect::<Result<_>>()?;
        match &j.complements {
            None => Self::new(space, bousfield, map),
            Some(pairs) => {
                let mut comps = Vec::with_capacity(map.len());
                for &y in &map {
                    let name = bousfield.name(y);
                    let (_, c) = pairs
                        .iter()
                        .find(|(a, _)| a == name)
                        .ok_or_else(|| Error::input(format!("no complement recorded for `{name}`")))?;
                    comps.push(bousfield.index_of(c)?);
                }
                Self::with_complements(space, bousfield, map, comps)
            }
        }
    }

    pub fn to_json(&self) -> DatumJson {
        let t = self.thomason();
        let b = self.bousfield();
        let sets = t.sets().expect("set frame");
        let gamma = (0..t.len())
            .map(|v| (self.space.names(sets[v]), b.name(self.gamma.apply(v)).to_string()))
            .collect();
        let mut complements: Vec<(String, String)> = (0..t.len())
            .filter_map(|v| {
                let c = self.complements[v]?;
                Some((b.name(self.gamma.apply(v)).to_string(), b.name(c).to_string()))
            })
            .collect();
        complements.sort();
        complements.dedup();
        DatumJson {
            space: self.space.order().to_json(),
            bousfield: b.order().to_json(),
            gamma,
            complements: Some(complements),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementReport {
    pub ok: bool,
    /// A Thomason set whose image has no valid recorded complement.
    pub witness: Option<Vec<String>>,
}

/// Checks `γ(V) ∨ c = 1` and `γ(V) ∧ c = 0` for every `V` and its recorded
/// complement `c`.
pub fn check_complements(d: &SupportDatum) -> ComplementReport {
    let t = d.thomason();
    let b = d.bousfield();
    let sets = t.sets().expect("set frame");
    for v in 0..t.len() {
        let g = d.gamma.apply(v);
        let ok = match d.complements[v] {
            Some(c) => b.join(g, c) == b.top() && b.meet(g, c) == b.bottom(),
            None => false,
        };
        if !ok {
            return ComplementReport {
                ok: false,
                witness: Some(d.space.names(sets[v])),
            };
        }
    }
    ComplementReport { ok: true, witness: None }
}

/// A piece `V ∩ Uᶜ` of a cover, by the point names of `V` and `U`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub v: Vec<String>,
    pub u: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Eta {
    /// `η` on the frame of localising opens.
    pub hom: FrameHom,
    /// Whether `η` is the only frame homomorphism with `η ∘ F(f) = γ`;
    /// `None` when the target exceeds [`UNIQUENESS_LIMIT`].
    pub unique: Option<bool>,
    /// Whether `η ∘ σ` equals the factorisation of `γ` through the assembly.
    pub assembly_agrees: bool,
    pub covers_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NoFactorization {
    pub reason: String,
    pub open: Option<Vec<String>>,
    /// The canonical singleton cover and a cover giving a different value.
    pub covers: Option<(Vec<Piece>, Vec<Piece>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum EtaOutcome {
    Factorization(Eta),
    NoFactorization(NoFactorization),
}

impl EtaOutcome {
    pub fn eta(&self) -> Option<&Eta> {
        match self {
            EtaOutcome::Factorization(e) => Some(e),
            EtaOutcome::NoFactorization(_) => None,
        }
    }
}

/// `η(W) = ⋁_{p ∈ W} γ(↑p) ∧ γ(↑p ∖ {p})ᶜ`, checked against sampled covers
/// and verified to be a frame homomorphism through which `γ` factors.
pub fn construct_eta(d: &SupportDatum, samples: usize, seed: u64, max_frame: usize) -> Result<EtaOutcome> {
    let report = check_complements(d);
    if let Some(w) = report.witness {
        return Err(Error::Precondition(format!("γ({w:?}) has no valid complement")));
    }
    let x = &d.space;
    let b = d.bousfield();
    let order = x.order();
    let skula = skula_frame(&x.hochster_dual());
    let basics: Vec<LocalisingBasic> = x.localising_basic_opens();
    let piece_value = |bv: &LocalisingBasic| -> usize {
        b.meet(d.gamma_of(bv.v.members()), d.complement_of(bv.u.members()).expect("checked"))
    };
    let describe = |cover: &[(Mask, Mask)]| -> Vec<Piece> {
        cover
            .iter()
            .map(|&(v, u)| Piece {
                v: x.names(v),
                u: x.names(u),
            })
            .collect()
    };
    let singleton = |p: usize| -> (Mask, Mask) {
        let up = order.up_mask(p);
        (up, up & !bits::singleton(p))
    };
    let value_of = |cover: &[(Mask, Mask)]| -> usize {
        b.join_all(
            cover
                .iter()
                .map(|&(v, u)| b.meet(d.gamma_of(v), d.complement_of(u).expect("checked"))),
        )
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets = skula.sets().expect("set frame").to_vec();
    let mut map = Vec::with_capacity(sets.len());
    let mut covers_checked = 0;
    for &w in &sets {
        let canonical: Vec<(Mask, Mask)> = bits::members(w).map(singleton).collect();
        let value = value_of(&canonical);
        let inside: Vec<&LocalisingBasic> = basics.iter().filter(|bv| bv.set != 0 && bits::is_subset(bv.set, w)).collect();
        for _ in 0..samples {
            let cover = random_cover(&inside, w, &mut rng);
            covers_checked += 1;
            let alt: usize = b.join_all(cover.iter().map(|bv| piece_value(bv)));
            if alt != value {
                let pieces: Vec<(Mask, Mask)> = cover.iter().map(|bv| (bv.v.members(), bv.u.members())).collect();
                return Ok(EtaOutcome::NoFactorization(NoFactorization {
                    reason: "two covers of the same open give different joins".into(),
                    open: Some(x.names(w)),
                    covers: Some((describe(&canonical), describe(&pieces))),
                }));
            }
        }
        map.push(value);
    }
    let hom = match FrameHom::new(skula.clone(), b.clone(), map) {
        Ok(h) => h,
        Err(e) => {
            return Ok(EtaOutcome::NoFactorization(NoFactorization {
                reason: e.to_string(),
                open: None,
                covers: None,
            }))
        }
    };
    // η ∘ F(f) = γ, with F(f) the inclusion of Thomason sets
    let t = d.thomason();
    let inclusion: Vec<usize> = t
        .sets()
        .expect("set frame")
        .iter()
        .map(|&v| skula.index_of_set(v).expect("Thomason sets are localising opens"))
        .collect();
    if let Some(v) = (0..t.len()).find(|&v| hom.apply(inclusion[v]) != d.gamma.apply(v)) {
        return Ok(EtaOutcome::NoFactorization(NoFactorization {
            reason: "η does not restrict to γ".into(),
            open: Some(x.names(t.sets().expect("set frame")[v])),
            covers: None,
        }));
    }
    let unique = (b.len() <= UNIQUENESS_LIMIT).then(|| {
        enumerate_frame_homs(&skula, b)
            .into_iter()
            .filter(|psi| (0..t.len()).all(|v| psi[inclusion[v]] == d.gamma.apply(v)))
            .count()
            == 1
    });
    let asm = assembly(t, max_frame)?;
    let through_assembly = universal_factorization(&d.gamma, &asm)?;
    let sg = sigma(&x.hochster_dual(), max_frame)?;
    let assembly_agrees = sg.hom.then(&hom)?.map() == through_assembly.map();
    Ok(EtaOutcome::Factorization(Eta {
        hom,
        unique,
        assembly_agrees,
        covers_checked,
    }))
}

/// Random basic opens inside `w` until they cover it.
fn random_cover<'a, R: Rng>(inside: &[&'a LocalisingBasic], w: Mask, rng: &mut R) -> Vec<&'a LocalisingBasic> {
    let mut cover = Vec::new();
    let mut covered: Mask = 0;
    while covered != w {
        let useful: Vec<&&LocalisingBasic> = inside.iter().filter(|bv| bv.set & !covered != 0).collect();
        let pick = if rng.gen_bool(0.3) {
            inside.choose(rng)
        } else {
            useful.choose(rng).copied()
        };
        let pick = *pick.expect("singletons are basic opens");
        covered |= pick.set;
        cover.push(pick);
    }
    cover
}

/// Whether `η` exists; non-complemented data are not supportive.
pub fn is_supportive(d: &SupportDatum, samples: usize, seed: u64, max_frame: usize) -> Result<bool> {
    if !check_complements(d).ok {
        return Ok(false);
    }
    Ok(construct_eta(d, samples, seed, max_frame)?.eta().is_some())
}

/// The datum of a ring with finite spectrum: `γ` sends a Thomason set to
/// itself in the Boolean algebra of subsets of `Spec R`.
pub fn datum_from_ring(ring: &BaseRing) -> Result<SupportDatum> {
    let sp = spec(ring);
    let space = sp
        .space()
        .ok_or_else(|| Error::input(format!("{ring} has an infinite spectrum")))?
        .clone();
    let bousfield = FiniteFrame::powerset(space.order().elements())?;
    let t = thomason_frame(&space);
    let map = t
        .sets()
        .expect("set frame")
        .iter()
        .map(|&v| bousfield.index_of_set(v).expect("powerset"))
        .collect();
    SupportDatum::new(space, bousfield, map)
}

/// Every complemented datum over `x` with target `b`.
pub fn complemented_data(x: &SpectralSpace, b: &FiniteFrame) -> Result<Vec<SupportDatum>> {
    let t = thomason_frame(x);
    enumerate_frame_homs(&t, b)
        .into_iter()
        .filter(|m| m.iter().all(|&y| b.is_complemented(y)))
        .map(|m| SupportDatum::new(x.clone(), b.clone(), m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::DEFAULT_MAX_FRAME;
    use crate::poset::enumerate_all_up_to;

    fn chain2() -> SpectralSpace {
        SpectralSpace::new(FinitePoset::chain(&["g", "m"]))
    }

    fn up_set_frame(x: &SpectralSpace) -> FiniteFrame {
        FiniteFrame::from_subsets(x.order().elements(), &x.order().up_sets()).unwrap()
    }

    #[test]
    fn thomason_frames() {
        assert_eq!(thomason_frame(&chain2()).len(), 3);
        let a2 = SpectralSpace::new(FinitePoset::antichain(&["a", "b"]));
        assert!(thomason_frame(&a2).is_boolean() && thomason_frame(&a2).len() == 4);
        let v = SpectralSpace::new(FinitePoset::from_pairs(&["g", "m1", "m2"], &[("g", "m1"), ("g", "m2")]).unwrap());
        assert_eq!(thomason_frame(&v).len(), 5);
        for p in enumerate_all_up_to(4).unwrap() {
            let x = SpectralSpace::new(p);
            assert_eq!(thomason_frame(&x), up_set_frame(&x));
        }
    }

    #[test]
    fn chain2_factorises_bijectively() {
        let x = chain2();
        let b = FiniteFrame::powerset(x.order().elements()).unwrap();
        let t = thomason_frame(&x);
        let map = t.sets().unwrap().iter().map(|&v| b.index_of_set(v).unwrap()).collect();
        let d = SupportDatum::new(x, b, map).unwrap();
        assert!(check_complements(&d).ok);
        let out = construct_eta(&d, DEFAULT_COVER_SAMPLES, 1, DEFAULT_MAX_FRAME).unwrap();
        let eta = out.eta().unwrap();
        assert!(eta.hom.is_bijective());
        assert_eq!(eta.unique, Some(true));
        assert!(eta.assembly_agrees);
    }

    #[test]
    fn non_complemented_image_is_reported() {
        let x = chain2();
        // γ = identity onto the 3-chain: γ({m}) has no complement
        let t = thomason_frame(&x);
        let d = SupportDatum::new(x, t.clone(), (0..t.len()).collect()).unwrap();
        let r = check_complements(&d);
        assert!(!r.ok);
        assert_eq!(r.witness, Some(vec!["m".to_string()]));
        assert!(!is_supportive(&d, 5, 0, DEFAULT_MAX_FRAME).unwrap());
        assert!(construct_eta(&d, 5, 0, DEFAULT_MAX_FRAME).is_err());
    }

    #[test]
    fn one_point_space() {
        let x = SpectralSpace::new(FinitePoset::antichain(&["m"]));
        let b = FiniteFrame::chain(2).unwrap();
        let t = thomason_frame(&x);
        let map = t.sets().unwrap().iter().map(|&m| usize::from(m != 0)).collect();
        let d = SupportDatum::new(x, b, map).unwrap();
        assert!(check_complements(&d).ok);
        assert!(is_supportive(&d, 10, 0, DEFAULT_MAX_FRAME).unwrap());
    }

    #[test]
    fn non_homomorphisms_are_rejected_at_construction() {
        let x = SpectralSpace::new(FinitePoset::antichain(&["a", "b"]));
        let b = FiniteFrame::chain(2).unwrap();
        // {a} and {b} both to 1 breaks 0 = γ({a} ∧ {b})
        let t = thomason_frame(&x);
        let map: Vec<usize> = t.sets().unwrap().iter().map(|&m| usize::from(m != 0)).collect();
        assert!(SupportDatum::new(x, b, map).is_err());
    }

    #[test]
    fn wrong_recorded_complements_are_caught() {
        let x = chain2();
        let b = FiniteFrame::powerset(x.order().elements()).unwrap();
        let t = thomason_frame(&x);
        let map: Vec<usize> = t.sets().unwrap().iter().map(|&v| b.index_of_set(v).unwrap()).collect();
        let comps = vec![b.top(); map.len()];
        let d = SupportDatum::with_complements(x, b, map, comps).unwrap();
        assert!(!check_complements(&d).ok);
    }

    #[test]
    fn ring_data_are_supportive() {
        for ring in [
            BaseRing::modular(12).unwrap(),
            BaseRing::modular(30).unwrap(),
            BaseRing::local_nilpotent(2, vec![2, 3]).unwrap(),
            BaseRing::local_integers(3).unwrap(),
        ] {
            let d = datum_from_ring(&ring).unwrap();
            let eta = construct_eta(&d, 20, 3, DEFAULT_MAX_FRAME).unwrap();
            let eta = eta.eta().expect("factorisation");
            assert_eq!(eta.unique, Some(true));
            assert!(eta.assembly_agrees);
        }
        assert!(datum_from_ring(&BaseRing::integers()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = datum_from_ring(&BaseRing::local_integers(2).unwrap()).unwrap();
        let j = d.to_json();
        let back = SupportDatum::from_json(&j).unwrap();
        assert_eq!(back.to_json(), j);
        assert!(is_supportive(&back, 10, 0, DEFAULT_MAX_FRAME).unwrap());
        let text = serde_json::to_string(&j).unwrap();
        let parsed: DatumJson = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, j);
    }
}
