//! The seeded acceptance battery.
//!
//! Every criterion is a pure function of [`SuiteConfig`]; reports carry no
//! timings so that equal configurations give byte-identical output.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::axioms::{complemented_data, construct_eta, datum_from_ring, SupportDatum};
use crate::frames::{assembly, frame_of, sigma, weakly_scattered_conditions, FiniteFrame};
use crate::homalg::{check_snf, cohomology, is_acyclic, smith_normal_form, BaseRing, ChainComplex, Matrix, Prime};
use crate::poset::{enumerate_all_up_to, enumerate_posets_bounded};
use crate::spectral::SpectralSpace;
use crate::support::random::{random_instances, RingClass};
use crate::support::{
    foxby_support, main1_property_suite, minimal_primes, small_support, small_support_exhaustive, spec,
    weakly_associated_cohomology,
};
use crate::homalg::weakly_associated_form;
use crate::{bits, Result};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_MAX_POSET: usize = 6;
pub const SNF_MATRICES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random complexes per ring class.
    pub samples: usize,
    /// Alternative covers per open set when checking `η`.
    pub cover_samples: usize,
    pub max_poset: usize,
    pub max_frame: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            cover_samples: crate::axioms::DEFAULT_COVER_SAMPLES,
            max_poset: DEFAULT_MAX_POSET,
            max_frame: crate::frames::DEFAULT_MAX_FRAME,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    /// Number of instances examined.
    pub checked: usize,
    /// First failure, or a short summary.
    pub detail: String,
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "nucleus count"),
    (2, "sigma isomorphism"),
    (3, "weakly scattered equivalences"),
    (4, "scattered equivalences"),
    (5, "Z(p) maximality"),
    (6, "vanishing"),
    (7, "Noetherian agreement"),
    (8, "weakly associated inclusion"),
    (9, "support properties"),
    (10, "eta factorization"),
    (11, "SNF self-check"),
    (12, "determinism"),
];

/// Runs criteria `1..=12` in order.
pub fn run_suite(cfg: &SuiteConfig) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, cfg)).collect()
}

pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .unwrap_or("unknown");
    let outcome = match id {
        1 => nucleus_count(cfg),
        2 => sigma_iso(cfg),
        3 => weakly_scattered(cfg),
        4 => scattered(cfg),
        5 => z_maximality(cfg),
        6 => vanishing(cfg),
        7 => noetherian(cfg),
        8 => weakly_associated(cfg),
        9 => support_properties(cfg),
        10 => eta_factorization(cfg),
        11 => snf_self_check(cfg),
        12 => determinism(cfg),
        _ => Err(crate::Error::input(format!("no criterion {id}"))),
    };
    match outcome {
        Ok(o) => CriterionResult {
            id,
            name,
            pass: o.failure.is_none(),
            checked: o.checked,
            detail: o.failure.unwrap_or_else(|| "ok".into()),
        },
        Err(e) => CriterionResult {
            id,
            name,
            pass: false,
            checked: 0,
            detail: e.to_string(),
        },
    }
}

/// Tallies checks and keeps the first failure.
#[derive(Default)]
struct Outcome {
    checked: usize,
    failure: Option<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }
}

fn small_spaces(max: usize) -> Result<Vec<SpectralSpace>> {
    Ok(enumerate_all_up_to(max)?.into_iter().map(SpectralSpace::new).collect())
}

fn label(x: &SpectralSpace) -> String {
    serde_json::to_string(&x.order().to_json()).expect("serialisable")
}

fn nucleus_count(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    for x in small_spaces(4)? {
        let n = assembly(&frame_of(&x), cfg.max_frame)?.nuclei().len();
        o.check(n == 1 << x.len(), || format!("{} has {n} nuclei", label(&x)));
    }
    Ok(o)
}

fn sigma_iso(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    for x in small_spaces(4)? {
        let ok = sigma(&x, cfg.max_frame)?.is_isomorphism;
        o.check(ok, || format!("sigma is not bijective for {}", label(&x)));
    }
    Ok(o)
}

fn weakly_scattered(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    for x in small_spaces(4)? {
        let r = weakly_scattered_conditions(&x, cfg.max_frame)?;
        o.check(r.all_agree(), || format!("{r:?} for {}", label(&x)));
    }
    Ok(o)
}

fn scattered(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    for x in small_spaces(4)? {
        let a = x.is_scattered();
        let b = x.is_weakly_scattered() && x.is_t_half();
        let c = x.cb_rank().is_some();
        let d = assembly(&frame_of(&x), cfg.max_frame)?.frame().is_boolean();
        o.check(a == b && b == c && c == d, || {
            format!("scattered={a} weakly+T1/2={b} cb={c} boolean={d} for {}", label(&x))
        });
    }
    Ok(o)
}

fn z_maximality(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    for n in 1..=cfg.max_poset {
        for p in enumerate_posets_bounded(n, cfg.max_poset)? {
            let x = SpectralSpace::new(p);
            let ts: Vec<u64> = x.thomason_sets().iter().map(|t| t.members()).collect();
            for i in 0..x.len() {
                let z = x.z_set_at(i).members();
                let ok = ts.contains(&z)
                    && !bits::contains(z, i)
                    && ts
                        .iter()
                        .filter(|&&v| !bits::contains(v, i))
                        .all(|&v| bits::is_subset(v, z));
                o.check(ok, || format!("Z({}) in {}", x.order().name(i), label(&x)));
            }
        }
    }
    Ok(o)
}

fn instances(cfg: &SuiteConfig, class: &RingClass) -> Result<Vec<ChainComplex>> {
    random_instances(class, cfg.seed, cfg.samples)
}

fn vanishing(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    for class in RingClass::all() {
        for (k, c) in instances(cfg, &class)?.iter().enumerate() {
            let s = small_support(c)?;
            let acyclic = is_acyclic(c)?;
            let exhaustive = small_support_exhaustive(c)?;
            o.check(s.is_empty() == acyclic && exhaustive == s, || {
                format!("{} instance {k}: supp {s}, exhaustive {exhaustive}, acyclic {acyclic}", class.label())
            });
        }
    }
    Ok(o)
}

fn noetherian(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    for (k, c) in instances(cfg, &RingClass::Integers)?.iter().enumerate() {
        let s = small_support(c)?;
        let f = foxby_support(c)?;
        o.check(s == f, || format!("Z instance {k}: supp {s}, Foxby {f}"));
    }
    Ok(o)
}

fn weakly_associated(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    for class in RingClass::all() {
        for (k, c) in instances(cfg, &class)?.iter().enumerate() {
            let s = small_support(c)?;
            let mut lowest: BTreeSet<Prime> = BTreeSet::new();
            for i in c.degrees() {
                let h = cohomology(c, i)?;
                if !h.is_zero() {
                    lowest = weakly_associated_form(&h);
                    break;
                }
            }
            let minimal = minimal_primes(&weakly_associated_cohomology(c)?);
            let ok = lowest.iter().chain(&minimal).all(|q| s.contains(q));
            o.check(ok, || {
                format!("{} instance {k}: Ass {lowest:?}, min Ass {minimal:?}, supp {s}", class.label())
            });
        }
    }
    Ok(o)
}

fn support_properties(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    for n in [6, 12] {
        let class = RingClass::Modular(n);
        let ring = class.ring();
        let points = spec(&ring).points().expect("finite").to_vec();
        let cs = instances(cfg, &class)?;
        for (k, c) in cs.iter().enumerate() {
            let c2 = &cs[(k + 1) % cs.len()];
            for mask in bits::powerset(points.len()) {
                let v: BTreeSet<Prime> = bits::members(mask).map(|i| points[i]).collect();
                let r = main1_property_suite(c, c2, &v)?;
                o.check(r.all_pass(), || format!("Z/{n} instance {k}, V = {v:?}: {r:?}"));
            }
        }
    }
    Ok(o)
}

/// Finite frames used as Bousfield-lattice models: the open-set frames of
/// all posets with at most three points, and the Boolean algebra on four.
fn target_frames() -> Result<Vec<FiniteFrame>> {
    let mut out: Vec<FiniteFrame> = small_spaces(3)?.iter().map(frame_of).collect();
    let four: Vec<String> = ["a", "b", "c", "d"].iter().map(ToString::to_string).collect();
    out.push(FiniteFrame::powerset(&four)?);
    Ok(out)
}

pub fn ring_data() -> Result<Vec<(String, SupportDatum)>> {
    let mut rings: Vec<BaseRing> = [2, 4, 6, 8, 9, 12, 30]
        .iter()
        .map(|&n| BaseRing::modular(n))
        .collect::<Result<_>>()?;
    rings.push(BaseRing::local_nilpotent(2, vec![2, 3])?);
    rings.push(BaseRing::local_integers(2)?);
    rings.push(BaseRing::local_integers(3)?);
    rings.push(BaseRing::rationals());
    rings
        .into_iter()
        .map(|r| Ok((r.to_string(), datum_from_ring(&r)?)))
        .collect()
}

fn eta_factorization(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let mut data = ring_data()?;
    let targets = target_frames()?;
    for x in small_spaces(3)? {
        for b in &targets {
            for d in complemented_data(&x, b)? {
                data.push((format!("{} -> {} elements", label(&x), b.len()), d));
            }
        }
    }
    for (k, (name, d)) in data.iter().enumerate() {
        let out = construct_eta(d, cfg.cover_samples, cfg.seed.wrapping_add(k as u64), cfg.max_frame)?;
        let ok = out
            .eta()
            .is_some_and(|e| e.unique == Some(true) && e.assembly_agrees);
        o.check(ok, || format!("datum {k} ({name}): {out:?}"));
    }
    Ok(o)
}

fn snf_self_check(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(11);
    for k in 0..SNF_MATRICES {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-50..=50)).collect()).collect();
        let a = Matrix::from_rows(r, c, &rows);
        let s = smith_normal_form(&a);
        o.check(check_snf(&a, &s), || format!("matrix {k}: {rows:?}"));
    }
    Ok(o)
}

/// Regenerates the seeded inputs and compares them with a second draw.
fn determinism(cfg: &SuiteConfig) -> Result<Outcome> {
    let mut o = Outcome::default();
    for class in RingClass::all() {
        let a = instances(cfg, &class)?;
        let b = instances(cfg, &class)?;
        let same = a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.to_json() == y.to_json());
        o.check(same, || format!("{} instances differ between draws", class.label()));
    }
    let a = render_tsv(cfg, &[run_criterion(11, cfg)]);
    let b = render_tsv(cfg, &[run_criterion(11, cfg)]);
    o.check(a == b, || "rendered reports differ".into());
    Ok(o)
}

#[derive(Serialize)]
struct SuiteJson<'a> {
    config: &'a SuiteConfig,
    criteria: &'a [CriterionResult],
    passed: usize,
    total: usize,
}

pub fn render_json(cfg: &SuiteConfig, results: &[CriterionResult]) -> String {
    let j = SuiteJson {
        config: cfg,
        criteria: results,
        passed: results.iter().filter(|r| r.pass).count(),
        total: results.len(),
    };
    serde_json::to_string_pretty(&j).expect("serialisable")
}

pub fn render_tsv(cfg: &SuiteConfig, results: &[CriterionResult]) -> String {
    let mut out = format!("# seed={} samples={}\n", cfg.seed, cfg.samples);
    out.push_str("id\tcriterion\tresult\tchecked\tdetail\n");
    for r in results {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            r.id,
            r.name,
            if r.pass { "PASS" } else { "FAIL" },
            r.checked,
            r.detail.replace(['\t', '\n'], " ")
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SuiteConfig {
        SuiteConfig {
            samples: 15,
            cover_samples: 5,
            max_poset: 4,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn quick_suite_passes() {
        let cfg = quick();
        for r in run_suite(&cfg) {
            assert!(r.pass, "{r:?}");
            assert!(r.checked > 0);
        }
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!run_criterion(13, &quick()).pass);
    }
}
