//! Five characterisations of weak scatteredness, computed separately.

use serde::Serialize;

use super::{frame_of, sigma};
use crate::bits::{self, Mask};
use crate::spectral::SpectralSpace;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeaklyScatteredReport {
    /// `σ: N(F(X)) → F(Sk X)` is an isomorphism.
    pub sigma_iso: bool,
    /// Every nonempty closed set has a weakly isolated point.
    pub closed_has_weakly_isolated: bool,
    /// Every closed set is the closure of its weakly isolated points.
    pub closure_of_weakly_isolated: bool,
    /// Every open `V ≠ X` has an essential prime in `F(X)`.
    pub open_has_essential_prime: bool,
    /// Every element of `F(X)` is the meet of its essential primes.
    pub meet_of_essential_primes: bool,
}

impl WeaklyScatteredReport {
    pub fn all_agree(&self) -> bool {
        let v = [
            self.sigma_iso,
            self.closed_has_weakly_isolated,
            self.closure_of_weakly_isolated,
            self.open_has_essential_prime,
            self.meet_of_essential_primes,
        ];
        v.iter().all(|&b| b == v[0])
    }
}

pub fn weakly_scattered_conditions(x: &SpectralSpace, max_frame: usize) -> Result<WeaklyScatteredReport> {
    let sigma_iso = sigma(x, max_frame)?.is_isomorphism;

    let f = frame_of(x);
    let opens: Vec<Mask> = f.sets().expect("open frame").to_vec();
    let all = x.all();
    // closed sets are complements of opens; closure of a point is its up-set
    let closeds: Vec<Mask> = opens.iter().map(|&v| all & !v).collect();
    let up = |p: usize| x.order().up_mask(p);
    let weakly_isolated = |s: Mask| -> Mask {
        bits::members(s)
            .filter(|&p| {
                opens
                    .iter()
                    .any(|&v| bits::contains(v, p) && (v & s) & !up(p) == 0)
            })
            .fold(0, |acc, p| acc | bits::singleton(p))
    };
    let closed_has_weakly_isolated = closeds
        .iter()
        .filter(|&&c| c != 0)
        .all(|&c| weakly_isolated(c) != 0);
    let closure_of_weakly_isolated = closeds.iter().all(|&c| {
        let cl = bits::members(weakly_isolated(c)).fold(0, |acc, p| acc | up(p));
        cl == c
    });

    let open_has_essential_prime =
        (0..f.len()).filter(|&v| v != f.top()).all(|v| !f.essential_primes(v).is_empty());
    let meet_of_essential_primes =
        (0..f.len()).all(|v| f.meet_all(f.essential_primes(v)) == v);

    Ok(WeaklyScatteredReport {
        sigma_iso,
        closed_has_weakly_isolated,
        closure_of_weakly_isolated,
        open_has_essential_prime,
        meet_of_essential_primes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::enumerate_all_up_to;

    #[test]
    fn finite_spaces_satisfy_all_five() {
        for p in enumerate_all_up_to(4).unwrap() {
            let r = weakly_scattered_conditions(&SpectralSpace::new(p), 16).unwrap();
            assert!(r.all_agree() && r.sigma_iso, "{r:?}");
        }
    }
}
