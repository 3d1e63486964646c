//! Morphisms in the derived category of `ℤ/n`.
//!
//! `Hom_D(S, T[k])` is computed as `H^k Hom(P, T)` for a free resolution
//! `P → S`. The resolution is built from the top degree down: `P^j` is free
//! on generators of the cycles of the partial cone, so `cone(P → S)` is
//! exact in every degree that has been built. Since `T` is bounded, only
//! finitely many `P^j` contribute to any fixed `k`.

use num_bigint::BigInt;
use serde::Serialize;

use super::cohomology::{cohomology, is_acyclic};
use super::complex::ChainComplex;
use super::koszul::localize_complex;
use super::matrix::{image_basis, kernel, smith_normal_form, solve_full_rank, Matrix};
use super::module::{AbelianForm, Block, ModuleForm};
use super::ring::{BaseRing, Prime};
use super::arith;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HomVerdict {
    /// Every `Hom_D(S, T[k])` vanishes, not only those in the window.
    Vanishes,
    /// Some group in the window is nonzero.
    NonZero { degrees: Vec<i64> },
    /// The window is zero but that does not certify vanishing elsewhere.
    WindowInsufficient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomReport {
    pub window: (i64, i64),
    /// `(k, Hom_D(S, T[k]))` for `k` in the window.
    pub groups: Vec<(i64, AbelianForm)>,
    pub verdict: HomVerdict,
}

/// A free resolution `P → S`, stored from the top degree down.
struct Resolution {
    /// Degree of `ranks[0]`.
    top: i64,
    ranks: Vec<usize>,
    /// `dp[k]`: `P^{top−k} → P^{top−k+1}`.
    dp: Vec<Matrix>,
}

impl Resolution {
    fn rank(&self, j: i64) -> usize {
        let k = self.top - j;
        if k < 0 || k as usize >= self.ranks.len() {
            0
        } else {
            self.ranks[k as usize]
        }
    }

    fn d(&self, j: i64) -> Matrix {
        let k = self.top - j;
        if k < 0 || k as usize >= self.dp.len() {
            Matrix::zeros(self.rank(j + 1), self.rank(j))
        } else {
            self.dp[k as usize].clone()
        }
    }
}

fn resolve(s: &ChainComplex, n: u64, down_to: i64) -> Resolution {
    let nn = BigInt::from(n);
    let top = s.hi();
    let mut res = Resolution {
        top,
        ranks: vec![],
        dp: vec![],
    };
    // φ^j: P^j → S^j, kept for the next step
    let mut phi_next = Matrix::zeros(s.gens(top + 1), 0);
    let mut j = top;
    while j >= down_to {
        let a = res.rank(j + 1);
        let a2 = res.rank(j + 2);
        let g = s.gens(j);
        let g1 = s.gens(j + 1);
        let ps1 = s.relations(j + 1);
        let dp1 = res.d(j + 1);
        // unknowns (p, s, t₁, t₂, t₃): d_P p + n t₁ = 0, φ p + d_S s + P_S t₂ + n t₃ = 0
        let cols = a + g + a2 + ps1.cols() + g1;
        let mut m = Matrix::zeros(a2 + g1, cols);
        m.set_block(0, 0, &dp1);
        m.set_block(0, a + g, &Matrix::scalar(a2, nn.clone()));
        m.set_block(a2, 0, &phi_next);
        m.set_block(a2, a, &s.diff(j));
        m.set_block(a2, a + g + a2, &ps1);
        m.set_block(a2, a + g + a2 + ps1.cols(), &Matrix::scalar(g1, nn.clone()));
        let y = kernel(&m).top_rows(a + g);

        // relations of P^{j+1} ⊕ S^j, then minimal generators of Z = L / L₀
        let l0 = Matrix::block_diag(&[
            &Matrix::scalar(a, nn.clone()),
            &Matrix::hstack(g, &[&s.relations(j), &Matrix::scalar(g, nn.clone())]),
        ]);
        let lat = image_basis(&Matrix::hstack(a + g, &[&y, &l0]));
        let x = solve_full_rank(&lat, &l0).expect("L₀ ⊆ L");
        let snf = smith_normal_form(&x);
        let basis = lat.mul(&snf.u_inv);
        let keep: Vec<usize> = (0..basis.cols())
            .filter(|&c| c >= snf.rank || !snf.diag[c].is_one_big())
            .collect();
        let gens = basis
            .select(&(0..a + g).collect::<Vec<_>>(), &keep)
            .reduce_mod(&nn);
        let r = keep.len();
        let p_rows: Vec<usize> = (0..a).collect();
        let s_rows: Vec<usize> = (a..a + g).collect();
        let all: Vec<usize> = (0..r).collect();
        res.dp.push(gens.select(&p_rows, &all).neg());
        res.ranks.push(r);
        phi_next = gens.select(&s_rows, &all);
        j -= 1;
    }
    // dp[k] was pushed at degree top−k as the map P^{top−k} → P^{top−k+1}
    res
}

trait IsOneBig {
    fn is_one_big(&self) -> bool;
}

impl IsOneBig for BigInt {
    fn is_one_big(&self) -> bool {
        *self == BigInt::from(1)
    }
}

/// `Hom(P, T)` in degrees `k_lo..=k_hi`, as a complex over `ℤ/n`.
fn hom_complex(p: &Resolution, t: &ChainComplex, k_lo: i64, k_hi: i64) -> Result<ChainComplex> {
    // the summands of Hom^k: (j, rank P^j, T^{j+k})
    let summands = |k: i64| -> Vec<i64> {
        (t.lo() - k..=t.hi() - k)
            .filter(|&j| p.rank(j) > 0 && t.gens(j + k) > 0)
            .collect()
    };
    let offsets = |k: i64| -> Vec<(i64, usize)> {
        let mut off = 0;
        summands(k)
            .into_iter()
            .map(|j| {
                let o = off;
                off += p.rank(j) * t.gens(j + k);
                (j, o)
            })
            .collect()
    };
    let width = |k: i64| -> usize { summands(k).iter().map(|&j| p.rank(j) * t.gens(j + k)).sum() };

    let terms: Vec<Vec<Block>> = (k_lo..=k_hi)
        .map(|k| {
            summands(k)
                .into_iter()
                .flat_map(|j| {
                    let rel = t.relations(j + k);
                    (0..p.rank(j)).map(move |_| Block::new(rel.clone()))
                })
                .collect()
        })
        .collect();
    let sign = |k: i64| if k.rem_euclid(2) == 0 { BigInt::from(-1) } else { BigInt::from(1) };
    let diffs = (k_lo..k_hi)
        .map(|k| {
            let (src, dst) = (offsets(k), offsets(k + 1));
            let mut d = Matrix::zeros(width(k + 1), width(k));
            for &(j, o_dst) in &dst {
                let h = t.gens(j + k + 1);
                let a = p.rank(j);
                // d_T ∘ f_j
                if let Some(&(_, o_src)) = src.iter().find(|&&(js, _)| js == j) {
                    let dt = t.diff(j + k);
                    let hs = t.gens(j + k);
                    for c in 0..a {
                        d.set_block(o_dst + c * h, o_src + c * hs, &dt);
                    }
                }
                // −(−1)^k f_{j+1} ∘ d_P
                if let Some(&(_, o_src)) = src.iter().find(|&&(js, _)| js == j + 1) {
                    let dp = p.d(j);
                    let a1 = p.rank(j + 1);
                    for c in 0..a {
                        for r in 0..a1 {
                            let coef = &dp[(r, c)] * sign(k);
                            if coef == BigInt::from(0) {
                                continue;
                            }
                            for e in 0..h {
                                d[(o_dst + c * h + e, o_src + r * h + e)] += coef.clone();
                            }
                        }
                    }
                }
            }
            d
        })
        .collect();
    ChainComplex::abelian(t.ring().clone(), k_lo, terms, diffs)
}

/// `Hom_D(S, T[k])` for `k` in `window`, over `ℤ/n`.
///
/// Vanishing is reported only when certified: for every prime `p | n`,
/// `S_p` or `T_p` is acyclic. Otherwise a zero window yields
/// [`HomVerdict::WindowInsufficient`].
pub fn hom_complex_h0(s: &ChainComplex, t: &ChainComplex, window: (i64, i64)) -> Result<HomReport> {
    let BaseRing::Modular { n } = *s.ring() else {
        return Err(Error::input("derived Hom is provided over Z/n"));
    };
    if t.ring() != s.ring() {
        return Err(Error::input("both complexes must be over the same ring"));
    }
    let (k_lo, k_hi) = window;
    if k_hi < k_lo {
        return Err(Error::input("empty degree window"));
    }
    let res = resolve(s, n, t.lo() - k_hi - 1);
    let hom = hom_complex(&res, t, k_lo - 1, k_hi + 1)?;
    let mut groups = Vec::new();
    for k in k_lo..=k_hi {
        let ModuleForm::Abelian(a) = cohomology(&hom, k)? else {
            unreachable!("abelian ring")
        };
        groups.push((k, a));
    }
    let nonzero: Vec<i64> = groups.iter().filter(|(_, g)| !g.is_zero()).map(|(k, _)| *k).collect();
    let verdict = if !nonzero.is_empty() {
        HomVerdict::NonZero { degrees: nonzero }
    } else if separated(s, t, n)? {
        HomVerdict::Vanishes
    } else {
        HomVerdict::WindowInsufficient
    };
    Ok(HomReport {
        window,
        groups,
        verdict,
    })
}

fn separated(s: &ChainComplex, t: &ChainComplex, n: u64) -> Result<bool> {
    for (p, _) in arith::factor(n) {
        let q = Prime::Closed(p);
        if !is_acyclic(&localize_complex(s, &q)?)? && !is_acyclic(&localize_complex(t, &q)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: u64, a: i64, degree: i64) -> ChainComplex {
        ChainComplex::abelian(BaseRing::modular(n).unwrap(), degree, vec![vec![Block::cyclic(&[a])]], vec![])
            .unwrap()
    }

    #[test]
    fn orthogonal_idempotent_factors() {
        let r = hom_complex_h0(&cyclic(6, 2, 0), &cyclic(6, 3, 0), (-3, 3)).unwrap();
        assert_eq!(r.verdict, HomVerdict::Vanishes);
    }

    #[test]
    fn identity_of_z2_over_z4() {
        let r = hom_complex_h0(&cyclic(4, 2, 0), &cyclic(4, 2, 0), (0, 0)).unwrap();
        assert_eq!(r.verdict, HomVerdict::NonZero { degrees: vec![0] });
    }

    #[test]
    fn periodic_ext_of_z2_over_z4() {
        // Ext^k(ℤ/2, ℤ/2) = ℤ/2 for every k ≥ 0
        let r = hom_complex_h0(&cyclic(4, 2, 0), &cyclic(4, 2, 0), (-2, 3)).unwrap();
        let nz: Vec<i64> = r.groups.iter().filter(|(_, g)| !g.is_zero()).map(|(k, _)| *k).collect();
        assert_eq!(nz, vec![0, 1, 2, 3]);
        for (_, g) in r.groups.iter().filter(|(k, _)| *k >= 0) {
            assert_eq!(g.to_string(), "Z/2");
        }
        // T = ℤ/2 in degree −1: Hom(S, T[1]) = Ext¹
        let shifted = hom_complex_h0(&cyclic(4, 2, 0), &cyclic(4, 2, -1), (0, 0)).unwrap();
        assert_eq!(shifted.verdict, HomVerdict::NonZero { degrees: vec![0] });
        let ext_in_window = hom_complex_h0(&cyclic(4, 2, 0), &cyclic(4, 2, 0), (1, 1)).unwrap();
        assert_eq!(ext_in_window.verdict, HomVerdict::NonZero { degrees: vec![1] });
    }

    #[test]
    fn free_source_has_no_higher_ext() {
        let r = hom_complex_h0(&cyclic(4, 4, 0), &cyclic(4, 2, 0), (-2, 2)).unwrap();
        let nz: Vec<i64> = r.groups.iter().filter(|(_, g)| !g.is_zero()).map(|(k, _)| *k).collect();
        assert_eq!(nz, vec![0]);
    }
}
