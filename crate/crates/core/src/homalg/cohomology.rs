//! Cohomology of complexes in canonical form.
//!
//! Finitely presented terms are handled by the Smith normal form: with
//! `Z = { z : d z ∈ im P_{i+1} }` and `B = im d + im P_i` expressed in a
//! basis of `Z`, the invariant factors of `B ⊆ Z` give `H^i`.
//!
//! Tagged blocks (extra primes inverted) are handled one prime `q` at a
//! time. Localised at `q`, blocks whose tag contains `q` become `ℚ`-vector
//! spaces and form a subcomplex `C_K`; the rest form a quotient `C_A` of
//! finitely generated `ℤ_(q)`-modules. With `δ: H^i(C_A) → H^{i+1}(C_K)` of
//! rational rank `s_i`, the long exact sequence splits (divisible kernel)
//! and gives
//!
//! ```text
//! H^i(C)_(q) ≅ ℤ_(q)^{a_i − s_i} ⊕ ℚ^{m_i − s_{i−1}} ⊕ ℤ(q^∞)^{s_{i−1}} ⊕ tors_q H^i(C_A)
//! ```
//!
//! where `a_i` is the free rank of `H^i(C_A)` and `m_i = dim H^i(C_K)`.
//! At primes outside every tag the complex agrees with the untagged one.

use num_bigint::BigInt;

use super::arith;
use super::complex::ChainComplex;
use super::fp::FpMatrix;
use super::matrix::{image_basis, kernel, smith_normal_form, solve_full_rank, Matrix};
use super::module::{AbelianForm, ModuleForm, NilForm};
use super::ring::{BaseRing, PrimeSet};
use crate::Result;

/// `ℤ^{free} ⊕ ⨁ ℤ/factors`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ZGroup {
    pub free: usize,
    pub factors: Vec<BigInt>,
}

/// Cohomology at the middle of `ℤ^{g_{i−1}} → ℤ^{g_i} → ℤ^{g_{i+1}}`
/// modulo the relation matrices `p_i`, `p_next`.
pub(crate) fn z_homology(d_in: &Matrix, d_out: &Matrix, p_i: &Matrix, p_next: &Matrix) -> ZGroup {
    let g = p_i.rows();
    if g == 0 {
        return ZGroup { free: 0, factors: vec![] };
    }
    let m = Matrix::hstack(d_out.rows(), &[d_out, p_next]);
    let cycles = kernel(&m).top_rows(g);
    let bz = image_basis(&cycles);
    if bz.cols() == 0 {
        return ZGroup { free: 0, factors: vec![] };
    }
    let bgen = Matrix::hstack(g, &[d_in, p_i]);
    let x = solve_full_rank(&bz, &bgen).expect("boundaries and relations are cycles");
    let s = smith_normal_form(&x);
    ZGroup {
        free: bz.cols() - s.rank,
        factors: s.nonunit_factors(),
    }
}

fn push_factors(form: &mut AbelianForm, factors: &[BigInt], keep: impl Fn(u64) -> bool) -> Result<()> {
    for f in factors {
        for (p, e) in arith::factor_big(f)? {
            if keep(p) {
                form.push_torsion(p, e);
            }
        }
    }
    Ok(())
}

/// `H^i(C)` in canonical form.
pub fn cohomology(c: &ChainComplex, i: i64) -> Result<ModuleForm> {
    match c.ring() {
        BaseRing::LocalNilpotent { .. } => Ok(ModuleForm::Nilpotent(nil_cohomology(c, i))),
        BaseRing::Modular { .. } => {
            let z = z_homology(&c.diff(i - 1), &c.diff(i), &c.full_relations(i), &c.full_relations(i + 1));
            debug_assert_eq!(z.free, 0);
            let mut form = AbelianForm::default();
            push_factors(&mut form, &z.factors, |_| true)?;
            Ok(ModuleForm::Abelian(form))
        }
        BaseRing::Integers { inverted } => Ok(ModuleForm::Abelian(integral_cohomology(c, i, inverted)?)),
    }
}

/// All cohomology groups, in degree order.
pub fn cohomology_all(c: &ChainComplex) -> Result<Vec<(i64, ModuleForm)>> {
    c.degrees().map(|i| Ok((i, cohomology(c, i)?))).collect()
}

pub fn is_acyclic(c: &ChainComplex) -> Result<bool> {
    for i in c.degrees() {
        if !cohomology(c, i)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn integral_cohomology(c: &ChainComplex, i: i64, inverted: &PrimeSet) -> Result<AbelianForm> {
    let base = z_homology(&c.diff(i - 1), &c.diff(i), &c.relations(i), &c.relations(i + 1));
    let mut form = AbelianForm {
        rank: base.free,
        ..Default::default()
    };
    let tags: Vec<u64> = c.tag_primes().into_iter().filter(|&q| !inverted.contains(q)).collect();
    push_factors(&mut form, &base.factors, |p| !inverted.contains(p) && !tags.contains(&p))?;
    for q in tags {
        let local = local_at_tag_prime(c, i, q)?;
        debug_assert_eq!(local.free + local.divisible, form.rank, "local ranks at {q}");
        for e in local.torsion {
            form.push_torsion(q, e);
        }
        if local.divisible > 0 {
            form.divisible.insert(q, local.divisible);
        }
        if local.prufer > 0 {
            form.prufer.insert(q, local.prufer);
        }
    }
    Ok(form)
}

#[derive(Debug)]
struct LocalForm {
    free: usize,
    divisible: usize,
    prufer: usize,
    torsion: Vec<u32>,
}

/// Generator and relation-column indices of the blocks of degree `j`,
/// split by whether the block's tag contains `q`.
struct Split {
    a_gens: Vec<usize>,
    k_gens: Vec<usize>,
    a_rels: Vec<usize>,
    k_rels: Vec<usize>,
}

fn split(c: &ChainComplex, j: i64, q: u64) -> Split {
    let mut s = Split {
        a_gens: vec![],
        k_gens: vec![],
        a_rels: vec![],
        k_rels: vec![],
    };
    let (mut g, mut r) = (0, 0);
    for b in c.blocks(j) {
        let inv = b.tag.contains(&q);
        let (gens, rels) = if inv {
            (&mut s.k_gens, &mut s.k_rels)
        } else {
            (&mut s.a_gens, &mut s.a_rels)
        };
        gens.extend(g..g + b.gens);
        rels.extend(r..r + b.rel.cols());
        g += b.gens;
        r += b.rel.cols();
    }
    s
}

fn local_at_tag_prime(c: &ChainComplex, i: i64, q: u64) -> Result<LocalForm> {
    let sp = |j: i64| split(c, j, q);
    let d = |j: i64, rows: &[usize], cols: &[usize]| c.diff(j).select(rows, cols);
    let rel = |j: i64, rows: &[usize], cols: &[usize]| c.relations(j).select(rows, cols);

    let (s_prev, s_i, s_next) = (sp(i - 1), sp(i), sp(i + 1));

    // H^i(C_A) over ℤ, read at q
    let ha = z_homology(
        &d(i - 1, &s_i.a_gens, &s_prev.a_gens),
        &d(i, &s_next.a_gens, &s_i.a_gens),
        &rel(i, &s_i.a_gens, &s_i.a_rels),
        &rel(i + 1, &s_next.a_gens, &s_next.a_rels),
    );
    let mut torsion = Vec::new();
    for f in &ha.factors {
        for (p, e) in arith::factor_big(f)? {
            if p == q {
                torsion.push(e);
            }
        }
    }
    torsion.sort_unstable();

    // dim_ℚ H^i(C_K)
    let kk = |j: i64, sj: &Split, sn: &Split| d(j, &sn.k_gens, &sj.k_gens);
    let pk = |j: i64, sj: &Split| rel(j, &sj.k_gens, &sj.k_rels);
    let m_i = {
        let out = Matrix::hstack(s_next.k_gens.len(), &[&kk(i, &s_i, &s_next), &pk(i + 1, &s_next)]);
        let inn = Matrix::hstack(s_i.k_gens.len(), &[&kk(i - 1, &s_prev, &s_i), &pk(i, &s_i)]);
        s_i.k_gens.len() + pk(i + 1, &s_next).rank() - out.rank() - inn.rank()
    };

    // rational rank of δ_j: H^j(C_A) → H^{j+1}(C_K)
    let delta_rank = |j: i64| -> usize {
        let (sj, sn) = (sp(j), sp(j + 1));
        let aa = d(j, &sn.a_gens, &sj.a_gens);
        let pa = rel(j + 1, &sn.a_gens, &sn.a_rels);
        let cyc = kernel(&Matrix::hstack(sn.a_gens.len(), &[&aa, &pa])).top_rows(sj.a_gens.len());
        let ka = d(j, &sn.k_gens, &sj.a_gens);
        let img = ka.mul(&cyc);
        let kkj = kk(j, &sj, &sn);
        let pkn = pk(j + 1, &sn);
        let rows = sn.k_gens.len();
        Matrix::hstack(rows, &[&img, &kkj, &pkn]).rank() - Matrix::hstack(rows, &[&kkj, &pkn]).rank()
    };
    let (s_im1, s_i_rank) = (delta_rank(i - 1), delta_rank(i));
    Ok(LocalForm {
        free: ha.free - s_i_rank,
        divisible: m_i - s_im1,
        prufer: s_im1,
        torsion,
    })
}

fn nil_cohomology(c: &ChainComplex, i: i64) -> NilForm {
    let BaseRing::LocalNilpotent { p, exponents } = c.ring() else {
        unreachable!()
    };
    let z = c.nil_diff(i).kernel();
    let b = c.nil_diff(i - 1);
    let rb = b.rank();
    let dim = z.cols() - rb;
    let term = c.nil_term(i);
    let ranks = term
        .actions
        .iter()
        .zip(exponents)
        .map(|(a, &e)| {
            (1..e)
                .map(|j| {
                    let img = a.pow(j).mul(&z);
                    FpMatrix::hstack(*p, term.dim, &[&img, &b]).rank() - rb
                })
                .collect()
        })
        .collect();
    NilForm { dim, ranks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::module::Block;

    fn form(c: &ChainComplex, i: i64) -> String {
        cohomology(c, i).unwrap().to_string()
    }

    #[test]
    fn multiplication_by_two() {
        let c = ChainComplex::abelian(
            BaseRing::integers(),
            0,
            vec![vec![Block::free(1)], vec![Block::free(1)]],
            vec![Matrix::from_i64(&[&[2]])],
        )
        .unwrap();
        assert_eq!(form(&c, 0), "0");
        assert_eq!(form(&c, 1), "Z/2");
    }

    #[test]
    fn identity_complex_is_exact() {
        let c = ChainComplex::abelian(
            BaseRing::integers(),
            0,
            vec![vec![Block::free(2)], vec![Block::free(2)]],
            vec![Matrix::identity(2)],
        )
        .unwrap();
        assert!(is_acyclic(&c).unwrap());
    }

    #[test]
    fn module_in_degree_zero() {
        let c = ChainComplex::abelian(BaseRing::integers(), 0, vec![vec![Block::cyclic(&[6, 0])]], vec![]).unwrap();
        assert_eq!(form(&c, 0), "Z + Z/2 + Z/3");
        let local = c.with_ring(BaseRing::local_integers(2).unwrap()).unwrap();
        assert_eq!(form(&local, 0), "Z + Z/2");
        let m12 = ChainComplex::abelian(BaseRing::modular(12).unwrap(), 0, vec![vec![Block::free(1)]], vec![])
            .unwrap();
        assert_eq!(form(&m12, 0), "Z/2^2 + Z/3");
    }

    #[test]
    fn prufer_from_a_tagged_block() {
        // Z → Z[1/2], the stable Koszul complex on 2
        let c = ChainComplex::abelian(
            BaseRing::integers(),
            0,
            vec![vec![Block::free(1)], vec![Block::free(1).with_tag([2].into())]],
            vec![Matrix::from_i64(&[&[1]])],
        )
        .unwrap();
        assert_eq!(form(&c, 0), "0");
        assert_eq!(form(&c, 1), "Z(2^inf)");
    }

    #[test]
    fn nilpotent_cohomology() {
        let r = BaseRing::local_nilpotent(2, vec![2]).unwrap();
        // R --x--> R has H^0 = (x) ≅ k and H^1 = R/(x) ≅ k
        let free = crate::homalg::module::NilModule::free(&r, 1);
        let x = free.actions[0].clone();
        let c = ChainComplex::nilpotent(r, 0, vec![free.clone(), free], vec![x]).unwrap();
        let h0 = cohomology(&c, 0).unwrap();
        let h1 = cohomology(&c, 1).unwrap();
        assert_eq!(h0, ModuleForm::Nilpotent(NilForm { dim: 1, ranks: vec![vec![0]] }));
        assert_eq!(h1, h0);
    }
}
