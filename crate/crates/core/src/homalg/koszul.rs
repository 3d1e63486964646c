//! Stable Koszul complexes, localisation at a prime, and derived tensor
//! products with residue fields.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::arith;
use super::cohomology::cohomology;
use super::complex::{ChainComplex, ChainMap};
use super::matrix::Matrix;
use super::module::{Block, NilModule};
use super::ring::{BaseRing, Prime, RingElement};
use crate::{Error, Result};

/// How `R → R_x` looks for a given ring and element.
enum Localisation {
    /// `R_x = 0`.
    Zero,
    /// `R_x = ℤ_S[1/T]`.
    Tag(BTreeSet<u64>),
    /// `R_x = ℤ/m`, realised by adding `m · I` to the relations.
    Quotient(BigInt),
    /// `x` is a unit of a local nilpotent algebra.
    Unit,
}

fn localisation(ring: &BaseRing, x: &RingElement) -> Result<Localisation> {
    match (ring, x) {
        (BaseRing::Integers { inverted }, RingElement::Int(v)) => {
            if v.is_zero() {
                return Ok(Localisation::Zero);
            }
            let tag = arith::prime_divisors_big(v)?
                .into_iter()
                .filter(|&p| !inverted.contains(p))
                .collect();
            Ok(Localisation::Tag(tag))
        }
        (BaseRing::Modular { n }, RingElement::Int(v)) => {
            let m: u64 = arith::factor(*n)
                .into_iter()
                .filter(|&(p, _)| !v.is_multiple_of(&BigInt::from(p)))
                .map(|(p, e)| p.pow(e))
                .product();
            Ok(Localisation::Quotient(BigInt::from(m)))
        }
        (BaseRing::LocalNilpotent { p, exponents }, RingElement::Poly(c)) => {
            let dim: usize = exponents.iter().map(|&e| e as usize).product();
            if c.len() != dim {
                return Err(Error::input(format!("expected {dim} coefficients, got {}", c.len())));
            }
            Ok(if c[0] % p == 0 {
                Localisation::Zero
            } else {
                Localisation::Unit
            })
        }
        _ => Err(Error::input(format!("element {x} does not belong to {ring}"))),
    }
}

/// `(R → R_x) ⊗ C`: degree `n` is `C^n ⊕ C_x^{n−1}` with
/// `d(c, c′) = (d c, c − d c′)`.
pub fn koszul_stable(c: &ChainComplex, x: &RingElement) -> Result<ChainComplex> {
    let loc = localisation(c.ring(), x)?;
    let cx = match loc {
        Localisation::Zero => return Ok(c.clone()),
        Localisation::Unit => c.clone(),
        Localisation::Tag(t) => c.map_blocks(c.ring().clone(), |b| {
            let mut b = b.clone();
            b.tag.extend(t.iter().copied());
            b
        })?,
        Localisation::Quotient(m) => c.map_blocks(c.ring().clone(), |b| b.with_modulus(&m))?,
    };
    // the cone of the localisation map C → C_x, shifted by one, has exactly
    // this shape: cone(f)^{n−1} = C^n ⊕ C_x^{n−1}
    let f = ChainMap::scalar(c, 1);
    let cone = c.cone(&cx, &f)?;
    // cone(f)[−1] has d(c, c′) = (d c, −(c + d c′)); flip the C_x summand
    Ok(flip_second_summand(&cone.shift(-1), c))
}

/// Negates the `C_x` coordinates so the differential reads `(d c, c − d c′)`.
fn flip_second_summand(k: &ChainComplex, c: &ChainComplex) -> ChainComplex {
    // The sign change is an isomorphism of complexes; it is applied to the
    // differential blocks directly.
    let lo = k.lo();
    let hi = k.hi();
    match c.ring().field_char() {
        None => {
            let terms: Vec<Vec<Block>> = (lo..=hi).map(|i| k.blocks(i).to_vec()).collect();
            let diffs = (lo..hi)
                .map(|i| {
                    let mut d = k.diff(i);
                    let (a, a2) = (c.gens(i), c.gens(i + 1));
                    for r in 0..d.rows() {
                        for col in 0..d.cols() {
                            if (r >= a2) != (col >= a) {
                                let v = -std::mem::take(&mut d[(r, col)]);
                                d[(r, col)] = v;
                            }
                        }
                    }
                    d
                })
                .collect();
            ChainComplex::abelian(c.ring().clone(), lo, terms, diffs).expect("isomorphic to a complex")
        }
        Some(p) => {
            let terms: Vec<NilModule> = (lo..=hi).map(|i| k.nil_term(i)).collect();
            let diffs = (lo..hi)
                .map(|i| {
                    let mut d = k.nil_diff(i);
                    let (a, a2) = (c.gens(i), c.gens(i + 1));
                    for r in 0..d.rows() {
                        for col in 0..d.cols() {
                            if (r >= a2) != (col >= a) {
                                d.set(r, col, (p - d.get(r, col)) % p);
                            }
                        }
                    }
                    d
                })
                .collect();
            ChainComplex::nilpotent(c.ring().clone(), lo, terms, diffs).expect("isomorphic to a complex")
        }
    }
}

/// `K∞(x₁) ⊗ ⋯ ⊗ K∞(x_k) ⊗ C`.
pub fn koszul_sequence(c: &ChainComplex, xs: &[RingElement]) -> Result<ChainComplex> {
    xs.iter().try_fold(c.clone(), |acc, x| koszul_stable(&acc, x))
}

/// `C_q`.
///
/// Over `ℤ_S` this inverts every prime except `q` (all primes for `(0)`);
/// over `ℤ/n` it projects onto the `q`-primary factor; a local nilpotent
/// algebra is already local.
pub fn localize_complex(c: &ChainComplex, q: &Prime) -> Result<ChainComplex> {
    if !c.ring().has_prime(q) {
        return Err(Error::input(format!("{q} is not a prime of {}", c.ring())));
    }
    match (c.ring(), q) {
        (BaseRing::Integers { .. }, Prime::Zero) => c.with_ring(BaseRing::rationals()),
        (BaseRing::Integers { .. }, Prime::Closed(p)) => c.with_ring(BaseRing::local_integers(*p)?),
        (BaseRing::Modular { n }, Prime::Closed(p)) => {
            let mut pv = 1;
            let mut m = *n;
            while m % p == 0 {
                m /= p;
                pv *= p;
            }
            let ring = BaseRing::modular(pv)?;
            let modulus = BigInt::from(pv);
            c.map_blocks(ring, |b| Block {
                gens: b.gens,
                rel: b.rel.reduce_mod(&modulus),
                tag: b.tag.clone(),
            })
        }
        _ => Ok(c.clone()),
    }
}

/// `C ⊗ R_W`: inverts a finite set of primes in a localisation of `ℤ`.
pub fn invert_primes(c: &ChainComplex, w: &BTreeSet<u64>) -> Result<ChainComplex> {
    let BaseRing::Integers { inverted } = c.ring() else {
        return Err(Error::input("inverting primes needs a localisation of Z"));
    };
    c.with_ring(BaseRing::localized(inverted.with(w))?)
}

/// `C ⊗^L k(𝔭)` as a minimal complex (zero differentials).
///
/// For `𝔭 = (q)` the flat resolution `ℤ --q--> ℤ` of `𝔽_q` turns this into the
/// cone of multiplication by `q`, whose cohomology is an `𝔽_q`-vector space
/// in each degree; the result lives over `ℤ/q`. For `(0)` the result is
/// `C ⊗ ℚ`, given over `ℚ`.
pub fn derived_tensor_residue(c: &ChainComplex, q: &Prime) -> Result<ChainComplex> {
    let BaseRing::Integers { inverted } = c.ring() else {
        return Err(Error::input("residue fields are provided for localisations of Z"));
    };
    if c.is_tagged() {
        return Err(Error::input("derived tensor with a residue field needs an untagged complex"));
    }
    if !c.ring().has_prime(q) {
        return Err(Error::input(format!("{q} is not a prime of {}", c.ring())));
    }
    let (ring, lo, dims): (BaseRing, i64, Vec<usize>) = match q {
        Prime::Zero => {
            let dims = c
                .degrees()
                .map(|i| Ok(cohomology(c, i)?.as_abelian().expect("abelian").rank))
                .collect::<Result<_>>()?;
            (BaseRing::rationals(), c.lo(), dims)
        }
        Prime::Closed(p) => {
            let cone = c.cone(c, &ChainMap::scalar(c, *p as i64))?;
            let dims = cone
                .degrees()
                .map(|i| {
                    let h = cohomology(&cone, i)?;
                    let a = h.as_abelian().expect("abelian");
                    debug_assert!(a.rank == 0 && a.torsion.iter().all(|&(t, e)| t == *p && e == 1));
                    debug_assert!(!inverted.contains(*p));
                    Ok(a.torsion.len())
                })
                .collect::<Result<_>>()?;
            (BaseRing::modular(*p)?, cone.lo(), dims)
        }
        Prime::Maximal => unreachable!("checked by has_prime"),
    };
    minimal_complex(ring, lo, &dims)
}

fn minimal_complex(ring: BaseRing, lo: i64, dims: &[usize]) -> Result<ChainComplex> {
    let terms: Vec<Vec<Block>> = dims.iter().map(|&d| vec![Block::free(d)]).collect();
    let diffs = dims
        .windows(2)
        .map(|w| Matrix::zeros(w[1], w[0]))
        .collect();
    ChainComplex::abelian(ring, lo, terms, diffs)
}

/// Dimension vector of a minimal complex over a field.
pub fn minimal_dims(c: &ChainComplex) -> Vec<(i64, usize)> {
    c.degrees().map(|i| (i, c.gens(i))).filter(|&(_, d)| d > 0).collect()
}

/// `C ⊗ ℤ/m` for a complex over `ℤ_S` or `ℤ/n`.
pub fn reduce_mod(c: &ChainComplex, m: u64) -> Result<ChainComplex> {
    let modulus = BigInt::from(m);
    c.map_blocks(c.ring().clone(), |b| b.with_modulus(&modulus))
}

/// Presentation entries as `u64` magnitudes, for candidate-prime searches.
pub(crate) fn entry_primes(c: &ChainComplex) -> Result<BTreeSet<u64>> {
    let mut out = BTreeSet::new();
    for e in c.entries() {
        if e.abs().to_u64() != Some(1) {
            out.extend(arith::prime_divisors_big(&e)?);
        }
    }
    if let BaseRing::Modular { n } = c.ring() {
        out.extend(arith::factor(*n).into_iter().map(|(p, _)| p));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::cohomology::{cohomology, is_acyclic};

    fn z_in_degree_zero(ring: BaseRing, orders: &[i64]) -> ChainComplex {
        let block = if orders.is_empty() { Block::free(1) } else { Block::cyclic(orders) };
        ChainComplex::abelian(ring, 0, vec![vec![block]], vec![]).unwrap()
    }

    #[test]
    fn koszul_on_two_over_integers() {
        let c = z_in_degree_zero(BaseRing::integers(), &[]);
        let k = koszul_stable(&c, &RingElement::int(2)).unwrap();
        assert_eq!(k.lo(), 0);
        assert_eq!(k.hi(), 1);
        assert!(cohomology(&k, 0).unwrap().is_zero());
        assert_eq!(cohomology(&k, 1).unwrap().to_string(), "Z(2^inf)");
    }

    #[test]
    fn koszul_on_a_unit_is_acyclic() {
        let c = z_in_degree_zero(BaseRing::integers(), &[6]);
        assert!(is_acyclic(&koszul_stable(&c, &RingElement::int(-1)).unwrap()).unwrap());
        let m = z_in_degree_zero(BaseRing::modular(6).unwrap(), &[]);
        assert!(is_acyclic(&koszul_stable(&m, &RingElement::int(5)).unwrap()).unwrap());
        let r = BaseRing::local_nilpotent(2, vec![2, 3]).unwrap();
        let free = NilModule::free(&r, 1);
        let n = ChainComplex::nilpotent(r, 0, vec![free], vec![]).unwrap();
        let mut one = vec![0; 6];
        one[0] = 1;
        one[1] = 1;
        assert!(is_acyclic(&koszul_stable(&n, &RingElement::Poly(one)).unwrap()).unwrap());
    }

    #[test]
    fn koszul_on_nilpotent_returns_input() {
        let r = BaseRing::local_nilpotent(2, vec![2, 3]).unwrap();
        let n = ChainComplex::nilpotent(r.clone(), 0, vec![NilModule::free(&r, 1)], vec![]).unwrap();
        let x = RingElement::generator(&r, 0).unwrap();
        assert_eq!(koszul_stable(&n, &x).unwrap(), n);
    }

    #[test]
    fn gamma_of_torsion_in_degree_zero() {
        // H^0(K∞(2) ⊗ (Z ⊕ Z/6)) is the 2-power torsion Z/2
        let c = z_in_degree_zero(BaseRing::integers(), &[6, 0]);
        let k = koszul_stable(&c, &RingElement::int(2)).unwrap();
        assert_eq!(cohomology(&k, 0).unwrap().to_string(), "Z/2");
        assert_eq!(cohomology(&k, 1).unwrap().to_string(), "Z(2^inf)");
    }

    #[test]
    fn localisation_examples() {
        let c = z_in_degree_zero(BaseRing::integers(), &[6]);
        let l = localize_complex(&c, &Prime::Closed(2)).unwrap();
        assert_eq!(cohomology(&l, 0).unwrap().to_string(), "Z/2");
        let m = z_in_degree_zero(BaseRing::modular(12).unwrap(), &[]);
        let l3 = localize_complex(&m, &Prime::Closed(3)).unwrap();
        assert_eq!(l3.ring(), &BaseRing::modular(3).unwrap());
        assert_eq!(cohomology(&l3, 0).unwrap().to_string(), "Z/3");
        let f = z_in_degree_zero(BaseRing::integers(), &[]);
        let lf = localize_complex(&f, &Prime::Closed(5)).unwrap();
        assert_eq!(cohomology(&lf, 0).unwrap().to_string(), "Z");
        assert!(localize_complex(&m, &Prime::Closed(5)).is_err());
    }

    #[test]
    fn residue_field_examples() {
        let c4 = z_in_degree_zero(BaseRing::integers(), &[4]);
        let r = derived_tensor_residue(&c4, &Prime::Closed(2)).unwrap();
        assert_eq!(minimal_dims(&r), vec![(-1, 1), (0, 1)]);
        let z = z_in_degree_zero(BaseRing::integers(), &[]);
        let q = derived_tensor_residue(&z, &Prime::Zero).unwrap();
        assert_eq!(minimal_dims(&q), vec![(0, 1)]);
        assert_eq!(q.ring(), &BaseRing::rationals());
        let c3 = z_in_degree_zero(BaseRing::integers(), &[3]);
        assert!(minimal_dims(&derived_tensor_residue(&c3, &Prime::Closed(2)).unwrap()).is_empty());
    }
}
