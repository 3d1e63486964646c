//! Seeded random bounded complexes.
//!
//! Differentials are built left to right: `d⁰` is random and each later
//! `dⁱ` has rows drawn from the left kernel of `dⁱ⁻¹`, so `d ∘ d = 0` holds
//! by construction. A quarter of the instances are cones of the identity,
//! which are acyclic, so that both sides of vanishing statements occur, and
//! a further share are square two-term complexes, whose cohomology is
//! usually torsion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::homalg::{kernel, BaseRing, Block, ChainComplex, ChainMap, FpMatrix, Matrix, NilModule, RingElement};
use crate::Result;

/// Entries of generated integer matrices lie in `[−ENTRY_BOUND, ENTRY_BOUND]`.
pub const ENTRY_BOUND: i64 = 10;
/// Moduli used for `ℤ/n` instances.
pub const MODULI: [u64; 5] = [4, 6, 8, 9, 12];
/// Maximal number of nonzero terms.
pub const MAX_LENGTH: usize = 4;

/// A family of rings to draw instances from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingClass {
    Integers,
    Modular(u64),
    /// `𝔽₂[x₁,x₂]/(x₁²,x₂³)`.
    Nilpotent,
}

impl RingClass {
    pub fn all() -> Vec<RingClass> {
        std::iter::once(RingClass::Integers)
            .chain(MODULI.iter().map(|&n| RingClass::Modular(n)))
            .chain(std::iter::once(RingClass::Nilpotent))
            .collect()
    }

    pub fn ring(&self) -> BaseRing {
        match self {
            RingClass::Integers => BaseRing::integers(),
            RingClass::Modular(n) => BaseRing::modular(*n).expect("valid modulus"),
            RingClass::Nilpotent => BaseRing::local_nilpotent(2, vec![2, 3]).expect("valid algebra"),
        }
    }

    pub fn label(&self) -> String {
        self.ring().to_string()
    }

    /// Stream offset so that each class gets its own random sequence.
    fn stream(&self) -> u64 {
        match self {
            RingClass::Integers => 0,
            RingClass::Modular(n) => *n,
            RingClass::Nilpotent => 1,
        }
    }
}

/// `count` instances of `class`, reproducible from `seed`.
pub fn random_instances(class: &RingClass, seed: u64, count: usize) -> Result<Vec<ChainComplex>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(class.stream());
    (0..count).map(|_| random_complex(class, &mut rng)).collect()
}

pub fn random_complex<R: Rng>(class: &RingClass, rng: &mut R) -> Result<ChainComplex> {
    let ring = class.ring();
    let len = rng.gen_range(1..=MAX_LENGTH);
    let acyclic = len > 1 && rng.gen_ratio(1, 4);
    let len = if acyclic { len - 1 } else { len };
    let lo = rng.gen_range(-2..=1);
    let square = !acyclic && rng.gen_ratio(1, 3);
    let c = match class {
        RingClass::Integers if square => square_complex(ring, lo, None, rng)?,
        RingClass::Modular(n) if square => square_complex(ring, lo, Some(*n), rng)?,
        RingClass::Integers => integral(ring, lo, len, None, rng)?,
        RingClass::Modular(n) => integral(ring, lo, len, Some(*n), rng)?,
        RingClass::Nilpotent => nilpotent(ring, lo, len, rng)?,
    };
    if acyclic {
        c.cone(&c, &ChainMap::scalar(&c, 1))
    } else {
        Ok(c)
    }
}

fn integral<R: Rng>(ring: BaseRing, lo: i64, len: usize, n: Option<u64>, rng: &mut R) -> Result<ChainComplex> {
    let ranks: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=3)).collect();
    let mut diffs: Vec<Matrix> = Vec::new();
    for k in 0..len.saturating_sub(1) {
        let (rows, cols) = (ranks[k + 1], ranks[k]);
        let d = match diffs.last() {
            None => random_matrix(rows, cols, n, rng),
            Some(prev) => left_kernel_rows(prev, rows, n, rng),
        };
        diffs.push(d);
    }
    let terms = ranks.iter().map(|&r| vec![Block::free(r)]).collect();
    ChainComplex::abelian(ring, lo, terms, diffs)
}

fn square_complex<R: Rng>(ring: BaseRing, lo: i64, n: Option<u64>, rng: &mut R) -> Result<ChainComplex> {
    let r = rng.gen_range(1..=3);
    let d = random_matrix(r, r, n, rng);
    ChainComplex::abelian(ring, lo, vec![vec![Block::free(r)], vec![Block::free(r)]], vec![d])
}

fn reduce(x: i64, n: Option<u64>) -> i64 {
    match n {
        None => x,
        Some(n) => {
            let n = n as i64;
            let r = x.rem_euclid(n);
            if r > n / 2 {
                r - n
            } else {
                r
            }
        }
    }
}

fn random_matrix<R: Rng>(rows: usize, cols: usize, n: Option<u64>, rng: &mut R) -> Matrix {
    let sparse = rng.gen_bool(0.5);
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if sparse && rng.gen_bool(0.5) {
                        0
                    } else {
                        reduce(rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND), n)
                    }
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows, cols, &data)
}

/// Rows `r` with `r · prev ≡ 0`, as small combinations of a kernel basis.
fn left_kernel_rows<R: Rng>(prev: &Matrix, rows: usize, n: Option<u64>, rng: &mut R) -> Matrix {
    let cols = prev.rows();
    let t = prev.transpose();
    let basis = match n {
        None => kernel(&t),
        Some(n) => {
            let sys = Matrix::hstack(t.rows(), &[&t, &Matrix::scalar(t.rows(), BigInt::from(n))]);
            kernel(&sys).top_rows(cols)
        }
    };
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| {
            let mut row = vec![BigInt::from(0); cols];
            for j in 0..basis.cols() {
                let c: i64 = *[-1, 0, 0, 1].choose(rng).expect("nonempty");
                for (i, x) in row.iter_mut().enumerate() {
                    *x += &basis[(i, j)] * c;
                }
            }
            let row: Vec<i64> = row
                .into_iter()
                .map(|x| match n {
                    None => x.to_i64().unwrap_or(i64::MAX),
                    Some(n) => reduce(x.mod_floor(&BigInt::from(n)).to_i64().expect("small"), Some(n)),
                })
                .collect();
            if row.iter().all(|x| x.abs() <= ENTRY_BOUND) {
                row
            } else {
                vec![0; cols]
            }
        })
        .collect();
    Matrix::from_rows(rows, cols, &data)
}

fn nilpotent<R: Rng>(ring: BaseRing, lo: i64, len: usize, rng: &mut R) -> Result<ChainComplex> {
    let BaseRing::LocalNilpotent { p, exponents } = &ring else {
        unreachable!("nilpotent class")
    };
    let p = *p;
    let dim: usize = exponents.iter().map(|&e| e as usize).product();
    let one = NilModule::free(&ring, 1);
    let mult = |coeffs: &[u64]| -> Result<FpMatrix> { one.action_of(&ring, &RingElement::Poly(coeffs.to_vec())) };
    // an R-matrix as the F_p-matrix of R^cols → R^rows
    let realise = |m: &[Vec<Vec<u64>>], rows: usize, cols: usize| -> Result<FpMatrix> {
        let mut out = FpMatrix::zeros(p, rows * dim, cols * dim);
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                out.set_block(i * dim, j * dim, &mult(x)?);
            }
        }
        Ok(out)
    };
    let ranks: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=2)).collect();
    let mut r_mats: Vec<Vec<Vec<Vec<u64>>>> = Vec::new();
    for k in 0..len.saturating_sub(1) {
        let (rows, cols) = (ranks[k + 1], ranks[k]);
        let m: Vec<Vec<Vec<u64>>> = match r_mats.last() {
            None => (0..rows)
                .map(|_| {
                    (0..cols)
                        .map(|_| (0..dim).map(|_| rng.gen_range(0..p)).collect())
                        .collect()
                })
                .collect(),
            Some(prev) => {
                // r ↦ r · prev, as an F_p-linear map R^cols → R^{prev cols}
                let prev_cols = ranks[k - 1];
                let transposed: Vec<Vec<Vec<u64>>> = (0..prev_cols)
                    .map(|l| (0..cols).map(|j| prev[j][l].clone()).collect())
                    .collect();
                let ker = realise(&transposed, prev_cols, cols)?.kernel();
                (0..rows)
                    .map(|_| {
                        let mut v = vec![0u64; cols * dim];
                        for b in 0..ker.cols() {
                            let c = rng.gen_range(0..p);
                            for (i, x) in v.iter_mut().enumerate() {
                                *x = (*x + c * ker.get(i, b)) % p;
                            }
                        }
                        v.chunks(dim).map(<[u64]>::to_vec).collect()
                    })
                    .collect()
            }
        };
        r_mats.push(m);
    }
    let terms = ranks.iter().map(|&r| NilModule::free(&ring, r)).collect();
    let diffs = r_mats
        .iter()
        .enumerate()
        .map(|(k, m)| realise(m, ranks[k + 1], ranks[k]))
        .collect::<Result<_>>()?;
    ChainComplex::nilpotent(ring, lo, terms, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::is_acyclic;

    #[test]
    fn instances_are_valid_and_reproducible() {
        for class in RingClass::all() {
            let a = random_instances(&class, 7, 25).unwrap();
            let b = random_instances(&class, 7, 25).unwrap();
            assert_eq!(a, b);
            assert!(a.iter().all(|c| c.len() <= 2 * MAX_LENGTH));
            assert!(a.iter().any(|c| is_acyclic(c).unwrap()));
            assert!(a.iter().any(|c| !is_acyclic(c).unwrap()));
        }
    }

    #[test]
    fn integer_entries_are_bounded() {
        let cs = random_instances(&RingClass::Integers, 3, 50).unwrap();
        for c in cs {
            for e in c.entries() {
                assert!(e.magnitude() <= &BigInt::from(ENTRY_BOUND).magnitude().clone());
            }
        }
    }
}
