use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use tts_core::homalg::{
    check_snf, cohomology, koszul_sequence, koszul_stable, smith_normal_form, AbelianForm, BaseRing, Block, ChainComplex,
    Matrix, ModuleForm, RingElement,
};
use tts_core::support::random::{random_instances, RingClass};

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-12i64..=12, c), r))
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut total = BigInt::zero();
    for j in 0..m.len() {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * det(&minor);
        total = if j % 2 == 0 { total + term } else { total - term };
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// gcd of all k×k minors, the k-th determinantal divisor.
fn determinantal_divisor(a: &[Vec<i64>], k: usize) -> BigInt {
    let (r, c) = (a.len(), a[0].len());
    let mut g = BigInt::zero();
    for rows in subsets(r, k) {
        for cols in subsets(c, k) {
            let m: Vec<Vec<BigInt>> = rows.iter().map(|&i| cols.iter().map(|&j| BigInt::from(a[i][j])).collect()).collect();
            g = g.gcd(&det(&m));
        }
    }
    g
}

fn abelian(f: ModuleForm) -> AbelianForm {
    f.as_abelian().expect("abelian cohomology").clone()
}

fn add_forms(a: &AbelianForm, b: &AbelianForm) -> AbelianForm {
    let mut out = a.clone();
    out.rank += b.rank;
    out.torsion.extend(b.torsion.iter().copied());
    out.torsion.sort();
    for (q, k) in &b.divisible {
        *out.divisible.entry(*q).or_default() += k;
    }
    for (q, k) in &b.prufer {
        *out.prufer.entry(*q).or_default() += k;
    }
    out
}

fn one_instance(class: RingClass, seed: u64) -> ChainComplex {
    random_instances(&class, seed, 1).unwrap().pop().unwrap()
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_factorisation_holds(rows in matrix_strategy()) {
        let a = Matrix::from_rows(rows.len(), rows[0].len(), &rows);
        let s = smith_normal_form(&a);
        prop_assert!(check_snf(&a, &s));
        prop_assert_eq!(s.rank, a.rank());
    }

    #[test]
    fn snf_matches_determinantal_divisors(rows in matrix_strategy()) {
        let a = Matrix::from_rows(rows.len(), rows[0].len(), &rows);
        let s = smith_normal_form(&a);
        let mut prefix = BigInt::from(1);
        for k in 1..=rows.len().min(rows[0].len()) {
            prefix *= &s.diag[k - 1];
            prop_assert_eq!(prefix.abs(), determinantal_divisor(&rows, k), "k = {}", k);
        }
    }

    #[test]
    fn cohomology_is_additive(seed in any::<u64>(), other in any::<u64>(), n in prop::sample::select(vec![0u64, 4, 6, 12])) {
        let class = if n == 0 { RingClass::Integers } else { RingClass::Modular(n) };
        let c = one_instance(class.clone(), seed);
        let d = one_instance(class, other);
        let sum = c.direct_sum(&d).unwrap();
        for i in sum.lo().min(c.lo()).min(d.lo())..=sum.hi().max(c.hi()).max(d.hi()) {
            let expect = add_forms(&abelian(cohomology(&c, i).unwrap()), &abelian(cohomology(&d, i).unwrap()));
            prop_assert_eq!(abelian(cohomology(&sum, i).unwrap()), expect, "degree {}", i);
        }
    }

    #[test]
    fn koszul_order_is_irrelevant(seed in any::<u64>(), x in 2i64..=12, y in 2i64..=12) {
        let c = one_instance(RingClass::Integers, seed);
        let xy = koszul_sequence(&c, &[RingElement::int(x), RingElement::int(y)]).unwrap();
        let yx = koszul_sequence(&c, &[RingElement::int(y), RingElement::int(x)]).unwrap();
        for i in xy.lo().min(yx.lo())..=xy.hi().max(yx.hi()) {
            prop_assert_eq!(cohomology(&xy, i).unwrap(), cohomology(&yx, i).unwrap(), "degree {}", i);
        }
    }

    #[test]
    fn stable_koszul_h0_is_torsion(orders in prop::collection::vec(0i64..=36, 1..=3), x in 2i64..=30) {
        let ring = BaseRing::integers();
        let c = ChainComplex::abelian(ring, 0, vec![vec![Block::cyclic(&orders)]], vec![]).unwrap();
        let k = koszul_stable(&c, &RingElement::int(x)).unwrap();
        let xs: Vec<u64> = prime_factors(x as u64).into_iter().map(|(p, _)| p).collect();
        // Γ_x of ⊕ ℤ/aᵢ keeps the x-primary parts of the finite summands.
        let mut torsion: Vec<(u64, u32)> = orders
            .iter()
            .filter(|&&a| a > 1)
            .flat_map(|&a| prime_factors(a as u64))
            .filter(|(p, _)| xs.contains(p))
            .collect();
        torsion.sort();
        let h0 = abelian(cohomology(&k, 0).unwrap());
        prop_assert_eq!(h0.rank, 0);
        prop_assert_eq!(h0.torsion, torsion);
        prop_assert!(h0.divisible.is_empty());
    }

    #[test]
    fn shift_moves_cohomology(seed in any::<u64>(), k in -2i64..=2) {
        let c = one_instance(RingClass::Modular(12), seed);
        let s = c.shift(k);
        for i in c.lo()..=c.hi() {
            prop_assert_eq!(cohomology(&c, i).unwrap(), cohomology(&s, i - k).unwrap());
        }
    }
}
