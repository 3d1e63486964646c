//! Bitmask helpers for subsets of a finite set of at most 64 points.

/// Subset of `0..64`, bit `i` set iff point `i` is a member.
pub type Mask = u64;

pub const MAX_POINTS: usize = 64;

#[inline]
pub fn full(n: usize) -> Mask {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub fn contains(m: Mask, i: usize) -> bool {
    m >> i & 1 == 1
}

#[inline]
pub fn singleton(i: usize) -> Mask {
    1u64 << i
}

#[inline]
pub fn is_subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

pub fn members(m: Mask) -> impl Iterator<Item = usize> {
    let mut rest = m;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

/// All subsets of an `n`-point set, in increasing numeric order.
pub fn powerset(n: usize) -> impl Iterator<Item = Mask> {
    assert!(n < 64, "powerset of {n} points is not enumerable");
    0..(1u64 << n)
}

/// Closes a family of subsets under binary union and intersection.
pub fn lattice_closure(seed: &[Mask]) -> Vec<Mask> {
    let mut family: std::collections::BTreeSet<Mask> = seed.iter().copied().collect();
    loop {
        let current: Vec<Mask> = family.iter().copied().collect();
        let mut grew = false;
        for (i, &a) in current.iter().enumerate() {
            for &b in &current[i + 1..] {
                grew |= family.insert(a | b);
                grew |= family.insert(a & b);
            }
        }
        if !grew {
            return family.into_iter().collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn members_round_trip() {
        let m = 0b1011_0010;
        let back = members(m).fold(0, |acc, i| acc | singleton(i));
        assert_eq!(back, m);
        assert_eq!(members(0).count(), 0);
    }

    #[test]
    fn closure_of_chain_is_itself() {
        assert_eq!(lattice_closure(&[0, 1, 3]), vec![0, 1, 3]);
        assert_eq!(lattice_closure(&[1, 2]), vec![0, 1, 2, 3]);
    }
}
