use serde::Serialize;

use super::FiniteFrame;
use crate::{Error, Result};

/// A map of finite frames preserving `0`, `1`, binary meets and binary joins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameHom {
    source: FiniteFrame,
    target: FiniteFrame,
    map: Vec<usize>,
}

impl FrameHom {
    pub fn new(source: FiniteFrame, target: FiniteFrame, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() || map.iter().any(|&y| y >= target.len()) {
            return Err(Error::input("frame map is not a total function between the frames"));
        }
        if let Some(why) = hom_violation(&source, &target, &map) {
            return Err(Error::input(format!("not a frame homomorphism: {why}")));
        }
        Ok(FrameHom { source, target, map })
    }

    pub fn source(&self) -> &FiniteFrame {
        &self.source
    }

    pub fn target(&self) -> &FiniteFrame {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// First source element whose image has no complement in the target.
    pub fn uncomplemented_witness(&self) -> Option<usize> {
        (0..self.source.len()).find(|&x| !self.target.is_complemented(self.map[x]))
    }

    pub fn is_complemented(&self) -> bool {
        self.uncomplemented_witness().is_none()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FrameHom) -> Result<FrameHom> {
        if self.target != other.source {
            return Err(Error::input("frame homomorphisms are not composable"));
        }
        let map = self.map.iter().map(|&y| other.map[y]).collect();
        FrameHom::new(self.source.clone(), other.target.clone(), map)
    }
}

fn hom_violation(s: &FiniteFrame, t: &FiniteFrame, f: &[usize]) -> Option<String> {
    if f[s.bottom()] != t.bottom() {
        return Some("bottom is not preserved".into());
    }
    if f[s.top()] != t.top() {
        return Some("top is not preserved".into());
    }
    for a in 0..s.len() {
        for b in 0..s.len() {
            if f[s.join(a, b)] != t.join(f[a], f[b]) {
                return Some(format!("join of `{}` and `{}` is not preserved", s.name(a), s.name(b)));
            }
            if f[s.meet(a, b)] != t.meet(f[a], f[b]) {
                return Some(format!("meet of `{}` and `{}` is not preserved", s.name(a), s.name(b)));
            }
        }
    }
    None
}

/// Every frame homomorphism `source → target`, as value tables, by
/// backtracking over a linear extension of the source.
pub fn enumerate_frame_homs(source: &FiniteFrame, target: &FiniteFrame) -> Vec<Vec<usize>> {
    let order = source.order().linear_extension();
    let mut map = vec![usize::MAX; source.len()];
    let mut assigned = vec![false; source.len()];
    let mut out = Vec::new();
    extend(source, target, &order, 0, &mut map, &mut assigned, &mut out);
    out.sort();
    out
}

fn extend(
    s: &FiniteFrame,
    t: &FiniteFrame,
    order: &[usize],
    pos: usize,
    map: &mut Vec<usize>,
    assigned: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    if pos == order.len() {
        out.push(map.clone());
        return;
    }
    let x = order[pos];
    let candidates: Vec<usize> = if x == s.bottom() {
        vec![t.bottom()]
    } else if x == s.top() {
        vec![t.top()]
    } else {
        (0..t.len()).collect()
    };
    'cand: for v in candidates {
        for y in 0..s.len() {
            if !assigned[y] {
                continue;
            }
            let m = s.meet(x, y);
            if assigned[m] && map[m] != t.meet(v, map[y]) {
                continue 'cand;
            }
            if m == x && map[y] != t.join(v, map[y]) {
                continue 'cand;
            }
            for z in 0..s.len() {
                if assigned[z] && s.join(y, z) == x && t.join(map[y], map[z]) != v {
                    continue 'cand;
                }
            }
        }
        map[x] = v;
        assigned[x] = true;
        extend(s, t, order, pos + 1, map, assigned, out);
        assigned[x] = false;
        map[x] = usize::MAX;
    }
}

/// Serialised as `[source element, image]` pairs.
impl Serialize for FrameHom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(&str, &str)> = (0..self.source().len())
            .map(|x| (self.source().name(x), self.target().name(self.apply(x))))
            .collect();
        pairs.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_a_hom() {
        let c3 = FiniteFrame::chain(3).unwrap();
        let id = FrameHom::new(c3.clone(), c3.clone(), (0..3).collect()).unwrap();
        assert!(id.is_bijective());
    }

    #[test]
    fn collapse_to_two_is_rejected() {
        // x ↦ 0 for x ≠ 1 on the 2² Boolean algebra breaks joins
        let b = FiniteFrame::powerset(&["p".into(), "q".into()]).unwrap();
        let two = FiniteFrame::chain(2).unwrap();
        let map: Vec<usize> = (0..b.len()).map(|x| usize::from(x == b.top())).collect();
        assert!(FrameHom::new(b, two, map).is_err());
    }

    #[test]
    fn enumeration_matches_filtering_all_maps() {
        let c3 = FiniteFrame::chain(3).unwrap();
        let b = FiniteFrame::powerset(&["p".into(), "q".into()]).unwrap();
        for (s, t) in [(&c3, &b), (&b, &c3), (&b, &b), (&c3, &c3)] {
            let mut brute = Vec::new();
            let n = s.len();
            let total = t.len().pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let map: Vec<usize> = (0..n)
                    .map(|_| {
                        let v = c % t.len();
                        c /= t.len();
                        v
                    })
                    .collect();
                if hom_violation(s, t, &map).is_none() {
                    brute.push(map);
                }
            }
            brute.sort();
            assert_eq!(enumerate_frame_homs(s, t), brute);
        }
    }
}
