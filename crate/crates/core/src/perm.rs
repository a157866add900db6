//! Permutations of `{0, …, n−1}` acting on the left.
//!
//! A permutation is stored by its images. Acting on labelled objects, `σ`
//! relabels `j` as `σ(j)`, so `(σ ∘ τ)·x = σ·(τ·x)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(Vec<u8>);

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u8).collect())
    }

    /// Validates that `images` is a bijection of `{0..n−1}`.
    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Invalid(format!("not a permutation: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Perm(images.into_iter().map(|i| i as u8).collect()))
    }

    /// The adjacent transposition swapping `i` and `i + 1`.
    pub fn transposition(n: usize, i: usize) -> Perm {
        assert!(i + 1 < n, "transposition s_{i} out of range for n = {n}");
        let mut p = Perm::identity(n);
        p.0.swap(i, i + 1);
        p
    }

    /// The permutation sending each position `p` to the rank of `keys[p]`
    /// among all keys (keys must be distinct).
    pub fn sorting(keys: &[usize]) -> Perm {
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by_key(|&p| keys[p]);
        let mut images = vec![0u8; keys.len()];
        for (rank, &p) in order.iter().enumerate() {
            images[p] = rank as u8;
        }
        Perm(images)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n());
        Perm(other.0.iter().map(|&j| self.0[j as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.n()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn inversions(&self) -> usize {
        let v = &self.0;
        let mut c = 0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i] > v[j] {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn sign(&self) -> i64 {
        if self.inversions().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// A reduced word `[w₁, …, w_m]` with `self = s_{w_m} ∘ … ∘ s_{w₁}`, so
    /// `s_{w₁}` is applied first.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut p = self.0.clone();
        let mut word = Vec::new();
        'outer: loop {
            for i in 0..p.len().saturating_sub(1) {
                if p[i] > p[i + 1] {
                    // p ← p ∘ s_i removes one inversion.
                    p.swap(i, i + 1);
                    word.push(i);
                    continue 'outer;
                }
            }
            break;
        }
        word
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut parts = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            parts.push(len);
        }
        CycleType::new(parts)
    }

    /// Lexicographic rank among all permutations of the same size.
    pub fn rank(&self) -> usize {
        let n = self.n();
        let mut used = vec![false; n];
        let mut r = 0;
        for (pos, &x) in self.0.iter().enumerate() {
            let smaller = (0..x as usize).filter(|&y| !used[y]).count();
            r += smaller * factorial(n - 1 - pos);
            used[x as usize] = true;
        }
        r
    }

    pub fn unrank(n: usize, mut r: usize) -> Perm {
        let mut avail: Vec<u8> = (0..n as u8).collect();
        let mut out = Vec::with_capacity(n);
        for pos in 0..n {
            let f = factorial(n - 1 - pos);
            let q = r / f;
            r %= f;
            out.push(avail.remove(q));
        }
        Perm(out)
    }

    /// All permutations of `n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        (0..factorial(n)).map(|r| Perm::unrank(n, r)).collect()
    }

    /// Block permutation: the permutation of `{0..Σsizes−1}` that moves the
    /// blocks of consecutive positions with the given sizes according to
    /// `self`, keeping order inside each block.
    pub fn block(&self, sizes: &[usize]) -> Perm {
        assert_eq!(sizes.len(), self.n());
        let inv = self.inverse();
        // Start offset of each block in the target arrangement.
        let mut target_start = vec![0usize; sizes.len()];
        let mut acc = 0;
        for pos in 0..sizes.len() {
            let b = inv.apply(pos);
            target_start[b] = acc;
            acc += sizes[b];
        }
        let mut images = Vec::with_capacity(acc);
        for (b, &s) in sizes.iter().enumerate() {
            for t in 0..s {
                images.push((target_start[b] + t) as u8);
            }
        }
        Perm(images)
    }

    /// `self` acting on positions `[offset, offset + self.n())` of a larger
    /// set of size `total`, fixing everything else.
    pub fn embed(&self, offset: usize, total: usize) -> Perm {
        let mut images: Vec<u8> = (0..total as u8).collect();
        for (i, &j) in self.0.iter().enumerate() {
            images[offset + i] = (offset + j as usize) as u8;
        }
        Perm(images)
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// A partition of `n`, stored with parts in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleType(Vec<usize>);

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> CycleType {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&p| p == 1)
    }

    /// A permutation of this cycle type: cycles on consecutive blocks.
    pub fn representative(&self) -> Perm {
        let n = self.n();
        let mut images = vec![0u8; n];
        let mut start = 0;
        for &len in &self.0 {
            for t in 0..len {
                images[start + t] = (start + (t + 1) % len) as u8;
            }
            start += len;
        }
        Perm(images)
    }

    /// All partitions of `n`, from `[n]` down to `[1, …, 1]`.
    pub fn all(n: usize) -> Vec<CycleType> {
        fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<CycleType>) {
            if rem == 0 {
                out.push(CycleType(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                go(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Size of the conjugacy class.
    pub fn class_size(&self) -> usize {
        let n = self.n();
        let mut denom = 1usize;
        let mut counts = std::collections::BTreeMap::new();
        for &p in &self.0 {
            *counts.entry(p).or_insert(0usize) += 1;
        }
        for (p, m) in counts {
            denom *= p.pow(m as u32) * factorial(m);
        }
        factorial(n) / denom
    }
}

impl std::str::FromStr for CycleType {
    type Err = Error;
    fn from_str(s: &str) -> Result<CycleType> {
        let parts: std::result::Result<Vec<usize>, _> =
            s.split('+').map(|p| p.trim().parse::<usize>()).collect();
        match parts {
            Ok(p) if p.iter().all(|&x| x > 0) && !p.is_empty() => Ok(CycleType::new(p)),
            _ => Err(Error::Parse(format!("bad cycle type '{s}'"))),
        }
    }
}

/// Set partitions of `{0..n−1}` as restricted growth strings in
/// lexicographic order. Block `b` of a string `r` is `{i : r[i] = b}`;
/// blocks are therefore numbered by their minimal element.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            go(i + 1, n, if b == max { max + 1 } else { max }, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut cur = vec![0];
    go(1, n, 1, &mut cur, &mut out);
    out
}

/// Converts a restricted growth string to its blocks (each sorted, ordered by
/// minimal element).
pub fn rgs_blocks(rgs: &[usize]) -> Vec<Vec<usize>> {
    let nb = rgs.iter().copied().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); nb];
    for (i, &b) in rgs.iter().enumerate() {
        blocks[b].push(i);
    }
    blocks
}

/// Sign of reordering a sequence of graded factors: `order[new] = old`
/// position, `odd[old]` says whether factor `old` has odd degree.
pub fn koszul_sign(order: &[usize], odd: &[bool]) -> i64 {
    let mut s = 0usize;
    for a in 0..order.len() {
        if !odd[order[a]] {
            continue;
        }
        for b in a + 1..order.len() {
            if odd[order[b]] && order[b] < order[a] {
                s += 1;
            }
        }
    }
    if s.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_word_reconstructs() {
        for n in 1..=5 {
            for p in Perm::all(n) {
                let w = p.reduced_word();
                assert_eq!(w.len(), p.inversions());
                let mut acc = Perm::identity(n);
                for &i in &w {
                    acc = Perm::transposition(n, i).compose(&acc);
                }
                assert_eq!(acc, p);
            }
        }
    }

    #[test]
    fn rank_unrank() {
        for (r, p) in Perm::all(4).iter().enumerate() {
            assert_eq!(p.rank(), r);
        }
        assert_eq!(Perm::all(3)[1].as_slice(), &[0, 2, 1]);
    }

    #[test]
    fn bell_numbers() {
        let bell: Vec<usize> = (0..7).map(|n| set_partitions(n).len()).collect();
        assert_eq!(bell, vec![1, 1, 2, 5, 15, 52, 203]);
        assert_eq!(set_partitions(3)[0], vec![0, 0, 0]);
        assert_eq!(set_partitions(3)[4], vec![0, 1, 2]);
    }

    #[test]
    fn class_sizes_sum() {
        for n in 1..=6 {
            let total: usize = CycleType::all(n).iter().map(|c| c.class_size()).sum();
            assert_eq!(total, factorial(n));
            for c in CycleType::all(n) {
                assert_eq!(c.representative().cycle_type(), c);
            }
        }
    }

    #[test]
    fn block_permutation() {
        // Swap blocks of sizes 2 and 1: positions (0,1 | 2) → (1,2 | 0).
        let p = Perm::from_images(vec![1, 0]).unwrap().block(&[2, 1]);
        assert_eq!(p.as_slice(), &[1, 2, 0]);
    }

    #[test]
    fn sorting_perm() {
        let p = Perm::sorting(&[5, 1, 3]);
        assert_eq!(p.as_slice(), &[2, 0, 1]);
    }
}
