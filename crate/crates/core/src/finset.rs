//! Finite subsets of the positive integers and infinite sets in window form.
//!
//! Throughout the crate the ground line starts at 1.  A [`FinSet`] is a
//! strictly increasing finite sequence; an [`InfSetWindow`] is an infinite
//! set of the shape `prefix ∪ {tail_start + j·tail_stride : j ≥ 0}`, which is
//! exact and closed under every operation the crate needs (tails, index
//! lookups, subsampling by residue class).

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

// ---------------------------------------------------------------------------
// FinSet
// ---------------------------------------------------------------------------

/// A finite subset of `{1, 2, 3, …}`, stored strictly increasing.
///
/// Ordering (`PartialOrd`/`Ord`) is lexicographic on the element sequence,
/// which is the enumeration order used by every deterministic listing here.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FinSet(Vec<u32>);

impl<'de> Deserialize<'de> for FinSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        FinSet::new(v).map_err(serde::de::Error::custom)
    }
}

impl FinSet {
    /// Build from a strictly increasing list of positive integers.
    pub fn new(elements: Vec<u32>) -> Result<Self> {
        for w in elements.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Schema(format!(
                    "finite set must be strictly increasing, got {elements:?}"
                )));
            }
        }
        if elements.first().is_some_and(|&x| x == 0) {
            return Err(Error::Schema("ground line starts at 1".into()));
        }
        Ok(FinSet(elements))
    }

    /// Build from any list: sorts and deduplicates.
    pub fn from_unsorted(mut elements: Vec<u32>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        FinSet::new(elements)
    }

    pub fn empty() -> Self {
        FinSet(Vec::new())
    }

    /// Singleton `{n}`.
    pub fn singleton(n: u32) -> Self {
        FinSet(vec![n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-indexed access: `at(1)` is the least element.
    pub fn at(&self, k: usize) -> Option<u32> {
        if k == 0 {
            None
        } else {
            self.0.get(k - 1).copied()
        }
    }

    /// Least element.  (Named to avoid colliding with `Ord::min`.)
    pub fn least(&self) -> Option<u32> {
        self.0.first().copied()
    }

    /// Greatest element.  (Named to avoid colliding with `Ord::max`.)
    pub fn greatest(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    /// `self` comes before `other`: `max(self) < min(other)`.
    ///
    /// The empty set comes before and after everything, so both
    /// `∅ < t` and `s < ∅` hold.
    pub fn comes_before(&self, other: &FinSet) -> bool {
        match (self.greatest(), other.least()) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        }
    }

    /// `self ⊑ other`: `self` is an initial segment of `other`.
    pub fn is_initial_segment_of(&self, other: &FinSet) -> bool {
        self.len() <= other.len() && self.0 == other.0[..self.len()]
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &FinSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    /// Initial segment of the first `k` elements.
    pub fn take(&self, k: usize) -> FinSet {
        FinSet(self.0[..k.min(self.len())].to_vec())
    }

    /// Everything after the first `k` elements.
    pub fn drop(&self, k: usize) -> FinSet {
        FinSet(self.0[k.min(self.len())..].to_vec())
    }

    /// `self / n = {m ∈ self : m > n}`.
    pub fn tail(&self, n: u32) -> FinSet {
        let idx = self.0.partition_point(|&x| x <= n);
        FinSet(self.0[idx..].to_vec())
    }

    /// Elements `≤ n`.
    pub fn upto(&self, n: u32) -> FinSet {
        let idx = self.0.partition_point(|&x| x <= n);
        FinSet(self.0[..idx].to_vec())
    }

    /// Ordered union where every element of `self` precedes `other`.
    pub fn concat(&self, other: &FinSet) -> Result<FinSet> {
        if !self.comes_before(other) {
            return Err(Error::Schema(format!(
                "cannot concatenate {self} before {other}: not separated"
            )));
        }
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Ok(FinSet(v))
    }

    /// Union of arbitrary finite sets.
    pub fn union(&self, other: &FinSet) -> FinSet {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        v.dedup();
        FinSet(v)
    }

    /// Intersection.
    pub fn intersect(&self, other: &FinSet) -> FinSet {
        FinSet(self.iter().filter(|&x| other.contains(x)).collect())
    }

    /// Shift every element down by `j` (requires `min > j`).
    pub fn shift_down(&self, j: u32) -> Result<FinSet> {
        if let Some(m) = self.least() {
            if m <= j {
                return Err(Error::Schema(format!(
                    "cannot shift {self} down by {j}: would leave the ground line"
                )));
            }
        }
        Ok(FinSet(self.iter().map(|x| x - j).collect()))
    }

    /// All initial segments, from `∅` up to the full set.
    pub fn prefixes(&self) -> impl Iterator<Item = FinSet> + '_ {
        (0..=self.len()).map(|k| self.take(k))
    }

    /// All subsets, in lexicographic order of their element sequences.
    pub fn subsets(&self) -> Vec<FinSet> {
        // Depth-first over "next element chosen from position ≥ i" emits the
        // element sequences in lexicographic order.
        fn rec(elems: &[u32], start: usize, cur: &mut Vec<u32>, out: &mut Vec<FinSet>) {
            for i in start..elems.len() {
                cur.push(elems[i]);
                out.push(FinSet(cur.clone()));
                rec(elems, i + 1, cur, out);
                cur.pop();
            }
        }
        let mut out = vec![FinSet::empty()];
        let mut cur = Vec::new();
        rec(&self.0, 0, &mut cur, &mut out);
        out
    }
}

impl std::fmt::Display for FinSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Convenience constructor used pervasively in tests.
pub fn fs(elements: &[u32]) -> FinSet {
    FinSet::new(elements.to_vec()).expect("test finite set must be strictly increasing")
}

// ---------------------------------------------------------------------------
// InfSetWindow
// ---------------------------------------------------------------------------

/// An infinite subset of `{1, 2, …}` in window form: a finite prefix
/// followed by an arithmetic tail `{tail_start + j·tail_stride : j ≥ 0}`.
///
/// The class is closed under every operation the crate performs on infinite
/// sets (tails, index maps, residue-class subsampling), so all computations
/// on "infinite" data are exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct InfSetWindow {
    prefix: Vec<u32>,
    tail_start: u32,
    tail_stride: u32,
}

#[derive(Deserialize)]
struct RawWindow {
    #[serde(default)]
    prefix: Vec<u32>,
    tail_start: u32,
    #[serde(default = "one")]
    tail_stride: u32,
}

fn one() -> u32 {
    1
}

impl<'de> Deserialize<'de> for InfSetWindow {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawWindow::deserialize(d)?;
        InfSetWindow::new(raw.prefix, raw.tail_start, raw.tail_stride)
            .map_err(serde::de::Error::custom)
    }
}

impl InfSetWindow {
    pub fn new(prefix: Vec<u32>, tail_start: u32, tail_stride: u32) -> Result<Self> {
        let p = FinSet::new(prefix)?; // validates monotone, ≥ 1
        if tail_start == 0 || tail_stride == 0 {
            return Err(Error::Schema("tail_start and tail_stride must be ≥ 1".into()));
        }
        if let Some(m) = p.greatest() {
            if tail_start <= m {
                return Err(Error::Schema(format!(
                    "tail_start {tail_start} must exceed the prefix maximum {m}"
                )));
            }
        }
        Ok(Self::canon(p.0, tail_start, tail_stride))
    }

    /// Absorb prefix elements that align with the arithmetic tail, so that
    /// structural equality of windows is equality of the sets they denote.
    fn canon(mut prefix: Vec<u32>, mut tail_start: u32, tail_stride: u32) -> Self {
        while let Some(&last) = prefix.last() {
            if tail_start > tail_stride && tail_start - tail_stride == last {
                prefix.pop();
                tail_start = last;
            } else {
                break;
            }
        }
        InfSetWindow { prefix, tail_start, tail_stride }
    }

    /// The full ground line `{1, 2, 3, …}`.
    pub fn full() -> Self {
        InfSetWindow { prefix: Vec::new(), tail_start: 1, tail_stride: 1 }
    }

    /// Arithmetic progression `{start, start + stride, …}`.
    pub fn progression(start: u32, stride: u32) -> Self {
        InfSetWindow { prefix: Vec::new(), tail_start: start, tail_stride: stride }
    }

    pub fn prefix(&self) -> &[u32] {
        &self.prefix
    }

    pub fn tail_start(&self) -> u32 {
        self.tail_start
    }

    pub fn tail_stride(&self) -> u32 {
        self.tail_stride
    }

    pub fn contains(&self, x: u32) -> bool {
        if x >= self.tail_start {
            (x - self.tail_start) % self.tail_stride == 0
        } else {
            self.prefix.binary_search(&x).is_ok()
        }
    }

    /// 1-indexed enumeration: `at(1)` is the least element.
    pub fn at(&self, k: usize) -> u32 {
        assert!(k >= 1, "window enumeration is 1-indexed");
        if k <= self.prefix.len() {
            self.prefix[k - 1]
        } else {
            let j = (k - self.prefix.len() - 1) as u32;
            self.tail_start + j * self.tail_stride
        }
    }

    pub fn min(&self) -> u32 {
        self.at(1)
    }

    /// Position of `x` in the increasing enumeration (1-indexed).
    pub fn index_of(&self, x: u32) -> Result<usize> {
        if x >= self.tail_start {
            let d = x - self.tail_start;
            if d % self.tail_stride == 0 {
                return Ok(self.prefix.len() + 1 + (d / self.tail_stride) as usize);
            }
        } else if let Ok(i) = self.prefix.binary_search(&x) {
            return Ok(i + 1);
        }
        Err(Error::ElementNotInSet { element: x })
    }

    /// First `n` elements as a finite set.  Window depth: `n`.
    pub fn take(&self, n: usize) -> FinSet {
        FinSet((1..=n).map(|k| self.at(k)).collect())
    }

    /// `self / n = {m : m > n}` — drops prefix elements `≤ n` and rebases
    /// the arithmetic tail if needed.
    pub fn tail(&self, n: u32) -> InfSetWindow {
        let prefix: Vec<u32> = self.prefix.iter().copied().filter(|&x| x > n).collect();
        let tail_start = if self.tail_start > n {
            self.tail_start
        } else {
            let jumps = (n - self.tail_start) / self.tail_stride + 1;
            self.tail_start + jumps * self.tail_stride
        };
        Self::canon(prefix, tail_start, self.tail_stride)
    }

    /// Elements in `[1, bound]` as a finite set.  Window depth: `bound`.
    pub fn upto(&self, bound: u32) -> FinSet {
        let mut v: Vec<u32> = self.prefix.iter().copied().filter(|&x| x <= bound).collect();
        let mut t = self.tail_start;
        while t <= bound {
            v.push(t);
            t += self.tail_stride;
        }
        FinSet(v)
    }

    /// Keep every `k`-th element (positions `k, 2k, 3k, …`); exact because
    /// subsampling an arithmetic tail is again arithmetic.
    pub fn subsample(&self, k: usize) -> InfSetWindow {
        assert!(k >= 1);
        self.residue_class(k, k)
    }

    /// Elements at positions `≡ r (mod n)` with `1 ≤ r ≤ n`.
    pub fn residue_class(&self, r: usize, n: usize) -> InfSetWindow {
        assert!(n >= 1 && (1..=n).contains(&r));
        // Positions r, r+n, r+2n, …: once a position lands inside the
        // arithmetic tail, steps of n positions are steps of n·stride.
        let plen = self.prefix.len();
        let mut prefix = Vec::new();
        let mut pos = r;
        while pos <= plen {
            prefix.push(self.prefix[pos - 1]);
            pos += n;
        }
        let tail_start = self.at(pos);
        Self::canon(prefix, tail_start, self.tail_stride * n as u32)
    }

    /// Exact containment test between windows.
    pub fn contains_window(&self, other: &InfSetWindow) -> bool {
        if other.prefix.iter().any(|&x| !self.contains(x)) {
            return false;
        }
        // Walk other's tail until it passes self.tail_start, then decide by
        // stride divisibility plus one congruence check.
        let mut t = other.tail_start;
        while t < self.tail_start {
            if !self.contains(t) {
                return false;
            }
            match t.checked_add(other.tail_stride) {
                Some(next) => t = next,
                None => return false,
            }
        }
        other.tail_stride % self.tail_stride == 0 && self.contains(t)
    }

    /// Prepend the elements of `head` (all below the window start), keeping the
    /// window form.
    pub fn with_head(&self, head: &FinSet) -> Result<InfSetWindow> {
        if let Some(m) = head.greatest() {
            if m >= self.min() {
                return Err(Error::Schema(format!(
                    "head {head} must lie strictly below the window start {}",
                    self.min()
                )));
            }
        }
        let mut prefix = head.0.clone();
        prefix.extend_from_slice(&self.prefix);
        Ok(Self::canon(prefix, self.tail_start, self.tail_stride))
    }
}

impl std::fmt::Display for InfSetWindow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for x in &self.prefix {
            write!(f, "{x},")?;
        }
        write!(f, "{}, {}, …", self.tail_start, self.tail_start + self.tail_stride)?;
        if self.tail_stride != 1 {
            write!(f, " (step {})", self.tail_stride)?;
        }
        write!(f, "}}")
    }
}

// ---------------------------------------------------------------------------
// Transfer maps
// ---------------------------------------------------------------------------

/// The order isomorphism `M → N` applied to a finite `s ⊆ M`: the k-th
/// element of `M` goes to the k-th element of `N`.
///
/// Window depth: the position of `max(s)` in `M`, and the same position in `N`.
pub fn transfer_map(s: &FinSet, m: &InfSetWindow, n: &InfSetWindow) -> Result<FinSet> {
    let mut out = Vec::with_capacity(s.len());
    for x in s.iter() {
        let k = m.index_of(x)?;
        out.push(n.at(k));
    }
    FinSet::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comes_before_handles_empty_both_ways() {
        let e = FinSet::empty();
        let t = fs(&[3, 5]);
        assert!(e.comes_before(&t));
        assert!(t.comes_before(&e));
        assert!(e.comes_before(&e));
        assert!(fs(&[1, 2]).comes_before(&fs(&[3])));
        assert!(!fs(&[1, 3]).comes_before(&fs(&[3])));
    }

    #[test]
    fn initial_segments() {
        let s = fs(&[2, 4, 6]);
        assert!(FinSet::empty().is_initial_segment_of(&s));
        assert!(fs(&[2, 4]).is_initial_segment_of(&s));
        assert!(!fs(&[4]).is_initial_segment_of(&s));
        assert!(s.is_initial_segment_of(&s));
    }

    #[test]
    fn window_enumeration_and_membership() {
        let w = InfSetWindow::new(vec![2, 5], 9, 3).unwrap();
        assert_eq!(w.take(5).elements(), &[2, 5, 9, 12, 15]);
        assert!(w.contains(12));
        assert!(!w.contains(10));
        assert_eq!(w.index_of(15).unwrap(), 5);
        assert!(w.index_of(10).is_err());
    }

    #[test]
    fn window_tail_rebases_arithmetic_part() {
        let w = InfSetWindow::new(vec![1, 4], 6, 2).unwrap();
        // {1,4,6,8,10,…}/7 = {8,10,…}
        let t = w.tail(7);
        assert_eq!(t.take(3).elements(), &[8, 10, 12]);
        // Tail below the prefix keeps part of it.
        let t2 = w.tail(2);
        assert_eq!(t2.take(3).elements(), &[4, 6, 8]);
    }

    #[test]
    fn residue_classes_partition_the_window() {
        let w = InfSetWindow::new(vec![3], 5, 2).unwrap();
        // Elements: 3,5,7,9,11,13,…  Classes mod 2 interleave them.
        let c1 = w.residue_class(1, 2);
        let c2 = w.residue_class(2, 2);
        assert_eq!(c1.take(3).elements(), &[3, 7, 11]);
        assert_eq!(c2.take(3).elements(), &[5, 9, 13]);
        for k in 1..=12 {
            let x = w.at(k);
            assert!(c1.contains(x) ^ c2.contains(x));
        }
    }

    #[test]
    fn window_containment_is_exact() {
        let evens = InfSetWindow::progression(2, 2);
        let mult4 = InfSetWindow::progression(4, 4);
        let full = InfSetWindow::full();
        assert!(full.contains_window(&evens));
        assert!(evens.contains_window(&mult4));
        assert!(!mult4.contains_window(&evens));
        assert!(!evens.contains_window(&InfSetWindow::progression(3, 2)));
        let with_prefix = InfSetWindow::new(vec![2], 4, 4).unwrap();
        assert!(evens.contains_window(&with_prefix));
    }

    #[test]
    fn transfer_preserves_positions() {
        let evens = InfSetWindow::progression(2, 2);
        let odds = InfSetWindow::progression(1, 2);
        let s = fs(&[2, 6, 8]);
        assert_eq!(transfer_map(&s, &evens, &odds).unwrap(), fs(&[1, 5, 7]));
        assert!(transfer_map(&fs(&[3]), &evens, &odds).is_err());
    }

    #[test]
    fn transfer_commutes_with_aligned_tails() {
        // Dropping the first k elements of both sides leaves the map
        // unchanged on sets beyond the k-th element.
        let m = InfSetWindow::new(vec![2, 3, 7], 10, 5).unwrap();
        let n = InfSetWindow::progression(4, 3);
        for k in 1..=4 {
            let mk = m.at(k);
            let nk = n.at(k);
            let m_tail = m.tail(mk);
            let n_tail = n.tail(nk);
            let s = FinSet::new(vec![m.at(k + 1), m.at(k + 3)]).unwrap();
            assert_eq!(
                transfer_map(&s, &m, &n).unwrap(),
                transfer_map(&s, &m_tail, &n_tail).unwrap(),
            );
        }
    }

    #[test]
    fn subsets_enumerates_in_lex_order() {
        let s = fs(&[1, 2, 3]);
        let subs = s.subsets();
        assert_eq!(subs.len(), 8);
        let mut sorted = subs.clone();
        sorted.sort();
        assert_eq!(subs, sorted);
    }
}
