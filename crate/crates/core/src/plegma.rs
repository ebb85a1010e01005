//! Plegma tuples: interlaced families of finite sets drawn from a barrier.
//!
//! A tuple `(s₁, …, sₙ)` is plegma when the sizes are nondecreasing and the
//! k-th elements interlace fully: every k-th column is increasing across the
//! tuple and sits entirely below the (k+1)-st column.  This module houses the
//! predicate, enumeration over fronts, and the constructive lemmas used by
//! the stabilisation engine: section picking, plegma existence, equal-length
//! extension, plegma-preserving refinement, and decompositions.

use serde::{Deserialize, Serialize};

use crate::barrier::{self, BarrierTerm, OrdinalCNF};
use crate::finset::{transfer_map, FinSet, InfSetWindow};
use crate::{Error, Result};

/// Search depth shared by the window scans in this module.
const SCAN_CAP: usize = 512;

// ---------------------------------------------------------------------------
// Tuple type and predicate
// ---------------------------------------------------------------------------

/// A verified plegma tuple.  Construction checks the predicate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PlegmaTuple(Vec<FinSet>);

impl PlegmaTuple {
    pub fn new(entries: Vec<FinSet>) -> Result<Self> {
        match plegma_violation(&entries) {
            None => Ok(PlegmaTuple(entries)),
            Some(reason) => Err(Error::NotPlegma { reason }),
        }
    }

    pub fn entries(&self) -> &[FinSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &FinSet> {
        self.0.iter()
    }

    /// Leading sub-tuple `(s₁, …, s_m)`; prefixes of plegma tuples are plegma.
    pub fn prefix(&self, m: usize) -> PlegmaTuple {
        PlegmaTuple(self.0[..m.min(self.0.len())].to_vec())
    }
}

impl<'de> Deserialize<'de> for PlegmaTuple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<FinSet>::deserialize(d)?;
        PlegmaTuple::new(entries).map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Display for PlegmaTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// Decide the plegma predicate.
pub fn is_plegma(entries: &[FinSet]) -> bool {
    plegma_violation(entries).is_none()
}

/// The first violated plegma condition, if any.  Out-of-range column
/// comparisons are vacuous, so empty entries and ragged lengths are fine as
/// long as the sizes never decrease.
pub fn plegma_violation(entries: &[FinSet]) -> Option<String> {
    for w in entries.windows(2) {
        if w[0].len() > w[1].len() {
            return Some(format!("entry sizes decrease: |{}| > |{}|", w[0], w[1]));
        }
    }
    let depth = entries.last().map_or(0, |s| s.len());
    let mut prev_col_max: Option<u32> = None;
    for k in 1..=depth {
        // Sizes are nondecreasing, so the k-th column is a suffix of the tuple.
        let col: Vec<u32> = entries.iter().filter_map(|s| s.at(k)).collect();
        for pair in col.windows(2) {
            if pair[0] >= pair[1] {
                return Some(format!("column {k} fails to increase: {} ≥ {}", pair[0], pair[1]));
            }
        }
        if let (Some(p), Some(&first)) = (prev_col_max, col.first()) {
            if p >= first {
                return Some(format!("column {} reaches {p}, not below column {k}'s {first}", k - 1));
            }
        }
        prev_col_max = col.last().copied();
    }
    None
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// All plegma `n`-tuples with entries from `front(B, window)`, in
/// lexicographic order on the flattened tuple.  Prefix pruning is sound
/// because prefixes of plegma tuples are plegma.
pub fn enumerate_plegma(b: &BarrierTerm, n: usize, window: &FinSet) -> Result<Vec<PlegmaTuple>> {
    let front = b.front(window)?;
    let mut out = Vec::new();
    let mut cur: Vec<FinSet> = Vec::with_capacity(n);
    fn rec(front: &[FinSet], n: usize, cur: &mut Vec<FinSet>, out: &mut Vec<PlegmaTuple>) {
        if cur.len() == n {
            out.push(PlegmaTuple(cur.clone()));
            return;
        }
        for s in front {
            cur.push(s.clone());
            if is_plegma(cur) {
                rec(front, n, cur, out);
            }
            cur.pop();
        }
    }
    rec(&front, n, &mut cur, &mut out);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Section picking and plegma construction
// ---------------------------------------------------------------------------

/// For families with nondecreasing positive ranks, pick `m₁ < … < mₙ` in `M`
/// whose sections have nondecreasing ranks.  Deterministic least choice.
pub fn pick_sections(
    bs: &[BarrierTerm],
    m: &InfSetWindow,
) -> Result<Vec<(u32, BarrierTerm)>> {
    let mut out: Vec<(u32, BarrierTerm)> = Vec::with_capacity(bs.len());
    let mut floor = OrdinalCNF::zero();
    let mut cur = m.clone();
    for (i, b) in bs.iter().enumerate() {
        if b.rank()?.is_zero() {
            return Err(Error::Schema(format!("family {i} has rank 0 and admits no sections")));
        }
        let mut found = None;
        for j in 1..=SCAN_CAP {
            let cand = cur.at(j);
            let sec = b.section(cand)?;
            if sec.rank()? >= floor {
                found = Some((cand, sec));
                break;
            }
        }
        let (mi, sec) =
            found.ok_or_else(|| Error::InsufficientWindow {
                what: format!("no section of family {i} reaches rank {floor}"),
                depth: SCAN_CAP,
            })?;
        floor = sec.rank()?;
        cur = cur.tail(mi);
        out.push((mi, sec));
    }
    Ok(out)
}

/// Build a plegma tuple with `sᵢ ∈ Bᵢ ↾ M`, for families of nondecreasing
/// rank.  Finite ranks use interleaved residue classes of `M`; otherwise one
/// pivot per family is picked with [`pick_sections`] and the construction
/// recurses on the sections.
pub fn construct_plegma(bs: &[BarrierTerm], m: &InfSetWindow) -> Result<PlegmaTuple> {
    for b in bs {
        if !b.ground().contains_window(m) {
            return Err(Error::Schema(format!(
                "window {m} must lie inside the ground set {}",
                b.ground()
            )));
        }
    }
    let entries = construct_entries(bs, m)?;
    PlegmaTuple::new(entries)
}

fn construct_entries(bs: &[BarrierTerm], m: &InfSetWindow) -> Result<Vec<FinSet>> {
    let n = bs.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let ranks: Vec<OrdinalCNF> = bs.iter().map(|b| b.rank()).collect::<Result<_>>()?;
    for w in ranks.windows(2) {
        if w[0] > w[1] {
            return Err(Error::Schema(format!("family ranks must be nondecreasing: {} > {}", w[0], w[1])));
        }
    }
    if ranks.iter().all(|r| r.is_finite()) {
        // Base: the j-th entry takes its elements from the j-th residue
        // class of M, which interlaces the columns by construction.
        let mut entries = Vec::with_capacity(n);
        for (j, r) in ranks.iter().enumerate() {
            let size = r.as_finite().unwrap() as usize;
            entries.push(m.residue_class(j + 1, n).take(size));
        }
        return Ok(entries);
    }
    // Some rank is infinite.  Entries of rank 0 stay empty; each remaining
    // family contributes a pivot, and the tails come from the sections.
    let i0 = ranks.iter().position(|r| !r.is_zero()).unwrap();
    let picked = pick_sections(&bs[i0..], m)?;
    let m_last = picked.last().unwrap().0;
    let sections: Vec<BarrierTerm> = picked.iter().map(|(_, s)| s.clone()).collect();
    let tails = construct_entries(&sections, &m.tail(m_last))?;
    let mut entries = vec![FinSet::empty(); i0];
    for ((mi, _), tail) in picked.into_iter().zip(tails) {
        entries.push(FinSet::singleton(mi).concat(&tail)?);
    }
    Ok(entries)
}

// ---------------------------------------------------------------------------
// Equal-length extension
// ---------------------------------------------------------------------------

/// Extend every entry of a plegma tuple with elements of `M` into a plegma
/// tuple over `L ⊇ M` whose entries all have the length of the last one,
/// with `tᵢ ⊑ t'ᵢ`.  Fresh elements are drawn from the gaps of `L` between
/// the cut point (the last `M`-element below the tuple) and the tuple itself.
pub fn extend_plegma(t: &PlegmaTuple, l: &InfSetWindow, m: &InfSetWindow) -> Result<PlegmaTuple> {
    if !l.contains_window(m) {
        return Err(Error::Schema(format!("M = {m} must lie inside L = {l}")));
    }
    for s in t.iter() {
        if s.iter().any(|x| !m.contains(x)) {
            return Err(Error::Schema(format!("entry {s} strays outside M = {m}")));
        }
    }
    let entries = extend_entries(t.entries(), l, m)?;
    PlegmaTuple::new(entries)
}

fn extend_entries(t: &[FinSet], l: &InfSetWindow, m: &InfSetWindow) -> Result<Vec<FinSet>> {
    let target = t.last().map_or(0, |s| s.len());
    if target == 0 {
        return Ok(t.to_vec());
    }
    // Empty entries form a prefix; each needs a fresh head from the gap of L
    // strictly between the cut (last M-element below the tuple) and the tuple.
    let i0 = t.iter().position(|s| !s.is_empty()).expect("last entry is nonempty");
    let least = t[i0].least().unwrap();
    let cut = m.upto(least - 1).greatest().unwrap_or(0);
    let gap: Vec<u32> = l.upto(least - 1).tail(cut).elements().to_vec();
    if gap.len() < i0 {
        return Err(Error::GapTooSmall { below: least, found: gap.len(), needed: i0 });
    }
    let mut heads: Vec<u32> = gap[..i0].to_vec();
    heads.extend(t.iter().skip(i0).map(|s| s.least().unwrap()));
    // Recurse on the tails: their columns are the later columns of t.
    let rest: Vec<FinSet> = t.iter().map(|s| s.drop(1)).collect();
    let extended = extend_entries(&rest, l, m)?;
    heads
        .into_iter()
        .zip(extended)
        .map(|(h, tail)| FinSet::singleton(h).concat(&tail))
        .collect()
}

// ---------------------------------------------------------------------------
// Decompositions
// ---------------------------------------------------------------------------

/// The `n`-fold decomposition of `s`: `rᵢ` is the unique member of `B` that
/// is an initial segment of `s` shifted down by `n − i`.  Needs `n < min(s)`
/// and a spreading `B`; the result must itself be plegma.
pub fn decompose(b: &BarrierTerm, s: &FinSet, n: usize) -> Result<PlegmaTuple> {
    let not_decomposable = || Error::NotDecomposable { set: s.elements().to_vec(), n };
    if s.least().is_none_or(|m| m as usize <= n) {
        return Err(not_decomposable());
    }
    let mut entries = Vec::with_capacity(n);
    for i in 1..=n {
        let shifted = s.shift_down((n - i) as u32)?;
        let r = barrier::first_member_along(b, shifted.iter(), shifted.len())
            .map_err(|_| not_decomposable())?;
        entries.push(r);
    }
    PlegmaTuple::new(entries).map_err(|_| not_decomposable())
}

/// A sub-window `N ⊆ M` on which plegma tuples of `B ↾ N` admit
/// decompositions (with the given part counts) whose concatenation is again
/// plegma above `l`: every `k`-th element of `M` past `l + k`, where `k`
/// exceeds the largest count.
pub fn decomposition_domain(counts: &[usize], l: u32, m: &InfSetWindow) -> InfSetWindow {
    let k = counts.iter().copied().max().unwrap_or(0) + 1;
    m.subsample(k).tail(l + k as u32)
}

// ---------------------------------------------------------------------------
// Plegma-preserving refinement
// ---------------------------------------------------------------------------

/// Produce a plegma tuple `(sᵢ)` in `G ↾ L₀` whose projections onto `F ↾ M`
/// form a plegma tuple as well.  `L₀` should come from the embedding of
/// `(F, M)` into `(G, N)`, so that every `sᵢ` projects.
///
/// The construction picks a plegma tuple of the transferred `F` on a sparse
/// sub-window, extends it to equal lengths through the gaps, and completes
/// each entry to a `G`-member along its own residue class of `L₀`.
pub fn plegma_refine(
    f: &BarrierTerm,
    g: &BarrierTerm,
    m: &InfSetWindow,
    l0: &InfSetWindow,
    n: usize,
) -> Result<(PlegmaTuple, PlegmaTuple)> {
    if f.rank()? > g.rank()? {
        return Err(Error::Schema(format!(
            "refinement requires rank(F) ≤ rank(G), got {} > {}",
            f.rank()?,
            g.rank()?
        )));
    }
    let transferred = BarrierTerm::transfer(f.clone(), m.clone(), l0.clone())?;
    let sparse = l0.subsample(n.max(1));
    let t = construct_plegma(&vec![transferred; n], &sparse)?;
    let t_ext = extend_plegma(&t, l0, &sparse)?;

    // Complete each extended entry to a G-member along its own residue class
    // beyond the tuple, so the completions stay interlaced.
    let top = t_ext.entries().last().and_then(|s| s.greatest()).unwrap_or(0);
    let beyond = l0.tail(top);
    let mut ss = Vec::with_capacity(n);
    for (i, te) in t_ext.iter().enumerate() {
        let class = beyond.residue_class(i + 1, n.max(1));
        let stream = te.iter().chain((1..).map(move |k| class.at(k)));
        ss.push(barrier::first_member_along(g, stream, SCAN_CAP)?);
    }

    // Project back: each sᵢ must round to the member of F that t started from.
    let mut projected = Vec::with_capacity(n);
    for (s, t_orig) in ss.iter().zip(t.iter()) {
        let p = barrier::project(f, g, m, l0, s)?;
        debug_assert_eq!(&transfer_map(&p, m, l0).unwrap(), t_orig);
        projected.push(p);
    }
    Ok((PlegmaTuple::new(ss)?, PlegmaTuple::new(projected)?))
}
