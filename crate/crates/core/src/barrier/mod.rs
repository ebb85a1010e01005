//! A closed grammar of uniform barriers over infinite ground sets.
//!
//! Terms denote families of finite sets: the singleton family `{∅}`, the
//! size-`k` family `[·]^k`, the self-counting family (`|s| = s(1)`), ordered
//! sums `B ⊕ C = {s ∪ t : s ∈ B, t ∈ C, s < t}`, sections `B_{{n}}`,
//! transfers along the order isomorphism between two ground sets, and
//! restrictions to a sub-ground-set.  Ranks live below `ω^ω` and are computed
//! by closed forms plus section recursion, memoised behind a lock.

pub mod ordinal;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use crate::finset::{transfer_map, FinSet, InfSetWindow};
use crate::{Error, Result};

pub use ordinal::OrdinalCNF;

/// How many window elements a search may inspect before giving up.
const SCAN_CAP: usize = 512;

// ---------------------------------------------------------------------------
// Grammar
// ---------------------------------------------------------------------------

/// A barrier term.  Build through the constructors, which normalise
/// (`cube(0)` = `leaf()`, sums absorb `{∅}` operands) and validate ground
/// sets; the enum itself stays public for matching.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BarrierTerm {
    /// The family `{∅}`, the unique rank-0 barrier.
    Leaf,
    /// All `k`-element subsets of the ground set.
    Cube(u32),
    /// Sets whose size equals their least element.
    Schreier,
    /// `B ⊕ C`: unions `s ∪ t` with `s ∈ B`, `t ∈ C`, `s` before `t`.
    Sum(Box<BarrierTerm>, Box<BarrierTerm>),
    /// The section `B_{{n}} = {s : n < s, {n} ∪ s ∈ B}`.
    Section(Box<BarrierTerm>, u32),
    /// The image of `B ↾ M` under the order isomorphism `M → N`.
    Transfer(Box<BarrierTerm>, InfSetWindow, InfSetWindow),
    /// `B ↾ M = {s ∈ B : s ⊆ M}`.
    Restrict(Box<BarrierTerm>, InfSetWindow),
}

use BarrierTerm::*;

impl BarrierTerm {
    pub fn leaf() -> Self {
        Leaf
    }

    /// `[·]^k`; `cube(0)` collapses to the leaf.
    pub fn cube(k: u32) -> Self {
        if k == 0 {
            Leaf
        } else {
            Cube(k)
        }
    }

    pub fn schreier() -> Self {
        Schreier
    }

    /// Ordered sum `B ⊕ C`.  Both operands must share a ground set; an
    /// operand equal to `{∅}` is absorbed.
    pub fn sum(b: BarrierTerm, c: BarrierTerm) -> Result<Self> {
        if b.member_inner(&FinSet::empty()) {
            return Ok(c);
        }
        if c.member_inner(&FinSet::empty()) {
            return Ok(b);
        }
        if b.ground() != c.ground() {
            return Err(Error::Schema(format!(
                "sum requires a shared ground set, got {} and {}",
                b.ground(),
                c.ground()
            )));
        }
        Ok(Sum(Box::new(b), Box::new(c)))
    }

    /// Transfer of `B ↾ M` onto `N` along the order isomorphism `M → N`.
    pub fn transfer(b: BarrierTerm, m: InfSetWindow, n: InfSetWindow) -> Result<Self> {
        if !b.ground().contains_window(&m) {
            return Err(Error::Schema(format!(
                "transfer source {m} must lie inside the ground set {}",
                b.ground()
            )));
        }
        Ok(Transfer(Box::new(b), m, n))
    }

    /// Restriction `B ↾ M`.
    pub fn restrict(b: BarrierTerm, m: InfSetWindow) -> Result<Self> {
        if !b.ground().contains_window(&m) {
            return Err(Error::Schema(format!(
                "restriction window {m} must lie inside the ground set {}",
                b.ground()
            )));
        }
        Ok(Restrict(Box::new(b), m))
    }

    // -----------------------------------------------------------------------
    // Ground sets and membership
    // -----------------------------------------------------------------------

    /// The infinite ground set the family lives on.
    pub fn ground(&self) -> InfSetWindow {
        match self {
            Leaf | Cube(_) | Schreier => InfSetWindow::full(),
            Sum(b, _) => b.ground(),
            Section(b, n) => b.ground().tail(*n),
            Transfer(_, _, n) => n.clone(),
            Restrict(_, m) => m.clone(),
        }
    }

    /// Membership test.  Errors when `s` strays outside the ground set.
    pub fn contains(&self, s: &FinSet) -> Result<bool> {
        let g = self.ground();
        if s.iter().any(|x| !g.contains(x)) {
            return Err(Error::GroundSetViolation { set: s.elements().to_vec() });
        }
        Ok(self.member_inner(s))
    }

    /// Membership without the ground check (used internally once the caller
    /// has established containment; strays simply fail the test).
    pub(crate) fn member_inner(&self, s: &FinSet) -> bool {
        match self {
            Leaf => s.is_empty(),
            Cube(k) => s.len() as u32 == *k,
            Schreier => s.least().is_some_and(|m| s.len() as u32 == m),
            // Any split of s into u ∪ v with u < v is a split at a prefix.
            Sum(b, c) => {
                (0..=s.len()).any(|i| b.member_inner(&s.take(i)) && c.member_inner(&s.drop(i)))
            }
            Section(b, n) => {
                if s.least().is_some_and(|m| m <= *n) {
                    return false;
                }
                match FinSet::singleton(*n).concat(s) {
                    Ok(joined) => b.member_inner(&joined),
                    Err(_) => false,
                }
            }
            Transfer(b, m, n) => match transfer_map(s, n, m) {
                Ok(pre) => b.member_inner(&pre),
                Err(_) => false,
            },
            Restrict(b, m) => s.iter().all(|x| m.contains(x)) && b.member_inner(s),
        }
    }

    // -----------------------------------------------------------------------
    // Sections
    // -----------------------------------------------------------------------

    /// The section `B_{{n}} = {s : n < s, {n} ∪ s ∈ B}`, returned as a term
    /// with the top constructor already rewritten (so rank recursion and
    /// front enumeration terminate structurally).
    pub fn section(&self, n: u32) -> Result<BarrierTerm> {
        if !self.ground().contains(n) {
            return Err(Error::GroundSetViolation { set: vec![n] });
        }
        let tail = self.ground().tail(n);
        match self {
            Leaf => Err(Error::NoSections),
            Cube(k) => BarrierTerm::restrict(BarrierTerm::cube(k - 1), tail),
            // {n} ∪ s counts itself: |{n} ∪ s| = n forces |s| = n − 1 beyond n.
            Schreier => BarrierTerm::restrict(BarrierTerm::cube(n - 1), tail),
            Sum(b, c) => {
                if b.member_inner(&FinSet::singleton(n)) {
                    // {n} already completes the left part; the rest is all of C.
                    BarrierTerm::restrict((**c).clone(), tail)
                } else {
                    let left = b.section(n)?;
                    BarrierTerm::sum(left, BarrierTerm::restrict((**c).clone(), tail)?)
                }
            }
            Section(b, m) => b.section(*m)?.section(n),
            Transfer(b, m, nw) => {
                // Align n with its mirror in M; tails of both sides keep the
                // transfer consistent on sets beyond the pivot.
                let k = nw.index_of(n)?;
                let mk = m.at(k);
                BarrierTerm::transfer(b.section(mk)?, m.tail(mk), nw.tail(n))
            }
            Restrict(b, m) => BarrierTerm::restrict(b.section(n)?, m.tail(n)),
        }
    }

    // -----------------------------------------------------------------------
    // Rank
    // -----------------------------------------------------------------------

    /// Ordinal rank.  Closed forms for the generators, ordinal addition for
    /// sums (`o(B ⊕ C) = o(C) + o(B)`), recursion through sections otherwise.
    /// Results are memoised in a process-wide table.
    pub fn rank(&self) -> Result<OrdinalCNF> {
        static MEMO: OnceLock<Mutex<HashMap<BarrierTerm, OrdinalCNF>>> = OnceLock::new();
        let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(r) = memo.lock().unwrap().get(self) {
            return Ok(r.clone());
        }
        let r = match self {
            Leaf => OrdinalCNF::zero(),
            Cube(k) => OrdinalCNF::finite(*k as u64),
            Schreier => OrdinalCNF::omega(),
            Sum(b, c) => c.rank()?.add(&b.rank()?),
            Section(b, n) => b.section(*n)?.rank()?,
            Transfer(b, _, _) | Restrict(b, _) => b.rank()?,
        };
        memo.lock().unwrap().insert(self.clone(), r.clone());
        Ok(r)
    }

    // -----------------------------------------------------------------------
    // Fronts
    // -----------------------------------------------------------------------

    /// All members contained in the finite window, in lexicographic order.
    /// Enumeration recurses through sections, so the search space is pruned
    /// to actual members rather than all `2^|window|` subsets.
    pub fn front(&self, window: &FinSet) -> Result<Vec<FinSet>> {
        if let Section(b, n) = self {
            return b.section(*n)?.front(window);
        }
        if self.member_inner(&FinSet::empty()) {
            return Ok(vec![FinSet::empty()]);
        }
        let g = self.ground();
        let mut out = Vec::new();
        for n in window.iter().filter(|&n| g.contains(n)) {
            let sub = self.section(n)?;
            for t in sub.front(&window.tail(n))? {
                out.push(FinSet::singleton(n).concat(&t).expect("section members lie beyond n"));
            }
        }
        Ok(out)
    }

    // -----------------------------------------------------------------------
    // Closure and spreading check
    // -----------------------------------------------------------------------

    /// Whether `r` is an initial segment of some member (membership in the
    /// `⊑`-closure).  Exact, not window-relative: sections decide it.
    pub fn extends_to_member(&self, r: &FinSet) -> Result<bool> {
        if self.member_inner(&FinSet::empty()) {
            // By thinness {∅} is then the whole family.
            return Ok(r.is_empty());
        }
        match r.least() {
            None => Ok(true),
            Some(n) => {
                if !self.ground().contains(n) {
                    return Ok(false);
                }
                self.section(n)?.extends_to_member(&r.drop(1))
            }
        }
    }

    /// Check the spreading property on a sample: every member `s` inside the
    /// window, paired with every coordinatewise-dominating `r` of the same
    /// length (drawn from the window and the ground set), must extend to a
    /// member of the family.
    ///
    /// Extension is decided exactly, so a counterexample is definitive; a
    /// `true` verdict is relative to the window the pairs were sampled from.
    /// An empty front passes vacuously and is flagged.
    pub fn is_spreading(&self, window: &FinSet) -> Result<SpreadingReport> {
        let g = self.ground();
        let win = FinSet::new(window.iter().filter(|&x| g.contains(x)).collect())?;
        let front = self.front(&win)?;
        if front.is_empty() {
            return Ok(SpreadingReport { holds: true, empty_front: true, counterexample: None });
        }
        for s in &front {
            for r in dominating_sets(win.elements(), s.elements()) {
                if !self.extends_to_member(&r)? {
                    return Ok(SpreadingReport {
                        holds: false,
                        empty_front: false,
                        counterexample: Some((s.clone(), r)),
                    });
                }
            }
        }
        Ok(SpreadingReport { holds: true, empty_front: false, counterexample: None })
    }
}

/// Verdict of a windowed spreading check.
#[derive(Debug, Clone, Serialize)]
pub struct SpreadingReport {
    pub holds: bool,
    /// The window met the ground set in too few points to see any member.
    pub empty_front: bool,
    /// A member and a dominating set with no extension, when `holds` fails.
    pub counterexample: Option<(FinSet, FinSet)>,
}

/// All increasing tuples from `win` with `r(i) ≥ s(i)` and `|r| = |s|`.
fn dominating_sets(win: &[u32], s: &[u32]) -> Vec<FinSet> {
    fn rec(win: &[u32], s: &[u32], i: usize, last: u32, cur: &mut Vec<u32>, out: &mut Vec<FinSet>) {
        if i == s.len() {
            out.push(FinSet::new(cur.clone()).unwrap());
            return;
        }
        for &x in win.iter().filter(|&&x| x > last && x >= s[i]) {
            cur.push(x);
            rec(win, s, i + 1, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(win, s, 0, 0, &mut Vec::new(), &mut out);
    out
}

// ---------------------------------------------------------------------------
// Embedding and projection
// ---------------------------------------------------------------------------

/// First count elements, then the continuation window, of an `L₀ ⊆ N` such
/// that for every `L` inside it, the transfer of `F ↾ M` into `L` lands in
/// the initial-segment closure of `G ↾ L`.
///
/// Requires `rank(F) ≤ rank(G)` and `G` spreading.  The choice at every step
/// is the least admissible window element, which makes the output unique.
/// Window depth: up to [`SCAN_CAP`] elements of `N` are inspected per step.
pub fn embed_prefix(
    f: &BarrierTerm,
    g: &BarrierTerm,
    m: &InfSetWindow,
    n: &InfSetWindow,
    count: usize,
) -> Result<InfSetWindow> {
    if f.rank()? > g.rank()? {
        return Err(Error::Schema(format!(
            "embedding requires rank(F) ≤ rank(G), got {} > {}",
            f.rank()?,
            g.rank()?
        )));
    }
    if !f.ground().contains_window(m) {
        return Err(Error::Schema(format!("M = {m} must lie inside the ground set of F")));
    }
    if !g.ground().contains_window(n) {
        return Err(Error::Schema(format!("N = {n} must lie inside the ground set of G")));
    }
    embed_window(f, g, m, n, count)
}

fn embed_window(
    f: &BarrierTerm,
    g: &BarrierTerm,
    m: &InfSetWindow,
    n: &InfSetWindow,
    count: usize,
) -> Result<InfSetWindow> {
    let g_rank = g.rank()?;
    // Finite rank: members have bounded size, so any infinite L admits every
    // transferred member inside the closure of G ↾ L.  Nothing to choose.
    if g_rank.is_finite() {
        return Ok(n.clone());
    }
    let mut cur = n.clone();
    let mut chosen: Vec<u32> = Vec::with_capacity(count);
    for k in 1..=count {
        let mk = m.at(k);
        let fk = f.section(mk)?;
        let need = fk.rank()?;
        let mut found = None;
        for j in 1..=SCAN_CAP {
            let l = cur.at(j);
            let gl = g.section(l)?;
            let rl = gl.rank()?;
            if rl >= need && rl < g_rank {
                found = Some((l, gl));
                break;
            }
        }
        let (l, gl) = found.ok_or_else(|| Error::InsufficientWindow {
            what: format!("no admissible pivot for embedding step {k}"),
            depth: SCAN_CAP,
        })?;
        chosen.push(l);
        // Recurse on the sections: the continuation must make the pair
        // (F_{{m_k}}, G_{{l_k}}) embed as well.
        cur = embed_window(&fk, &gl, &m.tail(mk), &cur.tail(l), count)?;
    }
    cur.with_head(&FinSet::new(chosen)?)
}

/// The unique `t ∈ F ↾ M` whose transfer into `L` is an initial segment of
/// `s ∈ G ↾ L`, found by scanning initial segments of `s` and inverting the
/// transfer.  Window depth: the position of `max(s)` in `L`.
pub fn project(
    f: &BarrierTerm,
    g: &BarrierTerm,
    m: &InfSetWindow,
    l: &InfSetWindow,
    s: &FinSet,
) -> Result<FinSet> {
    for x in s.iter() {
        if !l.contains(x) {
            return Err(Error::ElementNotInSet { element: x });
        }
    }
    if !g.member_inner(s) {
        return Err(Error::NotMember { set: s.elements().to_vec() });
    }
    for p in s.prefixes() {
        let t = transfer_map(&p, l, m)?;
        if f.member_inner(&t) {
            return Ok(t);
        }
    }
    Err(Error::NoProjection { set: s.elements().to_vec() })
}

/// The unique member of `b` that is an initial segment of the given element
/// stream (a barrier meets every infinite set this way).  Inspects at most
/// `cap` elements.
pub fn first_member_along(
    b: &BarrierTerm,
    elems: impl IntoIterator<Item = u32>,
    cap: usize,
) -> Result<FinSet> {
    if b.member_inner(&FinSet::empty()) {
        return Ok(FinSet::empty());
    }
    let mut prefix = Vec::new();
    for x in elems.into_iter().take(cap) {
        prefix.push(x);
        let p = FinSet::new(prefix.clone())?;
        if b.member_inner(&p) {
            return Ok(p);
        }
    }
    Err(Error::InsufficientWindow { what: "no member along the element stream".into(), depth: cap })
}

// ---------------------------------------------------------------------------
// Serialisation: externally tagged terms
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct Unit {}

impl Serialize for BarrierTerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(1))?;
        match self {
            Leaf => map.serialize_entry("leaf", &Unit {})?,
            Cube(k) => map.serialize_entry("cube", k)?,
            Schreier => map.serialize_entry("schreier", &Unit {})?,
            Sum(b, c) => map.serialize_entry("sum", &(b, c))?,
            Section(b, n) => map.serialize_entry("section", &(b, n))?,
            Transfer(b, m, n) => map.serialize_entry("transfer", &(b, m, n))?,
            Restrict(b, m) => map.serialize_entry("restrict", &(b, m))?,
        }
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawTerm {
    Leaf(Unit),
    Cube(u32),
    Schreier(Unit),
    Sum(Box<RawTerm>, Box<RawTerm>),
    Section(Box<RawTerm>, u32),
    Transfer(Box<RawTerm>, InfSetWindow, InfSetWindow),
    Restrict(Box<RawTerm>, InfSetWindow),
}

impl RawTerm {
    fn build(self) -> Result<BarrierTerm> {
        Ok(match self {
            RawTerm::Leaf(_) => BarrierTerm::leaf(),
            RawTerm::Cube(k) => BarrierTerm::cube(k),
            RawTerm::Schreier(_) => BarrierTerm::schreier(),
            RawTerm::Sum(b, c) => BarrierTerm::sum(b.build()?, c.build()?)?,
            RawTerm::Section(b, n) => Section(Box::new(b.build()?), n),
            RawTerm::Transfer(b, m, n) => BarrierTerm::transfer(b.build()?, m, n)?,
            RawTerm::Restrict(b, m) => BarrierTerm::restrict(b.build()?, m)?,
        })
    }
}

impl<'de> Deserialize<'de> for BarrierTerm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        RawTerm::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Display for BarrierTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Leaf => write!(f, "{{∅}}"),
            Cube(k) => write!(f, "[·]^{k}"),
            Schreier => write!(f, "S"),
            Sum(b, c) => write!(f, "({b} ⊕ {c})"),
            Section(b, n) => write!(f, "{b}_{{{n}}}"),
            Transfer(b, m, n) => write!(f, "T[{m}→{n}]({b})"),
            Restrict(b, m) => write!(f, "({b} ↾ {m})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::fs;

    fn window(n: u32) -> FinSet {
        FinSet::new((1..=n).collect()).unwrap()
    }

    #[test]
    fn membership_closed_forms() {
        assert!(Leaf.contains(&FinSet::empty()).unwrap());
        assert!(!Leaf.contains(&fs(&[1])).unwrap());
        assert!(BarrierTerm::cube(2).contains(&fs(&[3, 7])).unwrap());
        assert!(!BarrierTerm::cube(2).contains(&fs(&[3])).unwrap());
        // Self-counting: |s| must equal the least element.
        assert!(Schreier.contains(&fs(&[3, 5, 9])).unwrap());
        assert!(!Schreier.contains(&fs(&[2, 5, 9])).unwrap());
        assert!(!Schreier.contains(&FinSet::empty()).unwrap());
    }

    #[test]
    fn membership_respects_ground_sets() {
        let evens = InfSetWindow::progression(2, 2);
        let b = BarrierTerm::restrict(BarrierTerm::cube(2), evens).unwrap();
        assert!(b.contains(&fs(&[2, 6])).unwrap());
        assert!(b.contains(&fs(&[3, 6])).is_err());
    }

    #[test]
    fn sum_membership_splits_at_prefixes() {
        let b = BarrierTerm::sum(BarrierTerm::cube(1), Schreier).unwrap();
        // {2} ∪ {3,5,6}: right part has size 3 = min.
        assert!(b.contains(&fs(&[2, 3, 5, 6])).unwrap());
        // No split of {1,5} works: {1} leaves {5} needing five elements.
        assert!(!b.contains(&fs(&[1, 5])).unwrap());
        // Sum absorbs {∅} operands.
        assert_eq!(BarrierTerm::sum(Leaf, Schreier).unwrap(), Schreier);
        assert_eq!(BarrierTerm::sum(Schreier, Leaf).unwrap(), Schreier);
    }

    #[test]
    fn section_membership_matches_definition() {
        // s ∈ B iff s ≠ ∅ and s ∖ {min} ∈ B_{{min}}, across the grammar pool.
        let pool: Vec<BarrierTerm> = vec![
            BarrierTerm::cube(2),
            BarrierTerm::cube(3),
            Schreier,
            BarrierTerm::sum(BarrierTerm::cube(1), Schreier).unwrap(),
            BarrierTerm::sum(Schreier, BarrierTerm::cube(2)).unwrap(),
            BarrierTerm::transfer(
                BarrierTerm::cube(2),
                InfSetWindow::full(),
                InfSetWindow::progression(2, 2),
            )
            .unwrap(),
        ];
        for b in &pool {
            let g = b.ground();
            let win = FinSet::new((1..=9).filter(|&x| g.contains(x)).collect()).unwrap();
            for s in win.subsets() {
                let direct = b.member_inner(&s);
                let via_section = match s.least() {
                    None => b.member_inner(&FinSet::empty()),
                    Some(m) => b.section(m).map_or(false, |sec| sec.member_inner(&s.drop(1))),
                };
                assert_eq!(direct, via_section, "family {b}, set {s}");
            }
        }
    }

    #[test]
    fn leaf_has_no_sections() {
        assert!(matches!(Leaf.section(3), Err(Error::NoSections)));
    }

    #[test]
    fn section_of_cube_is_smaller_cube_on_the_tail() {
        let sec = BarrierTerm::cube(3).section(5).unwrap();
        // Extensionally [·]² on {6, 7, …}.
        assert!(sec.contains(&fs(&[6, 9])).unwrap());
        assert!(sec.contains(&fs(&[3, 9])).is_err());
        assert_eq!(sec.rank().unwrap(), OrdinalCNF::finite(2));
        let leaf_sec = BarrierTerm::cube(1).section(4).unwrap();
        assert!(leaf_sec.contains(&FinSet::empty()).unwrap());
    }

    #[test]
    fn section_of_self_counting_family_counts_down() {
        let sec = Schreier.section(4).unwrap();
        assert_eq!(sec.rank().unwrap(), OrdinalCNF::finite(3));
        assert!(sec.contains(&fs(&[5, 6, 7])).unwrap());
        assert!(!sec.contains(&fs(&[5, 6])).unwrap());
    }

    #[test]
    fn ranks_closed_forms() {
        assert_eq!(Leaf.rank().unwrap(), OrdinalCNF::zero());
        assert_eq!(BarrierTerm::cube(4).rank().unwrap(), OrdinalCNF::finite(4));
        assert_eq!(Schreier.rank().unwrap(), OrdinalCNF::omega());
    }

    #[test]
    fn rank_of_sum_adds_in_reverse_order() {
        let left_light = BarrierTerm::sum(BarrierTerm::cube(1), Schreier).unwrap();
        assert_eq!(left_light.rank().unwrap(), OrdinalCNF::omega().succ());
        // 1 + ω = ω: a finite right part is absorbed.
        let right_light = BarrierTerm::sum(Schreier, BarrierTerm::cube(1)).unwrap();
        assert_eq!(right_light.rank().unwrap(), OrdinalCNF::omega());
        let cubes = BarrierTerm::sum(BarrierTerm::cube(2), BarrierTerm::cube(3)).unwrap();
        assert_eq!(cubes.rank().unwrap(), OrdinalCNF::finite(5));
    }

    #[test]
    fn rank_is_invariant_under_transfer_and_restriction() {
        let evens = InfSetWindow::progression(2, 2);
        let t = BarrierTerm::transfer(Schreier, InfSetWindow::full(), evens.clone()).unwrap();
        assert_eq!(t.rank().unwrap(), OrdinalCNF::omega());
        let r = BarrierTerm::restrict(Schreier, evens).unwrap();
        assert_eq!(r.rank().unwrap(), OrdinalCNF::omega());
    }

    #[test]
    fn section_ranks_exhaust_the_rank_from_below() {
        // Sections of the rank-ω family climb through all finite ranks…
        for n in 1..=8 {
            let sec = Schreier.section(n).unwrap();
            assert_eq!(sec.rank().unwrap(), OrdinalCNF::finite(n as u64 - 1));
        }
        // …while sections of a successor-rank sum sit at the predecessor.
        let b = BarrierTerm::sum(BarrierTerm::cube(1), Schreier).unwrap();
        for n in 1..=8 {
            let sec = b.section(n).unwrap();
            assert_eq!(sec.rank().unwrap(), OrdinalCNF::omega(), "section at {n}");
        }
    }

    #[test]
    fn front_enumerates_in_lexicographic_order() {
        let front = BarrierTerm::cube(2).front(&window(4)).unwrap();
        let expect: Vec<FinSet> = vec![
            fs(&[1, 2]),
            fs(&[1, 3]),
            fs(&[1, 4]),
            fs(&[2, 3]),
            fs(&[2, 4]),
            fs(&[3, 4]),
        ];
        assert_eq!(front, expect);

        // {3,4,…} would need a third element past 4, so it falls outside.
        let sfront = Schreier.front(&window(4)).unwrap();
        assert_eq!(sfront, vec![fs(&[1]), fs(&[2, 3]), fs(&[2, 4])]);
    }

    #[test]
    fn front_members_form_an_antichain() {
        // Thin: no member is an initial segment of another.
        let pool = vec![
            BarrierTerm::cube(3),
            Schreier,
            BarrierTerm::sum(BarrierTerm::cube(1), Schreier).unwrap(),
            BarrierTerm::sum(Schreier, BarrierTerm::cube(1)).unwrap(),
        ];
        for b in &pool {
            let front = b.front(&window(7)).unwrap();
            for (i, s) in front.iter().enumerate() {
                for (j, t) in front.iter().enumerate() {
                    if i != j {
                        assert!(!s.is_initial_segment_of(t), "{b}: {s} ⊑ {t}");
                    }
                }
            }
        }
    }

    #[test]
    fn every_window_meets_the_family() {
        let pool = vec![
            BarrierTerm::cube(2),
            Schreier,
            BarrierTerm::sum(BarrierTerm::cube(1), Schreier).unwrap(),
        ];
        let windows = vec![
            InfSetWindow::full(),
            InfSetWindow::progression(2, 2),
            InfSetWindow::new(vec![3, 4], 10, 5).unwrap(),
        ];
        for b in &pool {
            for w in &windows {
                let member = first_member_along(b, (1..=64).map(|k| w.at(k)), 64).unwrap();
                assert!(b.contains(&member).unwrap());
            }
        }
    }

    #[test]
    fn closure_membership_follows_sections() {
        // {2,5} starts the member {2,5,9}; {2,5,7} is already too long.
        assert!(Schreier.extends_to_member(&fs(&[2, 5])).unwrap());
        assert!(Schreier.extends_to_member(&fs(&[6])).unwrap());
        assert!(!Schreier.extends_to_member(&fs(&[2, 5, 7])).unwrap());
        assert!(Schreier.extends_to_member(&FinSet::empty()).unwrap());
        // The one-member family {∅} extends nothing else.
        assert!(Leaf.extends_to_member(&FinSet::empty()).unwrap());
        assert!(!Leaf.extends_to_member(&fs(&[1])).unwrap());
        // Elements outside the ground set cut every extension off.
        let evens = InfSetWindow::progression(2, 2);
        let r = BarrierTerm::restrict(BarrierTerm::cube(2), evens).unwrap();
        assert!(!r.extends_to_member(&fs(&[3])).unwrap());
        assert!(r.extends_to_member(&fs(&[4])).unwrap());
    }

    #[test]
    fn spreading_holds_for_unrestricted_families() {
        for b in [BarrierTerm::cube(2), Schreier] {
            let rep = b.is_spreading(&window(7)).unwrap();
            assert!(rep.holds && !rep.empty_front, "{b}");
        }
        let sum = BarrierTerm::sum(BarrierTerm::cube(1), Schreier).unwrap();
        assert!(sum.is_spreading(&window(7)).unwrap().holds);
    }

    #[test]
    fn spreading_check_on_disjoint_window_is_vacuous() {
        let evens = InfSetWindow::progression(2, 2);
        let t =
            BarrierTerm::transfer(BarrierTerm::cube(2), InfSetWindow::full(), evens).unwrap();
        let odd_window = fs(&[1, 3, 5, 7]);
        let rep = t.is_spreading(&odd_window).unwrap();
        assert!(rep.holds && rep.empty_front);
    }

    #[test]
    fn transfer_membership_mirrors_the_source() {
        let evens = InfSetWindow::progression(2, 2);
        let t = BarrierTerm::transfer(Schreier, InfSetWindow::full(), evens.clone()).unwrap();
        // Preimage of {4,8,12} is {2,4,6}: not self-counting. Of {6,8,10}: {3,4,5}: yes.
        assert!(!t.contains(&fs(&[4, 8, 12])).unwrap());
        assert!(t.contains(&fs(&[6, 8, 10])).unwrap());
    }

    #[test]
    fn term_json_round_trip() {
        let term = BarrierTerm::sum(
            BarrierTerm::cube(1),
            BarrierTerm::restrict(Schreier, InfSetWindow::full()).unwrap(),
        )
        .unwrap();
        let json = serde_json::to_string(&term).unwrap();
        let back: BarrierTerm = serde_json::from_str(&json).unwrap();
        assert_eq!(term, back);

        let parsed: BarrierTerm =
            serde_json::from_str(r#"{"sum":[{"cube":1},{"schreier":{}}]}"#).unwrap();
        assert_eq!(parsed.rank().unwrap(), OrdinalCNF::omega().succ());
    }

    #[test]
    fn section_terms_from_json_are_resolved_lazily() {
        let parsed: BarrierTerm = serde_json::from_str(r#"{"section":[{"cube":3},2]}"#).unwrap();
        assert_eq!(parsed.rank().unwrap(), OrdinalCNF::finite(2));
        assert!(parsed.contains(&fs(&[4, 9])).unwrap());
        assert!(!parsed.contains(&fs(&[4])).unwrap());
        assert_eq!(parsed.ground(), InfSetWindow::full().tail(2));
    }
}
