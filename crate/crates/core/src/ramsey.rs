//! Colorings of k-element sets, homogeneous-subset search, stabilization of
//! seminorm-valued maps on plegma tuples, and the round-trip between
//! colorings and the norms they generate.
//!
//! The round-trip realises the equivalence behind oscillation stability: a
//! 2-coloring turns into a norming set whose unit-vector sums separate the
//! colors by a gap of 1, so any oscillation-stable set is monochromatic.

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::{BigInt, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::barrier::BarrierTerm;
use crate::finset::FinSet;
use crate::normspace::{
    coloring_norming_set, distance, vector_tuple_point, NormingSet, SeminormPoint, Vector,
};
use crate::plegma::{enumerate_plegma, PlegmaTuple};
use crate::rat::{self, q};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Colorings
// ---------------------------------------------------------------------------

/// Closed-form color assignment consulted for sets absent from the table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorRule {
    /// Every set gets this color.
    Constant(u32),
    /// `(Σ s) mod colors`.
    SumMod,
    /// `min(s) mod colors`.
    MinMod,
    /// `(max(s) − min(s)) mod colors`.
    SpanMod,
    /// Deterministic pseudorandom color from a hash of the set and the seed.
    Seeded(u64),
}

impl Default for ColorRule {
    fn default() -> Self {
        ColorRule::Constant(0)
    }
}

mod serde_table {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        t: &BTreeMap<FinSet, u32>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(&FinSet, u32)> = t.iter().map(|(k, c)| (k, *c)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<FinSet, u32>, D::Error> {
        Ok(Vec::<(FinSet, u32)>::deserialize(d)?.into_iter().collect())
    }
}

/// A total coloring of k-element sets: explicit table entries first, then the
/// rule.  Total on every window by construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    k: usize,
    colors: u32,
    #[serde(default)]
    rule: ColorRule,
    #[serde(default, with = "serde_table")]
    table: BTreeMap<FinSet, u32>,
}

impl Coloring {
    pub fn new(
        k: usize,
        colors: u32,
        rule: ColorRule,
        table: BTreeMap<FinSet, u32>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::Schema("colorings need k ≥ 1".into()));
        }
        if colors == 0 {
            return Err(Error::Schema("colorings need at least one color".into()));
        }
        if let ColorRule::Constant(c) = rule {
            if c >= colors {
                return Err(Error::Schema(format!("constant color {c} outside 0..{colors}")));
            }
        }
        for (s, c) in &table {
            if s.len() != k {
                return Err(Error::Schema(format!("table entry {s} is not a {k}-set")));
            }
            if *c >= colors {
                return Err(Error::Schema(format!("table color {c} outside 0..{colors}")));
            }
        }
        Ok(Coloring { k, colors, rule, table })
    }

    /// `C ≡ color` on k-sets.
    pub fn constant(k: usize, color: u32) -> Self {
        Coloring { k, colors: color + 1, rule: ColorRule::Constant(color), table: BTreeMap::new() }
    }

    /// Table entries override a fresh default color one past the listed ones.
    pub fn from_table(k: usize, entries: impl IntoIterator<Item = (FinSet, u32)>) -> Self {
        let table: BTreeMap<FinSet, u32> = entries.into_iter().collect();
        let max_listed = table.values().copied().max().unwrap_or(0);
        Coloring {
            k,
            colors: max_listed + 2,
            rule: ColorRule::Constant(max_listed + 1),
            table,
        }
    }

    /// A fully tabulated coloring (the rule is never consulted).
    pub fn table_total(
        k: usize,
        colors: u32,
        entries: impl IntoIterator<Item = (FinSet, u32)>,
    ) -> Result<Self> {
        Self::new(k, colors, ColorRule::Constant(0), entries.into_iter().collect())
    }

    /// Deterministic pseudorandom coloring.
    pub fn seeded(k: usize, colors: u32, seed: u64) -> Self {
        Coloring { k, colors, rule: ColorRule::Seeded(seed), table: BTreeMap::new() }
    }

    /// `C(s) = (Σ s) mod colors`.
    pub fn sum_mod(k: usize, colors: u32) -> Self {
        Coloring { k, colors, rule: ColorRule::SumMod, table: BTreeMap::new() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    /// Override one set's color (grows the palette if needed).
    pub fn with_entry(mut self, s: FinSet, color: u32) -> Result<Self> {
        if s.len() != self.k {
            return Err(Error::Schema(format!("{s} is not a {}-set", self.k)));
        }
        self.colors = self.colors.max(color + 1);
        self.table.insert(s, color);
        Ok(self)
    }

    /// The color of a k-set.
    pub fn color_of(&self, s: &FinSet) -> Result<u32> {
        if s.len() != self.k {
            return Err(Error::Schema(format!("{s} is not a {}-set", self.k)));
        }
        if let Some(c) = self.table.get(s) {
            return Ok(*c);
        }
        Ok(match &self.rule {
            ColorRule::Constant(c) => *c,
            ColorRule::SumMod => s.iter().sum::<u32>() % self.colors,
            ColorRule::MinMod => s.least().unwrap() % self.colors,
            ColorRule::SpanMod => (s.greatest().unwrap() - s.least().unwrap()) % self.colors,
            ColorRule::Seeded(seed) => (fnv1a(*seed, s) % self.colors as u64) as u32,
        })
    }

    /// All k-subsets of the window with the given color.
    pub fn sets_with_color(&self, color: u32, window: &FinSet) -> Vec<FinSet> {
        k_subsets(window, self.k)
            .into_iter()
            .filter(|s| self.color_of(s).map(|c| c == color).unwrap_or(false))
            .collect()
    }
}

fn fnv1a(seed: u64, s: &FinSet) -> u64 {
    let mut h = 0xcbf29ce484222325u64 ^ seed.wrapping_mul(0x100000001b3);
    for e in s.iter() {
        for b in e.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

/// All k-element subsets of a finite set, in lexicographic order.
pub fn k_subsets(window: &FinSet, k: usize) -> Vec<FinSet> {
    let elems = window.elements();
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (0..k).collect();
    if k > elems.len() {
        return out;
    }
    loop {
        out.push(FinSet::new(pick.iter().map(|&i| elems[i]).collect()).unwrap());
        // Advance the combination odometer.
        let mut t = k;
        loop {
            if t == 0 {
                return out;
            }
            t -= 1;
            if pick[t] + 1 <= elems.len() - (k - t) {
                pick[t] += 1;
                for j in t + 1..k {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Schedules
// ---------------------------------------------------------------------------

/// A strictly decreasing sequence of positive tolerances, one per level.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule(Vec<BigRational>);

impl Schedule {
    pub fn new(eps: Vec<BigRational>) -> Result<Self> {
        if eps.is_empty() {
            return Err(Error::Schema("schedules need at least one level".into()));
        }
        for (i, e) in eps.iter().enumerate() {
            if !e.is_positive() {
                return Err(Error::Schema(format!("schedule level {} is not positive", i + 1)));
            }
            if i > 0 && eps[i - 1] <= *e {
                return Err(Error::Schema(format!(
                    "schedule is not strictly decreasing at level {}",
                    i + 1
                )));
            }
        }
        Ok(Schedule(eps))
    }

    /// `(1/2, 1/4, …, 1/2ⁿ)`.
    pub fn halving(levels: usize) -> Self {
        Schedule((1..=levels as i64).map(|i| q(1, 1i64 << i.min(62))).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Tolerance of level `l` (1-indexed).
    pub fn eps(&self, l: usize) -> &BigRational {
        &self.0[l - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = &BigRational> {
        self.0.iter()
    }
}

impl Serialize for Schedule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(rat::fmt).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Schedule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let eps = v
            .iter()
            .map(|s| rat::parse(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Schedule::new(eps).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Homogeneous subsets
// ---------------------------------------------------------------------------

/// A subset `H` of the ground with `|H| ≥ target` whose k-subsets all share
/// one color.  Exact backtracking on small grounds, the recursive pigeonhole
/// argument beyond; the output is re-verified monochromatic.
pub fn homogenize(c: &Coloring, ground: &FinSet, target: usize) -> Result<(u32, FinSet)> {
    let elems = ground.elements().to_vec();
    if target < c.k() {
        // No k-subsets fit, so any subset is vacuously homogeneous.
        if elems.len() < target {
            return Err(Error::TargetUnreachable { target, best: elems });
        }
        return Ok((0, ground.take(target)));
    }
    let (color, h) = if c.k() == 1 {
        pigeonhole_singletons(c, &elems, target)?
    } else if elems.len() <= 24 {
        exact_homogeneous(c, &elems, target)?
    } else {
        recursive_ramsey(c, &elems, target)?
    };
    // Re-verify: the search must never hand back a non-homogeneous set.
    for s in k_subsets(&h, c.k()) {
        if c.color_of(&s)? != color {
            return Err(Error::Schema(format!("homogeneity verification failed at {s}")));
        }
    }
    Ok((color, h))
}

fn pigeonhole_singletons(c: &Coloring, elems: &[u32], target: usize) -> Result<(u32, FinSet)> {
    let mut classes: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for &e in elems {
        let col = c.color_of(&FinSet::singleton(e))?;
        classes.entry(col).or_default().push(e);
    }
    let (col, class) = classes
        .into_iter()
        .max_by_key(|(col, v)| (v.len(), u32::MAX - col))
        .ok_or(Error::TargetUnreachable { target, best: vec![] })?;
    if class.len() < target {
        return Err(Error::TargetUnreachable { target, best: class });
    }
    Ok((col, FinSet::new(class[..target].to_vec()).unwrap()))
}

fn exact_homogeneous(c: &Coloring, elems: &[u32], target: usize) -> Result<(u32, FinSet)> {
    let mut best: Vec<u32> = Vec::new();
    for color in 0..c.colors() {
        let mut chosen: Vec<u32> = Vec::new();
        if mono_dfs(c, color, &mut chosen, elems, target, &mut best)? {
            return Ok((color, FinSet::new(best).unwrap()));
        }
    }
    Err(Error::TargetUnreachable { target, best })
}

/// DFS for a monochromatic set: `chosen` is an increasing prefix, `cands` the
/// admissible extensions.  Returns true once `target` is reached.
fn mono_dfs(
    c: &Coloring,
    color: u32,
    chosen: &mut Vec<u32>,
    cands: &[u32],
    target: usize,
    best: &mut Vec<u32>,
) -> Result<bool> {
    if chosen.len() >= target {
        *best = chosen.clone();
        return Ok(true);
    }
    if chosen.len() + cands.len() < target {
        return Ok(false);
    }
    for (i, &x) in cands.iter().enumerate() {
        // Every new k-subset completed by x must have the right color.
        let mut ok = true;
        if chosen.len() + 1 >= c.k() {
            for mut u in combinations(chosen, c.k() - 1) {
                u.push(x);
                if c.color_of(&FinSet::new(u).unwrap())? != color {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        chosen.push(x);
        if chosen.len() > best.len() {
            *best = chosen.clone();
        }
        if mono_dfs(c, color, chosen, &cands[i + 1..], target, best)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

fn combinations(elems: &[u32], k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![vec![]];
    }
    if k > elems.len() {
        return vec![];
    }
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<u32>)> = vec![(0, vec![])];
    while let Some((from, cur)) = stack.pop() {
        if cur.len() == k {
            out.push(cur);
            continue;
        }
        // Push in reverse so the output comes out lexicographic.
        for i in (from..=elems.len() - (k - cur.len())).rev() {
            let mut next = cur.clone();
            next.push(elems[i]);
            stack.push((i + 1, next));
        }
    }
    out
}

/// The finite Ramsey recursion: peel off minima, homogenise the link coloring
/// of each (a coloring of (k−1)-sets), and pigeonhole the recorded colors.
fn recursive_ramsey(c: &Coloring, elems: &[u32], target: usize) -> Result<(u32, FinSet)> {
    let mut rest: Vec<u32> = elems.to_vec();
    let mut seq: Vec<(u32, u32)> = Vec::new();
    let budget = 4 * target * c.colors() as usize + 8;
    while rest.len() > c.k() && seq.len() < budget {
        let a = rest[0];
        let tail: Vec<u32> = rest[1..].to_vec();
        // Link coloring: color a (k−1)-set u by C(u ∪ {a}).
        let tail_set = FinSet::new(tail.clone()).unwrap();
        let mut entries = Vec::new();
        for u in k_subsets(&tail_set, c.k() - 1) {
            let joined = FinSet::from_unsorted(
                u.iter().chain(std::iter::once(a)).collect::<Vec<_>>(),
            )?;
            entries.push((u, c.color_of(&joined)?));
        }
        let link = Coloring::table_total(c.k() - 1, c.colors(), entries)?;
        let (col, h) = match homogenize(&link, &tail_set, tail.len()) {
            Ok(r) => r,
            Err(Error::TargetUnreachable { best, .. }) => {
                if best.len() < c.k() - 1 {
                    break;
                }
                let h = FinSet::new(best).unwrap();
                let col = if c.k() == 2 {
                    link.color_of(&FinSet::singleton(h.least().unwrap()))?
                } else {
                    link.color_of(&h.take(c.k() - 1))?
                };
                (col, h)
            }
            Err(e) => return Err(e),
        };
        seq.push((a, col));
        rest = h.elements().to_vec();
    }
    let mut classes: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (a, col) in seq {
        classes.entry(col).or_default().push(a);
    }
    let (col, class) = classes
        .into_iter()
        .max_by_key(|(col, v)| (v.len(), u32::MAX - col))
        .ok_or(Error::TargetUnreachable { target, best: vec![] })?;
    if class.len() < target {
        return Err(Error::TargetUnreachable { target, best: class });
    }
    Ok((col, FinSet::from_unsorted(class)?.take(target)))
}

// ---------------------------------------------------------------------------
// Front stabilization
// ---------------------------------------------------------------------------

/// Result of stabilising a seminorm-valued map on plegma tuples: a window
/// `m`, the chosen center, and the deepest schedule level verified.  For each
/// level `l ≤ depth`, every plegma tuple inside `m` beyond its `l`-th element
/// maps within `ε_l` of the center (certified by interval upper ends).
#[derive(Debug, Clone, Serialize)]
pub struct FrontStabilization {
    pub m: FinSet,
    pub center: SeminormPoint,
    pub depth: usize,
    pub exhausted: bool,
}

/// Stabilise `f` over the plegma n-tuples of `b` inside the window: pick the
/// majority value as center, then shrink the window level by level until all
/// inside tuples sit within the level tolerance, peeling one diagonal head
/// per level.
pub fn stabilize_front<F>(
    f: F,
    b: &BarrierTerm,
    n: usize,
    sched: &Schedule,
    window: &FinSet,
) -> Result<FrontStabilization>
where
    F: Fn(&PlegmaTuple) -> Result<SeminormPoint>,
{
    let ground = b.ground();
    let mut cur: Vec<u32> = window.iter().filter(|&e| ground.contains(e)).collect();
    let mut heads: Vec<u32> = Vec::new();
    let mut center: Option<SeminormPoint> = None;
    let mut depth = 0usize;
    let mut point_cache: BTreeMap<Vec<FinSet>, SeminormPoint> = BTreeMap::new();
    let mut eval = |t: &PlegmaTuple| -> Result<SeminormPoint> {
        if let Some(p) = point_cache.get(t.entries()) {
            return Ok(p.clone());
        }
        let p = f(t)?;
        point_cache.insert(t.entries().to_vec(), p.clone());
        Ok(p)
    };

    fn exhausted_report(
        heads: Vec<u32>,
        cur: Vec<u32>,
        center: Option<SeminormPoint>,
        depth: usize,
        level: usize,
    ) -> Result<FrontStabilization> {
        match center {
            Some(x) => Ok(FrontStabilization {
                m: FinSet::from_unsorted(heads.into_iter().chain(cur).collect::<Vec<_>>())?,
                center: x,
                depth,
                exhausted: true,
            }),
            None => Err(Error::WindowExhausted { level }),
        }
    }

    for (lidx, eps) in sched.iter().enumerate() {
        let level = lidx + 1;
        let win = FinSet::new(cur.clone()).unwrap();
        let tuples = enumerate_plegma(b, n, &win)?;
        if tuples.is_empty() {
            return exhausted_report(heads, cur, center, depth, level);
        }
        if center.is_none() {
            let mut tally: BTreeMap<Vec<Vec<BigRational>>, (usize, usize)> = BTreeMap::new();
            for (i, t) in tuples.iter().enumerate() {
                let p = eval(t)?;
                let e = tally.entry(p.rows().to_vec()).or_insert((0, i));
                e.0 += 1;
            }
            let (_, &(count, first)) = tally
                .iter()
                .max_by_key(|(_, &(count, first))| (count, usize::MAX - first))
                .unwrap();
            debug_assert!(count >= 1);
            center = Some(eval(&tuples[first])?);
        }
        let x = center.clone().unwrap();
        let mesh = eps / BigRational::from_integer(BigInt::from(4 * n.max(1) as i64));
        let mut near_cache: BTreeMap<Vec<Vec<BigRational>>, bool> = BTreeMap::new();
        // Shrink until no inside tuple escapes the level tolerance.
        loop {
            let win = FinSet::new(cur.clone()).unwrap();
            let tuples = enumerate_plegma(b, n, &win)?;
            let mut offender: Option<&PlegmaTuple> = None;
            for t in &tuples {
                let p = eval(t)?;
                let near = match near_cache.get(p.rows()) {
                    Some(v) => *v,
                    None => {
                        let v = p.rows() == x.rows()
                            || distance(&p, &x, &mesh)?.hi < *eps;
                        near_cache.insert(p.rows().to_vec(), v);
                        v
                    }
                };
                if !near {
                    offender = Some(t);
                    break;
                }
            }
            match offender {
                None => break,
                Some(t) => {
                    // Drop the least element of the offending tuple: escapes
                    // live near the start of the window in spreading setups.
                    let culprit = t.entries().iter().filter_map(|s| s.least()).min().unwrap();
                    cur.retain(|&e| e != culprit);
                    if cur.is_empty() {
                        return exhausted_report(heads, cur, center, depth, level);
                    }
                }
            }
        }
        depth = level;
        if cur.is_empty() {
            return exhausted_report(heads, cur, center, depth, level);
        }
        heads.push(cur.remove(0));
    }
    let m = FinSet::from_unsorted(heads.into_iter().chain(cur).collect::<Vec<_>>())?;
    Ok(FrontStabilization { m, center: center.unwrap(), depth, exhausted: false })
}

// ---------------------------------------------------------------------------
// Oscillation stability
// ---------------------------------------------------------------------------

/// Indices `M ⊆ {1..|vectors|}`, `|M| ≥ target`, such that any two k-tuples
/// from `M` induce seminorms within `eps` of each other (certified).  Search:
/// color k-sets by the exact vertex signature of their induced point, find a
/// homogeneous set, then certify pairwise with distance intervals.
pub fn oscillation_stable_subset(
    vectors: &[Vector],
    w: &NormingSet,
    k: usize,
    eps: &BigRational,
    target: usize,
) -> Result<FinSet> {
    if k == 0 || vectors.len() < k {
        return Err(Error::Schema(format!(
            "need k ≥ 1 and at least k vectors, got k = {k} with {}",
            vectors.len()
        )));
    }
    let idx_window = FinSet::new((1..=vectors.len() as u32).collect()).unwrap();
    let tuples = k_subsets(&idx_window, k);
    let mut points: BTreeMap<FinSet, SeminormPoint> = BTreeMap::new();
    for t in &tuples {
        let xs: Vec<Vector> =
            t.iter().map(|i| vectors[i as usize - 1].clone()).collect();
        points.insert(t.clone(), vector_tuple_point(&xs, w, format!("tuple {t}"))?);
    }
    // Exact vertex signature over {−1, 0, 1}^k.
    let vertices = vertex_grid(k);
    let mut sig_ids: BTreeMap<Vec<BigRational>, u32> = BTreeMap::new();
    let mut entries = Vec::new();
    for t in &tuples {
        let p = &points[t];
        let sig: Vec<BigRational> = vertices.iter().map(|v| p.eval(v)).collect();
        let next = sig_ids.len() as u32;
        let id = *sig_ids.entry(sig).or_insert(next);
        entries.push((t.clone(), id));
    }
    let coloring = Coloring::table_total(k, sig_ids.len() as u32, entries)?;
    let (_, m) = homogenize(&coloring, &idx_window, target)?;
    // Certification: the signature cell is a heuristic, the intervals decide.
    let mesh = eps / BigRational::from_integer(BigInt::from(4 * k as i64));
    let msets = k_subsets(&m, k);
    for (i, a) in msets.iter().enumerate() {
        for b in &msets[i + 1..] {
            let (pa, pb) = (&points[a], &points[b]);
            if pa.rows() == pb.rows() {
                continue;
            }
            if distance(pa, pb, &mesh)?.hi >= *eps {
                return Err(Error::TargetUnreachable { target, best: m.elements().to_vec() });
            }
        }
    }
    Ok(m)
}

fn vertex_grid(k: usize) -> Vec<Vec<BigRational>> {
    let vals = [rat::qi(-1), BigRational::zero(), rat::qi(1)];
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        out.push(idx.iter().map(|&i| vals[i].clone()).collect());
        let mut t = k;
        loop {
            if t == 0 {
                return out;
            }
            t -= 1;
            idx[t] += 1;
            if idx[t] < vals.len() {
                break;
            }
            idx[t] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Round-trip between colorings and norms
// ---------------------------------------------------------------------------

/// Outcome of the coloring → norming set → oscillation-stable set → coloring
/// round-trip.
#[derive(Debug, Clone, Serialize)]
pub struct RoundtripReport {
    /// The stabilised set of positions (elements of the window).
    pub m: FinSet,
    /// Common color of all k-subsets of `m`.
    pub color: u32,
    /// `(s, ‖Σ_{i∈s} eᵢ‖_W)` for each k-subset s of `m`.
    pub norm_values: Vec<(FinSet, String)>,
    /// Color 0 forces norm = k, color 1 forces norm ≤ k−1.
    pub gap_holds: bool,
    /// Re-scan of the coloring on `[m]^k` (the independent verdict).
    pub homogeneous: bool,
}

/// Build the coloring's norming set, stabilise the unit vectors at `eps=1/2`,
/// and decode the common color from the norms of unit-vector sums.
pub fn ramsey_roundtrip(c: &Coloring, window: &FinSet, target: usize) -> Result<RoundtripReport> {
    if c.colors() != 2 {
        return Err(Error::Schema(format!(
            "round-trip needs a 2-coloring, got {} colors",
            c.colors()
        )));
    }
    let w = coloring_norming_set(c, window);
    let vectors: Vec<Vector> = window.iter().map(Vector::unit).collect();
    let m_idx = oscillation_stable_subset(&vectors, &w, c.k(), &q(1, 2), target)?;
    let m = FinSet::new(
        m_idx.iter().map(|i| window.at(i as usize).unwrap()).collect(),
    )
    .unwrap();
    let subsets = k_subsets(&m, c.k());
    let color = c.color_of(&subsets[0])?;
    let mut homogeneous = true;
    let mut gap_holds = true;
    let mut norm_values = Vec::with_capacity(subsets.len());
    let k_rat = rat::qi(c.k() as i64);
    for s in &subsets {
        if c.color_of(s)? != color {
            homogeneous = false;
        }
        let x = s.iter().fold(Vector::zero(), |v, i| v.add(&Vector::unit(i)));
        let val = w.norm(&x);
        let fact = match c.color_of(s)? {
            0 => val == k_rat,
            _ => val <= &k_rat - rat::qi(1),
        };
        gap_holds &= fact;
        norm_values.push((s.clone(), rat::fmt(&val)));
    }
    Ok(RoundtripReport { m, color, norm_values, gap_holds, homogeneous })
}
