//! Barrier-indexed matrices of normalised vectors and their limit seminorms:
//! the per-tuple seminorm map Ψⁿ, stabilisation into compatible models,
//! spreading models as the depth-one case, the sum and lift chain steps,
//! plegma-block validation, and gliding-hump block replacement.

use num::{BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::barrier::BarrierTerm;
use crate::finset::{FinSet, InfSetWindow};
use crate::normspace::{self, NormingSet, SeminormPoint, Vector};
use crate::plegma::{self, PlegmaTuple};
use crate::ramsey::{self, Schedule};
use crate::rat::{self, Interval};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Matrix sources
// ---------------------------------------------------------------------------

/// Closed-form generators for matrix entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GeneratorRule {
    /// `entry(row, s) = e_{max(s) + row}` — unit vectors gliding right.
    #[serde(rename = "shifted-basis")]
    UnitShift,
    /// `entry(_, s) = e_{max s}` — constant rows tracking the last element.
    #[serde(rename = "max-basis")]
    UnitMax,
    /// `entry(_, s) = (e_{2·max s} + e_{2·max s + 1}) / ‖·‖` — short blocks.
    #[serde(rename = "disjoint-pair")]
    DisjointPair,
}

/// One explicit table cell: the vector sitting at `(row, set)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub row: usize,
    pub set: FinSet,
    pub vector: Vector,
}

/// A single term `coeff · f_index` of a finite expansion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    pub index: usize,
    #[serde(with = "rat::serde_rat")]
    pub coeff: BigRational,
}

/// How a lifted entry expands in the inner matrix's model basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExpansionRule {
    /// `y_t = f_{min t}`: the single term at the first leading element.
    IdentityMin,
    /// `y_t = f_index` for a fixed index, independent of `t`.
    Single { index: usize },
    /// A fixed finite expansion `Σ coeffᵢ · f_{indexᵢ}` shared by all cells.
    Fixed { terms: Vec<ExpansionTerm> },
}

impl ExpansionRule {
    /// The expansion `(index, coeff)` pairs for row `row` at leading part `t`.
    fn pairs(&self, row: usize, t: &FinSet) -> Result<Vec<(usize, BigRational)>> {
        match self {
            ExpansionRule::IdentityMin => match t.least() {
                Some(l) => Ok(vec![(l as usize, BigRational::one())]),
                None => Err(Error::EntryOutOfRange { row, set: t.elements().to_vec() }),
            },
            ExpansionRule::Single { index } => Ok(vec![(*index, BigRational::one())]),
            ExpansionRule::Fixed { terms } => {
                Ok(terms.iter().map(|t| (t.index, t.coeff.clone())).collect())
            }
        }
    }
}

/// How a matrix produces the vector at `(row, s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EntryMap {
    /// Explicit finite table; anything unlisted is out of range.
    Table { entries: Vec<TableEntry> },
    /// A closed-form generator.
    Generator { name: GeneratorRule },
    /// `entry(_, s) = vectors[min(s) − 1]`: a plain sequence indexed by the
    /// first element, the constant-rows wrapper used for spreading models.
    Seq { vectors: Vec<Vector> },
    /// Entries over a sum barrier: `entry(_, l⌢s) = inner(l, s)`, the first
    /// element selecting the inner row.
    Sum { inner: Box<EntryMap> },
    /// Entries over `Cube(k) ⊕ B`: the leading `k` elements pick an
    /// expansion, the rest decomposes in the inner barrier; undefined cells
    /// fall back to a fixed vector.
    Lifted { inner: Box<MatrixSource>, rule: ExpansionRule, k: usize, fallback: Vector },
}

/// A barrier-indexed matrix of vectors: `entry(row, s)` for members `s`,
/// norms taken in `host`.  Every entry consumed by stabilisation must be
/// normalised (`‖entry‖ = 1`), which the seminorm construction re-checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixSource {
    pub barrier: BarrierTerm,
    pub host: NormingSet,
    pub entry: EntryMap,
}

impl MatrixSource {
    /// The vector at `(row, s)`; `row` is 1-based.
    pub fn entry(&self, row: usize, s: &FinSet) -> Result<Vector> {
        self.entry.produce(row, s, &self.host)
    }

    /// Whether the entry at `(row, s)` comes from a lift's fallback vector
    /// rather than a genuine decomposition (always false for other kinds).
    pub fn uses_fallback(&self, row: usize, s: &FinSet) -> Result<bool> {
        self.entry.falls_back(row, s)
    }

    /// A matrix over singleton fronts with `entry(n, {i}) = rows[n−1][i−1]`.
    pub fn from_rows(host: &NormingSet, rows: &[Vec<Vector>]) -> Self {
        let mut entries = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            for (i, x) in row.iter().enumerate() {
                entries.push(TableEntry {
                    row: r + 1,
                    set: FinSet::singleton(i as u32 + 1),
                    vector: x.clone(),
                });
            }
        }
        MatrixSource {
            barrier: BarrierTerm::cube(1),
            host: host.clone(),
            entry: EntryMap::Table { entries },
        }
    }
}

impl EntryMap {
    fn produce(&self, row: usize, s: &FinSet, host: &NormingSet) -> Result<Vector> {
        let out_of_range = || Error::EntryOutOfRange { row, set: s.elements().to_vec() };
        match self {
            EntryMap::Table { entries } => entries
                .iter()
                .find(|e| e.row == row && &e.set == s)
                .map(|e| e.vector.clone())
                .ok_or_else(out_of_range),
            EntryMap::Generator { name } => {
                let m = s.greatest().ok_or_else(out_of_range)?;
                match name {
                    GeneratorRule::UnitShift => Ok(Vector::unit(m + row as u32)),
                    GeneratorRule::UnitMax => Ok(Vector::unit(m)),
                    GeneratorRule::DisjointPair => {
                        let v = Vector::unit(2 * m).add(&Vector::unit(2 * m + 1));
                        let nrm = host.norm(&v);
                        if nrm.is_zero() {
                            return Err(Error::Schema(
                                "disjoint-pair generator has zero host norm".into(),
                            ));
                        }
                        Ok(v.scale(&nrm.recip()))
                    }
                }
            }
            EntryMap::Seq { vectors } => {
                let m = s.least().ok_or_else(out_of_range)? as usize;
                vectors.get(m - 1).cloned().ok_or_else(out_of_range)
            }
            EntryMap::Sum { inner } => {
                let l = s.least().ok_or_else(out_of_range)? as usize;
                inner.produce(l, &s.drop(1), host)
            }
            EntryMap::Lifted { inner, rule, k, fallback } => {
                if s.len() < *k {
                    return Err(out_of_range());
                }
                Ok(lifted_value(inner, rule, *k, row, s)?.unwrap_or_else(|| fallback.clone()))
            }
        }
    }

    fn falls_back(&self, row: usize, s: &FinSet) -> Result<bool> {
        match self {
            EntryMap::Sum { inner } => match s.least() {
                Some(l) => inner.falls_back(l as usize, &s.drop(1)),
                None => Ok(false),
            },
            EntryMap::Lifted { inner, rule, k, .. } => {
                if s.len() < *k {
                    return Err(Error::EntryOutOfRange { row, set: s.elements().to_vec() });
                }
                Ok(lifted_value(inner, rule, *k, row, s)?.is_none())
            }
            _ => Ok(false),
        }
    }
}

/// The genuine value of a lifted cell, or `None` when the trailing part has
/// no decomposition (or the expansion collapses) and the fallback applies.
fn lifted_value(
    inner: &MatrixSource,
    rule: &ExpansionRule,
    k: usize,
    row: usize,
    s: &FinSet,
) -> Result<Option<Vector>> {
    let t = s.take(k);
    let rest = s.drop(k);
    let pairs = rule.pairs(row, &t)?;
    let max_f = match pairs.iter().map(|(i, _)| *i).max() {
        Some(m) if m >= 1 => m,
        _ => return Err(Error::Schema("lift expansion must be nonempty".into())),
    };
    let parts = match plegma::decompose(&inner.barrier, &rest, max_f) {
        Ok(p) => p,
        Err(_) => return Ok(None),
    };
    let mut z = Vector::zero();
    for (i, a) in &pairs {
        let xi = inner.entry(*i, &parts.entries()[*i - 1])?;
        z = z.add(&xi.scale(a));
    }
    let nrm = inner.host.norm(&z);
    if nrm.is_zero() {
        return Ok(None);
    }
    Ok(Some(z.scale(&nrm.recip())))
}

// ---------------------------------------------------------------------------
// The per-tuple seminorm map
// ---------------------------------------------------------------------------

/// The seminorm `a ↦ ‖Σ aᵢ · entry(i, tᵢ)‖` attached to a plegma tuple,
/// with every entry checked for barrier membership first.
pub fn psi_n(mx: &MatrixSource, t: &PlegmaTuple) -> Result<SeminormPoint> {
    if t.is_empty() {
        return Err(Error::Schema("the empty tuple has no seminorm".into()));
    }
    let mut xs = Vec::with_capacity(t.len());
    for (i, s) in t.iter().enumerate() {
        if !mx.barrier.contains(s)? {
            return Err(Error::NotMember { set: s.elements().to_vec() });
        }
        xs.push(mx.entry(i + 1, s)?);
    }
    let prov = format!(
        "psi_{}({})",
        t.len(),
        t.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
    );
    normspace::vector_tuple_point(&xs, &mx.host, prov)
}

// ---------------------------------------------------------------------------
// Stabilisation into a model
// ---------------------------------------------------------------------------

/// Whether a stabilised level seminorm is a genuine norm, with a kernel
/// vector (exact rationals) when it degenerates.
#[derive(Debug, Clone, Serialize)]
pub struct NormVerdict {
    pub is_norm: bool,
    pub kernel_witness: Option<Vec<String>>,
}

/// The stabilised model: diagonal window `m`, one seminorm per dimension,
/// certified compatibility defects between consecutive levels, norm
/// verdicts, and the deepest schedule level verified everywhere.
#[derive(Debug, Clone, Serialize)]
pub struct ModelReport {
    pub m: FinSet,
    pub rhos: Vec<SeminormPoint>,
    pub compat_defects: Vec<Interval>,
    pub norm_verdicts: Vec<NormVerdict>,
    pub depth: usize,
    pub exhausted: bool,
}

/// Stabilise Ψⁿ for `n = 1..=nmax` over nested windows and collect the level
/// seminorms; `m` is the diagonal of the shrinking windows.
pub fn stabilize_matrix(
    mx: &MatrixSource,
    nmax: usize,
    sched: &Schedule,
    window: &FinSet,
) -> Result<ModelReport> {
    stabilize_levels(mx, nmax, sched, window, false)
}

/// The spreading model of a (normalised) sequence: the constant-rows matrix
/// over singleton fronts, stabilised with the far-out constraint that level
/// `n` only sees window elements `≥ n`.
pub fn spreading_model(
    seq: &[Vector],
    host: &NormingSet,
    nmax: usize,
    sched: &Schedule,
) -> Result<ModelReport> {
    let mx = MatrixSource {
        barrier: BarrierTerm::cube(1),
        host: host.clone(),
        entry: EntryMap::Seq { vectors: seq.to_vec() },
    };
    let window = FinSet::new((1..=seq.len() as u32).collect())?;
    stabilize_levels(&mx, nmax, sched, &window, true)
}

fn stabilize_levels(
    mx: &MatrixSource,
    nmax: usize,
    sched: &Schedule,
    window: &FinSet,
    far_out: bool,
) -> Result<ModelReport> {
    let mut cur: Vec<u32> = window.elements().to_vec();
    let mut rhos: Vec<SeminormPoint> = Vec::new();
    let mut diag: Vec<u32> = Vec::new();
    let mut depth = usize::MAX;
    let mut exhausted = false;
    for n in 1..=nmax {
        let level_window = if far_out {
            FinSet::new(cur.iter().copied().filter(|&e| e >= n as u32).collect())?
        } else {
            FinSet::new(cur.clone())?
        };
        let st = match ramsey::stabilize_front(|t| psi_n(mx, t), &mx.barrier, n, sched, &level_window)
        {
            Ok(st) => st,
            // Deeper levels running out of room truncate the report; the
            // first level failing outright is a genuine error.
            Err(Error::WindowExhausted { .. }) if n > 1 => {
                exhausted = true;
                break;
            }
            Err(e) => return Err(e),
        };
        exhausted |= st.exhausted;
        depth = depth.min(st.depth);
        let prev = diag.last().copied().unwrap_or(0);
        if let Some(mn) = st.m.iter().find(|&e| e > prev) {
            diag.push(mn);
        }
        cur = st.m.elements().to_vec();
        rhos.push(st.center);
    }
    let mesh = rat::q(1, 8);
    let mut compat_defects = Vec::new();
    for i in 1..rhos.len() {
        compat_defects.push(normspace::distance(&rhos[i - 1], &rhos[i].restrict(i), &mesh)?);
    }
    let norm_verdicts = rhos
        .iter()
        .map(|r| NormVerdict {
            is_norm: r.is_norm(),
            kernel_witness: r.kernel_witness().map(|ws| ws.iter().map(rat::fmt).collect()),
        })
        .collect();
    if depth == usize::MAX {
        depth = 0;
    }
    Ok(ModelReport {
        m: FinSet::new(diag)?,
        rhos,
        compat_defects,
        norm_verdicts,
        depth,
        exhausted,
    })
}

// ---------------------------------------------------------------------------
// Chain steps
// ---------------------------------------------------------------------------

/// The barrier `Cube(k) ⊕ B`, with the cube restricted so both summands
/// share `B`'s ground set.
fn cube_prefix_sum(k: u32, b: &BarrierTerm) -> Result<BarrierTerm> {
    let ground = b.ground();
    let cube = if ground == InfSetWindow::full() {
        BarrierTerm::cube(k)
    } else {
        BarrierTerm::restrict(BarrierTerm::cube(k), ground)?
    };
    BarrierTerm::sum(cube, b.clone())
}

/// One chain step up: the matrix over `Cube(1) ⊕ B` whose entry at
/// `{l} ∪ s` is the inner entry at `(l, s)` — row selection moves into the
/// leading element.
pub fn build_sum_matrix(mx: &MatrixSource) -> Result<MatrixSource> {
    Ok(MatrixSource {
        barrier: cube_prefix_sum(1, &mx.barrier)?,
        host: mx.host.clone(),
        entry: EntryMap::Sum { inner: Box::new(mx.entry.clone()) },
    })
}

/// The lift of `inner` along finite expansions: a matrix over
/// `Cube(k) ⊕ B` whose entry at `t ∪ s` (|t| = k) is the normalised
/// expansion `Σ coeffᵢ · inner(i, rᵢ)` over the decomposition `(rᵢ)` of `s`,
/// or `fallback` where no decomposition exists.
pub fn lift_block_matrix(
    inner: &MatrixSource,
    rule: ExpansionRule,
    k: usize,
    fallback: Vector,
) -> Result<MatrixSource> {
    if k == 0 {
        return Err(Error::Schema("the lift needs at least one leading coordinate".into()));
    }
    Ok(MatrixSource {
        barrier: cube_prefix_sum(k as u32, &inner.barrier)?,
        host: inner.host.clone(),
        entry: EntryMap::Lifted { inner: Box::new(inner.clone()), rule, k, fallback },
    })
}

// ---------------------------------------------------------------------------
// Block validation
// ---------------------------------------------------------------------------

/// Verdict of the block check: a cutoff `m` past which all plegma tuples
/// have successive entry supports, or a violating tuple.
#[derive(Debug, Clone, Serialize)]
pub struct BlockCheck {
    pub is_block: bool,
    pub cutoff: Option<u32>,
    pub witness: Option<Vec<FinSet>>,
}

/// Search for the least cutoff `m` such that every plegma `n`-tuple of the
/// barrier inside the window and beyond `m` has successive entry supports
/// (and at least one tuple survives the cut).
pub fn is_plegma_block(mx: &MatrixSource, n: usize, window: &FinSet) -> Result<BlockCheck> {
    let tuples = plegma::enumerate_plegma(&mx.barrier, n, window)?;
    let mut viol_min_max: Option<u32> = None;
    let mut worst: Option<Vec<FinSet>> = None;
    let mut good_mins: Vec<u32> = Vec::new();
    for t in &tuples {
        let Some(lo) = t.entries().iter().filter_map(|s| s.least()).min() else {
            continue;
        };
        if successive_supports(mx, t)? {
            good_mins.push(lo);
        } else if viol_min_max.is_none_or(|v| lo > v) {
            viol_min_max = Some(lo);
            worst = Some(t.entries().to_vec());
        }
    }
    match viol_min_max {
        None if good_mins.is_empty() => {
            Ok(BlockCheck { is_block: false, cutoff: None, witness: None })
        }
        None => Ok(BlockCheck { is_block: true, cutoff: Some(0), witness: None }),
        Some(v) if good_mins.iter().any(|&lo| lo > v) => {
            Ok(BlockCheck { is_block: true, cutoff: Some(v), witness: None })
        }
        Some(_) => Ok(BlockCheck { is_block: false, cutoff: None, witness: worst }),
    }
}

fn successive_supports(mx: &MatrixSource, t: &PlegmaTuple) -> Result<bool> {
    let mut prev_max: Option<u32> = None;
    for (i, s) in t.iter().enumerate() {
        let supp = mx.entry(i + 1, s)?.support();
        let (Some(lo), Some(hi)) = (supp.least(), supp.greatest()) else {
            return Ok(false);
        };
        if prev_max.is_some_and(|p| p >= lo) {
            return Ok(false);
        }
        prev_max = Some(hi);
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Gliding hump
// ---------------------------------------------------------------------------

/// Rows of vectors whose coordinates die out along each row — the finite
/// stand-in for coordinatewise-null sequences.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NullRowMatrix {
    pub rows: Vec<Vec<Vector>>,
}

/// Outcome of the gliding hump: one shared strictly increasing pick per
/// column, the truncated-and-renormalised blocks per row, the exact
/// replacement errors, and the blocks repackaged as a matrix over singleton
/// fronts.
#[derive(Debug, Clone, Serialize)]
pub struct HumpReport {
    pub picks: Vec<usize>,
    pub blocks: Vec<Vec<Vector>>,
    pub errors: Vec<Vec<String>>,
    pub matrix: MatrixSource,
}

/// Replace each row by blocks: scan columns left to right keeping a global
/// support frontier, accept a column once every row's mass at or below the
/// frontier fits its budget `2^{−(row+col+1)}` twice over, then truncate
/// beyond the frontier and renormalise.  The ℓ₁ mass bounds the host-norm
/// error because every host functional has coordinates in `[−1, 1]`.
pub fn gliding_hump(input: &NullRowMatrix, host: &NormingSet, cols: usize) -> Result<HumpReport> {
    let nrows = input.rows.len();
    if nrows == 0 || cols == 0 {
        return Err(Error::Schema("the gliding hump needs rows and a positive column count".into()));
    }
    let width = input.rows.iter().map(|r| r.len()).min().unwrap_or(0);
    // Normalise rows exactly up front; a zero vector can never glide.
    let mut normed: Vec<Vec<Vector>> = Vec::with_capacity(nrows);
    for (r, row) in input.rows.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for x in row {
            let nrm = host.norm(x);
            if nrm.is_zero() {
                return Err(Error::NotCoordinatewiseNull { row: r + 1 });
            }
            out.push(x.scale(&nrm.recip()));
        }
        normed.push(out);
    }
    let mut picks: Vec<usize> = Vec::with_capacity(cols);
    let mut blocks: Vec<Vec<Vector>> = vec![Vec::with_capacity(cols); nrows];
    let mut errors: Vec<Vec<BigRational>> = vec![Vec::with_capacity(cols); nrows];
    let mut frontier: u32 = 0;
    let mut next = 1usize;
    for i in 1..=cols {
        let mut chosen: Option<(usize, Vec<(Vector, BigRational)>)> = None;
        let mut last_block = 1usize;
        'candidate: for k in next..=width {
            let mut column: Vec<(Vector, BigRational)> = Vec::with_capacity(nrows);
            for (r, row) in normed.iter().enumerate() {
                let x = &row[k - 1];
                let below = x
                    .entries()
                    .filter(|(c, _)| *c <= frontier)
                    .fold(BigRational::zero(), |acc, (_, v)| acc + v.abs());
                let budget = rat::q(1, 1i64 << ((r + 1) + i + 1));
                if &below + &below > budget {
                    last_block = r + 1;
                    continue 'candidate;
                }
                let tail = Vector::from_pairs(
                    x.entries().filter(|(c, _)| *c > frontier).map(|(c, v)| (c, v.clone())),
                );
                let nrm = host.norm(&tail);
                if nrm.is_zero() {
                    last_block = r + 1;
                    continue 'candidate;
                }
                let y = tail.scale(&nrm.recip());
                let err = host.norm(&y.sub(x));
                column.push((y, err));
            }
            chosen = Some((k, column));
            break;
        }
        let Some((k, column)) = chosen else {
            return Err(Error::NotCoordinatewiseNull { row: last_block });
        };
        next = k + 1;
        picks.push(k);
        for (r, (y, err)) in column.into_iter().enumerate() {
            if let Some(hi) = y.support().greatest() {
                frontier = frontier.max(hi);
            }
            blocks[r].push(y);
            errors[r].push(err);
        }
    }
    let matrix = MatrixSource::from_rows(host, &blocks);
    Ok(HumpReport {
        picks,
        blocks,
        errors: errors.iter().map(|row| row.iter().map(rat::fmt).collect()).collect(),
        matrix,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normspace::{equals_l1, equals_sup};
    use crate::rat::q;

    fn fs(elems: &[u32]) -> FinSet {
        FinSet::new(elems.to_vec()).expect("strictly increasing test set")
    }

    fn tuple(entries: &[&[u32]]) -> PlegmaTuple {
        PlegmaTuple::new(entries.iter().map(|e| fs(e)).collect()).expect("plegma test tuple")
    }

    fn units(n: u32) -> Vec<Vector> {
        (1..=n).map(Vector::unit).collect()
    }

    fn unit_shift_matrix(host: NormingSet) -> MatrixSource {
        MatrixSource {
            barrier: BarrierTerm::cube(1),
            host,
            entry: EntryMap::Generator { name: GeneratorRule::UnitShift },
        }
    }

    // --- entries -----------------------------------------------------------

    #[test]
    fn generators_produce_the_advertised_vectors() {
        let mx = unit_shift_matrix(NormingSet::L1);
        assert_eq!(mx.entry(2, &fs(&[3, 5])).unwrap(), Vector::unit(7));

        let maxed = MatrixSource {
            barrier: BarrierTerm::schreier(),
            host: NormingSet::Schreier,
            entry: EntryMap::Generator { name: GeneratorRule::UnitMax },
        };
        assert_eq!(maxed.entry(4, &fs(&[2, 6])).unwrap(), Vector::unit(6));

        let pairs = MatrixSource {
            barrier: BarrierTerm::cube(1),
            host: NormingSet::L1,
            entry: EntryMap::Generator { name: GeneratorRule::DisjointPair },
        };
        let v = pairs.entry(1, &fs(&[3])).unwrap();
        assert_eq!(v.get(6), q(1, 2));
        assert_eq!(v.get(7), q(1, 2));
        assert_eq!(NormingSet::L1.norm(&v), q(1, 1));
    }

    #[test]
    fn table_misses_are_out_of_range() {
        let mx = MatrixSource::from_rows(&NormingSet::L1, &[units(3)]);
        assert_eq!(mx.entry(1, &fs(&[2])).unwrap(), Vector::unit(2));
        assert!(matches!(
            mx.entry(2, &fs(&[1])),
            Err(Error::EntryOutOfRange { row: 2, .. })
        ));
    }

    // --- psi ----------------------------------------------------------------

    #[test]
    fn constant_entries_give_a_rank_one_degenerate_seminorm() {
        let mx = MatrixSource {
            barrier: BarrierTerm::cube(1),
            host: NormingSet::L1,
            entry: EntryMap::Seq { vectors: vec![Vector::unit(1); 6] },
        };
        let p = psi_n(&mx, &tuple(&[&[2], &[4]])).unwrap();
        assert_eq!(p.eval(&[q(1, 1), q(1, 1)]), q(2, 1));
        assert_eq!(p.eval(&[q(1, 1), q(-1, 1)]), q(0, 1));
        assert!(!p.is_norm());
        let w = p.kernel_witness().expect("rank-one seminorm has a kernel");
        assert_eq!(p.eval(&w), q(0, 1));
    }

    #[test]
    fn disjoint_supports_under_l1_give_exactly_l1() {
        let mx = unit_shift_matrix(NormingSet::L1);
        let p = psi_n(&mx, &tuple(&[&[1], &[3], &[6]])).unwrap();
        assert!(equals_l1(&p));
    }

    #[test]
    fn shifted_entries_over_pairs_in_the_self_counting_host() {
        let mx = MatrixSource {
            barrier: BarrierTerm::cube(2),
            host: NormingSet::Schreier,
            entry: EntryMap::Generator { name: GeneratorRule::UnitShift },
        };
        // Entries e₄ and e₆; the pair {4,6} is admissible, so this is ℓ₁².
        let p = psi_n(&mx, &tuple(&[&[1, 3], &[2, 4]])).unwrap();
        assert!(equals_l1(&p));
    }

    #[test]
    fn psi_rejects_non_members() {
        let mx = unit_shift_matrix(NormingSet::L1);
        let err = psi_n(&mx, &tuple(&[&[1, 2]])).unwrap_err();
        assert!(matches!(err, Error::NotMember { .. }));
    }

    #[test]
    fn prefixes_restrict_the_seminorm_exactly() {
        let mx = MatrixSource {
            barrier: BarrierTerm::cube(1),
            host: NormingSet::Schreier,
            entry: EntryMap::Generator { name: GeneratorRule::UnitShift },
        };
        let t = tuple(&[&[2], &[3], &[5]]);
        let whole = psi_n(&mx, &t).unwrap();
        let part = psi_n(&mx, &t.prefix(2)).unwrap();
        let cut = whole.restrict(2);
        // Equal as functions: check the full sign grid and a certified bracket.
        for a1 in [-1i64, 0, 1] {
            for a2 in [-1i64, 0, 1] {
                let a = [q(a1, 1), q(a2, 1)];
                assert_eq!(part.eval(&a), cut.eval(&a));
            }
        }
        let d = normspace::distance(&part, &cut, &q(1, 4)).unwrap();
        assert_eq!(d.lo, q(0, 1));
    }

    // --- stabilisation -------------------------------------------------------

    #[test]
    fn unit_shift_in_l1_stabilises_to_l1_every_level() {
        let mx = unit_shift_matrix(NormingSet::L1);
        let report =
            stabilize_matrix(&mx, 3, &Schedule::halving(2), &fs(&(1..=9).collect::<Vec<_>>()))
                .unwrap();
        assert_eq!(report.rhos.len(), 3);
        for (n, rho) in report.rhos.iter().enumerate() {
            assert_eq!(rho.dim(), n + 1);
            assert!(equals_l1(rho), "level {} is not exactly l1", n + 1);
            assert!(report.norm_verdicts[n].is_norm);
        }
        for d in &report.compat_defects {
            assert!(d.contains(&q(0, 1)));
        }
        assert!(!report.exhausted);
        assert_eq!(report.depth, 2);
        assert!(report.m.len() >= 3);
    }

    #[test]
    fn unit_shift_in_sup_stabilises_to_sup() {
        let mx = unit_shift_matrix(NormingSet::Sup);
        let report =
            stabilize_matrix(&mx, 3, &Schedule::halving(2), &fs(&(1..=9).collect::<Vec<_>>()))
                .unwrap();
        for rho in &report.rhos {
            assert!(equals_sup(rho));
        }
        for d in &report.compat_defects {
            assert!(d.contains(&q(0, 1)));
        }
    }

    #[test]
    fn max_entries_in_the_self_counting_host_stabilise_to_l1() {
        // entry(_, {m}) = e_m under the self-counting host: far tuples are
        // admissible and give exactly ℓ₁ⁿ, near ones are shaved off.
        let mx = MatrixSource {
            barrier: BarrierTerm::cube(1),
            host: NormingSet::Schreier,
            entry: EntryMap::Generator { name: GeneratorRule::UnitMax },
        };
        let report =
            stabilize_matrix(&mx, 3, &Schedule::halving(2), &fs(&(1..=10).collect::<Vec<_>>()))
                .unwrap();
        for rho in &report.rhos {
            assert!(equals_l1(rho));
        }
        for d in &report.compat_defects {
            assert!(d.contains(&q(0, 1)));
        }
        assert!(!report.exhausted);
    }

    #[test]
    fn spreading_model_of_the_unit_basis_matches_the_host() {
        let seq = units(12);
        let l1 = spreading_model(&seq, &NormingSet::L1, 4, &Schedule::halving(2)).unwrap();
        for rho in &l1.rhos {
            assert!(equals_l1(rho));
        }
        let sup = spreading_model(&seq, &NormingSet::Sup, 4, &Schedule::halving(2)).unwrap();
        for rho in &sup.rhos {
            assert!(equals_sup(rho));
        }
        let schreier =
            spreading_model(&seq, &NormingSet::Schreier, 4, &Schedule::halving(2)).unwrap();
        assert_eq!(schreier.rhos.len(), 4);
        for rho in &schreier.rhos {
            assert!(equals_l1(rho));
        }
        for d in &schreier.compat_defects {
            assert!(d.contains(&q(0, 1)));
        }
        assert!(!schreier.exhausted);
    }

    #[test]
    fn row_subsampling_keeps_the_stabilised_model() {
        let window = fs(&(1..=9).collect::<Vec<_>>());
        let sched = Schedule::halving(2);
        let base = unit_shift_matrix(NormingSet::L1);
        // Rows 2, 4, 6 of the base matrix, repackaged as rows 1, 2, 3.
        let mut entries = Vec::new();
        for (new_row, old_row) in [2usize, 4, 6].iter().enumerate() {
            for m in 1..=9u32 {
                entries.push(TableEntry {
                    row: new_row + 1,
                    set: FinSet::singleton(m),
                    vector: base.entry(*old_row, &fs(&[m])).unwrap(),
                });
            }
        }
        let sub = MatrixSource {
            barrier: BarrierTerm::cube(1),
            host: NormingSet::L1,
            entry: EntryMap::Table { entries },
        };
        let a = stabilize_matrix(&base, 3, &sched, &window).unwrap();
        let b = stabilize_matrix(&sub, 3, &sched, &window).unwrap();
        for (ra, rb) in a.rhos.iter().zip(&b.rhos) {
            assert_eq!(ra.rows(), rb.rows());
        }
    }

    // --- chain steps ----------------------------------------------------------

    #[test]
    fn sum_matrix_over_singletons_unfolds_to_pairs() {
        let inner = MatrixSource {
            barrier: BarrierTerm::cube(1),
            host: NormingSet::L1,
            entry: EntryMap::Seq { vectors: units(9) },
        };
        let summed = build_sum_matrix(&inner).unwrap();
        let window = fs(&(1..=5).collect::<Vec<_>>());
        assert_eq!(
            summed.barrier.front(&window).unwrap(),
            BarrierTerm::cube(2).front(&window).unwrap()
        );
        assert_eq!(
            summed.entry(3, &fs(&[2, 5])).unwrap(),
            inner.entry(2, &fs(&[5])).unwrap()
        );
    }

    #[test]
    fn sum_of_the_self_counting_matrix_stays_l1() {
        let inner = MatrixSource {
            barrier: BarrierTerm::schreier(),
            host: NormingSet::Schreier,
            entry: EntryMap::Generator { name: GeneratorRule::UnitMax },
        };
        let summed = build_sum_matrix(&inner).unwrap();
        let report = stabilize_matrix(
            &summed,
            2,
            &Schedule::halving(2),
            &fs(&(1..=9).collect::<Vec<_>>()),
        )
        .unwrap();
        assert_eq!(report.rhos.len(), 2);
        for rho in &report.rhos {
            assert!(equals_l1(rho));
        }
        for d in &report.compat_defects {
            assert!(d.contains(&q(0, 1)));
        }
    }

    #[test]
    fn identity_lift_reproduces_the_inner_entries() {
        let inner = MatrixSource {
            barrier: BarrierTerm::cube(1),
            host: NormingSet::L1,
            entry: EntryMap::Seq { vectors: units(12) },
        };
        let lifted =
            lift_block_matrix(&inner, ExpansionRule::IdentityMin, 1, Vector::unit(1)).unwrap();
        // At {l, m} the expansion is f_l over the decomposition of {m} into
        // l singles, whose l-th part is {m} itself: the entry is e_m.
        for (l, m) in [(1u32, 2u32), (2, 5), (3, 7)] {
            let u = fs(&[l, m]);
            assert_eq!(lifted.entry(1, &u).unwrap(), Vector::unit(m));
            assert!(!lifted.uses_fallback(1, &u).unwrap());
        }
        let report = stabilize_matrix(
            &lifted,
            2,
            &Schedule::halving(2),
            &fs(&(1..=8).collect::<Vec<_>>()),
        )
        .unwrap();
        for rho in &report.rhos {
            assert!(equals_l1(rho));
        }
    }

    #[test]
    fn single_index_lift_is_the_first_inner_entry() {
        let inner = MatrixSource {
            barrier: BarrierTerm::cube(1),
            host: NormingSet::L1,
            entry: EntryMap::Seq { vectors: units(12) },
        };
        let lifted = lift_block_matrix(
            &inner,
            ExpansionRule::Single { index: 1 },
            1,
            Vector::unit(1),
        )
        .unwrap();
        assert_eq!(lifted.entry(1, &fs(&[4, 9])).unwrap(), Vector::unit(9));
        assert!(!lifted.uses_fallback(1, &fs(&[4, 9])).unwrap());
    }

    #[test]
    fn two_term_lift_normalises_to_unit_norm_and_falls_back_when_cramped() {
        let inner = MatrixSource {
            barrier: BarrierTerm::cube(1),
            host: NormingSet::L1,
            entry: EntryMap::Seq { vectors: units(12) },
        };
        let rule = ExpansionRule::Fixed {
            terms: vec![
                ExpansionTerm { index: 1, coeff: q(1, 2) },
                ExpansionTerm { index: 2, coeff: q(1, 2) },
            ],
        };
        let lifted = lift_block_matrix(&inner, rule, 1, Vector::unit(1)).unwrap();
        // {m − 1, m} is the 2-part decomposition of {m}: the entry is
        // (e_{m−1} + e_m)/2, of ℓ₁ norm one on the nose.
        let z = lifted.entry(1, &fs(&[1, 5])).unwrap();
        assert_eq!(z.get(4), q(1, 2));
        assert_eq!(z.get(5), q(1, 2));
        assert_eq!(NormingSet::L1.norm(&z), q(1, 1));
        assert!(!lifted.uses_fallback(1, &fs(&[1, 5])).unwrap());
        // {m} with m ≤ 2 has no 2-part decomposition: the fallback applies.
        assert!(lifted.uses_fallback(1, &fs(&[1, 2])).unwrap());
        assert_eq!(lifted.entry(1, &fs(&[1, 2])).unwrap(), Vector::unit(1));
    }

    // --- block validation -----------------------------------------------------

    #[test]
    fn shifted_units_are_a_block_matrix() {
        let mx = unit_shift_matrix(NormingSet::L1);
        let check = is_plegma_block(&mx, 2, &fs(&(1..=8).collect::<Vec<_>>())).unwrap();
        assert!(check.is_block);
        assert_eq!(check.cutoff, Some(0));
    }

    #[test]
    fn constant_entries_are_never_a_block() {
        let mx = MatrixSource {
            barrier: BarrierTerm::cube(1),
            host: NormingSet::L1,
            entry: EntryMap::Seq { vectors: vec![Vector::unit(1); 8] },
        };
        let check = is_plegma_block(&mx, 2, &fs(&(1..=8).collect::<Vec<_>>())).unwrap();
        assert!(!check.is_block);
        assert!(check.witness.is_some());
    }

    #[test]
    fn disjoint_pairs_are_a_block_matrix() {
        let mx = MatrixSource {
            barrier: BarrierTerm::cube(1),
            host: NormingSet::L1,
            entry: EntryMap::Generator { name: GeneratorRule::DisjointPair },
        };
        let check = is_plegma_block(&mx, 3, &fs(&(1..=7).collect::<Vec<_>>())).unwrap();
        assert!(check.is_block);
    }

    // --- gliding hump -----------------------------------------------------------

    #[test]
    fn block_rows_glide_to_themselves() {
        let rows = vec![units(6), units(6)];
        let report = gliding_hump(&NullRowMatrix { rows: rows.clone() }, &NormingSet::L1, 4)
            .unwrap();
        assert_eq!(report.picks, vec![1, 2, 3, 4]);
        for (r, row) in report.blocks.iter().enumerate() {
            for (i, y) in row.iter().enumerate() {
                assert_eq!(*y, rows[r][i]);
                assert_eq!(report.errors[r][i], "0");
            }
        }
    }

    #[test]
    fn trailing_humps_are_truncated_within_budget() {
        // x_i = e_i + 2^{−i−9} e₁, renormalised internally; truncation strips
        // the hump, leaving exactly the unit vector.
        let rows: Vec<Vec<Vector>> = (0..2)
            .map(|r| {
                (1..=6u32)
                    .map(|i| {
                        Vector::unit(i).add(&Vector::unit(1).scale(&q(1, 1i64 << (i + 9 + r))))
                    })
                    .collect()
            })
            .collect();
        let report = gliding_hump(&NullRowMatrix { rows }, &NormingSet::L1, 5).unwrap();
        assert_eq!(report.picks, vec![1, 2, 3, 4, 5]);
        for r in 0..2 {
            for (i, y) in report.blocks[r].iter().enumerate().skip(1) {
                let col = i + 1;
                assert_eq!(*y, Vector::unit(col as u32), "column {col} should be a pure unit");
                let err = rat::parse(&report.errors[r][i]).unwrap();
                let budget = q(1, 1i64 << ((r + 1) + col + 1));
                assert!(err <= budget, "column {col} error {err} exceeds budget {budget}");
            }
        }
        let check = is_plegma_block(
            &report.matrix,
            2,
            &fs(&(1..=5).collect::<Vec<_>>()),
        )
        .unwrap();
        assert!(check.is_block);
    }

    #[test]
    fn oversized_humps_get_skipped() {
        // Column 2 carries a hump too big for any budget, so it is passed over.
        let mut row: Vec<Vector> = (1..=6u32).map(|i| Vector::unit(i + 1)).collect();
        row[1] = Vector::unit(3)
            .scale(&q(1, 2))
            .add(&Vector::unit(1).scale(&q(1, 2)));
        let report =
            gliding_hump(&NullRowMatrix { rows: vec![row] }, &NormingSet::L1, 4).unwrap();
        assert_eq!(report.picks, vec![1, 3, 4, 5]);
    }

    #[test]
    fn persistent_mass_below_the_frontier_is_rejected() {
        // Every column keeps half its mass at coordinate 1: after the first
        // pick the budget can never be met again.
        let row: Vec<Vector> = (1..=6u32)
            .map(|i| Vector::unit(i + 1).scale(&q(1, 2)).add(&Vector::unit(1).scale(&q(1, 2))))
            .collect();
        let err = gliding_hump(&NullRowMatrix { rows: vec![row] }, &NormingSet::L1, 3)
            .unwrap_err();
        assert!(matches!(err, Error::NotCoordinatewiseNull { row: 1 }));
    }

    // --- serde -----------------------------------------------------------------

    #[test]
    fn matrix_source_json_round_trip() {
        let inner = MatrixSource {
            barrier: BarrierTerm::cube(1),
            host: NormingSet::L1,
            entry: EntryMap::Seq { vectors: units(3) },
        };
        let samples = vec![
            unit_shift_matrix(NormingSet::Schreier),
            MatrixSource::from_rows(&NormingSet::L1, &[units(2)]),
            build_sum_matrix(&inner).unwrap(),
            lift_block_matrix(&inner, ExpansionRule::IdentityMin, 1, Vector::unit(1)).unwrap(),
        ];
        for mx in samples {
            let json = serde_json::to_string(&mx).unwrap();
            let back: MatrixSource = serde_json::from_str(&json).unwrap();
            assert_eq!(back, mx);
        }
    }

    #[test]
    fn generator_json_uses_the_documented_names() {
        let mx = unit_shift_matrix(NormingSet::L1);
        let json = serde_json::to_string(&mx.entry).unwrap();
        assert_eq!(json, r#"{"kind":"generator","name":"shifted-basis"}"#);
    }
}
