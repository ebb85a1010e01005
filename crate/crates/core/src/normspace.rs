//! Exact-rational vectors and functionals, norming-set norms, and the space
//! of normalised polyhedral seminorms with a certified metric.
//!
//! A norming set `W` induces `‖x‖_W = sup { |f(x)| : f ∈ W }`.  Restricting a
//! norming set to `k` chosen positions produces a [`SeminormPoint`]: a
//! polyhedral seminorm on ℝᵏ given by finitely many functional rows, with
//! `ρ(eⱼ) = 1` enforced.  Distances between points are interval-bracketed by
//! a grid scan plus a Lipschitz certificate, and a finite ε-net of the point
//! space is built by cell quantisation.

use std::collections::{BTreeMap, BTreeSet};

use num::rational::BigRational;
use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::finset::FinSet;
use crate::ramsey::Coloring;
use crate::rat::{self, Interval};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Sparse vectors and functionals
// ---------------------------------------------------------------------------

/// Sparse map serialisation: `{"3":"1/2"}` with rational values as strings.
mod serde_sparse {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<u32, BigRational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let enc: BTreeMap<u32, String> = m.iter().map(|(k, v)| (*k, rat::fmt(v))).collect();
        enc.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<u32, BigRational>, D::Error> {
        // Keys arrive as strings (JSON object keys), parsed by hand so the
        // map also survives the buffering of internally tagged enums.
        let enc = BTreeMap::<String, String>::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (k, v) in enc {
            let k: u32 = k.parse().map_err(serde::de::Error::custom)?;
            if k == 0 {
                return Err(serde::de::Error::custom("coordinates are 1-indexed"));
            }
            let r = rat::parse(&v).map_err(serde::de::Error::custom)?;
            if !r.is_zero() {
                out.insert(k, r);
            }
        }
        Ok(out)
    }
}

/// A finitely supported point of the sequence space, with exact rational
/// coordinates indexed by positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Vector(#[serde(with = "serde_sparse")] BTreeMap<u32, BigRational>);

/// A finitely supported functional; acts by `f(x) = Σ f(i)·x(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Functional(#[serde(with = "serde_sparse")] BTreeMap<u32, BigRational>);

macro_rules! sparse_impl {
    ($name:ident) => {
        impl $name {
            pub fn zero() -> Self {
                Self(BTreeMap::new())
            }

            /// The unit at position `i` (1-indexed).
            pub fn unit(i: u32) -> Self {
                assert!(i >= 1, "coordinates are 1-indexed");
                Self(BTreeMap::from([(i, BigRational::one())]))
            }

            pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, BigRational)>) -> Self {
                Self(pairs.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            }

            pub fn get(&self, i: u32) -> BigRational {
                self.0.get(&i).cloned().unwrap_or_else(BigRational::zero)
            }

            pub fn support(&self) -> FinSet {
                FinSet::new(self.0.keys().copied().collect()).expect("BTreeMap keys are sorted")
            }

            pub fn is_zero(&self) -> bool {
                self.0.is_empty()
            }

            pub fn entries(&self) -> impl Iterator<Item = (u32, &BigRational)> {
                self.0.iter().map(|(k, v)| (*k, v))
            }

            pub fn scale(&self, c: &BigRational) -> Self {
                if c.is_zero() {
                    return Self::zero();
                }
                Self(self.0.iter().map(|(k, v)| (*k, v * c)).collect())
            }

            pub fn add(&self, other: &Self) -> Self {
                let mut out = self.0.clone();
                for (k, v) in &other.0 {
                    let entry = out.entry(*k).or_insert_with(BigRational::zero);
                    *entry += v;
                    if entry.is_zero() {
                        out.remove(k);
                    }
                }
                Self(out)
            }

            pub fn sub(&self, other: &Self) -> Self {
                self.add(&other.scale(&-BigRational::one()))
            }
        }

        impl std::fmt::Display for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                if self.0.is_empty() {
                    return write!(f, "0");
                }
                for (n, (i, v)) in self.0.iter().enumerate() {
                    if n > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{}·[{i}]", rat::fmt(v))?;
                }
                Ok(())
            }
        }
    };
}

sparse_impl!(Vector);
sparse_impl!(Functional);

impl Functional {
    /// Exact action `Σ f(i)·x(i)`.
    pub fn apply(&self, x: &Vector) -> BigRational {
        self.0
            .iter()
            .map(|(i, c)| c * x.get(*i))
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

// ---------------------------------------------------------------------------
// Norming sets
// ---------------------------------------------------------------------------

/// A set of functionals defining `‖x‖_W = sup |f(x)|`, either as an explicit
/// finite list or as one of the closed-form families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NormingSet {
    /// Explicit list; `g0` adjoins `{±e*ᵢ}`, which makes `‖·‖_W` a norm with
    /// `‖eᵢ‖ = 1`.
    Extensional {
        funcs: Vec<Functional>,
        #[serde(default, rename = "g0")]
        with_g0: bool,
    },
    /// `‖x‖ = Σ |xᵢ|`.
    L1,
    /// `‖x‖ = max |xᵢ|`.
    Sup,
    /// `‖x‖ = (Σ |xᵢ|^p)^{1/p}`, evaluated in floating point; an evaluation
    /// oracle only, excluded from the exactness-critical paths.
    Lp {
        #[serde(with = "rat::serde_rat")]
        p: BigRational,
    },
    /// Sup of `Σ_{i∈s} |xᵢ|` over self-counting sets (`|s| = min s`).
    Schreier,
}

impl NormingSet {
    /// The norm (or seminorm) `‖x‖_W`.  An empty extensional list yields the
    /// zero seminorm.  The `Lp` kind returns the exact rational value of its
    /// double-precision evaluation.
    pub fn norm(&self, x: &Vector) -> BigRational {
        match self {
            NormingSet::Extensional { funcs, with_g0 } => {
                let mut best = BigRational::zero();
                if *with_g0 {
                    for (_, v) in x.entries() {
                        best = best.max(v.abs());
                    }
                }
                for f in funcs {
                    best = best.max(f.apply(x).abs());
                }
                best
            }
            NormingSet::L1 => x.entries().map(|(_, v)| v.abs()).sum(),
            NormingSet::Sup => x
                .entries()
                .map(|(_, v)| v.abs())
                .fold(BigRational::zero(), |a, b| a.max(b)),
            NormingSet::Lp { p } => {
                let pf = p.to_f64().unwrap_or(1.0);
                let sum: f64 = x
                    .entries()
                    .map(|(_, v)| v.to_f64().unwrap_or(0.0).abs().powf(pf))
                    .sum();
                BigRational::from_float(sum.powf(1.0 / pf)).unwrap_or_else(BigRational::zero)
            }
            NormingSet::Schreier => schreier_norm(x),
        }
    }
}

/// `sup { Σ_{i∈s} |xᵢ| : |s| = min(s) }`: for each candidate minimum `m`,
/// take `|x_m|` plus the `m − 1` largest coordinates beyond `m`.
fn schreier_norm(x: &Vector) -> BigRational {
    let top = match x.support().greatest() {
        None => return BigRational::zero(),
        Some(t) => t,
    };
    let mut best = BigRational::zero();
    for m in 1..=top {
        let mut beyond: Vec<BigRational> =
            x.entries().filter(|(i, _)| *i > m).map(|(_, v)| v.abs()).collect();
        beyond.sort();
        beyond.reverse();
        let mut val = x.get(m).abs();
        for v in beyond.into_iter().take(m as usize - 1) {
            val += v;
        }
        best = best.max(val);
    }
    best
}

/// The norming set a coloring of `[window]^k` generates: `G₀` together with
/// all `Σ_{i∈s} ±e*ᵢ` over the color-0 sets `s`.
pub fn coloring_norming_set(c: &Coloring, window: &FinSet) -> NormingSet {
    let mut funcs = Vec::new();
    for s in c.sets_with_color(0, window) {
        for signs in sign_patterns(s.len()) {
            funcs.push(Functional::from_pairs(
                s.iter().zip(&signs).map(|(i, sg)| (i, BigRational::from_integer(BigInt::from(*sg)))),
            ));
        }
    }
    NormingSet::Extensional { funcs, with_g0: true }
}

fn sign_patterns(k: usize) -> Vec<Vec<i32>> {
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0..(1u32 << k) {
        out.push((0..k).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect());
    }
    out
}

// ---------------------------------------------------------------------------
// Seminorm points
// ---------------------------------------------------------------------------

/// A normalised polyhedral seminorm on ℝᵏ: `ρ(a) = max_r |Σ rᵢaᵢ|` over the
/// stored rows, with `ρ(eⱼ) = 1` for each coordinate.
///
/// Normalisation forces every entry into `[−1, 1]`, so each point is
/// automatically 1-Lipschitz for `‖·‖₁` and satisfies the seminorm axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeminormPoint {
    dim: usize,
    rows: Vec<Vec<BigRational>>,
    provenance: String,
}

impl SeminormPoint {
    /// Build from functional rows; rows are canonicalised (sign-normalised,
    /// sorted, deduplicated) and `ρ(eⱼ) = 1` is checked exactly.
    pub fn new(dim: usize, rows: Vec<Vec<BigRational>>, provenance: impl Into<String>) -> Result<Self> {
        let rows = canonical_rows(dim, rows);
        for j in 0..dim {
            let col_max = rows
                .iter()
                .map(|r| r[j].abs())
                .fold(BigRational::zero(), |a, b| a.max(b));
            if col_max != BigRational::one() {
                return Err(Error::NotNormalized { position: j as u32 + 1 });
            }
        }
        Ok(SeminormPoint { dim, rows, provenance: provenance.into() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Exact evaluation `max_r |Σ rᵢaᵢ|`.
    pub fn eval(&self, a: &[BigRational]) -> BigRational {
        assert_eq!(a.len(), self.dim, "dimension mismatch");
        let mut best = BigRational::zero();
        for row in &self.rows {
            let v: BigRational = row.iter().zip(a).map(|(r, x)| r * x).sum();
            best = best.max(v.abs());
        }
        best
    }

    /// The restriction to the first `j` coordinates (rows truncated); this is
    /// the pullback along `ℝʲ ⊂ ℝᵏ` and stays normalised.
    pub fn restrict(&self, j: usize) -> SeminormPoint {
        assert!(j <= self.dim);
        let rows = self.rows.iter().map(|r| r[..j].to_vec()).collect();
        SeminormPoint {
            dim: j,
            rows: canonical_rows(j, rows),
            provenance: format!("{}↾{}", self.provenance, j),
        }
    }

    /// `None` when `ρ` is a genuine norm; otherwise a nonzero kernel vector
    /// (`ρ(witness) = 0`), found by exact elimination.
    pub fn kernel_witness(&self) -> Option<Vec<BigRational>> {
        // Row-reduce the functional matrix; a norm needs full column rank.
        let mut m: Vec<Vec<BigRational>> = self.rows.clone();
        let k = self.dim;
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; k];
        let mut r = 0;
        for c in 0..k {
            if let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) {
                m.swap(r, p);
                let inv = m[r][c].clone();
                for x in &mut m[r] {
                    *x /= &inv;
                }
                for i in 0..m.len() {
                    if i != r && !m[i][c].is_zero() {
                        let f = m[i][c].clone();
                        for j in 0..k {
                            let t = &m[r][j] * &f;
                            m[i][j] -= t;
                        }
                    }
                }
                pivot_of_col[c] = Some(r);
                r += 1;
            }
        }
        let free = (0..k).find(|&c| pivot_of_col[c].is_none())?;
        let mut w = vec![BigRational::zero(); k];
        w[free] = BigRational::one();
        for c in 0..k {
            if let Some(p) = pivot_of_col[c] {
                w[c] = -m[p][free].clone();
            }
        }
        debug_assert!(self.eval(&w).is_zero());
        Some(w)
    }

    pub fn is_norm(&self) -> bool {
        self.kernel_witness().is_none()
    }
}

impl Serialize for SeminormPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SeminormPoint", 3)?;
        st.serialize_field("dim", &self.dim)?;
        let rows: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.iter().map(rat::fmt).collect()).collect();
        st.serialize_field("rows", &rows)?;
        st.serialize_field("provenance", &self.provenance)?;
        st.end()
    }
}

impl std::fmt::Display for SeminormPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ρ[{} on ℝ^{}, {} rows]", self.provenance, self.dim, self.rows.len())
    }
}

/// Drop zero rows, flip each row so its first nonzero entry is positive
/// (`|f(x)| = |−f(x)|`), sort, deduplicate, then drop rows that provably
/// never attain the sup.  The reductions are exact, so equal seminorms end
/// up sharing rows far more often (and comparisons stay cheap).
fn canonical_rows(dim: usize, rows: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let mut out: Vec<Vec<BigRational>> = Vec::with_capacity(rows.len());
    for mut row in rows {
        assert_eq!(row.len(), dim, "row length mismatch");
        match row.iter().find(|x| !x.is_zero()) {
            None => continue,
            Some(first) => {
                if first.is_negative() {
                    for x in &mut row {
                        *x = -x.clone();
                    }
                }
            }
        }
        out.push(row);
    }
    out.sort();
    out.dedup();
    drop_parallel_rows(&mut out);
    drop_sign_family_dominated(dim, &mut out);
    out
}

/// Remove rows of the form `c·r` for another row `r` and `0 < c < 1`: they
/// evaluate strictly below `r` everywhere.  (After sign normalisation and
/// deduplication the scale of a parallel pair is strictly between 0 and 1,
/// so domination is a strict partial order and dropping is transitive-safe.)
fn drop_parallel_rows(rows: &mut Vec<Vec<BigRational>>) {
    let snapshot = rows.clone();
    rows.retain(|r| {
        !snapshot.iter().any(|other| {
            if r == other {
                return false;
            }
            let mut scale: Option<BigRational> = None;
            for (x, y) in r.iter().zip(other) {
                match (x.is_zero(), y.is_zero()) {
                    (true, true) => continue,
                    (true, false) | (false, true) => return false,
                    (false, false) => {
                        let c = x / y;
                        match &scale {
                            None => scale = Some(c),
                            Some(s) if *s == c => {}
                            Some(_) => return false,
                        }
                    }
                }
            }
            scale.is_some_and(|c| c.is_positive() && c < BigRational::one())
        })
    });
}

/// If every ±-sign pattern at scale `c` is present (a scaled ℓ₁ row family),
/// any row with all coordinates in `[−c, c]` is dominated: `|r·a| ≤ c·Σ|aᵢ|`,
/// and the aligned family row attains that bound.  The family spans ℝᵏ, so
/// kernels are unaffected.
fn drop_sign_family_dominated(dim: usize, rows: &mut Vec<Vec<BigRational>>) {
    if dim == 0 || dim > 12 || rows.len() < (1usize << (dim - 1)) {
        return;
    }
    let needed = 1usize << (dim - 1);
    // Candidate scales: rows whose coordinates all share one absolute value.
    let mut scales: Vec<BigRational> = rows
        .iter()
        .filter_map(|r| {
            let c = r[0].clone();
            (c.is_positive() && r.iter().all(|x| x.abs() == c)).then_some(c)
        })
        .collect();
    scales.sort();
    scales.dedup();
    scales.reverse();
    for c in scales {
        let family: BTreeSet<Vec<bool>> = rows
            .iter()
            .filter(|r| r.iter().all(|x| x.abs() == c))
            .map(|r| r.iter().map(|x| x.is_negative()).collect())
            .collect();
        if family.len() == needed {
            rows.retain(|r| {
                r.iter().any(|x| x.abs() > c) || r.iter().all(|x| x.abs() == c)
            });
            return;
        }
    }
}

/// The rows a norming set induces on `k` chosen positions: every functional
/// the set provides, restricted to those positions (plus unit rows when `G₀`
/// is present).  Only finitely many traces matter for each closed form.
fn host_rows(w: &NormingSet, positions: &FinSet) -> Result<Vec<Vec<BigRational>>> {
    let k = positions.len();
    let one = BigRational::one();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let unit_rows = || {
        (0..k)
            .map(|j| {
                let mut r = vec![BigRational::zero(); k];
                r[j] = one.clone();
                r
            })
            .collect::<Vec<_>>()
    };
    match w {
        NormingSet::Extensional { funcs, with_g0 } => {
            if *with_g0 {
                rows.extend(unit_rows());
            }
            for f in funcs {
                rows.push(positions.iter().map(|i| f.get(i)).collect());
            }
        }
        NormingSet::Sup => rows.extend(unit_rows()),
        NormingSet::L1 => {
            if k > 16 {
                return Err(Error::Schema(format!("ℓ₁ host rows blow up at dimension {k}")));
            }
            for signs in sign_patterns(k) {
                rows.push(signs.into_iter().map(|s| BigRational::from_integer(s.into())).collect());
            }
        }
        NormingSet::Schreier => {
            // Traces of self-counting sets on the support are exactly the
            // subsets t with |t| ≤ min(t) (pad with fresh elements outside
            // the support to realise any such t).  Maximal ones dominate:
            // for each m, {m} plus any (m−1)-subset of the positions beyond.
            let mut traces: Vec<FinSet> = Vec::new();
            for (idx, m) in positions.iter().enumerate() {
                let beyond = &positions.elements()[idx + 1..];
                let r = (m as usize - 1).min(beyond.len());
                for mut u in choose(beyond, r) {
                    u.insert(0, m);
                    let t = FinSet::new(u).unwrap();
                    if !traces.contains(&t) {
                        traces.push(t);
                    }
                }
            }
            for t in traces {
                if t.len() > 16 {
                    return Err(Error::Schema(format!(
                        "admissible trace of size {} blows up the row set",
                        t.len()
                    )));
                }
                for signs in sign_patterns(t.len()) {
                    let mut row = vec![BigRational::zero(); k];
                    for (i, sg) in t.iter().zip(signs) {
                        let j = positions.elements().iter().position(|&p| p == i).unwrap();
                        row[j] = BigRational::from_integer(sg.into());
                    }
                    rows.push(row);
                }
            }
        }
        NormingSet::Lp { .. } => {
            return Err(Error::EvaluationOnly { kind: "lp".into() });
        }
    }
    Ok(rows)
}

fn choose(elems: &[u32], r: usize) -> Vec<Vec<u32>> {
    if r == 0 {
        return vec![vec![]];
    }
    if r > elems.len() {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &e) in elems.iter().enumerate() {
        for mut rest in choose(&elems[i + 1..], r - 1) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// The seminorm `ρ(a) = ‖Σ aⱼ e_{pⱼ}‖_W` on ℝᵏ for positions `p₁ < … < p_k`.
/// Requires `‖e_{pⱼ}‖_W = 1` for every position.
pub fn seminorm_point(w: &NormingSet, positions: &FinSet) -> Result<SeminormPoint> {
    let rows = host_rows(w, positions)?;
    SeminormPoint::new(positions.len(), rows, format!("{w:?} on {positions}"))
}

/// The seminorm `a ↦ ‖Σ aⱼ xⱼ‖_W` on ℝᵏ induced by vectors x₁, …, x_k: the
/// host rows on the union support, applied to each vector.  Exact, because
/// the host rows realise the full supremum on that support.  Requires
/// `‖xⱼ‖_W = 1` for each j.
pub fn vector_tuple_point(
    xs: &[Vector],
    w: &NormingSet,
    provenance: impl Into<String>,
) -> Result<SeminormPoint> {
    let mut support = FinSet::empty();
    for x in xs {
        support = support.union(&x.support());
    }
    let host = host_rows(w, &support)?;
    let positions = support.elements();
    let rows: Vec<Vec<BigRational>> = host
        .iter()
        .map(|r| {
            xs.iter()
                .map(|x| {
                    r.iter()
                        .zip(positions)
                        .map(|(c, p)| c * x.get(*p))
                        .fold(BigRational::zero(), |a, b| a + b)
                })
                .collect()
        })
        .collect();
    SeminormPoint::new(xs.len(), rows, provenance)
}

// ---------------------------------------------------------------------------
// Distance with certificate
// ---------------------------------------------------------------------------

/// Bracket `d_k(ρ₁, ρ₂) = sup_{[−1,1]^k} |ρ₁ − ρ₂|`: the lower end is the
/// exact maximum over the axis grid of the given mesh, the upper end adds the
/// Lipschitz slack `k · mesh` (both points are 1-Lipschitz for `‖·‖₁` and no
/// point of the cube is farther than `mesh/2` per axis from the grid).
pub fn distance(r1: &SeminormPoint, r2: &SeminormPoint, mesh: &BigRational) -> Result<Interval> {
    if r1.dim() != r2.dim() {
        return Err(Error::Schema(format!(
            "distance needs equal dimensions, got {} and {}",
            r1.dim(),
            r2.dim()
        )));
    }
    if !mesh.is_positive() {
        return Err(Error::Schema("mesh must be positive".into()));
    }
    let k = r1.dim();
    let slack = BigRational::from_integer(BigInt::from(k as i64)) * mesh;
    if k == 0 {
        return Ok(Interval::point(BigRational::zero()));
    }
    // Axis grid from −1 in steps of mesh, with 1 forced in.
    let mut axis: Vec<BigRational> = Vec::new();
    let mut v = -BigRational::one();
    while v < BigRational::one() {
        axis.push(v.clone());
        v += mesh;
    }
    axis.push(BigRational::one());

    let lo = match integer_grid_max(r1, r2, &axis) {
        Some(lo) => lo,
        None => rational_grid_max(r1, r2, &axis),
    };
    let hi = &lo + slack;
    Ok(Interval::new(lo, hi))
}

/// Exact grid maximum via scaled i128 arithmetic with incremental updates;
/// bails out (returning `None`) if the common denominator is too large.
fn integer_grid_max(r1: &SeminormPoint, r2: &SeminormPoint, axis: &[BigRational]) -> Option<BigRational> {
    let k = r1.dim();
    let mut denom = BigInt::one();
    for r in r1.rows().iter().chain(r2.rows()) {
        for x in r {
            denom = denom.lcm(x.denom());
        }
    }
    for a in axis {
        denom = denom.lcm(a.denom());
    }
    let scale = denom.to_i128().filter(|d| *d <= 1 << 20)?;
    let to_int = |x: &BigRational| -> Option<i128> {
        ((x.numer() * (&denom / x.denom())).to_i128()).filter(|v| v.abs() <= scale)
    };
    let axis_i: Vec<i128> = axis.iter().map(to_int).collect::<Option<_>>()?;
    let rows_i = |p: &SeminormPoint| -> Option<Vec<Vec<i128>>> {
        p.rows().iter().map(|r| r.iter().map(to_int).collect()).collect()
    };
    let rows1 = rows_i(r1)?;
    let rows2 = rows_i(r2)?;

    // Odometer over the grid: per-row running sums, updated per axis move.
    let mut idx = vec![0usize; k];
    let start = axis_i[0];
    let mut sums1: Vec<i128> = rows1.iter().map(|r| r.iter().sum::<i128>() * start).collect();
    let mut sums2: Vec<i128> = rows2.iter().map(|r| r.iter().sum::<i128>() * start).collect();
    let eval = |s1: &[i128], s2: &[i128]| -> i128 {
        let m1 = s1.iter().map(|v| v.abs()).max().unwrap_or(0);
        let m2 = s2.iter().map(|v| v.abs()).max().unwrap_or(0);
        (m1 - m2).abs()
    };
    let mut best = eval(&sums1, &sums2);
    'outer: loop {
        // Advance the odometer, updating sums by the per-axis delta.
        for t in (0..k).rev() {
            let from = axis_i[idx[t]];
            if idx[t] + 1 < axis_i.len() {
                idx[t] += 1;
                let d = axis_i[idx[t]] - from;
                for (s, r) in sums1.iter_mut().zip(&rows1) {
                    *s += r[t] * d;
                }
                for (s, r) in sums2.iter_mut().zip(&rows2) {
                    *s += r[t] * d;
                }
                best = best.max(eval(&sums1, &sums2));
                continue 'outer;
            }
            idx[t] = 0;
            let d = axis_i[0] - from;
            for (s, r) in sums1.iter_mut().zip(&rows1) {
                *s += r[t] * d;
            }
            for (s, r) in sums2.iter_mut().zip(&rows2) {
                *s += r[t] * d;
            }
        }
        break;
    }
    Some(BigRational::new(BigInt::from(best), &denom * &denom))
}

/// Plain rational fallback for the grid maximum.
fn rational_grid_max(r1: &SeminormPoint, r2: &SeminormPoint, axis: &[BigRational]) -> BigRational {
    let k = r1.dim();
    let mut idx = vec![0usize; k];
    let mut best = BigRational::zero();
    loop {
        let point: Vec<BigRational> = idx.iter().map(|&i| axis[i].clone()).collect();
        let d = (r1.eval(&point) - r2.eval(&point)).abs();
        best = best.max(d);
        let mut t = k;
        while t > 0 {
            t -= 1;
            idx[t] += 1;
            if idx[t] < axis.len() {
                break;
            }
            idx[t] = 0;
            if t == 0 {
                return best;
            }
        }
        if k == 0 {
            return best;
        }
    }
}

// ---------------------------------------------------------------------------
// ε-net of the seminorm space
// ---------------------------------------------------------------------------

/// Seed of the deterministic generator behind [`standard_norm_stream`].
pub const NET_STREAM_SEED: u64 = 0x6e6f726d; // "norm"

/// A deterministic stream of normalised seminorm points on ℝᵏ: the classical
/// ones first (`ℓ₁`, `ℓ∞`, the self-counting host on an admissible support),
/// then seeded random extensional norms.  The ε-net construction and the
/// covering tests draw from this same stream.
pub fn standard_norm_stream(k: usize, random_count: usize, seed: u64) -> Vec<SeminormPoint> {
    let mut out = Vec::new();
    let positions = FinSet::new((1..=k as u32).collect()).unwrap();
    if k <= 12 {
        out.push(seminorm_point(&NormingSet::L1, &positions).unwrap());
    }
    out.push(seminorm_point(&NormingSet::Sup, &positions).unwrap());
    // An admissible support: {k, k+1, …, 2k−1} traces to full ℓ₁, so use a
    // sparser one for variety when it stays within budget.
    if k >= 2 && k <= 12 {
        let spread = FinSet::new((1..=k as u32).map(|i| i * i).collect()).unwrap();
        out.push(seminorm_point(&NormingSet::Schreier, &spread).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..random_count {
        let rows = random_rows(&mut rng, k);
        out.push(
            SeminormPoint::new(k, rows, format!("random#{t}"))
                .expect("unit rows keep the point normalised"),
        );
    }
    out
}

/// Random functional rows with entries in `[−1, 1]` plus the unit rows.
fn random_rows(rng: &mut ChaCha8Rng, k: usize) -> Vec<Vec<BigRational>> {
    let mut rows: Vec<Vec<BigRational>> = (0..k)
        .map(|j| {
            let mut r = vec![BigRational::zero(); k];
            r[j] = BigRational::one();
            r
        })
        .collect();
    for _ in 0..rng.gen_range(1..=3usize) {
        let mut row: Vec<BigRational> = Vec::with_capacity(k);
        for _ in 0..k {
            let num = rng.gen_range(-4i64..=4);
            let den = rng.gen_range(1i64..=4);
            row.push(rat::q(num, den));
        }
        // Pull the row into the unit cross-polytope's dual ball.
        let sup = row.iter().map(|x| x.abs()).fold(BigRational::zero(), |a, b| a.max(b));
        if sup > BigRational::one() {
            for x in &mut row {
                *x /= &sup;
            }
        }
        rows.push(row);
    }
    rows
}

/// A finite set of seminorm points such that membership in a quantisation
/// cell guarantees distance below `eps`.
///
/// Construction: evaluate each candidate from [`standard_norm_stream`] on the
/// axis grid `B` of mesh `ε/(4k)` in `[−1,1]^k`, quantise the values to the
/// grid `A` of step `ε/4` in `[0,k]`, and keep the first candidate of every
/// distinct signature.  Two points with the same signature differ by at most
/// `ε/4` on `B`, hence by less than `ε` everywhere (Lipschitz chain).
pub fn epsilon_net(k: usize, eps: &BigRational) -> Result<Vec<SeminormPoint>> {
    if !eps.is_positive() {
        return Err(Error::Schema("eps must be positive".into()));
    }
    if k == 0 {
        return Ok(vec![]);
    }
    if k == 1 {
        // Homogeneity plus ρ(e₁) = 1 force ρ(a) = |a|.
        return Ok(vec![seminorm_point(&NormingSet::Sup, &FinSet::singleton(1)).unwrap()]);
    }
    let candidates = standard_norm_stream(k, 200, NET_STREAM_SEED);
    let (axis, step) = net_grid(k, eps);

    let mut seen: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    let mut net = Vec::new();
    for cand in candidates {
        let sig = cell_signature(&cand, &axis, &step);
        if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(sig) {
            e.insert(net.len());
            net.push(cand);
        }
    }
    Ok(net)
}

/// The evaluation grid of the ε-net: axis of mesh `ε/(4k)` across `[−1,1]`
/// plus the value-quantisation step `ε/4`.
fn net_grid(k: usize, eps: &BigRational) -> (Vec<BigRational>, BigRational) {
    let mesh = eps / BigRational::from_integer(BigInt::from(4 * k as i64));
    let step = eps / BigRational::from_integer(BigInt::from(4));
    let mut axis: Vec<BigRational> = Vec::new();
    let mut v = -BigRational::one();
    while v < BigRational::one() {
        axis.push(v.clone());
        v += &mesh;
    }
    axis.push(BigRational::one());
    (axis, step)
}

/// For each probe, the index of a net point sharing its quantisation cell
/// (`None` when no net point covers the probe's cell).  Sharing a cell
/// certifies distance below `eps` by the same Lipschitz chain that justifies
/// the net itself.
pub fn net_cell_assignment(
    net: &[SeminormPoint],
    probes: &[SeminormPoint],
    eps: &BigRational,
) -> Result<Vec<Option<usize>>> {
    if !eps.is_positive() {
        return Err(Error::Schema("eps must be positive".into()));
    }
    let Some(first) = net.first() else {
        return Ok(vec![None; probes.len()]);
    };
    let k = first.dim();
    if net.iter().chain(probes).any(|p| p.dim() != k) {
        return Err(Error::Schema("net and probes must share one dimension".into()));
    }
    let (axis, step) = net_grid(k, eps);
    let mut cells: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for (i, p) in net.iter().enumerate() {
        cells.entry(cell_signature(p, &axis, &step)).or_insert(i);
    }
    Ok(probes.iter().map(|p| cells.get(&cell_signature(p, &axis, &step)).copied()).collect())
}

/// Quantised evaluation profile over the product grid: the cell of the net
/// construction.  Values land in `[0, k]`, so indices stay small.
fn cell_signature(p: &SeminormPoint, axis: &[BigRational], step: &BigRational) -> Vec<i64> {
    integer_cell_signature(p, axis, step)
        .unwrap_or_else(|| rational_cell_signature(p, axis, step))
}

/// Scaled-integer signature with incremental grid updates; `None` when the
/// common denominator is too large for the i128 budget.
fn integer_cell_signature(
    p: &SeminormPoint,
    axis: &[BigRational],
    step: &BigRational,
) -> Option<Vec<i64>> {
    let k = p.dim();
    let mut denom = BigInt::one();
    for r in p.rows() {
        for x in r {
            denom = denom.lcm(x.denom());
        }
    }
    for a in axis {
        denom = denom.lcm(a.denom());
    }
    denom = denom.lcm(step.denom());
    let scale = denom.to_i128().filter(|d| *d <= 1 << 20)?;
    let to_int = |x: &BigRational| (x.numer() * (&denom / x.denom())).to_i128();
    let axis_i: Vec<i128> = axis.iter().map(to_int).collect::<Option<_>>()?;
    let rows: Vec<Vec<i128>> =
        p.rows().iter().map(|r| r.iter().map(to_int).collect()).collect::<Option<_>>()?;
    let step_i = to_int(step)?;
    // Values carry a D² scale; quantising to the nearest multiple of `step`
    // becomes floor((2v + D·step_i) / (2·D·step_i)) for v ≥ 0.
    let qden = 2 * scale * step_i;
    let mut idx = vec![0usize; k];
    let start = axis_i[0];
    let mut sums: Vec<i128> = rows.iter().map(|r| r.iter().sum::<i128>() * start).collect();
    let mut sig = Vec::new();
    loop {
        let v = sums.iter().map(|s| s.abs()).max().unwrap_or(0);
        sig.push(((2 * v + scale * step_i) / qden) as i64);
        let mut t = k;
        loop {
            if t == 0 {
                return Some(sig);
            }
            t -= 1;
            let from = axis_i[idx[t]];
            idx[t] = if idx[t] + 1 < axis_i.len() { idx[t] + 1 } else { 0 };
            let d = axis_i[idx[t]] - from;
            for (s, r) in sums.iter_mut().zip(&rows) {
                *s += r[t] * d;
            }
            if idx[t] != 0 {
                break;
            }
        }
    }
}

fn rational_cell_signature(
    p: &SeminormPoint,
    axis: &[BigRational],
    step: &BigRational,
) -> Vec<i64> {
    let k = p.dim();
    let mut idx = vec![0usize; k];
    let mut sig = Vec::new();
    let half = step / BigRational::from_integer(BigInt::from(2));
    loop {
        let point: Vec<BigRational> = idx.iter().map(|&i| axis[i].clone()).collect();
        let v = p.eval(&point);
        // Round to the nearest multiple of `step`.
        let q = ((v + &half) / step).floor().to_integer();
        sig.push(q.to_i64().unwrap_or(i64::MAX));
        let mut t = k;
        loop {
            if t == 0 {
                return sig;
            }
            t -= 1;
            idx[t] += 1;
            if idx[t] < axis.len() {
                break;
            }
            idx[t] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Basic constant and unconditionality
// ---------------------------------------------------------------------------

/// Outcome of the basic-constant grid search.
#[derive(Debug, Clone, Serialize)]
pub struct BasicConstantReport {
    /// Certified lower bound: a ratio attained by explicit coefficients.
    #[serde(with = "rat::serde_rat")]
    pub lower: BigRational,
    /// Estimate from a once-refined grid; not a certified upper bound.
    #[serde(with = "rat::serde_rat")]
    pub upper_estimate: BigRational,
    /// `(n, m, coefficients)` attaining `lower`.
    pub witness: Option<(usize, usize, Vec<String>)>,
}

/// Grid estimate of the basic constant: the largest
/// `‖Σ_{i≤n} aᵢxᵢ‖ / ‖Σ_{i≤m} aᵢxᵢ‖` over `n < m` and coefficient vectors
/// from a fixed rational grid.
pub fn basic_constant(xs: &[Vector], w: &NormingSet) -> Result<BasicConstantReport> {
    let coarse = coefficient_grid(2);
    let (lower, witness) = bc_scan(xs, w, &coarse)?;
    let fine = coefficient_grid(4);
    let (upper_estimate, _) = bc_scan(xs, w, &fine)?;
    Ok(BasicConstantReport {
        lower,
        upper_estimate,
        witness: witness.map(|(n, m, a)| (n, m, a.iter().map(rat::fmt).collect())),
    })
}

fn coefficient_grid(halves: i64) -> Vec<BigRational> {
    (-halves..=halves).map(|i| rat::q(i, halves)).collect()
}

fn bc_scan(
    xs: &[Vector],
    w: &NormingSet,
    grid: &[BigRational],
) -> Result<(BigRational, Option<(usize, usize, Vec<BigRational>)>)> {
    let mut best = BigRational::zero();
    let mut witness = None;
    let m_total = xs.len();
    let mut coeffs = vec![0usize; m_total];
    loop {
        let a: Vec<BigRational> = coeffs.iter().map(|&i| grid[i].clone()).collect();
        // Partial sums of Σ aᵢxᵢ let every prefix norm come from one pass.
        let mut partial = Vector::zero();
        let mut prefix_norms = Vec::with_capacity(m_total);
        for (x, c) in xs.iter().zip(&a) {
            partial = partial.add(&x.scale(c));
            prefix_norms.push(w.norm(&partial));
        }
        for m in 1..m_total {
            let denom = &prefix_norms[m];
            for n in 0..m {
                let numer = &prefix_norms[n];
                if denom.is_zero() {
                    if numer.is_zero() {
                        continue;
                    }
                    return Err(Error::DegenerateSpan);
                }
                let ratio = numer / denom;
                if ratio > best {
                    best = ratio.clone();
                    witness = Some((n + 1, m + 1, a.clone()));
                }
            }
        }
        // Odometer over the coefficient grid.
        let mut t = m_total;
        loop {
            if t == 0 {
                return Ok((best, witness));
            }
            t -= 1;
            coeffs[t] += 1;
            if coeffs[t] < grid.len() {
                break;
            }
            coeffs[t] = 0;
        }
    }
}

/// Check `‖Σ εᵢaᵢxᵢ‖ ≤ K·‖Σ aᵢxᵢ‖` for every sign pattern ε over a fixed
/// coefficient grid.  Exact comparisons.
pub fn is_unconditional(xs: &[Vector], w: &NormingSet, k_const: &BigRational) -> bool {
    let grid = coefficient_grid(2);
    let m = xs.len();
    let mut coeffs = vec![0usize; m];
    loop {
        let a: Vec<BigRational> = coeffs.iter().map(|&i| grid[i].clone()).collect();
        let base = {
            let mut v = Vector::zero();
            for (x, c) in xs.iter().zip(&a) {
                v = v.add(&x.scale(c));
            }
            w.norm(&v)
        };
        let bound = k_const * &base;
        for signs in sign_patterns(m) {
            let mut v = Vector::zero();
            for ((x, c), sg) in xs.iter().zip(&a).zip(&signs) {
                let signed = c * BigRational::from_integer(BigInt::from(*sg));
                v = v.add(&x.scale(&signed));
            }
            if w.norm(&v) > bound {
                return false;
            }
        }
        let mut t = m;
        loop {
            if t == 0 {
                return true;
            }
            t -= 1;
            coeffs[t] += 1;
            if coeffs[t] < grid.len() {
                break;
            }
            coeffs[t] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Exact shape tests used by the model layer
// ---------------------------------------------------------------------------

/// Exact test for `ρ = ‖·‖₁` on ℝᵏ: with all entries in `[−1,1]`, equality
/// holds iff every sign vector evaluates to `k`.
pub fn equals_l1(p: &SeminormPoint) -> bool {
    let k = p.dim();
    let target = BigRational::from_integer(BigInt::from(k as i64));
    sign_patterns(k).into_iter().all(|sg| {
        let a: Vec<BigRational> =
            sg.into_iter().map(|s| BigRational::from_integer(s.into())).collect();
        p.eval(&a) == target
    })
}

/// Exact test for `ρ = ‖·‖_∞` on ℝᵏ: every row must lie in the ℓ₁ unit ball
/// (so `ρ ≤ ‖·‖_∞`) while normalisation gives `ρ(eⱼ) = 1`.
pub fn equals_sup(p: &SeminormPoint) -> bool {
    p.rows().iter().all(|r| {
        let l1: BigRational = r.iter().map(|x| x.abs()).sum();
        l1 <= BigRational::one()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::fs;
    use crate::rat::q;

    fn vec_of(pairs: &[(u32, i64)]) -> Vector {
        Vector::from_pairs(pairs.iter().map(|&(i, v)| (i, rat::qi(v))))
    }

    /// The two-functional family whose norms converge to a seminorm.
    fn w_n(n: i64) -> NormingSet {
        NormingSet::Extensional {
            funcs: vec![
                Functional::from_pairs([(1, rat::qi(1)), (2, rat::qi(-1))]),
                Functional::from_pairs([(2, q(1, n))]),
            ],
            with_g0: false,
        }
    }

    #[test]
    fn sparse_json_round_trip() {
        let x = Vector::from_pairs([(1, q(1, 2)), (4, q(-2, 3))]);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"1":"1/2","4":"-2/3"}"#);
        let back: Vector = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        // Zeros are pruned on the way in.
        let pruned: Vector = serde_json::from_str(r#"{"2":"0","3":"5"}"#).unwrap();
        assert_eq!(pruned.support(), fs(&[3]));
    }

    #[test]
    fn norming_set_json_round_trip() {
        for w in [
            NormingSet::L1,
            NormingSet::Sup,
            NormingSet::Schreier,
            NormingSet::Lp { p: q(3, 2) },
            w_n(5),
        ] {
            let json = serde_json::to_string(&w).unwrap();
            let back: NormingSet = serde_json::from_str(&json).unwrap();
            assert_eq!(back, w);
        }
        let parsed: NormingSet = serde_json::from_str(r#"{"kind":"schreier"}"#).unwrap();
        assert_eq!(parsed, NormingSet::Schreier);
    }

    #[test]
    fn norm_closed_forms() {
        let x = vec_of(&[(1, 1), (2, -2), (3, 3)]);
        assert_eq!(NormingSet::L1.norm(&x), rat::qi(6));
        assert_eq!(NormingSet::Sup.norm(&x), rat::qi(3));
        // ℓ₂ via the floating oracle.
        let l2 = NormingSet::Lp { p: rat::qi(2) }.norm(&x).to_f64().unwrap();
        assert!((l2 - 14f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn two_functional_family_evaluates_exactly() {
        let x = vec_of(&[(1, 1), (2, 1)]);
        assert_eq!(w_n(5).norm(&x), q(1, 5));
        for n in 1..=64 {
            assert_eq!(w_n(n).norm(&x), q(1, n), "n = {n}");
        }
    }

    #[test]
    fn self_counting_norm_favors_admissible_windows() {
        // Support {3,5,9} is admissible (|s| = 3 = min), so all mass counts.
        let x = vec_of(&[(3, 1), (5, 1), (9, 1)]);
        assert_eq!(NormingSet::Schreier.norm(&x), rat::qi(3));
        // Support {1,2} admits no self-counting set containing both (such a
        // set would need min 1 and size ≥ 2), so only one coordinate counts.
        let y = vec_of(&[(1, 1), (2, 1)]);
        assert_eq!(NormingSet::Schreier.norm(&y), rat::qi(1));
        // Unit vectors are normalised.
        for i in [1u32, 2, 5, 9] {
            assert_eq!(NormingSet::Schreier.norm(&Vector::unit(i)), rat::qi(1), "e_{i}");
        }
    }

    #[test]
    fn norm_axioms_exact_on_samples() {
        let sets = [NormingSet::L1, NormingSet::Sup, NormingSet::Schreier, w_n(7)];
        let samples = [
            vec_of(&[(1, 2), (3, -1)]),
            vec_of(&[(2, 1), (4, 5), (6, -3)]),
            Vector::from_pairs([(1, q(1, 2)), (2, q(2, 3)), (5, q(-7, 4))]),
        ];
        for w in &sets {
            for x in &samples {
                for y in &samples {
                    let lhs = w.norm(&x.add(y));
                    assert!(lhs <= w.norm(x) + w.norm(y), "triangle fails");
                }
                let c = q(-3, 2);
                assert_eq!(w.norm(&x.scale(&c)), c.abs() * w.norm(x), "homogeneity fails");
            }
        }
    }

    #[test]
    fn seminorm_point_shapes() {
        let pos = fs(&[1, 2, 3]);
        let l1 = seminorm_point(&NormingSet::L1, &pos).unwrap();
        assert!(equals_l1(&l1) && !equals_sup(&l1));
        let sup = seminorm_point(&NormingSet::Sup, &pos).unwrap();
        assert!(equals_sup(&sup) && !equals_l1(&sup));
        // Admissible support → full ℓ₁ on ℝ³.
        let sch = seminorm_point(&NormingSet::Schreier, &fs(&[3, 5, 9])).unwrap();
        assert!(equals_l1(&sch));
        // Non-admissible support: {1,5,9} only traces to {1} and {5,9}-side
        // sets, so the point is strictly between.
        let sch2 = seminorm_point(&NormingSet::Schreier, &fs(&[1, 5, 9])).unwrap();
        assert!(!equals_l1(&sch2));
        let v = vec![rat::qi(1), rat::qi(1), rat::qi(1)];
        assert_eq!(sch2.eval(&v), rat::qi(2));
    }

    #[test]
    fn seminorm_point_requires_normalization() {
        let w = NormingSet::Extensional {
            funcs: vec![Functional::from_pairs([(1, q(1, 2))])],
            with_g0: false,
        };
        let err = seminorm_point(&w, &fs(&[1]));
        assert!(matches!(err, Err(Error::NotNormalized { position: 1 })));
        let lp = seminorm_point(&NormingSet::Lp { p: q(3, 2) }, &fs(&[1]));
        assert!(matches!(lp, Err(Error::EvaluationOnly { .. })));
    }

    #[test]
    fn kernel_witness_detects_seminorms() {
        let pos = fs(&[1, 2]);
        let l1 = seminorm_point(&NormingSet::L1, &pos).unwrap();
        assert!(l1.is_norm());
        // ρ(a,b) = max(|a−b|, |b|/5) vanishes nowhere except… it is a norm.
        let wn = seminorm_point(&w_n(5), &pos).unwrap();
        assert!(wn.is_norm());
        // A single-functional seminorm has a kernel.
        let w = NormingSet::Extensional {
            funcs: vec![Functional::from_pairs([(1, rat::qi(1)), (2, rat::qi(1))])],
            with_g0: false,
        };
        let p = seminorm_point(&w, &pos).unwrap();
        let witness = p.kernel_witness().unwrap();
        assert!(p.eval(&witness).is_zero());
        assert!(witness.iter().any(|x| !x.is_zero()));
    }

    #[test]
    fn distance_brackets_contain_the_truth() {
        let pos = fs(&[1, 2]);
        let l1 = seminorm_point(&NormingSet::L1, &pos).unwrap();
        let sup = seminorm_point(&NormingSet::Sup, &pos).unwrap();
        // Identical points: lo = 0.
        let d = distance(&l1, &l1, &q(1, 8)).unwrap();
        assert!(d.lo.is_zero());
        // ℓ₁ vs ℓ∞ on ℝ²: true distance 1, attained at (1,1).
        let d = distance(&l1, &sup, &q(1, 8)).unwrap();
        assert_eq!(d.lo, rat::qi(1));
        assert!(d.contains(&rat::qi(1)));
        // Intervals shrink monotonically with the mesh.
        let d2 = distance(&l1, &sup, &q(1, 16)).unwrap();
        assert!(d2.hi <= d.hi && d2.lo >= d.lo);
    }

    #[test]
    fn distance_of_the_convergent_family() {
        let pos = fs(&[1, 2]);
        let p5 = seminorm_point(&w_n(5), &pos).unwrap();
        let p10 = seminorm_point(&w_n(10), &pos).unwrap();
        let d = distance(&p5, &p10, &q(1, 8)).unwrap();
        // sup |ρ₅ − ρ₁₀| = 1/5 − 1/10, attained at (1,1) which the grid hits.
        assert_eq!(d.lo, q(1, 10));
        assert!(d.contains(&q(1, 10)));
    }

    #[test]
    fn integer_and_rational_grid_paths_agree() {
        let pos = fs(&[1, 2]);
        let p5 = seminorm_point(&w_n(5), &pos).unwrap();
        let sup = seminorm_point(&NormingSet::Sup, &pos).unwrap();
        let mesh = q(1, 7);
        let mut axis = vec![rat::qi(-1)];
        let mut v = rat::qi(-1);
        while v < rat::qi(1) {
            v += &mesh;
            axis.push(v.clone());
        }
        *axis.last_mut().unwrap() = rat::qi(1);
        let fast = integer_grid_max(&p5, &sup, &axis).unwrap();
        let slow = rational_grid_max(&p5, &sup, &axis);
        assert_eq!(fast, slow);
    }

    #[test]
    fn coloring_sets_norm_their_zero_sets() {
        // C ≡ 0 on pairs from {1,2,3}: the full pair functionals are present.
        let all_zero = Coloring::constant(2, 0);
        let w = coloring_norming_set(&all_zero, &fs(&[1, 2, 3]));
        assert_eq!(w.norm(&vec_of(&[(1, 1), (2, 1)])), rat::qi(2));
        // C ≡ 1: only G₀ remains.
        let all_one = Coloring::constant(2, 1);
        let w = coloring_norming_set(&all_one, &fs(&[1, 2, 3]));
        assert_eq!(w.norm(&vec_of(&[(1, 1), (2, 1)])), rat::qi(1));
        // One zero set {1,2,3}: a functional there meets {2,3,4} twice.
        let only = Coloring::from_table(3, [(fs(&[1, 2, 3]), 0)]);
        let w = coloring_norming_set(&only, &fs(&[1, 2, 3, 4]));
        assert_eq!(w.norm(&vec_of(&[(2, 1), (3, 1), (4, 1)])), rat::qi(2));
    }

    #[test]
    fn net_is_small_and_covers_its_stream() {
        // k = 1: the space is a single point.
        let net1 = epsilon_net(1, &rat::qi(1)).unwrap();
        assert_eq!(net1.len(), 1);

        let eps = rat::qi(1);
        let net = epsilon_net(2, &eps).unwrap();
        assert!(!net.is_empty());
        // Every stream member sits within ε of some net point: same cell
        // means lo ≤ ε/2, and certification with mesh ε/(5k) keeps hi < ε.
        let mesh = &eps / rat::qi(10);
        for cand in standard_norm_stream(2, 40, NET_STREAM_SEED) {
            let within = net.iter().any(|p| {
                distance(p, &cand, &mesh).map_or(false, |d| d.hi < eps)
            });
            assert!(within, "{cand} not covered");
        }
    }

    #[test]
    fn basic_constant_of_monotone_bases() {
        let basis = vec![Vector::unit(1), Vector::unit(2), Vector::unit(3)];
        for w in [NormingSet::L1, NormingSet::Sup] {
            let r = basic_constant(&basis, &w).unwrap();
            assert_eq!(r.lower, rat::qi(1), "{w:?}");
            assert_eq!(r.upper_estimate, rat::qi(1), "{w:?}");
        }
        // (e₁, e₁−e₂): prefix e₁ can beat the full sum under the sup norm.
        let skew = vec![Vector::unit(1), vec_of(&[(1, 1), (2, -1)])];
        let r = basic_constant(&skew, &NormingSet::Sup).unwrap();
        assert!(r.lower >= rat::qi(1));
        assert!(r.witness.is_some());
    }

    #[test]
    fn unconditionality_sweep() {
        let basis = vec![Vector::unit(1), Vector::unit(2), Vector::unit(3)];
        assert!(is_unconditional(&basis, &NormingSet::L1, &rat::qi(1)));
        assert!(is_unconditional(&basis, &NormingSet::Schreier, &rat::qi(1)));
        // (e₁, e₁+e₂) under the sup norm: flipping the first term doubles it.
        let skew = vec![Vector::unit(1), vec_of(&[(1, 1), (2, 1)])];
        assert!(!is_unconditional(&skew, &NormingSet::Sup, &rat::qi(1)));
    }

    #[test]
    fn restriction_truncates_rows() {
        let pos = fs(&[1, 2, 3]);
        let l1 = seminorm_point(&NormingSet::L1, &pos).unwrap();
        let r = l1.restrict(2);
        assert_eq!(r.dim(), 2);
        assert!(equals_l1(&r));
        assert_eq!(r.eval(&[rat::qi(1), rat::qi(-1)]), rat::qi(2));
    }
}
