//! The operation catalogue: every library call the driver exposes, with its
//! JSON input schema, a shared executor, and the CSV tables each result
//! carries.  Both the scenario runner and the direct subcommands funnel
//! through [`Operation`], so a command line and a scenario file with the same
//! inputs produce the same result.

use std::collections::BTreeMap;

use num::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};

use barrierlab::barrier::{self, BarrierTerm};
use barrierlab::finset::{transfer_map, FinSet, InfSetWindow};
use barrierlab::models::{
    build_sum_matrix, gliding_hump, is_plegma_block, spreading_model, stabilize_matrix,
    MatrixSource, ModelReport, NullRowMatrix,
};
use barrierlab::normspace::{distance, epsilon_net, seminorm_point, NormingSet, Vector};
use barrierlab::plegma;
use barrierlab::ramsey::{
    homogenize, oscillation_stable_subset, ramsey_roundtrip, ColorRule, Coloring, Schedule,
};
use barrierlab::{rat, Error, Result};

// ---------------------------------------------------------------------------
// Outcome plumbing
// ---------------------------------------------------------------------------

/// One CSV table attached to a result: a header row plus data rows.  Cells
/// never contain commas (sets are space-separated inside a cell), so the
/// rendering needs no quoting.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// The table as CSV text, one trailing newline.
    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// What an operation produced: a JSON result, any CSV tables, and whether
/// the run was only partial (a window ran out before the obligation was
/// met, with the reason).
#[derive(Debug, Clone)]
pub struct OpOutcome {
    pub result: Value,
    pub tables: Vec<Table>,
    pub partial: Option<String>,
}

impl OpOutcome {
    fn clean(result: Value) -> Self {
        OpOutcome { result, tables: Vec::new(), partial: None }
    }
}

/// Exit-code class of an error: window-exhaustion failures are partial
/// results (exit 2), everything else is a hard error (exit 1).
pub fn severity(e: &Error) -> i32 {
    match e {
        Error::WindowExhausted { .. }
        | Error::InsufficientWindow { .. }
        | Error::TargetUnreachable { .. }
        | Error::GapTooSmall { .. } => 2,
        _ => 1,
    }
}

fn schema<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Schema(msg.into()))
}

fn parse_inputs<T: serde::de::DeserializeOwned>(command: &str, inputs: Value) -> Result<T> {
    serde_json::from_value(inputs)
        .map_err(|e| Error::Schema(format!("inputs for `{command}`: {e}")))
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Schema(format!("result serialisation: {e}")))
}

/// `{1, …, n}` as the standing finite stand-in for an infinite window.
fn depth_window(n: u32) -> Result<FinSet> {
    if n == 0 {
        return schema("window depth must be ≥ 1");
    }
    FinSet::new((1..=n).collect())
}

fn set_cell(s: &FinSet) -> String {
    if s.is_empty() {
        "∅".to_string()
    } else {
        s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    }
}

fn rationals_cell(row: &[BigRational]) -> String {
    row.iter().map(rat::fmt).collect::<Vec<_>>().join(" ")
}

// ---------------------------------------------------------------------------
// Input schemas
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
pub struct TermInputs {
    term: BarrierTerm,
}

#[derive(Deserialize)]
pub struct FrontInputs {
    term: BarrierTerm,
    window: u32,
}

#[derive(Deserialize)]
pub struct SectionInputs {
    term: BarrierTerm,
    n: u32,
}

fn default_count() -> usize {
    6
}

fn default_depth() -> u32 {
    12
}

#[derive(Deserialize)]
pub struct EmbedInputs {
    f: BarrierTerm,
    g: BarrierTerm,
    m: InfSetWindow,
    n: InfSetWindow,
    #[serde(default = "default_count")]
    count: usize,
    /// How deep the closure verification looks into both windows.
    #[serde(default = "default_depth")]
    depth: u32,
}

#[derive(Deserialize)]
pub struct ProjectInputs {
    f: BarrierTerm,
    g: BarrierTerm,
    m: InfSetWindow,
    l: InfSetWindow,
    set: FinSet,
}

#[derive(Deserialize)]
pub struct EnumInputs {
    term: BarrierTerm,
    n: usize,
    window: u32,
}

#[derive(Deserialize)]
pub struct CheckInputs {
    tuple: Vec<FinSet>,
}

#[derive(Deserialize)]
pub struct DecomposeInputs {
    term: BarrierTerm,
    set: FinSet,
    n: usize,
}

#[derive(Deserialize)]
pub struct EvalInputs {
    set: NormingSet,
    vector: Vector,
}

fn default_mesh() -> String {
    "1/8".to_string()
}

#[derive(Deserialize)]
pub struct DistInputs {
    set1: NormingSet,
    positions1: FinSet,
    set2: NormingSet,
    positions2: FinSet,
    #[serde(default = "default_mesh")]
    mesh: String,
}

#[derive(Deserialize)]
pub struct NetInputs {
    k: usize,
    eps: String,
}

fn default_colors() -> u32 {
    2
}

#[derive(Deserialize)]
pub struct ColoringInputs {
    k: usize,
    #[serde(default = "default_colors")]
    colors: u32,
    window: u32,
    target: usize,
    /// Closed-form color rule; defaults to the hash rule under the run seed.
    #[serde(default)]
    rule: Option<ColorRule>,
}

impl ColoringInputs {
    fn coloring(&self, seed: u64) -> Result<Coloring> {
        match &self.rule {
            Some(rule) => Coloring::new(self.k, self.colors, rule.clone(), BTreeMap::new()),
            None => Ok(Coloring::seeded(self.k, self.colors, seed)),
        }
    }
}

/// A sequence of vectors, given either explicitly or as the first `units`
/// basis vectors.
#[derive(Deserialize)]
struct SeqInputs {
    #[serde(default)]
    vectors: Vec<Vector>,
    #[serde(default)]
    units: Option<u32>,
}

impl SeqInputs {
    fn vectors(&self) -> Result<Vec<Vector>> {
        match (self.vectors.is_empty(), self.units) {
            (false, None) => Ok(self.vectors.clone()),
            (true, Some(u)) if u >= 1 => Ok((1..=u).map(Vector::unit).collect()),
            _ => schema("give exactly one of `vectors` (non-empty) or `units` (≥ 1)"),
        }
    }
}

#[derive(Deserialize)]
pub struct StabilizeSeqInputs {
    #[serde(flatten)]
    seq: SeqInputs,
    set: NormingSet,
    k: usize,
    eps: String,
    target: usize,
}

fn default_levels() -> usize {
    2
}

#[derive(Deserialize)]
struct ScheduleInputs {
    #[serde(default = "default_levels")]
    levels: usize,
    /// Explicit strictly decreasing tolerances; overrides `levels`.
    #[serde(default)]
    schedule: Option<Vec<String>>,
}

impl ScheduleInputs {
    fn schedule(&self) -> Result<Schedule> {
        match &self.schedule {
            Some(eps) => Schedule::new(eps.iter().map(|s| rat::parse(s)).collect::<Result<_>>()?),
            None if self.levels >= 1 => Ok(Schedule::halving(self.levels)),
            None => schema("levels must be ≥ 1"),
        }
    }
}

#[derive(Deserialize)]
pub struct MatrixInputs {
    matrix: MatrixSource,
    nmax: usize,
    window: u32,
    #[serde(flatten)]
    sched: ScheduleInputs,
}

#[derive(Deserialize)]
pub struct SpreadingInputs {
    #[serde(flatten)]
    seq: SeqInputs,
    host: NormingSet,
    nmax: usize,
    #[serde(flatten)]
    sched: ScheduleInputs,
}

#[derive(Deserialize)]
pub struct GlideInputs {
    rows: Vec<Vec<Vector>>,
    host: NormingSet,
    cols: usize,
}

// ---------------------------------------------------------------------------
// The operation catalogue
// ---------------------------------------------------------------------------

/// One dispatchable operation with parsed, validated inputs.
pub enum Operation {
    BarrierRank(TermInputs),
    BarrierFront(FrontInputs),
    BarrierSection(SectionInputs),
    BarrierEmbed(EmbedInputs),
    BarrierProject(ProjectInputs),
    PlegmaEnum(EnumInputs),
    PlegmaCheck(CheckInputs),
    PlegmaDecompose(DecomposeInputs),
    NormEval(EvalInputs),
    NormDist(DistInputs),
    NormNet(NetInputs),
    RamseyHomogenize { inputs: ColoringInputs, seed: u64 },
    RamseyRoundtrip { inputs: ColoringInputs, seed: u64 },
    RamseyStabilize(StabilizeSeqInputs),
    ModelStabilize(MatrixInputs),
    ModelSpreading(SpreadingInputs),
    ModelChain(MatrixInputs),
    ModelGlide(GlideInputs),
}

/// Every command name, for schema errors and the help text.
pub const COMMANDS: &[&str] = &[
    "barrier-rank",
    "barrier-front",
    "barrier-section",
    "barrier-embed",
    "barrier-project",
    "plegma-enum",
    "plegma-check",
    "plegma-decompose",
    "norm-eval",
    "norm-dist",
    "norm-net",
    "ramsey-homogenize",
    "ramsey-roundtrip",
    "ramsey-stabilize",
    "model-stabilize",
    "model-spreading",
    "model-chain",
    "model-glide",
];

impl Operation {
    /// Parse a scenario command plus inputs.  The seed feeds the default
    /// coloring rule of the two ramsey searches; every other operation is
    /// deterministic in its inputs alone.
    pub fn from_command(command: &str, inputs: Value, seed: u64) -> Result<Operation> {
        Ok(match command {
            "barrier-rank" => Operation::BarrierRank(parse_inputs(command, inputs)?),
            "barrier-front" => Operation::BarrierFront(parse_inputs(command, inputs)?),
            "barrier-section" => Operation::BarrierSection(parse_inputs(command, inputs)?),
            "barrier-embed" => Operation::BarrierEmbed(parse_inputs(command, inputs)?),
            "barrier-project" => Operation::BarrierProject(parse_inputs(command, inputs)?),
            "plegma-enum" => Operation::PlegmaEnum(parse_inputs(command, inputs)?),
            "plegma-check" => Operation::PlegmaCheck(parse_inputs(command, inputs)?),
            "plegma-decompose" => Operation::PlegmaDecompose(parse_inputs(command, inputs)?),
            "norm-eval" => Operation::NormEval(parse_inputs(command, inputs)?),
            "norm-dist" => Operation::NormDist(parse_inputs(command, inputs)?),
            "norm-net" => Operation::NormNet(parse_inputs(command, inputs)?),
            "ramsey-homogenize" => {
                Operation::RamseyHomogenize { inputs: parse_inputs(command, inputs)?, seed }
            }
            "ramsey-roundtrip" => {
                Operation::RamseyRoundtrip { inputs: parse_inputs(command, inputs)?, seed }
            }
            "ramsey-stabilize" => Operation::RamseyStabilize(parse_inputs(command, inputs)?),
            "model-stabilize" => Operation::ModelStabilize(parse_inputs(command, inputs)?),
            "model-spreading" => Operation::ModelSpreading(parse_inputs(command, inputs)?),
            "model-chain" => Operation::ModelChain(parse_inputs(command, inputs)?),
            "model-glide" => Operation::ModelGlide(parse_inputs(command, inputs)?),
            other => {
                return schema(format!(
                    "unknown command `{other}`; expected one of: {}",
                    COMMANDS.join(", ")
                ))
            }
        })
    }

    pub fn execute(&self) -> Result<OpOutcome> {
        match self {
            Operation::BarrierRank(i) => barrier_rank(i),
            Operation::BarrierFront(i) => barrier_front(i),
            Operation::BarrierSection(i) => barrier_section(i),
            Operation::BarrierEmbed(i) => barrier_embed(i),
            Operation::BarrierProject(i) => barrier_project(i),
            Operation::PlegmaEnum(i) => plegma_enum(i),
            Operation::PlegmaCheck(i) => plegma_check(i),
            Operation::PlegmaDecompose(i) => plegma_decompose(i),
            Operation::NormEval(i) => norm_eval(i),
            Operation::NormDist(i) => norm_dist(i),
            Operation::NormNet(i) => norm_net(i),
            Operation::RamseyHomogenize { inputs, seed } => ramsey_homogenize(inputs, *seed),
            Operation::RamseyRoundtrip { inputs, seed } => ramsey_roundtrip_op(inputs, *seed),
            Operation::RamseyStabilize(i) => ramsey_stabilize(i),
            Operation::ModelStabilize(i) => model_stabilize(i),
            Operation::ModelSpreading(i) => model_spreading(i),
            Operation::ModelChain(i) => model_chain(i),
            Operation::ModelGlide(i) => model_glide(i),
        }
    }
}

// ---------------------------------------------------------------------------
// Barrier operations
// ---------------------------------------------------------------------------

fn barrier_rank(i: &TermInputs) -> Result<OpOutcome> {
    let rank = i.term.rank()?;
    Ok(OpOutcome::clean(json!({
        "term": to_value(&i.term)?,
        "display": i.term.to_string(),
        "rank": rank.to_string(),
        "rank_degree": rank.degree(),
    })))
}

fn barrier_front(i: &FrontInputs) -> Result<OpOutcome> {
    let window = depth_window(i.window)?;
    let members = i.term.front(&window)?;
    let mut table = Table::new("front", &["index", "set"]);
    for (idx, s) in members.iter().enumerate() {
        table.push(vec![(idx + 1).to_string(), set_cell(s)]);
    }
    let mut out = OpOutcome::clean(json!({
        "count": members.len(),
        "members": to_value(&members)?,
    }));
    out.tables.push(table);
    Ok(out)
}

fn barrier_section(i: &SectionInputs) -> Result<OpOutcome> {
    let section = i.term.section(i.n)?;
    Ok(OpOutcome::clean(json!({
        "section": to_value(&section)?,
        "display": section.to_string(),
        "rank": section.rank()?.to_string(),
    })))
}

/// Embed, then re-verify the defining closure property over a finite depth:
/// every member of `F ↾ M` inside the depth window transfers into an initial
/// segment of a member of `G ↾ L₀`.
fn barrier_embed(i: &EmbedInputs) -> Result<OpOutcome> {
    let l0 = barrier::embed_prefix(&i.f, &i.g, &i.m, &i.n, i.count)?;
    let g_l0 = BarrierTerm::restrict(i.g.clone(), l0.clone())?;
    let m_depth = i.m.take(i.depth as usize);
    let mut table = Table::new("embed", &["source", "transfer", "extends"]);
    let mut verified = 0usize;
    for s in i.f.front(&m_depth)? {
        let t = transfer_map(&s, &i.m, &l0)?;
        let ok = g_l0.extends_to_member(&t)?;
        verified += usize::from(ok);
        table.push(vec![set_cell(&s), set_cell(&t), ok.to_string()]);
    }
    let total = table.rows.len();
    let mut out = OpOutcome::clean(json!({
        "l0": to_value(&l0)?,
        "closure_verified": verified,
        "closure_total": total,
    }));
    if verified < total {
        out.partial = Some(format!(
            "closure holds for {verified} of {total} members within depth {}",
            i.depth
        ));
    }
    out.tables.push(table);
    Ok(out)
}

fn barrier_project(i: &ProjectInputs) -> Result<OpOutcome> {
    let t = barrier::project(&i.f, &i.g, &i.m, &i.l, &i.set)?;
    Ok(OpOutcome::clean(json!({
        "projection": to_value(&t)?,
        "transfer_back": to_value(&transfer_map(&t, &i.m, &i.l)?)?,
    })))
}

// ---------------------------------------------------------------------------
// Plegma operations
// ---------------------------------------------------------------------------

fn plegma_enum(i: &EnumInputs) -> Result<OpOutcome> {
    let window = depth_window(i.window)?;
    let tuples = plegma::enumerate_plegma(&i.term, i.n, &window)?;
    let mut header: Vec<&str> = vec!["index"];
    let entry_names: Vec<String> = (1..=i.n).map(|j| format!("entry_{j}")).collect();
    header.extend(entry_names.iter().map(|s| s.as_str()));
    let mut table = Table::new("tuples", &header);
    for (idx, t) in tuples.iter().enumerate() {
        let mut row = vec![(idx + 1).to_string()];
        row.extend(t.entries().iter().map(set_cell));
        table.push(row);
    }
    let mut out = OpOutcome::clean(json!({
        "count": tuples.len(),
        "tuples": to_value(&tuples)?,
    }));
    out.tables.push(table);
    Ok(out)
}

fn plegma_check(i: &CheckInputs) -> Result<OpOutcome> {
    let violation = plegma::plegma_violation(&i.tuple);
    Ok(OpOutcome::clean(json!({
        "is_plegma": violation.is_none(),
        "violation": violation,
    })))
}

fn plegma_decompose(i: &DecomposeInputs) -> Result<OpOutcome> {
    let t = plegma::decompose(&i.term, &i.set, i.n)?;
    Ok(OpOutcome::clean(json!({
        "tuple": to_value(&t)?,
        "is_plegma": plegma::is_plegma(t.entries()),
    })))
}

// ---------------------------------------------------------------------------
// Norm operations
// ---------------------------------------------------------------------------

fn norm_eval(i: &EvalInputs) -> Result<OpOutcome> {
    Ok(OpOutcome::clean(json!({
        "norm": rat::fmt(&i.set.norm(&i.vector)),
    })))
}

fn norm_dist(i: &DistInputs) -> Result<OpOutcome> {
    let mesh = rat::parse(&i.mesh)?;
    let p1 = seminorm_point(&i.set1, &i.positions1)?;
    let p2 = seminorm_point(&i.set2, &i.positions2)?;
    let d = distance(&p1, &p2, &mesh)?;
    Ok(OpOutcome::clean(json!({
        "lo": rat::fmt(&d.lo),
        "hi": rat::fmt(&d.hi),
        "mesh": rat::fmt(&mesh),
    })))
}

fn norm_net(i: &NetInputs) -> Result<OpOutcome> {
    let eps = rat::parse(&i.eps)?;
    let net = epsilon_net(i.k, &eps)?;
    let mut table = Table::new("net", &["index", "provenance", "rows"]);
    for (idx, p) in net.iter().enumerate() {
        table.push(vec![
            (idx + 1).to_string(),
            p.provenance().to_string(),
            p.rows().iter().map(|r| rationals_cell(r)).collect::<Vec<_>>().join("|"),
        ]);
    }
    let mut out = OpOutcome::clean(json!({
        "size": net.len(),
        "points": to_value(&net)?,
    }));
    out.tables.push(table);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Ramsey operations
// ---------------------------------------------------------------------------

fn ramsey_homogenize(i: &ColoringInputs, seed: u64) -> Result<OpOutcome> {
    let c = i.coloring(seed)?;
    let window = depth_window(i.window)?;
    let (color, m) = homogenize(&c, &window, i.target)?;
    Ok(OpOutcome::clean(json!({
        "color": color,
        "m": to_value(&m)?,
    })))
}

fn ramsey_roundtrip_op(i: &ColoringInputs, seed: u64) -> Result<OpOutcome> {
    let c = i.coloring(seed)?;
    let window = depth_window(i.window)?;
    let report = ramsey_roundtrip(&c, &window, i.target)?;
    let mut table = Table::new("norms", &["set", "norm"]);
    for (s, v) in &report.norm_values {
        table.push(vec![set_cell(s), v.clone()]);
    }
    let mut out = OpOutcome::clean(to_value(&report)?);
    out.tables.push(table);
    Ok(out)
}

fn ramsey_stabilize(i: &StabilizeSeqInputs) -> Result<OpOutcome> {
    let vectors = i.seq.vectors()?;
    let eps = rat::parse(&i.eps)?;
    let m = oscillation_stable_subset(&vectors, &i.set, i.k, &eps, i.target)?;
    Ok(OpOutcome::clean(json!({
        "m": to_value(&m)?,
        "eps": rat::fmt(&eps),
    })))
}

// ---------------------------------------------------------------------------
// Model operations
// ---------------------------------------------------------------------------

fn model_tables(report: &ModelReport) -> Vec<Table> {
    let mut rhos = Table::new("rhos", &["level", "provenance", "row", "coords"]);
    for (n, rho) in report.rhos.iter().enumerate() {
        for (r, row) in rho.rows().iter().enumerate() {
            rhos.push(vec![
                (n + 1).to_string(),
                rho.provenance().to_string(),
                (r + 1).to_string(),
                rationals_cell(row),
            ]);
        }
    }
    let mut defects = Table::new("defects", &["levels", "lo", "hi"]);
    for (n, d) in report.compat_defects.iter().enumerate() {
        defects.push(vec![
            format!("{}~{}", n + 1, n + 2),
            rat::fmt(&d.lo),
            rat::fmt(&d.hi),
        ]);
    }
    vec![rhos, defects]
}

fn model_outcome(result: Value, report: &ModelReport) -> OpOutcome {
    let mut out = OpOutcome::clean(result);
    out.tables = model_tables(report);
    if report.exhausted {
        out.partial =
            Some(format!("stabilisation exhausted the window at depth {}", report.depth));
    }
    out
}

fn model_stabilize(i: &MatrixInputs) -> Result<OpOutcome> {
    let window = depth_window(i.window)?;
    let report = stabilize_matrix(&i.matrix, i.nmax, &i.sched.schedule()?, &window)?;
    Ok(model_outcome(to_value(&report)?, &report))
}

fn model_spreading(i: &SpreadingInputs) -> Result<OpOutcome> {
    let vectors = i.seq.vectors()?;
    let report = spreading_model(&vectors, &i.host, i.nmax, &i.sched.schedule()?)?;
    Ok(model_outcome(to_value(&report)?, &report))
}

/// One chain step: lift the matrix over the prefixed sum barrier, then
/// stabilise the lifted matrix.
fn model_chain(i: &MatrixInputs) -> Result<OpOutcome> {
    let lifted = build_sum_matrix(&i.matrix)?;
    let window = depth_window(i.window)?;
    let report = stabilize_matrix(&lifted, i.nmax, &i.sched.schedule()?, &window)?;
    Ok(model_outcome(
        json!({
            "lifted_barrier": to_value(&lifted.barrier)?,
            "report": to_value(&report)?,
        }),
        &report,
    ))
}

fn model_glide(i: &GlideInputs) -> Result<OpOutcome> {
    if i.rows.is_empty() {
        return schema("the gliding hump needs at least one row");
    }
    let input = NullRowMatrix { rows: i.rows.clone() };
    let report = gliding_hump(&input, &i.host, i.cols)?;
    let window = depth_window(report.picks.len().max(1) as u32)?;
    let block = is_plegma_block(&report.matrix, 2.min(i.rows.len()), &window)?;
    let mut table = Table::new("blocks", &["row", "col", "pick", "error"]);
    for (r, row) in report.errors.iter().enumerate() {
        for (c, err) in row.iter().enumerate() {
            table.push(vec![
                (r + 1).to_string(),
                (c + 1).to_string(),
                report.picks[c].to_string(),
                err.clone(),
            ]);
        }
    }
    let mut out = OpOutcome::clean(json!({
        "report": to_value(&report)?,
        "block_check": to_value(&block)?,
    }));
    out.tables.push(table);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Friendly argument parsing for the direct subcommands
// ---------------------------------------------------------------------------

/// Parse a JSON argument; `@path` reads the file at `path` first.
pub fn json_arg(s: &str) -> Result<Value> {
    let text = match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::Schema(format!("reading {path}: {e}")))?,
        None => s.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Error::Schema(format!("argument JSON: {e}")))
}

/// A finite set argument: either a JSON array or a comma list `1,2,3`.
pub fn set_arg(s: &str) -> Result<FinSet> {
    if s.trim().starts_with('[') {
        return serde_json::from_str(s).map_err(|e| Error::Schema(format!("set: {e}")));
    }
    if s.trim().is_empty() {
        return FinSet::new(Vec::new());
    }
    let elems: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|e| Error::Schema(format!("set element: {e}"))))
        .collect::<Result<_>>()?;
    FinSet::new(elems)
}

/// An infinite-window argument: full JSON, or `start` / `start+stride` for an
/// arithmetic progression.
pub fn window_arg(s: &str) -> Result<InfSetWindow> {
    if s.trim().starts_with('{') {
        return serde_json::from_str(s).map_err(|e| Error::Schema(format!("window: {e}")));
    }
    let (start, stride) = match s.split_once('+') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let start: u32 =
        start.parse().map_err(|e| Error::Schema(format!("window start: {e}")))?;
    let stride: u32 =
        stride.parse().map_err(|e| Error::Schema(format!("window stride: {e}")))?;
    if start == 0 || stride == 0 {
        return schema("window start and stride must be ≥ 1");
    }
    Ok(InfSetWindow::progression(start, stride))
}

/// A tuple argument: semicolon-separated comma lists, e.g. `1,2;3,4`, or a
/// JSON array of arrays.
pub fn tuple_arg(s: &str) -> Result<Vec<FinSet>> {
    if s.trim().starts_with('[') {
        return serde_json::from_str(s).map_err(|e| Error::Schema(format!("tuple: {e}")));
    }
    s.split(';').map(set_arg).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_and_window_arguments_parse() {
        assert_eq!(set_arg("1,2,3").unwrap(), FinSet::new(vec![1, 2, 3]).unwrap());
        assert_eq!(set_arg("[1,2]").unwrap(), FinSet::new(vec![1, 2]).unwrap());
        assert!(set_arg("2,1").is_err());
        assert_eq!(window_arg("3+2").unwrap(), InfSetWindow::progression(3, 2));
        assert_eq!(window_arg("5").unwrap(), InfSetWindow::progression(5, 1));
        assert!(window_arg("0+2").is_err());
        let w: InfSetWindow = window_arg(r#"{"prefix":[2],"tail_start":5,"tail_stride":3}"#)
            .unwrap();
        assert_eq!(w.at(2), 5);
    }

    #[test]
    fn tuple_argument_accepts_both_forms() {
        let t = tuple_arg("1,3;2,5").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[1], FinSet::new(vec![2, 5]).unwrap());
        assert_eq!(tuple_arg("[[1],[2]]").unwrap().len(), 2);
    }

    #[test]
    fn unknown_command_is_a_schema_error() {
        let err = match Operation::from_command("barrier-frontt", json!({}), 7) {
            Err(e) => e,
            Ok(_) => panic!("a misspelled command must not resolve"),
        };
        assert!(matches!(err, Error::Schema(_)));
        assert_eq!(severity(&err), 1);
    }

    #[test]
    fn severity_classifies_window_failures_as_partial() {
        assert_eq!(severity(&Error::WindowExhausted { level: 2 }), 2);
        assert_eq!(
            severity(&Error::InsufficientWindow { what: "x".into(), depth: 3 }),
            2
        );
        assert_eq!(severity(&Error::Schema("bad".into())), 1);
    }

    #[test]
    fn front_operation_round_trips_through_json() {
        let op = Operation::from_command(
            "barrier-front",
            json!({"term": {"cube": 2}, "window": 4}),
            7,
        )
        .unwrap();
        let out = op.execute().unwrap();
        assert_eq!(out.result["count"], json!(6));
        assert_eq!(out.tables.len(), 1);
        let csv = out.tables[0].render();
        assert!(csv.starts_with("index,set\n1,1 2\n"));
    }

    #[test]
    fn table_rendering_is_plain_csv() {
        let mut t = Table::new("t", &["a", "b"]);
        t.push(vec!["1".into(), "2 3".into()]);
        assert_eq!(t.render(), "a,b\n1,2 3\n");
    }
}
