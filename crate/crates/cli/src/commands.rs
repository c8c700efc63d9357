//! Subcommand bodies. Each returns a finished [`Report`] plus the exit code it
//! asks for, or a [`CliError`] carrying the code and message.
//!
//! Problem-file roles: `require:` lines are the event `X` for containment and
//! the conditioning `H` elsewhere; `forbid:` lines are `L` for containment.
//! For avoidance the first `--l0 K` forbid lines are `L0` and the rest are `Y`.

use std::path::Path;
use std::time::Instant;

use degbound::bipartite::{
    bipartite_forbidden_bounds_with, bipartite_single_edge_bounds, bipartite_subgraph_bounds_with,
};
use degbound::diagnostics::{
    corollary_diagnostics, corollary_diagnostics_bipartite, DiagnosticMode, DiagnosticReport,
};
use degbound::exec::Execution;
use degbound::families::{build, evaluate, ExampleProblem, Family, FamilyError, FamilyParams};
use degbound::generic::{forbidden_bounds_with, single_edge_bounds, subgraph_bounds_with};
use degbound::model::{
    reduce_conditioning, reduce_conditioning_bipartite, ModelError, ProblemInstance,
};
use degbound::oracle::census::{switching_census, Arity, Direction};
use degbound::oracle::mcmc::{mcmc_estimate, McmcConfig, McmcEvent};
use degbound::oracle::sweep::{
    bipartite_claim_sweep, bipartite_sandwich_sweep, generic_claim_sweep, generic_sandwich_sweep,
    ClaimConfig, SandwichConfig, SweepReport,
};
use degbound::oracle::{exact_probability, exact_ratio, EventKind, Layout, OracleError};
use degbound::problem::{parse_problem, Mode, ParseError, ProblemFile};
use degbound::rational::to_display;
use degbound::{
    BipartiteGraph, BoundError, Edge, LabelledGraph, OrderPolicy, ProbabilityBound, Theorem,
};

use crate::report::{InstanceSummary, Report, Value, DECIMAL_DIGITS};

pub const EXIT_OK: u8 = 0;
pub const EXIT_OTHER: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_INAPPLICABLE: u8 = 3;
pub const EXIT_RESOURCE: u8 = 4;
pub const EXIT_EXAMPLE: u8 = 5;

/// Per-edge terms beyond this many are summarized rather than listed.
const MAX_LISTED_TERMS: usize = 12;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        match e.line {
            0 => CliError::new(EXIT_PARSE, format!("invalid problem: {}", e.message)),
            _ => CliError::new(EXIT_PARSE, format!("invalid problem: {e}")),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::new(EXIT_PARSE, format!("invalid problem: {e}"))
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        match e {
            BoundError::DivisionByZero => CliError::new(EXIT_INAPPLICABLE, e.to_string()),
            BoundError::Model(m) => m.into(),
            _ => CliError::new(EXIT_OTHER, e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::ResourceLimit(_) | OracleError::TooLarge(_) => {
                CliError::new(EXIT_RESOURCE, e.to_string())
            }
            OracleError::Bound(b) => b.into(),
            OracleError::Model(m) => m.into(),
            _ => CliError::new(EXIT_OTHER, e.to_string()),
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::TooLarge { .. } => CliError::new(EXIT_RESOURCE, e.to_string()),
            FamilyError::TooSmall(_) | FamilyError::BadRegular { .. } => {
                CliError::new(EXIT_PARSE, e.to_string())
            }
            FamilyError::Model(_) => CliError::new(EXIT_OTHER, e.to_string()),
        }
    }
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct Context {
    pub command: Vec<String>,
    pub mode: Option<Mode>,
    pub order: OrderPolicy,
    pub seed: u64,
    pub node_budget: u64,
}

pub struct Outcome {
    pub report: Report,
    pub code: u8,
}

pub type CmdResult = Result<Outcome, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventArg {
    Contain,
    Avoid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Default,
    Full,
}

/// A loaded problem file with its path.
struct Loaded {
    file: ProblemFile,
    mode: Mode,
    source: String,
}

fn load(ctx: &Context, path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    let file = parse_problem(&text)?;
    let mode = file.check_mode(ctx.mode)?;
    Ok(Loaded {
        file,
        mode,
        source: path.display().to_string(),
    })
}

impl Loaded {
    fn summary(&self) -> InstanceSummary {
        let (vertices, edges) = match self.mode {
            Mode::Generic => {
                let d = self.file.degrees.as_deref().unwrap_or_default();
                (d.len().to_string(), d.iter().sum::<u64>() / 2)
            }
            Mode::Bipartite => {
                let s = self.file.left.as_deref().unwrap_or_default();
                let t = self.file.right.as_deref().unwrap_or_default();
                (format!("{}+{}", s.len(), t.len()), s.iter().sum::<u64>())
            }
        };
        InstanceSummary {
            mode: self.mode.name().to_string(),
            vertices,
            edges,
            required: self.file.require.len(),
            forbidden: self.file.forbid.len(),
            source: Some(self.source.clone()),
        }
    }

    /// `(L0, Y)` split of the forbid lines.
    fn split_forbid(&self, l0: usize) -> Result<(Vec<Edge>, Vec<Edge>), CliError> {
        let all = self.file.forbid_edges();
        if l0 > all.len() {
            return Err(CliError::new(
                EXIT_PARSE,
                format!("--l0 {l0} exceeds the {} forbid lines", all.len()),
            ));
        }
        let (a, b) = all.split_at(l0);
        Ok((a.to_vec(), b.to_vec()))
    }

    /// The file's class with `required` present and `forbidden` absent.
    fn instance_with(
        &self,
        required: &[Edge],
        forbidden: &[Edge],
    ) -> Result<ProblemInstance, CliError> {
        let mut f = self.file.clone();
        f.require = required.iter().map(|&e| (e, 0)).collect();
        f.forbid = forbidden.iter().map(|&e| (e, 0)).collect();
        Ok(f.instance()?)
    }
}

fn generic_graph(n: usize, edges: &[Edge]) -> Result<LabelledGraph, CliError> {
    Ok(LabelledGraph::new(n, edges.iter().copied())?)
}

fn bipartite_graph(a: usize, b: usize, edges: &[Edge]) -> Result<BipartiteGraph, CliError> {
    Ok(BipartiteGraph::new(a, b, edges.iter().copied())?)
}

fn start(ctx: &Context, loaded: Option<&Loaded>) -> (Report, Instant) {
    let mut r = Report::new(ctx.command.clone());
    r.instance = loaded.map(Loaded::summary);
    r.flag("mode", ctx.mode.map_or("inferred", Mode::name));
    r.flag("order", order_name(ctx.order));
    r.flag("seed", ctx.seed);
    r.flag("node-budget", ctx.node_budget);
    (r, Instant::now())
}

fn finish(mut report: Report, t0: Instant, code: u8) -> CmdResult {
    report.elapsed_ms = t0.elapsed().as_secs_f64() * 1e3;
    Ok(Outcome { report, code })
}

pub fn order_name(p: OrderPolicy) -> String {
    match p {
        OrderPolicy::Given => "given".into(),
        OrderPolicy::Random { .. } => "random".into(),
        OrderPolicy::BestOf { samples, .. } => format!("best-of:{samples}"),
    }
}

fn edge_text((u, v): Edge) -> String {
    format!("{u}-{v}")
}

/// Letters of the upper and lower per-edge terms for each theorem.
fn term_letters(t: Theorem) -> (&'static str, &'static str) {
    match t {
        Theorem::GenericSingleEdge | Theorem::GenericContainment => ("f", "g"),
        Theorem::GenericAvoidance => ("g", "f"),
        Theorem::BipartiteSingleEdge | Theorem::BipartiteContainment => ("p", "q"),
        Theorem::BipartiteAvoidance => ("q", "p"),
    }
}

fn leading_name(t: Theorem) -> &'static str {
    match t {
        Theorem::GenericSingleEdge | Theorem::BipartiteSingleEdge => "c",
        Theorem::GenericContainment => "Pi",
        Theorem::BipartiteContainment => "Pi'",
        Theorem::GenericAvoidance => "Phi",
        Theorem::BipartiteAvoidance => "Phi'",
    }
}

fn side_value(b: &ProbabilityBound, upper: bool) -> Value {
    let (side, letter) = if upper {
        (&b.upper, term_letters(b.theorem).0)
    } else {
        (&b.lower, term_letters(b.theorem).1)
    };
    match (&side.value, side.failing) {
        (Some(v), _) => Value::rational(v),
        (None, Some(i)) => {
            let edge = side
                .terms
                .get(i)
                .map_or("?".to_string(), |t| edge_text(t.edge));
            Value::undefined(&format!("inapplicable: {letter}({edge}) ≤ 0"))
        }
        (None, None) => Value::undefined("inapplicable"),
    }
}

/// Appends a bound's headline values and its per-edge term table.
fn put_bound(report: &mut Report, title: &str, b: &ProbabilityBound) {
    let s = report.section(title);
    s.put("theorem", Value::text(b.theorem.name()));
    s.put(leading_name(b.theorem), Value::rational(&b.leading));
    if b.theorem == Theorem::GenericContainment || b.theorem == Theorem::BipartiteContainment {
        s.put(
            "phi",
            Value::opt_rational(b.correction.as_ref(), "lower side inapplicable"),
        );
    }
    s.put("lower", side_value(b, false));
    s.put("upper", side_value(b, true));
    if let Some(u) = b.upper_raw() {
        if u > &degbound::rational::int(1) {
            s.put(
                "upper (clamped)",
                Value::rational(&b.upper_clamped().expect("applicable")),
            );
        }
    }
    s.put("lower applicable", Value::bool(b.lower.is_applicable()));
    s.put("upper applicable", Value::bool(b.upper.is_applicable()));
    if b.exact_zero {
        s.put("exact zero", Value::bool(true));
    }
    if b.exact_zero || b.upper.terms.is_empty() {
        return;
    }
    let (ul, ll) = term_letters(b.theorem);
    let terms = report.section(format!("{title} terms"));
    if b.upper.order.len() > 1 {
        terms.put("order", Value::text(format!("{:?}", b.upper.order)));
    }
    let n = b.upper.terms.len();
    for (tu, tl) in b
        .upper
        .terms
        .iter()
        .zip(&b.lower.terms)
        .take(MAX_LISTED_TERMS)
    {
        terms.put(
            format!("{ul}({})", edge_text(tu.edge)),
            Value::rational(&tu.value),
        );
        terms.put(
            format!("{ll}({})", edge_text(tl.edge)),
            Value::rational(&tl.value),
        );
    }
    if n > MAX_LISTED_TERMS {
        terms.put(
            "omitted",
            Value::text(format!("{} further edges", n - MAX_LISTED_TERMS)),
        );
    }
    if let Some(i) = b.upper.failing {
        terms.put("first nonpositive upper term", Value::int(i as i64));
    }
    if let Some(i) = b.lower.failing {
        terms.put("first nonpositive lower term", Value::int(i as i64));
    }
}

fn bound_code(b: &ProbabilityBound) -> u8 {
    if b.is_applicable() {
        EXIT_OK
    } else {
        EXIT_INAPPLICABLE
    }
}

pub fn bound_single(ctx: &Context, path: &Path, uv: Edge) -> CmdResult {
    let p = load(ctx, path)?;
    let (mut report, t0) = start(ctx, Some(&p));
    let b = match p.mode {
        Mode::Generic => {
            let (d, h, l) = p.file.generic_parts()?;
            single_edge_bounds(&d, &h, &l, uv)?
        }
        Mode::Bipartite => {
            let (s, t, h, l) = p.file.bipartite_parts()?;
            bipartite_single_edge_bounds(&s, &t, &h, &l, uv)?
        }
    };
    report.flag("edge", edge_text(uv));
    put_bound(&mut report, "bound", &b);
    let code = bound_code(&b);
    finish(report, t0, code)
}

pub fn bound_subgraph(ctx: &Context, path: &Path) -> CmdResult {
    let p = load(ctx, path)?;
    let (mut report, t0) = start(ctx, Some(&p));
    let b = match p.mode {
        Mode::Generic => {
            let (d, x, l) = p.file.generic_parts()?;
            subgraph_bounds_with(&d, &x, &l, ctx.order)?
        }
        Mode::Bipartite => {
            let (s, t, x, l) = p.file.bipartite_parts()?;
            bipartite_subgraph_bounds_with(&s, &t, &x, &l, ctx.order)?
        }
    };
    put_bound(&mut report, "bound", &b);
    let code = bound_code(&b);
    finish(report, t0, code)
}

pub fn bound_forbidden(ctx: &Context, path: &Path, l0: usize) -> CmdResult {
    let p = load(ctx, path)?;
    let (mut report, t0) = start(ctx, Some(&p));
    let (l0_edges, y_edges) = p.split_forbid(l0)?;
    let h_edges = p.file.require_edges();
    report.flag("l0", l0);
    let b = match p.mode {
        Mode::Generic => {
            let (d, _, _) = p.file.generic_parts()?;
            let n = d.len();
            let (l0g, yg, hg) = (
                generic_graph(n, &l0_edges)?,
                generic_graph(n, &y_edges)?,
                generic_graph(n, &h_edges)?,
            );
            let r = reduce_conditioning(&d, &hg, &l0g, &hg)?;
            forbidden_bounds_with(&r.degrees, &r.forbidden, &yg, ctx.order)?
        }
        Mode::Bipartite => {
            let (s, t, _, _) = p.file.bipartite_parts()?;
            let (a, c) = (s.len(), t.len());
            let (l0g, yg, hg) = (
                bipartite_graph(a, c, &l0_edges)?,
                bipartite_graph(a, c, &y_edges)?,
                bipartite_graph(a, c, &h_edges)?,
            );
            let r = reduce_conditioning_bipartite(&s, &t, &hg, &l0g, &hg)?;
            bipartite_forbidden_bounds_with(&r.left, &r.right, &r.forbidden, &yg, ctx.order)?
        }
    };
    if !h_edges.is_empty() {
        report.section("conditioning").put(
            "required edges moved into L0",
            Value::int(h_edges.len() as i64),
        );
    }
    put_bound(&mut report, "bound", &b);
    let code = bound_code(&b);
    finish(report, t0, code)
}

pub fn exact(
    ctx: &Context,
    path: &Path,
    event: EventArg,
    l0: usize,
    ratio: Option<Edge>,
) -> CmdResult {
    let p = load(ctx, path)?;
    let (mut report, t0) = start(ctx, Some(&p));
    let s = report.section("exact");
    if let Some(uv) = ratio {
        let inst = p.file.instance()?;
        let r = exact_ratio(&inst, uv, ctx.node_budget)?;
        s.put("edge", Value::text(edge_text(uv)));
        s.put("|with| / |without|", Value::rational(&r));
        return finish(report, t0, EXIT_OK);
    }
    let (inst, kind, edges) = match event {
        EventArg::Contain => (
            p.instance_with(&[], &p.file.forbid_edges())?,
            EventKind::Contains,
            p.file.require_edges(),
        ),
        EventArg::Avoid => {
            let (l0e, ye) = p.split_forbid(l0)?;
            (
                p.instance_with(&p.file.require_edges(), &l0e)?,
                EventKind::Avoids,
                ye,
            )
        }
    };
    let prob = exact_probability(&inst, kind, &edges, ctx.node_budget)?;
    s.put("event", Value::text(event_name(event)));
    s.put(
        "event edges",
        Value::text(
            edges
                .iter()
                .map(|&e| edge_text(e))
                .collect::<Vec<_>>()
                .join(" "),
        ),
    );
    s.put("probability", Value::rational(&prob));
    finish(report, t0, EXIT_OK)
}

fn event_name(e: EventArg) -> &'static str {
    match e {
        EventArg::Contain => "contain",
        EventArg::Avoid => "avoid",
    }
}

pub fn census(
    ctx: &Context,
    path: &Path,
    arity: Arity,
    direction: Direction,
    edge: Option<Edge>,
) -> CmdResult {
    let p = load(ctx, path)?;
    let (mut report, t0) = start(ctx, Some(&p));
    let uv = match edge.or_else(|| p.file.require_edges().first().copied()) {
        Some(e) => e,
        None => {
            return Err(CliError::new(
                EXIT_PARSE,
                "census needs --edge U V or a `require:` line naming the edge",
            ))
        }
    };
    let inst = p.instance_with(&[], &p.file.forbid_edges())?;
    let c = switching_census(&inst, uv, arity, direction, ctx.node_budget)?;
    let layout = Layout::of(&inst);
    let s = report.section("census");
    s.put("edge", Value::text(edge_text(c.edge)));
    s.put("arity", Value::int(if arity == Arity::Two { 2 } else { 3 }));
    if direction != Direction::Backward {
        s.put("graphs containing uv", Value::int(c.forward.len() as i64));
        s.put("forward total", Value::int(c.forward_total() as i64));
    }
    if direction != Direction::Forward {
        s.put("graphs avoiding uv", Value::int(c.backward.len() as i64));
        s.put("backward total", Value::int(c.backward_total() as i64));
    }
    if direction == Direction::Both {
        s.put(
            "totals agree",
            Value::bool(c.forward_total() == c.backward_total()),
        );
    }
    for (title, rows) in [
        ("forward counts", &c.forward),
        ("backward counts", &c.backward),
    ] {
        if rows.is_empty() {
            continue;
        }
        let t = report.section(title);
        for (mask, count) in rows {
            let edges: Vec<String> = layout.edges_of(*mask).into_iter().map(edge_text).collect();
            t.put(edges.join(" "), Value::int(*count as i64));
        }
    }
    finish(report, t0, EXIT_OK)
}

fn put_sweep(report: &mut Report, title: &str, r: &SweepReport) {
    let s = report.section(title);
    s.put("classes", Value::int(r.classes as i64));
    s.put("instances", Value::int(r.instances as i64));
    s.put("checks", Value::int(r.checks as i64));
    s.put("violations", Value::int(r.violations as i64));
    s.put("upper applicable", Value::int(r.upper_applicable as i64));
    s.put("lower applicable", Value::int(r.lower_applicable as i64));
    s.put(
        "skipped (no edges outside conditioning)",
        Value::int(r.inapplicable as i64),
    );
    if !r.examples.is_empty() {
        s.put(
            "first violations",
            Value::List {
                items: r.examples.iter().map(Value::text).collect(),
            },
        );
    }
}

/// Sweep sizes per suite: `default` uses the acceptance sizes, `full` also tries every edge order.
pub fn verify_configs(
    suite: Suite,
    budget: u64,
) -> (SandwichConfig, SandwichConfig, ClaimConfig, ClaimConfig) {
    let all_orders = suite == Suite::Full;
    let gs = SandwichConfig {
        all_orders,
        budget,
        ..SandwichConfig::generic_default()
    };
    let bs = SandwichConfig {
        all_orders,
        budget,
        ..SandwichConfig::bipartite_default()
    };
    let gc = ClaimConfig {
        budget,
        ..ClaimConfig::generic_default()
    };
    let bc = ClaimConfig {
        budget,
        ..ClaimConfig::bipartite_default()
    };
    (gs, bs, gc, bc)
}

pub fn verify(ctx: &Context, suite: Suite, sequential: bool) -> CmdResult {
    let (mut report, t0) = start(ctx, None);
    let exec = if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let (mut gs, mut bs, mut gc, mut bc) = verify_configs(suite, ctx.node_budget);
    gs.exec = exec;
    bs.exec = exec;
    gc.exec = exec;
    bc.exec = exec;
    report.flag(
        "suite",
        if suite == Suite::Full {
            "full"
        } else {
            "default"
        },
    );
    let runs = [
        ("generic sandwich", generic_sandwich_sweep(&gs)),
        ("bipartite sandwich", bipartite_sandwich_sweep(&bs)),
        ("generic switching claims", generic_claim_sweep(&gc)),
        ("bipartite switching claims", bipartite_claim_sweep(&bc)),
    ];
    let checks: u64 = runs.iter().map(|r| r.1.checks).sum();
    let violations: u64 = runs.iter().map(|r| r.1.violations).sum();
    for (title, r) in &runs {
        put_sweep(&mut report, title, r);
    }
    report.section("summary").put(
        "result",
        Value::text(format!(
            "claims checked: {checks}, violations: {violations}"
        )),
    );
    finish(
        report,
        t0,
        if violations == 0 { EXIT_OK } else { EXIT_OTHER },
    )
}

pub fn sample(
    ctx: &Context,
    path: &Path,
    event: EventArg,
    l0: usize,
    cfg: McmcConfig,
) -> CmdResult {
    let p = load(ctx, path)?;
    let (mut report, t0) = start(ctx, Some(&p));
    let (inst, ev) = match event {
        EventArg::Contain => (
            p.instance_with(&[], &p.file.forbid_edges())?,
            McmcEvent::Contains(p.file.require_edges()),
        ),
        EventArg::Avoid => {
            let (l0e, ye) = p.split_forbid(l0)?;
            (
                p.instance_with(&p.file.require_edges(), &l0e)?,
                McmcEvent::Avoids(ye),
            )
        }
    };
    let est = mcmc_estimate(&inst, &ev, &cfg)?;
    let s = report.section("sample");
    s.put("event", Value::text(event_name(event)));
    s.put("estimate", Value::float(est.estimate));
    s.put("std error (batch means)", Value::float(est.std_error));
    s.put("95% half-width", Value::float(est.half_width));
    s.put("steps", Value::int(est.steps as i64));
    s.put("burn-in", Value::int(est.burn_in as i64));
    s.put("batches", Value::int(cfg.batches as i64));
    s.put("accepted moves", Value::int(est.accepted as i64));
    s.put("seed", Value::int(est.seed as i64));
    finish(report, t0, EXIT_OK)
}

fn put_diagnostics(report: &mut Report, title: &str, d: &DiagnosticReport) {
    let s = report.section(title);
    let name = match (d.mode, d.bipartite) {
        (DiagnosticMode::Contain, false) => "Pi",
        (DiagnosticMode::Contain, true) => "Pi'",
        (DiagnosticMode::Forbid, false) => "Phi",
        (DiagnosticMode::Forbid, true) => "Phi'",
    };
    s.put("event edges", Value::int(d.event_edges as i64));
    s.put(name, Value::rational(&d.pi_or_phi));
    s.put(
        "rho (upper)",
        Value::opt_rational(
            d.rho_upper.as_ref(),
            "no edges outside the conditioning graph",
        ),
    );
    s.put(
        "rho (lower)",
        Value::opt_rational(
            d.rho_lower.as_ref(),
            "no edges outside the conditioning graph",
        ),
    );
    s.put("C(rho upper)", Value::opt_float(d.c_upper, "rho ≥ 1"));
    s.put("C(rho lower)", Value::opt_float(d.c_lower, "rho ≥ 1"));
    for a in &d.averages {
        s.put(a.name, Value::opt_rational(a.value.as_ref(), "empty event"));
        s.put(format!("{} ceiling", a.name), Value::rational(&a.ceiling));
    }
    let lambda = if d.bipartite { "Lambda'" } else { "Lambda" };
    if d.mode == DiagnosticMode::Contain {
        s.put(
            lambda,
            Value::opt_rational(d.lambda_cap.as_ref(), "undefined"),
        );
    }
    s.put(
        "upper multiplier",
        Value::opt_float(d.upper_multiplier, "rho ≥ 1"),
    );
    s.put(
        "lower multiplier",
        Value::opt_float(d.lower_multiplier, "rho ≥ 1"),
    );
}

pub fn diagnose(ctx: &Context, path: &Path, event: EventArg, l0: usize) -> CmdResult {
    let p = load(ctx, path)?;
    let (mut report, t0) = start(ctx, Some(&p));
    let (l0e, ye) = p.split_forbid(l0)?;
    let d = match (p.mode, event) {
        (Mode::Generic, EventArg::Contain) => {
            let (d, x, l) = p.file.generic_parts()?;
            corollary_diagnostics(&d, &x, &l, DiagnosticMode::Contain)?
        }
        (Mode::Generic, EventArg::Avoid) => {
            let (d, _, _) = p.file.generic_parts()?;
            let n = d.len();
            corollary_diagnostics(
                &d,
                &generic_graph(n, &ye)?,
                &generic_graph(n, &l0e)?,
                DiagnosticMode::Forbid,
            )?
        }
        (Mode::Bipartite, EventArg::Contain) => {
            let (s, t, x, l) = p.file.bipartite_parts()?;
            corollary_diagnostics_bipartite(&s, &t, &x, &l, DiagnosticMode::Contain)?
        }
        (Mode::Bipartite, EventArg::Avoid) => {
            let (s, t, _, _) = p.file.bipartite_parts()?;
            let (a, b) = (s.len(), t.len());
            let (y, l) = (bipartite_graph(a, b, &ye)?, bipartite_graph(a, b, &l0e)?);
            corollary_diagnostics_bipartite(&s, &t, &y, &l, DiagnosticMode::Forbid)?
        }
    };
    if event == EventArg::Avoid && !p.file.require.is_empty() {
        report.flag("note", "require lines are ignored by avoidance diagnostics");
    }
    put_diagnostics(&mut report, "diagnostics", &d);
    finish(report, t0, EXIT_OK)
}

pub fn examples(ctx: &Context, family: Family, params: FamilyParams) -> CmdResult {
    let (mut report, t0) = start(ctx, None);
    let inst = build(family, params)?;
    let ev = evaluate(&inst, ctx.order)?;
    let (lower_rel, upper_rel) = ev.relative_to_leading();
    let s = report.section("example");
    s.put("family", Value::text(family.name()));
    s.put("n", Value::int(params.n as i64));
    match &inst.problem {
        ExampleProblem::GenericContain { d, x, l } => {
            s.put("vertices", Value::int(d.len() as i64));
            s.put("edges of G", Value::int((d.total() / 2) as i64));
            s.put("m(X)", Value::int(x.edge_count() as i64));
            if !l.is_empty() {
                s.put("r", Value::int(params.r as i64));
                s.put("m(L)", Value::int(l.edge_count() as i64));
            }
        }
        ExampleProblem::GenericForbid { d, y } => {
            s.put("vertices", Value::int(d.len() as i64));
            s.put("edges of G", Value::int((d.total() / 2) as i64));
            s.put("m(Y)", Value::int(y.edge_count() as i64));
        }
        ExampleProblem::BipartiteContain { s: left, t, x } => {
            s.put("hub", Value::bool(params.hub));
            s.put("|S|", Value::int(left.len() as i64));
            s.put("|T|", Value::int(t.len() as i64));
            s.put("edges of G", Value::int(left.total() as i64));
            s.put("m(X)", Value::int(x.edge_count() as i64));
        }
    }
    if !inst.adjustments.is_empty() {
        s.put(
            "adjustments",
            Value::List {
                items: inst.adjustments.iter().map(Value::text).collect(),
            },
        );
    }
    let leading = leading_name(ev.bound.theorem);
    s.put(leading, Value::rational(&ev.leading));
    s.put("lower", side_value(&ev.bound, false));
    s.put("upper", side_value(&ev.bound, true));
    s.put(
        "upper / lower",
        Value::opt_float(ev.bound_ratio(), "a side is inapplicable"),
    );
    s.put(
        format!("lower / {leading}"),
        Value::opt_float(lower_rel, "lower inapplicable"),
    );
    s.put(
        format!("upper / {leading}"),
        Value::opt_float(upper_rel, "upper inapplicable"),
    );
    s.put("target formula", Value::text(ev.target_formula));
    s.put("target", Value::text(log10_display(ev.target_log10)));
    s.put(
        format!("{leading} / target"),
        Value::float(10f64.powf(degbound::rational::log10_abs(&ev.leading) - ev.target_log10)),
    );
    s.put("applicable", Value::bool(ev.applicable));
    if family == Family::Ex3 {
        let r = report.section("refined upper (kappa stage)");
        if let Some(k) = ev.diagnostics.average("kappa") {
            r.put(
                "kappa",
                Value::opt_rational(k.value.as_ref(), "empty event"),
            );
            r.put("kappa ceiling", Value::rational(&k.ceiling));
        }
        r.put(
            "prod 1/f",
            Value::opt_float(upper_rel, "upper inapplicable"),
        );
        r.put(
            "exp(C·m(X)·D(kappa)/(m(G)-m(X)))",
            Value::opt_float(ev.diagnostics.upper_multiplier, "rho ≥ 1"),
        );
        if let Some(mult) = ev.diagnostics.upper_multiplier {
            let log = degbound::rational::log10_abs(&ev.leading) + mult.log10();
            r.put("Pi · exp(...)", Value::text(log10_display(log)));
        }
    }
    put_diagnostics(&mut report, "diagnostics", &ev.diagnostics);
    let code = if ev.applicable { EXIT_OK } else { EXIT_EXAMPLE };
    finish(report, t0, code)
}

/// Decimal display of `10^v` that survives f64 underflow.
fn log10_display(v: f64) -> String {
    if (-300.0..300.0).contains(&v) {
        let x = 10f64.powf(v);
        return to_display_f64(x);
    }
    let e = v.floor();
    format!("{:.6}e{}", 10f64.powf(v - e), e as i64)
}

fn to_display_f64(x: f64) -> String {
    match degbound::Rational::from_float(x) {
        Some(r) => to_display(&r, DECIMAL_DIGITS),
        None => x.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log10_display_handles_underflow() {
        assert_eq!(log10_display(-2.0), "0.01");
        assert!(log10_display(-4917.0118).starts_with("9.73"));
        assert!(log10_display(-4917.0118).ends_with("e-4918"));
    }

    #[test]
    fn error_codes() {
        assert_eq!(
            CliError::from(OracleError::ResourceLimit(5)).code,
            EXIT_RESOURCE
        );
        assert_eq!(
            CliError::from(OracleError::RealizationFailure).code,
            EXIT_OTHER
        );
        assert_eq!(
            CliError::from(BoundError::DivisionByZero).code,
            EXIT_INAPPLICABLE
        );
        assert_eq!(
            CliError::from(FamilyError::TooLarge { n: 1, cap: 0 }).code,
            EXIT_RESOURCE
        );
        assert_eq!(
            CliError::from(ParseError {
                line: 3,
                message: "x".into()
            })
            .code,
            EXIT_PARSE
        );
    }
}
