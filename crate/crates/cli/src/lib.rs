//! Command-line plumbing: one input file, one subcommand, one report.
//!
//! Every run loads the graph of groups, builds the construction plan and the
//! layered normal-form group, then executes the subcommand. The report is
//! deterministic for a fixed configuration; wall-clock timings are returned
//! separately so callers can keep them off stdout.

use std::fmt;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use vfree_core::{
    ConstructedGroup, ConstructionPlan, DehnEngine, DehnError, GraphError, GraphOfGroups, Oracle,
    OracleError, Verification, Word,
};

/// Random words checked by `verify` after exhaustive verification succeeds.
pub const CROSS_CHECK_SAMPLES: usize = 1000;
pub const CROSS_CHECK_MAX_LEN: usize = 30;
pub const DEFAULT_RADIUS: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Build,
    Ball { radius: usize },
    Verify,
    MinimalK,
    Rules,
    Reduce { word: String },
    Wp { word: String },
    Len { word: String },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Build => "build",
            Command::Ball { .. } => "ball",
            Command::Verify => "verify",
            Command::MinimalK => "minimal-k",
            Command::Rules => "rules",
            Command::Reduce { .. } => "reduce",
            Command::Wp { .. } => "wp",
            Command::Len { .. } => "len",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: PathBuf,
    pub command: Command,
    /// Overrides the plan's guaranteed `k′`.
    pub k: Option<usize>,
    /// Defaults to `max(8, 2k)`.
    pub max_len: Option<usize>,
    pub budget: usize,
    pub seed: u64,
    pub emit: Option<PathBuf>,
    pub paranoid: bool,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, command: Command) -> Self {
        RunConfig {
            input: input.into(),
            command,
            k: None,
            max_len: None,
            budget: vfree_core::oracle::DEFAULT_BUDGET,
            seed: 0,
            emit: None,
            paranoid: false,
        }
    }

    pub fn check(&self) -> Result<(), String> {
        if self.max_len == Some(0) {
            return Err("--max-len must be at least 1".into());
        }
        if self.budget == 0 {
            return Err("--budget must be at least 1".into());
        }
        if matches!(self.k, Some(k) if k < 2) {
            return Err("--k must be at least 2".into());
        }
        Ok(())
    }
}

/// Process exit status; the discriminant is the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    NotIdentity = 1,
    Usage = 2,
    Invalid = 3,
    Budget = 4,
    Refuted = 5,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub status: Status,
    pub lines: Vec<String>,
    pub summary: Map<String, Value>,
    pub timings: Vec<(&'static str, Duration)>,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Report {
            command,
            status: Status::Ok,
            lines: Vec::new(),
            summary: Map::new(),
            timings: Vec::new(),
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }

    fn fail(mut self, status: Status, message: impl fmt::Display) -> Self {
        self.status = status;
        self.line(format!("error: {message}"));
        self
    }

    fn time<T>(&mut self, phase: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push((phase, start.elapsed()));
        out
    }
}

/// Human-readable lines followed by one `summary` line of JSON. Keys are
/// sorted, and timings are not included.
pub fn emit_report(report: &Report) -> String {
    let mut out = String::new();
    for l in &report.lines {
        out.push_str(l);
        out.push('\n');
    }
    let mut summary = report.summary.clone();
    summary.insert("command".into(), report.command.into());
    summary.insert("exit".into(), report.status.code().into());
    out.push_str("summary ");
    out.push_str(&Value::Object(summary).to_string());
    out.push('\n');
    out
}

/// One `timing <phase> <ms>` line per phase.
pub fn emit_timings(report: &Report) -> String {
    report
        .timings
        .iter()
        .map(|(phase, d)| format!("timing {phase} {:.3}ms\n", d.as_secs_f64() * 1e3))
        .collect()
}

fn graph_status(e: &GraphError) -> Status {
    match e {
        GraphError::Parse(_) => Status::Usage,
        _ => Status::Invalid,
    }
}

fn oracle_status(e: &OracleError) -> Status {
    match e {
        OracleError::BudgetExceeded { .. } => Status::Budget,
        OracleError::BadLocality => Status::Usage,
    }
}

fn dehn_status(e: &DehnError) -> Status {
    match e {
        DehnError::Oracle(o) => oracle_status(o),
        DehnError::BadLocality(_) => Status::Usage,
        _ => Status::Refuted,
    }
}

pub fn run(config: &RunConfig) -> Report {
    let mut report = Report::new(config.command.name());
    if let Err(m) = config.check() {
        return report.fail(Status::Usage, m);
    }
    let loaded = report.time("load", || GraphOfGroups::from_path(&config.input));
    let graph = match loaded {
        Ok(g) => g,
        Err(e) => return report.fail(graph_status(&e), e),
    };
    let plan = match report.time("plan", || graph.plan()) {
        Ok(p) => p,
        Err(e) => return report.fail(graph_status(&e), e),
    };
    let group = report.time("normal forms", || ConstructedGroup::new(&graph, &plan));
    let (letters, k_plan) = plan.star_size();
    report.line(format!("plan: |X'| = {letters}, guaranteed k' = {k_plan}"));
    report.set("letters", letters);
    report.set("guaranteed_k", k_plan);

    let mut session = Session {
        config,
        plan: &plan,
        group: &group,
        report,
    };
    match session.dispatch() {
        Ok(()) => session.report,
        Err((status, message)) => session.report.fail(status, message),
    }
}

struct Session<'a> {
    config: &'a RunConfig,
    plan: &'a ConstructionPlan,
    group: &'a ConstructedGroup,
    report: Report,
}

type Outcome = Result<(), (Status, String)>;

impl<'a> Session<'a> {
    fn k(&self) -> usize {
        self.config.k.unwrap_or(self.plan.final_k())
    }

    fn max_len(&self, k: usize) -> usize {
        self.config.max_len.unwrap_or(8.max(2 * k))
    }

    fn oracle(&self) -> Oracle<'a, ConstructedGroup> {
        Oracle::with_budget(self.group, self.group.generators(), self.config.budget)
    }

    fn parse(&self, text: &str) -> Result<Word, (Status, String)> {
        self.plan
            .alphabet
            .parse(text)
            .map_err(|e| (Status::Usage, e.to_string()))
    }

    fn show(&self, w: &Word) -> String {
        self.plan.alphabet.display(w).to_string()
    }

    /// The plan-guaranteed engine, or a verified one when `--k` is given.
    fn engine(&mut self, oracle: &mut Oracle<'_, ConstructedGroup>) -> Result<DehnEngine, (Status, String)> {
        let engine = match self.config.k {
            None => self.report.time("rules", || DehnEngine::for_plan(self.plan, oracle)),
            Some(k) => {
                let max_len = self.max_len(k);
                self.report.time("rules", || DehnEngine::verified(oracle, k, max_len))
            }
        };
        let engine = engine.map_err(|e| (dehn_status(&e), e.to_string()))?;
        let guarantee = match engine.guarantee() {
            vfree_core::Guarantee::ConstructionPlan => "construction plan".to_string(),
            vfree_core::Guarantee::Verified { max_len } => format!("verified to length {max_len}"),
        };
        self.report.line(format!(
            "engine: k = {}, {} rules, guarantee: {guarantee}",
            engine.k(),
            engine.rules().len()
        ));
        self.report.set("k", engine.k());
        self.report.set("rules", engine.rules().len());
        Ok(engine.paranoid(self.config.paranoid))
    }

    fn dispatch(&mut self) -> Outcome {
        match &self.config.command {
            Command::Build => self.build(),
            Command::Ball { radius } => self.ball(*radius),
            Command::Verify => self.verify(),
            Command::MinimalK => self.minimal_k(),
            Command::Rules => self.rules(),
            Command::Reduce { word } => self.reduce(word),
            Command::Wp { word } => self.wp(word),
            Command::Len { word } => self.len(word),
        }
    }

    fn build(&mut self) -> Outcome {
        let plan = self.plan.to_string();
        for l in plan.lines() {
            self.report.line(l);
        }
        self.report
            .line(format!("X' = {{{}}}", self.plan.alphabet.names().join(", ")));
        self.report.set("steps", self.plan.post_base_steps());
        let ks: Vec<usize> = self.plan.steps.iter().map(|s| s.k_after).collect();
        self.report.set("k_sequence", json!(ks));
        Ok(())
    }

    fn ball(&mut self, radius: usize) -> Outcome {
        let mut oracle = self.oracle();
        let grown = self.report.time("ball", || oracle.grow_ball(radius).map(|b| b.growth()));
        let growth = grown.map_err(|e| (oracle_status(&e), e.to_string()))?;
        let text: Vec<String> = growth.iter().map(usize::to_string).collect();
        self.report.line(format!("radius: {radius}"));
        self.report.line(format!("growth: {}", text.join(" ")));
        self.report.line(format!("elements: {}", oracle.ball().len()));
        self.report.set("radius", radius);
        self.report.set("growth", json!(growth));
        self.report.set("elements", oracle.ball().len());
        Ok(())
    }

    fn verify(&mut self) -> Outcome {
        let k = self.k();
        let max_len = self.max_len(k);
        let mut oracle = self.oracle();
        let result = self.report.time("verify", || oracle.verify(k, max_len));
        let result = result.map_err(|e| (oracle_status(&e), e.to_string()))?;
        self.report.line(format!("verify: k = {k}, max length {max_len}"));
        self.report.set("k", k);
        self.report.set("max_len", max_len);
        match result {
            Verification::Counterexample(w) => {
                let shown = self.show(&w);
                self.report.line(format!("counterexample: {shown}"));
                self.report.set("counterexample", shown.clone());
                Err((Status::Refuted, format!("`{shown}` avoids F({k}) but is not geodesic")))
            }
            Verification::Ok { words_checked } => {
                self.report.line(format!("ok: {words_checked} words avoiding F checked"));
                self.report.set("words_checked", words_checked);
                self.cross_check(&mut oracle)
            }
        }
    }

    /// Seeded random comparison of the stack word problem with normal-form
    /// identity testing.
    fn cross_check(&mut self, oracle: &mut Oracle<'_, ConstructedGroup>) -> Outcome {
        let engine = self.engine(oracle)?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        let al = &self.plan.alphabet;
        let group = self.group;
        let run = || -> Result<usize, DehnError> {
            let mut disagreements = 0;
            for _ in 0..CROSS_CHECK_SAMPLES {
                let len = rng.gen_range(0..=CROSS_CHECK_MAX_LEN);
                let w = al.random_word(&mut rng, len);
                let out = engine.word_problem(&w)?;
                let e = group.generators().evaluate(group, &w);
                let same = out.is_identity == e.is_identity()
                    && group.generators().evaluate(group, &out.representative) == e;
                disagreements += usize::from(!same);
            }
            Ok(disagreements)
        };
        let disagreements = self
            .report
            .time("cross-check", run)
            .map_err(|e| (dehn_status(&e), e.to_string()))?;
        self.report.line(format!(
            "cross-check (seed {}): {CROSS_CHECK_SAMPLES} random words, {disagreements} disagreements",
            self.config.seed
        ));
        self.report.set("seed", self.config.seed);
        self.report.set("cross_check_words", CROSS_CHECK_SAMPLES);
        self.report.set("cross_check_disagreements", disagreements);
        if disagreements > 0 {
            return Err((Status::Refuted, "word problem disagrees with normal forms".into()));
        }
        Ok(())
    }

    fn minimal_k(&mut self) -> Outcome {
        let max_len = self.max_len(self.plan.final_k());
        let mut oracle = self.oracle();
        let found = self.report.time("minimal-k", || oracle.minimal_k(max_len));
        let found = found.map_err(|e| (oracle_status(&e), e.to_string()))?;
        self.report.set("max_len", max_len);
        match found {
            Some(k) => {
                self.report.line(format!("empirical k: {k} (verified to length {max_len})"));
                self.report
                    .line(format!("guaranteed k': {}", self.plan.final_k()));
                self.report.set("empirical_k", k);
                Ok(())
            }
            None => {
                self.report.set("empirical_k", Value::Null);
                Err((Status::Refuted, format!("no k up to {max_len} verifies")))
            }
        }
    }

    fn rules(&mut self) -> Outcome {
        let mut oracle = self.oracle();
        let engine = self.engine(&mut oracle)?;
        let text = engine.rules().to_lines(&self.plan.alphabet);
        for l in text.lines() {
            self.report.line(l.to_string());
        }
        if let Some(path) = &self.config.emit {
            std::fs::write(path, &text).map_err(|e| (Status::Usage, format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }

    fn reduce(&mut self, word: &str) -> Outcome {
        let w = self.parse(word)?;
        let mut oracle = self.oracle();
        let engine = self.engine(&mut oracle)?;
        let v = self.report.time("reduce", || engine.rewrite_to_geodesic(&w));
        self.report.line(format!("geodesic: {}", self.show(&v)));
        self.report.line(format!("length: {}", v.len()));
        self.report.set("geodesic", self.show(&v));
        self.report.set("length", v.len());
        Ok(())
    }

    fn wp(&mut self, word: &str) -> Outcome {
        let w = self.parse(word)?;
        let mut oracle = self.oracle();
        let engine = self.engine(&mut oracle)?;
        let out = self
            .report
            .time("word problem", || engine.word_problem(&w))
            .map_err(|e| (dehn_status(&e), e.to_string()))?;
        let yes = if out.is_identity { "yes" } else { "no" };
        self.report.line(format!("identity: {yes}"));
        self.report.line(format!("stack: {}", self.show(&out.representative)));
        self.report.line(format!("length: {}", out.length()));
        self.report.set("identity", out.is_identity);
        self.report.set("stack", self.show(&out.representative));
        self.report.set("length", out.length());
        if !out.is_identity {
            self.report.status = Status::NotIdentity;
        }
        Ok(())
    }

    fn len(&mut self, word: &str) -> Outcome {
        let w = self.parse(word)?;
        let mut oracle = self.oracle();
        let engine = self.engine(&mut oracle)?;
        let out = self
            .report
            .time("word problem", || engine.word_problem(&w))
            .map_err(|e| (dehn_status(&e), e.to_string()))?;
        self.report.line(format!("length: {}", out.length()));
        self.report.line(format!("geodesic: {}", self.show(&out.representative)));
        self.report.set("length", out.length());
        Ok(())
    }
}
