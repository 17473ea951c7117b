//! Command implementations for the `ckrg` binary.
//!
//! Every command returns its rendered output together with an exit code so
//! the logic can be driven from tests without spawning a process.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ckrg_core::birkhoff::{
    decompose, locality_check, pure_pole_check, reconstruct_check, regularity_check, BirkhoffPair,
};
use ckrg_core::exact_coeffs::{DiffVar, EpsLaurent, EpsLaurentJson, ExpLegend};
use ckrg_core::forest_hopf::{check_axioms, check_tree_counts, HopfAlgebra};
use ckrg_core::hierarchy::{
    dress_and_decompose, flow_commutativity, hierarchy_residual, reduction_check, TimeVector,
};
use ckrg_core::report::FlowReport;
use ckrg_core::rg_flows::{
    baker_function, beta_function, beta_report, check_rg_equations, compute_m, epsilon_ode_check,
    evolve_unit_mass, m_pole_bound, recover_limits, scattering, scattering_profile, BetaElement,
};
use ckrg_core::toy_model::{build_character, covariance_check, parse_rule_config, ToyRule};
use ckrg_core::Error;
use serde::Serialize;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Hopf,
    Birkhoff,
    Rg,
    Scattering,
    Recovery,
    Ode,
    Hierarchy,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Hopf,
        Suite::Birkhoff,
        Suite::Rg,
        Suite::Scattering,
        Suite::Recovery,
        Suite::Ode,
        Suite::Hierarchy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hopf => "hopf",
            Suite::Birkhoff => "birkhoff",
            Suite::Rg => "rg",
            Suite::Scattering => "scattering",
            Suite::Recovery => "recovery",
            Suite::Ode => "ode",
            Suite::Hierarchy => "hierarchy",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Parses `NAME[,NAME…]`. `all` selects every suite and an empty string
/// selects none. The result is sorted and free of duplicates.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            out.extend(Suite::ALL);
        } else {
            out.push(part.parse()?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleSource {
    Ladder,
    File(PathBuf),
}

impl FromStr for RuleSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "ladder" => RuleSource::Ladder,
            path => RuleSource::File(PathBuf::from(path)),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "pretty" => Ok(OutputFormat::Pretty),
            other => Err(format!("unknown output format `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub max_degree: usize,
    pub eps_trunc: i32,
    pub rule: RuleSource,
    pub hierarchy_depth: usize,
    pub suites: Vec<Suite>,
    pub output: OutputFormat,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            max_degree: 4,
            eps_trunc: 8,
            rule: RuleSource::Ladder,
            hierarchy_depth: 3,
            suites: Suite::ALL.to_vec(),
            output: OutputFormat::Json,
            out_dir: PathBuf::from("."),
        }
    }
}

impl RunConfig {
    /// Checks the pole-capacity invariant `eps_trunc ≥ max_degree`.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.eps_trunc < self.max_degree as i32 {
            return Err(CliError::Usage(format!(
                "--eps-trunc {} is below --max-degree {}",
                self.eps_trunc, self.max_degree
            )));
        }
        if self.hierarchy_depth == 0 {
            return Err(CliError::Usage(
                "--hierarchy-depth must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn require_degree(&self) -> Result<(), CliError> {
        if self.max_degree == 0 {
            return Err(CliError::Usage("--max-degree must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or an unusable configuration (exit 2).
    Usage(String),
    /// A computation that could not be carried out (exit 1).
    Compute(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Compute(_) | CliError::Io(_) => EXIT_FAIL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Compute(e) => write!(f, "error: {e}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::DuplicateTree(_)
            | Error::InvalidTree(_)
            | Error::RuleIncomplete(_)
            | Error::InvalidDepth => CliError::Usage(e.to_string()),
            other => CliError::Compute(other),
        }
    }
}

/// Rendered command output plus the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

pub fn load_rule(source: &RuleSource) -> Result<ToyRule, CliError> {
    match source {
        RuleSource::Ladder => Ok(ToyRule::ladder()),
        RuleSource::File(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let name = path
                .file_stem()
                .map_or_else(|| "rule".to_string(), |s| s.to_string_lossy().into_owned());
            Ok(parse_rule_config(&name, &text)?)
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn csv_string(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

// ---- trees ----

pub fn cmd_trees(cfg: &RunConfig) -> Outcome {
    let hopf = HopfAlgebra::new(cfg.max_degree);
    let degrees: Vec<usize> = (1..=cfg.max_degree).collect();
    let stdout = match cfg.output {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Degree {
                degree: usize,
                count: usize,
                trees: Vec<String>,
            }
            let out: Vec<Degree> = degrees
                .iter()
                .map(|&n| Degree {
                    degree: n,
                    count: hopf.trees(n).len(),
                    trees: hopf
                        .trees(n)
                        .iter()
                        .map(|t| t.encoding().to_string())
                        .collect(),
                })
                .collect();
            to_json(&out)
        }
        OutputFormat::Csv => {
            let mut rows = vec![vec!["degree".to_string(), "tree".to_string()]];
            for &n in &degrees {
                for t in hopf.trees(n) {
                    rows.push(vec![n.to_string(), t.encoding().to_string()]);
                }
            }
            csv_string(rows)
        }
        OutputFormat::Pretty => {
            let mut s = String::new();
            for &n in &degrees {
                for t in hopf.trees(n) {
                    writeln!(s, "{}", t.encoding()).unwrap();
                }
            }
            for &n in &degrees {
                writeln!(s, "{n}: {}", hopf.trees(n).len()).unwrap();
            }
            s
        }
    };
    Outcome {
        stdout,
        code: EXIT_PASS,
    }
}

// ---- decompose ----

fn unit_legend_pair(
    hopf: &HopfAlgebra,
    cfg: &RunConfig,
    rule: &ToyRule,
) -> Result<BirkhoffPair, CliError> {
    let phi = build_character(hopf, rule, cfg.max_degree)?;
    Ok(decompose(
        hopf,
        &phi,
        &ExpLegend::unit_mass(),
        cfg.eps_trunc,
    )?)
}

#[derive(Serialize)]
struct DecomposeRow {
    tree: String,
    phi: EpsLaurentJson,
    phi_minus: EpsLaurentJson,
    phi_plus: EpsLaurentJson,
    phi_plus_expanded: EpsLaurentJson,
}

pub fn cmd_decompose(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let rule = load_rule(&cfg.rule)?;
    let hopf = HopfAlgebra::new(cfg.max_degree);
    let pair = unit_legend_pair(&hopf, cfg, &rule)?;
    let one = EpsLaurent::one();
    let mut rows = vec![("1".to_string(), one.clone(), one.clone(), one.clone(), one)];
    for t in hopf.trees_up_to(cfg.max_degree) {
        rows.push((
            t.encoding().to_string(),
            pair.source.tree_value(&t),
            pair.phi_minus.tree_value(&t),
            pair.phi_plus.tree_value(&t),
            pair.phi_plus_expanded.tree_value(&t),
        ));
    }
    let stdout = match cfg.output {
        OutputFormat::Json => {
            let rows: Vec<DecomposeRow> = rows
                .iter()
                .map(|(t, a, b, c, d)| DecomposeRow {
                    tree: t.clone(),
                    phi: a.into(),
                    phi_minus: b.into(),
                    phi_plus: c.into(),
                    phi_plus_expanded: d.into(),
                })
                .collect();
            to_json(&serde_json::json!({
                "rule": rule.name,
                "max_degree": cfg.max_degree,
                "eps_trunc": cfg.eps_trunc,
                "rows": rows,
            }))
        }
        OutputFormat::Csv | OutputFormat::Pretty => {
            let mut out = vec![
                ["tree", "phi", "phi_minus", "phi_plus", "phi_plus_expanded"]
                    .map(String::from)
                    .to_vec(),
            ];
            for (t, a, b, c, d) in rows {
                out.push(vec![
                    t,
                    a.to_string(),
                    b.to_string(),
                    c.to_string(),
                    d.to_string(),
                ]);
            }
            if cfg.output == OutputFormat::Csv {
                csv_string(out)
            } else {
                pretty_table(&out)
            }
        }
    };
    Ok(Outcome {
        stdout,
        code: EXIT_PASS,
    })
}

fn pretty_table(rows: &[Vec<String>]) -> String {
    let mut s = String::new();
    let header = &rows[0];
    for r in &rows[1..] {
        writeln!(s, "{}", r[0]).unwrap();
        for (h, v) in header.iter().zip(r).skip(1) {
            writeln!(s, "  {h:<18} {v}").unwrap();
        }
    }
    s
}

// ---- beta ----

pub fn cmd_beta(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    cfg.require_degree()?;
    let rule = load_rule(&cfg.rule)?;
    let hopf = HopfAlgebra::new(cfg.max_degree);
    let pair = unit_legend_pair(&hopf, cfg, &rule)?;
    let beta = beta_function(&hopf, &pair)?;
    let finite = beta.pole_free() && beta.eps_free();
    let stdout = match cfg.output {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Row {
                tree: String,
                beta: EpsLaurentJson,
                pole_free: bool,
                eps_free: bool,
            }
            let rows: Vec<Row> = beta
                .diagnostics
                .iter()
                .map(|d| Row {
                    tree: d.tree.clone(),
                    beta: (&beta_at(&beta, &d.tree)).into(),
                    pole_free: d.pole_free,
                    eps_free: d.eps_free,
                })
                .collect();
            to_json(&serde_json::json!({
                "rule": rule.name,
                "infinitesimal": beta.infinitesimal,
                "pole_free": beta.pole_free(),
                "eps_free": beta.eps_free(),
                "rows": rows,
            }))
        }
        OutputFormat::Csv | OutputFormat::Pretty => {
            let mut rows = vec![["tree", "beta", "pole_free", "eps_free"]
                .map(String::from)
                .to_vec()];
            for d in &beta.diagnostics {
                rows.push(vec![
                    d.tree.clone(),
                    beta_at(&beta, &d.tree).to_string(),
                    d.pole_free.to_string(),
                    d.eps_free.to_string(),
                ]);
            }
            if cfg.output == OutputFormat::Csv {
                csv_string(rows)
            } else {
                let mut s = String::new();
                for r in &rows[1..] {
                    writeln!(s, "{:<16} {}", r[0], r[1]).unwrap();
                }
                writeln!(s, "infinitesimal: {}", beta.infinitesimal).unwrap();
                s
            }
        }
    };
    Ok(Outcome {
        stdout,
        code: if finite { EXIT_PASS } else { EXIT_FAIL },
    })
}

fn beta_at(beta: &BetaElement, tree: &str) -> EpsLaurent {
    let t = ckrg_core::forest_hopf::RootedTree::parse(tree).expect("canonical encoding");
    beta.values.tree_value(&t)
}

// ---- verify ----

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub suite: Suite,
    pub pass: bool,
    pub reports: Vec<FlowReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub rule: String,
    pub max_degree: usize,
    pub eps_trunc: i32,
    pub hierarchy_depth: usize,
    pub pass: bool,
    pub suites: Vec<SuiteResult>,
}

/// Lazily shared inputs: the unit-mass decomposition and its β.
struct Shared<'a> {
    hopf: &'a HopfAlgebra,
    cfg: &'a RunConfig,
    rule: &'a ToyRule,
    pair: Option<Result<(BirkhoffPair, BetaElement), Error>>,
}

impl Shared<'_> {
    fn pair(&mut self) -> Result<&(BirkhoffPair, BetaElement), Error> {
        if self.pair.is_none() {
            let computed = (|| {
                let phi = build_character(self.hopf, self.rule, self.cfg.max_degree)?;
                let pair = decompose(self.hopf, &phi, &ExpLegend::unit_mass(), self.cfg.eps_trunc)?;
                let beta = beta_function(self.hopf, &pair)?;
                Ok((pair, beta))
            })();
            self.pair = Some(computed);
        }
        self.pair.as_ref().unwrap().as_ref().map_err(Clone::clone)
    }
}

fn guard(name: &str, r: Result<Vec<FlowReport>, Error>) -> Vec<FlowReport> {
    r.unwrap_or_else(|e| vec![FlowReport::error(name, e.to_string())])
}

fn run_suite(shared: &mut Shared<'_>, suite: Suite) -> Vec<FlowReport> {
    let hopf = shared.hopf;
    let cfg = shared.cfg;
    let n = cfg.max_degree;
    if suite == Suite::Hopf {
        let mut out = guard("hopf axioms", check_axioms(hopf, n));
        out.push(check_tree_counts(n));
        return out;
    }
    let (pair, beta) = match shared.pair() {
        Ok(p) => p,
        Err(e) => return vec![FlowReport::error("decomposition", e.to_string())],
    };
    match suite {
        Suite::Hopf => unreachable!(),
        Suite::Birkhoff => {
            let mut out = vec![
                covariance_check(hopf, &pair.source),
                locality_check(hopf, pair, DiffVar::T),
                pure_pole_check(hopf, pair),
                regularity_check(hopf, pair),
            ];
            out.extend(guard("reconstruct", reconstruct_check(hopf, pair)));
            out
        }
        Suite::Rg => {
            let mut out = beta_report(hopf, beta);
            out.extend(guard("rg equations", check_rg_equations(hopf, pair, beta)));
            out.extend(guard(
                "unit-mass evolution",
                evolve_unit_mass(hopf, pair, beta, n),
            ));
            out
        }
        Suite::Scattering => guard("scattering", scattering(hopf, pair, beta)),
        Suite::Recovery => guard("recovery", recover_limits(hopf, pair, beta, n)),
        Suite::Ode => guard(
            "eps equation",
            (|| {
                let m = compute_m(hopf, pair, beta)?;
                let mut out = vec![m_pole_bound(hopf, &m)];
                out.extend(epsilon_ode_check(hopf, pair, beta, &m, n)?);
                out.extend(baker_function(hopf, pair, beta, &m, n)?);
                Ok(out)
            })(),
        ),
        Suite::Hierarchy => guard(
            "hierarchy",
            (|| {
                let tv = TimeVector::new(cfg.hierarchy_depth)?;
                let bare = pair
                    .source
                    .map_hom(|v| v.at_zero_flow(&ExpLegend::unit_mass()));
                let run = dress_and_decompose(hopf, &bare, &tv, cfg.eps_trunc)?;
                let mut out = hierarchy_residual(hopf, &run)?;
                out.extend(flow_commutativity(hopf, &run)?);
                out.extend(reduction_check(hopf, &run, pair, beta)?);
                Ok(out)
            })(),
        ),
    }
}

pub fn verify(cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    cfg.validate()?;
    cfg.require_degree()?;
    let rule = load_rule(&cfg.rule)?;
    let hopf = HopfAlgebra::new(cfg.max_degree);
    if !cfg.suites.is_empty() && cfg.suites != [Suite::Hopf] {
        // Surface rule gaps as configuration errors before any suite runs.
        build_character(&hopf, &rule, cfg.max_degree)?;
    }
    let mut shared = Shared {
        hopf: &hopf,
        cfg,
        rule: &rule,
        pair: None,
    };
    let suites: Vec<SuiteResult> = cfg
        .suites
        .iter()
        .map(|&s| {
            let reports = run_suite(&mut shared, s);
            SuiteResult {
                suite: s,
                pass: reports.iter().all(|r| r.pass),
                reports,
            }
        })
        .collect();
    Ok(VerifyReport {
        rule: rule.name.clone(),
        max_degree: cfg.max_degree,
        eps_trunc: cfg.eps_trunc,
        hierarchy_depth: cfg.hierarchy_depth,
        pass: suites.iter().all(|s| s.pass),
        suites,
    })
}

pub fn render_verify(report: &VerifyReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => {
            let mut rows = vec![[
                "suite", "identity", "pass", "checked", "key", "n", "residual", "note",
            ]
            .map(String::from)
            .to_vec()];
            for s in &report.suites {
                for r in &s.reports {
                    let head = vec![
                        s.suite.name().to_string(),
                        r.identity.clone(),
                        r.pass.to_string(),
                        r.checked.to_string(),
                    ];
                    if r.witnesses.is_empty() {
                        let mut row = head.clone();
                        row.extend(["", "", "", ""].map(String::from));
                        rows.push(row);
                    }
                    for w in &r.witnesses {
                        let mut row = head.clone();
                        row.push(w.tree.clone());
                        row.push(w.n.map(|n| n.to_string()).unwrap_or_default());
                        row.push(w.residual.to_string());
                        row.push(w.note.clone().unwrap_or_default());
                        rows.push(row);
                    }
                }
            }
            csv_string(rows)
        }
        OutputFormat::Pretty => {
            let mut s = String::new();
            for suite in &report.suites {
                let tag = if suite.pass { "PASS" } else { "FAIL" };
                writeln!(s, "[{tag}] {}", suite.suite.name()).unwrap();
                for r in &suite.reports {
                    let tag = if r.pass { "ok  " } else { "FAIL" };
                    writeln!(s, "  {tag} {} ({} checked)", r.identity, r.checked).unwrap();
                    for w in r.witnesses.iter().take(5) {
                        let n = w.n.map(|n| format!(" n={n}")).unwrap_or_default();
                        let note = w
                            .note
                            .as_deref()
                            .map(|m| format!(" [{m}]"))
                            .unwrap_or_default();
                        writeln!(s, "       {}{n}: {}{note}", w.tree, w.residual).unwrap();
                    }
                }
            }
            let tag = if report.pass { "PASS" } else { "FAIL" };
            writeln!(s, "{tag}").unwrap();
            s
        }
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let report = verify(cfg)?;
    Ok(Outcome {
        stdout: render_verify(&report, cfg.output),
        code: if report.pass { EXIT_PASS } else { EXIT_FAIL },
    })
}

// ---- report ----

fn write_csv(dir: &Path, name: &str, rows: Vec<Vec<String>>) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, csv_string(rows))
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Writes `beta.csv` (suite `rg`), `m_table.csv` (suite `ode`) and
/// `scattering_q.csv` (suite `scattering`) for the selected suites.
pub fn cmd_report(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let wanted = |s| cfg.suites.contains(&s);
    if !(wanted(Suite::Rg) || wanted(Suite::Ode) || wanted(Suite::Scattering)) {
        return Ok(Outcome {
            stdout: String::new(),
            code: EXIT_PASS,
        });
    }
    cfg.require_degree()?;
    let rule = load_rule(&cfg.rule)?;
    let hopf = HopfAlgebra::new(cfg.max_degree);
    let pair = unit_legend_pair(&hopf, cfg, &rule)?;
    let beta = beta_function(&hopf, &pair)?;
    fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", cfg.out_dir.display())))?;
    let trees = hopf.trees_up_to(cfg.max_degree);
    let mut written = Vec::new();

    if wanted(Suite::Rg) {
        let mut rows = vec![["tree", "degree", "beta"].map(String::from).to_vec()];
        for t in &trees {
            rows.push(vec![
                t.encoding().to_string(),
                t.degree().to_string(),
                beta.values.tree_value(t).to_string(),
            ]);
        }
        written.push(write_csv(&cfg.out_dir, "beta.csv", rows)?);
    }
    if wanted(Suite::Ode) {
        let m = compute_m(&hopf, &pair, &beta)?;
        let mut rows = vec![["tree", "degree", "m"].map(String::from).to_vec()];
        for t in &trees {
            rows.push(vec![
                t.encoding().to_string(),
                t.degree().to_string(),
                m.tree_value(t).to_string(),
            ]);
        }
        written.push(write_csv(&cfg.out_dir, "m_table.csv", rows)?);
    }
    if wanted(Suite::Scattering) {
        let profile = scattering_profile(&hopf, &pair)?;
        let mut rows = vec![["tree", "degree", "q_power", "coefficient"]
            .map(String::from)
            .to_vec()];
        for t in &trees {
            let by_q = profile
                .tree_value(t)
                .split_by(ckrg_core::exact_coeffs::Var::Q);
            for (k, v) in by_q {
                rows.push(vec![
                    t.encoding().to_string(),
                    t.degree().to_string(),
                    k.to_string(),
                    v.to_string(),
                ]);
            }
        }
        written.push(write_csv(&cfg.out_dir, "scattering_q.csv", rows)?);
    }
    let mut stdout = String::new();
    for p in written {
        writeln!(stdout, "{}", p.display()).unwrap();
    }
    Ok(Outcome {
        stdout,
        code: EXIT_PASS,
    })
}

/// Caps the global rayon pool from `CKRG_THREADS`, if set.
pub fn configure_threads(value: Option<&str>) -> Result<(), CliError> {
    let Some(v) = value else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "CKRG_THREADS must be a positive integer, got `{v}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}
