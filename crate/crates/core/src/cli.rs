//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::element::{reduce, Element};
use crate::enumerate::{cardinality_table, enumerate, ElementList, DEFAULT_ELEMENT_CAP};
use crate::error::{Error, Result};
use crate::level::{
    annihilation_depth, ball, distance, level_by_definition, level_by_recursion, r_set, sphere,
};
use crate::morphism::delete;
use crate::selftest;
use crate::stochastic::simulate::DEFAULT_STEP_BUDGET;
use crate::stochastic::{
    exact_hitting_pmf, simulate, transition_matrix, verify_distribution, Mode, ProbabilityVector,
    SimulationConfig, SimulationReport, VerifyConfig,
};
use crate::word::{IndexSet, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "kiselman",
    version,
    about = "Exact computation and simulation in Kiselman's semigroup K_n"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelMethod {
    /// Least deletion depth leaving e_{[n]∖[i]}.
    Definition,
    /// Fold of the one-step update over the given word.
    Recursion,
    /// Least i with x e_[i] = f.
    M,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    LevelOnly,
    Full,
    Sampled,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::LevelOnly => Mode::LevelOnly,
            ModeArg::Full => Mode::Full,
            ModeArg::Sampled => Mode::Sampled,
        }
    }
}

#[derive(Debug, Args)]
pub struct Rank {
    /// Rank n >= 2.
    #[arg(long = "n")]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct Budget {
    /// Maximum number of elements to enumerate.
    #[arg(long, env = "KISELMAN_BUDGET", default_value_t = DEFAULT_ELEMENT_CAP,
          value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct Thresholds {
    /// Largest accepted total-variation distance.
    #[arg(long, default_value_t = VerifyConfig::default().tv_bound)]
    pub tv_bound: f64,
    /// Smallest accepted chi-square p-value.
    #[arg(long, default_value_t = VerifyConfig::default().p_value_floor)]
    pub p_floor: f64,
}

impl Thresholds {
    fn config(&self) -> VerifyConfig {
        VerifyConfig {
            tv_bound: self.tv_bound,
            p_value_floor: self.p_floor,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical word of a word.
    Reduce {
        #[command(flatten)]
        rank: Rank,
        #[arg(long)]
        word: String,
    },
    /// Product of two elements.
    Mul {
        #[command(flatten)]
        rank: Rank,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Image under the antiautomorphism a_i -> a_{n-i+1}.
    Tau {
        #[command(flatten)]
        rank: Rank,
        #[arg(long)]
        word: String,
    },
    /// Set of generators occurring in an element.
    Content {
        #[command(flatten)]
        rank: Rank,
        #[arg(long)]
        word: String,
    },
    /// Deletion endomorphism: drop the generators in --set.
    Delete {
        #[command(flatten)]
        rank: Rank,
        /// Indices to delete, e.g. "1,2".
        #[arg(long)]
        set: String,
        #[arg(long)]
        word: String,
    },
    /// Level of an element.
    Level {
        #[command(flatten)]
        rank: Rank,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = LevelMethod::Definition)]
        method: LevelMethod,
    },
    /// Least i with x e_[i] = f.
    M {
        #[command(flatten)]
        rank: Rank,
        #[arg(long)]
        word: String,
    },
    /// Ultrametric distance between two elements.
    Dist {
        #[command(flatten)]
        rank: Rank,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// All elements of K_n in shortlex order, or a cardinality table.
    Enumerate {
        #[arg(long = "n", required_unless_present = "table")]
        n: Option<usize>,
        /// Print |K_n| for n = 2..=max-rank as TSV.
        #[arg(long)]
        table: bool,
        /// Largest rank in the table.
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        #[command(flatten)]
        budget: Budget,
    },
    /// Elements within distance r of a center.
    Ball {
        #[command(flatten)]
        rank: Rank,
        /// Center word; "e" and "f" are accepted.
        #[arg(long)]
        center: String,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        budget: Budget,
    },
    /// Elements at distance exactly r from a center.
    Sphere {
        #[command(flatten)]
        rank: Rank,
        #[arg(long)]
        center: String,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        budget: Budget,
    },
    /// Elements x with x a_1 = f.
    Rset {
        #[command(flatten)]
        rank: Rank,
        #[command(flatten)]
        budget: Budget,
    },
    /// Transition matrix of the level chain.
    Chain {
        #[command(flatten)]
        rank: Rank,
        /// Comma-separated probabilities (ratios allowed); uniform if omitted.
        #[arg(long)]
        p: Option<String>,
    },
    /// Exact distribution of the hitting time of f.
    Pmf {
        #[command(flatten)]
        rank: Rank,
        /// Comma-separated probabilities (ratios allowed); uniform if omitted.
        #[arg(long)]
        p: Option<String>,
        /// Last k to tabulate; defaults to the smallest k with tail below 1e-9.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Monte Carlo simulation of random partial products.
    Simulate {
        #[command(flatten)]
        rank: Rank,
        /// Comma-separated probabilities (ratios allowed); uniform if omitted.
        #[arg(long)]
        p: Option<String>,
        /// Number of independent trials.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Base seed; trial t uses stream t of this seed.
        #[arg(long)]
        seed: u64,
        /// Defaults to full up to rank 3 and sampled above.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "KISELMAN_STEP_BUDGET", default_value_t = DEFAULT_STEP_BUDGET,
              value_parser = clap::value_parser!(u64).range(1..))]
        step_budget: u64,
        #[command(flatten)]
        thresholds: Thresholds,
    },
    /// Compare a simulation report with the exact distribution.
    Verify {
        #[arg(long)]
        report: PathBuf,
        #[command(flatten)]
        thresholds: Thresholds,
    },
    /// Exhaustive invariant checks at small rank.
    Selftest {
        /// Checks run at every rank from 2 up to this one.
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
    },
}

/// What a command produced: one rendering per format and an exit status.
struct Output {
    plain: String,
    tsv: String,
    json: Value,
    status: i32,
    notice: Option<String>,
}

impl Output {
    fn new(plain: String, tsv: String, json: Value) -> Self {
        Output {
            plain,
            tsv,
            json,
            status: EXIT_OK,
            notice: None,
        }
    }

    /// A single record: plain prints the value of `key`, tsv a header line and a row.
    fn record(fields: Vec<(&str, Value)>, key: &str) -> Self {
        let show = |v: &Value| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let plain = fields
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| show(v))
            .unwrap_or_default();
        let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
        let row: Vec<String> = fields.iter().map(|(_, v)| show(v)).collect();
        let tsv = format!("{}\n{}", header.join("\t"), row.join("\t"));
        let json = Value::Object(
            fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        );
        Output::new(plain, tsv, json)
    }

    fn elements(list: &[Element]) -> Self {
        let words: Vec<String> = list.iter().map(|x| x.to_string()).collect();
        let plain = words.join("\n");
        let tsv = format!("element\n{plain}");
        Output::new(plain, tsv, json!(words))
    }

    fn render(&self, format: Format) -> String {
        let mut text = match format {
            Format::Plain => self.plain.clone(),
            Format::Tsv => self.tsv.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("json value"),
        };
        if !text.ends_with('\n') {
            text.push('\n');
        }
        text
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded(_)
        | Error::StepBudgetExceeded { .. }
        | Error::IncompleteUniverse(_) => EXIT_BUDGET,
        Error::UnstableOracle { .. } => EXIT_VERIFICATION,
        _ => EXIT_USAGE,
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(output) => {
            if let Some(notice) = &output.notice {
                let _ = writeln!(err, "{notice}");
            }
            if out.write_all(output.render(cli.format).as_bytes()).is_err() {
                return EXIT_USAGE;
            }
            output.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn element(n: usize, text: &str) -> Result<Element> {
    match text.trim() {
        "e" => Element::identity(n),
        "f" => Element::zero(n),
        t => Element::parse(n, t),
    }
}

fn probabilities(n: usize, text: &Option<String>) -> Result<ProbabilityVector> {
    let p = match text.as_deref() {
        None | Some("uniform") => ProbabilityVector::uniform(n)?,
        Some(t) => ProbabilityVector::parse(t)?,
    };
    if p.rank() != n {
        return Err(Error::RankMismatch {
            left: n,
            right: p.rank(),
        });
    }
    Ok(p)
}

fn universe(n: usize, cap: usize) -> Result<ElementList> {
    let list = enumerate(n, cap)?;
    if !list.is_complete() {
        return Err(Error::IncompleteUniverse(n));
    }
    Ok(list)
}

fn execute(command: &Command) -> Result<Output> {
    Ok(match command {
        Command::Reduce { rank, word } => {
            let x = reduce(&Word::parse(rank.n, word)?);
            Output::record(vec![("element", json!(x.to_string()))], "element")
        }
        Command::Mul { rank, x, y } => {
            let p = element(rank.n, x)?.multiply(&element(rank.n, y)?)?;
            Output::record(vec![("element", json!(p.to_string()))], "element")
        }
        Command::Tau { rank, word } => {
            let t = element(rank.n, word)?.tau();
            Output::record(vec![("element", json!(t.to_string()))], "element")
        }
        Command::Content { rank, word } => {
            let x = element(rank.n, word)?;
            let c: Vec<usize> = x.content().members().collect();
            let mut out = Output::record(
                vec![("element", json!(x.to_string())), ("content", json!(c))],
                "content",
            );
            out.plain = x.content().to_string();
            let joined: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            out.tsv = format!("element\tcontent\n{x}\t{}", joined.join(","));
            out
        }
        Command::Delete { rank, set, word } => {
            let s = IndexSet::parse(rank.n, set)?;
            let d = delete(&s, &element(rank.n, word)?)?;
            Output::record(vec![("element", json!(d.to_string()))], "element")
        }
        Command::Level { rank, word, method } => {
            let level = match method {
                LevelMethod::Definition => level_by_definition(&element(rank.n, word)?),
                LevelMethod::Recursion => level_by_recursion(&Word::parse(rank.n, word)?),
                LevelMethod::M => annihilation_depth(&element(rank.n, word)?),
            };
            let x = element(rank.n, word)?;
            Output::record(
                vec![("element", json!(x.to_string())), ("level", json!(level))],
                "level",
            )
        }
        Command::M { rank, word } => {
            let x = element(rank.n, word)?;
            Output::record(
                vec![
                    ("element", json!(x.to_string())),
                    ("m", json!(annihilation_depth(&x))),
                ],
                "m",
            )
        }
        Command::Dist { rank, x, y } => {
            let (a, b) = (element(rank.n, x)?, element(rank.n, y)?);
            let d = distance(&a, &b)?;
            Output::record(
                vec![
                    ("x", json!(a.to_string())),
                    ("y", json!(b.to_string())),
                    ("d", json!(d)),
                ],
                "d",
            )
        }
        Command::Enumerate {
            n,
            table,
            max_rank,
            budget,
        } => {
            if *table {
                let t = cardinality_table(*max_rank, budget.cap)?;
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|&(n, c)| json!({"n": n, "count": c}))
                    .collect();
                let tsv = t.to_tsv();
                let mut out = Output::new(tsv.clone(), tsv, json!(rows));
                if let Some(rank) = t.truncated_at {
                    out.notice = Some(format!(
                        "notice: table truncated, rank {rank} exceeds the cap of {} elements",
                        budget.cap
                    ));
                    out.status = EXIT_BUDGET;
                }
                out
            } else {
                let n = n.expect("required unless --table");
                let list = enumerate(n, budget.cap)?;
                let mut out = Output::elements(list.elements());
                if !list.is_complete() {
                    out.notice = Some(format!(
                        "notice: enumeration incomplete, stopped at {} elements",
                        list.len()
                    ));
                    out.status = EXIT_BUDGET;
                }
                out
            }
        }
        Command::Ball {
            rank,
            center,
            r,
            budget,
        } => Output::elements(&ball(
            &element(rank.n, center)?,
            *r,
            &universe(rank.n, budget.cap)?,
        )?),
        Command::Sphere {
            rank,
            center,
            r,
            budget,
        } => Output::elements(&sphere(
            &element(rank.n, center)?,
            *r,
            &universe(rank.n, budget.cap)?,
        )?),
        Command::Rset { rank, budget } => Output::elements(&r_set(&universe(rank.n, budget.cap)?)?),
        Command::Chain { rank, p } => {
            let t = transition_matrix(&probabilities(rank.n, p)?);
            let line = |row: &[f64], sep: &str| {
                row.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(sep)
            };
            let rows: Vec<&[f64]> = t.entries.iter().map(Vec::as_slice).collect();
            let plain = rows
                .iter()
                .map(|r| line(r, " "))
                .collect::<Vec<_>>()
                .join("\n")
                + "\ninitial: "
                + &line(&t.initial, " ");
            let header: Vec<String> = (0..t.states()).map(|s| s.to_string()).collect();
            let tsv = format!("from\t{}\n", header.join("\t"))
                + &rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| format!("{i}\t{}", line(r, "\t")))
                    .collect::<Vec<_>>()
                    .join("\n");
            Output::new(
                plain,
                tsv,
                json!({"matrix": t.entries, "initial": t.initial}),
            )
        }
        Command::Pmf { rank, p, k } => {
            let p = probabilities(rank.n, p)?;
            let pmf = exact_hitting_pmf(&p, *k)?;
            let k_max = pmf.k_max();
            let support = rank.n.min(k_max + 1)..=k_max;
            let mut plain: Vec<String> = support
                .clone()
                .map(|k| format!("P(T={k})={}", pmf.pmf[k]))
                .collect();
            plain.push(format!("P(T>{k_max})={}", pmf.tail));
            let mut tsv = vec!["k\tprobability".to_string()];
            tsv.extend(support.clone().map(|k| format!("{k}\t{}", pmf.pmf[k])));
            tsv.push(format!(">{k_max}\t{}", pmf.tail));
            Output::new(
                plain.join("\n"),
                tsv.join("\n"),
                json!({
                    "n": pmf.n,
                    "p": p.as_slice(),
                    "k_max": k_max,
                    "pmf": pmf.pmf,
                    "tail": pmf.tail,
                    "mean": pmf.mean_with_tail_correction(),
                }),
            )
        }
        Command::Simulate {
            rank,
            p,
            trials,
            seed,
            mode,
            out,
            step_budget,
            thresholds,
        } => {
            let p = probabilities(rank.n, p)?;
            let mode = mode
                .map(Mode::from)
                .unwrap_or_else(|| Mode::default_for(rank.n));
            let mut config = SimulationConfig::new(p.clone(), *trials, *seed, mode);
            config.step_budget = *step_budget;
            let mut report = simulate(&config)?;
            let pmf = exact_hitting_pmf(&p, None)?;
            let mut notice = None;
            match verify_distribution(&report, &pmf, thresholds.config()) {
                Ok(v) => report.verdict = Some(v),
                Err(Error::InsufficientData(why)) => {
                    notice = Some(format!("notice: no goodness-of-fit verdict ({why})"))
                }
                Err(e) => return Err(e),
            }
            if let Some(path) = out {
                std::fs::write(path, report.to_json()).map_err(|e| Error::Parse {
                    input: path.display().to_string(),
                    reason: e.to_string(),
                })?;
            }
            let mut output = report_output(&report, pmf.mean_with_tail_correction());
            output.notice = notice;
            output
        }
        Command::Verify { report, thresholds } => {
            let text = std::fs::read_to_string(report).map_err(|e| Error::Parse {
                input: report.display().to_string(),
                reason: e.to_string(),
            })?;
            let mut parsed: SimulationReport =
                serde_json::from_str(&text).map_err(|e| Error::Parse {
                    input: report.display().to_string(),
                    reason: e.to_string(),
                })?;
            let p = ProbabilityVector::new(parsed.p.clone())?;
            let pmf = exact_hitting_pmf(&p, None)?;
            parsed.verdict = Some(verify_distribution(&parsed, &pmf, thresholds.config())?);
            report_output(&parsed, pmf.mean_with_tail_correction())
        }
        Command::Selftest { max_rank } => {
            let results = selftest::run(*max_rank)?;
            let status = |ok: bool| if ok { "PASS" } else { "FAIL" };
            let plain = results
                .iter()
                .map(|r| {
                    let mut line = format!(
                        "{} {:<20} {:>9} cases  {}",
                        status(r.passed),
                        r.name,
                        r.cases,
                        r.claim
                    );
                    for f in &r.failures {
                        line.push_str(&format!("\n     counterexample: {f}"));
                    }
                    line
                })
                .collect::<Vec<_>>()
                .join("\n");
            let tsv =
                std::iter::once("check\tstatus\tcases\tclaim".to_string())
                    .chain(results.iter().map(|r| {
                        format!("{}\t{}\t{}\t{}", r.name, status(r.passed), r.cases, r.claim)
                    }))
                    .collect::<Vec<_>>()
                    .join("\n");
            let mut out = Output::new(plain, tsv, json!(results));
            if results.iter().any(|r| !r.passed) {
                out.status = EXIT_VERIFICATION;
            }
            out
        }
    })
}

fn report_output(report: &SimulationReport, exact_mean: f64) -> Output {
    let mut plain = vec![
        format!("n\t{}", report.n),
        format!("trials\t{}", report.trials),
        format!("seed\t{}", report.seed),
        format!("mean\t{}", report.mean),
        format!("exact_mean\t{exact_mean}"),
        format!("standard_error\t{}", report.standard_error),
        format!("cross_checked_trials\t{}", report.cross_checked_trials),
        format!("cross_check_failures\t{}", report.cross_check_failures),
    ];
    if let Some(v) = &report.verdict {
        plain.push(format!("tv_distance\t{}", v.tv_distance));
        plain.push(format!("chi_square\t{}", v.chi_square));
        plain.push(format!("p_value\t{}", v.p_value));
        plain.push(format!(
            "verdict\t{}",
            if v.passed { "pass" } else { "fail" }
        ));
    }
    let tsv = std::iter::once("k\tcount".to_string())
        .chain(
            report
                .histogram
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(k, c)| format!("{k}\t{c}")),
        )
        .collect::<Vec<_>>()
        .join("\n");
    let json = serde_json::to_value(report).expect("report serializes");
    let mut out = Output::new(plain.join("\n"), tsv, json);
    let consistent = report.cross_check_failures == 0 && report.path_violations == 0;
    if !consistent || report.verdict.as_ref().is_some_and(|v| !v.passed) {
        out.status = EXIT_VERIFICATION;
    }
    out
}
