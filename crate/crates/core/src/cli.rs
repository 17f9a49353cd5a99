//! The `typik` command line.
//!
//! Exit status: 0 on success (for `entail`, when the query is entailed), 1 when
//! `entail` finds the query not entailed, 2 on any error. Errors are written
//! to stderr as a single JSON record `{"error": kind, "message": ..}`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::asp::{emit_preference, emit_program_with, EmitOptions};
use crate::concept::TypicalityQuery;
use crate::entailment::{
    check_satisfiable_with, entails_with, list_models_with, EntailmentVerdict, Satisfiability, SearchOptions, Strategy,
    UnsatReason,
};
use crate::error::{Error, Result};
use crate::kb::{load_kb_unchecked, serialize_kb, validate_kb, WeightedKb};
use crate::network::{load_network, network_to_kb};
use crate::phi::PhiConfig;

#[derive(Debug, Parser)]
#[command(
    name = "typik",
    version,
    about = "Typicality entailment for weighted many-valued knowledge bases"
)]
pub struct Cli {
    /// Print JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads for enumeration (default: available parallelism)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct Overrides {
    /// Override the resolution n of the truth chain
    #[arg(long)]
    pub n: Option<u32>,

    /// Override the algebra (goedel or lukasiewicz)
    #[arg(long)]
    pub algebra: Option<Algebra>,

    /// Override the activation: logistic[:gain] or clamped-linear:slope:offset
    #[arg(long)]
    pub phi: Option<PhiConfig>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Search,
    Feedforward,
    Exhaustive,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Search => Strategy::Search,
            StrategyArg::Feedforward => Strategy::Feedforward,
            StrategyArg::Exhaustive => Strategy::Exhaustive,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a KB document and list every problem found
    Validate { kb: PathBuf },

    /// List feasible valuations with weight sums and φₙ values
    Models {
        kb: PathBuf,
        #[arg(long, default_value_t = 20)]
        limit: usize,
        #[command(flatten)]
        overrides: Overrides,
    },

    /// Decide a typicality query, e.g. "T(o) -> a & b >= 1"
    Entail {
        kb: PathBuf,
        query: String,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
        #[command(flatten)]
        overrides: Overrides,
    },

    /// Check that the KB has a φₙ-coherent model
    Satisfiable {
        kb: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },

    /// Convert a network description into a KB document
    ImportNn {
        net: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "goedel")]
        algebra: Algebra,
        #[arg(long, default_value = "logistic")]
        phi: PhiConfig,
        /// Let input concepts range over the whole chain
        #[arg(long)]
        non_binary_inputs: bool,
        /// Output path (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Emit the ASP program for a KB and query
    EmitAsp {
        kb: PathBuf,
        query: String,
        /// Program output path (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Preference program output path
        #[arg(long)]
        pref: Option<PathBuf>,
        /// Use a #sum aggregate for weight/3
        #[arg(long)]
        sum_aggregate: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_kb(path: &Path, o: &Overrides) -> Result<WeightedKb> {
    let mut kb = load_kb_unchecked(&read(path)?)?;
    if let Some(n) = o.n {
        kb.n = n;
    }
    if let Some(a) = o.algebra {
        kb.algebra = a;
    }
    if let Some(phi) = &o.phi {
        kb.phi = phi.clone();
    }
    let diagnostics = validate_kb(&kb);
    if diagnostics.is_empty() {
        Ok(kb)
    } else {
        Err(Error::Invalid(diagnostics))
    }
}

fn write_to(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub fn error_record(e: &Error) -> Value {
    let mut record = json!({ "error": e.kind(), "message": e.to_string() });
    if let Error::Invalid(diagnostics) = e {
        record["diagnostics"] = serde_json::to_value(diagnostics).expect("diagnostics serialize");
    }
    record
}

fn verdict_text(v: &EntailmentVerdict) -> String {
    let mut s = format!(
        "entailed: {} ({})\n",
        if v.entailed { "yes" } else { "no" },
        v.mode.name()
    );
    if let Some(d) = v.typical_degree {
        s += &format!("typical degree: {d}\n");
    }
    if let Some(w) = &v.witness {
        s += &format!("witness: {}\nproperty degree: {}\n", w.valuation, w.property_degree);
    }
    s += &format!(
        "{} candidates, {} feasible valuations, {} ms\n",
        v.stats.valuations_checked, v.stats.feasible_count, v.stats.elapsed_ms
    );
    s
}

/// Runs one command; returns the exit status.
fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let mut opts = SearchOptions::from_env()?;
    opts.threads = cli.threads;
    let emit = |out: &mut dyn Write, value: Value, text: String| -> Result<()> {
        if cli.json {
            writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
        } else {
            write!(out, "{text}")?;
        }
        Ok(())
    };
    match &cli.command {
        Command::Validate { kb } => {
            let parsed = load_kb(kb, &Overrides::default())?;
            let value = json!({
                "valid": true,
                "concepts": parsed.concepts.len(),
                "distinguished": parsed.distinguished().count(),
                "typicality_inclusions": parsed.inclusion_count(),
                "tbox": parsed.tbox.len(),
                "abox": parsed.abox.len(),
            });
            let text = format!(
                "valid: {} concepts, {} distinguished, {} typicality inclusions, {} strict inclusions, {} assertions\n",
                parsed.concepts.len(),
                parsed.distinguished().count(),
                parsed.inclusion_count(),
                parsed.tbox.len(),
                parsed.abox.len()
            );
            emit(out, value, text)?;
            Ok(0)
        }
        Command::Models { kb, limit, overrides } => {
            let kb = load_kb(kb, overrides)?;
            let models = list_models_with(&kb, *limit, &opts)?;
            let value = Value::Array(models.iter().map(|m| m.to_json()).collect());
            let mut text = String::new();
            for m in &models {
                text += &m.valuation.to_string();
                for a in &m.annotations {
                    text += &format!("  {}: W={} φₙ={}", a.concept, a.weight_sum, a.phi_n);
                }
                text.push('\n');
            }
            text += &format!("{} model(s) shown\n", models.len());
            emit(out, value, text)?;
            Ok(0)
        }
        Command::Entail {
            kb,
            query,
            strategy,
            overrides,
        } => {
            let kb = load_kb(kb, overrides)?;
            let q: TypicalityQuery = query.parse()?;
            let verdict = entails_with(&kb, &q, &opts.with_strategy((*strategy).into()))?;
            emit(out, verdict.to_json(), verdict_text(&verdict))?;
            Ok(if verdict.entailed { 0 } else { 1 })
        }
        Command::Satisfiable { kb, overrides } => {
            let kb = load_kb(kb, overrides)?;
            let sat = check_satisfiable_with(&kb, &opts)?;
            let text = match &sat {
                Satisfiability::Satisfiable { sample } => {
                    let mut t = "satisfiable\n".to_string();
                    for (a, v) in sample {
                        t += &format!("  {a}: {v}\n");
                    }
                    t
                }
                Satisfiability::Unsatisfiable {
                    reason: UnsatReason::NoFeasibleValuation,
                } => "unsatisfiable: no feasible valuation\n".to_string(),
                Satisfiability::Unsatisfiable {
                    reason: UnsatReason::Individual(a),
                } => {
                    format!("unsatisfiable: no feasible valuation meets the assertions about {a}\n")
                }
            };
            emit(out, sat.to_json(), text)?;
            Ok(0)
        }
        Command::ImportNn {
            net,
            n,
            algebra,
            phi,
            non_binary_inputs,
            out: path,
        } => {
            let network = load_network(&read(net)?)?;
            let kb = network_to_kb(&network, *n, *algebra, phi.clone(), !non_binary_inputs)?;
            let doc = serialize_kb(&kb) + "\n";
            match path {
                Some(p) => {
                    write_to(p, &doc)?;
                    let value = json!({
                        "written": p.display().to_string(),
                        "concepts": kb.concepts.len(),
                        "typicality_inclusions": kb.inclusion_count(),
                    });
                    let text = format!(
                        "wrote {} ({} concepts, {} typicality inclusions)\n",
                        p.display(),
                        kb.concepts.len(),
                        kb.inclusion_count()
                    );
                    emit(out, value, text)?;
                }
                None => write!(out, "{doc}")?,
            }
            Ok(0)
        }
        Command::EmitAsp {
            kb,
            query,
            out: path,
            pref,
            sum_aggregate,
            overrides,
        } => {
            let kb = load_kb(kb, overrides)?;
            let q: TypicalityQuery = query.parse()?;
            let program = emit_program_with(
                &kb,
                &q,
                EmitOptions {
                    sum_aggregate: *sum_aggregate,
                },
            )?
            .text();
            if let Some(p) = pref {
                write_to(p, &emit_preference())?;
            }
            match path {
                Some(p) => write_to(p, &program)?,
                None => write!(out, "{program}")?,
            }
            Ok(0)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let record = json!({ "error": "usage", "message": e.to_string().trim_end() });
                let _ = writeln!(err, "{record}");
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", error_record(&e));
            2
        }
    }
}
