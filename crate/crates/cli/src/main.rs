use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use branchforge::altembed::{
    embed_finite_group, verify_altalt, FiniteGroupTable, GroupChain, GroupChainSpec, LevelData,
};
use branchforge::fpwords::{evaluate, parse_word, render_word, FPWord};
use branchforge::gammalab::{
    certify_finite_order, perfectness, replay_order_certificate, verify_wreath_identities,
    GammaScenario, OrderCertificate,
};
use branchforge::permcore::{Permutation, DEFAULT_DEGREE_CAP};
use branchforge::shrinklab::{
    greedy_shrinking_prefix, landau_row, replay_certificate, HypothesisRatio, ShrinkCertificate,
    ZSet, LANDAU_LIMIT,
};
use branchforge::{Error, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "branchforge",
    version,
    about = "Finite-depth branch group constructions and certificates"
)]
struct Cli {
    /// Scenario file; defaults to trivial G with n = 1 from level 1.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Also write the JSON result to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Embed each quotient of G and build its first level.
    Embed {
        /// Group chain file; defaults to the scenario's group.
        #[arg(long)]
        group: Option<PathBuf>,
    },
    /// Check that the conjugates of Alt(5) generate Alt(2n+3) for each quotient.
    VerifyAltgen {
        #[arg(long)]
        group: Option<PathBuf>,
    },
    /// Full dump of one level: cosets, Y, Y', generators.
    Level {
        #[arg(long)]
        level: Option<usize>,
    },
    /// Portrait of a word's automorphism to a given depth.
    Portrait {
        #[arg(long)]
        word: String,
        #[arg(long)]
        depth: usize,
    },
    /// Finite-order certificate for a word.
    Order {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 6)]
        budget: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Z-set of a word at a level.
    Zset {
        #[arg(long)]
        word: String,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Greedy shrinking prefix for the words in a file (one per line).
    ShrinkSearch {
        #[arg(long)]
        words: PathBuf,
        #[arg(long)]
        budget: usize,
    },
    /// Wreath and rigid-stabilizer identities at a level.
    WreathCheck {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        level: Option<usize>,
        /// Proposed stabilizer element in cycle notation.
        #[arg(long)]
        candidate: Option<String>,
    },
    /// Landau's function and the bound g(n) <= n!/2^(n-1).
    Landau {
        #[arg(long)]
        max: usize,
    },
    /// Counting-hypothesis ratio at a level.
    Ratio {
        #[arg(long)]
        level: Option<usize>,
    },
    /// Compare |A_j| with its derived subgroup.
    Perfectness {
        #[arg(long)]
        level: Option<usize>,
    },
    /// Replay a shrink or order certificate against the scenario.
    Replay {
        #[arg(long)]
        certificate: PathBuf,
    },
}

struct Outcome {
    json: Value,
    text: String,
    passed: bool,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_scenario(path: Option<&Path>) -> Result<GammaScenario> {
    match path {
        Some(p) => GammaScenario::from_file(p),
        None => GammaScenario::new("n1", GroupChain::trivial(), 1, 6, None),
    }
}

fn load_chain(group: Option<&Path>, scenario: Option<&Path>) -> Result<GroupChain> {
    match group {
        Some(p) => {
            let spec: GroupChainSpec = serde_json::from_str(&read(p)?)?;
            GroupChain::from_spec(&spec)
        }
        None => Ok(load_scenario(scenario)?.chain().clone()),
    }
}

fn word_at(s: &GammaScenario, text: &str, level: usize) -> Result<FPWord> {
    parse_word(text, s.shape(), level)
}

fn embed(chain: &GroupChain) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut text = String::new();
    for index in 1..=chain.quotients().len() {
        let data = LevelData::build(chain, index, DEFAULT_DEGREE_CAP)?;
        let images: Vec<String> = data.f_images().iter().map(|p| p.to_string()).collect();
        let _ = writeln!(
            text,
            "quotient {index}: n={} Alt({}) |X|={} |Y|={} |Y'|={}",
            data.n(),
            data.alt_degree(),
            data.x_size(),
            data.y().len(),
            data.y_prime().len()
        );
        rows.push(json!({
            "quotient": index,
            "n": data.n(),
            "alt_degree": data.alt_degree(),
            "f_images": images,
            "x_size": data.x_size(),
            "y_size": data.y().len(),
            "y_prime_size": data.y_prime().len(),
            "printed_y_formula": data.printed_y_formula().to_string(),
            "origin_stabilizer_order": data.origin_stabilizer_order()?.to_string(),
        }));
    }
    Ok(Outcome {
        json: json!({ "levels": rows }),
        text,
        passed: true,
    })
}

fn verify_altgen(chain: &GroupChain) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut passed = true;
    for (i, q) in chain.quotients().iter().enumerate() {
        let gens = if q.images.is_empty() {
            vec![Permutation::identity(q.degree)]
        } else {
            q.images.clone()
        };
        let (table, _) = FiniteGroupTable::from_permutations(&gens)?;
        let images = embed_finite_group(&table)?;
        let n = table.order();
        let ok = verify_altalt(&images, n)?;
        passed &= ok;
        let _ = writeln!(
            text,
            "quotient {}: |F|={n} Alt({}) generated: {ok}",
            i + 1,
            2 * n + 3
        );
        rows.push(json!({ "quotient": i + 1, "n": n, "alt_degree": 2 * n + 3, "generated": ok }));
    }
    Ok(Outcome {
        json: json!({ "quotients": rows, "passed": passed }),
        text,
        passed,
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    let scenario_path = cli.scenario.as_deref();
    match &cli.command {
        Command::Embed { group } => embed(&load_chain(group.as_deref(), scenario_path)?),
        Command::VerifyAltgen { group } => {
            verify_altgen(&load_chain(group.as_deref(), scenario_path)?)
        }
        Command::Level { level } => {
            let s = load_scenario(scenario_path)?;
            let data = s.shape().level(level.unwrap_or(s.start()))?;
            let export = data.export();
            let text = format!(
                "level {}: Alt({}) |X|={} |Y|={} |Y'|={} exponent={}\n",
                export.index,
                export.alt_degree,
                export.x_size,
                export.y_size,
                export.y_prime_size,
                export.exponent
            );
            Ok(Outcome {
                json: serde_json::to_value(export)?,
                text,
                passed: true,
            })
        }
        Command::Portrait { word, depth } => {
            let s = load_scenario(scenario_path)?;
            let s = s.with_horizon(s.horizon().max(*depth))?;
            let w = word_at(&s, word, s.start())?;
            let portrait = evaluate(&w, s.tree())?.truncate(*depth)?;
            Ok(Outcome {
                json: json!({ "word": render_word(&w, s.shape()), "depth": depth, "portrait": portrait }),
                text: portrait.render_text(),
                passed: true,
            })
        }
        Command::Order {
            word,
            budget,
            depth,
        } => {
            let s = load_scenario(scenario_path)?;
            let w = word_at(&s, word, s.start())?;
            let cert = certify_finite_order(&w, &s, *budget, *depth)?;
            Ok(order_outcome(cert))
        }
        Command::Zset { word, level } => {
            let s = load_scenario(scenario_path)?;
            let level = level.unwrap_or(s.start());
            let w = word_at(&s, word, level)?;
            let z = ZSet::compute(&w, s.shape())?;
            let members: Vec<Value> = z
                .members()
                .iter()
                .map(|(&(a, b), wit)| json!({ "alpha": a, "beta": b, "x": wit.x, "length": wit.length }))
                .collect();
            let text = format!(
                "Z-set of {} at level {level}: {} pairs, bound {}\n",
                render_word(&w, s.shape()),
                z.len(),
                z.bound()
            );
            Ok(Outcome {
                json: json!({
                    "level": level,
                    "word": render_word(&w, s.shape()),
                    "size": z.len(),
                    "bound": z.bound().to_string(),
                    "members": members,
                }),
                text,
                passed: (z.len() as u128) <= z.bound(),
            })
        }
        Command::ShrinkSearch { words, budget } => {
            let s = load_scenario(scenario_path)?;
            let s = s.with_horizon(s.horizon().max(*budget + 1))?;
            let parsed = read(words)?
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| word_at(&s, l, s.start()))
                .collect::<Result<Vec<_>>>()?;
            let cert = greedy_shrinking_prefix(s.id(), &parsed, s.shape(), *budget)?;
            let text = format!(
                "prefix alpha={:?} beta={:?}\ncomplete={} guaranteed={} surviving={}\n",
                cert.prefix.alpha,
                cert.prefix.beta,
                cert.complete,
                cert.guaranteed,
                cert.surviving.len()
            );
            Ok(Outcome {
                passed: cert.complete,
                json: serde_json::to_value(cert)?,
                text,
            })
        }
        Command::WreathCheck {
            depth,
            level,
            candidate,
        } => {
            let s = load_scenario(scenario_path)?;
            let level = level.unwrap_or(s.start());
            let s = s.with_horizon(s.horizon().max(level - s.start() + depth))?;
            let candidate = match candidate {
                Some(c) => Some(Permutation::parse(c, s.shape().level(level)?.alt_degree())?),
                None => None,
            };
            let report = verify_wreath_identities(&s, level, *depth, candidate.as_ref())?;
            let mut text = String::new();
            for c in &report.checks {
                let _ = writeln!(
                    text,
                    "{} {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name
                );
            }
            Ok(Outcome {
                passed: report.passed,
                json: serde_json::to_value(report)?,
                text,
            })
        }
        Command::Landau { max } => {
            if !(1..=LANDAU_LIMIT).contains(max) {
                return Err(Error::Config(format!(
                    "--max must lie in 1..={LANDAU_LIMIT}"
                )));
            }
            let rows = (1..=*max).map(landau_row).collect::<Result<Vec<_>>>()?;
            let mut text = String::new();
            for r in &rows {
                let _ = writeln!(
                    text,
                    "n={:>2} g={:>6} bound={:>12} {}",
                    r.n,
                    r.g,
                    r.bound,
                    if r.holds { "ok" } else { "FAILS" }
                );
            }
            let passed = rows.iter().all(|r| r.holds);
            Ok(Outcome {
                json: json!({ "rows": rows, "passed": passed }),
                text,
                passed,
            })
        }
        Command::Ratio { level } => {
            let s = load_scenario(scenario_path)?;
            let data = s.shape().level(level.unwrap_or(s.start()))?;
            let report = HypothesisRatio::new(&data).report();
            let text = format!(
                "n={} ratio={} bound={} bound_holds={} largest supported len_B={}\n",
                report.n,
                report.ratio,
                report.bound,
                report.bound_holds,
                report.largest_supported_len_b
            );
            Ok(Outcome {
                passed: report.bound_holds,
                json: serde_json::to_value(report)?,
                text,
            })
        }
        Command::Perfectness { level } => {
            let s = load_scenario(scenario_path)?;
            let report = perfectness(&s, level.unwrap_or(s.start()))?;
            let text = format!(
                "level {}: |A|={} |A'|={} perfect={}\n",
                report.level, report.order, report.derived_order, report.perfect
            );
            Ok(Outcome {
                passed: report.perfect,
                json: serde_json::to_value(report)?,
                text,
            })
        }
        Command::Replay { certificate } => {
            let s = load_scenario(scenario_path)?;
            let raw: Value = serde_json::from_str(&read(certificate)?)?;
            if raw.get("prefix").is_some() {
                let cert: ShrinkCertificate = serde_json::from_value(raw)?;
                let s = s.with_horizon(s.horizon().max(cert.budget + 1))?;
                replay_certificate(&cert, s.shape())?;
                Ok(Outcome {
                    json: json!({ "kind": "shrink", "replayed": true }),
                    text: "shrink certificate replays\n".into(),
                    passed: true,
                })
            } else {
                let cert: OrderCertificate = serde_json::from_value(raw)?;
                replay_order_certificate(&cert, &s)?;
                Ok(Outcome {
                    json: json!({ "kind": "order", "replayed": true }),
                    text: "order certificate replays\n".into(),
                    passed: true,
                })
            }
        }
    }
}

fn order_outcome(cert: OrderCertificate) -> Outcome {
    let text = match (cert.complete, cert.order, cert.n_prime) {
        (false, _, _) => format!(
            "{}: no shrink depth within budget {}\n",
            cert.word, cert.budget
        ),
        (true, Some(order), _) => format!(
            "{}: order {order}, shrink depth {}, truncation order {} at depth {}, verified={}\n",
            cert.word,
            cert.shrink_depth.unwrap_or_default(),
            cert.truncation_order.unwrap_or_default(),
            cert.verification_depth,
            cert.verified
        ),
        (true, None, n) => format!(
            "{}: order divides {} times the orders of {} residual G-letters, verified={}\n",
            cert.word,
            n.unwrap_or_default(),
            cert.residual.len(),
            cert.verified
        ),
    };
    Outcome {
        passed: cert.complete && cert.verified,
        json: serde_json::to_value(cert).expect("certificate serializes"),
        text,
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<()> {
    let json = serde_json::to_string_pretty(&outcome.json)? + "\n";
    if let Some(path) = &cli.out {
        std::fs::write(path, &json).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    match cli.format {
        Format::Json => print!("{json}"),
        Format::Text => print!("{}", outcome.text),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|outcome| {
        emit(&cli, &outcome)?;
        Ok(outcome.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
