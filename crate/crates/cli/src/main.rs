use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};
use lechkit::case::parse_box;
use lechkit::{run_checks, CaseFile, Report, Selection};
use lechkit_core::field::parse_field_name;
use lechkit_core::monom::box_prime_filtration;
use lechkit_core::stanley::{analyze, stanley_decompose_with, PivotRule};
use lechkit_core::{Error, MonomialIdeal, RationalSeries, StandardSet};
use serde_json::json;

#[derive(Parser)]
#[command(name = "lechkit", version, about = "Exact checks of multiplicity bounds on weighted-graded algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Output path; `-` is stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(clap::Args)]
struct CaseOverrides {
    #[arg(long)]
    max_degree: Option<u32>,
    #[arg(long)]
    i_max: Option<u32>,
    #[arg(long)]
    t_max: Option<u32>,
    #[arg(long)]
    window: Option<u32>,
    /// `Q` or `Fp:<p>`.
    #[arg(long)]
    field: Option<String>,
    /// Comma-separated stages to leave out.
    #[arg(long, value_delimiter = ',')]
    skip: Vec<String>,
    /// Show per-stage wall-clock time in text output.
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check on one case file.
    Check {
        case: PathBuf,
        #[command(flatten)]
        overrides: CaseOverrides,
        #[command(flatten)]
        output: Output,
    },
    /// Run every `*.case` file in a directory.
    CheckAll {
        dir: PathBuf,
        #[command(flatten)]
        overrides: CaseOverrides,
        #[command(flatten)]
        output: Output,
    },
    /// Stanley decomposition of the complement of a monomial ideal.
    Stanley {
        /// Comma-separated generators such as `T1^2, T1*T2`, or `0`.
        ideal: String,
        /// Number of variables; inferred from the generators when omitted.
        #[arg(long)]
        num_vars: Option<usize>,
        #[arg(long)]
        highest_pivot: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Inspect a rational series such as `(1+z)^2/(1-z)`.
    Series {
        series: String,
        #[arg(long)]
        residue: bool,
        #[arg(long)]
        poles: bool,
        /// Print coefficients through this degree.
        #[arg(long)]
        expand: Option<usize>,
        /// Run the L-functional check up to this index.
        #[arg(long)]
        l_check: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Prime filtration of `P/(T_1^{a_1}, ..., T_r^{a_r})`.
    Filtration {
        /// Box exponents such as `2,3`.
        a: String,
        #[command(flatten)]
        output: Output,
    },
}

fn write_out(out: &str, text: &str) -> Result<(), String> {
    if out == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes()).map_err(|e| format!("stdout: {e}"))
    } else {
        std::fs::write(out, text).map_err(|e| format!("{out}: {e}"))
    }
}

fn load_case(path: &Path, o: &CaseOverrides) -> Result<CaseFile, Error> {
    let mut case = CaseFile::from_path(path)?;
    if let Some(v) = o.max_degree {
        case.options.max_degree = v;
    }
    if let Some(v) = o.i_max {
        case.options.i_max = v;
    }
    if let Some(v) = o.t_max {
        case.options.t_max = v;
    }
    if let Some(v) = o.window {
        case.options.window = v;
    }
    if let Some(f) = &o.field {
        case.ring.field = parse_field_name(f)?;
    }
    Ok(case)
}

fn selection(o: &CaseOverrides) -> Result<Selection, Error> {
    let names: Vec<&str> = o.skip.iter().map(String::as_str).collect();
    Selection::skipping(&names)
}

fn render(report: &Report, output: &Output, timings: bool) -> String {
    match output.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(timings),
    }
}

fn worker_count(jobs: usize) -> usize {
    let cap = std::env::var("LECHKIT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    cap.min(jobs).max(1)
}

/// Runs the cases on a bounded pool; results come back in input order.
fn run_all(paths: &[PathBuf], o: &CaseOverrides, sel: &Selection) -> Vec<Result<Report, Error>> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<Report, Error>>>> = Mutex::new(vec![None; paths.len()]);
    std::thread::scope(|s| {
        for _ in 0..worker_count(paths.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= paths.len() {
                    break;
                }
                let r = load_case(&paths[i], o).and_then(|c| run_checks(&c, sel));
                results.lock().expect("no poisoned workers")[i] = Some(r);
            });
        }
    });
    results
        .into_inner()
        .expect("no poisoned workers")
        .into_iter()
        .map(|r| r.expect("every case ran"))
        .collect()
}

fn infer_vars(ideal: &str) -> usize {
    let mut max = 1;
    let chars: Vec<char> = ideal.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == 'T' {
            let digits: String = chars[i + 1..].iter().take_while(|c| c.is_ascii_digit()).collect();
            if let Ok(n) = digits.parse::<usize>() {
                max = max.max(n);
            }
            i += digits.len();
        }
        if chars[i] == '[' {
            let inner: String = chars[i + 1..].iter().take_while(|&&c| c != ']').collect();
            max = max.max(inner.split(',').count());
        }
        i += 1;
    }
    max
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Check { case, overrides, output } => {
            let sel = selection(&overrides).map_err(|e| e.to_string())?;
            let c = load_case(&case, &overrides).map_err(|e| format!("{}: {e}", case.display()))?;
            let report = run_checks(&c, &sel).map_err(|e| format!("{}: {e}", case.display()))?;
            write_out(&output.out, &render(&report, &output, overrides.timings))?;
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::CheckAll { dir, overrides, output } => {
            let sel = selection(&overrides).map_err(|e| e.to_string())?;
            let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
                .map_err(|e| format!("{}: {e}", dir.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "case"))
                .collect();
            paths.sort();
            if paths.is_empty() {
                return Err(format!("{}: no .case files", dir.display()));
            }
            let results = run_all(&paths, &overrides, &sel);
            let mut failed_infra = false;
            let mut all_pass = true;
            let mut reports = Vec::new();
            let mut text = String::new();
            for (p, r) in paths.iter().zip(results) {
                match r {
                    Ok(rep) => {
                        all_pass &= rep.pass;
                        if let Format::Text = output.format {
                            text.push_str(&rep.to_text(overrides.timings));
                            text.push('\n');
                        }
                        reports.push(serde_json::to_value(&rep).expect("report serializes"));
                    }
                    Err(e) => {
                        failed_infra = true;
                        let msg = format!("{}: {e}", p.display());
                        text.push_str(&format!("error: {msg}\n\n"));
                        reports.push(json!({ "case": p.file_stem().map(|s| s.to_string_lossy().into_owned()), "error": msg }));
                    }
                }
            }
            let body = match output.format {
                Format::Text => {
                    text.push_str(&format!(
                        "summary: {} cases, {}\n",
                        paths.len(),
                        if failed_infra { "errors" } else if all_pass { "all pass" } else { "mismatches" }
                    ));
                    text
                }
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&json!({ "reports": reports })).expect("serializes");
                    s.push('\n');
                    s
                }
            };
            write_out(&output.out, &body)?;
            Ok(if failed_infra {
                ExitCode::from(2)
            } else if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Stanley { ideal, num_vars, highest_pivot, output } => {
            let r = num_vars.unwrap_or_else(|| infer_vars(&ideal));
            let ideal = MonomialIdeal::parse(&ideal, r).map_err(|e| e.to_string())?;
            let set = StandardSet::complement_of(ideal);
            let rule = if highest_pivot { PivotRule::Highest } else { PivotRule::Lowest };
            let dec = stanley_decompose_with(&set, rule);
            let analysis = analyze(&dec).ok();
            let body = match output.format {
                Format::Text => {
                    let mut s = dec.to_string();
                    if !s.is_empty() && !s.ends_with('\n') {
                        s.push('\n');
                    }
                    match &analysis {
                        Some(a) => s.push_str(&format!(
                            "dimension {}\nmultiplicity {}\nseries {}\n",
                            a.dimension, a.multiplicity, a.single_series
                        )),
                        None => s.push_str("standard set is empty\n"),
                    }
                    s
                }
                Format::Json => {
                    let v = json!({
                        "decomposition": dec,
                        "dimension": analysis.as_ref().map(|a| a.dimension),
                        "multiplicity": analysis.as_ref().map(|a| a.multiplicity),
                        "series": analysis.as_ref().map(|a| &a.single_series),
                    });
                    let mut s = serde_json::to_string_pretty(&v).expect("serializes");
                    s.push('\n');
                    s
                }
            };
            write_out(&output.out, &body)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Series { series, residue, poles, expand, l_check, output } => {
            let s = RationalSeries::parse(&series).map_err(|e| e.to_string())?;
            let reduced = s.reduce();
            let mut v = json!({ "series": s, "display": s.to_string(), "reduced": reduced.to_string() });
            let mut text = format!("series  {s}\nreduced {reduced}\n");
            let profile = reduced.classify_poles();
            if poles {
                let d = profile.order_at_one;
                text.push_str(&format!(
                    "poles   order at 1 = {d}, max elsewhere = {}, P1 = {}, P3_d = {}, P3_(d+1) = {}\n",
                    profile.max_order_elsewhere,
                    profile.satisfies_p1,
                    profile.p3(d),
                    profile.p3(d + 1)
                ));
                v["poles"] = serde_json::to_value(&profile).expect("serializes");
            }
            if residue {
                let r = reduced.residue_at_one();
                text.push_str(&format!("residue {r}\n"));
                v["residue"] = json!(r.to_string());
            }
            if let Some(n) = expand {
                let c: Vec<String> = s.expand(n).iter().map(|x| x.to_string()).collect();
                text.push_str(&format!("coeffs  {}\n", c.join(" ")));
                v["coefficients"] = json!(c);
            }
            if let Some(k) = l_check {
                let rec = reduced.l_functional_check(k).map_err(|e| e.to_string())?;
                text.push_str(&format!(
                    "L_{k}   {} (gap {:.3e})\n",
                    rec.final_value(),
                    rec.final_gap()
                ));
                v["l_functional"] = json!({ "k": k, "value": rec.final_value().to_string(), "gap": rec.final_gap() });
            }
            let body = match output.format {
                Format::Text => text,
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&v).expect("serializes");
                    s.push('\n');
                    s
                }
            };
            write_out(&output.out, &body)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Filtration { a, output } => {
            let a = parse_box(&a).map_err(|e| e.to_string())?;
            let f = box_prime_filtration(&a).map_err(|e| e.to_string())?;
            let body = match output.format {
                Format::Text => {
                    let mut s = format!("length {}\n", f.length());
                    for (i, c) in f.chain.iter().enumerate() {
                        s.push_str(&format!("J{i} = {c}"));
                        if i < f.length() {
                            s.push_str(&format!("  factor spanned by {}", f.factor_generator(i)));
                        }
                        s.push('\n');
                    }
                    let w: Vec<String> = f.witness.iter().map(|m| m.to_string()).collect();
                    s.push_str(&format!("witness {}\n", w.join(", ")));
                    s
                }
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&f).expect("serializes");
                    s.push('\n');
                    s
                }
            };
            write_out(&output.out, &body)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
