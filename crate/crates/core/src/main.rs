use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use tcurve::builtin::builtin;
use tcurve::census::enumerate_unimodular;
use tcurve::classify::classify;
use tcurve::enumeration::{sample, sweep, SweepOptions, SweepRange, SweepReport, DEFAULT_CHUNK};
use tcurve::io::{read_triangulation, write_histogram_csv, write_report_jsonl, ReportParams};
use tcurve::oracle::oracle_classify;
use tcurve::poly::emit_polynomial;
use tcurve::regularity::{is_certificate, regular_lifting};
use tcurve::render::{render_svg, RenderOptions};
use tcurve::{Error, Lifting, Result, SignDistribution, Triangulation};

/// Real schemes of combinatorial patchworks.
#[derive(Parser)]
#[command(name = "tcurve", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// triangulation JSON file
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    file: Option<PathBuf>,
    /// named triangulation: bowtie8, fig2-middle8, fig2-right8, delaunay-<d>
    #[arg(long)]
    builtin: Option<String>,
    /// skip the unimodularity checks on file input
    #[arg(long)]
    skip_validation: bool,
}

impl Source {
    fn load(&self) -> Result<Triangulation> {
        match (&self.builtin, &self.file) {
            (Some(name), _) => builtin(name),
            (None, Some(path)) => {
                read_triangulation(&std::fs::read_to_string(path)?, !self.skip_validation)
            }
            (None, None) => unreachable!("clap requires one source"),
        }
    }
}

#[derive(Args)]
struct Enumerate {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = DEFAULT_CHUNK)]
    chunk: u64,
    /// index all 2^|A| sign vectors instead of representatives
    #[arg(long)]
    raw_sign_space: bool,
    /// JSONL scheme report
    #[arg(long)]
    output: Option<PathBuf>,
    /// CSV oval-count histogram
    #[arg(long)]
    histogram: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the real scheme of one patchwork
    Classify {
        #[command(flatten)]
        source: Source,
        /// one '0'/'1' per lattice point, '1' meaning negative
        #[arg(long)]
        signs: String,
        #[arg(long)]
        json: bool,
    },
    /// Classify with both the fast and the reference algorithm and compare
    Validate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        signs: String,
        #[arg(long)]
        json: bool,
    },
    /// Classify every sign index in a range
    Sweep {
        #[command(flatten)]
        run: Enumerate,
        #[arg(long)]
        start: Option<u128>,
        #[arg(long)]
        end: Option<u128>,
    },
    /// Classify uniformly drawn sign indices
    Sample {
        #[command(flatten)]
        run: Enumerate,
        #[arg(short = 'n', long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Count unimodular triangulations up to symmetry
    Census {
        degree: u32,
        #[arg(long)]
        regular_only: bool,
        #[arg(long)]
        long_run: bool,
    },
    /// Draw a patchwork as SVG
    Render {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        signs: String,
        /// first quadrant only
        #[arg(long)]
        quadrant: bool,
        #[arg(long)]
        no_signs: bool,
        #[arg(long)]
        no_curve: bool,
        #[arg(long, default_value_t = 40)]
        scale: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the terms of the patchwork polynomial
    EmitPoly {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        signs: String,
        /// comma-separated lifting values in point order; found by LP when absent
        #[arg(long)]
        lifting: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

fn parse_lifting(degree: u32, text: &str) -> Result<Lifting> {
    let mut values = Vec::new();
    let mut col = 1;
    for part in text.split(',') {
        let v = part.trim().parse::<i64>().map_err(|e| Error::Parse {
            line: 1,
            column: col,
            message: format!("lifting value `{part}`: {e}"),
        })?;
        values.push(v);
        col += part.len() + 1;
    }
    Lifting::new(degree, values)
}

/// Writes every file or none of them.
fn write_all(files: &[(&Path, String)]) -> Result<()> {
    for (k, (path, text)) in files.iter().enumerate() {
        if let Err(e) = std::fs::write(path, text) {
            for (p, _) in &files[..=k] {
                let _ = std::fs::remove_file(p);
            }
            return Err(e.into());
        }
    }
    Ok(())
}

fn finish(
    run: &Enumerate,
    report: &SweepReport,
    params: ReportParams,
    started: Instant,
) -> Result<()> {
    let mut files = Vec::new();
    if let Some(p) = &run.output {
        files.push((p.as_path(), write_report_jsonl(report, &params)?));
    }
    if let Some(p) = &run.histogram {
        files.push((p.as_path(), write_histogram_csv(report)));
    }
    write_all(&files)?;
    let secs = started.elapsed().as_secs_f64();
    println!("distinct schemes: {}", report.schemes.len());
    match report.max_ovals() {
        Some(m) => println!("max ovals: {m}"),
        None => println!("max ovals: -"),
    }
    println!("classified: {}", report.total);
    // timing varies run to run, so it stays off stdout
    eprintln!("time: {secs:.3} s");
    eprintln!("rate: {:.0} /s", report.total as f64 / secs.max(1e-9));
    Ok(())
}

fn options(run: &Enumerate) -> SweepOptions {
    SweepOptions {
        workers: run.workers.max(1),
        chunk: run.chunk,
        raw: run.raw_sign_space,
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classify {
            source,
            signs,
            json,
        } => {
            let t = source.load()?;
            let s = SignDistribution::parse(t.degree(), &signs)?;
            let r = classify(&t, &s)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string(&r).expect("plain data serializes")
                );
            } else {
                println!("{}", r.scheme);
                println!("ovals: {}", r.oval_count);
                println!(
                    "pseudoline: {}",
                    if r.has_pseudoline { "yes" } else { "no" }
                );
            }
        }
        Command::Validate {
            source,
            signs,
            json,
        } => {
            let t = source.load()?;
            let s = SignDistribution::parse(t.degree(), &signs)?;
            let fast = classify(&t, &s)?;
            let slow = oracle_classify(&t, &s)?;
            let agree = fast == slow;
            if json {
                println!(
                    "{}",
                    json!({ "classify": fast, "oracle": slow, "agree": agree })
                );
            } else {
                println!("classify: {}", fast.scheme);
                println!("oracle:   {}", slow.scheme);
                println!("{}", if agree { "agree" } else { "DISAGREE" });
            }
            if !agree {
                return Err(Error::InvariantViolation(format!(
                    "classify gives {fast:?}, oracle gives {slow:?}"
                )));
            }
        }
        Command::Sweep { run, start, end } => {
            let t = run.source.load()?;
            let full = SweepRange::full(t.degree(), run.raw_sign_space)?;
            let range = SweepRange::new(start.unwrap_or(full.start), end.unwrap_or(full.end));
            let started = Instant::now();
            let report = sweep(&t, range, &options(&run))?;
            let params = ReportParams::Sweep {
                start: range.start,
                end: range.end,
            };
            finish(&run, &report, params, started)?;
        }
        Command::Sample { run, n, seed } => {
            let t = run.source.load()?;
            let started = Instant::now();
            let report = sample(&t, n, seed, &options(&run))?;
            finish(&run, &report, ReportParams::Sample { n, seed }, started)?;
        }
        Command::Census {
            degree,
            regular_only,
            long_run,
        } => {
            let r = enumerate_unimodular(degree, regular_only, long_run)?;
            println!("{} ({})", r.orbit_count(), r.symmetric_count());
        }
        Command::Render {
            source,
            signs,
            quadrant,
            no_signs,
            no_curve,
            scale,
            output,
        } => {
            let t = source.load()?;
            let s = SignDistribution::parse(t.degree(), &signs)?;
            let opts = RenderOptions {
                quadrant_only: quadrant,
                show_signs: !no_signs,
                show_curve: !no_curve,
                scale,
                ..Default::default()
            };
            let svg = render_svg(&t, &s, &opts)?;
            match output {
                Some(p) => write_all(&[(p.as_path(), svg)])?,
                None => print!("{svg}"),
            }
        }
        Command::EmitPoly {
            source,
            signs,
            lifting,
            json,
        } => {
            let t = source.load()?;
            let s = SignDistribution::parse(t.degree(), &signs)?;
            let w = match lifting {
                Some(text) => {
                    let w = parse_lifting(t.degree(), &text)?;
                    if !is_certificate(&t, &w) {
                        return Err(Error::NotRegular(
                            "the given lifting does not induce it".into(),
                        ));
                    }
                    w
                }
                None => regular_lifting(&t)
                    .ok_or_else(|| Error::NotRegular("the LP is infeasible".into()))?,
            };
            let p = emit_polynomial(&t, &s, &w)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string(&p).expect("plain data serializes")
                );
            } else {
                println!("{p}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
