use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use lehmer_nib::fixtures::Fixtures;
use lehmer_nib::report::{
    analyze, exit_code_for, verify_exit_code, verify_table, Enumerator, Only, ReportRecord, RowStatus,
    DEFAULT_ORBIT_BOUND, EXIT_FACTORING, EXIT_OK, EXIT_USAGE,
};
use lehmer_nib::Error;

#[derive(Parser)]
#[command(name = "lehmer-nib", version, about = "Normal integral bases of Lehmer's cyclic quintic fields")]
struct Cli {
    /// Emit line-delimited JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,

    /// Known prime factors of Δ_n, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    factor_hint: Vec<BigInt>,

    /// Largest |k| searched when matching generators up to units.
    #[arg(long, global = true, default_value_t = DEFAULT_ORBIT_BOUND)]
    orbit_bound: u32,

    /// Fixture file to use instead of the built-in one.
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants, integral basis and normal integral basis generator of K_n.
    Analyze {
        #[arg(allow_hyphen_values = true)]
        n: BigInt,
    },
    /// List the generators ±σ^ℓ(ξ_k) for k in a range.
    Enumerate {
        #[arg(allow_hyphen_values = true)]
        n: BigInt,
        /// Inclusive range `a..b`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        k: (i64, i64),
    },
    /// Check the built-in reference values.
    VerifyTable {
        /// `n=<int>`, `table1`, `table2`, `examples` or `bases`.
        #[arg(long)]
        only: Option<Only>,
    },
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let a = a.trim().parse().map_err(|_| format!("bad bound {a:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad bound {b:?}"))?;
    Ok((a, b))
}

fn load_fixtures(path: &Option<PathBuf>) -> Result<Fixtures, String> {
    match path {
        None => Ok(Fixtures::embedded()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            Fixtures::from_json(&text).map_err(|e| e.to_string())
        }
    }
}

fn report_error(e: &Error) -> i32 {
    eprintln!("error: {e}");
    exit_code_for(e)
}

fn print_record(out: &mut impl Write, rec: &ReportRecord) -> io::Result<()> {
    let fields: Vec<(&str, String)> = vec![
        ("n", rec.n.clone()),
        ("status", rec.status.clone()),
        ("δ", rec.delta.clone()),
        ("Δ", rec.big_delta.clone()),
        (
            "Δ factored",
            rec.factorization
                .iter()
                .map(|f| if f.exponent == "1" { f.prime.clone() } else { format!("{}^{}", f.prime, f.exponent) })
                .collect::<Vec<_>>()
                .join(" * "),
        ),
        ("a, b, c, d, e", format!("{}, {}, {}, {}, {}", rec.a, rec.b, rec.c, rec.d, rec.e)),
        ("conductor", rec.conductor.clone()),
        ("field disc", rec.field_disc.clone()),
    ];
    for (k, v) in &fields {
        writeln!(out, "{k:<14} {v}")?;
    }
    if let (Some(u), Some(t)) = (&rec.u, &rec.t) {
        writeln!(out, "{:<14} {u}", "u")?;
        writeln!(out, "{:<14} {t}", "t")?;
    }
    if let Some(basis) = &rec.integral_basis {
        for (i, v) in basis.iter().enumerate() {
            let label = if i == 0 { "integral basis" } else { "" };
            writeln!(out, "{label:<14} [{}]", v.join(", "))?;
        }
    }
    if let (Some(beta), Some(m), Some(d)) = (&rec.beta, &rec.m, &rec.denom) {
        writeln!(out, "{:<14} ({})  m = {m}  denominator = {d}", "β", beta.join(", "))?;
    }
    if let Some(g) = &rec.nib_generator {
        writeln!(out, "{:<14} [{}]", "generator", g.join(", "))?;
        writeln!(out, "{:<14} {}", "certified", rec.certified)?;
    }
    if let Some(w) = &rec.orbit_witness {
        writeln!(out, "{:<14} ({}, {}, {})", "orbit witness", w.sign, w.ell, w.k)?;
    }
    if let Some(m) = &rec.message {
        writeln!(out, "{:<14} {m}", "note")?;
    }
    Ok(())
}

fn run(cli: Cli) -> io::Result<i32> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let fixtures = match load_fixtures(&cli.fixtures) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(EXIT_USAGE);
        }
    };
    let code = match cli.command {
        Command::Analyze { n } => match analyze(&n, &cli.factor_hint, cli.orbit_bound, Some(&fixtures)) {
            Ok(rec) => {
                if cli.json {
                    writeln!(out, "{}", serde_json::to_string(&rec).expect("serializable"))?;
                } else {
                    print_record(&mut out, &rec)?;
                }
                if let Some(m) = rec.message.as_ref().filter(|_| cli.json && rec.status == "wild") {
                    eprintln!("{m}");
                }
                rec.exit_code()
            }
            Err(e) => report_error(&e),
        },
        Command::Enumerate { n, k: (a, b) } => match Enumerator::new(&n, &cli.factor_hint) {
            Ok(en) => {
                if !cli.json && a <= b {
                    writeln!(out, "{:>4} {:>3} {:>6}  {:<9} generator", "sign", "ℓ", "k", "certified")?;
                }
                for line in en.lines(a, b) {
                    if cli.json {
                        writeln!(out, "{}", serde_json::to_string(&line).expect("serializable"))?;
                    } else {
                        writeln!(
                            out,
                            "{:>4} {:>3} {:>6}  {:<9} [{}]",
                            line.sign,
                            line.ell,
                            line.k,
                            line.certified,
                            line.generator.join(", ")
                        )?;
                    }
                }
                EXIT_OK
            }
            Err(e) => report_error(&e),
        },
        Command::VerifyTable { only } => {
            let rows = verify_table(&fixtures, only.as_ref(), cli.orbit_bound);
            let width = rows.iter().map(|r| r.label.len()).max().unwrap_or(0);
            for r in &rows {
                if cli.json {
                    writeln!(out, "{}", serde_json::to_string(r).expect("serializable"))?;
                } else {
                    let status = match r.status {
                        RowStatus::Pass => "PASS",
                        RowStatus::Erratum => "ERRATUM",
                        RowStatus::Fail => "FAIL",
                    };
                    writeln!(out, "{:<width$}  {status:<7}  {}", r.label, r.detail)?;
                }
            }
            if !cli.json {
                let count = |s: RowStatus| rows.iter().filter(|r| r.status == s).count();
                writeln!(
                    out,
                    "{} rows: {} pass, {} erratum, {} fail",
                    rows.len(),
                    count(RowStatus::Pass),
                    count(RowStatus::Erratum),
                    count(RowStatus::Fail)
                )?;
            }
            verify_exit_code(&rows)
        }
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { EXIT_OK as u8 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FACTORING as u8 + 1)
        }
    }
}
