mod config;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use plength::acm::{acm_extremal_plength, acm_factorizations, Acm, AcmFactorization};
use plength::factor::{extremal_plength, factorizations};
use plength::harness::{acm_verify, ns_verify, VerificationReport};
use plength::m46::{growth_series, GrowthBase, GrowthPoint, GrowthSeries, SmoothElement};
use plength::table1::{verify_table1, Table1Report};
use plength::{ExtExponent, Mode, NumericalSemigroup};

use config::{Format, GlobalArgs, Settings};

#[derive(Parser)]
#[command(name = "plength", version, about = "Extremal p-lengths of factorizations")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Numerical semigroups.
    Ns {
        #[command(subcommand)]
        command: NsCommand,
    },
    /// Arithmetical congruence monoids.
    Acm {
        #[command(subcommand)]
        command: AcmCommand,
    },
}

#[derive(clap::Args)]
struct Gens {
    /// Comma-separated minimal generators.
    #[arg(long, value_delimiter = ',', required = true)]
    gens: Vec<u64>,
}

#[derive(clap::Args)]
struct Functional {
    /// Exponent: a nonnegative integer or `inf`.
    #[arg(long)]
    p: ExtExponent,
    /// `min` or `max`.
    #[arg(long)]
    mode: Mode,
}

#[derive(Subcommand)]
enum NsCommand {
    /// Apéry set with respect to an element (default: the smallest generator).
    Apery {
        #[command(flatten)]
        gens: Gens,
        #[arg(long)]
        m: Option<u64>,
    },
    /// Frobenius number.
    Frobenius {
        #[command(flatten)]
        gens: Gens,
    },
    /// Every factorization of n.
    Factorizations {
        #[command(flatten)]
        gens: Gens,
        #[arg(long)]
        n: u64,
    },
    /// Extremal p-length of n with a witness.
    Plength {
        #[command(flatten)]
        gens: Gens,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        f: Functional,
    },
    /// Run the structural checks.
    Verify {
        #[command(flatten)]
        gens: Gens,
    },
    /// Fit the eventual shape of each length function.
    Table1 {
        #[command(flatten)]
        gens: Gens,
    },
}

#[derive(clap::Args)]
struct Monoid {
    #[arg(long)]
    a: u64,
    #[arg(long)]
    b: u64,
}

#[derive(Subcommand)]
enum AcmCommand {
    /// Atoms up to a bound.
    Atoms {
        #[command(flatten)]
        m: Monoid,
        #[arg(long)]
        bound: u128,
    },
    /// Every factorization of x.
    Factorizations {
        #[command(flatten)]
        m: Monoid,
        #[arg(long)]
        x: u128,
    },
    /// Extremal p-length of x with a witness.
    Plength {
        #[command(flatten)]
        m: Monoid,
        #[arg(long)]
        x: u128,
        #[command(flatten)]
        f: Functional,
    },
    /// Run the structural checks.
    Verify {
        #[command(flatten)]
        m: Monoid,
    },
    /// Values along the powers of x, with a log-log growth fit.
    Growth {
        #[command(flatten)]
        m: Monoid,
        #[arg(long)]
        x: u128,
        #[command(flatten)]
        f: Functional,
        #[arg(long)]
        nmax: u32,
    },
}

/// Rendered command output.
struct Output {
    json: Value,
    csv: Vec<Vec<String>>,
    ok: bool,
    note: Option<String>,
}

impl Output {
    fn new(value: &impl Serialize, csv: Vec<Vec<String>>) -> Result<Self, String> {
        Ok(Self {
            json: serde_json::to_value(value).map_err(|e| e.to_string())?,
            csv,
            ok: true,
            note: None,
        })
    }
}

fn row<I: IntoIterator<Item = T>, T: ToString>(cells: I) -> Vec<String> {
    cells.into_iter().map(|c| c.to_string()).collect()
}

fn semigroup(g: &Gens) -> Result<NumericalSemigroup, String> {
    NumericalSemigroup::new(&g.gens).map_err(|e| e.to_string())
}

fn monoid(m: &Monoid) -> Result<Acm, String> {
    Acm::new(m.a, m.b).map_err(|e| e.to_string())
}

fn acm_parts(f: &AcmFactorization) -> String {
    f.parts().iter().map(|(a, k)| if *k == 1 { a.to_string() } else { format!("{a}^{k}") }).collect::<Vec<_>>().join("*")
}

fn report_rows(r: &VerificationReport) -> Vec<Vec<String>> {
    let mut rows = vec![row(["claim", "status", "checked", "window_lo", "window_hi"])];
    for c in &r.checks {
        let status = serde_json::to_value(c.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let (lo, hi) = c.window.map_or((String::new(), String::new()), |(l, h)| (l.to_string(), h.to_string()));
        rows.push(vec![c.claim.clone(), status, c.checked.to_string(), lo, hi]);
    }
    rows
}

fn table1_rows(r: &Table1Report) -> Vec<Vec<String>> {
    let mut rows = vec![row(["function", "degree", "period", "threshold", "expected_leading", "observed_leading", "pass"])];
    for x in &r.rows {
        rows.push(vec![
            x.function.clone(),
            x.degree.to_string(),
            x.period.to_string(),
            x.threshold.to_string(),
            x.expected_leading.clone().unwrap_or_default(),
            x.observed_leading.clone().unwrap_or_default(),
            x.pass.to_string(),
        ]);
    }
    rows
}

fn run_ns(cmd: &NsCommand, st: &Settings) -> Result<Output, String> {
    let err = |e: plength::Error| e.to_string();
    match cmd {
        NsCommand::Apery { gens, m } => {
            let s = semigroup(gens)?;
            let t = s.apery(m.unwrap_or(s.smallest())).map_err(err)?;
            let mut rows = vec![row(["class", "entry"])];
            rows.extend(t.entries.iter().enumerate().map(|(j, e)| row([j as u64, *e])));
            Output::new(&t, rows)
        }
        NsCommand::Frobenius { gens } => {
            let s = semigroup(gens)?;
            let f = s.frobenius();
            Output::new(&json!({ "generators": s.generators(), "frobenius": f }), vec![row(["frobenius"]), row([f])])
        }
        NsCommand::Factorizations { gens, n } => {
            let s = semigroup(gens)?;
            let all = factorizations(&s, *n, st.run.budget).map_err(err)?;
            let mut rows = vec![s.generators().iter().map(|g| format!("z{g}")).collect()];
            rows.extend(all.iter().map(|z| row(z.exponents())));
            Output::new(&json!({ "n": n, "count": all.len(), "factorizations": all }), rows)
        }
        NsCommand::Plength { gens, n, f } => {
            let s = semigroup(gens)?;
            let r = extremal_plength(&s, *n, f.p, f.mode).map_err(err)?;
            let witness = r.witness.exponents().iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
            let rows = vec![
                row(["n", "p", "mode", "value", "witness"]),
                vec![n.to_string(), f.p.to_string(), f.mode.to_string(), r.value.to_string(), witness],
            ];
            Output::new(&r, rows)
        }
        NsCommand::Verify { gens } => {
            let s = semigroup(gens)?;
            let r = ns_verify(&s, &st.run).map_err(err)?;
            let mut out = Output::new(&r, report_rows(&r))?;
            out.ok = r.all_pass;
            Ok(out)
        }
        NsCommand::Table1 { gens } => {
            let s = semigroup(gens)?;
            let r = verify_table1(&s, st.run.window).map_err(err)?;
            let mut out = Output::new(&r, table1_rows(&r))?;
            out.ok = r.all_pass;
            Ok(out)
        }
    }
}

fn integer_growth(m: &Acm, x: u128, f: &Functional, n_max: u32) -> Result<GrowthSeries, plength::Error> {
    let points = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let xn = x.checked_pow(n).ok_or(plength::Error::Overflow("a power of the base"))?;
            let value = acm_extremal_plength(m, xn, f.p, f.mode)?.value;
            Ok(GrowthPoint { n, value })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GrowthSeries::from_points(GrowthBase::Integer(x), f.p, f.mode, points))
}

fn run_acm(cmd: &AcmCommand, st: &Settings) -> Result<Output, String> {
    let err = |e: plength::Error| e.to_string();
    match cmd {
        AcmCommand::Atoms { m, bound } => {
            let m = monoid(m)?;
            let atoms = m.atoms_up_to(*bound).map_err(err)?;
            let mut rows = vec![row(["atom"])];
            rows.extend(atoms.iter().map(|a| row([a])));
            Output::new(&json!({ "monoid": m, "bound": bound, "atoms": atoms }), rows)
        }
        AcmCommand::Factorizations { m, x } => {
            let m = monoid(m)?;
            let all = acm_factorizations(&m, *x, st.run.budget).map_err(err)?;
            let mut rows = vec![row(["index", "atom", "mult"])];
            for (i, f) in all.iter().enumerate() {
                rows.extend(f.parts().iter().map(|(a, k)| row([i as u128, *a, u128::from(*k)])));
            }
            Output::new(&json!({ "x": x, "count": all.len(), "factorizations": all }), rows)
        }
        AcmCommand::Plength { m, x, f } => {
            let m = monoid(m)?;
            let r = acm_extremal_plength(&m, *x, f.p, f.mode).map_err(err)?;
            let rows = vec![
                row(["x", "p", "mode", "value", "witness"]),
                vec![x.to_string(), f.p.to_string(), f.mode.to_string(), r.value.to_string(), acm_parts(&r.witness)],
            ];
            Output::new(&r, rows)
        }
        AcmCommand::Verify { m } => {
            let m = monoid(m)?;
            let r = acm_verify(&m, &st.run).map_err(err)?;
            let mut out = Output::new(&r, report_rows(&r))?;
            out.ok = r.all_pass;
            Ok(out)
        }
        AcmCommand::Growth { m, x, f, nmax } => {
            let m = monoid(m)?;
            if !m.contains(*x) {
                return Err(plength::Error::NotInMonoid(x.to_string()).to_string());
            }
            let smooth = SmoothElement::from_integer(*x).filter(|_| (m.a(), m.b()) == (4, 6));
            let series = match smooth {
                Some(e) => growth_series(&e, f.p, f.mode, *nmax, st.run.cell_budget),
                None => integer_growth(&m, *x, f, *nmax),
            }
            .map_err(err)?;
            let mut rows = vec![row(["n", "value"])];
            rows.extend(series.points.iter().map(|p| row([u128::from(p.n), p.value])));
            let mut out = Output::new(&series, rows)?;
            out.note = series.fitted_exponent.map(|e| format!("fitted exponent {e:.4}"));
            Ok(out)
        }
    }
}

fn render(out: &Output, format: Format) -> Result<Vec<u8>, String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).map_err(|e| e.to_string())?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
            for r in &out.csv {
                w.write_record(r).map_err(|e| e.to_string())?;
            }
            w.into_inner().map_err(|e| e.to_string())
        }
    }
}

fn fail(msg: &str) -> ExitCode {
    eprintln!("{}", json!({ "error": msg }));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let st = match Settings::resolve(&cli.global) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    if let Some(j) = st.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            return fail(&e.to_string());
        }
    }
    let started = Instant::now();
    let result = match &cli.command {
        Command::Ns { command } => run_ns(command, &st),
        Command::Acm { command } => run_acm(command, &st),
    };
    let out = match result {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let bytes = match render(&out, st.format) {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    let written = match &st.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(&bytes).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        return fail(&e);
    }
    if st.format == Format::Csv {
        if let Some(note) = &out.note {
            eprintln!("{note}");
        }
    }
    if st.timing {
        eprintln!("elapsed {:.3}s", started.elapsed().as_secs_f64());
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
