use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cyclodescent::checks::{Check, Status};
use cyclodescent::descent::descent_class;
use cyclodescent::gamma::project_fake;
use cyclodescent::oracle_ff::{run_oracle, OracleConfig};
use cyclodescent::suites::{run_verify, VerifyConfig};
use cyclodescent::textio::{parse_curve, parse_divisors};
use cyclodescent::{
    ClassVerdict, Curve, Error, FakeVerdict, GammaClass, GammaElem, Membership, Modulus, Poly,
};
use num_bigint::BigUint;

/// Explicit descent on cyclic covers y^p = f(x).
#[derive(Parser, Debug)]
#[command(name = "cyclodescent", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug)]
struct Opts {
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Primes tried per p-th power test.
    #[arg(long, global = true, default_value_t = cyclodescent::etale::DEFAULT_PRIME_BUDGET)]
    prime_budget: usize,
    /// Extra primes added to the support of every class.
    #[arg(long, global = true, value_delimiter = ',')]
    support: Vec<u64>,
    /// Samples per suite (verify: 100, oracle: 12).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Genus, radical, factor fields and mu_p(L) of a curve.
    Analyze { curve: PathBuf },
    /// Descent images and class comparisons of the listed divisors.
    Descend { curve: PathBuf, divisors: PathBuf },
    /// Randomized identity suites over Q or Q(zeta_p).
    Verify { curve: PathBuf },
    /// Exhaustive checks over a small prime field.
    Oracle { curve: PathBuf },
}

fn compact(f: &Poly, var: &str) -> String {
    f.pretty(var).replace(' ', "")
}

fn gamma_line(g: &GammaElem) -> String {
    format!("delta = {} ; n = {}", compact(g.delta().rep(), "T"), g.n())
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("{}: {e}", path.display()),
    })
}

fn load_curve(path: &Path) -> Result<Curve, Error> {
    parse_curve(&read(path)?)
}

fn header(out: &mut String, cmd: &str, opts: &Opts, samples: Option<usize>) {
    let support: Vec<String> = opts.support.iter().map(u64::to_string).collect();
    write!(
        out,
        "# {cmd} seed={} prime_budget={} support=[{}]",
        opts.seed,
        opts.prime_budget,
        support.join(",")
    )
    .unwrap();
    if let Some(n) = samples {
        write!(out, " samples={n}").unwrap();
    }
    out.push('\n');
}

fn analyze(path: &Path, opts: &Opts, out: &mut String) -> Result<bool, Error> {
    let curve = load_curve(path)?;
    let alg = curve.algebra();
    header(out, "analyze", opts, None);
    writeln!(out, "base: {}", curve.base()).unwrap();
    writeln!(out, "p: {}", curve.p()).unwrap();
    writeln!(out, "f: {}", compact(curve.f(), "x")).unwrap();
    writeln!(
        out,
        "c: {}",
        compact(&Poly::constant(curve.c().clone()), "x")
    )
    .unwrap();
    writeln!(out, "f0: {}", compact(alg.f0(), "x")).unwrap();
    let parts: Vec<String> = alg
        .sqfree()
        .parts
        .iter()
        .map(|(g, e)| match e {
            1 => format!("({})", compact(g, "x")),
            _ => format!("({})^{e}", compact(g, "x")),
        })
        .collect();
    writeln!(out, "parts: {}", parts.join(" ")).unwrap();
    let factors = match alg.field_factors() {
        Ok(fs) => fs
            .iter()
            .map(|g| compact(g, "x"))
            .collect::<Vec<_>>()
            .join(", "),
        Err(e) => format!("unavailable ({e})"),
    };
    let mu = match alg.mu_p_list() {
        Ok(l) => l.len().to_string(),
        Err(e) => format!("unavailable ({e})"),
    };
    writeln!(
        out,
        "genus: {}, factors: {factors}, |mu_p(L)| = {mu}",
        curve.genus()
    )
    .unwrap();
    Ok(true)
}

fn membership(m: &Membership) -> String {
    match m {
        Membership::Yes { theta, c } => {
            format!("trivial(theta = {}, c = {c})", compact(theta.rep(), "T"))
        }
        Membership::No(r) => format!(
            "nontrivial({})",
            r.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
        Membership::Inconclusive => "inconclusive".into(),
    }
}

fn fake(v: &FakeVerdict) -> &'static str {
    match v {
        FakeVerdict::Trivial { .. } => "trivial",
        FakeVerdict::Nontrivial(_) => "nontrivial",
        FakeVerdict::Inconclusive => "inconclusive",
    }
}

fn descend(curve: &Path, divisors: &Path, opts: &Opts, out: &mut String) -> Result<bool, Error> {
    let curve = load_curve(curve)?;
    let ds = parse_divisors(&curve, &read(divisors)?)?;
    let support: Vec<BigUint> = opts.support.iter().map(|&l| BigUint::from(l)).collect();
    let (budget, seed) = (opts.prime_budget, opts.seed);
    header(out, "descend", opts, None);
    let mut classes: Vec<(usize, GammaClass)> = Vec::new();
    for (i, d) in ds.iter().enumerate() {
        let i = i + 1;
        let g = cyclodescent::descent::descent_elem(d)?;
        if d.degree() != 0 {
            writeln!(
                out,
                "D{i}: {} ; degree {}: no class",
                gamma_line(&g),
                d.degree()
            )
            .unwrap();
            continue;
        }
        let class = descent_class(d, Modulus::ChiIota)?.with_support(&support);
        let f = project_fake(&g).is_trivial(class.support(), budget, seed)?;
        let e = class.is_trivial(budget, seed)?;
        let chi = descent_class(d, Modulus::ChiOnly)?
            .with_support(&support)
            .is_trivial(budget, seed)?;
        writeln!(
            out,
            "D{i}: {} ; fake: {} ; explicit: {} ; mod chi: {}",
            gamma_line(&g),
            fake(&f),
            membership(&e),
            membership(&chi)
        )
        .unwrap();
        classes.push((i, class));
    }
    for (a, (i, ci)) in classes.iter().enumerate() {
        for (j, cj) in &classes[a + 1..] {
            let v = match ci.class_eq(cj, budget, seed)? {
                ClassVerdict::Equal { theta, c } => {
                    membership(&Membership::Yes { theta, c }).replacen("trivial", "equal", 1)
                }
                ClassVerdict::Distinct(r) => {
                    membership(&Membership::No(r)).replacen("nontrivial", "distinct", 1)
                }
                ClassVerdict::Inconclusive => "inconclusive".into(),
            };
            writeln!(out, "class_eq D{i} D{j}: {v}").unwrap();
        }
    }
    Ok(true)
}

fn emit_checks(checks: &[Check], out: &mut String) -> bool {
    for c in checks {
        writeln!(out, "{c}").unwrap();
    }
    let fails = checks.iter().filter(|c| c.status == Status::Fail).count();
    writeln!(out, "SUMMARY {} checks, {fails} failed", checks.len()).unwrap();
    fails == 0
}

fn verify(path: &Path, opts: &Opts, out: &mut String) -> Result<bool, Error> {
    let curve = load_curve(path)?;
    let cfg = VerifyConfig {
        seed: opts.seed,
        samples: opts.samples.unwrap_or(VerifyConfig::default().samples),
        prime_budget: opts.prime_budget,
    };
    let checks = run_verify(&curve, &cfg)?;
    header(out, "verify", opts, Some(cfg.samples));
    Ok(emit_checks(&checks, out))
}

fn oracle(path: &Path, opts: &Opts, out: &mut String) -> Result<bool, Error> {
    let curve = load_curve(path)?;
    let mut cfg = OracleConfig {
        seed: opts.seed,
        ..OracleConfig::default()
    };
    cfg.samples = opts.samples.unwrap_or(cfg.samples);
    let checks = run_oracle(&curve, &cfg)?;
    header(out, "oracle", opts, Some(cfg.samples));
    Ok(emit_checks(&checks, out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = &cli.opts;
    let mut out = String::new();
    let result = match &cli.command {
        Command::Analyze { curve } => analyze(curve, opts, &mut out),
        Command::Descend { curve, divisors } => descend(curve, divisors, opts, &mut out),
        Command::Verify { curve } => verify(curve, opts, &mut out),
        Command::Oracle { curve } => oracle(curve, opts, &mut out),
    };
    let passed = match result {
        Ok(passed) => passed,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &opts.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &out) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{out}"),
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(status: Status) -> Check {
        Check {
            name: "x",
            instance: "F5".into(),
            status,
            detail: String::new(),
        }
    }

    #[test]
    fn failed_check_fails_the_run() {
        let mut out = String::new();
        assert!(emit_checks(
            &[check(Status::Pass), check(Status::Skip)],
            &mut out
        ));
        assert!(!emit_checks(
            &[check(Status::Pass), check(Status::Fail)],
            &mut out
        ));
        assert!(out.ends_with("SUMMARY 2 checks, 1 failed\n"));
    }
}
