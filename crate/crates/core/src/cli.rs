//! Command-line front end. `main.rs` only forwards `std::env::args_os` to [`run`].

use crate::algebra::{MPoly, Ring};
use crate::decision::{Decider, Stratum, Target};
use crate::elliptic::{Curve, ResidueMedium, ResidueShort};
use crate::error::{Error, Result};
use crate::estimator::{
    exhaustive_density, igusa_numeric, monte_carlo_density, ratio_string, to_f64, DensityEstimate, RunOptions,
    DEFAULT_BUDGET, SCHEMA_VERSION,
};
use crate::formulas::{
    density_components, density_iso, density_p3_components, density_tors, eta_values, gamma_brute_force,
    gamma_count, igusa_closed_form, twist_probability, validate_prime, w3p, ExactDensity, GammaTable, TwistCount,
};
use crate::moduli::{count_parameter_points_fp, enumerate_parameter_points_fp, ParamFamily};
use crate::padic::least_nonresidue;
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use std::ffi::OsString;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "ecdensity", version, about = "Densities of p-adic elliptic curves with torsion and isogenies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DensityMode {
    Tors,
    Iso,
    Components,
    P3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Formulas,
    Counts,
    Estimator,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Pred {
    Tors3,
    Iso3,
    /// Torsion of order `--ell`.
    Tors,
    /// Torsion of order p.
    Ptors,
    Always,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TwistMode {
    Roots,
    Isogenies,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StratumArg {
    Good,
    SplitMult,
    NonsplitMult,
    Additive,
    Unresolved,
}

impl From<StratumArg> for Stratum {
    fn from(s: StratumArg) -> Stratum {
        match s {
            StratumArg::Good => Stratum::Good,
            StratumArg::SplitMult => Stratum::SplitMult,
            StratumArg::NonsplitMult => Stratum::NonsplitMult,
            StratumArg::Additive => Stratum::Additive,
            StratumArg::Unresolved => Stratum::Unresolved,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact densities.
    Density {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = DensityMode::Tors)]
        mode: DensityMode,
    },
    /// Cross-checks between formulas, brute-force counts and estimates.
    Verify {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 3)]
        k: u32,
        /// Use Monte-Carlo sampling with this many samples instead of exhaustive enumeration.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Counts of GL_2(F_ell) matrices by determinant and trace.
    Gl2 {
        #[arg(long)]
        ell: u64,
    },
    /// Probability that a random quadratic twist has the structure.
    Twist {
        /// Number of rational roots or 3-isogenies.
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = TwistMode::Isogenies)]
        mode: TwistMode,
        #[arg(long)]
        ell: Option<u64>,
        /// Prime; when omitted the residue class of p is assumed compatible with n.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Decides a predicate for one model given modulo p^k.
    Decide {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<i128>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<i128>,
        #[arg(long, allow_hyphen_values = true)]
        a2: Option<i128>,
        #[arg(long, allow_hyphen_values = true)]
        a4: Option<i128>,
        #[arg(long, allow_hyphen_values = true)]
        a6: Option<i128>,
        #[arg(long, default_value_t = 6)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Pred::Tors3)]
        pred: Pred,
        #[arg(long)]
        ell: Option<u64>,
    },
    /// Estimates the density of a predicate over residue models.
    Estimate {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Pred::Tors3)]
        pred: Pred,
        #[arg(long)]
        ell: Option<u64>,
        /// Monte-Carlo sample count; exhaustive enumeration when omitted.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        stratum: Option<StratumArg>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Compares a numerical p-adic integral with its closed form.
    Igusa {
        #[arg(long)]
        p: u64,
        /// Precision K of the numerical sum.
        #[arg(long)]
        k: u32,
        /// Exponent of the product of linear forms.
        #[arg(long)]
        m: u32,
        /// The product has n + 1 distinct linear forms.
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// Exponent of the irreducible quadratic factor.
        #[arg(long, default_value_t = 0)]
        g_exp: u32,
    },
}

/// Rendered output and exit status of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

/// Records produced by a command, plus a human-readable rendering.
struct Report {
    command: &'static str,
    text: String,
    records: Vec<Map<String, Value>>,
    failed: bool,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Report { command, text: String::new(), records: Vec::new(), failed: false }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn record(&mut self, v: Value) {
        if let Value::Object(m) = v {
            self.records.push(m);
        }
    }
}

fn decimal(r: &BigRational) -> String {
    format!("{:.12}", to_f64(r))
}

fn rational_record(name: &str, r: &ExactDensity) -> Value {
    json!({"name": name, "value": ratio_string(r), "decimal": decimal(r)})
}

/// Parses arguments and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => deliver(&report, cli.format, cli.out.as_deref()),
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_USAGE },
    }
}

fn deliver(report: &Report, format: Format, out: Option<&std::path::Path>) -> Outcome {
    let body = render(report, format);
    let code = if report.failed { EXIT_FAILURE } else { EXIT_OK };
    match out {
        Some(path) => match std::fs::write(path, &body) {
            Ok(()) => Outcome { stdout: String::new(), stderr: String::new(), code },
            Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_USAGE },
        },
        None => Outcome { stdout: body, stderr: String::new(), code },
    }
}

fn render(report: &Report, format: Format) -> String {
    let stamp = |m: &Map<String, Value>| {
        let mut m = m.clone();
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert("command".into(), json!(report.command));
        m
    };
    match format {
        Format::Text => report.text.clone(),
        Format::Json => {
            report.records.iter().map(|m| Value::Object(stamp(m)).to_string() + "\n").collect()
        }
        Format::Csv => {
            let rows: Vec<Map<String, Value>> = report.records.iter().map(stamp).collect();
            let mut columns: Vec<String> = Vec::new();
            for r in &rows {
                for key in r.keys() {
                    if !columns.contains(key) {
                        columns.push(key.clone());
                    }
                }
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            let cell = |v: Option<&Value>| match v {
                None | Some(Value::Null) => String::new(),
                Some(Value::String(s)) => s.clone(),
                Some(other) => other.to_string(),
            };
            let _ = w.write_record(&columns);
            for r in &rows {
                let _ = w.write_record(columns.iter().map(|c| cell(r.get(c))));
            }
            String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
        }
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Density { p, mode } => cmd_density(*p, *mode),
        Command::Verify { p, suite, k, samples, seed, jobs, budget } => {
            cmd_verify(*p, *suite, *k, *samples, *seed, RunOptions { budget: *budget, jobs: *jobs })
        }
        Command::Gl2 { ell } => cmd_gl2(*ell),
        Command::Twist { n, mode, ell, p } => cmd_twist(*n, *mode, *ell, *p),
        Command::Decide { p, a, b, a2, a4, a6, k, pred, ell } => {
            cmd_decide(*p, [*a, *b], [*a2, *a4, *a6], *k, target_of(*pred, *ell)?)
        }
        Command::Estimate { p, k, pred, ell, samples, seed, stratum, jobs, budget } => cmd_estimate(
            *p,
            *k,
            target_of(*pred, *ell)?,
            *samples,
            *seed,
            stratum.map(Stratum::from),
            RunOptions { budget: *budget, jobs: *jobs },
        ),
        Command::Igusa { p, k, m, n, g_exp } => cmd_igusa(*p, *k, *m, *n, *g_exp),
    }
}

fn target_of(pred: Pred, ell: Option<u64>) -> Result<Target> {
    Ok(match pred {
        Pred::Tors3 => Target::Torsion3,
        Pred::Iso3 => Target::Isogeny3,
        Pred::Ptors => Target::PTorsion,
        Pred::Always => Target::Always,
        Pred::Tors => Target::EllTorsion(ell.ok_or_else(|| Error::InvalidInput("--pred tors needs --ell".into()))?),
    })
}

fn cmd_density(p: u64, mode: DensityMode) -> Result<Report> {
    validate_prime(p)?;
    let mut r = Report::new("density");
    let push = |r: &mut Report, name: &str, x: &ExactDensity| {
        r.line(format!("{name}: {}  {}", ratio_string(x), decimal(x)));
        let mut rec = rational_record(name, x);
        rec["p"] = json!(p);
        r.record(rec);
    };
    match mode {
        DensityMode::Tors => push(&mut r, "tors", &density_tors(p)?),
        DensityMode::Iso => push(&mut r, "iso", &density_iso(p)?),
        DensityMode::Components => {
            let c = density_components(p)?;
            for (name, x) in [
                ("good", &c.good),
                ("split_mult", &c.split_mult),
                ("nonsplit_mult", &c.nonsplit_mult),
                ("additive", &c.additive),
            ] {
                push(&mut r, name, x);
            }
            push(&mut r, "total", &c.total(p));
        }
        DensityMode::P3 => {
            if p != 3 {
                return Err(Error::InvalidInput("--mode p3 needs --p 3".into()));
            }
            let c = density_p3_components();
            for (name, x) in [
                ("good", &c.good),
                ("additive_nonsingular", &c.additive_nonsingular),
                ("additive_singular", &c.additive_singular),
                ("split_mult_singular", &c.split_mult_singular),
            ] {
                push(&mut r, name, x);
            }
            push(&mut r, "total", &c.total());
        }
    }
    Ok(r)
}

enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn word(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

fn check(r: &mut Report, name: &str, detail: String, status: Status) {
    let word = status.word();
    if let Status::Fail = status {
        r.failed = true;
    }
    r.line(format!("{name}: {detail} {word}"));
    r.record(json!({"check": name, "detail": detail, "status": word}));
}

fn eq_check<T: std::fmt::Display + PartialEq>(r: &mut Report, name: &str, lhs: T, rhs: T) {
    let status = if lhs == rhs { Status::Pass } else { Status::Fail };
    let op = if lhs == rhs { "==" } else { "!=" };
    check(r, name, format!("{lhs} {op} {rhs}"), status);
}

fn cmd_verify(p: u64, suite: Suite, k: u32, samples: Option<u64>, seed: u64, opts: RunOptions) -> Result<Report> {
    validate_prime(p)?;
    let mut r = Report::new("verify");
    let all = suite == Suite::All;
    if all || suite == Suite::Formulas {
        if p == 3 {
            eq_check(&mut r, "p3_components_identity", ratio_string(&density_p3_components().total()), ratio_string(&density_tors(3)?));
        } else {
            let c = density_components(p)?;
            eq_check(&mut r, "components_sum_identity", ratio_string(&c.total(p)), ratio_string(&density_tors(p)?));
            let e = eta_values(p)?;
            eq_check(&mut r, "eta_sum_identity", ratio_string(&(&e.eta1 + &e.eta2 + &e.eta4)), ratio_string(&density_iso(p)?));
        }
    }
    if all || suite == Suite::Counts {
        if p >= 5 {
            let brute = (0..p)
                .flat_map(|a| (0..p).map(move |b| (a, b)))
                .filter(|&(a, b)| {
                    let c = Curve::short_mod(a as i128, b as i128, p);
                    !c.is_singular() && c.has_point_of_order(3)
                })
                .count() as u64;
            let closed = w3p(p)?;
            let closed = if closed.is_integer() { closed.to_integer().to_string() } else { ratio_string(&closed) };
            eq_check(&mut r, "w3p_bruteforce", closed, brute.to_string());
        }
        for (name, fam) in [("x1_3_parameter_count", ParamFamily::X1_3), ("x_3_parameter_count", ParamFamily::X_3)] {
            eq_check(&mut r, name, count_parameter_points_fp(p, fam)?, enumerate_parameter_points_fp(p, fam)?);
        }
        let mut mismatches = 0;
        for s in 1..3 {
            for t in 0..3 {
                mismatches += (gamma_count(3, s, t)? != gamma_brute_force(3, s, t)?) as u32;
            }
        }
        eq_check(&mut r, "gamma_closed_form_ell_3", mismatches, 0);
    }
    if all || suite == Suite::Estimator {
        let mut targets = vec![("bracket", Target::Torsion3, density_tors(p)?)];
        if p >= 5 {
            targets.push(("bracket_iso", Target::Isogeny3, density_iso(p)?));
        }
        for (name, target, exact) in targets {
            let est = match samples {
                Some(n) => monte_carlo_density(p, k, n, seed, target, None, opts),
                None => exhaustive_density(p, k, target, None, opts),
            };
            let label = format!("{name} {}", ratio_string(&exact));
            match est {
                Ok(e) => {
                    let (lo, hi) = e.bracket();
                    let status = if e.contains(&exact) { Status::Pass } else { Status::Fail };
                    let word = status.word();
                    if let Status::Fail = status {
                        r.failed = true;
                    }
                    r.line(format!("{label}: {word} in [{}, {}]", decimal(lo), decimal(hi)));
                    r.record(json!({
                        "check": label,
                        "lower": ratio_string(lo),
                        "upper": ratio_string(hi),
                        "status": word,
                    }));
                }
                Err(Error::BudgetExceeded(msg)) => check(&mut r, &label, msg, Status::Skip),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(r)
}

fn cmd_gl2(ell: u64) -> Result<Report> {
    let table = GammaTable::new(ell)?;
    let mut r = Report::new("gl2");
    r.line(format!("s\\t {}  sum", (0..ell).map(|t| t.to_string()).collect::<Vec<_>>().join(" ")));
    for s in 1..ell {
        let row: Vec<String> = (0..ell).map(|t| table.entries[&(s, t)].to_string()).collect();
        r.line(format!("{s}: {}  {}", row.join(" "), table.row_sum(s)));
        let mut rec = json!({"ell": ell, "s": s, "row_sum": table.row_sum(s)});
        for t in 0..ell {
            rec[format!("t{t}")] = json!(table.entries[&(s, t)]);
        }
        r.record(rec);
    }
    Ok(r)
}

fn cmd_twist(n: u64, mode: TwistMode, ell: Option<u64>, p: Option<u64>) -> Result<Report> {
    let (count, default_p) = match mode {
        TwistMode::Isogenies => (TwistCount::Isogenies, if n == 4 { 7 } else { 5 }),
        TwistMode::Roots => {
            let ell = ell.ok_or_else(|| Error::InvalidInput("--mode roots needs --ell".into()))?;
            // a prime distinct from ell; the answer depends on p only through p mod ell
            (TwistCount::Roots { ell }, if ell == 5 { 7 } else { 5 })
        }
    };
    if let Some(p) = p {
        validate_prime(p)?;
    }
    let x = twist_probability(n, count, p.unwrap_or(default_p))?;
    let mut r = Report::new("twist");
    r.line(ratio_string(&x));
    r.record(json!({"n": n, "p": p, "probability": ratio_string(&x)}));
    Ok(r)
}

fn cmd_decide(p: u64, short: [Option<i128>; 2], medium: [Option<i128>; 3], k: u32, target: Target) -> Result<Report> {
    validate_prime(p)?;
    let decider = Decider::new(target, p)?;
    let decision = match (short, medium) {
        ([Some(a), Some(b)], [None, None, None]) => decider.decide_short(ResidueShort::new(a, b, p, k)?)?,
        ([None, None], [a2, a4, a6]) if p == 3 => decider.decide_medium(ResidueMedium::new(
            a2.unwrap_or(0),
            a4.unwrap_or(0),
            a6.unwrap_or(0),
            3,
            k,
        )?)?,
        _ => {
            return Err(Error::InvalidInput(
                "give --a and --b, or (at p = 3 only) --a2, --a4, --a6".into(),
            ))
        }
    };
    let mut r = Report::new("decide");
    r.line(decision.answer.to_string());
    r.record(json!({
        "p": p,
        "k": k,
        "predicate": target.name(),
        "answer": decision.answer.to_string(),
        "stratum": decision.stratum.name(),
    }));
    Ok(r)
}

fn cmd_estimate(
    p: u64,
    k: u32,
    target: Target,
    samples: Option<u64>,
    seed: u64,
    stratum: Option<Stratum>,
    opts: RunOptions,
) -> Result<Report> {
    validate_prime(p)?;
    let e: DensityEstimate = match samples {
        Some(n) => monte_carlo_density(p, k, n, seed, target, stratum, opts)?,
        None => exhaustive_density(p, k, target, stratum, opts)?,
    };
    let mut r = Report::new("estimate");
    r.line(format!(
        "{} at p = {p}, k = {k}: [{}, {}]  yes {} no {} undecided {}",
        e.predicate,
        ratio_string(&e.lower),
        ratio_string(&e.upper),
        e.tally.yes,
        e.tally.no,
        e.tally.undecided
    ));
    if let Some((lo, hi)) = &e.confidence {
        r.line(format!("4-sigma interval: [{}, {}]", decimal(lo), decimal(hi)));
    }
    r.record(e.to_json());
    Ok(r)
}

/// `g^g_exp * (x * prod_{c < n} (y - c x))^m` with `g = x^2 - nu y^2` irreducible mod p.
fn igusa_integrand(p: u64, m: u32, n: u32, g_exp: u32) -> Result<MPoly> {
    if n as u64 >= p {
        return Err(Error::InvalidInput(format!("at most p = {p} distinct linear forms exist")));
    }
    let v = MPoly::vars(2);
    let (x, y) = (&v[0], &v[1]);
    let mut h = x.clone();
    for c in 0..n as i64 {
        h = h * (y.clone() - x.times(c));
    }
    let nu = least_nonresidue(p) as i64;
    let g = x.pow_u(2) - y.pow_u(2).times(nu);
    Ok(g.pow_u(g_exp) * h.pow_u(m))
}

fn cmd_igusa(p: u64, big_k: u32, m: u32, n: u32, g_exp: u32) -> Result<Report> {
    validate_prime(p)?;
    let f = igusa_integrand(p, m, n, g_exp)?;
    let e = igusa_numeric(p, &f, big_k)?;
    let closed = igusa_closed_form(p, g_exp, m, n, 2)?;
    let ok = e.contains(&closed);
    let mut r = Report::new("igusa");
    r.line(format!(
        "closed {} ({}), numeric {} ({}), tail bound {}: {}",
        ratio_string(&closed),
        decimal(&closed),
        ratio_string(&e.value),
        decimal(&e.value),
        decimal(&e.tail_bound),
        if ok { "PASS" } else { "FAIL" }
    ));
    r.failed = !ok;
    r.record(json!({
        "p": p,
        "precision": big_k,
        "m": m,
        "n": n,
        "g_exp": g_exp,
        "closed_form": ratio_string(&closed),
        "numeric": ratio_string(&e.value),
        "tail_bound": ratio_string(&e.tail_bound),
        "status": if ok { "PASS" } else { "FAIL" },
    }));
    Ok(r)
}
