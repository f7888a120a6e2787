//! Command-line driver: argument parsing, job execution, batch files and
//! JSON output.

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::acceptance;
use crate::cycles::{
    c1, c2_graph, c2_routes, fit_growth, graph_form, growth_orders, Cycle, PrimeLabel,
};
use crate::error::{Error, Result};
use crate::groebner::PolyFp;
use crate::homalg::{biduality_check, ext_dims};
use crate::ktheory::{
    nu2, reciprocity_cycle, tame, verify_prop29, DvrDescriptor, RestrictedProductElement,
    SymbolProduct,
};
use crate::lvalues::{
    bernoulli1, divisibility_search, enumerate_characters, lp_at_zero, search_level,
    OrderConstraint, PrimeOverP, DEFAULT_KAPPA_DISCS,
};
use crate::padic::{PadicRing, Valuation};
use crate::parse::{
    eval_poly, parse_batch, parse_int_list, parse_poly_list, parse_prime_list, parse_series,
    parse_symbols,
};
use crate::powerseries::{HeightOnePrime, SeriesRing, TruncatedSeries};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Parser, Debug)]
#[command(
    name = "iwasawa",
    version,
    about = "Localized Chern classes, tame symbols and L-value searches"
)]
pub struct Cli {
    /// Run every line of a batch file; results come back in file order under `jobs`.
    #[arg(long, global = false)]
    pub batch: Option<String>,
    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
pub struct RingArgs {
    /// Residue characteristic.
    #[arg(long)]
    pub p: u64,
    /// p-adic precision N (coefficients mod p^N).
    #[arg(long)]
    pub prec: u32,
    /// Truncation degree D.
    #[arg(long)]
    pub trunc: u32,
    /// Number of variables.
    #[arg(long, default_value_t = 1)]
    pub vars: usize,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// First Chern class of O[[t]]/(f).
    Chern1 {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Height-one primes separated by `;` (`p` for (p)); defaults to the
        /// Weierstrass support of f when its distinguished part is linear or
        /// Eisenstein.
        #[arg(long, allow_hyphen_values = true)]
        primes: Option<String>,
    },
    /// Second Chern class of O[[t]]/(f1, f2), or of a graph quotient with --vars 2.
    Chern2 {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, allow_hyphen_values = true)]
        f1: String,
        #[arg(long, allow_hyphen_values = true)]
        f2: String,
        /// Height-one primes of O[[t1]] (graph case only).
        #[arg(long, allow_hyphen_values = true)]
        primes: Option<String>,
    },
    /// Tame symbol at a height-one prime.
    Tame {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, allow_hyphen_values = true)]
        symbol: String,
        /// The prime: `p` or a distinguished polynomial.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// nu_2 of a symbol placed diagonally at the listed primes.
    Nu2 {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, allow_hyphen_values = true)]
        symbol: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Characteristic symbols against the second Chern class.
    Prop29 {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, allow_hyphen_values = true)]
        f1: String,
        #[arg(long, allow_hyphen_values = true)]
        f2: String,
    },
    /// nu_2 of the diagonal {f, g} over a complete support.
    Reciprocity {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        primes: String,
    },
    /// Orders of Lambda/(f, omega_n) and the fitted growth invariants.
    Growth {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long = "n-max")]
        n_max: u32,
    },
    /// Ext groups of P/(f) via the Koszul complex over F_p[x, y, z].
    ExtKoszul {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        vars: usize,
        /// Comma-separated polynomials in x, y, z.
        #[arg(long, allow_hyphen_values = true)]
        f: String,
    },
    /// Generalized Bernoulli numbers B_{1,chi} for characters of given modulus and order.
    Bernoulli {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        order: u64,
        /// Also test divisibility at the default prime above p.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Divisibility search over odd characters and imaginary quadratic twists.
    Lsearch {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        conductor: u64,
        #[arg(long)]
        order: u64,
        #[arg(long = "kappa-discs", allow_hyphen_values = true)]
        kappa_discs: Option<String>,
    },
    /// Run the bundled acceptance suite.
    Selftest {
        #[arg(long, default_value_t = acceptance::DEFAULT_SEED)]
        seed: u64,
    },
}

fn series_ring(r: &RingArgs) -> Result<SeriesRing> {
    SeriesRing::new(&PadicRing::new(r.p, r.prec)?, r.vars, r.trunc)
}

fn primes_of(ring: &SeriesRing, text: &str) -> Result<Vec<HeightOnePrime>> {
    parse_prime_list(text)?
        .into_iter()
        .map(|e| match e {
            None => Ok(HeightOnePrime::P),
            Some(e) => HeightOnePrime::distinguished(eval_poly(ring.base(), &e)?),
        })
        .collect()
}

fn symbol_of(ring: &SeriesRing, text: &str) -> Result<SymbolProduct> {
    SymbolProduct::from_parsed(ring, &parse_symbols(text)?)
}

fn weierstrass_support(f: &TruncatedSeries) -> Result<Vec<HeightOnePrime>> {
    let w = f.weierstrass_prepare()?;
    let mut out = Vec::new();
    if w.mu > 0 {
        out.push(HeightOnePrime::P);
    }
    if w.lambda() > 0 {
        let g = &w.distinguished;
        let eisenstein = g.coeff(0).valuation() == Valuation::Finite(1);
        if w.lambda() > 1 && !eisenstein {
            return Err(Error::invalid(format!(
                "cannot certify {} as prime; pass the support with --primes",
                g.canonical_string("t")
            )));
        }
        out.push(HeightOnePrime::distinguished(w.distinguished)?);
    }
    Ok(out)
}

fn ring_json(r: &RingArgs) -> Value {
    json!({"p": r.p, "prec": r.prec, "trunc": r.trunc, "vars": r.vars})
}

/// Execute one subcommand, returning its JSON payload.
pub fn execute(cmd: &Command) -> Result<Value> {
    Ok(match cmd {
        Command::Chern1 { ring, f, primes } => {
            let r = series_ring(ring)?;
            let f = parse_series(&r, f)?;
            let primes = match primes {
                Some(t) => primes_of(&r, t)?,
                None => weierstrass_support(&f)?,
            };
            let w = f.weierstrass_prepare()?;
            json!({
                "ring": ring_json(ring),
                "cycle": Cycle::to_json(&c1(&f, &primes)?),
                "mu": w.mu,
                "lambda": w.lambda(),
            })
        }
        Command::Chern2 {
            ring,
            f1,
            f2,
            primes,
        } => {
            let r = series_ring(ring)?;
            let g1 = parse_series(&r, f1)?;
            let g2 = parse_series(&r, f2)?;
            match ring.vars {
                1 => {
                    let routes = c2_routes(&g1, &g2)?;
                    let cycle = crate::cycles::c2_cycle(&g1, &g2)?;
                    json!({
                        "ring": ring_json(ring),
                        "cycle": Cycle::to_json(&cycle),
                        "routes": {"smith": routes.snf, "resultant": routes.resultant, "symbol": routes.symbol},
                    })
                }
                2 => {
                    let phi = graph_form(&g1)?;
                    let r1 = phi.ring().clone();
                    let primes = match primes {
                        Some(t) => primes_of(&r1, t)?,
                        None => {
                            let pulled = g2.substitute(&[r1.var(0)?, phi.clone()])?;
                            weierstrass_support(&pulled)?
                        }
                    };
                    json!({
                        "ring": ring_json(ring),
                        "cycle": Cycle::to_json(&c2_graph(&phi, &g2, &primes)?),
                    })
                }
                _ => return Err(Error::invalid("chern2 supports one or two variables")),
            }
        }
        Command::Tame { ring, symbol, at } => {
            let r = series_ring(ring)?;
            let s = symbol_of(&r, symbol)?;
            let primes = primes_of(&r, at)?;
            let [prime] = primes.as_slice() else {
                return Err(Error::invalid("tame needs exactly one prime"));
            };
            let dvr = DvrDescriptor::new(&r, prime.clone())?;
            let v = tame(&s, &dvr)?;
            json!({
                "ring": ring_json(ring),
                "prime": prime.label(),
                "residue": v.to_json(),
                "ord": v.ord()?,
            })
        }
        Command::Nu2 { ring, symbol, at } => {
            let r = series_ring(ring)?;
            let s = symbol_of(&r, symbol)?;
            let primes = primes_of(&r, at)?;
            let element = RestrictedProductElement::diagonal(&r, &s, &primes);
            json!({
                "ring": ring_json(ring),
                "element": element.to_json(),
                "cycle": Cycle::to_json(&nu2(&element, &[PrimeLabel::closed_point()])?),
            })
        }
        Command::Prop29 { ring, f1, f2 } => {
            let r = series_ring(ring)?;
            let g1 = parse_series(&r, f1)?;
            let g2 = parse_series(&r, f2)?;
            let mut out = verify_prop29(&g1, &g2, &[PrimeLabel::closed_point()])?.to_json();
            out["ring"] = ring_json(ring);
            out
        }
        Command::Reciprocity { ring, f, g, primes } => {
            let r = series_ring(ring)?;
            let f = parse_series(&r, f)?;
            let g = parse_series(&r, g)?;
            let primes = primes_of(&r, primes)?;
            let cycle = reciprocity_cycle(&f, &g, &primes)?;
            json!({
                "ring": ring_json(ring),
                "cycle": Cycle::to_json(&cycle),
                "vanishes": cycle.is_zero(),
            })
        }
        Command::Growth { ring, f, n_max } => {
            let r = series_ring(ring)?;
            let f = parse_series(&r, f)?;
            let w = f.weierstrass_prepare()?;
            let e = growth_orders(&f, *n_max)?;
            let fit = match fit_growth(&e, ring.p) {
                Ok(fit) => json!({"mu": fit.mu, "lambda": fit.lambda, "nu": fit.nu, "n0": fit.n0}),
                Err(Error::NoStableFit) => Value::Null,
                Err(Error::InvalidInput(_)) => Value::Null,
                Err(e) => return Err(e),
            };
            json!({
                "ring": ring_json(ring),
                "orders": e,
                "fit": fit,
                "weierstrass": {"mu": w.mu, "lambda": w.lambda()},
            })
        }
        Command::ExtKoszul { p, vars, f } => {
            let seq = parse_poly_list(f)?
                .iter()
                .map(|e| PolyFp::from_expr(*p, *vars, e))
                .collect::<Result<Vec<_>>>()?;
            crate::groebner::Ring::new(*p, *vars)?;
            let report = ext_dims(&seq)?;
            let bidual = if seq.len() == *vars {
                Some(biduality_check(&seq)?)
            } else {
                None
            };
            let mut out = report.to_json();
            out["biduality"] = json!(bidual);
            out["euler_characteristic"] = json!(report.euler_characteristic());
            out
        }
        Command::Bernoulli { modulus, order, p } => {
            let chars = enumerate_characters(*modulus, OrderConstraint::Exact(*order))?;
            let prime = match p {
                Some(p) => Some(PrimeOverP::new(*p, search_level(*p, *order))?),
                None => None,
            };
            let mut rows = Vec::new();
            for chi in &chars {
                let b = bernoulli1(chi)?;
                let mut row = json!({"character": chi.to_json(), "value": b.to_json()});
                if let Some(prime) = &prime {
                    let divisible = if chi.is_odd() {
                        lp_at_zero(&chi.with_level(prime.level())?, prime)?.bernoulli_divisible
                    } else {
                        prime.divides(&b)?
                    };
                    row["divisible"] = json!(divisible);
                }
                rows.push(row);
            }
            json!({
                "modulus": modulus,
                "order": order,
                "prime": prime.as_ref().map(|p| p.to_json()),
                "characters": rows,
            })
        }
        Command::Lsearch {
            p,
            conductor,
            order,
            kappa_discs,
        } => {
            let discs = match kappa_discs {
                Some(t) => parse_int_list(t)?,
                None => DEFAULT_KAPPA_DISCS.to_vec(),
            };
            let report = divisibility_search(*p, *conductor, *order, &discs)?;
            let mut out = report.to_json();
            out["kappa_discs"] = json!(discs);
            out
        }
        Command::Selftest { seed } => {
            let results = acceptance::run_all(*seed);
            json!({
                "seed": seed,
                "criteria": results.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                "passed": results.iter().filter(|r| r.passed).count(),
                "total": results.len(),
            })
        }
    })
}

/// Whether a selftest payload reports every criterion as passing.
fn selftest_ok(v: &Value) -> bool {
    v["passed"] == v["total"]
}

fn wrap(payload: Value, command: &str) -> Value {
    json!({"schema_version": SCHEMA_VERSION, "command": command, "result": payload})
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Chern1 { .. } => "chern1",
        Command::Chern2 { .. } => "chern2",
        Command::Tame { .. } => "tame",
        Command::Nu2 { .. } => "nu2",
        Command::Prop29 { .. } => "prop29",
        Command::Reciprocity { .. } => "reciprocity",
        Command::Growth { .. } => "growth",
        Command::ExtKoszul { .. } => "ext-koszul",
        Command::Bernoulli { .. } => "bernoulli",
        Command::Lsearch { .. } => "lsearch",
        Command::Selftest { .. } => "selftest",
    }
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({"exit_code": e.exit_code(), "message": e.to_string()});
    if let Error::Parse { line, column, .. } = e {
        v["line"] = json!(line);
        v["column"] = json!(column);
    }
    v
}

/// Run one job and wrap its outcome; the exit code is that of the job.
fn run_job(cmd: &Command) -> (i32, Value) {
    match execute(cmd) {
        Ok(v) => {
            let code = if matches!(cmd, Command::Selftest { .. }) && !selftest_ok(&v) {
                2
            } else {
                0
            };
            (code, wrap(v, command_name(cmd)))
        }
        Err(e) => (
            e.exit_code(),
            json!({"command": command_name(cmd), "error": error_json(&e)}),
        ),
    }
}

fn run_batch(path: &str) -> Result<(i32, Value)> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {path}: {e}")))?;
    let lines = parse_batch(&text)?;
    let mut jobs = Vec::with_capacity(lines.len());
    for l in &lines {
        let mut argv = vec!["iwasawa".to_string()];
        argv.extend(l.args());
        let cli = Cli::try_parse_from(&argv).map_err(|e| Error::Parse {
            line: l.line,
            column: l.tokens[0].column,
            message: e.kind().to_string(),
        })?;
        let cmd = cli.command.ok_or_else(|| Error::Parse {
            line: l.line,
            column: 1,
            message: "missing subcommand".into(),
        })?;
        jobs.push((l, cmd));
    }
    let results: Vec<(i32, Value)> = jobs
        .par_iter()
        .map(|(l, cmd)| {
            let (code, mut v) = run_job(cmd);
            if let Some(err) = v.get_mut("error") {
                err["line"] = json!(l.line);
            }
            v["line"] = json!(l.line);
            v["exit_code"] = json!(code);
            (code, v)
        })
        .collect();
    let code = results.iter().map(|r| r.0).find(|&c| c != 0).unwrap_or(0);
    Ok((
        code,
        json!({"schema_version": SCHEMA_VERSION, "jobs": results.into_iter().map(|r| r.1).collect::<Vec<_>>()}),
    ))
}

fn emit(v: &Value, out: Option<&str>) -> Result<()> {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n";
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Error::invalid(format!("cannot write {path}: {e}")))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::invalid(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Parse `argv`, run, print, and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (code, value) = match (&cli.batch, &cli.command) {
        (Some(path), None) => match run_batch(path) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e}");
                return e.exit_code();
            }
        },
        (None, Some(cmd)) => {
            let (code, v) = run_job(cmd);
            if let Some(err) = v.get("error") {
                eprintln!("error: {}", err["message"].as_str().unwrap_or_default());
                return code;
            }
            (code, v)
        }
        (Some(_), Some(_)) => {
            eprintln!("error: --batch cannot be combined with a subcommand");
            return 1;
        }
        (None, None) => {
            eprintln!("error: a subcommand or --batch is required");
            return 1;
        }
    };
    if let Err(e) = emit(&value, cli.out.as_deref()) {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    code
}
