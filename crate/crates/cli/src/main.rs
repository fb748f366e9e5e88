use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use vecfield::exact::{fmt_rat, parse_rat, parse_rat_list, MPoly, Rat};
use vecfield::homology::{homology_table, Coefficients, TableOptions, DEFAULT_SLICE_CAP};
use vecfield::liealg::AlgebraDescriptor;
use vecfield::pbw::{hilbert_report, partial_sum_polynomial};
use vecfield::spanning::{
    find_good_shift, phi, span_certificate, spanning_generators, SearchConfig, DEFAULT_PHI_BOUND,
};
use vecfield::specht::{closure_basis, tspace_series, variables};
use vecfield::tensormod::{
    decompose_coinduced, decomposition_graded_dim, weight_support, ModuleDescriptor,
};
use vecfield::Error;

const EXIT_VERIFY: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "vecfield",
    version,
    about = "Exact computations with polynomial vector fields and their modules"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads; serial by default.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(clap::Args, Debug)]
struct ModuleArgs {
    #[arg(long)]
    r: usize,
    /// Comma-separated rationals, e.g. `1/2,0`.
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long, allow_hyphen_values = true)]
    mu: String,
}

impl ModuleArgs {
    fn parse(&self) -> Result<(Vec<Rat>, Vec<Rat>), Error> {
        let lambda = parse_rat_list(&self.lambda)?;
        let mu = parse_rat_list(&self.mu)?;
        if lambda.len() != self.r || mu.len() != self.r {
            return Err(Error::DimensionMismatch(format!(
                "--r {} needs {} entries in --lambda and --mu, got {} and {}",
                self.r,
                self.r,
                lambda.len(),
                mu.len()
            )));
        }
        Ok((lambda, mu))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The Newton determinant as a polynomial in N.
    Phi {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = DEFAULT_PHI_BOUND)]
        bound: usize,
    },
    /// Search for a shift N with a certified graded basis.
    Shift {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 6)]
        bound: u32,
        #[arg(long, default_value_t = 8)]
        cutoff: u32,
    },
    /// Finite spanning set with its rank certificate.
    Span {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 6)]
        bound: u32,
        #[arg(long, default_value_t = 10)]
        cutoff: u32,
        /// Use only the letters e_{kd}.
        #[arg(long, default_value_t = 1)]
        d: u32,
    },
    /// Associated graded presentation, Gröbner basis and Hilbert series.
    Hilbert {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 6)]
        bound: u32,
        #[arg(long, default_value_t = 12)]
        cutoff: u32,
    },
    /// Weight-sliced Chevalley–Eilenberg homology table.
    Homology {
        /// `W:n`, `L<d>:n` or `D:n`.
        #[arg(long)]
        algebra: String,
        /// `trivial` or `T:<lambda>:<mu>`.
        #[arg(long, default_value = "trivial")]
        coeffs: String,
        #[arg(long)]
        pmax: usize,
        #[arg(long, allow_hyphen_values = true)]
        wmax: i64,
        /// Largest chain space allowed in one slice.
        #[arg(long, default_value_t = DEFAULT_SLICE_CAP)]
        cap: usize,
    },
    /// Weights of a gl_n irreducible and the coinduced decomposition.
    Weights {
        /// Dominant integer weight, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = 6)]
        wmax: u32,
    },
    /// Substitution closure of polynomials and its dimension series.
    Specht {
        #[arg(long)]
        n: usize,
        /// JSON list of sparse polynomials `[[[exponent], "coeff"], ...]`, inline or a file path.
        #[arg(long)]
        generators: String,
        #[arg(long, default_value_t = 10)]
        cutoff: u32,
    },
}

struct Report {
    json: Value,
    csv: String,
    text: String,
    ok: bool,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable report")
}

fn rats(v: &[Rat]) -> String {
    v.iter().map(fmt_rat).collect::<Vec<_>>().join(",")
}

fn search(bound: u32, cutoff: u32) -> Result<SearchConfig, Error> {
    if cutoff < 1 {
        return Err(Error::InvalidArgument("cutoff must be at least 1".into()));
    }
    Ok(SearchConfig { bound, cutoff })
}

fn run_phi(m: &ModuleArgs, bound: usize) -> Result<Report, Error> {
    let (lambda, mu) = m.parse()?;
    let p = phi(m.r, &lambda, &mu, bound)?;
    let poly = p.to_string();
    Ok(Report {
        json: json!({ "poly": poly }),
        csv: format!("poly\n{poly}\n"),
        text: format!("Phi_{}(N) = {poly}\n", m.r),
        ok: true,
    })
}

fn ranks_csv(ranks: &[vecfield::spanning::WeightRank]) -> String {
    let mut s = String::from("w,vectors,rank,expected\n");
    for r in ranks {
        s.push_str(&format!(
            "{},{},{},{}\n",
            r.w, r.vectors, r.rank, r.expected
        ));
    }
    s
}

fn run_shift(m: &ModuleArgs, bound: u32, cutoff: u32) -> Result<Report, Error> {
    let (lambda, mu) = m.parse()?;
    let cert = find_good_shift(m.r, &lambda, &mu, &search(bound, cutoff)?)?;
    let shift = cert
        .shift
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",");
    Ok(Report {
        text: format!(
            "shift N = ({shift}), verified: {} through weight {}\n",
            cert.verified, cert.cutoff
        ),
        csv: ranks_csv(&cert.ranks),
        ok: cert.verified,
        json: to_value(&cert),
    })
}

fn run_span(m: &ModuleArgs, bound: u32, cutoff: u32, d: u32) -> Result<Report, Error> {
    let (lambda, mu) = m.parse()?;
    if d == 0 {
        return Err(Error::InvalidArgument("--d must be at least 1".into()));
    }
    let cert = span_certificate(m.r, &lambda, &mu, d, &search(bound, cutoff)?)?;
    let mut text = format!(
        "{} generators, verified: {} through weight {}\n",
        cert.generators.len(),
        cert.verified,
        cert.cutoff
    );
    for g in &cert.generators {
        text.push_str(&format!(
            "  z^{:?} with {} free letters\n",
            g.exponent, g.free_letters
        ));
    }
    Ok(Report {
        csv: ranks_csv(&cert.ranks),
        text,
        ok: cert.verified,
        json: to_value(&cert),
    })
}

fn run_hilbert(m: &ModuleArgs, bound: u32, cutoff: u32) -> Result<Report, Error> {
    let (lambda, mu) = m.parse()?;
    let desc = ModuleDescriptor::new(lambda.clone(), mu.clone())?;
    let s = spanning_generators(m.r, &lambda, &mu, &search(bound, cutoff)?)?;
    let rep = hilbert_report(&desc, &s, cutoff)?;
    let fit = partial_sum_polynomial(&rep.series, cutoff as usize + 1).ok();
    let mut json = to_value(&rep);
    json["partial_sums"] = match &fit {
        Some(f) => {
            json!({ "poly": f.to_mpoly().to_string(), "degree": f.degree, "c": f.c.to_string(), "from": f.from })
        }
        None => Value::Null,
    };
    let mut csv = String::from("w,predicted,brute_force\n");
    for (w, (p, b)) in rep.predicted.iter().zip(&rep.brute_force).enumerate() {
        csv.push_str(&format!("{w},{p},{b}\n"));
    }
    let mut text = format!(
        "F(t) = {}\nmatches brute force through weight {cutoff}: {}\n",
        rep.series_text, rep.matches
    );
    if let Some(f) = &fit {
        text.push_str(&format!(
            "partial sums: {} (degree {}, c = {})\n",
            f.to_mpoly(),
            f.degree,
            f.c
        ));
    }
    Ok(Report {
        json,
        csv,
        text,
        ok: rep.matches,
    })
}

fn run_homology(
    algebra: &str,
    coeffs: &str,
    pmax: usize,
    wmax: i64,
    cap: usize,
    jobs: Option<usize>,
) -> Result<Report, Error> {
    let alg: AlgebraDescriptor = algebra.parse()?;
    let coeffs: Coefficients = coeffs.parse()?;
    let t = homology_table(&alg, &coeffs, pmax, wmax, &TableOptions { cap, jobs })?;
    let ok = t.d_squared_zero() && t.euler_ok();
    let mut text = format!(
        "H_p({}; {}) for p <= {pmax}, w in {}..={wmax}\n",
        t.algebra, t.coefficients, t.w_min
    );
    for ((p, w), d) in t.nonzero() {
        text.push_str(&format!("  H_{p} at weight {w}: {d}\n"));
    }
    let mut json = to_value(&t);
    json["nonzero"] = t
        .nonzero()
        .into_iter()
        .map(|((p, w), d)| json!({ "p": p, "w": w, "dim": d }))
        .collect();
    json["d_squared_zero"] = json!(t.d_squared_zero());
    json["euler_ok"] = json!(t.euler_ok());
    Ok(Report {
        csv: t.to_csv(),
        text,
        ok,
        json,
    })
}

fn run_weights(lambda: &str, wmax: u32) -> Result<Report, Error> {
    let lambda: Vec<i64> = lambda
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    let n = lambda.len();
    let support = weight_support(&lambda, n)?;
    let parts = decompose_coinduced(&lambda, n)?;
    let dims: Vec<u64> = (0..=wmax)
        .map(|w| decomposition_graded_dim(&parts, w))
        .collect();
    let mut csv = String::from("alpha,multiplicity\n");
    let mut text = format!(
        "V_{lambda:?}: {} weights, dimension {}\n",
        support.len(),
        support.iter().map(|w| w.multiplicity).sum::<usize>()
    );
    for wv in &support {
        let a = wv
            .alpha
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        csv.push_str(&format!("{a},{}\n", wv.multiplicity));
        text.push_str(&format!("  ({a}) x{}\n", wv.multiplicity));
    }
    text.push_str(&format!("graded dimensions of the restriction: {dims:?}\n"));
    let summands: Vec<Value> = parts
        .iter()
        .map(|(d, m)| json!({ "lambda": rats(&d.lambda), "mu": rats(&d.mu), "multiplicity": m }))
        .collect();
    Ok(Report {
        json: json!({ "lambda": lambda, "weights": support, "summands": summands, "graded_dims": dims }),
        csv,
        text,
        ok: true,
    })
}

fn parse_generators(src: &str, n: usize) -> Result<Vec<MPoly>, Error> {
    let body = if src.trim_start().starts_with('[') {
        src.to_string()
    } else {
        std::fs::read_to_string(src)
            .map_err(|e| Error::InvalidArgument(format!("reading {src}: {e}")))?
    };
    let bad = |why: &str| Error::Parse(format!("generators: {why}"));
    let v: Value = serde_json::from_str(&body).map_err(|e| bad(&e.to_string()))?;
    let polys = v
        .as_array()
        .ok_or_else(|| bad("expected a list of polynomials"))?;
    let mut out = Vec::new();
    for p in polys {
        let terms = p
            .as_array()
            .ok_or_else(|| bad("a polynomial is a list of [exponent, coefficient] pairs"))?;
        let mut f = MPoly::with_vars(variables(n));
        for t in terms {
            let pair = t
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| bad("term must be [exponent, coefficient]"))?;
            let e: Vec<u32> =
                serde_json::from_value(pair[0].clone()).map_err(|e| bad(&e.to_string()))?;
            if e.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "exponent {e:?} in {n} variables"
                )));
            }
            let c = match &pair[1] {
                Value::String(s) => parse_rat(s)?,
                Value::Number(x) => parse_rat(&x.to_string())?,
                _ => return Err(bad("coefficient must be a string or an integer")),
            };
            f.add_term(e, c);
        }
        out.push(f);
    }
    Ok(out)
}

fn run_specht(n: usize, generators: &str, cutoff: u32) -> Result<Report, Error> {
    if cutoff < 1 {
        return Err(Error::InvalidArgument("cutoff must be at least 1".into()));
    }
    let gens = parse_generators(generators, n)?;
    let ts = closure_basis(n, &gens, cutoff)?;
    let series = tspace_series(&ts);
    let basis: serde_json::Map<String, Value> = ts
        .graded_basis
        .iter()
        .map(|(w, b)| (w.to_string(), b.iter().map(|f| f.to_string()).collect()))
        .collect();
    let mut csv = String::from("w,dim\n");
    for (w, d) in series.dims.iter().enumerate() {
        csv.push_str(&format!("{w},{d}\n"));
    }
    let text = format!(
        "dimensions through weight {cutoff}: {:?}\nseries: {}\n",
        series.dims,
        series
            .fit_text
            .clone()
            .unwrap_or_else(|| "inconclusive".into())
    );
    Ok(Report {
        json: json!({ "n": n, "series": series, "basis": basis, "splits": ts.splits }),
        csv,
        text,
        ok: true,
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Resource { .. }
        | Error::SearchFailure(_)
        | Error::Bound(_)
        | Error::Inconclusive(_) => EXIT_RESOURCE,
        Error::NotSpanning { .. } => EXIT_VERIFY,
        _ => EXIT_USAGE,
    }
}

fn dispatch(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Phi { module, bound } => run_phi(module, *bound),
        Command::Shift {
            module,
            bound,
            cutoff,
        } => run_shift(module, *bound, *cutoff),
        Command::Span {
            module,
            bound,
            cutoff,
            d,
        } => run_span(module, *bound, *cutoff, *d),
        Command::Hilbert {
            module,
            bound,
            cutoff,
        } => run_hilbert(module, *bound, *cutoff),
        Command::Homology {
            algebra,
            coeffs,
            pmax,
            wmax,
            cap,
        } => run_homology(algebra, coeffs, *pmax, *wmax, *cap, cli.jobs),
        Command::Weights { lambda, wmax } => run_weights(lambda, *wmax),
        Command::Specht {
            n,
            generators,
            cutoff,
        } => run_specht(*n, generators, *cutoff),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let threads = cli.jobs.unwrap_or(1).max(1);
    // a second initialisation only happens in tests; ignore it
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    let report = match dispatch(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report.json).expect("json") + "\n",
        Format::Csv => report.csv,
        Format::Text => report.text,
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, body.as_bytes()),
        None => std::io::stdout().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY)
    }
}
