use std::collections::BTreeSet;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use markov_approx::classify::{brute_force_count, classify, count_solutions, solutions_up_to, Count, Witness};
use markov_approx::qfield::{cf_value, ContinuedFraction, QuadraticSurd};
use markov_approx::spectra::{
    enum_triples, form_from_triple, markov_number_of_word, root_cf, roots, spectrum, tilde_m, Branch, MarkovTriple,
    RootExpansions, SpectrumRow,
};
use markov_approx::sweeps;
use markov_approx::words::{
    apply_exterior, christoffel, limit_prefix, mechanical_prefix, parse_path, path_string, stern_brocot_path,
    AlphabetPair, Exterior, MechanicalVariant, Side, Word,
};

#[derive(Parser)]
#[command(name = "markov-approx", version, about = "Exact tools for |x - p/q| < 1/(3q^2) and the Markov spectrum")]
struct Cli {
    /// CSV instead of JSON (spectrum, triples, forms, roots).
    #[arg(long, global = true)]
    csv: bool,
    /// Add truncated decimal columns with this many digits; debug only, not exact.
    #[arg(long, global = true, value_name = "K")]
    decimal: Option<usize>,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lagrange points sqrt(9m^2-4)/m and tilde points below a bound.
    Spectrum {
        /// Keep rows whose Lagrange point is below this value.
        #[arg(long, default_value = "3", value_parser = parse_surd)]
        below: QuadraticSurd,
        #[arg(long)]
        max_m: BigUint,
    },
    /// Markov triples with largest entry at most the bound.
    Triples {
        #[arg(long)]
        bound: BigUint,
    },
    /// Markov forms of a Markov number.
    Forms {
        #[arg(long)]
        m: BigUint,
    },
    /// Roots theta, Theta of the Markov forms of a Markov number.
    Roots {
        #[arg(long)]
        m: BigUint,
        /// Also give the continued fractions read off the Christoffel word.
        #[arg(long)]
        cf: bool,
    },
    /// Christoffel, mechanical and limit words.
    Words {
        #[command(subcommand)]
        kind: WordsCommand,
    },
    /// Count, tail normal form and side condition.
    Classify {
        #[arg(value_parser = parse_cf)]
        x: ContinuedFraction,
    },
    /// Exact number of solutions, optionally checked by brute force.
    Count {
        #[arg(value_parser = parse_cf)]
        x: ContinuedFraction,
        /// Compare the solutions with q up to this bound against a direct search.
        #[arg(long, value_name = "QMAX")]
        oracle: Option<u64>,
    },
    /// Exact sup of the cut values lambda_n(x).
    Tilde {
        #[arg(value_parser = parse_cf)]
        x: ContinuedFraction,
    },
    /// Run an exhaustive check up to a bound.
    Verify {
        sweep: SweepName,
        /// Depth, length or letter bound, depending on the check.
        #[arg(long)]
        depth: usize,
    },
    /// Direct search for solutions with q up to a bound.
    Oracle {
        #[arg(value_parser = parse_cf)]
        x: ContinuedFraction,
        #[arg(long)]
        qmax: u64,
    },
}

#[derive(Subcommand)]
enum WordsCommand {
    /// Lower Christoffel word with mu letters b and nu letters a.
    Christoffel {
        #[arg(long)]
        mu: u64,
        #[arg(long)]
        nu: u64,
    },
    /// Prefix of the mechanical word of a slope in [0, 1].
    Mechanical {
        /// A surd "(a + b*sqrt(d))/c", an integer, or a continued fraction literal.
        #[arg(long, value_parser = parse_number)]
        slope: QuadraticSurd,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        skew: bool,
    },
    /// Prefix of lim alpha or suffix of lim beta along a path of U/V moves.
    Limit {
        #[arg(long, default_value = "")]
        path: String,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Alpha,
    Beta,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepName {
    Identities,
    EqualValue,
    Lemma31,
    Relbtrenorm,
    BalancedMarkov,
    Lexicographic,
    MarkovCuts,
    Triples,
    IndeterminateCounts,
    IndeterminateStructure,
    Lemma21,
    RoundTrip,
}

impl SweepName {
    fn name(self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }
}

fn parse_cf(s: &str) -> Result<ContinuedFraction, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_surd(s: &str) -> Result<QuadraticSurd, String> {
    if let Ok(n) = s.trim().parse::<BigInt>() {
        return Ok(QuadraticSurd::from_integer(n));
    }
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_number(s: &str) -> Result<QuadraticSurd, String> {
    if s.trim_start().starts_with('[') {
        return parse_cf(s).map(|x| cf_value(&x));
    }
    parse_surd(s)
}

enum Failure {
    Usage(String),
    Domain(String),
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

/// What a command prints.
enum Output {
    Json(serde_json::Value),
    Table { header: Vec<&'static str>, rows: Vec<Vec<String>>, json: serde_json::Value },
}

fn json(v: impl Serialize) -> serde_json::Value {
    serde_json::to_value(v).expect("output types serialize")
}

/// Row of the spectrum, forms and roots tables.
#[derive(Serialize)]
struct FormRow {
    m: String,
    x: String,
    y: String,
    z: String,
    k: String,
    l: String,
    lagrange_point: QuadraticSurd,
    tilde_point: QuadraticSurd,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimal_debug: Option<DecimalPair>,
}

/// Truncated decimals, for reading only; the surd fields are authoritative.
#[derive(Serialize)]
struct DecimalPair {
    lagrange_point: String,
    tilde_point: String,
}

const FORM_HEADER: [&str; 8] = ["m", "x", "y", "z", "k", "l", "lagrange_point", "tilde_point"];
const DECIMAL_HEADER: [&str; 2] = ["lagrange_point_decimal_debug", "tilde_point_decimal_debug"];

fn form_row(r: SpectrumRow, decimal: Option<usize>) -> FormRow {
    FormRow {
        m: r.m.to_string(),
        x: r.triple.x.to_string(),
        y: r.triple.y.to_string(),
        z: r.triple.z.to_string(),
        k: r.k.to_string(),
        l: r.l.to_string(),
        decimal_debug: decimal.map(|k| DecimalPair {
            lagrange_point: r.lagrange_point.to_decimal(k),
            tilde_point: r.tilde_point.to_decimal(k),
        }),
        lagrange_point: r.lagrange_point,
        tilde_point: r.tilde_point,
    }
}

fn form_table(rows: Vec<FormRow>) -> Output {
    let decimal = rows.first().is_some_and(|r| r.decimal_debug.is_some());
    let mut header = FORM_HEADER.to_vec();
    if decimal {
        header.extend(DECIMAL_HEADER);
    }
    let cells = rows
        .iter()
        .map(|r| {
            let mut v = vec![
                r.m.clone(),
                r.x.clone(),
                r.y.clone(),
                r.z.clone(),
                r.k.clone(),
                r.l.clone(),
                r.lagrange_point.to_string(),
                r.tilde_point.to_string(),
            ];
            if let Some(d) = &r.decimal_debug {
                v.extend([d.lagrange_point.clone(), d.tilde_point.clone()]);
            }
            v
        })
        .collect();
    Output::Table { header, rows: cells, json: json(&rows) }
}

fn rows_for_m(m: &BigUint) -> Result<Vec<SpectrumRow>, Failure> {
    let rows: Vec<_> = spectrum(m).into_iter().filter(|r| &r.m == m).collect();
    if rows.is_empty() {
        return Err(Failure::Domain(format!("{m} is not a Markov number")));
    }
    Ok(rows)
}

fn branch_string(path: &[Branch]) -> String {
    path.iter().map(|b| if *b == Branch::Left { 'L' } else { 'R' }).collect()
}

/// Christoffel tree vertices whose word `alpha beta` has Markov number `m`.
fn pairs_with_markov_number(m: &BigUint) -> Vec<(Word, String)> {
    if *m == BigUint::from(1u32) {
        return vec![(Word::b(), String::new())];
    }
    if *m == BigUint::from(2u32) {
        return vec![(Word::a(), String::new())];
    }
    let mut out = Vec::new();
    let mut stack = vec![AlphabetPair::root()];
    while let Some(p) = stack.pop() {
        let q = markov_number_of_word(&p.word());
        if &q > m {
            continue;
        }
        if &q == m {
            out.push((p.word(), path_string(&p.path)));
            continue;
        }
        stack.push(apply_exterior(Exterior::Vbar, &p));
        stack.push(apply_exterior(Exterior::Ubar, &p));
    }
    out
}

#[derive(Serialize)]
struct RootRow {
    m: String,
    k: String,
    l: String,
    theta: QuadraticSurd,
    capital_theta: QuadraticSurd,
    #[serde(skip_serializing_if = "Option::is_none")]
    word: Option<Word>,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cf: Option<RootExpansions>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimal_debug: Option<[String; 2]>,
}

fn roots_cmd(m: &BigUint, with_cf: bool, decimal: Option<usize>) -> Result<Output, Failure> {
    let rows = rows_for_m(m)?;
    let words = if with_cf { pairs_with_markov_number(m) } else { Vec::new() };
    let mut out = Vec::new();
    for r in rows {
        let f = form_from_triple(&r.triple);
        let (theta, capital_theta) = roots(&f);
        let decimal_debug = decimal.map(|k| [theta.to_decimal(k), capital_theta.to_decimal(k)]);
        let base = |word: Option<Word>, path: Option<String>, cf: Option<RootExpansions>| RootRow {
            m: f.m.to_string(),
            k: f.k.to_string(),
            l: f.l.to_string(),
            theta: theta.clone(),
            capital_theta: capital_theta.clone(),
            word,
            path,
            cf,
            decimal_debug: decimal_debug.clone(),
        };
        if with_cf {
            for (w, path) in &words {
                let e = root_cf(&f, w).map_err(domain)?;
                out.push(base(Some(w.clone()), Some(path.clone()), Some(e)));
            }
        } else {
            out.push(base(None, None, None));
        }
    }
    let mut header = vec!["m", "k", "l", "theta", "capital_theta"];
    if with_cf {
        header.extend(["word", "path", "theta_cf", "capital_theta_plus_3_cf"]);
    }
    if decimal.is_some() {
        header.extend(["theta_decimal_debug", "capital_theta_decimal_debug"]);
    }
    let cells = out
        .iter()
        .map(|r| {
            let mut v = vec![r.m.clone(), r.k.clone(), r.l.clone(), r.theta.to_string(), r.capital_theta.to_string()];
            if let (Some(w), Some(p), Some(e)) = (&r.word, &r.path, &r.cf) {
                v.extend([w.to_string(), p.clone(), e.theta.to_string(), e.theta_upper_plus_3.to_string()]);
            }
            if let Some(d) = &r.decimal_debug {
                v.extend(d.iter().cloned());
            }
            v
        })
        .collect();
    Ok(Output::Table { header, rows: cells, json: json(&out) })
}

#[derive(Serialize)]
struct WordOut {
    #[serde(flatten)]
    word: Word,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
}

fn words_cmd(kind: WordsCommand) -> Result<Output, Failure> {
    let out = match kind {
        WordsCommand::Christoffel { mu, nu } => {
            let word = christoffel(mu, nu).map_err(domain)?;
            let path = stern_brocot_path(mu, nu).map_err(domain)?;
            WordOut { word, path: Some(path_string(&path)) }
        }
        WordsCommand::Mechanical { slope, n, skew } => {
            let variant = if skew { MechanicalVariant::Skew } else { MechanicalVariant::Floor };
            WordOut { word: mechanical_prefix(&slope, variant, n).map_err(domain)?, path: None }
        }
        WordsCommand::Limit { path, side, n } => {
            let parsed = parse_path(&path).map_err(|e| Failure::Usage(format!("--path: {e}")))?;
            let side = match side {
                SideArg::Alpha => Side::Alpha,
                SideArg::Beta => Side::Beta,
            };
            WordOut { word: limit_prefix(&parsed, side, n).map_err(domain)?, path: Some(path_string(&parsed)) }
        }
    };
    Ok(Output::Json(json(out)))
}

#[derive(Serialize)]
struct CountOut {
    count: Count,
    #[serde(rename = "N")]
    n: usize,
    witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit_class: Option<usize>,
}

#[derive(Serialize)]
struct OracleCheck {
    count: Count,
    oracle_agrees: bool,
}

/// Whether the convergent solutions with `q <= qmax` are exactly the direct-search ones.
fn oracle_agrees(x: &ContinuedFraction, qmax: u64) -> Result<bool, Failure> {
    let exact: BTreeSet<(BigInt, BigInt)> =
        solutions_up_to(x, qmax).map_err(domain)?.into_iter().map(|w| (w.p, w.q)).collect();
    let brute: BTreeSet<(BigInt, BigInt)> = brute_force_count(x, qmax).into_iter().collect();
    Ok(exact == brute)
}

#[derive(Serialize)]
struct Pq {
    p: String,
    q: String,
}

#[derive(Serialize)]
struct OracleOut {
    qmax: u64,
    solutions: Vec<Pq>,
    agrees_with_convergents: bool,
}

#[derive(Serialize)]
struct TildeOut {
    value: QuadraticSurd,
    attained_at: Option<usize>,
    limit_class: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimal_debug: Option<String>,
}

fn execute(cli: Cli) -> Result<(Output, bool), Failure> {
    let tabular = matches!(
        cli.command,
        Command::Spectrum { .. } | Command::Triples { .. } | Command::Forms { .. } | Command::Roots { .. }
    );
    if cli.csv && !tabular {
        return Err(Failure::Usage("--csv applies to spectrum, triples, forms and roots".into()));
    }
    let decimal = cli.decimal;
    let ok = |o: Output| Ok((o, true));
    match cli.command {
        Command::Spectrum { below, max_m } => ok(form_table(
            spectrum(&max_m).into_iter().filter(|r| r.lagrange_point < below).map(|r| form_row(r, decimal)).collect(),
        )),
        Command::Forms { m } => ok(form_table(rows_for_m(&m)?.into_iter().map(|r| form_row(r, decimal)).collect())),
        Command::Triples { bound } => {
            let ts: Vec<MarkovTriple> = enum_triples(&bound);
            let rows = ts
                .iter()
                .map(|t| vec![t.x.to_string(), t.y.to_string(), t.z.to_string(), branch_string(&t.path)])
                .collect();
            ok(Output::Table { header: vec!["x", "y", "z", "path"], rows, json: json(&ts) })
        }
        Command::Roots { m, cf } => ok(roots_cmd(&m, cf, decimal)?),
        Command::Words { kind } => ok(words_cmd(kind)?),
        Command::Classify { x } => ok(Output::Json(json(classify(&x).map_err(domain)?))),
        Command::Count { x, oracle } => {
            let c = count_solutions(&x).map_err(domain)?;
            match oracle {
                Some(qmax) => {
                    let agrees = oracle_agrees(&x, qmax)?;
                    Ok((Output::Json(json(OracleCheck { count: c.count, oracle_agrees: agrees })), agrees))
                }
                None => ok(Output::Json(json(CountOut {
                    count: c.count,
                    n: c.last_index(),
                    limit_class: c.limit_class,
                    witnesses: c.witnesses,
                }))),
            }
        }
        Command::Tilde { x } => {
            if x.is_rational() {
                return Err(Failure::Domain("x is rational".into()));
            }
            let s = tilde_m(&x).map_err(domain)?;
            ok(Output::Json(json(TildeOut {
                decimal_debug: decimal.map(|k| s.value.to_decimal(k)),
                value: s.value,
                attained_at: s.attained_at,
                limit_class: s.limit_class,
            })))
        }
        Command::Verify { sweep, depth } => {
            let report = sweeps::run(&sweep.name(), depth).expect("every SweepName is a sweep");
            let pass = report.pass;
            Ok((Output::Json(json(report)), pass))
        }
        Command::Oracle { x, qmax } => {
            if x.is_rational() {
                return Err(Failure::Domain("x is rational".into()));
            }
            let solutions = brute_force_count(&x, qmax)
                .into_iter()
                .map(|(p, q)| Pq { p: p.to_string(), q: q.to_string() })
                .collect();
            let agrees = oracle_agrees(&x, qmax)?;
            ok(Output::Json(json(OracleOut { qmax, solutions, agrees_with_convergents: agrees })))
        }
    }
}

fn render(out: Output, csv: bool) -> Result<Vec<u8>, Failure> {
    match out {
        Output::Table { header, rows, .. } if csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            w.write_record(&header).map_err(domain)?;
            for r in rows {
                w.write_record(&r).map_err(domain)?;
            }
            w.into_inner().map_err(|e| domain(e.error()))
        }
        Output::Table { json: v, .. } | Output::Json(v) => {
            let mut s = serde_json::to_vec_pretty(&v).expect("values serialize");
            s.push(b'\n');
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let csv = cli.csv;
    let pool = match cli.jobs {
        Some(0) => {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let result = pool.install(|| execute(cli)).and_then(|(out, pass)| Ok((render(out, csv)?, pass)));
    match result {
        Ok((bytes, pass)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(&bytes).and_then(|()| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
