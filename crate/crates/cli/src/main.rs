use std::process::ExitCode;

use algbits::bits::make_root_handle;
use algbits::gadget::{digit_base, encode, gadget_rational};
use algbits::isolate::{convergence_interval, real_roots, ConvergenceCert, Rho1Route};
use algbits::newton::{certified_iterations, magnitude_bits, ratio_polys};
use algbits::oracle::{bits_via_bisection, prefix_via_bisection};
use algbits::prep::{is_prepared, preprocess};
use algbits::rat::{floor_scaled_abs, fmt_rat, parse_rat};
use algbits::series::{bbp_pi, bits_prefix_series, int_part_series, nth_bit_series, MeasureCert};
use algbits::succinct::{nth_bit_succinct, Backend, CrtParams, SuccinctConfig};
use algbits::{BigRat, Error, GoodInterval, IntPoly, RatInterval, RealRoot, RootHandle};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Signed;

#[derive(Parser)]
#[command(name = "algbits", version, about = "Certified binary digits of real algebraic numbers")]
struct Cli {
    /// Print one JSON object per record instead of key=value lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Preprocess a polynomial, isolate its real roots and certify each one.
    Isolate {
        /// Integer coefficients, constant term first.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Certify this interval (`lo,hi`) instead of isolating.
        #[arg(long, allow_hyphen_values = true)]
        interval: Option<String>,
    },
    /// Bits of a real root, by positions written in unary.
    Bit(BitArgs),
    /// Bits of a real root along the straight-line-program path.
    SuccinctBit(BitArgs),
    /// Bits of pi from the BBP series.
    PiBit {
        /// Bit position after the binary point.
        #[arg(required_unless_present = "range", conflicts_with = "range")]
        n: Option<u64>,
        /// Inclusive range of positions, `a..b`.
        #[arg(long)]
        range: Option<String>,
    },
    /// The mod-p digit gadget.
    Gadget {
        /// An odd prime.
        p: u64,
        /// Print the first digits of the gadget rational in base 2^t.
        #[arg(long)]
        digits: Option<u64>,
        /// Encode a bit string and read its digit.
        #[arg(long)]
        bits: Option<String>,
    },
}

#[derive(Args)]
struct BitArgs {
    /// Integer coefficients, constant term first.
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Index of the root in ascending order, from 0.
    #[arg(long, default_value_t = 0)]
    root: usize,
    /// Bit position after the binary point.
    #[arg(long, required_unless_present = "range", conflicts_with = "range")]
    n: Option<u64>,
    /// Inclusive range of positions, `a..b`.
    #[arg(long)]
    range: Option<String>,
    /// Use the straight-line-program path.
    #[arg(long)]
    binary_position: bool,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    backend: BackendArg,
    /// Primes for the crt backend, comma separated.
    #[arg(long)]
    primes: Option<String>,
    #[arg(long, default_value_t = 256)]
    trunc_bits: u64,
    /// Recompute the bits by bisection and fail on any disagreement.
    #[arg(long)]
    verify: bool,
    /// Cap on the size in bits of any exact intermediate value.
    #[arg(long, default_value_t = 1 << 26)]
    max_bits: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Auto,
    Exact,
    Guarded,
    Crt,
}

enum Failure {
    Usage(String),
    Resource(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidInput(_) => Failure::Usage(e.to_string()),
            _ => Failure::Resource(e.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

struct Printer {
    json: bool,
}

impl Printer {
    fn record(&self, kind: &str, fields: &[(&str, String)]) {
        if self.json {
            let mut obj = serde_json::Map::new();
            obj.insert("record".into(), kind.into());
            for (k, v) in fields {
                obj.insert((*k).into(), v.clone().into());
            }
            println!("{}", serde_json::Value::Object(obj));
        } else {
            let mut line = kind.to_string();
            for (k, v) in fields {
                line.push(' ');
                line.push_str(k);
                line.push('=');
                line.push_str(v);
            }
            println!("{line}");
        }
    }
}

fn parse_poly(s: &str) -> Outcome<IntPoly> {
    let p: IntPoly = s.parse()?;
    if p.is_zero() {
        return Err(Failure::Usage("the zero polynomial has no isolated roots".into()));
    }
    Ok(p)
}

fn parse_range(s: &str) -> Outcome<(u64, u64)> {
    let bad = || Failure::Usage(format!("bad range {s:?}, expected a..b with 1 <= a <= b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn positions(n: Option<u64>, range: &Option<String>) -> Outcome<(u64, u64)> {
    match (n, range) {
        (Some(0), _) => Err(Failure::Usage("bit positions start at 1".into())),
        (Some(n), _) => Ok((n, n)),
        (None, Some(r)) => parse_range(r),
        (None, None) => Err(Failure::Usage("give --n or --range".into())),
    }
}

fn route_name(r: Rho1Route) -> &'static str {
    match r {
        Rho1Route::Markoff => "markoff",
        Rho1Route::DirectRange => "direct-range",
    }
}

fn print_cert(out: &Printer, idx: usize, cert: &ConvergenceCert) {
    out.record(
        "cert",
        &[
            ("root", idx.to_string()),
            ("m", fmt_rat(&cert.m)),
            ("iprime_lo", fmt_rat(cert.iprime.lo())),
            ("iprime_hi", fmt_rat(cert.iprime.hi())),
            ("x0", fmt_rat(&cert.x0)),
            ("rho1", fmt_rat(&cert.rho1)),
            ("rho2", fmt_rat(&cert.rho2)),
            ("rho1_route", route_name(cert.rho1_route).into()),
        ],
    );
}

fn print_irrational(out: &Printer, idx: usize, g: &GoodInterval) -> Outcome<()> {
    out.record(
        "root",
        &[
            ("index", idx.to_string()),
            ("kind", "irrational".into()),
            ("factor", g.poly.to_string()),
            ("lo", fmt_rat(g.iv.lo())),
            ("hi", fmt_rat(g.iv.hi())),
        ],
    );
    let h = make_root_handle(g)?;
    print_cert(out, idx, h.cert());
    out.record(
        "liouville",
        &[
            ("root", idx.to_string()),
            ("c", fmt_rat(&h.liouville.c)),
            ("d", h.liouville.d.to_string()),
        ],
    );
    Ok(())
}

fn cmd_isolate(out: &Printer, poly: &str, interval: &Option<String>) -> Outcome<()> {
    let p = parse_poly(poly)?;
    if let Some(iv) = interval {
        let (lo, hi) = iv
            .split_once(',')
            .ok_or_else(|| Failure::Usage(format!("bad interval {iv:?}, expected lo,hi")))?;
        let iv = RatInterval::new(parse_rat(lo)?, parse_rat(hi)?)?;
        if !is_prepared(&p) {
            return Err(Failure::Usage(
                "--interval needs a polynomial without rational or repeated roots".into(),
            ));
        }
        let g = GoodInterval::new(p, iv)?;
        let cert = convergence_interval(&g)?;
        print_cert(out, 0, &cert);
        return Ok(());
    }
    let report = preprocess(&p)?;
    let rational: Vec<String> = report.rational_roots.iter().map(fmt_rat).collect();
    out.record(
        "prep",
        &[
            ("rational_roots", rational.join(",")),
            ("factors", report.factors.len().to_string()),
        ],
    );
    for (i, f) in report.factors.iter().enumerate() {
        out.record(
            "factor",
            &[
                ("index", i.to_string()),
                ("poly", f.factor.to_string()),
                ("provenance", f.provenance.clone()),
            ],
        );
    }
    let roots = real_roots(&p)?;
    for (i, r) in roots.iter().enumerate() {
        match r {
            RealRoot::Rational(q) => out.record(
                "root",
                &[
                    ("index", i.to_string()),
                    ("kind", "rational".into()),
                    ("value", fmt_rat(q)),
                ],
            ),
            RealRoot::Irrational(g) => print_irrational(out, i, g)?,
        }
    }
    out.record("summary", &[("roots", roots.len().to_string())]);
    Ok(())
}

fn select_root(p: &IntPoly, idx: usize) -> Outcome<RealRoot> {
    let mut roots = real_roots(p)?;
    if idx >= roots.len() {
        return Err(Failure::Usage(format!(
            "root index {idx} out of range: the polynomial has {} real roots",
            roots.len()
        )));
    }
    Ok(roots.swap_remove(idx))
}

fn sign_str(negative: bool) -> String {
    if negative { "-" } else { "+" }.into()
}

fn rational_bits(q: &BigRat, a: u64, b: u64) -> String {
    (a..=b)
        .map(|k| if floor_scaled_abs(q, k).bit(0) { '1' } else { '0' })
        .collect()
}

fn succinct_config(args: &BitArgs) -> Outcome<SuccinctConfig> {
    let backend = match args.backend {
        BackendArg::Auto => Backend::Auto,
        BackendArg::Exact => Backend::Exact,
        BackendArg::Guarded => Backend::Guarded,
        BackendArg::Crt => {
            let list = args
                .primes
                .as_ref()
                .ok_or_else(|| Failure::Usage("--backend crt needs --primes".into()))?;
            let primes = list
                .split(',')
                .map(|s| s.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Failure::Usage(format!("bad prime list {list:?}")))?;
            Backend::Crt(CrtParams::new(primes, args.trunc_bits)?)
        }
    };
    Ok(SuccinctConfig {
        backend,
        eval_cap_bits: args.max_bits,
        ..SuccinctConfig::default()
    })
}

/// Refuses positions whose exact Newton iterate would exceed `max_bits`.
fn check_iterate_size(h: &RootHandle, n: u64, max_bits: u64) -> Outcome<()> {
    let t = certified_iterations(h.cert(), &h.epsilon(n))?;
    let pair = ratio_polys(&h.good().poly)?;
    let x0 = &h.cert().x0;
    let need = magnitude_bits(&pair, x0.numer(), x0.denom(), t);
    if need > max_bits {
        return Err(Failure::Resource(format!(
            "Newton iterate for bit {n} may need {need} bits, cap is {max_bits}"
        )));
    }
    Ok(())
}

fn irrational_bits(h: &RootHandle, args: &BitArgs, succinct: bool, a: u64, b: u64) -> Outcome<String> {
    if succinct {
        let cfg = succinct_config(args)?;
        return (a..=b)
            .map(|k| Ok(char::from(b'0' + nth_bit_succinct(h, k, &cfg)?)))
            .collect();
    }
    check_iterate_size(h, b, args.max_bits)?;
    if a == b {
        return Ok(char::from(b'0' + h.nth_bit(a)?).to_string());
    }
    let prefix = h.bits_prefix(b)?;
    Ok(prefix[(a - 1) as usize..].to_string())
}

fn cmd_bit(out: &Printer, args: &BitArgs, succinct: bool) -> Outcome<()> {
    let p = parse_poly(&args.poly)?;
    let (a, b) = positions(args.n, &args.range)?;
    let root = select_root(&p, args.root)?;
    let (bits, verified) = match &root {
        RealRoot::Rational(q) => {
            out.record(
                "root",
                &[
                    ("index", args.root.to_string()),
                    ("kind", "rational".into()),
                    ("sign", sign_str(q.is_negative())),
                    ("int_part", q.abs().floor().to_integer().to_string()),
                ],
            );
            (rational_bits(q, a, b), None)
        }
        RealRoot::Irrational(g) => {
            let h = make_root_handle(g)?;
            out.record(
                "root",
                &[
                    ("index", args.root.to_string()),
                    ("kind", "irrational".into()),
                    ("sign", sign_str(h.sign < 0)),
                    ("int_part", h.int_part.to_string()),
                ],
            );
            let bits = irrational_bits(&h, args, succinct, a, b)?;
            let check = args.verify.then(|| {
                if a == b {
                    char::from(b'0' + bits_via_bisection(g, &h.liouville, a)).to_string()
                } else {
                    prefix_via_bisection(g, &h.liouville, b)[(a - 1) as usize..].to_string()
                }
            });
            (bits, check)
        }
    };
    if a == b {
        out.record("bit", &[("n", a.to_string()), ("value", bits.clone())]);
    } else {
        out.record("bits", &[("range", format!("{a}..{b}")), ("value", bits.clone())]);
    }
    if !args.verify {
        return Ok(());
    }
    match verified {
        None => {
            out.record("verify", &[("status", "exact".into())]);
            Ok(())
        }
        Some(expect) if expect == bits => {
            out.record("verify", &[("status", "ok".into())]);
            Ok(())
        }
        Some(expect) => {
            out.record("verify", &[("status", "mismatch".into()), ("oracle", expect)]);
            Err(Failure::Mismatch("bits disagree with the bisection oracle".into()))
        }
    }
}

fn cmd_pi_bit(out: &Printer, n: Option<u64>, range: &Option<String>) -> Outcome<()> {
    let (a, b) = positions(n, range)?;
    let s = bbp_pi();
    let mc = MeasureCert::pi_default();
    out.record("pi", &[("int_part", int_part_series(&s, &mc)?.to_string())]);
    if a == b {
        let bit = nth_bit_series(&s, &mc, a)?;
        out.record("bit", &[("n", a.to_string()), ("value", bit.to_string())]);
    } else {
        let prefix = bits_prefix_series(&s, &mc, b)?;
        out.record(
            "bits",
            &[
                ("range", format!("{a}..{b}")),
                ("value", prefix[(a - 1) as usize..].to_string()),
            ],
        );
    }
    Ok(())
}

fn cmd_gadget(out: &Printer, p: u64, digits: Option<u64>, bits: &Option<String>) -> Outcome<()> {
    let g = gadget_rational(p)?;
    out.record(
        "gadget",
        &[("p", p.to_string()), ("t", g.t.to_string()), ("q", fmt_rat(&g.q))],
    );
    if let Some(k) = digits {
        let ds = (1..=k)
            .map(|n| digit_base(&g, &n.into()).map(|d| d.to_string()))
            .collect::<algbits::Result<Vec<_>>>()?;
        out.record(
            "digits",
            &[("base", (1u64 << g.t).to_string()), ("value", ds.join(","))],
        );
    }
    if let Some(s) = bits {
        let n = encode(s, p)?;
        let popcount = s.chars().filter(|&c| c == '1').count() as u64;
        let digit = if n.bits() == 0 { 0 } else { digit_base(&g, &n)? };
        out.record(
            "encode",
            &[
                ("bits", s.clone()),
                ("position", n.to_string()),
                ("digit", digit.to_string()),
                ("popcount_mod_p", (popcount % p).to_string()),
            ],
        );
    }
    Ok(())
}

fn run(cli: &Cli) -> Outcome<()> {
    let out = Printer { json: cli.json };
    match &cli.cmd {
        Command::Isolate { poly, interval } => cmd_isolate(&out, poly, interval),
        Command::Bit(args) => cmd_bit(&out, args, args.binary_position),
        Command::SuccinctBit(args) => cmd_bit(&out, args, true),
        Command::PiBit { n, range } => cmd_pi_bit(&out, *n, range),
        Command::Gadget { p, digits, bits } => cmd_gadget(&out, *p, *digits, bits),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
