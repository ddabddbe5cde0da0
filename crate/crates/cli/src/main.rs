//! `toric-lengths`: exact lengths of extremal rays on toric Fano varieties of
//! Picard number one, from the command line.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use toric_lengths::acc::{
    certify, m_i_value, normalize_ordering, scan_lengths, series_abab, sumset, ScanParams,
};
use toric_lengths::intersection::{
    anticanonical_degree, curve_divisor_via_cover, length, weighted_blowup,
};
use toric_lengths::lattice::enumerate_overlattices;
use toric_lengths::rational::{floor_reciprocal, format_ratio, parse_ratio};
use toric_lengths::{CurveClass, FanoFan};

const FACTORIAL_WARN: u64 = 5000;

#[derive(Parser)]
#[command(name = "toric-lengths", version, about = "Exact length computations for toric Fano varieties of Picard number one")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weighted projective space from a weight tuple.
    Wps {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        /// Also write the fan JSON document here.
        #[arg(long)]
        emit_fan: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Quotients of a weighted projective space by overlattices of a given index.
    Fake {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        #[arg(long = "overlattice-index")]
        overlattice_index: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Length l(X) with the minimizing invariant curve.
    Length {
        #[command(flatten)]
        input: FanInput,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Covering data over the weighted projective space of the same weights.
    Cover {
        #[command(flatten)]
        input: FanInput,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate the bound chain for one tail index and threshold.
    Certify {
        #[command(flatten)]
        input: FanInput,
        /// 1-based tail index after normalization, 3 <= i <= n+1.
        #[arg(long)]
        index: usize,
        #[arg(long)]
        epsilon: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Lengths over all enumerated instances.
    Scan {
        #[arg(long)]
        dim: usize,
        #[arg(long = "max-weight")]
        max_weight: u64,
        #[arg(long = "overlattice-index", default_value_t = 1)]
        overlattice_index: u64,
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// l(P(1, k-1, k)) for k = 2..=kmax.
    SeriesAbab {
        #[arg(long)]
        kmax: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Weighted blow-up of the plane at the origin with weights (1/b)(1, a).
    Blowup {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Minkowski sum of two finite sets of rationals.
    Sumset {
        #[arg(long, value_delimiter = ',', required = true)]
        left: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        right: Vec<String>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FanInput {
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<u64>>,
    #[arg(long)]
    fan: Option<PathBuf>,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Res<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Res<()> {
    match cmd {
        Command::Wps {
            weights,
            emit_fan,
            out,
        } => {
            let (f, perm) = wps_sorted(&weights)?;
            if let Some(path) = emit_fan {
                write_text(Some(&path), &format!("{}\n", f.to_json()?))?;
            }
            emit(&out, &json(&WpsDoc::new(&f, perm)))
        }
        Command::Fake {
            weights,
            overlattice_index,
            out,
        } => {
            positive("--overlattice-index", overlattice_index)?;
            let (f, perm) = wps_sorted(&weights)?;
            let sorted: Vec<BigInt> = f.weights().to_vec();
            let mut quotients = Vec::new();
            let mut absorbed = 0u64;
            for n in enumerate_overlattices(f.dim(), overlattice_index) {
                match FanoFan::from_weights_with_overlattice(&sorted, &n) {
                    Ok(q) => quotients.push(QuotientDoc {
                        denominator: big(n.denominator()),
                        basis: n.basis().row_vecs().iter().map(|r| r.iter().map(big).collect()).collect(),
                        rays: rays_doc(&q),
                        length: format_ratio(&length(&q).value),
                    }),
                    Err(_) => absorbed += 1,
                }
            }
            emit(
                &out,
                &json(&FakeDoc {
                    weights: sorted.iter().map(big).collect(),
                    permutation: one_based(&perm),
                    overlattice_index,
                    absorbed,
                    quotients,
                }),
            )
        }
        Command::Length { input, out } => {
            let f = load(&input)?;
            emit(&out, &json(&LengthDoc::new(&f)))
        }
        Command::Cover { input, out } => {
            let f = load(&input)?;
            emit(&out, &json(&CoverDoc::new(&f)?))
        }
        Command::Certify {
            input,
            index,
            epsilon,
            out,
        } => {
            let f = load(&input)?;
            let eps = parse_epsilon(&epsilon)?;
            let (g, perm) = normalize_ordering(&f);
            if perm.iter().enumerate().any(|(i, &p)| i != p) {
                eprintln!("note: rays reordered for normalization: {:?}", one_based(&perm));
            }
            if index < 3 || index > g.num_rays() {
                return Err(Failure(format!(
                    "tail index {index} out of range 3..={}",
                    g.num_rays()
                )));
            }
            let m = m_i_value(&g, index - 1)?;
            if eps >= m {
                return Err(Failure(format!(
                    "threshold above the tail element: epsilon {} >= {}",
                    format_ratio(&eps),
                    format_ratio(&m)
                )));
            }
            warn_factorial(&eps);
            let cert = certify(&g, index - 1, &eps)?;
            if !cert.passed() {
                eprintln!("note: certificate has failing checks");
            }
            emit(&out, &json(&cert))
        }
        Command::Scan {
            dim,
            max_weight,
            overlattice_index,
            epsilon,
            format,
            out,
        } => {
            positive("--dim", dim as u64)?;
            positive("--max-weight", max_weight)?;
            positive("--overlattice-index", overlattice_index)?;
            let report = scan_lengths(&ScanParams {
                dim,
                max_weight,
                max_index: overlattice_index,
                epsilon: parse_epsilon(&epsilon)?,
            });
            match format {
                Format::Json => emit(&out, &format!("{}\n", report.to_json())),
                Format::Csv => emit(&out, &report.to_csv()),
            }
        }
        Command::SeriesAbab { kmax, format, out } => {
            if kmax < 2 {
                return Err(Failure("--kmax must be at least 2".into()));
            }
            let rows = series_abab(kmax);
            match format {
                Format::Json => {
                    let doc: Vec<SeriesRow> = rows
                        .iter()
                        .map(|(k, l)| SeriesRow {
                            k: *k,
                            length: format_ratio(l),
                        })
                        .collect();
                    emit(&out, &json(&doc))
                }
                Format::Csv => {
                    let mut s = String::from("k,length_num,length_den\n");
                    for (k, l) in &rows {
                        s.push_str(&format!("{k},{},{}\n", l.numer(), l.denom()));
                    }
                    emit(&out, &s)
                }
            }
        }
        Command::Blowup { a, b, out } => {
            let r = weighted_blowup(a, b)?;
            emit(&out, &json(&r))
        }
        Command::Sumset { left, right, out } => {
            let parse = |xs: &[String]| -> Res<BTreeSet<BigRational>> {
                xs.iter().map(|x| Ok(parse_ratio(x.trim())?)).collect()
            };
            let s = sumset(&parse(&left)?, &parse(&right)?);
            let doc: Vec<String> = s.iter().map(format_ratio).collect();
            emit(&out, &json(&doc))
        }
    }
}

fn positive(flag: &str, v: u64) -> Res<()> {
    if v == 0 {
        return Err(Failure(format!("{flag} must be a positive integer")));
    }
    Ok(())
}

fn parse_epsilon(s: &str) -> Res<BigRational> {
    let eps = parse_ratio(s)?;
    if eps <= BigRational::zero() {
        return Err(Failure(format!("epsilon must be positive, got {}", format_ratio(&eps))));
    }
    Ok(eps)
}

fn warn_factorial(eps: &BigRational) {
    let floor = floor_reciprocal(eps);
    if floor > BigInt::from(FACTORIAL_WARN) {
        eprintln!("warning: floor(1/epsilon) = {floor}; the factorial bound is very large");
    }
}

/// Sorts the weights nondecreasingly; `perm[j]` is the input position of the
/// j-th sorted weight.
fn wps_sorted(weights: &[u64]) -> Res<(FanoFan, Vec<usize>)> {
    if let Some(p) = weights.iter().position(|&w| w == 0) {
        return Err(Failure(format!("weight {} is zero; weights must be positive", p + 1)));
    }
    let mut perm: Vec<usize> = (0..weights.len()).collect();
    perm.sort_by_key(|&i| (weights[i], i));
    if perm.iter().enumerate().any(|(i, &p)| i != p) {
        eprintln!("note: weights sorted nondecreasing: permutation {:?}", one_based(&perm));
    }
    let sorted: Vec<u64> = perm.iter().map(|&i| weights[i]).collect();
    Ok((FanoFan::from_weights_u64(&sorted)?, perm))
}

fn load(input: &FanInput) -> Res<FanoFan> {
    match (&input.weights, &input.fan) {
        (Some(w), _) => Ok(wps_sorted(w)?.0),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
            Ok(FanoFan::from_json(&text)?)
        }
        (None, None) => unreachable!("clap enforces one input"),
    }
}

fn emit(out: &OutArgs, text: &str) -> Res<()> {
    write_text(out.out.as_deref(), text)
}

fn write_text(path: Option<&Path>, text: &str) -> Res<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn big(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => v.into(),
        None => x.to_string().into(),
    }
}

fn one_based(perm: &[usize]) -> Vec<usize> {
    perm.iter().map(|p| p + 1).collect()
}

fn pair(c: CurveClass) -> [usize; 2] {
    [c.k() + 1, c.l() + 1]
}

fn rays_doc(f: &FanoFan) -> Vec<Vec<serde_json::Value>> {
    f.rays().iter().map(|r| r.iter().map(big).collect()).collect()
}

#[derive(Serialize)]
struct WpsDoc {
    weights: Vec<serde_json::Value>,
    permutation: Vec<usize>,
    rays: Vec<Vec<serde_json::Value>>,
    mult_sigma: Vec<serde_json::Value>,
    mult_mu: Vec<PairValue>,
}

#[derive(Serialize)]
struct PairValue {
    pair: [usize; 2],
    value: serde_json::Value,
}

impl WpsDoc {
    fn new(f: &FanoFan, perm: Vec<usize>) -> Self {
        WpsDoc {
            weights: f.weights().iter().map(big).collect(),
            permutation: one_based(&perm),
            rays: rays_doc(f),
            mult_sigma: f.mult_sigmas().iter().map(big).collect(),
            mult_mu: f
                .curves()
                .map(|c| PairValue {
                    pair: pair(c),
                    value: big(f.mult_mu(c)),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct QuotientDoc {
    denominator: serde_json::Value,
    basis: Vec<Vec<serde_json::Value>>,
    rays: Vec<Vec<serde_json::Value>>,
    length: String,
}

#[derive(Serialize)]
struct FakeDoc {
    weights: Vec<serde_json::Value>,
    permutation: Vec<usize>,
    overlattice_index: u64,
    absorbed: u64,
    quotients: Vec<QuotientDoc>,
}

#[derive(Serialize)]
struct CurveDeg {
    pair: [usize; 2],
    deg: String,
}

#[derive(Serialize)]
struct LengthDoc {
    weights: Vec<serde_json::Value>,
    value: String,
    argmin: [usize; 2],
    per_curve: Vec<CurveDeg>,
}

impl LengthDoc {
    fn new(f: &FanoFan) -> Self {
        let r = length(f);
        LengthDoc {
            weights: f.weights().iter().map(big).collect(),
            value: format_ratio(&r.value),
            argmin: pair(r.argmin),
            per_curve: r
                .per_curve
                .iter()
                .map(|(c, v)| CurveDeg {
                    pair: pair(*c),
                    deg: format_ratio(v),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct CoverCurve {
    pair: [usize; 2],
    m: serde_json::Value,
    deg: String,
    cover_deg: String,
    divisor_k: String,
}

#[derive(Serialize)]
struct CoverDoc {
    cover_index: serde_json::Value,
    cover_weights: Vec<serde_json::Value>,
    cover_rays: Vec<Vec<serde_json::Value>>,
    curves: Vec<CoverCurve>,
}

impl CoverDoc {
    fn new(f: &FanoFan) -> Res<Self> {
        let cov = f.covering();
        let up = f.cover_fan();
        let curves = f
            .curves()
            .map(|c| {
                Ok(CoverCurve {
                    pair: pair(c),
                    m: big(cov.degree(c)),
                    deg: format_ratio(&anticanonical_degree(f, c)?),
                    cover_deg: format_ratio(&anticanonical_degree(&up, c)?),
                    divisor_k: format_ratio(&curve_divisor_via_cover(f, c)?),
                })
            })
            .collect::<Res<Vec<_>>>()?;
        Ok(CoverDoc {
            cover_index: big(&cov.cover_index),
            cover_weights: cov.cover_weights.iter().map(big).collect(),
            cover_rays: rays_doc(&up),
            curves,
        })
    }
}

#[derive(Serialize)]
struct SeriesRow {
    k: u64,
    length: String,
}
