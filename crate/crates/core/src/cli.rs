//! Command line front end. Every subcommand wraps one library operation and
//! prints exact integers; multi-row output is JSON lines or TSV.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Map, Number, Value};

use crate::ecpoints::{count_points, is_prime, match_curve, Curve};
use crate::error::Error;
use crate::freealg::{relation_preserved, u_infinity_relation, RewriteSystem};
use crate::intmat::{build_lp, cokernel_group, matrix_a, AbelianGroup, IMat2};
use crate::quadratic::QuadraticIrrational;
use crate::skewlaurent::{check_star_coherent, parse_gauss, verify_example2, AffineAut, Coeff, SkewPoly};
use crate::units::{fundamental_unit, pi_index, SubOrder, DEFAULT_SEARCH_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Parser, Debug)]
#[command(name = "rmtorus", version, about = "Exact arithmetic for real-multiplication tori")]
struct Cli {
    /// Output format for structured results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    output: Format,
    /// Iteration cap for the π(p) power search.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_CAP)]
    cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Continued fraction of (P+√D)/Q.
    Cfrac {
        #[arg(allow_hyphen_values = true, value_parser = parse_theta)]
        theta: QuadraticIrrational,
    },
    /// Period matrix A of the expansion.
    Matrix {
        #[arg(allow_hyphen_values = true, value_parser = parse_theta)]
        theta: QuadraticIrrational,
    },
    /// Fundamental unit of Z + (fθ)Z.
    Unit {
        #[arg(allow_hyphen_values = true, value_parser = parse_theta)]
        theta: QuadraticIrrational,
        #[arg(long, default_value = "1", value_parser = parse_bigint)]
        conductor: BigInt,
    },
    /// Index π(p) and tr(A^π(p)).
    Pi {
        #[arg(allow_hyphen_values = true, value_parser = parse_theta)]
        theta: QuadraticIrrational,
        #[arg(long)]
        p: u64,
    },
    /// The matrix L_p and its cokernel group.
    Lp {
        #[arg(allow_hyphen_values = true, value_parser = parse_theta)]
        theta: QuadraticIrrational,
        #[arg(long)]
        p: u64,
    },
    /// Z²/(I - L)Z² for a matrix given as a,b,c,d (row-major).
    Group {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_matrix)]
        matrix: IMat2,
    },
    /// Points on y² = x³ + ax + b over F_p.
    Count {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_curve)]
        curve: Curve,
        #[arg(long)]
        p: u64,
    },
    /// Compare |det(I - L_p)| with #E(F_p) prime by prime.
    Match {
        #[arg(allow_hyphen_values = true, value_parser = parse_theta)]
        theta: QuadraticIrrational,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_curve)]
        curve: Vec<Curve>,
        /// CSV file with one `a,b` pair per line.
        #[arg(long)]
        curves_file: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
    /// Verify the U_∞ relation in R[t, t⁻¹; u ↦ u+1] and print products.
    SkewDemo,
    /// Whether u ↦ p·u + q commutes with complex conjugation.
    StarCheck {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_gauss_arg)]
        p: crate::skewlaurent::Gauss,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_gauss_arg)]
        q: crate::skewlaurent::Gauss,
    },
    /// Whether x₁* = x₂ preserves x₁x₂ - x₂x₁ - x₁² = 0.
    UstarCheck,
}

fn parse_theta(s: &str) -> Result<QuadraticIrrational, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_bigint(s: &str) -> Result<BigInt, String> {
    s.parse().map_err(|_| format!("not an integer: {s:?}"))
}

fn parse_curve(s: &str) -> Result<Curve, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_gauss_arg(s: &str) -> Result<crate::skewlaurent::Gauss, String> {
    parse_gauss(s).map_err(|e| e.to_string())
}

fn parse_matrix(s: &str) -> Result<IMat2, String> {
    let v: Vec<BigInt> = s.split(',').map(|x| parse_bigint(x.trim())).collect::<Result<_, _>>()?;
    match <[BigInt; 4]>::try_from(v) {
        Ok([a, b, c, d]) => Ok(IMat2 { a, b, c, d }),
        Err(_) => Err(format!("expected a,b,c,d but got {s:?}")),
    }
}

fn num(n: &BigInt) -> Value {
    Value::Number(n.to_string().parse::<Number>().expect("integer literal"))
}

fn mat(m: &IMat2) -> Value {
    json!([[num(&m.a), num(&m.b)], [num(&m.c), num(&m.d)]])
}

fn group(g: &AbelianGroup) -> Value {
    json!([num(&g.d1), num(&g.d2)])
}

fn nums(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(num).collect())
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("json! object literal"),
    }
}

/// Renders a scalar or nested value for a TSV cell.
fn tsv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn emit(rows: &[Map<String, Value>], format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            for r in rows {
                writeln!(out, "{}", Value::Object(r.clone()))?;
            }
        }
        Format::Tsv => {
            if let Some(first) = rows.first() {
                writeln!(out, "{}", first.keys().cloned().collect::<Vec<_>>().join("\t"))?;
            }
            for r in rows {
                writeln!(out, "{}", r.values().map(tsv_cell).collect::<Vec<_>>().join("\t"))?;
            }
        }
    }
    Ok(())
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn require_unit_interval(theta: &QuadraticIrrational) -> Result<(), Failure> {
    if theta.floor().is_zero() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("θ = {theta} must lie in (0, 1) for this command")))
    }
}

fn require_prime(p: u64) -> Result<(), Failure> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p).into())
    }
}

fn read_curves(path: &PathBuf) -> Result<Vec<Curve>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.parse::<Curve>().map_err(Failure::from))
        .collect()
}

fn skew_demo(out: &mut dyn Write) -> std::io::Result<()> {
    let alpha = AffineAut::shift();
    writeln!(out, "ring: R[t, t^-1; alpha] with R = Q(i)[u], alpha: {alpha}")?;
    writeln!(out, "X1 = t, X2 = u*t")?;
    writeln!(out, "X1*X2 - X2*X1 - X1^2 = 0: {}", verify_example2())?;
    let elems = [
        ("t", SkewPoly::t_pow(1, alpha.clone())),
        ("u", SkewPoly::monomial(Coeff::u(), 0, alpha.clone())),
        ("u*t", SkewPoly::monomial(Coeff::u(), 1, alpha.clone())),
        ("t^-1", SkewPoly::t_pow(-1, alpha.clone())),
    ];
    writeln!(out, "products:")?;
    for (ln, l) in &elems {
        for (rn, r) in &elems {
            let prod = l.skew_mul(r).expect("shared automorphism");
            writeln!(out, "  ({ln}) * ({rn}) = {prod}")?;
        }
    }
    writeln!(out, "involution (t* = t^-1, u* = u):")?;
    for (n, e) in &elems {
        writeln!(out, "  ({n})* = {}", e.skew_star().expect("real automorphism"))?;
    }
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Usage(format!("write failed: {e}"));
    let rows: Vec<Map<String, Value>> = match cli.command {
        Command::Cfrac { theta } => {
            let cf = theta.cf_expand();
            vec![object(json!({
                "P": num(theta.p()), "D": num(theta.d()), "Q": num(theta.q()),
                "preperiod": nums(&cf.preperiod), "period": nums(&cf.period),
            }))]
        }
        Command::Matrix { theta } => {
            let cf = theta.cf_expand();
            let a = matrix_a(&cf.period)?;
            vec![object(json!({
                "period": nums(&cf.period), "A": mat(&a), "trace": num(&a.trace()), "det": num(&a.det()),
            }))]
        }
        Command::Unit { theta, conductor } => {
            let e = fundamental_unit(&SubOrder::new(theta, conductor)?)?;
            let norm = e.norm().to_integer();
            vec![object(json!({ "x": num(&e.x), "y": num(&e.y), "norm": num(&norm) }))]
        }
        Command::Pi { theta, p } => {
            require_unit_interval(&theta)?;
            require_prime(p)?;
            let pi = pi_index(&theta, &BigInt::from(p), cli.cap)?;
            let t = matrix_a(&theta.cf_expand().period)?.pow(pi as i64)?.trace();
            vec![object(json!({ "pi": pi, "trace_Apow": num(&t) }))]
        }
        Command::Lp { theta, p } => {
            require_unit_interval(&theta)?;
            require_prime(p)?;
            let pb = BigInt::from(p);
            let pi = pi_index(&theta, &pb, cli.cap)?;
            let t = matrix_a(&theta.cf_expand().period)?.pow(pi as i64)?.trace();
            let lp = build_lp(&t, &pb);
            let det = IMat2::identity().sub(&lp).det();
            vec![object(json!({
                "pi": pi, "T": num(&t), "Lp": mat(&lp), "detImL": num(&det), "group": group(&cokernel_group(&lp)),
            }))]
        }
        Command::Group { matrix } => {
            let g = cokernel_group(&matrix);
            let order = g.order().map_or(Value::Null, |n| num(&n));
            vec![object(json!({
                "L": mat(&matrix), "ImL": mat(&IMat2::identity().sub(&matrix)), "group": group(&g), "order": order,
            }))]
        }
        Command::Count { curve, p } => {
            let c = count_points(&curve, p)?;
            vec![object(json!({
                "a": num(&curve.a), "b": num(&curve.b), "p": p, "count": c.count, "a_p": c.a_p,
            }))]
        }
        Command::Match { theta, mut curve, curves_file, primes } => {
            require_unit_interval(&theta)?;
            if let Some(path) = &curves_file {
                curve.extend(read_curves(path)?);
            }
            if curve.is_empty() {
                return Err(Failure::Usage("match needs --curve or --curves-file".into()));
            }
            for &p in &primes {
                require_prime(p)?;
            }
            let mut rows = Vec::new();
            for c in &curve {
                let report = match_curve(&theta, c, &primes, cli.cap)?;
                if !report.skipped.is_empty() {
                    let list: Vec<String> = report.skipped.iter().map(u64::to_string).collect();
                    writeln!(err, "note: skipped bad primes for {c}: {}", list.join(",")).map_err(io)?;
                }
                for row in &report.rows {
                    let fp = &row.fingerprint;
                    rows.push(object(json!({
                        "curve": [num(&c.a), num(&c.b)], "p": fp.p, "pi": fp.pi, "T": num(&fp.trace),
                        "detImL": num(&fp.det_iml), "group": group(&fp.group),
                        "ec_count": row.ec.count, "match": row.matches,
                    })));
                }
            }
            rows
        }
        Command::SkewDemo => {
            skew_demo(out).map_err(io)?;
            return Ok(());
        }
        Command::StarCheck { p, q } => {
            let alpha = AffineAut::new(p, q)?;
            vec![object(json!({ "coherent": check_star_coherent(&alpha) }))]
        }
        Command::UstarCheck => {
            let res = relation_preserved(&u_infinity_relation(), &RewriteSystem::u_infinity())?;
            vec![object(json!({ "preserved": res.preserved, "residual": res.residual.to_string() }))]
        }
    };
    emit(&rows, cli.output, out).map_err(io)
}

/// Drops bare `--` separators so that `lp -- -1,2,1 --p 3` parses like
/// `lp -1,2,1 --p 3`. No argument takes a literal `--` as its value.
fn normalize(args: Vec<OsString>) -> Vec<OsString> {
    let mut it = args.into_iter();
    let mut out: Vec<OsString> = it.next().into_iter().collect();
    out.extend(it.filter(|a| a != "--"));
    out
}

/// Runs the command line with `args` (program name first) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = normalize(args.into_iter().map(Into::into).collect());
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return if code == 0 { EXIT_OK } else { EXIT_VALIDATION };
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(Failure::Lib(e @ Error::SearchCapExceeded(_))) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CAP
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_VALIDATION
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_VALIDATION
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("rmtorus").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn separator_is_dropped() {
        let (code, out, _) = call(&["cfrac", "--", "-1,2,1"]);
        assert_eq!(code, 0);
        assert!(out.contains(r#""preperiod":[0],"period":[2]"#));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["cfrac", "1,4,1"]).0, EXIT_VALIDATION);
        assert_eq!(call(&["cfrac", "1,2"]).0, EXIT_VALIDATION);
        assert_eq!(call(&["lp", "-1,2,1", "--p", "3", "--cap", "2"]).0, EXIT_CAP);
        assert_eq!(call(&["lp", "-1,2,1", "--p", "4"]).0, EXIT_VALIDATION);
        assert_eq!(call(&["lp", "0,2,1", "--p", "3"]).0, EXIT_VALIDATION);
        assert_eq!(call(&["bogus"]).0, EXIT_VALIDATION);
        assert_eq!(call(&["cfrac", "0,2,1", "--frobnicate"]).0, EXIT_VALIDATION);
        assert_eq!(call(&["count", "--curve", "0,1", "--p", "3"]).0, EXIT_VALIDATION);
        assert_eq!(call(&["match", "-1,2,1", "--primes", "5"]).0, EXIT_VALIDATION);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn unit_bounds() {
        let (code, out, _) = call(&["unit", "0,2,1", "--conductor", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), r#"{"x":17,"y":12,"norm":1}"#);
    }
}
