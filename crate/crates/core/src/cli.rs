//! Command-line front end. `run` returns the process exit code: 0 on
//! success, 1 when a verification or check fails, 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{FieldCtx, FieldElem};
use crate::error::{Error, Result};
use crate::expr::parse_field;
use crate::gene::{parse_target, GeneWord};
use crate::valued_field::{as_equivalent, classify, Equivalence};
use crate::weave::{build_weave, verify_weave, BuildOptions, VerificationReport, WeaveCertificate};
use crate::witt::parse_int_tuple;
use crate::witt::{split_shift_check, IntMod, Witt, WittVec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "asw", version, about = "Artin-Schreier-Witt towers with prescribed ramification genes")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Gene words.
    #[command(subcommand)]
    Gene(GeneCmd),
    /// Ramification class of `x^p - x = alpha`.
    Classify {
        #[arg(long)]
        p: u64,
        /// Number of s-variables; inferred from the expression when omitted.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        alpha: String,
    },
    /// Whether `a` and `b` generate the same Artin-Schreier extension.
    AsEquiv {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Build and verify weave certificates.
    #[command(subcommand)]
    Weave(WeaveCmd),
    /// Truncated Witt vectors.
    #[command(subcommand)]
    Witt(WittCmd),
}

#[derive(Subcommand, Debug)]
enum GeneCmd {
    Validate {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        word: String,
    },
    Admissible {
        #[arg(long)]
        word: String,
        /// Residue exponents such as `s1:2,s2:1`.
        #[arg(long)]
        target: String,
    },
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    word: String,
    #[arg(long = "N")]
    big_n: Option<u32>,
    /// Override `l_i`, e.g. `--l 2=9`.
    #[arg(long = "l", value_parser = parse_override)]
    l: Vec<(usize, u32)>,
    /// Certificate path; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum WeaveCmd {
    Build(BuildArgs),
    Verify {
        #[arg(required = true)]
        certs: Vec<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum WittCmd {
    /// Adds two Witt vectors of length `m`.
    Add {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
        /// Number of s-variables for field entries; inferred when omitted.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        /// Treat entries as polynomials over F_p in free variables.
        #[arg(long)]
        symbolic: bool,
    },
    /// Checks that `x + (a, 0, ...)` shifts each component by an element of `(a)`.
    SplitCheck {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
    },
}

fn parse_override(s: &str) -> std::result::Result<(usize, u32), String> {
    let (i, v) = s.split_once('=').ok_or_else(|| format!("expected i=VALUE, got '{s}'"))?;
    let i = i.trim().parse().map_err(|_| format!("bad level in '{s}'"))?;
    let v = v.trim().parse().map_err(|_| format!("bad value in '{s}'"))?;
    Ok((i, v))
}

/// Runs the CLI on `args` (including the program name), writing results to
/// `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

struct Outcome {
    json: Value,
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Outcome { json, text, code: EXIT_OK }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let o = match &cli.cmd {
        Cmd::Gene(g) => gene(g)?,
        Cmd::Classify { p, r, alpha } => classify_cmd(*p, *r, alpha)?,
        Cmd::AsEquiv { p, r, a, b } => as_equiv_cmd(*p, *r, a, b)?,
        Cmd::Weave(WeaveCmd::Build(b)) => weave_build(b)?,
        Cmd::Weave(WeaveCmd::Verify { certs }) => weave_verify(certs)?,
        Cmd::Witt(WittCmd::Add { p, m, r, lhs, rhs, symbolic }) => witt_add(*p, *m, *r, lhs, rhs, *symbolic)?,
        Cmd::Witt(WittCmd::SplitCheck { p, m }) => witt_split(*p, *m)?,
    };
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&o.json).map_err(|e| Error::Internal(e.to_string()))?,
        Format::Text => o.text.trim_end().to_string(),
    };
    match writeln!(out, "{body}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Internal(e.to_string())),
        _ => Ok(o.code),
    }
}

fn prime(p: u64) -> Result<u8> {
    FieldCtx::new(p, 0).map(|k| k.p)
}

/// Largest `j` with `s<j>` occurring in any of the texts.
fn infer_r(texts: &[&str]) -> usize {
    let mut r = 0;
    for s in texts {
        let b = s.as_bytes();
        for (i, &c) in b.iter().enumerate() {
            if c == b's' && (i == 0 || !b[i - 1].is_ascii_alphanumeric()) {
                let digits: String = s[i + 1..].chars().take_while(|c| c.is_ascii_digit()).collect();
                if let Ok(j) = digits.parse::<usize>() {
                    r = r.max(j);
                }
            }
        }
    }
    r
}

fn field(p: u64, r: Option<usize>, texts: &[&str]) -> Result<FieldCtx> {
    FieldCtx::new(p, r.unwrap_or_else(|| infer_r(texts)))
}

fn gene(g: &GeneCmd) -> Result<Outcome> {
    match g {
        GeneCmd::Validate { p, r, word } => {
            let p = prime(*p)?;
            let res = GeneWord::parse(word).and_then(|w| w.validate(p, *r).map(|_| w));
            Ok(match res {
                Ok(w) => Outcome::ok(
                    json!({"word": w.to_string(), "valid": true, "genome": w.genome(), "length": w.len()}),
                    format!("valid: {w} (genome {})", w.genome()),
                ),
                Err(e) => Outcome {
                    json: json!({"word": word, "valid": false, "reason": e.to_string()}),
                    text: format!("invalid: {e}"),
                    code: EXIT_FAIL,
                },
            })
        }
        GeneCmd::Admissible { word, target } => {
            let w = GeneWord::parse(word)?;
            let t = parse_target(target)?;
            let ok = w.is_admissible(&t);
            let expected: Value = w.residue_target().iter().map(|(a, e)| (format!("s{a}"), json!(e))).collect();
            Ok(Outcome {
                json: json!({"word": w.to_string(), "admissible": ok, "residue_target": expected}),
                text: format!("{}admissible", if ok { "" } else { "not " }),
                code: if ok { EXIT_OK } else { EXIT_FAIL },
            })
        }
    }
}

fn classify_cmd(p: u64, r: Option<usize>, alpha: &str) -> Result<Outcome> {
    let k = field(p, r, &[alpha])?;
    let a = parse_field(k, alpha)?;
    let (opt, class) = classify(&k, &a)?;
    Ok(Outcome::ok(
        json!({
            "input": a.to_string(),
            "optimal": opt.alpha_opt.to_string(),
            "shift": opt.shift.to_string(),
            "valuation": opt.v_alpha.to_string(),
            "class": class,
        }),
        format!("{class:?}: optimal {} (v = {}), shift {}", opt.alpha_opt, opt.v_alpha, opt.shift),
    ))
}

fn as_equiv_cmd(p: u64, r: Option<usize>, a: &str, b: &str) -> Result<Outcome> {
    let k = field(p, r, &[a, b])?;
    let (x, y) = (parse_field(k, a)?, parse_field(k, b)?);
    Ok(match as_equivalent(&k, &x, &y)? {
        Equivalence::Equivalent { c, witness } => Outcome::ok(
            json!({"verdict": "Equivalent", "c": c, "witness": witness.to_string()}),
            format!("Equivalent: a - {c}*b = w^p - w with w = {witness}"),
        ),
        Equivalence::NonEquivalent { certificates } => {
            let certs: Vec<Value> = certificates
                .iter()
                .map(|(c, class, o)| {
                    json!({"c": c, "class": class, "optimal": o.alpha_opt.to_string(), "valuation": o.v_alpha.to_string()})
                })
                .collect();
            let text = certificates
                .iter()
                .map(|(c, class, o)| format!("c = {c}: {class:?}, v = {}", o.v_alpha))
                .collect::<Vec<_>>()
                .join("\n");
            Outcome::ok(json!({"verdict": "NonEquivalent", "certificates": certs}), format!("NonEquivalent\n{text}"))
        }
        Equivalence::Undetermined => Outcome::ok(json!({"verdict": "Undetermined"}), "Undetermined".into()),
    })
}

fn report_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    for lv in &r.levels {
        let checks: Vec<String> =
            lv.checks.iter().map(|(c, ok)| format!("{}={}", c.label(), if *ok { "ok" } else { "FAIL" })).collect();
        s += &format!(
            "level {} [{}] v(z) = {} residue = {}: {}\n",
            lv.i,
            lv.step,
            lv.v_z.as_deref().unwrap_or("?"),
            lv.residue_z.as_deref().unwrap_or("-"),
            checks.join(", ")
        );
    }
    s += &format!("sigma order: {}\n", r.sigma_order.map_or("?".into(), |o| o.to_string()));
    for f in &r.failures {
        s += &format!("failure: {f}\n");
    }
    s += if r.pass { "PASS" } else { "FAIL" };
    s
}

fn weave_build(b: &BuildArgs) -> Result<Outcome> {
    let p = prime(b.p)?;
    let word = GeneWord::parse(&b.word)?;
    let opts = BuildOptions { big_n: b.big_n, l: b.l.iter().copied().collect() };
    let cert = build_weave(&word, p, b.r, &opts)?;
    let report = verify_weave(&cert);
    let doc = cert.to_json_with_report(&report)?;
    let code = if report.pass { EXIT_OK } else { EXIT_FAIL };
    match &b.out {
        Some(path) => {
            std::fs::write(path, &doc).map_err(|e| Error::PreconditionViolation(format!("{}: {e}", path.display())))?;
            let ls: Vec<u32> = cert.levels.iter().map(|l| l.l).collect();
            Ok(Outcome {
                json: json!({"out": path.display().to_string(), "word": cert.word.to_string(), "N": cert.big_n, "l": ls, "pass": report.pass}),
                text: format!("wrote {} (N = {}, l = {ls:?})\n{}", path.display(), cert.big_n, report_text(&report)),
                code,
            })
        }
        None => {
            let json: Value = serde_json::from_str(&doc).map_err(|e| Error::Internal(e.to_string()))?;
            Ok(Outcome { json, text: doc, code })
        }
    }
}

/// A report or the reason the file could not be read as a certificate.
fn verify_file(path: &PathBuf) -> (Value, String, bool) {
    let loaded = std::fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
        .and_then(|s| WeaveCertificate::from_json(&s));
    match loaded {
        Ok(cert) => {
            let r = verify_weave(&cert);
            let v = serde_json::to_value(&r).unwrap_or(Value::Null);
            (v, report_text(&r), r.pass)
        }
        Err(e) => (json!({"pass": false, "error": e.to_string()}), format!("FAIL: {e}"), false),
    }
}

fn weave_verify(paths: &[PathBuf]) -> Result<Outcome> {
    let results: Vec<(Value, String, bool)> = std::thread::scope(|s| {
        let handles: Vec<_> = paths.iter().map(|p| s.spawn(move || verify_file(p))).collect();
        handles.into_iter().map(|h| h.join().expect("verifier thread panicked")).collect()
    });
    let pass = results.iter().all(|r| r.2);
    let code = if pass { EXIT_OK } else { EXIT_FAIL };
    if let [(json, text, _)] = results.as_slice() {
        return Ok(Outcome { json: json.clone(), text: text.clone(), code });
    }
    let json =
        paths.iter().zip(&results).map(|(p, r)| json!({"file": p.display().to_string(), "report": r.0})).collect();
    let text =
        paths.iter().zip(&results).map(|(p, r)| format!("== {}\n{}", p.display(), r.1)).collect::<Vec<_>>().join("\n");
    Ok(Outcome { json: Value::Array(json), text, code })
}

fn split_tuple(src: &str) -> Result<Vec<&str>> {
    let s = src.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Syntax { pos: 0, msg: "expected '(' ... ')'".into() })?;
    Ok(inner.split(',').map(str::trim).collect())
}

fn witt_add(p: u64, m: usize, r: Option<usize>, lhs: &str, rhs: &str, symbolic: bool) -> Result<Outcome> {
    let pp = prime(p)?;
    let fmt_vec = |v: &[String]| format!("({})", v.join(", "));
    let sum: Vec<String> = if symbolic {
        let mut names = Vec::new();
        let a = parse_int_tuple(lhs, &mut names)?;
        let b = parse_int_tuple(rhs, &mut names)?;
        for t in [&a, &b] {
            if t.len() != m {
                return Err(Error::LengthMismatch(t.len(), m));
            }
        }
        let nvars = names.len();
        let ring = IntMod { p: pp, nvars };
        let w = Witt::new(ring, pp, m)?;
        let to_vec = |t: &[(usize, crate::witt::Term)]| {
            WittVec::new(t.iter().map(|(_, x)| x.to_poly(nvars).reduce_mod(pp as u64)).collect())
        };
        let s = w.add(&to_vec(&a), &to_vec(&b))?;
        s.comps.iter().map(|c| c.fmt_with(&names)).collect()
    } else {
        let k = field(p, r, &[lhs, rhs])?;
        let parse = |src: &str| -> Result<WittVec<FieldElem>> {
            let parts = split_tuple(src)?;
            if parts.len() != m {
                return Err(Error::LengthMismatch(parts.len(), m));
            }
            Ok(WittVec::new(parts.iter().map(|e| parse_field(k, e)).collect::<Result<Vec<_>>>()?))
        };
        let w = Witt::new(k, pp, m)?;
        let s = w.add(&parse(lhs)?, &parse(rhs)?)?;
        s.comps.iter().map(|c| c.to_string()).collect()
    };
    Ok(Outcome::ok(json!({"p": pp, "m": m, "sum": sum}), fmt_vec(&sum)))
}

fn witt_split(p: u64, m: usize) -> Result<Outcome> {
    let rep = split_shift_check(prime(p)?, m)?;
    let text = rep
        .h
        .iter()
        .enumerate()
        .map(|(k, h)| format!("h{} = {h}  in (a): {}", k + 1, rep.in_ideal[k]))
        .collect::<Vec<_>>()
        .join("\n");
    let code = if rep.ok { EXIT_OK } else { EXIT_FAIL };
    Ok(Outcome {
        json: json!({"p": rep.p, "m": rep.m, "h_i": rep.h, "in_ideal": rep.in_ideal.iter().all(|&b| b), "per_component": rep.in_ideal, "lower_only": rep.lower_only}),
        text: format!("{text}\n{}", if rep.ok { "ok" } else { "FAIL" }),
        code,
    })
}
