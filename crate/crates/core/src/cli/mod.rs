//! Command-line front end. [`run`] parses arguments, executes one command
//! and returns the process exit code: 0 on success, 1 on domain errors or
//! failed checks, 2 on usage errors.

pub mod json;
pub mod suite;

use std::ffi::OsString;
use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::bdr::{BdrRing, PrecisionProfile};
use crate::error::Error;
use crate::normal_forms::{self, RMatrix};
use crate::random::{random_cocycle, random_connection, Sampler};
use crate::rh::{self, Cocycle, TConnection};
use crate::toric::GammaVector;
use json::Payload;

#[derive(Parser, Debug)]
#[command(name = "bdrplus", version, about = "Truncated de Rham period rings and local Riemann-Hilbert normal forms")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Precision profile `p,k,N,alpha,s`.
    #[arg(long, global = true, value_parser = parse_profile)]
    profile: Option<PrecisionProfile>,
    /// Seed for generated inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Input document; repeat for commands with several inputs.
    #[arg(long = "in", global = true)]
    input: Vec<std::path::PathBuf>,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Emit JSON instead of a text report.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print t, xi, the roots of unity and the roots of q.
    Constants,
    /// Check the ring identities and report each one.
    VerifyIdentities,
    /// Cocycle to t-connection.
    Log(Shape),
    /// t-connection to cocycle on `p^m Gamma`.
    Exp {
        #[command(flatten)]
        shape: Shape,
    },
    /// Solve `Phi_i Y - act(Y) Phi_j = X` (inputs: Phi_i, Phi_j, X).
    Sylvester {
        #[arg(long, default_value_t = 2)]
        ri: usize,
        #[arg(long, default_value_t = 2)]
        rj: usize,
    },
    /// Split a matrix that is block diagonal mod t.
    Blockdiag {
        /// Block sizes, e.g. `1,2`.
        #[arg(long, value_delimiter = ',')]
        types: Option<Vec<usize>>,
    },
    /// Twisted M-th root.
    Mroot {
        #[arg(long = "M", default_value_t = 2)]
        m: i64,
        #[arg(long, default_value_t = 2)]
        r: usize,
    },
    /// Extend a cocycle from `M Gamma` to `Gamma`.
    Extend {
        #[arg(long = "M")]
        m: Option<i64>,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
    },
    /// exp(log(Phi)) against Phi.
    Roundtrip(Shape),
    /// Run the seeded check battery.
    Selftest {
        /// Only these checks, e.g. `1,2,7`.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u32>>,
    },
    /// Seeded cocycle congruent to the identity mod p^2.
    RandomCocycle(Shape),
}

#[derive(Args, Debug, Clone, Copy)]
struct Shape {
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// Level: the cocycle lives on `p^m Gamma`.
    #[arg(long, default_value_t = 1)]
    m: u32,
}

fn parse_profile(s: &str) -> std::result::Result<PrecisionProfile, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 5 {
        return Err("expected p,k,N,alpha,s".into());
    }
    let num = |i: usize| parts[i].trim().parse::<u64>().map_err(|_| format!("`{}` is not a number", parts[i]));
    PrecisionProfile::new(num(0)?, num(1)? as u32, num(2)? as u32, num(3)? as u32, num(4)? as usize).map_err(|e| e.to_string())
}

/// Failures of a command, split by exit code.
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = std::result::Result<(String, bool), Failure>;

/// Run the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, ok)) => {
            let written = match &cli.global.out {
                Some(path) => std::fs::write(path, &text).map_err(|e| e.to_string()),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
            if ok {
                0
            } else {
                1
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nUsage: bdrplus [--profile p,k,N,alpha,s] [--seed n] [--in file] [--out file] [--json] <command>");
            2
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

struct Inputs {
    ring: Arc<BdrRing>,
    payloads: Vec<Payload>,
}

fn load(g: &Global) -> std::result::Result<Inputs, Failure> {
    let mut ring: Option<Arc<BdrRing>> = None;
    let mut payloads = Vec::new();
    for path in &g.input {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
        let (r, p) = json::from_str(&text)?;
        if let Some(prev) = &ring {
            if prev.profile() != r.profile() {
                return Err(Failure::Usage("input files have different profiles".into()));
            }
        }
        if let Some(prof) = &g.profile {
            if prof != r.profile() {
                return Err(Failure::Usage(format!("--profile {prof} differs from the profile of {}", path.display())));
            }
        }
        ring.get_or_insert(r);
        payloads.push(p);
    }
    let ring = match ring {
        Some(r) => r,
        None => BdrRing::new(g.profile.unwrap_or_default())?,
    };
    Ok(Inputs { ring, payloads })
}

fn doc(ring: &BdrRing, p: &Payload) -> String {
    json::to_string(ring.profile(), p) + "\n"
}

fn expect_count(inputs: &Inputs, n: usize, what: &str) -> std::result::Result<(), Failure> {
    if inputs.payloads.len() != n {
        return Err(Failure::Usage(format!("expected {n} --in file(s): {what}")));
    }
    Ok(())
}

fn cocycle_input(inputs: &Inputs, seed: u64, shape: &Shape) -> std::result::Result<Cocycle, Failure> {
    if inputs.payloads.is_empty() {
        return Ok(random_cocycle(seed, &inputs.ring, shape.d, shape.r, shape.m)?);
    }
    expect_count(inputs, 1, "a cocycle")?;
    match &inputs.payloads[0] {
        Payload::Cocycle(c) => Ok(c.clone()),
        _ => Err(Failure::Usage("the input is not a cocycle".into())),
    }
}

fn bdr_matrix(p: &Payload) -> std::result::Result<RMatrix, Failure> {
    match p {
        Payload::BdrMatrix(m) => Ok(m.clone()),
        Payload::Bdr(x) => Ok(crate::coeffs::Matrix::from_fn(1, 1, |_, _| x.clone())),
        _ => Err(Failure::Usage("expected a matrix of period-ring entries".into())),
    }
}

fn text_matrix(name: &str, m: &RMatrix) -> String {
    let mut s = format!("{name} ({} x {}):\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            s += &format!("  [{i},{j}] {:?}\n", m.get(i, j));
        }
    }
    s
}

fn report(g: &Global, ring: &BdrRing, title: &str, lines: &[(String, bool)]) -> (String, bool) {
    let ok = lines.iter().all(|(_, v)| *v);
    if g.json {
        let items: Vec<Value> = lines.iter().map(|(n, v)| json!({ "name": n, "pass": v })).collect();
        let v = json!({
            "schema_version": json::SCHEMA_VERSION,
            "profile": json::profile_to_json(ring.profile()),
            "report": title,
            "results": items,
            "pass": ok,
        });
        (serde_json::to_string_pretty(&v).unwrap() + "\n", ok)
    } else {
        let mut s = format!("{title} at profile {}\n", ring.profile());
        for (n, v) in lines {
            s += &format!("{} {n}\n", if *v { "PASS" } else { "FAIL" });
        }
        (s, ok)
    }
}

fn execute(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let inputs = load(g)?;
    let b = inputs.ring.clone();
    let beta = GammaVector::basis(1, 0, 1);
    match &cli.command {
        Command::Constants => {
            let k = b.profile().k;
            let mut named = vec![("t".to_string(), b.t()), ("xi".into(), b.xi()), ("q".into(), b.q()), ("z".into(), b.z())];
            for n in 1..=k {
                let pn = b.p().pow(n);
                named.push((format!("zeta_{pn}"), b.zeta(n)?));
                named.push((format!("q^(1/{pn})"), b.q_root(n)?));
            }
            if g.json {
                let mut m = Map::new();
                for (n, x) in &named {
                    m.insert(n.clone(), json::payload_to_json(&Payload::Bdr(x.clone())));
                }
                let v = json!({
                    "schema_version": json::SCHEMA_VERSION,
                    "profile": json::profile_to_json(b.profile()),
                    "constants": Value::Object(m),
                });
                Ok((serde_json::to_string_pretty(&v).unwrap() + "\n", true))
            } else {
                let mut s = format!("constants at profile {}\n", b.profile());
                for (n, x) in named {
                    s += &format!("{n} = {x:?}\n");
                }
                Ok((s, true))
            }
        }
        Command::VerifyIdentities => Ok(report(g, &b, "ring identities", &suite::identity_suite(&b))),
        Command::Log(shape) => {
            let phi = cocycle_input(&inputs, g.seed, shape)?;
            let nabla = rh::log_correspondence(&phi)?;
            Ok((doc(&b, &Payload::Connection(nabla)), true))
        }
        Command::Exp { shape } => {
            let nabla: TConnection = if inputs.payloads.is_empty() {
                random_connection(&mut Sampler::new(g.seed), &b, shape.d, shape.r, shape.m)?
            } else {
                expect_count(&inputs, 1, "a connection")?;
                match &inputs.payloads[0] {
                    Payload::Connection(c) => c.clone(),
                    _ => return Err(Failure::Usage("the input is not a connection".into())),
                }
            };
            Ok((doc(&b, &Payload::Cocycle(rh::exp_correspondence(&nabla, shape.m)?)), true))
        }
        Command::Sylvester { ri, rj } => {
            let (pi, pj, x) = if inputs.payloads.is_empty() {
                suite::instances::sylvester(&mut Sampler::new(g.seed), &b, *ri, *rj)
            } else {
                expect_count(&inputs, 3, "Phi_i, Phi_j and X")?;
                (bdr_matrix(&inputs.payloads[0])?, bdr_matrix(&inputs.payloads[1])?, bdr_matrix(&inputs.payloads[2])?)
            };
            let y = normal_forms::twisted_sylvester(&pi, &pj, &beta, &x)?;
            if g.json {
                Ok((doc(&b, &Payload::BdrMatrix(y)), true))
            } else {
                Ok((text_matrix("Phi_i", &pi) + &text_matrix("Phi_j", &pj) + &text_matrix("X", &x) + &text_matrix("Y", &y), true))
            }
        }
        Command::Blockdiag { types } => {
            let (h, types) = if inputs.payloads.is_empty() {
                let mut s = Sampler::new(g.seed);
                let t = types.clone().unwrap_or_else(|| suite::instances::block_types(&mut s, b.p(), 3));
                (suite::instances::block_input(&mut s, &b, &t), t)
            } else {
                expect_count(&inputs, 1, "a matrix")?;
                let t = types.clone().ok_or_else(|| Failure::Usage("--types is required with --in".into()))?;
                (bdr_matrix(&inputs.payloads[0])?, t)
            };
            if types.iter().sum::<usize>() != h.rows() || types.contains(&0) {
                return Err(Failure::Usage("--types must be positive and sum to the matrix size".into()));
            }
            let (m, hd) = normal_forms::block_diagonalize(&h, &types, &beta)?;
            if g.json {
                Ok((doc(&b, &Payload::BdrMatrix(hd)), true))
            } else {
                Ok((text_matrix("H", &h) + &text_matrix("M", &m) + &text_matrix("H'", &hd), true))
            }
        }
        Command::Mroot { m, r } => {
            if *m < 1 {
                return Err(Failure::Usage("--M must be positive".into()));
            }
            let phi = if inputs.payloads.is_empty() {
                suite::instances::power_input(&mut Sampler::new(g.seed), &b, *r, *m)
            } else {
                expect_count(&inputs, 1, "a matrix")?;
                bdr_matrix(&inputs.payloads[0])?
            };
            let seed = normal_forms::mth_root_seed(&phi, *m)?;
            let root = normal_forms::twisted_mth_root(&phi, &beta, *m, &seed)?;
            if g.json {
                Ok((doc(&b, &Payload::BdrMatrix(root)), true))
            } else {
                Ok((text_matrix("Phi", &phi) + &text_matrix("Phi_1", &root), true))
            }
        }
        Command::Extend { m, d, r } => {
            let psi = if inputs.payloads.is_empty() {
                let m = m.unwrap_or(b.p() as i64);
                suite::instances::extension_pair(&mut Sampler::new(g.seed), &b, *d, *r, m)?.1
            } else {
                expect_count(&inputs, 1, "a cocycle")?;
                match &inputs.payloads[0] {
                    Payload::Cocycle(c) => c.clone(),
                    _ => return Err(Failure::Usage("the input is not a cocycle".into())),
                }
            };
            let m = m.unwrap_or(psi.scale());
            Ok((doc(&b, &Payload::Cocycle(normal_forms::extend_cocycle(&psi, m)?)), true))
        }
        Command::Roundtrip(shape) => {
            let phi = cocycle_input(&inputs, g.seed, shape)?;
            let nabla = rh::log_correspondence(&phi)?;
            let back = rh::exp_correspondence_with(&nabla, phi.scale(), phi.twist(), 2)?;
            let lines = vec![
                ("input passes the cocycle check".to_string(), rh::cocycle_check(&phi)?.0),
                ("log is integrable".to_string(), rh::integrability_check(&nabla).0),
                ("exp(log(Phi)) = Phi".to_string(), back == phi),
            ];
            Ok(report(g, &b, "roundtrip", &lines))
        }
        Command::Selftest { only } => {
            let ids: Vec<u32> = only.clone().unwrap_or_else(|| (1..=12).collect());
            if let Some(bad) = ids.iter().find(|i| !(1..=12).contains(*i)) {
                return Err(Failure::Usage(format!("there is no check {bad}")));
            }
            let results: Vec<suite::Outcome> = ids.iter().map(|&i| suite::run_criterion(i, g.seed)).collect();
            let ok = results.iter().all(|o| o.pass);
            if g.json {
                let items: Vec<Value> = results
                    .iter()
                    .map(|o| json!({ "id": o.id, "title": o.title, "pass": o.pass, "cases": o.cases, "detail": o.detail }))
                    .collect();
                let v = json!({ "schema_version": json::SCHEMA_VERSION, "seed": g.seed.to_string(), "results": items, "pass": ok });
                Ok((serde_json::to_string_pretty(&v).unwrap() + "\n", ok))
            } else {
                let mut s = format!("selftest seed {}\n", g.seed);
                for o in &results {
                    s += &format!("{o}\n");
                }
                Ok((s, ok))
            }
        }
        Command::RandomCocycle(shape) => {
            if shape.d > 3 || shape.r > 4 || shape.d == 0 || shape.r == 0 {
                return Err(Failure::Usage("random-cocycle needs 1 <= d <= 3 and 1 <= r <= 4".into()));
            }
            Ok((doc(&b, &Payload::Cocycle(random_cocycle(g.seed, &b, shape.d, shape.r, shape.m)?)), true))
        }
    }
}

#[cfg(test)]
mod tests;
