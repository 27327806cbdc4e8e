use std::path::{Path, PathBuf};
use std::time::Instant;

use etfforge::certify::{self, certify_range, SeedPolicy};
use etfforge::constructions::{
    build_label, renes_strohmer_gram, steiner_default, table_dispatch, zauner_2x4_signature, Label,
};
use etfforge::frames::{assemble_2circulant, check_etf, frame_from_gram, gram_of_signature, CirculantPair};
use etfforge::harmonic::{
    check_regular_representation, circulantize as circulantize_gram, detect_harmonic_gram, family_automorphism,
    harmonic_generators, AutomorphismWitness, BlockGram, Family,
};
use etfforge::io::{self, RunManifest};
use etfforge::solver;
use etfforge::{ComplexMatrix, Error, Role};
use serde_json::Value;

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_CONSTRUCTION: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

type CmdResult = Result<u8, CliError>;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError { code: EXIT_INVALID, message: msg.into() }
}

/// Input and parameter problems exit 2; anything else exits 3.
fn classify(e: Error) -> CliError {
    let code = match e {
        Error::InvalidArgument(_) | Error::UnsupportedInput(_) | Error::Io(_) | Error::Json(_) => EXIT_INVALID,
        _ => EXIT_CONSTRUCTION,
    };
    CliError { code, message: e.to_string() }
}

fn input_err(e: Error) -> CliError {
    CliError { code: EXIT_INVALID, message: e.to_string() }
}

#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub q: Option<u64>,
    pub v: Option<u64>,
    pub m: Option<usize>,
    pub d: Option<usize>,
}

fn need<T>(x: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    x.ok_or_else(|| invalid(format!("family {family} needs --{flag}")))
}

fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}.json"))
}

/// Writes each `(path, value)` stamped with the manifest digest, then the
/// manifest itself next to the first path.
fn write_outputs(mut manifest: RunManifest, outputs: &[(PathBuf, Value)], started: Instant) -> Result<(), CliError> {
    for (path, v) in outputs {
        let digest = io::write_json(path, &io::stamp(v.clone(), &manifest)).map_err(input_err)?;
        manifest.output_digests.push(digest);
    }
    if let Some((first, _)) = outputs.first() {
        manifest.wall_time_s = started.elapsed().as_secs_f64();
        io::write_json(&sidecar(first, "manifest"), &manifest.to_json()).map_err(input_err)?;
    }
    Ok(())
}

fn file_digest(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    Ok(io::digest_bytes(&bytes))
}

pub fn construct(argv: &[String], family: &str, p: Params, eps: i8, out: Option<&Path>) -> CmdResult {
    let started = Instant::now();
    if eps != 1 && eps != -1 {
        return Err(invalid(format!("--epsilon must be 1 or -1, got {eps}")));
    }
    let mut witness = None;
    let frame = match family {
        "paley-plus" | "double-paley-plus" => {
            let q = need(p.q, "q", family)?;
            let fam = Family::parse(family).expect("matched above");
            let fa = family_automorphism(fam, q).map_err(classify)?;
            let m = fa.witness.uniform_cycle_type().map(|(m, _)| m).unwrap_or(fa.d);
            witness = Some((fa.witness.clone(), m, fa.signature.rows() / m));
            frame_from_gram(&fa.gram().map_err(classify)?, fa.d).map_err(classify)?
        }
        "double-paley" => {
            let q = p.q.or(p.v).ok_or_else(|| invalid("family double-paley needs --q or --v"))?;
            build_label(Label::DoublePaley { q }, eps).map_err(classify)?
        }
        "table" => {
            let d = need(p.d, "d", family)?;
            let label = table_dispatch(d)
                .into_iter()
                .next()
                .ok_or_else(|| invalid(format!("no implemented table construction for d = {d}")))?;
            println!("label {}", label.short());
            build_label(label, eps).map_err(classify)?
        }
        "steiner" => steiner_default(need(p.m, "m", family)?).map_err(classify)?,
        "renes-strohmer" => {
            let rs = renes_strohmer_gram(need(p.q, "q", family)?).map_err(classify)?;
            frame_from_gram(&rs.gram, rs.d).map_err(classify)?
        }
        "zauner" => {
            let g = gram_of_signature(&zauner_2x4_signature(), 2).map_err(classify)?;
            frame_from_gram(&g, 2).map_err(classify)?
        }
        other => return Err(invalid(format!("unknown family {other}"))),
    };
    let report = check_etf(&frame, 1e-9);
    println!("{report}");
    if !report.pass {
        return Err(CliError { code: EXIT_CONSTRUCTION, message: "construction failed the ETF check".into() });
    }
    if let Some(out) = out {
        let mut outputs = vec![(out.to_path_buf(), io::matrix_to_json(&frame).map_err(classify)?)];
        if let Some((w, m, t)) = &witness {
            outputs.push((sidecar(out, "witness"), io::witness_to_json(w, *m, *t).map_err(classify)?));
        }
        write_outputs(RunManifest::new(argv.to_vec(), Vec::new()), &outputs, started)?;
    }
    Ok(0)
}

enum Loaded {
    Matrix(ComplexMatrix),
    Pair(CirculantPair),
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let v = io::read_json(path).map_err(input_err)?;
    match v.get("kind").and_then(Value::as_str) {
        Some("circulant-generators") => Ok(Loaded::Pair(io::pair_from_json(&v).map_err(input_err)?)),
        Some(_) => Ok(Loaded::Matrix(io::matrix_from_json(&v).map_err(input_err)?)),
        None => Err(invalid(format!("{}: missing \"kind\"", path.display()))),
    }
}

/// Rank of a Gram of a tight frame, `tr(G)² / ‖G‖_F²`.
fn gram_rank(g: &ComplexMatrix) -> usize {
    let tr = g.trace().re;
    let fro: f64 = g.data().iter().map(|z| z.norm_sqr()).sum();
    (tr * tr / fro).round().max(1.0) as usize
}

fn as_frame(l: &Loaded) -> Result<ComplexMatrix, CliError> {
    match l {
        Loaded::Pair(p) => Ok(assemble_2circulant(p)),
        Loaded::Matrix(a) if a.role() == Role::Gram => frame_from_gram(a, gram_rank(a)).map_err(input_err),
        Loaded::Matrix(a) if a.role() == Role::Frame || a.role() == Role::Generic => Ok(a.clone()),
        Loaded::Matrix(_) => Err(invalid("expected a frame, Gram or generator file")),
    }
}

fn as_gram(l: &Loaded) -> Result<ComplexMatrix, CliError> {
    match l {
        Loaded::Matrix(a) if a.role() == Role::Gram => Ok(a.clone()),
        other => Ok(as_frame(other)?.gram()),
    }
}

pub fn check(input: &Path, tol: f64) -> CmdResult {
    if !(tol >= 0.0) {
        return Err(invalid("--tol must be nonnegative"));
    }
    let phi = as_frame(&load(input)?)?;
    let report = check_etf(&phi, tol);
    println!("{report}");
    Ok(if report.pass { 0 } else { EXIT_FAIL })
}

pub fn solve(argv: &[String], d: usize, seed: u64, tol: f64, max_iter: usize, out: Option<&Path>) -> CmdResult {
    let started = Instant::now();
    let r = solver::solve(d, seed, tol, max_iter).map_err(classify)?;
    println!(
        "d={d} seed={seed} iterations={} residual={:.3e} {}",
        r.iterations,
        r.residual_inf,
        if r.converged { "converged" } else { "NOT converged" }
    );
    if let Some(out) = out {
        let v = io::pair_to_json(&r.pair).map_err(classify)?;
        write_outputs(RunManifest::new(argv.to_vec(), vec![seed]), &[(out.to_path_buf(), v)], started)?;
    }
    Ok(if r.converged { 0 } else { EXIT_FAIL })
}

fn print_certificate(c: &certify::Certificate) {
    println!(
        "d={} verified={} epsilon={:.6e} |S*T-I|<={:.3e} |T|<={:.3e} |f(x0)|<={:.3e} lhs<={:.6e} rhs>={:.6e} kernel_dim={}",
        c.d,
        c.verified,
        c.epsilon,
        c.bound_st_minus_i,
        c.bound_t_norm,
        c.bound_f_x0,
        c.lhs_upper,
        c.rhs_lower,
        c.kernel_dim
    );
}

pub fn certify(argv: &[String], input: &Path, delta: f64, out: Option<&Path>) -> CmdResult {
    let started = Instant::now();
    let pair = match load(input)? {
        Loaded::Pair(p) => p,
        Loaded::Matrix(_) => return Err(invalid("certify needs a circulant-generators file")),
    };
    let mut manifest = RunManifest::new(argv.to_vec(), Vec::new());
    manifest.input_digests.push(file_digest(input)?);
    match certify::certify(&pair, delta) {
        Ok(c) => {
            print_certificate(&c);
            if let Some(out) = out {
                let v = io::certificate_to_json(&c).map_err(classify)?;
                write_outputs(manifest, &[(out.to_path_buf(), v)], started)?;
            }
            Ok(if c.verified { 0 } else { EXIT_FAIL })
        }
        Err(e @ Error::CertificationFailed { .. }) => {
            println!("not verified: {e}");
            Ok(EXIT_FAIL)
        }
        Err(e) => Err(classify(e)),
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), CliError> {
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| invalid(format!("bad --d range {s:?}")));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok((parse(a)?, parse(b)?))
        }
        None => {
            let d = parse(s)?;
            Ok((d, d))
        }
    }
}

/// `--jobs`, else `ETFFORGE_THREADS`, else the available parallelism.
fn resolve_jobs(jobs: Option<usize>) -> Result<usize, CliError> {
    if let Some(j) = jobs {
        return Ok(j.max(1));
    }
    if let Ok(s) = std::env::var("ETFFORGE_THREADS") {
        return s.trim().parse::<usize>().map(|j| j.max(1)).map_err(|_| invalid("ETFFORGE_THREADS is not a count"));
    }
    Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

pub fn sweep(argv: &[String], range: &str, seed: u64, jobs: Option<usize>, delta: f64, out_dir: Option<&Path>) -> CmdResult {
    let started = Instant::now();
    let (lo, hi) = parse_range(range)?;
    let jobs = resolve_jobs(jobs)?;
    let policy = SeedPolicy { first_seed: seed, ..SeedPolicy::default() };
    let results = certify_range(lo, hi, policy, jobs, delta).map_err(classify)?;
    let mut table = String::from("d\tseed\tsolver_residual\tverified\tepsilon\tdetail\n");
    let mut outputs = Vec::new();
    let mut verified = 0;
    for r in &results {
        match &r.result {
            Ok(c) => {
                print_certificate(c);
                if c.verified {
                    verified += 1;
                }
                table.push_str(&format!("{}\t{}\t{:.3e}\t{}\t{:.6e}\t\n", r.d, r.seed, r.solver_residual, c.verified, c.epsilon));
                if let Some(dir) = out_dir {
                    outputs.push((dir.join(format!("certificate_d{}.json", r.d)), io::certificate_to_json(c).map_err(classify)?));
                }
            }
            Err(msg) => {
                println!("d={} FAILED: {msg}", r.d);
                table.push_str(&format!("{}\t{}\t{:.3e}\tfalse\t\t{msg}\n", r.d, r.seed, r.solver_residual));
            }
        }
    }
    println!("{verified}/{} verified", results.len());
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| invalid(format!("{}: {e}", dir.display())))?;
        let summary = dir.join("summary.tsv");
        std::fs::write(&summary, &table).map_err(|e| invalid(format!("{}: {e}", summary.display())))?;
        let seeds = (seed..seed + policy.attempts as u64).collect();
        let mut manifest = RunManifest::new(argv.to_vec(), seeds);
        manifest.output_digests.push(io::digest_bytes(table.as_bytes()));
        if outputs.is_empty() {
            manifest.wall_time_s = started.elapsed().as_secs_f64();
            io::write_json(&dir.join("summary.manifest.json"), &manifest.to_json()).map_err(input_err)?;
        } else {
            write_outputs(manifest, &outputs, started)?;
        }
    }
    Ok(if verified == results.len() { 0 } else { EXIT_FAIL })
}

fn load_witness(path: &Path) -> Result<(AutomorphismWitness, usize, usize), CliError> {
    io::witness_from_json(&io::read_json(path).map_err(input_err)?).map_err(input_err)
}

fn failed(criterion: &str) -> CmdResult {
    println!("FAILED: {criterion}");
    Ok(EXIT_FAIL)
}

pub fn detect(inputs: &[PathBuf], m: Option<usize>) -> CmdResult {
    let g = as_gram(&load(&inputs[0])?)?;
    let n = g.rows();
    let block = match inputs.get(1) {
        Some(wpath) => {
            let (w, wm, _) = load_witness(wpath)?;
            if let Some(m) = m {
                if m != wm {
                    println!("requested m = {m} differs from the witness cycle length {wm}");
                    return failed("stability");
                }
            }
            match circulantize_gram(&g, &w) {
                Ok(c) => c.gram,
                Err(e) => {
                    println!("{e}");
                    return failed("automorphism");
                }
            }
        }
        None => {
            let m = m.ok_or_else(|| invalid("detect needs --m or a witness file"))?;
            if m == 0 || n % m != 0 {
                return Err(invalid(format!("m = {m} does not divide n = {n}")));
            }
            BlockGram::new(g, n / m, m).map_err(input_err)?
        }
    };
    println!("cycle type {}^{}", block.m(), block.t());
    let rep = detect_harmonic_gram(&block).map_err(classify)?;
    println!("stable: {} (defect {:.3e})", rep.stable, rep.stability_defect);
    println!("psd: {} (min eigenvalue {:.3e})", rep.psd_ok, rep.min_eigenvalue);
    if !rep.stable {
        return failed("stability");
    }
    if !rep.psd_ok {
        return failed("psd");
    }
    let regular = check_regular_representation(&block).map_err(classify)?;
    println!("regular representation: {regular}");
    if !regular {
        return failed("regular-representation");
    }
    Ok(0)
}

pub fn circulantize(argv: &[String], inputs: &[PathBuf], out: Option<&Path>) -> CmdResult {
    let started = Instant::now();
    if inputs.len() != 2 {
        return Err(invalid("circulantize needs --in <gram or frame> --in <witness>"));
    }
    let g = as_gram(&load(&inputs[0])?)?;
    let (w, _, _) = load_witness(&inputs[1])?;
    let c = match circulantize_gram(&g, &w) {
        Ok(c) => c,
        Err(e) => {
            println!("{e}");
            return failed("automorphism");
        }
    };
    println!("beta = {:.12} {:+.12}i, f spread {:.3e}", c.beta.re, c.beta.im, c.f_spread);
    if !check_regular_representation(&c.gram).map_err(classify)? {
        return failed("regular-representation");
    }
    let gens = harmonic_generators(&c.gram).map_err(classify)?;
    if gens.len() != 2 {
        return Err(invalid(format!("expected 2 generators, found {}", gens.len())));
    }
    let pair = CirculantPair::new(gens[0].clone(), gens[1].clone()).map_err(classify)?;
    let report = check_etf(&assemble_2circulant(&pair), 1e-9);
    println!("{report}");
    if let Some(out) = out {
        let mut manifest = RunManifest::new(argv.to_vec(), Vec::new());
        for p in inputs {
            manifest.input_digests.push(file_digest(p)?);
        }
        write_outputs(manifest, &[(out.to_path_buf(), io::pair_to_json(&pair).map_err(classify)?)], started)?;
    }
    Ok(if report.pass { 0 } else { EXIT_FAIL })
}
