//! Command-line front end: every operation reads JSON files and prints JSON.
//!
//! Exit codes: 0 success, 2 usage or malformed input, 3 a check failed,
//! 4 a precondition (genericity, stability, acceptability) failed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use nilcone::groups::{conjugate, Sampler};
use nilcone::normalform::{
    genericity_minors, is_generic, is_generic_by_rank, normal_form, normal_form_B, pattern, random_generic_nilpotent,
    CERTIFICATE_SEED,
};
use nilcone::quiver::{datum_from_morphism, eval_f_phi, MorphismDatum};
use nilcone::quotients::relation_report;
use nilcone::rational::to_string as rat;
use nilcone::semiinv::{det_k, eval, f_ij, g_ij, weight_of, verify_semiinvariance, verify_u_invariance};
use nilcone::toric::{
    accperm, default_enumeration_bound, exponent_weight, induced_datum, sum_free_pairs, toric_cone, toric_exponents,
    toric_exponents_oracle, BlockPair, ToricCone,
};
use nilcone::{Error, GroupKind, Matrix, ParabolicShape, SemiInvariantDatum};

const EXIT_USAGE: u8 = 2;
const EXIT_CHECK: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "nilcone", version, about = "Exact invariants and normal forms for nilpotent matrices under Borel and parabolic conjugation")]
struct Cli {
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the semi-invariant of a block datum on a matrix.
    EvalInvariant {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Normal form of a generic nilpotent matrix with a conjugacy certificate.
    NormalForm {
        #[arg(long, value_enum)]
        group: Group,
        /// Block sizes, required for the parabolic group.
        #[arg(long, value_delimiter = ',')]
        blocks: Option<Vec<usize>>,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Genericity minors and the equivalent rank test.
    GenericityCheck {
        #[arg(long, value_delimiter = ',')]
        blocks: Option<Vec<usize>>,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// The cone spanned by exponents of sum-free toric invariants.
    ToricCone {
        #[arg(long)]
        n: usize,
        /// Largest total block size enumerated; defaults to 2(n-1).
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Exponents of the sum-free toric invariant of a block pair.
    ToricExponents {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        a: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        aprime: Vec<usize>,
    },
    /// Evaluate the semi-invariant of a morphism between projectives.
    EvalQuiverSi {
        #[arg(long)]
        morphism: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Sample the known relations among quotient invariants.
    VerifyRelations {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every check available for this n.
    VerifyAll {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Group {
    Borel,
    Unipotent,
    Parabolic,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("malformed {}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<Matrix, Failure> {
    let m: Matrix = read_json(path)?;
    if !m.is_square() {
        return Err(Failure::Usage(format!("{} is not a square matrix", path.display())));
    }
    Ok(m)
}

fn shape_for(blocks: Option<Vec<usize>>, n: usize) -> Result<ParabolicShape, Failure> {
    let shape = match blocks {
        Some(b) => ParabolicShape::new(b)?,
        None => ParabolicShape::borel(n),
    };
    if shape.n() != n {
        return Err(Failure::Usage(format!("blocks sum to {}, matrix has size {n}", shape.n())));
    }
    Ok(shape)
}

fn strings(v: &[nilcone::Rational]) -> Vec<String> {
    v.iter().map(rat).collect()
}

fn meta(command: &str, seed: u64, trials: usize) -> Value {
    json!({ "command": command, "version": env!("CARGO_PKG_VERSION"), "seed": seed, "trials": trials })
}

fn eval_invariant(datum: &Path, matrix: &Path) -> Outcome {
    let d: SemiInvariantDatum = read_json(datum)?;
    let m = read_matrix(matrix)?;
    let value = eval(&m, &d)?;
    Ok((
        json!({
            "meta": meta("eval-invariant", 0, 0),
            "n": m.rows(),
            "value": rat(&value),
            "weight": weight_of(&d, m.rows()),
        }),
        true,
    ))
}

fn normal_form_cmd(group: Group, blocks: Option<Vec<usize>>, matrix: &Path) -> Outcome {
    let m = read_matrix(matrix)?;
    let n = m.rows();
    let kind = match (group, blocks) {
        (Group::Borel, None) => GroupKind::Borel,
        (Group::Unipotent, None) => GroupKind::Unipotent,
        (Group::Parabolic, Some(b)) => GroupKind::Parabolic { shape: shape_for(Some(b), n)? },
        (Group::Parabolic, None) => return Err(Failure::Usage("--blocks is required for the parabolic group".into())),
        (_, Some(_)) => return Err(Failure::Usage("--blocks only applies to the parabolic group".into())),
    };
    let minors = genericity_minors(&m, &ParabolicShape::borel(n))?;
    let nf = normal_form(&m, &kind)?;
    Ok((
        json!({
            "meta": meta("normal-form", CERTIFICATE_SEED, 0),
            "group": kind,
            "H": nf.h,
            "g": nf.cert.g,
            "minors": strings(&minors),
        }),
        true,
    ))
}

fn genericity_cmd(blocks: Option<Vec<usize>>, matrix: &Path) -> Outcome {
    let m = read_matrix(matrix)?;
    let shape = shape_for(blocks, m.rows())?;
    let minors = genericity_minors(&m, &shape)?;
    let generic = is_generic(&m, &shape)?;
    let by_rank = is_generic_by_rank(&m, &shape)?;
    Ok((
        json!({
            "meta": meta("genericity-check", 0, 0),
            "shape": shape,
            "generic": generic,
            "generic_by_rank": by_rank,
            "minors": strings(&minors),
        }),
        generic == by_rank,
    ))
}

fn toric_cone_cmd(n: usize, bound: Option<usize>) -> Outcome {
    let bound = bound.unwrap_or_else(|| default_enumeration_bound(n));
    let cone = toric_cone(n, bound)?;
    let dual = cone.dual()?;
    let hilbert = cone.hilbert_basis()?;
    Ok((
        json!({
            "meta": meta("toric-cone", 0, 0),
            "n": n,
            "bound": bound,
            "generators": cone.generators,
            "dual": dual.generators,
            "hilbert": hilbert,
        }),
        true,
    ))
}

fn toric_exponents_cmd(n: usize, a: Vec<usize>, aprime: Vec<usize>) -> Outcome {
    let bp = BlockPair::new(n, a, aprime)?;
    let sigma = accperm(&bp)?;
    let datum = induced_datum(&bp, &sigma)?;
    let h = toric_exponents(&bp)?;
    let oracle = toric_exponents_oracle(&datum, n)?;
    let agree = oracle == h;
    Ok((
        json!({
            "meta": meta("toric-exponents", 0, 0),
            "n": n,
            "a": bp.a,
            "aprime": bp.a_prime,
            "permutation": sigma,
            "datum": datum,
            "exponents": h,
            "oracle": oracle,
            "weight": exponent_weight(&h),
        }),
        agree,
    ))
}

fn eval_quiver_cmd(morphism: &Path, matrix: &Path) -> Outcome {
    let phi: MorphismDatum = read_json(morphism)?;
    let m = read_matrix(matrix)?;
    if m.rows() != phi.n {
        return Err(Failure::Usage(format!("morphism has n = {}, matrix has size {}", phi.n, m.rows())));
    }
    let value = eval_f_phi(&m, &phi)?;
    let (datum, agree) = match datum_from_morphism(&phi) {
        Ok(d) => {
            let via = eval(&m, &d)?;
            (serde_json::to_value(&d).expect("datum serializes"), via == value)
        }
        Err(Error::Unsupported(_)) => (Value::Null, true),
        Err(e) => return Err(e.into()),
    };
    Ok((json!({ "meta": meta("eval-quiver-si", 0, 0), "value": rat(&value), "datum": datum }), agree))
}

fn verify_relations_cmd(n: usize, trials: usize, seed: u64) -> Outcome {
    let report = relation_report(n, trials, seed)?;
    let passed = report.passed();
    let mut v = serde_json::to_value(&report).expect("report serializes");
    v["meta"] = meta("verify-relations", seed, trials);
    Ok((v, passed))
}

struct Line {
    label: String,
    ok: bool,
}

fn verify_all_cmd(n: usize, trials: usize, seed: u64) -> Outcome {
    if !(2..=6).contains(&n) {
        return Err(Failure::Usage(format!("verify-all supports 2 <= n <= 6, got {n}")));
    }
    let mut lines = Vec::new();
    let mut push = |label: String, ok: bool| lines.push(Line { label, ok });
    let per = trials.clamp(1, 25);

    let mut named = Vec::new();
    for k in 1..n {
        named.push(det_k(n, k)?);
    }
    for i in 3..=n {
        for j in 1..=i - 2 {
            named.push(f_ij(n, i, j)?);
            named.push(g_ij(n, i, j)?);
        }
    }
    let mut semi = true;
    for (idx, inv) in named.iter().enumerate() {
        let s = seed.wrapping_add(idx as u64);
        semi &= verify_semiinvariance(inv, n, per, 4, s)? && verify_u_invariance(inv, n, per, 4, s)?;
    }
    push(format!("det_k, f_ij, g_ij are semi-invariants of the stated weights ({} invariants)", named.len()), semi);

    let report = relation_report(n, trials, seed)?;
    for c in &report.checks {
        push(c.label.clone(), c.passed);
    }

    if n >= 3 {
        let mut s = Sampler::new(seed);
        let spec = pattern(&GroupKind::Borel, n);
        let mut sound = true;
        let mut extract = true;
        for _ in 0..per.min(10) {
            let m = random_generic_nilpotent(n, &mut s);
            let nf = normal_form_B(&m)?;
            let moved = normal_form_B(&conjugate(&s.borel(n), &m)?)?;
            sound &= spec.contains(&nf.h) && nf.cert.certifies(&m, &nf.h) && moved.h == nf.h;
            let h = spec.sample(&mut s);
            for (i, j) in spec.free_cells() {
                extract &= g_ij(n, i + 1, j + 1)?.eval(&h)? == h[(i, j)];
            }
        }
        push("normal_form_B is certified and constant on B-orbits".into(), sound);
        push("g_ij(H) = H_ij on the B-pattern".into(), extract);
    }

    let mut exps = true;
    let pairs = sum_free_pairs(n, default_enumeration_bound(n));
    for bp in &pairs {
        let datum = induced_datum(bp, &accperm(bp)?)?;
        exps &= toric_exponents_oracle(&datum, n)? == toric_exponents(bp)?;
    }
    push(format!("toric exponents agree with factoring ({} sum-free pairs)", pairs.len()), exps);
    if n == 3 {
        let cone = toric_cone(3, default_enumeration_bound(3))?;
        let expected = ToricCone::new(2, vec![vec![1, 1], vec![1, 2], vec![2, 1]])?;
        push("toric cone is spanned by (1,1), (1,2), (2,1)".into(), cone.same_cone(&expected));
    }

    let passed = lines.iter().all(|l| l.ok);
    let report: Vec<String> = lines.iter().map(|l| format!("{}: {}", l.label, if l.ok { "ok" } else { "FAILED" })).collect();
    Ok((json!({ "meta": meta("verify-all", seed, trials), "n": n, "passed": passed, "report": report }), passed))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::EvalInvariant { datum, matrix } => eval_invariant(&datum, &matrix),
        Command::NormalForm { group, blocks, matrix } => normal_form_cmd(group, blocks, &matrix),
        Command::GenericityCheck { blocks, matrix } => genericity_cmd(blocks, &matrix),
        Command::ToricCone { n, bound } => toric_cone_cmd(n, bound),
        Command::ToricExponents { n, a, aprime } => toric_exponents_cmd(n, a, aprime),
        Command::EvalQuiverSi { morphism, matrix } => eval_quiver_cmd(&morphism, &matrix),
        Command::VerifyRelations { n, trials, seed } => verify_relations_cmd(n, trials, seed),
        Command::VerifyAll { n, trials, seed } => verify_all_cmd(n, trials, seed),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotGeneric(_) | Error::Precondition(_) | Error::NotAcceptable(_) | Error::Unstable | Error::NotToric(_) => {
            EXIT_PRECONDITION
        }
        Error::NotConjugate { .. } | Error::Internal(_) => EXIT_CHECK,
        Error::Shape(_)
        | Error::Singular(_)
        | Error::Index(_)
        | Error::Unsupported(_)
        | Error::Scale(_)
        | Error::Parse(_) => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    match run(cli) {
        Ok((value, passed)) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON values serialize") + "\n";
            let written = match &output {
                Some(path) => fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(msg) = written {
                eprintln!("error: {msg}");
                return ExitCode::from(EXIT_USAGE);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
