//! Command-line front end: reduce / gen / verify / solve / check-regime.
//!
//! Exit codes: 0 accept (or successful build), 1 reject (verification or
//! solver verdict negative), 2 usage and format errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use redcert::cert::{
    compute_R_rigidity, compute_R_tensor, prove_split, prove_tensor_slices, prove_trivial,
    rigidity_slice_l, rigidity_slice_m, tensor_slice_l, tensor_slice_m, tensor_slice_t,
    RigidityCertificate, TensorRankCertificate, TrivialFlavor,
};
use redcert::clique::{brute_clique_R, build_clique_instance, find_clique, CliqueInstance};
use redcert::cnf::{brute_max3sat_exact, brute_sat_bounded, parse_dimacs, Formula};
use redcert::field::{Gf, DEFAULT_PRIME};
use redcert::gen::{generate_line, Generated};
use redcert::matrix::{verify_matrix_factors, FieldMatrix, MatrixFactors, SparseEntries};
use redcert::monotone::{verify_unsat_certificate, FormulaClass, MonotoneCircuit};
use redcert::ov::{brute_ov, sat_to_ov, sat_to_tov, OvInstance};
use redcert::regime::{check_regime, RegimeParams, RegimeVariant};
use redcert::tensor::{verify_tensor_factors, Tensor3, TensorFactors};
use redcert::threshold::{verify_tov_certificate, ThrCircuit};
use redcert::{Error, Result};

#[derive(Parser)]
#[command(
    name = "redcert",
    version,
    about = "Reductions, generators, and certificate verification at desk scale"
)]
struct Cli {
    /// Field prime for instances built by this invocation.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    /// Seed for every randomized operation (split certificates).
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Variable-count ceiling for brute-force solvers.
    #[arg(long, global = true, default_value_t = 24)]
    max_n: u32,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduce a CNF formula to a vector family or a clique instance.
    Reduce(ReduceArgs),
    /// Evaluate a generator seed or emit honest certificates.
    Gen {
        #[command(subcommand)]
        which: GenCmd,
    },
    /// Verify a certificate against an instance.
    Verify(VerifyArgs),
    /// Run a brute-force solver and print the verdict.
    Solve(SolveArgs),
    /// Check a parameter regime; prints each inequality with its margin.
    CheckRegime(RegimeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceKind {
    Ov,
    Tov,
    Clique,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(value_enum)]
    kind: ReduceKind,
    /// DIMACS formula file.
    input: PathBuf,
    /// Group count for `tov`; optional cross-check of the tvec sum for `clique`.
    #[arg(long)]
    t: Option<u64>,
    /// Per-label targets `t0,t1,t2,t3` for `clique`.
    #[arg(long)]
    tvec: Option<String>,
    /// Output path (default: input stem with the target extension).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCmd {
    /// Evaluate one seed line against a formula class.
    Seed(GenSeedArgs),
    /// Write honest slice certificates for a clique instance.
    Certs(GenCertsArgs),
}

#[derive(Args)]
struct GenSeedArgs {
    /// File whose first nonempty line is the seed.
    input: PathBuf,
    /// Class variable count.
    #[arg(long)]
    n: u32,
    /// Class clause width.
    #[arg(long, default_value_t = 3)]
    width: u32,
    /// Class clause-density factor (max clauses = floor(beta * n)).
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Output path (default: input stem + `.gen`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CertMode {
    /// One (M, L) certificate pair per index pair.
    Pair,
    /// A tensor certificate for A_0 plus (M, L, T) per index.
    Index,
}

#[derive(Clone, Copy, ValueEnum)]
enum CertFlavor {
    Sparse,
    Rank,
    Split,
}

#[derive(Args)]
struct GenCertsArgs {
    /// Clique instance file.
    input: PathBuf,
    /// Directory to write `.cert` files into (created if missing).
    #[arg(long, default_value = "certs")]
    dir: PathBuf,
    #[arg(long, value_enum, default_value_t = CertMode::Pair)]
    mode: CertMode,
    #[arg(long, value_enum, default_value_t = CertFlavor::Sparse)]
    flavor: CertFlavor,
    /// Low-rank part size for the `split` flavor.
    #[arg(long, default_value_t = 1)]
    rank: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Unsat,
    Tov,
    Cliquecount,
    Factors,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    kind: VerifyKind,
    /// Instance file (formula, vector family, clique instance, or matrix/tensor).
    instance: PathBuf,
    /// Certificate: circuit file, certs directory, or factors file.
    certificate: PathBuf,
    /// Use the primed (padded-encoding) separation instance for `unsat`.
    #[arg(long)]
    primed: bool,
    /// Cross-check the certified count against the brute-force sum.
    #[arg(long)]
    brute_check: bool,
    /// Print the multiplication count of the certified evaluation.
    #[arg(long)]
    ops: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveKind {
    Sat,
    Max3sat,
    Ov,
    Clique,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(value_enum)]
    kind: SolveKind,
    input: PathBuf,
    /// Exact satisfaction target for `max3sat`.
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Args)]
struct RegimeArgs {
    #[arg(long, default_value = "tradeoff")]
    variant: String,
    #[arg(long, default_value_t = 2.0 / 3.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.25)]
    beta: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 2.372)]
    omega: f64,
    /// Gap above omega = 2 for the matmul-tensor branch note.
    #[arg(long)]
    cap_delta: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Certificate { .. } => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let gf = Gf::new(cli.prime)?;
    match &cli.cmd {
        Cmd::Reduce(args) => cmd_reduce(args, gf, cli.max_n),
        Cmd::Gen { which } => match which {
            GenCmd::Seed(args) => cmd_gen_seed(args, gf),
            GenCmd::Certs(args) => cmd_gen_certs(args, cli.seed),
        },
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Solve(args) => cmd_solve(args, cli.max_n),
        Cmd::CheckRegime(args) => cmd_check_regime(args),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn default_out(input: &Path, ext: &str) -> PathBuf {
    input.with_extension(ext)
}

fn load_formula(path: &Path, max_n: u32) -> Result<Formula> {
    let f = parse_dimacs(&read(path)?)?;
    if f.n() > max_n {
        return Err(Error::SizeBound {
            what: "formula variables (raise --max-n)",
            limit: max_n as u64,
            got: f.n() as u64,
        });
    }
    Ok(f)
}

fn parse_tvec(s: &str) -> Result<[u64; 4]> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("bad tvec entry `{p}`")))
        })
        .collect::<Result<_>>()?;
    parts
        .try_into()
        .map_err(|_| Error::Invalid("tvec needs exactly four entries".into()))
}

fn cmd_reduce(args: &ReduceArgs, gf: Gf, max_n: u32) -> Result<bool> {
    let f = load_formula(&args.input, max_n)?;
    match args.kind {
        ReduceKind::Ov | ReduceKind::Tov => {
            let t = match args.kind {
                ReduceKind::Ov => 2,
                _ => args.t.ok_or_else(|| {
                    Error::Invalid("reduce tov needs --t (group count)".into())
                })? as u32,
            };
            let padded = f.pad_to_multiple(t)?;
            if padded.n() != f.n() {
                println!(
                    "note: padded from {} to {} variables for {} groups",
                    f.n(),
                    padded.n(),
                    t
                );
            }
            let inst = sat_to_tov(&padded, t)?;
            let out = args
                .out
                .clone()
                .unwrap_or_else(|| default_out(&args.input, "ov"));
            write(&out, &inst.to_text())?;
            let sizes: Vec<String> = inst.parts().iter().map(|p| p.len().to_string()).collect();
            println!(
                "ov t={} dim={} parts={} -> {}",
                inst.t(),
                inst.dim(),
                sizes.join(","),
                out.display()
            );
            // keep the dedicated pairwise path covered for `ov`
            if matches!(args.kind, ReduceKind::Ov) {
                debug_assert_eq!(sat_to_ov(&padded)?.to_text(), inst.to_text());
            }
            Ok(true)
        }
        ReduceKind::Clique => {
            let tvec = parse_tvec(args.tvec.as_deref().ok_or_else(|| {
                Error::Invalid("reduce clique needs --tvec t0,t1,t2,t3".into())
            })?)?;
            if let Some(t) = args.t {
                let sum: u64 = tvec.iter().sum();
                if t != sum {
                    return Err(Error::Invalid(format!(
                        "--t {t} does not match the tvec sum {sum}"
                    )));
                }
            }
            let padded = f.pad_to_multiple(4)?;
            if padded.n() != f.n() {
                println!(
                    "note: padded from {} to {} variables for 4 groups",
                    f.n(),
                    padded.n()
                );
            }
            let inst = build_clique_instance(&padded, tvec, gf)?;
            let out = args
                .out
                .clone()
                .unwrap_or_else(|| default_out(&args.input, "ten"));
            write(&out, &inst.to_text())?;
            println!("clique k={} t={} -> {}", inst.k(), inst.t(), out.display());
            Ok(true)
        }
    }
}

fn cmd_gen_seed(args: &GenSeedArgs, gf: Gf) -> Result<bool> {
    let class = FormulaClass::new(args.n, args.width, args.beta)?;
    let text = read(&args.input)?;
    let line = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| Error::Invalid("seed file has no content".into()))?;
    let generated = generate_line(line, &class, gf);
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| default_out(&args.input, "gen"));
    write(&out, &generated.to_text())?;
    match &generated {
        Generated::Matrix(m) => println!("matrix {}x{} -> {}", m.rows(), m.cols(), out.display()),
        Generated::Tensor(t) => {
            let (d1, d2, d3) = t.dims();
            println!("tensor {d1}x{d2}x{d3} -> {}", out.display());
        }
        Generated::Empty => println!("empty -> {}", out.display()),
    }
    Ok(true)
}

fn trivial_for(m: &FieldMatrix, flavor: CertFlavor, rank: usize, rng: &mut ChaCha8Rng) -> Result<RigidityCertificate> {
    Ok(match flavor {
        CertFlavor::Sparse => prove_trivial(m, TrivialFlavor::Sparse),
        CertFlavor::Rank => prove_trivial(m, TrivialFlavor::Rank),
        CertFlavor::Split => prove_split(m, rank.min(m.rows().min(m.cols())), rng)?,
    })
}

fn cmd_gen_certs(args: &GenCertsArgs, seed: u64) -> Result<bool> {
    let inst = CliqueInstance::parse_text(&read(&args.input)?)?;
    let k = inst.k();
    fs::create_dir_all(&args.dir)
        .map_err(|e| Error::Io(format!("{}: {e}", args.dir.display())))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut files = 0usize;
    let mut emit = |name: String, text: String| -> Result<()> {
        write(&args.dir.join(name), &text)?;
        files += 1;
        Ok(())
    };
    match args.mode {
        CertMode::Pair => {
            for j0 in 0..k {
                for j1 in 0..k {
                    let m = trivial_for(&rigidity_slice_m(&inst, j1), args.flavor, args.rank, &mut rng)?;
                    let l = trivial_for(&rigidity_slice_l(&inst, j0), args.flavor, args.rank, &mut rng)?;
                    emit(format!("m_{j0}_{j1}.cert"), m.to_text())?;
                    emit(format!("l_{j0}_{j1}.cert"), l.to_text())?;
                }
            }
        }
        CertMode::Index => {
            let a0 = prove_tensor_slices(inst.tensor(0))?;
            emit("a0.cert".to_string(), a0.to_text())?;
            for j0 in 0..k {
                let m = trivial_for(&tensor_slice_m(&inst, j0), args.flavor, args.rank, &mut rng)?;
                let l = trivial_for(&tensor_slice_l(&inst, j0), args.flavor, args.rank, &mut rng)?;
                let t = trivial_for(&tensor_slice_t(&inst, j0), args.flavor, args.rank, &mut rng)?;
                emit(format!("m_{j0}.cert"), m.to_text())?;
                emit(format!("l_{j0}.cert"), l.to_text())?;
                emit(format!("t_{j0}.cert"), t.to_text())?;
            }
        }
    }
    println!("wrote {files} certificate files to {}", args.dir.display());
    Ok(true)
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    match args.kind {
        VerifyKind::Unsat => {
            let f = parse_dimacs(&read(&args.instance)?)?;
            let c = MonotoneCircuit::parse_text(&read(&args.certificate)?)?;
            let ok = verify_unsat_certificate(&f, &c, args.primed)?;
            println!("{}", if ok { "accept" } else { "reject" });
            Ok(ok)
        }
        VerifyKind::Tov => {
            let inst = OvInstance::parse_text(&read(&args.instance)?)?;
            let c = ThrCircuit::parse_text(&read(&args.certificate)?)?;
            let ok = verify_tov_certificate(&inst, &c)?;
            println!("{}", if ok { "accept" } else { "reject" });
            Ok(ok)
        }
        VerifyKind::Cliquecount => cmd_verify_cliquecount(args),
        VerifyKind::Factors => cmd_verify_factors(args),
    }
}

fn load_cert(dir: &Path, name: &str) -> Result<RigidityCertificate> {
    RigidityCertificate::parse_text(&read(&dir.join(name))?)
}

fn cmd_verify_cliquecount(args: &VerifyArgs) -> Result<bool> {
    let inst = CliqueInstance::parse_text(&read(&args.instance)?)?;
    let k = inst.k();
    let dir = &args.certificate;
    let index_mode = dir.join("a0.cert").exists();
    let (count, ops) = if index_mode {
        let a0 = TensorRankCertificate::parse_text(&read(&dir.join("a0.cert"))?)?;
        let certs: Vec<_> = (0..k)
            .map(|j0| {
                Ok((
                    load_cert(dir, &format!("m_{j0}.cert"))?,
                    load_cert(dir, &format!("l_{j0}.cert"))?,
                    load_cert(dir, &format!("t_{j0}.cert"))?,
                ))
            })
            .collect::<Result<_>>()?;
        compute_R_tensor(&inst, &a0, &certs)?
    } else {
        let certs: Vec<Vec<_>> = (0..k)
            .map(|j0| {
                (0..k)
                    .map(|j1| {
                        Ok((
                            load_cert(dir, &format!("m_{j0}_{j1}.cert"))?,
                            load_cert(dir, &format!("l_{j0}_{j1}.cert"))?,
                        ))
                    })
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        compute_R_rigidity(&inst, &certs)?
    };
    if args.brute_check {
        let brute = inst.gf().el(brute_clique_R(&inst)?);
        if brute != count {
            println!("R={count} MISMATCH brute={brute}");
            return Ok(false);
        }
    }
    println!("R={count} OK");
    if args.ops {
        println!("muls={}", ops.muls);
    }
    Ok(true)
}

fn cmd_verify_factors(args: &VerifyArgs) -> Result<bool> {
    let target = read(&args.instance)?;
    let head = target
        .lines()
        .find(|l| !l.trim().is_empty())
        .and_then(|l| l.split_whitespace().next())
        .unwrap_or("");
    let cert_text = read(&args.certificate)?;
    let cert_head: Vec<&str> = cert_text
        .lines()
        .find(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().take(2).collect())
        .unwrap_or_default();
    let residues = match head {
        "mat" => {
            let m = FieldMatrix::parse_text(&target)?;
            let (factors, sparse) = if cert_head == ["cert", "rigidity"] {
                let c = RigidityCertificate::parse_text(&cert_text)?;
                (c.factors().clone(), c.sparse().clone())
            } else {
                (
                    MatrixFactors::parse_text(&cert_text)?,
                    SparseEntries::default(),
                )
            };
            verify_matrix_factors(&m, &factors, &sparse)?.residues
        }
        "ten" => {
            let t = Tensor3::parse_text(&target)?;
            let factors = if cert_head == ["cert", "tensor"] {
                TensorRankCertificate::parse_text(&cert_text)?.factors().clone()
            } else {
                TensorFactors::parse_text(&cert_text)?
            };
            verify_tensor_factors(&t, &factors)?.residues
        }
        other => {
            return Err(Error::Invalid(format!(
                "target must be a `mat` or `ten` file, found `{other}`"
            )))
        }
    };
    if residues == 0 {
        println!("accept");
        Ok(true)
    } else {
        println!("reject residues={residues}");
        Ok(false)
    }
}

fn cmd_solve(args: &SolveArgs, max_n: u32) -> Result<bool> {
    match args.kind {
        SolveKind::Sat => {
            let f = load_formula(&args.input, max_n)?;
            match brute_sat_bounded(&f, max_n)? {
                Some(a) => {
                    let bits: String =
                        a.iter().map(|&b| if b { '1' } else { '0' }).collect();
                    println!("SAT {bits}");
                    Ok(true)
                }
                None => {
                    println!("UNSAT");
                    Ok(false)
                }
            }
        }
        SolveKind::Max3sat => {
            let f = load_formula(&args.input, max_n)?;
            let t = args
                .t
                .ok_or_else(|| Error::Invalid("solve max3sat needs --t (exact target)".into()))?;
            let yes = brute_max3sat_exact(&f, t, max_n)?;
            println!("{}", if yes { "YES" } else { "NO" });
            Ok(yes)
        }
        SolveKind::Ov => {
            let inst = OvInstance::parse_text(&read(&args.input)?)?;
            match brute_ov(&inst)? {
                Some(w) => {
                    let idx: Vec<String> = w.iter().map(u64::to_string).collect();
                    println!("ORTHOGONAL {}", idx.join(" "));
                    Ok(true)
                }
                None => {
                    println!("NONE");
                    Ok(false)
                }
            }
        }
        SolveKind::Clique => {
            let inst = CliqueInstance::parse_text(&read(&args.input)?)?;
            let r = brute_clique_R(&inst)?;
            println!("R={r}");
            match find_clique(&inst)? {
                Some([j0, j1, j2, j3]) => {
                    println!("CLIQUE {j0} {j1} {j2} {j3}");
                    Ok(true)
                }
                None => {
                    println!("NONE");
                    Ok(false)
                }
            }
        }
    }
}

fn cmd_check_regime(args: &RegimeArgs) -> Result<bool> {
    let variant = RegimeVariant::parse(&args.variant)?;
    let params = RegimeParams {
        alpha: args.alpha,
        beta: args.beta,
        delta: args.delta,
        omega: args.omega,
        cap_delta: args.cap_delta,
    };
    let report = check_regime(&params, variant)?;
    print!("{}", report.render());
    Ok(report.pass)
}
