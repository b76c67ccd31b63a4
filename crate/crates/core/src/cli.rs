//! The `unishare` command line: argument parsing, file handling and exit codes.
//!
//! Exit codes: 0 success, 2 validation failure (including a failed perfectness
//! or certificate check), 3 cap exceeded, 4 I/O error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::bounds::{
    certificate_bound, entropy_lp, export_lp, load_solution, lp_bound, universal_lower_bound_with, universal_lp,
    BoundReport, Certificate, LP_PARTICIPANT_CAP,
};
use crate::builder::{build, size_profile, BuildTrace, BUILD_CAP};
use crate::complexity::{ne_scan, HarmonicTable};
use crate::gf2::BitVector;
use crate::schemes::{
    brute_force_verify, reconstruct, scheme_from_json, scheme_to_json, verify_perfect, Dealer, PerfectnessReport,
    Transcript, BRUTE_FORCE_SEED_CAP,
};
use crate::structures::{
    independent_sequence_structure, structure_from_json, theorem7_structure, universal_normalized,
    AccessStructure,
};
use crate::{fraction_string, to_f64, Error, Rational, Result, SCHEMA_VERSION};

/// Hard limit on `table`.
pub const TABLE_CAP: usize = 1_000_000;
/// Hard limit on the sequence-certificate column of `table`.
const TABLE_SEQUENCE_CAP: usize = crate::structures::MAX_SEQUENCE_SETS;

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Everything one invocation depends on.
#[derive(Debug, Parser)]
#[command(name = "unishare", version, about = "Secret sharing for universal access structures")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Directory for relative output paths.
    #[arg(long, global = true, env = "UNISHARE_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Reject structure files whose sets are not an antichain instead of minimizing them.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(flatten)]
    pub caps: CapArgs,
}

/// Cap overrides; each may only be lowered.
#[derive(Debug, Clone, Args)]
pub struct CapArgs {
    /// Largest N for `build` (at most 6)
    #[arg(long, global = true)]
    pub cap_build: Option<usize>,
    /// Largest N for `table` (at most 10^6)
    #[arg(long, global = true)]
    pub cap_table: Option<usize>,
    /// Most participants for an entropy LP (at most 14)
    #[arg(long, global = true)]
    pub cap_lp: Option<usize>,
    /// Largest seed dimension for exhaustive checks (at most 24)
    #[arg(long, global = true)]
    pub cap_brute_force: Option<usize>,
}

/// Effective caps after applying overrides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub build: usize,
    pub table: usize,
    pub lp_participants: usize,
    pub brute_force_seed: usize,
}

impl CapArgs {
    pub fn resolve(&self) -> Result<Caps> {
        fn pick(what: &'static str, v: Option<usize>, hard: usize) -> Result<usize> {
            match v {
                Some(v) if v > hard => Err(Error::cap(what, v, hard)),
                Some(v) => Ok(v),
                None => Ok(hard),
            }
        }
        Ok(Caps {
            build: pick("--cap-build", self.cap_build, BUILD_CAP)?,
            table: pick("--cap-table", self.cap_table, TABLE_CAP)?,
            lp_participants: pick("--cap-lp", self.cap_lp, LP_PARTICIPANT_CAP)?,
            brute_force_seed: pick("--cap-brute-force", self.cap_brute_force, BRUTE_FORCE_SEED_CAP)?,
        })
    }
}

/// `n` given either positionally or as `--n`.
#[derive(Debug, Clone, Args)]
pub struct NArg {
    #[arg(value_name = "N")]
    pub pos: Option<usize>,
    #[arg(long = "n", value_name = "N", conflicts_with = "pos")]
    pub flag: Option<usize>,
}

impl NArg {
    fn get(&self) -> Result<usize> {
        self.pos.or(self.flag).ok_or_else(|| Error::InvalidArgument("missing N".into()))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// CSV of max f_n, its maximizer, the n/e margin and lower bounds for n = 2..=N.
    Table {
        #[command(flatten)]
        n: NArg,
        /// One row per (n, i) with f_n(i), instead of one row per n.
        #[arg(long)]
        profile: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the scheme for U*_N and write it as JSON.
    Build {
        #[command(flatten)]
        n: NArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a scheme file for perfectness.
    Verify {
        #[arg(long)]
        scheme: PathBuf,
        /// Check against U*_N.
        #[arg(long = "n", conflicts_with = "structure")]
        n: Option<usize>,
        /// Check against a structure file.
        #[arg(long)]
        structure: Option<PathBuf>,
        /// Also run the exhaustive check and require agreement.
        #[arg(long)]
        brute_force: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Deal shares of a secret.
    Deal {
        #[arg(long)]
        scheme: PathBuf,
        /// Secret as a 0/1 string; random from --seed when omitted.
        #[arg(long)]
        secret: Option<String>,
        /// Comma-separated participants to keep in the output.
        #[arg(long, value_delimiter = ',')]
        participants: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the secret from a share file.
    Reconstruct {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        shares: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entropy LP lower bound.
    Lp {
        /// Use U*_N.
        #[arg(long, conflicts_with = "structure")]
        universal: Option<usize>,
        #[arg(long)]
        structure: Option<PathBuf>,
        /// Solve the full model instead of the symmetry-reduced one.
        #[arg(long)]
        no_reduce: bool,
        /// Solve from scratch even when a stored solution exists.
        #[arg(long)]
        fresh: bool,
        /// Write the full model in CPLEX LP format and skip solving.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Check a `name value` solution from an outside solver instead of solving.
        #[arg(long, conflicts_with = "export")]
        solution: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Independent-sequence certificate bound.
    Cert {
        /// The classical construction on N sets.
        #[arg(long, conflicts_with_all = ["sequence", "structure"])]
        theorem7: Option<usize>,
        /// The construction with a qualified base set on N sets.
        #[arg(long, conflicts_with = "structure")]
        sequence: Option<usize>,
        #[arg(long, requires = "certificate")]
        structure: Option<PathBuf>,
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Best lower bound for the universal structure on N sets.
    LowerBound {
        #[command(flatten)]
        n: NArg,
        #[arg(long)]
        fresh: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_VALIDATION,
    }
}

/// Result of a command: text for the output file or stdout, and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
    /// Human-readable summary: printed on stdout when `text` goes to a file, else on stderr.
    pub summary: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0, summary: None }
    }
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serializes")
}

fn check_n_range(n: usize, cap: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("N must be at least 2, got {n}")));
    }
    if n > cap {
        return Err(Error::cap("N", n, cap));
    }
    Ok(())
}

impl RunConfig {
    /// Where `out` goes: relative paths are placed under `--out-dir` when set.
    pub fn output_path(&self, out: Option<&PathBuf>) -> Option<PathBuf> {
        match (out, &self.out_dir) {
            (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
            (Some(p), _) => Some(p.clone()),
            (None, _) => None,
        }
    }

    fn out(&self) -> Option<&PathBuf> {
        match &self.command {
            Command::Table { out, .. }
            | Command::Build { out, .. }
            | Command::Verify { out, .. }
            | Command::Deal { out, .. }
            | Command::Reconstruct { out, .. }
            | Command::Lp { out, .. }
            | Command::Cert { out, .. }
            | Command::LowerBound { out, .. } => out.as_ref(),
        }
    }

    fn structure_file(&self, path: &Path) -> Result<AccessStructure> {
        structure_from_json(&read(path)?, self.strict)
    }

    /// Runs the command and returns its output without writing it.
    pub fn execute(&self) -> Result<Outcome> {
        let caps = self.caps.resolve()?;
        match &self.command {
            Command::Table { n, profile, .. } => {
                let n = n.get()?;
                check_n_range(n, caps.table)?;
                if *profile {
                    check_n_range(n, PROFILE_CAP)?;
                    return profile_csv(n).map(Outcome::ok);
                }
                table_csv(n, caps).map(Outcome::ok)
            }
            Command::Build { n, .. } => {
                let n = n.get()?;
                check_n_range(n, caps.build)?;
                let (scheme, trace) = build(n)?;
                let mut outcome = Outcome::ok(scheme_to_json(&scheme));
                outcome.summary = Some(trace_table(&trace));
                Ok(outcome)
            }
            Command::Verify { scheme, n, structure, brute_force, .. } => {
                let scheme = scheme_from_json(&read(scheme)?)?;
                let (name, structure) = match (n, structure) {
                    (Some(n), _) => {
                        check_n_range(*n, caps.build)?;
                        (format!("U*_{n}"), universal_normalized(*n)?)
                    }
                    (None, Some(p)) => (p.display().to_string(), self.structure_file(p)?),
                    (None, None) => return Err(Error::InvalidArgument("give --n or --structure".into())),
                };
                verify_command(&name, &scheme, &structure, *brute_force, caps)
            }
            Command::Deal { scheme, secret, participants, .. } => {
                let scheme = scheme_from_json(&read(scheme)?)?;
                let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
                let secret = match secret {
                    Some(s) => BitVector::parse(s)?,
                    None => BitVector::random(scheme.secret_dim(), &mut rng),
                };
                let shares = Dealer::new(&scheme)?.deal(&secret, &mut rng)?;
                let mut transcript = Transcript::new(scheme.secret_dim(), Some(self.seed), &shares);
                if let Some(keep) = participants {
                    if let Some(&p) = keep.iter().find(|&&p| p >= shares.len()) {
                        return Err(Error::InvalidArgument(format!("participant {p} out of range")));
                    }
                    transcript.shares.retain(|e| keep.contains(&e.participant));
                }
                Ok(Outcome::ok(transcript.to_json()))
            }
            Command::Reconstruct { scheme, shares, .. } => {
                let scheme = scheme_from_json(&read(scheme)?)?;
                let transcript = Transcript::from_json(&read(shares)?)?;
                let (subset, shares) = transcript.subset_and_shares()?;
                let secret = reconstruct(&scheme, subset, &shares)?;
                #[derive(Serialize)]
                struct Recovered {
                    schema_version: u32,
                    secret: String,
                }
                Ok(Outcome::ok(json(&Recovered { schema_version: SCHEMA_VERSION, secret: secret.to_string() })))
            }
            Command::Lp { universal, structure, no_reduce, fresh, export, solution, .. } => {
                let (name, s) = match (universal, structure) {
                    (Some(n), _) => {
                        check_n_range(*n, 7)?;
                        (format!("U*_{n}"), universal_normalized(*n)?)
                    }
                    (None, Some(p)) => (p.display().to_string(), self.structure_file(p)?),
                    (None, None) => return Err(Error::InvalidArgument("give --universal or --structure".into())),
                };
                if s.m() > caps.lp_participants {
                    return Err(Error::cap("participants for the entropy LP", s.m(), caps.lp_participants));
                }
                if let Some(path) = export {
                    let model = entropy_lp(&s)?;
                    let path = self.output_path(Some(path)).expect("path given");
                    export_lp(&model, &path)?;
                    #[derive(Serialize)]
                    struct Exported {
                        schema_version: u32,
                        structure: String,
                        file: String,
                        variables: usize,
                        rows: usize,
                    }
                    return Ok(Outcome::ok(json(&Exported {
                        schema_version: SCHEMA_VERSION,
                        structure: name,
                        file: path.display().to_string(),
                        variables: model.num_vars(),
                        rows: model.num_rows(),
                    })));
                }
                if let Some(path) = solution {
                    let model = entropy_lp(&s)?;
                    let sol = load_solution(&model, &read(path)?)?;
                    return Ok(Outcome::ok(BoundReport::with_external(&name, s.m(), &model, &sol).to_json()));
                }
                let lp = match universal {
                    Some(n) if !no_reduce => universal_lp(*n, !fresh)?.1,
                    _ => lp_bound(&s, !no_reduce)?.1,
                };
                Ok(Outcome::ok(BoundReport::with_lp(&name, s.m(), lp).to_json()))
            }
            Command::Cert { theorem7, sequence, structure, certificate, .. } => {
                let (name, s, cert) = match (theorem7, sequence, structure, certificate) {
                    (Some(n), ..) => {
                        let (s, c) = theorem7_structure(*n)?;
                        (format!("theorem7_structure({n})"), s, c)
                    }
                    (None, Some(n), ..) => {
                        let (s, c) = independent_sequence_structure(*n)?;
                        (format!("independent_sequence_structure({n})"), s, c)
                    }
                    (None, None, Some(sp), Some(cp)) => {
                        (sp.display().to_string(), self.structure_file(sp)?, Certificate::from_json(&read(cp)?)?)
                    }
                    _ => {
                        return Err(Error::InvalidArgument(
                            "give --theorem7, --sequence, or --structure with --certificate".into(),
                        ))
                    }
                };
                Ok(cert_command(&name, &s, &cert))
            }
            Command::LowerBound { n, fresh, .. } => {
                let n = n.get()?;
                check_n_range(n, crate::structures::MAX_SEQUENCE_SETS)?;
                Ok(Outcome::ok(universal_lower_bound_with(n, !fresh)?.to_json()))
            }
        }
    }

    /// Runs the command and writes its output; returns the exit code.
    pub fn run(&self) -> i32 {
        let outcome = match self.execute() {
            Ok(o) => o,
            Err(e) => {
                eprintln!("error: {e}");
                return exit_code(&e);
            }
        };
        match self.output_path(self.out()) {
            Some(path) => {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    if let Err(e) = fs::create_dir_all(dir) {
                        eprintln!("error: {e}");
                        return EXIT_IO;
                    }
                }
                if let Err(e) = fs::write(&path, &outcome.text) {
                    eprintln!("error: {}: {e}", path.display());
                    return EXIT_IO;
                }
                if let Some(summary) = &outcome.summary {
                    print!("{summary}");
                }
            }
            None => {
                print!("{}", ensure_newline(&outcome.text));
                if let Some(summary) = &outcome.summary {
                    eprint!("{summary}");
                }
            }
        }
        outcome.code
    }
}

fn ensure_newline(s: &str) -> String {
    if s.ends_with('\n') {
        s.to_string()
    } else {
        format!("{s}\n")
    }
}

#[derive(Serialize)]
struct VerifyOutput {
    schema_version: u32,
    structure: String,
    participants: usize,
    seed_dim: usize,
    secret_dim: usize,
    complexity: String,
    rank_based: PerfectnessReport,
    brute_force: Option<PerfectnessReport>,
    perfect: bool,
}

fn verify_command(
    name: &str,
    scheme: &crate::schemes::LinearScheme,
    structure: &AccessStructure,
    brute: bool,
    caps: Caps,
) -> Result<Outcome> {
    let rank = verify_perfect(scheme, structure)?;
    let bf = if brute {
        if scheme.seed_dim() > caps.brute_force_seed {
            return Err(Error::cap("seed bits for brute force", scheme.seed_dim(), caps.brute_force_seed));
        }
        Some(brute_force_verify(scheme, structure)?)
    } else {
        None
    };
    let agree = bf.as_ref().is_none_or(|b| b.agrees_with(&rank));
    let perfect = rank.is_perfect() && agree;
    let out = VerifyOutput {
        schema_version: SCHEMA_VERSION,
        structure: name.to_string(),
        participants: scheme.participants(),
        seed_dim: scheme.seed_dim(),
        secret_dim: scheme.secret_dim(),
        complexity: fraction_string(&scheme.complexity()),
        rank_based: rank,
        brute_force: bf,
        perfect,
    };
    Ok(Outcome { text: json(&out), code: if perfect { 0 } else { EXIT_VALIDATION }, summary: None })
}

fn cert_command(name: &str, structure: &AccessStructure, cert: &Certificate) -> Outcome {
    match BoundReport::for_certificate(structure, cert, name) {
        Ok(report) => Outcome::ok(report.to_json()),
        Err(e) => {
            let report = BoundReport::rejected(name, structure.m(), format!("certificate rejected: {e}"));
            Outcome { text: report.to_json(), code: exit_code(&e), summary: None }
        }
    }
}

/// Largest `n` for `table --profile` (exact values for every `i`).
pub const PROFILE_CAP: usize = 2_000;

/// Class, class count `C(n, i)`, share bits and bits per secret bit.
pub fn trace_table(trace: &BuildTrace) -> String {
    let mut out = format!(
        "U*_{}: secret {} bits, seed {} bits\nclass  count  bits  ratio\n",
        trace.n, trace.secret_dim, trace.seed_dim
    );
    let mut count: u64 = 1;
    for (i, ratio) in size_profile(trace) {
        count = count * (trace.n as u64 + 1 - i as u64) / i as u64;
        out.push_str(&format!("{i:>5}  {count:>5}  {:>4}  {}\n", trace.class_size(i), fraction_string(&ratio)));
    }
    out
}

/// Rows `n, i, f, f_decimal, max_f, argmax, ne_margin` for every `1 ≤ i ≤ n`.
pub fn profile_csv(n_max: usize) -> Result<String> {
    let table = HarmonicTable::new(n_max)?;
    let scan = ne_scan(n_max)?;
    let mut out = String::from("n,i,f,f_decimal,max_f,argmax,ne_margin\n");
    for row in scan {
        let n = row.n;
        let max = row.max.as_ref().map(fraction_string).unwrap_or_default();
        for i in 1..=n {
            let f = table.f(n, i)?;
            out.push_str(&format!(
                "{n},{i},{},{:.9},{max},{},{:.6}\n",
                fraction_string(&f),
                to_f64(&f),
                row.argmax,
                row.margin()
            ));
        }
    }
    Ok(out)
}

/// Rows `n, max_f, argmax, ne_margin, sequence_bound, lower_bound`.
///
/// `max_f` is exact up to the exact-scan limit and decimal above it;
/// `sequence_bound` is the checked independent-sequence bound;
/// `lower_bound` adds the exact LP optimum where the LP fits.
pub fn table_csv(n_max: usize, caps: Caps) -> Result<String> {
    let rows = ne_scan(n_max)?;
    let mut out = String::from("n,max_f,argmax,ne_margin,sequence_bound,lower_bound\n");
    for row in rows {
        let n = row.n;
        let max = row.max.as_ref().map_or_else(|| format!("{:.9}", row.max_f64), fraction_string);
        let seq = if n <= TABLE_SEQUENCE_CAP {
            let (s, c) = independent_sequence_structure(n)?;
            Some(certificate_bound(&s, &c)?)
        } else {
            None
        };
        let mut lower: Option<Rational> = seq.clone();
        if n < 8 && (1usize << n) - 2 <= caps.lp_participants.min(LP_PARTICIPANT_CAP) {
            let (sol, _) = universal_lp(n, true)?;
            if lower.as_ref().is_none_or(|l| sol.value > *l) {
                lower = Some(sol.value);
            }
        }
        let fmt = |r: &Option<Rational>| r.as_ref().map(fraction_string).unwrap_or_default();
        out.push_str(&format!("{n},{max},{},{:.6},{},{}\n", row.argmax, row.margin(), fmt(&seq), fmt(&lower)));
    }
    Ok(out)
}

/// Parses arguments and runs; the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg.run(),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            code
        }
    }
}
