use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use koszul::jobs::{run, Command, JobSpec, OutputFormat};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Dims,
    BuildGl,
    BuildVoisin,
    ClassRank,
    SplitDetect,
    CheckKs,
    CheckFourTerm,
    GenZero,
    Plucker,
    MuCoker,
    Pfaffian,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Dims => Command::Dims,
            Cmd::BuildGl => Command::BuildGl,
            Cmd::BuildVoisin => Command::BuildVoisin,
            Cmd::ClassRank => Command::ClassRank,
            Cmd::SplitDetect => Command::SplitDetect,
            Cmd::CheckKs => Command::CheckKs,
            Cmd::CheckFourTerm => Command::CheckFourTerm,
            Cmd::GenZero => Command::GenZero,
            Cmd::Plucker => Command::Plucker,
            Cmd::MuCoker => Command::MuCoker,
            Cmd::Pfaffian => Command::Pfaffian,
        }
    }
}

/// Weight-one Koszul cohomology of curves from presentation data.
///
/// Exit status: 0 on success, 2 when a mathematical precondition fails,
/// 3 on malformed or inconsistent input. The prime fields used by
/// `gen-zero` are read from KOSZUL_GENZERO_PRIMES (default "5,7,11").
#[derive(Debug, Parser)]
#[command(name = "koszul", version)]
struct Cli {
    command: Cmd,
    /// Model file (rational or quadric-presented).
    #[arg(long)]
    model: PathBuf,
    /// Emit a JSON report instead of text.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    d1: Option<usize>,
    #[arg(long)]
    d2: Option<usize>,
    /// Index of the section of the first line bundle.
    #[arg(long)]
    s1: Option<usize>,
    /// Index of the section of the second line bundle.
    #[arg(long)]
    s2: Option<usize>,
    /// Product table of a splitting, for build-gl on non-rational models.
    #[arg(long)]
    split: Option<PathBuf>,
    #[arg(long)]
    class: Option<PathBuf>,
    /// Determinant datum, with marked section "t" and subspace "U" where needed.
    #[arg(long)]
    datum: Option<PathBuf>,
    /// Koh–Stillman matrix file.
    #[arg(long)]
    ks: Option<PathBuf>,
    /// Explicit W ({"vectors": ...}) for a Koh–Stillman matrix.
    #[arg(long)]
    w: Option<PathBuf>,
    /// Numeric skew-symmetric matrix for plucker.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Subspace W ({"vectors": ...}) for dims.
    #[arg(long)]
    subspace: Option<PathBuf>,
    /// Use the model's dual_complex block for dims.
    #[arg(long)]
    mixed: bool,
    /// Four comma-separated indices for pfaffian.
    #[arg(long)]
    indices: Option<String>,
}

impl Cli {
    fn into_job(self) -> JobSpec {
        let mut params = BTreeMap::new();
        let numbers = [("p", self.p), ("d1", self.d1), ("d2", self.d2), ("s1", self.s1), ("s2", self.s2)];
        for (key, value) in numbers {
            if let Some(v) = value {
                params.insert(key.to_string(), v.to_string());
            }
        }
        let paths = [
            ("split", self.split),
            ("class", self.class),
            ("datum", self.datum),
            ("ks", self.ks),
            ("w", self.w),
            ("matrix", self.matrix),
            ("subspace", self.subspace),
        ];
        for (key, value) in paths {
            if let Some(path) = value {
                params.insert(key.to_string(), path.display().to_string());
            }
        }
        if self.mixed {
            params.insert("mixed".into(), "true".into());
        }
        if let Some(indices) = self.indices {
            params.insert("indices".into(), indices);
        }
        JobSpec {
            command: self.command.into(),
            model_path: self.model,
            params,
            output: if self.json { OutputFormat::Json } else { OutputFormat::Text },
        }
    }
}

fn main() -> ExitCode {
    let job = Cli::parse().into_job();
    let outcome = run(&job);
    // text-mode errors go to stderr; JSON reports always go to stdout
    if outcome.exit_code != 0 && job.output == OutputFormat::Text {
        eprint!("{}", outcome.report);
    } else {
        print!("{}", outcome.report);
    }
    ExitCode::from(outcome.exit_code as u8)
}
