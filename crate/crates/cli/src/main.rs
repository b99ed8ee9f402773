use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qmat::classify::Progress;
use qmat::steiner::{scan_classes, REPORT_HEADER};
use qmat::{
    automorphism_order, canonical_check, canonical_form, matroid_from_steiner, minimal_members, ClassTable,
    ClassifyOptions, Extender, QMatroid, SteinerSystem, Subspace,
};

#[derive(Parser)]
#[command(name = "qmat", version, about = "Extensions and classification of q-matroids")]
struct Cli {
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true, env = "QMAT_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify q-matroids on F_q^n, one rank or all ranks.
    Classify {
        #[arg(long)]
        q: u8,
        #[arg(long)]
        n: usize,
        /// Single rank; prints its encodings instead of the count row.
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        store: Store,
    },
    /// Print the count table for n = 1..=max-n.
    Table {
        #[arg(long)]
        q: u8,
        #[arg(long)]
        max_n: usize,
        #[command(flatten)]
        store: Store,
    },
    /// List the modular cuts of a q-matroid by their minimal members.
    Cuts {
        file: PathBuf,
    },
    /// List modular cut selectors, trivial first.
    Selectors {
        file: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Build the extension given by the selector at position IDX of `selectors`.
    Extend {
        file: PathBuf,
        #[arg(long)]
        selector: usize,
    },
    /// Print the canonical form and whether the input already was canonical.
    Canon {
        file: PathBuf,
    },
    /// Print the order of the automorphism group in GL(n, q).
    Aut {
        file: PathBuf,
    },
    Dual {
        file: PathBuf,
    },
    /// Restrict to a subspace given in row syntax, e.g. `100;011`.
    Restrict {
        file: PathBuf,
        #[arg(long)]
        subspace: String,
    },
    /// Scan the rank 3 classes on F_2^5 for residual q-Fano candidates.
    FanoScan {
        /// Stored classification; computed from scratch when omitted.
        #[arg(long)]
        classes: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a blocks file for the q-Steiner property.
    SteinerCheck {
        file: PathBuf,
        #[arg(long)]
        q: u8,
        #[arg(long)]
        t: usize,
    },
}

#[derive(Args)]
struct Store {
    /// Load existing result files from here and save new ones.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-parent checkpoint directory.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, requires = "checkpoint")]
    resume: bool,
}

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let mut out = std::io::stdout().lock();
    match run(cli.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn read_matroid(path: &Path) -> CliResult<QMatroid> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(QMatroid::parse_file(&text)?)
}

fn report_progress(p: Progress) {
    eprintln!("n={} k={}: parent {}/{} done, {} canonical extensions", p.n, p.k, p.parent, p.parents, p.found);
}

fn open_table(q: u8, store: &Store) -> CliResult<ClassTable> {
    if let Some(dir) = &store.out {
        if dir.is_dir() && fs::read_dir(dir)?.next().is_some() {
            let t = ClassTable::load(dir)?;
            if t.q() != q {
                return Err(format!("{} holds q={} results", dir.display(), t.q()).into());
            }
            return Ok(t);
        }
    }
    Ok(ClassTable::new(q)?)
}

fn options(store: &Store) -> ClassifyOptions<'static> {
    ClassifyOptions { checkpoint_dir: store.checkpoint.clone(), resume: store.resume, progress: Some(&report_progress) }
}

fn run(cmd: Command, out: &mut impl Write) -> CliResult<()> {
    match cmd {
        Command::Classify { q, n, k, store } => {
            let mut t = open_table(q, &store)?;
            let opts = options(&store);
            match k {
                Some(k) => {
                    for e in t.ensure(n, k, &opts)? {
                        writeln!(out, "{}", e.bitstring())?;
                    }
                }
                None => {
                    let counts = t.ensure_full(n, &opts)?;
                    let counts: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
                    writeln!(out, "{}", counts.join("\t"))?;
                }
            }
            if let Some(dir) = &store.out {
                t.save(dir)?;
            }
        }
        Command::Table { q, max_n, store } => {
            let mut t = open_table(q, &store)?;
            let opts = options(&store);
            for n in 1..=max_n {
                t.ensure_full(n, &opts)?;
            }
            write!(out, "{}", t.format_counts(max_n))?;
            if let Some(dir) = &store.out {
                t.save(dir)?;
            }
        }
        Command::Cuts { file } => {
            let m = read_matroid(&file)?;
            let ext = Extender::new(&m)?;
            for (i, c) in ext.cuts().iter().enumerate() {
                let mins: Vec<String> = minimal_members(ext.flats(), c).iter().map(|s| s.to_string()).collect();
                let mins = if mins.is_empty() { "-".to_string() } else { mins.join(" ") };
                writeln!(out, "{i}\t{}\t{mins}", c.len())?;
            }
        }
        Command::Selectors { file, limit } => {
            let m = read_matroid(&file)?;
            let ext = Extender::new(&m)?;
            for (i, s) in ext.selectors().take(limit.unwrap_or(usize::MAX)).enumerate() {
                writeln!(out, "{i}\t{s}")?;
            }
        }
        Command::Extend { file, selector } => {
            let m = read_matroid(&file)?;
            let ext = Extender::new(&m)?;
            let sel = ext.selectors().nth(selector).ok_or_else(|| format!("selector index {selector} out of range"))?;
            write!(out, "{}", ext.extend(&sel)?.to_file_string())?;
        }
        Command::Canon { file } => {
            let m = read_matroid(&file)?;
            let check = canonical_check(&m);
            let (c, _) = canonical_form(&m);
            write!(out, "{}", c.to_file_string())?;
            writeln!(out, "canonical: {}", check.canonical)?;
        }
        Command::Aut { file } => {
            let m = read_matroid(&file)?;
            writeln!(out, "{}", automorphism_order(&m))?;
        }
        Command::Dual { file } => {
            let m = read_matroid(&file)?;
            write!(out, "{}", m.dual().to_file_string())?;
        }
        Command::Restrict { file, subspace } => {
            let m = read_matroid(&file)?;
            let s = Subspace::parse_in(m.q(), m.n(), &subspace)?;
            write!(out, "{}", m.restriction(&s)?.to_file_string())?;
        }
        Command::FanoScan { classes, out: path } => {
            let mut t = match &classes {
                Some(dir) => ClassTable::load(dir)?,
                None => ClassTable::new(2)?,
            };
            if t.q() != 2 {
                return Err("fano-scan needs a q=2 classification".into());
            }
            let opts = ClassifyOptions { progress: Some(&report_progress), ..Default::default() };
            let rank3 = t.ensure_dual(5, 3, &opts)?.to_vec();
            let reports = scan_classes(&rank3)?;
            let mut text = format!("{REPORT_HEADER}\n");
            for r in &reports {
                text.push_str(&r.tsv_line());
                text.push('\n');
            }
            match path {
                Some(p) => fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display()))?,
                None => write!(out, "{text}")?,
            }
            eprintln!("{} of {} rank 3 classes are residual candidates", reports.len(), rank3.len());
        }
        Command::SteinerCheck { file, q, t } => {
            let text = fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            let s = SteinerSystem::parse(q, t, &text)?;
            let ok = s.is_valid()?;
            writeln!(out, "S_{}({}, {}, {}): {ok}", s.q, s.t, s.k, s.n)?;
            if ok {
                let m = matroid_from_steiner(&s)?;
                writeln!(out, "rank: {}", m.rank())?;
                writeln!(out, "flats: {}", m.flats().len())?;
            }
        }
    }
    Ok(())
}
