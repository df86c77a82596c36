use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use affschubert::peterson::{self, Engine};
use affschubert::qhring::QhRing;
use affschubert::rootdata::{ParabolicType, TypeLabel};
use affschubert::table::{TableFile, CONVENTION_FINGERPRINT};

#[derive(Parser)]
#[command(
    name = "affschubert",
    version,
    about = "Affine Schubert calculus and the Peterson map"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List W_af^- (or W^P with --finite) with lengths, words and predicates.
    Enumerate {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 3)]
        max_length: usize,
        /// List minimal coset representatives of the finite Weyl group instead.
        #[arg(long)]
        finite: bool,
        /// Emit JSON instead of tab separated text.
        #[arg(long)]
        json: bool,
    },
    /// Affine Grassmannian commands.
    Gr {
        #[command(subcommand)]
        cmd: GrCommand,
    },
    /// Quantum cohomology commands.
    Qh {
        #[command(subcommand)]
        cmd: QhCommand,
    },
    /// Check that the Peterson map is a ring homomorphism up to a length bound.
    Verify {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 3)]
        max_length: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Directory for cached structure-constant tables.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Subcommand)]
enum GrCommand {
    /// Structure constants of the xi basis for all pairs up to a length.
    Constants {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 2)]
        max_length: usize,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Subcommand)]
enum QhCommand {
    /// Quantum product of two Schubert classes, or the full table.
    Product {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct GroupArgs {
    /// Cartan type, either a letter or a letter followed by the rank (A2).
    #[arg(long = "type")]
    type_name: String,
    #[arg(long)]
    rank: Option<usize>,
    /// Comma separated simple indices of the parabolic, empty for Borel.
    #[arg(long, default_value = "")]
    parabolic: String,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    /// Set every equivariant parameter to zero in the output.
    #[arg(long)]
    non_equivariant: bool,
}

#[derive(Args)]
struct RunArgs {
    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

/// Errors that map to the usage exit code.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// Wraps input errors from the core library so they exit with the usage code.
fn lib<T>(r: affschubert::Result<T>) -> anyhow::Result<T> {
    r.map_err(|e| {
        if e.is_usage() {
            anyhow!(Usage(e.to_string()))
        } else {
            anyhow!(e)
        }
    })
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

impl GroupArgs {
    fn resolve(&self) -> anyhow::Result<(TypeLabel, usize, Vec<usize>)> {
        let mut chars = self.type_name.chars();
        let letter = chars
            .next()
            .and_then(|c| TypeLabel::from_char(c.to_ascii_uppercase()))
            .ok_or_else(|| usage(format!("unknown type {:?}", self.type_name)))?;
        let rest = chars.as_str();
        let from_name = if rest.is_empty() {
            None
        } else {
            Some(
                rest.parse::<usize>()
                    .map_err(|_| usage(format!("bad rank in {:?}", self.type_name)))?,
            )
        };
        let rank = match (from_name, self.rank) {
            (Some(a), Some(b)) if a != b => {
                return Err(usage(format!(
                    "--type {} conflicts with --rank {b}",
                    self.type_name
                )))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => letter
                .default_rank()
                .ok_or_else(|| usage(format!("type {letter} needs --rank")))?,
        };
        if !letter.is_valid_rank(rank) {
            return Err(usage(format!("invalid root system {letter}{rank}")));
        }
        let labels = self
            .parabolic
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| usage(format!("bad parabolic index {s:?}")))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        Ok((letter, rank, labels))
    }

    fn engine(&self) -> anyhow::Result<(Engine, ParabolicType)> {
        let (t, rank, labels) = self.resolve()?;
        let engine = lib(Engine::new(t, rank))?;
        let p = lib(ParabolicType::from_labels(rank, &labels))?;
        Ok((engine, p))
    }
}

impl RunArgs {
    fn apply(&self) {
        if self.threads > 0 {
            // Only fails if a global pool already exists, which keeps the old one.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build_global();
        }
    }
}

/// Writes through a temporary file in the same directory then renames.
fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| usage(format!("bad path {}", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

fn emit(out: &Option<PathBuf>, contents: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => write_atomic(path, contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.write_all(b"\n")?;
            Ok(())
        }
    }
}

/// Exclusive ownership of a cache directory for the lifetime of the value.
struct CacheDir {
    dir: PathBuf,
    lock: PathBuf,
}

impl CacheDir {
    fn open(dir: &Path) -> anyhow::Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let lock = dir.join("lock");
        fs::OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&lock)
            .with_context(|| {
                format!(
                    "cache directory {} is locked by another process",
                    dir.display()
                )
            })?
            .write_all(std::process::id().to_string().as_bytes())?;
        Ok(Self {
            dir: dir.to_path_buf(),
            lock,
        })
    }

    fn path(&self, key: &str) -> PathBuf {
        let digest = hex::encode(Sha256::digest(CONVENTION_FINGERPRINT.as_bytes()));
        self.dir.join(format!("{key}-{}.json", &digest[..16]))
    }

    fn load(&self, key: &str) -> anyhow::Result<Option<TableFile>> {
        let path = self.path(key);
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&path)?;
        let table = TableFile::from_json(&text)?;
        if table.header.fingerprint != CONVENTION_FINGERPRINT {
            return Ok(None);
        }
        Ok(Some(table))
    }

    fn store(&self, key: &str, table: &TableFile) -> anyhow::Result<()> {
        write_atomic(&self.path(key), &table.to_json())
    }
}

impl Drop for CacheDir {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.lock);
    }
}

fn cmd_enumerate(
    group: &GroupArgs,
    max_length: usize,
    finite: bool,
    json: bool,
) -> anyhow::Result<bool> {
    let (engine, p) = group.engine()?;
    let rs = engine.root_system();
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    if finite {
        for v in &rs.enumerate_weyl(&p).min_reps {
            let word = rs.word_string(v);
            lines.push(format!("{}\t{word}", v.length()));
            rows.push(serde_json::json!({ "length": v.length(), "word": word }));
        }
    } else {
        let g = engine.group();
        for (x, len) in lib(g.enumerate_waf_minus(max_length))? {
            let word: Vec<String> = g.reduced_word(&x).iter().map(|i| format!("s{i}")).collect();
            let word = if word.is_empty() {
                "e".to_string()
            } else {
                word.join("*")
            };
            let (in_wp, cond) = (
                peterson::in_wp_af(rs, &x, &p),
                peterson::condition_c(rs, &x, &p),
            );
            lines.push(format!("{len}\t{word}\t{}\t{in_wp}\t{cond}", g.format(&x)));
            rows.push(serde_json::json!({
                "length": len,
                "word": word,
                "element": g.format(&x),
                "in_wp_af": in_wp,
                "condition_c": cond,
            }));
        }
    }
    if json {
        emit(&None, &serde_json::to_string_pretty(&rows)?)?;
    } else {
        emit(&None, &lines.join("\n"))?;
    }
    Ok(true)
}

fn gr_elements(
    engine: &Engine,
    max_length: usize,
) -> anyhow::Result<Vec<affschubert::affweyl::AffineWeylElement>> {
    Ok(lib(engine.group().enumerate_waf_minus(max_length))?
        .into_iter()
        .map(|(x, _)| x)
        .collect())
}

fn cmd_gr_constants(group: &GroupArgs, max_length: usize, out: &OutArgs) -> anyhow::Result<bool> {
    let (engine, _) = group.engine()?;
    let els = gr_elements(&engine, max_length)?;
    let table = lib(peterson::compute_gr_table(engine.gr(), &els))?;
    let file = TableFile::from_gr(engine.group(), &table, max_length, out.non_equivariant);
    emit(&out.out, &file.to_json())?;
    Ok(true)
}

fn cmd_qh_product(
    group: &GroupArgs,
    u: &Option<String>,
    v: &Option<String>,
    out: &OutArgs,
) -> anyhow::Result<bool> {
    let (engine, p) = group.engine()?;
    let rs = engine.root_system();
    let qh = lib(engine.qh(&p))?;
    let max_length = qh.min_reps().iter().map(|w| w.length()).max().unwrap_or(0);
    let table = match (u, v) {
        (Some(u), Some(v)) => {
            let (u, v) = (lib(rs.parse_word(u))?, lib(rs.parse_word(v))?);
            let prod = lib(qh.quantum_product(&u, &v))?;
            [((u, v), prod)].into_iter().collect()
        }
        (None, None) => lib(peterson::compute_qh_table(&qh))?,
        _ => return Err(usage("--u and --v must be given together")),
    };
    let file = TableFile::from_qh(rs, &p, &table, max_length, out.non_equivariant);
    emit(&out.out, &file.to_json())?;
    Ok(true)
}

fn cache_key(engine: &Engine, p: Option<&ParabolicType>, max_length: Option<usize>) -> String {
    let mut key = engine.root_system().name();
    if let Some(p) = p {
        let labels: Vec<String> = p.labels().iter().map(|i| i.to_string()).collect();
        key.push_str(&format!("-qh-p{}", labels.join("_")));
    }
    if let Some(n) = max_length {
        key.push_str(&format!("-gr-len{n}"));
    }
    key
}

fn cmd_verify(
    group: &GroupArgs,
    max_length: usize,
    report_path: &Option<PathBuf>,
    cache_dir: &Option<PathBuf>,
) -> anyhow::Result<bool> {
    let (engine, p) = group.engine()?;
    let qh: QhRing = lib(engine.qh(&p))?;
    let rs = engine.root_system();
    let cache = cache_dir.as_deref().map(CacheDir::open).transpose()?;

    let gr_key = cache_key(&engine, None, Some(max_length));
    let gr_table = match cache
        .as_ref()
        .map(|c| c.load(&gr_key))
        .transpose()?
        .flatten()
    {
        Some(file) => lib(file.to_gr(engine.group()))?,
        None => {
            let els = gr_elements(&engine, max_length)?;
            let table = lib(peterson::compute_gr_table(engine.gr(), &els))?;
            if let Some(c) = &cache {
                c.store(
                    &gr_key,
                    &TableFile::from_gr(engine.group(), &table, max_length, false),
                )?;
            }
            table
        }
    };
    let qh_key = cache_key(&engine, Some(&p), None);
    let qh_len = qh.min_reps().iter().map(|w| w.length()).max().unwrap_or(0);
    let qh_table = match cache
        .as_ref()
        .map(|c| c.load(&qh_key))
        .transpose()?
        .flatten()
    {
        Some(file) => lib(file.to_qh(rs))?,
        None => {
            let table = lib(peterson::compute_qh_table(&qh))?;
            if let Some(c) = &cache {
                c.store(&qh_key, &TableFile::from_qh(rs, &p, &table, qh_len, false))?;
            }
            table
        }
    };

    let report = lib(peterson::verify_with_tables(
        &engine, &qh, max_length, &gr_table, &qh_table,
    ))?;
    let json = serde_json::to_string_pretty(&report)?;
    match report_path {
        Some(path) => {
            write_atomic(path, &json)?;
            eprintln!(
                "{}: {} pairs, {} failures",
                rs.name(),
                report.pairs_checked,
                report.failures.len()
            );
        }
        None => emit(&None, &json)?,
    }
    Ok(report.passed())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match &cli.cmd {
        Command::Enumerate {
            group,
            max_length,
            finite,
            json,
        } => cmd_enumerate(group, *max_length, *finite, *json),
        Command::Gr {
            cmd:
                GrCommand::Constants {
                    group,
                    max_length,
                    out,
                    run,
                },
        } => {
            run.apply();
            cmd_gr_constants(group, *max_length, out)
        }
        Command::Qh {
            cmd:
                QhCommand::Product {
                    group,
                    u,
                    v,
                    out,
                    run,
                },
        } => {
            run.apply();
            cmd_qh_product(group, u, v, out)
        }
        Command::Verify {
            group,
            max_length,
            report,
            cache_dir,
            run,
        } => {
            run.apply();
            cmd_verify(group, *max_length, report, cache_dir)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(t: &str, rank: Option<usize>, p: &str) -> GroupArgs {
        GroupArgs {
            type_name: t.into(),
            rank,
            parabolic: p.into(),
        }
    }

    #[test]
    fn type_resolution() {
        assert_eq!(
            args("A2", None, "").resolve().unwrap(),
            (TypeLabel::A, 2, vec![])
        );
        assert_eq!(
            args("C", Some(2), "1").resolve().unwrap(),
            (TypeLabel::C, 2, vec![1])
        );
        assert_eq!(args("G", None, "").resolve().unwrap().1, 2);
        assert!(args("A", None, "").resolve().is_err());
        assert!(args("A2", Some(3), "").resolve().is_err());
        assert!(args("X2", None, "").resolve().is_err());
        assert!(args("A2", None, "x").resolve().is_err());
    }
}
