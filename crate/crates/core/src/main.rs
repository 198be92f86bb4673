//! Command-line front end: fan validation, combinatorics inspection, exact
//! intersection numbers, certification with replay-checked certificates, and
//! the catalog-wide classification run.
//!
//! Exit codes: 0 success, 1 invalid input, 2 internal consistency failure.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use toric4::blowup::{blowup_edges, propagate, VerdictOrigin};
use toric4::catalog::{builtin_catalog, CatalogEntry};
use toric4::chow::intersection_number;
use toric4::fan::Fan;
use toric4::fanfile::FanFile;
use toric4::obstruction::{certify, Mode, RuleFired, Verdict, VerdictStatus};
use toric4::picard::basis_relations;
use toric4::replay::replay;

#[derive(Parser)]
#[command(name = "toric4", about = "Toric 4-fold abelian-surface obstruction certifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliMode {
    Finite,
    Embedding,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Mode {
        match m {
            CliMode::Finite => Mode::FiniteMorphism,
            CliMode::Embedding => Mode::Embedding,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check primitivity of rays, smoothness, and completeness.
    Validate { fan_file: PathBuf },
    /// Print the primitive collections and their relations (1-based labels).
    Collections { fan_file: PathBuf },
    /// Print the four divisor relations for a chosen ray basis.
    Relations {
        fan_file: PathBuf,
        /// Four 0-based ray indices, comma-separated.
        #[arg(long, value_delimiter = ',')]
        basis: Vec<usize>,
    },
    /// Print the exact quadruple intersection number D_i D_j D_k D_l.
    Intersect {
        fan_file: PathBuf,
        i: usize,
        j: usize,
        k: usize,
        l: usize,
    },
    /// Certify non-existence of totally nondegenerate finite morphisms or
    /// embeddings from abelian surfaces.
    Certify {
        fan_file: PathBuf,
        #[arg(long, value_enum)]
        mode: CliMode,
        /// Write the machine-checkable certificate to this path.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Operations over the built-in fan catalog.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Certify every catalog fan in both modes, propagate verdicts along
    /// detected 2-blow-up relations, and emit the classification table.
    CertifyAll {
        /// Directory of extra fan files (*.json) to include.
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Worker threads for per-fan certification.
        #[arg(long)]
        jobs: Option<usize>,
        /// Where to write the CSV table.
        #[arg(long, default_value = "classification.csv")]
        csv: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message.replace('\n', " "));
            ExitCode::from(e.code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

fn invalid(message: impl Into<String>) -> CliError {
    CliError {
        code: 1,
        message: message.into(),
    }
}

fn internal(message: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        message: message.into(),
    }
}

fn load_fan(path: &Path) -> Result<Fan, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {}", path.display(), e)))?;
    let file = FanFile::parse(&text).map_err(|e| invalid(e.to_string()))?;
    file.into_fan().map_err(|e| invalid(e.to_string()))
}

/// Human-readable 1-based divisor label.
fn dlabel(i: usize) -> String {
    format!("D{}", i + 1)
}

fn xlabel(i: usize) -> String {
    format!("x{}", i + 1)
}

/// `c1 D_a + c2 D_b + ... = 0` with 1-based labels, coefficient 1 omitted.
fn format_relation(coeffs: &[i64]) -> String {
    let mut out = String::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        let a = c.abs();
        if a != 1 {
            out.push_str(&format!("{} ", a));
        }
        out.push_str(&dlabel(i));
    }
    if out.is_empty() {
        out.push('0');
    }
    out.push_str(" = 0");
    out
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { fan_file } => {
            let fan = load_fan(&fan_file)?;
            let report = fan.validate();
            println!(
                "rays primitive: {}\nsmooth: {}\ncomplete: {}",
                report.rays_primitive, report.smooth, report.complete
            );
            if report.all_true() {
                Ok(())
            } else {
                Err(invalid("fan fails validation"))
            }
        }
        Command::Collections { fan_file } => {
            let fan = load_fan(&fan_file)?;
            for pc in fan.primitive_collections() {
                let rel = fan
                    .primitive_relation(&pc)
                    .map_err(|e| internal(e.to_string()))?;
                let lhs = pc.0.iter().map(|&i| xlabel(i)).collect::<Vec<_>>().join(" + ");
                let rhs = if rel.rhs.is_empty() {
                    "0".to_string()
                } else {
                    rel.rhs
                        .iter()
                        .map(|&(j, c)| {
                            if c == 1 {
                                xlabel(j)
                            } else {
                                format!("{} {}", c, xlabel(j))
                            }
                        })
                        .collect::<Vec<_>>()
                        .join(" + ")
                };
                println!("{{{}}}: {} = {}", pc.0.iter().map(|&i| xlabel(i)).collect::<Vec<_>>().join(", "), lhs, rhs);
            }
            Ok(())
        }
        Command::Relations { fan_file, basis } => {
            let fan = load_fan(&fan_file)?;
            let b: [usize; 4] = basis
                .try_into()
                .map_err(|_| invalid("--basis needs exactly four indices"))?;
            let rels = basis_relations(&fan, b).map_err(|e| invalid(e.to_string()))?;
            for (k, rel) in rels.iter().enumerate() {
                println!("({}) {}", k + 1, format_relation(rel));
            }
            Ok(())
        }
        Command::Intersect { fan_file, i, j, k, l } => {
            let fan = load_fan(&fan_file)?;
            let n = fan.ray_count();
            if [i, j, k, l].iter().any(|&x| x >= n) {
                return Err(invalid("ray index out of range"));
            }
            println!("{}", intersection_number(&fan, [i, j, k, l]));
            Ok(())
        }
        Command::Certify { fan_file, mode, cert } => {
            let fan = load_fan(&fan_file)?;
            let verdict = certify(&fan, mode.into(), None).map_err(|e| invalid(e.to_string()))?;
            replay(&fan, &verdict.certificate)
                .map_err(|e| internal(format!("certificate failed replay: {}", e)))?;
            println!("{}", verdict_line(&verdict));
            if let Some(path) = cert {
                write_atomic(&path, &serde_json::to_vec_pretty(&verdict.certificate).unwrap())?;
            }
            Ok(())
        }
        Command::Catalog(CatalogCommand::CertifyAll { dir, jobs, csv }) => {
            certify_all(dir.as_deref(), jobs, &csv)
        }
    }
}

fn verdict_line(v: &Verdict) -> String {
    match v.rule {
        Some(rule) => format!("{:?} ({:?})", v.status, rule),
        None => format!("{:?}", v.status),
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    let mut f = std::fs::File::create(&tmp)
        .map_err(|e| invalid(format!("cannot write {}: {}", tmp.display(), e)))?;
    f.write_all(bytes)
        .and_then(|_| f.sync_all())
        .map_err(|e| invalid(format!("cannot write {}: {}", tmp.display(), e)))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| invalid(format!("cannot move into place {}: {}", path.display(), e)))
}

struct Row {
    type_label: String,
    rays: usize,
    mode: &'static str,
    verdict: VerdictStatus,
    rule: Option<RuleFired>,
    source: String,
}

fn certify_all(dir: Option<&Path>, jobs: Option<usize>, csv_path: &Path) -> Result<(), CliError> {
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| invalid(format!("cannot configure thread pool: {}", e)))?;
    }
    let mut entries = builtin_catalog();
    if let Some(dir) = dir {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| invalid(format!("cannot read {}: {}", dir.display(), e)))?
            .filter_map(|r| r.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for path in paths {
            let fan = load_fan(&path)?;
            entries.push(CatalogEntry {
                type_label: fan.name.clone(),
                fan,
                basis_hint: None,
                provenance: format!("user:{}", path.display()),
            });
        }
    }
    {
        let mut labels: Vec<&str> = entries.iter().map(|e| e.type_label.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != entries.len() {
            return Err(invalid("duplicate type labels in catalog"));
        }
    }

    // Per-fan certification in both modes, independently in parallel.
    let verdicts: Vec<Result<(Verdict, Verdict), CliError>> = entries
        .par_iter()
        .map(|e| {
            let hint = e.basis_hint.as_deref();
            let fin = certify(&e.fan, Mode::FiniteMorphism, hint)
                .map_err(|err| invalid(format!("{}: {}", e.type_label, err)))?;
            let emb = certify(&e.fan, Mode::Embedding, hint)
                .map_err(|err| invalid(format!("{}: {}", e.type_label, err)))?;
            for v in [&fin, &emb] {
                replay(&e.fan, &v.certificate).map_err(|err| {
                    internal(format!("{}: certificate failed replay: {}", e.type_label, err))
                })?;
            }
            Ok((fin, emb))
        })
        .collect();
    let mut fin_verdicts = Vec::new();
    let mut emb_verdicts = Vec::new();
    for v in verdicts {
        let (f, e) = v?;
        fin_verdicts.push(f);
        emb_verdicts.push(e);
    }

    // Verdict propagation along detected 2-blow-up edges (finite-morphism
    // verdicts only; embedding non-existence does not transfer).
    let fans: Vec<Fan> = entries.iter().map(|e| e.fan.clone()).collect();
    let edges = blowup_edges(&fans);
    let seeds: Vec<VerdictStatus> = fin_verdicts.iter().map(|v| v.status).collect();
    let propagated =
        propagate(entries.len(), &edges, &seeds).map_err(|e| invalid(e.to_string()))?;

    let mut rows = Vec::new();
    for (idx, e) in entries.iter().enumerate() {
        let prop = &propagated[idx];
        let source = match &prop.origin {
            VerdictOrigin::Seed => "direct".to_string(),
            VerdictOrigin::SeedNonPropagable => "direct(non-propagable)".to_string(),
            VerdictOrigin::Propagated { path } => {
                let names: Vec<&str> = path
                    .iter()
                    .map(|&i| entries[i].type_label.as_str())
                    .collect();
                format!("propagated:{}", names.join("<-"))
            }
        };
        let fin_rule = if matches!(prop.origin, VerdictOrigin::Propagated { .. }) {
            None
        } else {
            fin_verdicts[idx].rule
        };
        rows.push(Row {
            type_label: e.type_label.clone(),
            rays: e.fan.ray_count(),
            mode: "finite",
            verdict: prop.status,
            rule: fin_rule,
            source: source.clone(),
        });
        // A propagated NoFiniteMorphism dominates any embedding verdict.
        let (emb_status, emb_rule, emb_source) =
            if prop.status == VerdictStatus::NoFiniteMorphism
                && emb_verdicts[idx].status != VerdictStatus::NoFiniteMorphism
            {
                (prop.status, None, source)
            } else {
                (emb_verdicts[idx].status, emb_verdicts[idx].rule, "direct".to_string())
            };
        rows.push(Row {
            type_label: e.type_label.clone(),
            rays: e.fan.ray_count(),
            mode: "embedding",
            verdict: emb_status,
            rule: emb_rule,
            source: emb_source,
        });
    }
    rows.sort_by(|a, b| (&a.type_label, a.mode).cmp(&(&b.type_label, b.mode)));

    let fmt_rule = |r: Option<RuleFired>| r.map_or("-".to_string(), |r| format!("{:?}", r));
    println!(
        "{:<14} {:>4} {:<10} {:<18} {:<22} {}",
        "type", "rays", "mode", "verdict", "rule", "source"
    );
    let mut csv = String::from("type,rays,mode,verdict,rule,source\n");
    for row in &rows {
        println!(
            "{:<14} {:>4} {:<10} {:<18} {:<22} {}",
            row.type_label,
            row.rays,
            row.mode,
            format!("{:?}", row.verdict),
            fmt_rule(row.rule),
            row.source
        );
        csv.push_str(&format!(
            "{},{},{},{:?},{},{}\n",
            row.type_label,
            row.rays,
            row.mode,
            row.verdict,
            fmt_rule(row.rule),
            row.source
        ));
    }
    write_atomic(csv_path, csv.as_bytes())?;
    println!("\n{} fans, {} blow-up edges, CSV written to {}", entries.len(), edges.len(), csv_path.display());
    Ok(())
}
