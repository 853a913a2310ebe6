use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use modinv_core::classify::{classify_all, InvariantReport};
use modinv_core::enumerate::{brute_force_enumerate, enumerate_invariants_with, EnumerateOptions, DEFAULT_ORACLE_CAP};
use modinv_core::extension::{cyclic_extensions, restrict, so8_full_extension_candidates, BranchingTable};
use modinv_core::io::{InvariantEntry, ModelFile, ResultFile};
use modinv_core::nimrep::{ade_assignment, candidate_graphs};
use modinv_core::par::Exec;
use modinv_core::render::render_partition_function;
use modinv_core::spin::format_rational;
use modinv_core::{catalog, Error, IntMatrix, ModelSpec};

#[derive(Parser)]
#[command(name = "modinv", version, about = "Modular invariants of rational CFT fusion rings")]
struct Cli {
    /// Run library sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog models.
    #[command(subcommand)]
    Model(ModelCommand),
    /// Enumerate all modular invariants of a model.
    Enumerate {
        model: String,
        /// Also run the brute-force oracle and require set equality.
        #[arg(long)]
        oracle: bool,
        /// Print a result file as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Enumerate and classify every invariant.
    Classify {
        model: String,
        #[arg(long)]
        json: bool,
    },
    /// Assign A-D-E graphs to the invariants of an SU(2)_k model.
    Graphs {
        model: String,
        /// Write one DOT file per assigned graph into this directory.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Cyclic simple current extensions and their admissibility.
    Extend { model: String },
    /// Restrict an extended invariant through a branching table.
    Restrict {
        /// su10_to_su4, e6_to_su3 or so8_to_su3.
        table: String,
        /// identity, conj, perm:<i,j,…> or a JSON file with a square integer matrix.
        invariant: String,
    },
}

#[derive(Subcommand)]
enum ModelCommand {
    /// List representative models and the name patterns.
    List,
    /// Labels, conformal weights, quantum dimensions and S.
    Show { model: String },
    /// The model as a JSON model file.
    Dump { model: String },
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    VerificationFailed(String),
}

fn load_model(name: &str) -> anyhow::Result<ModelSpec> {
    let path = Path::new(name);
    if path.extension().is_some_and(|e| e == "json") || path.is_file() {
        let file = ModelFile::load(path)?;
        return file.to_spec().with_context(|| format!("model file {}", path.display()));
    }
    Ok(catalog::by_name(name)?)
}

fn exec(cli: &Cli) -> Exec {
    if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn format_complex(re: f64, im: f64) -> String {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    let (re, im) = (clean(re), clean(im));
    if im == 0.0 {
        format!("{re:.6}")
    } else {
        format!("{re:.6}{im:+.6}i")
    }
}

fn model_show(spec: &ModelSpec) -> anyhow::Result<String> {
    let md = spec.build()?;
    let names = spec.ring.names();
    let mut out = String::new();
    writeln!(out, "model {} (rank {})", spec.name, spec.rank())?;
    writeln!(out, "global index w = {:.6}", md.global_index())?;
    match md.central_charge() {
        Ok(c) => writeln!(out, "central charge c = {c:.6} mod 8")?,
        Err(e) => writeln!(out, "central charge undefined: {e}")?,
    }
    writeln!(out, "non-degenerate: {}", md.is_nondegenerate().0)?;
    writeln!(out, "{:>4}  {:<12} {:>10} {:>12}", "idx", "label", "h", "d")?;
    for (l, name) in names.iter().enumerate() {
        writeln!(out, "{l:>4}  {name:<12} {:>10} {:>12.6}", format_rational(spec.spins.weight(l)), md.d()[l])?;
    }
    if let Ok(s) = md.s() {
        writeln!(out, "S =")?;
        for r in 0..s.nrows() {
            let row: Vec<String> = (0..s.ncols()).map(|c| format_complex(s[(r, c)].re, s[(r, c)].im)).collect();
            writeln!(out, "  [{}]", row.join(", "))?;
        }
    }
    if spec.name == "so8_1" {
        let published = catalog::so8_published_s();
        let s = md.s()?;
        let gap = (0..4)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .map(|(r, c)| (s[(r, c)] - published[r][c]).norm())
            .fold(0.0, f64::max);
        writeln!(out, "max |S − published S| = {gap:.1e}")?;
    }
    Ok(out)
}

fn verification(issues: Vec<String>) -> Status {
    if issues.is_empty() {
        Status::Ok
    } else {
        Status::VerificationFailed(issues.join("\n"))
    }
}

fn su2_level(spec: &ModelSpec) -> Option<usize> {
    spec.name.strip_prefix("su2:").and_then(|k| k.parse().ok())
}

fn enumerate_cmd(cli: &Cli, model: &str, oracle: bool, json: bool) -> anyhow::Result<Status> {
    let spec = load_model(model)?;
    let md = spec.build()?;
    let run = enumerate_invariants_with(&md, EnumerateOptions { exec: exec(cli), ..Default::default() })?;
    let mut issues = Vec::new();
    if oracle {
        match brute_force_enumerate(&md, DEFAULT_ORACLE_CAP) {
            Ok(slow) if slow.invariants == run.invariants => {}
            Ok(slow) => issues.push(format!(
                "oracle mismatch: enumerator {} vs brute force {}",
                run.invariants.len(),
                slow.invariants.len()
            )),
            Err(Error::SearchOverflow { cap, .. }) => eprintln!("oracle skipped: box exceeds {cap} points"),
            Err(e) => return Err(e.into()),
        }
    }
    if json {
        let reports = classify_all(&spec, &md, &run.invariants, exec(cli))?;
        let mut invariants = Vec::new();
        for r in reports {
            issues.extend(r.consistency_issues());
            let graphs = match su2_level(&spec) {
                Some(k) => ade_assignment(&md, k, &r.z)?,
                None => Vec::new(),
            };
            invariants.push(InvariantEntry { matrix: r.z.clone(), report: r, graphs });
        }
        let mut residuals = BTreeMap::new();
        residuals.insert("commutant_basis".to_string(), run.basis_residual);
        if let Ok(v) = md.verlinde_check(&spec.ring) {
            residuals.insert("verlinde".to_string(), v);
        }
        let file = ResultFile { model: spec.name.clone(), invariants, residuals };
        println!("{}", file.to_json()?);
    } else {
        println!(
            "{}: {} invariant(s), {} of dimension {}, {} search nodes{}",
            spec.name,
            run.invariants.len(),
            run.constraint,
            run.commutant_dim,
            run.nodes,
            if oracle && issues.is_empty() { ", oracle agrees" } else { "" }
        );
        for z in &run.invariants {
            println!("  {}", render_partition_function(&spec, z, None)?);
        }
    }
    Ok(verification(issues))
}

fn describe(spec: &ModelSpec, r: &InvariantReport, list: &[IntMatrix]) -> anyhow::Result<String> {
    let mut out = String::new();
    writeln!(out, "Z = {}", render_partition_function(spec, &r.z, r.type1_branching.as_ref())?)?;
    let mut tags = vec![r.kind.to_string()];
    if r.permutation.is_some() {
        tags.push("permutation".into());
    }
    if r.simple_current {
        tags.push("simple current".into());
    }
    if r.heterotic {
        tags.push("heterotic".into());
    }
    writeln!(out, "  {}", tags.join(", "))?;
    if let Some(b) = &r.type1_branching {
        for row in b.to_rows() {
            writeln!(out, "  branching row {row:?}")?;
        }
    }
    if let Some((p, m)) = r.parents {
        let show = |i: usize| render_partition_function(spec, &list[i], None);
        writeln!(out, "  parents Z+ = {}", show(p)?)?;
        writeln!(out, "          Z- = {}", show(m)?)?;
    }
    let i = r.indices;
    writeln!(out, "  w+ = {:.6}, w- = {:.6}, wα = {:.6}, w0 = {:.6}", i.w_plus, i.w_minus, i.w_alpha, i.w_zero)?;
    let c = r.counts;
    writeln!(out, "  tr Z = {}, tr ZZᵀ = {}, x+ = {}, x- = {}", c.trace, c.sum_of_squares, c.x_plus, c.x_minus)?;
    Ok(out)
}

fn classify_cmd(cli: &Cli, model: &str, json: bool) -> anyhow::Result<Status> {
    let spec = load_model(model)?;
    let md = spec.build()?;
    let list = enumerate_invariants_with(&md, EnumerateOptions { exec: exec(cli), ..Default::default() })?.invariants;
    let reports = classify_all(&spec, &md, &list, exec(cli))?;
    let issues: Vec<String> = reports.iter().flat_map(|r| r.consistency_issues()).collect();
    if json {
        println!("{}", serde_json::to_string_pretty(&reports)?);
    } else {
        println!("{}: {} invariant(s)", spec.name, list.len());
        for r in &reports {
            print!("{}", describe(&spec, r, &list)?);
        }
    }
    Ok(verification(issues))
}

fn graphs_cmd(model: &str, dot: Option<&Path>) -> anyhow::Result<Status> {
    let spec = load_model(model)?;
    let Some(k) = su2_level(&spec) else { bail!("graph assignment is available for su2:<k> models only") };
    let md = spec.build()?;
    let list = enumerate_invariants_with(&md, EnumerateOptions::default())?.invariants;
    let catalog_graphs = candidate_graphs(k);
    let mut issues = Vec::new();
    if let Some(dir) = dot {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    for z in &list {
        let names = ade_assignment(&md, k, z)?;
        println!("{} → {}", render_partition_function(&spec, z, None)?, names.join(", "));
        if names.len() != 1 {
            issues.push(format!("{} graphs match an invariant of trace {}", names.len(), z.trace()));
        }
        if let Some(dir) = dot {
            for name in &names {
                let g = catalog_graphs.iter().find(|g| &g.name == name).expect("assigned from the candidates");
                let path = dir.join(format!("{name}.dot"));
                std::fs::write(&path, g.to_dot()).with_context(|| format!("writing {}", path.display()))?;
                println!("  wrote {}", path.display());
            }
        }
    }
    Ok(verification(issues))
}

fn extend_cmd(model: &str) -> anyhow::Result<Status> {
    let spec = load_model(model)?;
    let names = spec.ring.names();
    println!("{}: cyclic simple current subgroups", spec.name);
    for r in cyclic_extensions(&spec.ring, &spec.spins)? {
        let sub: Vec<&str> = r.subgroup.iter().map(|&l| names[l].as_str()).collect();
        println!(
            "  ⟨{}⟩ order {}: h = {}, {}{}  θ = {}",
            names[r.generator],
            r.order,
            format_rational(spec.spins.weight(r.generator)),
            if r.admissible { "admissible" } else { "not admissible" },
            if r.admissible { if r.local { ", local" } else { ", non-local" } } else { "" },
            sub.join(" ⊕ ")
        );
    }
    if spec.name == "so8_1" {
        println!("  full ℤ2×ℤ2 extension: realised by one of the cyclic permutations (both reported)");
        for z in so8_full_extension_candidates()? {
            println!("    {}", render_partition_function(&spec, &z, None)?);
        }
    }
    Ok(Status::Ok)
}

fn extended_invariant(table: &BranchingTable, spec: &str) -> anyhow::Result<IntMatrix> {
    let e = table.ext_labels.len();
    if spec == "identity" {
        return Ok(IntMatrix::identity(e));
    }
    if spec == "conj" {
        // cyclic labels 0..n-1 conjugate to −j; anything else is self-conjugate
        let numeric: Option<Vec<usize>> = table.ext_labels.iter().map(|l| l.parse().ok()).collect();
        let perm: Vec<usize> = match numeric {
            Some(v) if v == (0..e).collect::<Vec<_>>() => (0..e).map(|j| (e - j) % e).collect(),
            _ => (0..e).collect(),
        };
        return Ok(IntMatrix::permutation(&perm));
    }
    if let Some(list) = spec.strip_prefix("perm:") {
        let perm: Vec<usize> = list.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>()?;
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        if sorted != (0..e).collect::<Vec<_>>() {
            bail!("{list} is not a permutation of 0..{e}");
        }
        return Ok(IntMatrix::permutation(&perm));
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    let z: IntMatrix = serde_json::from_str(&text).with_context(|| format!("parsing {spec}"))?;
    if z.rows() != e || z.cols() != e {
        bail!("{spec} is {}x{}, the table has {e} extended labels", z.rows(), z.cols());
    }
    Ok(z)
}

fn restrict_cmd(table: &str, invariant: &str) -> anyhow::Result<Status> {
    let table = catalog::branching_by_name(table)?;
    let z_ext = extended_invariant(&table, invariant)?;
    let z = restrict(&z_ext, &table, &table)?;
    println!("{} restricted through {}: trace {}", invariant, table.name, z.trace());
    let width = table.base_labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
    for (r, label) in table.base_labels.iter().enumerate() {
        println!("  {label:>width$}  {:?}", z.row(r));
    }
    Ok(Status::Ok)
}

fn run(cli: &Cli) -> anyhow::Result<Status> {
    match &cli.command {
        Command::Model(ModelCommand::List) => {
            println!("name patterns: {}", catalog::MODEL_FAMILIES.join(", "));
            for name in catalog::listed_models() {
                let spec = catalog::by_name(&name)?;
                println!("  {name:<10} rank {}", spec.rank());
            }
            Ok(Status::Ok)
        }
        Command::Model(ModelCommand::Show { model }) => {
            print!("{}", model_show(&load_model(model)?)?);
            Ok(Status::Ok)
        }
        Command::Model(ModelCommand::Dump { model }) => {
            println!("{}", ModelFile::from_spec(&load_model(model)?).to_json()?);
            Ok(Status::Ok)
        }
        Command::Enumerate { model, oracle, json } => enumerate_cmd(cli, model, *oracle, *json),
        Command::Classify { model, json } => classify_cmd(cli, model, *json),
        Command::Graphs { model, dot } => graphs_cmd(model, dot.as_deref()),
        Command::Extend { model } => extend_cmd(model),
        Command::Restrict { table, invariant } => restrict_cmd(table, invariant),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed(why)) => {
            eprintln!("verification failed: {why}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let inconsistent = matches!(e.downcast_ref::<Error>(), Some(Error::Inconsistent(_)));
            ExitCode::from(if inconsistent { 2 } else { 1 })
        }
    }
}
