//! Command-line pipelines over the `conifold` library.

pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use conifold::fibered::{analyze, FiberedInput};
use conifold::format::{ConfigurationFile, MatrixJson, Provenance, SCHEMA_VERSION};
use conifold::localmodel::verify_local_models;
use conifold::presets::{
    preset_hard_lefschetz, preset_product, product_provenance, product_transition, Ambient,
    PresetDescriptor, HARD_LEFSCHETZ_CITATION, PRODUCT_CITATION,
};
use conifold::quintic::{build_model, full_configuration, reproduce_proposition, ReproduceOptions};
use conifold::relations::{
    good_relation, is_good_subset, search_good_subsets, span_dim, CycleConfiguration, SearchOptions,
};
use conifold::surgery::{
    apply_transition, obstruction_flags, reverse_transition, SixManifoldTopology, SurgeryError,
    Transition,
};
use conifold::zlinalg::{rank_exact, smith_normal_form, IntegerMatrix, InvariantFactors};

use report::{
    combined_digest, sha256_hex, InputDigest, PipelineReport, Stage, Summary, REPORT_SCHEMA_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const QUINTIC_CITATION: &str =
    "quintic threefold: the Fermat-type piecewise Lagrangian cycles span H3 \
     (rank 204), and the 125 vanishing cycles of the nodal member span a 101-dimensional subspace";
const SURGERY_CITATION: &str = "conifold transition along n spheres spanning r dimensions of H3: \
     b3 -> b3 - 2r, b2 -> b2 + n - r, euler -> euler + 2n; requires a relation with all coefficients nonzero";
const LOCAL_MODEL_CITATION: &str = "node local model: the punctured quadric sum z_j^2 = 0 is \
     symplectomorphic to T*S3 minus its zero section via z -> (x/|x|, -|x| y)";
const FIBERED_CITATION: &str = "spheres in fibre products of elliptic fibrations: a matching arc \
     between critical values of the two fibrations with transverse collapsing circles";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhichMatrix {
    Classes,
    Pairing,
}

#[derive(Debug, Parser)]
#[command(
    name = "conifold",
    version,
    about = "Conifold transitions: relations, surgery, quintic cycles and local models"
)]
pub struct Cli {
    /// Seed for every randomised stage.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report (or the generated configuration) here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Worker threads for parallel stages; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the 625 quintic cycles and 125 vanishing cycles as a configuration file.
    GenQuintic,
    /// Emit a built-in configuration or scenario.
    Preset(PresetArgs),
    /// Exact rank of the class (or pairing) matrix of a configuration.
    Rank(MatrixArgs),
    /// Smith normal form invariants of the class (or pairing) matrix.
    Snf(MatrixArgs),
    /// Test a subset for a good relation and print one.
    GoodRelation(GoodRelationArgs),
    /// Search for disjoint good subsets of each size in a range.
    Search(SearchArgs),
    /// Betti bookkeeping for a conifold transition.
    Surgery(SurgeryArgs),
    /// Spheres from matching arcs in a fibre product of elliptic fibrations.
    Fibered(FileArg),
    /// Numerical checks of the node local models.
    VerifyLocalmodel(LocalModelArgs),
    /// Quintic pipeline: pairing rank, search over k in a range, and the Betti table.
    ReproduceProp(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct PresetArgs {
    /// product | hard-lefschetz
    pub name: String,
    /// Number of spheres (product).
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// p1xp2 | p1xk3
    #[arg(long, default_value = "p1xk3")]
    pub ambient: String,
}

#[derive(Debug, Args)]
pub struct FileArg {
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = WhichMatrix::Classes)]
    pub matrix: WhichMatrix,
}

#[derive(Debug, Args)]
pub struct GoodRelationArgs {
    pub file: PathBuf,
    /// Comma-separated cycle indices.
    #[arg(
        long,
        value_delimiter = ',',
        conflicts_with = "labels",
        required_unless_present = "labels"
    )]
    pub subset: Vec<usize>,
    /// Comma-separated cycle labels.
    #[arg(long, value_delimiter = ',')]
    pub labels: Vec<String>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub min_size: usize,
    #[arg(long)]
    pub max_size: usize,
    #[arg(long, default_value_t = 100_000)]
    pub max_moves: usize,
}

#[derive(Debug, Args)]
pub struct SurgeryArgs {
    #[arg(long)]
    pub b2: u64,
    #[arg(long)]
    pub b3: u64,
    /// Number of spheres (or curves, with --reverse).
    #[arg(long)]
    pub n: u64,
    /// Dimension of their span in H3.
    #[arg(long)]
    pub r: u64,
    /// The spheres admit no good relation.
    #[arg(long)]
    pub not_good: bool,
    #[arg(long)]
    pub c1_zero: bool,
    /// One of the spheres is null-homologous.
    #[arg(long)]
    pub null_homologous: bool,
    /// Contract n curves and smooth instead.
    #[arg(long)]
    pub reverse: bool,
}

#[derive(Debug, Args)]
pub struct LocalModelArgs {
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, default_value_t = 102)]
    pub min_size: usize,
    #[arg(long, default_value_t = 125)]
    pub max_size: usize,
    #[arg(long, default_value_t = 100_000)]
    pub max_moves: usize,
}

/// What a command produced before rendering.
struct Outcome {
    inputs: Vec<InputDigest>,
    parameters: Value,
    stages: Vec<Stage>,
    result: Value,
    citations: Vec<String>,
    passed: bool,
    message: String,
    /// Generated configuration; goes to --out (or stdout) instead of the report.
    artifact: Option<String>,
}

impl Outcome {
    fn new(parameters: Value, result: Value, message: String) -> Self {
        Self {
            inputs: Vec::new(),
            parameters,
            stages: Vec::new(),
            result,
            citations: Vec::new(),
            passed: true,
            message,
            artifact: None,
        }
    }
}

fn stage(name: &str, passed: bool, detail: impl Into<String>) -> Stage {
    Stage {
        name: name.to_string(),
        passed,
        detail: detail.into(),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn read_input(path: &Path) -> Result<(String, InputDigest)> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let digest = InputDigest {
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
    };
    let text =
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    Ok((text, digest))
}

fn load_configuration(path: &Path) -> Result<(CycleConfiguration, ConfigurationFile, InputDigest)> {
    let (text, digest) = read_input(path)?;
    let file: ConfigurationFile = serde_json::from_str(&text)
        .with_context(|| format!("{}: malformed configuration", path.display()))?;
    let config = file
        .to_config()
        .with_context(|| format!("{}: invalid configuration", path.display()))?;
    Ok((config, file, digest))
}

fn select_matrix(config: &CycleConfiguration, which: WhichMatrix) -> Result<&IntegerMatrix> {
    match which {
        WhichMatrix::Classes => Ok(config.classes()),
        WhichMatrix::Pairing => config
            .pairing()
            .ok_or_else(|| anyhow!("configuration has no pairing matrix")),
    }
}

fn matrix_name(which: WhichMatrix) -> &'static str {
    match which {
        WhichMatrix::Classes => "classes",
        WhichMatrix::Pairing => "pairing",
    }
}

fn gen_quintic() -> Result<Outcome> {
    let model = build_model();
    let config = full_configuration(&model)?;
    let rule = to_value(&model.rule);
    let provenance = Provenance {
        generator: "conifold gen-quintic".to_string(),
        parameters: [
            ("perturbation".to_string(), rule.to_string()),
            ("pairing_rank".to_string(), model.rank.to_string()),
        ]
        .into(),
        assumptions: vec![
            "cells evaluated at the Fermat member in the chart y_j = x_j/x_5".to_string(),
            "classes are pairing rows against the 625 spheres L^k_g".to_string(),
            "vanishing cycle V_g pairs like the sphere g.L^1".to_string(),
        ],
    };
    let file = ConfigurationFile::from_config(&config, provenance);
    let mut artifact = serde_json::to_string(&file)?;
    artifact.push('\n');
    let mut o = Outcome::new(
        json!({}),
        json!({
            "spheres": model.cycles.len(),
            "vanishing_cycles": model.vanishing.nodes.len(),
            "configuration_cycles": config.len(),
            "perturbation": rule,
            "rule_attempts": to_value(&model.attempts),
            "pairing_rank": model.rank,
            "artifact_sha256": sha256_hex(artifact.as_bytes()),
        }),
        format!("{} cycles, pairing rank {}", config.len(), model.rank),
    );
    o.stages.push(stage(
        "generate",
        model.cycles.len() == 625,
        format!("{} spheres", model.cycles.len()),
    ));
    o.stages.push(stage(
        "pairing",
        model.pairing.is_antisymmetric(),
        format!("antisymmetric, rank {}", model.rank),
    ));
    o.passed = o.stages.iter().all(|s| s.passed);
    o.citations.push(QUINTIC_CITATION.to_string());
    o.artifact = Some(artifact);
    Ok(o)
}

fn preset(args: &PresetArgs) -> Result<Outcome> {
    let ambient: Ambient = args.ambient.parse()?;
    match args.name.as_str() {
        "product" => {
            let topology = ambient.topology();
            let config = preset_product(args.m, &topology)?;
            let all: Vec<usize> = (0..args.m).collect();
            let relation = good_relation(&config, &all)?;
            let (transition, after) = product_transition(args.m, &topology)?;
            let flags = obstruction_flags(&after, Some(&transition));
            let file = ConfigurationFile::from_config(
                &config,
                product_provenance(args.m, &ambient.to_string()),
            );
            let mut artifact = serde_json::to_string_pretty(&file)?;
            artifact.push('\n');
            let descriptor = PresetDescriptor::new(
                "product",
                &[("m", args.m.to_string()), ("ambient", ambient.to_string())],
            )?;
            let mut o = Outcome::new(
                to_value(&descriptor),
                json!({
                    "descriptor": to_value(&descriptor),
                    "relation": to_value(&relation),
                    "before": to_value(&topology),
                    "transition": to_value(&transition),
                    "after": to_value(&after),
                    "flags": to_value(&flags),
                    "artifact_sha256": sha256_hex(artifact.as_bytes()),
                }),
                format!("{} disjoint null-homologous spheres", args.m),
            );
            o.stages.push(stage(
                "relation",
                relation.is_some(),
                "all-sphere subset is good",
            ));
            o.passed = relation.is_some();
            o.citations.push(PRODUCT_CITATION.to_string());
            o.artifact = Some(artifact);
            Ok(o)
        }
        "hard-lefschetz" => {
            let r = preset_hard_lefschetz(ambient)?;
            let mut o = Outcome::new(
                to_value(&r.descriptor),
                to_value(&r),
                format!("hard_lefschetz_violated = {}", r.hard_lefschetz_violated),
            );
            o.stages.push(stage(
                "flag",
                r.hard_lefschetz_violated,
                r.explanation.clone(),
            ));
            o.citations = vec![
                PRODUCT_CITATION.to_string(),
                HARD_LEFSCHETZ_CITATION.to_string(),
            ];
            Ok(o)
        }
        other => bail!("unknown preset {other:?}; known presets: product, hard-lefschetz"),
    }
}

fn rank(args: &MatrixArgs) -> Result<Outcome> {
    let (config, _, digest) = load_configuration(&args.file)?;
    let m = select_matrix(&config, args.matrix)?;
    let r = rank_exact(m);
    let mut o = Outcome::new(
        json!({"matrix": matrix_name(args.matrix)}),
        json!({"matrix": matrix_name(args.matrix), "rows": m.rows(), "cols": m.cols(), "rank": r}),
        format!("rank {r}"),
    );
    o.inputs.push(digest);
    Ok(o)
}

fn snf(args: &MatrixArgs) -> Result<Outcome> {
    let (config, _, digest) = load_configuration(&args.file)?;
    let m = select_matrix(&config, args.matrix)?;
    let d = smith_normal_form(m);
    let inv = InvariantFactors::from(&d);
    let torsion: Vec<String> = d.torsion().iter().map(ToString::to_string).collect();
    let mut o = Outcome::new(
        json!({"matrix": matrix_name(args.matrix)}),
        json!({
            "matrix": matrix_name(args.matrix),
            "rows": m.rows(),
            "cols": m.cols(),
            "rank": inv.rank,
            "invariant_factors": inv.factors,
            "torsion": torsion,
        }),
        format!("rank {}, {} torsion factors", inv.rank, torsion.len()),
    );
    o.inputs.push(digest);
    Ok(o)
}

fn resolve_subset(config: &CycleConfiguration, args: &GoodRelationArgs) -> Result<Vec<usize>> {
    if args.labels.is_empty() {
        return Ok(args.subset.clone());
    }
    args.labels
        .iter()
        .map(|l| {
            config
                .labels()
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| anyhow!("no cycle labelled {l:?}"))
        })
        .collect()
}

fn good_relation_cmd(args: &GoodRelationArgs) -> Result<Outcome> {
    let (config, _, digest) = load_configuration(&args.file)?;
    let subset = resolve_subset(&config, args)?;
    let good = is_good_subset(&config, &subset)?;
    let span = span_dim(&config, &subset)?;
    let relation = good_relation(&config, &subset)?;
    let verified = relation.as_ref().is_none_or(|r| r.verify(&config));
    let labels: Vec<&str> = subset
        .iter()
        .map(|&i| config.labels()[i].as_str())
        .collect();
    let mut o = Outcome::new(
        json!({"subset": subset}),
        json!({
            "subset": subset,
            "labels": labels,
            "pairwise_disjoint": config.pairwise_disjoint(&subset),
            "good": good,
            "span": span,
            "relation": to_value(&relation),
        }),
        if good {
            format!("good, span {span}")
        } else {
            format!("not good, span {span}")
        },
    );
    o.stages.push(stage(
        "verify",
        verified,
        "relation evaluates to zero with all coefficients nonzero",
    ));
    o.passed = verified && good == relation.is_some();
    o.inputs.push(digest);
    Ok(o)
}

fn search(args: &SearchArgs, seed: u64) -> Result<Outcome> {
    let (config, _, digest) = load_configuration(&args.file)?;
    let mut opts = SearchOptions::new(args.min_size, args.max_size, seed);
    opts.max_moves = args.max_moves;
    let report = search_good_subsets(&config, &opts)?;
    let found = report.results.iter().filter(|r| r.found).count();
    let mut o = Outcome::new(
        to_value(&opts),
        to_value(&report),
        format!(
            "found good disjoint subsets for {found} of {} sizes",
            report.results.len()
        ),
    );
    o.inputs.push(digest);
    Ok(o)
}

#[derive(Serialize)]
struct SurgeryReport {
    direction: &'static str,
    before: SixManifoldTopology,
    transition: Transition,
    after: SixManifoldTopology,
    flags: conifold::surgery::ObstructionFlags,
    b3_even: bool,
    euler_formula: bool,
}

fn surgery(args: &SurgeryArgs) -> Result<std::result::Result<Outcome, SurgeryError>> {
    let before = SixManifoldTopology::simply_connected(args.b2, args.b3, args.c1_zero)?;
    let transition = Transition {
        null_homologous_sphere: args.null_homologous,
        ..Transition::new(args.n, args.r, !args.not_good)
    };
    let after = if args.reverse {
        reverse_transition(&before, args.n, args.r)
    } else {
        apply_transition(&before, &transition)
    };
    let after = match after {
        Ok(a) => a,
        Err(e @ SurgeryError::NoGoodRelation) => return Ok(Err(e)),
        Err(e) => return Err(e.into()),
    };
    let flags = obstruction_flags(&after, (!args.reverse).then_some(&transition));
    let report = SurgeryReport {
        direction: if args.reverse {
            "reverse (formal inverse)"
        } else {
            "forward"
        },
        before,
        transition,
        after,
        flags,
        b3_even: after.b3 % 2 == 0,
        euler_formula: after.validate().is_ok(),
    };
    let passed = report.b3_even && report.euler_formula;
    let mut o = Outcome::new(
        json!({"b2": args.b2, "b3": args.b3, "n": args.n, "r": args.r, "good": !args.not_good,
               "c1_zero": args.c1_zero, "null_homologous": args.null_homologous, "reverse": args.reverse}),
        to_value(&report),
        format!("b2={}, b3={}, euler={}", after.b2, after.b3, after.euler),
    );
    o.stages.push(stage(
        "consistency",
        passed,
        "b3 even and euler = 2 + 2 b2 - b3",
    ));
    o.passed = passed;
    o.citations.push(SURGERY_CITATION.to_string());
    Ok(Ok(o))
}

fn fibered(args: &FileArg) -> Result<Outcome> {
    let (text, digest) = read_input(&args.file)?;
    let input: FiberedInput = serde_json::from_str(&text)
        .with_context(|| format!("{}: malformed fibration input", args.file.display()))?;
    if input.schema_version != SCHEMA_VERSION {
        bail!(
            "{}: unsupported schema_version {} (expected {SCHEMA_VERSION})",
            args.file.display(),
            input.schema_version
        );
    }
    let a = analyze(&input)?;
    let pairing = a
        .configuration
        .pairing()
        .expect("fibered configurations carry a pairing");
    let antisymmetric = pairing.is_antisymmetric();
    let spheres: Vec<Value> = a
        .spheres
        .iter()
        .zip(a.configuration.labels())
        .zip(&a.null_homologous)
        .map(|((s, label), nh)| {
            json!({"label": label, "a": to_value(&s.arc.a), "b": to_value(&s.arc.b),
                   "classes": to_value(&s.class_at_reference), "null_homologous": nh})
        })
        .collect();
    let file = ConfigurationFile::from_config(
        &a.configuration,
        Provenance {
            generator: "conifold fibered".to_string(),
            parameters: Default::default(),
            assumptions: vec![],
        },
    );
    let mut o = Outcome::new(
        json!({}),
        json!({
            "fibre_product": to_value(&a.fibre_product),
            "total_monodromy": to_value(&a.total_monodromy),
            "spheres": spheres,
            "pairing": to_value(&MatrixJson::from(pairing)),
            "configuration": to_value(&file),
        }),
        format!("{} spheres", a.spheres.len()),
    );
    o.stages.push(stage(
        "fibre_product",
        a.fibre_product.smooth,
        format!("{} nodes", a.fibre_product.nodes.len()),
    ));
    o.stages
        .push(stage("pairing", antisymmetric, "antisymmetric"));
    o.passed = antisymmetric;
    o.inputs.push(digest);
    o.citations.push(FIBERED_CITATION.to_string());
    Ok(o)
}

fn verify_localmodel(args: &LocalModelArgs, seed: u64) -> Result<Outcome> {
    if args.samples == 0 {
        bail!("--samples must be positive");
    }
    let r = verify_local_models(args.samples, seed);
    let max = r.checks.iter().map(|c| c.max_residual).fold(0.0, f64::max);
    let mut o = Outcome::new(
        json!({"samples": args.samples}),
        to_value(&r),
        format!("{} checks, largest residual {max:e}", r.checks.len()),
    );
    o.stages = r
        .checks
        .iter()
        .map(|c| {
            stage(
                &c.name,
                c.passed,
                format!("max {:e} < {:e}", c.max_residual, c.tolerance),
            )
        })
        .collect();
    o.passed = r.passed;
    o.citations.push(LOCAL_MODEL_CITATION.to_string());
    Ok(o)
}

fn reproduce_prop(args: &ReproduceArgs, seed: u64) -> Result<Outcome> {
    let model = build_model();
    let opts = ReproduceOptions {
        seed,
        min_size: args.min_size,
        max_size: args.max_size,
        max_moves: args.max_moves,
    };
    let r = reproduce_proposition(&model, &opts)?;
    let table: Vec<Value> = r
        .table
        .iter()
        .map(|t| json!({"k": t.k, "found": t.found, "span": t.span, "b2": t.b2, "b3": t.b3, "euler": t.euler}))
        .collect();
    let mut o = Outcome::new(
        to_value(&opts),
        json!({
            "table": table,
            "observations": r.observations,
            "details": to_value(&r),
        }),
        String::new(),
    );
    o.stages.push(stage(
        "pairing_rank",
        r.rank_target_met(),
        format!("rank {} (target {})", r.pairing_rank, r.pairing_rank_target),
    ));
    o.stages.push(stage(
        "vanishing_span",
        r.vanishing_rank == 101 && r.vanishing_pairwise_zero,
        format!(
            "{} vanishing classes of rank {}",
            r.vanishing_count, r.vanishing_rank
        ),
    ));
    o.stages.push(stage(
        "table",
        r.table_target_met(),
        format!(
            "sizes {}..={}: b3 = 2, b2 = k - 100",
            args.min_size, args.max_size
        ),
    ));
    o.passed = o.stages.iter().all(|s| s.passed);
    o.message = if o.passed {
        format!(
            "b3 = 2 and b2 = k - 100 for every k in {}..={}",
            args.min_size, args.max_size
        )
    } else {
        format!(
            "target missed after {} perturbation rule(s)",
            r.attempts.len()
        )
    };
    o.citations = vec![QUINTIC_CITATION.to_string(), SURGERY_CITATION.to_string()];
    Ok(o)
}

fn execute(cli: &Cli) -> Result<std::result::Result<Outcome, SurgeryError>> {
    Ok(Ok(match &cli.command {
        Command::GenQuintic => gen_quintic()?,
        Command::Preset(a) => preset(a)?,
        Command::Rank(a) => rank(a)?,
        Command::Snf(a) => snf(a)?,
        Command::GoodRelation(a) => good_relation_cmd(a)?,
        Command::Search(a) => search(a, cli.seed)?,
        Command::Surgery(a) => return surgery(a),
        Command::Fibered(a) => fibered(a)?,
        Command::VerifyLocalmodel(a) => verify_localmodel(a, cli.seed)?,
        Command::ReproduceProp(a) => reproduce_prop(a, cli.seed)?,
    }))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn build_report(cli: &Cli, args: &[String], o: Outcome) -> PipelineReport {
    let digest = combined_digest(&o.inputs, &o.parameters);
    PipelineReport {
        schema_version: REPORT_SCHEMA_VERSION,
        command: args.to_vec(),
        seed: cli.seed,
        inputs: o.inputs,
        inputs_digest: digest,
        stages: o.stages,
        result: o.result,
        citations: o.citations,
        summary: Summary {
            passed: o.passed,
            message: o.message,
        },
    }
}

/// Runs one command line (without the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(std::iter::once(OsString::from("conifold")).chain(args)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("warning: --threads ignored: {e}");
        }
    }
    match run_parsed(&cli, &echo) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn run_parsed(cli: &Cli, echo: &[String]) -> Result<i32> {
    let outcome = match execute(cli)? {
        Ok(o) => o,
        Err(refusal) => {
            eprintln!("error: {refusal}");
            return Ok(EXIT_VERIFICATION);
        }
    };
    let passed = outcome.passed;
    let mut o = outcome;
    let artifact = o.artifact.take();
    let report = build_report(cli, echo, o);
    let rendered = match cli.format {
        OutputFormat::Json => report.render_json(),
        OutputFormat::Text => report.render_text(),
    };
    match artifact {
        Some(doc) => {
            write_output(cli.out.as_deref(), &doc)?;
            if cli.out.is_some() {
                write_output(None, &rendered)?;
            } else {
                eprint!("{rendered}");
            }
        }
        None => write_output(cli.out.as_deref(), &rendered)?,
    }
    Ok(if passed { EXIT_OK } else { EXIT_VERIFICATION })
}
