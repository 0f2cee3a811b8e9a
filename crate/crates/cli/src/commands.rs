//! Implementations of the CLI subcommands.
//!
//! Every command follows the same contract: read inputs, run one analysis,
//! write machine-readable artifacts into the output directory, print a
//! short summary to stdout, and log written paths to stderr.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use relsg_core::{
    agglomerate, check_functoriality, default_delta, density_blockmodel, distance_matrix,
    generate_semigroup, generate_truncated, image_matrix, induced_hom, lean_fit, load_graph,
    load_hierarchy, load_partition, multiplication_table, save_partition, structural_partition,
    truncated_report, BoolMatrix, DensityBlockmodel, Graph, Metric, MultirelationalGraph,
    Partition, RoundingPolicy, Target, Weight,
};

use crate::output::{
    bool_string_rows, graph_summary_json, graph_summary_text, hom_json, matrix_text,
    partition_text, relation_file_stem, semigroup_json, semigroup_summary_text, truncated_json,
    truncated_listing, weighted_matrix_json, write_json, write_matrix_csv, write_text,
};
use crate::{
    fixtures, Cli, CliError, DensityArgs, FixturesArgs, ImageArgs, PartitionArgs, ReportArgs,
    SemigroupArgs, TableFormat, TruncateArgs, VerifyFunctorArgs, VerifyHomArgs,
};

// ---------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------

fn input_path(cli: &Cli) -> Result<&Path, CliError> {
    cli.input.as_deref().ok_or_else(|| {
        CliError::Usage("--input <manifest.json> is required by this command".into())
    })
}

fn load_input(cli: &Cli) -> Result<Graph, CliError> {
    Ok(load_graph(input_path(cli)?)?)
}

fn out_dir(cli: &Cli) -> Result<&Path, CliError> {
    fs::create_dir_all(&cli.out).map_err(|source| CliError::Io {
        path: cli.out.clone(),
        source,
    })?;
    Ok(&cli.out)
}

fn boolean_graph(g: &Graph) -> Result<&MultirelationalGraph, CliError> {
    match g {
        Graph::Boolean(b) => Ok(b),
        Graph::Weighted(_) => Err(CliError::Usage(
            "this command needs Boolean (0/1) relations; the input graph is weighted".into(),
        )),
    }
}

fn load_partition_for(g: &Graph, path: &Path) -> Result<Partition, CliError> {
    Ok(load_partition(path, g.node_labels())?)
}

fn parse_weight(text: &str, flag: &str) -> Result<Weight, CliError> {
    text.parse()
        .map_err(|e| CliError::Usage(format!("cannot parse {flag} value {text:?}: {e}")))
}

fn parse_round(text: &str) -> Result<RoundingPolicy, CliError> {
    if text == "none" {
        return Ok(RoundingPolicy::None);
    }
    let digits: u32 = text.parse().map_err(|_| {
        CliError::Usage(format!(
            "--round must be \"none\" or a digit count, got {text:?}"
        ))
    })?;
    Ok(RoundingPolicy::per_step(digits)?)
}

enum DeltaMode {
    Auto,
    Fixed(Weight),
}

fn parse_delta(text: &str) -> Result<DeltaMode, CliError> {
    if text == "auto" {
        Ok(DeltaMode::Auto)
    } else {
        Ok(DeltaMode::Fixed(parse_weight(text, "--delta")?))
    }
}

fn metric_name(metric: Metric) -> &'static str {
    match metric {
        Metric::Euclidean => "euclidean",
        Metric::CosineDistance => "cosine",
    }
}

fn yes_no(v: bool) -> &'static str {
    if v {
        "yes"
    } else {
        "no"
    }
}

// ---------------------------------------------------------------------
// ingest / partition
// ---------------------------------------------------------------------

pub fn ingest(cli: &Cli) -> Result<(), CliError> {
    let g = load_input(cli)?;
    let dir = out_dir(cli)?;
    write_json(&dir.join("graph.json"), &graph_summary_json(&g))?;
    println!("{}", graph_summary_text(&g));
    Ok(())
}

pub fn partition(cli: &Cli, args: &PartitionArgs) -> Result<(), CliError> {
    let g = load_input(cli)?;
    let dir = out_dir(cli)?;
    let p = compute_partition(&g, args, dir)?;
    let path = dir.join("partition.json");
    save_partition(&p, g.node_labels(), &path)?;
    eprintln!("wrote {}", path.display());
    println!("{}", partition_text(&p, g.node_labels()));
    Ok(())
}

fn compute_partition(g: &Graph, args: &PartitionArgs, dir: &Path) -> Result<Partition, CliError> {
    if args.exact {
        if args.blocks.is_some() || args.threshold.is_some() {
            return Err(CliError::Usage(
                "--exact does not combine with --blocks or --threshold".into(),
            ));
        }
        return Ok(structural_partition(g, args.relations.as_deref())?);
    }
    let target = match (&args.blocks, &args.threshold) {
        (Some(k), None) => Target::NumBlocks(*k),
        (None, Some(t)) => Target::Threshold(parse_weight(t, "--threshold")?),
        (None, None) => {
            return Err(CliError::Usage(
                "choose a mode: --exact, --blocks K, or --threshold T".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("rejected by clap conflicts_with"),
    };
    let d = distance_matrix(g, args.metric.to_metric());
    write_matrix_csv(&dir.join("distances.csv"), &d.to_string_rows())?;
    Ok(agglomerate(&d, &target)?)
}

// ---------------------------------------------------------------------
// blockmodels: density / image / leanfit
// ---------------------------------------------------------------------

fn blockmodel_json(bm: &DensityBlockmodel) -> Value {
    let densities: Vec<Value> = bm
        .graph()
        .relations()
        .iter()
        .map(|(name, m)| json!({"name": name, "density": weighted_matrix_json(m)}))
        .collect();
    json!({
        "block_labels": bm.graph().node_labels(),
        "block_sizes": bm.block_sizes(),
        "weighted_input": bm.weighted_input(),
        "is_perfect": bm.is_perfect(),
        "densities": densities,
    })
}

pub fn density(cli: &Cli, args: &DensityArgs) -> Result<(), CliError> {
    let g = load_input(cli)?;
    let dir = out_dir(cli)?;
    let p = load_partition_for(&g, &args.partition)?;
    let (bm, _) = density_blockmodel(&g, &p)?;
    for (name, matrix) in bm.graph().relations() {
        write_matrix_csv(
            &dir.join(format!("density_{}.csv", relation_file_stem(name))),
            &matrix.to_string_rows(),
        )?;
    }
    write_json(&dir.join("blockmodel.json"), &blockmodel_json(&bm))?;
    println!(
        "density blockmodel over {}; perfect: {}",
        partition_text(bm.partition(), bm.source_labels()),
        yes_no(bm.is_perfect())
    );
    Ok(())
}

/// Per-relation image data shared by `image`, `leanfit`, and `report`.
struct ImageOutcome {
    name: String,
    /// `None` when the source relation was a zero matrix under `auto`.
    delta: Option<Weight>,
    zero_relation: bool,
    image: BoolMatrix,
}

fn compute_images(
    g: &Graph,
    bm: &DensityBlockmodel,
    mode: &DeltaMode,
) -> Result<Vec<ImageOutcome>, CliError> {
    let mut outcomes = Vec::new();
    for (name, d) in bm.graph().relations() {
        let outcome = match mode {
            DeltaMode::Fixed(delta) => ImageOutcome {
                name: name.clone(),
                delta: Some(delta.clone()),
                zero_relation: false,
                image: image_matrix(d, delta)?,
            },
            DeltaMode::Auto => {
                let source = match g {
                    Graph::Boolean(b) => b.relation(name)?,
                    Graph::Weighted(_) => {
                        return Err(CliError::Usage(
                            "--delta auto needs Boolean relations; pass a fixed --delta for weighted graphs"
                                .into(),
                        ))
                    }
                };
                let (delta, zero) = default_delta(source);
                if zero {
                    // A relation with no ties at all: its density is zero
                    // everywhere, so the image is empty at any threshold.
                    let m = d.n_rows();
                    ImageOutcome {
                        name: name.clone(),
                        delta: None,
                        zero_relation: true,
                        image: BoolMatrix::zero(m, m),
                    }
                } else {
                    ImageOutcome {
                        name: name.clone(),
                        delta: Some(delta.clone()),
                        zero_relation: false,
                        image: image_matrix(d, &delta)?,
                    }
                }
            }
        };
        outcomes.push(outcome);
    }
    Ok(outcomes)
}

fn image_summary_json(bm: &DensityBlockmodel, outcomes: &[ImageOutcome]) -> Value {
    let relations: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            json!({
                "name": o.name,
                "delta": o.delta,
                "zero_relation": o.zero_relation,
                "image": o.image.to_rows(),
            })
        })
        .collect();
    json!({
        "block_labels": bm.graph().node_labels(),
        "block_sizes": bm.block_sizes(),
        "is_perfect": bm.is_perfect(),
        "relations": relations,
    })
}

fn deltas_text(outcomes: &[ImageOutcome]) -> String {
    outcomes
        .iter()
        .map(|o| match &o.delta {
            Some(d) => format!("{} = {}", o.name, d),
            None => format!("{} = (zero relation)", o.name),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn image(cli: &Cli, args: &ImageArgs) -> Result<(), CliError> {
    let g = load_input(cli)?;
    let dir = out_dir(cli)?;
    let p = load_partition_for(&g, &args.partition)?;
    let (bm, _) = density_blockmodel(&g, &p)?;
    let mode = parse_delta(&args.delta)?;
    let outcomes = compute_images(&g, &bm, &mode)?;
    for o in &outcomes {
        write_matrix_csv(
            &dir.join(format!("image_{}.csv", relation_file_stem(&o.name))),
            &bool_string_rows(&o.image),
        )?;
    }
    write_json(&dir.join("image.json"), &image_summary_json(&bm, &outcomes))?;
    println!(
        "image blockmodel over {} blocks; deltas: {}",
        bm.partition().num_blocks(),
        deltas_text(&outcomes)
    );
    Ok(())
}

pub fn leanfit(cli: &Cli, args: &DensityArgs) -> Result<(), CliError> {
    let g = load_input(cli)?;
    let dir = out_dir(cli)?;
    let p = load_partition_for(&g, &args.partition)?;
    let (bm, _) = density_blockmodel(&g, &p)?;
    let mut relations = Vec::new();
    for (name, d) in bm.graph().relations() {
        let lean = lean_fit(d);
        write_matrix_csv(
            &dir.join(format!("leanfit_{}.csv", relation_file_stem(name))),
            &bool_string_rows(&lean),
        )?;
        relations.push(json!({"name": name, "image": lean.to_rows()}));
    }
    write_json(
        &dir.join("leanfit.json"),
        &json!({
            "block_labels": bm.graph().node_labels(),
            "block_sizes": bm.block_sizes(),
            "relations": relations,
        }),
    )?;
    println!(
        "lean-fit images over {} blocks: a tie wherever a block density is positive",
        bm.partition().num_blocks()
    );
    Ok(())
}

// ---------------------------------------------------------------------
// semigroups: boolean / truncated
// ---------------------------------------------------------------------

pub fn semigroup(cli: &Cli, args: &SemigroupArgs) -> Result<(), CliError> {
    let g = load_input(cli)?;
    let b = boolean_graph(&g)?;
    let dir = out_dir(cli)?;
    let s = generate_semigroup(b.relations(), args.cap)?;
    write_json(&dir.join("semigroup.json"), &semigroup_json(&s))?;
    let rendering = multiplication_table(&s);
    match args.table {
        TableFormat::Txt => write_text(&dir.join("table.txt"), &rendering.to_text())?,
        TableFormat::Json => write_json(
            &dir.join("table.json"),
            &serde_json::to_value(&rendering).expect("table rendering serializes"),
        )?,
    }
    println!("{}", semigroup_summary_text(&s));
    println!("{}", rendering.to_text());
    Ok(())
}

pub fn truncate(cli: &Cli, args: &TruncateArgs) -> Result<(), CliError> {
    let g = load_input(cli)?;
    let dir = out_dir(cli)?;
    let policy = parse_round(&args.round)?;
    let weighted = match &g {
        Graph::Boolean(b) => b.to_weighted(),
        Graph::Weighted(w) => w.clone(),
    };
    let s = generate_truncated(weighted.relations(), args.k, policy, args.cap)?;
    let report = truncated_report(&s);
    write_json(&dir.join("truncated.json"), &truncated_json(&s, &report))?;
    write_text(&dir.join("listing.txt"), &truncated_listing(&s, &report))?;
    println!(
        "truncated semigroup (k = {}, rounding = {}): {} elements; {} excluding generators; {} excluding generators and zero; stabilization depth {}; zero {}",
        s.k(),
        s.policy().describe(),
        report.count_all,
        report.count_excluding_generators,
        report.count_excluding_generators_and_zero,
        report.stabilization_depth,
        report.zero_status,
    );
    Ok(())
}

// ---------------------------------------------------------------------
// verification: hom / functor
// ---------------------------------------------------------------------

pub fn verify_hom(cli: &Cli, args: &VerifyHomArgs) -> Result<(), CliError> {
    let g = load_input(cli)?;
    let b = boolean_graph(&g)?;
    let dir = out_dir(cli)?;
    let p = load_partition_for(&g, &args.partition)?;
    let hom = induced_hom(b, &p, args.cap)?;
    write_json(&dir.join("hom.json"), &hom_json(&hom))?;
    println!(
        "homomorphism verified: {} source elements -> {} quotient elements; surjective: {}",
        hom.source().len(),
        hom.target().len(),
        yes_no(hom.is_surjective()),
    );
    Ok(())
}

pub fn verify_functor(cli: &Cli, args: &VerifyFunctorArgs) -> Result<(), CliError> {
    let g = load_input(cli)?;
    let b = boolean_graph(&g)?;
    let dir = out_dir(cli)?;
    let hierarchy = load_hierarchy(&args.hierarchy, g.node_labels())?;
    let report = check_functoriality(b, &hierarchy, args.cap)?;
    write_json(
        &dir.join("functor.json"),
        &serde_json::to_value(&report).expect("functoriality report serializes"),
    )?;
    if !report.all_pass {
        let failing: Vec<String> = report
            .triples
            .iter()
            .filter(|t| !t.pass)
            .map(|t| format!("({}, {}, {})", t.i, t.k, t.j))
            .collect();
        return Err(CliError::Verification(format!(
            "induced maps do not compose at level triple(s) {}",
            failing.join(", ")
        )));
    }
    println!(
        "functoriality verified across {} levels; semigroup sizes: {}",
        report.level_counts.len(),
        report
            .level_counts
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" -> "),
    );
    println!(
        "checked {} composition triple(s), all passing",
        report.triples.len()
    );
    Ok(())
}

// ---------------------------------------------------------------------
// report / fixtures
// ---------------------------------------------------------------------

pub fn report(cli: &Cli, args: &ReportArgs) -> Result<(), CliError> {
    let g = load_input(cli)?;
    let dir = out_dir(cli)?;
    let mut text = String::new();

    write_json(&dir.join("graph.json"), &graph_summary_json(&g))?;
    text.push_str("== graph ==\n");
    text.push_str(&graph_summary_text(&g));
    text.push('\n');

    let (p, provenance) = if let Some(path) = &args.partition {
        (
            load_partition_for(&g, path)?,
            format!("from {}", path.display()),
        )
    } else if let Some(k) = args.blocks {
        let d = distance_matrix(&g, args.metric.to_metric());
        (
            agglomerate(&d, &Target::NumBlocks(k))?,
            format!(
                "complete-linkage clustering, {} metric, {k} blocks",
                metric_name(args.metric.to_metric())
            ),
        )
    } else {
        (
            structural_partition(&g, None)?,
            "exact structural equivalence on all relations".to_string(),
        )
    };
    let partition_path = dir.join("partition.json");
    save_partition(&p, g.node_labels(), &partition_path)?;
    eprintln!("wrote {}", partition_path.display());
    text.push_str("\n== partition ==\n");
    text.push_str(&format!(
        "{} ({provenance})\n",
        partition_text(&p, g.node_labels())
    ));

    if let Graph::Boolean(b) = &g {
        let s = generate_semigroup(b.relations(), args.cap)?;
        write_json(&dir.join("semigroup.json"), &semigroup_json(&s))?;
        let rendering = multiplication_table(&s);
        write_text(&dir.join("table.txt"), &rendering.to_text())?;
        text.push_str("\n== semigroup ==\n");
        text.push_str(&semigroup_summary_text(&s));
        text.push('\n');
        text.push_str(&rendering.to_text());
        if !text.ends_with('\n') {
            text.push('\n');
        }
    }

    let (bm, _) = density_blockmodel(&g, &p)?;
    text.push_str("\n== densities ==\n");
    for (name, matrix) in bm.graph().relations() {
        write_matrix_csv(
            &dir.join(format!("density_{}.csv", relation_file_stem(name))),
            &matrix.to_string_rows(),
        )?;
        text.push_str(&format!("{name}:\n"));
        text.push_str(&matrix_text(&matrix.to_string_rows()));
        text.push('\n');
    }
    write_json(&dir.join("blockmodel.json"), &blockmodel_json(&bm))?;
    text.push_str(&format!("perfect: {}\n", yes_no(bm.is_perfect())));

    let mode = parse_delta(&args.delta)?;
    let auto_on_weighted = matches!((&mode, &g), (DeltaMode::Auto, Graph::Weighted(_)));
    if auto_on_weighted {
        let note = "images: skipped (--delta auto needs Boolean relations; pass a fixed --delta)";
        eprintln!("{note}");
        text.push_str(&format!("\n{note}\n"));
    } else {
        let outcomes = compute_images(&g, &bm, &mode)?;
        for o in &outcomes {
            write_matrix_csv(
                &dir.join(format!("image_{}.csv", relation_file_stem(&o.name))),
                &bool_string_rows(&o.image),
            )?;
        }
        write_json(&dir.join("image.json"), &image_summary_json(&bm, &outcomes))?;
        text.push_str(&format!("\n== images (deltas: {}) ==\n", deltas_text(&outcomes)));
        for o in &outcomes {
            text.push_str(&format!("{}:\n", o.name));
            text.push_str(&matrix_text(&bool_string_rows(&o.image)));
            text.push('\n');
        }
    }

    text.push_str("\n== lean fit ==\n");
    let mut lean_relations = Vec::new();
    for (name, d) in bm.graph().relations() {
        let lean = lean_fit(d);
        write_matrix_csv(
            &dir.join(format!("leanfit_{}.csv", relation_file_stem(name))),
            &bool_string_rows(&lean),
        )?;
        text.push_str(&format!("{name}:\n"));
        text.push_str(&matrix_text(&bool_string_rows(&lean)));
        text.push('\n');
        lean_relations.push(json!({"name": name, "image": lean.to_rows()}));
    }
    write_json(
        &dir.join("leanfit.json"),
        &json!({
            "block_labels": bm.graph().node_labels(),
            "block_sizes": bm.block_sizes(),
            "relations": lean_relations,
        }),
    )?;

    write_text(&dir.join("report.txt"), &text)?;
    print!("{text}");
    Ok(())
}

pub fn fixtures_cmd(cli: &Cli, args: &FixturesArgs) -> Result<(), CliError> {
    match &args.name {
        None => {
            for name in fixtures::names() {
                println!(
                    "{name:<14} {}",
                    fixtures::description(name).expect("every bundled fixture is described")
                );
            }
            Ok(())
        }
        Some(name) => {
            let dir = out_dir(cli)?;
            let written = fixtures::write(name, dir)?;
            for path in &written {
                eprintln!("wrote {}", path.display());
            }
            println!("fixture {name} written to {}", dir.display());
            Ok(())
        }
    }
}
