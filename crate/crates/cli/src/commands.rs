use std::fs;
use std::io::Write;
use std::path::Path;

use graphwalk_core::circuit::{
    build_layout_with, compile_step_with_layout, locality_audit, Circuit, CircuitDocument,
    EdgeOrder, GateCounts, LocalityReport,
};
use graphwalk_core::graph::{
    parse_graph, starify, EdgeId, Graph, GraphFormat, ParsedGraph, PolarityMap, StarifiedGraph,
};
use graphwalk_core::sim::{verify_step, EquivalenceReport, LEAKAGE_TOL};
use graphwalk_core::spectral::{
    complete_graph_report, numeric_star_eigenvalues, star_spectrum, StarReducedState, StarSpectrum,
};
use graphwalk_core::walk::{seeded_rng, SweepReport, Walk};
use graphwalk_core::Complex64;
use log::info;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{
    CompileArgs, CompleteArgs, Emit, GraphArgs, MarkArgs, OutArgs, SearchArgs, StarArgs, SweepArgs,
    VerifyArgs,
};
use crate::error::CliError;

/// Deviation allowed between the compiled circuit and the walk step.
pub const EQUIVALENCE_TOL: f64 = 1e-10;

pub fn run(command: crate::args::Command) -> Result<(), CliError> {
    use crate::args::Command::*;
    match command {
        Search(a) => search(a),
        Sweep(a) => sweep(a),
        AnalyzeStar(a) => analyze_star(a),
        AnalyzeComplete(a) => analyze_complete(a),
        Compile(a) => compile(a),
        Verify(a) => verify(a),
    }
}

fn emit(out: &OutArgs, text: &str) -> Result<(), CliError> {
    match &out.out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Write {
                    path: "<stdout>".into(),
                    source: e,
                }),
                _ => Ok(()),
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes")
}

fn load_graph(args: &GraphArgs) -> Result<ParsedGraph, CliError> {
    let text = fs::read_to_string(&args.graph).map_err(|source| CliError::Read {
        path: args.graph.clone(),
        source,
    })?;
    let format = match args.format {
        Some(f) => f.into(),
        None => infer_format(&args.graph),
    };
    Ok(parse_graph(&text, format)?)
}

fn infer_format(path: &Path) -> GraphFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => GraphFormat::Json,
        _ => GraphFormat::EdgeList,
    }
}

/// The graph the walk runs on, with its marking resolved to edge ids.
struct Target {
    graph: Graph,
    polarity: PolarityMap,
    marked: Vec<EdgeId>,
    labels: Vec<u64>,
    starified: Option<StarifiedGraph>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct EdgeReport {
    edge: EdgeId,
    #[serde(skip_serializing_if = "Option::is_none")]
    endpoints: Option<[u64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    node: Option<u64>,
}

impl Target {
    fn resolve(parsed: ParsedGraph, mark: &MarkArgs) -> Result<Self, CliError> {
        let label_node = |label: u64| {
            parsed
                .node_of_label(label)
                .ok_or_else(|| CliError::Config(format!("node {label} is not in the graph")))
        };
        if let Some(label) = mark.mark_node {
            let u = label_node(label)?;
            let s = starify(&parsed.graph);
            let polarity = PolarityMap::greedy(&s.graph);
            return Ok(Target {
                graph: s.graph.clone(),
                polarity,
                marked: vec![s.virtual_edge_of(u)],
                labels: parsed.labels,
                starified: Some(s),
            });
        }
        let marked = match mark.mark_edge.as_deref() {
            Some(&[a, b]) => {
                let (u, v) = (label_node(a)?, label_node(b)?);
                let e = parsed
                    .graph
                    .find_edge(u, v)
                    .ok_or_else(|| CliError::Config(format!("({a}, {b}) is not an edge")))?;
                vec![e]
            }
            Some(_) => unreachable!("clap enforces two values"),
            None => Vec::new(),
        };
        let polarity = match &parsed.coloring {
            Some(c) => PolarityMap::from_coloring(&parsed.graph, c)?,
            None => PolarityMap::greedy(&parsed.graph),
        };
        Ok(Target {
            graph: parsed.graph,
            polarity,
            marked,
            labels: parsed.labels,
            starified: None,
        })
    }

    fn require_mark(&self) -> Result<(), CliError> {
        if self.marked.is_empty() {
            return Err(CliError::Config(
                "one of --mark-edge or --mark-node is required".into(),
            ));
        }
        Ok(())
    }

    fn walk(&self) -> Result<Walk<'_>, CliError> {
        Ok(Walk::search_walk(
            &self.graph,
            &self.polarity,
            self.marked.clone(),
        )?)
    }

    fn describe(&self, e: EdgeId) -> EdgeReport {
        if let Some(s) = &self.starified {
            if let Some(u) = s.node_of_virtual_edge(e) {
                return EdgeReport {
                    edge: e,
                    endpoints: None,
                    node: Some(self.labels[u]),
                };
            }
        }
        let (u, v) = self.graph.edge(e);
        EdgeReport {
            edge: e,
            endpoints: Some([self.labels[u], self.labels[v]]),
            node: None,
        }
    }
}

#[derive(Debug, Serialize)]
struct SearchOutcome {
    #[serde(flatten)]
    edge: EdgeReport,
    marked: bool,
    calls: u64,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct SingleSearch {
    steps: usize,
    #[serde(flatten)]
    outcome: SearchOutcome,
}

#[derive(Debug, Serialize)]
struct SearchSummary {
    steps: usize,
    trials: u64,
    seed: u64,
    hits: u64,
    hit_rate: f64,
    mean_calls: f64,
    results: Vec<SearchOutcome>,
}

fn default_horizon(g: &Graph) -> usize {
    (2.0 * (2.0 * g.edge_count() as f64).sqrt()).ceil() as usize
}

fn search(a: SearchArgs) -> Result<(), CliError> {
    if a.trials == 0 {
        return Err(CliError::Config("--trials must be at least 1".into()));
    }
    if a.jobs == 0 {
        return Err(CliError::Config("--jobs must be at least 1".into()));
    }
    let target = Target::resolve(load_graph(&a.graph)?, &a.mark)?;
    target.require_mark()?;
    let walk = target.walk()?;
    let steps = match a.steps {
        Some(t) => t,
        None => {
            let horizon = a.t_max.unwrap_or_else(|| default_horizon(&target.graph));
            let report = walk.sweep(horizon)?;
            info!(
                "no --steps given: sweep up to {horizon} peaks at t={} (p={:.4})",
                report.t_star, report.p_star
            );
            report.t_star
        }
    };

    let sampler = walk.sampler(steps);
    let trial = |i: u64| -> Result<SearchOutcome, CliError> {
        let seed = a.seed.wrapping_add(i);
        let (edge, calls) = if a.guaranteed {
            let out = walk.guaranteed_search(steps, seed, a.cap)?;
            (out.edge, out.calls)
        } else {
            (sampler.sample(&mut seeded_rng(seed)), 1)
        };
        Ok(SearchOutcome {
            edge: target.describe(edge),
            marked: walk.oracle().is_marked(edge),
            calls,
            seed,
        })
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let mut results: Vec<SearchOutcome> = pool.install(|| {
        (0..a.trials)
            .into_par_iter()
            .map(trial)
            .collect::<Result<_, _>>()
    })?;

    let text = if results.len() == 1 {
        to_json(&SingleSearch {
            steps,
            outcome: results.remove(0),
        })
    } else {
        let hits = results.iter().filter(|r| r.marked).count() as u64;
        let calls: u64 = results.iter().map(|r| r.calls).sum();
        to_json(&SearchSummary {
            steps,
            trials: a.trials,
            seed: a.seed,
            hits,
            hit_rate: hits as f64 / a.trials as f64,
            mean_calls: calls as f64 / a.trials as f64,
            results,
        })
    };
    emit(&a.out, &text)
}

fn sweep(a: SweepArgs) -> Result<(), CliError> {
    let target = Target::resolve(load_graph(&a.graph)?, &a.mark)?;
    let report = target.walk()?.sweep(a.t_max)?;
    info!("T*={} P*={:.6}", report.t_star, report.p_star);
    let text = match a.emit {
        Emit::Csv => report.to_csv().trim_end().to_string(),
        Emit::Json => report.to_json(),
    };
    emit(&a.out, &text)
}

#[derive(Debug, Serialize)]
struct StarAnalysis {
    #[serde(flatten)]
    spectrum: StarSpectrum,
    numeric_eigenvalues: [Complex64; 3],
    /// First local maximum of the marked probability.
    first_peak_t: usize,
    first_peak_p: f64,
}

fn analyze_star(a: StarArgs) -> Result<(), CliError> {
    let spectrum = star_spectrum(a.m)?;
    let numeric_eigenvalues = numeric_star_eigenvalues(a.m)?;
    let horizon = (2.0 * spectrum.t_opt).ceil() as usize + 1;
    let mut state = StarReducedState::initial(a.m)?;
    let mut p = state.marked_probability();
    while state.t < horizon {
        let next = state.step();
        let q = next.marked_probability();
        if q <= p {
            break;
        }
        state = next;
        p = q;
    }
    emit(
        &a.out,
        &to_json(&StarAnalysis {
            spectrum,
            numeric_eigenvalues,
            first_peak_t: state.t,
            first_peak_p: p,
        }),
    )
}

#[derive(Debug, Serialize)]
struct CompleteAnalysis {
    n: usize,
    predicted_t: f64,
    t_star: usize,
    p_star: f64,
    report: SweepReport,
}

fn analyze_complete(a: CompleteArgs) -> Result<(), CliError> {
    let t_max = a.t_max.unwrap_or(2 * a.n);
    let report = complete_graph_report(a.n, t_max)?;
    emit(
        &a.out,
        &to_json(&CompleteAnalysis {
            n: a.n,
            predicted_t: report.predicted_t.unwrap_or_default(),
            t_star: report.t_star,
            p_star: report.p_star,
            report,
        }),
    )
}

#[derive(Debug, Serialize)]
struct CompileOutput {
    circuit: CircuitDocument,
    gate_counts: GateCounts,
    audit: LocalityReport,
}

fn compile(a: CompileArgs) -> Result<(), CliError> {
    let target = Target::resolve(load_graph(&a.graph)?, &a.mark)?;
    let order = a
        .shuffle_seed
        .map_or(EdgeOrder::Ascending, EdgeOrder::Shuffled);
    let layout = build_layout_with(&target.graph, &target.polarity, order)?;
    let circuit = compile_step_with_layout(layout, &target.marked)?;
    emit(
        &a.out,
        &to_json(&CompileOutput {
            gate_counts: circuit.gate_counts(),
            audit: locality_audit(&circuit),
            circuit: CircuitDocument::from(&circuit),
        }),
    )
}

#[derive(Debug, Serialize)]
struct VerifyOutput {
    #[serde(flatten)]
    report: EquivalenceReport,
    ancillas_restored: bool,
    tolerance: f64,
    passes: bool,
}

fn verify(a: VerifyArgs) -> Result<(), CliError> {
    let target = Target::resolve(load_graph(&a.graph)?, &a.mark)?;
    let circuit = match &a.circuit {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Read {
                path: path.clone(),
                source,
            })?;
            Circuit::from_json(&text)?
        }
        None => {
            let layout = build_layout_with(&target.graph, &target.polarity, EdgeOrder::Ascending)?;
            compile_step_with_layout(layout, &target.marked)?
        }
    };
    let walk = target.walk()?;
    let report = verify_step(&circuit, &walk)?;
    let passes = report.passes(EQUIVALENCE_TOL);
    emit(
        &a.out,
        &to_json(&VerifyOutput {
            report,
            ancillas_restored: report.max_leakage <= LEAKAGE_TOL,
            tolerance: EQUIVALENCE_TOL,
            passes,
        }),
    )?;
    if !passes {
        return Err(CliError::Equivalence(format!(
            "max deviation {:e}, leakage {:e}",
            report.max_deviation, report.max_leakage
        )));
    }
    Ok(())
}
