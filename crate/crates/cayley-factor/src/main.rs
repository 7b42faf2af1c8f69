use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cayley_factor::bench;
use cayley_factor::cayley;
use cayley_factor::edge_color::{Factorization, DEFAULT_BUDGET};
use cayley_factor::export::{self, FactorizationDoc, GraphDoc};
use cayley_factor::factorizer::{self, FactorizeOptions};
use cayley_factor::group;
use cayley_factor::groupspec::{self, GroupSpec};
use cayley_factor::Error;

#[derive(Parser)]
#[command(name = "cayley-factor", version, about = "1-factorizations of Cayley graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Factorize the Cayley graph of a group into perfect matchings
    Factorize {
        /// group spec, e.g. "Z4*Z3", "Q8", "perm:(0 1 2 3)", "table:path"
        #[arg(long)]
        spec: String,
        /// generators: element indices "1,5" and/or coordinate tuples "(1,1),(0,1)"
        #[arg(long)]
        gens: String,
        /// bypass the structured pipeline and use the exact solver
        #[arg(long)]
        exact: bool,
        /// exact-solver node budget
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// if the generators span a proper subgroup, factorize each coset component
        #[arg(long)]
        components: bool,
        /// write the factorization JSON here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// also write a DOT rendering here
        #[arg(long)]
        dot: Option<PathBuf>,
        /// stdout format when --out is not given
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Re-verify a factorization JSON against a graph JSON
    Verify {
        /// graph document (schema cayley-graph/1)
        graph: PathBuf,
        /// factorization document (schema cayley-factor/1)
        factorization: PathBuf,
    },
    /// Emit the Cayley graph itself, without factorizing
    Export {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        gens: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compare the pipeline against the exact solver over the group catalog
    Bench {
        /// only run the catalog group with exactly this name
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        trials: u32,
        #[arg(long, default_value_t = 200_000)]
        budget: u64,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::OutOfScope(_) | Error::NotDecomposable(_) => 2,
        Error::BudgetExceeded => 3,
        Error::Schema(_) => 4,
        _ => 1,
    }
}

fn write_or_print(path: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(Error::from),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn resolve(spec_text: &str, gens_text: &str) -> Result<(GroupSpec, Vec<usize>), Error> {
    let spec = groupspec::parse_group_spec(spec_text)?;
    let gens = groupspec::parse_generators(gens_text, &spec)?;
    Ok((spec, gens))
}

#[allow(clippy::too_many_arguments)]
fn cmd_factorize(
    spec_text: &str,
    gens_text: &str,
    exact: bool,
    budget: u64,
    components: bool,
    out: &Option<PathBuf>,
    dot: &Option<PathBuf>,
    format: Format,
) -> Result<(), Error> {
    let (spec, gens) = resolve(spec_text, gens_text)?;
    let g = &spec.group;
    let opts = FactorizeOptions { budget, force_exact: exact };

    let outcome = match factorizer::factorize_nilpotent(g, &gens, &opts) {
        Ok(o) => o,
        Err(Error::NotConnected) if components => factorize_components(g, &gens, &opts)?,
        Err(e) => return Err(e),
    };

    // the verifier runs fresh here; the pipeline's own verdict is not reused
    let gamma = cayley::build_cayley(g, &gens)?;
    let report = factorizer::verify_factorization(
        &gamma.to_simple(),
        gamma.valence,
        &outcome.factorization,
    );
    if !report.violations.is_empty() {
        for v in &report.violations {
            eprintln!("violation: {}", v);
        }
        return Err(Error::Internal("output failed verification".into()));
    }

    let doc = FactorizationDoc::new(
        spec.text.clone(),
        gens.clone(),
        gamma.valence,
        &outcome.factorization,
        outcome.certificate,
    );
    let json = export::to_json(&doc);
    if let Some(p) = dot {
        std::fs::write(p, export::factorization_to_dot(&doc, g.order()))?;
    }
    match (out, format) {
        (Some(_), _) => write_or_print(out, &json)?,
        (None, Format::Json) => print!("{}", json),
        (None, Format::Dot) => print!("{}", export::factorization_to_dot(&doc, g.order())),
    }
    eprintln!(
        "verified: {} classes on {} vertices, branch {:?}",
        doc.classes.len(),
        g.order(),
        doc.certificate.branch
    );
    Ok(())
}

/// Factorizes the component of the identity (a proper subgroup span) and
/// copies the result onto every coset.
fn factorize_components(
    g: &group::Group,
    gens: &[usize],
    opts: &FactorizeOptions,
) -> Result<factorizer::FactorizeOutcome, Error> {
    let span = group::generated_subgroup(g, gens);
    let (sub, embed) = group::subgroup_as_group(g, &span)?;
    let sub_gens: Vec<usize> = gens
        .iter()
        .map(|x| embed.binary_search(x).expect("generators lie in their span"))
        .collect();
    let sub_out = factorizer::factorize_nilpotent(&sub, &sub_gens, opts)?;
    let mapped = Factorization {
        classes: sub_out
            .factorization
            .classes
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&(x, y)| {
                        let (px, py) = (embed[x], embed[y]);
                        (px.min(py), px.max(py))
                    })
                    .collect()
            })
            .collect(),
    };
    let replicated = factorizer::replicate_over_cosets(g, &span, &mapped);
    Ok(factorizer::FactorizeOutcome {
        factorization: replicated,
        certificate: sub_out.certificate,
        stats: sub_out.stats,
    })
}

fn cmd_verify(graph_path: &PathBuf, fact_path: &PathBuf) -> Result<(), Error> {
    let graph_doc: GraphDoc = export::from_json(&std::fs::read_to_string(graph_path)?)?;
    let fact_doc: FactorizationDoc = export::from_json(&std::fs::read_to_string(fact_path)?)?;
    fact_doc.check_schema()?;
    let graph = graph_doc.to_graph()?;
    let report =
        factorizer::verify_factorization(&graph, fact_doc.valence, &fact_doc.factorization());
    let replay_ok = factorizer::replay_certificate(&fact_doc.certificate);
    if report.violations.is_empty() && replay_ok {
        eprintln!("ok: {} classes, certificate replays", fact_doc.classes.len());
        Ok(())
    } else {
        for v in &report.violations {
            eprintln!("violation: {}", v);
        }
        if !replay_ok {
            eprintln!("violation: certificate does not replay");
        }
        Err(Error::Internal(format!(
            "{} violations",
            report.violations.len() + usize::from(!replay_ok)
        )))
    }
}

fn cmd_export(
    spec_text: &str,
    gens_text: &str,
    out: &Option<PathBuf>,
    format: Format,
) -> Result<(), Error> {
    let (spec, gens) = resolve(spec_text, gens_text)?;
    let gamma = cayley::build_cayley(&spec.group, &gens)?;
    let g = gamma.to_simple();
    let text = match format {
        Format::Json => export::to_json(&GraphDoc::new(&g)),
        Format::Dot => export::graph_to_dot(&g, &spec.text),
    };
    write_or_print(out, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Factorize { spec, gens, exact, budget, components, out, dot, format } => {
            cmd_factorize(spec, gens, *exact, *budget, *components, out, dot, *format)
        }
        Cmd::Verify { graph, factorization } => cmd_verify(graph, factorization),
        Cmd::Export { spec, gens, out, format } => cmd_export(spec, gens, out, *format),
        Cmd::Bench { filter, seed, trials, budget } => {
            print!("{}", bench::run_bench(filter.as_deref(), *seed, *trials, *budget));
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}
